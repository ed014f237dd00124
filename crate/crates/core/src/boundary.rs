//! Real functions on the unit circle sampled on the uniform grid
//! `theta_j = 2 pi j / M - pi`, with Poisson and Herglotz extensions, the
//! conjugate function and symmetric decreasing rearrangement.

use std::fmt::Write as _;
use std::sync::Arc;

use num_complex::Complex;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::config::GridConfig;
use crate::error::{Error, Result};
use crate::profile::WeightProfile;
use crate::quadrature::{wrap_angle, Breakpoint};
use crate::scalar::Real;

/// Pointwise definition of boundary data on `[-pi, pi)`.
pub type SourceFn<T> = Arc<dyn Fn(T) -> T + Send + Sync>;

/// Closed-form description kept alongside the samples so evaluators can
/// re-grid or switch to graded quadrature.
#[derive(Clone)]
pub struct BoundarySource<T> {
    pub f: SourceFn<T>,
    /// Points where `f` is singular or discontinuous.
    pub breakpoints: Vec<Breakpoint<T>>,
}

impl<T: std::fmt::Debug> std::fmt::Debug for BoundarySource<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("BoundarySource").field("breakpoints", &self.breakpoints).finish()
    }
}

/// Samples of a real function on the circle.
#[derive(Debug, Clone)]
pub struct BoundaryFunction<T> {
    samples: Vec<T>,
    symmetric: bool,
    source: Option<BoundarySource<T>>,
}

/// Serialized form: `{"M": 256, "values": [...], "symmetric": false}`.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GridRepr<T> {
    #[serde(rename = "M")]
    m: usize,
    values: Vec<T>,
    #[serde(default)]
    symmetric: bool,
}

impl<T: Real + Serialize> Serialize for BoundaryFunction<T> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GridRepr {
            m: self.samples.len(),
            values: self.samples.clone(),
            symmetric: self.symmetric,
        }
        .serialize(s)
    }
}

impl<'de, T: Real + Deserialize<'de>> Deserialize<'de> for BoundaryFunction<T> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = GridRepr::<T>::deserialize(d)?;
        if r.m != r.values.len() {
            return Err(D::Error::custom(format!("M = {} but {} values given", r.m, r.values.len())));
        }
        BoundaryFunction::from_samples(r.values, r.symmetric).map_err(D::Error::custom)
    }
}

/// Boundary data as accepted in problem files: explicit samples or a
/// negated, scaled weight profile `-scale * h(|t|)`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BoundarySpec {
    Grid(BoundaryFunction<f64>),
    Profile {
        profile: WeightProfile,
        #[serde(rename = "M", default = "default_m")]
        m: usize,
        #[serde(default = "one")]
        scale: f64,
    },
}

fn default_m() -> usize {
    GridConfig::default().default_m
}

fn one() -> f64 {
    1.0
}

impl BoundarySpec {
    pub fn build(&self, grid: &GridConfig) -> Result<BoundaryFunction<f64>> {
        match self {
            Self::Grid(f) => Ok(f.clone()),
            Self::Profile { profile, m, scale } => BoundaryFunction::from_profile(*m, profile, *scale, grid),
        }
    }
}

fn check_grid_size(m: usize) -> Result<()> {
    if m < 64 || !m.is_power_of_two() {
        return Err(Error::Domain(format!("grid size must be a power of two >= 64, got {m}")));
    }
    Ok(())
}

/// `theta_j = 2 pi j / M - pi`, or the half-shifted node when `shifted`.
pub fn grid_angle<T: Real>(m: usize, j: usize, shifted: bool) -> T {
    let two_pi = T::PI() + T::PI();
    let jj = if shifted { T::count(j) + T::lit(0.5) } else { T::count(j) };
    two_pi * jj / T::count(m) - T::PI()
}

impl<T: Real> BoundaryFunction<T> {
    /// Wraps explicit samples. `symmetric` asserts `f(-theta) = f(theta)`.
    pub fn from_samples(samples: Vec<T>, symmetric: bool) -> Result<Self> {
        check_grid_size(samples.len())?;
        if samples.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain("boundary samples must be finite".into()));
        }
        let f = Self {
            samples,
            symmetric,
            source: None,
        };
        if symmetric {
            let m = f.m();
            let tol = T::lit(1e-10);
            for j in 1..m / 2 {
                if (f.samples[j] - f.samples[m - j]).abs() > tol {
                    return Err(Error::Domain(format!("samples not symmetric at index {j}")));
                }
            }
        }
        Ok(f)
    }

    /// Samples a smooth function.
    pub fn from_fn<F>(m: usize, f: F) -> Result<Self>
    where
        F: Fn(T) -> T + Send + Sync + 'static,
    {
        Self::from_singular_fn(m, f, Vec::new(), &GridConfig::default())
    }

    /// Samples a function with integrable singularities or jumps at
    /// `breakpoints`. Non-finite samples are replaced by cell averages.
    pub fn from_singular_fn<F>(m: usize, f: F, breakpoints: Vec<Breakpoint<T>>, grid: &GridConfig) -> Result<Self>
    where
        F: Fn(T) -> T + Send + Sync + 'static,
    {
        check_grid_size(m)?;
        let f: SourceFn<T> = Arc::new(f);
        let source = BoundarySource { f, breakpoints };
        let samples = sample_source(&source, m, false, grid)?;
        Ok(Self {
            samples,
            symmetric: false,
            source: Some(source),
        })
    }

    /// `W(t) = -scale * h(|t|)` with the singularity at 0 integrated exactly.
    pub fn from_profile(m: usize, h: &WeightProfile, scale: T, grid: &GridConfig) -> Result<Self> {
        h.validate()?;
        let neg = -scale;
        let mut breakpoints = vec![
            Breakpoint {
                at: T::zero(),
                side_mass: Some(h.side_mass(neg)),
            },
            Breakpoint::plain(T::one()),
            Breakpoint::plain(-T::one()),
        ];
        for x in h.jumps() {
            breakpoints.push(Breakpoint::plain(T::lit(x)));
            breakpoints.push(Breakpoint::plain(T::lit(-x)));
        }
        let hh = h.clone();
        let mut f = Self::from_singular_fn(m, move |t: T| neg * hh.eval(t), breakpoints, grid)?;
        f.symmetric = true;
        Ok(f)
    }

    pub fn constant(m: usize, c: T) -> Result<Self> {
        let mut f = Self::from_fn(m, move |_| c)?;
        f.symmetric = true;
        Ok(f)
    }

    pub fn m(&self) -> usize {
        self.samples.len()
    }

    pub fn samples(&self) -> &[T] {
        &self.samples
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn source(&self) -> Option<&BoundarySource<T>> {
        self.source.as_ref()
    }

    pub fn theta(&self, j: usize) -> T {
        grid_angle(self.m(), j, false)
    }

    /// Grid mean, i.e. the rectangle rule for `(1 / 2 pi) integral f`.
    pub fn mean(&self) -> T {
        self.samples.iter().fold(T::zero(), |a, b| a + *b) / T::count(self.m())
    }

    pub fn max(&self) -> T {
        self.samples.iter().copied().fold(T::neg_infinity(), T::max)
    }

    pub fn min(&self) -> T {
        self.samples.iter().copied().fold(T::infinity(), T::min)
    }

    /// Same data on an `m`-point grid: exact resampling when a source is
    /// known, trigonometric interpolation otherwise.
    pub fn regrid(&self, m: usize, grid: &GridConfig) -> Result<Self> {
        check_grid_size(m)?;
        if m == self.m() {
            return Ok(self.clone());
        }
        let samples = match &self.source {
            Some(src) => sample_source(src, m, false, grid)?,
            None => trig_resample(&self.samples, m),
        };
        Ok(Self {
            samples,
            symmetric: self.symmetric,
            source: self.source.clone(),
        })
    }

    /// Values on the `m`-point grid, half-shifted when `shifted`: exact
    /// sampling (with cell averages at singular points) when a source is
    /// known, trigonometric interpolation otherwise.
    pub fn samples_on(&self, m: usize, shifted: bool, grid: &GridConfig) -> Result<Vec<T>> {
        check_grid_size(m)?;
        match &self.source {
            Some(src) => sample_source(src, m, shifted, grid),
            None => {
                let v = if m == self.m() { self.samples.clone() } else { trig_resample(&self.samples, m) };
                Ok(if shifted { half_shift(&v) } else { v })
            }
        }
    }

    /// Rows `theta,value` for plotting.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("theta,value\n");
        for (j, v) in self.samples.iter().enumerate() {
            let _ = writeln!(out, "{},{}", self.theta(j), v);
        }
        out
    }
}

pub(crate) fn sample_source<T: Real>(src: &BoundarySource<T>, m: usize, shifted: bool, grid: &GridConfig) -> Result<Vec<T>> {
    let cell = (T::PI() + T::PI()) / T::count(m);
    let half = cell / T::lit(2.0);
    let q = grid.graded::<T>();
    let one = |_t: T| Complex::new(T::one(), T::zero());
    let f = |t: T| (src.f)(wrap_angle(t));
    let mut out = Vec::with_capacity(m);
    for j in 0..m {
        let t = grid_angle::<T>(m, j, shifted);
        let v = f(t);
        if v.is_finite() {
            out.push(v);
            continue;
        }
        let mass = src
            .breakpoints
            .iter()
            .find(|b| (wrap_angle(b.at) - t).abs() <= T::lit(1e-14))
            .and_then(|b| b.side_mass.as_ref());
        let right = q.toward(t, t + half, &one, &f, mass);
        let left = q.toward(t, t - half, &one, &f, mass);
        let avg = (right.re - left.re) / cell;
        if !avg.is_finite() {
            return Err(Error::Integrability(format!("boundary data not integrable near theta = {t}")));
        }
        out.push(avg);
    }
    Ok(out)
}

/// Band-limited resampling through the FFT (zero padding or truncation).
fn trig_resample<T: Real>(samples: &[T], m: usize) -> Vec<T> {
    let n = samples.len();
    let mut planner = FftPlanner::<T>::new();
    // the grid starts at -pi, which multiplies coefficient k by (-1)^k; undo
    // that before moving coefficients and redo it after
    let mut buf: Vec<Complex<T>> = samples.iter().map(|v| Complex::new(*v, T::zero())).collect();
    planner.plan_fft_forward(n).process(&mut buf);
    let mut spec = vec![Complex::new(T::zero(), T::zero()); m];
    let keep = n.min(m) / 2;
    let sign = |k: usize| if k.is_multiple_of(2) { T::one() } else { -T::one() };
    for k in 0..keep {
        spec[k] = buf[k] * sign(k);
        if k > 0 {
            spec[m - k] = buf[n - k] * sign(k);
        }
    }
    // split the Nyquist term of the shorter grid evenly
    if m > n {
        let nyq = buf[n / 2] * sign(n / 2) / T::lit(2.0);
        spec[n / 2] = nyq;
        spec[m - n / 2] = nyq;
    }
    for (k, c) in spec.iter_mut().enumerate() {
        let kk = if k <= m / 2 { k } else { m - k };
        *c = *c * sign(kk);
    }
    planner.plan_fft_inverse(m).process(&mut spec);
    let scale = T::count(n);
    spec.into_iter().map(|c| c.re / scale).collect()
}

/// Trigonometric interpolant evaluated half a cell to the right.
fn half_shift<T: Real>(samples: &[T]) -> Vec<T> {
    let m = samples.len();
    let mut planner = FftPlanner::<T>::new();
    let mut buf: Vec<Complex<T>> = samples.iter().map(|v| Complex::new(*v, T::zero())).collect();
    planner.plan_fft_forward(m).process(&mut buf);
    let step = T::PI() / T::count(m);
    for (k, c) in buf.iter_mut().enumerate() {
        *c = if 2 * k == m {
            // real-valued choice for the Nyquist mode
            *c * (step * T::count(k)).cos()
        } else {
            let kk = if 2 * k < m { T::count(k) } else { -T::count(m - k) };
            *c * Complex::from_polar(T::one(), step * kk)
        };
    }
    planner.plan_fft_inverse(m).process(&mut buf);
    let scale = T::count(m);
    buf.into_iter().map(|c| c.re / scale).collect()
}

/// `|e^{it} - z|^2` without cancellation near the circle.
fn gap_sq<T: Real>(rho: T, phi: T, t: T) -> T {
    let s = ((t - phi) / T::lit(2.0)).sin();
    let g = T::one() - rho;
    g * g + T::lit(4.0) * rho * s * s
}

/// Herglotz kernel `(e^{it} + z) / (e^{it} - z)`.
pub fn herglotz_kernel<T: Real>(z: Complex<T>, t: T) -> Complex<T> {
    let (rho, phi) = (z.norm(), z.arg());
    let d = gap_sq(rho, phi, t);
    let g = T::one() - rho;
    Complex::new(g * (T::one() + rho), T::lit(2.0) * rho * (phi - t).sin()) / d
}

/// Poisson kernel `P(z, e^{it})`.
pub fn poisson_kernel_at<T: Real>(z: Complex<T>, t: T) -> T {
    let (rho, phi) = (z.norm(), z.arg());
    let g = T::one() - rho;
    g * (T::one() + rho) / gap_sq(rho, phi, t)
}

fn check_disk<T: Real>(z: Complex<T>) -> Result<()> {
    if !(z.norm() < T::one()) {
        return Err(Error::Domain(format!("point {z} is not inside the unit disk")));
    }
    Ok(())
}

/// `(1 / 2 pi) integral K(z, t) f(t) dt` for the Herglotz kernel; the Poisson
/// extension is its real part.
fn kernel_integral<T: Real>(f: &BoundaryFunction<T>, z: Complex<T>, grid: &GridConfig) -> Result<Complex<T>> {
    check_disk(z)?;
    let rho = z.norm();
    let two_pi = T::PI() + T::PI();
    let graded = |src: &BoundarySource<T>| {
        let q = grid.graded::<T>();
        let mut bps = src.breakpoints.clone();
        if rho > T::zero() {
            bps.push(Breakpoint::plain(z.arg()));
        }
        let kernel = |t: T| herglotz_kernel(z, t);
        let weight = |t: T| (src.f)(t);
        q.circle(&kernel, &weight, &bps) / two_pi
    };
    if let Some(src) = &f.source {
        if !src.breakpoints.is_empty() {
            return Ok(graded(src));
        }
    }
    let need = grid.required_m(rho.to_f64_lossy());
    let rect = |samples: &[T]| {
        let m = samples.len();
        let mut acc = Complex::new(T::zero(), T::zero());
        for (j, v) in samples.iter().enumerate() {
            acc = acc + herglotz_kernel(z, grid_angle::<T>(m, j, false)) * *v;
        }
        acc / T::count(m)
    };
    if f.m() >= need {
        return Ok(rect(&f.samples));
    }
    if !grid.refine {
        return Err(Error::Accuracy(format!(
            "grid of {} points is too coarse at |z| = {rho}; {need} needed",
            f.m()
        )));
    }
    if need <= grid.max_m {
        return Ok(rect(&f.regrid(need, grid)?.samples));
    }
    match &f.source {
        Some(src) => Ok(graded(src)),
        None => Err(Error::Accuracy(format!(
            "|z| = {rho} needs {need} grid points, above the cap of {}",
            grid.max_m
        ))),
    }
}

/// Poisson extension of `f` to `z`.
pub fn poisson_eval<T: Real>(f: &BoundaryFunction<T>, z: Complex<T>, grid: &GridConfig) -> Result<T> {
    Ok(kernel_integral(f, z, grid)?.re)
}

/// Herglotz integral `(1 / 2 pi) integral (xi + z) / (xi - z) W(xi)`; its real
/// part is the Poisson extension of `W` and its value at 0 is the mean.
pub fn herglotz_eval<T: Real>(w: &BoundaryFunction<T>, z: Complex<T>, grid: &GridConfig) -> Result<Complex<T>> {
    kernel_integral(w, z, grid)
}

/// Circle conjugate by the Fourier multiplier `-i sign(n)`; the Nyquist
/// coefficient is dropped. Accurate for smooth data only: jumps produce
/// logarithmic spikes that the grid resolves to O(1/M).
pub fn conjugate_function<T: Real>(w: &BoundaryFunction<T>) -> BoundaryFunction<T> {
    BoundaryFunction {
        samples: conjugate_samples(&w.samples),
        symmetric: false,
        source: None,
    }
}

pub(crate) fn conjugate_samples<T: Real>(samples: &[T]) -> Vec<T> {
    let m = samples.len();
    let mut planner = FftPlanner::<T>::new();
    let mut buf: Vec<Complex<T>> = samples.iter().map(|v| Complex::new(*v, T::zero())).collect();
    planner.plan_fft_forward(m).process(&mut buf);
    let zero = Complex::new(T::zero(), T::zero());
    let minus_i = Complex::new(T::zero(), -T::one());
    for (k, c) in buf.iter_mut().enumerate() {
        *c = if k == 0 || 2 * k == m {
            zero
        } else if 2 * k < m {
            *c * minus_i
        } else {
            *c * -minus_i
        };
    }
    planner.plan_fft_inverse(m).process(&mut buf);
    let scale = T::count(m);
    buf.into_iter().map(|c| c.re / scale).collect()
}

/// Symmetric decreasing rearrangement on the grid.
#[derive(Debug, Clone, Serialize)]
pub struct RearrangementResult<T> {
    pub star_samples: Vec<T>,
    /// `star_samples[j] = input[permutation[j]]`.
    pub permutation: Vec<usize>,
    /// `max |f*(theta) - f*(-theta)|`. A permutation of an odd number of
    /// distinct values cannot be exactly symmetric, so this is generally
    /// nonzero but bounded by the gap between consecutive sorted values.
    pub max_asymmetry: T,
}

/// Grid positions in order of increasing `|theta|`: `0, +h, -h, +2h, ..., -pi`.
fn centre_out_order(m: usize) -> Vec<usize> {
    let c = m / 2;
    let mut order = Vec::with_capacity(m);
    order.push(c);
    for k in 1..c {
        order.push(c + k);
        order.push(c - k);
    }
    order.push(0);
    order
}

/// Places the values of `|f|` in decreasing order at increasing `|theta|`.
/// Ties are broken by original index.
pub fn rearrange_decreasing<T: Real>(f: &BoundaryFunction<T>) -> Result<RearrangementResult<T>> {
    if let Some(j) = f.samples.iter().position(|v| *v < T::zero()) {
        return Err(Error::Domain(format!("rearrangement needs nonnegative data, sample {j} is negative")));
    }
    let m = f.m();
    let mut idx: Vec<usize> = (0..m).collect();
    idx.sort_by(|a, b| {
        f.samples[*b]
            .partial_cmp(&f.samples[*a])
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.cmp(b))
    });
    let order = centre_out_order(m);
    let mut star = vec![T::zero(); m];
    let mut permutation = vec![0; m];
    for (pos, src) in order.iter().zip(&idx) {
        star[*pos] = f.samples[*src];
        permutation[*pos] = *src;
    }
    let mut max_asymmetry = T::zero();
    for j in 1..m / 2 {
        max_asymmetry = max_asymmetry.max((star[j] - star[m - j]).abs());
    }
    Ok(RearrangementResult {
        star_samples: star,
        permutation,
        max_asymmetry,
    })
}

/// Outcome of comparing `integral f g` with `integral f* g*`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct HlPairing<T> {
    pub lhs: T,
    pub rhs: T,
    pub holds: bool,
}

/// `lhs = 2 pi mean(f g)`, `rhs = 2 pi mean(f* g*)`.
pub fn hl_pairing_check<T: Real>(f: &BoundaryFunction<T>, g: &BoundaryFunction<T>) -> Result<HlPairing<T>> {
    if f.m() != g.m() {
        return Err(Error::GridMismatch {
            left: f.m(),
            right: g.m(),
        });
    }
    let fs = rearrange_decreasing(f)?;
    let gs = rearrange_decreasing(g)?;
    let two_pi = T::PI() + T::PI();
    let m = T::count(f.m());
    let dot = |a: &[T], b: &[T]| a.iter().zip(b).fold(T::zero(), |acc, (x, y)| acc + *x * *y);
    let lhs = two_pi * dot(&f.samples, &g.samples) / m;
    let rhs = two_pi * dot(&fs.star_samples, &gs.star_samples) / m;
    Ok(HlPairing {
        lhs,
        rhs,
        holds: lhs <= rhs + T::lit(1e-12),
    })
}
