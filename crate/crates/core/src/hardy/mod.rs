//! Structured models of bounded and Smirnov-class analytic functions on the
//! disk, evaluated in the interior and on the boundary.
//!
//! A [`HardyExpr`] is a JSON-serializable expression tree. Logarithms are
//! always taken along the branch given by the structure (Herglotz integrals,
//! principal logs of right half-plane quantities), never as `log(eval(z))`.

mod certify;
mod inner;
mod outer;
mod schur;

use std::f64::consts::PI;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::boundary::{grid_angle, BoundarySpec};
use crate::config::GridConfig;
use crate::error::{Error, Result};
use crate::profile::WeightProfile;

pub use certify::{
    outer_deficit, power_fn, power_outer, DeficitReport, OuterStatus, PowerFnCertificate, PowerFnStatus,
};
pub(crate) use certify::declared_singular_mass;
pub use inner::{atom_kernel, blaschke_factor, InnerSpec, SingularAtom};
pub use outer::OuterSpec;
pub use schur::{disk_automorphism, SchurChain};

pub type C64 = Complex<f64>;

const ONE: C64 = C64 { re: 1.0, im: 0.0 };

/// Expression tree for an analytic function on the disk.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum HardyExpr {
    Constant {
        value: C64,
    },
    Inner(InnerSpec),
    Outer(OuterSpec),
    /// `1 - z`.
    OneMinusZ,
    /// `exp(-c (1 - z)^(-alpha))`, `c > 0`, `0 < alpha < 1`.
    ExpNegCPower {
        c: f64,
        alpha: f64,
    },
    /// `exp(-c / (1 - z))`: `exp(-c/2)` times the singular inner function
    /// with an atom of mass `c/2` at 1.
    ExpNegCOverGap {
        c: f64,
    },
    /// `coeff (1 + z) / (1 - z)`.
    Cayley {
        coeff: C64,
    },
    Schur(SchurChain),
    /// `offset + scale * inner`. When `half_plane_angle = a` is present the
    /// value is asserted to satisfy `Re(e^(-i a) f) > 0`, which fixes a
    /// logarithm.
    Affine {
        offset: C64,
        scale: C64,
        inner: Box<HardyExpr>,
        #[serde(default)]
        half_plane_angle: Option<f64>,
    },
    /// `base^exponent` along the structural logarithm of `base`.
    Power {
        base: Box<HardyExpr>,
        exponent: f64,
    },
    /// `exp(exponent * log base)`. The flags record the certificate issued
    /// at construction.
    PowerFn {
        base: Box<HardyExpr>,
        exponent: Box<HardyExpr>,
        #[serde(default)]
        certified_outer: bool,
        #[serde(default)]
        certified_bounded: bool,
    },
    Product {
        factors: Vec<HardyExpr>,
    },
    /// `coeff (1 + inner) / (1 - inner)` for `coeff > 0` and `|inner| < 1`,
    /// so the values lie in the right half plane.
    HalfPlane {
        coeff: f64,
        inner: Box<HardyExpr>,
    },
}

/// A model together with argument metadata used by the certificates.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HardyFunction {
    pub expr: HardyExpr,
    /// `arg f` on the circle is integrable.
    #[serde(default)]
    pub arg_l1: bool,
    /// `arg f` on the circle is bounded.
    #[serde(default)]
    pub arg_bounded: bool,
    #[serde(skip)]
    pub grid: GridConfig,
}

/// `2 sin(t/2)`, `|1 - e^(it)| = |gap_sin(t)|`.
fn gap_sin(t: f64) -> f64 {
    2.0 * (t / 2.0).sin()
}

/// Principal argument of `1 - e^(it)` for `t` in `[-pi, pi)`, `t != 0`.
fn arg_one_minus(t: f64) -> f64 {
    if t > 0.0 {
        (t - PI) / 2.0
    } else {
        (t + PI) / 2.0
    }
}

impl HardyExpr {
    pub fn validate(&self, grid: &GridConfig) -> Result<()> {
        match self {
            Self::Constant { value } => {
                if !value.is_finite() {
                    return Err(Error::Domain("constant must be finite".into()));
                }
            }
            Self::Inner(s) => s.validate()?,
            Self::Outer(o) => o.validate(grid)?,
            Self::OneMinusZ => {}
            Self::ExpNegCPower { c, alpha } => {
                if !(*c > 0.0 && c.is_finite() && *alpha > 0.0 && *alpha < 1.0) {
                    return Err(Error::Domain(format!("exp_neg_c_power needs c > 0 and 0 < alpha < 1, got c = {c}, alpha = {alpha}")));
                }
            }
            Self::ExpNegCOverGap { c } => {
                if !(*c > 0.0 && c.is_finite()) {
                    return Err(Error::Domain(format!("exp_neg_c_over_gap needs c > 0, got {c}")));
                }
            }
            Self::Cayley { coeff } => {
                if !coeff.is_finite() || coeff.norm() == 0.0 {
                    return Err(Error::Domain("cayley coefficient must be finite and nonzero".into()));
                }
            }
            Self::Schur(s) => s.validate()?,
            Self::Affine { offset, scale, inner, .. } => {
                if !offset.is_finite() || !scale.is_finite() {
                    return Err(Error::Domain("affine coefficients must be finite".into()));
                }
                inner.validate(grid)?;
            }
            Self::Power { base, exponent } => {
                if !(*exponent > 0.0 && exponent.is_finite()) {
                    return Err(Error::Domain(format!("power exponent must be positive, got {exponent}")));
                }
                base.validate(grid)?;
            }
            Self::PowerFn { base, exponent, .. } => {
                base.validate(grid)?;
                exponent.validate(grid)?;
            }
            Self::Product { factors } => {
                for f in factors {
                    f.validate(grid)?;
                }
            }
            Self::HalfPlane { coeff, inner } => {
                if !(*coeff > 0.0 && coeff.is_finite()) {
                    return Err(Error::Domain(format!("half-plane coefficient must be positive, got {coeff}")));
                }
                inner.validate(grid)?;
            }
        }
        Ok(())
    }

    pub fn eval(&self, z: C64, grid: &GridConfig) -> Result<C64> {
        check_disk(z)?;
        Ok(match self {
            Self::Constant { value } => *value,
            Self::Inner(s) => s.eval(z),
            Self::OneMinusZ => ONE - z,
            Self::Cayley { coeff } => *coeff * (ONE + z) / (ONE - z),
            Self::Schur(s) => s.eval(z),
            Self::Affine { offset, scale, inner, .. } => *offset + *scale * inner.eval(z, grid)?,
            Self::Product { factors } => {
                let mut acc = ONE;
                for f in factors {
                    acc *= f.eval(z, grid)?;
                }
                acc
            }
            Self::PowerFn { base, exponent, .. } => (exponent.eval(z, grid)? * base.log_eval(z, grid)?).exp(),
            Self::HalfPlane { coeff, inner } => cayley_of(*coeff, inner.eval(z, grid)?),
            _ => self.log_eval(z, grid)?.exp(),
        })
    }

    /// Structural logarithm. Fails with [`Error::NoLogarithm`] for nodes
    /// that may vanish (Blaschke factors, Schur chains, affine maps without
    /// a half-plane assertion).
    pub fn log_eval(&self, z: C64, grid: &GridConfig) -> Result<C64> {
        check_disk(z)?;
        match self {
            Self::Constant { value } => {
                if value.norm() == 0.0 {
                    return Err(Error::NoLogarithm("zero constant".into()));
                }
                Ok(value.ln())
            }
            Self::Inner(s) => {
                if !s.zeros.is_empty() {
                    return Err(Error::NoLogarithm("Blaschke factors vanish".into()));
                }
                Ok(s.singular_log(z))
            }
            Self::Outer(o) => o.log_at(z, grid),
            Self::OneMinusZ => Ok((ONE - z).ln()),
            Self::ExpNegCPower { c, alpha } => Ok(-(ONE - z).powf(-alpha) * *c),
            Self::ExpNegCOverGap { c } => Ok(-*c / (ONE - z)),
            Self::Cayley { coeff } => Ok(coeff.ln() + (ONE + z).ln() - (ONE - z).ln()),
            Self::Schur(_) => Err(Error::NoLogarithm("Schur chain may vanish".into())),
            Self::Affine { half_plane_angle, .. } => match half_plane_angle {
                Some(a) => {
                    let v = self.eval(z, grid)?;
                    half_plane_log(v, *a)
                }
                None => Err(Error::NoLogarithm("affine map without half-plane assertion".into())),
            },
            Self::Power { base, exponent } => Ok(base.log_eval(z, grid)? * *exponent),
            Self::PowerFn { base, exponent, .. } => Ok(exponent.eval(z, grid)? * base.log_eval(z, grid)?),
            Self::Product { factors } => {
                let mut acc = C64::new(0.0, 0.0);
                for f in factors {
                    acc += f.log_eval(z, grid)?;
                }
                Ok(acc)
            }
            Self::HalfPlane { .. } => half_plane_log(self.eval(z, grid)?, 0.0),
        }
    }

    /// `log |f(z)|`, finite even where `|f(z)|` underflows.
    pub fn log_modulus(&self, z: C64, grid: &GridConfig) -> Result<f64> {
        match self.log_eval(z, grid) {
            Ok(l) => Ok(l.re),
            Err(Error::NoLogarithm(_)) => match self {
                Self::Product { factors } => {
                    let mut acc = 0.0;
                    for f in factors {
                        acc += f.log_modulus(z, grid)?;
                    }
                    Ok(acc)
                }
                Self::Power { base, exponent } => Ok(exponent * base.log_modulus(z, grid)?),
                _ => Ok(self.eval(z, grid)?.norm().ln()),
            },
            Err(e) => Err(e),
        }
    }

    /// Boundary values of the structural logarithm on the `m`-point grid,
    /// half-shifted when `shifted` so that no node hits `t = 0`.
    pub fn boundary_log(&self, m: usize, shifted: bool, grid: &GridConfig) -> Result<Vec<C64>> {
        let ts: Vec<f64> = (0..m).map(|j| grid_angle::<f64>(m, j, shifted)).collect();
        let pointwise = |f: &dyn Fn(f64) -> C64| Ok(ts.iter().map(|t| f(*t)).collect());
        match self {
            Self::Constant { .. } => {
                let l = self.log_eval(C64::new(0.0, 0.0), grid)?;
                Ok(vec![l; m])
            }
            Self::Inner(s) => {
                if !s.zeros.is_empty() {
                    return Err(Error::NoLogarithm("Blaschke factors vanish".into()));
                }
                // (zeta + xi) / (zeta - xi) is purely imaginary on the circle
                pointwise(&|t| {
                    let xi = C64::from_polar(1.0, t);
                    let mut acc = C64::new(0.0, s.unimodular.arg());
                    for at in &s.atoms {
                        acc -= C64::new(0.0, atom_kernel(at.zeta, xi).im * at.mass);
                    }
                    acc
                })
            }
            Self::Outer(o) => o.boundary_log(m, shifted, grid),
            Self::OneMinusZ => pointwise(&|t| C64::new(gap_sin(t).abs().ln(), arg_one_minus(t))),
            Self::ExpNegCPower { c, alpha } => pointwise(&|t| {
                let base = C64::from_polar(gap_sin(t).abs().powf(-alpha), -alpha * arg_one_minus(t));
                -base * *c
            }),
            // 1 / (1 - e^(it)) = 1/2 + (i/2) cot(t/2)
            Self::ExpNegCOverGap { c } => pointwise(&|t| C64::new(-c / 2.0, -c / 2.0 / (t / 2.0).tan())),
            // (1 + e^(it)) / (1 - e^(it)) = i cot(t/2)
            Self::Cayley { coeff } => pointwise(&|t| {
                let cot = 1.0 / (t / 2.0).tan();
                coeff.ln() + C64::new(cot.abs().ln(), PI / 2.0 * cot.signum())
            }),
            Self::Schur(_) => Err(Error::NoLogarithm("Schur chain may vanish".into())),
            Self::Affine { half_plane_angle, .. } => match half_plane_angle {
                Some(a) => self.boundary_values(m, shifted, grid)?.into_iter().map(|v| half_plane_log(v, *a)).collect(),
                None => Err(Error::NoLogarithm("affine map without half-plane assertion".into())),
            },
            Self::Power { base, exponent } => Ok(base.boundary_log(m, shifted, grid)?.into_iter().map(|l| l * *exponent).collect()),
            Self::PowerFn { base, exponent, .. } => {
                let l = base.boundary_log(m, shifted, grid)?;
                let e = exponent.boundary_values(m, shifted, grid)?;
                Ok(l.iter().zip(&e).map(|(l, e)| l * e).collect())
            }
            Self::Product { factors } => {
                let mut acc = vec![C64::new(0.0, 0.0); m];
                for f in factors {
                    for (a, l) in acc.iter_mut().zip(f.boundary_log(m, shifted, grid)?) {
                        *a += l;
                    }
                }
                Ok(acc)
            }
            Self::HalfPlane { .. } => self.boundary_values(m, shifted, grid)?.into_iter().map(|v| half_plane_log(v, 0.0)).collect(),
        }
    }

    /// Boundary values on the `m`-point grid.
    pub fn boundary_values(&self, m: usize, shifted: bool, grid: &GridConfig) -> Result<Vec<C64>> {
        let xis: Vec<C64> = (0..m).map(|j| C64::from_polar(1.0, grid_angle::<f64>(m, j, shifted))).collect();
        match self {
            Self::Constant { value } => Ok(vec![*value; m]),
            Self::Inner(s) if !s.zeros.is_empty() => Ok(xis.iter().map(|xi| s.eval(*xi)).collect()),
            Self::OneMinusZ => Ok(xis.iter().map(|xi| ONE - xi).collect()),
            Self::Cayley { coeff } => Ok((0..m)
                .map(|j| *coeff * C64::new(0.0, 1.0 / (grid_angle::<f64>(m, j, shifted) / 2.0).tan()))
                .collect()),
            Self::Schur(s) => Ok(xis.iter().map(|xi| s.eval(*xi)).collect()),
            Self::Affine { offset, scale, inner, .. } => {
                Ok(inner.boundary_values(m, shifted, grid)?.into_iter().map(|v| *offset + *scale * v).collect())
            }
            Self::Product { factors } => {
                let mut acc = vec![ONE; m];
                for f in factors {
                    for (a, v) in acc.iter_mut().zip(f.boundary_values(m, shifted, grid)?) {
                        *a *= v;
                    }
                }
                Ok(acc)
            }
            Self::HalfPlane { coeff, inner } => {
                Ok(inner.boundary_values(m, shifted, grid)?.into_iter().map(|s| cayley_of(*coeff, s)).collect())
            }
            _ => Ok(self.boundary_log(m, shifted, grid)?.into_iter().map(|l| l.exp()).collect()),
        }
    }

    /// `log |f|` on the boundary grid.
    pub fn boundary_log_modulus(&self, m: usize, shifted: bool, grid: &GridConfig) -> Result<Vec<f64>> {
        match self {
            Self::Inner(_) => Ok(vec![0.0; m]),
            Self::Product { factors } => {
                let mut acc = vec![0.0; m];
                for f in factors {
                    for (a, v) in acc.iter_mut().zip(f.boundary_log_modulus(m, shifted, grid)?) {
                        *a += v;
                    }
                }
                Ok(acc)
            }
            Self::Power { base, exponent } => {
                Ok(base.boundary_log_modulus(m, shifted, grid)?.into_iter().map(|v| v * exponent).collect())
            }
            Self::Schur(_) | Self::Constant { .. } | Self::Cayley { .. } => {
                Ok(self.boundary_values(m, shifted, grid)?.into_iter().map(|v| v.norm().ln()).collect())
            }
            Self::Affine { half_plane_angle: None, .. } => {
                Ok(self.boundary_values(m, shifted, grid)?.into_iter().map(|v| v.norm().ln()).collect())
            }
            _ => Ok(self.boundary_log(m, shifted, grid)?.into_iter().map(|l| l.re).collect()),
        }
    }

    /// Whether the structure alone guarantees boundedness.
    pub fn is_bounded(&self) -> bool {
        match self {
            Self::Cayley { .. } => false,
            Self::Outer(o) => match &o.log_modulus {
                // -scale h with scale >= 0 is bounded above by 0
                BoundarySpec::Profile { scale, .. } => scale * o.scale >= 0.0,
                BoundarySpec::Grid(_) => true,
            },
            Self::Affine { inner, .. } => inner.is_bounded(),
            Self::Power { base, .. } => base.is_bounded(),
            Self::PowerFn { certified_bounded, .. } => *certified_bounded,
            Self::Product { factors } => factors.iter().all(|f| f.is_bounded()),
            // a finite chain with |tail| < 1 stays strictly inside the disk
            Self::HalfPlane { inner, .. } => matches!(inner.as_ref(), Self::Schur(s) if s.tail.norm() < 1.0),
            _ => true,
        }
    }
}

fn check_disk(z: C64) -> Result<()> {
    if !(z.norm() < 1.0) {
        return Err(Error::Domain(format!("point {z} is not inside the unit disk")));
    }
    Ok(())
}

fn cayley_of(coeff: f64, s: C64) -> C64 {
    (ONE + s) / (ONE - s) * coeff
}

/// `i a + Log(e^(-i a) v)` for `v` in the half plane `Re(e^(-i a) v) > 0`.
fn half_plane_log(v: C64, a: f64) -> Result<C64> {
    let rot = v * C64::from_polar(1.0, -a);
    if !(rot.re > 0.0) {
        return Err(Error::NoLogarithm(format!("value {v} left the half plane at angle {a}")));
    }
    Ok(rot.ln() + C64::new(0.0, a))
}

impl HardyFunction {
    pub fn new(expr: HardyExpr, arg_l1: bool, arg_bounded: bool) -> Result<Self> {
        let grid = GridConfig::from_env();
        expr.validate(&grid)?;
        Ok(Self {
            expr,
            arg_l1,
            arg_bounded,
            grid,
        })
    }

    pub fn with_grid(mut self, grid: GridConfig) -> Self {
        self.grid = grid;
        self
    }

    pub fn constant(value: C64) -> Result<Self> {
        Self::new(HardyExpr::Constant { value }, true, true)
    }

    pub fn inner(spec: InnerSpec) -> Result<Self> {
        Self::new(HardyExpr::Inner(spec), false, false)
    }

    pub fn one_minus_z() -> Self {
        Self::new(HardyExpr::OneMinusZ, true, true).expect("valid")
    }

    /// `exp(-c (1 - z)^(-alpha))`, a bounded outer function.
    pub fn exp_neg_c_power(c: f64, alpha: f64) -> Result<Self> {
        Self::new(HardyExpr::ExpNegCPower { c, alpha }, true, false)
    }

    /// `exp(-c / (1 - z))`, a constant times a singular inner function.
    pub fn exp_neg_c_over_gap(c: f64) -> Result<Self> {
        Self::new(HardyExpr::ExpNegCOverGap { c }, false, false)
    }

    pub fn cayley(coeff: C64) -> Result<Self> {
        Self::new(HardyExpr::Cayley { coeff }, true, true)
    }

    pub fn schur(chain: SchurChain) -> Result<Self> {
        Self::new(HardyExpr::Schur(chain), false, false)
    }

    /// Outer function with boundary log-modulus `W`.
    pub fn outer_from_log_modulus(w: BoundarySpec) -> Result<Self> {
        let (l1, bounded) = match &w {
            BoundarySpec::Profile { profile, .. } => (profile.zygmund(), profile.conjugate_bounded()),
            // bounded data lies in L log L, so its conjugate is integrable
            BoundarySpec::Grid(_) => (true, false),
        };
        Self::new(HardyExpr::Outer(OuterSpec::new(w, 1.0)), l1, bounded)
    }

    /// `exp(-scale * H[h(|t|)])` for a weight profile `h`.
    pub fn outer_from_profile(h: &WeightProfile, scale: f64, m: usize) -> Result<Self> {
        Self::outer_from_log_modulus(BoundarySpec::Profile {
            profile: h.clone(),
            m,
            scale,
        })
    }

    pub fn product(factors: Vec<HardyFunction>) -> Result<Self> {
        let l1 = factors.iter().all(|f| f.arg_l1);
        let b = factors.iter().all(|f| f.arg_bounded);
        Self::new(
            HardyExpr::Product {
                factors: factors.into_iter().map(|f| f.expr).collect(),
            },
            l1,
            b,
        )
    }

    pub fn eval(&self, z: C64) -> Result<C64> {
        self.expr.eval(z, &self.grid)
    }

    pub fn log_eval(&self, z: C64) -> Result<C64> {
        self.expr.log_eval(z, &self.grid)
    }

    pub fn log_modulus(&self, z: C64) -> Result<f64> {
        self.expr.log_modulus(z, &self.grid)
    }

    pub fn boundary_values(&self, m: usize) -> Result<Vec<C64>> {
        self.expr.boundary_values(m, true, &self.grid)
    }

    pub fn boundary_log_modulus(&self, m: usize) -> Result<Vec<f64>> {
        self.expr.boundary_log_modulus(m, true, &self.grid)
    }

    /// Largest `|f|` on the half-shifted `m`-point grid.
    pub fn boundary_sup(&self, m: usize) -> Result<f64> {
        Ok(self.boundary_log_modulus(m)?.into_iter().fold(f64::NEG_INFINITY, f64::max).exp())
    }

    /// Rows `theta,re,im,log_modulus` on the half-shifted grid.
    pub fn boundary_csv(&self, m: usize) -> Result<String> {
        use std::fmt::Write as _;
        let v = self.boundary_values(m)?;
        let l = self.boundary_log_modulus(m)?;
        let mut out = String::from("theta,re,im,log_modulus\n");
        for j in 0..m {
            let _ = writeln!(out, "{},{},{},{}", grid_angle::<f64>(m, j, true), v[j].re, v[j].im, l[j]);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests;
