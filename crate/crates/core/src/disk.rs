//! Pseudo-hyperbolic geometry of the unit disk and separation constants of
//! finite point sequences.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Default distance kept between sample points and the unit circle.
pub const DEFAULT_BOUNDARY_GUARD: f64 = 1e-12;

/// `|z - w| / |1 - conj(w) z|`.
pub fn pseudo_hyperbolic<T: Real>(z: Complex<T>, w: Complex<T>) -> Result<T> {
    if z.norm() >= T::one() || w.norm() >= T::one() {
        return Err(Error::Domain(format!(
            "pseudo-hyperbolic distance needs |z|, |w| < 1 (got {}, {})",
            z.norm(),
            w.norm()
        )));
    }
    Ok(pseudo_hyperbolic_unchecked(z, w))
}

#[inline]
pub(crate) fn pseudo_hyperbolic_unchecked<T: Real>(z: Complex<T>, w: Complex<T>) -> T {
    let num = (z - w).norm();
    if num == T::zero() {
        return T::zero();
    }
    num / (Complex::new(T::one(), T::zero()) - w.conj() * z).norm()
}

/// Finite list of distinct points of the open disk.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSequence<T: Real> {
    points: Vec<Complex<T>>,
    real_increasing: bool,
}

impl<T: Real> PointSequence<T> {
    pub fn new(points: Vec<Complex<T>>) -> Result<Self> {
        Self::with_guard(points, T::lit(DEFAULT_BOUNDARY_GUARD))
    }

    /// Builds a sequence, rejecting points within `guard` of the circle and
    /// repeated points.
    pub fn with_guard(points: Vec<Complex<T>>, guard: T) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Domain("point sequence must be nonempty".into()));
        }
        let limit = T::one() - guard;
        for (i, p) in points.iter().enumerate() {
            if !(p.re.is_finite() && p.im.is_finite()) || p.norm() >= limit {
                return Err(Error::Domain(format!(
                    "point {i} = ({}, {}) is not inside the guarded disk |z| < {}",
                    p.re, p.im, limit
                )));
            }
        }
        for i in 0..points.len() {
            for j in 0..i {
                if pseudo_hyperbolic_unchecked(points[i], points[j]) == T::zero() {
                    return Err(Error::Domain(format!("points {j} and {i} coincide")));
                }
            }
        }
        let real_increasing = points
            .iter()
            .all(|p| p.im == T::zero() && p.re > T::zero() && p.re < T::one())
            && points.windows(2).all(|w| w[0].re < w[1].re);
        Ok(Self {
            points,
            real_increasing,
        })
    }

    pub fn from_reals(xs: &[T]) -> Result<Self> {
        Self::new(xs.iter().map(|&x| Complex::new(x, T::zero())).collect())
    }

    /// `lambda_n = 1 - ratio^n` for `n = 1..=count`.
    pub fn exponential(ratio: T, count: usize) -> Result<Self> {
        if !(ratio > T::zero() && ratio < T::one()) {
            return Err(Error::Domain(format!("exponential ratio {ratio} not in (0,1)")));
        }
        let xs: Vec<T> = (1..=count)
            .map(|n| T::one() - ratio.powi(n as i32))
            .collect();
        Self::from_reals(&xs)
    }

    pub fn points(&self) -> &[Complex<T>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn is_real_increasing(&self) -> bool {
        self.real_increasing
    }

    /// Copy with one point removed; `None` when that would empty the sequence.
    pub fn without(&self, index: usize) -> Option<Self> {
        if self.points.len() < 2 || index >= self.points.len() {
            return None;
        }
        let mut pts = self.points.clone();
        pts.remove(index);
        Self::new(pts).ok()
    }
}

/// Separation data of a point sequence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeparationReport<T> {
    pub delta: T,
    pub per_point_products: Vec<T>,
    pub exponential_ratio: Option<T>,
    pub carleson_seed: T,
}

/// Uniform separation constant: the smallest of the products
/// `prod_{k != n} rho(lambda_k, lambda_n)`.
pub fn separation_delta<T: Real>(seq: &PointSequence<T>) -> SeparationReport<T> {
    let pts = seq.points();
    let per_point_products: Vec<T> = (0..pts.len())
        .map(|n| {
            pts.iter()
                .enumerate()
                .filter(|&(k, _)| k != n)
                .fold(T::one(), |acc, (_, &p)| acc * pseudo_hyperbolic_unchecked(p, pts[n]))
        })
        .collect();
    let delta = per_point_products
        .iter()
        .copied()
        .fold(T::one(), |a, b| if b < a { b } else { a });
    let exponential_ratio = exponential_ratio(seq).ok().flatten();
    let carleson_seed = carleson_seed(delta).unwrap_or(T::zero());
    SeparationReport {
        delta,
        per_point_products,
        exponential_ratio,
        carleson_seed,
    }
}

/// `max_n (1 - lambda_{n+1}) / (1 - lambda_n)` for a real increasing sequence.
pub fn exponential_ratio<T: Real>(seq: &PointSequence<T>) -> Result<Option<T>> {
    if !seq.is_real_increasing() {
        return Err(Error::Contract(
            "exponential ratio needs a real increasing sequence in (0,1)".into(),
        ));
    }
    Ok(seq
        .points()
        .windows(2)
        .map(|w| (T::one() - w[1].re) / (T::one() - w[0].re))
        .fold(None, |acc: Option<T>, x| Some(acc.map_or(x, |a| a.max(x)))))
}

/// Conservative starting value `delta^2 / 4` for the working interpolation
/// index. It certifies nothing by itself; pipelines validate every instance.
pub fn carleson_seed<T: Real>(delta: T) -> Result<T> {
    if !(delta > T::zero() && delta <= T::one()) {
        return Err(Error::Domain(format!("delta {delta} outside (0, 1]")));
    }
    Ok(delta * delta / T::lit(4.0))
}

/// Wire form of a point sequence: explicit `[re, im]` pairs or a generator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PointSequenceSpec {
    Pairs(Vec<[f64; 2]>),
    Generator(PointGenerator),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointGenerator {
    pub family: PointFamily,
    pub ratio: f64,
    pub count: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PointFamily {
    Exponential,
}

impl PointSequenceSpec {
    pub fn build(&self) -> Result<PointSequence<f64>> {
        match self {
            PointSequenceSpec::Pairs(p) => {
                PointSequence::new(p.iter().map(|&[re, im]| Complex::new(re, im)).collect())
            }
            PointSequenceSpec::Generator(g) => match g.family {
                PointFamily::Exponential => PointSequence::exponential(g.ratio, g.count),
            },
        }
    }
}

impl PointSequence<f64> {
    pub fn to_spec(&self) -> PointSequenceSpec {
        PointSequenceSpec::Pairs(self.points.iter().map(|p| [p.re, p.im]).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn pseudo_hyperbolic_examples() {
        let w = c(0.3, -0.4);
        assert!((pseudo_hyperbolic(c(0.0, 0.0), w).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(pseudo_hyperbolic(w, w).unwrap(), 0.0);
        assert!((pseudo_hyperbolic(c(0.5, 0.0), c(0.8, 0.0)).unwrap() - 0.5).abs() < 1e-15);
        assert!(pseudo_hyperbolic(c(1.0, 0.0), w).is_err());
    }

    #[test]
    fn separation_examples() {
        let one = PointSequence::from_reals(&[0.5]).unwrap();
        assert_eq!(separation_delta(&one).delta, 1.0);
        let two = PointSequence::<f64>::from_reals(&[0.0, 0.5]).unwrap();
        assert!((separation_delta(&two).delta - 0.5).abs() < 1e-15);

        let seq = PointSequence::<f64>::exponential(0.5, 10).unwrap();
        let pts = seq.points();
        // brute-force double loop
        let mut best = f64::INFINITY;
        for n in 0..pts.len() {
            let mut prod = 1.0;
            for k in 0..pts.len() {
                if k != n {
                    let (a, b) = (pts[k].re, pts[n].re);
                    prod *= (a - b).abs() / (1.0 - a * b).abs();
                }
            }
            best = best.min(prod);
        }
        let rep = separation_delta(&seq);
        assert!((rep.delta - best).abs() < 1e-14);
        assert!(rep.carleson_seed > 0.0 && rep.carleson_seed <= rep.delta);
    }

    #[test]
    fn exponential_ratio_examples() {
        let seq = PointSequence::<f64>::exponential(0.5, 12).unwrap();
        assert!((exponential_ratio(&seq).unwrap().unwrap() - 0.5).abs() < 1e-12);
        let xs: Vec<f64> = (2..=50).map(|n| 1.0 - 1.0 / n as f64).collect();
        let slow = PointSequence::from_reals(&xs).unwrap();
        assert!(exponential_ratio(&slow).unwrap().unwrap() >= 0.97);
        let single = PointSequence::from_reals(&[0.3]).unwrap();
        assert_eq!(exponential_ratio(&single).unwrap(), None);
        let complex = PointSequence::new(vec![c(0.1, 0.2)]).unwrap();
        assert!(matches!(exponential_ratio(&complex), Err(Error::Contract(_))));
    }

    #[test]
    fn carleson_seed_examples() {
        assert_eq!(carleson_seed(1.0).unwrap(), 0.25);
        assert_eq!(carleson_seed(0.5).unwrap(), 0.0625);
        assert!((carleson_seed(0.9f64).unwrap() - 0.2025).abs() < 1e-15);
        assert!(carleson_seed(0.0).is_err());
        assert!(carleson_seed(1.5).is_err());
    }

    #[test]
    fn rejects_bad_sequences() {
        assert!(PointSequence::<f64>::new(vec![]).is_err());
        assert!(PointSequence::from_reals(&[0.2, 0.2]).is_err());
        assert!(PointSequence::from_reals(&[1.0 - 1e-13]).is_err());
    }

    #[test]
    fn generic_over_f32() {
        let seq = PointSequence::<f32>::exponential(0.5, 6).unwrap();
        let rep = separation_delta(&seq);
        let rep64 = separation_delta(&PointSequence::<f64>::exponential(0.5, 6).unwrap());
        assert!((rep.delta as f64 - rep64.delta).abs() < 1e-5);
    }

    #[test]
    fn spec_round_trip() {
        let json = r#"{"family":"exponential","ratio":0.5,"count":12}"#;
        let spec: PointSequenceSpec = serde_json::from_str(json).unwrap();
        assert_eq!(spec.build().unwrap().len(), 12);
        let pairs: PointSequenceSpec = serde_json::from_str("[[0.1,0.2],[0.3,0.0]]").unwrap();
        assert_eq!(pairs.build().unwrap().points()[0], c(0.1, 0.2));
    }

    fn disk_point() -> impl Strategy<Value = Complex<f64>> {
        (0.0f64..0.95, -std::f64::consts::PI..std::f64::consts::PI).prop_map(|(r, t)| Complex::from_polar(r, t))
    }

    proptest! {
        #[test]
        fn metric_triangle(a in disk_point(), b in disk_point(), cc in disk_point()) {
            let ab = pseudo_hyperbolic(a, b).unwrap();
            let bc = pseudo_hyperbolic(b, cc).unwrap();
            let ac = pseudo_hyperbolic(a, cc).unwrap();
            prop_assert!((ab - pseudo_hyperbolic(b, a).unwrap()).abs() < 1e-15);
            prop_assert!(ac <= (ab + bc) / (1.0 + ab * bc) + 1e-12);
        }

        #[test]
        fn separation_invariances(pts in proptest::collection::vec(disk_point(), 2..7), theta in -3.0f64..3.0) {
            let Ok(seq) = PointSequence::new(pts.clone()) else { return Ok(()); };
            let base = separation_delta(&seq);
            let rot = PointSequence::new(pts.iter().map(|p| p * Complex::from_polar(1.0, theta)).collect()).unwrap();
            prop_assert!((separation_delta(&rot).delta - base.delta).abs() < 1e-12);
            let mut rev = pts.clone();
            rev.reverse();
            let rev = PointSequence::new(rev).unwrap();
            prop_assert!((separation_delta(&rev).delta - base.delta).abs() < 1e-12);
            let smaller = seq.without(0).unwrap();
            prop_assert!(separation_delta(&smaller).delta >= base.delta - 1e-15);
        }
    }
}
