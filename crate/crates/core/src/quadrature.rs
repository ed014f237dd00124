//! Gauss-Legendre rules and geometrically graded composite quadrature.
//!
//! Integrands on the circle with an integrable singularity (a weight profile
//! blowing up at `t = 0`) or a sharp peak (a Poisson kernel near the circle)
//! are split at those points and each piece is covered by panels whose
//! endpoints shrink geometrically toward the critical point.

use std::sync::Arc;

use num_complex::Complex;

use crate::scalar::Real;

/// Nodes and weights of the `n`-point Gauss-Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            // p1 = P_n(x), p0 = P_{n-1}(x)
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Fixed-order Gauss-Legendre rule converted to the working scalar.
#[derive(Debug, Clone)]
pub struct GaussRule<T> {
    nodes: Vec<T>,
    weights: Vec<T>,
}

impl<T: Real> GaussRule<T> {
    pub fn new(order: usize) -> Self {
        let (x, w) = gauss_legendre(order);
        Self {
            nodes: x.into_iter().map(T::lit).collect(),
            weights: w.into_iter().map(T::lit).collect(),
        }
    }

    /// Integral of `f` over `[a, b]`.
    pub fn integrate<F>(&self, a: T, b: T, f: &F) -> Complex<T>
    where
        F: Fn(T) -> Complex<T> + ?Sized,
    {
        let half = (b - a) / T::lit(2.0);
        let mid = (a + b) / T::lit(2.0);
        let mut acc = Complex::new(T::zero(), T::zero());
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc = acc + f(mid + half * *x) * (*w * half);
        }
        acc
    }
}

/// One-sided mass function: `mass(x)` is the integral of the weight over the
/// `x`-neighbourhood on one side of a breakpoint. Used to close the innermost
/// panel exactly for singular weights.
pub type SideMass<T> = Arc<dyn Fn(T) -> T + Send + Sync>;

/// Critical point of an integrand on the circle.
#[derive(Clone)]
pub struct Breakpoint<T> {
    pub at: T,
    pub side_mass: Option<SideMass<T>>,
}

impl<T: std::fmt::Debug> std::fmt::Debug for Breakpoint<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Breakpoint")
            .field("at", &self.at)
            .field("side_mass", &self.side_mass.is_some())
            .finish()
    }
}

impl<T> Breakpoint<T> {
    pub fn plain(at: T) -> Self {
        Self { at, side_mass: None }
    }
}

/// Graded composite rule: `panels` geometric panels with ratio `ratio`, each
/// integrated by a Gauss-Legendre rule of fixed order.
#[derive(Debug, Clone)]
pub struct GradedQuadrature<T> {
    rule: GaussRule<T>,
    panels: usize,
    ratio: T,
}

impl<T: Real> GradedQuadrature<T> {
    pub fn new(order: usize, panels: usize, ratio: f64) -> Self {
        Self {
            rule: GaussRule::new(order),
            panels,
            ratio: T::lit(ratio),
        }
    }

    /// Integral of `kernel(t) * weight(t)` from `s` to `e`, graded toward `s`.
    ///
    /// When `mass` is given the innermost panel is replaced by
    /// `kernel(s) * mass(|innermost width|)`.
    pub fn toward<K, W>(&self, s: T, e: T, kernel: &K, weight: &W, mass: Option<&SideMass<T>>) -> Complex<T>
    where
        K: Fn(T) -> Complex<T> + ?Sized,
        W: Fn(T) -> T + ?Sized,
    {
        let len = e - s;
        if len == T::zero() {
            return Complex::new(T::zero(), T::zero());
        }
        let f = |t: T| kernel(t) * weight(t);
        let mut acc = Complex::new(T::zero(), T::zero());
        let mut outer = T::one();
        for _ in 0..self.panels {
            let inner = outer * self.ratio;
            acc = acc + self.rule.integrate(s + len * inner, s + len * outer, &f);
            outer = inner;
        }
        let last = s + len * outer;
        match mass {
            Some(m) => {
                let width = (last - s).abs();
                let sign = if len > T::zero() { T::one() } else { -T::one() };
                acc = acc + kernel(s) * (m(width) * sign);
            }
            None => acc = acc + self.rule.integrate(s, last, &f),
        }
        acc
    }

    /// Integral over `[-pi, pi)` of a `2 pi`-periodic integrand
    /// `kernel(t) * weight(t)` with the given critical points.
    pub fn circle<K, W>(&self, kernel: &K, weight: &W, breakpoints: &[Breakpoint<T>]) -> Complex<T>
    where
        K: Fn(T) -> Complex<T> + ?Sized,
        W: Fn(T) -> T + ?Sized,
    {
        let two_pi = T::PI() + T::PI();
        let mut pts: Vec<Breakpoint<T>> = breakpoints
            .iter()
            .map(|b| Breakpoint {
                at: wrap_angle(b.at),
                side_mass: b.side_mass.clone(),
            })
            .collect();
        if pts.is_empty() {
            pts.push(Breakpoint::plain(-T::PI()));
        }
        pts.sort_by(|a, b| a.at.partial_cmp(&b.at).unwrap_or(std::cmp::Ordering::Equal));
        // merge coincident points, keeping any mass function
        let mut merged: Vec<Breakpoint<T>> = Vec::with_capacity(pts.len());
        let eps = T::lit(1e-14);
        for p in pts {
            match merged.last_mut() {
                Some(last) if (p.at - last.at).abs() <= eps => {
                    if last.side_mass.is_none() {
                        last.side_mass = p.side_mass;
                    }
                }
                _ => merged.push(p),
            }
        }
        if merged.len() > 1 {
            let first = merged[0].at + two_pi;
            if (first - merged[merged.len() - 1].at).abs() <= eps {
                let tail = merged.pop().expect("nonempty");
                if merged[0].side_mass.is_none() {
                    merged[0].side_mass = tail.side_mass;
                }
            }
        }
        let periodic_kernel = |t: T| kernel(wrap_angle(t));
        let periodic_weight = |t: T| weight(wrap_angle(t));
        let n = merged.len();
        let mut acc = Complex::new(T::zero(), T::zero());
        for i in 0..n {
            let a = &merged[i];
            // the closing segment is anchored at the first point shifted back
            // by a period so that abscissae near it keep full precision
            let (b, shift) = if i + 1 < n { (&merged[i + 1], T::zero()) } else { (&merged[0], two_pi) };
            let mid = (a.at + b.at + shift) / T::lit(2.0);
            acc = acc + self.toward(a.at, mid, &periodic_kernel, &periodic_weight, a.side_mass.as_ref());
            acc = acc - self.toward(b.at, mid - shift, &periodic_kernel, &periodic_weight, b.side_mass.as_ref());
        }
        acc
    }
}

/// Maps an angle to `[-pi, pi)`.
pub fn wrap_angle<T: Real>(t: T) -> T {
    let two_pi = T::PI() + T::PI();
    if t >= -T::PI() && t < T::PI() {
        return t;
    }
    let mut x = (t + T::PI()) % two_pi;
    if x < T::zero() {
        x = x + two_pi;
    }
    x - T::PI()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn re(x: f64) -> Complex<f64> {
        Complex::new(x, 0.0)
    }

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let (x, w) = gauss_legendre(16);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
        // x^30 is integrated exactly by a 16-point rule
        let i: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(30)).sum();
        assert!((i - 2.0 / 31.0).abs() < 1e-14);
    }

    #[test]
    fn graded_handles_power_singularity() {
        let q = GradedQuadrature::<f64>::new(16, 40, 0.25);
        let one = |_t: f64| re(1.0);
        let w = |t: f64| t.powf(-0.7);
        let mass: SideMass<f64> = Arc::new(|x: f64| x.powf(0.3) / 0.3);
        let v = q.toward(0.0, 1.0, &one, &w, Some(&mass));
        assert!((v.re - 1.0 / 0.3).abs() < 1e-12);
        // without the closing mass only the innermost sliver is lost
        let v = q.toward(0.0, 1.0, &one, &w, None);
        assert!((v.re - 1.0 / 0.3).abs() < 1e-6);
    }

    #[test]
    fn circle_integral_of_poisson_kernel_is_two_pi() {
        let q = GradedQuadrature::<f64>::new(16, 40, 0.25);
        for gap in [1.0f64, 0.5, 0.01, 1e-9] {
            let r = 1.0 - gap;
            let k = |t: f64| re(gap * (1.0 + r) / (gap * gap + 4.0 * r * (t / 2.0).sin().powi(2)));
            let v = q.circle(&k, &|_| 1.0, &[Breakpoint::plain(0.0)]);
            assert!((v.re / (2.0 * std::f64::consts::PI) - 1.0).abs() < 1e-12, "gap = {gap}");
        }
    }

    #[test]
    fn wrap_angle_range() {
        use std::f64::consts::PI;
        assert_eq!(wrap_angle(0.5), 0.5);
        assert!((wrap_angle(PI + 0.5) - (-PI + 0.5)).abs() < 1e-15);
        assert!((wrap_angle(-PI - 0.5) - (PI - 0.5)).abs() < 1e-15);
        assert_eq!(wrap_angle(PI), -PI);
    }
}
