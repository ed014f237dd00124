use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;

/// Point mass `mass * delta_zeta` of a singular measure on the circle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SingularAtom {
    pub zeta: C64,
    pub mass: f64,
}

/// Finite Blaschke product times finitely many singular atoms times a
/// unimodular constant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InnerSpec {
    #[serde(default)]
    pub zeros: Vec<C64>,
    #[serde(default)]
    pub atoms: Vec<SingularAtom>,
    #[serde(default = "unit")]
    pub unimodular: C64,
}

fn unit() -> C64 {
    C64::new(1.0, 0.0)
}

impl Default for InnerSpec {
    fn default() -> Self {
        Self {
            zeros: Vec::new(),
            atoms: Vec::new(),
            unimodular: unit(),
        }
    }
}

/// Normalized Blaschke factor: `z` for `a = 0`, otherwise
/// `(|a| / a) (a - z) / (1 - conj(a) z)`, positive at the origin.
pub fn blaschke_factor(a: C64, z: C64) -> C64 {
    if a == C64::new(0.0, 0.0) {
        return z;
    }
    let num = (a - z) * (a.norm() / a);
    num / (C64::new(1.0, 0.0) - a.conj() * z)
}

/// `(zeta + z) / (zeta - z)`.
pub fn atom_kernel(zeta: C64, z: C64) -> C64 {
    (zeta + z) / (zeta - z)
}

impl InnerSpec {
    pub fn blaschke(zeros: Vec<C64>) -> Result<Self> {
        let s = Self {
            zeros,
            ..Self::default()
        };
        s.validate()?;
        Ok(s)
    }

    pub fn singular(atoms: Vec<SingularAtom>) -> Result<Self> {
        let s = Self {
            atoms,
            ..Self::default()
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        for a in &self.zeros {
            if !(a.norm() < 1.0) {
                return Err(Error::Domain(format!("Blaschke zero {a} is not inside the disk")));
            }
        }
        for at in &self.atoms {
            if (at.zeta.norm() - 1.0).abs() > 1e-12 {
                return Err(Error::Domain(format!("atom location {} is not on the circle", at.zeta)));
            }
            if !(at.mass > 0.0 && at.mass.is_finite()) {
                return Err(Error::Domain(format!("atom mass must be positive, got {}", at.mass)));
            }
        }
        if (self.unimodular.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::Domain(format!("constant {} is not unimodular", self.unimodular)));
        }
        Ok(())
    }

    pub fn is_trivial(&self) -> bool {
        self.zeros.is_empty() && self.atoms.is_empty()
    }

    /// Total singular mass.
    pub fn singular_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.mass).sum()
    }

    /// `sum log(1 / |a|)` over the zeros, infinite when a zero sits at 0.
    pub fn blaschke_mass(&self) -> f64 {
        self.zeros.iter().map(|a| -a.norm().ln()).sum()
    }

    /// Logarithm of the singular factor times the constant; the Blaschke
    /// part has no logarithm.
    pub fn singular_log(&self, z: C64) -> C64 {
        let mut acc = C64::new(0.0, self.unimodular.arg());
        for at in &self.atoms {
            acc -= atom_kernel(at.zeta, z) * at.mass;
        }
        acc
    }

    pub fn eval(&self, z: C64) -> C64 {
        let mut v = self.unimodular;
        for a in &self.zeros {
            v *= blaschke_factor(*a, z);
        }
        for at in &self.atoms {
            v *= (-atom_kernel(at.zeta, z) * at.mass).exp();
        }
        v
    }
}
