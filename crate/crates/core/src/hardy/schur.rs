use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

type C64 = Complex<f64>;

/// `(z - a) / (1 - conj(a) z)`.
pub fn disk_automorphism(a: C64, z: C64) -> C64 {
    (z - a) / (C64::new(1.0, 0.0) - a.conj() * z)
}

/// Schur function stored as the linear-fractional chain produced by the
/// Schur algorithm:
///
/// `f_(k-1) = (gamma_k + b_k f_k) / (1 + conj(gamma_k) b_k f_k)`,
/// `b_k(z) = (z - node_k) / (1 - conj(node_k) z)`,
///
/// ending in the constant `tail` (`|tail| <= 1`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchurChain {
    pub nodes: Vec<C64>,
    pub gammas: Vec<C64>,
    pub tail: C64,
}

impl SchurChain {
    pub fn new(nodes: Vec<C64>, gammas: Vec<C64>, tail: C64) -> Result<Self> {
        let s = Self { nodes, gammas, tail };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if self.nodes.len() != self.gammas.len() {
            return Err(Error::DimensionMismatch {
                expected: self.nodes.len(),
                got: self.gammas.len(),
            });
        }
        if let Some(g) = self.gammas.iter().find(|g| !(g.norm() < 1.0)) {
            return Err(Error::Domain(format!("Schur parameter {g} is not inside the disk")));
        }
        if let Some(a) = self.nodes.iter().find(|a| !(a.norm() < 1.0)) {
            return Err(Error::Domain(format!("chain node {a} is not inside the disk")));
        }
        if !(self.tail.norm() <= 1.0 + 1e-12) {
            return Err(Error::Domain(format!("chain tail {} has modulus above 1", self.tail)));
        }
        Ok(())
    }

    /// Evaluates the chain anywhere on the closed disk.
    pub fn eval(&self, z: C64) -> C64 {
        let one = C64::new(1.0, 0.0);
        let mut g = self.tail;
        for (a, gamma) in self.nodes.iter().zip(&self.gammas).rev() {
            let bg = disk_automorphism(*a, z) * g;
            g = (*gamma + bg) / (one + gamma.conj() * bg);
        }
        g
    }
}
