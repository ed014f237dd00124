use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::targets::check_len;
use super::{finish, residual_certificate, InterpolationCertificate, TargetSequence};
use crate::config::{Settings, Tolerances};
use crate::disk::PointSequence;
use crate::error::{Error, Result};
use crate::hardy::{disk_automorphism, HardyExpr, HardyFunction, SchurChain, C64};

const ONE: C64 = C64 { re: 1.0, im: 0.0 };

/// Pick matrix with its spectrum.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PickReport {
    pub matrix: Vec<Vec<C64>>,
    pub min_eigenvalue: f64,
    pub max_eigenvalue: f64,
    /// Spectral norm.
    pub norm: f64,
    /// `min_eigenvalue >= -floor * norm`.
    pub psd: bool,
    /// `min_eigenvalue < floor * norm`: solvable, but badly conditioned.
    pub near_singular: bool,
}

/// `P_ij = (1 - w_i conj(w_j)) / (1 - lambda_i conj(lambda_j))`.
pub fn pick_report(points: &[C64], w: &[C64], floor: f64) -> Result<PickReport> {
    if points.len() != w.len() {
        return Err(Error::DimensionMismatch {
            expected: points.len(),
            got: w.len(),
        });
    }
    let n = points.len();
    let m = DMatrix::from_fn(n, n, |i, j| (ONE - w[i] * w[j].conj()) / (ONE - points[i] * points[j].conj()));
    let eig = m.clone().symmetric_eigenvalues();
    let min = eig.iter().copied().fold(f64::INFINITY, f64::min);
    let max = eig.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let norm = min.abs().max(max.abs());
    Ok(PickReport {
        matrix: (0..n).map(|i| (0..n).map(|j| m[(i, j)]).collect()).collect(),
        min_eigenvalue: min,
        max_eigenvalue: max,
        norm,
        psd: min >= -floor * norm,
        near_singular: min < floor * norm,
    })
}

pub fn pick_matrix(points: &PointSequence<f64>, targets: &TargetSequence, tol: &Tolerances) -> Result<PickReport> {
    check_len(points, targets.len())?;
    pick_report(points.points(), &targets.values, tol.pick_floor)
}

/// Schur recursion. Peels one node at a time; a parameter on the circle
/// ends the chain with a unimodular tail, which is only consistent when the
/// remaining values all equal it.
pub(crate) fn schur_chain(points: &[C64], w: &[C64]) -> Result<SchurChain> {
    let mut pts = points.to_vec();
    let mut vals = w.to_vec();
    let mut nodes = Vec::new();
    let mut gammas = Vec::new();
    let mut tail = C64::new(0.0, 0.0);
    while !vals.is_empty() {
        let g = vals[0];
        let l = pts[0];
        if g.norm() > 1.0 + 1e-9 {
            return Err(infeasible(format!("Schur parameter {g} at node {l} leaves the disk"), nodes.len()));
        }
        if g.norm() >= 1.0 - 1e-9 {
            let u = g / g.norm();
            if let Some(v) = vals.iter().find(|v| (*v - u).norm() > 1e-6) {
                return Err(infeasible(format!("unimodular parameter {u} but a later value is {v}"), nodes.len()));
            }
            tail = u;
            break;
        }
        for i in 1..vals.len() {
            vals[i] = (vals[i] - g) / ((ONE - g.conj() * vals[i]) * disk_automorphism(l, pts[i]));
        }
        nodes.push(l);
        gammas.push(g);
        pts.remove(0);
        vals.remove(0);
    }
    SchurChain::new(nodes, gammas, tail)
}

fn infeasible(reason: String, step: usize) -> Error {
    Error::Infeasible {
        reason: format!("{reason} (step {step})"),
        ladder: Vec::new(),
    }
}

/// Rational interpolant of sup norm at most one, when the Pick matrix
/// allows it.
pub fn schur_interpolate(
    points: &PointSequence<f64>,
    targets: &TargetSequence,
    settings: &Settings,
) -> Result<(HardyFunction, InterpolationCertificate)> {
    let tol = &settings.tol;
    let pick = pick_matrix(points, targets, tol)?;
    if !pick.psd {
        return Err(Error::Infeasible {
            reason: format!("Pick matrix has eigenvalue {:.3e}", pick.min_eigenvalue),
            ladder: Vec::new(),
        });
    }
    let chain = schur_chain(points.points(), &targets.values)?;
    let f = finish(HardyExpr::Schur(chain), false, false, settings)?;
    let mut cert = residual_certificate(&f, points.points(), targets)?;
    if pick.near_singular {
        cert.warnings.push(format!(
            "Pick matrix is nearly singular (smallest eigenvalue {:.3e}, norm {:.3e})",
            pick.min_eigenvalue, pick.norm
        ));
    }
    if cert.sup_bound > 1.0 + tol.sup_slack {
        cert.warnings.push(format!("sampled sup {} exceeds 1", cert.sup_bound));
    }
    let worst = cert.max_residual_rel;
    if worst > tol.schur_residual {
        return Err(Error::Accuracy(format!("Schur interpolant misses a target by {worst:.3e} relative")));
    }
    Ok((f, cert))
}
