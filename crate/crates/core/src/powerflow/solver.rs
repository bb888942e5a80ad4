use nalgebra::{DMatrix, DVector, LU};
use num_complex::Complex64;
use serde::Serialize;

use super::loads::network_injections;
use crate::error::{Error, Result};
use crate::model::{field_to_json, pair, FeederModel, PhaseField};
use crate::sparse::{apply_sparse, SparseAdmittance};

/// Fixed-point map used by [`solve`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Iteration {
    /// `v ← Y_LL⁻¹ (i_inj(v) − Y_LS v_slack)` with `Y_LL` factored once.
    #[default]
    Implicit,
    /// Point-Jacobi sweep on the `D`/`F` split, see [`fixed_point_step`].
    Jacobi,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    /// Convergence threshold on the largest voltage change, per-unit.
    pub tol: f64,
    pub max_iter: usize,
    /// Any `|v|` above this aborts the solve as diverged.
    pub divergence_limit: f64,
    pub iteration: Iteration,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            tol: 1e-8,
            max_iter: 200,
            divergence_limit: 10.0,
            iteration: Iteration::default(),
        }
    }
}

impl SolveOptions {
    fn check(&self) -> Result<()> {
        if self.tol.is_nan() || self.tol <= 0.0 {
            return Err(Error::Config(format!(
                "tol must be positive, got {}",
                self.tol
            )));
        }
        if self.max_iter == 0 {
            return Err(Error::Config("max_iter must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveStatus {
    Converged,
    MaxIterations,
    Diverged,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub v: PhaseField,
    /// Nodal currents injected into the network, `y_ijkm v_jm`.
    pub i: PhaseField,
    pub losses: Complex64,
    pub iterations: usize,
    pub converged: bool,
    pub status: SolveStatus,
    pub residual_trace: Vec<f64>,
}

impl SolveReport {
    /// Complex power injected into the network at `node`.
    pub fn injected_power(&self, node: usize) -> Complex64 {
        (0..3)
            .map(|p| self.v[(p, node)] * self.i[(p, node)].conj())
            .sum()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "converged": self.converged,
            "status": self.status,
            "iterations": self.iterations,
            "losses": pair(self.losses),
            "v": field_to_json(&self.v),
            "residual_trace": self.residual_trace,
        })
    }
}

fn flat_start(f: &FeederModel) -> PhaseField {
    PhaseField::uniform(f.n_nodes, f.slack_voltage)
}

/// One Jacobi sweep on the split `y = D + F`:
/// `v_next[i][k] = (i_inj[i][k] − (F v)[i][k]) / D[i][k]` for every non-slack
/// row, evaluated at the previous iterate. Slack rows are copied. Returns the
/// new iterate and the largest change over non-slack rows.
pub fn fixed_point_step(
    y: &SparseAdmittance,
    v: &PhaseField,
    f: &FeederModel,
) -> Result<(PhaseField, f64)> {
    v.check_nodes(y.n_nodes())?;
    let slack = f.slack.index();
    let inj = network_injections(f, v)?;
    let fv = y.apply_off_diagonal(v)?;
    let mut next = v.clone();
    let mut residual = 0.0_f64;
    for k in (0..f.n_nodes).filter(|&k| k != slack) {
        for i in 0..3 {
            let d = y.diagonal(i, k);
            if d == Complex64::new(0.0, 0.0) {
                return Err(Error::ZeroDiagonal { phase: i, node: k });
            }
            let updated = (inj[(i, k)] - fv[(i, k)]) / d;
            residual = residual.max((updated - v[(i, k)]).norm());
            next[(i, k)] = updated;
        }
    }
    Ok((next, residual))
}

/// The implicit fixed point: the linear part of the network is solved exactly
/// at every step, only the load currents lag one iterate behind.
pub struct ImplicitStep {
    slack: usize,
    /// Position of each non-slack node among the unknowns.
    position: Vec<Option<usize>>,
    lu: LU<Complex64, nalgebra::Dyn, nalgebra::Dyn>,
    /// `Y_LS v_slack` for every row.
    slack_current: PhaseField,
}

impl ImplicitStep {
    pub fn new(y: &SparseAdmittance, f: &FeederModel) -> Result<Self> {
        let n = y.n_nodes();
        if f.n_nodes != n {
            return Err(Error::ShapeMismatch {
                expected: n,
                found: f.n_nodes,
            });
        }
        let slack = f.slack.index();
        let mut position = vec![None; n];
        let mut next = 0;
        for (k, pos) in position.iter_mut().enumerate() {
            if k != slack {
                *pos = Some(next);
                next += 1;
            }
        }
        let dim = 3 * next;
        let mut a = DMatrix::<Complex64>::zeros(dim, dim);
        for k in 0..n {
            let Some(pk) = position[k] else { continue };
            for i in 0..3 {
                let row = 3 * pk + i;
                a[(row, row)] += y.diagonal(i, k);
                for (j, m, value) in y.row(i, k) {
                    if let Some(pm) = position[m] {
                        a[(row, 3 * pm + j)] += value;
                    }
                }
            }
        }
        let lu = a.lu();
        if !lu.is_invertible() {
            return Err(Error::SingularNetwork);
        }
        let mut slack_only = PhaseField::zeros(n);
        slack_only.set_node(slack, f.slack_voltage);
        let slack_current = apply_sparse(y, &slack_only)?;
        Ok(ImplicitStep {
            slack,
            position,
            lu,
            slack_current,
        })
    }

    pub fn step(&self, v: &PhaseField, f: &FeederModel) -> Result<(PhaseField, f64)> {
        v.check_nodes(self.position.len())?;
        let inj = network_injections(f, v)?;
        let rhs = DVector::from_iterator(
            self.lu.l().nrows(),
            self.unknowns()
                .flat_map(|k| (0..3).map(move |i| (i, k)))
                .map(|(i, k)| inj[(i, k)] - self.slack_current[(i, k)]),
        );
        let x = self.lu.solve(&rhs).ok_or(Error::SingularNetwork)?;
        let mut next = v.clone();
        let mut residual = 0.0_f64;
        for k in self.unknowns() {
            let pk = self.position[k].expect("non-slack node");
            for i in 0..3 {
                let updated = x[3 * pk + i];
                residual = residual.max((updated - v[(i, k)]).norm());
                next[(i, k)] = updated;
            }
        }
        Ok((next, residual))
    }

    fn unknowns(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.position.len()).filter(move |&k| k != self.slack)
    }
}

/// Runs the fixed-point iteration from a flat start until the largest voltage
/// change drops to `tol`, `max_iter` is reached, or a voltage leaves
/// `divergence_limit`. A collapsed load voltage also counts as divergence.
/// Non-convergence is reported, not returned as an error.
pub fn solve(y: &SparseAdmittance, f: &FeederModel, opts: &SolveOptions) -> Result<SolveReport> {
    opts.check()?;
    if f.n_nodes != y.n_nodes() {
        return Err(Error::ShapeMismatch {
            expected: y.n_nodes(),
            found: f.n_nodes,
        });
    }
    let implicit = match opts.iteration {
        Iteration::Implicit => Some(ImplicitStep::new(y, f)?),
        Iteration::Jacobi => None,
    };

    let mut v = flat_start(f);
    let mut trace = Vec::new();
    let mut status = SolveStatus::MaxIterations;
    for _ in 0..opts.max_iter {
        let stepped = match &implicit {
            Some(step) => step.step(&v, f),
            None => fixed_point_step(y, &v, f),
        };
        let (next, residual) = match stepped {
            Ok(out) => out,
            Err(Error::Undervoltage { .. }) => {
                status = SolveStatus::Diverged;
                break;
            }
            Err(other) => return Err(other),
        };
        v = next;
        trace.push(residual);
        let blown = v
            .as_slice()
            .iter()
            .any(|x| !x.is_finite() || x.norm() > opts.divergence_limit);
        if blown || !residual.is_finite() {
            status = SolveStatus::Diverged;
            break;
        }
        if residual <= opts.tol {
            status = SolveStatus::Converged;
            break;
        }
    }

    let i = apply_sparse(y, &v)?;
    let losses = compute_losses(&v, &i)?;
    Ok(SolveReport {
        v,
        i,
        losses,
        iterations: trace.len(),
        converged: status == SolveStatus::Converged,
        status,
        residual_trace: trace,
    })
}

/// Total apparent losses `s_L = conj(Σ_{i,k} conj(v_ik) · i_ik)`.
pub fn compute_losses(v: &PhaseField, i: &PhaseField) -> Result<Complex64> {
    i.check_nodes(v.n_nodes())?;
    let sum: Complex64 = v
        .as_slice()
        .iter()
        .zip(i.as_slice())
        .map(|(v, i)| v.conj() * i)
        .sum();
    Ok(sum.conj())
}
