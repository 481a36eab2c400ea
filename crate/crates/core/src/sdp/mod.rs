// Copyright 2026 The tsteer Authors
// SPDX-License-Identifier: Apache-2.0

//! Primal-dual interior-point solver for small block-diagonal SDPs.
//!
//! Primal: maximize `Σ_j ⟨C_j, X_j⟩` subject to `Σ_j ⟨A_ij, X_j⟩ = b_i`, `X_j ⪰ 0`.
//! Dual: minimize `bᵀy` subject to `Z_j = Σ_i y_i A_ij − C_j ⪰ 0`.
//!
//! Blocks are 1×1 real or 2×2 Hermitian. The method is the HKM direction
//! with Mehrotra predictor-corrector steps from an infeasible start.

mod block;
pub(crate) mod dense;

pub use block::{from_pauli_coordinates, pauli_basis, pauli_coordinates};

use crate::error::{invalid_input, Result};
use crate::mat2::Mat2;
use crate::scalar::{from_usize, lit, Scalar};

use dense::Cholesky;

/// One affine equality `Σ_j ⟨A_ij, X_j⟩ = b_i`, listing only the blocks it touches.
#[derive(Debug, Clone, PartialEq)]
pub struct Constraint<T> {
    pub terms: Vec<(usize, Mat2<T>)>,
    pub rhs: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SdpProblem<T> {
    dims: Vec<usize>,
    objective: Vec<Mat2<T>>,
    constraints: Vec<Constraint<T>>,
}

fn check_block<T: Scalar>(dim: usize, m: &Mat2<T>, what: &str) -> Result<()> {
    if m.hermiticity_defect() > T::invariant_tolerance() {
        return Err(invalid_input(format!("{what} is not Hermitian")));
    }
    let z = T::zero();
    if dim == 1 && (m.m[0][1].norm() > z || m.m[1][0].norm() > z || m.m[1][1].norm() > z) {
        return Err(invalid_input(format!("{what} has entries outside its 1×1 block")));
    }
    Ok(())
}

impl<T: Scalar> SdpProblem<T> {
    /// Empty problem with the given block sizes, each 1 or 2.
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() || dims.iter().any(|&d| d != 1 && d != 2) {
            return Err(invalid_input("block sizes must be 1 or 2"));
        }
        let objective = vec![Mat2::zero(); dims.len()];
        Ok(Self { dims, objective, constraints: Vec::new() })
    }

    pub fn set_objective(&mut self, block: usize, c: Mat2<T>) -> Result<()> {
        let dim = *self.dims.get(block).ok_or_else(|| invalid_input("objective block out of range"))?;
        check_block(dim, &c, "objective block")?;
        self.objective[block] = c;
        Ok(())
    }

    pub fn add_constraint(&mut self, terms: Vec<(usize, Mat2<T>)>, rhs: T) -> Result<()> {
        for (b, a) in &terms {
            let dim = *self.dims.get(*b).ok_or_else(|| invalid_input("constraint block out of range"))?;
            check_block(dim, a, "constraint matrix")?;
        }
        if !rhs.is_finite() {
            return Err(invalid_input("constraint right-hand side is not finite"));
        }
        self.constraints.push(Constraint { terms, rhs });
        Ok(())
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn constraints(&self) -> &[Constraint<T>] {
        &self.constraints
    }

    /// `A(X)`, one entry per constraint.
    pub fn apply(&self, x: &[Mat2<T>]) -> Vec<T> {
        self.constraints
            .iter()
            .map(|c| c.terms.iter().map(|(b, a)| a.inner(&x[*b])).sum())
            .collect()
    }

    /// `Σ_i y_i A_i`, block by block.
    pub fn adjoint(&self, y: &[T]) -> Vec<Mat2<T>> {
        let mut out = vec![Mat2::zero(); self.dims.len()];
        for (c, &yi) in self.constraints.iter().zip(y) {
            for (b, a) in &c.terms {
                out[*b] += a.scale(yi);
            }
        }
        out
    }

    pub fn primal_objective(&self, x: &[Mat2<T>]) -> T {
        self.objective.iter().zip(x).map(|(c, x)| c.inner(x)).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SdpSettings<T> {
    /// Stop once `dual − primal` objective is at most this.
    pub gap_tol: T,
    /// Stop only once both residual norms are at most this.
    pub feas_tol: T,
    pub max_iter: usize,
    /// Fraction of the distance to the cone boundary taken per step.
    pub step_fraction: T,
}

impl<T: Scalar> Default for SdpSettings<T> {
    fn default() -> Self {
        Self {
            gap_tol: T::default_gap_tolerance(),
            feas_tol: T::default_gap_tolerance(),
            max_iter: 200,
            step_fraction: lit(0.98),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SolveStatus {
    Optimal,
    MaxIterations,
    /// The Schur complement or a block lost positive definiteness.
    NumericalFailure,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SdpOutcome<T> {
    pub x: Vec<Mat2<T>>,
    pub y: Vec<T>,
    pub z: Vec<Mat2<T>>,
    pub primal_objective: T,
    pub dual_objective: T,
    /// `‖b − A(X)‖₂`
    pub primal_residual: T,
    /// `‖Σ yA − Z − C‖_F`
    pub dual_residual: T,
    pub iterations: usize,
    pub status: SolveStatus,
}

impl<T: Scalar> SdpOutcome<T> {
    pub fn gap(&self) -> T {
        self.dual_objective - self.primal_objective
    }
}

struct Residuals<T> {
    rp: Vec<T>,
    rd: Vec<Mat2<T>>,
    rp_norm: T,
    rd_norm: T,
}

fn frob_sum<T: Scalar>(blocks: &[Mat2<T>]) -> T {
    blocks.iter().map(|m| m.frobenius_norm().powi(2)).sum::<T>().sqrt()
}

fn cone_step<T: Scalar>(dims: &[usize], x: &[Mat2<T>], d: &[Mat2<T>]) -> T {
    dims.iter()
        .zip(x.iter().zip(d))
        .map(|(&dim, (x, d))| block::max_step(dim, x, d))
        .fold(T::infinity(), |a, b| a.min(b))
}

fn dot_blocks<T: Scalar>(a: &[Mat2<T>], b: &[Mat2<T>]) -> T {
    a.iter().zip(b).map(|(a, b)| a.inner(b)).sum()
}

/// Iterations without a better iterate before giving up.
const STALL_LIMIT: usize = 10;

/// Solves `M d = b` with a few refinement sweeps against the unshifted `M`.
fn refine<T: Scalar>(chol: &Cholesky<T>, m: &[T], b: &[T]) -> Vec<T> {
    let n = b.len();
    let mut d = chol.solve(b);
    for _ in 0..3 {
        let r: Vec<T> = (0..n)
            .map(|i| b[i] - (0..n).map(|k| m[i * n + k] * d[k]).sum::<T>())
            .collect();
        let c = chol.solve(&r);
        d.iter_mut().zip(c).for_each(|(a, c)| *a += c);
    }
    d
}

struct Solver<'a, T> {
    p: &'a SdpProblem<T>,
    /// For each block, the constraints touching it and their matrices.
    touching: Vec<Vec<(usize, Mat2<T>)>>,
    nu: T,
}

struct Direction<T> {
    dx: Vec<Mat2<T>>,
    dy: Vec<T>,
    dz: Vec<Mat2<T>>,
}

impl<'a, T: Scalar> Solver<'a, T> {
    fn new(p: &'a SdpProblem<T>) -> Self {
        let mut touching = vec![Vec::new(); p.dims.len()];
        for (i, c) in p.constraints.iter().enumerate() {
            for (b, a) in &c.terms {
                touching[*b].push((i, *a));
            }
        }
        let nu = from_usize(p.dims.iter().sum());
        Self { p, touching, nu }
    }

    fn residuals(&self, x: &[Mat2<T>], y: &[T], z: &[Mat2<T>]) -> Residuals<T> {
        let ax = self.p.apply(x);
        let rp: Vec<T> = self.p.constraints.iter().zip(ax).map(|(c, v)| c.rhs - v).collect();
        let aty = self.p.adjoint(y);
        let rd: Vec<Mat2<T>> = (0..x.len())
            .map(|j| self.p.objective[j] + z[j] - aty[j])
            .collect();
        let rp_norm = rp.iter().map(|v| *v * *v).sum::<T>().sqrt();
        let rd_norm = frob_sum(&rd);
        Residuals { rp, rd, rp_norm, rd_norm }
    }

    /// `M_ik = Re Tr(A_i X A_k Z⁻¹)`.
    fn schur(&self, x: &[Mat2<T>], w: &[Mat2<T>]) -> Vec<T> {
        let m = self.p.constraints.len();
        let mut out = vec![T::zero(); m * m];
        for (j, list) in self.touching.iter().enumerate() {
            let xa: Vec<Mat2<T>> = list.iter().map(|(_, a)| x[j] * *a * w[j]).collect();
            for (r, (i, ai)) in list.iter().enumerate() {
                for (k, xak) in list.iter().map(|(k, _)| *k).zip(&xa).skip(r) {
                    let v = ai.inner(xak);
                    out[*i * m + k] += v;
                    if k != *i {
                        out[k * m + *i] += v;
                    }
                }
            }
        }
        out
    }

    fn direction(
        &self,
        chol: &Cholesky<T>,
        m: &[T],
        x: &[Mat2<T>],
        w: &[Mat2<T>],
        res: &Residuals<T>,
        rc: &[Mat2<T>],
    ) -> Direction<T> {
        let dims = &self.p.dims;
        let inner: Vec<Mat2<T>> = (0..x.len()).map(|j| rc[j] + x[j] * res.rd[j] * w[j]).collect();
        let rhs: Vec<T> = self
            .p
            .apply(&inner)
            .into_iter()
            .zip(&res.rp)
            .map(|(v, r)| v - *r)
            .collect();
        let dy = refine(chol, m, &rhs);
        let aty = self.p.adjoint(&dy);
        let dz: Vec<Mat2<T>> = (0..x.len())
            .map(|j| block::sym(dims[j], &(aty[j] - res.rd[j])))
            .collect();
        let dx: Vec<Mat2<T>> = (0..x.len())
            .map(|j| block::sym(dims[j], &(rc[j] - x[j] * dz[j] * w[j])))
            .collect();
        Direction { dx, dy, dz }
    }

    fn initial_point(&self) -> (Vec<Mat2<T>>, Vec<T>, Vec<Mat2<T>>) {
        let ten = lit::<T>(10.0);
        let root = self.nu.sqrt();
        let mut xi = ten.max(root);
        let mut eta = ten.max(root);
        for c in &self.p.constraints {
            let norm = frob_sum(&c.terms.iter().map(|t| t.1).collect::<Vec<_>>());
            xi = xi.max(root * (T::one() + c.rhs.abs()) / (T::one() + norm));
            eta = eta.max(norm);
        }
        eta = eta.max(frob_sum(&self.p.objective));
        let x = self.p.dims.iter().map(|&d| block::identity::<T>(d).scale(xi)).collect();
        let z = self.p.dims.iter().map(|&d| block::identity::<T>(d).scale(eta)).collect();
        (x, vec![T::zero(); self.p.constraints.len()], z)
    }

    fn outcome(&self, x: Vec<Mat2<T>>, y: Vec<T>, z: Vec<Mat2<T>>, iterations: usize) -> SdpOutcome<T> {
        let res = self.residuals(&x, &y, &z);
        SdpOutcome {
            primal_objective: self.p.primal_objective(&x),
            dual_objective: self.p.constraints.iter().zip(&y).map(|(c, yi)| c.rhs * *yi).sum(),
            primal_residual: res.rp_norm,
            dual_residual: res.rd_norm,
            x,
            y,
            z,
            iterations,
            status: SolveStatus::MaxIterations,
        }
    }

    /// Distance from the stopping criteria; at most one means converged.
    fn score(settings: &SdpSettings<T>, gap: T, res: &Residuals<T>) -> T {
        (gap.abs() / settings.gap_tol)
            .max(res.rp_norm / settings.feas_tol)
            .max(res.rd_norm / settings.feas_tol)
    }

    fn run(&self, settings: &SdpSettings<T>) -> SdpOutcome<T> {
        let dims = &self.p.dims;
        let (mut x, mut y, mut z) = self.initial_point();
        let mut iterations = 0;
        let mut stalled = 0;
        let mut best: Option<(T, SdpOutcome<T>)> = None;
        let tau = settings.step_fraction;
        let failed = loop {
            let res = self.residuals(&x, &y, &z);
            let pobj = self.p.primal_objective(&x);
            let dobj: T = self.p.constraints.iter().zip(&y).map(|(c, yi)| c.rhs * *yi).sum();
            let score = Self::score(settings, dobj - pobj, &res);
            if best.as_ref().map_or(true, |(s, _)| score < *s) {
                best = Some((score, self.outcome(x.clone(), y.clone(), z.clone(), iterations)));
                stalled = 0;
            } else {
                stalled += 1;
            }
            if score <= T::one() {
                break false;
            }
            if iterations >= settings.max_iter {
                break false;
            }
            if stalled >= STALL_LIMIT {
                break true;
            }
            iterations += 1;

            let w: Option<Vec<Mat2<T>>> =
                dims.iter().zip(&z).map(|(&d, zj)| block::inverse(d, zj)).collect();
            let Some(w) = w else {
                break true;
            };
            let m = self.schur(&x, &w);
            let Some(chol) = Cholesky::factor_shifted(self.p.constraints.len(), m.clone()) else {
                break true;
            };
            let mu = dot_blocks(&x, &z) / self.nu;

            let rc_aff: Vec<Mat2<T>> = x.iter().map(|xj| -*xj).collect();
            let aff = self.direction(&chol, &m, &x, &w, &res, &rc_aff);
            let ap = T::one().min(tau * cone_step(dims, &x, &aff.dx));
            let ad = T::one().min(tau * cone_step(dims, &z, &aff.dz));
            let x_aff: Vec<Mat2<T>> = x.iter().zip(&aff.dx).map(|(a, d)| *a + d.scale(ap)).collect();
            let z_aff: Vec<Mat2<T>> = z.iter().zip(&aff.dz).map(|(a, d)| *a + d.scale(ad)).collect();
            let mu_aff = dot_blocks(&x_aff, &z_aff) / self.nu;
            let sigma = (mu_aff / mu).max(T::zero()).min(T::one()).powi(3);

            let rc: Vec<Mat2<T>> = (0..x.len())
                .map(|j| w[j].scale(sigma * mu) - x[j] - aff.dx[j] * aff.dz[j] * w[j])
                .collect();
            let dir = self.direction(&chol, &m, &x, &w, &res, &rc);
            let ap = T::one().min(tau * cone_step(dims, &x, &dir.dx));
            let ad = T::one().min(tau * cone_step(dims, &z, &dir.dz));
            for j in 0..x.len() {
                x[j] = block::sym(dims[j], &(x[j] + dir.dx[j].scale(ap)));
                z[j] = block::sym(dims[j], &(z[j] + dir.dz[j].scale(ad)));
            }
            for (yi, d) in y.iter_mut().zip(&dir.dy) {
                *yi += *d * ad;
            }
        };
        let (score, mut out) = best.expect("at least one iterate is scored");
        out.iterations = iterations;
        out.status = if score <= T::one() {
            SolveStatus::Optimal
        } else if failed {
            SolveStatus::NumericalFailure
        } else {
            SolveStatus::MaxIterations
        };
        out
    }
}

/// Solves the problem; deterministic for identical input.
pub fn solve_sdp<T: Scalar>(problem: &SdpProblem<T>, settings: &SdpSettings<T>) -> Result<SdpOutcome<T>> {
    if problem.constraints.is_empty() {
        return Err(invalid_input("problem has no constraints"));
    }
    if !(settings.gap_tol > T::zero() && settings.feas_tol > T::zero()) {
        return Err(invalid_input("solver tolerances must be positive"));
    }
    Ok(Solver::new(problem).run(settings))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex;

    fn scalar_block(v: f64) -> Mat2<f64> {
        Mat2::diag(v, 0.0)
    }

    #[test]
    fn linear_program_in_disguise() {
        // max x s.t. x + s = 3, x, s ≥ 0
        let mut p = SdpProblem::new(vec![1, 1]).unwrap();
        p.set_objective(0, scalar_block(1.0)).unwrap();
        p.add_constraint(vec![(0, scalar_block(1.0)), (1, scalar_block(1.0))], 3.0).unwrap();
        let out = solve_sdp(&p, &SdpSettings::default()).unwrap();
        assert_eq!(out.status, SolveStatus::Optimal);
        assert!((out.primal_objective - 3.0).abs() < 1e-7);
        assert!(out.gap() <= 1e-8);
    }

    #[test]
    fn largest_eigenvalue_toy() {
        // max ⟨H, X⟩ s.t. Tr X = 1, X ⪰ 0 is λ_max(H)
        let h: Mat2<f64> = Mat2::new(
            Complex::new(1.0, 0.0),
            Complex::new(0.5, -0.5),
            Complex::new(0.5, 0.5),
            Complex::new(-1.0, 0.0),
        );
        let mut p = SdpProblem::new(vec![2]).unwrap();
        p.set_objective(0, h).unwrap();
        p.add_constraint(vec![(0, Mat2::identity())], 1.0).unwrap();
        let out = solve_sdp(&p, &SdpSettings::default()).unwrap();
        assert_eq!(out.status, SolveStatus::Optimal);
        let expect = h.hermitian_eigenvalues()[1];
        assert!((out.primal_objective - expect).abs() < 1e-7);
        assert!((out.dual_objective - expect).abs() < 1e-7);
        assert!(out.x[0].min_eigenvalue() > -1e-10);
        assert!(out.z[0].min_eigenvalue() > -1e-10);
    }

    #[test]
    fn identity_objective_toy() {
        // max Tr X s.t. ⟨P/√2, X⟩ = ⟨P/√2, ρ⟩ pins X = ρ
        let rho = Mat2::from_bloch([0.2, 0.1, -0.5]);
        let mut p = SdpProblem::new(vec![2]).unwrap();
        p.set_objective(0, Mat2::identity()).unwrap();
        for b in pauli_basis::<f64>() {
            p.add_constraint(vec![(0, b)], b.inner(&rho)).unwrap();
        }
        let out = solve_sdp(&p, &SdpSettings::default()).unwrap();
        assert_eq!(out.status, SolveStatus::Optimal);
        assert!((out.primal_objective - 1.0).abs() < 1e-8);
        assert!(out.x[0].max_abs_diff(&rho) < 1e-8);
    }

    #[test]
    fn rejects_malformed_problems() {
        assert!(SdpProblem::<f64>::new(vec![3]).is_err());
        let mut p = SdpProblem::<f64>::new(vec![1]).unwrap();
        assert!(p.add_constraint(vec![(0, Mat2::identity())], 1.0).is_err());
        assert!(p.add_constraint(vec![(1, scalar_block(1.0))], 1.0).is_err());
        assert!(solve_sdp(&p, &SdpSettings::default()).is_err());
    }

    #[test]
    fn deterministic() {
        let mut p = SdpProblem::new(vec![2, 2]).unwrap();
        p.set_objective(0, Mat2::from_bloch([0.3, 0.0, 0.4])).unwrap();
        p.add_constraint(vec![(0, Mat2::identity()), (1, Mat2::pauli_x())], 1.0).unwrap();
        p.add_constraint(vec![(1, Mat2::identity())], 1.0).unwrap();
        let a = solve_sdp(&p, &SdpSettings::default()).unwrap();
        let b = solve_sdp(&p, &SdpSettings::default()).unwrap();
        assert_eq!(a, b);
    }
}
