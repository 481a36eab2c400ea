// Copyright 2026 The tsteer Authors
// SPDX-License-Identifier: Apache-2.0

//! Brute-force reference for the decoherence factor.
//!
//! Builds the full `2^L` spin Hamiltonian, diagonalizes it densely and
//! evolves the ground state directly. Only meant for small chains; every
//! closed-form result in [`crate::chain_spectrum`] is checked against it.
//!
//! Basis: bit `l` of a basis index set means site `l` is spin down
//! (`σᶻ = −1`), so index 0 is the fully polarized up state.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::chain_spectrum::{ChainParams, FieldShift};
use crate::error::{Error, Result};

/// Largest chain the dense path accepts.
pub const MAX_ORACLE_SIZE: usize = 12;

/// Ground-state gap below which the ground space is reported as degenerate.
pub const DEGENERACY_GAP: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct DenseHamiltonian {
    pub size: usize,
    pub dim: usize,
    pub shift: FieldShift,
    pub entries: DMatrix<f64>,
}

/// Order of the two evolutions inside the overlap.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FactorConvention {
    /// `⟨ψ| e^{iH₊t} e^{−iH₋t} |ψ⟩`
    #[default]
    PlusDaggerMinus,
    /// `⟨ψ| e^{iH₋t} e^{−iH₊t} |ψ⟩`, the complex conjugate.
    MinusDaggerPlus,
}

impl FactorConvention {
    pub fn describe(self) -> &'static str {
        match self {
            FactorConvention::PlusDaggerMinus => "<psi|exp(iH+ t) exp(-iH- t)|psi>",
            FactorConvention::MinusDaggerPlus => "<psi|exp(iH- t) exp(-iH+ t)|psi>",
        }
    }
}

fn guard_size(size: usize) -> Result<()> {
    if size > MAX_ORACLE_SIZE {
        return Err(Error::Resource(format!(
            "dense oracle limited to L <= {MAX_ORACLE_SIZE}, got L = {size}"
        )));
    }
    Ok(())
}

/// `−Σ_l [(1+γ)/2 σˣσˣ + (1−γ)/2 σʸσʸ + x σᶻ]` on a ring at the shifted field `x`.
pub fn dense_hamiltonian(params: &ChainParams<f64>, shift: FieldShift) -> Result<DenseHamiltonian> {
    let size = params.size();
    guard_size(size)?;
    let dim = 1usize << size;
    let gamma = params.gamma();
    let x = params.field(shift);
    let mut h = DMatrix::<f64>::zeros(dim, dim);
    for s in 0..dim {
        let down = s.count_ones() as f64;
        h[(s, s)] = -x * (size as f64 - 2.0 * down);
        for l in 0..size {
            let r = (l + 1) % size;
            let (bl, br) = ((s >> l) & 1, (s >> r) & 1);
            // XX and YY both flip the pair; YY contributes −1 on aligned spins
            let amp = if bl == br { gamma } else { 1.0 };
            let t = s ^ (1 << l) ^ (1 << r);
            h[(t, s)] -= amp;
        }
    }
    Ok(DenseHamiltonian { size, dim, shift, entries: h })
}

#[derive(Debug, Clone)]
pub struct GroundState {
    pub vector: DVector<f64>,
    pub energy: f64,
    pub gap: f64,
    /// Set when the gap to the first excited level is below [`DEGENERACY_GAP`].
    pub degenerate: bool,
}

struct Eigen {
    values: Vec<f64>,
    vectors: DMatrix<f64>,
}

fn sorted_eigen(h: &DMatrix<f64>) -> Eigen {
    let eig = SymmetricEigen::new(h.clone());
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(h.nrows(), order.len(), |r, c| eig.eigenvectors[(r, order[c])]);
    Eigen { values, vectors }
}

fn fix_sign(v: &mut DVector<f64>) {
    let mut best = 0;
    for i in 1..v.len() {
        if v[i].abs() > v[best].abs() + 1e-12 {
            best = i;
        }
    }
    if v[best] < 0.0 {
        v.neg_mut();
    }
}

fn ground_from(eig: &Eigen) -> GroundState {
    let mut vector = eig.vectors.column(0).into_owned();
    vector /= vector.norm();
    fix_sign(&mut vector);
    let gap = if eig.values.len() > 1 { eig.values[1] - eig.values[0] } else { f64::INFINITY };
    GroundState { vector, energy: eig.values[0], gap, degenerate: gap < DEGENERACY_GAP }
}

/// Lowest eigenvector, unit norm, with its largest-magnitude component made positive.
pub fn ground_state(h: &DenseHamiltonian) -> Result<GroundState> {
    let defect = (&h.entries - h.entries.transpose()).norm();
    if defect > 1e-12 {
        return Err(Error::InvalidInput(format!("Hamiltonian not Hermitian (defect {defect:e})")));
    }
    Ok(ground_from(&sorted_eigen(&h.entries)))
}

/// Ground state at `λ` plus the spectral data of `H₊` and `H₋`, reusable across times.
pub struct Oracle {
    ground: GroundState,
    plus: (Vec<f64>, DMatrix<f64>, DVector<f64>),
    minus: (Vec<f64>, DMatrix<f64>, DVector<f64>),
}

impl Oracle {
    pub fn new(params: &ChainParams<f64>) -> Result<Self> {
        let h0 = dense_hamiltonian(params, FieldShift::None)?;
        let ground = ground_state(&h0)?;
        let project = |shift| -> Result<(Vec<f64>, DMatrix<f64>, DVector<f64>)> {
            let h = dense_hamiltonian(params, shift)?;
            let eig = sorted_eigen(&h.entries);
            let coeffs = eig.vectors.tr_mul(&ground.vector);
            Ok((eig.values, eig.vectors, coeffs))
        };
        let plus = project(FieldShift::Plus)?;
        let minus = project(FieldShift::Minus)?;
        Ok(Self { ground, plus, minus })
    }

    pub fn ground(&self) -> &GroundState {
        &self.ground
    }

    fn evolve(part: &(Vec<f64>, DMatrix<f64>, DVector<f64>), t: f64) -> Vec<Complex64> {
        let (values, vectors, coeffs) = part;
        let n = vectors.nrows();
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        for (j, (&e, &c)) in values.iter().zip(coeffs.iter()).enumerate() {
            let w = Complex64::from_polar(c, -e * t);
            for (r, o) in out.iter_mut().enumerate() {
                *o += w * vectors[(r, j)];
            }
        }
        out
    }

    pub fn factor(&self, t: f64, convention: FactorConvention) -> Complex64 {
        let vp = Self::evolve(&self.plus, t);
        let vm = Self::evolve(&self.minus, t);
        // ⟨e^{−iH₊t}ψ | e^{−iH₋t}ψ⟩
        let f: Complex64 = vp.iter().zip(&vm).map(|(a, b)| a.conj() * b).sum();
        match convention {
            FactorConvention::PlusDaggerMinus => f,
            FactorConvention::MinusDaggerPlus => f.conj(),
        }
    }
}

/// `⟨ψ_e| e^{iH₊t} e^{−iH₋t} |ψ_e⟩` with `ψ_e` the ground state at `λ`.
pub fn oracle_factor(params: &ChainParams<f64>, t: f64) -> Result<(Complex64, GroundState)> {
    if !t.is_finite() || t < 0.0 {
        return Err(Error::InvalidInput(format!("time must be finite and non-negative, got {t}")));
    }
    let oracle = Oracle::new(params)?;
    Ok((oracle.factor(t, FactorConvention::default()), oracle.ground.clone()))
}

/// Oracle factor on a grid, sharing one set of diagonalizations.
pub fn oracle_trace(
    params: &ChainParams<f64>,
    t_grid: &[f64],
    convention: FactorConvention,
) -> Result<(Vec<Complex64>, GroundState)> {
    crate::chain_spectrum::check_time_grid(t_grid)?;
    let oracle = Oracle::new(params)?;
    let f = t_grid.iter().map(|&t| oracle.factor(t, convention)).collect();
    Ok((f, oracle.ground.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain_spectrum::{decoherence_factor, ground_energy};
    use approx::assert_abs_diff_eq;

    fn params(l: usize, gamma: f64, lambda: f64, g: f64) -> ChainParams<f64> {
        ChainParams::new(l, gamma, lambda, g).unwrap()
    }

    #[test]
    fn three_site_ising_by_hand() {
        let h = dense_hamiltonian(&params(3, 1.0, 0.0, 0.0), FieldShift::None).unwrap();
        let mut expect = DMatrix::<f64>::zeros(8, 8);
        for s in 0..8usize {
            for mask in [0b011usize, 0b110, 0b101] {
                expect[(s ^ mask, s)] = -1.0;
            }
        }
        assert_eq!(h.entries, expect);
        assert_eq!(h.dim, 8);
    }

    #[test]
    fn shifts_differ_by_field_term() {
        let p = params(5, 0.4, 0.3, 0.07);
        let hp = dense_hamiltonian(&p, FieldShift::Plus).unwrap();
        let hm = dense_hamiltonian(&p, FieldShift::Minus).unwrap();
        let diff = &hp.entries - &hm.entries;
        for r in 0..32usize {
            for c in 0..32usize {
                let expect = if r == c {
                    -2.0 * 0.07 * (5.0 - 2.0 * r.count_ones() as f64)
                } else {
                    0.0
                };
                assert_abs_diff_eq!(diff[(r, c)], expect, epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn size_guard() {
        assert!(matches!(
            dense_hamiltonian(&params(13, 1.0, 0.5, 0.0), FieldShift::None),
            Err(Error::Resource(_))
        ));
    }

    #[test]
    fn strong_field_polarizes() {
        let h = dense_hamiltonian(&params(3, 1.0, 10.0, 0.0), FieldShift::None).unwrap();
        let gs = ground_state(&h).unwrap();
        // three bonds each admix a flipped pair at amplitude 1/(4λ)
        let leak = 3.0 / (4.0 * 10.0_f64).powi(2);
        assert_abs_diff_eq!(gs.vector[0] * gs.vector[0], 1.0 - leak, epsilon = 5e-4);
        assert!(gs.vector[0] > 0.998);
        assert_abs_diff_eq!(gs.vector.norm(), 1.0, epsilon = 1e-12);
        assert!(!gs.degenerate);
    }

    #[test]
    fn ground_energy_matches_extended_precision() {
        // 40-digit dense eigensolve of the 32×32 matrix
        let h = dense_hamiltonian(&params(5, 1.0, 0.5, 0.0), FieldShift::None).unwrap();
        assert_abs_diff_eq!(ground_state(&h).unwrap().energy, -5.325343067060887768896436, epsilon = 1e-12);
    }

    #[test]
    fn ground_energy_matches_free_fermions() {
        let p = params(5, 0.5, 0.8, 0.0);
        let h = dense_hamiltonian(&p, FieldShift::None).unwrap();
        let e = ground_state(&h).unwrap().energy;
        assert_abs_diff_eq!(e, -4.838302172885322106096979, epsilon = 1e-12);
        assert_abs_diff_eq!(e, ground_energy(&p), epsilon = 1e-12);
    }

    #[test]
    fn trivial_oracle_values() {
        let (f, _) = oracle_factor(&params(5, 1.0, 0.5, 0.0), 2.3).unwrap();
        assert_abs_diff_eq!(f.re, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(f.im, 0.0, epsilon = 1e-12);
        let (f, _) = oracle_factor(&params(5, 1.0, 0.5, 0.1), 0.0).unwrap();
        assert_abs_diff_eq!(f.re, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn conventions_are_conjugate() {
        let p = params(5, 1.0, 0.5, 0.1);
        let grid = [0.0, 0.5, 1.0, 3.0];
        let (a, _) = oracle_trace(&p, &grid, FactorConvention::PlusDaggerMinus).unwrap();
        let (b, _) = oracle_trace(&p, &grid, FactorConvention::MinusDaggerPlus).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert_abs_diff_eq!(x.re, y.re, epsilon = 1e-14);
            assert_abs_diff_eq!(x.im, -y.im, epsilon = 1e-14);
            assert!(x.norm() <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn closed_form_matches_oracle_trace() {
        let p = params(5, 1.0, 0.5, 0.1);
        let grid: Vec<f64> = (0..=100).map(|i| i as f64 * 0.05).collect();
        let (f, gs) = oracle_trace(&p, &grid, FactorConvention::default()).unwrap();
        assert!(!gs.degenerate);
        for (t, o) in grid.iter().zip(&f) {
            let c = decoherence_factor(&p, *t).unwrap();
            assert!((c - o).norm() <= 1e-8, "t={t}");
        }
    }
}
