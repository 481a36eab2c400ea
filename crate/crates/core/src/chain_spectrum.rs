// Copyright 2026 The tsteer Authors
// SPDX-License-Identifier: Apache-2.0

//! Free-fermion spectrum of the periodic XY chain and the decoherence factor
//! it induces on a qubit coupled through `g σ_z Σ_l σ_l^z`.
//!
//! The chain is diagonalized into (k, −k) quasiparticle pairs. Which momenta
//! appear depends on the fermion-parity sector of the state: the periodic
//! sector uses `q = 2πk/L` plus an unpaired `q = 0` mode, the antiperiodic
//! sector uses `q = π(2k − 1)/L` plus an unpaired `q = π` mode. The spin-chain
//! ground state lives in whichever sector has the lower energy.
//!
//! Every factor here follows one convention:
//! `F_t = ⟨ψ_e| e^{iH₊t} e^{−iH₋t} |ψ_e⟩`, where `H±` is the chain at field
//! `λ ± g` and `ψ_e` is the ground state at `λ`. The opposite ordering
//! gives the complex conjugate.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use rayon::prelude::*;

use crate::error::{invalid_input, invalid_param, Error, Result};
use crate::scalar::{from_usize, lit, Scalar};

/// Physical configuration of the bath and its coupling to the qubit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainParams<T> {
    size: usize,
    gamma: T,
    lambda: T,
    coupling: T,
}

impl<T: Scalar> ChainParams<T> {
    /// `size` is the odd spin count `L = 2M + 1`, `gamma` the anisotropy,
    /// `lambda` the transverse field and `coupling` the qubit–bath strength `g`.
    pub fn new(size: usize, gamma: T, lambda: T, coupling: T) -> Result<Self> {
        if size < 3 || size % 2 == 0 {
            return Err(invalid_param(format!(
                "chain size L must be odd and at least 3, got {size}"
            )));
        }
        if !(gamma.is_finite() && lambda.is_finite() && coupling.is_finite()) {
            return Err(invalid_param("gamma, lambda and g must be finite"));
        }
        if gamma < T::zero() || gamma > T::one() {
            return Err(invalid_param(format!("gamma must lie in [0, 1], got {gamma}")));
        }
        if coupling < T::zero() {
            return Err(invalid_param(format!("coupling g must be non-negative, got {coupling}")));
        }
        Ok(Self { size, gamma, lambda, coupling })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Number of (k, −k) pairs, `M = (L − 1)/2`.
    pub fn pair_count(&self) -> usize {
        (self.size - 1) / 2
    }

    pub fn gamma(&self) -> T {
        self.gamma
    }

    pub fn lambda(&self) -> T {
        self.lambda
    }

    pub fn coupling(&self) -> T {
        self.coupling
    }

    pub fn field(&self, shift: FieldShift) -> T {
        match shift {
            FieldShift::None => self.lambda,
            FieldShift::Plus => self.lambda + self.coupling,
            FieldShift::Minus => self.lambda - self.coupling,
        }
    }

    pub fn with_lambda(&self, lambda: T) -> Result<Self> {
        Self::new(self.size, self.gamma, lambda, self.coupling)
    }

    pub fn with_gamma(&self, gamma: T) -> Result<Self> {
        Self::new(self.size, gamma, self.lambda, self.coupling)
    }

    pub fn with_coupling(&self, coupling: T) -> Result<Self> {
        Self::new(self.size, self.gamma, self.lambda, coupling)
    }
}

/// Which transverse field a Hamiltonian is evaluated at.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldShift {
    /// `λ`
    None,
    /// `λ + g`
    Plus,
    /// `λ − g`
    Minus,
}

/// Fermion-parity sector fixing the allowed momenta.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MomentumSector {
    /// `q = 2πk/L`, unpaired mode at `q = 0`.
    Periodic,
    /// `q = π(2k − 1)/L`, unpaired mode at `q = π`.
    Antiperiodic,
}

impl MomentumSector {
    pub fn momentum<T: Scalar>(self, k: usize, size: usize) -> T {
        let two_pi = T::PI() + T::PI();
        match self {
            MomentumSector::Periodic => two_pi * from_usize::<T>(k) / from_usize::<T>(size),
            MomentumSector::Antiperiodic => {
                T::PI() * from_usize::<T>(2 * k - 1) / from_usize::<T>(size)
            }
        }
    }

    /// Energy of the unpaired mode in the parity-allowed occupation.
    fn unpaired_energy<T: Scalar>(self, field: T) -> T {
        match self {
            MomentumSector::Periodic => field - T::one(),
            MomentumSector::Antiperiodic => -(field + T::one()),
        }
    }

    /// Sign `s` of the global phase `e^{2isgt}` contributed by the unpaired mode.
    fn phase_sign<T: Scalar>(self) -> T {
        match self {
            MomentumSector::Periodic => T::one(),
            MomentumSector::Antiperiodic => -T::one(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            MomentumSector::Periodic => "periodic",
            MomentumSector::Antiperiodic => "antiperiodic",
        }
    }
}

/// How the momentum sector of the initial bath state is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum SectorChoice {
    /// The sector holding the spin-chain ground state (periodic on an exact tie).
    #[default]
    Ground,
    Fixed(MomentumSector),
}

impl SectorChoice {
    pub fn resolve<T: Scalar>(self, params: &ChainParams<T>) -> MomentumSector {
        match self {
            SectorChoice::Ground => ground_sector(params),
            SectorChoice::Fixed(s) => s,
        }
    }
}

impl fmt::Display for SectorChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SectorChoice::Ground => f.write_str("ground"),
            SectorChoice::Fixed(s) => f.write_str(s.name()),
        }
    }
}

impl FromStr for SectorChoice {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "ground" => Ok(SectorChoice::Ground),
            "periodic" => Ok(SectorChoice::Fixed(MomentumSector::Periodic)),
            "antiperiodic" => Ok(SectorChoice::Fixed(MomentumSector::Antiperiodic)),
            other => Err(format!(
                "unknown sector '{other}' (expected ground, periodic or antiperiodic)"
            )),
        }
    }
}

/// Per-mode frequencies and Bogoliubov angles.
///
/// `theta*` hold principal-branch values of `arcsin(2γ sin q / Ω)`. The
/// relative angles `alpha_±` come from the branch-resolved angles, whose
/// cosine carries the sign of `x − cos q`. They equal `theta − theta_±`
/// whenever `λ` and `λ ± g` sit on the same side of `cos q`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeSpectrum<T> {
    pub k: usize,
    pub momentum: T,
    pub omega: T,
    pub omega_plus: T,
    pub omega_minus: T,
    pub theta: T,
    pub theta_plus: T,
    pub theta_minus: T,
    pub alpha_plus: T,
    pub alpha_minus: T,
}

/// `Ω = −2 sqrt((x − cos q)² + γ² sin² q)`.
pub fn mode_frequency<T: Scalar>(gamma: T, field: T, q: T) -> T {
    let a = field - q.cos();
    let b = gamma * q.sin();
    -lit::<T>(2.0) * a.hypot(b)
}

/// Principal-branch `arcsin(2γ sin q / Ω)`, zero at the `0/0` point.
pub fn principal_angle<T: Scalar>(gamma: T, q: T, omega: T) -> T {
    if omega == T::zero() {
        return T::zero();
    }
    let s = lit::<T>(2.0) * gamma * q.sin() / omega;
    s.max(-T::one()).min(T::one()).asin()
}

/// Bogoliubov angle on the full circle: `sin θ = 2γ sin q / Ω`,
/// `cos θ ∝ x − cos q`.
pub fn branch_angle<T: Scalar>(gamma: T, field: T, q: T) -> T {
    let num = -gamma * q.sin();
    let den = field - q.cos();
    if num == T::zero() && den == T::zero() {
        return T::zero();
    }
    num.atan2(den)
}

fn build_mode<T: Scalar>(params: &ChainParams<T>, sector: MomentumSector, k: usize) -> ModeSpectrum<T> {
    let q: T = sector.momentum(k, params.size);
    let g = params.gamma;
    let (x0, xp, xm) = (
        params.field(FieldShift::None),
        params.field(FieldShift::Plus),
        params.field(FieldShift::Minus),
    );
    let (omega, omega_plus, omega_minus) =
        (mode_frequency(g, x0, q), mode_frequency(g, xp, q), mode_frequency(g, xm, q));
    let b0 = branch_angle(g, x0, q);
    ModeSpectrum {
        k,
        momentum: q,
        omega,
        omega_plus,
        omega_minus,
        theta: principal_angle(g, q, omega),
        theta_plus: principal_angle(g, q, omega_plus),
        theta_minus: principal_angle(g, q, omega_minus),
        alpha_plus: b0 - branch_angle(g, xp, q),
        alpha_minus: b0 - branch_angle(g, xm, q),
    }
}

/// Mode `k` (1 ≤ k ≤ M) at the integer momenta `2πk/L`.
pub fn mode_spectrum<T: Scalar>(params: &ChainParams<T>, k: usize) -> Result<ModeSpectrum<T>> {
    mode_spectrum_in(params, MomentumSector::Periodic, k)
}

pub fn mode_spectrum_in<T: Scalar>(
    params: &ChainParams<T>,
    sector: MomentumSector,
    k: usize,
) -> Result<ModeSpectrum<T>> {
    if k == 0 || k > params.pair_count() {
        return Err(invalid_input(format!(
            "mode index {k} outside 1..={}",
            params.pair_count()
        )));
    }
    Ok(build_mode(params, sector, k))
}

/// Energy of the lowest state in `sector` at the unshifted field.
pub fn sector_energy<T: Scalar>(params: &ChainParams<T>, sector: MomentumSector) -> T {
    let pairs: T = (1..=params.pair_count())
        .map(|k| mode_frequency(params.gamma, params.lambda, sector.momentum(k, params.size)))
        .sum();
    pairs + sector.unpaired_energy(params.lambda)
}

/// Ground-state energy of the spin chain at the unshifted field.
pub fn ground_energy<T: Scalar>(params: &ChainParams<T>) -> T {
    let p = sector_energy(params, MomentumSector::Periodic);
    let a = sector_energy(params, MomentumSector::Antiperiodic);
    p.min(a)
}

/// Sector of the ground state; ties within rounding go to the periodic sector.
pub fn ground_sector<T: Scalar>(params: &ChainParams<T>) -> MomentumSector {
    let p = sector_energy(params, MomentumSector::Periodic);
    let a = sector_energy(params, MomentumSector::Antiperiodic);
    let scale = lit::<T>(4.0) * from_usize::<T>(params.size) + params.lambda.abs();
    let tie = lit::<T>(64.0) * T::epsilon() * scale;
    if a < p - tie {
        MomentumSector::Antiperiodic
    } else {
        MomentumSector::Periodic
    }
}

/// All pair modes of one sector, precomputed for repeated time evaluation.
#[derive(Debug, Clone)]
pub struct Spectrum<T> {
    params: ChainParams<T>,
    sector: MomentumSector,
    modes: Vec<ModeSpectrum<T>>,
}

impl<T: Scalar> Spectrum<T> {
    pub fn new(params: &ChainParams<T>, sector: MomentumSector) -> Self {
        let modes = (1..=params.pair_count())
            .map(|k| build_mode(params, sector, k))
            .collect();
        Self { params: *params, sector, modes }
    }

    pub fn ground(params: &ChainParams<T>) -> Self {
        Self::new(params, ground_sector(params))
    }

    pub fn with_choice(params: &ChainParams<T>, choice: SectorChoice) -> Self {
        Self::new(params, choice.resolve(params))
    }

    pub fn params(&self) -> &ChainParams<T> {
        &self.params
    }

    pub fn sector(&self) -> MomentumSector {
        self.sector
    }

    pub fn modes(&self) -> &[ModeSpectrum<T>] {
        &self.modes
    }

    /// Complex contribution of one pair to `F_t`.
    pub fn mode_factor(mode: &ModeSpectrum<T>, t: T) -> Complex<T> {
        let (sa, ca) = (mode.omega_minus * t).sin_cos();
        let (sb, cb) = (mode.omega_plus * t).sin_cos();
        let re = ca * cb + sa * sb * (mode.alpha_plus - mode.alpha_minus).cos();
        let im = ca * sb * mode.alpha_plus.cos() - sa * cb * mode.alpha_minus.cos();
        Complex::new(re, im)
    }

    /// Modulus of one pair's contribution written through `α_±`.
    pub fn mode_norm(mode: &ModeSpectrum<T>, t: T) -> T {
        let (sa, ca) = (mode.omega_minus * t).sin_cos();
        let (sb, cb) = (mode.omega_plus * t).sin_cos();
        let cross = ca * sb * mode.alpha_plus.sin() - sa * cb * mode.alpha_minus.sin();
        let rel = (mode.alpha_plus - mode.alpha_minus).sin();
        let v = T::one() - cross * cross - sb * sb * sa * sa * rel * rel;
        v.max(T::zero()).sqrt()
    }

    /// `F_t`, accumulated left to right over increasing `k`.
    pub fn factor(&self, t: T) -> Complex<T> {
        let phase = lit::<T>(2.0) * self.sector.phase_sign::<T>() * self.params.coupling * t;
        let mut acc = Complex::new(phase.cos(), phase.sin());
        for mode in &self.modes {
            acc = acc * Self::mode_factor(mode, t);
        }
        acc
    }

    /// `|F_t|` from the product of per-mode moduli.
    pub fn norm_direct(&self, t: T) -> T {
        self.modes.iter().map(|m| Self::mode_norm(m, t)).fold(T::one(), |a, b| a * b)
    }

    /// Product of the first `k_c` per-mode moduli.
    pub fn cutoff_bound(&self, k_c: usize, t: T) -> Result<T> {
        check_cutoff(&self.params, k_c)?;
        Ok(self.modes[..k_c]
            .iter()
            .map(|m| Self::mode_norm(m, t))
            .fold(T::one(), |a, b| a * b))
    }
}

/// One point of a decoherence-factor trace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecoherenceSample<T> {
    pub t: T,
    pub f: Complex<T>,
    pub abs_f: T,
    pub re_f: T,
}

impl<T: Scalar> DecoherenceSample<T> {
    pub fn new(t: T, f: Complex<T>) -> Self {
        Self { t, f, abs_f: f.norm(), re_f: f.re }
    }
}

fn check_time<T: Scalar>(t: T) -> Result<()> {
    if !t.is_finite() || t < T::zero() {
        return Err(invalid_input(format!("time must be finite and non-negative, got {t}")));
    }
    Ok(())
}

fn check_cutoff<T: Scalar>(params: &ChainParams<T>, k_c: usize) -> Result<()> {
    if k_c == 0 || k_c > params.pair_count() {
        return Err(invalid_input(format!(
            "cutoff K_c = {k_c} outside 1..={}",
            params.pair_count()
        )));
    }
    Ok(())
}

/// Validates an evaluation grid: nonempty, strictly increasing, starting at t ≥ 0.
pub fn check_time_grid<T: Scalar>(grid: &[T]) -> Result<()> {
    let first = grid.first().ok_or_else(|| invalid_input("time grid is empty"))?;
    check_time(*first)?;
    for (i, w) in grid.windows(2).enumerate() {
        if !(w[1] > w[0]) || !w[1].is_finite() {
            return Err(invalid_input(format!(
                "time grid not strictly increasing at index {}",
                i + 1
            )));
        }
    }
    Ok(())
}

/// `start, start + step, …` up to `stop`, with `stop` appended when the
/// step does not land on it.
pub fn uniform_grid<T: Scalar>(start: T, stop: T, step: T) -> Result<Vec<T>> {
    if !(start.is_finite() && stop.is_finite() && step.is_finite()) || step <= T::zero() || stop < start {
        return Err(invalid_input(format!(
            "grid [{start}, {stop}] with step {step} is not a valid increasing grid"
        )));
    }
    let span = (stop - start) / step;
    let count = (span + lit(1e-9)).floor().to_usize().ok_or_else(|| invalid_input("grid too long"))?;
    let mut grid: Vec<T> = (0..=count).map(|i| start + from_usize::<T>(i) * step).collect();
    let last = grid[grid.len() - 1];
    if stop - last > step * lit(1e-9) {
        grid.push(stop);
    } else {
        let n = grid.len();
        grid[n - 1] = stop;
    }
    Ok(grid)
}

/// `F_t` for the ground-state sector.
pub fn decoherence_factor<T: Scalar>(params: &ChainParams<T>, t: T) -> Result<Complex<T>> {
    check_time(t)?;
    Ok(Spectrum::ground(params).factor(t))
}

/// `F_t` on a grid, one sample per point, evaluated in parallel.
pub fn decoherence_trace<T: Scalar>(
    params: &ChainParams<T>,
    t_grid: &[T],
) -> Result<Vec<DecoherenceSample<T>>> {
    decoherence_trace_with(&Spectrum::ground(params), t_grid)
}

pub fn decoherence_trace_with<T: Scalar>(
    spectrum: &Spectrum<T>,
    t_grid: &[T],
) -> Result<Vec<DecoherenceSample<T>>> {
    check_time_grid(t_grid)?;
    Ok(t_grid
        .par_iter()
        .map(|&t| DecoherenceSample::new(t, spectrum.factor(t)))
        .collect())
}

/// `|F_t|` from the product formula in the relative angles `α_±`.
pub fn factor_norm_direct<T: Scalar>(params: &ChainParams<T>, t: T) -> Result<T> {
    check_time(t)?;
    Ok(Spectrum::ground(params).norm_direct(t))
}

/// Cutoff-truncated `|F_t|_{K_c}`; never below `|F_t|` since each factor is at most one.
pub fn cutoff_bound<T: Scalar>(params: &ChainParams<T>, k_c: usize, t: T) -> Result<T> {
    check_time(t)?;
    Spectrum::ground(params).cutoff_bound(k_c, t)
}

/// Short-time Gaussian decay data near criticality.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutoffApprox<T> {
    pub k_c: usize,
    /// `E(K_c) = 2π² K_c (K_c + 1)(2K_c + 1) / (6L²)`
    pub e_kc: T,
    /// `R_c = 16 E(K_c) γ² g² (1 − λ)⁻²`
    pub r_c: T,
}

pub fn cutoff_energy<T: Scalar>(k_c: usize, size: usize) -> T {
    let k = from_usize::<T>(k_c);
    let l = from_usize::<T>(size);
    let two = lit::<T>(2.0);
    two * T::PI() * T::PI() * k * (k + T::one()) * (two * k + T::one()) / (lit::<T>(6.0) * l * l)
}

pub fn gaussian_rate<T: Scalar>(params: &ChainParams<T>, k_c: usize) -> Result<CutoffApprox<T>> {
    check_cutoff(params, k_c)?;
    let d = T::one() - params.lambda;
    if d == T::zero() {
        return Err(Error::Singular("decay rate R_c diverges at lambda = 1".into()));
    }
    let e_kc = cutoff_energy::<T>(k_c, params.size);
    let gg = params.gamma * params.coupling;
    let r_c = lit::<T>(16.0) * e_kc * gg * gg / (d * d);
    Ok(CutoffApprox { k_c, e_kc, r_c })
}

/// Small-momentum approximation of `S(t) = ln |F_t|_{K_c}`.
pub fn log_bound_approx<T: Scalar>(params: &ChainParams<T>, k_c: usize, t: T) -> Result<T> {
    check_cutoff(params, k_c)?;
    check_time(t)?;
    let p = (T::one() - params.field(FieldShift::Plus)).abs();
    let m = (T::one() - params.field(FieldShift::Minus)).abs();
    let c = (T::one() - params.lambda).abs();
    if p == T::zero() || m == T::zero() || c == T::zero() {
        return Err(Error::Singular(
            "log-bound approximation diverges when lambda or lambda ± g equals 1".into(),
        ));
    }
    let two_t = lit::<T>(2.0) * t;
    let (sp, cp) = (two_t * p).sin_cos();
    let (sm, cm) = (two_t * m).sin_cos();
    let gg = params.gamma * params.coupling;
    let prefactor = cutoff_energy::<T>(k_c, params.size) * gg * gg / (p * p * m * m * c * c);
    let bracket = cm * sp * m + sm * cp * p;
    let body = lit::<T>(4.0) * sp * sp * sm * sm * c * c + bracket * bracket;
    Ok(-prefactor * body)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    #[test]
    fn uniform_grid_ends_on_stop() {
        let g = uniform_grid(0.0, 1.0, 0.25).unwrap();
        assert_eq!(g, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        let g = uniform_grid(0.0, 10.0, 0.3).unwrap();
        assert_eq!(g.len(), 35);
        assert_eq!(*g.last().unwrap(), 10.0);
        assert_eq!(uniform_grid(2.0, 2.0, 0.1).unwrap(), vec![2.0]);
        assert!(uniform_grid(0.0, 1.0, 0.0).is_err());
        assert!(uniform_grid(1.0, 0.0, 0.1).is_err());
    }

    fn params(l: usize, gamma: f64, lambda: f64, g: f64) -> ChainParams<f64> {
        ChainParams::new(l, gamma, lambda, g).unwrap()
    }

    #[test]
    fn rejects_invalid_params() {
        assert!(ChainParams::new(4, 1.0, 0.5, 0.1).is_err());
        assert!(ChainParams::new(1, 1.0, 0.5, 0.1).is_err());
        assert!(ChainParams::new(5, 1.5, 0.5, 0.1).is_err());
        assert!(ChainParams::new(5, 1.0, 0.5, -0.1).is_err());
        assert!(ChainParams::new(5, 1.0, f64::NAN, 0.1).is_err());
    }

    #[test]
    fn ising_zero_field_mode() {
        let m = mode_spectrum(&params(5, 1.0, 0.0, 0.0), 1).unwrap();
        assert_abs_diff_eq!(m.omega, -2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(m.theta, -2.0 * PI / 5.0, epsilon = 1e-14);
        assert_eq!(m.theta_plus, m.theta_minus);
        assert_eq!(m.omega_plus, m.omega_minus);
    }

    #[test]
    fn xx_mode_has_zero_angle() {
        let m = mode_spectrum(&params(5, 0.0, 1.0, 0.0), 1).unwrap();
        assert_abs_diff_eq!(m.omega, -2.0 * (1.0 - (2.0 * PI / 5.0).cos()), epsilon = 1e-14);
        assert_eq!(m.theta, 0.0);
    }

    #[test]
    fn mode_matches_extended_precision() {
        // 40-digit evaluation of Ω and arcsin(2γ sin q / Ω) at L=7, γ=0.5, k=2
        let m = mode_spectrum(&params(7, 0.5, 0.8, 0.01), 2).unwrap();
        assert_abs_diff_eq!(m.omega, -2.2655420268595291495, epsilon = 1e-14);
        assert_abs_diff_eq!(m.theta, -0.44485696312059242606, epsilon = 1e-14);
        assert_abs_diff_eq!(m.omega_plus, -2.2836116898858458617, epsilon = 1e-14);
        assert_abs_diff_eq!(m.theta_plus, -0.44108811056179591924, epsilon = 1e-14);
        assert_abs_diff_eq!(m.omega_minus, -2.2475050613403028209, epsilon = 1e-14);
        assert_abs_diff_eq!(m.theta_minus, -0.44868636336030186039, epsilon = 1e-14);
        assert_abs_diff_eq!(m.alpha_plus, m.theta - m.theta_plus, epsilon = 1e-15);
        assert_abs_diff_eq!(m.alpha_minus, m.theta - m.theta_minus, epsilon = 1e-15);
    }

    #[test]
    fn mode_index_out_of_range() {
        let p = params(5, 1.0, 0.5, 0.1);
        assert!(mode_spectrum(&p, 0).is_err());
        assert!(mode_spectrum(&p, 3).is_err());
    }

    #[test]
    fn trivial_factors() {
        let p = params(51, 0.7, 0.9, 0.0);
        for t in [0.0, 0.3, 4.0] {
            let f = decoherence_factor(&p, t).unwrap();
            assert_abs_diff_eq!(f.re, 1.0, epsilon = 1e-12);
            assert_abs_diff_eq!(f.im, 0.0, epsilon = 1e-12);
        }
        let p = params(51, 0.7, 0.9, 0.05);
        let f = decoherence_factor(&p, 0.0).unwrap();
        assert_eq!(f, Complex::new(1.0, 0.0));
    }

    #[test]
    fn brute_force_reference_point() {
        // 2^5-dimensional dense evolution, ⟨ψ|e^{iH₊t}e^{−iH₋t}|ψ⟩ at t = 1
        let f = decoherence_factor(&params(5, 1.0, 0.5, 0.1), 1.0).unwrap();
        assert_abs_diff_eq!(f.re, 0.9300399343081462, epsilon = 1e-10);
        assert_abs_diff_eq!(f.im, -0.25642296129470554, epsilon = 1e-10);
    }

    #[test]
    fn norm_routes_agree() {
        for (l, gamma, lambda, g) in [(5, 1.0, 0.5, 0.1), (101, 0.3, 1.1, 0.02), (1501, 1.0, 1.0, 0.01)] {
            let p = params(l, gamma, lambda, g);
            for t in [0.1, 1.7, 4.9] {
                let a = decoherence_factor(&p, t).unwrap().norm();
                let b = factor_norm_direct(&p, t).unwrap();
                assert_abs_diff_eq!(a, b, epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn trace_validation() {
        let p = params(5, 1.0, 0.5, 0.1);
        assert!(decoherence_trace(&p, &[]).is_err());
        assert!(decoherence_trace(&p, &[0.0, 0.0]).is_err());
        assert!(decoherence_trace(&p, &[-0.1, 0.2]).is_err());
        let one = decoherence_trace(&p, &[0.0]).unwrap();
        assert_eq!(one[0].f, Complex::new(1.0, 0.0));
        let q = params(5, 1.0, 0.5, 0.0);
        for s in decoherence_trace(&q, &[0.0, 1.0, 2.0]).unwrap() {
            assert_abs_diff_eq!(s.re_f, 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn cutoff_full_equals_direct() {
        let p = params(101, 1.0, 0.99, 0.01);
        let m = p.pair_count();
        for t in [0.0, 0.5, 2.0] {
            let full = cutoff_bound(&p, m, t).unwrap();
            let direct = factor_norm_direct(&p, t).unwrap();
            assert_abs_diff_eq!(full, direct, epsilon = 1e-12);
        }
        assert!(cutoff_bound(&p, 5, 0.5).unwrap() >= factor_norm_direct(&p, 0.5).unwrap());
        assert_eq!(cutoff_bound(&p, 5, 0.0).unwrap(), 1.0);
        assert!(cutoff_bound(&p, 0, 0.5).is_err());
        assert!(cutoff_bound(&p, m + 1, 0.5).is_err());
    }

    #[test]
    fn gaussian_rate_formula() {
        let c = gaussian_rate(&params(1501, 1.0, 0.99, 0.01), 10).unwrap();
        let e = 2.0 * PI * PI * 10.0 * 11.0 * 21.0 / (6.0 * 1501.0 * 1501.0);
        assert_abs_diff_eq!(c.e_kc, e, epsilon = 1e-18);
        assert_abs_diff_eq!(c.r_c, 16.0 * e * 1e-4 * 1e4, epsilon = 1e-12);
        assert_eq!(gaussian_rate(&params(1501, 0.0, 0.99, 0.01), 10).unwrap().r_c, 0.0);
        assert_eq!(gaussian_rate(&params(1501, 1.0, 0.99, 0.0), 10).unwrap().r_c, 0.0);
        assert!(matches!(
            gaussian_rate(&params(1501, 1.0, 1.0, 0.01), 10),
            Err(Error::Singular(_))
        ));
    }

    #[test]
    fn log_bound_trivial_values() {
        assert_eq!(log_bound_approx(&params(1501, 0.0, 0.9, 0.01), 10, 0.2).unwrap(), 0.0);
        assert_eq!(log_bound_approx(&params(1501, 1.0, 0.9, 0.01), 10, 0.0).unwrap(), -0.0);
        assert!(log_bound_approx(&params(1501, 1.0, 0.99, 0.01), 10, 0.2).is_err());
        assert!(log_bound_approx(&params(1501, 1.0, 0.9, 0.01), 10, 0.2).unwrap() <= 0.0);
    }

    #[test]
    fn log_bound_tracks_gaussian_at_short_times() {
        // expanding the sines gives −R_c t² plus an O(t⁴) remainder
        let p = params(1501, 1.0, 0.999, 0.0005);
        let r = gaussian_rate(&p, 10).unwrap().r_c;
        for t in [0.01, 0.05, 0.1, 0.2, 0.3] {
            let s = log_bound_approx(&p, 10, t).unwrap();
            let rel = (s + r * t * t).abs() / (r * t * t);
            assert!(rel < 0.1, "t={t} rel={rel}");
        }
    }

    #[test]
    fn sector_selection() {
        // deep paramagnet: antiperiodic (even parity) ground state
        assert_eq!(ground_sector(&params(7, 1.0, 2.0, 0.0)), MomentumSector::Antiperiodic);
        // ordered phase at large L is degenerate to rounding: periodic by convention
        assert_eq!(ground_sector(&params(1501, 1.0, 0.2, 0.0)), MomentumSector::Periodic);
        let p = params(7, 0.6, 1.4, 0.0);
        assert_abs_diff_eq!(
            ground_energy(&p),
            sector_energy(&p, ground_sector(&p)),
            epsilon = 0.0
        );
    }

    #[test]
    fn f32_matches_f64() {
        let p64 = params(101, 1.0, 0.8, 0.01);
        let p32 = ChainParams::<f32>::new(101, 1.0, 0.8, 0.01).unwrap();
        let a = decoherence_factor(&p64, 1.5).unwrap();
        let b = decoherence_factor(&p32, 1.5).unwrap();
        assert!((a.re - b.re as f64).abs() < 1e-4);
        assert!((a.im - b.im as f64).abs() < 1e-4);
    }
}
