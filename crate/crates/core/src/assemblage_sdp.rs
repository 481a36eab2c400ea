// Copyright 2026 The tsteer Authors
// SPDX-License-Identifier: Apache-2.0

//! Temporal assemblages and their steering weight.
//!
//! The weight is `1 − max Σ_λ Tr σ̃_λ` over hidden-state ensembles
//! `σ̃_λ ⪰ 0` with `σ_{a|i} − Σ_λ D_λ(a|i) σ̃_λ ⪰ 0`, solved as an SDP whose
//! variables are the `2ⁿ` hidden states and one slack block per `(i, a)`.

use num_complex::Complex;

use crate::double_double::Dd;
use crate::dephasing_channel::{apply_dephasing, measure, Outcome, QubitState};
use crate::error::{invalid_input, invalid_param, Result};
use crate::mat2::Mat2;
use crate::scalar::{from_usize, lit, Scalar};
use crate::sdp::{pauli_basis, solve_sdp, SdpProblem, SdpSettings, SolveStatus};
use crate::steering_metrics::MeasurementSet;

/// Conditional states `σ_{a|i}`, stored at index `2i + a`.
#[derive(Debug, Clone, PartialEq)]
pub struct Assemblage<T> {
    n: usize,
    entries: Vec<Mat2<T>>,
}

impl<T: Scalar> Assemblage<T> {
    /// Wraps raw entries; call [`Assemblage::validate`] to check the invariants.
    pub fn from_entries(n: usize, entries: Vec<Mat2<T>>) -> Result<Self> {
        if n == 0 || entries.len() != 2 * n {
            return Err(invalid_input(format!("expected {} entries for n = {n}", 2 * n)));
        }
        Ok(Self { n, entries })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[Mat2<T>] {
        &self.entries
    }

    pub fn entry(&self, direction: usize, outcome: Outcome) -> &Mat2<T> {
        &self.entries[2 * direction + outcome.index()]
    }

    /// `Σ_a σ_{a|i}` for direction `i`.
    pub fn marginal(&self, direction: usize) -> Mat2<T> {
        self.entries[2 * direction] + self.entries[2 * direction + 1]
    }

    /// Positivity, Hermiticity, a common marginal across directions and unit total trace.
    pub fn validate(&self) -> Result<()> {
        let tol = T::invariant_tolerance();
        for (k, e) in self.entries.iter().enumerate() {
            if e.hermiticity_defect() > tol || !e.frobenius_norm().is_finite() {
                return Err(invalid_input(format!("entry {k} is not Hermitian")));
            }
            if e.min_eigenvalue() < -tol {
                return Err(invalid_input(format!("entry {k} is not positive semidefinite")));
            }
        }
        let m0 = self.marginal(0);
        for i in 1..self.n {
            if (self.marginal(i) - m0).frobenius_norm() > tol {
                return Err(invalid_input(format!("marginal of direction {i} differs from direction 0")));
            }
        }
        if (m0.trace().re - T::one()).abs() > tol {
            return Err(invalid_input("assemblage marginal does not have unit trace"));
        }
        Ok(())
    }

    /// Conjugates every entry by `U`.
    pub fn conjugate(&self, u: &Mat2<T>) -> Self {
        let ud = u.adjoint();
        Self { n: self.n, entries: self.entries.iter().map(|e| *u * *e * ud).collect() }
    }
}

/// `σ_{a|i} = P(a|i) · Λ_F(ρ_{a|i})`, zero for impossible outcomes.
pub fn build_assemblage<T: Scalar>(
    f: Complex<T>,
    meas: &MeasurementSet<T>,
    rho0: &QubitState<T>,
) -> Result<Assemblage<T>> {
    let mut entries = Vec::with_capacity(meas.projectors.len());
    for p in &meas.projectors {
        let entry = match measure(rho0, p) {
            Some(c) => apply_dephasing(&c.state, f)?.matrix().scale(c.probability),
            None => Mat2::zero(),
        };
        entries.push(entry);
    }
    Assemblage::from_entries(meas.n, entries)
}

/// All `2ⁿ` deterministic response functions; bit `i` of `λ` set means outcome `−` on direction `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrategySet {
    n: usize,
    table: Vec<Vec<Outcome>>,
}

impl StrategySet {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    pub fn outcome(&self, lambda: usize, direction: usize) -> Outcome {
        self.table[lambda][direction]
    }

    /// `D_λ(a|i) ∈ {0, 1}`.
    pub fn d(&self, lambda: usize, direction: usize, outcome: Outcome) -> u8 {
        u8::from(self.table[lambda][direction] == outcome)
    }
}

pub fn deterministic_strategies(n: usize) -> Result<StrategySet> {
    if n != 2 && n != 3 {
        return Err(invalid_input(format!("measurement count must be 2 or 3, got {n}")));
    }
    let table = (0..1usize << n)
        .map(|lambda| {
            (0..n)
                .map(|i| if (lambda >> i) & 1 == 0 { Outcome::Plus } else { Outcome::Minus })
                .collect()
        })
        .collect();
    Ok(StrategySet { n, table })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SdpStatus {
    Optimal,
    MaxIterations,
    /// The assemblage violates its invariants; nothing was solved.
    InfeasibleInput,
    /// The interior-point iteration lost positive definiteness.
    NumericalFailure,
}

impl SdpStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            SdpStatus::Optimal => "optimal",
            SdpStatus::MaxIterations => "max-iterations",
            SdpStatus::InfeasibleInput => "infeasible-input",
            SdpStatus::NumericalFailure => "numerical-failure",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SdpSolution<T> {
    /// `1 − Σ_λ Tr σ̃_λ`.
    pub weight: T,
    pub sigma_tilde: Vec<Mat2<T>>,
    /// Certificate `F_{a|i} ⪰ 0` with `Σ D_λ(a|i) F_{a|i} ⪰ I`, index `2i + a`.
    pub dual: Vec<Mat2<T>>,
    pub primal_objective: T,
    /// `Σ Tr[F_{a|i} σ_{a|i}]` of the certificate, an upper bound on the primal optimum.
    pub dual_objective: T,
    pub gap: T,
    pub primal_residual: T,
    pub dual_residual: T,
    /// Smallest eigenvalue over all `σ_{a|i} − Σ_λ D_λ(a|i) σ̃_λ`.
    pub slack_min_eigenvalue: T,
    pub iterations: usize,
    pub status: SdpStatus,
}

impl<T: Scalar> SdpSolution<T> {
    fn infeasible(n: usize) -> Self {
        Self {
            weight: T::nan(),
            sigma_tilde: vec![Mat2::zero(); 1 << n],
            dual: vec![Mat2::zero(); 2 * n],
            primal_objective: T::nan(),
            dual_objective: T::nan(),
            gap: T::nan(),
            primal_residual: T::nan(),
            dual_residual: T::nan(),
            slack_min_eigenvalue: T::nan(),
            iterations: 0,
            status: SdpStatus::InfeasibleInput,
        }
    }

    fn cast<U: Scalar>(&self) -> SdpSolution<U> {
        let c = |x: T| x.to_f64().map_or(U::nan(), lit);
        SdpSolution {
            weight: c(self.weight),
            sigma_tilde: self.sigma_tilde.iter().map(Mat2::cast).collect(),
            dual: self.dual.iter().map(Mat2::cast).collect(),
            primal_objective: c(self.primal_objective),
            dual_objective: c(self.dual_objective),
            gap: c(self.gap),
            primal_residual: c(self.primal_residual),
            dual_residual: c(self.dual_residual),
            slack_min_eigenvalue: c(self.slack_min_eigenvalue),
            iterations: self.iterations,
            status: self.status,
        }
    }

    /// Lower end of the weight interval implied by the certificate.
    pub fn weight_lower_bound(&self) -> T {
        T::one() - self.dual_objective
    }
}

/// Smallest tolerance [`ts_weight`] accepts.
pub const MIN_TOLERANCE: f64 = 1e-10;

/// Face of the PSD cone an assemblage entry lies on.
#[derive(Debug, Clone, Copy)]
enum Face<T> {
    Full,
    /// Multiples of this rank-one projector.
    Ray(Mat2<T>),
    Zero,
}

impl<T: Scalar> Face<T> {
    /// Rank below `floor · Tr` counts as deficient.
    fn of(entry: &Mat2<T>, floor: T) -> Self {
        let tr = entry.trace().re;
        if tr <= floor {
            return Face::Zero;
        }
        if entry.min_eigenvalue() > floor * tr {
            return Face::Full;
        }
        let (_, r) = entry.bloch_components();
        let len = (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt();
        Face::Ray(Mat2::from_bloch([r[0] / len, r[1] / len, r[2] / len]))
    }

    /// Smallest face containing both.
    fn meet(self, other: Self) -> Self {
        match (self, other) {
            (Face::Zero, _) | (_, Face::Zero) => Face::Zero,
            (Face::Full, f) | (f, Face::Full) => f,
            (Face::Ray(p), Face::Ray(q)) => {
                if p.inner(&q) >= T::one() - T::epsilon() * lit(1024.0) {
                    Face::Ray(p)
                } else {
                    Face::Zero
                }
            }
        }
    }
}

/// SDP block for a variable confined to `face`, as `(block index, basis)`.
fn add_block<T: Scalar>(dims: &mut Vec<usize>, basis: &mut Vec<Option<Mat2<T>>>, face: Face<T>) -> Option<usize> {
    match face {
        Face::Zero => return None,
        Face::Full => {
            dims.push(2);
            basis.push(None);
        }
        Face::Ray(p) => {
            dims.push(1);
            basis.push(Some(p));
        }
    }
    Some(dims.len() - 1)
}

/// Constraint coefficient of `b` on a block with the given basis.
fn coefficient<T: Scalar>(basis: &Option<Mat2<T>>, b: &Mat2<T>) -> Mat2<T> {
    match basis {
        None => *b,
        Some(p) => Mat2::diag(b.inner(p), T::zero()),
    }
}

fn expand<T: Scalar>(basis: &Option<Mat2<T>>, x: &Mat2<T>) -> Mat2<T> {
    match basis {
        None => *x,
        Some(p) => p.scale(x.m[0][0].re),
    }
}

/// Steering weight of an assemblage with duality gap at most `tol`.
///
/// Variables that a rank-deficient entry pins to a ray or to zero are
/// restricted before solving, which keeps the problem strictly feasible.
///
/// Instances that stall at working precision, typically entries within
/// about `1e−6` of rank one, are re-solved in double-double arithmetic.
pub fn ts_weight<T: Scalar>(asm: &Assemblage<T>, tol: T) -> Result<SdpSolution<T>> {
    if !(tol >= lit(MIN_TOLERANCE)) {
        return Err(invalid_param(format!("SDP tolerance must be at least {MIN_TOLERANCE:e}")));
    }
    let n = asm.n;
    deterministic_strategies(n)?;
    if asm.validate().is_err() {
        return Ok(SdpSolution::infeasible(n));
    }
    let floor = T::epsilon() * lit(64.0);
    let sol = solve_weight(asm, tol, floor)?;
    if sol.status == SdpStatus::Optimal || T::epsilon().to_f64() < Some(1e-20) {
        return Ok(sol);
    }
    let wide = Assemblage { n, entries: asm.entries.iter().map(Mat2::cast).collect() };
    let widen = |x: T| x.to_f64().map_or(<Dd as Scalar>::invariant_tolerance(), lit);
    let retry = solve_weight::<Dd>(&wide, widen(tol), widen(floor))?;
    Ok(if retry.status == SdpStatus::Optimal { retry.cast() } else { sol })
}

fn solve_weight<T: Scalar>(asm: &Assemblage<T>, tol: T, floor: T) -> Result<SdpSolution<T>> {
    let n = asm.n;
    let strategies = deterministic_strategies(n)?;
    let ns = strategies.len();
    let faces: Vec<Face<T>> = asm.entries.iter().map(|e| Face::of(e, floor)).collect();
    let mut dims = Vec::new();
    let mut basis = Vec::new();
    let hidden: Vec<Option<usize>> = (0..ns)
        .map(|l| {
            let face = (0..n).fold(Face::Full, |f, i| f.meet(faces[2 * i + strategies.outcome(l, i).index()]));
            add_block(&mut dims, &mut basis, face)
        })
        .collect();
    let slacks: Vec<Option<usize>> = faces.iter().map(|&f| add_block(&mut dims, &mut basis, f)).collect();

    let mut problem = SdpProblem::new(dims)?;
    for &j in hidden.iter().flatten() {
        problem.set_objective(j, coefficient(&basis[j], &Mat2::identity()))?;
    }
    let pauli = pauli_basis::<T>();
    for i in 0..n {
        for a in Outcome::BOTH {
            let k = 2 * i + a.index();
            let rows: Vec<Mat2<T>> = match faces[k] {
                Face::Zero => continue,
                Face::Ray(p) => vec![p],
                Face::Full => pauli.to_vec(),
            };
            let members: Vec<usize> = (0..ns)
                .filter(|&l| strategies.d(l, i, a) == 1)
                .filter_map(|l| hidden[l])
                .chain(slacks[k])
                .collect();
            for b in &rows {
                let terms = members.iter().map(|&j| (j, coefficient(&basis[j], b))).collect();
                problem.add_constraint(terms, b.inner(asm.entry(i, a)))?;
            }
        }
    }
    let settings = SdpSettings { gap_tol: tol, feas_tol: tol * lit(0.1), ..SdpSettings::default() };
    let out = solve_sdp(&problem, &settings)?;

    let sigma_tilde: Vec<Mat2<T>> = hidden
        .iter()
        .map(|h| h.map_or(Mat2::zero(), |j| expand(&basis[j], &out.x[j])))
        .collect();
    let mut slack_min = T::infinity();
    for i in 0..n {
        for a in Outcome::BOTH {
            let mut s = *asm.entry(i, a);
            for (l, st) in sigma_tilde.iter().enumerate() {
                if strategies.d(l, i, a) == 1 {
                    s = s - *st;
                }
            }
            slack_min = slack_min.min(s.min_eigenvalue());
        }
    }

    let reduced: Vec<Mat2<T>> = slacks
        .iter()
        .map(|s| s.map_or(Mat2::zero(), |j| expand(&basis[j], &out.z[j]).psd_projection()))
        .collect();
    let (dual, dual_objective) = certificate(asm, &strategies, &faces, &reduced);

    let status = match out.status {
        SolveStatus::Optimal => SdpStatus::Optimal,
        SolveStatus::MaxIterations => SdpStatus::MaxIterations,
        SolveStatus::NumericalFailure => SdpStatus::NumericalFailure,
    };
    Ok(SdpSolution {
        weight: T::one() - out.primal_objective,
        sigma_tilde,
        dual,
        primal_objective: out.primal_objective,
        dual_objective,
        gap: dual_objective - out.primal_objective,
        primal_residual: out.primal_residual,
        dual_residual: out.dual_residual,
        slack_min_eigenvalue: slack_min,
        iterations: out.iterations,
        status,
    })
}

/// Lifts the reduced dual to a certificate for the full problem.
///
/// Entries on a ray get a penalty `κ(I − P)` off the ray; the remaining
/// shortfall of `Σ_λ D_λ F ⪰ I` is closed with a multiple of the identity.
/// `κ` is picked from a coarse grid to minimize the certified bound.
fn certificate<T: Scalar>(
    asm: &Assemblage<T>,
    strategies: &StrategySet,
    faces: &[Face<T>],
    reduced: &[Mat2<T>],
) -> (Vec<Mat2<T>>, T) {
    let n = asm.n;
    let build = |kappa: T| {
        let mut dual: Vec<Mat2<T>> = reduced
            .iter()
            .zip(faces)
            .map(|(f, face)| match face {
                Face::Full => *f,
                Face::Ray(p) => *f + (Mat2::identity() - *p).scale(kappa),
                Face::Zero => Mat2::identity().scale(kappa),
            })
            .collect();
        let coverage = (0..strategies.len())
            .map(|l| {
                (0..n)
                    .map(|i| dual[2 * i + strategies.outcome(l, i).index()])
                    .fold(Mat2::zero(), |acc, f| acc + f)
                    .min_eigenvalue()
            })
            .fold(T::infinity(), |x, y| x.min(y));
        if coverage < T::one() {
            let shift = (T::one() - coverage) / from_usize::<T>(n);
            dual.iter_mut().for_each(|f| *f += Mat2::identity().scale(shift));
        }
        let objective: T = dual.iter().zip(&asm.entries).map(|(f, s)| f.inner(s)).sum();
        (dual, objective)
    };
    if faces.iter().all(|f| matches!(f, Face::Full)) {
        return build(T::zero());
    }
    (0..=12)
        .map(|e| build(lit::<T>(10.0).powi(e)))
        .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal))
        .expect("grid is non-empty")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mat2::half_angle_rotation;
    use crate::steering_metrics::{build_measurements, AxisPreset};
    use proptest::prelude::*;

    type C = Complex<f64>;
    const TOL: f64 = 1e-8;

    fn mixed() -> QubitState<f64> {
        QubitState::maximally_mixed()
    }

    fn weight_for(f: C, meas: &MeasurementSet<f64>) -> SdpSolution<f64> {
        let asm = build_assemblage(f, meas, &mixed()).unwrap();
        let sol = ts_weight(&asm, TOL).unwrap();
        assert_eq!(sol.status, SdpStatus::Optimal, "{sol:?}");
        sol
    }

    fn check_health(sol: &SdpSolution<f64>) {
        assert!(sol.primal_residual <= 1e-8 && sol.dual_residual <= 1e-8, "{sol:?}");
        assert!(sol.gap <= 1e-6 && sol.gap >= -1e-8, "{sol:?}");
        assert!(sol.slack_min_eigenvalue >= -1e-8);
        for s in &sol.sigma_tilde {
            assert!(s.min_eigenvalue() >= -1e-8);
        }
        for f in &sol.dual {
            assert!(f.min_eigenvalue() >= -1e-12);
        }
    }

    #[test]
    fn strategies_enumerate() {
        for n in [2, 3] {
            let s = deterministic_strategies(n).unwrap();
            assert_eq!(s.len(), 1 << n);
            for l in 0..s.len() {
                for i in 0..n {
                    assert_eq!(s.d(l, i, Outcome::Plus) + s.d(l, i, Outcome::Minus), 1);
                }
                for m in 0..l {
                    assert_ne!(s.table[l], s.table[m]);
                }
            }
        }
        assert!(deterministic_strategies(1).is_err());
    }

    #[test]
    fn assemblage_examples() {
        let std2 = MeasurementSet::preset(AxisPreset::Standard, 2).unwrap();
        let asm = build_assemblage(C::new(1.0, 0.0), &std2, &mixed()).unwrap();
        asm.validate().unwrap();
        for p in &std2.projectors {
            let e = asm.entry(p.direction, p.outcome);
            assert!(e.max_abs_diff(&p.matrix.scale(0.5)) < 1e-15);
        }
        let asm = build_assemblage(C::new(0.0, 0.0), &std2, &mixed()).unwrap();
        assert!(asm.entry(0, Outcome::Plus).max_abs_diff(&Mat2::diag(0.5, 0.0)) < 1e-15);
        assert!(asm.entry(0, Outcome::Minus).max_abs_diff(&Mat2::diag(0.0, 0.5)) < 1e-15);
        assert!(asm.entry(1, Outcome::Plus).max_abs_diff(&Mat2::identity().scale(0.25)) < 1e-15);
    }

    #[test]
    fn dephased_assemblage_has_zero_weight() {
        let std2 = MeasurementSet::preset(AxisPreset::Standard, 2).unwrap();
        let sol = weight_for(C::new(0.0, 0.0), &std2);
        check_health(&sol);
        assert!(sol.weight.abs() <= 1e-7);
    }

    #[test]
    fn maximally_mixed_entries_have_zero_weight() {
        let asm = Assemblage::from_entries(2, vec![Mat2::identity().scale(0.25); 4]).unwrap();
        let sol = ts_weight(&asm, TOL).unwrap();
        check_health(&sol);
        assert!(sol.weight.abs() <= 1e-7);
    }

    #[test]
    fn pure_assemblage_is_fully_steerable() {
        // external conic solver: w* = 1 for {σ_z, σₓ} at F = 1
        let std2 = MeasurementSet::preset(AxisPreset::Standard, 2).unwrap();
        let sol = weight_for(C::new(1.0, 0.0), &std2);
        check_health(&sol);
        assert!((sol.weight - 1.0).abs() <= 1e-7);
    }

    #[test]
    fn equatorial_references() {
        // external conic solver, real F with axes {σₓ, σ_y}
        let eq = MeasurementSet::preset(AxisPreset::Equatorial, 2).unwrap();
        for (eta, w) in [(0.75, 0.14644658200175276), (0.9, 0.658578632569524)] {
            let sol = weight_for(C::new(eta, 0.0), &eq);
            check_health(&sol);
            assert!((sol.weight - w).abs() <= 1e-7, "eta={eta} w={}", sol.weight);
        }
    }

    #[test]
    fn generic_axes_references() {
        // external conic solver at accuracy ~1e-8
        let a1 = [-0.31264296395898833, -0.9092974268256817, -0.2746498983344665];
        let a2 = [-0.6831373392186239, 0.41614683654714235, -0.6001209763015328];
        let a3 = [0.6599831458849822, 0.0, -0.7512804051402927];
        let f = C::new(0.6883579685560397, 0.579795918513922);
        let w2 = weight_for(f, &MeasurementSet::from_axes(&[a1, a2]).unwrap());
        let w3 = weight_for(f, &MeasurementSet::from_axes(&[a1, a2, a3]).unwrap());
        assert!((w2.weight - 0.7371394550739538).abs() <= 1e-6);
        assert!((w3.weight - 0.8478092133320094).abs() <= 1e-6);

        let b1 = [0.8514029104439915, -0.29552020666133955, 0.4333369261237031];
        let b2 = [-0.2633697832234622, -0.955336489125606, -0.13404681954446868];
        let b3 = [0.4535961214255773, 0.0, -0.8912073600614354];
        let f = C::new(0.6, 0.0);
        let w2 = weight_for(f, &MeasurementSet::from_axes(&[b1, b2]).unwrap());
        let w3 = weight_for(f, &MeasurementSet::from_axes(&[b1, b2, b3]).unwrap());
        assert!(w2.weight.abs() <= 1e-6);
        assert!((w3.weight - 0.44125237474059786).abs() <= 1e-6);

        let c1 = [0.14110875607099124, -0.9320390859672263, 0.3337535935229384];
        let c2 = [-0.3629531158242271, -0.36235775447667345, -0.8584648469705141];
        let f = C::new(0.254123887193358, -0.9153802761463332);
        let w = weight_for(f, &MeasurementSet::from_axes(&[c1, c2]).unwrap());
        assert!((w.weight - 0.9086097543168742).abs() <= 1e-6);
    }

    #[test]
    fn invalid_input_is_flagged() {
        let bad = Assemblage::from_entries(2, vec![Mat2::diag(0.5, -0.1), Mat2::zero(), Mat2::zero(), Mat2::zero()])
            .unwrap();
        let sol = ts_weight(&bad, TOL).unwrap();
        assert_eq!(sol.status, SdpStatus::InfeasibleInput);
        assert!(sol.weight.is_nan());
        let good = Assemblage::from_entries(2, vec![Mat2::identity().scale(0.25); 4]).unwrap();
        assert!(ts_weight(&good, 1e-12).is_err());
    }

    #[test]
    fn f32_weight() {
        let eq = MeasurementSet::<f32>::preset(AxisPreset::Equatorial, 2).unwrap();
        let asm = build_assemblage(Complex::new(0.9f32, 0.0), &eq, &QubitState::maximally_mixed()).unwrap();
        let sol = ts_weight(&asm, f32::default_gap_tolerance()).unwrap();
        assert!((sol.weight - 0.658_578_6).abs() < 5e-3, "{sol:?}");
    }

    fn angle() -> impl Strategy<Value = f64> {
        0.0..std::f64::consts::PI
    }

    fn factor() -> impl Strategy<Value = C> {
        (0.0..=1.0f64, 0.0..std::f64::consts::TAU).prop_map(|(r, a)| C::from_polar(r, a))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn weight_in_unit_interval_and_sandwiched(theta in angle(), phi in angle(), f in factor()) {
            let sol = weight_for(f, &build_measurements(theta, phi, 2).unwrap());
            check_health(&sol);
            prop_assert!(sol.weight >= -1e-8 && sol.weight <= 1.0 + 1e-8);
            prop_assert!(sol.weight_lower_bound() <= sol.weight + 1e-8);
        }

        #[test]
        fn unitary_covariance(theta in angle(), phi in angle(), f in factor(), u in prop::array::uniform3(-3.0..3.0f64)) {
            let asm = build_assemblage(f, &build_measurements(theta, phi, 2).unwrap(), &mixed()).unwrap();
            let rot = half_angle_rotation(u[0], &Mat2::pauli_z())
                * half_angle_rotation(u[1], &Mat2::pauli_y())
                * half_angle_rotation(u[2], &Mat2::pauli_x());
            let a = ts_weight(&asm, TOL).unwrap().weight;
            let b = ts_weight(&asm.conjugate(&rot), TOL).unwrap().weight;
            prop_assert!((a - b).abs() <= 1e-7, "{a} vs {b}");
        }

        #[test]
        fn third_direction_never_lowers_weight(theta in angle(), phi in angle(), f in factor()) {
            let m3 = build_measurements(theta, phi, 3).unwrap();
            let w3 = weight_for(f, &m3).weight;
            let w2 = weight_for(f, &m3.truncate(2).unwrap()).weight;
            prop_assert!(w3 >= w2 - 1e-7, "{w3} < {w2}");
        }
    }
}
