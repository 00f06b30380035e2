//! Seeded end-to-end drivers: synthesized schedules in a prescribed cone,
//! their fixed-point, Denjoy–Wolff and univalence diagnostics, the radial
//! reachability experiment and the displacement sweep.
//!
//! Everything here is concrete `f64`; reports are deterministic given a seed.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::diagnostics::{
    denjoy_wolff_locate, fixed_point_report, DenjoyWolff, DwKind, FixedPointReport, RadialSchedule,
    UnivalenceVerdict,
};
use crate::error::{Error, Result};
use crate::evolution::{
    cone_membership, conic_combine, ef_absolute_continuity_check, ef_composition_check, evolve_point,
    radial_classical, AbsoluteContinuityReport, ConeSpec, EvolutionMap, Schedule, Segment,
};
use crate::generators::{
    angular_rate, bp_consistency, conjugate_generator, semigroup_flow, synthesize_generator,
    synthesize_interior_generator, DwPoint, Generator,
};
use crate::geometry::{arc_order, cayley, cayley_inverse, BoundaryPoint, DiskPoint, HalfPlanePoint, PolarGrid};
use crate::herglotz::{
    contact_value, loewner_lemma_check, normalize_at_one, BoundaryAtom, ContactConfiguration, HerglotzFunction,
    LemmaReport, PickFunction, RealAtom,
};
use crate::ode::SolverConfig;

type C = Complex<f64>;

/// Half-plane placements live in `[−CHART_RANGE, CHART_RANGE]` ...
pub const CHART_RANGE: f64 = 3.0;
/// ... at least this far apart.
pub const MIN_CHART_GAP: f64 = 0.2;
/// Boundary fixed-point and multiplier thresholds for a passing run.
pub const LIMIT_RESIDUAL_MAX: f64 = 1e-6;
pub const MULTIPLIER_REL_TOL: f64 = 1e-3;
pub const DW_MATCH_TOL: f64 = 1e-6;
/// Minimum angular separation (radians) of random fixed points for interior `τ`.
pub const INTERIOR_MIN_SEPARATION: f64 = 1.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub seed: u64,
    pub spec: ConeSpec<f64>,
    pub segment_count: usize,
    pub duration_total: f64,
    pub grid: PolarGrid,
    pub solver: SolverConfig<f64>,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if !(1..=16).contains(&self.segment_count) {
            return Err(Error::InvalidInput(format!("segment_count {} outside [1, 16]", self.segment_count)));
        }
        if !(self.duration_total > 0.0 && self.duration_total.is_finite()) {
            return Err(Error::InvalidInput("duration_total must be positive".into()));
        }
        if self.spec.fixed().is_empty() {
            return Err(Error::InvalidInput("the fixed set must not be empty".into()));
        }
        ConeSpec::new(self.spec.fixed().to_vec(), self.spec.tau())?;
        self.solver.validate()
    }
}

/// Kind of Denjoy–Wolff point requested from [`random_spec`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TauKind {
    Boundary,
    Interior,
    /// No common `τ`; every segment picks its own boundary point off `F`.
    Free,
}

fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    (lo.ln() + rng.gen::<f64>() * (hi.ln() - lo.ln())).exp()
}

/// `n` increasing points of `[−3, 3]` with pairwise gaps ≥ 0.2.
pub fn random_chart_points(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    loop {
        let mut xs: Vec<f64> = (0..n).map(|_| rng.gen_range(-CHART_RANGE..CHART_RANGE)).collect();
        xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        if xs.windows(2).all(|w| w[1] - w[0] >= MIN_CHART_GAP) {
            return xs;
        }
    }
}

fn random_unit(rng: &mut ChaCha8Rng) -> BoundaryPoint<f64> {
    BoundaryPoint::from_angle(rng.gen_range(0.0..std::f64::consts::TAU))
}

fn random_circle_points(rng: &mut ChaCha8Rng, n: usize, min_sep: f64) -> Vec<BoundaryPoint<f64>> {
    loop {
        let mut th: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..std::f64::consts::TAU)).collect();
        th.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let wrap = th.first().map_or(0.0, |f| f + std::f64::consts::TAU - th[n - 1]);
        if th.windows(2).all(|w| w[1] - w[0] >= min_sep) && (n < 2 || wrap >= min_sep) {
            return th.into_iter().map(BoundaryPoint::from_angle).collect();
        }
    }
}

/// Random `(F, τ)` with `|F| = card`. Boundary variants place `F` through the
/// half-plane chart of a random rotation so that `τ` sits at infinity.
pub fn random_spec(rng: &mut ChaCha8Rng, card: usize, kind: TauKind) -> Result<ConeSpec<f64>> {
    match kind {
        TauKind::Boundary | TauKind::Free => {
            let rho = random_unit(rng);
            let fixed = random_chart_points(rng, card)
                .into_iter()
                .map(|x| BoundaryPoint::new(cayley_inverse(HalfPlanePoint::real(x)) * rho.value()))
                .collect::<Result<Vec<_>>>()?;
            let tau = (kind == TauKind::Boundary).then_some(DwPoint::Boundary(rho));
            ConeSpec::new(fixed, tau)
        }
        TauKind::Interior => {
            let fixed = random_circle_points(rng, card, INTERIOR_MIN_SEPARATION);
            let r = rng.gen_range(0.0..0.5);
            let tau = DiskPoint::new(random_unit(rng).value() * r)?;
            ConeSpec::new(fixed, Some(DwPoint::Interior(tau)))
        }
    }
}

fn interior_fraction(rng: &mut ChaCha8Rng) -> f64 {
    0.2 + 0.6 * rng.gen::<f64>()
}

fn central_fraction(rng: &mut ChaCha8Rng) -> f64 {
    0.3 + 0.4 * rng.gen::<f64>()
}

/// Random generator vanishing on `F` with Denjoy–Wolff point `τ` (or a random
/// boundary point off `F` when `spec` leaves `τ` free).
pub fn random_cone_generator(rng: &mut ChaCha8Rng, spec: &ConeSpec<f64>) -> Result<Generator<f64>> {
    let tau = match spec.tau() {
        Some(t) => t,
        None => loop {
            let cand = random_unit(rng);
            if spec.fixed().iter().all(|s| s.distance(cand) >= 0.2) {
                break DwPoint::Boundary(cand);
            }
        },
    };
    match tau {
        DwPoint::Boundary(rho) => {
            let mut xs = spec
                .fixed()
                .iter()
                .map(|s| Ok(cayley(s.value() * rho.value().conj())?.value().re))
                .collect::<Result<Vec<f64>>>()?;
            xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let atoms: Vec<f64> = xs.windows(2).map(|w| w[0] + interior_fraction(rng) * (w[1] - w[0])).collect();
            let beta = log_uniform(rng, 0.5, 2.0);
            let pick = synthesize_generator(&xs, &atoms, beta)?;
            let g = conjugate_generator(&pick).rotated(rho);
            let top = max_rate(&g, spec.fixed())?;
            let target = log_uniform(rng, 0.5, 2.0);
            Ok(g.scaled(target / top))
        }
        DwPoint::Interior(t) => {
            let fixed = spec.fixed();
            let anchor = fixed[0];
            let mut order = vec![0usize];
            if fixed.len() > 1 {
                order.extend(arc_order(&fixed[1..], anchor)?.into_iter().map(|i| i + 1));
            }
            let angle_from = |p: BoundaryPoint<f64>| {
                let a = (p.value() * anchor.value().conj()).arg();
                if a < 0.0 {
                    a + std::f64::consts::TAU
                } else {
                    a
                }
            };
            let mut rel: Vec<f64> = order.iter().map(|&i| angle_from(fixed[i])).collect();
            rel.push(std::f64::consts::TAU);
            let atoms: Vec<BoundaryPoint<f64>> = rel
                .windows(2)
                .map(|w| anchor.rotate(BoundaryPoint::from_angle(w[0] + central_fraction(rng) * (w[1] - w[0]))))
                .collect();
            // atom k follows fixed point order[k]; re-align with the original fixed order
            let mut aligned = vec![atoms[0]; atoms.len()];
            for (k, &i) in order.iter().enumerate() {
                aligned[i] = atoms[k];
            }
            // rescale so the largest rate on F is log-uniform in [0.5, 2]
            let unit = synthesize_interior_generator(t, fixed, &aligned, 1.0)?;
            let top = max_rate(&unit, fixed)?;
            let target = log_uniform(rng, 0.5, 2.0);
            synthesize_interior_generator(t, fixed, &aligned, target / top)
        }
    }
}

fn max_rate(g: &Generator<f64>, fixed: &[BoundaryPoint<f64>]) -> Result<f64> {
    fixed.iter().try_fold(0.0f64, |m, &s| Ok(m.max(angular_rate(g, s)?.value())))
}

/// Positive durations summing to `total`.
fn random_durations(rng: &mut ChaCha8Rng, count: usize, total: f64) -> Vec<f64> {
    let w: Vec<f64> = (0..count).map(|_| rng.gen_range(0.5..1.5)).collect();
    let sum: f64 = w.iter().sum();
    w.into_iter().map(|x| total * x / sum).collect()
}

pub fn random_cone_schedule(rng: &mut ChaCha8Rng, spec: &ConeSpec<f64>, count: usize, total: f64) -> Result<Schedule<f64>> {
    let durations = random_durations(rng, count, total);
    let segments = durations
        .into_iter()
        .map(|duration| Ok(Segment { duration, generator: random_cone_generator(rng, spec)? }))
        .collect::<Result<Vec<_>>>()?;
    Schedule::new(segments)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixedPointOutcome {
    pub report: FixedPointReport,
    /// `exp(Σ d_i λ_i(σ))`
    pub expected_derivative: f64,
    pub relative_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Theorem1Run {
    pub seed: u64,
    pub member: bool,
    pub fixed_points: Vec<FixedPointOutcome>,
    pub denjoy_wolff: Option<DenjoyWolff>,
    /// Distance from the located Denjoy–Wolff point to `τ`, when `τ` is prescribed.
    pub dw_error: Option<f64>,
    pub univalence: UnivalenceVerdict,
    pub failures: Vec<String>,
    pub pass: bool,
    /// Present on failure only.
    pub reproduction: Option<ExperimentConfig>,
}

/// Synthesizes a schedule in the cone of `cfg.spec`, evolves it over
/// `[0, T]` and checks `F`, `τ` and univalence on `φ_{0,T}`.
pub fn run_theorem1_suite(cfg: &ExperimentConfig) -> Result<Theorem1Run> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let schedule = random_cone_schedule(&mut rng, &cfg.spec, cfg.segment_count, cfg.duration_total)?;
    let mut failures = Vec::new();

    let membership = cone_membership(&schedule, &cfg.spec);
    if !membership.member {
        failures.push("schedule is not in the cone".to_string());
    }

    let horizon = schedule.total_duration();
    let map = EvolutionMap::new(&schedule, 0.0, horizon, cfg.solver)?;
    let sched = RadialSchedule::default();
    let mut fixed_points = Vec::new();
    for &sigma in cfg.spec.fixed() {
        let mut exponent = 0.0;
        for seg in schedule.segments() {
            exponent += seg.duration * angular_rate(&seg.generator, sigma)?.value();
        }
        let expected = exponent.exp();
        let report = match fixed_point_report(&map, sigma, &sched) {
            Ok(r) => r,
            Err(e) => {
                failures.push(format!("fixed point {:?}: {e}", sigma.value()));
                continue;
            }
        };
        let rel = (report.derivative_estimate - expected).abs() / expected;
        if report.limit_residual > LIMIT_RESIDUAL_MAX {
            failures.push(format!("limit residual {} at {:?}", report.limit_residual, report.point));
        }
        if !report.regular || !(rel <= MULTIPLIER_REL_TOL) {
            failures.push(format!("multiplier {} vs {} at {:?}", report.derivative_estimate, expected, report.point));
        }
        fixed_points.push(FixedPointOutcome { report, expected_derivative: expected, relative_error: rel });
    }

    let (denjoy_wolff, dw_error) = match denjoy_wolff_locate(&map, &sched) {
        Ok(dw) => {
            let err = cfg.spec.tau().map(|tau| {
                let kind_ok = matches!(
                    (tau, dw.kind),
                    (DwPoint::Boundary(_), DwKind::Boundary) | (DwPoint::Interior(_), DwKind::Interior)
                );
                if kind_ok {
                    (dw.point::<f64>() - tau.value()).norm()
                } else {
                    f64::INFINITY
                }
            });
            if let Some(e) = err {
                if !(e <= DW_MATCH_TOL) {
                    failures.push(format!("Denjoy–Wolff point off by {e}"));
                }
            }
            (Some(dw), err)
        }
        Err(e) => {
            failures.push(format!("Denjoy–Wolff location failed: {e}"));
            (None, None)
        }
    };

    let univalence = crate::diagnostics::univalence_heuristic(&map, &cfg.grid);
    if !univalence.pass {
        failures.push("univalence heuristic failed".into());
    }
    let pass = failures.is_empty();
    Ok(Theorem1Run {
        seed: cfg.seed,
        member: membership.member,
        fixed_points,
        denjoy_wolff,
        dw_error,
        univalence,
        failures,
        reproduction: (!pass).then(|| cfg.clone()),
        pass,
    })
}

/// A random configuration for [`run_theorem1_suite`].
pub fn random_theorem1_config(seed: u64, card: usize, kind: TauKind, solver: SolverConfig<f64>) -> Result<ExperimentConfig> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let spec = random_spec(&mut rng, card, kind)?;
    Ok(ExperimentConfig {
        seed,
        spec,
        segment_count: rng.gen_range(1..=3),
        duration_total: rng.gen_range(0.5..1.5),
        grid: PolarGrid::default(),
        solver,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoremASample {
    pub index: usize,
    pub real_subfamily: bool,
    pub phi_at_zero: [f64; 2],
    pub derivative: [f64; 2],
    pub closed_form: [f64; 2],
    pub univalence: bool,
    pub failures: Vec<String>,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoremAReport {
    pub seed: u64,
    pub horizon: f64,
    pub samples: Vec<TheoremASample>,
    pub passed: usize,
    /// `|φ′(0) − e^{−T}|` for `p ≡ 1`.
    pub constant_check: f64,
    pub pass: bool,
}

fn random_normalized(rng: &mut ChaCha8Rng, real: bool) -> Result<HerglotzFunction<f64>> {
    let mut atoms = Vec::new();
    if real {
        // conjugate pairs with equal weight, optionally an atom at −1
        for _ in 0..rng.gen_range(1..=2) {
            let th = rng.gen_range(0.3..std::f64::consts::PI - 0.3);
            let w = rng.gen_range(0.05..1.0);
            atoms.push(BoundaryAtom::new(BoundaryPoint::from_angle(th), w));
            atoms.push(BoundaryAtom::new(BoundaryPoint::from_angle(-th), w));
        }
        if rng.gen::<bool>() {
            atoms.push(BoundaryAtom::new(BoundaryPoint::from_angle(std::f64::consts::PI), rng.gen_range(0.05..1.0)));
        }
    } else {
        for _ in 0..rng.gen_range(1..=3) {
            let th = rng.gen_range(0.3..std::f64::consts::TAU - 0.3);
            atoms.push(BoundaryAtom::new(BoundaryPoint::from_angle(th), rng.gen_range(0.05..1.0)));
        }
    }
    normalize_at_one(&atoms)
}

/// Random radial schedules normalized by `p(1, t) = 1`; every `φ_{0,T}` must
/// fix 0 and pass the univalence screen, and the real sub-family must have
/// `φ′(0) ∈ (0, 1]`.
pub fn run_theorem_a_reachability(samples: usize, seed: u64, horizon: f64, config: &SolverConfig<f64>) -> Result<TheoremAReport> {
    if !(horizon >= 0.0 && horizon.is_finite()) {
        return Err(Error::InvalidInput(format!("horizon {horizon} must be non-negative")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let total = if horizon > 0.0 { horizon } else { 1.0 };
    let mut schedules = Vec::with_capacity(samples);
    for i in 0..samples {
        let real = i % 2 == 0;
        let count = rng.gen_range(1..=3);
        let durations = random_durations(&mut rng, count, total);
        let segments = durations
            .into_iter()
            .map(|duration| Ok(Segment { duration, generator: Generator::radial(random_normalized(&mut rng, real)?) }))
            .collect::<Result<Vec<_>>>()?;
        schedules.push((real, Schedule::new(segments)?));
    }
    let results: Vec<Result<TheoremASample>> = schedules
        .par_iter()
        .enumerate()
        .map(|(index, (real, schedule))| {
            let r = radial_classical(schedule, horizon, config)?;
            let mut failures = Vec::new();
            let phi0 = C::new(r.phi_at_zero[0], r.phi_at_zero[1]).norm();
            if phi0 > 1e-10 {
                failures.push(format!("|φ(0)| = {phi0}"));
            }
            if !r.univalence.pass {
                failures.push("univalence heuristic failed".into());
            }
            let d = C::new(r.derivative[0], r.derivative[1]);
            let closed = C::new(r.derivative_closed_form[0], r.derivative_closed_form[1]);
            if (d - closed).norm() > 1e-8 * closed.norm() {
                failures.push(format!("φ′(0) = {d} vs closed form {closed}"));
            }
            if *real && !(r.positive == Some(true) && d.re <= 1.0 + 1e-12) {
                failures.push(format!("φ′(0) = {d} not in (0, 1]"));
            }
            Ok(TheoremASample {
                index,
                real_subfamily: *real,
                phi_at_zero: r.phi_at_zero,
                derivative: r.derivative,
                closed_form: r.derivative_closed_form,
                univalence: r.univalence.pass,
                pass: failures.is_empty(),
                failures,
            })
        })
        .collect();
    let samples = results.into_iter().collect::<Result<Vec<_>>>()?;
    let unit = Schedule::single(total, Generator::radial(HerglotzFunction::constant(1.0)?))?;
    let r = radial_classical(&unit, horizon, config)?;
    let constant_check = (C::new(r.derivative[0], r.derivative[1]) - (-horizon).exp()).norm();
    let passed = samples.iter().filter(|s| s.pass).count();
    Ok(TheoremAReport {
        seed,
        horizon,
        pass: passed == samples.len() && constant_check <= 1e-9,
        passed,
        samples,
        constant_check,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Lemma53Case {
    pub points: Vec<f64>,
    pub gap: usize,
    pub alpha: f64,
    pub beta: f64,
    pub atoms: Vec<RealAtom<f64>>,
    pub report: LemmaReport,
    /// `|Σ_j (Ψ(x_{j+1}) − Ψ(x_j)) − (x_n − x_1)|` by the displacement formula.
    pub telescoping_residual: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Lemma53Report {
    pub seed: u64,
    pub cases: Vec<Lemma53Case>,
    pub strict: usize,
    pub pass: bool,
}

/// `Ψ = α + βζ + Σ w K(t, ζ)` with atoms inside gap `k`, solved so that both
/// outer points are fixed.
pub fn endpoint_fixed_pick(points: &[f64], atoms: Vec<RealAtom<f64>>) -> Result<PickFunction<f64>> {
    let (x1, xn) = (points[0], points[points.len() - 1]);
    let s = |x: f64| contact_value(&PickFunction::new(0.0, 0.0, atoms.clone()).expect("valid atoms"), x);
    let (s1, sn) = (s(x1)?, s(xn)?);
    let beta = 1.0 - (sn - s1) / (xn - x1);
    let alpha = x1 - beta * x1 - s1;
    PickFunction::new(alpha, beta, atoms)
}

/// Random endpoint-fixed Pick functions against the displacement inequalities.
pub fn run_lemma53_sweep(count: usize, seed: u64) -> Result<Lemma53Report> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cases = Vec::with_capacity(count);
    for _ in 0..count {
        let n = rng.gen_range(3..=6);
        let points = random_chart_points(&mut rng, n);
        let gap = rng.gen_range(1..n);
        let (lo, hi) = (points[gap - 1], points[gap]);
        let atoms: Vec<RealAtom<f64>> = (0..rng.gen_range(1..=3))
            .map(|_| RealAtom::new(lo + interior_fraction(&mut rng) * (hi - lo), rng.gen_range(0.05..1.0)))
            .collect();
        let psi = endpoint_fixed_pick(&points, atoms)?;
        let report = loewner_lemma_check(&psi, &ContactConfiguration::new(points.clone(), gap)?)?;
        let sum: f64 = report.gaps.iter().map(|g| g.by_formula).sum();
        let telescoping_residual = (sum - (points[n - 1] - points[0])).abs();
        let pass = report.all_strict && report.max_cross_discrepancy <= 1e-10 && telescoping_residual <= 1e-10;
        cases.push(Lemma53Case {
            gap,
            alpha: psi.alpha(),
            beta: psi.beta(),
            atoms: psi.atoms().to_vec(),
            points,
            report,
            telescoping_residual,
            pass,
        });
    }
    let strict = cases.iter().filter(|c| c.pass).count();
    Ok(Lemma53Report { seed, pass: strict == cases.len(), strict, cases })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EfCase {
    pub segments: usize,
    pub ef1_exact: bool,
    pub ef2_residual: f64,
    pub ef3: AbsoluteContinuityReport,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SemigroupCase {
    /// Largest `|φ_{s+t}(z) − φ_t(φ_s(z))|` over the grid and `(s, t) ∈ {0.25, 0.5}²`.
    pub law_residual: f64,
    pub bp_residual_at_1e2: f64,
    pub bp_first_order: bool,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EfReport {
    pub seed: u64,
    pub schedules: Vec<EfCase>,
    pub semigroups: Vec<SemigroupCase>,
    pub bp_pairs: Vec<SemigroupCase>,
    pub pass: bool,
}

pub const EF2_MAX: f64 = 1e-7;
pub const SEMIGROUP_LAW_MAX: f64 = 1e-7;
pub const BP_MAX_AT_1E2: f64 = 1e-2;

/// 50-point grid: the origin and 7 rings of 7 spokes.
pub fn fifty_point_grid() -> PolarGrid {
    PolarGrid { rings: 7, spokes: 7, max_radius: 0.9 }
}

fn random_generator(rng: &mut ChaCha8Rng) -> Result<Generator<f64>> {
    let card = rng.gen_range(1..=4);
    let kind = if rng.gen::<bool>() { TauKind::Boundary } else { TauKind::Interior };
    let spec = random_spec(rng, card, kind)?;
    // time rescaling to sup |G| = 1 on |z| ≤ 0.9; the h = 1e-2 quotient error scales like |G′G|
    let g = random_cone_generator(rng, &spec)?;
    let sup = g.sup_on_disk(0.9);
    Ok(g.scaled(1.0 / sup))
}

fn semigroup_case(g: &Generator<f64>, grid: &[C], z: DiskPoint<f64>, config: &SolverConfig<f64>) -> Result<SemigroupCase> {
    let mut law = 0.0f64;
    for s in [0.25, 0.5] {
        for t in [0.25, 0.5] {
            let r = grid
                .par_iter()
                .map(|&z| {
                    let z = DiskPoint::new(z)?;
                    let direct = semigroup_flow(g, z, s + t, config)?;
                    let composed = semigroup_flow(g, semigroup_flow(g, z, s, config)?, t, config)?;
                    Ok((direct.value() - composed.value()).norm())
                })
                .collect::<Result<Vec<f64>>>()?;
            law = r.into_iter().fold(law, f64::max);
        }
    }
    let bp = bp_consistency(g, z, config)?;
    Ok(SemigroupCase {
        law_residual: law,
        bp_residual_at_1e2: bp.residuals[0],
        bp_first_order: bp.first_order(),
        pass: law <= SEMIGROUP_LAW_MAX && bp.residuals[0] <= BP_MAX_AT_1E2 && bp.first_order(),
    })
}

/// Evolution-family axioms on random ≤ 5-segment schedules, the semigroup law
/// on random generators and Berkson–Porta consistency on random pairs.
pub fn run_ef_suite(seed: u64, config: &SolverConfig<f64>) -> Result<EfReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let grid: Vec<C> = fifty_point_grid().points();
    let mut schedules = Vec::new();
    for _ in 0..10 {
        let card = rng.gen_range(1..=4);
        let spec = random_spec(&mut rng, card, TauKind::Free)?;
        let count = rng.gen_range(1..=5);
        let total = rng.gen_range(0.5..2.0);
        let schedule = random_cone_schedule(&mut rng, &spec, count, total)?;
        let mut stu = [rng.gen_range(0.0..total), rng.gen_range(0.0..total), rng.gen_range(0.0..total)];
        stu.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let ef1_exact = grid
            .iter()
            .all(|&z| evolve_point(&schedule, DiskPoint::new(z).unwrap(), stu[1], stu[1], config).map(|w| w.value() == z).unwrap_or(false));
        let ef2 = ef_composition_check(&schedule, &grid, stu[0], stu[1], stu[2], config)?;
        let z = DiskPoint::new(C::new(rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5)))?;
        let ef3 = ef_absolute_continuity_check(&schedule, z, total, config, 10, rng.gen())?;
        schedules.push(EfCase {
            segments: count,
            ef1_exact,
            ef2_residual: ef2,
            pass: ef1_exact && ef2 <= EF2_MAX && ef3.holds,
            ef3,
        });
    }
    let mut semigroups = Vec::new();
    for _ in 0..10 {
        let g = random_generator(&mut rng)?;
        semigroups.push(semigroup_case(&g, &grid, DiskPoint::origin(), config)?);
    }
    let mut bp_pairs = Vec::new();
    for _ in 0..20 {
        let g = random_generator(&mut rng)?;
        let z = DiskPoint::new(random_unit(&mut rng).value() * rng.gen_range(0.0..0.8))?;
        let bp = bp_consistency(&g, z, config)?;
        bp_pairs.push(SemigroupCase {
            law_residual: 0.0,
            bp_residual_at_1e2: bp.residuals[0],
            bp_first_order: bp.first_order(),
            pass: bp.residuals[0] <= BP_MAX_AT_1E2 && bp.first_order(),
        });
    }
    let pass = schedules.iter().all(|c| c.pass) && semigroups.iter().all(|c| c.pass) && bp_pairs.iter().all(|c| c.pass);
    Ok(EfReport { seed, schedules, semigroups, bp_pairs, pass })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConeCase {
    pub card: usize,
    pub tau: DwPoint<f64>,
    pub member: bool,
    pub combination_member: bool,
    /// Largest `|λ₃(σ) − (aλ₁(σ) + bλ₂(σ))| / max(1, |λ₃(σ)|)` over `σ ∈ F`.
    pub additivity_residual: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConeSuiteReport {
    pub seed: u64,
    pub cones: Vec<ConeCase>,
    pub theorem1: Vec<Theorem1Run>,
    pub pass: bool,
}

pub const ADDITIVITY_MAX: f64 = 1e-12;

/// Cone membership, closure under conic combination and the `Card(F) = 3`,
/// boundary-`τ` runs of [`run_theorem1_suite`].
pub fn run_cone_suite(seed: u64, config: &SolverConfig<f64>) -> Result<ConeSuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cones = Vec::new();
    for i in 0..10 {
        let card = 1 + i % 4;
        let kind = if i % 2 == 0 { TauKind::Boundary } else { TauKind::Interior };
        let spec = random_spec(&mut rng, card, kind)?;
        let schedule = random_cone_schedule(&mut rng, &spec, 3, 1.0)?;
        let member = cone_membership(&schedule, &spec).member;
        let (g1, g2) = (&schedule.segments()[0].generator, &schedule.segments()[1].generator);
        let (a, b) = (rng.gen_range(0.0..2.0), rng.gen_range(0.0..2.0));
        let g3 = conic_combine(a, g1, b, g2)?;
        let combination_member = cone_membership(&Schedule::single(1.0, g3.clone())?, &spec).member;
        let mut additivity_residual = 0.0f64;
        for &sigma in spec.fixed() {
            let l3 = angular_rate(&g3, sigma)?.value();
            let l12 = a * angular_rate(g1, sigma)?.value() + b * angular_rate(g2, sigma)?.value();
            additivity_residual = additivity_residual.max((l3 - l12).abs() / l3.abs().max(1.0));
        }
        cones.push(ConeCase {
            card,
            tau: spec.tau().expect("τ prescribed"),
            member,
            combination_member,
            additivity_residual,
            pass: member && combination_member && additivity_residual <= ADDITIVITY_MAX,
        });
    }
    let mut theorem1 = Vec::new();
    for k in 0..10u64 {
        let cfg = random_theorem1_config(seed.wrapping_mul(1000).wrapping_add(k), 3, TauKind::Boundary, *config)?;
        theorem1.push(run_theorem1_suite(&cfg)?);
    }
    let pass = cones.iter().all(|c| c.pass) && theorem1.iter().all(|r| r.pass);
    Ok(ConeSuiteReport { seed, cones, theorem1, pass })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Ef,
    Cone,
    Lemma53,
    #[serde(rename = "theoremA")]
    TheoremA,
    All,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub suite: Suite,
    pub seed: u64,
    pub tolerance: f64,
    pub ef: Option<EfReport>,
    pub cone: Option<ConeSuiteReport>,
    pub lemma53: Option<Lemma53Report>,
    #[serde(rename = "theoremA")]
    pub theorem_a: Option<TheoremAReport>,
    pub pass: bool,
}

/// Runs the named suite(s) with solver tolerance `tol`.
pub fn run_verify(suite: Suite, seed: u64, tol: f64) -> Result<VerifyReport> {
    let config = SolverConfig::with_tolerance(tol);
    config.validate()?;
    let wants = |s: Suite| suite == Suite::All || suite == s;
    let ef = wants(Suite::Ef).then(|| run_ef_suite(seed, &config)).transpose()?;
    let cone = wants(Suite::Cone).then(|| run_cone_suite(seed, &config)).transpose()?;
    let lemma53 = wants(Suite::Lemma53).then(|| run_lemma53_sweep(100, seed)).transpose()?;
    let theorem_a = wants(Suite::TheoremA).then(|| run_theorem_a_reachability(100, seed, 1.0, &config)).transpose()?;
    let pass = ef.as_ref().is_none_or(|r| r.pass)
        && cone.as_ref().is_none_or(|r| r.pass)
        && lemma53.as_ref().is_none_or(|r| r.pass)
        && theorem_a.as_ref().is_none_or(|r| r.pass);
    Ok(VerifyReport { suite, seed, tolerance: tol, ef, cone, lemma53, theorem_a, pass })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fine() -> SolverConfig<f64> {
        SolverConfig::with_tolerance(1e-11)
    }

    #[test]
    fn chart_points_respect_the_gap() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 1..=6 {
            let xs = random_chart_points(&mut rng, n);
            assert_eq!(xs.len(), n);
            assert!(xs.windows(2).all(|w| w[1] - w[0] >= MIN_CHART_GAP));
            assert!(xs.iter().all(|x| x.abs() <= CHART_RANGE));
        }
    }

    #[test]
    fn random_generators_are_cone_members() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for kind in [TauKind::Boundary, TauKind::Interior, TauKind::Free] {
            for card in 1..=4 {
                let spec = random_spec(&mut rng, card, kind).unwrap();
                let schedule = random_cone_schedule(&mut rng, &spec, 2, 1.0).unwrap();
                assert!(cone_membership(&schedule, &spec).member, "{kind:?} {card}");
            }
        }
    }

    #[test]
    fn fixed_point_run_single_point_boundary_tau() {
        // F = {i}, τ = 1
        let spec = ConeSpec::new(vec![BoundaryPoint::new(C::new(0.0, 1.0)).unwrap()], Some(DwPoint::Boundary(BoundaryPoint::one()))).unwrap();
        let cfg = ExperimentConfig { seed: 5, spec, segment_count: 1, duration_total: 1.0, grid: PolarGrid::default(), solver: fine() };
        let run = run_theorem1_suite(&cfg).unwrap();
        assert!(run.pass, "{:?}", run.failures);
    }

    #[test]
    fn fixed_point_run_three_points_seed_42() {
        let fixed = [0.8, 2.5, 4.4].iter().map(|&a| BoundaryPoint::from_angle(a)).collect();
        let spec = ConeSpec::new(fixed, Some(DwPoint::Boundary(BoundaryPoint::one()))).unwrap();
        let cfg = ExperimentConfig { seed: 42, spec, segment_count: 3, duration_total: 1.0, grid: PolarGrid::default(), solver: fine() };
        let run = run_theorem1_suite(&cfg).unwrap();
        assert!(run.pass, "{:?}", run.failures);
        assert!(run.fixed_points.iter().all(|f| f.relative_error <= MULTIPLIER_REL_TOL));
    }

    #[test]
    fn fixed_point_run_interior_tau() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let spec = random_spec(&mut rng, 3, TauKind::Interior).unwrap();
        let cfg = ExperimentConfig { seed: 9, spec, segment_count: 2, duration_total: 1.0, grid: PolarGrid::default(), solver: fine() };
        let run = run_theorem1_suite(&cfg).unwrap();
        assert!(run.pass, "{:?}", run.failures);
    }

    #[test]
    fn fixed_point_run_rejects_tau_in_fixed_set() {
        let spec: std::result::Result<ConeSpec<f64>, _> =
            ConeSpec::new(vec![BoundaryPoint::one()], Some(DwPoint::Boundary(BoundaryPoint::one())));
        assert!(spec.is_err());
    }

    #[test]
    fn radial_reachability_edges() {
        let r = run_theorem_a_reachability(6, 7, 0.0, &fine()).unwrap();
        assert!(r.pass);
        assert!(r.samples.iter().all(|s| s.derivative == [1.0, 0.0]));
        let r = run_theorem_a_reachability(6, 7, 1.0, &fine()).unwrap();
        assert!(r.pass, "{:?}", r.samples.iter().flat_map(|s| s.failures.clone()).collect::<Vec<_>>());
        assert!(r.constant_check <= 1e-9);
    }

    #[test]
    fn lemma_sweep_small() {
        let r = run_lemma53_sweep(20, 1).unwrap();
        assert!(r.pass);
        assert_eq!(r.strict, 20);
    }

    #[test]
    fn lemma_worked_example_through_endpoint_fix() {
        let psi = endpoint_fixed_pick(&[-1.0, 0.5, 1.0], vec![RealAtom::new(0.0, 0.1)]).unwrap();
        assert!((psi.beta() - 1.1).abs() < 1e-15 && psi.alpha().abs() < 1e-15);
        let r = loewner_lemma_check(&psi, &ContactConfiguration::new(vec![-1.0, 0.5, 1.0], 1).unwrap()).unwrap();
        assert!((r.gaps[0].by_difference - 1.35).abs() < 1e-12);
        assert!((r.gaps[1].by_difference - 0.65).abs() < 1e-12);
    }
}
