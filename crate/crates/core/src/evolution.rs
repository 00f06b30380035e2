//! Piecewise-constant Herglotz vector fields, the Loewner–Kufarev ODE
//! `dw/dt = G(w, t)`, evolution families and the generator cones relative to
//! a set of boundary fixed points.

use std::collections::HashMap;
use std::sync::Mutex;

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::diagnostics::{univalence_heuristic, DiskMap, UnivalenceVerdict};
use crate::error::{Error, Result};
use crate::generators::{angular_rate, DwPoint, Generator, BOUNDARY_DW_TOL};
use crate::geometry::{BoundaryPoint, DiskPoint, PolarGrid};
use crate::ode::{integrate, SolverConfig, Trajectory};
use crate::scalar::{real, Real};

/// Slack on the schedule horizon when validating `t ≤ total duration`.
const HORIZON_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Segment<T: Real> {
    pub duration: T,
    pub generator: Generator<T>,
}

/// `G(z, t)` constant on consecutive time segments starting at 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Schedule<T: Real> {
    segments: Vec<Segment<T>>,
}

impl<T: Real> Schedule<T> {
    pub fn new(segments: Vec<Segment<T>>) -> Result<Self> {
        if let Some(s) = segments.iter().find(|s| !(s.duration > T::zero() && s.duration.is_finite())) {
            return Err(Error::InvalidInput(format!("segment duration {} must be positive and finite", s.duration)));
        }
        Ok(Self { segments })
    }

    pub fn single(duration: T, generator: Generator<T>) -> Result<Self> {
        Self::new(vec![Segment { duration, generator }])
    }

    pub fn segments(&self) -> &[Segment<T>] {
        &self.segments
    }

    pub fn total_duration(&self) -> T {
        self.segments.iter().fold(T::zero(), |acc, s| acc + s.duration)
    }

    /// Segment start times followed by the horizon.
    pub fn breakpoints(&self) -> Vec<T> {
        let mut out = vec![T::zero()];
        for s in &self.segments {
            out.push(*out.last().unwrap() + s.duration);
        }
        out
    }

    /// Generator active at time `t` (right-continuous; the last segment owns the horizon).
    pub fn generator_at(&self, t: T) -> Option<&Generator<T>> {
        let bps = self.breakpoints();
        (0..self.segments.len())
            .find(|&i| t >= bps[i] && (t < bps[i + 1] || i + 1 == self.segments.len()))
            .map(|i| &self.segments[i].generator)
    }

    /// `sup |G(·, t)|` over `t` and the closed disk of the given radius.
    pub fn local_bound(&self, radius: T) -> T {
        self.segments.iter().fold(T::zero(), |m, s| m.max(s.generator.sup_on_disk(radius)))
    }

    fn check_window(&self, s: T, t: T) -> Result<()> {
        let horizon = self.total_duration() + T::lit(HORIZON_SLACK);
        if !(s >= T::zero() && s <= t && t <= horizon) {
            return Err(Error::InvalidInput(format!(
                "need 0 ≤ s ≤ t ≤ {}, got s = {s}, t = {t}",
                self.total_duration()
            )));
        }
        Ok(())
    }

    /// `(generator, lo, hi)` for every segment overlapping `[s, t]` with positive length.
    fn pieces(&self, s: T, t: T) -> Vec<(&Generator<T>, T, T)> {
        let bps = self.breakpoints();
        self.segments
            .iter()
            .enumerate()
            .filter_map(|(i, seg)| {
                let lo = bps[i].max(s);
                let hi = bps[i + 1].min(t);
                (hi > lo).then_some((&seg.generator, lo, hi))
            })
            .collect()
    }
}

fn prepend_partial<T: Real>(done: &Trajectory<T>, err: Error) -> Error {
    match err {
        Error::GuardBandStall { t, partial } => {
            let mut rows: Vec<[f64; 3]> = done
                .nodes
                .iter()
                .map(|(t, w)| [t.to_f64_lossy(), w.re.to_f64_lossy(), w.im.to_f64_lossy()])
                .collect();
            rows.pop();
            rows.extend(partial);
            Error::GuardBandStall { t, partial: rows }
        }
        other => other,
    }
}

/// Full solve of `w(s) = z` to time `t`, optionally transporting a tangent.
pub fn evolve_full<T: Real>(
    schedule: &Schedule<T>,
    z: DiskPoint<T>,
    s: T,
    t: T,
    variational: bool,
    config: &SolverConfig<T>,
) -> Result<(Complex<T>, Complex<T>, Trajectory<T>)> {
    config.validate()?;
    schedule.check_window(s, t)?;
    let mut w = z.value();
    let mut v = real(T::one());
    let mut traj: Option<Trajectory<T>> = None;
    for (g, lo, hi) in schedule.pieces(s, t) {
        let sol = match integrate(g, w, v, lo, hi, variational, config) {
            Ok(sol) => sol,
            Err(e) => return Err(traj.as_ref().map_or(e.clone(), |done| prepend_partial(done, e))),
        };
        w = sol.point;
        v = sol.tangent;
        match traj.as_mut() {
            Some(done) => done.append(sol.trajectory),
            None => traj = Some(sol.trajectory),
        }
    }
    let traj = traj.unwrap_or_else(|| Trajectory::start(s, w));
    Ok((w, v, traj))
}

/// `φ_{s,t}(z)`: the solution at `t` of `dw/dτ = G(w, τ)`, `w(s) = z`.
pub fn evolve_point<T: Real>(
    schedule: &Schedule<T>,
    z: DiskPoint<T>,
    s: T,
    t: T,
    config: &SolverConfig<T>,
) -> Result<DiskPoint<T>> {
    let (w, _, _) = evolve_full(schedule, z, s, t, false, config)?;
    DiskPoint::new(w)
}

/// `(φ_{s,t}(z), φ′_{s,t}(z))` with the derivative from the variational equation.
pub fn evolve_with_derivative<T: Real>(
    schedule: &Schedule<T>,
    z: DiskPoint<T>,
    s: T,
    t: T,
    config: &SolverConfig<T>,
) -> Result<(DiskPoint<T>, Complex<T>)> {
    let (w, v, _) = evolve_full(schedule, z, s, t, true, config)?;
    Ok((DiskPoint::new(w)?, v))
}

/// `φ_{s,t}` as a map with memoized point evaluations.
pub struct EvolutionMap<'a, T: Real> {
    pub schedule: &'a Schedule<T>,
    pub s: T,
    pub t: T,
    pub config: SolverConfig<T>,
    cache: Mutex<HashMap<(u64, u64), Complex<T>>>,
}

impl<'a, T: Real> EvolutionMap<'a, T> {
    pub fn new(schedule: &'a Schedule<T>, s: T, t: T, config: SolverConfig<T>) -> Result<Self> {
        config.validate()?;
        schedule.check_window(s, t)?;
        Ok(Self { schedule, s, t, config, cache: Mutex::new(HashMap::new()) })
    }

    pub fn cached(&self) -> usize {
        self.cache.lock().expect("cache lock").len()
    }
}

impl<T: Real> DiskMap<T> for EvolutionMap<'_, T> {
    fn apply(&self, z: Complex<T>) -> Result<Complex<T>> {
        let key = (z.re.to_f64_lossy().to_bits(), z.im.to_f64_lossy().to_bits());
        if let Some(w) = self.cache.lock().expect("cache lock").get(&key) {
            return Ok(*w);
        }
        let w = evolve_point(self.schedule, DiskPoint::new(z)?, self.s, self.t, &self.config)?.value();
        self.cache.lock().expect("cache lock").insert(key, w);
        Ok(w)
    }
}

/// `max_z |φ_{s,t}(z) − φ_{u,t}(φ_{s,u}(z))|` over the grid.
pub fn ef_composition_check<T: Real>(
    schedule: &Schedule<T>,
    grid: &[Complex<T>],
    s: T,
    u: T,
    t: T,
    config: &SolverConfig<T>,
) -> Result<T> {
    if !(s <= u && u <= t) {
        return Err(Error::InvalidInput(format!("need s ≤ u ≤ t, got ({s}, {u}, {t})")));
    }
    let residuals = grid
        .par_iter()
        .map(|&z| {
            let z = DiskPoint::new(z)?;
            let direct = evolve_point(schedule, z, s, t, config)?;
            let mid = evolve_point(schedule, z, s, u, config)?;
            let composed = evolve_point(schedule, mid, u, t, config)?;
            Ok((direct.value() - composed.value()).norm())
        })
        .collect::<Result<Vec<T>>>()?;
    Ok(residuals.into_iter().fold(T::zero(), T::max))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AbsoluteContinuityReport {
    pub holds: bool,
    /// Majorant `k = sup |G|` on the disk of radius `radius`.
    pub majorant: f64,
    /// Largest of `(1 + |z|)/2` and every sampled trajectory modulus.
    pub radius: f64,
    pub checked: usize,
    /// Largest `|φ_{s,u}(z) − φ_{s,t}(z)| / (k(t − u))` over checked triples.
    pub max_ratio: f64,
}

/// Checks `|φ_{s,u}(z) − φ_{s,t}(z)| ≤ k(t − u)` on seeded random triples
/// `0 ≤ s ≤ u ≤ t ≤ horizon`, with `k` bounding `|G|` on a disk that holds
/// every sampled trajectory.
pub fn ef_absolute_continuity_check<T: Real>(
    schedule: &Schedule<T>,
    z: DiskPoint<T>,
    horizon: T,
    config: &SolverConfig<T>,
    samples: usize,
    seed: u64,
) -> Result<AbsoluteContinuityReport> {
    schedule.check_window(T::zero(), horizon)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let h = horizon.to_f64_lossy();
    let mut triples: Vec<[T; 3]> = (0..samples)
        .map(|_| {
            let mut v = [rng.gen::<f64>() * h, rng.gen::<f64>() * h, rng.gen::<f64>() * h];
            v.sort_by(|a, b| a.partial_cmp(b).unwrap());
            v.map(T::lit)
        })
        .collect();
    // the degenerate edge u = t
    triples.push([T::zero(), horizon, horizon]);

    let mut radius = (T::one() + z.value().norm()) * T::lit(0.5);
    let mut gaps = Vec::with_capacity(triples.len());
    for &[s, u, t] in &triples {
        let (w_t, _, traj) = evolve_full(schedule, z, s, t, false, config)?;
        radius = radius.max(traj.max_modulus());
        let w_u = if u == t { w_t } else { evolve_point(schedule, z, s, u, config)?.value() };
        gaps.push(((w_u - w_t).norm(), t - u));
    }
    let k = schedule.local_bound(radius);

    let slack = T::lit(10.0) * (config.rel_tol + config.abs_tol);
    let mut report = AbsoluteContinuityReport {
        holds: true,
        majorant: k.to_f64_lossy(),
        radius: radius.to_f64_lossy(),
        checked: gaps.len(),
        max_ratio: 0.0,
    };
    for (gap, dt) in gaps {
        let bound = k * dt;
        if gap > bound + slack {
            report.holds = false;
        }
        if bound > T::zero() {
            report.max_ratio = report.max_ratio.max((gap / bound).to_f64_lossy());
        }
    }
    Ok(report)
}

/// Fixed set `F` and optional common Denjoy–Wolff point `τ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConeSpec<T: Real> {
    fixed: Vec<BoundaryPoint<T>>,
    tau: Option<DwPoint<T>>,
}

impl<T: Real> ConeSpec<T> {
    pub fn new(fixed: Vec<BoundaryPoint<T>>, tau: Option<DwPoint<T>>) -> Result<Self> {
        for (i, a) in fixed.iter().enumerate() {
            if fixed[i + 1..].iter().any(|b| a.distance(*b) <= T::lit(BOUNDARY_DW_TOL)) {
                return Err(Error::InvalidInput("fixed points must be pairwise distinct".into()));
            }
            if let Some(DwPoint::Boundary(t)) = tau {
                if t.distance(*a) <= T::lit(BOUNDARY_DW_TOL) {
                    return Err(Error::InvalidInput("τ must not belong to the fixed set".into()));
                }
            }
        }
        Ok(Self { fixed, tau })
    }

    pub fn fixed(&self) -> &[BoundaryPoint<T>] {
        &self.fixed
    }

    pub fn tau(&self) -> Option<DwPoint<T>> {
        self.tau
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixedPointCheck {
    pub point: [f64; 2],
    /// `|G(σ)|`, absent when `σ` carries an atom.
    pub value: Option<f64>,
    /// Closed-form `λ(σ)` when finite.
    pub rate: Option<f64>,
    pub ok: bool,
    pub reason: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SegmentMembership {
    pub index: usize,
    pub fixed_points: Vec<FixedPointCheck>,
    /// Whether the segment's Denjoy–Wolff point equals `τ` (when `τ` is given).
    pub dw_match: Option<bool>,
    pub member: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConeReport {
    pub member: bool,
    pub segments: Vec<SegmentMembership>,
    pub integrability: String,
}

/// Per-segment check of `G(σ) = 0` with finite `λ(σ)` for `σ ∈ F`, plus the
/// Denjoy–Wolff match when `τ` is prescribed.
pub fn cone_membership<T: Real>(schedule: &Schedule<T>, spec: &ConeSpec<T>) -> ConeReport {
    let segments: Vec<SegmentMembership> = schedule
        .segments()
        .iter()
        .enumerate()
        .map(|(index, seg)| {
            let g = &seg.generator;
            let fixed_points: Vec<FixedPointCheck> = spec
                .fixed
                .iter()
                .map(|&sigma| {
                    let value = g.p.measure.atom_at(sigma).is_none().then(|| g.eval(sigma.value()).norm().to_f64_lossy());
                    let point = [sigma.value().re.to_f64_lossy(), sigma.value().im.to_f64_lossy()];
                    match angular_rate(g, sigma) {
                        Ok(r) => FixedPointCheck { point, value, rate: Some(r.value().to_f64_lossy()), ok: true, reason: None },
                        Err(e) => FixedPointCheck { point, value, rate: None, ok: false, reason: Some(e.to_string()) },
                    }
                })
                .collect();
            let dw_match = spec
                .tau
                .map(|tau| g.p.is_zero() || g.tau.distance(tau) <= T::lit(BOUNDARY_DW_TOL));
            let member = fixed_points.iter().all(|f| f.ok) && dw_match.unwrap_or(true);
            SegmentMembership { index, fixed_points, dw_match, member }
        })
        .collect();
    ConeReport {
        member: segments.iter().all(|s| s.member),
        segments,
        integrability: "λ(σ, ·) is a step function of t, hence locally integrable".into(),
    }
}

/// `a·G1 + b·G2` for generators sharing the Denjoy–Wolff point.
pub fn conic_combine<T: Real>(a: T, g1: &Generator<T>, b: T, g2: &Generator<T>) -> Result<Generator<T>> {
    if !(a >= T::zero() && b >= T::zero() && a + b > T::zero()) {
        return Err(Error::InvalidInput(format!("need a, b ≥ 0 with a + b > 0, got ({a}, {b})")));
    }
    if g1.tau.distance(g2.tau) > T::lit(BOUNDARY_DW_TOL) {
        return Err(Error::MixedDenjoyWolff);
    }
    Ok(Generator::new(g1.tau, g1.p.combine(a, &g2.p, b)))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialReport {
    pub phi_at_zero: [f64; 2],
    /// `φ′(0)` from the variational equation.
    pub derivative: [f64; 2],
    /// `exp(−Σ d_i p_i(0))`.
    pub derivative_closed_form: [f64; 2],
    pub modulus: f64,
    pub argument: f64,
    /// Asserted only when every `p_i(0)` is real.
    pub positive: Option<bool>,
    pub univalence: UnivalenceVerdict,
}

/// Integrates `dw/dt = −w p(w, t)` for schedules normalized by `p(1, t) = 1`.
pub fn radial_classical<T: Real>(schedule: &Schedule<T>, horizon: T, config: &SolverConfig<T>) -> Result<RadialReport> {
    schedule.check_window(T::zero(), horizon)?;
    let mut exponent = Complex::new(T::zero(), T::zero());
    let mut real_at_zero = true;
    for (g, lo, hi) in schedule.pieces(T::zero(), horizon) {
        if g.tau.value().norm() != T::zero() {
            return Err(Error::InvalidInput("radial schedules need τ = 0 on every segment".into()));
        }
        if g.p.measure.atom_at(BoundaryPoint::one()).is_some()
            || (g.p.eval(real(T::one())) - T::one()).norm() > T::lit(1e-9)
        {
            return Err(Error::NotNormalized("p(1) ≠ 1".into()));
        }
        let p0 = g.p.eval(real(T::zero()));
        real_at_zero &= p0.im.abs() <= T::lit(1e-14);
        exponent = exponent - p0 * (hi - lo);
    }
    let (phi0, derivative) = evolve_with_derivative(schedule, DiskPoint::origin(), T::zero(), horizon, config)?;
    let closed = exponent.exp();
    let map = EvolutionMap::new(schedule, T::zero(), horizon, *config)?;
    let pair = |c: Complex<T>| [c.re.to_f64_lossy(), c.im.to_f64_lossy()];
    Ok(RadialReport {
        phi_at_zero: pair(phi0.value()),
        derivative: pair(derivative),
        derivative_closed_form: pair(closed),
        modulus: derivative.norm().to_f64_lossy(),
        argument: derivative.arg().to_f64_lossy(),
        positive: real_at_zero.then(|| derivative.re > T::zero() && derivative.im.abs() <= T::lit(1e-9) * derivative.re),
        univalence: univalence_heuristic(&map, &PolarGrid::default()),
    })
}

/// `φ_{s,t}` on every grid point, in grid order; failures are kept per point.
pub fn grid_image<T: Real>(
    schedule: &Schedule<T>,
    s: T,
    t: T,
    grid: &[Complex<T>],
    config: &SolverConfig<T>,
) -> Vec<(Complex<T>, Result<Complex<T>>)> {
    grid.par_iter()
        .map(|&z| (z, DiskPoint::new(z).and_then(|d| evolve_point(schedule, d, s, t, config)).map(|w| w.value())))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::herglotz::{BoundaryAtom, ClarkMeasure, HerglotzFunction, normalize_at_one};

    type C = Complex<f64>;

    fn decay() -> Generator<f64> {
        Generator::radial(HerglotzFunction::constant(1.0).unwrap())
    }

    /// `(1 − z²)/2` with τ = 1: `p = K(1, z)/2`.
    fn hyperbolic(scale: f64) -> Generator<f64> {
        let m = ClarkMeasure::new(vec![BoundaryAtom::new(BoundaryPoint::one(), 0.5 * scale)], 0.0).unwrap();
        Generator::new(DwPoint::Boundary(BoundaryPoint::one()), HerglotzFunction::new(m, 0.0))
    }

    /// `(1 − z)²`
    fn parabolic() -> Generator<f64> {
        Generator::new(DwPoint::Boundary(BoundaryPoint::one()), HerglotzFunction::constant(1.0).unwrap())
    }

    fn two_segment() -> Schedule<f64> {
        Schedule::new(vec![
            Segment { duration: 0.5, generator: decay() },
            Segment { duration: 0.5, generator: hyperbolic(1.0) },
        ])
        .unwrap()
    }

    fn cfg() -> SolverConfig<f64> {
        SolverConfig::default()
    }

    fn dp(re: f64, im: f64) -> DiskPoint<f64> {
        DiskPoint::new(C::new(re, im)).unwrap()
    }

    fn bp(re: f64, im: f64) -> BoundaryPoint<f64> {
        BoundaryPoint::new(C::new(re, im)).unwrap()
    }

    #[test]
    fn hyperbolic_generator_is_the_expected_field() {
        let z = C::new(0.2, -0.3);
        assert!((hyperbolic(1.0).eval(z) - (C::new(1.0, 0.0) - z * z) * 0.5).norm() < 1e-14);
    }

    #[test]
    fn evolve_point_examples() {
        let w = evolve_point(&two_segment(), dp(0.5, 0.0), 0.0, 1.0, &cfg()).unwrap();
        let expected = (0.25 + (0.5 * (-0.5f64).exp()).atanh()).tanh();
        assert!((w.value() - expected).norm() < 1e-8);
        assert!((expected - 0.5102826).abs() < 1e-7);

        let z = dp(0.3, 0.4);
        assert_eq!(evolve_point(&two_segment(), z, 0.7, 0.7, &cfg()).unwrap(), z);

        let one = Schedule::single(1.0, decay()).unwrap();
        let w = evolve_point(&one, dp(0.5, 0.0), 0.0, 1.0, &cfg()).unwrap();
        assert!((w.value().re - 0.1839397).abs() < 1e-7);
    }

    #[test]
    fn evolve_rejects_bad_windows() {
        let s = two_segment();
        assert!(evolve_point(&s, dp(0.1, 0.0), 0.6, 0.5, &cfg()).is_err());
        assert!(evolve_point(&s, dp(0.1, 0.0), 0.0, 1.5, &cfg()).is_err());
        assert!(Schedule::single(0.0, decay()).is_err());
    }

    #[test]
    fn variational_derivative_matches_closed_form() {
        let one = Schedule::single(1.0, decay()).unwrap();
        let (_, d) = evolve_with_derivative(&one, dp(0.3, 0.1), 0.0, 1.0, &cfg()).unwrap();
        assert!((d - (-1f64).exp()).norm() < 1e-8);
    }

    #[test]
    fn composition_examples() {
        let grid: Vec<C> = PolarGrid { rings: 4, spokes: 12, max_radius: 0.8 }.points();
        assert!(grid.len() >= 49);
        let r = ef_composition_check(&two_segment(), &grid, 0.0, 0.5, 1.0, &cfg()).unwrap();
        assert!(r <= 1e-7, "residual {r}");
        assert_eq!(ef_composition_check(&two_segment(), &grid, 0.3, 0.3, 0.3, &cfg()).unwrap(), 0.0);
    }

    #[test]
    fn absolute_continuity_examples() {
        let hyp = Schedule::single(1.0, hyperbolic(1.0)).unwrap();
        let r = ef_absolute_continuity_check(&hyp, DiskPoint::origin(), 1.0, &cfg(), 20, 7).unwrap();
        assert!(r.holds);
        assert!(r.majorant <= 0.78125);
        let radial = Schedule::single(2.0, decay()).unwrap();
        let r = ef_absolute_continuity_check(&radial, dp(0.6, 0.0), 2.0, &cfg(), 20, 7).unwrap();
        assert!(r.holds && r.checked == 21 && r.max_ratio <= 1.0);
    }

    #[test]
    fn cone_membership_examples() {
        // H⁻¹(∓1) = ±i; the atom at 0 lands on −1
        let fixed = vec![bp(0.0, 1.0), bp(0.0, -1.0)];
        let spec = ConeSpec::new(fixed, Some(DwPoint::Boundary(BoundaryPoint::one()))).unwrap();
        let pick = crate::generators::synthesize_generator(&[-1.0, 1.0], &[0.0], 1.0).unwrap();
        let g = crate::generators::conjugate_generator(&pick);
        let report = cone_membership(&Schedule::single(1.0, g).unwrap(), &spec);
        assert!(report.member, "{report:?}");

        let spec = ConeSpec::new(vec![bp(-1.0, 0.0)], None).unwrap();
        let report = cone_membership(&Schedule::single(1.0, parabolic()).unwrap(), &spec);
        assert!(!report.member);
        assert!((report.segments[0].fixed_points[0].value.unwrap() - 4.0).abs() < 1e-12);

        let empty = ConeSpec::<f64>::new(vec![], None).unwrap();
        assert!(cone_membership(&two_segment(), &empty).member);
    }

    #[test]
    fn cone_spec_rejects_tau_in_fixed_set() {
        let r = ConeSpec::new(vec![BoundaryPoint::<f64>::one()], Some(DwPoint::Boundary(BoundaryPoint::one())));
        assert!(r.is_err());
        assert!(ConeSpec::new(vec![bp(0.0, 1.0), bp(0.0, 1.0)], None).is_err());
    }

    #[test]
    fn conic_combine_examples() {
        let minus_one = bp(-1.0, 0.0);
        let doubled = conic_combine(1.0, &hyperbolic(1.0), 1.0, &hyperbolic(1.0)).unwrap();
        let z = C::new(0.1, 0.4);
        assert!((doubled.eval(z) - (C::new(1.0, 0.0) - z * z)).norm() < 1e-14);
        assert!((angular_rate(&doubled, minus_one).unwrap().value() - 2.0).abs() < 1e-12);

        let scaled = conic_combine(2.0, &hyperbolic(1.0), 0.0, &parabolic()).unwrap();
        assert!((angular_rate(&scaled, minus_one).unwrap().value() - 2.0).abs() < 1e-12);

        let mixed = conic_combine(1.0, &hyperbolic(1.0), 1.0, &parabolic()).unwrap();
        let spec = ConeSpec::new(vec![minus_one], None).unwrap();
        assert!(!cone_membership(&Schedule::single(1.0, mixed).unwrap(), &spec).member);

        let radial = decay();
        assert_eq!(conic_combine(1.0, &hyperbolic(1.0), 1.0, &radial), Err(Error::MixedDenjoyWolff));
    }

    #[test]
    fn radial_classical_examples() {
        let r = radial_classical(&Schedule::single(1.0, decay()).unwrap(), 1.0, &cfg()).unwrap();
        assert_eq!(r.phi_at_zero, [0.0, 0.0]);
        assert!((r.derivative[0] - 0.3678794).abs() < 1e-7);
        assert_eq!(r.positive, Some(true));
        assert!(r.univalence.pass);

        let r = radial_classical(&Schedule::single(1.0, decay()).unwrap(), 0.0, &cfg()).unwrap();
        assert_eq!(r.derivative, [1.0, 0.0]);

        let p = normalize_at_one(&[BoundaryAtom::new(bp(0.0, 1.0), 0.5)]).unwrap();
        let r = radial_classical(&Schedule::single(1.0, Generator::radial(p)).unwrap(), 1.0, &cfg()).unwrap();
        assert_eq!(r.phi_at_zero, [0.0, 0.0]);
        assert!((r.modulus - (-1.5f64).exp()).abs() < 1e-8);
        assert!((r.argument + 0.5).abs() < 1e-8);
        assert_eq!(r.positive, None);
    }

    #[test]
    fn grid_image_examples() {
        let grid: Vec<C> = PolarGrid::default().points();
        let radial = Schedule::single(1.0, decay()).unwrap();
        for (z, w) in grid_image(&radial, 0.2, 0.2, &grid, &cfg()) {
            assert_eq!(w.unwrap(), z);
        }
        for (z, w) in grid_image(&radial, 0.0, 1.0, &grid, &cfg()) {
            assert!((w.unwrap() - z / std::f64::consts::E).norm() < 1e-8);
        }
        let hyp = Schedule::single(2.0, hyperbolic(1.0)).unwrap();
        let max = grid_image(&hyp, 0.0, 2.0, &grid, &cfg())
            .into_iter()
            .map(|(_, w)| w.unwrap().norm())
            .fold(0.0, f64::max);
        assert!(max < 1.0);
    }

    #[test]
    fn evolution_map_caches() {
        let s = two_segment();
        let map = EvolutionMap::new(&s, 0.0, 1.0, cfg()).unwrap();
        let a = map.apply(C::new(0.2, 0.1)).unwrap();
        let b = map.apply(C::new(0.2, 0.1)).unwrap();
        assert_eq!(a, b);
        assert_eq!(map.cached(), 1);
    }
}
