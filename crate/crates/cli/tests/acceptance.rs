//! One PASS/FAIL line per acceptance criterion.
//!
//! Every check re-derives its verdict from raw residuals against the pinned
//! tolerance instead of trusting a suite's own `pass` flag.

use std::f64::consts::{E, PI};
use std::process::Command;

use loewner_lab::diagnostics::{chain_rule_check, hyperbolic_map, RadialSchedule};
use loewner_lab::evolution::{EvolutionMap, Schedule};
use loewner_lab::experiments::{
    random_cone_schedule, random_spec, random_theorem1_config, run_cone_suite, run_ef_suite, run_lemma53_sweep, run_theorem_a_reachability,
    TauKind,
};
use loewner_lab::generators::{angular_rate, semigroup_flow, DwPoint, Generator};
use loewner_lab::geometry::{BoundaryPoint, DiskPoint, MoebiusMap};
use loewner_lab::herglotz::{
    contact_regular, contact_value, displacement, loewner_lemma_check, BoundaryAtom, ClarkMeasure, ContactConfiguration,
    HerglotzFunction, PickFunction, RealAtom,
};
use loewner_lab::richardson::extrapolate;
use loewner_lab::{Error, Result, SolverConfig64};
use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type C = Complex<f64>;

const SEED: u64 = 42;

fn solver() -> SolverConfig64 {
    SolverConfig64::with_tolerance(1e-10)
}

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn run(f: impl FnOnce() -> Result<Outcome>) -> Outcome {
    f().unwrap_or_else(|e| outcome(false, format!("error: {e}")))
}

fn hyperbolic_generator() -> Generator<f64> {
    let p = HerglotzFunction::new(ClarkMeasure::new(vec![BoundaryAtom::new(BoundaryPoint::one(), 0.5)], 0.0).unwrap(), 0.0);
    Generator::new(DwPoint::Boundary(BoundaryPoint::one()), p)
}

fn criterion_1() -> Result<Outcome> {
    let w = semigroup_flow(&hyperbolic_generator(), DiskPoint::origin(), 1.0, &SolverConfig64::with_tolerance(1e-12))?;
    let oracle = 0.5f64.tanh();
    let err = (w.value() - C::new(oracle, 0.0)).norm();
    let literal = (oracle - 0.4621171573).abs() <= 1e-10;
    Ok(outcome(err <= 1e-9 && literal, format!("|φ_1(0) − tanh(1/2)| = {err:.2e}")))
}

fn criterion_2() -> Result<Outcome> {
    let r = run_ef_suite(SEED, &solver())?;
    let worst = r.semigroups.iter().map(|c| c.law_residual).fold(0.0, f64::max);
    Ok(outcome(
        r.semigroups.len() == 10 && worst <= 1e-7,
        format!("{} generators, max law residual {worst:.2e}", r.semigroups.len()),
    ))
}

fn criterion_3() -> Result<Outcome> {
    let r = run_ef_suite(SEED, &solver())?;
    let ef1 = r.schedules.iter().all(|c| c.ef1_exact);
    let ef2 = r.schedules.iter().map(|c| c.ef2_residual).fold(0.0, f64::max);
    let triples: usize = r.schedules.iter().map(|c| c.ef3.checked).sum();
    let ef3 = r.schedules.iter().all(|c| c.ef3.holds && c.ef3.max_ratio <= 1.0);
    let max_segments = r.schedules.iter().map(|c| c.segments).max().unwrap_or(0);
    Ok(outcome(
        r.schedules.len() == 10 && max_segments <= 5 && ef1 && ef2 <= 1e-7 && triples >= 100 && ef3,
        format!("EF1 exact {ef1}, max EF2 {ef2:.2e}, EF3 on {triples} triples {ef3}"),
    ))
}

fn criterion_4() -> Result<Outcome> {
    let r = run_ef_suite(SEED, &solver())?;
    let worst = r.bp_pairs.iter().map(|c| c.bp_residual_at_1e2).fold(0.0, f64::max);
    let first = r.bp_pairs.iter().all(|c| c.bp_first_order);
    Ok(outcome(
        r.bp_pairs.len() == 20 && worst <= 1e-2 && first,
        format!("{} pairs, max residual at h=1e-2 {worst:.2e}, first order {first}", r.bp_pairs.len()),
    ))
}

fn criterion_5() -> Result<Outcome> {
    let r = run_cone_suite(SEED, &solver())?;
    let cards: Vec<usize> = r.cones.iter().map(|c| c.card).collect();
    let all_cards = (1..=4).all(|k| cards.contains(&k));
    let member = r.cones.iter().all(|c| c.member);
    let combo = r.cones.iter().all(|c| c.combination_member);
    let additivity = r.cones.iter().map(|c| c.additivity_residual).fold(0.0, f64::max);
    Ok(outcome(
        r.cones.len() == 10 && all_cards && member && combo && additivity <= 1e-12,
        format!("members {member}, combinations {combo}, λ-additivity {additivity:.2e}"),
    ))
}

fn criterion_6() -> Result<Outcome> {
    let r = run_cone_suite(SEED, &solver())?;
    let mut ok = 0;
    let mut worst_limit = 0.0f64;
    let mut worst_mult = 0.0f64;
    for run in &r.theorem1 {
        let cfg = random_theorem1_config(run.seed, 3, TauKind::Boundary, solver())?;
        let spec_ok = cfg.spec.fixed().len() == 3
            && matches!(cfg.spec.tau(), Some(DwPoint::Boundary(t)) if cfg.spec.fixed().iter().all(|s| s.distance(t) > 1e-9));
        let fixed_ok = run.fixed_points.len() == 3
            && run.fixed_points.iter().all(|f| {
                worst_limit = worst_limit.max(f.report.limit_residual);
                worst_mult = worst_mult.max(f.relative_error);
                f.report.regular && f.report.limit_residual <= 1e-6 && f.relative_error <= 1e-3
            });
        let dw_ok = run.dw_error.is_some_and(|e| e <= 1e-6);
        if spec_ok && fixed_ok && dw_ok && run.univalence.pass {
            ok += 1;
        }
    }
    Ok(outcome(
        r.theorem1.len() == 10 && ok == 10,
        format!("{ok}/10 runs; worst limit residual {worst_limit:.2e}, worst multiplier error {worst_mult:.2e}"),
    ))
}

fn hyperbolic_derivative_at_minus_one(c: f64, t: f64) -> f64 {
    // (z + a)/(1 + az) with a = tanh(ct/2) has derivative (1 + a)/(1 − a) = e^{ct} at −1
    (c * t).exp()
}

fn criterion_7() -> Result<Outcome> {
    let sched = RadialSchedule::default();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut residuals = Vec::new();
    let mut oracle_err = 0.0f64;

    let phi = hyperbolic_map(1.0, 1.0);
    let minus = BoundaryPoint::new(C::new(-1.0, 0.0))?;
    let exact = chain_rule_check(&phi, &phi, minus, &sched)?;
    oracle_err = oracle_err.max((exact.composed - C::new(E * E, 0.0)).norm() / (E * E));
    residuals.push(exact.relative_residual);

    for _ in 0..8 {
        let (c1, t1, c2, t2) = (rng.gen_range(-1.0..1.0), rng.gen_range(0.1..1.5), rng.gen_range(-1.0..1.0), rng.gen_range(0.1..1.5));
        let sigma = if rng.gen::<bool>() { minus } else { BoundaryPoint::one() };
        let r = chain_rule_check(&hyperbolic_map(c1, t1), &hyperbolic_map(c2, t2), sigma, &sched)?;
        let sign = if sigma == minus { 1.0 } else { -1.0 };
        let oracle = hyperbolic_derivative_at_minus_one(sign * c1, t1) * hyperbolic_derivative_at_minus_one(sign * c2, t2);
        oracle_err = oracle_err.max((r.composed - C::new(oracle, 0.0)).norm() / oracle);
        residuals.push(r.relative_residual);
    }

    for _ in 0..8 {
        let a = DiskPoint::new(C::from_polar(rng.gen_range(0.0..0.7), rng.gen_range(0.0..2.0 * PI)))?;
        let m = MoebiusMap::disk_automorphism(rng.gen_range(0.0..2.0 * PI), a);
        let auto = move |z: C| m.apply(z).ok_or(Error::InvalidInput("pole".into()));
        let phi = hyperbolic_map(rng.gen_range(-1.0..1.0), rng.gen_range(0.1..1.5));
        let sigma = BoundaryPoint::from_angle(rng.gen_range(0.0..2.0 * PI));
        let r = if rng.gen::<bool>() {
            chain_rule_check(&phi, &auto, sigma, &sched)?
        } else {
            chain_rule_check(&auto, &phi, sigma, &sched)?
        };
        residuals.push(r.relative_residual);
    }

    // evolution maps of two cone schedules sharing F
    let config = solver();
    for _ in 0..3 {
        let spec = random_spec(&mut rng, 2, TauKind::Boundary)?;
        let a = random_cone_schedule(&mut rng, &spec, 2, 0.6)?;
        let b = random_cone_schedule(&mut rng, &spec, 2, 0.6)?;
        let phi = EvolutionMap::new(&a, 0.0, 0.6, config)?;
        let psi = EvolutionMap::new(&b, 0.0, 0.6, config)?;
        let sigma = spec.fixed()[0];
        let r = chain_rule_check(&phi, &psi, sigma, &sched)?;
        let multiplier = |s: &Schedule<f64>| -> Result<f64> {
            s.segments().iter().try_fold(0.0, |acc, seg| Ok(acc + seg.duration * angular_rate(&seg.generator, sigma)?.value()))
        };
        let oracle = (multiplier(&a)? + multiplier(&b)?).exp();
        oracle_err = oracle_err.max((r.composed.norm() - oracle).abs() / oracle);
        residuals.push(r.relative_residual);
    }

    let worst = residuals.iter().copied().fold(0.0, f64::max);
    Ok(outcome(
        residuals.len() == 20 && worst <= 1e-2 && oracle_err <= 1e-2,
        format!("{} pairs, max residual {worst:.2e}, max closed-form deviation {oracle_err:.2e}", residuals.len()),
    ))
}

fn random_pick(rng: &mut ChaCha8Rng) -> Result<PickFunction<f64>> {
    let n = rng.gen_range(1..=4);
    let atoms = (0..n).map(|_| RealAtom::new(rng.gen_range(-3.0..3.0), rng.gen_range(0.05..1.0))).collect();
    PickFunction::new(rng.gen_range(-1.0..1.0), rng.gen_range(0.0..2.0), atoms)
}

fn away_from_atoms(rng: &mut ChaCha8Rng, psi: &PickFunction<f64>, gap: f64) -> f64 {
    loop {
        let x: f64 = rng.gen_range(-3.5..3.5);
        if psi.atoms().iter().all(|a| (a.location - x).abs() >= gap) {
            return x;
        }
    }
}

/// Regularized `∫ (|σ − σ0|² + δ²)^{-1} dμ`; bounded as δ → 0 exactly in the regular case.
fn regularized_energy(mu: &ClarkMeasure<f64>, sigma0: BoundaryPoint<f64>, delta: f64) -> f64 {
    let atoms: f64 = mu
        .atoms()
        .iter()
        .map(|a| a.weight / ((a.location.value() - sigma0.value()).norm_sqr() + delta * delta))
        .sum();
    // (1/2π)∫ dθ/(2 − 2cos θ + δ²) = 1/sqrt((2 + δ²)² − 4)
    let a = 2.0 + delta * delta;
    atoms + mu.uniform_mass() / (a * a - 4.0).sqrt()
}

fn criterion_8() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let psi = random_pick(&mut rng)?;
        let x0 = away_from_atoms(&mut rng, &psi, 0.1);
        let samples: Vec<C> = (0..14).map(|k| psi.eval_unchecked(C::new(x0, 1e-2 * 0.5f64.powi(k)))).collect();
        let limit = extrapolate(&samples, 2.0, 4).ok_or(Error::InvalidInput("too few samples".into()))?;
        worst = worst.max((limit.value - C::new(contact_value(&psi, x0)?, 0.0)).norm());
    }
    let mut table_ok = 0;
    for k in 0..50 {
        let n = rng.gen_range(1..=3);
        let atoms: Vec<BoundaryAtom<f64>> = (0..n)
            .map(|_| BoundaryAtom::new(BoundaryPoint::from_angle(rng.gen_range(0.0..2.0 * PI)), rng.gen_range(0.1..1.0)))
            .collect();
        let uniform = if k % 3 == 0 { rng.gen_range(0.1..1.0) } else { 0.0 };
        let sigma0 = if k % 2 == 0 { atoms[0].location } else { BoundaryPoint::from_angle(rng.gen_range(0.0..2.0 * PI)) };
        let mu = ClarkMeasure::new(atoms, uniform)?;
        let growth = regularized_energy(&mu, sigma0, 1e-6) / regularized_energy(&mu, sigma0, 1e-3);
        let oracle = growth < 2.0;
        if contact_regular(&mu, sigma0) == oracle {
            table_ok += 1;
        }
    }
    Ok(outcome(
        worst <= 1e-6 && table_ok == 50,
        format!("max |ε-limit − contact value| {worst:.2e} on 50; regularity table {table_ok}/50"),
    ))
}

fn criterion_9() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut worst = 0.0f64;
    let mut worst_tele = 0.0f64;
    for _ in 0..100 {
        let psi = random_pick(&mut rng)?;
        let mut xs: Vec<f64> = (0..rng.gen_range(2..=6)).map(|_| away_from_atoms(&mut rng, &psi, 0.05)).collect();
        xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        xs.dedup_by(|a, b| (*a - *b).abs() < 1e-6);
        if xs.len() < 2 {
            continue;
        }
        let mut total = 0.0;
        for w in xs.windows(2) {
            let d = displacement(&psi, w[0], w[1])?;
            let direct = contact_value(&psi, w[1])? - contact_value(&psi, w[0])?;
            worst = worst.max((d - direct).abs());
            total += d;
        }
        let span = contact_value(&psi, xs[xs.len() - 1])? - contact_value(&psi, xs[0])?;
        worst_tele = worst_tele.max((total - span).abs());
    }
    Ok(outcome(
        worst <= 1e-10 && worst_tele <= 1e-10,
        format!("max formula − difference {worst:.2e}, max telescoping {worst_tele:.2e}"),
    ))
}

fn criterion_10() -> Result<Outcome> {
    let r = run_lemma53_sweep(100, SEED)?;
    let strict = r.cases.iter().filter(|c| c.report.all_strict).count();
    let psi = PickFunction::new(0.0, 1.1, vec![RealAtom::new(0.0, 0.1)])?;
    let cfg = ContactConfiguration::new(vec![-1.0, 0.5, 1.0], 1)?;
    let ex = loewner_lemma_check(&psi, &cfg)?;
    let (g1, g2) = (&ex.gaps[0], &ex.gaps[1]);
    let worked = (g1.by_formula - 1.35).abs() <= 1e-12
        && (g1.by_difference - 1.35).abs() <= 1e-12
        && (g2.by_formula - 0.65).abs() <= 1e-12
        && (g2.by_difference - 0.65).abs() <= 1e-12
        && g1.by_formula < 1.5
        && g2.by_formula > 0.5;
    Ok(outcome(
        r.cases.len() == 100 && strict == 100 && worked,
        format!("strict {strict}/100; worked example {:.12} < 1.5, {:.12} > 0.5", g1.by_formula, g2.by_formula),
    ))
}

fn criterion_11() -> Result<Outcome> {
    let r = run_theorem_a_reachability(100, SEED, 1.0, &solver())?;
    let mut ok = 0;
    for s in &r.samples {
        let zero = C::new(s.phi_at_zero[0], s.phi_at_zero[1]).norm() <= 1e-10;
        let positive = !s.real_subfamily || (s.derivative[0] > 0.0 && s.derivative[0] <= 1.0 && s.derivative[1].abs() <= 1e-10);
        if zero && positive && s.univalence {
            ok += 1;
        }
    }
    let unit = Schedule::single(1.0, Generator::radial(HerglotzFunction::constant(1.0)?))?;
    let rep = loewner_lab::evolution::radial_classical(&unit, 1.0, &SolverConfig64::with_tolerance(1e-12))?;
    let constant = (rep.derivative[0] - (-1.0f64).exp()).abs() + rep.derivative[1].abs();
    let literal = ((-1.0f64).exp() - 0.3678794412).abs() <= 1e-10;
    Ok(outcome(
        r.samples.len() == 100 && ok == 100 && constant <= 1e-9 && literal,
        format!("{ok}/100 samples; p ≡ 1 gives |φ′(0) − e^-1| = {constant:.2e}"),
    ))
}

fn criterion_12() -> Result<Outcome> {
    let bin = env!("CARGO_BIN_EXE_loewner-lab");
    let once = || -> Result<(Vec<u8>, Option<i32>)> {
        let out = Command::new(bin)
            .args(["verify", "--suite", "all", "--seed", "42"])
            .output()
            .map_err(|e| Error::InvalidInput(e.to_string()))?;
        Ok((out.stdout, out.status.code()))
    };
    let (a, code_a) = once()?;
    let (b, code_b) = once()?;
    Ok(outcome(
        !a.is_empty() && a == b && code_a == code_b,
        format!("{} bytes, identical {}, exit codes {code_a:?}/{code_b:?}", a.len(), a == b),
    ))
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Result<Outcome>); 12] = [
        ("closed-form flow", criterion_1),
        ("semigroup law", criterion_2),
        ("evolution family axioms", criterion_3),
        ("Berkson-Porta consistency", criterion_4),
        ("cone membership and closure", criterion_5),
        ("boundary fixed points of evolution maps", criterion_6),
        ("chain rule", criterion_7),
        ("contact values and regularity", criterion_8),
        ("displacement identity", criterion_9),
        ("monotonicity inequalities", criterion_10),
        ("radial reachability", criterion_11),
        ("determinism", criterion_12),
    ];
    let mut failed = Vec::new();
    for (i, (name, f)) in criteria.iter().enumerate() {
        let o = run(f);
        println!("criterion {:>2} {} {name}: {}", i + 1, if o.pass { "PASS" } else { "FAIL" }, o.detail);
        if !o.pass {
            failed.push(i + 1);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
