//! Numerical boundary analysis of computed self-maps: radial limits and
//! angular derivatives by extrapolation along radii, Denjoy–Wolff location,
//! the chain rule for angular derivatives and a univalence heuristic.

use num_complex::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{hyperbolic_distance, BoundaryPoint, DiskPoint, PolarGrid};
use crate::richardson::extrapolate;
use crate::scalar::{real, Real};

/// A holomorphic self-map of the disk evaluated pointwise.
pub trait DiskMap<T: Real>: Sync {
    fn apply(&self, z: Complex<T>) -> Result<Complex<T>>;
}

impl<T: Real, F> DiskMap<T> for F
where
    F: Fn(Complex<T>) -> Result<Complex<T>> + Sync,
{
    fn apply(&self, z: Complex<T>) -> Result<Complex<T>> {
        self(z)
    }
}

/// Radii `r_k = 1 − 2^{−k}` for `k = k_min..=k_max`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadialSchedule {
    pub k_min: u32,
    pub k_max: u32,
}

impl Default for RadialSchedule {
    fn default() -> Self {
        Self { k_min: 8, k_max: 24 }
    }
}

impl RadialSchedule {
    pub fn steps<T: Real>(&self) -> Vec<T> {
        (self.k_min..=self.k_max).map(|k| T::lit(0.5f64.powi(k as i32))).collect()
    }
}

const MAX_ORDER: usize = 4;
/// Extrapolation residual above which a radial limit is declared absent.
const LIMIT_RESIDUAL_CEILING: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialLimit<T: Real> {
    pub value: Complex<T>,
    pub residual: T,
}

fn radial_samples<T: Real, M: DiskMap<T> + ?Sized>(
    map: &M,
    sigma: BoundaryPoint<T>,
    sched: &RadialSchedule,
) -> Result<(Vec<T>, Vec<Complex<T>>)> {
    let steps = sched.steps::<T>();
    let values = steps
        .par_iter()
        .map(|&h| map.apply(sigma.value() * (T::one() - h)))
        .collect::<Result<Vec<_>>>()?;
    Ok((steps, values))
}

/// Limit of `φ(rσ)` as `r → 1`, extrapolated along the radius.
pub fn radial_limit<T: Real, M: DiskMap<T> + ?Sized>(
    map: &M,
    sigma: BoundaryPoint<T>,
    sched: &RadialSchedule,
) -> Result<RadialLimit<T>> {
    let (_, values) = radial_samples(map, sigma, sched)?;
    limit_from_samples(&values)
}

fn limit_from_samples<T: Real>(values: &[Complex<T>]) -> Result<RadialLimit<T>> {
    let diffs: Vec<T> = values.windows(2).map(|w| (w[1] - w[0]).norm()).collect();
    let tail_growth = diffs.len() >= 4
        && diffs[diffs.len() - 4..].windows(2).all(|w| w[1] > w[0])
        && diffs[diffs.len() - 1] > T::lit(1e-8);
    let e = extrapolate(values, T::lit(2.0), MAX_ORDER).ok_or(Error::NoAngularLimit)?;
    if tail_growth || !(e.residual <= T::lit(LIMIT_RESIDUAL_CEILING)) {
        return Err(Error::NoAngularLimit);
    }
    Ok(RadialLimit { value: e.value, residual: e.residual })
}

/// Angular derivative at a contact point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngularDerivative<T: Real> {
    /// `lim (φ(z) − ω)/(z − σ)`.
    pub value: Complex<T>,
    /// `σ·φ′(σ)/ω`, real and positive at a regular contact point.
    pub normalized: T,
    pub residual: T,
}

/// Extrapolated difference quotient `(φ(rσ) − ω)/(rσ − σ)`.
pub fn radial_derivative<T: Real, M: DiskMap<T> + ?Sized>(
    map: &M,
    sigma: BoundaryPoint<T>,
    omega: Complex<T>,
    sched: &RadialSchedule,
) -> Result<AngularDerivative<T>> {
    if (omega.norm() - T::one()).abs() > T::lit(1e-6) {
        return Err(Error::InvalidInput(format!("|ω| = {} is not unimodular", omega.norm())));
    }
    let (steps, values) = radial_samples(map, sigma, sched)?;
    let s = sigma.value();
    let quotients: Vec<Complex<T>> = steps
        .iter()
        .zip(&values)
        .map(|(&h, &f)| (f - omega) / (-s * h))
        .collect();
    let mags: Vec<T> = quotients.iter().map(|q| q.norm()).collect();
    let growing = mags.len() >= 4
        && mags[mags.len() - 4..].windows(2).all(|w| w[1] > w[0] * T::lit(1.1));
    if growing {
        return Err(Error::InfiniteAngularDerivative);
    }
    let e = extrapolate(&quotients, T::lit(2.0), MAX_ORDER).ok_or(Error::InfiniteAngularDerivative)?;
    let normalized = (s * e.value / omega).re;
    Ok(AngularDerivative { value: e.value, normalized, residual: e.residual })
}

/// Boundary fixed-point diagnostics for one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FixedPointReport {
    pub point: [f64; 2],
    /// `max(|ω − σ|, extrapolation residual)` for the radial limit `ω`.
    pub limit_residual: f64,
    pub derivative_estimate: f64,
    pub regular: bool,
}

/// Radial limit at `σ`, then the angular derivative against `σ` itself.
pub fn fixed_point_report<T: Real, M: DiskMap<T> + ?Sized>(
    map: &M,
    sigma: BoundaryPoint<T>,
    sched: &RadialSchedule,
) -> Result<FixedPointReport> {
    let lim = radial_limit(map, sigma, sched)?;
    let limit_residual = (lim.value - sigma.value()).norm().max(lim.residual).to_f64_lossy();
    let point = [sigma.value().re.to_f64_lossy(), sigma.value().im.to_f64_lossy()];
    let derivative = match radial_derivative(map, sigma, sigma.value(), sched) {
        Ok(d) => d,
        Err(Error::InfiniteAngularDerivative) => {
            return Ok(FixedPointReport {
                point,
                limit_residual,
                derivative_estimate: f64::INFINITY,
                regular: false,
            })
        }
        Err(e) => return Err(e),
    };
    let est = derivative.normalized.to_f64_lossy();
    Ok(FixedPointReport {
        point,
        limit_residual,
        derivative_estimate: est,
        regular: est.is_finite() && est > 0.0,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DwKind {
    Interior,
    Boundary,
    EllipticAutomorphism,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DenjoyWolff {
    pub kind: DwKind,
    pub point: [f64; 2],
    /// `|φ′(τ)|` (interior) or the angular derivative at `τ` (boundary).
    pub derivative: Option<f64>,
    pub iterations: usize,
}

impl DenjoyWolff {
    pub fn point<T: Real>(&self) -> Complex<T> {
        Complex::new(T::lit(self.point[0]), T::lit(self.point[1]))
    }
}

pub const DW_ITERATION_BUDGET: usize = 10_000;
pub const DW_CONVERGENCE_RADIUS: f64 = 1e-9;
pub const DW_BOUNDARY_THRESHOLD: f64 = 1e-6;

fn dw_seeds<T: Real>() -> [Complex<T>; 5] {
    let c = |re: f64, im: f64| Complex::new(T::lit(re), T::lit(im));
    [c(0.0, 0.0), c(0.5, 0.0), c(0.0, -0.5), c(0.3, 0.3), c(-0.4, 0.1)]
}

enum Orbit<T: Real> {
    Converged(Complex<T>, usize),
    Escaped(Complex<T>, usize),
    Undecided,
}

fn follow_orbit<T: Real, M: DiskMap<T> + ?Sized>(map: &M, seed: Complex<T>) -> Result<Orbit<T>> {
    let mut z = seed;
    for n in 1..=DW_ITERATION_BUDGET {
        let next = map.apply(z)?;
        if next.norm() > T::one() - T::lit(DW_BOUNDARY_THRESHOLD) {
            return Ok(Orbit::Escaped(next, n));
        }
        if (next - z).norm() < T::lit(DW_CONVERGENCE_RADIUS) {
            return Ok(Orbit::Converged(next, n));
        }
        z = next;
    }
    Ok(Orbit::Undecided)
}

fn is_isometry<T: Real, M: DiskMap<T> + ?Sized>(map: &M) -> Result<bool> {
    let seeds = dw_seeds::<T>();
    let images = seeds.iter().map(|&z| map.apply(z)).collect::<Result<Vec<_>>>()?;
    for i in 0..seeds.len() {
        for j in i + 1..seeds.len() {
            let d0 = hyperbolic_distance(DiskPoint::new(seeds[i])?, DiskPoint::new(seeds[j])?);
            let (a, b) = (DiskPoint::new(images[i]), DiskPoint::new(images[j]));
            let (Ok(a), Ok(b)) = (a, b) else { return Ok(false) };
            if (hyperbolic_distance(a, b) - d0).abs() > T::lit(1e-9) * (T::one() + d0) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Locates the Denjoy–Wolff point by iterating from five interior seeds.
///
/// Boundary cluster points are refined by iterating the boundary map
/// `σ ↦ ∠lim φ(rσ)` and cross-checked against `φ′(τ) ≤ 1`.
pub fn denjoy_wolff_locate<T: Real, M: DiskMap<T> + ?Sized>(map: &M, sched: &RadialSchedule) -> Result<DenjoyWolff> {
    let mut interior: Vec<(Complex<T>, usize)> = Vec::new();
    let mut boundary: Option<(Complex<T>, usize)> = None;
    let mut undecided = false;
    for seed in dw_seeds::<T>() {
        match follow_orbit(map, seed)? {
            Orbit::Converged(z, n) => interior.push((z, n)),
            Orbit::Escaped(z, n) => {
                if boundary.is_none() {
                    boundary = Some((z, n));
                }
            }
            Orbit::Undecided => undecided = true,
        }
    }
    let to_pair = |z: Complex<T>| [z.re.to_f64_lossy(), z.im.to_f64_lossy()];

    if let Some((z, n)) = boundary {
        if !interior.is_empty() {
            return Err(Error::Inconclusive("orbits split between interior and boundary".into()));
        }
        let mut sigma = BoundaryPoint::new(z / z.norm())?;
        for _ in 0..40 {
            let lim = radial_limit(map, sigma, sched)?;
            let next = BoundaryPoint::new(lim.value / lim.value.norm())?;
            let step = next.distance(sigma);
            sigma = next;
            if step < T::lit(1e-11) {
                break;
            }
        }
        let d = radial_derivative(map, sigma, sigma.value(), sched)?;
        if !(d.normalized <= T::one() + T::lit(1e-6)) {
            return Err(Error::Inconclusive(format!(
                "boundary cluster point has angular derivative {} > 1",
                d.normalized
            )));
        }
        return Ok(DenjoyWolff {
            kind: DwKind::Boundary,
            point: to_pair(sigma.value()),
            derivative: Some(d.normalized.to_f64_lossy()),
            iterations: n,
        });
    }
    if !interior.is_empty() && !undecided {
        let (tau, n) = interior[0];
        if interior.iter().any(|(z, _)| (*z - tau).norm() > T::lit(1e-6)) {
            return Err(Error::Inconclusive("orbits converge to different points".into()));
        }
        let h = T::lit(1e-5);
        let dh = (map.apply(tau + h)? - map.apply(tau - h)?) / (h * T::lit(2.0));
        if dh.norm() > T::one() + T::lit(1e-6) {
            return Err(Error::Inconclusive(format!("|φ′(τ)| = {} > 1", dh.norm())));
        }
        return Ok(DenjoyWolff {
            kind: DwKind::Interior,
            point: to_pair(tau),
            derivative: Some(dh.norm().to_f64_lossy()),
            iterations: n,
        });
    }
    if is_isometry(map)? {
        return Ok(DenjoyWolff {
            kind: DwKind::EllipticAutomorphism,
            point: [f64::NAN, f64::NAN],
            derivative: None,
            iterations: DW_ITERATION_BUDGET,
        });
    }
    Err(Error::Inconclusive(format!("no convergence within {DW_ITERATION_BUDGET} iterations")))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainRule<T: Real> {
    pub composed: Complex<T>,
    pub outer: Complex<T>,
    pub inner: Complex<T>,
    /// `|(ψ∘φ)′(σ) − ψ′(ω)φ′(σ)| / |ψ′(ω)φ′(σ)|`
    pub relative_residual: T,
}

/// Compares the angular derivative of `ψ∘φ` at `σ` with `ψ′(ω)·φ′(σ)`.
pub fn chain_rule_check<T: Real, A: DiskMap<T>, B: DiskMap<T>>(
    phi: &A,
    psi: &B,
    sigma: BoundaryPoint<T>,
    sched: &RadialSchedule,
) -> Result<ChainRule<T>> {
    let omega = radial_limit(phi, sigma, sched)?.value;
    let inner = radial_derivative(phi, sigma, omega, sched)?.value;
    let omega_b = BoundaryPoint::new(omega / omega.norm())?;
    let outer_limit = radial_limit(psi, omega_b, sched)?.value;
    let outer = radial_derivative(psi, omega_b, outer_limit, sched)?.value;
    let composed_map = |z: Complex<T>| psi.apply(phi.apply(z)?);
    let composed_limit = radial_limit(&composed_map, sigma, sched)?.value;
    let composed = radial_derivative(&composed_map, sigma, composed_limit, sched)?.value;
    let product = outer * inner;
    Ok(ChainRule { composed, outer, inner, relative_residual: (composed - product).norm() / product.norm() })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnivalenceVerdict {
    pub pass: bool,
    /// Preimages of two points with (numerically) coincident images.
    pub witness: Option<[[f64; 2]; 2]>,
    /// Smallest `|φ(z_i) − φ(z_j)| / |z_i − z_j|` over grid pairs.
    pub min_ratio: f64,
    pub winding_numbers: Vec<i64>,
    pub note: Option<String>,
}

/// Pairs with image separation below this multiple of their preimage
/// separation count as collisions.
pub const UNIVALENCE_RATIO_FLOOR: f64 = 1e-10;
const WINDING_SAMPLES: usize = 512;

/// Heuristic injectivity screen on a polar grid plus winding numbers of the
/// images of three concentric circles about `φ(0)`. Corroborates, does not
/// prove, univalence.
pub fn univalence_heuristic<T: Real, M: DiskMap<T> + ?Sized>(map: &M, grid: &PolarGrid) -> UnivalenceVerdict {
    let fail = |note: String| UnivalenceVerdict {
        pass: false,
        witness: None,
        min_ratio: f64::NAN,
        winding_numbers: Vec::new(),
        note: Some(note),
    };
    if grid.len() < 200 {
        return fail(format!("grid has {} < 200 points", grid.len()));
    }
    let pts: Vec<Complex<T>> = grid.points();
    let images = match pts.par_iter().map(|&z| map.apply(z)).collect::<Result<Vec<_>>>() {
        Ok(v) => v,
        Err(e) => return fail(format!("evaluation failed: {e}")),
    };
    let mut min_ratio = f64::INFINITY;
    let mut witness = None;
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            let ratio = ((images[i] - images[j]).norm() / (pts[i] - pts[j]).norm()).to_f64_lossy();
            if ratio < min_ratio {
                min_ratio = ratio;
                if ratio <= UNIVALENCE_RATIO_FLOOR {
                    let pair = |z: Complex<T>| [z.re.to_f64_lossy(), z.im.to_f64_lossy()];
                    witness = Some([pair(pts[i]), pair(pts[j])]);
                }
            }
        }
    }
    let center = images[0];
    let mut winding_numbers = Vec::with_capacity(3);
    for frac in [1.0 / 3.0, 2.0 / 3.0, 1.0] {
        let r = T::lit(grid.max_radius * frac);
        let circle: Vec<Complex<T>> = (0..WINDING_SAMPLES)
            .map(|k| crate::scalar::unit(T::TAU() * T::lit(k as f64 / WINDING_SAMPLES as f64)) * r)
            .collect();
        let imgs = match circle.par_iter().map(|&z| map.apply(z)).collect::<Result<Vec<_>>>() {
            Ok(v) => v,
            Err(e) => return fail(format!("evaluation failed: {e}")),
        };
        let mut total = T::zero();
        for k in 0..imgs.len() {
            let a = imgs[k] - center;
            let b = imgs[(k + 1) % imgs.len()] - center;
            total = total + (b / a).arg();
        }
        winding_numbers.push((total / T::TAU()).round().to_f64_lossy() as i64);
    }
    let pass = witness.is_none() && winding_numbers.iter().all(|&w| w == 1);
    UnivalenceVerdict { pass, witness, min_ratio, winding_numbers, note: None }
}

/// Closed-form hyperbolic semigroup `φ_t(z) = (z + tanh(ct/2))/(1 + z tanh(ct/2))`
/// of `G(z) = c(1 − z²)/2`; fixes ±1 with `φ_t′(−1) = e^{ct}`, `φ_t′(1) = e^{−ct}`.
pub fn hyperbolic_map<T: Real>(c: T, t: T) -> impl Fn(Complex<T>) -> Result<Complex<T>> + Sync + Copy {
    let a = (c * t * T::lit(0.5)).tanh();
    move |z: Complex<T>| Ok((z + a) / (real::<T>(T::one()) + z * a))
}
