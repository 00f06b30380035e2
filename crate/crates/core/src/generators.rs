//! Infinitesimal generators in Berkson–Porta form `G(z) = (τ − z)(1 − τ̄z)p(z)`,
//! half-plane Pick generators with Denjoy–Wolff point at infinity, angular
//! rates at boundary fixed points and the autonomous semigroup flow.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{cayley, cayley_derivative, BoundaryPoint, DiskPoint};
use crate::herglotz::{
    pick_kernel, BoundaryAtom, ClarkMeasure, HerglotzFunction, PickFunction, RealAtom,
    ATOM_COLLISION_TOL,
};
use crate::linalg::solve_dense;
use crate::ode::{integrate, SolverConfig, VectorField};
use crate::scalar::{real, Real};

/// A Denjoy–Wolff point with `|τ| ≥ 1 − 1e−9` is treated as a boundary point.
pub const BOUNDARY_DW_TOL: f64 = 1e-9;
/// Closed-form vanishing test for `G(σ) = 0`.
pub const FIXED_POINT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum DwPoint<T: Real> {
    Interior(DiskPoint<T>),
    Boundary(BoundaryPoint<T>),
}

impl<T: Real> DwPoint<T> {
    /// Classifies `τ` with the boundary tolerance [`BOUNDARY_DW_TOL`].
    pub fn classify(tau: Complex<T>) -> Result<Self> {
        let r = tau.norm();
        if r >= T::one() - T::lit(BOUNDARY_DW_TOL) {
            if r > T::one() + T::lit(BOUNDARY_DW_TOL) {
                return Err(Error::InvalidInput(format!("|τ| = {r} exceeds 1")));
            }
            Ok(Self::Boundary(BoundaryPoint::new(tau / r)?))
        } else {
            Ok(Self::Interior(DiskPoint::new(tau)?))
        }
    }

    pub fn value(self) -> Complex<T> {
        match self {
            Self::Interior(p) => p.value(),
            Self::Boundary(p) => p.value(),
        }
    }

    pub fn is_boundary(self) -> bool {
        matches!(self, Self::Boundary(_))
    }

    pub fn distance(self, other: Self) -> T {
        (self.value() - other.value()).norm()
    }
}

/// Berkson–Porta data `(τ, p)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Generator<T: Real> {
    pub tau: DwPoint<T>,
    pub p: HerglotzFunction<T>,
}

impl<T: Real> Generator<T> {
    pub fn new(tau: DwPoint<T>, p: HerglotzFunction<T>) -> Self {
        Self { tau, p }
    }

    /// `G(z) = −z p(z)`, the radial case.
    pub fn radial(p: HerglotzFunction<T>) -> Self {
        Self::new(DwPoint::Interior(DiskPoint::origin()), p)
    }

    /// `(τ − z)(1 − τ̄z)`
    fn base(&self, z: Complex<T>) -> Complex<T> {
        let tau = self.tau.value();
        (tau - z) * (real::<T>(T::one()) - tau.conj() * z)
    }

    fn base_derivative(&self, z: Complex<T>) -> Complex<T> {
        let tau = self.tau.value();
        tau.conj() * z * T::lit(2.0) - T::one() - tau.norm_sqr()
    }

    pub fn eval(&self, z: Complex<T>) -> Complex<T> {
        self.base(z) * self.p.eval(z)
    }

    pub fn derivative_at(&self, z: Complex<T>) -> Complex<T> {
        self.base_derivative(z) * self.p.eval(z) + self.base(z) * self.p.derivative(z)
    }

    /// Time rescaling `k·G`, `k ≥ 0`.
    pub fn scaled(&self, k: T) -> Self {
        Self::new(self.tau, self.p.combine(k, &self.p, T::zero()))
    }

    /// Conjugation by the rotation `z ↦ ρz`: `G_ρ(z) = ρ G(ρ̄ z)`.
    pub fn rotated(&self, rho: BoundaryPoint<T>) -> Self {
        let tau = match self.tau {
            DwPoint::Interior(p) => {
                DwPoint::Interior(DiskPoint::new(p.value() * rho.value()).expect("rotation keeps |τ| < 1"))
            }
            DwPoint::Boundary(p) => DwPoint::Boundary(p.rotate(rho)),
        };
        Self::new(tau, self.p.rotated(rho))
    }

    /// Uniform bound of `|G|` on the closed disk of radius `radius < 1`.
    ///
    /// The maximum sits on the circle; sampled with a relative safety margin.
    pub fn sup_on_disk(&self, radius: T) -> T {
        let n = 2048usize;
        let mut m = T::zero();
        for k in 0..n {
            let th = T::TAU() * T::from_usize(k).unwrap() / T::from_usize(n).unwrap();
            let z = Complex::new(th.cos(), th.sin()) * radius;
            m = m.max(self.eval(z).norm());
        }
        m * T::lit(1.01)
    }
}

impl<T: Real> VectorField<T> for Generator<T> {
    fn value(&self, w: Complex<T>) -> Complex<T> {
        self.eval(w)
    }
    fn derivative(&self, w: Complex<T>) -> Complex<T> {
        self.derivative_at(w)
    }
}

pub fn generator_eval<T: Real>(g: &Generator<T>, z: DiskPoint<T>) -> Complex<T> {
    g.eval(z.value())
}

/// `λ(σ) = ∠lim G(z)/(z − σ)`; non-positive at the Denjoy–Wolff point,
/// non-negative at any other boundary regular fixed point.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct AngularRate<T: Real>(pub T);

impl<T: Real> AngularRate<T> {
    pub fn value(self) -> T {
        self.0
    }
}

/// Closed-form angular rate of a disk generator at a boundary point.
pub fn angular_rate<T: Real>(g: &Generator<T>, sigma: BoundaryPoint<T>) -> Result<AngularRate<T>> {
    let s = sigma.value();
    if let DwPoint::Boundary(tau) = g.tau {
        if tau.distance(sigma) <= T::lit(BOUNDARY_DW_TOL) {
            // G(z)/(z − τ) = τ̄(z − τ)p(z); only an atom at τ survives the limit
            let w = g.p.measure.atom_at(tau).map_or(T::zero(), |a| a.weight);
            return Ok(AngularRate(-T::lit(2.0) * w));
        }
    }
    if g.p.measure.atom_at(sigma).is_some() {
        return Err(Error::InfiniteDerivative);
    }
    let value = g.base(s) * g.p.eval(s);
    if value.norm() > T::lit(FIXED_POINT_TOL) {
        return Err(Error::NotAFixedPoint(value.norm().to_f64_lossy()));
    }
    let lambda = g.base(s) * g.p.derivative(s) + g.base_derivative(s) * g.p.eval(s);
    Ok(AngularRate(lambda.re))
}

/// Half-plane generator `G(ζ) = α + βζ + Σ w_k (1 + t_k ζ)/(t_k − ζ)`,
/// whose flow has its Denjoy–Wolff point at infinity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PickGenerator<T: Real> {
    pub pick: PickFunction<T>,
}

impl<T: Real> PickGenerator<T> {
    pub fn new(pick: PickFunction<T>) -> Self {
        Self { pick }
    }

    pub fn at_infinity_dw(&self) -> bool {
        true
    }

    pub fn eval(&self, zeta: Complex<T>) -> Complex<T> {
        self.pick.eval_unchecked(zeta)
    }
}

/// Closed-form angular rate `β + Σ w_k (1 + t_k²)/(t_k − x0)²` at a real zero.
pub fn angular_rate_pick<T: Real>(g: &PickGenerator<T>, x0: T) -> Result<AngularRate<T>> {
    if g.pick.atoms().iter().any(|a| (a.location - x0).abs() <= T::lit(ATOM_COLLISION_TOL)) {
        return Err(Error::InfiniteDerivative);
    }
    let v = g.eval(real(x0)).re;
    let scale = T::one() + g.pick.beta() * x0.abs() + g.pick.alpha().abs();
    if v.abs() > T::lit(FIXED_POINT_TOL) * scale {
        return Err(Error::NotAFixedPoint(v.abs().to_f64_lossy()));
    }
    Ok(AngularRate(g.pick.derivative(real(x0)).re))
}

/// Disk-chart field `G_𝔻(z) = G_ℍ(H(z))/H′(z)` of an arbitrary half-plane field.
pub fn pushforward_to_disk<T: Real>(field: impl Fn(Complex<T>) -> Complex<T>, z: DiskPoint<T>) -> Result<Complex<T>> {
    let zeta = cayley(z.value())?.value();
    Ok(field(zeta) / cayley_derivative(z.value()))
}

/// Berkson–Porta data of the disk-chart pushforward of a Pick generator.
///
/// `p = −(i/2)·Ψ∘H`: the `βζ` term becomes an atom of weight `β/2` at 1,
/// each atom `(t, w)` becomes an atom of weight `w/2` at `H⁻¹(t)`, and `α`
/// becomes the imaginary constant `−α/2`. The Denjoy–Wolff point is 1.
pub fn conjugate_generator<T: Real>(g: &PickGenerator<T>) -> Generator<T> {
    let half = T::lit(0.5);
    let mut atoms = Vec::with_capacity(g.pick.atoms().len() + 1);
    if g.pick.beta() > T::zero() {
        atoms.push(BoundaryAtom::new(BoundaryPoint::one(), g.pick.beta() * half));
    }
    for a in g.pick.atoms() {
        atoms.push(BoundaryAtom::new(crate::herglotz::atom_on_circle(a.location), a.weight * half));
    }
    let measure = ClarkMeasure::new(atoms, T::zero()).expect("distinct real atoms map to distinct circle atoms");
    Generator::new(
        DwPoint::Boundary(BoundaryPoint::one()),
        HerglotzFunction::new(measure, -g.pick.alpha() * half),
    )
}

/// Pick generator vanishing at every point of `fixed` with one atom per gap.
///
/// Solves `α + βx_j + Σ w_k (1 + t_k x_j)/(t_k − x_j) = 0` for `(α, w)`.
pub fn synthesize_generator<T: Real>(fixed: &[T], atoms: &[T], beta: T) -> Result<PickGenerator<T>> {
    if fixed.is_empty() {
        return Err(Error::InvalidInput("need at least one fixed point".into()));
    }
    if atoms.len() + 1 != fixed.len() {
        return Err(Error::ArityMismatch { expected: fixed.len() - 1, got: atoms.len() });
    }
    if !(beta > T::zero()) || !beta.is_finite() {
        return Err(Error::InvalidInput(format!("β = {beta} must be positive")));
    }
    let mut xs = fixed.to_vec();
    let mut ts = atoms.to_vec();
    if xs.iter().chain(ts.iter()).any(|v| !v.is_finite()) {
        return Err(Error::InvalidInput("non-finite input".into()));
    }
    xs.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    ts.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    if xs.windows(2).any(|w| !(w[1] - w[0] > T::lit(ATOM_COLLISION_TOL))) {
        return Err(Error::InfeasibleSynthesis("fixed points must be distinct".into()));
    }
    for (k, t) in ts.iter().enumerate() {
        if !(*t > xs[k] && *t < xs[k + 1]) {
            return Err(Error::InfeasibleSynthesis(format!(
                "atom {t} does not lie in the gap ({}, {})",
                xs[k],
                xs[k + 1]
            )));
        }
    }
    let n = xs.len();
    let matrix: Vec<Vec<T>> = xs
        .iter()
        .map(|&x| {
            let mut row = vec![T::one()];
            row.extend(ts.iter().map(|&t| pick_kernel(t, real(x)).re));
            row
        })
        .collect();
    let rhs: Vec<T> = xs.iter().map(|&x| -beta * x).collect();
    let sol = solve_dense(matrix, rhs).ok_or_else(|| Error::InfeasibleSynthesis("singular system".into()))?;
    let alpha = sol[0];
    let weights = &sol[1..n];
    if let Some(w) = weights.iter().find(|w| !(**w > T::zero())) {
        return Err(Error::InfeasibleSynthesis(format!("non-positive weight {w}")));
    }
    let pick = PickFunction::new(
        alpha,
        beta,
        ts.iter().zip(weights).map(|(&t, &w)| RealAtom::new(t, w)).collect(),
    )?;
    Ok(PickGenerator::new(pick))
}

/// Generator with interior Denjoy–Wolff point `τ` vanishing on `fixed`.
///
/// `p = ic + Σ w_k K(η_k, ·)` has zero real part off its atoms, so `p(σ_j) = 0`
/// reduces to `c + Σ w_k Im K(η_k, σ_j) = 0`. The atoms must interlace with
/// the fixed points around the circle; `w_1 = scale` fixes the homogeneity.
pub fn synthesize_interior_generator<T: Real>(
    tau: DiskPoint<T>,
    fixed: &[BoundaryPoint<T>],
    atoms: &[BoundaryPoint<T>],
    scale: T,
) -> Result<Generator<T>> {
    let n = fixed.len();
    if n == 0 {
        return Err(Error::InvalidInput("need at least one fixed point".into()));
    }
    if atoms.len() != n {
        return Err(Error::ArityMismatch { expected: n, got: atoms.len() });
    }
    if !(scale > T::zero()) {
        return Err(Error::InvalidInput(format!("scale {scale} must be positive")));
    }
    let mut all = fixed.to_vec();
    all.extend_from_slice(&atoms[1..]);
    let order = crate::geometry::arc_order(&all, atoms[0])
        .map_err(|e| Error::InfeasibleSynthesis(e.to_string()))?;
    // walking around the circle from the first atom, points must alternate σ, η, σ, η, …
    for (pos, &i) in order.iter().enumerate() {
        if (pos % 2 == 0) != (i < n) {
            return Err(Error::InfeasibleSynthesis("atoms do not interlace with the fixed points".into()));
        }
    }
    let im_k = |eta: &BoundaryPoint<T>, sigma: &BoundaryPoint<T>| crate::herglotz::herglotz_kernel(eta.value(), sigma.value()).im;
    let matrix: Vec<Vec<T>> = fixed
        .iter()
        .map(|s| {
            let mut row = vec![T::one()];
            row.extend(atoms[1..].iter().map(|a| im_k(a, s)));
            row
        })
        .collect();
    let rhs: Vec<T> = fixed.iter().map(|s| -im_k(&atoms[0], s)).collect();
    let sol = solve_dense(matrix, rhs).ok_or_else(|| Error::InfeasibleSynthesis("singular system".into()))?;
    let mut weights = vec![T::one()];
    weights.extend_from_slice(&sol[1..]);
    if let Some(w) = weights.iter().find(|w| !(**w > T::zero())) {
        return Err(Error::InfeasibleSynthesis(format!("non-positive weight {w}")));
    }
    let measure = ClarkMeasure::new(
        atoms.iter().zip(&weights).map(|(a, w)| BoundaryAtom::new(*a, *w * scale)).collect(),
        T::zero(),
    )?;
    Ok(Generator::new(DwPoint::Interior(tau), HerglotzFunction::new(measure, sol[0] * scale)))
}

/// `φ_t(z)` for the semigroup generated by `g`.
pub fn semigroup_flow<T: Real>(g: &Generator<T>, z: DiskPoint<T>, t: T, config: &SolverConfig<T>) -> Result<DiskPoint<T>> {
    if !(t >= T::zero()) {
        return Err(Error::InvalidInput(format!("flow time {t} must be non-negative")));
    }
    let sol = integrate(g, z.value(), real(T::one()), T::zero(), t, false, config)?;
    DiskPoint::new(sol.point)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BpConsistency {
    pub steps: Vec<f64>,
    /// `|(φ_h(z) − z)/h − G(z)|` for each step.
    pub residuals: Vec<f64>,
    /// Residual after linear Richardson extrapolation of the quotients to `h = 0`.
    pub extrapolated: f64,
    /// `log10` decrease ratios between consecutive steps (≈ 1 for first order).
    pub observed_orders: Vec<f64>,
}

impl BpConsistency {
    /// Residuals are non-increasing at (at least) first order, or already at
    /// round-off level.
    pub fn first_order(&self) -> bool {
        let floor = 1e-11;
        self.residuals.iter().all(|r| *r <= floor)
            || self
                .residuals
                .windows(2)
                .zip(&self.observed_orders)
                .all(|(w, o)| w[1] <= floor || *o >= 0.8)
    }
}

/// Compares the difference quotient of the flow with the generator value.
pub fn bp_consistency<T: Real>(g: &Generator<T>, z: DiskPoint<T>, config: &SolverConfig<T>) -> Result<BpConsistency> {
    let steps = [1e-2, 1e-3, 1e-4];
    let target = g.eval(z.value());
    let mut quotients = Vec::with_capacity(steps.len());
    for &h in &steps {
        let hh = T::lit(h);
        let w = semigroup_flow(g, z, hh, config)?.value();
        quotients.push((w - z.value()) / hh);
    }
    let residuals: Vec<f64> = quotients.iter().map(|q| (*q - target).norm().to_f64_lossy()).collect();
    let (h1, h2) = (T::lit(steps[1]), T::lit(steps[2]));
    let (q1, q2) = (quotients[1], quotients[2]);
    let extrapolated_q = q2 + (q2 - q1) * (h2 / (h1 - h2));
    let extrapolated = (extrapolated_q - target).norm().to_f64_lossy();
    let observed_orders = residuals
        .windows(2)
        .map(|w| if w[1] > 0.0 { (w[0] / w[1]).log10() } else { f64::INFINITY })
        .collect();
    Ok(BpConsistency { steps: steps.to_vec(), residuals, extrapolated, observed_orders })
}
