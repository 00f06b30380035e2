//! Atomic Herglotz functions on the disk and Pick functions on the upper
//! half-plane, together with boundary contact formulas.
//!
//! Disk side: `q(z) = iC + m·1 + Σ w_k (σ_k + z)/(σ_k − z)` where `m` is the
//! mass of normalized arc length. Half-plane side:
//! `Ψ(ζ) = α + βζ + Σ w_k (1 + t_k ζ)/(t_k − ζ)`.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{cayley, cayley_inverse, BoundaryPoint, DiskPoint, HalfPlanePoint};
use crate::scalar::{cplx, real, Real};

/// Two atoms closer than this are rejected.
pub const ATOM_COLLISION_TOL: f64 = 1e-12;
/// Tolerance for "endpoint is fixed" in the monotonicity check.
pub const ENDPOINT_FIX_TOL: f64 = 1e-10;

/// Herglotz kernel `(σ + z)/(σ − z)`.
pub fn herglotz_kernel<T: Real>(sigma: Complex<T>, z: Complex<T>) -> Complex<T> {
    (sigma + z) / (sigma - z)
}

/// Pick kernel `(1 + tζ)/(t − ζ)`.
pub fn pick_kernel<T: Real>(t: T, zeta: Complex<T>) -> Complex<T> {
    (real::<T>(T::one()) + zeta * t) / (real::<T>(t) - zeta)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryAtom<T: Real> {
    pub location: BoundaryPoint<T>,
    pub weight: T,
}

impl<T: Real> BoundaryAtom<T> {
    pub fn new(location: BoundaryPoint<T>, weight: T) -> Self {
        Self { location, weight }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RealAtom<T: Real> {
    pub location: T,
    pub weight: T,
}

impl<T: Real> RealAtom<T> {
    pub fn new(location: T, weight: T) -> Self {
        Self { location, weight }
    }
}

/// Finite atomic measure plus a multiple of normalized arc length.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClarkMeasure<T: Real> {
    atoms: Vec<BoundaryAtom<T>>,
    uniform_mass: T,
}

impl<T: Real> ClarkMeasure<T> {
    pub fn new(atoms: Vec<BoundaryAtom<T>>, uniform_mass: T) -> Result<Self> {
        if !(uniform_mass >= T::zero()) || !uniform_mass.is_finite() {
            return Err(Error::InvalidInput(format!(
                "uniform mass {uniform_mass} must be finite and non-negative"
            )));
        }
        let tol = T::lit(ATOM_COLLISION_TOL);
        for (i, a) in atoms.iter().enumerate() {
            if !(a.weight > T::zero()) || !a.weight.is_finite() {
                return Err(Error::InvalidInput(format!("atom {i} has weight {}", a.weight)));
            }
            if atoms[..i].iter().any(|b| b.location.distance(a.location) <= tol) {
                return Err(Error::DegenerateConfiguration(format!(
                    "atom {i} collides with an earlier atom"
                )));
            }
        }
        Ok(Self { atoms, uniform_mass })
    }

    pub fn zero() -> Self {
        Self { atoms: Vec::new(), uniform_mass: T::zero() }
    }

    pub fn uniform(mass: T) -> Result<Self> {
        Self::new(Vec::new(), mass)
    }

    pub fn atoms(&self) -> &[BoundaryAtom<T>] {
        &self.atoms
    }

    pub fn uniform_mass(&self) -> T {
        self.uniform_mass
    }

    pub fn total_mass(&self) -> T {
        self.atoms.iter().fold(self.uniform_mass, |acc, a| acc + a.weight)
    }

    pub fn atom_at(&self, sigma: BoundaryPoint<T>) -> Option<&BoundaryAtom<T>> {
        let tol = T::lit(ATOM_COLLISION_TOL);
        self.atoms.iter().find(|a| a.location.distance(sigma) <= tol)
    }

    /// `a·self + b·other`, merging coincident atoms and dropping zero weights.
    pub fn combine(&self, a: T, other: &Self, b: T) -> Self {
        let tol = T::lit(ATOM_COLLISION_TOL);
        let mut atoms: Vec<BoundaryAtom<T>> = Vec::new();
        for (scale, src) in [(a, &self.atoms), (b, &other.atoms)] {
            if scale == T::zero() {
                continue;
            }
            for atom in src {
                let w = scale * atom.weight;
                match atoms.iter_mut().find(|x| x.location.distance(atom.location) <= tol) {
                    Some(x) => x.weight = x.weight + w,
                    None => atoms.push(BoundaryAtom::new(atom.location, w)),
                }
            }
        }
        Self { atoms, uniform_mass: a * self.uniform_mass + b * other.uniform_mass }
    }

    pub fn rotated(&self, by: BoundaryPoint<T>) -> Self {
        Self {
            atoms: self
                .atoms
                .iter()
                .map(|a| BoundaryAtom::new(a.location.rotate(by), a.weight))
                .collect(),
            uniform_mass: self.uniform_mass,
        }
    }
}

/// `p(z) = i·imag_const + ∫ (σ + z)/(σ − z) dμ(σ)`, a function with
/// non-negative real part on the disk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HerglotzFunction<T: Real> {
    pub measure: ClarkMeasure<T>,
    pub imag_const: T,
}

impl<T: Real> HerglotzFunction<T> {
    pub fn new(measure: ClarkMeasure<T>, imag_const: T) -> Self {
        Self { measure, imag_const }
    }

    /// `p ≡ c` for real `c ≥ 0`.
    pub fn constant(c: T) -> Result<Self> {
        Ok(Self::new(ClarkMeasure::uniform(c)?, T::zero()))
    }

    pub fn is_zero(&self) -> bool {
        self.measure.atoms.is_empty()
            && self.measure.uniform_mass == T::zero()
            && self.imag_const == T::zero()
    }

    /// Evaluates at any point that is not an atom; no domain check.
    pub fn eval(&self, z: Complex<T>) -> Complex<T> {
        let mut acc = cplx(self.measure.uniform_mass, self.imag_const);
        for a in &self.measure.atoms {
            acc = acc + herglotz_kernel(a.location.value(), z) * a.weight;
        }
        acc
    }

    pub fn derivative(&self, z: Complex<T>) -> Complex<T> {
        let two = T::lit(2.0);
        self.measure.atoms.iter().fold(real(T::zero()), |acc, a| {
            let s = a.location.value();
            let d = s - z;
            acc + s * (two * a.weight) / (d * d)
        })
    }

    pub fn rotated(&self, by: BoundaryPoint<T>) -> Self {
        Self::new(self.measure.rotated(by), self.imag_const)
    }

    pub fn combine(&self, a: T, other: &Self, b: T) -> Self {
        Self::new(
            self.measure.combine(a, &other.measure, b),
            a * self.imag_const + b * other.imag_const,
        )
    }
}

/// Evaluates a Herglotz function at an interior point.
pub fn herglotz_eval<T: Real>(p: &HerglotzFunction<T>, z: DiskPoint<T>) -> Complex<T> {
    p.eval(z.value())
}

/// `Ψ(ζ) = α + βζ + Σ w_k (1 + t_k ζ)/(t_k − ζ)` with atomic `ν`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PickFunction<T: Real> {
    alpha: T,
    beta: T,
    atoms: Vec<RealAtom<T>>,
}

impl<T: Real> PickFunction<T> {
    pub fn new(alpha: T, beta: T, atoms: Vec<RealAtom<T>>) -> Result<Self> {
        if !alpha.is_finite() || !beta.is_finite() || beta < T::zero() {
            return Err(Error::InvalidInput(format!(
                "need finite α and β ≥ 0, got α = {alpha}, β = {beta}"
            )));
        }
        let tol = T::lit(ATOM_COLLISION_TOL);
        for (i, a) in atoms.iter().enumerate() {
            if !(a.weight > T::zero()) || !a.weight.is_finite() || !a.location.is_finite() {
                return Err(Error::InvalidInput(format!("atom {i} has weight {}", a.weight)));
            }
            if atoms[..i].iter().any(|b| (b.location - a.location).abs() <= tol) {
                return Err(Error::DegenerateConfiguration(format!(
                    "atom {i} collides with an earlier atom"
                )));
            }
        }
        Ok(Self { alpha, beta, atoms })
    }

    pub fn identity() -> Self {
        Self { alpha: T::zero(), beta: T::one(), atoms: Vec::new() }
    }

    pub fn alpha(&self) -> T {
        self.alpha
    }

    pub fn beta(&self) -> T {
        self.beta
    }

    pub fn atoms(&self) -> &[RealAtom<T>] {
        &self.atoms
    }

    pub fn is_identity(&self) -> bool {
        let tol = T::lit(1e-12);
        self.atoms.is_empty() && self.alpha.abs() <= tol && (self.beta - T::one()).abs() <= tol
    }

    fn atom_near(&self, x: T) -> Option<&RealAtom<T>> {
        let tol = T::lit(ATOM_COLLISION_TOL);
        self.atoms.iter().find(|a| (a.location - x).abs() <= tol)
    }

    /// Evaluates without the atom-collision check.
    pub fn eval_unchecked(&self, zeta: Complex<T>) -> Complex<T> {
        let mut acc = real::<T>(self.alpha) + zeta * self.beta;
        for a in &self.atoms {
            acc = acc + pick_kernel(a.location, zeta) * a.weight;
        }
        acc
    }

    pub fn derivative(&self, zeta: Complex<T>) -> Complex<T> {
        self.atoms.iter().fold(real(self.beta), |acc, a| {
            let d = real::<T>(a.location) - zeta;
            acc + real::<T>(a.weight * (T::one() + a.location * a.location)) / (d * d)
        })
    }
}

/// Evaluates a Pick function at an interior point or at a real non-atom point.
pub fn pick_eval<T: Real>(psi: &PickFunction<T>, zeta: HalfPlanePoint<T>) -> Result<Complex<T>> {
    let z = zeta.value();
    if zeta.is_boundary() {
        if let Some(a) = psi.atom_near(z.re) {
            return Err(Error::PoleAtAtom(a.location.to_f64_lossy()));
        }
    }
    Ok(psi.eval_unchecked(z))
}

/// Self-map `ψ = (q − 1)/(q + 1)` whose Clark measure at 1 is the given one.
#[derive(Debug, Clone, PartialEq)]
pub struct ClarkSelfMap<T: Real> {
    q: HerglotzFunction<T>,
}

impl<T: Real> ClarkSelfMap<T> {
    pub fn eval(&self, z: Complex<T>) -> Complex<T> {
        let q = self.q.eval(z);
        let one = real::<T>(T::one());
        (q - one) / (q + one)
    }

    pub fn herglotz(&self) -> &HerglotzFunction<T> {
        &self.q
    }

    /// The induced value `ψ(0)`, reported since `C` is a free input here.
    pub fn value_at_origin(&self) -> Complex<T> {
        self.eval(real(T::zero()))
    }
}

pub fn selfmap_from_clark<T: Real>(mu: &ClarkMeasure<T>, c: T) -> Result<ClarkSelfMap<T>> {
    if !(mu.total_mass() > T::zero()) {
        return Err(Error::DegenerateMeasure);
    }
    Ok(ClarkSelfMap { q: HerglotzFunction::new(mu.clone(), c) })
}

/// Whether `|σ − σ0|^{−2}` is integrable against `μ`.
pub fn contact_regular<T: Real>(mu: &ClarkMeasure<T>, sigma0: BoundaryPoint<T>) -> bool {
    mu.uniform_mass() == T::zero() && mu.atom_at(sigma0).is_none()
}

/// Boundary value `α + βx0 + Σ w_k (1 + t_k x0)/(t_k − x0)` at a regular contact point.
pub fn contact_value<T: Real>(psi: &PickFunction<T>, x0: T) -> Result<T> {
    if psi.atom_near(x0).is_some() {
        return Err(Error::NotRegularContact(x0.to_f64_lossy()));
    }
    let sum = psi.atoms.iter().fold(T::zero(), |acc, a| {
        acc + a.weight * (T::one() + a.location * x0) / (a.location - x0)
    });
    Ok(psi.alpha + psi.beta * x0 + sum)
}

/// `Ψ(x_{j+1}) − Ψ(x_j)` via `(x_{j+1} − x_j)[β + Σ w (1 + t²)/((t − x_j)(t − x_{j+1}))]`.
pub fn displacement<T: Real>(psi: &PickFunction<T>, xj: T, xj1: T) -> Result<T> {
    if !(xj < xj1) {
        return Err(Error::InvalidInput(format!("need x_j < x_(j+1), got {xj} ≥ {xj1}")));
    }
    for x in [xj, xj1] {
        if psi.atom_near(x).is_some() {
            return Err(Error::NotRegularContact(x.to_f64_lossy()));
        }
    }
    let bracket = psi.atoms.iter().fold(psi.beta, |acc, a| {
        let t = a.location;
        acc + a.weight * (T::one() + t * t) / ((t - xj) * (t - xj1))
    });
    Ok((xj1 - xj) * bracket)
}

/// Strictly increasing boundary points with a distinguished gap (1-based).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContactConfiguration<T: Real> {
    points: Vec<T>,
    gap_index: usize,
}

impl<T: Real> ContactConfiguration<T> {
    pub fn new(points: Vec<T>, gap_index: usize) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::DegenerateConfiguration("need at least two points".into()));
        }
        if points.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::DegenerateConfiguration("points must increase strictly".into()));
        }
        if gap_index < 1 || gap_index > points.len() - 1 {
            return Err(Error::InvalidInput(format!(
                "gap index {gap_index} outside [1, {}]",
                points.len() - 1
            )));
        }
        Ok(Self { points, gap_index })
    }

    pub fn points(&self) -> &[T] {
        &self.points
    }

    pub fn gap_index(&self) -> usize {
        self.gap_index
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    Less,
    Greater,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapCheck {
    /// 1-based gap index `j` for `[x_j, x_{j+1}]`.
    pub gap: usize,
    pub by_formula: f64,
    pub by_difference: f64,
    pub width: f64,
    pub expected: Relation,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LemmaReport {
    pub gaps: Vec<GapCheck>,
    /// Largest |formula − direct difference| over all gaps.
    pub max_cross_discrepancy: f64,
    /// True when there is a single gap, so the check reduces to telescoping.
    pub vacuous: bool,
    pub all_strict: bool,
}

/// Checks that the displacement across gap `k` is strictly shorter than the
/// gap and strictly longer across every other gap, for a Pick function
/// fixing both outer points and with `ν` supported inside gap `k`.
pub fn loewner_lemma_check<T: Real>(
    psi: &PickFunction<T>,
    cfg: &ContactConfiguration<T>,
) -> Result<LemmaReport> {
    if psi.is_identity() {
        return Err(Error::IdentityExcluded);
    }
    let xs = cfg.points();
    let n = xs.len();
    let (first, last) = (xs[0], xs[n - 1]);
    let tol = T::lit(ENDPOINT_FIX_TOL);
    for x in [first, last] {
        let v = contact_value(psi, x)?;
        if (v - x).abs() > tol {
            return Err(Error::NotNormalized(format!("Ψ({x}) = {v}")));
        }
    }
    let k = cfg.gap_index();
    let (lo, hi) = (xs[k - 1], xs[k]);
    if psi.atoms().iter().any(|a| !(a.location > lo && a.location < hi)) {
        return Err(Error::DegenerateConfiguration(format!(
            "ν must be supported inside gap {k}"
        )));
    }

    let mut gaps = Vec::with_capacity(n - 1);
    let mut max_disc = 0.0f64;
    for j in 1..n {
        let (a, b) = (xs[j - 1], xs[j]);
        let formula = displacement(psi, a, b)?;
        let direct = contact_value(psi, b)? - contact_value(psi, a)?;
        let width = b - a;
        max_disc = max_disc.max((formula - direct).abs().to_f64_lossy());
        let expected = if j == k { Relation::Less } else { Relation::Greater };
        let holds = match expected {
            Relation::Less => formula < width && direct < width,
            Relation::Greater => formula > width && direct > width,
        };
        gaps.push(GapCheck {
            gap: j,
            by_formula: formula.to_f64_lossy(),
            by_difference: direct.to_f64_lossy(),
            width: width.to_f64_lossy(),
            expected,
            holds,
        });
    }
    let vacuous = n == 2;
    let all_strict = !vacuous && gaps.iter().all(|g| g.holds);
    Ok(LemmaReport { gaps, max_cross_discrepancy: max_disc, vacuous, all_strict })
}

/// Half-plane data `Ψ = H∘ψ∘H⁻¹` of the self-map with atomic Clark measure `μ`
/// and constant `C`.
///
/// An atom at 1 feeds `β`; an atom at `σ ≠ 1` becomes an atom at `H(σ)` with
/// the same weight; `α = −C`.
pub fn clark_to_nevanlinna<T: Real>(mu: &ClarkMeasure<T>, c: T) -> Result<PickFunction<T>> {
    if mu.uniform_mass() != T::zero() {
        return Err(Error::UnsupportedMeasureClass(
            "absolutely continuous part has no atomic half-plane image".into(),
        ));
    }
    let mut beta = T::zero();
    let mut atoms = Vec::with_capacity(mu.atoms().len());
    for a in mu.atoms() {
        match cayley(a.location) {
            Ok(t) => atoms.push(RealAtom::new(t.value().re, a.weight)),
            Err(Error::PoleAtOne) => beta = beta + a.weight,
            Err(e) => return Err(e),
        }
    }
    PickFunction::new(-c, beta, atoms)
}

/// `p(z) = 1 + ic′ + Σ w_k (σ_k + z)/(σ_k − z)` with `c′` chosen so that the
/// boundary value at 1 is exactly 1.
pub fn normalize_at_one<T: Real>(atoms: &[BoundaryAtom<T>]) -> Result<HerglotzFunction<T>> {
    let one = real::<T>(T::one());
    let mut shift = T::zero();
    for a in atoms {
        if a.location.distance(BoundaryPoint::one()) <= T::lit(ATOM_COLLISION_TOL) {
            return Err(Error::PoleAtOne);
        }
        shift = shift - a.weight * herglotz_kernel(a.location.value(), one).im;
    }
    Ok(HerglotzFunction::new(ClarkMeasure::new(atoms.to_vec(), T::one())?, shift))
}

/// Boundary point `H⁻¹(t)` of a real atom, for diagnostics.
pub fn atom_on_circle<T: Real>(t: T) -> BoundaryPoint<T> {
    BoundaryPoint::new(cayley_inverse(HalfPlanePoint::real(t))).expect("real points map to the circle")
}

#[cfg(test)]
mod tests {
    use super::*;

    type C = Complex<f64>;

    fn bp(z: C) -> BoundaryPoint<f64> {
        BoundaryPoint::new(z).unwrap()
    }

    fn disk(re: f64, im: f64) -> DiskPoint<f64> {
        DiskPoint::new(C::new(re, im)).unwrap()
    }

    #[test]
    fn herglotz_eval_examples() {
        let p = HerglotzFunction::constant(1.0).unwrap();
        assert_eq!(herglotz_eval(&p, disk(0.3, -0.2)), C::new(1.0, 0.0));

        let mu = ClarkMeasure::new(vec![BoundaryAtom::new(bp(C::new(-1.0, 0.0)), 1.0)], 0.0).unwrap();
        let p = HerglotzFunction::new(mu, 0.0);
        assert!((herglotz_eval(&p, disk(0.0, 0.0)) - 1.0).norm() < 1e-15);
        assert!((herglotz_eval(&p, disk(0.5, 0.0)) - 1.0 / 3.0).norm() < 1e-15);
    }

    #[test]
    fn pick_eval_examples() {
        let id = PickFunction::<f64>::identity();
        let z = HalfPlanePoint::new(C::new(0.4, 2.0)).unwrap();
        assert_eq!(pick_eval(&id, z).unwrap(), z.value());

        let psi = PickFunction::<f64>::new(0.0, 2.0, vec![RealAtom::new(0.0, 1.0)]).unwrap();
        let v = pick_eval(&psi, HalfPlanePoint::new(C::new(0.0, 1.0)).unwrap()).unwrap();
        assert!((v - C::new(0.0, 3.0)).norm() < 1e-15);
        let v = pick_eval(&psi, HalfPlanePoint::real(1.0)).unwrap();
        assert!((v - C::new(1.0, 0.0)).norm() < 1e-15);
        assert!(matches!(pick_eval(&psi, HalfPlanePoint::real(0.0)), Err(Error::PoleAtAtom(_))));
    }

    #[test]
    fn selfmap_examples() {
        let z = C::new(0.3, 0.4);
        let id = selfmap_from_clark(
            &ClarkMeasure::new(vec![BoundaryAtom::new(BoundaryPoint::one(), 1.0)], 0.0).unwrap(),
            0.0,
        )
        .unwrap();
        assert!((id.eval(z) - z).norm() < 1e-14);

        let zero = selfmap_from_clark(&ClarkMeasure::uniform(1.0).unwrap(), 0.0).unwrap();
        assert!(zero.eval(z).norm() < 1e-15);

        let neg = selfmap_from_clark(
            &ClarkMeasure::new(vec![BoundaryAtom::new(bp(C::new(-1.0, 0.0)), 1.0)], 0.0).unwrap(),
            0.0,
        )
        .unwrap();
        assert!((neg.eval(z) + z).norm() < 1e-14);

        assert_eq!(
            selfmap_from_clark(&ClarkMeasure::<f64>::zero(), 0.0),
            Err(Error::DegenerateMeasure)
        );
    }

    #[test]
    fn contact_regular_examples() {
        let atom = ClarkMeasure::new(vec![BoundaryAtom::new(bp(C::new(-1.0, 0.0)), 1.0)], 0.0).unwrap();
        assert!(contact_regular(&atom, bp(C::new(0.0, 1.0))));
        assert!(!contact_regular(&atom, bp(C::new(-1.0, 0.0))));
        let uniform = ClarkMeasure::uniform(1.0).unwrap();
        assert!(!contact_regular(&uniform, bp(C::new(0.0, 1.0))));
    }

    #[test]
    fn arc_length_integral_of_inverse_square_diverges() {
        // midpoint rule for ∫|σ − i|^{−2} d(arc)/(2π) with refinement
        let sigma0 = C::new(0.0, 1.0);
        let integral = |n: usize| -> f64 {
            (0..n)
                .map(|k| {
                    let th = std::f64::consts::TAU * (k as f64 + 0.5) / n as f64;
                    1.0 / (C::new(th.cos(), th.sin()) - sigma0).norm_sqr()
                })
                .sum::<f64>()
                / n as f64
        };
        let (a, b, c) = (integral(1 << 8), integral(1 << 12), integral(1 << 16));
        assert!(b > 10.0 * a && c > 10.0 * b);
    }

    #[test]
    fn contact_value_examples() {
        let psi = PickFunction::<f64>::new(0.0, 2.0, vec![RealAtom::new(0.0, 1.0)]).unwrap();
        assert!((contact_value(&psi, 1.0).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(contact_value(&PickFunction::<f64>::identity(), 0.7).unwrap(), 0.7);
        let psi = PickFunction::<f64>::new(0.0, 1.1, vec![RealAtom::new(0.0, 0.1)]).unwrap();
        assert!((contact_value(&psi, -1.0).unwrap() + 1.0).abs() < 1e-15);
        assert!(matches!(contact_value(&psi, 0.0), Err(Error::NotRegularContact(_))));
    }

    #[test]
    fn contact_value_is_the_vertical_limit() {
        let psi = PickFunction::<f64>::new(0.0, 1.1, vec![RealAtom::new(0.0, 0.1)]).unwrap();
        let at = |eps: f64| psi.eval_unchecked(C::new(-1.0, eps));
        // real part is even in ε, so one Richardson step with ratio 1000 kills ε²
        let (r1, r2) = (at(1e-3).re, at(1e-6).re);
        let extrapolated = (1e6 * r2 - r1) / (1e6 - 1.0);
        assert!((extrapolated + 1.0).abs() < 1e-12);
        assert!(at(1e-6).im.abs() < 1e-5);
    }

    #[test]
    fn displacement_examples() {
        let psi = PickFunction::<f64>::new(0.0, 1.1, vec![RealAtom::new(0.0, 0.1)]).unwrap();
        assert!((displacement(&psi, -1.0, 0.5).unwrap() - 1.35).abs() < 1e-14);
        assert!((displacement(&psi, 0.5, 1.0).unwrap() - 0.65).abs() < 1e-14);
        let direct = contact_value(&psi, 0.5).unwrap() - contact_value(&psi, -1.0).unwrap();
        assert!((direct - 1.35).abs() < 1e-14);
        let id = PickFunction::<f64>::identity();
        assert!((displacement(&id, -0.3, 2.5).unwrap() - 2.8).abs() < 1e-15);
        assert!(matches!(displacement(&psi, 0.0, 1.0), Err(Error::NotRegularContact(_))));
    }

    #[test]
    fn lemma_worked_example() {
        let psi = PickFunction::<f64>::new(0.0, 1.1, vec![RealAtom::new(0.0, 0.1)]).unwrap();
        let cfg = ContactConfiguration::new(vec![-1.0, 0.5, 1.0], 1).unwrap();
        let report = loewner_lemma_check(&psi, &cfg).unwrap();
        assert!(report.all_strict);
        assert!((report.gaps[0].by_formula - 1.35).abs() < 1e-14);
        assert_eq!(report.gaps[0].width, 1.5);
        assert!((report.gaps[1].by_formula - 0.65).abs() < 1e-14);
        assert_eq!(report.gaps[1].width, 0.5);
        assert!(report.max_cross_discrepancy < 1e-14);
    }

    #[test]
    fn lemma_second_example_and_errors() {
        let w = 0.5;
        let psi = PickFunction::<f64>::new(0.0, 1.0 + w, vec![RealAtom::new(0.0, w)]).unwrap();
        let cfg = ContactConfiguration::new(vec![-1.0, 0.25, 1.0], 1).unwrap();
        assert!(loewner_lemma_check(&psi, &cfg).unwrap().all_strict);

        assert_eq!(
            loewner_lemma_check(&PickFunction::<f64>::identity(), &cfg),
            Err(Error::IdentityExcluded)
        );
        let shifted = PickFunction::<f64>::new(0.2, 1.1, vec![RealAtom::new(0.0, 0.1)]).unwrap();
        assert!(matches!(
            loewner_lemma_check(&shifted, &cfg),
            Err(Error::NotNormalized(_))
        ));
    }

    #[test]
    fn lemma_two_points_is_vacuous() {
        let psi = PickFunction::<f64>::new(0.0, 1.1, vec![RealAtom::new(0.0, 0.1)]).unwrap();
        let cfg = ContactConfiguration::new(vec![-1.0, 1.0], 1).unwrap();
        let report = loewner_lemma_check(&psi, &cfg).unwrap();
        assert!(report.vacuous);
        assert!(!report.all_strict);
        assert!((report.gaps[0].by_formula - 2.0).abs() < 1e-14);
    }

    #[test]
    fn clark_to_nevanlinna_examples() {
        let mu = ClarkMeasure::new(vec![BoundaryAtom::new(bp(C::new(-1.0, 0.0)), 1.0)], 0.0).unwrap();
        let psi = clark_to_nevanlinna(&mu, 0.0).unwrap();
        assert_eq!(psi.beta(), 0.0);
        assert_eq!(psi.alpha(), 0.0);
        assert_eq!(psi.atoms().len(), 1);
        assert!(psi.atoms()[0].location.abs() < 1e-15);
        assert_eq!(psi.atoms()[0].weight, 1.0);

        let mu = ClarkMeasure::new(vec![BoundaryAtom::new(BoundaryPoint::one(), 1.0)], 0.0).unwrap();
        assert!(clark_to_nevanlinna(&mu, 0.0).unwrap().is_identity());

        assert!(matches!(
            clark_to_nevanlinna(&ClarkMeasure::uniform(1.0).unwrap(), 0.0),
            Err(Error::UnsupportedMeasureClass(_))
        ));
    }

    #[test]
    fn normalize_at_one_examples() {
        let p = normalize_at_one::<f64>(&[]).unwrap();
        assert_eq!(p.eval(C::new(0.2, 0.1)), C::new(1.0, 0.0));

        let i = bp(C::new(0.0, 1.0));
        let p = normalize_at_one(&[BoundaryAtom::new(i, 0.5)]).unwrap();
        assert!((p.imag_const - 0.5).abs() < 1e-15);
        assert!((p.eval(C::new(1.0, 0.0)) - 1.0).norm() < 1e-15);

        let p = normalize_at_one(&[BoundaryAtom::new(bp(C::new(-1.0, 0.0)), 2.0)]).unwrap();
        assert_eq!(p.imag_const, 0.0);
        assert!((p.eval(C::new(1.0, 0.0)) - 1.0).norm() < 1e-15);

        assert_eq!(
            normalize_at_one(&[BoundaryAtom::new(BoundaryPoint::one(), 1.0)]),
            Err(Error::PoleAtOne)
        );
    }

    #[test]
    fn atom_collision_rejected() {
        let a = BoundaryAtom::new(bp(C::new(0.0, 1.0)), 1.0);
        assert!(ClarkMeasure::new(vec![a, a], 0.0).is_err());
        assert!(PickFunction::<f64>::new(0.0, 1.0, vec![RealAtom::new(0.0, 1.0), RealAtom::new(0.0, 2.0)]).is_err());
    }
}
