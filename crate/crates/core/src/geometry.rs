//! Points of the unit disk, its boundary and the upper half-plane, Möbius
//! maps, the Cayley transform and the hyperbolic metric.
//!
//! The hyperbolic metric has curvature −1, i.e.
//! `d(z1, z2) = 2 artanh(|z1 − z2| / |1 − conj(z1) z2|)`.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{cplx, real, Real};

/// Tolerance within which a boundary point is snapped back to the unit circle.
pub const BOUNDARY_TOL: f64 = 1e-12;

/// Interior point of the unit disk.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiskPoint<T: Real>(Complex<T>);

impl<T: Real> DiskPoint<T> {
    pub fn new(value: Complex<T>) -> Result<Self> {
        if value.norm() < T::one() {
            Ok(Self(value))
        } else {
            Err(Error::InvalidInput(format!(
                "|z| = {} is not inside the unit disk",
                value.norm()
            )))
        }
    }

    pub fn origin() -> Self {
        Self(Complex::new(T::zero(), T::zero()))
    }

    pub fn value(self) -> Complex<T> {
        self.0
    }
}

/// Point of the unit circle, stored with exactly unit modulus.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryPoint<T: Real>(Complex<T>);

impl<T: Real> BoundaryPoint<T> {
    /// Accepts values within [`BOUNDARY_TOL`] of the circle and renormalizes them.
    pub fn new(value: Complex<T>) -> Result<Self> {
        let r = value.norm();
        let tol = T::lit(BOUNDARY_TOL).max(T::epsilon() * T::lit(8.0));
        if (r - T::one()).abs() <= tol {
            Ok(Self(value / r))
        } else {
            Err(Error::InvalidInput(format!("|σ| = {r} is not on the unit circle")))
        }
    }

    pub fn from_angle(theta: T) -> Self {
        Self(Complex::new(theta.cos(), theta.sin()))
    }

    pub fn one() -> Self {
        Self(real(T::one()))
    }

    pub fn value(self) -> Complex<T> {
        self.0
    }

    /// Argument in `(−π, π]`.
    pub fn angle(self) -> T {
        self.0.arg()
    }

    pub fn rotate(self, by: Self) -> Self {
        Self(self.0 * by.0)
    }

    pub fn conj(self) -> Self {
        Self(self.0.conj())
    }

    pub fn distance(self, other: Self) -> T {
        (self.0 - other.0).norm()
    }
}

/// Point of the closed upper half-plane (interior or a real chart point).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HalfPlanePoint<T: Real>(Complex<T>);

impl<T: Real> HalfPlanePoint<T> {
    pub fn new(value: Complex<T>) -> Result<Self> {
        if value.im >= T::zero() && value.re.is_finite() && value.im.is_finite() {
            Ok(Self(value))
        } else {
            Err(Error::InvalidInput(format!(
                "Im ζ = {} is negative",
                value.im
            )))
        }
    }

    pub fn real(x: T) -> Self {
        Self(real(x))
    }

    pub fn value(self) -> Complex<T> {
        self.0
    }

    pub fn is_boundary(self) -> bool {
        self.0.im == T::zero()
    }
}

impl<T: Real> From<DiskPoint<T>> for Complex<T> {
    fn from(p: DiskPoint<T>) -> Self {
        p.0
    }
}

impl<T: Real> From<BoundaryPoint<T>> for Complex<T> {
    fn from(p: BoundaryPoint<T>) -> Self {
        p.0
    }
}

impl<T: Real> From<HalfPlanePoint<T>> for Complex<T> {
    fn from(p: HalfPlanePoint<T>) -> Self {
        p.0
    }
}

/// Cayley transform `H(z) = i(1 + z)/(1 − z)` of the closed disk minus {1}
/// onto the closed upper half-plane.
pub fn cayley<T: Real>(z: impl Into<Complex<T>>) -> Result<HalfPlanePoint<T>> {
    let z = z.into();
    if z.norm() > T::one() + T::lit(BOUNDARY_TOL) {
        return Err(Error::InvalidInput(format!("|z| = {} exceeds 1", z.norm())));
    }
    if (z - T::one()).norm() <= T::lit(BOUNDARY_TOL) {
        return Err(Error::PoleAtOne);
    }
    let i = cplx(T::zero(), T::one());
    let mut w = i * (real::<T>(T::one()) + z) / (real::<T>(T::one()) - z);
    if (z.norm() - T::one()).abs() <= T::lit(BOUNDARY_TOL) {
        w.im = T::zero();
    }
    // round-off may leave −0 or a tiny negative imaginary part
    w.im = w.im.max(T::zero());
    Ok(HalfPlanePoint(w))
}

/// Inverse Cayley transform `(ζ − i)/(ζ + i)`; real inputs land on the circle.
pub fn cayley_inverse<T: Real>(zeta: HalfPlanePoint<T>) -> Complex<T> {
    let i = cplx(T::zero(), T::one());
    let z = (zeta.0 - i) / (zeta.0 + i);
    if zeta.is_boundary() {
        z / z.norm()
    } else {
        z
    }
}

/// Derivative of the Cayley transform, `2i/(1 − z)²`.
pub fn cayley_derivative<T: Real>(z: Complex<T>) -> Complex<T> {
    let one_minus = real::<T>(T::one()) - z;
    cplx(T::zero(), T::lit(2.0)) / (one_minus * one_minus)
}

/// Boundary point corresponding to a real chart coordinate.
pub fn boundary_from_real<T: Real>(x: T) -> BoundaryPoint<T> {
    BoundaryPoint(cayley_inverse(HalfPlanePoint::real(x)))
}

/// Hyperbolic distance (curvature −1) between two interior points.
pub fn hyperbolic_distance<T: Real>(z1: DiskPoint<T>, z2: DiskPoint<T>) -> T {
    let (a, b) = (z1.0, z2.0);
    let num = (a - b).norm();
    let den = (real::<T>(T::one()) - a.conj() * b).norm();
    let ratio = (num / den).min(T::one());
    T::lit(2.0) * ratio.atanh()
}

/// Counter-clockwise ordering of `points` starting just after `anchor`.
///
/// Returns indices into `points`; the anchor lies on the arc between the
/// last and the first listed point.
pub fn arc_order<T: Real>(points: &[BoundaryPoint<T>], anchor: BoundaryPoint<T>) -> Result<Vec<usize>> {
    let tol = T::lit(BOUNDARY_TOL);
    for (i, p) in points.iter().enumerate() {
        if p.distance(anchor) <= tol {
            return Err(Error::DegenerateConfiguration(format!(
                "point {i} coincides with the anchor"
            )));
        }
        for q in &points[..i] {
            if p.distance(*q) <= tol {
                return Err(Error::DegenerateConfiguration(format!(
                    "point {i} is duplicated"
                )));
            }
        }
    }
    let two_pi = T::TAU();
    let rel_angle = |p: &BoundaryPoint<T>| {
        let a = (p.0 * anchor.0.conj()).arg();
        if a < T::zero() {
            a + two_pi
        } else {
            a
        }
    };
    let mut idx: Vec<usize> = (0..points.len()).collect();
    idx.sort_by(|&i, &j| {
        rel_angle(&points[i])
            .partial_cmp(&rel_angle(&points[j]))
            .expect("finite angles")
    });
    Ok(idx)
}

/// Möbius map `z ↦ (az + b)/(cz + d)` normalized to `ad − bc = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MoebiusMap<T: Real> {
    pub a: Complex<T>,
    pub b: Complex<T>,
    pub c: Complex<T>,
    pub d: Complex<T>,
}

impl<T: Real> MoebiusMap<T> {
    pub fn new(a: Complex<T>, b: Complex<T>, c: Complex<T>, d: Complex<T>) -> Result<Self> {
        let det = a * d - b * c;
        if det.norm() <= T::epsilon() * (a.norm() * d.norm() + b.norm() * c.norm()) {
            return Err(Error::DegenerateConfiguration(
                "Möbius determinant vanishes".into(),
            ));
        }
        let s = det.sqrt();
        Ok(Self { a: a / s, b: b / s, c: c / s, d: d / s })
    }

    pub fn identity() -> Self {
        let (o, z) = (real(T::one()), real(T::zero()));
        Self { a: o, b: z, c: z, d: o }
    }

    /// Disk automorphism `z ↦ e^{iθ} (z − a)/(1 − conj(a) z)`.
    pub fn disk_automorphism(theta: T, a: DiskPoint<T>) -> Self {
        let rot = crate::scalar::unit(theta);
        let a = a.0;
        Self::new(rot, -rot * a, -a.conj(), real(T::one())).expect("|a| < 1 keeps det > 0")
    }

    pub fn rotation(theta: T) -> Self {
        Self::disk_automorphism(theta, DiskPoint::origin())
    }

    pub fn cayley() -> Self {
        let i = cplx(T::zero(), T::one());
        Self::new(i, i, real(-T::one()), real(T::one())).expect("Cayley determinant is 2i")
    }

    /// Image of `z`; `None` at the pole.
    pub fn apply(&self, z: Complex<T>) -> Option<Complex<T>> {
        let den = self.c * z + self.d;
        if den.norm() == T::zero() {
            None
        } else {
            Some((self.a * z + self.b) / den)
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        Self {
            a: self.a * other.a + self.b * other.c,
            b: self.a * other.b + self.b * other.d,
            c: self.c * other.a + self.d * other.c,
            d: self.c * other.b + self.d * other.d,
        }
    }

    pub fn inverse(&self) -> Self {
        Self { a: self.d, b: -self.b, c: -self.c, d: self.a }
    }
}

/// Polar sampling grid: the origin plus `rings × spokes` points on
/// concentric circles of radii `max_radius·i/rings`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolarGrid {
    pub rings: usize,
    pub spokes: usize,
    pub max_radius: f64,
}

impl Default for PolarGrid {
    fn default() -> Self {
        Self { rings: 8, spokes: 32, max_radius: 0.9 }
    }
}

impl PolarGrid {
    pub fn len(&self) -> usize {
        1 + self.rings * self.spokes
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn points<T: Real>(&self) -> Vec<Complex<T>> {
        let mut pts = Vec::with_capacity(self.len());
        pts.push(real(T::zero()));
        for i in 1..=self.rings {
            let r = T::lit(self.max_radius * i as f64 / self.rings as f64);
            for j in 0..self.spokes {
                let th = T::TAU() * T::lit(j as f64 / self.spokes as f64);
                pts.push(crate::scalar::unit(th) * r);
            }
        }
        pts
    }
}
