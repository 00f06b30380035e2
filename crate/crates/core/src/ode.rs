//! Adaptive Dormand–Prince 5(4) integration of autonomous holomorphic
//! vector fields on the disk, optionally carrying the variational equation
//! `dv/dt = ∂G(w)·v` alongside the state.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{real, Real};

/// A holomorphic vector field with its complex derivative.
pub trait VectorField<T: Real>: Sync {
    fn value(&self, w: Complex<T>) -> Complex<T>;
    fn derivative(&self, w: Complex<T>) -> Complex<T>;
}

impl<T: Real, F: VectorField<T>> VectorField<T> for &F {
    fn value(&self, w: Complex<T>) -> Complex<T> {
        (**self).value(w)
    }
    fn derivative(&self, w: Complex<T>) -> Complex<T> {
        (**self).derivative(w)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig<T: Real> {
    pub rel_tol: T,
    pub abs_tol: T,
    /// Steps landing within this distance of the unit circle are rejected.
    pub guard_band: T,
    pub max_steps: usize,
}

impl<T: Real> Default for SolverConfig<T> {
    fn default() -> Self {
        Self {
            rel_tol: T::lit(1e-9),
            abs_tol: T::lit(1e-9),
            guard_band: T::lit(1e-12),
            max_steps: 200_000,
        }
    }
}

impl<T: Real> SolverConfig<T> {
    pub fn with_tolerance(tol: T) -> Self {
        Self { rel_tol: tol, abs_tol: tol, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        let (lo, hi) = (T::lit(1e-14), T::lit(1e-3));
        for (name, v) in [("rel_tol", self.rel_tol), ("abs_tol", self.abs_tol)] {
            if !(v >= lo && v <= hi) {
                return Err(Error::InvalidInput(format!("{name} = {v} outside [1e-14, 1e-3]")));
            }
        }
        if !(self.guard_band > T::zero() && self.guard_band <= T::lit(1e-6)) {
            return Err(Error::InvalidInput(format!(
                "guard_band = {} outside (0, 1e-6]",
                self.guard_band
            )));
        }
        if self.max_steps == 0 {
            return Err(Error::InvalidInput("max_steps must be positive".into()));
        }
        Ok(())
    }
}

/// State `(w, v)`: the point and its tangent vector.
type State<T> = [Complex<T>; 2];

fn axpy<T: Real>(y: &State<T>, h: T, terms: &[(f64, &State<T>)]) -> State<T> {
    let mut out = *y;
    for (c, k) in terms {
        let s = h * T::lit(*c);
        out[0] = out[0] + k[0] * s;
        out[1] = out[1] + k[1] * s;
    }
    out
}

// Dormand–Prince tableau (autonomous fields, so the c_i nodes are unused)
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

/// Continuous extension of one accepted step.
#[derive(Debug, Clone, Copy)]
struct DenseStep<T: Real> {
    t0: T,
    h: T,
    r: [Complex<T>; 5],
}

impl<T: Real> DenseStep<T> {
    fn eval(&self, t: T) -> Complex<T> {
        let th = (t - self.t0) / self.h;
        let th1 = T::one() - th;
        let r = &self.r;
        r[0] + (r[1] + (r[2] + (r[3] + r[4] * th1) * th) * th1) * th
    }
}

/// Accepted nodes of one integration, with dense output between them.
#[derive(Debug, Clone)]
pub struct Trajectory<T: Real> {
    pub nodes: Vec<(T, Complex<T>)>,
    dense: Vec<DenseStep<T>>,
}

impl<T: Real> Trajectory<T> {
    pub(crate) fn start(t: T, w: Complex<T>) -> Self {
        Self { nodes: vec![(t, w)], dense: Vec::new() }
    }

    pub fn last(&self) -> (T, Complex<T>) {
        *self.nodes.last().expect("trajectory has a start node")
    }

    /// Dense-output value at `t` within the integrated span.
    pub fn sample(&self, t: T) -> Option<Complex<T>> {
        let (t0, w0) = self.nodes[0];
        if t == t0 {
            return Some(w0);
        }
        self.dense
            .iter()
            .find(|d| {
                let (a, b) = (d.t0, d.t0 + d.h);
                t >= a.min(b) && t <= a.max(b)
            })
            .map(|d| d.eval(t))
    }

    pub fn max_modulus(&self) -> T {
        self.nodes.iter().fold(T::zero(), |m, (_, w)| m.max(w.norm()))
    }

    pub(crate) fn append(&mut self, other: Trajectory<T>) {
        self.nodes.extend(other.nodes.into_iter().skip(1));
        self.dense.extend(other.dense);
    }

    fn to_f64_rows(&self) -> Vec<[f64; 3]> {
        self.nodes
            .iter()
            .map(|(t, w)| [t.to_f64_lossy(), w.re.to_f64_lossy(), w.im.to_f64_lossy()])
            .collect()
    }
}

/// Result of integrating from `t0` to `t1`.
#[derive(Debug, Clone)]
pub struct Solution<T: Real> {
    pub point: Complex<T>,
    /// Transported tangent vector (1 at the start) when requested.
    pub tangent: Complex<T>,
    pub trajectory: Trajectory<T>,
    pub steps: usize,
}

/// Integrates `dw/dt = G(w)` over `[t0, t1]` starting at `w0`.
///
/// With `variational` the tangent `v` (starting at `v0`) obeys
/// `dv/dt = G′(w)·v` and enters the error norm.
pub fn integrate<T: Real, F: VectorField<T>>(
    field: &F,
    w0: Complex<T>,
    v0: Complex<T>,
    t0: T,
    t1: T,
    variational: bool,
    config: &SolverConfig<T>,
) -> Result<Solution<T>> {
    let mut traj = Trajectory::start(t0, w0);
    if t1 == t0 {
        return Ok(Solution { point: w0, tangent: v0, trajectory: traj, steps: 0 });
    }
    let rhs = |y: &State<T>| -> State<T> {
        let g = field.value(y[0]);
        let dv = if variational { field.derivative(y[0]) * y[1] } else { real(T::zero()) };
        [g, dv]
    };
    let comps = if variational { 2 } else { 1 };
    let err_norm = |y0: &State<T>, y1: &State<T>, e: &State<T>| -> T {
        let mut acc = T::zero();
        for i in 0..comps {
            let sc = config.abs_tol + config.rel_tol * y0[i].norm().max(y1[i].norm());
            let r = e[i].norm() / sc;
            acc = acc + r * r;
        }
        (acc / T::from_usize(comps).unwrap()).sqrt()
    };

    let span = t1 - t0;
    let dir = span.signum();
    let one_minus_guard = T::one() - config.guard_band;
    let mut t = t0;
    let mut y: State<T> = [w0, if variational { v0 } else { real(T::zero()) }];
    let mut k1 = rhs(&y);

    // initial step guess
    let mut h = {
        let sc = config.abs_tol + config.rel_tol * y[0].norm();
        let d0 = y[0].norm() / sc;
        let d1 = k1[0].norm() / sc;
        let h0 = if d0 < T::lit(1e-5) || d1 < T::lit(1e-5) {
            T::lit(1e-6)
        } else {
            T::lit(0.01) * d0 / d1
        };
        let y1 = axpy(&y, h0 * dir, &[(1.0, &k1)]);
        let f1 = rhs(&y1);
        let d2 = (f1[0] - k1[0]).norm() / sc / h0;
        let dm = d1.max(d2);
        let h1 = if dm <= T::lit(1e-15) {
            (h0 * T::lit(1e-3)).max(T::lit(1e-6))
        } else {
            (T::lit(0.01) / dm).powf(T::lit(0.2))
        };
        (T::lit(100.0) * h0).min(h1).min(span.abs())
    };

    let min_step = T::epsilon() * T::lit(16.0) * (T::one().max(t0.abs()).max(t1.abs()));
    let mut steps = 0usize;
    let mut last_rejected = false;
    loop {
        let remaining = (t1 - t).abs();
        if remaining <= min_step {
            break;
        }
        if steps >= config.max_steps {
            return Err(Error::MaxStepsExceeded(config.max_steps));
        }
        if h > remaining {
            h = remaining;
        }
        if h < min_step {
            return Err(Error::GuardBandStall { t: t.to_f64_lossy(), partial: traj.to_f64_rows() });
        }
        steps += 1;
        let hs = h * dir;
        let k2 = rhs(&axpy(&y, hs, &[(A21, &k1)]));
        let k3 = rhs(&axpy(&y, hs, &[(A31, &k1), (A32, &k2)]));
        let k4 = rhs(&axpy(&y, hs, &[(A41, &k1), (A42, &k2), (A43, &k3)]));
        let k5 = rhs(&axpy(&y, hs, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]));
        let k6 = rhs(&axpy(&y, hs, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]));
        let y_new = axpy(&y, hs, &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)]);

        if !(y_new[0].norm() < one_minus_guard) || !y_new[0].re.is_finite() || !y_new[0].im.is_finite() {
            h = h * T::lit(0.5);
            last_rejected = true;
            continue;
        }
        let k7 = rhs(&y_new);
        let e = axpy(
            &[real(T::zero()), real(T::zero())],
            hs,
            &[(E1, &k1), (E3, &k3), (E4, &k4), (E5, &k5), (E6, &k6), (E7, &k7)],
        );
        let err = err_norm(&y, &y_new, &e);
        if !err.is_finite() {
            h = h * T::lit(0.5);
            last_rejected = true;
            continue;
        }
        if err <= T::one() {
            let ydiff = y_new[0] - y[0];
            let bspl = k1[0] * hs - ydiff;
            let r4 = ydiff - k7[0] * hs - bspl;
            let r5 = (k1[0] * T::lit(D1)
                + k3[0] * T::lit(D3)
                + k4[0] * T::lit(D4)
                + k5[0] * T::lit(D5)
                + k6[0] * T::lit(D6)
                + k7[0] * T::lit(D7))
                * hs;
            traj.dense.push(DenseStep { t0: t, h: hs, r: [y[0], ydiff, bspl, r4, r5] });
            t = if (t1 - (t + hs)).abs() <= min_step { t1 } else { t + hs };
            y = y_new;
            k1 = k7;
            traj.nodes.push((t, y[0]));
            let fac = if err == T::zero() {
                T::lit(5.0)
            } else {
                (T::lit(0.9) * err.powf(T::lit(-0.2))).min(T::lit(5.0)).max(T::lit(0.2))
            };
            h = if last_rejected { h * fac.min(T::one()) } else { h * fac };
            last_rejected = false;
        } else {
            let fac = (T::lit(0.9) * err.powf(T::lit(-0.2))).max(T::lit(0.2));
            h = h * fac;
            last_rejected = true;
        }
    }
    if let Some(last) = traj.nodes.last_mut() {
        last.0 = t1;
    }
    Ok(Solution { point: y[0], tangent: y[1], trajectory: traj, steps })
}
