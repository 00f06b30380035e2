//! Richardson extrapolation on a geometric step ladder.

use num_complex::Complex;

use crate::scalar::Real;

/// Best entry of an extrapolation table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extrapolated<T: Real> {
    pub value: Complex<T>,
    /// |T[i][j] − T[i−1][j]| at the selected entry.
    pub residual: T,
    /// Row (finest sample used) and column (number of eliminated error terms).
    pub row: usize,
    pub order: usize,
}

/// Extrapolates samples `f(h_0), f(h_0/q), f(h_0/q²), …` to `h → 0`
/// assuming `f(h) = f(0) + c_1 h + c_2 h² + …`.
///
/// The entry with the smallest difference to its upper neighbour in the
/// same column wins, which trades truncation error against sample noise.
pub fn extrapolate<T: Real>(samples: &[Complex<T>], ratio: T, max_order: usize) -> Option<Extrapolated<T>> {
    if samples.len() < 2 {
        return None;
    }
    let mut table: Vec<Vec<Complex<T>>> = Vec::with_capacity(samples.len());
    let mut best: Option<Extrapolated<T>> = None;
    for (i, &s) in samples.iter().enumerate() {
        let mut row = vec![s];
        let mut factor = T::one();
        for j in 1..=i.min(max_order) {
            factor = factor * ratio;
            let prev = row[j - 1];
            let upper = table[i - 1][j - 1];
            row.push(prev + (prev - upper) / (factor - T::one()));
        }
        if i >= 1 {
            for j in 0..row.len().min(table[i - 1].len()) {
                let residual = (row[j] - table[i - 1][j]).norm();
                if best.map_or(true, |b| residual < b.residual) {
                    best = Some(Extrapolated { value: row[j], residual, row: i, order: j });
                }
            }
        }
        table.push(row);
    }
    best
}
