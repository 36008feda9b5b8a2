//! Adaptive Gauss-Kronrod (7/15) quadrature with a global error queue.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::summation::NeumaierSum;

/// Maximum number of live subintervals before giving up.
pub const INTERVAL_BUDGET: usize = 20_000;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
// Gauss weights at XGK[1], XGK[3], XGK[5], XGK[7]
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

struct Piece {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Piece {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Piece {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let pair = f(c - dx) + f(c + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    Piece {
        a,
        b,
        value: kronrod * h,
        error: ((kronrod - gauss) * h).abs(),
    }
}

/// `int_a^b f` to absolute tolerance `tol`, refining the worst piece first.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    integrate_with_breaks(f, &[a, b], tol)
}

/// As [`integrate`], starting from the partition given by `breaks`
/// (sorted, at least two points). Useful when kinks are known.
pub fn integrate_with_breaks<F: Fn(f64) -> f64>(f: F, breaks: &[f64], tol: f64) -> Result<f64> {
    if breaks.len() < 2 || breaks.windows(2).any(|w| !(w[0] <= w[1])) {
        return Err(Error::domain("quadrature breaks must be sorted"));
    }
    let mut heap: BinaryHeap<Piece> = breaks
        .windows(2)
        .filter(|w| w[1] > w[0])
        .map(|w| gk15(&f, w[0], w[1]))
        .collect();
    let mut total_err: f64 = heap.iter().map(|p| p.error).sum();
    while total_err > tol {
        if heap.len() >= INTERVAL_BUDGET {
            return Err(Error::integrity(format!(
                "quadrature did not converge: error {total_err:.3e} > {tol:.3e} after {INTERVAL_BUDGET} intervals"
            )));
        }
        let worst = heap.pop().expect("nonempty heap");
        let mid = 0.5 * (worst.a + worst.b);
        if !(mid > worst.a && mid < worst.b) {
            return Err(Error::integrity(
                "quadrature interval collapsed below machine precision",
            ));
        }
        let left = gk15(&f, worst.a, mid);
        let right = gk15(&f, mid, worst.b);
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        // resum now and then so cancellation cannot drift the running total
        if heap.len() % 256 == 0 || total_err <= tol {
            total_err = heap.iter().map(|p| p.error).sum();
        }
    }
    if !total_err.is_finite() {
        return Err(Error::integrity(
            "quadrature produced a non-finite error estimate",
        ));
    }
    let mut pieces = heap.into_vec();
    pieces.sort_by(|x, y| x.a.total_cmp(&y.a));
    Ok(pieces
        .iter()
        .map(|p| p.value)
        .collect::<NeumaierSum>()
        .value())
}
