//! Numerical building blocks: bracketed root finding, adaptive Gauss–Kronrod
//! quadrature, fixed Gauss–Legendre rules and log–log regression.

use crate::error::{Error, Result};
use std::cmp::Ordering;
use std::collections::BinaryHeap;

/// Maximum number of iterations of the bracketed root finder.
const MAX_ROOT_ITERATIONS: usize = 300;

/// A sign-changing bracket `[a, b]` with the function values at its ends.
#[derive(Debug, Clone, Copy)]
pub struct Bracket {
    pub a: f64,
    pub fa: f64,
    pub b: f64,
    pub fb: f64,
}

impl Bracket {
    /// Builds a bracket by evaluating `f` at both ends.
    pub fn evaluate<F>(f: &mut F, a: f64, b: f64) -> Result<Self>
    where
        F: FnMut(f64) -> Result<f64>,
    {
        Ok(Self {
            a,
            fa: f(a)?,
            b,
            fb: f(b)?,
        })
    }

    /// True when the function values at the ends have opposite signs (or one vanishes).
    pub fn changes_sign(&self) -> bool {
        self.fa == 0.0 || self.fb == 0.0 || (self.fa < 0.0) != (self.fb < 0.0)
    }
}

/// Brent's method (inverse quadratic interpolation, secant and bisection
/// safeguards) on a sign-changing bracket.
///
/// Terminates when the bracket is narrower than `2·(2·EPS·|x| + tol/2)` or an
/// exact zero is hit. Passing `tol = 0` iterates to machine precision.
pub fn brent<F>(mut f: F, bracket: Bracket, tol: f64, what: &'static str) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let Bracket {
        mut a,
        mut fa,
        mut b,
        mut fb,
    } = bracket;
    if !bracket.changes_sign() || !fa.is_finite() || !fb.is_finite() {
        return Err(Error::NoRoot { what, lo: a, hi: b });
    }
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;
    for _ in 0..MAX_ROOT_ITERATIONS {
        if (fb > 0.0) == (fc > 0.0) {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * tol;
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * xm * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            let min1 = 3.0 * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol1 { d } else { tol1.copysign(xm) };
        fb = f(b)?;
        if !fb.is_finite() {
            return Err(Error::Convergence {
                what,
                iterations: MAX_ROOT_ITERATIONS,
                residual: fb,
            });
        }
    }
    Err(Error::Convergence {
        what,
        iterations: MAX_ROOT_ITERATIONS,
        residual: fb,
    })
}

/// Expands `[start, start + step·2^k]` geometrically until `f` changes sign.
///
/// `step` may be negative to search downward. At most `max_expansions`
/// doublings are attempted.
pub fn expand_bracket<F>(
    f: &mut F,
    start: f64,
    f_start: f64,
    step: f64,
    max_expansions: usize,
    what: &'static str,
) -> Result<Bracket>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut inner = start;
    let mut f_inner = f_start;
    let mut width = step;
    for _ in 0..max_expansions {
        let outer = inner + width;
        let f_outer = f(outer)?;
        let bracket = Bracket {
            a: inner,
            fa: f_inner,
            b: outer,
            fb: f_outer,
        };
        if bracket.changes_sign() {
            return Ok(bracket);
        }
        inner = outer;
        f_inner = f_outer;
        width *= 2.0;
    }
    Err(Error::NoRoot {
        what,
        lo: start.min(inner),
        hi: start.max(inner),
    })
}

/// Gauss–Kronrod 15-point abscissae on [0, 1] (symmetric half).
const KRONROD_NODES: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const KRONROD_WEIGHTS: [f64; 8] = [
    0.022_935_322_010_529_225,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
/// Weights of the embedded 7-point Gauss rule (nodes at odd Kronrod indices).
const GAUSS_WEIGHTS: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Result of a 15-point Gauss–Kronrod panel.
#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod_panel<F>(f: &mut F, a: f64, b: f64) -> Panel
where
    F: FnMut(f64) -> f64,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * KRONROD_WEIGHTS[7];
    let mut gauss = fc * GAUSS_WEIGHTS[3];
    for (j, (&x, &wk)) in KRONROD_NODES
        .iter()
        .zip(&KRONROD_WEIGHTS)
        .take(7)
        .enumerate()
    {
        let dx = half * x;
        let pair = f(center - dx) + f(center + dx);
        kronrod += wk * pair;
        if j % 2 == 1 {
            gauss += GAUSS_WEIGHTS[j / 2] * pair;
        }
    }
    Panel {
        a,
        b,
        value: kronrod * half,
        error: ((kronrod - gauss) * half).abs(),
    }
}

/// Globally adaptive Gauss–Kronrod (G7/K15) integration of a smooth integrand
/// on a finite interval, refining the panel with the largest error estimate.
///
/// Converges when the summed error estimate is below
/// `max(abs_tol, rel_tol·|integral|)`.
pub fn integrate<F>(mut f: F, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    const MAX_PANELS: usize = 2000;
    if a == b {
        return Ok(0.0);
    }
    let first = kronrod_panel(&mut f, a, b);
    let mut total = first.value;
    let mut error = first.error;
    let mut heap = BinaryHeap::new();
    heap.push(first);
    while error > abs_tol.max(rel_tol * total.abs()) {
        if heap.len() >= MAX_PANELS || !total.is_finite() {
            return Err(Error::Quadrature {
                estimate: error,
                intervals: heap.len(),
            });
        }
        let worst = heap.pop().expect("heap holds at least one panel");
        let mid = 0.5 * (worst.a + worst.b);
        let left = kronrod_panel(&mut f, worst.a, mid);
        let right = kronrod_panel(&mut f, mid, worst.b);
        total += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }
    // Re-sum to remove the drift of the running updates.
    Ok(heap.iter().map(|p| p.value).sum())
}

/// Five-point Gauss–Legendre abscissae and weights on [−1, 1].
pub const GAUSS_LEGENDRE_5: [(f64, f64); 5] = [
    (-0.906_179_845_938_664, 0.236_926_885_056_189_1),
    (-0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
    (0.0, 0.568_888_888_888_888_9),
    (0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
    (0.906_179_845_938_664, 0.236_926_885_056_189_1),
];

/// Composite five-point Gauss–Legendre rule with `panels` equal panels.
pub fn gauss_legendre<F>(mut f: F, a: f64, b: f64, panels: usize) -> f64
where
    F: FnMut(f64) -> f64,
{
    let width = (b - a) / panels as f64;
    let mut sum = 0.0;
    for k in 0..panels {
        let center = a + (k as f64 + 0.5) * width;
        for &(x, w) in &GAUSS_LEGENDRE_5 {
            sum += w * f(center + 0.5 * width * x);
        }
    }
    0.5 * width * sum
}

/// Least-squares line through `(ln x, ln y)`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct LogLogFit {
    pub slope: f64,
    pub intercept: f64,
    /// Decades of `x` covered by the data.
    pub decades: f64,
}

/// Fits `ln y = slope·ln x + intercept`; points with non-positive coordinates
/// are rejected.
pub fn fit_log_log(points: &[(f64, f64)]) -> Result<LogLogFit> {
    if points.len() < 2 {
        return Err(Error::InvalidParameter(
            "log-log fit needs at least two points".into(),
        ));
    }
    if let Some(&(x, y)) = points.iter().find(|(x, y)| !(*x > 0.0 && *y > 0.0)) {
        return Err(Error::InvalidParameter(format!(
            "log-log fit needs positive data, got ({x}, {y})"
        )));
    }
    let n = points.len() as f64;
    let lx: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ly: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidParameter(
            "log-log fit needs distinct abscissae".into(),
        ));
    }
    let slope = sxy / sxx;
    let (lo, hi) = lx
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| {
            (lo.min(x), hi.max(x))
        });
    Ok(LogLogFit {
        slope,
        intercept: my - slope * mx,
        decades: (hi - lo) / std::f64::consts::LN_10,
    })
}
