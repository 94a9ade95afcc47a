//! Root bracketing and adaptive quadrature used by the gauge machinery.

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
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for i in 0..7 {
        let dx = h * XGK[i];
        let s = f(c - dx) + f(c + dx);
        kron += WGK[i] * s;
        if i % 2 == 1 {
            gauss += WG[i / 2] * s;
        }
    }
    (kron * h, ((kron - gauss) * h).abs())
}

/// Globally adaptive Gauss-Kronrod (7/15) integration on `[a, b]`.
/// Returns the value and an error estimate.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, rel_tol: f64, abs_tol: f64) -> (f64, f64) {
    let mut segs = vec![{
        let (v, e) = gk15(&f, a, b);
        (a, b, v, e)
    }];
    for _ in 0..2000 {
        let total: f64 = segs.iter().map(|s| s.2).sum();
        let err: f64 = segs.iter().map(|s| s.3).sum();
        if err <= abs_tol.max(rel_tol * total.abs()) {
            break;
        }
        let (idx, _) = segs
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .expect("nonempty");
        let (lo, hi, _, _) = segs.swap_remove(idx);
        let mid = 0.5 * (lo + hi);
        let (v1, e1) = gk15(&f, lo, mid);
        let (v2, e2) = gk15(&f, mid, hi);
        segs.push((lo, mid, v1, e1));
        segs.push((mid, hi, v2, e2));
    }
    let total = segs.iter().map(|s| s.2).sum();
    let err = segs.iter().map(|s| s.3).sum();
    (total, err)
}

/// Inverts an increasing function on `(0, ∞)` by bisection in log-space.
///
/// The upper bracket is doubled from `guess` until `f(hi) >= y`; the
/// returned value is the final upper bracket, so `f(result) >= y` always
/// holds. Returns 0 for `y <= 0` and `∞` if no bracket is found.
pub fn invert_increasing(f: impl Fn(f64) -> f64, y: f64, guess: f64) -> f64 {
    if y <= 0.0 || y.is_nan() {
        return 0.0;
    }
    let guess = if guess.is_finite() && guess > 0.0 { guess } else { 1.0 };
    let mut lo = guess;
    let mut hi = guess;
    if f(guess) >= y {
        loop {
            lo *= 0.5;
            if lo < f64::MIN_POSITIVE {
                return lo.max(f64::MIN_POSITIVE);
            }
            if f(lo) < y {
                break;
            }
            hi = lo;
        }
    } else {
        loop {
            hi *= 2.0;
            if !hi.is_finite() {
                return f64::INFINITY;
            }
            if f(hi) >= y {
                break;
            }
            lo = hi;
        }
    }
    // bisect on the geometric midpoint
    for _ in 0..200 {
        if hi - lo <= 4.0 * f64::EPSILON * hi {
            break;
        }
        let mid = (lo * hi).sqrt();
        let mid = if mid <= lo || mid >= hi { 0.5 * (lo + hi) } else { mid };
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) >= y {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}
