//! Quadrature building blocks: a 7/15 Gauss-Kronrod rule, adaptive
//! bisection, geometrically graded panels for endpoint singularities at
//! zero (with geometric remainder extrapolation and divergence detection),
//! and Euler-accelerated summation of oscillatory tails.

use alloc::vec::Vec;

use crate::{Error, Result};

// 15-point Kronrod abscissae (positive half); odd indices are the embedded
// 7-point Gauss nodes. QUADPACK dqk15 values.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_838_258_730,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
}

impl QuadResult {
    pub const ZERO: QuadResult = QuadResult { value: 0.0, error: 0.0 };
}

/// One 7/15 Gauss-Kronrod panel on `[a, b]`. Returns `(value, error_estimate)`.
pub fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);

    let mut resk = fc * WGK[7];
    let mut resg = fc * WG[3];
    let mut resabs = resk.abs();
    let mut fv = [0.0f64; 14];

    for j in 0..7 {
        let x = half * XGK[j];
        let f1 = f(center - x);
        let f2 = f(center + x);
        fv[j] = f1;
        fv[7 + j] = f2;
        let fsum = f1 + f2;
        resk += WGK[j] * fsum;
        resabs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            resg += WG[j / 2] * fsum;
        }
    }

    let mean = 0.5 * resk;
    let mut resasc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        resasc += WGK[j] * ((fv[j] - mean).abs() + (fv[7 + j] - mean).abs());
    }

    let value = resk * half;
    let err = rescale_error((resk - resg) * half, resabs * half.abs(), resasc * half.abs());
    (value, err)
}

fn rescale_error(err: f64, resabs: f64, resasc: f64) -> f64 {
    let mut e = err.abs();
    if resasc != 0.0 && e != 0.0 {
        let scale = libm::pow(200.0 * e / resasc, 1.5);
        e = if scale < 1.0 { resasc * scale } else { resasc };
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        e = e.max(50.0 * f64::EPSILON * resabs);
    }
    e
}

/// Adaptive bisection on a finite interval until the accumulated error
/// estimate satisfies `abs_tol + rel_tol * |value|`.
pub fn adaptive<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
) -> Result<QuadResult> {
    let mut out = QuadResult::ZERO;
    adaptive_rec(f, a, b, abs_tol, rel_tol, 0, &mut out)?;
    Ok(out)
}

fn adaptive_rec<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
    depth: u32,
    out: &mut QuadResult,
) -> Result<()> {
    let (v, e) = gk15(f, a, b);
    if e <= abs_tol.max(rel_tol * v.abs()) || depth >= 48 {
        if depth >= 48 && e > 1e3 * abs_tol.max(rel_tol * v.abs()).max(1e-300) {
            return Err(Error::Convergence("adaptive quadrature: max depth"));
        }
        out.value += v;
        out.error += e;
        return Ok(());
    }
    let mid = 0.5 * (a + b);
    adaptive_rec(f, a, mid, 0.5 * abs_tol, rel_tol, depth + 1, out)?;
    adaptive_rec(f, mid, b, 0.5 * abs_tol, rel_tol, depth + 1, out)
}

/// Outcome of graded integration toward an endpoint singularity at zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GradedOutcome {
    Converged(QuadResult),
    /// The panel sums do not decay: the integral diverges at zero.
    Divergent,
}

#[derive(Debug, Clone, Copy)]
pub struct GradedOpts {
    /// Panel edges shrink by this factor toward zero.
    pub grading: f64,
    pub min_panels: usize,
    pub max_panels: usize,
    pub abs_tol: f64,
    pub rel_tol: f64,
}

impl Default for GradedOpts {
    fn default() -> Self {
        GradedOpts {
            grading: 0.5,
            min_panels: 40,
            max_panels: 1200,
            abs_tol: 1e-10,
            rel_tol: 1e-10,
        }
    }
}

/// Integrate `f` over `(0, upper]` with panels geometrically graded toward
/// the origin. Integrands are assumed to behave like a power of the radius
/// near zero (possibly non-integrable); the loop stops once panel sums decay
/// geometrically with a stable ratio, and the remaining mass below the last
/// edge is added by geometric extrapolation.
pub fn graded_to_zero<F: Fn(f64) -> f64>(
    f: &F,
    upper: f64,
    opts: &GradedOpts,
) -> Result<GradedOutcome> {
    if !(upper > 0.0) {
        return Err(Error::Domain("graded_to_zero: upper bound must be positive"));
    }
    let g = opts.grading;
    let mut total = 0.0f64;
    let mut err = 0.0f64;
    let mut edge = upper;
    let mut prev_sum = f64::NAN;
    let mut prev_ratio = f64::NAN;
    let mut near_one = 0usize;

    for k in 0..opts.max_panels {
        let lo = edge * g;
        let panel = adaptive(f, lo, edge, opts.abs_tol * 1e-2, opts.rel_tol * 1e-2)?;
        total += panel.value;
        err += panel.error;
        let sum = panel.value;

        let ratio = if prev_sum.is_nan() || prev_sum == 0.0 { f64::NAN } else { sum / prev_sum };

        if ratio.is_finite() && ratio >= 1.0 - 1e-12 {
            near_one += 1;
            if near_one >= 24 && k >= opts.min_panels {
                return Ok(GradedOutcome::Divergent);
            }
        } else {
            near_one = 0;
        }

        if k + 1 >= opts.min_panels {
            let tol = opts.abs_tol.max(opts.rel_tol * total.abs());
            if sum.abs() < 1e-3 * tol.max(1e-300) || lo < 1e-280 {
                // Remainder below the last edge, extrapolated geometrically
                // when a ratio is available.
                if ratio.is_finite() && ratio.abs() < 1.0 {
                    let rem = sum * ratio / (1.0 - ratio);
                    total += rem;
                    err += rem.abs() * 0.5;
                }
                return Ok(GradedOutcome::Converged(QuadResult { value: total, error: err }));
            }
            if ratio.is_finite()
                && prev_ratio.is_finite()
                && ratio.abs() < 0.999
                && (ratio - prev_ratio).abs() <= 1e-9 * ratio.abs().max(1e-9)
            {
                let rem = sum * ratio / (1.0 - ratio);
                let rem_err =
                    sum.abs() * (ratio - prev_ratio).abs() / ((1.0 - ratio.abs()) * (1.0 - ratio.abs()));
                if rem_err <= tol {
                    total += rem;
                    err += rem_err + rem.abs() * 1e-9;
                    return Ok(GradedOutcome::Converged(QuadResult { value: total, error: err }));
                }
            }
        }

        prev_ratio = ratio;
        prev_sum = sum;
        edge = lo;
    }
    Err(Error::Convergence("graded_to_zero: panel budget exhausted"))
}

/// Sum `integral of f` over consecutive half-period segments
/// `[a + k d, a + (k+1) d)` for `k = 0, 1, ...`, i.e. the oscillatory tail
/// of an integral on `[a, infinity)`. Early segments are summed directly;
/// once the segment integrals alternate in sign the remaining series is
/// accelerated by repeated averaging of partial sums.
pub fn alternating_tail<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    d: f64,
    abs_tol: f64,
    max_segments: usize,
) -> Result<QuadResult> {
    if !(d > 0.0) {
        return Err(Error::Domain("alternating_tail: segment length must be positive"));
    }
    const DIRECT_HEAD: usize = 8;
    const ACCEL_MIN: usize = 10;
    const ACCEL_MAX: usize = 72;

    let mut direct = 0.0f64;
    let mut err = 0.0f64;
    let mut terms: Vec<f64> = Vec::new();
    let mut lo = a;

    for k in 0..max_segments {
        let hi = a + (k as f64 + 1.0) * d;
        let (mut v, mut e) = gk15(f, lo, hi);
        if e > 1e-3 * v.abs().max(abs_tol) {
            let mid = 0.5 * (lo + hi);
            let (v1, e1) = gk15(f, lo, mid);
            let (v2, e2) = gk15(f, mid, hi);
            v = v1 + v2;
            e = e1 + e2;
        }
        err += e;
        lo = hi;

        // Fast-decaying integrands never need acceleration.
        if k >= 4 && v.abs() < abs_tol * 1e-3 && terms.iter().all(|t| t.abs() < abs_tol * 1e-2) {
            let s: f64 = terms.iter().sum();
            return Ok(QuadResult { value: direct + s, error: err + v.abs() });
        }

        if k < DIRECT_HEAD {
            direct += v;
            continue;
        }

        match terms.last() {
            Some(&prev) if prev != 0.0 && v * prev < 0.0 => terms.push(v),
            None => terms.push(v),
            Some(_) => {
                // Alternation broke: flush and restart collection.
                for t in terms.drain(..) {
                    direct += t;
                }
                terms.push(v);
            }
        }

        if terms.len() >= ACCEL_MIN {
            let (s, se) = averaged_sums(&terms);
            if se <= abs_tol || terms.len() >= ACCEL_MAX {
                return Ok(QuadResult { value: direct + s, error: err + se });
            }
        }
    }

    if !terms.is_empty() {
        let (s, se) = averaged_sums(&terms);
        return Ok(QuadResult { value: direct + s, error: err + se });
    }
    Err(Error::Convergence("alternating_tail: series did not settle"))
}

/// Van Wijngaarden averaging of the partial sums of an alternating series.
/// Returns the accelerated sum and an error estimate.
fn averaged_sums(terms: &[f64]) -> (f64, f64) {
    let n = terms.len();
    let mut row: Vec<f64> = Vec::with_capacity(n);
    let mut s = 0.0;
    for &t in terms {
        s += t;
        row.push(s);
    }
    let mut best = *row.last().unwrap();
    let mut prev_best = best;
    while row.len() > 1 {
        for i in 0..row.len() - 1 {
            row[i] = 0.5 * (row[i] + row[i + 1]);
        }
        row.pop();
        prev_best = best;
        best = *row.last().unwrap();
    }
    (best, (best - prev_best).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math;

    #[test]
    fn gk15_polynomial_exact() {
        // Degree-13 polynomial is integrated exactly by 15-point Kronrod.
        let f = |x: f64| 3.0 * x * x + libm::pow(x, 7.0);
        let (v, _) = gk15(&f, 0.0, 1.0);
        assert!((v - (1.0 + 0.125)).abs() < 1e-14);
    }

    #[test]
    fn adaptive_sin() {
        let r = adaptive(&|x: f64| math::sin(x), 0.0, math::FRAC_PI_2, 1e-12, 1e-12).unwrap();
        assert!((r.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn graded_inverse_sqrt() {
        // integral of x^{-1/2} over (0, 1] = 2.
        let out = graded_to_zero(&|x: f64| 1.0 / math::sqrt(x), 1.0, &GradedOpts::default()).unwrap();
        match out {
            GradedOutcome::Converged(r) => assert!((r.value - 2.0).abs() < 1e-9, "got {}", r.value),
            GradedOutcome::Divergent => panic!("should converge"),
        }
    }

    #[test]
    fn graded_power_near_nonintegrable() {
        // integral of x^{-0.95} over (0, 1] = 20.
        let out = graded_to_zero(&|x: f64| libm::pow(x, -0.95), 1.0, &GradedOpts::default()).unwrap();
        match out {
            GradedOutcome::Converged(r) => {
                assert!((r.value - 20.0).abs() < 1e-7 * 20.0, "got {}", r.value)
            }
            GradedOutcome::Divergent => panic!("should converge"),
        }
    }

    #[test]
    fn graded_detects_divergence() {
        let out = graded_to_zero(&|x: f64| 1.0 / x, 1.0, &GradedOpts::default()).unwrap();
        assert_eq!(out, GradedOutcome::Divergent);
    }

    #[test]
    fn oscillatory_sinc_tail() {
        // integral of sin(x)/x over [0, inf) = pi/2; head on [0, pi] done
        // adaptively, tail accelerated.
        let f = |x: f64| math::sin(x) / x;
        let head = adaptive(&f, 1e-12, math::PI, 1e-13, 1e-13).unwrap();
        let tail = alternating_tail(&f, math::PI, math::PI, 1e-12, 4000).unwrap();
        let total = head.value + tail.value;
        assert!((total - math::FRAC_PI_2).abs() < 1e-10, "got {total}");
    }

    #[test]
    fn oscillatory_slow_decay() {
        // integral of sin(x)/sqrt(x) over [0, inf) = sqrt(pi/2).
        let f = |x: f64| math::sin(x) / math::sqrt(x);
        let head = adaptive(&f, 1e-14, math::PI, 1e-13, 1e-13).unwrap();
        let tail = alternating_tail(&f, math::PI, math::PI, 1e-12, 4000).unwrap();
        let total = head.value + tail.value;
        let exact = math::sqrt(math::FRAC_PI_2);
        assert!((total - exact).abs() < 1e-9, "got {total} want {exact}");
    }
}
