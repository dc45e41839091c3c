//! Fourier-side collision operators on radial characteristic functions.
//!
//! Radiality collapses the sphere integral to the polar angle: with
//! `c = cos(theta/2)`, `s = sin(theta/2)` the post-collisional arguments
//! have moduli `|xi+| = r c` and `|xi-| = r s` (so `|xi+|^2 + |xi-|^2 = r^2`),
//! and
//!
//! ```text
//! G(phi)(r) = 2 pi int b(cos t) sin t  phi(r c) phi(r s) dt
//! B(phi)(r) = 2 pi int b(cos t) sin t [phi(r c) phi(r s) - phi(r)] dt
//! ```
//!
//! over `t` in `(0, pi/2]`. For non-cutoff kernels the bracket vanishes
//! like a power of `t` at grazing angles and is evaluated in a
//! cancellation-free split, so the graded quadrature sees the true decay
//! instead of rounding noise.

use alloc::vec;
use alloc::vec::Vec;

use crate::charfn::{self, OriginModel, RadialCharFn, TailModel};
use crate::kernel::{self, CrossSection};
use crate::math;
use crate::quad;
use crate::{Error, Result};

/// Per-node absolute quadrature tolerance for operator evaluation.
pub const OPERATOR_TOL: f64 = 1e-10;

/// Result of evaluating a collision operator over the grid.
#[derive(Debug, Clone)]
pub struct CollisionEvaluation {
    pub output_values: Vec<f64>,
    pub quad_error_estimate: Vec<f64>,
}

// 15-point Kronrod abscissae and weights on [-1, 1] (positive half),
// duplicated from the quad module so the mesh can fold them into tables.
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

/// One quadrature abscissa with everything that does not depend on the
/// state folded in.
#[derive(Debug, Clone, Copy)]
struct MeshPoint {
    /// `2 pi b(theta) sin(theta) * w_kronrod * half_width`.
    weight: f64,
    /// Same with the embedded Gauss weight (zero off the Gauss nodes);
    /// the difference of the two sums is the error estimate.
    weight_gauss: f64,
    /// `ln cos(theta/2)` and `ln sin(theta/2)`: log-offsets of the
    /// post-collisional moduli.
    ln_cos: f64,
    ln_sin: f64,
    panel: u32,
}

/// Fixed angular quadrature mesh for one cross section: Gauss-Kronrod
/// cells on panels geometrically graded toward the grazing singularity,
/// split at a truncation crossover (and at table breakpoints) so kinks
/// land on cell boundaries. Shared by every node and every state, which
/// is what makes the solver's inner loop affordable.
#[derive(Debug, Clone)]
pub struct AngularMesh {
    points: Vec<MeshPoint>,
    n_panels: usize,
    /// Grading ratio between consecutive panel edges.
    grading: f64,
}

impl AngularMesh {
    /// Panels reach down to `pi/2 * grading^panels`; deeper mass is
    /// recovered by geometric extrapolation of the per-panel sums.
    pub fn build(cs: &CrossSection, panels: usize) -> Result<AngularMesh> {
        let grading: f64 = 0.5;
        let mut breakpoints: Vec<f64> = Vec::new();
        if let Some(t) = cs.crossover_angle() {
            if t > 1e-14 && t < math::FRAC_PI_2 - 1e-14 {
                breakpoints.push(t);
            }
        }
        breakpoints.extend(cs.profile_breakpoints());

        let mut points = Vec::with_capacity(panels * 20);
        let mut hi = math::FRAC_PI_2;
        for k in 0..panels {
            let lo = hi * grading;
            // Cells within the panel: split at interior breakpoints and cap
            // the width so the top panels resolve the smooth variation.
            let mut cuts: Vec<f64> = vec![lo, hi];
            for &b in &breakpoints {
                if b > lo * (1.0 + 1e-12) && b < hi * (1.0 - 1e-12) {
                    cuts.push(b);
                }
            }
            cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
            for w in cuts.windows(2) {
                let (a, b) = (w[0], w[1]);
                let sub = math::ceil((b - a) / 0.2).max(1.0) as usize;
                for j in 0..sub {
                    let ca = a + (b - a) * j as f64 / sub as f64;
                    let cb = a + (b - a) * (j + 1) as f64 / sub as f64;
                    push_cell(&mut points, cs, ca, cb, k as u32);
                }
            }
            hi = lo;
        }
        Ok(AngularMesh { points, n_panels: panels, grading })
    }

    /// Default panel counts: non-cutoff kernels need depth for the slow
    /// grazing decay; bounded kernels die out quadratically.
    pub fn for_kernel(cs: &CrossSection) -> Result<AngularMesh> {
        let panels = if cs.singularity_exponent().is_some() { 64 } else { 28 };
        Self::build(cs, panels)
    }

    /// Integrate `weights * f(point)` with per-panel subtotals, geometric
    /// remainder extrapolation, and a Gauss/Kronrod error estimate.
    fn integrate<F: Fn(&MeshPoint) -> f64>(&self, f: F) -> (f64, f64) {
        let mut total = 0.0f64;
        let mut total_gauss = 0.0f64;
        let mut panel_sums = vec![0.0f64; self.n_panels];
        for pt in &self.points {
            let v = f(pt);
            total += pt.weight * v;
            total_gauss += pt.weight_gauss * v;
            panel_sums[pt.panel as usize] += pt.weight * v;
        }
        let mut err = (total - total_gauss).abs();

        // Remainder below the last panel edge from the tail ratio.
        let k = self.n_panels;
        let (c2, c1) = (panel_sums[k - 1], panel_sums[k - 2]);
        if c1 != 0.0 && c2 != 0.0 {
            let rho = c2 / c1;
            if rho.abs() < 0.995 {
                let rem = c2 * rho / (1.0 - rho);
                total += rem;
                let c0 = panel_sums[k - 3];
                let drift = if c0 != 0.0 { (c1 / c0 - rho).abs() } else { 0.0 };
                err += rem.abs() * (drift / (1.0 - rho.abs())).min(1.0) + 1e-3 * rem.abs();
            } else {
                err += c2.abs() * 10.0;
            }
        }
        (total, err)
    }
}

fn push_cell(points: &mut Vec<MeshPoint>, cs: &CrossSection, a: f64, b: f64, panel: u32) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    for j in 0..15 {
        let (x, wk, wg) = if j == 14 {
            (0.0, WGK[7], WG[3])
        } else {
            let i = j / 2;
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            let gauss = if i % 2 == 1 { WG[i / 2] } else { 0.0 };
            (sign * XGK[i], WGK[i], gauss)
        };
        let theta = center + half * x;
        let bw = cs.eval(theta).unwrap_or(0.0) * math::sin(theta) * 2.0 * math::PI;
        let half_t = 0.5 * theta;
        let qs = math::sin(0.5 * half_t);
        points.push(MeshPoint {
            weight: bw * wk * half,
            weight_gauss: bw * wg * half,
            ln_cos: math::ln_1p(-2.0 * qs * qs),
            ln_sin: math::ln(math::sin(half_t)),
            panel,
        });
    }
}

/// Gain operator `G(phi)` nodewise on a prebuilt mesh.
pub fn gain_g_on(phi: &RadialCharFn, mesh: &AngularMesh) -> CollisionEvaluation {
    let log_nodes = phi.grid().log_nodes();
    let mut out = Vec::with_capacity(log_nodes.len());
    let mut errs = Vec::with_capacity(log_nodes.len());
    for &x in log_nodes {
        let (v, e) =
            mesh.integrate(|pt| phi.eval_log(x + pt.ln_cos) * phi.eval_log(x + pt.ln_sin));
        out.push(v);
        errs.push(e);
    }
    CollisionEvaluation { output_values: out, quad_error_estimate: errs }
}

/// Gain operator `G(phi)` nodewise. Requires a cutoff kernel.
pub fn gain_g(phi: &RadialCharFn, cs: &CrossSection) -> Result<CollisionEvaluation> {
    if !cs.is_cutoff() {
        return Err(Error::NonCutoffKernel);
    }
    let mesh = AngularMesh::for_kernel(cs)?;
    Ok(gain_g_on(phi, &mesh))
}

/// The collision bracket `phi(r c) phi(r s) - phi(r)` at `x = ln r`, split
/// as `phi(rc)[phi(rs) - 1] + [phi(rc) - phi(r)]` so both pieces carry the
/// grazing-angle smallness explicitly.
#[inline]
fn bracket_log(phi: &RadialCharFn, x: f64, pt: &MeshPoint) -> f64 {
    let phi_rc = phi.eval_log(x + pt.ln_cos);
    -phi_rc * phi.one_minus_log(x + pt.ln_sin) + phi.shifted_difference_log(x, pt.ln_cos)
}

/// Full operator `B(phi)` nodewise on a prebuilt mesh.
pub fn full_b_on(phi: &RadialCharFn, mesh: &AngularMesh) -> CollisionEvaluation {
    let log_nodes = phi.grid().log_nodes();
    let mut out = Vec::with_capacity(log_nodes.len());
    let mut errs = Vec::with_capacity(log_nodes.len());
    for &x in log_nodes {
        let (v, e) = mesh.integrate(|pt| bracket_log(phi, x, pt));
        out.push(v);
        errs.push(e);
    }
    CollisionEvaluation { output_values: out, quad_error_estimate: errs }
}

/// Full operator `B(phi)` nodewise, in cancellation form. Works for both
/// cutoff and non-cutoff kernels.
pub fn full_b(phi: &RadialCharFn, cs: &CrossSection) -> Result<CollisionEvaluation> {
    // The bracket must vanish fast enough at grazing angles: the state's
    // leading origin order has to clear the kernel's weak-integrability
    // requirement.
    if let Some(s) = cs.singularity_exponent() {
        let lead = phi.origin().leading().map(|(_, a)| a).unwrap_or(2.0);
        if lead + 1e-12 < cs.alpha0() || lead <= 2.0 * s {
            return Err(Error::ModelMissing(
                "full_b: origin order below the kernel's weak-integrability order",
            ));
        }
    }
    let mesh = AngularMesh::for_kernel(cs)?;
    Ok(full_b_on(phi, &mesh))
}

/// Wrap a gain evaluation as a characteristic function: `G(phi)/gamma_2`
/// is again a radial characteristic function, and the origin/tail models
/// transform explicitly under the gain.
pub fn gain_as_charfn(
    phi: &RadialCharFn,
    cs: &CrossSection,
    gamma2: f64,
    evaluation: &CollisionEvaluation,
) -> Result<RadialCharFn> {
    if gamma2 <= 0.0 {
        return Err(Error::Domain("gain_as_charfn: gamma2 must be positive"));
    }
    let values: Vec<f64> =
        evaluation.output_values.iter().map(|&v| (v / gamma2).clamp(-1.0, 1.0)).collect();

    // Origin: 1 - G/gamma_2 ~ sum (gamma_{a_j}/gamma_2) c_j r^{a_j}.
    let mut origin_terms = Vec::new();
    for &(c, a) in phi.origin().terms() {
        let ga = kernel::kernel_moments(cs, a)?.gamma.value().ok_or(Error::NonCutoffKernel)?;
        origin_terms.push((c * ga / gamma2, a));
    }
    // Tail: the slowest-decaying route through the gain passes through the
    // cos(theta/2) factor, worth at most a 2^{-a/2} dilation of each term.
    let tail_terms: Vec<(f64, f64)> =
        phi.tail().terms().iter().map(|&(c, a)| (c * math::powf(2.0, -0.5 * a), a)).collect();
    let tail =
        if tail_terms.is_empty() { TailModel::Constant } else { TailModel::decay(tail_terms)? };
    RadialCharFn::from_values(phi.grid().clone(), values, OriginModel::new(origin_terms)?, tail)
}

/// Report of a ratio-against-bound check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioReport {
    pub numerator: f64,
    pub denominator: f64,
    /// `numerator / denominator`, with `0/0` defined as 0.
    pub ratio: f64,
    pub bound: f64,
    pub pass: bool,
}

/// Gain-operator Lipschitz check: `||G(phi) - G(psi)||_{M^alpha}` against
/// `gamma_alpha ||phi - psi||_{M^alpha}`.
pub fn lipschitz_check_g(
    phi: &RadialCharFn,
    psi: &RadialCharFn,
    cs: &CrossSection,
    alpha: f64,
    tol: f64,
) -> Result<RatioReport> {
    let gamma2 = kernel::gamma2(cs)?;
    let gamma_alpha =
        kernel::kernel_moments(cs, alpha)?.gamma.value().ok_or(Error::NonCutoffKernel)?;
    let denominator = charfn::norm_malpha(phi, psi, alpha)?;
    if !denominator.is_finite() {
        return Err(Error::Domain("lipschitz_check_g: arguments not at finite M distance"));
    }
    let g_phi = gain_as_charfn(phi, cs, gamma2, &gain_g(phi, cs)?)?;
    let g_psi = gain_as_charfn(psi, cs, gamma2, &gain_g(psi, cs)?)?;
    let numerator = gamma2 * charfn::norm_malpha(&g_phi, &g_psi, alpha)?;
    let ratio = if numerator == 0.0 { 0.0 } else { numerator / denominator };
    let bound = gamma_alpha * (1.0 + tol);
    Ok(RatioReport { numerator, denominator, ratio, bound, pass: ratio <= bound })
}

/// Bound check for the full operator: `int |B(phi)| / |xi|^{3+alpha} dxi`
/// against `mu_alpha ||phi - 1||_{M^alpha}`. The ratio is the empirical
/// handle on the otherwise unspecified constant of the a priori estimate.
pub fn bound_check_b(phi: &RadialCharFn, cs: &CrossSection, alpha: f64) -> Result<RatioReport> {
    let mu = kernel::kernel_moments(cs, alpha)?
        .mu
        .value()
        .ok_or(Error::Domain("bound_check_b: mu_alpha diverges"))?;
    let one = RadialCharFn::one(phi.grid().clone());
    let m_norm = charfn::norm_malpha(phi, &one, alpha)?;
    if !m_norm.is_finite() {
        return Err(Error::Domain("bound_check_b: phi is not in M^alpha"));
    }
    let b_eval = full_b(phi, cs)?;
    let numerator = weighted_abs_norm(phi, cs, &b_eval, alpha)?;
    let denominator = mu * m_norm;
    let ratio = if numerator == 0.0 || denominator == 0.0 { 0.0 } else { numerator / denominator };
    Ok(RatioReport { numerator, denominator, ratio, bound: f64::NAN, pass: numerator.is_finite() })
}

/// `4 pi int |B(phi)(r)| r^{-1-alpha} dr` from a nodewise evaluation:
/// linear interpolation of B between nodes, the lambda-scaled origin model
/// below `r_min`, and the exact power remainder above `r_max` (where the
/// operator values have already collapsed).
fn weighted_abs_norm(
    phi: &RadialCharFn,
    cs: &CrossSection,
    eval: &CollisionEvaluation,
    alpha: f64,
) -> Result<f64> {
    let grid = phi.grid();
    let nodes = grid.nodes();
    let vals = &eval.output_values;

    // Origin: |B| ~ sum lambda_{a_j} c_j r^{a_j} to leading order.
    let mut origin = 0.0f64;
    for &(c, a) in phi.origin().terms() {
        if a <= alpha {
            return Err(Error::Domain("weighted_abs_norm: non-integrable origin order"));
        }
        let lam = kernel::kernel_moments(cs, a)?
            .lambda
            .value()
            .ok_or(Error::Domain("weighted_abs_norm: lambda diverges"))?;
        origin += lam * c * math::powf(grid.r_min(), a - alpha) / (a - alpha);
    }

    let mut interior = 0.0f64;
    for i in 0..nodes.len() - 1 {
        let (r0, r1) = (nodes[i], nodes[i + 1]);
        let (b0, b1) = (vals[i], vals[i + 1]);
        let f = |r: f64| {
            let w = (r - r0) / (r1 - r0);
            (b0 + w * (b1 - b0)).abs() * math::powf(r, -1.0 - alpha)
        };
        let (v, _) = quad::gk15(&f, r0, r1);
        interior += v;
    }

    let tail = vals.last().unwrap().abs() * math::powf(grid.r_max(), -alpha) / alpha;
    Ok(4.0 * math::PI * (origin + interior + tail))
}

/// Empirical constant for the a priori bound: the max of `bound_check_b`
/// ratios over a family of states.
pub fn estimate_c0(family: &[RadialCharFn], cs: &CrossSection, alpha: f64) -> Result<f64> {
    let mut c0 = 0.0f64;
    for phi in family {
        let rep = bound_check_b(phi, cs, alpha)?;
        if rep.denominator > 0.0 {
            c0 = c0.max(rep.ratio);
        }
    }
    if c0 == 0.0 {
        return Err(Error::Domain("estimate_c0: family gave no usable ratios"));
    }
    Ok(c0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charfn::{ClosedForm, RadialGrid};
    use crate::quad::{GradedOpts, GradedOutcome};

    fn b1() -> CrossSection {
        CrossSection::constant(1.0, 1.0).unwrap()
    }

    fn split_angle(theta: f64) -> (f64, f64) {
        let half = 0.5 * theta;
        (math::cos(half), math::sin(half))
    }

    #[test]
    fn energy_identity_of_argument_mapping() {
        // (r c)^2 + (r s)^2 = r^2 at quadrature abscissae.
        for k in 0..200 {
            let theta = math::FRAC_PI_2 * (k as f64 + 0.5) / 200.0;
            let (c, s) = split_angle(theta);
            for &r in &[1e-4, 0.3, 7.0, 100.0] {
                let lhs = (r * c) * (r * c) + (r * s) * (r * s);
                assert!((lhs - r * r).abs() <= 4.0 * f64::EPSILON * r * r);
            }
        }
    }

    #[test]
    fn gain_of_one_is_gamma2() {
        let grid = RadialGrid::default_grid();
        let one = RadialCharFn::one(grid);
        let g2 = kernel::gamma2(&b1()).unwrap();
        let out = gain_g(&one, &b1()).unwrap();
        for &v in &out.output_values {
            assert!((v - g2).abs() < 1e-9, "got {v}, gamma2 = {g2}");
        }
    }

    #[test]
    fn gain_fixes_gaussian_direction() {
        // Energy identity makes phi(rc) phi(rs) = phi(r) for the Gaussian,
        // so G(phi) = gamma_2 phi nodewise.
        let grid = RadialGrid::default_grid();
        let g =
            RadialCharFn::from_family(ClosedForm::Stable { p: 2.0, t: 1.0 }, grid.clone()).unwrap();
        let g2 = kernel::gamma2(&b1()).unwrap();
        let out = gain_g(&g, &b1()).unwrap();
        let mut worst = 0.0f64;
        for (i, &v) in out.output_values.iter().enumerate() {
            worst = worst.max((v - g2 * g.values()[i]).abs());
        }
        assert!(worst < 1e-8, "max |G - gamma2 phi| = {worst}");
    }

    #[test]
    fn gain_oracle_value_stable_one() {
        // G(e^{-r})(1) = 2 pi int sin(t) e^{-(cos(t/2) + sin(t/2))} dt by an
        // independent high-resolution quadrature of the closed form.
        let grid = RadialGrid::default_grid();
        let phi =
            RadialCharFn::from_family(ClosedForm::Stable { p: 1.0, t: 1.0 }, grid.clone()).unwrap();
        let oracle = quad::adaptive(
            &|t: f64| {
                let (c, s) = split_angle(t);
                math::sin(t) * math::exp(-(c + s))
            },
            1e-14,
            math::FRAC_PI_2,
            1e-13,
            1e-13,
        )
        .unwrap()
        .value
            * 2.0
            * math::PI;
        // The solver's own path: interpolated phi, graded quadrature, at the
        // nodes straddling r = 1, combined linearly in log r.
        let out = gain_g(&phi, &b1()).unwrap();
        let nodes = grid.nodes();
        let i = nodes.iter().position(|&r| r > 1.0).unwrap();
        let x0 = math::ln(nodes[i - 1]);
        let x1 = math::ln(nodes[i]);
        let w = (0.0 - x0) / (x1 - x0);
        let at_one = out.output_values[i - 1] * (1.0 - w) + out.output_values[i] * w;
        assert!((at_one - oracle).abs() < 1e-4, "got {at_one} want {oracle}");
    }

    #[test]
    fn full_b_of_one_vanishes() {
        let grid = RadialGrid::default_grid();
        let one = RadialCharFn::one(grid);
        let out = full_b(&one, &b1()).unwrap();
        for &v in &out.output_values {
            assert!(v.abs() < 1e-10);
        }
    }

    #[test]
    fn full_b_annihilates_gaussian_cutoff_and_noncutoff() {
        let grid = RadialGrid::default_grid();
        let g =
            RadialCharFn::from_family(ClosedForm::Stable { p: 2.0, t: 1.0 }, grid.clone()).unwrap();
        for cs in [b1(), CrossSection::power_law(1.0, 0.25, 0.75).unwrap()] {
            let out = full_b(&g, &cs).unwrap();
            let worst = out.output_values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            assert!(worst < 2e-8, "max |B(gaussian)| = {worst} for {cs:?}");
        }
    }

    #[test]
    fn full_b_negative_for_subquadratic_state() {
        // Loss dominates near r = 1 for stable(1,1) under the model kernel;
        // checked against an independent high-resolution quadrature of the
        // same bracket built from the closed form.
        let grid = RadialGrid::default_grid();
        let phi =
            RadialCharFn::from_family(ClosedForm::Stable { p: 1.0, t: 1.0 }, grid.clone()).unwrap();
        let cs = CrossSection::power_law(1.0, 0.25, 0.9).unwrap();
        let out = full_b(&phi, &cs).unwrap();
        let nodes = grid.nodes();
        let i = nodes.iter().position(|&r| r > 1.0).unwrap() - 1;
        let r = nodes[i];
        let f = |t: f64| {
            let (c, s) = split_angle(t);
            let br = math::exp(-r * c) * math::exp(-r * s) - math::exp(-r);
            math::powf(t, -2.5) * math::sin(t) * br
        };
        let opts =
            GradedOpts { abs_tol: 1e-13, rel_tol: 1e-12, min_panels: 80, ..Default::default() };
        let oracle = match quad::graded_to_zero(&f, math::FRAC_PI_2, &opts).unwrap() {
            GradedOutcome::Converged(q) => 2.0 * math::PI * q.value,
            GradedOutcome::Divergent => panic!("oracle bracket integrable"),
        };
        let got = out.output_values[i];
        assert!(got < 0.0, "loss should dominate, got {got}");
        assert!((got - oracle).abs() < 1e-6 * oracle.abs().max(1.0), "got {got} want {oracle}");
    }

    #[test]
    fn b_equals_gain_minus_loss_for_cutoff() {
        let grid = RadialGrid::default_grid();
        let phi = RadialCharFn::from_family(ClosedForm::Stable { p: 1.3, t: 0.8 }, grid).unwrap();
        let cs = b1();
        let g2 = kernel::gamma2(&cs).unwrap();
        let b = full_b(&phi, &cs).unwrap();
        let g = gain_g(&phi, &cs).unwrap();
        let mut worst = 0.0f64;
        for i in 0..phi.values().len() {
            let d = b.output_values[i] - (g.output_values[i] - g2 * phi.values()[i]);
            worst = worst.max(d.abs());
        }
        assert!(worst < 1e-8, "max |B - (G - gamma2 phi)| = {worst}");
    }

    #[test]
    fn truncated_b_converges_to_noncutoff_b() {
        let grid = RadialGrid::default_grid();
        let phi = RadialCharFn::from_family(ClosedForm::Stable { p: 0.95, t: 1.0 }, grid.clone())
            .unwrap();
        let cs = CrossSection::power_law(1.0, 0.25, 0.9).unwrap();
        let full = full_b(&phi, &cs).unwrap();
        let mut prev_dev = f64::INFINITY;
        for &n in &[1e2, 1e3, 1e4] {
            let bn = cs.truncate(n).unwrap();
            let truncated = full_b(&phi, &bn).unwrap();
            let dev = truncated
                .output_values
                .iter()
                .zip(&full.output_values)
                .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
            assert!(dev < prev_dev, "deviation must shrink with n: {dev} !< {prev_dev}");
            prev_dev = dev;
        }
        assert!(prev_dev < 2e-2, "n = 1e4 deviation {prev_dev}");
    }

    #[test]
    fn lipschitz_gain_bounded_by_gamma_alpha() {
        let grid = RadialGrid::default_grid();
        let phi =
            RadialCharFn::from_family(ClosedForm::Gaussian { sigma: 1.0 }, grid.clone()).unwrap();
        let one = RadialCharFn::one(grid.clone());
        let rep = lipschitz_check_g(&phi, &one, &b1(), 1.0, 1e-3).unwrap();
        assert!(rep.pass, "ratio {} bound {}", rep.ratio, rep.bound);
        // gamma_1 = 8 pi / 3 for the constant kernel.
        assert!((rep.bound / (1.0 + 1e-3) - 8.0 * math::PI / 3.0).abs() < 1e-9);

        let a =
            RadialCharFn::from_family(ClosedForm::Stable { p: 1.5, t: 1.0 }, grid.clone()).unwrap();
        let b = RadialCharFn::from_family(ClosedForm::Stable { p: 1.5, t: 2.0 }, grid).unwrap();
        let rep = lipschitz_check_g(&a, &b, &b1(), 1.2, 1e-3).unwrap();
        assert!(rep.pass, "ratio {} bound {}", rep.ratio, rep.bound);
    }

    #[test]
    fn ratio_of_identical_arguments_is_zero() {
        let grid = RadialGrid::default_grid();
        let phi = RadialCharFn::from_family(ClosedForm::Gaussian { sigma: 1.0 }, grid).unwrap();
        let rep = lipschitz_check_g(&phi, &phi, &b1(), 1.0, 1e-3).unwrap();
        assert_eq!(rep.ratio, 0.0);
    }

    #[test]
    fn bound_check_examples() {
        let grid = RadialGrid::default_grid();
        let cs = CrossSection::power_law(1.0, 0.25, 0.75).unwrap();
        // Gaussian: numerator vanishes up to quadrature noise.
        let g =
            RadialCharFn::from_family(ClosedForm::Stable { p: 2.0, t: 1.0 }, grid.clone()).unwrap();
        let rep = bound_check_b(&g, &cs, 0.8).unwrap();
        assert!(rep.ratio < 1e-4, "ratio {}", rep.ratio);
        // stable(1,1): finite positive ratio.
        let s = RadialCharFn::from_family(ClosedForm::Stable { p: 1.0, t: 1.0 }, grid).unwrap();
        let rep = bound_check_b(&s, &cs, 0.8).unwrap();
        assert!(rep.ratio > 0.0 && rep.ratio.is_finite(), "ratio {}", rep.ratio);
    }
}
