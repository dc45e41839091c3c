//! Angular cross sections `b(cos theta)` for Maxwellian molecules and the
//! scalar constants attached to them.
//!
//! The canonical non-cutoff model is `b(theta) = K theta^{-2-2s}` on
//! `(0, pi/2]`; bounded kernels come in as constants, tables or user
//! closures, and `truncate` builds `b_n = min(b, n)`. The moments
//!
//! ```text
//! gamma_a  = 2 pi int b sin(t) [cos^a(t/2) + sin^a(t/2)] dt
//! lambda_a = 2 pi int b sin(t) [cos^a(t/2) + sin^a(t/2) - 1] dt
//! mu_a     = 2 pi int b sin(t) sin^a(t/2) dt
//! ```
//!
//! are evaluated by graded quadrature in their cancellation forms, and
//! `C_{p,a} = (4 pi / a) Gamma(1 - a/p)` by the Lanczos gamma.

use alloc::boxed::Box;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::math;
use crate::quad::{self, GradedOpts, GradedOutcome};
use crate::special;
use crate::{Error, Result};

/// A bounded angular profile on `[0, pi/2]`.
#[derive(Clone)]
pub enum AngularProfile {
    Constant(f64),
    /// `(theta, b)` pairs covering `[0, pi/2]`, interpolated linearly.
    Tabulated(Vec<(f64, f64)>),
    Custom(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

impl core::fmt::Debug for AngularProfile {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            AngularProfile::Constant(c) => write!(f, "Constant({c})"),
            AngularProfile::Tabulated(t) => write!(f, "Tabulated({} points)", t.len()),
            AngularProfile::Custom(_) => write!(f, "Custom(..)"),
        }
    }
}

impl AngularProfile {
    fn eval(&self, theta: f64) -> f64 {
        match self {
            AngularProfile::Constant(c) => *c,
            AngularProfile::Tabulated(pairs) => {
                let mut i = 0;
                while i + 1 < pairs.len() && pairs[i + 1].0 < theta {
                    i += 1;
                }
                let (t0, b0) = pairs[i];
                let (t1, b1) = pairs[(i + 1).min(pairs.len() - 1)];
                if t1 <= t0 {
                    b0
                } else {
                    let w = ((theta - t0) / (t1 - t0)).clamp(0.0, 1.0);
                    b0 + w * (b1 - b0)
                }
            }
            AngularProfile::Custom(f) => f(theta),
        }
    }
}

#[derive(Debug, Clone)]
enum SectionKind {
    /// `b(theta) = K theta^{-2-2s}`.
    PowerLaw { strength: f64, exponent: f64 },
    Bounded(AngularProfile),
    Truncated { base: Box<SectionKind>, cap: f64 },
}

/// Maxwellian-molecule angular cross section together with its declared
/// weak-integrability order `alpha0`.
#[derive(Debug, Clone)]
pub struct CrossSection {
    kind: SectionKind,
    alpha0: f64,
}

impl CrossSection {
    /// Non-cutoff model kernel `K theta^{-2-2s}` with `0 < s < 1` and
    /// `alpha0 > 2s`.
    pub fn power_law(strength: f64, s: f64, alpha0: f64) -> Result<Self> {
        if !(strength > 0.0) {
            return Err(Error::Domain("power_law: strength must be positive"));
        }
        if !(s > 0.0 && s < 1.0) {
            return Err(Error::Domain("power_law: s must lie in (0, 1)"));
        }
        check_alpha0(alpha0)?;
        if !(alpha0 > 2.0 * s) {
            return Err(Error::Domain("power_law: weak integrability needs alpha0 > 2s"));
        }
        Ok(CrossSection { kind: SectionKind::PowerLaw { strength, exponent: s }, alpha0 })
    }

    pub fn constant(value: f64, alpha0: f64) -> Result<Self> {
        if !(value >= 0.0) {
            return Err(Error::Domain("constant kernel must be nonnegative"));
        }
        check_alpha0(alpha0)?;
        Ok(CrossSection { kind: SectionKind::Bounded(AngularProfile::Constant(value)), alpha0 })
    }

    pub fn tabulated(pairs: Vec<(f64, f64)>, alpha0: f64) -> Result<Self> {
        check_alpha0(alpha0)?;
        if pairs.len() < 2 {
            return Err(Error::Domain("tabulated kernel needs at least two points"));
        }
        for w in pairs.windows(2) {
            if w[1].0 <= w[0].0 {
                return Err(Error::Domain("tabulated kernel: theta must increase"));
            }
        }
        if pairs.iter().any(|&(_, b)| !(b >= 0.0) || !b.is_finite()) {
            return Err(Error::Domain("tabulated kernel: values must be finite and nonnegative"));
        }
        if pairs[0].0 > 1e-9 || pairs[pairs.len() - 1].0 < math::FRAC_PI_2 - 1e-9 {
            return Err(Error::Domain("tabulated kernel must cover [0, pi/2]"));
        }
        Ok(CrossSection { kind: SectionKind::Bounded(AngularProfile::Tabulated(pairs)), alpha0 })
    }

    pub fn custom<F: Fn(f64) -> f64 + Send + Sync + 'static>(f: F, alpha0: f64) -> Result<Self> {
        check_alpha0(alpha0)?;
        Ok(CrossSection { kind: SectionKind::Bounded(AngularProfile::Custom(Arc::new(f))), alpha0 })
    }

    /// `b_n = min(b, n)`.
    pub fn truncate(&self, cap: f64) -> Result<Self> {
        if !(cap > 0.0) {
            return Err(Error::Domain("truncate: cap must be positive"));
        }
        Ok(CrossSection {
            kind: SectionKind::Truncated { base: Box::new(self.kind.clone()), cap },
            alpha0: self.alpha0,
        })
    }

    pub fn alpha0(&self) -> f64 {
        self.alpha0
    }

    /// Whether `b sin(theta)` is integrable (Grad's cutoff).
    pub fn is_cutoff(&self) -> bool {
        !matches!(self.kind, SectionKind::PowerLaw { .. })
    }

    /// Singularity exponent `s` if the kernel is the non-cutoff model.
    pub fn singularity_exponent(&self) -> Option<f64> {
        match &self.kind {
            SectionKind::PowerLaw { exponent, .. } => Some(*exponent),
            _ => None,
        }
    }

    /// Evaluate `b` at a deviation angle in `[0, pi/2]`.
    pub fn eval(&self, theta: f64) -> Result<f64> {
        if !(0.0..=math::FRAC_PI_2 + 1e-15).contains(&theta) {
            return Err(Error::Domain("eval_b: theta outside [0, pi/2]"));
        }
        if theta == 0.0 {
            return match &self.kind {
                SectionKind::PowerLaw { .. } => {
                    Err(Error::Singularity("eval_b: power-law kernel at theta = 0"))
                }
                SectionKind::Bounded(p) => Ok(p.eval(0.0)),
                SectionKind::Truncated { base, cap } => Ok(match base.as_ref() {
                    SectionKind::PowerLaw { .. } => *cap,
                    other => other.eval_unchecked(0.0).min(*cap),
                }),
            };
        }
        Ok(self.kind.eval_unchecked(theta))
    }

    fn eval_inner(&self, theta: f64) -> f64 {
        self.kind.eval_unchecked(theta)
    }

    /// For truncated power laws, the angle where the cap stops binding.
    pub fn crossover_angle(&self) -> Option<f64> {
        match &self.kind {
            SectionKind::Truncated { base, cap } => match base.as_ref() {
                SectionKind::PowerLaw { strength, exponent } => {
                    let t = math::powf(strength / cap, 1.0 / (2.0 + 2.0 * exponent));
                    Some(t.clamp(0.0, math::FRAC_PI_2))
                }
                _ => None,
            },
            _ => None,
        }
    }

    /// Angles where the profile is not smooth (table breakpoints).
    pub fn profile_breakpoints(&self) -> Vec<f64> {
        fn collect(kind: &SectionKind, out: &mut Vec<f64>) {
            match kind {
                SectionKind::Bounded(AngularProfile::Tabulated(pairs)) => {
                    out.extend(pairs.iter().map(|&(t, _)| t));
                }
                SectionKind::Truncated { base, .. } => collect(base, out),
                _ => {}
            }
        }
        let mut out = Vec::new();
        collect(&self.kind, &mut out);
        out.retain(|&t| t > 1e-14 && t < math::FRAC_PI_2 - 1e-14);
        out
    }
}

impl SectionKind {
    fn eval_unchecked(&self, theta: f64) -> f64 {
        match self {
            SectionKind::PowerLaw { strength, exponent } => {
                strength * math::powf(theta, -2.0 - 2.0 * exponent)
            }
            SectionKind::Bounded(p) => p.eval(theta),
            SectionKind::Truncated { base, cap } => base.eval_unchecked(theta).min(*cap),
        }
    }
}

fn check_alpha0(alpha0: f64) -> Result<()> {
    if !(alpha0 > 0.0 && alpha0 <= 2.0) {
        return Err(Error::Domain("alpha0 must lie in (0, 2]"));
    }
    Ok(())
}

/// A moment integral that may provably diverge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Moment {
    Finite(f64),
    Divergent,
}

impl Moment {
    pub fn is_finite(&self) -> bool {
        matches!(self, Moment::Finite(_))
    }

    pub fn value(&self) -> Option<f64> {
        match self {
            Moment::Finite(v) => Some(*v),
            Moment::Divergent => None,
        }
    }

    /// Finite value, or `+inf` for reporting purposes.
    pub fn to_f64(&self) -> f64 {
        match self {
            Moment::Finite(v) => *v,
            Moment::Divergent => f64::INFINITY,
        }
    }
}

/// The triple `(gamma_alpha, lambda_alpha, mu_alpha)` for a cross section.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelMoments {
    pub alpha: f64,
    pub gamma: Moment,
    pub lambda: Moment,
    pub mu: Moment,
}

/// `cos^a(theta/2) + sin^a(theta/2) - 1`, evaluated without cancellation.
/// Vanishes identically at `a = 2`.
fn lambda_bracket(a: f64, theta: f64) -> f64 {
    if a == 2.0 {
        return 0.0;
    }
    let half = 0.5 * theta;
    let sh = math::sin(half);
    // cos^a(x) - 1 = expm1(a log(cos x)) with log(cos x) = log1p(-2 sin^2(x/2)).
    let log_cos = math::ln_1p(-2.0 * math::sin(0.5 * half) * math::sin(0.5 * half));
    math::expm1(a * log_cos) + math::powf(sh, a)
}

fn sin_pow(a: f64, theta: f64) -> f64 {
    math::powf(math::sin(0.5 * theta), a)
}

fn cos_pow(a: f64, theta: f64) -> f64 {
    math::powf(math::cos(0.5 * theta), a)
}

/// Integrate `2 pi b(theta) sin(theta) w(theta)` over `(0, pi/2]` with the
/// graded scheme, splitting at a truncation crossover when one is known.
fn angular_integral<W: Fn(f64) -> f64>(
    cs: &CrossSection,
    w: W,
    opts: &GradedOpts,
) -> Result<GradedOutcome> {
    let f = |theta: f64| cs.eval_inner(theta) * math::sin(theta) * w(theta);
    let split = cs.crossover_angle().filter(|t| *t > 1e-12 && *t < math::FRAC_PI_2 - 1e-12);
    let out = match split {
        Some(t) => {
            let upper = quad::adaptive(&f, t, math::FRAC_PI_2, opts.abs_tol, opts.rel_tol)?;
            match quad::graded_to_zero(&f, t, opts)? {
                GradedOutcome::Divergent => GradedOutcome::Divergent,
                GradedOutcome::Converged(lower) => {
                    GradedOutcome::Converged(crate::quad::QuadResult {
                        value: lower.value + upper.value,
                        error: lower.error + upper.error,
                    })
                }
            }
        }
        None => quad::graded_to_zero(&f, math::FRAC_PI_2, opts)?,
    };
    Ok(match out {
        GradedOutcome::Converged(r) => {
            GradedOutcome::Converged(crate::quad::QuadResult {
                value: 2.0 * math::PI * r.value,
                error: 2.0 * math::PI * r.error,
            })
        }
        GradedOutcome::Divergent => GradedOutcome::Divergent,
    })
}

fn moment_opts() -> GradedOpts {
    GradedOpts { abs_tol: 1e-12, rel_tol: 1e-12, ..GradedOpts::default() }
}

/// Compute `(gamma_alpha, lambda_alpha, mu_alpha)` for `alpha` in `(0, 2]`.
///
/// For the non-cutoff model kernel, `gamma_alpha` is always divergent and
/// `lambda_alpha`, `mu_alpha` diverge exactly when `alpha <= 2s`; those
/// cases are tagged analytically rather than integrated.
pub fn kernel_moments(cs: &CrossSection, alpha: f64) -> Result<KernelMoments> {
    if !(alpha > 0.0 && alpha <= 2.0) {
        return Err(Error::Domain("kernel_moments: alpha must lie in (0, 2]"));
    }
    let opts = moment_opts();

    if let Some(s) = cs.singularity_exponent() {
        if alpha <= 2.0 * s {
            return Ok(KernelMoments {
                alpha,
                gamma: Moment::Divergent,
                lambda: Moment::Divergent,
                mu: Moment::Divergent,
            });
        }
        let lambda = expect_converged(angular_integral(cs, |t| lambda_bracket(alpha, t), &opts)?)?;
        let mu = expect_converged(angular_integral(cs, |t| sin_pow(alpha, t), &opts)?)?;
        return Ok(KernelMoments {
            alpha,
            gamma: Moment::Divergent,
            lambda: Moment::Finite(lambda),
            mu: Moment::Finite(mu),
        });
    }

    let lambda = match angular_integral(cs, |t| lambda_bracket(alpha, t), &opts)? {
        GradedOutcome::Converged(r) => Moment::Finite(r.value),
        GradedOutcome::Divergent => Moment::Divergent,
    };
    let mu = match angular_integral(cs, |t| sin_pow(alpha, t), &opts)? {
        GradedOutcome::Converged(r) => Moment::Finite(r.value),
        GradedOutcome::Divergent => Moment::Divergent,
    };
    let gamma = match angular_integral(cs, |t| cos_pow(alpha, t) + sin_pow(alpha, t), &opts)? {
        GradedOutcome::Converged(r) => Moment::Finite(r.value),
        GradedOutcome::Divergent => Moment::Divergent,
    };
    Ok(KernelMoments { alpha, gamma, lambda, mu })
}

fn expect_converged(out: GradedOutcome) -> Result<f64> {
    match out {
        GradedOutcome::Converged(r) => Ok(r.value),
        GradedOutcome::Divergent => Err(Error::Convergence(
            "moment integral diverged where the analytic test predicted convergence",
        )),
    }
}

/// `gamma_2 = 2 pi |b|_{L^1}`; errors with `NonCutoffKernel` when infinite.
pub fn gamma2(cs: &CrossSection) -> Result<f64> {
    if !cs.is_cutoff() {
        return Err(Error::NonCutoffKernel);
    }
    match kernel_moments(cs, 2.0)?.gamma {
        Moment::Finite(v) => Ok(v),
        Moment::Divergent => Err(Error::NonCutoffKernel),
    }
}

/// `C_{p,alpha} = (4 pi / alpha) Gamma(1 - alpha/p)`, finite iff
/// `0 < alpha < p <= 2`.
pub fn c_const(p: f64, alpha: f64) -> Result<f64> {
    if !(p > 0.0 && p <= 2.0) {
        return Err(Error::Domain("c_const: p must lie in (0, 2]"));
    }
    if !(alpha > 0.0 && alpha < p) {
        return Err(Error::Domain("c_const: need 0 < alpha < p"));
    }
    Ok(4.0 * math::PI / alpha * special::gamma(1.0 - alpha / p))
}

/// The scaled identity `int (1 - e^{-a |xi|^p}) / |xi|^{3+alpha} dxi
/// = C_{p,alpha} a^{alpha/p}` for `a > 0`.
pub fn c_scaled(p: f64, alpha: f64, a: f64) -> Result<f64> {
    if !(a > 0.0) {
        return Err(Error::Domain("c_scaled: scale must be positive"));
    }
    Ok(c_const(p, alpha)? * math::powf(a, alpha / p))
}

#[cfg(test)]
mod tests {
    use super::*;

    const TAU: f64 = 2.0 * math::PI;

    fn b1() -> CrossSection {
        CrossSection::constant(1.0, 1.0).unwrap()
    }

    #[test]
    fn eval_power_law_at_right_endpoint() {
        // Direct evaluation of the adopted model formula, cross-checked by an
        // independent exp/log power computation.
        let cs = CrossSection::power_law(1.0, 0.25, 0.75).unwrap();
        let v = cs.eval(math::FRAC_PI_2).unwrap();
        let indep = math::exp(-2.5 * math::ln(math::FRAC_PI_2));
        assert!((v - indep).abs() < 1e-14 * indep);
        assert!((v - 0.323_394).abs() < 1e-5, "got {v}");
    }

    #[test]
    fn eval_domain_and_singularity() {
        let cs = CrossSection::power_law(1.0, 0.25, 0.75).unwrap();
        assert!(matches!(cs.eval(-0.1), Err(Error::Domain(_))));
        assert!(matches!(cs.eval(2.0), Err(Error::Domain(_))));
        assert!(matches!(cs.eval(0.0), Err(Error::Singularity(_))));
        assert_eq!(b1().eval(0.3).unwrap(), 1.0);
    }

    #[test]
    fn truncated_cap_dominates_near_zero() {
        let cs = CrossSection::power_law(1.0, 0.25, 0.75).unwrap().truncate(10.0).unwrap();
        assert_eq!(cs.eval(0.0).unwrap(), 10.0);
        assert_eq!(cs.eval(1e-6).unwrap(), 10.0);
        // Below the cap the base value wins: b(1) = 1 < 5.
        let cs5 = CrossSection::power_law(1.0, 0.25, 0.75).unwrap().truncate(5.0).unwrap();
        assert!((cs5.eval(1.0).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn truncation_is_idempotent_pointwise() {
        let base = CrossSection::power_law(1.0, 0.25, 0.75).unwrap();
        let a = base.truncate(10.0).unwrap().truncate(5.0).unwrap();
        let b = base.truncate(5.0).unwrap().truncate(10.0).unwrap();
        for &t in &[1e-4, 1e-2, 0.3, 1.0, math::FRAC_PI_2] {
            assert_eq!(a.eval(t).unwrap(), b.eval(t).unwrap());
        }
    }

    #[test]
    fn constant_kernel_closed_form_moments() {
        // gamma_2 = 2 pi, lambda_2 = 0, mu_2 = pi/2 (antiderivative of
        // sin(t) sin^2(t/2) gives 1/4 on [0, pi/2]).
        let m = kernel_moments(&b1(), 2.0).unwrap();
        assert!((m.gamma.value().unwrap() - TAU).abs() < 1e-10);
        assert!(m.lambda.value().unwrap().abs() < 1e-12);
        assert!((m.mu.value().unwrap() - math::FRAC_PI_2).abs() < 1e-10);
    }

    #[test]
    fn constant_kernel_alpha_one_moments() {
        // Closed forms: int sin(t) cos(t/2) dt = (4/3)(1 - 2^{-3/2}),
        // int sin(t) sin(t/2) dt = (4/3) 2^{-3/2}, so lambda_1 = 2 pi / 3.
        let m = kernel_moments(&b1(), 1.0).unwrap();
        let lambda1 = TAU / 3.0;
        let mu1 = TAU * (4.0 / 3.0) * math::powf(2.0, -1.5);
        let gamma1 = 8.0 * math::PI / 3.0;
        assert!((m.lambda.value().unwrap() - lambda1).abs() < 1e-10);
        assert!((m.mu.value().unwrap() - mu1).abs() < 1e-10);
        assert!((m.gamma.value().unwrap() - gamma1).abs() < 1e-10);
    }

    #[test]
    fn gamma_identity_and_sandwich() {
        // gamma_alpha = lambda_alpha + gamma_2 and gamma_2 <= gamma_alpha <= 2 gamma_2.
        let g2 = gamma2(&b1()).unwrap();
        for &a in &[0.25, 0.5, 0.9, 1.3, 1.7, 2.0] {
            let m = kernel_moments(&b1(), a).unwrap();
            let g = m.gamma.value().unwrap();
            assert!((g - (m.lambda.value().unwrap() + g2)).abs() < 1e-9);
            assert!(g >= g2 - 1e-9 && g <= 2.0 * g2 + 1e-9);
        }
    }

    #[test]
    fn power_law_moments_tagging() {
        let cs = CrossSection::power_law(1.0, 0.25, 0.75).unwrap();
        let m = kernel_moments(&cs, 0.75).unwrap();
        assert_eq!(m.gamma, Moment::Divergent);
        let mu = m.mu.value().unwrap();
        assert!(mu > 0.0 && mu.is_finite());
        // alpha <= 2s diverges.
        let div = kernel_moments(&cs, 0.5).unwrap();
        assert_eq!(div.mu, Moment::Divergent);
        assert_eq!(div.lambda, Moment::Divergent);
        assert!(gamma2(&cs).is_err());
    }

    #[test]
    fn power_law_mu_stable_under_refinement() {
        // Stability under mesh refinement is the oracle for the singular
        // quadrature: recompute with a much finer graded mesh.
        let cs = CrossSection::power_law(1.0, 0.25, 0.75).unwrap();
        let coarse = kernel_moments(&cs, 0.75).unwrap().mu.value().unwrap();
        let opts = GradedOpts { min_panels: 120, abs_tol: 1e-13, rel_tol: 1e-13, ..GradedOpts::default() };
        let fine = match angular_integral(&cs, |t| sin_pow(0.75, t), &opts).unwrap() {
            GradedOutcome::Converged(r) => r.value,
            GradedOutcome::Divergent => panic!("mu_{{0.75}} must converge"),
        };
        assert!((coarse - fine).abs() < 1e-9 * fine.abs(), "coarse {coarse} fine {fine}");
    }

    #[test]
    fn truncated_moments_monotone_in_cap() {
        let base = CrossSection::power_law(1.0, 0.25, 0.75).unwrap();
        let alpha = 0.9;
        let full = kernel_moments(&base, alpha).unwrap();
        let mut prev_lambda = f64::NEG_INFINITY;
        let mut prev_mu = f64::NEG_INFINITY;
        let mut prev_gamma2 = f64::NEG_INFINITY;
        for &n in &[10.0, 100.0, 1e3, 1e4] {
            let bn = base.truncate(n).unwrap();
            let m = kernel_moments(&bn, alpha).unwrap();
            let l = m.lambda.value().unwrap();
            let mu = m.mu.value().unwrap();
            let g2 = gamma2(&bn).unwrap();
            assert!(l >= prev_lambda - 1e-12 && mu >= prev_mu - 1e-12);
            assert!(g2 >= prev_gamma2 - 1e-12);
            assert!(l <= full.lambda.value().unwrap() + 1e-9);
            assert!(mu <= full.mu.value().unwrap() + 1e-9);
            prev_lambda = l;
            prev_mu = mu;
            prev_gamma2 = g2;
        }
        // And the truncated moments approach the non-cutoff ones.
        let m4 = kernel_moments(&base.truncate(1e4).unwrap(), alpha).unwrap();
        assert!((m4.mu.value().unwrap() - full.mu.value().unwrap()).abs() < 2e-2);
    }

    #[test]
    fn zero_kernel_moments_vanish() {
        let zero = CrossSection::constant(0.0, 1.0).unwrap();
        let m = kernel_moments(&zero, 1.0).unwrap();
        assert_eq!(m.gamma.value().unwrap(), 0.0);
        assert_eq!(gamma2(&zero).unwrap(), 0.0);
    }

    #[test]
    fn c_const_values_and_domain() {
        // C_{2,1} = 4 pi^{3/2}.
        let c21 = c_const(2.0, 1.0).unwrap();
        let exact = 4.0 * math::powf(math::PI, 1.5);
        assert!((c21 - exact).abs() < 1e-10 * exact);
        // Pole of Gamma(1 - alpha/p) as alpha -> p.
        assert!(c_const(1.5, 1.49).unwrap() > 1e2);
        assert!(matches!(c_const(1.5, 1.5), Err(Error::Domain(_))));
        assert!(matches!(c_const(2.0, 0.0), Err(Error::Domain(_))));
        // Scaled identity value for a = 2, p = 2, alpha = 1.
        let scaled = c_scaled(2.0, 1.0, 2.0).unwrap();
        assert!((scaled - exact * math::sqrt(2.0)).abs() < 1e-10 * scaled);
    }

    /// Independent radial quadrature of the defining integral of C_{p,alpha}:
    /// 4 pi int_0^inf (1 - e^{-r^p}) r^{-1-alpha} dr, graded panels near zero
    /// and the exact power tail beyond the point where e^{-r^p} underflows.
    fn c_const_quadrature_oracle(p: f64, alpha: f64) -> f64 {
        let f = |r: f64| -math::expm1(-math::powf(r, p)) * math::powf(r, -1.0 - alpha);
        let opts = GradedOpts { abs_tol: 1e-13, rel_tol: 1e-12, ..GradedOpts::default() };
        let near = match quad::graded_to_zero(&f, 1.0, &opts).unwrap() {
            GradedOutcome::Converged(r) => r.value,
            GradedOutcome::Divergent => panic!("defining integral must converge for alpha < p"),
        };
        let cut = math::powf(745.0, 1.0 / p);
        let mid = quad::adaptive(&f, 1.0, cut, 1e-13, 1e-12).unwrap().value;
        let tail = math::powf(cut, -alpha) / alpha;
        4.0 * math::PI * (near + mid + tail)
    }

    #[test]
    fn c_const_matches_quadrature_oracle() {
        let q = c_const_quadrature_oracle(2.0, 1.0);
        let c = c_const(2.0, 1.0).unwrap();
        assert!((q - c).abs() < 1e-6 * c, "quad {q} formula {c}");

        // A grid of (p, alpha) pairs with alpha <= 0.9 p.
        for &p in &[0.6, 1.0, 1.4, 1.8, 2.0] {
            for frac in [0.2, 0.4, 0.6, 0.8, 0.9] {
                let alpha = frac * p;
                let q = c_const_quadrature_oracle(p, alpha);
                let c = c_const(p, alpha).unwrap();
                assert!((q - c).abs() < 1e-6 * c, "p={p} alpha={alpha}: quad {q} formula {c}");
            }
        }
    }
}
