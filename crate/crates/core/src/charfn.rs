//! Radial characteristic functions on a geometric grid.
//!
//! A state is the sampled values of a real radial characteristic function
//! `phi(|xi|)` together with two analytic closures: an origin model
//! `phi(r) = exp(-(c1 r^{a1} + c2 r^{a2}))` used below `r_min` (so
//! `1 - phi ~ c r^a` to leading order, with `phi(0) = 1` built in), and a
//! tail model (anchored exponential decay or a constant) used above
//! `r_max`. Between nodes the values are interpolated by a
//! monotonicity-limited cubic in `log r`, which cannot overshoot the node
//! values, so `|phi| <= 1` is preserved.
//!
//! On top of the representation this module computes the `K^beta` sup
//! norm, the `M^alpha` integral norm (`4 pi int |phi - psi| r^{-1-alpha} dr`
//! with the origin and tail pieces taken from the models), the
//! `dis_{alpha,beta}` metric, and a Bochner-type positive-definiteness
//! diagnostic.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::linalg;
use crate::math;
use crate::quad;
use crate::rng::SplitMix64;
use crate::{Error, Result};

/// Strictly geometric radial grid `r_min = r_0 < ... < r_{N-1} = r_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialGrid {
    nodes: Vec<f64>,
    log_nodes: Vec<f64>,
    r_min: f64,
    r_max: f64,
    step: f64,
}

impl RadialGrid {
    pub const DEFAULT_N: usize = 512;
    pub const DEFAULT_R_MIN: f64 = 1e-4;
    pub const DEFAULT_R_MAX: f64 = 1e2;

    /// Geometric grid with `n >= 16` nodes; `r_max / r_min` must span at
    /// least four decades so the norm integrals see both origin and tail.
    pub fn geometric(r_min: f64, r_max: f64, n: usize) -> Result<Arc<Self>> {
        if n < 16 {
            return Err(Error::Domain("grid needs at least 16 nodes"));
        }
        if !(r_min > 0.0 && r_max > r_min) {
            return Err(Error::Domain("grid needs 0 < r_min < r_max"));
        }
        if r_max / r_min < 1e4 {
            return Err(Error::Domain("grid must span at least four decades"));
        }
        let l0 = math::ln(r_min);
        let l1 = math::ln(r_max);
        let step = (l1 - l0) / (n - 1) as f64;
        let mut nodes = Vec::with_capacity(n);
        let mut log_nodes = Vec::with_capacity(n);
        for i in 0..n {
            let x = l0 + step * i as f64;
            log_nodes.push(x);
            nodes.push(math::exp(x));
        }
        nodes[0] = r_min;
        nodes[n - 1] = r_max;
        Ok(Arc::new(RadialGrid { nodes, log_nodes, r_min, r_max, step }))
    }

    pub fn default_grid() -> Arc<Self> {
        Self::geometric(Self::DEFAULT_R_MIN, Self::DEFAULT_R_MAX, Self::DEFAULT_N)
            .expect("default grid parameters are valid")
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn log_nodes(&self) -> &[f64] {
        &self.log_nodes
    }

    pub fn r_min(&self) -> f64 {
        self.r_min
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    /// Log-spacing between consecutive nodes.
    pub fn log_step(&self) -> f64 {
        self.step
    }

    /// Index of the interval containing `x = ln r`, clamped to valid range.
    fn interval_of(&self, x: f64) -> usize {
        let i = ((x - self.log_nodes[0]) / self.step) as isize;
        i.clamp(0, self.nodes.len() as isize - 2) as usize
    }
}

/// Origin closure `phi(r) = exp(-sum_j c_j r^{a_j})` for `r < r_min`.
///
/// Two terms suffice in practice: the leading order of the initial datum
/// and the `r^p` component injected by the diffusion term.
#[derive(Debug, Clone, PartialEq)]
pub struct OriginModel {
    terms: Vec<(f64, f64)>,
}

impl OriginModel {
    /// `terms` are `(coefficient, power)` pairs with nonnegative
    /// coefficients and powers in `(0, 2]`.
    pub fn new(terms: Vec<(f64, f64)>) -> Result<Self> {
        for &(c, a) in &terms {
            if !(c >= 0.0) || !c.is_finite() {
                return Err(Error::Domain("origin model: coefficients must be nonnegative"));
            }
            if !(a > 0.0 && a <= 2.0) {
                return Err(Error::Domain("origin model: powers must lie in (0, 2]"));
            }
        }
        let mut m = OriginModel { terms };
        m.normalize();
        Ok(m)
    }

    /// `phi` identically 1 near the origin.
    pub fn flat() -> Self {
        OriginModel { terms: Vec::new() }
    }

    pub fn single(c: f64, a: f64) -> Result<Self> {
        Self::new(vec![(c, a)])
    }

    fn normalize(&mut self) {
        self.terms.retain(|&(c, _)| c != 0.0);
        self.terms.sort_by(|x, y| x.1.partial_cmp(&y.1).unwrap());
        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(self.terms.len());
        for &(c, a) in &self.terms {
            match merged.last_mut() {
                Some(last) if (last.1 - a).abs() < 1e-13 => last.0 += c,
                _ => merged.push((c, a)),
            }
        }
        self.terms = merged;
    }

    pub fn terms(&self) -> &[(f64, f64)] {
        &self.terms
    }

    /// Leading `(coefficient, power)`: the smallest power with a nonzero
    /// coefficient. `None` for the flat model.
    pub fn leading(&self) -> Option<(f64, f64)> {
        self.terms.first().copied()
    }

    /// The exponent sum `sum_j c_j r^{a_j}` (so `phi = exp(-that)`).
    pub fn exponent(&self, r: f64) -> f64 {
        self.terms.iter().map(|&(c, a)| c * math::powf(r, a)).sum()
    }

    pub fn eval(&self, r: f64) -> f64 {
        math::exp(-self.exponent(r))
    }

    /// `1 - phi(r)`, computed without cancellation.
    pub fn one_minus(&self, r: f64) -> f64 {
        -math::expm1(-self.exponent(r))
    }
}

/// Extrapolation beyond `r_max`.
#[derive(Debug, Clone, PartialEq)]
pub enum TailModel {
    /// `phi(r) = phi(r_max) * exp(-sum_j c_j (r^{a_j} - r_max^{a_j}))`.
    Decay { terms: Vec<(f64, f64)> },
    /// `phi(r) = phi(r_max)`.
    Constant,
}

impl TailModel {
    pub fn decay(terms: Vec<(f64, f64)>) -> Result<Self> {
        for &(c, a) in &terms {
            if !(c >= 0.0) || !c.is_finite() || !(a > 0.0 && a <= 2.0) {
                return Err(Error::Domain("tail model: bad decay term"));
            }
        }
        Ok(TailModel::Decay { terms })
    }

    pub fn terms(&self) -> &[(f64, f64)] {
        match self {
            TailModel::Decay { terms } => terms,
            TailModel::Constant => &[],
        }
    }

    pub fn is_decaying(&self) -> bool {
        match self {
            TailModel::Decay { terms } => terms.iter().any(|&(c, _)| c > 0.0),
            TailModel::Constant => false,
        }
    }

    /// Decay exponent relative to the anchor radius: `phi(r) = anchor *
    /// exp(-excess(r))` with `excess(r_max) = 0`.
    fn excess(&self, r: f64, r_max: f64) -> f64 {
        match self {
            TailModel::Decay { terms } => {
                terms.iter().map(|&(c, a)| c * (math::powf(r, a) - math::powf(r_max, a))).sum()
            }
            TailModel::Constant => 0.0,
        }
    }

    pub fn eval(&self, r: f64, anchor: f64, r_max: f64) -> f64 {
        anchor * math::exp(-self.excess(r, r_max))
    }
}

/// Closed-form catalog families, kept on states sampled from them so tests
/// and oracles can consult the exact function.
#[derive(Debug, Clone, PartialEq)]
pub enum ClosedForm {
    /// `exp(-sigma^2 r^2 / 2)`.
    Gaussian { sigma: f64 },
    /// `exp(-t r^p)`.
    Stable { p: f64, t: f64 },
    /// Convex mixture of closed forms.
    Mixture(Vec<(f64, ClosedForm)>),
    /// `exp(-kappa r^2 / 2)(1 + c r^2)` with `-kappa/3 <= c <= 0`; the
    /// one-parameter family closed under the constant-kernel evolution.
    Bkw { kappa: f64, c: f64 },
    /// Point mass at the origin: `phi` identically 1.
    Dirac,
}

impl ClosedForm {
    pub fn eval(&self, r: f64) -> f64 {
        match self {
            ClosedForm::Gaussian { sigma } => math::exp(-0.5 * sigma * sigma * r * r),
            ClosedForm::Stable { p, t } => math::exp(-t * math::powf(r, *p)),
            ClosedForm::Mixture(parts) => parts.iter().map(|(w, f)| w * f.eval(r)).sum(),
            ClosedForm::Bkw { kappa, c } => math::exp(-0.5 * kappa * r * r) * (1.0 + c * r * r),
            ClosedForm::Dirac => 1.0,
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            ClosedForm::Gaussian { sigma } => {
                if !(*sigma > 0.0) {
                    return Err(Error::Domain("gaussian: sigma must be positive"));
                }
            }
            ClosedForm::Stable { p, t } => {
                if !(*p > 0.0 && *p <= 2.0) {
                    return Err(Error::Domain("stable: p must lie in (0, 2]"));
                }
                if !(*t >= 0.0) {
                    return Err(Error::Domain("stable: t must be nonnegative"));
                }
            }
            ClosedForm::Mixture(parts) => {
                if parts.is_empty() {
                    return Err(Error::Domain("mixture: needs at least one component"));
                }
                let wsum: f64 = parts.iter().map(|(w, _)| *w).sum();
                if (wsum - 1.0).abs() > 1e-12 || parts.iter().any(|(w, _)| *w < 0.0) {
                    return Err(Error::Domain("mixture: weights must be nonnegative and sum to 1"));
                }
                for (_, f) in parts {
                    f.validate()?;
                }
            }
            ClosedForm::Bkw { kappa, c } => {
                if !(*kappa > 0.0) {
                    return Err(Error::Domain("bkw: kappa must be positive"));
                }
                if !(*c <= 0.0 && *c >= -kappa / 3.0) {
                    return Err(Error::Domain("bkw: need -kappa/3 <= c <= 0 for a valid density"));
                }
            }
            ClosedForm::Dirac => {}
        }
        Ok(())
    }

    /// Leading origin terms of `1 - phi`.
    fn origin_terms(&self) -> Vec<(f64, f64)> {
        match self {
            ClosedForm::Gaussian { sigma } => vec![(0.5 * sigma * sigma, 2.0)],
            ClosedForm::Stable { p, t } => vec![(*t, *p)],
            ClosedForm::Mixture(parts) => {
                let mut terms = Vec::new();
                for (w, f) in parts {
                    for (c, a) in f.origin_terms() {
                        terms.push((w * c, a));
                    }
                }
                terms
            }
            ClosedForm::Bkw { kappa, c } => vec![(0.5 * kappa - c, 2.0)],
            ClosedForm::Dirac => Vec::new(),
        }
    }

    /// Slowest-decaying tail terms.
    fn tail_terms(&self) -> Vec<(f64, f64)> {
        match self {
            ClosedForm::Gaussian { sigma } => vec![(0.5 * sigma * sigma, 2.0)],
            ClosedForm::Stable { p, t } => {
                if *t > 0.0 {
                    vec![(*t, *p)]
                } else {
                    Vec::new()
                }
            }
            ClosedForm::Mixture(parts) => parts
                .iter()
                .map(|(_, f)| f.tail_terms())
                .filter(|t| !t.is_empty())
                .min_by(|a, b| {
                    let ra = a.iter().map(|&(_, p)| p).fold(f64::INFINITY, f64::min);
                    let rb = b.iter().map(|&(_, p)| p).fold(f64::INFINITY, f64::min);
                    ra.partial_cmp(&rb).unwrap()
                })
                .unwrap_or_default(),
            ClosedForm::Bkw { kappa, .. } => vec![(0.5 * kappa, 2.0)],
            ClosedForm::Dirac => Vec::new(),
        }
    }
}

/// A radial characteristic function sampled on a geometric grid.
#[derive(Debug, Clone)]
pub struct RadialCharFn {
    grid: Arc<RadialGrid>,
    values: Vec<f64>,
    slopes: Vec<f64>,
    origin: OriginModel,
    tail: TailModel,
    closed_form: Option<ClosedForm>,
}

impl RadialCharFn {
    /// Build a state from node values plus origin and tail closures.
    /// Values must lie in `[-1, 1]` up to a 1e-12 rounding allowance,
    /// which is clamped away.
    pub fn from_values(
        grid: Arc<RadialGrid>,
        mut values: Vec<f64>,
        origin: OriginModel,
        tail: TailModel,
    ) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::GridMismatch);
        }
        for v in values.iter_mut() {
            if !v.is_finite() || v.abs() > 1.0 + 1e-12 {
                return Err(Error::Domain("characteristic function values must lie in [-1, 1]"));
            }
            *v = v.clamp(-1.0, 1.0);
        }
        let slopes = limited_slopes(&values, grid.log_step());
        Ok(RadialCharFn { grid, values, slopes, origin, tail, closed_form: None })
    }

    /// Sample a closed-form family on the grid, with consistent models.
    pub fn from_family(family: ClosedForm, grid: Arc<RadialGrid>) -> Result<Self> {
        family.validate()?;
        let values: Vec<f64> = grid.nodes().iter().map(|&r| family.eval(r)).collect();
        let origin = OriginModel::new(family.origin_terms())?;
        let tail_terms = family.tail_terms();
        let tail =
            if tail_terms.is_empty() { TailModel::Constant } else { TailModel::decay(tail_terms)? };
        let mut out = Self::from_values(grid, values, origin, tail)?;
        out.closed_form = Some(family);
        Ok(out)
    }

    /// The characteristic function of the point mass at the origin.
    pub fn one(grid: Arc<RadialGrid>) -> Self {
        let n = grid.len();
        let mut out =
            Self::from_values(grid, vec![1.0; n], OriginModel::flat(), TailModel::Constant)
                .expect("constant one is a valid state");
        out.closed_form = Some(ClosedForm::Dirac);
        out
    }

    pub fn grid(&self) -> &Arc<RadialGrid> {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn origin(&self) -> &OriginModel {
        &self.origin
    }

    pub fn tail(&self) -> &TailModel {
        &self.tail
    }

    pub fn closed_form(&self) -> Option<&ClosedForm> {
        self.closed_form.as_ref()
    }

    pub fn same_grid(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.grid, &other.grid) || self.grid == other.grid
    }

    /// Anchor value for the tail model, `phi(r_max)`.
    pub fn tail_anchor(&self) -> f64 {
        *self.values.last().unwrap()
    }

    /// Evaluate anywhere on `[0, infinity)`: origin model below `r_min`,
    /// limited cubic between nodes, tail model beyond `r_max`.
    pub fn eval(&self, r: f64) -> f64 {
        debug_assert!(r >= 0.0);
        if r < self.grid.r_min() {
            return self.origin.eval(r);
        }
        if r > self.grid.r_max() {
            return self.tail.eval(r, self.tail_anchor(), self.grid.r_max());
        }
        self.eval_interior(math::ln(r))
    }

    /// Evaluate at `x = ln r`. Hot path for the collision quadrature, which
    /// works with log-offsets of the node coordinates.
    pub(crate) fn eval_log(&self, x: f64) -> f64 {
        let lo = self.grid.log_nodes[0];
        if x < lo {
            // Origin model: sum of c_j e^{a_j x}.
            let e: f64 = self.origin.terms.iter().map(|&(c, a)| c * math::exp(a * x)).sum();
            return math::exp(-e);
        }
        if x > *self.grid.log_nodes.last().unwrap() {
            return self.tail.eval(math::exp(x), self.tail_anchor(), self.grid.r_max());
        }
        self.eval_interior(x)
    }

    /// `1 - phi` at `x = ln r`, cancellation-free below the grid.
    pub(crate) fn one_minus_log(&self, x: f64) -> f64 {
        let lo = self.grid.log_nodes[0];
        if x < lo {
            let e: f64 = self.origin.terms.iter().map(|&(c, a)| c * math::exp(a * x)).sum();
            return -math::expm1(-e);
        }
        1.0 - self.eval_log(x)
    }

    /// `1 - phi(r)` without cancellation in the origin region.
    pub fn one_minus(&self, r: f64) -> f64 {
        if r < self.grid.r_min() {
            self.origin.one_minus(r)
        } else {
            1.0 - self.eval(r)
        }
    }

    /// Cubic Hermite evaluation at `x = ln r` inside the grid.
    pub(crate) fn eval_interior(&self, x: f64) -> f64 {
        let i = self.grid.interval_of(x);
        let x0 = self.grid.log_nodes[i];
        let h = self.grid.log_step();
        let t = ((x - x0) / h).clamp(0.0, 1.0);
        hermite(self.values[i], self.values[i + 1], self.slopes[i] * h, self.slopes[i + 1] * h, t)
    }

    /// Difference `phi(r e^{dx}) - phi(r)` for small `dx <= 0`, evaluated
    /// through the local cubic so the subtraction does not lose
    /// significance when `dx` is tiny. Used by the collision bracket.
    pub fn shifted_difference(&self, r: f64, dx: f64) -> f64 {
        self.shifted_difference_log(math::ln(r), dx)
    }

    pub(crate) fn shifted_difference_log(&self, x: f64, dx: f64) -> f64 {
        let xs = x + dx;
        let lo = self.grid.log_nodes[0];
        let hi = *self.grid.log_nodes.last().unwrap();
        if xs < lo || x < lo || x > hi {
            return self.eval_log(xs) - self.eval_log(x);
        }
        let i = self.grid.interval_of(x);
        let i2 = self.grid.interval_of(xs);
        if i != i2 {
            return self.eval_log(xs) - self.eval_log(x);
        }
        let x0 = self.grid.log_nodes[i];
        let h = self.grid.log_step();
        let t = ((x - x0) / h).clamp(0.0, 1.0);
        let dt = dx / h;
        hermite_difference(
            self.values[i],
            self.values[i + 1],
            self.slopes[i] * h,
            self.slopes[i + 1] * h,
            t,
            dt,
        )
    }

    /// Interpolant derivative `d phi / d r` inside the grid.
    pub fn derivative(&self, r: f64) -> Result<f64> {
        if !(self.grid.r_min()..=self.grid.r_max()).contains(&r) {
            return Err(Error::InterpolationOutOfRange);
        }
        let x = math::ln(r);
        let i = self.grid.interval_of(x);
        let x0 = self.grid.log_nodes[i];
        let h = self.grid.log_step();
        let t = ((x - x0) / h).clamp(0.0, 1.0);
        let d_dx = hermite_deriv(
            self.values[i],
            self.values[i + 1],
            self.slopes[i] * h,
            self.slopes[i + 1] * h,
            t,
        ) / h;
        Ok(d_dx / r)
    }

    /// Replace the origin/tail models (the solver updates them analytically
    /// as time advances).
    pub fn with_models(mut self, origin: OriginModel, tail: TailModel) -> Self {
        self.origin = origin;
        self.tail = tail;
        self.closed_form = None;
        self
    }
}

/// Cubic Hermite basis on `[0, 1]` with endpoint values and scaled slopes.
fn hermite(f0: f64, f1: f64, m0: f64, m1: f64, t: f64) -> f64 {
    let t2 = t * t;
    let t3 = t2 * t;
    f0 * (2.0 * t3 - 3.0 * t2 + 1.0)
        + m0 * (t3 - 2.0 * t2 + t)
        + f1 * (-2.0 * t3 + 3.0 * t2)
        + m1 * (t3 - t2)
}

fn hermite_deriv(f0: f64, f1: f64, m0: f64, m1: f64, t: f64) -> f64 {
    let t2 = t * t;
    f0 * (6.0 * t2 - 6.0 * t)
        + m0 * (3.0 * t2 - 4.0 * t + 1.0)
        + f1 * (-6.0 * t2 + 6.0 * t)
        + m1 * (3.0 * t2 - 2.0 * t)
}

/// `H(t + dt) - H(t)` expanded in powers of `dt` (exact for the cubic), so
/// nearby evaluations subtract without cancellation.
fn hermite_difference(f0: f64, f1: f64, m0: f64, m1: f64, t: f64, dt: f64) -> f64 {
    // H(t) = a3 t^3 + a2 t^2 + a1 t + a0.
    let a3 = 2.0 * (f0 - f1) + m0 + m1;
    let a2 = -3.0 * (f0 - f1) - 2.0 * m0 - m1;
    let a1 = m0;
    let d1 = 3.0 * a3 * t * t + 2.0 * a2 * t + a1;
    let d2 = 3.0 * a3 * t + a2;
    dt * (d1 + dt * (d2 + dt * a3))
}

/// Monotonicity-limited slopes for the cubic in `log r`: fourth-order
/// centered estimates clipped into the Fritsch-Carlson box, zeroed at
/// extrema. Keeps the interpolant inside the node values.
fn limited_slopes(values: &[f64], h: f64) -> Vec<f64> {
    let n = values.len();
    let mut d = vec![0.0f64; n];
    if n < 2 {
        return d;
    }
    let sec = |i: usize| (values[i + 1] - values[i]) / h;

    for i in 0..n {
        let raw = if i >= 2 && i + 2 < n {
            (values[i - 2] - 8.0 * values[i - 1] + 8.0 * values[i + 1] - values[i + 2]) / (12.0 * h)
        } else if i == 0 {
            sec(0)
        } else if i == n - 1 {
            sec(n - 2)
        } else {
            0.5 * (sec(i - 1) + sec(i))
        };
        let dl = if i == 0 { sec(0) } else { sec(i - 1) };
        let dr = if i == n - 1 { sec(n - 2) } else { sec(i) };
        d[i] = if dl * dr <= 0.0 && i > 0 && i < n - 1 {
            0.0
        } else {
            let bound = 3.0 * dl.abs().min(dr.abs());
            if raw * dr < 0.0 {
                0.0
            } else {
                raw.clamp(-bound, bound)
            }
        };
    }
    d
}

// ---------------------------------------------------------------------------
// Norms.

/// Effective leading difference `|phi - psi| ~ |C| r^e` of two origin
/// models as `r -> 0`. `None` when the models agree identically.
fn origin_difference_leading(a: &OriginModel, b: &OriginModel) -> Option<(f64, f64)> {
    // The difference of exp(-A) and exp(-B) behaves like B - A to leading
    // order near zero, so merge the exponent sums with signs.
    let mut combined: Vec<(f64, f64)> = Vec::new();
    for &(c, p) in a.terms() {
        combined.push((c, p));
    }
    for &(c, p) in b.terms() {
        combined.push((-c, p));
    }
    combined.sort_by(|x, y| x.1.partial_cmp(&y.1).unwrap());
    let mut merged: Vec<(f64, f64)> = Vec::new();
    for &(c, p) in &combined {
        match merged.last_mut() {
            Some(last) if (last.1 - p).abs() < 1e-13 => last.0 += c,
            _ => merged.push((c, p)),
        }
    }
    merged.into_iter().find(|&(c, _)| c.abs() > 1e-300)
}

/// `phi(r) - psi(r)` from the origin models, stable when both are near 1:
/// `exp(-A) - exp(-B) = -exp(-B) expm1(B - A)`.
fn model_difference(phi: &RadialCharFn, psi: &RadialCharFn, r: f64) -> f64 {
    let ea = phi.origin.exponent(r);
    let eb = psi.origin.exponent(r);
    -math::exp(-eb) * math::expm1(eb - ea)
}

/// `sup |phi - psi| / r^beta` over `(0, infinity)`.
///
/// Grid intervals are refined through the interpolants; the regions below
/// `r_min` and above `r_max` are scanned through the models, and the limit
/// at zero is classified analytically from the leading origin difference.
pub fn norm_kalpha(phi: &RadialCharFn, psi: &RadialCharFn, beta: f64) -> Result<f64> {
    if !phi.same_grid(psi) {
        return Err(Error::GridMismatch);
    }
    if !(beta > 0.0 && beta <= 2.0) {
        return Err(Error::Domain("norm_kalpha: order must lie in (0, 2]"));
    }
    let grid = phi.grid.as_ref();
    let mut sup = 0.0f64;

    let n = grid.len();
    for i in 0..n {
        let d = (phi.values[i] - psi.values[i]).abs();
        sup = sup.max(d / math::powf(grid.nodes()[i], beta));
    }
    for i in 0..n - 1 {
        for k in 1..4 {
            let x = grid.log_nodes[i] + grid.log_step() * (k as f64 / 4.0);
            let d = (phi.eval_interior(x) - psi.eval_interior(x)).abs();
            sup = sup.max(d * math::exp(-beta * x));
        }
    }

    // Origin region: analytic limit plus a scan of the model difference.
    if let Some((c, e)) = origin_difference_leading(&phi.origin, &psi.origin) {
        if e < beta - 1e-13 {
            return Ok(f64::INFINITY);
        }
        if (e - beta).abs() <= 1e-13 {
            sup = sup.max(c.abs());
        }
        let mut r = grid.r_min();
        for _ in 0..200 {
            r *= 0.5;
            let d = model_difference(phi, psi, r).abs();
            if d == 0.0 {
                break;
            }
            let q = d / math::powf(r, beta);
            sup = sup.max(q);
            if q < sup * 1e-6 && r < grid.r_min() * 1e-8 {
                break;
            }
        }
    }

    // Tail region: scan until the models die against the shrinking weight.
    let anchor_phi = phi.tail_anchor();
    let anchor_psi = psi.tail_anchor();
    let mut r = grid.r_max();
    for _ in 0..150 {
        r *= 2.0;
        let d = (phi.tail.eval(r, anchor_phi, grid.r_max())
            - psi.tail.eval(r, anchor_psi, grid.r_max()))
        .abs();
        let q = d / math::powf(r, beta);
        sup = sup.max(q);
        if q < sup * 1e-9 || d == 0.0 {
            break;
        }
    }

    Ok(sup)
}

/// `||phi - psi||_{M^alpha} = 4 pi int_0^inf |phi - psi| r^{-1-alpha} dr`,
/// with the pieces below `r_min` and above `r_max` taken from the origin
/// and tail models. Returns `+inf` when the origin models imply a
/// non-integrable difference.
pub fn norm_malpha(phi: &RadialCharFn, psi: &RadialCharFn, alpha: f64) -> Result<f64> {
    weighted_norm_malpha(phi, psi, alpha, 0.0, 1.0)
}

/// `M^alpha` norm of `e^{w r^q}(phi - psi)`; `w = 0` gives the plain norm.
/// The weight is the diffusion factor of the stability estimate; products
/// are evaluated in log space so huge `w r^q` cannot overflow.
pub fn weighted_norm_malpha(
    phi: &RadialCharFn,
    psi: &RadialCharFn,
    alpha: f64,
    w: f64,
    q: f64,
) -> Result<f64> {
    if !phi.same_grid(psi) {
        return Err(Error::GridMismatch);
    }
    if !(alpha > 0.0 && alpha < 2.0) {
        return Err(Error::Domain("norm_malpha: order must lie in (0, 2)"));
    }
    if w < 0.0 || (w > 0.0 && !(q > 0.0)) {
        return Err(Error::Domain("weighted norm: bad weight"));
    }
    let grid = phi.grid.as_ref();

    // Divergence flag: integrable only when the leading origin-difference
    // exponent exceeds alpha strictly.
    if let Some((c, e)) = origin_difference_leading(&phi.origin, &psi.origin) {
        if c.abs() > 0.0 && e <= alpha + 1e-13 {
            return Ok(f64::INFINITY);
        }
    }

    let weight_exp = |r: f64| if w == 0.0 { 0.0 } else { w * math::powf(r, q) };

    // Origin piece over (0, r_min): graded panels of the model difference.
    // Identical models contribute nothing (solver iterates share models).
    let origin_part = if phi.origin == psi.origin {
        0.0
    } else {
        let f = |r: f64| {
            model_difference(phi, psi, r).abs()
                * math::exp(weight_exp(r))
                * math::powf(r, -1.0 - alpha)
        };
        let opts = quad::GradedOpts { abs_tol: 1e-13, rel_tol: 1e-11, ..Default::default() };
        match quad::graded_to_zero(&f, grid.r_min(), &opts)? {
            quad::GradedOutcome::Converged(r) => r.value,
            quad::GradedOutcome::Divergent => return Ok(f64::INFINITY),
        }
    };

    // Grid piece: per-interval Gauss-Kronrod on the interpolated difference
    // in x = ln r, splitting at sign changes so |.| stays smooth.
    let mut grid_part = 0.0f64;
    for i in 0..grid.len() - 1 {
        let x0 = grid.log_nodes[i];
        let x1 = grid.log_nodes[i + 1];
        let f = |x: f64| {
            let diff = phi.eval_interior(x) - psi.eval_interior(x);
            if diff == 0.0 {
                return 0.0;
            }
            let r = math::exp(x);
            diff.abs() * math::exp(weight_exp(r) - alpha * x)
        };
        let d0 = phi.values[i] - psi.values[i];
        let d1 = phi.values[i + 1] - psi.values[i + 1];
        if d0 * d1 < 0.0 {
            let g = |x: f64| phi.eval_interior(x) - psi.eval_interior(x);
            let mut lo = x0;
            let mut hi = x1;
            let mut glo = d0;
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                let gm = g(mid);
                if gm == 0.0 {
                    lo = mid;
                    break;
                }
                if glo * gm < 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                    glo = gm;
                }
            }
            let xc = 0.5 * (lo + hi);
            let (v1, _) = quad::gk15(&f, x0, xc);
            let (v2, _) = quad::gk15(&f, xc, x1);
            grid_part += v1 + v2;
        } else {
            let (v, _) = quad::gk15(&f, x0, x1);
            grid_part += v;
        }
    }

    // Tail piece over (r_max, inf), on doubling log panels.
    let anchor_phi = phi.tail_anchor();
    let anchor_psi = psi.tail_anchor();
    let mut tail_part = 0.0f64;
    {
        let f = |x: f64| {
            let r = math::exp(x);
            let d = phi.tail.eval(r, anchor_phi, grid.r_max())
                - psi.tail.eval(r, anchor_psi, grid.r_max());
            d.abs() * math::exp(weight_exp(r) - alpha * x)
        };
        let mut x0 = math::ln(grid.r_max());
        let mut settled = false;
        for _ in 0..64 {
            let x1 = x0 + math::LN_2;
            let (v, _) = quad::gk15(&f, x0, x1);
            tail_part += v;
            if v.abs() < 1e-16 * (tail_part.abs() + 1e-30) {
                settled = true;
                break;
            }
            x0 = x1;
        }
        if !settled {
            // Whatever survives 64 doublings is an (almost) constant
            // difference; add the exact power-law remainder.
            let r_end = math::exp(x0);
            let d_end = (phi.tail.eval(r_end, anchor_phi, grid.r_max())
                - psi.tail.eval(r_end, anchor_psi, grid.r_max()))
            .abs();
            if w > 0.0 && d_end > 0.0 {
                return Err(Error::NotIntegrable("weighted tail does not decay"));
            }
            tail_part += d_end * math::powf(r_end, -alpha) / alpha;
        }
    }

    Ok(4.0 * math::PI * (origin_part + grid_part + tail_part))
}

/// `dis_{alpha,beta}(phi, psi) = ||phi - psi||_{M^alpha} + ||phi - psi||_beta`
/// for `0 < beta <= alpha < 2`. Infinity propagates.
pub fn dis_metric(phi: &RadialCharFn, psi: &RadialCharFn, alpha: f64, beta: f64) -> Result<f64> {
    if !(beta > 0.0 && beta <= alpha && alpha < 2.0) {
        return Err(Error::Domain("dis_metric: need 0 < beta <= alpha < 2"));
    }
    let m = norm_malpha(phi, psi, alpha)?;
    let k = norm_kalpha(phi, psi, beta)?;
    Ok(m + k)
}

/// Report of the Bochner positive-definiteness diagnostic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PdReport {
    pub min_eigenvalue: f64,
    pub pass: bool,
}

pub const TOL_PD: f64 = 1e-8;

/// Draw `m` points uniformly in the ball of the given radius (seeded),
/// form the kernel matrix `[phi(|xi_j - xi_k|)]` and report its smallest
/// eigenvalue. Characteristic functions give PSD matrices.
pub fn check_positive_definite(
    phi: &RadialCharFn,
    m: usize,
    radius: f64,
    seed: u64,
) -> Result<PdReport> {
    if m < 2 {
        return Err(Error::Domain("check_positive_definite: need at least two samples"));
    }
    if !(radius > 0.0) {
        return Err(Error::Domain("check_positive_definite: radius must be positive"));
    }
    // Pairwise distances reach 2 * radius; the models must cover that.
    if 2.0 * radius > phi.grid().r_max()
        && !phi.tail.is_decaying()
        && !matches!(phi.tail, TailModel::Constant)
    {
        return Err(Error::InterpolationOutOfRange);
    }
    let mut rng = SplitMix64::new(seed);
    let pts: Vec<[f64; 3]> = (0..m).map(|_| rng.in_ball(radius)).collect();
    let mut mat = vec![0.0f64; m * m];
    for j in 0..m {
        for k in 0..m {
            let dx = pts[j][0] - pts[k][0];
            let dy = pts[j][1] - pts[k][1];
            let dz = pts[j][2] - pts[k][2];
            let dist = math::sqrt(dx * dx + dy * dy + dz * dz);
            mat[j * m + k] = if j == k { 1.0 } else { phi.eval(dist) };
        }
    }
    let min_eig = linalg::min_eigenvalue_symmetric(&mat, m);
    Ok(PdReport { min_eigenvalue: min_eig, pass: min_eig >= -TOL_PD })
}
