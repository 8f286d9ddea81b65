//! Allocation rules.
//!
//! Every rule maps a validated [`Problem`] to a balanced [`Allocation`].
//! Agents are ordered source → mouth; the mouth (last agent) is special in
//! the transfer-based rules because it has nobody downstream to pass
//! permits to.
//!
//! The geometric rule ships in two deliberately independent forms:
//! [`geometric`] evaluates the closed-form discounted sums (recomputing
//! each power from scratch), while [`geometric_recurrence`] runs the O(n)
//! sequential pass-down process. They must agree everywhere; the property
//! suite enforces that, so neither implementation may be rewritten in
//! terms of the other.

use std::fmt;
use std::sync::Arc;

use crate::problem::{Allocation, Problem};
use crate::quantity::Quantity;
use thiserror::Error;

/// Rule evaluation / configuration failures.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuleError {
    /// A transfer function returned a value outside `[0, t]`; payload is
    /// the offending input `t`.
    #[error("transfer function value out of range at t = {0}")]
    GammaOutOfRange(String),
    /// A scalar rule parameter fell outside `[0, 1]`.
    #[error("{name} must lie in [0, 1], got {value}")]
    ParameterOutOfRange { name: &'static str, value: String },
    /// A textual transfer-function spec did not parse.
    #[error("invalid transfer function spec {spec:?}: {reason}")]
    InvalidGammaSpec { spec: String, reason: String },
}

macro_rules! unit_interval_param {
    ($(#[$doc:meta])* $name:ident, $label:literal) => {
        $(#[$doc])*
        #[derive(Debug, Clone, PartialEq)]
        pub struct $name<Q: Quantity>(Q);

        impl<Q: Quantity> $name<Q> {
            /// Validate `0 <= value <= 1` and wrap.
            pub fn new(value: Q) -> Result<Self, RuleError> {
                if value < Q::zero() || value > Q::one() {
                    return Err(RuleError::ParameterOutOfRange {
                        name: $label,
                        value: value.repr(),
                    });
                }
                Ok(Self(value))
            }

            /// Convenience constructor from a ratio of integers.
            pub fn ratio(num: i64, den: i64) -> Self {
                Self::new(Q::ratio(num, den)).expect("ratio parameter out of [0, 1]")
            }

            /// The wrapped value.
            pub fn value(&self) -> &Q {
                &self.0
            }

            /// Unwrap.
            pub fn into_inner(self) -> Q {
                self.0
            }
        }
    };
}

unit_interval_param!(
    /// Retention fraction γ for the geometric rule.
    GammaParam,
    "gamma"
);
unit_interval_param!(
    /// Mixing weight λ for the averaging rule.
    LambdaParam,
    "lambda"
);

// ---- basic rules ----------------------------------------------------------

/// Proportional rule: `x_i = (E / C) * c_i`.
pub fn proportional<Q: Quantity>(p: &Problem<Q>) -> Allocation<Q> {
    let ratio = p.budget_ratio();
    let awards = p
        .claims()
        .iter()
        .map(|c| c.clone() * ratio.clone())
        .collect();
    Allocation::balanced(awards, p.budget())
}

/// Full-transfer rule: every permit ends up at the mouth, `x = (0, …, 0, E)`.
pub fn full_transfer<Q: Quantity>(p: &Problem<Q>) -> Allocation<Q> {
    let n = p.len();
    let mut awards = vec![Q::zero(); n];
    awards[n - 1] = p.budget().clone();
    Allocation::balanced(awards, p.budget())
}

/// Averaging rule: `λ * proportional + (1 - λ) * full_transfer`.
pub fn averaging<Q: Quantity>(p: &Problem<Q>, lambda: &LambdaParam<Q>) -> Allocation<Q> {
    let l = lambda.value();
    let prop = proportional(p);
    let ft = full_transfer(p);
    let awards = prop
        .awards()
        .iter()
        .zip(ft.awards())
        .map(|(a, b)| l.clone() * a.clone() + (Q::one() - l.clone()) * b.clone())
        .collect();
    Allocation::balanced(awards, p.budget())
}

// ---- geometric rule, two independent routes -------------------------------

/// Geometric rule via the closed-form discounted sums.
///
/// Agent `i < n` retains `γ * Σ_{k<=i} (1-γ)^(i-k) c_k`; the mouth retains
/// the whole discounted mass reaching it. Awards scale retained shares by
/// `E / C`. Powers are recomputed from scratch per term so this route does
/// not share arithmetic with [`geometric_recurrence`].
pub fn geometric<Q: Quantity>(p: &Problem<Q>, gamma: &GammaParam<Q>) -> Allocation<Q> {
    let n = p.len();
    let g = gamma.value();
    let keep = Q::one() - g.clone();
    let ratio = p.budget_ratio();
    let claims = p.claims();
    let mut awards = Vec::with_capacity(n);
    for i in 0..n {
        let mut mass = Q::zero();
        for (k, c) in claims.iter().enumerate().take(i + 1) {
            let mut discount = Q::one();
            for _ in 0..(i - k) {
                discount = discount * keep.clone();
            }
            mass = mass + discount * c.clone();
        }
        let retained = if i + 1 == n { mass } else { g.clone() * mass };
        awards.push(retained * ratio.clone());
    }
    Allocation::balanced(awards, p.budget())
}

/// Geometric rule via the sequential pass-down process (the oracle route).
///
/// Mass accumulates downstream: `a_1 = c_1`, `a_i = c_i + (1-γ) a_{i-1}`;
/// agent `i < n` retains `γ a_i`, the mouth retains `a_n`.
pub fn geometric_recurrence<Q: Quantity>(p: &Problem<Q>, gamma: &GammaParam<Q>) -> Allocation<Q> {
    let ratio = p.budget_ratio();
    let awards = geometric_retained(p, gamma)
        .into_iter()
        .map(|r| r * ratio.clone())
        .collect();
    Allocation::balanced(awards, p.budget())
}

/// Retained shares `r` of the sequential geometric process (`Σ r = C`).
pub fn geometric_retained<Q: Quantity>(p: &Problem<Q>, gamma: &GammaParam<Q>) -> Vec<Q> {
    let n = p.len();
    let g = gamma.value();
    let mut retained = augmented_claims(p.claims(), gamma);
    for (i, a) in retained.iter_mut().enumerate() {
        if i + 1 < n {
            *a = g.clone() * a.clone();
        }
    }
    retained
}

/// Augmented claims `a_i = c_i + (1-γ) a_{i-1}`: each agent's own claim
/// plus the geometrically decayed residuals inherited from upstream,
/// before any retention or budget scaling. Diagnostic view of the
/// sequential process.
pub fn augmented_claims<Q: Quantity>(claims: &[Q], gamma: &GammaParam<Q>) -> Vec<Q> {
    let keep = Q::one() - gamma.value().clone();
    let mut augmented = Vec::with_capacity(claims.len());
    let mut mass = Q::zero();
    for c in claims {
        mass = c.clone() + keep.clone() * mass;
        augmented.push(mass.clone());
    }
    augmented
}

// ---- generalized geometric rule -------------------------------------------

/// A transfer function Γ with `0 <= Γ(t) <= t` required on every input.
///
/// The range condition is validated at construction where possible and
/// re-checked at every evaluation (which is the only guard for
/// [`GammaFunction::opaque`] callables).
pub enum GammaFunction<Q: Quantity> {
    /// `Γ(t) = slope * t` with `slope ∈ [0, 1]`.
    Linear { slope: Q },
    /// `Γ(t) = min(t, cap)` with `cap >= 0`.
    Cap { cap: Q },
    /// Piecewise-linear through `(0, 0)` and the given breakpoints,
    /// extrapolating the final segment's slope beyond the last one.
    PiecewiseLinear { points: Vec<(Q, Q)> },
    /// Arbitrary callable; range-checked on every evaluation.
    Opaque(Arc<dyn Fn(&Q) -> Q + Send + Sync>),
}

impl<Q: Quantity> Clone for GammaFunction<Q> {
    fn clone(&self) -> Self {
        match self {
            Self::Linear { slope } => Self::Linear {
                slope: slope.clone(),
            },
            Self::Cap { cap } => Self::Cap { cap: cap.clone() },
            Self::PiecewiseLinear { points } => Self::PiecewiseLinear {
                points: points.clone(),
            },
            Self::Opaque(f) => Self::Opaque(Arc::clone(f)),
        }
    }
}

impl<Q: Quantity> fmt::Debug for GammaFunction<Q> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Linear { slope } => write!(f, "linear:{slope}"),
            Self::Cap { cap } => write!(f, "cap:{cap}"),
            Self::PiecewiseLinear { points } => {
                write!(f, "pwl:")?;
                for (i, (t, y)) in points.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{t}:{y}")?;
                }
                Ok(())
            }
            Self::Opaque(_) => write!(f, "opaque"),
        }
    }
}

impl<Q: Quantity> GammaFunction<Q> {
    /// `Γ(t) = slope * t`.
    pub fn linear(slope: Q) -> Result<Self, RuleError> {
        if slope < Q::zero() || slope > Q::one() {
            return Err(RuleError::ParameterOutOfRange {
                name: "linear slope",
                value: slope.repr(),
            });
        }
        Ok(Self::Linear { slope })
    }

    /// `Γ(t) = min(t, cap)`.
    pub fn cap(cap: Q) -> Result<Self, RuleError> {
        if cap < Q::zero() {
            return Err(RuleError::ParameterOutOfRange {
                name: "cap",
                value: cap.repr(),
            });
        }
        Ok(Self::Cap { cap })
    }

    /// Piecewise-linear through `(0,0)` and `points`.
    ///
    /// Breakpoint abscissae must be strictly increasing and positive, each
    /// ordinate must satisfy `0 <= y <= t`, and the final segment's slope
    /// must lie in `[0, 1]` so extrapolation keeps `Γ(t) <= t`.
    pub fn piecewise_linear(points: Vec<(Q, Q)>) -> Result<Self, RuleError> {
        let reject = |reason: &str| RuleError::InvalidGammaSpec {
            spec: format!("{points:?}"),
            reason: reason.to_owned(),
        };
        if points.is_empty() {
            return Err(reject("needs at least one breakpoint"));
        }
        let mut prev_t = Q::zero();
        for (t, y) in &points {
            if *t <= prev_t {
                return Err(reject("breakpoints must be strictly increasing and positive"));
            }
            if *y < Q::zero() || *y > *t {
                return Err(reject("breakpoint value must satisfy 0 <= y <= t"));
            }
            prev_t = t.clone();
        }
        let (last_t, last_y) = points.last().expect("non-empty").clone();
        let (prev_t, prev_y) = if points.len() >= 2 {
            points[points.len() - 2].clone()
        } else {
            (Q::zero(), Q::zero())
        };
        let slope = (last_y - prev_y) / (last_t - prev_t);
        if slope < Q::zero() || slope > Q::one() {
            return Err(reject("final segment slope must lie in [0, 1]"));
        }
        Ok(Self::PiecewiseLinear { points })
    }

    /// Arbitrary callable, range-checked on each evaluation.
    pub fn opaque(f: impl Fn(&Q) -> Q + Send + Sync + 'static) -> Self {
        Self::Opaque(Arc::new(f))
    }

    /// Parse `"linear:S"`, `"cap:A"`, or `"pwl:t1:y1,t2:y2,…"`.
    pub fn from_spec(spec: &str) -> Result<Self, RuleError> {
        let bad = |reason: String| RuleError::InvalidGammaSpec {
            spec: spec.to_owned(),
            reason,
        };
        let (kind, rest) = spec
            .split_once(':')
            .ok_or_else(|| bad("expected linear:S, cap:A, or pwl:t1:y1,…".to_owned()))?;
        let scalar = |text: &str| {
            Q::from_decimal_str(text).map_err(|e| bad(e.to_string()))
        };
        match kind {
            "linear" => Self::linear(scalar(rest)?),
            "cap" => Self::cap(scalar(rest)?),
            "pwl" => {
                let mut points = Vec::new();
                for pair in rest.split(',') {
                    let (t, y) = pair
                        .split_once(':')
                        .ok_or_else(|| bad(format!("breakpoint {pair:?} is not t:y")))?;
                    points.push((scalar(t)?, scalar(y)?));
                }
                Self::piecewise_linear(points)
            }
            other => Err(bad(format!("unknown transfer function kind {other:?}"))),
        }
    }

    /// Evaluate Γ at `t`, rejecting any value outside `[0, t]`.
    ///
    /// In float mode the range check allows `1e-9` slack and the result is
    /// clamped back into `[0, t]` so rounding dust never leaks into the
    /// downstream carry.
    pub fn eval(&self, t: &Q) -> Result<Q, RuleError> {
        let raw = match self {
            Self::Linear { slope } => slope.clone() * t.clone(),
            Self::Cap { cap } => {
                if *t < *cap {
                    t.clone()
                } else {
                    cap.clone()
                }
            }
            Self::PiecewiseLinear { points } => eval_piecewise(points, t),
            Self::Opaque(f) => f(t),
        };
        let in_range = if Q::EXACT {
            raw >= Q::zero() && raw <= *t
        } else {
            let slack = crate::quantity::FLOAT_EQ_TOL;
            raw.to_f64() >= -slack && raw.to_f64() <= t.to_f64() + slack
        };
        if !in_range {
            return Err(RuleError::GammaOutOfRange(t.repr()));
        }
        let mut value = raw;
        if !Q::EXACT {
            if value < Q::zero() {
                value = Q::zero();
            }
            if value > *t {
                value = t.clone();
            }
        }
        Ok(value)
    }
}

/// Piecewise-linear interpolation with implicit origin and final-slope
/// extrapolation. Assumes the validated breakpoint layout.
fn eval_piecewise<Q: Quantity>(points: &[(Q, Q)], t: &Q) -> Q {
    let mut prev = (Q::zero(), Q::zero());
    for (bt, by) in points {
        if *t <= *bt {
            let w = (t.clone() - prev.0.clone()) / (bt.clone() - prev.0.clone());
            return prev.1.clone() + w * (by.clone() - prev.1.clone());
        }
        prev = (bt.clone(), by.clone());
    }
    let (last_t, last_y) = points.last().expect("validated non-empty").clone();
    let (before_t, before_y) = if points.len() >= 2 {
        points[points.len() - 2].clone()
    } else {
        (Q::zero(), Q::zero())
    };
    let slope = (last_y.clone() - before_y) / (last_t.clone() - before_t);
    last_y + slope * (t.clone() - last_t)
}

/// Generalized geometric rule: agent `i < n` retains `Γ(s_i)` of the mass
/// `s_i` reaching it (own claim plus everything passed down), the mouth
/// retains all of `s_n`. Awards scale retained shares by `E / C`.
pub fn generalized_geometric<Q: Quantity>(
    p: &Problem<Q>,
    gamma_fn: &GammaFunction<Q>,
) -> Result<Allocation<Q>, RuleError> {
    let ratio = p.budget_ratio();
    let retained = generalized_geometric_retained(p, gamma_fn)?;
    let awards = retained.into_iter().map(|r| r * ratio.clone()).collect();
    Ok(Allocation::balanced(awards, p.budget()))
}

/// Retained shares of the generalized geometric process (`Σ r = C`).
pub fn generalized_geometric_retained<Q: Quantity>(
    p: &Problem<Q>,
    gamma_fn: &GammaFunction<Q>,
) -> Result<Vec<Q>, RuleError> {
    let n = p.len();
    let mut carry = Q::zero();
    let mut retained = Vec::with_capacity(n);
    for (i, c) in p.claims().iter().enumerate() {
        let arriving = c.clone() + carry.clone();
        let kept = if i + 1 == n {
            arriving.clone()
        } else {
            gamma_fn.eval(&arriving)?
        };
        carry = arriving - kept.clone();
        retained.push(kept);
    }
    Ok(retained)
}
