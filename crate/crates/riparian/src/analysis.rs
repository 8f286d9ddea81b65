//! Claims-boundedness analysis, parameter thresholds, sweeps, and
//! side-by-side family comparisons.
//!
//! An allocation is *claims-bounded* when no agent receives more than its
//! claim. Transfer-based rules can violate that for downstream agents, so
//! the interesting question is the minimal parameter value restoring it:
//! for the geometric family that threshold is found by a feasibility scan
//! plus bisection (award paths are non-monotone in γ, so the feasible set
//! is scanned rather than assumed to be an interval); for the averaging
//! family a closed form exists.

use crate::problem::{Allocation, Problem};
use crate::quantity::Quantity;
use crate::rules::{averaging, geometric, GammaParam, LambdaParam, RuleError};

/// Default bisection tolerance for threshold refinement.
pub const DEFAULT_THRESHOLD_TOL: f64 = 1e-4;

/// Grid step of the feasibility scan.
pub const SCAN_STEP: f64 = 1e-3;

/// Default number of grid points for parameter sweeps.
pub const DEFAULT_SWEEP_POINTS: usize = 1001;

/// Which one-parameter family a threshold refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Geometric,
    Averaging,
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Family::Geometric => write!(f, "geometric"),
            Family::Averaging => write!(f, "averaging"),
        }
    }
}

/// Outcome of a claims-boundedness check.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundednessReport<Q: Quantity> {
    /// True when every award is at most the corresponding claim.
    pub bounded: bool,
    /// Largest violation `max(0, max_i(x_i - c_i))`; zero when bounded.
    pub max_excess: Q,
    /// Agent whose award sits closest to (or furthest above) its claim.
    pub worst_agent: usize,
}

/// Check `x_i <= c_i` for every agent.
pub fn claims_bounded<Q: Quantity>(p: &Problem<Q>, x: &Allocation<Q>) -> BoundednessReport<Q> {
    assert_eq!(p.len(), x.len(), "allocation does not match the problem");
    let mut worst_agent = 0;
    let mut worst_excess = x.award(0).clone() - p.claim(0).clone();
    for i in 1..p.len() {
        let excess = x.award(i).clone() - p.claim(i).clone();
        if excess > worst_excess {
            worst_excess = excess;
            worst_agent = i;
        }
    }
    // Backend slack: exact zero in rational mode, 1e-9 dust in float mode.
    let bounded = worst_excess <= Q::zero()
        || worst_excess.approx_eq(&Q::zero());
    let max_excess = if bounded { Q::zero() } else { worst_excess };
    BoundednessReport {
        bounded,
        max_excess,
        worst_agent,
    }
}

/// A minimal-parameter threshold for claims-boundedness.
#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdResult {
    pub family: Family,
    /// Minimal parameter value restoring claims-boundedness.
    pub threshold: f64,
    /// Feasible intervals as detected on the scan grid (closed, in grid
    /// resolution). For the averaging closed form this is the analytic
    /// `[threshold, 1]`.
    pub feasible_intervals: Vec<(f64, f64)>,
    /// Agent whose constraint is active at the threshold, when one is.
    pub binding_agent: Option<usize>,
    /// Refinement tolerance the search honoured.
    pub tol: f64,
    /// Set when the feasible set appeared as multiple disjoint intervals;
    /// the reported threshold then only bounds the interval reaching the
    /// upper end of the parameter range.
    pub warning: Option<String>,
    /// For the closed-form averaging threshold: which branch applied.
    pub formula_path: Option<&'static str>,
}

/// Minimal γ making the geometric rule claims-bounded on `p`.
///
/// Scans γ over `[0, 1]` at step 1e-3, collects feasible intervals, then
/// bisects the lower boundary of the interval containing γ = 1 until the
/// bracket is narrower than `tol` and reports its midpoint. The midpoint
/// sits within `tol/2` of the true boundary, so `threshold + tol` is
/// feasible and `threshold - tol` is not. γ = 1 (the proportional
/// boundary) is always feasible, so a result always exists.
pub fn min_gamma_claims_bounded(p: &Problem<f64>, tol: f64) -> ThresholdResult {
    assert!(tol > 0.0, "tolerance must be positive");
    let feasible = |g: f64| {
        let gamma = GammaParam::new(g.clamp(0.0, 1.0)).expect("clamped to [0, 1]");
        claims_bounded(p, &geometric(p, &gamma)).bounded
    };

    let steps = (1.0 / SCAN_STEP).round() as usize;
    let grid: Vec<f64> = (0..=steps).map(|i| i as f64 / steps as f64).collect();
    let flags: Vec<bool> = grid.iter().map(|&g| feasible(g)).collect();

    let mut intervals: Vec<(f64, f64)> = Vec::new();
    let mut run_start: Option<usize> = None;
    for (i, &ok) in flags.iter().enumerate() {
        match (ok, run_start) {
            (true, None) => run_start = Some(i),
            (false, Some(s)) => {
                intervals.push((grid[s], grid[i - 1]));
                run_start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = run_start {
        intervals.push((grid[s], grid[steps]));
    }
    assert!(
        intervals.last().is_some_and(|&(_, hi)| hi == 1.0),
        "gamma = 1 must be feasible (proportional awards never exceed claims)"
    );

    let top = *intervals.last().expect("non-empty by the assertion above");
    let threshold = if top.0 == 0.0 {
        0.0
    } else {
        // Bracket: the grid point just below the interval is infeasible.
        let mut lo = top.0 - SCAN_STEP;
        let mut hi = top.0;
        while hi - lo > tol {
            let mid = 0.5 * (lo + hi);
            if feasible(mid) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    };

    let binding = claims_bounded(
        p,
        &geometric(p, &GammaParam::new(threshold).expect("threshold in [0, 1]")),
    )
    .worst_agent;
    let warning = (intervals.len() > 1).then(|| {
        format!(
            "feasible set is {} disjoint intervals on the scan grid; \
             the threshold refers to the interval reaching gamma = 1",
            intervals.len()
        )
    });
    ThresholdResult {
        family: Family::Geometric,
        threshold,
        feasible_intervals: intervals,
        binding_agent: Some(binding),
        tol,
        warning,
        formula_path: None,
    }
}

/// Minimal λ making the averaging rule claims-bounded on `p` — closed
/// form.
///
/// Interior agents satisfy `λ (E/C) c_i <= c_i` for every λ in `[0, 1]`,
/// so only the mouth constrains: if `E <= c_n` even full transfer is
/// bounded (λ* = 0); otherwise `λ* = (E - c_n) / (E - (E/C) c_n)`.
pub fn min_lambda_claims_bounded<Q: Quantity>(p: &Problem<Q>) -> ThresholdResult {
    let n = p.len();
    let mouth_claim = p.claim(n - 1).clone();
    let budget = p.budget().clone();
    let (threshold, path, binding) = if budget <= mouth_claim {
        (0.0, "budget at most the mouth claim: every lambda is bounded", None)
    } else {
        let prop_mouth = p.budget_ratio() * mouth_claim.clone();
        let lambda = (budget.clone() - mouth_claim) / (budget - prop_mouth);
        (
            lambda.to_f64(),
            "mouth constraint: lambda* = (E - c_n) / (E - (E/C) c_n)",
            Some(n - 1),
        )
    };
    ThresholdResult {
        family: Family::Averaging,
        threshold,
        feasible_intervals: vec![(threshold, 1.0)],
        binding_agent: binding,
        tol: 0.0,
        warning: None,
        formula_path: Some(path),
    }
}

/// Award paths of the geometric family over a parameter grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult<Q: Quantity> {
    /// γ values, ascending in `[0, 1]`.
    pub grid: Vec<Q>,
    /// One balanced allocation per grid point.
    pub awards: Vec<Allocation<Q>>,
}

/// Evenly spaced parameter grid over `[0, 1]` (exact in rational mode).
pub fn uniform_grid<Q: Quantity>(points: usize) -> Vec<Q> {
    assert!(points >= 2, "a grid needs at least two points");
    (0..points)
        .map(|i| Q::ratio(i as i64, (points - 1) as i64))
        .collect()
}

/// Evaluate the geometric rule across a γ grid.
pub fn sweep_gamma<Q: Quantity>(p: &Problem<Q>, grid: &[Q]) -> Result<SweepResult<Q>, RuleError> {
    assert!(grid.len() >= 2, "a sweep needs at least two grid points");
    let mut awards = Vec::with_capacity(grid.len());
    for g in grid {
        let gamma = GammaParam::new(g.clone())?;
        awards.push(geometric(p, &gamma));
    }
    Ok(SweepResult {
        grid: grid.to_vec(),
        awards,
    })
}

/// For each agent, the γ maximizing its award.
///
/// Grid scan (step 1e-3) locates the best bracket, golden-section search
/// refines it to `tol`; ties break toward the smaller γ.
pub fn argmax_gamma_per_agent(p: &Problem<f64>, tol: f64) -> Vec<f64> {
    assert!(tol > 0.0, "tolerance must be positive");
    let award_at = |agent: usize, g: f64| {
        let gamma = GammaParam::new(g.clamp(0.0, 1.0)).expect("clamped to [0, 1]");
        *geometric(p, &gamma).award(agent)
    };
    let steps = (1.0 / SCAN_STEP).round() as usize;
    (0..p.len())
        .map(|agent| {
            let mut best_i = 0;
            let mut best = award_at(agent, 0.0);
            for i in 1..=steps {
                let g = i as f64 / steps as f64;
                let v = award_at(agent, g);
                if v > best {
                    best = v;
                    best_i = i;
                }
            }
            let mut a = (best_i.saturating_sub(1)) as f64 / steps as f64;
            let mut b = (best_i + 1).min(steps) as f64 / steps as f64;
            // Golden-section over the bracket; `>=` keeps the left
            // subinterval on ties, biasing toward smaller γ.
            let phi = (5f64.sqrt() - 1.0) / 2.0;
            while b - a > tol {
                let x1 = b - phi * (b - a);
                let x2 = a + phi * (b - a);
                if award_at(agent, x1) >= award_at(agent, x2) {
                    b = x2;
                } else {
                    a = x1;
                }
            }
            a.clamp(0.0, 1.0)
        })
        .collect()
}

/// Side-by-side geometric vs averaging awards over a shared parameter
/// list.
#[derive(Debug, Clone, PartialEq)]
pub struct FamilyComparison<Q: Quantity> {
    pub params: Vec<Q>,
    /// Geometric allocations, one per parameter.
    pub geometric: Vec<Allocation<Q>>,
    /// Averaging allocations, one per parameter.
    pub averaging: Vec<Allocation<Q>>,
}

/// Evaluate both families at each parameter in `params`.
pub fn compare_families<Q: Quantity>(
    p: &Problem<Q>,
    params: &[Q],
) -> Result<FamilyComparison<Q>, RuleError> {
    let mut geo = Vec::with_capacity(params.len());
    let mut avg = Vec::with_capacity(params.len());
    for v in params {
        geo.push(geometric(p, &GammaParam::new(v.clone())?));
        avg.push(averaging(p, &LambdaParam::new(v.clone())?));
    }
    Ok(FamilyComparison {
        params: params.to_vec(),
        geometric: geo,
        averaging: avg,
    })
}

/// Half-up rounding to two decimals for table rendering. Exact half-up
/// only as far as the binary representation allows; table comparisons
/// always allow ±0.01 on top.
pub fn round2(x: f64) -> f64 {
    (x * 100.0).round() / 100.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datasets;
    use crate::rules::{full_transfer, proportional};

    fn base() -> Problem<f64> {
        datasets::base_problem()
    }

    #[test]
    fn boundedness_flags_the_overdrawn_city() {
        let p = base();
        let geo = geometric(&p, &GammaParam::new(0.5).unwrap());
        let report = claims_bounded(&p, &geo);
        assert!(!report.bounded);
        assert_eq!(report.worst_agent, 2, "third city exceeds its claim most");
        assert!((report.max_excess - (11.9365 - 2.13)).abs() < 0.01);

        let avg = averaging(&p, &LambdaParam::new(0.5).unwrap());
        let report = claims_bounded(&p, &avg);
        assert!(!report.bounded);
        assert_eq!(report.worst_agent, 5, "mouth city exceeds its claim most");

        assert!(claims_bounded(&p, &proportional(&p)).bounded);
    }

    #[test]
    fn min_gamma_matches_the_known_thresholds() {
        for ((claims, budget), expected) in datasets::SMALL_CHAINS
            .iter()
            .zip(datasets::SMALL_CHAIN_MIN_GAMMA)
        {
            let p = Problem::<f64>::from_ints(claims, *budget);
            let result = min_gamma_claims_bounded(&p, DEFAULT_THRESHOLD_TOL);
            assert!(
                (result.threshold - expected).abs() <= 1e-3,
                "threshold for {claims:?}: got {}, want {expected}",
                result.threshold
            );
            assert_eq!(result.feasible_intervals.len(), 1);
            assert!(result.warning.is_none());
        }
    }

    #[test]
    fn min_gamma_agrees_with_the_exact_root_for_the_three_agent_chain() {
        let p = Problem::<f64>::from_ints(&[2, 2, 2], 4);
        let result = min_gamma_claims_bounded(&p, 1e-7);
        let exact = (3.0 - 3f64.sqrt()) / 2.0;
        assert!((result.threshold - exact).abs() <= 1e-6);
        // The mouth is the binding agent on this chain.
        assert_eq!(result.binding_agent, Some(2));
    }

    #[test]
    fn min_gamma_on_the_city_problem_binds_at_the_third_city() {
        let result = min_gamma_claims_bounded(&base(), DEFAULT_THRESHOLD_TOL);
        assert!((result.threshold - 0.989).abs() <= 1e-3);
        assert_eq!(result.binding_agent, Some(2));
    }

    #[test]
    fn min_lambda_closed_form() {
        let result = min_lambda_claims_bounded(&base());
        assert!((result.threshold - 0.9395).abs() <= 5e-3);
        assert_eq!(result.binding_agent, Some(5));
        assert!(result.formula_path.unwrap().contains("mouth constraint"));

        // Budget within the mouth claim: full transfer already bounded.
        let p = Problem::<f64>::from_ints(&[5, 5, 9], 9);
        let result = min_lambda_claims_bounded(&p);
        assert_eq!(result.threshold, 0.0);
        assert!(result.binding_agent.is_none());
    }

    #[test]
    fn min_lambda_agrees_with_a_search_oracle() {
        // Independent route: feasibility scan + bisection on λ.
        for p in [
            base(),
            datasets::equalized_problem(),
            datasets::swapped_problem(),
            Problem::<f64>::from_ints(&[2, 2, 2, 3], 4),
        ] {
            let feasible = |l: f64| {
                let lambda = LambdaParam::new(l.clamp(0.0, 1.0)).unwrap();
                claims_bounded(&p, &averaging(&p, &lambda)).bounded
            };
            let mut lo = 0.0;
            let mut hi = 1.0;
            assert!(feasible(hi));
            let searched = if feasible(lo) {
                0.0
            } else {
                while hi - lo > 1e-6 {
                    let mid = 0.5 * (lo + hi);
                    if feasible(mid) {
                        hi = mid;
                    } else {
                        lo = mid;
                    }
                }
                hi
            };
            let closed = min_lambda_claims_bounded(&p).threshold;
            assert!(
                (closed - searched).abs() <= 1e-5,
                "closed form {closed} vs search {searched}"
            );
        }
    }

    #[test]
    fn sweep_endpoints_recover_the_extreme_rules() {
        let p = base();
        let grid = uniform_grid::<f64>(5);
        let sweep = sweep_gamma(&p, &grid).unwrap();
        assert!(sweep.awards[0].approx_eq(&full_transfer(&p)));
        assert!(sweep.awards[4].approx_eq(&proportional(&p)));
        // The mouth's award path is non-increasing in γ.
        let mouth: Vec<f64> = sweep.awards.iter().map(|a| *a.award(5)).collect();
        assert!(mouth.windows(2).all(|w| w[1] <= w[0] + 1e-12));
    }

    #[test]
    fn argmax_endpoints_for_source_and_mouth() {
        let p = base();
        let maxima = argmax_gamma_per_agent(&p, 1e-4);
        assert!(maxima[0] >= 1.0 - 2e-3, "source award grows with γ");
        assert!(maxima[5] <= 2e-3, "mouth award shrinks with γ");
        // Interior cities peak strictly inside (0, 1).
        for &m in &maxima[2..5] {
            assert!(m > 0.01 && m < 0.99, "interior argmax, got {m}");
        }
    }

    #[test]
    fn comparison_matches_expected_cells() {
        let p = base();
        let params: Vec<f64> = datasets::PARAM_GRID
            .iter()
            .map(|&(n, d)| n as f64 / d as f64)
            .collect();
        let cmp = compare_families(&p, &params).unwrap();
        for (row, expected) in datasets::BASE_EXPECTED_GEOMETRIC.iter().enumerate() {
            for (col, want) in expected.iter().enumerate() {
                let got = *cmp.geometric[col].award(row);
                assert!(
                    (got - want).abs() <= 0.01,
                    "geometric cell ({row}, {col}): got {got}, want {want}"
                );
            }
        }
        for (row, expected) in datasets::BASE_EXPECTED_AVERAGING.iter().enumerate() {
            for (col, want) in expected.iter().enumerate() {
                let got = *cmp.averaging[col].award(row);
                assert!(
                    (got - want).abs() <= 0.01,
                    "averaging cell ({row}, {col}): got {got}, want {want}"
                );
            }
        }
    }

    #[test]
    fn rounding_is_half_up_at_two_decimals() {
        // 0.125 is binary-exact, so the half really is a half.
        assert_eq!(round2(0.125), 0.13);
        assert_eq!(round2(11.934), 11.93);
        assert_eq!(round2(16.636), 16.64);
    }
}
