//! The expanded Han-Kobayashi linear program over the four message rates,
//! its reduced equality forms, and numerical verification of the reduction
//! chain between them.

use crate::channel::{ChannelParams, PowerSplit, RateQuadruple};
use crate::rates::{gaussian_mi, strategy_rates, CodingStrategy, Message, MessageSet, Receiver};
use crate::simplex::{self, DenseLp};
use crate::Result;

/// Slack threshold below which a constraint counts as active.
pub const ACTIVE_TOL: f64 = 1e-9;

/// One upper bound of the Han-Kobayashi system: coefficient pattern over
/// `(ru1, ru2, rv1, rv2)` and its mutual-information right-hand side.
#[derive(Debug, Clone)]
pub struct HkConstraint {
    pub label: &'static str,
    pub coeffs: [f64; 4],
    pub rhs: f64,
}

/// The fourteen rate upper bounds of the expanded Han-Kobayashi region at a
/// fixed Gaussian power split.
#[derive(Debug, Clone)]
pub struct HkConstraintSet {
    pub constraints: Vec<HkConstraint>,
}

/// All fourteen right-hand sides evaluated with the exact Gaussian MI.
pub fn build_hk_constraints(params: &ChannelParams, split: &PowerSplit) -> Result<HkConstraintSet> {
    use Message::*;
    use Receiver::*;
    let mi = |rx, signal: &[Message], given: &[Message]| {
        gaussian_mi(params, split, rx, MessageSet::of(signal), MessageSet::of(given))
    };
    // Coefficient order: ru1, ru2, rv1, rv2.
    let constraints = vec![
        HkConstraint { label: "HK1", coeffs: [1., 0., 0., 0.], rhs: mi(Y1, &[U1], &[U2, V1])? },
        HkConstraint { label: "HK2", coeffs: [1., 0., 0., 0.], rhs: mi(Y2, &[U1], &[U2, V2])? },
        HkConstraint { label: "HK3", coeffs: [0., 1., 0., 0.], rhs: mi(Y1, &[U2], &[U1, V1])? },
        HkConstraint { label: "HK4", coeffs: [0., 1., 0., 0.], rhs: mi(Y2, &[U2], &[U1, V2])? },
        HkConstraint { label: "HK5", coeffs: [0., 0., 1., 0.], rhs: mi(Y1, &[V1], &[U1, U2])? },
        HkConstraint { label: "HK6", coeffs: [0., 0., 0., 1.], rhs: mi(Y2, &[V2], &[U1, U2])? },
        HkConstraint { label: "HK7", coeffs: [1., 1., 0., 0.], rhs: mi(Y1, &[U1, U2], &[V1])? },
        HkConstraint { label: "HK8", coeffs: [1., 1., 0., 0.], rhs: mi(Y2, &[U1, U2], &[V2])? },
        HkConstraint { label: "HK9", coeffs: [1., 0., 1., 0.], rhs: mi(Y1, &[U1, V1], &[U2])? },
        HkConstraint { label: "HK10", coeffs: [0., 1., 0., 1.], rhs: mi(Y2, &[U2, V2], &[U1])? },
        HkConstraint { label: "HK11", coeffs: [0., 1., 1., 0.], rhs: mi(Y1, &[U2, V1], &[U1])? },
        HkConstraint { label: "HK12", coeffs: [1., 0., 0., 1.], rhs: mi(Y2, &[U1, V2], &[U2])? },
        HkConstraint { label: "HK13", coeffs: [1., 1., 1., 0.], rhs: mi(Y1, &[U1, U2, V1], &[])? },
        HkConstraint { label: "HK14", coeffs: [1., 1., 0., 1.], rhs: mi(Y2, &[U1, U2, V2], &[])? },
    ];
    Ok(HkConstraintSet { constraints })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
}

/// Vertex optimum of the Han-Kobayashi linear program.
#[derive(Debug, Clone)]
pub struct LpSolution {
    pub rates: RateQuadruple,
    pub objective: f64,
    /// Labels of constraints tight at the optimum, including rate
    /// non-negativity entries.
    pub active_set: Vec<&'static str>,
    pub status: LpStatus,
    /// Set when the objective is flat along an edge of the optimal face;
    /// the reported vertex is then the lexicographically smallest in the
    /// order `(ru1, ru2, rv1, rv2)`.
    pub degenerate_flat: bool,
    /// Dual objective value, equal to the primal objective at optimum.
    pub dual_objective: f64,
}

const NONNEG_LABELS: [&str; 4] = ["ru1_nonneg", "ru2_nonneg", "rv1_nonneg", "rv2_nonneg"];

/// Maximizes `ru1 + rv1 + mu (ru2 + rv2)` over the fourteen inequalities
/// plus rate non-negativity.
pub fn solve_hk_lp(cs: &HkConstraintSet, mu: f64) -> Result<LpSolution> {
    let objective = vec![1.0, mu, 1.0, mu];
    let lp = DenseLp {
        objective: objective.clone(),
        constraints: cs
            .constraints
            .iter()
            .map(|c| (c.coeffs.to_vec(), c.rhs))
            .collect(),
    };
    let sol = simplex::solve(&lp, 10_000)?;
    let mut x = sol.x.clone();
    if sol.flat_optimum {
        x = lexicographic_vertex(&lp, sol.objective)?;
    }

    let mut active_set = Vec::new();
    for c in cs.constraints.iter() {
        let slack = c.rhs - dot(&c.coeffs, &x);
        if slack.abs() <= ACTIVE_TOL * (1.0 + c.rhs.abs()) {
            active_set.push(c.label);
        }
    }
    for (j, label) in NONNEG_LABELS.iter().enumerate() {
        if x[j].abs() <= ACTIVE_TOL {
            active_set.push(label);
        }
    }

    let rates = RateQuadruple {
        ru1: x[0],
        ru2: x[1],
        rv1: x[2],
        rv2: x[3],
    };
    Ok(LpSolution {
        objective: dot4(&objective, &x),
        rates,
        active_set,
        status: LpStatus::Optimal,
        degenerate_flat: sol.flat_optimum,
        dual_objective: sol.dual_objective(&lp),
    })
}

fn dot(coeffs: &[f64; 4], x: &[f64]) -> f64 {
    coeffs.iter().zip(x.iter()).map(|(c, v)| c * v).sum()
}

fn dot4(coeffs: &[f64], x: &[f64]) -> f64 {
    coeffs.iter().zip(x.iter()).map(|(c, v)| c * v).sum()
}

/// Resolves a flat optimum to its lexicographically smallest vertex by a
/// cascade of minimizations with the objective pinned.
fn lexicographic_vertex(lp: &DenseLp, optimum: f64) -> Result<Vec<f64>> {
    let n = lp.objective.len();
    let mut constraints = lp.constraints.clone();
    let neg_obj: Vec<f64> = lp.objective.iter().map(|c| -c).collect();
    constraints.push((neg_obj, -(optimum - 1e-11)));
    let mut x = vec![0.0; n];
    for k in 0..n {
        let mut min_obj = vec![0.0; n];
        min_obj[k] = -1.0;
        let sub = DenseLp {
            objective: min_obj,
            constraints: constraints.clone(),
        };
        let sol = simplex::solve(&sub, 10_000)?;
        x = sol.x;
        let mut pin = vec![0.0; n];
        pin[k] = 1.0;
        constraints.push((pin, x[k] + 1e-12));
    }
    Ok(x)
}

/// Value of the fully reduced equality system at a fixed split: the
/// successive-decoding rate quadruple and its weighted sum. The mirror
/// (user-swapped) branch serves `mu > 1`.
pub fn reduced_region_value(
    params: &ChannelParams,
    split: &PowerSplit,
    mu: f64,
) -> Result<(f64, RateQuadruple)> {
    let strategy = if mu <= 1.0 {
        CodingStrategy::SuccessiveAtY2
    } else {
        CodingStrategy::SuccessiveAtY1
    };
    let rates = strategy_rates(params, split, strategy)?;
    Ok((rates.weighted(mu), rates))
}

/// One pointwise implication check of the constraint-reduction chain.
#[derive(Debug, Clone)]
pub struct ReductionStep {
    pub label: &'static str,
    pub description: &'static str,
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
    pub tight: bool,
}

#[derive(Debug, Clone)]
pub struct ReductionReport {
    pub steps: Vec<ReductionStep>,
}

impl ReductionReport {
    pub fn all_hold(&self) -> bool {
        self.steps.iter().all(|s| s.holds)
    }

    pub fn violations(&self) -> usize {
        self.steps.iter().filter(|s| !s.holds).count()
    }
}

const REDUCTION_TOL: f64 = 1e-12;

/// Checks, by value comparison at this instance, each inequality that makes
/// a dropped constraint of the reduction chain redundant: the six
/// conditioning-monotonicity relations plus the two weak-interference
/// receiver orderings that select the lower-boundary branch.
pub fn verify_reduction_chain(
    params: &ChannelParams,
    split: &PowerSplit,
    _mu: f64,
) -> Result<ReductionReport> {
    use Message::*;
    use Receiver::*;
    let mi = |rx, signal: &[Message], given: &[Message]| {
        gaussian_mi(params, split, rx, MessageSet::of(signal), MessageSet::of(given))
    };
    let checks: [(&'static str, &'static str, f64, f64); 8] = [
        (
            "(a)",
            "I(U1;Y1|U2) <= I(U1;Y1|U2,V1)",
            mi(Y1, &[U1], &[U2])?,
            mi(Y1, &[U1], &[U2, V1])?,
        ),
        (
            "(b)",
            "I(U1;Y2|U2) <= I(U1;Y2|U2,V2)",
            mi(Y2, &[U1], &[U2])?,
            mi(Y2, &[U1], &[U2, V2])?,
        ),
        (
            "(c)",
            "I(U2;Y1|U1) <= I(U2;Y1|U1,V1)",
            mi(Y1, &[U2], &[U1])?,
            mi(Y1, &[U2], &[U1, V1])?,
        ),
        (
            "(d)",
            "I(U2;Y2|U1) <= I(U2;Y2|U1,V2)",
            mi(Y2, &[U2], &[U1])?,
            mi(Y2, &[U2], &[U1, V2])?,
        ),
        (
            "(e)",
            "I(U1,U2;Y1) <= I(U1,U2;Y1|V1)",
            mi(Y1, &[U1, U2], &[])?,
            mi(Y1, &[U1, U2], &[V1])?,
        ),
        (
            "(f)",
            "I(U1,U2;Y2) <= I(U1,U2;Y2|V2)",
            mi(Y2, &[U1, U2], &[])?,
            mi(Y2, &[U1, U2], &[V2])?,
        ),
        (
            "(g)",
            "I(U1;Y2|U2) <= I(U1;Y1|U2) in the weak regime",
            mi(Y2, &[U1], &[U2])?,
            mi(Y1, &[U1], &[U2])?,
        ),
        (
            "(h)",
            "I(U2;Y1|U1) <= I(U2;Y2|U1) in the weak regime",
            mi(Y1, &[U2], &[U1])?,
            mi(Y2, &[U2], &[U1])?,
        ),
    ];
    let steps = checks
        .into_iter()
        .map(|(label, description, lhs, rhs)| ReductionStep {
            label,
            description,
            lhs,
            rhs,
            holds: lhs <= rhs + REDUCTION_TOL,
            tight: (lhs - rhs).abs() <= REDUCTION_TOL,
        })
        .collect();
    Ok(ReductionReport { steps })
}
