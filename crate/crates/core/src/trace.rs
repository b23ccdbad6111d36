//! Boundary tracing for a component channel: a weighted-sum sweep over
//! power splits, the incremental power-reallocation step machinery with
//! its slope/length metrics and Pareto-minimal selection, and the
//! scaled-reallocation consistency checks.

use crate::channel::{
    step_metrics, ChannelParams, Direction, PowerSplit, RateQuadruple, Reallocation, StepMetrics,
};
use crate::hk::reduced_region_value;
use crate::rates::{corner_max_r1, strategy_rates, CodingStrategy};
use crate::{Error, Result};
use rayon::prelude::*;

/// Tie tolerance for metric-equivalent step candidates.
pub const METRIC_TIE_TOL: f64 = 1e-10;
/// Split-fraction tolerance for the sweep refinement.
pub const SPLIT_TOL: f64 = 1e-8;
/// Refinement iteration cap for the sweep optimizer.
pub const MAX_REFINE_ITERS: usize = 200;

/// One traced boundary point.
#[derive(Debug, Clone)]
pub struct BoundarySample {
    pub mu: f64,
    pub split: PowerSplit,
    pub rates: RateQuadruple,
    /// Metrics of the step into this sample; absent on the first sample.
    pub metrics: Option<StepMetrics>,
    pub strategy: CodingStrategy,
}

fn strategy_label_for_split(split: &PowerSplit, params: &ChannelParams) -> CodingStrategy {
    if split.pu1 <= 1e-15 * params.p1.max(1.0) {
        CodingStrategy::AllPrivate1Public2
    } else {
        CodingStrategy::SuccessiveAtY2
    }
}

/// Maximizes the reduced-region weighted sum over split fractions
/// `(t1, t2)` for one weight: coarse grid then coordinate descent with
/// golden-section refinement. Flat ties resolve toward smaller `t1`, then
/// smaller `t2`.
pub fn optimize_split(
    params: &ChannelParams,
    mu: f64,
    resolution: usize,
) -> Result<(f64, f64, f64, RateQuadruple)> {
    let value = |t1: f64, t2: f64| -> f64 {
        let split = PowerSplit::from_fractions(params, t1, t2).expect("fractions in range");
        reduced_region_value(params, &split, mu)
            .map(|(v, _)| v)
            .unwrap_or(f64::NEG_INFINITY)
    };

    let n = resolution.max(2);
    let spacing = 1.0 / (n - 1) as f64;
    let mut best = (0.0, 0.0, value(0.0, 0.0));
    for i in 0..n {
        let t1 = i as f64 * spacing;
        for j in 0..n {
            let t2 = j as f64 * spacing;
            let v = value(t1, t2);
            if v > best.2 + 1e-15 {
                best = (t1, t2, v);
            }
        }
    }

    let (mut t1, mut t2, mut best_v) = best;
    let mut window = spacing;
    for _ in 0..MAX_REFINE_ITERS {
        let before = (t1, t2);
        let (cand_t1, v1) = golden_max(|x| value(x, t2), (t1 - window).max(0.0), (t1 + window).min(1.0), SPLIT_TOL);
        if v1 > best_v + 1e-15 {
            t1 = cand_t1;
            best_v = v1;
        }
        let (cand_t2, v2) = golden_max(|x| value(t1, x), (t2 - window).max(0.0), (t2 + window).min(1.0), SPLIT_TOL);
        if v2 > best_v + 1e-15 {
            t2 = cand_t2;
            best_v = v2;
        }
        window = (window * 0.5).max(SPLIT_TOL);
        if (t1 - before.0).abs() < SPLIT_TOL && (t2 - before.1).abs() < SPLIT_TOL && window <= SPLIT_TOL {
            break;
        }
    }

    let split = PowerSplit::from_fractions(params, t1, t2)?;
    let (v, rates) = reduced_region_value(params, &split, mu)?;
    Ok((t1, t2, v, rates))
}

/// Golden-section maximization on `[lo, hi]`; returns the best abscissa
/// and value found.
pub fn golden_max<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > tol {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    let mid = 0.5 * (a + b);
    (mid, f(mid))
}

/// Sweeps the lower boundary over an ascending weight grid in `(0, 1]`.
///
/// Each sample maximizes the reduced weighted sum over split fractions;
/// samples come back in counterclockwise (ascending weight) order with
/// step metrics between consecutive samples.
pub fn sweep_boundary(
    params: &ChannelParams,
    mu_grid: &[f64],
    split_resolution: usize,
) -> Result<Vec<BoundarySample>> {
    if split_resolution < 16 {
        return Err(Error::InvalidParam("split_resolution", split_resolution as f64));
    }
    if mu_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParam("mu_grid", f64::NAN));
    }
    if let (Some(first), Some(last)) = (mu_grid.first(), mu_grid.last()) {
        if *first <= 0.0 || *last > 1.0 {
            return Err(Error::InvalidParam("mu", *first));
        }
    }

    let optima: Vec<_> = mu_grid
        .par_iter()
        .map(|&mu| optimize_split(params, mu, split_resolution).map(|r| (mu, r)))
        .collect::<Result<Vec<_>>>()?;

    let mut samples = Vec::with_capacity(optima.len());
    for (mu, (t1, t2, _v, rates)) in optima {
        let split = PowerSplit::from_fractions(params, t1, t2)?;
        let metrics = samples
            .last()
            .and_then(|prev: &BoundarySample| step_metrics(&prev.rates, &rates).ok());
        samples.push(BoundarySample {
            mu,
            split,
            rates,
            metrics,
            strategy: strategy_label_for_split(&split, params),
        });
    }
    Ok(samples)
}

/// One evaluated step candidate.
#[derive(Debug, Clone)]
pub struct StepCandidate {
    pub reallocation: Reallocation,
    pub split: PowerSplit,
    pub rates: RateQuadruple,
    pub metrics: StepMetrics,
}

/// Valid counterclockwise candidates from a fixed start, with the selected
/// Pareto-minimal representative.
#[derive(Debug, Clone)]
pub struct StepCandidateSet {
    pub candidates: Vec<StepCandidate>,
    pub pareto: StepCandidate,
}

fn directions_for(strategy: CodingStrategy) -> (Direction, Direction) {
    match strategy {
        // Lower-boundary convention: user 2 privatizes, user 1 publicizes.
        CodingStrategy::AllPrivate1Public2 | CodingStrategy::SuccessiveAtY2 => {
            (Direction::TowardPublic, Direction::TowardPrivate)
        }
        CodingStrategy::SuccessiveAtY1 => (Direction::TowardPrivate, Direction::TowardPublic),
    }
}

fn evaluate_candidate(
    params: &ChannelParams,
    start: &BoundarySample,
    dp1: f64,
    dp2: f64,
    dirs: (Direction, Direction),
) -> Option<StepCandidate> {
    let dir1 = if dp1 > 0.0 { dirs.0 } else { Direction::None };
    let dir2 = if dp2 > 0.0 { dirs.1 } else { Direction::None };
    let reallocation = Reallocation { dp1, dir1, dp2, dir2 };
    let split = crate::channel::apply_reallocation(&start.split, &reallocation).ok()?;
    let rates = strategy_rates(params, &split, eval_strategy(start.strategy)).ok()?;
    let metrics = step_metrics(&start.rates, &rates).ok()?;
    Some(StepCandidate { reallocation, split, rates, metrics })
}

/// The successive-decoding evaluation subsumes the all-private first
/// segment (identical rates at `pu1 = 0`), so candidate end points are
/// always rated with the full chain of the active side.
fn eval_strategy(strategy: CodingStrategy) -> CodingStrategy {
    match strategy {
        CodingStrategy::AllPrivate1Public2 => CodingStrategy::SuccessiveAtY2,
        other => other,
    }
}

/// Evaluates a grid of reallocations from `start` and selects the boundary
/// step: among candidates not dominated in `(dr1, dr2)`, the minimal-slope
/// metric class, its maximal-length subset, and within it the
/// componentwise-minimal `(dp1, dp2)`.
pub fn step_candidates(
    params: &ChannelParams,
    start: &BoundarySample,
    dp_max1: f64,
    dp_max2: f64,
    n_candidates: usize,
) -> Result<StepCandidateSet> {
    let dirs = directions_for(start.strategy);
    let n = n_candidates.max(2);
    let axis = |max: f64| -> Vec<f64> {
        if max <= 0.0 {
            vec![0.0]
        } else {
            (0..n).map(|i| max * i as f64 / (n - 1) as f64).collect()
        }
    };
    // Clamp budgets to the power available in the donating message.
    let avail1 = match dirs.0 {
        Direction::TowardPublic => start.split.pv1,
        Direction::TowardPrivate => start.split.pu1,
        Direction::None => 0.0,
    };
    let avail2 = match dirs.1 {
        Direction::TowardPublic => start.split.pv2,
        Direction::TowardPrivate => start.split.pu2,
        Direction::None => 0.0,
    };

    let mut candidates = Vec::new();
    for &dp1 in axis(dp_max1.min(avail1)).iter() {
        for &dp2 in axis(dp_max2.min(avail2)).iter() {
            if dp1 == 0.0 && dp2 == 0.0 {
                continue;
            }
            if let Some(c) = evaluate_candidate(params, start, dp1, dp2, dirs) {
                candidates.push(c);
            }
        }
    }
    if candidates.is_empty() {
        return Err(Error::EmptyCandidateSet);
    }

    // Admissible counterclockwise moves: drop candidates strictly dominated
    // in the step metrics (another candidate loses no more R1 and gains at
    // least as much R2).
    let frontier: Vec<StepCandidate> = candidates
        .iter()
        .filter(|c| {
            !candidates.iter().any(|o| {
                o.metrics.dr1 <= c.metrics.dr1 + 1e-15
                    && o.metrics.dr2 >= c.metrics.dr2 - 1e-15
                    && (o.metrics.dr1 < c.metrics.dr1 - 1e-15
                        || o.metrics.dr2 > c.metrics.dr2 + 1e-15)
            })
        })
        .cloned()
        .collect();

    let min_upsilon = frontier
        .iter()
        .map(|c| c.metrics.upsilon)
        .fold(f64::INFINITY, f64::min);
    let slope_class: Vec<&StepCandidate> = frontier
        .iter()
        .filter(|c| c.metrics.upsilon <= min_upsilon + METRIC_TIE_TOL)
        .collect();
    let max_gamma = slope_class
        .iter()
        .map(|c| c.metrics.gamma)
        .fold(f64::NEG_INFINITY, f64::max);
    let tied: Vec<&&StepCandidate> = slope_class
        .iter()
        .filter(|c| c.metrics.gamma >= max_gamma - METRIC_TIE_TOL)
        .collect();

    let min_dp1 = tied.iter().map(|c| c.reallocation.dp1).fold(f64::INFINITY, f64::min);
    let min_dp2 = tied.iter().map(|c| c.reallocation.dp2).fold(f64::INFINITY, f64::min);
    // The componentwise minimum over a metric-tied class is itself a valid
    // reallocation with the same metrics up to the tie tolerance; fall back
    // to the lexicographically smallest member if its evaluation drifts.
    let pareto = evaluate_candidate(params, start, min_dp1, min_dp2, dirs)
        .filter(|c| {
            (c.metrics.upsilon - min_upsilon).abs() <= 10.0 * METRIC_TIE_TOL
                && (c.metrics.gamma - max_gamma).abs() <= 10.0 * METRIC_TIE_TOL
        })
        .unwrap_or_else(|| {
            let mut sorted: Vec<&&StepCandidate> = tied.clone();
            sorted.sort_by(|x, y| {
                (x.reallocation.dp1, x.reallocation.dp2)
                    .partial_cmp(&(y.reallocation.dp1, y.reallocation.dp2))
                    .unwrap()
            });
            (**sorted[0]).clone()
        });

    Ok(StepCandidateSet { candidates, pareto })
}

/// Result of an incremental trace: samples in counterclockwise order plus
/// the step indices at which the coding strategy changed.
#[derive(Debug, Clone)]
pub struct TraceResult {
    pub samples: Vec<BoundarySample>,
    pub segment_switches: Vec<usize>,
}

/// Traces the lower boundary from the maximum-`R1` corner by repeated
/// small power reallocations.
///
/// Each step advances user 2's privatization by the scheduled budget and
/// picks the user-1 component by the equivalent constrained program:
/// maximize the `R2` gain subject to the `R1` drop not exceeding the pure
/// user-2 step's (the two formulations agree for boundary-achieving
/// steps). Terminates when the step slope reaches 1 or the budget runs
/// out; strategy switches are detected from the selected reallocations.
pub fn trace_incremental(
    params: &ChannelParams,
    n_steps: usize,
    dp_schedule: &[(f64, f64)],
) -> Result<TraceResult> {
    if n_steps < 1 {
        return Err(Error::InvalidParam("n_steps", n_steps as f64));
    }
    let default_budget = 1e-3 * params.p1.min(params.p2).max(1e-6);
    let (corner_split, corner_rates) = corner_max_r1(params);
    let mut samples = vec![BoundarySample {
        mu: 0.0,
        split: corner_split,
        rates: corner_rates,
        metrics: None,
        strategy: CodingStrategy::AllPrivate1Public2,
    }];
    let mut switches = Vec::new();

    for step in 0..n_steps {
        let (m1, m2) = dp_schedule
            .get(step)
            .or(dp_schedule.last())
            .copied()
            .unwrap_or((default_budget, default_budget));
        let start = samples.last().unwrap().clone();
        let chosen = match select_step(params, &start, m1, m2) {
            Ok(c) => c,
            Err(Error::EmptyCandidateSet) => {
                // Segment change: retry once with the mirrored convention.
                let mirrored = BoundarySample {
                    strategy: CodingStrategy::SuccessiveAtY1,
                    ..start.clone()
                };
                match select_step(params, &mirrored, m1, m2) {
                    Ok(c) => {
                        switches.push(step);
                        c
                    }
                    Err(Error::EmptyCandidateSet) => break,
                    Err(e) => return Err(e),
                }
            }
            Err(e) => return Err(e),
        };

        let strategy = strategy_label_for_split(&chosen.split, params);
        if strategy != start.strategy && !samples.is_empty() {
            switches.push(step);
        }
        let upsilon = chosen.metrics.upsilon;
        samples.push(BoundarySample {
            mu: 1.0 / upsilon.max(1e-300),
            split: chosen.split,
            rates: chosen.rates,
            metrics: Some(chosen.metrics),
            strategy,
        });
        if upsilon <= 1.0 {
            break;
        }
    }
    Ok(TraceResult { samples, segment_switches: switches })
}

/// Step selection used by the tracer: cap the `R1` drop at the pure
/// user-2 full-budget step and maximize the `R2` gain within the cap.
fn select_step(
    params: &ChannelParams,
    start: &BoundarySample,
    m1: f64,
    m2: f64,
) -> Result<StepCandidate> {
    let dirs = directions_for(start.strategy);
    let n = 33;
    let avail1 = match dirs.0 {
        Direction::TowardPublic => start.split.pv1,
        Direction::TowardPrivate => start.split.pu1,
        Direction::None => 0.0,
    };
    let avail2 = match dirs.1 {
        Direction::TowardPublic => start.split.pv2,
        Direction::TowardPrivate => start.split.pu2,
        Direction::None => 0.0,
    };
    let cap1 = m1.min(avail1);
    let cap2 = m2.min(avail2);

    let mut candidates = Vec::new();
    for i in 0..n {
        let dp1 = cap1 * i as f64 / (n - 1) as f64;
        for j in 0..n {
            let dp2 = cap2 * j as f64 / (n - 1) as f64;
            if dp1 == 0.0 && dp2 == 0.0 {
                continue;
            }
            if let Some(c) = evaluate_candidate(params, start, dp1, dp2, dirs) {
                candidates.push(c);
            }
        }
    }
    if candidates.is_empty() {
        return Err(Error::EmptyCandidateSet);
    }

    let pure_step = candidates
        .iter()
        .filter(|c| c.reallocation.dp1 == 0.0 && c.reallocation.dp2 >= cap2 - 1e-18)
        .map(|c| c.metrics.dr1)
        .fold(f64::NEG_INFINITY, f64::max);
    let dr1_cap = if pure_step.is_finite() {
        pure_step
    } else {
        candidates.iter().map(|c| c.metrics.dr1).fold(f64::NEG_INFINITY, f64::max)
    };

    let mut best: Option<StepCandidate> = None;
    for c in candidates.into_iter() {
        if c.metrics.dr1 <= dr1_cap + 1e-15 {
            let better = match &best {
                None => true,
                Some(b) => {
                    c.metrics.dr2 > b.metrics.dr2 + METRIC_TIE_TOL
                        || ((c.metrics.dr2 - b.metrics.dr2).abs() <= METRIC_TIE_TOL
                            && (c.reallocation.dp1, c.reallocation.dp2)
                                < (b.reallocation.dp1, b.reallocation.dp2))
                }
            };
            if better {
                best = Some(c);
            }
        }
    }
    best.ok_or(Error::EmptyCandidateSet)
}

/// Scaled-reallocation consistency report for one segment.
#[derive(Debug, Clone)]
pub struct Theorem10Report {
    pub n_points: usize,
    pub gamma_monotone_violations: usize,
    pub upsilon_monotone_violations: usize,
    /// Violation counts of the five equivalent constrained programs
    /// (max length at a slope floor, max gain at a drop cap, min drop at a
    /// gain floor, max `R2` at an `R1` floor, max `R1` at an `R2` floor).
    pub program_violations: [usize; 5],
    pub max_violation: f64,
}

impl Theorem10Report {
    pub fn total_violations(&self) -> usize {
        self.gamma_monotone_violations
            + self.upsilon_monotone_violations
            + self.program_violations.iter().sum::<usize>()
    }
}

/// Verifies that scaling a segment's reallocation by `omega` produces a
/// non-decreasing length and non-increasing slope, and checks the five
/// equivalent constrained programs by pairwise value comparison.
pub fn verify_theorem10(
    params: &ChannelParams,
    segment: (&BoundarySample, &BoundarySample),
    omega_grid: &[f64],
    tol: f64,
) -> Result<Theorem10Report> {
    let (start, end) = segment;
    let strategy = eval_strategy(end.strategy);
    let scaled_split = |omega: f64| -> PowerSplit {
        let pu1 = start.split.pu1 + omega * (end.split.pu1 - start.split.pu1);
        let pu2 = start.split.pu2 + omega * (end.split.pu2 - start.split.pu2);
        PowerSplit {
            pu1,
            pv1: (start.split.pu1 + start.split.pv1) - pu1,
            pu2,
            pv2: (start.split.pu2 + start.split.pv2) - pu2,
        }
    };

    let mut points = Vec::new();
    for &omega in omega_grid {
        if omega <= 0.0 {
            continue;
        }
        let rates = strategy_rates(params, &scaled_split(omega), strategy)?;
        if let Ok(m) = step_metrics(&start.rates, &rates) {
            points.push((omega, rates, m));
        }
    }

    let mut report = Theorem10Report {
        n_points: points.len(),
        gamma_monotone_violations: 0,
        upsilon_monotone_violations: 0,
        program_violations: [0; 5],
        max_violation: 0.0,
    };
    let mut track = |count: &mut usize, violation: f64| {
        if violation > tol {
            *count += 1;
        }
        if violation > report.max_violation {
            report.max_violation = violation;
        }
    };

    for w in points.windows(2) {
        let (_, _, m0) = &w[0];
        let (_, _, m1) = &w[1];
        track(&mut report.gamma_monotone_violations, m0.gamma - m1.gamma);
        track(&mut report.upsilon_monotone_violations, m1.upsilon - m0.upsilon);
    }

    // Pairwise program checks anchored at each grid point.
    for (i, (_, ri, mi)) in points.iter().enumerate() {
        for (j, (_, rj, mj)) in points.iter().enumerate() {
            if i == j {
                continue;
            }
            if mj.upsilon >= mi.upsilon - tol {
                track(&mut report.program_violations[0], mj.gamma - mi.gamma);
            }
            if mj.dr1 <= mi.dr1 + tol {
                track(&mut report.program_violations[1], mj.dr2 - mi.dr2);
            }
            if mj.dr2 >= mi.dr2 - tol {
                track(&mut report.program_violations[2], mi.dr1 - mj.dr1);
            }
            if rj.r1() >= ri.r1() - tol {
                track(&mut report.program_violations[3], rj.r2() - ri.r2());
            }
            if rj.r2() >= ri.r2() - tol {
                track(&mut report.program_violations[4], rj.r1() - ri.r1());
            }
        }
    }
    Ok(report)
}

/// Anchored step metrics along a segment: metrics of the step from the
/// first sample to each later sample (the nested-steps view under which
/// the slope sequence is non-increasing and the length non-decreasing).
pub fn anchored_metrics(samples: &[BoundarySample]) -> Vec<StepMetrics> {
    let Some(anchor) = samples.first() else {
        return Vec::new();
    };
    samples
        .iter()
        .skip(1)
        .filter_map(|s| step_metrics(&anchor.rates, &s.rates).ok())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> ChannelParams {
        ChannelParams::weak(0.25, 0.25, 1.0, 1.0).unwrap()
    }

    fn corner_sample(p: &ChannelParams) -> BoundarySample {
        let (split, rates) = corner_max_r1(p);
        BoundarySample {
            mu: 0.0,
            split,
            rates,
            metrics: None,
            strategy: CodingStrategy::AllPrivate1Public2,
        }
    }

    #[test]
    fn corner_step_is_pure_user2_reallocation() {
        let p = params();
        let set = step_candidates(&p, &corner_sample(&p), 0.0, 0.05, 21).unwrap();
        assert_eq!(set.pareto.reallocation.dp1, 0.0);
        assert!((set.pareto.reallocation.dp2 - 0.05).abs() < 1e-12);
        assert!(set.pareto.metrics.upsilon > 1.0);
    }

    #[test]
    fn zero_budgets_give_empty_candidate_set() {
        let p = params();
        assert!(matches!(
            step_candidates(&p, &corner_sample(&p), 0.0, 0.0, 21),
            Err(Error::EmptyCandidateSet)
        ));
    }

    #[test]
    fn nested_steps_order_slope_and_length() {
        let p = params();
        let start = corner_sample(&p);
        let small = step_candidates(&p, &start, 0.0, 0.02, 21).unwrap().pareto;
        let large = step_candidates(&p, &start, 0.0, 0.04, 21).unwrap().pareto;
        assert!(large.metrics.upsilon <= small.metrics.upsilon + 1e-12);
        assert!(large.metrics.gamma >= small.metrics.gamma - 1e-12);
    }

    #[test]
    fn first_trace_step_reaches_the_schedule_budget() {
        let p = params();
        let trace = trace_incremental(&p, 1, &[(0.0, 0.05)]).unwrap();
        assert_eq!(trace.samples.len(), 2);
        let end = &trace.samples[1];
        assert!((end.split.pv2 - 0.05).abs() < 1e-12);
        // End rates match the closed forms checked in the rates module.
        let expected = strategy_rates(&p, &end.split, CodingStrategy::SuccessiveAtY2).unwrap();
        assert_eq!(end.rates, expected);
    }

    #[test]
    fn trace_on_decoupled_channel_stays_at_the_corner() {
        let p = ChannelParams::weak(0.0, 0.0, 1.0, 1.0).unwrap();
        let trace = trace_incremental(&p, 10, &[(1e-3, 1e-3)]).unwrap();
        assert_eq!(trace.samples.len(), 1);
        assert!(trace.segment_switches.is_empty());
    }

    #[test]
    fn sweep_limits_to_corner_at_small_weight() {
        let p = params();
        let samples = sweep_boundary(&p, &[1e-4], 17).unwrap();
        let s = &samples[0];
        let (corner_split, corner_rates) = corner_max_r1(&p);
        assert!((s.split.pu1 - corner_split.pu1).abs() < 1e-4);
        assert!((s.split.pv2 - corner_split.pv2).abs() < 1e-4);
        assert!((s.rates.r1() - corner_rates.r1()).abs() < 1e-4);
        assert!((s.rates.r2() - corner_rates.r2()).abs() < 1e-4);
    }

    #[test]
    fn sweep_on_decoupled_channel_prefers_private_power() {
        let p = ChannelParams::weak(0.0, 0.0, 1.0, 1.0).unwrap();
        let grid: Vec<f64> = (1..=5).map(|i| i as f64 / 5.0).collect();
        let samples = sweep_boundary(&p, &grid, 17).unwrap();
        for s in samples {
            assert!(s.split.pu1 < 1e-7, "pu1 = {}", s.split.pu1);
            assert!(s.split.pu2 < 1e-7, "pu2 = {}", s.split.pu2);
            assert!((s.rates.r1() - 0.5).abs() < 1e-7);
            assert!((s.rates.r2() - 0.5).abs() < 1e-7);
        }
    }

    #[test]
    fn sweep_rejects_bad_grids() {
        let p = params();
        assert!(sweep_boundary(&p, &[0.5, 0.3], 17).is_err());
        assert!(sweep_boundary(&p, &[0.5], 8).is_err());
        assert!(sweep_boundary(&p, &[0.5, 1.2], 17).is_err());
    }

    #[test]
    fn scaled_step_monotone_on_first_segment() {
        let p = params();
        let trace = trace_incremental(&p, 1, &[(0.0, 0.2)]).unwrap();
        let grid: Vec<f64> = (0..=64).map(|i| i as f64 / 64.0).collect();
        let report =
            verify_theorem10(&p, (&trace.samples[0], &trace.samples[1]), &grid, 1e-10).unwrap();
        assert_eq!(report.total_violations(), 0, "report: {report:?}");
        assert_eq!(report.n_points, 64);
    }

    #[test]
    fn omega_one_reproduces_segment_metrics() {
        let p = params();
        let trace = trace_incremental(&p, 1, &[(0.0, 0.1)]).unwrap();
        let seg = (&trace.samples[0], &trace.samples[1]);
        let rates = strategy_rates(&p, &seg.1.split, CodingStrategy::SuccessiveAtY2).unwrap();
        let m = step_metrics(&seg.0.rates, &rates).unwrap();
        let own = seg.1.metrics.unwrap();
        assert!((m.upsilon - own.upsilon).abs() < 1e-12);
        assert!((m.gamma - own.gamma).abs() < 1e-12);
    }
}
