//! Two-phase time-sharing envelope: one phase with both users active and
//! at most one phase with a single active user, plus the three-phase grid
//! search that verifies additional phases give no improvement.

use crate::channel::{ChannelParams, RateQuadruple};
use crate::trace::golden_max;
use crate::{rate_fn, Error, Result};
use rayon::prelude::*;

const DURATION_TOL: f64 = 1e-12;
const BUDGET_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ActiveUsers {
    Both,
    User1,
    User2,
}

/// One time-sharing phase with per-sample powers.
#[derive(Debug, Clone, Copy)]
pub struct Phase {
    pub duration: f64,
    pub power1: f64,
    pub power2: f64,
    pub active: ActiveUsers,
}

/// A schedule of phases; durations sum to one and time-averaged powers
/// meet the budgets exactly.
#[derive(Debug, Clone)]
pub struct PhasePlan {
    pub phases: Vec<Phase>,
}

impl PhasePlan {
    pub fn check(&self, params: &ChannelParams) -> Result<()> {
        let total: f64 = self.phases.iter().map(|p| p.duration).sum();
        if (total - 1.0).abs() > DURATION_TOL {
            return Err(Error::InvalidParam("phase durations", total));
        }
        let avg1: f64 = self.phases.iter().map(|p| p.duration * p.power1).sum();
        let avg2: f64 = self.phases.iter().map(|p| p.duration * p.power2).sum();
        let tol1 = BUDGET_TOL * params.p1.max(1.0);
        let tol2 = BUDGET_TOL * params.p2.max(1.0);
        if (avg1 - params.p1).abs() > tol1 {
            return Err(Error::BudgetMismatch { user: 1, sum: avg1, budget: params.p1 });
        }
        if (avg2 - params.p2).abs() > tol2 {
            return Err(Error::BudgetMismatch { user: 2, sum: avg2, budget: params.p2 });
        }
        Ok(())
    }
}

/// One point of the time-sharing envelope.
#[derive(Debug, Clone)]
pub struct EnvelopePoint {
    pub mu: f64,
    pub plan: PhasePlan,
    pub r1: f64,
    pub r2: f64,
    pub objective: f64,
    /// Duration of the two-user phase (1 when the plan has one phase).
    pub omega: f64,
    pub single_user: Option<ActiveUsers>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SingleUserChoice {
    User1,
    User2,
    Auto,
}

/// Optimal weighted sum over splits for a two-user phase with the given
/// per-sample powers.
fn phase_value(
    base: &ChannelParams,
    mu: f64,
    p1: f64,
    p2: f64,
    fast: bool,
) -> (f64, RateQuadruple) {
    let params = ChannelParams { a: base.a, b: base.b, p1, p2 };
    let (resolution, tol, iters) = if fast { (9, 1e-6, 40) } else { (17, 1e-8, 200) };
    optimize_split_with(&params, mu, resolution, tol, iters)
}

/// Coarse-grid plus coordinate-descent maximization of the reduced region
/// value over split fractions, with configurable precision.
pub fn optimize_split_with(
    params: &ChannelParams,
    mu: f64,
    resolution: usize,
    tol: f64,
    max_iters: usize,
) -> (f64, RateQuadruple) {
    use crate::channel::PowerSplit;
    use crate::hk::reduced_region_value;

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
    for _ in 0..max_iters {
        let before = (t1, t2);
        let (c1, v1) = golden_max(|x| value(x, t2), (t1 - window).max(0.0), (t1 + window).min(1.0), tol);
        if v1 > best_v + 1e-15 {
            t1 = c1;
            best_v = v1;
        }
        let (c2, v2) = golden_max(|x| value(t1, x), (t2 - window).max(0.0), (t2 + window).min(1.0), tol);
        if v2 > best_v + 1e-15 {
            t2 = c2;
            best_v = v2;
        }
        window = (window * 0.5).max(tol);
        if (t1 - before.0).abs() < tol && (t2 - before.1).abs() < tol && window <= tol {
            break;
        }
    }
    let split = PowerSplit::from_fractions(params, t1, t2).expect("fractions in range");
    let (v, rates) = reduced_region_value(params, &split, mu).expect("valid split");
    (v, rates)
}

struct TwoPhaseBest {
    objective: f64,
    omega: f64,
    share: f64,
    phase_rates: RateQuadruple,
    solo: ActiveUsers,
}

/// Two-phase objective for a fixed two-user-phase duration; the solo user's
/// remaining budget fills the other phase and the inner share of the
/// both-phase power is optimized by golden section.
fn two_phase_at_omega(
    params: &ChannelParams,
    mu: f64,
    omega: f64,
    solo: ActiveUsers,
    fast: bool,
) -> (f64, f64, RateQuadruple) {
    debug_assert!(omega > 0.0 && omega <= 1.0);
    let weight_solo = match solo {
        ActiveUsers::User1 => 1.0,
        ActiveUsers::User2 => mu,
        ActiveUsers::Both => unreachable!(),
    };
    let eval = |share: f64| -> (f64, RateQuadruple) {
        let (p1, p2, solo_power) = match solo {
            ActiveUsers::User2 => (
                params.p1 / omega,
                share * params.p2 / omega,
                (1.0 - share) * params.p2 / (1.0 - omega).max(f64::MIN_POSITIVE),
            ),
            ActiveUsers::User1 => (
                share * params.p1 / omega,
                params.p2 / omega,
                (1.0 - share) * params.p1 / (1.0 - omega).max(f64::MIN_POSITIVE),
            ),
            ActiveUsers::Both => unreachable!(),
        };
        let (w, rates) = phase_value(params, mu, p1, p2, fast);
        let solo_rate = if omega < 1.0 {
            (1.0 - omega) * rate_fn(solo_power, 1.0)
        } else {
            0.0
        };
        (omega * w + weight_solo * solo_rate, rates)
    };
    if omega >= 1.0 {
        let (v, rates) = eval(1.0);
        return (v, 1.0, rates);
    }
    let n = 17;
    let mut best = (0.0_f64, f64::NEG_INFINITY);
    for i in 0..n {
        let s = i as f64 / (n - 1) as f64;
        let (v, _) = eval(s);
        if v > best.1 + 1e-15 {
            best = (s, v);
        }
    }
    let spacing = 1.0 / (n - 1) as f64;
    let (s_ref, v_ref) = golden_max(
        |s| eval(s).0,
        (best.0 - spacing).max(0.0),
        (best.0 + spacing).min(1.0),
        1e-8,
    );
    let (share, _) = if v_ref > best.1 { (s_ref, v_ref) } else { best };
    let (v, rates) = eval(share);
    (v, share, rates)
}

fn optimize_two_phase(
    params: &ChannelParams,
    mu: f64,
    solo: ActiveUsers,
    fast: bool,
) -> TwoPhaseBest {
    let n = 64;
    let mut best = TwoPhaseBest {
        objective: f64::NEG_INFINITY,
        omega: 1.0,
        share: 1.0,
        phase_rates: RateQuadruple::ZERO,
        solo,
    };
    for i in 1..=n {
        let omega = i as f64 / n as f64;
        let (v, share, rates) = two_phase_at_omega(params, mu, omega, solo, fast);
        if v > best.objective + 1e-15 {
            best = TwoPhaseBest { objective: v, omega, share, phase_rates: rates, solo };
        }
    }
    let spacing = 1.0 / n as f64;
    let (w_ref, v_ref) = golden_max(
        |w| two_phase_at_omega(params, mu, w, solo, fast).0,
        (best.omega - spacing).max(spacing * 0.1),
        (best.omega + spacing).min(1.0),
        1e-8,
    );
    if v_ref > best.objective {
        let (v, share, rates) = two_phase_at_omega(params, mu, w_ref, solo, fast);
        best = TwoPhaseBest { objective: v, omega: w_ref, share, phase_rates: rates, solo };
    }
    best
}

fn single_phase_point(params: &ChannelParams, mu: f64) -> EnvelopePoint {
    let (objective, rates) = phase_value(params, mu, params.p1, params.p2, false);
    EnvelopePoint {
        mu,
        plan: PhasePlan {
            phases: vec![Phase {
                duration: 1.0,
                power1: params.p1,
                power2: params.p2,
                active: ActiveUsers::Both,
            }],
        },
        r1: rates.r1(),
        r2: rates.r2(),
        objective,
        omega: 1.0,
        single_user: None,
    }
    }

/// Best (at most) two-phase plan for one weight.
///
/// `Auto` tries both single-user choices and the plain single-phase plan;
/// when the single-phase point already attains the envelope the returned
/// plan has one phase. Ties between single-user choices break toward
/// user 2.
pub fn two_phase_optimize(
    params: &ChannelParams,
    mu: f64,
    single_user: SingleUserChoice,
) -> Result<EnvelopePoint> {
    if mu <= 0.0 {
        return Err(Error::InvalidParam("mu", mu));
    }
    // Degenerate budgets collapse to a pure single-user plan.
    if params.p2 == 0.0 {
        let plan = PhasePlan {
            phases: vec![Phase { duration: 1.0, power1: params.p1, power2: 0.0, active: ActiveUsers::User1 }],
        };
        let r1 = rate_fn(params.p1, 1.0);
        return Ok(EnvelopePoint { mu, plan, r1, r2: 0.0, objective: r1, omega: 0.0, single_user: Some(ActiveUsers::User1) });
    }
    if params.p1 == 0.0 {
        let plan = PhasePlan {
            phases: vec![Phase { duration: 1.0, power1: 0.0, power2: params.p2, active: ActiveUsers::User2 }],
        };
        let r2 = rate_fn(params.p2, 1.0);
        return Ok(EnvelopePoint { mu, plan, r1: 0.0, r2, objective: mu * r2, omega: 0.0, single_user: Some(ActiveUsers::User2) });
    }

    let single = single_phase_point(params, mu);
    let candidates: Vec<ActiveUsers> = match single_user {
        SingleUserChoice::User1 => vec![ActiveUsers::User1],
        SingleUserChoice::User2 => vec![ActiveUsers::User2],
        SingleUserChoice::Auto => vec![ActiveUsers::User2, ActiveUsers::User1],
    };
    let mut best: Option<TwoPhaseBest> = None;
    for solo in candidates {
        let cand = optimize_two_phase(params, mu, solo, false);
        let better = match &best {
            None => true,
            Some(b) => cand.objective > b.objective + 1e-12,
        };
        if better {
            best = Some(cand);
        }
    }
    let best = best.expect("candidate list non-empty");

    if best.objective <= single.objective + 1e-12 || best.omega >= 1.0 - 1e-9 {
        return Ok(single);
    }

    let omega = best.omega;
    let share = best.share;
    let (r1, r2, plan) = match best.solo {
        ActiveUsers::User2 => {
            let solo_power = (1.0 - share) * params.p2 / (1.0 - omega);
            let solo_rate = rate_fn(solo_power, 1.0);
            (
                omega * best.phase_rates.r1(),
                omega * best.phase_rates.r2() + (1.0 - omega) * solo_rate,
                PhasePlan {
                    phases: vec![
                        Phase {
                            duration: omega,
                            power1: params.p1 / omega,
                            power2: share * params.p2 / omega,
                            active: ActiveUsers::Both,
                        },
                        Phase {
                            duration: 1.0 - omega,
                            power1: 0.0,
                            power2: solo_power,
                            active: ActiveUsers::User2,
                        },
                    ],
                },
            )
        }
        ActiveUsers::User1 => {
            let solo_power = (1.0 - share) * params.p1 / (1.0 - omega);
            let solo_rate = rate_fn(solo_power, 1.0);
            (
                omega * best.phase_rates.r1() + (1.0 - omega) * solo_rate,
                omega * best.phase_rates.r2(),
                PhasePlan {
                    phases: vec![
                        Phase {
                            duration: omega,
                            power1: share * params.p1 / omega,
                            power2: params.p2 / omega,
                            active: ActiveUsers::Both,
                        },
                        Phase {
                            duration: 1.0 - omega,
                            power1: solo_power,
                            power2: 0.0,
                            active: ActiveUsers::User1,
                        },
                    ],
                },
            )
        }
        ActiveUsers::Both => unreachable!(),
    };
    plan.check(params)?;
    Ok(EnvelopePoint {
        mu,
        plan,
        r1,
        r2,
        objective: r1 + mu * r2,
        omega,
        single_user: Some(best.solo),
    })
}

/// Envelope points over an ascending weight grid.
pub fn envelope_sweep(params: &ChannelParams, mu_grid: &[f64]) -> Result<Vec<EnvelopePoint>> {
    if mu_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParam("mu_grid", f64::NAN));
    }
    mu_grid
        .par_iter()
        .map(|&mu| two_phase_optimize(params, mu, SingleUserChoice::Auto))
        .collect()
}

/// Outcome of the three-phase refutation search.
#[derive(Debug, Clone)]
pub struct ThreePhaseReport {
    pub two_phase_objective: f64,
    pub three_phase_objective: f64,
    /// `max(0, three_phase - two_phase)`.
    pub improvement: f64,
    pub best: (f64, f64, f64, f64),
}

/// Grid-searches plans with one two-user phase plus two single-user phases
/// and reports the best improvement over the two-phase optimum.
///
/// The grid covers the two-user duration and the two diverted power
/// fractions at `resolution` points each; the split of the remaining time
/// between the two solo phases is optimized in closed form by golden
/// section, and the grid optimum is refined by coordinate descent.
pub fn three_phase_check(params: &ChannelParams, mu: f64, resolution: usize) -> Result<ThreePhaseReport> {
    if mu <= 0.0 {
        return Err(Error::InvalidParam("mu", mu));
    }
    let two = two_phase_optimize(params, mu, SingleUserChoice::Auto)?;

    let objective = |omega0: f64, phi1: f64, phi2: f64, fast: bool| -> f64 {
        if omega0 <= 0.0 || omega0 > 1.0 {
            return f64::NEG_INFINITY;
        }
        let (w, _) = phase_value(
            params,
            mu,
            (1.0 - phi1) * params.p1 / omega0,
            (1.0 - phi2) * params.p2 / omega0,
            fast,
        );
        let rest = 1.0 - omega0;
        let solo = if rest > 0.0 {
            let c1 = phi1 * params.p1;
            let c2 = phi2 * params.p2;
            let g = |sigma: f64| -> f64 {
                let t1 = sigma * rest;
                let t2 = (1.0 - sigma) * rest;
                let r1 = if t1 > 0.0 { t1 * rate_fn(c1 / t1, 1.0) } else { 0.0 };
                let r2 = if t2 > 0.0 { t2 * rate_fn(c2 / t2, 1.0) } else { 0.0 };
                r1 + mu * r2
            };
            let (_, v) = golden_max(g, 0.0, 1.0, 1e-9);
            v.max(g(0.0)).max(g(1.0))
        } else if phi1 > 0.0 || phi2 > 0.0 {
            return f64::NEG_INFINITY; // diverted power with no time to spend it
        } else {
            0.0
        };
        omega0 * w + solo
    };

    let n = resolution.max(4);
    let omega_axis: Vec<f64> = (1..=n).map(|i| i as f64 / n as f64).collect();
    let phi_axis: Vec<f64> = (0..n).map(|i| i as f64 / (n - 1) as f64).collect();
    let best = omega_axis
        .par_iter()
        .map(|&w0| {
            let mut local = (f64::NEG_INFINITY, w0, 0.0, 0.0);
            for &f1 in &phi_axis {
                for &f2 in &phi_axis {
                    let v = objective(w0, f1, f2, true);
                    if v > local.0 {
                        local = (v, w0, f1, f2);
                    }
                }
            }
            local
        })
        .reduce(
            || (f64::NEG_INFINITY, 0.0, 0.0, 0.0),
            |x, y| if x.0 >= y.0 { x } else { y },
        );

    // Refine the grid optimum with the precise inner optimizer.
    let (_, mut w0, mut f1, mut f2) = best;
    let mut window = 1.0 / n as f64;
    let mut v_best = objective(w0, f1, f2, false);
    for _ in 0..24 {
        let (cw, vw) = golden_max(|x| objective(x, f1, f2, false), (w0 - window).max(1e-6), (w0 + window).min(1.0), 1e-8);
        if vw > v_best {
            w0 = cw;
            v_best = vw;
        }
        let (c1, v1) = golden_max(|x| objective(w0, x, f2, false), (f1 - window).max(0.0), (f1 + window).min(1.0), 1e-8);
        if v1 > v_best {
            f1 = c1;
            v_best = v1;
        }
        let (c2, v2) = golden_max(|x| objective(w0, f1, x, false), (f2 - window).max(0.0), (f2 + window).min(1.0), 1e-8);
        if v2 > v_best {
            f2 = c2;
            v_best = v2;
        }
        window *= 0.5;
        if window < 1e-8 {
            break;
        }
    }

    Ok(ThreePhaseReport {
        two_phase_objective: two.objective,
        three_phase_objective: v_best,
        improvement: (v_best - two.objective).max(0.0),
        best: (w0, f1, f2, v_best),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_budget_user_collapses_to_single_user_plan() {
        let p = ChannelParams::weak(0.3, 0.3, 1.0, 0.0).unwrap();
        let point = two_phase_optimize(&p, 0.5, SingleUserChoice::Auto).unwrap();
        assert_eq!(point.plan.phases.len(), 1);
        assert_eq!(point.plan.phases[0].active, ActiveUsers::User1);
        assert!((point.r1 - 0.5).abs() < 1e-12);
        assert_eq!(point.r2, 0.0);
    }

    #[test]
    fn envelope_dominates_single_phase() {
        let p = ChannelParams::weak(0.9, 0.9, 1.0, 1.0).unwrap();
        for mu in [0.2, 0.5, 0.8, 1.0] {
            let single = single_phase_point(&p, mu);
            let point = two_phase_optimize(&p, mu, SingleUserChoice::Auto).unwrap();
            assert!(
                point.objective >= single.objective - 1e-10,
                "mu = {mu}: envelope {} < single {}",
                point.objective,
                single.objective
            );
            point.plan.check(&p).unwrap();
        }
    }

    #[test]
    fn low_interference_envelope_is_single_phase() {
        // Weak cross gains and small budgets: simultaneous transmission is
        // already concave, so the plan collapses to one phase.
        let p = ChannelParams::weak(0.1, 0.1, 0.5, 0.5).unwrap();
        let point = two_phase_optimize(&p, 0.6, SingleUserChoice::Auto).unwrap();
        if point.plan.phases.len() == 1 {
            assert!((point.omega - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn budget_conservation_on_emitted_plans() {
        let p = ChannelParams::weak(0.85, 0.7, 2.0, 3.0).unwrap();
        for mu in [0.3, 0.7] {
            let point = two_phase_optimize(&p, mu, SingleUserChoice::Auto).unwrap();
            point.plan.check(&p).unwrap();
        }
    }

    #[test]
    fn three_phase_never_helps_much_on_a_degenerate_region() {
        let p = ChannelParams::weak(0.0, 0.0, 1.0, 1.0).unwrap();
        let report = three_phase_check(&p, 0.5, 8).unwrap();
        assert!(report.improvement <= 1e-6, "improvement = {}", report.improvement);
    }
}
