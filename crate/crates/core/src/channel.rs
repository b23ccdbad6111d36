//! Channel definition, power budgets, message power splits, and rate
//! containers shared by the rest of the toolkit.

use crate::{Error, Result};

/// Relative tolerance for the per-user power-sum equality checks.
pub const POWER_SUM_TOL: f64 = 1e-12;

/// One component Gaussian interference channel.
///
/// `Y1 = X1 + sqrt(b) X2 + Z1` and `Y2 = sqrt(a) X1 + X2 + Z2`, with
/// `X1 = U1 + V1`, `X2 = U2 + V2` and unit-variance noise at both
/// receivers. `a` and `b` are power gains.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelParams {
    pub a: f64,
    pub b: f64,
    pub p1: f64,
    pub p2: f64,
}

impl ChannelParams {
    /// Weak-interference constructor: requires `0 <= a < 1` and `0 <= b < 1`.
    pub fn weak(a: f64, b: f64, p1: f64, p2: f64) -> Result<Self> {
        let params = Self::general(a, b, p1, p2)?;
        if !params.is_weak() {
            return Err(Error::NonWeak { a, b });
        }
        Ok(params)
    }

    /// General constructor: accepts any `a, b >= 0`. Callers that need the
    /// weak regime check [`ChannelParams::is_weak`] themselves.
    pub fn general(a: f64, b: f64, p1: f64, p2: f64) -> Result<Self> {
        for (name, v) in [("a", a), ("b", b), ("p1", p1), ("p2", p2)] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::InvalidParam(name, v));
            }
        }
        Ok(Self { a, b, p1, p2 })
    }

    pub fn is_weak(&self) -> bool {
        self.a < 1.0 && self.b < 1.0
    }
}

/// Division of each user's budget between its public and private message.
///
/// All four entries are non-negative and per-user sums equal the budgets
/// exactly (relative tolerance `1e-12`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerSplit {
    pub pu1: f64,
    pub pv1: f64,
    pub pu2: f64,
    pub pv2: f64,
}

impl PowerSplit {
    pub fn new(params: &ChannelParams, pu1: f64, pv1: f64, pu2: f64, pv2: f64) -> Result<Self> {
        for (name, v) in [("pu1", pu1), ("pv1", pv1), ("pu2", pu2), ("pv2", pv2)] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::InvalidParam(name, v));
            }
        }
        let split = Self { pu1, pv1, pu2, pv2 };
        split.check_budgets(params)?;
        Ok(split)
    }

    /// Split from public fractions: `pu1 = t1 * p1`, `pu2 = t2 * p2`.
    pub fn from_fractions(params: &ChannelParams, t1: f64, t2: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&t1) {
            return Err(Error::InvalidParam("t1", t1));
        }
        if !(0.0..=1.0).contains(&t2) {
            return Err(Error::InvalidParam("t2", t2));
        }
        let pu1 = t1 * params.p1;
        let pu2 = t2 * params.p2;
        Ok(Self {
            pu1,
            pv1: params.p1 - pu1,
            pu2,
            pv2: params.p2 - pu2,
        })
    }

    pub fn check_budgets(&self, params: &ChannelParams) -> Result<()> {
        let check = |user: u8, sum: f64, budget: f64| -> Result<()> {
            if (sum - budget).abs() > POWER_SUM_TOL * budget.max(1.0) {
                return Err(Error::BudgetMismatch { user, sum, budget });
            }
            Ok(())
        };
        check(1, self.pu1 + self.pv1, params.p1)?;
        check(2, self.pu2 + self.pv2, params.p2)
    }

    /// Public fraction of user 1's budget (0 when the budget is zero).
    pub fn t1(&self, params: &ChannelParams) -> f64 {
        if params.p1 > 0.0 {
            self.pu1 / params.p1
        } else {
            0.0
        }
    }

    /// Public fraction of user 2's budget (0 when the budget is zero).
    pub fn t2(&self, params: &ChannelParams) -> f64 {
        if params.p2 > 0.0 {
            self.pu2 / params.p2
        } else {
            0.0
        }
    }
}

/// Direction of a within-user power move.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    TowardPublic,
    TowardPrivate,
    None,
}

/// Zero-sum power transfer between each user's public and private message.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Reallocation {
    pub dp1: f64,
    pub dir1: Direction,
    pub dp2: f64,
    pub dir2: Direction,
}

impl Reallocation {
    pub fn new(dp1: f64, dir1: Direction, dp2: f64, dir2: Direction) -> Result<Self> {
        for (name, v) in [("dp1", dp1), ("dp2", dp2)] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::InvalidParam(name, v));
            }
        }
        Ok(Self { dp1, dir1, dp2, dir2 })
    }

    pub const IDENTITY: Reallocation = Reallocation {
        dp1: 0.0,
        dir1: Direction::None,
        dp2: 0.0,
        dir2: Direction::None,
    };
}

/// Moves `dp1` within user 1 and `dp2` within user 2 per the directions.
///
/// Per-user sums are preserved exactly: the receiving message is computed
/// first and its partner is derived from the original sum. Rejects any move
/// that would drive a power negative.
pub fn apply_reallocation(split: &PowerSplit, r: &Reallocation) -> Result<PowerSplit> {
    let move_pair = |pub_p: f64, priv_p: f64, dp: f64, dir: Direction, user_names: (&'static str, &'static str)| -> Result<(f64, f64)> {
        let sum = pub_p + priv_p;
        match dir {
            Direction::None => Ok((pub_p, priv_p)),
            Direction::TowardPublic => {
                let new_priv = priv_p - dp;
                if new_priv < 0.0 {
                    return Err(Error::RejectedMove(user_names.1, new_priv));
                }
                let new_pub = sum - new_priv;
                Ok((new_pub, new_priv))
            }
            Direction::TowardPrivate => {
                let new_pub = pub_p - dp;
                if new_pub < 0.0 {
                    return Err(Error::RejectedMove(user_names.0, new_pub));
                }
                let new_priv = sum - new_pub;
                Ok((new_pub, new_priv))
            }
        }
    };
    let (pu1, pv1) = move_pair(split.pu1, split.pv1, r.dp1, r.dir1, ("pu1", "pv1"))?;
    let (pu2, pv2) = move_pair(split.pu2, split.pv2, r.dp2, r.dir2, ("pu2", "pv2"))?;
    Ok(PowerSplit { pu1, pv1, pu2, pv2 })
}

/// Per-message rates in bits per channel use.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateQuadruple {
    pub ru1: f64,
    pub rv1: f64,
    pub ru2: f64,
    pub rv2: f64,
}

impl RateQuadruple {
    pub const ZERO: RateQuadruple = RateQuadruple {
        ru1: 0.0,
        rv1: 0.0,
        ru2: 0.0,
        rv2: 0.0,
    };

    pub fn r1(&self) -> f64 {
        self.ru1 + self.rv1
    }

    pub fn r2(&self) -> f64 {
        self.ru2 + self.rv2
    }

    /// Weighted sum-rate `R1 + mu * R2`.
    pub fn weighted(&self, mu: f64) -> f64 {
        self.r1() + mu * self.r2()
    }
}

/// Metrics of one counterclockwise lower-boundary step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepMetrics {
    /// Slope `dr2 / dr1`.
    pub upsilon: f64,
    /// Euclidean step length `hypot(dr1, dr2)` in bits.
    pub gamma: f64,
    /// Drop in `R1` across the step (positive).
    pub dr1: f64,
    /// Gain in `R2` across the step (positive).
    pub dr2: f64,
}

/// Step metrics between two rate points on a counterclockwise move.
///
/// Requires `end.r2 > start.r2` and `end.r1 < start.r1`; both step
/// components are positive by convention.
pub fn step_metrics(start: &RateQuadruple, end: &RateQuadruple) -> Result<StepMetrics> {
    let dr1 = start.r1() - end.r1();
    let dr2 = end.r2() - start.r2();
    if dr1 <= 0.0 || dr2 <= 0.0 {
        return Err(Error::NotCounterclockwise { dr1, dr2 });
    }
    Ok(StepMetrics {
        upsilon: dr2 / dr1,
        gamma: dr1.hypot(dr2),
        dr1,
        dr2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> ChannelParams {
        ChannelParams::weak(0.25, 0.25, 1.0, 1.0).unwrap()
    }

    #[test]
    fn weak_constructor_flags_strong_gains() {
        assert!(matches!(
            ChannelParams::weak(1.5, 0.25, 1.0, 1.0),
            Err(Error::NonWeak { .. })
        ));
        assert!(ChannelParams::general(1.5, 0.25, 1.0, 1.0).is_ok());
        // Z-channel degenerations are accepted by both constructors.
        assert!(ChannelParams::weak(0.0, 0.25, 1.0, 1.0).is_ok());
    }

    #[test]
    fn reallocation_moves_power_between_messages() {
        let p = params();
        let split = PowerSplit::new(&p, 0.0, 1.0, 1.0, 0.0).unwrap();
        let r = Reallocation::new(0.0, Direction::None, 0.1, Direction::TowardPrivate).unwrap();
        let moved = apply_reallocation(&split, &r).unwrap();
        assert_eq!(moved.pu1, 0.0);
        assert_eq!(moved.pv1, 1.0);
        assert!((moved.pu2 - 0.9).abs() < 1e-15);
        assert!((moved.pv2 - 0.1).abs() < 1e-15);
    }

    #[test]
    fn identity_reallocation_is_a_noop() {
        let p = params();
        let split = PowerSplit::new(&p, 0.5, 0.5, 0.5, 0.5).unwrap();
        let moved = apply_reallocation(&split, &Reallocation::IDENTITY).unwrap();
        assert_eq!(moved, split);
    }

    #[test]
    fn reallocation_rejects_negative_power() {
        let p = params();
        let split = PowerSplit::new(&p, 0.0, 1.0, 1.0, 0.0).unwrap();
        let r = Reallocation::new(0.2, Direction::TowardPrivate, 0.0, Direction::None).unwrap();
        assert!(matches!(
            apply_reallocation(&split, &r),
            Err(Error::RejectedMove("pu1", _))
        ));
    }

    #[test]
    fn step_metrics_arithmetic() {
        let start = RateQuadruple { ru1: 0.5, rv1: 0.5, ru2: 0.1, rv2: 0.1 };
        let end = RateQuadruple { ru1: 0.4, rv1: 0.5, ru2: 0.2, rv2: 0.2 };
        let m = step_metrics(&start, &end).unwrap();
        assert!((m.dr1 - 0.1).abs() < 1e-15);
        assert!((m.dr2 - 0.2).abs() < 1e-15);
        assert!((m.upsilon - 2.0).abs() < 1e-12);
        assert!((m.gamma - 0.1f64.hypot(0.2)).abs() < 1e-15);
        assert!((m.gamma - 0.22360679774997896).abs() < 1e-12);
    }

    #[test]
    fn degenerate_step_is_rejected() {
        let r = RateQuadruple { ru1: 1.0, rv1: 0.0, ru2: 0.0, rv2: 0.0 };
        assert!(matches!(
            step_metrics(&r, &r),
            Err(Error::NotCounterclockwise { .. })
        ));
    }
}
