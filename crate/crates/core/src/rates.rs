//! Closed-form mutual-information and rate computations for independent
//! zero-mean Gaussian messages under the decoding structures used along
//! the region boundary: successive decoding of the public messages at one
//! receiver and joint decoding at the other.

use crate::channel::{ChannelParams, PowerSplit, RateQuadruple};
use crate::{rate_fn, Error, Result};
use std::ops::BitOr;

/// One of the two receivers.
///
/// `Y1` sees `X1 + sqrt(b) X2 + Z1`; `Y2` sees `sqrt(a) X1 + X2 + Z2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Receiver {
    Y1,
    Y2,
}

/// One of the four core messages.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Message {
    U1,
    V1,
    U2,
    V2,
}

impl Message {
    pub const ALL: [Message; 4] = [Message::U1, Message::V1, Message::U2, Message::V2];

    fn bit(self) -> u8 {
        match self {
            Message::U1 => 1,
            Message::V1 => 2,
            Message::U2 => 4,
            Message::V2 => 8,
        }
    }

    /// Power gain of this message at a receiver (applied to power, not
    /// amplitude): own-user messages have gain 1, cross-user messages have
    /// gain `b` at `Y1` and `a` at `Y2`.
    pub fn gain(self, params: &ChannelParams, rx: Receiver) -> f64 {
        match (self, rx) {
            (Message::U1 | Message::V1, Receiver::Y1) => 1.0,
            (Message::U2 | Message::V2, Receiver::Y1) => params.b,
            (Message::U1 | Message::V1, Receiver::Y2) => params.a,
            (Message::U2 | Message::V2, Receiver::Y2) => 1.0,
        }
    }

    pub fn power(self, split: &PowerSplit) -> f64 {
        match self {
            Message::U1 => split.pu1,
            Message::V1 => split.pv1,
            Message::U2 => split.pu2,
            Message::V2 => split.pv2,
        }
    }
}

/// A subset of the four core messages, used as signal or conditioning set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MessageSet(u8);

impl MessageSet {
    pub const EMPTY: MessageSet = MessageSet(0);
    pub const U1: MessageSet = MessageSet(1);
    pub const V1: MessageSet = MessageSet(2);
    pub const U2: MessageSet = MessageSet(4);
    pub const V2: MessageSet = MessageSet(8);

    pub fn of(messages: &[Message]) -> Self {
        MessageSet(messages.iter().fold(0, |acc, m| acc | m.bit()))
    }

    pub fn contains(&self, m: Message) -> bool {
        self.0 & m.bit() != 0
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn is_disjoint(&self, other: &MessageSet) -> bool {
        self.0 & other.0 == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = Message> + '_ {
        Message::ALL.into_iter().filter(|m| self.contains(*m))
    }
}

impl BitOr for MessageSet {
    type Output = MessageSet;
    fn bitor(self, rhs: MessageSet) -> MessageSet {
        MessageSet(self.0 | rhs.0)
    }
}

/// Exact Gaussian mutual information `I(signal; Y_rx | given)` in bits.
///
/// Conditioning on independent Gaussian messages removes them from the
/// output, so the value is `0.5 log2(1 + S / (N + 1))` with `S` the
/// gain-weighted signal power and `N` the gain-weighted power of every
/// message outside `signal` and `given`.
pub fn gaussian_mi(
    params: &ChannelParams,
    split: &PowerSplit,
    rx: Receiver,
    signal: MessageSet,
    given: MessageSet,
) -> Result<f64> {
    if signal.is_empty() {
        return Err(Error::EmptySignal);
    }
    if !signal.is_disjoint(&given) {
        return Err(Error::OverlappingSets);
    }
    let mut s = 0.0;
    let mut n = 0.0;
    for m in Message::ALL {
        let contribution = m.gain(params, rx) * m.power(split);
        if signal.contains(m) {
            s += contribution;
        } else if !given.contains(m) {
            n += contribution;
        }
    }
    Ok(rate_fn(s, n + 1.0))
}

/// Decoding structure active on a boundary segment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CodingStrategy {
    /// User 1 entirely private, user 2 entirely public-capable: the segment
    /// that starts at the maximum-`R1` corner.
    AllPrivate1Public2,
    /// Successive decoding of `U2` then `U1` at `Y2`, joint decoding of
    /// `(U1, U2)` at `Y1`; the lower-boundary (`mu < 1`) structure.
    SuccessiveAtY2,
    /// User-swapped mirror of [`CodingStrategy::SuccessiveAtY2`], serving
    /// the upper boundary (`mu > 1`).
    SuccessiveAtY1,
}

impl CodingStrategy {
    pub fn label(&self) -> &'static str {
        match self {
            CodingStrategy::AllPrivate1Public2 => "all_private1_public2",
            CodingStrategy::SuccessiveAtY2 => "sd_at_y2",
            CodingStrategy::SuccessiveAtY1 => "sd_at_y1",
        }
    }
}

/// Achievable rate quadruple of a strategy at a fixed split.
///
/// For [`CodingStrategy::SuccessiveAtY2`], the public rates sit at the
/// maximum-`ru1` vertex of the intersection of the successive chain at `Y2`
/// (`ru2 <= I(U2;Y2)`, `ru1 <= I(U1;Y2|U2)`) with the joint-decoding
/// constraints at `Y1` (`ru1 <= I(U1;Y1|U2)`, `ru2 <= I(U2;Y1|U1)`,
/// `ru1 + ru2 <= I(U1,U2;Y1)`); the private rates are
/// `I(V1;Y1|U1,U2)` and `I(V2;Y2|U1,U2)`. A receiver constrains a cross
/// message only when its cross gain is non-zero: with `a = 0` user 1 is
/// invisible at `Y2` and its public rate routes entirely through the `Y1`
/// joint bounds, and likewise for `b = 0` at `Y1`.
pub fn strategy_rates(
    params: &ChannelParams,
    split: &PowerSplit,
    strategy: CodingStrategy,
) -> Result<RateQuadruple> {
    split.check_budgets(params)?;
    match strategy {
        CodingStrategy::AllPrivate1Public2 => {
            // All of user 1's power carries its private message.
            let pv1 = split.pu1 + split.pv1;
            let (pu2, pv2) = (split.pu2, split.pv2);
            let ru2_y1 = rate_fn(params.b * pu2, pv1 + params.b * pv2 + 1.0);
            let ru2_y2 = rate_fn(pu2, params.a * pv1 + pv2 + 1.0);
            Ok(RateQuadruple {
                ru1: 0.0,
                rv1: rate_fn(pv1, params.b * pv2 + 1.0),
                ru2: ru2_y1.min(ru2_y2),
                rv2: rate_fn(pv2, params.a * pv1 + 1.0),
            })
        }
        CodingStrategy::SuccessiveAtY2 => successive_chain_rates(params, split),
        CodingStrategy::SuccessiveAtY1 => {
            let (sw_params, sw_split) = swap_users(params, split);
            let rates = successive_chain_rates(&sw_params, &sw_split)?;
            Ok(RateQuadruple {
                ru1: rates.ru2,
                rv1: rates.rv2,
                ru2: rates.ru1,
                rv2: rates.rv1,
            })
        }
    }
}

/// Swapped instance: user 1 and user 2 exchange roles (`a <-> b`).
pub fn swap_users(params: &ChannelParams, split: &PowerSplit) -> (ChannelParams, PowerSplit) {
    (
        ChannelParams {
            a: params.b,
            b: params.a,
            p1: params.p2,
            p2: params.p1,
        },
        PowerSplit {
            pu1: split.pu2,
            pv1: split.pv2,
            pu2: split.pu1,
            pv2: split.pv1,
        },
    )
}

fn successive_chain_rates(params: &ChannelParams, split: &PowerSplit) -> Result<RateQuadruple> {
    use Message::*;
    use Receiver::*;

    let mi = |rx, signal: &[Message], given: &[Message]| {
        gaussian_mi(params, split, rx, MessageSet::of(signal), MessageSet::of(given))
    };

    // ru1 bounds: Y1 joint decoding always applies to the own message; the
    // successive bound at Y2 applies only when user 1 is visible there.
    let mut ru1 = mi(Y1, &[U1], &[U2])?;
    if params.a > 0.0 {
        ru1 = ru1.min(mi(Y2, &[U1], &[U2])?);
    }
    if params.b > 0.0 {
        ru1 = ru1.min(mi(Y1, &[U1, U2], &[])?);
    }

    // ru2 bounds: decoded first at Y2; the Y1 joint bounds apply only when
    // user 2 is visible at Y1.
    let mut ru2 = mi(Y2, &[U2], &[])?;
    if params.b > 0.0 {
        ru2 = ru2.min(mi(Y1, &[U2], &[U1])?);
        ru2 = ru2.min(mi(Y1, &[U1, U2], &[])? - ru1);
    }
    ru2 = ru2.max(0.0);

    Ok(RateQuadruple {
        ru1,
        rv1: mi(Y1, &[V1], &[U1, U2])?,
        ru2,
        rv2: mi(Y2, &[V2], &[U1, U2])?,
    })
}

/// The maximum-`R1` corner of the region: user 1 entirely private, user 2
/// entirely public, with the corner's closed-form rates.
pub fn corner_max_r1(params: &ChannelParams) -> (PowerSplit, RateQuadruple) {
    let split = PowerSplit {
        pu1: 0.0,
        pv1: params.p1,
        pu2: params.p2,
        pv2: 0.0,
    };
    let rates = strategy_rates(params, &split, CodingStrategy::AllPrivate1Public2)
        .expect("corner split is always valid");
    (split, rates)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> ChannelParams {
        ChannelParams::weak(0.25, 0.25, 1.0, 1.0).unwrap()
    }

    fn c(signal: f64, noise: f64) -> f64 {
        0.5 * (1.0 + signal / noise).log2()
    }

    #[test]
    fn interference_free_private_rate() {
        let p = ChannelParams::weak(0.0, 0.0, 1.0, 1.0).unwrap();
        let split = PowerSplit::new(&p, 0.0, 1.0, 0.3, 0.7).unwrap();
        let v = gaussian_mi(
            &p,
            &split,
            Receiver::Y1,
            MessageSet::V1,
            MessageSet::U1 | MessageSet::U2,
        )
        .unwrap();
        assert!((v - 0.5).abs() < 1e-15);
    }

    #[test]
    fn cross_message_rate_at_y1() {
        let p = params();
        let split = PowerSplit::new(&p, 0.0, 1.0, 1.0, 0.0).unwrap();
        let v = gaussian_mi(&p, &split, Receiver::Y1, MessageSet::U2, MessageSet::EMPTY).unwrap();
        // 0.5 * log2(1 + 0.25 / 2) = 0.5 * log2(1.125)
        assert!((v - 0.08496250072115618).abs() < 1e-15);
    }

    #[test]
    fn overlapping_sets_are_rejected() {
        let p = params();
        let split = PowerSplit::new(&p, 0.5, 0.5, 0.5, 0.5).unwrap();
        assert!(matches!(
            gaussian_mi(
                &p,
                &split,
                Receiver::Y1,
                MessageSet::U1 | MessageSet::U2,
                MessageSet::U2
            ),
            Err(Error::OverlappingSets)
        ));
        assert!(matches!(
            gaussian_mi(&p, &split, Receiver::Y1, MessageSet::EMPTY, MessageSet::U2),
            Err(Error::EmptySignal)
        ));
    }

    #[test]
    fn chain_rule_is_exact() {
        let p = ChannelParams::weak(0.37, 0.12, 2.5, 0.8).unwrap();
        let split = PowerSplit::from_fractions(&p, 0.3, 0.6).unwrap();
        let joint =
            gaussian_mi(&p, &split, Receiver::Y2, MessageSet::U1 | MessageSet::U2, MessageSet::EMPTY)
                .unwrap();
        let first = gaussian_mi(&p, &split, Receiver::Y2, MessageSet::U2, MessageSet::EMPTY).unwrap();
        let second = gaussian_mi(&p, &split, Receiver::Y2, MessageSet::U1, MessageSet::U2).unwrap();
        assert!((joint - (first + second)).abs() < 1e-12);
    }

    #[test]
    fn corner_rates_match_closed_forms() {
        let p = params();
        let (split, rates) = corner_max_r1(&p);
        assert_eq!(split.pu1, 0.0);
        assert_eq!(split.pv1, 1.0);
        assert_eq!(split.pu2, 1.0);
        assert_eq!(split.pv2, 0.0);
        assert_eq!(rates.ru1, 0.0);
        assert_eq!(rates.rv2, 0.0);
        assert!((rates.rv1 - 0.5).abs() < 1e-15);
        assert!((rates.ru2 - 0.08496250072115618).abs() < 1e-15);
    }

    #[test]
    fn corner_with_zero_budget_user2() {
        let p = ChannelParams::weak(0.3, 0.3, 1.0, 0.0).unwrap();
        let (_, rates) = corner_max_r1(&p);
        assert!((rates.r1() - 0.5).abs() < 1e-15);
        assert_eq!(rates.r2(), 0.0);
    }

    #[test]
    fn corner_with_zero_cross_gains_flags_z_guard() {
        // With b = 0, U2 contributes nothing at Y1 and the corner's public
        // rate collapses to zero rather than dividing by the gain.
        let p = ChannelParams::weak(0.0, 0.0, 4.0, 4.0).unwrap();
        let (_, rates) = corner_max_r1(&p);
        assert!((rates.r1() - 0.5 * 5.0f64.log2()).abs() < 1e-12);
        assert!((rates.r1() - 1.160964047443681).abs() < 1e-12);
        assert_eq!(rates.r2(), 0.0);
    }

    #[test]
    fn decoupled_channels_with_private_only_messages() {
        let p = ChannelParams::weak(0.0, 0.0, 1.0, 1.0).unwrap();
        let split = PowerSplit::new(&p, 0.0, 1.0, 0.0, 1.0).unwrap();
        let rates = strategy_rates(&p, &split, CodingStrategy::SuccessiveAtY2).unwrap();
        assert_eq!(rates.ru1, 0.0);
        assert_eq!(rates.ru2, 0.0);
        assert!((rates.rv1 - 0.5).abs() < 1e-15);
        assert!((rates.rv2 - 0.5).abs() < 1e-15);
    }

    #[test]
    fn first_segment_endpoint_matches_closed_forms() {
        // End of the first boundary step from the corner with 0.05 power
        // moved from U2 to V2; expected values from the independent C(.,.)
        // route: ru2 is Y1-governed in the weak regime.
        let p = params();
        let d = 0.05;
        let split = PowerSplit::new(&p, 0.0, 1.0, 1.0 - d, d).unwrap();
        let rates = strategy_rates(&p, &split, CodingStrategy::SuccessiveAtY2).unwrap();
        let expected_rv1 = c(1.0, 0.25 * d + 1.0);
        let expected_ru2 = c(0.25 * (1.0 - d), 1.0 + 0.25 * d + 1.0);
        let expected_rv2 = c(d, 0.25 + 1.0);
        assert_eq!(rates.ru1, 0.0);
        assert!((rates.rv1 - expected_rv1).abs() < 1e-14);
        assert!((rates.ru2 - expected_ru2).abs() < 1e-14);
        assert!((rates.rv2 - expected_rv2).abs() < 1e-14);

        // The dedicated first-segment strategy agrees on this split.
        let alt = strategy_rates(&p, &split, CodingStrategy::AllPrivate1Public2).unwrap();
        assert!((alt.ru2 - rates.ru2).abs() < 1e-15);
        assert!((alt.rv1 - rates.rv1).abs() < 1e-15);
        assert!((alt.rv2 - rates.rv2).abs() < 1e-15);
    }

    #[test]
    fn mirror_strategy_swaps_users() {
        let p = ChannelParams::weak(0.2, 0.4, 1.5, 0.7).unwrap();
        let split = PowerSplit::from_fractions(&p, 0.3, 0.6).unwrap();
        let direct = strategy_rates(&p, &split, CodingStrategy::SuccessiveAtY1).unwrap();
        let (sw_p, sw_s) = swap_users(&p, &split);
        let swapped = strategy_rates(&sw_p, &sw_s, CodingStrategy::SuccessiveAtY2).unwrap();
        assert_eq!(direct.ru1, swapped.ru2);
        assert_eq!(direct.rv1, swapped.rv2);
        assert_eq!(direct.ru2, swapped.ru1);
        assert_eq!(direct.rv2, swapped.rv1);
    }

    #[test]
    fn min_selection_never_exceeds_either_joint_bound() {
        let instances = [
            (0.25, 0.25, 1.0, 1.0),
            (0.5, 0.1, 2.0, 3.0),
            (0.9, 0.9, 1.0, 1.0),
            (0.05, 0.7, 0.4, 5.0),
        ];
        for (a, b, p1, p2) in instances {
            let p = ChannelParams::weak(a, b, p1, p2).unwrap();
            for i in 0..=4 {
                for j in 0..=4 {
                    let split =
                        PowerSplit::from_fractions(&p, i as f64 / 4.0, j as f64 / 4.0).unwrap();
                    let r = strategy_rates(&p, &split, CodingStrategy::SuccessiveAtY2).unwrap();
                    let j1 = gaussian_mi(
                        &p,
                        &split,
                        Receiver::Y1,
                        MessageSet::U1 | MessageSet::U2,
                        MessageSet::EMPTY,
                    )
                    .unwrap();
                    let j2 = gaussian_mi(
                        &p,
                        &split,
                        Receiver::Y2,
                        MessageSet::U1 | MessageSet::U2,
                        MessageSet::EMPTY,
                    )
                    .unwrap();
                    assert!(r.ru1 + r.ru2 <= j1 + 1e-12);
                    assert!(r.ru1 + r.ru2 <= j2 + 1e-12);
                }
            }
        }
    }
}
