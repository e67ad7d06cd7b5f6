//! f-belief operators, common f-belief and iterated f-belief.
//!
//! `B_i^f(A)` is the set of states at which player `i` assigns probability
//! at least `f_i(w)` to `A`. Common f-belief is the decreasing limit of
//! `D^{n+1} = B_1(D^n) ∩ B_2(D^n)` started from `D^0 = C`; iterated f-belief
//! is the player-indexed analogue that keeps each player's set inside `C_i`.
//! Both limits are reached after finitely many rounds on a finite space and
//! the intermediate rounds are kept for inspection.

use thiserror::Error;

use crate::belief_space::{BeliefSpace, Event, Player};
use crate::rational::{Extended, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OperatorError {
    #[error("threshold function of player {0} is not measurable for that player")]
    NotMeasurableThreshold(Player),
    #[error("event of player {0} is not measurable for that player")]
    NotMeasurable(Player),
}

/// A per-state threshold `f_i(w)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThresholdFunction {
    values: Vec<Extended>,
}

impl ThresholdFunction {
    pub fn new(values: Vec<Extended>) -> Self {
        ThresholdFunction { values }
    }

    pub fn constant(n: usize, value: Extended) -> Self {
        ThresholdFunction {
            values: vec![value; n],
        }
    }

    pub fn from_fn(n: usize, f: impl FnMut(usize) -> Extended) -> Self {
        ThresholdFunction {
            values: (0..n).map(f).collect(),
        }
    }

    pub fn value(&self, w: usize) -> &Extended {
        &self.values[w]
    }

    pub fn values(&self) -> &[Extended] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Constant on every cell of `player`'s information partition.
    pub fn is_measurable(&self, space: &BeliefSpace, player: Player) -> bool {
        self.values.len() == space.len()
            && space
                .information_partition(player)
                .cells()
                .iter()
                .all(|cell| {
                    let mut it = cell.iter();
                    match it.next() {
                        Some(first) => it.all(|w| self.values[w] == self.values[first]),
                        None => true,
                    }
                })
    }

    /// `{w : f(w) <= 0}`.
    pub fn nonpositive_set(&self) -> Event {
        Event::from_fn(self.values.len(), |w| !self.values[w].is_positive())
    }

    /// `{w : f(w) > 1}`.
    pub fn above_one_set(&self) -> Event {
        let one = Rational::from_integer(1.into());
        Event::from_fn(self.values.len(), |w| self.values[w].gt_rational(&one))
    }
}

/// Thresholds for both players, indexed by [`Player::index`].
pub type ThresholdPair = [ThresholdFunction; 2];

pub fn constant_pair(n: usize, value: Extended) -> ThresholdPair {
    [
        ThresholdFunction::constant(n, value.clone()),
        ThresholdFunction::constant(n, value),
    ]
}

fn check_pair_measurable(space: &BeliefSpace, f: &ThresholdPair) -> Result<(), OperatorError> {
    for player in Player::BOTH {
        if !f[player.index()].is_measurable(space, player) {
            return Err(OperatorError::NotMeasurableThreshold(player));
        }
    }
    Ok(())
}

/// `B_i^{f}(A) = {w : P_i(A | w) >= f(w)}`.
pub fn f_belief(
    space: &BeliefSpace,
    player: Player,
    f: &ThresholdFunction,
    event: &Event,
) -> Result<Event, OperatorError> {
    if !f.is_measurable(space, player) {
        return Err(OperatorError::NotMeasurableThreshold(player));
    }
    Ok(belief_unchecked(space, player, f, event))
}

// Posterior and threshold are constant on cells, so one evaluation per cell.
pub(crate) fn belief_unchecked(
    space: &BeliefSpace,
    player: Player,
    f: &ThresholdFunction,
    event: &Event,
) -> Event {
    let mut out = space.empty_event();
    for cell in space.information_partition(player).cells() {
        let Some(rep) = cell.iter().next() else { continue };
        let threshold = f.value(rep);
        let met = match threshold {
            Extended::NegInf => true,
            Extended::PosInf => false,
            Extended::Finite(t) => space.posterior(player, event, rep) >= *t,
        };
        if met {
            for w in cell.iter() {
                out.insert(w);
            }
        }
    }
    out
}

/// Result of the common f-belief iteration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommonBelief {
    /// `D^f(C)`.
    pub event: Event,
    /// `D^1, D^2, ...` up to and including the first repeated set.
    pub sequence: Vec<Event>,
    /// Number of strict decreases after `D^1`.
    pub rounds: usize,
}

/// `D^f(C)`: states at which `C` is common f-belief.
pub fn common_f_belief(
    space: &BeliefSpace,
    f: &ThresholdPair,
    c: &Event,
) -> Result<CommonBelief, OperatorError> {
    check_pair_measurable(space, f)?;
    Ok(common_unchecked(space, f, c))
}

fn everybody_believes(space: &BeliefSpace, f: &ThresholdPair, e: &Event) -> Event {
    belief_unchecked(space, Player::One, &f[0], e)
        .intersection(&belief_unchecked(space, Player::Two, &f[1], e))
}

pub(crate) fn common_unchecked(space: &BeliefSpace, f: &ThresholdPair, c: &Event) -> CommonBelief {
    let mut current = everybody_believes(space, f, c);
    let mut sequence = vec![current.clone()];
    let mut rounds = 0;
    loop {
        let next = everybody_believes(space, f, &current);
        // From D^1 on the sequence is decreasing.
        debug_assert!(next.is_subset(&current));
        if next == current {
            break;
        }
        rounds += 1;
        sequence.push(next.clone());
        current = next;
    }
    assert!(rounds <= space.len(), "common f-belief did not stabilise within |Ω| rounds");
    CommonBelief {
        event: current,
        sequence,
        rounds,
    }
}

/// Result of the iterated pair f-belief iteration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairBelief {
    /// `(D_1^f(C_1, C_2), D_2^f(C_2, C_1))`.
    pub events: [Event; 2],
    /// `(D_1^n, D_2^n)` for `n = 1, 2, ...` up to the first repeat.
    pub sequence: Vec<[Event; 2]>,
    pub rounds: usize,
}

/// Iterated f-belief of both players w.r.t. `(C_1, C_2)`.
pub fn iterated_pair_belief(
    space: &BeliefSpace,
    f: &ThresholdPair,
    c1: &Event,
    c2: &Event,
) -> Result<PairBelief, OperatorError> {
    check_pair_measurable(space, f)?;
    for (player, c) in Player::BOTH.into_iter().zip([c1, c2]) {
        if !space.is_measurable(player, c) {
            return Err(OperatorError::NotMeasurable(player));
        }
    }
    Ok(pair_unchecked(space, f, c1, c2))
}

pub(crate) fn pair_unchecked(space: &BeliefSpace, f: &ThresholdPair, c1: &Event, c2: &Event) -> PairBelief {
    let step = |prev: &[Event; 2]| -> [Event; 2] {
        [
            belief_unchecked(space, Player::One, &f[0], &prev[1]).intersection(&prev[0]),
            belief_unchecked(space, Player::Two, &f[1], &prev[0]).intersection(&prev[1]),
        ]
    };
    let mut current = step(&[c1.clone(), c2.clone()]);
    let mut sequence = vec![current.clone()];
    let mut rounds = 0;
    loop {
        let next = step(&current);
        if next == current {
            break;
        }
        rounds += 1;
        sequence.push(next.clone());
        current = next;
    }
    assert!(rounds <= 2 * space.len(), "iterated f-belief did not stabilise within 2|Ω| rounds");
    PairBelief {
        events: current,
        sequence,
        rounds,
    }
}

/// An evident event certifying that `C` is common f-belief at `state`:
/// returns `D = D^f(C)` when `state ∈ D`, after checking `D ⊆ B_i(C)` and
/// `D ⊆ B_i(D)` for both players.
pub fn evident_witness(
    space: &BeliefSpace,
    f: &ThresholdPair,
    c: &Event,
    state: usize,
) -> Option<Event> {
    let common = common_f_belief(space, f, c).ok()?;
    let d = common.event;
    if !d.contains(state) {
        return None;
    }
    let certified = Player::BOTH.into_iter().all(|player| {
        let fi = &f[player.index()];
        d.is_subset(&belief_unchecked(space, player, fi, c))
            && d.is_subset(&belief_unchecked(space, player, fi, &d))
    });
    assert!(certified, "common f-belief fixed point failed its evident-event check");
    Some(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::rational::q;
    use crate::stage_game::ThresholdProfile;

    fn pd_thresholds(space: &BeliefSpace) -> ThresholdProfile {
        ThresholdProfile::build(space, &fixtures::pd()).unwrap()
    }

    #[test]
    fn trivial_thresholds() {
        let s = fixtures::prisonerex1();
        let some = s.event(["(1/4,1/4)"]).unwrap();
        let zero = ThresholdFunction::constant(s.len(), Extended::zero());
        let inf = ThresholdFunction::constant(s.len(), Extended::PosInf);
        assert_eq!(f_belief(&s, Player::One, &zero, &some).unwrap(), s.full_event());
        assert!(f_belief(&s, Player::One, &inf, &some).unwrap().is_empty());
    }

    #[test]
    fn non_measurable_threshold_rejected() {
        let s = fixtures::prisonerex1();
        let f = ThresholdFunction::from_fn(s.len(), |w| {
            if w == 0 {
                Extended::zero()
            } else {
                Extended::one()
            }
        });
        assert_eq!(
            f_belief(&s, Player::One, &f, &s.full_event()),
            Err(OperatorError::NotMeasurableThreshold(Player::One))
        );
    }

    #[test]
    fn example1_belief_in_lambda2_is_lambda1() {
        let s = fixtures::prisonerex1();
        let t = pd_thresholds(&s);
        let b = f_belief(&s, Player::One, &t.f_pair()[0], t.lambda_region(Player::Two)).unwrap();
        assert_eq!(&b, t.lambda_region(Player::One));
    }

    #[test]
    fn example1_common_belief_of_lambda() {
        let s = fixtures::prisonerex1();
        let t = pd_thresholds(&s);
        let lambda = t.lambda_both();
        let d = common_f_belief(&s, t.f_pair(), &lambda).unwrap();
        let expected = s.event_from_fn(|w| s.lambda(w).iter().all(|l| *l >= q(1, 2)));
        assert_eq!(d.event, expected);
        let witness = evident_witness(&s, t.f_pair(), &lambda, s.state_index("(3/4,3/4)").unwrap());
        assert_eq!(witness, Some(expected));
    }

    #[test]
    fn common_belief_of_everything() {
        let s = fixtures::prisonerex2();
        let f = constant_pair(s.len(), Extended::one());
        assert_eq!(common_f_belief(&s, &f, &s.full_event()).unwrap().event, s.full_event());
        let zero = constant_pair(s.len(), Extended::zero());
        for w in 0..s.len() {
            assert_eq!(evident_witness(&s, &zero, &s.full_event(), w), Some(s.full_event()));
        }
    }

    #[test]
    fn example3_common_belief_is_middle_state() {
        let s = fixtures::prisonerex3();
        let t = pd_thresholds(&s);
        let d = common_f_belief(&s, t.f_pair(), &t.lambda_both()).unwrap();
        assert_eq!(d.event, s.event(["(1/2,1/2)"]).unwrap());
    }

    #[test]
    fn iterated_pair_examples() {
        let s = fixtures::prisonerex1();
        let t = pd_thresholds(&s);
        let (l1, l2) = (t.lambda_region(Player::One), t.lambda_region(Player::Two));
        let pair = iterated_pair_belief(&s, t.f_pair(), l1, l2).unwrap();
        assert_eq!(&pair.events[0], l1);
        assert_eq!(&pair.events[1], l2);
        let e = s.empty_event();
        let pair = iterated_pair_belief(&s, t.f_pair(), &e, &e).unwrap();
        assert!(pair.events.iter().all(Event::is_empty));

        let s = fixtures::example_new();
        let t = pd_thresholds(&s);
        let pair = iterated_pair_belief(
            &s,
            t.f_pair(),
            t.lambda_region(Player::One),
            t.lambda_region(Player::Two),
        )
        .unwrap();
        assert!(pair.sequence[0][0].is_empty());
        assert!(pair.events.iter().all(Event::is_empty));
        for w in 0..s.len() {
            assert_eq!(evident_witness(&s, t.f_pair(), &t.lambda_both(), w), None);
        }
    }

    #[test]
    fn iterated_pair_rejects_non_measurable() {
        let s = fixtures::prisonerex1();
        let t = pd_thresholds(&s);
        let single = s.event(["(1/2,1/2)"]).unwrap();
        assert_eq!(
            iterated_pair_belief(&s, t.f_pair(), &single, t.lambda_region(Player::Two)),
            Err(OperatorError::NotMeasurable(Player::One))
        );
    }
}

#[cfg(test)]
mod props {
    use super::*;
    use crate::fixtures;
    use crate::rational::q;
    use proptest::prelude::*;

    fn event(n: usize, mask: u32) -> Event {
        Event::from_fn(n, |w| mask & (1 << w) != 0)
    }

    proptest! {
        #[test]
        fn monotone_and_idempotent(a in 0u32..512, extra in 0u32..512, num in 0i64..8) {
            let s = fixtures::prisonerex2();
            let f = ThresholdFunction::constant(s.len(), Extended::Finite(q(num, 6)));
            let small = event(s.len(), a);
            let big = event(s.len(), a | extra);
            for p in Player::BOTH {
                let bs = f_belief(&s, p, &f, &small).unwrap();
                prop_assert!(bs.is_subset(&f_belief(&s, p, &f, &big).unwrap()));
                prop_assert_eq!(f_belief(&s, p, &f, &bs).unwrap(), bs);
            }
        }

        #[test]
        fn common_belief_is_evident(c in 0u32..512, num in 1i64..7) {
            let s = fixtures::prisonerex1();
            let f = constant_pair(s.len(), Extended::Finite(q(num, 6)));
            let c = event(s.len(), c);
            let d = common_f_belief(&s, &f, &c).unwrap();
            prop_assert!(d.rounds <= s.len());
            for w in d.event.iter() {
                prop_assert_eq!(evident_witness(&s, &f, &c, w), Some(d.event.clone()));
            }
        }
    }
}
