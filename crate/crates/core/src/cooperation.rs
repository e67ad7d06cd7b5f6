//! Cooperation events: checking a pair `(K_1, K_2)`, constructing the
//! candidate pair from `(C_1, C_2)`, and exhaustive enumeration.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::belief_operators::{belief_unchecked, common_unchecked, pair_unchecked, CommonBelief};
use crate::belief_space::{BeliefSpace, Event, Player};
use crate::rational::{Extended, Rational};
use crate::stage_game::{GComponent, ThresholdProfile};

pub const DEFAULT_BUDGET: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoopError {
    #[error("event K{0} is not measurable for player {0}")]
    NotMeasurable(Player),
    #[error("C{0} is not contained in the region where player {0} can cooperate")]
    NotContainedInLambda(Player),
    #[error("{candidates} candidate pairs exceed the enumeration budget of {budget}")]
    TooLarge { candidates: u128, budget: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[default]
    Bayesian,
    Icr,
}

impl std::str::FromStr for Mode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "bayesian" => Ok(Mode::Bayesian),
            "icr" => Ok(Mode::Icr),
            other => Err(format!("unknown mode `{other}`")),
        }
    }
}

/// The quantity a witness was compared against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Bound {
    Lambda0,
    F,
    G1,
    G2,
    G3,
}

impl From<GComponent> for Bound {
    fn from(c: GComponent) -> Self {
        match c {
            GComponent::G1 => Bound::G1,
            GComponent::G2 => Bound::G2,
            GComponent::G3 => Bound::G3,
        }
    }
}

/// One violated inequality: for (a) `lhs = λ_i < rhs = λ⁰_i`, for (b)
/// `lhs = P_i(K_j|w) < rhs`, for (c) `lhs = P_i(K_j|w) > rhs`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub player: Player,
    pub state: String,
    #[serde(with = "crate::rational::text")]
    pub lhs: Rational,
    pub rhs: Extended,
    pub bound: Bound,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionOutcome {
    pub checked: bool,
    /// Per player, player 1 first.
    pub holds: [bool; 2],
    pub witness: Option<Witness>,
}

impl ConditionOutcome {
    pub fn passed(&self) -> bool {
        !self.checked || (self.holds[0] && self.holds[1])
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Conditions {
    pub a: ConditionOutcome,
    pub b: ConditionOutcome,
    pub c: ConditionOutcome,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CooperationReport {
    pub verdict: bool,
    pub mode: Mode,
    pub k1: Vec<String>,
    pub k2: Vec<String>,
    pub conditions: Conditions,
    /// ICR mode only: whether each `η*_i(K_i)` is rationalizable.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rationalizable: Option<[bool; 2]>,
}

/// `Λ_i`.
pub fn lambda_region(thresholds: &ThresholdProfile, player: Player) -> Event {
    thresholds.lambda_region(player).clone()
}

fn require_measurable(space: &BeliefSpace, k: [&Event; 2]) -> Result<(), CoopError> {
    for player in Player::BOTH {
        if !space.is_measurable(player, k[player.index()]) {
            return Err(CoopError::NotMeasurable(player));
        }
    }
    Ok(())
}

struct Violations {
    holds: [bool; 2],
    witness: Option<Witness>,
}

impl Violations {
    fn new() -> Self {
        Violations {
            holds: [true, true],
            witness: None,
        }
    }

    // Keeps the witness at the smallest state, player 1 first on ties.
    fn record(&mut self, space: &BeliefSpace, player: Player, w: usize, lhs: Rational, rhs: Extended, bound: Bound) {
        self.holds[player.index()] = false;
        let better = match &self.witness {
            None => true,
            Some(old) => {
                let old_w = space.state_index(&old.state).unwrap_or(usize::MAX);
                (w, player.index()) < (old_w, old.player.index())
            }
        };
        if better {
            self.witness = Some(Witness {
                player,
                state: space.state_name(w).to_string(),
                lhs,
                rhs,
                bound,
            });
        }
    }

    fn outcome(self, checked: bool) -> ConditionOutcome {
        ConditionOutcome {
            checked,
            holds: self.holds,
            witness: self.witness,
        }
    }
}

fn bound_for_c(thresholds: &ThresholdProfile, player: Player, w: usize) -> (Extended, Bound) {
    if thresholds.is_two_by_two() {
        (thresholds.f_pair()[player.index()].value(w).clone(), Bound::F)
    } else {
        let g = thresholds.g_at(player, w);
        let comp = g.binding.first().copied().unwrap_or(GComponent::G1);
        (g.value.clone(), comp.into())
    }
}

/// Evaluates conditions (a), (b) and (c) for `(K_1, K_2)`.
pub fn check_pair(
    space: &BeliefSpace,
    thresholds: &ThresholdProfile,
    k1: &Event,
    k2: &Event,
    mode: Mode,
) -> Result<CooperationReport, CoopError> {
    require_measurable(space, [k1, k2])?;
    let k = [k1, k2];
    let mut a = Violations::new();
    let mut b = Violations::new();
    let mut c = Violations::new();
    for player in Player::BOTH {
        let i = player.index();
        let own = k[i];
        let other = k[player.other().index()];
        let lambda_i = thresholds.lambda_region(player);
        let f = &thresholds.f_pair()[i];
        for cell in space.information_partition(player).cells() {
            let Some(w) = cell.iter().next() else { continue };
            if own.contains(w) {
                if !lambda_i.contains(w) {
                    a.record(
                        space,
                        player,
                        w,
                        space.discount(player, w).clone(),
                        Extended::Finite(thresholds.lambda0(player).clone()),
                        Bound::Lambda0,
                    );
                }
                let p = space.posterior(player, other, w);
                if !f.value(w).is_met_by(&p) {
                    b.record(space, player, w, p, f.value(w).clone(), Bound::F);
                }
            } else if mode == Mode::Bayesian {
                let p = space.posterior(player, other, w);
                let (rhs, bound) = bound_for_c(thresholds, player, w);
                if !rhs.bounds_above(&p) {
                    c.record(space, player, w, p, rhs, bound);
                }
            }
        }
    }
    let conditions = Conditions {
        a: a.outcome(true),
        b: b.outcome(true),
        c: c.outcome(mode == Mode::Bayesian),
    };
    let verdict = conditions.a.passed() && conditions.b.passed() && conditions.c.passed();
    let rationalizable = (mode == Mode::Icr).then(|| {
        [0, 1].map(|i| conditions.a.holds[i] && conditions.b.holds[i])
    });
    Ok(CooperationReport {
        verdict,
        mode,
        k1: space.event_names(k1),
        k2: space.event_names(k2),
        conditions,
        rationalizable,
    })
}

/// Verdict only, without building a report.
pub fn is_cooperation_pair(
    space: &BeliefSpace,
    thresholds: &ThresholdProfile,
    k1: &Event,
    k2: &Event,
    mode: Mode,
) -> Result<bool, CoopError> {
    require_measurable(space, [k1, k2])?;
    Ok(holds_unchecked(space, thresholds, [k1, k2], mode))
}

fn holds_unchecked(space: &BeliefSpace, thresholds: &ThresholdProfile, k: [&Event; 2], mode: Mode) -> bool {
    Player::BOTH.into_iter().all(|player| {
        let i = player.index();
        let own = k[i];
        let other = k[player.other().index()];
        if !own.is_subset(thresholds.lambda_region(player)) {
            return false;
        }
        let f = &thresholds.f_pair()[i];
        space.information_partition(player).cells().iter().all(|cell| {
            let Some(w) = cell.iter().next() else { return true };
            if own.contains(w) {
                f.value(w).is_met_by(&space.posterior(player, other, w))
            } else if mode == Mode::Bayesian {
                bound_for_c(thresholds, player, w).0.bounds_above(&space.posterior(player, other, w))
            } else {
                true
            }
        })
    })
}

/// Everything computed on the way to a candidate pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Candidate {
    pub pair: [Event; 2],
    /// `D^f(C_1 ∩ C_2)`.
    pub common: CommonBelief,
}

/// `(B_1^{f_1}(D^f(C_1 ∩ C_2)), B_2^{f_2}(D^f(C_1 ∩ C_2)))`.
pub fn candidate_pair(
    space: &BeliefSpace,
    thresholds: &ThresholdProfile,
    c1: &Event,
    c2: &Event,
) -> Result<Candidate, CoopError> {
    require_measurable(space, [c1, c2])?;
    for (player, c) in Player::BOTH.into_iter().zip([c1, c2]) {
        if !c.is_subset(thresholds.lambda_region(player)) {
            return Err(CoopError::NotContainedInLambda(player));
        }
    }
    let f = thresholds.f_pair();
    let common = common_unchecked(space, f, &c1.intersection(c2));
    let pair = [Player::One, Player::Two].map(|p| belief_unchecked(space, p, &f[p.index()], &common.event));
    debug_assert_eq!(pair, pair_unchecked(space, f, c1, c2).events);
    Ok(Candidate { pair, common })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LargestPair {
    pub candidate: Candidate,
    pub report: CooperationReport,
}

impl LargestPair {
    pub fn pair(&self) -> &[Event; 2] {
        &self.candidate.pair
    }
}

/// The candidate pair built from `(Λ_1, Λ_2)` together with its check.
pub fn largest_pair(space: &BeliefSpace, thresholds: &ThresholdProfile) -> LargestPair {
    let lambda = [
        thresholds.lambda_region(Player::One).clone(),
        thresholds.lambda_region(Player::Two).clone(),
    ];
    let candidate = candidate_pair(space, thresholds, &lambda[0], &lambda[1])
        .expect("Λ_i is measurable and contains itself");
    let report = check_pair(space, thresholds, &candidate.pair[0], &candidate.pair[1], Mode::Bayesian)
        .expect("candidate events are measurable");
    LargestPair { candidate, report }
}

/// Number of measurable pairs `(K_1, K_2)` with `K_i ⊆ Λ_i`.
pub fn candidate_count(space: &BeliefSpace, thresholds: &ThresholdProfile) -> u128 {
    Player::BOTH
        .into_iter()
        .map(|p| 1u128 << lambda_cells(space, thresholds, p).len().min(100))
        .product()
}

fn lambda_cells(space: &BeliefSpace, thresholds: &ThresholdProfile, player: Player) -> Vec<Event> {
    let region = thresholds.lambda_region(player);
    space
        .information_partition(player)
        .cells()
        .iter()
        .filter(|cell| cell.is_subset(region))
        .cloned()
        .collect()
}

fn unions(cells: &[Event], n: usize) -> Vec<Event> {
    let mut out = vec![Event::empty(n)];
    for cell in cells {
        let extended: Vec<Event> = out.iter().map(|e| e.union(cell)).collect();
        out.extend(extended);
    }
    out
}

/// All pairs of cooperation events, largest overlap first.
///
/// Only measurable `K_i ⊆ Λ_i` are tried since condition (a) rules out the
/// rest; the budget bounds the number of such candidates.
pub fn enumerate_pairs(
    space: &BeliefSpace,
    thresholds: &ThresholdProfile,
    mode: Mode,
    budget: u64,
) -> Result<Vec<[Event; 2]>, CoopError> {
    let candidates = candidate_count(space, thresholds);
    if candidates > budget as u128 {
        return Err(CoopError::TooLarge { candidates, budget });
    }
    let n = space.len();
    let first = unions(&lambda_cells(space, thresholds, Player::One), n);
    let second = unions(&lambda_cells(space, thresholds, Player::Two), n);
    let mut found = Vec::new();
    for k1 in &first {
        for k2 in &second {
            if holds_unchecked(space, thresholds, [k1, k2], mode) {
                found.push([k1.clone(), k2.clone()]);
            }
        }
    }
    sort_pairs(&mut found);
    Ok(found)
}

pub fn sort_pairs(pairs: &mut [[Event; 2]]) {
    let key = |p: &[Event; 2]| {
        (
            std::cmp::Reverse(p[0].intersection(&p[1]).len()),
            std::cmp::Reverse(p[0].len() + p[1].len()),
            p[0].iter().collect::<Vec<_>>(),
            p[1].iter().collect::<Vec<_>>(),
        )
    };
    pairs.sort_by_cached_key(key);
}

/// Budget from `COOPKIT_BUDGET`, else [`DEFAULT_BUDGET`].
pub fn budget_from_env() -> u64 {
    std::env::var("COOPKIT_BUDGET")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_BUDGET)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::rational::{int, q};

    fn pd_on(space: &BeliefSpace) -> ThresholdProfile {
        ThresholdProfile::build(space, &fixtures::pd()).unwrap()
    }

    fn ev(space: &BeliefSpace, player: Player, values: &[Rational]) -> Event {
        space.event_from_fn(|w| values.contains(space.discount(player, w)))
    }

    #[test]
    fn example1_regions_and_pairs() {
        let s = fixtures::prisonerex1();
        let th = pd_on(&s);
        let l1 = lambda_region(&th, Player::One);
        assert_eq!(l1, ev(&s, Player::One, &[q(1, 2), q(3, 4)]));
        let largest = largest_pair(&s, &th);
        assert!(largest.report.verdict);
        assert_eq!(largest.pair()[0], l1);
        assert_eq!(largest.pair()[1], ev(&s, Player::Two, &[q(1, 2), q(3, 4)]));
        let k1 = ev(&s, Player::One, &[q(3, 4)]);
        let k2 = ev(&s, Player::Two, &[q(3, 4)]);
        assert!(check_pair(&s, &th, &k1, &k2, Mode::Bayesian).unwrap().verdict);
        let empty = s.empty_event();
        assert!(check_pair(&s, &th, &empty, &empty, Mode::Bayesian).unwrap().verdict);
    }

    #[test]
    fn example2_fails_condition_c() {
        let s = fixtures::prisonerex2();
        let th = pd_on(&s);
        let k1 = ev(&s, Player::One, &[q(3, 4)]);
        let k2 = ev(&s, Player::Two, &[q(3, 4)]);
        let r = check_pair(&s, &th, &k1, &k2, Mode::Bayesian).unwrap();
        assert!(!r.verdict);
        assert!(r.conditions.a.passed() && r.conditions.b.passed());
        let w = r.conditions.c.witness.unwrap();
        assert_eq!(w.lhs, q(2, 3));
        assert_eq!(w.rhs, Extended::Finite(q(1, 2)));
        assert_eq!(w.bound, Bound::F);
        let icr = check_pair(&s, &th, &k1, &k2, Mode::Icr).unwrap();
        assert!(icr.verdict);
        assert_eq!(icr.rationalizable, Some([true, true]));
        let pairs = enumerate_pairs(&s, &th, Mode::Bayesian, DEFAULT_BUDGET).unwrap();
        let top = [ev(&s, Player::One, &[q(1, 2), q(3, 4)]), ev(&s, Player::Two, &[q(1, 2), q(3, 4)])];
        assert_eq!(pairs, vec![top, [s.empty_event(), s.empty_event()]]);
    }

    #[test]
    fn example3_unique_pair() {
        let s = fixtures::prisonerex3();
        let th = pd_on(&s);
        let half = [ev(&s, Player::One, &[q(1, 2)]), ev(&s, Player::Two, &[q(1, 2)])];
        let largest = largest_pair(&s, &th);
        assert_eq!(largest.pair(), &half);
        assert!(largest.report.verdict);
        let pairs = enumerate_pairs(&s, &th, Mode::Bayesian, DEFAULT_BUDGET).unwrap();
        assert_eq!(pairs, vec![half, [s.empty_event(), s.empty_event()]]);
    }

    #[test]
    fn example6_g1_witness_and_smaller_pair() {
        let s = fixtures::example6();
        let th = ThresholdProfile::build(&s, &fixtures::g3x3(int(5))).unwrap();
        let largest = largest_pair(&s, &th);
        assert_eq!(largest.pair()[0], ev(&s, Player::One, &[q(1, 2), q(3, 4)]));
        assert!(!largest.report.verdict);
        let w = largest.report.conditions.c.witness.clone().unwrap();
        assert_eq!((w.lhs, w.rhs, w.bound), (q(2, 3), Extended::Finite(q(1, 2)), Bound::G1));
        assert_eq!(s.discount(w.player, s.state_index(&w.state).unwrap()), &q(1, 4));
        let c1 = ev(&s, Player::One, &[q(3, 4)]);
        let c2 = ev(&s, Player::Two, &[q(3, 4)]);
        let cand = candidate_pair(&s, &th, &c1, &c2).unwrap();
        assert_eq!(cand.pair, [c1.clone(), c2.clone()]);
        assert!(check_pair(&s, &th, &c1, &c2, Mode::Bayesian).unwrap().verdict);
    }

    #[test]
    fn candidate_rejects_events_outside_lambda() {
        let s = fixtures::prisonerex1();
        let th = pd_on(&s);
        let c1 = ev(&s, Player::One, &[q(1, 4)]);
        let c2 = th.lambda_region(Player::Two).clone();
        assert_eq!(
            candidate_pair(&s, &th, &c1, &c2).unwrap_err(),
            CoopError::NotContainedInLambda(Player::One)
        );
        let empty = s.empty_event();
        assert_eq!(candidate_pair(&s, &th, &empty, &empty).unwrap().pair, [empty.clone(), empty]);
    }

    #[test]
    fn unmeasurable_event_is_rejected() {
        let s = fixtures::prisonerex1();
        let th = pd_on(&s);
        let k1 = Event::from_indices(s.len(), [0]);
        let err = check_pair(&s, &th, &k1, &s.empty_event(), Mode::Bayesian).unwrap_err();
        assert_eq!(err, CoopError::NotMeasurable(Player::One));
    }

    #[test]
    fn example_new_has_only_the_trivial_pair() {
        let s = fixtures::example_new();
        let th = pd_on(&s);
        let largest = largest_pair(&s, &th);
        assert!(largest.pair()[0].is_empty() && largest.pair()[1].is_empty());
        let pairs = enumerate_pairs(&s, &th, Mode::Bayesian, DEFAULT_BUDGET).unwrap();
        assert_eq!(pairs.len(), 1);
    }

    #[test]
    fn budget_is_enforced() {
        let s = fixtures::prisonerex1();
        let th = pd_on(&s);
        assert!(matches!(
            enumerate_pairs(&s, &th, Mode::Bayesian, 3),
            Err(CoopError::TooLarge { .. })
        ));
    }

    #[test]
    fn complete_information_pairs_are_diagonal() {
        let s = fixtures::complete_info(&[q(1, 4), q(1, 2), q(3, 4)]);
        let th = pd_on(&s);
        let pairs = enumerate_pairs(&s, &th, Mode::Bayesian, DEFAULT_BUDGET).unwrap();
        let lambda = th.lambda_both();
        for [k1, k2] in &pairs {
            assert_eq!(k1, k2);
            assert!(k1.is_subset(&lambda));
        }
        assert_eq!(pairs.len(), 1 << lambda.len());
    }

    #[test]
    fn report_round_trips_through_json() {
        let s = fixtures::prisonerex2();
        let th = pd_on(&s);
        let k1 = ev(&s, Player::One, &[q(3, 4)]);
        let k2 = ev(&s, Player::Two, &[q(3, 4)]);
        let r = check_pair(&s, &th, &k1, &k2, Mode::Bayesian).unwrap();
        let text = serde_json::to_string(&r).unwrap();
        assert_eq!(serde_json::from_str::<CooperationReport>(&text).unwrap(), r);
        assert!(text.contains("\"lhs\":\"2/3\""));
    }
}
