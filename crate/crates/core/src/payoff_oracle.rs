//! Exact discounted payoffs of conditional grim trigger profiles and a
//! best-deviation search that does not use the threshold formulas.
//!
//! Under `η*(K_1, K_2)` a player at `w ∈ K_i` plays `τ_i` until the opponent
//! first leaves `τ_j` and `σ_i` from then on; at `w ∉ K_i` the player plays
//! `σ_i` forever. After stage 1 the opponent's type is revealed, because
//! `τ_j` lies outside the support of `σ_j`, so a best reply is a first-stage
//! action followed by a best reply to a known automaton. Those continuation
//! values are geometric sums:
//!
//! * opponent plays `σ_j` forever: `max_b u(b, σ_j) / (1 - λ)`;
//! * opponent is an untriggered grim trigger: the better of complying
//!   forever and deviating once to `a ≠ τ_i`, then the above.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use num_traits::{One, Signed, Zero};

use crate::belief_space::{BeliefSpace, Event, Player};
use crate::rational::{int, Rational};
use crate::stage_game::CooperationGame;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("event K{0} is not measurable for player {0}")]
    NotMeasurable(Player),
}

/// What a best reply does after stage 1 against an untriggered opponent.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "action")]
pub enum Continuation {
    /// Opponent was triggered or never cooperates: best reply to `σ_j`.
    Punish,
    /// Keep playing `τ_i` forever.
    Comply,
    /// Play this action once at stage 2, then best reply to `σ_j`.
    DeviateNext(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeviationEntry {
    pub player: Player,
    pub state: String,
    #[serde(with = "crate::rational::text")]
    pub conforming: Rational,
    #[serde(with = "crate::rational::text")]
    pub best: Rational,
    pub first_action: String,
    pub against_cooperator: Continuation,
    #[serde(with = "crate::rational::text")]
    pub gain: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeviationReport {
    /// Sorted by state, player 1 first.
    pub entries: Vec<DeviationEntry>,
    #[serde(with = "crate::rational::text")]
    pub max_gain: Rational,
}

impl DeviationReport {
    pub fn is_equilibrium(&self) -> bool {
        !self.max_gain.is_positive()
    }
}

fn require_measurable(space: &BeliefSpace, k1: &Event, k2: &Event) -> Result<(), OracleError> {
    for (player, k) in Player::BOTH.into_iter().zip([k1, k2]) {
        if !space.is_measurable(player, k) {
            return Err(OracleError::NotMeasurable(player));
        }
    }
    Ok(())
}

/// Discounted stream values for one player at one discount factor.
struct Streams<'a> {
    game: &'a CooperationGame,
    player: Player,
    lambda: Rational,
}

impl<'a> Streams<'a> {
    fn new(game: &'a CooperationGame, player: Player, lambda: Rational) -> Self {
        Streams { game, player, lambda }
    }

    fn n(&self) -> usize {
        self.game.game().actions(self.player).len()
    }

    fn forever(&self, u: &Rational) -> Rational {
        u / (Rational::one() - &self.lambda)
    }

    fn vs_tau(&self, a: usize) -> Rational {
        self.game
            .game()
            .payoff(self.player, a, self.game.tau(self.player.other()))
            .clone()
    }

    fn vs_sigma(&self, a: usize) -> Rational {
        self.game.game().against(self.player, a, self.game.sigma(self.player.other()))
    }

    fn sigma_vs(&self, opp: &[Rational]) -> Rational {
        self.game.game().expected(self.player, self.game.sigma(self.player), opp)
    }

    fn tau_j_pure(&self) -> Vec<Rational> {
        let other = self.player.other();
        crate::stage_game::pure(self.game.game().actions(other).len(), self.game.tau(other))
    }

    /// Best value against `σ_j` forever.
    fn v_sigma(&self) -> Rational {
        let best = (0..self.n()).map(|b| self.vs_sigma(b)).max().expect("nonempty action set");
        self.forever(&best)
    }

    /// Best value against an untriggered grim trigger from now on.
    fn v_untriggered(&self) -> (Rational, Continuation) {
        let tau_i = self.game.tau(self.player);
        let mut best = self.forever(&self.vs_tau(tau_i));
        let mut how = Continuation::Comply;
        let punish = self.v_sigma();
        for a in 0..self.n() {
            if a == tau_i {
                continue;
            }
            let v = self.vs_tau(a) + &self.lambda * &punish;
            if v > best {
                best = v;
                how = Continuation::DeviateNext(self.game.game().actions(self.player)[a].clone());
            }
        }
        (best, how)
    }
}

/// `γ_i(η*(K_1, K_2) | w)`.
pub fn conforming_payoff(
    space: &BeliefSpace,
    game: &CooperationGame,
    k1: &Event,
    k2: &Event,
    player: Player,
    state: usize,
) -> Result<Rational, OracleError> {
    require_measurable(space, k1, k2)?;
    let k = [k1, k2];
    let p = space.posterior(player, k[player.other().index()], state);
    let st = Streams::new(game, player, space.discount(player, state).clone());
    Ok(conforming_value(&st, &p, k[player.index()].contains(state)))
}

fn conforming_value(st: &Streams, p: &Rational, cooperates: bool) -> Rational {
    let tau_i = st.game.tau(st.player);
    let u_sigma = st.sigma_vs(st.game.sigma(st.player.other()));
    let punish_tail = &st.lambda * st.forever(&u_sigma);
    let q = Rational::one() - p;
    if cooperates {
        p * st.forever(&st.vs_tau(tau_i)) + q * (st.vs_sigma(tau_i) + punish_tail)
    } else {
        p * (st.sigma_vs(&st.tau_j_pure()) + &punish_tail) + q * st.forever(&u_sigma)
    }
}

/// Best reply value at `w` and the gain over conforming.
pub fn best_deviation(
    space: &BeliefSpace,
    game: &CooperationGame,
    k1: &Event,
    k2: &Event,
    player: Player,
    state: usize,
) -> Result<DeviationEntry, OracleError> {
    require_measurable(space, k1, k2)?;
    Ok(entry_unchecked(space, game, [k1, k2], player, state))
}

fn entry_unchecked(
    space: &BeliefSpace,
    game: &CooperationGame,
    k: [&Event; 2],
    player: Player,
    state: usize,
) -> DeviationEntry {
    let p = space.posterior(player, k[player.other().index()], state);
    let q = Rational::one() - &p;
    let st = Streams::new(game, player, space.discount(player, state).clone());
    let conforming = conforming_value(&st, &p, k[player.index()].contains(state));
    let tau_i = game.tau(player);
    let v_sigma = st.v_sigma();
    let (v_untriggered, comply_how) = st.v_untriggered();
    let mut best: Option<(Rational, usize)> = None;
    for a in 0..st.n() {
        let vs_cooperator = if a == tau_i { &v_untriggered } else { &v_sigma };
        let v = &p * (st.vs_tau(a) + &st.lambda * vs_cooperator) + &q * (st.vs_sigma(a) + &st.lambda * &v_sigma);
        if best.as_ref().is_none_or(|(b, _)| v > *b) {
            best = Some((v, a));
        }
    }
    let (best, a) = best.expect("nonempty action set");
    DeviationEntry {
        player,
        state: space.state_name(state).to_string(),
        gain: &best - &conforming,
        conforming,
        best,
        first_action: game.game().actions(player)[a].clone(),
        against_cooperator: if a == tau_i { comply_how } else { Continuation::Punish },
    }
}

/// Entries for every state and player.
pub fn deviation_report(
    space: &BeliefSpace,
    game: &CooperationGame,
    k1: &Event,
    k2: &Event,
) -> Result<DeviationReport, OracleError> {
    require_measurable(space, k1, k2)?;
    let mut entries = Vec::with_capacity(2 * space.len());
    for w in 0..space.len() {
        for player in Player::BOTH {
            entries.push(entry_unchecked(space, game, [k1, k2], player, w));
        }
    }
    let max_gain = entries.iter().map(|e| e.gain.clone()).max().unwrap_or_else(Rational::zero);
    Ok(DeviationReport { entries, max_gain })
}

/// Largest gain over states and players; evaluated once per information cell.
pub fn max_gain(space: &BeliefSpace, game: &CooperationGame, k1: &Event, k2: &Event) -> Result<Rational, OracleError> {
    require_measurable(space, k1, k2)?;
    let mut max = Rational::zero();
    for player in Player::BOTH {
        for cell in space.information_partition(player).cells() {
            let Some(w) = cell.iter().next() else { continue };
            let g = entry_unchecked(space, game, [k1, k2], player, w).gain;
            if g > max {
                max = g;
            }
        }
    }
    Ok(max)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquilibriumVerdict {
    pub holds: bool,
    #[serde(with = "crate::rational::text")]
    pub max_gain: Rational,
}

/// True iff no player gains by deviating at any state.
pub fn is_bayes_equilibrium(
    space: &BeliefSpace,
    game: &CooperationGame,
    k1: &Event,
    k2: &Event,
) -> Result<EquilibriumVerdict, OracleError> {
    let max_gain = max_gain(space, game, k1, k2)?;
    Ok(EquilibriumVerdict {
        holds: !max_gain.is_positive(),
        max_gain,
    })
}

/// True iff no deviation gains more than `eps`.
pub fn is_epsilon_equilibrium(
    space: &BeliefSpace,
    game: &CooperationGame,
    k1: &Event,
    k2: &Event,
    eps: &Rational,
) -> Result<EquilibriumVerdict, OracleError> {
    let max_gain = max_gain(space, game, k1, k2)?;
    Ok(EquilibriumVerdict {
        holds: max_gain <= *eps,
        max_gain,
    })
}

/// Value of conforming through stage `k - 1` and playing `action` at stage
/// `k >= 1`, then best replying. Only a cooperating player has anything to
/// delay; for `w ∉ K_i` this is the stage-1 value of `action`.
pub fn delayed_deviation_value(
    space: &BeliefSpace,
    game: &CooperationGame,
    k: [&Event; 2],
    player: Player,
    state: usize,
    stage: u32,
    action: usize,
) -> Rational {
    assert!(stage >= 1);
    let p = space.posterior(player, k[player.other().index()], state);
    let q = Rational::one() - &p;
    let st = Streams::new(game, player, space.discount(player, state).clone());
    let tau_i = game.tau(player);
    let v_sigma = st.v_sigma();
    let cooperates = k[player.index()].contains(state);
    if !cooperates || stage == 1 {
        let vs_cooperator = if action == tau_i { st.v_untriggered().0 } else { v_sigma.clone() };
        return &p * (st.vs_tau(action) + &st.lambda * vs_cooperator)
            + &q * (st.vs_sigma(action) + &st.lambda * &v_sigma);
    }
    let lk = num_traits::pow(st.lambda.clone(), (stage - 1) as usize);
    let u_tau = st.vs_tau(tau_i);
    let prefix = &u_tau * (Rational::one() - &lk) / (Rational::one() - &st.lambda);
    let tail = if action == tau_i {
        st.forever(&u_tau)
    } else {
        st.vs_tau(action) + &st.lambda * &v_sigma
    };
    // Against σ_j the cooperating type already punishes from stage 2.
    let u_sigma = st.sigma_vs(game.sigma(player.other()));
    &p * (prefix + lk * tail) + &q * (st.vs_sigma(tau_i) + &st.lambda * st.forever(&u_sigma))
}

/// Conforming payoff summed over the first `horizon` stages, with the bound
/// `max|u| λ^T / (1 - λ)` on the omitted tail. A debugging aid.
pub fn truncated_conforming_payoff(
    space: &BeliefSpace,
    game: &CooperationGame,
    k: [&Event; 2],
    player: Player,
    state: usize,
    horizon: u32,
) -> (Rational, Rational) {
    let p = space.posterior(player, k[player.other().index()], state);
    let q = Rational::one() - &p;
    let st = Streams::new(game, player, space.discount(player, state).clone());
    let tau_i = game.tau(player);
    let u_sigma = st.sigma_vs(game.sigma(player.other()));
    let cooperates = k[player.index()].contains(state);
    let (first_c, rest_c, first_s, rest_s) = if cooperates {
        (st.vs_tau(tau_i), st.vs_tau(tau_i), st.vs_sigma(tau_i), u_sigma.clone())
    } else {
        (st.sigma_vs(&st.tau_j_pure()), u_sigma.clone(), u_sigma.clone(), u_sigma.clone())
    };
    let mut total = Rational::zero();
    let mut weight = Rational::one();
    for t in 0..horizon {
        let (c, s) = if t == 0 { (&first_c, &first_s) } else { (&rest_c, &rest_s) };
        total += &weight * (&p * c + &q * s);
        weight *= &st.lambda;
    }
    let tail = game.game().max_abs_payoff() * &weight / (Rational::one() - &st.lambda);
    (total, tail)
}

/// The two-state signaling profile in which a patient player 2 announces
/// itself by cooperating at stage 1 against a player 1 who defects at stage
/// 1 and then mirrors the announcement. Hard-coded Prisoner's Dilemma
/// payoffs `(D,D)=1, (C,D)=0, (D,C)=4, (C,C)=3` for the row player.
pub mod signaling {
    use super::*;

    #[derive(Debug, Clone, PartialEq, Eq)]
    pub struct SignalingCheck {
        pub state: &'static str,
        pub player: Player,
        pub conforming: Rational,
        pub deviation: Rational,
    }

    fn forever(u: i64, l: &Rational) -> Rational {
        int(u) / (Rational::one() - l)
    }

    /// Player 2 at the patient state, `λ_2 = 1/2`: conforming is 0 at stage
    /// 1 then mutual cooperation; defecting at stage 1 makes player 1 defect forever.
    pub fn patient_player2(l2: &Rational) -> SignalingCheck {
        SignalingCheck {
            state: "(1/2,1/2)",
            player: Player::Two,
            conforming: int(0) + l2 * forever(3, l2),
            deviation: forever(1, l2),
        }
    }

    /// Player 2 at the impatient state: conforming is defecting forever;
    /// cooperating at stage 1 is best followed by taking 4 once.
    pub fn impatient_player2(l2: &Rational) -> SignalingCheck {
        let defect_next = int(0) + l2 * int(4) + l2 * l2 * forever(1, l2);
        let comply = int(0) + l2 * forever(3, l2);
        SignalingCheck {
            state: "(1/2,1/4)",
            player: Player::Two,
            conforming: forever(1, l2),
            deviation: defect_next.max(comply),
        }
    }

    /// Player 1 with probability `p` on the patient state: cooperating at
    /// stage 1 only loses the stage-1 payoff since the continuation does not
    /// depend on it.
    pub fn player1(l1: &Rational, p: &Rational) -> SignalingCheck {
        let q = Rational::one() - p;
        let conforming = p * (int(1) + l1 * forever(3, l1)) + &q * forever(1, l1);
        let deviation = p * (int(0) + l1 * forever(3, l1)) + &q * (int(0) + l1 * forever(1, l1));
        SignalingCheck {
            state: "either",
            player: Player::One,
            conforming,
            deviation,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cooperation::{check_pair, Mode};
    use crate::fixtures;
    use crate::rational::q;
    use crate::stage_game::ThresholdProfile;

    fn ev(space: &BeliefSpace, player: Player, values: &[Rational]) -> Event {
        space.event_from_fn(|w| values.contains(space.discount(player, w)))
    }

    fn state_with(space: &BeliefSpace, l1: Rational, l2: Rational) -> usize {
        (0..space.len()).find(|&w| space.lambda(w) == &[l1.clone(), l2.clone()]).unwrap()
    }

    #[test]
    fn closed_form_conforming_values() {
        let g = fixtures::pd();
        let s = fixtures::complete_info(&[q(1, 2)]);
        let full = s.full_event();
        let empty = s.empty_event();
        assert_eq!(conforming_payoff(&s, &g, &full, &full, Player::One, 0).unwrap(), int(6));
        assert_eq!(conforming_payoff(&s, &g, &empty, &empty, Player::One, 0).unwrap(), int(2));

        // P = 2/3 at λ = 3/4 inside K_1.
        let s = fixtures::prisonerex1();
        let k = [ev(&s, Player::One, &[q(1, 2), q(3, 4)]), ev(&s, Player::Two, &[q(1, 2), q(3, 4)])];
        let w = state_with(&s, q(3, 4), q(1, 4));
        assert_eq!(s.posterior(Player::One, &k[1], w), q(2, 3));
        assert_eq!(conforming_payoff(&s, &g, &k[0], &k[1], Player::One, w).unwrap(), int(9));
        let e = best_deviation(&s, &g, &k[0], &k[1], Player::One, w).unwrap();
        assert_eq!(e.best, int(9));
        assert_eq!(e.gain, int(0));
        let d = delayed_deviation_value(&s, &g, [&k[0], &k[1]], Player::One, w, 1, 0);
        assert_eq!(d, int(6));
    }

    #[test]
    fn example2_gain_is_positive() {
        let s = fixtures::prisonerex2();
        let g = fixtures::pd();
        let k1 = ev(&s, Player::One, &[q(3, 4)]);
        let k2 = ev(&s, Player::Two, &[q(3, 4)]);
        let w = (0..s.len()).find(|&w| s.discount(Player::One, w) == &q(1, 2)).unwrap();
        let e = best_deviation(&s, &g, &k1, &k2, Player::One, w).unwrap();
        assert!(e.gain.is_positive());
        assert_eq!(e.first_action, "C");
        let v = is_bayes_equilibrium(&s, &g, &k1, &k2).unwrap();
        assert!(!v.holds);
        assert!(is_epsilon_equilibrium(&s, &g, &k1, &k2, &int(10)).unwrap().holds);
        assert!(!is_epsilon_equilibrium(&s, &g, &k1, &k2, &int(0)).unwrap().holds);
    }

    #[test]
    fn trivial_pair_has_zero_gain() {
        for s in [fixtures::prisonerex1(), fixtures::prisonerex2(), fixtures::example_new()] {
            let e = s.empty_event();
            let v = is_bayes_equilibrium(&s, &fixtures::pd(), &e, &e).unwrap();
            assert!(v.holds);
            assert_eq!(v.max_gain, int(0));
        }
    }

    #[test]
    fn example6_lambda_pair_is_not_an_equilibrium() {
        let s = fixtures::example6();
        let g = fixtures::g3x3(int(5));
        let th = ThresholdProfile::build(&s, &g).unwrap();
        let l = [th.lambda_region(Player::One).clone(), th.lambda_region(Player::Two).clone()];
        assert!(!is_bayes_equilibrium(&s, &g, &l[0], &l[1]).unwrap().holds);
        let k1 = ev(&s, Player::One, &[q(3, 4)]);
        let k2 = ev(&s, Player::Two, &[q(3, 4)]);
        assert!(is_bayes_equilibrium(&s, &g, &k1, &k2).unwrap().holds);
    }

    #[test]
    fn boundary_gain_is_exactly_zero() {
        // λ_1 = 1/2 gives f_1 = 1/2, and player 1 puts exactly 1/2 on K_2.
        let s = fixtures::example_new_with(q(1, 2));
        let g = fixtures::pd();
        let k1 = s.full_event();
        let k2 = s.event(["(1/2,1/2)"]).unwrap();
        for w in 0..s.len() {
            assert_eq!(s.posterior(Player::One, &k2, w), q(1, 2));
            let e = best_deviation(&s, &g, &k1, &k2, Player::One, w).unwrap();
            assert_eq!(e.gain, int(0));
        }
    }

    #[test]
    fn agrees_with_conditions_on_examples() {
        let g = fixtures::pd();
        for s in [fixtures::prisonerex1(), fixtures::prisonerex2(), fixtures::prisonerex3()] {
            let th = ThresholdProfile::build(&s, &g).unwrap();
            let pairs = crate::cooperation::enumerate_pairs(&s, &th, Mode::Bayesian, 1 << 20).unwrap();
            for [k1, k2] in &pairs {
                assert!(is_bayes_equilibrium(&s, &g, k1, k2).unwrap().holds);
            }
            let k1 = ev(&s, Player::One, &[q(3, 4)]);
            let k2 = ev(&s, Player::Two, &[q(3, 4)]);
            assert_eq!(
                check_pair(&s, &th, &k1, &k2, Mode::Bayesian).unwrap().verdict,
                is_bayes_equilibrium(&s, &g, &k1, &k2).unwrap().holds
            );
        }
    }

    #[test]
    fn delayed_deviation_never_beats_stage_one() {
        let g = fixtures::g3x3(int(5));
        let s = fixtures::example6();
        let k1 = ev(&s, Player::One, &[q(1, 2), q(3, 4)]);
        let k2 = ev(&s, Player::Two, &[q(1, 2), q(3, 4)]);
        for w in 0..s.len() {
            for player in Player::BOTH {
                let best = best_deviation(&s, &g, &k1, &k2, player, w).unwrap().best;
                for stage in 1..6 {
                    for a in 0..3 {
                        let v = delayed_deviation_value(&s, &g, [&k1, &k2], player, w, stage, a);
                        assert!(v <= best);
                    }
                }
            }
        }
    }

    #[test]
    fn truncation_converges_to_closed_form() {
        let g = fixtures::pd();
        let s = fixtures::prisonerex1();
        let k1 = ev(&s, Player::One, &[q(1, 2), q(3, 4)]);
        let k2 = ev(&s, Player::Two, &[q(1, 2), q(3, 4)]);
        for w in 0..s.len() {
            let exact = conforming_payoff(&s, &g, &k1, &k2, Player::One, w).unwrap();
            let (approx, tail) = truncated_conforming_payoff(&s, &g, [&k1, &k2], Player::One, w, 30);
            assert!((exact - approx).abs() <= tail);
        }
    }

    #[test]
    fn payoffs_are_within_scale() {
        let g = fixtures::pd();
        let s = fixtures::prisonerex2();
        let k1 = ev(&s, Player::One, &[q(3, 4)]);
        let k2 = ev(&s, Player::Two, &[q(3, 4)]);
        let r = deviation_report(&s, &g, &k1, &k2).unwrap();
        for e in &r.entries {
            let w = s.state_index(&e.state).unwrap();
            let scale = g.game().max_abs_payoff() / (Rational::one() - s.discount(e.player, w));
            assert!(e.conforming.abs() <= scale && e.best.abs() <= scale);
            assert!(!e.gain.is_negative());
        }
        let text = serde_json::to_string(&r).unwrap();
        assert_eq!(serde_json::from_str::<DeviationReport>(&text).unwrap(), r);
    }

    #[test]
    fn signaling_profile_arithmetic() {
        let p2 = signaling::patient_player2(&q(1, 2));
        assert_eq!((p2.conforming, p2.deviation), (int(3), int(2)));
        let i2 = signaling::impatient_player2(&q(1, 4));
        assert_eq!(i2.deviation, q(13, 12));
        assert_eq!(i2.conforming, q(4, 3));
        assert!(i2.deviation < i2.conforming);
        let p1 = signaling::player1(&q(1, 2), &q(1, 3));
        assert_eq!(p1.conforming - p1.deviation, int(1));
    }
}
