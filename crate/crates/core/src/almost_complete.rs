//! Almost complete information about the discount factors, and the
//! conditional grim trigger profiles that remain approximate equilibria
//! under it.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::belief_operators::{belief_unchecked, common_unchecked, constant_pair, ThresholdFunction, ThresholdPair};
use crate::belief_space::{BeliefSpace, Event, Player, SpaceError};
use crate::payoff_oracle;
use crate::rational::{Extended, Rational};
use crate::stage_game::{CooperationGame, GameError, ThresholdProfile};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RobustError {
    #[error("no state has discount factors ({0}, {1})")]
    UnknownNatureState(String, String),
    #[error("the belief space has no common prior")]
    NoPrior,
    #[error("the f-epsilon construction needs two actions per player")]
    NotTwoByTwo,
    #[error("eps' = {eps_prime} is below M0 * eps = {required}")]
    EpsilonTooSmall { eps_prime: String, required: String },
    #[error("parameter {0} must lie in [0, 1]")]
    OutOfRange(&'static str),
    #[error(transparent)]
    Game(#[from] GameError),
}

impl From<SpaceError> for RobustError {
    fn from(_: SpaceError) -> Self {
        RobustError::NoPrior
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Definition {
    /// Prior mass of common (1-ε)-belief in the true nature state.
    Ms,
    /// Every player everywhere (1-ε)-believes some nature state is common (1-ε)-belief.
    Strong,
}

/// Scope of "some state of nature" in the strong definition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Reading {
    /// `w ∈ B_i(⋃_s D(E_s))`.
    #[default]
    Union,
    /// `w ∈ ⋃_s B_i(D(E_s))`.
    PerNature,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReportKind {
    MsCheck,
    StrongCheck,
    RobustProfile,
    FEpsilonProfile,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrongFailure {
    pub state: String,
    pub player: Player,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RobustnessReport {
    pub kind: ReportKind,
    pub definition: Definition,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reading: Option<Reading>,
    #[serde(with = "crate::rational::text")]
    pub eps: Rational,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "crate::rational::text_opt")]
    pub delta: Option<Rational>,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "crate::rational::text_opt")]
    pub eps_prime: Option<Rational>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub holds: Option<bool>,
    /// The common-belief region: `R` for the MS check, `⋃_s D(E_s)` for the
    /// strong check, `D(Λ)` for the profiles.
    pub region: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "crate::rational::text_opt")]
    pub region_mass: Option<Rational>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub failures: Vec<StrongFailure>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pair: Option<[Vec<String>; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "crate::rational::text_opt")]
    pub max_gain: Option<Rational>,
    /// `max |u| / (1 - λ_i(w))` over states and players.
    #[serde(default, skip_serializing_if = "Option::is_none", with = "crate::rational::text_opt")]
    pub payoff_scale: Option<Rational>,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "crate::rational::text_opt")]
    pub m0: Option<Rational>,
    /// Prior mass of `Λ ∖ D(Λ)`.
    #[serde(default, skip_serializing_if = "Option::is_none", with = "crate::rational::text_opt")]
    pub lambda_gap_mass: Option<Rational>,
}

impl RobustnessReport {
    fn new(kind: ReportKind, definition: Definition, eps: &Rational) -> Self {
        RobustnessReport {
            kind,
            definition,
            reading: None,
            eps: eps.clone(),
            delta: None,
            eps_prime: None,
            holds: None,
            region: Vec::new(),
            region_mass: None,
            failures: Vec::new(),
            pair: None,
            max_gain: None,
            payoff_scale: None,
            m0: None,
            lambda_gap_mass: None,
        }
    }
}

fn check_unit(name: &'static str, x: &Rational) -> Result<(), RobustError> {
    if x.is_negative() || *x > Rational::one() {
        return Err(RobustError::OutOfRange(name));
    }
    Ok(())
}

/// Distinct `(λ_1, λ_2)` pairs, sorted.
pub fn nature_states(space: &BeliefSpace) -> Vec<[Rational; 2]> {
    let set: BTreeSet<[Rational; 2]> = (0..space.len()).map(|w| space.lambda(w).clone()).collect();
    set.into_iter().collect()
}

/// `{w : λ(w) = s}`.
pub fn nature_event(space: &BeliefSpace, s: &[Rational; 2]) -> Result<Event, RobustError> {
    let e = space.event_from_fn(|w| space.lambda(w) == s);
    if e.is_empty() {
        return Err(RobustError::UnknownNatureState(s[0].to_string(), s[1].to_string()));
    }
    Ok(e)
}

fn confidence(space: &BeliefSpace, eps: &Rational) -> ThresholdPair {
    constant_pair(space.len(), Extended::Finite(Rational::one() - eps))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MsOutcome {
    pub holds: bool,
    pub region: Event,
    pub mass: Rational,
    pub report: RobustnessReport,
}

/// `R = ⋃_s (E_s ∩ D^{1-ε}(E_s))` and whether `P(R) >= 1 - δ`.
pub fn ms_almost_complete(space: &BeliefSpace, eps: &Rational, delta: &Rational) -> Result<MsOutcome, RobustError> {
    check_unit("eps", eps)?;
    check_unit("delta", delta)?;
    if space.prior().is_none() {
        return Err(RobustError::NoPrior);
    }
    let f = confidence(space, eps);
    let mut region = space.empty_event();
    for s in nature_states(space) {
        let e = nature_event(space, &s)?;
        let d = common_unchecked(space, &f, &e).event;
        region = region.union(&e.intersection(&d));
    }
    let mass = space.prior_mass(&region)?;
    let holds = mass >= Rational::one() - delta;
    let mut report = RobustnessReport::new(ReportKind::MsCheck, Definition::Ms, eps);
    report.delta = Some(delta.clone());
    report.holds = Some(holds);
    report.region = space.event_names(&region);
    report.region_mass = Some(mass.clone());
    Ok(MsOutcome {
        holds,
        region,
        mass,
        report,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrongOutcome {
    pub holds: bool,
    /// Per player, the states where the requirement is met.
    pub passing: [Event; 2],
    pub report: RobustnessReport,
}

/// Whether every player at every state (1-ε)-believes that some nature
/// state is common (1-ε)-belief.
pub fn strong_almost_complete(space: &BeliefSpace, eps: &Rational, reading: Reading) -> Result<StrongOutcome, RobustError> {
    check_unit("eps", eps)?;
    let f = confidence(space, eps);
    let regions: Vec<Event> = nature_states(space)
        .iter()
        .map(|s| nature_event(space, s).map(|e| common_unchecked(space, &f, &e).event))
        .collect::<Result<_, _>>()?;
    let union = regions.iter().fold(space.empty_event(), |acc, d| acc.union(d));
    let passing = [Player::One, Player::Two].map(|p| {
        let fi = &f[p.index()];
        match reading {
            Reading::Union => belief_unchecked(space, p, fi, &union),
            Reading::PerNature => regions
                .iter()
                .fold(space.empty_event(), |acc, d| acc.union(&belief_unchecked(space, p, fi, d))),
        }
    });
    let mut failures = Vec::new();
    for w in 0..space.len() {
        for p in Player::BOTH {
            if !passing[p.index()].contains(w) {
                failures.push(StrongFailure {
                    state: space.state_name(w).to_string(),
                    player: p,
                });
            }
        }
    }
    let holds = failures.is_empty();
    let mut report = RobustnessReport::new(ReportKind::StrongCheck, Definition::Strong, eps);
    report.reading = Some(reading);
    report.holds = Some(holds);
    report.region = space.event_names(&union);
    report.region_mass = space.prior().and_then(|_| space.prior_mass(&union).ok());
    report.failures = failures;
    Ok(StrongOutcome { holds, passing, report })
}

/// `max |u| / (1 - λ_i(w))`.
pub fn payoff_scale(space: &BeliefSpace, game: &CooperationGame) -> Rational {
    let m = game.game().max_abs_payoff();
    (0..space.len())
        .flat_map(|w| Player::BOTH.map(|p| &m / (Rational::one() - space.discount(p, w))))
        .max()
        .unwrap_or_else(Rational::zero)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RobustProfile {
    pub pair: [Event; 2],
    /// `D(Λ)` under the thresholds used.
    pub common: Event,
    pub report: RobustnessReport,
}

fn build_profile(
    space: &BeliefSpace,
    game: &CooperationGame,
    thresholds: &ThresholdProfile,
    f: &ThresholdPair,
    mut report: RobustnessReport,
) -> Result<RobustProfile, RobustError> {
    let lambda = thresholds.lambda_both();
    let common = common_unchecked(space, f, &lambda).event;
    let pair = [Player::One, Player::Two].map(|p| belief_unchecked(space, p, &f[p.index()], &common));
    let gain = payoff_oracle::max_gain(space, game, &pair[0], &pair[1])
        .expect("belief events are measurable");
    report.region = space.event_names(&common);
    report.pair = Some([space.event_names(&pair[0]), space.event_names(&pair[1])]);
    report.max_gain = Some(gain);
    report.payoff_scale = Some(payoff_scale(space, game));
    if space.prior().is_some() {
        report.region_mass = space.prior_mass(&common).ok();
        report.lambda_gap_mass = space.prior_mass(&lambda.difference(&common)).ok();
    }
    Ok(RobustProfile { pair, common, report })
}

/// `K_i = B_i^{1-ε}(D^{1-ε}(Λ))` with the oracle's measured gain.
pub fn robust_profile(space: &BeliefSpace, game: &CooperationGame, eps: &Rational) -> Result<RobustProfile, RobustError> {
    check_unit("eps", eps)?;
    let thresholds = ThresholdProfile::build(space, game)?;
    let f = confidence(space, eps);
    let report = RobustnessReport::new(ReportKind::RobustProfile, Definition::Strong, eps);
    build_profile(space, game, &thresholds, &f, report)
}

/// `f` with `ε'` subtracted from every numerator.
pub fn f_epsilon_pair(space: &BeliefSpace, game: &CooperationGame, eps_prime: &Rational) -> ThresholdPair {
    [Player::One, Player::Two].map(|p| {
        ThresholdFunction::from_fn(space.len(), |w| game.f_value_with_slack(p, space.discount(p, w), eps_prime).value)
    })
}

/// `K_i = B_i^{f^{ε'}}(D^{f^{ε'}}(Λ))` for two-action games, checked as an
/// ε'-equilibrium.
pub fn f_epsilon_profile(
    space: &BeliefSpace,
    game: &CooperationGame,
    eps: &Rational,
    eps_prime: &Rational,
) -> Result<RobustProfile, RobustError> {
    check_unit("eps", eps)?;
    if !game.game().is_two_by_two() {
        return Err(RobustError::NotTwoByTwo);
    }
    let m0 = game.m0();
    let required = &m0 * eps;
    if *eps_prime < required {
        return Err(RobustError::EpsilonTooSmall {
            eps_prime: eps_prime.to_string(),
            required: required.to_string(),
        });
    }
    let thresholds = ThresholdProfile::build(space, game)?;
    let f = f_epsilon_pair(space, game, eps_prime);
    let mut report = RobustnessReport::new(ReportKind::FEpsilonProfile, Definition::Ms, eps);
    report.eps_prime = Some(eps_prime.clone());
    report.m0 = Some(m0);
    let mut out = build_profile(space, game, &thresholds, &f, report)?;
    let gain = out.report.max_gain.clone().unwrap_or_else(Rational::zero);
    out.report.holds = Some(gain <= *eps_prime);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cooperation::largest_pair;
    use crate::fixtures;
    use crate::rational::{int, q};

    #[test]
    fn nature_events() {
        let s = fixtures::prisonerex1();
        assert_eq!(nature_event(&s, &[q(3, 4), q(3, 4)]).unwrap().len(), 1);
        assert_eq!(nature_event(&s, &[q(1, 2), q(1, 4)]).unwrap().len(), 1);
        assert!(matches!(
            nature_event(&s, &[q(1, 3), q(1, 4)]),
            Err(RobustError::UnknownNatureState(..))
        ));
        let dup = fixtures::duplicated_nature();
        assert_eq!(nature_event(&dup, &[q(3, 4), q(3, 4)]).unwrap().len(), 2);
    }

    #[test]
    fn complete_information_is_almost_complete() {
        let s = fixtures::complete_info(&[q(1, 4), q(1, 2), q(3, 4)]);
        for eps in [int(0), q(1, 100), q(1, 10), q(1, 2), int(1)] {
            let ms = ms_almost_complete(&s, &eps, &int(0)).unwrap();
            assert!(ms.holds);
            assert_eq!(ms.region, s.full_event());
            for reading in [Reading::Union, Reading::PerNature] {
                assert!(strong_almost_complete(&s, &eps, reading).unwrap().holds);
            }
            let rp = robust_profile(&s, &fixtures::pd(), &eps).unwrap();
            let lambda = ThresholdProfile::build(&s, &fixtures::pd()).unwrap().lambda_both();
            if eps < int(1) {
                assert_eq!(rp.pair, [lambda.clone(), lambda]);
                assert!(!rp.report.max_gain.unwrap().is_positive());
            }
        }
    }

    #[test]
    fn example1_is_far_from_complete() {
        let s = fixtures::prisonerex1();
        let ms = ms_almost_complete(&s, &q(1, 10), &q(1, 10)).unwrap();
        assert!(!ms.holds);
        assert!(ms.region.is_empty());
        let st = strong_almost_complete(&s, &q(1, 10), Reading::Union).unwrap();
        assert!(!st.holds);
        assert_eq!(st.report.failures.len(), 2 * s.len());
        assert!(ms_almost_complete(&s, &q(1, 10), &int(1)).unwrap().holds);
        assert!(strong_almost_complete(&s, &int(1), Reading::Union).unwrap().holds);
    }

    #[test]
    fn ms_needs_a_prior() {
        let s = fixtures::prisonerex3();
        assert!(s.prior().is_none());
        assert_eq!(ms_almost_complete(&s, &q(1, 10), &q(1, 10)).unwrap_err(), RobustError::NoPrior);
    }

    #[test]
    fn regions_grow_with_eps() {
        for s in [fixtures::prisonerex1(), fixtures::noisy_diagonal(3, q(1, 10))] {
            let mut prev_r = s.empty_event();
            let mut prev_pass = [s.empty_event(), s.empty_event()];
            for k in 0..=10 {
                let eps = q(k, 10);
                let r = ms_almost_complete(&s, &eps, &int(0)).unwrap().region;
                assert!(prev_r.is_subset(&r));
                let pass = strong_almost_complete(&s, &eps, Reading::Union).unwrap().passing;
                assert!(prev_pass[0].is_subset(&pass[0]) && prev_pass[1].is_subset(&pass[1]));
                prev_r = r;
                prev_pass = pass;
            }
        }
    }

    #[test]
    fn strong_implies_ms_and_small_gap() {
        for noise in [q(1, 20), q(1, 10), q(1, 5)] {
            let s = fixtures::noisy_diagonal(4, noise.clone());
            let th = ThresholdProfile::build(&s, &fixtures::pd()).unwrap();
            for eps in [q(1, 20), q(1, 10), q(1, 5), q(3, 10)] {
                let strong = strong_almost_complete(&s, &eps, Reading::Union).unwrap();
                if !strong.holds {
                    continue;
                }
                assert!(ms_almost_complete(&s, &eps, &(int(2) * &eps)).unwrap().holds);
                let f = confidence(&s, &eps);
                let lambda = th.lambda_both();
                let d = common_unchecked(&s, &f, &lambda).event;
                let gap = s.prior_mass(&lambda.difference(&d)).unwrap();
                assert!(gap < int(3) * &eps);
            }
        }
    }

    #[test]
    fn f_epsilon_reduces_to_largest_pair_at_zero() {
        let s = fixtures::prisonerex1();
        let g = fixtures::pd();
        let th = ThresholdProfile::build(&s, &g).unwrap();
        let out = f_epsilon_profile(&s, &g, &int(0), &int(0)).unwrap();
        assert_eq!(&out.pair, largest_pair(&s, &th).pair());
        let out = f_epsilon_profile(&s, &g, &q(1, 100), &q(2, 100)).unwrap();
        assert_eq!(out.report.holds, Some(true));
        assert_eq!(out.report.m0, Some(int(2)));
        assert!(matches!(
            f_epsilon_profile(&s, &g, &q(1, 100), &q(1, 100)),
            Err(RobustError::EpsilonTooSmall { .. })
        ));
        let s6 = fixtures::example6();
        assert_eq!(
            f_epsilon_profile(&s6, &fixtures::g3x3(int(5)), &int(0), &int(0)).unwrap_err(),
            RobustError::NotTwoByTwo
        );
    }

    #[test]
    fn report_round_trips() {
        let s = fixtures::prisonerex1();
        let out = f_epsilon_profile(&s, &fixtures::pd(), &q(1, 100), &q(1, 50)).unwrap();
        let text = serde_json::to_string(&out.report).unwrap();
        assert_eq!(serde_json::from_str::<RobustnessReport>(&text).unwrap(), out.report);
    }
}
