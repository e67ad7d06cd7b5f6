//! End-to-end runs of the built-in examples with their expected outcomes.

use num_traits::Signed;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::almost_complete::{self, Reading};
use crate::belief_space::{BeliefSpace, Event, Player};
use crate::cooperation::{self, check_pair, enumerate_pairs, largest_pair, Bound, Mode};
use crate::fixtures;
use crate::payoff_oracle::{self, signaling};
use crate::rational::{self, int, q, Extended, Rational};
use crate::stage_game::ThresholdProfile;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DemoError {
    #[error("unknown example `{0}`")]
    UnknownExample(String),
}

pub const DEMOS: &[&str] = &[
    "prisonerex1",
    "prisonerex2",
    "prisonerex3",
    "example_new",
    "example5",
    "example6",
    "prisonerex4",
    "complete_info",
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub label: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DemoReport {
    pub name: String,
    pub passed: bool,
    pub checks: Vec<Check>,
}

/// Plain rendering used in check details.
trait Show {
    fn show(&self) -> String;
}

impl Show for bool {
    fn show(&self) -> String {
        self.to_string()
    }
}

impl Show for String {
    fn show(&self) -> String {
        self.clone()
    }
}

impl Show for Rational {
    fn show(&self) -> String {
        rational::format(self)
    }
}

impl Show for Extended {
    fn show(&self) -> String {
        self.to_string()
    }
}

impl Show for Bound {
    fn show(&self) -> String {
        format!("{self:?}").to_lowercase()
    }
}

impl<T: Show> Show for Option<T> {
    fn show(&self) -> String {
        self.as_ref().map_or_else(|| "none".into(), Show::show)
    }
}

impl<T: Show> Show for Vec<T> {
    fn show(&self) -> String {
        format!("[{}]", self.iter().map(Show::show).collect::<Vec<_>>().join(", "))
    }
}

impl<A: Show, B: Show> Show for (A, B) {
    fn show(&self) -> String {
        format!("({}, {})", self.0.show(), self.1.show())
    }
}

impl<A: Show, B: Show, C: Show> Show for (A, B, C) {
    fn show(&self) -> String {
        format!("({}, {}, {})", self.0.show(), self.1.show(), self.2.show())
    }
}

impl<A: Show, B: Show, C: Show, D: Show> Show for (A, B, C, D) {
    fn show(&self) -> String {
        format!("({}, {}, {}, {})", self.0.show(), self.1.show(), self.2.show(), self.3.show())
    }
}

struct Checks(Vec<Check>);

impl Checks {
    fn add(&mut self, label: &str, passed: bool, detail: impl Into<String>) {
        self.0.push(Check {
            label: label.to_string(),
            passed,
            detail: detail.into(),
        });
    }

    fn eq<T: PartialEq + Show>(&mut self, label: &str, got: T, want: T) {
        let passed = got == want;
        let detail = if passed {
            got.show()
        } else {
            format!("got {}, expected {}", got.show(), want.show())
        };
        self.add(label, passed, detail);
    }
}

/// `{w : λ_i(w) ∈ values}`.
pub fn own_discount_event(space: &BeliefSpace, player: Player, values: &[Rational]) -> Event {
    space.event_from_fn(|w| values.contains(space.discount(player, w)))
}

/// `Some(t)` when `event = {λ_i >= t}` for some `t` occurring in the space.
pub fn threshold_of(space: &BeliefSpace, player: Player, event: &Event) -> Option<Rational> {
    let t = event.iter().map(|w| space.discount(player, w).clone()).min()?;
    (space.event_from_fn(|w| *space.discount(player, w) >= t) == *event).then_some(t)
}

fn names(space: &BeliefSpace, pair: &[Event; 2]) -> String {
    let set = |e: &Event| format!("{{{}}}", space.event_names(e).join(", "));
    format!("({}, {})", set(&pair[0]), set(&pair[1]))
}

pub fn run_demo(name: &str) -> Result<DemoReport, DemoError> {
    let key = name.trim().replace('-', "_");
    let mut c = Checks(Vec::new());
    match key.as_str() {
        "prisonerex1" => prisonerex1(&mut c),
        "prisonerex2" => prisonerex2(&mut c),
        "prisonerex3" => prisonerex3(&mut c),
        "example_new" => example_new(&mut c),
        "example5" | "example5grid" => example5(&mut c),
        "example6" => example6(&mut c),
        "prisonerex4" => prisonerex4(&mut c),
        "complete_info" => complete_info(&mut c),
        _ => return Err(DemoError::UnknownExample(name.to_string())),
    }
    let passed = c.0.iter().all(|x| x.passed);
    Ok(DemoReport {
        name: key,
        passed,
        checks: c.0,
    })
}

fn quarter_pair(space: &BeliefSpace, values: &[Rational]) -> [Event; 2] {
    [
        own_discount_event(space, Player::One, values),
        own_discount_event(space, Player::Two, values),
    ]
}

fn prisonerex1(c: &mut Checks) {
    let s = fixtures::prisonerex1();
    let g = fixtures::pd();
    let th = ThresholdProfile::build(&s, &g).unwrap();
    for (l, f) in [(q(3, 4), q(1, 6)), (q(1, 2), q(1, 2)), (q(1, 4), q(3, 2))] {
        c.eq(&format!("f({l})"), g.f_value(Player::One, &l).value, Extended::Finite(f));
    }
    let high = quarter_pair(&s, &[q(1, 2), q(3, 4)]);
    c.eq("Λ_1", s.event_names(th.lambda_region(Player::One)), s.event_names(&high[0]));
    let largest = largest_pair(&s, &th);
    c.eq("largest pair", names(&s, largest.pair()), names(&s, &high));
    c.eq("largest pair verdict", largest.report.verdict, true);
    let top = quarter_pair(&s, &[q(3, 4)]);
    let r = check_pair(&s, &th, &top[0], &top[1], Mode::Bayesian).unwrap();
    c.eq("({3/4},{3/4}) is a pair", r.verdict, true);
    let oracle = payoff_oracle::is_bayes_equilibrium(&s, &g, &top[0], &top[1]).unwrap();
    c.eq("oracle agrees on ({3/4},{3/4})", oracle.holds, true);
    let pairs = enumerate_pairs(&s, &th, Mode::Bayesian, cooperation::DEFAULT_BUDGET).unwrap();
    let empty = [s.empty_event(), s.empty_event()];
    c.add(
        "enumeration contains the three named pairs",
        pairs.contains(&high) && pairs.contains(&top) && pairs.contains(&empty),
        format!("{} pairs", pairs.len()),
    );
}

fn prisonerex2(c: &mut Checks) {
    let s = fixtures::prisonerex2();
    let th = ThresholdProfile::build(&s, &fixtures::pd()).unwrap();
    let pairs = enumerate_pairs(&s, &th, Mode::Bayesian, cooperation::DEFAULT_BUDGET).unwrap();
    let high = quarter_pair(&s, &[q(1, 2), q(3, 4)]);
    let empty = [s.empty_event(), s.empty_event()];
    c.eq(
        "all pairs",
        pairs.iter().map(|p| names(&s, p)).collect::<Vec<_>>(),
        vec![names(&s, &high), names(&s, &empty)],
    );
    let top = quarter_pair(&s, &[q(3, 4)]);
    let r = check_pair(&s, &th, &top[0], &top[1], Mode::Bayesian).unwrap();
    c.eq("({3/4},{3/4}) rejected", r.verdict, false);
    let w = r.conditions.c.witness;
    c.eq(
        "condition (c) witness",
        w.map(|w| (w.lhs, w.rhs)),
        Some((q(2, 3), Extended::Finite(q(1, 2)))),
    );
}

fn prisonerex3(c: &mut Checks) {
    let s = fixtures::prisonerex3();
    let th = ThresholdProfile::build(&s, &fixtures::pd()).unwrap();
    let mid = quarter_pair(&s, &[q(1, 2)]);
    let largest = largest_pair(&s, &th);
    c.eq("largest pair", names(&s, largest.pair()), names(&s, &mid));
    c.eq("largest pair verdict", largest.report.verdict, true);
    let pairs = enumerate_pairs(&s, &th, Mode::Bayesian, cooperation::DEFAULT_BUDGET).unwrap();
    let empty = [s.empty_event(), s.empty_event()];
    c.eq(
        "all pairs",
        pairs.iter().map(|p| names(&s, p)).collect::<Vec<_>>(),
        vec![names(&s, &mid), names(&s, &empty)],
    );
}

fn example_new(c: &mut Checks) {
    let s = fixtures::example_new();
    let th = ThresholdProfile::build(&s, &fixtures::pd()).unwrap();
    let largest = largest_pair(&s, &th);
    c.eq(
        "largest pair is trivial",
        largest.pair().iter().all(Event::is_empty),
        true,
    );
    let patient = signaling::patient_player2(&q(1, 2));
    c.eq("patient player 2: conform vs deviate", (patient.conforming, patient.deviation), (int(3), int(2)));
    let impatient = signaling::impatient_player2(&q(1, 4));
    c.eq("impatient player 2: deviation", impatient.deviation.clone(), q(13, 12));
    c.eq("impatient player 2: conforming", impatient.conforming.clone(), q(4, 3));
    c.add(
        "impatient player 2 does not deviate",
        impatient.deviation < impatient.conforming,
        "13/12 < 4/3",
    );
    let p1 = signaling::player1(&q(1, 2), &q(1, 3));
    c.add("player 1 does not deviate", p1.deviation < p1.conforming, format!("{} < {}", p1.deviation.show(), p1.conforming.show()));
}

fn example5(c: &mut Checks) {
    let s = fixtures::example5_grid(10);
    let g = fixtures::g3x3(int(6));
    let th = ThresholdProfile::build(&s, &g).unwrap();
    c.eq("λ⁰", th.lambda0(Player::One).clone(), q(3, 5));
    let largest = largest_pair(&s, &th);
    let lambda = [th.lambda_region(Player::One).clone(), th.lambda_region(Player::Two).clone()];
    c.eq("candidate equals (Λ_1, Λ_2)", names(&s, largest.pair()), names(&s, &lambda));
    c.eq("candidate verdict", largest.report.verdict, false);
    let w = largest.report.conditions.c.witness.clone();
    c.eq(
        "violation via g¹",
        w.map(|w| (w.lhs, w.rhs, w.bound)),
        Some((q(2, 5), Extended::Finite(q(1, 3)), Bound::G1)),
    );
    let pairs = enumerate_pairs(&s, &th, Mode::Bayesian, cooperation::DEFAULT_BUDGET).unwrap();
    c.eq(
        "only pair of cooperation events is trivial",
        pairs.iter().map(|p| names(&s, p)).collect::<Vec<_>>(),
        vec![names(&s, &[s.empty_event(), s.empty_event()])],
    );
}

fn example6(c: &mut Checks) {
    let s = fixtures::example6();
    let g = fixtures::g3x3(int(5));
    let th = ThresholdProfile::build(&s, &g).unwrap();
    c.eq("λ⁰", th.lambda0(Player::One).clone(), q(1, 2));
    let largest = largest_pair(&s, &th);
    c.eq("largest verdict", largest.report.verdict, false);
    let w = largest.report.conditions.c.witness.clone();
    c.eq(
        "g¹ witness at λ_1 = 1/4",
        w.map(|w| (w.lhs, w.rhs, w.bound, s.discount(w.player, s.state_index(&w.state).unwrap()).clone())),
        Some((q(2, 3), Extended::Finite(q(1, 2)), Bound::G1, q(1, 4))),
    );
    let top = quarter_pair(&s, &[q(3, 4)]);
    let cand = cooperation::candidate_pair(&s, &th, &top[0], &top[1]).unwrap();
    c.eq("candidate from ({3/4},{3/4})", names(&s, &cand.pair), names(&s, &top));
    c.eq(
        "({3/4},{3/4}) passes",
        check_pair(&s, &th, &top[0], &top[1], Mode::Bayesian).unwrap().verdict,
        true,
    );
    c.eq(
        "oracle confirms",
        payoff_oracle::is_bayes_equilibrium(&s, &g, &top[0], &top[1]).unwrap().holds,
        true,
    );
}

fn prisonerex4(c: &mut Checks) {
    let s = fixtures::prisonerex4_grid(100, q(1, 20));
    let th = ThresholdProfile::build(&s, &fixtures::pd()).unwrap();
    let largest = largest_pair(&s, &th);
    let t = threshold_of(&s, Player::One, &largest.pair()[0]);
    let tolerance = q(1, 20) + q(1, 100);
    let ok = t.as_ref().is_some_and(|t| (t - q(1, 2)).abs() <= tolerance);
    c.add(
        "player 1 cooperates on {λ_1 >= t} with t near 1/2",
        ok,
        format!("t = {}", t.show()),
    );
    c.eq("largest pair verdict", largest.report.verdict, true);
}

fn complete_info(c: &mut Checks) {
    let s = fixtures::complete_info(&[q(1, 4), q(1, 2), q(3, 4)]);
    for eps in [q(1, 100), q(1, 10)] {
        c.eq(
            &format!("MS definition at ε = {eps}"),
            almost_complete::ms_almost_complete(&s, &eps, &int(0)).unwrap().holds,
            true,
        );
        c.eq(
            &format!("strong definition at ε = {eps}"),
            almost_complete::strong_almost_complete(&s, &eps, Reading::Union).unwrap().holds,
            true,
        );
    }
}
