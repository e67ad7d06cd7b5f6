use coopkit::almost_complete::{self, Reading, RobustError, RobustnessReport};
use coopkit::belief_space::{BeliefSpace, Event, Player};
use coopkit::cooperation::{
    self, check_pair, enumerate_pairs, CoopError, CooperationReport, Mode,
};
use coopkit::demo::{self, DemoReport};
use coopkit::payoff_oracle::{self, DeviationReport, EquilibriumVerdict};
use coopkit::rational::format as fmt_q;
use coopkit::stage_game::{CooperationGame, ThresholdProfile};
use coopkit::{fixtures, Rational};
use serde::{Deserialize, Serialize};

use crate::args::{AnalyzeArgs, DemoArgs, ExportArgs, Format, RobustArgs, ValidateArgs};
use crate::error::{CliError, EXIT_VALIDATION};
use crate::load;

fn emit<T: Serialize>(format: Format, value: &T, text: impl FnOnce() -> String) -> Result<(), CliError> {
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(value)?),
        Format::Text => print!("{}", text()),
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Invariant {
    pub name: String,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidateReport {
    pub valid: bool,
    pub invariants: Vec<Invariant>,
}

fn ok(name: &str, detail: impl Into<String>) -> Invariant {
    Invariant {
        name: name.to_string(),
        passed: true,
        detail: detail.into(),
    }
}

pub fn validate(args: &ValidateArgs) -> Result<u8, CliError> {
    let mut invariants = Vec::new();
    let failed = |invariants: &mut Vec<Invariant>, e: CliError| match e {
        CliError::Invalid { kind, message } => {
            invariants.push(Invariant {
                name: kind,
                passed: false,
                detail: message,
            });
            Ok(())
        }
        other => Err(other),
    };
    match load::space(&args.space) {
        Ok(space) => {
            invariants.push(ok("parse", format!("{} states", space.len())));
            for name in [
                "states distinct",
                "discount factors in [0,1)",
                "kernel rows stochastic",
                "beliefs constant on own type",
                "own discount factor known",
            ] {
                invariants.push(ok(name, ""));
            }
            invariants.push(match space.prior() {
                Some(_) => ok("common prior", "kernels are the prior's conditionals"),
                None => ok("common prior", "none given"),
            });
            for p in Player::BOTH {
                let cells = space.information_partition(p).len();
                invariants.push(ok(&format!("types of player {p}"), format!("{cells} cells")));
            }
            if let Some(spec) = &args.game {
                match load::game(spec) {
                    Ok(game) => {
                        invariants.push(ok("game: sigma is a Nash equilibrium", ""));
                        invariants.push(ok("game: tau beats sigma and is not a best response", ""));
                        for p in Player::BOTH {
                            let l0 = game.cooperation_threshold(p).map_err(load::game_error)?;
                            invariants.push(ok(&format!("game: λ⁰ of player {p}"), fmt_q(&l0)));
                        }
                    }
                    Err(e) => failed(&mut invariants, e)?,
                }
            }
        }
        Err(e) => failed(&mut invariants, e)?,
    }
    let report = ValidateReport {
        valid: invariants.iter().all(|i| i.passed),
        invariants,
    };
    emit(args.format, &report, || {
        let mut out = String::new();
        for i in &report.invariants {
            let mark = if i.passed { "ok  " } else { "FAIL" };
            if i.detail.is_empty() {
                out += &format!("{mark} {}\n", i.name);
            } else {
                out += &format!("{mark} {}: {}\n", i.name, i.detail);
            }
        }
        out
    })?;
    Ok(if report.valid { 0 } else { EXIT_VALIDATION })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleCheck {
    pub verdict: EquilibriumVerdict,
    /// Whether the oracle agrees with the condition-based verdict.
    pub agrees: bool,
    pub deviations: DeviationReport,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairResult {
    pub report: CooperationReport,
    /// Rounds of the common-belief iteration behind a constructed pair.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rounds: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleCheck>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalyzeReport {
    pub states: usize,
    pub mode: Mode,
    pub lambda0: [String; 2],
    /// `Λ_1`, `Λ_2`.
    pub lambda: [Vec<String>; 2],
    pub largest: PairResult,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub enumeration: Option<Vec<[Vec<String>; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub candidate: Option<PairResult>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub check: Option<PairResult>,
}

fn coop_error(e: CoopError) -> CliError {
    CliError::invalid(&e)
}

struct Analysis<'a> {
    space: &'a BeliefSpace,
    game: &'a CooperationGame,
    thresholds: ThresholdProfile,
    mode: Mode,
    oracle: bool,
}

impl Analysis<'_> {
    fn pair(&self, k: &[Event; 2], rounds: Option<usize>) -> Result<PairResult, CliError> {
        let report = check_pair(self.space, &self.thresholds, &k[0], &k[1], self.mode).map_err(coop_error)?;
        let oracle = if self.oracle {
            let deviations = payoff_oracle::deviation_report(self.space, self.game, &k[0], &k[1])
                .map_err(|e| CliError::invalid(&e))?;
            let verdict = EquilibriumVerdict {
                holds: deviations.is_equilibrium(),
                max_gain: deviations.max_gain.clone(),
            };
            Some(OracleCheck {
                agrees: verdict.holds == report.verdict,
                verdict,
                deviations,
            })
        } else {
            None
        };
        Ok(PairResult { report, rounds, oracle })
    }
}

pub fn analyze(args: &AnalyzeArgs) -> Result<u8, CliError> {
    let space = load::space(&args.space)?;
    let game = load::game(&args.game)?;
    let thresholds = ThresholdProfile::build(&space, &game).map_err(load::game_error)?;
    let a = Analysis {
        space: &space,
        game: &game,
        thresholds,
        mode: args.mode.into(),
        oracle: args.oracle,
    };
    let th = &a.thresholds;
    let largest = cooperation::largest_pair(&space, th);
    let largest = a.pair(largest.pair(), Some(largest.candidate.common.rounds))?;
    let enumeration = if args.enumerate {
        let budget = args.budget.unwrap_or_else(cooperation::budget_from_env);
        let pairs = enumerate_pairs(&space, th, a.mode, budget).map_err(coop_error)?;
        Some(
            pairs
                .iter()
                .map(|p| [space.event_names(&p[0]), space.event_names(&p[1])])
                .collect(),
        )
    } else {
        None
    };
    let events = |texts: &Vec<String>| -> Result<[Event; 2], CliError> {
        Ok([
            load::event(&space, Player::One, &texts[0])?,
            load::event(&space, Player::Two, &texts[1])?,
        ])
    };
    let candidate = match &args.candidate {
        Some(texts) => {
            let c = events(texts)?;
            let cand = cooperation::candidate_pair(&space, th, &c[0], &c[1]).map_err(coop_error)?;
            Some(a.pair(&cand.pair, Some(cand.common.rounds))?)
        }
        None => None,
    };
    let check = match &args.check {
        Some(texts) => Some(a.pair(&events(texts)?, None)?),
        None => None,
    };
    let report = AnalyzeReport {
        states: space.len(),
        mode: a.mode,
        lambda0: Player::BOTH.map(|p| fmt_q(th.lambda0(p))),
        lambda: Player::BOTH.map(|p| space.event_names(th.lambda_region(p))),
        largest,
        enumeration,
        candidate,
        check,
    };
    emit(args.format, &report, || analyze_text(&report))?;
    Ok(0)
}

fn set(names: &[String]) -> String {
    format!("{{{}}}", names.join(", "))
}

fn pair_text(label: &str, r: &PairResult) -> String {
    let rep = &r.report;
    let mut out = format!("{label}: ({}, {})\n", set(&rep.k1), set(&rep.k2));
    out += &format!("  verdict: {}\n", rep.verdict);
    for (name, c) in [("a", &rep.conditions.a), ("b", &rep.conditions.b), ("c", &rep.conditions.c)] {
        if !c.checked {
            out += &format!("  ({name}) not checked\n");
        } else if let Some(w) = &c.witness {
            out += &format!(
                "  ({name}) fails: player {} at {}: {} vs {} [{:?}]\n",
                w.player,
                w.state,
                fmt_q(&w.lhs),
                w.rhs,
                w.bound
            );
        } else {
            out += &format!("  ({name}) holds\n");
        }
    }
    if let Some(rounds) = r.rounds {
        out += &format!("  common belief rounds: {rounds}\n");
    }
    if let Some(o) = &r.oracle {
        out += &format!(
            "  oracle: equilibrium {} (max gain {}), agrees {}\n",
            o.verdict.holds,
            fmt_q(&o.verdict.max_gain),
            o.agrees
        );
    }
    out
}

fn analyze_text(r: &AnalyzeReport) -> String {
    let mut out = format!("states: {}\nmode: {:?}\n", r.states, r.mode);
    for (i, l0) in r.lambda0.iter().enumerate() {
        out += &format!("λ⁰_{}: {l0}\nΛ_{}: {}\n", i + 1, i + 1, set(&r.lambda[i]));
    }
    out += &pair_text("largest", &r.largest);
    if let Some(pairs) = &r.enumeration {
        out += &format!("pairs of cooperation events: {}\n", pairs.len());
        for p in pairs {
            out += &format!("  ({}, {})\n", set(&p[0]), set(&p[1]));
        }
    }
    if let Some(c) = &r.candidate {
        out += &pair_text("candidate", c);
    }
    if let Some(c) = &r.check {
        out += &pair_text("check", c);
    }
    out
}

fn robust_error(e: RobustError) -> CliError {
    CliError::invalid(&e)
}

pub fn robust(args: &RobustArgs) -> Result<u8, CliError> {
    if !(args.ms || args.strong || args.profile || args.f_eps) {
        return Err(CliError::Usage("choose at least one of --ms, --strong, --profile, --f-eps".into()));
    }
    let space = load::space(&args.space)?;
    let eps = &args.eps;
    let mut reports: Vec<RobustnessReport> = Vec::new();
    if args.ms {
        let delta = args.delta.as_ref().unwrap_or(eps);
        reports.push(almost_complete::ms_almost_complete(&space, eps, delta).map_err(robust_error)?.report);
    }
    if args.strong {
        let reading = if args.per_nature { Reading::PerNature } else { Reading::Union };
        reports.push(almost_complete::strong_almost_complete(&space, eps, reading).map_err(robust_error)?.report);
    }
    if args.profile || args.f_eps {
        let game = load::game(&args.game)?;
        if args.profile {
            reports.push(almost_complete::robust_profile(&space, &game, eps).map_err(robust_error)?.report);
        }
        if args.f_eps {
            let eps_prime: Rational = args.eps_prime.clone().unwrap_or_else(|| game.m0() * eps);
            reports.push(
                almost_complete::f_epsilon_profile(&space, &game, eps, &eps_prime)
                    .map_err(robust_error)?
                    .report,
            );
        }
    }
    emit(args.format, &reports, || reports.iter().map(|r| robust_text(&space, r)).collect())?;
    Ok(0)
}

fn robust_text(space: &BeliefSpace, r: &RobustnessReport) -> String {
    let mut out = format!("{:?} ({:?}), ε = {}\n", r.kind, r.definition, fmt_q(&r.eps));
    let opt = |x: &Option<Rational>| x.as_ref().map(fmt_q);
    if let Some(h) = r.holds {
        out += &format!("  holds: {h}\n");
    }
    for (label, v) in [
        ("δ", opt(&r.delta)),
        ("ε'", opt(&r.eps_prime)),
        ("region mass", opt(&r.region_mass)),
        ("max gain", opt(&r.max_gain)),
        ("payoff scale", opt(&r.payoff_scale)),
        ("M0", opt(&r.m0)),
        ("mass of Λ outside D(Λ)", opt(&r.lambda_gap_mass)),
    ] {
        if let Some(v) = v {
            out += &format!("  {label}: {v}\n");
        }
    }
    out += &format!("  region: {} of {} states\n", r.region.len(), space.len());
    if let Some(pair) = &r.pair {
        for (i, k) in pair.iter().enumerate() {
            let event = space.event(k.iter().map(String::as_str)).unwrap_or_else(|_| space.empty_event());
            let player = if i == 0 { Player::One } else { Player::Two };
            match demo::threshold_of(space, player, &event) {
                Some(t) if k.len() > 8 => out += &format!("  K_{}: {{λ_{} >= {}}}\n", i + 1, i + 1, fmt_q(&t)),
                _ => out += &format!("  K_{}: {}\n", i + 1, set(k)),
            }
        }
    }
    for f in r.failures.iter().take(5) {
        out += &format!("  fails: player {} at {}\n", f.player, f.state);
    }
    out
}

pub fn demo(args: &DemoArgs) -> Result<u8, CliError> {
    let names: Vec<String> = match (&args.name, args.all) {
        (Some(n), _) => vec![n.clone()],
        (None, true) => demo::DEMOS.iter().map(|s| s.to_string()).collect(),
        (None, false) => {
            return Err(CliError::Usage(format!(
                "name an example ({}) or pass --all",
                demo::DEMOS.join(", ")
            )))
        }
    };
    let mut reports: Vec<DemoReport> = Vec::new();
    for n in &names {
        reports.push(demo::run_demo(n).map_err(|e| CliError::Usage(e.to_string()))?);
    }
    emit(args.format, &reports, || {
        let mut out = String::new();
        for r in &reports {
            out += &format!("{}: {}\n", r.name, if r.passed { "passed" } else { "FAILED" });
            for c in &r.checks {
                let mark = if c.passed { "ok  " } else { "FAIL" };
                out += &format!("  {mark} {}: {}\n", c.label, c.detail);
            }
        }
        out
    })?;
    Ok(if reports.iter().all(|r| r.passed) { 0 } else { EXIT_VALIDATION })
}

pub fn export(args: &ExportArgs) -> Result<u8, CliError> {
    let doc = match (&args.space, &args.game) {
        (Some(name), _) => fixtures::space_by_name(name)
            .ok_or_else(|| CliError::Usage(format!("unknown built-in space `{name}`")))?
            .to_json(),
        (None, Some(name)) => fixtures::game_by_name(name).map_err(load::game_error)?.to_json(),
        (None, None) => return Err(CliError::Usage("pass --space or --game".into())),
    };
    println!("{}", serde_json::to_string_pretty(&doc)?);
    Ok(0)
}
