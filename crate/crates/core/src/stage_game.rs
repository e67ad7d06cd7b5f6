//! Stage games, the punishment/cooperation profile pair `(σ, τ)` and the
//! threshold quantities that drive the cooperation conditions.
//!
//! For player `i` facing `j`, with `u = u_i` extended multilinearly to mixed
//! actions, the thresholds at discount factor `λ` are:
//!
//! * `λ⁰_i`, the least `λ` at which no one-shot deviation from `τ` pays
//!   against a grim-trigger opponent;
//! * `f_i(λ)`, the least probability of facing a cooperator that keeps a
//!   cooperating type from opening with a deviation `a ∈ F_i`;
//! * `g_i(λ) = min(g¹, g²(λ), g³(λ))`, the largest such probability that
//!   keeps a punishing type from switching to `τ_i` (`g²`, `g³`) or to a
//!   better reply against `τ_j` (`g¹`).
//!
//! Empty maxima are 0 and empty minima are 1. Ratios whose denominator
//! vanishes or turns negative are `+inf`, which covers `λ = 0`.

use std::collections::HashMap;

use num_traits::{One, Signed, Zero};
use serde_json::{Map, Value};
use thiserror::Error;

use crate::belief_operators::{ThresholdFunction, ThresholdPair};
use crate::belief_space::{BeliefSpace, Event, Player};
use crate::rational::{self, Extended, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GameError {
    #[error("malformed stage game document: {0}")]
    Parse(String),
    #[error("payoff table is incomplete or has the wrong shape")]
    BadShape,
    #[error("mixed action of player {0} is not a probability vector")]
    BadMixedAction(Player),
    #[error("sigma is not a Nash equilibrium of the stage game")]
    NotNash,
    #[error("tau fails for player {0}: it must beat sigma and must not be a best response to sigma")]
    BadTau(Player),
    #[error("tau action of player {0} lies in the support of sigma")]
    TauInSigmaSupport(Player),
    #[error("cooperation is unsustainable for player {0} at every discount factor below 1")]
    NoThreshold(Player),
    #[error("unknown game `{0}`")]
    UnknownGame(String),
}

/// A finite two-player bimatrix game.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StageGame {
    actions: [Vec<String>; 2],
    /// `payoffs[i][a1][a2]`.
    payoffs: [Vec<Vec<Rational>>; 2],
}

impl StageGame {
    pub fn new(actions: [Vec<String>; 2], payoffs: [Vec<Vec<Rational>>; 2]) -> Result<Self, GameError> {
        let (n1, n2) = (actions[0].len(), actions[1].len());
        if n1 == 0 || n2 == 0 {
            return Err(GameError::BadShape);
        }
        for table in &payoffs {
            if table.len() != n1 || table.iter().any(|row| row.len() != n2) {
                return Err(GameError::BadShape);
            }
        }
        Ok(StageGame { actions, payoffs })
    }

    pub fn actions(&self, player: Player) -> &[String] {
        &self.actions[player.index()]
    }

    pub fn action_index(&self, player: Player, name: &str) -> Option<usize> {
        self.actions(player).iter().position(|a| a == name)
    }

    pub fn is_two_by_two(&self) -> bool {
        self.actions[0].len() == 2 && self.actions[1].len() == 2
    }

    /// `u_player` when `player` plays `own` and the opponent plays `opp`.
    pub fn payoff(&self, player: Player, own: usize, opp: usize) -> &Rational {
        match player {
            Player::One => &self.payoffs[0][own][opp],
            Player::Two => &self.payoffs[1][opp][own],
        }
    }

    /// Multilinear extension to mixed actions.
    pub fn expected(&self, player: Player, own: &[Rational], opp: &[Rational]) -> Rational {
        let mut total = Rational::zero();
        for (a, pa) in own.iter().enumerate() {
            if pa.is_zero() {
                continue;
            }
            for (b, pb) in opp.iter().enumerate() {
                if pb.is_zero() {
                    continue;
                }
                total += pa * pb * self.payoff(player, a, b);
            }
        }
        total
    }

    /// Pure `own` against mixed `opp`.
    pub fn against(&self, player: Player, own: usize, opp: &[Rational]) -> Rational {
        opp.iter()
            .enumerate()
            .filter(|(_, p)| !p.is_zero())
            .map(|(b, p)| p * self.payoff(player, own, b))
            .sum()
    }

    pub fn max_abs_payoff(&self) -> Rational {
        self.payoffs
            .iter()
            .flatten()
            .flatten()
            .map(|u| u.abs())
            .max()
            .unwrap_or_else(Rational::zero)
    }
}

pub fn pure(n: usize, a: usize) -> Vec<Rational> {
    (0..n)
        .map(|b| if a == b { Rational::one() } else { Rational::zero() })
        .collect()
}

fn is_distribution(v: &[Rational], n: usize) -> bool {
    v.len() == n && v.iter().all(|p| !p.is_negative()) && v.iter().sum::<Rational>().is_one()
}

/// True iff `sigma` is a mixed Nash equilibrium: no pure action beats the
/// equilibrium payoff, and every action in the support attains it.
pub fn verify_nash(game: &StageGame, sigma: &[Vec<Rational>; 2]) -> bool {
    Player::BOTH.into_iter().all(|player| {
        let (own, opp) = (&sigma[player.index()], &sigma[player.other().index()]);
        if !is_distribution(own, game.actions(player).len())
            || !is_distribution(opp, game.actions(player.other()).len())
        {
            return false;
        }
        let value = game.expected(player, own, opp);
        (0..own.len()).all(|a| {
            let u = game.against(player, a, opp);
            u <= value && (own[a].is_zero() || u == value)
        })
    })
}

fn is_best_response(game: &StageGame, player: Player, a: usize, opp: &[Rational]) -> bool {
    let u = game.against(player, a, opp);
    (0..game.actions(player).len()).all(|b| game.against(player, b, opp) <= u)
}

/// True iff `u_i(τ) > u_i(σ)` and `τ_i` is not a best response to `σ_j`, for both players.
pub fn validate_tau(game: &StageGame, sigma: &[Vec<Rational>; 2], tau: [usize; 2]) -> bool {
    Player::BOTH.into_iter().all(|p| tau_ok(game, sigma, tau, p))
}

fn tau_ok(game: &StageGame, sigma: &[Vec<Rational>; 2], tau: [usize; 2], player: Player) -> bool {
    let (i, j) = (player.index(), player.other().index());
    if tau[i] >= game.actions(player).len() || tau[j] >= game.actions(player.other()).len() {
        return false;
    }
    let u_tau = game.payoff(player, tau[i], tau[j]);
    let u_sigma = game.expected(player, &sigma[i], &sigma[j]);
    *u_tau > u_sigma && !is_best_response(game, player, tau[i], &sigma[j])
}

/// `σ` (mixed, punishment) and `τ` (pure, cooperation target).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProfilePair {
    pub sigma: [Vec<Rational>; 2],
    pub tau: [usize; 2],
}

/// Which part of `g` is binding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GComponent {
    G1,
    G2,
    G3,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FValue {
    pub value: Extended,
    /// Maximising deviations in `F_i`.
    pub witnesses: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GValue {
    pub g1: Extended,
    pub g2: Extended,
    pub g3: Extended,
    pub value: Extended,
    pub g1_witnesses: Vec<usize>,
    pub g3_witnesses: Vec<usize>,
    /// Components attaining the minimum.
    pub binding: Vec<GComponent>,
}

/// A stage game together with a validated `(σ, τ)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CooperationGame {
    game: StageGame,
    profile: ProfilePair,
}

/// Payoff constants of one player that every threshold formula uses.
struct Terms {
    u_tau: Rational,
    u_sigma: Rational,
    /// `u_i(τ_i, σ_j)`
    tau_vs_sigma: Rational,
    /// `u_i(σ_i, τ_j)`
    sigma_vs_tau: Rational,
    /// `u_i(a, τ_j)` per action
    vs_tau: Vec<Rational>,
    /// `u_i(a, σ_j)` per action
    vs_sigma: Vec<Rational>,
    tau_i: usize,
}

fn ratio_or_inf(num: Rational, den: Rational) -> Extended {
    if den.is_positive() {
        Extended::Finite(num / den)
    } else {
        Extended::PosInf
    }
}

impl CooperationGame {
    pub fn new(game: StageGame, profile: ProfilePair) -> Result<Self, GameError> {
        for player in Player::BOTH {
            if !is_distribution(&profile.sigma[player.index()], game.actions(player).len()) {
                return Err(GameError::BadMixedAction(player));
            }
        }
        if !verify_nash(&game, &profile.sigma) {
            return Err(GameError::NotNash);
        }
        for player in Player::BOTH {
            if !tau_ok(&game, &profile.sigma, profile.tau, player) {
                return Err(GameError::BadTau(player));
            }
            let i = player.index();
            if !profile.sigma[i][profile.tau[i]].is_zero() {
                return Err(GameError::TauInSigmaSupport(player));
            }
        }
        Ok(CooperationGame { game, profile })
    }

    pub fn game(&self) -> &StageGame {
        &self.game
    }

    pub fn profile(&self) -> &ProfilePair {
        &self.profile
    }

    pub fn sigma(&self, player: Player) -> &[Rational] {
        &self.profile.sigma[player.index()]
    }

    pub fn tau(&self, player: Player) -> usize {
        self.profile.tau[player.index()]
    }

    fn terms(&self, player: Player) -> Terms {
        let g = &self.game;
        let (i, j) = (player.index(), player.other().index());
        let sigma_i = &self.profile.sigma[i];
        let sigma_j = &self.profile.sigma[j];
        let tau_i = self.profile.tau[i];
        let tau_j_mixed = pure(g.actions(player.other()).len(), self.profile.tau[j]);
        let n = g.actions(player).len();
        Terms {
            u_tau: g.payoff(player, tau_i, self.profile.tau[j]).clone(),
            u_sigma: g.expected(player, sigma_i, sigma_j),
            tau_vs_sigma: g.against(player, tau_i, sigma_j),
            sigma_vs_tau: g.expected(player, sigma_i, &tau_j_mixed),
            vs_tau: (0..n).map(|a| g.against(player, a, &tau_j_mixed)).collect(),
            vs_sigma: (0..n).map(|a| g.against(player, a, sigma_j)).collect(),
            tau_i,
        }
    }

    /// `λ⁰_i`, in closed form from the binding deviation.
    ///
    /// Deviation `a` is deterred iff `(u(τ) - u(a,τ_j)) + λ (u(a,τ_j) - u(σ)) >= 0`.
    pub fn cooperation_threshold(&self, player: Player) -> Result<Rational, GameError> {
        let t = self.terms(player);
        let mut threshold = Rational::zero();
        for (a, dev) in t.vs_tau.iter().enumerate() {
            if a == t.tau_i {
                continue;
            }
            let c0 = &t.u_tau - dev;
            let c1 = dev - &t.u_sigma;
            if !c0.is_negative() {
                // Holds at λ = 0; it keeps holding on [0,1) unless it decays.
                if c1.is_negative() && (&c0 + &c1).is_negative() {
                    return Err(GameError::NoThreshold(player));
                }
                continue;
            }
            if !c1.is_positive() {
                return Err(GameError::NoThreshold(player));
            }
            let bound = -c0 / c1;
            if bound >= Rational::one() {
                return Err(GameError::NoThreshold(player));
            }
            threshold = threshold.max(bound);
        }
        Ok(threshold)
    }

    /// `f_i(λ)`.
    pub fn f_value(&self, player: Player, lambda: &Rational) -> FValue {
        self.f_value_with_slack(player, lambda, &Rational::zero())
    }

    /// `f_i` with `slack` subtracted from every numerator; `slack = 0` is `f_i`.
    pub fn f_value_with_slack(&self, player: Player, lambda: &Rational, slack: &Rational) -> FValue {
        let t = self.terms(player);
        let one = Rational::one();
        let mut best = Extended::zero();
        let mut witnesses = Vec::new();
        let mut any = false;
        for a in 0..t.vs_sigma.len() {
            let gain = &t.vs_sigma[a] - &t.tau_vs_sigma;
            if !gain.is_positive() {
                continue;
            }
            let den = if lambda.is_zero() {
                // Limit form with λ/(1-λ) = 0, 1/(1-λ) = 1.
                &t.u_tau - &t.vs_tau[a]
            } else {
                &t.u_tau / (&one - lambda) - (&t.vs_tau[a] + &t.u_sigma * lambda / (&one - lambda))
            };
            let value = ratio_or_inf(&gain - slack, den + &gain);
            if !any || value > best {
                best = value;
                witnesses = vec![a];
                any = true;
            } else if value == best {
                witnesses.push(a);
            }
        }
        FValue {
            value: best,
            witnesses,
        }
    }

    /// `g_i(λ)` and its components.
    pub fn g_value(&self, player: Player, lambda: &Rational) -> GValue {
        let t = self.terms(player);
        let one = Rational::one();

        let mut g1 = Extended::one();
        let mut g1_witnesses = Vec::new();
        for a in 0..t.vs_tau.len() {
            if a == t.tau_i {
                continue;
            }
            let better_vs_tau = &t.vs_tau[a] - &t.sigma_vs_tau;
            if !better_vs_tau.is_positive() {
                continue;
            }
            let loss_vs_sigma = &t.u_sigma - &t.vs_sigma[a];
            let v = ratio_or_inf(loss_vs_sigma.clone(), loss_vs_sigma + better_vs_tau);
            push_min(&mut g1, &mut g1_witnesses, v, a);
        }

        let loss = &t.u_sigma - &t.tau_vs_sigma;
        let keep_cooperating = &t.u_tau / (&one - lambda)
            - (&t.sigma_vs_tau + &t.u_sigma * lambda / (&one - lambda));
        let g2 = if keep_cooperating.is_positive() {
            ratio_or_inf(loss.clone(), &loss + keep_cooperating)
        } else {
            Extended::one()
        };

        let mut g3 = Extended::one();
        let mut g3_witnesses = Vec::new();
        for a in 0..t.vs_tau.len() {
            if a == t.tau_i {
                continue;
            }
            let z = &t.u_tau - &t.sigma_vs_tau + (&t.vs_tau[a] - &t.u_sigma) * lambda;
            if !z.is_positive() {
                continue;
            }
            let v = ratio_or_inf(loss.clone(), &loss + z);
            push_min(&mut g3, &mut g3_witnesses, v, a);
        }

        let value = g1.clone().min(g2.clone()).min(g3.clone());
        let binding = [(GComponent::G1, &g1), (GComponent::G2, &g2), (GComponent::G3, &g3)]
            .into_iter()
            .filter(|(_, v)| **v == value)
            .map(|(c, _)| c)
            .collect();
        GValue {
            g1,
            g2,
            g3,
            value,
            g1_witnesses,
            g3_witnesses,
            binding,
        }
    }

    /// `M₀ = 2 max_i (u_i(σ) - u_i(τ_i, σ_j))`.
    pub fn m0(&self) -> Rational {
        Player::BOTH
            .into_iter()
            .map(|p| {
                let t = self.terms(p);
                &t.u_sigma - &t.tau_vs_sigma
            })
            .max()
            .map(|m| m * Rational::from_integer(2.into()))
            .unwrap_or_else(Rational::zero)
    }

    pub fn from_json_str(text: &str) -> Result<Self, GameError> {
        let doc: Value = serde_json::from_str(text).map_err(|e| GameError::Parse(e.to_string()))?;
        Self::from_json(&doc)
    }

    pub fn from_json(doc: &Value) -> Result<Self, GameError> {
        let perr = |m: &str| GameError::Parse(m.to_string());
        let obj = doc.as_object().ok_or_else(|| perr("expected an object"))?;
        let acts = obj
            .get("actions")
            .and_then(Value::as_array)
            .filter(|a| a.len() == 2)
            .ok_or_else(|| perr("`actions` must be a pair of lists"))?;
        let mut actions: [Vec<String>; 2] = [Vec::new(), Vec::new()];
        for (k, list) in acts.iter().enumerate() {
            actions[k] = list
                .as_array()
                .ok_or_else(|| perr("action list must be an array"))?
                .iter()
                .map(|a| a.as_str().map(str::to_string).ok_or_else(|| perr("action names must be strings")))
                .collect::<Result<_, _>>()?;
        }
        let pay = obj
            .get("payoffs")
            .and_then(Value::as_object)
            .ok_or_else(|| perr("`payoffs` must be an object"))?;
        let mut payoffs: [Vec<Vec<Rational>>; 2] = [Vec::new(), Vec::new()];
        for player in Player::BOTH {
            let table = pay
                .get(&player.number().to_string())
                .and_then(Value::as_object)
                .ok_or_else(|| perr("missing payoff table"))?;
            let mut rows = vec![vec![Rational::zero(); actions[1].len()]; actions[0].len()];
            let mut seen = 0;
            for (key, v) in table {
                let (a1, a2) = key.split_once(',').ok_or_else(|| perr("payoff keys look like \"A,B\""))?;
                let i1 = actions[0].iter().position(|a| a == a1.trim()).ok_or_else(|| perr("unknown action in payoff key"))?;
                let i2 = actions[1].iter().position(|a| a == a2.trim()).ok_or_else(|| perr("unknown action in payoff key"))?;
                rows[i1][i2] = rational::from_json(v).map_err(|e| GameError::Parse(e.to_string()))?;
                seen += 1;
            }
            if seen != actions[0].len() * actions[1].len() {
                return Err(GameError::BadShape);
            }
            payoffs[player.index()] = rows;
        }
        let game = StageGame::new(actions, payoffs)?;

        let sig = obj
            .get("sigma")
            .and_then(Value::as_array)
            .filter(|a| a.len() == 2)
            .ok_or_else(|| perr("`sigma` must be a pair of mixed actions"))?;
        let mut sigma: [Vec<Rational>; 2] = [Vec::new(), Vec::new()];
        for player in Player::BOTH {
            let m = sig[player.index()].as_object().ok_or_else(|| perr("mixed action must be an object"))?;
            let mut v = vec![Rational::zero(); game.actions(player).len()];
            for (name, p) in m {
                let a = game.action_index(player, name).ok_or_else(|| perr("unknown action in sigma"))?;
                v[a] = rational::from_json(p).map_err(|e| GameError::Parse(e.to_string()))?;
            }
            sigma[player.index()] = v;
        }
        let tau_v = obj
            .get("tau")
            .and_then(Value::as_array)
            .filter(|a| a.len() == 2)
            .ok_or_else(|| perr("`tau` must be a pair of action names"))?;
        let mut tau = [0usize; 2];
        for player in Player::BOTH {
            let name = tau_v[player.index()].as_str().ok_or_else(|| perr("tau entries are action names"))?;
            tau[player.index()] = game.action_index(player, name).ok_or_else(|| perr("unknown action in tau"))?;
        }
        CooperationGame::new(game, ProfilePair { sigma, tau })
    }

    pub fn to_json(&self) -> Value {
        let g = &self.game;
        let mut payoffs = Map::new();
        for player in Player::BOTH {
            let mut table = Map::new();
            for (i1, a1) in g.actions(Player::One).iter().enumerate() {
                for (i2, a2) in g.actions(Player::Two).iter().enumerate() {
                    table.insert(
                        format!("{a1},{a2}"),
                        Value::String(rational::format(&g.payoffs[player.index()][i1][i2])),
                    );
                }
            }
            payoffs.insert(player.number().to_string(), Value::Object(table));
        }
        let sigma: Vec<Value> = Player::BOTH
            .into_iter()
            .map(|p| {
                let mut m = Map::new();
                for (a, prob) in self.sigma(p).iter().enumerate() {
                    if !prob.is_zero() {
                        m.insert(g.actions(p)[a].clone(), Value::String(rational::format(prob)));
                    }
                }
                Value::Object(m)
            })
            .collect();
        let mut doc = Map::new();
        doc.insert(
            "actions".into(),
            Value::Array(
                Player::BOTH
                    .into_iter()
                    .map(|p| Value::Array(g.actions(p).iter().cloned().map(Value::String).collect()))
                    .collect(),
            ),
        );
        doc.insert("payoffs".into(), Value::Object(payoffs));
        doc.insert("sigma".into(), Value::Array(sigma));
        doc.insert(
            "tau".into(),
            Value::Array(
                Player::BOTH
                    .into_iter()
                    .map(|p| Value::String(g.actions(p)[self.tau(p)].clone()))
                    .collect(),
            ),
        );
        Value::Object(doc)
    }
}

fn push_min(best: &mut Extended, witnesses: &mut Vec<usize>, value: Extended, a: usize) {
    if value < *best {
        *best = value;
        witnesses.clear();
        witnesses.push(a);
    } else if value == *best {
        witnesses.push(a);
    }
}

/// Free-function forms of the threshold computations.
pub fn cooperation_threshold(game: &CooperationGame, player: Player) -> Result<Rational, GameError> {
    game.cooperation_threshold(player)
}

pub fn f_function(game: &CooperationGame, player: Player, lambda: &Rational) -> FValue {
    game.f_value(player, lambda)
}

pub fn g_function(game: &CooperationGame, player: Player, lambda: &Rational) -> GValue {
    game.g_value(player, lambda)
}

/// Thresholds of a game realised on a belief space.
#[derive(Debug, Clone)]
pub struct ThresholdProfile {
    lambda0: [Rational; 2],
    f_values: [Vec<FValue>; 2],
    g_values: [Vec<GValue>; 2],
    f: ThresholdPair,
    g: ThresholdPair,
    lambda_regions: [Event; 2],
    two_by_two: bool,
}

impl ThresholdProfile {
    pub fn build(space: &BeliefSpace, game: &CooperationGame) -> Result<Self, GameError> {
        let n = space.len();
        let lambda0 = [
            game.cooperation_threshold(Player::One)?,
            game.cooperation_threshold(Player::Two)?,
        ];
        let mut f_values: [Vec<FValue>; 2] = [Vec::with_capacity(n), Vec::with_capacity(n)];
        let mut g_values: [Vec<GValue>; 2] = [Vec::with_capacity(n), Vec::with_capacity(n)];
        for player in Player::BOTH {
            let mut cache: HashMap<&Rational, (FValue, GValue)> = HashMap::new();
            for w in 0..n {
                let l = space.discount(player, w);
                let (fv, gv) = cache
                    .entry(l)
                    .or_insert_with(|| (game.f_value(player, l), game.g_value(player, l)))
                    .clone();
                f_values[player.index()].push(fv);
                g_values[player.index()].push(gv);
            }
        }
        let func = |vals: &Vec<FValue>| ThresholdFunction::new(vals.iter().map(|v| v.value.clone()).collect());
        let gfunc = |vals: &Vec<GValue>| ThresholdFunction::new(vals.iter().map(|v| v.value.clone()).collect());
        let lambda_regions = [Player::One, Player::Two]
            .map(|p| space.event_from_fn(|w| *space.discount(p, w) >= lambda0[p.index()]));
        let two_by_two = game.game().is_two_by_two();
        let profile = ThresholdProfile {
            f: [func(&f_values[0]), func(&f_values[1])],
            g: [gfunc(&g_values[0]), gfunc(&g_values[1])],
            lambda0,
            f_values,
            g_values,
            lambda_regions,
            two_by_two,
        };
        if two_by_two {
            let one = Extended::one();
            for player in Player::BOTH {
                for w in 0..n {
                    debug_assert_eq!(
                        profile.f[player.index()].value(w).clone().min(one.clone()),
                        profile.g[player.index()].value(w).clone().min(one.clone()),
                        "f and g disagree below 1 in a 2x2 game"
                    );
                }
            }
        }
        Ok(profile)
    }

    pub fn lambda0(&self, player: Player) -> &Rational {
        &self.lambda0[player.index()]
    }

    pub fn f_pair(&self) -> &ThresholdPair {
        &self.f
    }

    pub fn g_pair(&self) -> &ThresholdPair {
        &self.g
    }

    pub fn f_at(&self, player: Player, w: usize) -> &FValue {
        &self.f_values[player.index()][w]
    }

    pub fn g_at(&self, player: Player, w: usize) -> &GValue {
        &self.g_values[player.index()][w]
    }

    /// Upper bound used by the "never cooperates" condition: `f` for 2x2
    /// games and `g` otherwise.
    pub fn punishment_bound(&self, player: Player) -> &ThresholdFunction {
        if self.two_by_two {
            &self.f[player.index()]
        } else {
            &self.g[player.index()]
        }
    }

    pub fn is_two_by_two(&self) -> bool {
        self.two_by_two
    }

    /// `Λ_i = {λ_i >= λ⁰_i}`.
    pub fn lambda_region(&self, player: Player) -> &Event {
        &self.lambda_regions[player.index()]
    }

    /// `Λ = Λ_1 ∩ Λ_2`.
    pub fn lambda_both(&self) -> Event {
        self.lambda_regions[0].intersection(&self.lambda_regions[1])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{g3x3, pd};
    use crate::rational::{int, q};

    #[test]
    fn pd_nash_and_tau() {
        let g = pd();
        let d = pure(2, 0);
        let c = pure(2, 1);
        assert!(verify_nash(g.game(), &[d.clone(), d.clone()]));
        assert!(!verify_nash(g.game(), &[c.clone(), c.clone()]));
        assert!(validate_tau(g.game(), &[d.clone(), d.clone()], [1, 1]));
        assert!(!validate_tau(g.game(), &[d.clone(), d], [0, 0]));
    }

    #[test]
    fn matching_pennies_half_half_is_nash() {
        let one = int(1);
        let game = StageGame::new(
            [vec!["H".into(), "T".into()], vec!["H".into(), "T".into()]],
            [
                vec![vec![one.clone(), -one.clone()], vec![-one.clone(), one.clone()]],
                vec![vec![-one.clone(), one.clone()], vec![one.clone(), -one]],
            ],
        )
        .unwrap();
        let half = vec![q(1, 2), q(1, 2)];
        assert!(verify_nash(&game, &[half.clone(), half.clone()]));
        assert!(!verify_nash(&game, &[pure(2, 0), half]));
    }

    #[test]
    fn g3x3_profile_is_valid() {
        let g = g3x3(q(6, 1));
        assert!(validate_tau(g.game(), &g.profile().sigma, g.profile().tau));
    }

    #[test]
    fn cooperation_thresholds() {
        assert_eq!(pd().cooperation_threshold(Player::One).unwrap(), q(1, 3));
        assert_eq!(g3x3(int(5)).cooperation_threshold(Player::Two).unwrap(), q(1, 2));
        for a in [int(5), int(6), q(9, 2), int(11)] {
            let expected = (&a - int(3)) / (&a - int(1));
            assert_eq!(g3x3(a).cooperation_threshold(Player::One).unwrap(), expected);
        }
    }

    #[test]
    fn pd_f_values() {
        let g = pd();
        assert_eq!(g.f_value(Player::One, &q(3, 4)).value, Extended::Finite(q(1, 6)));
        assert_eq!(g.f_value(Player::One, &q(1, 2)).value, Extended::Finite(q(1, 2)));
        assert_eq!(g.f_value(Player::Two, &q(1, 4)).value, Extended::Finite(q(3, 2)));
        assert_eq!(g.f_value(Player::One, &int(0)).value, Extended::PosInf);
        assert_eq!(g.f_value(Player::One, &q(3, 4)).witnesses, vec![0]);
    }

    #[test]
    fn pd_g_components() {
        let g = pd();
        let v = g.g_value(Player::One, &q(3, 4));
        assert_eq!(v.g1, Extended::one());
        assert_eq!(v.g2, Extended::Finite(q(1, 6)));
        // Cooperating once and then defecting: loss 1 over (1 + 3·3/4 - 1).
        assert_eq!(v.g3, Extended::Finite(q(4, 9)));
        assert_eq!(v.value, Extended::Finite(q(1, 6)));
        assert_eq!(v.binding, vec![GComponent::G2]);
    }

    #[test]
    fn g3x3_threshold_formulas() {
        for a in [int(5), int(6), int(7)] {
            let g = g3x3(a.clone());
            for l in [q(3, 5), q(2, 3), q(3, 4), q(9, 10)] {
                let v = g.g_value(Player::One, &l);
                assert_eq!(v.g1, Extended::Finite(int(1) / (&a - int(3))));
                assert_eq!(v.g3, Extended::Finite(int(1) / ((&a - int(1)) * &l)));
                let closed = (int(1) - &l) / (int(2) * &l);
                assert_eq!(v.g2, Extended::Finite(closed.clone()));
                assert_eq!(g.f_value(Player::One, &l).value, Extended::Finite(closed));
            }
        }
    }

    #[test]
    fn g3x3_f_can_drop_below_one_outside_lambda() {
        // N is not in F (it does no better than C against D), so f only sees D
        // while λ⁰ is driven by N.
        let g = g3x3(int(5));
        let l = q(2, 5);
        assert!(l < g.cooperation_threshold(Player::One).unwrap());
        assert!(g.f_value(Player::One, &l).value.le_rational(&int(1)));
    }

    #[test]
    fn m0_of_pd() {
        assert_eq!(pd().m0(), int(2));
    }

    #[test]
    fn constructor_rejections() {
        let base = pd();
        let mut bad = base.profile().clone();
        bad.sigma = [pure(2, 1), pure(2, 1)];
        assert_eq!(CooperationGame::new(base.game().clone(), bad), Err(GameError::NotNash));
        let mut bad = base.profile().clone();
        bad.tau = [0, 1];
        assert_eq!(CooperationGame::new(base.game().clone(), bad), Err(GameError::BadTau(Player::One)));
    }

    #[test]
    fn json_round_trip() {
        let g = g3x3(int(5));
        let text = serde_json::to_string(&g.to_json()).unwrap();
        assert_eq!(CooperationGame::from_json_str(&text).unwrap(), g);
        let doc = r#"{"actions": [["D","C"], ["D","C"]],
            "payoffs": {"1": {"D,D": "1", "D,C": "4", "C,D": "0", "C,C": "3"},
                        "2": {"D,D": "1", "D,C": "0", "C,D": "4", "C,C": "3"}},
            "sigma": [{"D": "1"}, {"D": "1"}], "tau": ["C","C"]}"#;
        assert_eq!(CooperationGame::from_json_str(doc).unwrap(), pd());
    }
}
