//! Built-in games and belief spaces.
//!
//! States are named `(λ1,λ2)` with both discount factors in canonical
//! `p/q` form, except in [`duplicated_nature`] where two states share a pair.

use num_traits::{One, Zero};

use crate::belief_space::{BeliefSpace, Player};
use crate::rational::{self, int, q, Rational};
use crate::stage_game::{pure, CooperationGame, GameError, ProfilePair, StageGame};

fn names(actions: &[&str]) -> Vec<String> {
    actions.iter().map(|a| a.to_string()).collect()
}

fn table(rows: &[&[Rational]]) -> Vec<Vec<Rational>> {
    rows.iter().map(|r| r.to_vec()).collect()
}

/// The Prisoner's Dilemma with `σ = (D, D)` and `τ = (C, C)`.
pub fn pd() -> CooperationGame {
    let u1 = table(&[&[int(1), int(4)], &[int(0), int(3)]]);
    let u2 = table(&[&[int(1), int(0)], &[int(4), int(3)]]);
    let game = StageGame::new([names(&["D", "C"]), names(&["D", "C"])], [u1, u2]).expect("well formed");
    CooperationGame::new(
        game,
        ProfilePair {
            sigma: [pure(2, 0), pure(2, 0)],
            tau: [1, 1],
        },
    )
    .expect("valid profile")
}

/// The 3x3 family with a third action `N` that pays `a` against `C`.
///
/// Actions are `[D, C, N]`. Cells the family leaves free are set to 0.
pub fn try_g3x3(a: Rational) -> Result<CooperationGame, GameError> {
    let z = Rational::zero;
    let u1 = table(&[&[int(1), int(4), z()], &[int(0), int(3), z()], &[int(0), a.clone(), z()]]);
    let u2 = table(&[&[int(1), int(0), int(0)], &[int(4), int(3), a], &[z(), z(), z()]]);
    let game = StageGame::new([names(&["D", "C", "N"]), names(&["D", "C", "N"])], [u1, u2])?;
    CooperationGame::new(
        game,
        ProfilePair {
            sigma: [pure(3, 0), pure(3, 0)],
            tau: [1, 1],
        },
    )
}

/// [`try_g3x3`] for parameters where the profile is valid.
pub fn g3x3(a: Rational) -> CooperationGame {
    try_g3x3(a).expect("valid parameter")
}

/// `pd`, `g3x3` (a = 6) or `g3x3:a=<rational>`.
pub fn game_by_name(spec: &str) -> Result<CooperationGame, GameError> {
    let spec = spec.trim();
    match spec {
        "pd" => return Ok(pd()),
        "g3x3" => return try_g3x3(int(6)),
        _ => {}
    }
    if let Some(param) = spec.strip_prefix("g3x3:") {
        let value = param.strip_prefix("a=").unwrap_or(param);
        let a = rational::parse(value).map_err(|_| GameError::UnknownGame(spec.to_string()))?;
        return try_g3x3(a);
    }
    Err(GameError::UnknownGame(spec.to_string()))
}

pub fn state_name(l: &[Rational; 2]) -> String {
    format!("({},{})", rational::format(&l[0]), rational::format(&l[1]))
}

/// Belief space on `values1 × values2` whose beliefs are derived from
/// `prior`; zero-prior states are kept and believe as their cell does.
fn from_prior(values: &[Rational], weight: impl Fn(&Rational, &Rational) -> Rational) -> BeliefSpace {
    let mut lambda = Vec::new();
    for x in values {
        for y in values {
            lambda.push([x.clone(), y.clone()]);
        }
    }
    let prior: Vec<Rational> = lambda.iter().map(|l| weight(&l[0], &l[1])).collect();
    let total: Rational = prior.iter().sum();
    let prior: Vec<Rational> = prior.into_iter().map(|p| p / &total).collect();
    let kernels = [Player::One, Player::Two].map(|p| {
        let i = p.index();
        lambda
            .iter()
            .map(|l| {
                let cell: Vec<usize> = (0..lambda.len()).filter(|&v| lambda[v][i] == l[i]).collect();
                let mass: Rational = cell.iter().map(|&v| prior[v].clone()).sum();
                cell.into_iter()
                    .map(|v| (v, &prior[v] / &mass))
                    .collect::<Vec<_>>()
            })
            .collect::<Vec<_>>()
    });
    let states = lambda.iter().map(state_name).collect();
    BeliefSpace::build(states, lambda, kernels, Some(prior)).expect("valid space")
}

/// Belief space on `values²` where player `i` with own discount `x`
/// holds belief `row(x)` over the other discount, given in `values` order.
fn from_table(values: &[Rational], row: impl Fn(usize) -> Vec<Rational>) -> BeliefSpace {
    let n = values.len();
    let mut lambda = Vec::new();
    for x in values {
        for y in values {
            lambda.push([x.clone(), y.clone()]);
        }
    }
    let idx = |a: usize, b: usize| a * n + b;
    let kernels = [Player::One, Player::Two].map(|p| {
        (0..n * n)
            .map(|w| {
                let (a, b) = (w / n, w % n);
                let own = if p == Player::One { a } else { b };
                row(own)
                    .into_iter()
                    .enumerate()
                    .filter(|(_, pr)| !pr.is_zero())
                    .map(|(other, pr)| {
                        let v = if p == Player::One { idx(a, other) } else { idx(other, b) };
                        (v, pr)
                    })
                    .collect::<Vec<_>>()
            })
            .collect::<Vec<_>>()
    });
    let states = lambda.iter().map(state_name).collect();
    BeliefSpace::build(states, lambda, kernels, None).expect("valid space")
}

fn quarters() -> Vec<Rational> {
    vec![q(1, 4), q(1, 2), q(3, 4)]
}

/// `{1/4, 1/2, 3/4}²` with a uniform common prior.
pub fn prisonerex1() -> BeliefSpace {
    from_prior(&quarters(), |_, _| Rational::one())
}

/// Each player believes the other is at least as patient.
pub fn prisonerex2() -> BeliefSpace {
    from_table(&quarters(), |own| match own {
        0 => vec![q(1, 3), q(1, 3), q(1, 3)],
        1 => vec![q(0, 1), q(1, 3), q(2, 3)],
        _ => vec![q(0, 1), q(0, 1), q(1, 1)],
    })
}

/// Each player believes the other is patient iff they are not.
pub fn prisonerex3() -> BeliefSpace {
    from_table(&quarters(), |own| {
        let mut row = vec![Rational::zero(); 3];
        row[2 - own] = Rational::one();
        row
    })
}

/// Two states, `(1/2,1/2)` with probability `p` and `(1/2,1/4)` otherwise.
pub fn example_new_with(p: Rational) -> BeliefSpace {
    let lambda = vec![[q(1, 2), q(1, 2)], [q(1, 2), q(1, 4)]];
    let rest = Rational::one() - &p;
    let row1 = vec![(0, p.clone()), (1, rest.clone())];
    let kernels = [vec![row1.clone(), row1], vec![vec![(0, int(1))], vec![(1, int(1))]]];
    let states = lambda.iter().map(state_name).collect();
    BeliefSpace::build(states, lambda, kernels, Some(vec![p, rest])).expect("valid space")
}

/// [`example_new_with`] at `p = 1/3`.
pub fn example_new() -> BeliefSpace {
    example_new_with(q(1, 3))
}

/// Uniform prior on the `n × n` grid of cell midpoints `(2k-1)/(2n)`.
pub fn example5_grid(n: i64) -> BeliefSpace {
    let values: Vec<Rational> = (1..=n).map(|k| q(2 * k - 1, 2 * n)).collect();
    from_prior(&values, |_, _| Rational::one())
}

/// Same space as [`prisonerex1`]; paired with `g3x3(5)`.
pub fn example6() -> BeliefSpace {
    prisonerex1()
}

/// Point-mass beliefs on `values²`: each state is common knowledge.
pub fn complete_info(values: &[Rational]) -> BeliefSpace {
    let mut lambda = Vec::new();
    for x in values {
        for y in values {
            lambda.push([x.clone(), y.clone()]);
        }
    }
    let n = lambda.len();
    let rows: Vec<Vec<(usize, Rational)>> = (0..n).map(|w| vec![(w, int(1))]).collect();
    let states = lambda.iter().map(state_name).collect();
    let prior = vec![q(1, n as i64); n];
    BeliefSpace::build(states, lambda, [rows.clone(), rows], Some(prior)).expect("valid space")
}

/// Uniform prior on discounts all below 1/3.
pub fn empty_lambda() -> BeliefSpace {
    from_prior(&[q(1, 10), q(1, 5), q(1, 4)], |_, _| Rational::one())
}

/// Two indistinguishable states with nature `(3/4,3/4)` and one with `(1/4,1/4)`.
pub fn duplicated_nature() -> BeliefSpace {
    let lambda = vec![[q(3, 4), q(3, 4)], [q(3, 4), q(3, 4)], [q(1, 4), q(1, 4)]];
    let shared = vec![(0, q(1, 2)), (1, q(1, 2))];
    let rows = vec![shared.clone(), shared, vec![(2, int(1))]];
    let states = vec!["a".to_string(), "b".to_string(), "c".to_string()];
    BeliefSpace::build(states, lambda, [rows.clone(), rows], Some(vec![q(1, 4), q(1, 4), q(1, 2)]))
        .expect("valid space")
}

/// `levels` equally spaced discounts in (0,1). The prior puts `1 - noise`
/// on matching discounts, so each player believes the other matches with
/// probability exactly `1 - noise`.
pub fn noisy_diagonal(levels: i64, noise: Rational) -> BeliefSpace {
    let values: Vec<Rational> = (1..=levels).map(|k| q(k, levels + 1)).collect();
    let on = (Rational::one() - &noise) / int(levels);
    let off = if levels > 1 {
        noise / int(levels * (levels - 1))
    } else {
        Rational::zero()
    };
    from_prior(&values, move |x, y| if x == y { on.clone() } else { off.clone() })
}

/// Grid `{k/n : 0 < k < n}²`. At `(x, y)` player 1 believes `λ_2` is uniform
/// over grid points strictly within `halfwidth` of `x`; symmetrically for player 2.
pub fn prisonerex4_grid(n: i64, halfwidth: Rational) -> BeliefSpace {
    let values: Vec<Rational> = (1..n).map(|k| q(k, n)).collect();
    let m = values.len();
    let near: Vec<Vec<usize>> = values
        .iter()
        .map(|x| {
            (0..m)
                .filter(|&k| {
                    let d = &values[k] - x;
                    d < halfwidth && -d < halfwidth
                })
                .collect()
        })
        .collect();
    let mut lambda = Vec::with_capacity(m * m);
    for x in &values {
        for y in &values {
            lambda.push([x.clone(), y.clone()]);
        }
    }
    let kernels = [Player::One, Player::Two].map(|p| {
        (0..m * m)
            .map(|w| {
                let (a, b) = (w / m, w % m);
                let own = if p == Player::One { a } else { b };
                let share = q(1, near[own].len() as i64);
                near[own]
                    .iter()
                    .map(|&k| (if p == Player::One { a * m + k } else { k * m + b }, share.clone()))
                    .collect::<Vec<_>>()
            })
            .collect::<Vec<_>>()
    });
    let states = lambda.iter().map(state_name).collect();
    BeliefSpace::build(states, lambda, kernels, None).expect("valid space")
}

/// Names accepted by [`space_by_name`], with their default parameters.
pub const SPACE_NAMES: &[&str] = &[
    "prisonerex1",
    "prisonerex2",
    "prisonerex3",
    "prisonerex4",
    "example_new",
    "example5grid",
    "example6",
    "complete_info",
    "empty_lambda",
    "duplicated_nature",
];

/// Built-in space by name. `example5grid` accepts `:n=<k>` (default 20),
/// `prisonerex4` accepts `:n=<k>` (default 100, half-width 1/20).
pub fn space_by_name(name: &str) -> Option<BeliefSpace> {
    let name = name.trim().trim_end_matches(".json").replace('-', "_");
    let (base, param) = match name.split_once(':') {
        Some((b, p)) => (b.to_string(), Some(p.trim_start_matches("n=").parse::<i64>().ok()?)),
        None => (name.clone(), None),
    };
    Some(match base.as_str() {
        "prisonerex1" => prisonerex1(),
        "prisonerex2" => prisonerex2(),
        "prisonerex3" => prisonerex3(),
        "prisonerex4" => prisonerex4_grid(param.unwrap_or(100).max(2), q(1, 20)),
        "example_new" | "examplenew" => example_new(),
        "example5grid" | "example5" => example5_grid(param.unwrap_or(20).max(1)),
        "example6" => example6(),
        "complete_info" | "completeinfo" => complete_info(&quarters()),
        "empty_lambda" => empty_lambda(),
        "duplicated_nature" => duplicated_nature(),
        _ => return None,
    })
}
