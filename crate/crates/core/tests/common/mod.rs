//! Random belief spaces and games shared by the integration tests.
#![allow(dead_code)]

use coopkit::belief_space::{BeliefSpace, Event, Player};
use coopkit::rational::{int, q, Rational};
use coopkit::stage_game::{pure, CooperationGame, ProfilePair, StageGame};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Type-based space: player `i` has `types[i]` types, each state is a pair
/// of types, and each type has its own discount and a random belief over
/// the opponent's types. Discounts come from `k/12`.
pub fn random_space(r: &mut ChaCha8Rng, max_types: usize) -> BeliefSpace {
    let t1 = r.random_range(1..=max_types);
    let t2 = r.random_range(1..=max_types);
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for a in 0..t1 {
        for b in 0..t2 {
            if r.random_bool(0.85) {
                pairs.push((a, b));
            }
        }
    }
    // Every type needs at least one state.
    for a in 0..t1 {
        if !pairs.iter().any(|p| p.0 == a) {
            pairs.push((a, r.random_range(0..t2)));
        }
    }
    for b in 0..t2 {
        if !pairs.iter().any(|p| p.1 == b) {
            pairs.push((r.random_range(0..t1), b));
        }
    }
    pairs.sort();
    let disc = |r: &mut ChaCha8Rng| q(r.random_range(0..12), 12);
    let l1: Vec<Rational> = (0..t1).map(|_| disc(r)).collect();
    let l2: Vec<Rational> = (0..t2).map(|_| disc(r)).collect();
    let lambda: Vec<[Rational; 2]> = pairs.iter().map(|&(a, b)| [l1[a].clone(), l2[b].clone()]).collect();
    let mut kernels: [Vec<Vec<(usize, Rational)>>; 2] = [vec![Vec::new(); pairs.len()], vec![Vec::new(); pairs.len()]];
    for player in Player::BOTH {
        let types = if player == Player::One { t1 } else { t2 };
        for t in 0..types {
            let cell: Vec<usize> = (0..pairs.len())
                .filter(|&w| if player == Player::One { pairs[w].0 == t } else { pairs[w].1 == t })
                .collect();
            let mut weights: Vec<i64> = cell.iter().map(|_| if r.random_bool(0.25) { 0 } else { r.random_range(1..4) }).collect();
            if weights.iter().all(|&x| x == 0) {
                weights[0] = 1;
            }
            let total: i64 = weights.iter().sum();
            let row: Vec<(usize, Rational)> = cell.iter().zip(&weights).map(|(&w, &x)| (w, q(x, total))).collect();
            for &w in &cell {
                kernels[player.index()][w] = row.clone();
            }
        }
    }
    let names = (0..pairs.len()).map(|w| format!("w{w}")).collect();
    BeliefSpace::build(names, lambda, kernels, None).expect("generator yields valid spaces")
}

/// A 2x2 game with a pure equilibrium `σ = (0, 0)` and a valid `τ = (1, 1)`.
pub fn random_2x2(r: &mut ChaCha8Rng) -> CooperationGame {
    random_square(r, 2)
}

/// An `n x n` game with pure `σ = (0, 0)` and `τ = (1, 1)`, by rejection.
pub fn random_square(r: &mut ChaCha8Rng, n: usize) -> CooperationGame {
    loop {
        let mut u = [vec![vec![int(0); n]; n], vec![vec![int(0); n]; n]];
        for t in u.iter_mut() {
            for row in t.iter_mut() {
                for x in row.iter_mut() {
                    *x = int(r.random_range(0..8));
                }
            }
        }
        let actions: Vec<String> = (0..n).map(|k| format!("a{k}")).collect();
        let Ok(game) = StageGame::new([actions.clone(), actions], u) else { continue };
        let profile = ProfilePair {
            sigma: [pure(n, 0), pure(n, 0)],
            tau: [1, 1],
        };
        if let Ok(g) = CooperationGame::new(game, profile) {
            if g.cooperation_threshold(Player::One).is_ok() && g.cooperation_threshold(Player::Two).is_ok() {
                return g;
            }
        }
    }
}

/// Random union of information cells of `player`.
pub fn random_measurable(r: &mut ChaCha8Rng, space: &BeliefSpace, player: Player) -> Event {
    let mut e = space.empty_event();
    for cell in space.information_partition(player).cells() {
        if r.random_bool(0.5) {
            e = e.union(cell);
        }
    }
    e
}

pub fn random_event(r: &mut ChaCha8Rng, space: &BeliefSpace) -> Event {
    Event::from_fn(space.len(), |_| r.random_bool(0.5))
}

/// All unions of `player`'s cells.
pub fn measurable_events(space: &BeliefSpace, player: Player) -> Vec<Event> {
    let mut out = vec![space.empty_event()];
    for cell in space.information_partition(player).cells() {
        let more: Vec<Event> = out.iter().map(|e| e.union(cell)).collect();
        out.extend(more);
    }
    out
}

/// Uniform prior on `values²`, so each player's belief about the other's
/// discount is uniform on `values`.
pub fn uniform_grid(values: &[Rational]) -> BeliefSpace {
    let n = values.len();
    let mut lambda = Vec::new();
    for x in values {
        for y in values {
            lambda.push([x.clone(), y.clone()]);
        }
    }
    let share = q(1, n as i64);
    let kernels = [Player::One, Player::Two].map(|p| {
        (0..n * n)
            .map(|w| {
                let (a, b) = (w / n, w % n);
                (0..n)
                    .map(|k| (if p == Player::One { a * n + k } else { k * n + b }, share.clone()))
                    .collect::<Vec<_>>()
            })
            .collect::<Vec<_>>()
    });
    let names = lambda.iter().map(coopkit::fixtures::state_name).collect();
    let prior = vec![q(1, (n * n) as i64); n * n];
    BeliefSpace::build(names, lambda, kernels, Some(prior)).expect("valid grid")
}
