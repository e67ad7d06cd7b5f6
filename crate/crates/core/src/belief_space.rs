//! Finite two-player belief spaces with incomplete information on discount
//! factors.
//!
//! A [`BeliefSpace`] holds the states of the world, the pair of discount
//! factors attached to each state, one belief kernel per player and an
//! optional common prior. Kernels are the primitive; the information
//! partition of each player is derived from them (states with identical
//! kernel rows are indistinguishable to that player).

use std::collections::HashMap;
use std::fmt;

use fixedbitset::FixedBitSet;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use thiserror::Error;

use crate::rational::{self, Rational};

/// One of the two players.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Player {
    One,
    Two,
}

impl Player {
    pub const BOTH: [Player; 2] = [Player::One, Player::Two];

    pub fn index(self) -> usize {
        match self {
            Player::One => 0,
            Player::Two => 1,
        }
    }

    pub fn number(self) -> u8 {
        self.index() as u8 + 1
    }

    pub fn other(self) -> Player {
        match self {
            Player::One => Player::Two,
            Player::Two => Player::One,
        }
    }

    pub fn from_number(n: u8) -> Option<Player> {
        match n {
            1 => Some(Player::One),
            2 => Some(Player::Two),
            _ => None,
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.number())
    }
}

impl Serialize for Player {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_u8(self.number())
    }
}

impl<'de> Deserialize<'de> for Player {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let n = u8::deserialize(d)?;
        Player::from_number(n).ok_or_else(|| serde::de::Error::custom("player must be 1 or 2"))
    }
}

/// A set of states, indexed by position in the owning [`BeliefSpace`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Event {
    bits: FixedBitSet,
}

impl Event {
    pub fn empty(n: usize) -> Self {
        Event {
            bits: FixedBitSet::with_capacity(n),
        }
    }

    pub fn full(n: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(n);
        bits.insert_range(..);
        Event { bits }
    }

    pub fn from_indices(n: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut e = Event::empty(n);
        for i in indices {
            e.insert(i);
        }
        e
    }

    pub fn from_fn(n: usize, mut pred: impl FnMut(usize) -> bool) -> Self {
        Event::from_indices(n, (0..n).filter(|&i| pred(i)))
    }

    /// Number of states of the ambient space.
    pub fn universe(&self) -> usize {
        self.bits.len()
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.bits.contains(i)
    }

    pub fn insert(&mut self, i: usize) {
        self.bits.insert(i);
    }

    pub fn remove(&mut self, i: usize) {
        self.bits.set(i, false);
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.ones()
    }

    pub fn union(&self, other: &Event) -> Event {
        let mut bits = self.bits.clone();
        bits.union_with(&other.bits);
        Event { bits }
    }

    pub fn intersection(&self, other: &Event) -> Event {
        let mut bits = self.bits.clone();
        bits.intersect_with(&other.bits);
        Event { bits }
    }

    pub fn difference(&self, other: &Event) -> Event {
        let mut bits = self.bits.clone();
        bits.difference_with(&other.bits);
        Event { bits }
    }

    pub fn complement(&self) -> Event {
        let mut bits = self.bits.clone();
        bits.toggle_range(..);
        Event { bits }
    }

    pub fn is_subset(&self, other: &Event) -> bool {
        self.bits.is_subset(&other.bits)
    }

    pub fn is_disjoint(&self, other: &Event) -> bool {
        self.bits.is_disjoint(&other.bits)
    }
}

/// Disjoint cells covering the state space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    cells: Vec<Event>,
    cell_of: Vec<usize>,
}

impl Partition {
    fn from_labels(labels: &[usize], n_cells: usize) -> Self {
        let n = labels.len();
        let mut cells = vec![Event::empty(n); n_cells];
        for (state, &c) in labels.iter().enumerate() {
            cells[c].insert(state);
        }
        Partition {
            cells,
            cell_of: labels.to_vec(),
        }
    }

    pub fn cells(&self) -> &[Event] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Index of the cell containing `state`.
    pub fn cell_of(&self, state: usize) -> usize {
        self.cell_of[state]
    }

    /// Union of the cells selected by `mask` (bit `k` selects cell `k`).
    pub fn union_of_mask(&self, mask: u64) -> Event {
        let n = self.cell_of.len();
        Event::from_fn(n, |s| mask >> self.cell_of[s] & 1 == 1)
    }

    /// True iff `event` is a union of cells.
    pub fn is_union_of_cells(&self, event: &Event) -> bool {
        self.cells
            .iter()
            .all(|c| c.is_subset(event) || c.is_disjoint(event))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpaceError {
    #[error("malformed belief space document: {0}")]
    Parse(String),
    #[error("state `{0}` appears more than once")]
    DuplicateState(String),
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("discount factor of player {player} at state `{state}` is outside [0,1)")]
    BadDiscount { player: Player, state: String },
    #[error("kernel row of player {player} at state `{state}` is not a probability vector")]
    RowNotStochastic { player: Player, state: String },
    #[error("player {player} does not know their own belief at state `{state}`")]
    InconsistentBelief { player: Player, state: String },
    #[error("player {player} does not know their own discount factor at state `{state}`")]
    UnknownOwnDiscount { player: Player, state: String },
    #[error("prior is not a probability vector over the states")]
    BadPrior,
    #[error("kernel of player {player} at state `{state}` differs from the prior conditioned on their cell")]
    PriorMismatch { player: Player, state: String },
    #[error("a common prior is required")]
    NoPrior,
}

/// Sparse probability row: `(state, probability)` pairs, sorted, zero entries dropped.
pub type KernelRow = Vec<(usize, Rational)>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BeliefSpace {
    states: Vec<String>,
    index: HashMap<String, usize>,
    lambda: Vec<[Rational; 2]>,
    kernels: [Vec<KernelRow>; 2],
    prior: Option<Vec<Rational>>,
    partitions: [Partition; 2],
}

fn normalize_row(row: impl IntoIterator<Item = (usize, Rational)>) -> KernelRow {
    let mut acc: Vec<(usize, Rational)> = Vec::new();
    let mut sorted: Vec<(usize, Rational)> = row.into_iter().collect();
    sorted.sort_by_key(|(s, _)| *s);
    for (s, p) in sorted {
        match acc.last_mut() {
            Some((last, q)) if *last == s => *q += p,
            _ => acc.push((s, p)),
        }
    }
    acc.retain(|(_, p)| !p.is_zero());
    acc
}

impl BeliefSpace {
    /// Validates and assembles a belief space.
    ///
    /// `kernels[i][w]` is player `i+1`'s belief at state `w`, given as sparse
    /// `(state, probability)` entries; omitted entries are zero.
    pub fn build(
        states: Vec<String>,
        lambda: Vec<[Rational; 2]>,
        kernels: [Vec<Vec<(usize, Rational)>>; 2],
        prior: Option<Vec<Rational>>,
    ) -> Result<BeliefSpace, SpaceError> {
        let n = states.len();
        if n == 0 {
            return Err(SpaceError::Parse("no states".into()));
        }
        let mut index = HashMap::with_capacity(n);
        for (i, s) in states.iter().enumerate() {
            if index.insert(s.clone(), i).is_some() {
                return Err(SpaceError::DuplicateState(s.clone()));
            }
        }
        if lambda.len() != n {
            return Err(SpaceError::Parse(format!(
                "expected {} discount pairs, got {}",
                n,
                lambda.len()
            )));
        }
        for (w, pair) in lambda.iter().enumerate() {
            for player in Player::BOTH {
                let l = &pair[player.index()];
                if l.is_negative() || *l >= Rational::one() {
                    return Err(SpaceError::BadDiscount {
                        player,
                        state: states[w].clone(),
                    });
                }
            }
        }

        let [k1, k2] = kernels;
        let mut rows: [Vec<KernelRow>; 2] = [Vec::new(), Vec::new()];
        for (player, raw) in Player::BOTH.into_iter().zip([k1, k2]) {
            if raw.len() != n {
                return Err(SpaceError::Parse(format!(
                    "kernel of player {} has {} rows, expected {}",
                    player,
                    raw.len(),
                    n
                )));
            }
            for (w, row) in raw.into_iter().enumerate() {
                if let Some((s, _)) = row.iter().find(|(s, _)| *s >= n) {
                    return Err(SpaceError::Parse(format!("kernel entry for state index {s}")));
                }
                if row.iter().any(|(_, p)| p.is_negative()) {
                    return Err(SpaceError::RowNotStochastic {
                        player,
                        state: states[w].clone(),
                    });
                }
                let row = normalize_row(row);
                let total: Rational = row.iter().map(|(_, p)| p).sum();
                if !total.is_one() {
                    return Err(SpaceError::RowNotStochastic {
                        player,
                        state: states[w].clone(),
                    });
                }
                rows[player.index()].push(row);
            }
        }

        for player in Player::BOTH {
            let rows = &rows[player.index()];
            for w in 0..n {
                for (v, _) in &rows[w] {
                    if rows[*v] != rows[w] {
                        return Err(SpaceError::InconsistentBelief {
                            player,
                            state: states[w].clone(),
                        });
                    }
                }
            }
            for w in 0..n {
                let own = &lambda[w][player.index()];
                if rows[w]
                    .iter()
                    .any(|(v, _)| &lambda[*v][player.index()] != own)
                {
                    return Err(SpaceError::UnknownOwnDiscount {
                        player,
                        state: states[w].clone(),
                    });
                }
            }
        }

        if let Some(p) = &prior {
            if p.len() != n || p.iter().any(|x| x.is_negative()) {
                return Err(SpaceError::BadPrior);
            }
            let total: Rational = p.iter().sum();
            if !total.is_one() {
                return Err(SpaceError::BadPrior);
            }
        }

        let partitions = [
            partition_by_rows(&rows[0]),
            partition_by_rows(&rows[1]),
        ];

        Ok(BeliefSpace {
            states,
            index,
            lambda,
            kernels: rows,
            prior,
            partitions,
        })
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn state_name(&self, w: usize) -> &str {
        &self.states[w]
    }

    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn lambda(&self, w: usize) -> &[Rational; 2] {
        &self.lambda[w]
    }

    pub fn discount(&self, player: Player, w: usize) -> &Rational {
        &self.lambda[w][player.index()]
    }

    pub fn kernel_row(&self, player: Player, w: usize) -> &KernelRow {
        &self.kernels[player.index()][w]
    }

    pub fn prior(&self) -> Option<&[Rational]> {
        self.prior.as_deref()
    }

    pub fn empty_event(&self) -> Event {
        Event::empty(self.len())
    }

    pub fn full_event(&self) -> Event {
        Event::full(self.len())
    }

    pub fn event_from_fn(&self, pred: impl FnMut(usize) -> bool) -> Event {
        Event::from_fn(self.len(), pred)
    }

    /// Event from state names.
    pub fn event<'a>(&self, names: impl IntoIterator<Item = &'a str>) -> Result<Event, SpaceError> {
        let mut e = self.empty_event();
        for name in names {
            let i = self
                .state_index(name)
                .ok_or_else(|| SpaceError::UnknownState(name.to_string()))?;
            e.insert(i);
        }
        Ok(e)
    }

    pub fn event_names(&self, e: &Event) -> Vec<String> {
        e.iter().map(|i| self.states[i].clone()).collect()
    }

    /// The partition of states with identical kernel rows for `player`.
    pub fn information_partition(&self, player: Player) -> &Partition {
        &self.partitions[player.index()]
    }

    pub fn is_measurable(&self, player: Player, event: &Event) -> bool {
        self.information_partition(player).is_union_of_cells(event)
    }

    /// `P_player(event | w)`, exact.
    pub fn posterior(&self, player: Player, event: &Event, w: usize) -> Rational {
        let mut total = Rational::zero();
        for (v, p) in self.kernel_row(player, w) {
            if event.contains(*v) {
                total += p;
            }
        }
        total
    }

    /// Prior mass of an event. Errors when no prior is attached.
    pub fn prior_mass(&self, event: &Event) -> Result<Rational, SpaceError> {
        let prior = self.prior.as_ref().ok_or(SpaceError::NoPrior)?;
        Ok(event.iter().map(|w| &prior[w]).sum())
    }

    /// Optional check that each kernel equals the prior conditioned on the
    /// player's cell. Cells of prior mass zero are not constrained.
    pub fn check_common_prior(&self) -> Result<(), SpaceError> {
        let prior = self.prior.as_ref().ok_or(SpaceError::NoPrior)?;
        for player in Player::BOTH {
            let partition = self.information_partition(player);
            for cell in partition.cells() {
                let mass: Rational = cell.iter().map(|w| &prior[w]).sum();
                if mass.is_zero() {
                    continue;
                }
                let expected = normalize_row(cell.iter().map(|v| (v, &prior[v] / &mass)));
                for w in cell.iter() {
                    if self.kernel_row(player, w) != &expected {
                        return Err(SpaceError::PriorMismatch {
                            player,
                            state: self.states[w].clone(),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// Parses the JSON document form.
    pub fn from_json_str(text: &str) -> Result<BeliefSpace, SpaceError> {
        let doc: Value = serde_json::from_str(text).map_err(|e| SpaceError::Parse(e.to_string()))?;
        BeliefSpace::from_json(&doc)
    }

    pub fn from_json(doc: &Value) -> Result<BeliefSpace, SpaceError> {
        let perr = |m: String| SpaceError::Parse(m);
        let obj = doc.as_object().ok_or_else(|| perr("expected an object".into()))?;
        let states: Vec<String> = obj
            .get("states")
            .and_then(Value::as_array)
            .ok_or_else(|| perr("`states` must be an array".into()))?
            .iter()
            .map(|v| {
                v.as_str()
                    .map(str::to_string)
                    .ok_or_else(|| perr("state ids must be strings".into()))
            })
            .collect::<Result<_, _>>()?;
        let index: HashMap<&str, usize> = states.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
        let lookup = |name: &str| {
            index
                .get(name)
                .copied()
                .ok_or_else(|| SpaceError::UnknownState(name.to_string()))
        };
        let rat = |v: &Value| rational::from_json(v).map_err(|e| perr(e.to_string()));

        let lam_obj = obj
            .get("lambda")
            .and_then(Value::as_object)
            .ok_or_else(|| perr("`lambda` must be an object".into()))?;
        let mut lambda = Vec::with_capacity(states.len());
        for s in &states {
            let pair = lam_obj
                .get(s)
                .and_then(Value::as_array)
                .filter(|a| a.len() == 2)
                .ok_or_else(|| perr(format!("`lambda` needs a pair for state `{s}`")))?;
            lambda.push([rat(&pair[0])?, rat(&pair[1])?]);
        }
        for key in lam_obj.keys() {
            lookup(key)?;
        }

        let kern_obj = obj
            .get("kernels")
            .and_then(Value::as_object)
            .ok_or_else(|| perr("`kernels` must be an object".into()))?;
        let mut kernels: [Vec<Vec<(usize, Rational)>>; 2] = [Vec::new(), Vec::new()];
        for player in Player::BOTH {
            let key = player.number().to_string();
            let rows = kern_obj
                .get(&key)
                .and_then(Value::as_object)
                .ok_or_else(|| perr(format!("missing kernel for player {key}")))?;
            for name in rows.keys() {
                lookup(name)?;
            }
            for s in &states {
                let mut row = Vec::new();
                if let Some(entries) = rows.get(s) {
                    let entries = entries
                        .as_object()
                        .ok_or_else(|| perr(format!("kernel row for `{s}` must be an object")))?;
                    for (target, p) in entries {
                        row.push((lookup(target)?, rat(p)?));
                    }
                }
                kernels[player.index()].push(row);
            }
        }

        let prior = match obj.get("prior") {
            None | Some(Value::Null) => None,
            Some(p) => {
                let p = p.as_object().ok_or_else(|| perr("`prior` must be an object".into()))?;
                let mut v = vec![Rational::zero(); states.len()];
                for (name, mass) in p {
                    v[lookup(name)?] = rat(mass)?;
                }
                Some(v)
            }
        };

        BeliefSpace::build(states, lambda, kernels, prior)
    }

    pub fn to_json(&self) -> Value {
        let r = |x: &Rational| Value::String(rational::format(x));
        let mut lambda = Map::new();
        for (w, s) in self.states.iter().enumerate() {
            lambda.insert(
                s.clone(),
                Value::Array(vec![r(&self.lambda[w][0]), r(&self.lambda[w][1])]),
            );
        }
        let mut kernels = Map::new();
        for player in Player::BOTH {
            let mut rows = Map::new();
            for (w, s) in self.states.iter().enumerate() {
                let mut row = Map::new();
                for (v, p) in self.kernel_row(player, w) {
                    row.insert(self.states[*v].clone(), r(p));
                }
                rows.insert(s.clone(), Value::Object(row));
            }
            kernels.insert(player.number().to_string(), Value::Object(rows));
        }
        let mut doc = Map::new();
        doc.insert(
            "states".into(),
            Value::Array(self.states.iter().cloned().map(Value::String).collect()),
        );
        doc.insert("lambda".into(), Value::Object(lambda));
        doc.insert("kernels".into(), Value::Object(kernels));
        if let Some(prior) = &self.prior {
            let mut p = Map::new();
            for (w, s) in self.states.iter().enumerate() {
                if !prior[w].is_zero() {
                    p.insert(s.clone(), r(&prior[w]));
                }
            }
            doc.insert("prior".into(), Value::Object(p));
        }
        Value::Object(doc)
    }
}

fn partition_by_rows(rows: &[KernelRow]) -> Partition {
    let mut ids: HashMap<&KernelRow, usize> = HashMap::new();
    let mut labels = Vec::with_capacity(rows.len());
    for row in rows {
        let next = ids.len();
        labels.push(*ids.entry(row).or_insert(next));
    }
    Partition::from_labels(&labels, ids.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::rational::q;

    #[test]
    fn single_state_space_is_valid() {
        let s = BeliefSpace::build(
            vec!["w".into()],
            vec![[q(0, 1), q(0, 1)]],
            [vec![vec![(0, q(1, 1))]], vec![vec![(0, q(1, 1))]]],
            None,
        )
        .unwrap();
        assert_eq!(s.information_partition(Player::One).len(), 1);
        assert!(s.is_measurable(Player::Two, &s.full_event()));
    }

    #[test]
    fn row_summing_to_nine_tenths_is_rejected() {
        let space = fixtures::prisonerex1();
        let mut doc = space.to_json();
        let row = doc["kernels"]["1"]["(1/4,1/4)"].as_object_mut().unwrap();
        row.insert("(1/4,1/4)".into(), Value::String("7/30".into()));
        let err = BeliefSpace::from_json(&doc).unwrap_err();
        assert!(matches!(err, SpaceError::RowNotStochastic { player: Player::One, .. }), "{err}");
    }

    #[test]
    fn inconsistent_belief_detected() {
        // Player 1 at state a believes b, but b has a different row.
        let err = BeliefSpace::build(
            vec!["a".into(), "b".into()],
            vec![[q(1, 2), q(1, 2)], [q(1, 2), q(1, 2)]],
            [
                vec![vec![(1, q(1, 1))], vec![(0, q(1, 2)), (1, q(1, 2))]],
                vec![vec![(0, q(1, 1))], vec![(1, q(1, 1))]],
            ],
            None,
        )
        .unwrap_err();
        assert_eq!(
            err,
            SpaceError::InconsistentBelief {
                player: Player::One,
                state: "a".into()
            }
        );
    }

    #[test]
    fn unknown_own_discount_detected() {
        let err = BeliefSpace::build(
            vec!["a".into(), "b".into()],
            vec![[q(1, 2), q(1, 2)], [q(1, 4), q(1, 2)]],
            [
                vec![vec![(0, q(1, 2)), (1, q(1, 2))]; 2],
                vec![vec![(0, q(1, 2)), (1, q(1, 2))]; 2],
            ],
            None,
        )
        .unwrap_err();
        assert_eq!(
            err,
            SpaceError::UnknownOwnDiscount {
                player: Player::One,
                state: "a".into()
            }
        );
    }

    #[test]
    fn bad_prior_and_discount() {
        let row = vec![vec![(0, q(1, 1))]];
        let err = BeliefSpace::build(
            vec!["a".into()],
            vec![[q(1, 2), q(1, 2)]],
            [row.clone(), row.clone()],
            Some(vec![q(1, 2)]),
        )
        .unwrap_err();
        assert_eq!(err, SpaceError::BadPrior);
        let err = BeliefSpace::build(vec!["a".into()], vec![[q(1, 1), q(1, 2)]], [row.clone(), row], None)
            .unwrap_err();
        assert!(matches!(err, SpaceError::BadDiscount { .. }));
    }

    #[test]
    fn example1_partition_groups_by_own_discount() {
        let s = fixtures::prisonerex1();
        let p = s.information_partition(Player::One);
        assert_eq!(p.len(), 3);
        for cell in p.cells() {
            let first = cell.iter().next().unwrap();
            assert!(cell.iter().all(|w| s.discount(Player::One, w) == s.discount(Player::One, first)));
            assert_eq!(cell.len(), 3);
        }
        s.check_common_prior().unwrap();
    }

    #[test]
    fn complete_information_partition_is_singletons() {
        let s = fixtures::complete_info(&[q(1, 4), q(1, 2)]);
        for player in Player::BOTH {
            assert_eq!(s.information_partition(player).len(), s.len());
        }
    }

    #[test]
    fn measurability_examples() {
        let s = fixtures::prisonerex1();
        let high = s.event_from_fn(|w| s.discount(Player::One, w) >= &q(1, 2));
        assert!(s.is_measurable(Player::One, &high));
        let single = s.event(["(1/2,1/2)"]).unwrap();
        assert!(!s.is_measurable(Player::One, &single));
        assert!(s.is_measurable(Player::One, &s.full_event()));
    }

    #[test]
    fn posterior_examples() {
        let s = fixtures::prisonerex1();
        let lambda2 = s.event_from_fn(|w| s.discount(Player::Two, w) >= &q(1, 2));
        for w in 0..s.len() {
            assert_eq!(s.posterior(Player::One, &lambda2, w), q(2, 3));
            assert_eq!(s.posterior(Player::One, &s.full_event(), w), q(1, 1));
        }
        let s2 = fixtures::prisonerex2();
        let high2 = s2.event_from_fn(|w| s2.discount(Player::Two, w) == &q(3, 4));
        let w = s2.state_index("(1/2,1/4)").unwrap();
        assert_eq!(s2.posterior(Player::One, &high2, w), q(2, 3));
    }

    #[test]
    fn json_round_trip_preserves_space() {
        let s = fixtures::prisonerex2();
        let text = serde_json::to_string(&s.to_json()).unwrap();
        assert_eq!(BeliefSpace::from_json_str(&text).unwrap(), s);
    }

    #[test]
    fn json_rejects_float_entries() {
        let text = r#"{"states":["w"],"lambda":{"w":["1/2", 0.5]},"kernels":{"1":{"w":{"w":"1"}},"2":{"w":{"w":"1"}}}}"#;
        assert!(matches!(BeliefSpace::from_json_str(text), Err(SpaceError::Parse(_))));
    }
}
