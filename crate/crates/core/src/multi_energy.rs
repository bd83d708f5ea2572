//! Multi-dimensional energy games with unknown initial credit.
//!
//! The solver computes the greatest fixpoint of the controllable predecessor
//! over upward-closed sets of credit vectors, represented by their minimal
//! elements and truncated at a per-dimension cap. Winning vertices of the
//! capped game are winning in the real game; a losing verdict is only issued
//! after a memoryless counter-strategy has been checked exactly.

use std::collections::{HashMap, VecDeque};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;

use crate::error::{Error, Result};
use crate::game::{Answer, Player};
use crate::graph::MooreStrategy;
use crate::lp::{LinearProgram, LpResult, Rel, Q};

pub type Credit = Vec<i64>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MEdge {
    pub from: usize,
    pub to: usize,
    pub w: Vec<i64>,
}

/// Game graph with integer weight vectors of a fixed dimension `d >= 1`.
#[derive(Clone, Debug)]
pub struct MultiEnergyGame {
    ids: Vec<String>,
    owner: Vec<Player>,
    edges: Vec<MEdge>,
    out: Vec<Vec<usize>>,
    preds: Vec<Vec<usize>>,
    index: HashMap<String, usize>,
    dim: usize,
    initial: Option<usize>,
}

impl MultiEnergyGame {
    pub fn new(
        vertices: Vec<(String, Player)>,
        edges: Vec<MEdge>,
        dim: usize,
        initial: Option<usize>,
    ) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Precondition("dimension must be at least 1".into()));
        }
        let mut index = HashMap::new();
        let mut ids = Vec::new();
        let mut owner = Vec::new();
        for (i, (id, p)) in vertices.into_iter().enumerate() {
            if index.insert(id.clone(), i).is_some() {
                return Err(Error::DuplicateVertex(id));
            }
            ids.push(id);
            owner.push(p);
        }
        let n = ids.len();
        let mut out = vec![Vec::new(); n];
        let mut preds = vec![Vec::new(); n];
        let mut seen = std::collections::HashSet::new();
        for (k, e) in edges.iter().enumerate() {
            if e.from >= n || e.to >= n {
                return Err(Error::UnknownVertex(format!("#{}", e.from.max(e.to))));
            }
            if e.w.len() != dim {
                return Err(Error::Dimension {
                    expected: dim,
                    found: e.w.len(),
                });
            }
            if !seen.insert((e.from, e.to)) {
                return Err(Error::DuplicateEdge(ids[e.from].clone(), ids[e.to].clone()));
            }
            out[e.from].push(k);
            if !preds[e.to].contains(&e.from) {
                preds[e.to].push(e.from);
            }
        }
        if let Some(v) = out.iter().position(|o| o.is_empty()) {
            return Err(Error::NoOutgoingEdge(ids[v].clone()));
        }
        if initial.is_some_and(|v| v >= n) {
            return Err(Error::UnknownVertex("initial".into()));
        }
        Ok(MultiEnergyGame {
            ids,
            owner,
            edges,
            out,
            preds,
            index,
            dim,
            initial,
        })
    }

    pub fn from_ids(
        vertices: &[(&str, Player)],
        edges: &[(&str, &str, Vec<i64>)],
        dim: usize,
    ) -> Result<Self> {
        let verts: Vec<(String, Player)> = vertices
            .iter()
            .map(|(id, p)| (id.to_string(), *p))
            .collect();
        let find = |id: &str| {
            vertices
                .iter()
                .position(|(v, _)| *v == id)
                .ok_or_else(|| Error::UnknownVertex(id.into()))
        };
        let mut es = Vec::new();
        for (a, b, w) in edges {
            es.push(MEdge {
                from: find(a)?,
                to: find(b)?,
                w: w.clone(),
            });
        }
        MultiEnergyGame::new(verts, es, dim, None)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_vertices(&self) -> usize {
        self.ids.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn id(&self, v: usize) -> &str {
        &self.ids[v]
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn vertex(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn owner(&self, v: usize) -> Player {
        self.owner[v]
    }

    pub fn edges(&self) -> &[MEdge] {
        &self.edges
    }

    pub fn out_edges(&self, v: usize) -> &[usize] {
        &self.out[v]
    }

    pub fn successors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.out[v].iter().map(move |&e| self.edges[e].to)
    }

    pub fn edge_between(&self, u: usize, v: usize) -> Option<usize> {
        self.out[u].iter().copied().find(|&e| self.edges[e].to == v)
    }

    pub fn initial(&self) -> Option<usize> {
        self.initial
    }

    pub fn with_initial(&self, v0: usize) -> Self {
        let mut g = self.clone();
        g.initial = Some(v0);
        g
    }

    /// Largest absolute weight component.
    pub fn max_abs_weight(&self) -> i64 {
        self.edges
            .iter()
            .flat_map(|e| e.w.iter())
            .map(|x| x.abs())
            .max()
            .unwrap_or(0)
    }

    /// Fixes a memoryless choice at some vertices: only the chosen edge is
    /// kept there and the vertex is handed to player 1.
    pub fn restrict(&self, choice: &[Option<usize>]) -> MultiEnergyGame {
        let mut owner = self.owner.clone();
        let edges: Vec<MEdge> = self
            .edges
            .iter()
            .filter(|e| choice[e.from].is_none_or(|t| t == e.to))
            .cloned()
            .collect();
        for (v, c) in choice.iter().enumerate() {
            if c.is_some() {
                owner[v] = Player::P1;
            }
        }
        let verts = self.ids.iter().cloned().zip(owner).collect();
        MultiEnergyGame::new(verts, edges, self.dim, self.initial)
            .expect("a choice keeps one edge per vertex")
    }
}

/// Minimal credit vectors per vertex; an empty antichain means losing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CreditAssignment {
    pub caps: Vec<i64>,
    pub sets: Vec<Vec<Credit>>,
    /// Step of the fixpoint iteration at which a vertex lost its last vector.
    pub emptied_at: Vec<Option<usize>>,
}

impl CreditAssignment {
    pub fn is_winning(&self, v: usize) -> bool {
        !self.sets[v].is_empty()
    }

    pub fn winning_set(&self) -> Vec<usize> {
        (0..self.sets.len())
            .filter(|&v| self.is_winning(v))
            .collect()
    }

    /// Is `c` above some minimal vector of `v`?
    pub fn covers(&self, v: usize, c: &[i64]) -> bool {
        self.sets[v].iter().any(|a| dominates(c, a))
    }

    /// Smallest first coordinate among the minimal vectors (the scalar credit
    /// when `d = 1`).
    pub fn min_first(&self, v: usize) -> Option<i64> {
        self.sets[v].iter().map(|a| a[0]).min()
    }

    /// The minimal vector with the smallest first coordinate, ties broken
    /// lexicographically.
    pub fn best_by_first(&self, v: usize) -> Option<&Credit> {
        self.sets[v].iter().min_by(|a, b| a.cmp(b))
    }

    /// Largest component per dimension over all antichains.
    pub fn max_components(&self) -> Vec<i64> {
        let d = self.caps.len();
        let mut k = vec![0; d];
        for s in &self.sets {
            for a in s {
                for i in 0..d {
                    k[i] = k[i].max(a[i]);
                }
            }
        }
        k
    }
}

fn dominates(c: &[i64], a: &[i64]) -> bool {
    c.iter().zip(a).all(|(x, y)| x >= y)
}

/// Sorted antichain of the minimal elements.
fn minimize(mut v: Vec<Credit>) -> Vec<Credit> {
    v.sort_unstable();
    v.dedup();
    if v.first().is_some_and(|a| a.len() == 2) {
        // sorted by the first coordinate: keep strict records of the second
        let mut best = i64::MAX;
        v.retain(|a| {
            let keep = a[1] < best;
            best = best.min(a[1]);
            keep
        });
        return v;
    }
    let mut out: Vec<Credit> = Vec::with_capacity(v.len());
    for a in v {
        if !out.iter().any(|b| dominates(&a, b)) {
            out.push(a);
        }
    }
    out
}

fn shifted(set: &[Credit], w: &[i64], caps: &[i64]) -> Vec<Credit> {
    let v = set
        .iter()
        .filter_map(|a| {
            let r: Credit = a
                .iter()
                .zip(w)
                .map(|(x, y)| x.saturating_sub(*y).max(0))
                .collect();
            r.iter().zip(caps).all(|(x, c)| x <= c).then_some(r)
        })
        .collect();
    minimize(v)
}

fn meet(a: &[Credit], b: &[Credit]) -> Vec<Credit> {
    let mut v = Vec::with_capacity(a.len() * b.len());
    for x in a {
        for y in b {
            v.push(x.iter().zip(y).map(|(p, q)| *p.max(q)).collect());
        }
    }
    minimize(v)
}

/// `(|V|·||E||)²` in every dimension, at least 1.
pub fn default_cap(g: &MultiEnergyGame) -> i64 {
    let b = (g.num_vertices() as i64).saturating_mul(g.max_abs_weight());
    b.saturating_mul(b).max(1)
}

/// Greatest fixpoint of the capped controllable predecessor.
pub fn minimal_credit_energy(g: &MultiEnergyGame, cap: i64) -> CreditAssignment {
    minimal_credit_with_caps(g, &vec![cap.max(0); g.dim])
}

/// Controllable predecessor at `v`. A self-loop is resolved on the spot:
/// staying forever is either free (nonnegative weight) or fatal, so the loop
/// only adds finitely many repetitions before leaving.
fn cpre(g: &MultiEnergyGame, sets: &[Vec<Credit>], v: usize, caps: &[i64]) -> Vec<Credit> {
    let mut lp: Option<&[i64]> = None;
    let mut parts = Vec::with_capacity(g.out[v].len());
    for &e in &g.out[v] {
        let MEdge { to, w, .. } = &g.edges[e];
        if *to == v {
            lp = Some(w);
        } else {
            parts.push(shifted(&sets[*to], w, caps));
        }
    }
    let free = lp.is_some_and(|w| w.iter().all(|x| *x >= 0));
    match g.owner[v] {
        Player::P1 if free => vec![vec![0; g.dim]],
        Player::P1 => {
            let mut x: Vec<Credit> = parts.into_iter().flatten().collect();
            if let Some(w) = lp {
                // k repetitions cost max(0, b − k·w); past the point where every
                // dimension with w > 0 is exhausted they only get worse
                let mut more = Vec::new();
                for b in &x {
                    let useful = b
                        .iter()
                        .zip(w)
                        .filter(|(_, w)| **w > 0)
                        .map(|(b, w)| (b + w - 1) / w)
                        .max()
                        .unwrap_or(0);
                    for k in 1..=useful {
                        let a: Credit = b
                            .iter()
                            .zip(w)
                            .map(|(b, w)| b.saturating_sub(k.saturating_mul(*w)).max(0))
                            .collect();
                        if a.iter().zip(caps).any(|(a, c)| a > c) {
                            break;
                        }
                        more.push(a);
                    }
                }
                x.extend(more);
            }
            minimize(x)
        }
        Player::P2 if lp.is_some() && !free => Vec::new(),
        Player::P2 => parts
            .into_iter()
            .reduce(|acc, p| if acc.is_empty() { acc } else { meet(&acc, &p) })
            .unwrap_or_else(|| vec![vec![0; g.dim]]),
    }
}

pub fn minimal_credit_with_caps(g: &MultiEnergyGame, caps: &[i64]) -> CreditAssignment {
    let n = g.num_vertices();
    let mut sets: Vec<Vec<Credit>> = vec![vec![vec![0; g.dim]]; n];
    let mut emptied_at = vec![None; n];
    let mut queue: VecDeque<usize> = (0..n).collect();
    let mut queued = vec![true; n];
    let mut step = 0usize;
    while let Some(v) = queue.pop_front() {
        queued[v] = false;
        step += 1;
        let new = cpre(g, &sets, v, caps);
        if new != sets[v] {
            if new.is_empty() {
                emptied_at[v] = Some(step);
            }
            sets[v] = new;
            for &p in &g.preds[v] {
                if !queued[p] {
                    queued[p] = true;
                    queue.push_back(p);
                }
            }
        }
    }
    CreditAssignment {
        caps: caps.to_vec(),
        sets,
        emptied_at,
    }
}

/// Result of [`solve_unknown_credit`].
#[derive(Clone, Debug)]
pub struct EnergySolution {
    pub winning: Vec<bool>,
    pub credits: CreditAssignment,
}

impl EnergySolution {
    /// Finite-memory strategy for player 1 from `v0` with credit `c0`.
    pub fn strategy(&self, g: &MultiEnergyGame, v0: usize, c0: &[i64]) -> Result<CreditStrategy> {
        credit_strategy(g, &self.credits, v0, c0, &lexicographic_order(g))
    }
}

/// Winning set, credits and (through [`EnergySolution::strategy`]) strategies
/// of the game capped at `cap`. Sound for every cap; complete only when the
/// cap is large enough.
pub fn solve_unknown_credit(g: &MultiEnergyGame, cap: i64) -> EnergySolution {
    let credits = minimal_credit_energy(g, cap);
    let winning = (0..g.num_vertices())
        .map(|v| credits.is_winning(v))
        .collect();
    EnergySolution { winning, credits }
}

/// Tri-state decision at `v0`.
#[derive(Clone, Debug)]
pub struct EnergyDecision {
    pub answer: Answer,
    /// Cap of the last fixpoint computed.
    pub cap: i64,
    /// Last fixpoint computed. A `Yes` settled by enumeration may come with
    /// an assignment that does not cover `v0` yet.
    pub credits: CreditAssignment,
    /// Memoryless spoiling choice of player 2, checked exactly, when `No`.
    pub spoiler: Option<Vec<Option<usize>>>,
}

/// Largest number of memoryless player-2 choices [`decide`] enumerates.
pub const SPOILER_ENUMERATION_LIMIT: usize = 4096;

/// Runs the capped fixpoint with caps growing geometrically up to `max_cap`.
/// `Yes` as soon as `v0` wins; `No` once a memoryless player-2 choice is
/// confirmed to leave no reachable nonnegative cycle. The first candidate is
/// read off the fixpoint; when it fails and player 2 has at most
/// [`SPOILER_ENUMERATION_LIMIT`] memoryless choices, all of them are checked,
/// which settles the game since memoryless choices suffice for player 2.
/// `Unknown` otherwise.
pub fn decide(g: &MultiEnergyGame, v0: usize, max_cap: i64) -> Result<EnergyDecision> {
    let max_cap = max_cap.max(1);
    let mut cap = max_cap.min(8);
    loop {
        let credits = minimal_credit_energy(g, cap);
        if credits.is_winning(v0) {
            return Ok(EnergyDecision {
                answer: Answer::Yes,
                cap,
                credits,
                spoiler: None,
            });
        }
        let choice = spoiler_from_fixpoint(g, &credits);
        if one_player_energy_check(&g.restrict(&choice), v0)?.is_none() {
            return Ok(EnergyDecision {
                answer: Answer::No,
                cap,
                credits,
                spoiler: Some(choice),
            });
        }
        if let Some(found) = enumerate_spoilers(g, v0, SPOILER_ENUMERATION_LIMIT)? {
            let answer = if found.is_some() {
                Answer::No
            } else {
                Answer::Yes
            };
            return Ok(EnergyDecision {
                answer,
                cap,
                credits,
                spoiler: found,
            });
        }
        if cap >= max_cap {
            return Ok(EnergyDecision {
                answer: Answer::Unknown,
                cap,
                credits,
                spoiler: None,
            });
        }
        cap = cap.saturating_mul(4).min(max_cap);
    }
}

/// Checks every memoryless choice of player 2 at the vertices reachable from
/// `v0`. `None` when there are more than `limit`; otherwise the first
/// spoiling choice, if any.
pub fn enumerate_spoilers(
    g: &MultiEnergyGame,
    v0: usize,
    limit: usize,
) -> Result<Option<Option<Vec<Option<usize>>>>> {
    odometer(g, v0, Player::P2, limit, |choice| {
        Ok(one_player_energy_check(&g.restrict(choice), v0)?.is_none())
    })
}

/// Memoryless player-1 strategy winning from `v0`, searched over every choice
/// at the reachable player-1 vertices (at most `limit` of them), together with
/// the least credit vector it needs. Among the winners the first one (in
/// successor order) whose first credit component is at most `max_first` is
/// returned. `None` when the search space exceeds `limit`.
pub fn memoryless_winner(
    g: &MultiEnergyGame,
    v0: usize,
    max_first: i64,
    limit: usize,
) -> Option<Option<(Vec<Option<usize>>, Credit)>> {
    let mut found = None;
    let r = odometer(g, v0, Player::P1, limit, |choice| {
        let c = adversarial_credit(&g.restrict(choice), v0);
        Ok(match c {
            Some(c) if c[0] <= max_first => {
                found = Some(c);
                true
            }
            _ => false,
        })
    })
    .expect("the check does not fail");
    r.map(|o| o.map(|choice| (choice, found.expect("set on success"))))
}

/// Least credit from `v0` when player 2 picks every move, or `None` if some
/// reachable cycle is negative in some dimension.
fn adversarial_credit(g: &MultiEnergyGame, v0: usize) -> Option<Credit> {
    let n = g.num_vertices();
    let mut seen = vec![false; n];
    let mut stack = vec![v0];
    seen[v0] = true;
    while let Some(u) = stack.pop() {
        for t in g.successors(u) {
            if !seen[t] {
                seen[t] = true;
                stack.push(t);
            }
        }
    }
    let mut r = vec![vec![0i64; g.dim]; n];
    // requirements of simple paths settle within |V| rounds; one that still
    // grows afterwards comes from a negative cycle
    for _ in 0..=n {
        let mut changed = false;
        for e in g.edges.iter().filter(|e| seen[e.from]) {
            for j in 0..g.dim {
                let need = (r[e.to][j] - e.w[j]).max(0);
                if need > r[e.from][j] {
                    r[e.from][j] = need;
                    changed = true;
                }
            }
        }
        if !changed {
            return Some(r.swap_remove(v0));
        }
    }
    None
}

/// Runs `accept` on every memoryless choice of `player` at the vertices
/// reachable from `v0` and returns the first accepted one; `Some(None)` when
/// none is, `None` when there are more than `limit` choices. Vertices of
/// `player` that are not reachable keep their first successor.
fn odometer(
    g: &MultiEnergyGame,
    v0: usize,
    player: Player,
    limit: usize,
    mut accept: impl FnMut(&[Option<usize>]) -> Result<bool>,
) -> Result<Option<Option<Vec<Option<usize>>>>> {
    let mut seen = vec![false; g.num_vertices()];
    let mut stack = vec![v0];
    seen[v0] = true;
    while let Some(u) = stack.pop() {
        for t in g.successors(u) {
            if !seen[t] {
                seen[t] = true;
                stack.push(t);
            }
        }
    }
    let owned: Vec<usize> = (0..g.num_vertices())
        .filter(|&v| seen[v] && g.owner[v] == player)
        .collect();
    let mut total: usize = 1;
    for &v in &owned {
        total = match total.checked_mul(g.out[v].len()) {
            Some(t) if t <= limit => t,
            _ => return Ok(None),
        };
    }
    let mut digits = vec![0usize; owned.len()];
    loop {
        let mut choice: Vec<Option<usize>> = (0..g.num_vertices())
            .map(|v| (g.owner[v] == player).then(|| g.edges[g.out[v][0]].to))
            .collect();
        for (k, &v) in owned.iter().enumerate() {
            choice[v] = Some(g.edges[g.out[v][digits[k]]].to);
        }
        if accept(&choice)? {
            return Ok(Some(Some(choice)));
        }
        let mut k = 0;
        loop {
            if k == owned.len() {
                return Ok(Some(None));
            }
            digits[k] += 1;
            if digits[k] < g.out[owned[k]].len() {
                break;
            }
            digits[k] = 0;
            k += 1;
        }
    }
}

/// Memoryless player-2 choice: toward the successor that lost earliest, or
/// else the one demanding the most credit.
pub fn spoiler_from_fixpoint(
    g: &MultiEnergyGame,
    credits: &CreditAssignment,
) -> Vec<Option<usize>> {
    (0..g.num_vertices())
        .map(|v| {
            if g.owner[v] != Player::P2 {
                return None;
            }
            let mut succ: Vec<usize> = g.successors(v).collect();
            succ.sort_unstable();
            let lost = succ
                .iter()
                .copied()
                .filter_map(|t| credits.emptied_at[t].map(|s| (s, t)))
                .min();
            if let Some((_, t)) = lost {
                return Some(t);
            }
            let demand = |t: usize| -> i64 {
                let e = g.edge_between(v, t).expect("successor");
                shifted(&credits.sets[t], &g.edges[e].w, &credits.caps)
                    .iter()
                    .map(|a| a.iter().sum::<i64>())
                    .min()
                    .unwrap_or(i64::MAX)
            };
            succ.iter()
                .copied()
                .max_by_key(|&t| (demand(t), std::cmp::Reverse(t)))
        })
        .collect()
}

/// A reachable closed walk (first vertex repeated last) whose total weight is
/// nonnegative in every dimension, if one exists. All vertices must belong to
/// player 1.
pub fn one_player_energy_check(g: &MultiEnergyGame, v0: usize) -> Result<Option<Vec<usize>>> {
    if let Some(v) = (0..g.num_vertices()).find(|&v| g.owner[v] == Player::P2) {
        return Err(Error::Precondition(format!(
            "vertex `{}` is owned by player 2",
            g.id(v)
        )));
    }
    let mut seen = vec![false; g.num_vertices()];
    let mut stack = vec![v0];
    seen[v0] = true;
    while let Some(u) = stack.pop() {
        for t in g.successors(u) {
            if !seen[t] {
                seen[t] = true;
                stack.push(t);
            }
        }
    }
    let edges: Vec<usize> = (0..g.num_edges())
        .filter(|&e| seen[g.edges[e].from])
        .collect();
    Ok(search(g, edges))
}

fn search(g: &MultiEnergyGame, edges: Vec<usize>) -> Option<Vec<usize>> {
    let support = max_support(g, &edges)?;
    let parts = edge_components(g, &support);
    if parts.len() == 1 {
        return Some(closed_walk(g, &parts[0]));
    }
    parts.into_iter().find_map(|p| search(g, p))
}

/// Local vertex numbering of an edge set.
fn local_arcs(g: &MultiEnergyGame, edges: &[usize]) -> (usize, Vec<(usize, usize)>) {
    let mut local: HashMap<usize, usize> = HashMap::new();
    let mut arcs = Vec::with_capacity(edges.len());
    for &e in edges {
        let n = local.len();
        let a = *local.entry(g.edges[e].from).or_insert(n);
        let n = local.len();
        let b = *local.entry(g.edges[e].to).or_insert(n);
        arcs.push((a, b));
    }
    (local.len(), arcs)
}

fn add_weight_rows(g: &MultiEnergyGame, lp: &mut LinearProgram, edges: &[usize]) {
    for i in 0..g.dim {
        let row = edges
            .iter()
            .enumerate()
            .filter(|(_, &e)| g.edges[e].w[i] != 0)
            .map(|(j, &e)| (j, Q::from_integer(g.edges[e].w[i].into())))
            .collect();
        lp.add(row, Rel::Ge, Q::zero());
    }
}

/// Union of the supports of all nonnegative circulations, via
/// `max Σ y_e` with `y_e <= x_e`, `y_e <= 1`.
fn max_support(g: &MultiEnergyGame, edges: &[usize]) -> Option<Vec<usize>> {
    if edges.is_empty() {
        return None;
    }
    let m = edges.len();
    let (n, arcs) = local_arcs(g, edges);
    let mut lp = LinearProgram::circulation(n, &arcs);
    lp.num_vars = 2 * m;
    add_weight_rows(g, &mut lp, edges);
    for j in 0..m {
        lp.add(vec![(m + j, Q::one()), (j, -Q::one())], Rel::Le, Q::zero());
        lp.add(vec![(m + j, Q::one())], Rel::Le, Q::one());
    }
    lp.maximize((0..m).map(|j| (m + j, Q::one())).collect());
    match lp.solve() {
        LpResult::Optimal { x, value } if value.is_positive() => Some(
            (0..m)
                .filter(|&j| x[m + j].is_positive())
                .map(|j| edges[j])
                .collect(),
        ),
        _ => None,
    }
}

/// Groups edges by the strongly connected component they lie in.
fn edge_components(g: &MultiEnergyGame, edges: &[usize]) -> Vec<Vec<usize>> {
    let mut pg: DiGraph<(), ()> = DiGraph::new();
    let mut node: HashMap<usize, petgraph::graph::NodeIndex> = HashMap::new();
    for &e in edges {
        for v in [g.edges[e].from, g.edges[e].to] {
            node.entry(v).or_insert_with(|| pg.add_node(()));
        }
        pg.add_edge(node[&g.edges[e].from], node[&g.edges[e].to], ());
    }
    let mut comp_of: HashMap<petgraph::graph::NodeIndex, usize> = HashMap::new();
    for (i, c) in tarjan_scc(&pg).into_iter().enumerate() {
        for x in c {
            comp_of.insert(x, i);
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for &e in edges {
        let a = comp_of[&node[&g.edges[e].from]];
        if a == comp_of[&node[&g.edges[e].to]] {
            groups.entry(a).or_default().push(e);
        }
    }
    let mut out: Vec<Vec<usize>> = groups.into_values().collect();
    out.sort();
    out
}

/// Integer circulation of smallest total flow using every edge of a strongly
/// connected support, laid out as an Euler circuit.
fn closed_walk(g: &MultiEnergyGame, edges: &[usize]) -> Vec<usize> {
    let m = edges.len();
    let (n, arcs) = local_arcs(g, edges);
    let mut lp = LinearProgram::circulation(n, &arcs);
    add_weight_rows(g, &mut lp, edges);
    for j in 0..m {
        lp.add(vec![(j, Q::one())], Rel::Ge, Q::one());
    }
    lp.maximize((0..m).map(|j| (j, -Q::one())).collect());
    let LpResult::Optimal { x, .. } = lp.solve() else {
        unreachable!("a scaled maximal-support circulation is feasible")
    };
    let lcm = x.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let mut count: HashMap<usize, Vec<(usize, u64)>> = HashMap::new();
    for (j, q) in x.iter().enumerate() {
        let k = (q * Q::from_integer(lcm.clone()))
            .to_integer()
            .to_u64()
            .expect("flow fits in 64 bits");
        let e = &g.edges[edges[j]];
        count.entry(e.from).or_default().push((e.to, k));
    }
    for v in count.values_mut() {
        v.sort_unstable();
    }
    // Hierholzer
    let start = g.edges[edges[0]].from;
    let mut stack = vec![start];
    let mut walk = Vec::new();
    while let Some(&u) = stack.last() {
        let next = count
            .get_mut(&u)
            .and_then(|out| out.iter_mut().find(|(_, k)| *k > 0));
        match next {
            Some((t, k)) => {
                *k -= 1;
                stack.push(*t);
            }
            None => walk.push(stack.pop().expect("nonempty")),
        }
    }
    walk.reverse();
    walk
}

/// Sum of the weight vectors along a vertex walk.
pub fn walk_weight(g: &MultiEnergyGame, walk: &[usize]) -> Result<Vec<i64>> {
    let mut acc = vec![0i64; g.dim];
    for p in walk.windows(2) {
        let e = g
            .edge_between(p[0], p[1])
            .ok_or_else(|| Error::NotAnEdge(g.id(p[0]).into(), g.id(p[1]).into()))?;
        for (a, w) in acc.iter_mut().zip(&g.edges[e].w) {
            *a = a
                .checked_add(*w)
                .ok_or_else(|| Error::Overflow("walk weight".into()))?;
        }
    }
    Ok(acc)
}

/// Successors of each vertex in lexicographic order of their ids.
pub fn lexicographic_order(g: &MultiEnergyGame) -> Vec<Vec<usize>> {
    (0..g.num_vertices())
        .map(|v| {
            let mut s: Vec<usize> = g.successors(v).collect();
            s.sort_by(|a, b| g.id(*a).cmp(g.id(*b)));
            s
        })
        .collect()
}

/// Moore machine whose memory is a minimal credit vector of the current
/// vertex, together with the decoding of its memory states.
#[derive(Clone, Debug)]
pub struct CreditStrategy {
    pub machine: MooreStrategy,
    /// Memory state `m` stands for (last vertex, tracked credit).
    pub states: Vec<(usize, Credit)>,
}

/// At a player-1 vertex, moves to the first successor in `order[v]` whose
/// requirement is met by the tracked credit. After every move the tracked
/// value is lowered to the first minimal vector of the new vertex below it;
/// the real energy stays above it, so the machine has at most one state per
/// antichain element. Fails unless `c0` covers the antichain of `v0`.
pub fn credit_strategy(
    g: &MultiEnergyGame,
    credits: &CreditAssignment,
    v0: usize,
    c0: &[i64],
    order: &[Vec<usize>],
) -> Result<CreditStrategy> {
    if c0.len() != g.dim {
        return Err(Error::Dimension {
            expected: g.dim,
            found: c0.len(),
        });
    }
    if !credits.covers(v0, c0) {
        return Err(Error::Precondition(format!(
            "credit {c0:?} is not winning at `{}`",
            g.id(v0)
        )));
    }
    let lower = |v: usize, t: &[i64]| -> Credit {
        credits.sets[v]
            .iter()
            .find(|a| dominates(t, a))
            .expect("covered")
            .clone()
    };
    let add = |t: &[i64], e: usize| -> Credit {
        t.iter().zip(&g.edges[e].w).map(|(a, b)| a + b).collect()
    };
    let choose = |u: usize, t: &[i64]| -> Result<usize> {
        order[u]
            .iter()
            .copied()
            .find(|&v| {
                let nt = add(t, g.edge_between(u, v).expect("ordered successors"));
                nt.iter().all(|x| *x >= 0) && credits.covers(v, &nt)
            })
            .ok_or_else(|| Error::Internal(format!("no covered move at `{}` with {t:?}", g.id(u))))
    };
    let n = g.num_vertices();
    let mut states: Vec<(usize, Credit)> = vec![(v0, lower(v0, c0))];
    let mut index: HashMap<(usize, Credit), usize> = HashMap::new();
    index.insert(states[0].clone(), 0);
    let mut update: Vec<Vec<usize>> = Vec::new();
    let mut next: Vec<Vec<Option<usize>>> = Vec::new();
    let mut i = 0;
    while i < states.len() {
        let (u, t) = states[i].clone();
        let chosen = if g.owner[u] == Player::P1 {
            Some(choose(u, &t)?)
        } else {
            None
        };
        let targets: Vec<usize> = match chosen {
            Some(v) => vec![v],
            None => g.successors(u).collect(),
        };
        let mut row = vec![0; n];
        for v in targets {
            let nt = add(&t, g.edge_between(u, v).expect("successor"));
            if nt.iter().any(|x| *x < 0) || !credits.covers(v, &nt) {
                return Err(Error::Internal(format!(
                    "requirement broken on `{}` -> `{}`",
                    g.id(u),
                    g.id(v)
                )));
            }
            let key = (v, lower(v, &nt));
            let j = *index.entry(key.clone()).or_insert_with(|| {
                states.push(key);
                states.len() - 1
            });
            row[v] = j;
        }
        update.push(row);
        next.push(
            (0..n)
                .map(|v| match g.owner[v] {
                    Player::P2 => None,
                    Player::P1 if v == u => chosen,
                    Player::P1 => g.successors(v).next(),
                })
                .collect(),
        );
        i += 1;
    }
    let machine = MooreStrategy {
        player: Player::P1,
        initial: 0,
        update,
        next,
    };
    Ok(CreditStrategy { machine, states })
}

/// Converts an arbitrary-precision weight to `i64`.
pub fn to_i64(x: &BigInt) -> Result<i64> {
    x.to_i64()
        .ok_or_else(|| Error::Overflow(format!("weight {x} does not fit in 64 bits")))
}
