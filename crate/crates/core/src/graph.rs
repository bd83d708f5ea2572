//! Reachability, SCCs, Moore machines, products and brute-force enumerators.

use std::collections::{HashMap, VecDeque};

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;

use crate::error::{Error, Result};
use crate::game::{Edge, GameStructure, Player};

/// Default guard for the enumerators.
pub const ENUMERATION_GUARD: usize = 1_000_000;

/// Largest vertex count accepted by [`enumerate_simple_cycles`].
pub const CYCLE_ENUM_MAX_VERTICES: usize = 12;

pub fn reachable_set(g: &GameStructure, v0: usize) -> Vec<bool> {
    let mut seen = vec![false; g.num_vertices()];
    let mut stack = vec![v0];
    seen[v0] = true;
    while let Some(u) = stack.pop() {
        for v in g.successors(u) {
            if !seen[v] {
                seen[v] = true;
                stack.push(v);
            }
        }
    }
    seen
}

/// An induced subgraph together with the map back to the parent's indices.
#[derive(Clone, Debug)]
pub struct Subgraph {
    pub game: GameStructure,
    /// `to_parent[new] = old`
    pub to_parent: Vec<usize>,
    /// Retained vertices that lost all their outgoing edges (parent indices).
    pub sinks: Vec<usize>,
}

impl Subgraph {
    pub fn from_parent(&self, old: usize) -> Option<usize> {
        self.to_parent.iter().position(|&o| o == old)
    }
}

/// Induced subgraph on `keep`. Vertices left without outgoing edges are given
/// no edges in the result only if there are none; they are reported in `sinks`
/// and the call fails if any exist, since a game needs an edge everywhere.
pub fn induced_subgraph(
    g: &GameStructure,
    keep: &[bool],
) -> std::result::Result<Subgraph, Vec<usize>> {
    let mut new_index = vec![usize::MAX; g.num_vertices()];
    let mut to_parent = Vec::new();
    let mut verts = Vec::new();
    for v in 0..g.num_vertices() {
        if keep[v] {
            new_index[v] = to_parent.len();
            to_parent.push(v);
            verts.push((g.id(v).to_string(), g.owner(v)));
        }
    }
    let mut edges = Vec::new();
    let mut has_out = vec![false; to_parent.len()];
    for e in g.edges() {
        if keep[e.from] && keep[e.to] {
            has_out[new_index[e.from]] = true;
            edges.push(Edge {
                from: new_index[e.from],
                to: new_index[e.to],
                w: e.w.clone(),
            });
        }
    }
    let sinks: Vec<usize> = (0..to_parent.len())
        .filter(|&i| !has_out[i])
        .map(|i| to_parent[i])
        .collect();
    if !sinks.is_empty() {
        return Err(sinks);
    }
    let initial = g.initial().filter(|&v| keep[v]).map(|v| new_index[v]);
    let game = GameStructure::new(verts, edges, initial).expect("checked above");
    Ok(Subgraph {
        game,
        to_parent,
        sinks,
    })
}

/// Subgraph induced by the vertices reachable from `v0` (which becomes initial).
pub fn reachable_subgraph(g: &GameStructure, v0: usize) -> Subgraph {
    let keep = reachable_set(g, v0);
    let mut sub = induced_subgraph(g, &keep).expect("reachable sets are closed under successors");
    let start = sub.from_parent(v0).expect("v0 is reachable");
    sub.game = sub.game.with_initial(start);
    sub
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SccDecomposition {
    /// Sorted components, each sorted, ordered by smallest member.
    pub components: Vec<Vec<usize>>,
    pub component_of: Vec<usize>,
    /// Reachability from the game's initial vertex, when it has one.
    pub reachable_from: Option<(usize, Vec<bool>)>,
}

impl SccDecomposition {
    /// Does the component contain at least one edge (i.e. a cycle)?
    pub fn is_cyclic(&self, g: &GameStructure, c: usize) -> bool {
        let comp = &self.components[c];
        comp.len() > 1 || g.edge_between(comp[0], comp[0]).is_some()
    }
}

pub fn sccs(g: &GameStructure) -> SccDecomposition {
    let mut pg: DiGraph<(), ()> = DiGraph::with_capacity(g.num_vertices(), g.num_edges());
    let nodes: Vec<_> = (0..g.num_vertices()).map(|_| pg.add_node(())).collect();
    for e in g.edges() {
        pg.add_edge(nodes[e.from], nodes[e.to], ());
    }
    let mut components: Vec<Vec<usize>> = tarjan_scc(&pg)
        .into_iter()
        .map(|c| {
            let mut c: Vec<usize> = c.into_iter().map(|n| n.index()).collect();
            c.sort_unstable();
            c
        })
        .collect();
    components.sort();
    let mut component_of = vec![0; g.num_vertices()];
    for (i, c) in components.iter().enumerate() {
        for &v in c {
            component_of[v] = i;
        }
    }
    let reachable_from = g.initial().map(|v0| (v0, reachable_set(g, v0)));
    SccDecomposition {
        components,
        component_of,
        reachable_from,
    }
}

/// Breadth-first shortest path from `from` to any vertex satisfying `target`.
pub fn shortest_path_to(
    g: &GameStructure,
    from: usize,
    target: impl Fn(usize) -> bool,
) -> Option<Vec<usize>> {
    let n = g.num_vertices();
    let mut parent = vec![usize::MAX; n];
    let mut seen = vec![false; n];
    let mut queue = VecDeque::from([from]);
    seen[from] = true;
    while let Some(u) = queue.pop_front() {
        if target(u) {
            let mut path = vec![u];
            let mut x = u;
            while x != from {
                x = parent[x];
                path.push(x);
            }
            path.reverse();
            return Some(path);
        }
        for v in g.successors(u) {
            if !seen[v] {
                seen[v] = true;
                parent[v] = u;
                queue.push_back(v);
            }
        }
    }
    None
}

pub fn shortest_path(g: &GameStructure, from: usize, to: usize) -> Option<Vec<usize>> {
    shortest_path_to(g, from, |v| v == to)
}

/// Finite-memory strategy as a deterministic Moore machine.
///
/// Convention: the memory after reading `ρ0…ρk` is `m_k`, with `m_0 = initial`
/// and `m_{k+1} = update[m_k][ρ_{k+1}]`; at a vertex `ρk` owned by `player`
/// the machine moves to `next[m_k][ρk]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MooreStrategy {
    pub player: Player,
    pub initial: usize,
    pub update: Vec<Vec<usize>>,
    pub next: Vec<Vec<Option<usize>>>,
}

impl MooreStrategy {
    pub fn memory_size(&self) -> usize {
        self.update.len()
    }

    /// Memoryless strategy from a per-vertex choice (`None` off the player's vertices).
    pub fn memoryless(player: Player, choice: Vec<Option<usize>>) -> Self {
        let n = choice.len();
        MooreStrategy {
            player,
            initial: 0,
            update: vec![vec![0; n]],
            next: vec![choice],
        }
    }

    /// Strategy for a player owning no vertex.
    pub fn empty(g: &GameStructure, player: Player) -> Self {
        MooreStrategy::memoryless(player, vec![None; g.num_vertices()])
    }

    pub fn next_move(&self, m: usize, v: usize) -> Option<usize> {
        self.next[m][v]
    }

    pub fn step(&self, m: usize, v: usize) -> usize {
        self.update[m][v]
    }

    pub fn validate(&self, g: &GameStructure) -> Result<()> {
        let n = g.num_vertices();
        if self.update.is_empty() || self.initial >= self.update.len() {
            return Err(Error::InvalidStrategy("bad initial memory state".into()));
        }
        if self.next.len() != self.update.len() {
            return Err(Error::InvalidStrategy("table size mismatch".into()));
        }
        for (m, (up, nx)) in self.update.iter().zip(&self.next).enumerate() {
            if up.len() != n || nx.len() != n {
                return Err(Error::InvalidStrategy(format!("state {m} has wrong arity")));
            }
            for v in 0..n {
                if up[v] >= self.update.len() {
                    return Err(Error::InvalidStrategy(format!(
                        "state {m} updates out of range"
                    )));
                }
                let owned = g.owner(v) == self.player;
                match nx[v] {
                    Some(t) if owned => {
                        if g.edge_between(v, t).is_none() {
                            return Err(Error::InvalidStrategy(format!(
                                "state {m} moves {} -> {} along no edge",
                                g.id(v),
                                g.id(t)
                            )));
                        }
                    }
                    None if !owned => {}
                    _ => {
                        return Err(Error::InvalidStrategy(format!(
                            "state {m}: next move defined exactly on owned vertices ({})",
                            g.id(v)
                        )))
                    }
                }
            }
        }
        Ok(())
    }

    /// Equivalent machine with the fewest states: states reachable from
    /// `initial` under any input, merged by partition refinement. States are
    /// renumbered in breadth-first order, so `initial` becomes 0.
    pub fn minimized(&self) -> MooreStrategy {
        let n = self.next.first().map_or(0, |r| r.len());
        let mut order = vec![self.initial];
        let mut seen = vec![false; self.memory_size()];
        seen[self.initial] = true;
        let mut i = 0;
        while i < order.len() {
            for &t in &self.update[order[i]] {
                if !seen[t] {
                    seen[t] = true;
                    order.push(t);
                }
            }
            i += 1;
        }
        let mut class = vec![usize::MAX; self.memory_size()];
        let mut ids: HashMap<Vec<Option<usize>>, usize> = HashMap::new();
        for &m in &order {
            let k = ids.len();
            class[m] = *ids.entry(self.next[m].clone()).or_insert(k);
        }
        let mut count = ids.len();
        loop {
            let mut sig: HashMap<(usize, Vec<usize>), usize> = HashMap::new();
            let mut refined = vec![usize::MAX; self.memory_size()];
            for &m in &order {
                let key = (class[m], self.update[m].iter().map(|&t| class[t]).collect());
                let k = sig.len();
                refined[m] = *sig.entry(key).or_insert(k);
            }
            let stable = sig.len() == count;
            count = sig.len();
            class = refined;
            if stable {
                break;
            }
        }
        // classes are numbered by first appearance in `order`, so the initial
        // state's class is 0 and representatives come out breadth-first
        let mut rep = vec![usize::MAX; count];
        for &m in &order {
            if rep[class[m]] == usize::MAX {
                rep[class[m]] = m;
            }
        }
        let update = rep
            .iter()
            .map(|&m| (0..n).map(|v| class[self.update[m][v]]).collect())
            .collect();
        let next = rep.iter().map(|&m| self.next[m].clone()).collect();
        MooreStrategy {
            player: self.player,
            initial: 0,
            update,
            next,
        }
    }

    /// Number of memory states reachable from `(v0, initial)` in the product.
    pub fn reachable_memory(&self, g: &GameStructure, v0: usize) -> usize {
        let p = product(g, self, v0);
        let mut ms: Vec<usize> = p.pairs.iter().map(|&(_, m)| m).collect();
        ms.sort_unstable();
        ms.dedup();
        ms.len()
    }
}

/// `G(σ)`: the product of a game with a Moore machine, restricted to the part
/// reachable from `(v0, m0)`.
#[derive(Clone, Debug)]
pub struct Product {
    /// Vertices of the strategy's player keep a single edge and are handed to
    /// the opponent, so the product is a one-player game for the opponent.
    pub game: GameStructure,
    pub pairs: Vec<(usize, usize)>,
}

impl Product {
    pub fn project(&self, path: &[usize]) -> Vec<usize> {
        path.iter().map(|&x| self.pairs[x].0).collect()
    }
}

pub fn product(g: &GameStructure, s: &MooreStrategy, v0: usize) -> Product {
    let mut index: HashMap<(usize, usize), usize> = HashMap::new();
    let mut pairs = vec![(v0, s.initial)];
    index.insert((v0, s.initial), 0);
    let mut edges = Vec::new();
    let mut i = 0;
    while i < pairs.len() {
        let (v, m) = pairs[i];
        let targets: Vec<usize> = if g.owner(v) == s.player {
            vec![s.next[m][v].expect("strategy defined on owned vertices")]
        } else {
            g.successors(v).collect()
        };
        for t in targets {
            let e = g.edge_between(v, t).expect("strategy follows edges");
            let key = (t, s.update[m][t]);
            let j = *index.entry(key).or_insert_with(|| {
                pairs.push(key);
                pairs.len() - 1
            });
            edges.push(Edge {
                from: i,
                to: j,
                w: g.edge(e).w.clone(),
            });
        }
        i += 1;
    }
    let verts = pairs
        .iter()
        .map(|&(v, m)| {
            let owner = if g.owner(v) == s.player {
                s.player.opponent()
            } else {
                g.owner(v)
            };
            (format!("{}@{}", g.id(v), m), owner)
        })
        .collect();
    let game = GameStructure::new(verts, edges, Some(0)).expect("product is a valid game");
    Product { game, pairs }
}

/// All simple cycles, each once, as open vertex lists starting at their
/// smallest vertex (`[v0, …, vk]` stands for `v0 … vk v0`).
pub fn enumerate_simple_cycles(g: &GameStructure, max_count: usize) -> Result<Vec<Vec<usize>>> {
    let n = g.num_vertices();
    if n > CYCLE_ENUM_MAX_VERTICES {
        return Err(Error::GuardExceeded(format!(
            "{n} vertices exceed the enumeration limit of {CYCLE_ENUM_MAX_VERTICES}"
        )));
    }
    let mut out = Vec::new();
    let mut on_path = vec![false; n];
    for s in 0..n {
        let mut path = vec![s];
        on_path[s] = true;
        extend(g, s, &mut path, &mut on_path, &mut out, max_count)?;
        on_path[s] = false;
    }
    Ok(out)
}

fn extend(
    g: &GameStructure,
    s: usize,
    path: &mut Vec<usize>,
    on_path: &mut [bool],
    out: &mut Vec<Vec<usize>>,
    max_count: usize,
) -> Result<()> {
    let u = *path.last().expect("nonempty");
    let mut succ: Vec<usize> = g.successors(u).collect();
    succ.sort_unstable();
    for v in succ {
        if v == s {
            if out.len() >= max_count {
                return Err(Error::GuardExceeded(format!(
                    "more than {max_count} simple cycles"
                )));
            }
            out.push(path.clone());
        } else if v > s && !on_path[v] {
            on_path[v] = true;
            path.push(v);
            extend(g, s, path, on_path, out, max_count)?;
            path.pop();
            on_path[v] = false;
        }
    }
    Ok(())
}

/// Iterator over every memoryless strategy of `player`, in mixed-radix order
/// of the successor lists of the owned vertices.
#[derive(Clone, Debug)]
pub struct MemorylessIter {
    player: Player,
    n: usize,
    owned: Vec<(usize, Vec<usize>)>,
    index: usize,
    count: usize,
}

impl MemorylessIter {
    pub fn count(&self) -> usize {
        self.count
    }

    /// The `k`-th strategy in enumeration order (for splitting work by range).
    pub fn strategy(&self, mut k: usize) -> MooreStrategy {
        let mut choice = vec![None; self.n];
        for (v, succ) in &self.owned {
            choice[*v] = Some(succ[k % succ.len()]);
            k /= succ.len();
        }
        MooreStrategy::memoryless(self.player, choice)
    }
}

impl Iterator for MemorylessIter {
    type Item = MooreStrategy;

    fn next(&mut self) -> Option<MooreStrategy> {
        if self.index >= self.count {
            return None;
        }
        let s = self.strategy(self.index);
        self.index += 1;
        Some(s)
    }
}

pub fn enumerate_memoryless(
    g: &GameStructure,
    player: Player,
    bound: usize,
) -> Result<MemorylessIter> {
    let mut owned = Vec::new();
    let mut count: usize = 1;
    for v in 0..g.num_vertices() {
        if g.owner(v) == player {
            let mut succ: Vec<usize> = g.successors(v).collect();
            succ.sort_unstable();
            count = count
                .checked_mul(succ.len())
                .filter(|&c| c <= bound)
                .ok_or_else(|| {
                    Error::GuardExceeded(format!("more than {bound} memoryless strategies"))
                })?;
            owned.push((v, succ));
        }
    }
    Ok(MemorylessIter {
        player,
        n: g.num_vertices(),
        owned,
        index: 0,
        count,
    })
}

/// Rotate an open cycle so that it starts at position `r`.
pub fn rotate(cycle: &[usize], r: usize) -> Vec<usize> {
    let mut c = cycle[r..].to_vec();
    c.extend_from_slice(&cycle[..r]);
    c
}

/// Closed walk (`first == last`) for an open cycle.
pub fn close(cycle: &[usize]) -> Vec<usize> {
    let mut c = cycle.to_vec();
    c.push(cycle[0]);
    c
}
