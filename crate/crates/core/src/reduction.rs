//! Gadget reduction from strict energy mean-payoff games to 4-dimensional
//! energy games, and the pull-back of gadget strategies.
//!
//! Every edge `e = (v, v′)` with weight `(x, y)` is replaced by
//!
//! ```text
//! v --(x,y,−1,1)--> r_e --(0,0,0,0)--> v′
//!                    |  ^
//!        (0,−1,0,0)  v  |  (0,0,0,0)
//!                    s_e ⟲ (0,0,1,−1)
//! ```

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::game::{GameStructure, Player};
use crate::graph::MooreStrategy;
use crate::multi_energy::{to_i64, MEdge, MultiEnergyGame};

/// Correspondence between a game and its gadget image.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GadgetMap {
    /// Original vertices keep their indices `0..n`.
    pub num_original: usize,
    /// `r[k]`, `s[k]`: gadget vertices of original edge `k`.
    pub r: Vec<usize>,
    pub s: Vec<usize>,
    /// For each gadget edge, the original edge it was generated from.
    pub edge_origin: Vec<usize>,
}

impl GadgetMap {
    pub fn is_original(&self, v: usize) -> bool {
        v < self.num_original
    }

    /// Original edge whose gadget contains `v`, if `v` is a fresh vertex.
    pub fn gadget_of(&self, v: usize) -> Option<usize> {
        (v >= self.num_original).then(|| (v - self.num_original) / 2)
    }
}

fn fresh_id(g: &GameStructure, base: String) -> String {
    let mut id = base;
    while g.vertex(&id).is_some() {
        id.push('\'');
    }
    id
}

pub fn to_energy4(g: &GameStructure) -> Result<(MultiEnergyGame, GadgetMap)> {
    let n = g.num_vertices();
    let mut verts: Vec<(String, Player)> =
        (0..n).map(|v| (g.id(v).to_string(), g.owner(v))).collect();
    let mut edges = Vec::with_capacity(5 * g.num_edges());
    let mut edge_origin = Vec::with_capacity(5 * g.num_edges());
    let (mut rs, mut ss) = (Vec::new(), Vec::new());
    for (k, e) in g.edges().iter().enumerate() {
        let r = verts.len();
        let s = r + 1;
        verts.push((fresh_id(g, format!("e{k}.r")), Player::P1));
        verts.push((fresh_id(g, format!("e{k}.s")), Player::P1));
        rs.push(r);
        ss.push(s);
        let (x, y) = (to_i64(&e.w.w1)?, to_i64(&e.w.w2)?);
        for (from, to, w) in [
            (e.from, r, vec![x, y, -1, 1]),
            (r, s, vec![0, -1, 0, 0]),
            (s, s, vec![0, 0, 1, -1]),
            (s, r, vec![0, 0, 0, 0]),
            (r, e.to, vec![0, 0, 0, 0]),
        ] {
            edges.push(MEdge { from, to, w });
            edge_origin.push(k);
        }
    }
    let meg = MultiEnergyGame::new(verts, edges, 4, g.initial())?;
    Ok((
        meg,
        GadgetMap {
            num_original: n,
            r: rs,
            s: ss,
            edge_origin,
        },
    ))
}

/// The same graph read as a 2-dimensional energy game, weights unchanged.
pub fn to_energy2(g: &GameStructure) -> Result<MultiEnergyGame> {
    let verts = (0..g.num_vertices())
        .map(|v| (g.id(v).to_string(), g.owner(v)))
        .collect();
    let mut edges = Vec::with_capacity(g.num_edges());
    for e in g.edges() {
        edges.push(MEdge {
            from: e.from,
            to: e.to,
            w: vec![to_i64(&e.w.w1)?, to_i64(&e.w.w2)?],
        });
    }
    MultiEnergyGame::new(verts, edges, 2, g.initial())
}

/// Successor preference for strategies on gadget games: from `r_e` continue
/// to the original target before detouring through `s_e`; from `s_e` return
/// to `r_e` before looping. Original vertices use lexicographic ids.
pub fn gadget_order(meg: &MultiEnergyGame, map: &GadgetMap) -> Vec<Vec<usize>> {
    (0..meg.num_vertices())
        .map(|v| {
            let mut succ: Vec<usize> = meg.successors(v).collect();
            match map.gadget_of(v) {
                None => succ.sort_by(|a, b| meg.id(*a).cmp(meg.id(*b))),
                Some(k) if v == map.r[k] => succ.sort_by_key(|&t| t == map.s[k]),
                Some(k) => succ.sort_by_key(|&t| t == map.s[k]),
            }
            succ
        })
        .collect()
}

/// Collapses the `r`/`s` excursions of a player-1 gadget strategy.
///
/// The memory of the result is built from the reachable pairs (original
/// vertex, gadget memory at that vertex) and then minimized. Strategies that can
/// stay forever inside one gadget are rejected.
pub fn pull_back_strategy(
    sp: &MooreStrategy,
    g: &GameStructure,
    map: &GadgetMap,
    v0: usize,
) -> Result<MooreStrategy> {
    if sp.player != Player::P1 {
        return Err(Error::Precondition(
            "only player-1 strategies are pulled back".into(),
        ));
    }
    let limit = 2 * sp.memory_size() + 2;
    // follow `sp` from memory `m` at `u` through the gadget of `u -> t`
    let excursion = |u: usize, m: usize, t: usize| -> Result<usize> {
        let k = g
            .edge_between(u, t)
            .ok_or_else(|| Error::NotAnEdge(g.id(u).into(), g.id(t).into()))?;
        let (r, s) = (map.r[k], map.s[k]);
        let mut cur = r;
        let mut mem = sp.step(m, r);
        for _ in 0..limit {
            let nxt = sp
                .next_move(mem, cur)
                .ok_or_else(|| Error::InvalidStrategy("undefined move in gadget".into()))?;
            if cur == r && nxt == t {
                return Ok(sp.step(mem, t));
            }
            if nxt != r && nxt != s {
                return Err(Error::InvalidStrategy(format!("gadget move to #{nxt}")));
            }
            mem = sp.step(mem, nxt);
            cur = nxt;
        }
        Err(Error::InvalidStrategy(format!(
            "loops forever inside the gadget of `{}` -> `{}`",
            g.id(u),
            g.id(t)
        )))
    };
    // the original edge `sp` enters from `u` with memory `m`
    let original_move = |m: usize, u: usize| -> Option<usize> {
        let r = sp.next_move(m, u)?;
        map.gadget_of(r)
            .filter(|&k| map.r[k] == r)
            .map(|k| g.edge(k).to)
    };
    let n = g.num_vertices();
    let mut states = vec![(v0, sp.initial)];
    let mut index: HashMap<(usize, usize), usize> = HashMap::from([((v0, sp.initial), 0)]);
    let mut update = Vec::new();
    let mut next = Vec::new();
    let mut i = 0;
    while i < states.len() {
        let (u, m) = states[i];
        let chosen = if g.owner(u) == Player::P1 {
            Some(original_move(m, u).ok_or_else(|| {
                Error::InvalidStrategy(format!("move from `{}` does not enter a gadget", g.id(u)))
            })?)
        } else {
            None
        };
        let targets: Vec<usize> = match chosen {
            Some(t) => vec![t],
            None => g.successors(u).collect(),
        };
        let mut row = vec![0; n];
        for t in targets {
            let key = (t, excursion(u, m, t)?);
            let j = *index.entry(key).or_insert_with(|| {
                states.push(key);
                states.len() - 1
            });
            row[t] = j;
        }
        update.push(row);
        next.push(
            (0..n)
                .map(|v| match g.owner(v) {
                    Player::P2 => None,
                    Player::P1 if v == u => chosen,
                    Player::P1 => original_move(m, v).or_else(|| g.successors(v).next()),
                })
                .collect(),
        );
        i += 1;
    }
    Ok(MooreStrategy {
        player: Player::P1,
        initial: 0,
        update,
        next,
    }
    .minimized())
}
