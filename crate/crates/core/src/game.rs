//! Game structures, plays, objectives and verdicts.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::cycles::{CycleWitness, MulticycleWitness};
use crate::error::{Error, Result};
use crate::graph::MooreStrategy;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Player {
    P1,
    P2,
}

impl Player {
    pub fn opponent(self) -> Player {
        match self {
            Player::P1 => Player::P2,
            Player::P2 => Player::P1,
        }
    }

    pub fn number(self) -> u8 {
        match self {
            Player::P1 => 1,
            Player::P2 => 2,
        }
    }
}

/// Weight dimension: `One` is the energy dimension, `Two` the mean-payoff one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Dim {
    One,
    Two,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Weight2 {
    pub w1: BigInt,
    pub w2: BigInt,
}

impl Weight2 {
    pub fn new(w1: impl Into<BigInt>, w2: impl Into<BigInt>) -> Self {
        Weight2 {
            w1: w1.into(),
            w2: w2.into(),
        }
    }

    pub fn zero() -> Self {
        Weight2::default()
    }

    pub fn get(&self, dim: Dim) -> &BigInt {
        match dim {
            Dim::One => &self.w1,
            Dim::Two => &self.w2,
        }
    }

    pub fn add(&self, other: &Weight2) -> Weight2 {
        Weight2 {
            w1: &self.w1 + &other.w1,
            w2: &self.w2 + &other.w2,
        }
    }

    pub fn scale(&self, k: &BigInt) -> Weight2 {
        Weight2 {
            w1: &self.w1 * k,
            w2: &self.w2 * k,
        }
    }

    /// Componentwise `>= (0,0)`.
    pub fn is_nonnegative(&self) -> bool {
        !self.w1.is_negative() && !self.w2.is_negative()
    }

    /// Componentwise `> (0,0)`.
    pub fn is_positive(&self) -> bool {
        self.w1.is_positive() && self.w2.is_positive()
    }
}

impl fmt::Display for Weight2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.w1, self.w2)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub w: Weight2,
}

/// Finite weighted digraph whose vertices are split between two players.
///
/// Vertices are dense indices `0..n`; string ids are kept for I/O. Every vertex
/// has an outgoing edge and there is at most one edge per ordered pair.
#[derive(Clone, Debug)]
pub struct GameStructure {
    ids: Vec<String>,
    owner: Vec<Player>,
    edges: Vec<Edge>,
    out: Vec<Vec<usize>>,
    index: HashMap<String, usize>,
    initial: Option<usize>,
    max_abs: BigInt,
}

impl GameStructure {
    pub fn new(
        vertices: Vec<(String, Player)>,
        edges: Vec<Edge>,
        initial: Option<usize>,
    ) -> Result<Self> {
        let mut index = HashMap::new();
        let mut ids = Vec::with_capacity(vertices.len());
        let mut owner = Vec::with_capacity(vertices.len());
        for (i, (id, p)) in vertices.into_iter().enumerate() {
            if index.insert(id.clone(), i).is_some() {
                return Err(Error::DuplicateVertex(id));
            }
            ids.push(id);
            owner.push(p);
        }
        let n = ids.len();
        let mut out = vec![Vec::new(); n];
        let mut seen = std::collections::HashSet::new();
        let mut max_abs = BigInt::zero();
        for (k, e) in edges.iter().enumerate() {
            if e.from >= n {
                return Err(Error::UnknownVertex(format!("#{}", e.from)));
            }
            if e.to >= n {
                return Err(Error::UnknownVertex(format!("#{}", e.to)));
            }
            if !seen.insert((e.from, e.to)) {
                return Err(Error::DuplicateEdge(ids[e.from].clone(), ids[e.to].clone()));
            }
            out[e.from].push(k);
            for x in [&e.w.w1, &e.w.w2] {
                let a = x.abs();
                if a > max_abs {
                    max_abs = a;
                }
            }
        }
        if let Some(v) = out.iter().position(|o| o.is_empty()) {
            return Err(Error::NoOutgoingEdge(ids[v].clone()));
        }
        if let Some(v0) = initial {
            if v0 >= n {
                return Err(Error::UnknownVertex(format!("#{}", v0)));
            }
        }
        Ok(GameStructure {
            ids,
            owner,
            edges,
            out,
            index,
            initial,
            max_abs,
        })
    }

    /// Builds a game from string ids; handy for fixtures and examples.
    pub fn from_ids(
        vertices: &[(&str, Player)],
        edges: &[(&str, &str, i64, i64)],
        initial: Option<&str>,
    ) -> Result<Self> {
        let verts: Vec<(String, Player)> = vertices
            .iter()
            .map(|(id, p)| (id.to_string(), *p))
            .collect();
        let lookup: HashMap<&str, usize> = vertices
            .iter()
            .enumerate()
            .map(|(i, (id, _))| (*id, i))
            .collect();
        let find = |id: &str| {
            lookup
                .get(id)
                .copied()
                .ok_or_else(|| Error::UnknownVertex(id.into()))
        };
        let mut es = Vec::with_capacity(edges.len());
        for (a, b, x, y) in edges {
            es.push(Edge {
                from: find(a)?,
                to: find(b)?,
                w: Weight2::new(*x, *y),
            });
        }
        let init = match initial {
            Some(id) => Some(find(id)?),
            None => None,
        };
        GameStructure::new(verts, es, init)
    }

    pub fn num_vertices(&self) -> usize {
        self.ids.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// `||E||`: the largest absolute weight component.
    pub fn max_abs_weight(&self) -> &BigInt {
        &self.max_abs
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

    pub fn owners(&self) -> &[Player] {
        &self.owner
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> &Edge {
        &self.edges[e]
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

    pub fn is_one_player(&self) -> bool {
        self.owner.iter().all(|&p| p == Player::P1)
    }

    pub fn with_initial(&self, v0: usize) -> GameStructure {
        let mut g = self.clone();
        g.initial = Some(v0);
        g
    }

    pub fn with_owner(&self, v: usize, p: Player) -> GameStructure {
        let mut g = self.clone();
        g.owner[v] = p;
        g
    }

    /// Same graph with every weight replaced by `f(edge)`.
    pub fn map_weights(&self, mut f: impl FnMut(&Edge) -> Weight2) -> GameStructure {
        let edges = self
            .edges
            .iter()
            .map(|e| Edge {
                from: e.from,
                to: e.to,
                w: f(e),
            })
            .collect();
        let verts = self
            .ids
            .iter()
            .cloned()
            .zip(self.owner.iter().copied())
            .collect();
        GameStructure::new(verts, edges, self.initial).expect("same shape stays valid")
    }

    /// Sum of weights along a vertex path.
    pub fn path_weight(&self, path: &[usize]) -> Result<Weight2> {
        let mut acc = Weight2::zero();
        for w in path.windows(2) {
            let e = self
                .edge_between(w[0], w[1])
                .ok_or_else(|| Error::NotAnEdge(self.id(w[0]).into(), self.id(w[1]).into()))?;
            acc = acc.add(&self.edges[e].w);
        }
        Ok(acc)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MpKind {
    Inf,
    Sup,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Cmp {
    Strict,
    NonStrict,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObjectiveSpec {
    pub mp: MpKind,
    pub cmp: Cmp,
    pub threshold: BigRational,
}

impl ObjectiveSpec {
    pub fn new(mp: MpKind, cmp: Cmp) -> Self {
        ObjectiveSpec {
            mp,
            cmp,
            threshold: BigRational::zero(),
        }
    }

    pub fn with_threshold(mut self, t: BigRational) -> Self {
        self.threshold = t;
        self
    }

    pub fn is_strict(&self) -> bool {
        self.cmp == Cmp::Strict
    }

    /// The four zero-threshold variants.
    pub fn all() -> [ObjectiveSpec; 4] {
        [
            ObjectiveSpec::new(MpKind::Inf, Cmp::Strict),
            ObjectiveSpec::new(MpKind::Sup, Cmp::Strict),
            ObjectiveSpec::new(MpKind::Inf, Cmp::NonStrict),
            ObjectiveSpec::new(MpKind::Sup, Cmp::NonStrict),
        ]
    }

    /// Does a mean-payoff value satisfy the threshold comparison?
    pub fn accepts(&self, value: &BigRational) -> bool {
        match self.cmp {
            Cmp::Strict => value > &self.threshold,
            Cmp::NonStrict => value >= &self.threshold,
        }
    }
}

/// Replaces the weight `w` on `dim` by `b·w − a` where the threshold is `a/b`,
/// so that the returned objective compares against 0.
pub fn normalize_threshold(
    g: &GameStructure,
    spec: &ObjectiveSpec,
    dim: Dim,
) -> Result<(GameStructure, ObjectiveSpec)> {
    let a = spec.threshold.numer().clone();
    let b = spec.threshold.denom().clone();
    if !b.is_positive() {
        return Err(Error::Precondition(
            "threshold denominator must be positive".into(),
        ));
    }
    let h = g.map_weights(|e| {
        let mut w = e.w.clone();
        match dim {
            Dim::One => w.w1 = &b * &w.w1 - &a,
            Dim::Two => w.w2 = &b * &w.w2 - &a,
        }
        w
    });
    let out = ObjectiveSpec {
        threshold: BigRational::zero(),
        ..spec.clone()
    };
    Ok((h, out))
}

/// A finite play prefix with cached running sums.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlayPrefix {
    vertices: Vec<usize>,
    levels: Vec<Weight2>,
}

/// Result of the stack-based cycle decomposition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    /// Each cycle is a closed vertex sequence `v … v`.
    pub cycles: Vec<Vec<usize>>,
    pub stack: Vec<usize>,
}

impl PlayPrefix {
    pub fn new(g: &GameStructure, vertices: Vec<usize>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::Precondition("play prefix must be nonempty".into()));
        }
        let mut p = PlayPrefix {
            vertices: vec![vertices[0]],
            levels: vec![Weight2::zero()],
        };
        for &v in &vertices[1..] {
            p.push(g, v)?;
        }
        Ok(p)
    }

    pub fn from_ids(g: &GameStructure, ids: &[&str]) -> Result<Self> {
        let vs = ids
            .iter()
            .map(|id| {
                g.vertex(id)
                    .ok_or_else(|| Error::UnknownVertex(id.to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        PlayPrefix::new(g, vs)
    }

    pub fn push(&mut self, g: &GameStructure, v: usize) -> Result<()> {
        let u = *self.vertices.last().expect("nonempty");
        let e = g
            .edge_between(u, v)
            .ok_or_else(|| Error::NotAnEdge(g.id(u).into(), g.id(v).into()))?;
        let next = self.levels.last().expect("nonempty").add(&g.edge(e).w);
        self.vertices.push(v);
        self.levels.push(next);
        Ok(())
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    /// Number of edges.
    pub fn len(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn last(&self) -> usize {
        *self.vertices.last().expect("nonempty")
    }

    /// Sum of the first `k` edge weights on `dim`.
    pub fn energy_level(&self, dim: Dim, k: usize) -> Result<&BigInt> {
        self.levels
            .get(k)
            .map(|w| w.get(dim))
            .ok_or(Error::IndexOutOfRange {
                index: k,
                len: self.len(),
            })
    }

    pub fn total(&self) -> &Weight2 {
        self.levels.last().expect("nonempty")
    }

    pub fn running_average(&self, dim: Dim, k: usize) -> Result<BigRational> {
        if k == 0 {
            return Err(Error::ZeroIndex);
        }
        let s = self.energy_level(dim, k)?;
        Ok(BigRational::new(s.clone(), BigInt::from(k)))
    }

    pub fn cycle_decomposition(&self) -> Decomposition {
        cycle_decomposition(&self.vertices)
    }
}

/// Push vertices on a stack; whenever the incoming vertex is already on it, pop
/// the closed cycle and keep the repeated vertex.
pub fn cycle_decomposition(path: &[usize]) -> Decomposition {
    let mut stack: Vec<usize> = Vec::new();
    let mut cycles = Vec::new();
    for &v in path {
        if let Some(p) = stack.iter().position(|&u| u == v) {
            let mut c: Vec<usize> = stack[p..].to_vec();
            c.push(v);
            cycles.push(c);
            stack.truncate(p + 1);
        } else {
            stack.push(v);
        }
    }
    Decomposition { cycles, stack }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Answer {
    Yes,
    No,
    Unknown,
}

#[derive(Clone, Debug)]
pub enum Certificate {
    Cycle(CycleWitness),
    Multicycle(MulticycleWitness),
    Spoiling(MooreStrategy),
    None,
}

#[derive(Clone, Debug)]
pub struct Verdict {
    pub answer: Answer,
    pub initial_credit: Option<BigInt>,
    pub certificate: Certificate,
    /// Name of the algorithm that produced the verdict.
    pub route: &'static str,
}
