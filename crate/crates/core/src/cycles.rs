//! Detection of reachable good cycles and good multicycles.
//!
//! Both detectors solve an exact circulation program inside every reachable
//! strongly connected component, then peel the optimal circulation into simple
//! cycles to assemble a certificate.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::game::{GameStructure, Weight2};
use crate::graph::{close, reachable_subgraph, sccs, shortest_path};
use crate::lp::{LinearProgram, LpResult, Rel, Q};

/// A simple good cycle, or two simple cycles of one component whose weights
/// `(−x, y)` and `(x′, −y′)` make an angle below 180°.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CycleWitness {
    SimpleGood { cycle: Vec<usize>, weight: Weight2 },
    TwoCycle(TwoCycle),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoCycle {
    /// Open cycle with weight `(−x, y)`.
    pub c: Vec<usize>,
    /// Open cycle with weight `(x′, −y′)`.
    pub c_prime: Vec<usize>,
    pub w_c: Weight2,
    pub w_c_prime: Weight2,
    pub a: BigInt,
    pub b: BigInt,
    pub alpha: BigInt,
    pub beta: BigInt,
    /// Vertex path from `c[0]` to `c_prime[0]`.
    pub path_c_to_c_prime: Vec<usize>,
    /// Vertex path from `c_prime[0]` to `c[0]`.
    pub path_c_prime_to_c: Vec<usize>,
}

impl TwoCycle {
    /// Closed walk: `α` loops of `C`, path to `C′`, `β` loops of `C′`, path back.
    pub fn composite(&self) -> Vec<usize> {
        let mut walk = vec![self.c[0]];
        let alpha = usize::try_from(&self.alpha).expect("loop count fits in memory");
        let beta = usize::try_from(&self.beta).expect("loop count fits in memory");
        for _ in 0..alpha {
            walk.extend(self.c[1..].iter().copied());
            walk.push(self.c[0]);
        }
        walk.extend(self.path_c_to_c_prime[1..].iter().copied());
        for _ in 0..beta {
            walk.extend(self.c_prime[1..].iter().copied());
            walk.push(self.c_prime[0]);
        }
        walk.extend(self.path_c_prime_to_c[1..].iter().copied());
        walk
    }

    /// Rechecks the sign pattern, the angle condition and the coefficients.
    pub fn check(&self, g: &GameStructure) -> Result<()> {
        let wc = g.path_weight(&close(&self.c))?;
        let wcp = g.path_weight(&close(&self.c_prime))?;
        if wc != self.w_c || wcp != self.w_c_prime {
            return Err(Error::InvalidWitness(
                "stored cycle weights are stale".into(),
            ));
        }
        let (a, b) = combine_coefficients(&wc, &wcp)?;
        if a != self.a || b != self.b {
            return Err(Error::InvalidWitness("coefficients do not match".into()));
        }
        let comb = wc.scale(&a).add(&wcp.scale(&b));
        if !comb.is_positive() {
            return Err(Error::InvalidWitness(format!("a·w(C) + b·w(C′) = {comb}")));
        }
        for (p, from, to) in [
            (&self.path_c_to_c_prime, self.c[0], self.c_prime[0]),
            (&self.path_c_prime_to_c, self.c_prime[0], self.c[0]),
        ] {
            if p.first() != Some(&from) || p.last() != Some(&to) {
                return Err(Error::InvalidWitness("connector endpoints".into()));
            }
            g.path_weight(p)?;
        }
        Ok(())
    }
}

impl CycleWitness {
    pub fn check(&self, g: &GameStructure) -> Result<()> {
        match self {
            CycleWitness::SimpleGood { cycle, weight } => {
                let w = g.path_weight(&close(cycle))?;
                if &w != weight || w.w1.is_negative() || !w.w2.is_positive() {
                    return Err(Error::InvalidWitness(format!(
                        "cycle weight {w} is not good"
                    )));
                }
                if !is_simple(cycle) {
                    return Err(Error::InvalidWitness("cycle is not simple".into()));
                }
                Ok(())
            }
            CycleWitness::TwoCycle(t) => t.check(g),
        }
    }
}

/// Good multicycle certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MulticycleWitness {
    SingleCycle {
        cycle: Vec<usize>,
        weight: Weight2,
    },
    /// `alpha·w(C) + beta·w(C′) >= (0,0)`, with `w(C) = (−x, y)`, `w(C′) = (x′, −y′)`.
    TwoCycle {
        c: Vec<usize>,
        c_prime: Vec<usize>,
        w_c: Weight2,
        w_c_prime: Weight2,
        alpha: BigInt,
        beta: BigInt,
    },
    /// Integer circulation peeled into simple cycles with multiplicities.
    Flow {
        cycles: Vec<(Vec<usize>, BigInt)>,
        weight: Weight2,
    },
}

impl MulticycleWitness {
    pub fn total_weight(&self) -> Weight2 {
        match self {
            MulticycleWitness::SingleCycle { weight, .. } => weight.clone(),
            MulticycleWitness::TwoCycle {
                w_c,
                w_c_prime,
                alpha,
                beta,
                ..
            } => w_c.scale(alpha).add(&w_c_prime.scale(beta)),
            MulticycleWitness::Flow { weight, .. } => weight.clone(),
        }
    }

    /// Recomputes the weight and checks it is `>= (0,0)` with support in one SCC.
    pub fn check(&self, g: &GameStructure) -> Result<()> {
        let cycles: Vec<(Vec<usize>, BigInt)> = match self {
            MulticycleWitness::SingleCycle { cycle, .. } => vec![(cycle.clone(), BigInt::one())],
            MulticycleWitness::TwoCycle {
                c,
                c_prime,
                alpha,
                beta,
                ..
            } => {
                vec![(c.clone(), alpha.clone()), (c_prime.clone(), beta.clone())]
            }
            MulticycleWitness::Flow { cycles, .. } => cycles.clone(),
        };
        if cycles.is_empty() || cycles.iter().any(|(_, k)| !k.is_positive()) {
            return Err(Error::InvalidWitness("empty support".into()));
        }
        let mut total = Weight2::zero();
        for (c, k) in &cycles {
            total = total.add(&g.path_weight(&close(c))?.scale(k));
        }
        if total != self.total_weight() || !total.is_nonnegative() {
            return Err(Error::InvalidWitness(format!("multicycle weight {total}")));
        }
        let d = sccs(g);
        let comp = d.component_of[cycles[0].0[0]];
        if cycles
            .iter()
            .any(|(c, _)| c.iter().any(|&v| d.component_of[v] != comp))
        {
            return Err(Error::InvalidWitness(
                "support spans several components".into(),
            ));
        }
        Ok(())
    }

    /// Picks one cycle with weight `>= (0,0)`, or two cycles `C`, `C′` whose
    /// weights make an angle of at most 180°, from the peeled support.
    pub fn pair_form(&self, g: &GameStructure) -> MulticycleWitness {
        let MulticycleWitness::Flow { cycles, .. } = self else {
            return self.clone();
        };
        let ws: Vec<(&Vec<usize>, Weight2)> = cycles
            .iter()
            .map(|(c, _)| {
                (
                    c,
                    g.path_weight(&close(c))
                        .expect("peeled cycles follow edges"),
                )
            })
            .collect();
        if let Some((c, w)) = ws
            .iter()
            .filter(|(_, w)| w.is_nonnegative())
            .min_by_key(|(c, _)| c.len())
        {
            return MulticycleWitness::SingleCycle {
                cycle: (*c).clone(),
                weight: w.clone(),
            };
        }
        let mut best: Option<(usize, MulticycleWitness)> = None;
        for (c, wc) in &ws {
            for (cp, wcp) in &ws {
                let (x, y) = (-&wc.w1, wc.w2.clone());
                let (xp, yp) = (wcp.w1.clone(), -&wcp.w2);
                if x < BigInt::one()
                    || y < BigInt::one()
                    || xp < BigInt::one()
                    || yp < BigInt::one()
                {
                    continue;
                }
                let det = &xp * &y - &x * &yp;
                if det.is_negative() {
                    continue;
                }
                let (alpha, beta) = if det.is_positive() {
                    (&x * &xp + &y * &yp, &x * &x + &y * &y)
                } else {
                    let gcd = x.gcd(&xp);
                    (&xp / &gcd, &x / &gcd)
                };
                let size = c.len() + cp.len();
                if best.as_ref().is_none_or(|(s, _)| size < *s) {
                    best = Some((
                        size,
                        MulticycleWitness::TwoCycle {
                            c: (*c).clone(),
                            c_prime: (*cp).clone(),
                            w_c: wc.clone(),
                            w_c_prime: wcp.clone(),
                            alpha,
                            beta,
                        },
                    ));
                }
            }
        }
        best.map(|(_, w)| w)
            .expect("a nonnegative cone combination has a one- or two-cycle support")
    }
}

fn is_simple(cycle: &[usize]) -> bool {
    let mut v = cycle.to_vec();
    v.sort_unstable();
    v.windows(2).all(|w| w[0] != w[1])
}

/// `a = x·x′ + y·y′` and `b = x² + y²` for `w(C) = (−x, y)`, `w(C′) = (x′, −y′)`.
pub fn combine_coefficients(wc: &Weight2, wcp: &Weight2) -> Result<(BigInt, BigInt)> {
    let x = -&wc.w1;
    let y = wc.w2.clone();
    let xp = wcp.w1.clone();
    let yp = -&wcp.w2;
    let one = BigInt::one();
    if x < one || y < one || xp < one || yp.is_negative() {
        return Err(Error::Precondition(format!(
            "expected w(C) = (−x, y), w(C′) = (x′, −y′) with x, y, x′ >= 1 and y′ >= 0, got {wc} and {wcp}"
        )));
    }
    if !(&xp * &y - &x * &yp).is_positive() {
        return Err(Error::Precondition(format!(
            "{wc} and {wcp} make an angle of at least 180°"
        )));
    }
    Ok((&x * &xp + &y * &yp, &x * &x + &y * &y))
}

/// `α = 2a·|V|·||E||`, `β = 2b·|V|·||E||`.
pub fn witness_loop_counts(
    wit: &CycleWitness,
    n_vertices: usize,
    max_w: &BigInt,
) -> Result<(BigInt, BigInt)> {
    match wit {
        CycleWitness::TwoCycle(t) => Ok(loop_counts(&t.a, &t.b, n_vertices, max_w)),
        CycleWitness::SimpleGood { .. } => Err(Error::Precondition(
            "loop counts are defined for two-cycle witnesses".into(),
        )),
    }
}

pub fn loop_counts(a: &BigInt, b: &BigInt, n_vertices: usize, max_w: &BigInt) -> (BigInt, BigInt) {
    let k = BigInt::from(2 * n_vertices) * max_w;
    (a * &k, b * &k)
}

/// Edges internal to a component, with the component's vertices renumbered.
struct Component {
    vertices: Vec<usize>,
    edges: Vec<usize>,
    arcs: Vec<(usize, usize)>,
}

fn component(g: &GameStructure, comp: &[usize]) -> Component {
    let local: BTreeMap<usize, usize> = comp.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut edges = Vec::new();
    let mut arcs = Vec::new();
    for (k, e) in g.edges().iter().enumerate() {
        if let (Some(&a), Some(&b)) = (local.get(&e.from), local.get(&e.to)) {
            edges.push(k);
            arcs.push((a, b));
        }
    }
    Component {
        vertices: comp.to_vec(),
        edges,
        arcs,
    }
}

fn weight_row(g: &GameStructure, edges: &[usize], dim1: bool) -> Vec<(usize, Q)> {
    edges
        .iter()
        .enumerate()
        .map(|(j, &e)| {
            let w = &g.edge(e).w;
            (
                j,
                Q::from_integer(if dim1 { w.w1.clone() } else { w.w2.clone() }),
            )
        })
        .collect()
}

fn normalized(c: &Component) -> LinearProgram {
    let mut lp = LinearProgram::circulation(c.vertices.len(), &c.arcs);
    let ones = (0..c.edges.len()).map(|j| (j, Q::one())).collect();
    lp.add(ones, Rel::Eq, Q::one());
    lp
}

/// Scales a rational edge flow to integers and peels it into simple cycles.
pub fn peel_circulation(g: &GameStructure, flow: &[(usize, Q)]) -> Vec<(Vec<usize>, BigInt)> {
    let lcm = flow
        .iter()
        .fold(BigInt::one(), |acc, (_, x)| acc.lcm(x.denom()));
    let mut f: BTreeMap<usize, BigInt> = flow
        .iter()
        .filter(|(_, x)| x.is_positive())
        .map(|(e, x)| (*e, (x * Q::from_integer(lcm.clone())).to_integer()))
        .collect();
    let mut out: Vec<(Vec<usize>, BigInt)> = Vec::new();
    while let Some((&e0, _)) = f.iter().find(|(_, k)| k.is_positive()) {
        let mut walk = vec![g.edge(e0).from];
        let mut used = vec![e0];
        let mut cur = g.edge(e0).to;
        let cycle_edges = loop {
            if let Some(p) = walk.iter().position(|&v| v == cur) {
                break used[p..].to_vec();
            }
            walk.push(cur);
            let e = g
                .out_edges(cur)
                .iter()
                .copied()
                .find(|e| f.get(e).is_some_and(|k| k.is_positive()))
                .expect("positive circulation leaves every vertex it enters");
            used.push(e);
            cur = g.edge(e).to;
        };
        let k = cycle_edges
            .iter()
            .map(|e| f[e].clone())
            .min()
            .expect("nonempty");
        for e in &cycle_edges {
            *f.get_mut(e).expect("present") -= &k;
        }
        let cycle: Vec<usize> = cycle_edges.iter().map(|&e| g.edge(e).from).collect();
        let start = cycle
            .iter()
            .enumerate()
            .min_by_key(|(_, &v)| v)
            .map(|(i, _)| i)
            .expect("nonempty");
        let cycle = crate::graph::rotate(&cycle, start);
        match out.iter_mut().find(|(c, _)| *c == cycle) {
            Some((_, m)) => *m += k,
            None => out.push((cycle, k)),
        }
    }
    out
}

/// A nonzero circulation with total weight exactly `(0,0)`, if any.
pub fn zero_multicycle_exists(g: &GameStructure) -> Option<Vec<(usize, Q)>> {
    let arcs: Vec<(usize, usize)> = g.edges().iter().map(|e| (e.from, e.to)).collect();
    let all: Vec<usize> = (0..g.num_edges()).collect();
    let mut lp = LinearProgram::circulation(g.num_vertices(), &arcs);
    lp.add(
        (0..arcs.len()).map(|j| (j, Q::one())).collect(),
        Rel::Eq,
        Q::one(),
    );
    lp.add(weight_row(g, &all, true), Rel::Eq, Q::zero());
    lp.add(weight_row(g, &all, false), Rel::Eq, Q::zero());
    match lp.solve() {
        LpResult::Optimal { x, .. } => Some(
            x.into_iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .collect(),
        ),
        _ => None,
    }
}

/// Good multicycle reachable from `v0`: a nonzero circulation inside one
/// reachable component with both weight sums nonnegative.
pub fn good_multicycle_exists(g: &GameStructure, v0: usize) -> Option<MulticycleWitness> {
    let sub = reachable_subgraph(g, v0);
    let h = &sub.game;
    let d = sccs(h);
    for (ci, comp) in d.components.iter().enumerate() {
        if !d.is_cyclic(h, ci) {
            continue;
        }
        let c = component(h, comp);
        let mut lp = normalized(&c);
        lp.add(weight_row(h, &c.edges, true), Rel::Ge, Q::zero());
        lp.add(weight_row(h, &c.edges, false), Rel::Ge, Q::zero());
        if let LpResult::Optimal { x, .. } = lp.solve() {
            let flow: Vec<(usize, Q)> = c
                .edges
                .iter()
                .zip(x)
                .filter(|(_, v)| !v.is_zero())
                .map(|(&e, v)| (e, v))
                .collect();
            return Some(flow_witness(h, &sub.to_parent, &flow));
        }
    }
    None
}

fn flow_witness(h: &GameStructure, to_parent: &[usize], flow: &[(usize, Q)]) -> MulticycleWitness {
    let peeled = peel_circulation(h, flow);
    let mut weight = Weight2::zero();
    let mut cycles = Vec::new();
    for (c, k) in peeled {
        let w = h
            .path_weight(&close(&c))
            .expect("peeled cycles follow edges");
        weight = weight.add(&w.scale(&k));
        let mut pc: Vec<usize> = c.iter().map(|&v| to_parent[v]).collect();
        let start = pc
            .iter()
            .enumerate()
            .min_by_key(|(_, &v)| v)
            .map(|(i, _)| i)
            .expect("nonempty");
        pc = crate::graph::rotate(&pc, start);
        cycles.push((pc, k));
    }
    if cycles.len() == 1 && cycles[0].1.is_one() {
        let (cycle, _) = cycles.pop().expect("one");
        return MulticycleWitness::SingleCycle { cycle, weight };
    }
    MulticycleWitness::Flow { cycles, weight }
}

/// Good cycle reachable from `v0`: some reachable component admits a unit
/// circulation with nonnegative energy sum and positive mean-payoff sum.
pub fn good_cycle_exists(g: &GameStructure, v0: usize) -> Option<CycleWitness> {
    let sub = reachable_subgraph(g, v0);
    let h = &sub.game;
    let d = sccs(h);
    for (ci, comp) in d.components.iter().enumerate() {
        if !d.is_cyclic(h, ci) {
            continue;
        }
        let c = component(h, comp);
        let mut lp = normalized(&c);
        lp.add(weight_row(h, &c.edges, true), Rel::Ge, Q::zero());
        lp.maximize(weight_row(h, &c.edges, false));
        let LpResult::Optimal { x, value } = lp.solve() else {
            continue;
        };
        if !value.is_positive() {
            continue;
        }
        let flow: Vec<(usize, Q)> = c
            .edges
            .iter()
            .zip(x)
            .filter(|(_, v)| !v.is_zero())
            .map(|(&e, v)| (e, v))
            .collect();
        let peeled: Vec<Vec<usize>> = peel_circulation(h, &flow)
            .into_iter()
            .map(|(c, _)| c.iter().map(|&v| sub.to_parent[v]).collect())
            .collect();
        return Some(cycle_witness_from_support(g, &peeled));
    }
    None
}

/// Assembles a certificate from simple cycles of one component whose
/// positive combination is good: a good member if there is one (shortest
/// first), otherwise the smallest pair meeting the angle condition.
pub fn cycle_witness_from_support(g: &GameStructure, support: &[Vec<usize>]) -> CycleWitness {
    let ws: Vec<(&Vec<usize>, Weight2)> = support
        .iter()
        .map(|c| {
            (
                c,
                g.path_weight(&close(c))
                    .expect("support cycles follow edges"),
            )
        })
        .collect();
    if let Some((c, w)) = ws
        .iter()
        .filter(|(_, w)| !w.w1.is_negative() && w.w2.is_positive())
        .min_by_key(|(c, _)| c.len())
    {
        return CycleWitness::SimpleGood {
            cycle: (*c).clone(),
            weight: w.clone(),
        };
    }
    let mut best: Option<(
        usize,
        &Vec<usize>,
        &Weight2,
        &Vec<usize>,
        &Weight2,
        BigInt,
        BigInt,
    )> = None;
    for (c, wc) in &ws {
        for (cp, wcp) in &ws {
            if let Ok((a, b)) = combine_coefficients(wc, wcp) {
                let size = c.len() + cp.len();
                if best.as_ref().is_none_or(|t| size < t.0) {
                    best = Some((size, c, wc, cp, wcp, a, b));
                }
            }
        }
    }
    let (_, c, wc, cp, wcp, a, b) =
        best.expect("a good cone combination has a one- or two-cycle support");
    let (alpha, beta) = loop_counts(&a, &b, g.num_vertices(), g.max_abs_weight());
    let (c, cp, p1, p2) = connect(g, c, cp);
    CycleWitness::TwoCycle(TwoCycle {
        c,
        c_prime: cp,
        w_c: wc.clone(),
        w_c_prime: wcp.clone(),
        a,
        b,
        alpha,
        beta,
        path_c_to_c_prime: p1,
        path_c_prime_to_c: p2,
    })
}

/// Rotates both cycles so that the round trip between their start vertices
/// is as short as possible; returns the rotated cycles and both connectors.
fn connect(
    g: &GameStructure,
    c: &[usize],
    cp: &[usize],
) -> (Vec<usize>, Vec<usize>, Vec<usize>, Vec<usize>) {
    let mut best: Option<(usize, usize, usize, Vec<usize>, Vec<usize>)> = None;
    for i in 0..c.len() {
        for j in 0..cp.len() {
            let (Some(p1), Some(p2)) =
                (shortest_path(g, c[i], cp[j]), shortest_path(g, cp[j], c[i]))
            else {
                continue;
            };
            let len = p1.len() + p2.len();
            if best.as_ref().is_none_or(|b| len < b.0) {
                best = Some((len, i, j, p1, p2));
            }
        }
    }
    let (_, i, j, p1, p2) = best.expect("cycles of one component are mutually reachable");
    (
        crate::graph::rotate(c, i),
        crate::graph::rotate(cp, j),
        p1,
        p2,
    )
}
