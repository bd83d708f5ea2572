//! Play engine: two strategies against each other, energy and average
//! bookkeeping, lasso detection and exact lasso verdicts.

use std::collections::HashMap;
use std::io::BufRead;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::game::{GameStructure, ObjectiveSpec, Player, Weight2};
use crate::graph::MooreStrategy;
use crate::one_player::{ScheduleCursor, ScheduleStrategy};
use crate::two_player::InfiniteStrategyPlan;

pub const ROUTE_SIMULATION: &str = "simulation";

/// Default sampling stride of the running averages.
pub const DEFAULT_STRIDE: usize = 64;

/// At most this many violation indices are listed in a report.
pub const MAX_LISTED_VIOLATIONS: usize = 1000;

/// A strategy the simulator can query.
#[derive(Clone, Debug)]
pub enum StrategyHandle {
    Moore(MooreStrategy),
    Schedule(ScheduleStrategy),
    InfinitePlan(Box<InfiniteStrategyPlan>),
    /// Reads vertex ids from standard input.
    Interactive,
    /// Uniform choice among successors.
    UniformRandom(u64),
}

impl StrategyHandle {
    fn is_finite_memory(&self) -> bool {
        matches!(self, StrategyHandle::Moore(_))
    }
}

enum Runner {
    Moore {
        s: MooreStrategy,
        m: usize,
    },
    Schedule {
        cursor: ScheduleCursor,
        pending: Option<usize>,
    },
    Plan(Box<InfiniteStrategyPlan>),
    Interactive,
    Random(ChaCha8Rng),
}

impl Runner {
    fn new(h: StrategyHandle, g: &GameStructure, v0: usize) -> Result<Runner> {
        Ok(match h {
            StrategyHandle::Moore(s) => {
                s.validate(g)?;
                let m = s.initial;
                Runner::Moore { s, m }
            }
            StrategyHandle::Schedule(s) => {
                if s.access.first() != Some(&v0) {
                    return Err(Error::InvalidStrategy(
                        "schedule does not start at the initial vertex".into(),
                    ));
                }
                Runner::Schedule {
                    cursor: s.cursor(),
                    pending: None,
                }
            }
            StrategyHandle::InfinitePlan(mut p) => {
                p.reset()?;
                if p.current() != v0 {
                    return Err(Error::InvalidStrategy(
                        "plan does not start at the initial vertex".into(),
                    ));
                }
                Runner::Plan(p)
            }
            StrategyHandle::Interactive => Runner::Interactive,
            StrategyHandle::UniformRandom(seed) => Runner::Random(ChaCha8Rng::seed_from_u64(seed)),
        })
    }

    fn memory(&self) -> usize {
        match self {
            Runner::Moore { m, .. } => *m,
            _ => 0,
        }
    }

    fn propose(&mut self, g: &GameStructure, cur: usize) -> Result<usize> {
        let undefined = || Error::InvalidStrategy(format!("no move defined at `{}`", g.id(cur)));
        match self {
            Runner::Moore { s, m } => s.next_move(*m, cur).ok_or_else(undefined),
            Runner::Schedule { cursor, pending } => {
                let v = match *pending {
                    Some(v) => v,
                    None => cursor.next().ok_or_else(undefined)?,
                };
                *pending = Some(v);
                Ok(v)
            }
            Runner::Plan(p) => p.propose()?.ok_or_else(undefined),
            Runner::Interactive => {
                let succ: Vec<&str> = g.successors(cur).map(|v| g.id(v)).collect();
                eprintln!("at `{}`, choose one of {:?}:", g.id(cur), succ);
                let mut line = String::new();
                std::io::stdin().lock().read_line(&mut line)?;
                g.vertex(line.trim())
                    .ok_or_else(|| Error::UnknownVertex(line.trim().to_string()))
            }
            Runner::Random(rng) => {
                let succ: Vec<usize> = g.successors(cur).collect();
                Ok(succ[rng.gen_range(0..succ.len())])
            }
        }
    }

    fn observe(&mut self, g: &GameStructure, to: usize) -> Result<()> {
        match self {
            Runner::Moore { s, m } => *m = s.step(*m, to),
            Runner::Schedule { cursor, pending } => {
                let expected = match pending.take() {
                    Some(v) => Some(v),
                    None => cursor.next(),
                };
                if expected != Some(to) {
                    return Err(Error::InvalidStrategy(format!(
                        "the schedule follows a fixed play and cannot answer a move to `{}`",
                        g.id(to)
                    )));
                }
            }
            Runner::Plan(p) => p.observe(to)?,
            Runner::Interactive | Runner::Random(_) => {}
        }
        Ok(())
    }
}

/// Eventually periodic part of a play between two Moore machines.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lasso {
    pub prefix_len: usize,
    pub cycle_len: usize,
    pub cycle_weight: Weight2,
    /// Exact cycle averages on both dimensions.
    pub average: (BigRational, BigRational),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceReport {
    pub route: &'static str,
    pub steps: usize,
    pub credit: BigInt,
    pub vertices: Vec<usize>,
    /// `c0 + w1(ρ[0,k])` for `k = 0..=steps`.
    pub energy: Vec<BigInt>,
    /// `(k, w2(ρ[0,k])/k)` at every multiple of the stride and at the end.
    pub averages: Vec<(usize, BigRational)>,
    pub lasso: Option<Lasso>,
    pub min_energy: BigInt,
    /// First violation indices (at most [`MAX_LISTED_VIOLATIONS`]).
    pub violations: Vec<usize>,
    pub violation_count: usize,
    pub first_violation: Option<usize>,
}

pub fn simulate(
    g: &GameStructure,
    v0: usize,
    s1: StrategyHandle,
    s2: StrategyHandle,
    steps: usize,
    c0: &BigInt,
) -> Result<TraceReport> {
    simulate_with_stride(g, v0, s1, s2, steps, c0, DEFAULT_STRIDE)
}

pub fn simulate_with_stride(
    g: &GameStructure,
    v0: usize,
    s1: StrategyHandle,
    s2: StrategyHandle,
    steps: usize,
    c0: &BigInt,
    stride: usize,
) -> Result<TraceReport> {
    if steps == 0 {
        return Err(Error::Precondition(
            "at least one step must be simulated".into(),
        ));
    }
    if stride == 0 {
        return Err(Error::Precondition(
            "the sampling stride must be positive".into(),
        ));
    }
    let track_lasso = s1.is_finite_memory() && s2.is_finite_memory();
    let mut r1 = Runner::new(s1, g, v0)?;
    let mut r2 = Runner::new(s2, g, v0)?;
    let mut vertices = Vec::with_capacity(steps + 1);
    let mut energy = Vec::with_capacity(steps + 1);
    let mut averages = Vec::new();
    let mut seen: HashMap<(usize, usize, usize), usize> = HashMap::new();
    let mut lasso_at: Option<(usize, usize)> = None;
    let mut violations = Vec::new();
    let mut violation_count = 0;
    let mut cur = v0;
    let mut e1 = c0.clone();
    let mut w2 = BigInt::zero();
    let mut min_energy = c0.clone();
    let mut w_prefix: Vec<Weight2> = vec![Weight2::zero()];
    vertices.push(v0);
    energy.push(e1.clone());
    if e1.is_negative() {
        violations.push(0);
        violation_count += 1;
    }
    for k in 0..steps {
        if track_lasso && lasso_at.is_none() {
            let key = (cur, r1.memory(), r2.memory());
            if let Some(&first) = seen.get(&key) {
                lasso_at = Some((first, k));
            } else {
                seen.insert(key, k);
            }
        }
        let to = match g.owner(cur) {
            Player::P1 => r1.propose(g, cur)?,
            Player::P2 => r2.propose(g, cur)?,
        };
        let e = g.edge_between(cur, to).ok_or_else(|| Error::IllegalMove {
            from: g.id(cur).to_string(),
            to: g.id(to).to_string(),
            history_len: k,
        })?;
        r1.observe(g, to)?;
        r2.observe(g, to)?;
        let w = &g.edge(e).w;
        e1 += &w.w1;
        w2 += &w.w2;
        if track_lasso && lasso_at.is_none() {
            let last = w_prefix.last().expect("nonempty").add(w);
            w_prefix.push(last);
        }
        cur = to;
        vertices.push(cur);
        if e1 < min_energy {
            min_energy = e1.clone();
        }
        if e1.is_negative() {
            violation_count += 1;
            if violations.len() < MAX_LISTED_VIOLATIONS {
                violations.push(k + 1);
            }
        }
        energy.push(e1.clone());
        if (k + 1) % stride == 0 || k + 1 == steps {
            averages.push((k + 1, BigRational::new(w2.clone(), BigInt::from(k + 1))));
        }
    }
    let lasso = lasso_at.map(|(first, end)| {
        let cw = Weight2 {
            w1: &w_prefix[end].w1 - &w_prefix[first].w1,
            w2: &w_prefix[end].w2 - &w_prefix[first].w2,
        };
        let len = BigInt::from(end - first);
        Lasso {
            prefix_len: first,
            cycle_len: end - first,
            average: (
                BigRational::new(cw.w1.clone(), len.clone()),
                BigRational::new(cw.w2.clone(), len),
            ),
            cycle_weight: cw,
        }
    });
    let first_violation = violations.first().copied();
    Ok(TraceReport {
        route: ROUTE_SIMULATION,
        steps,
        credit: c0.clone(),
        vertices,
        energy,
        averages,
        lasso,
        min_energy,
        violations,
        violation_count,
        first_violation,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LassoVerdict {
    Satisfied,
    Violated,
}

/// Exact verdict for the eventually periodic play of the report.
///
/// The energy part holds iff no prefix dropped below zero and the cycle does
/// not lose energy; the mean-payoff part compares the cycle average with the
/// threshold (inf and sup coincide on such plays).
pub fn check_lasso_objective(report: &TraceReport, spec: &ObjectiveSpec) -> Result<LassoVerdict> {
    let l = report.lasso.as_ref().ok_or(Error::NoLasso)?;
    let energy_ok = report.violation_count == 0 && !l.cycle_weight.w1.is_negative();
    Ok(if energy_ok && spec.accepts(&l.average.1) {
        LassoVerdict::Satisfied
    } else {
        LassoVerdict::Violated
    })
}
