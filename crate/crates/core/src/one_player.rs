//! Games where player 1 owns every vertex.

use std::collections::VecDeque;
use std::rc::Rc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::cycles::{good_cycle_exists, good_multicycle_exists, CycleWitness, MulticycleWitness};
use crate::error::{Error, Result};
use crate::game::{
    normalize_threshold, Answer, Certificate, Dim, GameStructure, ObjectiveSpec, PlayPrefix,
    Player, Verdict,
};
use crate::graph::{close, rotate, shortest_path, MooreStrategy};

pub const ROUTE_ONE_PLAYER: &str = "one-player-lp";

/// Decides a one-player game: good cycle for strict thresholds, good
/// multicycle for non-strict ones. Inf and sup give the same answer.
pub fn solve_one_player(g: &GameStructure, v0: usize, spec: &ObjectiveSpec) -> Result<Verdict> {
    if let Some(v) = (0..g.num_vertices()).find(|&v| g.owner(v) == Player::P2) {
        return Err(Error::Precondition(format!(
            "vertex `{}` is owned by player 2",
            g.id(v)
        )));
    }
    let (h, spec) = if spec.threshold.is_zero() {
        (g.clone(), spec.clone())
    } else {
        normalize_threshold(g, spec, Dim::Two)?
    };
    if spec.is_strict() {
        Ok(match good_cycle_exists(&h, v0) {
            Some(w) => Verdict {
                answer: Answer::Yes,
                initial_credit: Some(strict_credit(&h)),
                certificate: Certificate::Cycle(w),
                route: ROUTE_ONE_PLAYER,
            },
            None => no(),
        })
    } else {
        Ok(match good_multicycle_exists(&h, v0) {
            Some(w) => {
                let sched = synthesize_nonstrict(&h, v0, &w)?;
                Verdict {
                    answer: Answer::Yes,
                    initial_credit: Some(sched.initial_credit.clone()),
                    certificate: Certificate::Multicycle(w),
                    route: ROUTE_ONE_PLAYER,
                }
            }
            None => no(),
        })
    }
}

fn no() -> Verdict {
    Verdict {
        answer: Answer::No,
        initial_credit: None,
        certificate: Certificate::None,
        route: ROUTE_ONE_PLAYER,
    }
}

/// `(|V| − 1)·||E||`
pub fn strict_credit(g: &GameStructure) -> BigInt {
    BigInt::from(g.num_vertices().saturating_sub(1)) * g.max_abs_weight()
}

/// Prefix sums of `w1` along a closed walk or path.
fn energy_prefix(g: &GameStructure, walk: &[usize]) -> Vec<BigInt> {
    let mut acc = BigInt::zero();
    let mut out = vec![acc.clone()];
    for w in walk.windows(2) {
        let e = g.edge_between(w[0], w[1]).expect("walk follows edges");
        acc += &g.edge(e).w.w1;
        out.push(acc.clone());
    }
    out
}

/// Smallest credit keeping every prefix of `walk` nonnegative on dimension 1.
pub fn path_credit(g: &GameStructure, walk: &[usize]) -> BigInt {
    let m = energy_prefix(g, walk).into_iter().min().expect("nonempty");
    if m.is_negative() {
        -m
    } else {
        BigInt::zero()
    }
}

/// Positions `r` such that, starting the open cycle at `r`, every prefix of
/// one loop stays above `min(0, w1(cycle))`.
fn valid_rotations(g: &GameStructure, cycle: &[usize]) -> Vec<usize> {
    let l = cycle.len();
    let mut twice = cycle.to_vec();
    twice.extend_from_slice(cycle);
    twice.push(cycle[0]);
    let f = energy_prefix(g, &twice);
    let total = &f[l];
    let floor = if total.is_negative() {
        total.clone()
    } else {
        BigInt::zero()
    };
    (0..l)
        .filter(|&r| (0..=l).all(|j| &f[r + j] - &f[r] >= floor))
        .collect()
}

fn lasso_strategy(g: &GameStructure, seq: Vec<usize>, loop_back: usize) -> MooreStrategy {
    let n = g.num_vertices();
    let len = seq.len();
    let succ = |k: usize| if k + 1 < len { k + 1 } else { loop_back };
    let mut update = Vec::with_capacity(len);
    let mut next = Vec::with_capacity(len);
    for k in 0..len {
        update.push(vec![succ(k); n]);
        let row = (0..n)
            .map(|v| {
                if g.owner(v) != Player::P1 {
                    None
                } else if v == seq[k] {
                    Some(seq[succ(k)])
                } else {
                    g.successors(v).next()
                }
            })
            .collect();
        next.push(row);
    }
    MooreStrategy {
        player: Player::P1,
        initial: 0,
        update,
        next,
    }
}

/// Strategy reaching the witness cycle at its lowest-energy vertex and looping
/// there forever, with the credit `(|V| − 1)·||E||`.
pub fn synthesize_strict(
    g: &GameStructure,
    v0: usize,
    wit: &CycleWitness,
) -> Result<(MooreStrategy, BigInt)> {
    wit.check(g)?;
    let c0 = strict_credit(g);
    match wit {
        CycleWitness::SimpleGood { cycle, .. } => Ok((memoryless_to_cycle(g, v0, cycle)?, c0)),
        CycleWitness::TwoCycle(t) => {
            let walk = t.composite();
            let open = &walk[..walk.len() - 1];
            let r = valid_rotations(g, open).into_iter().next().ok_or_else(|| {
                Error::InvalidWitness("composite cycle has negative energy".into())
            })?;
            let cyc = rotate(open, r);
            let access = shortest_path(g, v0, cyc[0])
                .ok_or_else(|| Error::InvalidWitness("witness cycle is unreachable".into()))?;
            let loop_back = access.len() - 1;
            let mut seq = access;
            seq.extend_from_slice(&cyc[1..]);
            Ok((lasso_strategy(g, seq, loop_back), c0))
        }
    }
}

/// Memoryless: follow the cycle on its vertices, elsewhere a shortest path to it.
fn memoryless_to_cycle(g: &GameStructure, v0: usize, cycle: &[usize]) -> Result<MooreStrategy> {
    let n = g.num_vertices();
    let r = valid_rotations(g, cycle)[0];
    let cycle = rotate(cycle, r);
    let mut choice: Vec<Option<usize>> = (0..n).map(|v| g.successors(v).next()).collect();
    let mut dist = vec![usize::MAX; n];
    let mut queue = VecDeque::new();
    for (i, &v) in cycle.iter().enumerate() {
        choice[v] = Some(cycle[(i + 1) % cycle.len()]);
        dist[v] = 0;
        queue.push_back(v);
    }
    let mut preds = vec![Vec::new(); n];
    for e in g.edges() {
        preds[e.to].push(e.from);
    }
    while let Some(u) = queue.pop_front() {
        for &p in &preds[u] {
            if dist[p] == usize::MAX {
                dist[p] = dist[u] + 1;
                choice[p] = Some(u);
                queue.push_back(p);
            }
        }
    }
    if dist[v0] == usize::MAX {
        return Err(Error::InvalidWitness("witness cycle is unreachable".into()));
    }
    Ok(MooreStrategy::memoryless(Player::P1, choice))
}

/// Infinite-memory strategy looping two cycles with round-dependent counts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScheduleStrategy {
    /// Path from `v0` to the first cycle entered.
    pub access: Vec<usize>,
    pub kind: ScheduleKind,
    pub initial_credit: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ScheduleKind {
    /// Loop one closed walk forever (open form, starting at the end of `access`).
    Periodic { cycle: Vec<usize> },
    /// Round `Z`: `Z·β + γ` loops of `C′`, path to `C`, `Z·α` loops of `C`, path back.
    Rounds {
        c: Vec<usize>,
        c_prime: Vec<usize>,
        to_c: Vec<usize>,
        to_c_prime: Vec<usize>,
        alpha: u64,
        beta: u64,
        gamma: u64,
    },
}

impl ScheduleStrategy {
    pub fn cursor(&self) -> ScheduleCursor {
        let mut buf: VecDeque<usize> = self.access.iter().copied().collect();
        buf.pop_front();
        ScheduleCursor {
            s: Rc::new(self.clone()),
            round: 0,
            phase: Phase::Access,
            left: 0,
            buf,
            current: self.access[0],
        }
    }

    pub fn is_periodic(&self) -> bool {
        matches!(self.kind, ScheduleKind::Periodic { .. })
    }

    /// Lower bound on the running dimension-2 average at any step of round
    /// `z >= 2`: `−2·||E||·S/(z − 1)`, where `S` collects the access, padding,
    /// connector and per-round `C′` lengths. It tends to 0.
    pub fn average_floor(&self, g: &GameStructure, z: u64) -> Option<BigRational> {
        let ScheduleKind::Rounds {
            c,
            c_prime,
            to_c,
            to_c_prime,
            beta,
            gamma,
            ..
        } = &self.kind
        else {
            return None;
        };
        if z < 2 {
            return None;
        }
        let s = self.access.len()
            + (*gamma as usize) * c_prime.len()
            + to_c.len()
            + to_c_prime.len()
            + (*beta as usize) * c_prime.len()
            + c.len();
        let num = -BigInt::from(2 * s) * g.max_abs_weight();
        Some(BigRational::new(num, BigInt::from(z - 1)))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Phase {
    Access,
    LoopCPrime,
    ToC,
    LoopC,
    ToCPrime,
    Periodic,
}

/// Single-consumer iteration state of a schedule.
#[derive(Clone, Debug)]
pub struct ScheduleCursor {
    s: Rc<ScheduleStrategy>,
    round: u64,
    phase: Phase,
    left: u64,
    buf: VecDeque<usize>,
    current: usize,
}

impl ScheduleCursor {
    /// Current round (0 while on the access path).
    pub fn round(&self) -> u64 {
        self.round
    }

    pub fn current(&self) -> usize {
        self.current
    }

    fn refill(&mut self) {
        let s = Rc::clone(&self.s);
        while self.buf.is_empty() {
            match (&s.kind, self.phase) {
                (ScheduleKind::Periodic { cycle }, _) => {
                    self.phase = Phase::Periodic;
                    self.buf.extend(cycle[1..].iter().copied());
                    self.buf.push_back(cycle[0]);
                }
                (ScheduleKind::Rounds { beta, gamma, .. }, Phase::Access | Phase::ToCPrime) => {
                    self.round += 1;
                    self.phase = Phase::LoopCPrime;
                    self.left = self.round * beta + gamma;
                }
                (ScheduleKind::Rounds { c_prime, .. }, Phase::LoopCPrime) => {
                    if self.left == 0 {
                        self.phase = Phase::ToC;
                    } else {
                        self.left -= 1;
                        self.buf.extend(c_prime[1..].iter().copied());
                        self.buf.push_back(c_prime[0]);
                    }
                }
                (ScheduleKind::Rounds { to_c, alpha, .. }, Phase::ToC) => {
                    self.buf.extend(to_c[1..].iter().copied());
                    self.phase = Phase::LoopC;
                    self.left = self.round * alpha;
                }
                (ScheduleKind::Rounds { c, to_c_prime, .. }, Phase::LoopC) => {
                    if self.left == 0 {
                        self.buf.extend(to_c_prime[1..].iter().copied());
                        self.phase = Phase::ToCPrime;
                    } else {
                        self.left -= 1;
                        self.buf.extend(c[1..].iter().copied());
                        self.buf.push_back(c[0]);
                    }
                }
                (ScheduleKind::Rounds { .. }, Phase::Periodic) => unreachable!(),
            }
        }
    }
}

impl Iterator for ScheduleCursor {
    type Item = usize;

    /// The next vertex of the unique consistent play.
    fn next(&mut self) -> Option<usize> {
        self.refill();
        let v = self.buf.pop_front()?;
        self.current = v;
        Some(v)
    }
}

fn to_u64(x: &BigInt, what: &str) -> Result<u64> {
    x.to_u64()
        .ok_or_else(|| Error::Overflow(format!("{what} = {x} does not fit in 64 bits")))
}

/// Round schedule for a good multicycle witness.
pub fn synthesize_nonstrict(
    g: &GameStructure,
    v0: usize,
    wit: &MulticycleWitness,
) -> Result<ScheduleStrategy> {
    wit.check(g)?;
    match wit.pair_form(g) {
        MulticycleWitness::SingleCycle { cycle, .. } => {
            let r = valid_rotations(g, &cycle)[0];
            periodic(g, v0, rotate(&cycle, r))
        }
        MulticycleWitness::TwoCycle {
            c,
            c_prime,
            w_c,
            w_c_prime,
            alpha,
            beta,
        } => {
            let rc = valid_rotations(g, &c);
            let rcp = valid_rotations(g, &c_prime);
            let mut best: Option<(usize, usize, usize, Vec<usize>, Vec<usize>)> = None;
            for &j in &rcp {
                for &i in &rc {
                    let (Some(p1), Some(p2)) = (
                        shortest_path(g, c_prime[j], c[i]),
                        shortest_path(g, c[i], c_prime[j]),
                    ) else {
                        continue;
                    };
                    let len = p1.len() + p2.len();
                    if best.as_ref().is_none_or(|b| len < b.0) {
                        best = Some((len, i, j, p1, p2));
                    }
                }
            }
            let (_, i, j, to_c, to_c_prime) = best
                .ok_or_else(|| Error::InvalidWitness("cycles are not mutually reachable".into()))?;
            let c = rotate(&c, i);
            let c_prime = rotate(&c_prime, j);
            let w1 = g.path_weight(&to_c)?;
            let w2 = g.path_weight(&to_c_prime)?;
            let round = w_c
                .scale(&alpha)
                .add(&w_c_prime.scale(&beta))
                .add(&w1)
                .add(&w2);
            if round.is_nonnegative() {
                let mut walk = vec![c_prime[0]];
                for _ in 0..to_u64(&beta, "beta")? {
                    walk.extend(c_prime[1..].iter().copied());
                    walk.push(c_prime[0]);
                }
                walk.extend(to_c[1..].iter().copied());
                for _ in 0..to_u64(&alpha, "alpha")? {
                    walk.extend(c[1..].iter().copied());
                    walk.push(c[0]);
                }
                walk.extend(to_c_prime[1..].iter().copied());
                walk.pop();
                return periodic(g, v0, walk);
            }
            let x_prime = w_c_prime.w1.clone();
            let d1 = -energy_prefix(g, &to_c).into_iter().min().expect("nonempty");
            let d2 = -(&w1.w1
                + energy_prefix(g, &to_c_prime)
                    .into_iter()
                    .min()
                    .expect("nonempty"));
            let deficit = [BigInt::zero(), d1, d2]
                .into_iter()
                .max()
                .expect("nonempty");
            let gamma = (&deficit + &x_prime - 1i32) / &x_prime;
            let access = shortest_path(g, v0, c_prime[0])
                .ok_or_else(|| Error::InvalidWitness("multicycle is unreachable".into()))?;
            let initial_credit = path_credit(g, &access);
            Ok(ScheduleStrategy {
                access,
                kind: ScheduleKind::Rounds {
                    c,
                    c_prime,
                    to_c,
                    to_c_prime,
                    alpha: to_u64(&alpha, "alpha")?,
                    beta: to_u64(&beta, "beta")?,
                    gamma: to_u64(&gamma, "gamma")?,
                },
                initial_credit,
            })
        }
        MulticycleWitness::Flow { .. } => unreachable!("pair_form never returns a flow"),
    }
}

fn periodic(g: &GameStructure, v0: usize, cycle: Vec<usize>) -> Result<ScheduleStrategy> {
    let access = shortest_path(g, v0, cycle[0])
        .ok_or_else(|| Error::InvalidWitness("multicycle is unreachable".into()))?;
    let mut lasso = access.clone();
    lasso.extend(cycle[1..].iter().copied());
    lasso.push(cycle[0]);
    let initial_credit = path_credit(g, &lasso);
    Ok(ScheduleStrategy {
        access,
        kind: ScheduleKind::Periodic { cycle },
        initial_credit,
    })
}

/// Positions `k <= horizon` whose energy level is not undercut at any later
/// position up to `horizon`.
pub fn local_minima(p: &PlayPrefix, horizon: usize) -> Result<Vec<usize>> {
    if horizon > p.len() {
        return Err(Error::IndexOutOfRange {
            index: horizon,
            len: p.len(),
        });
    }
    let mut out = Vec::new();
    let mut suffix_min: Option<BigInt> = None;
    for k in (0..=horizon).rev() {
        let e = p.energy_level(Dim::One, k)?;
        if suffix_min.as_ref().is_none_or(|m| e <= m) {
            out.push(k);
        }
        suffix_min = Some(match suffix_min {
            Some(m) if m < *e => m,
            _ => e.clone(),
        });
    }
    out.reverse();
    Ok(out)
}

/// Closed walk for an open cycle; re-exported for convenience.
pub fn closed(cycle: &[usize]) -> Vec<usize> {
    close(cycle)
}
