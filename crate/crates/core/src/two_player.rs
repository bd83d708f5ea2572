//! Two-player games: memoryless-antagonist enumeration, the gadget route for
//! strict thresholds, winning regions and the infinite-memory strategy for
//! non-strict thresholds.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::game::{
    normalize_threshold, Answer, Certificate, Cmp, Dim, GameStructure, MpKind, ObjectiveSpec,
    Player, Verdict,
};
use crate::graph::{
    enumerate_memoryless, induced_subgraph, product, MooreStrategy, ENUMERATION_GUARD,
};
use crate::multi_energy::{
    credit_strategy, decide, default_cap, lexicographic_order, memoryless_winner,
    minimal_credit_energy, minimal_credit_with_caps, CreditAssignment, MultiEnergyGame,
};
use crate::one_player::solve_one_player;
use crate::reduction::{gadget_order, pull_back_strategy, to_energy2, to_energy4, GadgetMap};

pub const ROUTE_ENUMERATION: &str = "memoryless-enumeration";
pub const ROUTE_REDUCTION: &str = "gadget-reduction";

/// Checks every memoryless strategy of player 2 against the one-player
/// solver on the product. All-player-1 games are handed to the one-player
/// solver directly.
pub fn solve_two_player(g: &GameStructure, v0: usize, spec: &ObjectiveSpec) -> Result<Verdict> {
    solve_two_player_bounded(g, v0, spec, ENUMERATION_GUARD)
}

pub fn solve_two_player_bounded(
    g: &GameStructure,
    v0: usize,
    spec: &ObjectiveSpec,
    bound: usize,
) -> Result<Verdict> {
    if g.is_one_player() {
        return solve_one_player(g, v0, spec);
    }
    for s2 in enumerate_memoryless(g, Player::P2, bound)? {
        let p = product(g, &s2, v0);
        if solve_one_player(&p.game, 0, spec)?.answer == Answer::No {
            return Ok(Verdict {
                answer: Answer::No,
                initial_credit: None,
                certificate: Certificate::Spoiling(s2),
                route: ROUTE_ENUMERATION,
            });
        }
    }
    Ok(Verdict {
        answer: Answer::Yes,
        initial_credit: None,
        certificate: Certificate::None,
        route: ROUTE_ENUMERATION,
    })
}

/// The memoryless strategy of player 2 that defeats every initial credit, if
/// player 1 loses.
pub fn spoiling_strategy(
    g: &GameStructure,
    v0: usize,
    spec: &ObjectiveSpec,
) -> Result<Option<MooreStrategy>> {
    let v = solve_two_player(g, v0, spec)?;
    Ok(match (v.answer, v.certificate) {
        (Answer::No, Certificate::Spoiling(s)) => Some(s),
        (Answer::No, _) => Some(MooreStrategy::empty(g, Player::P2)),
        _ => None,
    })
}

/// Does `s2` spoil every initial credit? Checked on the product.
pub fn is_spoiling(
    g: &GameStructure,
    v0: usize,
    spec: &ObjectiveSpec,
    s2: &MooreStrategy,
) -> Result<bool> {
    s2.validate(g)?;
    let p = product(g, s2, v0);
    Ok(solve_one_player(&p.game, 0, spec)?.answer == Answer::No)
}

fn strict_gadget(
    g: &GameStructure,
    spec: &ObjectiveSpec,
) -> Result<(GameStructure, MultiEnergyGame, GadgetMap)> {
    if !spec.is_strict() {
        return Err(Error::Precondition(
            "the gadget route needs a strict threshold".into(),
        ));
    }
    let (h, _) = normalize_threshold(g, spec, Dim::Two)?;
    let (meg, map) = to_energy4(&h)?;
    Ok((h, meg, map))
}

/// Strict thresholds through the 4-dimensional energy game. `Unknown` when
/// the capped fixpoint neither wins nor yields a checked spoiler.
pub fn solve_strict_pseudo_poly(
    g: &GameStructure,
    v0: usize,
    spec: &ObjectiveSpec,
    cap: Option<i64>,
) -> Result<Verdict> {
    let (_, meg, map) = strict_gadget(g, spec)?;
    let cap = cap.unwrap_or_else(|| default_cap(&meg));
    let d = decide(&meg, v0, cap)?;
    Ok(match d.answer {
        Answer::Yes => Verdict {
            answer: Answer::Yes,
            initial_credit: d.credits.best_by_first(v0).map(|c| BigInt::from(c[0])),
            certificate: Certificate::None,
            route: ROUTE_REDUCTION,
        },
        Answer::No => {
            let choice = d.spoiler.expect("No comes with a spoiler");
            // Player-2 choices lead into gadgets; read them back as original edges.
            let back = choice[..map.num_original]
                .iter()
                .map(|c| c.and_then(|r| map.gadget_of(r)).map(|k| g.edge(k).to))
                .collect();
            let s2 = MooreStrategy::memoryless(Player::P2, back);
            Verdict {
                answer: Answer::No,
                initial_credit: None,
                certificate: Certificate::Spoiling(s2),
                route: ROUTE_REDUCTION,
            }
        }
        Answer::Unknown => Verdict {
            answer: Answer::Unknown,
            initial_credit: None,
            certificate: Certificate::None,
            route: ROUTE_REDUCTION,
        },
    })
}

/// Finite-memory winning strategy of player 1 for a strict threshold.
#[derive(Clone, Debug)]
pub struct StrictSynthesis {
    pub strategy: MooreStrategy,
    /// Initial credit on the energy dimension.
    pub credit: BigInt,
    /// Full credit vector of the gadget game.
    pub gadget_credit: Vec<i64>,
    pub gadget_memory: usize,
}

pub fn synthesize_strict_two_player(
    g: &GameStructure,
    v0: usize,
    spec: &ObjectiveSpec,
    cap: Option<i64>,
) -> Result<StrictSynthesis> {
    let (h, meg, map) = strict_gadget(g, spec)?;
    let cap = cap.unwrap_or_else(|| default_cap(&meg));
    let d = decide(&meg, v0, cap)?;
    if d.answer != Answer::Yes {
        return Err(Error::Precondition(format!(
            "player 1 is not shown winning at cap {}",
            d.cap
        )));
    }
    let mut credits = d.credits;
    let mut at = d.cap;
    while !credits.is_winning(v0) {
        if at >= cap {
            return Err(Error::CapSaturated(at as u64));
        }
        at = at.saturating_mul(4).min(cap);
        credits = minimal_credit_energy(&meg, at);
    }
    let c0 = credits.best_by_first(v0).expect("winning").clone();
    let cs = credit_strategy(&meg, &credits, v0, &c0, &gadget_order(&meg, &map))?;
    let strategy = pull_back_strategy(&cs.machine, &h, &map, v0)?;
    Ok(StrictSynthesis {
        strategy,
        credit: BigInt::from(c0[0]),
        gadget_credit: c0,
        gadget_memory: cs.machine.memory_size(),
    })
}

/// Vertices from which player 1 wins, sorted.
pub fn winning_region(g: &GameStructure, spec: &ObjectiveSpec) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for v in 0..g.num_vertices() {
        if solve_two_player(&g.with_initial(v), v, spec)?.answer == Answer::Yes {
            out.push(v);
        }
    }
    Ok(out)
}

/// One level `i` of the plan: objective `MP > −1/2^i` on the winning region.
#[derive(Clone, Debug)]
pub struct PlanLevel {
    pub level: u32,
    /// `c_i(v)` per vertex of the restricted game.
    pub credits: Vec<i64>,
    /// Caps of the energy game that succeeded; empty when every vertex had
    /// a memoryless winner and no fixpoint was run.
    pub caps: Vec<i64>,
    stage: u32,
    meg: MultiEnergyGame,
    assignment: Option<CreditAssignment>,
    strategies: HashMap<usize, MooreStrategy>,
}

impl PlanLevel {
    /// Memory sizes `M_i^v` of the strategies built so far, by start vertex.
    pub fn memory_sizes(&self) -> Vec<(usize, usize)> {
        let mut v: Vec<(usize, usize)> = self
            .strategies
            .iter()
            .map(|(v, m)| (*v, m.memory_size()))
            .collect();
        v.sort_unstable();
        v
    }
}

/// Segment switch record.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SwitchRecord {
    /// Level that was left.
    pub level: u32,
    /// Play position of the switch.
    pub step: u64,
    /// Vertex (in the original game) where the next level starts.
    pub vertex: usize,
    /// Credit slack `Δ` for the next level.
    pub delta: i64,
}

/// Infinite-memory strategy for a non-strict threshold: at level `i` play a
/// finite-memory strategy for `MP > −1/2^i` until the dimension-2 weight of
/// the segment clears the switching bound, then move to level `i + 1`.
#[derive(Clone, Debug)]
pub struct InfiniteStrategyPlan {
    /// Game restricted to the winning region, weights unchanged.
    pub game: GameStructure,
    /// Original index of each restricted vertex.
    pub win: Vec<usize>,
    pub v0: usize,
    pub kappa: u32,
    pub gamma: i64,
    pub d0: i64,
    pub max_cap: Option<i64>,
    /// Highest level whose energy weights stay well inside `i64`; the play
    /// never switches past it.
    pub top_level: u32,
    levels: Vec<PlanLevel>,
    max_w: BigInt,
    run: RunState,
}

#[derive(Clone, Debug)]
struct RunState {
    level: u32,
    current: usize,
    mem: usize,
    len: u64,
    w2: BigInt,
    step: u64,
    delta: i64,
    switches: Vec<SwitchRecord>,
}

/// Hard limit on the number of levels inspected when looking for
/// stabilization.
pub const MAX_PLAN_LEVELS: u32 = 24;

/// Largest number of memoryless player-1 choices tried per level strategy.
pub const MEMORYLESS_SEARCH_LIMIT: usize = 4096;

/// Builds the plan from `v0` (which must be winning for the non-strict spec).
pub fn build_infinite_plan(
    g: &GameStructure,
    v0: usize,
    spec: &ObjectiveSpec,
    max_cap: Option<i64>,
) -> Result<InfiniteStrategyPlan> {
    if spec.is_strict() {
        return Err(Error::Precondition(
            "the infinite-memory plan targets non-strict thresholds".into(),
        ));
    }
    let (g, _) = normalize_threshold(g, spec, Dim::Two)?;
    let base = ObjectiveSpec::new(spec.mp, spec.cmp);
    let win = winning_region(&g, &base)?;
    if !win.contains(&v0) {
        return Err(Error::Precondition(format!(
            "`{}` is not winning",
            g.id(v0)
        )));
    }
    let mut keep = vec![false; g.num_vertices()];
    for &v in &win {
        keep[v] = true;
    }
    let sub = induced_subgraph(&g, &keep)
        .map_err(|s| Error::Internal(format!("winning region leaks at {} vertices", s.len())))?;
    let local_v0 = sub.from_parent(v0).expect("v0 is winning");
    let game = sub.game.with_initial(local_v0);
    let max_w = game.max_abs_weight().clone();
    let top_level = level_ceiling(&max_w, game.num_vertices());
    let mut plan = InfiniteStrategyPlan {
        game,
        win: sub.to_parent,
        v0: local_v0,
        kappa: 0,
        gamma: 0,
        d0: 0,
        max_cap,
        top_level,
        levels: Vec::new(),
        max_w,
        run: RunState {
            level: 1,
            current: local_v0,
            mem: 0,
            len: 0,
            w2: BigInt::zero(),
            step: 0,
            delta: 0,
            switches: vec![],
        },
    };
    let mut i = 1;
    loop {
        plan.ensure_level(i + 1)?;
        if plan.credits(i) == plan.credits(i + 1) {
            break;
        }
        i += 1;
        if i >= MAX_PLAN_LEVELS {
            return Err(Error::Precondition(format!(
                "credits did not stabilize within {MAX_PLAN_LEVELS} levels"
            )));
        }
    }
    plan.kappa = i;
    plan.gamma = (1..i)
        .flat_map(|j| {
            let (a, b) = (plan.credits(j), plan.credits(j + 1));
            a.iter().zip(b).map(|(x, y)| y - x).collect::<Vec<_>>()
        })
        .max()
        .unwrap_or(0)
        .max(0);
    plan.d0 = i64::from(plan.kappa) * plan.gamma + plan.credits(1)[local_v0];
    plan.reset()?;
    Ok(plan)
}

/// Largest `i` with `(2^(i+1)·||E|| + 1)·(|V| + 2) ≤ 2^60`, so that energy
/// sums along credit-bounded plays of level `i` cannot overflow.
fn level_ceiling(max_w: &BigInt, n: usize) -> u32 {
    let limit = BigInt::one() << 60u32;
    let mut i = 1u32;
    while i < 60 {
        let w = ((BigInt::one() << (i + 2)) * max_w + 1u32) * BigInt::from(n + 2);
        if w > limit {
            break;
        }
        i += 1;
    }
    i
}

impl InfiniteStrategyPlan {
    /// `c_i(v)` for every restricted vertex (level must be computed).
    pub fn credits(&self, i: u32) -> &[i64] {
        &self.levels[(i - 1) as usize].credits
    }

    pub fn computed_levels(&self) -> u32 {
        self.levels.len() as u32
    }

    pub fn level_info(&self, i: u32) -> Option<&PlanLevel> {
        self.levels.get((i - 1) as usize)
    }

    fn ensure_level(&mut self, i: u32) -> Result<()> {
        while (self.levels.len() as u32) < i {
            let j = self.levels.len() as u32 + 1;
            let lvl = self.solve_level(j)?;
            self.levels.push(lvl);
        }
        Ok(())
    }

    /// Level `i` plays a finite-memory strategy of the 2-dimensional energy
    /// game with weights `(w1, 2^(i+1)·w2 + 1)`: bounded energy on both
    /// dimensions gives `MP ≥ −1/2^(i+1)`, hence `MP > −1/2^i`.
    fn solve_level(&self, i: u32) -> Result<PlanLevel> {
        if i > self.top_level {
            return Err(Error::Overflow(format!(
                "plan level {i} exceeds the i64 range (top level {})",
                self.top_level
            )));
        }
        let eps = BigRational::new(-BigInt::one(), BigInt::one() << (i + 1));
        let spec = ObjectiveSpec::new(MpKind::Inf, Cmp::NonStrict).with_threshold(eps);
        let (h, _) = normalize_threshold(&self.game, &spec, Dim::Two)?;
        let meg = to_energy2(&h)?;
        let n = self.game.num_vertices();
        let prev = self.levels.last().map_or(0, |l| l.stage);
        if let Some(last) = self.levels.last() {
            // credits never decrease with the level, so memoryless winners
            // within the previous credits settle the level without a fixpoint
            let mut strategies = HashMap::new();
            for v in 0..n {
                match memoryless_winner(&meg, v, last.credits[v], MEMORYLESS_SEARCH_LIMIT) {
                    Some(Some((choice, _))) => {
                        strategies.insert(v, MooreStrategy::memoryless(Player::P1, choice));
                    }
                    _ => break,
                }
            }
            if strategies.len() == n {
                let credits = last.credits.clone();
                return Ok(PlanLevel {
                    level: i,
                    credits,
                    caps: Vec::new(),
                    stage: prev,
                    meg,
                    assignment: None,
                    strategies,
                });
            }
        }
        let max_cap = self.max_cap.unwrap_or_else(|| default_cap(&meg));
        // dimension-2 credits roughly double from one level to the next while
        // a losing capped fixpoint costs time linear in the cap, so start
        // where the previous credits fit with room to spare
        let mut k = prev;
        if let Some(a) = self.levels.last().and_then(|l| l.assignment.as_ref()) {
            let need = a.max_components()[1].saturating_mul(4);
            while 8i64.saturating_mul(4i64.saturating_pow(k)) < need.min(max_cap) {
                k += 1;
            }
        }
        let mut found: Option<PlanLevel> = None;
        loop {
            let cap = 8i64.saturating_mul(4i64.saturating_pow(k)).min(max_cap);
            let caps = [8i64.saturating_mul(2i64.saturating_pow(k)).min(cap), cap];
            let assignment = minimal_credit_with_caps(&meg, &caps);
            if (0..n).all(|v| assignment.is_winning(v)) {
                let credits: Vec<i64> = (0..n)
                    .map(|v| assignment.min_first(v).expect("winning"))
                    .collect();
                // small caps can hide credit vectors with a smaller first
                // component; accept once one more stage leaves them unchanged
                match found {
                    Some(f) if f.credits == credits => return Ok(f),
                    _ => {
                        found = Some(PlanLevel {
                            level: i,
                            credits,
                            caps: caps.to_vec(),
                            stage: k,
                            meg: meg.clone(),
                            assignment: Some(assignment),
                            strategies: HashMap::new(),
                        })
                    }
                }
            }
            if cap >= max_cap {
                return found.ok_or(Error::CapSaturated(cap as u64));
            }
            k += 1;
        }
    }

    /// `σ_i^v` on the restricted game (computed on first use).
    pub fn strategy(&mut self, i: u32, v: usize) -> Result<&MooreStrategy> {
        self.ensure_level(i)?;
        let lvl = &mut self.levels[(i - 1) as usize];
        if !lvl.strategies.contains_key(&v) {
            // a memoryless winner keeps N small, so switching comes much sooner
            let machine =
                match memoryless_winner(&lvl.meg, v, lvl.credits[v], MEMORYLESS_SEARCH_LIMIT) {
                    Some(Some((choice, _))) => MooreStrategy::memoryless(Player::P1, choice),
                    _ => {
                        let a = lvl
                            .assignment
                            .as_ref()
                            .ok_or_else(|| Error::Internal("level without fixpoint".into()))?;
                        let c0 = a.best_by_first(v).expect("winning").clone();
                        credit_strategy(&lvl.meg, a, v, &c0, &lexicographic_order(&lvl.meg))?
                            .machine
                    }
                };
            lvl.strategies.insert(v, machine);
        }
        Ok(&lvl.strategies[&v])
    }

    /// `N_i^v = |Win|·M_i^v`.
    pub fn product_size(&mut self, i: u32, v: usize) -> Result<usize> {
        let n = self.game.num_vertices();
        Ok(n * self.strategy(i, v)?.memory_size())
    }

    /// Restarts the play at `v0` with credit `d0` on level 1.
    pub fn reset(&mut self) -> Result<()> {
        self.strategy(1, self.v0)?;
        self.run = RunState {
            level: 1,
            current: self.v0,
            mem: 0,
            len: 0,
            w2: BigInt::zero(),
            step: 0,
            delta: i64::from(self.kappa) * self.gamma,
            switches: Vec::new(),
        };
        Ok(())
    }

    pub fn level(&self) -> u32 {
        self.run.level
    }

    /// Current vertex in the original game.
    pub fn current(&self) -> usize {
        self.win[self.run.current]
    }

    pub fn switches(&self) -> &[SwitchRecord] {
        &self.run.switches
    }

    /// Current credit slack `Δ_i`.
    pub fn delta(&self) -> i64 {
        self.run.delta
    }

    /// Player 1's move at the current vertex (original index), or `None` at a
    /// player-2 vertex.
    pub fn propose(&mut self) -> Result<Option<usize>> {
        let (i, u, m) = (self.run.level, self.run.current, self.run.mem);
        if self.game.owner(u) != Player::P1 {
            return Ok(None);
        }
        let start = self.segment_start();
        let s = self.strategy(i, start)?;
        let t = s
            .next_move(m, u)
            .ok_or_else(|| Error::Internal("undefined move".into()))?;
        Ok(Some(self.win[t]))
    }

    fn segment_start(&self) -> usize {
        self.run
            .switches
            .last()
            .map(|r| self.local(r.vertex))
            .unwrap_or(self.v0)
    }

    fn local(&self, v: usize) -> usize {
        self.win
            .iter()
            .position(|&o| o == v)
            .expect("vertex of the winning region")
    }

    /// Extends the play by `to` (original index) and applies the switching rule
    /// `w2(ρ_i) > N_{i+1}^{v_i}·||E|| − |ρ_i|·ε_i`.
    pub fn observe(&mut self, to: usize) -> Result<()> {
        let u = self.run.current;
        let t = self.win.iter().position(|&o| o == to);
        let e = t
            .and_then(|t| self.game.edge_between(u, t))
            .ok_or_else(|| Error::IllegalMove {
                from: self.game.id(u).to_string(),
                to: to.to_string(),
                history_len: self.run.step as usize,
            })?;
        let t = t.expect("checked");
        let i = self.run.level;
        let start = self.segment_start();
        let m = self.run.mem;
        let mem = self.strategy(i, start)?.step(m, t);
        self.run.mem = mem;
        self.run.current = t;
        self.run.len += 1;
        self.run.step += 1;
        self.run.w2 += &self.game.edge(e).w.w2;
        if i >= self.top_level {
            return Ok(());
        }
        let n_next = self.product_size(i + 1, t)?;
        // 2^i·w2 + len > 2^i·N·||E||
        let scale = BigInt::one() << i;
        let lhs = &scale * &self.run.w2 + BigInt::from(self.run.len);
        let rhs = &scale * BigInt::from(n_next) * &self.max_w;
        if lhs > rhs {
            let c = |j: u32| self.levels[(j - 1) as usize].credits[t];
            let delta = self.run.delta - (c(i + 1) - c(i));
            self.run.switches.push(SwitchRecord {
                level: i,
                step: self.run.step,
                vertex: self.win[t],
                delta,
            });
            self.run.level = i + 1;
            self.run.delta = delta;
            self.run.mem = self.strategy(i + 1, t)?.initial;
            self.run.len = 0;
            self.run.w2 = BigInt::zero();
        }
        Ok(())
    }
}

/// Observes the opponent's (or own) last move, then answers player 1's move.
pub fn next_move_infinite(
    plan: &mut InfiniteStrategyPlan,
    observed: Option<usize>,
) -> Result<Option<usize>> {
    if let Some(v) = observed {
        plan.observe(v)?;
    }
    plan.propose()
}
