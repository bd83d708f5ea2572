#![allow(dead_code)]

use empg::game::GameStructure;
use empg::graph::MooreStrategy;
use empg::two_player::InfiniteStrategyPlan;
use empg::Player;
use num_bigint::BigInt;

/// What a plan run violated, if anything.
#[derive(Debug, Default)]
pub struct PlanAudit {
    pub steps: usize,
    pub max_level: u32,
    pub switches: usize,
    /// Steps where `d0 + w1(prefix) < 0`.
    pub energy_violations: Vec<usize>,
    /// Steps inside a level `i ≥ 2` where `w2(prefix)/k < −1/2^(i−1)`.
    pub staircase_violations: Vec<usize>,
    /// Switches whose slack `Δ` is negative.
    pub negative_deltas: Vec<usize>,
}

impl PlanAudit {
    pub fn is_clean(&self) -> bool {
        self.energy_violations.is_empty()
            && self.staircase_violations.is_empty()
            && self.negative_deltas.is_empty()
    }
}

/// Plays `plan` against the memoryless (or finite-memory) `s2` for `steps`
/// steps from the plan's start, checking energy, staircase and slack with
/// exact integers.
pub fn audit_plan(
    g: &GameStructure,
    plan: &mut InfiniteStrategyPlan,
    s2: &MooreStrategy,
    steps: usize,
) -> PlanAudit {
    plan.reset().unwrap();
    let mut a = PlanAudit::default();
    let mut cur = plan.current();
    let mut m2 = s2.initial;
    let mut e1 = BigInt::from(plan.d0);
    let mut w2 = BigInt::from(0);
    for k in 1..=steps {
        let to = match g.owner(cur) {
            Player::P1 => plan.propose().unwrap().expect("player-1 vertex"),
            Player::P2 => s2.next_move(m2, cur).expect("player-2 vertex"),
        };
        let e = g.edge_between(cur, to).expect("legal move");
        plan.observe(to).unwrap();
        m2 = s2.step(m2, to);
        e1 += &g.edge(e).w.w1;
        w2 += &g.edge(e).w.w2;
        cur = to;
        if e1 < BigInt::from(0) {
            a.energy_violations.push(k);
        }
        let i = plan.level();
        // w2/k ≥ −1/2^(i−1)  ⇔  2^(i−1)·w2 + k ≥ 0
        if i >= 2 && (BigInt::from(1) << (i - 1)) * &w2 + k < BigInt::from(0) {
            a.staircase_violations.push(k);
        }
    }
    a.steps = steps;
    a.max_level = plan.level();
    a.switches = plan.switches().len();
    a.negative_deltas = plan
        .switches()
        .iter()
        .filter(|s| s.delta < 0)
        .map(|s| s.step as usize)
        .collect();
    a
}

/// Does some Moore machine with `m` states win `Energy ∧ MP > 0` (unknown
/// credit) from vertex 0 of the all-player-1 game `g`? Every machine is
/// enumerated; its unique play is a lasso, which wins iff the cycle has
/// `w1 ≥ 0` and `w2 > 0`.
pub fn some_machine_wins(g: &GameStructure, m: usize) -> bool {
    let n = g.num_vertices();
    let w: Vec<Vec<(usize, i64, i64)>> = (0..n)
        .map(|v| {
            g.out_edges(v)
                .iter()
                .map(|&e| {
                    let e = g.edge(e);
                    (
                        e.to,
                        i64::try_from(&e.w.w1).unwrap(),
                        i64::try_from(&e.w.w2).unwrap(),
                    )
                })
                .collect()
        })
        .collect();
    let cells = m * n;
    let updates = m
        .checked_pow(cells as u32)
        .expect("search space fits in usize");
    let moves: usize = (0..cells).map(|c| w[c % n].len()).product();
    let mut digits = vec![0usize; cells];
    let mut choice = vec![0usize; cells];
    let mut seen = vec![usize::MAX; cells];
    let mut sums: Vec<(i64, i64)> = Vec::new();
    for u in 0..updates {
        let mut x = u;
        for d in digits.iter_mut() {
            *d = x % m;
            x /= m;
        }
        for mv in 0..moves {
            let mut x = mv;
            for (c, slot) in choice.iter_mut().enumerate() {
                let k = w[c % n].len();
                *slot = x % k;
                x /= k;
            }
            seen.iter_mut().for_each(|s| *s = usize::MAX);
            sums.clear();
            sums.push((0, 0));
            let (mut v, mut mem) = (0usize, 0usize);
            loop {
                let key = mem * n + v;
                if seen[key] != usize::MAX {
                    let (a, b) = sums[seen[key]];
                    let (c, d) = *sums.last().unwrap();
                    if c - a >= 0 && d - b > 0 {
                        return true;
                    }
                    break;
                }
                seen[key] = sums.len() - 1;
                let (t, x, y) = w[v][choice[key]];
                let (s1, s2) = *sums.last().unwrap();
                sums.push((s1 + x, s2 + y));
                mem = digits[mem * n + t];
                v = t;
            }
        }
    }
    false
}

/// Machine with `m` states for the Fig. 5 graph (`v0`, `v1`): at `v1` loop
/// `m − 1` times, then go back to `v0`. State `m − 1` is shared by `v0` and
/// the last visit of `v1`.
pub fn counting_machine(m: usize) -> MooreStrategy {
    let last = m - 1;
    let update = (0..m)
        .map(|j| vec![last, if j == last { 0 } else { j + 1 }])
        .collect();
    let next = (0..m)
        .map(|j| vec![Some(1), Some(if j == last { 0 } else { 1 })])
        .collect();
    MooreStrategy {
        player: Player::P1,
        initial: last,
        update,
        next,
    }
}
