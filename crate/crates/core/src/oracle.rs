//! Brute-force oracles for small instances. They share no code with the
//! circulation programs or the antichain fixpoint and exist to cross-check
//! them.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::game::{
    normalize_threshold, Dim, GameStructure, MpKind, ObjectiveSpec, Player, Weight2,
};
use crate::graph::{
    close, enumerate_memoryless, enumerate_simple_cycles, product, reachable_set, sccs,
    ENUMERATION_GUARD,
};
use crate::multi_energy::MultiEnergyGame;

/// Largest vertex count for [`simple_cycles_by_permutation`].
pub const PERMUTATION_MAX_VERTICES: usize = 8;

/// Simple cycles by trying every ordering of every vertex subset. Same
/// canonical form as [`enumerate_simple_cycles`], sorted.
pub fn simple_cycles_by_permutation(g: &GameStructure) -> Result<Vec<Vec<usize>>> {
    let n = g.num_vertices();
    if n > PERMUTATION_MAX_VERTICES {
        return Err(Error::GuardExceeded(format!(
            "{n} vertices exceed {PERMUTATION_MAX_VERTICES}"
        )));
    }
    let mut out = Vec::new();
    for mask in 1u32..(1 << n) {
        let members: Vec<usize> = (0..n).filter(|v| mask >> v & 1 == 1).collect();
        let s = members[0];
        let mut rest = members[1..].to_vec();
        permute(&mut rest, 0, &mut |order| {
            let mut cyc = vec![s];
            cyc.extend_from_slice(order);
            let closed = close(&cyc);
            if closed
                .windows(2)
                .all(|p| g.edge_between(p[0], p[1]).is_some())
            {
                out.push(cyc);
            }
        });
    }
    out.sort();
    Ok(out)
}

fn permute(xs: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k == xs.len() {
        f(xs);
        return;
    }
    for i in k..xs.len() {
        xs.swap(k, i);
        permute(xs, k + 1, f);
        xs.swap(k, i);
    }
}

/// Simple cycles grouped by the reachable component that contains them,
/// with their weights.
fn reachable_cycles_by_component(g: &GameStructure, v0: usize) -> Result<Vec<Vec<Weight2>>> {
    let reach = reachable_set(g, v0);
    let scc = sccs(g);
    let mut groups: Vec<Vec<Weight2>> = vec![Vec::new(); scc.components.len()];
    for c in enumerate_simple_cycles(g, ENUMERATION_GUARD)? {
        if reach[c[0]] {
            groups[scc.component_of[c[0]]].push(g.path_weight(&close(&c))?);
        }
    }
    Ok(groups)
}

/// Candidate coefficient pairs `(λ, μ)` where the cone of nonnegative
/// combinations of `u` and `v` can reach an extreme value.
fn pair_candidates(u: &Weight2, v: &Weight2) -> Vec<(BigInt, BigInt)> {
    let mut out = vec![
        (BigInt::from(1), BigInt::zero()),
        (BigInt::zero(), BigInt::from(1)),
    ];
    for (a, b) in [(&u.w1, &v.w1), (&u.w2, &v.w2)] {
        if a.signum() * b.signum() < BigInt::zero() {
            out.push((b.abs(), a.abs()));
        }
    }
    out
}

/// A reachable good cycle exists iff some reachable simple cycle is good, or
/// two simple cycles of one reachable component combine into a vector with
/// `w1 ≥ 0` and `w2 > 0`.
pub fn good_cycle_oracle(g: &GameStructure, v0: usize) -> Result<bool> {
    let good = |w: &Weight2| !w.w1.is_negative() && w.w2.is_positive();
    Ok(reachable_cycles_by_component(g, v0)?.iter().any(|ws| {
        ws.iter().any(good)
            || ws.iter().enumerate().any(|(i, u)| {
                ws[i + 1..].iter().any(|v| {
                    pair_candidates(u, v)
                        .iter()
                        .any(|(l, m)| good(&u.scale(l).add(&v.scale(m))))
                })
            })
    }))
}

/// A reachable good multicycle exists iff some nonzero nonnegative
/// combination of at most two simple cycles of one reachable component is
/// `≥ (0,0)` (two generators suffice in the plane).
pub fn good_multicycle_oracle(g: &GameStructure, v0: usize) -> Result<bool> {
    let ok = |w: &Weight2| w.is_nonnegative();
    Ok(reachable_cycles_by_component(g, v0)?.iter().any(|ws| {
        ws.iter().any(ok)
            || ws.iter().enumerate().any(|(i, u)| {
                ws[i + 1..].iter().any(|v| {
                    pair_candidates(u, v)
                        .iter()
                        .any(|(l, m)| ok(&u.scale(l).add(&v.scale(m))))
                })
            })
    }))
}

/// Two-player verdict from every memoryless antagonist and the cycle oracles
/// on the products.
pub fn two_player_oracle(g: &GameStructure, v0: usize, spec: &ObjectiveSpec) -> Result<bool> {
    let (h, _) = normalize_threshold(g, spec, Dim::Two)?;
    for s2 in enumerate_memoryless(&h, Player::P2, ENUMERATION_GUARD)? {
        let p = product(&h, &s2, v0);
        let wins = if spec.is_strict() {
            good_cycle_oracle(&p.game, 0)?
        } else {
            good_multicycle_oracle(&p.game, 0)?
        };
        if !wins {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Safety game on `(vertex, energy)` with every energy component kept in
/// `0..=caps[j]` (clipped from above). `win[v][k]` tells whether player 1
/// survives forever from `v` with the credit whose mixed-radix index is `k`
/// (first dimension fastest). This is the meaning of the capped fixpoint:
/// credit `c ≤ caps` wins iff it dominates a vector of the antichain.
pub fn capped_energy_oracle(g: &MultiEnergyGame, caps: &[i64]) -> Vec<Vec<bool>> {
    let n = g.num_vertices();
    let d = g.dim();
    let radix: Vec<usize> = caps.iter().map(|c| *c as usize + 1).collect();
    let states: usize = radix.iter().product();
    let encode = |e: &[i64]| -> usize {
        let mut k = 0;
        for j in (0..d).rev() {
            k = k * radix[j] + e[j] as usize;
        }
        k
    };
    let decode = |mut k: usize| -> Vec<i64> {
        let mut e = vec![0; d];
        for j in 0..d {
            e[j] = (k % radix[j]) as i64;
            k /= radix[j];
        }
        e
    };
    let mut win = vec![vec![true; states]; n];
    loop {
        let mut changed = false;
        for v in 0..n {
            for k in 0..states {
                if !win[v][k] {
                    continue;
                }
                let e = decode(k);
                let mut moves = g.out_edges(v).iter().map(|&ei| {
                    let edge = &g.edges()[ei];
                    let next: Vec<i64> = e.iter().zip(&edge.w).map(|(a, w)| a + w).collect();
                    if next.iter().any(|x| *x < 0) {
                        return false;
                    }
                    let clipped: Vec<i64> = next.iter().zip(caps).map(|(x, c)| *x.min(c)).collect();
                    win[edge.to][encode(&clipped)]
                });
                let stays = match g.owner(v) {
                    Player::P1 => moves.any(|b| b),
                    Player::P2 => moves.all(|b| b),
                };
                if !stays {
                    win[v][k] = false;
                    changed = true;
                }
            }
        }
        if !changed {
            return win;
        }
    }
}

/// Mixed-radix decoding matching [`capped_energy_oracle`].
pub fn oracle_credit(caps: &[i64], mut k: usize) -> Vec<i64> {
    caps.iter()
        .map(|c| {
            let r = *c as usize + 1;
            let x = (k % r) as i64;
            k /= r;
            x
        })
        .collect()
}

/// Outcome of [`cross_check`] on one instance. Each list names the checks that
/// disagreed.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CrossCheck {
    pub cycle_enumeration: Vec<String>,
    pub good_cycle: Vec<String>,
    pub good_multicycle: Vec<String>,
    pub two_player: Vec<String>,
    pub inf_sup: Vec<String>,
    pub reduction: Vec<String>,
    /// Strict specs the gadget route compared against enumeration.
    pub reduction_compared: usize,
    /// Strict specs where the gadget route returned `Unknown`.
    pub reduction_unknown: usize,
}

impl CrossCheck {
    pub fn disagreements(&self) -> impl Iterator<Item = &String> {
        self.cycle_enumeration
            .iter()
            .chain(&self.good_cycle)
            .chain(&self.good_multicycle)
            .chain(&self.two_player)
            .chain(&self.inf_sup)
            .chain(&self.reduction)
    }

    pub fn is_clean(&self) -> bool {
        self.disagreements().next().is_none()
    }
}

/// Runs every solver of the crate on `g` from `v0` and compares it with the
/// brute-force oracles. `cap` bounds the gadget route (`None` for its
/// default cap).
pub fn cross_check(g: &GameStructure, v0: usize, cap: Option<i64>) -> Result<CrossCheck> {
    use crate::cycles::{good_cycle_exists, good_multicycle_exists};
    use crate::game::{Answer, Certificate};
    use crate::two_player::{is_spoiling, solve_strict_pseudo_poly, solve_two_player};

    let mut out = CrossCheck::default();
    let mut dfs = enumerate_simple_cycles(g, ENUMERATION_GUARD)?;
    dfs.sort();
    if dfs != simple_cycles_by_permutation(g)? {
        out.cycle_enumeration
            .push("simple cycle lists differ".into());
    }
    let (lp, bf) = (
        good_cycle_exists(g, v0).is_some(),
        good_cycle_oracle(g, v0)?,
    );
    if lp != bf {
        out.good_cycle
            .push(format!("good cycle: detector {lp}, oracle {bf}"));
    }
    let (lp, bf) = (
        good_multicycle_exists(g, v0).is_some(),
        good_multicycle_oracle(g, v0)?,
    );
    if lp != bf {
        out.good_multicycle
            .push(format!("good multicycle: detector {lp}, oracle {bf}"));
    }
    let mut answers = Vec::new();
    for spec in ObjectiveSpec::all() {
        let a = solve_two_player(g, v0, &spec)?.answer;
        let o = two_player_oracle(g, v0, &spec)?;
        if (a == Answer::Yes) != o {
            out.two_player.push(format!(
                "{:?}/{:?}: solver {a:?}, oracle {o}",
                spec.mp, spec.cmp
            ));
        }
        if spec.is_strict() {
            let rv = solve_strict_pseudo_poly(g, v0, &spec, cap)?;
            let r = rv.answer;
            out.reduction_compared += 1;
            if let Certificate::Spoiling(s2) = &rv.certificate {
                if !is_spoiling(g, v0, &spec, s2)? {
                    out.reduction
                        .push(format!("{:?}: gadget spoiler does not spoil", spec.mp));
                }
            }
            match r {
                Answer::Unknown => out.reduction_unknown += 1,
                r if r != a => out
                    .reduction
                    .push(format!("{:?}: enumeration {a:?}, reduction {r:?}", spec.mp)),
                _ => {}
            }
        }
        answers.push((spec, a));
    }
    for (s, a) in &answers {
        for (t, b) in &answers {
            if s.cmp == t.cmp && s.mp == MpKind::Inf && t.mp == MpKind::Sup && a != b {
                out.inf_sup
                    .push(format!("{:?}: inf {a:?}, sup {b:?}", s.cmp));
            }
        }
    }
    Ok(out)
}
