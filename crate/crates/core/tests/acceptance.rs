//! One PASS/FAIL line per acceptance criterion. Every job writes a transcript;
//! the determinism criterion reruns all jobs and compares transcripts.

mod common;

use std::fmt::Write as _;
use std::io::Write as _;
use std::time::{Duration, Instant};

use common::{audit_plan, counting_machine, some_machine_wins};
use empg::cycles::{good_cycle_exists, good_multicycle_exists, MulticycleWitness};
use empg::game::{
    normalize_threshold, Answer, Cmp, Dim, GameStructure, MpKind, ObjectiveSpec, Weight2,
};
use empg::graph::{enumerate_memoryless, MooreStrategy};
use empg::instances::{fig3, fig4, fig5, random_game, RandomGameParams};
use empg::io::{render, strategy_to_json, trace_to_json, verdict_to_json};
use empg::one_player::{solve_one_player, synthesize_strict};
use empg::oracle::cross_check;
use empg::reduction::to_energy4;
use empg::sim::{check_lasso_objective, simulate, LassoVerdict, StrategyHandle};
use empg::two_player::{build_infinite_plan, solve_two_player};
use empg::Player::{P1, P2};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Per-golden-instance time limit.
const GOLDEN_LIMIT: Duration = Duration::from_secs(1);
/// Oracle suites: instance count, time limit, largest Unknown share.
const ORACLE_INSTANCES: usize = 500;
const ORACLE_LIMIT: Duration = Duration::from_secs(300);
const MAX_UNKNOWN_SHARE: f64 = 0.20;
const REDUCTION_INSTANCES: usize = 100;
/// Plan simulation: random instances, horizon, minimum level, time limit.
const PLAN_INSTANCES: usize = 20;
const PLAN_HORIZON: usize = 100_000;
const PLAN_MIN_LEVEL: u32 = 6;
const PLAN_LIMIT: Duration = Duration::from_secs(120);

type Job = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
    transcript: String,
}

fn all_yes(g: &GameStructure) -> bool {
    ObjectiveSpec::all()
        .iter()
        .all(|s| solve_one_player(g, 0, s).unwrap().answer == Answer::Yes)
}

fn golden() -> Outcome {
    let mut t = String::new();
    let mut fails = Vec::new();
    let mut slowest = Duration::ZERO;
    let mut timed = |name: &str, f: &mut dyn FnMut(&mut String) -> bool| {
        let start = Instant::now();
        let ok = f(&mut t);
        let el = start.elapsed();
        slowest = slowest.max(el);
        if !ok || el > GOLDEN_LIMIT {
            fails.push(format!("{name} ({} ms)", el.as_millis()));
        }
    };

    timed("fig3", &mut |t| {
        let g = fig3();
        let yes = all_yes(&g);
        let wit = good_cycle_exists(&g, 0).unwrap();
        let (s, c0) = synthesize_strict(&g, 0, &wit).unwrap();
        let steps = g.num_vertices() * s.memory_size() + 1;
        let tr = simulate(
            &g,
            0,
            StrategyHandle::Moore(s.clone()),
            StrategyHandle::Moore(MooreStrategy::empty(&g, P2)),
            steps,
            &c0,
        )
        .unwrap();
        let l = tr.lasso.as_ref().unwrap();
        writeln!(t, "{}", render(&strategy_to_json(&g, &s, "acceptance"))).unwrap();
        writeln!(
            t,
            "fig3 c0 {c0} cycle {:?} avg {}",
            l.cycle_weight, l.average.1
        )
        .unwrap();
        let strict = ObjectiveSpec::new(MpKind::Inf, Cmp::Strict);
        yes && c0 == BigInt::from(3)
            && !l.cycle_weight.w1.is_negative()
            && l.average.1.is_positive()
            && check_lasso_objective(&tr, &strict).unwrap() == LassoVerdict::Satisfied
    });

    timed("fig4", &mut |t| {
        let g = fig4();
        let mut ok = true;
        for spec in ObjectiveSpec::all() {
            let v = solve_one_player(&g, 0, &spec).unwrap();
            writeln!(t, "{}", render(&verdict_to_json(&g, &v))).unwrap();
            ok &= if spec.is_strict() {
                v.answer == Answer::No
            } else {
                v.answer == Answer::Yes && v.initial_credit == Some(BigInt::from(0))
            };
        }
        let m = good_multicycle_exists(&g, 0).unwrap();
        let mut cycles: Vec<Vec<usize>> = match &m {
            MulticycleWitness::TwoCycle { c, c_prime, .. } => vec![c.clone(), c_prime.clone()],
            MulticycleWitness::Flow { cycles, .. } => {
                cycles.iter().map(|(c, _)| c.clone()).collect()
            }
            MulticycleWitness::SingleCycle { cycle, .. } => vec![cycle.clone()],
        };
        cycles.sort();
        writeln!(t, "fig4 multicycle {cycles:?} {:?}", m.total_weight()).unwrap();
        ok && m.total_weight() == Weight2::new(0, 0) && cycles == vec![vec![0], vec![1]]
    });

    for w in 2..=4i64 {
        timed(&format!("fig5 W={w}"), &mut |t| {
            let g = fig5(w);
            let mut ok = true;
            for spec in ObjectiveSpec::all() {
                let a = solve_one_player(&g, 0, &spec).unwrap().answer;
                ok &= a
                    == if spec.is_strict() {
                        Answer::No
                    } else {
                        Answer::Yes
                    };
            }
            let spec = ObjectiveSpec::new(MpKind::Inf, Cmp::Strict)
                .with_threshold(BigRational::new((-1).into(), (2 * w).into()));
            let (h, s0) = normalize_threshold(&g, &spec, Dim::Two).unwrap();
            let norm = w as usize;
            let small = (1..=norm).any(|m| some_machine_wins(&h, m));
            let big = counting_machine(2 * norm + 1);
            let tr = simulate(
                &h,
                0,
                StrategyHandle::Moore(big),
                StrategyHandle::Moore(MooreStrategy::empty(&h, P2)),
                1000,
                &BigInt::from(w),
            )
            .unwrap();
            let big_wins = check_lasso_objective(&tr, &s0).unwrap() == LassoVerdict::Satisfied;
            writeln!(
                t,
                "fig5 W={w} memory<=||E|| wins {small}, memory 2||E||+1 wins {big_wins}"
            )
            .unwrap();
            ok && !small && big_wins
        });
    }
    let pass = fails.is_empty();
    let detail = if pass {
        format!(
            "Fig. 3/4/5 exact, slowest {} ms <= {} ms",
            slowest.as_millis(),
            GOLDEN_LIMIT.as_millis()
        )
    } else {
        format!("failed: {}", fails.join(", "))
    };
    Outcome {
        pass,
        detail,
        transcript: t,
    }
}

fn oracle_suites() -> Outcome {
    let mut t = String::new();
    let start = Instant::now();
    let (mut bad, mut compared, mut unknown, mut instances) = (0usize, 0usize, 0usize, 0usize);
    // mixed ownership, then one-player games
    for (seed, p2) in [(2024u64, 0.5), (2025, 0.0)] {
        let params = RandomGameParams {
            max_vertices: 6,
            max_weight: 3,
            p2_fraction: p2,
            ..RandomGameParams::default()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for i in 0..ORACLE_INSTANCES {
            let g = random_game(&mut rng, &params);
            let c = cross_check(&g, 0, None).unwrap();
            instances += 1;
            compared += c.reduction_compared;
            unknown += c.reduction_unknown;
            if !c.is_clean() {
                bad += 1;
                writeln!(
                    t,
                    "p2={p2} #{i}: {:?}",
                    c.disagreements().collect::<Vec<_>>()
                )
                .unwrap();
            }
        }
    }
    let el = start.elapsed();
    let share = unknown as f64 / compared.max(1) as f64;
    writeln!(
        t,
        "oracle instances {instances} disagreements {bad} unknown {unknown}/{compared}"
    )
    .unwrap();
    let pass = bad == 0 && share < MAX_UNKNOWN_SHARE && el < ORACLE_LIMIT;
    let detail = format!(
        "{instances} instances, {bad} disagreements, Unknown {unknown}/{compared} ({:.1}% < {:.0}%), {:.1} s < {} s",
        100.0 * share,
        100.0 * MAX_UNKNOWN_SHARE,
        el.as_secs_f64(),
        ORACLE_LIMIT.as_secs()
    );
    Outcome {
        pass,
        detail,
        transcript: t,
    }
}

fn reduction_structure() -> Outcome {
    let mut t = String::new();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut bad = 0;
    for _ in 0..REDUCTION_INSTANCES {
        let g = random_game(&mut rng, &RandomGameParams::default());
        let (meg, _) = to_energy4(&g).unwrap();
        let (v, e, w) = (
            meg.num_vertices(),
            meg.num_edges(),
            BigInt::from(meg.max_abs_weight()),
        );
        writeln!(
            t,
            "{} {} {} -> {v} {e} {w}",
            g.num_vertices(),
            g.num_edges(),
            g.max_abs_weight()
        )
        .unwrap();
        // gadget weights contain ±1, so ||E′|| = max(||E||, 1)
        let norm = g.max_abs_weight().clone().max(BigInt::from(1));
        if v != g.num_vertices() + 2 * g.num_edges() || e != 5 * g.num_edges() || w != norm {
            bad += 1;
        }
    }
    Outcome {
        pass: bad == 0,
        detail: format!("{REDUCTION_INSTANCES} games, {bad} size mismatches"),
        transcript: t,
    }
}

fn plan_simulation() -> Outcome {
    let mut t = String::new();
    let start = Instant::now();
    let nonstrict = ObjectiveSpec::new(MpKind::Inf, Cmp::NonStrict);
    let mut games = vec![fig4()];
    let params = RandomGameParams {
        max_vertices: 5,
        max_weight: 3,
        ..RandomGameParams::default()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    while games.len() < PLAN_INSTANCES + 1 {
        let g = random_game(&mut rng, &params);
        let two_player = (0..g.num_vertices()).any(|v| g.owner(v) == P2)
            && (0..g.num_vertices()).any(|v| g.owner(v) == P1);
        if two_player && solve_two_player(&g, 0, &nonstrict).unwrap().answer == Answer::Yes {
            games.push(g);
        }
    }
    let (mut runs, mut dirty, mut min_level) = (0usize, 0usize, u32::MAX);
    for (k, g) in games.iter().enumerate() {
        let mut plan = build_infinite_plan(g, 0, &nonstrict, None).unwrap();
        for s2 in enumerate_memoryless(g, P2, 4096).unwrap() {
            let a = audit_plan(g, &mut plan, &s2, PLAN_HORIZON);
            runs += 1;
            min_level = min_level.min(a.max_level);
            writeln!(
                t,
                "game {k} d0 {} kappa {} gamma {} level {} switches {} clean {}",
                plan.d0,
                plan.kappa,
                plan.gamma,
                a.max_level,
                a.switches,
                a.is_clean()
            )
            .unwrap();
            if !a.is_clean() || a.max_level < PLAN_MIN_LEVEL {
                dirty += 1;
                writeln!(t, "  {a:?}").unwrap();
            }
        }
    }
    let el = start.elapsed();
    let pass = dirty == 0 && el < PLAN_LIMIT;
    let detail = format!(
        "Fig. 4 + {PLAN_INSTANCES} games, {runs} runs of {PLAN_HORIZON} steps, {dirty} failing, min level {min_level} >= {PLAN_MIN_LEVEL}, {:.1} s < {} s",
        el.as_secs_f64(),
        PLAN_LIMIT.as_secs()
    );
    Outcome {
        pass,
        detail,
        transcript: t,
    }
}

/// A fixed random-vs-random simulation, serialized.
fn trace_job() -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let g = random_game(&mut rng, &RandomGameParams::default());
    let tr = simulate(
        &g,
        0,
        StrategyHandle::UniformRandom(1),
        StrategyHandle::UniformRandom(2),
        2000,
        &BigInt::from(5),
    )
    .unwrap();
    render(&trace_to_json(&g, &tr))
}

#[test]
fn acceptance() {
    let jobs: [Job; 4] = [
        ("1 golden instances", golden),
        ("2 oracle equivalence", oracle_suites),
        ("3 reduction structure", reduction_structure),
        ("4 infinite-memory plan", plan_simulation),
    ];
    let mut lines = Vec::new();
    let mut first = Vec::new();
    for (name, job) in jobs {
        let o = job();
        lines.push(format!(
            "{} criterion {name}: {}",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        ));
        first.push((o.pass, o.transcript));
    }
    first.push((true, trace_job()));
    let second: Vec<String> = jobs
        .iter()
        .map(|(_, job)| job().transcript)
        .chain([trace_job()])
        .collect();
    let same = first
        .iter()
        .zip(&second)
        .filter(|((_, a), b)| a == *b)
        .count();
    let deterministic = same == first.len();
    lines.push(format!(
        "{} criterion 5 determinism: {same}/{} job transcripts byte-identical on rerun",
        if deterministic { "PASS" } else { "FAIL" },
        first.len()
    ));
    // straight to stderr so the lines show up even when output is captured
    let mut err = std::io::stderr().lock();
    for l in &lines {
        writeln!(err, "{l}").unwrap();
    }
    let failed: Vec<&String> = lines.iter().filter(|l| l.starts_with("FAIL")).collect();
    assert!(failed.is_empty(), "{failed:?}");
}
