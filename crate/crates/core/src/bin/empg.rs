use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Value};

use empg::cycles::{good_cycle_exists, good_multicycle_exists};
use empg::error::{Error, Result};
use empg::game::{
    normalize_threshold, Answer, Cmp, Dim, GameStructure, MpKind, ObjectiveSpec, Player, Verdict,
};
use empg::graph::{MooreStrategy, ENUMERATION_GUARD};
use empg::io;
use empg::one_player::{synthesize_nonstrict, synthesize_strict, ROUTE_ONE_PLAYER};
use empg::oracle::cross_check;
use empg::reduction::to_energy4;
use empg::sim::{simulate_with_stride, StrategyHandle, DEFAULT_STRIDE};
use empg::two_player::{
    build_infinite_plan, solve_strict_pseudo_poly, solve_two_player_bounded, spoiling_strategy,
    synthesize_strict_two_player, ROUTE_ENUMERATION, ROUTE_REDUCTION,
};

#[derive(Parser)]
#[command(name = "empg", version, about = "Energy mean-payoff games")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mp {
    Inf,
    Sup,
}

#[derive(Clone, Copy, ValueEnum)]
enum CmpArg {
    Gt,
    Ge,
}

#[derive(Clone, Copy, ValueEnum)]
enum Route {
    Enum,
    Reduce,
    Auto,
}

#[derive(clap::Args)]
struct Objective {
    #[arg(long, value_enum, default_value = "inf")]
    mp: Mp,
    #[arg(long, value_enum, default_value = "ge")]
    cmp: CmpArg,
    /// Mean-payoff threshold, e.g. `-1/8`.
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    threshold: String,
}

impl Objective {
    fn spec(&self) -> Result<ObjectiveSpec> {
        let mp = match self.mp {
            Mp::Inf => MpKind::Inf,
            Mp::Sup => MpKind::Sup,
        };
        let cmp = match self.cmp {
            CmpArg::Gt => Cmp::Strict,
            CmpArg::Ge => Cmp::NonStrict,
        };
        let t: BigRational = self.threshold.parse().map_err(|_| {
            Error::Precondition(format!("threshold `{}` is not a rational", self.threshold))
        })?;
        Ok(ObjectiveSpec::new(mp, cmp).with_threshold(t))
    }
}

#[derive(Subcommand)]
enum Command {
    /// Parse a game and report its size.
    Validate { game: PathBuf },
    /// Decide the energy mean-payoff problem from the initial vertex.
    Solve {
        game: PathBuf,
        #[command(flatten)]
        objective: Objective,
        #[arg(long, value_enum, default_value = "auto")]
        route: Route,
        /// Credit cap for the reduction route.
        #[arg(long)]
        cap: Option<i64>,
    },
    /// Build a winning strategy for player 1 or a spoiling one for player 2.
    Synthesize {
        game: PathBuf,
        #[arg(long, default_value_t = 1)]
        player: u8,
        #[command(flatten)]
        objective: Objective,
        #[arg(long)]
        cap: Option<i64>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Play two strategies against each other.
    Simulate {
        game: PathBuf,
        /// Strategy file, `random:SEED`, `schedule`, `plan`, `stdin` or `empty`.
        #[arg(long, default_value = "empty")]
        s1: String,
        #[arg(long, default_value = "empty")]
        s2: String,
        #[arg(long, default_value_t = 10_000)]
        steps: usize,
        /// Initial credit; defaults to the credit of a synthesized player-1
        /// strategy, else 0.
        #[arg(long, allow_hyphen_values = true)]
        credit: Option<BigInt>,
        #[arg(long, default_value_t = DEFAULT_STRIDE)]
        stride: usize,
        #[command(flatten)]
        objective: Objective,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Translate a game into its 4-dimensional energy game.
    Reduce {
        game: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        map: Option<PathBuf>,
    },
    /// Compare every solver with the brute-force oracles on a directory of games.
    OracleCheck {
        dir: PathBuf,
        #[arg(long, default_value_t = 6)]
        max_vertices: usize,
        #[arg(long)]
        cap: Option<i64>,
    },
}

fn read_game(path: &Path) -> Result<(GameStructure, usize)> {
    let g = io::parse_game(&std::fs::read_to_string(path)?)?;
    let v0 = g
        .initial()
        .ok_or_else(|| Error::Precondition("the game has no initial vertex".into()))?;
    Ok((g, v0))
}

fn emit(v: &Value, output: Option<&Path>) -> Result<()> {
    let text = io::render(v);
    match output {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn exit_for(a: Answer) -> ExitCode {
    ExitCode::from(match a {
        Answer::Yes => 0,
        Answer::No => 1,
        Answer::Unknown => 2,
    })
}

fn solve(
    g: &GameStructure,
    v0: usize,
    spec: &ObjectiveSpec,
    route: Route,
    cap: Option<i64>,
) -> Result<Verdict> {
    match route {
        Route::Enum => solve_two_player_bounded(g, v0, spec, ENUMERATION_GUARD),
        Route::Reduce => solve_strict_pseudo_poly(g, v0, spec, cap),
        Route::Auto => match solve_two_player_bounded(g, v0, spec, ENUMERATION_GUARD) {
            Err(Error::GuardExceeded(_)) if spec.is_strict() => {
                solve_strict_pseudo_poly(g, v0, spec, cap)
            }
            r => r,
        },
    }
}

/// Player-1 strategy as a JSON document plus a handle for the simulator.
fn synthesize_p1(
    g: &GameStructure,
    v0: usize,
    spec: &ObjectiveSpec,
    cap: Option<i64>,
) -> Result<(Value, StrategyHandle, BigInt)> {
    let (h, _) = normalize_threshold(g, spec, Dim::Two)?;
    if g.is_one_player() {
        if spec.is_strict() {
            let wit = good_cycle_exists(&h, v0).ok_or_else(|| not_winning(g, v0))?;
            let (s, c0) = synthesize_strict(&h, v0, &wit)?;
            let mut doc = io::strategy_to_json(g, &s, ROUTE_ONE_PLAYER);
            doc["initial_credit"] = io::int_value(&c0);
            return Ok((doc, StrategyHandle::Moore(s), c0));
        }
        let wit = good_multicycle_exists(&h, v0).ok_or_else(|| not_winning(g, v0))?;
        let s = synthesize_nonstrict(&h, v0, &wit)?;
        let c0 = s.initial_credit.clone();
        return Ok((
            io::schedule_to_json(g, &s, ROUTE_ONE_PLAYER),
            StrategyHandle::Schedule(s),
            c0,
        ));
    }
    if spec.is_strict() {
        let s = synthesize_strict_two_player(g, v0, spec, cap)?;
        let mut doc = io::strategy_to_json(g, &s.strategy, ROUTE_REDUCTION);
        doc["initial_credit"] = io::int_value(&s.credit);
        return Ok((doc, StrategyHandle::Moore(s.strategy), s.credit));
    }
    let plan = build_infinite_plan(g, v0, spec, cap)?;
    let c0 = BigInt::from(plan.d0);
    Ok((
        io::plan_to_json(&plan, "infinite-plan"),
        StrategyHandle::InfinitePlan(Box::new(plan)),
        c0,
    ))
}

fn not_winning(g: &GameStructure, v0: usize) -> Error {
    Error::Precondition(format!("player 1 does not win from `{}`", g.id(v0)))
}

fn handle(
    arg: &str,
    player: Player,
    g: &GameStructure,
    v0: usize,
    spec: &ObjectiveSpec,
) -> Result<(StrategyHandle, Option<BigInt>)> {
    if let Some(seed) = arg.strip_prefix("random:") {
        let seed = seed
            .parse()
            .map_err(|_| Error::Precondition(format!("bad seed `{seed}`")))?;
        return Ok((StrategyHandle::UniformRandom(seed), None));
    }
    match arg {
        "stdin" => Ok((StrategyHandle::Interactive, None)),
        "empty" => Ok((StrategyHandle::Moore(MooreStrategy::empty(g, player)), None)),
        "schedule" | "plan" | "synthesized" => {
            if player != Player::P1 {
                let s = spoiling_strategy(g, v0, spec)?.ok_or_else(|| {
                    Error::Precondition("player 2 has no spoiling strategy".into())
                })?;
                return Ok((StrategyHandle::Moore(s), None));
            }
            let (_, h, c0) = synthesize_p1(g, v0, spec, None)?;
            Ok((h, Some(c0)))
        }
        path => {
            let s = io::parse_strategy(g, &std::fs::read_to_string(path)?)?;
            if s.player != player {
                return Err(Error::InvalidStrategy(format!(
                    "`{path}` is a strategy of player {}",
                    s.player.number()
                )));
            }
            Ok((StrategyHandle::Moore(s), None))
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.cmd {
        Command::Validate { game } => {
            let g = io::parse_game(&std::fs::read_to_string(&game)?)?;
            emit(
                &json!({
                    "route": "validate",
                    "vertices": g.num_vertices(),
                    "edges": g.num_edges(),
                    "max_abs_weight": io::int_value(g.max_abs_weight()),
                    "one_player": g.is_one_player(),
                    "initial": g.initial().map(|v| g.id(v)),
                }),
                None,
            )?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Solve {
            game,
            objective,
            route,
            cap,
        } => {
            let (g, v0) = read_game(&game)?;
            let v = solve(&g, v0, &objective.spec()?, route, cap)?;
            emit(&io::verdict_to_json(&g, &v), None)?;
            Ok(exit_for(v.answer))
        }
        Command::Synthesize {
            game,
            player,
            objective,
            cap,
            output,
        } => {
            let (g, v0) = read_game(&game)?;
            let spec = objective.spec()?;
            let doc = match player {
                1 => synthesize_p1(&g, v0, &spec, cap)?.0,
                2 => {
                    let s = spoiling_strategy(&g, v0, &spec)?.ok_or_else(|| {
                        Error::Precondition(
                            "player 1 wins; player 2 has no spoiling strategy".into(),
                        )
                    })?;
                    io::strategy_to_json(&g, &s, ROUTE_ENUMERATION)
                }
                p => {
                    return Err(Error::Precondition(format!(
                        "player must be 1 or 2, found {p}"
                    )))
                }
            };
            emit(&doc, output.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Simulate {
            game,
            s1,
            s2,
            steps,
            credit,
            stride,
            objective,
            output,
        } => {
            let (g, v0) = read_game(&game)?;
            let spec = objective.spec()?;
            let (h1, c1) = handle(&s1, Player::P1, &g, v0, &spec)?;
            let (h2, _) = handle(&s2, Player::P2, &g, v0, &spec)?;
            let c0 = credit.or(c1).unwrap_or_default();
            let t = simulate_with_stride(&g, v0, h1, h2, steps, &c0, stride)?;
            emit(&io::trace_to_json(&g, &t), output.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Reduce { game, output, map } => {
            let g = io::parse_game(&std::fs::read_to_string(&game)?)?;
            let (meg, m) = to_energy4(&g)?;
            emit(
                &io::energy_game_to_json(&meg, ROUTE_REDUCTION),
                output.as_deref(),
            )?;
            if let Some(p) = map {
                emit(&io::gadget_map_to_json(&g, &meg, &m), Some(&p))?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::OracleCheck {
            dir,
            max_vertices,
            cap,
        } => {
            let mut files: Vec<PathBuf> = std::fs::read_dir(&dir)?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.extension().is_some_and(|x| x == "json"))
                .collect();
            files.sort();
            let (mut checked, mut skipped, mut unknown) = (0, 0, 0);
            let mut failures = Vec::new();
            for f in &files {
                let (g, v0) = read_game(f)?;
                if g.num_vertices() > max_vertices {
                    skipped += 1;
                    continue;
                }
                let c = cross_check(&g, v0, cap)?;
                checked += 1;
                unknown += c.reduction_unknown;
                for d in c.disagreements() {
                    failures.push(json!({"file": f.display().to_string(), "check": d}));
                }
            }
            let clean = failures.is_empty();
            emit(
                &json!({
                    "route": "oracle-check",
                    "checked": checked,
                    "skipped": skipped,
                    "reduction_unknown": unknown,
                    "disagreements": failures,
                }),
                None,
            )?;
            Ok(if clean {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
    }
}
