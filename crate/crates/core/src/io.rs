//! JSON documents: games, d-dimensional energy games, verdicts, strategies,
//! schedules, plans, gadget maps and traces.
//!
//! Integers that fit in 64 bits are written as JSON numbers, larger ones as
//! decimal strings. Both forms are accepted on input.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Map, Value};

use crate::cycles::{CycleWitness, MulticycleWitness};
use crate::error::{Error, Result};
use crate::game::{Answer, Certificate, Edge, GameStructure, Player, Verdict, Weight2};
use crate::graph::MooreStrategy;
use crate::multi_energy::{MEdge, MultiEnergyGame};
use crate::one_player::{ScheduleKind, ScheduleStrategy};
use crate::reduction::GadgetMap;
use crate::sim::TraceReport;
use crate::two_player::InfiniteStrategyPlan;

fn parse_value(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::Syntax {
        line: e.line(),
        column: e.column(),
        msg: e.to_string(),
    })
}

fn malformed(msg: impl Into<String>) -> Error {
    Error::Malformed(msg.into())
}

fn field<'a>(obj: &'a Value, key: &str) -> Result<&'a Value> {
    obj.get(key)
        .ok_or_else(|| malformed(format!("missing field `{key}`")))
}

fn as_str<'a>(v: &'a Value, what: &str) -> Result<&'a str> {
    v.as_str()
        .ok_or_else(|| malformed(format!("`{what}` must be a string")))
}

fn as_array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array()
        .ok_or_else(|| malformed(format!("`{what}` must be an array")))
}

/// An integer given as a JSON number or a decimal string.
pub fn parse_int(v: &Value) -> Result<BigInt> {
    let text = match v {
        Value::Number(n) => n.to_string(),
        Value::String(s) => s.trim().to_string(),
        other => return Err(Error::NonIntegerWeight(other.to_string())),
    };
    text.parse::<BigInt>()
        .map_err(|_| Error::NonIntegerWeight(text))
}

pub fn int_value(x: &BigInt) -> Value {
    match i64::try_from(x) {
        Ok(small) => json!(small),
        Err(_) => json!(x.to_string()),
    }
}

pub fn rational_value(q: &BigRational) -> Value {
    json!(q.to_string())
}

fn parse_owner(v: &Value) -> Result<Player> {
    match v.as_u64() {
        Some(1) => Ok(Player::P1),
        Some(2) => Ok(Player::P2),
        _ => Err(malformed(format!("owner must be 1 or 2, found {v}"))),
    }
}

struct RawGame {
    vertices: Vec<(String, Player)>,
    edges: Vec<(usize, usize, Vec<BigInt>)>,
    initial: Option<usize>,
}

fn parse_raw(text: &str) -> Result<RawGame> {
    let doc = parse_value(text)?;
    let mut vertices = Vec::new();
    let mut index = std::collections::HashMap::new();
    for v in as_array(field(&doc, "vertices")?, "vertices")? {
        let id = as_str(field(v, "id")?, "id")?.to_string();
        let owner = parse_owner(field(v, "owner")?)?;
        if index.insert(id.clone(), vertices.len()).is_some() {
            return Err(Error::DuplicateVertex(id));
        }
        vertices.push((id, owner));
    }
    let lookup = |id: &str| {
        index
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownVertex(id.to_string()))
    };
    let mut edges = Vec::new();
    for e in as_array(field(&doc, "edges")?, "edges")? {
        let from = lookup(as_str(field(e, "from")?, "from")?)?;
        let to = lookup(as_str(field(e, "to")?, "to")?)?;
        let w = as_array(field(e, "w")?, "w")?
            .iter()
            .map(parse_int)
            .collect::<Result<Vec<_>>>()?;
        edges.push((from, to, w));
    }
    let initial = match doc.get("initial") {
        None | Some(Value::Null) => None,
        Some(v) => Some(lookup(as_str(v, "initial")?)?),
    };
    Ok(RawGame {
        vertices,
        edges,
        initial,
    })
}

pub fn parse_game(text: &str) -> Result<GameStructure> {
    let raw = parse_raw(text)?;
    let mut edges = Vec::with_capacity(raw.edges.len());
    for (from, to, w) in raw.edges {
        let [w1, w2]: [BigInt; 2] = w.try_into().map_err(|w: Vec<BigInt>| Error::Dimension {
            expected: 2,
            found: w.len(),
        })?;
        edges.push(Edge {
            from,
            to,
            w: Weight2 { w1, w2 },
        });
    }
    GameStructure::new(raw.vertices, edges, raw.initial)
}

/// d-dimensional energy game; `d` is the length of the first weight vector.
pub fn parse_energy_game(text: &str) -> Result<MultiEnergyGame> {
    let raw = parse_raw(text)?;
    let dim = raw.edges.first().map_or(1, |e| e.2.len());
    let mut edges = Vec::with_capacity(raw.edges.len());
    for (from, to, w) in raw.edges {
        if w.len() != dim {
            return Err(Error::Dimension {
                expected: dim,
                found: w.len(),
            });
        }
        let w = w
            .iter()
            .map(|x| {
                i64::try_from(x)
                    .map_err(|_| Error::Overflow(format!("weight {x} does not fit in 64 bits")))
            })
            .collect::<Result<Vec<_>>>()?;
        edges.push(MEdge { from, to, w });
    }
    MultiEnergyGame::new(raw.vertices, edges, dim, raw.initial)
}

fn vertices_json(ids: &[String], owners: impl Iterator<Item = Player>) -> Value {
    Value::Array(
        ids.iter()
            .zip(owners)
            .map(|(id, p)| json!({"id": id, "owner": p.number()}))
            .collect(),
    )
}

pub fn game_to_json(g: &GameStructure) -> Value {
    let edges: Vec<Value> = g
        .edges()
        .iter()
        .map(|e| json!({"from": g.id(e.from), "to": g.id(e.to), "w": [int_value(&e.w.w1), int_value(&e.w.w2)]}))
        .collect();
    let mut m = Map::new();
    m.insert(
        "vertices".into(),
        vertices_json(g.ids(), g.owners().iter().copied()),
    );
    m.insert("edges".into(), Value::Array(edges));
    if let Some(v0) = g.initial() {
        m.insert("initial".into(), json!(g.id(v0)));
    }
    Value::Object(m)
}

pub fn energy_game_to_json(g: &MultiEnergyGame, route: &str) -> Value {
    let edges: Vec<Value> = g
        .edges()
        .iter()
        .map(|e| json!({"from": g.id(e.from), "to": g.id(e.to), "w": e.w}))
        .collect();
    let mut m = Map::new();
    m.insert("route".into(), json!(route));
    m.insert("dim".into(), json!(g.dim()));
    m.insert(
        "vertices".into(),
        vertices_json(g.ids(), (0..g.num_vertices()).map(|v| g.owner(v))),
    );
    m.insert("edges".into(), Value::Array(edges));
    if let Some(v0) = g.initial() {
        m.insert("initial".into(), json!(g.id(v0)));
    }
    Value::Object(m)
}

fn path_json(g: &GameStructure, path: &[usize]) -> Value {
    json!(path.iter().map(|&v| g.id(v)).collect::<Vec<_>>())
}

fn weight_json(w: &Weight2) -> Value {
    json!([int_value(&w.w1), int_value(&w.w2)])
}

pub fn cycle_witness_to_json(g: &GameStructure, w: &CycleWitness) -> Value {
    match w {
        CycleWitness::SimpleGood { cycle, weight } => {
            json!({"kind": "simple-good", "cycle": path_json(g, cycle), "weight": weight_json(weight)})
        }
        CycleWitness::TwoCycle(t) => json!({
            "kind": "two-cycle",
            "c": path_json(g, &t.c),
            "c_prime": path_json(g, &t.c_prime),
            "w_c": weight_json(&t.w_c),
            "w_c_prime": weight_json(&t.w_c_prime),
            "a": int_value(&t.a),
            "b": int_value(&t.b),
            "alpha": int_value(&t.alpha),
            "beta": int_value(&t.beta),
            "path_c_to_c_prime": path_json(g, &t.path_c_to_c_prime),
            "path_c_prime_to_c": path_json(g, &t.path_c_prime_to_c),
        }),
    }
}

pub fn multicycle_witness_to_json(g: &GameStructure, w: &MulticycleWitness) -> Value {
    match w {
        MulticycleWitness::SingleCycle { cycle, weight } => {
            json!({"kind": "single-cycle", "cycle": path_json(g, cycle), "weight": weight_json(weight)})
        }
        MulticycleWitness::TwoCycle {
            c,
            c_prime,
            w_c,
            w_c_prime,
            alpha,
            beta,
        } => json!({
            "kind": "two-cycle",
            "c": path_json(g, c),
            "c_prime": path_json(g, c_prime),
            "w_c": weight_json(w_c),
            "w_c_prime": weight_json(w_c_prime),
            "alpha": int_value(alpha),
            "beta": int_value(beta),
        }),
        MulticycleWitness::Flow { cycles, weight } => json!({
            "kind": "flow",
            "cycles": cycles.iter().map(|(c, k)| json!({"cycle": path_json(g, c), "multiplicity": int_value(k)})).collect::<Vec<_>>(),
            "weight": weight_json(weight),
        }),
    }
}

fn answer_str(a: Answer) -> &'static str {
    match a {
        Answer::Yes => "yes",
        Answer::No => "no",
        Answer::Unknown => "unknown",
    }
}

pub fn verdict_to_json(g: &GameStructure, v: &Verdict) -> Value {
    let certificate = match &v.certificate {
        Certificate::Cycle(w) => cycle_witness_to_json(g, w),
        Certificate::Multicycle(w) => multicycle_witness_to_json(g, w),
        Certificate::Spoiling(s) => json!({"kind": "spoiling", "strategy": strategy_body(g, s)}),
        Certificate::None => Value::Null,
    };
    json!({
        "route": v.route,
        "answer": answer_str(v.answer),
        "initial_credit": v.initial_credit.as_ref().map(int_value),
        "certificate": certificate,
    })
}

fn strategy_body(g: &GameStructure, s: &MooreStrategy) -> Value {
    let next: Vec<Value> = s
        .next
        .iter()
        .map(|row| {
            let mut m = Map::new();
            for (v, t) in row.iter().enumerate() {
                if let Some(t) = t {
                    if g.owner(v) == s.player {
                        m.insert(g.id(v).to_string(), json!(g.id(*t)));
                    }
                }
            }
            Value::Object(m)
        })
        .collect();
    json!({
        "player": s.player.number(),
        "memory": s.memory_size(),
        "initial": s.initial,
        "vertices": g.ids(),
        "update": s.update,
        "next": next,
    })
}

pub fn strategy_to_json(g: &GameStructure, s: &MooreStrategy, route: &str) -> Value {
    let mut v = strategy_body(g, s);
    v["route"] = json!(route);
    v
}

/// Reads a Moore machine written by [`strategy_to_json`]. Vertex ids are
/// resolved against `g`; moves of the other player are ignored.
pub fn parse_strategy(g: &GameStructure, text: &str) -> Result<MooreStrategy> {
    let doc = parse_value(text)?;
    let player = parse_owner(field(&doc, "player")?)?;
    let initial = field(&doc, "initial")?
        .as_u64()
        .ok_or_else(|| malformed("`initial` must be a state index"))? as usize;
    let order: Vec<usize> = match doc.get("vertices") {
        Some(vs) => as_array(vs, "vertices")?
            .iter()
            .map(|v| {
                let id = as_str(v, "vertices")?;
                g.vertex(id).ok_or_else(|| Error::UnknownVertex(id.into()))
            })
            .collect::<Result<_>>()?,
        None => (0..g.num_vertices()).collect(),
    };
    let n = g.num_vertices();
    let mut update = Vec::new();
    for row in as_array(field(&doc, "update")?, "update")? {
        let row = as_array(row, "update")?;
        if row.len() != order.len() {
            return Err(malformed("update rows must list one state per vertex"));
        }
        let mut r = vec![0; n];
        for (k, x) in row.iter().enumerate() {
            r[order[k]] = x
                .as_u64()
                .ok_or_else(|| malformed("update entries must be state indices"))?
                as usize;
        }
        update.push(r);
    }
    let mut next = Vec::new();
    for row in as_array(field(&doc, "next")?, "next")? {
        let row = row
            .as_object()
            .ok_or_else(|| malformed("next rows must be objects"))?;
        let mut r = vec![None; n];
        for (from, to) in row {
            let u = g
                .vertex(from)
                .ok_or_else(|| Error::UnknownVertex(from.clone()))?;
            let t = as_str(to, "next")?;
            r[u] = Some(g.vertex(t).ok_or_else(|| Error::UnknownVertex(t.into()))?);
        }
        next.push(r);
    }
    let s = MooreStrategy {
        player,
        initial,
        update,
        next,
    };
    s.validate(g)?;
    Ok(s)
}

pub fn schedule_to_json(g: &GameStructure, s: &ScheduleStrategy, route: &str) -> Value {
    let kind = match &s.kind {
        ScheduleKind::Periodic { cycle } => {
            json!({"kind": "periodic", "cycle": path_json(g, cycle)})
        }
        ScheduleKind::Rounds {
            c,
            c_prime,
            to_c,
            to_c_prime,
            alpha,
            beta,
            gamma,
        } => json!({
            "kind": "rounds",
            "c": path_json(g, c),
            "c_prime": path_json(g, c_prime),
            "to_c": path_json(g, to_c),
            "to_c_prime": path_json(g, to_c_prime),
            "alpha": alpha,
            "beta": beta,
            "gamma": gamma,
        }),
    };
    json!({
        "route": route,
        "access": path_json(g, &s.access),
        "schedule": kind,
        "initial_credit": int_value(&s.initial_credit),
    })
}

pub fn plan_to_json(plan: &InfiniteStrategyPlan, route: &str) -> Value {
    let g = &plan.game;
    let levels: Vec<Value> = (1..=plan.computed_levels())
        .filter_map(|i| plan.level_info(i))
        .map(|l| {
            json!({
                "level": l.level,
                "caps": l.caps,
                "credits": l.credits,
                "memory": l.memory_sizes().into_iter().map(|(v, m)| json!({"vertex": g.id(v), "size": m})).collect::<Vec<_>>(),
            })
        })
        .collect();
    json!({
        "route": route,
        "winning": g.ids(),
        "initial": g.id(plan.v0),
        "kappa": plan.kappa,
        "gamma": plan.gamma,
        "d0": plan.d0,
        "top_level": plan.top_level,
        "levels": levels,
    })
}

pub fn gadget_map_to_json(g: &GameStructure, meg: &MultiEnergyGame, map: &GadgetMap) -> Value {
    let gadgets: Vec<Value> = g
        .edges()
        .iter()
        .enumerate()
        .map(|(k, e)| {
            json!({
                "edge": [g.id(e.from), g.id(e.to)],
                "r": meg.id(map.r[k]),
                "s": meg.id(map.s[k]),
            })
        })
        .collect();
    json!({"route": "gadget-reduction", "original_vertices": map.num_original, "gadgets": gadgets})
}

pub fn trace_to_json(g: &GameStructure, t: &TraceReport) -> Value {
    let lasso = t.lasso.as_ref().map(|l| {
        json!({
            "prefix_len": l.prefix_len,
            "cycle_len": l.cycle_len,
            "cycle_weight": weight_json(&l.cycle_weight),
            "cycle_average": [rational_value(&l.average.0), rational_value(&l.average.1)],
        })
    });
    json!({
        "route": t.route,
        "steps": t.steps,
        "credit": int_value(&t.credit),
        "vertices": path_json(g, &t.vertices),
        "energy": t.energy.iter().map(int_value).collect::<Vec<_>>(),
        "averages": t.averages.iter().map(|(k, q)| json!({"step": k, "average": rational_value(q)})).collect::<Vec<_>>(),
        "lasso": lasso,
        "min_energy": int_value(&t.min_energy),
        "violations": t.violations,
        "first_violation": t.first_violation,
    })
}

/// Pretty JSON with a trailing newline.
pub fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}
