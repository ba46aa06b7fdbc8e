//! Matroidal network coding over an error-free DAG.
//!
//! The source holds a flat `Ω ⊆ C(γ^ℓ)`; every node forwards, on each
//! outgoing edge, a uniformly random point of the closure of what it holds;
//! sinks decode the closure of what they receive. A vector RLNC simulator
//! runs the same network on `F_q^m` and, fed the same random stream,
//! reproduces the matroidal run under `Φ` draw for draw.

use crate::conjugacy::{self, ClassId, ClassLookup};
use crate::field::{Fe, FieldCtx, FieldError, Matrix};
use crate::matroid::{Flat, Matroid, MatroidError, Subspace};
use crate::minimal::PointSet;
use petgraph::algo::{has_path_connecting, toposort};
use petgraph::graph::{DiGraph, NodeIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NetsimError {
    #[error("SpecInvalid: {0}")]
    SpecInvalid(String),
    #[error("RankOutOfRange: rank {rank} not in 1..={m}")]
    RankOutOfRange { rank: usize, m: usize },
    #[error("EmptyInput: relay received no packets")]
    EmptyInput,
    #[error("MixedClasses: relay inputs lie in different conjugacy classes")]
    MixedClasses,
    #[error("OracleInapplicable: {0}")]
    OracleInapplicable(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Matroid(#[from] MatroidError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Source,
    Relay,
    Sink,
}

/// Node ids may be written as strings or integers.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum NodeId {
    Num(u64),
    Str(String),
}

impl std::fmt::Display for NodeId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            NodeId::Num(n) => write!(f, "{n}"),
            NodeId::Str(s) => f.write_str(s),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeSpec {
    pub id: NodeId,
    pub role: Role,
}

/// Message class: an index `ℓ` for `C(γ^ℓ)`, or `"zero"` for `C(0)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ClassSpec {
    Index(u32),
    Named(String),
}

/// A network description as read from JSON.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NetSpec {
    pub field: String,
    pub nodes: Vec<NodeSpec>,
    pub edges: Vec<(NodeId, NodeId)>,
    pub class: ClassSpec,
    pub rank: usize,
    pub trials: u64,
    pub seed: u64,
}

impl NetSpec {
    pub fn from_json(text: &str) -> Result<NetSpec, NetsimError> {
        serde_json::from_str(text).map_err(|e| NetsimError::SpecInvalid(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("specs serialize")
    }

    /// A random layered DAG: one source, `layers` relay layers and a sink
    /// layer, each of width `1..=max_width`. Every node has at least one
    /// edge from the previous layer; other consecutive-layer edges appear
    /// with probability 1/2.
    pub fn random_layered(
        field: &str,
        layers: usize,
        max_width: usize,
        class: u32,
        rank: usize,
        rng: &mut impl Rng,
    ) -> NetSpec {
        let mut nodes = vec![NodeSpec { id: NodeId::Num(0), role: Role::Source }];
        let mut edges = Vec::new();
        let mut prev = vec![0u64];
        for layer in 0..=layers {
            let role = if layer == layers { Role::Sink } else { Role::Relay };
            let width = rng.gen_range(1..=max_width);
            let mut current = Vec::with_capacity(width);
            for _ in 0..width {
                let id = nodes.len() as u64;
                nodes.push(NodeSpec { id: NodeId::Num(id), role });
                let forced = prev[rng.gen_range(0..prev.len())];
                for &p in &prev {
                    if p == forced || rng.gen_bool(0.5) {
                        edges.push((NodeId::Num(p), NodeId::Num(id)));
                    }
                }
                current.push(id);
            }
            prev = current;
        }
        NetSpec { field: field.to_string(), nodes, edges, class: ClassSpec::Index(class), rank, trials: 0, seed: 0 }
    }
}

/// A forwarded packet.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Packet {
    pub value: Fe,
    pub edge: usize,
    pub generation: u64,
}

/// A validated network ready to simulate.
#[derive(Clone)]
pub struct Network {
    matroid: Matroid,
    ids: Vec<NodeId>,
    roles: Vec<Role>,
    /// `(from, to)` node indices in file order.
    edges: Vec<(usize, usize)>,
    order: Vec<usize>,
    out_edges: Vec<Vec<usize>>,
    source: usize,
    sinks: Vec<usize>,
    class: ClassId,
    rank: usize,
    trials: u64,
    seed: u64,
}

impl Network {
    pub fn from_spec(spec: &NetSpec) -> Result<Network, NetsimError> {
        let invalid = |msg: String| NetsimError::SpecInvalid(msg);
        let ctx = Arc::new(FieldCtx::from_spec(&spec.field).map_err(|e| invalid(e.to_string()))?);
        let matroid = Matroid::new(ctx.clone()).map_err(|e| invalid(e.to_string()))?;

        let mut index = HashMap::new();
        for (i, n) in spec.nodes.iter().enumerate() {
            if index.insert(n.id.clone(), i).is_some() {
                return Err(invalid(format!("duplicate node id {}", n.id)));
            }
        }
        let sources: Vec<usize> = (0..spec.nodes.len()).filter(|&i| spec.nodes[i].role == Role::Source).collect();
        let [source] = sources[..] else {
            return Err(invalid(format!("expected exactly one source, found {}", sources.len())));
        };
        let sinks: Vec<usize> = (0..spec.nodes.len()).filter(|&i| spec.nodes[i].role == Role::Sink).collect();
        if sinks.is_empty() {
            return Err(invalid("no sink".into()));
        }

        let mut graph = DiGraph::<usize, usize>::new();
        let handles: Vec<NodeIndex> = (0..spec.nodes.len()).map(|i| graph.add_node(i)).collect();
        let mut edges = Vec::with_capacity(spec.edges.len());
        let mut out_edges = vec![Vec::new(); spec.nodes.len()];
        for (e, (from, to)) in spec.edges.iter().enumerate() {
            let lookup = |id: &NodeId| index.get(id).copied().ok_or_else(|| invalid(format!("edge {e} names unknown node {id}")));
            let (a, b) = (lookup(from)?, lookup(to)?);
            if b == source {
                return Err(invalid(format!("edge {e} enters the source")));
            }
            graph.add_edge(handles[a], handles[b], e);
            edges.push((a, b));
            out_edges[a].push(e);
        }
        let order: Vec<usize> = toposort(&graph, None)
            .map_err(|c| invalid(format!("cycle through node {}", spec.nodes[graph[c.node_id()]].id)))?
            .into_iter()
            .map(|h| graph[h])
            .collect();
        for &t in &sinks {
            if !has_path_connecting(&graph, handles[source], handles[t], None) {
                return Err(invalid(format!("sink {} is unreachable from the source", spec.nodes[t].id)));
            }
        }

        let m = ctx.m() as usize;
        let class = match &spec.class {
            ClassSpec::Index(l) if (*l as u64) < ctx.q() - 1 => ClassId::Nonzero(*l),
            ClassSpec::Index(l) => return Err(invalid(format!("class {l} out of range 0..={}", ctx.q() - 2))),
            ClassSpec::Named(s) if s == "zero" => ClassId::Zero,
            ClassSpec::Named(s) => return Err(invalid(format!("unknown class {s:?}"))),
        };
        let max_rank = if class == ClassId::Zero { 1 } else { m };
        if spec.rank > max_rank {
            return Err(invalid(format!("rank {} exceeds {max_rank}", spec.rank)));
        }
        Ok(Network {
            matroid,
            ids: spec.nodes.iter().map(|n| n.id.clone()).collect(),
            roles: spec.nodes.iter().map(|n| n.role).collect(),
            edges,
            order,
            out_edges,
            source,
            sinks,
            class,
            rank: spec.rank,
            trials: spec.trials,
            seed: spec.seed,
        })
    }

    pub fn from_json(text: &str) -> Result<Network, NetsimError> {
        Self::from_spec(&NetSpec::from_json(text)?)
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        self.matroid.ctx()
    }

    pub fn matroid(&self) -> &Matroid {
        &self.matroid
    }

    pub fn class(&self) -> ClassId {
        self.class
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn trials(&self) -> u64 {
        self.trials
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn sink_ids(&self) -> Vec<NodeId> {
        self.sinks.iter().map(|&t| self.ids[t].clone()).collect()
    }

    fn class_index(&self) -> Result<u32, NetsimError> {
        match self.class {
            ClassId::Nonzero(l) => Ok(l),
            ClassId::Zero => Err(NetsimError::OracleInapplicable("the zero class has no subspace preimage".into())),
        }
    }

    /// The message flat for trial randomness `rng`, with its preimage
    /// subspace for nonzero classes.
    pub fn draw_message(&self, rng: &mut impl Rng) -> Result<(Flat, Option<Subspace>), NetsimError> {
        match self.class {
            ClassId::Zero => {
                let pts = if self.rank == 0 { vec![] } else { vec![Fe::ZERO] };
                Ok((self.matroid.closure(&self.matroid.points(pts)), None))
            }
            ClassId::Nonzero(l) => {
                let v = if self.rank == 0 { Subspace::zero(self.ctx().m() as usize) } else { encode_subspace(self.ctx(), self.rank, rng)? };
                Ok((self.matroid.phi_in_class(&v, l)?, Some(v)))
            }
        }
    }

    /// One generation of the matroidal protocol.
    pub fn run_trial(&self, message: &Flat, generation: u64, rng: &mut impl Rng) -> Result<TrialReport, NetsimError> {
        let ctx = self.ctx();
        let lookup = ClassLookup::new(ctx);
        let preload: Vec<Fe> = match self.class {
            ClassId::Zero => message.points().elems().to_vec(),
            ClassId::Nonzero(l) => {
                let v = self.matroid.phi_inverse_in_class(message, l)?;
                let shift = ctx.gamma_pow(l as u64);
                v.basis()
                    .row_vecs()
                    .iter()
                    .map(|r| ctx.mul(shift, conjugacy::warp(ctx, ctx.uncoords(r).expect("F_q coordinates")).expect("nonzero row")))
                    .collect()
            }
        };
        let mut inbox: Vec<Vec<Packet>> = vec![Vec::new(); self.ids.len()];
        let mut forwarded = 0u64;
        let mut violations = 0u64;
        for &node in &self.order {
            let held: Vec<Fe> = if node == self.source {
                preload.clone()
            } else {
                let mut ps = std::mem::take(&mut inbox[node]);
                ps.sort_by_key(|p| p.edge);
                if self.roles[node] == Role::Sink {
                    inbox[node] = ps.clone();
                }
                ps.into_iter().map(|p| p.value).collect()
            };
            if held.is_empty() {
                continue;
            }
            for &e in &self.out_edges[node] {
                let value = relay_forward_with(ctx, &lookup, &held, rng)?;
                forwarded += 1;
                if !message.contains(value) {
                    violations += 1;
                }
                inbox[self.edges[e].1].push(Packet { value, edge: e, generation });
            }
        }
        let per_sink = self
            .sinks
            .iter()
            .map(|&t| {
                let received: Vec<Fe> = inbox[t].iter().map(|p| p.value).collect();
                let decoded = self.matroid.closure(&self.matroid.points(received.iter().copied()));
                let distance = self.matroid.dist(message, &decoded)?;
                Ok(SinkOutcome { id: self.ids[t].clone(), received, success: decoded == *message, distance, decoded })
            })
            .collect::<Result<_, NetsimError>>()?;
        Ok(TrialReport { generation, per_sink, forwarded, containment_violations: violations })
    }

    /// One generation of vector RLNC with message `V`, consuming the random
    /// stream exactly as [`Network::run_trial`] does for `γ^ℓ·Φ(V)`.
    pub fn rlnc_oracle_trial(&self, v: &Subspace, generation: u64, rng: &mut impl Rng) -> Result<RlncReport, NetsimError> {
        self.class_index()?;
        let ctx = self.ctx();
        let width = ctx.m() as usize;
        let mut inbox: Vec<Vec<(usize, Vec<Fe>)>> = vec![Vec::new(); self.ids.len()];
        let mut received: Vec<Vec<Vec<Fe>>> = vec![Vec::new(); self.ids.len()];
        let mut forwarded = 0u64;
        for &node in &self.order {
            let held: Vec<Vec<Fe>> = if node == self.source {
                v.basis().row_vecs()
            } else {
                let mut ps = std::mem::take(&mut inbox[node]);
                ps.sort_by_key(|(e, _)| *e);
                let vs: Vec<Vec<Fe>> = ps.into_iter().map(|(_, x)| x).collect();
                received[node] = vs.clone();
                vs
            };
            if held.is_empty() {
                continue;
            }
            for &e in &self.out_edges[node] {
                inbox[self.edges[e].1].push((e, rlnc_forward(ctx, &held, rng)?));
                forwarded += 1;
            }
        }
        let per_sink = self
            .sinks
            .iter()
            .map(|&t| {
                let decoded = Subspace::span(ctx, received[t].clone(), width);
                let distance = self.matroid.subspace_dist(v, &decoded)?;
                Ok(RlncSinkOutcome { id: self.ids[t].clone(), received: received[t].clone(), success: decoded == *v, distance, decoded })
            })
            .collect::<Result<_, NetsimError>>()?;
        Ok(RlncReport { generation, per_sink, forwarded })
    }

    /// Runs every trial, each on its own random stream.
    pub fn simulate(&self, oracle: Oracle) -> Result<SimReport, NetsimError> {
        if oracle == Oracle::Rlnc {
            self.class_index()?;
        }
        let outcomes: Vec<TrialSummary> = (0..self.trials)
            .into_par_iter()
            .map(|t| {
                let mut rng = trial_rng(self.seed, t);
                let (message, v) = self.draw_message(&mut rng)?;
                match oracle {
                    Oracle::Matroidal => {
                        let r = self.run_trial(&message, t, &mut rng)?;
                        Ok(TrialSummary {
                            sinks: r.per_sink.iter().map(|s| (s.success, s.distance)).collect(),
                            forwarded: r.forwarded,
                            violations: r.containment_violations,
                        })
                    }
                    Oracle::Rlnc => {
                        let v = v.expect("nonzero class");
                        let r = self.rlnc_oracle_trial(&v, t, &mut rng)?;
                        Ok(TrialSummary { sinks: r.per_sink.iter().map(|s| (s.success, s.distance)).collect(), forwarded: r.forwarded, violations: 0 })
                    }
                }
            })
            .collect::<Result<_, NetsimError>>()?;
        Ok(self.aggregate(&outcomes))
    }

    fn aggregate(&self, outcomes: &[TrialSummary]) -> SimReport {
        let n = outcomes.len();
        let rate = |k: usize| (n > 0).then(|| k as f64 / n as f64);
        let successes = outcomes.iter().filter(|o| o.sinks.iter().all(|s| s.0)).count();
        let total_distance: usize = outcomes.iter().flat_map(|o| o.sinks.iter().map(|s| s.1)).sum();
        let per_sink = self
            .sinks
            .iter()
            .enumerate()
            .map(|(i, &t)| {
                let ok = outcomes.iter().filter(|o| o.sinks[i].0).count();
                let dist: usize = outcomes.iter().map(|o| o.sinks[i].1).sum();
                SinkSummary { id: self.ids[t].clone(), successes: ok as u64, success_rate: rate(ok), mean_distance: (n > 0).then(|| dist as f64 / n as f64) }
            })
            .collect();
        SimReport {
            trials: n as u64,
            success_rate: rate(successes),
            mean_distance: (n > 0).then(|| total_distance as f64 / (n * self.sinks.len()) as f64),
            per_sink,
            forwarded: outcomes.iter().map(|o| o.forwarded).sum(),
            containment_violations: outcomes.iter().map(|o| o.violations).sum(),
        }
    }
}

struct TrialSummary {
    sinks: Vec<(bool, usize)>,
    forwarded: u64,
    violations: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Oracle {
    Matroidal,
    Rlnc,
}

#[derive(Clone, Debug)]
pub struct SinkOutcome {
    pub id: NodeId,
    /// Packets in edge order.
    pub received: Vec<Fe>,
    pub decoded: Flat,
    pub success: bool,
    pub distance: usize,
}

#[derive(Clone, Debug)]
pub struct TrialReport {
    pub generation: u64,
    pub per_sink: Vec<SinkOutcome>,
    pub forwarded: u64,
    pub containment_violations: u64,
}

impl TrialReport {
    pub fn success(&self) -> bool {
        self.per_sink.iter().all(|s| s.success)
    }
}

#[derive(Clone, Debug)]
pub struct RlncSinkOutcome {
    pub id: NodeId,
    pub received: Vec<Vec<Fe>>,
    pub decoded: Subspace,
    pub success: bool,
    pub distance: usize,
}

#[derive(Clone, Debug)]
pub struct RlncReport {
    pub generation: u64,
    pub per_sink: Vec<RlncSinkOutcome>,
    pub forwarded: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SinkSummary {
    pub id: NodeId,
    pub successes: u64,
    pub success_rate: Option<f64>,
    pub mean_distance: Option<f64>,
}

/// Aggregate over trials; rates are `None` when there are no trials.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SimReport {
    pub trials: u64,
    pub success_rate: Option<f64>,
    pub mean_distance: Option<f64>,
    pub per_sink: Vec<SinkSummary>,
    pub forwarded: u64,
    pub containment_violations: u64,
}

/// Stream `trial` of the ChaCha8 generator keyed by `seed`.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// A uniformly random `r`-dimensional subspace of `F_q^m`, drawn as `r`
/// uniformly random vectors each outside the span of the previous ones.
pub fn encode_subspace(ctx: &FieldCtx, r: usize, rng: &mut impl Rng) -> Result<Subspace, NetsimError> {
    let m = ctx.m() as usize;
    if r == 0 || r > m {
        return Err(NetsimError::RankOutOfRange { rank: r, m });
    }
    let q = ctx.q() as usize;
    let mut rows: Vec<Vec<Fe>> = Vec::with_capacity(r);
    while rows.len() < r {
        let v: Vec<Fe> = (0..m).map(|_| ctx.subfield()[rng.gen_range(0..q)]).collect();
        let mut candidate = rows.clone();
        candidate.push(v);
        if Matrix::from_rows(candidate.clone(), m).rank(ctx) == candidate.len() {
            rows = candidate;
        }
    }
    Ok(Subspace::span(ctx, rows, m))
}

/// A uniformly random rank-`r` flat of `C(γ^ℓ)`.
pub fn encode_message(matroid: &Matroid, l: u32, r: usize, rng: &mut impl Rng) -> Result<Flat, NetsimError> {
    let v = encode_subspace(matroid.ctx(), r, rng)?;
    Ok(matroid.phi_in_class(&v, l)?)
}

/// Draws coefficients in `F_q` for `h` inputs until `combine` is nonzero.
fn draw_combination<T>(ctx: &FieldCtx, h: usize, rng: &mut impl Rng, combine: impl Fn(&[Fe]) -> Option<T>) -> T {
    let q = ctx.q() as usize;
    loop {
        let coeffs: Vec<Fe> = (0..h).map(|_| ctx.subfield()[rng.gen_range(0..q)]).collect();
        if let Some(x) = combine(&coeffs) {
            return x;
        }
    }
}

/// A uniform random point of the closure of `in_packets`: lift each packet
/// to `a_i` with `α_i = γ^ℓ φ(a_i)`, draw a uniform nonzero `F_q`-combination
/// `a` of the lifts and emit `γ^ℓ φ(a)`. Packets equal to `0` forward `0`.
pub fn relay_forward(ctx: &FieldCtx, in_packets: &[Fe], rng: &mut impl Rng) -> Result<Fe, NetsimError> {
    relay_forward_with(ctx, &ClassLookup::new(ctx), in_packets, rng)
}

fn relay_forward_with(ctx: &FieldCtx, lookup: &ClassLookup, in_packets: &[Fe], rng: &mut impl Rng) -> Result<Fe, NetsimError> {
    let first = *in_packets.first().ok_or(NetsimError::EmptyInput)?;
    let class = lookup.class_of(ctx, first);
    if in_packets.iter().any(|&a| lookup.class_of(ctx, a) != class) {
        return Err(NetsimError::MixedClasses);
    }
    let l = match class {
        ClassId::Zero => return Ok(Fe::ZERO),
        ClassId::Nonzero(l) => l as u64,
    };
    let lifts: Vec<Fe> = in_packets
        .iter()
        .map(|&a| conjugacy::unwarp_method1(ctx, a, l).expect("class checked above"))
        .collect();
    let a = draw_combination(ctx, lifts.len(), rng, |c| {
        let a = c.iter().zip(&lifts).fold(Fe::ZERO, |acc, (&ci, &x)| ctx.add(acc, ctx.mul(ci, x)));
        (!a.is_zero()).then_some(a)
    });
    Ok(ctx.mul(ctx.gamma_pow(l), conjugacy::warp(ctx, a).expect("nonzero combination")))
}

/// Vector RLNC forwarding: each input is first scaled to its `F_q^*`
/// multiple with the smallest discrete log (the lift the matroidal relay
/// would compute), then a uniform nonzero combination is drawn.
pub fn rlnc_forward(ctx: &FieldCtx, in_vectors: &[Vec<Fe>], rng: &mut impl Rng) -> Result<Vec<Fe>, NetsimError> {
    if in_vectors.is_empty() {
        return Err(NetsimError::EmptyInput);
    }
    let width = ctx.m() as usize;
    let canon: Vec<Vec<Fe>> = in_vectors
        .iter()
        .map(|v| {
            let a = ctx.uncoords(v).expect("F_q coordinates");
            ctx.coords(conjugacy::canonical_multiple(ctx, a))
        })
        .collect();
    Ok(draw_combination(ctx, canon.len(), rng, |c| {
        let mut out = vec![Fe::ZERO; width];
        for (&ci, v) in c.iter().zip(&canon) {
            for (o, &x) in out.iter_mut().zip(v) {
                *o = ctx.add(*o, ctx.mul(ci, x));
            }
        }
        out.iter().any(|x| !x.is_zero()).then_some(out)
    }))
}

/// Distinct values in a packet list, as a point set.
pub fn packet_set(ctx: &Arc<FieldCtx>, packets: &[Fe]) -> PointSet {
    PointSet::new(ctx.clone(), packets.iter().copied())
}
