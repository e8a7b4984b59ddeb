//! Go-networks: directed networks on the + and • boxes of a diagram whose
//! signed vertex-disjoint flows give Plücker coordinates.
//!
//! Every internal vertex receives one horizontal edge from the nearest +
//! box to its right (or from the source at the row's end) and sends one
//! vertical edge to the nearest + box below it (or to the sink at the
//! column's foot). Stone boxes are skipped over. Geometry uses doubled
//! integer coordinates: box (i, j) sits at (-2j, -2i); boundary vertices sit
//! half a box outside the grid.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::diagrams::{FerrersShape, Fill, GoDiagram, Square, Subset};
use crate::exact::{k_subsets, q, qf, Q};
use crate::plucker::{PluckerVector, PointMatrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NetworkError {
    #[error("missing weight for box {0:?}")]
    MissingWeight(Square),
    #[error("zero weight on the edge into + box {0:?}")]
    ZeroPlusWeight(Square),
    #[error("weight given for box {0:?}, which has no incoming edge")]
    StrayWeight(Square),
    #[error("no shifted-Gale maximum among reachable subsets")]
    NoMaximum,
    #[error("box {0:?} is not in the shape")]
    NoSuchBox(Square),
    #[error("realization needs a •-free diagram")]
    HasBlackStones,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Vertex {
    Boundary(usize),
    Internal(Square),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeKind {
    Horizontal,
    Vertical,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Point {
    pub x: i64,
    pub y: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub from: Vertex,
    pub to: Vertex,
    pub kind: EdgeKind,
    pub start: Point,
    pub end: Point,
}

impl Edge {
    /// The box whose weight the edge carries.
    pub fn weight_box(&self) -> Option<Square> {
        match (self.kind, self.to) {
            (EdgeKind::Horizontal, Vertex::Internal(b)) => Some(b),
            _ => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct GoNetwork {
    diagram: GoDiagram,
    edges: Vec<Edge>,
    out: BTreeMap<Vertex, Vec<usize>>,
}

impl GoNetwork {
    pub fn diagram(&self) -> &GoDiagram {
        &self.diagram
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn sources(&self) -> &[usize] {
        self.diagram.shape().vertical_steps()
    }

    /// Boxes carrying a weight: the internal vertices.
    pub fn weighted_boxes(&self) -> Vec<Square> {
        internal_boxes(&self.diagram)
    }

    fn out_edges(&self, v: Vertex) -> &[usize] {
        self.out.get(&v).map_or(&[], |e| e.as_slice())
    }

    pub fn to_json(&self) -> serde_json::Value {
        let vertex = |v: &Vertex| match v {
            Vertex::Boundary(l) => serde_json::json!({ "boundary": l }),
            Vertex::Internal((i, j)) => serde_json::json!({ "box": [i, j] }),
        };
        let mut vertices: Vec<serde_json::Value> =
            (1..=self.diagram.n()).map(|l| vertex(&Vertex::Boundary(l))).collect();
        vertices.extend(internal_boxes(&self.diagram).iter().map(|&b| vertex(&Vertex::Internal(b))));
        let edges: Vec<serde_json::Value> = self
            .edges
            .iter()
            .map(|e| {
                serde_json::json!({
                    "from": vertex(&e.from),
                    "to": vertex(&e.to),
                    "kind": if e.kind == EdgeKind::Horizontal { "horizontal" } else { "vertical" },
                    "span": [[e.start.x, e.start.y], [e.end.x, e.end.y]],
                    "weight_box": e.weight_box().map(|(i, j)| vec![i, j]),
                })
            })
            .collect();
        serde_json::json!({ "vertices": vertices, "edges": edges })
    }
}

fn internal_boxes(d: &GoDiagram) -> Vec<Square> {
    d.shape().reading_order().into_iter().filter(|&b| d.fill(b) != Some(Fill::WhiteStone)).collect()
}

fn box_point((i, j): Square) -> Point {
    Point { x: -2 * j as i64, y: -2 * i as i64 }
}

fn source_point(shape: &FerrersShape, i: usize) -> Point {
    let rightmost = shape.row(i).iter().map(|b| b.1).min().unwrap_or(i);
    Point { x: -2 * rightmost as i64 + 1, y: -2 * i as i64 }
}

fn sink_point(shape: &FerrersShape, j: usize) -> Point {
    let lowest = shape.column(j).iter().map(|b| b.0).max().unwrap_or(j);
    Point { x: -2 * j as i64, y: -2 * lowest as i64 - 1 }
}

/// Works on any filling; validity is the caller's concern.
pub fn build_network(d: &GoDiagram) -> GoNetwork {
    let shape = d.shape();
    let mut edges = Vec::new();
    for v in internal_boxes(d) {
        let (i, j) = v;
        let right = shape
            .row(i)
            .into_iter()
            .filter(|&(_, j2)| j2 < j && d.fill((i, j2)) == Some(Fill::Plus))
            .max_by_key(|b| b.1);
        let (from, start) = match right {
            Some(u) => (Vertex::Internal(u), box_point(u)),
            None => (Vertex::Boundary(i), source_point(shape, i)),
        };
        edges.push(Edge { from, to: Vertex::Internal(v), kind: EdgeKind::Horizontal, start, end: box_point(v) });
        let below = shape
            .column(j)
            .into_iter()
            .filter(|&(i2, _)| i2 > i && d.fill((i2, j)) == Some(Fill::Plus))
            .min_by_key(|b| b.0);
        let (to, end) = match below {
            Some(w) => (Vertex::Internal(w), box_point(w)),
            None => (Vertex::Boundary(j), sink_point(shape, j)),
        };
        edges.push(Edge { from: Vertex::Internal(v), to, kind: EdgeKind::Vertical, start: box_point(v), end });
    }
    let mut out: BTreeMap<Vertex, Vec<usize>> = BTreeMap::new();
    for (id, e) in edges.iter().enumerate() {
        out.entry(e.from).or_default().push(id);
    }
    GoNetwork { diagram: d.clone(), edges, out }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Path {
    pub source: usize,
    pub sink: usize,
    pub edges: Vec<usize>,
}

/// Vertex-disjoint paths from I \ J onto J \ I, in source order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Family {
    pub paths: Vec<Path>,
}

struct FlowSearch<'a> {
    net: &'a GoNetwork,
    sources: Vec<usize>,
    sinks: BTreeSet<usize>,
    occupied: BTreeSet<Vertex>,
    current: Vec<Path>,
    found: Vec<Family>,
    stop_at_first: bool,
}

impl FlowSearch<'_> {
    fn run(&mut self, idx: usize) -> bool {
        if idx == self.sources.len() {
            self.found.push(Family { paths: self.current.clone() });
            return self.stop_at_first;
        }
        let s = self.sources[idx];
        let mut trail = Vec::new();
        self.walk(idx, s, Vertex::Boundary(s), &mut trail)
    }

    fn walk(&mut self, idx: usize, source: usize, at: Vertex, trail: &mut Vec<usize>) -> bool {
        for &e in self.net.out_edges(at) {
            let to = self.net.edges[e].to;
            if self.occupied.contains(&to) {
                continue;
            }
            trail.push(e);
            match to {
                Vertex::Boundary(t) => {
                    if self.sinks.contains(&t) {
                        self.occupied.insert(to);
                        let interior: Vec<Vertex> = trail.iter().map(|&x| self.net.edges[x].to).collect();
                        self.occupied.extend(interior.iter().copied());
                        self.current.push(Path { source, sink: t, edges: trail.clone() });
                        let done = self.run(idx + 1);
                        self.current.pop();
                        for v in interior {
                            self.occupied.remove(&v);
                        }
                        if done {
                            trail.pop();
                            return true;
                        }
                    }
                }
                Vertex::Internal(_) => {
                    self.occupied.insert(to);
                    let done = self.walk(idx, source, to, trail);
                    self.occupied.remove(&to);
                    if done {
                        trail.pop();
                        return true;
                    }
                }
            }
            trail.pop();
        }
        false
    }
}

fn search(net: &GoNetwork, j: &[usize], stop_at_first: bool) -> Vec<Family> {
    let i = net.sources();
    if j.len() != i.len() {
        return Vec::new();
    }
    let sources: Vec<usize> = i.iter().copied().filter(|x| !j.contains(x)).collect();
    let sinks: BTreeSet<usize> = j.iter().copied().filter(|x| !i.contains(x)).collect();
    let mut occupied: BTreeSet<Vertex> = i.iter().map(|&x| Vertex::Boundary(x)).collect();
    occupied.extend(sources.iter().map(|&x| Vertex::Boundary(x)));
    let mut fs = FlowSearch { net, sources, sinks, occupied, current: Vec::new(), found: Vec::new(), stop_at_first };
    fs.run(0);
    fs.found
}

pub fn enumerate_flows(net: &GoNetwork, j: &[usize]) -> Vec<Family> {
    search(net, j, false)
}

pub fn has_flow(net: &GoNetwork, j: &[usize]) -> bool {
    !search(net, j, true).is_empty()
}

fn strictly_between(a: i64, b: i64, x: i64) -> bool {
    a.min(b) < x && x < a.max(b)
}

fn crosses(h: &Edge, v: &Edge) -> bool {
    h.kind == EdgeKind::Horizontal
        && v.kind == EdgeKind::Vertical
        && strictly_between(h.start.x, h.end.x, v.start.x)
        && strictly_between(v.start.y, v.end.y, h.start.y)
}

/// Number of strict crossings between a horizontal edge of one path and a
/// vertical edge of another.
pub fn crossing_count(net: &GoNetwork, family: &Family) -> usize {
    let mut c = 0;
    for (a, pa) in family.paths.iter().enumerate() {
        for (b, pb) in family.paths.iter().enumerate() {
            if a == b {
                continue;
            }
            for &h in &pa.edges {
                for &v in &pb.edges {
                    if crosses(&net.edges[h], &net.edges[v]) {
                        c += 1;
                    }
                }
            }
        }
    }
    c
}

pub fn flow_sign(net: &GoNetwork, family: &Family) -> i32 {
    if crossing_count(net, family).is_multiple_of(2) {
        1
    } else {
        -1
    }
}

#[derive(Clone, Debug)]
pub struct WeightedGoNetwork {
    network: GoNetwork,
    weights: BTreeMap<Square, Q>,
}

impl WeightedGoNetwork {
    pub fn new(network: GoNetwork, weights: BTreeMap<Square, Q>) -> Result<Self, NetworkError> {
        let boxes = network.weighted_boxes();
        for &b in &boxes {
            let w = weights.get(&b).ok_or(NetworkError::MissingWeight(b))?;
            if network.diagram.fill(b) == Some(Fill::Plus) && w.is_zero() {
                return Err(NetworkError::ZeroPlusWeight(b));
            }
        }
        if let Some(&stray) = weights.keys().find(|b| !boxes.contains(b)) {
            return Err(NetworkError::StrayWeight(stray));
        }
        Ok(WeightedGoNetwork { network, weights })
    }

    pub fn network(&self) -> &GoNetwork {
        &self.network
    }

    pub fn weights(&self) -> &BTreeMap<Square, Q> {
        &self.weights
    }

    fn path_weight(&self, p: &Path) -> Q {
        p.edges.iter().fold(Q::one(), |acc, &e| match self.network.edges[e].weight_box() {
            Some(b) => acc * &self.weights[&b],
            None => acc,
        })
    }

    pub fn coordinate(&self, j: &[usize]) -> Q {
        enumerate_flows(&self.network, j).iter().fold(Q::zero(), |acc, fam| {
            let w = fam.paths.iter().fold(Q::one(), |a, p| a * self.path_weight(p));
            acc + w * q(flow_sign(&self.network, fam) as i64)
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut j = self.network.to_json();
        let weights: Vec<serde_json::Value> = self
            .weights
            .iter()
            .map(|((i, jj), w)| serde_json::json!({ "box": [i, jj], "weight": crate::exact::format_q(w) }))
            .collect();
        j["weights"] = serde_json::Value::Array(weights);
        j
    }
}

pub fn plucker_of_network(wn: &WeightedGoNetwork) -> PluckerVector {
    let d = wn.network.diagram();
    let values = k_subsets(d.n(), d.k()).into_iter().map(|j| {
        let v = wn.coordinate(&j);
        (j, v)
    });
    PluckerVector::new(d.n(), d.k(), values.collect()).expect("the source set has coordinate 1")
}

/// The diagram D′: b becomes +, boxes of b^out and of b's row and column
/// become ○, the rest of b^in is kept.
pub fn modified_for_box(d: &GoDiagram, b: Square) -> Result<GoDiagram, NetworkError> {
    let shape = d.shape();
    if !shape.contains(b) {
        return Err(NetworkError::NoSuchBox(b));
    }
    let mut filling = d.filling().clone();
    for (&o, f) in filling.iter_mut() {
        if o == b {
            *f = Fill::Plus;
        } else if !FerrersShape::in_region(b, o) || o.0 == b.0 || o.1 == b.1 {
            *f = Fill::WhiteStone;
        }
    }
    Ok(GoDiagram::unchecked(shape.clone(), filling).expect("same boxes"))
}

/// The ⊴₁-maximal subset reachable by a flow in N(D′).
pub fn i_b_via_network(d: &GoDiagram, b: Square) -> Result<Subset, NetworkError> {
    let net = build_network(&modified_for_box(d, b)?);
    let n = d.n();
    let reachable: Vec<Subset> = k_subsets(n, d.k()).into_iter().filter(|j| has_flow(&net, j)).collect();
    reachable
        .iter()
        .find(|c| reachable.iter().all(|o| crate::coxeter::gale_leq(1, n, o, c).unwrap()))
        .cloned()
        .ok_or(NetworkError::NoMaximum)
}

#[derive(Clone, Debug)]
pub enum Weights {
    Explicit(BTreeMap<Square, Q>),
    /// Distinct nonzero rationals from a seeded generator.
    Seed(u64),
    /// Distinct positive rationals from a seeded generator.
    PositiveSeed(u64),
}

pub fn seeded_weights(boxes: &[Square], seed: u64, positive: bool) -> BTreeMap<Square, Q> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = BTreeSet::new();
    let mut out = BTreeMap::new();
    for &b in boxes {
        loop {
            let mut num: i64 = rng.gen_range(1..=997);
            if !positive && rng.gen_bool(0.5) {
                num = -num;
            }
            let den: i64 = rng.gen_range(1..=991);
            let w = qf(num, den);
            if seen.insert(w.clone()) {
                out.insert(b, w);
                break;
            }
        }
    }
    out
}

pub fn weighted(d: &GoDiagram, weights: Weights) -> Result<WeightedGoNetwork, NetworkError> {
    let net = build_network(d);
    let map = match weights {
        Weights::Explicit(m) => m,
        Weights::Seed(s) => seeded_weights(&net.weighted_boxes(), s, false),
        Weights::PositiveSeed(s) => seeded_weights(&net.weighted_boxes(), s, true),
    };
    WeightedGoNetwork::new(net, map)
}

pub fn sample_point(d: &GoDiagram, weights: Weights) -> Result<PluckerVector, NetworkError> {
    Ok(plucker_of_network(&weighted(d, weights)?))
}

/// Boundary-measurement matrix of a •-free weighted network: identity on the
/// source columns, and (−1)^{#sources strictly between i and j} times the
/// total path weight from i to j elsewhere.
pub fn realize_matrix(wn: &WeightedGoNetwork) -> Result<PointMatrix, NetworkError> {
    let d = wn.network.diagram();
    if d.count(Fill::BlackStone) > 0 {
        return Err(NetworkError::HasBlackStones);
    }
    let sources = d.shape().vertical_steps().to_vec();
    let n = d.n();
    let mut rows = Vec::new();
    for &i in &sources {
        let mut row = vec![Q::zero(); n];
        row[i - 1] = Q::one();
        for j in d.shape().horizontal_steps() {
            if j < i {
                continue;
            }
            let mut total = Q::zero();
            let mut trail = Vec::new();
            sum_paths(wn, Vertex::Boundary(i), j, Q::one(), &mut trail, &mut total);
            let between = sources.iter().filter(|&&x| i < x && x < j).count();
            row[j - 1] = if between % 2 == 0 { total } else { -total };
        }
        rows.push(row);
    }
    Ok(PointMatrix::new(rows).expect("identity on source columns"))
}

fn sum_paths(wn: &WeightedGoNetwork, at: Vertex, sink: usize, acc: Q, trail: &mut Vec<usize>, total: &mut Q) {
    for &e in wn.network.out_edges(at) {
        let edge = &wn.network.edges[e];
        let w = match edge.weight_box() {
            Some(b) => &acc * &wn.weights[&b],
            None => acc.clone(),
        };
        match edge.to {
            Vertex::Boundary(t) if t == sink => *total += w,
            Vertex::Boundary(_) => {}
            v @ Vertex::Internal(_) => {
                trail.push(e);
                sum_paths(wn, v, sink, w, trail, total);
                trail.pop();
            }
        }
    }
}
