//! Boundary propagators, clockwise moves, the series and parallel families,
//! and the rotation scheduler.
//!
//! Ends sharing an edge e are ordered by d(y) = (y − e) mod n, where y is the
//! edge at the propagator's far end: a smaller d sits closer to vertex e+1.
//! This is the only order under which the shared ends do not cross.

use std::collections::BTreeSet;

use itertools::Itertools;
use serde::Serialize;

use super::poly::{SparsePolynomial, Var};
use super::{
    c_matrix, is_admissible, md, require_admissible, support, vertex_support, SymbolicMatrix, WilsonError,
    WilsonLoopDiagram,
};
use crate::coxeter::Permutation;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum BoundaryMove {
    /// The end reaches the far vertex; the row loses column `vertex`.
    Detach { row: usize, vertex: usize, support: BTreeSet<usize> },
    /// The end meets the end of `other` on `edge`; the two rows become
    /// proportional on columns edge, edge+1.
    Touch { row: usize, vertex: usize, other: usize, edge: usize },
}

impl BoundaryMove {
    pub fn row(&self) -> usize {
        match self {
            BoundaryMove::Detach { row, .. } | BoundaryMove::Touch { row, .. } => *row,
        }
    }
}

/// Edge carrying the end of p next to vertex v, if v ∈ V(p).
fn end_edge(p: (usize, usize), v: usize, n: usize) -> Option<(usize, usize)> {
    let (i, j) = p;
    for (e, far) in [(i, j), (j, i)] {
        if v == e || v == md(e as i64 + 1, n) {
            return Some((e, far));
        }
    }
    None
}

/// ∂_{p,v}(W) for the propagator in row `row`.
pub fn boundary_move(w: &WilsonLoopDiagram, row: usize, v: usize) -> Result<BoundaryMove, WilsonError> {
    let n = w.n();
    let p = w.propagator(row)?;
    let (e, far) = end_edge(p, v, n).ok_or(WilsonError::NotInSupport(v))?;
    let d = |y: usize| (y + n - e) % n;
    let toward_next = v == e;
    let dp = d(far);
    let mut between: Vec<(usize, usize)> = Vec::new();
    for (s, &(a, b)) in w.propagators().iter().enumerate() {
        if s == row {
            continue;
        }
        for (end, other_far) in [(a, b), (b, a)] {
            if end == e {
                let dq = d(other_far);
                if (toward_next && dq < dp) || (!toward_next && dq > dp) {
                    between.push((dq, s));
                }
            }
        }
    }
    if let Some(&(_, other)) = if toward_next { between.iter().max() } else { between.iter().min() } {
        return Ok(BoundaryMove::Touch { row, vertex: v, other, edge: e });
    }
    let mut moved: BTreeSet<usize> = vertex_support(p, n);
    moved.remove(&v);
    for size in 2..=w.k() {
        for rows in (0..w.k()).combinations(size) {
            if !rows.contains(&row) {
                continue;
            }
            let others: Vec<usize> = rows.iter().copied().filter(|&r| r != row).collect();
            let mut s = support(w, &others);
            s.extend(moved.iter().copied());
            if s.len() < size + 3 {
                let labels: Vec<usize> = rows.iter().map(|r| r + 1).collect();
                return Err(WilsonError::Rejected(format!(
                    "propagators {labels:?} would be supported on {} < {} vertices",
                    s.len(),
                    size + 3
                )));
            }
        }
    }
    Ok(BoundaryMove::Detach { row, vertex: v, support: moved })
}

pub fn boundary_minor(w: &WilsonLoopDiagram, row: usize, v: usize) -> Result<SparsePolynomial, WilsonError> {
    let c = |r: usize, q: usize| SparsePolynomial::var(Var::C(r + 1, q));
    Ok(match boundary_move(w, row, v)? {
        BoundaryMove::Detach { row, vertex, .. } => c(row, vertex),
        BoundaryMove::Touch { row, other, edge, .. } => {
            let e1 = md(edge as i64 + 1, w.n());
            &(&c(row, edge) * &c(other, e1)) - &(&c(other, edge) * &c(row, e1))
        }
    })
}

/// C(∂_{p,v}(W)): the limit of C(W) where the boundary minor vanishes.
pub fn boundary_matrix(w: &WilsonLoopDiagram, mv: &BoundaryMove) -> SymbolicMatrix {
    let mut m = c_matrix(w);
    match *mv {
        BoundaryMove::Detach { row, vertex, .. } => m.rows[row][vertex - 1] = SparsePolynomial::zero(),
        BoundaryMove::Touch { row, other, edge, .. } => {
            for col in [edge, md(edge as i64 + 1, w.n())] {
                m.rows[row][col - 1] = &SparsePolynomial::var(Var::T) * &SparsePolynomial::var(Var::C(other + 1, col));
            }
        }
    }
    m
}

/// Zero pattern of a boundary matrix, independent of row order: sorted row
/// supports plus the relation (edge, support of p, support of q).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct BoundaryPattern {
    pub supports: Vec<BTreeSet<usize>>,
    pub relation: Option<(usize, BTreeSet<usize>, BTreeSet<usize>)>,
}

pub fn boundary_pattern(w: &WilsonLoopDiagram, mv: &BoundaryMove) -> BoundaryPattern {
    let mut rows: Vec<BTreeSet<usize>> = (0..w.k()).map(|r| support(w, &[r])).collect();
    let relation = match mv {
        BoundaryMove::Detach { row, vertex, .. } => {
            rows[*row].remove(vertex);
            None
        }
        BoundaryMove::Touch { row, other, edge, .. } => {
            let (a, b) = (rows[*row].clone(), rows[*other].clone());
            Some((*edge, a.clone().min(b.clone()), a.max(b)))
        }
    };
    rows.sort();
    BoundaryPattern { supports: rows, relation }
}

/// All accepted boundary moves, by row then vertex.
pub fn boundary_moves(w: &WilsonLoopDiagram) -> Vec<BoundaryMove> {
    (0..w.k())
        .flat_map(|r| vertex_support(w.propagators()[r], w.n()).into_iter().map(move |v| (r, v)))
        .filter_map(|(r, v)| boundary_move(w, r, v).ok())
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundaryWitness {
    pub left: BoundaryMove,
    pub right: BoundaryMove,
}

/// Pairs of boundary moves of W and W′ with equal boundary zero patterns.
pub fn shares_boundary(w: &WilsonLoopDiagram, w2: &WilsonLoopDiagram) -> Vec<BoundaryWitness> {
    if w.n() != w2.n() || w.k() != w2.k() {
        return Vec::new();
    }
    let right: Vec<(BoundaryMove, BoundaryPattern)> =
        boundary_moves(w2).into_iter().map(|m| (m.clone(), boundary_pattern(w2, &m))).collect();
    let mut out = Vec::new();
    for left in boundary_moves(w) {
        let pl = boundary_pattern(w, &left);
        for (rm, pr) in &right {
            if *pr == pl {
                out.push(BoundaryWitness { left: left.clone(), right: rm.clone() });
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum End {
    /// The smaller label of the stored pair.
    I,
    J,
}

pub fn is_short(p: (usize, usize), n: usize) -> bool {
    let d = (p.1 + n - p.0) % n;
    d == 2 || d + 2 == n
}

/// Moves p clockwise: both ends if its ends are two edges apart, otherwise
/// the chosen end. The result must be admissible.
pub fn clockwise_move(w: &WilsonLoopDiagram, row: usize, end: End) -> Result<WilsonLoopDiagram, WilsonError> {
    let n = w.n();
    let (i, j) = w.propagator(row)?;
    let dec = |x: usize| md(x as i64 - 1, n);
    let moved = if is_short((i, j), n) {
        (dec(i), dec(j))
    } else {
        match end {
            End::I => (dec(i), j),
            End::J => (i, dec(j)),
        }
    };
    let out = w.with_propagator(row, moved);
    require_admissible(&out).map_err(|e| WilsonError::Rejected(e.to_string()))?;
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Family {
    Series,
    Parallel,
}

impl std::str::FromStr for Family {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "series" => Ok(Family::Series),
            "parallel" => Ok(Family::Parallel),
            _ => Err(format!("unknown family {s:?}")),
        }
    }
}

/// (1,3), (3,5), …, (2k−1, 2k+1).
pub fn series_wld(k: usize, n: usize) -> Result<WilsonLoopDiagram, WilsonError> {
    if n <= 2 * k || n < k + 4 {
        return Err(WilsonError::Family(format!("series needs n > 2k and n ≥ k + 4, got k = {k}, n = {n}")));
    }
    let w = WilsonLoopDiagram::new(n, (1..=k).map(|r| (2 * r - 1, 2 * r + 1)).collect())?;
    require_admissible(&w)?;
    Ok(w)
}

/// (k, k+2), (k−1, k+3), …, (1, 2k+1): nested, innermost first.
pub fn parallel_wld(k: usize, n: usize) -> Result<WilsonLoopDiagram, WilsonError> {
    if n < 2 * k + 2 || n < k + 4 {
        return Err(WilsonError::Family(format!("parallel needs n ≥ 2k + 2 and n ≥ k + 4, got k = {k}, n = {n}")));
    }
    let w = WilsonLoopDiagram::new(n, (1..=k).map(|r| (k + 1 - r, k + 1 + r)).collect())?;
    require_admissible(&w)?;
    Ok(w)
}

/// Row r of the final diagram carries the propagator that started in row
/// `target[r]`.
pub fn family_targets(family: Family, k: usize) -> Vec<usize> {
    match family {
        Family::Series => (0..k).map(|r| (r + k - 1) % k).collect(),
        Family::Parallel => (0..k).map(|r| k - 1 - r).collect(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rotation {
    pub diagrams: Vec<WilsonLoopDiagram>,
    /// Row moved at each step.
    pub moved_rows: Vec<usize>,
    /// σ(r) = 1 + the initial row whose propagator ends in row r.
    pub sigma: Permutation,
    /// Whether single-end moves of propagators two edges long were needed.
    pub relaxed: bool,
}

struct Schedule {
    n: usize,
    pos: Vec<[usize; 2]>,
    rem: Vec<[usize; 2]>,
}

impl Schedule {
    fn candidates(&self, r: usize, end: usize, relaxed: bool) -> Vec<([usize; 2], [usize; 2])> {
        let [i, j] = self.pos[r];
        let dec = |x: usize| md(x as i64 - 1, self.n);
        let mut out = Vec::new();
        if is_short((i, j), self.n) {
            out.push(([dec(i), dec(j)], [1, 1]));
            if relaxed {
                out.push(if end == 0 { ([dec(i), j], [1, 0]) } else { ([i, dec(j)], [0, 1]) });
            }
        } else {
            let mut q = [i, j];
            q[end] = dec(q[end]);
            out.push((q, if end == 0 { [1, 0] } else { [0, 1] }));
        }
        out
    }

    fn diagram(&self) -> WilsonLoopDiagram {
        WilsonLoopDiagram::new(self.n, self.pos.iter().map(|p| (p[0], p[1])).collect()).expect("labels in range")
    }

    /// First end in (label, row, end) order with distance left and an
    /// admissible move.
    fn step(&mut self, relaxed: bool) -> Option<usize> {
        let k = self.pos.len();
        let ends = (0..k).flat_map(|r| [(self.pos[r][0], r, 0), (self.pos[r][1], r, 1)]).sorted();
        for (_, r, end) in ends {
            if self.rem[r][end] == 0 {
                continue;
            }
            for (np, used) in self.candidates(r, end, relaxed) {
                if self.rem[r][0] < used[0] || self.rem[r][1] < used[1] {
                    continue;
                }
                let mut trial = self.pos.clone();
                trial[r] = np;
                let w = WilsonLoopDiagram::new(self.n, trial.iter().map(|p| (p[0], p[1])).collect()).ok()?;
                if is_admissible(&w) {
                    self.pos = trial;
                    self.rem[r][0] -= used[0];
                    self.rem[r][1] -= used[1];
                    return Some(r);
                }
            }
        }
        None
    }
}

fn run_schedule(
    w: &WilsonLoopDiagram,
    rem: Vec<[usize; 2]>,
    relaxed: bool,
) -> Result<(Vec<WilsonLoopDiagram>, Vec<usize>), String> {
    let mut s = Schedule { n: w.n(), pos: w.propagators().iter().map(|&(i, j)| [i, j]).collect(), rem };
    let mut diagrams = vec![w.clone()];
    let mut moved = Vec::new();
    while s.rem.iter().flatten().any(|&x| x > 0) {
        match s.step(relaxed) {
            Some(r) => {
                moved.push(r);
                diagrams.push(s.diagram());
            }
            None => return Err(format!("no valid move from {:?} with distances {:?}", s.pos, s.rem)),
        }
    }
    Ok((diagrams, moved))
}

/// Rotates the propagators clockwise until row r holds the propagator that
/// started in row target[r]. Literal clockwise moves are tried first; a
/// second pass also lets a propagator two edges long move one end.
pub fn rotation_sequence(w: &WilsonLoopDiagram, family: Family) -> Result<Rotation, WilsonError> {
    require_admissible(w)?;
    let n = w.n();
    let k = w.k();
    let target = family_targets(family, k);
    let props = w.propagators();
    let everyone_fixed = target.iter().enumerate().all(|(r, &t)| r == t);
    let choices: Vec<[[usize; 2]; 2]> = (0..k)
        .map(|r| {
            if everyone_fixed {
                return [[n, n], [n, n]];
            }
            let (a, b) = props[r];
            let (ta, tb) = props[target[r]];
            let dist = |x: usize, y: usize| (x + n - y) % n;
            let mut opts = [[dist(a, ta), dist(b, tb)], [dist(a, tb), dist(b, ta)]];
            opts.sort_by_key(|d| (d[0].abs_diff(d[1]), d[0] + d[1]));
            opts
        })
        .collect();
    let mut last = String::new();
    for relaxed in [false, true] {
        for pick in 0..1usize << k {
            let rem = (0..k).map(|r| choices[r][pick >> r & 1]).collect();
            match run_schedule(w, rem, relaxed) {
                Ok((diagrams, moved_rows)) => {
                    let sigma = Permutation::new(target.iter().map(|t| t + 1).collect()).expect("a permutation");
                    return Ok(Rotation { diagrams, moved_rows, sigma, relaxed });
                }
                Err(e) => last = e,
            }
        }
    }
    Err(WilsonError::Stuck(last))
}
