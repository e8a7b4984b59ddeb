//! Fibers of the column-deletion projection Gr(k, n+1) → Gr(k, n) over a
//! Deodhar component: new leftmost column n+1, one box per row.
//!
//! For a new-column box the boxes before it in canonical reading order are
//! exactly its b^in, so fillings are decided bottom to top from prefix
//! products alone.

use std::collections::BTreeMap;

use itertools::Itertools;
use num_traits::Zero;
use thiserror::Error;

use crate::coxeter::Permutation;
use crate::diagrams::{
    deodhar_description, has_le_property, i_b_formula, is_le_diagram, validate_filling, DiagramError, FerrersShape,
    Fill, GoDiagram, Square,
};
use crate::exact::{rank, Q};
use crate::plucker::{PluckerError, PluckerVector, PointMatrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FiberError {
    #[error("projection drops rank: the image lies in Gr(k-1, n)")]
    ProjectedRankDrop,
    #[error("point does not lie over the base component")]
    NotOverBase,
    #[error("expected a Plücker vector over {expected} labels, got {got}")]
    WrongSize { expected: usize, got: usize },
    #[error("base is not a Le-diagram")]
    NotLe,
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Plucker(#[from] PluckerError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberComponent {
    pub base: GoDiagram,
    pub extended: GoDiagram,
}

impl FiberComponent {
    /// Fills of the new column, top to bottom.
    pub fn new_column(&self) -> Vec<Fill> {
        let c = self.base.n() + 1;
        self.extended.shape().column(c).iter().map(|&b| self.extended.fill(b).unwrap()).collect()
    }
}

pub fn extended_shape(base: &FerrersShape) -> FerrersShape {
    FerrersShape::new(base.n() + 1, base.k(), base.vertical_steps().to_vec()).expect("same steps in a larger range")
}

/// Base filling plus the given new-column fills (top to bottom); unchecked.
fn extend_with(base: &GoDiagram, column: &[Fill]) -> GoDiagram {
    let shape = extended_shape(base.shape());
    let c = base.n() + 1;
    let mut filling: BTreeMap<Square, Fill> = base.filling().clone();
    for (&i, &f) in base.shape().vertical_steps().iter().zip(column) {
        filling.insert((i, c), f);
    }
    GoDiagram::unchecked(shape, filling).expect("every box filled")
}

/// Deletes the leftmost column n+1, recovering a diagram over [n].
pub fn delete_leftmost_column(ext: &GoDiagram) -> Result<GoDiagram, DiagramError> {
    let n = ext.n() - 1;
    let shape = FerrersShape::new(n, ext.k(), ext.shape().vertical_steps().to_vec())?;
    let filling = ext.filling().iter().filter(|(b, _)| b.1 != n + 1).map(|(&b, &f)| (b, f)).collect();
    GoDiagram::unchecked(shape, filling)
}

/// u_{b^in} for a new-column box of a (partially decided) extension.
fn prefix_stones(ext: &GoDiagram, b: Square) -> Permutation {
    let shape = ext.shape();
    shape.reading_order().into_iter().take_while(|&o| o != b).fold(Permutation::identity(ext.n()), |u, o| {
        if ext.fill(o).unwrap().is_stone() {
            u.mul_generator(shape.letter(o).unwrap())
        } else {
            u
        }
    })
}

/// Whether + at new-column box `row` (0 = top) would violate the
/// distinguished property given the fills below it.
fn forced_black(base: &GoDiagram, column: &[Fill], row: usize) -> bool {
    let ext = extend_with(base, column);
    let b = (base.shape().vertical_steps()[row], base.n() + 1);
    let s = ext.shape().letter(b).unwrap();
    !prefix_stones(&ext, b).ascends_at(s)
}

fn counter_key(column: &[Fill]) -> u64 {
    column.iter().rev().enumerate().map(|(t, &f)| if f == Fill::Plus { 1u64 << t } else { 0 }).sum()
}

pub fn fiber_components(d: &GoDiagram) -> Vec<FiberComponent> {
    let k = d.k();
    let mut columns: Vec<Vec<Fill>> = vec![vec![Fill::Plus; k]];
    for row in (0..k).rev() {
        let mut next = Vec::new();
        for col in columns {
            if forced_black(d, &col, row) {
                let mut c = col.clone();
                c[row] = Fill::BlackStone;
                next.push(c);
            } else {
                for f in [Fill::WhiteStone, Fill::Plus] {
                    let mut c = col.clone();
                    c[row] = f;
                    next.push(c);
                }
            }
        }
        columns = next;
    }
    columns.sort_by_key(|c| counter_key(c));
    columns.into_iter().map(|c| FiberComponent { base: d.clone(), extended: extend_with(d, &c) }).collect()
}

pub fn top_fiber_component(d: &GoDiagram) -> FiberComponent {
    let k = d.k();
    let mut col = vec![Fill::Plus; k];
    for row in (0..k).rev() {
        if forced_black(d, &col, row) {
            col[row] = Fill::BlackStone;
        }
    }
    FiberComponent { base: d.clone(), extended: extend_with(d, &col) }
}

/// Reads the new column off a point over [n+1]: forced • where the length
/// drops, else ○ exactly when Δ_{I_b} vanishes.
pub fn classify_fiber_point(base: &GoDiagram, p: &PluckerVector) -> Result<FiberComponent, FiberError> {
    if p.m() != base.n() + 1 || p.k() != base.k() {
        return Err(FiberError::WrongSize { expected: base.n() + 1, got: p.m() });
    }
    let below = p.restrict_without_last().ok_or(FiberError::ProjectedRankDrop)?;
    if !deodhar_description(base).satisfied_by(&below) {
        return Err(FiberError::NotOverBase);
    }
    let k = base.k();
    let mut col = vec![Fill::Plus; k];
    for row in (0..k).rev() {
        if forced_black(base, &col, row) {
            col[row] = Fill::BlackStone;
            continue;
        }
        let ext = extend_with(base, &col);
        let ib = i_b_formula(&ext, (base.shape().vertical_steps()[row], base.n() + 1))?;
        if p.get(&ib).is_zero() {
            col[row] = Fill::WhiteStone;
        }
    }
    Ok(FiberComponent { base: base.clone(), extended: extend_with(base, &col) })
}

pub fn project_point(m: &PointMatrix) -> Result<PointMatrix, FiberError> {
    let rows: Vec<Vec<Q>> = m.rows().iter().map(|r| r[..r.len() - 1].to_vec()).collect();
    if rank(&rows) < m.k() {
        return Err(FiberError::ProjectedRankDrop);
    }
    Ok(PointMatrix::new(rows)?)
}

/// Nodes with covers (upper, lower) as indices into `nodes`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryPoset {
    pub nodes: Vec<GoDiagram>,
    pub covers: Vec<(usize, usize)>,
}

impl BoundaryPoset {
    /// Count of nodes per dimension, highest first.
    pub fn rank_profile(&self) -> Vec<usize> {
        let counts = self.nodes.iter().map(|d| d.dimension()).counts();
        counts.into_iter().sorted_by(|a, b| b.0.cmp(&a.0)).map(|(_, c)| c).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "nodes": self.nodes.iter().map(|d| d.to_json()).collect::<Vec<_>>(),
            "covers": self.covers.iter().map(|&(a, b)| vec![a, b]).collect::<Vec<_>>(),
        })
    }

    /// Whether the poset is the lattice of subsets of the new-column + boxes
    /// under inclusion, covers being single removals.
    pub fn is_boolean_lattice(&self) -> bool {
        let Some(top) = self.nodes.first() else { return false };
        let c = top.n();
        let plus_rows = |d: &GoDiagram| -> Vec<usize> {
            d.shape().column(c).into_iter().filter(|&b| d.fill(b) == Some(Fill::Plus)).map(|b| b.0).collect()
        };
        let sets: Vec<Vec<usize>> = self.nodes.iter().map(plus_rows).collect();
        let full = sets.iter().max_by_key(|s| s.len()).unwrap().clone();
        if self.nodes.len() != 1 << full.len() || sets.iter().unique().count() != sets.len() {
            return false;
        }
        if !sets.iter().all(|s| s.iter().all(|x| full.contains(x))) {
            return false;
        }
        let mut expected: Vec<(usize, usize)> = Vec::new();
        for (a, sa) in sets.iter().enumerate() {
            for (b, sb) in sets.iter().enumerate() {
                if sb.len() + 1 == sa.len() && sb.iter().all(|x| sa.contains(x)) {
                    expected.push((a, b));
                }
            }
        }
        let mut got = self.covers.clone();
        got.sort_unstable();
        expected.sort_unstable();
        got == expected
    }
}

/// The codimension-one neighbours of a fiber component: one new-column + turns
/// ○, then • above it turn + wherever they no longer shorten the word.
pub fn cover_moves(c: &FiberComponent) -> Vec<GoDiagram> {
    let col = c.new_column();
    let mut out = Vec::new();
    for row in 0..col.len() {
        if col[row] != Fill::Plus {
            continue;
        }
        let mut next = col.clone();
        next[row] = Fill::WhiteStone;
        for up in (0..row).rev() {
            if next[up] == Fill::BlackStone && !forced_black(&c.base, &next, up) {
                next[up] = Fill::Plus;
            }
        }
        out.push(extend_with(&c.base, &next));
    }
    out
}

pub fn fiber_poset(d: &GoDiagram) -> BoundaryPoset {
    let comps = fiber_components(d);
    let nodes: Vec<GoDiagram> = comps.iter().map(|c| c.extended.clone()).collect();
    let mut covers = Vec::new();
    for (a, comp) in comps.iter().enumerate() {
        for lower in cover_moves(comp) {
            let b = nodes.iter().position(|x| *x == lower).expect("cover rule emits fiber components");
            covers.push((a, b));
        }
    }
    covers.sort_unstable();
    BoundaryPoset { nodes, covers }
}

/// A new box in row i is forced ○ when row i already has a ○ with a + above
/// it: a + on the far left would break the Le property there.
pub fn nonneg_forced_white(d: &GoDiagram) -> Vec<bool> {
    d.shape()
        .vertical_steps()
        .iter()
        .map(|&i| {
            d.shape().row(i).into_iter().any(|(_, j)| {
                d.fill((i, j)) == Some(Fill::WhiteStone)
                    && d.shape().column(j).into_iter().any(|(i2, _)| i2 < i && d.fill((i2, j)) == Some(Fill::Plus))
            })
        })
        .collect()
}

pub fn nonneg_fiber_components(d: &GoDiagram) -> Result<BoundaryPoset, FiberError> {
    if !is_le_diagram(d) {
        return Err(FiberError::NotLe);
    }
    let forced = nonneg_forced_white(d);
    let free: Vec<usize> = (0..d.k()).filter(|&r| !forced[r]).collect();
    let mut columns: Vec<Vec<Fill>> = (0..1u64 << free.len())
        .map(|mask| {
            let mut col = vec![Fill::WhiteStone; d.k()];
            for (t, &r) in free.iter().rev().enumerate() {
                if mask >> t & 1 == 1 {
                    col[r] = Fill::Plus;
                }
            }
            col
        })
        .collect();
    columns.sort_by_key(|c| std::cmp::Reverse(counter_key(c)));
    let nodes: Vec<GoDiagram> = columns.iter().map(|c| extend_with(d, c)).collect();
    let mut covers = Vec::new();
    for (a, ca) in columns.iter().enumerate() {
        for r in 0..d.k() {
            if ca[r] == Fill::Plus {
                let mut lower = ca.clone();
                lower[r] = Fill::WhiteStone;
                covers.push((a, columns.iter().position(|x| *x == lower).unwrap()));
            }
        }
    }
    covers.sort_unstable();
    Ok(BoundaryPoset { nodes, covers })
}

/// Whether every node is a valid Le-diagram extending the base.
pub fn nonneg_nodes_are_le(p: &BoundaryPoset) -> bool {
    p.nodes.iter().all(|d| validate_filling(d).is_valid() && d.count(Fill::BlackStone) == 0 && has_le_property(d))
}
