//! Wilson loop diagrams: n cyclically labelled vertices, edge e joining
//! vertices e and e+1, and k propagators each joining two edges. A
//! propagator (i, j) is supported on V(p) = {i, i+1, j, j+1} (mod n), and its
//! row of C(W) carries one variable per supported column.

pub mod monodromy;
pub mod moves;
pub mod poly;

use std::collections::BTreeSet;

use itertools::Itertools;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coxeter::Permutation;
use crate::diagrams::{le_from_necklace, DiagramError, Fill, GoDiagram, GrassmannNecklace, Subset};
use crate::exact::k_subsets;
use crate::fibers::top_fiber_component;
pub use poly::{Monomial, SparsePolynomial, Var};

pub use monodromy::{
    chart_index, matrix_json, monodromy_sign, positive_realization, MonodromyReport, Realization, RealizationMethod,
    StepSign,
};
pub use moves::{
    boundary_matrix, boundary_minor, boundary_move, boundary_moves, boundary_pattern, clockwise_move, family_targets,
    is_short, parallel_wld, rotation_sequence, series_wld, shares_boundary, BoundaryMove, BoundaryPattern,
    BoundaryWitness, End, Family, Rotation,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WilsonError {
    #[error("edge label {0} outside 1..={1}")]
    BadLabel(usize, usize),
    #[error("diagram is not admissible: {0}")]
    Inadmissible(String),
    #[error("propagator index {0} out of range")]
    NoSuchPropagator(usize),
    #[error("vertex {0} is not in the support of the propagator")]
    NotInSupport(usize),
    #[error("boundary move rejected: {0}")]
    Rejected(String),
    #[error("column set {0:?} is not a {1}-subset")]
    BadColumns(Vec<usize>, usize),
    #[error("parameters violate the family constraints: {0}")]
    Family(String),
    #[error("rotation stuck: {0}")]
    Stuck(String),
    #[error("no realization found for {0}")]
    NoRealization(String),
    #[error("diagrams do not share a boundary")]
    NoSharedBoundary,
    #[error("no common basis")]
    NoCommonBasis,
    #[error("malformed diagram JSON: {0}")]
    Json(String),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

/// Reduces any integer to a label in 1..=n.
pub fn md(x: i64, n: usize) -> usize {
    ((x - 1).rem_euclid(n as i64) + 1) as usize
}

/// Propagators are stored as (min, max); list order fixes the row order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WilsonLoopDiagram {
    n: usize,
    propagators: Vec<(usize, usize)>,
}

#[derive(Serialize, Deserialize)]
struct WldJson {
    n: usize,
    propagators: Vec<[usize; 2]>,
}

impl WilsonLoopDiagram {
    pub fn new(n: usize, propagators: Vec<(usize, usize)>) -> Result<Self, WilsonError> {
        for &(i, j) in &propagators {
            for x in [i, j] {
                if x == 0 || x > n {
                    return Err(WilsonError::BadLabel(x, n));
                }
            }
        }
        let propagators = propagators.into_iter().map(|(i, j)| (i.min(j), i.max(j))).collect();
        Ok(WilsonLoopDiagram { n, propagators })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.propagators.len()
    }

    pub fn propagators(&self) -> &[(usize, usize)] {
        &self.propagators
    }

    pub fn propagator(&self, r: usize) -> Result<(usize, usize), WilsonError> {
        self.propagators.get(r).copied().ok_or(WilsonError::NoSuchPropagator(r))
    }

    pub fn with_propagator(&self, r: usize, p: (usize, usize)) -> WilsonLoopDiagram {
        let mut props = self.propagators.clone();
        props[r] = (p.0.min(p.1), p.0.max(p.1));
        WilsonLoopDiagram { n: self.n, propagators: props }
    }

    pub fn propagator_set(&self) -> BTreeSet<(usize, usize)> {
        self.propagators.iter().copied().collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "n": self.n,
            "propagators": self.propagators.iter().map(|&(i, j)| vec![i, j]).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self, WilsonError> {
        let raw: WldJson = serde_json::from_value(value.clone()).map_err(|e| WilsonError::Json(e.to_string()))?;
        Self::new(raw.n, raw.propagators.into_iter().map(|[i, j]| (i, j)).collect())
    }
}

pub fn vertex_support(p: (usize, usize), n: usize) -> BTreeSet<usize> {
    let (i, j) = p;
    [i, i + 1, j, j + 1].into_iter().map(|x| md(x as i64, n)).collect()
}

/// V(P) for the propagators with the given row indices.
pub fn support(w: &WilsonLoopDiagram, rows: &[usize]) -> BTreeSet<usize> {
    rows.iter().flat_map(|&r| vertex_support(w.propagators[r], w.n)).collect()
}

/// Strict cyclic interleaving; propagators sharing an edge do not cross.
pub fn crosses(p: (usize, usize), q: (usize, usize), n: usize) -> bool {
    let (a, b) = p;
    let (c, d) = q;
    if [a, b, c, d].iter().unique().count() < 4 {
        return false;
    }
    let inside = |x: usize| {
        let off = (x + n - a) % n;
        0 < off && off < (b + n - a) % n
    };
    inside(c) != inside(d)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AdmissibilityReport {
    /// n ≥ k + 4 fails.
    pub too_few_vertices: bool,
    /// Row subsets P with |V(P)| < |P| + 3.
    pub thin_subsets: Vec<Vec<usize>>,
    pub crossings: Vec<(usize, usize)>,
}

impl AdmissibilityReport {
    pub fn is_admissible(&self) -> bool {
        !self.too_few_vertices && self.thin_subsets.is_empty() && self.crossings.is_empty()
    }

    pub fn reasons(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.too_few_vertices {
            out.push("n < k + 4".to_string());
        }
        for s in &self.thin_subsets {
            let rows: Vec<usize> = s.iter().map(|r| r + 1).collect();
            out.push(format!("propagators {rows:?} supported on fewer than {} vertices", s.len() + 3));
        }
        for &(a, b) in &self.crossings {
            out.push(format!("propagators {} and {} cross", a + 1, b + 1));
        }
        out
    }
}

pub fn thin_subsets(w: &WilsonLoopDiagram) -> Vec<Vec<usize>> {
    (1..=w.k())
        .flat_map(|size| (0..w.k()).combinations(size))
        .filter(|rows| support(w, rows).len() < rows.len() + 3)
        .collect()
}

pub fn admissibility(w: &WilsonLoopDiagram) -> AdmissibilityReport {
    let crossings =
        (0..w.k()).tuple_combinations().filter(|&(a, b)| crosses(w.propagators[a], w.propagators[b], w.n)).collect();
    AdmissibilityReport { too_few_vertices: w.n < w.k() + 4, thin_subsets: thin_subsets(w), crossings }
}

pub fn is_admissible(w: &WilsonLoopDiagram) -> bool {
    admissibility(w).is_admissible()
}

pub(crate) fn require_admissible(w: &WilsonLoopDiagram) -> Result<(), WilsonError> {
    let r = admissibility(w);
    if r.is_admissible() {
        Ok(())
    } else {
        Err(WilsonError::Inadmissible(r.reasons().join("; ")))
    }
}

/// Entries are polynomials so that boundary relations (c_{p,e} = t·c_{q,e})
/// fit the same type; C(W) itself has only signed single variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolicMatrix {
    pub rows: Vec<Vec<SparsePolynomial>>,
}

impl SymbolicMatrix {
    pub fn k(&self) -> usize {
        self.rows.len()
    }

    pub fn m(&self) -> usize {
        self.rows.first().map_or(0, |r| r.len())
    }

    /// Nonzero columns of each row, 1-based.
    pub fn row_supports(&self) -> Vec<BTreeSet<usize>> {
        self.rows
            .iter()
            .map(|r| r.iter().enumerate().filter(|(_, e)| !e.is_zero()).map(|(c, _)| c + 1).collect())
            .collect()
    }

    pub fn render(&self) -> String {
        let cells: Vec<Vec<String>> = self.rows.iter().map(|r| r.iter().map(|e| e.to_string()).collect()).collect();
        let width = cells.iter().flatten().map(|c| c.chars().count()).max().unwrap_or(1);
        cells.iter().map(|r| r.iter().map(|c| format!("{c:>width$}")).join("  ") + "\n").collect()
    }
}

fn pattern_matrix(w: &WilsonLoopDiagram, star: bool) -> SymbolicMatrix {
    let m = w.n + usize::from(star);
    let rows = (0..w.k())
        .map(|r| {
            let supp = vertex_support(w.propagators[r], w.n);
            (1..=m)
                .map(|q| {
                    if supp.contains(&q) || (star && q == m) {
                        SparsePolynomial::var(Var::C(r + 1, q))
                    } else {
                        SparsePolynomial::zero()
                    }
                })
                .collect()
        })
        .collect();
    SymbolicMatrix { rows }
}

pub fn c_matrix(w: &WilsonLoopDiagram) -> SymbolicMatrix {
    pattern_matrix(w, false)
}

/// C(W) with a free last column n+1.
pub fn c_star_matrix(w: &WilsonLoopDiagram) -> SymbolicMatrix {
    pattern_matrix(w, true)
}

/// Leibniz expansion over the k! row-to-column bijections.
pub fn symbolic_minor(mat: &SymbolicMatrix, cols: &[usize]) -> Result<SparsePolynomial, WilsonError> {
    let k = mat.k();
    if cols.len() != k || cols.iter().unique().count() != k || cols.iter().any(|&c| c == 0 || c > mat.m()) {
        return Err(WilsonError::BadColumns(cols.to_vec(), k));
    }
    let mut total = SparsePolynomial::zero();
    for perm in (0..k).permutations(k) {
        let mut term = SparsePolynomial::constant(crate::exact::q(1));
        for (r, &c) in perm.iter().enumerate() {
            let e = &mat.rows[r][cols[c] - 1];
            if e.is_zero() {
                term = SparsePolynomial::zero();
                break;
            }
            term = &term * e;
        }
        if term.is_zero() {
            continue;
        }
        let images: Vec<usize> = perm.iter().map(|&c| c + 1).collect();
        let sign = Permutation::new(images).expect("a permutation").sign();
        total = if sign > 0 { &total + &term } else { &total - &term };
    }
    Ok(total)
}

/// k-subsets of [m] whose symbolic minor is not identically zero.
pub fn symbolic_bases(mat: &SymbolicMatrix) -> Vec<Subset> {
    k_subsets(mat.m(), mat.k()).into_iter().filter(|j| !symbolic_minor(mat, j).unwrap().is_zero()).collect()
}

pub fn matroid_bases(w: &WilsonLoopDiagram) -> Vec<Subset> {
    symbolic_bases(&c_matrix(w))
}

/// Transversal criterion: rows matched to distinct columns of J inside their
/// supports.
pub fn matching_bases(w: &WilsonLoopDiagram) -> Vec<Subset> {
    let supports: Vec<BTreeSet<usize>> = (0..w.k()).map(|r| support(w, &[r])).collect();
    k_subsets(w.n, w.k())
        .into_iter()
        .filter(|j| {
            j.iter().permutations(j.len()).any(|assign| assign.iter().enumerate().all(|(r, c)| supports[r].contains(c)))
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SigmaCell {
    pub necklace: GrassmannNecklace,
    pub le: GoDiagram,
    pub dimension: usize,
}

pub fn sigma_cell(w: &WilsonLoopDiagram) -> Result<SigmaCell, WilsonError> {
    require_admissible(w)?;
    let necklace = GrassmannNecklace::from_bases(w.n, w.k(), &matroid_bases(w))?;
    let le = le_from_necklace(&necklace)?;
    let dimension = le.count(Fill::Plus);
    Ok(SigmaCell { necklace, le, dimension })
}

pub fn d_star_diagram(w: &WilsonLoopDiagram) -> Result<GoDiagram, WilsonError> {
    Ok(top_fiber_component(&sigma_cell(w)?.le).extended)
}

/// Some column of D(W) has a + strictly above a ○.
pub fn column_has_plus_above_white(d: &GoDiagram) -> bool {
    let shape = d.shape();
    shape.horizontal_steps().into_iter().any(|j| {
        let col = shape.column(j);
        col.iter().enumerate().any(|(a, &top)| {
            d.fill(top) == Some(Fill::Plus) && col[a + 1..].iter().any(|&b| d.fill(b) == Some(Fill::WhiteStone))
        })
    })
}

pub fn positivity_violation(w: &WilsonLoopDiagram) -> Result<bool, WilsonError> {
    Ok(column_has_plus_above_white(&sigma_cell(w)?.le))
}

/// Every admissible diagram with k propagators on n vertices, propagators
/// listed in increasing order.
pub fn all_admissible(k: usize, n: usize) -> Vec<WilsonLoopDiagram> {
    let pairs: Vec<(usize, usize)> = (1..=n).tuple_combinations().collect();
    pairs
        .into_iter()
        .combinations(k)
        .map(|props| WilsonLoopDiagram { n, propagators: props })
        .filter(is_admissible)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagrams::{FerrersShape, Fill::Plus as P, Fill::WhiteStone as O};

    fn w26() -> WilsonLoopDiagram {
        WilsonLoopDiagram::new(6, vec![(1, 5), (2, 4)]).unwrap()
    }

    #[test]
    fn supports() {
        let w = WilsonLoopDiagram::new(6, vec![(1, 5), (4, 6)]).unwrap();
        assert_eq!(support(&w, &[0]), [1, 2, 5, 6].into());
        assert_eq!(support(&w, &[1]), [1, 4, 5, 6].into());
        assert!(support(&w, &[]).is_empty());
    }

    #[test]
    fn admissibility_examples() {
        assert!(is_admissible(&w26()));
        assert!(!is_admissible(&WilsonLoopDiagram::new(6, vec![(1, 2)]).unwrap()));
        let crossing = WilsonLoopDiagram::new(7, vec![(1, 3), (2, 4)]).unwrap();
        assert_eq!(admissibility(&crossing).crossings, vec![(0, 1)]);
    }

    #[test]
    fn star_matrix_pattern() {
        let s = c_star_matrix(&w26());
        assert_eq!(s.row_supports(), vec![[1, 2, 5, 6, 7].into(), [2, 3, 4, 5, 7].into()]);
        assert_eq!(c_matrix(&WilsonLoopDiagram::new(6, vec![]).unwrap()).k(), 0);
    }

    #[test]
    fn minors() {
        let c = c_matrix(&w26());
        assert_eq!(symbolic_minor(&c, &[1, 3]).unwrap().to_string(), "c_{1,1}*c_{2,3}");
        assert!(symbolic_minor(&c, &[1, 6]).unwrap().is_zero());
        assert!(symbolic_minor(&c, &[3, 3]).is_err());
        let b = matroid_bases(&w26());
        assert!(b.contains(&vec![1, 3]) && !b.contains(&vec![1, 6]));
        assert_eq!(b, matching_bases(&w26()));
    }

    #[test]
    fn single_propagator_bases() {
        let w = WilsonLoopDiagram::new(6, vec![(1, 3)]).unwrap();
        assert_eq!(matroid_bases(&w), vec![vec![1], vec![2], vec![3], vec![4]]);
    }

    #[test]
    fn sigma_cell_of_fixture() {
        let cell = sigma_cell(&w26()).unwrap();
        let expect =
            GoDiagram::from_rows(FerrersShape::rectangle(2, 4), &[vec![P, P, O, P], vec![O, P, P, P]]).unwrap();
        assert_eq!(cell.le, expect);
        // ○ at (1,5) instead would let 1→4 and 2→3 flow disjointly, but row 1
        // of C(W) misses both 3 and 4.
        let moved = GoDiagram::from_rows(FerrersShape::rectangle(2, 4), &[vec![P, O, P, P], vec![O, P, P, P]]).unwrap();
        assert!(crate::networks::has_flow(&crate::networks::build_network(&moved), &[3, 4]));
        assert!(!matroid_bases(&w26()).contains(&vec![3, 4]));
        assert_eq!(cell.dimension, 6);
        assert!(positivity_violation(&w26()).unwrap());
        let dstar = d_star_diagram(&w26()).unwrap();
        assert_eq!(dstar.dimension(), 8);
        assert_eq!(dstar.fill((1, 7)), Some(Fill::BlackStone));
        assert_eq!(dstar.fill((2, 7)), Some(Fill::Plus));
    }

    #[test]
    fn one_propagator_cell() {
        let w = WilsonLoopDiagram::new(5, vec![(1, 3)]).unwrap();
        assert_eq!(sigma_cell(&w).unwrap().dimension, 3);
        assert!(!positivity_violation(&w).unwrap());
    }
}
