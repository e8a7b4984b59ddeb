//! Positive realizations of C(W), chart indices, and the monodromy sign of
//! the fiber bundle around a rotation cycle.
//!
//! Interior transitions compare two charts on the same realized point, so
//! their sign is a product of two basis minors of a positive point. The wrap
//! transition also carries the row permutation σ between the first and last
//! diagrams.

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::moves::{boundary_matrix, rotation_sequence, shares_boundary, Family};
use super::{matroid_bases, require_admissible, sigma_cell, support, symbolic_bases, WilsonError, WilsonLoopDiagram};
use crate::coxeter::Permutation;
use crate::diagrams::Subset;
use crate::exact::{det, det_i128, format_q, minor, nullspace, q, sign_of, Matrix, Q};
use crate::networks::{realize_matrix, weighted, Weights};
use crate::plucker::PointMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum RealizationMethod {
    /// One sign change per row at most.
    BlockSigns,
    /// Every ±1 pattern.
    Exhaustive,
    /// Rows cut out of a positive network point of Σ(W).
    Constructive,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Realization {
    /// Entry signs of each row over its support in column order.
    pub signs: Vec<Vec<i32>>,
    pub matrix: PointMatrix,
    pub method: RealizationMethod,
}

/// Entry signs per row, over the row support in column order.
type SignPattern = Vec<Vec<i32>>;

const DRAWS: usize = 6;

fn block_patterns(s: usize) -> Vec<Vec<i32>> {
    let mut out = vec![vec![1; s], vec![-1; s]];
    for (first, second) in [(1, -1), (-1, 1)] {
        for a in 1..s {
            out.push((0..s).map(|x| if x < a { first } else { second }).collect());
        }
    }
    out
}

fn all_patterns(s: usize) -> Vec<Vec<i32>> {
    (0..1u32 << s).map(|m| (0..s).map(|x| if m >> x & 1 == 1 { -1 } else { 1 }).collect()).collect()
}

fn submatrix_i128(m: &[Vec<i128>], cols: &[usize]) -> Vec<Vec<i128>> {
    m.iter().map(|r| cols.iter().map(|&c| r[c - 1]).collect()).collect()
}

/// Odometer over per-row candidate lists, first row fastest.
fn search(
    w: &WilsonLoopDiagram,
    bases: &[Subset],
    per_row: &[Vec<Vec<i32>>],
    rng: &mut ChaCha8Rng,
) -> Option<(SignPattern, Vec<Vec<i128>>)> {
    let k = w.k();
    let supports: Vec<Vec<usize>> = (0..k).map(|r| support(w, &[r]).into_iter().collect()).collect();
    let mut idx = vec![0usize; k];
    loop {
        let signs: Vec<Vec<i32>> = (0..k).map(|r| per_row[r][idx[r]].clone()).collect();
        for _ in 0..DRAWS {
            let mut m = vec![vec![0i128; w.n()]; k];
            for r in 0..k {
                for (t, &c) in supports[r].iter().enumerate() {
                    m[r][c - 1] = signs[r][t] as i128 * rng.gen_range(1..=20);
                }
            }
            if bases.iter().all(|j| det_i128(&submatrix_i128(&m, j)) > 0) {
                return Some((signs, m));
            }
        }
        let mut r = 0;
        loop {
            if r == k {
                return None;
            }
            idx[r] += 1;
            if idx[r] < per_row[r].len() {
                break;
            }
            idx[r] = 0;
            r += 1;
        }
    }
}

fn to_point(m: &[Vec<i128>]) -> PointMatrix {
    PointMatrix::new(m.iter().map(|r| r.iter().map(|&x| q(x as i64)).collect()).collect())
        .expect("basis minors are nonzero")
}

fn constructive(w: &WilsonLoopDiagram, bases: &[Subset], seed: u64) -> Option<Realization> {
    let cell = sigma_cell(w).ok()?;
    let point = realize_matrix(&weighted(&cell.le, Weights::PositiveSeed(seed)).ok()?).ok()?;
    let a = point.rows();
    let k = w.k();
    let mut x_rows: Matrix = Vec::with_capacity(k);
    for r in 0..k {
        let supp = support(w, &[r]);
        let outside: Matrix = (1..=w.n())
            .filter(|c| !supp.contains(c))
            .map(|c| a.iter().map(|row| row[c - 1].clone()).collect())
            .collect();
        let ns = if outside.is_empty() { return None } else { nullspace(&outside, k) };
        if ns.len() != 1 {
            return None;
        }
        x_rows.push(ns.into_iter().next().unwrap());
    }
    if det(&x_rows).is_negative() {
        x_rows[0] = x_rows[0].iter().map(|v| -v).collect();
    }
    let rows: Matrix = x_rows
        .iter()
        .map(|x| (0..w.n()).map(|c| x.iter().zip(a).fold(Q::zero(), |acc, (xi, row)| acc + xi * &row[c])).collect())
        .collect();
    if !bases.iter().all(|j| minor(&rows, j).is_positive()) {
        return None;
    }
    let signs = (0..k).map(|r| support(w, &[r]).into_iter().map(|c| sign_of(&rows[r][c - 1])).collect()).collect();
    Some(Realization { signs, matrix: PointMatrix::new(rows).ok()?, method: RealizationMethod::Constructive })
}

/// A point of Σ(W) in the shape of C(W) with every basis minor positive.
pub fn positive_realization(w: &WilsonLoopDiagram, seed: u64) -> Result<Realization, WilsonError> {
    require_admissible(w)?;
    let bases = matroid_bases(w);
    let sizes: Vec<usize> = (0..w.k()).map(|r| support(w, &[r]).len()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let block: Vec<Vec<Vec<i32>>> = sizes.iter().map(|&s| block_patterns(s)).collect();
    if let Some((signs, m)) = search(w, &bases, &block, &mut rng) {
        return Ok(Realization { signs, matrix: to_point(&m), method: RealizationMethod::BlockSigns });
    }
    if w.k() <= 3 {
        let all: Vec<Vec<Vec<i32>>> = sizes.iter().map(|&s| all_patterns(s)).collect();
        if let Some((signs, m)) = search(w, &bases, &all, &mut rng) {
            return Ok(Realization { signs, matrix: to_point(&m), method: RealizationMethod::Exhaustive });
        }
    }
    constructive(w, &bases, seed).ok_or_else(|| WilsonError::NoRealization(format!("{:?}", w.propagators())))
}

/// Lexicographically least k-subset that is a basis of W, of W′, and of the
/// first shared boundary matrix.
pub fn chart_index(w: &WilsonLoopDiagram, w2: &WilsonLoopDiagram) -> Result<Subset, WilsonError> {
    let first = matroid_bases(w);
    if w == w2 {
        return first.into_iter().next().ok_or(WilsonError::NoCommonBasis);
    }
    let witness = shares_boundary(w, w2).into_iter().next().ok_or(WilsonError::NoSharedBoundary)?;
    let second = matroid_bases(w2);
    let third = symbolic_bases(&boundary_matrix(w, &witness.left));
    first.into_iter().find(|j| second.contains(j) && third.contains(j)).ok_or(WilsonError::NoCommonBasis)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StepSign {
    /// 0-based index of the diagram whose two charts are compared.
    pub diagram: usize,
    pub sign: i32,
    /// False when the sign is the structural +1 of an unrealized diagram.
    pub realized: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonodromyReport {
    pub family: Family,
    pub diagrams: Vec<WilsonLoopDiagram>,
    pub moved_rows: Vec<usize>,
    pub relaxed: bool,
    /// charts[l] = chart_index(W_l, W_{l+1}).
    pub charts: Vec<Subset>,
    pub steps: Vec<StepSign>,
    /// sign Δ_{J_1}(M_1) · Δ_{J_{r−1}}(M_r), before σ.
    pub wrap_chart_sign: i32,
    pub wrap_realized: bool,
    pub sigma: Permutation,
    pub wrap_sign: i32,
    pub total_sign: i32,
    pub realizations: Vec<Option<RealizationMethod>>,
}

impl MonodromyReport {
    pub fn fully_realized(&self) -> bool {
        self.realizations.iter().all(Option::is_some)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "family": self.family,
            "diagrams": self.diagrams.iter().map(|d| d.to_json()).collect::<Vec<_>>(),
            "moved_rows": self.moved_rows.iter().map(|r| r + 1).collect::<Vec<_>>(),
            "relaxed_moves": self.relaxed,
            "charts": self.charts,
            "steps": self.steps.iter().map(|s| serde_json::json!({"diagram": s.diagram + 1, "sign": s.sign, "realized": s.realized})).collect::<Vec<_>>(),
            "wrap_chart_sign": self.wrap_chart_sign,
            "wrap_realized": self.wrap_realized,
            "sigma": self.sigma.to_string(),
            "sigma_sign": self.sigma.sign(),
            "wrap_sign": self.wrap_sign,
            "total_sign": self.total_sign,
            "realizations": self.realizations,
        })
    }
}

fn chart_sign(m: &PointMatrix, j: &[usize]) -> i32 {
    sign_of(&m.minor(j))
}

pub fn monodromy_sign(w: &WilsonLoopDiagram, family: Family, seed: u64) -> Result<MonodromyReport, WilsonError> {
    let rot = rotation_sequence(w, family)?;
    let ds = &rot.diagrams;
    let r = ds.len();
    let charts = ds.windows(2).map(|p| chart_index(&p[0], &p[1])).collect::<Result<Vec<_>, _>>()?;
    let real: Vec<Option<Realization>> = ds.iter().map(|d| positive_realization(d, seed).ok()).collect();
    let steps: Vec<StepSign> = (1..r - 1)
        .map(|l| match &real[l] {
            Some(m) => StepSign {
                diagram: l,
                sign: chart_sign(&m.matrix, &charts[l - 1]) * chart_sign(&m.matrix, &charts[l]),
                realized: true,
            },
            None => StepSign { diagram: l, sign: 1, realized: false },
        })
        .collect();
    let (wrap_chart_sign, wrap_realized) = match (&real[0], &real[r - 1]) {
        (Some(a), Some(b)) => (chart_sign(&a.matrix, &charts[0]) * chart_sign(&b.matrix, &charts[r - 2]), true),
        _ => (1, false),
    };
    let wrap_sign = wrap_chart_sign * rot.sigma.sign();
    let total_sign = steps.iter().map(|s| s.sign).product::<i32>() * wrap_sign;
    Ok(MonodromyReport {
        family,
        diagrams: rot.diagrams.clone(),
        moved_rows: rot.moved_rows.clone(),
        relaxed: rot.relaxed,
        charts,
        steps,
        wrap_chart_sign,
        wrap_realized,
        sigma: rot.sigma,
        wrap_sign,
        total_sign,
        realizations: real.iter().map(|x| x.as_ref().map(|m| m.method)).collect(),
    })
}

/// Entries of a realization as "num/den" strings.
pub fn matrix_json(m: &PointMatrix) -> serde_json::Value {
    serde_json::json!(m.rows().iter().map(|r| r.iter().map(format_q).collect::<Vec<_>>()).collect::<Vec<_>>())
}
