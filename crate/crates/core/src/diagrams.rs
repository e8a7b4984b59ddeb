//! Ferrers shapes, Go- and Le-diagrams, the sets I_b, and Plücker
//! descriptions of Deodhar components and positroid cells.
//!
//! A shape in [n] is fixed by its vertical steps I. Box (i, j) exists for
//! i ∈ I, j ∉ I, i < j. Rows are ordered top to bottom by increasing i and
//! columns left to right by decreasing j. Box (i_r, j_m) carries s_{r+m-1},
//! with r and m the ranks of i in I and of j in the horizontal steps.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coxeter::{gale_leq, gale_lt, is_positive, Permutation, SubexpressionMask, Word};
use crate::exact::{is_k_subset, k_subsets, sign_of};
use crate::networks;
use crate::plucker::PluckerVector;

pub type Square = (usize, usize);
pub type Subset = Vec<usize>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiagramError {
    #[error("vertical steps {0:?} are not a {1}-subset of 1..={2}")]
    BadSteps(Vec<usize>, usize, usize),
    #[error("box {0:?} is not in the shape")]
    NoSuchBox(Square),
    #[error("{0} is not Grassmannian with descent at {1}")]
    NotGrassmannian(Permutation, usize),
    #[error("order is not a reading order: {0}")]
    BadReadingOrder(String),
    #[error("filling does not match the shape: {0}")]
    FillingShape(String),
    #[error("filling is not a Go-diagram: {0}")]
    Invalid(String),
    #[error("not a Le-diagram")]
    NotLe,
    #[error("invalid Grassmann necklace: {0}")]
    BadNecklace(String),
    #[error("classes overlap at {0:?}")]
    Overlap(Subset),
    #[error("no shifted-Gale minimum among flows for m = {0}")]
    NoMinimum(usize),
    #[error("unknown fill symbol {0:?}")]
    BadSymbol(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FerrersShape {
    n: usize,
    k: usize,
    vertical_steps: Vec<usize>,
}

impl FerrersShape {
    pub fn new(n: usize, k: usize, vertical_steps: Vec<usize>) -> Result<Self, DiagramError> {
        if !is_k_subset(&vertical_steps, n, k) {
            return Err(DiagramError::BadSteps(vertical_steps, k, n));
        }
        Ok(FerrersShape { n, k, vertical_steps })
    }

    /// The k×(n−k) rectangle, I = {1..k}.
    pub fn rectangle(k: usize, cols: usize) -> Self {
        FerrersShape { n: k + cols, k, vertical_steps: (1..=k).collect() }
    }

    /// The shape without boxes, I = {n−k+1..n}.
    pub fn empty(n: usize, k: usize) -> Self {
        FerrersShape { n, k, vertical_steps: (n - k + 1..=n).collect() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn vertical_steps(&self) -> &[usize] {
        &self.vertical_steps
    }

    pub fn horizontal_steps(&self) -> Vec<usize> {
        (1..=self.n).filter(|x| !self.vertical_steps.contains(x)).collect()
    }

    pub fn contains(&self, (i, j): Square) -> bool {
        i < j && j <= self.n && self.vertical_steps.contains(&i) && !self.vertical_steps.contains(&j)
    }

    /// Boxes of row i, left to right.
    pub fn row(&self, i: usize) -> Vec<Square> {
        if !self.vertical_steps.contains(&i) {
            return Vec::new();
        }
        self.horizontal_steps().into_iter().rev().filter(|&j| j > i).map(|j| (i, j)).collect()
    }

    /// Boxes of column j, top to bottom.
    pub fn column(&self, j: usize) -> Vec<Square> {
        self.vertical_steps.iter().filter(|&&i| self.contains((i, j))).map(|&i| (i, j)).collect()
    }

    pub fn box_count(&self) -> usize {
        self.reading_order().len()
    }

    /// Canonical reading order: rows bottom to top, each row right to left.
    pub fn reading_order(&self) -> Vec<Square> {
        let mut v: Vec<Square> = self.vertical_steps.iter().flat_map(|&i| self.row(i)).collect();
        v.sort_by_key(|&(i, j)| (std::cmp::Reverse(i), j));
        v
    }

    pub fn letter(&self, b: Square) -> Result<usize, DiagramError> {
        if !self.contains(b) {
            return Err(DiagramError::NoSuchBox(b));
        }
        let r = self.vertical_steps.iter().position(|&x| x == b.0).unwrap() + 1;
        let m = self.horizontal_steps().iter().position(|&x| x == b.1).unwrap() + 1;
        Ok(r + m - 1)
    }

    /// b' ∈ b^in: weakly below and weakly right of b, b' ≠ b.
    pub fn in_region(b: Square, other: Square) -> bool {
        other != b && other.0 >= b.0 && other.1 <= b.1
    }

    pub fn box_in(&self, b: Square) -> Vec<Square> {
        self.reading_order().into_iter().filter(|&o| Self::in_region(b, o)).collect()
    }

    pub fn box_out(&self, b: Square) -> Vec<Square> {
        self.reading_order().into_iter().filter(|&o| o != b && !Self::in_region(b, o)).collect()
    }

    pub fn check_reading_order(&self, order: &[Square]) -> Result<(), DiagramError> {
        let canonical: BTreeSet<Square> = self.reading_order().into_iter().collect();
        let given: BTreeSet<Square> = order.iter().copied().collect();
        if given != canonical || order.len() != canonical.len() {
            return Err(DiagramError::BadReadingOrder("not a permutation of the boxes".into()));
        }
        for (pos, &b) in order.iter().enumerate() {
            if let Some(&late) = order[pos + 1..].iter().find(|&&o| Self::in_region(b, o)) {
                return Err(DiagramError::BadReadingOrder(format!("{late:?} must precede {b:?}")));
            }
        }
        Ok(())
    }

    pub fn word_with_order(&self, order: &[Square]) -> Result<Word, DiagramError> {
        self.check_reading_order(order)?;
        let letters = order.iter().map(|&b| self.letter(b)).collect::<Result<Vec<_>, _>>()?;
        Ok(Word::new(self.n, letters).expect("box letters lie in 1..n-1"))
    }

    pub fn word(&self) -> Word {
        self.word_with_order(&self.reading_order()).expect("canonical order is valid")
    }

    /// v_λ.
    pub fn grassmannian_permutation(&self) -> Permutation {
        crate::coxeter::evaluate_word(&self.word())
    }

    /// Every reading order, up to `cap` of them.
    pub fn all_reading_orders(&self, cap: usize) -> Vec<Vec<Square>> {
        let boxes = self.reading_order();
        let mut out = Vec::new();
        let mut current = Vec::new();
        let mut used = vec![false; boxes.len()];
        extend_orders(&boxes, &mut used, &mut current, &mut out, cap);
        out
    }
}

fn extend_orders(
    boxes: &[Square],
    used: &mut Vec<bool>,
    current: &mut Vec<Square>,
    out: &mut Vec<Vec<Square>>,
    cap: usize,
) {
    if out.len() >= cap {
        return;
    }
    if current.len() == boxes.len() {
        out.push(current.clone());
        return;
    }
    for idx in 0..boxes.len() {
        if used[idx] {
            continue;
        }
        let b = boxes[idx];
        let ready = boxes.iter().enumerate().all(|(o, &other)| used[o] || !FerrersShape::in_region(b, other));
        if ready {
            used[idx] = true;
            current.push(b);
            extend_orders(boxes, used, current, out, cap);
            current.pop();
            used[idx] = false;
        }
    }
}

pub fn shape_from_permutation(p: &Permutation, k: usize) -> Result<FerrersShape, DiagramError> {
    if k > p.n() || !p.is_grassmannian(k) {
        return Err(DiagramError::NotGrassmannian(p.clone(), k));
    }
    let mut steps: Vec<usize> = p.images()[..k].to_vec();
    steps.sort_unstable();
    FerrersShape::new(p.n(), k, steps)
}

pub fn box_transposition(s: &FerrersShape, b: Square) -> Result<usize, DiagramError> {
    s.letter(b)
}

pub fn word_of_shape(s: &FerrersShape) -> Word {
    s.word()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Fill {
    Plus,
    WhiteStone,
    BlackStone,
}

impl Fill {
    pub fn symbol(self) -> &'static str {
        match self {
            Fill::Plus => "+",
            Fill::WhiteStone => "o",
            Fill::BlackStone => "b",
        }
    }

    pub fn parse(s: &str) -> Result<Fill, DiagramError> {
        match s {
            "+" => Ok(Fill::Plus),
            "o" | "O" => Ok(Fill::WhiteStone),
            "b" | "B" | "*" => Ok(Fill::BlackStone),
            _ => Err(DiagramError::BadSymbol(s.to_string())),
        }
    }

    pub fn is_stone(self) -> bool {
        self != Fill::Plus
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Violation {
    /// A + where the length would drop.
    PlusDecreases,
    /// A ○ where the length would drop.
    WhiteDecreases,
    /// A • where the length would grow.
    BlackIncreases,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub offending: Vec<(Square, Violation)>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.offending.is_empty()
    }
}

/// A filled shape. Construction through `new` enforces the Go conditions;
/// `unchecked` admits arbitrary fillings for network surgery.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GoDiagram {
    shape: FerrersShape,
    filling: BTreeMap<Square, Fill>,
}

impl GoDiagram {
    pub fn new(shape: FerrersShape, filling: BTreeMap<Square, Fill>) -> Result<Self, DiagramError> {
        let d = Self::unchecked(shape, filling)?;
        let report = validate_filling(&d);
        if !report.is_valid() {
            return Err(DiagramError::Invalid(format!("{:?}", report.offending)));
        }
        Ok(d)
    }

    pub fn unchecked(shape: FerrersShape, filling: BTreeMap<Square, Fill>) -> Result<Self, DiagramError> {
        let boxes: BTreeSet<Square> = shape.reading_order().into_iter().collect();
        let keys: BTreeSet<Square> = filling.keys().copied().collect();
        if boxes != keys {
            return Err(DiagramError::FillingShape(format!("expected boxes {boxes:?}, got {keys:?}")));
        }
        Ok(GoDiagram { shape, filling })
    }

    /// Fills given in canonical reading order.
    pub fn from_reading_fills(shape: FerrersShape, fills: &[Fill]) -> Result<Self, DiagramError> {
        let order = shape.reading_order();
        if order.len() != fills.len() {
            return Err(DiagramError::FillingShape(format!("{} boxes, {} fills", order.len(), fills.len())));
        }
        Self::new(shape, order.into_iter().zip(fills.iter().copied()).collect())
    }

    /// Rows top to bottom, each left to right.
    pub fn from_rows(shape: FerrersShape, rows: &[Vec<Fill>]) -> Result<Self, DiagramError> {
        Self::new(shape.clone(), Self::map_from_rows(&shape, rows)?)
    }

    pub fn unchecked_from_rows(shape: FerrersShape, rows: &[Vec<Fill>]) -> Result<Self, DiagramError> {
        let map = Self::map_from_rows(&shape, rows)?;
        Self::unchecked(shape, map)
    }

    fn map_from_rows(shape: &FerrersShape, rows: &[Vec<Fill>]) -> Result<BTreeMap<Square, Fill>, DiagramError> {
        if rows.len() != shape.k() {
            return Err(DiagramError::FillingShape(format!("{} rows for k = {}", rows.len(), shape.k())));
        }
        let mut map = BTreeMap::new();
        for (&i, fills) in shape.vertical_steps().iter().zip(rows) {
            let boxes = shape.row(i);
            if boxes.len() != fills.len() {
                return Err(DiagramError::FillingShape(format!(
                    "row {i} has {} boxes, {} fills",
                    boxes.len(),
                    fills.len()
                )));
            }
            map.extend(boxes.into_iter().zip(fills.iter().copied()));
        }
        Ok(map)
    }

    pub fn all_plus(shape: FerrersShape) -> Self {
        let filling = shape.reading_order().into_iter().map(|b| (b, Fill::Plus)).collect();
        GoDiagram { shape, filling }
    }

    pub fn shape(&self) -> &FerrersShape {
        &self.shape
    }

    pub fn n(&self) -> usize {
        self.shape.n
    }

    pub fn k(&self) -> usize {
        self.shape.k
    }

    pub fn fill(&self, b: Square) -> Option<Fill> {
        self.filling.get(&b).copied()
    }

    pub fn filling(&self) -> &BTreeMap<Square, Fill> {
        &self.filling
    }

    pub fn with_fill(&self, b: Square, f: Fill) -> GoDiagram {
        let mut filling = self.filling.clone();
        filling.insert(b, f);
        GoDiagram { shape: self.shape.clone(), filling }
    }

    pub fn count(&self, f: Fill) -> usize {
        self.filling.values().filter(|&&x| x == f).count()
    }

    /// #+ + #•.
    pub fn dimension(&self) -> usize {
        self.count(Fill::Plus) + self.count(Fill::BlackStone)
    }

    pub fn rows(&self) -> Vec<Vec<Fill>> {
        self.shape.vertical_steps.iter().map(|&i| self.shape.row(i).iter().map(|b| self.filling[b]).collect()).collect()
    }

    /// (word, stone mask) in the given reading order.
    pub fn subexpression_with_order(&self, order: &[Square]) -> Result<SubexpressionMask, DiagramError> {
        let word = self.shape.word_with_order(order)?;
        let selected = order.iter().map(|b| self.filling[b].is_stone()).collect();
        Ok(SubexpressionMask::new(word, selected).expect("lengths agree"))
    }

    pub fn subexpression(&self) -> SubexpressionMask {
        self.subexpression_with_order(&self.shape.reading_order()).expect("canonical order")
    }

    /// (v, u).
    pub fn permutations(&self) -> (Permutation, Permutation) {
        let m = self.subexpression();
        (crate::coxeter::evaluate_word(m.word()), m.evaluate())
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for (&i, row) in self.shape.vertical_steps.iter().zip(self.rows()) {
            let cells: Vec<&str> = row.iter().map(|f| f.symbol()).collect();
            out.push_str(&format!("{i:>3} | {}\n", cells.join(" ")));
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<Vec<&str>> = self.rows().iter().map(|r| r.iter().map(|f| f.symbol()).collect()).collect();
        serde_json::json!({
            "n": self.shape.n,
            "k": self.shape.k,
            "vertical_steps": self.shape.vertical_steps,
            "filling": rows,
        })
    }

    /// Parses the diagram schema. Validity is not enforced; callers decide.
    pub fn from_json(value: &serde_json::Value) -> Result<Self, DiagramError> {
        let raw: DiagramJson =
            serde_json::from_value(value.clone()).map_err(|e| DiagramError::FillingShape(e.to_string()))?;
        let shape = FerrersShape::new(raw.n, raw.k, raw.vertical_steps)?;
        let rows = raw
            .filling
            .iter()
            .map(|r| r.iter().map(|s| Fill::parse(s)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        Self::unchecked_from_rows(shape, &rows)
    }
}

impl fmt::Debug for GoDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self.rows().iter().map(|r| r.iter().map(|x| x.symbol()).collect()).collect();
        write!(f, "GoDiagram(n={}, I={:?}, [{}])", self.shape.n, self.shape.vertical_steps, rows.join("|"))
    }
}

#[derive(Serialize, Deserialize)]
struct DiagramJson {
    n: usize,
    k: usize,
    vertical_steps: Vec<usize>,
    filling: Vec<Vec<String>>,
}

pub fn validate_with_order(d: &GoDiagram, order: &[Square]) -> Result<ValidationReport, DiagramError> {
    d.shape.check_reading_order(order)?;
    let mut u = Permutation::identity(d.n());
    let mut offending = Vec::new();
    for &b in order {
        let s = d.shape.letter(b)?;
        let up = u.ascends_at(s);
        match d.filling[&b] {
            Fill::Plus if !up => offending.push((b, Violation::PlusDecreases)),
            Fill::WhiteStone if !up => offending.push((b, Violation::WhiteDecreases)),
            Fill::BlackStone if up => offending.push((b, Violation::BlackIncreases)),
            _ => {}
        }
        if d.filling[&b].is_stone() {
            u = u.mul_generator(s);
        }
    }
    Ok(ValidationReport { offending })
}

pub fn validate_filling(d: &GoDiagram) -> ValidationReport {
    validate_with_order(d, &d.shape.reading_order()).expect("canonical order")
}

/// No ○ with a + to its left in its row and a + above it in its column.
pub fn has_le_property(d: &GoDiagram) -> bool {
    d.filling.iter().all(|(&(i, j), &f)| {
        if f != Fill::WhiteStone {
            return true;
        }
        let left = d.shape.row(i).into_iter().any(|(_, j2)| j2 > j && d.filling[&(i, j2)] == Fill::Plus);
        let above = d.shape.column(j).into_iter().any(|(i2, _)| i2 < i && d.filling[&(i2, j)] == Fill::Plus);
        !(left && above)
    })
}

pub fn is_le_diagram(d: &GoDiagram) -> bool {
    validate_filling(d).is_valid() && d.count(Fill::BlackStone) == 0 && has_le_property(d)
}

/// Product of the letters of `boxes` in order; stones only when `stones_only`.
fn product_over(d: &GoDiagram, boxes: &[Square], stones_only: bool) -> Permutation {
    boxes.iter().fold(Permutation::identity(d.n()), |u, &b| {
        if stones_only && !d.filling[&b].is_stone() {
            u
        } else {
            u.mul_generator(d.shape.letter(b).expect("box of the shape"))
        }
    })
}

pub fn project(w: &Permutation, onto: &[usize]) -> Subset {
    let mut s: Subset = onto.iter().map(|&x| w.apply(x)).collect();
    s.sort_unstable();
    s
}

/// I_b = proj_{I_λ}(u_{b^in} · s_b · v_{b^in}^{-1}).
pub fn i_b_formula(d: &GoDiagram, b: Square) -> Result<Subset, DiagramError> {
    let s = d.shape.letter(b)?;
    let bin = d.shape.box_in(b);
    let u = product_over(d, &bin, true);
    let v = product_over(d, &bin, false);
    let w = u.mul_generator(s).compose(&v.inverse());
    Ok(project(&w, d.shape.vertical_steps()))
}

/// Classes of a semialgebraic description; unlisted subsets are free.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellDescription {
    pub m: usize,
    pub k: usize,
    pub zero_set: BTreeSet<Subset>,
    pub nonzero_set: BTreeSet<Subset>,
    pub positive_set: BTreeSet<Subset>,
    pub nonneg_set: BTreeSet<Subset>,
}

impl CellDescription {
    pub fn new(
        m: usize,
        k: usize,
        zero_set: BTreeSet<Subset>,
        nonzero_set: BTreeSet<Subset>,
        positive_set: BTreeSet<Subset>,
        nonneg_set: BTreeSet<Subset>,
    ) -> Result<Self, DiagramError> {
        let classes = [&zero_set, &nonzero_set, &positive_set, &nonneg_set];
        for a in 0..classes.len() {
            for b in a + 1..classes.len() {
                if let Some(x) = classes[a].intersection(classes[b]).next() {
                    return Err(DiagramError::Overlap(x.clone()));
                }
            }
        }
        Ok(CellDescription { m, k, zero_set, nonzero_set, positive_set, nonneg_set })
    }

    /// Sign constraints are checked up to one global sign.
    pub fn satisfied_by(&self, p: &PluckerVector) -> bool {
        if p.m() != self.m || p.k() != self.k {
            return false;
        }
        let basic = self.zero_set.iter().all(|s| p.is_zero_at(s))
            && self.nonzero_set.iter().all(|s| !p.is_zero_at(s))
            && self.positive_set.iter().all(|s| !p.is_zero_at(s));
        if !basic {
            return false;
        }
        [1, -1].iter().any(|&g| {
            self.positive_set.iter().all(|s| sign_of(&p.get(s)) == g)
                && self.nonneg_set.iter().all(|s| sign_of(&p.get(s)) != -g)
        })
    }

    /// The same constraints over [m+1], with nothing imposed on subsets
    /// containing m+1.
    pub fn lift(&self) -> CellDescription {
        CellDescription { m: self.m + 1, ..self.clone() }
    }
}

pub fn deodhar_description(d: &GoDiagram) -> CellDescription {
    let n = d.n();
    let il = d.shape.vertical_steps().to_vec();
    let mut zero = BTreeSet::new();
    let mut nonzero = BTreeSet::new();
    nonzero.insert(il.clone());
    for b in d.shape.reading_order() {
        let ib = i_b_formula(d, b).expect("box of the shape");
        match d.filling[&b] {
            Fill::WhiteStone => {
                zero.insert(ib);
            }
            Fill::Plus => {
                nonzero.insert(ib);
            }
            Fill::BlackStone => {}
        }
    }
    for j in k_subsets(n, d.k()) {
        if gale_lt(1, n, &j, &il).unwrap() {
            zero.insert(j);
        }
    }
    CellDescription::new(n, d.k(), zero, nonzero, BTreeSet::new(), BTreeSet::new())
        .expect("Deodhar classes are disjoint")
}

/// {u(n−k+1), …, u(n)} for the stone product u.
pub fn richardson_set(d: &GoDiagram) -> Subset {
    let (_, u) = d.permutations();
    let n = d.n();
    let positions: Vec<usize> = (n - d.k() + 1..=n).collect();
    project(&u, &positions)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrassmannNecklace {
    n: usize,
    k: usize,
    sets: Vec<Subset>,
}

impl GrassmannNecklace {
    pub fn new(n: usize, k: usize, sets: Vec<Subset>) -> Result<Self, DiagramError> {
        if sets.len() != n {
            return Err(DiagramError::BadNecklace(format!("{} sets for n = {n}", sets.len())));
        }
        for s in &sets {
            if !is_k_subset(s, n, k) {
                return Err(DiagramError::BadNecklace(format!("{s:?} is not a {k}-subset")));
            }
        }
        for m in 1..=n {
            let next = &sets[m % n];
            if sets[m - 1].iter().any(|&x| x != m && !next.contains(&x)) {
                return Err(DiagramError::BadNecklace(format!("I_{} does not contain I_{m} minus {m}", m % n + 1)));
            }
        }
        Ok(GrassmannNecklace { n, k, sets })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// I_m, 1-based.
    pub fn get(&self, m: usize) -> &Subset {
        &self.sets[m - 1]
    }

    pub fn sets(&self) -> &[Subset] {
        &self.sets
    }

    /// Top cell: I_m = {m, …, m+k−1} cyclically.
    pub fn uniform(n: usize, k: usize) -> Self {
        let sets = (1..=n)
            .map(|m| {
                let mut s: Subset = (0..k).map(|t| (m - 1 + t) % n + 1).collect();
                s.sort_unstable();
                s
            })
            .collect();
        GrassmannNecklace { n, k, sets }
    }

    /// {J : I_m ⊴_m J for all m}.
    pub fn bases(&self) -> Vec<Subset> {
        k_subsets(self.n, self.k)
            .into_iter()
            .filter(|j| (1..=self.n).all(|m| gale_leq(m, self.n, self.get(m), j).unwrap()))
            .collect()
    }

    /// I_m = the ⊴_m-minimum of `bases`, which must exist for every m.
    pub fn from_bases(n: usize, k: usize, bases: &[Subset]) -> Result<Self, DiagramError> {
        let mut sets = Vec::with_capacity(n);
        for m in 1..=n {
            let min = bases
                .iter()
                .find(|c| bases.iter().all(|o| gale_leq(m, n, c, o).unwrap()))
                .ok_or(DiagramError::NoMinimum(m))?;
            sets.push(min.clone());
        }
        Self::new(n, k, sets)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Flavor {
    /// Nonnegative cell: bases positive, all else zero.
    Cell,
    /// Stratum: nonzero on the necklace, zero strictly below it.
    Stratum,
}

pub fn necklace_description(neck: &GrassmannNecklace, flavor: Flavor) -> CellDescription {
    let n = neck.n;
    let all = k_subsets(n, neck.k);
    match flavor {
        Flavor::Cell => {
            let bases: BTreeSet<Subset> = neck.bases().into_iter().collect();
            let zero = all.into_iter().filter(|j| !bases.contains(j)).collect();
            CellDescription::new(n, neck.k, zero, BTreeSet::new(), bases, BTreeSet::new())
                .expect("bases and non-bases are disjoint")
        }
        Flavor::Stratum => {
            let nonzero: BTreeSet<Subset> = neck.sets.iter().cloned().collect();
            let zero = all.into_iter().filter(|j| (1..=n).any(|m| gale_lt(m, n, j, neck.get(m)).unwrap())).collect();
            CellDescription::new(n, neck.k, zero, nonzero, BTreeSet::new(), BTreeSet::new())
                .expect("necklace sets are never strictly below themselves")
        }
    }
}

/// Strict inequalities become weak; vanishing conditions stay.
pub fn closure_description(c: &CellDescription) -> CellDescription {
    let nonneg = c.nonneg_set.union(&c.positive_set).cloned().collect();
    CellDescription {
        m: c.m,
        k: c.k,
        zero_set: c.zero_set.clone(),
        nonzero_set: BTreeSet::new(),
        positive_set: BTreeSet::new(),
        nonneg_set: nonneg,
    }
}

/// I_m is the ⊴_m-minimal subset reachable by a flow in N(d).
pub fn le_to_necklace(d: &GoDiagram) -> Result<GrassmannNecklace, DiagramError> {
    if !is_le_diagram(d) {
        return Err(DiagramError::NotLe);
    }
    let net = networks::build_network(d);
    let flows: Vec<Subset> = k_subsets(d.n(), d.k()).into_iter().filter(|j| networks::has_flow(&net, j)).collect();
    GrassmannNecklace::from_bases(d.n(), d.k(), &flows)
}

/// The Le-diagram of the positroid cell with the given necklace: walking the
/// boxes of the shape of I_1 in reading order, a box is ○ exactly when its
/// I_b is not a basis.
pub fn le_from_necklace(neck: &GrassmannNecklace) -> Result<GoDiagram, DiagramError> {
    let bases: BTreeSet<Subset> = neck.bases().into_iter().collect();
    let shape = FerrersShape::new(neck.n, neck.k, neck.get(1).clone())?;
    let mut d = GoDiagram::all_plus(shape.clone());
    let mut u = Permutation::identity(neck.n);
    for b in shape.reading_order() {
        let s = shape.letter(b)?;
        if !u.ascends_at(s) {
            return Err(DiagramError::BadNecklace(format!("box {b:?} would need a black stone")));
        }
        let ib = i_b_formula(&d, b)?;
        if !bases.contains(&ib) {
            d = d.with_fill(b, Fill::WhiteStone);
            u = u.mul_generator(s);
        }
    }
    if !is_le_diagram(&d) {
        return Err(DiagramError::BadNecklace("reconstruction is not a Le-diagram".into()));
    }
    Ok(d)
}

pub fn is_positive_subexpression(d: &GoDiagram) -> bool {
    is_positive(&d.subexpression())
}

/// Every valid filling of the shape. A descent forces •, an ascent branches
/// into + and ○, so the walk never produces an invalid diagram.
pub fn go_diagrams(shape: &FerrersShape) -> Vec<GoDiagram> {
    let order = shape.reading_order();
    let letters: Vec<usize> = order.iter().map(|&b| shape.letter(b).expect("box of the shape")).collect();
    let mut out = Vec::new();
    let mut fills = Vec::with_capacity(order.len());
    walk_fillings(shape, &order, &letters, Permutation::identity(shape.n()), &mut fills, &mut out);
    out
}

fn walk_fillings(
    shape: &FerrersShape,
    order: &[Square],
    letters: &[usize],
    u: Permutation,
    fills: &mut Vec<Fill>,
    out: &mut Vec<GoDiagram>,
) {
    let t = fills.len();
    if t == order.len() {
        let filling = order.iter().copied().zip(fills.iter().copied()).collect();
        out.push(GoDiagram { shape: shape.clone(), filling });
        return;
    }
    let s = letters[t];
    let options: &[Fill] = if u.ascends_at(s) { &[Fill::Plus, Fill::WhiteStone] } else { &[Fill::BlackStone] };
    for &f in options {
        fills.push(f);
        let next = if f.is_stone() { u.mul_generator(s) } else { u.clone() };
        walk_fillings(shape, order, letters, next, fills, out);
        fills.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Fill::{BlackStone as B, Plus as P, WhiteStone as O};

    pub(crate) fn fixture33() -> GoDiagram {
        let shape = FerrersShape::rectangle(3, 3);
        GoDiagram::from_rows(shape, &[vec![P, B, P], vec![B, P, O], vec![P, O, P]]).unwrap()
    }

    fn dw() -> GoDiagram {
        let shape = FerrersShape::rectangle(2, 4);
        GoDiagram::from_rows(shape, &[vec![P, O, P, P], vec![O, P, P, P]]).unwrap()
    }

    #[test]
    fn letters_of_rectangle() {
        let s = FerrersShape::rectangle(3, 3);
        assert_eq!(box_transposition(&s, (1, 6)).unwrap(), 3);
        assert_eq!(box_transposition(&s, (1, 4)).unwrap(), 1);
        assert_eq!(box_transposition(&s, (3, 6)).unwrap(), 5);
        assert!(box_transposition(&s, (4, 6)).is_err());
    }

    #[test]
    fn words_of_shapes() {
        let s = FerrersShape::rectangle(3, 3);
        assert_eq!(word_of_shape(&s).letters(), &[3, 4, 5, 2, 3, 4, 1, 2, 3]);
        assert_eq!(s.grassmannian_permutation().images(), &[4, 5, 6, 1, 2, 3]);
        assert!(word_of_shape(&FerrersShape::empty(5, 2)).is_empty());
        let r = FerrersShape::rectangle(2, 4);
        assert_eq!(r.grassmannian_permutation().images(), &[3, 4, 5, 6, 1, 2]);
        assert!(crate::coxeter::is_reduced(&r.word()));
    }

    #[test]
    fn reading_order_rejects_bad_orders() {
        let s = FerrersShape::rectangle(2, 2);
        let mut order = s.reading_order();
        order.reverse();
        assert!(s.word_with_order(&order).is_err());
    }

    #[test]
    fn shape_from_permutation_examples() {
        let p = Permutation::new(vec![2, 3, 5, 6, 1, 4]).unwrap();
        assert_eq!(shape_from_permutation(&p, 4).unwrap().vertical_steps(), &[2, 3, 5, 6]);
        let bad = Permutation::new(vec![2, 1, 4, 3]).unwrap();
        assert!(shape_from_permutation(&bad, 2).is_err());
        let id = Permutation::identity(4);
        assert_eq!(shape_from_permutation(&id, 2).unwrap().vertical_steps(), &[1, 2]);
    }

    #[test]
    fn validation_examples() {
        assert!(validate_filling(&fixture33()).is_valid());
        assert!(validate_filling(&GoDiagram::all_plus(FerrersShape::rectangle(3, 3))).is_valid());
        let bad = GoDiagram::all_plus(FerrersShape::rectangle(3, 3)).with_fill((1, 6), B);
        let report = validate_filling(&bad);
        assert_eq!(report.offending, vec![((1, 6), Violation::BlackIncreases)]);
    }

    #[test]
    fn le_examples() {
        assert!(is_le_diagram(&dw()));
        assert!(!is_le_diagram(&fixture33()));
        assert!(is_le_diagram(&GoDiagram::all_plus(FerrersShape::rectangle(2, 3))));
    }

    #[test]
    fn deodhar_examples() {
        let empty = GoDiagram::all_plus(FerrersShape::empty(4, 2));
        let c = deodhar_description(&empty);
        assert_eq!(c.nonzero_set.iter().cloned().collect::<Vec<_>>(), vec![vec![3, 4]]);
        assert_eq!(c.zero_set.len(), 5);
        let top = deodhar_description(&GoDiagram::all_plus(FerrersShape::rectangle(2, 4)));
        assert!(top.zero_set.is_empty());
        let c = deodhar_description(&fixture33());
        assert!(c.zero_set.contains(&vec![1, 2, 5]));
        assert!(c.zero_set.contains(&vec![1, 3, 4]));
    }

    #[test]
    fn necklace_round_trip_top_cell() {
        let top = GoDiagram::all_plus(FerrersShape::rectangle(2, 2));
        let neck = le_to_necklace(&top).unwrap();
        assert_eq!(neck, GrassmannNecklace::uniform(4, 2));
        assert!(necklace_description(&neck, Flavor::Cell).zero_set.is_empty());
        assert_eq!(le_from_necklace(&neck).unwrap(), top);
    }

    #[test]
    fn necklace_axiom_checked() {
        assert!(GrassmannNecklace::new(4, 2, vec![vec![1, 2], vec![3, 4], vec![3, 4], vec![1, 4]]).is_err());
        assert!(GrassmannNecklace::new(4, 2, vec![vec![1, 2], vec![2, 3], vec![3, 4], vec![1, 4]]).is_ok());
    }

    #[test]
    fn closure_is_idempotent() {
        let c = necklace_description(&GrassmannNecklace::uniform(5, 2), Flavor::Cell);
        let once = closure_description(&c);
        assert_eq!(closure_description(&once), once);
        assert!(once.positive_set.is_empty());
        assert_eq!(once.nonneg_set.len(), 10);
    }

    #[test]
    fn json_round_trip() {
        let d = fixture33();
        assert_eq!(GoDiagram::from_json(&d.to_json()).unwrap(), d);
    }

    #[test]
    fn go_diagrams_match_brute_force() {
        let shape = FerrersShape::new(5, 2, vec![2, 4]).unwrap();
        let order = shape.reading_order();
        let mut brute = Vec::new();
        for code in 0..3usize.pow(order.len() as u32) {
            let mut c = code;
            let filling: BTreeMap<Square, Fill> = order
                .iter()
                .map(|&b| {
                    let f = [P, O, B][c % 3];
                    c /= 3;
                    (b, f)
                })
                .collect();
            if let Ok(d) = GoDiagram::new(shape.clone(), filling) {
                brute.push(d);
            }
        }
        let mut fast = go_diagrams(&shape);
        let key = |d: &GoDiagram| format!("{d:?}");
        brute.sort_by_key(key);
        fast.sort_by_key(key);
        assert_eq!(fast, brute);
        assert_eq!(go_diagrams(&FerrersShape::empty(3, 1)).len(), 1);
    }
}
