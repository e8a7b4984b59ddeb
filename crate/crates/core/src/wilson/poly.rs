//! Sparse multivariate polynomials over ℚ in the entries c_{p,q} of C(W) and
//! one auxiliary parameter t.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::exact::{format_q, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    /// c_{p,q}: row p, column q, both 1-based.
    C(usize, usize),
    T,
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::C(p, q) => write!(f, "c_{{{p},{q}}}"),
            Var::T => write!(f, "t"),
        }
    }
}

/// Sorted (variable, exponent) pairs with positive exponents.
pub type Monomial = Vec<(Var, u32)>;

fn mono_mul(a: &Monomial, b: &Monomial) -> Monomial {
    let mut m: BTreeMap<Var, u32> = a.iter().copied().collect();
    for &(v, e) in b {
        *m.entry(v).or_insert(0) += e;
    }
    m.into_iter().collect()
}

/// Canonical form: no zero coefficients; the zero polynomial has no terms.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SparsePolynomial {
    terms: BTreeMap<Monomial, Q>,
}

impl SparsePolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Q) -> Self {
        let mut p = Self::zero();
        p.add_term(Vec::new(), c);
        p
    }

    pub fn var(v: Var) -> Self {
        Self::scaled_var(v, Q::one())
    }

    pub fn scaled_var(v: Var, c: Q) -> Self {
        let mut p = Self::zero();
        p.add_term(vec![(v, 1)], c);
        p
    }

    fn add_term(&mut self, m: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m.clone()).or_insert_with(Q::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Q)> {
        self.terms.iter()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|m| m.iter().map(|x| x.1).sum()).max().unwrap_or(0)
    }

    pub fn eval(&self, at: &dyn Fn(Var) -> Q) -> Q {
        self.terms.iter().fold(Q::zero(), |acc, (m, c)| {
            let v = m.iter().fold(c.clone(), |a, &(x, e)| {
                let base = at(x);
                (0..e).fold(a, |b, _| b * &base)
            });
            acc + v
        })
    }
}

impl Add for &SparsePolynomial {
    type Output = SparsePolynomial;
    fn add(self, o: &SparsePolynomial) -> SparsePolynomial {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Neg for &SparsePolynomial {
    type Output = SparsePolynomial;
    fn neg(self) -> SparsePolynomial {
        SparsePolynomial { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
}

impl Sub for &SparsePolynomial {
    type Output = SparsePolynomial;
    fn sub(self, o: &SparsePolynomial) -> SparsePolynomial {
        self + &(-o)
    }
}

impl Mul for &SparsePolynomial {
    type Output = SparsePolynomial;
    fn mul(self, o: &SparsePolynomial) -> SparsePolynomial {
        let mut out = SparsePolynomial::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                out.add_term(mono_mul(ma, mb), ca * cb);
            }
        }
        out
    }
}

impl fmt::Display for SparsePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| {
                let vars: Vec<String> =
                    m.iter().map(|&(v, e)| if e == 1 { v.to_string() } else { format!("{v}^{e}") }).collect();
                match (vars.is_empty(), c == &Q::one(), c == &-Q::one()) {
                    (true, _, _) => format_q(c),
                    (false, true, _) => vars.join("*"),
                    (false, _, true) => format!("-{}", vars.join("*")),
                    _ => format!("{}*{}", format_q(c), vars.join("*")),
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + ").replace("+ -", "- "))
    }
}
