//! Sparse multivariate polynomials over the exact scalar ring, plus the
//! polynomial vector field operations the embedding construction needs:
//! partial and directional derivatives, Lie bracket, and exact substitution.
//!
//! Terms are kept in the crate-wide canonical graded-lex order, which makes
//! every rendering byte-stable. There is no implicit degree truncation; all
//! operations are exact.

use crate::coeff::{graded_lex, CoeffValue, SymbolTable};
use num_complex::Complex64;
use std::cmp::Ordering;
use std::collections::BTreeMap;

/// Exponent vector over the state variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiIndex(pub Vec<u32>);

impl MultiIndex {
    pub fn zero(dim: usize) -> Self {
        MultiIndex(vec![0; dim])
    }

    /// The unit vector e_beta.
    pub fn unit(dim: usize, beta: usize) -> Self {
        let mut v = vec![0; dim];
        v[beta] = 1;
        MultiIndex(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    /// Some(beta) when the index is exactly e_beta.
    pub fn as_unit(&self) -> Option<usize> {
        if self.degree() != 1 {
            return None;
        }
        self.0.iter().position(|&e| e == 1)
    }

    /// Componentwise partial order: self <= other.
    pub fn divides(&self, other: &MultiIndex) -> bool {
        debug_assert_eq!(self.0.len(), other.0.len());
        self.0.iter().zip(&other.0).all(|(&a, &b)| a <= b)
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        debug_assert_eq!(self.0.len(), other.0.len());
        MultiIndex(self.0.iter().zip(&other.0).map(|(&a, &b)| a + b).collect())
    }

    /// Componentwise difference; None if it would go negative.
    pub fn checked_sub(&self, other: &MultiIndex) -> Option<MultiIndex> {
        debug_assert_eq!(self.0.len(), other.0.len());
        let mut out = Vec::with_capacity(self.0.len());
        for (&a, &b) in self.0.iter().zip(&other.0) {
            if a < b {
                return None;
            }
            out.push(a - b);
        }
        Some(MultiIndex(out))
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        graded_lex(&self.0, &other.0)
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl std::fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

/// Sparse polynomial in `dim` variables with exact scalar coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial {
    dim: usize,
    terms: BTreeMap<MultiIndex, CoeffValue>,
}

impl Polynomial {
    pub fn zero(dim: usize) -> Self {
        Polynomial {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(dim: usize, c: CoeffValue) -> Self {
        Self::monomial(dim, MultiIndex::zero(dim), c)
    }

    pub fn variable(dim: usize, idx: usize, nsyms: usize) -> Self {
        Self::monomial(dim, MultiIndex::unit(dim, idx), CoeffValue::one(nsyms))
    }

    pub fn monomial(dim: usize, mi: MultiIndex, c: CoeffValue) -> Self {
        assert_eq!(mi.dim(), dim, "dimension mismatch");
        let mut p = Self::zero(dim);
        if !c.is_zero() {
            p.terms.insert(mi, c);
        }
        p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; 0 for the zero polynomial.
    pub fn degree(&self) -> u64 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &CoeffValue)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, mi: &MultiIndex) -> Option<&CoeffValue> {
        self.terms.get(mi)
    }

    pub fn add_term(&mut self, mi: MultiIndex, c: CoeffValue) {
        assert_eq!(mi.dim(), self.dim, "dimension mismatch");
        if c.is_zero() {
            return;
        }
        match self.terms.entry(mi) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().add(&c);
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Polynomial {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = c.neg();
        }
        out
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let mut out = Self::zero(self.dim);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.add(mb), ca.mul(cb));
            }
        }
        out
    }

    pub fn scale(&self, c: &CoeffValue) -> Polynomial {
        let mut out = Self::zero(self.dim);
        for (m, v) in &self.terms {
            out.add_term(m.clone(), v.mul(c));
        }
        out
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        assert!(
            e >= 1 || !self.is_zero(),
            "zero polynomial raised to the power zero"
        );
        let nsyms = self
            .terms
            .values()
            .next()
            .map(|c| c.nsyms())
            .unwrap_or(1);
        let mut acc = Self::constant(self.dim, CoeffValue::one(nsyms));
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// d/dx_idx. Panics if the index is out of range.
    pub fn partial_derivative(&self, idx: usize) -> Polynomial {
        assert!(idx < self.dim, "variable index out of range");
        let mut out = Self::zero(self.dim);
        for (m, c) in &self.terms {
            let e = m.0[idx];
            if e == 0 {
                continue;
            }
            let mut lowered = m.clone();
            lowered.0[idx] -= 1;
            out.add_term(lowered, c.scale(&crate::coeff::rat_int(e as i64)));
        }
        out
    }

    /// Derivative of `self` along the vector field: sum_j f_j d(self)/dx_j.
    pub fn directional_derivative(&self, field: &PolyVectorField) -> Polynomial {
        assert_eq!(self.dim, field.dim(), "dimension mismatch");
        let mut out = Self::zero(self.dim);
        for j in 0..self.dim {
            out = out.add(&self.partial_derivative(j).mul(&field.components[j]));
        }
        out
    }

    /// Exact substitution x_i -> images[i]; the images must share a common
    /// dimension.
    pub fn substitute(&self, images: &[Polynomial]) -> Polynomial {
        assert_eq!(images.len(), self.dim, "dimension mismatch");
        let target_dim = images.first().map(|p| p.dim).unwrap_or(0);
        for im in images {
            assert_eq!(im.dim, target_dim, "dimension mismatch among images");
        }
        let mut out = Polynomial::zero(target_dim);
        for (m, c) in &self.terms {
            let mut term = Polynomial::constant(target_dim, c.clone());
            for (idx, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    term = term.mul(&images[idx].pow(e));
                }
            }
            out = out.add(&term);
        }
        out
    }

    pub fn eval_numeric(&self, table: &SymbolTable, point: &[Complex64]) -> Complex64 {
        assert_eq!(point.len(), self.dim, "dimension mismatch");
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, c) in &self.terms {
            let mut t = c.eval_numeric(table);
            for (idx, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t *= point[idx].powu(e);
                }
            }
            acc += t;
        }
        acc
    }

    /// Canonical rendering with explicit variable names, terms in graded-lex
    /// order, e.g. `(2 - 3*i)*x1^2*x2`.
    pub fn render(&self, table: &SymbolTable, names: &[String]) -> String {
        assert_eq!(names.len(), self.dim, "dimension mismatch");
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (idx, (m, c)) in self.terms.iter().enumerate() {
            let mono = render_power_product(m, names);
            let (negative, body) = term_body(c, mono, table);
            if idx == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            out.push_str(&body);
        }
        out
    }
}

fn render_power_product(m: &MultiIndex, names: &[String]) -> Option<String> {
    let mut parts = Vec::new();
    for (idx, &e) in m.0.iter().enumerate() {
        if e == 0 {
            continue;
        }
        if e == 1 {
            parts.push(names[idx].clone());
        } else {
            parts.push(format!("{}^{}", names[idx], e));
        }
    }
    if parts.is_empty() {
        None
    } else {
        Some(parts.join("*"))
    }
}

fn term_body(c: &CoeffValue, mono: Option<String>, table: &SymbolTable) -> (bool, String) {
    use num_traits::{One, Signed};
    let mut it = c.terms();
    let first = it.next();
    let single = first.is_some() && it.next().is_none();
    if single {
        let (sm, r) = first.unwrap();
        let negative = r.is_negative();
        let mag = r.abs();
        let mut factors = Vec::new();
        if !mag.is_one() {
            factors.push(crate::coeff::render_rational(&mag));
        }
        if !sm.is_one() {
            factors.push(table.render_monomial(sm));
        }
        if let Some(ms) = mono {
            factors.push(ms);
        }
        if factors.is_empty() {
            factors.push("1".to_string());
        }
        (negative, factors.join("*"))
    } else {
        let cs = c.render(table);
        match mono {
            Some(ms) => (false, format!("({cs})*{ms}")),
            None => (false, cs),
        }
    }
}

/// Polynomial vector field: one component per state variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyVectorField {
    components: Vec<Polynomial>,
}

impl PolyVectorField {
    pub fn new(components: Vec<Polynomial>) -> Self {
        let dim = components.len();
        for c in &components {
            assert_eq!(c.dim(), dim, "dimension mismatch");
        }
        PolyVectorField { components }
    }

    pub fn zero(dim: usize) -> Self {
        Self::new(vec![Polynomial::zero(dim); dim])
    }

    /// The diagonal linear field x_i -> lambda_i x_i.
    pub fn diagonal_linear(lambdas: &[CoeffValue]) -> Self {
        let dim = lambdas.len();
        Self::new(
            lambdas
                .iter()
                .enumerate()
                .map(|(i, l)| Polynomial::monomial(dim, MultiIndex::unit(dim, i), l.clone()))
                .collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn component(&self, i: usize) -> &Polynomial {
        &self.components[i]
    }

    pub fn components(&self) -> &[Polynomial] {
        &self.components
    }

    pub fn degree(&self) -> u64 {
        self.components.iter().map(|p| p.degree()).max().unwrap_or(0)
    }

    pub fn add(&self, other: &PolyVectorField) -> PolyVectorField {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch");
        Self::new(
            self.components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a.add(b))
                .collect(),
        )
    }

    pub fn sub(&self, other: &PolyVectorField) -> PolyVectorField {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch");
        Self::new(
            self.components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a.sub(b))
                .collect(),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(|p| p.is_zero())
    }

    pub fn eval_numeric(&self, table: &SymbolTable, point: &[Complex64]) -> Vec<Complex64> {
        self.components
            .iter()
            .map(|p| p.eval_numeric(table, point))
            .collect()
    }
}

/// Lie bracket [g, f], component i: sum_j (g_j df_i/dx_j - f_j dg_i/dx_j).
pub fn lie_bracket(g: &PolyVectorField, f: &PolyVectorField) -> PolyVectorField {
    assert_eq!(g.dim(), f.dim(), "dimension mismatch");
    let dim = g.dim();
    let mut comps = Vec::with_capacity(dim);
    for i in 0..dim {
        let a = f.component(i).directional_derivative(g);
        let b = g.component(i).directional_derivative(f);
        comps.push(a.sub(&b));
    }
    PolyVectorField::new(comps)
}
