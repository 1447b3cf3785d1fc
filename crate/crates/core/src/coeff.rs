//! Exact scalar arithmetic for eigenvalues and coefficients.
//!
//! A scalar is a Q-linear combination of monomials in a fixed symbol list.
//! Symbol 0 is always the imaginary unit `i`, reduced by `i^2 = -1`, so its
//! exponent is stored as 0 or 1. Any further symbols (pi, a frequency, a
//! control parameter, ...) are treated as algebraically independent over
//! Q(i). Equality is decided coefficient-wise; nothing here touches floats
//! except the explicit numeric evaluation used by the integrator.

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

/// Exact rational scalar: reduced fraction, positive denominator.
pub type Rational = BigRational;

/// Rational from numerator and denominator. Panics on a zero denominator.
pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(p.into(), q.into())
}

/// Rational from an integer.
pub fn rat_int(p: i64) -> Rational {
    Rational::from_integer(p.into())
}

/// Parse `p` or `p/q` with optional sign. A zero denominator is an error.
pub fn parse_rational(s: &str) -> Result<Rational, String> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (s, None),
    };
    let p: num_bigint::BigInt = num
        .parse()
        .map_err(|_| format!("invalid integer `{num}` in rational `{s}`"))?;
    let q: num_bigint::BigInt = match den {
        Some(d) => d
            .parse()
            .map_err(|_| format!("invalid integer `{d}` in rational `{s}`"))?,
        None => 1.into(),
    };
    if q.is_zero() {
        return Err(format!("zero denominator in rational `{s}`"));
    }
    Ok(Rational::new(p, q))
}

/// Render as `p` or `p/q` (reduced, sign on the numerator).
pub fn render_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Exponent vector over the symbol table. Index 0 is the imaginary unit and
/// stays in {0, 1} inside a `CoeffValue`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SymMonomial(pub Vec<u32>);

impl SymMonomial {
    pub fn one(nsyms: usize) -> Self {
        SymMonomial(vec![0; nsyms])
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    /// Product with `i^2 -> -1` reduction; the bool reports a sign flip.
    fn mul(&self, other: &SymMonomial) -> (SymMonomial, bool) {
        debug_assert_eq!(self.0.len(), other.0.len());
        let mut exps: Vec<u32> = self
            .0
            .iter()
            .zip(&other.0)
            .map(|(&a, &b)| a + b)
            .collect();
        let mut negate = false;
        if !exps.is_empty() && exps[0] >= 2 {
            // exponents entering are 0/1 each, so the sum is at most 2
            exps[0] -= 2;
            negate = true;
        }
        (SymMonomial(exps), negate)
    }
}

/// Canonical graded-lex order used everywhere in this crate: lower total
/// degree first; within a degree the lexicographically greater exponent
/// vector comes first (so for symbols (i, pi) the order is 1, i, pi, i*pi).
pub fn graded_lex(a: &[u32], b: &[u32]) -> Ordering {
    let da: u64 = a.iter().map(|&e| e as u64).sum();
    let db: u64 = b.iter().map(|&e| e as u64).sum();
    da.cmp(&db).then_with(|| b.cmp(a))
}

impl Ord for SymMonomial {
    fn cmp(&self, other: &Self) -> Ordering {
        graded_lex(&self.0, &other.0)
    }
}

impl PartialOrd for SymMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Symbol names and their numeric values. Entry 0 is always `i`.
#[derive(Clone, Debug, PartialEq)]
pub struct SymbolTable {
    names: Vec<String>,
    values: Vec<Complex64>,
}

impl Default for SymbolTable {
    fn default() -> Self {
        Self::new()
    }
}

impl SymbolTable {
    /// Table containing only the imaginary unit.
    pub fn new() -> Self {
        SymbolTable {
            names: vec!["i".to_string()],
            values: vec![Complex64::new(0.0, 1.0)],
        }
    }

    /// Table with `i` plus the given transcendental symbols.
    pub fn with_symbols(symbols: &[(String, Complex64)]) -> Result<Self, String> {
        let mut table = Self::new();
        for (name, value) in symbols {
            table.declare(name, *value)?;
        }
        Ok(table)
    }

    pub fn declare(&mut self, name: &str, value: Complex64) -> Result<usize, String> {
        if name.is_empty()
            || !name.chars().next().unwrap().is_ascii_alphabetic()
            || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
        {
            return Err(format!("invalid symbol name `{name}`"));
        }
        if self.names.iter().any(|n| n == name) {
            return Err(format!("duplicate symbol `{name}`"));
        }
        self.names.push(name.to_string());
        self.values.push(value);
        Ok(self.names.len() - 1)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        false // always holds `i`
    }

    pub fn name(&self, idx: usize) -> &str {
        &self.names[idx]
    }

    pub fn value(&self, idx: usize) -> Complex64 {
        self.values[idx]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Render a symbol monomial, `1` for the empty product.
    pub fn render_monomial(&self, m: &SymMonomial) -> String {
        assert_eq!(m.0.len(), self.len(), "symbol table mismatch");
        let mut parts = Vec::new();
        for (idx, &e) in m.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if e == 1 {
                parts.push(self.name(idx).to_string());
            } else {
                parts.push(format!("{}^{}", self.name(idx), e));
            }
        }
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }

    /// Parse a monomial literal: `1` or `name[^exp]` factors joined by `*`.
    /// `i` powers reduce mod `i^2 = -1`; the returned rational is the sign.
    pub fn parse_monomial(&self, s: &str) -> Result<(SymMonomial, Rational), String> {
        let s = s.trim();
        let mut exps = vec![0u32; self.len()];
        if s == "1" {
            return Ok((SymMonomial(exps), Rational::one()));
        }
        for factor in s.split('*') {
            let factor = factor.trim();
            let (name, exp) = match factor.split_once('^') {
                Some((n, e)) => {
                    let exp: u32 = e
                        .trim()
                        .parse()
                        .map_err(|_| format!("invalid exponent in `{factor}`"))?;
                    (n.trim(), exp)
                }
                None => (factor, 1),
            };
            let idx = self
                .index_of(name)
                .ok_or_else(|| format!("unknown symbol `{name}`"))?;
            exps[idx] += exp;
        }
        let mut sign = Rational::one();
        if exps[0] >= 2 {
            if (exps[0] / 2) % 2 == 1 {
                sign = -sign;
            }
            exps[0] %= 2;
        }
        Ok((SymMonomial(exps), sign))
    }
}

/// Exact scalar: a Q-linear combination of symbol monomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoeffValue {
    nsyms: usize,
    terms: BTreeMap<SymMonomial, Rational>,
}

impl CoeffValue {
    pub fn zero(nsyms: usize) -> Self {
        CoeffValue {
            nsyms,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nsyms: usize) -> Self {
        Self::from_rational(nsyms, Rational::one())
    }

    pub fn from_rational(nsyms: usize, r: Rational) -> Self {
        let mut v = Self::zero(nsyms);
        if !r.is_zero() {
            v.terms.insert(SymMonomial::one(nsyms), r);
        }
        v
    }

    pub fn from_int(nsyms: usize, n: i64) -> Self {
        Self::from_rational(nsyms, rat_int(n))
    }

    /// The imaginary unit.
    pub fn imaginary(nsyms: usize) -> Self {
        let mut m = SymMonomial::one(nsyms);
        m.0[0] = 1;
        Self::from_term(nsyms, m, Rational::one())
    }

    /// A declared symbol as a scalar.
    pub fn symbol(nsyms: usize, idx: usize) -> Self {
        assert!(idx < nsyms, "symbol index out of range");
        let mut m = SymMonomial::one(nsyms);
        m.0[idx] = 1;
        Self::from_term(nsyms, m, Rational::one())
    }

    pub fn from_term(nsyms: usize, m: SymMonomial, r: Rational) -> Self {
        assert_eq!(m.0.len(), nsyms, "symbol table mismatch");
        assert!(m.0[0] <= 1, "unreduced imaginary exponent");
        let mut v = Self::zero(nsyms);
        if !r.is_zero() {
            v.terms.insert(m, r);
        }
        v
    }

    /// Gaussian rational `re + im*i`.
    pub fn gauss(nsyms: usize, re: Rational, im: Rational) -> Self {
        let mut v = Self::from_rational(nsyms, re);
        if !im.is_zero() {
            let mut m = SymMonomial::one(nsyms);
            m.0[0] = 1;
            v.terms.insert(m, im);
        }
        v
    }

    pub fn nsyms(&self) -> usize {
        self.nsyms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True when no term carries a factor of the imaginary unit; such a
    /// value is real whenever the declared symbols take real values.
    pub fn is_i_free(&self) -> bool {
        self.terms.keys().all(|m| m.0[0] == 0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&SymMonomial, &Rational)> {
        self.terms.iter()
    }

    fn add_term(&mut self, m: SymMonomial, r: Rational) {
        if r.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(r);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + &r;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &CoeffValue) -> CoeffValue {
        assert_eq!(self.nsyms, other.nsyms, "symbol table mismatch");
        let mut out = self.clone();
        for (m, r) in &other.terms {
            out.add_term(m.clone(), r.clone());
        }
        out
    }

    pub fn neg(&self) -> CoeffValue {
        let mut out = self.clone();
        for r in out.terms.values_mut() {
            *r = -r.clone();
        }
        out
    }

    pub fn sub(&self, other: &CoeffValue) -> CoeffValue {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &CoeffValue) -> CoeffValue {
        assert_eq!(self.nsyms, other.nsyms, "symbol table mismatch");
        let mut out = Self::zero(self.nsyms);
        for (ma, ra) in &self.terms {
            for (mb, rb) in &other.terms {
                let (m, negate) = ma.mul(mb);
                let mut r = ra * rb;
                if negate {
                    r = -r;
                }
                out.add_term(m, r);
            }
        }
        out
    }

    pub fn scale(&self, r: &Rational) -> CoeffValue {
        if r.is_zero() {
            return Self::zero(self.nsyms);
        }
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v = v.clone() * r;
        }
        out
    }

    pub fn pow(&self, mut e: u32) -> CoeffValue {
        let mut base = self.clone();
        let mut acc = Self::one(self.nsyms);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// If the value is a plain rational (no symbols), return it.
    pub fn as_rational(&self) -> Option<Rational> {
        if self.terms.is_empty() {
            return Some(Rational::zero());
        }
        if self.terms.len() == 1 {
            let (m, r) = self.terms.iter().next().unwrap();
            if m.is_one() {
                return Some(r.clone());
            }
        }
        None
    }

    /// Numeric evaluation under the table's symbol values.
    pub fn eval_numeric(&self, table: &SymbolTable) -> Complex64 {
        assert_eq!(self.nsyms, table.len(), "symbol table mismatch");
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, r) in &self.terms {
            let mut term = Complex64::new(r.to_f64().expect("rational out of f64 range"), 0.0);
            for (idx, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    term *= table.value(idx).powu(e);
                }
            }
            acc += term;
        }
        acc
    }

    /// Coordinates over the divisor closure of the monomials appearing in
    /// `self`, as a Q-vector-space basis in canonical order. Example:
    /// `2 - 3i` gives basis (1, i) and coordinates (2, -3).
    pub fn rational_coordinates(&self) -> (Vec<SymMonomial>, Vec<Rational>) {
        let mut basis = BTreeSet::new();
        for m in self.terms.keys() {
            close_divisors(m, &mut basis);
        }
        if basis.is_empty() {
            basis.insert(SymMonomial::one(self.nsyms));
        }
        let basis: Vec<SymMonomial> = basis.into_iter().collect();
        let coords = self
            .coordinates_in(&basis)
            .expect("divisor closure covers all terms");
        (basis, coords)
    }

    /// Coordinates over an explicit basis; None if some term lies outside it.
    pub fn coordinates_in(&self, basis: &[SymMonomial]) -> Option<Vec<Rational>> {
        let mut coords = vec![Rational::zero(); basis.len()];
        for (m, r) in &self.terms {
            let pos = basis.iter().position(|b| b == m)?;
            coords[pos] = r.clone();
        }
        Some(coords)
    }

    /// Canonical rendering, terms in graded-lex order: `2 - 3*i`.
    pub fn render(&self, table: &SymbolTable) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (idx, (m, r)) in self.terms.iter().enumerate() {
            let negative = r.is_negative();
            let mag = r.abs();
            let mono = if m.is_one() {
                None
            } else {
                Some(table.render_monomial(m))
            };
            let piece = match mono {
                None => render_rational(&mag),
                Some(ms) if mag.is_one() => ms,
                Some(ms) => format!("{}*{}", render_rational(&mag), ms),
            };
            if idx == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            out.push_str(&piece);
        }
        out
    }
}

fn close_divisors(m: &SymMonomial, into: &mut BTreeSet<SymMonomial>) {
    // enumerate every componentwise-smaller exponent vector
    let mut cur = vec![0u32; m.0.len()];
    loop {
        into.insert(SymMonomial(cur.clone()));
        let mut k = 0;
        loop {
            if k == cur.len() {
                return;
            }
            if cur[k] < m.0[k] {
                cur[k] += 1;
                break;
            }
            cur[k] = 0;
            k += 1;
        }
    }
}
