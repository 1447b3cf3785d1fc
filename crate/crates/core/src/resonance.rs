//! Integer-lattice analysis of an eigenvalue spectrum: resonance testing,
//! the complete set of elementary invariance relations (a Hilbert basis
//! computation), sporadic resonances with a completeness certificate, and the
//! canonical decomposition of an arbitrary resonance into a base relation
//! plus invariance factors.
//!
//! Eigenvalues are exact scalars; equating the rational coordinates of
//! `sigma . lambda` to zero turns every question here into a homogeneous
//! linear Diophantine system over the nonnegative integers, which is solved
//! by a bounded breadth-first completion (Contejean-Devie). That algorithm
//! enumerates exactly the minimal nonzero solutions and terminates without a
//! degree cutoff; the sporadic search adds a slack variable capped at 1 and a
//! user-visible degree bound, reporting whether the bound truncated anything.

use crate::coeff::CoeffValue;
use crate::poly::MultiIndex;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use std::collections::HashSet;

/// The eigenvalues of the semisimple linear part, in coordinate order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Spectrum {
    lambdas: Vec<CoeffValue>,
}

impl Spectrum {
    pub fn new(lambdas: Vec<CoeffValue>) -> Self {
        assert!(!lambdas.is_empty(), "spectrum must be nonempty");
        let nsyms = lambdas[0].nsyms();
        for l in &lambdas {
            assert_eq!(l.nsyms(), nsyms, "symbol table mismatch");
        }
        Spectrum { lambdas }
    }

    pub fn n(&self) -> usize {
        self.lambdas.len()
    }

    pub fn nsyms(&self) -> usize {
        self.lambdas[0].nsyms()
    }

    pub fn lambda(&self, i: usize) -> &CoeffValue {
        &self.lambdas[i]
    }

    pub fn lambdas(&self) -> &[CoeffValue] {
        &self.lambdas
    }

    pub fn mu_dot_lambda(&self, mu: &MultiIndex) -> CoeffValue {
        assert_eq!(mu.dim(), self.n(), "dimension mismatch");
        let mut acc = CoeffValue::zero(self.nsyms());
        for (j, &e) in mu.0.iter().enumerate() {
            if e > 0 {
                acc = acc.add(&self.lambdas[j].scale(&crate::coeff::rat_int(e as i64)));
            }
        }
        acc
    }

    /// Integer matrix whose column j is the coordinate vector of lambda_j
    /// over the joint monomial basis, with denominators cleared row by row.
    fn integer_columns(&self) -> Vec<Vec<i64>> {
        let mut basis = std::collections::BTreeSet::new();
        for l in &self.lambdas {
            for (m, _) in l.terms() {
                basis.insert(m.clone());
            }
        }
        let basis: Vec<_> = basis.into_iter().collect();
        let coords: Vec<Vec<BigRational>> = self
            .lambdas
            .iter()
            .map(|l| l.coordinates_in(&basis).expect("joint basis covers all terms"))
            .collect();
        let d = basis.len();
        let n = self.n();
        let mut cols = vec![Vec::with_capacity(d); n];
        for r in 0..d {
            let mut lcm = BigInt::from(1);
            for c in &coords {
                lcm = lcm.lcm(c[r].denom());
            }
            let scale = BigRational::from(lcm);
            for (j, c) in coords.iter().enumerate() {
                let cleared = (&c[r] * &scale).to_integer();
                let v = i64::try_from(cleared)
                    .expect("eigenvalue coordinates too large for the exact solver");
                cols[j].push(v);
            }
        }
        cols
    }
}

/// A relation sigma . lambda = 0 with sigma a nonzero nonnegative multi-index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvarianceRelation {
    pub sigma: MultiIndex,
    pub elementary: bool,
}

/// Classification of a resonant pair (mu, alpha).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ResonanceKind {
    Trivial,
    Sporadic,
    Composite,
}

/// A resonant pair (mu, alpha) with its classification; composite relations
/// carry the canonical decomposition into a base plus invariance factors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResonanceRelation {
    pub mu: MultiIndex,
    pub alpha: usize,
    pub kind: ResonanceKind,
    pub decomposition: Option<Decomposition>,
}

/// mu = base.mu + sum over invariances of multiplicity * sigma.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub base: Box<ResonanceRelation>,
    /// Multiplicity per entry of the invariance list the decomposition was
    /// computed against (same order, same length).
    pub multiplicities: Vec<u32>,
}

/// Result of the sporadic enumeration up to a degree bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SporadicSet {
    pub relations: Vec<ResonanceRelation>,
    pub certified_complete: bool,
    pub degree_bound: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum DecomposeError {
    #[error("the pair (mu, alpha) is not resonant")]
    NotResonant,
    #[error("no decomposition into a base resonance plus invariance relations exists (insufficient sporadic degree bound, or a zero-eigenvalue target)")]
    NoDecomposition,
}

/// True iff mu . lambda = lambda_alpha exactly and |mu| >= 1.
pub fn is_resonant(mu: &MultiIndex, alpha: usize, spec: &Spectrum) -> bool {
    assert!(alpha < spec.n(), "component index out of range");
    mu.degree() >= 1 && spec.mu_dot_lambda(mu) == *spec.lambda(alpha)
}

/// The complete Hilbert basis of sigma . lambda = 0 over nonnegative sigma:
/// every invariance relation is a nonnegative integer combination of these,
/// and none dominates another componentwise.
pub fn elementary_invariance_relations(spec: &Spectrum) -> Vec<InvarianceRelation> {
    let cols = spec.integer_columns();
    let (mut sols, complete) = minimal_solutions(&cols, spec.n(), None);
    debug_assert!(complete);
    sols.sort_by(|a, b| crate::coeff::graded_lex(a, b));
    sols.into_iter()
        .map(|s| InvarianceRelation {
            sigma: MultiIndex(s),
            elementary: true,
        })
        .collect()
}

/// All sporadic resonances (mu, alpha) with |mu| <= degree_bound: resonant,
/// of order at least two, and dominating no invariance relation. The result
/// is certified complete when the completion for every target alpha closed
/// every branch before hitting the bound.
pub fn sporadic_resonances(spec: &Spectrum, degree_bound: u64) -> SporadicSet {
    assert!(degree_bound >= 1, "degree bound must be at least 1");
    let cols = spec.integer_columns();
    let n = spec.n();
    let mut relations = Vec::new();
    let mut certified = true;
    for alpha in 0..n {
        let mut hcols = cols.clone();
        hcols.push(cols[alpha].iter().map(|&v| -v).collect());
        let (sols, complete) = minimal_solutions(&hcols, n, Some(degree_bound));
        certified &= complete;
        for sol in sols {
            if sol[n] != 1 {
                continue;
            }
            let mu = MultiIndex(sol[..n].to_vec());
            if mu.degree() < 2 {
                continue;
            }
            relations.push(ResonanceRelation {
                mu,
                alpha,
                kind: ResonanceKind::Sporadic,
                decomposition: None,
            });
        }
    }
    relations.sort_by(|a, b| a.mu.cmp(&b.mu).then(a.alpha.cmp(&b.alpha)));
    SporadicSet {
        relations,
        certified_complete: certified,
        degree_bound,
    }
}

/// Sporadic enumeration with the bound raised until the result certifies.
pub fn sporadic_resonances_complete(spec: &Spectrum) -> SporadicSet {
    let mut bound = 8;
    loop {
        let set = sporadic_resonances(spec, bound);
        if set.certified_complete {
            return set;
        }
        bound *= 2;
        assert!(
            bound <= 1 << 20,
            "sporadic enumeration failed to certify at any reasonable bound"
        );
    }
}

/// Classify a resonant pair and, for composite relations, produce the
/// canonical decomposition mu = base + sum of elementary invariances: the
/// search prefers a bare base, then extends by invariance indices in
/// ascending order, so the chosen multiset is the lexicographically least
/// over the supplied (canonically sorted) invariance list.
pub fn decompose_resonance(
    mu: &MultiIndex,
    alpha: usize,
    spec: &Spectrum,
    sporadics: &[ResonanceRelation],
    invariances: &[InvarianceRelation],
) -> Result<ResonanceRelation, DecomposeError> {
    if !is_resonant(mu, alpha, spec) {
        return Err(DecomposeError::NotResonant);
    }
    if let Some(beta) = mu.as_unit() {
        debug_assert_eq!(spec.lambda(beta), spec.lambda(alpha));
        return Ok(ResonanceRelation {
            mu: mu.clone(),
            alpha,
            kind: ResonanceKind::Trivial,
            decomposition: None,
        });
    }
    let mut counts = vec![0u32; invariances.len()];
    let base = search(mu, alpha, spec, sporadics, invariances, 0, &mut counts)
        .ok_or(DecomposeError::NoDecomposition)?;
    if counts.iter().all(|&c| c == 0) {
        return Ok(base);
    }
    Ok(ResonanceRelation {
        mu: mu.clone(),
        alpha,
        kind: ResonanceKind::Composite,
        decomposition: Some(Decomposition {
            base: Box::new(base),
            multiplicities: counts,
        }),
    })
}

fn search(
    remaining: &MultiIndex,
    alpha: usize,
    spec: &Spectrum,
    sporadics: &[ResonanceRelation],
    invariances: &[InvarianceRelation],
    start: usize,
    counts: &mut Vec<u32>,
) -> Option<ResonanceRelation> {
    if let Some(beta) = remaining.as_unit() {
        if spec.lambda(beta) == spec.lambda(alpha) {
            return Some(ResonanceRelation {
                mu: remaining.clone(),
                alpha,
                kind: ResonanceKind::Trivial,
                decomposition: None,
            });
        }
    }
    if remaining.degree() >= 2 {
        for s in sporadics {
            if s.mu == *remaining && spec.lambda(s.alpha) == spec.lambda(alpha) {
                return Some(ResonanceRelation {
                    mu: remaining.clone(),
                    alpha,
                    kind: ResonanceKind::Sporadic,
                    decomposition: None,
                });
            }
        }
    }
    for a in start..invariances.len() {
        if let Some(rest) = remaining.checked_sub(&invariances[a].sigma) {
            counts[a] += 1;
            if let Some(base) = search(&rest, alpha, spec, sporadics, invariances, a, counts) {
                return Some(base);
            }
            counts[a] -= 1;
        }
    }
    None
}

/// All matrix-unit positions (beta, alpha) with lambda_beta = lambda_alpha;
/// these span the centralizer of the diagonal linear part. Indices are
/// zero-based and the list is sorted lexicographically.
pub fn linear_centralizer_basis(spec: &Spectrum) -> Vec<(usize, usize)> {
    let n = spec.n();
    let mut out = Vec::new();
    for beta in 0..n {
        for alpha in 0..n {
            if spec.lambda(beta) == spec.lambda(alpha) {
                out.push((beta, alpha));
            }
        }
    }
    out
}

/// Minimal nonzero solutions of sum_i x_i * cols[i] = 0 over nonnegative x,
/// by breadth-first completion from the unit vectors with the negative
/// scalar-product extension rule and pruning against discovered minima.
///
/// Coordinates at index >= n_main are homogenization slacks capped at 1
/// (paths to slack<=1 solutions never pass through slack>=2 prefixes, so the
/// cap loses nothing). `main_cap` bounds the total degree of the first
/// n_main coordinates; the second return value is false when that bound cut
/// off a branch not already dominated by a known minimal solution.
fn minimal_solutions(
    cols: &[Vec<i64>],
    n_main: usize,
    main_cap: Option<u64>,
) -> (Vec<Vec<u32>>, bool) {
    let k = cols.len();
    if k == 0 {
        return (Vec::new(), true);
    }
    let d = cols[0].len();
    let value = |x: &[u32]| -> Vec<i64> {
        let mut v = vec![0i64; d];
        for (i, &xi) in x.iter().enumerate() {
            if xi > 0 {
                for r in 0..d {
                    v[r] += cols[i][r] * xi as i64;
                }
            }
        }
        v
    };
    let dot = |a: &[i64], b: &[i64]| -> i128 {
        a.iter().zip(b).map(|(&x, &y)| x as i128 * y as i128).sum()
    };
    let dominates = |m: &[u32], x: &[u32]| m.iter().zip(x).all(|(&a, &b)| a <= b);
    let main_degree = |x: &[u32]| -> u64 { x[..n_main].iter().map(|&e| e as u64).sum() };

    let mut minimal: Vec<Vec<u32>> = Vec::new();
    let mut complete = true;
    let mut frontier: Vec<Vec<u32>> = (0..k)
        .map(|i| {
            let mut e = vec![0u32; k];
            e[i] = 1;
            e
        })
        .collect();
    while !frontier.is_empty() {
        let mut pending = Vec::new();
        for t in frontier {
            let v = value(&t);
            if v.iter().all(|&x| x == 0) {
                if !minimal.iter().any(|m| dominates(m, &t)) {
                    minimal.push(t);
                }
            } else {
                pending.push((t, v));
            }
        }
        let mut seen: HashSet<Vec<u32>> = HashSet::new();
        let mut next = Vec::new();
        for (t, v) in pending {
            for i in 0..k {
                if i >= n_main && t[i] >= 1 {
                    continue;
                }
                if dot(&v, &cols[i]) >= 0 {
                    continue;
                }
                let mut u = t.clone();
                u[i] += 1;
                if minimal.iter().any(|m| dominates(m, &u)) {
                    continue;
                }
                if let Some(cap) = main_cap {
                    if main_degree(&u) > cap {
                        complete = false;
                        continue;
                    }
                }
                if seen.insert(u.clone()) {
                    next.push(u);
                }
            }
        }
        frontier = next;
    }
    (minimal, complete)
}
