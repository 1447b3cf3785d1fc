//! The dimension-increasing construction: given a field in normal form and
//! its resonance structure, adjoin one variable w_j per sporadic resonance
//! monomial and one variable phi_a per elementary invariance monomial, and
//! rewrite every right-hand side so that
//!
//!   - the (x, w) block becomes quasi-linear, eta' = M(phi) eta,
//!   - the phi block becomes an autonomous polynomial system phi' = Z(phi).
//!
//! The rewriting is canonical (graded-lex preference at every choice point),
//! so the output is deterministic even when syzygies among the invariance
//! monomials make representations non-unique. `manifold_residual` recomputes
//! everything by direct substitution and chain rule, giving an independent
//! exactness certificate for each constructed instance.

use crate::coeff::{rat, CoeffValue};
use crate::poly::{lie_bracket, MultiIndex, Polynomial, PolyVectorField};
use crate::resonance::{
    decompose_resonance, is_resonant, DecomposeError, InvarianceRelation, ResonanceKind,
    ResonanceRelation, Spectrum,
};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum EmbedError {
    #[error("field is not in normal form: {count} non-resonant term(s), first at component {component} with exponents {monomial}")]
    NotNormalForm {
        count: usize,
        monomial: MultiIndex,
        component: usize,
    },
    #[error("cannot rewrite monomial {monomial} in component {component}: no decomposition over the supplied resonance sets (raise the sporadic degree bound, or the target eigenvalue is zero)")]
    RewriteFailure {
        monomial: MultiIndex,
        component: usize,
    },
    #[error("polynomial is not invariant: monomial {monomial} has nonzero eigenvalue pairing")]
    NotInvariant { monomial: MultiIndex },
}

/// A polynomial field together with the spectrum of its diagonal linear
/// part; construction verifies the resonance condition term by term.
#[derive(Clone, Debug)]
pub struct NormalFormSystem {
    spec: Spectrum,
    field: PolyVectorField,
    degree: u64,
}

impl NormalFormSystem {
    pub fn new(spec: Spectrum, field: PolyVectorField) -> Result<Self, EmbedError> {
        assert_eq!(field.dim(), spec.n(), "dimension mismatch");
        let mut offenders = Vec::new();
        for i in 0..field.dim() {
            for (m, _) in field.component(i).terms() {
                if !is_resonant(m, i, &spec) {
                    offenders.push((m.clone(), i));
                }
            }
        }
        if let Some((monomial, component)) = offenders.first().cloned() {
            return Err(EmbedError::NotNormalForm {
                count: offenders.len(),
                monomial,
                component,
            });
        }
        let degree = field.degree();
        Ok(NormalFormSystem {
            spec,
            field,
            degree,
        })
    }

    pub fn spec(&self) -> &Spectrum {
        &self.spec
    }

    pub fn field(&self) -> &PolyVectorField {
        &self.field
    }

    pub fn degree(&self) -> u64 {
        self.degree
    }

    /// The diagonal linear field with the same spectrum.
    pub fn linear_part(&self) -> PolyVectorField {
        PolyVectorField::diagonal_linear(self.spec.lambdas())
    }
}

/// Definition of one adjoined quasi-linear variable: w = x^mu, entering the
/// equations of components whose eigenvalue equals lambda_target.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WDef {
    pub mu: MultiIndex,
    pub target: usize,
}

/// The enlarged system on (x, w, phi).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmbeddedSystem {
    pub n: usize,
    pub r: usize,
    pub m: usize,
    pub nsyms: usize,
    pub w_defs: Vec<WDef>,
    pub phi_defs: Vec<MultiIndex>,
    /// (n+r) x (n+r); entries are polynomials in the m phi variables.
    pub coeff_matrix: Vec<Vec<Polynomial>>,
    /// m polynomials in the m phi variables.
    pub phi_rhs: Vec<Polynomial>,
}

/// One adjoined variable per distinct sporadic monomial. Relations sharing a
/// monomial (possible with repeated eigenvalues) define the same function of
/// x, so only the first target is kept.
pub fn w_definitions(sporadics: &[ResonanceRelation]) -> Vec<WDef> {
    let mut defs: Vec<WDef> = Vec::new();
    for s in sporadics {
        if defs.iter().any(|d| d.mu == s.mu) {
            continue;
        }
        defs.push(WDef {
            mu: s.mu.clone(),
            target: s.alpha,
        });
    }
    defs
}

/// A right-hand side that is linear in (x, w) with phi-dependent
/// coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuasiLinearForm {
    /// One polynomial in phi per x variable.
    pub x_coeffs: Vec<Polynomial>,
    /// One polynomial in phi per w variable, aligned with `w_definitions`.
    pub w_coeffs: Vec<Polynomial>,
}

/// Rewrite a polynomial whose every monomial is resonant for component
/// `target` as sum_beta a_beta(phi) x_beta + sum_j c_j(phi) w_j. Each
/// monomial factors through its canonical resonance decomposition: the base
/// picks the column, the invariance multiset becomes the phi-monomial.
pub fn rewrite_quasilinear(
    p: &Polynomial,
    target: usize,
    spec: &Spectrum,
    sporadics: &[ResonanceRelation],
    invariances: &[InvarianceRelation],
) -> Result<QuasiLinearForm, EmbedError> {
    let n = spec.n();
    let w_defs = w_definitions(sporadics);
    let r = w_defs.len();
    let m = invariances.len();
    let nsyms = spec.nsyms();
    let mut x_coeffs = vec![Polynomial::zero(m); n];
    let mut w_coeffs = vec![Polynomial::zero(m); r];
    for (mono, c) in p.terms() {
        let rel = decompose_resonance(mono, target, spec, sporadics, invariances).map_err(
            |e| match e {
                DecomposeError::NotResonant | DecomposeError::NoDecomposition => {
                    EmbedError::RewriteFailure {
                        monomial: mono.clone(),
                        component: target,
                    }
                }
            },
        )?;
        let (base, phi_exps) = match rel.kind {
            ResonanceKind::Trivial | ResonanceKind::Sporadic => (rel.clone(), vec![0u32; m]),
            ResonanceKind::Composite => {
                let d = rel.decomposition.as_ref().expect("composite carries data");
                ((*d.base).clone(), d.multiplicities.clone())
            }
        };
        let phi_mono = MultiIndex(phi_exps);
        let addend = Polynomial::monomial(m, phi_mono, c.clone());
        match base.kind {
            ResonanceKind::Trivial => {
                let beta = base.mu.as_unit().expect("trivial base is a unit vector");
                x_coeffs[beta] = x_coeffs[beta].add(&addend);
            }
            ResonanceKind::Sporadic => {
                let j = w_defs
                    .iter()
                    .position(|d| {
                        d.mu == base.mu && spec.lambda(d.target) == spec.lambda(target)
                    })
                    .ok_or_else(|| EmbedError::RewriteFailure {
                        monomial: mono.clone(),
                        component: target,
                    })?;
                w_coeffs[j] = w_coeffs[j].add(&addend);
            }
            ResonanceKind::Composite => unreachable!("base of a decomposition is never composite"),
        }
    }
    let _ = nsyms;
    Ok(QuasiLinearForm { x_coeffs, w_coeffs })
}

/// Rewrite a polynomial whose every monomial x^sigma satisfies
/// sigma . lambda = 0 as a polynomial in the invariance monomials
/// phi_a = x^{sigma^(a)}. Among the (possibly many) exponent vectors c with
/// sum_a c_a sigma^(a) = sigma, the graded-lex least is chosen.
pub fn rewrite_invariant(
    p: &Polynomial,
    phi_defs: &[MultiIndex],
    spec: &Spectrum,
) -> Result<Polynomial, EmbedError> {
    let m = phi_defs.len();
    let mut out = Polynomial::zero(m);
    for (mono, c) in p.terms() {
        if !spec.mu_dot_lambda(mono).is_zero() {
            return Err(EmbedError::NotInvariant {
                monomial: mono.clone(),
            });
        }
        let mut candidates = Vec::new();
        let mut counts = vec![0u32; m];
        expansions(mono.clone(), phi_defs, 0, &mut counts, &mut candidates);
        let best = candidates
            .into_iter()
            .min_by(|a, b| crate::coeff::graded_lex(a, b))
            .unwrap_or_else(|| {
                panic!(
                    "invariant monomial {mono} not representable over the supplied invariance monomials; the list must be the complete elementary set"
                )
            });
        out.add_term(MultiIndex(best), c.clone());
    }
    Ok(out)
}

fn expansions(
    remaining: MultiIndex,
    phi_defs: &[MultiIndex],
    idx: usize,
    counts: &mut Vec<u32>,
    found: &mut Vec<Vec<u32>>,
) {
    if remaining.degree() == 0 {
        found.push(counts.clone());
        return;
    }
    if idx == phi_defs.len() {
        return;
    }
    // exhaust multiplicities of phi_idx, highest first; order does not
    // matter since all candidates are collected
    let mut reach = 0u32;
    let mut probe = remaining.clone();
    while let Some(next) = probe.checked_sub(&phi_defs[idx]) {
        reach += 1;
        probe = next;
    }
    for k in (0..=reach).rev() {
        let mut rem = remaining.clone();
        for _ in 0..k {
            rem = rem.checked_sub(&phi_defs[idx]).expect("within reach");
        }
        counts[idx] = k;
        expansions(rem, phi_defs, idx + 1, counts, found);
    }
    counts[idx] = 0;
}

/// Build the full enlarged system. The sporadic list should be certified
/// complete; an incomplete list surfaces as RewriteFailure on the monomial
/// that cannot be factored.
pub fn build_embedding(
    sys: &NormalFormSystem,
    sporadics: &[ResonanceRelation],
    invariances: &[InvarianceRelation],
) -> Result<EmbeddedSystem, EmbedError> {
    let spec = sys.spec();
    let n = spec.n();
    let nsyms = spec.nsyms();
    let w_defs = w_definitions(sporadics);
    let r = w_defs.len();
    let phi_defs: Vec<MultiIndex> = invariances.iter().map(|i| i.sigma.clone()).collect();
    let m = phi_defs.len();

    let mut coeff_matrix = vec![vec![Polynomial::zero(m); n + r]; n + r];
    let fill_row = |row: usize,
                        p: &Polynomial,
                        target: usize,
                        coeff_matrix: &mut Vec<Vec<Polynomial>>|
     -> Result<(), EmbedError> {
        let form = rewrite_quasilinear(p, target, spec, sporadics, invariances)?;
        for (beta, q) in form.x_coeffs.into_iter().enumerate() {
            coeff_matrix[row][beta] = q;
        }
        for (j, q) in form.w_coeffs.into_iter().enumerate() {
            coeff_matrix[row][n + j] = q;
        }
        Ok(())
    };

    for i in 0..n {
        fill_row(i, sys.field().component(i), i, &mut coeff_matrix)?;
    }
    for (j, wd) in w_defs.iter().enumerate() {
        let wmono = Polynomial::monomial(n, wd.mu.clone(), CoeffValue::one(nsyms));
        let h = wmono.directional_derivative(sys.field());
        fill_row(n + j, &h, wd.target, &mut coeff_matrix)?;
    }

    let mut phi_rhs = Vec::with_capacity(m);
    for sigma in &phi_defs {
        let pmono = Polynomial::monomial(n, sigma.clone(), CoeffValue::one(nsyms));
        let z = pmono.directional_derivative(sys.field());
        phi_rhs.push(rewrite_invariant(&z, &phi_defs, spec)?);
    }

    Ok(EmbeddedSystem {
        n,
        r,
        m,
        nsyms,
        w_defs,
        phi_defs,
        coeff_matrix,
        phi_rhs,
    })
}

impl EmbeddedSystem {
    pub fn total_dim(&self) -> usize {
        self.n + self.r + self.m
    }

    /// Map a polynomial in the m phi variables into the full (x, w, phi)
    /// variable space.
    fn lift_phi(&self, p: &Polynomial) -> Polynomial {
        let total = self.total_dim();
        let mut out = Polynomial::zero(total);
        for (mono, c) in p.terms() {
            let mut exps = vec![0u32; total];
            exps[self.n + self.r..].copy_from_slice(&mono.0);
            out.add_term(MultiIndex(exps), c.clone());
        }
        out
    }

    /// The enlarged right-hand side as one polynomial field over
    /// (x_1..x_n, w_1..w_r, phi_1..phi_m).
    pub fn embedded_field(&self) -> PolyVectorField {
        let total = self.total_dim();
        let mut comps = Vec::with_capacity(total);
        for row in &self.coeff_matrix {
            let mut rhs = Polynomial::zero(total);
            for (l, entry) in row.iter().enumerate() {
                if entry.is_zero() {
                    continue;
                }
                let eta = Polynomial::variable(total, l, self.nsyms);
                rhs = rhs.add(&self.lift_phi(entry).mul(&eta));
            }
            comps.push(rhs);
        }
        for z in &self.phi_rhs {
            comps.push(self.lift_phi(z));
        }
        PolyVectorField::new(comps)
    }

    /// Monomial images of the enlarged coordinates on the embedded manifold:
    /// x_i -> x_i, w_j -> x^{mu_j}, phi_a -> x^{sigma_a}.
    pub fn manifold_images(&self) -> Vec<Polynomial> {
        let mut images = Vec::with_capacity(self.total_dim());
        for i in 0..self.n {
            images.push(Polynomial::variable(self.n, i, self.nsyms));
        }
        for wd in &self.w_defs {
            images.push(Polynomial::monomial(
                self.n,
                wd.mu.clone(),
                CoeffValue::one(self.nsyms),
            ));
        }
        for sigma in &self.phi_defs {
            images.push(Polynomial::monomial(
                self.n,
                sigma.clone(),
                CoeffValue::one(self.nsyms),
            ));
        }
        images
    }
}

/// Exactness certificate: pull every embedded equation back to the x space
/// and subtract the direct chain-rule derivative of the coordinate it
/// extends. All components are identically zero precisely when the enlarged
/// system restricts to the original one on the embedded manifold.
pub fn manifold_residual(sys: &NormalFormSystem, emb: &EmbeddedSystem) -> Vec<Polynomial> {
    let images = emb.manifold_images();
    let embedded = emb.embedded_field();
    let mut residuals = Vec::with_capacity(emb.total_dim());
    for (idx, image) in images.iter().enumerate() {
        let pulled = embedded.component(idx).substitute(&images);
        let direct = image.directional_derivative(sys.field());
        residuals.push(pulled.sub(&direct));
    }
    residuals
}

/// Certificate that the input commutes with its diagonal linear part.
pub fn commutes_with_linear_part(sys: &NormalFormSystem) -> bool {
    lie_bracket(&sys.linear_part(), sys.field()).is_zero()
}

/// One block of a real linear part: a 2x2 rotation-scaling or a scalar.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RealBlock {
    /// [[a, -omega], [omega, a]] acting on a coordinate pair.
    Rotation { a: CoeffValue, omega: CoeffValue },
    /// A single real eigenvalue.
    Scalar { value: CoeffValue },
}

impl RealBlock {
    pub fn size(&self) -> usize {
        match self {
            RealBlock::Rotation { .. } => 2,
            RealBlock::Scalar { .. } => 1,
        }
    }
}

/// Change of coordinates xi = Lambda x diagonalizing a blockwise real linear
/// part, with exact inverse and the resulting spectrum.
#[derive(Clone, Debug)]
pub struct EigenChange {
    pub lambda: Vec<Vec<CoeffValue>>,
    pub lambda_inv: Vec<Vec<CoeffValue>>,
    pub spectrum: Spectrum,
}

/// For each rotation block the pair (x1, x2) maps to
/// xi1 = (x1 - i x2)/2, xi2 = (x1 + i x2)/2 with eigenvalues a -/+ i omega;
/// scalar blocks pass through unchanged.
pub fn real_to_eigen(blocks: &[RealBlock]) -> EigenChange {
    assert!(!blocks.is_empty(), "at least one block required");
    let nsyms = match &blocks[0] {
        RealBlock::Rotation { a, .. } => a.nsyms(),
        RealBlock::Scalar { value } => value.nsyms(),
    };
    let dim: usize = blocks.iter().map(|b| b.size()).sum();
    let zero = || CoeffValue::zero(nsyms);
    let mut lam = vec![vec![zero(); dim]; dim];
    let mut inv = vec![vec![zero(); dim]; dim];
    let mut lambdas = Vec::with_capacity(dim);
    let i_unit = CoeffValue::imaginary(nsyms);
    let half = CoeffValue::from_rational(nsyms, rat(1, 2));
    let one = CoeffValue::one(nsyms);
    let mut pos = 0usize;
    for b in blocks {
        match b {
            RealBlock::Rotation { a, omega } => {
                assert_eq!(a.nsyms(), nsyms, "symbol table mismatch");
                assert_eq!(omega.nsyms(), nsyms, "symbol table mismatch");
                // rows of Lambda
                lam[pos][pos] = half.clone();
                lam[pos][pos + 1] = half.mul(&i_unit).neg();
                lam[pos + 1][pos] = half.clone();
                lam[pos + 1][pos + 1] = half.mul(&i_unit);
                // rows of the inverse
                inv[pos][pos] = one.clone();
                inv[pos][pos + 1] = one.clone();
                inv[pos + 1][pos] = i_unit.clone();
                inv[pos + 1][pos + 1] = i_unit.neg();
                let rot = i_unit.mul(omega);
                lambdas.push(a.sub(&rot));
                lambdas.push(a.add(&rot));
                pos += 2;
            }
            RealBlock::Scalar { value } => {
                assert_eq!(value.nsyms(), nsyms, "symbol table mismatch");
                lam[pos][pos] = one.clone();
                inv[pos][pos] = one.clone();
                lambdas.push(value.clone());
                pos += 1;
            }
        }
    }
    EigenChange {
        lambda: lam,
        lambda_inv: inv,
        spectrum: Spectrum::new(lambdas),
    }
}

/// Conjugate a field by the coordinate change: the returned field expresses
/// the same dynamics in the eigen coordinates, f_eigen = Lambda f(Lambda^-1 xi).
pub fn conjugate_field(field: &PolyVectorField, change: &EigenChange) -> PolyVectorField {
    let dim = field.dim();
    assert_eq!(dim, change.lambda.len(), "dimension mismatch");
    let nsyms = change.spectrum.nsyms();
    // images: x_i = sum_j (Lambda^-1)_{ij} xi_j
    let images: Vec<Polynomial> = (0..dim)
        .map(|i| {
            let mut p = Polynomial::zero(dim);
            for j in 0..dim {
                if !change.lambda_inv[i][j].is_zero() {
                    p.add_term(MultiIndex::unit(dim, j), change.lambda_inv[i][j].clone());
                }
            }
            p
        })
        .collect();
    let pushed: Vec<Polynomial> = (0..dim)
        .map(|i| field.component(i).substitute(&images))
        .collect();
    let comps: Vec<Polynomial> = (0..dim)
        .map(|k| {
            let mut p = Polynomial::zero(dim);
            for (i, q) in pushed.iter().enumerate() {
                if !change.lambda[k][i].is_zero() {
                    p = p.add(&q.scale(&change.lambda[k][i]));
                }
            }
            p
        })
        .collect();
    let _ = nsyms;
    PolyVectorField::new(comps)
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum RealViewError {
    #[error("real view is only available when no w variables are present")]
    SporadicsPresent,
    #[error("invariance monomial #{index} is not a single rotation-pair product; real view unsupported")]
    UnsupportedInvariant { index: usize },
    #[error("entry ({row}, {col}) failed to become real; input was not the conjugate of a real field")]
    NotReal { row: usize, col: usize },
}

/// The split system expressed back in the real coordinates of a blockwise
/// real linear part: x' = M(phi) x with phi_a = |pair_a|^2 real invariants
/// and an autonomous real phi system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealView {
    pub n: usize,
    pub m: usize,
    pub coeff_matrix: Vec<Vec<Polynomial>>,
    pub phi_rhs: Vec<Polynomial>,
}

/// Convert an embedding built from conjugated real input back to real
/// coordinates. Supported when there are no w variables and every invariance
/// monomial is the product of one rotation pair (xi_{2p-1} xi_{2p}); that
/// product equals (x_{2p-1}^2 + x_{2p}^2)/4, so the real invariant is
/// phi_real = 4 phi and the matrix becomes Lambda^-1 M(phi_real/4) Lambda.
pub fn real_view(
    emb: &EmbeddedSystem,
    change: &EigenChange,
    blocks: &[RealBlock],
) -> Result<RealView, RealViewError> {
    if emb.r != 0 {
        return Err(RealViewError::SporadicsPresent);
    }
    let n = emb.n;
    let m = emb.m;
    assert_eq!(
        blocks.iter().map(|b| b.size()).sum::<usize>(),
        n,
        "dimension mismatch"
    );
    let mut pair_starts = Vec::new();
    let mut pos = 0usize;
    for b in blocks {
        if let RealBlock::Rotation { .. } = b {
            pair_starts.push(pos);
        }
        pos += b.size();
    }
    for (a, sigma) in emb.phi_defs.iter().enumerate() {
        let ok = pair_starts.iter().any(|&p| {
            let mut want = vec![0u32; n];
            want[p] = 1;
            want[p + 1] = 1;
            sigma.0 == want
        });
        if !ok {
            return Err(RealViewError::UnsupportedInvariant { index: a });
        }
    }
    let quarter = CoeffValue::from_rational(emb.nsyms, rat(1, 4));
    let images: Vec<Polynomial> = (0..m)
        .map(|a| Polynomial::monomial(m, MultiIndex::unit(m, a), quarter.clone()))
        .collect();
    let subst =
        |p: &Polynomial| -> Polynomial { if m == 0 { p.clone() } else { p.substitute(&images) } };
    let mut coeff_matrix = vec![vec![Polynomial::zero(m); n]; n];
    for i in 0..n {
        for j in 0..n {
            let mut acc = Polynomial::zero(m);
            for k in 0..n {
                if change.lambda_inv[i][k].is_zero() {
                    continue;
                }
                for l in 0..n {
                    if change.lambda[l][j].is_zero() || emb.coeff_matrix[k][l].is_zero() {
                        continue;
                    }
                    let scalar = change.lambda_inv[i][k].mul(&change.lambda[l][j]);
                    acc = acc.add(&subst(&emb.coeff_matrix[k][l]).scale(&scalar));
                }
            }
            for (_, c) in acc.terms() {
                if !c.is_i_free() {
                    return Err(RealViewError::NotReal { row: i, col: j });
                }
            }
            coeff_matrix[i][j] = acc;
        }
    }
    let four = CoeffValue::from_int(emb.nsyms, 4);
    let mut phi_rhs = Vec::with_capacity(m);
    for (a, z) in emb.phi_rhs.iter().enumerate() {
        let real = subst(z).scale(&four);
        for (_, c) in real.terms() {
            if !c.is_i_free() {
                return Err(RealViewError::NotReal { row: n + a, col: 0 });
            }
        }
        phi_rhs.push(real);
    }
    Ok(RealView {
        n,
        m,
        coeff_matrix,
        phi_rhs,
    })
}

/// Multiply two square matrices of exact scalars.
pub fn matrix_product(a: &[Vec<CoeffValue>], b: &[Vec<CoeffValue>]) -> Vec<Vec<CoeffValue>> {
    let n = a.len();
    assert!(n > 0 && b.len() == n, "dimension mismatch");
    let nsyms = a[0][0].nsyms();
    let mut out = vec![vec![CoeffValue::zero(nsyms); n]; n];
    for i in 0..n {
        for j in 0..n {
            let mut acc = CoeffValue::zero(nsyms);
            for (k, bk) in b.iter().enumerate() {
                acc = acc.add(&a[i][k].mul(&bk[j]));
            }
            out[i][j] = acc;
        }
    }
    out
}
