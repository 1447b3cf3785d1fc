//! System files, pipeline orchestration, and canonical reports.
//!
//! A system file is a TOML document carrying the linear part (either the
//! eigenvalues directly or a blockwise real form), the resonant forcing
//! terms, and optional numeric verification settings. All scalars in files
//! are exact: rationals as `p/q` strings, coefficients as lists of
//! `[symbol-monomial, rational]` pairs. Reports come in two renderings, a
//! human text form and a machine TOML form; both are byte-stable for a
//! given input because every underlying container iterates in graded-lex
//! order.

use std::fmt::Write as _;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::coeff::{parse_rational, render_rational, CoeffValue, SymbolTable};
use crate::embed::{
    build_embedding, commutes_with_linear_part, conjugate_field, manifold_residual, real_to_eigen,
    real_view, EigenChange, EmbedError, EmbeddedSystem, NormalFormSystem, RealBlock, RealView,
};
use crate::poly::{MultiIndex, PolyVectorField, Polynomial};
use crate::resonance::{
    elementary_invariance_relations, linear_centralizer_basis, sporadic_resonances,
    InvarianceRelation, Spectrum, SporadicSet,
};
use crate::verify::{verify_split, SplitReport};

pub const DEFAULT_DEGREE_BOUND: u64 = 10;
pub const DEFAULT_T_FINAL: f64 = 1.0;
pub const DEFAULT_STEP: f64 = 1e-3;
pub const DEFAULT_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PipelineError {
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    NormalForm(EmbedError),
    #[error("{0}")]
    Rewrite(String),
    #[error("{0}")]
    Numeric(String),
}

impl PipelineError {
    /// Process exit code for scripting: 2 parse, 3 normal form, 4 rewrite,
    /// 5 numeric.
    pub fn exit_code(&self) -> i32 {
        match self {
            PipelineError::Parse(_) => 2,
            PipelineError::NormalForm(_) => 3,
            PipelineError::Rewrite(_) => 4,
            PipelineError::Numeric(_) => 5,
        }
    }
}

// ---------------------------------------------------------------------------
// file format

/// Raw file mirror; `parse_spec` validates it into a `SystemSpec`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecFile {
    pub schema: u32,
    pub dimension: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree_bound: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eigenvalues: Option<Vec<CoeffLiteral>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub symbols: Vec<SymbolEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub real_blocks: Option<Vec<BlockEntry>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub field_terms: Vec<FieldTermEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verify: Option<VerifyEntry>,
}

/// Exact scalar literal: a sum of `[symbol-monomial, rational]` pairs.
pub type CoeffLiteral = Vec<(String, String)>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymbolEntry {
    pub name: String,
    /// numeric value as (re, im), used only by the numeric phase
    pub value: (f64, f64),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, tag = "kind", rename_all = "snake_case")]
pub enum BlockEntry {
    /// [[a, -omega], [omega, a]] on a coordinate pair
    Rotation { a: String, omega: String },
    /// a single real eigenvalue
    Scalar { value: String },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldTermEntry {
    /// 1-based component the term belongs to
    pub component: usize,
    pub exponents: Vec<u32>,
    pub coeff: CoeffLiteral,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyEntry {
    /// initial state in the file's coordinates, entries as (re, im)
    pub x0: Vec<(f64, f64)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_final: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub step: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
}

/// Linear-part description a file may carry.
#[derive(Clone, Debug)]
pub enum Coordinates {
    /// eigenvalues given directly; the file's coordinates are already the
    /// eigencoordinates
    Eigen { spectrum: Spectrum },
    /// blockwise real linear part; analysis runs in the eigencoordinates of
    /// the stored change of basis
    Real {
        blocks: Vec<RealBlock>,
        change: EigenChange,
    },
}

/// Numeric verification settings with defaults resolved.
#[derive(Clone, Debug, PartialEq)]
pub struct VerifySettings {
    pub x0: Vec<Complex64>,
    pub t_final: f64,
    pub step: f64,
    pub tol: f64,
}

/// A validated system: symbol table, linear part, forcing terms.
#[derive(Clone, Debug)]
pub struct SystemSpec {
    pub dimension: usize,
    pub degree_bound: u64,
    pub table: SymbolTable,
    pub coordinates: Coordinates,
    /// nonlinear/resonant forcing in the file's coordinates; the linear part
    /// is implied by `coordinates`
    pub forcing: PolyVectorField,
    pub verify: Option<VerifySettings>,
}

fn parse_coeff_literal(
    table: &SymbolTable,
    literal: &CoeffLiteral,
    context: &str,
) -> Result<CoeffValue, PipelineError> {
    let mut value = CoeffValue::zero(table.len());
    for (mono_text, rat_text) in literal {
        let (mono, sign) = table
            .parse_monomial(mono_text)
            .map_err(|e| PipelineError::Parse(format!("{context}: {e}")))?;
        let rat = parse_rational(rat_text)
            .map_err(|e| PipelineError::Parse(format!("{context}: {e}")))?;
        value = value.add(&CoeffValue::from_term(table.len(), mono, sign * rat));
    }
    Ok(value)
}

fn parse_block_scalar(
    table: &SymbolTable,
    text: &str,
    context: &str,
) -> Result<CoeffValue, PipelineError> {
    let rat = parse_rational(text)
        .map_err(|e| PipelineError::Parse(format!("{context}: {e}")))?;
    Ok(CoeffValue::from_rational(table.len(), rat))
}

/// Parse and validate a system file.
pub fn parse_spec(text: &str) -> Result<SystemSpec, PipelineError> {
    let file: SpecFile = toml::from_str(text)
        .map_err(|e| PipelineError::Parse(format!("system file: {e}")))?;
    if file.schema != 1 {
        return Err(PipelineError::Parse(format!(
            "unsupported schema {} (this tool reads schema 1)",
            file.schema
        )));
    }
    let n = file.dimension;
    if n == 0 {
        return Err(PipelineError::Parse("dimension must be at least 1".into()));
    }
    let symbol_values: Vec<(String, Complex64)> = file
        .symbols
        .iter()
        .map(|s| (s.name.clone(), Complex64::new(s.value.0, s.value.1)))
        .collect();
    let table = SymbolTable::with_symbols(&symbol_values)
        .map_err(|e| PipelineError::Parse(format!("symbols: {e}")))?;
    let nsyms = table.len();

    let coordinates = match (&file.eigenvalues, &file.real_blocks) {
        (Some(_), Some(_)) => {
            return Err(PipelineError::Parse(
                "give either `eigenvalues` or `real_blocks`, not both".into(),
            ))
        }
        (None, None) => {
            return Err(PipelineError::Parse(
                "the linear part is missing: give `eigenvalues` or `real_blocks`".into(),
            ))
        }
        (Some(entries), None) => {
            if entries.len() != n {
                return Err(PipelineError::Parse(format!(
                    "eigenvalues: expected {n} entries, found {}",
                    entries.len()
                )));
            }
            let mut lambdas = Vec::with_capacity(n);
            for (idx, literal) in entries.iter().enumerate() {
                lambdas.push(parse_coeff_literal(
                    &table,
                    literal,
                    &format!("eigenvalues[{idx}]"),
                )?);
            }
            Coordinates::Eigen {
                spectrum: Spectrum::new(lambdas),
            }
        }
        (None, Some(entries)) => {
            let mut blocks = Vec::with_capacity(entries.len());
            for (idx, entry) in entries.iter().enumerate() {
                let context = format!("real_blocks[{idx}]");
                blocks.push(match entry {
                    BlockEntry::Rotation { a, omega } => RealBlock::Rotation {
                        a: parse_block_scalar(&table, a, &context)?,
                        omega: parse_block_scalar(&table, omega, &context)?,
                    },
                    BlockEntry::Scalar { value } => RealBlock::Scalar {
                        value: parse_block_scalar(&table, value, &context)?,
                    },
                });
            }
            let total: usize = blocks.iter().map(|b| b.size()).sum();
            if total != n {
                return Err(PipelineError::Parse(format!(
                    "real_blocks: blocks cover dimension {total}, the system has dimension {n}"
                )));
            }
            let change = real_to_eigen(&blocks);
            Coordinates::Real { blocks, change }
        }
    };

    let mut components = vec![Polynomial::zero(n); n];
    for (idx, term) in file.field_terms.iter().enumerate() {
        let context = format!("field_terms[{idx}]");
        if term.component == 0 || term.component > n {
            return Err(PipelineError::Parse(format!(
                "{context}: component {} out of range 1..{n}",
                term.component
            )));
        }
        if term.exponents.len() != n {
            return Err(PipelineError::Parse(format!(
                "{context}: exponent vector has length {}, expected {n}",
                term.exponents.len()
            )));
        }
        let coeff = parse_coeff_literal(&table, &term.coeff, &context)?;
        components[term.component - 1]
            .add_term(MultiIndex(term.exponents.clone()), coeff);
    }
    let forcing = PolyVectorField::new(components);

    let verify = match &file.verify {
        None => None,
        Some(entry) => {
            if entry.x0.len() != n {
                return Err(PipelineError::Parse(format!(
                    "verify.x0: expected {n} entries, found {}",
                    entry.x0.len()
                )));
            }
            let settings = VerifySettings {
                x0: entry
                    .x0
                    .iter()
                    .map(|&(re, im)| Complex64::new(re, im))
                    .collect(),
                t_final: entry.t_final.unwrap_or(DEFAULT_T_FINAL),
                step: entry.step.unwrap_or(DEFAULT_STEP),
                tol: entry.tol.unwrap_or(DEFAULT_TOL),
            };
            if settings.t_final <= 0.0 || settings.step <= 0.0 || settings.tol <= 0.0 {
                return Err(PipelineError::Parse(
                    "verify: t_final, step, and tol must be positive".into(),
                ));
            }
            Some(settings)
        }
    };

    let _ = nsyms;
    Ok(SystemSpec {
        dimension: n,
        degree_bound: file.degree_bound.unwrap_or(DEFAULT_DEGREE_BOUND),
        table,
        coordinates,
        forcing,
        verify,
    })
}

fn render_coeff_literal(table: &SymbolTable, value: &CoeffValue) -> CoeffLiteral {
    let (monos, rats) = value.rational_coordinates();
    monos
        .iter()
        .zip(&rats)
        .map(|(m, r)| (table.render_monomial(m), render_rational(r)))
        .collect()
}

impl SystemSpec {
    /// Diagonal or blockwise linear part in the file's coordinates.
    pub fn linear_field(&self) -> PolyVectorField {
        match &self.coordinates {
            Coordinates::Eigen { spectrum } => {
                PolyVectorField::diagonal_linear(spectrum.lambdas())
            }
            Coordinates::Real { blocks, .. } => {
                real_linear_field(blocks, self.table.len())
            }
        }
    }

    /// Full right-hand side (linear part plus forcing) in the file's
    /// coordinates.
    pub fn full_field(&self) -> PolyVectorField {
        self.linear_field().add(&self.forcing)
    }

    /// Spectrum and full field in eigencoordinates; conjugates through the
    /// stored change of basis for real input, identity otherwise.
    pub fn eigen_system(&self) -> (Spectrum, PolyVectorField) {
        match &self.coordinates {
            Coordinates::Eigen { spectrum } => (spectrum.clone(), self.full_field()),
            Coordinates::Real { change, .. } => (
                change.spectrum.clone(),
                conjugate_field(&self.full_field(), change),
            ),
        }
    }

    /// Map a state from the file's coordinates to eigencoordinates.
    pub fn eigen_state(&self, x: &[Complex64]) -> Vec<Complex64> {
        match &self.coordinates {
            Coordinates::Eigen { .. } => x.to_vec(),
            Coordinates::Real { change, .. } => change
                .lambda
                .iter()
                .map(|row| {
                    row.iter()
                        .zip(x)
                        .map(|(c, &v)| c.eval_numeric(&self.table) * v)
                        .sum()
                })
                .collect(),
        }
    }

    /// Canonical file text for this spec; `parse_spec` of the result yields
    /// an equivalent structure.
    pub fn to_toml(&self) -> String {
        let table = &self.table;
        let eigenvalues = match &self.coordinates {
            Coordinates::Eigen { spectrum } => Some(
                spectrum
                    .lambdas()
                    .iter()
                    .map(|l| render_coeff_literal(table, l))
                    .collect(),
            ),
            Coordinates::Real { .. } => None,
        };
        let real_blocks = match &self.coordinates {
            Coordinates::Real { blocks, .. } => Some(
                blocks
                    .iter()
                    .map(|b| match b {
                        RealBlock::Rotation { a, omega } => BlockEntry::Rotation {
                            a: render_rational(&a.as_rational().expect("rational block")),
                            omega: render_rational(&omega.as_rational().expect("rational block")),
                        },
                        RealBlock::Scalar { value } => BlockEntry::Scalar {
                            value: render_rational(&value.as_rational().expect("rational block")),
                        },
                    })
                    .collect(),
            ),
            Coordinates::Eigen { .. } => None,
        };
        let mut field_terms = Vec::new();
        for i in 0..self.dimension {
            for (mono, coeff) in self.forcing.component(i).terms() {
                field_terms.push(FieldTermEntry {
                    component: i + 1,
                    exponents: mono.0.clone(),
                    coeff: render_coeff_literal(table, coeff),
                });
            }
        }
        let symbols = (1..table.len())
            .map(|idx| SymbolEntry {
                name: table.name(idx).to_string(),
                value: (table.value(idx).re, table.value(idx).im),
            })
            .collect();
        let file = SpecFile {
            schema: 1,
            dimension: self.dimension,
            degree_bound: Some(self.degree_bound),
            eigenvalues,
            symbols,
            real_blocks,
            field_terms,
            verify: self.verify.as_ref().map(|v| VerifyEntry {
                x0: v.x0.iter().map(|z| (z.re, z.im)).collect(),
                t_final: Some(v.t_final),
                step: Some(v.step),
                tol: Some(v.tol),
            }),
        };
        toml::to_string(&file).expect("spec serialization cannot fail")
    }
}

fn real_linear_field(blocks: &[RealBlock], nsyms: usize) -> PolyVectorField {
    let n: usize = blocks.iter().map(|b| b.size()).sum();
    let mut comps = vec![Polynomial::zero(n); n];
    let mut pos = 0usize;
    for block in blocks {
        match block {
            RealBlock::Rotation { a, omega } => {
                let x = Polynomial::variable(n, pos, nsyms);
                let y = Polynomial::variable(n, pos + 1, nsyms);
                comps[pos] = x.scale(a).sub(&y.scale(omega));
                comps[pos + 1] = x.scale(omega).add(&y.scale(a));
                pos += 2;
            }
            RealBlock::Scalar { value } => {
                comps[pos] = Polynomial::variable(n, pos, nsyms).scale(value);
                pos += 1;
            }
        }
    }
    PolyVectorField::new(comps)
}

// ---------------------------------------------------------------------------
// pipeline

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Level {
    Analyze,
    Embed,
    Verify,
}

#[derive(Clone, Debug, Default)]
pub struct PipelineOptions {
    pub degree_bound: Option<u64>,
    pub t_final: Option<f64>,
    pub step: Option<f64>,
    pub tol: Option<f64>,
}

/// Output-side certificates, recomputed from the finished embedding rather
/// than trusted from its construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SymbolicChecks {
    /// pulling every enlarged equation back to the x space reproduces the
    /// chain-rule derivative exactly
    pub manifold_invariant: bool,
    /// the invariant-coordinate equations mention no x or w variable
    pub phi_closed: bool,
    /// every (x, w) equation is degree one in (x, w)
    pub quasi_linear: bool,
    /// the input field commutes with its semisimple linear part
    pub normal_form_commutes: bool,
}

impl SymbolicChecks {
    pub fn all_pass(&self) -> bool {
        self.manifold_invariant && self.phi_closed && self.quasi_linear && self.normal_form_commutes
    }
}

fn symbolic_checks(sys: &NormalFormSystem, emb: &EmbeddedSystem) -> SymbolicChecks {
    let manifold_invariant = manifold_residual(sys, emb).iter().all(|p| p.is_zero());
    let enlarged = emb.embedded_field();
    let state = emb.n + emb.r;
    let phi_closed = (0..emb.m).all(|a| {
        enlarged
            .component(state + a)
            .terms()
            .all(|(mono, _)| mono.0[..state].iter().all(|&e| e == 0))
    });
    let quasi_linear = (0..state).all(|row| {
        enlarged
            .component(row)
            .terms()
            .all(|(mono, _)| mono.0[..state].iter().map(|&e| u64::from(e)).sum::<u64>() == 1)
    });
    SymbolicChecks {
        manifold_invariant,
        phi_closed,
        quasi_linear,
        normal_form_commutes: commutes_with_linear_part(sys),
    }
}

/// Real-coordinates rendering of the split, or the reason it is absent.
#[derive(Clone, Debug)]
pub enum RealOutcome {
    NotApplicable,
    Available(RealView),
    Unavailable(String),
}

#[derive(Clone, Debug)]
pub struct EmbeddingAnalysis {
    pub emb: EmbeddedSystem,
    pub checks: SymbolicChecks,
    pub real: RealOutcome,
}

#[derive(Clone, Debug)]
pub struct NumericAnalysis {
    /// initial state in the file's coordinates
    pub x0: Vec<Complex64>,
    pub t_final: f64,
    pub step: f64,
    pub tol: f64,
    pub outcome: Result<SplitReport, String>,
}

impl NumericAnalysis {
    pub fn passed(&self) -> bool {
        matches!(&self.outcome, Ok(report) if report.certified)
    }
}

/// Everything a report renders, plus the structured objects behind it.
#[derive(Clone, Debug)]
pub struct Analysis {
    pub table: SymbolTable,
    pub real_input: bool,
    pub degree_bound: u64,
    pub sys: NormalFormSystem,
    /// input right-hand side in the file's coordinates
    pub input_field: PolyVectorField,
    pub invariances: Vec<InvarianceRelation>,
    pub sporadics: SporadicSet,
    pub centralizer_dim: usize,
    pub embedding: Option<EmbeddingAnalysis>,
    pub numeric: Option<NumericAnalysis>,
}

/// Run the requested stages over a validated spec.
pub fn run_pipeline(
    spec: &SystemSpec,
    level: Level,
    opts: &PipelineOptions,
) -> Result<Analysis, PipelineError> {
    let (spectrum, eigen_field) = spec.eigen_system();
    let sys = NormalFormSystem::new(spectrum, eigen_field).map_err(|e| match e {
        EmbedError::NotNormalForm { .. } => PipelineError::NormalForm(e),
        other => PipelineError::Rewrite(other.to_string()),
    })?;
    let invariances = elementary_invariance_relations(sys.spec());
    let bound = opts.degree_bound.unwrap_or(spec.degree_bound);
    if bound == 0 {
        return Err(PipelineError::Parse("degree bound must be at least 1".into()));
    }
    let sporadics = sporadic_resonances(sys.spec(), bound);
    let centralizer_dim = linear_centralizer_basis(sys.spec()).len();

    let mut analysis = Analysis {
        table: spec.table.clone(),
        real_input: matches!(spec.coordinates, Coordinates::Real { .. }),
        degree_bound: bound,
        sys,
        input_field: spec.full_field(),
        invariances,
        sporadics,
        centralizer_dim,
        embedding: None,
        numeric: None,
    };
    if level < Level::Embed {
        return Ok(analysis);
    }

    if !analysis.sporadics.certified_complete {
        return Err(PipelineError::Rewrite(format!(
            "sporadic enumeration is not certified complete at degree bound {bound}; raise --degree-bound"
        )));
    }
    let emb = build_embedding(
        &analysis.sys,
        &analysis.sporadics.relations,
        &analysis.invariances,
    )
    .map_err(|e| match e {
        EmbedError::NotNormalForm { .. } => PipelineError::NormalForm(e),
        other => PipelineError::Rewrite(other.to_string()),
    })?;
    let checks = symbolic_checks(&analysis.sys, &emb);
    let real = match &spec.coordinates {
        Coordinates::Eigen { .. } => RealOutcome::NotApplicable,
        Coordinates::Real { blocks, change } => match real_view(&emb, change, blocks) {
            Ok(view) => RealOutcome::Available(view),
            Err(e) => RealOutcome::Unavailable(e.to_string()),
        },
    };
    analysis.embedding = Some(EmbeddingAnalysis { emb, checks, real });
    if level < Level::Verify {
        return Ok(analysis);
    }

    let settings = spec.verify.as_ref().ok_or_else(|| {
        PipelineError::Parse(
            "numeric verification needs a [verify] section with an initial state x0".into(),
        )
    })?;
    let t_final = opts.t_final.unwrap_or(settings.t_final);
    let step = opts.step.unwrap_or(settings.step);
    let tol = opts.tol.unwrap_or(settings.tol);
    if t_final <= 0.0 || step <= 0.0 || tol <= 0.0 {
        return Err(PipelineError::Parse(
            "t_final, step, and tol must be positive".into(),
        ));
    }
    let x0_eigen = spec.eigen_state(&settings.x0);
    let emb_ref = &analysis.embedding.as_ref().expect("embedding present").emb;
    let outcome = verify_split(
        &analysis.sys,
        emb_ref,
        &spec.table,
        &x0_eigen,
        t_final,
        step,
        tol,
    )
    .map_err(|e| e.to_string());
    analysis.numeric = Some(NumericAnalysis {
        x0: settings.x0.clone(),
        t_final,
        step,
        tol,
        outcome,
    });
    Ok(analysis)
}

// ---------------------------------------------------------------------------
// rendering

fn format_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else if z.re == 0.0 {
        format!("{}i", z.im)
    } else if z.im < 0.0 {
        format!("{} - {}i", z.re, -z.im)
    } else {
        format!("{} + {}i", z.re, z.im)
    }
}

fn format_residual(x: f64) -> String {
    format!("{x:.3e}")
}

impl Analysis {
    fn n(&self) -> usize {
        self.sys.spec().n()
    }

    /// Names of the file's coordinates.
    fn input_names(&self) -> Vec<String> {
        (1..=self.n()).map(|i| format!("x{i}")).collect()
    }

    /// Names of the eigencoordinates the analysis runs in.
    fn eigen_names(&self) -> Vec<String> {
        let prefix = if self.real_input { "xi" } else { "x" };
        (1..=self.n()).map(|i| format!("{prefix}{i}")).collect()
    }

    fn enlarged_names(&self, emb: &EmbeddedSystem) -> Vec<String> {
        let mut names = self.eigen_names();
        names.extend((1..=emb.r).map(|j| format!("w{j}")));
        names.extend((1..=emb.m).map(|a| format!("phi{a}")));
        names
    }

    fn phi_names(&self, m: usize) -> Vec<String> {
        (1..=m).map(|a| format!("phi{a}")).collect()
    }

    fn render_exponent_monomial(&self, exps: &MultiIndex, names: &[String]) -> String {
        Polynomial::monomial(exps.dim(), exps.clone(), CoeffValue::one(self.table.len()))
            .render(&self.table, names)
    }

    /// Human text report. Canonical: identical input yields identical bytes.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let n = self.n();
        let table = &self.table;
        let input_names = self.input_names();
        let eigen_names = self.eigen_names();

        out.push_str("quasi-linear split analysis\n");
        out.push_str("===========================\n\n");
        let _ = writeln!(out, "state dimension: {n}");
        if table.len() > 1 {
            let syms: Vec<String> = (1..table.len())
                .map(|idx| format!("{} = {}", table.name(idx), format_complex(table.value(idx))))
                .collect();
            let _ = writeln!(out, "symbols: {}", syms.join(", "));
        }
        if self.real_input {
            out.push_str("input coordinates: real block form; analysis in eigencoordinates xi\n");
        }
        out.push_str("eigenvalues:\n");
        for (idx, lambda) in self.sys.spec().lambdas().iter().enumerate() {
            let _ = writeln!(out, "  lambda_{} = {}", idx + 1, lambda.render(table));
        }
        out.push_str("input system:\n");
        for (i, name) in input_names.iter().enumerate() {
            let _ = writeln!(
                out,
                "  d/dt {name} = {}",
                self.input_field.component(i).render(table, &input_names)
            );
        }
        let _ = writeln!(out, "field degree: {}", self.sys.degree());

        out.push_str("\nresonance structure\n");
        out.push_str("-------------------\n");
        let _ = writeln!(
            out,
            "elementary invariance relations: {}",
            self.invariances.len()
        );
        for inv in &self.invariances {
            let _ = writeln!(
                out,
                "  sigma = {}   x^sigma = {}",
                inv.sigma,
                self.render_exponent_monomial(&inv.sigma, &eigen_names)
            );
        }
        let completeness = if self.sporadics.certified_complete {
            "complete"
        } else {
            "NOT certified complete"
        };
        let _ = writeln!(
            out,
            "sporadic resonances: {} ({completeness}, searched through degree {})",
            self.sporadics.relations.len(),
            self.sporadics.degree_bound
        );
        for rel in &self.sporadics.relations {
            let _ = writeln!(
                out,
                "  mu = {} -> component {}   x^mu = {}",
                rel.mu,
                rel.alpha + 1,
                self.render_exponent_monomial(&rel.mu, &eigen_names)
            );
        }
        let _ = writeln!(
            out,
            "linear centralizer dimension: {}",
            self.centralizer_dim
        );

        if let Some(embedding) = &self.embedding {
            let emb = &embedding.emb;
            let names = self.enlarged_names(emb);
            out.push_str("\nembedded quasi-linear system\n");
            out.push_str("----------------------------\n");
            let _ = writeln!(
                out,
                "enlarged state ({} = {} + {} + {}): {}",
                emb.total_dim(),
                emb.n,
                emb.r,
                emb.m,
                names.join(", ")
            );
            for (j, wd) in emb.w_defs.iter().enumerate() {
                let _ = writeln!(
                    out,
                    "  w{} = {}",
                    j + 1,
                    self.render_exponent_monomial(&wd.mu, &eigen_names)
                );
            }
            for (a, sigma) in emb.phi_defs.iter().enumerate() {
                let _ = writeln!(
                    out,
                    "  phi{} = {}",
                    a + 1,
                    self.render_exponent_monomial(sigma, &eigen_names)
                );
            }
            out.push_str("equations:\n");
            let enlarged = emb.embedded_field();
            for (idx, name) in names.iter().enumerate() {
                let _ = writeln!(
                    out,
                    "  d/dt {name} = {}",
                    enlarged.component(idx).render(table, &names)
                );
            }
            out.push_str("coefficient matrix (nonzero entries, polynomials in phi):\n");
            let phi_names = self.phi_names(emb.m);
            let mut any = false;
            for (row, entries) in emb.coeff_matrix.iter().enumerate() {
                for (col, entry) in entries.iter().enumerate() {
                    if entry.is_zero() {
                        continue;
                    }
                    any = true;
                    let _ = writeln!(
                        out,
                        "  M[{}][{}] = {}",
                        row + 1,
                        col + 1,
                        entry.render(table, &phi_names)
                    );
                }
            }
            if !any {
                out.push_str("  (all zero)\n");
            }

            out.push_str("\nsymbolic checks\n");
            out.push_str("---------------\n");
            let checks = &embedding.checks;
            let flag = |b: bool| if b { "PASS" } else { "FAIL" };
            let _ = writeln!(
                out,
                "manifold invariance residual is zero: {}",
                flag(checks.manifold_invariant)
            );
            let _ = writeln!(
                out,
                "invariant subsystem involves phi only: {}",
                flag(checks.phi_closed)
            );
            let _ = writeln!(
                out,
                "enlarged system is linear in (x, w): {}",
                flag(checks.quasi_linear)
            );
            let _ = writeln!(
                out,
                "field commutes with its linear part: {}",
                flag(checks.normal_form_commutes)
            );

            match &embedding.real {
                RealOutcome::NotApplicable => {}
                RealOutcome::Unavailable(reason) => {
                    out.push_str("\nreal-coordinates view\n");
                    out.push_str("---------------------\n");
                    let _ = writeln!(out, "not available: {reason}");
                }
                RealOutcome::Available(view) => {
                    out.push_str("\nreal-coordinates view\n");
                    out.push_str("---------------------\n");
                    let phi_names = self.phi_names(view.m);
                    for (a, sigma) in emb.phi_defs.iter().enumerate() {
                        let pair = sigma.0.iter().position(|&e| e == 1).expect("pair product");
                        let mut sq1 = vec![0u32; n];
                        sq1[pair] = 2;
                        let mut sq2 = vec![0u32; n];
                        sq2[pair + 1] = 2;
                        let mut poly = Polynomial::monomial(
                            n,
                            MultiIndex(sq1),
                            CoeffValue::one(table.len()),
                        );
                        poly = poly.add(&Polynomial::monomial(
                            n,
                            MultiIndex(sq2),
                            CoeffValue::one(table.len()),
                        ));
                        let _ = writeln!(
                            out,
                            "  phi{} = {}",
                            a + 1,
                            poly.render(table, &input_names)
                        );
                    }
                    out.push_str("coefficient matrix (nonzero entries, polynomials in phi):\n");
                    for (row, entries) in view.coeff_matrix.iter().enumerate() {
                        for (col, entry) in entries.iter().enumerate() {
                            if entry.is_zero() {
                                continue;
                            }
                            let _ = writeln!(
                                out,
                                "  M[{}][{}] = {}",
                                row + 1,
                                col + 1,
                                entry.render(table, &phi_names)
                            );
                        }
                    }
                    out.push_str("invariant equations:\n");
                    for (a, rhs) in view.phi_rhs.iter().enumerate() {
                        let _ = writeln!(
                            out,
                            "  d/dt phi{} = {}",
                            a + 1,
                            rhs.render(table, &phi_names)
                        );
                    }
                }
            }
        }

        if let Some(numeric) = &self.numeric {
            out.push_str("\nnumeric split verification\n");
            out.push_str("--------------------------\n");
            let x0: Vec<String> = numeric.x0.iter().map(|&z| format_complex(z)).collect();
            let _ = writeln!(out, "x0 = ({})", x0.join(", "));
            let _ = writeln!(
                out,
                "t_final = {}, step = {}, tol = {:e}",
                numeric.t_final, numeric.step, numeric.tol
            );
            match &numeric.outcome {
                Err(message) => {
                    let _ = writeln!(out, "integration failed: {message}");
                    out.push_str("certified: no\n");
                }
                Ok(report) => {
                    let _ = writeln!(
                        out,
                        "max |w - x^mu| along the flow: {}",
                        format_residual(report.max_psi_residual)
                    );
                    let _ = writeln!(
                        out,
                        "max |phi - x^sigma| along the flow: {}",
                        format_residual(report.max_phi_residual)
                    );
                    let _ = writeln!(
                        out,
                        "max projection gap against the original flow: {}",
                        format_residual(report.max_projection_error)
                    );
                    let _ = writeln!(
                        out,
                        "certified: {}",
                        if report.certified { "yes" } else { "no" }
                    );
                }
            }
        }
        out
    }

    /// Machine report: a TOML document mirroring the text rendering.
    pub fn render_machine(&self) -> String {
        let doc = self.machine_doc();
        toml::to_string(&doc).expect("report serialization cannot fail")
    }

    fn machine_doc(&self) -> ReportDoc {
        let table = &self.table;
        let eigen_names = self.eigen_names();
        let resonance = ResonanceDoc {
            centralizer_dimension: self.centralizer_dim,
            sporadic_complete: self.sporadics.certified_complete,
            sporadic_degree_bound: self.sporadics.degree_bound,
            invariances: self
                .invariances
                .iter()
                .map(|inv| InvarianceDoc {
                    sigma: inv.sigma.0.clone(),
                    monomial: self.render_exponent_monomial(&inv.sigma, &eigen_names),
                    elementary: inv.elementary,
                })
                .collect(),
            sporadics: self
                .sporadics
                .relations
                .iter()
                .map(|rel| SporadicDoc {
                    mu: rel.mu.0.clone(),
                    component: rel.alpha + 1,
                    monomial: self.render_exponent_monomial(&rel.mu, &eigen_names),
                })
                .collect(),
        };
        let embedding = self.embedding.as_ref().map(|embedding| {
            let emb = &embedding.emb;
            let names = self.enlarged_names(emb);
            let phi_names = self.phi_names(emb.m);
            let enlarged = emb.embedded_field();
            EmbeddingDoc {
                n: emb.n,
                r: emb.r,
                m: emb.m,
                state: names.clone(),
                equations: (0..emb.total_dim())
                    .map(|idx| enlarged.component(idx).render(&self.table, &names))
                    .collect(),
                w: emb
                    .w_defs
                    .iter()
                    .map(|wd| WDoc {
                        exponents: wd.mu.0.clone(),
                        component: wd.target + 1,
                    })
                    .collect(),
                phi: emb
                    .phi_defs
                    .iter()
                    .map(|sigma| PhiDoc {
                        sigma: sigma.0.clone(),
                    })
                    .collect(),
                matrix: matrix_entries(&emb.coeff_matrix, table, &phi_names),
                checks: ChecksDoc {
                    manifold_invariant: embedding.checks.manifold_invariant,
                    phi_closed: embedding.checks.phi_closed,
                    quasi_linear: embedding.checks.quasi_linear,
                    normal_form_commutes: embedding.checks.normal_form_commutes,
                },
            }
        });
        let real_view = self.embedding.as_ref().and_then(|embedding| {
            let emb = &embedding.emb;
            match &embedding.real {
                RealOutcome::NotApplicable => None,
                RealOutcome::Unavailable(reason) => Some(RealViewDoc {
                    available: false,
                    reason: Some(reason.clone()),
                    invariants: Vec::new(),
                    equations: Vec::new(),
                    matrix: Vec::new(),
                }),
                RealOutcome::Available(view) => {
                    let phi_names = self.phi_names(view.m);
                    let input_names = self.input_names();
                    let invariants = emb
                        .phi_defs
                        .iter()
                        .map(|sigma| {
                            let pair =
                                sigma.0.iter().position(|&e| e == 1).expect("pair product");
                            let n = self.n();
                            let mut sq1 = vec![0u32; n];
                            sq1[pair] = 2;
                            let mut sq2 = vec![0u32; n];
                            sq2[pair + 1] = 2;
                            let mut poly = Polynomial::monomial(
                                n,
                                MultiIndex(sq1),
                                CoeffValue::one(self.table.len()),
                            );
                            poly = poly.add(&Polynomial::monomial(
                                n,
                                MultiIndex(sq2),
                                CoeffValue::one(self.table.len()),
                            ));
                            poly.render(&self.table, &input_names)
                        })
                        .collect();
                    Some(RealViewDoc {
                        available: true,
                        reason: None,
                        invariants,
                        equations: view
                            .phi_rhs
                            .iter()
                            .map(|p| p.render(&self.table, &phi_names))
                            .collect(),
                        matrix: matrix_entries(&view.coeff_matrix, table, &phi_names),
                    })
                }
            }
        });
        let numeric = self.numeric.as_ref().map(|num| NumericDoc {
            x0: num.x0.iter().map(|z| (z.re, z.im)).collect(),
            t_final: num.t_final,
            step: num.step,
            tol: num.tol,
            certified: num.passed(),
            max_psi_residual: num.outcome.as_ref().ok().map(|r| r.max_psi_residual),
            max_phi_residual: num.outcome.as_ref().ok().map(|r| r.max_phi_residual),
            max_projection_error: num
                .outcome
                .as_ref()
                .ok()
                .map(|r| r.max_projection_error),
            error: num.outcome.as_ref().err().cloned(),
        });
        ReportDoc {
            schema: 1,
            dimension: self.n(),
            degree_bound: self.degree_bound,
            field_degree: self.sys.degree(),
            real_input: self.real_input,
            eigenvalues: self
                .sys
                .spec()
                .lambdas()
                .iter()
                .map(|l| l.render(table))
                .collect(),
            symbols: (1..table.len())
                .map(|idx| SymbolEntry {
                    name: table.name(idx).to_string(),
                    value: (table.value(idx).re, table.value(idx).im),
                })
                .collect(),
            resonance,
            embedding,
            real_view,
            numeric,
        }
    }
}

fn matrix_entries(
    matrix: &[Vec<Polynomial>],
    table: &SymbolTable,
    phi_names: &[String],
) -> Vec<MatrixEntryDoc> {
    let mut out = Vec::new();
    for (row, entries) in matrix.iter().enumerate() {
        for (col, entry) in entries.iter().enumerate() {
            if entry.is_zero() {
                continue;
            }
            out.push(MatrixEntryDoc {
                row: row + 1,
                col: col + 1,
                entry: entry.render(table, phi_names),
            });
        }
    }
    out
}

// machine report mirror; scalar fields come before table-valued ones so the
// TOML serializer never emits a value after a table

#[derive(Serialize)]
struct ReportDoc {
    schema: u32,
    dimension: usize,
    degree_bound: u64,
    field_degree: u64,
    real_input: bool,
    eigenvalues: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    symbols: Vec<SymbolEntry>,
    resonance: ResonanceDoc,
    #[serde(skip_serializing_if = "Option::is_none")]
    embedding: Option<EmbeddingDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    real_view: Option<RealViewDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    numeric: Option<NumericDoc>,
}

#[derive(Serialize)]
struct ResonanceDoc {
    centralizer_dimension: usize,
    sporadic_complete: bool,
    sporadic_degree_bound: u64,
    invariances: Vec<InvarianceDoc>,
    sporadics: Vec<SporadicDoc>,
}

#[derive(Serialize)]
struct InvarianceDoc {
    sigma: Vec<u32>,
    monomial: String,
    elementary: bool,
}

#[derive(Serialize)]
struct SporadicDoc {
    mu: Vec<u32>,
    component: usize,
    monomial: String,
}

#[derive(Serialize)]
struct EmbeddingDoc {
    n: usize,
    r: usize,
    m: usize,
    state: Vec<String>,
    equations: Vec<String>,
    w: Vec<WDoc>,
    phi: Vec<PhiDoc>,
    matrix: Vec<MatrixEntryDoc>,
    checks: ChecksDoc,
}

#[derive(Serialize)]
struct WDoc {
    exponents: Vec<u32>,
    component: usize,
}

#[derive(Serialize)]
struct PhiDoc {
    sigma: Vec<u32>,
}

#[derive(Serialize)]
struct MatrixEntryDoc {
    row: usize,
    col: usize,
    entry: String,
}

#[derive(Serialize)]
struct ChecksDoc {
    manifold_invariant: bool,
    phi_closed: bool,
    quasi_linear: bool,
    normal_form_commutes: bool,
}

#[derive(Serialize)]
struct RealViewDoc {
    available: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    reason: Option<String>,
    invariants: Vec<String>,
    equations: Vec<String>,
    matrix: Vec<MatrixEntryDoc>,
}

#[derive(Serialize)]
struct NumericDoc {
    x0: Vec<(f64, f64)>,
    t_final: f64,
    step: f64,
    tol: f64,
    certified: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    max_psi_residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    max_phi_residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    max_projection_error: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

#[cfg(test)]
mod tests {
    use super::*;

    const NODE_SPEC: &str = r#"
schema = 1
dimension = 2

eigenvalues = [
  [["1", "1"]],
  [["1", "2"]],
]

[[field_terms]]
component = 2
exponents = [2, 0]
coeff = [["1", "1"]]

[verify]
x0 = [[0.4, 0.0], [0.3, 0.0]]
"#;

    const HOPF_SPEC: &str = r#"
schema = 1
dimension = 2

[[symbols]]
name = "mu"
value = [1.0, 0.0]

[[real_blocks]]
kind = "rotation"
a = "0"
omega = "1"

[[field_terms]]
component = 1
exponents = [1, 0]
coeff = [["mu", "1"]]

[[field_terms]]
component = 2
exponents = [0, 1]
coeff = [["mu", "1"]]

[[field_terms]]
component = 1
exponents = [3, 0]
coeff = [["1", "-1"]]

[[field_terms]]
component = 1
exponents = [1, 2]
coeff = [["1", "-1"]]

[[field_terms]]
component = 2
exponents = [2, 1]
coeff = [["1", "-1"]]

[[field_terms]]
component = 2
exponents = [0, 3]
coeff = [["1", "-1"]]

[verify]
x0 = [[0.3, 0.0], [0.2, 0.0]]
"#;

    #[test]
    fn parses_the_node_file() {
        let spec = parse_spec(NODE_SPEC).unwrap();
        assert_eq!(spec.dimension, 2);
        assert_eq!(spec.degree_bound, DEFAULT_DEGREE_BOUND);
        let (spectrum, field) = spec.eigen_system();
        assert_eq!(spectrum.lambda(0), &CoeffValue::from_int(1, 1));
        assert_eq!(spectrum.lambda(1), &CoeffValue::from_int(1, 2));
        assert_eq!(field.component(1).num_terms(), 2);
        let verify = spec.verify.as_ref().unwrap();
        assert_eq!(verify.t_final, DEFAULT_T_FINAL);
        assert_eq!(verify.x0[0], Complex64::new(0.4, 0.0));
    }

    #[test]
    fn round_trips_through_canonical_toml() {
        for text in [NODE_SPEC, HOPF_SPEC] {
            let spec = parse_spec(text).unwrap();
            let reparsed = parse_spec(&spec.to_toml()).unwrap();
            assert_eq!(spec.dimension, reparsed.dimension);
            assert_eq!(spec.degree_bound, reparsed.degree_bound);
            assert_eq!(spec.table, reparsed.table);
            assert_eq!(spec.verify, reparsed.verify);
            let (s1, f1) = spec.eigen_system();
            let (s2, f2) = reparsed.eigen_system();
            assert_eq!(s1.lambdas(), s2.lambdas());
            assert!(f1.sub(&f2).is_zero());
        }
    }

    #[test]
    fn rejects_malformed_files() {
        let cases: &[(&str, &str)] = &[
            ("schema = 2\ndimension = 1\neigenvalues = [[[\"1\", \"1\"]]]", "schema"),
            ("schema = 1\ndimension = 0\neigenvalues = []", "dimension"),
            (
                "schema = 1\ndimension = 1\neigenvalues = [[[\"1\", \"1\"]], [[\"1\", \"1\"]]]",
                "expected 1 entries",
            ),
            (
                "schema = 1\ndimension = 1\neigenvalues = [[[\"q\", \"1\"]]]",
                "unknown symbol",
            ),
            (
                "schema = 1\ndimension = 1\neigenvalues = [[[\"1\", \"1/0\"]]]",
                "denominator",
            ),
            ("schema = 1\ndimension = 2", "linear part is missing"),
            (
                "schema = 1\ndimension = 1\neigenvalues = [[[\"1\", \"1\"]]]\n[[real_blocks]]\nkind = \"scalar\"\nvalue = \"1\"",
                "not both",
            ),
            (
                "schema = 1\ndimension = 2\neigenvalues = [[[\"1\", \"1\"]], [[\"1\", \"2\"]]]\n[[field_terms]]\ncomponent = 3\nexponents = [1, 0]\ncoeff = [[\"1\", \"1\"]]",
                "out of range",
            ),
            (
                "schema = 1\ndimension = 2\neigenvalues = [[[\"1\", \"1\"]], [[\"1\", \"2\"]]]\n[[field_terms]]\ncomponent = 1\nexponents = [1]\ncoeff = [[\"1\", \"1\"]]",
                "length",
            ),
            (
                "schema = 1\ndimension = 1\neigenvalues = [[[\"1\", \"1\"]]]\nunexpected = 3",
                "unexpected",
            ),
        ];
        for (text, needle) in cases {
            let err = parse_spec(text).unwrap_err();
            assert_eq!(err.exit_code(), 2, "{text}");
            let message = err.to_string();
            assert!(
                message.contains(needle),
                "`{message}` should mention `{needle}`"
            );
        }
    }

    #[test]
    fn empty_field_is_a_valid_linear_system() {
        let spec =
            parse_spec("schema = 1\ndimension = 1\neigenvalues = [[[\"1\", \"1\"]]]").unwrap();
        let analysis = run_pipeline(&spec, Level::Embed, &PipelineOptions::default()).unwrap();
        assert!(analysis.embedding.unwrap().checks.all_pass());
    }

    #[test]
    fn node_pipeline_produces_the_known_split() {
        let spec = parse_spec(NODE_SPEC).unwrap();
        let analysis = run_pipeline(&spec, Level::Verify, &PipelineOptions::default()).unwrap();
        assert_eq!(analysis.invariances.len(), 0);
        assert_eq!(analysis.sporadics.relations.len(), 1);
        assert_eq!(analysis.centralizer_dim, 2);
        let text = analysis.render_text();
        assert!(text.contains("d/dt x1 = x1\n"));
        assert!(text.contains("d/dt x2 = 2*x2 + w1\n"));
        assert!(text.contains("d/dt w1 = 2*w1\n"));
        assert!(text.contains("certified: yes"));
        assert!(analysis.numeric.as_ref().unwrap().passed());
        let machine = analysis.render_machine();
        let parsed: toml::Value = toml::from_str(&machine).unwrap();
        assert_eq!(
            parsed["resonance"]["centralizer_dimension"].as_integer(),
            Some(2)
        );
        assert_eq!(parsed["numeric"]["certified"].as_bool(), Some(true));
    }

    #[test]
    fn hopf_pipeline_exposes_the_real_view() {
        let spec = parse_spec(HOPF_SPEC).unwrap();
        let analysis = run_pipeline(&spec, Level::Verify, &PipelineOptions::default()).unwrap();
        assert!(analysis.real_input);
        assert_eq!(analysis.invariances.len(), 1);
        assert_eq!(analysis.sporadics.relations.len(), 0);
        let embedding = analysis.embedding.as_ref().unwrap();
        assert!(embedding.checks.all_pass());
        let view = match &embedding.real {
            RealOutcome::Available(view) => view,
            other => panic!("expected a real view, got {other:?}"),
        };
        assert_eq!(view.n, 2);
        assert_eq!(view.m, 1);
        let text = analysis.render_text();
        assert!(text.contains("real-coordinates view"));
        assert!(text.contains("phi1 = x1^2 + x2^2"));
        assert!(analysis.numeric.as_ref().unwrap().passed());
    }

    #[test]
    fn reports_are_byte_stable() {
        let spec = parse_spec(HOPF_SPEC).unwrap();
        let a = run_pipeline(&spec, Level::Embed, &PipelineOptions::default()).unwrap();
        let b = run_pipeline(&spec, Level::Embed, &PipelineOptions::default()).unwrap();
        assert_eq!(a.render_text(), b.render_text());
        assert_eq!(a.render_machine(), b.render_machine());
    }

    #[test]
    fn non_normal_form_input_maps_to_exit_code_3() {
        let text = r#"
schema = 1
dimension = 2
eigenvalues = [
  [["1", "1"]],
  [["1", "2"]],
]

[[field_terms]]
component = 1
exponents = [3, 0]
coeff = [["1", "1"]]
"#;
        let spec = parse_spec(text).unwrap();
        let err = run_pipeline(&spec, Level::Analyze, &PipelineOptions::default()).unwrap_err();
        assert_eq!(err.exit_code(), 3);
        assert!(err.to_string().contains("normal form"));
    }

    #[test]
    fn verify_without_settings_is_a_parse_error() {
        let spec =
            parse_spec("schema = 1\ndimension = 1\neigenvalues = [[[\"1\", \"1\"]]]").unwrap();
        let err = run_pipeline(&spec, Level::Verify, &PipelineOptions::default()).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }
}
