//! Floating-point cross-checks of the split construction: integrate the
//! original and enlarged systems side by side, measure how well the flow
//! stays on the embedded manifold (w = x^mu, phi = x^sigma) and how well the
//! x block of the enlarged flow tracks the original one, locate equilibria
//! of the autonomous phi system, and evaluate the limiting constant-matrix
//! linear system at a given phi.

use crate::coeff::SymbolTable;
use crate::embed::{EmbeddedSystem, NormalFormSystem};
use crate::poly::{Polynomial, PolyVectorField};
use num_complex::Complex64;

#[derive(Clone, Debug, thiserror::Error)]
pub enum VerifyError {
    #[error("state became non-finite at t = {time}")]
    NonFinite { time: f64 },
}

/// Fixed-step numeric solution; the final step is shortened so the last
/// sample lands exactly on t_final.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<Vec<Complex64>>,
}

impl Trajectory {
    pub fn last_state(&self) -> &[Complex64] {
        self.states.last().expect("trajectory is never empty")
    }
}

/// One lowered term: machine coefficient plus the (variable, exponent)
/// pairs of its monomial.
type CompiledTerm = (Complex64, Vec<(usize, u32)>);

/// Polynomial field with coefficients lowered to machine complex numbers
/// once, so integration does not re-evaluate exact scalars per step.
struct CompiledField {
    dim: usize,
    components: Vec<Vec<CompiledTerm>>,
}

impl CompiledField {
    fn new(field: &PolyVectorField, table: &SymbolTable) -> Self {
        let dim = field.dim();
        let components = field
            .components()
            .iter()
            .map(|p| {
                p.terms()
                    .map(|(m, c)| {
                        let powers: Vec<(usize, u32)> = m
                            .0
                            .iter()
                            .enumerate()
                            .filter(|&(_, &e)| e > 0)
                            .map(|(i, &e)| (i, e))
                            .collect();
                        (c.eval_numeric(table), powers)
                    })
                    .collect()
            })
            .collect();
        CompiledField { dim, components }
    }

    fn eval_into(&self, state: &[Complex64], out: &mut [Complex64]) {
        for (i, terms) in self.components.iter().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for (c, powers) in terms {
                let mut t = *c;
                for &(idx, e) in powers {
                    t *= state[idx].powu(e);
                }
                acc += t;
            }
            out[i] = acc;
        }
    }
}

/// Classical fourth-order Runge-Kutta over complex state vectors.
pub fn integrate(
    field: &PolyVectorField,
    table: &SymbolTable,
    x0: &[Complex64],
    t_final: f64,
    step: f64,
) -> Result<Trajectory, VerifyError> {
    assert!(step > 0.0 && t_final > 0.0, "step and horizon must be positive");
    assert_eq!(x0.len(), field.dim(), "dimension mismatch");
    let f = CompiledField::new(field, table);
    let dim = f.dim;
    let mut times = vec![0.0];
    let mut states = vec![x0.to_vec()];
    let mut t = 0.0_f64;
    let mut y = x0.to_vec();
    let mut k1 = vec![Complex64::new(0.0, 0.0); dim];
    let mut k2 = k1.clone();
    let mut k3 = k1.clone();
    let mut k4 = k1.clone();
    let mut tmp = k1.clone();
    while t < t_final {
        let h = step.min(t_final - t);
        f.eval_into(&y, &mut k1);
        for i in 0..dim {
            tmp[i] = y[i] + k1[i] * (h / 2.0);
        }
        f.eval_into(&tmp, &mut k2);
        for i in 0..dim {
            tmp[i] = y[i] + k2[i] * (h / 2.0);
        }
        f.eval_into(&tmp, &mut k3);
        for i in 0..dim {
            tmp[i] = y[i] + k3[i] * h;
        }
        f.eval_into(&tmp, &mut k4);
        for i in 0..dim {
            y[i] += (k1[i] + (k2[i] + k3[i]) * 2.0 + k4[i]) * (h / 6.0);
        }
        t += h;
        if y.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(VerifyError::NonFinite { time: t });
        }
        times.push(t);
        states.push(y.clone());
    }
    Ok(Trajectory { times, states })
}

/// Value of the monomial x^mu at a complex point.
pub fn monomial_value(x: &[Complex64], mu: &[u32]) -> Complex64 {
    let mut acc = Complex64::new(1.0, 0.0);
    for (v, &e) in x.iter().zip(mu) {
        if e > 0 {
            acc *= v.powu(e);
        }
    }
    acc
}

/// Initial state of the enlarged system on the embedded manifold:
/// (x0, x0^mu for each w, x0^sigma for each phi).
pub fn lift_initial(emb: &EmbeddedSystem, x0: &[Complex64]) -> Vec<Complex64> {
    assert_eq!(x0.len(), emb.n, "dimension mismatch");
    let mut y = x0.to_vec();
    for wd in &emb.w_defs {
        y.push(monomial_value(x0, &wd.mu.0));
    }
    for sigma in &emb.phi_defs {
        y.push(monomial_value(x0, &sigma.0));
    }
    y
}

/// Numeric certificate for one initial condition.
#[derive(Clone, Copy, Debug)]
pub struct SplitReport {
    /// max over t and j of |w_j(t) - x(t)^{mu_j}| along the enlarged flow
    pub max_psi_residual: f64,
    /// same for the phi coordinates against x(t)^{sigma_a}
    pub max_phi_residual: f64,
    /// sup-norm gap between the original flow and the x block of the
    /// enlarged flow
    pub max_projection_error: f64,
    pub certified: bool,
}

/// Compare an original trajectory with an enlarged one sampled on the same
/// time grid.
pub fn split_report_from_trajectories(
    emb: &EmbeddedSystem,
    original: &Trajectory,
    enlarged: &Trajectory,
    tol: f64,
) -> SplitReport {
    assert_eq!(
        original.times.len(),
        enlarged.times.len(),
        "trajectories must share the time grid"
    );
    let mut psi = 0.0_f64;
    let mut phi = 0.0_f64;
    let mut proj = 0.0_f64;
    for (orig, full) in original.states.iter().zip(&enlarged.states) {
        let x = &full[..emb.n];
        for (j, wd) in emb.w_defs.iter().enumerate() {
            let gap = (full[emb.n + j] - monomial_value(x, &wd.mu.0)).norm();
            psi = psi.max(gap);
        }
        for (a, sigma) in emb.phi_defs.iter().enumerate() {
            let gap = (full[emb.n + emb.r + a] - monomial_value(x, &sigma.0)).norm();
            phi = phi.max(gap);
        }
        for i in 0..emb.n {
            proj = proj.max((orig[i] - full[i]).norm());
        }
    }
    SplitReport {
        max_psi_residual: psi,
        max_phi_residual: phi,
        max_projection_error: proj,
        certified: psi < tol && phi < tol && proj < tol,
    }
}

/// Integrate both systems from a manifold-lifted initial condition and
/// report the residuals.
pub fn verify_split(
    sys: &NormalFormSystem,
    emb: &EmbeddedSystem,
    table: &SymbolTable,
    x0: &[Complex64],
    t_final: f64,
    step: f64,
    tol: f64,
) -> Result<SplitReport, VerifyError> {
    let original = integrate(sys.field(), table, x0, t_final, step)?;
    let y0 = lift_initial(emb, x0);
    let enlarged = integrate(&emb.embedded_field(), table, &y0, t_final, step)?;
    Ok(split_report_from_trajectories(
        emb, &original, &enlarged, tol,
    ))
}

/// Zeros of the autonomous phi system inside a box.
#[derive(Clone, Debug)]
pub struct PhiEquilibria {
    pub zeros: Vec<Vec<f64>>,
    /// the right-hand side vanished at every sample: a continuum of
    /// equilibria rather than isolated points
    pub degenerate: bool,
    /// false when the phi dimension exceeds the supported searches (m <= 2)
    pub supported: bool,
}

const EQ_ACCEPT: f64 = 1e-10;

/// Locate equilibria of phi' = Z(phi) for real phi in the box [lo, hi]:
/// sign-change bisection on a sample grid for m = 1, grid-seeded damped
/// Newton for m = 2. Roots are refined to |Z| < 1e-10 and deduplicated
/// within `resolution`.
pub fn phi_equilibria(
    phi_rhs: &[Polynomial],
    table: &SymbolTable,
    lo: &[f64],
    hi: &[f64],
    resolution: f64,
) -> PhiEquilibria {
    let m = phi_rhs.len();
    assert_eq!(lo.len(), m, "dimension mismatch");
    assert_eq!(hi.len(), m, "dimension mismatch");
    assert!(resolution > 0.0, "resolution must be positive");
    match m {
        0 => PhiEquilibria {
            zeros: Vec::new(),
            degenerate: false,
            supported: true,
        },
        1 => equilibria_line(&phi_rhs[0], table, lo[0], hi[0], resolution),
        2 => equilibria_plane(phi_rhs, table, lo, hi, resolution),
        _ => PhiEquilibria {
            zeros: Vec::new(),
            degenerate: false,
            supported: false,
        },
    }
}

fn eval_real(p: &Polynomial, table: &SymbolTable, point: &[f64]) -> Complex64 {
    let cp: Vec<Complex64> = point.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    p.eval_numeric(table, &cp)
}

fn equilibria_line(
    g: &Polynomial,
    table: &SymbolTable,
    lo: f64,
    hi: f64,
    resolution: f64,
) -> PhiEquilibria {
    assert!(hi > lo, "empty interval");
    let steps = ((hi - lo) / resolution).ceil() as usize;
    let steps = steps.max(1);
    let xs: Vec<f64> = (0..=steps)
        .map(|k| lo + (hi - lo) * k as f64 / steps as f64)
        .collect();
    let vals: Vec<Complex64> = xs.iter().map(|&x| eval_real(g, table, &[x])).collect();
    if vals.iter().all(|v| v.norm() < EQ_ACCEPT) {
        return PhiEquilibria {
            zeros: Vec::new(),
            degenerate: true,
            supported: true,
        };
    }
    let mut roots = Vec::new();
    for (k, &x) in xs.iter().enumerate() {
        if vals[k].norm() < EQ_ACCEPT {
            roots.push(x);
            continue;
        }
        if k + 1 < xs.len() {
            let (a, b) = (vals[k].re, vals[k + 1].re);
            if a * b < 0.0 {
                let mut left = xs[k];
                let mut right = xs[k + 1];
                let mut fl = a;
                for _ in 0..200 {
                    let mid = 0.5 * (left + right);
                    let fm = eval_real(g, table, &[mid]).re;
                    if fl * fm <= 0.0 {
                        right = mid;
                    } else {
                        left = mid;
                        fl = fm;
                    }
                    if right - left < 1e-15 * (1.0 + mid.abs()) {
                        break;
                    }
                }
                let root = 0.5 * (left + right);
                if eval_real(g, table, &[root]).norm() < EQ_ACCEPT {
                    roots.push(root);
                }
            }
        }
    }
    roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut dedup: Vec<f64> = Vec::new();
    for r in roots {
        if dedup.last().is_none_or(|&p| (r - p).abs() > resolution) {
            dedup.push(r);
        }
    }
    PhiEquilibria {
        zeros: dedup.into_iter().map(|r| vec![r]).collect(),
        degenerate: false,
        supported: true,
    }
}

fn equilibria_plane(
    phi_rhs: &[Polynomial],
    table: &SymbolTable,
    lo: &[f64],
    hi: &[f64],
    resolution: f64,
) -> PhiEquilibria {
    let jac: Vec<Vec<Polynomial>> = phi_rhs
        .iter()
        .map(|g| vec![g.partial_derivative(0), g.partial_derivative(1)])
        .collect();
    let g_at = |p: &[f64]| -> [f64; 2] {
        [
            eval_real(&phi_rhs[0], table, p).re,
            eval_real(&phi_rhs[1], table, p).re,
        ]
    };
    let norm_at = |p: &[f64]| -> f64 {
        let v = [
            eval_real(&phi_rhs[0], table, p),
            eval_real(&phi_rhs[1], table, p),
        ];
        (v[0].norm_sqr() + v[1].norm_sqr()).sqrt()
    };
    let steps0 = (((hi[0] - lo[0]) / resolution).ceil() as usize).max(1);
    let steps1 = (((hi[1] - lo[1]) / resolution).ceil() as usize).max(1);
    let mut all_zero = true;
    let mut zeros: Vec<Vec<f64>> = Vec::new();
    let margin = resolution;
    for i in 0..=steps0 {
        for j in 0..=steps1 {
            let seed = [
                lo[0] + (hi[0] - lo[0]) * i as f64 / steps0 as f64,
                lo[1] + (hi[1] - lo[1]) * j as f64 / steps1 as f64,
            ];
            if norm_at(&seed) >= EQ_ACCEPT {
                all_zero = false;
            }
            // damped Newton from this seed
            let mut p = seed;
            let mut ok = false;
            for _ in 0..60 {
                let g = g_at(&p);
                let gn = (g[0] * g[0] + g[1] * g[1]).sqrt();
                if gn < EQ_ACCEPT {
                    ok = true;
                    break;
                }
                let j00 = eval_real(&jac[0][0], table, &p).re;
                let j01 = eval_real(&jac[0][1], table, &p).re;
                let j10 = eval_real(&jac[1][0], table, &p).re;
                let j11 = eval_real(&jac[1][1], table, &p).re;
                let det = j00 * j11 - j01 * j10;
                if det.abs() < 1e-14 {
                    break;
                }
                let dx = (g[0] * j11 - g[1] * j01) / det;
                let dy = (g[1] * j00 - g[0] * j10) / det;
                let mut damp = 1.0;
                let mut moved = false;
                for _ in 0..30 {
                    let cand = [p[0] - damp * dx, p[1] - damp * dy];
                    let cn = {
                        let cg = g_at(&cand);
                        (cg[0] * cg[0] + cg[1] * cg[1]).sqrt()
                    };
                    if cn < gn {
                        p = cand;
                        moved = true;
                        break;
                    }
                    damp *= 0.5;
                }
                if !moved {
                    break;
                }
            }
            if ok
                && norm_at(&p) < EQ_ACCEPT
                && p[0] >= lo[0] - margin
                && p[0] <= hi[0] + margin
                && p[1] >= lo[1] - margin
                && p[1] <= hi[1] + margin
            {
                let dup = zeros.iter().any(|z| {
                    let d0 = z[0] - p[0];
                    let d1 = z[1] - p[1];
                    (d0 * d0 + d1 * d1).sqrt() <= resolution
                });
                if !dup {
                    zeros.push(vec![p[0], p[1]]);
                }
            }
        }
    }
    if all_zero {
        return PhiEquilibria {
            zeros: Vec::new(),
            degenerate: true,
            supported: true,
        };
    }
    zeros.sort_by(|a, b| a.partial_cmp(b).unwrap());
    PhiEquilibria {
        zeros,
        degenerate: false,
        supported: true,
    }
}

/// Numeric evaluation of a polynomial matrix at a real point.
pub fn eval_poly_matrix(
    matrix: &[Vec<Polynomial>],
    table: &SymbolTable,
    point: &[f64],
) -> Vec<Vec<Complex64>> {
    let cp: Vec<Complex64> = point.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    matrix
        .iter()
        .map(|row| row.iter().map(|p| p.eval_numeric(table, &cp)).collect())
        .collect()
}

/// The constant matrix governing the limiting linear system when phi(t)
/// converges to phi0: the quasi-linear coefficient matrix evaluated there.
pub fn asymptotic_linear_system(
    emb: &EmbeddedSystem,
    table: &SymbolTable,
    phi0: &[f64],
) -> Vec<Vec<Complex64>> {
    assert_eq!(phi0.len(), emb.m, "dimension mismatch");
    eval_poly_matrix(&emb.coeff_matrix, table, phi0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{rat_int, CoeffValue};
    use crate::embed::{build_embedding, NormalFormSystem};
    use crate::poly::MultiIndex;
    use crate::resonance::{
        elementary_invariance_relations, sporadic_resonances_complete, Spectrum,
    };

    fn table() -> SymbolTable {
        SymbolTable::new()
    }

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn mono(dim: usize, exps: &[u32], k: i64) -> Polynomial {
        Polynomial::monomial(dim, MultiIndex(exps.to_vec()), CoeffValue::from_int(1, k))
    }

    fn node_system() -> (NormalFormSystem, EmbeddedSystem) {
        let spec = Spectrum::new(vec![
            CoeffValue::from_int(1, 1),
            CoeffValue::from_int(1, 2),
        ]);
        let f1 = mono(2, &[1, 0], 1);
        let f2 = mono(2, &[0, 1], 2).add(&mono(2, &[2, 0], 1));
        let sys = NormalFormSystem::new(spec.clone(), PolyVectorField::new(vec![f1, f2])).unwrap();
        let sp = sporadic_resonances_complete(&spec);
        let inv = elementary_invariance_relations(&spec);
        let emb = build_embedding(&sys, &sp.relations, &inv).unwrap();
        (sys, emb)
    }

    #[test]
    fn integrates_the_exponential() {
        let f = PolyVectorField::new(vec![mono(1, &[1], 1)]);
        let tr = integrate(&f, &table(), &[c(1.0)], 1.0, 1e-3).unwrap();
        let got = tr.last_state()[0];
        assert!((got - c(std::f64::consts::E)).norm() < 1e-10, "{got}");
    }

    #[test]
    fn constant_when_field_vanishes() {
        let f = PolyVectorField::new(vec![Polynomial::zero(1)]);
        let tr = integrate(&f, &table(), &[c(2.5)], 1.0, 0.1).unwrap();
        for s in &tr.states {
            assert_eq!(s[0], c(2.5));
        }
    }

    #[test]
    fn fourth_order_convergence() {
        let f = PolyVectorField::new(vec![mono(1, &[1], 1)]);
        let e = std::f64::consts::E;
        let err = |h: f64| -> f64 {
            (integrate(&f, &table(), &[c(1.0)], 1.0, h).unwrap().last_state()[0] - c(e)).norm()
        };
        let ratio = err(0.1) / err(0.05);
        assert!(
            (14.0..=18.0).contains(&ratio),
            "halving ratio {ratio} outside the fourth-order window"
        );
    }

    #[test]
    fn reports_blow_up_time() {
        // x' = x^2 from x0 = 1 blows up at t = 1
        let f = PolyVectorField::new(vec![mono(1, &[2], 1)]);
        match integrate(&f, &table(), &[c(1.0)], 2.0, 1e-4) {
            Err(VerifyError::NonFinite { time }) => {
                assert!((0.9..=1.1).contains(&time), "blow-up reported at {time}");
            }
            Ok(_) => panic!("expected non-finite state"),
        }
    }

    #[test]
    fn node_flow_matches_closed_form() {
        // y' = 2y + x^2 with x = x0 e^t solves to y(t) = (y0 + x0^2 t) e^{2t}
        let (sys, _) = node_system();
        let tr = integrate(sys.field(), &table(), &[c(1.0), c(1.0)], 1.0, 1e-3).unwrap();
        let e = std::f64::consts::E;
        let got = tr.last_state();
        assert!((got[0] - c(e)).norm() < 1e-6);
        assert!((got[1] - c(2.0 * e * e)).norm() < 1e-6);

        // doubling the forcing gives y(t) = (y0 + 2 x0^2 t) e^{2t}
        let spec = Spectrum::new(vec![
            CoeffValue::from_int(1, 1),
            CoeffValue::from_int(1, 2),
        ]);
        let forced = NormalFormSystem::new(
            spec,
            PolyVectorField::new(vec![
                mono(2, &[1, 0], 1),
                mono(2, &[0, 1], 2).add(&mono(2, &[2, 0], 2)),
            ]),
        )
        .unwrap();
        let tr = integrate(forced.field(), &table(), &[c(1.0), c(1.0)], 1.0, 1e-3).unwrap();
        let got = tr.last_state();
        assert!((got[1] - c(3.0 * e * e)).norm() < 1e-6);
    }

    #[test]
    fn split_certifies_on_manifold() {
        let (sys, emb) = node_system();
        let rep = verify_split(
            &sys,
            &emb,
            &table(),
            &[c(1.0), c(1.0)],
            1.0,
            1e-3,
            1e-6,
        )
        .unwrap();
        assert!(rep.certified, "{rep:?}");
    }

    #[test]
    fn linear_split_is_exact_to_rounding() {
        let spec = Spectrum::new(vec![
            CoeffValue::from_int(1, 1),
            CoeffValue::from_int(1, 2),
        ]);
        let sys = NormalFormSystem::new(
            spec.clone(),
            PolyVectorField::new(vec![mono(2, &[1, 0], 1), mono(2, &[0, 1], 2)]),
        )
        .unwrap();
        let sp = sporadic_resonances_complete(&spec);
        let inv = elementary_invariance_relations(&spec);
        let emb = build_embedding(&sys, &sp.relations, &inv).unwrap();
        let rep = verify_split(&sys, &emb, &table(), &[c(0.3), c(0.4)], 1.0, 1e-3, 1e-6).unwrap();
        assert!(rep.max_projection_error < 1e-12, "{rep:?}");
    }

    #[test]
    fn off_manifold_start_breaks_projection() {
        let (sys, emb) = node_system();
        let x0 = [c(1.0), c(1.0)];
        let original = integrate(sys.field(), &table(), &x0, 1.0, 1e-3).unwrap();
        let mut y0 = lift_initial(&emb, &x0);
        y0[2] += c(0.1); // push w off the manifold
        let enlarged = integrate(&emb.embedded_field(), &table(), &y0, 1.0, 1e-3).unwrap();
        let rep = split_report_from_trajectories(&emb, &original, &enlarged, 1e-6);
        assert!(rep.max_projection_error > 1e-3, "{rep:?}");
        assert!(!rep.certified);
    }

    #[test]
    fn line_equilibria() {
        // 2 phi (1 - phi): zeros at 0 and 1
        let g = mono(1, &[1], 2).sub(&mono(1, &[2], 2));
        let eq = phi_equilibria(&[g], &table(), &[0.0], &[5.0], 0.01);
        assert!(eq.supported && !eq.degenerate);
        assert_eq!(eq.zeros.len(), 2);
        assert!((eq.zeros[0][0] - 0.0).abs() < 1e-9);
        assert!((eq.zeros[1][0] - 1.0).abs() < 1e-9);

        // 2 phi (1 + phi) on [0,5]: only 0
        let h = mono(1, &[1], 2).add(&mono(1, &[2], 2));
        let eq = phi_equilibria(&[h], &table(), &[0.0], &[5.0], 0.01);
        assert_eq!(eq.zeros.len(), 1);
        assert!((eq.zeros[0][0] - 0.0).abs() < 1e-9);

        // identically zero: degenerate line
        let eq = phi_equilibria(&[Polynomial::zero(1)], &table(), &[0.0], &[1.0], 0.1);
        assert!(eq.degenerate);
        assert!(eq.zeros.is_empty());
    }

    #[test]
    fn plane_equilibria() {
        // (phi1 (1 - phi1), phi2 (2 - phi2)): four isolated zeros
        let g1 = mono(2, &[1, 0], 1).sub(&mono(2, &[2, 0], 1));
        let g2 = mono(2, &[0, 1], 2).sub(&mono(2, &[0, 2], 1));
        let eq = phi_equilibria(&[g1, g2], &table(), &[-0.5, -0.5], &[2.5, 2.5], 0.25);
        assert!(eq.supported && !eq.degenerate);
        let mut got: Vec<(i64, i64)> = eq
            .zeros
            .iter()
            .map(|z| (z[0].round() as i64, z[1].round() as i64))
            .collect();
        got.sort();
        assert_eq!(got, vec![(0, 0), (0, 2), (1, 0), (1, 2)]);
        for z in &eq.zeros {
            let r0 = eval_real(&mono(2, &[1, 0], 1).sub(&mono(2, &[2, 0], 1)), &table(), z);
            assert!(r0.norm() < 1e-10);
        }
    }

    #[test]
    fn higher_dimensional_search_is_flagged() {
        let g = vec![Polynomial::zero(3), Polynomial::zero(3), Polynomial::zero(3)];
        let eq = phi_equilibria(&g, &table(), &[0.0; 3], &[1.0; 3], 0.1);
        assert!(!eq.supported);
    }

    #[test]
    fn limit_matrix_evaluation() {
        let (_, emb) = node_system();
        // constant matrix: phi0 is irrelevant (m = 0)
        let m = asymptotic_linear_system(&emb, &table(), &[]);
        assert_eq!(m[0][0], c(1.0));
        assert_eq!(m[1][1], c(2.0));
        assert_eq!(m[1][2], c(1.0));
        assert_eq!(m[2][2], c(2.0));

        // diagonal oscillator matrix evaluated at phi = 1/2
        let spec = Spectrum::new(vec![
            CoeffValue::gauss(1, rat_int(0), rat_int(-1)),
            CoeffValue::gauss(1, rat_int(0), rat_int(1)),
            CoeffValue::from_int(1, 1),
        ]);
        let f1 = Polynomial::monomial(3, MultiIndex(vec![1, 0, 0]), CoeffValue::gauss(1, rat_int(0), rat_int(-1)))
            .add(&mono(3, &[2, 1, 0], 1));
        let f2 = Polynomial::monomial(3, MultiIndex(vec![0, 1, 0]), CoeffValue::gauss(1, rat_int(0), rat_int(1)))
            .add(&mono(3, &[1, 2, 0], 1));
        let f3 = mono(3, &[0, 0, 1], 1);
        let sys = NormalFormSystem::new(spec.clone(), PolyVectorField::new(vec![f1, f2, f3])).unwrap();
        let sp = sporadic_resonances_complete(&spec);
        let inv = elementary_invariance_relations(&spec);
        let emb = build_embedding(&sys, &sp.relations, &inv).unwrap();
        let m = asymptotic_linear_system(&emb, &table(), &[0.5]);
        assert!((m[0][0] - Complex64::new(0.5, -1.0)).norm() < 1e-15);
        assert!((m[1][1] - Complex64::new(0.5, 1.0)).norm() < 1e-15);
        assert!((m[2][2] - c(1.0)).norm() < 1e-15);
    }
}
