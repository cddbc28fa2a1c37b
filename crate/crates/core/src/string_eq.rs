//! The constant-dilaton string background equations on a naturally
//! reductive model: Ric = 0, δT = 0, ∇ψ = 0, T·ψ = 0, together with the
//! structural no-go checks and a deterministic parameter scan.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::clifford::{act, form_to_clifford, Spinor, SpinorRep};
use crate::connection::{d_torsion_closed_form, delta_torsion, family_torsion_form, ricci};
use crate::dirac::{
    certify_omega_nonnegative, constancy_residual, constant_spinors,
    spinor_covariant_derivative, OmegaCertification,
};
use crate::error::Result;
use crate::lie::ReductiveModel;
use crate::tol::STRING_EQ_TOL;

/// Per-equation pass/fail tolerances.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct EquationTolerances {
    pub ricci: f64,
    pub delta_t: f64,
    pub nabla_psi: f64,
    pub t_psi: f64,
}

impl Default for EquationTolerances {
    fn default() -> Self {
        Self::uniform(STRING_EQ_TOL)
    }
}

impl EquationTolerances {
    pub fn uniform(tol: f64) -> Self {
        Self {
            ricci: tol,
            delta_t: tol,
            nabla_psi: tol,
            t_psi: tol,
        }
    }
}

/// Residuals of the four equations for one (model, t, ψ).
#[derive(Debug, Clone, Serialize)]
pub struct StringEqResiduals {
    pub ricci_norm: f64,
    pub delta_t_norm: f64,
    pub nabla_psi_norm: f64,
    pub t_psi_norm: f64,
    pub ricci_pass: bool,
    pub delta_t_pass: bool,
    pub nabla_psi_pass: bool,
    pub t_psi_pass: bool,
}

impl StringEqResiduals {
    pub fn all_pass(&self) -> bool {
        self.ricci_pass && self.delta_t_pass && self.nabla_psi_pass && self.t_psi_pass
    }

    fn from_norms(norms: [f64; 4], tol: &EquationTolerances) -> Self {
        Self {
            ricci_norm: norms[0],
            delta_t_norm: norms[1],
            nabla_psi_norm: norms[2],
            t_psi_norm: norms[3],
            ricci_pass: norms[0] < tol.ricci,
            delta_t_pass: norms[1] < tol.delta_t,
            nabla_psi_pass: norms[2] < tol.nabla_psi,
            t_psi_pass: norms[3] < tol.t_psi,
        }
    }
}

/// Model-level residuals of equations 1 and 2 (spinor-independent).
fn model_level_norms(model: &ReductiveModel, t: f64) -> Result<(f64, f64)> {
    let ric = ricci(model, t)?.matrix.max_abs();
    let delta = delta_torsion(model, t)?.max_abs();
    Ok((ric, delta))
}

/// Spinor-level residuals of equations 3 and 4 for a constant ψ.
fn spinor_level_norms(
    model: &ReductiveModel,
    rep: &SpinorRep,
    t: f64,
    psi: &Spinor,
) -> Result<(f64, f64)> {
    let n = model.n();
    let mut nabla: f64 = 0.0;
    for i in 0..n {
        let mut z = vec![0.0; n];
        z[i] = 1.0;
        nabla = nabla.max(spinor_covariant_derivative(model, rep, t, &z, psi, true)?.norm());
    }
    let onb = model.orthonormalized()?;
    let t_clifford = form_to_clifford(&family_torsion_form(&onb, t).to_alt_form()?);
    let t_psi = act(rep, &t_clifford, psi)?.norm();
    Ok((nabla, t_psi))
}

/// Evaluate all four equations for a constant spinor.
pub fn check_string_equations(
    model: &ReductiveModel,
    rep: &SpinorRep,
    t: f64,
    psi: &Spinor,
    tol: &EquationTolerances,
) -> Result<StringEqResiduals> {
    model.require_naturally_reductive(crate::tol::DEFAULT_TOL)?;
    if constancy_residual(model, rep, psi)? > 1e-8 {
        return Err(crate::error::GeomError::NonConstantSpinor);
    }
    let (ric, delta) = model_level_norms(model, t)?;
    let (nabla, t_psi) = spinor_level_norms(model, rep, t, psi)?;
    Ok(StringEqResiduals::from_norms([ric, delta, nabla, t_psi], tol))
}

/// Consistency audit of the compact no-go statement: a full pass implies
/// vanishing torsion. A violation is an implementation inconsistency,
/// never a discovery.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum AuditVerdict {
    /// Not all equations pass; nothing to audit.
    NotApplicable,
    /// All equations pass and the torsion vanishes: consistent.
    Consistent,
    /// All equations pass yet the torsion is nonzero.
    ImplementationInconsistency { torsion_norm: f64 },
}

pub fn no_go_audit(
    results: &StringEqResiduals,
    model: &ReductiveModel,
    t: f64,
    tol: f64,
) -> AuditVerdict {
    if !results.all_pass() {
        return AuditVerdict::NotApplicable;
    }
    let torsion_norm = family_torsion_form(model, t).max_abs();
    if torsion_norm < tol {
        AuditVerdict::Consistent
    } else {
        AuditVerdict::ImplementationInconsistency { torsion_norm }
    }
}

/// Structural flags from the vanishing theorems.
#[derive(Debug, Clone, Serialize)]
pub enum VanishingFlag {
    /// The lifted Casimir of g is certified non-negative: away from the
    /// Levi-Civita parameter the equations ∇ψ = 0 and T·ψ = 0 have no
    /// simultaneous nonzero solution.
    SpinorEquationsUnsolvable { certification: OmegaCertification },
    /// Isotropy-fixed directions force the β-coefficient to carry the whole
    /// Ricci tensor there: Ricci-flatness is possible only at t = 0 or 1.
    RicciFlatOnlyAtEnds { fixed_vector_count: usize },
    /// Vanishing canonical scalar curvature with nonzero isotropy brackets:
    /// the invariant form is indefinite on h, so h is not simple and the
    /// metric is not normal homogeneous. The witnesses are isotropy bracket
    /// Q_h-squares of opposite sign.
    CanonicalScalarZero {
        positive_witness: f64,
        negative_witness: f64,
    },
}

pub fn vanishing_theorem_flags(model: &ReductiveModel) -> Result<Vec<VanishingFlag>> {
    let mut flags = Vec::new();
    let certification = certify_omega_nonnegative(model);
    if certification.is_certified() {
        flags.push(VanishingFlag::SpinorEquationsUnsolvable { certification });
    }
    let fixed = model.isotropy_fixed_vectors();
    if model.dim_h() > 0 && !fixed.is_empty() {
        flags.push(VanishingFlag::RicciFlatOnlyAtEnds {
            fixed_vector_count: fixed.len(),
        });
    }
    let scal0 = crate::connection::scal(model, 0.0)?;
    if scal0.abs() < 1e-9 && model.dim_h() > 0 {
        let n = model.n();
        let mut pos: f64 = 0.0;
        let mut neg: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let bh = model.bracket_m_h(i, j);
                let v = model.q_h_pair(&bh, &bh);
                pos = pos.max(v);
                neg = neg.min(v);
            }
        }
        if pos > 1e-12 && neg < -1e-12 {
            flags.push(VanishingFlag::CanonicalScalarZero {
                positive_witness: pos,
                negative_witness: neg,
            });
        }
    }
    Ok(flags)
}

/// Residuals of (X ⌟ dT⁰)·ψ per basis direction, with precondition
/// warnings instead of failures.
#[derive(Debug, Clone, Serialize)]
pub struct DtKernelReport {
    pub per_direction: Vec<f64>,
    pub max_residual: f64,
    /// Precondition diagnostics: canonical Ricci flatness and constancy.
    pub ricci_flat: bool,
    pub psi_constant: bool,
}

pub fn dt_kernel_check(
    model: &ReductiveModel,
    rep: &SpinorRep,
    psi: &Spinor,
) -> Result<DtKernelReport> {
    let onb = model.orthonormalized()?;
    let n = onb.n();
    let dt0 = d_torsion_closed_form(&onb, 0.0)?;
    let ricci_flat = ricci(&onb, 0.0)?.matrix.max_abs() < 1e-9;
    let psi_constant = constancy_residual(&onb, rep, psi)? < 1e-8;
    let mut per_direction = Vec::with_capacity(n);
    let mut max_residual: f64 = 0.0;
    for i in 0..n {
        let mut z = vec![0.0; n];
        z[i] = 1.0;
        let contracted = form_to_clifford(&dt0.interior(&z));
        let r = act(rep, &contracted, psi)?.norm();
        per_direction.push(r);
        max_residual = max_residual.max(r);
    }
    Ok(DtKernelReport {
        per_direction,
        max_residual,
        ricci_flat,
        psi_constant,
    })
}

/// One grid point of a parameter scan.
#[derive(Debug, Clone, Serialize)]
pub struct ScanRow {
    pub params: Vec<(String, f64)>,
    pub t: f64,
    /// Number of constant spinors scanned at this point.
    pub constant_spinor_count: usize,
    /// Minimal residual per equation over the constant-spinor basis;
    /// spinor equations report infinity when no constant spinor exists.
    pub residuals: Option<StringEqResiduals>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanReport {
    pub rows: Vec<ScanRow>,
}

impl ScanReport {
    pub fn any_full_pass(&self) -> bool {
        self.rows
            .iter()
            .any(|r| r.residuals.as_ref().is_some_and(|x| x.all_pass()))
    }

    /// CSV with params, t, the four residuals and the four flags;
    /// 12 significant digits, deterministic row order.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        if let Some(first) = self.rows.first() {
            let mut header: Vec<String> =
                first.params.iter().map(|(k, _)| k.clone()).collect();
            header.push("t".to_string());
            for name in [
                "ricci_residual",
                "delta_t_residual",
                "nabla_psi_residual",
                "t_psi_residual",
                "ricci_pass",
                "delta_t_pass",
                "nabla_psi_pass",
                "t_psi_pass",
            ] {
                header.push(name.to_string());
            }
            out.push_str(&header.join(","));
            out.push('\n');
        }
        for row in &self.rows {
            let mut fields: Vec<String> = row
                .params
                .iter()
                .map(|(_, v)| format_sig12(*v))
                .collect();
            fields.push(format_sig12(row.t));
            match (&row.residuals, &row.error) {
                (Some(r), _) => {
                    for v in [r.ricci_norm, r.delta_t_norm, r.nabla_psi_norm, r.t_psi_norm] {
                        fields.push(format_sig12(v));
                    }
                    for b in [r.ricci_pass, r.delta_t_pass, r.nabla_psi_pass, r.t_psi_pass] {
                        fields.push(b.to_string());
                    }
                }
                (None, Some(e)) => {
                    fields.push(format!("error: {}", e.replace(',', ";")));
                }
                (None, None) => fields.push("error: unknown".to_string()),
            }
            out.push_str(&fields.join(","));
            out.push('\n');
        }
        out
    }
}

/// Fixed-width scientific format with 12 significant digits.
pub fn format_sig12(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.11e}")
    } else {
        format!("{v}")
    }
}

fn cartesian(grids: &[(String, Vec<f64>)]) -> Vec<BTreeMap<String, f64>> {
    let mut points: Vec<BTreeMap<String, f64>> = vec![BTreeMap::new()];
    for (name, values) in grids {
        let mut next = Vec::with_capacity(points.len() * values.len());
        for p in &points {
            for &v in values {
                let mut q = p.clone();
                q.insert(name.clone(), v);
                next.push(q);
            }
        }
        points = next;
    }
    points
}

/// Evaluate the string equations over a parameter × t grid. Points are
/// independent; `jobs` bounds the worker threads; output order is the
/// lexicographic grid order regardless of scheduling.
pub fn scan<F>(
    family: F,
    param_grids: &[(String, Vec<f64>)],
    t_grid: &[f64],
    tol: &EquationTolerances,
    jobs: usize,
) -> ScanReport
where
    F: Fn(&BTreeMap<String, f64>) -> Result<ReductiveModel> + Sync,
{
    let mut points: Vec<(BTreeMap<String, f64>, f64)> = Vec::new();
    for p in cartesian(param_grids) {
        for &t in t_grid {
            points.push((p.clone(), t));
        }
    }
    let jobs = jobs.max(1).min(points.len().max(1));
    let mut rows: Vec<Option<ScanRow>> = vec![None; points.len()];
    let next = std::sync::atomic::AtomicUsize::new(0);
    let results: std::sync::Mutex<Vec<(usize, ScanRow)>> = std::sync::Mutex::new(Vec::new());
    std::thread::scope(|scope| {
        for _ in 0..jobs {
            scope.spawn(|| loop {
                let idx = next.fetch_add(1, std::sync::atomic::Ordering::SeqCst);
                if idx >= points.len() {
                    break;
                }
                let (params, t) = &points[idx];
                let row = evaluate_point(&family, params, *t, tol);
                results.lock().unwrap().push((idx, row));
            });
        }
    });
    for (idx, row) in results.into_inner().unwrap() {
        rows[idx] = Some(row);
    }
    ScanReport {
        rows: rows.into_iter().map(|r| r.unwrap()).collect(),
    }
}

fn evaluate_point<F>(
    family: &F,
    params: &BTreeMap<String, f64>,
    t: f64,
    tol: &EquationTolerances,
) -> ScanRow
where
    F: Fn(&BTreeMap<String, f64>) -> Result<ReductiveModel>,
{
    let param_vec: Vec<(String, f64)> = params.iter().map(|(k, v)| (k.clone(), *v)).collect();
    let outcome = (|| -> Result<(usize, StringEqResiduals)> {
        let model = family(params)?;
        model.require_naturally_reductive(crate::tol::DEFAULT_TOL)?;
        let rep = SpinorRep::generated(model.n())?;
        let spinors = constant_spinors(&model, &rep)?;
        let (ric, delta) = model_level_norms(&model, t)?;
        let mut nabla = f64::INFINITY;
        let mut t_psi = f64::INFINITY;
        for psi in &spinors {
            let (np, tp) = spinor_level_norms(&model, &rep, t, psi)?;
            nabla = nabla.min(np);
            t_psi = t_psi.min(tp);
        }
        Ok((
            spinors.len(),
            StringEqResiduals::from_norms([ric, delta, nabla, t_psi], tol),
        ))
    })();
    match outcome {
        Ok((count, residuals)) => ScanRow {
            params: param_vec,
            t,
            constant_spinor_count: count,
            residuals: Some(residuals),
            error: None,
        },
        Err(e) => ScanRow {
            params: param_vec,
            t,
            constant_spinor_count: 0,
            residuals: None,
            error: Some(e.to_string()),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::SpinorRep;
    use crate::models;

    #[test]
    fn su2_passes_first_three_fails_fourth() {
        let m = models::su2(1.0);
        let rep = SpinorRep::generated(3).unwrap();
        let tol = EquationTolerances::default();
        for k in 0..2 {
            let psi = crate::clifford::Spinor::basis(2, k);
            let r = check_string_equations(&m, &rep, 0.0, &psi, &tol).unwrap();
            assert!(r.ricci_pass && r.delta_t_pass && r.nabla_psi_pass);
            assert!(!r.t_psi_pass);
            // ‖T·ψ‖ = ‖ψ‖ for the canonical torsion of su(2)
            assert!((r.t_psi_norm - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn levi_civita_parameter_kills_torsion_residuals() {
        let m = models::chavel_ziller(0.5).unwrap();
        let rep = models::spin_fixture_dim5();
        let spinors = crate::dirac::constant_spinors(&m, &rep).unwrap();
        let tol = EquationTolerances::default();
        let r = check_string_equations(&m, &rep, 0.5, &spinors[0], &tol).unwrap();
        assert!(r.delta_t_pass && r.t_psi_pass);
        assert_eq!(r.t_psi_norm, 0.0);
        // but the metric is not Ricci flat there
        assert!(!r.ricci_pass);
    }

    #[test]
    fn non_constant_spinor_is_rejected() {
        let m = models::chavel_ziller(1.0).unwrap();
        let rep = models::spin_fixture_dim5();
        let (plus, _) = models::fixture_spinor_pair();
        let tol = EquationTolerances::default();
        assert!(matches!(
            check_string_equations(&m, &rep, 0.0, &plus, &tol),
            Err(crate::error::GeomError::NonConstantSpinor)
        ));
    }

    #[test]
    fn audit_fires_only_on_injected_data() {
        let m = models::chavel_ziller(0.5).unwrap();
        // honest failing results: not applicable
        let failing = StringEqResiduals {
            ricci_norm: 1.0,
            delta_t_norm: 0.0,
            nabla_psi_norm: 0.0,
            t_psi_norm: 0.0,
            ricci_pass: false,
            delta_t_pass: true,
            nabla_psi_pass: true,
            t_psi_pass: true,
        };
        assert_eq!(
            no_go_audit(&failing, &m, 0.0, 1e-8),
            AuditVerdict::NotApplicable
        );
        // forged full pass at nonzero torsion: inconsistency detected
        let forged = StringEqResiduals {
            ricci_norm: 0.0,
            delta_t_norm: 0.0,
            nabla_psi_norm: 0.0,
            t_psi_norm: 0.0,
            ricci_pass: true,
            delta_t_pass: true,
            nabla_psi_pass: true,
            t_psi_pass: true,
        };
        assert!(matches!(
            no_go_audit(&forged, &m, 0.0, 1e-8),
            AuditVerdict::ImplementationInconsistency { .. }
        ));
        // full pass with vanishing torsion is consistent
        assert_eq!(
            no_go_audit(&forged, &m, 0.5, 1e-8),
            AuditVerdict::Consistent
        );
    }

    #[test]
    fn structural_flags() {
        // V4,2: non-negative Casimir and a fixed vector
        let m = models::chavel_ziller(2.0 / 3.0).unwrap();
        let flags = vanishing_theorem_flags(&m).unwrap();
        assert!(flags
            .iter()
            .any(|f| matches!(f, VanishingFlag::SpinorEquationsUnsolvable { .. })));
        assert!(flags
            .iter()
            .any(|f| matches!(f, VanishingFlag::RicciFlatOnlyAtEnds { fixed_vector_count: 1 })));
        // s = 1: the canonical scalar curvature vanishes and the indefinite
        // witness pair appears
        let m1 = models::chavel_ziller(1.0).unwrap();
        let flags = vanishing_theorem_flags(&m1).unwrap();
        let witness = flags.iter().find_map(|f| match f {
            VanishingFlag::CanonicalScalarZero {
                positive_witness,
                negative_witness,
            } => Some((*positive_witness, *negative_witness)),
            _ => None,
        });
        let (pos, neg) = witness.expect("scalar-zero flag expected at s = 1");
        assert!(pos > 0.5 && neg < -0.5);
        // normal homogeneous with positive scalar: flag silent
        let sph = models::round_sphere(4).unwrap();
        let flags = vanishing_theorem_flags(&sph).unwrap();
        assert!(!flags
            .iter()
            .any(|f| matches!(f, VanishingFlag::CanonicalScalarZero { .. })));
    }

    #[test]
    fn dt_kernel_residuals() {
        // closed model: dT⁰ = 0 so every residual vanishes
        let su2 = models::su2(1.0);
        let rep = SpinorRep::generated(3).unwrap();
        let psi = crate::clifford::Spinor::basis(2, 0);
        let report = dt_kernel_check(&su2, &rep, &psi).unwrap();
        assert!(report.max_residual < 1e-13);
        // symmetric space: T⁰ = 0
        let sph = models::round_sphere(4).unwrap();
        let rep4 = SpinorRep::generated(4).unwrap();
        let psi4 = crate::clifford::Spinor::basis(4, 1);
        let report = dt_kernel_check(&sph, &rep4, &psi4).unwrap();
        assert!(report.max_residual < 1e-13);
        // Ricci-flat point of the V4,2 family: nonzero residuals, recorded
        // as a regression baseline
        let m = models::chavel_ziller(1.0).unwrap();
        let rep5 = models::spin_fixture_dim5();
        let (plus, _) = models::fixture_spinor_pair();
        let report = dt_kernel_check(&m, &rep5, &plus).unwrap();
        assert!(report.ricci_flat);
        assert!(!report.psi_constant);
        assert!(report.max_residual > 1.0);
    }

    #[test]
    fn empty_and_single_point_scans() {
        let tol = EquationTolerances::default();
        let empty = scan(
            |p| models::chavel_ziller(p["s"]),
            &[("s".to_string(), vec![])],
            &[0.0],
            &tol,
            2,
        );
        assert!(empty.rows.is_empty());
        let single = scan(
            |p| models::chavel_ziller(p["s"]),
            &[("s".to_string(), vec![0.5])],
            &[0.0],
            &tol,
            1,
        );
        assert_eq!(single.rows.len(), 1);
        let row = &single.rows[0];
        assert_eq!(row.constant_spinor_count, 2);
        let r = row.residuals.as_ref().unwrap();
        // matches a direct evaluation
        let m = models::chavel_ziller(0.5).unwrap();
        let rep = SpinorRep::generated(5).unwrap();
        let spinors = crate::dirac::constant_spinors(&m, &rep).unwrap();
        let direct = check_string_equations(&m, &rep, 0.0, &spinors[0], &tol).unwrap();
        assert!((r.ricci_norm - direct.ricci_norm).abs() < 1e-12);
        assert!((r.t_psi_norm - direct.t_psi_norm).abs() < 1e-10);
    }

    #[test]
    fn scan_is_deterministic_and_ordered() {
        let tol = EquationTolerances::default();
        let grids = [("s".to_string(), vec![0.25, 0.5])];
        let t_grid = [0.0, 0.5];
        let a = scan(|p| models::chavel_ziller(p["s"]), &grids, &t_grid, &tol, 1);
        let b = scan(|p| models::chavel_ziller(p["s"]), &grids, &t_grid, &tol, 4);
        assert_eq!(a.to_csv(), b.to_csv());
        assert_eq!(a.rows.len(), 4);
        assert_eq!(a.rows[0].params[0].1, 0.25);
        assert_eq!(a.rows[0].t, 0.0);
        assert_eq!(a.rows[1].t, 0.5);
        assert_eq!(a.rows[2].params[0].1, 0.5);
    }

    #[test]
    fn ricci_flat_point_has_no_spinor_candidates() {
        // s = 1: the canonical connection is Ricci flat, but the isotropy
        // is too large to fix a spinor, so the spinor equations have no
        // candidates and report infinite residuals
        let tol = EquationTolerances::default();
        let report = scan(
            |p| models::chavel_ziller(p["s"]),
            &[("s".to_string(), vec![1.0])],
            &[0.0],
            &tol,
            1,
        );
        let row = &report.rows[0];
        assert_eq!(row.constant_spinor_count, 0);
        let r = row.residuals.as_ref().unwrap();
        assert!(r.ricci_pass && r.delta_t_pass);
        assert!(r.nabla_psi_norm.is_infinite() && r.t_psi_norm.is_infinite());
        assert!(!r.all_pass());
    }

    #[test]
    fn scan_reports_constructor_failures_per_point() {
        let tol = EquationTolerances::default();
        let report = scan(
            |p| models::chavel_ziller(p["s"]),
            &[("s".to_string(), vec![-1.0, 0.5])],
            &[0.0],
            &tol,
            2,
        );
        assert_eq!(report.rows.len(), 2);
        assert!(report.rows[0].error.is_some());
        assert!(report.rows[1].error.is_none());
        let csv = report.to_csv();
        assert!(csv.contains("error"));
    }
}
