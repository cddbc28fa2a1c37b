//! The cubic element H, its square, the lifted isotropy Casimir, the
//! Casimir-plus-scalar decomposition of the squared Dirac operator, and
//! constant spinors.
//!
//! H = (3/2) Σ_{i<j<k} ⟨\[Z_i,Z_j\]_m, Z_k⟩ Z_i·Z_j·Z_k in an orthonormal
//! basis; the Dirac operator of the family connection acts on constant
//! spinors as t·H.

use num_complex::Complex64;
use serde::Serialize;

use crate::clifford::{act, spin_lift, CliffordElement, Spinor, SpinorRep};
use crate::connection::{jac_h_basis, jac_m_basis, lambda_t, ConnectionMap};
use crate::error::{GeomError, Result};
use crate::forms::combinations;
use crate::lie::ReductiveModel;
use crate::linalg::CMatrix;
use crate::tol::DEFAULT_TOL;

fn orthonormal_nr(model: &ReductiveModel) -> Result<ReductiveModel> {
    let onb = model.orthonormalized()?;
    onb.require_naturally_reductive(DEFAULT_TOL)?;
    Ok(onb)
}

/// The cubic element H of the Clifford algebra of m.
pub fn cubic_element(model: &ReductiveModel) -> Result<CliffordElement> {
    let onb = orthonormal_nr(model)?;
    let n = onb.n();
    let mut h = CliffordElement::zero(n);
    for combo in combinations(n, 3) {
        let (i, j, k) = (combo[0], combo[1], combo[2]);
        let mut e = vec![0.0; n];
        e[k] = 1.0;
        let c = 1.5 * onb.ip_m(&onb.bracket_m_m(i, j), &e);
        if c != 0.0 {
            h = h.add(&CliffordElement::blade(n, &combo, c)?);
        }
    }
    Ok(h)
}

/// Closed-form grades 0 and 4 of H².
#[derive(Debug, Clone)]
pub struct HSquaredGrades {
    pub grade0: f64,
    pub grade4: CliffordElement,
}

/// (H²)₀ = (3/8) Σ_{i,j} ⟨\[Z_i,Z_j\]_m, \[Z_i,Z_j\]_m⟩ for n ≥ 3, and
/// (H²)₄ = -(9/2) Σ_{i<j<k<l} ⟨Z_i, Jac_m(Z_j,Z_k,Z_l)⟩ Z_iZ_jZ_kZ_l for
/// n ≥ 5 (zero in dimensions 3 and 4).
pub fn h_squared_grades(model: &ReductiveModel) -> Result<HSquaredGrades> {
    let onb = orthonormal_nr(model)?;
    let n = onb.n();
    let mut grade0 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let b = onb.bracket_m_m(i, j);
            grade0 += onb.ip_m(&b, &b);
        }
    }
    grade0 *= 3.0 / 8.0;
    let mut grade4 = CliffordElement::zero(n);
    if n >= 5 {
        for combo in combinations(n, 4) {
            let jac = jac_m_basis(&onb, combo[1], combo[2], combo[3]);
            let c = -4.5 * jac[combo[0]];
            if c != 0.0 {
                grade4 = grade4.add(&CliffordElement::blade(n, &combo, c)?);
            }
        }
    }
    Ok(HSquaredGrades { grade0, grade4 })
}

/// Lifted isotropy Casimir
/// C̃_h = -(1/16) Σ Q_h(\[Z_j,Z_k\],\[Z_l,Z_p\]) Z_j·Z_k·Z_l·Z_p.
pub fn casimir_lift(model: &ReductiveModel) -> Result<CliffordElement> {
    let onb = model.orthonormalized()?;
    let n = onb.n();
    if onb.dim_h() > 0 && onb.q_h().rank(1e-10) < onb.dim_h() {
        return Err(GeomError::DegenerateIsotropyForm);
    }
    let mut out = CliffordElement::zero(n);
    for j in 0..n {
        for k in 0..n {
            if j == k {
                continue;
            }
            let qjk = onb.bracket_m_h(j, k);
            let jk = CliffordElement::blade(n, &[j, k], 1.0)?;
            for l in 0..n {
                for p in 0..n {
                    if l == p {
                        continue;
                    }
                    let c = -(1.0 / 16.0) * onb.q_h_pair(&qjk, &onb.bracket_m_h(l, p));
                    if c == 0.0 {
                        continue;
                    }
                    let lp = CliffordElement::blade(n, &[l, p], 1.0)?;
                    out = out.add(&jk.mul(&lp)?.scale(c));
                }
            }
        }
    }
    Ok(out)
}

/// The same element through dual bases: -Σ ãd(X_i)·ãd(Y_i) with
/// Q_h(X_i, Y_j) = δ_ij.
pub fn casimir_lift_dual_route(model: &ReductiveModel) -> Result<CliffordElement> {
    let onb = model.orthonormalized()?;
    let n = onb.n();
    let kh = onb.dim_h();
    if kh == 0 {
        return Ok(CliffordElement::zero(n));
    }
    let qh_inv = onb
        .q_h()
        .inverse()
        .map_err(|_| GeomError::DegenerateIsotropyForm)?;
    let lifts: Vec<CliffordElement> = (0..kh)
        .map(|a| spin_lift(&onb.isotropy_action(a)))
        .collect::<Result<_>>()?;
    let mut out = CliffordElement::zero(n);
    for a in 0..kh {
        for b in 0..kh {
            let w = qh_inv.get(a, b);
            if w == 0.0 {
                continue;
            }
            out = out.add(&lifts[a].mul(&lifts[b])?.scale(-w));
        }
    }
    Ok(out)
}

/// ρ-norm pair (Q(ρ_g, ρ_g), Q(ρ_h, ρ_h)) through the adjoint Casimir
/// traces tr_g C_g = 24·Q(ρ_g,ρ_g) and tr_h C_h = 24·Q(ρ_h,ρ_h).
pub fn rho_norms(model: &ReductiveModel) -> Result<(f64, f64)> {
    let dim = model.dim();
    let q_inv = model.q.inverse().map_err(|_| {
        GeomError::InvalidModel("invariant form Q is singular on g".to_string())
    })?;
    // adjoint matrices of the basis
    let ads: Vec<crate::linalg::RMatrix> = (0..dim)
        .map(|i| {
            let mut e = vec![0.0; dim];
            e[i] = 1.0;
            model.algebra.ad(&e)
        })
        .collect();
    let mut tr_g = 0.0;
    for a in 0..dim {
        for b in 0..dim {
            let w = q_inv.get(a, b);
            if w == 0.0 {
                continue;
            }
            tr_g -= w * ads[a].matmul(&ads[b]).trace();
        }
    }
    let kh = model.dim_h();
    let mut tr_h = 0.0;
    if kh > 0 {
        let qh_inv = model
            .q_h()
            .inverse()
            .map_err(|_| GeomError::DegenerateIsotropyForm)?;
        for a in 0..kh {
            for b in 0..kh {
                let w = qh_inv.get(a, b);
                if w == 0.0 {
                    continue;
                }
                let prod = ads[model.h_idx[a]].matmul(&ads[model.h_idx[b]]);
                // trace over the h block only; h is ad(h)-invariant
                let mut t = 0.0;
                for &k in &model.h_idx {
                    t += prod.get(k, k);
                }
                tr_h -= w * t;
            }
        }
    }
    Ok((tr_g / 24.0, tr_h / 24.0))
}

/// Scalar and degree-4 data of the squared Dirac operator of the family
/// connection, split as Casimir + first-order part + degree-4 element +
/// scalars.
#[derive(Debug, Clone, Serialize)]
pub struct KPReport {
    pub t: f64,
    pub n: usize,
    /// (1/8) Σ Q_h(\[Z_i,Z_j\],\[Z_i,Z_j\])
    pub scalar_h_part: f64,
    /// (3/8) t² Σ Q_m(\[Z_i,Z_j\]_m,\[Z_i,Z_j\]_m)
    pub scalar_m_part: f64,
    /// coefficient (1-3t)/2 of the invariant first-order operator
    pub first_order_coeff: f64,
    /// degree-4 element; for n ≥ 5 it is
    /// -(1/2) Σ ⟨Z_i, Jac_h + 9t² Jac_m⟩ Z_iZ_jZ_kZ_l, for n ≤ 4 the
    /// Jac_m part is absent since (H²)₄ = 0 there
    pub degree4: CliffordElement,
    /// total scalar at the distinguished parameter t = 1/3
    pub kp_scalar_third: f64,
    pub rho_g_sq: f64,
    pub rho_h_sq: f64,
}

pub fn kp_report(model: &ReductiveModel, t: f64) -> Result<KPReport> {
    let onb = orthonormal_nr(model)?;
    let n = onb.n();
    let mut sum_h = 0.0;
    let mut sum_m = 0.0;
    for i in 0..n {
        for j in 0..n {
            let bh = onb.bracket_m_h(i, j);
            sum_h += onb.q_h_pair(&bh, &bh);
            let bm = onb.bracket_m_m(i, j);
            sum_m += onb.ip_m(&bm, &bm);
        }
    }
    let scalar_h_part = sum_h / 8.0;
    let scalar_m_part = 3.0 / 8.0 * t * t * sum_m;
    let kp_scalar_third = sum_h / 8.0 + sum_m / 24.0;
    let mut degree4 = CliffordElement::zero(n);
    for combo in combinations(n, 4) {
        let jh = jac_h_basis(&onb, combo[1], combo[2], combo[3]);
        let mut c = jh[combo[0]];
        if n >= 5 {
            let jm = jac_m_basis(&onb, combo[1], combo[2], combo[3]);
            c += 9.0 * t * t * jm[combo[0]];
        }
        c *= -0.5;
        if c != 0.0 {
            degree4 = degree4.add(&CliffordElement::blade(n, &combo, c)?);
        }
    }
    let (rho_g_sq, rho_h_sq) = rho_norms(&onb)?;
    Ok(KPReport {
        t,
        n,
        scalar_h_part,
        scalar_m_part,
        first_order_coeff: (1.0 - 3.0 * t) / 2.0,
        degree4,
        kp_scalar_third,
        rho_g_sq,
        rho_h_sq,
    })
}

/// Orthonormal basis of the space of constant spinors: the joint kernel of
/// the lifted isotropy action.
pub fn constant_spinors(model: &ReductiveModel, rep: &SpinorRep) -> Result<Vec<Spinor>> {
    let onb = model.orthonormalized()?;
    let d = rep.dim_spinor;
    let kh = onb.dim_h();
    if kh == 0 {
        return Ok((0..d).map(|k| Spinor::basis(d, k)).collect());
    }
    let mut stacked = CMatrix::zeros(kh * d, d);
    for a in 0..kh {
        let lift = spin_lift(&onb.isotropy_action(a))?;
        let m = rep.matrix_of(&lift)?;
        for r in 0..d {
            for c in 0..d {
                stacked.set(a * d + r, c, m.get(r, c));
            }
        }
    }
    Ok(stacked
        .null_space(1e-10)
        .into_iter()
        .map(Spinor)
        .collect())
}

/// Residual of the constancy property: max ‖ãd(X)ψ‖ over an h-basis.
pub fn constancy_residual(model: &ReductiveModel, rep: &SpinorRep, psi: &Spinor) -> Result<f64> {
    let onb = model.orthonormalized()?;
    let mut worst: f64 = 0.0;
    for a in 0..onb.dim_h() {
        let lift = spin_lift(&onb.isotropy_action(a))?;
        worst = worst.max(act(rep, &lift, psi)?.norm());
    }
    Ok(worst)
}

fn require_constant(model: &ReductiveModel, rep: &SpinorRep, psi: &Spinor) -> Result<()> {
    if constancy_residual(model, rep, psi)? > 1e-8 {
        return Err(GeomError::NonConstantSpinor);
    }
    Ok(())
}

/// Covariant derivative of a constant spinor along an m-vector for the
/// family connection: ∇ᵗ_Z ψ = (t/3)(Z ⌟ H)·ψ.
pub fn spinor_covariant_derivative(
    model: &ReductiveModel,
    rep: &SpinorRep,
    t: f64,
    z: &[f64],
    psi: &Spinor,
    is_constant: bool,
) -> Result<Spinor> {
    if !is_constant {
        return Err(GeomError::NonConstantSpinor);
    }
    let onb = model.orthonormalized()?;
    let conn = lambda_t(&onb, t);
    spinor_covariant_derivative_with_map(&onb, rep, &conn, z, psi)
}

/// Covariant derivative of a constant spinor for an arbitrary invariant
/// connection: act by the spin lift of Λ(Z).
pub fn spinor_covariant_derivative_with_map(
    model: &ReductiveModel,
    rep: &SpinorRep,
    conn: &ConnectionMap,
    z: &[f64],
    psi: &Spinor,
) -> Result<Spinor> {
    let lift = spin_lift(&conn.at(z))?;
    let _ = model;
    act(rep, &lift, psi)
}

/// (Dᵗ)² on a constant spinor: t²·H²·ψ. Equals
/// 9t²(Q(ρ_g,ρ_g) - Q(ρ_h,ρ_h))·ψ by the Casimir decomposition.
pub fn dirac_square_on_constant(
    model: &ReductiveModel,
    rep: &SpinorRep,
    t: f64,
    psi: &Spinor,
) -> Result<Spinor> {
    require_constant(model, rep, psi)?;
    let h = cubic_element(model)?;
    let h2 = h.mul(&h)?;
    Ok(act(rep, &h2, psi)?.scale(Complex64::new(t * t, 0.0)))
}

/// Certification route for the non-negativity of the lifted Casimir
/// operator of g.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum OmegaCertification {
    /// Q is positive definite on g (normal homogeneous metric).
    NormalHomogeneous,
    /// The negative-definite part of Q pairs only central directions.
    NegativePartCentral,
    /// Neither sufficient condition applies.
    Unknown,
}

impl OmegaCertification {
    pub fn is_certified(self) -> bool {
        !matches!(self, OmegaCertification::Unknown)
    }
}

pub fn certify_omega_nonnegative(model: &ReductiveModel) -> OmegaCertification {
    if model.q.cholesky().is_some() {
        return OmegaCertification::NormalHomogeneous;
    }
    let dim = model.dim();
    // derived algebra span
    let mut gens: Vec<Vec<f64>> = Vec::new();
    for i in 0..dim {
        for j in i + 1..dim {
            gens.push(model.algebra.bracket_basis(i, j));
        }
    }
    let derived = crate::linalg::orthonormal_span(&gens, 1e-8);
    let r = derived.len();
    if r > 0 {
        let q_derived = crate::linalg::RMatrix::from_fn(r, r, |a, b| {
            let mut s = 0.0;
            for p in 0..dim {
                for q in 0..dim {
                    s += derived[a][p] * model.q.get(p, q) * derived[b][q];
                }
            }
            s
        });
        if q_derived.cholesky().is_some() {
            // Q-orthogonal complement of the derived algebra must be central
            let mut pair_rows = crate::linalg::RMatrix::zeros(r, dim);
            for a in 0..r {
                for c in 0..dim {
                    let mut s = 0.0;
                    for p in 0..dim {
                        s += derived[a][p] * model.q.get(p, c);
                    }
                    pair_rows.set(a, c, s);
                }
            }
            let cm = CMatrix::from_fn(r, dim, |i, j| Complex64::new(pair_rows.get(i, j), 0.0));
            let complement = cm.null_space(1e-10);
            let central = complement.iter().all(|v| {
                let real: Vec<f64> = v.iter().map(|z| z.re).collect();
                model.algebra.ad(&real).max_abs() < 1e-9
            });
            if central {
                return OmegaCertification::NegativePartCentral;
            }
        }
    }
    OmegaCertification::Unknown
}

/// First-eigenvalue bound for the distinguished Dirac operator.
#[derive(Debug, Clone, Serialize)]
pub struct EigenvalueBound {
    /// Q(ρ_g,ρ_g) - Q(ρ_h,ρ_h); positive whenever transitivity holds.
    pub bound: f64,
    pub omega_certification: OmegaCertification,
    /// True when constant spinors exist, which is the equality case.
    pub equality_possible: bool,
}

pub fn eigenvalue_bound(model: &ReductiveModel) -> Result<EigenvalueBound> {
    let (rho_g, rho_h) = rho_norms(model)?;
    let rep = SpinorRep::generated(model.n())?;
    let fixed = constant_spinors(model, &rep)?;
    Ok(EigenvalueBound {
        bound: rho_g - rho_h,
        omega_certification: certify_omega_nonnegative(model),
        equality_possible: !fixed.is_empty(),
    })
}

/// Clifford symbol of the derivative term of the invariant first-order
/// operator: for each k, the degree-2 element
/// Σ_{i,j} ⟨\[Z_i,Z_j\]_m, Z_k⟩ Z_i·Z_j.
pub fn d_new_operator_symbol(model: &ReductiveModel) -> Result<Vec<CliffordElement>> {
    let onb = orthonormal_nr(model)?;
    let n = onb.n();
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let mut e = CliffordElement::zero(n);
        let mut ek = vec![0.0; n];
        ek[k] = 1.0;
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let c = onb.ip_m(&onb.bracket_m_m(i, j), &ek);
                if c != 0.0 {
                    e = e.add(&CliffordElement::blade(n, &[i, j], c)?);
                }
            }
        }
        out.push(e);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models;

    #[test]
    fn cubic_element_values() {
        // symmetric space: [m,m]_m = 0 forces H = 0
        let sph = models::round_sphere(4).unwrap();
        assert!(cubic_element(&sph).unwrap().max_abs_coeff() < 1e-14);
        // V4,2: H = (3/2)√(2s)(Z1Z3Z5 + Z2Z4Z5)
        for s in [0.25f64, 0.5, 1.0] {
            let m = models::chavel_ziller(s).unwrap();
            let h = cubic_element(&m).unwrap();
            let c = 1.5 * (2.0 * s).sqrt();
            assert!((h.coeff(&[0, 2, 4]) - c).abs() < 1e-12);
            assert!((h.coeff(&[1, 3, 4]) - c).abs() < 1e-12);
            assert_eq!(h.present_grades(), vec![3]);
            // exactly two blades
            assert_eq!(h.terms().count(), 2);
        }
        // form route: the family torsion maps to (2(2t-1)/3) H
        let m = models::chavel_ziller(0.7).unwrap();
        let h = cubic_element(&m).unwrap();
        for t in [0.0, 1.0 / 3.0, 0.5, 1.0] {
            let tf = crate::connection::family_torsion_form(&m, t)
                .to_alt_form()
                .unwrap();
            let tc = crate::clifford::form_to_clifford(&tf);
            let scaled = h.scale(2.0 * (2.0 * t - 1.0) / 3.0);
            assert!(tc.approx_eq(&scaled, 1e-12));
        }
        // non-naturally-reductive input is rejected
        assert!(cubic_element(&models::stiefel_jensen(0.25).unwrap()).is_err());
    }

    #[test]
    fn h_squared_closed_forms_match_brute_force() {
        for m in [
            models::su2(1.0),
            models::chavel_ziller(0.25).unwrap(),
            models::chavel_ziller(0.5).unwrap(),
            models::chavel_ziller(1.0).unwrap(),
            models::round_sphere(5).unwrap(),
        ] {
            let h = cubic_element(&m).unwrap();
            let h2 = h.mul(&h).unwrap();
            let grades = h_squared_grades(&m).unwrap();
            assert!(
                (h2.grade(0).coeff(&[]) - grades.grade0).abs() < 1e-9,
                "grade 0 on {}",
                m.name
            );
            assert!(h2.grade(4).approx_eq(&grades.grade4, 1e-9), "grade 4 on {}", m.name);
            for g in h2.present_grades() {
                assert!(g == 0 || g == 4, "unexpected grade {g} in H² on {}", m.name);
            }
        }
    }

    #[test]
    fn h_squared_chavel_ziller_values() {
        for s in [0.25f64, 0.5, 2.0 / 3.0, 1.0] {
            let m = models::chavel_ziller(s).unwrap();
            let grades = h_squared_grades(&m).unwrap();
            assert!((grades.grade0 - 9.0 * s).abs() < 1e-10, "s = {s}");
            // 9s · Z1Z2Z3Z4 is the only degree-4 term
            assert!((grades.grade4.coeff(&[0, 1, 2, 3]) - 9.0 * s).abs() < 1e-10);
            assert_eq!(grades.grade4.terms().count(), 1);
        }
    }

    #[test]
    fn h_squared_low_dimensions_have_no_grade4() {
        let su2 = models::su2(1.0);
        let grades = h_squared_grades(&su2).unwrap();
        assert_eq!(grades.grade4.max_abs_coeff(), 0.0);
        let h = cubic_element(&su2).unwrap();
        let h2 = h.mul(&h).unwrap();
        assert!(h2.grade(4).max_abs_coeff() < 1e-14);
        // n = 4: a bi-invariant su(2) ⊕ R model
        let mut c = crate::lie::LieAlgebraData::new(4);
        c.set_pair(0, 1, 2, 1.0);
        c.set_pair(1, 2, 0, 1.0);
        c.set_pair(2, 0, 1, 1.0);
        let m4 = models::bi_invariant_group(c, 1.0).unwrap();
        let grades = h_squared_grades(&m4).unwrap();
        assert_eq!(grades.grade4.max_abs_coeff(), 0.0);
        let h = cubic_element(&m4).unwrap();
        let h2 = h.mul(&h).unwrap();
        assert!(h2.grade(4).max_abs_coeff() < 1e-14);
        assert!((h2.grade(0).coeff(&[]) - grades.grade0).abs() < 1e-12);
    }

    #[test]
    fn anticommutator_identity() {
        // H·Z_l + Z_l·H = -(3/2) Σ ⟨Z_l,[Z_i,Z_j]_m⟩ Z_iZ_j
        for m in [
            models::chavel_ziller(0.5).unwrap(),
            models::chavel_ziller(1.0).unwrap(),
            models::su2(1.0),
        ] {
            let n = m.n();
            let h = cubic_element(&m).unwrap();
            for l in 0..n {
                let zl = CliffordElement::generator(n, l);
                let lhs = h.mul(&zl).unwrap().add(&zl.mul(&h).unwrap());
                let mut rhs = CliffordElement::zero(n);
                let mut el = vec![0.0; n];
                el[l] = 1.0;
                for i in 0..n {
                    for j in 0..n {
                        if i == j {
                            continue;
                        }
                        let c = -1.5 * m.ip_m(&el, &m.bracket_m_m(i, j));
                        if c != 0.0 {
                            rhs = rhs.add(&CliffordElement::blade(n, &[i, j], c).unwrap());
                        }
                    }
                }
                assert!(lhs.approx_eq(&rhs, 1e-10), "l = {l} on {}", m.name);
            }
        }
    }

    #[test]
    fn casimir_lift_routes_agree() {
        for m in [
            models::chavel_ziller(0.25).unwrap(),
            models::chavel_ziller(0.5).unwrap(),
            models::chavel_ziller(1.0).unwrap(),
            models::round_sphere(4).unwrap(),
        ] {
            let four_index = casimir_lift(&m).unwrap();
            let dual = casimir_lift_dual_route(&m).unwrap();
            assert!(
                four_index.approx_eq(&dual, 1e-10),
                "casimir routes disagree on {}",
                m.name
            );
            // no degree-2 term
            assert!(four_index.grade(2).max_abs_coeff() < 1e-12);
        }
        // trivial isotropy
        assert!(casimir_lift(&models::su2(1.0)).unwrap().max_abs_coeff() == 0.0);
    }

    #[test]
    fn casimir_lift_grades() {
        for s in [0.25f64, 0.5, 1.0] {
            let m = models::chavel_ziller(s).unwrap();
            let c = casimir_lift(&m).unwrap();
            // grade 0 equals (1/8) Σ Q_h([Z_i,Z_j],[Z_i,Z_j]) = 1 - s
            assert!((c.grade(0).coeff(&[]) - (1.0 - s)).abs() < 1e-10, "s = {s}");
            // grade 4 matches -(1/2)⟨Z_i, Jac_h(Z_j,Z_k,Z_l)⟩ blades
            let n = m.n();
            for combo in crate::forms::combinations(n, 4) {
                let jh = jac_h_basis(&m, combo[1], combo[2], combo[3]);
                let expected = -0.5 * jh[combo[0]];
                assert!((c.grade(4).coeff(&combo) - expected).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn kp_scalars_on_chavel_ziller() {
        // scalar_h + scalar_m = 1 + (9t² - 1)s
        for s in [0.25f64, 0.5, 2.0 / 3.0, 1.0] {
            let m = models::chavel_ziller(s).unwrap();
            for t in [0.0, 1.0 / 3.0, 0.5, 1.0] {
                let rep = kp_report(&m, t).unwrap();
                let total = rep.scalar_h_part + rep.scalar_m_part;
                let expected = 1.0 + (9.0 * t * t - 1.0) * s;
                assert!((total - expected).abs() < 1e-10, "s = {s}, t = {t}");
                assert!((rep.first_order_coeff - (1.0 - 3.0 * t) / 2.0).abs() < 1e-15);
            }
            let rep = kp_report(&m, 1.0 / 3.0).unwrap();
            assert!((rep.kp_scalar_third - 1.0).abs() < 1e-10);
            assert!((rep.rho_g_sq - rep.rho_h_sq - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn kp_degree4_cancellation_at_third() {
        for m in [
            models::su2(1.0),
            models::chavel_ziller(0.25).unwrap(),
            models::chavel_ziller(1.0).unwrap(),
            models::round_sphere(5).unwrap(),
        ] {
            let rep = kp_report(&m, 1.0 / 3.0).unwrap();
            assert!(
                rep.degree4.max_abs_coeff() < 1e-9,
                "degree-4 cancellation fails on {}",
                m.name
            );
        }
        // away from t = 1/3 the element is nonzero when Jac_m ≠ 0
        let m = models::chavel_ziller(0.5).unwrap();
        let rep = kp_report(&m, 1.0).unwrap();
        assert!(rep.degree4.max_abs_coeff() > 1e-3);
    }

    #[test]
    fn kp_degree4_low_dimension_branch() {
        // in dimensions 3 and 4 the Jac_m part is absent; for naturally
        // reductive data the remaining Jac_h pairing vanishes as well, by
        // total antisymmetry of the torsion
        let mut c = crate::lie::LieAlgebraData::new(4);
        c.set_pair(0, 1, 2, 1.0);
        c.set_pair(1, 2, 0, 1.0);
        c.set_pair(2, 0, 1, 1.0);
        let m4 = models::bi_invariant_group(c, 1.0).unwrap();
        for t in [0.0, 1.0 / 3.0, 1.0] {
            let rep = kp_report(&m4, t).unwrap();
            assert_eq!(rep.n, 4);
            assert!(rep.degree4.max_abs_coeff() < 1e-12);
        }
        let s2 = models::round_sphere(2).unwrap();
        let rep = kp_report(&s2, 1.0 / 3.0).unwrap();
        assert!(rep.degree4.max_abs_coeff() < 1e-12);
    }

    #[test]
    fn kp_identity_with_rho_norms() {
        // kp_scalar_third = Q(ρ_g,ρ_g) - Q(ρ_h,ρ_h) for n = 3 or n ≥ 5
        for m in [
            models::su2(1.0),
            models::su2(2.0),
            models::chavel_ziller(0.25).unwrap(),
            models::chavel_ziller(0.5).unwrap(),
            models::chavel_ziller(2.0 / 3.0).unwrap(),
            models::chavel_ziller(1.0).unwrap(),
            models::round_sphere(5).unwrap(),
            models::round_sphere(6).unwrap(),
        ] {
            let rep = kp_report(&m, 0.0).unwrap();
            assert!(
                (rep.kp_scalar_third - (rep.rho_g_sq - rep.rho_h_sq)).abs() < 1e-9,
                "trace identity fails on {} (kp = {}, ρ-difference = {})",
                m.name,
                rep.kp_scalar_third,
                rep.rho_g_sq - rep.rho_h_sq
            );
        }
    }

    #[test]
    fn sphere_scalar_curvature_identity() {
        // Scal = 8(Q(ρ_g,ρ_g) - Q(ρ_h,ρ_h)) on the symmetric spheres
        for n in [2usize, 3, 4, 5, 6] {
            let m = models::round_sphere(n).unwrap();
            let scal = crate::connection::scal(&m, 0.5).unwrap();
            let (rg, rh) = rho_norms(&m).unwrap();
            assert!(
                (scal - 8.0 * (rg - rh)).abs() < 1e-9 * scal.abs().max(1.0),
                "sphere dimension {n}"
            );
            assert!((scal - (n * (n - 1)) as f64).abs() < 1e-9);
        }
    }

    #[test]
    fn constant_spinor_spaces() {
        // trivial isotropy: everything is constant
        let su2 = models::su2(1.0);
        let rep = SpinorRep::generated(3).unwrap();
        assert_eq!(constant_spinors(&su2, &rep).unwrap().len(), 2);
        // V4,2 with the one-dimensional isotropy: two constant spinors
        let rep5 = models::spin_fixture_dim5();
        let jensen = models::stiefel_jensen(0.7).unwrap();
        let fixed = constant_spinors(&jensen, &rep5).unwrap();
        assert_eq!(fixed.len(), 2);
        for psi in &fixed {
            // spanned by the ψ_3, ψ_4 directions of the fixture
            assert!(psi.0[0].norm() < 1e-12 && psi.0[1].norm() < 1e-12);
            assert!(constancy_residual(&jensen, &rep5, psi).unwrap() < 1e-12);
        }
        // enlarged isotropy so(2)⊕so(2): the two kernels intersect
        // trivially away from s = 1/2, so no constant spinors exist there
        for s in [0.25, 2.0 / 3.0, 1.0] {
            let cz = models::chavel_ziller(s).unwrap();
            assert_eq!(
                constant_spinors(&cz, &rep5).unwrap().len(),
                0,
                "s = {s}"
            );
        }
        // at s = 1/2 the presentation degenerates and two survive
        let cz_half = models::chavel_ziller(0.5).unwrap();
        assert_eq!(constant_spinors(&cz_half, &rep5).unwrap().len(), 2);
    }

    #[test]
    fn covariant_derivative_routes_agree() {
        // ∇ᵗ_Z ψ = (t/3)(Z ⌟ H)ψ = act(spin lift of Λᵗ(Z))ψ
        let m = models::chavel_ziller(0.5).unwrap();
        let rep = models::spin_fixture_dim5();
        let h = cubic_element(&m).unwrap();
        let spinors = constant_spinors(&m, &rep).unwrap();
        for t in [0.0, 1.0 / 3.0, 0.5, 1.0] {
            for psi in &spinors {
                for dir in 0..5 {
                    let mut z = vec![0.0; 5];
                    z[dir] = 1.0;
                    let lhs =
                        spinor_covariant_derivative(&m, &rep, t, &z, psi, true).unwrap();
                    let contracted = h.interior(&z).scale(t / 3.0);
                    let rhs = act(&rep, &contracted, psi).unwrap();
                    assert!(lhs.sub(&rhs).norm() < 1e-10, "t = {t}, dir = {dir}");
                    if t == 0.0 {
                        assert!(lhs.norm() < 1e-12, "canonical connection is flat on ψ");
                    }
                }
            }
        }
        let (plus, _) = models::fixture_spinor_pair();
        assert!(matches!(
            spinor_covariant_derivative(&m, &rep, 0.5, &[1.0, 0.0, 0.0, 0.0, 0.0], &plus, false),
            Err(GeomError::NonConstantSpinor)
        ));
    }

    #[test]
    fn interior_product_of_h_matches_spin_lift() {
        // (t/3)(Z_i ⌟ H) = spin lift of t·[Z_i, -]_m, entrywise
        let m = models::chavel_ziller(0.25).unwrap();
        let h = cubic_element(&m).unwrap();
        let t = 0.7;
        let conn = lambda_t(&m, t);
        for i in 0..5 {
            let mut z = vec![0.0; 5];
            z[i] = 1.0;
            let route_a = h.interior(&z).scale(t / 3.0);
            let route_b = spin_lift(&conn.maps[i]).unwrap();
            assert!(route_a.approx_eq(&route_b, 1e-10), "direction {i}");
        }
    }

    #[test]
    fn dirac_square_eigenvalue_on_constant_spinors() {
        // (Dᵗ)²ψ = 9t²(ρ_g² - ρ_h²)ψ
        let m = models::chavel_ziller(0.5).unwrap();
        let rep = models::spin_fixture_dim5();
        let spinors = constant_spinors(&m, &rep).unwrap();
        let (rg, rh) = rho_norms(&m).unwrap();
        for t in [0.0, 1.0 / 3.0, 0.5, 1.0] {
            for psi in &spinors {
                let lhs = dirac_square_on_constant(&m, &rep, t, psi).unwrap();
                let rhs = psi.scale(Complex64::new(9.0 * t * t * (rg - rh), 0.0));
                assert!(lhs.sub(&rhs).norm() < 1e-9, "t = {t}");
            }
        }
        // su(2): every spinor is constant and H²ψ = 9ρ_g²ψ
        let su2 = models::su2(1.0);
        let rep3 = SpinorRep::generated(3).unwrap();
        let (rg, _) = rho_norms(&su2).unwrap();
        for k in 0..2 {
            let psi = Spinor::basis(2, k);
            let lhs = dirac_square_on_constant(&su2, &rep3, 1.0, &psi).unwrap();
            let rhs = psi.scale(Complex64::new(9.0 * rg, 0.0));
            assert!(lhs.sub(&rhs).norm() < 1e-10);
        }
        // H·ψ never vanishes on a nonzero constant spinor when H ≠ 0
        let h = cubic_element(&m).unwrap();
        for psi in &spinors {
            assert!(act(&rep, &h, psi).unwrap().norm() > 1e-6);
        }
    }

    #[test]
    fn eigenvalue_bounds() {
        for s in [0.25, 0.5, 2.0 / 3.0, 1.0] {
            let m = models::chavel_ziller(s).unwrap();
            let b = eigenvalue_bound(&m).unwrap();
            assert!((b.bound - 1.0).abs() < 1e-9, "bound must be 1 at s = {s}");
            assert!(b.omega_certification.is_certified(), "s = {s}");
            assert_eq!(b.equality_possible, (s - 0.5).abs() < 1e-12);
        }
        // normal homogeneous cases
        let b = eigenvalue_bound(&models::su2(1.0)).unwrap();
        assert_eq!(b.omega_certification, OmegaCertification::NormalHomogeneous);
        assert!((b.bound - 0.25).abs() < 1e-12);
        assert!(b.bound > 0.0);
        // the certification distinguishes the two sufficient conditions
        let cz = models::chavel_ziller(1.0).unwrap();
        assert_eq!(
            certify_omega_nonnegative(&cz),
            OmegaCertification::NegativePartCentral
        );
        let cz_small = models::chavel_ziller(0.25).unwrap();
        assert_eq!(
            certify_omega_nonnegative(&cz_small),
            OmegaCertification::NormalHomogeneous
        );
        // sphere: bound = Scal/8
        let sph = models::round_sphere(4).unwrap();
        let b = eigenvalue_bound(&sph).unwrap();
        let scal = crate::connection::scal(&sph, 0.5).unwrap();
        assert!((b.bound - scal / 8.0).abs() < 1e-10);
    }

    #[test]
    fn d_new_symbol_matches_anticommutator() {
        let m = models::chavel_ziller(0.5).unwrap();
        let symbols = d_new_operator_symbol(&m).unwrap();
        let h = cubic_element(&m).unwrap();
        for (k, sym) in symbols.iter().enumerate() {
            let zk = CliffordElement::generator(5, k);
            let anti = h.mul(&zk).unwrap().add(&zk.mul(&h).unwrap());
            assert!(sym.approx_eq(&anti.scale(-2.0 / 3.0), 1e-10), "k = {k}");
        }
        // V4,2: the Z_5 symbol is 2√(2s)(Z1Z3 + Z2Z4)
        let s: f64 = 0.5;
        let c = 2.0 * (2.0 * s).sqrt();
        assert!((symbols[4].coeff(&[0, 2]) - c).abs() < 1e-12);
        assert!((symbols[4].coeff(&[1, 3]) - c).abs() < 1e-12);
        // symmetric space: the symbol vanishes
        let sph = models::round_sphere(4).unwrap();
        for sym in d_new_operator_symbol(&sph).unwrap() {
            assert!(sym.max_abs_coeff() < 1e-14);
        }
    }
}
