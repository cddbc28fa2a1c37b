//! Invariant metric connections on a reductive model: the one-parameter
//! family Λᵗ(X)Y = t\[X,Y\]_m, the general Levi-Civita map, torsion and its
//! calculus, curvature and Ricci tensors, holonomy and self-adjointness.
//!
//! A connection is encoded by its Nomizu map: one skew matrix per m-basis
//! vector, acting on m.

use crate::error::{GeomError, Result};
use crate::forms::{combinations, AltForm, Tensor3};
use crate::lie::{BilinearFormOnM, FormRole, ReductiveModel};
use crate::linalg::RMatrix;

/// How a connection map was produced.
#[derive(Debug, Clone, PartialEq)]
pub enum ConnectionTag {
    CanonicalFamily { t: f64 },
    LeviCivita,
    Contact,
    Custom,
}

/// Nomizu map of an invariant metric connection.
#[derive(Debug, Clone)]
pub struct ConnectionMap {
    /// maps\[a\] is the matrix of Λ(Z_a) on m.
    pub maps: Vec<RMatrix>,
    pub tag: ConnectionTag,
}

impl ConnectionMap {
    /// Λ(v) for an m-coordinate vector v.
    pub fn at(&self, v: &[f64]) -> RMatrix {
        let n = self.maps.len();
        let mut out = RMatrix::zeros(n, n);
        for (a, &va) in v.iter().enumerate() {
            if va == 0.0 {
                continue;
            }
            out = out.add(&self.maps[a].scale(va));
        }
        out
    }

    /// Largest skewness residual of the maps w.r.t. the model metric.
    pub fn skewness_residual(&self, model: &ReductiveModel) -> f64 {
        self.maps
            .iter()
            .fold(0.0, |m, l| m.max(l.skewness_residual(&model.metric_m)))
    }
}

/// Λᵗ(X)Y = t·\[X,Y\]_m. t = 0 is the canonical connection, t = 1/2 the
/// Levi-Civita connection of a naturally reductive metric, t = 1 the
/// anticanonical one.
pub fn lambda_t(model: &ReductiveModel, t: f64) -> ConnectionMap {
    let n = model.n();
    let maps = (0..n)
        .map(|a| {
            let mut m = RMatrix::zeros(n, n);
            for b in 0..n {
                let col = model.bracket_m_m(a, b);
                for k in 0..n {
                    m.set(k, b, t * col[k]);
                }
            }
            m
        })
        .collect();
    ConnectionMap {
        maps,
        tag: ConnectionTag::CanonicalFamily { t },
    }
}

/// The unique metric and torsion-free Nomizu map:
/// ⟨Λ(X)Y, Z⟩ = ½(⟨\[X,Y\]_m, Z⟩ - ⟨\[Y,Z\]_m, X⟩ + ⟨\[Z,X\]_m, Y⟩).
/// Natural reductivity is not required.
pub fn levi_civita_map(model: &ReductiveModel) -> Result<ConnectionMap> {
    let n = model.n();
    let g_inv = model.metric_m.inverse()?;
    let basis = |i: usize| -> Vec<f64> {
        let mut e = vec![0.0; n];
        e[i] = 1.0;
        e
    };
    let mut maps = Vec::with_capacity(n);
    for a in 0..n {
        let mut lowered = RMatrix::zeros(n, n); // (z, b) entry = ⟨Λ(Z_a)Z_b, Z_z⟩
        for b in 0..n {
            for z in 0..n {
                let v = 0.5
                    * (model.ip_m(&model.bracket_m_m(a, b), &basis(z))
                        - model.ip_m(&model.bracket_m_m(b, z), &basis(a))
                        + model.ip_m(&model.bracket_m_m(z, a), &basis(b)));
                lowered.set(z, b, v);
            }
        }
        maps.push(g_inv.matmul(&lowered));
    }
    Ok(ConnectionMap {
        maps,
        tag: ConnectionTag::LeviCivita,
    })
}

/// Torsion of a connection, in both (1,2)- and (0,3)-index pictures.
#[derive(Debug, Clone)]
pub struct TorsionData {
    /// vector(a, b, k): coefficient of Z_k in T(Z_a, Z_b).
    pub vector: Tensor3,
    /// form(a, b, c) = ⟨T(Z_a, Z_b), Z_c⟩.
    pub form: Tensor3,
    /// Deviation of the (0,3) tensor from total antisymmetry. Zero exactly
    /// when the connection has skew torsion; reported as a diagnostic.
    pub antisymmetry_residual: f64,
}

impl TorsionData {
    pub fn is_three_form(&self, tol: f64) -> bool {
        self.antisymmetry_residual < tol
    }
}

/// T(X,Y) = Λ(X)Y - Λ(Y)X - \[X,Y\]_m.
pub fn torsion(model: &ReductiveModel, conn: &ConnectionMap) -> TorsionData {
    let n = model.n();
    let mut vector = Tensor3::zeros(n);
    let mut form = Tensor3::zeros(n);
    for a in 0..n {
        for b in 0..n {
            let mut t = vec![0.0; n];
            for k in 0..n {
                t[k] = conn.maps[a].get(k, b) - conn.maps[b].get(k, a);
            }
            let br = model.bracket_m_m(a, b);
            for k in 0..n {
                t[k] -= br[k];
                vector.set(a, b, k, t[k]);
            }
            for c in 0..n {
                let mut e = vec![0.0; n];
                e[c] = 1.0;
                form.set(a, b, c, model.ip_m(&t, &e));
            }
        }
    }
    let antisymmetry_residual = form.antisymmetry_residual();
    TorsionData {
        vector,
        form,
        antisymmetry_residual,
    }
}

/// Torsion 3-form of the family connection: T(X,Y) = (2t-1)\[X,Y\]_m.
pub fn family_torsion_form(model: &ReductiveModel, t: f64) -> Tensor3 {
    let n = model.n();
    Tensor3::from_fn(n, |a, b, c| {
        let mut e = vec![0.0; n];
        e[c] = 1.0;
        (2.0 * t - 1.0) * model.ip_m(&model.bracket_m_m(a, b), &e)
    })
}

/// Jac_m(X,Y,Z) = [X,\[Y,Z\]_m]_m + [Y,\[Z,X\]_m]_m + [Z,\[X,Y\]_m]_m,
/// for m-coordinate vectors.
pub fn jac_m(model: &ReductiveModel, x: &[f64], y: &[f64], z: &[f64]) -> Result<Vec<f64>> {
    let t1 = model.bracket_m_vectors(x, &model.bracket_m_vectors(y, z)?)?;
    let t2 = model.bracket_m_vectors(y, &model.bracket_m_vectors(z, x)?)?;
    let t3 = model.bracket_m_vectors(z, &model.bracket_m_vectors(x, y)?)?;
    Ok((0..model.n()).map(|k| t1[k] + t2[k] + t3[k]).collect())
}

/// Jac_h(X,Y,Z) = [X,\[Y,Z\]_h] + [Y,\[Z,X\]_h] + [Z,\[X,Y\]_h]; lands in m
/// by reductivity, returned in m-coordinates.
pub fn jac_h(model: &ReductiveModel, x: &[f64], y: &[f64], z: &[f64]) -> Result<Vec<f64>> {
    let gx = model.m_to_g(x);
    let gy = model.m_to_g(y);
    let gz = model.m_to_g(z);
    let h = |v: &[f64]| model.project(v, crate::lie::Part::H);
    let t1 = model.bracket(&gx, &h(&model.bracket(&gy, &gz)?))?;
    let t2 = model.bracket(&gy, &h(&model.bracket(&gz, &gx)?))?;
    let t3 = model.bracket(&gz, &h(&model.bracket(&gx, &gy)?))?;
    let sum: Vec<f64> = (0..model.dim()).map(|k| t1[k] + t2[k] + t3[k]).collect();
    Ok(model.to_m_coords(&sum))
}

fn basis_vec(n: usize, i: usize) -> Vec<f64> {
    let mut e = vec![0.0; n];
    e[i] = 1.0;
    e
}

/// Jac_m on basis triples.
pub fn jac_m_basis(model: &ReductiveModel, a: usize, b: usize, c: usize) -> Vec<f64> {
    let n = model.n();
    jac_m(model, &basis_vec(n, a), &basis_vec(n, b), &basis_vec(n, c)).unwrap()
}

/// Jac_h on basis triples.
pub fn jac_h_basis(model: &ReductiveModel, a: usize, b: usize, c: usize) -> Vec<f64> {
    let n = model.n();
    jac_h(model, &basis_vec(n, a), &basis_vec(n, b), &basis_vec(n, c)).unwrap()
}

/// Curvature of the family connection:
/// Rᵗ(X,Y)Z = t²[X,\[Y,Z\]_m]_m + t²[Y,\[Z,X\]_m]_m + t[Z,\[X,Y\]_m]_m + [Z,\[X,Y\]_h].
pub fn curvature(model: &ReductiveModel, t: f64, x: &[f64], y: &[f64]) -> Result<RMatrix> {
    let n = model.n();
    let xy = model.bracket(&model.m_to_g(x), &model.m_to_g(y))?;
    let xy_m = model.to_m_coords(&xy);
    let xy_h = model.project(&xy, crate::lie::Part::H);
    let mut out = RMatrix::zeros(n, n);
    for c in 0..n {
        let z = basis_vec(n, c);
        let t1 = model.bracket_m_vectors(x, &model.bracket_m_vectors(y, &z)?)?;
        let t2 = model.bracket_m_vectors(y, &model.bracket_m_vectors(&z, x)?)?;
        let t3 = model.bracket_m_vectors(&z, &xy_m)?;
        let t4 = model.to_m_coords(&model.bracket(&model.m_to_g(&z), &xy_h)?);
        for k in 0..n {
            out.set(k, c, t * t * (t1[k] + t2[k]) + t * t3[k] + t4[k]);
        }
    }
    Ok(out)
}

/// Curvature of an arbitrary invariant connection (Wang's formula):
/// R(X,Y) = \[Λ(X),Λ(Y)\] - Λ(\[X,Y\]_m) - ad(\[X,Y\]_h)|_m.
pub fn curvature_general(
    model: &ReductiveModel,
    conn: &ConnectionMap,
    x: &[f64],
    y: &[f64],
) -> Result<RMatrix> {
    let n = model.n();
    let lx = conn.at(x);
    let ly = conn.at(y);
    let xy = model.bracket(&model.m_to_g(x), &model.m_to_g(y))?;
    let xy_m = model.to_m_coords(&xy);
    let xy_h = model.to_h_coords(&xy);
    let mut ad_h = RMatrix::zeros(n, n);
    for (pos, &v) in xy_h.iter().enumerate() {
        if v == 0.0 {
            continue;
        }
        ad_h = ad_h.add(&model.isotropy_action(pos).scale(v));
    }
    Ok(lx.commutator(&ly).sub(&conn.at(&xy_m)).sub(&ad_h))
}

fn pull_back_form(model: &ReductiveModel, mat: RMatrix, role: FormRole) -> Result<BilinearFormOnM> {
    if model.is_orthonormal() {
        return Ok(BilinearFormOnM { matrix: mat, role });
    }
    // values were computed in the orthonormal frame f = L^{-1} e;
    // express the form back in the model basis: B_e = L B_f Lᵀ
    let l = model
        .metric_m
        .cholesky()
        .ok_or(GeomError::NonPositiveDefiniteMetric)?;
    Ok(BilinearFormOnM {
        matrix: l.matmul(&mat).matmul(&l.transpose()),
        role,
    })
}

/// Ricci tensor of the family connection:
/// Ricᵗ(X,Y) = Σ_i (t-t²)⟨\[X,Z_i\]_m,\[Y,Z_i\]_m⟩ + Q_h(\[X,Z_i\],\[Y,Z_i\]).
pub fn ricci(model: &ReductiveModel, t: f64) -> Result<BilinearFormOnM> {
    let onb = model.orthonormalized()?;
    let n = onb.n();
    let mut mat = RMatrix::zeros(n, n);
    for a in 0..n {
        for b in 0..n {
            let mut s = 0.0;
            for i in 0..n {
                s += (t - t * t) * onb.ip_m(&onb.bracket_m_m(a, i), &onb.bracket_m_m(b, i));
                s += onb.q_h_pair(&onb.bracket_m_h(a, i), &onb.bracket_m_h(b, i));
            }
            mat.set(a, b, s);
        }
    }
    pull_back_form(model, mat, FormRole::Ricci)
}

/// Ricci of an arbitrary connection by contracting Wang's curvature.
pub fn ricci_general(model: &ReductiveModel, conn: &ConnectionMap) -> Result<BilinearFormOnM> {
    let onb = model.orthonormalized()?;
    let conn = if model.is_orthonormal() {
        conn.clone()
    } else {
        return Err(GeomError::InvalidModel(
            "general Ricci expects an orthonormal model".to_string(),
        ));
    };
    let n = onb.n();
    let mut mat = RMatrix::zeros(n, n);
    for a in 0..n {
        let x = basis_vec(n, a);
        for i in 0..n {
            let zi = basis_vec(n, i);
            let r = curvature_general(&onb, &conn, &x, &zi)?;
            // ⟨R(X, Z_i) Z_i, Z_b⟩
            for b in 0..n {
                mat.add_at(a, b, r.get(b, i));
            }
        }
    }
    Ok(BilinearFormOnM {
        matrix: mat,
        role: FormRole::Ricci,
    })
}

/// Scalar curvature: metric trace of the Ricci tensor.
pub fn scal(model: &ReductiveModel, t: f64) -> Result<f64> {
    let ric = ricci(model, t)?;
    let g_inv = model.metric_m.inverse()?;
    Ok(g_inv.matmul(&ric.matrix).trace())
}

/// Ricci tensor from the Killing form and the isotropy Casimir:
/// Ricᵗ = (t-t²)β + (2t²-2t+1)A.
pub fn ricci_wang_ziller(model: &ReductiveModel, t: f64) -> Result<BilinearFormOnM> {
    let beta = model.killing_beta();
    let a = model.casimir_a()?;
    let mat = beta
        .matrix
        .scale(t - t * t)
        .add(&a.matrix.scale(2.0 * t * t - 2.0 * t + 1.0));
    Ok(BilinearFormOnM {
        matrix: mat,
        role: FormRole::Ricci,
    })
}

/// Four-index tensor (∇ᵗ_Z Tᵗ)(X,Y,V), stored with index order (z, x, y, v).
#[derive(Debug, Clone)]
pub struct Tensor4 {
    pub n: usize,
    data: Vec<f64>,
}

impl Tensor4 {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * n * n * n],
        }
    }

    #[inline]
    pub fn get(&self, z: usize, x: usize, y: usize, v: usize) -> f64 {
        self.data[((z * self.n + x) * self.n + y) * self.n + v]
    }

    #[inline]
    pub fn set(&mut self, z: usize, x: usize, y: usize, v: usize, val: f64) {
        self.data[((z * self.n + x) * self.n + y) * self.n + v] = val;
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, &v| m.max(v.abs()))
    }
}

/// Covariant derivative of the torsion of the family connection, computed as
/// the connection correction terms of the invariant (0,3) tensor.
pub fn nabla_torsion(model: &ReductiveModel, t: f64) -> Result<Tensor4> {
    let onb = model.orthonormalized()?;
    let n = onb.n();
    let conn = lambda_t(&onb, t);
    let tform = family_torsion_form(&onb, t);
    let mut out = Tensor4::zeros(n);
    for z in 0..n {
        let lam = &conn.maps[z];
        for x in 0..n {
            for y in 0..n {
                for v in 0..n {
                    // (∇_Z T)(X,Y,V) = -T(ΛX,Y,V) - T(X,ΛY,V) - T(X,Y,ΛV)
                    let mut s = 0.0;
                    for k in 0..n {
                        s -= lam.get(k, x) * tform.get(k, y, v);
                        s -= lam.get(k, y) * tform.get(x, k, v);
                        s -= lam.get(k, v) * tform.get(x, y, k);
                    }
                    out.set(z, x, y, v, s);
                }
            }
        }
    }
    Ok(out)
}

/// Codifferential of the family torsion: δT(X,Y) = -Σ_i (∇_{Z_i}T)(Z_i,X,Y).
pub fn delta_torsion(model: &ReductiveModel, t: f64) -> Result<AltForm> {
    let nt = nabla_torsion(model, t)?;
    let n = nt.n;
    let mut out = AltForm::zero(n, 2);
    for combo in combinations(n, 2) {
        let mut s = 0.0;
        for i in 0..n {
            s -= nt.get(i, i, combo[0], combo[1]);
        }
        out.set_sorted(&combo, s);
    }
    Ok(out)
}

/// Covariant derivative of an invariant form at the base point:
/// (∇_Z ω)(Y₁..Y_r) = -Σ_q ω(Y₁, .., Λ(Z)Y_q, .., Y_r).
pub fn covariant_derivative_form(
    model: &ReductiveModel,
    conn: &ConnectionMap,
    omega: &AltForm,
    z: usize,
) -> AltForm {
    let n = model.n();
    let r = omega.r;
    let lam = &conn.maps[z];
    AltForm::from_fn(n, r, |combo| {
        let mut s = 0.0;
        for q in 0..r {
            let mut args: Vec<usize> = combo.to_vec();
            // replace slot q by Λ(Z_z) Z_{combo[q]} and contract
            for k in 0..n {
                let c = lam.get(k, combo[q]);
                if c == 0.0 {
                    continue;
                }
                args[q] = k;
                s -= c * omega.value(&args);
            }
            args[q] = combo[q];
        }
        s
    })
}

/// Exterior derivative of an invariant r-form through a connection with
/// torsion: the covariant-derivative sum plus torsion corrections.
pub fn exterior_derivative(
    model: &ReductiveModel,
    conn: &ConnectionMap,
    omega: &AltForm,
) -> AltForm {
    let n = model.n();
    let r = omega.r;
    let tors = torsion(model, conn);
    let nablas: Vec<AltForm> = (0..n)
        .map(|z| covariant_derivative_form(model, conn, omega, z))
        .collect();
    AltForm::from_fn(n, r + 1, |combo| {
        let mut s = 0.0;
        for k in 0..=r {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            let rest: Vec<usize> = combo
                .iter()
                .enumerate()
                .filter(|&(p, _)| p != k)
                .map(|(_, &x)| x)
                .collect();
            s += sign * nablas[combo[k]].value(&rest);
        }
        for k in 0..=r {
            for l in k + 1..=r {
                let sign = if (k + l) % 2 == 0 { 1.0 } else { -1.0 };
                let rest: Vec<usize> = combo
                    .iter()
                    .enumerate()
                    .filter(|&(p, _)| p != k && p != l)
                    .map(|(_, &x)| x)
                    .collect();
                let tvec: Vec<f64> =
                    (0..n).map(|q| tors.vector.get(combo[k], combo[l], q)).collect();
                s -= sign * omega.value_vector_first(&tvec, &rest);
            }
        }
        s
    })
}

/// Exterior derivative of an invariant form by the algebraic dictionary:
/// derivative terms vanish, brackets are the m-projected algebraic brackets.
/// Calibrated so that dη of the dual of an invariant direction reproduces
/// dω(X,Y) = -ω(\[X,Y\]_m).
pub fn invariant_exterior_derivative(model: &ReductiveModel, omega: &AltForm) -> AltForm {
    let n = model.n();
    let r = omega.r;
    AltForm::from_fn(n, r + 1, |combo| {
        let mut s = 0.0;
        for k in 0..=r {
            for l in k + 1..=r {
                let sign = if (k + l) % 2 == 0 { 1.0 } else { -1.0 };
                let rest: Vec<usize> = combo
                    .iter()
                    .enumerate()
                    .filter(|&(p, _)| p != k && p != l)
                    .map(|(_, &x)| x)
                    .collect();
                let br = model.bracket_m_m(combo[k], combo[l]);
                s += sign * omega.value_vector_first(&br, &rest);
            }
        }
        s
    })
}

/// dTᵗ as a 4-form, via the torsion-aware exterior derivative.
pub fn d_torsion(model: &ReductiveModel, t: f64) -> Result<AltForm> {
    let onb = model.orthonormalized()?;
    let conn = lambda_t(&onb, t);
    let tform = family_torsion_form(&onb, t).to_alt_form()?;
    Ok(exterior_derivative(&onb, &conn, &tform))
}

/// Closed-form dTᵗ(X,Y,Z,V) = 2(2t-1)⟨Jac_m(X,Y,Z), V⟩.
pub fn d_torsion_closed_form(model: &ReductiveModel, t: f64) -> Result<AltForm> {
    let onb = model.orthonormalized()?;
    let n = onb.n();
    Ok(AltForm::from_fn(n, 4, |c| {
        let jac = jac_m_basis(&onb, c[0], c[1], c[2]);
        2.0 * (2.0 * t - 1.0) * jac[c[3]]
    }))
}

/// Reconstruct the m-bracket table from a torsion 3-form (orthonormal basis):
/// \[X,Y\]_m = -Σ_i T(X,Y,Z_i) Z_i. Entry (i,j,k) is the Z_k coefficient.
pub fn reconstruct_brackets(torsion_form: &Tensor3) -> Tensor3 {
    let n = torsion_form.n;
    Tensor3::from_fn(n, |i, j, k| -torsion_form.get(i, j, k))
}

/// Holonomy algebra by iterated bracketing of the curvature span with the
/// image of the Nomizu map.
#[derive(Debug, Clone)]
pub struct HolonomyAlgebra {
    pub basis: Vec<RMatrix>,
    pub dim: usize,
}

const HOLONOMY_RANK_THRESHOLD: f64 = 1e-8;

pub fn holonomy_algebra(model: &ReductiveModel, conn: &ConnectionMap) -> Result<HolonomyAlgebra> {
    let n = model.n();
    let mut generators: Vec<Vec<f64>> = Vec::new();
    let mut seeds: Vec<RMatrix> = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            let r = curvature_general(model, conn, &basis_vec(n, a), &basis_vec(n, b))?;
            seeds.push(r);
        }
    }
    for s in &seeds {
        generators.push(s.as_slice().to_vec());
    }
    let mut basis_flat = crate::linalg::orthonormal_span(&generators, HOLONOMY_RANK_THRESHOLD);
    // close under bracketing with Λ(m); the dimension is bounded by n(n-1)/2
    loop {
        let mut candidates = basis_flat.clone();
        let before = basis_flat.len();
        for b in &basis_flat {
            let bm = flat_to_matrix(b, n);
            for lam in &conn.maps {
                let c = lam.commutator(&bm);
                candidates.push(c.as_slice().to_vec());
            }
        }
        basis_flat = crate::linalg::orthonormal_span(&candidates, HOLONOMY_RANK_THRESHOLD);
        if basis_flat.len() == before {
            break;
        }
    }
    let basis: Vec<RMatrix> = basis_flat.iter().map(|b| flat_to_matrix(b, n)).collect();
    let dim = basis.len();
    Ok(HolonomyAlgebra { basis, dim })
}

fn flat_to_matrix(flat: &[f64], n: usize) -> RMatrix {
    RMatrix::from_fn(n, n, |i, j| flat[i * n + j])
}

/// Formal self-adjointness of the Dirac operator associated with a
/// connection: Σ_i ⟨Λ(Z_i)X, Z_i⟩ = Σ_i ⟨\[Z_i,X\]_m, Z_i⟩ for every X.
#[derive(Debug, Clone)]
pub struct SelfAdjointness {
    pub passed: bool,
    pub residual: f64,
    /// ‖Σ_i Λ(Z_i)Z_i‖, the equivalent criterion for naturally reductive
    /// metrics.
    pub lambda_trace_norm: f64,
}

pub fn self_adjointness_check(
    model: &ReductiveModel,
    conn: &ConnectionMap,
    tol: f64,
) -> SelfAdjointness {
    let n = model.n();
    let mut residual: f64 = 0.0;
    for x in 0..n {
        let mut lhs = 0.0;
        let mut rhs = 0.0;
        for i in 0..n {
            let zi = basis_vec(n, i);
            let col: Vec<f64> = (0..n).map(|k| conn.maps[i].get(k, x)).collect();
            lhs += model.ip_m(&col, &zi);
            rhs += model.ip_m(&model.bracket_m_m(i, x), &zi);
        }
        residual = residual.max((lhs - rhs).abs());
    }
    let mut sum = vec![0.0; n];
    for i in 0..n {
        for k in 0..n {
            sum[k] += conn.maps[i].get(k, i);
        }
    }
    let lambda_trace_norm = crate::linalg::norm(&sum);
    SelfAdjointness {
        passed: residual < tol,
        residual,
        lambda_trace_norm,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models;

    #[test]
    fn lambda_zero_is_the_zero_map() {
        let m = models::chavel_ziller(0.5).unwrap();
        let conn = lambda_t(&m, 0.0);
        for l in &conn.maps {
            assert_eq!(l.max_abs(), 0.0);
        }
    }

    #[test]
    fn nomizu_maps_are_metric_skew() {
        for m in [
            models::chavel_ziller(0.7).unwrap(),
            models::stiefel_jensen(0.3).unwrap(),
        ] {
            let conn = lambda_t(&m, 0.4);
            assert!(conn.skewness_residual(&m) < 1e-12);
            let lc = levi_civita_map(&m).unwrap();
            assert!(lc.skewness_residual(&m) < 1e-12);
        }
    }

    #[test]
    fn lambda_kills_its_own_direction() {
        // Λᵗ(Z_i)Z_i = 0, the skew-torsion criterion
        let m = models::chavel_ziller(0.25).unwrap();
        let conn = lambda_t(&m, 0.7);
        for (i, l) in conn.maps.iter().enumerate() {
            for k in 0..m.n() {
                assert!(l.get(k, i).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn symmetric_space_family_is_constant_in_t() {
        let m = models::round_sphere(4).unwrap();
        let c0 = lambda_t(&m, 0.0);
        let c1 = lambda_t(&m, 1.0);
        for (a, b) in c0.maps.iter().zip(&c1.maps) {
            assert!(a.sub(b).max_abs() < 1e-14);
        }
    }

    #[test]
    fn levi_civita_matches_family_at_one_half() {
        for m in [
            models::chavel_ziller(0.5).unwrap(),
            models::chavel_ziller(1.0).unwrap(),
            models::su2(1.0),
            models::round_sphere(3).unwrap(),
        ] {
            let lc = levi_civita_map(&m).unwrap();
            let half = lambda_t(&m, 0.5);
            for (a, b) in lc.maps.iter().zip(&half.maps) {
                assert!(a.sub(b).max_abs() < 1e-10);
            }
        }
    }

    #[test]
    fn jensen_levi_civita_entries() {
        // Λ(Z_5) = ((1-s)/√(2s))(E_13+E_24) and Λ(Z_1) = √(s/2) E_35
        for s in [0.25, 0.5, 2.0 / 3.0, 1.0] {
            let m = models::stiefel_jensen(s).unwrap();
            let lc = levi_civita_map(&m).unwrap();
            let c = (1.0 - s) / (2.0 * s).sqrt();
            let l5 = &lc.maps[4];
            // E_13: Z_1 -> Z_3 rotation block, plus E_24
            let mut expected5 = RMatrix::zeros(5, 5);
            expected5.set(2, 0, c);
            expected5.set(0, 2, -c);
            expected5.set(3, 1, c);
            expected5.set(1, 3, -c);
            assert!(l5.sub(&expected5).max_abs() < 1e-12, "s = {s}");
            let w = (s / 2.0f64).sqrt();
            let l1 = &lc.maps[0];
            let mut expected1 = RMatrix::zeros(5, 5);
            expected1.set(4, 2, w);
            expected1.set(2, 4, -w);
            assert!(l1.sub(&expected1).max_abs() < 1e-12, "s = {s}");
        }
    }

    #[test]
    fn family_torsion_is_skew_and_scales_with_2t_minus_1() {
        let m = models::chavel_ziller(0.25).unwrap();
        for t in [0.0, 1.0 / 3.0, 0.5, 0.8, 1.0] {
            let data = torsion(&m, &lambda_t(&m, t));
            assert!(data.antisymmetry_residual < 1e-12);
            let closed = family_torsion_form(&m, t);
            for i in 0..5 {
                for j in 0..5 {
                    for k in 0..5 {
                        assert!((data.form.get(i, j, k) - closed.get(i, j, k)).abs() < 1e-12);
                    }
                }
            }
        }
        // t = 1/2 is torsion-free
        let lc = torsion(&m, &lambda_t(&m, 0.5));
        assert!(lc.form.max_abs() < 1e-12);
    }

    #[test]
    fn jensen_canonical_torsion_fails_antisymmetry_off_half() {
        let m = models::stiefel_jensen(0.25).unwrap();
        let data = torsion(&m, &lambda_t(&m, 0.0));
        assert!(data.antisymmetry_residual > 1e-2);
        assert!(!data.is_three_form(1e-9));
        let good = models::stiefel_jensen(0.5).unwrap();
        let data = torsion(&good, &lambda_t(&good, 0.0));
        assert!(data.is_three_form(1e-9));
    }

    #[test]
    fn curvature_formula_matches_wang() {
        let m = models::chavel_ziller(2.0 / 3.0).unwrap();
        for t in [0.0, 1.0 / 3.0, 0.5, 1.0] {
            let conn = lambda_t(&m, t);
            for a in 0..m.n() {
                for b in 0..m.n() {
                    let x = basis_vec(m.n(), a);
                    let y = basis_vec(m.n(), b);
                    let r1 = curvature(&m, t, &x, &y).unwrap();
                    let r2 = curvature_general(&m, &conn, &x, &y).unwrap();
                    assert!(r1.sub(&r2).max_abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn curvature_metric_antisymmetry() {
        let m = models::chavel_ziller(1.0).unwrap();
        for t in [0.0, 0.4, 1.0] {
            for a in 0..5 {
                for b in 0..5 {
                    let r = curvature(&m, t, &basis_vec(5, a), &basis_vec(5, b)).unwrap();
                    assert!(r.skewness_residual(&m.metric_m) < 1e-10);
                }
            }
        }
    }

    #[test]
    fn flat_models() {
        // abelian algebra: R = 0
        let abelian = crate::lie::ReductiveModel {
            algebra: crate::lie::LieAlgebraData::new(3),
            h_idx: vec![],
            m_idx: vec![0, 1, 2],
            metric_m: RMatrix::identity(3),
            q: RMatrix::identity(3),
            name: "abelian".into(),
            params: Default::default(),
        };
        let r = curvature(&abelian, 0.7, &basis_vec(3, 0), &basis_vec(3, 1)).unwrap();
        assert_eq!(r.max_abs(), 0.0);
        // bi-invariant su(2) at t = 0: canonical connection is flat
        let su2 = models::su2(1.0);
        for a in 0..3 {
            for b in 0..3 {
                let r = curvature(&su2, 0.0, &basis_vec(3, a), &basis_vec(3, b)).unwrap();
                assert!(r.max_abs() < 1e-14);
            }
        }
    }

    #[test]
    fn curvature_q_identity() {
        // ⟨Rᵗ(X,Z)Z,Y⟩ = (t-t²)Q_m([X,Z],[Y,Z]) + Q_h([X,Z],[Y,Z])
        for m in [
            models::chavel_ziller(0.25).unwrap(),
            models::chavel_ziller(1.0).unwrap(),
        ] {
            for t in [0.0, 1.0 / 3.0, 0.5, 1.0] {
                let n = m.n();
                for x in 0..n {
                    for z in 0..n {
                        let r = curvature(&m, t, &basis_vec(n, x), &basis_vec(n, z)).unwrap();
                        for y in 0..n {
                            let lhs = {
                                let col: Vec<f64> = (0..n).map(|k| r.get(k, z)).collect();
                                m.ip_m(&col, &basis_vec(n, y))
                            };
                            let rhs = (t - t * t)
                                * m.ip_m(&m.bracket_m_m(x, z), &m.bracket_m_m(y, z))
                                + m.q_h_pair(&m.bracket_m_h(x, z), &m.bracket_m_h(y, z));
                            assert!((lhs - rhs).abs() < 1e-9);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn ricci_equal_at_zero_and_one() {
        for m in [
            models::chavel_ziller(0.25).unwrap(),
            models::chavel_ziller(0.5).unwrap(),
            models::su2(1.0),
        ] {
            let r0 = ricci(&m, 0.0).unwrap();
            let r1 = ricci(&m, 1.0).unwrap();
            assert!(r0.matrix.sub(&r1.matrix).max_abs() < 1e-12);
        }
    }

    #[test]
    fn ricci_matches_wang_ziller() {
        for m in [
            models::chavel_ziller(0.25).unwrap(),
            models::chavel_ziller(0.5).unwrap(),
            models::chavel_ziller(1.0).unwrap(),
            models::su2(1.0),
            models::round_sphere(4).unwrap(),
        ] {
            for t in [0.0, 1.0 / 3.0, 0.5, 1.0] {
                let lemma = ricci(&m, t).unwrap();
                let wz = ricci_wang_ziller(&m, t).unwrap();
                assert!(
                    lemma.matrix.sub(&wz.matrix).max_abs() < 1e-9,
                    "mismatch on {} at t = {t}",
                    m.name
                );
            }
        }
    }

    #[test]
    fn ricci_general_matches_family_ricci() {
        let m = models::chavel_ziller(0.5).unwrap();
        for t in [0.0, 0.3, 1.0] {
            let by_formula = ricci(&m, t).unwrap();
            let by_curvature = ricci_general(&m, &lambda_t(&m, t)).unwrap();
            assert!(by_formula.matrix.sub(&by_curvature.matrix).max_abs() < 1e-10);
        }
    }

    #[test]
    fn fixed_direction_ricci_vanishes_only_at_family_ends() {
        // A(Z_5, Z_5) = 0, so Ricᵗ(Z_5,Z_5) = (t-t²)β(Z_5,Z_5)
        let m = models::chavel_ziller(0.7).unwrap();
        let beta = m.killing_beta();
        for t in [0.0, 0.2, 0.5, 1.0] {
            let ric = ricci(&m, t).unwrap();
            let expected = (t - t * t) * beta.matrix.get(4, 4);
            assert!((ric.matrix.get(4, 4) - expected).abs() < 1e-10);
        }
        assert!(ricci(&m, 0.0).unwrap().matrix.get(4, 4).abs() < 1e-12);
        assert!(ricci(&m, 1.0).unwrap().matrix.get(4, 4).abs() < 1e-12);
        assert!(ricci(&m, 0.5).unwrap().matrix.get(4, 4).abs() > 1e-3);
    }

    #[test]
    fn nabla_torsion_closed_form_and_vanishing() {
        let m = models::chavel_ziller(0.25).unwrap();
        let n = m.n();
        for t in [0.0, 0.5] {
            assert!(nabla_torsion(&m, t).unwrap().max_abs() < 1e-12);
        }
        for t in [1.0 / 3.0, 0.8, 1.0] {
            let nt = nabla_torsion(&m, t).unwrap();
            for z in 0..n {
                for x in 0..n {
                    for y in 0..n {
                        let jac = jac_m_basis(&m, x, y, z);
                        for v in 0..n {
                            let expected = t * (2.0 * t - 1.0) * jac[v];
                            assert!(
                                (nt.get(z, x, y, v) - expected).abs() < 1e-10,
                                "t = {t} at ({z},{x},{y},{v})"
                            );
                        }
                    }
                }
            }
            // X ⌟ ∇ᵗ_X Tᵗ = 0
            for x in 0..n {
                for y in 0..n {
                    for v in 0..n {
                        assert!(nt.get(x, x, y, v).abs() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn jacobi_pairing_of_jac_m_and_jac_h() {
        // ⟨Jac_m + Jac_h, W⟩ = 0 for all W in m
        let m = models::chavel_ziller(0.7).unwrap();
        let n = m.n();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let jm = jac_m_basis(&m, a, b, c);
                    let jh = jac_h_basis(&m, a, b, c);
                    for w in 0..n {
                        let mut e = vec![0.0; n];
                        e[w] = 1.0;
                        let sum: Vec<f64> = (0..n).map(|k| jm[k] + jh[k]).collect();
                        assert!(m.ip_m(&sum, &e).abs() < 1e-10);
                    }
                }
            }
        }
    }

    #[test]
    fn jac_m_values() {
        // Jac_m(Z_2,Z_3,Z_4) = -2s Z_1 on the Chavel-Ziller model
        for s in [0.25, 0.5, 1.0] {
            let m = models::chavel_ziller(s).unwrap();
            let jac = jac_m_basis(&m, 1, 2, 3);
            let mut expected = vec![0.0; 5];
            expected[0] = -2.0 * s;
            for k in 0..5 {
                assert!((jac[k] - expected[k]).abs() < 1e-12, "s = {s}");
            }
        }
        // trivial isotropy: Jac_m is the full Jacobi cyclic sum, hence zero
        let su2 = models::su2(1.0);
        for a in 0..3 {
            for b in 0..3 {
                for c in 0..3 {
                    let jac = jac_m_basis(&su2, a, b, c);
                    assert!(crate::linalg::norm(&jac) < 1e-14);
                }
            }
        }
        // symmetric space: [m,m] ⊂ h kills every inner bracket
        let sph = models::round_sphere(4).unwrap();
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    assert!(crate::linalg::norm(&jac_m_basis(&sph, a, b, c)) < 1e-14);
                }
            }
        }
    }

    #[test]
    fn delta_torsion_vanishes_for_all_t() {
        for m in [
            models::chavel_ziller(0.25).unwrap(),
            models::chavel_ziller(1.0).unwrap(),
            models::su2(1.0),
        ] {
            for t in [0.0, 1.0 / 3.0, 0.5, 0.9, 1.0] {
                assert!(delta_torsion(&m, t).unwrap().max_abs() < 1e-10);
            }
        }
    }

    #[test]
    fn d_torsion_two_routes_agree() {
        for m in [
            models::chavel_ziller(0.25).unwrap(),
            models::chavel_ziller(1.0).unwrap(),
        ] {
            for t in [0.0, 1.0 / 3.0, 0.5, 1.0] {
                let via_ext = d_torsion(&m, t).unwrap();
                let closed = d_torsion_closed_form(&m, t).unwrap();
                assert!(via_ext.sub(&closed).max_abs() < 1e-9, "t = {t}");
            }
        }
        // trivial isotropy means closed torsion: dT = 0
        let su2 = models::su2(1.0);
        for t in [0.0, 0.25, 1.0] {
            assert!(d_torsion(&su2, t).unwrap().max_abs() < 1e-12);
        }
    }

    #[test]
    fn bracket_reconstruction_round_trip() {
        let m = models::chavel_ziller(0.5).unwrap();
        let t0 = family_torsion_form(&m, 0.0);
        let table = reconstruct_brackets(&t0);
        for i in 0..5 {
            for j in 0..5 {
                let br = m.bracket_m_m(i, j);
                for k in 0..5 {
                    assert!((table.get(i, j, k) - br[k]).abs() < 1e-12);
                }
            }
        }
        // zero torsion reconstructs an abelian bracket table
        let zero = reconstruct_brackets(&Tensor3::zeros(4));
        assert_eq!(zero.max_abs(), 0.0);
    }

    #[test]
    fn reconstruction_reads_off_single_entries() {
        // T = -√(2s)(Z1∧Z3 + Z2∧Z4)∧Z5 gives [Z_4,Z_5]_m = √(2s) Z_2
        let s: f64 = 0.7;
        let m = models::chavel_ziller(s).unwrap();
        let t0 = family_torsion_form(&m, 0.0);
        let table = reconstruct_brackets(&t0);
        assert!((table.get(3, 4, 1) - (2.0 * s).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn holonomy_dimensions() {
        // canonical connection: holonomy = image of the isotropy algebra
        let m = models::chavel_ziller(1.0).unwrap();
        let h0 = holonomy_algebra(&m, &lambda_t(&m, 0.0)).unwrap();
        assert_eq!(h0.dim, 2);
        // any other family member has full holonomy so(5)
        for t in [1.0 / 3.0, 0.5, 1.0] {
            let h = holonomy_algebra(&m, &lambda_t(&m, t)).unwrap();
            assert_eq!(h.dim, 10, "t = {t}");
        }
        // flat canonical connection on the bi-invariant model
        let su2 = models::su2(1.0);
        assert_eq!(holonomy_algebra(&su2, &lambda_t(&su2, 0.0)).unwrap().dim, 0);
    }

    #[test]
    fn self_adjointness() {
        let m = models::chavel_ziller(0.5).unwrap();
        let check = self_adjointness_check(&m, &lambda_t(&m, 0.7), 1e-9);
        assert!(check.passed);
        assert!(check.lambda_trace_norm < 1e-12);
        // torsion-free connections always pass, also off natural reductivity
        let jensen = models::stiefel_jensen(0.3).unwrap();
        let lc = levi_civita_map(&jensen).unwrap();
        let check = self_adjointness_check(&jensen, &lc, 1e-9);
        assert!(check.passed);
        // a map violating Λ(X)X = 0 fails
        let mut bad = lambda_t(&m, 0.0);
        let mut e12 = RMatrix::zeros(5, 5);
        e12.set(1, 0, 1.0);
        e12.set(0, 1, -1.0);
        bad.maps[0] = e12;
        bad.tag = ConnectionTag::Custom;
        let check = self_adjointness_check(&m, &bad, 1e-9);
        assert!(!check.passed);
        assert!(check.residual > 0.5);
    }
}
