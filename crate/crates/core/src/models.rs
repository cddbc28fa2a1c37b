//! Built-in model constructors and the contact toolkit for the
//! five-dimensional Stiefel manifold V₄,₂ = SO(4)/SO(2).
//!
//! Matrix conventions: E_ij denotes the rotation generator with +1 at
//! (j,i) and -1 at (i,j), so that \[E_13, E_23\] = E_12.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::clifford::{spin_lift, Spinor, SpinorRep};
use crate::connection::{invariant_exterior_derivative, levi_civita_map, ConnectionMap, ConnectionTag};
use crate::error::{GeomError, Result};
use crate::forms::{AltForm, Tensor3};
use crate::lie::{LieAlgebraData, ReductiveModel};
use crate::linalg::{CMatrix, RMatrix};

/// Rotation generator E_ij of so(N): +1 at (j,i), -1 at (i,j). Zero-based.
fn rot(n: usize, i: usize, j: usize) -> RMatrix {
    let mut m = RMatrix::zeros(n, n);
    m.set(j, i, 1.0);
    m.set(i, j, -1.0);
    m
}

fn half_trace_product(a: &RMatrix, b: &RMatrix) -> f64 {
    // ½ tr(AᵀB); rotation generators are orthonormal for this pairing
    0.5 * a.transpose().matmul(b).trace()
}

/// The Stiefel manifold SO(4)/SO(2) with the one-parameter metric family
/// ⟨(a,X),(b,Y)⟩ = ½β(X,Y) + 2s·ab. Orthonormal basis
/// Z_1..Z_4 = E_13, E_14, E_23, E_24 and Z_5 = E_12/√(2s); isotropy E_34.
/// Naturally reductive with respect to SO(4) only at s = 1/2.
pub fn stiefel_jensen(s: f64) -> Result<ReductiveModel> {
    if !(s > 0.0) || !s.is_finite() {
        return Err(GeomError::BadParameter(format!("s must be positive, got {s}")));
    }
    let r = (2.0 * s).sqrt();
    let basis = vec![
        rot(4, 0, 2),                 // Z_1 = E_13
        rot(4, 0, 3),                 // Z_2 = E_14
        rot(4, 1, 2),                 // Z_3 = E_23
        rot(4, 1, 3),                 // Z_4 = E_24
        rot(4, 0, 1).scale(1.0 / r),  // Z_5 = E_12/√(2s)
        rot(4, 2, 3),                 // isotropy generator E_34
    ];
    let algebra = LieAlgebraData::from_matrix_basis(&basis)?;
    let mut params = BTreeMap::new();
    params.insert("s".to_string(), s);
    Ok(ReductiveModel {
        algebra,
        h_idx: vec![5],
        m_idx: vec![0, 1, 2, 3, 4],
        metric_m: RMatrix::identity(5),
        // the identity is the invariant extension exactly at s = 1/2; the
        // ad-invariance check reports the failure for every other s
        q: RMatrix::identity(6),
        name: "jensen".to_string(),
        params,
    })
}

/// The same metric family presented as a naturally reductive space for the
/// enlarged group SO(4) × SO(2), following the deformation construction:
/// ḡ = so(4) ⊕ R with isotropy h̄ = {(H, X, X)} and complement
/// m̄ = {(U, 2sY, (2s-1)Y)}. Naturally reductive for every s > 0.
///
/// At s = 1/2 the complement collapses into so(4) and the invariant
/// extension exists only there, so the constructor returns the equivalent
/// six-dimensional presentation (which is naturally reductive for SO(4)).
pub fn chavel_ziller(s: f64) -> Result<ReductiveModel> {
    if !(s > 0.0) || !s.is_finite() {
        return Err(GeomError::BadParameter(format!("s must be positive, got {s}")));
    }
    if (s - 0.5).abs() < 1e-12 {
        let mut m = stiefel_jensen(0.5)?;
        m.name = "chavel-ziller".to_string();
        return Ok(m);
    }
    let r = (2.0 * s).sqrt();
    // elements of so(4) ⊕ R as pairs (4x4 block, external coordinate)
    let pairs: Vec<(RMatrix, f64)> = vec![
        (rot(4, 0, 2), 0.0),                                  // Z_1
        (rot(4, 0, 3), 0.0),                                  // Z_2
        (rot(4, 1, 2), 0.0),                                  // Z_3
        (rot(4, 1, 3), 0.0),                                  // Z_4
        (rot(4, 0, 1).scale(r), (2.0 * s - 1.0) / r),         // Z_5
        (rot(4, 2, 3), 0.0),                                  // h̄_1
        (rot(4, 0, 1), 1.0),                                  // h̄_2
    ];
    // block-diagonal 5x5 realization for the structure constants; the
    // external summand is abelian and central
    let matrices: Vec<RMatrix> = pairs
        .iter()
        .map(|(a, y)| {
            let mut m = RMatrix::zeros(5, 5);
            for i in 0..4 {
                for j in 0..4 {
                    m.set(i, j, a.get(i, j));
                }
            }
            m.set(4, 4, *y);
            m
        })
        .collect();
    let algebra = LieAlgebraData::from_matrix_basis(&matrices)?;
    // invariant extension: ½tr(AᵀB) on so(4) plus c₀·ab on the external
    // summand, with c₀ = 2s/(1-2s) forcing Q(h̄, m̄) = 0 and Q|_m̄ = id
    let c0 = 2.0 * s / (1.0 - 2.0 * s);
    let dim = pairs.len();
    let q = RMatrix::from_fn(dim, dim, |i, j| {
        half_trace_product(&pairs[i].0, &pairs[j].0) + c0 * pairs[i].1 * pairs[j].1
    });
    let mut params = BTreeMap::new();
    params.insert("s".to_string(), s);
    Ok(ReductiveModel {
        algebra,
        h_idx: vec![5, 6],
        m_idx: vec![0, 1, 2, 3, 4],
        metric_m: RMatrix::identity(5),
        q,
        name: "chavel-ziller".to_string(),
        params,
    })
}

/// A compact Lie group with bi-invariant metric, presented with trivial
/// isotropy: h = 0, Q = metric = scale · id.
pub fn bi_invariant_group(algebra: LieAlgebraData, scale: f64) -> Result<ReductiveModel> {
    if !(scale > 0.0) || !scale.is_finite() {
        return Err(GeomError::BadParameter(format!(
            "scale must be positive, got {scale}"
        )));
    }
    let dim = algebra.dim();
    let model = ReductiveModel {
        algebra,
        h_idx: vec![],
        m_idx: (0..dim).collect(),
        metric_m: RMatrix::identity(dim).scale(scale),
        q: RMatrix::identity(dim).scale(scale),
        name: "bi-invariant".to_string(),
        params: {
            let mut p = BTreeMap::new();
            p.insert("scale".to_string(), scale);
            p
        },
    };
    let report = model.validate();
    if !report.all_passed() {
        return Err(GeomError::InvalidModel(format!(
            "structure constants rejected (max residual {:e})",
            report.max_residual()
        )));
    }
    Ok(model)
}

/// su(2) with the ε-bracket and bi-invariant metric scale·id.
pub fn su2(scale: f64) -> ReductiveModel {
    let mut c = LieAlgebraData::new(3);
    c.set_pair(0, 1, 2, 1.0);
    c.set_pair(1, 2, 0, 1.0);
    c.set_pair(2, 0, 1, 1.0);
    let mut m = bi_invariant_group(c, scale).expect("su(2) data is valid");
    m.name = "su2".to_string();
    m
}

/// The round sphere Sⁿ = SO(n+1)/SO(n), a symmetric pair. The basis of m is
/// E_{1,k}; the inner product makes it the unit sphere.
pub fn round_sphere(n: usize) -> Result<ReductiveModel> {
    if !(2..=8).contains(&n) {
        return Err(GeomError::BadParameter(format!(
            "sphere dimension {n} outside 2..=8"
        )));
    }
    let big = n + 1;
    let mut basis = Vec::new();
    for k in 1..big {
        basis.push(rot(big, 0, k));
    }
    for j in 1..big {
        for k in j + 1..big {
            basis.push(rot(big, j, k));
        }
    }
    let dim = basis.len();
    let algebra = LieAlgebraData::from_matrix_basis(&basis)?;
    let mut params = BTreeMap::new();
    params.insert("n".to_string(), n as f64);
    Ok(ReductiveModel {
        algebra,
        h_idx: (n..dim).collect(),
        m_idx: (0..n).collect(),
        metric_m: RMatrix::identity(n),
        q: RMatrix::identity(dim),
        name: "round-sphere".to_string(),
        params,
    })
}

/// Tag for the three metric almost contact structures on V₄,₂.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ContactTag {
    Sasaki,
    QuasiSasaki,
    Star,
}

/// A metric almost contact structure (φ, ξ, η) on m.
#[derive(Debug, Clone)]
pub struct ContactStructure {
    pub phi: RMatrix,
    pub xi: Vec<f64>,
    pub eta: Vec<f64>,
    pub tag: ContactTag,
}

impl ContactStructure {
    /// Max residual over the compatibility conditions
    /// φ² = -Id + η⊗ξ, ⟨φX,φY⟩ = ⟨X,Y⟩ - η(X)η(Y), φ(ξ) = 0,
    /// and commutation with the isotropy action.
    pub fn invariant_residual(&self, model: &ReductiveModel) -> f64 {
        let n = model.n();
        let mut worst: f64 = 0.0;
        let phi2 = self.phi.matmul(&self.phi);
        for i in 0..n {
            for j in 0..n {
                let target = -((i == j) as u8 as f64) + self.eta[j] * self.xi[i];
                worst = worst.max((phi2.get(i, j) - target).abs());
            }
        }
        // metric compatibility
        let g = &model.metric_m;
        let gphi = self.phi.transpose().matmul(g).matmul(&self.phi);
        for i in 0..n {
            for j in 0..n {
                let target = g.get(i, j) - self.eta[i] * self.eta[j];
                worst = worst.max((gphi.get(i, j) - target).abs());
            }
        }
        worst = worst.max(crate::linalg::norm(&self.phi.matvec(&self.xi)));
        for a in 0..model.dim_h() {
            worst = worst.max(self.phi.commutator(&model.isotropy_action(a)).max_abs());
        }
        worst
    }

    /// Fundamental 2-form F(X,Y) = ⟨X, φY⟩.
    pub fn fundamental_form(&self, model: &ReductiveModel) -> AltForm {
        let n = model.n();
        AltForm::from_fn(n, 2, |c| {
            let col: Vec<f64> = (0..n).map(|k| self.phi.get(k, c[1])).collect();
            let mut e = vec![0.0; n];
            e[c[0]] = 1.0;
            model.ip_m(&e, &col)
        })
    }
}

fn require_v42(model: &ReductiveModel) -> Result<()> {
    if model.n() != 5 || !(model.name == "jensen" || model.name == "chavel-ziller") {
        return Err(GeomError::WrongModel(format!(
            "expected a V4,2 variant with the standard Z-basis, got '{}' with n = {}",
            model.name,
            model.n()
        )));
    }
    Ok(())
}

/// The three invariant metric almost contact structures on V₄,₂, sharing
/// ξ = Z_5. Their fundamental forms are Z1∧Z3 + Z2∧Z4, Z1∧Z2 + Z3∧Z4 and
/// Z1∧Z2 - Z3∧Z4.
pub fn contact_structures(model: &ReductiveModel) -> Result<Vec<ContactStructure>> {
    require_v42(model)?;
    let xi = vec![0.0, 0.0, 0.0, 0.0, 1.0];
    let eta = xi.clone();
    let block = |entries: &[(usize, usize)]| {
        let mut m = RMatrix::zeros(5, 5);
        for &(i, j) in entries {
            m.set(i, j, 1.0);
            m.set(j, i, -1.0);
        }
        m
    };
    // φ columns: φ(Z_b) = Σ_a φ[a][b] Z_a
    let phi_s = block(&[(0, 2), (1, 3)]);
    let phi_qs = block(&[(0, 1), (2, 3)]);
    let phi_star = {
        let mut m = RMatrix::zeros(5, 5);
        m.set(0, 1, 1.0);
        m.set(1, 0, -1.0);
        m.set(2, 3, -1.0);
        m.set(3, 2, 1.0);
        m
    };
    Ok(vec![
        ContactStructure {
            phi: phi_s,
            xi: xi.clone(),
            eta: eta.clone(),
            tag: ContactTag::Sasaki,
        },
        ContactStructure {
            phi: phi_qs,
            xi: xi.clone(),
            eta: eta.clone(),
            tag: ContactTag::QuasiSasaki,
        },
        ContactStructure {
            phi: phi_star,
            xi,
            eta,
            tag: ContactTag::Star,
        },
    ])
}

/// Nijenhuis tensor of a structure on a V₄,₂ variant:
/// N(X,Y) = \[φX,φY\]_m + φ²(\[X,Y\]_m) - φ(\[φX,Y\]_m) - φ(\[X,φY\]_m) + dη(X,Y)ξ,
/// with the m-projected algebraic bracket and the invariant exterior
/// derivative (the convention reproducing dZ_5 = -√(2s)(Z1∧Z3 + Z2∧Z4)).
/// Entry (i,j,k) is the Z_k coefficient of N(Z_i, Z_j).
pub fn nijenhuis(model: &ReductiveModel, structure: &ContactStructure) -> Result<Tensor3> {
    let n = model.n();
    let eta_form = AltForm::from_fn(n, 1, |c| structure.eta[c[0]]);
    let d_eta = invariant_exterior_derivative(model, &eta_form);
    let mut out = Tensor3::zeros(n);
    for i in 0..n {
        for j in 0..n {
            let mut x = vec![0.0; n];
            x[i] = 1.0;
            let mut y = vec![0.0; n];
            y[j] = 1.0;
            let phix: Vec<f64> = (0..n).map(|k| structure.phi.get(k, i)).collect();
            let phiy: Vec<f64> = (0..n).map(|k| structure.phi.get(k, j)).collect();
            let t1 = model.bracket_m_vectors(&phix, &phiy)?;
            let t2 = structure
                .phi
                .matvec(&structure.phi.matvec(&model.bracket_m_vectors(&x, &y)?));
            let t3 = structure.phi.matvec(&model.bracket_m_vectors(&phix, &y)?);
            let t4 = structure.phi.matvec(&model.bracket_m_vectors(&x, &phiy)?);
            let deta = d_eta.value(&[i, j]);
            for k in 0..n {
                out.set(
                    i,
                    j,
                    k,
                    t1[k] + t2[k] - t3[k] - t4[k] + deta * structure.xi[k],
                );
            }
        }
    }
    Ok(out)
}

/// The unique almost contact connection on V₄,₂ with torsion T = η ∧ dη:
/// the Levi-Civita map plus half a torsion correction. Returns the map and
/// the torsion 3-form.
pub fn contact_connection(model: &ReductiveModel) -> Result<(ConnectionMap, Tensor3)> {
    require_v42(model)?;
    let n = model.n();
    let eta_form = AltForm::from_fn(n, 1, |c| {
        // η = ⟨Z_5, ·⟩
        let mut e = vec![0.0; n];
        e[c[0]] = 1.0;
        let mut z5 = vec![0.0; n];
        z5[4] = 1.0;
        model.ip_m(&z5, &e)
    });
    let d_eta = invariant_exterior_derivative(model, &eta_form);
    let t_form = eta_form.wedge(&d_eta);
    let t3 = Tensor3::from_fn(n, |i, j, k| t_form.value(&[i, j, k]));
    let lc = levi_civita_map(model)?;
    let g_inv = model.metric_m.inverse()?;
    let maps = (0..n)
        .map(|a| {
            // ⟨Λ_corr(Z_a)Z_b, Z_c⟩ = ½ T(a, b, c)
            let lowered = RMatrix::from_fn(n, n, |c, b| 0.5 * t3.get(a, b, c));
            lc.maps[a].add(&g_inv.matmul(&lowered))
        })
        .collect();
    Ok((
        ConnectionMap {
            maps,
            tag: ConnectionTag::Contact,
        },
        t3,
    ))
}

/// Riemannian Killing spinor test: fit μ from the Z_5 direction of
/// ∇^LC ψ = μ Z·ψ, then verify the equation in every direction.
#[derive(Debug, Clone)]
pub struct KillingSpinorCheck {
    pub is_killing: bool,
    pub mu: Option<f64>,
    pub residual: f64,
}

pub fn killing_spinor_check(
    model: &ReductiveModel,
    rep: &SpinorRep,
    psi: &Spinor,
    tol: f64,
) -> Result<KillingSpinorCheck> {
    require_v42(model)?;
    let n = model.n();
    let lc = levi_civita_map(model)?;
    let z5_psi = crate::clifford::act(rep, &crate::clifford::CliffordElement::generator(n, 4), psi)?;
    let denom = z5_psi.dot(&z5_psi);
    if denom.norm() < 1e-14 {
        return Ok(KillingSpinorCheck {
            is_killing: false,
            mu: None,
            residual: f64::INFINITY,
        });
    }
    let nabla5 = crate::clifford::act(rep, &spin_lift(&lc.maps[4])?, psi)?;
    let mu_c = z5_psi.dot(&nabla5) / denom;
    let mu = mu_c.re;
    let mut residual = mu_c.im.abs();
    for i in 0..n {
        let nabla = crate::clifford::act(rep, &spin_lift(&lc.maps[i])?, psi)?;
        let zi_psi =
            crate::clifford::act(rep, &crate::clifford::CliffordElement::generator(n, i), psi)?;
        residual = residual.max(nabla.sub(&zi_psi.scale(Complex64::new(mu, 0.0))).norm());
    }
    Ok(KillingSpinorCheck {
        is_killing: residual < tol,
        mu: Some(mu),
        residual,
    })
}

/// The explicit dimension-5 spin representation used for the V₄,₂ spinor
/// computations (γ_5 diagonal).
pub fn spin_fixture_dim5() -> SpinorRep {
    let i = Complex64::new(0.0, 1.0);
    let o = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let rows = |r: [[Complex64; 4]; 4]| {
        CMatrix::from_fn(4, 4, |a, b| r[a][b])
    };
    let e1 = rows([[o, o, o, i], [o, o, i, o], [o, i, o, o], [i, o, o, o]]);
    let e2 = rows([
        [o, o, o, -one],
        [o, o, one, o],
        [o, -one, o, o],
        [one, o, o, o],
    ]);
    let e3 = rows([[o, o, -i, o], [o, o, o, i], [-i, o, o, o], [o, i, o, o]]);
    let e4 = rows([
        [o, o, one, o],
        [o, o, o, one],
        [-one, o, o, o],
        [o, -one, o, o],
    ]);
    let e5 = rows([[i, o, o, o], [o, i, o, o], [o, o, -i, o], [o, o, o, -i]]);
    SpinorRep::from_matrices(5, vec![e1, e2, e3, e4, e5]).expect("fixture shapes are valid")
}

/// The distinguished spinor pair ψ± = ψ_3 ± i ψ_4 in the dimension-5
/// fixture basis (zero-based components 2 and 3).
pub fn fixture_spinor_pair() -> (Spinor, Spinor) {
    let i = Complex64::new(0.0, 1.0);
    let mut plus = Spinor::zero(4);
    plus.0[2] = Complex64::new(1.0, 0.0);
    plus.0[3] = i;
    let mut minus = Spinor::zero(4);
    minus.0[2] = Complex64::new(1.0, 0.0);
    minus.0[3] = -i;
    (plus, minus)
}
