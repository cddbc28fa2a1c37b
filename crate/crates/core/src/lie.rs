//! Structure-constant Lie algebra arithmetic and reductive decompositions.
//!
//! A homogeneous space enters the library as a [`ReductiveModel`]: a Lie
//! algebra given by structure constants, a splitting of the basis into an
//! isotropy part h and a complement m, an inner product on m and an invariant
//! extension Q of that inner product to the whole algebra. All downstream
//! computations (connections, Clifford elements, Dirac data) are contractions
//! of this finite data set.

use std::collections::BTreeMap;

use crate::error::{GeomError, Result};
use crate::linalg::{axpy, RMatrix};
use crate::tol::DEFAULT_TOL;

/// A Lie algebra presented by structure constants: c\[i\]\[j\]\[k\] is the
/// coefficient of basis vector k in \[e_i, e_j\].
#[derive(Debug, Clone, PartialEq)]
pub struct LieAlgebraData {
    dim: usize,
    c: Vec<f64>,
}

impl LieAlgebraData {
    pub fn new(dim: usize) -> Self {
        Self {
            dim,
            c: vec![0.0; dim * dim * dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn c(&self, i: usize, j: usize, k: usize) -> f64 {
        self.c[(i * self.dim + j) * self.dim + k]
    }

    /// Set c\[i\]\[j\]\[k\] and its antisymmetric partner c\[j\]\[i\]\[k\] = -c\[i\]\[j\]\[k\].
    pub fn set_pair(&mut self, i: usize, j: usize, k: usize, v: f64) {
        self.c[(i * self.dim + j) * self.dim + k] = v;
        self.c[(j * self.dim + i) * self.dim + k] = -v;
    }

    pub fn set_raw(&mut self, i: usize, j: usize, k: usize, v: f64) {
        self.c[(i * self.dim + j) * self.dim + k] = v;
    }

    /// \[X, Y\] = Σ c\[i\]\[j\]\[k\] X_i Y_j e_k.
    pub fn bracket(&self, x: &[f64], y: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.dim {
            return Err(GeomError::DimensionMismatch {
                expected: self.dim,
                got: x.len(),
            });
        }
        if y.len() != self.dim {
            return Err(GeomError::DimensionMismatch {
                expected: self.dim,
                got: y.len(),
            });
        }
        let mut out = vec![0.0; self.dim];
        for i in 0..self.dim {
            let xi = x[i];
            if xi == 0.0 {
                continue;
            }
            for j in 0..self.dim {
                let f = xi * y[j];
                if f == 0.0 {
                    continue;
                }
                for k in 0..self.dim {
                    out[k] += f * self.c(i, j, k);
                }
            }
        }
        Ok(out)
    }

    /// Bracket of two basis vectors, as coefficients.
    pub fn bracket_basis(&self, i: usize, j: usize) -> Vec<f64> {
        (0..self.dim).map(|k| self.c(i, j, k)).collect()
    }

    /// ad(x) as a dim × dim matrix, ad(x) y = \[x, y\].
    pub fn ad(&self, x: &[f64]) -> RMatrix {
        let mut m = RMatrix::zeros(self.dim, self.dim);
        for i in 0..self.dim {
            if x[i] == 0.0 {
                continue;
            }
            for j in 0..self.dim {
                for k in 0..self.dim {
                    m.add_at(k, j, x[i] * self.c(i, j, k));
                }
            }
        }
        m
    }

    pub fn antisymmetry_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.dim {
            for j in 0..self.dim {
                for k in 0..self.dim {
                    worst = worst.max((self.c(i, j, k) + self.c(j, i, k)).abs());
                }
            }
        }
        worst
    }

    pub fn jacobi_residual(&self) -> f64 {
        let d = self.dim;
        let mut worst: f64 = 0.0;
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    for l in 0..d {
                        let mut sum = 0.0;
                        for m in 0..d {
                            sum += self.c(i, j, m) * self.c(m, k, l)
                                + self.c(j, k, m) * self.c(m, i, l)
                                + self.c(k, i, m) * self.c(m, j, l);
                        }
                        worst = worst.max(sum.abs());
                    }
                }
            }
        }
        worst
    }

    /// Structure constants read off from a matrix realization: basis\[k\] are
    /// square matrices, commutators are expanded back in that basis by least
    /// squares. Fails if the span is not closed under commutators.
    pub fn from_matrix_basis(basis: &[RMatrix]) -> Result<Self> {
        let dim = basis.len();
        if dim == 0 {
            return Ok(Self::new(0));
        }
        let sz = basis[0].rows * basis[0].cols;
        // Gram matrix of the flattened basis
        let mut gram = RMatrix::zeros(dim, dim);
        for a in 0..dim {
            for b in 0..dim {
                let mut s = 0.0;
                for (x, y) in basis[a].as_slice().iter().zip(basis[b].as_slice()) {
                    s += x * y;
                }
                gram.set(a, b, s);
            }
        }
        let mut data = Self::new(dim);
        for i in 0..dim {
            for j in 0..dim {
                let comm = basis[i].commutator(&basis[j]);
                let mut rhs = RMatrix::zeros(dim, 1);
                for a in 0..dim {
                    let mut s = 0.0;
                    for (x, y) in basis[a].as_slice().iter().zip(comm.as_slice()) {
                        s += x * y;
                    }
                    rhs.set(a, 0, s);
                }
                let coeffs = gram.solve(&rhs)?;
                // check the expansion reproduces the commutator
                let mut recon = vec![0.0; sz];
                for a in 0..dim {
                    axpy(&mut recon, coeffs.get(a, 0), basis[a].as_slice());
                }
                let err = recon
                    .iter()
                    .zip(comm.as_slice())
                    .fold(0.0f64, |m, (x, y)| m.max((x - y).abs()));
                if err > 1e-9 {
                    return Err(GeomError::InvalidModel(format!(
                        "matrix basis not closed under commutators (residual {err:e})"
                    )));
                }
                for k in 0..dim {
                    data.set_raw(i, j, k, coeffs.get(k, 0));
                }
            }
        }
        Ok(data)
    }
}

/// Which part of the reductive split g = h ⊕ m.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Part {
    H,
    M,
}

/// Role tag for symmetric bilinear forms on m.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FormRole {
    KillingBeta,
    CasimirA,
    Ricci,
    Generic,
}

/// A symmetric bilinear form on m, indexed by the m-basis.
#[derive(Debug, Clone)]
pub struct BilinearFormOnM {
    pub matrix: RMatrix,
    pub role: FormRole,
}

impl BilinearFormOnM {
    pub fn symmetry_residual(&self) -> f64 {
        self.matrix.symmetry_residual()
    }
}

/// Outcome of one named validity check.
#[derive(Debug, Clone)]
pub struct ValidationCheck {
    pub name: &'static str,
    pub residual: f64,
    pub passed: bool,
}

/// Full validity report for a model; failures are entries, never panics.
#[derive(Debug, Clone)]
pub struct ValidationReport {
    pub tol: f64,
    pub checks: Vec<ValidationCheck>,
}

impl ValidationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn max_residual(&self) -> f64 {
        self.checks.iter().fold(0.0, |m, c| m.max(c.residual))
    }

    pub fn check(&self, name: &str) -> Option<&ValidationCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// A reductive homogeneous space in structure-constant form.
#[derive(Debug, Clone)]
pub struct ReductiveModel {
    pub algebra: LieAlgebraData,
    pub h_idx: Vec<usize>,
    pub m_idx: Vec<usize>,
    /// Inner product on m, indexed by m_idx order.
    pub metric_m: RMatrix,
    /// Invariant extension of the inner product to all of g, in the g-basis.
    pub q: RMatrix,
    pub name: String,
    pub params: BTreeMap<String, f64>,
}

impl ReductiveModel {
    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    /// Dimension of m (the tangent space).
    pub fn n(&self) -> usize {
        self.m_idx.len()
    }

    pub fn dim_h(&self) -> usize {
        self.h_idx.len()
    }

    pub fn bracket(&self, x: &[f64], y: &[f64]) -> Result<Vec<f64>> {
        self.algebra.bracket(x, y)
    }

    /// Projection onto the h- or m-part of the basis splitting.
    pub fn project(&self, x: &[f64], part: Part) -> Vec<f64> {
        let idx = match part {
            Part::H => &self.h_idx,
            Part::M => &self.m_idx,
        };
        let mut out = vec![0.0; self.dim()];
        for &i in idx {
            out[i] = x[i];
        }
        out
    }

    /// m-part of a g-vector, in m-coordinates.
    pub fn to_m_coords(&self, x: &[f64]) -> Vec<f64> {
        self.m_idx.iter().map(|&i| x[i]).collect()
    }

    /// h-part of a g-vector, in h-coordinates.
    pub fn to_h_coords(&self, x: &[f64]) -> Vec<f64> {
        self.h_idx.iter().map(|&i| x[i]).collect()
    }

    /// Embed m-coordinates into a g-vector.
    pub fn m_to_g(&self, v: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.dim()];
        for (a, &i) in self.m_idx.iter().enumerate() {
            out[i] = v[a];
        }
        out
    }

    pub fn h_to_g(&self, v: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.dim()];
        for (a, &i) in self.h_idx.iter().enumerate() {
            out[i] = v[a];
        }
        out
    }

    /// m-part of \[Z_a, Z_b\] for m-basis indices a, b, in m-coordinates.
    pub fn bracket_m_m(&self, a: usize, b: usize) -> Vec<f64> {
        let (i, j) = (self.m_idx[a], self.m_idx[b]);
        self.m_idx
            .iter()
            .map(|&k| self.algebra.c(i, j, k))
            .collect()
    }

    /// h-part of \[Z_a, Z_b\] for m-basis indices a, b, in h-coordinates.
    pub fn bracket_m_h(&self, a: usize, b: usize) -> Vec<f64> {
        let (i, j) = (self.m_idx[a], self.m_idx[b]);
        self.h_idx
            .iter()
            .map(|&k| self.algebra.c(i, j, k))
            .collect()
    }

    /// m-part of \[x, y\] for m-coordinate vectors x, y.
    pub fn bracket_m_vectors(&self, x: &[f64], y: &[f64]) -> Result<Vec<f64>> {
        let g = self.bracket(&self.m_to_g(x), &self.m_to_g(y))?;
        Ok(self.to_m_coords(&g))
    }

    /// Inner product of two m-coordinate vectors.
    pub fn ip_m(&self, x: &[f64], y: &[f64]) -> f64 {
        let mut s = 0.0;
        for a in 0..self.n() {
            for b in 0..self.n() {
                s += x[a] * self.metric_m.get(a, b) * y[b];
            }
        }
        s
    }

    /// Q restricted to h, as a dim_h × dim_h matrix.
    pub fn q_h(&self) -> RMatrix {
        RMatrix::from_fn(self.dim_h(), self.dim_h(), |a, b| {
            self.q.get(self.h_idx[a], self.h_idx[b])
        })
    }

    /// Q_h pairing of two h-coordinate vectors.
    pub fn q_h_pair(&self, u: &[f64], v: &[f64]) -> f64 {
        let qh = self.q_h();
        let mut s = 0.0;
        for a in 0..self.dim_h() {
            for b in 0..self.dim_h() {
                s += u[a] * qh.get(a, b) * v[b];
            }
        }
        s
    }

    /// ad(Y)|_m for an h-basis index, as an n × n matrix in m-coordinates.
    /// Well defined by reductivity \[h, m\] ⊆ m.
    pub fn isotropy_action(&self, h_pos: usize) -> RMatrix {
        let i = self.h_idx[h_pos];
        let n = self.n();
        RMatrix::from_fn(n, n, |k, a| {
            // column a: [e_i, Z_a] expressed in m-coordinates
            self.algebra.c(i, self.m_idx[a], self.m_idx[k])
        })
    }

    pub fn is_orthonormal(&self) -> bool {
        self.metric_m
            .sub(&RMatrix::identity(self.n()))
            .max_abs()
            < 1e-12
    }

    /// Evaluate every model invariant; failures become report entries.
    pub fn validate(&self) -> ValidationReport {
        self.validate_with_tol(DEFAULT_TOL)
    }

    pub fn validate_with_tol(&self, tol: f64) -> ValidationReport {
        let mut checks = Vec::new();
        let dim = self.dim();
        let n = self.n();

        // basis partition
        let mut seen = vec![0usize; dim];
        for &i in self.h_idx.iter().chain(self.m_idx.iter()) {
            if i < dim {
                seen[i] += 1;
            }
        }
        let partition_ok = self.h_idx.len() + self.m_idx.len() == dim
            && seen.iter().all(|&c| c == 1);
        checks.push(ValidationCheck {
            name: "partition",
            residual: if partition_ok { 0.0 } else { 1.0 },
            passed: partition_ok,
        });
        if !partition_ok {
            return ValidationReport { tol, checks };
        }

        let push = |checks: &mut Vec<ValidationCheck>, name: &'static str, residual: f64| {
            checks.push(ValidationCheck {
                name,
                residual,
                passed: residual < tol,
            });
        };

        push(&mut checks, "antisymmetry", self.algebra.antisymmetry_residual());
        push(&mut checks, "jacobi", self.algebra.jacobi_residual());

        // reductivity: [h, m] ⊆ m
        let mut red: f64 = 0.0;
        for &i in &self.h_idx {
            for &j in &self.m_idx {
                for &k in &self.h_idx {
                    red = red.max(self.algebra.c(i, j, k).abs());
                }
            }
        }
        push(&mut checks, "reductivity", red);

        // metric symmetric positive definite
        let sym = self.metric_m.symmetry_residual();
        let pd_ok = self.metric_m.cholesky().is_some();
        checks.push(ValidationCheck {
            name: "metric-positive-definite",
            residual: if pd_ok { sym } else { f64::INFINITY },
            passed: pd_ok && sym < tol,
        });

        // Q restricted to m equals metric_m
        let mut qm: f64 = 0.0;
        for a in 0..n {
            for b in 0..n {
                qm = qm.max(
                    (self.q.get(self.m_idx[a], self.m_idx[b]) - self.metric_m.get(a, b)).abs(),
                );
            }
        }
        push(&mut checks, "q-restriction", qm);

        // Q(h, m) = 0
        let mut qhm: f64 = 0.0;
        for &i in &self.h_idx {
            for &j in &self.m_idx {
                qhm = qhm.max(self.q.get(i, j).abs());
            }
        }
        push(&mut checks, "q-orthogonality", qhm);

        // Q non-degenerate on h
        let qh = self.q_h();
        let full = self.dim_h() == 0 || qh.rank(1e-10) == self.dim_h();
        checks.push(ValidationCheck {
            name: "q-nondegenerate-h",
            residual: if full { 0.0 } else { 1.0 },
            passed: full,
        });

        // ad-invariance: Q([X,Y],Z) + Q(Y,[X,Z]) = 0 over basis triples
        let mut inv: f64 = 0.0;
        for i in 0..dim {
            for j in 0..dim {
                let bij = self.algebra.bracket_basis(i, j);
                for k in 0..dim {
                    let bik = self.algebra.bracket_basis(i, k);
                    let mut s = 0.0;
                    for l in 0..dim {
                        s += bij[l] * self.q.get(l, k) + self.q.get(j, l) * bik[l];
                    }
                    inv = inv.max(s.abs());
                }
            }
        }
        push(&mut checks, "q-ad-invariance", inv);

        // natural reductivity: ⟨[X,Y]_m, Z⟩ + ⟨Y, [X,Z]_m⟩ = 0 on m triples
        push(&mut checks, "natural-reductivity", self.natural_reductivity_residual());

        // transitivity: m + [m, m] spans g
        let mut span: Vec<Vec<f64>> = Vec::new();
        for a in 0..n {
            let mut e = vec![0.0; dim];
            e[self.m_idx[a]] = 1.0;
            span.push(e);
        }
        for a in 0..n {
            for b in a + 1..n {
                span.push(self.algebra.bracket_basis(self.m_idx[a], self.m_idx[b]));
            }
        }
        let rank = crate::linalg::orthonormal_span(&span, 1e-8).len();
        checks.push(ValidationCheck {
            name: "transitivity",
            residual: (dim - rank) as f64,
            passed: rank == dim,
        });

        ValidationReport { tol, checks }
    }

    pub fn natural_reductivity_residual(&self) -> f64 {
        let n = self.n();
        let mut worst: f64 = 0.0;
        for a in 0..n {
            for b in 0..n {
                let ab = self.bracket_m_m(a, b);
                for c in 0..n {
                    let ac = self.bracket_m_m(a, c);
                    let mut zc = vec![0.0; n];
                    zc[c] = 1.0;
                    let mut zb = vec![0.0; n];
                    zb[b] = 1.0;
                    worst = worst.max((self.ip_m(&ab, &zc) + self.ip_m(&zb, &ac)).abs());
                }
            }
        }
        worst
    }

    /// Minus-trace Killing form β(X,Y) = -tr_g(ad X ∘ ad Y), restricted to m.
    pub fn killing_beta(&self) -> BilinearFormOnM {
        let n = self.n();
        let dim = self.dim();
        let mut mat = RMatrix::zeros(n, n);
        for a in 0..n {
            for b in 0..n {
                let (i, j) = (self.m_idx[a], self.m_idx[b]);
                let mut tr = 0.0;
                for p in 0..dim {
                    for q in 0..dim {
                        tr += self.algebra.c(j, p, q) * self.algebra.c(i, q, p);
                    }
                }
                mat.set(a, b, -tr);
            }
        }
        BilinearFormOnM {
            matrix: mat,
            role: FormRole::KillingBeta,
        }
    }

    /// Casimir form A(X,Y) = ⟨C_h X, Y⟩ with C_h built from Q_h-dual bases
    /// of h. Requires Q non-degenerate on h.
    pub fn casimir_a(&self) -> Result<BilinearFormOnM> {
        let n = self.n();
        let kh = self.dim_h();
        if kh == 0 {
            return Ok(BilinearFormOnM {
                matrix: RMatrix::zeros(n, n),
                role: FormRole::CasimirA,
            });
        }
        let qh_inv = self
            .q_h()
            .inverse()
            .map_err(|_| GeomError::DegenerateIsotropyForm)?;
        // C_h X = -Σ_{a,b} (Q_h^{-1})_{ab} [e_a, [e_b, X]] for X in m
        let mut chm = RMatrix::zeros(n, n);
        for a in 0..kh {
            for b in 0..kh {
                let w = qh_inv.get(a, b);
                if w == 0.0 {
                    continue;
                }
                let prod = self.isotropy_action(a).matmul(&self.isotropy_action(b));
                for p in 0..n {
                    for q in 0..n {
                        chm.add_at(p, q, -w * prod.get(p, q));
                    }
                }
            }
        }
        // A(X, Y) = ⟨C_h X, Y⟩
        let mut mat = RMatrix::zeros(n, n);
        for p in 0..n {
            let col: Vec<f64> = (0..n).map(|k| chm.get(k, p)).collect();
            for q in 0..n {
                let mut e = vec![0.0; n];
                e[q] = 1.0;
                mat.set(p, q, self.ip_m(&col, &e));
            }
        }
        Ok(BilinearFormOnM {
            matrix: mat,
            role: FormRole::CasimirA,
        })
    }

    /// Casimir form via the contraction A(X,Y) = Σ_i Q_h(\[X,Z_i\], \[Y,Z_i\]),
    /// the second route of the defining identity.
    pub fn casimir_a_contraction(&self) -> BilinearFormOnM {
        let n = self.n();
        let mut mat = RMatrix::zeros(n, n);
        for a in 0..n {
            for b in 0..n {
                let mut s = 0.0;
                for i in 0..n {
                    s += self.q_h_pair(&self.bracket_m_h(a, i), &self.bracket_m_h(b, i));
                }
                mat.set(a, b, s);
            }
        }
        BilinearFormOnM {
            matrix: mat,
            role: FormRole::CasimirA,
        }
    }

    /// Equivalent model with an orthonormal m-basis. Structure constants, Q
    /// and the index bookkeeping are transformed consistently; h is untouched.
    pub fn orthonormalize_m(&self) -> Result<ReductiveModel> {
        let n = self.n();
        let dim = self.dim();
        let l = self
            .metric_m
            .cholesky()
            .ok_or(GeomError::NonPositiveDefiniteMetric)?;
        let l_inv = l.inverse()?;
        // change of basis on the full algebra: identity on h, L^{-1} on m
        // rows of `change` give the new basis vectors in old coordinates
        let mut change = RMatrix::identity(dim);
        for a in 0..n {
            for b in 0..n {
                change.set(self.m_idx[a], self.m_idx[b], l_inv.get(a, b));
            }
        }
        let change_inv = change.inverse()?;
        let mut algebra = LieAlgebraData::new(dim);
        for i in 0..dim {
            for j in 0..dim {
                // [f_i, f_j] = Σ change_ip change_jq c_pq^r (change^{-1})_r·
                let bi: Vec<f64> = (0..dim).map(|p| change.get(i, p)).collect();
                let bj: Vec<f64> = (0..dim).map(|p| change.get(j, p)).collect();
                let br = self.algebra.bracket(&bi, &bj)?;
                for k in 0..dim {
                    let mut s = 0.0;
                    for r in 0..dim {
                        s += br[r] * change_inv.get(r, k);
                    }
                    algebra.set_raw(i, j, k, s);
                }
            }
        }
        let q = change.matmul(&self.q).matmul(&change.transpose());
        Ok(ReductiveModel {
            algebra,
            h_idx: self.h_idx.clone(),
            m_idx: self.m_idx.clone(),
            metric_m: RMatrix::identity(n),
            q,
            name: self.name.clone(),
            params: self.params.clone(),
        })
    }

    /// The model with an orthonormal m-basis, cloning only when needed.
    pub fn orthonormalized(&self) -> Result<ReductiveModel> {
        if self.is_orthonormal() {
            Ok(self.clone())
        } else {
            self.orthonormalize_m()
        }
    }

    /// Require natural reductivity up to `tol`.
    pub fn require_naturally_reductive(&self, tol: f64) -> Result<()> {
        let r = self.natural_reductivity_residual();
        if r > tol {
            Err(GeomError::NotNaturallyReductive { residual: r })
        } else {
            Ok(())
        }
    }

    /// Fixed vectors of the isotropy action on m (joint kernel of ad(h)|_m).
    pub fn isotropy_fixed_vectors(&self) -> Vec<Vec<f64>> {
        let n = self.n();
        if self.dim_h() == 0 {
            return (0..n)
                .map(|i| {
                    let mut e = vec![0.0; n];
                    e[i] = 1.0;
                    e
                })
                .collect();
        }
        let kh = self.dim_h();
        let mut stacked = RMatrix::zeros(kh * n, n);
        for a in 0..kh {
            let act = self.isotropy_action(a);
            for r in 0..n {
                for c in 0..n {
                    stacked.set(a * n + r, c, act.get(r, c));
                }
            }
        }
        // real kernel via the complex routine
        let cm = crate::linalg::CMatrix::from_fn(kh * n, n, |i, j| {
            num_complex::Complex64::new(stacked.get(i, j), 0.0)
        });
        cm.null_space(1e-10)
            .into_iter()
            .map(|v| v.into_iter().map(|z| z.re).collect())
            .collect()
    }
}
