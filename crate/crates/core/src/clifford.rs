//! The Clifford algebra Cl(m), spin lifts, and a concrete spinor
//! representation through gamma matrices.
//!
//! Conventions: generators satisfy Z_i·Z_j + Z_j·Z_i = -2δ_ij, so Z_i² = -1.
//! Blades are stored as bitmasks over the m-basis with the coefficient of the
//! increasing-order product; n ≤ 12 keeps the dense 2ⁿ picture small.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{GeomError, Result};
use crate::forms::AltForm;
use crate::linalg::{CMatrix, RMatrix};

/// A real element of Cl(m) as a blade → coefficient map.
#[derive(Debug, Clone, PartialEq)]
pub struct CliffordElement {
    n: usize,
    terms: BTreeMap<u32, f64>,
}

const COEFF_EPS: f64 = 0.0; // explicit zeros are dropped, nothing else

impl CliffordElement {
    pub fn zero(n: usize) -> Self {
        Self {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn scalar(n: usize, v: f64) -> Self {
        let mut e = Self::zero(n);
        e.add_term(0, v);
        e
    }

    pub fn generator(n: usize, i: usize) -> Self {
        assert!(i < n);
        let mut e = Self::zero(n);
        e.add_term(1 << i, 1.0);
        e
    }

    /// Blade from a duplicate-free index list, normalizing the order.
    pub fn blade(n: usize, indices: &[usize], coeff: f64) -> Result<Self> {
        let mut e = Self::zero(n);
        match crate::forms::sort_with_sign(indices) {
            None => Err(GeomError::InvalidModel(
                "blade with repeated index".to_string(),
            )),
            Some((sorted, sign)) => {
                if sorted.iter().any(|&i| i >= n) {
                    return Err(GeomError::DimensionMismatch {
                        expected: n,
                        got: *sorted.last().unwrap() + 1,
                    });
                }
                let mut mask = 0u32;
                for &i in &sorted {
                    mask |= 1 << i;
                }
                e.add_term(mask, sign * coeff);
                Ok(e)
            }
        }
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    fn add_term(&mut self, mask: u32, v: f64) {
        if v == 0.0 {
            return;
        }
        let entry = self.terms.entry(mask).or_insert(0.0);
        *entry += v;
        if entry.abs() <= COEFF_EPS {
            self.terms.remove(&mask);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (Vec<usize>, f64)> + '_ {
        self.terms.iter().map(|(&mask, &c)| (mask_to_indices(mask), c))
    }

    pub fn coeff(&self, indices: &[usize]) -> f64 {
        match crate::forms::sort_with_sign(indices) {
            None => 0.0,
            Some((sorted, sign)) => {
                let mut mask = 0u32;
                for &i in &sorted {
                    mask |= 1 << i;
                }
                sign * self.terms.get(&mask).copied().unwrap_or(0.0)
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let mut out = self.clone();
        for (&mask, &v) in &other.terms {
            out.add_term(mask, v);
        }
        out.prune();
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-1.0))
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut out = self.clone();
        if s == 0.0 {
            out.terms.clear();
            return out;
        }
        for v in out.terms.values_mut() {
            *v *= s;
        }
        out
    }

    fn prune(&mut self) {
        self.terms.retain(|_, v| *v != 0.0);
    }

    /// Clifford product with Z_i² = -1.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(GeomError::DimensionMismatch {
                expected: self.n,
                got: other.n,
            });
        }
        let mut out = Self::zero(self.n);
        for (&a, &va) in &self.terms {
            for (&b, &vb) in &other.terms {
                let swaps = merge_swaps(a, b);
                let squares = (a & b).count_ones();
                let sign = if (swaps + squares) % 2 == 0 { 1.0 } else { -1.0 };
                out.add_term(a ^ b, sign * va * vb);
            }
        }
        out.prune();
        Ok(out)
    }

    /// Projection onto blades of length k.
    pub fn grade(&self, k: usize) -> Self {
        let mut out = Self::zero(self.n);
        for (&mask, &v) in &self.terms {
            if mask.count_ones() as usize == k {
                out.add_term(mask, v);
            }
        }
        out
    }

    /// Grades carrying a nonzero coefficient.
    pub fn present_grades(&self) -> Vec<usize> {
        let mut gs: Vec<usize> = self
            .terms
            .keys()
            .map(|m| m.count_ones() as usize)
            .collect();
        gs.sort_unstable();
        gs.dedup();
        gs
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.values().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.sub(other).max_abs_coeff() < tol
    }

    /// Interior product v ⌟ a, reading `a` as the image of a form.
    pub fn interior(&self, v: &[f64]) -> Self {
        assert_eq!(v.len(), self.n);
        let mut out = Self::zero(self.n);
        for (&mask, &coeff) in &self.terms {
            let indices = mask_to_indices(mask);
            for (pos, &i) in indices.iter().enumerate() {
                if v[i] == 0.0 {
                    continue;
                }
                let sign = if pos % 2 == 0 { 1.0 } else { -1.0 };
                out.add_term(mask & !(1 << i), sign * v[i] * coeff);
            }
        }
        out.prune();
        out
    }

    /// The element as an alternating form (defined when homogeneous of
    /// one grade; mixed grades are rejected).
    pub fn to_alt_form(&self) -> Result<AltForm> {
        let grades = self.present_grades();
        let r = match grades.as_slice() {
            [] => 0,
            [r] => *r,
            _ => {
                return Err(GeomError::InvalidModel(
                    "mixed-grade element has no single form degree".to_string(),
                ))
            }
        };
        let mut form = AltForm::zero(self.n, r);
        for (indices, c) in self.terms() {
            form.add_at(&indices, c);
        }
        Ok(form)
    }
}

fn mask_to_indices(mask: u32) -> Vec<usize> {
    (0..32).filter(|i| mask & (1 << i) != 0).collect()
}

/// Transpositions needed to merge two increasing generator products.
fn merge_swaps(a: u32, b: u32) -> u32 {
    let mut total = 0;
    let mut bb = b;
    while bb != 0 {
        let j = bb.trailing_zeros();
        total += (a >> (j + 1)).count_ones();
        bb &= bb - 1;
    }
    total
}

/// Map a form to the Clifford algebra coefficient-wise.
pub fn form_to_clifford(form: &AltForm) -> CliffordElement {
    let mut e = CliffordElement::zero(form.n);
    for (combo, v) in form.coefficients() {
        if v == 0.0 {
            continue;
        }
        let mut mask = 0u32;
        for &i in &combo {
            mask |= 1 << i;
        }
        e.add_term(mask, v);
    }
    e
}

/// Map a dense antisymmetric tensor to the Clifford algebra, validating
/// antisymmetry first.
pub fn tensor3_to_clifford(t: &crate::forms::Tensor3) -> Result<CliffordElement> {
    Ok(form_to_clifford(&t.to_alt_form()?))
}

/// Spin lift of a skew endomorphism A of m (orthonormal basis):
/// (1/4) Σ_{i,j} ⟨A Z_i, Z_j⟩ Z_i·Z_j.
pub fn spin_lift(a: &RMatrix) -> Result<CliffordElement> {
    let n = a.rows;
    let skew = a.add(&a.transpose()).max_abs();
    if skew > 1e-9 {
        return Err(GeomError::NotAntisymmetric { residual: skew });
    }
    let mut e = CliffordElement::zero(n);
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            // ⟨A Z_i, Z_j⟩ = A_{ji}
            let c = 0.25 * a.get(j, i);
            if c == 0.0 {
                continue;
            }
            let blade = CliffordElement::blade(n, &[i, j], c)?;
            e = e.add(&blade);
        }
    }
    Ok(e)
}

/// A spinor in Δ_m.
#[derive(Debug, Clone, PartialEq)]
pub struct Spinor(pub Vec<Complex64>);

impl Spinor {
    pub fn zero(dim: usize) -> Self {
        Self(vec![Complex64::new(0.0, 0.0); dim])
    }

    pub fn basis(dim: usize, k: usize) -> Self {
        let mut v = Self::zero(dim);
        v.0[k] = Complex64::new(1.0, 0.0);
        v
    }

    pub fn norm(&self) -> f64 {
        crate::linalg::complex_norm(&self.0)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self(self.0.iter().map(|a| a * s).collect())
    }

    pub fn dot(&self, other: &Self) -> Complex64 {
        crate::linalg::complex_dot(&self.0, &other.0)
    }
}

/// Gamma-matrix realization of Cl(m) on Δ_m = C^(2^⌊n/2⌋).
#[derive(Debug, Clone)]
pub struct SpinorRep {
    pub n: usize,
    pub dim_spinor: usize,
    pub gammas: Vec<CMatrix>,
}

impl SpinorRep {
    /// Deterministic recursive construction, valid for 1 ≤ n ≤ 12.
    pub fn generated(n: usize) -> Result<Self> {
        if n == 0 || n > 12 {
            return Err(GeomError::UnsupportedSpinorDimension { n });
        }
        let i = Complex64::new(0.0, 1.0);
        let zero = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        // Pauli matrices
        let sigma1 = CMatrix::from_fn(2, 2, |r, c| if r != c { one } else { zero });
        let sigma2 = CMatrix::from_fn(2, 2, |r, c| match (r, c) {
            (0, 1) => -i,
            (1, 0) => i,
            _ => zero,
        });
        let sigma3 = CMatrix::from_fn(2, 2, |r, c| match (r, c) {
            (0, 0) => one,
            (1, 1) => -one,
            _ => zero,
        });

        // even-dimensional tower: Γ'_k = Γ_k ⊗ σ₃, plus I ⊗ iσ₁, I ⊗ iσ₂
        let mut gammas: Vec<CMatrix> = vec![sigma1.scale(i), sigma2.scale(i)];
        let even_target = if n % 2 == 0 { n } else { n - 1 };
        while gammas.len() < even_target.max(2) {
            let d = gammas[0].rows;
            let mut next: Vec<CMatrix> = gammas.iter().map(|g| g.kron(&sigma3)).collect();
            let id = CMatrix::identity(d);
            next.push(id.kron(&sigma1.scale(i)));
            next.push(id.kron(&sigma2.scale(i)));
            gammas = next;
        }
        if n == 1 {
            // Cl(1): one generator squaring to -1 on Δ = C
            let mut g = CMatrix::zeros(1, 1);
            g.set(0, 0, i);
            return Ok(Self {
                n: 1,
                dim_spinor: 1,
                gammas: vec![g],
            });
        }
        gammas.truncate(even_target);
        if n % 2 == 1 {
            // odd generator: scalar multiple of the even volume element
            let m = even_target / 2;
            let mut vol = CMatrix::identity(gammas[0].rows);
            for g in &gammas {
                vol = vol.matmul(g);
            }
            let c = if m % 2 == 0 { i } else { one };
            gammas.push(vol.scale(c));
        }
        Ok(Self {
            n,
            dim_spinor: gammas[0].rows,
            gammas,
        })
    }

    /// Construct from explicit matrices, checking shapes only; use
    /// [`SpinorRep::invariant_residual`] for the algebraic relations.
    pub fn from_matrices(n: usize, gammas: Vec<CMatrix>) -> Result<Self> {
        if gammas.len() != n || n == 0 {
            return Err(GeomError::UnsupportedSpinorDimension { n });
        }
        let d = gammas[0].rows;
        for g in &gammas {
            if g.rows != d || g.cols != d {
                return Err(GeomError::DimensionMismatch {
                    expected: d,
                    got: g.rows,
                });
            }
        }
        Ok(Self {
            n,
            dim_spinor: d,
            gammas,
        })
    }

    /// Max residual over the defining relations: the anticommutators
    /// Γ_iΓ_j + Γ_jΓ_i + 2δ_ij, skew-Hermiticity and unitarity.
    pub fn invariant_residual(&self) -> f64 {
        let d = self.dim_spinor;
        let id = CMatrix::identity(d);
        let mut worst: f64 = 0.0;
        for a in 0..self.n {
            for b in 0..self.n {
                let anti = self.gammas[a]
                    .matmul(&self.gammas[b])
                    .add(&self.gammas[b].matmul(&self.gammas[a]));
                let target = if a == b {
                    id.scale(Complex64::new(-2.0, 0.0))
                } else {
                    CMatrix::zeros(d, d)
                };
                worst = worst.max(anti.add(&target.scale(Complex64::new(-1.0, 0.0))).max_abs());
            }
            let skew = self.gammas[a]
                .adjoint()
                .add(&self.gammas[a])
                .max_abs();
            worst = worst.max(skew);
            let unit = self.gammas[a]
                .adjoint()
                .matmul(&self.gammas[a])
                .add(&id.scale(Complex64::new(-1.0, 0.0)))
                .max_abs();
            worst = worst.max(unit);
        }
        worst
    }

    /// Matrix of a Clifford element in this representation.
    pub fn matrix_of(&self, a: &CliffordElement) -> Result<CMatrix> {
        if a.dimension() != self.n {
            return Err(GeomError::DimensionMismatch {
                expected: self.n,
                got: a.dimension(),
            });
        }
        let d = self.dim_spinor;
        let mut out = CMatrix::zeros(d, d);
        for (indices, coeff) in a.terms() {
            let mut m = CMatrix::identity(d);
            for &i in &indices {
                m = m.matmul(&self.gammas[i]);
            }
            out = out.add(&m.scale(Complex64::new(coeff, 0.0)));
        }
        Ok(out)
    }

    /// Export the gamma matrices as nested \[re, im\] pairs.
    pub fn to_debug_arrays(&self) -> Vec<Vec<Vec<[f64; 2]>>> {
        self.gammas
            .iter()
            .map(|g| {
                (0..g.rows)
                    .map(|r| {
                        (0..g.cols)
                            .map(|c| {
                                let z = g.get(r, c);
                                [z.re, z.im]
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect()
    }
}

/// Clifford action of an element on a spinor.
pub fn act(rep: &SpinorRep, a: &CliffordElement, psi: &Spinor) -> Result<Spinor> {
    if a.dimension() != rep.n {
        return Err(GeomError::DimensionMismatch {
            expected: rep.n,
            got: a.dimension(),
        });
    }
    if psi.0.len() != rep.dim_spinor {
        return Err(GeomError::DimensionMismatch {
            expected: rep.dim_spinor,
            got: psi.0.len(),
        });
    }
    let mut out = Spinor::zero(rep.dim_spinor);
    for (indices, coeff) in a.terms() {
        // blade acts as Γ_{i1}(Γ_{i2}(...(Γ_{ir} ψ)))
        let mut v = psi.0.clone();
        for &i in indices.iter().rev() {
            v = rep.gammas[i].matvec(&v);
        }
        for (o, x) in out.0.iter_mut().zip(v) {
            *o += x * coeff;
        }
    }
    Ok(out)
}

/// Serialization shadow: a Clifford element as a list of blade terms.
#[derive(Serialize, Deserialize)]
struct CliffordTerm {
    blade: Vec<usize>,
    coeff: f64,
}

#[derive(Serialize, Deserialize)]
struct CliffordWire {
    n: usize,
    terms: Vec<CliffordTerm>,
}

impl Serialize for CliffordElement {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        CliffordWire {
            n: self.n,
            terms: self
                .terms()
                .map(|(blade, coeff)| CliffordTerm { blade, coeff })
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for CliffordElement {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let wire = CliffordWire::deserialize(deserializer)?;
        if wire.n > 12 {
            return Err(serde::de::Error::custom("dimension above 12 unsupported"));
        }
        let mut e = CliffordElement::zero(wire.n);
        for t in wire.terms {
            if t.blade.iter().any(|&i| i >= wire.n) {
                return Err(serde::de::Error::custom("blade index out of range"));
            }
            if !t.coeff.is_finite() {
                return Err(serde::de::Error::custom("non-finite coefficient"));
            }
            match crate::forms::sort_with_sign(&t.blade) {
                None => return Err(serde::de::Error::custom("repeated blade index")),
                Some((sorted, sign)) => {
                    let mut mask = 0u32;
                    for &i in &sorted {
                        mask |= 1 << i;
                    }
                    e.add_term(mask, sign * t.coeff);
                }
            }
        }
        e.prune();
        Ok(e)
    }
}
