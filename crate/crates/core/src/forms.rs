//! Alternating forms on m and dense antisymmetric tensors.
//!
//! An [`AltForm`] stores one coefficient per strictly increasing index tuple;
//! evaluation on arbitrary index tuples resolves the permutation sign. The
//! dense [`Tensor3`] mirrors the (0,3) torsion tensor with explicit entries.

use crate::error::{GeomError, Result};

/// Lexicographic rank of a strictly increasing r-tuple among C(n, r).
fn combo_rank(n: usize, combo: &[usize]) -> usize {
    let mut rank = 0;
    let mut prev: isize = -1;
    for (pos, &c) in combo.iter().enumerate() {
        for skipped in (prev + 1) as usize..c {
            rank += binomial(n - skipped - 1, combo.len() - pos - 1);
        }
        prev = c as isize;
    }
    rank
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: usize = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// All strictly increasing r-tuples out of 0..n, lexicographic.
pub fn combinations(n: usize, r: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::with_capacity(binomial(n, r));
    if r > n {
        return out;
    }
    let mut combo: Vec<usize> = (0..r).collect();
    loop {
        out.push(combo.clone());
        // advance
        let mut i = r;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if combo[i] + 1 <= n - (r - i) {
                combo[i] += 1;
                for j in i + 1..r {
                    combo[j] = combo[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Sort indices, returning (sorted, sign) or None when an index repeats.
pub fn sort_with_sign(indices: &[usize]) -> Option<(Vec<usize>, f64)> {
    let mut v = indices.to_vec();
    let mut sign = 1.0;
    // insertion sort, counting transpositions
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    for w in v.windows(2) {
        if w[0] == w[1] {
            return None;
        }
    }
    Some((v, sign))
}

/// An alternating r-form on an n-dimensional space.
#[derive(Debug, Clone, PartialEq)]
pub struct AltForm {
    pub n: usize,
    pub r: usize,
    coeffs: Vec<f64>,
}

impl AltForm {
    pub fn zero(n: usize, r: usize) -> Self {
        Self {
            n,
            r,
            coeffs: vec![0.0; binomial(n, r)],
        }
    }

    /// Basis r-form Z_{i1} ∧ ... ∧ Z_{ir} (indices strictly increasing).
    pub fn basis(n: usize, combo: &[usize]) -> Self {
        let mut f = Self::zero(n, combo.len());
        f.set_sorted(combo, 1.0);
        f
    }

    pub fn from_fn(n: usize, r: usize, f: impl Fn(&[usize]) -> f64) -> Self {
        let mut form = Self::zero(n, r);
        for combo in combinations(n, r) {
            form.set_sorted(&combo, f(&combo));
        }
        form
    }

    pub fn set_sorted(&mut self, combo: &[usize], v: f64) {
        debug_assert!(combo.windows(2).all(|w| w[0] < w[1]));
        let idx = combo_rank(self.n, combo);
        self.coeffs[idx] = v;
    }

    pub fn add_at(&mut self, indices: &[usize], v: f64) {
        if let Some((sorted, sign)) = sort_with_sign(indices) {
            let idx = combo_rank(self.n, &sorted);
            self.coeffs[idx] += sign * v;
        }
    }

    /// Value on an arbitrary index tuple (0 on repeats, signed otherwise).
    pub fn value(&self, indices: &[usize]) -> f64 {
        debug_assert_eq!(indices.len(), self.r);
        match sort_with_sign(indices) {
            None => 0.0,
            Some((sorted, sign)) => sign * self.coeffs[combo_rank(self.n, &sorted)],
        }
    }

    /// Value with the first slot filled by a vector and the rest by basis
    /// indices: Σ_p v_p ω(Z_p, Z_{i1}, ..).
    pub fn value_vector_first(&self, v: &[f64], rest: &[usize]) -> f64 {
        let mut idx = vec![0; self.r];
        idx[1..].copy_from_slice(rest);
        let mut s = 0.0;
        for (p, &vp) in v.iter().enumerate() {
            if vp == 0.0 {
                continue;
            }
            idx[0] = p;
            s += vp * self.value(&idx);
        }
        s
    }

    pub fn coefficients(&self) -> impl Iterator<Item = (Vec<usize>, f64)> + '_ {
        combinations(self.n, self.r)
            .into_iter()
            .zip(self.coeffs.iter().copied())
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, &v| m.max(v.abs()))
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.n, self.r), (other.n, other.r));
        let mut out = self.clone();
        for (a, b) in out.coeffs.iter_mut().zip(&other.coeffs) {
            *a += b;
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-1.0))
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut out = self.clone();
        for a in out.coeffs.iter_mut() {
            *a *= s;
        }
        out
    }

    /// Wedge product.
    pub fn wedge(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let mut out = Self::zero(self.n, self.r + other.r);
        if self.r + other.r > self.n {
            return out;
        }
        for (ca, va) in self.coefficients() {
            if va == 0.0 {
                continue;
            }
            for (cb, vb) in other.coefficients() {
                if vb == 0.0 {
                    continue;
                }
                let mut joined = ca.clone();
                joined.extend_from_slice(&cb);
                out.add_at(&joined, va * vb);
            }
        }
        out
    }

    /// Interior product v ⌟ ω.
    pub fn interior(&self, v: &[f64]) -> Self {
        assert!(self.r >= 1);
        let mut out = Self::zero(self.n, self.r - 1);
        for (combo, coeff) in self.coefficients() {
            if coeff == 0.0 {
                continue;
            }
            for (pos, &i) in combo.iter().enumerate() {
                if v[i] == 0.0 {
                    continue;
                }
                let sign = if pos % 2 == 0 { 1.0 } else { -1.0 };
                let rest: Vec<usize> = combo
                    .iter()
                    .enumerate()
                    .filter(|&(p, _)| p != pos)
                    .map(|(_, &x)| x)
                    .collect();
                out.add_at(&rest, sign * v[i] * coeff);
            }
        }
        out
    }
}

/// Dense 3-index tensor over m; the torsion (0,3) tensor lives here.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor3 {
    pub n: usize,
    data: Vec<f64>,
}

impl Tensor3 {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * n * n],
        }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.data[(i * self.n + j) * self.n + k]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, k: usize, v: f64) {
        self.data[(i * self.n + j) * self.n + k] = v;
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize, usize) -> f64) -> Self {
        let mut t = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    t.set(i, j, k, f(i, j, k));
                }
            }
        }
        t
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, &v| m.max(v.abs()))
    }

    /// Max deviation from total antisymmetry over all index permutations.
    pub fn antisymmetry_residual(&self) -> f64 {
        let n = self.n;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let v = self.get(i, j, k);
                    worst = worst.max((v + self.get(j, i, k)).abs());
                    worst = worst.max((v + self.get(i, k, j)).abs());
                    worst = worst.max((v - self.get(j, k, i)).abs());
                }
            }
        }
        worst
    }

    pub fn to_alt_form(&self) -> Result<AltForm> {
        let resid = self.antisymmetry_residual();
        if resid > 1e-9 {
            return Err(GeomError::NotAntisymmetric { residual: resid });
        }
        Ok(AltForm::from_fn(self.n, 3, |c| self.get(c[0], c[1], c[2])))
    }
}
