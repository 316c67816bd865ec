//! Finite nilpotent Lie rings given by structure constants.
//!
//! A ring of order `p^n` is stored on a basis `b_0, …, b_{n-1}` in which every
//! basis element has *relative* order `p`: the additive group is described by
//! the power table `p·b_i = Σ_{k>i} c_k b_k`, so every element has a unique
//! normal form `Σ x_i b_i` with `0 ≤ x_i < p`. An element of additive order
//! `p^2` therefore occupies two basis slots (`a` and `p·a`). Products
//! `b_i·b_j` are supported on indices beyond both `i` and `j`, which makes
//! every ring here nilpotent by construction.
//!
//! Elements are plain coefficient vectors (`Vec<u32>`) in normal form.

mod ideal;
mod json;
mod series;
mod standardize;

pub use ideal::Ideal;
pub use json::RingJson;
pub use series::*;
pub use standardize::{standardize, StandardForm};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gfplin::{check_prime, inv_mod};

/// How a basis element arises from earlier ones.
///
/// A non-generator `b_k` with definition `Product { left, right }` satisfies
/// `b_left·b_right = b_k + Σ_{m<k} c_m b_m` exactly (nothing beyond `k`),
/// and similarly for `Power(i)` with `p·b_i`. Homomorphisms are then
/// determined by the images of the generators.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Definition {
    Generator,
    Product { left: usize, right: usize },
    Power(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LieRing {
    p: u32,
    n: usize,
    weights: Vec<u32>,
    /// `table[(i*n + j)*n + k]` is the `b_k` coefficient of `b_i·b_j`.
    table: Vec<u32>,
    /// `pmul[i*n + k]` is the `b_k` coefficient of `p·b_i`.
    pmul: Vec<u32>,
    defs: Option<Vec<Definition>>,
}

impl LieRing {
    /// Assembles a ring from dense tables without any validation beyond shape.
    pub(crate) fn from_parts(
        p: u32,
        weights: Vec<u32>,
        table: Vec<u32>,
        pmul: Vec<u32>,
        defs: Option<Vec<Definition>>,
    ) -> LieRing {
        let n = weights.len();
        debug_assert_eq!(table.len(), n * n * n);
        debug_assert_eq!(pmul.len(), n * n);
        LieRing { p, n, weights, table, pmul, defs }
    }

    /// The abelian ring `(Z/p)^d` with `d` generators of weight 1.
    pub fn elementary_abelian(p: u32, d: usize) -> Result<LieRing> {
        check_prime(p)?;
        Ok(LieRing::from_parts(p, vec![1; d], vec![0; d * d * d], vec![0; d * d], Some(vec![Definition::Generator; d])))
    }

    /// Overwrites `b_i·b_j` (`i < j`) with `−(b_j·b_i)`. Negation carries
    /// through the power table, so this must run once `p·` is final.
    pub(crate) fn complete_antisymmetric(&mut self) {
        let n = self.n;
        for j in 0..n {
            for i in 0..j {
                let src = (j * n + i) * n;
                let v = self.neg(&self.table[src..src + n]);
                self.table[(i * n + j) * n..(i * n + j + 1) * n].copy_from_slice(&v);
            }
        }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    /// `n` with `|L| = p^n`.
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn definitions(&self) -> Option<&[Definition]> {
        self.defs.as_deref()
    }

    pub(crate) fn set_definitions(&mut self, defs: Option<Vec<Definition>>) {
        self.defs = defs;
    }

    /// Number of generators recorded in the definitions, if any.
    pub fn num_generators(&self) -> Option<usize> {
        self.defs.as_ref().map(|d| d.iter().filter(|x| **x == Definition::Generator).count())
    }

    /// `b_i·b_j` in normal form.
    pub fn basis_product(&self, i: usize, j: usize) -> &[u32] {
        let s = (i * self.n + j) * self.n;
        &self.table[s..s + self.n]
    }

    /// `p·b_i` in normal form.
    pub fn basis_pmult(&self, i: usize) -> &[u32] {
        &self.pmul[i * self.n..(i + 1) * self.n]
    }

    pub fn zero(&self) -> Vec<u32> {
        vec![0; self.n]
    }

    pub fn basis(&self, i: usize) -> Vec<u32> {
        let mut v = self.zero();
        v[i] = 1;
        v
    }

    pub fn is_zero_ring(&self) -> bool {
        self.n == 0
    }

    /// Rewrites an integer combination `Σ v_i b_i` into normal form.
    pub fn normalize(&self, v: &mut [i64]) -> Vec<u32> {
        let p = self.p as i64;
        let n = self.n;
        for k in 0..n {
            let c = v[k];
            let r = c.rem_euclid(p);
            let q = (c - r) / p;
            v[k] = r;
            if q != 0 {
                let row = &self.pmul[k * n..(k + 1) * n];
                for m in k + 1..n {
                    if row[m] != 0 {
                        v[m] += q * row[m] as i64;
                    }
                }
            }
        }
        v.iter().map(|&x| x as u32).collect()
    }

    /// `Σ s_t · x_t` for integer scalars.
    pub fn combine(&self, terms: &[(i64, &[u32])]) -> Vec<u32> {
        let mut acc = vec![0i64; self.n];
        for (s, x) in terms {
            if *s == 0 {
                continue;
            }
            for (a, &c) in acc.iter_mut().zip(x.iter()) {
                *a += s * c as i64;
            }
        }
        self.normalize(&mut acc)
    }

    pub fn add(&self, x: &[u32], y: &[u32]) -> Vec<u32> {
        self.combine(&[(1, x), (1, y)])
    }

    pub fn sub(&self, x: &[u32], y: &[u32]) -> Vec<u32> {
        self.combine(&[(1, x), (-1, y)])
    }

    pub fn neg(&self, x: &[u32]) -> Vec<u32> {
        self.combine(&[(-1, x)])
    }

    pub fn scale(&self, x: &[u32], s: i64) -> Vec<u32> {
        self.combine(&[(s, x)])
    }

    pub fn p_multiple(&self, x: &[u32]) -> Vec<u32> {
        self.scale(x, self.p as i64)
    }

    /// Accumulates `s · x·y` into `acc` without normalizing.
    pub(crate) fn mul_acc(&self, acc: &mut [i64], s: i64, x: &[u32], y: &[u32]) {
        let n = self.n;
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for (j, &yj) in y.iter().enumerate() {
                if yj == 0 || i == j {
                    continue;
                }
                let c = s * xi as i64 * yj as i64;
                let row = &self.table[(i * n + j) * n..(i * n + j + 1) * n];
                for k in 0..n {
                    if row[k] != 0 {
                        acc[k] += c * row[k] as i64;
                    }
                }
            }
        }
    }

    /// The Lie product; both arguments must be normal-form vectors of this ring.
    pub fn mul(&self, x: &[u32], y: &[u32]) -> Vec<u32> {
        let mut acc = vec![0i64; self.n];
        self.mul_acc(&mut acc, 1, x, y);
        self.normalize(&mut acc)
    }

    /// Checked variant of [`LieRing::mul`].
    pub fn product(&self, x: &[u32], y: &[u32]) -> Result<Vec<u32>> {
        if x.len() != self.n || y.len() != self.n {
            return Err(Error::RingMismatch);
        }
        if x.iter().chain(y).any(|&c| c >= self.p) {
            return Err(Error::RingMismatch);
        }
        Ok(self.mul(x, y))
    }

    /// Left-normed product `x·y_1·y_2·…`.
    pub fn left_normed(&self, x: &[u32], ys: &[&[u32]]) -> Vec<u32> {
        ys.iter().fold(x.to_vec(), |acc, y| self.mul(&acc, y))
    }

    /// Supports of the tables respect the basis order: `b_i·b_j` lives on
    /// indices beyond `max(i, j)` and `p·b_i` beyond `i`.
    fn check_shape(&self) -> Result<()> {
        let n = self.n;
        if self.weights.windows(2).any(|w| w[0] > w[1]) || self.weights.contains(&0) {
            return Err(Error::Inconsistent("weights must be positive and non-decreasing".into()));
        }
        for i in 0..n {
            if self.basis_pmult(i)[..=i].iter().any(|&c| c != 0) {
                return Err(Error::Inconsistent(format!("p·b{i} is not supported beyond b{i}")));
            }
            for j in 0..n {
                let m = i.max(j);
                if self.basis_product(i, j)[..=m].iter().any(|&c| c != 0) {
                    return Err(Error::Inconsistent(format!("b{i}·b{j} is not supported beyond b{m}")));
                }
            }
        }
        if let Some(defs) = &self.defs {
            if defs.len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: defs.len() });
            }
            for (k, d) in defs.iter().enumerate() {
                if !self.definition_holds(k, d) {
                    return Err(Error::Inconsistent(format!("definition of b{k} does not hold")));
                }
            }
        }
        Ok(())
    }

    pub(crate) fn definition_value(&self, d: &Definition) -> Option<Vec<u32>> {
        match *d {
            Definition::Generator => None,
            Definition::Product { left, right } => Some(self.basis_product(left, right).to_vec()),
            Definition::Power(i) => Some(self.basis_pmult(i).to_vec()),
        }
    }

    fn definition_holds(&self, k: usize, d: &Definition) -> bool {
        match self.definition_value(d) {
            None => true,
            Some(v) => {
                let refs_ok = match *d {
                    Definition::Product { left, right } => left < k && right < k,
                    Definition::Power(i) => i < k,
                    Definition::Generator => true,
                };
                refs_ok && v[k] == 1 && v[k + 1..].iter().all(|&c| c == 0)
            }
        }
    }

    /// First violated consistency condition, if any: Jacobi on basis
    /// triples, compatibility of `p·` with the product, antisymmetry.
    pub fn consistency_defect(&self) -> Option<String> {
        let n = self.n;
        for i in 0..n {
            if self.basis_product(i, i).iter().any(|&c| c != 0) {
                return Some(format!("b{i}·b{i} ≠ 0"));
            }
            for j in 0..i {
                let s = self.add(self.basis_product(i, j), self.basis_product(j, i));
                if s.iter().any(|&c| c != 0) {
                    return Some(format!("b{i}·b{j} ≠ −b{j}·b{i}"));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                let lhs = self.mul(self.basis_pmult(i), &self.basis(j));
                let rhs = self.p_multiple(self.basis_product(i, j));
                if lhs != rhs {
                    return Some(format!("(p·b{i})·b{j} ≠ p·(b{i}·b{j})"));
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    if !self.jacobi(i, j, k).iter().all(|&c| c == 0) {
                        return Some(format!("Jacobi fails on (b{i}, b{j}, b{k})"));
                    }
                }
            }
        }
        None
    }

    /// `(b_i b_j) b_k + (b_j b_k) b_i + (b_k b_i) b_j`.
    pub(crate) fn jacobi(&self, i: usize, j: usize, k: usize) -> Vec<u32> {
        let mut acc = vec![0i64; self.n];
        let (bi, bj, bk) = (self.basis(i), self.basis(j), self.basis(k));
        self.mul_acc(&mut acc, 1, self.basis_product(i, j), &bk);
        self.mul_acc(&mut acc, 1, self.basis_product(j, k), &bi);
        self.mul_acc(&mut acc, 1, self.basis_product(k, i), &bj);
        self.normalize(&mut acc)
    }

    pub fn is_consistent(&self) -> bool {
        self.check_shape().is_ok() && self.consistency_defect().is_none()
    }

    /// Shape checks plus the full consistency gate.
    pub fn validate(&self) -> Result<()> {
        check_prime(self.p)?;
        self.check_shape()?;
        match self.consistency_defect() {
            None => Ok(()),
            Some(msg) => Err(Error::Inconsistent(msg)),
        }
    }

    /// Weight-graded: generators are exactly the weight-1 elements, products
    /// of weights `u, v` land in weight `≥ u+v`, `p·` raises weight, and the
    /// span of the weight-`≥ w` elements is the `w`-th lower p-central term.
    pub fn is_graded(&self) -> bool {
        let n = self.n;
        let Some(defs) = &self.defs else { return false };
        for k in 0..n {
            if (self.weights[k] == 1) != (defs[k] == Definition::Generator) {
                return false;
            }
        }
        let wt_ok = |v: &[u32], w: u32| v.iter().enumerate().all(|(k, &c)| c == 0 || self.weights[k] >= w);
        for i in 0..n {
            if !wt_ok(self.basis_pmult(i), self.weights[i] + 1) {
                return false;
            }
            for j in 0..n {
                if !wt_ok(self.basis_product(i, j), self.weights[i] + self.weights[j]) {
                    return false;
                }
            }
        }
        let series = lower_p_central_series(self);
        let top = self.weights.last().copied().unwrap_or(0) as usize;
        if series.len() != top + 1 {
            return false;
        }
        series.iter().enumerate().all(|(w, s)| {
            let expected = self.weights.iter().filter(|&&x| x as usize > w).count();
            s.dim() == expected
        })
    }

    /// Quotient by the span of all weight-`> w` elements (graded rings only).
    pub fn truncate(&self, w: u32) -> LieRing {
        let m = self.weights.iter().take_while(|&&x| x <= w).count();
        let n = self.n;
        let mut table = vec![0u32; m * m * m];
        let mut pmul = vec![0u32; m * m];
        for i in 0..m {
            pmul[i * m..(i + 1) * m].copy_from_slice(&self.pmul[i * n..i * n + m]);
            for j in 0..m {
                let src = (i * n + j) * n;
                table[(i * m + j) * m..(i * m + j + 1) * m].copy_from_slice(&self.table[src..src + m]);
            }
        }
        let defs = self.defs.as_ref().map(|d| d[..m].to_vec());
        LieRing::from_parts(self.p, self.weights[..m].to_vec(), table, pmul, defs)
    }

    /// Largest weight present (the p-class for graded rings).
    pub fn top_weight(&self) -> u32 {
        self.weights.last().copied().unwrap_or(0)
    }

    /// Basis indices of weight exactly `w`.
    pub fn layer(&self, w: u32) -> std::ops::Range<usize> {
        let start = self.weights.iter().take_while(|&&x| x < w).count();
        let end = self.weights.iter().take_while(|&&x| x <= w).count();
        start..end
    }

    /// Evaluates the homomorphism determined by generator images through the
    /// definitions, returning the images of all basis elements. `target` is
    /// the codomain. Only meaningful when such a homomorphism exists; callers
    /// verify with [`LieRing::is_homomorphism`] where that is not guaranteed.
    pub fn images_from_generators(&self, target: &LieRing, gen_images: &[Vec<u32>]) -> Result<Vec<Vec<u32>>> {
        let defs = self.defs.as_ref().ok_or(Error::MissingDefinitions)?;
        let mut img: Vec<Vec<u32>> = Vec::with_capacity(self.n);
        let mut g = 0;
        for (k, d) in defs.iter().enumerate() {
            let v = match *d {
                Definition::Generator => {
                    let x = gen_images
                        .get(g)
                        .ok_or(Error::DimensionMismatch { expected: g + 1, found: gen_images.len() })?;
                    g += 1;
                    x.clone()
                }
                _ => {
                    let rel = self.definition_value(d).unwrap();
                    let lhs = match *d {
                        Definition::Product { left, right } => target.mul(&img[left], &img[right]),
                        Definition::Power(i) => target.p_multiple(&img[i]),
                        Definition::Generator => unreachable!(),
                    };
                    let mut acc: Vec<i64> = lhs.iter().map(|&c| c as i64).collect();
                    for (m, &c) in rel[..k].iter().enumerate() {
                        if c != 0 {
                            for (a, &y) in acc.iter_mut().zip(&img[m]) {
                                *a -= c as i64 * y as i64;
                            }
                        }
                    }
                    target.normalize(&mut acc)
                }
            };
            img.push(v);
        }
        if g != gen_images.len() {
            return Err(Error::DimensionMismatch { expected: g, found: gen_images.len() });
        }
        Ok(img)
    }

    /// Applies the additive map given by basis images.
    pub fn apply_linear(target: &LieRing, images: &[Vec<u32>], x: &[u32]) -> Vec<u32> {
        let mut acc = vec![0i64; target.n];
        for (m, &c) in x.iter().enumerate() {
            if c != 0 {
                for (a, &y) in acc.iter_mut().zip(&images[m]) {
                    *a += c as i64 * y as i64;
                }
            }
        }
        target.normalize(&mut acc)
    }

    /// Whether the additive map with the given basis images respects the
    /// product and the power table.
    pub fn is_homomorphism(&self, target: &LieRing, images: &[Vec<u32>]) -> bool {
        if images.len() != self.n {
            return false;
        }
        for i in 0..self.n {
            let lhs = LieRing::apply_linear(target, images, self.basis_pmult(i));
            if lhs != target.p_multiple(&images[i]) {
                return false;
            }
            for j in 0..i {
                let lhs = LieRing::apply_linear(target, images, self.basis_product(i, j));
                if lhs != target.mul(&images[i], &images[j]) {
                    return false;
                }
            }
        }
        true
    }
}

/// Incremental construction of a ring from sparse tables.
#[derive(Clone, Debug)]
pub struct RingBuilder {
    p: u32,
    weights: Vec<u32>,
    /// Integer entries of `b_j·b_i` for `j > i` only; the rest follows by
    /// antisymmetry once the power table is known.
    table: Vec<i64>,
    pmul: Vec<i64>,
    defs: Option<Vec<Definition>>,
}

impl RingBuilder {
    pub fn new(p: u32, weights: Vec<u32>) -> Self {
        let n = weights.len();
        RingBuilder { p, weights, table: vec![0; n * n * n], pmul: vec![0; n * n], defs: None }
    }

    fn n(&self) -> usize {
        self.weights.len()
    }

    /// Sets `b_i·b_j = v` (and `b_j·b_i = −v`).
    pub fn product(mut self, i: usize, j: usize, v: &[i64]) -> Self {
        let n = self.n();
        let (hi, lo, sign) = if i > j { (i, j, 1) } else { (j, i, -1) };
        for k in 0..n {
            self.table[(hi * n + lo) * n + k] = sign * v.get(k).copied().unwrap_or(0);
        }
        self
    }

    pub fn pmult(mut self, i: usize, v: &[i64]) -> Self {
        let n = self.n();
        for k in 0..n {
            self.pmul[i * n + k] = v.get(k).copied().unwrap_or(0);
        }
        self
    }

    pub fn definitions(mut self, defs: Vec<Definition>) -> Self {
        self.defs = Some(defs);
        self
    }

    /// Builds without the consistency gate (for deliberately broken tables).
    pub fn build_unchecked(self) -> LieRing {
        let n = self.n();
        let mut ring = LieRing::from_parts(self.p, self.weights, vec![0; n * n * n], vec![0; n * n], self.defs);
        // reduce with carries; row i of the power table only carries into rows beyond i
        for i in (0..n).rev() {
            let v = ring.normalize(&mut self.pmul[i * n..(i + 1) * n].to_vec());
            ring.pmul[i * n..(i + 1) * n].copy_from_slice(&v);
        }
        for j in 0..n {
            for i in 0..j {
                let at = (j * n + i) * n;
                let v = ring.normalize(&mut self.table[at..at + n].to_vec());
                ring.table[at..at + n].copy_from_slice(&v);
            }
        }
        ring.complete_antisymmetric();
        ring
    }

    pub fn build(self) -> Result<LieRing> {
        let r = self.build_unchecked();
        r.validate()?;
        Ok(r)
    }
}

/// The inverse of a unit mod `p` as an `i64` scalar.
pub(crate) fn inv_scalar(c: u32, p: u32) -> i64 {
    inv_mod(c, p) as i64
}
