//! Exact linear algebra over GF(p).
//!
//! Scalars are plain `u32` values kept reduced into `[0, p)`. Matrices act on
//! row vectors from the right (`v ↦ v·A`), which is the convention used for
//! every group action on subspaces in this crate.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Accepts primes `p >= 5`, the range every construction here is built for.
pub fn check_prime(p: u32) -> Result<()> {
    if !is_prime(p as u64) {
        return Err(Error::NotPrime(p as u64));
    }
    if p < 5 {
        return Err(Error::PrimeTooSmall(p));
    }
    Ok(())
}

pub fn pow_mod(base: u32, mut exp: u64, p: u32) -> u32 {
    let m = p as u64;
    let mut b = base as u64 % m;
    let mut acc = 1 % m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as u32
}

/// Inverse of a non-zero residue.
pub fn inv_mod(a: u32, p: u32) -> u32 {
    debug_assert!(!a.is_multiple_of(p));
    pow_mod(a, p as u64 - 2, p)
}

#[inline]
pub fn reduce(v: i64, p: u32) -> u32 {
    v.rem_euclid(p as i64) as u32
}

/// Multiplicative order of a non-zero residue.
pub fn mult_order(a: u32, p: u32) -> u64 {
    let mut x = a % p;
    let mut k = 1;
    while x != 1 {
        x = ((x as u64 * a as u64) % p as u64) as u32;
        k += 1;
    }
    k
}

/// The smallest positive primitive root modulo `p`.
pub fn primitive_root(p: u32) -> Result<u32> {
    if !is_prime(p as u64) {
        return Err(Error::NotPrime(p as u64));
    }
    if p == 2 {
        return Ok(1);
    }
    let n = (p - 1) as u64;
    let mut factors = Vec::new();
    let mut m = n;
    let mut q = 2;
    while q * q <= m {
        if m.is_multiple_of(q) {
            factors.push(q);
            while m.is_multiple_of(q) {
                m /= q;
            }
        }
        q += 1;
    }
    if m > 1 {
        factors.push(m);
    }
    (2..p).find(|&w| factors.iter().all(|&f| pow_mod(w, n / f, p) != 1)).ok_or(Error::NotPrime(p as u64))
}

/// `[w^0, w^1, …, w^(g-1)]` with `g = gcd(p - 1, k)` and `w` a primitive root: a
/// transversal of the subgroup of `k`-th powers in GF(p)^*.
pub fn power_coset_transversal_with(p: u32, k: u64, w: u32) -> Vec<u32> {
    let g = gcd(p as u64 - 1, k.max(1));
    let mut out = Vec::with_capacity(g as usize);
    let mut x = 1u32;
    for _ in 0..g {
        out.push(x);
        x = ((x as u64 * w as u64) % p as u64) as u32;
    }
    out
}

pub fn power_coset_transversal(p: u32, k: u64) -> Result<Vec<u32>> {
    Ok(power_coset_transversal_with(p, k, primitive_root(p)?))
}

/// Dense matrix over GF(p).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FpMatrix {
    p: u32,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl fmt::Debug for FpMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FpMatrix(p={}; ", self.p)?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{:?}", self.row(r))?;
        }
        write!(f, ")")
    }
}

impl FpMatrix {
    pub fn zeros(p: u32, rows: usize, cols: usize) -> Self {
        FpMatrix { p, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(p: u32, n: usize) -> Self {
        let mut m = Self::zeros(p, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Builds a matrix from rows; every row must have length `cols`. Entries
    /// are reduced mod `p`.
    pub fn from_rows(p: u32, cols: usize, rows: &[Vec<u32>]) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch { expected: cols, found: r.len() });
            }
            data.extend(r.iter().map(|&x| x % p));
        }
        Ok(FpMatrix { p, rows: rows.len(), cols, data })
    }

    pub fn from_fn(p: u32, rows: usize, cols: usize, f: impl Fn(usize, usize) -> u32) -> Self {
        let mut m = Self::zeros(p, rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m.set(r, c, f(r, c) % p);
            }
        }
        m
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    pub fn num_rows(&self) -> usize {
        self.rows
    }

    pub fn num_cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.data[r * self.cols + c] = v % self.p;
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[u32]> {
        self.data.chunks(self.cols.max(1)).take(self.rows)
    }

    pub fn data(&self) -> &[u32] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.p, self.cols, self.rows, |r, c| self.get(c, r))
    }

    pub fn mul(&self, other: &FpMatrix) -> Result<FpMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch { expected: self.cols, found: other.rows });
        }
        let p = self.p as u64;
        let mut out = Self::zeros(self.p, self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k) as u64;
                if a == 0 {
                    continue;
                }
                for c in 0..other.cols {
                    let idx = r * other.cols + c;
                    out.data[idx] = ((out.data[idx] as u64 + a * other.get(k, c) as u64) % p) as u32;
                }
            }
        }
        Ok(out)
    }

    /// Row vector times matrix.
    pub fn apply_row(&self, v: &[u32]) -> Vec<u32> {
        debug_assert_eq!(v.len(), self.rows);
        let p = self.p as u64;
        let mut out = vec![0u64; self.cols];
        for (k, &a) in v.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (c, o) in out.iter_mut().enumerate() {
                *o += a as u64 * self.get(k, c) as u64;
            }
        }
        out.into_iter().map(|x| (x % p) as u32).collect()
    }

    /// Reduced row-echelon form, rank and pivot columns.
    pub fn rref(&self) -> (FpMatrix, usize, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        let rank = pivots.len();
        (m, rank, pivots)
    }

    fn rref_in_place(&mut self) -> Vec<usize> {
        let p = self.p as u64;
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(piv) = (row..self.rows).find(|&r| self.get(r, col) != 0) else {
                continue;
            };
            if piv != row {
                for c in 0..self.cols {
                    self.data.swap(piv * self.cols + c, row * self.cols + c);
                }
            }
            let inv = inv_mod(self.get(row, col), self.p) as u64;
            for c in col..self.cols {
                let idx = row * self.cols + c;
                self.data[idx] = (self.data[idx] as u64 * inv % p) as u32;
            }
            for r in 0..self.rows {
                if r == row {
                    continue;
                }
                let f = self.get(r, col) as u64;
                if f == 0 {
                    continue;
                }
                for c in col..self.cols {
                    let sub = f * self.get(row, c) as u64 % p;
                    let idx = r * self.cols + c;
                    self.data[idx] = ((self.data[idx] as u64 + p - sub) % p) as u32;
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.rref().1
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    pub fn inverse(&self) -> Result<FpMatrix> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch { expected: self.rows, found: self.cols });
        }
        let n = self.rows;
        let aug = Self::from_fn(self.p, n, 2 * n, |r, c| {
            if c < n {
                self.get(r, c)
            } else if c - n == r {
                1
            } else {
                0
            }
        });
        let (red, _, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::Singular);
        }
        Ok(Self::from_fn(self.p, n, n, |r, c| red.get(r, n + c)))
    }

    /// Basis of the right kernel `{x : A·x = 0}`.
    pub fn nullspace(&self) -> Vec<Vec<u32>> {
        let (red, _, pivots) = self.rref();
        let p = self.p;
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut x = vec![0u32; self.cols];
                x[f] = 1;
                for (r, &pc) in pivots.iter().enumerate() {
                    x[pc] = (p - red.get(r, f)) % p;
                }
                x
            })
            .collect()
    }

    /// Solves `A·x = b`, returning a particular solution and a kernel basis.
    pub fn solve(&self, b: &[u32]) -> Option<(Vec<u32>, Vec<Vec<u32>>)> {
        assert_eq!(b.len(), self.rows);
        let aug =
            Self::from_fn(self.p, self.rows, self.cols + 1, |r, c| if c < self.cols { self.get(r, c) } else { b[r] });
        let (red, _, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![0u32; self.cols];
        for (r, &pc) in pivots.iter().enumerate() {
            x[pc] = red.get(r, self.cols);
        }
        Some((x, self.nullspace()))
    }
}

/// `rref` as a free function.
pub fn rref(m: &FpMatrix) -> (FpMatrix, usize) {
    let (r, k, _) = m.rref();
    (r, k)
}

/// A subspace of GF(p)^n stored by its RREF basis, which is canonical: two
/// values are equal iff they span the same subspace.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FpSubspace {
    basis: FpMatrix,
    pivots: Vec<usize>,
}

impl fmt::Debug for FpSubspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FpSubspace(dim {} in {}; {:?})", self.dim(), self.ambient_dim(), self.basis)
    }
}

impl PartialOrd for FpSubspace {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FpSubspace {
    /// Lexicographic on `(ambient, dim, RREF entries)`.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.ambient_dim(), self.dim(), self.basis.data()).cmp(&(other.ambient_dim(), other.dim(), other.basis.data()))
    }
}

impl FpSubspace {
    pub fn from_matrix(m: &FpMatrix) -> Self {
        let (red, rank, pivots) = m.rref();
        let basis = FpMatrix::from_fn(m.p, rank, m.cols, |r, c| red.get(r, c));
        FpSubspace { basis, pivots }
    }

    pub fn span(p: u32, ambient: usize, rows: &[Vec<u32>]) -> Result<Self> {
        Ok(Self::from_matrix(&FpMatrix::from_rows(p, ambient, rows)?))
    }

    pub fn zero(p: u32, ambient: usize) -> Self {
        FpSubspace { basis: FpMatrix::zeros(p, 0, ambient), pivots: Vec::new() }
    }

    pub fn full(p: u32, ambient: usize) -> Self {
        FpSubspace { basis: FpMatrix::identity(p, ambient), pivots: (0..ambient).collect() }
    }

    pub fn modulus(&self) -> u32 {
        self.basis.p
    }

    pub fn dim(&self) -> usize {
        self.basis.rows
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.cols
    }

    pub fn basis(&self) -> &FpMatrix {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    /// Reduces `v` against the basis; zero iff `v` is in the subspace.
    pub fn reduce(&self, v: &[u32]) -> Vec<u32> {
        let p = self.modulus() as u64;
        let mut v = v.to_vec();
        for (r, &pc) in self.pivots.iter().enumerate() {
            let f = v[pc] as u64;
            if f == 0 {
                continue;
            }
            for (c, x) in v.iter_mut().enumerate() {
                let sub = f * self.basis.get(r, c) as u64 % p;
                *x = ((*x as u64 + p - sub) % p) as u32;
            }
        }
        v
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    pub fn contains_space(&self, other: &FpSubspace) -> bool {
        other.basis.rows().all(|r| self.contains(r))
    }

    pub fn sum(&self, other: &FpSubspace) -> FpSubspace {
        let rows: Vec<Vec<u32>> = self.basis.rows().chain(other.basis.rows()).map(|r| r.to_vec()).collect();
        FpSubspace::span(self.modulus(), self.ambient_dim(), &rows).expect("same ambient")
    }

    /// Image under `v ↦ v·A`.
    pub fn image(&self, a: &FpMatrix) -> Result<FpSubspace> {
        if a.rows != self.ambient_dim() || a.cols != self.ambient_dim() {
            return Err(Error::DimensionMismatch { expected: self.ambient_dim(), found: a.rows });
        }
        Ok(FpSubspace::from_matrix(&self.basis.mul(a)?))
    }
}

/// Every `dim`-dimensional subspace of GF(p)^ambient, sorted lexicographically.
pub fn subspaces(p: u32, ambient: usize, dim: usize) -> Vec<FpSubspace> {
    let mut out = Vec::new();
    if dim > ambient {
        return out;
    }
    let mut pivots: Vec<usize> = (0..dim).collect();
    loop {
        // free cells: (row r, column c) with c > pivots[r], c not a pivot
        let cells: Vec<(usize, usize)> = (0..dim)
            .flat_map(|r| {
                let pv = pivots.clone();
                ((pivots[r] + 1)..ambient).filter(move |c| !pv.contains(c)).map(move |c| (r, c))
            })
            .collect();
        let mut vals = vec![0u32; cells.len()];
        loop {
            let mut m = FpMatrix::zeros(p, dim, ambient);
            for (r, &pc) in pivots.iter().enumerate() {
                m.set(r, pc, 1);
            }
            for (&(r, c), &v) in cells.iter().zip(&vals) {
                m.set(r, c, v);
            }
            out.push(FpSubspace { basis: m, pivots: pivots.clone() });
            let mut i = 0;
            while i < vals.len() {
                vals[i] += 1;
                if vals[i] < p {
                    break;
                }
                vals[i] = 0;
                i += 1;
            }
            if i == vals.len() {
                break;
            }
        }
        // next pivot combination
        let mut i = dim;
        loop {
            if i == 0 {
                out.sort();
                return out;
            }
            i -= 1;
            if pivots[i] < ambient - dim + i {
                pivots[i] += 1;
                for j in i + 1..dim {
                    pivots[j] = pivots[j - 1] + 1;
                }
                break;
            }
        }
        if dim == 0 {
            out.sort();
            return out;
        }
    }
}

/// All codimension-one subspaces of GF(p)^d.
pub fn hyperplanes(d: usize, p: u32) -> Vec<FpSubspace> {
    assert!(d >= 1);
    subspaces(p, d, d - 1)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orbit {
    /// Lexicographically least member.
    pub representative: FpSubspace,
    /// Indices into the input list, ascending.
    pub members: Vec<usize>,
}

impl Orbit {
    pub fn size(&self) -> usize {
        self.members.len()
    }
}

fn check_generators(gens: &[FpMatrix], ambient: usize) -> Result<()> {
    for g in gens {
        if g.num_rows() != ambient || g.num_cols() != ambient {
            return Err(Error::DimensionMismatch { expected: ambient, found: g.num_rows() });
        }
        if !g.is_invertible() {
            return Err(Error::Singular);
        }
    }
    Ok(())
}

/// Partitions `spaces` into orbits of the group generated by `gens`. The input
/// set must be invariant. Orbits are returned sorted by representative.
pub fn subspace_orbits(gens: &[FpMatrix], spaces: &[FpSubspace]) -> Result<Vec<Orbit>> {
    let Some(first) = spaces.first() else {
        return Ok(Vec::new());
    };
    let ambient = first.ambient_dim();
    check_generators(gens, ambient)?;
    let index: HashMap<&FpSubspace, usize> = spaces.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let mut orbit_of = vec![usize::MAX; spaces.len()];
    let mut orbits = Vec::new();
    for start in 0..spaces.len() {
        if orbit_of[start] != usize::MAX {
            continue;
        }
        let id = orbits.len();
        orbit_of[start] = id;
        let mut members = vec![start];
        let mut head = 0;
        while head < members.len() {
            let cur = &spaces[members[head]];
            head += 1;
            for g in gens {
                let img = cur.image(g)?;
                let &j = index.get(&img).ok_or(Error::NotInvariant)?;
                if orbit_of[j] == usize::MAX {
                    orbit_of[j] = id;
                    members.push(j);
                }
            }
        }
        members.sort_unstable();
        let representative = members.iter().map(|&i| &spaces[i]).min().unwrap().clone();
        orbits.push(Orbit { representative, members });
    }
    orbits.sort_by(|a, b| a.representative.cmp(&b.representative));
    Ok(orbits)
}

/// Breadth-first orbit of one subspace, remembering for every point the
/// point and generator it was first reached from.
#[derive(Clone, Debug)]
pub struct SchreierTree {
    pub points: Vec<FpSubspace>,
    /// `parent[i] = Some((j, g))` means `points[i] = points[j]·gens[g]`.
    pub parent: Vec<Option<(usize, usize)>>,
    index: HashMap<FpSubspace, usize>,
}

impl SchreierTree {
    pub fn build(start: &FpSubspace, gens: &[FpMatrix]) -> Result<Self> {
        check_generators(gens, start.ambient_dim())?;
        let mut tree = SchreierTree {
            points: vec![start.clone()],
            parent: vec![None],
            index: HashMap::from([(start.clone(), 0)]),
        };
        let mut head = 0;
        while head < tree.points.len() {
            for (gi, g) in gens.iter().enumerate() {
                let img = tree.points[head].image(g)?;
                if !tree.index.contains_key(&img) {
                    tree.index.insert(img.clone(), tree.points.len());
                    tree.points.push(img);
                    tree.parent.push(Some((head, gi)));
                }
            }
            head += 1;
        }
        Ok(tree)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn position(&self, s: &FpSubspace) -> Option<usize> {
        self.index.get(s).copied()
    }

    /// Generator indices whose product maps the root to `points[i]`, in application order.
    pub fn word(&self, mut i: usize) -> Vec<usize> {
        let mut w = Vec::new();
        while let Some((j, g)) = self.parent[i] {
            w.push(g);
            i = j;
        }
        w.reverse();
        w
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn brute_primitive_root(p: u32) -> u32 {
        (1..p).find(|&w| mult_order(w, p) == (p - 1) as u64).unwrap()
    }

    #[test]
    fn rref_examples() {
        let z = FpMatrix::zeros(5, 2, 2);
        assert_eq!(rref(&z), (z.clone(), 0));
        let id = FpMatrix::identity(5, 3);
        assert_eq!(rref(&id), (id.clone(), 3));
        let m = FpMatrix::from_rows(5, 2, &[vec![2, 4], vec![1, 2]]).unwrap();
        let (r, k) = rref(&m);
        assert_eq!(k, 1);
        assert_eq!(r, FpMatrix::from_rows(5, 2, &[vec![1, 2], vec![0, 0]]).unwrap());
    }

    #[test]
    fn primitive_roots() {
        assert_eq!(primitive_root(5).unwrap(), 2);
        assert_eq!(primitive_root(7).unwrap(), 3);
        assert_eq!(primitive_root(11).unwrap(), 2);
        assert!(primitive_root(12).is_err());
        for p in (5..200u32).filter(|&p| is_prime(p as u64)) {
            assert_eq!(primitive_root(p).unwrap(), brute_primitive_root(p));
        }
    }

    #[test]
    fn transversals() {
        assert_eq!(power_coset_transversal(5, 6).unwrap(), vec![1, 2]);
        assert_eq!(power_coset_transversal(7, 6).unwrap(), vec![1, 3, 2, 6, 4, 5]);
        assert_eq!(power_coset_transversal(5, 1).unwrap(), vec![1]);
    }

    #[test]
    fn transversal_is_transversal() {
        for p in (5..=50u32).filter(|&p| is_prime(p as u64)) {
            for k in 1..=12u64 {
                let t = power_coset_transversal(p, k).unwrap();
                assert_eq!(t.len() as u64, gcd(p as u64 - 1, k));
                let powers: Vec<u32> = (1..p).map(|a| pow_mod(a, k, p)).collect();
                let mut seen = std::collections::HashSet::new();
                for &r in &t {
                    for &s in &powers {
                        seen.insert((r as u64 * s as u64 % p as u64) as u32);
                    }
                }
                assert_eq!(seen.len() as u32, p - 1, "p={p} k={k}");
            }
        }
    }

    #[test]
    fn hyperplane_counts() {
        let h1 = hyperplanes(1, 5);
        assert_eq!(h1.len(), 1);
        assert!(h1[0].is_zero());
        assert_eq!(hyperplanes(2, 5).len(), 6);
        assert_eq!(hyperplanes(3, 5).len(), 31);
        assert_eq!(subspaces(3, 4, 2).len(), 130);
    }

    #[test]
    fn orbits_examples() {
        let hs = hyperplanes(2, 5);
        let id = FpMatrix::identity(5, 2);
        let o = subspace_orbits(&[id], &hs).unwrap();
        assert_eq!(o.len(), 6);
        assert!(o.iter().all(|x| x.size() == 1));

        let g1 = FpMatrix::from_rows(5, 2, &[vec![2, 0], vec![0, 1]]).unwrap();
        let g2 = FpMatrix::from_rows(5, 2, &[vec![1, 1], vec![0, 1]]).unwrap();
        let g3 = FpMatrix::from_rows(5, 2, &[vec![1, 0], vec![1, 1]]).unwrap();
        let o = subspace_orbits(&[g1, g2, g3], &hs).unwrap();
        assert_eq!(o.len(), 1);
        assert_eq!(o[0].size(), 6);

        // diag(1,2): lines <(1,0)>, <(0,1)> fixed, the other four permuted cyclically
        let d = FpMatrix::from_rows(5, 2, &[vec![1, 0], vec![0, 2]]).unwrap();
        let o = subspace_orbits(&[d], &hs).unwrap();
        let mut sizes: Vec<usize> = o.iter().map(Orbit::size).collect();
        sizes.sort();
        assert_eq!(sizes, vec![1, 1, 4]);
    }

    #[test]
    fn orbit_errors() {
        let hs = hyperplanes(2, 5);
        let sing = FpMatrix::from_rows(5, 2, &[vec![1, 1], vec![1, 1]]).unwrap();
        assert_eq!(subspace_orbits(&[sing], &hs), Err(Error::Singular));
        let big = FpMatrix::identity(5, 3);
        assert!(matches!(subspace_orbits(&[big], &hs), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn inverse_and_solve() {
        let m = FpMatrix::from_rows(7, 2, &[vec![2, 3], vec![1, 4]]).unwrap();
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), FpMatrix::identity(7, 2));
        let (x, ker) = m.solve(&[1, 0]).unwrap();
        assert!(ker.is_empty());
        let col_x = FpMatrix::from_rows(7, 1, &[vec![x[0]], vec![x[1]]]).unwrap();
        assert_eq!(m.mul(&col_x).unwrap().data(), &[1, 0]);
    }

    fn arb_matrix() -> impl Strategy<Value = FpMatrix> {
        (1usize..5, 1usize..5).prop_flat_map(|(r, c)| {
            proptest::collection::vec(0u32..7, r * c).prop_map(move |v| {
                FpMatrix::from_rows(7, c, &v.chunks(c).map(|x| x.to_vec()).collect::<Vec<_>>()).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn rref_idempotent(m in arb_matrix()) {
            let (r1, k1) = rref(&m);
            let (r2, k2) = rref(&r1);
            prop_assert_eq!(k1, k2);
            prop_assert_eq!(r1, r2);
        }

        #[test]
        fn subspace_canonical(m in arb_matrix(), seed in 1u32..7) {
            // scaling and adding rows does not change the subspace
            let s1 = FpSubspace::from_matrix(&m);
            let mut rows: Vec<Vec<u32>> = m.rows().map(|r| r.iter().map(|&x| x * seed % 7).collect()).collect();
            if rows.len() > 1 {
                let first = rows[0].clone();
                for (x, y) in rows[1].iter_mut().zip(first) { *x = (*x + y) % 7; }
            }
            rows.reverse();
            let s2 = FpSubspace::span(7, m.num_cols(), &rows).unwrap();
            prop_assert_eq!(s1, s2);
        }
    }

    #[test]
    fn orbit_sum_and_closure() {
        let hs = hyperplanes(3, 5);
        let g = FpMatrix::from_rows(5, 3, &[vec![1, 1, 0], vec![0, 2, 0], vec![0, 0, 3]]).unwrap();
        let orbits = subspace_orbits(std::slice::from_ref(&g), &hs).unwrap();
        assert_eq!(orbits.iter().map(Orbit::size).sum::<usize>(), hs.len());
        for o in &orbits {
            let img = o.representative.image(&g).unwrap();
            assert!(o.members.iter().any(|&i| hs[i] == img));
        }
        let tree = SchreierTree::build(&orbits[0].representative, &[g]).unwrap();
        assert_eq!(tree.len(), orbits[0].size());
    }
}
