use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::gfplin::{inv_mod, FpMatrix};
use crate::liering::LieRing;

/// A bijective endomorphism, stored as the images of all basis elements.
///
/// Rings are assumed graded (see [`LieRing::is_graded`]): the first `d` basis
/// elements are the generators and the weight layers are contiguous.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Automorphism {
    images: Vec<Vec<u32>>,
}

impl Automorphism {
    pub fn identity(ring: &LieRing) -> Self {
        Automorphism { images: (0..ring.dim()).map(|k| ring.basis(k)).collect() }
    }

    /// The endomorphism with the given generator images. Fails if these do
    /// not define an automorphism.
    pub fn from_generator_images(ring: &LieRing, gens: &[Vec<u32>]) -> Result<Self> {
        let a = Automorphism::from_generator_images_unchecked(ring, gens)?;
        if !ring.is_homomorphism(ring, &a.images) {
            return Err(Error::Extension("generator images do not define an endomorphism".into()));
        }
        if !a.top_matrix(ring).is_invertible() {
            return Err(Error::Singular);
        }
        Ok(a)
    }

    pub(crate) fn from_generator_images_unchecked(ring: &LieRing, gens: &[Vec<u32>]) -> Result<Self> {
        Ok(Automorphism { images: ring.images_from_generators(ring, gens)? })
    }

    pub(crate) fn from_images(images: Vec<Vec<u32>>) -> Self {
        Automorphism { images }
    }

    pub fn images(&self) -> &[Vec<u32>] {
        &self.images
    }

    /// The images as an `n × n` matrix (row `k` is the image of `b_k`).
    pub fn matrix(&self, ring: &LieRing) -> FpMatrix {
        FpMatrix::from_rows(ring.p(), ring.dim(), &self.images).expect("square")
    }

    pub fn apply(&self, ring: &LieRing, x: &[u32]) -> Vec<u32> {
        LieRing::apply_linear(ring, &self.images, x)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, ring: &LieRing, other: &Automorphism) -> Automorphism {
        Automorphism { images: other.images.iter().map(|x| self.apply(ring, x)).collect() }
    }

    pub fn pow(&self, ring: &LieRing, k: u64) -> Automorphism {
        let mut acc = Automorphism::identity(ring);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.compose(ring, &base);
            }
            base = base.compose(ring, &base);
            k >>= 1;
        }
        acc
    }

    pub fn is_identity(&self, ring: &LieRing) -> bool {
        self.images.iter().enumerate().all(|(k, x)| *x == ring.basis(k))
    }

    /// The induced map on `L/L_2` in row convention: row `i` holds the
    /// generator coordinates of the image of `g_i`.
    pub fn top_matrix(&self, ring: &LieRing) -> FpMatrix {
        let d = ring.layer(1).len();
        FpMatrix::from_fn(ring.p(), d, d, |r, c| self.images[r][c])
    }

    fn layer_matrix(&self, ring: &LieRing, w: u32) -> FpMatrix {
        let lay = ring.layer(w);
        let s = lay.start;
        FpMatrix::from_fn(ring.p(), lay.len(), lay.len(), |r, c| self.images[s + r][s + c])
    }

    /// Solves `self(x) = y` weight layer by weight layer.
    pub fn preimage(&self, ring: &LieRing, y: &[u32], layer_inverses: &[FpMatrix]) -> Vec<u32> {
        let mut x = ring.zero();
        for (wi, inv) in layer_inverses.iter().enumerate() {
            let lay = ring.layer(wi as u32 + 1);
            let r = ring.sub(y, &self.apply(ring, &x));
            let coords = inv.apply_row(&r[lay.clone()]);
            let mut e = ring.zero();
            e[lay].copy_from_slice(&coords);
            x = ring.add(&x, &e);
        }
        x
    }

    pub fn inverse(&self, ring: &LieRing) -> Result<Automorphism> {
        let invs: Vec<FpMatrix> =
            (1..=ring.top_weight()).map(|w| self.layer_matrix(ring, w).inverse()).collect::<Result<_>>()?;
        let d = ring.layer(1).len();
        let gens: Vec<Vec<u32>> = (0..d).map(|i| self.preimage(ring, &ring.basis(i), &invs)).collect();
        Automorphism::from_generator_images_unchecked(ring, &gens)
    }

    /// Layer-`w` coordinates of the generator images, concatenated.
    fn delta(&self, ring: &LieRing, w: u32) -> Vec<u32> {
        let d = ring.layer(1).len();
        let lay = ring.layer(w);
        (0..d).flat_map(|i| self.images[i][lay.clone()].to_vec()).collect()
    }
}

#[derive(Clone, Debug)]
struct LayerRow {
    lead: usize,
    delta: Vec<u32>,
    aut: Automorphism,
    /// `aut^{-c}` for `c = 0..p`.
    neg_powers: Vec<Automorphism>,
}

/// A subgroup of `Aut(L)` for graded `L`, stored along the filtration by the
/// kernels `K_w` of the action on `L/L_w`: the image in `GL(d, p)` is kept in
/// full with a representative per element, and each `K_w/K_{w+1}` (an
/// elementary abelian group) by an echelon basis.
///
/// Sifting an automorphism either proves it lies in the group generated so
/// far or extends the structure, so the generators retained always generate
/// the group. Group orders are exact only after [`AutGroup::close`].
#[derive(Clone, Debug)]
pub struct AutGroup {
    ring: LieRing,
    gens: Vec<Automorphism>,
    top_index: HashMap<FpMatrix, usize>,
    top: Vec<(FpMatrix, Automorphism)>,
    top_inv: Vec<Option<Automorphism>>,
    top_gens: Vec<usize>,
    layers: Vec<Vec<LayerRow>>,
}

impl AutGroup {
    pub fn new(ring: &LieRing) -> Self {
        let id = Automorphism::identity(ring);
        let top0 = id.top_matrix(ring);
        let c = ring.top_weight() as usize;
        AutGroup {
            ring: ring.clone(),
            gens: Vec::new(),
            top_index: HashMap::from([(top0.clone(), 0)]),
            top: vec![(top0, id.clone())],
            top_inv: vec![Some(id)],
            top_gens: Vec::new(),
            layers: vec![Vec::new(); c.saturating_sub(1)],
        }
    }

    pub fn ring(&self) -> &LieRing {
        &self.ring
    }

    pub fn generators(&self) -> &[Automorphism] {
        &self.gens
    }

    pub fn top_size(&self) -> usize {
        self.top.len()
    }

    pub fn top_matrices(&self) -> impl Iterator<Item = &FpMatrix> {
        self.top.iter().map(|t| &t.0)
    }

    /// `Σ dim K_w/K_{w+1}` as recorded so far.
    pub fn kernel_exponent(&self) -> usize {
        self.layers.iter().map(Vec::len).sum()
    }

    /// Group order as `|top| · p^kernel_exponent` (exact after `close`).
    pub fn order(&self) -> (usize, usize) {
        (self.top_size(), self.kernel_exponent())
    }

    fn top_inverse(&mut self, idx: usize) -> Result<Automorphism> {
        if let Some(a) = &self.top_inv[idx] {
            return Ok(a.clone());
        }
        let a = self.top[idx].1.inverse(&self.ring)?;
        self.top_inv[idx] = Some(a.clone());
        Ok(a)
    }

    fn extend_top(&mut self, gen: usize) {
        let ring = &self.ring;
        self.top_gens.push(gen);
        let mut queue: Vec<(usize, usize)> = (0..self.top.len()).map(|x| (x, gen)).collect();
        while let Some((x, g)) = queue.pop() {
            let m = self.top[x].0.mul(&self.gens[g].top_matrix(ring)).expect("square");
            if self.top_index.contains_key(&m) {
                continue;
            }
            let rep = self.gens[g].compose(ring, &self.top[x].1);
            let idx = self.top.len();
            self.top_index.insert(m.clone(), idx);
            self.top.push((m, rep));
            self.top_inv.push(None);
            for &tg in &self.top_gens {
                queue.push((idx, tg));
            }
        }
    }

    /// Reduces `a` to the identity if it lies in the current group; otherwise
    /// records it and returns `true`.
    pub fn sift(&mut self, a: &Automorphism) -> Result<bool> {
        let ring = self.ring.clone();
        let top = a.top_matrix(&ring);
        let Some(&idx) = self.top_index.get(&top) else {
            if !top.is_invertible() {
                return Err(Error::Singular);
            }
            self.gens.push(a.clone());
            self.extend_top(self.gens.len() - 1);
            return Ok(true);
        };
        let mut psi = self.top_inverse(idx)?.compose(&ring, a);
        let p = ring.p();
        for w in 2..=ring.top_weight() {
            let li = w as usize - 2;
            let mut delta = psi.delta(&ring, w);
            for row in &self.layers[li] {
                let c = delta[row.lead];
                if c != 0 {
                    psi = psi.compose(&ring, &row.neg_powers[c as usize]);
                    for (x, &y) in delta.iter_mut().zip(&row.delta) {
                        *x = ((*x as u64 + (p - c) as u64 * y as u64) % p as u64) as u32;
                    }
                }
            }
            debug_assert_eq!(delta, psi.delta(&ring, w));
            if let Some(lead) = delta.iter().position(|&c| c != 0) {
                let s = inv_mod(delta[lead], p) as u64;
                let aut = psi.pow(&ring, s);
                let delta = aut.delta(&ring, w);
                let inv = aut.inverse(&ring)?;
                let mut neg_powers = vec![Automorphism::identity(&ring)];
                for k in 1..p as usize {
                    neg_powers.push(neg_powers[k - 1].compose(&ring, &inv));
                }
                let pos = self.layers[li].partition_point(|r| r.lead < lead);
                self.layers[li].insert(pos, LayerRow { lead, delta, aut, neg_powers });
                self.gens.push(a.clone());
                return Ok(true);
            }
        }
        debug_assert!(psi.is_identity(&ring));
        Ok(false)
    }

    pub fn contains(&self, a: &Automorphism) -> Result<bool> {
        let mut copy = self.clone();
        Ok(!copy.sift(a)?)
    }

    /// Completes the structure so that it describes the whole generated
    /// group, making [`AutGroup::order`] exact.
    pub fn close(&mut self) -> Result<()> {
        let ring = self.ring.clone();
        // relations of the top image give kernel elements
        let mut pending: Vec<Automorphism> = Vec::new();
        for x in 0..self.top.len() {
            for &g in &self.top_gens.clone() {
                let prod = self.gens[g].compose(&ring, &self.top[x].1);
                let y = self.top_index[&prod.top_matrix(&ring)];
                pending.push(self.top_inverse(y)?.compose(&ring, &prod));
            }
        }
        for a in pending {
            self.sift(&a)?;
        }
        loop {
            let mut changed = false;
            let rows: Vec<Automorphism> = self.layers.iter().flatten().map(|r| r.aut.clone()).collect();
            let mut conj: Vec<Automorphism> = self.top_gens.iter().map(|&g| self.gens[g].clone()).collect();
            conj.extend(rows.iter().cloned());
            let conj_inv: Vec<Automorphism> = conj.iter().map(|g| g.inverse(&ring)).collect::<Result<_>>()?;
            for r in &rows {
                changed |= self.sift(&r.pow(&ring, ring.p() as u64))?;
                for (g, gi) in conj.iter().zip(&conj_inv) {
                    changed |= self.sift(&gi.compose(&ring, &r.compose(&ring, g)))?;
                }
            }
            if !changed {
                return Ok(());
            }
        }
    }
}

/// Generators of `GL(d, p)`: elementary transvections and `diag(w, 1, …, 1)`.
pub fn gl_generators(p: u32, d: usize, w: u32) -> Vec<FpMatrix> {
    let mut out = Vec::new();
    let mut m = FpMatrix::identity(p, d);
    if d > 0 {
        m.set(0, 0, w);
        out.push(m);
    }
    for i in 0..d {
        for j in 0..d {
            if i != j {
                let mut t = FpMatrix::identity(p, d);
                t.set(i, j, 1);
                out.push(t);
            }
        }
    }
    out
}
