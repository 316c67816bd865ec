use super::{inv_scalar, Definition, LieRing};
use crate::error::{Error, Result};

/// An additive subgroup stored as an induced pc sequence: at most one row per
/// leading position, each row with leading coefficient 1, closed under
/// `p`-multiplication. The subgroup has order `p^dim`.
///
/// Series terms and kernels are built through [`Ideal::span`]; arbitrary
/// generating sets are closed into ideals with [`Ideal::generated_by`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ideal {
    rows: Vec<Option<Vec<u32>>>,
}

fn lead(v: &[u32]) -> Option<usize> {
    v.iter().position(|&c| c != 0)
}

impl Ideal {
    pub fn zero(ring: &LieRing) -> Ideal {
        Ideal { rows: vec![None; ring.dim()] }
    }

    pub fn whole(ring: &LieRing) -> Ideal {
        let mut s = Ideal::zero(ring);
        for k in 0..ring.dim() {
            s.rows[k] = Some(ring.basis(k));
        }
        s
    }

    /// Additive subgroup generated by `elems`.
    pub fn span(ring: &LieRing, elems: &[Vec<u32>]) -> Ideal {
        let mut s = Ideal::zero(ring);
        for e in elems {
            s.insert(ring, e);
        }
        s
    }

    /// Smallest ideal containing `elems`.
    pub fn generated_by(ring: &LieRing, elems: &[Vec<u32>]) -> Ideal {
        let mut s = Ideal::zero(ring);
        let mut queue: Vec<Vec<u32>> = Vec::new();
        for e in elems {
            queue.extend(s.insert(ring, e));
        }
        while let Some(r) = queue.pop() {
            for k in 0..ring.dim() {
                let prod = ring.mul(&r, &ring.basis(k));
                queue.extend(s.insert(ring, &prod));
            }
        }
        s
    }

    /// `log_p` of the order.
    pub fn dim(&self) -> usize {
        self.rows.iter().filter(|r| r.is_some()).count()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn ambient_dim(&self) -> usize {
        self.rows.len()
    }

    /// The rows (additive generators), by increasing lead.
    pub fn generators(&self) -> impl Iterator<Item = &Vec<u32>> {
        self.rows.iter().flatten()
    }

    pub fn leads(&self) -> Vec<usize> {
        (0..self.rows.len()).filter(|&k| self.rows[k].is_some()).collect()
    }

    /// Reduces until the leading position carries no row.
    fn sift(&self, ring: &LieRing, v: &[u32]) -> Vec<u32> {
        let mut v = v.to_vec();
        while let Some(l) = lead(&v) {
            match &self.rows[l] {
                Some(row) => v = ring.combine(&[(1, &v), (-(v[l] as i64), row)]),
                None => break,
            }
        }
        v
    }

    /// Inserts `x` and everything its `p`-multiples force; returns the new rows.
    pub fn insert(&mut self, ring: &LieRing, x: &[u32]) -> Vec<Vec<u32>> {
        let mut added = Vec::new();
        let mut stack = vec![x.to_vec()];
        while let Some(v) = stack.pop() {
            let r = self.sift(ring, &v);
            if let Some(l) = lead(&r) {
                let row = ring.scale(&r, inv_scalar(r[l], ring.p()));
                stack.push(ring.p_multiple(&row));
                self.rows[l] = Some(row.clone());
                added.push(row);
            }
        }
        added
    }

    pub fn contains(&self, ring: &LieRing, x: &[u32]) -> bool {
        lead(&self.sift(ring, x)).is_none()
    }

    pub fn contains_ideal(&self, ring: &LieRing, other: &Ideal) -> bool {
        other.generators().all(|g| self.contains(ring, g))
    }

    /// The unique representative of `x + I` vanishing on every lead position.
    pub fn reduce(&self, ring: &LieRing, x: &[u32]) -> Vec<u32> {
        let mut v = x.to_vec();
        for l in 0..v.len() {
            if v[l] != 0 {
                if let Some(row) = &self.rows[l] {
                    v = ring.combine(&[(1, &v), (-(v[l] as i64), row)]);
                }
            }
        }
        v
    }

    /// Closed under multiplication by every basis element.
    pub fn is_ideal(&self, ring: &LieRing) -> bool {
        self.generators().all(|g| (0..ring.dim()).all(|k| self.contains(ring, &ring.mul(g, &ring.basis(k)))))
    }

    /// Sum of two subgroups.
    pub fn sum(&self, ring: &LieRing, other: &Ideal) -> Ideal {
        let mut s = self.clone();
        for g in other.generators() {
            s.insert(ring, g);
        }
        s
    }

    /// `L/I` on the basis images of the non-lead positions. Definitions carry
    /// over when every one of them still holds exactly; otherwise the
    /// quotient has none and must be standardized before generation.
    pub fn quotient(&self, ring: &LieRing) -> Result<LieRing> {
        if !self.is_ideal(ring) {
            return Err(Error::NotIdeal);
        }
        Ok(self.quotient_unchecked(ring))
    }

    pub(crate) fn quotient_unchecked(&self, ring: &LieRing) -> LieRing {
        let kept: Vec<usize> = (0..ring.dim()).filter(|&k| self.rows[k].is_none()).collect();
        let m = kept.len();
        let mut pos = vec![usize::MAX; ring.dim()];
        for (i, &k) in kept.iter().enumerate() {
            pos[k] = i;
        }
        let project = |v: &[u32]| -> Vec<u32> {
            let r = self.reduce(ring, v);
            kept.iter().map(|&k| r[k]).collect()
        };
        let mut table = vec![0u32; m * m * m];
        let mut pmul = vec![0u32; m * m];
        for (i, &ki) in kept.iter().enumerate() {
            pmul[i * m..(i + 1) * m].copy_from_slice(&project(ring.basis_pmult(ki)));
            for (j, &kj) in kept.iter().enumerate() {
                table[(i * m + j) * m..(i * m + j + 1) * m].copy_from_slice(&project(ring.basis_product(ki, kj)));
            }
        }
        let weights = kept.iter().map(|&k| ring.weights()[k]).collect();
        let defs = ring.definitions().and_then(|defs| {
            kept.iter()
                .map(|&k| match defs[k] {
                    Definition::Generator => Some(Definition::Generator),
                    Definition::Product { left, right } => (pos[left] != usize::MAX && pos[right] != usize::MAX)
                        .then(|| Definition::Product { left: pos[left], right: pos[right] }),
                    Definition::Power(i) => (pos[i] != usize::MAX).then(|| Definition::Power(pos[i])),
                })
                .collect::<Option<Vec<_>>>()
        });
        let mut q = LieRing::from_parts(ring.p(), weights, table, pmul, None);
        if let Some(defs) = defs {
            let ok = defs.iter().enumerate().all(|(k, d)| match q.definition_value(d) {
                None => true,
                Some(v) => v[k] == 1 && v[k + 1..].iter().all(|&c| c == 0),
            });
            if ok {
                q.set_definitions(Some(defs));
            }
        }
        q
    }
}
