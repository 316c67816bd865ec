use crate::error::{Error, Result};
use crate::gfplin::{FpMatrix, FpSubspace};
use crate::liering::{lower_p_central_series, p_class, Definition, Ideal, LieRing};

/// The p-covering ring of a parent, built by the tails method.
///
/// The cover's basis is the parent's basis followed by `z_dim` tails spanning
/// the multiplicator `Z`; projecting onto the first `parent_dim`
/// coordinates is the quotient map onto the parent. Vectors in `Z` and its
/// subspaces use tail coordinates.
#[derive(Clone, Debug)]
pub struct PCover {
    parent: LieRing,
    cover: LieRing,
    nucleus: FpSubspace,
    /// Every relation of the parent that is not a definition, with its tail
    /// in `Z` coordinates.
    tails: Vec<(Definition, Vec<u32>)>,
}

/// Relations `b_j·b_i` (`j > i`) and `p·b_i` in a fixed order.
fn relations(n: usize) -> Vec<Definition> {
    let mut out = Vec::with_capacity(n * (n + 1) / 2);
    for j in 0..n {
        for i in 0..j {
            out.push(Definition::Product { left: j, right: i });
        }
    }
    out.extend((0..n).map(Definition::Power));
    out
}

fn tail_part(v: &[u32], n: usize) -> Result<Vec<u32>> {
    if v[..n].iter().any(|&c| c != 0) {
        return Err(Error::Inconsistent("consistency check left the tail space; parent is inconsistent".into()));
    }
    Ok(v[n..].to_vec())
}

/// Computes the p-covering ring of `parent`, which must carry definitions.
pub fn p_cover(parent: &LieRing) -> Result<PCover> {
    let defs = parent.definitions().ok_or(Error::MissingDefinitions)?.to_vec();
    if !parent.is_consistent() {
        return Err(Error::Inconsistent("parent fails the consistency checks".into()));
    }
    let p = parent.p();
    let n = parent.dim();
    let rels: Vec<Definition> = relations(n).into_iter().filter(|r| !defs.contains(r)).collect();
    let r = rels.len();
    let tail_weight = parent.top_weight().max(p_class(parent) as u32) + 1;

    // extended ring with one central tail of order p per relation
    let e = n + r;
    let mut table = vec![0u32; e * e * e];
    let mut pmul = vec![0u32; e * e];
    // only b_j·b_i with j > i is filled in; the rest is completed below
    for j in 0..n {
        for i in 0..j {
            let src = parent.basis_product(j, i);
            table[(j * e + i) * e..(j * e + i) * e + n].copy_from_slice(src);
        }
        let mut v = parent.basis_pmult(j).to_vec();
        v.resize(e, 0);
        pmul[j * e..(j + 1) * e].copy_from_slice(&v);
    }
    for (t, rel) in rels.iter().enumerate() {
        match *rel {
            Definition::Product { left, right } => {
                table[(left * e + right) * e + n + t] = 1;
            }
            Definition::Power(i) => pmul[i * e + n + t] = 1,
            Definition::Generator => unreachable!(),
        }
    }
    let mut weights = parent.weights().to_vec();
    weights.resize(e, tail_weight);
    let mut ext = LieRing::from_parts(p, weights, table, pmul, None);
    ext.complete_antisymmetric();

    // consistency conditions, as linear equations on the tails
    let mut eqs: Vec<Vec<u32>> = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let v = tail_part(&ext.jacobi(i, j, k), n)?;
                if v.iter().any(|&c| c != 0) {
                    eqs.push(v);
                }
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            let lhs = ext.mul(ext.basis_pmult(i), &ext.basis(j));
            let rhs = ext.p_multiple(ext.basis_product(i, j));
            let v = tail_part(&ext.sub(&lhs, &rhs), n)?;
            if v.iter().any(|&c| c != 0) {
                eqs.push(v);
            }
        }
    }
    let (red, _, pivots) = FpMatrix::from_rows(p, r, &eqs)?.rref();
    let free: Vec<usize> = (0..r).filter(|c| !pivots.contains(c)).collect();
    let z = free.len();
    let mut tail_value = vec![vec![0u32; z]; r];
    for (fi, &f) in free.iter().enumerate() {
        tail_value[f][fi] = 1;
    }
    for (row, &pc) in pivots.iter().enumerate() {
        for (fi, &f) in free.iter().enumerate() {
            tail_value[pc][fi] = (p - red.get(row, f)) % p;
        }
    }

    let m = n + z;
    let mut table = vec![0u32; m * m * m];
    let mut pmul = vec![0u32; m * m];
    for j in 0..n {
        for i in 0..j {
            let src = parent.basis_product(j, i);
            table[(j * m + i) * m..(j * m + i) * m + n].copy_from_slice(src);
        }
        pmul[j * m..j * m + n].copy_from_slice(parent.basis_pmult(j));
    }
    for (t, rel) in rels.iter().enumerate() {
        match *rel {
            Definition::Product { left, right } => {
                let at = (left * m + right) * m + n;
                table[at..at + z].copy_from_slice(&tail_value[t]);
            }
            Definition::Power(i) => {
                pmul[i * m + n..(i + 1) * m].copy_from_slice(&tail_value[t]);
            }
            Definition::Generator => unreachable!(),
        }
    }
    let mut cover_defs = defs;
    cover_defs.extend(free.iter().map(|&f| rels[f]));
    let mut weights = parent.weights().to_vec();
    weights.resize(m, tail_weight);
    let mut cover = LieRing::from_parts(p, weights, table, pmul, Some(cover_defs));
    cover.complete_antisymmetric();
    cover.validate()?;

    let c = p_class(parent);
    let series = lower_p_central_series(&cover);
    let nuc_rows: Vec<Vec<u32>> = match series.get(c) {
        Some(term) => term.generators().map(|g| tail_part(g, n)).collect::<Result<_>>()?,
        None => Vec::new(),
    };
    let nucleus = FpSubspace::span(p, z, &nuc_rows)?;
    let tails = rels.into_iter().zip(tail_value).collect();
    Ok(PCover { parent: parent.clone(), cover, nucleus, tails })
}

impl PCover {
    pub fn parent(&self) -> &LieRing {
        &self.parent
    }

    pub fn cover(&self) -> &LieRing {
        &self.cover
    }

    pub fn parent_dim(&self) -> usize {
        self.parent.dim()
    }

    /// `dim Z`.
    pub fn z_dim(&self) -> usize {
        self.cover.dim() - self.parent.dim()
    }

    /// `Z` itself, in tail coordinates.
    pub fn multiplicator(&self) -> FpSubspace {
        FpSubspace::full(self.parent.p(), self.z_dim())
    }

    pub fn nucleus(&self) -> &FpSubspace {
        &self.nucleus
    }

    pub fn is_terminal(&self) -> bool {
        self.nucleus.is_zero()
    }

    /// Non-definition relations of the parent and their tails.
    pub fn tails(&self) -> &[(Definition, Vec<u32>)] {
        &self.tails
    }

    /// The cover element with the given `Z` coordinates.
    pub fn z_element(&self, v: &[u32]) -> Vec<u32> {
        let mut x = vec![0u32; self.parent_dim()];
        x.extend_from_slice(v);
        x
    }

    /// `Z` coordinates of a cover element lying in `Z`.
    pub fn z_coords(&self, x: &[u32]) -> Option<Vec<u32>> {
        let n = self.parent_dim();
        x[..n].iter().all(|&c| c == 0).then(|| x[n..].to_vec())
    }

    /// The quotient map onto the parent.
    pub fn project(&self, x: &[u32]) -> Vec<u32> {
        x[..self.parent_dim()].to_vec()
    }

    /// Lifts a parent element with zero tail part.
    pub fn lift(&self, x: &[u32]) -> Vec<u32> {
        let mut v = x.to_vec();
        v.resize(self.cover.dim(), 0);
        v
    }

    /// `M̂/T` for a subspace `T ≤ Z`.
    pub fn quotient_by(&self, t: &FpSubspace) -> LieRing {
        let gens: Vec<Vec<u32>> = t.basis().rows().map(|r| self.z_element(r)).collect();
        Ideal::span(&self.cover, &gens).quotient_unchecked(&self.cover)
    }

    /// Checks the structural claims: `Z` central and of exponent `p`, the
    /// projection a surjective homomorphism onto the parent with kernel `Z`.
    pub fn verify(&self) -> Result<()> {
        let cov = &self.cover;
        let n = self.parent_dim();
        for k in n..cov.dim() {
            if cov.basis_pmult(k).iter().any(|&c| c != 0) {
                return Err(Error::Inconsistent("multiplicator is not elementary abelian".into()));
            }
            for j in 0..cov.dim() {
                if cov.basis_product(k, j).iter().any(|&c| c != 0) {
                    return Err(Error::Inconsistent("multiplicator is not central".into()));
                }
            }
        }
        for i in 0..n {
            if self.project(cov.basis_pmult(i)) != self.parent.basis_pmult(i) {
                return Err(Error::Inconsistent("projection does not respect p-multiples".into()));
            }
            for j in 0..n {
                if self.project(cov.basis_product(i, j)) != self.parent.basis_product(i, j) {
                    return Err(Error::Inconsistent("projection does not respect products".into()));
                }
            }
        }
        let z_ideal = Ideal::span(cov, &(n..cov.dim()).map(|k| cov.basis(k)).collect::<Vec<_>>());
        if z_ideal.quotient_unchecked(cov) != self.parent {
            return Err(Error::Inconsistent("cover/Z differs from the parent".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liering::tests::heisenberg;

    #[test]
    fn cover_of_elementary_abelian() {
        for p in [5, 7] {
            let m = LieRing::elementary_abelian(p, 2).unwrap();
            let cov = p_cover(&m).unwrap();
            assert_eq!(cov.cover().dim(), 5);
            assert_eq!(cov.z_dim(), 3);
            assert_eq!(cov.nucleus(), &cov.multiplicator());
            assert!(!cov.is_terminal());
            cov.verify().unwrap();
        }
    }

    #[test]
    fn cover_of_heisenberg() {
        let h = heisenberg(5);
        let cov = p_cover(&h).unwrap();
        cov.verify().unwrap();
        // tails on ca, cb, pa, pb, pc; p-linearity (pb)a = p(ba) = pc forces t_pc = 0
        assert_eq!(cov.z_dim(), 4);
        assert_eq!(cov.nucleus().dim(), 2);
    }

    #[test]
    fn missing_definitions_rejected() {
        let mut m = LieRing::elementary_abelian(5, 2).unwrap();
        m.set_definitions(None);
        assert_eq!(p_cover(&m).unwrap_err(), Error::MissingDefinitions);
    }
}
