use super::autgroup::{gl_generators, AutGroup, Automorphism};
use super::cover::{p_cover, PCover};
use crate::error::{Error, Result};
use crate::gfplin::{primitive_root, FpMatrix, FpSubspace, SchreierTree};
use crate::liering::{standardize, LieRing};

/// Automorphism group generators together with their action on the
/// multiplicator of a cover.
#[derive(Clone, Debug)]
pub struct AutAction {
    pub group: AutGroup,
    /// The matrix of `α*` on `Z` for each generator `α`, in row convention:
    /// a subspace `T` maps to the row space of `T·A`.
    pub restriction_to_z: Vec<FpMatrix>,
}

impl AutAction {
    pub fn generators(&self) -> &[Automorphism] {
        self.group.generators()
    }
}

/// The matrix of `α*` on `Z`, where `α*` sends each generator of the cover to
/// its image under `α` plus `offsets[i]` (a `Z`-vector; zero when absent).
pub fn extension_matrix(a: &Automorphism, cov: &PCover, offsets: Option<&[Vec<u32>]>) -> Result<FpMatrix> {
    let parent = cov.parent();
    let cover = cov.cover();
    let d = parent.num_generators().ok_or(Error::MissingDefinitions)?;
    let gens: Vec<Vec<u32>> = (0..d)
        .map(|i| {
            let lifted = cov.lift(&a.images()[i]);
            match offsets {
                Some(o) => cover.add(&lifted, &cov.z_element(&o[i])),
                None => lifted,
            }
        })
        .collect();
    let imgs = cover.images_from_generators(cover, &gens)?;
    let n = cov.parent_dim();
    let rows: Vec<Vec<u32>> = imgs[n..]
        .iter()
        .map(|x| cov.z_coords(x).ok_or_else(|| Error::Extension("image of a tail leaves Z".into())))
        .collect::<Result<_>>()?;
    let m = FpMatrix::from_rows(parent.p(), cov.z_dim(), &rows)?;
    if !m.is_invertible() {
        return Err(Error::Extension("extended map is not invertible on Z".into()));
    }
    Ok(m)
}

/// The action of every generator of `group` (a subgroup of `Aut` of the
/// cover's parent) on `Z`.
pub fn extend_to_cover(group: &AutGroup, cov: &PCover) -> Result<AutAction> {
    let restriction_to_z = group.generators().iter().map(|a| extension_matrix(a, cov, None)).collect::<Result<_>>()?;
    Ok(AutAction { group: group.clone(), restriction_to_z })
}

/// The automorphism of `target` with generator images `gen_images` from a
/// smaller ring, padded with zero coordinates.
fn pad_lift(target: &LieRing, gen_images: &[Vec<u32>]) -> Result<Automorphism> {
    let gens: Vec<Vec<u32>> = gen_images
        .iter()
        .map(|x| {
            let mut v = x.clone();
            v.resize(target.dim(), 0);
            v
        })
        .collect();
    Automorphism::from_generator_images_unchecked(target, &gens)
}

/// The subspace of `Z` that is the kernel of the cover of `cov.parent()`
/// onto `next`, where `next` has `cov.parent()` as the quotient by its last
/// weight layer.
pub fn kernel_in_cover(cov: &PCover, next: &LieRing) -> Result<FpSubspace> {
    let p = next.p();
    let w = next.top_weight();
    let lay = next.layer(w);
    let n = cov.parent_dim();
    let defs = cov.cover().definitions().ok_or(Error::MissingDefinitions)?;
    let z = cov.z_dim();
    let mut pi = FpMatrix::zeros(p, z, lay.len());
    for f in 0..z {
        let v = next.definition_value(&defs[n + f]).expect("tails carry definitions");
        for (c, k) in lay.clone().enumerate() {
            pi.set(f, c, v[k]);
        }
    }
    let rows = pi.transpose().nullspace();
    FpSubspace::span(p, z, &rows)
}

/// The kernel, as a subspace of `Z`, of the homomorphism from the cover onto
/// `target` sending the cover's generators to `gen_images`. `target` must
/// have p-class one more than the parent, with the map inducing an
/// isomorphism from the parent onto `target` modulo its top layer.
pub fn cover_kernel(cov: &PCover, target: &LieRing, gen_images: &[Vec<u32>]) -> Result<FpSubspace> {
    let p = target.p();
    let cover = cov.cover();
    let imgs = cover.images_from_generators(target, gen_images)?;
    if !cover.is_homomorphism(target, &imgs) {
        return Err(Error::Precondition("generator images do not extend to a homomorphism".into()));
    }
    let lay = target.layer(target.top_weight());
    let n = cov.parent_dim();
    let z = cov.z_dim();
    let mut pi = FpMatrix::zeros(p, z, lay.len());
    for f in 0..z {
        let v = &imgs[n + f];
        if v[..lay.start].iter().any(|&c| c != 0) {
            return Err(Error::Precondition("multiplicator does not map into the top layer".into()));
        }
        for (c, k) in lay.clone().enumerate() {
            pi.set(f, c, v[k]);
        }
    }
    if pi.rank() != lay.len() {
        return Err(Error::Precondition("map onto the top layer is not surjective".into()));
    }
    FpSubspace::span(p, z, &pi.transpose().nullspace())
}

/// Lifts generators of `Aut(next/next_top)` to generators of `Aut(next)`:
/// the stabilizer of the kernel in the cover, plus the central automorphisms
/// moving generators inside the top layer.
pub fn lift_automorphisms(group: &AutGroup, next: &LieRing) -> Result<AutGroup> {
    let q = group.ring();
    let cov = p_cover(q)?;
    let t = kernel_in_cover(&cov, next)?;
    let action = extend_to_cover(group, &cov)?;
    let gens = group.generators();
    let tree = SchreierTree::build(&t, &action.restriction_to_z)?;

    let mut coset: Vec<Automorphism> = Vec::with_capacity(tree.len());
    coset.push(Automorphism::identity(q));
    for i in 1..tree.len() {
        let (j, g) = tree.parent[i].unwrap();
        coset.push(gens[g].compose(q, &coset[j]));
    }
    let coset_inv: Vec<Automorphism> = coset.iter().map(|u| u.inverse(q)).collect::<Result<_>>()?;

    let mut lifted = AutGroup::new(next);
    let d = next.layer(1).len();
    let top = next.layer(next.top_weight());
    for i in 0..d {
        for k in top.clone() {
            let mut imgs: Vec<Vec<u32>> = (0..d).map(|j| next.basis(j)).collect();
            imgs[i][k] = 1;
            lifted.sift(&Automorphism::from_generator_images_unchecked(next, &imgs)?)?;
        }
    }
    for x in 0..tree.len() {
        for (g, mat) in action.restriction_to_z.iter().enumerate() {
            let y = tree.position(&tree.points[x].image(mat)?).expect("orbit closed");
            if tree.parent[y] == Some((x, g)) {
                continue;
            }
            let s = coset_inv[y].compose(q, &gens[g].compose(q, &coset[x]));
            let a = pad_lift(next, &s.images()[..d])?;
            debug_assert!(next.is_homomorphism(next, a.images()));
            lifted.sift(&a)?;
        }
    }
    Ok(lifted)
}

/// Generators of the full automorphism group of a graded ring, computed by
/// lifting `GL(d, p)` through the weight layers.
pub fn automorphism_group(m: &LieRing) -> Result<AutGroup> {
    if !m.is_graded() {
        return Err(Error::Precondition("automorphism_group needs a graded ring; standardize first".into()));
    }
    let p = m.p();
    let d = m.layer(1).len();
    let q1 = m.truncate(1);
    let mut group = AutGroup::new(&q1);
    for mat in gl_generators(p, d, primitive_root(p)?) {
        let imgs: Vec<Vec<u32>> = mat.rows().map(|r| r.to_vec()).collect();
        group.sift(&Automorphism::from_generator_images_unchecked(&q1, &imgs)?)?;
    }
    for k in 2..=m.top_weight() {
        group = lift_automorphisms(&group, &m.truncate(k))?;
    }
    Ok(group)
}

/// Generators of `Aut(M)` for an arbitrary consistent ring, as basis images
/// on `M`'s own basis.
pub fn automorphisms(m: &LieRing) -> Result<Vec<Automorphism>> {
    m.validate()?;
    if m.is_graded() {
        return Ok(automorphism_group(m)?.generators().to_vec());
    }
    let sf = standardize(m)?;
    let group = automorphism_group(&sf.ring)?;
    Ok(group
        .generators()
        .iter()
        .map(|a| {
            let imgs = (0..m.dim()).map(|k| sf.backward(m, &a.apply(&sf.ring, &sf.forward(m, &m.basis(k))))).collect();
            Automorphism::from_images(imgs)
        })
        .collect())
}
