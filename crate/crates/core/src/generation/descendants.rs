use std::collections::HashMap;

use super::autgroup::AutGroup;
use super::automorphism::{automorphism_group, extend_to_cover};
use super::cover::{p_cover, PCover};
use crate::error::{Error, Result};
use crate::gfplin::{subspace_orbits, subspaces, FpMatrix, FpSubspace, Orbit};
use crate::liering::{is_maximal_class, LieRing};

/// Which immediate descendants to keep.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DescendantFilter {
    All,
    /// Only descendants of maximal class (class one less than the composition length).
    MaximalClass,
}

#[derive(Clone, Debug)]
pub struct Descendant {
    pub ring: LieRing,
    /// The allowable subspace `T` (lexicographically least in its orbit).
    pub subspace: FpSubspace,
    pub orbit_size: usize,
}

/// Immediate descendants of one parent at one order.
#[derive(Clone, Debug)]
pub struct DescendantSet {
    pub cover: PCover,
    /// `log_p` of the target order.
    pub target_dim: usize,
    pub automorphisms: AutGroup,
    pub z_action: Vec<FpMatrix>,
    pub allowable: Vec<FpSubspace>,
    pub orbits: Vec<Orbit>,
    /// Kept descendants, ordered by representative.
    pub descendants: Vec<Descendant>,
    orbit_of: HashMap<FpSubspace, usize>,
    /// Index into `descendants` for each orbit, if kept.
    kept: Vec<Option<usize>>,
}

impl DescendantSet {
    pub fn parent(&self) -> &LieRing {
        self.cover.parent()
    }

    pub fn len(&self) -> usize {
        self.descendants.len()
    }

    pub fn is_empty(&self) -> bool {
        self.descendants.is_empty()
    }

    /// The orbit containing an allowable subspace.
    pub fn orbit_index(&self, t: &FpSubspace) -> Option<usize> {
        self.orbit_of.get(t).copied()
    }

    /// The kept descendant isomorphic to `M̂/T`, if any.
    pub fn descendant_for(&self, t: &FpSubspace) -> Option<usize> {
        self.orbit_index(t).and_then(|o| self.kept[o])
    }
}

/// Subspaces `T ≤ Z` of codimension `step` with `T + N = Z`.
pub fn allowable_subspaces(cov: &PCover, step: usize) -> Result<Vec<FpSubspace>> {
    let z = cov.z_dim();
    if step == 0 || step > z {
        return Err(Error::ImpossibleTarget { target: cov.parent_dim() + step, parent: cov.parent_dim(), rank: z });
    }
    let n = cov.nucleus();
    let p = cov.parent().p();
    if n.dim() < step {
        return Ok(Vec::new());
    }
    Ok(subspaces(p, z, z - step).into_iter().filter(|t| t.sum(n).dim() == z).collect())
}

/// The immediate descendants of `parent` of order `p^target_dim`, one per
/// orbit of allowable subspaces under `Aut(parent)`.
pub fn immediate_descendants(parent: &LieRing, target_dim: usize, filter: DescendantFilter) -> Result<DescendantSet> {
    if !parent.is_graded() {
        return Err(Error::Precondition("parent must be graded; standardize first".into()));
    }
    let cov = p_cover(parent)?;
    let z = cov.z_dim();
    if target_dim <= parent.dim() || target_dim > parent.dim() + z {
        return Err(Error::ImpossibleTarget { target: target_dim, parent: parent.dim(), rank: z });
    }
    let group = automorphism_group(parent)?;
    let action = extend_to_cover(&group, &cov)?;
    descendants_with(cov, group, action.restriction_to_z, target_dim, filter)
}

fn descendants_with(
    cov: PCover,
    group: AutGroup,
    z_action: Vec<FpMatrix>,
    target_dim: usize,
    filter: DescendantFilter,
) -> Result<DescendantSet> {
    let step = target_dim - cov.parent_dim();
    let allowable = allowable_subspaces(&cov, step)?;
    let orbits = subspace_orbits(&z_action, &allowable)?;
    let mut orbit_of = HashMap::with_capacity(allowable.len());
    for (o, orb) in orbits.iter().enumerate() {
        for &i in &orb.members {
            orbit_of.insert(allowable[i].clone(), o);
        }
    }
    let mut descendants = Vec::new();
    let mut kept = vec![None; orbits.len()];
    for (o, orb) in orbits.iter().enumerate() {
        let ring = cov.quotient_by(&orb.representative);
        if filter == DescendantFilter::MaximalClass && !is_maximal_class(&ring) {
            continue;
        }
        kept[o] = Some(descendants.len());
        descendants.push(Descendant { ring, subspace: orb.representative.clone(), orbit_size: orb.size() });
    }
    Ok(DescendantSet {
        cover: cov,
        target_dim,
        automorphisms: group,
        z_action,
        allowable,
        orbits,
        descendants,
        orbit_of,
        kept,
    })
}

/// `true` iff the nucleus of the cover is trivial.
pub fn is_terminal(parent: &LieRing) -> Result<bool> {
    Ok(p_cover(parent)?.is_terminal())
}
