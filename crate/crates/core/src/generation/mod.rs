//! The generation algorithm: p-covers, multiplicator and nucleus, allowable
//! subspaces, automorphism groups and their action on the multiplicator, and
//! immediate descendants up to isomorphism.

mod autgroup;
mod automorphism;
mod cover;
mod descendants;

pub use autgroup::{gl_generators, AutGroup, Automorphism};
pub use automorphism::{
    automorphism_group, automorphisms, cover_kernel, extend_to_cover, extension_matrix, kernel_in_cover,
    lift_automorphisms, AutAction,
};
pub use cover::{p_cover, PCover};
pub use descendants::{
    allowable_subspaces, immediate_descendants, is_terminal, Descendant, DescendantFilter, DescendantSet,
};

use crate::liering::LieRing;

/// Every tuple of generator images, in lexicographic order of coordinates.
pub(crate) fn for_each_generator_tuple(ring: &LieRing, d: usize, mut f: impl FnMut(&[Vec<u32>]) -> bool) {
    let n = ring.dim();
    let p = ring.p();
    let mut cur = vec![vec![0u32; n]; d];
    loop {
        if !f(&cur) {
            return;
        }
        let mut i = 0;
        'carry: loop {
            if i == d * n {
                return;
            }
            let (g, k) = (i / n, i % n);
            cur[g][k] += 1;
            if cur[g][k] < p {
                break 'carry;
            }
            cur[g][k] = 0;
            i += 1;
        }
    }
}

/// Every automorphism of a tiny graded ring, by exhausting generator images.
pub fn brute_force_automorphisms(ring: &LieRing) -> Vec<Automorphism> {
    let d = ring.layer(1).len();
    let mut out = Vec::new();
    for_each_generator_tuple(ring, d, |imgs| {
        let top_ok = crate::gfplin::FpMatrix::from_fn(ring.p(), d, d, |r, c| imgs[r][c]).is_invertible();
        if top_ok {
            if let Ok(all) = ring.images_from_generators(ring, imgs) {
                if ring.is_homomorphism(ring, &all) {
                    out.push(Automorphism::from_images(all));
                }
            }
        }
        true
    });
    out
}

/// `|Aut(L)|` by exhausting all generator images; only for tiny graded rings.
pub fn brute_force_automorphism_count(ring: &LieRing) -> u64 {
    brute_force_automorphisms(ring).len() as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gfplin::FpSubspace;
    use crate::liering::tests::heisenberg;
    use crate::liering::{class, p_class};

    fn order(g: &AutGroup) -> u64 {
        let (t, e) = g.order();
        t as u64 * (g.ring().p() as u64).pow(e as u32)
    }

    #[test]
    fn gl2_and_heisenberg_orders() {
        let p = 5u64;
        let ab = LieRing::elementary_abelian(5, 2).unwrap();
        let mut g = automorphism_group(&ab).unwrap();
        g.close().unwrap();
        assert_eq!(order(&g), (p * p - 1) * (p * p - p));

        let h = heisenberg(5);
        let mut g = automorphism_group(&h).unwrap();
        g.close().unwrap();
        assert_eq!(order(&g), (p * p - 1) * (p * p - p) * p * p);
        assert_eq!(brute_force_automorphism_count(&h), order(&g));
        for a in g.generators() {
            assert!(h.is_homomorphism(&h, a.images()));
        }
    }

    #[test]
    fn elementary_abelian_descendants() {
        for p in [5, 7] {
            let ab = LieRing::elementary_abelian(p, 2).unwrap();
            let ds = immediate_descendants(&ab, 3, DescendantFilter::All).unwrap();
            assert_eq!(ds.allowable.len() as u32, p * p + p + 1);
            let mut sizes: Vec<usize> = ds.orbits.iter().map(|o| o.size()).collect();
            sizes.sort();
            assert_eq!(sizes, vec![1, (p + 1) as usize, (p * p - 1) as usize]);
            assert_eq!(ds.len(), 3);
            for d in &ds.descendants {
                assert!(d.ring.is_consistent());
                assert_eq!(d.ring.dim(), 3);
                assert_eq!(p_class(&d.ring), 2);
                assert!(d.ring.is_graded());
            }
            let classes: Vec<usize> = ds.descendants.iter().map(|d| class(&d.ring)).collect();
            assert_eq!(classes.iter().filter(|&&c| c == 2).count(), 2);
            let mc = immediate_descendants(&ab, 3, DescendantFilter::MaximalClass).unwrap();
            assert_eq!(mc.len(), 2);
        }
    }

    #[test]
    fn extension_independent_of_preimages() {
        let h = heisenberg(7);
        let cov = p_cover(&h).unwrap();
        let g = automorphism_group(&h).unwrap();
        for a in g.generators() {
            let m1 = extension_matrix(a, &cov, None).unwrap();
            let offs = vec![vec![1, 2, 3, 4], vec![6, 0, 5, 1]];
            let m2 = extension_matrix(a, &cov, Some(&offs)).unwrap();
            assert_eq!(m1, m2);
        }
        let id = Automorphism::identity(&h);
        assert_eq!(extension_matrix(&id, &cov, None).unwrap(), crate::gfplin::FpMatrix::identity(7, cov.z_dim()));
    }

    #[test]
    fn natural_action_on_class_two_cover() {
        // Z = <t_ba, t_pa, t_pb>: t_ba scales by the determinant, (t_pa, t_pb) by the matrix
        let ab = LieRing::elementary_abelian(5, 2).unwrap();
        let cov = p_cover(&ab).unwrap();
        let a = Automorphism::from_generator_images(&ab, &[vec![2, 1], vec![3, 3]]).unwrap();
        let m = extension_matrix(&a, &cov, None).unwrap();
        let det = 2 * 3 - 3; // 2·3 − 1·3
        assert_eq!(m.row(0), &[det, 0, 0]);
        assert_eq!(&m.row(1)[1..], &[2, 1]);
        assert_eq!(&m.row(2)[1..], &[3, 3]);
        let t = FpSubspace::span(5, 3, &[vec![0, 1, 0]]).unwrap();
        assert_eq!(t.image(&m).unwrap(), FpSubspace::span(5, 3, &[vec![0, 2, 1]]).unwrap());
    }

    #[test]
    fn allowable_counts() {
        let ab = LieRing::elementary_abelian(5, 2).unwrap();
        let cov = p_cover(&ab).unwrap();
        assert_eq!(allowable_subspaces(&cov, 1).unwrap().len(), 31);
        assert!(allowable_subspaces(&cov, 0).is_err());
        assert!(allowable_subspaces(&cov, 4).is_err());
    }
}
