use super::{Ideal, LieRing};
use crate::error::{Error, Result};

fn products_with_basis(ring: &LieRing, term: &Ideal) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    for g in term.generators() {
        for k in 0..ring.dim() {
            let x = ring.mul(g, &ring.basis(k));
            if x.iter().any(|&c| c != 0) {
                out.push(x);
            }
        }
    }
    out
}

/// `L = L^1 ⊇ L^2 ⊇ … ⊇ {0}`, with `L^{i+1}` spanned by `L^i·L`.
pub fn lower_central_series(ring: &LieRing) -> Vec<Ideal> {
    let mut series = vec![Ideal::whole(ring)];
    while !series.last().unwrap().is_zero() {
        let next = Ideal::span(ring, &products_with_basis(ring, series.last().unwrap()));
        series.push(next);
    }
    series
}

/// `L_1 = L`, `L_{c+1} = L_c·L + p·L_c`, down to `{0}`.
pub fn lower_p_central_series(ring: &LieRing) -> Vec<Ideal> {
    let mut series = vec![Ideal::whole(ring)];
    while !series.last().unwrap().is_zero() {
        let cur = series.last().unwrap();
        let mut gens = products_with_basis(ring, cur);
        gens.extend(cur.generators().map(|g| ring.p_multiple(g)));
        series.push(Ideal::span(ring, &gens));
    }
    series
}

/// Nilpotency class (0 for the zero ring).
pub fn class(ring: &LieRing) -> usize {
    lower_central_series(ring).len() - 1
}

pub fn p_class(ring: &LieRing) -> usize {
    lower_p_central_series(ring).len() - 1
}

/// Order `p^n` with `n ≥ 3` and class `n − 1`.
pub fn is_maximal_class(ring: &LieRing) -> bool {
    ring.dim() >= 3 && class(ring) == ring.dim() - 1
}

/// `p·x = 0` for every `x`.
pub fn has_characteristic_p(ring: &LieRing) -> bool {
    (0..ring.dim()).all(|i| ring.basis_pmult(i).iter().all(|&c| c == 0))
}

/// `log_p |pL|`.
pub fn p_multiple_dim(ring: &LieRing) -> usize {
    let gens: Vec<Vec<u32>> = (0..ring.dim()).map(|i| ring.basis_pmult(i).to_vec()).collect();
    Ideal::span(ring, &gens).dim()
}

/// For maximal class: `p·L` lies in the last non-zero term of the
/// lower central series.
pub fn p_multiples_in_last_term(ring: &LieRing) -> Result<bool> {
    if !is_maximal_class(ring) {
        return Err(Error::Precondition("ring must have maximal class and order at least p^3".into()));
    }
    let series = lower_central_series(ring);
    let last = &series[series.len() - 2];
    Ok((0..ring.dim()).all(|i| last.contains(ring, ring.basis_pmult(i))))
}

/// `L/I`; fails unless `I` is an ideal.
pub fn quotient(ring: &LieRing, ideal: &Ideal) -> Result<LieRing> {
    ideal.quotient(ring)
}

/// Orders (as `log_p`) of successive quotients of a series.
pub fn factor_dims(series: &[Ideal]) -> Vec<usize> {
    series.windows(2).map(|w| w[0].dim() - w[1].dim()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liering::tests::heisenberg;
    use crate::liering::RingBuilder;

    #[test]
    fn series_examples() {
        let ab = LieRing::elementary_abelian(5, 2).unwrap();
        assert_eq!(lower_central_series(&ab).len(), 2);
        assert_eq!(lower_p_central_series(&ab).len(), 2);
        assert_eq!(class(&ab), 1);
        assert!(!is_maximal_class(&ab));

        let h = heisenberg(5);
        let lcs = lower_central_series(&h);
        assert_eq!(lcs.iter().map(Ideal::dim).collect::<Vec<_>>(), vec![3, 1, 0]);
        assert!(lcs[1].contains(&h, &[0, 0, 1]));
        assert_eq!(class(&h), 2);
        assert!(is_maximal_class(&h));
        assert_eq!(p_multiples_in_last_term(&h), Ok(true));

        let z25 = RingBuilder::new(5, vec![1, 2]).pmult(0, &[0, 1]).build().unwrap();
        assert_eq!(lower_p_central_series(&z25).iter().map(Ideal::dim).collect::<Vec<_>>(), vec![2, 1, 0]);
        assert_eq!(class(&z25), 1);
    }

    #[test]
    fn p_multiple_check_detects_corruption() {
        // Heisenberg tables with pa = b: still class 2 of order p^3, but pa ∉ L^2
        let bad = RingBuilder::new(5, vec![1, 1, 2]).product(1, 0, &[0, 0, 1]).pmult(0, &[0, 1, 0]).build_unchecked();
        assert_eq!(p_multiples_in_last_term(&bad), Ok(false));
        let ab = LieRing::elementary_abelian(5, 2).unwrap();
        assert!(p_multiples_in_last_term(&ab).is_err());
    }

    #[test]
    fn quotients() {
        let h = heisenberg(5);
        let q0 = quotient(&h, &Ideal::zero(&h)).unwrap();
        assert_eq!(q0, h);
        let q1 = quotient(&h, &Ideal::whole(&h)).unwrap();
        assert_eq!(q1.dim(), 0);
        let centre = Ideal::span(&h, &[vec![0, 0, 1]]);
        let q = quotient(&h, &centre).unwrap();
        assert_eq!(q.dim(), 2);
        assert_eq!(class(&q), 1);
        let not_ideal = Ideal::span(&h, &[vec![1, 0, 0]]);
        assert_eq!(quotient(&h, &not_ideal), Err(Error::NotIdeal));
    }
}
