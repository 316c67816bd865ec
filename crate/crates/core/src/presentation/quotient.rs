use super::{Binding, Presentation, Term};
use crate::error::{Error, Result};
use crate::generation::p_cover;
use crate::gfplin::{check_prime, FpSubspace};
use crate::liering::LieRing;

#[derive(Clone, Copy, Debug)]
pub struct QuotientOptions {
    /// Refuse to build quotients of order above `p^max_dim`.
    pub max_dim: usize,
}

impl Default for QuotientOptions {
    fn default() -> Self {
        QuotientOptions { max_dim: 48 }
    }
}

/// Integer coefficients and terms of every relator, for one binding.
type Evaluated = Vec<Vec<(i64, Term)>>;

fn evaluate_coefficients(pres: &Presentation, p: u32, binding: &Binding) -> Result<Evaluated> {
    pres.relators
        .iter()
        .map(|r| {
            r.terms
                .iter()
                .map(|(c, t)| {
                    let v = c.eval(p, binding)?;
                    if v != 0 && t.weight() == 1 {
                        return Err(Error::Precondition("relators may not involve generators linearly".into()));
                    }
                    Ok((v as i64, t.clone()))
                })
                .collect()
        })
        .collect()
}

fn term_value(ring: &LieRing, t: &Term) -> Vec<u32> {
    match t {
        Term::PMul(g) => ring.p_multiple(&ring.basis(*g)),
        Term::Word(w) => {
            let rest: Vec<Vec<u32>> = w[1..].iter().map(|&g| ring.basis(g)).collect();
            let refs: Vec<&[u32]> = rest.iter().map(|v| v.as_slice()).collect();
            ring.left_normed(&ring.basis(w[0]), &refs)
        }
    }
}

/// The largest ring of p-class at most the presentation's bound in which
/// every relator vanishes, built one p-central layer at a time: each step
/// takes the p-cover of the previous quotient and factors out the span of
/// the relator values, which lie in the multiplicator.
pub fn nilpotent_quotient(pres: &Presentation, p: u32, binding: &Binding, opts: QuotientOptions) -> Result<LieRing> {
    check_prime(p)?;
    let rels = evaluate_coefficients(pres, p, binding)?;
    let d = pres.generators.len();
    let mut cur = LieRing::elementary_abelian(p, d)?;
    let mut c = 1;
    while pres.class_bound.is_none_or(|b| c < b) {
        let cov = p_cover(&cur)?;
        let ring = cov.cover();
        let mut values = Vec::with_capacity(rels.len());
        for r in &rels {
            let tv: Vec<(i64, Vec<u32>)> = r.iter().map(|(k, t)| (*k, term_value(ring, t))).collect();
            let refs: Vec<(i64, &[u32])> = tv.iter().map(|(k, v)| (*k, v.as_slice())).collect();
            let v = ring.combine(&refs);
            values.push(cov.z_coords(&v).ok_or_else(|| Error::Inconsistent("relator left the multiplicator".into()))?);
        }
        let t = FpSubspace::span(p, cov.z_dim(), &values)?;
        if t.dim() == cov.z_dim() {
            break;
        }
        let next = cov.quotient_by(&t);
        if next.dim() > opts.max_dim {
            return Err(Error::OrderOverflow(next.dim()));
        }
        cur = next;
        c += 1;
    }
    Ok(cur)
}

/// [`nilpotent_quotient`] with default options.
pub fn instantiate(pres: &Presentation, p: u32, binding: &Binding) -> Result<LieRing> {
    nilpotent_quotient(pres, p, binding, QuotientOptions::default())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liering::{class, has_characteristic_p, is_maximal_class, p_class};
    use crate::presentation::parse;

    fn build(s: &str, p: u32) -> Result<LieRing> {
        instantiate(&parse(s)?, p, &Binding::new())
    }

    #[test]
    fn small_quotients() {
        let r = build("<a,b | ba, pa, pb, class 1>", 5).unwrap();
        assert_eq!(r.dim(), 2);
        let r = build("<a,b | ba, pa, pb, class 2>", 5).unwrap();
        assert_eq!(r.dim(), 2);
        let r = build("<a,b | pa, pb, class 2>", 5).unwrap();
        assert_eq!((r.dim(), class(&r)), (3, 2));
        // free of p-class 2 is the cover of the elementary abelian ring
        let r = build("<a,b | class 2>", 7).unwrap();
        assert_eq!(r.dim(), 5);
        // products with carries: pb·a = p·(ba) is a tail, so −(ba) ≠ (p−1)·ba
        let r = build("<a,b | class 3>", 5).unwrap();
        assert!(r.is_consistent());
        assert_eq!((r.dim(), class(&r), p_class(&r)), (10, 3, 3));
        // cyclic of order p^3
        let r = build("<a | class 3>", 5).unwrap();
        assert_eq!((r.dim(), class(&r), p_class(&r)), (3, 1, 3));
    }

    #[test]
    fn maximal_class_parent() {
        let r = build("<a,b | bab, ba^3b, pa, pb, class 6>", 5).unwrap();
        assert!(r.is_consistent());
        assert_eq!(r.dim(), 7);
        assert_eq!(class(&r), 6);
        assert!(has_characteristic_p(&r));
        assert!(is_maximal_class(&r));
    }

    #[test]
    fn stabilizes_without_bound() {
        let r = build("<a,b | ba, pa, pb>", 5).unwrap();
        assert_eq!(r.dim(), 2);
        let e = build("<a,b | pa, pb>", 5).unwrap_err();
        assert!(matches!(e, Error::OrderOverflow(_)));
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(build("<a,b | ba, class 2>", 4).unwrap_err(), Error::NotPrime(4));
        assert_eq!(build("<a,b | ba - xba^2, class 2>", 5).unwrap_err(), Error::UnboundParameter('x'));
        assert!(matches!(build("<a,b | a - ba, class 2>", 5), Err(Error::Precondition(_))));
    }
}
