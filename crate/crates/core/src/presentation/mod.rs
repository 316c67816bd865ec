//! Presentations in bracket-word notation, e.g.
//! `<a,b | bab-ba^4, ba^3b-xba^6, pa, pb, class 7>`, and their instantiation
//! as structure-constant rings.
//!
//! A word is read left-normed (`ba^3b` is `(((b·a)·a)·a)·b`), `pg` is the
//! `p`-multiple of generator `g`, and a relator asserts that its signed sum is
//! zero. Coefficients are integer literals or one of the parameters
//! `w, x, y, z`, optionally scaled by an integer (`3x`), or a parenthesized
//! linear combination of these; `w` defaults to the least primitive root mod `p`.

mod catalog;
mod parse;
mod quotient;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gfplin::primitive_root;

pub use catalog::{catalog_p7, catalog_p8, p7_entries, p8_entries, CatalogEntry, CatalogRing, P8_PARENTS};
pub use parse::parse;
pub use quotient::{instantiate, nilpotent_quotient, QuotientOptions};

/// Names of the parameters, in the order used by [`Binding`] and [`ParamExpr`].
pub const PARAMS: [char; 4] = ['w', 'x', 'y', 'z'];

fn param_index(c: char) -> Option<usize> {
    PARAMS.iter().position(|&q| q == c)
}

/// An integer-linear expression in the parameters.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ParamExpr {
    pub constant: i64,
    pub coeffs: [i64; 4],
}

impl ParamExpr {
    pub fn constant(c: i64) -> Self {
        ParamExpr { constant: c, coeffs: [0; 4] }
    }

    pub fn param(c: char) -> Option<Self> {
        let mut coeffs = [0; 4];
        coeffs[param_index(c)?] = 1;
        Some(ParamExpr { constant: 0, coeffs })
    }

    pub fn neg(self) -> Self {
        ParamExpr { constant: -self.constant, coeffs: self.coeffs.map(|c| -c) }
    }

    pub fn is_zero(&self) -> bool {
        self.constant == 0 && self.coeffs.iter().all(|&c| c == 0)
    }

    /// Parameters with a nonzero coefficient.
    pub fn params(&self) -> impl Iterator<Item = char> + '_ {
        PARAMS.iter().zip(self.coeffs.iter()).filter(|(_, &c)| c != 0).map(|(&q, _)| q)
    }

    pub fn eval(&self, p: u32, binding: &Binding) -> Result<u32> {
        let m = p as i64;
        let mut acc = self.constant.rem_euclid(m);
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c != 0 {
                let v = binding.get(PARAMS[i], p)?;
                acc = (acc + c.rem_euclid(m) * v as i64) % m;
            }
        }
        Ok(acc as u32)
    }

    /// `(sign, magnitude text)` with `1` printed as the empty string.
    fn signed_atom(&self) -> (bool, String) {
        let single = self.params().count() == 1 && self.constant == 0;
        if self.params().count() == 0 {
            let neg = self.constant < 0;
            let mag = self.constant.unsigned_abs();
            return (neg, if mag == 1 { String::new() } else { mag.to_string() });
        }
        if single {
            let q = self.params().next().unwrap();
            let c = self.coeffs[param_index(q).unwrap()];
            let mag = c.unsigned_abs();
            let lead = if mag == 1 { String::new() } else { mag.to_string() };
            return (c < 0, format!("{lead}{q}"));
        }
        (false, format!("({self})"))
    }
}

impl fmt::Display for ParamExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let sign = if c < 0 {
                "-"
            } else if first {
                ""
            } else {
                "+"
            };
            let mag = c.unsigned_abs();
            if mag == 1 {
                write!(f, "{sign}{}", PARAMS[i])?;
            } else {
                write!(f, "{sign}{mag}{}", PARAMS[i])?;
            }
            first = false;
        }
        if self.constant != 0 || first {
            let sign = if self.constant < 0 {
                "-"
            } else if first {
                ""
            } else {
                "+"
            };
            write!(f, "{sign}{}", self.constant.unsigned_abs())?;
        }
        Ok(())
    }
}

/// Values for the parameters; `w` falls back to the least primitive root.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Binding {
    values: [Option<u32>; 4],
}

impl Binding {
    pub fn new() -> Self {
        Binding::default()
    }

    /// Binds parameter `c`. Panics on a name outside `w, x, y, z`.
    pub fn with(mut self, c: char, v: u32) -> Self {
        self.set(c, v);
        self
    }

    pub fn set(&mut self, c: char, v: u32) {
        let i = param_index(c).unwrap_or_else(|| panic!("no parameter named {c}"));
        self.values[i] = Some(v);
    }

    pub fn explicit(&self, c: char) -> Option<u32> {
        param_index(c).and_then(|i| self.values[i])
    }

    pub fn get(&self, c: char, p: u32) -> Result<u32> {
        match (self.explicit(c), c) {
            (Some(v), _) => Ok(v % p),
            (None, 'w') => primitive_root(p),
            (None, _) => Err(Error::UnboundParameter(c)),
        }
    }
}

/// A term of a relator.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Term {
    /// Left-normed word in generator indices.
    Word(Vec<usize>),
    /// `p` times a generator.
    PMul(usize),
}

impl Term {
    /// Position in the lower p-central series: a word of length k, or 2 for `pg`.
    pub fn weight(&self) -> usize {
        match self {
            Term::Word(w) => w.len(),
            Term::PMul(_) => 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Relator {
    pub terms: Vec<(ParamExpr, Term)>,
}

impl Relator {
    pub fn params(&self) -> impl Iterator<Item = char> + '_ {
        self.terms.iter().flat_map(|(c, _)| c.params())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Presentation {
    pub generators: Vec<String>,
    pub relators: Vec<Relator>,
    /// Bound on the p-class of the quotient; `None` runs to stabilization.
    pub class_bound: Option<usize>,
}

impl Presentation {
    /// Parameters mentioned by some relator, in `w, x, y, z` order.
    pub fn params(&self) -> Vec<char> {
        let used: Vec<char> = self.relators.iter().flat_map(|r| r.params()).collect();
        PARAMS.iter().copied().filter(|q| used.contains(q)).collect()
    }

    /// Free parameters, i.e. all but `w`.
    pub fn free_params(&self) -> Vec<char> {
        self.params().into_iter().filter(|&q| q != 'w').collect()
    }

    pub fn with_class(mut self, c: usize) -> Self {
        self.class_bound = Some(c);
        self
    }

    fn write_term(&self, f: &mut fmt::Formatter<'_>, t: &Term) -> fmt::Result {
        match t {
            Term::PMul(g) => write!(f, "p{}", self.generators[*g]),
            Term::Word(w) => {
                let mut i = 0;
                while i < w.len() {
                    let mut j = i + 1;
                    while j < w.len() && w[j] == w[i] {
                        j += 1;
                    }
                    write!(f, "{}", self.generators[w[i]])?;
                    if j - i > 1 {
                        write!(f, "^{}", j - i)?;
                    }
                    i = j;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{} | ", self.generators.join(","))?;
        for (ri, r) in self.relators.iter().enumerate() {
            if ri > 0 {
                write!(f, ", ")?;
            }
            for (ti, (c, t)) in r.terms.iter().enumerate() {
                let (neg, mag) = c.signed_atom();
                match (ti, neg) {
                    (0, true) => write!(f, "-")?,
                    (0, false) => {}
                    (_, true) => write!(f, " - ")?,
                    (_, false) => write!(f, " + ")?,
                }
                write!(f, "{mag}")?;
                self.write_term(f, t)?;
            }
        }
        if let Some(c) = self.class_bound {
            let sep = if self.relators.is_empty() { "" } else { ", " };
            write!(f, "{sep}class {c}")?;
        }
        write!(f, ">")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn print_normal_form() {
        let s = "<a,b|bab-ba^4-ba^5,ba^3b,pa,pb,class 6>";
        let pres = parse(s).unwrap();
        assert_eq!(pres.to_string(), "<a,b | bab - ba^4 - ba^5, ba^3b, pa, pb, class 6>");
        let s = "<a,b | bab-ba^3-wba^5, pa - 3*x ba^6, 2pb>";
        let pres = parse(s).unwrap();
        assert_eq!(pres.to_string(), "<a,b | bab - ba^3 - wba^5, pa - 3xba^6, 2pb>");
        let s = "<a,b | (2x-z-1)ba, pa, pb>";
        assert_eq!(parse(s).unwrap().to_string(), s);
        assert_eq!(parse(&pres.to_string()).unwrap(), pres);
        assert_eq!(parse("<a,b|class 3>").unwrap().to_string(), "<a,b | class 3>");
    }

    #[test]
    fn expr_eval() {
        let e = ParamExpr::param('x').unwrap().neg();
        assert_eq!(e.eval(7, &Binding::new().with('x', 3)).unwrap(), 4);
        assert_eq!(e.eval(7, &Binding::new()), Err(Error::UnboundParameter('x')));
        assert_eq!(ParamExpr::param('w').unwrap().eval(7, &Binding::new()).unwrap(), 3);
        assert_eq!(ParamExpr::param('w').unwrap().eval(7, &Binding::new().with('w', 5)).unwrap(), 5);
        let sum = ParamExpr { constant: -1, coeffs: [0, 2, 0, -1] };
        assert_eq!(sum.to_string(), "2x-z-1");
    }
}
