use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul};

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::gfplin::gcd;

type Q = Ratio<i64>;

/// Polynomial in `p` with rational coefficients, lowest degree first.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Poly(Vec<Q>);

impl Poly {
    pub fn constant(c: Q) -> Self {
        Poly(vec![c]).trimmed()
    }

    pub fn p() -> Self {
        Poly(vec![Q::from(0), Q::from(1)])
    }

    fn trimmed(mut self) -> Self {
        while self.0.last().is_some_and(|c| *c == Q::from(0)) {
            self.0.pop();
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.0
    }

    pub fn eval(&self, p: i64) -> Q {
        self.0.iter().rev().fold(Q::from(0), |acc, c| acc * p + c)
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        let n = self.0.len().max(o.0.len());
        let z = Q::from(0);
        Poly((0..n).map(|i| *self.0.get(i).unwrap_or(&z) + *o.0.get(i).unwrap_or(&z)).collect()).trimmed()
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::default();
        }
        let mut out = vec![Q::from(0); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly(out).trimmed()
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (d, c) in self.0.iter().enumerate().rev() {
            if *c == Q::from(0) {
                continue;
            }
            let neg = *c < Q::from(0);
            let a = if neg { -c } else { *c };
            write!(
                f,
                "{}",
                if neg {
                    "-"
                } else if first {
                    ""
                } else {
                    "+"
                }
            )?;
            let unit = a == Q::from(1);
            if !unit || d == 0 {
                if a.is_integer() {
                    write!(f, "{}", a.numer())?;
                } else {
                    write!(f, "({}/{})", a.numer(), a.denom())?;
                }
            }
            match d {
                0 => {}
                1 => write!(f, "p")?,
                _ => write!(f, "p^{d}")?,
            }
            first = false;
        }
        Ok(())
    }
}

/// `base(p) + Σ_k poly_k(p)·gcd(p−1, k)`; the base is stored under `k = 1`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PorcFormula {
    terms: BTreeMap<u32, Poly>,
}

impl PorcFormula {
    pub fn from_poly(poly: Poly) -> Self {
        let mut terms = BTreeMap::new();
        if !poly.is_zero() {
            terms.insert(1, poly);
        }
        PorcFormula { terms }
    }

    pub fn gcd_term(k: u32, poly: Poly) -> Self {
        let mut terms = BTreeMap::new();
        if !poly.is_zero() {
            terms.insert(k, poly);
        }
        PorcFormula { terms }
    }

    /// The polynomial not attached to any gcd.
    pub fn base(&self) -> Poly {
        self.terms.get(&1).cloned().unwrap_or_default()
    }

    /// `k ↦ poly_k` for `k > 1`.
    pub fn gcd_terms(&self) -> impl Iterator<Item = (u32, &Poly)> + '_ {
        self.terms.iter().filter(|(&k, _)| k > 1).map(|(&k, v)| (k, v))
    }

    /// The value at `p`, which must be an integer.
    pub fn eval(&self, p: u32) -> Result<u64> {
        let mut acc = Q::from(0);
        for (&k, poly) in &self.terms {
            acc += poly.eval(p as i64) * gcd(p as u64 - 1, k as u64) as i64;
        }
        if !acc.is_integer() || acc < Q::from(0) {
            return Err(Error::Precondition(format!("formula {self} is not a count at p = {p}")));
        }
        Ok(*acc.numer() as u64)
    }

    /// Parses e.g. `4p^3+7p^2+(6p+11)gcd(p-1,3)+...` or `p^3-(p^2-p)/2`.
    pub fn parse(s: &str) -> Result<Self> {
        let chars: Vec<char> =
            s.chars().filter(|c| !c.is_whitespace()).map(|c| if c == '−' { '-' } else { c }).collect();
        let mut fp = FormulaParser { s: chars, pos: 0 };
        let f = fp.expr()?;
        if fp.pos != fp.s.len() {
            return fp.err("trailing input");
        }
        Ok(f)
    }

    fn scale_poly(&self, q: &Poly) -> PorcFormula {
        let terms = self.terms.iter().map(|(&k, v)| (k, v * q)).filter(|(_, v)| !v.is_zero()).collect();
        PorcFormula { terms }
    }

    fn product(&self, o: &PorcFormula) -> Result<PorcFormula> {
        let gcd_part = |f: &PorcFormula| f.terms.keys().any(|&k| k > 1);
        match (gcd_part(self), gcd_part(o)) {
            (true, true) => Err(Error::Precondition("product of two gcd terms".into())),
            (false, _) => Ok(o.scale_poly(&self.base())),
            (true, false) => Ok(self.scale_poly(&o.base())),
        }
    }
}

impl Add for &PorcFormula {
    type Output = PorcFormula;
    fn add(self, o: &PorcFormula) -> PorcFormula {
        let mut terms = self.terms.clone();
        for (&k, v) in &o.terms {
            let s = &terms.remove(&k).unwrap_or_default() + v;
            if !s.is_zero() {
                terms.insert(k, s);
            }
        }
        PorcFormula { terms }
    }
}

impl std::iter::Sum for PorcFormula {
    fn sum<I: Iterator<Item = PorcFormula>>(it: I) -> Self {
        it.fold(PorcFormula::default(), |a, b| &a + &b)
    }
}

impl fmt::Display for PorcFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&k, v) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            if k == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "({v})gcd(p-1,{k})")?;
            }
            first = false;
        }
        Ok(())
    }
}

struct FormulaParser {
    s: Vec<char>,
    pos: usize,
}

impl FormulaParser {
    fn err<T>(&self, msg: &str) -> Result<T> {
        Err(Error::Syntax { pos: self.pos, msg: msg.into() })
    }

    fn eat(&mut self, t: &str) -> bool {
        let t: Vec<char> = t.chars().collect();
        if self.s[self.pos..].starts_with(&t) {
            self.pos += t.len();
            true
        } else {
            false
        }
    }

    fn int(&mut self) -> Result<i64> {
        let start = self.pos;
        while self.s.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        let t: String = self.s[start..self.pos].iter().collect();
        t.parse().or_else(|_| self.err("expected an integer"))
    }

    fn expr(&mut self) -> Result<PorcFormula> {
        let mut acc = PorcFormula::default();
        let mut neg = self.eat("-");
        loop {
            let t = self.product()?;
            let t = if neg { t.scale_poly(&Poly::constant(Q::from(-1))) } else { t };
            acc = &acc + &t;
            if self.eat("-") {
                neg = true;
            } else if self.eat("+") {
                neg = false;
            } else {
                return Ok(acc);
            }
        }
    }

    fn product(&mut self) -> Result<PorcFormula> {
        let mut acc = self.atom()?;
        loop {
            if self.eat("/") {
                let d = self.int()?;
                if d == 0 {
                    return self.err("division by zero");
                }
                acc = acc.scale_poly(&Poly::constant(Q::new(1, d)));
            } else {
                self.eat("*");
                match self.s.get(self.pos) {
                    Some(c) if c.is_ascii_digit() || *c == 'p' || *c == '(' || *c == 'g' => {
                        let a = self.atom()?;
                        acc = acc.product(&a)?;
                    }
                    _ => return Ok(acc),
                }
            }
        }
    }

    fn atom(&mut self) -> Result<PorcFormula> {
        if self.eat("gcd(p-1,") {
            let k = self.int()?;
            if k < 1 || !self.eat(")") {
                return self.err("malformed gcd term");
            }
            return Ok(PorcFormula::gcd_term(k as u32, Poly::constant(Q::from(1))));
        }
        if self.eat("(") {
            let e = self.expr()?;
            if !self.eat(")") {
                return self.err("expected ')'");
            }
            return Ok(e);
        }
        if self.eat("p") {
            let mut poly = Poly::p();
            if self.eat("^") {
                let e = self.int()?;
                poly = (1..e).fold(Poly::p(), |acc, _| &acc * &Poly::p());
                if e == 0 {
                    poly = Poly::constant(Q::from(1));
                }
            }
            return Ok(PorcFormula::from_poly(poly));
        }
        if self.s.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
            let n = self.int()?;
            return Ok(PorcFormula::from_poly(Poly::constant(Q::from(n))));
        }
        self.err("expected a term")
    }
}

/// The total count for order `p^8` and maximal class, as stated.
pub const TOTAL_FORMULA: &str =
    "4p^3+7p^2+9p+6+(6p+11)gcd(p-1,3)+4gcd(p-1,5)+(p+2)gcd(p-1,7)+(p+3)gcd(p-1,8)+2gcd(p-1,9)+gcd(p-1,12)";

/// Descendant counts of order `p^8` for each parent (the `7.650` row counts
/// the whole family), as stated.
pub const PARENT_FORMULAS: [(&str, &str); 9] = [
    ("7.623", "8+8gcd(p-1,3)+2gcd(p-1,5)+gcd(p-1,8)"),
    ("7.627", "p+2gcd(p-1,3)+gcd(p-1,7)"),
    ("7.633", "4p+(p+1)gcd(p-1,3)+2gcd(p-1,9)+gcd(p-1,12)"),
    ("7.641", "5p-3+2p gcd(p-1,3)+2gcd(p-1,5)+(p+1)gcd(p-1,8)"),
    ("7.646", "p^2"),
    ("7.648", "4p^2-3p+1"),
    ("7.650", "2p^3+3p^2+p+3p gcd(p-1,3)+(p+1)gcd(p-1,7)+gcd(p-1,8)"),
    ("7.656", "p^3-(p^2-p)/2"),
    ("7.657", "p^3-(p^2-p)/2"),
];

pub fn total_formula() -> PorcFormula {
    PorcFormula::parse(TOTAL_FORMULA).expect("well-formed")
}

/// Number of nilpotent Lie rings of order `p^8` with maximal class.
pub fn total_count(p: u32) -> u64 {
    total_formula().eval(p).expect("integral for every p")
}

pub fn parent_porc(name: &str) -> Result<PorcFormula> {
    let (_, f) =
        PARENT_FORMULAS.iter().find(|(n, _)| *n == name).ok_or_else(|| Error::UnknownName(name.to_string()))?;
    PorcFormula::parse(f)
}

/// Expected number of order-`p^8` descendants of `name`.
pub fn parent_formula(name: &str, p: u32) -> Result<u64> {
    parent_porc(name)?.eval(p)
}

/// `true` iff the nine per-parent formulas add up to the total, term by term.
pub fn porc_sum_check() -> bool {
    let sum: PorcFormula = PARENT_FORMULAS.iter().map(|(n, _)| parent_porc(n).unwrap()).sum();
    sum == total_formula()
}
