use super::{param_index, ParamExpr, Presentation, Relator, Term};
use crate::error::{Error, Result};

const RESERVED: [char; 5] = ['p', 'w', 'x', 'y', 'z'];

struct Parser {
    chars: Vec<char>,
    pos: usize,
    gens: Vec<char>,
}

fn syntax<T>(pos: usize, msg: impl Into<String>) -> Result<T> {
    Err(Error::Syntax { pos, msg: msg.into() })
}

impl Parser {
    fn new(text: &str) -> Self {
        let chars = text
            .chars()
            .map(|c| match c {
                '⟨' => '<',
                '⟩' => '>',
                '−' => '-',
                c => c,
            })
            .collect();
        Parser { chars, pos: 0, gens: Vec::new() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn expect(&mut self, c: char) -> Result<()> {
        match self.peek() {
            Some(d) if d == c => {
                self.pos += 1;
                Ok(())
            }
            Some(d) => syntax(self.pos, format!("expected '{c}', found '{d}'")),
            None => syntax(self.pos, format!("expected '{c}', found end of input")),
        }
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn int(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return syntax(start, "expected an integer");
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse().or_else(|_| syntax(start, "integer out of range"))
    }

    fn at_keyword(&mut self, kw: &str) -> bool {
        self.skip_ws();
        let k: Vec<char> = kw.chars().collect();
        self.chars[self.pos..].starts_with(&k)
            && !self.chars.get(self.pos + k.len()).is_some_and(|c| c.is_alphanumeric())
    }

    fn generators(&mut self) -> Result<()> {
        loop {
            let pos = self.pos;
            match self.peek() {
                Some(c) if c.is_alphabetic() => {
                    if RESERVED.contains(&c) {
                        return syntax(self.pos, format!("'{c}' is reserved and cannot name a generator"));
                    }
                    if self.gens.contains(&c) {
                        return syntax(self.pos, format!("generator '{c}' listed twice"));
                    }
                    self.gens.push(c);
                    self.pos += 1;
                }
                _ => return syntax(pos, "expected a generator name"),
            }
            if !self.eat(',') {
                return Ok(());
            }
        }
    }

    fn generator(&mut self) -> Result<usize> {
        let pos = self.pos;
        match self.peek() {
            Some(c) if c.is_alphabetic() => match self.gens.iter().position(|&g| g == c) {
                Some(i) => {
                    self.pos += 1;
                    Ok(i)
                }
                None => Err(Error::UnknownSymbol(c.to_string())),
            },
            _ => syntax(pos, "expected a generator"),
        }
    }

    fn param_here(&mut self) -> Option<char> {
        self.peek().filter(|&c| param_index(c).is_some())
    }

    /// `INT PARAM? | PARAM`, used inside parentheses.
    fn linear_atom(&mut self) -> Result<ParamExpr> {
        if let Some(q) = self.param_here() {
            self.pos += 1;
            return Ok(ParamExpr::param(q).unwrap());
        }
        let n = self.int()?;
        self.eat('*');
        if let Some(q) = self.param_here() {
            self.pos += 1;
            let mut e = ParamExpr::default();
            e.coeffs[param_index(q).unwrap()] = n;
            return Ok(e);
        }
        Ok(ParamExpr::constant(n))
    }

    fn linear_expr(&mut self) -> Result<ParamExpr> {
        let mut acc = ParamExpr::default();
        let mut neg = self.eat('-');
        if !neg {
            self.eat('+');
        }
        loop {
            let a = self.linear_atom()?;
            let a = if neg { a.neg() } else { a };
            acc.constant += a.constant;
            for i in 0..4 {
                acc.coeffs[i] += a.coeffs[i];
            }
            if self.eat('-') {
                neg = true;
            } else if self.eat('+') {
                neg = false;
            } else {
                return Ok(acc);
            }
        }
    }

    fn coefficient(&mut self) -> Result<ParamExpr> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let e = self.linear_expr()?;
                self.expect(')')?;
                self.eat('*');
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.int()?;
                self.eat('*');
                if let Some(q) = self.param_here() {
                    self.pos += 1;
                    self.eat('*');
                    let mut e = ParamExpr::default();
                    e.coeffs[param_index(q).unwrap()] = n;
                    return Ok(e);
                }
                Ok(ParamExpr::constant(n))
            }
            Some(c) if param_index(c).is_some() => {
                self.pos += 1;
                self.eat('*');
                Ok(ParamExpr::param(c).unwrap())
            }
            _ => Ok(ParamExpr::constant(1)),
        }
    }

    fn term(&mut self) -> Result<(ParamExpr, Term)> {
        let coeff = self.coefficient()?;
        let pos = self.pos;
        match self.peek() {
            Some('p') => {
                self.pos += 1;
                Ok((coeff, Term::PMul(self.generator()?)))
            }
            Some(c) if c.is_alphabetic() => {
                let mut word = Vec::new();
                while let Some(c) = self.peek() {
                    if !c.is_alphabetic() || RESERVED.contains(&c) || self.at_keyword("class") {
                        break;
                    }
                    let g = self.generator()?;
                    let mut k = 1;
                    if self.eat('^') {
                        let at = self.pos;
                        k = self.int()?;
                        if !(1..=256).contains(&k) {
                            return syntax(at, "exponent must lie in 1..=256");
                        }
                    }
                    word.extend(std::iter::repeat_n(g, k as usize));
                }
                if word.is_empty() {
                    return syntax(pos, "expected a word");
                }
                Ok((coeff, Term::Word(word)))
            }
            Some(c) => syntax(pos, format!("unexpected '{c}'")),
            None => syntax(pos, "unexpected end of input"),
        }
    }

    fn relator(&mut self) -> Result<Relator> {
        let mut terms = Vec::new();
        let mut neg = self.eat('-');
        if !neg {
            self.eat('+');
        }
        loop {
            let (c, t) = self.term()?;
            terms.push((if neg { c.neg() } else { c }, t));
            if self.eat('-') {
                neg = true;
            } else if self.eat('+') {
                neg = false;
            } else {
                return Ok(Relator { terms });
            }
        }
    }

    fn presentation(&mut self) -> Result<Presentation> {
        self.expect('<')?;
        self.generators()?;
        self.expect('|')?;
        let mut relators = Vec::new();
        let mut class_bound = None;
        loop {
            if self.at_keyword("class") {
                self.pos += "class".len();
                let at = self.pos;
                let c = self.int()?;
                if c < 1 {
                    return syntax(at, "class bound must be at least 1");
                }
                class_bound = Some(c as usize);
                break;
            }
            if relators.is_empty() && self.peek() == Some('>') {
                break;
            }
            relators.push(self.relator()?);
            if !self.eat(',') {
                break;
            }
        }
        self.expect('>')?;
        if let Some(c) = self.peek() {
            return syntax(self.pos, format!("trailing '{c}'"));
        }
        Ok(Presentation { generators: self.gens.iter().map(|c| c.to_string()).collect(), relators, class_bound })
    }
}

/// Parses a presentation such as `<a,b | bab, ba^3b-ba^5, pa, pb, class 6>`.
pub fn parse(text: &str) -> Result<Presentation> {
    Parser::new(text).presentation()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(s: &str) -> Relator {
        parse(&format!("<a,b | {s}>")).unwrap().relators.remove(0)
    }

    #[test]
    fn words_are_left_normed_runs() {
        let r = rel("bab");
        assert_eq!(r.terms, vec![(ParamExpr::constant(1), Term::Word(vec![1, 0, 1]))]);
        let r = rel("ba^3b");
        assert_eq!(r.terms[0].1, Term::Word(vec![1, 0, 0, 0, 1]));
    }

    #[test]
    fn signed_terms() {
        let r = rel("bab-ba^4-ba^5");
        let cs: Vec<i64> = r.terms.iter().map(|(c, _)| c.constant).collect();
        assert_eq!(cs, vec![1, -1, -1]);
        assert_eq!(r.terms[2].1.weight(), 6);
        assert_eq!(Term::PMul(0).weight(), 2);

        let r = rel("pa-xba^6");
        assert_eq!(r.terms[0], (ParamExpr::constant(1), Term::PMul(0)));
        assert_eq!(r.terms[1], (ParamExpr::param('x').unwrap().neg(), Term::Word(vec![1, 0, 0, 0, 0, 0, 0])));

        let r = rel("ba^3b-3ba^5");
        assert_eq!(r.terms[1].0, ParamExpr::constant(-3));
    }

    #[test]
    fn class_and_unicode() {
        let p = parse("⟨a,b | bab, ba³b, pa, pb, class 6⟩");
        assert!(p.is_err());
        let p = parse("⟨a, b | bab − ba^4, pa, pb, class 6⟩").unwrap();
        assert_eq!(p.class_bound, Some(6));
        assert_eq!(p.relators.len(), 3);
        assert_eq!(parse("<a,b|class 2>").unwrap().relators.len(), 0);
    }

    #[test]
    fn errors() {
        assert_eq!(parse("<a,b | bcb>"), Err(Error::UnknownSymbol("c".into())));
        assert!(matches!(parse("<a,b | bab"), Err(Error::Syntax { pos: 10, .. })));
        assert!(matches!(parse("<a,x | ab>"), Err(Error::Syntax { pos: 3, .. })));
        assert!(matches!(parse("<a,b | ba^0>"), Err(Error::Syntax { .. })));
        assert!(matches!(parse("<a,b | 3>"), Err(Error::Syntax { .. })));
        assert!(matches!(parse("<a,b | ba, class 0>"), Err(Error::Syntax { .. })));
        assert!(matches!(parse("<a,b | ba> junk"), Err(Error::Syntax { .. })));
    }
}
