use std::collections::{HashMap, HashSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::gfplin::{gcd, pow_mod};

/// `var ≠ value`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Constraint {
    pub var: char,
    pub excluded: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ActingGroup {
    /// All of `GF(p)^*`.
    Units,
    /// `{±1}`.
    Signs,
}

/// `a` ranges over the acting group and moves parameter `i` to `x_i·a^e_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Action {
    pub group: ActingGroup,
    pub exponents: Vec<u32>,
}

/// Which parameter tuples give isomorphic rings: the constrained tuples,
/// identified along the orbits of `action` (all distinct when absent).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct EquivRelation {
    pub params: Vec<char>,
    pub constraints: Vec<Constraint>,
    pub action: Option<Action>,
}

impl EquivRelation {
    pub fn free(params: &[char]) -> Self {
        EquivRelation { params: params.to_vec(), ..Default::default() }
    }

    pub fn arity(&self) -> usize {
        self.params.len()
    }

    fn allowed(&self, i: usize, v: u32, p: u32) -> bool {
        let q = self.params[i];
        self.constraints.iter().all(|c| c.var != q || c.excluded % p != v)
    }

    fn exponent(&self, i: usize) -> u32 {
        self.action.as_ref().map_or(0, |a| a.exponents[i])
    }

    /// `log_w` of a generator of the acting group.
    fn group_step(&self, p: u32) -> u32 {
        match self.action.as_ref().map(|a| a.group) {
            Some(ActingGroup::Units) => 1,
            Some(ActingGroup::Signs) => (p - 1) / 2,
            None => p - 1,
        }
    }

    /// Constraints as text, e.g. `["x != 0", "y != 1"]`.
    pub fn constraint_strings(&self) -> Vec<String> {
        self.constraints.iter().map(|c| format!("{} != {}", c.var, c.excluded)).collect()
    }

    /// The `~` part of the comment, e.g. `[x,y] ~ [xa^7,ya^6]`.
    pub fn action_string(&self) -> Option<String> {
        let a = self.action.as_ref()?;
        let slot = |i: usize| -> String {
            let q = self.params[i];
            match (a.group, a.exponents[i]) {
                (_, 0) => q.to_string(),
                (ActingGroup::Signs, _) => format!("-{q}"),
                (ActingGroup::Units, 1) => format!("{q}a"),
                (ActingGroup::Units, e) => format!("{q}a^{e}"),
            }
        };
        let n = self.params.len();
        Some(if n == 1 {
            format!("{} ~ {}", self.params[0], slot(0))
        } else {
            let lhs: Vec<String> = self.params.iter().map(|q| q.to_string()).collect();
            let rhs: Vec<String> = (0..n).map(slot).collect();
            format!("[{}] ~ [{}]", lhs.join(","), rhs.join(","))
        })
    }
}

impl fmt::Display for EquivRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = self.constraint_strings();
        parts.extend(self.action_string());
        if parts.is_empty() && !self.params.is_empty() {
            let names: Vec<String> = self.params.iter().map(|q| q.to_string()).collect();
            parts.push(format!("all {}", names.join(",")));
        }
        write!(f, "{}", parts.join(", "))
    }
}

struct CommentParser<'a> {
    s: Vec<char>,
    pos: usize,
    params: &'a [char],
}

impl CommentParser<'_> {
    fn err<T>(&self, msg: &str) -> Result<T> {
        Err(Error::Syntax { pos: self.pos, msg: msg.into() })
    }

    fn peek(&mut self) -> Option<char> {
        while self.s.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn eat_str(&mut self, t: &str) -> bool {
        self.peek();
        let t: Vec<char> = t.chars().collect();
        if self.s[self.pos..].starts_with(&t) {
            self.pos += t.len();
            true
        } else {
            false
        }
    }

    /// Looking at `[` or at `v ~`.
    fn at_action(&mut self) -> bool {
        if self.peek() == Some('[') {
            return true;
        }
        let save = self.pos;
        let ok = self.var().is_ok() && matches!(self.peek(), Some('~' | '∼'));
        self.pos = save;
        ok
    }

    fn var(&mut self) -> Result<char> {
        match self.peek() {
            Some(c) if self.params.contains(&c) => {
                self.pos += 1;
                Ok(c)
            }
            Some(c) => Err(Error::UnknownSymbol(c.to_string())),
            None => self.err("expected a parameter"),
        }
    }

    fn int(&mut self) -> Result<u32> {
        self.peek();
        let start = self.pos;
        while self.s.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        let t: String = self.s[start..self.pos].iter().collect();
        t.parse().or_else(|_| self.err("expected an integer"))
    }

    fn var_list(&mut self) -> Result<Vec<char>> {
        let mut vs = vec![self.var()?];
        loop {
            let save = self.pos;
            if self.eat(',') {
                if let Some(c) = self.peek() {
                    if self.params.contains(&c) {
                        vs.push(self.var()?);
                        continue;
                    }
                }
                self.pos = save;
            }
            return Ok(vs);
        }
    }

    /// `x`, `-x`, `xa`, `xa^7`: `(var, negated, exponent)`.
    fn slot(&mut self) -> Result<(char, bool, u32)> {
        let neg = self.eat('-');
        let v = self.var()?;
        let mut e = 0;
        if self.eat('a') {
            e = if self.eat('^') { self.int()? } else { 1 };
        }
        Ok((v, neg, e))
    }

    fn action(&mut self, rel: &EquivRelation) -> Result<Action> {
        let bracket = self.eat('[');
        let lhs = if bracket { self.var_list()? } else { vec![self.var()?] };
        if bracket && !self.eat(']') {
            return self.err("expected ']'");
        }
        if !(self.eat('~') || self.eat('∼')) {
            return self.err("expected '~'");
        }
        if bracket && !self.eat('[') {
            return self.err("expected '['");
        }
        let mut slots = vec![self.slot()?];
        while bracket && self.eat(',') {
            slots.push(self.slot()?);
        }
        if bracket && !self.eat(']') {
            return self.err("expected ']'");
        }
        if lhs != rel.params || slots.len() != lhs.len() || slots.iter().zip(&lhs).any(|(s, &q)| s.0 != q) {
            return self.err("equivalence must list the parameters in order on both sides");
        }
        let signs = slots.iter().any(|s| s.1);
        if signs && slots.iter().any(|s| s.2 != 0) {
            return self.err("cannot mix sign changes with scaling");
        }
        Ok(if signs {
            Action { group: ActingGroup::Signs, exponents: slots.iter().map(|s| s.1 as u32).collect() }
        } else {
            Action { group: ActingGroup::Units, exponents: slots.iter().map(|s| s.2).collect() }
        })
    }
}

/// Parses a parameter comment such as `x,y != 0, [x,y] ~ [xa^7,ya^6]`,
/// `x != 1, all y,z` or `[x,y] ~ [x,-y]` for a line with parameters `params`.
pub fn parse_comment(comment: &str, params: &[char]) -> Result<EquivRelation> {
    let mut rel = EquivRelation::free(params);
    let mut cp = CommentParser { s: comment.chars().collect(), pos: 0, params };
    if cp.peek().is_none() {
        return Ok(rel);
    }
    loop {
        if cp.eat_str("all") {
            cp.var_list()?;
        } else if cp.at_action() {
            if rel.action.is_some() {
                return cp.err("more than one equivalence");
            }
            rel.action = Some(cp.action(&rel)?);
        } else {
            let vs = cp.var_list()?;
            if !(cp.eat_str("!=") || cp.eat('≠')) {
                return cp.err("expected '!='");
            }
            let v = cp.int()?;
            rel.constraints.extend(vs.into_iter().map(|var| Constraint { var, excluded: v }));
        }
        if cp.peek().is_none() {
            return Ok(rel);
        }
        if !cp.eat(',') {
            return cp.err("expected ','");
        }
    }
}

/// A complete irredundant list of orbit representatives of the constrained
/// parameter tuples, found by fixing the last parameter on a coset
/// transversal of the image of the acting group, then treating the earlier
/// ones under the stabilizer, and so on. Nonzero representatives of a scaled
/// parameter are powers `w^j` of the primitive root `w`, in increasing `j`;
/// unscaled parameters run through their allowed values in increasing order.
pub fn solve_equivalence(rel: &EquivRelation, p: u32, w: u32) -> Result<Vec<Vec<u32>>> {
    let n = rel.arity();
    if let Some(a) = &rel.action {
        if a.exponents.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: a.exponents.len() });
        }
    }
    let mut out = Vec::new();
    let mut partial = vec![0u32; n];
    solve_rec(rel, p, w, n, rel.group_step(p), &mut partial, &mut out)?;
    Ok(out)
}

fn solve_rec(
    rel: &EquivRelation,
    p: u32,
    w: u32,
    k: usize,
    h: u32,
    partial: &mut Vec<u32>,
    out: &mut Vec<Vec<u32>>,
) -> Result<()> {
    if k == 0 {
        out.push(partial.clone());
        return Ok(());
    }
    let i = k - 1;
    let q = p - 1;
    // the group {w^(hm)} moves x_i through the subgroup generated by w^g
    let g = gcd((h as u64 * rel.exponent(i) as u64) % q as u64, q as u64) as u32;
    if rel.allowed(i, 0, p) {
        partial[i] = 0;
        solve_rec(rel, p, w, i, h, partial, out)?;
    }
    if rel.exponent(i) == 0 {
        for v in 1..p {
            if rel.allowed(i, v, p) {
                partial[i] = v;
                solve_rec(rel, p, w, i, h, partial, out)?;
            }
        }
        return Ok(());
    }
    if g < q && (1..p).any(|v| !rel.allowed(i, v, p)) {
        return Err(Error::Precondition(format!("constraint on {} is not invariant under the action", rel.params[i])));
    }
    let h_stab = gcd(h as u64 * (q / g) as u64, q as u64) as u32;
    for j in 0..g {
        let v = pow_mod(w, j as u64, p);
        if rel.allowed(i, v, p) {
            partial[i] = v;
            solve_rec(rel, p, w, i, h_stab, partial, out)?;
        }
    }
    Ok(())
}

/// Every allowed tuple, in lexicographic order.
pub fn allowed_tuples(rel: &EquivRelation, p: u32) -> Vec<Vec<u32>> {
    let n = rel.arity();
    let mut out = vec![Vec::new()];
    for i in 0..n {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..p).filter(move |&v| rel.allowed(i, v, p)).map(move |v| {
                    let mut t = t.clone();
                    t.push(v);
                    t
                })
            })
            .collect();
    }
    out
}

/// Orbits of the allowed tuples, by exhaustive enumeration.
pub fn brute_force_orbits(rel: &EquivRelation, p: u32) -> Vec<Vec<Vec<u32>>> {
    let elems: Vec<u32> = match rel.action.as_ref().map(|a| a.group) {
        Some(ActingGroup::Units) => (1..p).collect(),
        Some(ActingGroup::Signs) => vec![1, p - 1],
        None => vec![1],
    };
    let mut seen = HashSet::new();
    let mut orbits = Vec::new();
    for t in allowed_tuples(rel, p) {
        if seen.contains(&t) {
            continue;
        }
        let mut orb: Vec<Vec<u32>> = elems
            .iter()
            .map(|&a| {
                t.iter()
                    .enumerate()
                    .map(|(i, &x)| (x as u64 * pow_mod(a, rel.exponent(i) as u64, p) as u64 % p as u64) as u32)
                    .collect()
            })
            .collect();
        orb.sort();
        orb.dedup();
        seen.extend(orb.iter().cloned());
        orbits.push(orb);
    }
    orbits
}

/// `true` iff `reps` meets every orbit exactly once.
pub fn check_representatives(rel: &EquivRelation, p: u32, reps: &[Vec<u32>]) -> bool {
    let orbits = brute_force_orbits(rel, p);
    if reps.len() != orbits.len() {
        return false;
    }
    let index: HashMap<&[u32], usize> =
        orbits.iter().enumerate().flat_map(|(i, o)| o.iter().map(move |t| (t.as_slice(), i))).collect();
    let mut hit = vec![false; orbits.len()];
    for r in reps {
        match index.get(r.as_slice()) {
            Some(&i) if !hit[i] => hit[i] = true,
            _ => return false,
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gfplin::primitive_root;

    fn solve(comment: &str, params: &[char], p: u32) -> Vec<Vec<u32>> {
        let rel = parse_comment(comment, params).unwrap();
        solve_equivalence(&rel, p, primitive_root(p).unwrap()).unwrap()
    }

    #[test]
    fn single_parameter_transversals() {
        assert_eq!(solve("x != 0, x ~ xa^6", &['x'], 5), vec![vec![1], vec![2]]);
        let reps: Vec<u32> = solve("x ≠ 0, x ∼ xa^6", &['x'], 7).into_iter().map(|t| t[0]).collect();
        assert_eq!(reps, vec![1, 3, 2, 6, 4, 5]);
        assert_eq!(solve("x != 0", &['x'], 5).len(), 4);
        assert_eq!(solve("all x", &['x'], 5).len(), 5);
        assert_eq!(solve("", &[], 5), vec![Vec::<u32>::new()]);
    }

    #[test]
    fn two_stage() {
        let rel = parse_comment("x,y != 0, [x,y] ~ [xa^7,ya^6]", &['x', 'y']).unwrap();
        let reps = solve_equivalence(&rel, 5, 2).unwrap();
        assert_eq!(reps.len(), 4);
        assert!(check_representatives(&rel, 5, &reps));
        let ys: Vec<u32> = reps.iter().map(|t| t[1]).collect();
        assert_eq!(ys, vec![1, 1, 2, 2]);
    }

    #[test]
    fn signs_and_fixed_slots() {
        let rel = parse_comment("[x,y] ~ [x,-y]", &['x', 'y']).unwrap();
        assert_eq!(rel.action.as_ref().unwrap().group, ActingGroup::Signs);
        assert_eq!(solve_equivalence(&rel, 5, 2).unwrap().len(), 5 * 3);
        let rel = parse_comment("x != 1, y != 0, [x,y] ~ [x,ya^7]", &['x', 'y']).unwrap();
        assert_eq!(rel.constraints.len(), 2);
        assert_eq!(solve_equivalence(&rel, 5, 2).unwrap().len(), 4);
        let rel = parse_comment("x != 1, all y,z", &['x', 'y', 'z']).unwrap();
        assert!(rel.action.is_none());
        assert_eq!(solve_equivalence(&rel, 5, 2).unwrap().len(), 100);
    }

    #[test]
    fn round_trip_text() {
        for (c, ps) in [
            ("x != 0, x ~ xa^6", &['x'][..]),
            ("x != 0, y != 0, [x,y] ~ [xa^12,ya^9]", &['x', 'y'][..]),
            ("x != 0, [x,y,z] ~ [-x,y,z]", &['x', 'y', 'z'][..]),
            ("all x,y", &['x', 'y'][..]),
        ] {
            let rel = parse_comment(c, ps).unwrap();
            assert_eq!(rel.to_string(), c);
            assert_eq!(parse_comment(&rel.to_string(), ps).unwrap(), rel);
        }
    }

    #[test]
    fn comment_errors() {
        assert!(parse_comment("[x,y] ~ [ya,x]", &['x', 'y']).is_err());
        assert!(parse_comment("[x,y] ~ [-xa,y]", &['x', 'y']).is_err());
        assert_eq!(parse_comment("q != 0", &['x']), Err(Error::UnknownSymbol("q".into())));
        let rel = parse_comment("x != 1, x ~ xa^2", &['x']).unwrap();
        assert!(matches!(solve_equivalence(&rel, 7, 3), Err(Error::Precondition(_))));
    }
}
