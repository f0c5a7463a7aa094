//! Sparse multivariate polynomials over Q, parsed from plain text such as
//! `x_1x_3 - x_2^2 + 21x_2x_7` or `y^2 + (-x^4 - 1)y = 2x^6 - 8`.
//!
//! Variables are a letter optionally followed by `_` and digits; `x_7` and
//! `x7` name the same variable. Juxtaposition is multiplication.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::ring::Ring;

/// Monomial exponents (indexed like `vars`) ↦ coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MPoly {
    pub vars: Vec<String>,
    pub terms: BTreeMap<Vec<u32>, BigRational>,
}

impl MPoly {
    pub fn zero(vars: &[String]) -> Self {
        MPoly { vars: vars.to_vec(), terms: BTreeMap::new() }
    }

    pub fn constant(vars: &[String], c: BigRational) -> Self {
        let mut p = Self::zero(vars);
        if !c.is_zero() {
            p.terms.insert(vec![0; vars.len()], c);
        }
        p
    }

    fn var(vars: &[String], i: usize) -> Self {
        let mut e = vec![0; vars.len()];
        e[i] = 1;
        MPoly { vars: vars.to_vec(), terms: BTreeMap::from([(e, BigRational::one())]) }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            let s = out.terms.remove(e).unwrap_or_else(BigRational::zero) + c;
            if !s.is_zero() {
                out.terms.insert(e.clone(), s);
            }
        }
        out
    }

    pub fn neg(&self) -> Self {
        MPoly { vars: self.vars.clone(), terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = Self::zero(&self.vars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                let s = out.terms.remove(&e).unwrap_or_else(BigRational::zero) + c1 * c2;
                if !s.is_zero() {
                    out.terms.insert(e, s);
                }
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::constant(&self.vars, BigRational::one()), |acc, _| acc.mul(self))
    }

    /// Largest weighted degree of a monomial.
    pub fn weighted_degree(&self, weights: &[u32]) -> u32 {
        self.terms.keys().map(|e| e.iter().zip(weights).map(|(a, w)| a * w).sum()).max().unwrap_or(0)
    }

    /// Value at a point of R^n.
    pub fn eval<R: Ring>(&self, r: &R, embed: impl Fn(&BigRational) -> R::Elem, point: &[R::Elem]) -> R::Elem {
        self.terms.iter().fold(r.zero(), |acc, (e, c)| {
            let mono = e.iter().zip(point).fold(embed(c), |m, (&k, x)| r.mul(&m, &r.pow(x, k as u64)));
            r.add(&acc, &mono)
        })
    }

    /// Value of the weighted homogenisation at (point, z): each monomial of
    /// weighted degree w is multiplied by z^{D − w}.
    pub fn eval_weighted<R: Ring>(
        &self,
        r: &R,
        embed: impl Fn(&BigRational) -> R::Elem,
        weights: &[u32],
        point: &[R::Elem],
        z: &R::Elem,
    ) -> R::Elem {
        let d = self.weighted_degree(weights);
        self.terms.iter().fold(r.zero(), |acc, (e, c)| {
            let w: u32 = e.iter().zip(weights).map(|(a, w)| a * w).sum();
            let mono = e.iter().zip(point).fold(embed(c), |m, (&k, x)| r.mul(&m, &r.pow(x, k as u64)));
            r.add(&acc, &r.mul(&mono, &r.pow(z, (d - w) as u64)))
        })
    }

    /// Coefficients in `vars[i]` when every other exponent is zero.
    pub fn univariate(&self, i: usize) -> Result<Vec<BigRational>> {
        let mut out = Vec::new();
        for (e, c) in &self.terms {
            if e.iter().enumerate().any(|(j, &k)| j != i && k != 0) {
                return Err(Error::InvalidInput("polynomial is not univariate".into()));
            }
            let k = e[i] as usize;
            if out.len() <= k {
                out.resize(k + 1, BigRational::zero());
            }
            out[k] = c.clone();
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Var(String),
    Op(char),
}

fn canonical_var(name: &str) -> String {
    name.replace('_', "")
}

fn lex(s: &str) -> Result<Vec<Tok>> {
    let cs: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        if c.is_ascii_digit() {
            let st = i;
            while i < cs.len() && cs[i].is_ascii_digit() {
                i += 1;
            }
            let txt: String = cs[st..i].iter().collect();
            out.push(Tok::Num(txt.parse().unwrap()));
        } else if c.is_ascii_alphabetic() {
            let mut name = c.to_string();
            i += 1;
            let save = i;
            if i < cs.len() && cs[i] == '_' {
                i += 1;
            }
            if i < cs.len() && cs[i].is_ascii_digit() {
                while i < cs.len() && cs[i].is_ascii_digit() {
                    name.push(cs[i]);
                    i += 1;
                }
            } else {
                i = save;
            }
            out.push(Tok::Var(name));
        } else if "+-*/^()=".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character '{c}' in '{s}'")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    vars: &'a [String],
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<MPoly> {
        let neg = if self.eat('-') {
            true
        } else {
            self.eat('+');
            false
        };
        let mut acc = self.term()?;
        if neg {
            acc = acc.neg();
        }
        loop {
            if self.eat('+') {
                acc = acc.add(&self.term()?);
            } else if self.eat('-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<MPoly> {
        let mut acc = self.power()?;
        loop {
            if self.eat('*') {
                acc = acc.mul(&self.power()?);
            } else if self.eat('/') {
                let d = self.power()?;
                let c = d
                    .terms
                    .get(&vec![0; self.vars.len()])
                    .filter(|_| d.terms.len() == 1)
                    .cloned()
                    .ok_or_else(|| Error::Parse("division by a non-constant".into()))?;
                acc = acc.mul(&MPoly::constant(self.vars, BigRational::one() / c));
            } else if matches!(self.peek(), Some(Tok::Num(_)) | Some(Tok::Var(_)) | Some(Tok::Op('('))) {
                acc = acc.mul(&self.power()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn power(&mut self) -> Result<MPoly> {
        let base = self.primary()?;
        if self.eat('^') {
            match self.toks.get(self.pos).cloned() {
                Some(Tok::Num(n)) => {
                    self.pos += 1;
                    let e: u32 = n.try_into().map_err(|_| Error::Parse("exponent too large".into()))?;
                    Ok(base.pow(e))
                }
                _ => Err(Error::Parse("expected an integer exponent".into())),
            }
        } else {
            Ok(base)
        }
    }

    fn primary(&mut self) -> Result<MPoly> {
        match self.toks.get(self.pos).cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(MPoly::constant(self.vars, BigRational::from_integer(n)))
            }
            Some(Tok::Var(v)) => {
                self.pos += 1;
                let i = self
                    .vars
                    .iter()
                    .position(|w| canonical_var(w) == canonical_var(&v))
                    .ok_or_else(|| Error::Parse(format!("unknown variable '{v}'")))?;
                Ok(MPoly::var(self.vars, i))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(Error::Parse("missing ')'".into()));
                }
                Ok(e)
            }
            t => Err(Error::Parse(format!("unexpected token {t:?}"))),
        }
    }
}

/// Parse `lhs = rhs` (as lhs − rhs) or a bare expression.
pub fn parse_mpoly(s: &str, vars: &[String]) -> Result<MPoly> {
    let mut p = Parser { toks: lex(s)?, pos: 0, vars };
    let lhs = p.expr()?;
    let out = if p.eat('=') { lhs.sub(&p.expr()?) } else { lhs };
    if p.pos != p.toks.len() {
        return Err(Error::Parse(format!("trailing input in '{s}'")));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{qi, Rationals};

    fn vars(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn implicit_products_and_equations() {
        let v = vars(&["x", "y"]);
        let a = parse_mpoly("y^2 + xy = x^3 - 4x - 1", &v).unwrap();
        let b = parse_mpoly("y*y + x*y - x^3 + 4*x + 1", &v).unwrap();
        assert_eq!(a, b);
        let pt = [qi(2), qi(-1)];
        assert_eq!(a.eval(&Rationals, |c| c.clone(), &pt), qi(0));
    }

    #[test]
    fn subscripted_variables() {
        let v: Vec<String> = (1..=7).map(|i| format!("x_{i}")).collect();
        let a = parse_mpoly("x_1x_7 - 54x7^2", &v).unwrap();
        let b = parse_mpoly("x_1*x_7 - 54*x_7^2", &v).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.terms.len(), 2);
    }

    #[test]
    fn rational_coefficients_and_parentheses() {
        let v = vars(&["x", "t"]);
        let a = parse_mpoly("(1/3t^4 + 2/3t)x^3 - (t - 1)^2", &v).unwrap();
        let val = a.eval(&Rationals, |c| c.clone(), &[qi(1), qi(2)]);
        assert_eq!(val, qi(16) / qi(3) + qi(4) / qi(3) - qi(1));
    }
}
