//! Quadratic fields Q(w), w² = D squarefree, with the class-number-one
//! imaginary fields as the main use: arithmetic, square roots, square
//! classes, prime elements and factorization of integral elements.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::{self, rational_sqrt};
use crate::error::{Error, Result};
use crate::rational::{fmt_rational, parse_rational};
use crate::ring::{Field, Ring};

/// The seven non-cyclotomic imaginary quadratic fields of class number one.
pub const CLASS_NUMBER_ONE: [u64; 7] = [2, 7, 11, 19, 43, 67, 163];

/// a + b·w with rational coordinates.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct QuadElem {
    pub a: BigRational,
    pub b: BigRational,
}

impl QuadElem {
    pub fn new(a: BigRational, b: BigRational) -> Self {
        QuadElem { a, b }
    }

    pub fn from_rational(a: BigRational) -> Self {
        QuadElem { a, b: BigRational::zero() }
    }

    pub fn from_i64(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(n.into()))
    }

    pub fn ints(a: i64, b: i64) -> Self {
        QuadElem::new(BigRational::from_integer(a.into()), BigRational::from_integer(b.into()))
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn conj(&self) -> Self {
        QuadElem { a: self.a.clone(), b: -&self.b }
    }

    /// Least positive n with n·self having integer coordinates.
    pub fn coord_denominator(&self) -> BigInt {
        self.a.denom().lcm(self.b.denom())
    }
}

impl fmt::Display for QuadElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", fmt_rational(&self.a));
        }
        let mut s = String::new();
        if !self.a.is_zero() {
            s.push_str(&fmt_rational(&self.a));
        }
        let b = &self.b;
        if b.is_negative() {
            s.push('-');
        } else if !s.is_empty() {
            s.push('+');
        }
        let babs = b.abs();
        if !babs.is_one() {
            s.push_str(&fmt_rational(&babs));
            s.push('*');
        }
        s.push('w');
        f.write_str(&s)
    }
}

impl fmt::Debug for QuadElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for QuadElem {
    type Err = Error;

    /// Parses "a/b+c/e*w"-style text; terms optional, signs explicit.
    fn from_str(s: &str) -> Result<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let s = s.trim_matches(|c| c == '(' || c == ')');
        if s.is_empty() {
            return Err(Error::Parse("empty element".into()));
        }
        let bytes = s.as_bytes();
        let mut terms = Vec::new();
        let mut start = 0;
        for i in 1..bytes.len() {
            if (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'*' | b'/' | b'+' | b'-') {
                terms.push(&s[start..i]);
                start = i;
            }
        }
        terms.push(&s[start..]);
        let mut out = QuadElem::default();
        for t in terms {
            let (sign, body) = match t.as_bytes()[0] {
                b'-' => (-1, &t[1..]),
                b'+' => (1, &t[1..]),
                _ => (1, t),
            };
            let bad = || Error::Parse(format!("bad term '{t}' in '{s}'"));
            let (coef, is_w) = if body == "w" {
                (BigRational::one(), true)
            } else if let Some(c) = body.strip_suffix("*w") {
                (parse_rational(c).ok_or_else(bad)?, true)
            } else if let Some(rest) = body.strip_prefix("w/") {
                (BigRational::one() / parse_rational(rest).ok_or_else(bad)?, true)
            } else if let Some((c, rest)) = body.split_once("*w/") {
                (parse_rational(c).ok_or_else(bad)? / parse_rational(rest).ok_or_else(bad)?, true)
            } else {
                (parse_rational(body).ok_or_else(bad)?, false)
            };
            let coef = if sign < 0 { -coef } else { coef };
            if is_w {
                out.b += coef;
            } else {
                out.a += coef;
            }
        }
        Ok(out)
    }
}

impl Serialize for QuadElem {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for QuadElem {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Q(w) with w² = D (D squarefree, D ≠ 0, 1).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuadField {
    w2: i64,
}

impl fmt::Debug for QuadField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(sqrt({}))", self.w2)
    }
}

impl fmt::Display for QuadField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(sqrt({}))", self.w2)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PrimeKind {
    Split,
    Ramified,
    Inert,
}

/// A prime of O_K: a generator π for degree-one primes; p itself when inert.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimeElem {
    pub pi: QuadElem,
    pub p: u64,
    pub kind: PrimeKind,
}

impl PrimeElem {
    pub fn residue_degree(&self) -> u32 {
        if self.kind == PrimeKind::Inert {
            2
        } else {
            1
        }
    }

    pub fn norm(&self) -> u64 {
        self.p.pow(self.residue_degree())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub unit: i64,
    pub factors: Vec<(PrimeElem, u32)>,
}

fn is_squarefree_i64(n: i64) -> bool {
    arith::factor(&BigInt::from(n)).values().all(|e| *e == 1)
}

impl QuadField {
    /// One of the seven class-number-one fields Q(√−d).
    pub fn imaginary(d: u64) -> Result<Self> {
        if !CLASS_NUMBER_ONE.contains(&d) {
            return Err(Error::UnsupportedField(format!("d = {d} is not one of 2,7,11,19,43,67,163")));
        }
        Ok(QuadField { w2: -(d as i64) })
    }

    /// Any quadratic field Q(√D); used for auxiliary fields such as the
    /// coordinate fields of quadratic points.
    pub fn with_square(w2: i64) -> Result<Self> {
        if w2 == 0 || w2 == 1 || !is_squarefree_i64(w2) {
            return Err(Error::InvalidInput(format!("{w2} is not a squarefree non-square")));
        }
        Ok(QuadField { w2 })
    }

    /// w² as an integer.
    pub fn w2(&self) -> i64 {
        self.w2
    }

    /// d with K = Q(√−d).
    pub fn d(&self) -> i64 {
        -self.w2
    }

    pub fn is_class_number_one(&self) -> bool {
        self.w2 < 0 && CLASS_NUMBER_ONE.contains(&((-self.w2) as u64))
    }

    /// O_K = Z[(1+w)/2] rather than Z[w].
    pub fn half_integral(&self) -> bool {
        self.w2.rem_euclid(4) == 1
    }

    pub fn discriminant(&self) -> i64 {
        if self.half_integral() {
            self.w2
        } else {
            4 * self.w2
        }
    }

    pub fn w(&self) -> QuadElem {
        QuadElem::ints(0, 1)
    }

    pub fn name(&self) -> String {
        self.to_string()
    }

    pub fn norm(&self, v: &QuadElem) -> BigRational {
        &v.a * &v.a - &v.b * &v.b * BigRational::from_integer(self.w2.into())
    }

    pub fn trace(&self, v: &QuadElem) -> BigRational {
        &v.a * BigRational::from_integer(2.into())
    }

    /// Coordinates in the integral basis (1, θ), θ = w or (1+w)/2.
    pub fn basis_coords(&self, v: &QuadElem) -> (BigRational, BigRational) {
        if self.half_integral() {
            // a + b·w = (a − b) + 2b·θ
            (&v.a - &v.b, &v.b * BigRational::from_integer(2.into()))
        } else {
            (v.a.clone(), v.b.clone())
        }
    }

    pub fn from_basis_coords(&self, c0: &BigInt, c1: &BigInt) -> QuadElem {
        if self.half_integral() {
            let half = BigRational::new(c1.clone(), 2.into());
            QuadElem::new(BigRational::from_integer(c0.clone()) + &half, half)
        } else {
            QuadElem::new(BigRational::from_integer(c0.clone()), BigRational::from_integer(c1.clone()))
        }
    }

    /// θ = (1+w)/2 or w.
    pub fn theta(&self) -> QuadElem {
        self.from_basis_coords(&BigInt::zero(), &BigInt::one())
    }

    /// Monic minimal polynomial of θ, low-first: [c0, c1, 1].
    pub fn theta_minpoly(&self) -> [BigInt; 3] {
        if self.half_integral() {
            [BigInt::from((1 - self.w2) / 4), BigInt::from(-1), BigInt::one()]
        } else {
            [BigInt::from(-self.w2), BigInt::zero(), BigInt::one()]
        }
    }

    pub fn is_integral(&self, v: &QuadElem) -> bool {
        let (c0, c1) = self.basis_coords(v);
        c0.is_integer() && c1.is_integer()
    }

    /// Least positive integer n with n·v integral.
    pub fn denominator(&self, v: &QuadElem) -> BigInt {
        let (c0, c1) = self.basis_coords(v);
        c0.denom().lcm(c1.denom())
    }

    pub fn elem(&self, a: BigRational, b: BigRational) -> QuadElem {
        QuadElem::new(a, b)
    }

    pub fn parse(&self, s: &str) -> Result<QuadElem> {
        s.parse()
    }

    /// A square root of v in K, if one exists.
    pub fn sqrt(&self, v: &QuadElem) -> Option<QuadElem> {
        if v.is_zero() {
            return Some(QuadElem::default());
        }
        let two = BigRational::from_integer(2.into());
        let dd = BigRational::from_integer(self.w2.into());
        if v.b.is_zero() {
            if let Some(s) = rational_sqrt(&v.a) {
                return Some(QuadElem::from_rational(s));
            }
            return rational_sqrt(&(&v.a / &dd)).map(|t| QuadElem::new(BigRational::zero(), t));
        }
        let n = rational_sqrt(&self.norm(v))?;
        for cand in [(&v.a + &n) / &two, (&v.a - &n) / &two] {
            if let Some(s) = rational_sqrt(&cand) {
                if s.is_zero() {
                    continue;
                }
                let t = &v.b / (&two * &s);
                let r = QuadElem::new(s, t);
                if self.mul(&r, &r) == *v {
                    return Some(r);
                }
            }
        }
        None
    }

    pub fn is_square(&self, v: &QuadElem) -> bool {
        self.sqrt(v).is_some()
    }

    /// Normalize an associate: multiply by −1 so that a > 0, or a = 0 and b > 0.
    fn normalize_sign(v: &QuadElem) -> (QuadElem, i64) {
        if v.a.is_positive() || (v.a.is_zero() && v.b.is_positive()) {
            (v.clone(), 1)
        } else {
            (QuadElem::new(-&v.a, -&v.b), -1)
        }
    }

    fn div_exact_integral(&self, v: &QuadElem, pi: &QuadElem) -> Option<QuadElem> {
        let q = self.div(v, pi)?;
        self.is_integral(&q).then_some(q)
    }

    /// Prime element above the rational prime p (imaginary class-number-one
    /// fields only). Inert primes are returned with π = p.
    pub fn prime_above(&self, p: u64) -> PrimeElem {
        self.primes_above(p).remove(0)
    }

    /// All primes above p (two for split p, conjugates).
    pub fn primes_above(&self, p: u64) -> Vec<PrimeElem> {
        assert!(self.is_class_number_one(), "prime elements need a class-number-one field");
        assert!(arith::is_prime_u64(p), "{p} is not prime");
        let d = self.d() as u64;
        let disc = self.discriminant();
        if (disc.unsigned_abs()) % p == 0 {
            let pi = if p == d { self.w() } else {
                // d = 2, p = 2: π = w
                self.w()
            };
            return vec![PrimeElem { pi, p, kind: PrimeKind::Ramified }];
        }
        let split = if p == 2 {
            self.w2.rem_euclid(8) == 1
        } else {
            arith::legendre(self.w2, p) == 1
        };
        if !split {
            return vec![PrimeElem { pi: QuadElem::from_i64(p as i64), p, kind: PrimeKind::Inert }];
        }
        let (x, y) = if self.half_integral() {
            arith::norm_form_solve(d, 4 * p).expect("split prime has a norm-form solution")
        } else {
            arith::norm_form_solve(d, p).expect("split prime has a norm-form solution")
        };
        let scale = if self.half_integral() { 2 } else { 1 };
        let pi = QuadElem::new(
            BigRational::new(BigInt::from(x), BigInt::from(scale)),
            BigRational::new(BigInt::from(y), BigInt::from(scale)),
        );
        let (pi, _) = Self::normalize_sign(&pi);
        let (pibar, _) = Self::normalize_sign(&pi.conj());
        debug_assert_eq!(self.norm(&pi), BigRational::from_integer(p.into()));
        vec![
            PrimeElem { pi, p, kind: PrimeKind::Split },
            PrimeElem { pi: pibar, p, kind: PrimeKind::Split },
        ]
    }

    /// Factor an integral nonzero element into normalized primes and a unit.
    pub fn factor_integral(&self, v: &QuadElem) -> Result<Factorization> {
        if v.is_zero() {
            return Err(Error::ZeroInput);
        }
        if !self.is_integral(v) {
            return Err(Error::NonIntegralInput(v.to_string()));
        }
        let n = self.norm(v).to_integer();
        let mut rest = v.clone();
        let mut factors = Vec::new();
        for (p, _) in arith::factor(&n) {
            let p = p.to_u64().expect("prime factor of the norm fits in u64");
            for prime in self.primes_above(p) {
                let mut e = 0;
                while let Some(q) = self.div_exact_integral(&rest, &prime.pi) {
                    rest = q;
                    e += 1;
                }
                if e > 0 {
                    factors.push((prime, e));
                }
            }
        }
        // what remains is a unit
        let unit = if rest == QuadElem::from_i64(1) {
            1
        } else if rest == QuadElem::from_i64(-1) {
            -1
        } else {
            return Err(Error::Failed(format!("non-unit cofactor {rest} after factoring {v}")));
        };
        Ok(Factorization { unit, factors })
    }

    /// Canonical representative of v·(K*)²: ± a product of distinct
    /// normalized primes.
    pub fn square_class(&self, v: &QuadElem) -> Result<QuadElem> {
        if v.is_zero() {
            return Err(Error::ZeroInput);
        }
        if !self.is_class_number_one() {
            return Err(Error::UnsupportedField(self.name()));
        }
        let den = self.denominator(v);
        let scaled = self.mul(v, &QuadElem::from_rational(BigRational::from_integer(&den * &den)));
        let f = self.factor_integral(&scaled)?;
        let mut rep = QuadElem::from_i64(f.unit);
        for (prime, e) in &f.factors {
            if e % 2 == 1 {
                rep = self.mul(&rep, &prime.pi);
            }
        }
        Ok(rep)
    }

    /// True when u/v is a square.
    pub fn same_square_class(&self, u: &QuadElem, v: &QuadElem) -> bool {
        match self.div(u, v) {
            Some(q) => self.is_square(&q),
            None => false,
        }
    }

    pub fn int(&self, n: i64) -> QuadElem {
        QuadElem::from_i64(n)
    }
}

impl Ring for QuadField {
    type Elem = QuadElem;

    fn zero(&self) -> QuadElem {
        QuadElem::default()
    }
    fn one(&self) -> QuadElem {
        QuadElem::from_i64(1)
    }
    fn from_int(&self, n: &BigInt) -> QuadElem {
        QuadElem::from_rational(BigRational::from_integer(n.clone()))
    }
    fn add(&self, x: &QuadElem, y: &QuadElem) -> QuadElem {
        QuadElem::new(&x.a + &y.a, &x.b + &y.b)
    }
    fn sub(&self, x: &QuadElem, y: &QuadElem) -> QuadElem {
        QuadElem::new(&x.a - &y.a, &x.b - &y.b)
    }
    fn mul(&self, x: &QuadElem, y: &QuadElem) -> QuadElem {
        if x.b.is_zero() && y.b.is_zero() {
            return QuadElem::from_rational(&x.a * &y.a);
        }
        if y.b.is_zero() {
            return QuadElem::new(&x.a * &y.a, &x.b * &y.a);
        }
        if x.b.is_zero() {
            return QuadElem::new(&x.a * &y.a, &x.a * &y.b);
        }
        let bb = &x.b * &y.b;
        QuadElem::new(
            &x.a * &y.a + bb * BigRational::from_integer(self.w2.into()),
            &x.a * &y.b + &x.b * &y.a,
        )
    }
    fn neg(&self, x: &QuadElem) -> QuadElem {
        QuadElem::new(-&x.a, -&x.b)
    }
    fn is_zero(&self, x: &QuadElem) -> bool {
        x.is_zero()
    }
    fn fmt_elem(&self, a: &QuadElem) -> String {
        a.to_string()
    }
}

impl Field for QuadField {
    fn inv(&self, x: &QuadElem) -> Option<QuadElem> {
        if x.is_zero() {
            return None;
        }
        let n = self.norm(x);
        Some(QuadElem::new(&x.a / &n, -&x.b / &n))
    }
    fn characteristic(&self) -> u64 {
        0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(d: u64) -> QuadField {
        QuadField::imaginary(d).unwrap()
    }

    fn e(s: &str) -> QuadElem {
        s.parse().unwrap()
    }

    #[test]
    fn arithmetic_examples() {
        let k2 = k(2);
        assert_eq!(k2.mul(&e("1+w"), &e("1-w")), e("3"));
        assert_eq!(e("3+2*w").conj(), e("3-2*w"));
        assert_eq!(k2.div(&e("1+w"), &e("1+w")).unwrap(), e("1"));
        assert!(k2.div(&e("1"), &e("0")).is_none());
    }

    #[test]
    fn text_roundtrip() {
        for s in ["0", "3", "-1/2", "w", "-w", "3*w", "1/2-3/4*w", "-7/3+w", "5/2*w"] {
            assert_eq!(e(s).to_string(), s);
        }
        assert_eq!(e("w/2"), e("1/2*w"));
        assert_eq!(e(" -1 + 2 * w "), e("-1+2*w"));
    }

    #[test]
    fn square_roots() {
        let k2 = k(2);
        let r = k2.sqrt(&e("-2")).unwrap();
        assert_eq!(k2.mul(&r, &r), e("-2"));
        assert!(k2.sqrt(&e("-1")).is_none());
        let k7 = k(7);
        let v = k7.mul(&e("1+w"), &e("1+w"));
        let r = k7.sqrt(&v).unwrap();
        assert!(r == e("1+w") || r == e("-1-w"));
    }

    #[test]
    fn square_class_examples() {
        for d in CLASS_NUMBER_ONE {
            assert_eq!(k(d).square_class(&e("12")).unwrap(), e("3"), "d = {d}");
        }
        let k2 = k(2);
        assert_eq!(k2.square_class(&e("-8")).unwrap(), e("1"));
        assert_eq!(k2.square_class(&e("2")).unwrap(), e("-1"));
        assert_eq!(k2.square_class(&e("-3")).unwrap(), e("-3"));
        assert_eq!(k(11).square_class(&e("-3")).unwrap(), e("-3"));
        assert!(k2.square_class(&e("0")).is_err());
    }

    #[test]
    fn primes() {
        assert_eq!(k(2).prime_above(3).pi, e("1+w"));
        assert_eq!(k(7).prime_above(2).pi, e("1/2+1/2*w"));
        assert_eq!(k(2).prime_above(5).kind, PrimeKind::Inert);
        assert_eq!(k(2).prime_above(2).pi, e("w"));
        assert_eq!(k(11).prime_above(2).kind, PrimeKind::Inert);
    }

    #[test]
    fn factor_examples() {
        let k2 = k(2);
        let f = k2.factor_integral(&e("3")).unwrap();
        assert_eq!(f.unit, 1);
        assert_eq!(f.factors.len(), 2);
        let f = k2.factor_integral(&e("w")).unwrap();
        assert_eq!((f.unit, f.factors.len(), f.factors[0].1), (1, 1, 1));
        let f = k2.factor_integral(&e("-1")).unwrap();
        assert_eq!((f.unit, f.factors.len()), (-1, 0));
        assert!(matches!(k2.factor_integral(&e("1/2")), Err(Error::NonIntegralInput(_))));
    }

    #[test]
    fn integrality() {
        let k7 = k(7);
        assert!(k7.is_integral(&e("1/2+1/2*w")));
        assert!(!k7.is_integral(&e("1/2")));
        assert!(!k(2).is_integral(&e("1/2+1/2*w")));
    }
}
