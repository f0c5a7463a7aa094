//! Q and quadratic fields behind one interface, so that torsion and
//! modular polynomial algorithms run unchanged over either.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith;
use crate::error::{Error, Result};
use crate::ff::Fq;
use crate::poly::finite::roots;
use crate::poly::PolyRing;
use crate::qfield::{QuadElem, QuadField};
use crate::rational::{fmt_rational, Rationals};
use crate::ring::{Field, Ring};

/// A prime of good residue characteristic together with the reduction map
/// O → F_q, described by the image of the integral generator θ.
#[derive(Clone, Debug)]
pub struct ResiduePrime {
    pub p: u64,
    pub field: Fq,
    pub theta: u64,
    pub label: String,
}

impl ResiduePrime {
    pub fn norm(&self) -> u64 {
        self.field.order()
    }

    pub fn reduce<K: NumberField>(&self, k: &K, a: &K::Elem) -> Option<u64> {
        let f = &self.field;
        let coords = k.coords(a);
        let mut acc = 0u64;
        let mut tpow = 1u64;
        for c in coords {
            let den = f.from_int(c.denom());
            let num = f.from_int(c.numer());
            let v = f.mul(&num, &f.inv(&den)?);
            acc = f.add(&acc, &f.mul(&v, &tpow));
            tpow = f.mul(&tpow, &self.theta);
        }
        Some(acc)
    }
}

pub trait NumberField: Field + PartialEq + Debug {
    fn degree(&self) -> usize;
    fn name(&self) -> String;
    /// Coordinates in the integral basis (1) or (1, θ).
    fn coords(&self, a: &Self::Elem) -> Vec<BigRational>;
    fn from_coords(&self, c: &[BigInt]) -> Self::Elem;
    /// Monic minimal polynomial of θ (low-first), empty for Q.
    fn theta_minpoly(&self) -> Vec<BigInt>;
    /// Norm form Q(c) = N(c₀ + c₁θ) as (B, C) in c₀² + B·c₀c₁ + C·c₁².
    fn norm_form(&self) -> (i64, i64);
    fn norm(&self, a: &Self::Elem) -> BigRational;
    fn sqrt(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn square_class(&self, a: &Self::Elem) -> Result<Self::Elem>;
    fn from_rational(&self, q: &BigRational) -> Self::Elem;
    fn to_quad(&self, a: &Self::Elem) -> QuadElem;
    fn from_quad(&self, a: &QuadElem) -> Option<Self::Elem>;
    /// Primes dividing the discriminant are reported by `ramified`.
    fn ramified(&self, p: u64) -> bool;
    /// w² for a quadratic field Q(w), `None` for Q.
    fn quadratic_w2(&self) -> Option<i64> {
        None
    }

    fn is_square(&self, a: &Self::Elem) -> bool {
        self.sqrt(a).is_some()
    }

    fn denominator(&self, a: &Self::Elem) -> BigInt {
        self.coords(a).iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }

    fn is_integral(&self, a: &Self::Elem) -> bool {
        self.coords(a).iter().all(|c| c.is_integer())
    }

    /// Residue primes above p (split primes give two, inert one of degree 2).
    fn residue_primes(&self, p: u64) -> Vec<ResiduePrime> {
        let mp = self.theta_minpoly();
        if mp.is_empty() {
            return vec![ResiduePrime { p, field: Fq::prime(p), theta: 0, label: p.to_string() }];
        }
        let fp = Fq::prime(p);
        let r = PolyRing::new(fp.clone());
        let m = r.from_ints(&mp);
        let rs = roots(&r, &m, 0);
        if rs.is_empty() {
            let modulus: Vec<u64> = mp.iter().map(|c| fp.from_int(c)).collect();
            let field = Fq::with_modulus(p, &modulus).expect("inert modulus is irreducible");
            let theta = field.generator();
            return vec![ResiduePrime { p, field, theta, label: p.to_string() }];
        }
        rs.into_iter()
            .map(|t| ResiduePrime {
                p,
                field: fp.clone(),
                theta: t,
                label: format!("({p}, theta={t})"),
            })
            .collect()
    }

    /// θ images of degree-one primes above an unramified p.
    fn split_thetas(&self, p: u64) -> Vec<u64> {
        let mp = self.theta_minpoly();
        if mp.is_empty() {
            return vec![0];
        }
        if self.ramified(p) {
            return Vec::new();
        }
        let r = PolyRing::new(Fq::prime(p));
        roots(&r, &r.from_ints(&mp), 0)
    }

    fn fmt(&self, a: &Self::Elem) -> String {
        self.to_quad(a).to_string()
    }

    /// Upper bound for the squared absolute value under any complex
    /// embedding: exact norm for imaginary quadratic fields and Q.
    fn abs_sq(&self, a: &Self::Elem) -> f64 {
        let n = self.norm(a);
        n.abs().to_f64().unwrap_or(f64::MAX)
    }
}

impl NumberField for Rationals {
    fn degree(&self) -> usize {
        1
    }
    fn name(&self) -> String {
        "Q".into()
    }
    fn coords(&self, a: &BigRational) -> Vec<BigRational> {
        vec![a.clone()]
    }
    fn from_coords(&self, c: &[BigInt]) -> BigRational {
        BigRational::from_integer(c[0].clone())
    }
    fn theta_minpoly(&self) -> Vec<BigInt> {
        Vec::new()
    }
    fn norm_form(&self) -> (i64, i64) {
        (0, 0)
    }
    fn norm(&self, a: &BigRational) -> BigRational {
        a.clone()
    }
    fn abs_sq(&self, a: &BigRational) -> f64 {
        let x = a.to_f64().unwrap_or(f64::MAX);
        x * x
    }
    fn sqrt(&self, a: &BigRational) -> Option<BigRational> {
        arith::rational_sqrt(a)
    }
    /// ± product of distinct primes.
    fn square_class(&self, a: &BigRational) -> Result<BigRational> {
        if a.is_zero() {
            return Err(Error::ZeroInput);
        }
        let n = a.numer() * a.denom();
        let mut rep = if n.is_negative() { BigInt::from(-1) } else { BigInt::one() };
        for (p, e) in arith::factor(&n) {
            if e % 2 == 1 {
                rep *= p;
            }
        }
        Ok(BigRational::from_integer(rep))
    }
    fn from_rational(&self, q: &BigRational) -> BigRational {
        q.clone()
    }
    fn to_quad(&self, a: &BigRational) -> QuadElem {
        QuadElem::from_rational(a.clone())
    }
    fn from_quad(&self, a: &QuadElem) -> Option<BigRational> {
        a.b.is_zero().then(|| a.a.clone())
    }
    fn ramified(&self, _p: u64) -> bool {
        false
    }
    fn fmt(&self, a: &BigRational) -> String {
        fmt_rational(a)
    }
}

impl NumberField for QuadField {
    fn quadratic_w2(&self) -> Option<i64> {
        Some(self.w2())
    }
    fn degree(&self) -> usize {
        2
    }
    fn name(&self) -> String {
        QuadField::name(self)
    }
    fn coords(&self, a: &QuadElem) -> Vec<BigRational> {
        let (c0, c1) = self.basis_coords(a);
        vec![c0, c1]
    }
    fn from_coords(&self, c: &[BigInt]) -> QuadElem {
        self.from_basis_coords(&c[0], &c[1])
    }
    fn theta_minpoly(&self) -> Vec<BigInt> {
        QuadField::theta_minpoly(self).to_vec()
    }
    fn norm_form(&self) -> (i64, i64) {
        if self.half_integral() {
            (1, (1 - self.w2()) / 4)
        } else {
            (0, -self.w2())
        }
    }
    fn norm(&self, a: &QuadElem) -> BigRational {
        QuadField::norm(self, a)
    }
    fn sqrt(&self, a: &QuadElem) -> Option<QuadElem> {
        QuadField::sqrt(self, a)
    }
    fn square_class(&self, a: &QuadElem) -> Result<QuadElem> {
        QuadField::square_class(self, a)
    }
    fn from_rational(&self, q: &BigRational) -> QuadElem {
        QuadElem::from_rational(q.clone())
    }
    fn to_quad(&self, a: &QuadElem) -> QuadElem {
        a.clone()
    }
    fn from_quad(&self, a: &QuadElem) -> Option<QuadElem> {
        Some(a.clone())
    }
    fn ramified(&self, p: u64) -> bool {
        self.discriminant().unsigned_abs() % p == 0
    }
    fn abs_sq(&self, a: &QuadElem) -> f64 {
        if self.w2() < 0 {
            QuadField::norm(self, a).to_f64().unwrap_or(f64::MAX)
        } else {
            // real field: bound both embeddings by (|a| + |b|·√D)²
            let x = a.a.abs().to_f64().unwrap_or(f64::MAX)
                + a.b.abs().to_f64().unwrap_or(f64::MAX) * (self.w2() as f64).sqrt();
            x * x
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn residue_maps_are_homomorphisms() {
        let k = QuadField::imaginary(7).unwrap();
        let a: QuadElem = "3/2+5/2*w".parse().unwrap();
        let b: QuadElem = "-1/3+w".parse().unwrap();
        for p in [3u64, 5, 11, 13, 29] {
            for rp in k.residue_primes(p) {
                let f = &rp.field;
                let ra = rp.reduce(&k, &a);
                let rb = rp.reduce(&k, &b);
                let rab = rp.reduce(&k, &k.mul(&a, &b));
                if let (Some(x), Some(y), Some(z)) = (ra, rb, rab) {
                    assert_eq!(f.mul(&x, &y), z, "p = {p}");
                    assert_eq!(f.add(&x, &y), rp.reduce(&k, &k.add(&a, &b)).unwrap());
                }
            }
        }
        // w² = −7 maps to −7
        for rp in k.residue_primes(11) {
            let w = rp.reduce(&k, &k.w()).unwrap();
            assert_eq!(rp.field.mul(&w, &w), rp.field.from_i64(-7));
        }
    }

    #[test]
    fn rational_square_class() {
        let q = Rationals;
        assert_eq!(q.square_class(&crate::rational::q(-12, 5)).unwrap(), crate::rational::qi(-15));
    }
}
