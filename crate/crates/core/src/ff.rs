//! Finite fields F_{p^k}, elements packed into a `u64` as base-p digits
//! (coefficients of the polynomial basis, constant term first).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rand::Rng;

use crate::arith::{inv_mod, is_prime_u64, mul_mod, pow_mod};
use crate::error::{Error, Result};
use crate::ring::{Field, Ring};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Fq {
    p: u64,
    k: u32,
    q: u64,
    /// Monic modulus, coefficients low-first, length k + 1.
    modulus: Vec<u64>,
}

impl Fq {
    pub fn prime(p: u64) -> Self {
        assert!(is_prime_u64(p), "{p} is not prime");
        Fq { p, k: 1, q: p, modulus: vec![0, 1] }
    }

    /// F_{p^k} with the lexicographically first irreducible monic modulus.
    pub fn new(p: u64, k: u32) -> Result<Self> {
        if k == 1 {
            return Ok(Self::prime(p));
        }
        let q = checked_pow(p, k)?;
        let base = Fq::prime(p);
        // enumerate monic polynomials of degree k; constant term nonzero
        for idx in 0..q {
            let mut m = Vec::with_capacity(k as usize + 1);
            let mut t = idx;
            for _ in 0..k {
                m.push(t % p);
                t /= p;
            }
            if m[0] == 0 {
                continue;
            }
            m.push(1);
            if crate::poly::finite::is_irreducible_coeffs(&base, &m) {
                return Ok(Fq { p, k, q, modulus: m });
            }
        }
        unreachable!("irreducible polynomials exist in every degree")
    }

    /// F_p[t]/(modulus); the modulus must be monic and irreducible over F_p.
    pub fn with_modulus(p: u64, modulus: &[u64]) -> Result<Self> {
        let k = modulus.len() as u32 - 1;
        if *modulus.last().unwrap() != 1 {
            return Err(Error::InvalidInput("modulus must be monic".into()));
        }
        if k == 1 {
            return Ok(Self::prime(p));
        }
        let base = Fq::prime(p);
        let m: Vec<u64> = modulus.iter().map(|c| c % p).collect();
        if !crate::poly::finite::is_irreducible_coeffs(&base, &m) {
            return Err(Error::InvalidInput("modulus is reducible".into()));
        }
        Ok(Fq { p, k, q: checked_pow(p, k)?, modulus: m })
    }

    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn k(&self) -> u32 {
        self.k
    }
    pub fn order(&self) -> u64 {
        self.q
    }
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    /// The class of the polynomial generator t.
    pub fn generator(&self) -> u64 {
        if self.k == 1 {
            // t ≡ −m₀ in F_p[t]/(t + m₀)
            (self.p - self.modulus[0]) % self.p
        } else {
            self.p
        }
    }

    pub fn digits(&self, mut a: u64) -> Vec<u64> {
        let mut out = Vec::with_capacity(self.k as usize);
        for _ in 0..self.k {
            out.push(a % self.p);
            a /= self.p;
        }
        out
    }

    pub fn from_digits(&self, ds: &[u64]) -> u64 {
        ds.iter().rev().fold(0u64, |acc, d| acc * self.p + d % self.p)
    }

    pub fn from_u64(&self, n: u64) -> u64 {
        n % self.p
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        rng.gen_range(0..self.q)
    }

    pub fn elements(&self) -> impl Iterator<Item = u64> {
        0..self.q
    }

    /// Element of the prime field (digit vector of length ≤ 1).
    pub fn is_in_prime_field(&self, a: u64) -> bool {
        a < self.p
    }

    pub fn is_square(&self, a: u64) -> bool {
        a == 0 || self.p == 2 || self.pow(&a, (self.q - 1) / 2) == 1
    }

    /// Quadratic character: 0, 1 or −1.
    pub fn chi(&self, a: u64) -> i32 {
        if a == 0 {
            0
        } else if self.is_square(a) {
            1
        } else {
            -1
        }
    }

    /// Tonelli–Shanks over F_q (odd q).
    pub fn sqrt(&self, a: u64) -> Option<u64> {
        if a == 0 {
            return Some(0);
        }
        if !self.is_square(a) {
            return None;
        }
        if self.k == 1 {
            return crate::arith::sqrt_mod(a, self.p);
        }
        let qm1 = self.q - 1;
        let s = qm1.trailing_zeros();
        let t = qm1 >> s;
        let mut z = 2u64;
        while self.is_square(z) {
            z += 1;
        }
        let mut m = s;
        let mut c = self.pow(&z, t);
        let mut tt = self.pow(&a, t);
        let mut r = self.pow(&a, t.div_ceil(2));
        while tt != 1 {
            let mut i = 0;
            let mut x = tt;
            while x != 1 {
                x = self.mul(&x, &x);
                i += 1;
            }
            let b = self.pow(&c, 1u64 << (m - i - 1));
            m = i;
            c = self.mul(&b, &b);
            tt = self.mul(&tt, &c);
            r = self.mul(&r, &b);
        }
        Some(r)
    }

    fn mul_ext(&self, a: u64, b: u64) -> u64 {
        let k = self.k as usize;
        let p = self.p;
        let da = self.digits(a);
        let db = self.digits(b);
        let mut prod = vec![0u64; 2 * k - 1];
        for (i, x) in da.iter().enumerate() {
            if *x == 0 {
                continue;
            }
            for (j, y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + mul_mod(*x, *y, p)) % p;
            }
        }
        for i in (k..prod.len()).rev() {
            let c = prod[i];
            if c == 0 {
                continue;
            }
            for j in 0..k {
                let sub = mul_mod(c, self.modulus[j], p);
                prod[i - k + j] = (prod[i - k + j] + p - sub) % p;
            }
            prod[i] = 0;
        }
        self.from_digits(&prod[..k])
    }
}

fn checked_pow(p: u64, k: u32) -> Result<u64> {
    p.checked_pow(k)
        .filter(|q| *q < (1u64 << 62))
        .ok_or(Error::FieldTooLarge(format!("{p}^{k}")))
}

impl Ring for Fq {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn from_int(&self, n: &BigInt) -> u64 {
        n.mod_floor(&BigInt::from(self.p)).to_u64().unwrap()
    }
    fn from_i64(&self, n: i64) -> u64 {
        n.rem_euclid(self.p as i64) as u64
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        if self.k == 1 {
            let s = a + b;
            return if s >= self.p { s - self.p } else { s };
        }
        let p = self.p;
        let (mut x, mut y, mut out, mut place) = (*a, *b, 0u64, 1u64);
        for _ in 0..self.k {
            let d = (x % p + y % p) % p;
            out += d * place;
            place = place.wrapping_mul(p);
            x /= p;
            y /= p;
        }
        out
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        self.add(a, &self.neg(b))
    }
    fn neg(&self, a: &u64) -> u64 {
        if self.k == 1 {
            return if *a == 0 { 0 } else { self.p - a };
        }
        let p = self.p;
        let (mut x, mut out, mut place) = (*a, 0u64, 1u64);
        for _ in 0..self.k {
            let d = x % p;
            out += ((p - d) % p) * place;
            place = place.wrapping_mul(p);
            x /= p;
        }
        out
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        if self.k == 1 {
            mul_mod(*a, *b, self.p)
        } else {
            self.mul_ext(*a, *b)
        }
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn pow(&self, a: &u64, e: u64) -> u64 {
        if self.k == 1 {
            return pow_mod(*a, e, self.p);
        }
        let mut base = *a;
        let mut acc = 1u64;
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }
}

impl Field for Fq {
    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            return None;
        }
        if self.k == 1 {
            return inv_mod(*a, self.p);
        }
        Some(self.pow(a, self.q - 2))
    }
    fn characteristic(&self) -> u64 {
        self.p
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f25_axioms() {
        let f = Fq::new(5, 2).unwrap();
        assert_eq!(f.order(), 25);
        for a in 1..25 {
            let ai = f.inv(&a).unwrap();
            assert_eq!(f.mul(&a, &ai), 1);
            assert_eq!(f.add(&a, &f.neg(&a)), 0);
            let s = f.mul(&a, &a);
            assert_eq!(f.sqrt(s).map(|r| f.mul(&r, &r)), Some(s));
        }
        // every element of F_5 is a square in F_25
        for a in 1..5 {
            assert!(f.is_square(a));
        }
    }

    #[test]
    fn f_3_cubed() {
        let f = Fq::new(3, 3).unwrap();
        let g = f.generator();
        let mut seen = std::collections::HashSet::new();
        let mut x = 1u64;
        for _ in 0..26 {
            seen.insert(x);
            x = f.mul(&x, &g);
        }
        assert_eq!(x, 1);
        // the generator of a degree-3 extension need not be primitive, but
        // its order divides 26
        assert!(26 % seen.len() == 0);
    }
}
