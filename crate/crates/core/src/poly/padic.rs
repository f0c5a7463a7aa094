//! Reduction of integral elements modulo an ideal 𝔞 with O/𝔞 ≅ Z/m, and
//! reconstruction of small elements from residues; Hensel lifting over Z/p^k.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::{crt, hensel_root, modinv_big, sym_mod};
use crate::error::{Error, Result};
use crate::numfield::NumberField;
use crate::poly::zx;
use crate::poly::Poly;

/// A residue ring O/𝔞 ≅ Z/m described by the image `theta` of θ.
#[derive(Clone, Debug)]
pub struct Adic {
    pub m: BigInt,
    pub theta: BigInt,
    /// Lagrange-reduced basis of 𝔞 in (1, θ)-coordinates (degree 2 only).
    basis: Option<[[BigInt; 2]; 2]>,
    form: (i64, i64),
    degree: usize,
}

impl Adic {
    /// 𝔭^e for the degree-one prime 𝔭 = (p, θ − theta_p).
    pub fn prime_power<K: NumberField>(k: &K, p: u64, theta_p: u64, e: u32) -> Adic {
        let m = BigInt::from(p).pow(e);
        let theta = if k.degree() == 1 {
            BigInt::zero()
        } else {
            hensel_root(&k.theta_minpoly(), theta_p, p, e)
        };
        Adic::new(k, m, theta)
    }

    pub fn new<K: NumberField>(k: &K, m: BigInt, theta: BigInt) -> Adic {
        let mut a = Adic { m, theta, basis: None, form: k.norm_form(), degree: k.degree() };
        if a.degree == 2 {
            a.basis = Some(a.reduced_basis());
        }
        a
    }

    /// Combine with a coprime modulus via CRT.
    pub fn crt_with<K: NumberField>(&self, k: &K, other: &Adic) -> Adic {
        let m = &self.m * &other.m;
        let theta = if self.degree == 1 {
            BigInt::zero()
        } else {
            crt(&self.theta, &self.m, &other.theta, &other.m)
        };
        Adic::new(k, m, theta)
    }

    pub fn reduce<K: NumberField>(&self, k: &K, a: &K::Elem) -> Option<BigInt> {
        let mut acc = BigInt::zero();
        let mut tp = BigInt::one();
        for c in k.coords(a) {
            let inv = if c.denom().is_one() { BigInt::one() } else { modinv_big(c.denom(), &self.m)? };
            acc += c.numer() * inv * &tp;
            tp = (&tp * &self.theta) % &self.m;
        }
        Some(acc.mod_floor(&self.m))
    }

    pub fn reduce_poly<K: NumberField>(&self, k: &K, f: &Poly<K::Elem>) -> Option<Vec<BigInt>> {
        let c: Option<Vec<BigInt>> = f.coeffs().iter().map(|a| self.reduce(k, a)).collect();
        c.map(zx::trim)
    }

    fn q(&self, v: &[BigInt; 2]) -> BigInt {
        let (b, c) = self.form;
        &v[0] * &v[0] + BigInt::from(b) * &v[0] * &v[1] + BigInt::from(c) * &v[1] * &v[1]
    }

    /// Twice the bilinear form associated with the norm form.
    fn g(&self, u: &[BigInt; 2], v: &[BigInt; 2]) -> BigInt {
        let (b, c) = self.form;
        BigInt::from(2) * &u[0] * &v[0]
            + BigInt::from(b) * (&u[0] * &v[1] + &u[1] * &v[0])
            + BigInt::from(2 * c) * &u[1] * &v[1]
    }

    fn reduced_basis(&self) -> [[BigInt; 2]; 2] {
        let mut b1 = [self.m.clone(), BigInt::zero()];
        let mut b2 = [(-&self.theta).mod_floor(&self.m), BigInt::one()];
        if self.q(&b1) > self.q(&b2) {
            std::mem::swap(&mut b1, &mut b2);
        }
        loop {
            let n1 = self.g(&b1, &b1);
            let mu = round_div(&self.g(&b1, &b2), &n1);
            b2 = [&b2[0] - &mu * &b1[0], &b2[1] - &mu * &b1[1]];
            if self.q(&b2) < self.q(&b1) {
                std::mem::swap(&mut b1, &mut b2);
            } else {
                break;
            }
        }
        [b1, b2]
    }

    /// The element of least norm congruent to `c` (unique when its norm is
    /// below m/4).
    pub fn reconstruct<K: NumberField>(&self, k: &K, c: &BigInt) -> K::Elem {
        if self.degree == 1 {
            return k.from_coords(&[sym_mod(c, &self.m)]);
        }
        let [b1, b2] = self.basis.as_ref().unwrap();
        let t = [c.mod_floor(&self.m), BigInt::zero()];
        let det = &b1[0] * &b2[1] - &b1[1] * &b2[0];
        let alpha = round_div(&(&t[0] * &b2[1] - &t[1] * &b2[0]), &det);
        let beta = round_div(&(&b1[0] * &t[1] - &b1[1] * &t[0]), &det);
        let mut best: Option<([BigInt; 2], BigInt)> = None;
        for i in -2i64..=2 {
            for j in -2i64..=2 {
                let a = &alpha + i;
                let b = &beta + j;
                let v = [&t[0] - &a * &b1[0] - &b * &b2[0], &t[1] - &a * &b1[1] - &b * &b2[1]];
                let n = self.q(&v);
                if best.as_ref().map_or(true, |(_, bn)| n < *bn) {
                    best = Some((v, n));
                }
            }
        }
        let (v, _) = best.unwrap();
        k.from_coords(&v)
    }

    pub fn reconstruct_poly<K: NumberField>(&self, k: &K, c: &[BigInt]) -> Vec<K::Elem> {
        c.iter().map(|x| self.reconstruct(k, x)).collect()
    }
}

/// Round a/b to the nearest integer (b ≠ 0).
pub fn round_div(a: &BigInt, b: &BigInt) -> BigInt {
    let (a, b) = if b.is_negative() { (-a, -b) } else { (a.clone(), b.clone()) };
    (BigInt::from(2) * a + &b).div_floor(&(BigInt::from(2) * b))
}

/// Scale a polynomial over a number field to integral coefficients.
pub fn integral_scale<K: NumberField>(k: &K, f: &Poly<K::Elem>) -> (Poly<K::Elem>, BigInt) {
    let den = f.coeffs().iter().fold(BigInt::one(), |acc, c| acc.lcm(&k.denominator(c)));
    let s = k.from_rational(&BigRational::from_integer(den.clone()));
    let c = f.coeffs().iter().map(|a| k.mul(a, &s)).collect();
    (crate::poly::PolyRing::new(k.clone()).from_coeffs(c), den)
}

/// log₂ of an upper bound for |σ(c)| over all coefficients, and of the
/// 2-norm ‖σ(f)‖₂.
pub fn log2_norms<K: NumberField>(k: &K, f: &Poly<K::Elem>) -> (f64, f64) {
    let mut max = f64::NEG_INFINITY;
    let mut logs = Vec::new();
    for c in f.coeffs() {
        if k.is_zero(c) {
            continue;
        }
        let l = log2_abs_sq(k, c) / 2.0;
        max = max.max(l);
        logs.push(l);
    }
    let sum: f64 = logs.iter().map(|l| (2.0 * (l - max)).exp2()).sum();
    (max, max + sum.log2() / 2.0)
}

/// log₂ |σ(c)|² computed without overflow (exact norm for Q and imaginary
/// quadratic fields).
pub fn log2_abs_sq<K: NumberField>(k: &K, c: &K::Elem) -> f64 {
    let n = k.norm(c).abs();
    let l = crate::arith::bigint_to_f64_log2(n.numer()) - crate::arith::bigint_to_f64_log2(n.denom());
    if k.degree() == 1 {
        2.0 * l
    } else {
        l
    }
}

pub fn log2_binom(n: usize, k: usize) -> f64 {
    let k = k.min(n - k);
    (0..k).map(|i| ((n - i) as f64 / (i + 1) as f64).log2()).sum()
}

/// Lift a monic factorization f ≡ ∏ gᵢ (mod p) to mod p^k.
/// `f` has unit leading coefficient mod p; factors are returned monic,
/// with f ≡ lc(f)·∏ gᵢ (mod p^k).
pub fn hensel_lift_factors(f: &[BigInt], factors: &[Vec<BigInt>], p: u64, k: u32) -> Result<Vec<Vec<BigInt>>> {
    let pk = BigInt::from(p).pow(k);
    let lc = f.last().cloned().ok_or(Error::ZeroInput)?;
    let lcinv = modinv_big(&lc, &pk).ok_or(Error::InvalidInput("leading coefficient divisible by p".into()))?;
    let monic: Vec<BigInt> = zx::reduce(&f.iter().map(|c| c * &lcinv).collect::<Vec<_>>(), &pk);
    let mut out = Vec::with_capacity(factors.len());
    let mut rest = monic;
    let bp = BigInt::from(p);
    for (i, g) in factors.iter().enumerate() {
        if i + 1 == factors.len() {
            out.push(rest.clone());
            break;
        }
        let h0 = factors[i + 1..].iter().fold(vec![BigInt::one()], |acc, x| zx::mul_mod(&acc, x, &bp));
        let (gl, hl) = lift_two(&rest, g, &h0, p, k)?;
        out.push(gl);
        rest = hl;
    }
    Ok(out)
}

/// Quadratic Hensel lifting of f ≡ g·h (mod p), all monic, to mod p^k.
pub fn lift_two(f: &[BigInt], g: &[BigInt], h: &[BigInt], p: u64, k: u32) -> Result<(Vec<BigInt>, Vec<BigInt>)> {
    let bp = BigInt::from(p);
    let (s, t) = bezout_mod_p(g, h, p).ok_or(Error::NotCoprime)?;
    let target = BigInt::from(p).pow(k);
    let mut m = bp.clone();
    let (mut g, mut h, mut s, mut t) = (zx::reduce(g, &m), zx::reduce(h, &m), s, t);
    while m < target {
        let m2 = (&m * &m).min(target.clone());
        let e = zx::reduce(&zx::sub(f, &zx::mul(&g, &h)), &m2);
        let (q, r) = zx::div_rem_mod(&zx::mul(&s, &e), &h, &m2);
        let g2 = zx::reduce(&zx::add(&zx::add(&g, &zx::mul(&t, &e)), &zx::mul(&q, &g)), &m2);
        let h2 = zx::reduce(&zx::add(&h, &r), &m2);
        let b = zx::reduce(&zx::sub(&zx::add(&zx::mul(&s, &g2), &zx::mul(&t, &h2)), &[BigInt::one()]), &m2);
        let (c, d) = zx::div_rem_mod(&zx::mul(&s, &b), &h2, &m2);
        let s2 = zx::reduce(&zx::sub(&s, &d), &m2);
        let t2 = zx::reduce(&zx::sub(&zx::sub(&t, &zx::mul(&t, &b)), &zx::mul(&c, &g2)), &m2);
        g = g2;
        h = h2;
        s = s2;
        t = t2;
        m = m2;
    }
    Ok((g, h))
}

/// s·g + t·h ≡ 1 (mod p), deg s < deg h, deg t < deg g.
fn bezout_mod_p(g: &[BigInt], h: &[BigInt], p: u64) -> Option<(Vec<BigInt>, Vec<BigInt>)> {
    use crate::ff::Fq;
    use crate::poly::PolyRing;
    use crate::ring::Ring;
    let fp = Fq::prime(p);
    let r = PolyRing::new(fp.clone());
    let gp = r.from_ints(g);
    let hp = r.from_ints(h);
    let (d, s, t) = r.ext_gcd(&gp, &hp);
    if d.degree() != Some(0) {
        return None;
    }
    let conv = |x: &Poly<u64>| x.coeffs().iter().map(|c| BigInt::from(*c)).collect::<Vec<_>>();
    let _ = fp.one();
    Some((conv(&s), conv(&t)))
}

/// Newton-lift a simple root r of f mod p to mod p^k.
pub fn lift_root(f: &[BigInt], r: u64, p: u64, k: u32) -> BigInt {
    hensel_root(f, r, p, k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qfield::{QuadElem, QuadField};
    use crate::ring::Ring;

    #[test]
    fn reconstruct_small_elements() {
        let k = QuadField::imaginary(7).unwrap();
        let p = 1_000_003u64;
        let thetas = crate::numfield::NumberField::split_thetas(&k, p);
        let a = Adic::prime_power(&k, p, thetas[0], 3);
        for s in ["3/2+5/2*w", "-17+4*w", "1/2-1/2*w", "123456-7*w"] {
            let v: QuadElem = s.parse().unwrap();
            let r = a.reduce(&k, &v).unwrap();
            assert_eq!(a.reconstruct(&k, &r), v, "{s}");
        }
        let k2 = QuadField::imaginary(2).unwrap();
        let th = crate::numfield::NumberField::split_thetas(&k2, 11)[0];
        let a = Adic::prime_power(&k2, 11, th, 12);
        let v: QuadElem = "-31+17*w".parse().unwrap();
        let r = a.reduce(&k2, &v).unwrap();
        assert_eq!(a.reconstruct(&k2, &r), v);
        let _ = k2.one();
    }

    #[test]
    fn two_factor_lift() {
        // x² − 1 = (x − 1)(x + 1) over Z, lift mod 5³
        let f: Vec<BigInt> = [-1, 0, 1].iter().map(|x| BigInt::from(*x)).collect();
        let g: Vec<BigInt> = [4, 1].iter().map(|x| BigInt::from(*x)).collect();
        let h: Vec<BigInt> = [1, 1].iter().map(|x| BigInt::from(*x)).collect();
        let (gl, hl) = lift_two(&f, &g, &h, 5, 3).unwrap();
        assert_eq!(gl, vec![BigInt::from(124), BigInt::one()]);
        assert_eq!(hl, vec![BigInt::one(), BigInt::one()]);
    }
}
