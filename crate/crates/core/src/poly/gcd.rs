//! Multi-prime modular gcd over Q and quadratic fields.

use num_bigint::BigInt;
use num_integer::Integer;

use super::factor::{degree_one_primes, DEFAULT_PRIME_START};
use super::padic::{integral_scale, Adic};
use super::{Poly, PolyRing};
use crate::ff::Fq;
use crate::numfield::NumberField;
use crate::ring::Ring;

/// Monic gcd of f and g, via gcds at many degree-one primes combined by
/// CRT, reconstructed and verified by exact division.
pub fn modular_gcd<K: NumberField>(k: &K, f: &Poly<K::Elem>, g: &Poly<K::Elem>) -> Poly<K::Elem> {
    let r = PolyRing::new(k.clone());
    if f.is_zero() {
        return r.monic(g);
    }
    if g.is_zero() {
        return r.monic(f);
    }
    if f.degree() == Some(0) || g.degree() == Some(0) {
        return r.one();
    }
    let (ff, _) = integral_scale(k, f);
    let (gg, _) = integral_scale(k, g);
    // small inputs: plain Euclid is cheaper
    if ff.len().min(gg.len()) <= 3 {
        return r.gcd(&ff, &gg);
    }
    let lc = ff.lc().unwrap().clone();

    let mut acc: Option<(Adic, Vec<BigInt>)> = None;
    let mut best_deg = usize::MAX;
    let mut used = 0usize;
    let mut next_check = 1usize;
    let mut prev: Option<Poly<K::Elem>> = None;
    let mut last_p = 0u64;
    for (p, theta) in degree_one_primes(k, DEFAULT_PRIME_START) {
        // the two primes above a split p are not coprime as moduli of Z
        if p == last_p {
            continue;
        }
        let a = Adic::prime_power(k, p, theta, 1);
        let (Some(fz), Some(gz), Some(lz)) = (a.reduce_poly(k, &ff), a.reduce_poly(k, &gg), a.reduce(k, &lc)) else {
            continue;
        };
        if fz.len() != ff.len() || gz.len() != gg.len() || lz == BigInt::from(0) {
            continue;
        }
        last_p = p;
        let rp = PolyRing::new(Fq::prime(p));
        let h = rp.gcd(&rp.from_ints(&fz), &rp.from_ints(&gz));
        let d = h.degree().unwrap();
        if d == 0 {
            return r.one();
        }
        if d > best_deg {
            continue;
        }
        let image: Vec<BigInt> = {
            let lp = rp.base.from_int(&lz);
            rp.scale(&h, &lp).coeffs().iter().map(|c| BigInt::from(*c)).collect()
        };
        if d < best_deg {
            best_deg = d;
            acc = Some((a, image));
            used = 1;
            next_check = 1;
        } else {
            let (old, coeffs) = acc.take().unwrap();
            let combined = old.crt_with(k, &a);
            let merged = coeffs
                .iter()
                .zip(&image)
                .map(|(x, y)| crate::arith::crt(x, &old.m, y, &a.m))
                .collect();
            acc = Some((combined, merged));
            used += 1;
        }
        if used >= next_check {
            next_check = used + (used / 4).max(1);
            let (adic, coeffs) = acc.as_ref().unwrap();
            let cand = r.from_coeffs(
                coeffs.iter().map(|c| adic.reconstruct(k, &c.mod_floor(&adic.m))).collect(),
            );
            // exact division on an unstable reconstruction is very costly
            // (coefficient blow-up), so require the same candidate twice
            // and a clean image at an unused prime first
            if cand.degree() == Some(best_deg) {
                let cand = r.monic(&cand);
                if prev.as_ref() == Some(&cand)
                    && screen_divides(k, &cand, &ff)
                    && screen_divides(k, &cand, &gg)
                    && r.divides(&cand, &ff)
                    && r.divides(&cand, &gg)
                {
                    return cand;
                }
                prev = Some(cand);
            }
        }
        assert!(used < 4096, "modular gcd failed to converge");
    }
    unreachable!()
}

/// Does g divide f modulo a degree-one prime far from those used by the
/// CRT loop? (Vacuously true if g does not reduce there.)
fn screen_divides<K: NumberField>(k: &K, g: &Poly<K::Elem>, f: &Poly<K::Elem>) -> bool {
    for (p, theta) in degree_one_primes(k, SCREEN_PRIME_START).take(2) {
        let a = Adic::prime_power(k, p, theta, 1);
        let (Some(gz), Some(fz)) = (a.reduce_poly(k, g), a.reduce_poly(k, f)) else { continue };
        if gz.len() != g.len() {
            continue;
        }
        let rp = PolyRing::new(Fq::prime(p));
        if !rp.divides(&rp.from_ints(&gz), &rp.from_ints(&fz)) {
            return false;
        }
    }
    true
}

const SCREEN_PRIME_START: u64 = 3 << 20;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qfield::{QuadElem, QuadField};
    use crate::rational::Rationals;

    fn e(s: &str) -> QuadElem {
        s.parse().unwrap()
    }

    #[test]
    fn gcd_examples() {
        let q = Rationals;
        let r = PolyRing::new(q);
        let f = r.from_i64s(&[-1, 0, 1]);
        let g = r.from_i64s(&[-1, 1]);
        assert_eq!(modular_gcd(&q, &f, &g), g);
        let h = r.from_i64s(&[5, -3, 0, 2, 1]);
        assert_eq!(modular_gcd(&q, &h, &r.derivative(&h)), r.one());
    }

    #[test]
    fn gcd_over_k_with_common_factor() {
        let k = QuadField::imaginary(19).unwrap();
        let r = PolyRing::new(k);
        let h = r.from_coeffs(vec![e("1/2+3/2*w"), e("-7/3"), e("0"), e("1")]);
        let f = r.mul(&h, &r.from_coeffs(vec![e("11"), e("w"), e("2"), e("0"), e("5")]));
        let g = r.mul(&h, &r.from_coeffs(vec![e("-4+w"), e("1/2"), e("0"), e("1")]));
        assert_eq!(modular_gcd(&k, &f, &g), r.monic(&h));
    }
}
