//! Factorization over finite fields: squarefree decomposition,
//! distinct-degree and Cantor–Zassenhaus equal-degree splitting.

use num_bigint::BigInt;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Poly, PolyRing};
use crate::arith::factor_u64;
use crate::ff::Fq;
use crate::ring::Ring;

pub type FqPoly = Poly<u64>;

fn q_big(f: &Fq) -> BigInt {
    BigInt::from(f.order())
}

/// Rabin's irreducibility test.
pub fn is_irreducible(r: &PolyRing<Fq>, f: &FqPoly) -> bool {
    let Some(n) = f.degree() else { return false };
    if n == 0 {
        return false;
    }
    if n == 1 {
        return true;
    }
    let f = r.monic(f);
    let q = q_big(&r.base);
    let x = r.x();
    // successive Frobenius powers x^{q^i}
    let mut pows = vec![r.rem(&x, &f)];
    for i in 1..=n {
        let next = r.pow_mod(&pows[i - 1], &q, &f);
        pows.push(next);
    }
    if r.sub(&pows[n], &r.rem(&x, &f)).is_zero() {
        for (pr, _) in factor_u64(n as u64) {
            let h = r.sub(&pows[n / pr as usize], &x);
            if r.gcd(&f, &h).degree() != Some(0) {
                return false;
            }
        }
        true
    } else {
        false
    }
}

/// Irreducibility over F_p of a coefficient vector (used while building
/// extension fields).
pub fn is_irreducible_coeffs(fp: &Fq, coeffs: &[u64]) -> bool {
    let r = PolyRing::new(fp.clone());
    let f = r.from_coeffs(coeffs.iter().map(|c| c % fp.p()).collect());
    is_irreducible(&r, &f)
}

/// p-th root of a polynomial in x^p.
fn pth_root(r: &PolyRing<Fq>, f: &FqPoly) -> FqPoly {
    let p = r.base.p() as usize;
    let e = r.base.order() / r.base.p();
    let c = f
        .coeffs()
        .iter()
        .step_by(p)
        .map(|a| r.base.pow(a, e))
        .collect();
    r.from_coeffs(c)
}

/// Squarefree factorization: monic factors with multiplicities.
pub fn squarefree_factorization(r: &PolyRing<Fq>, f: &FqPoly) -> Vec<(FqPoly, usize)> {
    let mut out = Vec::new();
    sff_rec(r, &r.monic(f), 1, &mut out);
    out.sort_by(|a, b| a.1.cmp(&b.1));
    out
}

fn sff_rec(r: &PolyRing<Fq>, f: &FqPoly, mult: usize, out: &mut Vec<(FqPoly, usize)>) {
    if f.degree().unwrap_or(0) == 0 {
        return;
    }
    let p = r.base.p() as usize;
    let df = r.derivative(f);
    if df.is_zero() {
        sff_rec(r, &pth_root(r, f), mult * p, out);
        return;
    }
    let mut c = r.gcd(f, &df);
    let mut w = r.exact_div(f, &c).unwrap();
    let mut i = 1;
    while w.degree().unwrap_or(0) > 0 {
        let y = r.gcd(&w, &c);
        let z = r.exact_div(&w, &y).unwrap();
        if z.degree().unwrap_or(0) > 0 {
            push_mult(out, r.monic(&z), i * mult);
        }
        i += 1;
        w = y;
        c = r.exact_div(&c, &w).unwrap();
    }
    if c.degree().unwrap_or(0) > 0 {
        sff_rec(r, &pth_root(r, &c), mult * p, out);
    }
}

fn push_mult(out: &mut Vec<(FqPoly, usize)>, f: FqPoly, m: usize) {
    out.push((f, m));
}

/// Distinct-degree factorization of a monic squarefree polynomial:
/// pairs (product of all irreducible factors of degree d, d).
pub fn distinct_degree(r: &PolyRing<Fq>, f: &FqPoly) -> Vec<(FqPoly, usize)> {
    let mut out = Vec::new();
    let mut f = r.monic(f);
    let q = q_big(&r.base);
    let x = r.x();
    let mut h = r.rem(&x, &f);
    let mut d = 0;
    while f.degree().unwrap_or(0) >= 2 * (d + 1) {
        d += 1;
        h = r.pow_mod(&h, &q, &f);
        let g = r.gcd(&f, &r.sub(&h, &x));
        if g.degree().unwrap_or(0) > 0 {
            f = r.exact_div(&f, &g).unwrap();
            h = r.rem(&h, &f);
            out.push((g, d));
        }
    }
    if let Some(n) = f.degree() {
        if n > 0 {
            out.push((f, n));
        }
    }
    out
}

/// Split a monic squarefree product of degree-d irreducibles.
pub fn equal_degree<G: Rng>(r: &PolyRing<Fq>, f: &FqPoly, d: usize, rng: &mut G) -> Vec<FqPoly> {
    let n = f.degree().unwrap();
    if n == d {
        return vec![r.monic(f)];
    }
    assert!(r.base.p() != 2, "equal-degree splitting requires odd characteristic");
    let qd = q_big(&r.base).pow(d as u32);
    let e: BigInt = (qd - BigInt::one()) / 2;
    loop {
        let a = r.from_coeffs((0..n).map(|_| r.base.random(rng)).collect());
        if a.degree().unwrap_or(0) == 0 {
            continue;
        }
        let g = r.gcd(&a, f);
        let g = if g.degree().unwrap_or(0) > 0 {
            g
        } else {
            let b = r.pow_mod(&a, &e, f);
            r.gcd(&r.sub(&b, &r.one()), f)
        };
        let dg = g.degree().unwrap_or(0);
        if dg > 0 && dg < n {
            let h = r.exact_div(f, &g).unwrap();
            let mut out = equal_degree(r, &g, d, rng);
            out.extend(equal_degree(r, &r.monic(&h), d, rng));
            return out;
        }
    }
}

/// Complete factorization into monic irreducibles with multiplicities.
/// Output is sorted (degree, then coefficients) so it is seed-independent.
pub fn factor_mod(r: &PolyRing<Fq>, f: &FqPoly, seed: u64) -> Vec<(FqPoly, usize)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for (sf, m) in squarefree_factorization(r, f) {
        for (g, d) in distinct_degree(r, &sf) {
            for h in equal_degree(r, &g, d, &mut rng) {
                out.push((h, m));
            }
        }
    }
    sort_factors(&mut out);
    out
}

pub fn sort_factors(fs: &mut [(FqPoly, usize)]) {
    fs.sort_by(|a, b| {
        a.0.len()
            .cmp(&b.0.len())
            .then_with(|| a.0.coeffs().iter().rev().cmp(b.0.coeffs().iter().rev()))
            .then(a.1.cmp(&b.1))
    });
}

/// Distinct roots in F_q, sorted.
pub fn roots(r: &PolyRing<Fq>, f: &FqPoly, seed: u64) -> Vec<u64> {
    if f.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    let f = r.monic(f);
    let q = q_big(&r.base);
    let xq = r.pow_mod(&r.x(), &q, &f);
    let g = r.gcd(&f, &r.sub(&xq, &r.x()));
    let Some(dg) = g.degree() else { return Vec::new() };
    if dg == 0 {
        return Vec::new();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<u64> = if r.base.p() == 2 {
        r.base.elements().filter(|a| r.base.is_zero(&r.eval(&g, a))).collect()
    } else {
        equal_degree(r, &g, 1, &mut rng)
            .into_iter()
            .map(|h| r.base.neg(&h.coeffs()[0]))
            .collect()
    };
    out.sort_unstable();
    out
}

/// Degrees of the irreducible factors (with multiplicity), sorted.
pub fn factor_degrees(r: &PolyRing<Fq>, f: &FqPoly, seed: u64) -> Vec<usize> {
    let mut ds: Vec<usize> = factor_mod(r, f, seed)
        .into_iter()
        .flat_map(|(g, m)| std::iter::repeat(g.degree().unwrap()).take(m))
        .collect();
    ds.sort_unstable();
    ds
}

/// Distinct-degree pattern of a squarefree polynomial without splitting.
pub fn ddf_degrees(r: &PolyRing<Fq>, f: &FqPoly) -> Vec<usize> {
    let mut ds = Vec::new();
    for (g, d) in distinct_degree(r, f) {
        let n = g.degree().unwrap() / d;
        ds.extend(std::iter::repeat(d).take(n));
    }
    ds.sort_unstable();
    ds
}

pub fn fq_field_of(f: &Fq) -> PolyRing<Fq> {
    PolyRing::new(f.clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(p: u64) -> PolyRing<Fq> {
        PolyRing::new(Fq::prime(p))
    }

    #[test]
    fn x2_plus_1() {
        let r = ring(5);
        let f = r.from_i64s(&[1, 0, 1]);
        let fs = factor_mod(&r, &f, 1);
        assert_eq!(fs, vec![(r.from_i64s(&[2, 1]), 1), (r.from_i64s(&[3, 1]), 1)]);
        let r3 = ring(3);
        let g = r3.from_i64s(&[1, 0, 1]);
        assert_eq!(factor_mod(&r3, &g, 1).len(), 1);
        assert!(is_irreducible(&r3, &g));
    }

    #[test]
    fn repeated_and_pth_powers() {
        let r = ring(3);
        // (x+1)^3 (x^2+1)^2 x
        let a = r.pow(&r.from_i64s(&[1, 1]), 3);
        let b = r.pow(&r.from_i64s(&[1, 0, 1]), 2);
        let f = r.mul(&r.mul(&a, &b), &r.x());
        let fs = factor_mod(&r, &f, 7);
        let back = fs.iter().fold(r.one(), |acc, (g, m)| r.mul(&acc, &r.pow(g, *m as u64)));
        assert_eq!(back, f);
        assert_eq!(fs.len(), 3);
    }

    #[test]
    fn roots_over_extension() {
        let f25 = Fq::new(5, 2).unwrap();
        let r = PolyRing::new(f25.clone());
        // x^2 - 2 is irreducible over F5 but splits over F25
        let f = r.from_i64s(&[-2, 0, 1]);
        let rs = roots(&r, &f, 3);
        assert_eq!(rs.len(), 2);
        for x in rs {
            assert_eq!(f25.mul(&x, &x), 2);
        }
    }
}
