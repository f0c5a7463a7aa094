//! Roots and factorization over Q and quadratic fields by lifting from a
//! single degree-one prime: factor mod 𝔭, Hensel-lift to 𝔭^k with k from
//! a coefficient bound, reconstruct small elements, verify exactly.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;

use super::finite::{ddf_degrees, factor_mod, roots as roots_mod_p};
use super::gcd::modular_gcd;
use super::padic::{hensel_lift_factors, integral_scale, lift_root, log2_abs_sq, log2_binom, log2_norms, Adic};
use super::{zx, Poly, PolyRing};
use crate::arith::{is_prime_u64, next_prime};
use crate::error::{Error, Result};
use crate::ff::Fq;
use crate::numfield::NumberField;
use crate::ring::Ring;

/// Exact factorization over K is offered up to this degree.
pub const EXACT_FACTOR_DEGREE: usize = 40;

/// Default starting point for the primes used by the modular algorithms.
pub const DEFAULT_PRIME_START: u64 = 1 << 20;

/// Degree-one primes (p, θ mod p) of K with p ≥ start.
pub fn degree_one_primes<K: NumberField>(k: &K, start: u64) -> impl Iterator<Item = (u64, u64)> + '_ {
    let mut p = if start <= 2 { 2 } else { start - 1 };
    let mut pending: Vec<(u64, u64)> = Vec::new();
    std::iter::from_fn(move || loop {
        if let Some(x) = pending.pop() {
            return Some(x);
        }
        p = next_prime(p);
        if p == 2 {
            continue;
        }
        let mut ts = k.split_thetas(p);
        ts.reverse();
        pending = ts.into_iter().map(|t| (p, t)).collect();
    })
}

/// Image of an integral polynomial at a degree-one prime, if its leading
/// coefficient survives and the image stays squarefree.
fn good_image<K: NumberField>(k: &K, f: &Poly<K::Elem>, p: u64, theta: u64) -> Option<(PolyRing<Fq>, Poly<u64>)> {
    let a = Adic::prime_power(k, p, theta, 1);
    let c = a.reduce_poly(k, f)?;
    if c.len() != f.len() {
        return None;
    }
    let r = PolyRing::new(Fq::prime(p));
    let fp = r.from_ints(&c);
    r.is_squarefree(&fp).then_some((r, fp))
}

/// False when f has no root modulo some degree-one prime, so no root in K.
fn roots_mod_screen<K: NumberField>(k: &K, f: &Poly<K::Elem>, prime_start: u64) -> bool {
    for (p, t) in degree_one_primes(k, prime_start).take(6) {
        let a = Adic::prime_power(k, p, t, 1);
        let Some(c) = a.reduce_poly(k, f) else { continue };
        if c.len() != f.len() {
            continue;
        }
        let r = PolyRing::new(Fq::prime(p));
        let fp = r.from_ints(&c);
        let xp = r.pow_mod(&r.x(), &BigInt::from(p), &fp);
        if r.gcd(&fp, &r.sub(&xp, &r.x())).degree() == Some(0) {
            return false;
        }
    }
    true
}

/// Precision exponent k with p^k > 2^(2·log2_bound + 4).
fn precision(p: u64, log2_bound: f64) -> u32 {
    let need = 2.0 * log2_bound.max(0.0) + 6.0;
    ((need / (p as f64).log2()).ceil() as u32).max(1)
}

fn squarefree_part<K: NumberField>(k: &K, f: &Poly<K::Elem>) -> Poly<K::Elem> {
    let r = PolyRing::new(k.clone());
    let df = r.derivative(f);
    let g = modular_gcd(k, f, &df);
    if g.degree() == Some(0) {
        r.monic(f)
    } else {
        r.monic(&r.exact_div(f, &g).expect("gcd divides f"))
    }
}

/// All roots of f lying in K, each verified by exact evaluation.
pub fn roots_in_field<K: NumberField>(k: &K, f: &Poly<K::Elem>) -> Vec<K::Elem> {
    roots_in_field_from(k, f, DEFAULT_PRIME_START)
}

/// As [`roots_in_field`] with the auxiliary primes taken from `prime_start` on.
pub fn roots_in_field_from<K: NumberField>(k: &K, f: &Poly<K::Elem>, prime_start: u64) -> Vec<K::Elem> {
    let r = PolyRing::new(k.clone());
    match f.degree() {
        None | Some(0) => return Vec::new(),
        Some(1) => {
            let c = f.coeffs();
            return vec![k.neg(&k.div(&c[0], &c[1]).unwrap())];
        }
        _ => {}
    }
    let (fz, _) = integral_scale(k, f);
    if !roots_mod_screen(k, &fz, prime_start) {
        return Vec::new();
    }
    // a squarefree image at a good prime proves f squarefree
    let sf = if degree_one_primes(k, prime_start).take(3).any(|(p, t)| good_image(k, &fz, p, t).is_some()) {
        r.monic(f)
    } else {
        squarefree_part(k, f)
    };
    let (big, _) = integral_scale(k, &sf);
    let lc = big.lc().unwrap().clone();
    let n = big.degree().unwrap();

    let (p, theta, rp, fp) = degree_one_primes(k, prime_start)
        .find_map(|(p, t)| good_image(k, &big, p, t).map(|(rp, fp)| (p, t, rp, fp)))
        .expect("some prime is good");
    let mod_roots = roots_mod_p(&rp, &fp, p);
    if mod_roots.is_empty() {
        return Vec::new();
    }

    // Cauchy bound on |σ(lc·α)|
    let l_lc = log2_abs_sq(k, &lc) / 2.0;
    let l_max = big
        .coeffs()
        .iter()
        .take(n)
        .filter(|c| !k.is_zero(c))
        .map(|c| log2_abs_sq(k, c) / 2.0)
        .fold(f64::NEG_INFINITY, f64::max);
    let bound = l_lc + (1.0 + (l_max - l_lc).exp2()).log2();
    let e = precision(p, bound);
    let adic = Adic::prime_power(k, p, theta, e);
    let fz = adic.reduce_poly(k, &big).unwrap();
    let lcz = adic.reduce(k, &lc).unwrap();
    let lc_inv = k.inv(&lc).unwrap();

    let mut out = Vec::new();
    for r0 in mod_roots {
        let lifted = lift_root(&fz, r0, p, e);
        let beta = adic.reconstruct(k, &(&lifted * &lcz).mod_floor(&adic.m));
        let alpha = k.mul(&beta, &lc_inv);
        if k.is_zero(&r.eval(&big, &alpha)) {
            out.push(alpha);
        }
    }
    out
}

/// Distinct roots with their K-multiplicities is not needed here; this
/// checks `f(α) = 0` over the field directly.
pub fn has_root<K: NumberField>(k: &K, f: &Poly<K::Elem>) -> bool {
    !roots_in_field(k, f).is_empty()
}

struct LiftedSetup<K: NumberField> {
    big: Poly<K::Elem>,
    lc: K::Elem,
    adic: Adic,
    lcz: BigInt,
    factors: Vec<Vec<BigInt>>,
    allowed: BTreeSet<usize>,
}

/// Pick a good prime with few modular factors and lift its factorization.
fn lifted_factorization<K: NumberField>(k: &K, f: &Poly<K::Elem>, prime_start: u64, max_deg: usize) -> LiftedSetup<K> {
    let (big, _) = integral_scale(k, f);
    let lc = big.lc().unwrap().clone();
    let n = big.degree().unwrap();

    let mut best: Option<(usize, u64, u64)> = None;
    let mut allowed: BTreeSet<usize> = (0..=n).collect();
    let mut tried = 0;
    for (p, t) in degree_one_primes(k, prime_start) {
        let Some((rp, fp)) = good_image(k, &big, p, t) else { continue };
        let ds = ddf_degrees(&rp, &fp);
        allowed = allowed.intersection(&subset_sums(&ds)).cloned().collect();
        if best.map_or(true, |(c, _, _)| ds.len() < c) {
            best = Some((ds.len(), p, t));
        }
        tried += 1;
        if tried >= 8 || ds.len() == 1 {
            break;
        }
    }
    let (_, p, theta) = best.unwrap();
    let rp = PolyRing::new(Fq::prime(p));
    let a1 = Adic::prime_power(k, p, theta, 1);
    let fp = rp.from_ints(&a1.reduce_poly(k, &big).unwrap());
    let mods: Vec<Vec<BigInt>> = factor_mod(&rp, &fp, p)
        .into_iter()
        .map(|(g, _)| g.coeffs().iter().map(|c| BigInt::from(*c)).collect())
        .collect();

    let (_, l2) = log2_norms(k, &big);
    let dmax = max_deg.min(n);
    let lb = (0..=dmax).map(|j| log2_binom(dmax.max(1), j.min(dmax))).fold(0.0, f64::max);
    let bound = lb + l2 + log2_abs_sq(k, &lc) / 2.0;
    let e = precision(p, bound);
    let adic = Adic::prime_power(k, p, theta, e);
    let fz = adic.reduce_poly(k, &big).unwrap();
    let factors = if mods.len() == 1 {
        let lcinv = crate::arith::modinv_big(fz.last().unwrap(), &adic.m).unwrap();
        vec![zx::reduce(&fz.iter().map(|c| c * &lcinv).collect::<Vec<_>>(), &adic.m)]
    } else {
        hensel_lift_factors(&fz, &mods, p, e).expect("coprime modular factors")
    };
    let lcz = adic.reduce(k, &lc).unwrap();
    LiftedSetup { big, lc, adic, lcz, factors, allowed }
}

fn subset_sums(ds: &[usize]) -> BTreeSet<usize> {
    let mut s = BTreeSet::from([0usize]);
    for d in ds {
        let add: Vec<usize> = s.iter().map(|x| x + d).collect();
        s.extend(add);
    }
    s
}

/// Try a subset of lifted factors as a true factor over K.
fn try_candidate<K: NumberField>(k: &K, setup: &LiftedSetup<K>, target: &Poly<K::Elem>, subset: &[usize]) -> Option<Poly<K::Elem>> {
    let r = PolyRing::new(k.clone());
    let m = &setup.adic.m;
    let mut prod = vec![setup.lcz.clone()];
    for &i in subset {
        prod = zx::mul_mod(&prod, &setup.factors[i], m);
    }
    let coeffs = setup.adic.reconstruct_poly(k, &prod);
    let g = r.from_coeffs(coeffs);
    // cheap filter: constant term divides lc·f₀ integrally
    let g0 = r.coeff(&g, 0);
    if !k.is_zero(&g0) {
        let q = k.div(&k.mul(&setup.lc, &r.coeff(&setup.big, 0)), &g0).unwrap();
        if !k.is_integral(&q) {
            return None;
        }
    }
    let gm = r.monic(&g);
    r.exact_div(target, &gm).map(|_| gm)
}

/// Irreducible factorization over K of a squarefree polynomial (monic
/// factors, sorted by degree then text).
pub fn factor_over_field<K: NumberField>(k: &K, f: &Poly<K::Elem>) -> Result<Vec<Poly<K::Elem>>> {
    factor_over_field_from(k, f, DEFAULT_PRIME_START)
}

pub fn factor_over_field_from<K: NumberField>(k: &K, f: &Poly<K::Elem>, prime_start: u64) -> Result<Vec<Poly<K::Elem>>> {
    let r = PolyRing::new(k.clone());
    let n = f.degree().ok_or(Error::ZeroInput)?;
    if n > EXACT_FACTOR_DEGREE {
        return Err(Error::DegreeTooLarge(n, EXACT_FACTOR_DEGREE));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    if modular_gcd(k, f, &r.derivative(f)).degree() != Some(0) {
        return Err(Error::NotSquarefree);
    }
    if n == 1 {
        return Ok(vec![r.monic(f)]);
    }
    let setup = lifted_factorization(k, f, prime_start, n);
    let mut remaining: Vec<usize> = (0..setup.factors.len()).collect();
    let mut target = r.monic(&setup.big);
    let mut found = Vec::new();
    let mut size = 1;
    while 2 * size <= remaining.len() {
        let mut hit = None;
        for combo in combinations(&remaining, size) {
            let deg: usize = combo.iter().map(|&i| setup.factors[i].len() - 1).sum();
            if !setup.allowed.contains(&deg) {
                continue;
            }
            if let Some(g) = try_candidate(k, &setup, &target, &combo) {
                hit = Some((combo, g));
                break;
            }
        }
        match hit {
            Some((combo, g)) => {
                target = r.exact_div(&target, &g).unwrap();
                remaining.retain(|i| !combo.contains(i));
                found.push(g);
            }
            None => size += 1,
        }
    }
    if target.degree().unwrap_or(0) > 0 {
        found.push(r.monic(&target));
    }
    sort_polys(k, &mut found);
    Ok(found)
}

/// All monic irreducible factors of degree ≤ `max_deg` (1 or 2) of a
/// squarefree f.
pub fn low_degree_factors<K: NumberField>(k: &K, f: &Poly<K::Elem>, max_deg: usize) -> Vec<Poly<K::Elem>> {
    assert!(max_deg <= 2);
    let r = PolyRing::new(k.clone());
    let Some(n) = f.degree() else { return Vec::new() };
    if n == 0 {
        return Vec::new();
    }
    if n <= max_deg {
        return factor_over_field(k, f).unwrap_or_default();
    }
    let sf = squarefree_part(k, f);
    let setup = lifted_factorization(k, &sf, DEFAULT_PRIME_START, max_deg);
    let target = r.monic(&setup.big);
    let lin: Vec<usize> = (0..setup.factors.len()).filter(|&i| setup.factors[i].len() == 2).collect();
    let quad: Vec<usize> = (0..setup.factors.len()).filter(|&i| setup.factors[i].len() == 3).collect();
    let mut out = Vec::new();
    let mut linear_hits = BTreeSet::new();
    for &i in &lin {
        if let Some(g) = try_candidate(k, &setup, &target, &[i]) {
            linear_hits.insert(i);
            out.push(g);
        }
    }
    if max_deg == 2 {
        for &i in &quad {
            if let Some(g) = try_candidate(k, &setup, &target, &[i]) {
                out.push(g);
            }
        }
        for (a, &i) in lin.iter().enumerate() {
            for &j in &lin[a + 1..] {
                if linear_hits.contains(&i) || linear_hits.contains(&j) {
                    continue;
                }
                if let Some(g) = try_candidate(k, &setup, &target, &[i, j]) {
                    out.push(g);
                }
            }
        }
    }
    sort_polys(k, &mut out);
    out
}

/// Every monic divisor of degree `d` of a squarefree f (not necessarily
/// irreducible). With `uniform`, only divisors whose modular image splits
/// into factors of one common degree are tried; kernels of cyclic
/// subgroups of prime order have this shape at every good prime.
pub fn divisors_of_degree<K: NumberField>(k: &K, f: &Poly<K::Elem>, d: usize, uniform: bool) -> Vec<Poly<K::Elem>> {
    let r = PolyRing::new(k.clone());
    let Some(n) = f.degree() else { return Vec::new() };
    if d == 0 || d > n {
        return Vec::new();
    }
    if d == n {
        return vec![r.monic(f)];
    }
    if !roots_mod_screen_degree(k, f, d) {
        return Vec::new();
    }
    let setup = lifted_factorization(k, f, DEFAULT_PRIME_START, d);
    if !setup.allowed.contains(&d) {
        return Vec::new();
    }
    let target = r.monic(&setup.big);
    let degs: Vec<usize> = setup.factors.iter().map(|g| g.len() - 1).collect();
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec<K: NumberField>(
        k: &K,
        setup: &LiftedSetup<K>,
        target: &Poly<K::Elem>,
        degs: &[usize],
        start: usize,
        left: usize,
        uniform: bool,
        cur: &mut Vec<usize>,
        out: &mut Vec<Poly<K::Elem>>,
    ) {
        if left == 0 {
            if let Some(g) = try_candidate(k, setup, target, cur) {
                out.push(g);
            }
            return;
        }
        for i in start..degs.len() {
            if degs[i] > left || (uniform && cur.first().is_some_and(|&j| degs[j] != degs[i])) {
                continue;
            }
            cur.push(i);
            rec(k, setup, target, degs, i + 1, left - degs[i], uniform, cur, out);
            cur.pop();
        }
    }
    rec(k, &setup, &target, &degs, 0, d, uniform, &mut cur, &mut out);
    sort_polys(k, &mut out);
    out
}

/// Cheap necessary condition: at a few good primes, some subset of the
/// modular factor degrees sums to `d`.
fn roots_mod_screen_degree<K: NumberField>(k: &K, f: &Poly<K::Elem>, d: usize) -> bool {
    let (big, _) = integral_scale(k, f);
    let mut seen = 0;
    for (p, t) in degree_one_primes(k, DEFAULT_PRIME_START) {
        let Some((rp, fp)) = good_image(k, &big, p, t) else { continue };
        if !subset_sums(&ddf_degrees(&rp, &fp)).contains(&d) {
            return false;
        }
        seen += 1;
        if seen >= 4 {
            return true;
        }
    }
    true
}

fn sort_polys<K: NumberField>(k: &K, fs: &mut [Poly<K::Elem>]) {
    let r = PolyRing::new(k.clone());
    fs.sort_by_cached_key(|g| (g.len(), r.fmt_elem(g)));
}

fn combinations(items: &[usize], size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(size);
    fn rec(items: &[usize], size: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            if items.len() - i < size - cur.len() {
                break;
            }
            cur.push(items[i]);
            rec(items, size, i + 1, cur, out);
            cur.pop();
        }
    }
    rec(items, size, 0, &mut cur, &mut out);
    out
}

/// Hensel lifting of a coprime factorization of an integer polynomial.
/// `factors` are monic mod p; the result satisfies f ≡ lc(f)·∏ gᵢ (mod p^k).
pub fn hensel_lift(f: &[BigInt], factors: &[Vec<BigInt>], p: u64, k: u32) -> Result<Vec<Vec<BigInt>>> {
    if !is_prime_u64(p) {
        return Err(Error::InvalidInput(format!("{p} is not prime")));
    }
    let rp = PolyRing::new(Fq::prime(p));
    let fp = rp.from_ints(f);
    if fp.degree() != Some(f.len() - 1) {
        return Err(Error::InvalidInput("leading coefficient divisible by p".into()));
    }
    if !rp.is_squarefree(&fp) {
        return Err(Error::NotSquarefree);
    }
    let gs: Vec<Poly<u64>> = factors.iter().map(|g| rp.from_ints(g)).collect();
    for (i, a) in gs.iter().enumerate() {
        for b in &gs[i + 1..] {
            if rp.gcd(a, b).degree() != Some(0) {
                return Err(Error::NotCoprime);
            }
        }
    }
    let prod = rp.product(&gs);
    if rp.monic(&prod) != rp.monic(&fp) {
        return Err(Error::InvalidInput("factors do not multiply to f mod p".into()));
    }
    if gs.len() == 1 {
        let pk = BigInt::from(p).pow(k);
        let inv = crate::arith::modinv_big(f.last().unwrap(), &pk).unwrap();
        return Ok(vec![zx::reduce(&f.iter().map(|c| c * &inv).collect::<Vec<_>>(), &pk)]);
    }
    let monic_inputs: Vec<Vec<BigInt>> =
        gs.iter().map(|g| rp.monic(g).coeffs().iter().map(|c| BigInt::from(*c)).collect()).collect();
    hensel_lift_factors(f, &monic_inputs, p, k)
}

/// Convenience: is `f` (nonconstant) irreducible over K?
pub fn is_irreducible_over<K: NumberField>(k: &K, f: &Poly<K::Elem>) -> Result<bool> {
    Ok(factor_over_field(k, f)?.len() == 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;
    use crate::qfield::{QuadElem, QuadField};
    use crate::rational::Rationals;

    fn e(s: &str) -> QuadElem {
        s.parse().unwrap()
    }

    #[test]
    fn roots_examples() {
        let k = QuadField::imaginary(2).unwrap();
        let r = PolyRing::new(k);
        let f = r.mul(&r.linear(&e("1+w")), &r.linear(&e("2")));
        let mut rs = roots_in_field(&k, &f);
        rs.sort_by_key(|x| x.to_string());
        assert_eq!(rs, vec![e("1+w"), e("2")]);
        assert!(roots_in_field(&k, &r.from_i64s(&[1, 0, 1])).is_empty());
        // repeated and non-integral roots
        let g = r.mul(&r.pow(&r.linear(&e("1/3-2/5*w")), 2), &r.from_i64s(&[1, 0, 1]));
        assert_eq!(roots_in_field(&k, &g), vec![e("1/3-2/5*w")]);
    }

    #[test]
    fn roots_half_integral() {
        let k = QuadField::imaginary(7).unwrap();
        let r = PolyRing::new(k);
        let f = r.mul(&r.linear(&e("1/2+1/2*w")), &r.linear(&e("-3/4*w")));
        let f = r.mul(&f, &r.from_i64s(&[5, 1, 0, 7]));
        let mut rs = roots_in_field(&k, &f);
        rs.sort_by_key(|x| x.to_string());
        assert_eq!(rs, vec![e("-3/4*w"), e("1/2+1/2*w")]);
    }

    #[test]
    fn factor_examples() {
        let k = QuadField::imaginary(2).unwrap();
        let r = PolyRing::new(k);
        let fs = factor_over_field(&k, &r.from_i64s(&[2, 0, 1])).unwrap();
        assert_eq!(fs.len(), 2);
        assert_eq!(factor_over_field(&k, &r.from_i64s(&[1, 0, 1])).unwrap().len(), 1);
        let a = r.from_coeffs(vec![e("1+w"), e("0"), e("3"), e("1")]);
        let b = r.from_coeffs(vec![e("-7"), e("w"), e("1")]);
        let c = r.linear(&e("1/2"));
        let f = r.mul(&r.mul(&a, &b), &c);
        let fs = factor_over_field(&k, &f).unwrap();
        let degs: Vec<usize> = fs.iter().map(|g| g.degree().unwrap()).collect();
        assert_eq!(degs, vec![1, 2, 3]);
        assert_eq!(r.product(&fs), r.monic(&f));
    }

    #[test]
    fn factor_over_q() {
        let q = Rationals;
        let r = PolyRing::new(q);
        // f33 over Q = (x² − x + 3)(sextic)
        let f = r.from_i64s(&[33, -44, 82, -40, 47, -8, 10, 0, 1]);
        let fs = factor_over_field(&q, &f).unwrap();
        assert_eq!(fs.iter().map(|g| g.degree().unwrap()).collect::<Vec<_>>(), vec![2, 6]);
        assert_eq!(fs[0], r.from_i64s(&[3, -1, 1]));
    }

    #[test]
    fn low_degree() {
        let k = QuadField::imaginary(11).unwrap();
        let r = PolyRing::new(k);
        let f = r.from_i64s(&[33, -44, 82, -40, 47, -8, 10, 0, 1]);
        let fs = low_degree_factors(&k, &f, 2);
        // x² − x + 3 splits over Q(√−11): two linear factors
        assert_eq!(fs.len(), 2);
        assert!(fs.iter().all(|g| g.degree() == Some(1)));
    }

    #[test]
    fn hensel_errors() {
        let f: Vec<BigInt> = [7, 0, 1].iter().map(|x| BigInt::from(*x)).collect();
        let g: Vec<BigInt> = [1, 0, 1].iter().map(|x| BigInt::from(*x)).collect();
        // x² + 7 ≡ x² + 1 mod 3 is irreducible: a single factor lifts trivially,
        // but a bogus split is rejected
        let bogus = vec![vec![BigInt::from(1), BigInt::one()], vec![BigInt::from(2), BigInt::one()]];
        assert!(hensel_lift(&f, &bogus, 3, 2).is_err());
        assert!(hensel_lift(&f, &[g], 3, 2).is_ok());
        let sq: Vec<BigInt> = [1, 2, 1].iter().map(|x| BigInt::from(*x)).collect();
        let lin = vec![BigInt::one(), BigInt::one()];
        assert_eq!(hensel_lift(&sq, &[lin.clone(), lin], 5, 2), Err(Error::NotSquarefree));
    }
}
