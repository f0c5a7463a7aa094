//! Torsion subgroups over K and over quadratic extensions K(√d).
//!
//! Strategy: bound |E(K)_tor| by reducing at good primes of odd residue
//! characteristic, then realize each ℓ-primary part exactly from roots of
//! division polynomials and ℓ-division, and certify generators.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::arith::{factor_u64, odd_primes_from};
use crate::elliptic::{CurvePoint, WeierstrassCurve};
use crate::error::{Error, Result};
use crate::extfield::QuadExt;
use crate::numfield::NumberField;
use crate::ff::Fq;
use crate::poly::factor::{degree_one_primes, roots_in_field, DEFAULT_PRIME_START};
use crate::poly::padic::Adic;
use crate::poly::PolyRing;
use crate::ring::{Field, Ring};

/// Abstract group Z_m ⊕ Z_n with m | n.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroupType {
    pub m: u64,
    pub n: u64,
}

impl GroupType {
    pub const TRIVIAL: GroupType = GroupType { m: 1, n: 1 };

    pub fn cyclic(n: u64) -> Self {
        GroupType { m: 1, n }
    }

    pub fn new(m: u64, n: u64) -> Self {
        assert!(m >= 1 && n % m == 0, "Z_{m} ⊕ Z_{n} is not in invariant-factor form");
        GroupType { m, n }
    }

    pub fn order(&self) -> u64 {
        self.m * self.n
    }

    pub fn invariants(&self) -> Vec<u64> {
        [self.m, self.n].into_iter().filter(|x| *x > 1).collect()
    }

    /// Invariant factors of a direct sum of cyclic groups, if of rank ≤ 2.
    pub fn from_cyclic_orders(orders: &[u64]) -> Option<Self> {
        let mut exps: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
        for &o in orders {
            for (l, e) in factor_u64(o.max(1)) {
                exps.entry(l).or_default().push(e);
            }
        }
        let (mut m, mut n) = (1u64, 1u64);
        for (l, mut es) in exps {
            if es.len() > 2 {
                return None;
            }
            es.sort_unstable();
            n *= l.pow(*es.last().unwrap());
            if es.len() == 2 {
                m *= l.pow(es[0]);
            }
        }
        Some(GroupType { m, n })
    }

    pub fn direct_sum(&self, other: &GroupType) -> Option<Self> {
        Self::from_cyclic_orders(&[self.m, self.n, other.m, other.n])
    }

    /// Prime-to-2 part.
    pub fn odd_part(&self) -> Self {
        let strip = |mut x: u64| {
            while x % 2 == 0 {
                x /= 2;
            }
            x
        };
        GroupType { m: strip(self.m), n: strip(self.n) }
    }

    /// ℓ-primary part.
    pub fn primary(&self, l: u64) -> Self {
        let part = |x: u64| {
            let mut r = 1;
            let mut x = x;
            while x % l == 0 {
                x /= l;
                r *= l;
            }
            r
        };
        GroupType { m: part(self.m), n: part(self.n) }
    }

    /// Whether this group embeds in `other`.
    pub fn divides(&self, other: &GroupType) -> bool {
        other.m % self.m == 0 && other.n % self.n == 0
    }
}

impl fmt::Display for GroupType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.m == 1 {
            write!(f, "Z{}", self.n)
        } else {
            write!(f, "Z{}+Z{}", self.m, self.n)
        }
    }
}

impl FromStr for GroupType {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<u64> = s
            .split(['+', '⊕', 'x'])
            .map(|p| {
                p.trim()
                    .trim_start_matches('Z')
                    .parse::<u64>()
                    .map_err(|_| Error::Parse(format!("bad group {s}")))
            })
            .collect::<Result<_>>()?;
        match parts.as_slice() {
            [n] => Ok(GroupType::cyclic(*n)),
            [m, n] if *m >= 1 && n % m == 0 => Ok(GroupType { m: *m, n: *n }),
            _ => Err(Error::Parse(format!("bad group {s}"))),
        }
    }
}

/// One good prime used in a torsion bound.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeRecord {
    pub label: String,
    pub p: u64,
    pub norm: u64,
    pub order: u64,
    pub m: u64,
    pub n: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorsionBound {
    /// |E(K)_tor| divides this.
    pub bound: u64,
    /// E(K)_tor embeds in this structure.
    pub structure: GroupType,
    pub primes: Vec<PrimeRecord>,
}

pub const DEFAULT_PRIME_BUDGET: usize = 5;
pub const EXTENDED_PRIME_BUDGET: usize = 12;
const MAX_RESIDUE_NORM: u64 = 10_000;
const MAX_PRIME: u64 = 3000;

fn valuation(mut x: u64, l: u64) -> u32 {
    let mut v = 0;
    while x % l == 0 && x > 0 {
        x /= l;
        v += 1;
    }
    v
}

fn bound_from(records: &[PrimeRecord]) -> Option<TorsionBound> {
    let chars: BTreeSet<u64> = records.iter().map(|r| r.p).collect();
    if chars.len() < 2 {
        return None;
    }
    let ells: BTreeSet<u64> = records.iter().flat_map(|r| factor_u64(r.order).into_keys()).collect();
    let (mut bm, mut bn) = (1u64, 1u64);
    for l in ells {
        // prime-to-p torsion injects into E(k_𝔭), so the ℓ-part is bounded
        // only by primes of residue characteristic ≠ ℓ
        let usable: Vec<&PrimeRecord> = records.iter().filter(|r| r.p != l).collect();
        let em = usable.iter().map(|r| valuation(r.m, l)).min().unwrap();
        let en = usable.iter().map(|r| valuation(r.n, l)).min().unwrap();
        bm *= l.pow(em);
        bn *= l.pow(en);
    }
    Some(TorsionBound {
        bound: bm * bn,
        structure: GroupType { m: bm, n: bn },
        primes: records.to_vec(),
    })
}

fn plausible(b: &TorsionBound) -> bool {
    b.bound <= 24 && factor_u64(b.bound.max(1)).keys().all(|l| *l <= 13)
}

/// Bound E(K)_tor by reductions at good primes of odd characteristic,
/// using at least `budget` of them (extended up to 12 while the bound is
/// implausibly large).
pub fn torsion_bound<K: NumberField>(e: &WeierstrassCurve<K>, budget: usize) -> Result<TorsionBound> {
    let (model, _) = e.integral_model();
    let k = &e.field;
    let mut records: Vec<PrimeRecord> = Vec::new();
    let target = budget.max(1);
    for p in odd_primes_from(3) {
        if p > MAX_PRIME {
            break;
        }
        for rp in k.residue_primes(p) {
            if rp.norm() > MAX_RESIDUE_NORM {
                continue;
            }
            let Ok(ef) = model.reduce_at(&rp) else { continue };
            let g = ef.group_structure(p)?;
            records.push(PrimeRecord { label: rp.label.clone(), p, norm: rp.norm(), order: g.order, m: g.m, n: g.n });
        }
        if records.len() >= target {
            if let Some(b) = bound_from(&records) {
                if plausible(&b) || records.len() >= EXTENDED_PRIME_BUDGET.max(target) {
                    return Ok(b);
                }
            }
        }
    }
    bound_from(&records).ok_or_else(|| Error::InsufficientGoodPrimes(format!("{} good primes found", records.len())))
}

/// A torsion group with certified generators.
#[derive(Clone, Debug, PartialEq)]
pub struct TorsionStructure<E> {
    pub group: GroupType,
    /// Generators with their orders: a point of order n, then one of
    /// order m when m > 1.
    pub generators: Vec<(CurvePoint<E>, u64)>,
    pub field: String,
    pub bound: Option<TorsionBound>,
}

impl<E> TorsionStructure<E> {
    pub fn order(&self) -> u64 {
        self.group.order()
    }
}

/// The subgroup generated by `gens`, enumerated.
pub fn span<F: Field>(e: &WeierstrassCurve<F>, gens: &[CurvePoint<F::Elem>]) -> HashSet<CurvePoint<F::Elem>> {
    let mut set: HashSet<CurvePoint<F::Elem>> = HashSet::new();
    set.insert(CurvePoint::Infinity);
    let mut frontier = vec![CurvePoint::Infinity];
    while let Some(p) = frontier.pop() {
        for g in gens {
            let q = e.add(&p, g);
            if set.insert(q.clone()) {
                frontier.push(q);
            }
        }
    }
    set
}

/// Structure and certified generators of a finite subgroup given as a set.
pub fn structure_of_set<F: Field>(
    e: &WeierstrassCurve<F>,
    set: &HashSet<CurvePoint<F::Elem>>,
) -> (GroupType, Vec<(CurvePoint<F::Elem>, u64)>) {
    let size = set.len() as u64;
    let mut pts: Vec<(CurvePoint<F::Elem>, u64)> = set
        .iter()
        .map(|p| (p.clone(), e.small_order(p, size).expect("element order divides group order")))
        .collect();
    // deterministic choice regardless of hash order
    pts.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| format!("{:?}", a.0).cmp(&format!("{:?}", b.0))));
    let (g1, n) = pts[0].clone();
    let m = size / n;
    if m == 1 {
        return (GroupType::cyclic(n), if n > 1 { vec![(g1, n)] } else { Vec::new() });
    }
    for (p, o) in &pts {
        if *o == m && span(e, &[g1.clone(), p.clone()]).len() as u64 == size {
            return (GroupType::new(m, n), vec![(g1, n), (p.clone(), m)]);
        }
    }
    panic!("finite subgroup of an elliptic curve must have rank ≤ 2");
}

/// Certify claimed structure: generator orders and subgroup size.
pub fn certify<F: Field>(e: &WeierstrassCurve<F>, group: &GroupType, gens: &[(CurvePoint<F::Elem>, u64)]) -> bool {
    gens.iter().all(|(p, o)| e.contains(p) && e.small_order(p, *o) == Some(*o))
        && span(e, &gens.iter().map(|g| g.0.clone()).collect::<Vec<_>>()).len() as u64 == group.order()
}

fn euler_phi(n: u64) -> u64 {
    factor_u64(n.max(1)).iter().fold(n.max(1), |acc, (p, _)| acc / p * (p - 1))
}

/// Full m-torsion over a field of degree `deg` needs φ(m) ≤ deg (the
/// Weil pairing puts μ_m in the field).
pub fn assert_root_of_unity_bound(group: &GroupType, deg: usize) {
    assert!(
        euler_phi(group.m) as usize <= deg,
        "full {}-torsion over a degree-{deg} field contradicts the Weil pairing",
        group.m
    );
}

/// Points of E(K) with x-coordinate a root of `poly`.
fn points_from_x_roots<K: NumberField>(
    e: &WeierstrassCurve<K>,
    poly: &crate::poly::Poly<K::Elem>,
) -> Vec<CurvePoint<K::Elem>> {
    let k = &e.field;
    roots_in_field(k, poly).iter().flat_map(|x| e.lift_x(x, |v| k.sqrt(v))).collect()
}

/// False when the exact-order-n division polynomial (n a prime power) has
/// no root modulo one of a few degree-one primes, hence none in K.
pub fn division_roots_possible<K: NumberField>(e: &WeierstrassCurve<K>, n: u64) -> bool {
    let k = &e.field;
    let l = *factor_u64(n).keys().next().unwrap();
    for (p, t) in degree_one_primes(k, DEFAULT_PRIME_START).take(6) {
        let a = Adic::prime_power(k, p, t, 1);
        let fq = Fq::prime(p);
        let Some(c) = e.a.iter().map(|c| a.reduce(k, c).map(|z| fq.from_int(&z))).collect::<Option<Vec<u64>>>() else {
            continue;
        };
        let Ok(ep) = WeierstrassCurve::new(fq.clone(), [c[0], c[1], c[2], c[3], c[4]]) else { continue };
        let r = PolyRing::new(fq);
        let fs = ep.division_polynomials(n as usize);
        let f = if n == l { fs[n as usize].clone() } else { r.exact_div(&fs[n as usize], &fs[(n / l) as usize]).unwrap() };
        let xp = r.pow_mod(&r.x(), &num_bigint::BigInt::from(p), &f);
        if r.gcd(&f, &r.sub(&xp, &r.x())).degree() == Some(0) {
            return false;
        }
    }
    true
}

/// E(K)[ℓ^∞], enumerated, stopping once it reaches ℓ^max_exp points.
pub fn primary_torsion<K: NumberField>(
    e: &WeierstrassCurve<K>,
    l: u64,
    max_exp: u32,
) -> HashSet<CurvePoint<K::Elem>> {
    let mut set: HashSet<CurvePoint<K::Elem>> = HashSet::new();
    set.insert(CurvePoint::Infinity);
    if max_exp == 0 {
        return set;
    }
    let cap = l.pow(max_exp) as usize;
    if l != 2 && !division_roots_possible(e, l) {
        return set;
    }
    let first = if l == 2 { e.two_torsion_cubic() } else { e.division_polynomial(l as usize) };
    let mut frontier: Vec<CurvePoint<K::Elem>> = points_from_x_roots(e, &first)
        .into_iter()
        .filter(|p| e.mul(l as i64, p).is_infinity())
        .collect();
    set.extend(frontier.iter().cloned());
    if frontier.is_empty() || set.len() >= cap {
        return set;
    }
    let r = PolyRing::new(e.field.clone());
    let (num, den) = e.multiplication_map(l as usize);
    while !frontier.is_empty() && set.len() < cap {
        let mut next = Vec::new();
        for p in &frontier {
            let CurvePoint::Affine(xp, _) = p else { continue };
            let target = r.sub(&num, &r.scale(&den, xp));
            for q in points_from_x_roots(e, &target) {
                if !set.contains(&q) && e.mul(l as i64, &q) == *p {
                    set.insert(q.clone());
                    next.push(q);
                }
            }
        }
        frontier = next;
    }
    set
}

/// Sum set of subgroups with coprime orders.
fn sum_sets<F: Field>(
    e: &WeierstrassCurve<F>,
    a: &HashSet<CurvePoint<F::Elem>>,
    b: &HashSet<CurvePoint<F::Elem>>,
) -> HashSet<CurvePoint<F::Elem>> {
    a.iter().flat_map(|p| b.iter().map(move |q| (p, q))).map(|(p, q)| e.add(p, q)).collect()
}

/// E(K)_tor: bound, realize, certify.
pub fn torsion_subgroup<K: NumberField>(e: &WeierstrassCurve<K>) -> Result<TorsionStructure<K::Elem>> {
    torsion_subgroup_with(e, DEFAULT_PRIME_BUDGET)
}

pub fn torsion_subgroup_with<K: NumberField>(
    e: &WeierstrassCurve<K>,
    budget: usize,
) -> Result<TorsionStructure<K::Elem>> {
    let bound = torsion_bound(e, budget)?;
    let mut all: HashSet<CurvePoint<K::Elem>> = [CurvePoint::Infinity].into_iter().collect();
    for (l, v) in factor_u64(bound.bound.max(1)) {
        let part = primary_torsion(e, l, v);
        all = sum_sets(e, &all, &part);
    }
    let (group, generators) = structure_of_set(e, &all);
    assert!(certify(e, &group, &generators), "torsion generators failed certification");
    assert_eq!(bound.bound % group.order(), 0, "realized torsion must divide the bound");
    assert!(group.divides(&bound.structure));
    assert_root_of_unity_bound(&group, e.field.degree());
    if let Ok(allowed) = crate::growth::allowed_torsion(&e.field) {
        assert!(allowed.contains(&group), "{group} is not a possible torsion group over {}", e.field.name());
    }
    Ok(TorsionStructure { group, generators, field: e.field.name(), bound: Some(bound) })
}

pub type ExtElem<K> = (<K as Ring>::Elem, <K as Ring>::Elem);

/// Image in E(K(√d)) of a point of the twist E^d(K) (twist model as
/// produced by `quadratic_twist`).
pub fn twist_point_to_ext<K: NumberField>(
    e: &WeierstrassCurve<K>,
    l: &QuadExt<K>,
    p: &CurvePoint<K::Elem>,
) -> CurvePoint<ExtElem<K>> {
    let k = &e.field;
    let d = &l.d;
    match p {
        CurvePoint::Infinity => CurvePoint::Infinity,
        CurvePoint::Affine(xx, yy) => {
            let x = k.div(xx, d).unwrap();
            let d2 = k.mul(d, d);
            let yprime = l.sqrt_d_times(&k.div(yy, &d2).unwrap());
            let half = k.inv(&k.from_i64(2)).unwrap();
            let shift = k.mul(&k.add(&k.mul(e.a1(), &x), e.a3()), &half);
            let y = l.sub(&yprime, &l.embed(&shift));
            CurvePoint::Affine(l.embed(&x), y)
        }
    }
}

pub fn embed_point<K: NumberField>(l: &QuadExt<K>, p: &CurvePoint<K::Elem>) -> CurvePoint<ExtElem<K>> {
    match p {
        CurvePoint::Infinity => CurvePoint::Infinity,
        CurvePoint::Affine(x, y) => CurvePoint::Affine(l.embed(x), l.embed(y)),
    }
}

/// E over K(√d), with its torsion and the two K-rational pieces.
pub struct ExtTorsion<K: NumberField> {
    pub ext: QuadExt<K>,
    pub curve: WeierstrassCurve<QuadExt<K>>,
    pub structure: TorsionStructure<ExtElem<K>>,
    pub base: TorsionStructure<K::Elem>,
    pub twist: TorsionStructure<K::Elem>,
}

/// E(K(√d))_tor as E(K)_tor ⊕ E^d(K)_tor (both odd when E(K)[2] = 0).
pub fn torsion_over_quadratic_ext<K: NumberField>(
    e: &WeierstrassCurve<K>,
    d: &K::Elem,
) -> Result<ExtTorsion<K>> {
    let k = &e.field;
    if !e.two_torsion_trivial() {
        return Err(Error::NontrivialTwoTorsion);
    }
    if k.is_square(d) {
        return Err(Error::SquareTwist);
    }
    let base = torsion_subgroup(e)?;
    let twisted = e.quadratic_twist(d)?;
    let twist = torsion_subgroup(&twisted)?;
    assert_eq!(base.order() % 2, 1, "2-torsion is trivial, so E(K)_tor is odd");
    assert_eq!(twist.order() % 2, 1, "E^d(K)[2] ≅ E(K)[2] is trivial");
    let l = QuadExt::new(k.clone(), d.clone());
    let el = e.map_field(&l, |c| l.embed(c))?;
    let mut gens: Vec<CurvePoint<ExtElem<K>>> = base.generators.iter().map(|(p, _)| embed_point(&l, p)).collect();
    gens.extend(twist.generators.iter().map(|(p, _)| twist_point_to_ext(e, &l, p)));
    for g in &gens {
        assert!(el.contains(g));
    }
    let set = span(&el, &gens);
    let (group, generators) = structure_of_set(&el, &set);
    assert!(certify(&el, &group, &generators));
    assert_eq!(Some(group), base.group.direct_sum(&twist.group));
    // full p-torsion over L for odd p forces p = 3
    for p in factor_u64(group.m).keys() {
        assert!(*p == 3, "full {p}-torsion over a quadratic extension of K");
    }
    assert_root_of_unity_bound(&group, 2 * k.degree());
    let name = format!("{}(sqrt({}))", k.name(), NumberField::fmt(k, d));
    let structure = TorsionStructure { group, generators, field: name, bound: None };
    Ok(ExtTorsion { ext: l, curve: el, structure, base, twist })
}

/// Group structure over K(√d); a square d gives E(K)_tor.
pub fn ext_torsion_group<K: NumberField>(e: &WeierstrassCurve<K>, d: &K::Elem) -> Result<GroupType> {
    match torsion_over_quadratic_ext(e, d) {
        Ok(t) => Ok(t.structure.group),
        Err(Error::SquareTwist) => Ok(torsion_subgroup(e)?.group),
        Err(err) => Err(err),
    }
}

/// n-torsion subgroup E(F)[n] of an enumerated torsion set.
pub fn n_torsion_count<F: Field>(e: &WeierstrassCurve<F>, set: &HashSet<CurvePoint<F::Elem>>, n: u64) -> usize {
    set.iter().filter(|p| e.mul(n as i64, p).is_infinity()).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elliptic::parse_curve;
    use crate::qfield::QuadField;
    use crate::rational::Rationals;

    #[test]
    fn group_type_algebra() {
        let g = GroupType::from_cyclic_orders(&[9, 3]).unwrap();
        assert_eq!(g, GroupType::new(3, 9));
        assert_eq!(GroupType::from_cyclic_orders(&[3, 5]).unwrap(), GroupType::cyclic(15));
        assert!(GroupType::from_cyclic_orders(&[3, 3, 3]).is_none());
        assert_eq!("Z3+Z9".parse::<GroupType>().unwrap(), g);
        assert_eq!(g.to_string(), "Z3+Z9");
    }

    #[test]
    fn torsion_over_q_examples() {
        let e = WeierstrassCurve::from_i64s(Rationals, [1, 0, 0, -4, -1]).unwrap();
        assert_eq!(torsion_subgroup(&e).unwrap().group, GroupType::new(2, 4));
        let e = WeierstrassCurve::from_i64s(Rationals, [0, 0, 1, 0, -7]).unwrap();
        assert_eq!(torsion_subgroup(&e).unwrap().group, GroupType::cyclic(3));
        let e = WeierstrassCurve::from_i64s(Rationals, [0, 0, 0, 0, 1]).unwrap();
        assert_eq!(torsion_subgroup(&e).unwrap().group, GroupType::cyclic(6));
    }

    #[test]
    fn trivial_over_k() {
        let k = QuadField::imaginary(7).unwrap();
        let e = parse_curve(&k, "[0,5]").unwrap();
        let t = torsion_subgroup(&e).unwrap();
        assert_eq!(t.group, GroupType::TRIVIAL);
        assert!(t.bound.unwrap().primes.len() <= 8);
    }

    #[test]
    fn remark_curves_grow_to_z3_z9() {
        for (d, c) in [
            (2, "[-619/27-950/27*w,-210862/243+16720/243*w,-210862/243+16720/243*w,0,0]"),
            (11, "[-4265/27-2072/27*w,377548/243-949568/243*w,377548/243-949568/243*w,0,0]"),
        ] {
            let k = QuadField::imaginary(d).unwrap();
            let e = parse_curve(&k, c).unwrap();
            let t = torsion_subgroup(&e).unwrap();
            assert_eq!(t.group, GroupType::cyclic(9));
            let g = &t.generators[0].0;
            assert!(e.mul(9, g).is_infinity() && !e.mul(3, g).is_infinity());
            let ext = torsion_over_quadratic_ext(&e, &k.from_i64(-3)).unwrap();
            assert_eq!(ext.structure.group, GroupType::new(3, 9));
        }
    }
}
