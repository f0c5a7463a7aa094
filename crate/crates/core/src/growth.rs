//! Growth of odd torsion under quadratic base change.
//!
//! Twists carrying odd torsion are found from K-rational roots x of
//! division polynomials: the point over x is defined over K(√f(x)), so it
//! lives on the twist by the square class of f(x).

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::factor_u64;
use crate::elliptic::WeierstrassCurve;
use crate::error::{Error, Result};
use crate::numfield::NumberField;
use crate::poly::factor::roots_in_field;
use crate::poly::PolyRing;
use crate::qfield::{QuadElem, QuadField, CLASS_NUMBER_ONE};
use crate::rational::q;
use crate::ring::Ring;
use crate::torsion::{division_roots_possible, torsion_over_quadratic_ext, torsion_subgroup, GroupType, TorsionStructure};

/// Odd orders scanned by default (13 is included on purpose).
pub const DEFAULT_ORDERS: [u64; 7] = [3, 5, 7, 9, 11, 13, 15];

/// Mazur's list of torsion groups over Q.
pub fn mazur() -> Vec<GroupType> {
    let mut v: Vec<GroupType> = (1..=10).chain([12]).map(GroupType::cyclic).collect();
    v.extend((1..=4).map(|n| GroupType::new(2, 2 * n)));
    v
}

/// Torsion groups occurring over K: Mazur's list plus the extras of the
/// given imaginary quadratic field of class number one (or Q itself).
pub fn allowed_torsion<K: NumberField>(k: &K) -> Result<Vec<GroupType>> {
    let Some(w2) = k.quadratic_w2() else { return Ok(mazur()) };
    let d = w2.unsigned_abs();
    if w2 > 0 || !CLASS_NUMBER_ONE.contains(&d) {
        return Err(Error::UnsupportedField(k.name()));
    }
    let extras: &[(u64, u64)] = match d {
        2 => &[(1, 11), (2, 10)],
        7 => &[(1, 11), (1, 14), (1, 15)],
        11 => &[(1, 14), (1, 15), (2, 10)],
        19 => &[(1, 11), (2, 10), (2, 12)],
        43 => &[(1, 11), (1, 14), (1, 15), (2, 12)],
        67 | 163 => &[(1, 14), (1, 15), (2, 12)],
        _ => unreachable!(),
    };
    let mut v = mazur();
    v.extend(extras.iter().map(|&(m, n)| GroupType::new(m, n)));
    Ok(v)
}

/// Groups E(L)_tor can take for E(K)[2] trivial and [L:K] = 2.
pub fn theorem_list() -> Vec<GroupType> {
    let mut v: Vec<GroupType> = [1, 3, 5, 7, 9, 11, 15].into_iter().map(GroupType::cyclic).collect();
    v.push(GroupType::new(3, 3));
    v.push(GroupType::new(3, 9));
    v
}

/// Possible E(L)_tor for a given odd E(K)_tor.
pub fn growth_table_row(base: &GroupType) -> Option<Vec<GroupType>> {
    let c = GroupType::cyclic;
    let row = match (base.m, base.n) {
        (1, 1) => vec![c(1), c(3), c(5), c(7), c(9), c(11), c(15)],
        (1, 3) => vec![c(3), c(15), GroupType::new(3, 3), GroupType::new(3, 9)],
        (1, 5) => vec![c(5), c(15)],
        (1, 7) => vec![c(7)],
        (1, 9) => vec![c(9), GroupType::new(3, 9)],
        (1, 11) => vec![c(11)],
        (1, 15) => vec![c(15)],
        _ => return None,
    };
    Some(row)
}

/// Odd twist orders excluded for a given base torsion order.
pub fn excluded_twist_orders(base: u64) -> &'static [u64] {
    match base {
        5 => &[5, 7, 9, 11],
        7 => &[3, 5, 7, 9, 11],
        11 => &[3, 5, 7, 9, 11],
        _ => &[],
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScanEntry<E> {
    pub class: E,
    pub order: u64,
    pub x: E,
}

/// Polynomial whose roots are x-coordinates of points of exact order
/// ℓ^k (y-free; for ℓ^k = ℓ the whole f_ℓ).
fn primitive_part<K: NumberField>(e: &WeierstrassCurve<K>, n: u64) -> crate::poly::Poly<K::Elem> {
    let r = PolyRing::new(e.field.clone());
    let fs = e.division_polynomials(n as usize);
    let l = *factor_u64(n).keys().next().unwrap();
    let f = fs[n as usize].clone();
    if n == l {
        f
    } else {
        r.exact_div(&f, &fs[(n / l) as usize]).expect("f_{n/ℓ} divides f_n")
    }
}

/// All (square class, order, witness x) with odd order in `orders`.
/// Class one entries are K-rational torsion.
pub fn twist_scan<K: NumberField>(e: &WeierstrassCurve<K>, orders: &[u64]) -> Result<Vec<ScanEntry<K::Elem>>> {
    if !e.two_torsion_trivial() {
        return Err(Error::NontrivialTwoTorsion);
    }
    let k = &e.field;
    let mut found: BTreeMap<(u64, String), ScanEntry<K::Elem>> = BTreeMap::new();
    let mut cache: BTreeMap<u64, Vec<ScanEntry<K::Elem>>> = BTreeMap::new();
    let mut prime_power_scan = |n: u64| -> Result<Vec<ScanEntry<K::Elem>>> {
        if let Some(v) = cache.get(&n) {
            return Ok(v.clone());
        }
        let mut out = Vec::new();
        if !division_roots_possible(e, n) {
            cache.insert(n, out.clone());
            return Ok(out);
        }
        for x in roots_in_field(k, &primitive_part(e, n)) {
            let v = e.y_discriminant(&x);
            if k.is_zero(&v) {
                continue;
            }
            out.push(ScanEntry { class: k.square_class(&v)?, order: n, x });
        }
        cache.insert(n, out.clone());
        Ok(out)
    };
    for &n in orders {
        if n % 2 == 0 || n < 3 {
            return Err(Error::InvalidInput(format!("orders must be odd and ≥ 3, got {n}")));
        }
        let parts: Vec<u64> = factor_u64(n).iter().map(|(l, e)| l.pow(*e)).collect();
        if parts.len() == 1 {
            for s in prime_power_scan(n)? {
                found.entry((n, NumberField::fmt(k, &s.class))).or_insert(s);
            }
            continue;
        }
        // composite: a class carries order n iff it carries every
        // prime-power part
        let mut per_part: Vec<BTreeMap<String, ScanEntry<K::Elem>>> = Vec::new();
        for pp in &parts {
            let mut m = BTreeMap::new();
            for s in prime_power_scan(*pp)? {
                m.entry(NumberField::fmt(k, &s.class)).or_insert(s);
            }
            per_part.push(m);
        }
        for (key, s) in &per_part[0] {
            if per_part[1..].iter().all(|m| m.contains_key(key)) {
                found
                    .entry((n, key.clone()))
                    .or_insert(ScanEntry { class: s.class.clone(), order: n, x: s.x.clone() });
            }
        }
    }
    Ok(found.into_values().collect())
}

#[derive(Clone, Debug, PartialEq)]
pub struct Finding<E> {
    pub class: E,
    /// Orders reported by the scan for this class.
    pub scan_orders: Vec<u64>,
    pub twist_torsion: TorsionStructure<E>,
    pub extension: GroupType,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Verdict {
    pub in_theorem_list: bool,
    pub in_table_row: bool,
    pub twist_exclusions_hold: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GrowthReport<E> {
    pub field: String,
    pub base: TorsionStructure<E>,
    pub findings: Vec<Finding<E>>,
    pub verdict: Verdict,
}

/// Base torsion, every twist class with odd torsion, and E(L)_tor for the
/// corresponding L = K(√d), checked against the theorem list.
pub fn classify_growth<K: NumberField>(e: &WeierstrassCurve<K>) -> Result<GrowthReport<K::Elem>> {
    classify_growth_with(e, &DEFAULT_ORDERS)
}

pub fn classify_growth_with<K: NumberField>(
    e: &WeierstrassCurve<K>,
    orders: &[u64],
) -> Result<GrowthReport<K::Elem>> {
    let k = &e.field;
    allowed_torsion(k)?;
    if k.quadratic_w2().is_none() {
        return Err(Error::UnsupportedField(k.name()));
    }
    let scan = twist_scan(e, orders)?;
    let base = torsion_subgroup(e)?;
    let mut classes: BTreeMap<String, (K::Elem, Vec<u64>)> = BTreeMap::new();
    for s in scan.iter().filter(|s| !k.is_one(&s.class)) {
        let entry = classes.entry(NumberField::fmt(k, &s.class)).or_insert_with(|| (s.class.clone(), Vec::new()));
        entry.1.push(s.order);
    }
    let d_field = k.quadratic_w2().map(|w| w.unsigned_abs()).unwrap_or(1);
    let thm = theorem_list();
    let row = growth_table_row(&base.group);
    let mut verdict = Verdict { in_theorem_list: thm.contains(&base.group), in_table_row: row.is_some(), twist_exclusions_hold: true };
    let mut findings = Vec::new();
    for (_, (d, scan_orders)) in classes {
        let ext = torsion_over_quadratic_ext(e, &d)?;
        let twist = ext.twist.clone();
        for o in &scan_orders {
            assert_eq!(twist.order() % o, 0, "scan order {o} missing from the twist torsion");
        }
        let g = ext.structure.group;
        if g == GroupType::new(3, 9) && d_field != 2 && d_field != 11 {
            return Err(Error::TheoremViolation(format!("Z3+Z9 over a quadratic extension of {}", k.name())));
        }
        if !thm.contains(&g) {
            return Err(Error::TheoremViolation(format!("{g} over {}", ext.structure.field)));
        }
        verdict.in_table_row &= row.as_ref().is_some_and(|r| r.contains(&g));
        verdict.twist_exclusions_hold &= !excluded_twist_orders(base.order())
            .iter()
            .any(|o| twist.order() % o == 0);
        findings.push(Finding { class: d, scan_orders, twist_torsion: twist, extension: g });
    }
    Ok(GrowthReport { field: k.name(), base, findings, verdict })
}

/// A curve of the bundled regression corpus.
#[derive(Clone, Debug)]
pub struct CorpusCurve {
    pub label: String,
    pub d: u64,
    pub coeffs: [QuadElem; 5],
    /// Known E(K)_tor, if recorded.
    pub expected_base: Option<GroupType>,
    /// Known growth (class, E(L)_tor), if recorded.
    pub expected_growth: Vec<(QuadElem, GroupType)>,
}

impl CorpusCurve {
    pub fn curve(&self) -> Result<(QuadField, WeierstrassCurve<QuadField>)> {
        let k = QuadField::imaginary(self.d)?;
        let e = WeierstrassCurve::new(k.clone(), self.coeffs.clone())?;
        Ok((k, e))
    }
}

fn qe(s: &str) -> QuadElem {
    s.parse().expect("corpus literal")
}

/// The 9-torsion curves with growth to Z3 ⊕ Z9 over K(√−3).
pub fn remark_curves() -> Vec<CorpusCurve> {
    let mk = |d: u64, a1: &str, b: &str| CorpusCurve {
        label: format!("z9-growth-{d}"),
        d,
        coeffs: [qe(a1), qe(b), qe(b), QuadElem::default(), QuadElem::default()],
        expected_base: Some(GroupType::cyclic(9)),
        expected_growth: vec![(qe("-3"), GroupType::new(3, 9))],
    };
    vec![
        mk(2, "-619/27-950/27*w", "-210862/243+16720/243*w"),
        mk(11, "-4265/27-2072/27*w", "377548/243-949568/243*w"),
    ]
}

/// Tate normal form y² + (1−c)xy − by = x³ − bx².
pub fn tate_normal(b: &QuadElem, c: &QuadElem) -> [QuadElem; 5] {
    let k = QuadField::with_square(-1).expect("any field does for coefficient arithmetic");
    let one = QuadElem::from_i64(1);
    let nb = k.neg(b);
    [k.sub(&one, c), nb.clone(), nb, QuadElem::default(), QuadElem::default()]
}

/// Kubert's 7-torsion family: b = t³ − t², c = t² − t.
pub fn kubert7(t: &QuadElem) -> [QuadElem; 5] {
    let k = QuadField::with_square(-1).unwrap();
    let t2 = k.mul(t, t);
    let b = k.sub(&k.mul(&t2, t), &t2);
    let c = k.sub(&t2, t);
    tate_normal(&b, &c)
}

pub const KUBERT_PARAMETERS: [&str; 4] = ["2", "3", "-1", "1/2"];

/// Kubert curves E_t over every field where the model is nonsingular
/// with trivial 2-torsion.
pub fn kubert_curves() -> Vec<CorpusCurve> {
    let mut out = Vec::new();
    for d in CLASS_NUMBER_ONE {
        let k = QuadField::imaginary(d).unwrap();
        for t in KUBERT_PARAMETERS {
            let coeffs = kubert7(&qe(t));
            let Ok(e) = WeierstrassCurve::new(k.clone(), coeffs.clone()) else { continue };
            if !e.two_torsion_trivial() {
                continue;
            }
            out.push(CorpusCurve {
                label: format!("kubert7-t{t}-{d}"),
                d,
                coeffs,
                expected_base: None,
                expected_growth: Vec::new(),
            });
        }
    }
    out
}

/// Curves with an 11-torsion point from X1(11): with
/// r² + r(−s³ + 3s² − 4s) + s = 0, take b = rs(r − 1), c = s(r − 1).
pub fn z11_curves() -> Vec<CorpusCurve> {
    let params: [(u64, (i64, i64)); 4] = [(7, (1, 2)), (7, (7, 11)), (2, (2, 3)), (2, (8, 41))];
    let mut out = Vec::new();
    for (d, (sn, sd)) in params {
        let k = QuadField::imaginary(d).unwrap();
        let s = QuadElem::from_rational(q(sn, sd));
        let r = PolyRing::new(k.clone());
        let s2 = k.mul(&s, &s);
        let lin = k.add(&k.sub(&k.mul_i64(&s2, 3), &k.mul(&s2, &s)), &k.mul_i64(&s, -4));
        let quad = r.from_coeffs(vec![s.clone(), lin, k.one()]);
        for root in roots_in_field(&k, &quad).into_iter().take(1) {
            let rm1 = k.sub(&root, &k.one());
            let b = k.mul(&k.mul(&root, &s), &rm1);
            let c = k.mul(&s, &rm1);
            out.push(CorpusCurve {
                label: format!("z11-s{sn}/{sd}-{d}"),
                d,
                coeffs: tate_normal(&b, &c),
                expected_base: Some(GroupType::cyclic(11)),
                expected_growth: Vec::new(),
            });
        }
    }
    out
}

pub const RANDOM_CURVES_PER_FIELD: usize = 20;
pub const CORPUS_SEED: u64 = 0x0dd7_0125;

/// Seeded small-height curves y² = x³ + a4·x + a6 with a4, a6 ∈ O_K and
/// trivial 2-torsion.
pub fn random_curves(d: u64, count: usize, seed: u64) -> Vec<CorpusCurve> {
    let k = QuadField::imaginary(d).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ d);
    let mut out = Vec::new();
    while out.len() < count {
        let mut coef = || k.from_coords(&[rng.gen_range(-6i64..=6).into(), rng.gen_range(-2i64..=2).into()]);
        let (a4, a6) = (coef(), coef());
        let z = QuadElem::default();
        let coeffs = [z.clone(), z.clone(), z, a4, a6];
        let Ok(e) = WeierstrassCurve::new(k.clone(), coeffs.clone()) else { continue };
        if !e.two_torsion_trivial() {
            continue;
        }
        out.push(CorpusCurve {
            label: format!("random-{d}-{}", out.len()),
            d,
            coeffs,
            expected_base: None,
            expected_growth: Vec::new(),
        });
    }
    out
}

/// Full regression corpus.
pub fn corpus() -> Vec<CorpusCurve> {
    let mut v = remark_curves();
    v.extend(kubert_curves());
    v.extend(z11_curves());
    for d in CLASS_NUMBER_ONE {
        v.extend(random_curves(d, RANDOM_CURVES_PER_FIELD, CORPUS_SEED));
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn allowed_lists() {
        let k = QuadField::imaginary(2).unwrap();
        let l = allowed_torsion(&k).unwrap();
        assert!(l.contains(&GroupType::cyclic(11)) && l.contains(&GroupType::new(2, 10)));
        assert!(!l.contains(&GroupType::cyclic(15)));
        assert_eq!(l.len(), 17);
        let k = QuadField::imaginary(163).unwrap();
        assert!(allowed_torsion(&k).unwrap().contains(&GroupType::new(2, 12)));
        assert!(allowed_torsion(&QuadField::with_square(-5).unwrap()).is_err());
    }

    #[test]
    fn remark_growth() {
        for c in remark_curves() {
            let (k, e) = c.curve().unwrap();
            let rep = classify_growth(&e).unwrap();
            assert_eq!(rep.base.group, GroupType::cyclic(9));
            let f: Vec<_> = rep.findings.iter().map(|f| (f.class.clone(), f.extension)).collect();
            assert_eq!(f, vec![(k.from_i64(-3), GroupType::new(3, 9))]);
            assert!(rep.verdict.in_table_row);
        }
    }

    #[test]
    fn kubert_no_growth_over_q_sqrt_minus_7() {
        let k = QuadField::imaginary(7).unwrap();
        let e = WeierstrassCurve::new(k, kubert7(&qe("2"))).unwrap();
        let rep = classify_growth(&e).unwrap();
        assert_eq!(rep.base.group, GroupType::cyclic(7));
        assert!(rep.findings.is_empty());
        let k = QuadField::imaginary(43).unwrap();
        let e = WeierstrassCurve::new(k, kubert7(&qe("2"))).unwrap();
        assert!(twist_scan(&e, &[3]).unwrap().is_empty());
    }

    #[test]
    fn z11_curves_have_z11() {
        let cs = z11_curves();
        assert_eq!(cs.len(), 4);
        let (_, e) = cs[0].curve().unwrap();
        assert_eq!(torsion_subgroup(&e).unwrap().group, GroupType::cyclic(11));
    }
}
