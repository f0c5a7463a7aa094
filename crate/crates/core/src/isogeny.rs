//! Kernel polynomials of Galois-stable cyclic subgroups and the degree
//! signatures of their factorizations.
//!
//! Everything is exact polynomial arithmetic over K: kernels are found as
//! divisors of division polynomials, composite kernels as gcds of composed
//! numerators, and membership/stability is certified by evaluating in
//! K[x]/(h).

use serde::{Deserialize, Serialize};

use crate::elliptic::WeierstrassCurve;
use crate::error::{Error, Result};
use crate::numfield::NumberField;
use crate::poly::factor::{degree_one_primes, divisors_of_degree, factor_over_field, roots_in_field, EXACT_FACTOR_DEGREE, DEFAULT_PRIME_START};
use crate::poly::finite::ddf_degrees;
use crate::poly::gcd::modular_gcd;
use crate::poly::padic::{integral_scale, Adic};
use crate::poly::text::format_poly;
use crate::poly::{Poly, PolyRing, QuotientRing};
use crate::ring::{Field, Ring};
use crate::Fq;

/// Orders accepted by [`stable_cyclic_kernels`].
pub const KERNEL_ORDERS: [u64; 5] = [3, 5, 7, 9, 11];

/// Primes used by the heuristic signature mode.
pub const SIGNATURE_PRIMES: usize = 20;

/// Kernel polynomial f_C of a cyclic subgroup C of odd order: its roots are
/// the x-coordinates of C \ {O}.
#[derive(Clone, Debug, PartialEq)]
pub struct KernelPoly<E> {
    pub order: u64,
    pub poly: Poly<E>,
    /// (order, factor) for each coprime piece, plus the mixed part of a
    /// composite kernel.
    pub components: Vec<(u64, Poly<E>)>,
}

impl<E: Clone> KernelPoly<E> {
    pub fn degree(&self) -> usize {
        self.poly.degree().unwrap_or(0)
    }
}

pub fn kernel_degree(n: u64) -> usize {
    ((n - 1) / 2) as usize
}

/// Numerator of h(N/D): Σ hᵢ Nⁱ D^(deg h − i).
pub fn composed_numerator<R: Ring, C>(r: &R, h: &[C], n: &R::Elem, d: &R::Elem, base: impl Fn(&C) -> R::Elem) -> R::Elem {
    let deg = h.len() - 1;
    // Horner in the homogeneous form
    let mut acc = base(&h[deg]);
    let mut dpow = r.one();
    for i in (0..deg).rev() {
        dpow = r.mul(&dpow, d);
        acc = r.add(&r.mul(&acc, n), &r.mul(&base(&h[i]), &dpow));
    }
    acc
}

fn quotient<K: NumberField>(k: &K, h: &Poly<K::Elem>) -> QuotientRing<K> {
    QuotientRing::new(k.clone(), h.clone())
}

/// x([m]P) as a pair of residues mod h.
fn multiplication_mod<K: NumberField>(e: &WeierstrassCurve<K>, h: &Poly<K::Elem>, m: usize) -> (Poly<K::Elem>, Poly<K::Elem>) {
    let q = quotient(&e.field, h);
    let ctx = e.context_in(&q, |c| q.embed(c), q.x());
    if m == 2 {
        ctx.doubling_x()
    } else {
        ctx.multiplication_x(m)
    }
}

/// Is the root set of h mapped into itself by x ↦ x([m]P)? Requires the
/// denominator to be a unit mod h (no root is killed by m).
pub fn mult_stable<K: NumberField>(e: &WeierstrassCurve<K>, h: &Poly<K::Elem>, m: usize) -> bool {
    if h.degree().unwrap_or(0) == 0 {
        return true;
    }
    let q = quotient(&e.field, h);
    let (n, d) = multiplication_mod(e, h, m);
    if q.inv(&d).is_none() {
        return false;
    }
    let v = composed_numerator(&q, h.coeffs(), &n, &d, |c| q.embed(c));
    q.reduce(&v).is_zero()
}

/// Doubling stability: h | num(h(x(2P))).
pub fn doubling_stable<K: NumberField>(e: &WeierstrassCurve<K>, h: &Poly<K::Elem>) -> bool {
    mult_stable(e, h, 2)
}

/// Does h divide the y-free division polynomial f_n? Evaluated in
/// K[x]/(h), so f_n itself is never expanded.
pub fn divides_division_poly<K: NumberField>(e: &WeierstrassCurve<K>, h: &Poly<K::Elem>, n: usize) -> bool {
    if h.degree().unwrap_or(0) == 0 {
        return true;
    }
    let q = quotient(&e.field, h);
    let ctx = e.context_in(&q, |c| q.embed(c), q.x());
    let f = ctx.sequence(n).pop().unwrap();
    q.reduce(&f).is_zero()
}

/// Does [m] send every root of g to a root of h?
pub fn maps_into<K: NumberField>(e: &WeierstrassCurve<K>, g: &Poly<K::Elem>, h: &Poly<K::Elem>, m: usize) -> bool {
    let q = quotient(&e.field, g);
    let (n, d) = multiplication_mod(e, g, m);
    if q.inv(&d).is_none() {
        return false;
    }
    q.reduce(&composed_numerator(&q, h.coeffs(), &n, &d, |c| q.embed(c))).is_zero()
}

/// Galois-stable cyclic subgroups of order ℓ ∈ {3, 5, 7, 9, 11}, as monic
/// kernel polynomials.
pub fn stable_cyclic_kernels<K: NumberField>(e: &WeierstrassCurve<K>, l: u64) -> Result<Vec<KernelPoly<K::Elem>>> {
    let k = &e.field;
    let r = PolyRing::new(k.clone());
    match l {
        3 => Ok(roots_in_field(k, &e.division_polynomial(3))
            .into_iter()
            .map(|x0| {
                let h = r.linear(&x0);
                KernelPoly { order: 3, poly: h.clone(), components: vec![(3, h)] }
            })
            .collect()),
        5 | 7 | 11 => {
            let f = e.division_polynomial(l as usize);
            let mut out = Vec::new();
            for h in divisors_of_degree(k, &f, kernel_degree(l), true) {
                // 2 generates (Z/ℓ)*/±1 for these ℓ, so one doubling orbit
                // of size (ℓ−1)/2 is exactly one cyclic subgroup
                if doubling_stable(e, &h) {
                    debug_assert!(divides_division_poly(e, &h, l as usize));
                    out.push(KernelPoly { order: l, components: vec![(l, h.clone())], poly: h });
                }
            }
            Ok(out)
        }
        9 => {
            let threes = stable_cyclic_kernels(e, 3)?;
            if threes.is_empty() {
                return Ok(Vec::new());
            }
            let fs = e.division_polynomials(9);
            let prim = r.exact_div(&fs[9], &fs[3]).expect("f_3 | f_9");
            let mut out = Vec::new();
            for g in divisors_of_degree(k, &prim, 3, true) {
                for t in &threes {
                    if maps_into(e, &g, &t.poly, 3) {
                        let h = r.mul(&g, &t.poly);
                        if doubling_stable(e, &h) {
                            out.push(KernelPoly { order: 9, poly: h, components: vec![(3, t.poly.clone()), (9, g.clone())] });
                        }
                    }
                }
            }
            Ok(out)
        }
        _ => Err(Error::InvalidInput(format!("kernel order {l} not in {KERNEL_ORDERS:?}"))),
    }
}

/// Kernel of C_a ⊕ C_b for coprime odd a, b: hA · hB · h_ab with
/// h_ab = gcd(num hA(x([b]P)), num hB(x([a]P))).
pub fn composite_kernel_poly<K: NumberField>(
    e: &WeierstrassCurve<K>,
    ha: &KernelPoly<K::Elem>,
    hb: &KernelPoly<K::Elem>,
) -> Result<KernelPoly<K::Elem>> {
    let (a, b) = (ha.order, hb.order);
    if a % 2 == 0 || b % 2 == 0 || num_integer::gcd(a, b) != 1 {
        return Err(Error::IncompatibleOrders(a, b));
    }
    let k = &e.field;
    let r = PolyRing::new(k.clone());
    let compose = |h: &Poly<K::Elem>, m: u64| {
        let (n, d) = e.multiplication_map(m as usize);
        composed_numerator(&r, h.coeffs(), &n, &d, |c| r.constant(c.clone()))
    };
    let na = compose(&ha.poly, b);
    let nb = compose(&hb.poly, a);
    let hab = modular_gcd(k, &na, &nb);
    let n = a * b;
    let want = kernel_degree(n) - kernel_degree(a) - kernel_degree(b);
    if hab.degree() != Some(want) {
        return Err(Error::Failed(format!(
            "mixed kernel part has degree {:?}, expected {want}",
            hab.degree()
        )));
    }
    let poly = r.mul(&r.mul(&ha.poly, &hb.poly), &hab);
    if !divides_division_poly(e, &hab, n as usize) || !doubling_stable(e, &poly) {
        return Err(Error::Failed(format!("composite kernel of order {n} failed certification")));
    }
    let mut components = ha.components.clone();
    components.extend(hb.components.iter().cloned());
    components.push((n, hab));
    Ok(KernelPoly { order: n, poly, components })
}

/// Multiset of factor degrees of a kernel polynomial over K.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Signature {
    pub degrees: Vec<usize>,
    /// True when read off modular factorizations instead of an exact one.
    pub heuristic: bool,
}

impl std::fmt::Display for Signature {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s: Vec<String> = self.degrees.iter().map(|d| d.to_string()).collect();
        write!(f, "({})", s.join(","))?;
        if self.heuristic {
            write!(f, "?")?;
        }
        Ok(())
    }
}

/// Factor-degree patterns of f at `count` good degree-one primes.
pub fn modular_patterns<K: NumberField>(k: &K, f: &Poly<K::Elem>, count: usize) -> Vec<(u64, Vec<usize>)> {
    let (big, _) = integral_scale(k, f);
    let mut out = Vec::new();
    for (p, t) in degree_one_primes(k, DEFAULT_PRIME_START) {
        let a = Adic::prime_power(k, p, t, 1);
        let Some(c) = a.reduce_poly(k, &big) else { continue };
        if c.len() != big.len() {
            continue;
        }
        let rp = PolyRing::new(Fq::prime(p));
        let fp = rp.from_ints(&c);
        if !rp.is_squarefree(&fp) {
            continue;
        }
        let mut ds = ddf_degrees(&rp, &fp);
        ds.sort_unstable();
        out.push((p, ds));
        if out.len() >= count {
            break;
        }
    }
    out
}

/// Exact signature up to degree 40, otherwise the coarsest modular pattern
/// over 20 primes (flagged heuristic).
pub fn signature<K: NumberField>(k: &K, f: &Poly<K::Elem>) -> Result<Signature> {
    let n = f.degree().ok_or(Error::ZeroInput)?;
    if n <= EXACT_FACTOR_DEGREE {
        let mut degrees: Vec<usize> = factor_over_field(k, f)?.iter().map(|g| g.degree().unwrap()).collect();
        degrees.sort_unstable();
        return Ok(Signature { degrees, heuristic: false });
    }
    let pats = modular_patterns(k, f, SIGNATURE_PRIMES);
    let degrees = pats
        .into_iter()
        .map(|(_, d)| d)
        .min_by_key(|d| d.len())
        .ok_or_else(|| Error::Failed("no good primes".into()))?;
    Ok(Signature { degrees, heuristic: true })
}

/// Is an exact signature compatible with a modular pattern (each exact
/// factor splits into a sub-multiset of the pattern)? Checked greedily by
/// subset sums, which is enough for the small patterns met here.
pub fn refines(exact: &[usize], pattern: &[usize]) -> bool {
    fn go(exact: &[usize], pool: &mut Vec<usize>) -> bool {
        let Some((&first, rest)) = exact.split_first() else { return pool.is_empty() };
        // choose a sub-multiset of pool summing to `first`
        fn pick(target: usize, start: usize, pool: &mut Vec<usize>, rest: &[usize]) -> bool {
            if target == 0 {
                return go(rest, pool);
            }
            for i in start..pool.len() {
                if pool[i] <= target && (i == start || pool[i] != pool[i - 1]) {
                    let v = pool.remove(i);
                    if pick(target - v, i, pool, rest) {
                        pool.insert(i, v);
                        return true;
                    }
                    pool.insert(i, v);
                }
            }
            false
        }
        pick(first, 0, pool, rest)
    }
    let mut pool = pattern.to_vec();
    pool.sort_unstable();
    exact.iter().sum::<usize>() == pool.iter().sum::<usize>() && go(exact, &mut pool)
}

/// Necessary condition for the subgroup to be pointwise defined over a
/// quadratic extension: no factor of degree above 2.
pub fn pointwise_quadratic_feasible(sig: &Signature) -> bool {
    sig.degrees.iter().all(|&d| d <= 2)
}

/// Serializable summary of one kernel.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsogenyReport {
    pub order: u64,
    pub kernel_degree: usize,
    pub kernel: String,
    pub component_degrees: Vec<(u64, usize)>,
    pub signature: Signature,
    pub quadratic_feasible: bool,
}

pub fn report<K: NumberField>(k: &K, kp: &KernelPoly<K::Elem>) -> Result<IsogenyReport> {
    let sig = signature(k, &kp.poly)?;
    Ok(IsogenyReport {
        order: kp.order,
        kernel_degree: kp.degree(),
        kernel: format_poly(k, &kp.poly, "x"),
        component_degrees: kp.components.iter().map(|(n, h)| (*n, h.degree().unwrap_or(0))).collect(),
        quadratic_feasible: pointwise_quadratic_feasible(&sig),
        signature: sig,
    })
}

/// All stable kernels of order a·b (b = 1 for a single prime power).
pub fn cyclic_kernels<K: NumberField>(e: &WeierstrassCurve<K>, a: u64, b: u64) -> Result<Vec<KernelPoly<K::Elem>>> {
    let ka = stable_cyclic_kernels(e, a)?;
    if b == 1 {
        return Ok(ka);
    }
    if ka.is_empty() {
        return Ok(Vec::new());
    }
    let kb = stable_cyclic_kernels(e, b)?;
    let mut out = Vec::new();
    for ha in &ka {
        for hb in &kb {
            out.push(composite_kernel_poly(e, ha, hb)?);
        }
    }
    Ok(out)
}

/// A curve from the isogeny tables with its expected signature.
#[derive(Clone, Debug, Serialize)]
pub struct IsogenyRow {
    pub label: &'static str,
    /// Point on the modular curve model, as printed.
    pub point: &'static str,
    /// w² of the field of definition (0 for Q).
    pub w2: i64,
    pub curve: &'static str,
    pub j: Option<&'static str>,
    pub orders: (u64, u64),
    pub expected: &'static [usize],
}

/// Rational points of the X₀(21) model and their curves (a, b short form).
pub fn table2_rows() -> Vec<IsogenyRow> {
    let row = |label, point, curve, j, expected| IsogenyRow { label, point, w2: 0, curve, j: Some(j), orders: (3, 7), expected };
    vec![
        row("t2-1", "(-1/4,1/8)", "[20/441,-16/27783]", "3375/2", &[1, 3, 6]),
        row("t2-2", "(2,-1)", "[-1915/36,-48383/324]", "-189613868625/128", &[1, 3, 6]),
        row("t2-3", "(-1,2)", "[-505/192,-23053/6912]", "-1159088625/2097152", &[1, 3, 6]),
        row("t2-4", "(5,-13)", "[-1600/147,-134144/9261]", "-140625/8", &[1, 3, 3, 3]),
    ]
}

/// Exceptional quadratic points of X₀(33): one conjugate per row.
pub fn table3_rows() -> Vec<IsogenyRow> {
    let row = |label, point, w2, curve, expected| IsogenyRow { label, point, w2, curve, j: None, orders: (3, 11), expected };
    const A: &[usize] = &[1, 5, 10];
    vec![
        row("t3-1", "(w,w+2)", -2, "[420-360*w,-5600-1008*w]", A),
        row("t3-2", "(w,-w+1)", -2, "[420+360*w,-5600+1008*w]", A),
        row("t3-3", "(w-1,7*w-2)", -2, "[-2157/8+351/2*w,1539/4+44171/16*w]", A),
        row("t3-4", "(w-1,-5*w-5)", -2, "[363/8-1089/2*w,25047/4-64009/16*w]", A),
        row("t3-5", "(1/2*w,w-5/4)", -2, "[-8349/2,104544-847/2*w]", A),
        row("t3-6", "(1/2*w,-w+2)", -2, "[28011/2+2520*w,-244152+880397/2*w]", A),
        row("t3-7", "(1/2+1/2*w,-1)", -7, "[323829/128+296769/128*w,104422307/512+7944695/512*w]", A),
        row("t3-8", "(1/2+1/2*w,-w+1)", -7, "[-140211/128-27591/128*w,4638407/512+2704139/512*w]", A),
        row("t3-9", "(1/4+3/4*w,33/4-9/4*w)", -7, "[4365/8-2553/8*w,96359/8+2645/8*w]", A),
        row("t3-10", "(1/4+3/4*w,93/32-9/32*w)", -7, "[-2475/8-33/8*w,6611/8+11033/8*w]", &[1, 5, 5, 5]),
        row("t3-11", "(1/2+1/2*w,-w+1)", -11, "[-1056,-13552]", A),
    ]
}

/// Outcome of checking one table row.
#[derive(Clone, Debug, Serialize)]
pub struct RowCheck {
    pub label: String,
    pub field: String,
    pub kernels: Vec<IsogenyReport>,
    pub expected: Vec<usize>,
    /// Some kernel has exactly the expected degree (N−1)/2 and signature.
    pub pass: bool,
}

pub fn check_row_in<K: NumberField>(k: &K, row: &IsogenyRow) -> Result<RowCheck> {
    let e = crate::elliptic::parse_curve(k, row.curve)?;
    let (a, b) = row.orders;
    let kernels = cyclic_kernels(&e, a, b)?;
    let reports: Vec<IsogenyReport> = kernels.iter().map(|kp| report(k, kp)).collect::<Result<_>>()?;
    let want = kernel_degree(a * b);
    let pass = reports
        .iter()
        .any(|rep| rep.kernel_degree == want && !rep.signature.heuristic && rep.signature.degrees == row.expected && !rep.quadratic_feasible);
    Ok(RowCheck { label: row.label.into(), field: k.name(), kernels: reports, expected: row.expected.to_vec(), pass })
}

/// Checks a row over its own field.
pub fn check_row(row: &IsogenyRow) -> Result<RowCheck> {
    if row.w2 == 0 {
        check_row_in(&crate::Rationals, row)
    } else {
        check_row_in(&crate::QuadField::with_square(row.w2)?, row)
    }
}

/// Product ∏ (x − x(kP)), k = 1..(n−1)/2, for a point of odd order n.
pub fn kernel_from_point<F: Field>(e: &WeierstrassCurve<F>, p: &crate::elliptic::CurvePoint<F::Elem>, n: u64) -> Poly<F::Elem> {
    let r = PolyRing::new(e.field.clone());
    let mut h = r.one();
    let mut q = p.clone();
    for _ in 0..kernel_degree(n) {
        h = r.mul(&h, &r.linear(q.x().expect("point of order n")));
        q = e.add(&q, p);
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elliptic::parse_curve;
    use crate::rational::{qi, Rationals};
    use crate::QuadField;

    #[test]
    fn three_kernel_of_y2_x3_plus_1() {
        let e = WeierstrassCurve::short(Rationals, qi(0), qi(1)).unwrap();
        let ks = stable_cyclic_kernels(&e, 3).unwrap();
        let r = PolyRing::new(Rationals);
        assert!(ks.iter().any(|kp| kp.poly == r.x()));
    }

    #[test]
    fn kubert_seven_kernel_matches_point() {
        // Tate normal form, t = 2: b = t³ − t² = 4, c = t² − t = 2
        let e = WeierstrassCurve::from_i64s(Rationals, [-1, -4, -4, 0, 0]).unwrap();
        let p = e.point(qi(0), qi(0)).unwrap();
        assert_eq!(e.order_dividing(&p, 7), 7);
        let direct = kernel_from_point(&e, &p, 7);
        let ks = stable_cyclic_kernels(&e, 7).unwrap();
        assert!(ks.iter().any(|kp| kp.poly == direct));
    }

    #[test]
    fn table2_first_row() {
        let row = &table2_rows()[0];
        let e = parse_curve(&Rationals, row.curve).unwrap();
        assert_eq!(e.j_invariant(), row.j.unwrap().parse().unwrap());
        assert_eq!(stable_cyclic_kernels(&e, 3).unwrap().len(), 1);
        assert_eq!(stable_cyclic_kernels(&e, 7).unwrap()[0].degree(), 3);
        let chk = check_row(row).unwrap();
        assert!(chk.pass, "{chk:?}");
    }

    #[test]
    fn refinement() {
        assert!(refines(&[1, 3, 6], &[1, 3, 3, 3]));
        assert!(refines(&[1, 3, 6], &[1, 1, 1, 1, 6]));
        assert!(!refines(&[1, 3, 6], &[2, 2, 6]));
        assert!(pointwise_quadratic_feasible(&Signature { degrees: vec![1, 1, 2], heuristic: false }));
    }

    #[test]
    fn composite_orders_must_be_coprime() {
        let k = QuadField::with_square(-2).unwrap();
        let e = parse_curve(&k, "[0,0,1,0,-7]").unwrap();
        let r = PolyRing::new(k);
        let h = KernelPoly { order: 3, poly: r.x(), components: vec![] };
        assert_eq!(composite_kernel_poly(&e, &h, &h), Err(Error::IncompatibleOrders(3, 3)));
    }
}
