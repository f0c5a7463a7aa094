//! Elliptic curves in long Weierstrass form over an abstract field.

pub mod divpoly;
pub mod finite;

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::numfield::{NumberField, ResiduePrime};
use crate::poly::{Poly, PolyRing};
use crate::qfield::QuadElem;
use crate::ring::{Field, Ring};
use crate::Fq;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum CurvePoint<E> {
    Infinity,
    Affine(E, E),
}

impl<E> CurvePoint<E> {
    pub fn is_infinity(&self) -> bool {
        matches!(self, CurvePoint::Infinity)
    }

    pub fn x(&self) -> Option<&E> {
        match self {
            CurvePoint::Affine(x, _) => Some(x),
            CurvePoint::Infinity => None,
        }
    }

    pub fn y(&self) -> Option<&E> {
        match self {
            CurvePoint::Affine(_, y) => Some(y),
            CurvePoint::Infinity => None,
        }
    }
}

/// y² + a1·xy + a3·y = x³ + a2·x² + a4·x + a6
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeierstrassCurve<F: Ring> {
    pub field: F,
    pub a: [F::Elem; 5],
}

impl<F: Field> WeierstrassCurve<F> {
    /// Nonsingular curve from [a1, a2, a3, a4, a6].
    pub fn new(field: F, a: [F::Elem; 5]) -> Result<Self> {
        let e = WeierstrassCurve { field, a };
        if e.field.is_zero(&e.discriminant()) {
            return Err(Error::InvalidInput("singular curve (discriminant 0)".into()));
        }
        Ok(e)
    }

    /// Curve from [a4, a6].
    pub fn short(field: F, a4: F::Elem, a6: F::Elem) -> Result<Self> {
        let z = field.zero();
        Self::new(field, [z.clone(), z.clone(), z, a4, a6])
    }

    pub fn from_i64s(field: F, a: [i64; 5]) -> Result<Self> {
        let c = a.map(|x| field.from_i64(x));
        Self::new(field, c)
    }

    pub fn a1(&self) -> &F::Elem {
        &self.a[0]
    }
    pub fn a2(&self) -> &F::Elem {
        &self.a[1]
    }
    pub fn a3(&self) -> &F::Elem {
        &self.a[2]
    }
    pub fn a4(&self) -> &F::Elem {
        &self.a[3]
    }
    pub fn a6(&self) -> &F::Elem {
        &self.a[4]
    }

    /// (b2, b4, b6, b8)
    pub fn b_invariants(&self) -> [F::Elem; 4] {
        let k = &self.field;
        let [a1, a2, a3, a4, a6] = &self.a;
        let b2 = k.add(&k.mul(a1, a1), &k.mul_i64(a2, 4));
        let b4 = k.add(&k.mul_i64(a4, 2), &k.mul(a1, a3));
        let b6 = k.add(&k.mul(a3, a3), &k.mul_i64(a6, 4));
        let b8 = {
            let t1 = k.mul(&k.mul(a1, a1), a6);
            let t2 = k.mul_i64(&k.mul(a2, a6), 4);
            let t3 = k.mul(&k.mul(a1, a3), a4);
            let t4 = k.mul(&k.mul(a2, a3), a3);
            let t5 = k.mul(a4, a4);
            k.sub(&k.add(&k.sub(&k.add(&t1, &t2), &t3), &t4), &t5)
        };
        [b2, b4, b6, b8]
    }

    /// (c4, c6)
    pub fn c_invariants(&self) -> [F::Elem; 2] {
        let k = &self.field;
        let [b2, b4, b6, _] = self.b_invariants();
        let b22 = k.mul(&b2, &b2);
        let c4 = k.sub(&b22, &k.mul_i64(&b4, 24));
        let c6 = k.add(
            &k.sub(&k.neg(&k.mul(&b22, &b2)), &k.mul_i64(&k.mul(&b2, &b4), -36)),
            &k.mul_i64(&b6, -216),
        );
        [c4, c6]
    }

    pub fn discriminant(&self) -> F::Elem {
        let k = &self.field;
        let [b2, b4, b6, b8] = self.b_invariants();
        let t1 = k.neg(&k.mul(&k.mul(&b2, &b2), &b8));
        let t2 = k.mul_i64(&k.mul(&k.mul(&b4, &b4), &b4), -8);
        let t3 = k.mul_i64(&k.mul(&b6, &b6), -27);
        let t4 = k.mul_i64(&k.mul(&k.mul(&b2, &b4), &b6), 9);
        k.add(&k.add(&t1, &t2), &k.add(&t3, &t4))
    }

    pub fn j_invariant(&self) -> F::Elem {
        let k = &self.field;
        let [c4, _] = self.c_invariants();
        k.div(&k.mul(&k.mul(&c4, &c4), &c4), &self.discriminant()).unwrap()
    }

    /// 4x³ + b2x² + 2b4x + b6 (= (2y + a1x + a3)² on the curve).
    pub fn two_torsion_cubic(&self) -> Poly<F::Elem> {
        let k = &self.field;
        let [b2, b4, b6, _] = self.b_invariants();
        PolyRing::new(k.clone()).from_coeffs(vec![b6, k.mul_i64(&b4, 2), b2, k.from_i64(4)])
    }

    pub fn contains(&self, p: &CurvePoint<F::Elem>) -> bool {
        match p {
            CurvePoint::Infinity => true,
            CurvePoint::Affine(x, y) => self.field.is_zero(&self.equation(x, y)),
        }
    }

    /// Left side minus right side of the curve equation.
    pub fn equation(&self, x: &F::Elem, y: &F::Elem) -> F::Elem {
        let k = &self.field;
        let [a1, a2, a3, a4, a6] = &self.a;
        let lhs = k.add(&k.mul(y, y), &k.mul(y, &k.add(&k.mul(a1, x), a3)));
        let x2 = k.mul(x, x);
        let rhs = k.add(&k.add(&k.mul(&x2, x), &k.mul(a2, &x2)), &k.add(&k.mul(a4, x), a6));
        k.sub(&lhs, &rhs)
    }

    pub fn point(&self, x: F::Elem, y: F::Elem) -> Result<CurvePoint<F::Elem>> {
        let p = CurvePoint::Affine(x, y);
        if self.contains(&p) {
            Ok(p)
        } else {
            Err(Error::PointNotOnCurve)
        }
    }

    /// Right side minus the linear y-term: y² + (a1x + a3)y − g(x) = 0.
    /// Returns the discriminant in y, i.e. 4x³ + b2x² + 2b4x + b6 at x.
    pub fn y_discriminant(&self, x: &F::Elem) -> F::Elem {
        PolyRing::new(self.field.clone()).eval(&self.two_torsion_cubic(), x)
    }

    pub fn neg(&self, p: &CurvePoint<F::Elem>) -> CurvePoint<F::Elem> {
        let k = &self.field;
        match p {
            CurvePoint::Infinity => CurvePoint::Infinity,
            CurvePoint::Affine(x, y) => {
                let ny = k.sub(&k.neg(y), &k.add(&k.mul(self.a1(), x), self.a3()));
                CurvePoint::Affine(x.clone(), ny)
            }
        }
    }

    pub fn add(&self, p: &CurvePoint<F::Elem>, q: &CurvePoint<F::Elem>) -> CurvePoint<F::Elem> {
        let k = &self.field;
        let (x1, y1, x2, y2) = match (p, q) {
            (CurvePoint::Infinity, _) => return q.clone(),
            (_, CurvePoint::Infinity) => return p.clone(),
            (CurvePoint::Affine(x1, y1), CurvePoint::Affine(x2, y2)) => (x1, y1, x2, y2),
        };
        let [a1, a2, a3, a4, _] = &self.a;
        let lambda = if x1 == x2 {
            // Q = −P (covers 2-torsion doubling too)
            if k.is_zero(&k.add(&k.add(y1, y2), &k.add(&k.mul(a1, x2), a3))) {
                return CurvePoint::Infinity;
            }
            let denom = k.add(&k.add(&k.mul_i64(y1, 2), &k.mul(a1, x1)), a3);
            let num = k.sub(
                &k.add(&k.add(&k.mul_i64(&k.mul(x1, x1), 3), &k.mul_i64(&k.mul(a2, x1), 2)), a4),
                &k.mul(a1, y1),
            );
            k.div(&num, &denom).unwrap()
        } else {
            k.div(&k.sub(y2, y1), &k.sub(x2, x1)).unwrap()
        };
        let nu = k.sub(y1, &k.mul(&lambda, x1));
        let x3 = k.sub(
            &k.sub(&k.add(&k.mul(&lambda, &lambda), &k.mul(a1, &lambda)), a2),
            &k.add(x1, x2),
        );
        let y3 = k.sub(&k.sub(&k.neg(&k.mul(&k.add(&lambda, a1), &x3)), &nu), a3);
        CurvePoint::Affine(x3, y3)
    }

    pub fn double(&self, p: &CurvePoint<F::Elem>) -> CurvePoint<F::Elem> {
        self.add(p, p)
    }

    pub fn sub(&self, p: &CurvePoint<F::Elem>, q: &CurvePoint<F::Elem>) -> CurvePoint<F::Elem> {
        self.add(p, &self.neg(q))
    }

    pub fn mul(&self, n: i64, p: &CurvePoint<F::Elem>) -> CurvePoint<F::Elem> {
        self.mul_big(&BigInt::from(n), p)
    }

    pub fn mul_big(&self, n: &BigInt, p: &CurvePoint<F::Elem>) -> CurvePoint<F::Elem> {
        if n.is_negative() {
            return self.neg(&self.mul_big(&-n, p));
        }
        let mut acc = CurvePoint::Infinity;
        for i in (0..n.bits()).rev() {
            acc = self.double(&acc);
            if n.bit(i) {
                acc = self.add(&acc, p);
            }
        }
        acc
    }

    /// Exact order of a point known to be killed by `bound_multiple`.
    pub fn order_dividing(&self, p: &CurvePoint<F::Elem>, multiple: u64) -> u64 {
        let mut n = multiple;
        for (q, _) in crate::arith::factor_u64(multiple.max(1)) {
            while n % q == 0 && self.mul(n as i64 / q as i64, p).is_infinity() {
                n /= q;
            }
        }
        n
    }

    /// Exact order when finite and ≤ limit, by repeated addition.
    pub fn small_order(&self, p: &CurvePoint<F::Elem>, limit: u64) -> Option<u64> {
        let mut q = p.clone();
        for n in 1..=limit {
            if q.is_infinity() {
                return Some(n);
            }
            q = self.add(&q, p);
        }
        None
    }

    /// Completed-square model y² = x³ + a·x² + b·x + c (odd characteristic):
    /// returns (a, b, c) = (b2/4, b4/2, b6/4).
    pub fn completed_square(&self) -> [F::Elem; 3] {
        let k = &self.field;
        let [b2, b4, b6, _] = self.b_invariants();
        let q4 = k.inv(&k.from_i64(4)).unwrap();
        let q2 = k.inv(&k.from_i64(2)).unwrap();
        [k.mul(&b2, &q4), k.mul(&b4, &q2), k.mul(&b6, &q4)]
    }

    /// Quadratic twist: complete the square, then
    /// y² = x³ + d·a·x² + d²·b·x + d³·c.
    pub fn quadratic_twist(&self, d: &F::Elem) -> Result<Self> {
        let k = &self.field;
        if k.is_zero(d) {
            return Err(Error::ZeroTwist);
        }
        let [a, b, c] = self.completed_square();
        let d2 = k.mul(d, d);
        let d3 = k.mul(&d2, d);
        let z = k.zero();
        Self::new(k.clone(), [z.clone(), k.mul(d, &a), z, k.mul(&d2, &b), k.mul(&d3, &c)])
    }

    /// Coefficients uⁱ·aᵢ: the model reached by (x, y) → (u²x, u³y).
    pub fn scaled(&self, u: &F::Elem) -> Self {
        let k = &self.field;
        let weights = [1u64, 2, 3, 4, 6];
        let a = std::array::from_fn(|i| k.mul(&self.a[i], &k.pow(u, weights[i])));
        WeierstrassCurve { field: k.clone(), a }
    }

    /// Map a point along [`Self::scaled`] by u: (x, y) → (u²x, u³y).
    pub fn scale_point(&self, u: &F::Elem, p: &CurvePoint<F::Elem>) -> CurvePoint<F::Elem> {
        let k = &self.field;
        match p {
            CurvePoint::Infinity => CurvePoint::Infinity,
            CurvePoint::Affine(x, y) => {
                let u2 = k.mul(u, u);
                CurvePoint::Affine(k.mul(x, &u2), k.mul(y, &k.mul(&u2, u)))
            }
        }
    }

    pub fn map_field<G: Field>(&self, g: &G, m: impl Fn(&F::Elem) -> G::Elem) -> Result<WeierstrassCurve<G>> {
        WeierstrassCurve::new(g.clone(), self.a.clone().map(|x| m(&x)))
    }

    /// Points with the given x-coordinate (0, 1 or 2), odd characteristic.
    pub fn lift_x(&self, x: &F::Elem, sqrt: impl Fn(&F::Elem) -> Option<F::Elem>) -> Vec<CurvePoint<F::Elem>> {
        let k = &self.field;
        let disc = self.y_discriminant(x);
        let Some(s) = sqrt(&disc) else { return Vec::new() };
        let half = k.inv(&k.from_i64(2)).unwrap();
        let lin = k.add(&k.mul(self.a1(), x), self.a3());
        let y1 = k.mul(&k.sub(&s, &lin), &half);
        if k.is_zero(&s) {
            return vec![CurvePoint::Affine(x.clone(), y1)];
        }
        let y2 = k.mul(&k.sub(&k.neg(&s), &lin), &half);
        vec![CurvePoint::Affine(x.clone(), y1), CurvePoint::Affine(x.clone(), y2)]
    }
}

impl<K: NumberField> WeierstrassCurve<K> {
    /// Integral model: the least positive integer u with every uⁱ·aᵢ
    /// integral. Returns (model, u).
    pub fn integral_model(&self) -> (Self, BigInt) {
        let k = &self.field;
        let weights = [1u32, 2, 3, 4, 6];
        let mut need: std::collections::BTreeMap<BigInt, u32> = Default::default();
        for (c, w) in self.a.iter().zip(weights) {
            for (l, e) in crate::arith::factor(&k.denominator(c)) {
                let m = need.entry(l).or_insert(0);
                *m = (*m).max(e.div_ceil(w));
            }
        }
        let u = need.iter().fold(BigInt::one(), |acc, (l, e)| acc * l.pow(*e));
        let ue = k.from_rational(&BigRational::from_integer(u.clone()));
        (self.scaled(&ue), u)
    }

    /// True iff the two-torsion cubic has no root in the field.
    pub fn two_torsion_trivial(&self) -> bool {
        crate::poly::factor::roots_in_field(&self.field, &self.two_torsion_cubic()).is_empty()
    }

    pub fn is_integral(&self) -> bool {
        self.a.iter().all(|c| self.field.is_integral(c))
    }

    /// Reduction at a residue prime. The model must be integral.
    pub fn reduce_at(&self, prime: &ResiduePrime) -> Result<WeierstrassCurve<Fq>> {
        let k = &self.field;
        if !self.is_integral() {
            return Err(Error::DenominatorClash(prime.label.clone()));
        }
        let a = self
            .a
            .iter()
            .map(|c| prime.reduce(k, c).ok_or_else(|| Error::DenominatorClash(prime.label.clone())))
            .collect::<Result<Vec<_>>>()?;
        let e = WeierstrassCurve { field: prime.field.clone(), a: [a[0], a[1], a[2], a[3], a[4]] };
        if e.field.is_zero(&e.discriminant()) {
            return Err(Error::BadReduction(prime.label.clone()));
        }
        Ok(e)
    }

    pub fn reduce_point(&self, prime: &ResiduePrime, p: &CurvePoint<K::Elem>) -> Option<CurvePoint<u64>> {
        match p {
            CurvePoint::Infinity => Some(CurvePoint::Infinity),
            CurvePoint::Affine(x, y) => Some(CurvePoint::Affine(
                prime.reduce(&self.field, x)?,
                prime.reduce(&self.field, y)?,
            )),
        }
    }

    pub fn to_quad_coeffs(&self) -> [QuadElem; 5] {
        self.a.clone().map(|c| self.field.to_quad(&c))
    }

    pub fn fmt_point(&self, p: &CurvePoint<K::Elem>) -> String {
        match p {
            CurvePoint::Infinity => "O".into(),
            CurvePoint::Affine(x, y) => format!("({}, {})", NumberField::fmt(&self.field, x), NumberField::fmt(&self.field, y)),
        }
    }

    pub fn coeff_string(&self) -> String {
        let parts: Vec<String> = self.a.iter().map(|c| NumberField::fmt(&self.field, c)).collect();
        format!("[{}]", parts.join(","))
    }
}

/// Parse "[a1,a2,a3,a4,a6]" or "[a4,a6]" with entries in the quadratic
/// element format.
pub fn parse_coefficients(s: &str) -> Result<[QuadElem; 5]> {
    let t = s.trim();
    let inner = t
        .strip_prefix('[')
        .and_then(|x| x.strip_suffix(']'))
        .ok_or_else(|| Error::Parse(format!("curve must be bracketed: {s}")))?;
    let parts: Vec<QuadElem> = inner.split(',').map(|p| p.trim().parse()).collect::<Result<_>>()?;
    match parts.len() {
        5 => Ok([parts[0].clone(), parts[1].clone(), parts[2].clone(), parts[3].clone(), parts[4].clone()]),
        2 => Ok([QuadElem::default(), QuadElem::default(), QuadElem::default(), parts[0].clone(), parts[1].clone()]),
        n => Err(Error::Parse(format!("expected 2 or 5 coefficients, got {n}"))),
    }
}

/// Build a curve over K from text.
pub fn parse_curve<K: NumberField>(k: &K, s: &str) -> Result<WeierstrassCurve<K>> {
    let c = parse_coefficients(s)?;
    let a = c
        .iter()
        .map(|q| k.from_quad(q).ok_or_else(|| Error::Parse(format!("coefficient {q} not in {}", k.name()))))
        .collect::<Result<Vec<_>>>()?;
    WeierstrassCurve::new(k.clone(), [a[0].clone(), a[1].clone(), a[2].clone(), a[3].clone(), a[4].clone()])
}

impl<K: NumberField> fmt::Display for WeierstrassCurve<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} over {}", self.coeff_string(), self.field.name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qfield::QuadField;
    use crate::rational::{qi, Rationals};

    #[test]
    fn invariants_relations() {
        let e = WeierstrassCurve::from_i64s(Rationals, [1, 0, 0, -4, -1]).unwrap();
        let k = Rationals;
        let [b2, b4, b6, b8] = e.b_invariants();
        assert_eq!(k.mul_i64(&b8, 4), &b2 * &b6 - &b4 * &b4);
        let [c4, c6] = e.c_invariants();
        assert_eq!(k.mul_i64(&e.discriminant(), 1728), &c4 * &c4 * &c4 - &c6 * &c6);
        assert_eq!(e.discriminant(), qi(3969)); // 21a1: Δ = 3⁴·7²
    }

    #[test]
    fn group_law_basics() {
        let e = WeierstrassCurve::from_i64s(Rationals, [1, 0, 0, -4, -1]).unwrap();
        let p = e.point(qi(-1), qi(-1)).unwrap();
        let q = e.add(&p, &CurvePoint::Infinity);
        assert_eq!(q, p);
        assert!(e.add(&p, &e.neg(&p)).is_infinity());
        // torsion Z2 ⊕ Z4 has exponent 4
        assert!(e.mul(4, &p).is_infinity() || e.mul(2, &p).is_infinity());
    }

    #[test]
    fn twist_example() {
        let e = WeierstrassCurve::from_i64s(Rationals, [0, 0, 0, 1, 1]).unwrap();
        let t = e.quadratic_twist(&qi(2)).unwrap();
        assert_eq!(t.a, [qi(0), qi(0), qi(0), qi(4), qi(8)]);
        assert_eq!(t.j_invariant(), e.j_invariant());
        assert!(e.quadratic_twist(&qi(0)).is_err());
    }

    #[test]
    fn parse_and_integral_model() {
        let k = QuadField::imaginary(2).unwrap();
        let e = parse_curve(&k, "[20/441,-16/27783]").unwrap();
        let (m, u) = e.integral_model();
        assert!(m.is_integral());
        assert_eq!(u, BigInt::from(21));
        assert_eq!(m.j_invariant(), e.j_invariant());
    }
}
