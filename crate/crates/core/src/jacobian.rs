//! Hyperelliptic curves y² + h·y = f of genus ≤ 3: point counts over
//! F_{p^k}, L-polynomials, Jacobian arithmetic over F_p in (balanced)
//! Mumford form, group structure, and orders of rational divisor classes
//! via reduction.
//!
//! Arithmetic always runs on the completed model Y² = F with F = 4f + h²
//! (or F = f when h = 0). Even-degree models with square leading
//! coefficient keep both points at infinity; divisors carry a balance
//! counter for ∞₊ instead of moving a point to infinity.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::arith::{exact_sqrt, factor_u64, inv_mod, is_prime_u64};
use crate::error::{Error, Result};
use crate::ff::Fq;
use crate::poly::finite::is_irreducible;
use crate::poly::text::format_poly;
use crate::poly::{Poly, PolyRing};
use crate::rational::{fmt_rational, Rationals};
use crate::ring::{Field, Ring};
use crate::FqPoly;

/// Largest field size enumerated by the point counter.
pub const MAX_COUNT_FIELD: u64 = 2_000_000;
/// Largest Jacobian handled by the structure computation.
pub const MAX_GROUP_ORDER: u64 = 1_000_000;

/// y² + h(x)·y = f(x) over Q with integer coefficients (low degree first).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HyperCurve {
    pub f: Vec<BigInt>,
    pub h: Vec<BigInt>,
}

/// A rational point on a [`HyperCurve`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CurvePoint {
    Affine(BigRational, BigRational),
    /// The point at infinity where Y/x^{g+1} → +√lc(F) on the completed model.
    InfPlus,
    InfMinus,
    /// The single point at infinity of an odd-degree model.
    Inf,
}

fn trim(mut c: Vec<BigInt>) -> Vec<BigInt> {
    while c.last().is_some_and(|a| a.is_zero()) {
        c.pop();
    }
    c
}

fn int_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn eval_q(c: &[BigInt], x: &BigRational) -> BigRational {
    c.iter()
        .rev()
        .fold(BigRational::zero(), |acc, a| acc * x + BigRational::from_integer(a.clone()))
}

fn reduce_int(a: &BigInt, p: u64) -> u64 {
    a.mod_floor(&BigInt::from(p)).to_u64().unwrap()
}

fn reduce_rational(a: &BigRational, p: u64) -> Result<u64> {
    let d = reduce_int(a.denom(), p);
    let inv = inv_mod(d, p).ok_or_else(|| Error::DenominatorClash(format!("{} at {p}", fmt_rational(a))))?;
    Ok(crate::arith::mul_mod(reduce_int(a.numer(), p), inv, p))
}

impl HyperCurve {
    pub fn new(f: Vec<BigInt>, h: Vec<BigInt>) -> Result<Self> {
        let c = HyperCurve { f: trim(f), h: trim(h) };
        let big_f = c.model_poly();
        let n = big_f.len().saturating_sub(1);
        if n < 3 {
            return Err(Error::InvalidInput("model has genus 0".into()));
        }
        let g = (n - 1) / 2;
        if g > 3 {
            return Err(Error::InvalidInput(format!("genus {g} exceeds 3")));
        }
        if c.h.len() > g + 2 {
            return Err(Error::InvalidInput("deg h exceeds g + 1".into()));
        }
        let r = PolyRing::new(Rationals);
        let fq = r.from_ints(&big_f);
        if !r.is_squarefree(&fq) {
            return Err(Error::NotSquarefree);
        }
        Ok(c)
    }

    pub fn from_i64s(f: &[i64], h: &[i64]) -> Result<Self> {
        Self::new(f.iter().map(|&a| BigInt::from(a)).collect(), h.iter().map(|&a| BigInt::from(a)).collect())
    }

    /// F with Y² = F: 4f + h², or f itself when h = 0.
    pub fn model_poly(&self) -> Vec<BigInt> {
        if self.h.is_empty() {
            return self.f.clone();
        }
        let four: Vec<BigInt> = self.f.iter().map(|a| a * 4).collect();
        let hh = int_mul(&self.h, &self.h);
        let n = four.len().max(hh.len());
        trim((0..n)
            .map(|i| four.get(i).cloned().unwrap_or_default() + hh.get(i).cloned().unwrap_or_default())
            .collect())
    }

    pub fn degree(&self) -> usize {
        self.model_poly().len() - 1
    }

    pub fn genus(&self) -> usize {
        (self.degree() - 1) / 2
    }

    pub fn is_even_degree(&self) -> bool {
        self.degree() % 2 == 0
    }

    /// √lc(F) when it is rational (both points at infinity are rational).
    pub fn lc_sqrt(&self) -> Option<BigInt> {
        let f = self.model_poly();
        let lc = f.last()?;
        if !self.is_even_degree() || lc.is_negative() {
            return None;
        }
        exact_sqrt(lc)
    }

    /// Odd, does not divide lc(F), and F stays squarefree mod p.
    pub fn is_good_prime(&self, p: u64) -> bool {
        if p == 2 || !is_prime_u64(p) {
            return false;
        }
        let f = self.model_poly();
        if reduce_int(f.last().unwrap(), p) == 0 {
            return false;
        }
        let r = PolyRing::new(Fq::prime(p));
        r.is_squarefree(&r.from_coeffs(f.iter().map(|a| reduce_int(a, p)).collect()))
    }

    pub fn reduce(&self, p: u64) -> Result<FfCurve> {
        if !self.is_good_prime(p) {
            return Err(Error::BadReductionPrime(p));
        }
        let fp = Fq::prime(p);
        let coeffs: Vec<u64> = self.model_poly().iter().map(|a| reduce_int(a, p)).collect();
        let mut c = FfCurve::new(fp, coeffs)?;
        if let Some(s) = self.lc_sqrt() {
            c.lc_sqrt = Some(reduce_int(&s, p));
        }
        Ok(c)
    }

    /// Y-coordinate on the completed model of an affine point.
    pub fn model_y(&self, x: &BigRational, y: &BigRational) -> BigRational {
        if self.h.is_empty() {
            y.clone()
        } else {
            y * BigRational::from_integer(2.into()) + eval_q(&self.h, x)
        }
    }

    pub fn contains(&self, pt: &CurvePoint) -> bool {
        match pt {
            CurvePoint::Affine(x, y) => y * y + eval_q(&self.h, x) * y == eval_q(&self.f, x),
            CurvePoint::InfPlus | CurvePoint::InfMinus => self.lc_sqrt().is_some(),
            CurvePoint::Inf => !self.is_even_degree(),
        }
    }

    /// Point from weighted projective coordinates [X : Y : Z] with Y of
    /// weight g + 1 on the original model.
    pub fn point_from_weighted(&self, xs: &BigRational, ys: &BigRational, zs: &BigRational) -> Result<CurvePoint> {
        let g = self.genus() as i32;
        if !zs.is_zero() {
            let x = xs / zs;
            let y = ys / num_traits::pow(zs.clone(), (g + 1) as usize);
            let pt = CurvePoint::Affine(x, y);
            return if self.contains(&pt) { Ok(pt) } else { Err(Error::PointNotOnCurve) };
        }
        if xs.is_zero() {
            return Err(Error::PointNotOnCurve);
        }
        if !self.is_even_degree() {
            return Ok(CurvePoint::Inf);
        }
        // η = y/x^{g+1} at infinity; on the completed model Y/x^{g+1} → 2η + h_{g+1}
        let eta = ys / num_traits::pow(xs.clone(), (g + 1) as usize);
        let hg = self.h.get(g as usize + 1).cloned().unwrap_or_default();
        let fg = self.f.get(2 * g as usize + 2).cloned().unwrap_or_default();
        if &eta * &eta + BigRational::from_integer(hg.clone()) * &eta != BigRational::from_integer(fg) {
            return Err(Error::PointNotOnCurve);
        }
        let lim = if self.h.is_empty() { eta } else { eta * BigRational::from_integer(2.into()) + BigRational::from_integer(hg) };
        let s = self.lc_sqrt().ok_or(Error::PointNotOnCurve)?;
        Ok(if lim == BigRational::from_integer(s) { CurvePoint::InfPlus } else { CurvePoint::InfMinus })
    }
}

impl fmt::Display for CurvePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CurvePoint::Affine(x, y) => write!(f, "({}, {})", fmt_rational(x), fmt_rational(y)),
            CurvePoint::InfPlus => write!(f, "inf+"),
            CurvePoint::InfMinus => write!(f, "inf-"),
            CurvePoint::Inf => write!(f, "inf"),
        }
    }
}

/// Y² = F over F_p (F squarefree).
#[derive(Clone, Debug)]
pub struct FfCurve {
    pub field: Fq,
    pub f: FqPoly,
    pub genus: usize,
    /// Chosen √lc(F) naming ∞₊, when it exists in F_p.
    pub lc_sqrt: Option<u64>,
}

impl FfCurve {
    pub fn new(field: Fq, coeffs: Vec<u64>) -> Result<Self> {
        if field.k() != 1 || field.p() == 2 {
            return Err(Error::UnsupportedField("curves are defined over odd prime fields".into()));
        }
        let r = PolyRing::new(field.clone());
        let f = r.from_coeffs(coeffs.into_iter().map(|c| c % field.p()).collect());
        let n = f.degree().unwrap_or(0);
        if n < 3 {
            return Err(Error::InvalidInput("model has genus 0".into()));
        }
        if !r.is_squarefree(&f) {
            return Err(Error::NotSquarefree);
        }
        let genus = (n - 1) / 2;
        let lc_sqrt = if n % 2 == 0 { field.sqrt(*f.lc().unwrap()) } else { None };
        Ok(FfCurve { field, f, genus, lc_sqrt })
    }

    pub fn p(&self) -> u64 {
        self.field.p()
    }

    pub fn is_even_degree(&self) -> bool {
        self.f.degree().unwrap() % 2 == 0
    }

    /// #C(F_{p^k}) on the smooth model.
    pub fn count_points(&self, k: u32) -> Result<u64> {
        let p = self.p();
        let q = p
            .checked_pow(k)
            .filter(|&q| q <= MAX_COUNT_FIELD)
            .ok_or_else(|| Error::FieldTooLarge(format!("{p}^{k}")))?;
        let l = Fq::new(p, k)?;
        let mut is_sq = vec![false; q as usize];
        for a in l.elements() {
            is_sq[l.mul(&a, &a) as usize] = true;
        }
        // coefficients lie in the prime field, whose elements embed as themselves
        let coeffs = self.f.coeffs();
        let mut affine: u64 = 0;
        for x in l.elements() {
            let v = coeffs.iter().rev().fold(0u64, |acc, c| l.add(&l.mul(&acc, &x), c));
            affine += if v == 0 { 1 } else if is_sq[v as usize] { 2 } else { 0 };
        }
        let inf = if !self.is_even_degree() {
            1
        } else if is_sq[*self.f.lc().unwrap() as usize] {
            2
        } else {
            0
        };
        Ok(affine + inf)
    }

    pub fn l_polynomial(&self) -> Result<LPolynomial> {
        let counts = (1..=self.genus as u32).map(|k| self.count_points(k)).collect::<Result<Vec<_>>>()?;
        Ok(LPolynomial::from_counts(self.p(), self.genus, &counts))
    }
}

/// P(T) = Σ c_i T^i, the numerator of the zeta function.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LPolynomial {
    pub p: u64,
    pub genus: usize,
    pub coeffs: Vec<i64>,
}

impl LPolynomial {
    /// From #C(F_{p^k}) for k = 1..g via Newton's identities.
    pub fn from_counts(p: u64, genus: usize, counts: &[u64]) -> Self {
        let g = genus;
        let pi = p as i128;
        let s: Vec<i128> = (1..=g).map(|k| pi.pow(k as u32) + 1 - counts[k - 1] as i128).collect();
        let mut c = vec![0i128; 2 * g + 1];
        c[0] = 1;
        for k in 1..=g {
            let acc: i128 = (1..=k).map(|i| s[i - 1] * c[k - i]).sum();
            c[k] = -acc / k as i128;
        }
        for i in 0..g {
            c[2 * g - i] = pi.pow((g - i) as u32) * c[i];
        }
        LPolynomial { p, genus, coeffs: c.into_iter().map(|a| a as i64).collect() }
    }

    /// P(1) = #J(F_p).
    pub fn jacobian_order(&self) -> u64 {
        self.coeffs.iter().sum::<i64>() as u64
    }

    pub fn functional_equation_holds(&self) -> bool {
        let g = self.genus;
        (0..=g).all(|i| self.coeffs[2 * g - i] as i128 == (self.p as i128).pow((g - i) as u32) * self.coeffs[i] as i128)
    }

    /// #C(F_{p^k}) predicted by P.
    pub fn predicted_count(&self, k: usize) -> i128 {
        let c: Vec<i128> = self.coeffs.iter().map(|&a| a as i128).collect();
        let coef = |j: usize| c.get(j).copied().unwrap_or(0);
        let mut s = vec![0i128; k + 1];
        for m in 1..=k {
            let acc: i128 = (1..m).map(|i| s[i] * coef(m - i)).sum();
            s[m] = -(m as i128) * coef(m) - acc;
        }
        (self.p as i128).pow(k as u32) + 1 - s[k]
    }
}

/// Reduced divisor class: D(u, v) + a·∞₊ + b·∞₋ with deg u + a + b = 0,
/// deg u ≤ g. `balance` = a + ⌈g/2⌉ ∈ [0, g − deg u] on split models and
/// 0 on odd-degree models (D(u, v) − deg u·∞).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MumfordDivisor {
    pub u: Vec<u64>,
    pub v: Vec<u64>,
    pub balance: i64,
}

#[derive(Clone, Debug)]
enum Model {
    Odd,
    Split { vplus: FqPoly },
}

/// A rational point of the completed model over F_p.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FfPoint {
    Affine(u64, u64),
    InfPlus,
    InfMinus,
    Inf,
}

/// J(F_p) of an [`FfCurve`] with arithmetic in balanced Mumford form.
#[derive(Clone, Debug)]
pub struct Jacobian {
    pub curve: FfCurve,
    r: PolyRing<Fq>,
    model: Model,
}

/// Unreduced working form (u, v, a) with b = −deg u − a implicit.
struct Work {
    u: FqPoly,
    v: FqPoly,
    a: i64,
}

fn deg(f: &FqPoly) -> i64 {
    f.deg() as i64
}

impl Jacobian {
    pub fn new(curve: FfCurve) -> Result<Self> {
        let r = PolyRing::new(curve.field.clone());
        let model = if !curve.is_even_degree() {
            Model::Odd
        } else {
            let s = curve
                .lc_sqrt
                .ok_or_else(|| Error::UnsupportedField("leading coefficient is not a square (inert model)".into()))?;
            Model::Split { vplus: sqrt_part(&r, &curve.f, s, curve.genus) }
        };
        Ok(Jacobian { curve, r, model })
    }

    pub fn genus(&self) -> usize {
        self.curve.genus
    }

    pub fn is_split(&self) -> bool {
        matches!(self.model, Model::Split { .. })
    }

    fn ceil_half(&self) -> i64 {
        (self.genus() as i64 + 1) / 2
    }

    pub fn zero(&self) -> MumfordDivisor {
        MumfordDivisor { u: vec![1], v: vec![], balance: if self.is_split() { self.ceil_half() } else { 0 } }
    }

    pub fn is_zero(&self, d: &MumfordDivisor) -> bool {
        *d == self.zero()
    }

    fn work(&self, d: &MumfordDivisor) -> Work {
        let u = self.r.from_coeffs(d.u.clone());
        let v = self.r.from_coeffs(d.v.clone());
        let a = if self.is_split() { d.balance - self.ceil_half() } else { 0 };
        Work { u, v, a }
    }

    /// Membership test for the reduced representation.
    pub fn is_valid(&self, d: &MumfordDivisor) -> bool {
        let Work { u, v, .. } = self.work(d);
        if d.u.last() != Some(&1) || d.u.iter().chain(&d.v).any(|&c| c >= self.curve.p()) {
            return false;
        }
        let du = deg(&u);
        if du > self.genus() as i64 || deg(&v) >= du {
            return false;
        }
        let lhs = self.r.sub(&self.r.mul(&v, &v), &self.curve.f);
        if !self.r.divides(&u, &lhs) {
            return false;
        }
        if self.is_split() {
            (0..=self.genus() as i64 - du).contains(&d.balance)
        } else {
            d.balance == 0
        }
    }

    fn check(&self, d: &MumfordDivisor) -> Result<()> {
        if self.is_valid(d) {
            Ok(())
        } else {
            Err(Error::DivisorNotOnCurve)
        }
    }

    fn finish(&self, mut w: Work) -> MumfordDivisor {
        let g = self.genus() as i64;
        match &self.model {
            Model::Odd => {
                while deg(&w.u) > g {
                    let fp = self.r.sub(&self.curve.f, &self.r.mul(&w.v, &w.v));
                    let u2 = self.r.monic(&self.r.exact_div(&fp, &w.u).expect("u divides F - v^2"));
                    let v2 = self.r.rem(&self.r.neg(&w.v), &u2);
                    w = Work { u: u2, v: v2, a: 0 };
                }
                w.a = 0;
            }
            Model::Split { vplus } => loop {
                let du = deg(&w.u);
                let n = w.a + self.ceil_half();
                let plus = if du > g {
                    w.a >= -du - w.a
                } else if n > g - du {
                    true
                } else if n < 0 {
                    false
                } else {
                    break;
                };
                w = self.split_step(vplus, w, plus);
            },
        }
        let balance = if self.is_split() { w.a + self.ceil_half() } else { 0 };
        MumfordDivisor { u: w.u.into_coeffs(), v: w.v.into_coeffs(), balance }
    }

    /// Replace D by D − div(y − w) for a w ≡ v (mod u) of degree g + 1
    /// chosen to cancel at ∞₊ (`plus`) or ∞₋.
    fn split_step(&self, vplus: &FqPoly, w: Work, plus: bool) -> Work {
        let r = &self.r;
        let wpoly = if plus {
            r.sub(vplus, &r.rem(&r.sub(vplus, &w.v), &w.u))
        } else {
            r.add(&r.neg(vplus), &r.rem(&r.add(vplus, &w.v), &w.u))
        };
        let fp = r.sub(&self.curve.f, &r.mul(&wpoly, &wpoly));
        let u2 = r.monic(&r.exact_div(&fp, &w.u).expect("u divides F - w^2"));
        let dminus = r.sub(vplus, &wpoly);
        let dplus = r.add(vplus, &wpoly);
        let (o_plus, o_minus) = if !dminus.is_zero() && !dplus.is_zero() {
            (-deg(&dminus), -deg(&dplus))
        } else if dminus.is_zero() {
            let om = -deg(&dplus);
            (-deg(&fp) - om, om)
        } else {
            let op = -deg(&dminus);
            (op, -deg(&fp) - op)
        };
        debug_assert_eq!(o_plus + o_minus, -deg(&fp));
        let du2 = deg(&u2);
        let a2 = w.a - o_plus - du2;
        debug_assert_eq!(-du2 - a2, (-deg(&w.u) - w.a) - o_minus - du2);
        let v2 = r.rem(&r.neg(&wpoly), &u2);
        Work { u: u2, v: v2, a: a2 }
    }

    fn compose(&self, x: &Work, y: &Work) -> Work {
        let r = &self.r;
        let (d1, e1, e2) = r.ext_gcd(&x.u, &y.u);
        let (d, c1, c2) = r.ext_gcd(&d1, &r.add(&x.v, &y.v));
        let s1 = r.mul(&c1, &e1);
        let s2 = r.mul(&c1, &e2);
        let u = r.exact_div(&r.mul(&x.u, &y.u), &r.mul(&d, &d)).unwrap();
        let num = r.add(
            &r.add(&r.mul(&s1, &r.mul(&x.u, &y.v)), &r.mul(&s2, &r.mul(&y.u, &x.v))),
            &r.mul(&c2, &r.add(&r.mul(&x.v, &y.v), &self.curve.f)),
        );
        let v = r.rem(&r.exact_div(&num, &d).unwrap(), &u);
        Work { u, v, a: x.a + y.a + deg(&d) }
    }

    pub fn add(&self, x: &MumfordDivisor, y: &MumfordDivisor) -> MumfordDivisor {
        self.finish(self.compose(&self.work(x), &self.work(y)))
    }

    /// Checked addition.
    pub fn cantor_add(&self, x: &MumfordDivisor, y: &MumfordDivisor) -> Result<MumfordDivisor> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.add(x, y))
    }

    pub fn neg(&self, x: &MumfordDivisor) -> MumfordDivisor {
        let w = self.work(x);
        let v = self.r.neg(&w.v);
        let a = if self.is_split() { -w.a - deg(&w.u) } else { 0 };
        self.finish(Work { u: w.u, v, a })
    }

    pub fn mul(&self, x: &MumfordDivisor, n: i64) -> MumfordDivisor {
        let base = if n < 0 { self.neg(x) } else { x.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = self.zero();
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.add(&acc, &b);
            }
            e >>= 1;
            if e > 0 {
                b = self.add(&b, &b);
            }
        }
        acc
    }

    /// Class of P − ∞₊ (or P − ∞ on odd-degree models).
    pub fn point_class(&self, pt: FfPoint) -> Result<MumfordDivisor> {
        let p = self.curve.p();
        match (pt, &self.model) {
            (FfPoint::Affine(x0, y0), _) => {
                let (x0, y0) = (x0 % p, y0 % p);
                let fx = self.r.eval(&self.curve.f, &x0);
                if self.curve.field.mul(&y0, &y0) != fx {
                    return Err(Error::PointNotOnCurve);
                }
                let u = self.r.from_coeffs(vec![self.curve.field.neg(&x0), 1]);
                let v = self.r.from_coeffs(vec![y0]);
                let a = if self.is_split() { -1 } else { 0 };
                Ok(self.finish(Work { u, v, a }))
            }
            (FfPoint::InfPlus, Model::Split { .. }) | (FfPoint::Inf, Model::Odd) => Ok(self.zero()),
            (FfPoint::InfMinus, Model::Split { .. }) => Ok(self.finish(Work { u: self.r.one(), v: Poly::zero(), a: -1 })),
            _ => Err(Error::PointNotOnCurve),
        }
    }

    /// Σ cᵢ·Pᵢ for a degree-zero combination.
    pub fn divisor_class(&self, terms: &[(i64, FfPoint)]) -> Result<MumfordDivisor> {
        if terms.iter().map(|t| t.0).sum::<i64>() != 0 {
            return Err(Error::InvalidInput("divisor must have degree 0".into()));
        }
        let mut acc = self.zero();
        for (c, pt) in terms {
            acc = self.add(&acc, &self.mul(&self.point_class(*pt)?, *c));
        }
        Ok(acc)
    }

    /// Order of x given a multiple `n` of it.
    pub fn order_dividing(&self, x: &MumfordDivisor, n: u64) -> u64 {
        debug_assert!(self.is_zero(&self.mul(x, n as i64)));
        let mut ord = n;
        for (q, _) in factor_u64(n) {
            while ord % q == 0 && self.is_zero(&self.mul(x, (ord / q) as i64)) {
                ord /= q;
            }
        }
        ord
    }

    /// Classes D(u, v) − k·∞₊ of closed points of degree k ≤ g with
    /// F-square fibres, then ∞₋ − ∞₊. Together these generate J(F_p).
    pub fn point_generators(&self) -> Vec<MumfordDivisor> {
        let p = self.curve.p();
        let g = self.genus();
        let mut out = Vec::new();
        if self.is_split() {
            out.push(self.point_class(FfPoint::InfMinus).unwrap());
        }
        for k in 1..=g {
            let total = p.pow(k as u32);
            for idx in 0..total {
                let mut u: Vec<u64> = (0..k).map(|i| (idx / p.pow(i as u32)) % p).collect();
                u.push(1);
                let up = self.r.from_coeffs(u.clone());
                if k > 1 && !is_irreducible(&self.r, &up) {
                    continue;
                }
                let Some(v) = self.fibre_sqrt(&u) else { continue };
                let a = if self.is_split() { -(k as i64) } else { 0 };
                out.push(self.finish(Work { u: up, v: self.r.from_coeffs(v), a }));
            }
        }
        out
    }

    /// v with v² ≡ F (mod u) for irreducible u, as a coefficient vector.
    fn fibre_sqrt(&self, u: &[u64]) -> Option<Vec<u64>> {
        let p = self.curve.p();
        if u.len() == 2 {
            let x0 = (p - u[0]) % p;
            let fx = self.r.eval(&self.curve.f, &x0);
            return self.curve.field.sqrt(fx).map(|y| vec![y]);
        }
        let l = Fq::with_modulus(p, u).ok()?;
        let t = l.from_digits(&[0, 1]);
        let fx = self.curve.f.coeffs().iter().rev().fold(0u64, |acc, c| l.add(&l.mul(&acc, &t), c));
        l.sqrt(fx).map(|y| l.digits(y))
    }

    pub fn random_element<R: Rng + ?Sized>(&self, gens: &[MumfordDivisor], order: u64, rng: &mut R) -> MumfordDivisor {
        gens.iter().fold(self.zero(), |acc, g| self.add(&acc, &self.mul(g, rng.gen_range(0..order.max(1)) as i64)))
    }

    pub fn format(&self, d: &MumfordDivisor) -> String {
        let u = format_poly(&self.curve.field, &self.r.from_coeffs(d.u.clone()), "x");
        let v = format_poly(&self.curve.field, &self.r.from_coeffs(d.v.clone()), "x");
        if self.is_split() {
            format!("({u}, {v}; {})", d.balance)
        } else {
            format!("({u}, {v})")
        }
    }
}

/// Polynomial part of √F with leading coefficient s.
fn sqrt_part(r: &PolyRing<Fq>, f: &FqPoly, s: u64, g: usize) -> FqPoly {
    let k = &r.base;
    let two_s_inv = k.inv(&k.add(&s, &s)).unwrap();
    let mut c = vec![0u64; g + 2];
    c[g + 1] = s;
    for i in (0..=g).rev() {
        let cur = r.from_coeffs(c.clone());
        let rem = r.sub(f, &r.mul(&cur, &cur));
        c[i] = k.mul(&r.coeff(&rem, g + 1 + i), &two_s_inv);
    }
    let v = r.from_coeffs(c);
    debug_assert!(deg(&r.sub(f, &r.mul(&v, &v))) <= g as i64);
    v
}

/// Invariant factors d₁ | d₂ | … with generators of exactly those orders.
#[derive(Clone, Debug)]
pub struct JacobianStructure {
    pub order: u64,
    pub invariants: Vec<u64>,
    pub generators: Vec<MumfordDivisor>,
    /// Point-class generators whose span is all of J(F_p).
    pub spanning_set: Vec<MumfordDivisor>,
}

/// Span of `gens`, stopping once it reaches `target` elements.
fn span(jac: &Jacobian, gens: &[MumfordDivisor], target: Option<u64>) -> (HashSet<MumfordDivisor>, Vec<MumfordDivisor>) {
    let mut set: HashSet<MumfordDivisor> = HashSet::from([jac.zero()]);
    let mut used = Vec::new();
    for g in gens {
        if target.is_some_and(|t| set.len() as u64 >= t) {
            break;
        }
        if set.contains(g) {
            continue;
        }
        used.push(g.clone());
        let base: Vec<MumfordDivisor> = set.iter().cloned().collect();
        let mut step = g.clone();
        while !set.contains(&step) {
            for b in &base {
                set.insert(jac.add(b, &step));
            }
            step = jac.add(&step, g);
        }
    }
    (set, used)
}

/// Exhaustive structure of J(F_p) (#J ≤ 10⁶).
pub fn group_structure_jac(curve: &FfCurve) -> Result<JacobianStructure> {
    let order = curve.l_polynomial()?.jacobian_order();
    if order > MAX_GROUP_ORDER {
        return Err(Error::GroupTooLarge(format!("#J = {order}")));
    }
    let jac = Jacobian::new(curve.clone())?;
    let (all, used) = span(&jac, &jac.point_generators(), Some(order));
    if all.len() as u64 != order {
        return Err(Error::Failed(format!("point classes span {} elements, P(1) = {order}", all.len())));
    }
    drop(all);
    let mut parts: Vec<Vec<(MumfordDivisor, u64)>> = Vec::new();
    for (l, e) in factor_u64(order) {
        let le = l.pow(e);
        let cofactor = (order / le) as i64;
        let proj: Vec<MumfordDivisor> = used.iter().map(|g| jac.mul(g, cofactor)).collect();
        let (part, _) = span(&jac, &proj, None);
        if part.len() as u64 != le {
            return Err(Error::Failed(format!("{l}-part has {} elements, expected {le}", part.len())));
        }
        parts.push(primary_basis(&jac, &part, l)?);
    }
    let rank = parts.iter().map(Vec::len).max().unwrap_or(0);
    let mut invariants = Vec::new();
    let mut generators = Vec::new();
    for i in 0..rank {
        let mut d = 1;
        let mut gen = jac.zero();
        for basis in &parts {
            if let Some((x, o)) = basis.get(i) {
                d *= o;
                gen = jac.add(&gen, x);
            }
        }
        invariants.push(d);
        generators.push(gen);
    }
    invariants.reverse();
    generators.reverse();
    // audit: exact orders, divisibility chain and total order
    for (g, &d) in generators.iter().zip(&invariants) {
        if jac.order_dividing(g, order) != d {
            return Err(Error::Failed("generator order audit failed".into()));
        }
    }
    if invariants.windows(2).any(|w| w[1] % w[0] != 0) || invariants.iter().product::<u64>() != order {
        return Err(Error::Failed("invariant factor audit failed".into()));
    }
    Ok(JacobianStructure { order, invariants, generators, spanning_set: used })
}

/// A basis of an ℓ-group, largest orders first, chosen greedily among
/// elements whose cyclic span meets the current span trivially.
fn primary_basis(jac: &Jacobian, part: &HashSet<MumfordDivisor>, l: u64) -> Result<Vec<(MumfordDivisor, u64)>> {
    let mut elems: Vec<(u64, MumfordDivisor)> = part
        .iter()
        .map(|x| {
            let mut o = 1;
            let mut y = x.clone();
            while !jac.is_zero(&y) {
                y = jac.mul(&y, l as i64);
                o *= l;
            }
            (o, x.clone())
        })
        .collect();
    elems.sort_by(|a, b| b.0.cmp(&a.0).then_with(|| a.1.cmp(&b.1)));
    let mut basis: Vec<(MumfordDivisor, u64)> = Vec::new();
    let mut cur: HashSet<MumfordDivisor> = HashSet::from([jac.zero()]);
    for (o, x) in elems {
        if cur.len() == part.len() {
            break;
        }
        if o == 1 || cur.contains(&jac.mul(&x, (o / l) as i64)) {
            continue;
        }
        basis.push((x, o));
        let gens: Vec<MumfordDivisor> = basis.iter().map(|b| b.0.clone()).collect();
        cur = span(jac, &gens, None).0;
    }
    if cur.len() != part.len() {
        return Err(Error::Failed(format!("no basis found for the {l}-part")));
    }
    Ok(basis)
}

/// Point counts, L-polynomial, #J and invariant factors of one reduction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JacobianSummary {
    pub p: u64,
    pub genus: usize,
    pub counts: Vec<u64>,
    pub l_coeffs: Vec<i64>,
    pub order: u64,
    pub invariant_factors: Vec<u64>,
    pub generators: Vec<String>,
    /// Extra counts over F_{p^k}, g < k ≤ 2g, agree with P(T) (None when too large to count).
    pub extra_counts_agree: Option<bool>,
}

pub fn summarize(curve: &FfCurve) -> Result<JacobianSummary> {
    let g = curve.genus;
    let counts = (1..=g as u32).map(|k| curve.count_points(k)).collect::<Result<Vec<_>>>()?;
    let lp = LPolynomial::from_counts(curve.p(), g, &counts);
    let extra_counts_agree = if curve.p().checked_pow(2 * g as u32).is_some_and(|q| q <= MAX_COUNT_FIELD) {
        let ok = ((g + 1)..=2 * g).all(|k| curve.count_points(k as u32).ok().map(|n| n as i128) == Some(lp.predicted_count(k)));
        Some(ok)
    } else {
        None
    };
    let st = group_structure_jac(curve)?;
    let jac = Jacobian::new(curve.clone())?;
    Ok(JacobianSummary {
        p: curve.p(),
        genus: g,
        counts,
        l_coeffs: lp.coeffs.clone(),
        order: lp.jacobian_order(),
        invariant_factors: st.invariants.clone(),
        generators: st.generators.iter().map(|d| jac.format(d)).collect(),
        extra_counts_agree,
    })
}

/// Order of a rational divisor class at each prime.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionOrders {
    pub divisor: String,
    /// (p, order of the reduction, #J(F_p))
    pub orders: Vec<(u64, u64, u64)>,
    pub consistent: bool,
    pub order: Option<u64>,
    pub note: String,
}

fn reduce_point(c: &HyperCurve, pt: &CurvePoint, p: u64) -> Result<FfPoint> {
    Ok(match pt {
        CurvePoint::Affine(x, y) => FfPoint::Affine(reduce_rational(x, p)?, reduce_rational(&c.model_y(x, y), p)?),
        CurvePoint::InfPlus => FfPoint::InfPlus,
        CurvePoint::InfMinus => FfPoint::InfMinus,
        CurvePoint::Inf => FfPoint::Inf,
    })
}

/// Orders of the reductions of Σ cᵢ·Pᵢ at each prime; they agree for a
/// torsion class whenever reduction is injective on torsion.
pub fn class_order_by_reduction(c: &HyperCurve, terms: &[(i64, CurvePoint)], primes: &[u64]) -> Result<ReductionOrders> {
    for (_, pt) in terms {
        if !c.contains(pt) {
            return Err(Error::PointNotOnCurve);
        }
    }
    if let Some(&p) = primes.iter().find(|&&p| !c.is_good_prime(p)) {
        return Err(Error::BadReductionPrime(p));
    }
    if primes.len() < 2 {
        return Err(Error::InsufficientGoodPrimes("need at least two odd good primes".into()));
    }
    let mut orders = Vec::new();
    for &p in primes {
        let fc = c.reduce(p)?;
        let n = fc.l_polynomial()?.jacobian_order();
        let jac = Jacobian::new(fc)?;
        let fterms = terms.iter().map(|(k, pt)| Ok((*k, reduce_point(c, pt, p)?))).collect::<Result<Vec<_>>>()?;
        let d = jac.divisor_class(&fterms)?;
        orders.push((p, jac.order_dividing(&d, n), n));
    }
    let first = orders[0].1;
    let consistent = orders.iter().all(|o| o.1 == first);
    let divisor = terms
        .iter()
        .map(|(k, pt)| format!("{k}*{pt}"))
        .collect::<Vec<_>>()
        .join(" + ");
    Ok(ReductionOrders {
        divisor,
        orders,
        consistent,
        order: consistent.then_some(first),
        note: "torsion order assuming injectivity of reduction on torsion; the rank is not certified".into(),
    })
}

/// All good odd primes up to `bound`.
pub fn good_primes(c: &HyperCurve, bound: u64) -> Vec<u64> {
    (3..=bound).filter(|&p| c.is_good_prime(p)).collect()
}

/// Occurrences of each element order in J(F_p) (exhaustive; small groups).
pub fn order_histogram(curve: &FfCurve) -> Result<BTreeMap<u64, u64>> {
    let st = group_structure_jac(curve)?;
    let jac = Jacobian::new(curve.clone())?;
    let (all, _) = span(&jac, &st.spanning_set, None);
    let mut h = BTreeMap::new();
    for x in &all {
        *h.entry(jac.order_dividing(x, st.order)).or_insert(0) += 1;
    }
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c_tilde() -> HyperCurve {
        HyperCurve::from_i64s(&[1, 8, 22, 24, 11, -4, -6, 0, 1], &[]).unwrap()
    }

    fn x0_33_mixed() -> HyperCurve {
        // y² − (x⁴ + x² + 1)·y − (2x⁶ − 2x⁵ + 11x⁴ − 10x³ + 20x² − 11x + 8) = 0
        HyperCurve::from_i64s(&[8, -11, 20, -10, 11, -2, 2], &[-1, 0, -1, 0, -1]).unwrap()
    }

    fn x0_35() -> HyperCurve {
        HyperCurve::from_i64s(&[1, 4, -6, 4, -9, -4, -6, -4, 1], &[]).unwrap()
    }

    fn structure(c: &HyperCurve, p: u64) -> (u64, Vec<u64>) {
        let st = group_structure_jac(&c.reduce(p).unwrap()).unwrap();
        (st.order, st.invariants)
    }

    #[test]
    fn completed_square_of_x0_33() {
        let f33: Vec<BigInt> = [33, -44, 82, -40, 47, -8, 10, 0, 1].iter().map(|&a| BigInt::from(a)).collect();
        assert_eq!(x0_33_mixed().model_poly(), f33);
    }

    #[test]
    fn known_structures() {
        assert_eq!(structure(&c_tilde(), 5), (104, vec![2, 52]));
        assert_eq!(structure(&x0_33_mixed(), 5), (200, vec![10, 20]));
        assert_eq!(structure(&x0_33_mixed(), 7), (400, vec![2, 2, 10, 10]));
        assert_eq!(structure(&x0_35(), 3), (48, vec![2, 24]));
    }

    #[test]
    fn brute_force_count_genus_two() {
        let c = FfCurve::new(Fq::prime(3), vec![1, 0, 0, 0, 0, 1]).unwrap();
        for k in 1..=3 {
            let l = Fq::new(3, k).unwrap();
            let mut n = 1;
            for x in l.elements() {
                let fx = l.add(&l.pow(&x, 5), &1);
                n += l.elements().filter(|y| l.mul(y, y) == fx).count() as u64;
            }
            assert_eq!(c.count_points(k).unwrap(), n);
        }
    }

    #[test]
    fn span_equals_l_polynomial_order() {
        for (c, p) in [(c_tilde(), 5), (x0_35(), 3), (x0_35(), 11)] {
            let fc = c.reduce(p).unwrap();
            let lp = fc.l_polynomial().unwrap();
            assert!(lp.functional_equation_holds());
            let jac = Jacobian::new(fc).unwrap();
            let (all, _) = span(&jac, &jac.point_generators(), None);
            assert_eq!(all.len() as u64, lp.jacobian_order());
            assert!(all.iter().all(|d| jac.is_valid(d)));
        }
    }

    #[test]
    fn extra_counts_match_l_polynomial() {
        let s = summarize(&x0_33_mixed().reduce(5).unwrap()).unwrap();
        assert_eq!(s.extra_counts_agree, Some(true));
        assert_eq!(s.order, 200);
    }

    #[test]
    fn group_axioms_on_random_elements() {
        let fc = x0_35().reduce(3).unwrap();
        let st = group_structure_jac(&fc).unwrap();
        let jac = Jacobian::new(fc).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let a = jac.random_element(&st.generators, st.order, &mut rng);
            let b = jac.random_element(&st.generators, st.order, &mut rng);
            let c = jac.random_element(&st.generators, st.order, &mut rng);
            assert_eq!(jac.add(&jac.add(&a, &b), &c), jac.add(&a, &jac.add(&b, &c)));
            assert_eq!(jac.add(&a, &b), jac.add(&b, &a));
            assert!(jac.is_zero(&jac.add(&a, &jac.neg(&a))));
            assert_eq!(jac.add(&a, &jac.zero()), a);
            assert!(jac.is_zero(&jac.mul(&a, st.order as i64)));
        }
    }

    #[test]
    fn odd_degree_model_arithmetic() {
        let fc = FfCurve::new(Fq::prime(7), vec![1, 0, 0, 0, 0, 1]).unwrap();
        let st = group_structure_jac(&fc).unwrap();
        assert_eq!(st.invariants.iter().product::<u64>(), st.order);
    }

    #[test]
    fn x0_35_point_class_orders() {
        let fc = x0_35().reduce(3).unwrap();
        let jac = Jacobian::new(fc).unwrap();
        let d = jac.point_class(FfPoint::Affine(0, 2)).unwrap();
        assert_eq!(48 % jac.order_dividing(&d, 48), 0);
        let inf = jac.point_class(FfPoint::InfMinus).unwrap();
        assert_eq!(48 % jac.order_dividing(&inf, 48), 0);
    }

    #[test]
    fn x0_77_plus_class_has_order_five() {
        let c = HyperCurve::from_i64s(&[1, 2, 7, 8, 7, 2, 1], &[]).unwrap();
        let d = [(1, CurvePoint::Affine(BigRational::zero(), BigRational::one())), (-1, CurvePoint::InfMinus)];
        let primes: Vec<u64> = good_primes(&c, 20).into_iter().take(2).collect();
        let rep = class_order_by_reduction(&c, &d, &primes).unwrap();
        assert_eq!(rep.order, Some(5), "{rep:?}");
        let inf = c.point_from_weighted(&BigRational::one(), &-BigRational::one(), &BigRational::zero()).unwrap();
        assert_eq!(inf, CurvePoint::InfMinus);
    }

    #[test]
    fn zero_divisor_has_order_one() {
        let rep = class_order_by_reduction(&x0_35(), &[], &[3, 11]).unwrap();
        assert_eq!(rep.order, Some(1));
    }

    #[test]
    fn bad_prime_rejected() {
        let c = x0_35();
        assert_eq!(class_order_by_reduction(&c, &[], &[5, 3]).unwrap_err(), Error::BadReductionPrime(5));
    }
}
