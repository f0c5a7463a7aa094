//! Dense univariate polynomials over an arbitrary [`Ring`].

pub mod factor;
pub mod finite;
pub mod gcd;
pub mod multi;
pub mod padic;
pub mod sturm;
pub mod text;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::ring::{Field, Ring};

/// Coefficients low-degree first; never has a trailing zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly<E> {
    c: Vec<E>,
}

impl<E: Clone> Poly<E> {
    pub fn zero() -> Self {
        Poly { c: Vec::new() }
    }

    pub fn coeffs(&self) -> &[E] {
        &self.c
    }

    pub fn into_coeffs(self) -> Vec<E> {
        self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    /// Degree with deg 0 = −1 convention.
    pub fn deg(&self) -> isize {
        self.c.len() as isize - 1
    }

    pub fn lc(&self) -> Option<&E> {
        self.c.last()
    }

    pub fn coeff(&self, i: usize) -> Option<&E> {
        self.c.get(i)
    }

    pub fn len(&self) -> usize {
        self.c.len()
    }

    pub fn is_empty(&self) -> bool {
        self.c.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyRing<R> {
    pub base: R,
}

impl<R: Ring> PolyRing<R> {
    pub fn new(base: R) -> Self {
        PolyRing { base }
    }

    pub fn from_coeffs(&self, mut c: Vec<R::Elem>) -> Poly<R::Elem> {
        while c.last().is_some_and(|x| self.base.is_zero(x)) {
            c.pop();
        }
        Poly { c }
    }

    pub fn from_i64s(&self, c: &[i64]) -> Poly<R::Elem> {
        self.from_coeffs(c.iter().map(|x| self.base.from_i64(*x)).collect())
    }

    pub fn from_ints(&self, c: &[BigInt]) -> Poly<R::Elem> {
        self.from_coeffs(c.iter().map(|x| self.base.from_int(x)).collect())
    }

    pub fn constant(&self, a: R::Elem) -> Poly<R::Elem> {
        self.from_coeffs(vec![a])
    }

    pub fn x(&self) -> Poly<R::Elem> {
        self.monomial(self.base.one(), 1)
    }

    pub fn monomial(&self, a: R::Elem, n: usize) -> Poly<R::Elem> {
        let mut c = vec![self.base.zero(); n];
        c.push(a);
        self.from_coeffs(c)
    }

    /// x − a
    pub fn linear(&self, a: &R::Elem) -> Poly<R::Elem> {
        self.from_coeffs(vec![self.base.neg(a), self.base.one()])
    }

    pub fn coeff(&self, f: &Poly<R::Elem>, i: usize) -> R::Elem {
        f.c.get(i).cloned().unwrap_or_else(|| self.base.zero())
    }

    pub fn scale(&self, f: &Poly<R::Elem>, a: &R::Elem) -> Poly<R::Elem> {
        self.from_coeffs(f.c.iter().map(|x| self.base.mul(x, a)).collect())
    }

    pub fn shift(&self, f: &Poly<R::Elem>, n: usize) -> Poly<R::Elem> {
        if f.is_zero() {
            return f.clone();
        }
        let mut c = vec![self.base.zero(); n];
        c.extend(f.c.iter().cloned());
        Poly { c }
    }

    pub fn eval(&self, f: &Poly<R::Elem>, x: &R::Elem) -> R::Elem {
        let mut acc = self.base.zero();
        for a in f.c.iter().rev() {
            acc = self.base.add(&self.base.mul(&acc, x), a);
        }
        acc
    }

    /// Evaluate at an element of another ring `s` into which coefficients
    /// map via `emb`.
    pub fn eval_in<S: Ring>(
        &self,
        f: &Poly<R::Elem>,
        s: &S,
        x: &S::Elem,
        emb: impl Fn(&R::Elem) -> S::Elem,
    ) -> S::Elem {
        let mut acc = s.zero();
        for a in f.c.iter().rev() {
            acc = s.add(&s.mul(&acc, x), &emb(a));
        }
        acc
    }

    pub fn derivative(&self, f: &Poly<R::Elem>) -> Poly<R::Elem> {
        self.from_coeffs(
            f.c.iter()
                .enumerate()
                .skip(1)
                .map(|(i, a)| self.base.mul_i64(a, i as i64))
                .collect(),
        )
    }

    /// f(g(x))
    pub fn compose(&self, f: &Poly<R::Elem>, g: &Poly<R::Elem>) -> Poly<R::Elem> {
        let mut acc = Poly::zero();
        for a in f.c.iter().rev() {
            acc = self.add(&self.mul(&acc, g), &self.constant(a.clone()));
        }
        acc
    }

    pub fn map<S: Ring>(
        &self,
        f: &Poly<R::Elem>,
        target: &PolyRing<S>,
        m: impl Fn(&R::Elem) -> S::Elem,
    ) -> Poly<S::Elem> {
        target.from_coeffs(f.c.iter().map(m).collect())
    }

    /// Homogenized numerator Σ fᵢ·Nⁱ·D^{deg f − i} of f(N/D).
    pub fn compose_rational(
        &self,
        f: &Poly<R::Elem>,
        num: &Poly<R::Elem>,
        den: &Poly<R::Elem>,
    ) -> Poly<R::Elem> {
        let Some(n) = f.degree() else { return Poly::zero() };
        let mut npow = vec![self.one()];
        let mut dpow = vec![self.one()];
        for i in 1..=n {
            npow.push(self.mul(&npow[i - 1], num));
            dpow.push(self.mul(&dpow[i - 1], den));
        }
        let mut acc = Poly::zero();
        for (i, a) in f.c.iter().enumerate() {
            if self.base.is_zero(a) {
                continue;
            }
            let term = self.scale(&self.mul(&npow[i], &dpow[n - i]), a);
            acc = self.add(&acc, &term);
        }
        acc
    }
}

impl<R: Ring> Ring for PolyRing<R> {
    type Elem = Poly<R::Elem>;

    fn zero(&self) -> Self::Elem {
        Poly::zero()
    }
    fn one(&self) -> Self::Elem {
        self.constant(self.base.one())
    }
    fn from_int(&self, n: &BigInt) -> Self::Elem {
        self.constant(self.base.from_int(n))
    }
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let n = a.c.len().max(b.c.len());
        let mut c = Vec::with_capacity(n);
        for i in 0..n {
            c.push(match (a.c.get(i), b.c.get(i)) {
                (Some(x), Some(y)) => self.base.add(x, y),
                (Some(x), None) => x.clone(),
                (None, Some(y)) => y.clone(),
                (None, None) => unreachable!(),
            });
        }
        self.from_coeffs(c)
    }
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let n = a.c.len().max(b.c.len());
        let mut c = Vec::with_capacity(n);
        for i in 0..n {
            c.push(match (a.c.get(i), b.c.get(i)) {
                (Some(x), Some(y)) => self.base.sub(x, y),
                (Some(x), None) => x.clone(),
                (None, Some(y)) => self.base.neg(y),
                (None, None) => unreachable!(),
            });
        }
        self.from_coeffs(c)
    }
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        if a.is_zero() || b.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![self.base.zero(); a.c.len() + b.c.len() - 1];
        for (i, x) in a.c.iter().enumerate() {
            if self.base.is_zero(x) {
                continue;
            }
            for (j, y) in b.c.iter().enumerate() {
                if self.base.is_zero(y) {
                    continue;
                }
                c[i + j] = self.base.add(&c[i + j], &self.base.mul(x, y));
            }
        }
        self.from_coeffs(c)
    }
    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        Poly { c: a.c.iter().map(|x| self.base.neg(x)).collect() }
    }
    fn is_zero(&self, a: &Self::Elem) -> bool {
        a.is_zero()
    }
    fn fmt_elem(&self, a: &Self::Elem) -> String {
        text::format_poly(&self.base, a, "x")
    }
}

impl<F: Field> PolyRing<F> {
    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> (Poly<F::Elem>, Poly<F::Elem>) {
        let db = b.degree().expect("division by the zero polynomial");
        let Some(da) = a.degree() else { return (Poly::zero(), Poly::zero()) };
        if da < db {
            return (Poly::zero(), a.clone());
        }
        let lc_inv = self.base.inv(b.lc().unwrap()).unwrap();
        let mut r = a.c.clone();
        let mut q = vec![self.base.zero(); da - db + 1];
        for i in (0..=da - db).rev() {
            let coef = self.base.mul(&r[i + db], &lc_inv);
            if self.base.is_zero(&coef) {
                continue;
            }
            for (j, bj) in b.c.iter().enumerate() {
                if self.base.is_zero(bj) {
                    continue;
                }
                r[i + j] = self.base.sub(&r[i + j], &self.base.mul(&coef, bj));
            }
            q[i] = coef;
        }
        r.truncate(db);
        (self.from_coeffs(q), self.from_coeffs(r))
    }

    pub fn rem(&self, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Poly<F::Elem> {
        self.div_rem(a, b).1
    }

    /// a / b when b divides a exactly.
    pub fn exact_div(&self, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Option<Poly<F::Elem>> {
        let (q, r) = self.div_rem(a, b);
        r.is_zero().then_some(q)
    }

    pub fn divides(&self, b: &Poly<F::Elem>, a: &Poly<F::Elem>) -> bool {
        self.rem(a, b).is_zero()
    }

    pub fn monic(&self, f: &Poly<F::Elem>) -> Poly<F::Elem> {
        match f.lc() {
            None => f.clone(),
            Some(lc) => {
                let inv = self.base.inv(lc).unwrap();
                self.scale(f, &inv)
            }
        }
    }

    pub fn is_monic(&self, f: &Poly<F::Elem>) -> bool {
        f.lc().is_some_and(|c| self.base.is_one(c))
    }

    /// Monic gcd by the Euclidean algorithm.
    pub fn gcd(&self, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Poly<F::Elem> {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_zero() {
            let r = self.rem(&a, &b);
            a = b;
            b = self.monic(&r);
        }
        self.monic(&a)
    }

    /// (g, s, t) with s·a + t·b = g monic.
    pub fn ext_gcd(
        &self,
        a: &Poly<F::Elem>,
        b: &Poly<F::Elem>,
    ) -> (Poly<F::Elem>, Poly<F::Elem>, Poly<F::Elem>) {
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut s0, mut s1) = (self.one(), Poly::zero());
        let (mut t0, mut t1) = (Poly::zero(), self.one());
        while !r1.is_zero() {
            let (q, r) = self.div_rem(&r0, &r1);
            let s2 = self.sub(&s0, &self.mul(&q, &s1));
            let t2 = self.sub(&t0, &self.mul(&q, &t1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
            t0 = std::mem::replace(&mut t1, t2);
        }
        if let Some(lc) = r0.lc().cloned() {
            let inv = self.base.inv(&lc).unwrap();
            (self.scale(&r0, &inv), self.scale(&s0, &inv), self.scale(&t0, &inv))
        } else {
            (r0, s0, t0)
        }
    }

    pub fn mul_mod(&self, a: &Poly<F::Elem>, b: &Poly<F::Elem>, m: &Poly<F::Elem>) -> Poly<F::Elem> {
        self.rem(&self.mul(a, b), m)
    }

    pub fn pow_mod(&self, a: &Poly<F::Elem>, e: &BigInt, m: &Poly<F::Elem>) -> Poly<F::Elem> {
        let mut acc = self.rem(&self.one(), m);
        let base = self.rem(a, m);
        for i in (0..e.bits()).rev() {
            acc = self.mul_mod(&acc, &acc, m);
            if e.bit(i) {
                acc = self.mul_mod(&acc, &base, m);
            }
        }
        acc
    }

    pub fn is_squarefree(&self, f: &Poly<F::Elem>) -> bool {
        let d = self.derivative(f);
        if d.is_zero() {
            return f.degree().unwrap_or(0) == 0;
        }
        self.gcd(f, &d).degree() == Some(0)
    }

    /// f / gcd(f, f'), monic (characteristic zero).
    pub fn squarefree_part(&self, f: &Poly<F::Elem>) -> Poly<F::Elem> {
        let g = self.gcd(f, &self.derivative(f));
        self.monic(&self.exact_div(f, &g).unwrap())
    }

    pub fn product(&self, fs: &[Poly<F::Elem>]) -> Poly<F::Elem> {
        fs.iter().fold(self.one(), |acc, f| self.mul(&acc, f))
    }
}

/// F[x]/(m) for a nonconstant modulus m.
#[derive(Clone, Debug)]
pub struct QuotientRing<F: Field> {
    pub ring: PolyRing<F>,
    pub modulus: Poly<F::Elem>,
}

impl<F: Field> QuotientRing<F> {
    pub fn new(base: F, modulus: Poly<F::Elem>) -> Self {
        assert!(modulus.degree().unwrap_or(0) > 0);
        QuotientRing { ring: PolyRing::new(base), modulus }
    }

    pub fn reduce(&self, a: &Poly<F::Elem>) -> Poly<F::Elem> {
        self.ring.rem(a, &self.modulus)
    }

    pub fn x(&self) -> Poly<F::Elem> {
        self.reduce(&self.ring.x())
    }

    pub fn embed(&self, a: &F::Elem) -> Poly<F::Elem> {
        self.ring.constant(a.clone())
    }

    pub fn inv(&self, a: &Poly<F::Elem>) -> Option<Poly<F::Elem>> {
        let (g, s, _) = self.ring.ext_gcd(a, &self.modulus);
        (g.degree() == Some(0)).then(|| self.reduce(&s))
    }
}

impl<F: Field> Ring for QuotientRing<F> {
    type Elem = Poly<F::Elem>;

    fn zero(&self) -> Self::Elem {
        Poly::zero()
    }
    fn one(&self) -> Self::Elem {
        self.reduce(&self.ring.one())
    }
    fn from_int(&self, n: &BigInt) -> Self::Elem {
        self.reduce(&self.ring.from_int(n))
    }
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.ring.add(a, b)
    }
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.ring.sub(a, b)
    }
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.ring.mul_mod(a, b, &self.modulus)
    }
    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        self.ring.neg(a)
    }
    fn is_zero(&self, a: &Self::Elem) -> bool {
        a.is_zero()
    }
}

/// Integer polynomial helpers shared by the modular algorithms.
pub mod zx {
    use super::*;
    use num_integer::Integer;

    pub fn trim(mut c: Vec<BigInt>) -> Vec<BigInt> {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        c
    }

    pub fn reduce(c: &[BigInt], m: &BigInt) -> Vec<BigInt> {
        trim(c.iter().map(|x| x.mod_floor(m)).collect())
    }

    pub fn add(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        let n = a.len().max(b.len());
        trim((0..n)
            .map(|i| a.get(i).cloned().unwrap_or_default() + b.get(i).cloned().unwrap_or_default())
            .collect())
    }

    pub fn sub(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        let n = a.len().max(b.len());
        trim((0..n)
            .map(|i| a.get(i).cloned().unwrap_or_default() - b.get(i).cloned().unwrap_or_default())
            .collect())
    }

    pub fn mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut c = vec![BigInt::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                c[i + j] += x * y;
            }
        }
        trim(c)
    }

    pub fn mul_mod(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
        reduce(&mul(a, b), m)
    }

    /// Division by a polynomial whose leading coefficient is a unit mod m.
    pub fn div_rem_mod(a: &[BigInt], b: &[BigInt], m: &BigInt) -> (Vec<BigInt>, Vec<BigInt>) {
        let mut r = reduce(a, m);
        let b = reduce(b, m);
        let db = b.len() - 1;
        if r.len() <= db {
            return (Vec::new(), r);
        }
        let inv = crate::arith::modinv_big(b.last().unwrap(), m).expect("unit leading coefficient");
        let mut q = vec![BigInt::zero(); r.len() - db];
        for i in (0..q.len()).rev() {
            let c = (&r[i + db] * &inv).mod_floor(m);
            if c.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                r[i + j] = (&r[i + j] - &c * bj).mod_floor(m);
            }
            q[i] = c;
        }
        r.truncate(db);
        (trim(q), trim(r))
    }

    pub fn is_one(a: &[BigInt]) -> bool {
        a.len() == 1 && a[0].is_one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::Fq;
    use crate::rational::{qi, Rationals};

    #[test]
    fn division_roundtrip() {
        let r = PolyRing::new(Rationals);
        let a = r.from_i64s(&[1, 2, 3, 4, 5]);
        let b = r.from_i64s(&[-1, 0, 2]);
        let (q, rem) = r.div_rem(&a, &b);
        assert_eq!(r.add(&r.mul(&q, &b), &rem), a);
        assert!(rem.deg() < b.deg());
    }

    #[test]
    fn gcd_and_compose() {
        let r = PolyRing::new(Rationals);
        let f = r.mul(&r.from_i64s(&[-1, 1]), &r.from_i64s(&[2, 0, 1]));
        let g = r.mul(&r.from_i64s(&[-1, 1]), &r.from_i64s(&[3, 1]));
        assert_eq!(r.gcd(&f, &g), r.from_i64s(&[-1, 1]));
        let h = r.compose(&r.from_i64s(&[0, 0, 1]), &r.from_i64s(&[1, 1]));
        assert_eq!(h, r.from_i64s(&[1, 2, 1]));
        assert_eq!(r.eval(&h, &qi(2)), qi(9));
    }

    #[test]
    fn quotient_inverse() {
        let fp = Fq::prime(7);
        let q = QuotientRing::new(fp.clone(), PolyRing::new(fp).from_i64s(&[1, 0, 1]));
        let a = q.ring.from_i64s(&[2, 3]);
        let ai = q.inv(&a).unwrap();
        assert_eq!(q.mul(&a, &ai), q.one());
    }
}
