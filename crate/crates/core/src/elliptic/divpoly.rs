//! y-free division polynomials, evaluated in any commutative ring.
//!
//! f_n = ψ_n for odd n and ψ_n/ψ_2 for even n, so every f_n is a
//! polynomial in x alone. The recurrences below only use ring operations,
//! so they work in K[x], in a quotient K[x]/(h), or at a single value.

use crate::poly::{Poly, PolyRing};
use crate::ring::{Field, Ring};

use super::WeierstrassCurve;

/// Ring-side data needed by the recurrences.
pub struct DivisionContext<'a, S: Ring> {
    pub ring: &'a S,
    /// b2, b4, b6, b8 as ring elements.
    pub b: [S::Elem; 4],
    pub x: S::Elem,
}

impl<'a, S: Ring> DivisionContext<'a, S> {
    /// F = 4x³ + b2x² + 2b4x + b6 (= ψ_2²).
    pub fn two_cubic(&self) -> S::Elem {
        let s = self.ring;
        let [b2, b4, b6, _] = &self.b;
        let x = &self.x;
        let x2 = s.mul(x, x);
        let t = s.add(&s.mul_i64(&s.mul(&x2, x), 4), &s.mul(b2, &x2));
        s.add(&t, &s.add(&s.mul_i64(&s.mul(b4, x), 2), b6))
    }

    /// [f_0, f_1, …, f_nmax].
    pub fn sequence(&self, nmax: usize) -> Vec<S::Elem> {
        let s = self.ring;
        let [b2, b4, b6, b8] = &self.b;
        let x = &self.x;
        let xp: Vec<S::Elem> = {
            let mut v = vec![s.one()];
            for i in 1..=6 {
                v.push(s.mul(&v[i - 1], x));
            }
            v
        };
        let lin = |terms: &[(i64, S::Elem, usize)]| {
            terms
                .iter()
                .fold(s.zero(), |acc, (c, coef, e)| s.add(&acc, &s.mul_i64(&s.mul(coef, &xp[*e]), *c)))
        };
        let one = s.one();
        let mut f = vec![s.zero(), one.clone(), one.clone()];
        if nmax >= 3 {
            f.push(lin(&[
                (3, one.clone(), 4),
                (1, b2.clone(), 3),
                (3, b4.clone(), 2),
                (3, b6.clone(), 1),
                (1, b8.clone(), 0),
            ]));
        }
        if nmax >= 4 {
            let c1 = s.sub(&s.mul(b2, b8), &s.mul(b4, b6));
            let c0 = s.sub(&s.mul(b4, b8), &s.mul(b6, b6));
            f.push(lin(&[
                (2, one.clone(), 6),
                (1, b2.clone(), 5),
                (5, b4.clone(), 4),
                (10, b6.clone(), 3),
                (10, b8.clone(), 2),
                (1, c1, 1),
                (1, c0, 0),
            ]));
        }
        if nmax < 5 {
            f.truncate(nmax + 1);
            return f;
        }
        let big_f = self.two_cubic();
        let f2 = s.square(&big_f);
        let cube = |e: &S::Elem| s.mul(&s.square(e), e);
        for n in 5..=nmax {
            let m = n / 2;
            let v = if n % 2 == 1 {
                let a = s.mul(&f[m + 2], &cube(&f[m]));
                let b = s.mul(&f[m - 1], &cube(&f[m + 1]));
                if m % 2 == 0 {
                    s.sub(&s.mul(&f2, &a), &b)
                } else {
                    s.sub(&a, &s.mul(&f2, &b))
                }
            } else {
                let a = s.mul(&f[m + 2], &s.square(&f[m - 1]));
                let b = s.mul(&f[m - 2], &s.square(&f[m + 1]));
                s.mul(&s.sub(&a, &b), &f[m])
            };
            f.push(v);
        }
        f
    }

    /// x([m]P) as (numerator, denominator) in the ring, m ≥ 1.
    pub fn multiplication_x(&self, m: usize) -> (S::Elem, S::Elem) {
        let s = self.ring;
        let f = self.sequence(m + 1);
        let big_f = self.two_cubic();
        let fm2 = s.square(&f[m]);
        let prod = s.mul(&f[m - 1], &f[m + 1]);
        if m % 2 == 1 {
            (s.sub(&s.mul(&self.x, &fm2), &s.mul(&big_f, &prod)), fm2)
        } else {
            let d = s.mul(&big_f, &fm2);
            (s.sub(&s.mul(&self.x, &d), &prod), d)
        }
    }

    /// x(2P) = (x⁴ − b4x² − 2b6x − b8) / F.
    pub fn doubling_x(&self) -> (S::Elem, S::Elem) {
        let s = self.ring;
        let [_, b4, b6, b8] = &self.b;
        let x = &self.x;
        let x2 = s.mul(x, x);
        let num = s.sub(
            &s.sub(&s.square(&x2), &s.mul(b4, &x2)),
            &s.add(&s.mul_i64(&s.mul(b6, x), 2), b8),
        );
        (num, self.two_cubic())
    }
}

impl<F: Field> WeierstrassCurve<F> {
    fn poly_context<'a>(&self, r: &'a PolyRing<F>) -> DivisionContext<'a, PolyRing<F>> {
        DivisionContext { ring: r, b: self.b_invariants().map(|c| r.constant(c)), x: r.x() }
    }

    /// f_n ∈ F[x] (y-free division polynomial).
    pub fn division_polynomial(&self, n: usize) -> Poly<F::Elem> {
        let r = PolyRing::new(self.field.clone());
        self.poly_context(&r).sequence(n).pop().unwrap()
    }

    /// ψ_n for odd n; for even n this is f_n = ψ_n/ψ_2.
    pub fn division_polynomials(&self, nmax: usize) -> Vec<Poly<F::Elem>> {
        let r = PolyRing::new(self.field.clone());
        self.poly_context(&r).sequence(nmax)
    }

    /// Polynomials (N_m, D_m) with x([m]P) = N_m(x)/D_m(x).
    pub fn multiplication_map(&self, m: usize) -> (Poly<F::Elem>, Poly<F::Elem>) {
        let r = PolyRing::new(self.field.clone());
        self.poly_context(&r).multiplication_x(m)
    }

    pub fn doubling_map(&self) -> (Poly<F::Elem>, Poly<F::Elem>) {
        let r = PolyRing::new(self.field.clone());
        self.poly_context(&r).doubling_x()
    }

    /// Context over an arbitrary ring receiving F's coefficients.
    pub fn context_in<'a, S: Ring>(
        &self,
        ring: &'a S,
        embed: impl Fn(&F::Elem) -> S::Elem,
        x: S::Elem,
    ) -> DivisionContext<'a, S> {
        DivisionContext { ring, b: self.b_invariants().map(|c| embed(&c)), x }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elliptic::CurvePoint;
    use crate::rational::{qi, Rationals};
    use crate::Fq;

    #[test]
    fn psi3_short_form() {
        // 3x⁴ + 6ax² + 12bx − a²
        let (a, b) = (-2i64, 5i64);
        let e = WeierstrassCurve::short(Rationals, qi(a), qi(b)).unwrap();
        let r = PolyRing::new(Rationals);
        assert_eq!(e.division_polynomial(3), r.from_i64s(&[-a * a, 12 * b, 6 * a, 0, 3]));
    }

    #[test]
    fn degrees_and_roots() {
        let e = WeierstrassCurve::from_i64s(Rationals, [1, 1, 1, -3, 7]).unwrap();
        let fs = e.division_polynomials(13);
        for (n, f) in fs.iter().enumerate().skip(1) {
            let expect = if n % 2 == 1 { (n * n - 1) / 2 } else { (n * n - 4) / 2 };
            assert_eq!(f.degree(), Some(expect), "n = {n}");
        }
    }

    #[test]
    fn multiplication_map_matches_group_law() {
        let k = Fq::prime(10007);
        let e = WeierstrassCurve::from_i64s(k.clone(), [1, 2, 3, 4, 5]).unwrap();
        let r = PolyRing::new(k.clone());
        let pts: Vec<_> = (1..50u64)
            .flat_map(|x| e.lift_x(&x, |v| k.sqrt(*v)))
            .take(6)
            .collect();
        assert!(!pts.is_empty());
        for m in 1..8usize {
            let (num, den) = e.multiplication_map(m);
            for p in &pts {
                let q = e.mul(m as i64, p);
                let CurvePoint::Affine(x, _) = p else { unreachable!() };
                let dv = r.eval(&den, x);
                match q {
                    CurvePoint::Infinity => assert_eq!(dv, 0),
                    CurvePoint::Affine(qx, _) => {
                        assert_eq!(k.div(&r.eval(&num, x), &dv).unwrap(), qx)
                    }
                }
            }
        }
        let (dn, dd) = e.doubling_map();
        let p = &pts[0];
        let CurvePoint::Affine(x, _) = p else { unreachable!() };
        let CurvePoint::Affine(x2, _) = e.double(p) else { unreachable!() };
        assert_eq!(k.div(&r.eval(&dn, x), &r.eval(&dd, x)).unwrap(), x2);
    }
}
