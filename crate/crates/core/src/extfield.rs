//! Relative quadratic extensions L = F(√d) of a field F.

use num_bigint::BigInt;

use crate::ring::{Field, Ring};

/// Elements are pairs (u, v) standing for u + v·√d.
#[derive(Clone, Debug)]
pub struct QuadExt<F: Field> {
    pub base: F,
    pub d: F::Elem,
}

impl<F: Field> QuadExt<F> {
    /// `d` must be a non-square of the base field (not checked here).
    pub fn new(base: F, d: F::Elem) -> Self {
        QuadExt { base, d }
    }

    pub fn embed(&self, a: &F::Elem) -> (F::Elem, F::Elem) {
        (a.clone(), self.base.zero())
    }

    /// v·√d
    pub fn sqrt_d_times(&self, v: &F::Elem) -> (F::Elem, F::Elem) {
        (self.base.zero(), v.clone())
    }

    pub fn conj(&self, a: &(F::Elem, F::Elem)) -> (F::Elem, F::Elem) {
        (a.0.clone(), self.base.neg(&a.1))
    }

    pub fn in_base(&self, a: &(F::Elem, F::Elem)) -> Option<F::Elem> {
        self.base.is_zero(&a.1).then(|| a.0.clone())
    }

    /// Relative norm u² − d·v².
    pub fn rel_norm(&self, a: &(F::Elem, F::Elem)) -> F::Elem {
        let k = &self.base;
        k.sub(&k.mul(&a.0, &a.0), &k.mul(&self.d, &k.mul(&a.1, &a.1)))
    }
}

impl<F: Field> Ring for QuadExt<F> {
    type Elem = (F::Elem, F::Elem);

    fn zero(&self) -> Self::Elem {
        (self.base.zero(), self.base.zero())
    }
    fn one(&self) -> Self::Elem {
        (self.base.one(), self.base.zero())
    }
    fn from_int(&self, n: &BigInt) -> Self::Elem {
        (self.base.from_int(n), self.base.zero())
    }
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        (self.base.add(&a.0, &b.0), self.base.add(&a.1, &b.1))
    }
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        (self.base.sub(&a.0, &b.0), self.base.sub(&a.1, &b.1))
    }
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let k = &self.base;
        let u = k.add(&k.mul(&a.0, &b.0), &k.mul(&self.d, &k.mul(&a.1, &b.1)));
        let v = k.add(&k.mul(&a.0, &b.1), &k.mul(&a.1, &b.0));
        (u, v)
    }
    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        (self.base.neg(&a.0), self.base.neg(&a.1))
    }
    fn is_zero(&self, a: &Self::Elem) -> bool {
        self.base.is_zero(&a.0) && self.base.is_zero(&a.1)
    }
    fn fmt_elem(&self, a: &Self::Elem) -> String {
        format!("{} + ({})*sqrt({})", self.base.fmt_elem(&a.0), self.base.fmt_elem(&a.1), self.base.fmt_elem(&self.d))
    }
}

impl<F: Field> Field for QuadExt<F> {
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem> {
        let n = self.base.inv(&self.rel_norm(a))?;
        let c = self.conj(a);
        Some((self.base.mul(&c.0, &n), self.base.mul(&c.1, &n)))
    }
    fn characteristic(&self) -> u64 {
        self.base.characteristic()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{qi, Rationals};

    #[test]
    fn sqrt_d_squares_to_d() {
        let l = QuadExt::new(Rationals, qi(-3));
        let s = l.sqrt_d_times(&qi(1));
        assert_eq!(l.mul(&s, &s), l.embed(&qi(-3)));
        let a = (qi(2), qi(5));
        assert_eq!(l.mul(&a, &l.inv(&a).unwrap()), l.one());
    }
}
