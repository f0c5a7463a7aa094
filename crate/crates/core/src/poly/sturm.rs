//! Sturm sequences over Q.

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::{Poly, PolyRing};
use crate::rational::Rationals;
use crate::ring::Ring;

fn sign_changes(signs: &[i32]) -> usize {
    let nz: Vec<i32> = signs.iter().copied().filter(|s| *s != 0).collect();
    nz.windows(2).filter(|w| w[0] != w[1]).count()
}

fn sign(q: &BigRational) -> i32 {
    if q.is_zero() {
        0
    } else if q.is_positive() {
        1
    } else {
        -1
    }
}

pub fn sturm_sequence(f: &Poly<BigRational>) -> Vec<Poly<BigRational>> {
    let r = PolyRing::new(Rationals);
    let mut seq = vec![f.clone(), r.derivative(f)];
    loop {
        let n = seq.len();
        if seq[n - 1].is_zero() {
            seq.pop();
            break;
        }
        let rem = r.rem(&seq[n - 2], &seq[n - 1]);
        if rem.is_zero() {
            break;
        }
        seq.push(r.neg(&rem));
    }
    seq
}

/// Number of distinct real roots of a nonzero polynomial.
pub fn sturm_real_roots(f: &Poly<BigRational>) -> usize {
    if f.degree().unwrap_or(0) == 0 {
        return 0;
    }
    let seq = sturm_sequence(f);
    let at_pos: Vec<i32> = seq.iter().map(|p| sign(p.lc().unwrap())).collect();
    let at_neg: Vec<i32> = seq
        .iter()
        .map(|p| {
            let s = sign(p.lc().unwrap());
            if p.degree().unwrap() % 2 == 1 {
                -s
            } else {
                s
            }
        })
        .collect();
    sign_changes(&at_neg) - sign_changes(&at_pos)
}

/// Distinct real roots in the half-open interval (a, b].
pub fn sturm_roots_in(f: &Poly<BigRational>, a: &BigRational, b: &BigRational) -> usize {
    let r = PolyRing::new(Rationals);
    let seq = sturm_sequence(f);
    let at = |x: &BigRational| -> usize {
        let s: Vec<i32> = seq.iter().map(|p| sign(&r.eval(p, x))).collect();
        sign_changes(&s)
    };
    at(a) - at(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        let r = PolyRing::new(Rationals);
        assert_eq!(sturm_real_roots(&r.from_i64s(&[-2, 0, 1])), 2);
        assert_eq!(sturm_real_roots(&r.from_i64s(&[1, 0, 1])), 0);
        // (x − 1)²(x + 3)
        let f = r.mul(&r.pow(&r.from_i64s(&[-1, 1]), 2), &r.from_i64s(&[3, 1]));
        assert_eq!(sturm_real_roots(&f), 2);
        assert_eq!(sturm_roots_in(&f, &crate::rational::qi(0), &crate::rational::qi(2)), 1);
    }
}
