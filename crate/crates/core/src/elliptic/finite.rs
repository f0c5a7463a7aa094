//! Point counting and group structure over finite fields.

use std::collections::HashMap;

use num_integer::Integer;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{CurvePoint, WeierstrassCurve};
use crate::arith::factor_u64;
use crate::error::{Error, Result};
use crate::poly::finite::roots;
use crate::poly::PolyRing;
use crate::ring::Ring;
use crate::Fq;

pub type FfCurve = WeierstrassCurve<Fq>;
pub type FfPoint = CurvePoint<u64>;

pub const NAIVE_LIMIT: u64 = 10_000;
pub const COUNT_LIMIT: u64 = 1_000_000;

/// Structure Z_m × Z_n of E(F_q) with m | n.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FfGroup {
    pub order: u64,
    pub m: u64,
    pub n: u64,
    /// A point of order n.
    pub generator: FfPoint,
}

fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// Hasse interval [q + 1 − ⌊2√q⌋, q + 1 + ⌊2√q⌋].
pub fn hasse_interval(q: u64) -> (u64, u64) {
    let w = isqrt(4 * q);
    (q + 1 - w, q + 1 + w)
}

impl WeierstrassCurve<Fq> {
    pub fn q(&self) -> u64 {
        self.field.order()
    }

    /// Affine points over x (odd characteristic uses square roots, char 2
    /// tries every y).
    pub fn points_over(&self, x: u64) -> Vec<FfPoint> {
        if self.field.p() == 2 {
            return self
                .field
                .elements()
                .filter(|y| self.field.is_zero(&self.equation(&x, y)))
                .map(|y| CurvePoint::Affine(x, y))
                .collect();
        }
        self.lift_x(&x, |v| self.field.sqrt(*v))
    }

    /// All points, O first.
    pub fn points(&self) -> Vec<FfPoint> {
        let mut out = vec![CurvePoint::Infinity];
        for x in self.field.elements() {
            out.extend(self.points_over(x));
        }
        out
    }

    pub fn count_points_naive(&self) -> u64 {
        let k = &self.field;
        if k.p() == 2 {
            return self.points().len() as u64;
        }
        let cubic = self.two_torsion_cubic();
        let r = PolyRing::new(k.clone());
        let s: i64 = k.elements().map(|x| 1 + k.chi(r.eval(&cubic, &x)) as i64).sum();
        (1 + s) as u64
    }

    pub fn random_point(&self, rng: &mut ChaCha8Rng) -> FfPoint {
        loop {
            let x = self.field.random(rng);
            let pts = self.points_over(x);
            if let Some(p) = pts.into_iter().next() {
                return p;
            }
        }
    }

    /// Every n in [lo, hi] with nP = O, by baby-step giant-step.
    pub fn killing_multiples(&self, p: &FfPoint, lo: u64, hi: u64) -> Vec<u64> {
        let width = hi - lo;
        let m = isqrt(width) + 1;
        if let Some(o) = self.small_order(p, m) {
            return (lo..=hi).filter(|n| n % o == 0).collect();
        }
        // order ≥ m, so baby steps jP (0 ≤ j < m) are distinct
        let mut baby: HashMap<FfPoint, u64> = HashMap::with_capacity(m as usize);
        let mut acc = CurvePoint::Infinity;
        for j in 0..m {
            baby.insert(acc.clone(), j);
            acc = self.add(&acc, p);
        }
        let step = acc; // mP
        let mut giant = self.mul(lo as i64, p);
        let mut out = Vec::new();
        let mut base = lo;
        while base <= hi {
            if let Some(&j) = baby.get(&self.neg(&giant)) {
                if base + j <= hi {
                    out.push(base + j);
                }
            }
            giant = self.add(&giant, &step);
            base += m;
        }
        out
    }

    /// Exact order of a point, known to divide some number in the Hasse
    /// interval.
    pub fn point_order(&self, p: &FfPoint) -> u64 {
        let (lo, hi) = hasse_interval(self.q());
        let ks = self.killing_multiples(p, lo, hi);
        let n = ks.first().copied().expect("point order outside the Hasse interval");
        self.order_dividing(p, n)
    }

    /// Quadratic twist by a fixed non-square (odd characteristic).
    pub fn nonsquare_twist(&self) -> FfCurve {
        let k = &self.field;
        let d = k.elements().find(|a| *a != 0 && !k.is_square(*a)).unwrap();
        self.quadratic_twist(&d).expect("twist of a nonsingular curve")
    }

    /// Mestre's method: points on E and its twist until a single group
    /// order in the Hasse interval is consistent with both.
    pub fn count_points_bsgs(&self, seed: u64) -> Result<u64> {
        let q = self.q();
        if self.field.p() == 2 {
            return Err(Error::UnsupportedField("baby-step giant-step needs odd characteristic".into()));
        }
        let (lo, hi) = hasse_interval(q);
        let twist = self.nonsquare_twist();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (mut le, mut lt) = (1u64, 1u64);
        for _ in 0..500 {
            let p = self.random_point(&mut rng);
            le = le.lcm(&self.point_order(&p));
            let t = twist.random_point(&mut rng);
            lt = lt.lcm(&twist.point_order(&t));
            let cands: Vec<u64> = (lo..=hi)
                .filter(|n| n % le == 0 && (2 * q + 2 - n) % lt == 0)
                .collect();
            if cands.len() == 1 {
                return Ok(cands[0]);
            }
        }
        Err(Error::Failed(format!("group order over F_{q} not determined")))
    }

    /// #E(F_q): naive up to 10⁴, baby-step giant-step up to 10⁶.
    pub fn count_points(&self) -> Result<u64> {
        let q = self.q();
        if q <= NAIVE_LIMIT {
            return Ok(self.count_points_naive());
        }
        if q > COUNT_LIMIT || self.field.p() == 2 {
            return Err(Error::FieldTooLarge(format!("q = {q}")));
        }
        self.count_points_bsgs(q ^ 0x5eed)
    }

    /// #E(F_q)[m] counted from the roots of the division polynomials.
    pub fn torsion_count(&self, m: u64) -> u64 {
        if m == 1 {
            return 1;
        }
        let k = &self.field;
        let mut xs: Vec<u64> = Vec::new();
        let r = PolyRing::new(k.clone());
        // x-coordinates of points with mP = O, P ≠ O: roots of f_m times
        // the two-torsion cubic for even m.
        let mut f = self.division_polynomial(m as usize);
        if m % 2 == 0 {
            f = r.mul(&f, &self.two_torsion_cubic());
        }
        xs.extend(roots(&r, &f, m));
        1 + xs
            .iter()
            .flat_map(|x| self.points_over(*x))
            .filter(|p| self.mul(m as i64, p).is_infinity())
            .count() as u64
    }

    /// Group structure, exhaustively for q ≤ 10⁴ and by ℓ-torsion
    /// counting plus sampling above.
    pub fn group_structure(&self, seed: u64) -> Result<FfGroup> {
        let q = self.q();
        let order = self.count_points()?;
        let g = if q <= NAIVE_LIMIT {
            let pts = self.points();
            let mut n = 1u64;
            let mut gen = CurvePoint::Infinity;
            let mut best = 1u64;
            for p in &pts {
                let o = self.order_dividing(p, order);
                n = n.lcm(&o);
                if o > best {
                    best = o;
                    gen = p.clone();
                }
                if best == order {
                    break;
                }
            }
            let m = order / n;
            // a point of exact order n exists in Z_m × Z_n
            debug_assert_eq!(best, n);
            FfGroup { order, m, n, generator: gen }
        } else {
            self.structure_by_sampling(order, seed)
        };
        // certification: E[m] is full, m | q − 1, and a point of order n
        assert_eq!(g.m * g.n, g.order);
        assert_eq!(g.n % g.m, 0);
        assert_eq!((q - 1) % g.m, 0, "m must divide q − 1");
        assert_eq!(self.order_dividing(&g.generator, g.order), g.n);
        if g.m > 1 {
            assert_eq!(self.torsion_count(g.m), g.m * g.m);
        }
        Ok(g)
    }

    fn structure_by_sampling(&self, order: u64, seed: u64) -> FfGroup {
        let q = self.q();
        let mut m = 1u64;
        for (l, v) in factor_u64(order) {
            // largest j with E[ℓ^j] full
            let mut j = 0u32;
            while 2 * (j + 1) <= v && (q - 1) % l.pow(j + 1) == 0 && self.torsion_count(l.pow(j + 1)) == l.pow(2 * (j + 1)) {
                j += 1;
            }
            m *= l.pow(j);
        }
        let n = order / m;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        // assemble a point of order n from its Sylow components
        let mut gen = CurvePoint::Infinity;
        for (l, e) in factor_u64(n) {
            let le = l.pow(e);
            let mut cof = order;
            while cof % l == 0 {
                cof /= l;
            }
            loop {
                let p = self.mul(cof as i64, &self.random_point(&mut rng));
                if self.order_dividing(&p, le) == le {
                    gen = self.add(&gen, &p);
                    break;
                }
            }
        }
        FfGroup { order, m, n, generator: gen }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn curve(p: u64, a: [i64; 5]) -> FfCurve {
        WeierstrassCurve::from_i64s(Fq::prime(p), a).unwrap()
    }

    #[test]
    fn small_counts() {
        assert_eq!(curve(5, [0, 0, 0, 0, 1]).count_points().unwrap(), 6);
        assert_eq!(curve(7, [0, 0, 0, -1, 0]).count_points().unwrap(), 8);
        let g = curve(5, [0, 0, 0, 0, 1]).group_structure(1).unwrap();
        assert_eq!((g.m, g.n), (1, 6));
        let g = curve(7, [0, 0, 0, -1, 0]).group_structure(1).unwrap();
        assert_eq!((g.m, g.n), (2, 4));
    }

    #[test]
    fn bsgs_agrees_with_naive() {
        for (i, p) in [10007u64, 9973, 7919, 5003].into_iter().enumerate() {
            let e = curve(p, [1, -1, 0, 3 + i as i64, 11]);
            assert_eq!(e.count_points_bsgs(i as u64).unwrap(), e.count_points_naive());
        }
    }

    #[test]
    fn large_field_structure() {
        let e = curve(100_003, [0, 0, 0, -1, 0]);
        let g = e.group_structure(5).unwrap();
        assert_eq!(g.m % 2, 0);
        let (lo, hi) = hasse_interval(100_003);
        assert!(lo <= g.order && g.order <= hi);
    }

    #[test]
    fn extension_field_count() {
        let f25 = Fq::new(5, 2).unwrap();
        let e = WeierstrassCurve::from_i64s(f25, [0, 0, 0, 0, 1]).unwrap();
        // #E(F_25) = q + 1 − (a1² − 2p) with a1 = 0
        assert_eq!(e.count_points().unwrap(), 36);
    }
}
