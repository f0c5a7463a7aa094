//! Registry of modular-curve models with exact on-model verification,
//! bounded-height point search, polynomial identities and the real-sign
//! obstruction for points with rational x-coordinate.

use std::collections::BTreeSet;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::exact_sqrt;
use crate::elliptic::WeierstrassCurve;
use crate::error::{Error, Result};
use crate::jacobian::HyperCurve;
use crate::numfield::NumberField;
use crate::poly::factor::divisors_of_degree;
use crate::poly::multi::{parse_mpoly, MPoly};
use crate::poly::sturm::sturm_real_roots;
use crate::poly::text::format_poly;
use crate::poly::PolyRing;
use crate::qfield::{QuadElem, QuadField};
use crate::rational::{fmt_rational, Rationals};
use crate::ring::Ring;
use crate::QPoly;

/// The bundled registry (integer coefficients, versioned).
pub const REGISTRY_JSON: &str = include_str!("../data/models.json");
/// Largest height accepted by [`search_points`].
pub const MAX_SEARCH_HEIGHT: u64 = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Ambient {
    Affine,
    /// Weighted projective plane with the listed weights and a weight-1 z.
    Weighted,
    Projective,
}

/// y² + h·y = f, integer coefficients low degree first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HyperData {
    pub f: Vec<i64>,
    pub h: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KnownPoint {
    pub label: String,
    pub coords: Vec<String>,
    /// w² for coordinates in Q(w); 0 for rational points.
    pub w2: i64,
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j: Option<String>,
    /// Coordinates as they circulate in print, when they differ.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub as_printed: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub as_printed_w2: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelEntry {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub level: Option<u32>,
    pub ambient: Ambient,
    pub variables: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<u32>>,
    pub equations: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hyperelliptic: Option<HyperData>,
    pub points: Vec<KnownPoint>,
}

/// Points whose model is not recorded; checked against every candidate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointSet {
    pub name: String,
    pub candidates: Vec<String>,
    pub points: Vec<KnownPoint>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Registry {
    pub version: u32,
    pub models: Vec<ModelEntry>,
    pub point_sets: Vec<PointSet>,
}

pub fn registry() -> &'static Registry {
    static REG: OnceLock<Registry> = OnceLock::new();
    REG.get_or_init(|| serde_json::from_str(REGISTRY_JSON).expect("bundled registry is valid JSON"))
}

pub fn model(name: &str) -> Result<&'static ModelEntry> {
    registry()
        .models
        .iter()
        .find(|m| m.name.eq_ignore_ascii_case(name))
        .ok_or_else(|| Error::UnknownModel(name.into()))
}

pub fn point_set(name: &str) -> Result<&'static PointSet> {
    registry()
        .point_sets
        .iter()
        .find(|s| s.name == name)
        .ok_or_else(|| Error::UnknownModel(name.into()))
}

fn ints(c: &[i64]) -> Vec<BigInt> {
    c.iter().map(|&a| BigInt::from(a)).collect()
}

impl ModelEntry {
    pub fn polys(&self) -> Result<Vec<MPoly>> {
        self.equations.iter().map(|e| parse_mpoly(e, &self.variables)).collect()
    }

    /// Number of coordinates a point on this model carries.
    pub fn coordinate_count(&self) -> usize {
        match self.ambient {
            Ambient::Weighted => self.variables.len() + 1,
            _ => self.variables.len(),
        }
    }

    pub fn curve(&self) -> Result<HyperCurve> {
        let h = self
            .hyperelliptic
            .as_ref()
            .ok_or_else(|| Error::InvalidInput(format!("{} has no hyperelliptic form", self.name)))?;
        HyperCurve::new(ints(&h.f), ints(&h.h))
    }

    /// The parsed equation equals ±(y² + h·y − f).
    pub fn equation_matches_curve(&self) -> Result<bool> {
        let Some(hd) = &self.hyperelliptic else { return Ok(true) };
        let [eq]: [MPoly; 1] = self.polys()?.try_into().map_err(|_| Error::InvalidInput("expected one equation".into()))?;
        let vars = &self.variables;
        let x = parse_mpoly(&vars[0], vars)?;
        let y = parse_mpoly(&vars[1], vars)?;
        let uni = |c: &[i64]| {
            c.iter().enumerate().fold(MPoly::zero(vars), |acc, (i, &a)| {
                acc.add(&MPoly::constant(vars, BigRational::from_integer(a.into())).mul(&x.pow(i as u32)))
            })
        };
        let expect = y.pow(2).add(&uni(&hd.h).mul(&y)).sub(&uni(&hd.f));
        Ok(eq == expect || eq == expect.neg())
    }
}

fn field_for(w2: i64) -> Result<QuadField> {
    // Q is represented inside an arbitrary quadratic field with rational coordinates
    QuadField::with_square(if w2 == 0 { -1 } else { w2 })
}

fn field_name(w2: i64) -> String {
    if w2 == 0 {
        "Q".into()
    } else {
        format!("Q(sqrt({w2}))")
    }
}

fn parse_coords(coords: &[String], w2: i64) -> Result<Vec<QuadElem>> {
    let v: Vec<QuadElem> = coords.iter().map(|c| c.parse()).collect::<Result<_>>()?;
    if w2 == 0 && v.iter().any(|c| !c.is_rational()) {
        return Err(Error::InvalidInput("rational point with irrational coordinates".into()));
    }
    Ok(v)
}

/// Residuals of every defining polynomial at one point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointCheck {
    pub model: String,
    pub label: String,
    pub field: String,
    pub residuals: Vec<String>,
    pub on_model: bool,
}

/// Evaluate the model's equations at `coords` over Q(√w2).
pub fn verify_coords(entry: &ModelEntry, label: &str, coords: &[String], w2: i64) -> Result<PointCheck> {
    if coords.len() != entry.coordinate_count() {
        return Err(Error::DimensionMismatch(entry.coordinate_count(), coords.len()));
    }
    let k = field_for(w2)?;
    let pt = parse_coords(coords, w2)?;
    if entry.ambient != Ambient::Affine && pt.iter().all(|c| c.is_zero()) {
        return Err(Error::InvalidInput("all projective coordinates vanish".into()));
    }
    let embed = |c: &BigRational| QuadElem::from_rational(c.clone());
    let mut residuals = Vec::new();
    for eq in entry.polys()? {
        let v = match entry.ambient {
            Ambient::Weighted => {
                let n = entry.variables.len();
                let w = entry.weights.clone().unwrap_or_else(|| vec![1; n]);
                eq.eval_weighted(&k, embed, &w, &pt[..n], &pt[n])
            }
            _ => eq.eval(&k, embed, &pt),
        };
        residuals.push(v);
    }
    let on_model = residuals.iter().all(|r| r.is_zero());
    Ok(PointCheck {
        model: entry.name.clone(),
        label: label.into(),
        field: field_name(w2),
        residuals: residuals.iter().map(|r| r.to_string()).collect(),
        on_model,
    })
}

pub fn verify_on_model(entry: &ModelEntry, p: &KnownPoint) -> Result<PointCheck> {
    verify_coords(entry, &p.label, &p.coords, p.w2)
}

/// Every registered point of one model, plus the printed variants that
/// were corrected.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelCheck {
    pub model: String,
    pub equation_matches_curve: bool,
    pub points: Vec<PointCheck>,
    pub printed_variants: Vec<PointCheck>,
    pub all_on_model: bool,
}

pub fn verify_model(name: &str) -> Result<ModelCheck> {
    let entry = model(name)?;
    let points = entry.points.iter().map(|p| verify_on_model(entry, p)).collect::<Result<Vec<_>>>()?;
    let mut printed_variants = Vec::new();
    for p in &entry.points {
        if p.as_printed.is_some() || p.as_printed_w2.is_some() {
            let coords = p.as_printed.clone().unwrap_or_else(|| p.coords.clone());
            let w2 = p.as_printed_w2.unwrap_or(p.w2);
            printed_variants.push(verify_coords(entry, &format!("{} (as printed)", p.label), &coords, w2)?);
        }
    }
    let equation_matches_curve = entry.equation_matches_curve()?;
    let all_on_model = equation_matches_curve && points.iter().all(|c| c.on_model);
    Ok(ModelCheck { model: entry.name.clone(), equation_matches_curve, points, printed_variants, all_on_model })
}

/// Which candidate models each point of a set lies on.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointLocation {
    pub label: String,
    pub field: String,
    pub on: Vec<String>,
}

pub fn locate_point_set(name: &str) -> Result<Vec<PointLocation>> {
    let set = point_set(name)?;
    let mut out = Vec::new();
    for p in &set.points {
        let mut on = Vec::new();
        for c in &set.candidates {
            if verify_on_model(model(c)?, p)?.on_model {
                on.push(c.clone());
            }
        }
        out.push(PointLocation { label: p.label.clone(), field: field_name(p.w2), on });
    }
    Ok(out)
}

/// Outcome of an identity check; `details` carries derived witnesses.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub name: String,
    pub statement: String,
    pub holds: bool,
    pub details: Vec<String>,
}

pub const IDENTITY_NAMES: [&str; 5] = ["i", "ii", "iii", "iv", "v"];

const F33: &str = "x^8 + 10x^6 - 8x^5 + 47x^4 - 40x^3 + 82x^2 - 44x + 33";
const PHI: &str = "x^4 + (1/3t^4 - 2t^3 + t^2 + 2/3t + 1/3)x^3 + (t^5 - 2t^4 + t^2)x^2 + (t^6 - 2t^5 + t^4)x + (-1/3t^9 + t^8 - t^7 + 1/3t^6)";

fn statement(name: &str) -> Option<String> {
    Some(match name {
        "i" => format!("(x^4 + x^2 + 1)^2 + 4(2x^6 - 2x^5 + 11x^4 - 10x^3 + 20x^2 - 11x + 8) = {F33}"),
        "ii" => "x^8 - 4x^7 - 6x^6 - 4x^5 - 9x^4 + 4x^3 - 6x^2 + 4x + 1 = (x^2 + x - 1)(x^6 - 5x^5 - 9x^3 - 5x - 1)".into(),
        "iii" => "u^8 - 6u^6 - 4u^5 + 11u^4 + 24u^3 + 22u^2 + 8u + 1 = (u^2 + u + 1)(u^6 - u^5 - 6u^4 + 3u^3 + 14u^2 + 7u + 1)".into(),
        "iv" => format!("psi_3(E_t) = 3*phi(x, t) for t in {{2, 3, -1}}, E_t: y^2 + (1-c)xy - by = x^3 - bx^2, b = t^3 - t^2, c = t^2 - t; phi = {PHI}"),
        "v" => format!("{F33} = (x^2 - x + 3)(q(x)^2 + 11 r(x)^2)"),
        _ => return None,
    })
}

fn univariate(s: &str, var: &str) -> Result<QPoly> {
    let vars = vec![var.to_string()];
    let p = parse_mpoly(s, &vars)?;
    Ok(PolyRing::new(Rationals).from_coeffs(p.univariate(0)?))
}

pub fn verify_identity(name: &str) -> Result<IdentityCheck> {
    let stmt = statement(name).ok_or_else(|| Error::UnknownIdentity(name.into()))?;
    let mut details = Vec::new();
    let holds = match name {
        "i" => {
            let zero = parse_mpoly(&stmt, &["x".to_string()])?.is_zero();
            // the two registered models must agree as well
            let same = model("X0(33)")?.curve()?.model_poly() == model("X0(33)-f33")?.curve()?.model_poly();
            details.push(format!("completed square of X0(33) equals y^2 = f33: {same}"));
            zero && same
        }
        "ii" | "iii" => {
            let var = if name == "iii" { "u" } else { "x" };
            parse_mpoly(&stmt, &[var.to_string()])?.is_zero()
        }
        "iv" => {
            let vars = vec!["x".to_string(), "t".to_string()];
            let phi = parse_mpoly(PHI, &vars)?;
            let r = PolyRing::new(Rationals);
            let mut ok = true;
            for t0 in [2i64, 3, -1] {
                let t = BigRational::from_integer(t0.into());
                let b = &t * &t * &t - &t * &t;
                let c = &t * &t - &t;
                let a = [BigRational::one() - c, -b.clone(), -b, BigRational::zero(), BigRational::zero()];
                let e = WeierstrassCurve::new(Rationals, a)?;
                let psi3 = e.division_polynomial(3);
                // φ(x, t0) as a polynomial in x
                let mut coeffs = vec![BigRational::zero(); 5];
                for (ex, cf) in &phi.terms {
                    coeffs[ex[0] as usize] += cf * num_traits::pow(t.clone(), ex[1] as usize);
                }
                let phi_t = r.from_coeffs(coeffs);
                let lc = psi3.lc().cloned().unwrap_or_default();
                let this = r.scale(&phi_t, &lc) == psi3;
                details.push(format!("t = {t0}: psi_3 = {}", format_poly(&Rationals, &psi3, "x")));
                ok &= this && lc == BigRational::from_integer(3.into());
            }
            ok
        }
        "v" => {
            let (q, r, ok) = f33_norm_decomposition()?;
            details.push(format!("q(x) = {}", format_poly(&Rationals, &q, "x")));
            details.push(format!("r(x) = {}", format_poly(&Rationals, &r, "x")));
            ok
        }
        _ => unreachable!(),
    };
    Ok(IdentityCheck { name: name.into(), statement: stmt, holds, details })
}

/// q, r with f33 = (x² − x + 3)(q² + 11r²), from the factorisation of
/// f33/(x² − x + 3) over Q(√−11) into conjugate cubics q ± r·√−11.
pub fn f33_norm_decomposition() -> Result<(QPoly, QPoly, bool)> {
    let rq = PolyRing::new(Rationals);
    let f33 = univariate(F33, "x")?;
    let quad = univariate("x^2 - x + 3", "x")?;
    let sextic = rq.exact_div(&f33, &quad).ok_or_else(|| Error::Failed("x^2 - x + 3 does not divide f33".into()))?;
    let k = QuadField::with_square(-11)?;
    let rk = PolyRing::new(k);
    let s_k = rq.map(&sextic, &rk, |c| k.from_rational(c));
    let cubic = divisors_of_degree(&k, &s_k, 3, false)
        .into_iter()
        .find(|c| c.coeffs().iter().any(|a| !a.is_rational()))
        .ok_or_else(|| Error::Failed("no conjugate cubic factor over Q(sqrt(-11))".into()))?;
    let q = rq.from_coeffs(cubic.coeffs().iter().map(|a| a.a.clone()).collect());
    let r = rq.from_coeffs(cubic.coeffs().iter().map(|a| a.b.clone()).collect());
    let norm = rq.add(&rq.mul(&q, &q), &rq.scale(&rq.mul(&r, &r), &BigRational::from_integer(11.into())));
    let ok = rq.mul(&quad, &norm) == f33;
    Ok((q, r, ok))
}

/// True when f has positive leading coefficient and no real root, so
/// f(x) = d·y² (d < 0) has no solution with x rational and y ≠ 0.
pub fn sign_obstruction(f: &QPoly, d: i64) -> bool {
    d < 0 && f.lc().is_some_and(|c| c.is_positive()) && sturm_real_roots(f) == 0
}

/// A point found by [`search_points`], in the model's own coordinates.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FoundPoint {
    /// Empty for the point at infinity of an affine (odd-degree) model.
    pub coords: Vec<String>,
    /// "Q" when the point is rational, otherwise the quadratic field of y.
    pub field: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchResult {
    pub model: String,
    pub field: String,
    pub height: u64,
    pub points: Vec<FoundPoint>,
}

/// Σ aᵢ nⁱ d^{deg−i}, times d again for odd degree: F(n/d) = value / d^{2⌈deg/2⌉}.
fn homogeneous_value(f: &[BigInt], n: &BigInt, d: &BigInt) -> BigInt {
    let deg = f.len() - 1;
    let mut val = BigInt::zero();
    let mut np = BigInt::one();
    let mut dpows = vec![BigInt::one(); deg + 1];
    for i in 1..=deg {
        dpows[i] = &dpows[i - 1] * d;
    }
    for (i, a) in f.iter().enumerate() {
        val += a * &np * &dpows[deg - i];
        np *= n;
    }
    if deg % 2 == 1 {
        val *= d;
    }
    val
}

fn eval_int_poly(c: &[i64], x: &BigRational) -> BigRational {
    c.iter()
        .rev()
        .fold(BigRational::zero(), |acc, &a| acc * x + BigRational::from_integer(a.into()))
}

/// Points with x = a/b, max(|a|, b) ≤ height, on a hyperelliptic or
/// elliptic model; over Q(√w2) also the points with y ∉ Q (f(x) ∈ w2·Q*²).
pub fn search_points(entry: &ModelEntry, w2: Option<i64>, height: u64) -> Result<SearchResult> {
    if height > MAX_SEARCH_HEIGHT {
        return Err(Error::HeightTooLarge(height));
    }
    let hd = entry
        .hyperelliptic
        .as_ref()
        .ok_or_else(|| Error::InvalidInput(format!("point search needs a hyperelliptic model; {} has none", entry.name)))?;
    if let Some(w) = w2 {
        QuadField::with_square(w)?;
    }
    let curve = entry.curve()?;
    let big_f = curve.model_poly();
    let deg = big_f.len() - 1;
    let g = curve.genus();
    let half = (deg + 1) / 2;
    let weighted = entry.ambient == Ambient::Weighted;
    let two = BigRational::from_integer(2.into());
    let qname = w2.map_or("Q".to_string(), field_name);

    let to_point = |x: &BigRational, ym: QuadElem| -> FoundPoint {
        // y = (Y − h(x))/2 on the original model
        let y = if hd.h.is_empty() {
            ym
        } else {
            let hx = QuadElem::from_rational(eval_int_poly(&hd.h, x));
            let s = QuadElem::new(&ym.a - &hx.a, ym.b.clone());
            QuadElem::new(s.a / &two, s.b / &two)
        };
        let field = if y.is_rational() { "Q".to_string() } else { qname.clone() };
        let coords = if weighted {
            let b = BigRational::from_integer(x.denom().clone());
            let a = BigRational::from_integer(x.numer().clone());
            let scale = num_traits::pow(b.clone(), g + 1);
            let yy = QuadElem::new(&y.a * &scale, &y.b * &scale);
            vec![fmt_rational(&a), yy.to_string(), fmt_rational(&b)]
        } else {
            vec![fmt_rational(x), y.to_string()]
        };
        FoundPoint { coords, field }
    };

    let b = height as i64;
    let mut per_den: Vec<Vec<FoundPoint>> = (1..=b)
        .into_par_iter()
        .map(|den| {
            let mut out = Vec::new();
            let d = BigInt::from(den);
            let scale = BigRational::from_integer(num_traits::pow(d.clone(), half));
            for num in -b..=b {
                if num.gcd(&den) != 1 {
                    continue;
                }
                let n = BigInt::from(num);
                let val = homogeneous_value(&big_f, &n, &d);
                let x = BigRational::new(n, d.clone());
                if !val.is_negative() {
                    if let Some(s) = exact_sqrt(&val) {
                        let y = BigRational::from_integer(s.clone()) / &scale;
                        out.push(to_point(&x, QuadElem::from_rational(y.clone())));
                        if !s.is_zero() {
                            out.push(to_point(&x, QuadElem::from_rational(-y)));
                        }
                        continue;
                    }
                }
                if let Some(w) = w2 {
                    // val = w·t² with t = sqrt(val·w)/|w|
                    let vw = &val * w;
                    if !val.is_zero() && !vw.is_negative() {
                        if let Some(s) = exact_sqrt(&vw) {
                            let t = BigRational::new(s, BigInt::from(w.abs())) / &scale;
                            out.push(to_point(&x, QuadElem::new(BigRational::zero(), t.clone())));
                            out.push(to_point(&x, QuadElem::new(BigRational::zero(), -t)));
                        }
                    }
                }
            }
            out
        })
        .collect();
    let mut points: Vec<FoundPoint> = Vec::new();
    // points at infinity
    if curve.is_even_degree() {
        let lc = big_f.last().unwrap();
        let hg = BigRational::from_integer(hd.h.get(g + 1).copied().unwrap_or(0).into());
        let mut lims: Vec<QuadElem> = Vec::new();
        if let Some(s) = exact_sqrt(lc) {
            lims.push(QuadElem::from_rational(BigRational::from_integer(s.clone())));
            lims.push(QuadElem::from_rational(BigRational::from_integer(-s)));
        } else if let Some(w) = w2 {
            if let Some(s) = exact_sqrt(&(lc * w)) {
                let t = BigRational::new(s, BigInt::from(w.abs()));
                lims.push(QuadElem::new(BigRational::zero(), t.clone()));
                lims.push(QuadElem::new(BigRational::zero(), -t));
            }
        }
        for lim in lims {
            let eta = if hd.h.is_empty() { lim } else { QuadElem::new((&lim.a - &hg) / &two, &lim.b / &two) };
            let field = if eta.is_rational() { "Q".to_string() } else { qname.clone() };
            points.push(FoundPoint { coords: vec!["1".into(), eta.to_string(), "0".into()], field });
        }
    } else {
        let coords = if weighted { vec!["1".into(), "0".into(), "0".into()] } else { vec![] };
        points.push(FoundPoint { coords, field: "Q".into() });
    }
    points.extend(per_den.drain(..).flatten());
    Ok(SearchResult { model: entry.name.clone(), field: qname, height, points })
}

/// The points of a search as a set of normalised coordinate strings.
pub fn point_keys(points: &[FoundPoint]) -> BTreeSet<Vec<String>> {
    points.iter().map(|p| p.coords.clone()).collect()
}

/// Registered points of a model as normalised coordinate strings.
pub fn known_point_keys(entry: &ModelEntry, kinds: &[&str]) -> Result<BTreeSet<Vec<String>>> {
    entry
        .points
        .iter()
        .filter(|p| kinds.contains(&p.kind.as_str()))
        .map(|p| Ok(normalize_coords(entry, &parse_coords(&p.coords, p.w2)?)))
        .collect()
}

/// Scale weighted/projective coordinates to the representative used by
/// the search (coprime integer x-part, positive last coordinate or
/// [1 : η : 0] at infinity).
pub fn normalize_coords(entry: &ModelEntry, c: &[QuadElem]) -> Vec<String> {
    match entry.ambient {
        Ambient::Affine => c.iter().map(|a| a.to_string()).collect(),
        Ambient::Weighted => {
            let w = entry.weights.clone().unwrap_or_else(|| vec![1, 1]);
            let (x, y, z) = (&c[0], &c[1], &c[2]);
            let scale_by = |lam: &BigRational, e: u32| num_traits::pow(lam.clone(), e as usize);
            let mul = |a: &QuadElem, s: &BigRational| QuadElem::new(&a.a * s, &a.b * s);
            if z.is_zero() {
                // x must be rational here
                let lam = BigRational::one() / &x.a;
                return vec!["1".into(), mul(y, &scale_by(&lam, w[1])).to_string(), "0".into()];
            }
            let xr = &x.a / &z.a;
            let lam = BigRational::from_integer(xr.denom().clone()) / &z.a;
            vec![
                fmt_rational(&BigRational::from_integer(xr.numer().clone())),
                mul(y, &scale_by(&lam, w[1])).to_string(),
                fmt_rational(&BigRational::from_integer(xr.denom().clone())),
            ]
        }
        Ambient::Projective => c.iter().map(|a| a.to_string()).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_loads_and_equations_match() {
        for m in &registry().models {
            assert!(m.polys().is_ok(), "{}", m.name);
            assert!(m.equation_matches_curve().unwrap(), "{}", m.name);
        }
    }

    #[test]
    fn every_registered_point_is_on_its_model() {
        for m in &registry().models {
            let c = verify_model(&m.name).unwrap();
            for p in &c.points {
                assert!(p.on_model, "{} {} {:?}", m.name, p.label, p.residuals);
            }
            assert!(c.printed_variants.iter().all(|p| !p.on_model), "{}", m.name);
        }
    }

    #[test]
    fn perturbed_cusp_is_off_model() {
        let m = model("X0(77)").unwrap();
        let coords: Vec<String> = ["1", "0", "0", "0", "0", "0", "1"].iter().map(|s| s.to_string()).collect();
        assert!(!verify_coords(m, "perturbed", &coords, 0).unwrap().on_model);
        let short = vec!["1".to_string(); 6];
        assert_eq!(verify_coords(m, "short", &short, 0).unwrap_err(), Error::DimensionMismatch(7, 6));
    }

    #[test]
    fn table3_points_lie_on_the_mixed_model_only() {
        for loc in locate_point_set("table3").unwrap() {
            assert_eq!(loc.on, vec!["X0(33)".to_string()], "{}", loc.label);
        }
    }

    #[test]
    fn identities_hold() {
        for name in IDENTITY_NAMES {
            let c = verify_identity(name).unwrap();
            assert!(c.holds, "{name}: {:?}", c.details);
        }
        assert_eq!(verify_identity("vi").unwrap_err(), Error::UnknownIdentity("vi".into()));
    }

    #[test]
    fn sign_obstruction_examples() {
        let f33 = univariate(F33, "x").unwrap();
        assert!(sign_obstruction(&f33, -2));
        let ct = univariate("u^8 - 6u^6 - 4u^5 + 11u^4 + 24u^3 + 22u^2 + 8u + 1", "u").unwrap();
        assert!(sign_obstruction(&ct, -43));
        assert!(!sign_obstruction(&univariate("x^2 - 2", "x").unwrap(), -2));
    }

    #[test]
    fn x0_77_plus_inventory() {
        let m = model("X0(77)+").unwrap();
        let found = point_keys(&search_points(m, None, 20).unwrap().points);
        assert_eq!(found, known_point_keys(m, &["rational"]).unwrap());
    }

    #[test]
    fn x0_33_inventory_over_k() {
        let m = model("X0(33)").unwrap();
        let known = known_point_keys(m, &["cusp"]).unwrap();
        for w2 in [-2, -7, -11, -19] {
            let found = point_keys(&search_points(m, Some(w2), 20).unwrap().points);
            assert_eq!(found, known, "w2 = {w2}");
        }
    }

    #[test]
    fn height_limit() {
        let m = model("X0(35)").unwrap();
        assert_eq!(search_points(m, None, 1001).unwrap_err(), Error::HeightTooLarge(1001));
    }
}
