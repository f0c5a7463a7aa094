//! Sparse text format for polynomials: "c_k*x^k + … - c_0", with
//! coefficients in the quadratic-field element format (parenthesized
//! when they have two terms).

use super::{Poly, PolyRing};
use crate::error::{Error, Result};
use crate::numfield::NumberField;
use crate::qfield::QuadElem;
use crate::ring::Ring;

pub fn format_poly<R: Ring>(r: &R, f: &Poly<R::Elem>, var: &str) -> String {
    if f.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, c) in f.coeffs().iter().enumerate().rev() {
        if r.is_zero(c) {
            continue;
        }
        let mut s = r.fmt_elem(c);
        let compound = s.len() > 1 && s[1..].contains(['+', '-']);
        let mut negative = false;
        if !compound && s.starts_with('-') {
            negative = true;
            s.remove(0);
        }
        if compound {
            s = format!("({s})");
        }
        if out.is_empty() {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        let mono = match i {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{i}"),
        };
        if mono.is_empty() {
            out.push_str(&s);
        } else if s == "1" {
            out.push_str(&mono);
        } else {
            out.push_str(&s);
            out.push('*');
            out.push_str(&mono);
        }
    }
    out
}

/// Parse a polynomial in `var` with coefficients in K.
pub fn parse_poly<K: NumberField>(k: &K, s: &str, var: char) -> Result<Poly<K::Elem>> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    let bytes: Vec<char> = s.chars().collect();
    let mut terms = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in bytes.iter().enumerate() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            '+' | '-' if depth == 0 && i > 0 && !matches!(bytes[i - 1], '*' | '/' | '^' | '(') => {
                terms.push(bytes[start..i].iter().collect::<String>());
                start = i;
            }
            _ => {}
        }
    }
    terms.push(bytes[start..].iter().collect::<String>());
    let mut coeffs: Vec<K::Elem> = Vec::new();
    for t in terms {
        let (neg, body) = match t.chars().next() {
            Some('-') => (true, t[1..].to_string()),
            Some('+') => (false, t[1..].to_string()),
            _ => (false, t.clone()),
        };
        // locate the variable outside parentheses
        let mut depth = 0;
        let mut pos = None;
        for (i, ch) in body.char_indices() {
            match ch {
                '(' => depth += 1,
                ')' => depth -= 1,
                c if c == var && depth == 0 => pos = Some(i),
                _ => {}
            }
        }
        let (coef_txt, exp) = match pos {
            None => (body.clone(), 0usize),
            Some(i) => {
                let c = body[..i].trim_end_matches('*').to_string();
                let rest = &body[i + 1..];
                let e = if rest.is_empty() {
                    1
                } else {
                    rest.strip_prefix('^')
                        .and_then(|x| x.parse().ok())
                        .ok_or_else(|| Error::Parse(format!("bad exponent in '{t}'")))?
                };
                (c, e)
            }
        };
        let q: QuadElem = if coef_txt.is_empty() { QuadElem::from_i64(1) } else { coef_txt.parse()? };
        let mut c = k.from_quad(&q).ok_or_else(|| Error::Parse(format!("coefficient {q} not in {}", k.name())))?;
        if neg {
            c = k.neg(&c);
        }
        if coeffs.len() <= exp {
            coeffs.resize(exp + 1, k.zero());
        }
        coeffs[exp] = k.add(&coeffs[exp], &c);
    }
    Ok(PolyRing::new(k.clone()).from_coeffs(coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qfield::QuadField;
    use crate::rational::Rationals;

    #[test]
    fn roundtrip() {
        let k = QuadField::imaginary(11).unwrap();
        let r = PolyRing::new(k);
        for s in ["x^3 + (1/2-1/2*w)*x^2 + (5/2+1/2*w)*x - w", "-x^2 + 3", "2*w*x - 1/3", "x"] {
            let f = parse_poly(&k, s, 'x').unwrap();
            assert_eq!(format_poly(&k, &f, "x"), s);
            assert_eq!(parse_poly(&k, &r.fmt_elem(&f), 'x').unwrap(), f);
        }
        let q = Rationals;
        let f = parse_poly(&q, "u^8-6u^6-4u^5+11u^4+24u^3+22u^2+8u+1", 'u').unwrap();
        assert_eq!(f.degree(), Some(8));
        assert!(parse_poly(&q, "w*x", 'x').is_err());
    }
}
