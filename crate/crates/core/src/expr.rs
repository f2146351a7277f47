//! Parsing field elements written as polynomials in `a` (the generator θ),
//! e.g. `2-4a+a^2`, `3/2*a`, `-a^2+1`, or as a coordinate list `1,0,-2`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::field::{parse_rational, Field, FieldElement};

pub fn parse_element(field: &Field, text: &str) -> Result<FieldElement> {
    let t = text.trim();
    if t.is_empty() {
        return Err(Error::input("empty element"));
    }
    if t.contains(',') && !t.contains('a') {
        let t = t.trim_start_matches('[').trim_end_matches(']');
        let coords: Vec<BigRational> = t.split(',').map(parse_rational).collect::<Result<_>>()?;
        let x = FieldElement { coords };
        field.check_dim(&x)?;
        return Ok(x);
    }
    parse_poly(field, t)
}

fn parse_poly(field: &Field, t: &str) -> Result<FieldElement> {
    let s: String = t.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = |why: &str| Error::input(format!("cannot parse element {t:?}: {why}"));
    // split into signed terms
    let mut terms: Vec<(bool, String)> = Vec::new();
    let mut cur = String::new();
    let mut neg = false;
    for (i, ch) in s.chars().enumerate() {
        if (ch == '+' || ch == '-') && !(i > 0 && cur.ends_with('^')) {
            if !cur.is_empty() {
                terms.push((neg, std::mem::take(&mut cur)));
            } else if i > 0 {
                return Err(bad("two signs in a row"));
            }
            neg = ch == '-';
        } else {
            cur.push(ch);
        }
    }
    if cur.is_empty() {
        return Err(bad("dangling sign"));
    }
    terms.push((neg, cur));

    let mut acc = field.zero();
    for (neg, term) in terms {
        let (coef, power) = match term.find('a') {
            None => (parse_rational(&term)?, 0u64),
            Some(pos) => {
                let coef_s = term[..pos].trim_end_matches('*');
                let coef = if coef_s.is_empty() { BigRational::one() } else { parse_rational(coef_s)? };
                let rest = &term[pos + 1..];
                let power = if rest.is_empty() {
                    1
                } else if let Some(e) = rest.strip_prefix('^') {
                    e.parse::<u64>().map_err(|_| bad("bad exponent"))?
                } else {
                    return Err(bad("unexpected text after a"));
                };
                (coef, power)
            }
        };
        let coef = if neg { -coef } else { coef };
        if coef.is_zero() {
            continue;
        }
        let mono = field.pow(&field.theta(), power);
        acc = acc.add(&mono.scale(&coef));
    }
    Ok(acc)
}

/// Integer-only convenience used by tests and the corpus.
pub fn element_from_i64(field: &Field, c: &[i64]) -> FieldElement {
    let mut x = field.zero();
    for (i, &v) in c.iter().enumerate() {
        x.coords[i] = BigRational::from_integer(BigInt::from(v));
    }
    x
}
