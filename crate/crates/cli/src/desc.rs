//! Text forms of orders, ideals and truncated series on the command line.
//!
//! Orders:
//!   `Z_plus <m>`                  Z + m·O̅
//!   `Z_plus_ideal <g1>, <g2> ^<e>` Z + (g1, g2)^e, exponent optional
//!   `Z_theta <f>`                 Z[f·θ]
//!   `maximal`                     O̅
//!   `basis <b1>; <b2>; ...`       explicit Z-basis
//! Elements are polynomials in `a` (`2-4a+a^2`) or coordinate lists over the
//! power basis (`2,-4,1`). Series are coefficients separated by `;`.

use std::sync::Arc;

use orderlab::expr::parse_element;
use orderlab::ideal::OIdeal;
use orderlab::order::OrderRing;
use orderlab::pseries::TruncSeries;
use orderlab::{Error, Field, FieldElement, Result};

fn parse_int(s: &str, what: &str) -> Result<i64> {
    s.trim().parse().map_err(|_| Error::Input(format!("{what}: expected an integer, got {s:?}")))
}

/// `g1, g2, ... ^e`. Commas separate generators, so coordinate lists are
/// not accepted here.
pub fn parse_ideal(field: &Arc<Field>, text: &str) -> Result<OIdeal> {
    let (gens, exp) = match text.rsplit_once('^') {
        // a '^' inside the last generator is a power of a, not the exponent
        Some((g, e)) if e.trim().chars().all(|c| c.is_ascii_digit()) && !g.trim_end().ends_with('a') => {
            (g, parse_int(e, "ideal exponent")?)
        }
        _ => (text, 1),
    };
    if exp < 1 {
        return Err(Error::Input("ideal exponent must be positive".into()));
    }
    let gens: Vec<FieldElement> = gens
        .split(',')
        .filter(|g| !g.trim().is_empty())
        .map(|g| parse_element(field, g))
        .collect::<Result<_>>()?;
    if gens.is_empty() {
        return Err(Error::Input("ideal needs at least one generator".into()));
    }
    Ok(OIdeal::from_generators(field, &gens)?.pow(exp as u32))
}

pub fn parse_order(field: &Arc<Field>, text: &str) -> Result<OrderRing> {
    let t = text.trim();
    let (head, rest) = t.split_once(char::is_whitespace).unwrap_or((t, ""));
    match head {
        "Z_plus" => OrderRing::z_plus(field, parse_int(rest, "Z_plus")?),
        "Z_plus_ideal" => OrderRing::z_plus_ideal(field, &parse_ideal(field, rest)?),
        "Z_theta" => OrderRing::scaled_monogenic(field, parse_int(rest, "Z_theta")?),
        "maximal" if rest.trim().is_empty() => Ok(OrderRing::maximal(field)),
        "basis" => {
            let gens: Vec<FieldElement> = rest.split(';').map(|b| parse_element(field, b)).collect::<Result<_>>()?;
            OrderRing::from_generators(field, &gens)
        }
        _ => Err(Error::Input(format!(
            "unknown order description {t:?}; expected Z_plus, Z_plus_ideal, Z_theta, maximal or basis"
        ))),
    }
}

pub fn parse_series(field: &Field, text: &str) -> Result<TruncSeries> {
    let cs: Vec<FieldElement> = text.split(';').map(|c| parse_element(field, c)).collect::<Result<_>>()?;
    TruncSeries::new(cs)
}
