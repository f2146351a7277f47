//! Orders used by the property suites: Z + f·O̅ and Z[f·θ] over the bundled
//! fields, plus a few named orders.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::error::Result;
use crate::expr::parse_element;
use crate::field::Field;
use crate::fields;
use crate::ideal::{split_prime, OIdeal};
use crate::order::{intermediate_order, OrderRing};

/// Seeds f for the generated part.
pub const SEEDS: std::ops::RangeInclusive<i64> = 2..=12;

/// Orders whose conductor has |O̅/I| above this are skipped by default.
pub const DEFAULT_CONDUCTOR_LIMIT: u64 = 300_000;

#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub name: String,
    pub order: OrderRing,
}

impl CorpusEntry {
    pub fn field(&self) -> &Arc<Field> {
        self.order.field()
    }
}

fn conductor_size(r: &OrderRing) -> u64 {
    r.conductor().norm().to_u64().unwrap_or(u64::MAX)
}

/// Z + f·O̅ and Z[f·θ] for f in [`SEEDS`], without repeats (in Q(√2) and
/// Q(√−3) the two families coincide), keeping |O̅/I| ≤ `limit`.
pub fn generated(limit: u64) -> Result<Vec<CorpusEntry>> {
    generated_over(&fields::all(), limit)
}

/// [`generated`] over the given fields.
pub fn generated_over(fields: &[Arc<Field>], limit: u64) -> Result<Vec<CorpusEntry>> {
    let mut out: Vec<CorpusEntry> = Vec::new();
    for k in fields.iter().cloned() {
        for f in SEEDS {
            let candidates = [
                (format!("Z+{f}O in {}", k.label()), OrderRing::z_plus(&k, f)?),
                (format!("Z[{f}a] in {}", k.label()), OrderRing::scaled_monogenic(&k, f)?),
            ];
            for (name, order) in candidates {
                if conductor_size(&order) > limit {
                    continue;
                }
                if out.iter().any(|e| Arc::ptr_eq(e.field(), &k) && e.order.lattice() == order.lattice()) {
                    continue;
                }
                out.push(CorpusEntry { name, order });
            }
        }
    }
    Ok(out)
}

/// Z[5√2], Z[2√2], Z[10√2], and in the cubic field R = Z + P² and
/// R₁ = Z + P for P = (3, 2 + 2α + α²).
pub fn named() -> Result<Vec<CorpusEntry>> {
    named_over(&fields::q_sqrt2(), &fields::cubic())
}

/// [`named`] with Q(√2) and the cubic field supplied by the caller.
pub fn named_over(q2: &Arc<Field>, c: &Arc<Field>) -> Result<Vec<CorpusEntry>> {
    let (q2, c) = (q2.clone(), c.clone());
    let p = cubic_prime(&c)?;
    let r = OrderRing::z_plus_ideal(&c, &p.pow(2))?;
    let r1 = intermediate_order(&r, &p)?;
    Ok(vec![
        CorpusEntry { name: "Z[5√2]".into(), order: OrderRing::z_plus(&q2, 5)? },
        CorpusEntry { name: "Z[2√2]".into(), order: OrderRing::z_plus(&q2, 2)? },
        CorpusEntry { name: "Z[10√2]".into(), order: OrderRing::z_plus(&q2, 10)? },
        CorpusEntry { name: "cubic Z+P^2".into(), order: r },
        CorpusEntry { name: "cubic Z+P".into(), order: r1 },
    ])
}

/// P = (3, 2 + 2α + α²) in the cubic field.
pub fn cubic_prime(c: &Arc<Field>) -> Result<OIdeal> {
    let g = parse_element(c, "2+2a+a^2")?;
    let p = split_prime(c, 3)?
        .into_iter()
        .find(|p| p.generator == g)
        .ok_or_else(|| crate::Error::invariant("3 has no prime factor (3, 2+2a+a^2)"))?;
    Ok(OIdeal::from_prime(c, &p))
}

/// Named orders first, then the generated ones not already listed.
pub fn default_corpus() -> Result<Vec<CorpusEntry>> {
    corpus_over(&fields::q_sqrt2(), &fields::q_sqrt_minus3(), &fields::cubic())
}

/// [`default_corpus`] over the given Q(√2), Q(√−3) and cubic field.
pub fn corpus_over(q2: &Arc<Field>, q3: &Arc<Field>, c: &Arc<Field>) -> Result<Vec<CorpusEntry>> {
    let mut out = named_over(q2, c)?;
    for e in generated_over(&[q2.clone(), q3.clone(), c.clone()], DEFAULT_CONDUCTOR_LIMIT)? {
        if !out.iter().any(|o| Arc::ptr_eq(o.field(), e.field()) && o.order.lattice() == e.order.lattice()) {
            out.push(e);
        }
    }
    Ok(out)
}

/// |O̅/I| for reporting.
pub fn conductor_norm(e: &CorpusEntry) -> BigInt {
    e.order.conductor().norm()
}
