//! Unit groups of O̅ and of orders (unit rank ≤ 1), unit indices and coset
//! representatives of U(O̅)/U(R).

use num_bigint::BigInt;
use num_integer::Roots;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::field::FieldElement;
use crate::ideal::unit_group_order_of_quotient;
use crate::order::OrderRing;
use crate::quotient::FiniteQuotient;

/// Generators of a unit group: a root of unity of order `torsion_order`
/// and the fundamental units.
#[derive(Clone, Debug)]
pub struct UnitGroupDesc {
    pub torsion_order: u64,
    pub torsion_generator: FieldElement,
    pub fundamentals: Vec<FieldElement>,
}

/// How U(R) sits in U(O̅) = ⟨ζ⟩ × ⟨ε⟩ (w = ord ζ):
/// U(R) ∩ ⟨ζ⟩ = ⟨ζ^(w/w_r)⟩ and the free part of U(R) is generated by
/// ζ^twist · ε^power.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitIndexData {
    pub torsion_in_order: u64,
    pub power: u64,
    pub twist: u64,
    pub index: u64,
    /// Upper bound used for the power search.
    pub ceiling: u64,
}

/// Coset representatives of U(O̅)/U(R), as ζ^a·ε^b with their exponents.
#[derive(Clone, Debug)]
pub struct CosetReps {
    pub reps: Vec<FieldElement>,
    pub exponents: Vec<(u64, u64)>,
    pub index: u64,
}

impl CosetReps {
    /// Every rep multiplied by every root of unity in K (e.g. ±rep).
    pub fn with_torsion(&self, r: &OrderRing) -> Vec<FieldElement> {
        let f = r.field();
        let z = f.torsion_generator();
        let mut out = Vec::new();
        for rep in &self.reps {
            for c in 0..f.torsion_order() {
                out.push(f.mul(&f.pow(z, c), rep));
            }
        }
        out
    }
}

pub fn maximal_unit_group(r: &OrderRing) -> UnitGroupDesc {
    let f = r.field();
    UnitGroupDesc {
        torsion_order: f.torsion_order(),
        torsion_generator: f.torsion_generator().clone(),
        fundamentals: f.fundamental_units().to_vec(),
    }
}

/// Unit index data, found by walking powers of ε in O̅/I: an element of
/// U(O̅) lies in R iff its residue lies in R/I. The search stops at
/// |U(O̅/I)|, which bounds the index because U(O̅)/U(R) embeds into
/// U(O̅/I)/U(R/I).
pub fn unit_index_data(r: &OrderRing) -> Result<UnitIndexData> {
    let f = r.field();
    if f.unit_rank() > 1 {
        return Err(Error::Unsupported(format!("unsupported rank: unit rank {} > 1", f.unit_rank())));
    }
    let cond = r.conductor();
    let q = FiniteQuotient::maximal_mod(f, cond)?;
    let sub = q.subgroup(r.lattice())?;
    let w = f.torsion_order();
    let zeta = q.residue(f.torsion_generator())?;
    let zeta_pows: Vec<Vec<i64>> = (0..w).map(|a| q.pow(&zeta, a)).collect();
    let torsion_in_order = zeta_pows.iter().filter(|z| sub.contains(z)).count() as u64;
    let ceiling = match unit_group_order_of_quotient(cond) {
        Ok(u) => u,
        Err(_) => q.size().clone(),
    }
    .max(BigInt::one())
    .to_u64()
    .ok_or_else(|| Error::Unsupported("unit search ceiling exceeds 2^64".into()))?;
    if f.unit_rank() == 0 {
        return Ok(UnitIndexData { torsion_in_order, power: 1, twist: 0, index: w / torsion_in_order, ceiling });
    }
    let eps = q.residue(&f.fundamental_units()[0])?;
    let mut cur = q.one().clone();
    for k in 1..=ceiling {
        cur = q.mul(&cur, &eps);
        if let Some(a) = (0..w).find(|&a| sub.contains(&q.mul(&zeta_pows[a as usize], &cur))) {
            return Ok(UnitIndexData {
                torsion_in_order,
                power: k,
                twist: a,
                index: (w / torsion_in_order) * k,
                ceiling,
            });
        }
    }
    Err(Error::invariant(format!("no power of the fundamental unit within {ceiling} lies in the order")))
}

/// [U(O̅) : U(R)].
pub fn unit_index(r: &OrderRing) -> Result<u64> {
    Ok(unit_index_data(r)?.index)
}

/// U(R) as ⟨ζ^(w/w_r)⟩ × ⟨ζ^twist·ε^power⟩.
pub fn order_unit_group(r: &OrderRing) -> Result<UnitGroupDesc> {
    let d = unit_index_data(r)?;
    let f = r.field();
    let w = f.torsion_order();
    let zeta = f.torsion_generator();
    let fundamentals = f
        .fundamental_units()
        .iter()
        .map(|e| f.mul(&f.pow(zeta, d.twist), &f.pow(e, d.power)))
        .collect();
    Ok(UnitGroupDesc {
        torsion_order: d.torsion_in_order,
        torsion_generator: f.pow(zeta, w / d.torsion_in_order),
        fundamentals,
    })
}

/// {ζ^a ε^b : 0 ≤ a < w/w_r, 0 ≤ b < power}, ordered by (b, a).
pub fn coset_reps(r: &OrderRing) -> Result<CosetReps> {
    let d = unit_index_data(r)?;
    let f = r.field();
    let zeta = f.torsion_generator();
    let tors = f.torsion_order() / d.torsion_in_order;
    let mut reps = Vec::new();
    let mut exponents = Vec::new();
    let eps = f.fundamental_units().first().cloned();
    let mut eb = f.one();
    for b in 0..d.power {
        for a in 0..tors {
            reps.push(f.mul(&f.pow(zeta, a), &eb));
            exponents.push((a, b));
        }
        if let Some(e) = &eps {
            eb = f.mul(&eb, e);
        }
    }
    if reps.len() as u64 != d.index {
        return Err(Error::invariant("coset representative count differs from the unit index"));
    }
    Ok(CosetReps { reps, exponents, index: d.index })
}

fn is_squarefree(d: u64) -> bool {
    let mut k = 2u64;
    while k * k <= d {
        if d % (k * k) == 0 {
            return false;
        }
        k += 1;
    }
    true
}

/// Fundamental unit x + y√d (> 1) of Z[√d], from the continued fraction of
/// √d: the convergent closing the first period solves x² − d·y² = ±1 minimally.
pub fn pell_fundamental(d: u64) -> Result<(BigInt, BigInt)> {
    if !(2..=1_000_000).contains(&d) {
        return Err(Error::input(format!("d = {d} outside 2..=10^6")));
    }
    if !is_squarefree(d) {
        return Err(Error::input(format!("{d} is not squarefree")));
    }
    let a0 = d.sqrt();
    let (mut m, mut den, mut a) = (0u64, 1u64, a0);
    let (mut p_prev, mut p) = (BigInt::one(), BigInt::from(a0));
    let (mut q_prev, mut q) = (BigInt::zero(), BigInt::one());
    let dd = BigInt::from(d);
    loop {
        let norm = &p * &p - &dd * &q * &q;
        if norm == BigInt::one() || norm == -BigInt::one() {
            return Ok((p, q));
        }
        m = den * a - m;
        den = (d - m * m) / den;
        a = (a0 + m) / den;
        let ab = BigInt::from(a);
        let p_next = &ab * &p + &p_prev;
        let q_next = &ab * &q + &q_prev;
        p_prev = std::mem::replace(&mut p, p_next);
        q_prev = std::mem::replace(&mut q, q_next);
    }
}

/// Same as [`pell_fundamental`], as a field element over the basis 1, √d.
pub fn pell_fundamental_element(d: u64) -> Result<FieldElement> {
    let (x, y) = pell_fundamental(d)?;
    Ok(FieldElement::from_bigints(&[x, y]))
}
