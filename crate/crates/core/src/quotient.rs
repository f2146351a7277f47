//! Finite quotient rings A/M for a ring lattice A and an A-ideal M.
//!
//! Residues live in Smith coordinates: the quotient is ⊕ Z/d_k over the
//! nontrivial elementary divisors, and elements are enumerated in the
//! lexicographic box 0 ≤ y_k < d_k.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};
use crate::ideal::OIdeal;
use crate::intmat::{self, IntMat};
use crate::lattice::ZLattice;

pub type Residue = Vec<i64>;

/// Enumeration guard: `ORDERLAB_GUARD_SIZE` if set, else 10^6.
pub fn guard_limit() -> u128 {
    std::env::var("ORDERLAB_GUARD_SIZE")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(1_000_000)
}

pub(crate) fn check_guard(what: &str, size: &BigInt) -> Result<usize> {
    let limit = guard_limit();
    match size.to_u128() {
        Some(s) if s <= limit => Ok(s as usize),
        _ => Err(Error::Guard {
            what: what.to_string(),
            size: size.to_u128().unwrap_or(u128::MAX),
            limit,
        }),
    }
}

/// Lower-triangular echelon form of span(rows) + ⊕ d_k·Z e_k, computed with
/// entries kept in [0, N) for N = lcm(d) (legitimate since N·e_k lies in the
/// lattice). Returns one pivot row per column.
fn hnf_mod(mut rows: Vec<Vec<i128>>, moduli: &[i64]) -> Vec<Vec<i128>> {
    let m = moduli.len();
    let big_n = moduli.iter().fold(1i128, |acc, &d| {
        let (mut a, mut b) = (acc, d as i128);
        while b != 0 {
            (a, b) = (b, a % b);
        }
        acc / a * d as i128
    });
    for (k, &d) in moduli.iter().enumerate() {
        let mut r = vec![0i128; m];
        r[k] = d as i128;
        rows.push(r);
    }
    for r in rows.iter_mut() {
        for x in r.iter_mut() {
            *x = x.rem_euclid(big_n);
        }
    }
    let mut pivots: Vec<Vec<i128>> = vec![Vec::new(); m];
    for col in (0..m).rev() {
        // N·e_col is in the lattice but may have been reduced away above
        let mut nrow = vec![0i128; m];
        nrow[col] = big_n;
        rows.push(nrow);
        loop {
            let mut best: Option<usize> = None;
            let mut nonzero = 0;
            for (i, r) in rows.iter().enumerate() {
                if r[col] == 0 {
                    continue;
                }
                nonzero += 1;
                if best.is_none_or(|b| rows[b][col] > r[col]) {
                    best = Some(i);
                }
            }
            let b = best.expect("N·e_col keeps the column nonzero");
            if nonzero == 1 {
                pivots[col] = rows.swap_remove(b);
                break;
            }
            let prow = rows[b].clone();
            let p = prow[col];
            for (i, r) in rows.iter_mut().enumerate() {
                if i == b || r[col] == 0 {
                    continue;
                }
                let q = r[col] / p;
                for (x, y) in r.iter_mut().zip(&prow) {
                    *x = (*x - q * y).rem_euclid(big_n);
                }
            }
        }
    }
    pivots
}

/// Back-substitution membership test against `hnf_mod` pivots.
fn in_echelon(pivots: &[Vec<i128>], y: &[i64]) -> bool {
    let mut v: Vec<i128> = y.iter().map(|&x| x as i128).collect();
    for i in (0..pivots.len()).rev() {
        let p = pivots[i][i];
        if v[i].rem_euclid(p) != 0 {
            return false;
        }
        let q = v[i].div_euclid(p);
        for j in 0..=i {
            v[j] -= q * pivots[i][j];
        }
    }
    true
}

/// An additive subgroup of a finite quotient, with a membership test.
#[derive(Clone, Debug)]
pub struct Subgroup {
    pivots: Vec<Vec<i128>>,
}

impl Subgroup {
    pub fn contains(&self, y: &[i64]) -> bool {
        in_echelon(&self.pivots, y)
    }

    /// Index of the subgroup in the whole quotient.
    pub fn index(&self) -> u128 {
        (0..self.pivots.len()).map(|i| self.pivots[i][i] as u128).product()
    }
}

/// The finite ring ambient/modulus.
#[derive(Clone)]
pub struct FiniteQuotient {
    field: Arc<Field>,
    ambient: ZLattice,
    modulus: ZLattice,
    snf: Vec<BigInt>,
    size: BigInt,
    comps: Vec<usize>,
    moduli: Vec<i64>,
    v: IntMat,
    vinv: IntMat,
    table: Vec<Vec<Residue>>,
    one: Residue,
}

impl std::fmt::Debug for FiniteQuotient {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "FiniteQuotient(size={}, snf={:?})", self.size, self.snf)
    }
}

impl FiniteQuotient {
    pub fn new(field: &Arc<Field>, ambient: &ZLattice, modulus: &ZLattice) -> Result<Self> {
        let abasis = ambient.basis();
        let mbasis = modulus.basis();
        let b: IntMat = mbasis
            .iter()
            .map(|m| ambient.coords(m).ok_or_else(|| Error::pre("modulus not contained in ambient")))
            .collect::<Result<_>>()?;
        for x in &abasis {
            for y in &abasis {
                if !ambient.contains(&field.mul(x, y)) {
                    return Err(Error::NotARing("ambient lattice is not closed under multiplication".into()));
                }
            }
            for m in &mbasis {
                if !modulus.contains(&field.mul(x, m)) {
                    return Err(Error::pre("modulus not an ideal of ambient"));
                }
            }
        }
        if !ambient.contains(&field.one()) {
            return Err(Error::NoIdentity);
        }
        let (d, _u, v) = intmat::snf(&b);
        let vinv = intmat::unimodular_inverse(&v);
        let size = d.iter().fold(BigInt::one(), |acc, x| acc * x);
        let comps: Vec<usize> = (0..d.len()).filter(|&i| !d[i].is_one()).collect();
        let mut moduli = Vec::with_capacity(comps.len());
        for &i in &comps {
            match d[i].to_i64() {
                Some(x) if x < (1 << 31) => moduli.push(x),
                _ => {
                    return Err(Error::Guard {
                        what: "elementary divisor of quotient".into(),
                        size: d[i].to_u128().unwrap_or(u128::MAX),
                        limit: 1 << 31,
                    })
                }
            }
        }
        let mut q = FiniteQuotient {
            field: field.clone(),
            ambient: ambient.clone(),
            modulus: modulus.clone(),
            snf: d,
            size,
            comps,
            moduli,
            v,
            vinv,
            table: Vec::new(),
            one: Vec::new(),
        };
        let m = q.moduli.len();
        let basis_reps: Vec<FieldElement> = (0..m)
            .map(|i| {
                let mut e = vec![0i64; m];
                e[i] = 1;
                q.representative(&e)
            })
            .collect();
        let mut table = vec![vec![Vec::new(); m]; m];
        for i in 0..m {
            for j in 0..m {
                table[i][j] = q.residue(&field.mul(&basis_reps[i], &basis_reps[j]))?;
            }
        }
        q.table = table;
        q.one = q.residue(&field.one())?;
        Ok(q)
    }

    /// O̅/J.
    pub fn maximal_mod(field: &Arc<Field>, j: &OIdeal) -> Result<Self> {
        Self::new(field, field.maximal_lattice(), j.lattice())
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn ambient(&self) -> &ZLattice {
        &self.ambient
    }

    pub fn modulus(&self) -> &ZLattice {
        &self.modulus
    }

    /// All n elementary divisors, including trivial ones.
    pub fn snf(&self) -> &[BigInt] {
        &self.snf
    }

    pub fn size(&self) -> &BigInt {
        &self.size
    }

    pub fn moduli(&self) -> &[i64] {
        &self.moduli
    }

    pub fn one(&self) -> &Residue {
        &self.one
    }

    pub fn zero(&self) -> Residue {
        vec![0; self.moduli.len()]
    }

    /// Residue class of an element of the ambient ring.
    pub fn residue(&self, x: &FieldElement) -> Result<Residue> {
        let c = self.ambient.coords(x).ok_or_else(|| Error::pre(format!("{x} is not in the ambient ring")))?;
        let y = intmat::vec_mat(&c, &self.v);
        Ok(self
            .comps
            .iter()
            .zip(&self.moduli)
            .map(|(&i, &d)| {
                let r = &y[i] % BigInt::from(d);
                let r = r.to_i64().unwrap();
                r.rem_euclid(d)
            })
            .collect())
    }

    /// The canonical lift of a residue to the ambient ring.
    pub fn representative(&self, y: &[i64]) -> FieldElement {
        let n = self.snf.len();
        let mut z = vec![BigInt::zero(); n];
        for (k, &i) in self.comps.iter().enumerate() {
            z[i] = BigInt::from(y[k]);
        }
        let x = intmat::vec_mat(&z, &self.vinv);
        self.ambient.element_from_coords(&x)
    }

    pub fn add(&self, a: &[i64], b: &[i64]) -> Residue {
        a.iter().zip(b).zip(&self.moduli).map(|((x, y), d)| (x + y) % d).collect()
    }

    pub fn neg(&self, a: &[i64]) -> Residue {
        a.iter().zip(&self.moduli).map(|(x, d)| (d - x) % d).collect()
    }

    pub fn mul(&self, a: &[i64], b: &[i64]) -> Residue {
        let m = self.moduli.len();
        let mut acc = vec![0i128; m];
        for i in 0..m {
            if a[i] == 0 {
                continue;
            }
            for j in 0..m {
                if b[j] == 0 {
                    continue;
                }
                let ab = a[i] as i128 * b[j] as i128;
                for (k, t) in self.table[i][j].iter().enumerate() {
                    acc[k] = (acc[k] + ab * *t as i128) % self.moduli[k] as i128;
                }
            }
        }
        acc.into_iter().map(|x| x as i64).collect()
    }

    pub fn pow(&self, a: &[i64], mut e: u64) -> Residue {
        let mut base = a.to_vec();
        let mut acc = self.one.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    pub fn is_zero(&self, a: &[i64]) -> bool {
        a.iter().all(|&x| x == 0)
    }

    /// Position of a residue in the lexicographic enumeration.
    pub fn index_of(&self, y: &[i64]) -> usize {
        y.iter().zip(&self.moduli).fold(0usize, |acc, (&x, &d)| acc * d as usize + x as usize)
    }

    pub fn residue_at(&self, mut idx: usize) -> Residue {
        let mut y = vec![0i64; self.moduli.len()];
        for k in (0..self.moduli.len()).rev() {
            let d = self.moduli[k] as usize;
            y[k] = (idx % d) as i64;
            idx /= d;
        }
        y
    }

    /// Number of elements, checked against the enumeration guard.
    pub fn enumerable_size(&self) -> Result<usize> {
        check_guard("quotient size", &self.size)
    }

    /// Unit test by surjectivity of y ↦ a·y on ⊕ Z/d_k.
    pub fn is_unit(&self, a: &[i64]) -> bool {
        let m = self.moduli.len();
        if m == 0 {
            return true;
        }
        let rows: Vec<Vec<i128>> = (0..m)
            .map(|i| {
                let mut e = vec![0i64; m];
                e[i] = 1;
                self.mul(a, &e).into_iter().map(|x| x as i128).collect()
            })
            .collect();
        hnf_mod(rows, &self.moduli).iter().enumerate().all(|(i, r)| r[i] == 1)
    }

    /// Units of the quotient, counted over the full enumeration.
    pub fn count_units(&self) -> Result<u64> {
        let size = self.enumerable_size()?;
        Ok((0..size).into_par_iter().filter(|&i| self.is_unit(&self.residue_at(i))).count() as u64)
    }

    /// Independent unit count: x is a unit iff some y has xy = 1. Quadratic
    /// in the size; meant for cross-checks on small quotients.
    pub fn count_units_by_inverse_search(&self) -> Result<u64> {
        let size = self.enumerable_size()?;
        let mut found = vec![false; size];
        for i in 0..size {
            if found[i] {
                continue;
            }
            let x = self.residue_at(i);
            for j in 0..size {
                let y = self.residue_at(j);
                if self.mul(&x, &y) == self.one {
                    found[i] = true;
                    found[j] = true;
                    break;
                }
            }
        }
        Ok(found.iter().filter(|&&b| b).count() as u64)
    }

    /// Third count: elements whose multiplication map is a bijection,
    /// checked by collecting the full image.
    pub fn count_units_by_bijection(&self) -> Result<u64> {
        let size = self.enumerable_size()?;
        let mut count = 0;
        for i in 0..size {
            let x = self.residue_at(i);
            let mut seen = vec![false; size];
            let mut hits = 0;
            for j in 0..size {
                let k = self.index_of(&self.mul(&x, &self.residue_at(j)));
                if !seen[k] {
                    seen[k] = true;
                    hits += 1;
                }
            }
            if hits == size {
                count += 1;
            }
        }
        Ok(count)
    }

    /// The additive subgroup sub/modulus for modulus ⊆ sub ⊆ ambient.
    pub fn subgroup(&self, sub: &ZLattice) -> Result<Subgroup> {
        let rows: Vec<Vec<i128>> = sub
            .basis()
            .iter()
            .map(|b| Ok(self.residue(b)?.into_iter().map(|x| x as i128).collect()))
            .collect::<Result<_>>()?;
        Ok(Subgroup { pivots: hnf_mod(rows, &self.moduli) })
    }
}

pub fn quotient_of(field: &Arc<Field>, ambient: &ZLattice, modulus: &ZLattice) -> Result<FiniteQuotient> {
    FiniteQuotient::new(field, ambient, modulus)
}

pub fn count_units(q: &FiniteQuotient) -> Result<u64> {
    q.count_units()
}

/// Outcome of splitting R/I along a coprime factorization I = Q_1 ⋯ Q_k.
#[derive(Clone, Debug)]
pub struct CrtSplit {
    /// α_i ∈ R with α_i ≡ 1 mod Q_i and α_i ≡ 0 mod Q_j (j ≠ i), where found.
    pub idempotents: Vec<Option<FieldElement>>,
    /// |R/I| and Π |(R + Q_i)/Q_i|.
    pub source_size: BigInt,
    pub target_size: BigInt,
    /// The projection is always injective (its kernel is (R ∩ ∩Q_i)/I = 0);
    /// it is bijective iff it is surjective.
    pub surjective: bool,
}

/// Projection R/I → Π (R + Q_i)/Q_i with the idempotent lifts that prove
/// surjectivity when they exist.
pub fn crt_split(field: &Arc<Field>, r: &ZLattice, factors: &[OIdeal]) -> Result<CrtSplit> {
    for i in 0..factors.len() {
        for j in i + 1..factors.len() {
            if !factors[i].is_coprime(&factors[j]) {
                return Err(Error::pre("CRT factors are not pairwise coprime"));
            }
        }
    }
    let mut prod = OIdeal::unit(field);
    for q in factors {
        prod = prod.mul(q);
    }
    if !prod.lattice().is_subset_of(r) {
        return Err(Error::pre("product of the factors is not contained in the order"));
    }
    let source_size = r.index(prod.lattice())?;
    let mut target_size = BigInt::one();
    let mut idempotents = Vec::with_capacity(factors.len());
    for (i, qi) in factors.iter().enumerate() {
        let rq = r.sum(qi.lattice());
        target_size *= rq.index(qi.lattice())?;
        // α ∈ R ∩ Π_{j≠i} Q_j with α ≡ 1 mod Q_i
        let mut others = OIdeal::unit(field);
        for (j, qj) in factors.iter().enumerate() {
            if j != i {
                others = others.mul(qj);
            }
        }
        let li = r.intersect(others.lattice());
        let alpha = li.decompose_sum(qi.lattice(), &field.one()).map(|(a, _)| a);
        if let Some(a) = &alpha {
            let ok = r.contains(a)
                && qi.contains(&a.sub(&field.one()))
                && factors.iter().enumerate().all(|(j, qj)| j == i || qj.contains(a));
            if !ok {
                return Err(Error::invariant("CRT idempotent fails its congruences"));
            }
        }
        idempotents.push(alpha);
    }
    let surjective = source_size == target_size;
    if surjective != idempotents.iter().all(|a| a.is_some()) {
        return Err(Error::invariant("CRT cardinality and idempotent verdicts disagree"));
    }
    Ok(CrtSplit { idempotents, source_size, target_size, surjective })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hnf_mod_detects_full_lattice() {
        // Z/4 with generator 2: not everything; with generator 3: everything
        assert_eq!(hnf_mod(vec![vec![2]], &[4])[0][0], 2);
        assert_eq!(hnf_mod(vec![vec![3]], &[4])[0][0], 1);
        let p = hnf_mod(vec![vec![1, 2]], &[3, 6]);
        assert!(in_echelon(&p, &[1, 2]));
        assert!(in_echelon(&p, &[2, 4]));
        assert!(!in_echelon(&p, &[0, 1]));
    }
}
