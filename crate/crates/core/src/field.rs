//! Number fields K = Q[θ]/(f) with ingested maximal-order and unit data.

use std::fmt;
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::intmat::{self, IntMat};
use crate::lattice::ZLattice;
use crate::poly;

/// The JSON document describing a field. Keys are exactly these; anything
/// else is rejected at parse time.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSpec {
    pub min_poly: Vec<i64>,
    pub maximal_basis: Vec<Vec<String>>,
    pub class_number: u64,
    pub class_group: Vec<u64>,
    pub fundamental_units: Vec<Vec<String>>,
    pub torsion_order: u64,
    pub label: String,
}

/// An element of K in coordinates over the power basis 1, θ, ..., θ^{n-1}.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement {
    pub coords: Vec<BigRational>,
}

impl FieldElement {
    pub fn from_ints(c: &[i64]) -> Self {
        FieldElement {
            coords: c.iter().map(|&x| BigRational::from_integer(x.into())).collect(),
        }
    }

    pub fn from_bigints(c: &[BigInt]) -> Self {
        FieldElement {
            coords: c.iter().map(|x| BigRational::from_integer(x.clone())).collect(),
        }
    }

    pub fn scalar(n: usize, q: BigRational) -> Self {
        let mut coords = vec![BigRational::zero(); n];
        coords[0] = q;
        FieldElement { coords }
    }

    pub fn int(n: usize, k: i64) -> Self {
        Self::scalar(n, BigRational::from_integer(k.into()))
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.coords[0].is_one() && self.coords[1..].iter().all(|c| c.is_zero())
    }

    /// Rational scalar value when the element lies in Q.
    pub fn as_rational(&self) -> Option<BigRational> {
        self.coords[1..].iter().all(|c| c.is_zero()).then(|| self.coords[0].clone())
    }

    pub fn add(&self, o: &Self) -> Self {
        FieldElement {
            coords: self.coords.iter().zip(&o.coords).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        FieldElement {
            coords: self.coords.iter().zip(&o.coords).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        FieldElement { coords: self.coords.iter().map(|a| -a).collect() }
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        FieldElement { coords: self.coords.iter().map(|a| a * q).collect() }
    }

    pub fn scale_int(&self, k: &BigInt) -> Self {
        self.scale(&BigRational::from_integer(k.clone()))
    }

    /// Least positive d with d·self having integer power-basis coordinates.
    pub fn denominator(&self) -> BigInt {
        self.coords.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }

    /// Integer coordinates of `d·self`, where `d` must clear all denominators.
    pub fn scaled_ints(&self, d: &BigInt) -> Vec<BigInt> {
        self.coords
            .iter()
            .map(|c| {
                let v = c * BigRational::from_integer(d.clone());
                debug_assert!(v.is_integer());
                v.to_integer()
            })
            .collect()
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for (k, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if wrote {
                f.write_str(if neg { "-" } else { "+" })?;
            } else if neg {
                f.write_str("-")?;
            }
            let mag_s = if mag.is_integer() {
                mag.numer().to_string()
            } else {
                format!("{}/{}", mag.numer(), mag.denom())
            };
            match k {
                0 => f.write_str(&mag_s)?,
                _ => {
                    if !mag.is_one() {
                        f.write_str(&mag_s)?;
                        if !mag.is_integer() {
                            f.write_str("*")?;
                        }
                    }
                    f.write_str("a")?;
                    if k > 1 {
                        write!(f, "^{k}")?;
                    }
                }
            }
            wrote = true;
        }
        if !wrote {
            f.write_str("0")?;
        }
        Ok(())
    }
}

pub(crate) fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::input(format!("not an exact rational: {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(p, q))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// A validated number field together with its maximal order `O̅`.
pub struct Field {
    n: usize,
    min_poly: Vec<BigInt>,
    /// θ^(n+k) in power-basis coordinates, k = 0..n-1.
    reduction: Vec<Vec<BigInt>>,
    maximal: ZLattice,
    /// O̅ basis elements and the integer structure constants over that basis:
    /// e_i e_j = Σ_k table[i][j][k] e_k.
    obasis: Vec<FieldElement>,
    /// Inverse of the matrix whose rows are den·(basis element).
    obasis_inv: Vec<Vec<BigRational>>,
    otable: Vec<Vec<Vec<BigInt>>>,
    class_number: u64,
    class_group: Vec<u64>,
    units: Vec<FieldElement>,
    torsion_order: u64,
    torsion_gen: FieldElement,
    signature: (usize, usize),
    label: String,
    pub(crate) principal_cache: OnceLock<crate::principal::PrincipalityOracle>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Field")
            .field("label", &self.label)
            .field("min_poly", &self.min_poly)
            .finish_non_exhaustive()
    }
}

impl Field {
    pub fn from_json(text: &str) -> Result<Arc<Field>> {
        let spec: FieldSpec = serde_json::from_str(text)?;
        Field::new(spec)
    }

    pub fn from_path(path: impl AsRef<std::path::Path>) -> Result<Arc<Field>> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::input(format!("cannot read {}: {e}", path.display())))?;
        Field::from_json(&text)
    }

    pub fn new(spec: FieldSpec) -> Result<Arc<Field>> {
        let f: Vec<BigInt> = spec.min_poly.iter().map(|&c| BigInt::from(c)).collect();
        if f.len() < 3 {
            return Err(Error::input("min_poly must have degree at least 2"));
        }
        let n = f.len() - 1;
        if n > 4 {
            return Err(Error::Unsupported(format!("degree {n} > 4")));
        }
        if !f[n].is_one() {
            return Err(Error::input("min_poly must be monic"));
        }
        if let Some(why) = reducibility_witness(&f) {
            return Err(Error::input(format!("min_poly is reducible: {why}")));
        }

        // reduction table for θ^n .. θ^(2n-2)
        let mut reduction: Vec<Vec<BigInt>> = Vec::with_capacity(n);
        let mut cur: Vec<BigInt> = f[..n].iter().map(|c| -c).collect();
        for _ in 0..n {
            reduction.push(cur.clone());
            // multiply by θ
            let top = cur[n - 1].clone();
            let mut next = vec![BigInt::zero(); n];
            for i in (1..n).rev() {
                next[i] = cur[i - 1].clone();
            }
            for i in 0..n {
                next[i] -= &top * &f[i];
            }
            cur = next;
        }

        let fq = poly::from_ints(&f);
        let r1 = poly::count_real_roots(&fq);
        let r2 = (n - r1) / 2;

        if spec.maximal_basis.len() != n || spec.maximal_basis.iter().any(|r| r.len() != n) {
            return Err(Error::input("maximal_basis must be n rows of n rationals"));
        }
        let obasis: Vec<FieldElement> = spec
            .maximal_basis
            .iter()
            .map(|row| {
                Ok(FieldElement {
                    coords: row.iter().map(|s| parse_rational(s)).collect::<Result<_>>()?,
                })
            })
            .collect::<Result<_>>()?;
        let maximal = ZLattice::from_generators(&obasis)
            .map_err(|_| Error::input("maximal_basis is not of full rank"))?;
        // the ingested rows must themselves be a basis (not just generators)
        let m = obasis_matrix(&obasis, &maximal.den);
        if intmat::det(&m).abs() != maximal.hnf.iter().enumerate().fold(BigInt::one(), |acc, (i, r)| acc * &r[i]) {
            return Err(Error::input("maximal_basis rows are not a basis of their span"));
        }
        let obasis_inv = rational_inverse(&m).ok_or_else(|| Error::input("maximal_basis is singular"))?;

        let mut field = Field {
            n,
            min_poly: f,
            reduction,
            maximal,
            obasis,
            obasis_inv,
            otable: Vec::new(),
            class_number: spec.class_number,
            class_group: spec.class_group.clone(),
            units: Vec::new(),
            torsion_order: spec.torsion_order,
            torsion_gen: FieldElement::int(n, -1),
            signature: (r1, r2),
            label: spec.label.clone(),
            principal_cache: OnceLock::new(),
        };

        let one = FieldElement::int(n, 1);
        if !field.maximal.contains(&one) {
            return Err(Error::input("maximal_basis lattice does not contain 1"));
        }
        let mut theta = FieldElement::int(n, 0);
        theta.coords[1] = BigRational::one();
        if !field.maximal.contains(&theta) {
            return Err(Error::input("maximal_basis lattice does not contain the generator"));
        }
        let mut otable = vec![vec![Vec::new(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let p = field.mul(&field.obasis[i], &field.obasis[j]);
                match field.to_obasis(&p) {
                    Some(c) => otable[i][j] = c,
                    None => return Err(Error::input("maximal_basis is not closed under multiplication")),
                }
            }
        }
        field.otable = otable;

        if spec.class_number == 0 {
            return Err(Error::input("class_number must be positive"));
        }
        let prod: u64 = spec.class_group.iter().product();
        if prod != spec.class_number
            || spec.class_group.iter().any(|&c| c < 2)
            || spec.class_group.windows(2).any(|w| w[1] % w[0] != 0)
        {
            return Err(Error::input("class_group invariant factors do not match class_number"));
        }

        let rank = r1 + r2 - 1;
        if spec.fundamental_units.len() != rank {
            return Err(Error::input(format!(
                "expected {rank} fundamental units for signature ({r1},{r2}), got {}",
                spec.fundamental_units.len()
            )));
        }
        for row in &spec.fundamental_units {
            if row.len() != n {
                return Err(Error::input("fundamental unit has wrong dimension"));
            }
            let u = FieldElement {
                coords: row.iter().map(|s| parse_rational(s)).collect::<Result<_>>()?,
            };
            if !field.maximal.contains(&u) {
                return Err(Error::input(format!("unit {u} is not integral")));
            }
            if !field.norm(&u).abs().is_one() {
                return Err(Error::input(format!("unit {u} does not have norm ±1")));
            }
            field.units.push(u);
        }

        if spec.torsion_order < 2 || spec.torsion_order % 2 != 0 {
            return Err(Error::input("torsion_order must be even and at least 2"));
        }
        if r1 > 0 && spec.torsion_order != 2 {
            return Err(Error::input("a field with a real embedding has torsion order 2"));
        }
        if spec.torsion_order > 2 {
            field.torsion_gen = field
                .find_root_of_unity(spec.torsion_order)
                .ok_or_else(|| {
                    Error::input(format!(
                        "no primitive root of unity of order {} in the maximal order",
                        spec.torsion_order
                    ))
                })?;
        }
        Ok(Arc::new(field))
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn min_poly(&self) -> &[BigInt] {
        &self.min_poly
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn maximal_lattice(&self) -> &ZLattice {
        &self.maximal
    }

    pub fn maximal_basis(&self) -> &[FieldElement] {
        &self.obasis
    }

    pub fn class_number(&self) -> u64 {
        self.class_number
    }

    pub fn class_group(&self) -> &[u64] {
        &self.class_group
    }

    pub fn fundamental_units(&self) -> &[FieldElement] {
        &self.units
    }

    pub fn torsion_order(&self) -> u64 {
        self.torsion_order
    }

    /// A generator of the roots of unity in K.
    pub fn torsion_generator(&self) -> &FieldElement {
        &self.torsion_gen
    }

    /// (r1, r2): numbers of real and pairs of complex embeddings.
    pub fn signature(&self) -> (usize, usize) {
        self.signature
    }

    pub fn unit_rank(&self) -> usize {
        self.signature.0 + self.signature.1 - 1
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement::int(self.n, 0)
    }

    pub fn one(&self) -> FieldElement {
        FieldElement::int(self.n, 1)
    }

    pub fn theta(&self) -> FieldElement {
        let mut t = self.zero();
        t.coords[1] = BigRational::one();
        t
    }

    pub fn int(&self, k: i64) -> FieldElement {
        FieldElement::int(self.n, k)
    }

    pub fn check_dim(&self, a: &FieldElement) -> Result<()> {
        if a.dim() != self.n {
            return Err(Error::input(format!("element has {} coordinates, field degree is {}", a.dim(), self.n)));
        }
        Ok(())
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let n = self.n;
        let mut prod = vec![BigRational::zero(); 2 * n - 1];
        for (i, x) in a.coords.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coords.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] += x * y;
                }
            }
        }
        let mut out: Vec<BigRational> = prod[..n].to_vec();
        for (k, c) in prod[n..].iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (o, r) in out.iter_mut().zip(&self.reduction[k]) {
                if !r.is_zero() {
                    *o += c * BigRational::from_integer(r.clone());
                }
            }
        }
        FieldElement { coords: out }
    }

    pub fn try_mul(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
        self.check_dim(a)?;
        self.check_dim(b)?;
        Ok(self.mul(a, b))
    }

    pub fn pow(&self, a: &FieldElement, mut e: u64) -> FieldElement {
        let mut base = a.clone();
        let mut acc = self.one();
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

    /// a^e for any integer e; a must be nonzero when e < 0.
    pub fn pow_signed(&self, a: &FieldElement, e: i64) -> Result<FieldElement> {
        if e >= 0 {
            Ok(self.pow(a, e as u64))
        } else {
            Ok(self.pow(&self.inverse(a)?, e.unsigned_abs()))
        }
    }

    /// Integer matrix of multiplication by `d·a` on the power basis, where d
    /// is the denominator of `a`.
    fn int_mult_matrix(&self, a: &FieldElement) -> (BigInt, IntMat) {
        let d = a.denominator();
        let scaled = FieldElement::from_bigints(&a.scaled_ints(&d));
        let mut rows = Vec::with_capacity(self.n);
        let mut basis = self.one();
        for _ in 0..self.n {
            let img = self.mul(&basis, &scaled);
            rows.push(img.coords.iter().map(|c| c.to_integer()).collect());
            basis = self.mul(&basis, &self.theta());
        }
        (d, rows)
    }

    /// Multiplication-by-a matrix on the power basis: row i is a·θ^i.
    pub fn mult_matrix(&self, a: &FieldElement) -> Vec<Vec<BigRational>> {
        let mut rows = Vec::with_capacity(self.n);
        let mut basis = self.one();
        for _ in 0..self.n {
            rows.push(self.mul(&basis, a).coords);
            basis = self.mul(&basis, &self.theta());
        }
        rows
    }

    pub fn norm(&self, a: &FieldElement) -> BigRational {
        let (d, m) = self.int_mult_matrix(a);
        let det = intmat::det(&m);
        BigRational::new(det, num_traits::pow(d, self.n))
    }

    pub fn trace(&self, a: &FieldElement) -> BigRational {
        let m = self.mult_matrix(a);
        (0..self.n).fold(BigRational::zero(), |acc, i| acc + &m[i][i])
    }

    pub fn inverse(&self, a: &FieldElement) -> Result<FieldElement> {
        self.check_dim(a)?;
        if a.is_zero() {
            return Err(Error::Domain("zero has no inverse".into()));
        }
        let mut ap = a.coords.clone();
        poly::trim(&mut ap);
        let fq = poly::from_ints(&self.min_poly);
        let (g, s, _) = poly::ext_gcd(&ap, &fq);
        if g.len() != 1 {
            return Err(Error::invariant("gcd with an irreducible modulus is not 1"));
        }
        let mut coords = vec![BigRational::zero(); self.n];
        let (_, r) = poly::divrem(&s, &fq);
        for (i, c) in r.into_iter().enumerate() {
            coords[i] = c;
        }
        Ok(FieldElement { coords })
    }

    pub fn div(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, &self.inverse(b)?))
    }

    /// Integer coordinates of `x` over the maximal-order basis, or `None`
    /// when `x` is not an algebraic integer.
    pub fn to_obasis(&self, x: &FieldElement) -> Option<Vec<BigInt>> {
        let den = BigRational::from_integer(self.maximal.den.clone());
        let v: Vec<BigRational> = x.coords.iter().map(|c| c * &den).collect();
        (0..self.n)
            .map(|j| {
                let c = v.iter().zip(&self.obasis_inv).fold(BigRational::zero(), |acc, (a, row)| acc + a * &row[j]);
                c.is_integer().then(|| c.to_integer())
            })
            .collect()
    }

    pub fn from_obasis(&self, c: &[BigInt]) -> FieldElement {
        let mut acc = self.zero();
        for (ci, e) in c.iter().zip(&self.obasis) {
            if !ci.is_zero() {
                acc = acc.add(&e.scale_int(ci));
            }
        }
        acc
    }

    /// Structure constants of O̅ over its ingested basis.
    pub fn obasis_table(&self) -> &Vec<Vec<Vec<BigInt>>> {
        &self.otable
    }

    pub fn obasis_mul(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        let n = self.n;
        let mut out = vec![BigInt::zero(); n];
        for i in 0..n {
            if a[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if b[j].is_zero() {
                    continue;
                }
                let ab = &a[i] * &b[j];
                for k in 0..n {
                    if !self.otable[i][j][k].is_zero() {
                        out[k] += &ab * &self.otable[i][j][k];
                    }
                }
            }
        }
        out
    }

    pub fn is_integral(&self, x: &FieldElement) -> bool {
        self.maximal.contains(x)
    }

    /// Unit of O̅: integral with norm ±1.
    pub fn is_maximal_unit(&self, x: &FieldElement) -> bool {
        self.is_integral(x) && self.norm(x).abs().is_one()
    }

    fn find_root_of_unity(&self, w: u64) -> Option<FieldElement> {
        let n = self.n;
        let primes: Vec<u64> = (2..=w).filter(|p| w % p == 0 && (2..*p).all(|q| p % q != 0)).collect();
        let h: i64 = 3;
        let side = (2 * h + 1) as usize;
        let total = side.pow(n as u32);
        for idx in 0..total {
            let mut c = Vec::with_capacity(n);
            let mut t = idx;
            for _ in 0..n {
                c.push(BigInt::from((t % side) as i64 - h));
                t /= side;
            }
            let z = self.from_obasis(&c);
            if z.is_zero() || !self.pow(&z, w).is_one() {
                continue;
            }
            if primes.iter().all(|p| !self.pow(&z, w / p).is_one()) {
                return Some(z);
            }
        }
        None
    }

    /// [O̅ : Z[θ]].
    pub fn power_basis_index(&self) -> BigInt {
        let ztheta = ZLattice::identity(self.n);
        self.maximal.index(&ztheta).expect("Z[θ] ⊆ O̅")
    }
}

/// Rows of the basis elements scaled by `den` as an integer matrix.
fn obasis_matrix(basis: &[FieldElement], den: &BigInt) -> IntMat {
    basis.iter().map(|b| b.scaled_ints(den)).collect()
}

/// Inverse of a nonsingular integer matrix, over Q.
pub(crate) fn rational_inverse(m: &IntMat) -> Option<Vec<Vec<BigRational>>> {
    let n = m.len();
    let mut cols = Vec::with_capacity(n);
    for j in 0..n {
        let a: Vec<Vec<BigRational>> =
            m.iter().map(|r| r.iter().map(|x| BigRational::from_integer(x.clone())).collect()).collect();
        let e: Vec<BigRational> =
            (0..n).map(|i| if i == j { BigRational::one() } else { BigRational::zero() }).collect();
        cols.push(solve_rational(a, e)?);
    }
    Some((0..n).map(|i| (0..n).map(|j| cols[j][i].clone()).collect()).collect())
}

/// Gaussian elimination for a square nonsingular rational system A·x = b.
pub(crate) fn solve_rational(mut a: Vec<Vec<BigRational>>, mut b: Vec<BigRational>) -> Option<Vec<BigRational>> {
    let n = a.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        b.swap(col, piv);
        let p = a[col][col].clone();
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let factor = &a[r][col] / &p;
            for c in col..n {
                let v = &factor * &a[col][c];
                a[r][c] -= v;
            }
            let v = &factor * &b[col];
            b[r] -= v;
        }
    }
    Some((0..n).map(|i| &b[i] / &a[i][i]).collect())
}

/// Describes a nontrivial factorization of a monic integer polynomial of
/// degree ≤ 4, or `None` if it is irreducible over Q. Degree ≤ 3 reduces to
/// rational (hence integer) roots; degree 4 additionally tries every split
/// into two monic integer quadratics, which is finite since the constant
/// terms divide f(0).
fn reducibility_witness(f: &[BigInt]) -> Option<String> {
    let n = f.len() - 1;
    if f[0].is_zero() {
        return Some("root 0".into());
    }
    let c0 = f[0].abs();
    let divisors = small_divisors(&c0)?;
    for d in &divisors {
        for r in [d.clone(), -d.clone()] {
            let val = f.iter().rev().fold(BigInt::zero(), |acc, c| acc * &r + c);
            if val.is_zero() {
                return Some(format!("rational root {r}"));
            }
        }
    }
    if n == 4 {
        // (x^2 + a x + b)(x^2 + c x + d)
        let (f1, f2, f3) = (&f[1], &f[2], &f[3]);
        for b0 in &divisors {
            for b in [b0.clone(), -b0.clone()] {
                let d = &f[0] / &b;
                // a + c = f3, ac = f2 - b - d
                let s = f3.clone();
                let p = f2 - &b - &d;
                let disc = &s * &s - BigInt::from(4) * &p;
                if disc.is_negative() {
                    continue;
                }
                let r = disc.sqrt();
                if &r * &r != disc || !(&s + &r).is_even() {
                    continue;
                }
                for sign in [1i32, -1] {
                    let a = (&s + &r * sign) / 2;
                    let c = &s - &a;
                    if &a * &d + &b * &c == *f1 {
                        return Some(format!("quadratic factor x^2{a:+}x{b:+}"));
                    }
                }
            }
        }
    }
    None
}

/// Positive divisors of a nonzero integer small enough to factor by trial
/// division (|c| < 2^62); larger constant terms are out of scope.
fn small_divisors(c: &BigInt) -> Option<Vec<BigInt>> {
    let v = c.to_u64()?;
    let mut out = Vec::new();
    let mut i = 1u64;
    while i * i <= v {
        if v % i == 0 {
            out.push(BigInt::from(i));
            if i * i != v {
                out.push(BigInt::from(v / i));
            }
        }
        i += 1;
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bi(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn detects_reducible_quartic() {
        // (x^2-2)(x^2-3)
        assert!(reducibility_witness(&bi(&[6, 0, -5, 0, 1])).is_some());
        // x^4 + 1 is irreducible over Q
        assert!(reducibility_witness(&bi(&[1, 0, 0, 0, 1])).is_none());
        // x^3 + 4x - 1 has no rational roots
        assert!(reducibility_witness(&bi(&[-1, 4, 0, 1])).is_none());
        assert!(reducibility_witness(&bi(&[-4, 0, 1])).is_some());
    }

    #[test]
    fn display_round_trip_shape() {
        let x = FieldElement::from_ints(&[2, -4, 1]);
        assert_eq!(x.to_string(), "2-4a+a^2");
        let y = FieldElement { coords: vec![BigRational::new(1.into(), 2.into()), BigRational::new((-3).into(), 2.into())] };
        assert_eq!(y.to_string(), "1/2-3/2*a");
        assert_eq!(FieldElement::from_ints(&[0, 0]).to_string(), "0");
    }
}
