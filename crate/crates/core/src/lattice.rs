//! Full-rank Z-lattices in K, stored as `den` and a canonical
//! lower-triangular row HNF over the power basis.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};
use crate::intmat::{self, IntMat};

/// Row `i` of `hnf`, divided by `den`, is the i-th basis vector. Pivots sit
/// on the diagonal and are positive; entries left of a pivot are reduced
/// into `[0, pivot)`. `den` is minimal, so equal lattices compare equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ZLattice {
    pub den: BigInt,
    pub hnf: IntMat,
}

impl ZLattice {
    pub fn identity(n: usize) -> Self {
        ZLattice { den: BigInt::one(), hnf: intmat::identity(n) }
    }

    /// Lattice spanned by `rows / den`.
    pub fn from_int_rows(den: BigInt, rows: IntMat) -> Result<Self> {
        let n = rows.first().map(|r| r.len()).ok_or(Error::NotFullRank)?;
        let ech = intmat::hnf_rows(rows, n).ok_or(Error::NotFullRank)?;
        let mut l = ZLattice { den, hnf: ech.pivots };
        l.normalize();
        Ok(l)
    }

    pub fn from_generators(gens: &[FieldElement]) -> Result<Self> {
        let Some(first) = gens.first() else { return Err(Error::NotFullRank) };
        let n = first.dim();
        if gens.iter().any(|g| g.dim() != n) {
            return Err(Error::input("generators of different dimensions"));
        }
        let den = gens.iter().fold(BigInt::one(), |acc, g| acc.lcm(&g.denominator()));
        let rows = gens.iter().map(|g| g.scaled_ints(&den)).collect();
        Self::from_int_rows(den, rows)
    }

    fn normalize(&mut self) {
        let mut g = self.den.clone();
        for r in &self.hnf {
            for x in r {
                if g.is_one() {
                    return;
                }
                g = g.gcd(x);
            }
        }
        if !g.is_one() {
            self.den /= &g;
            for r in self.hnf.iter_mut() {
                for x in r.iter_mut() {
                    *x /= &g;
                }
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.hnf.len()
    }

    pub fn basis(&self) -> Vec<FieldElement> {
        let d = BigRational::from_integer(self.den.clone());
        self.hnf
            .iter()
            .map(|r| FieldElement {
                coords: r.iter().map(|x| BigRational::from_integer(x.clone()) / &d).collect(),
            })
            .collect()
    }

    pub fn element_from_coords(&self, c: &[BigInt]) -> FieldElement {
        let v = intmat::vec_mat(c, &self.hnf);
        let d = BigRational::from_integer(self.den.clone());
        FieldElement { coords: v.into_iter().map(|x| BigRational::from_integer(x) / &d).collect() }
    }

    /// Integer coordinates of `x` over the HNF basis, if `x` lies in the lattice.
    pub fn coords(&self, x: &FieldElement) -> Option<Vec<BigInt>> {
        let n = self.dim();
        let d = BigRational::from_integer(self.den.clone());
        let mut v: Vec<BigInt> = Vec::with_capacity(n);
        for c in &x.coords {
            let s = c * &d;
            if !s.is_integer() {
                return None;
            }
            v.push(s.to_integer());
        }
        self.solve_int(v)
    }

    /// Back-substitution of `v = c · hnf`; `None` at the first column whose
    /// remainder is not divisible by its pivot.
    fn solve_int(&self, mut v: Vec<BigInt>) -> Option<Vec<BigInt>> {
        let n = self.dim();
        let mut c = vec![BigInt::zero(); n];
        for i in (0..n).rev() {
            let (q, r) = v[i].div_rem(&self.hnf[i][i]);
            if !r.is_zero() {
                return None;
            }
            if !q.is_zero() {
                for j in 0..=i {
                    v[j] -= &q * &self.hnf[i][j];
                }
            }
            c[i] = q;
        }
        Some(c)
    }

    /// Column at which membership of `x` fails, with the remainder found
    /// there; `None` if `x` is in the lattice. Used in certificate logs.
    pub fn membership_failure(&self, x: &FieldElement) -> Option<String> {
        let d = BigRational::from_integer(self.den.clone());
        let mut v = Vec::new();
        for (k, c) in x.coords.iter().enumerate() {
            let s = c * &d;
            if !s.is_integer() {
                return Some(format!("coordinate {k} has non-integral value {s} after scaling by {}", self.den));
            }
            v.push(s.to_integer());
        }
        for i in (0..self.dim()).rev() {
            let (q, r) = v[i].div_rem(&self.hnf[i][i]);
            if !r.is_zero() {
                return Some(format!("column {i}: {} is not divisible by pivot {}", v[i], self.hnf[i][i]));
            }
            for j in 0..=i {
                v[j] -= &q * &self.hnf[i][j];
            }
        }
        None
    }

    pub fn contains(&self, x: &FieldElement) -> bool {
        self.coords(x).is_some()
    }

    /// `self ⊆ other`.
    pub fn is_subset_of(&self, other: &ZLattice) -> bool {
        self.basis().iter().all(|b| other.contains(b))
    }

    /// Covolume relative to Z^n: product of pivots over den^n.
    pub fn volume(&self) -> BigRational {
        let p = self.hnf.iter().enumerate().fold(BigInt::one(), |acc, (i, r)| acc * &r[i]);
        BigRational::new(p, num_traits::pow(self.den.clone(), self.dim()))
    }

    /// `[self : sub]`, requiring `sub ⊆ self`.
    pub fn index(&self, sub: &ZLattice) -> Result<BigInt> {
        if !sub.is_subset_of(self) {
            return Err(Error::pre("index of a lattice that is not a sublattice"));
        }
        let q = sub.volume() / self.volume();
        if !q.is_integer() {
            return Err(Error::invariant("non-integral lattice index"));
        }
        Ok(q.to_integer())
    }

    /// Common denominator and integer rows of both lattices over it.
    fn common(&self, other: &ZLattice) -> (BigInt, IntMat, IntMat) {
        let d = self.den.lcm(&other.den);
        let sa = &d / &self.den;
        let sb = &d / &other.den;
        let a = self.hnf.iter().map(|r| r.iter().map(|x| x * &sa).collect()).collect();
        let b = other.hnf.iter().map(|r| r.iter().map(|x| x * &sb).collect()).collect();
        (d, a, b)
    }

    pub fn sum(&self, other: &ZLattice) -> ZLattice {
        let (d, mut a, b) = self.common(other);
        a.extend(b);
        Self::from_int_rows(d, a).expect("sum of full-rank lattices is full rank")
    }

    pub fn intersect(&self, other: &ZLattice) -> ZLattice {
        let n = self.dim();
        let (d, a, b) = self.common(other);
        // x·A = y·B  <=>  (x, y) in the left kernel of [A; -B]
        let mut stacked = a.clone();
        stacked.extend(b.iter().map(|r| r.iter().map(|x| -x).collect::<Vec<_>>()));
        let ker = intmat::left_kernel(&stacked, n).expect("stacked system has full column rank");
        let rows: IntMat = ker.iter().map(|k| intmat::vec_mat(&k[..n], &a)).collect();
        Self::from_int_rows(d, rows).expect("intersection of full-rank lattices is full rank")
    }

    /// Writes x = a + b with a ∈ self and b ∈ other, when x ∈ self + other.
    pub fn decompose_sum(&self, other: &ZLattice, x: &FieldElement) -> Option<(FieldElement, FieldElement)> {
        let n = self.dim();
        let (d, a, b) = self.common(other);
        let dq = BigRational::from_integer(d.clone());
        let mut v = Vec::with_capacity(n);
        for c in &x.coords {
            let s = c * &dq;
            if !s.is_integer() {
                return None;
            }
            v.push(s.to_integer());
        }
        let rows: IntMat = a
            .iter()
            .chain(b.iter())
            .enumerate()
            .map(|(i, r)| {
                let mut row = r.clone();
                row.extend((0..2 * n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }));
                row
            })
            .collect();
        let ech = intmat::hnf_rows(rows, n)?;
        let mut coeff = vec![BigInt::zero(); 2 * n];
        for i in (0..n).rev() {
            let (q, r) = v[i].div_rem(&ech.pivots[i][i]);
            if !r.is_zero() {
                return None;
            }
            for j in 0..=i {
                v[j] -= &q * &ech.pivots[i][j];
            }
            for (c, t) in coeff.iter_mut().zip(&ech.pivots[i][n..]) {
                *c += &q * t;
            }
        }
        let apart = intmat::vec_mat(&coeff[..n], &a);
        let a_elem = FieldElement {
            coords: apart.into_iter().map(|z| BigRational::from_integer(z) / &dq).collect(),
        };
        let b_elem = x.sub(&a_elem);
        debug_assert!(self.contains(&a_elem) && other.contains(&b_elem));
        Some((a_elem, b_elem))
    }

    pub fn scale_int(&self, k: &BigInt) -> ZLattice {
        assert!(!k.is_zero());
        let rows = self.hnf.iter().map(|r| r.iter().map(|x| x * k).collect()).collect();
        Self::from_int_rows(self.den.clone(), rows).unwrap()
    }

    /// x·L for a nonzero field element x.
    pub fn scale(&self, field: &Field, x: &FieldElement) -> ZLattice {
        let gens: Vec<FieldElement> = self.basis().iter().map(|b| field.mul(b, x)).collect();
        Self::from_generators(&gens).expect("nonzero multiple of a full-rank lattice")
    }

    pub fn product(&self, other: &ZLattice, field: &Field) -> ZLattice {
        let ba = self.basis();
        let bb = other.basis();
        let mut gens = Vec::with_capacity(ba.len() * bb.len());
        for x in &ba {
            for y in &bb {
                gens.push(field.mul(x, y));
            }
        }
        Self::from_generators(&gens).expect("product of full-rank lattices is full rank")
    }

    /// (self : other) = {x ∈ K : x·other ⊆ self} = ∩_j b_j^{-1}·self.
    pub fn colon(&self, other: &ZLattice, field: &Field) -> ZLattice {
        let mut acc: Option<ZLattice> = None;
        for b in other.basis() {
            let inv = field.inverse(&b).expect("basis vectors are nonzero");
            let part = self.scale(field, &inv);
            acc = Some(match acc {
                None => part,
                Some(a) => a.intersect(&part),
            });
        }
        acc.expect("lattice has at least one basis vector")
    }

    /// Representatives of self/sub for a sublattice, the zero coset first,
    /// in lexicographic order of their Smith coordinates. Fails past `limit`.
    pub fn quotient_reps(&self, sub: &ZLattice, limit: usize) -> Result<Vec<FieldElement>> {
        let m: IntMat = sub
            .basis()
            .iter()
            .map(|b| self.coords(b).ok_or_else(|| Error::pre("quotient by a lattice that is not a sublattice")))
            .collect::<Result<_>>()?;
        let (d, _u, v) = intmat::snf(&m);
        let size = d.iter().fold(BigInt::one(), |a, x| a * x);
        if size > BigInt::from(limit) {
            return Err(Error::Guard {
                what: "lattice quotient size".into(),
                size: num_traits::ToPrimitive::to_u128(&size).unwrap_or(u128::MAX),
                limit: limit as u128,
            });
        }
        let vinv = intmat::unimodular_inverse(&v);
        let n = d.len();
        let mut y = vec![BigInt::zero(); n];
        let mut out = Vec::new();
        loop {
            out.push(self.element_from_coords(&intmat::vec_mat(&y, &vinv)));
            let mut i = n;
            loop {
                if i == 0 {
                    return Ok(out);
                }
                i -= 1;
                y[i] += 1;
                if y[i] < d[i] {
                    break;
                }
                y[i] = BigInt::zero();
            }
        }
    }

    /// Text form: "den=<d>" then one line per basis row.
    pub fn dump(&self) -> String {
        let mut s = format!("den={}\n", self.den);
        for r in &self.hnf {
            let row: Vec<String> = r.iter().map(|x| x.to_string()).collect();
            let _ = writeln!(s, "{}", row.join(" "));
        }
        s
    }

    /// Rows as strings, for JSON output.
    pub fn rows_strings(&self) -> Vec<Vec<String>> {
        self.hnf.iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect()
    }

    /// True if every basis vector has integer coordinates (den = 1).
    pub fn is_integral(&self) -> bool {
        self.den.is_one()
    }

    /// Least positive integer in the lattice. L ∩ Q is spanned by the first
    /// HNF row alone, (h/den)·Z, so this is the numerator of h/den.
    pub fn min_positive_integer(&self) -> BigInt {
        BigRational::new(self.hnf[0][0].clone(), self.den.clone()).numer().clone()
    }
}

pub fn lat_from_generators(gens: &[FieldElement]) -> Result<ZLattice> {
    ZLattice::from_generators(gens)
}

pub fn lat_sum(a: &ZLattice, b: &ZLattice) -> ZLattice {
    a.sum(b)
}

pub fn lat_intersect(a: &ZLattice, b: &ZLattice) -> ZLattice {
    a.intersect(b)
}

pub fn lat_product(a: &ZLattice, b: &ZLattice, field: &Field) -> ZLattice {
    a.product(b, field)
}

pub fn lat_colon(a: &ZLattice, b: &ZLattice, field: &Field) -> ZLattice {
    a.colon(b, field)
}

pub fn lat_contains(a: &ZLattice, x: &FieldElement) -> bool {
    a.contains(x)
}

/// `a ⊆ b`.
pub fn lat_subset(a: &ZLattice, b: &ZLattice) -> bool {
    a.is_subset_of(b)
}

/// `[a : b]` for `b ⊆ a`.
pub fn lat_index(a: &ZLattice, b: &ZLattice) -> Result<BigInt> {
    a.index(b)
}
