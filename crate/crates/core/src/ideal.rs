//! Ideals of the maximal order: prime splitting, factorization, arithmetic.

use std::fmt;
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};
use crate::fpoly;
use crate::lattice::ZLattice;

/// Factor a positive integer by trial division up to 10^6. A cofactor
/// below 10^12 left after that is prime; anything larger is refused.
pub fn factor_integer(n: &BigInt) -> Result<Vec<(u64, u32)>> {
    let mut n = n.clone();
    if n <= BigInt::zero() {
        return Err(Error::pre("factor_integer needs a positive integer"));
    }
    let mut out = Vec::new();
    let mut d: u64 = 2;
    while d <= 1_000_000 {
        let bd = BigInt::from(d);
        if &bd * &bd > n {
            break;
        }
        let mut e = 0;
        while (&n % &bd).is_zero() {
            n /= &bd;
            e += 1;
        }
        if e > 0 {
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if !n.is_one() {
        match n.to_u64() {
            Some(v) if v < 1_000_000_000_000 || BigInt::from(d) * BigInt::from(d) > n => out.push((v, 1)),
            _ => return Err(Error::Unsupported(format!("cannot factor {n} by trial division"))),
        }
    }
    Ok(out)
}

/// A nonzero prime ideal of O̅, given by two generators (p, g(θ)).
#[derive(Clone)]
pub struct PrimeIdeal {
    pub p: u64,
    pub generator: FieldElement,
    pub residue_degree: u32,
    pub ramification: u32,
    pub lattice: ZLattice,
}

impl PrimeIdeal {
    pub fn norm(&self) -> BigInt {
        num_traits::pow(BigInt::from(self.p), self.residue_degree as usize)
    }

    /// True when the ideal is generated by p alone (p inert).
    pub fn is_inert(&self) -> bool {
        self.generator.as_rational().is_some()
    }
}

impl PartialEq for PrimeIdeal {
    fn eq(&self, other: &Self) -> bool {
        self.lattice == other.lattice
    }
}
impl Eq for PrimeIdeal {}

impl fmt::Display for PrimeIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_inert() {
            write!(f, "({})", self.p)
        } else {
            write!(f, "({}, {})", self.p, self.generator)
        }
    }
}

impl fmt::Debug for PrimeIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Lattice of the O̅-ideal generated by `gens`.
pub fn ideal_lattice(field: &Field, gens: &[FieldElement]) -> Result<ZLattice> {
    let mut all = Vec::with_capacity(gens.len() * field.degree());
    for g in gens {
        field.check_dim(g)?;
        for b in field.maximal_basis() {
            all.push(field.mul(g, b));
        }
    }
    ZLattice::from_generators(&all)
}

/// Primes of O̅ above p, by factoring the minimal polynomial mod p.
pub fn split_prime(field: &Arc<Field>, p: u64) -> Result<Vec<PrimeIdeal>> {
    if p < 2 || (2..).take_while(|d: &u64| d * d <= p).any(|d| p % d == 0) {
        return Err(Error::input(format!("{p} is not prime")));
    }
    if (field.power_basis_index() % BigInt::from(p)).is_zero() {
        return Err(Error::Unsupported(format!("p divides index: {p} | [O̅ : Z[θ]]")));
    }
    let n = field.degree();
    let coeffs: Vec<i64> = field
        .min_poly()
        .iter()
        .map(|c| (c % BigInt::from(p)).to_i64().expect("reduced coefficient fits"))
        .collect();
    let fbar = fpoly::from_ints(&coeffs, p);
    let mut out = Vec::new();
    let mut total = 0u32;
    for (g, e) in fpoly::factor(&fbar, p) {
        let deg = (g.len() - 1) as u32;
        let mut gen = field.zero();
        for (i, &c) in g.iter().enumerate() {
            if i < n {
                gen.coords[i] = BigInt::from(c).into();
            }
        }
        if g.len() - 1 == n {
            // g = f mod p, so g(θ) ∈ pO̅ and the prime is (p)
            gen = field.int(p as i64);
        }
        let lattice = ideal_lattice(field, &[field.int(p as i64), gen.clone()])?;
        let prime = PrimeIdeal { p, generator: gen, residue_degree: deg, ramification: e, lattice };
        let index = field.maximal_lattice().index(&prime.lattice)?;
        if index != prime.norm() {
            return Err(Error::invariant(format!("prime {prime} has norm {index}, expected {}", prime.norm())));
        }
        total += deg * e;
        out.push(prime);
    }
    if total as usize != n {
        return Err(Error::invariant(format!("Σ e·f = {total} ≠ {n} above {p}")));
    }
    Ok(out)
}

/// An ideal of the maximal order. The lattice is authoritative; the prime
/// factorization is derived on first use and cached.
#[derive(Clone)]
pub struct OIdeal {
    field: Arc<Field>,
    lattice: ZLattice,
    factors: Arc<OnceLock<Vec<(PrimeIdeal, u32)>>>,
}

impl PartialEq for OIdeal {
    fn eq(&self, other: &Self) -> bool {
        self.lattice == other.lattice
    }
}
impl Eq for OIdeal {}

impl fmt::Debug for OIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "OIdeal({})", self.lattice.dump().trim_end().replace('\n', "; "))
    }
}

impl fmt::Display for OIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.factorization() {
            Ok(fac) if fac.is_empty() => f.write_str("(1)"),
            Ok(fac) => {
                let parts: Vec<String> = fac
                    .iter()
                    .map(|(p, e)| if *e == 1 { p.to_string() } else { format!("{p}^{e}") })
                    .collect();
                f.write_str(&parts.join("·"))
            }
            Err(_) => write!(f, "{:?}", self),
        }
    }
}

impl OIdeal {
    /// Validates that `lattice` is a nonzero integral O̅-ideal.
    pub fn new(field: &Arc<Field>, lattice: ZLattice) -> Result<Self> {
        if lattice.dim() != field.degree() {
            return Err(Error::input("lattice dimension does not match the field"));
        }
        if !lattice.is_subset_of(field.maximal_lattice()) {
            return Err(Error::input("ideal lattice is not contained in the maximal order"));
        }
        for b in lattice.basis() {
            for o in field.maximal_basis() {
                if !lattice.contains(&field.mul(&b, o)) {
                    return Err(Error::input("lattice is not stable under the maximal order"));
                }
            }
        }
        Ok(Self::from_trusted(field, lattice))
    }

    fn from_trusted(field: &Arc<Field>, lattice: ZLattice) -> Self {
        OIdeal { field: field.clone(), lattice, factors: Arc::new(OnceLock::new()) }
    }

    pub fn from_generators(field: &Arc<Field>, gens: &[FieldElement]) -> Result<Self> {
        for g in gens {
            if !field.is_integral(g) {
                return Err(Error::input(format!("generator {g} is not integral")));
            }
        }
        let lat = ideal_lattice(field, gens).map_err(|_| Error::input("ideal generators are all zero"))?;
        Ok(Self::from_trusted(field, lat))
    }

    pub fn principal(field: &Arc<Field>, x: &FieldElement) -> Result<Self> {
        if x.is_zero() {
            return Err(Error::Domain("zero ideal".into()));
        }
        Self::from_generators(field, std::slice::from_ref(x))
    }

    pub fn unit(field: &Arc<Field>) -> Self {
        Self::from_trusted(field, field.maximal_lattice().clone())
    }

    pub fn from_prime(field: &Arc<Field>, p: &PrimeIdeal) -> Self {
        let id = Self::from_trusted(field, p.lattice.clone());
        let _ = id.factors.set(vec![(p.clone(), 1)]);
        id
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn lattice(&self) -> &ZLattice {
        &self.lattice
    }

    pub fn norm(&self) -> BigInt {
        self.field.maximal_lattice().index(&self.lattice).expect("ideal lies in O̅")
    }

    pub fn is_unit_ideal(&self) -> bool {
        &self.lattice == self.field.maximal_lattice()
    }

    pub fn contains(&self, x: &FieldElement) -> bool {
        self.lattice.contains(x)
    }

    pub fn mul(&self, other: &OIdeal) -> OIdeal {
        Self::from_trusted(&self.field, self.lattice.product(&other.lattice, &self.field))
    }

    pub fn sum(&self, other: &OIdeal) -> OIdeal {
        Self::from_trusted(&self.field, self.lattice.sum(&other.lattice))
    }

    pub fn intersect(&self, other: &OIdeal) -> OIdeal {
        Self::from_trusted(&self.field, self.lattice.intersect(&other.lattice))
    }

    pub fn pow(&self, e: u32) -> OIdeal {
        let mut acc = OIdeal::unit(&self.field);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// `self | other`, i.e. other ⊆ self.
    pub fn divides(&self, other: &OIdeal) -> bool {
        other.lattice.is_subset_of(&self.lattice)
    }

    pub fn is_coprime(&self, other: &OIdeal) -> bool {
        self.sum(other).is_unit_ideal()
    }

    /// Prime factorization, sorted by (p, residue degree, lattice).
    pub fn factorization(&self) -> Result<&[(PrimeIdeal, u32)]> {
        if let Some(f) = self.factors.get() {
            return Ok(f);
        }
        let computed = self.compute_factorization()?;
        // a concurrent caller may have filled the cache first; the result is
        // the same either way
        let _ = self.factors.set(computed);
        Ok(self.factors.get().expect("just set"))
    }

    fn compute_factorization(&self) -> Result<Vec<(PrimeIdeal, u32)>> {
        let norm = self.norm();
        let mut out = Vec::new();
        if norm.is_one() {
            return Ok(out);
        }
        for (p, ep) in factor_integer(&norm)? {
            for prime in split_prime(&self.field, p)? {
                let bound = ep / prime.residue_degree;
                let mut v = 0;
                let mut power = prime.lattice.clone();
                while v < bound && self.lattice.is_subset_of(&power) {
                    v += 1;
                    power = power.product(&prime.lattice, &self.field);
                }
                if v > 0 {
                    out.push((prime, v));
                }
            }
        }
        let mut rebuilt = OIdeal::unit(&self.field);
        for (p, e) in &out {
            rebuilt = rebuilt.mul(&OIdeal::from_prime(&self.field, p).pow(*e));
        }
        if rebuilt.lattice != self.lattice {
            return Err(Error::invariant("prime factorization does not reproduce the ideal"));
        }
        Ok(out)
    }

    pub fn is_radical(&self) -> Result<bool> {
        Ok(self.factorization()?.iter().all(|(_, e)| *e == 1))
    }

    /// I·J^{-1} for J = self dividing I, computed as the colon (I : J).
    pub fn inverse_within(&self, i: &OIdeal) -> Result<OIdeal> {
        if !self.divides(i) {
            return Err(Error::pre("ideal does not divide the target"));
        }
        let q = i.lattice.colon(&self.lattice, &self.field);
        let out = Self::from_trusted(&self.field, q);
        if out.mul(self) != *i {
            return Err(Error::invariant("colon ideal does not multiply back"));
        }
        Ok(out)
    }

    /// All divisors of the ideal, from its factorization, in exponent-vector
    /// lexicographic order.
    pub fn divisors(&self) -> Result<Vec<OIdeal>> {
        let fac = self.factorization()?.to_vec();
        let mut out = vec![OIdeal::unit(&self.field)];
        for (p, e) in &fac {
            let pid = OIdeal::from_prime(&self.field, p);
            let mut next = Vec::new();
            for d in &out {
                let mut cur = d.clone();
                next.push(cur.clone());
                for _ in 0..*e {
                    cur = cur.mul(&pid);
                    next.push(cur.clone());
                }
            }
            out = next;
        }
        Ok(out)
    }
}

pub fn ideal_mul(a: &OIdeal, b: &OIdeal) -> OIdeal {
    a.mul(b)
}

pub fn ideal_sum(a: &OIdeal, b: &OIdeal) -> OIdeal {
    a.sum(b)
}

pub fn ideal_intersect(a: &OIdeal, b: &OIdeal) -> OIdeal {
    a.intersect(b)
}

/// I·J^{-1} for J | I.
pub fn ideal_inverse_within(j: &OIdeal, i: &OIdeal) -> Result<OIdeal> {
    j.inverse_within(i)
}

pub fn is_radical(j: &OIdeal) -> Result<bool> {
    j.is_radical()
}

pub fn is_coprime(a: &OIdeal, b: &OIdeal) -> bool {
    a.is_coprime(b)
}

pub fn factor_ideal(j: &OIdeal) -> Result<Vec<(PrimeIdeal, u32)>> {
    Ok(j.factorization()?.to_vec())
}

/// |U(O̅/J)| = Π N(P)^(e-1)·(N(P)-1) over the factorization of J.
pub fn unit_group_order_of_quotient(j: &OIdeal) -> Result<BigInt> {
    let mut acc = BigInt::one();
    for (p, e) in j.factorization()? {
        let q = p.norm();
        acc *= num_traits::pow(q.clone(), (*e - 1) as usize) * (&q - 1u32);
    }
    Ok(acc)
}
