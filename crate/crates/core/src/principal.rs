//! Principality of O̅-ideals.
//!
//! Generators are searched in a coefficient box over the basis of O̅,
//! indexed by |norm|. A failed search proves non-principality only when
//! the box provably contains every element of that norm (imaginary
//! quadratic fields) or when the class of the ideal is pinned down by a
//! certified generator of a cyclic class group.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};
use crate::ideal::{split_prime, OIdeal, PrimeIdeal};
use crate::lattice::ZLattice;
use crate::quotient::FiniteQuotient;

/// Norms up to this bound are served from the precomputed table.
const TABLE_NORM_LIMIT: u64 = 200_000;

/// Default box height: about 4·10^6 points, except that cubic fields use
/// height 50.
pub fn default_height(n: usize) -> i64 {
    match n {
        2 => 1000,
        3 => 50,
        _ => 22,
    }
}

/// Why an ideal is known to be non-principal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NonPrincipal {
    /// The box contains every element of the ideal's norm and none lies in it.
    Exhaustive { height: i64 },
    /// D·A^j is principal for the certified class-group generator A and
    /// some j ≢ 0 mod h.
    Class { base: String, exponent: u64, class_number: u64 },
}

#[derive(Clone, Debug)]
pub enum Principality {
    Principal(FieldElement),
    NonPrincipal(NonPrincipal),
}

impl Principality {
    pub fn is_principal(&self) -> bool {
        matches!(self, Principality::Principal(_))
    }

    pub fn generator(&self) -> Option<&FieldElement> {
        match self {
            Principality::Principal(g) => Some(g),
            _ => None,
        }
    }
}

/// A prime A whose class generates the (cyclic) class group, with the data
/// proving that its class has order exactly h.
#[derive(Clone, Debug)]
pub struct ClassCertificate {
    pub base: PrimeIdeal,
    pub class_number: u64,
    /// Generator γ of A^h.
    pub power_generator: FieldElement,
    /// For each prime q | h and each unit rep u of U/U^q: an auxiliary
    /// prime Q with (uγ)^((N(Q)-1)/q) ≢ 1 mod Q, so uγ is not a q-th power.
    pub residue_witnesses: Vec<(u64, FieldElement, PrimeIdeal)>,
}

pub struct PrincipalityOracle {
    height: i64,
    table: HashMap<u64, Vec<Vec<i64>>>,
    /// Gram matrix inverse diagonal of the norm form, for positive definite
    /// norm forms (imaginary quadratic fields).
    definite_bounds: Option<Vec<BigRational>>,
    structure: Vec<Vec<Vec<i64>>>,
    cert: OnceLock<std::result::Result<ClassCertificate, String>>,
    memo: Mutex<HashMap<ZLattice, Option<Vec<i64>>>>,
}

impl std::fmt::Debug for PrincipalityOracle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PrincipalityOracle").field("height", &self.height).finish_non_exhaustive()
    }
}

fn det_i128(mut m: Vec<Vec<i128>>) -> i128 {
    let n = m.len();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if m[k][k] == 0 {
            match (k + 1..n).find(|&i| m[i][k] != 0) {
                Some(i) => {
                    m.swap(i, k);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
        }
        prev = m[k][k];
    }
    sign * m[n - 1][n - 1]
}

fn norm_i128(structure: &[Vec<Vec<i64>>], c: &[i64]) -> i128 {
    let n = c.len();
    let mut m = vec![vec![0i128; n]; n];
    for (i, &ci) in c.iter().enumerate() {
        if ci == 0 {
            continue;
        }
        for j in 0..n {
            for k in 0..n {
                m[j][k] += ci as i128 * structure[i][j][k] as i128;
            }
        }
    }
    det_i128(m)
}

/// Mixed-radix walk over the box [-h, h]^n, with the first coordinate fixed.
fn box_slice(n: usize, h: i64, first: i64, mut visit: impl FnMut(&[i64])) {
    let mut c = vec![-h; n];
    c[0] = first;
    loop {
        visit(&c);
        let mut i = n - 1;
        loop {
            if i == 0 {
                return;
            }
            if c[i] < h {
                c[i] += 1;
                break;
            }
            c[i] = -h;
            i -= 1;
        }
    }
}

impl PrincipalityOracle {
    pub fn new(field: &Field, height: i64) -> Self {
        let n = field.degree();
        let structure: Vec<Vec<Vec<i64>>> = field
            .obasis_table()
            .iter()
            .map(|a| a.iter().map(|b| b.iter().map(|x| x.to_i64().expect("small structure constants")).collect()).collect())
            .collect();
        let chunks: Vec<HashMap<u64, Vec<Vec<i64>>>> = (-height..=height)
            .into_par_iter()
            .map(|first| {
                let mut local: HashMap<u64, Vec<Vec<i64>>> = HashMap::new();
                box_slice(n, height, first, |c| {
                    let nm = norm_i128(&structure, c).unsigned_abs();
                    if nm != 0 && nm <= TABLE_NORM_LIMIT as u128 {
                        local.entry(nm as u64).or_default().push(c.to_vec());
                    }
                });
                local
            })
            .collect();
        let mut table: HashMap<u64, Vec<Vec<i64>>> = HashMap::new();
        for chunk in chunks {
            for (k, mut v) in chunk {
                table.entry(k).or_default().append(&mut v);
            }
        }
        let definite_bounds = if n == 2 && field.signature().0 == 0 { Some(norm_form_bounds(field)) } else { None };
        PrincipalityOracle {
            height,
            table,
            definite_bounds,
            structure,
            cert: OnceLock::new(),
            memo: Mutex::new(HashMap::new()),
        }
    }

    pub fn height(&self) -> i64 {
        self.height
    }

    /// True when every element of |norm| = `norm` lies inside the box.
    pub fn box_is_complete(&self, norm: &BigInt) -> bool {
        let Some(bounds) = &self.definite_bounds else { return false };
        let h2 = BigRational::from_integer(BigInt::from(self.height) * self.height);
        bounds.iter().all(|b| b * BigRational::from_integer(norm.clone()) <= h2)
    }

    fn candidates(&self, norm: u64) -> Vec<Vec<i64>> {
        if norm <= TABLE_NORM_LIMIT {
            return self.table.get(&norm).cloned().unwrap_or_default();
        }
        let n = self.structure.len();
        let h = self.height;
        (-h..=h)
            .into_par_iter()
            .map(|first| {
                let mut found = Vec::new();
                box_slice(n, h, first, |c| {
                    if norm_i128(&self.structure, c).unsigned_abs() == norm as u128 {
                        found.push(c.to_vec());
                    }
                });
                found
            })
            .flatten()
            .collect()
    }

    /// A generator of `d` inside the box, if one exists there: the candidate
    /// of smallest coefficient sum |c_i|, ties broken lexicographically.
    pub fn search(&self, field: &Field, d: &ZLattice, norm: &BigInt) -> Result<Option<FieldElement>> {
        if let Some(hit) = self.memo.lock().expect("memo lock").get(d) {
            return Ok(hit.as_ref().map(|c| from_small(field, c)));
        }
        let nm = norm
            .to_u64()
            .ok_or_else(|| Error::Unsupported(format!("ideal norm {norm} too large for generator search")))?;
        let mut cands = self.candidates(nm);
        cands.sort_by_key(|c| (c.iter().map(|x| x.unsigned_abs()).sum::<u64>(), c.clone()));
        let hit = cands.into_iter().find(|c| d.contains(&from_small(field, c)));
        let out = hit.as_ref().map(|c| from_small(field, c));
        self.memo.lock().expect("memo lock").insert(d.clone(), hit);
        Ok(out)
    }
}

fn from_small(field: &Field, c: &[i64]) -> FieldElement {
    let b: Vec<BigInt> = c.iter().map(|&x| BigInt::from(x)).collect();
    field.from_obasis(&b)
}

/// Diagonal of G⁻¹ for the norm form x ↦ N(Σ x_i e_i) = xᵀGx; then
/// x_i² ≤ N·(G⁻¹)_ii for every x of norm N.
fn norm_form_bounds(field: &Field) -> Vec<BigRational> {
    let b = field.maximal_basis();
    let nm = |x: &FieldElement| field.norm(x);
    let g00 = nm(&b[0]);
    let g11 = nm(&b[1]);
    let g01 = (nm(&b[0].add(&b[1])) - &g00 - &g11) / BigRational::from_integer(2.into());
    let det = &g00 * &g11 - &g01 * &g01;
    vec![&g11 / &det, &g00 / &det]
}

fn oracle(field: &Arc<Field>) -> &PrincipalityOracle {
    field.principal_cache.get_or_init(|| PrincipalityOracle::new(field, default_height(field.degree())))
}

/// A generator of `d` from the box search, without any certification.
pub fn find_generator(d: &OIdeal) -> Result<Option<FieldElement>> {
    let f = d.field();
    oracle(f).search(f, d.lattice(), &d.norm())
}

/// Decides principality of `d`, returning a generator or a reason it has
/// none; `Inconclusive` when neither the box nor the class data decide.
pub fn principality(d: &OIdeal) -> Result<Principality> {
    let f = d.field();
    if d.is_unit_ideal() {
        return Ok(Principality::Principal(f.one()));
    }
    let or = oracle(f);
    let norm = d.norm();
    if let Some(g) = or.search(f, d.lattice(), &norm)? {
        return Ok(Principality::Principal(g));
    }
    if or.box_is_complete(&norm) {
        return Ok(Principality::NonPrincipal(NonPrincipal::Exhaustive { height: or.height }));
    }
    let h = f.class_number();
    if h == 1 {
        return Err(Error::Inconclusive(format!(
            "principality inconclusive: no generator of norm {norm} within height {} although the class number is 1",
            or.height
        )));
    }
    let cert = class_certificate(f)?;
    let a = OIdeal::from_prime(f, &cert.base);
    let mut cur = d.clone();
    for j in 1..h {
        cur = cur.mul(&a);
        if or.search(f, cur.lattice(), &cur.norm())?.is_some() {
            return Ok(Principality::NonPrincipal(NonPrincipal::Class {
                base: cert.base.to_string(),
                exponent: j,
                class_number: h,
            }));
        }
    }
    Err(Error::Inconclusive(format!(
        "principality inconclusive: no D·A^j (j < {h}) with a generator within height {}",
        or.height
    )))
}

pub fn is_principal(d: &OIdeal) -> Result<bool> {
    Ok(principality(d)?.is_principal())
}

fn prime_divisors(mut h: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= h {
        if h % p == 0 {
            out.push(p);
            while h % p == 0 {
                h /= p;
            }
        }
        p += 1;
    }
    if h > 1 {
        out.push(h);
    }
    out
}

fn small_primes(limit: u64) -> impl Iterator<Item = u64> {
    (2..limit).filter(|&p| (2..).take_while(|d: &u64| d * d <= p).all(|d| p % d != 0))
}

/// Representatives of U(O̅)/U(O̅)^q (with repetitions).
fn unit_reps_mod_powers(field: &Field, q: u64) -> Vec<FieldElement> {
    let z = field.torsion_generator();
    let mut frees = vec![field.one()];
    for e in field.fundamental_units() {
        let mut next = Vec::new();
        for u in &frees {
            for b in 0..q {
                next.push(field.mul(u, &field.pow(e, b)));
            }
        }
        frees = next;
    }
    let mut out = Vec::new();
    for a in 0..field.torsion_order() {
        for u in &frees {
            out.push(field.mul(&field.pow(z, a), u));
        }
    }
    out
}

/// An auxiliary prime Q with q | N(Q) − 1, Q ∤ x and x not a q-th power mod Q.
fn power_residue_witness(field: &Arc<Field>, x: &FieldElement, q: u64) -> Result<Option<PrimeIdeal>> {
    for l in small_primes(3000) {
        let primes = match split_prime(field, l) {
            Ok(p) => p,
            Err(Error::Unsupported(_)) => continue,
            Err(e) => return Err(e),
        };
        for pq in primes {
            let nq = match pq.norm().to_u64() {
                Some(v) if v < 1 << 31 => v,
                _ => continue,
            };
            if (nq - 1) % q != 0 {
                continue;
            }
            let qt = FiniteQuotient::maximal_mod(field, &OIdeal::from_prime(field, &pq))?;
            let r = qt.residue(x)?;
            if qt.is_zero(&r) {
                continue;
            }
            if &qt.pow(&r, (nq - 1) / q) != qt.one() {
                return Ok(Some(pq));
            }
        }
    }
    Ok(None)
}

fn try_certify(field: &Arc<Field>, base: &PrimeIdeal, h: u64) -> Result<Option<ClassCertificate>> {
    let a = OIdeal::from_prime(field, base);
    let ah = a.pow(h as u32);
    let or = oracle(field);
    let Some(gamma) = or.search(field, ah.lattice(), &ah.norm())? else { return Ok(None) };
    let mut witnesses = Vec::new();
    for q in prime_divisors(h) {
        for u in unit_reps_mod_powers(field, q) {
            let x = field.mul(&u, &gamma);
            match power_residue_witness(field, &x, q)? {
                Some(pq) => witnesses.push((q, u, pq)),
                None => return Ok(None),
            }
        }
    }
    Ok(Some(ClassCertificate { base: base.clone(), class_number: h, power_generator: gamma, residue_witnesses: witnesses }))
}

/// Certifies a prime whose class generates Cl(O̅) (cyclic class groups only).
pub fn class_certificate(field: &Arc<Field>) -> Result<&ClassCertificate> {
    let or = oracle(field);
    let res = or.cert.get_or_init(|| {
        let h = field.class_number();
        if field.class_group().len() > 1 {
            return Err(format!("unsupported: non-cyclic class group {:?}", field.class_group()));
        }
        for p in small_primes(200) {
            let primes = match split_prime(field, p) {
                Ok(v) => v,
                Err(Error::Unsupported(_)) => continue,
                Err(e) => return Err(e.to_string()),
            };
            for base in primes {
                match try_certify(field, &base, h) {
                    Ok(Some(c)) => return Ok(c),
                    Ok(None) => {}
                    Err(e) => return Err(e.to_string()),
                }
            }
        }
        Err(format!("no prime below 200 certified as a class-group generator (h = {h})"))
    });
    match res {
        Ok(c) => Ok(c),
        Err(msg) if msg.starts_with("unsupported") => Err(Error::Unsupported(msg.clone())),
        Err(msg) => Err(Error::Inconclusive(msg.clone())),
    }
}

/// Re-checks a class certificate from scratch.
pub fn verify_class_certificate(field: &Arc<Field>, c: &ClassCertificate) -> Result<bool> {
    let a = OIdeal::from_prime(field, &c.base).pow(c.class_number as u32);
    if a != OIdeal::principal(field, &c.power_generator)? {
        return Ok(false);
    }
    for q in prime_divisors(c.class_number) {
        for u in unit_reps_mod_powers(field, q) {
            let x = field.mul(&u, &c.power_generator);
            let ok = c.residue_witnesses.iter().any(|(qq, uu, pq)| {
                *qq == q && uu == &u && {
                    let nq = pq.norm().to_u64().unwrap_or(0);
                    FiniteQuotient::maximal_mod(field, &OIdeal::from_prime(field, pq))
                        .and_then(|qt| {
                            let r = qt.residue(&x)?;
                            Ok(!qt.is_zero(&r) && (nq - 1) % q == 0 && &qt.pow(&r, (nq - 1) / q) != qt.one())
                        })
                        .unwrap_or(false)
                }
            });
            if !ok {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// |x| for the table key; exposed for tests of the norm kernel.
pub fn small_norm(field: &Field, c: &[i64]) -> BigInt {
    let s: Vec<Vec<Vec<i64>>> = field
        .obasis_table()
        .iter()
        .map(|a| a.iter().map(|b| b.iter().map(|x| x.to_i64().expect("small")).collect()).collect())
        .collect();
    BigInt::from(norm_i128(&s, c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields;

    #[test]
    fn integer_norm_kernel_matches_exact_norm() {
        for f in fields::all() {
            let n = f.degree();
            for seed in 0..40i64 {
                let c: Vec<i64> = (0..n as i64).map(|i| (seed * 7 + i * 13) % 11 - 5).collect();
                let x = from_small(&f, &c);
                let exact = f.norm(&x);
                assert_eq!(BigRational::from_integer(small_norm(&f, &c)), exact);
            }
        }
    }

    #[test]
    fn cubic_class_group_certified() {
        let f = fields::cubic();
        let cert = class_certificate(&f).unwrap();
        assert_eq!(cert.base.p, 2);
        assert!(verify_class_certificate(&f, cert).unwrap());
        let p3 = split_prime(&f, 3).unwrap();
        let a = OIdeal::from_prime(&f, &p3[0]);
        let p = OIdeal::from_prime(&f, &p3[1]);
        assert!(!is_principal(&a).unwrap());
        assert!(!is_principal(&p).unwrap());
        let g = principality(&p.pow(2)).unwrap();
        let g = g.generator().unwrap();
        assert_eq!(OIdeal::principal(&f, g).unwrap(), p.pow(2));
        assert!(is_principal(&a.mul(&p)).unwrap());
    }

    #[test]
    fn imaginary_quadratic_search_is_exhaustive() {
        let f = fields::q_sqrt_minus3();
        let or = oracle(&f);
        assert!(or.box_is_complete(&BigInt::from(1000)));
        for p in [2u64, 3, 5, 7, 13] {
            for pr in split_prime(&f, p).unwrap() {
                assert!(is_principal(&OIdeal::from_prime(&f, &pr)).unwrap());
            }
        }
    }

    #[test]
    fn real_quadratic_primes_are_principal() {
        let f = fields::q_sqrt2();
        for p in [2u64, 3, 5, 7, 17, 23] {
            for pr in split_prime(&f, p).unwrap() {
                let id = OIdeal::from_prime(&f, &pr);
                let g = principality(&id).unwrap();
                assert_eq!(OIdeal::principal(&f, g.generator().unwrap()).unwrap(), id);
            }
        }
    }
}
