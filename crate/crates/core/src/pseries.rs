//! Truncated power series over orders, and the certificates built on them:
//! unit splitting, association obstructions, degree-1 irreducibility and
//! HFD-violation witnesses.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::factor::Factorizer;
use crate::field::{Field, FieldElement};
use crate::ideal::OIdeal;
use crate::lattice::ZLattice;
use crate::order::OrderRing;
use crate::props::is_associated;
use crate::quotient::FiniteQuotient;
use crate::units::{coset_reps, unit_index_data};

/// Default truncation degree.
pub const DEFAULT_TRUNC: usize = 4;

/// Node limit for the association search.
pub const ASSOCIATION_NODE_GUARD: usize = 10_000;

/// c_0 + c_1 x + … + c_d x^d, standing for a power series modulo x^(d+1).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncSeries {
    coeffs: Vec<FieldElement>,
}

impl TruncSeries {
    pub fn new(coeffs: Vec<FieldElement>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::input("a truncated series needs at least one coefficient"));
        }
        let n = coeffs[0].dim();
        if coeffs.iter().any(|c| c.dim() != n) {
            return Err(Error::input("coefficients of different dimensions"));
        }
        Ok(TruncSeries { coeffs })
    }

    /// x padded with zeros up to degree d.
    pub fn constant(x: &FieldElement, d: usize) -> Self {
        let mut coeffs = vec![x.clone()];
        coeffs.extend((0..d).map(|_| FieldElement::int(x.dim(), 0)));
        TruncSeries { coeffs }
    }

    /// Pads with zeros or cuts to degree d.
    pub fn with_degree(&self, d: usize) -> Self {
        let n = self.coeffs[0].dim();
        let mut coeffs: Vec<FieldElement> = self.coeffs.iter().take(d + 1).cloned().collect();
        while coeffs.len() < d + 1 {
            coeffs.push(FieldElement::int(n, 0));
        }
        TruncSeries { coeffs }
    }

    pub fn trunc_degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &FieldElement {
        &self.coeffs[k]
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(|c| c.to_string()).collect()
    }

    /// Every coefficient lies in the lattice.
    pub fn in_lattice(&self, l: &ZLattice) -> bool {
        self.coeffs.iter().all(|c| l.contains(c))
    }
}

impl fmt::Display for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| match k {
                0 => format!("({c})"),
                1 => format!("({c})x"),
                _ => format!("({c})x^{k}"),
            })
            .collect();
        write!(f, "{} + O(x^{})", parts.join(" + "), self.coeffs.len())
    }
}

/// Product truncated to the smaller of the two degrees.
pub fn ts_mul(field: &Field, a: &TruncSeries, b: &TruncSeries) -> TruncSeries {
    let d = a.trunc_degree().min(b.trunc_degree());
    let coeffs = (0..=d)
        .map(|k| {
            let mut acc = field.zero();
            for i in 0..=k {
                acc = acc.add(&field.mul(&a.coeffs[i], &b.coeffs[k - i]));
            }
            acc
        })
        .collect();
    TruncSeries { coeffs }
}

pub fn ts_add(a: &TruncSeries, b: &TruncSeries) -> TruncSeries {
    let d = a.trunc_degree().min(b.trunc_degree());
    TruncSeries { coeffs: (0..=d).map(|k| a.coeffs[k].add(&b.coeffs[k])).collect() }
}

/// a⁻¹ modulo x^(d+1), for a with constant term a unit of `order`.
pub fn ts_unit_inverse(field: &Field, a: &TruncSeries, order: &OrderRing) -> Result<TruncSeries> {
    let a0 = &a.coeffs[0];
    if !order.is_unit(a0) {
        return Err(Error::Domain(format!("non-unit constant term {a0}")));
    }
    let inv0 = field.inverse(a0)?;
    let mut out = vec![inv0.clone()];
    for k in 1..=a.trunc_degree() {
        let mut acc = field.zero();
        for i in 1..=k {
            acc = acc.add(&field.mul(&a.coeffs[i], &out[k - i]));
        }
        out.push(field.mul(&acc, &inv0).neg());
    }
    Ok(TruncSeries { coeffs: out })
}

fn check_over(field: &Field, s: &TruncSeries, l: &ZLattice, what: &str) -> Result<()> {
    field.check_dim(&s.coeffs[0])?;
    for (k, c) in s.coeffs.iter().enumerate() {
        if !l.contains(c) {
            return Err(Error::pre(format!("{what}: coefficient {k} ({c}) is outside the required ring")));
        }
    }
    Ok(())
}

/// Result of splitting a unit u of O̅[[x]] as v₁·v₂ with v_i a unit of
/// (R + J_i)[[x]].
#[derive(Clone, Debug)]
pub struct UnitSplit {
    pub v1: TruncSeries,
    pub v2: TruncSeries,
    pub order1: OrderRing,
    pub order2: OrderRing,
}

/// Splits u = v₁v₂ modulo x^(d+1) for coprime J₁, J₂ with J₁J₂ the
/// conductor of R. The constant term is split by a search over ζ^a·ε^b
/// with a < w and b below the exponent of ε generating U(R) modulo
/// torsion; each higher coefficient solves c_k u₂ + d_k u₁ = rhs_k with
/// c_k ∈ J₁, d_k ∈ J₂ by writing rhs_k ∈ J₁ + J₂ = O̅ as a sum.
pub fn unit_split_trunc(u: &TruncSeries, j1: &OIdeal, j2: &OIdeal, r: &OrderRing, d: usize) -> Result<UnitSplit> {
    let f = r.field();
    let u = u.with_degree(d);
    check_over(f, &u, f.maximal_lattice(), "series over the maximal order")?;
    if !f.is_maximal_unit(&u.coeffs[0]) {
        return Err(Error::Domain(format!("non-unit constant term {}", u.coeffs[0])));
    }
    if !j1.is_coprime(j2) {
        return Err(Error::pre("J₁ and J₂ are not coprime"));
    }
    if &j1.mul(j2) != r.conductor() {
        return Err(Error::pre("J₁·J₂ is not the conductor of R"));
    }
    let r1 = OrderRing::new(f, r.lattice().sum(j1.lattice()))?;
    let r2 = OrderRing::new(f, r.lattice().sum(j2.lattice()))?;

    let data = unit_index_data(r)?;
    let zeta = f.torsion_generator();
    let eps = f.fundamental_units().first().cloned().unwrap_or_else(|| f.one());
    let u0 = &u.coeffs[0];
    let mut split = None;
    'search: for b in 0..data.power.max(1) {
        let eb = f.pow(&eps, b);
        for a in 0..f.torsion_order() {
            let v1 = f.mul(&f.pow(zeta, a), &eb);
            if !r1.contains(&v1) {
                continue;
            }
            let v2 = f.div(u0, &v1)?;
            if r2.contains(&v2) {
                split = Some((v1, v2));
                break 'search;
            }
        }
    }
    let Some((u1, u2)) = split else {
        if is_associated(r)?.holds {
            return Err(Error::invariant("no split of the constant term found for an associated order"));
        }
        return Err(Error::pre("no split of the constant term found; R is not associated"));
    };
    let u1_inv = f.inverse(&u1)?;
    let u2_inv = f.inverse(&u2)?;
    let mut c = vec![u1];
    let mut dd = vec![u2];
    for k in 1..=d {
        let mut rhs = u.coeffs[k].clone();
        for i in 1..k {
            rhs = rhs.sub(&f.mul(&c[i], &dd[k - i]));
        }
        let (e1, e2) = j1
            .lattice()
            .decompose_sum(j2.lattice(), &rhs)
            .ok_or_else(|| Error::invariant("J₁ + J₂ does not contain a coefficient of u"))?;
        c.push(f.mul(&e1, &u2_inv));
        dd.push(f.mul(&e2, &u1_inv));
    }
    let v1 = TruncSeries { coeffs: c };
    let v2 = TruncSeries { coeffs: dd };
    let ok = ts_mul(f, &v1, &v2) == u
        && v1.in_lattice(r1.lattice())
        && v2.in_lattice(r2.lattice())
        && r1.is_unit(&v1.coeffs[0])
        && r2.is_unit(&v2.coeffs[0]);
    if !ok {
        return Err(Error::invariant("unit split failed its own verification"));
    }
    Ok(UnitSplit { v1, v2, order1: r1, order2: r2 })
}

/// Why one constant-term choice u₀ cannot be completed.
#[derive(Clone, Debug)]
pub struct BranchFailure {
    pub rep_index: usize,
    pub rep: FieldElement,
    /// 0 when g₀u₀ ∉ R; k ≥ 1 when the conditions on coefficients 1..k have
    /// no common solution b₁, …, b_k ∈ O̅.
    pub level: usize,
    /// The element (level 0) or vector (level ≥ 1) that fails membership.
    pub target: Vec<FieldElement>,
    pub lattice: ZLattice,
    pub failure: String,
}

/// Proof that g ∉ R[[x]]·U(O̅[[x]]) already modulo x^(level+1).
#[derive(Clone, Debug)]
pub struct ObstructionCertificate {
    pub target: TruncSeries,
    pub order: OrderRing,
    pub level: usize,
    pub branch_log: Vec<BranchFailure>,
}

#[derive(Clone, Debug)]
pub enum Association {
    /// g ≡ r·u⁻¹… precisely g·u ≡ r with r over R and u₀ ∈ U(O̅).
    Witness { r: TruncSeries, u: TruncSeries },
    Certificate(ObstructionCertificate),
}

/// Vectors of K^k as elements of a lattice of rank n·k: coefficient blocks
/// laid side by side.
fn stack(parts: &[FieldElement]) -> FieldElement {
    FieldElement { coords: parts.iter().flat_map(|p| p.coords.iter().cloned()).collect() }
}

fn unstack(v: &FieldElement, n: usize) -> Vec<FieldElement> {
    v.coords.chunks(n).map(|c| FieldElement { coords: c.to_vec() }).collect()
}

/// The lattice Φ(O̅^k) + R^k of K^k, where Φ(b)_j = Σ_{i=1}^{j} g_{j−i} b_i;
/// returned with the Φ part alone.
fn association_lattices(f: &Field, g: &TruncSeries, r: &OrderRing, k: usize) -> Result<(ZLattice, ZLattice)> {
    let n = f.degree();
    let zero = f.zero();
    let mut phi = Vec::new();
    for i in 1..=k {
        for e in f.maximal_basis() {
            let parts: Vec<FieldElement> =
                (1..=k).map(|j| if j >= i { f.mul(&g.coeffs[j - i], e) } else { zero.clone() }).collect();
            phi.push(stack(&parts));
        }
    }
    let mut rk = Vec::new();
    for i in 0..k {
        for b in r.basis() {
            let parts: Vec<FieldElement> = (0..k).map(|j| if j == i { b.clone() } else { zero.clone() }).collect();
            rk.push(stack(&parts));
        }
    }
    let phi_lat = ZLattice::from_generators(&phi)?;
    let rk_lat = ZLattice::from_generators(&rk)?;
    debug_assert_eq!(phi_lat.dim(), n * k);
    Ok((phi_lat, rk_lat))
}

/// Searches u ∈ U(O̅[[x]]) with g·u ∈ R[[x]] modulo x^(d+1).
///
/// u₀ runs over representatives of U(O̅)/U(R) (multiplying u by a unit of
/// R changes nothing) and must satisfy g₀u₀ ∈ R. For each surviving u₀ the
/// conditions on coefficients 1..k are linear in b₁, …, b_k: they ask that
/// −(g_j u₀)_j lie in Φ(O̅^k) + R^k. Each k = 1..d is tested in turn, so a
/// failing branch records the first degree at which it dies.
pub fn association_obstruction(g: &TruncSeries, r: &OrderRing, d: usize) -> Result<Association> {
    let f = r.field();
    let g = g.with_degree(d);
    check_over(f, &g, f.maximal_lattice(), "series over the maximal order")?;
    let g0 = &g.coeffs[0];
    if g0.is_zero() {
        return Err(Error::input("zero constant term"));
    }
    let n = f.degree();
    let reps = coset_reps(r)?.reps;
    if reps.len() > ASSOCIATION_NODE_GUARD {
        return Err(Error::Inconclusive(format!(
            "association search would need {} constant-term branches (guard {ASSOCIATION_NODE_GUARD})",
            reps.len()
        )));
    }
    let systems: Vec<(ZLattice, ZLattice, ZLattice)> = (1..=d)
        .map(|k| {
            let (phi, rk) = association_lattices(f, &g, r, k)?;
            Ok((phi.sum(&rk), phi, rk))
        })
        .collect::<Result<_>>()?;
    let mut log = Vec::new();
    'reps: for (idx, u0) in reps.iter().enumerate() {
        let c0 = f.mul(g0, u0);
        if let Some(why) = r.lattice().membership_failure(&c0) {
            log.push(BranchFailure {
                rep_index: idx,
                rep: u0.clone(),
                level: 0,
                target: vec![c0],
                lattice: r.lattice().clone(),
                failure: why,
            });
            continue;
        }
        for k in 1..=d {
            let (w, phi, rk) = &systems[k - 1];
            let c: Vec<FieldElement> = (1..=k).map(|j| f.mul(&g.coeffs[j], u0).neg()).collect();
            let target = stack(&c);
            if let Some(why) = w.membership_failure(&target) {
                log.push(BranchFailure {
                    rep_index: idx,
                    rep: u0.clone(),
                    level: k,
                    target: c.into_iter().map(|x| x.neg()).collect(),
                    lattice: w.clone(),
                    failure: why,
                });
                continue 'reps;
            }
            if k == d {
                let (a, _) = phi.decompose_sum(rk, &target).ok_or_else(|| Error::invariant("membership without decomposition"))?;
                let a = unstack(&a, n);
                let inv = f.inverse(g0)?;
                let mut b = vec![u0.clone()];
                for j in 1..=d {
                    let mut acc = a[j - 1].clone();
                    for i in 1..j {
                        acc = acc.sub(&f.mul(&g.coeffs[j - i], &b[i]));
                    }
                    b.push(f.mul(&acc, &inv));
                }
                let u = TruncSeries { coeffs: b };
                let prod = ts_mul(f, &g, &u);
                if !u.in_lattice(f.maximal_lattice()) || !prod.in_lattice(r.lattice()) || !f.is_maximal_unit(u0) {
                    return Err(Error::invariant("association witness failed re-verification"));
                }
                return Ok(Association::Witness { r: prod, u });
            }
        }
        if d == 0 {
            let u = TruncSeries { coeffs: vec![u0.clone()] };
            return Ok(Association::Witness { r: ts_mul(f, &g, &u), u });
        }
    }
    let level = log.iter().map(|b| b.level).max().unwrap_or(0);
    Ok(Association::Certificate(ObstructionCertificate { target: g, order: r.clone(), level, branch_log: log }))
}

/// One constant-term factorization f₀ = g₀h₀ into nonunits of R and the
/// membership test f₁ ∈ g₀R + h₀R.
#[derive(Clone, Debug)]
pub struct Deg1Branch {
    pub g0: FieldElement,
    pub h0: FieldElement,
    pub lattice: ZLattice,
    pub holds: bool,
    pub failure: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Deg1Verdict {
    /// Every branch fails: f is irreducible in R[[x]].
    Irreducible,
    /// Some branch survives the degree-1 test; nothing is proved.
    Inconclusive,
}

#[derive(Clone, Debug)]
pub struct Deg1Certificate {
    pub verdict: Deg1Verdict,
    pub branches: Vec<Deg1Branch>,
}

/// Degree-1 test for irreducibility in R[[x]]: if f = gh with g, h
/// nonunits then g₀h₀ = f₀ with g₀, h₀ nonunits of R, and f₁ = g₀h₁ + h₀g₁
/// lies in g₀R + h₀R. Splits are taken up to units of R and unordered.
pub fn irreducibility_cert_deg1(fs: &TruncSeries, r: &OrderRing) -> Result<Deg1Certificate> {
    let f = r.field();
    if fs.trunc_degree() < 1 {
        return Err(Error::input("series needs a linear coefficient"));
    }
    let fs = fs.with_degree(1);
    check_over(f, &fs, r.lattice(), "series over the order")?;
    let f0 = &fs.coeffs[0];
    let f1 = &fs.coeffs[1];
    if f0.is_zero() {
        return Err(Error::input("zero constant term"));
    }
    if r.is_unit(f0) {
        return Err(Error::pre("unit constant term"));
    }
    let fz = Factorizer::new(r)?;
    let mut seen = std::collections::HashSet::new();
    let mut branches = Vec::new();
    for (g0, h0) in fz.divisors(f0)? {
        if f.norm(&g0).abs().is_one() || f.norm(&h0).abs().is_one() {
            continue;
        }
        let kg = r.principal_lattice(&g0);
        let kh = r.principal_lattice(&h0);
        let key = if kg <= kh { (kg.clone(), kh.clone()) } else { (kh.clone(), kg.clone()) };
        if !seen.insert(key) {
            continue;
        }
        let s = kg.sum(&kh);
        let failure = s.membership_failure(f1);
        branches.push(Deg1Branch { g0, h0, lattice: s, holds: failure.is_none(), failure });
    }
    let verdict = if branches.iter().any(|b| b.holds) { Deg1Verdict::Inconclusive } else { Deg1Verdict::Irreducible };
    Ok(Deg1Certificate { verdict, branches })
}

/// Data showing R[[x]] is not half-factorial: f^(mk) = g^(mk)·(a+bx)^(mk)
/// with the right side a product of at least mk + 1 irreducibles.
#[derive(Clone, Debug)]
pub struct HfdWitness {
    pub m: u64,
    pub k: u64,
    /// Coefficients of (a + bx)^(mk), all in R.
    pub power: Vec<FieldElement>,
    pub coefficients_in_order: usize,
    pub binomial_identity: bool,
    pub lhs_irreducibles: u64,
    pub rhs_at_least: u64,
}

/// Builds the witness for f = g·(a + bx) with a ∈ J and I | J²: m is the
/// least positive integer with m·a ∈ I, k the least exponent with b^k ∈ R.
pub fn hfd_violation_witness(
    fs: &TruncSeries,
    gs: &TruncSeries,
    a: &FieldElement,
    b: &FieldElement,
    j: &OIdeal,
    r: &OrderRing,
) -> Result<HfdWitness> {
    let f = r.field();
    let i = r.conductor();
    let d = fs.trunc_degree();
    let lin = TruncSeries { coeffs: vec![a.clone(), b.clone()] }.with_degree(d);
    if ts_mul(f, &gs.with_degree(d), &lin) != *fs {
        return Err(Error::pre("f ≢ g·(a + bx) at the working truncation"));
    }
    if !j.contains(a) {
        return Err(Error::pre(format!("{a} is not in J")));
    }
    if !j.mul(j).lattice().is_subset_of(i.lattice()) {
        return Err(Error::pre("I does not divide J²"));
    }
    check_over(f, gs, r.lattice(), "g over the order")?;
    if r.is_unit(&gs.coeffs[0]) {
        return Err(Error::pre("g has a unit constant term"));
    }
    if !f.is_integral(b) {
        return Err(Error::pre(format!("{b} is not in the maximal order")));
    }

    let m_ceiling = i.lattice().min_positive_integer().to_u64().ok_or_else(|| Error::Unsupported("conductor too large".into()))?;
    let m = (1..=m_ceiling)
        .find(|&m| i.contains(&a.scale_int(&BigInt::from(m))))
        .ok_or_else(|| Error::invariant("no multiple of a lies in I"))?;

    let q = FiniteQuotient::maximal_mod(f, i)?;
    let sub = q.subgroup(r.lattice())?;
    let k_ceiling = q.size().to_u64().ok_or_else(|| Error::Unsupported("|O̅/I| too large".into()))?;
    let rb = q.residue(b)?;
    let mut cur = rb.clone();
    let mut k = None;
    for e in 1..=k_ceiling {
        if sub.contains(&cur) {
            k = Some(e);
            break;
        }
        cur = q.mul(&cur, &rb);
    }
    let k = k.ok_or_else(|| Error::Precondition(format!("k-search ceiling {k_ceiling} exceeded: no power of {b} lies in R")))?;
    if !r.contains(&f.pow(b, k)) {
        return Err(Error::invariant("residue test and exact membership disagree on b^k"));
    }

    let e = m * k;
    let base = TruncSeries { coeffs: vec![a.clone(), b.clone()] }.with_degree(e as usize);
    let mut power = TruncSeries::constant(&f.one(), e as usize);
    for _ in 0..e {
        power = ts_mul(f, &power, &base);
    }
    let mut binom = BigInt::one();
    let mut binomial_identity = true;
    for t in 0..=e {
        let term = f.mul(&f.pow(a, e - t), &f.pow(b, t)).scale_int(&binom);
        binomial_identity &= term == power.coeffs[t as usize];
        binom = binom * BigInt::from(e - t) / BigInt::from(t + 1);
    }
    let inside = power.coeffs.iter().filter(|c| r.contains(c)).count();
    Ok(HfdWitness {
        m,
        k,
        power: power.coeffs,
        coefficients_in_order: inside,
        binomial_identity,
        lhs_irreducibles: e,
        rhs_at_least: e + 1,
    })
}

impl HfdWitness {
    pub fn holds(&self) -> bool {
        self.binomial_identity && self.coefficients_in_order == self.power.len()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "m": self.m,
            "k": self.k,
            "exponent": self.m * self.k,
            "coefficients": self.power.len(),
            "coefficients_in_order": self.coefficients_in_order,
            "binomial_identity": self.binomial_identity,
            "lhs_irreducibles": self.lhs_irreducibles,
            "rhs_at_least": self.rhs_at_least,
            "verified": self.holds(),
        })
    }
}

impl Association {
    pub fn to_json(&self) -> Value {
        match self {
            Association::Witness { r, u } => json!({
                "result": "witness",
                "r": r.to_strings(),
                "u": u.to_strings(),
            }),
            Association::Certificate(c) => json!({
                "result": "certificate",
                "target": c.target.to_strings(),
                "level": c.level,
                "branches": c.branch_log.iter().map(|b| json!({
                    "rep_index": b.rep_index,
                    "rep": b.rep.to_string(),
                    "level": b.level,
                    "target": b.target.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                    "lattice_den": b.lattice.den.to_string(),
                    "lattice_hnf": b.lattice.rows_strings(),
                    "failure": b.failure,
                })).collect::<Vec<_>>(),
            }),
        }
    }
}

impl Deg1Certificate {
    pub fn to_json(&self) -> Value {
        json!({
            "verdict": match self.verdict {
                Deg1Verdict::Irreducible => "irreducible",
                Deg1Verdict::Inconclusive => "inconclusive",
            },
            "branches": self.branches.iter().map(|b| json!({
                "g0": b.g0.to_string(),
                "h0": b.h0.to_string(),
                "lattice_den": b.lattice.den.to_string(),
                "lattice_hnf": b.lattice.rows_strings(),
                "f1_in_lattice": b.holds,
                "failure": b.failure,
            })).collect::<Vec<_>>(),
        })
    }
}

/// Rational helper for tests and callers building series from integers.
pub fn series_from_ints(field: &Field, rows: &[&[i64]]) -> Result<TruncSeries> {
    let coeffs = rows
        .iter()
        .map(|c| {
            if c.len() != field.degree() {
                return Err(Error::input("coefficient of the wrong length"));
            }
            Ok(FieldElement { coords: c.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect() })
        })
        .collect::<Result<_>>()?;
    TruncSeries::new(coeffs)
}
