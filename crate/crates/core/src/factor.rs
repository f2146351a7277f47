//! Multiplicative arithmetic of orders by exhaustive search: R-divisors of
//! an element, irreducibility, length sets, Davenport constants.

use std::collections::{BTreeMap, HashMap};
use std::sync::Mutex;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::FieldElement;
use crate::ideal::OIdeal;
use crate::lattice::ZLattice;
use crate::order::OrderRing;
use crate::principal::{principality, Principality};
use crate::props::is_associated;
use crate::units::coset_reps;

/// A finite abelian group Z/n_1 ⊕ … ⊕ Z/n_k with n_1 | n_2 | … | n_k.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianGroup {
    cyclic_orders: Vec<u64>,
}

impl AbelianGroup {
    pub fn new(orders: &[u64]) -> Result<Self> {
        let cyclic_orders: Vec<u64> = orders.iter().copied().filter(|&n| n != 1).collect();
        if cyclic_orders.contains(&0) {
            return Err(Error::input("cyclic factor of order 0"));
        }
        if cyclic_orders.windows(2).any(|w| w[1] % w[0] != 0) {
            return Err(Error::input(format!("invariant factors {orders:?} do not form a divisibility chain")));
        }
        Ok(AbelianGroup { cyclic_orders })
    }

    pub fn trivial() -> Self {
        AbelianGroup { cyclic_orders: Vec::new() }
    }

    pub fn cyclic_orders(&self) -> &[u64] {
        &self.cyclic_orders
    }

    pub fn order(&self) -> u64 {
        self.cyclic_orders.iter().product()
    }

    /// Addition table over the mixed-radix indexing of the elements.
    fn add_table(&self) -> Vec<Vec<usize>> {
        let m = self.order() as usize;
        let digits = |mut x: usize| -> Vec<u64> {
            self.cyclic_orders
                .iter()
                .map(|&n| {
                    let d = x as u64 % n;
                    x /= n as usize;
                    d
                })
                .collect()
        };
        let index = |d: &[u64]| -> usize {
            let mut acc = 0usize;
            for (k, &n) in self.cyclic_orders.iter().enumerate().rev() {
                acc = acc * n as usize + d[k] as usize;
            }
            acc
        };
        (0..m)
            .map(|a| {
                let da = digits(a);
                (0..m)
                    .map(|b| {
                        let db = digits(b);
                        let s: Vec<u64> = self.cyclic_orders.iter().enumerate().map(|(k, &n)| (da[k] + db[k]) % n).collect();
                        index(&s)
                    })
                    .collect()
            })
            .collect()
    }
}

/// Limit on distinct search states of the zero-sum-free sequence search.
pub const DAVENPORT_STATE_GUARD: usize = 20_000_000;

/// D(G): one more than the longest sequence over G with no nonempty
/// zero-sum subsequence.
///
/// Depth-first over nondecreasing element indices, tracking the set Σ of
/// subsequence sums as a bitset. The search starts from the length of the
/// explicit sequence e_1^(n_1−1)⋯e_k^(n_k−1), checked zero-sum-free here,
/// and prunes a state when even one new sum per added term cannot beat the
/// best length so far. States (Σ, next index) that failed to improve are
/// remembered.
pub fn davenport(g: &AbelianGroup) -> Result<u64> {
    let m = g.order();
    if m > 64 {
        return Err(Error::Guard { what: "davenport group order".into(), size: m as u128, limit: 64 });
    }
    if m == 1 {
        return Ok(1);
    }
    let add = g.add_table();
    let m = m as usize;
    struct Search {
        m: usize,
        add: Vec<Vec<usize>>,
        best: u64,
        dead: std::collections::HashSet<(u64, u8)>,
    }
    impl Search {
        fn extend(&self, sums: u64, e: usize) -> u64 {
            let mut out = sums | (1 << e);
            let mut s = sums;
            while s != 0 {
                let i = s.trailing_zeros() as usize;
                out |= 1 << self.add[i][e];
                s &= s - 1;
            }
            out
        }

        fn dfs(&mut self, sums: u64, len: u64, start: usize) -> Result<()> {
            if len > self.best {
                self.best = len;
            }
            let room = (self.m as u64 - 1) - sums.count_ones() as u64;
            if len + room <= self.best || self.dead.contains(&(sums, start as u8)) {
                return Ok(());
            }
            if self.dead.len() >= DAVENPORT_STATE_GUARD {
                return Err(Error::Guard {
                    what: "davenport search states".into(),
                    size: self.dead.len() as u128,
                    limit: DAVENPORT_STATE_GUARD as u128,
                });
            }
            let before = self.best;
            for e in start..self.m {
                let next = self.extend(sums, e);
                if next & 1 == 0 {
                    self.dfs(next, len + 1, e)?;
                }
            }
            if self.best == before {
                self.dead.insert((sums, start as u8));
            }
            Ok(())
        }
    }
    let mut st = Search { m, add, best: 0, dead: Default::default() };
    // e_i has mixed-radix index Π_{j<i} n_j
    let mut seed_sums = 0u64;
    let mut seed_len = 0u64;
    let mut unit = 1usize;
    for &n in g.cyclic_orders() {
        for _ in 1..n {
            seed_sums = st.extend(seed_sums, unit);
            seed_len += 1;
        }
        unit *= n as usize;
    }
    if seed_sums & 1 != 0 {
        return Err(Error::invariant("basis sequence has a zero-sum subsequence"));
    }
    st.best = seed_len;
    st.dfs(0, 0, 1)?;
    Ok(st.best + 1)
}

/// ρ(O̅) = D(Cl)/2, or 1 when the class group is trivial.
pub fn elasticity_maximal(class_group: &AbelianGroup) -> Result<BigRational> {
    if class_group.order() == 1 {
        return Ok(BigRational::one());
    }
    Ok(BigRational::new(BigInt::from(davenport(class_group)?), BigInt::from(2)))
}

fn is_unit_norm(f: &crate::field::Field, x: &FieldElement) -> bool {
    f.norm(x).abs().is_one()
}

/// Reusable search state for one order: its unit coset reps and memo tables
/// keyed by the principal lattice αR (one entry per associate class).
pub struct Factorizer {
    order: OrderRing,
    reps: Vec<FieldElement>,
    irreducible: Mutex<HashMap<ZLattice, Option<(FieldElement, FieldElement)>>>,
    lengths: Mutex<HashMap<(ZLattice, u32), LengthMemo>>,
}

#[derive(Clone)]
struct LengthMemo {
    element: FieldElement,
    witnesses: BTreeMap<u32, Vec<FieldElement>>,
    truncated: bool,
}

/// Irreducibility verdict; a reducible element carries a split into two
/// nonunits of R.
#[derive(Clone, Debug)]
pub struct Irreducibility {
    pub irreducible: bool,
    pub witness: Option<(FieldElement, FieldElement)>,
}

/// ℓ_R(α), with one witness factorization per length.
#[derive(Clone, Debug)]
pub struct LengthSet {
    pub element: FieldElement,
    pub lengths: Vec<u32>,
    pub factorizations: Vec<Vec<FieldElement>>,
    /// Set when the depth limit cut off part of the search.
    pub truncated: bool,
}

impl LengthSet {
    /// max/min of the lengths.
    pub fn elasticity(&self) -> Option<BigRational> {
        let (lo, hi) = (self.lengths.first()?, self.lengths.last()?);
        Some(BigRational::new(BigInt::from(*hi), BigInt::from(*lo)))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "element": self.element.to_string(),
            "lengths": self.lengths,
            "factorizations": self.factorizations.iter().map(|f| f.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "truncated": self.truncated,
            "elasticity": self.elasticity().map(|r| r.to_string()),
        })
    }
}

impl Factorizer {
    pub fn new(r: &OrderRing) -> Result<Self> {
        Ok(Factorizer {
            order: r.clone(),
            reps: coset_reps(r)?.reps,
            irreducible: Mutex::new(HashMap::new()),
            lengths: Mutex::new(HashMap::new()),
        })
    }

    pub fn order(&self) -> &OrderRing {
        &self.order
    }

    fn check_input(&self, a: &FieldElement) -> Result<()> {
        let f = self.order.field();
        f.check_dim(a)?;
        if a.is_zero() {
            return Err(Error::Domain("zero element".into()));
        }
        if !self.order.contains(a) {
            return Err(Error::pre(format!("{a} is not in the order")));
        }
        Ok(())
    }

    /// Every factorization α = d·c in R, with d listed once per U(R)-class:
    /// for each principal divisor (g) of αO̅ and each coset rep u of
    /// U(O̅)/U(R), the pair (u·g, α/(u·g)) when both lie in R.
    pub fn divisors(&self, a: &FieldElement) -> Result<Vec<(FieldElement, FieldElement)>> {
        self.check_input(a)?;
        let f = self.order.field();
        let ideal = OIdeal::principal(f, a)?;
        let mut out = Vec::new();
        for d in ideal.divisors()? {
            let g = match principality(&d)? {
                Principality::Principal(g) => g,
                Principality::NonPrincipal(_) => continue,
            };
            for u in &self.reps {
                let dg = f.mul(u, &g);
                if !self.order.contains(&dg) {
                    continue;
                }
                let c = f.div(a, &dg)?;
                if self.order.contains(&c) {
                    out.push((dg, c));
                }
            }
        }
        Ok(out)
    }

    /// The first split of α into two nonunits of R, if any.
    fn proper_split(&self, a: &FieldElement) -> Result<Option<(FieldElement, FieldElement)>> {
        let key = self.order.principal_lattice(a);
        if let Some(hit) = self.irreducible.lock().expect("memo lock").get(&key) {
            // the stored split may belong to an associate of α
            return match hit {
                Some((d, _)) => Ok(Some((d.clone(), self.order.field().div(a, d)?))),
                None => Ok(None),
            };
        }
        let f = self.order.field();
        let split = self
            .divisors(a)?
            .into_iter()
            .find(|(d, c)| !is_unit_norm(f, d) && !is_unit_norm(f, c));
        self.irreducible.lock().expect("memo lock").insert(key, split.clone());
        Ok(split)
    }

    pub fn is_irreducible(&self, a: &FieldElement) -> Result<Irreducibility> {
        self.check_input(a)?;
        if is_unit_norm(self.order.field(), a) {
            return Err(Error::pre(format!("unit input: {a} is a unit of the order")));
        }
        let witness = self.proper_split(a)?;
        Ok(Irreducibility { irreducible: witness.is_none(), witness })
    }

    pub fn length_set(&self, a: &FieldElement, max_len: u32) -> Result<LengthSet> {
        self.check_input(a)?;
        if is_unit_norm(self.order.field(), a) {
            return Err(Error::pre(format!("unit input: {a} is a unit of the order")));
        }
        let memo = self.lengths_rec(a, max_len)?;
        let f = self.order.field();
        let mut factorizations = Vec::new();
        for fac in memo.witnesses.values() {
            let mut fac = fac.clone();
            // stored witnesses multiply to an associate of α; fix the unit
            if &memo.element != a {
                let v = f.div(a, &memo.element)?;
                fac[0] = f.mul(&fac[0], &v);
            }
            factorizations.push(fac);
        }
        Ok(LengthSet {
            element: a.clone(),
            lengths: memo.witnesses.keys().copied().collect(),
            factorizations,
            truncated: memo.truncated,
        })
    }

    fn lengths_rec(&self, a: &FieldElement, budget: u32) -> Result<LengthMemo> {
        let key = (self.order.principal_lattice(a), budget);
        if let Some(hit) = self.lengths.lock().expect("memo lock").get(&key) {
            return Ok(hit.clone());
        }
        let f = self.order.field();
        let mut witnesses = BTreeMap::new();
        let mut truncated = false;
        if budget == 0 {
            truncated = true;
        } else if self.proper_split(a)?.is_none() {
            witnesses.insert(1, vec![a.clone()]);
        } else if budget == 1 {
            truncated = true;
        } else {
            for (d, c) in self.divisors(a)? {
                if is_unit_norm(f, &d) || is_unit_norm(f, &c) || self.proper_split(&d)?.is_some() {
                    continue;
                }
                let sub = self.lengths_rec(&c, budget - 1)?;
                truncated |= sub.truncated;
                let v = f.div(&c, &sub.element)?;
                for (len, fac) in &sub.witnesses {
                    witnesses.entry(len + 1).or_insert_with(|| {
                        let mut w = vec![d.clone()];
                        let mut rest = fac.clone();
                        rest[0] = f.mul(&rest[0], &v);
                        w.extend(rest);
                        w
                    });
                }
            }
        }
        let memo = LengthMemo { element: a.clone(), witnesses, truncated };
        self.lengths.lock().expect("memo lock").insert(key, memo.clone());
        Ok(memo)
    }
}

pub fn divisors_in_order(a: &FieldElement, r: &OrderRing) -> Result<Vec<(FieldElement, FieldElement)>> {
    Factorizer::new(r)?.divisors(a)
}

pub fn is_irreducible_in(a: &FieldElement, r: &OrderRing) -> Result<Irreducibility> {
    Factorizer::new(r)?.is_irreducible(a)
}

pub fn length_set(a: &FieldElement, r: &OrderRing, max_len: u32) -> Result<LengthSet> {
    Factorizer::new(r)?.length_set(a, max_len)
}

/// Default coefficient height of the sample box, over the basis of R.
pub const SAMPLE_HEIGHT: i64 = 3;

/// Elements Σ c_i b_i of R with |c_i| ≤ height and 1 < |N| ≤ bound, one per
/// associate class, in lexicographic order of c.
pub fn sample_elements(r: &OrderRing, height: i64, bound: u64) -> Vec<FieldElement> {
    let f = r.field();
    let basis = r.basis();
    let n = basis.len();
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    let mut c = vec![-height; n];
    let bound = BigRational::from_integer(BigInt::from(bound));
    loop {
        let mut x = f.zero();
        for (ci, b) in c.iter().zip(&basis) {
            x = x.add(&b.scale_int(&BigInt::from(*ci)));
        }
        if !x.is_zero() {
            let nm = f.norm(&x).abs();
            if nm > BigRational::one() && nm <= bound && seen.insert(r.principal_lattice(&x)) {
                out.push(x);
            }
        }
        let mut i = n;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if c[i] < height {
                c[i] += 1;
                break;
            }
            c[i] = -height;
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HfdVerdict {
    /// Every check passed on the sample; this is evidence, not a proof.
    ConsistentUpToBound,
    ClassGroupTooLarge,
    NotAssociated,
    /// An R-irreducible that factors in O̅.
    Violation,
}

#[derive(Clone, Debug)]
pub struct HfdEvidence {
    pub verdict: HfdVerdict,
    pub class_number: u64,
    pub associated: bool,
    pub irreducibles_checked: usize,
    pub elements_sampled: usize,
    pub violation: Option<(FieldElement, FieldElement, FieldElement)>,
}

/// Checks |Cl(O̅)| ≤ 2, that R is associated, and that every R-irreducible
/// in the sample box with |N| ≤ bound stays irreducible in O̅.
pub fn hfd_evidence(r: &OrderRing, norm_bound: u64) -> Result<HfdEvidence> {
    let f = r.field();
    let h = f.class_number();
    let mut ev = HfdEvidence {
        verdict: HfdVerdict::ConsistentUpToBound,
        class_number: h,
        associated: false,
        irreducibles_checked: 0,
        elements_sampled: 0,
        violation: None,
    };
    if h > 2 {
        ev.verdict = HfdVerdict::ClassGroupTooLarge;
        return Ok(ev);
    }
    ev.associated = is_associated(r)?.holds;
    if !ev.associated {
        ev.verdict = HfdVerdict::NotAssociated;
        return Ok(ev);
    }
    let in_r = Factorizer::new(r)?;
    let in_max = Factorizer::new(&OrderRing::maximal(f))?;
    let sample = sample_elements(r, SAMPLE_HEIGHT, norm_bound);
    ev.elements_sampled = sample.len();
    for x in sample {
        if !in_r.is_irreducible(&x)?.irreducible {
            continue;
        }
        ev.irreducibles_checked += 1;
        if let Some((d, c)) = in_max.is_irreducible(&x)?.witness {
            ev.verdict = HfdVerdict::Violation;
            ev.violation = Some((x, d, c));
            return Ok(ev);
        }
    }
    Ok(ev)
}

impl HfdEvidence {
    pub fn to_json(&self) -> Value {
        json!({
            "verdict": format!("{:?}", self.verdict),
            "class_number": self.class_number,
            "associated": self.associated,
            "irreducibles_checked": self.irreducibles_checked,
            "elements_sampled": self.elements_sampled,
            "violation": self.violation.as_ref().map(|(x, d, c)| vec![x.to_string(), d.to_string(), c.to_string()]),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_davenport_values() {
        assert_eq!(davenport(&AbelianGroup::trivial()).unwrap(), 1);
        assert_eq!(davenport(&AbelianGroup::new(&[2]).unwrap()).unwrap(), 2);
        assert_eq!(davenport(&AbelianGroup::new(&[3, 3]).unwrap()).unwrap(), 5);
        assert!(AbelianGroup::new(&[2, 3]).is_err());
        assert!(davenport(&AbelianGroup::new(&[5, 15]).unwrap()).is_err());
    }

    #[test]
    fn elasticity_of_small_class_groups() {
        assert_eq!(elasticity_maximal(&AbelianGroup::trivial()).unwrap(), BigRational::one());
        assert_eq!(elasticity_maximal(&AbelianGroup::new(&[2]).unwrap()).unwrap(), BigRational::one());
        assert_eq!(
            elasticity_maximal(&AbelianGroup::new(&[3]).unwrap()).unwrap(),
            BigRational::new(3.into(), 2.into())
        );
    }
}
