//! The reproduction harness: every golden computation, compared against the
//! expected values stored in the golden file.

use std::cell::OnceCell;
use std::path::Path;
use std::sync::Arc;

use orderlab::corpus::{self, CorpusEntry};
use orderlab::expr::parse_element;
use orderlab::factor::hfd_evidence;
use orderlab::ideal::{split_prime, OIdeal};
use orderlab::order::{intermediate_order, OrderRing};
use orderlab::props::{
    check_inheritance_all, is_associated, is_ideal_preserving, is_locally_associated, property_report, IdealPreservingWitness,
    PropertyReport,
};
use orderlab::pseries::{association_obstruction, hfd_violation_witness, irreducibility_cert_deg1, Association, TruncSeries};
use orderlab::quotient::FiniteQuotient;
use orderlab::units::unit_index;
use orderlab::{Error, Field, Result};
use num_traits::Signed;
use serde_json::{json, Value};

pub const GOLDEN: &str = include_str!("../golden/verify-paper.json");

pub const FIELD_FILES: [&str; 3] = ["Q-sqrt2.json", "Q-sqrt-3.json", "cubic-x3+4x-1.json"];

pub struct Ctx {
    q2: Arc<Field>,
    q3: Arc<Field>,
    cubic: Arc<Field>,
    hfd_bound: u64,
    corpus: OnceCell<Vec<(CorpusEntry, PropertyReport)>>,
}

impl Ctx {
    pub fn load(dir: &Path, hfd_bound: u64) -> Result<Self> {
        let load = |name: &str| Field::from_path(dir.join(name));
        Ok(Ctx {
            q2: load(FIELD_FILES[0])?,
            q3: load(FIELD_FILES[1])?,
            cubic: load(FIELD_FILES[2])?,
            hfd_bound,
            corpus: OnceCell::new(),
        })
    }

    fn corpus(&self) -> Result<&Vec<(CorpusEntry, PropertyReport)>> {
        if let Some(c) = self.corpus.get() {
            return Ok(c);
        }
        let reps = corpus::corpus_over(&self.q2, &self.q3, &self.cubic)?
            .into_iter()
            .map(|e| property_report(&e.order).map(|r| (e, r)))
            .collect::<Result<Vec<_>>>()?;
        Ok(self.corpus.get_or_init(|| reps))
    }

    fn cubic_setup(&self) -> Result<(OIdeal, OrderRing)> {
        let p = corpus::cubic_prime(&self.cubic)?;
        let r = OrderRing::z_plus_ideal(&self.cubic, &p.pow(2))?;
        Ok((p, r))
    }
}

/// Computed value plus extra information that is printed but not compared.
type Computed = (Value, Value);

fn series(k: &Field, parts: &[&str]) -> Result<TruncSeries> {
    TruncSeries::new(parts.iter().map(|s| parse_element(k, s)).collect::<Result<_>>()?)
}

fn z5sqrt2(c: &Ctx) -> Result<Computed> {
    let r = OrderRing::z_plus(&c.q2, 5)?;
    let la = is_locally_associated(&r)?;
    let q = &la.quadruple;
    Ok((
        json!({
            "units_maximal_mod_conductor": q.units_maximal_mod_conductor,
            "units_order_mod_conductor": q.units_order_mod_conductor,
            "unit_index": q.unit_index,
            "ideal_preserving": is_ideal_preserving(&r)?.holds,
            "locally_associated": la.holds,
            "class_number": q.class_number,
        }),
        Value::Null,
    ))
}

fn z2sqrt2(c: &Ctx) -> Result<Computed> {
    let r = OrderRing::z_plus(&c.q2, 2)?;
    let ip = is_ideal_preserving(&r)?;
    let sqrt2 = OIdeal::principal(&c.q2, &c.q2.theta())?;
    let witness = match &ip.witness {
        Some(IdealPreservingWitness::Square { p }) => json!({
            "kind": "square",
            "prime_is_sqrt2": OIdeal::from_prime(&c.q2, p) == sqrt2,
        }),
        Some(IdealPreservingWitness::Distinct { .. }) => json!({"kind": "distinct"}),
        None => Value::Null,
    };
    let la = is_locally_associated(&r)?;
    Ok((
        json!({
            "ideal_preserving": ip.holds,
            "witness": witness,
            "locally_associated": la.holds,
            "units_maximal_mod_conductor": la.quadruple.units_maximal_mod_conductor,
        }),
        Value::Null,
    ))
}

fn cubic_orders(c: &Ctx) -> Result<Computed> {
    let k = &c.cubic;
    let primes = split_prime(k, 3)?;
    let (p, r) = c.cubic_setup()?;
    let gamma = parse_element(k, "2-4a+a^2")?;
    let r1 = intermediate_order(&r, &p)?;
    Ok((
        json!({
            "split_of_3": primes.iter().map(|q| q.generator.to_string()).collect::<Vec<_>>(),
            "conductor_is_principal_with_generator": p.pow(2) == OIdeal::principal(k, &gamma)?,
            "conductor_generator": gamma.to_string(),
            "associated": is_associated(&r)?.holds,
            "unit_index_r1": unit_index(&r1)?,
            "unit_index_r": unit_index(&r)?,
            "residue_field_size": FiniteQuotient::maximal_mod(k, &p)?.size().to_string(),
        }),
        json!({
            "basis_r": r.lattice().rows_strings(),
            "basis_r1": r1.lattice().rows_strings(),
        }),
    ))
}

fn assoc_obstruction(c: &Ctx) -> Result<Computed> {
    let (_, r) = c.cubic_setup()?;
    let g = series(&c.cubic, &["3", "a"])?;
    let res = association_obstruction(&g, &r, 1)?;
    let core = match &res {
        Association::Certificate(cert) => json!({"result": "certificate", "level": cert.level}),
        Association::Witness { .. } => json!({"result": "witness"}),
    };
    Ok((core, res.to_json()))
}

fn deg1_irreducible(c: &Ctx) -> Result<Computed> {
    let (_, r) = c.cubic_setup()?;
    let k = &c.cubic;
    let f = series(k, &["6-12a+3a^2", "1-2a-4a^2"])?;
    let cert = irreducibility_cert_deg1(&f, &r)?;
    let three = k.int(3);
    let n3 = k.norm(&three);
    let mut classes = Vec::new();
    for b in &cert.branches {
        let g0 = if k.norm(&b.g0).abs() == n3.abs() { &b.g0 } else { &b.h0 };
        let q = k.div(g0, &three)?;
        let class = (-1i64..=1).find(|&j| {
            k.pow_signed(&k.theta(), 4 * j)
                .and_then(|a| k.div(&q, &a))
                .is_ok_and(|t| r.is_unit(&t))
        });
        classes.push(class.map(Value::from).unwrap_or(Value::Null));
    }
    classes.sort_by_key(|v| v.as_i64().unwrap_or(i64::MAX));
    let verdict = cert.to_json()["verdict"].clone();
    Ok((
        json!({
            "verdict": verdict,
            "branch_classes": classes,
            "every_branch_fails": cert.branches.iter().all(|b| !b.holds),
        }),
        cert.to_json(),
    ))
}

fn hfd_witness(c: &Ctx) -> Result<Computed> {
    let (p, r) = c.cubic_setup()?;
    let k = &c.cubic;
    let f = series(k, &["6-12a+3a^2", "1-2a-4a^2"])?;
    let g = series(k, &["2-4a+a^2", "0"])?;
    let w = hfd_violation_witness(&f, &g, &k.int(3), &k.theta(), &p, &r)?;
    Ok((
        json!({
            "m": w.m,
            "k": w.k,
            "coefficients": w.power.len(),
            "coefficients_in_order": w.coefficients_in_order,
            "binomial_identity": w.binomial_identity,
        }),
        Value::Null,
    ))
}

fn hfd_evidence_cubic(c: &Ctx) -> Result<Computed> {
    let (_, r) = c.cubic_setup()?;
    let ev = hfd_evidence(&r, c.hfd_bound)?;
    Ok((
        json!({
            "verdict": format!("{:?}", ev.verdict),
            "class_number": ev.class_number,
            "associated": ev.associated,
        }),
        json!({"norm_bound": c.hfd_bound, "elements_sampled": ev.elements_sampled, "irreducibles_checked": ev.irreducibles_checked}),
    ))
}

fn corpus_associated(c: &Ctx) -> Result<Computed> {
    let reps = c.corpus()?;
    let bad: Vec<&str> = reps
        .iter()
        .filter(|(_, r)| r.associated.holds && !(r.ideal_preserving.holds && r.locally_associated.holds))
        .map(|(e, _)| e.name.as_str())
        .collect();
    let associated = reps.iter().filter(|(_, r)| r.associated.holds).count();
    Ok((json!({"exceptions": bad}), json!({"orders": reps.len(), "associated": associated})))
}

fn corpus_radical(c: &Ctx) -> Result<Computed> {
    let reps = c.corpus()?;
    let radical: Vec<_> = reps.iter().filter(|(_, r)| r.conductor_radical).collect();
    let bad: Vec<&str> = radical
        .iter()
        .filter(|(_, r)| r.associated.holds != (r.ideal_preserving.holds && r.locally_associated.holds))
        .map(|(e, _)| e.name.as_str())
        .collect();
    let open: Vec<&str> = reps.iter().filter(|(_, r)| r.open_case_candidate).map(|(e, _)| e.name.as_str()).collect();
    Ok((json!({"exceptions": bad}), json!({"radical_conductor_orders": radical.len(), "open_case_candidates": open})))
}

fn ideal_preserving_extensions(c: &Ctx) -> Result<Vec<(&CorpusEntry, Vec<OIdeal>, Vec<OrderRing>)>> {
    let mut out = Vec::new();
    for (e, rep) in c.corpus()? {
        if !rep.ideal_preserving.holds {
            continue;
        }
        let divs = e.order.conductor().divisors()?;
        let exts = divs.iter().map(|j| intermediate_order(&e.order, j)).collect::<Result<Vec<_>>>()?;
        out.push((e, divs, exts));
    }
    Ok(out)
}

fn corpus_int_orders(c: &Ctx) -> Result<Computed> {
    let mut bad = Vec::new();
    let mut checked = 0;
    for (e, divs, exts) in ideal_preserving_extensions(c)? {
        for (j, t) in divs.iter().zip(&exts) {
            checked += 1;
            if t.conductor() != &e.order.conductor().sum(j) {
                bad.push(e.name.clone());
            }
        }
    }
    Ok((json!({"exceptions": bad}), json!({"extensions_checked": checked})))
}

fn corpus_intersect_orders(c: &Ctx) -> Result<Computed> {
    let mut bad = Vec::new();
    let mut checked = 0;
    for (e, divs, exts) in ideal_preserving_extensions(c)? {
        for (j1, t1) in divs.iter().zip(&exts) {
            for (j2, t2) in divs.iter().zip(&exts) {
                checked += 1;
                if t1.lattice().intersect(t2.lattice()) != e.order.lattice().sum(j1.intersect(j2).lattice()) {
                    bad.push(e.name.clone());
                }
            }
        }
    }
    bad.dedup();
    Ok((json!({"exceptions": bad}), json!({"pairs_checked": checked})))
}

fn corpus_inheritance(c: &Ctx) -> Result<Computed> {
    let mut bad = Vec::new();
    let mut checked = 0;
    for (e, _) in c.corpus()? {
        let divs = e.order.conductor().divisors()?;
        match check_inheritance_all(&e.order, &divs) {
            Ok(v) => checked += v.len(),
            Err(Error::Invariant(m)) => bad.push(format!("{}: {m}", e.name)),
            Err(other) => return Err(other),
        }
    }
    Ok((json!({"exceptions": bad}), json!({"extensions_checked": checked})))
}

type CaseFn = fn(&Ctx) -> Result<Computed>;

pub const CASES: [(&str, CaseFn); 12] = [
    ("z5sqrt2", z5sqrt2),
    ("z2sqrt2", z2sqrt2),
    ("cubic-orders", cubic_orders),
    ("assoc-obstruction", assoc_obstruction),
    ("deg1-irreducible", deg1_irreducible),
    ("hfd-witness", hfd_witness),
    ("hfd-evidence-cubic", hfd_evidence_cubic),
    ("corpus-associated-implies", corpus_associated),
    ("corpus-radical-converse", corpus_radical),
    ("corpus-int-orders", corpus_int_orders),
    ("corpus-intersect-orders", corpus_intersect_orders),
    ("corpus-inheritance", corpus_inheritance),
];

pub struct CaseResult {
    pub name: String,
    pub source: String,
    pub expected: Value,
    pub computed: Value,
    pub info: Value,
    pub pass: bool,
    /// Set when the computation itself failed.
    pub error: Option<Error>,
}

pub struct Suite {
    pub cases: Vec<CaseResult>,
}

impl Suite {
    pub fn failed(&self) -> usize {
        self.cases.iter().filter(|c| !c.pass).count()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "cases": self.cases.iter().map(|c| json!({
                "name": c.name,
                "source": c.source,
                "expected": c.expected,
                "computed": c.computed,
                "info": c.info,
                "pass": c.pass,
            })).collect::<Vec<_>>(),
            "passed": self.cases.len() - self.failed(),
            "failed": self.failed(),
        })
    }
}

/// Golden entries as (name, source, expected).
pub fn parse_golden(text: &str) -> Result<Vec<(String, String, Value)>> {
    let v: Value = serde_json::from_str(text)?;
    let cases = v["cases"].as_array().ok_or_else(|| Error::Input("golden file has no \"cases\" array".into()))?;
    cases
        .iter()
        .map(|c| {
            let name = c["name"].as_str().ok_or_else(|| Error::Input("golden case without a name".into()))?;
            let source = c["source"].as_str().unwrap_or("").to_string();
            Ok((name.to_string(), source, c["expected"].clone()))
        })
        .collect()
}

pub fn run(ctx: &Ctx, golden: &[(String, String, Value)], only: &[String]) -> Result<Suite> {
    for name in only {
        if !CASES.iter().any(|(n, _)| n == name) {
            return Err(Error::Input(format!("unknown case {name:?}")));
        }
    }
    let mut cases = Vec::new();
    for (name, f) in CASES {
        if !only.is_empty() && !only.iter().any(|o| o == name) {
            continue;
        }
        let (source, expected) = golden
            .iter()
            .find(|(n, _, _)| n == name)
            .map(|(_, s, e)| (s.clone(), e.clone()))
            .ok_or_else(|| Error::Input(format!("golden file has no case {name:?}")))?;
        let (computed, info, error) = match f(ctx) {
            Ok((c, i)) => (c, i, None),
            Err(e) => (json!({"error": e.to_string()}), Value::Null, Some(e)),
        };
        let pass = error.is_none() && computed == expected;
        cases.push(CaseResult { name: name.to_string(), source, expected, computed, info, pass, error });
    }
    Ok(Suite { cases })
}
