//! The ten acceptance criteria, each printed as one PASS/FAIL line with its
//! measured runtime against a fixed limit. Run with `--nocapture` to see
//! the table.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::Signed;
use orderlab::corpus;
use orderlab::expr::parse_element;
use orderlab::factor::{davenport, sample_elements, AbelianGroup, Factorizer, SAMPLE_HEIGHT};
use orderlab::fields;
use orderlab::ideal::{split_prime, OIdeal};
use orderlab::order::{intermediate_order, OrderRing};
use orderlab::props::{
    check_inheritance_all, class_number_from_counts, is_associated, is_ideal_preserving, is_locally_associated,
    property_report, IdealPreservingWitness,
};
use orderlab::pseries::{
    association_obstruction, hfd_violation_witness, irreducibility_cert_deg1, Association, Deg1Verdict, TruncSeries,
};
use orderlab::quotient::FiniteQuotient;
use orderlab::units::unit_index;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn e<T: std::fmt::Display>(x: T) -> String {
    x.to_string()
}

fn z_5sqrt2() -> Check {
    let k = fields::q_sqrt2();
    let r = OrderRing::z_plus(&k, 5).map_err(e)?;
    let la = is_locally_associated(&r).map_err(e)?;
    let q = &la.quadruple;
    let triple = (q.units_maximal_mod_conductor, q.units_order_mod_conductor, q.unit_index);
    ensure(triple == (24, 4, 3), format!("(|U(O/I)|, |U(R/I)|, index) = {triple:?}"))?;
    ensure(is_ideal_preserving(&r).map_err(e)?.holds, "not ideal-preserving")?;
    ensure(!la.holds, "locally associated")?;
    ensure(q.unit_index * q.units_order_mod_conductor != q.units_maximal_mod_conductor, "3·4 = 24")?;
    Ok(format!("(24, 4, 3), ideal-preserving, not locally associated (3·4 ≠ 24)"))
}

fn z_2sqrt2() -> Check {
    let k = fields::q_sqrt2();
    let r = OrderRing::z_plus(&k, 2).map_err(e)?;
    let ip = is_ideal_preserving(&r).map_err(e)?;
    ensure(!ip.holds, "ideal-preserving")?;
    let sqrt2 = OIdeal::principal(&k, &k.theta()).map_err(e)?;
    match ip.witness {
        Some(IdealPreservingWitness::Square { p }) => {
            ensure(OIdeal::from_prime(&k, &p) == sqrt2, format!("witness prime {p} is not (√2)"))?
        }
        other => return Err(format!("unexpected witness {other:?}")),
    }
    let la = is_locally_associated(&r).map_err(e)?;
    ensure(la.holds, "not locally associated")?;
    ensure(la.quadruple.units_maximal_mod_conductor == 2, "|U(O/I)| ≠ 2")?;
    Ok("witness R ∩ (√2) ⊆ (√2)², locally associated with |U(O/I)| = 2".into())
}

fn cubic_orders() -> Check {
    let k = fields::cubic();
    let primes = split_prime(&k, 3).map_err(e)?;
    let gens: Vec<String> = primes.iter().map(|p| p.generator.to_string()).collect();
    ensure(gens == ["1+a", "2+2a+a^2"], format!("3 splits over {gens:?}"))?;
    let q = OIdeal::from_prime(&k, &primes[0]);
    let p = OIdeal::from_prime(&k, &primes[1]);
    ensure(q.mul(&p) == OIdeal::principal(&k, &k.int(3)).map_err(e)?, "3O ≠ QP")?;
    let gamma = parse_element(&k, "2-4a+a^2").map_err(e)?;
    let i = p.pow(2);
    ensure(i == OIdeal::principal(&k, &gamma).map_err(e)?, "P² ≠ (2−4α+α²)")?;
    let r = OrderRing::z_plus_ideal(&k, &i).map_err(e)?;
    ensure(is_associated(&r).map_err(e)?.holds, "R not associated")?;
    let r1 = intermediate_order(&r, &p).map_err(e)?;
    let (u1, u) = (unit_index(&r1).map_err(e)?, unit_index(&r).map_err(e)?);
    ensure((u1, u) == (4, 12), format!("unit indices ({u1}, {u})"))?;
    let size = FiniteQuotient::maximal_mod(&k, &p).map_err(e)?.size().clone();
    ensure(size == BigInt::from(9), format!("|O/P| = {size}"))?;
    Ok("3O = (3,1+α)(3,2+2α+α²), P² = (2−4α+α²), associated, indices 4 and 12, |O/P| = 9".into())
}

fn cubic_setup() -> Result<(std::sync::Arc<orderlab::Field>, OIdeal, OrderRing), String> {
    let k = fields::cubic();
    let p = corpus::cubic_prime(&k).map_err(e)?;
    let r = OrderRing::z_plus_ideal(&k, &p.pow(2)).map_err(e)?;
    Ok((k, p, r))
}

fn series(k: &orderlab::Field, parts: &[&str]) -> Result<TruncSeries, String> {
    let cs = parts.iter().map(|s| parse_element(k, s)).collect::<orderlab::Result<Vec<_>>>().map_err(e)?;
    TruncSeries::new(cs).map_err(e)
}

fn obstruction() -> Check {
    let (k, _, r) = cubic_setup()?;
    let g = series(&k, &["3", "a"])?;
    match association_obstruction(&g, &r, 1).map_err(e)? {
        Association::Certificate(c) => {
            ensure(c.level == 1, format!("certificate closes at level {}", c.level))?;
            let survivors = c.branch_log.iter().filter(|b| b.level == 1).count();
            Ok(format!("certificate at degree 1: {} branches, {survivors} reach degree 1", c.branch_log.len()))
        }
        Association::Witness { .. } => Err("returned a witness".into()),
    }
}

fn degree_one_certificate() -> Check {
    let (k, _, r) = cubic_setup()?;
    let f = series(&k, &["6-12a+3a^2", "1-2a-4a^2"])?;
    let cert = irreducibility_cert_deg1(&f, &r).map_err(e)?;
    ensure(cert.verdict == Deg1Verdict::Irreducible, "not certified irreducible")?;
    ensure(cert.branches.len() == 3, format!("{} branches", cert.branches.len()))?;
    let three = k.int(3);
    let n3 = k.norm(&three).abs();
    let mut ks = Vec::new();
    for b in &cert.branches {
        ensure(!b.holds && b.failure.is_some(), "a branch survives")?;
        let g0 = if k.norm(&b.g0).abs() == n3 { &b.g0 } else { &b.h0 };
        let q = k.div(g0, &three).map_err(e)?;
        let kk = (-1i64..=1)
            .find(|&j| k.pow_signed(&k.theta(), 4 * j).ok().and_then(|a| k.div(&q, &a).ok()).is_some_and(|t| r.is_unit(&t)))
            .ok_or_else(|| format!("branch {} is not 3α^(4k)", b.g0))?;
        ks.push(kk);
    }
    ks.sort();
    ensure(ks == [-1, 0, 1], format!("branch classes {ks:?}"))?;
    Ok("irreducible; branches k = −1, 0, 1 each fail membership".into())
}

fn hfd_witness() -> Check {
    let (k, p, r) = cubic_setup()?;
    let f = series(&k, &["6-12a+3a^2", "1-2a-4a^2"])?;
    let g = series(&k, &["2-4a+a^2", "0"])?;
    let w = hfd_violation_witness(&f, &g, &k.int(3), &k.theta(), &p, &r).map_err(e)?;
    ensure((w.m, w.k) == (3, 12), format!("(m, k) = ({}, {})", w.m, w.k))?;
    ensure(w.power.len() == 37 && w.coefficients_in_order == 37, format!("{}/{} coefficients in R", w.coefficients_in_order, w.power.len()))?;
    ensure(w.binomial_identity, "binomial identity fails")?;
    Ok("m = 3, k = 12, 37/37 coefficients of (3+αx)^36 in R".into())
}

fn class_numbers() -> Check {
    let k = fields::q_sqrt2();
    let r = OrderRing::z_plus(&k, 5).map_err(e)?;
    let q = is_locally_associated(&r).map_err(e)?.quadruple;
    let h = class_number_from_counts(k.class_number(), q.units_maximal_mod_conductor, q.units_order_mod_conductor, q.unit_index)
        .map_err(e)?;
    ensure(h == 2, format!("|Cl(Z[5√2])| = {h}"))?;
    let mut checked = 0;
    for entry in corpus::default_corpus().map_err(e)? {
        let la = is_locally_associated(&entry.order).map_err(e)?;
        if la.holds {
            checked += 1;
            let h0 = entry.field().class_number();
            ensure(la.quadruple.class_number == h0, format!("{}: |Cl(R)| = {} ≠ {h0}", entry.name, la.quadruple.class_number))?;
        }
    }
    Ok(format!("|Cl(Z[5√2])| = 1·24/(4·3) = 2; {checked} locally associated corpus orders keep |Cl(O)|"))
}

/// Longest zero-sum-free sequence plus one, from every multiset of group
/// elements and every nonempty sub-multiset.
fn davenport_oracle(orders: &[u64]) -> u64 {
    let mut elems: Vec<Vec<u64>> = vec![vec![]];
    for &n in orders {
        elems = elems.into_iter().flat_map(|v| (0..n).map(move |d| [v.clone(), vec![d]].concat())).collect();
    }
    let free = |seq: &[usize]| {
        (1u32..1 << seq.len()).all(|mask| {
            orders.iter().enumerate().any(|(i, &n)| {
                seq.iter().enumerate().filter(|(j, _)| mask >> j & 1 == 1).map(|(_, &x)| elems[x][i]).sum::<u64>() % n != 0
            })
        })
    };
    let mut best = 0;
    let mut stack = vec![Vec::<usize>::new()];
    while let Some(seq) = stack.pop() {
        best = best.max(seq.len());
        for x in seq.last().copied().unwrap_or(1)..elems.len() {
            let mut next = seq.clone();
            next.push(x);
            if free(&next) {
                stack.push(next);
            }
        }
    }
    best as u64 + 1
}

fn davenport_suite() -> Check {
    let mut cases: Vec<(Vec<u64>, u64)> = (1..=8).map(|n| (vec![n], n)).collect();
    cases.extend([(vec![2, 2], 3), (vec![3, 3], 5), (vec![2, 4], 5)]);
    for (orders, expected) in &cases {
        let g = AbelianGroup::new(orders).map_err(e)?;
        let d = davenport(&g).map_err(e)?;
        let oracle = davenport_oracle(orders);
        ensure(d == *expected && oracle == *expected, format!("D{orders:?} = {d}, oracle {oracle}, expected {expected}"))?;
    }
    Ok(format!("{} groups agree with the subset oracle", cases.len()))
}

fn property_suites() -> Check {
    let corpus = corpus::default_corpus().map_err(e)?;
    ensure(corpus.len() >= 20, format!("corpus has {} orders", corpus.len()))?;
    let mut open = Vec::new();
    let mut inherited = 0;
    for entry in &corpus {
        let r = &entry.order;
        let rep = property_report(r).map_err(|x| format!("{}: {x}", entry.name))?;
        let (a, ip, la) = (rep.associated.holds, rep.ideal_preserving.holds, rep.locally_associated.holds);
        ensure(!a || (ip && la), format!("{}: associated but not (IP ∧ LA)", entry.name))?;
        if rep.conductor_radical {
            ensure(a == (ip && la), format!("{}: radical conductor equivalence fails", entry.name))?;
        }
        if rep.open_case_candidate {
            open.push(entry.name.clone());
        }
        let divs = r.conductor().divisors().map_err(e)?;
        if ip {
            let exts: Vec<OrderRing> = divs.iter().map(|j| intermediate_order(r, j)).collect::<orderlab::Result<_>>().map_err(e)?;
            for (j, t) in divs.iter().zip(&exts) {
                ensure(t.conductor() == &r.conductor().sum(j), format!("{}: conductor(R+J) ≠ I+J", entry.name))?;
            }
            for (j1, t1) in divs.iter().zip(&exts) {
                for (j2, t2) in divs.iter().zip(&exts) {
                    let lhs = t1.lattice().intersect(t2.lattice());
                    ensure(lhs == r.lattice().sum(j1.intersect(j2).lattice()), format!("{}: (R+J1)∩(R+J2) ≠ R+(J1∩J2)", entry.name))?;
                }
            }
        }
        inherited += check_inheritance_all(r, &divs).map_err(|x| format!("{}: {x}", entry.name))?.len();
    }
    Ok(format!("{} orders, {inherited} extensions R+J; open-case candidates: {open:?}", corpus.len()))
}

fn factorization_transfer() -> Check {
    let (k, p, r) = cubic_setup()?;
    let r1 = intermediate_order(&r, &p).map_err(e)?;
    ensure(is_associated(&r1).map_err(e)?.holds, "R1 not associated")?;
    ensure(r1.conductor().is_radical().map_err(e)?, "conductor of R1 not radical")?;
    let in_r1 = Factorizer::new(&r1).map_err(e)?;
    let in_max = Factorizer::new(&OrderRing::maximal(&k)).map_err(e)?;
    let sample = sample_elements(&r1, SAMPLE_HEIGHT, 3000);
    let mut irreducibles = 0;
    for x in &sample {
        let irr = in_r1.is_irreducible(x).map_err(e)?;
        if irr.irreducible {
            irreducibles += 1;
            ensure(in_max.is_irreducible(x).map_err(e)?.irreducible, format!("{x} is R1-irreducible but factors in O"))?;
        }
        let l1 = in_r1.length_set(x, 12).map_err(e)?;
        let l0 = in_max.length_set(x, 12).map_err(e)?;
        ensure(!l1.truncated && !l0.truncated, format!("length search truncated at {x}"))?;
        ensure(l1.lengths == l0.lengths, format!("{x}: lengths {:?} in R1, {:?} in O", l1.lengths, l0.lengths))?;
    }
    Ok(format!("{} sampled elements, {irreducibles} R1-irreducibles, equal length sets", sample.len()))
}

struct Criterion {
    id: u32,
    name: &'static str,
    limit: Option<Duration>,
    run: fn() -> Check,
}

#[test]
fn acceptance_criteria() {
    let secs = |s: u64| Some(Duration::from_secs(s));
    let criteria = [
        Criterion { id: 1, name: "Z[5√2] unit counts and predicates", limit: secs(1), run: z_5sqrt2 },
        Criterion { id: 2, name: "Z[2√2] predicates", limit: secs(1), run: z_2sqrt2 },
        Criterion { id: 3, name: "cubic orders R and R1", limit: secs(10), run: cubic_orders },
        Criterion { id: 4, name: "3+αx association obstruction", limit: secs(5), run: obstruction },
        Criterion { id: 5, name: "degree-1 irreducibility certificate", limit: secs(30), run: degree_one_certificate },
        Criterion { id: 6, name: "power series HFD violation witness", limit: secs(5), run: hfd_witness },
        Criterion { id: 7, name: "class number formula", limit: None, run: class_numbers },
        Criterion { id: 8, name: "Davenport constants", limit: secs(10), run: davenport_suite },
        Criterion { id: 9, name: "property suites over the corpus", limit: secs(120), run: property_suites },
        Criterion { id: 10, name: "factorization transfer to R1", limit: secs(300), run: factorization_transfer },
    ];
    let mut failed = Vec::new();
    for c in &criteria {
        let start = Instant::now();
        let res = (c.run)();
        let took = start.elapsed();
        let in_time = c.limit.is_none_or(|l| took <= l);
        let ok = res.is_ok() && in_time;
        let limit = c.limit.map(|l| format!("{} s", l.as_secs())).unwrap_or_else(|| "none".into());
        let detail = match &res {
            Ok(s) if in_time => s.clone(),
            Ok(s) => format!("{s}; over the time limit"),
            Err(s) => s.clone(),
        };
        println!(
            "criterion {:>2} {} {} ({:.2} s, limit {limit}): {detail}",
            c.id,
            if ok { "PASS" } else { "FAIL" },
            c.name,
            took.as_secs_f64()
        );
        if !ok {
            failed.push(c.id);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
