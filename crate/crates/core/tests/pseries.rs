use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_traits::Signed;
use orderlab::expr::parse_element;
use orderlab::field::{Field, FieldElement};
use orderlab::fields;
use orderlab::ideal::{split_prime, OIdeal};
use orderlab::order::{intermediate_order, OrderRing};
use orderlab::pseries::*;
use orderlab::Error;
use proptest::prelude::*;

fn el(k: &Field, s: &str) -> FieldElement {
    parse_element(k, s).unwrap()
}

fn series(k: &Field, parts: &[&str]) -> TruncSeries {
    TruncSeries::new(parts.iter().map(|s| el(k, s)).collect()).unwrap()
}

struct Cubic {
    k: Arc<Field>,
    p: OIdeal,
    r: OrderRing,
}

fn cubic() -> Cubic {
    let k = fields::cubic();
    let p = OIdeal::from_prime(&k, &split_prime(&k, 3).unwrap()[1]);
    let r = OrderRing::z_plus_ideal(&k, &p.pow(2)).unwrap();
    Cubic { k, p, r }
}

#[test]
fn three_plus_alpha_x_is_not_associated_to_a_series_over_r() {
    let c = cubic();
    let g = series(&c.k, &["3", "a"]);
    let Association::Certificate(cert) = association_obstruction(&g, &c.r, 1).unwrap() else {
        panic!("expected an obstruction certificate");
    };
    assert_eq!(cert.level, 1);
    assert_eq!(cert.branch_log.len(), 12);
    // u0 must lie in U(R1): [U(R1):U(R)] = 3 branches survive degree 0.
    let r1 = intermediate_order(&c.r, &c.p).unwrap();
    let survivors: Vec<_> = cert.branch_log.iter().filter(|b| b.level == 1).collect();
    assert_eq!(survivors.len(), 3);
    for b in &survivors {
        assert!(r1.is_unit(&b.rep));
        // the obstruction α^(4k+1) ∉ R1
        let a_rep = c.k.mul(&c.k.theta(), &b.rep);
        assert!(!r1.contains(&a_rep));
    }
    for b in cert.branch_log.iter().filter(|b| b.level == 0) {
        assert!(!r1.is_unit(&b.rep));
    }
}

#[test]
fn series_over_the_order_is_its_own_witness() {
    let c = cubic();
    let g = series(&c.k, &["2-4a+a^2", "9a", "1"]);
    match association_obstruction(&g, &c.r, 2).unwrap() {
        Association::Witness { r, u } => {
            assert!(c.k.is_maximal_unit(u.coeff(0)));
            assert!(r.in_lattice(c.r.lattice()));
            assert_eq!(ts_mul(&c.k, &g, &u), r);
        }
        Association::Certificate(_) => panic!("g already lies in R[[x]]"),
    }
}

#[test]
fn gamma_plus_x_result_reverifies() {
    let c = cubic();
    let g = series(&c.k, &["2-4a+a^2", "1"]);
    match association_obstruction(&g, &c.r, 1).unwrap() {
        Association::Witness { r, u } => {
            assert!(r.in_lattice(c.r.lattice()));
            assert_eq!(ts_mul(&c.k, &g, &u), r);
        }
        Association::Certificate(cert) => {
            for b in &cert.branch_log {
                assert!(b.failure.contains("not divisible"), "{}", b.failure);
            }
        }
    }
}

#[test]
fn degree_one_certificate_for_the_cubic_series() {
    let c = cubic();
    let f = series(&c.k, &["6-12a+3a^2", "1-2a-4a^2"]);
    let cert = irreducibility_cert_deg1(&f, &c.r).unwrap();
    assert_eq!(cert.verdict, Deg1Verdict::Irreducible);
    assert_eq!(cert.branches.len(), 3);
    // each branch is 3α^(4k)·γα^(−4k) for k ∈ {−1, 0, 1} up to U(R) = ±α^(12Z)
    let a = c.k.theta();
    let three = c.k.int(3);
    let mut ks = Vec::new();
    for b in &cert.branches {
        assert!(!b.holds);
        assert!(b.failure.as_ref().unwrap().contains("not divisible"));
        let (g0, h0) = if c.k.norm(&b.g0).abs() == c.k.norm(&three).abs() { (&b.g0, &b.h0) } else { (&b.h0, &b.g0) };
        let q = c.k.div(g0, &three).unwrap();
        let k = [-1i64, 0, 1]
            .into_iter()
            .find(|&k| {
                let t = c.k.div(&q, &c.k.pow_signed(&a, 4 * k).unwrap()).unwrap();
                c.r.is_unit(&t)
            })
            .expect("branch is not of the form 3α^(4k)");
        ks.push(k);
        assert_eq!(&c.k.mul(g0, h0), f.coeff(0));
    }
    ks.sort();
    assert_eq!(ks, vec![-1, 0, 1]);
}

#[test]
fn unit_constant_term_is_rejected() {
    let c = cubic();
    let f = series(&c.k, &["-1", "a"]);
    assert!(matches!(irreducibility_cert_deg1(&f, &c.r), Err(Error::Precondition(_))));
}

#[test]
fn zero_linear_coefficient_leaves_a_surviving_branch() {
    let c = cubic();
    let f = series(&c.k, &["6-12a+3a^2", "0"]);
    let cert = irreducibility_cert_deg1(&f, &c.r).unwrap();
    assert_eq!(cert.verdict, Deg1Verdict::Inconclusive);
    assert!(cert.branches.iter().all(|b| b.holds));
}

#[test]
fn hfd_witness_for_the_cubic_order() {
    let c = cubic();
    let f = series(&c.k, &["6-12a+3a^2", "1-2a-4a^2"]);
    let g = series(&c.k, &["2-4a+a^2", "0"]);
    let w = hfd_violation_witness(&f, &g, &c.k.int(3), &c.k.theta(), &c.p, &c.r).unwrap();
    assert_eq!((w.m, w.k), (3, 12));
    assert_eq!(w.power.len(), 37);
    assert_eq!(w.coefficients_in_order, 37);
    assert!(w.binomial_identity);
    assert!(w.holds());
    assert_eq!((w.lhs_irreducibles, w.rhs_at_least), (36, 37));
    // minimality, independently
    let i = c.r.conductor();
    assert!(!i.contains(&c.k.int(3)) && !i.contains(&c.k.int(6)) && i.contains(&c.k.int(9)));
    for e in 1..12 {
        assert!(!c.r.contains(&c.k.pow(&c.k.theta(), e)));
    }
    assert!(c.r.contains(&c.k.pow(&c.k.theta(), 12)));
}

#[test]
fn hfd_witness_degenerate_exponents() {
    let c = cubic();
    let g = series(&c.k, &["2-4a+a^2", "0"]);
    let a = el(&c.k, "6-12a+3a^2");
    let lin = TruncSeries::new(vec![a.clone(), c.k.theta()]).unwrap();
    let f = ts_mul(&c.k, &g, &lin);
    let w = hfd_violation_witness(&f, &g, &a, &c.k.theta(), &c.p, &c.r).unwrap();
    assert_eq!((w.m, w.k), (1, 12));
    let lin = TruncSeries::new(vec![c.k.int(3), c.k.one()]).unwrap();
    let f = ts_mul(&c.k, &g, &lin);
    let w = hfd_violation_witness(&f, &g, &c.k.int(3), &c.k.one(), &c.p, &c.r).unwrap();
    assert_eq!((w.m, w.k), (3, 1));
    assert!(w.holds());
}

#[test]
fn hfd_witness_rejects_a_wrong_factorization() {
    let c = cubic();
    let f = series(&c.k, &["6-12a+3a^2", "1"]);
    let g = series(&c.k, &["2-4a+a^2", "0"]);
    assert!(matches!(
        hfd_violation_witness(&f, &g, &c.k.int(3), &c.k.theta(), &c.p, &c.r),
        Err(Error::Precondition(_))
    ));
}

#[test]
fn unit_split_over_z_10sqrt2() {
    let k = fields::q_sqrt2();
    let r = OrderRing::z_plus(&k, 10).unwrap();
    let j1 = OIdeal::principal(&k, &k.int(2)).unwrap();
    let j2 = OIdeal::principal(&k, &k.int(5)).unwrap();
    for u in [series(&k, &["1"]), series(&k, &["1+a", "1", "0", "0"]), series(&k, &["1+a"])] {
        let s = unit_split_trunc(&u, &j1, &j2, &r, 3).unwrap();
        assert_eq!(ts_mul(&k, &s.v1, &s.v2), u.with_degree(3));
        assert!(s.v1.in_lattice(s.order1.lattice()));
        assert!(s.v2.in_lattice(s.order2.lattice()));
    }
    let s = unit_split_trunc(&series(&k, &["1"]), &j1, &j2, &r, 2).unwrap();
    assert_eq!(s.v1, series(&k, &["1", "0", "0"]));
    assert_eq!(s.v2, series(&k, &["1", "0", "0"]));
}

#[test]
fn unit_split_rejects_bad_ideals() {
    let k = fields::q_sqrt2();
    let r = OrderRing::z_plus(&k, 10).unwrap();
    let two = OIdeal::principal(&k, &k.int(2)).unwrap();
    let ten = OIdeal::principal(&k, &k.int(10)).unwrap();
    let u = series(&k, &["1", "1"]);
    assert!(unit_split_trunc(&u, &two, &ten, &r, 1).is_err());
    let u = series(&k, &["2", "1"]);
    let five = OIdeal::principal(&k, &k.int(5)).unwrap();
    assert!(matches!(unit_split_trunc(&u, &two, &five, &r, 1), Err(Error::Domain(_))));
}

#[test]
fn json_renderings_are_stable() {
    let c = cubic();
    let f = series(&c.k, &["6-12a+3a^2", "1-2a-4a^2"]);
    let a = irreducibility_cert_deg1(&f, &c.r).unwrap().to_json().to_string();
    let b = irreducibility_cert_deg1(&f, &c.r).unwrap().to_json().to_string();
    assert_eq!(a, b);
}

/// An order Z + mO̅ with conductor split into coprime parts J₁J₂ such that
/// every unit of O̅ splits as a constant (true when R is associated, and
/// for some non-associated orders such as Z[10√2]).
fn split_setup(k: &Arc<Field>) -> (OrderRing, OIdeal, OIdeal) {
    for m in [6i64, 10, 12, 14, 15, 7, 13] {
        let r = OrderRing::z_plus(k, m).unwrap();
        let fac = r.conductor().factorization().unwrap().to_vec();
        let p0 = fac[0].0.clone();
        let mut j1 = OIdeal::unit(k);
        let mut j2 = OIdeal::unit(k);
        for (p, e) in fac {
            let part = OIdeal::from_prime(k, &p).pow(e);
            if p == p0 {
                j1 = j1.mul(&part);
            } else {
                j2 = j2.mul(&part);
            }
        }
        let reps = orderlab::units::coset_reps(&r).unwrap().reps;
        if reps.iter().all(|u| unit_split_trunc(&TruncSeries::constant(u, 0), &j1, &j2, &r, 0).is_ok()) {
            return (r, j1, j2);
        }
    }
    panic!("no order with a splitting composite conductor for {}", k.label());
}

fn random_unit_series(k: &Field, a: u64, b: u64, coeffs: &[i64]) -> TruncSeries {
    let zeta = k.torsion_generator();
    let mut u0 = k.pow(zeta, a % k.torsion_order());
    if let Some(e) = k.fundamental_units().first() {
        u0 = k.mul(&u0, &k.pow(e, b));
    }
    let n = k.degree();
    let mut cs = vec![u0];
    for chunk in coeffs.chunks(n) {
        let c: Vec<BigInt> = chunk.iter().map(|&x| BigInt::from(x)).collect();
        cs.push(k.from_obasis(&c));
    }
    TruncSeries::new(cs).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn unit_split_product_identity(a in 0u64..6, b in 0u64..4, coeffs in proptest::collection::vec(-9i64..10, 12)) {
        static SETUPS: OnceLock<Vec<(Arc<Field>, OrderRing, OIdeal, OIdeal)>> = OnceLock::new();
        let setups = SETUPS.get_or_init(|| fields::all().into_iter().map(|k| { let (r, j1, j2) = split_setup(&k); (k, r, j1, j2) }).collect());
        for (k, r, j1, j2) in setups {
            let n = k.degree();
            let u = random_unit_series(k, a, b, &coeffs[..3 * n]);
            let s = unit_split_trunc(&u, j1, j2, r, 3).unwrap();
            prop_assert_eq!(ts_mul(k, &s.v1, &s.v2), u);
            prop_assert!(s.v1.in_lattice(s.order1.lattice()));
            prop_assert!(s.v2.in_lattice(s.order2.lattice()));
        }
    }

    #[test]
    fn ts_ring_laws(xs in proptest::collection::vec(-20i64..20, 27)) {
        let k = fields::cubic();
        let mk = |o: usize| TruncSeries::new((0..3).map(|i| parse_element(&k, &format!("{},{},{}", xs[o + 3 * i], xs[o + 3 * i + 1], xs[o + 3 * i + 2])).unwrap()).collect()).unwrap();
        let (a, b, c) = (mk(0), mk(9), mk(18));
        prop_assert_eq!(ts_mul(&k, &a, &b), ts_mul(&k, &b, &a));
        prop_assert_eq!(ts_mul(&k, &ts_mul(&k, &a, &b), &c), ts_mul(&k, &a, &ts_mul(&k, &b, &c)));
        prop_assert_eq!(ts_mul(&k, &a, &ts_add(&b, &c)), ts_add(&ts_mul(&k, &a, &b), &ts_mul(&k, &a, &c)));
    }

    #[test]
    fn unit_inverse_is_two_sided(e in -3i64..4, xs in proptest::collection::vec(-20i64..20, 9)) {
        let k = fields::q_sqrt2();
        let o = OrderRing::maximal(&k);
        let u0 = k.pow_signed(&k.fundamental_units()[0], e).unwrap();
        let mut cs = vec![u0];
        for i in 0..4 {
            cs.push(parse_element(&k, &format!("{},{}", xs[2 * i], xs[2 * i + 1])).unwrap());
        }
        let a = TruncSeries::new(cs).unwrap();
        let inv = ts_unit_inverse(&k, &a, &o).unwrap();
        let one = TruncSeries::constant(&k.one(), 4);
        prop_assert_eq!(ts_mul(&k, &a, &inv), one.clone());
        prop_assert_eq!(ts_mul(&k, &inv, &a), one);
    }

    #[test]
    fn products_never_certified_irreducible_over_maximal_order(
        g0 in 2i64..6, g1 in -5i64..6, h0 in 2i64..6, h1 in -5i64..6, s in 0i64..2, t in -3i64..4,
    ) {
        let k = fields::q_sqrt2();
        let o = OrderRing::maximal(&k);
        let g = TruncSeries::new(vec![parse_element(&k, &format!("{g0},{s}")).unwrap(), parse_element(&k, &format!("{g1},1")).unwrap()]).unwrap();
        let h = TruncSeries::new(vec![parse_element(&k, &format!("{h0},0")).unwrap(), parse_element(&k, &format!("{t},{h1}")).unwrap()]).unwrap();
        prop_assume!(!o.is_unit(g.coeff(0)) && !o.is_unit(h.coeff(0)));
        let f = ts_mul(&k, &g, &h);
        let cert = irreducibility_cert_deg1(&f, &o).unwrap();
        prop_assert_eq!(cert.verdict, Deg1Verdict::Inconclusive);
    }
}
