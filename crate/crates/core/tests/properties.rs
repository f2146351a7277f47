use std::sync::OnceLock;

use num_integer::Integer;
use orderlab::corpus::{self, CorpusEntry};
use orderlab::fields;
use orderlab::ideal::OIdeal;
use orderlab::order::{intermediate_order, OrderRing};
use orderlab::props::{check_inheritance_all, class_number_of_order, property_report, PropertyReport};
use orderlab::units::unit_index;

fn corpus_reports() -> &'static Vec<(CorpusEntry, PropertyReport)> {
    static C: OnceLock<Vec<(CorpusEntry, PropertyReport)>> = OnceLock::new();
    C.get_or_init(|| {
        corpus::default_corpus()
            .unwrap()
            .into_iter()
            .map(|e| {
                let r = property_report(&e.order).unwrap_or_else(|err| panic!("{}: {err}", e.name));
                (e, r)
            })
            .collect()
    })
}

#[test]
fn corpus_is_broad_enough() {
    let c = corpus_reports();
    assert!(c.len() >= 20);
    for k in fields::all() {
        assert!(c.iter().filter(|(e, _)| e.field().label() == k.label()).count() >= 5);
    }
}

#[test]
fn associated_orders_are_ideal_preserving_and_locally_associated() {
    for (e, r) in corpus_reports() {
        if r.associated.holds {
            assert!(r.ideal_preserving.holds && r.locally_associated.holds, "{}", e.name);
        }
    }
}

#[test]
fn radical_conductor_equivalence() {
    let mut radical = 0;
    for (e, r) in corpus_reports() {
        if r.conductor_radical {
            radical += 1;
            assert_eq!(r.associated.holds, r.ideal_preserving.holds && r.locally_associated.holds, "{}", e.name);
        }
    }
    assert!(radical >= 10);
}

#[test]
fn open_case_candidates_are_reported() {
    let open: Vec<&str> = corpus_reports().iter().filter(|(_, r)| r.open_case_candidate).map(|(e, _)| e.name.as_str()).collect();
    println!("ideal-preserving, locally associated, not associated: {open:?}");
    for (_, r) in corpus_reports() {
        assert_eq!(r.open_case_candidate, r.ideal_preserving.holds && r.locally_associated.holds && !r.associated.holds);
    }
}

#[test]
fn conductor_of_extension_and_intersections() {
    for (e, rep) in corpus_reports() {
        if !rep.ideal_preserving.holds {
            continue;
        }
        let r = &e.order;
        let i = r.conductor();
        let divs = i.divisors().unwrap();
        let exts: Vec<OrderRing> = divs.iter().map(|j| intermediate_order(r, j).unwrap()).collect();
        for (j, t) in divs.iter().zip(&exts) {
            assert_eq!(t.conductor(), &i.sum(j), "{}", e.name);
        }
        for (a, ta) in divs.iter().zip(&exts) {
            for (b, tb) in divs.iter().zip(&exts) {
                let meet = ta.lattice().intersect(tb.lattice());
                let expected = r.lattice().sum(a.intersect(b).lattice());
                assert_eq!(meet, expected, "{}", e.name);
            }
        }
    }
}

#[test]
fn inheritance_and_class_number_monotonicity() {
    for (e, rep) in corpus_reports() {
        let r = &e.order;
        let divs = r.conductor().divisors().unwrap();
        let reports = check_inheritance_all(r, &divs).unwrap_or_else(|err| panic!("{}: {err}", e.name));
        assert_eq!(reports.len(), divs.len());
        let h_r = rep.locally_associated.quadruple.class_number;
        let h = r.field().class_number();
        let u_r = unit_index(r).unwrap();
        for j in &divs {
            let t = intermediate_order(r, j).unwrap();
            let h_t = class_number_of_order(&t).unwrap();
            assert!(h_r >= h_t && h_t >= h, "{}: {h_r} ≥ {h_t} ≥ {h}", e.name);
            let u_t = unit_index(&t).unwrap();
            assert_eq!(u_r % u_t, 0, "{}", e.name);
        }
    }
}

#[test]
fn z_10sqrt2_over_all_divisors() {
    let k = fields::q_sqrt2();
    let r = OrderRing::z_plus(&k, 10).unwrap();
    let divs = r.conductor().divisors().unwrap();
    assert_eq!(divs.len(), 6);
    check_inheritance_all(&r, &divs).unwrap();
}

#[test]
fn locally_associated_orders_keep_the_class_number() {
    for (e, rep) in corpus_reports() {
        let q = &rep.locally_associated.quadruple;
        if rep.locally_associated.holds {
            assert_eq!(q.class_number, e.field().class_number(), "{}", e.name);
        }
    }
    let k = fields::q_sqrt2();
    assert_eq!(class_number_of_order(&OrderRing::z_plus(&k, 5).unwrap()).unwrap(), 2);
}

/// Reduced primitive forms ax² + bxy + cy² of discriminant d < 0.
fn forms_class_number(d: i64) -> u64 {
    let mut h = 0;
    let mut a = 1;
    while 3 * a * a <= -d {
        for b in -a + 1..=a {
            let num = b * b - d;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c < a || (c == a && b < 0) {
                continue;
            }
            if a.gcd(&b).gcd(&c) == 1 {
                h += 1;
            }
        }
        a += 1;
    }
    h
}

#[test]
fn imaginary_quadratic_class_numbers_match_form_counts() {
    let k = fields::q_sqrt_minus3();
    assert_eq!(forms_class_number(-3), 1);
    assert_eq!(forms_class_number(-23), 3);
    for f in 2..=12i64 {
        let r = OrderRing::z_plus(&k, f).unwrap();
        assert_eq!(class_number_of_order(&r).unwrap(), forms_class_number(-3 * f * f), "f = {f}");
    }
}

fn kronecker_8(p: i64) -> i64 {
    match p % 8 {
        0 | 2 | 4 | 6 => 0,
        1 | 7 => 1,
        _ => -1,
    }
}

/// h(Z + fO̅) in Q(√2) from h·f·Π(1 − (8/p)/p) / [U(O̅):U(R)], the unit
/// index found on ε^k = x + y√2 with f | y.
fn real_order_class_number(f: i64) -> u64 {
    let (mut x, mut y) = (1i64, 1i64);
    let mut k = 1;
    while y % f != 0 {
        (x, y) = (x + 2 * y, x + y);
        k += 1;
    }
    let (mut num, mut den) = (f, 1i64);
    let mut m = f;
    let mut p = 2;
    while m > 1 {
        if m % p == 0 {
            num *= p - kronecker_8(p);
            den *= p;
            while m % p == 0 {
                m /= p;
            }
        }
        p += 1;
    }
    assert_eq!(num % (den * k), 0);
    (num / (den * k)) as u64
}

#[test]
fn real_quadratic_class_numbers_match_closed_form() {
    let k = fields::q_sqrt2();
    for f in 2..=12i64 {
        let r = OrderRing::z_plus(&k, f).unwrap();
        assert_eq!(class_number_of_order(&r).unwrap(), real_order_class_number(f), "f = {f}");
    }
}

#[test]
fn cubic_named_orders_in_corpus() {
    let c = fields::cubic();
    let p = corpus::cubic_prime(&c).unwrap();
    let names: Vec<String> = corpus::named().unwrap().into_iter().map(|e| e.name).collect();
    assert_eq!(names.len(), 5);
    let gamma = orderlab::expr::parse_element(&c, "2-4a+a^2").unwrap();
    assert_eq!(p.pow(2), OIdeal::principal(&c, &gamma).unwrap());
}
