use num_bigint::BigInt;
use orderlab::expr::parse_element;
use orderlab::fields;
use orderlab::ideal::{split_prime, OIdeal};
use orderlab::order::{intermediate_order, OrderRing};
use orderlab::props::{is_associated, is_ideal_preserving, is_locally_associated, IdealPreservingWitness};
use orderlab::quotient::FiniteQuotient;
use orderlab::units::{coset_reps, unit_index};
use orderlab::ZLattice;

#[test]
fn z_5sqrt2_numbers() {
    let k = fields::q_sqrt2();
    let r = OrderRing::z_plus(&k, 5).unwrap();
    let five = OIdeal::principal(&k, &k.int(5)).unwrap();
    assert_eq!(r.conductor(), &five);
    assert_eq!(unit_index(&r).unwrap(), 3);
    let la = is_locally_associated(&r).unwrap();
    assert!(!la.holds);
    assert_eq!(la.quadruple.units_maximal_mod_conductor, 24);
    assert_eq!(la.quadruple.units_order_mod_conductor, 4);
    assert_eq!(la.quadruple.class_number, 2);
    assert!(is_ideal_preserving(&r).unwrap().holds);
    assert!(!is_associated(&r).unwrap().holds);
    let reps = coset_reps(&r).unwrap();
    assert_eq!(reps.reps.len(), 3);
    assert_eq!(reps.with_torsion(&r).len(), 6);
}

#[test]
fn z_2sqrt2_numbers() {
    let k = fields::q_sqrt2();
    let r = OrderRing::z_plus(&k, 2).unwrap();
    let ip = is_ideal_preserving(&r).unwrap();
    assert!(!ip.holds);
    match ip.witness.unwrap() {
        IdealPreservingWitness::Square { p } => assert_eq!(p.p, 2),
        other => panic!("unexpected witness {other:?}"),
    }
    let la = is_locally_associated(&r).unwrap();
    assert!(la.holds);
    assert_eq!(la.quadruple.units_maximal_mod_conductor, 2);
    assert_eq!(la.quadruple.unit_index, 2);
}

#[test]
fn cubic_example_orders() {
    let k = fields::cubic();
    let primes = split_prime(&k, 3).unwrap();
    assert_eq!(primes.len(), 2);
    assert_eq!(primes[0].generator.to_string(), "1+a");
    assert_eq!(primes[1].generator.to_string(), "2+2a+a^2");
    let p = OIdeal::from_prime(&k, &primes[1]);
    let i = p.pow(2);
    let gamma = parse_element(&k, "2-4a+a^2").unwrap();
    assert_eq!(i, OIdeal::principal(&k, &gamma).unwrap());
    let r = OrderRing::z_plus_ideal(&k, &i).unwrap();
    let expected = ZLattice::from_generators(&[k.int(1), parse_element(&k, "9a").unwrap(), gamma.clone()]).unwrap();
    assert_eq!(r.lattice(), &expected);
    assert_eq!(r.conductor(), &i);
    assert_eq!(r.index_in_maximal(), BigInt::from(9));
    let r1 = intermediate_order(&r, &p).unwrap();
    let expected1 = ZLattice::from_generators(&[k.int(1), parse_element(&k, "3a").unwrap(), gamma]).unwrap();
    assert_eq!(r1.lattice(), &expected1);
    assert_eq!(unit_index(&r).unwrap(), 12);
    assert_eq!(unit_index(&r1).unwrap(), 4);
    assert!(is_associated(&r).unwrap().holds);
    let q = FiniteQuotient::maximal_mod(&k, &p).unwrap();
    assert_eq!(q.size(), &BigInt::from(9));
}
