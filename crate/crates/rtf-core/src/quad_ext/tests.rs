use super::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn fld(q: u32) -> Arc<FqField> {
    Arc::new(FqField::from_order(q).unwrap())
}

fn all_exts() -> Vec<QuadExt> {
    let mut v = Vec::new();
    for q in [2, 3, 4, 5, 9] {
        let f = fld(q);
        v.push(QuadExt::new(&f, Flavor::Split).unwrap());
        v.push(QuadExt::new(&f, Flavor::Unramified).unwrap());
        if q % 2 == 1 {
            v.push(QuadExt::new(&f, Flavor::Ramified { u: 1 }).unwrap());
            v.push(QuadExt::new(&f, Flavor::Ramified { u: f.generator() }).unwrap());
        }
    }
    v
}

#[test]
fn conjugation_norm_trace_laws() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for e in all_exts() {
        for _ in 0..20 {
            let a = e.sample(&mut rng, 1, 4);
            let b = e.sample(&mut rng, -2, 3);
            assert_eq!(e.conj(&e.conj(&a)), a);
            let nab = e.norm(&e.mul(&a, &b));
            assert_eq!(nab, e.norm(&a).mul(&e.norm(&b)), "{}", e.flavor());
            assert_eq!(e.trace(&e.add(&a, &b)), e.trace(&a).add(&e.trace(&b)));
            // conjugation is multiplicative and fixes F
            assert_eq!(e.conj(&e.mul(&a, &b)), e.mul(&e.conj(&a), &e.conj(&b)));
            let x = e.norm(&a);
            assert_eq!(e.conj(&e.embed(&x)), e.embed(&x));
            assert_eq!(e.to_f(&e.embed(&x)).unwrap(), x);
            // tr and nm are conjugation invariant
            assert_eq!(e.trace_norm(&e.conj(&a)), e.trace_norm(&a));
        }
    }
}

#[test]
fn coords_roundtrip() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for e in all_exts() {
        for _ in 0..10 {
            let a = e.sample(&mut rng, 0, 3);
            let (c0, c1) = e.coords(&a);
            assert_eq!(e.from_coords(&c0, &c1), a, "{}", e.flavor());
        }
    }
}

#[test]
fn split_trace_norm() {
    let f = fld(3);
    let e = QuadExt::new(&f, Flavor::Split).unwrap();
    let a = LocalElem::parse(&f, "1 + t").unwrap();
    let b = LocalElem::parse(&f, "t^2").unwrap();
    let (tr, nm) = e.trace_norm(&ExtElem::Pair(a.clone(), b.clone()));
    assert_eq!(tr, a.add(&b));
    assert_eq!(nm, a.mul(&b));
}

#[test]
fn char2_trace_norm_in_artin_schreier_basis() {
    for q in [2, 4, 8] {
        let f = fld(q);
        let e = QuadExt::new(&f, Flavor::Unramified).unwrap();
        let tau = LocalElem::monomial(&f, e.datum(), 0);
        let mut rng = ChaCha8Rng::seed_from_u64(q as u64);
        for _ in 0..20 {
            let a = random_elem(&f, &mut rng, -1, 3);
            let b = random_elem(&f, &mut rng, 1, 3);
            let y = e.from_coords(&a, &b);
            let (tr, nm) = e.trace_norm(&y);
            assert_eq!(tr, b);
            assert_eq!(nm, a.mul(&a).add(&a.mul(&b)).add(&b.mul(&b).mul(&tau)));
        }
    }
}

#[test]
fn odd_unramified_trace_norm() {
    for q in [3, 5, 9] {
        let f = fld(q);
        let e = QuadExt::new(&f, Flavor::Unramified).unwrap();
        let u = LocalElem::monomial(&f, e.datum(), 0);
        let two = LocalElem::from_int(&f, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(q as u64);
        for _ in 0..20 {
            let a = random_elem(&f, &mut rng, 0, 3);
            let b = random_elem(&f, &mut rng, 2, 2);
            let (tr, nm) = e.trace_norm(&e.from_coords(&a, &b));
            assert_eq!(tr, two.mul(&a));
            assert_eq!(nm, a.mul(&a).sub(&u.mul(&b).mul(&b)));
        }
    }
}

#[test]
fn char2_norm_valuation_law() {
    for q in [2, 4] {
        let f = fld(q);
        let e = QuadExt::new(&f, Flavor::Unramified).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        use rand::RngExt;
        for _ in 0..200 {
            let (va, vb) = (rng.random_range(-4..5), rng.random_range(-4..5));
            let a = random_elem(&f, &mut rng, va, 3);
            let b = random_elem(&f, &mut rng, vb, 3);
            let x = e.norm(&e.from_coords(&a, &b));
            let v = x.v().unwrap();
            assert_eq!(v, (2 * va).min(2 * vb));
            assert_eq!(v % 2, 0);
        }
    }
}

#[test]
fn membership_examples() {
    let f = fld(3);
    let e = QuadExt::new(&f, Flavor::Unramified).unwrap();
    assert!(e
        .norm_membership(&LocalElem::parse(&f, "t^2").unwrap())
        .unwrap());
    assert!(!e
        .norm_membership(&LocalElem::parse(&f, "t").unwrap())
        .unwrap());
    assert_eq!(e.eta(&LocalElem::parse(&f, "t").unwrap()).unwrap(), -1);
    assert_eq!(e.eta(&LocalElem::parse(&f, "1 - t").unwrap()).unwrap(), 1);

    // ramified over F_3 with s^2 = t: residues of unit norms are the squares
    let r = QuadExt::new(&f, Flavor::Ramified { u: 1 }).unwrap();
    let mut residues = std::collections::BTreeSet::new();
    for y in r.shell_reps(0, 2).unwrap() {
        residues.insert(r.norm(&y).leading().unwrap());
    }
    assert_eq!(residues.into_iter().collect::<Vec<_>>(), vec![1]);
    let nonsq = LocalElem::from_int(&f, 2);
    assert!(!r.norm_membership(&nonsq).unwrap());
    assert_eq!(r.eta(&nonsq).unwrap(), -1);
    // eta(u t^0) equals the Legendre symbol of u
    let ru = QuadExt::new(&f, Flavor::Ramified { u: 2 }).unwrap();
    assert_eq!(ru.eta(&LocalElem::from_int(&f, 2)).unwrap(), f.legendre(2));
    assert_eq!(
        ru.eta(&LocalElem::from_int(&f, 2)).unwrap() == 1,
        ru.norm_membership(&LocalElem::from_int(&f, 2)).unwrap()
    );
}

#[test]
fn eta_is_a_quadratic_character_matching_norms() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    use rand::RngExt;
    for e in all_exts() {
        let f = e.base().clone();
        let mut classes = std::collections::BTreeSet::new();
        for _ in 0..30 {
            let (vx, vy, vz) = (
                rng.random_range(-3..4),
                rng.random_range(-3..4),
                rng.random_range(-2..3),
            );
            let x = random_elem(&f, &mut rng, vx, 4);
            let y = random_elem(&f, &mut rng, vy, 4);
            let (ex, ey) = (e.eta(&x).unwrap(), e.eta(&y).unwrap());
            assert_eq!(e.eta(&x.mul(&y)).unwrap(), ex * ey);
            assert_eq!(ex * ex, 1);
            assert_eq!(ex == 1, e.norm_membership(&x).unwrap());
            classes.insert(ex);
            // norms of random elements are norms
            let z = e.sample(&mut rng, vz, 3);
            assert_eq!(e.eta(&e.norm(&z)).unwrap(), 1);
        }
        let expect = if e.flavor() == Flavor::Split { 1 } else { 2 };
        assert_eq!(classes.len(), expect, "{}", e.flavor());
    }
}

#[test]
fn norm_preimage_is_accurate() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for e in all_exts() {
        let f = e.base().clone();
        for v in [-2, 0, 2, 4] {
            for _ in 0..5 {
                let x = e.norm(&e.sample(&mut rng, v / 2, 4));
                let y = e.norm_preimage(&x, 6).unwrap().unwrap();
                let ratio = e.norm(&y).div(&x).unwrap().sub(&LocalElem::one(&f));
                assert!(
                    ratio.eq_mod(&LocalElem::zero(&f), 6),
                    "{} x={x}",
                    e.flavor()
                );
            }
        }
    }
}

#[test]
fn norm_precision_stability() {
    let f = fld(5);
    let e = QuadExt::new(&f, Flavor::Unramified).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..10 {
        let y = e.sample(&mut rng, 0, 8);
        let ExtElem::Field(inner) = &y else {
            unreachable!()
        };
        let lo = e.norm(&ExtElem::Field(inner.truncate(4)));
        let hi = e.norm(&ExtElem::Field(inner.truncate(6)));
        assert_eq!(lo.prec(), Some(4));
        assert!(lo.eq_mod(&hi, 4));
    }
}

#[test]
fn artin_schreier_datum_is_irreducible() {
    for q in [2, 4, 8, 16] {
        let f = fld(q);
        let e = QuadExt::new(&f, Flavor::Unramified).unwrap();
        let tau = e.datum();
        assert!(f.elements().all(|x| f.add(f.add(f.mul(x, x), x), tau) != 0));
    }
}
