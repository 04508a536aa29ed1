//! Acceptance suite: eight exact checks, one PASS/FAIL line each, with a
//! wall-time budget per check. Exits nonzero if any check fails.
//!
//! Closed-form oracles are written out here independently of the library's
//! verifiers; the verifiers add the second (G-side or direct-sum) route.

use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rtf_lab::base_arith::fq::FqField;
use rtf_lab::base_arith::laurent::LocalElem;
use rtf_lab::base_arith::measure::MeasureContext;
use rtf_lab::base_arith::scalar::{LogValue, XiPoly, Q};
use rtf_lab::fl_suite::{
    arith_orbital_i, fl_g_side, verify_afl, verify_fl, verify_gauss_laws, verify_minf,
    verify_split_matching, SuiteOptions, VerificationReport,
};
use rtf_lab::orbit_geometry::{HermMat, QuatElem, SingularClass};
use rtf_lab::orbital_engine::g_side::DELTA_DEPTH;
use rtf_lab::orbital_engine::{
    eval_orbital_g, eval_orbital_g_at_x, eval_orbital_s, eval_orbital_s_at, EngineConfig,
    OrbitalValue, TestFnG, TestFnS,
};
use rtf_lab::quad_ext::{random_elem, ExtElem, Flavor, QuadExt};

type Outcome = Result<usize, String>;

struct Criterion {
    id: u32,
    name: &'static str,
    budget: Duration,
    run: fn() -> Outcome,
}

/// Counts exact comparisons and keeps the first few mismatches.
#[derive(Default)]
struct Tally {
    checked: usize,
    failures: Vec<String>,
}

impl Tally {
    fn eq<T: PartialEq + std::fmt::Display>(
        &mut self,
        what: impl FnOnce() -> String,
        got: &T,
        want: &T,
    ) {
        self.checked += 1;
        if got != want && self.failures.len() < 5 {
            self.failures
                .push(format!("{}: got {got}, want {want}", what()));
        }
    }

    fn holds(&mut self, what: impl FnOnce() -> String, ok: bool) {
        self.eq(what, &ok, &true);
    }

    fn report(&mut self, r: &VerificationReport) {
        self.checked += r.cases.len();
        if r.cases.is_empty() {
            self.failures
                .push(format!("suite {} produced no cases", r.suite));
        }
        for c in r.failures().take(5) {
            self.failures.push(format!(
                "[{}] {}",
                c.label,
                c.witness.clone().unwrap_or_default()
            ));
        }
    }

    fn finish(self) -> Outcome {
        if self.failures.is_empty() {
            Ok(self.checked)
        } else {
            Err(self.failures.join("; "))
        }
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn field(q: u32) -> Arc<FqField> {
    Arc::new(FqField::from_order(q).expect("prime power"))
}

fn ext(q: u32, flavor: Flavor) -> (QuadExt, MeasureContext) {
    let e = QuadExt::new(&field(q), flavor).expect("extension");
    let ctx = MeasureContext::new(q, 0, e.shape());
    (e, ctx)
}

fn xi(q: u32, k: i64) -> XiPoly {
    XiPoly::xi_pow(q, k)
}

/// Exact x with v(x) = v, x != 1; at v = 0 every other sample is 1 + t^j u.
fn sample_x(f: &Arc<FqField>, rng: &mut ChaCha8Rng, v: i64, i: usize) -> LocalElem {
    let one = LocalElem::one(f);
    loop {
        let x = if v == 0 && (f.q() == 2 || i % 2 == 1) {
            let j = rng.random_range(1..4);
            one.add(&random_elem(f, rng, j, 2))
        } else {
            random_elem(f, rng, v, 3)
        };
        let d = x.sub(&one);
        if d.is_zero() || (v == 0 && f.q() > 2 && i.is_multiple_of(2) && d.v().unwrap() != 0) {
            continue;
        }
        return x;
    }
}

// ---------------------------------------------------------------------------
// 1, 2: fundamental lemma

/// The tabulated value of the S-side integral of 1_{integral, v(det) = m}
/// for E/F unramified. m = 0 is 1_{K n S}.
fn fl_oracle(q: u32, m: i64, x: &LocalElem) -> XiPoly {
    let v = x.v().unwrap();
    let v1 = x.sub(&LocalElem::one(x.field())).v().unwrap();
    // off Nm(E^x), and off G w (1 - x not a norm), the integral vanishes
    if v % 2 != 0 {
        return XiPoly::zero(q);
    }
    match (m, v) {
        (0, v) if v > 0 => XiPoly::one(q),
        (0, v) if v < 0 => xi(q, -v / 2),
        (0, _) => {
            if v1 == 0 {
                XiPoly::one(q)
            } else {
                XiPoly::zero(q)
            }
        }
        (m, v) if v > 0 => xi(q, m / 2),
        (m, v) if v < 0 => xi(q, (m - v) / 2),
        // 2 (v(z) + v_E(a)) = m - v(1 - x) must be even and nonnegative
        (m, _) => {
            if v1 % 2 != 0 || v1 > m {
                XiPoly::zero(q)
            } else {
                xi(q, (m - v1) / 2)
            }
        }
    }
}

fn fundamental_lemma(qs: &[u32]) -> Outcome {
    let ms = [0, 2, 4];
    let vs: Vec<i64> = (-6..=6).collect();
    let opts = SuiteOptions::default();
    let mut t = Tally::default();
    for &q in qs {
        t.report(&verify_fl(q, &ms, &vs, &opts).map_err(err)?);
        let (e, ctx) = ext(q, Flavor::Unramified);
        let f = e.base().clone();
        let cfg = EngineConfig::default();
        let mut rng = ChaCha8Rng::seed_from_u64(100 + q as u64);
        for &m in &ms {
            for &v in &vs {
                for i in 0..3 {
                    let x = sample_x(&f, &mut rng, v, i);
                    let want = fl_oracle(q, m, &x);
                    let s = eval_orbital_s(&e, &ctx, &TestFnS::IntegralDetM(m), &x, &cfg)
                        .map_err(err)?
                        .value_at_zero();
                    t.eq(|| format!("S q={q} m={m} x={x}"), &s, &want);
                    if v % 2 == 0 {
                        let g = fl_g_side(&e, &ctx, m, &x, &cfg).map_err(err)?;
                        t.eq(|| format!("G q={q} m={m} x={x}"), &g, &want);
                    }
                }
            }
        }
    }
    t.finish()
}

fn c1() -> Outcome {
    fundamental_lemma(&[3, 5])
}

fn c2() -> Outcome {
    fundamental_lemma(&[2, 4])
}

// ---------------------------------------------------------------------------
// 3: arithmetic fundamental lemma

/// O'(0, x, 1_{integral, v(det) = m}) = xi^{m/2} (v + m + 1)/2 (-log q^2)
/// for v(x) > 0 and 0 for v(x) < 0.
fn afl_oracle(q: u32, m: i64, v: i64) -> LogValue {
    if v < 0 {
        return LogValue::new(XiPoly::zero(q), 2);
    }
    LogValue::new(xi(q, m / 2).scale(Q::new((v + m + 1) as i128, 2)), 2)
}

fn c3() -> Outcome {
    let ms = [0, 2];
    let vs = [-3, -1, 1, 3, 5];
    let opts = SuiteOptions::default();
    let mut t = Tally::default();
    for q in [3, 5] {
        t.report(&verify_afl(q, &ms, &vs, &opts).map_err(err)?);
        let (e, ctx) = ext(q, Flavor::Unramified);
        let f = e.base().clone();
        let eps = LocalElem::uniformizer(&f);
        let cfg = EngineConfig::default();
        let mut rng = ChaCha8Rng::seed_from_u64(300 + q as u64);
        for &m in &ms {
            for &v in &vs {
                for i in 0..3 {
                    let x = sample_x(&f, &mut rng, v, i);
                    let want = afl_oracle(q, m, v);
                    let s = eval_orbital_s(&e, &ctx, &TestFnS::IntegralDetM(m), &x, &cfg)
                        .map_err(err)?;
                    t.eq(
                        || format!("O' q={q} m={m} x={x}"),
                        &s.derivative_at_zero(),
                        &want,
                    );
                    let delta = QuatElem::delta(&e, &eps, &x, DELTA_DEPTH)
                        .map_err(err)?
                        .ok_or("x not in t Nm")?;
                    let i_val = arith_orbital_i(&e, &ctx, &delta, &TestFnG::IntegralDetMG(m), &cfg)
                        .map_err(err)?;
                    // 2 i (-log q) against the derivative in -log q^2
                    let lhs = LogValue::new(i_val.scale(Q::from_integer(2)), 1);
                    t.eq(|| format!("2i q={q} m={m} x={x}"), &lhs, &want);
                }
            }
        }
    }
    t.finish()
}

// ---------------------------------------------------------------------------
// 4: explicit smooth-matching values

/// Volumes for the self-dual measures of psi of conductor 0.
struct Vols {
    q: u32,
    e: i64,
    q_e: u32,
    units_e: XiPoly,
    e_mod_f: XiPoly,
}

impl Vols {
    fn new(q: u32, flavor: Flavor) -> Self {
        match flavor {
            // O_E^x has volume 1
            Flavor::Unramified => Vols {
                q,
                e: 1,
                q_e: q * q,
                units_e: XiPoly::one(q),
                e_mod_f: XiPoly::one(q),
            },
            // the different of E/F is p_E, so Vol(O_E^x) = q^{-1/2}; [E^x : F^x O_E^x] = 2
            _ => Vols {
                q,
                e: 2,
                q_e: q,
                units_e: XiPoly::q_half_pow(q, -1),
                e_mod_f: XiPoly::q_half_pow(q, -1).scale(Q::from_integer(2)),
            },
        }
    }

    fn index(q: u32, n: i64) -> Q {
        Q::new(1, (q as i128 - 1) * (q as i128).pow(n as u32 - 1))
    }

    /// Vol^x(1 + p_E^n).
    fn one_units_e(&self, n: i64) -> XiPoly {
        self.units_e.scale(Self::index(self.q_e, n))
    }

    /// Vol^x(1 + p_F^k).
    fn one_units_f(&self, k: i64) -> XiPoly {
        XiPoly::one(self.q).scale(Self::index(self.q, k))
    }
}

/// One eps per class of F^x / Nm(E^x).
fn eps_reps(e: &QuadExt) -> Vec<LocalElem> {
    let f = e.base();
    let mut out = vec![LocalElem::one(f)];
    for s in ["t", "g^1", "g^1*t"] {
        let c = LocalElem::parse(f, s).unwrap();
        if !e.norm_membership(&c).unwrap() {
            out.push(c);
            break;
        }
    }
    out
}

/// The fast route everywhere; the cell-by-cell enumeration as well where
/// it stays cheap (q = 3, or the smallest level).
fn routes(q: u32, level: i64) -> Vec<EngineConfig> {
    let mut out = vec![EngineConfig::default()];
    if q == 3 || level == 1 {
        out.push(EngineConfig::brute());
    }
    out
}

fn c4() -> Outcome {
    let mut t = Tally::default();
    for q in [3, 5] {
        for flavor in [Flavor::Unramified, Flavor::Ramified { u: 1 }] {
            let (e, ctx) = ext(q, flavor);
            let vol = Vols::new(q, flavor);
            let f = e.base().clone();
            let ee = vol.e;
            let grade = if ee == 1 { 2 } else { 1 };
            let mut rng = ChaCha8Rng::seed_from_u64(400 + q as u64 + ee as u64);

            // K_{eps, m}: Vol^x(1 + p_E^m) Vol(E^x / F^x) on v_E(x) >= 2m + v(eps)
            for eps in eps_reps(&e) {
                let veps = eps.v().unwrap();
                for m in [1, 2] {
                    let top = (2 * m + veps) / ee + 2;
                    for vx in -1..=top {
                        for i in 0..3 {
                            let x = sample_x(&f, &mut rng, vx, i);
                            if !e.norm_membership(&x.div(&eps).unwrap()).unwrap() {
                                continue;
                            }
                            let want = if ee * vx >= 2 * m + veps {
                                vol.one_units_e(m).mul(&vol.e_mod_f)
                            } else {
                                XiPoly::zero(q)
                            };
                            for cfg in &routes(q, m) {
                                let got = eval_orbital_g_at_x(
                                    &e,
                                    &ctx,
                                    &TestFnG::KepsM(m),
                                    &eps,
                                    &x,
                                    false,
                                    cfg,
                                )
                                .map_err(err)?;
                                t.eq(
                                    || {
                                        format!(
                                            "K_eps {flavor} q={q} eps={eps} m={m} x={x} {:?}",
                                            cfg.strategy
                                        )
                                    },
                                    &got,
                                    &want,
                                );
                            }
                        }
                    }
                }
            }

            // K_{l, xi, n} and K'_{l, xi, n}: l, n at and above the sufficiency bounds
            // n >= 1 and L - v(tr) >= 1, with tr(p_E^l) = p_F^L
            for vt in [0, 1] {
                let tr = random_elem(&f, &mut rng, vt, 2);
                let vet = ee * vt;
                for k in [1, 2] {
                    let l = ee * (vt + k);
                    for n in [1, 2] {
                        let base = vol.one_units_e(n).mul(&vol.one_units_f(k));
                        let top = vt + (n + ee - 1) / ee + 1;
                        for vx in vt - 1..=top {
                            for i in 0..2 {
                                let x = sample_x(&f, &mut rng, vx, i);
                                let vex = ee * vx;
                                let inside = vex >= n + vet;
                                let sk = e.eta(&x.mul(&tr).neg()).unwrap();
                                let sp = e.eta(&tr.neg()).unwrap();
                                let zero = XiPoly::zero(q);
                                let k_val = if inside {
                                    base.scale(Q::from_integer(sk as i128))
                                } else {
                                    zero.clone()
                                };
                                let kp_val = if inside {
                                    base.scale(Q::from_integer(sp as i128))
                                } else {
                                    zero
                                };
                                // derivatives as coefficients of -log q_E: log|a|_E = -v_E(a) log q_E
                                // with v_E(a) = v_E(tr) - v_E(x) on K and v_E(a) = -v_E(tr) on K'
                                let k_der = LogValue::new(
                                    k_val.scale(Q::from_integer((vet - vex) as i128)),
                                    grade,
                                );
                                let kp_der = LogValue::new(
                                    kp_val.scale(Q::from_integer(-vet as i128)),
                                    grade,
                                );
                                let phis = [
                                    (
                                        TestFnS::KlxiN {
                                            l,
                                            tr_xi: tr.clone(),
                                            n,
                                        },
                                        k_val,
                                        k_der,
                                    ),
                                    (
                                        TestFnS::KlxiNPrime {
                                            l,
                                            tr_xi: tr.clone(),
                                            n,
                                        },
                                        kp_val,
                                        kp_der,
                                    ),
                                ];
                                for (phi, val, der) in &phis {
                                    for cfg in &routes(q, n.max(k)) {
                                        let o: OrbitalValue =
                                            eval_orbital_s(&e, &ctx, phi, &x, cfg).map_err(err)?;
                                        let lab = || {
                                            format!("{phi} {flavor} q={q} x={x} {:?}", cfg.strategy)
                                        };
                                        t.eq(lab, &o.value_at_zero(), val);
                                        t.eq(
                                            || format!("{} derivative", lab()),
                                            &o.derivative_at_zero(),
                                            der,
                                        );
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    t.finish()
}

// ---------------------------------------------------------------------------
// 5, 6, 7: split matching, Gauss sums, the metric at infinity

fn c5() -> Outcome {
    let mut t = Tally::default();
    let r = verify_split_matching(&[2, 3], 60, &SuiteOptions::default()).map_err(err)?;
    t.holds(
        || format!("{} pairs, want at least 100", r.cases.len()),
        r.cases.len() >= 100,
    );
    t.report(&r);
    t.finish()
}

fn c6() -> Outcome {
    let mut t = Tally::default();
    let ns: Vec<i64> = (-5..=5).collect();
    let r =
        verify_gauss_laws(&[3, 5, 9], &[0, 1, 2], &ns, &SuiteOptions::default()).map_err(err)?;
    for law in [
        "direct-sum",
        "support",
        "twist",
        "unramified-value",
        "unramified D",
        "ramified D nonzero",
    ] {
        t.holds(
            || format!("law {law} is exercised"),
            r.cases.iter().any(|c| c.label.contains(law)),
        );
    }
    t.report(&r);
    t.finish()
}

fn c7() -> Outcome {
    let mut t = Tally::default();
    let r = verify_minf(&[2, 3], 100, &SuiteOptions::default()).map_err(err)?;
    t.holds(
        || format!("{} regular delta, want at least 200", r.cases.len()),
        r.cases.len() >= 200,
    );
    t.report(&r);
    t.finish()
}

// ---------------------------------------------------------------------------
// 8: property suites

const FLAVORS: [(u32, Flavor); 7] = [
    (2, Flavor::Unramified),
    (3, Flavor::Unramified),
    (4, Flavor::Unramified),
    (3, Flavor::Ramified { u: 1 }),
    (5, Flavor::Ramified { u: 2 }),
    (3, Flavor::Split),
    (9, Flavor::Unramified),
];

fn runner(cases: u32) -> TestRunner {
    let cfg = Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    };
    TestRunner::new_with_rng(cfg, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

/// Runs a property over (flavor index, seed) pairs.
fn property(
    name: &str,
    cases: u32,
    t: &mut Tally,
    body: impl Fn(&QuadExt, &mut ChaCha8Rng) -> Result<(), TestCaseError>,
) {
    let mut r = runner(cases);
    let res = r.run(&(0..FLAVORS.len(), any::<u64>()), |(i, seed)| {
        let (q, flavor) = FLAVORS[i];
        let e = QuadExt::new(&field(q), flavor).unwrap();
        body(&e, &mut ChaCha8Rng::seed_from_u64(seed))
    });
    t.checked += cases as usize;
    if let Err(e) = res {
        t.failures.push(format!("{name}: {e}"));
    }
}

fn ext_zero(e: &QuadExt, y: &ExtElem) -> bool {
    let (c0, c1) = e.coords(y);
    c0.is_zero() && c1.is_zero()
}

fn ext_sample(e: &QuadExt, rng: &mut ChaCha8Rng) -> ExtElem {
    let v = rng.random_range(-2..3);
    e.sample(rng, v, 3)
}

fn c8() -> Outcome {
    let mut t = Tally::default();

    property("ring axioms", 96, &mut t, |e, rng| {
        let f = e.base();
        let (va, vb, vc) = (
            rng.random_range(-3..4),
            rng.random_range(-3..4),
            rng.random_range(-3..4),
        );
        let (a, b, c) = (
            random_elem(f, rng, va, 4),
            random_elem(f, rng, vb, 4),
            random_elem(f, rng, vc, 4),
        );
        prop_assert!(a.add(&b).add(&c).eq_known(&a.add(&b.add(&c))));
        prop_assert!(a.mul(&b).eq_known(&b.mul(&a)));
        prop_assert!(a.mul(&b.add(&c)).eq_known(&a.mul(&b).add(&a.mul(&c))));
        prop_assert!(a.mul(&b).mul(&c).eq_known(&a.mul(&b.mul(&c))));
        prop_assert!(a.mul(&a.inv().unwrap()).eq_known(&LocalElem::one(f)));
        prop_assert!(a.sub(&a).is_zero());
        let (x, y, z) = (ext_sample(e, rng), ext_sample(e, rng), ext_sample(e, rng));
        prop_assert!(ext_zero(
            e,
            &e.sub(&e.add(&e.add(&x, &y), &z), &e.add(&x, &e.add(&y, &z)))
        ));
        prop_assert!(ext_zero(e, &e.sub(&e.mul(&x, &y), &e.mul(&y, &x))));
        prop_assert!(ext_zero(
            e,
            &e.sub(&e.mul(&e.mul(&x, &y), &z), &e.mul(&x, &e.mul(&y, &z)))
        ));
        prop_assert!(ext_zero(
            e,
            &e.sub(
                &e.mul(&x, &e.add(&y, &z)),
                &e.add(&e.mul(&x, &y), &e.mul(&x, &z))
            )
        ));
        prop_assert!(ext_zero(
            e,
            &e.sub(&e.mul(&x, &e.inv(&x).unwrap()), &e.one())
        ));
        Ok(())
    });

    property("conjugation, norm and trace", 96, &mut t, |e, rng| {
        let (x, y) = (ext_sample(e, rng), ext_sample(e, rng));
        prop_assert!(ext_zero(e, &e.sub(&e.conj(&e.conj(&x)), &x)));
        prop_assert!(ext_zero(
            e,
            &e.sub(&e.conj(&e.mul(&x, &y)), &e.mul(&e.conj(&x), &e.conj(&y)))
        ));
        prop_assert!(ext_zero(
            e,
            &e.sub(&e.mul(&x, &e.conj(&x)), &e.embed(&e.norm(&x)))
        ));
        prop_assert!(ext_zero(
            e,
            &e.sub(&e.add(&x, &e.conj(&x)), &e.embed(&e.trace(&x)))
        ));
        prop_assert!(e
            .norm(&e.mul(&x, &y))
            .sub(&e.norm(&x).mul(&e.norm(&y)))
            .is_zero());
        prop_assert!(e
            .trace(&e.add(&x, &y))
            .sub(&e.trace(&x).add(&e.trace(&y)))
            .is_zero());
        if e.flavor() != Flavor::Split {
            // v(Nm y) = f v_E(y) and Nm y is a norm
            let fdeg = if e.flavor() == Flavor::Unramified {
                2
            } else {
                1
            };
            prop_assert_eq!(e.norm(&x).v().unwrap(), fdeg * e.v_e(&x).unwrap());
            prop_assert_eq!(e.eta(&e.norm(&x)).unwrap(), 1);
        }
        Ok(())
    });

    // x = Nm(a + b theta) has v(x) = min(v(a^2), v(b^2)) in the unramified
    // extension of characteristic 2; in particular v(x) is even
    for q in [2, 4] {
        let e = QuadExt::new(&field(q), Flavor::Unramified).unwrap();
        let mut r = runner(64);
        let res = r.run(&(-4i64..5, -4i64..5, any::<u64>()), |(va, vb, seed)| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let f = e.base();
            let a = random_elem(f, &mut rng, va, 3);
            let b = random_elem(f, &mut rng, vb, 3);
            let x = e.norm(&e.from_coords(&a, &b));
            prop_assert_eq!(x.v().unwrap(), (2 * va).min(2 * vb));
            prop_assert!(e.norm_membership(&x).unwrap());
            Ok(())
        });
        t.checked += 64;
        if let Err(err) = res {
            t.failures
                .push(format!("v(x) in characteristic 2, q={q}: {err}"));
        }
    }

    property("inv is constant on orbits", 96, &mut t, |e, rng| {
        if e.flavor() == Flavor::Split {
            return Ok(());
        }
        let f = e.base();
        let eps = LocalElem::uniformizer(f);
        let (va, vb) = (rng.random_range(-2..3), rng.random_range(-2..3));
        let delta = QuatElem::new(e.sample(rng, va, 3), e.sample(rng, vb, 3), eps);
        prop_assume!(delta.singular_class(e) == SingularClass::Regular);
        let (h1, h2) = (ext_sample(e, rng), ext_sample(e, rng));
        let moved = delta.torus_action(e, &h1, &h2).unwrap();
        prop_assert!(moved.inv(e).unwrap().eq_known(&delta.inv(e).unwrap()));
        let vx = rng.random_range(-3..4);
        let x = sample_x(f, rng, vx, 0);
        let s = HermMat::gamma(e, &x);
        let vz = rng.random_range(-2..3);
        let z = random_elem(f, rng, vz, 3);
        let s2 = s.torus_act(e, &h1, &z);
        prop_assert!(s2.inv(e).unwrap().eq_known(&s.inv(e).unwrap()));
        Ok(())
    });

    // orbital values at another representative of the orbit of gamma(x)
    {
        let mut r = runner(24);
        let res = r.run(&(0usize..3, -3i64..4, any::<u64>()), |(i, v, seed)| {
            let (q, flavor) = [
                (3, Flavor::Unramified),
                (2, Flavor::Unramified),
                (3, Flavor::Ramified { u: 1 }),
            ][i];
            let (e, ctx) = ext(q, flavor);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let f = e.base().clone();
            let x = sample_x(&f, &mut rng, v, 0);
            let a = e.sample(&mut rng, 0, 3);
            let z = random_elem(&f, &mut rng, 0, 3);
            let s0 = HermMat::gamma(&e, &x).torus_act(&e, &a, &z);
            let cfg = EngineConfig::brute();
            for phi in [TestFnS::KcapS, TestFnS::IntegralDetM(2)] {
                let base = eval_orbital_s(&e, &ctx, &phi, &x, &cfg).unwrap();
                prop_assert_eq!(eval_orbital_s_at(&e, &ctx, &phi, &s0, &cfg).unwrap(), base);
            }
            Ok(())
        });
        t.checked += 24;
        if let Err(err) = res {
            t.failures.push(format!("orbit representatives: {err}"));
        }
    }

    // delta(x) = 1 + b j is fixed only up to b -> b u with Nm(u) = 1
    {
        let mut r = runner(24);
        let res = r.run(&(0usize..3, any::<u64>()), |(i, seed)| {
            let (q, flavor) = [
                (3, Flavor::Unramified),
                (4, Flavor::Unramified),
                (3, Flavor::Ramified { u: 1 }),
            ][i];
            let (e, ctx) = ext(q, flavor);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let one = LocalElem::one(e.base());
            let vb = rng.random_range(-2..3);
            let b = e.sample(&mut rng, vb, 3);
            let w = e.sample(&mut rng, 0, 3);
            let u = e.div(&e.conj(&w), &w).unwrap();
            let d1 = QuatElem::delta_from_b(&e, &one, &b);
            let d2 = QuatElem::delta_from_b(&e, &one, &e.mul(&b, &u));
            prop_assume!(d1.singular_class(&e) == SingularClass::Regular);
            let mut fs = vec![TestFnG::KepsM(0), TestFnG::KepsM(1)];
            if flavor == Flavor::Unramified {
                fs.extend([TestFnG::Cm(0), TestFnG::Cm(2), TestFnG::IntegralDetMG(2)]);
            }
            let cfg = EngineConfig::brute();
            for g in fs {
                let a = eval_orbital_g(&e, &ctx, &g, &d1, false, &cfg).unwrap();
                prop_assert_eq!(&a, &eval_orbital_g(&e, &ctx, &g, &d2, false, &cfg).unwrap());
            }
            Ok(())
        });
        t.checked += 24;
        if let Err(err) = res {
            t.failures.push(format!("choice of delta(x): {err}"));
        }
    }

    // enumeration depth N against N + 2
    {
        let mut r = runner(16);
        let res = r.run(&(0usize..3, -2i64..4, any::<u64>()), |(i, v, seed)| {
            let (q, flavor) = [
                (3, Flavor::Unramified),
                (2, Flavor::Unramified),
                (3, Flavor::Ramified { u: 1 }),
            ][i];
            let (e, ctx) = ext(q, flavor);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let f = e.base().clone();
            let x = sample_x(&f, &mut rng, v, 0);
            let shallow = EngineConfig::brute();
            let deep = EngineConfig {
                depth_margin: 2,
                ..EngineConfig::brute()
            };
            let phi = TestFnS::IntegralDetM(2);
            prop_assert_eq!(
                eval_orbital_s(&e, &ctx, &phi, &x, &shallow).unwrap(),
                eval_orbital_s(&e, &ctx, &phi, &x, &deep).unwrap()
            );
            let one = LocalElem::one(&f);
            if e.norm_membership(&x).unwrap() {
                let g = TestFnG::KepsM(1);
                prop_assert_eq!(
                    eval_orbital_g_at_x(&e, &ctx, &g, &one, &x, false, &shallow).unwrap(),
                    eval_orbital_g_at_x(&e, &ctx, &g, &one, &x, false, &deep).unwrap()
                );
            }
            Ok(())
        });
        t.checked += 16;
        if let Err(err) = res {
            t.failures.push(format!("precision N vs N + 2: {err}"));
        }
    }

    t.finish()
}

fn main() -> ExitCode {
    let s = Duration::from_secs;
    let criteria = [
        Criterion {
            id: 1,
            name: "fundamental lemma, odd characteristic",
            budget: s(60),
            run: c1,
        },
        Criterion {
            id: 2,
            name: "fundamental lemma, characteristic 2",
            budget: s(60),
            run: c2,
        },
        Criterion {
            id: 3,
            name: "arithmetic fundamental lemma",
            budget: s(30),
            run: c3,
        },
        Criterion {
            id: 4,
            name: "explicit smooth-matching values",
            budget: s(60),
            run: c4,
        },
        Criterion {
            id: 5,
            name: "split matching",
            budget: s(30),
            run: c5,
        },
        Criterion {
            id: 6,
            name: "Gauss-sum laws and constructions",
            budget: s(30),
            run: c6,
        },
        Criterion {
            id: 7,
            name: "metric at the infinite place",
            budget: s(10),
            run: c7,
        },
        Criterion {
            id: 8,
            name: "property suites",
            budget: s(120),
            run: c8,
        },
    ];
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let out = (c.run)();
        let dt = start.elapsed();
        let timing = format!("{:.1}s of {}s", dt.as_secs_f64(), c.budget.as_secs());
        match out {
            Ok(n) if dt <= c.budget => {
                println!("PASS [{}] {}: {n} exact checks, {timing}", c.id, c.name)
            }
            Ok(n) => {
                failed += 1;
                println!(
                    "FAIL [{}] {}: {n} exact checks but over budget, {timing}",
                    c.id, c.name
                );
            }
            Err(why) => {
                failed += 1;
                println!("FAIL [{}] {}: {why} ({timing})", c.id, c.name);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} of {} criteria failed", criteria.len());
        ExitCode::FAILURE
    }
}
