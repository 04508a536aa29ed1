//! Axioms of special multiplicity functions m on G_eps', for a level n with
//! U = K_{eps', n} t^Z:
//! (a) near the torus m has a logarithmic singularity: for some k >= n,
//!     m - v(inv') / 2 * 1_{U'_k} is constant along a (1 + t^N b j), N >> 0,
//!     and locally constant away from the torus, with
//!     U'_k = {a in (1 + p_E^n) t^Z, b in p_E^k};
//! (b) if eps' is not a norm, m vanishes off det^{-1}(det U);
//! (c) if eps' is a norm, m vanishes off U.

use std::sync::Arc;

use num_traits::Zero;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::afl::MultiplicityFn;
use super::report::{params, Case, CaseX, Provenance, VerificationReport};
use super::SuiteOptions;
use crate::base_arith::laurent::LocalElem;
use crate::base_arith::scalar::Q;
use crate::error::{Result, RtfError};
use crate::orbit_geometry::{Mat2, QuatElem, SingularClass};
use crate::orbital_engine::testfn::ceil_div;
use crate::orbital_engine::TestFnG;
use crate::quad_ext::{ExtElem, Flavor, QuadExt};

/// A candidate multiplicity function on G_eps.
pub trait MultiplicityCandidate: Send + Sync {
    fn name(&self) -> String;
    fn eps(&self, e: &QuadExt) -> LocalElem;
    /// n with U = K_{eps, n} t^Z.
    fn level(&self) -> i64;
    fn eval(&self, e: &QuadExt, g: &QuatElem) -> Result<Q>;
}

/// The unramified multiplicity on G_t at level 0: m(g) = m(t^{-k} g, 1)
/// with v(det g) = 2k, and 0 when v(det g) is odd.
#[derive(Debug, Clone, Copy)]
pub struct UnramifiedCandidate;

impl MultiplicityCandidate for UnramifiedCandidate {
    fn name(&self) -> String {
        "unramified multiplicity".into()
    }

    fn eps(&self, e: &QuadExt) -> LocalElem {
        LocalElem::uniformizer(e.base())
    }

    fn level(&self) -> i64 {
        0
    }

    fn eval(&self, e: &QuadExt, g: &QuatElem) -> Result<Q> {
        let vd = g.det(e).v()?;
        if vd.rem_euclid(2) != 0 {
            return Ok(Q::zero());
        }
        let h = e.embed(&LocalElem::monomial(e.base(), 1, vd / 2));
        let g0 = g.torus_action(e, &h, &e.one())?;
        let one = Mat2::identity(&crate::orbit_geometry::BaseRing(e.base().clone()));
        MultiplicityFn { q: e.q() }.eval(e, &g0, &one)
    }
}

type EvalFn = dyn Fn(&QuadExt, &QuatElem) -> Result<Q> + Send + Sync;

/// A candidate given by a closure.
#[derive(Clone)]
pub struct FnCandidate {
    pub name: String,
    pub eps: LocalElem,
    pub level: i64,
    pub f: Arc<EvalFn>,
}

impl MultiplicityCandidate for FnCandidate {
    fn name(&self) -> String {
        self.name.clone()
    }

    fn eps(&self, _e: &QuadExt) -> LocalElem {
        self.eps.clone()
    }

    fn level(&self) -> i64 {
        self.level
    }

    fn eval(&self, e: &QuadExt, g: &QuatElem) -> Result<Q> {
        (self.f)(e, g)
    }
}

const SAMPLES: usize = 24;
/// Largest k tried for the neighbourhood U'_k in (a).
const K_SEARCH: i64 = 3;

fn v_or_max(e: &QuadExt, y: &ExtElem) -> Result<i64> {
    let z = match y {
        ExtElem::Field(x) => x.is_zero(),
        ExtElem::Pair(x, w) => x.is_zero() || w.is_zero(),
    };
    if z {
        Ok(i64::MAX)
    } else {
        e.v_e(y)
    }
}

/// t^{-z} g with v_E(a) brought to 0, when v_E(a) is a multiple of e.
fn untwist(e: &QuadExt, g: &QuatElem) -> Result<Option<QuatElem>> {
    let va = v_or_max(e, &g.a)?;
    if va == i64::MAX || va.rem_euclid(e.e()) != 0 {
        return Ok(None);
    }
    let h = e.embed(&LocalElem::monomial(e.base(), 1, va / e.e()));
    Ok(Some(g.torus_action(e, &h, &e.one())?))
}

/// g in U'_k = {a in (1 + p_E^n) or O_E^x for n = 0, b in p_E^k} t^Z.
fn in_u_prime(e: &QuadExt, g: &QuatElem, n: i64, k: i64) -> Result<bool> {
    let Some(g0) = untwist(e, g)? else {
        return Ok(false);
    };
    if v_or_max(e, &g0.b)? < k {
        return Ok(false);
    }
    if n == 0 {
        return Ok(true);
    }
    let d = e.sub(&g0.a, &e.one());
    Ok(v_or_max(e, &d)? >= n)
}

/// m(g) - v(inv'(g)) / 2 * 1_{U'_k}(g).
fn corrected(e: &QuadExt, cand: &dyn MultiplicityCandidate, g: &QuatElem, k: i64) -> Result<Q> {
    let m = cand.eval(e, g)?;
    if in_u_prime(e, g, cand.level(), k)? {
        let vi = g.inv_prime(e)?.v()?;
        Ok(m - Q::new(vi as i128, 2))
    } else {
        Ok(m)
    }
}

/// A torus element in (1 + p_E^n) t^z (O_E^x t^z for n = 0).
fn torus_sample(e: &QuadExt, rng: &mut ChaCha8Rng, n: i64) -> Result<ExtElem> {
    let z = rng.random_range(-1..2);
    let unit = if n == 0 {
        e.sample(rng, 0, 3)
    } else {
        let y = e.sample(rng, n, 2);
        e.add(&e.one(), &y)
    };
    Ok(e.mul(&unit, &e.embed(&LocalElem::monomial(e.base(), 1, z))))
}

fn regular(e: &QuadExt, g: &QuatElem) -> bool {
    g.singular_class(e) == SingularClass::Regular
}

/// First k in [n, n + K_SEARCH] for which clause (a) holds, or the last witness.
fn clause_a(
    e: &QuadExt,
    cand: &dyn MultiplicityCandidate,
    seed: u64,
) -> Result<std::result::Result<i64, String>> {
    let n = cand.level();
    let eps = cand.eps(e);
    let pi = e.uniformizer();
    let mut witness = String::new();
    'k: for k in n..=n + K_SEARCH {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        // plateau along a (1 + pi^N b j)
        for _ in 0..SAMPLES {
            let a = torus_sample(e, &mut rng, n)?;
            let b = e.sample(&mut rng, 0, 3);
            let n0 = k + 1;
            let mut vals = Vec::new();
            for big_n in n0..n0 + 3 {
                let bn = e.mul(&a, &e.mul(&e.pow(&pi, big_n)?, &b));
                let g = QuatElem::new(a.clone(), bn, eps.clone());
                if !regular(e, &g) {
                    continue 'k;
                }
                vals.push((big_n, corrected(e, cand, &g, k)?));
            }
            if vals.windows(2).any(|w| w[0].1 != w[1].1) {
                let s: Vec<String> = vals.iter().map(|(nn, v)| format!("N={nn}: {v}")).collect();
                witness = format!("k={k}, a={a}, b={b}: {}", s.join(", "));
                continue 'k;
            }
        }
        // local constancy away from the torus
        let depth = k.max(n) + 4;
        for _ in 0..SAMPLES {
            let va = rng.random_range(-1..2);
            let a = e.sample(&mut rng, va, 3);
            let vb = rng.random_range(-2..k + 1);
            let b = e.sample(&mut rng, vb, 3);
            let g = QuatElem::new(a.clone(), b.clone(), eps.clone());
            let ua = e.add(&e.one(), &e.sample(&mut rng, depth, 2));
            let ub = e.add(&e.one(), &e.sample(&mut rng, depth, 2));
            let g2 = QuatElem::new(e.mul(&a, &ua), e.mul(&b, &ub), eps.clone());
            if !regular(e, &g) || !regular(e, &g2) {
                continue;
            }
            let (h1, h2) = (corrected(e, cand, &g, k)?, corrected(e, cand, &g2, k)?);
            if h1 != h2 {
                witness = format!("k={k}: {h1} at {g} but {h2} at {g2}");
                continue 'k;
            }
        }
        return Ok(Ok(k));
    }
    Ok(Err(witness))
}

/// Checks (a), then (b) or (c); a failing clause is returned as
/// `AxiomFailure` with a witness.
pub fn verify_special_multiplicity_axioms(
    e: &QuadExt,
    cand: &dyn MultiplicityCandidate,
    opts: &SuiteOptions,
) -> Result<VerificationReport> {
    if e.flavor() == Flavor::Split {
        return Err(RtfError::Config(
            "multiplicity functions live on a nonsplit E".into(),
        ));
    }
    let n = cand.level();
    let eps = cand.eps(e);
    let label = |c: &str| format!("{} eps={eps} n={n} ({c})", cand.name());
    let mut cases = Vec::new();
    match clause_a(e, cand, opts.seed)? {
        Ok(k) => cases.push(Case::compare(
            label("a"),
            CaseX::none(),
            &format!("plateau at k={k}"),
            &format!("plateau at k={k}"),
        )),
        Err(w) => return Err(RtfError::AxiomFailure('a', w)),
    }
    let norm = e.norm_membership(&eps)?;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x5eed);
    let unit_level = ceil_div(n, e.e());
    let mut nonzero = 0usize;
    for _ in 0..4 * SAMPLES {
        let va = rng.random_range(-2..3);
        let a = e.sample(&mut rng, va, 3);
        let vb = rng.random_range(-2..3);
        let b = e.sample(&mut rng, vb, 3);
        let g = QuatElem::new(a, b, eps.clone());
        if !regular(e, &g) || cand.eval(e, &g)?.is_zero() {
            continue;
        }
        nonzero += 1;
        if norm {
            if TestFnG::KepsMZ(n).eval(e, &g)?.is_zero() {
                return Err(RtfError::AxiomFailure(
                    'c',
                    format!("m({g}) != 0 off K_{{eps,{n}}} t^Z"),
                ));
            }
        } else {
            let det = g.det(e);
            let vd = det.v()?;
            let u = det.unit_part()?.sub(&LocalElem::one(e.base()));
            let in_det_u =
                vd.rem_euclid(2) == 0 && (unit_level == 0 || u.is_zero() || u.v()? >= unit_level);
            if !in_det_u {
                return Err(RtfError::AxiomFailure(
                    'b',
                    format!("m({g}) != 0 with det = {det} outside det U"),
                ));
            }
        }
    }
    let clause = if norm { "c" } else { "b" };
    let got = format!("{nonzero} nonzero samples inside");
    cases.push(Case::compare(label(clause), CaseX::none(), &got, &got));
    let p = params([
        ("candidate", cand.name()),
        ("eps", eps.to_string()),
        ("level", n.to_string()),
        ("flavor", e.flavor().to_string()),
    ]);
    Ok(VerificationReport::new(
        "axioms",
        p,
        cases,
        Provenance::new(opts.seed, opts.c_psi, &opts.cfg),
    ))
}
