//! The metric at the place at infinity: for regular delta in GL2(F) and the
//! torus fixed point z0, the distance d(z0, delta z0) equals |inv'(delta)|.

use std::sync::Arc;

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::report::{params, Case, CaseX, Provenance, VerificationReport};
use super::{field, list, nonempty, run_cases, SuiteOptions};
use crate::base_arith::fq::FqField;
use crate::base_arith::laurent::LocalElem;
use crate::error::Result;
use crate::orbit_geometry::{minf_sides, BaseRing, Mat2, QuatElem, SingularClass};
use crate::quad_ext::{random_elem, Flavor, QuadExt};

/// Random invertible matrix with entries of valuation in [lo, hi] (or 0).
pub fn random_gl2f(f: &Arc<FqField>, rng: &mut ChaCha8Rng, lo: i64, hi: i64) -> Mat2<LocalElem> {
    let r = BaseRing(f.clone());
    loop {
        let mut ent = || {
            if rng.random_range(0..6) == 0 {
                LocalElem::zero(f)
            } else {
                let v = rng.random_range(lo..=hi);
                random_elem(f, rng, v, 3)
            }
        };
        let g = Mat2::new(ent(), ent(), ent(), ent());
        if !g.det(&r).is_zero() {
            return g;
        }
    }
}

/// `samples` regular delta per q, E unramified; both sides as exponents of q.
pub fn verify_minf(qs: &[u32], samples: usize, opts: &SuiteOptions) -> Result<VerificationReport> {
    nonempty(qs)?;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut grid = Vec::new();
    for &q in qs {
        let f = field(q)?;
        let e = QuadExt::new(&f, Flavor::Unramified)?;
        let mut found = 0;
        while found < samples {
            let g = random_gl2f(&f, &mut rng, -2, 2);
            if QuatElem::from_gl2f(&e, &g)?.singular_class(&e) != SingularClass::Regular {
                continue;
            }
            grid.push((q, g));
            found += 1;
        }
    }
    let cases = run_cases(&grid, |(q, g)| {
        let e = QuadExt::new(g.a.field(), Flavor::Unramified)?;
        let (lhs, rhs) = minf_sides(&e, g)?;
        let lhs = lhs.map_or_else(|| "inf".to_string(), |n| n.to_string());
        Ok(Case::compare(
            format!("q={q} delta={g}"),
            CaseX::none(),
            &lhs,
            &rhs.to_string(),
        ))
    })?;
    nonempty(&cases)?;
    let p = params([("q", list(qs)), ("samples", samples.to_string())]);
    Ok(VerificationReport::new(
        "minf",
        p,
        cases,
        Provenance::new(opts.seed, opts.c_psi, &opts.cfg),
    ))
}
