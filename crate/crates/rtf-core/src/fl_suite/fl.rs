//! The fundamental lemma: O(x, 1_{S, v(det) = m}) at s = 0 against
//! O(delta(x), 1_{GL2(O_F)-integral, v(det) = m}) for unramified E.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::report::{params, Case, CaseX, Provenance, VerificationReport};
use super::{field, list, nonempty, run_cases, sample_xs, SuiteOptions};
use crate::base_arith::laurent::LocalElem;
use crate::base_arith::measure::MeasureContext;
use crate::base_arith::scalar::XiPoly;
use crate::error::{Result, RtfError};
use crate::orbital_engine::{eval_orbital_g_at_x, eval_orbital_s, EngineConfig, TestFnG, TestFnS};
use crate::quad_ext::{Flavor, QuadExt};

/// G side of the lemma. In characteristic 2 it is assembled from the Hecke
/// generators: 1_{v(det) = m} = sum_k xi^k-translates of C_{m - 2k}.
pub fn fl_g_side(
    e: &QuadExt,
    ctx: &MeasureContext,
    m: i64,
    x: &LocalElem,
    cfg: &EngineConfig,
) -> Result<XiPoly> {
    let one = LocalElem::one(e.base());
    if e.base().p() != 2 {
        return eval_orbital_g_at_x(e, ctx, &TestFnG::IntegralDetMG(m), &one, x, false, cfg);
    }
    let mut acc = XiPoly::zero(e.q());
    for k in 0..=m / 2 {
        let c = eval_orbital_g_at_x(e, ctx, &TestFnG::Cm(m - 2 * k), &one, x, false, cfg)?;
        // t^k g in C_{m-2k} t^k; the central character contributes xi^k
        acc = acc.add(&c.shift_xi(k, 0));
    }
    Ok(acc)
}

/// Runs the lemma over m in `ms`, v(x) in `vs` and `opts.samples` units per
/// valuation. x outside Nm(E^x) must give 0 on the S side.
pub fn verify_fl(
    q: u32,
    ms: &[i64],
    vs: &[i64],
    opts: &SuiteOptions,
) -> Result<VerificationReport> {
    nonempty(ms)?;
    nonempty(vs)?;
    if let Some(m) = ms.iter().find(|m| **m < 0 || *m % 2 != 0) {
        return Err(RtfError::Config(format!(
            "m = {m} must be even and nonnegative"
        )));
    }
    let f = field(q)?;
    let e = QuadExt::new(&f, Flavor::Unramified)?;
    let ctx = MeasureContext::new(q, opts.c_psi, e.shape());
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut grid = Vec::new();
    for &m in ms {
        for &v in vs {
            for x in sample_xs(&f, &mut rng, v, opts.samples) {
                grid.push((m, x));
            }
        }
    }
    let cfg = opts.cfg;
    let cases = run_cases(&grid, |(m, x)| {
        let s = eval_orbital_s(&e, &ctx, &TestFnS::IntegralDetM(*m), x, &cfg)?.value_at_zero();
        let label = format!("q={q} m={m}");
        if e.norm_membership(x)? {
            let g = fl_g_side(&e, &ctx, *m, x, &cfg)?;
            Ok(Case::compare(label, CaseX::of(x), &s, &g))
        } else {
            Ok(Case::compare(
                format!("{label} off-norm"),
                CaseX::of(x),
                &s,
                &XiPoly::zero(q),
            ))
        }
    })?;
    let p = params([
        ("q", q.to_string()),
        ("m", list(ms)),
        ("v", list(vs)),
        ("samples", opts.samples.to_string()),
    ]);
    Ok(VerificationReport::new(
        "fl",
        p,
        cases,
        Provenance::new(opts.seed, opts.c_psi, &cfg),
    ))
}
