//! The arithmetic fundamental lemma: the intersection-type integral
//! I(delta, f) of the unramified multiplicity function against f on
//! G_1 = GL2(F), compared with the derivative at s = 0 of the S-side
//! orbital integral of 1_{v(det) = m}.

use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::report::{params, Case, CaseX, Provenance, VerificationReport};
use super::{field, list, nonempty, run_cases, sample_xs, SuiteOptions};
use crate::base_arith::laurent::{residue_representatives, LocalElem};
use crate::base_arith::measure::MeasureContext;
use crate::base_arith::scalar::{LogValue, XiPoly, Q};
use crate::error::{Result, RtfError};
use crate::orbit_geometry::{cartan_c, BaseRing, Mat2, QuatElem};
use crate::orbital_engine::g_side::DELTA_DEPTH;
use crate::orbital_engine::{eval_orbital_s, EngineConfig, TestFnG, TestFnS};
use crate::quad_ext::{Flavor, QuadExt};

/// m(delta, g) for delta in G_t and g in GL2(F), E unramified: zero unless
/// v(det delta) + v(det g) = 0; otherwise (v(inv'(delta)) + 1) / 2 on
/// c(g) = 0 and q^{1 - c} / (q + 1) on c(g) = c > 0.
#[derive(Debug, Clone, Copy)]
pub struct MultiplicityFn {
    pub q: u32,
}

impl MultiplicityFn {
    pub fn eval(&self, e: &QuadExt, delta: &QuatElem, g: &Mat2<LocalElem>) -> Result<Q> {
        let r = BaseRing(e.base().clone());
        if delta.det(e).v()? + g.det(&r).v()? != 0 {
            return Ok(Q::zero());
        }
        let c = cartan_c(&r, g)?;
        if c == 0 {
            let vi = delta.inv_prime(e)?.v()?;
            Ok(Q::new(vi as i128 + 1, 2))
        } else {
            let q = self.q as i128;
            Ok(Q::new(1, q + 1) * Q::from_integer(q).pow(1 - c as i32))
        }
    }
}

/// Determinant valuations on which a matrix-model function can be nonzero.
fn det_support(f: &TestFnG) -> Result<Vec<i64>> {
    let mut out = Vec::new();
    for (_, leaf) in f.leaves() {
        match leaf {
            TestFnG::Cm(m) | TestFnG::IntegralDetMG(m) => out.push(m),
            other => {
                return Err(RtfError::Config(format!(
                    "{other} is not a bi-K1-invariant function on GL2(F)"
                )))
            }
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// I(delta, f) = sum over g K1 of f(g) int_{T} m(delta h, g^{-1}) Omega^{-1}(h) dh,
/// with the torus variable h = t^{alpha} u scanned around the one shell
/// where v(det) balances. Cosets g K1 with v(det g) = d are
/// [[t^a, b], [0, t^{d - a}]] with b in O / p^a.
pub fn arith_orbital_i(
    e: &QuadExt,
    ctx: &MeasureContext,
    delta: &QuatElem,
    f: &TestFnG,
    cfg: &EngineConfig,
) -> Result<XiPoly> {
    if e.flavor() != Flavor::Unramified {
        return Err(RtfError::Config(
            "the multiplicity function is defined for unramified E".into(),
        ));
    }
    let fb = e.base();
    let r = BaseRing(fb.clone());
    let mult = MultiplicityFn { q: e.q() };
    let vdet = delta.det(e).v()?;
    let vol = ctx.vol_e_mod_f().mul(&ctx.vol_units_e());
    let mut total = XiPoly::zero(e.q());
    for d in det_support(f)? {
        if d < 0 {
            continue;
        }
        // v(det (delta t^alpha)) = vdet + 2 alpha must equal d
        let centre = (d - vdet).div_euclid(2);
        for a in 0..=d {
            for b in residue_representatives(fb, a)? {
                let g = Mat2::new(
                    LocalElem::monomial(fb, 1, a),
                    b,
                    LocalElem::zero(fb),
                    LocalElem::monomial(fb, 1, d - a),
                );
                let w = f.eval(e, &QuatElem::from_gl2f(e, &g)?)?;
                if w.is_zero() {
                    continue;
                }
                let gi = g.inverse(&r)?;
                for alpha in centre - cfg.guard..=centre + cfg.guard {
                    let h = e.embed(&LocalElem::monomial(fb, 1, alpha));
                    let m = mult.eval(e, &delta.torus_action(e, &e.one(), &h)?, &gi)?;
                    if !m.is_zero() {
                        total = total.add(&vol.shift_xi(alpha, 0).scale(m * w));
                    }
                }
            }
        }
    }
    Ok(total)
}

/// Compares 2 I(delta(x), 1_{v(det) = m}) log q with the derivative of the
/// S-side integral for v(x) odd; delta(x) lives in G_t.
pub fn verify_afl(
    q: u32,
    ms: &[i64],
    vs: &[i64],
    opts: &SuiteOptions,
) -> Result<VerificationReport> {
    nonempty(ms)?;
    nonempty(vs)?;
    if let Some(v) = vs.iter().find(|v| *v % 2 == 0) {
        return Err(RtfError::Config(format!("v(x) = {v} must be odd")));
    }
    if let Some(m) = ms.iter().find(|m| **m < 0 || *m % 2 != 0) {
        return Err(RtfError::Config(format!(
            "m = {m} must be even and nonnegative"
        )));
    }
    let f = field(q)?;
    let e = QuadExt::new(&f, Flavor::Unramified)?;
    let ctx = MeasureContext::new(q, opts.c_psi, e.shape());
    let eps = LocalElem::uniformizer(&f);
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
        let delta = QuatElem::delta(&e, &eps, x, DELTA_DEPTH)?
            .ok_or_else(|| RtfError::Config(format!("{x} is not in t Nm(E^x)")))?;
        let i = arith_orbital_i(&e, &ctx, &delta, &TestFnG::IntegralDetMG(*m), &cfg)?;
        let lhs = LogValue::new(i.scale(Q::from_integer(2)), 1);
        let rhs =
            eval_orbital_s(&e, &ctx, &TestFnS::IntegralDetM(*m), x, &cfg)?.derivative_at_zero();
        Ok(Case::compare(
            format!("q={q} m={m}"),
            CaseX::of(x),
            &lhs,
            &rhs,
        ))
    })?;
    let p = params([
        ("q", q.to_string()),
        ("m", list(ms)),
        ("v", list(vs)),
        ("samples", opts.samples.to_string()),
    ]);
    Ok(VerificationReport::new(
        "afl",
        p,
        cases,
        Provenance::new(opts.seed, opts.c_psi, &cfg),
    ))
}
