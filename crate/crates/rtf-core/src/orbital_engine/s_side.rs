//! O(s, x, Phi) = int_{F^x} int_{E^x} Phi(z diag(a, 1) s0 diag(conj a, 1))
//! Omega^{-1}(a) |a|_E^s eta(z) omega^{-1}(z) da dz, with s0 = gamma(x)
//! by default and T = q_E^{-s} tracking |a|_E^s = T^{v_E(a)}.
//!
//! With v(z) = beta and v_E(a) = alpha the entries have valuations
//! v(A) = beta + 2 alpha / e + v(A0), v_E(B) = e beta + alpha + v_E(B0),
//! v(D) = beta + v(D0) and v(det) = 2 beta + 2 alpha / e + v(det s0), so a
//! fixed determinant valuation leaves a one-parameter family of shells.

use num_traits::Zero;

use super::testfn::{trace_ideal_exp, SBounds, TestFnS};
use super::value::OrbitalValue;
use super::{xi_weight, EngineConfig, Strategy};
use crate::base_arith::laurent::{shell_representatives, LocalElem};
use crate::base_arith::measure::MeasureContext;
use crate::base_arith::scalar::{XiPoly, Q};
use crate::error::{Result, RtfError};
use crate::orbit_geometry::HermMat;
use crate::quad_ext::{ExtElem, Flavor, QuadExt};

/// Valuations of the base point entries.
#[derive(Debug, Clone, Copy)]
struct BaseVals {
    va: i64,
    vb: i64,
    vd: i64,
    vdet: i64,
}

fn base_vals(e: &QuadExt, s0: &HermMat) -> Result<BaseVals> {
    let det = s0.det(e);
    if s0.a.is_zero() || s0.d.is_zero() || det.is_zero() || e.norm(&s0.b).is_zero() {
        return Err(RtfError::NonRegularX);
    }
    Ok(BaseVals {
        va: s0.a.v()?,
        vb: e.v_e(&s0.b)?,
        vd: s0.d.v()?,
        vdet: det.v()?,
    })
}

pub(crate) fn check_x(x: &LocalElem) -> Result<()> {
    let one = LocalElem::one(x.field());
    if x.is_zero() || x.sub(&one).is_zero() {
        return Err(RtfError::NonRegularX);
    }
    x.v()?;
    x.sub(&one).v()?;
    Ok(())
}

fn check_ctx(e: &QuadExt, ctx: &MeasureContext) -> Result<()> {
    if e.flavor() == Flavor::Split {
        return Err(RtfError::Config(
            "split orbital integrals live in the split module".into(),
        ));
    }
    if ctx.shape != e.shape() || ctx.q != e.q() {
        return Err(RtfError::Config(
            "measure context does not match the extension".into(),
        ));
    }
    Ok(())
}

/// O(s, x, phi) at the standard representative gamma(x).
pub fn eval_orbital_s(
    e: &QuadExt,
    ctx: &MeasureContext,
    phi: &TestFnS,
    x: &LocalElem,
    cfg: &EngineConfig,
) -> Result<OrbitalValue> {
    check_x(x)?;
    eval_inner(e, ctx, phi, &HermMat::gamma(e, x), Some(x), cfg)
}

/// The same integral started from an arbitrary regular base point s0.
pub fn eval_orbital_s_at(
    e: &QuadExt,
    ctx: &MeasureContext,
    phi: &TestFnS,
    s0: &HermMat,
    cfg: &EngineConfig,
) -> Result<OrbitalValue> {
    eval_inner(e, ctx, phi, s0, None, cfg)
}

fn eval_inner(
    e: &QuadExt,
    ctx: &MeasureContext,
    phi: &TestFnS,
    s0: &HermMat,
    x: Option<&LocalElem>,
    cfg: &EngineConfig,
) -> Result<OrbitalValue> {
    check_ctx(e, ctx)?;
    let base = base_vals(e, s0)?;
    let mut total = OrbitalValue::zero(e.q(), e.shape().f());
    for (c, leaf) in phi.leaves() {
        let v = match cfg.strategy {
            Strategy::Fast => match fast_leaf(e, ctx, &leaf, base, x, cfg)? {
                Some(v) => v,
                None => brute_leaf(e, ctx, &leaf, s0, base, cfg)?,
            },
            Strategy::Brute => brute_leaf(e, ctx, &leaf, s0, base, cfg)?,
        };
        total = total.add(&v.scale(c));
    }
    Ok(total)
}

/// alpha = e (det - 2 beta - vdet) / 2 when integral.
fn alpha_of(e: i64, b: &SBounds, base: BaseVals, beta: i64) -> Option<i64> {
    let num = e * (b.det - 2 * beta - base.vdet);
    (num.rem_euclid(2) == 0).then_some(num / 2)
}

/// Range of beta allowed by the D and A bounds.
fn beta_window(b: &SBounds, base: BaseVals) -> (i64, i64) {
    (b.ld - base.vd, b.det - base.vdet + base.va - b.la)
}

fn shell_ok(e: i64, b: &SBounds, base: BaseVals, beta: i64, alpha: i64) -> bool {
    let nv = 2 * alpha / e;
    beta + nv + base.va >= b.la && e * beta + alpha + base.vb >= b.lb && beta + base.vd >= b.ld
}

fn weight(e: &QuadExt, cfg: &EngineConfig, alpha: i64, beta: i64) -> XiPoly {
    xi_weight(e.q(), alpha + cfg.omega_exp(e.e(), beta))
}

fn fast_leaf(
    e: &QuadExt,
    ctx: &MeasureContext,
    leaf: &TestFnS,
    base: BaseVals,
    x: Option<&LocalElem>,
    cfg: &EngineConfig,
) -> Result<Option<OrbitalValue>> {
    let ee = e.e();
    let mut out = OrbitalValue::zero(e.q(), e.shape().f());
    let vols = ctx.vol_units_e().mul(&ctx.vol_units_f());
    match leaf {
        TestFnS::KcapS | TestFnS::IntegralDetM(_) => {
            let b = leaf.bounds(e)?;
            let (lo, hi) = beta_window(&b, base);
            for beta in lo..=hi {
                let Some(alpha) = alpha_of(ee, &b, base, beta) else {
                    continue;
                };
                if !shell_ok(ee, &b, base, beta, alpha) {
                    continue;
                }
                // average of eta over the units of the z-shell
                let eta = match e.flavor() {
                    Flavor::Unramified => {
                        if beta.rem_euclid(2) == 0 {
                            1
                        } else {
                            -1
                        }
                    }
                    _ => 0,
                };
                if eta != 0 {
                    out.add_term(
                        alpha,
                        &weight(e, cfg, alpha, beta)
                            .mul(&vols)
                            .scale(Q::from_integer(eta)),
                    );
                }
            }
            Ok(Some(out))
        }
        TestFnS::KlxiN { l, tr_xi, n } | TestFnS::KlxiNPrime { l, tr_xi, n } => {
            let Some(x) = x else { return Ok(None) };
            let vt = tr_xi.v()?;
            let rel = trace_ideal_exp(e, *l) - vt;
            if *n < 1 || rel < 1 || vt < 0 {
                return Ok(None);
            }
            let vx = x.v()?;
            if ee * vx < n + ee * vt {
                return Ok(Some(out));
            }
            let prime = matches!(leaf, TestFnS::KlxiNPrime { .. });
            let (beta, sign) = if prime {
                (vt, e.eta(&tr_xi.neg())?)
            } else {
                (vx - vt, e.eta(&x.mul(tr_xi).neg())?)
            };
            let alpha = -ee * beta;
            let c = ctx
                .vol_one_units_e(*n)
                .mul(&ctx.vol_one_units_f(rel))
                .scale(Q::from_integer(sign as i128));
            out.add_term(alpha, &weight(e, cfg, alpha, beta).mul(&c));
            Ok(Some(out))
        }
        TestFnS::Lin(_) => Err(RtfError::Config("combination passed as a leaf".into())),
    }
}

fn brute_leaf(
    e: &QuadExt,
    ctx: &MeasureContext,
    leaf: &TestFnS,
    s0: &HermMat,
    base: BaseVals,
    cfg: &EngineConfig,
) -> Result<OrbitalValue> {
    let ee = e.e();
    let b = leaf.bounds(e)?;
    let (de, df) = leaf.depths(e)?;
    let (de, df) = (de + cfg.depth_margin, df + cfg.depth_margin);
    let g = cfg.guard.max(0);
    let (lo, hi) = beta_window(&b, base);
    let (blo, bhi) = (lo.min(hi) - g, lo.max(hi) + g);
    let ua = e.shell_reps(0, de)?;
    let uz = shell_representatives(e.base(), 0, df)?;
    let cells =
        ((bhi - blo + 1) as u64) * ((2 * g + 1) as u64) * (ua.len() as u64) * (uz.len() as u64);
    if cells > cfg.budget {
        return Err(RtfError::BudgetExceeded(format!(
            "{cells} cells for {leaf}"
        )));
    }
    let eta_z: Vec<i32> = uz.iter().map(|z| e.eta(z)).collect::<Result<_>>()?;
    let pi = e.uniformizer();
    let cell_vol = ctx
        .vol_units_e()
        .mul(&ctx.vol_units_f())
        .scale(Q::new(1, (ua.len() * uz.len()) as i128));
    let mut out = OrbitalValue::zero(e.q(), e.shape().f());
    for beta in blo..=bhi {
        let num = ee * (b.det - 2 * beta - base.vdet);
        let centre = num.div_euclid(2);
        let exact = alpha_of(ee, &b, base, beta);
        let tz = LocalElem::monomial(e.base(), 1, beta);
        let eta_t = e.eta(&tz)?;
        for alpha in centre - g..=centre + g {
            let core = beta >= lo && beta <= hi && exact == Some(alpha);
            let ta = e.pow(&pi, alpha)?;
            let mut acc = Q::zero();
            for u in &ua {
                let a: ExtElem = e.mul(&ta, u);
                for (z0, eta) in uz.iter().zip(&eta_z) {
                    let z = tz.mul(z0);
                    let val = leaf.eval(e, &s0.torus_act(e, &a, &z))?;
                    if !val.is_zero() {
                        acc += val * Q::from_integer((eta * eta_t) as i128);
                        if !core {
                            return Err(RtfError::SupportBoundViolated(format!(
                                "{leaf} is nonzero at v(z) = {beta}, v_E(a) = {alpha}"
                            )));
                        }
                    }
                }
            }
            if !acc.is_zero() {
                out.add_term(
                    alpha,
                    &weight(e, cfg, alpha, beta).mul(&cell_vol).scale(acc),
                );
            }
        }
    }
    Ok(out)
}
