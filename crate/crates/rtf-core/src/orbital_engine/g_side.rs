//! O(delta, f) = int_{T/Z} int_T f(h1^{-1} delta h2) Omega(h1) Omega^{-1}(h2).
//!
//! For delta = 1 + b j, put A = h2 / h1 and sigma = conj(h1) / h1:
//! h1^{-1} delta h2 = A + b conj(A) sigma j and the weight is Omega^{-1}(A),
//! so the integral is over A in E^x and over the norm-one classes sigma.

use std::collections::BTreeMap;

use num_traits::Zero;

use super::s_side::check_x;
use super::testfn::TestFnG;
use super::{xi_weight, EngineConfig, Strategy};
use crate::base_arith::laurent::LocalElem;
use crate::base_arith::measure::MeasureContext;
use crate::base_arith::scalar::{XiPoly, Q};
use crate::error::{Result, RtfError};
use crate::orbit_geometry::{QuatElem, SingularClass};
use crate::quad_ext::{ExtElem, Flavor, QuadExt};

/// Precision (relative) of the norm preimage used to build delta(x).
pub const DELTA_DEPTH: i64 = 12;

#[derive(Debug, Clone, Copy)]
struct DeltaVals {
    vb: i64,
    veps: i64,
    vdet: i64,
}

/// O(delta(x), f) with delta(x) = 1 + b j, eps Nm(b) = x.
pub fn eval_orbital_g_at_x(
    e: &QuadExt,
    ctx: &MeasureContext,
    f: &TestFnG,
    eps: &LocalElem,
    x: &LocalElem,
    xi_quotient: bool,
    cfg: &EngineConfig,
) -> Result<XiPoly> {
    check_x(x)?;
    let delta = QuatElem::delta(e, eps, x, DELTA_DEPTH)?
        .ok_or_else(|| RtfError::Config(format!("{x} is not in eps Nm(E^x) for eps = {eps}")))?;
    eval_orbital_g(e, ctx, f, &delta, xi_quotient, cfg)
}

/// O(delta, f) for delta = a + b j; a is moved into the torus first.
pub fn eval_orbital_g(
    e: &QuadExt,
    ctx: &MeasureContext,
    f: &TestFnG,
    delta: &QuatElem,
    xi_quotient: bool,
    cfg: &EngineConfig,
) -> Result<XiPoly> {
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
    if delta.singular_class(e) != SingularClass::Regular {
        return Err(RtfError::SingularElement(format!(
            "{:?}",
            delta.singular_class(e)
        )));
    }
    f.check(e, &delta.eps)?;
    if xi_quotient != f.xi_invariant() {
        return Err(RtfError::Config(
            "the Xi-quotient needs (and is needed by) a t^Z-invariant function".into(),
        ));
    }
    // delta = a (1 + b1 j) with b1 = b / a; h1 -> a h1 contributes Omega(a)
    let ai = e.inv(&delta.a)?;
    let b1 = e.mul(&ai, &delta.b);
    let d1 = QuatElem::delta_from_b(e, &delta.eps, &b1);
    let shift = e.v_e(&delta.a)?;
    let vals = DeltaVals {
        vb: e.v_e(&b1)?,
        veps: delta.eps.v()?,
        vdet: d1.det(e).v()?,
    };
    let mut total = XiPoly::zero(e.q());
    for (c, leaf) in f.leaves() {
        let v = match cfg.strategy {
            Strategy::Fast => fast_leaf(e, ctx, &leaf, vals, xi_quotient)?,
            Strategy::Brute => brute_leaf(e, ctx, &leaf, &d1, vals, xi_quotient, cfg)?,
        };
        total = total.add(&v.scale(c));
    }
    Ok(total.shift_xi(-shift, 0))
}

/// Core set of v_E(A) for a leaf.
fn core_alphas(e: i64, leaf: &TestFnG, d: DeltaVals, xi_quotient: bool) -> Vec<i64> {
    if xi_quotient {
        return (0..e).collect();
    }
    let from_det = |m: i64| {
        let num = e * (m - d.vdet);
        if num.rem_euclid(2) == 0 {
            vec![num / 2]
        } else {
            vec![]
        }
    };
    match leaf {
        TestFnG::Cm(m) | TestFnG::IntegralDetMG(m) => from_det(*m),
        TestFnG::KepsM(m) if *m >= 1 => vec![0],
        TestFnG::KepsM(_) => from_det(0),
        _ => vec![],
    }
}

fn centre_alpha(e: i64, leaf: &TestFnG, d: DeltaVals) -> i64 {
    let m = match leaf {
        TestFnG::Cm(m) | TestFnG::IntegralDetMG(m) => *m,
        TestFnG::KepsM(m) if *m >= 1 => return 0,
        _ => 0,
    };
    (e * (m - d.vdet)).div_euclid(2)
}

fn fast_leaf(
    e: &QuadExt,
    ctx: &MeasureContext,
    leaf: &TestFnG,
    d: DeltaVals,
    xi_quotient: bool,
) -> Result<XiPoly> {
    let ee = e.e();
    let q = e.q();
    let full = ctx.vol_units_e().mul(&ctx.vol_e_mod_f());
    let mut out = XiPoly::zero(q);
    let integral = |alpha: i64| alpha >= 0 && d.vb + alpha >= 0 && d.vb + alpha + ee * d.veps >= 0;
    match leaf {
        TestFnG::Cm(_) | TestFnG::IntegralDetMG(_) => {
            for alpha in core_alphas(ee, leaf, d, false) {
                let primitive = alpha.min(d.vb + alpha) == 0;
                if integral(alpha) && (primitive || matches!(leaf, TestFnG::IntegralDetMG(_))) {
                    out = out.add(&xi_weight(q, alpha).mul(&full));
                }
            }
        }
        TestFnG::KepsM(m) | TestFnG::KepsMZ(m) if *m >= 1 => {
            if d.vb >= *m && d.vb + ee * d.veps >= *m && d.vdet == 0 {
                out = ctx.vol_one_units_e(*m).mul(&ctx.vol_e_mod_f());
            }
        }
        TestFnG::KepsM(_) => {
            for alpha in core_alphas(ee, leaf, d, false) {
                if integral(alpha) {
                    out = out.add(&xi_weight(q, alpha).mul(&full));
                }
            }
        }
        TestFnG::KepsMZ(_) => {
            for alpha in core_alphas(ee, leaf, d, xi_quotient) {
                let nv = 2 * alpha / ee + d.vdet;
                if nv.rem_euclid(2) != 0 {
                    continue;
                }
                if integral(alpha - ee * (nv / 2)) {
                    out = out.add(&xi_weight(q, alpha).mul(&full));
                }
            }
        }
        TestFnG::Lin(_) => return Err(RtfError::Config("combination passed as a leaf".into())),
    }
    Ok(out)
}

/// Key of a unit modulo 1 + p_E^n.
fn unit_key(y: &ExtElem, n: i64) -> String {
    match y {
        ExtElem::Field(x) => x.exact_part(n).to_string(),
        ExtElem::Pair(a, b) => format!("{}|{}", a.exact_part(n), b.exact_part(n)),
    }
}

/// Norm-one classes sigma = conj(h1) / h1 with their share of Vol(T/Z).
fn sigma_classes(e: &QuadExt, ctx: &MeasureContext, n: i64) -> Result<Vec<(ExtElem, XiPoly)>> {
    let units = e.shell_reps(0, n)?;
    let mut h1s = units.clone();
    if e.flavor() != Flavor::Unramified {
        let pi = e.uniformizer();
        h1s.extend(units.iter().map(|u| e.mul(&pi, u)));
    }
    let mut classes: BTreeMap<String, (ExtElem, i128)> = BTreeMap::new();
    for h in &h1s {
        let s = e.div(&e.conj(h), h)?;
        let key = unit_key(&s, n);
        classes.entry(key).or_insert_with(|| (s, 0)).1 += 1;
    }
    let total = h1s.len() as i128;
    Ok(classes
        .into_values()
        .map(|(s, k)| (s, ctx.vol_e_mod_f().scale(Q::new(k, total))))
        .collect())
}

fn brute_leaf(
    e: &QuadExt,
    ctx: &MeasureContext,
    leaf: &TestFnG,
    d1: &QuatElem,
    d: DeltaVals,
    xi_quotient: bool,
    cfg: &EngineConfig,
) -> Result<XiPoly> {
    let ee = e.e();
    let q = e.q();
    let n = leaf.depth() + cfg.depth_margin;
    let core = core_alphas(ee, leaf, d, xi_quotient);
    let alphas: Vec<i64> = if xi_quotient {
        core.clone()
    } else {
        let c = centre_alpha(ee, leaf, d);
        (c - cfg.guard.max(0)..=c + cfg.guard.max(0)).collect()
    };
    let units = e.shell_reps(0, n)?;
    let sigmas = sigma_classes(e, ctx, n)?;
    let cells = (alphas.len() * units.len() * sigmas.len()) as u64;
    if cells > cfg.budget {
        return Err(RtfError::BudgetExceeded(format!(
            "{cells} cells for {leaf}"
        )));
    }
    let pi = e.uniformizer();
    let unit_w = ctx.vol_units_e().scale(Q::new(1, units.len() as i128));
    let mut out = XiPoly::zero(q);
    for alpha in alphas {
        let ta = e.pow(&pi, alpha)?;
        let mut shell = XiPoly::zero(q);
        for (sigma, w) in &sigmas {
            let mut acc = Q::zero();
            for u in &units {
                let a = e.mul(&ta, u);
                let b = e.mul(&e.mul(&d1.b, &e.conj(&a)), sigma);
                let val = leaf.eval(e, &QuatElem::new(a, b, d1.eps.clone()))?;
                if !val.is_zero() {
                    if !core.contains(&alpha) {
                        return Err(RtfError::SupportBoundViolated(format!(
                            "{leaf} is nonzero at v_E(A) = {alpha}"
                        )));
                    }
                    acc += val;
                }
            }
            shell = shell.add(&w.scale(acc));
        }
        out = out.add(&shell.mul(&unit_w).shift_xi(alpha, 0));
    }
    Ok(out)
}
