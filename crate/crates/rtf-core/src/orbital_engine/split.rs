//! Split E = F x F. Both sides live in GL2(F) with the diagonal torus.
//!
//! S-side: int Phi(z diag(a, 1) [[x, 1], [1, 1]] diag(b, 1))
//! Omega1^{-1}(a) Omega2^{-1}(b) omega^{-1}(z) da db dz.
//!
//! G-side: int_{H/Z} int_H f(h1^{-1} delta h2) Omega(h1) Omega^{-1}(h2) with
//! delta = [[1, x], [1, 1]] (invariant bc / ad = x), h1 = diag(c, 1) and
//! h2 = diag(a, b); f is taken to be f(g) = Phi(g w).

use num_traits::{One, Zero};

use super::{EngineConfig, OmegaConvention, Strategy};
use crate::base_arith::laurent::{shell_representatives, LocalElem};
use crate::base_arith::measure::{ExtShape, MeasureContext};
use crate::base_arith::scalar::{Mono, XiPoly, Q};
use crate::error::{Result, RtfError};
use crate::orbit_geometry::{BaseRing, Mat2};
use crate::quad_ext::{Flavor, QuadExt};

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum SplitSide {
    S,
    G,
}

/// Test functions on GL2(F).
#[derive(Debug, Clone, PartialEq)]
pub enum SplitPhi {
    /// g with v(g_ij - c_ij) >= k_ij (row-major) and v(det g) = det.
    Box {
        centre: Mat2<LocalElem>,
        levels: [i64; 4],
        det: i64,
    },
    Lin(Vec<(Q, SplitPhi)>),
}

impl SplitPhi {
    /// 1 on GL2(O_F).
    pub fn kcap(e: &QuadExt) -> Self {
        let z = LocalElem::zero(e.base());
        SplitPhi::Box {
            centre: Mat2::new(z.clone(), z.clone(), z.clone(), z),
            levels: [0; 4],
            det: 0,
        }
    }

    pub fn eval(&self, g: &Mat2<LocalElem>) -> Result<Q> {
        match self {
            SplitPhi::Box {
                centre,
                levels,
                det,
            } => {
                let r = BaseRing(g.a.field().clone());
                let d = g.det(&r);
                if d.is_zero() || d.v()? != *det {
                    return Ok(Q::zero());
                }
                for ((x, c), k) in g.entries().iter().zip(centre.entries()).zip(levels) {
                    let diff = x.sub(c);
                    if !diff.is_zero() && diff.v()? < *k {
                        return Ok(Q::zero());
                    }
                }
                Ok(Q::one())
            }
            SplitPhi::Lin(v) => {
                let mut acc = Q::zero();
                for (c, f) in v {
                    acc += c * f.eval(g)?;
                }
                Ok(acc)
            }
        }
    }

    fn leaves(&self) -> Vec<(Q, SplitPhi)> {
        match self {
            SplitPhi::Lin(v) => v
                .iter()
                .flat_map(|(c, f)| f.leaves().into_iter().map(move |(d, g)| (c * d, g)))
                .collect(),
            f => vec![(Q::one(), f.clone())],
        }
    }

    /// Entry lower bounds on the support.
    fn lower(&self) -> Result<[i64; 4]> {
        let SplitPhi::Box { centre, levels, .. } = self else {
            return Err(RtfError::Config("bounds of a combination".into()));
        };
        let mut out = [0; 4];
        for (i, c) in centre.entries().iter().enumerate() {
            out[i] = if c.is_zero() {
                levels[i]
            } else {
                c.v()?.min(levels[i])
            };
        }
        Ok(out)
    }

    fn det_val(&self) -> i64 {
        match self {
            SplitPhi::Box { det, .. } => *det,
            SplitPhi::Lin(_) => 0,
        }
    }

    /// Unit depth making the function constant on cells with the given
    /// entry valuations.
    fn depth_at(&self, vals: [i64; 4]) -> i64 {
        match self {
            SplitPhi::Box { levels, .. } => (0..4)
                .map(|i| levels[i] - vals[i])
                .max()
                .unwrap_or(1)
                .max(1),
            SplitPhi::Lin(_) => 1,
        }
    }

    /// Depends on entry valuations only.
    fn valuation_only(&self) -> bool {
        match self {
            SplitPhi::Box { centre, .. } => centre.entries().iter().all(|c| c.is_zero()),
            SplitPhi::Lin(v) => v.iter().all(|(_, f)| f.valuation_only()),
        }
    }
}

/// The split orbital integral at s = 0.
pub fn eval_orbital_split(
    e: &QuadExt,
    ctx: &MeasureContext,
    side: SplitSide,
    phi: &SplitPhi,
    x: &LocalElem,
    cfg: &EngineConfig,
) -> Result<XiPoly> {
    if e.flavor() != Flavor::Split || ctx.shape != ExtShape::Split {
        return Err(RtfError::Config(
            "split orbital integrals need the split flavor".into(),
        ));
    }
    super::s_side::check_x(x)?;
    let mut total = XiPoly::zero(e.q());
    for (c, leaf) in phi.leaves() {
        let v = match side {
            SplitSide::S => side_s(e, ctx, &leaf, x, cfg)?,
            SplitSide::G => side_g(e, ctx, &leaf, x, cfg)?,
        };
        total = total.add(&v.scale(c));
    }
    Ok(total)
}

fn weight(q: u32, a1: i64, a2: i64) -> XiPoly {
    XiPoly::term(
        q,
        Mono {
            xi: a1,
            xi2: a2,
            sqrt_q: 0,
        },
        Q::one(),
    )
}

/// Sum of Phi over (t^{v1} u1, t^{v2} u2, t^{v3} u3) for unit classes u_i,
/// times the cell volume; `build` maps the three variables to the matrix.
#[allow(clippy::too_many_arguments)]
fn shell_sum(
    e: &QuadExt,
    ctx: &MeasureContext,
    leaf: &SplitPhi,
    vals: [i64; 4],
    vs: [i64; 3],
    core: bool,
    cfg: &EngineConfig,
    cost: &mut u64,
    build: &dyn Fn(&LocalElem, &LocalElem, &LocalElem) -> Mat2<LocalElem>,
) -> Result<Q> {
    let f = e.base();
    let mono = |k: i64| LocalElem::monomial(f, 1, k);
    if cfg.strategy == Strategy::Fast && leaf.valuation_only() {
        let g = build(&mono(vs[0]), &mono(vs[1]), &mono(vs[2]));
        let _ = ctx;
        return leaf.eval(&g);
    }
    // guard cells only probe the support bound, one unit class per residue
    let n = if core {
        leaf.depth_at(vals) + cfg.depth_margin
    } else {
        1
    };
    let units = shell_representatives(f, 0, n)?;
    let k = units.len() as u64;
    *cost += k * k * k;
    if *cost > cfg.budget {
        return Err(RtfError::BudgetExceeded(format!("{cost} split cells")));
    }
    let (t0, t1, t2) = (mono(vs[0]), mono(vs[1]), mono(vs[2]));
    let mut acc = Q::zero();
    for u0 in &units {
        let y0 = t0.mul(u0);
        for u1 in &units {
            let y1 = t1.mul(u1);
            for u2 in &units {
                let val = leaf.eval(&build(&y0, &y1, &t2.mul(u2)))?;
                if !val.is_zero() {
                    if !core {
                        return Err(RtfError::SupportBoundViolated(format!(
                            "split Phi nonzero at shell {vs:?}"
                        )));
                    }
                    acc += val;
                }
            }
        }
    }
    Ok(acc / Q::from_integer((k * k * k) as i128))
}

fn side_s(
    e: &QuadExt,
    ctx: &MeasureContext,
    leaf: &SplitPhi,
    x: &LocalElem,
    cfg: &EngineConfig,
) -> Result<XiPoly> {
    let q = e.q();
    let l = leaf.lower()?;
    let d = leaf.det_val();
    let vx = x.v()?;
    let vx1 = x.sub(&LocalElem::one(e.base())).v()?;
    let g = cfg.guard.max(0);
    let vol = ctx
        .vol_units_f()
        .mul(&ctx.vol_units_f())
        .mul(&ctx.vol_units_f());
    let (zlo, zhi) = (l[3], d - vx1 + vx - l[0]);
    let mut out = XiPoly::zero(q);
    let mut cost = 0u64;
    let build = |z: &LocalElem, a: &LocalElem, b: &LocalElem| {
        let za = z.mul(a);
        Mat2::new(za.mul(x).mul(b), za, z.mul(b), z.clone())
    };
    for zv in zlo.min(zhi) - g..=zlo.max(zhi) + g {
        let s = d - 2 * zv - vx1;
        let (alo, ahi) = (l[1] - zv, s - l[2] + zv);
        for av in alo.min(ahi) - g..=alo.max(ahi) + g {
            let bv = s - av;
            let core = zv >= zlo && zv <= zhi && av >= alo && av <= ahi;
            let vals = [zv + av + bv + vx, zv + av, zv + bv, zv];
            let c = shell_sum(
                e,
                ctx,
                leaf,
                vals,
                [zv, av, bv],
                core,
                cfg,
                &mut cost,
                &build,
            )?;
            if !c.is_zero() {
                let zx = match cfg.omega {
                    OmegaConvention::Restriction => zv,
                    OmegaConvention::Trivial => 0,
                };
                out = out.add(&weight(q, av + zx, bv + zx).mul(&vol).scale(c));
            }
        }
    }
    Ok(out)
}

fn side_g(
    e: &QuadExt,
    ctx: &MeasureContext,
    leaf: &SplitPhi,
    x: &LocalElem,
    cfg: &EngineConfig,
) -> Result<XiPoly> {
    let q = e.q();
    let l = leaf.lower()?;
    let d = leaf.det_val();
    let vx = x.v()?;
    let vx1 = x.sub(&LocalElem::one(e.base())).v()?;
    let g = cfg.guard.max(0);
    let vol = ctx
        .vol_units_f()
        .mul(&ctx.vol_units_f())
        .mul(&ctx.vol_units_f());
    let r = BaseRing(e.base().clone());
    let f = e.base();
    let (zero, one) = (LocalElem::zero(f), LocalElem::one(f));
    let delta = Mat2::new(one.clone(), x.clone(), one.clone(), one.clone());
    let w = Mat2::new(zero.clone(), one.clone(), one.clone(), zero.clone());
    // h1^{-1} delta h2 w with h1 = diag(c, 1), h2 = diag(a, b)
    let build = |c: &LocalElem, a: &LocalElem, b: &LocalElem| {
        let h1i = Mat2::new(
            c.inv().expect("unit class"),
            zero.clone(),
            zero.clone(),
            one.clone(),
        );
        let h2 = Mat2::new(a.clone(), zero.clone(), zero.clone(), b.clone());
        h1i.mul(&r, &delta).mul(&r, &h2).mul(&r, &w)
    };
    // g w = [[x b / c, a / c], [b, a]]; P = v(a) - v(c), v(b) = d - v(x-1) - P
    let (plo, phi_) = (l[1], d - vx1 - l[2]);
    let mut out = XiPoly::zero(q);
    let mut cost = 0u64;
    for p in plo.min(phi_) - g..=plo.max(phi_) + g {
        let bv = d - vx1 - p;
        let (clo, chi) = (l[3] - p, vx + bv - l[0]);
        for cv in clo.min(chi) - g..=clo.max(chi) + g {
            let av = p + cv;
            let core = p >= plo && p <= phi_ && cv >= clo && cv <= chi;
            let vals = [vx + bv - cv, p, bv, av];
            let s = shell_sum(
                e,
                ctx,
                leaf,
                vals,
                [cv, av, bv],
                core,
                cfg,
                &mut cost,
                &build,
            )?;
            if !s.is_zero() {
                // Omega(h1) Omega^{-1}(h2) = xi1^{-v(c)} xi1^{v(a)} xi2^{v(b)}
                out = out.add(&weight(q, av - cv, bv).mul(&vol).scale(s));
            }
        }
    }
    Ok(out)
}
