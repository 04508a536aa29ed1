//! Shape of x -> O(delta(x), f) over a valuation window: local constancy,
//! vanishing near 1, constancy near 0 and the behavior near infinity.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::g_side::eval_orbital_g_at_x;
use super::testfn::TestFnG;
use super::EngineConfig;
use crate::base_arith::laurent::LocalElem;
use crate::base_arith::measure::MeasureContext;
use crate::base_arith::scalar::XiPoly;
use crate::error::{Result, RtfError};
use crate::quad_ext::{random_elem, QuadExt};

/// One sampled point.
#[derive(Debug, Clone, serde::Serialize)]
pub struct ProfilePoint {
    pub x: String,
    pub vx: i64,
    pub v1x: i64,
    pub value: String,
}

/// A checked property with a witness.
#[derive(Debug, Clone, serde::Serialize)]
pub struct ProfileCheck {
    pub name: String,
    pub holds: bool,
    pub witness: String,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct Profile {
    pub function: String,
    pub points: Vec<ProfilePoint>,
    pub checks: Vec<ProfileCheck>,
    /// (v(x), v(1 - x)) pairs with a nonzero value.
    pub support: Vec<(i64, i64)>,
}

impl Profile {
    pub fn check(&self, name: &str) -> Option<bool> {
        self.checks.iter().find(|c| c.name == name).map(|c| c.holds)
    }
}

const SAMPLES: usize = 3;
const TRIES: usize = 64;

/// Profiles f over v(x) in [lo, hi]; samples x in eps Nm(E^x) with a seeded
/// generator, adding x = 1 + t^j u near 1.
#[allow(clippy::too_many_arguments)]
pub fn orbital_profile(
    e: &QuadExt,
    ctx: &MeasureContext,
    f: &TestFnG,
    eps: &LocalElem,
    lo: i64,
    hi: i64,
    seed: u64,
    cfg: &EngineConfig,
) -> Result<Profile> {
    if hi - lo < 4 {
        return Err(RtfError::WindowTooSmall(format!(
            "[{lo}, {hi}] needs at least 5 valuations"
        )));
    }
    let fb = e.base();
    let one = LocalElem::one(fb);
    let xi_q = f.xi_invariant();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points: Vec<(LocalElem, XiPoly)> = Vec::new();
    let admissible = |x: &LocalElem| -> Result<bool> {
        if x.is_zero() || x.sub(&one).is_zero() {
            return Ok(false);
        }
        e.norm_membership(&x.div(eps)?)
    };
    for v in lo..=hi {
        let mut found = 0;
        for _ in 0..TRIES {
            if found == SAMPLES {
                break;
            }
            let x = random_elem(fb, &mut rng, v, 3);
            if admissible(&x)? {
                let val = eval_orbital_g_at_x(e, ctx, f, eps, &x, xi_q, cfg)?;
                points.push((x, val));
                found += 1;
            }
        }
    }
    let mut near_one = Vec::new();
    for j in 1..=hi.max(1) {
        for _ in 0..SAMPLES {
            let x = one.add(&random_elem(fb, &mut rng, j, 3));
            if admissible(&x)? {
                let val = eval_orbital_g_at_x(e, ctx, f, eps, &x, xi_q, cfg)?;
                near_one.push((x.clone(), val.clone()));
                points.push((x, val));
            }
        }
    }
    let key = |x: &LocalElem| -> Result<(i64, i64)> { Ok((x.v()?, x.sub(&one).v()?)) };
    let mut checks = Vec::new();

    // local constancy: equal (v(x), v(1-x)) give equal values
    let mut plateau = (true, String::new());
    for (i, (x, a)) in points.iter().enumerate() {
        for (y, b) in &points[i + 1..] {
            if key(x)? == key(y)? && a != b {
                plateau = (false, format!("x={x}: {a}; x={y}: {b}"));
            }
        }
    }
    checks.push(ProfileCheck {
        name: "locally_constant".into(),
        holds: plateau.0,
        witness: plateau.1,
    });

    // vanishing near 1: the deepest sampled v(1-x)
    let deep = near_one
        .iter()
        .map(|(x, _)| x.sub(&one).v().unwrap_or(0))
        .max();
    let (holds, witness) = match deep {
        Some(d) => {
            let bad: Vec<String> = near_one
                .iter()
                .filter(|(x, v)| x.sub(&one).v().unwrap_or(0) == d && !v.is_zero())
                .map(|(x, v)| format!("x={x}: {v}"))
                .collect();
            (
                bad.is_empty(),
                if bad.is_empty() {
                    format!("0 at v(1-x) = {d}")
                } else {
                    bad.join("; ")
                },
            )
        }
        None => (true, "1 is not in the eps class".into()),
    };
    checks.push(ProfileCheck {
        name: "vanishes_near_1".into(),
        holds,
        witness,
    });

    // constant near 0: the two largest valuations share the value
    let at = |v: i64| -> Vec<&XiPoly> {
        points
            .iter()
            .filter(|(x, _)| x.v().ok() == Some(v) && x.sub(&one).v().ok() == Some(0))
            .map(|(_, y)| y)
            .collect()
    };
    let top: Vec<&XiPoly> = at(hi)
        .into_iter()
        .chain(at(hi - 1))
        .chain(at(hi - 2))
        .collect();
    let c0 = top.windows(2).all(|w| w[0] == w[1]);
    checks.push(ProfileCheck {
        name: "constant_near_0".into(),
        holds: c0,
        witness: top.first().map_or("no samples".into(), |v| v.to_string()),
    });

    // near infinity: c * xi^{a(v)} with the same c and a affine in v
    let mut low: Vec<(i64, &XiPoly)> = Vec::new();
    for v in lo..lo + 4 {
        if let Some(y) = at(v).first() {
            low.push((v, y));
        }
    }
    let monos: Option<Vec<(i64, i64, String)>> = low
        .iter()
        .map(|(v, y)| {
            if y.is_zero() {
                Some((*v, 0, "0".to_string()))
            } else {
                y.as_monomial().map(|(m, c)| (*v, m.xi, format!("{c}")))
            }
        })
        .collect();
    let inf_ok = match &monos {
        Some(ms) if ms.len() >= 2 => {
            let same_c = ms.windows(2).all(|w| w[0].2 == w[1].2);
            let slope = |a: &(i64, i64, String), b: &(i64, i64, String)| (b.1 - a.1, b.0 - a.0);
            let s0 = slope(&ms[0], &ms[1]);
            let affine = ms.windows(2).all(|w| {
                let s = slope(&w[0], &w[1]);
                s.0 * s0.1 == s0.0 * s.1
            });
            same_c && affine
        }
        Some(_) => true,
        None => false,
    };
    checks.push(ProfileCheck {
        name: "near_infinity_character".into(),
        holds: inf_ok,
        witness: low
            .iter()
            .map(|(v, y)| format!("v={v}: {y}"))
            .collect::<Vec<_>>()
            .join("; "),
    });

    let mut support: Vec<(i64, i64)> = Vec::new();
    for (x, v) in &points {
        if !v.is_zero() {
            let k = key(x)?;
            if !support.contains(&k) {
                support.push(k);
            }
        }
    }
    support.sort();
    let points = points
        .iter()
        .map(|(x, v)| {
            let (vx, v1x) = key(x)?;
            Ok(ProfilePoint {
                x: x.to_string(),
                vx,
                v1x,
                value: v.to_string(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Profile {
        function: f.to_string(),
        points,
        checks,
        support,
    })
}
