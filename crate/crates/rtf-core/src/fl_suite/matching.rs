//! Matching of test functions: O(x, Phi) at s = 0 against O(delta(x), f)
//! when x lies in eps Nm(E^x), and O(x, Phi) = 0 otherwise for purely
//! matching pairs. Includes the explicit smooth matching functions built
//! from Phi_{l, xi, n} and its primed variant.

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::report::{params, Case, CaseX, Provenance, VerificationReport};
use super::{field, list, nonempty, run_cases, sample_xs, SuiteOptions};
use crate::base_arith::laurent::LocalElem;
use crate::base_arith::measure::{index_inv, MeasureContext};
use crate::base_arith::scalar::{XiPoly, Q};
use crate::error::{Result, RtfError};
use crate::orbit_geometry::{BaseRing, Mat2};
use crate::orbital_engine::split::{eval_orbital_split, SplitPhi, SplitSide};
use crate::orbital_engine::testfn::trace_ideal_exp;
use crate::orbital_engine::{eval_orbital_g_at_x, eval_orbital_s, EngineConfig, TestFnG, TestFnS};
use crate::quad_ext::{random_elem, Flavor, QuadExt};

/// A test function on S with coefficients that may involve sqrt(q) and xi.
#[derive(Debug, Clone, PartialEq)]
pub struct SPhi(pub Vec<(XiPoly, TestFnS)>);

impl SPhi {
    pub fn single(q: u32, phi: TestFnS) -> Self {
        SPhi(vec![(XiPoly::one(q), phi)])
    }

    /// O(x, Phi) at s = 0, by linearity.
    pub fn value_at_zero(
        &self,
        e: &QuadExt,
        ctx: &MeasureContext,
        x: &LocalElem,
        cfg: &EngineConfig,
    ) -> Result<XiPoly> {
        let mut acc = XiPoly::zero(e.q());
        for (c, phi) in &self.0 {
            acc = acc.add(&eval_orbital_s(e, ctx, phi, x, cfg)?.value_at_zero().mul(c));
        }
        Ok(acc)
    }
}

impl std::fmt::Display for SPhi {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(c, phi)| format!("({c}) {phi}"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// One case per x: S against G on eps Nm(E^x); S against 0 elsewhere when
/// `purely` holds (other x are skipped).
#[allow(clippy::too_many_arguments)]
pub fn verify_matching_defs(
    e: &QuadExt,
    ctx: &MeasureContext,
    f: &TestFnG,
    phi: &SPhi,
    eps: &LocalElem,
    xs: &[LocalElem],
    purely: bool,
    cfg: &EngineConfig,
    label: &str,
) -> Result<Vec<Case>> {
    let q = e.q();
    let chosen: Vec<(&LocalElem, bool)> = xs
        .iter()
        .map(|x| Ok((x, e.norm_membership(&x.div(eps)?)?)))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .filter(|(_, inside)| *inside || purely)
        .collect();
    run_cases(&chosen, |(x, inside)| {
        let s = phi.value_at_zero(e, ctx, x, cfg)?;
        if *inside {
            let g = eval_orbital_g_at_x(e, ctx, f, eps, x, f.xi_invariant(), cfg)?;
            Ok(Case::compare(
                format!("{label} eps={eps}"),
                CaseX::of(x),
                &s,
                &g,
            ))
        } else {
            Ok(Case::compare(
                format!("{label} eps={eps} off-class"),
                CaseX::of(x),
                &s,
                &XiPoly::zero(q),
            ))
        }
    })
}

/// A random box function around the orbit of x, split case: centre
/// z diag(a, 1) [[x, 1], [1, 1]] diag(b, 1) with each entry widened by 0..2.
pub fn random_split_box(e: &QuadExt, rng: &mut ChaCha8Rng, x: &LocalElem) -> Result<SplitPhi> {
    let f = e.base();
    let r = BaseRing(f.clone());
    let vz = rng.random_range(-1..2);
    let z = random_elem(f, rng, vz, 2);
    let va = rng.random_range(-1..2);
    let a = random_elem(f, rng, va, 2);
    let vb = rng.random_range(-1..2);
    let b = random_elem(f, rng, vb, 2);
    let za = z.mul(&a);
    let c = Mat2::new(za.mul(x).mul(&b), za, z.mul(&b), z.clone());
    let mut levels = [0; 4];
    for (i, y) in c.entries().iter().enumerate() {
        let widen = rng.random_range(0..3);
        levels[i] = y.v()? + widen;
    }
    let det = c.det(&r).v()?;
    Ok(SplitPhi::Box {
        centre: c,
        levels,
        det,
    })
}

/// `pairs` random (x, Phi) per q in the split case; S and G must agree.
pub fn verify_split_matching(
    qs: &[u32],
    pairs: usize,
    opts: &SuiteOptions,
) -> Result<VerificationReport> {
    nonempty(qs)?;
    if pairs == 0 {
        return Err(RtfError::GridEmpty);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut grid = Vec::new();
    for &q in qs {
        let f = field(q)?;
        let e = QuadExt::new(&f, Flavor::Split)?;
        for _ in 0..pairs {
            let vx = rng.random_range(-2..3);
            let x = sample_xs(&f, &mut rng, vx, 1).remove(0);
            let kcap = rng.random_range(0..3) == 0;
            let phi = if kcap {
                SplitPhi::kcap(&e)
            } else {
                random_split_box(&e, &mut rng, &x)?
            };
            grid.push((q, x, phi));
        }
    }
    let cfg = opts.cfg;
    let cases = run_cases(&grid, |(q, x, phi)| {
        let e = QuadExt::new(x.field(), Flavor::Split)?;
        let ctx = MeasureContext::new(*q, opts.c_psi, e.shape());
        let s = eval_orbital_split(&e, &ctx, SplitSide::S, phi, x, &cfg)?;
        let g = eval_orbital_split(&e, &ctx, SplitSide::G, phi, x, &cfg)?;
        let label = match phi {
            SplitPhi::Box { levels, det, .. } => format!("q={q} box{levels:?} det={det}"),
            SplitPhi::Lin(_) => format!("q={q} lin"),
        };
        Ok(Case::compare(label, CaseX::of(x), &s, &g))
    })?;
    let p = params([("q", list(qs)), ("pairs", pairs.to_string())]);
    Ok(VerificationReport::new(
        "match-split",
        p,
        cases,
        Provenance::new(opts.seed, opts.c_psi, &cfg),
    ))
}

/// The explicit smooth matching of 1_{K_{eps, m}}: with n = 2m + v(eps) - v_E(tr),
/// Phi_1 = x' Phi_{l', tr', n'} - x Phi_{l, tr, n} matches it,
/// Phi_2 = eta(eps) (x' Phi'_{l', tr', n'} - x Phi'_{l, tr, n}) matches it and
/// (Phi_1 + Phi_2) / 2 matches it purely. x and x' solve
/// A x' - B x = C and x' q_E^{-l'} = x q_E^{-l}.
#[derive(Debug, Clone, PartialEq)]
pub struct SmoothMatchingData {
    pub m: i64,
    pub eps: LocalElem,
    pub tr: LocalElem,
    pub tr_prime: LocalElem,
    pub l: i64,
    pub l_prime: i64,
    pub n: i64,
    pub n_prime: i64,
    pub x: XiPoly,
    pub x_prime: XiPoly,
    pub eta_eps: i32,
}

impl SmoothMatchingData {
    fn pair(&self, prime: bool, scale: &XiPoly) -> SPhi {
        let mk = |l: i64, tr: &LocalElem, n: i64| {
            if prime {
                TestFnS::KlxiNPrime {
                    l,
                    tr_xi: tr.clone(),
                    n,
                }
            } else {
                TestFnS::KlxiN {
                    l,
                    tr_xi: tr.clone(),
                    n,
                }
            }
        };
        SPhi(vec![
            (
                self.x_prime.mul(scale),
                mk(self.l_prime, &self.tr_prime, self.n_prime),
            ),
            (self.x.mul(scale).neg(), mk(self.l, &self.tr, self.n)),
        ])
    }

    pub fn phi1(&self) -> SPhi {
        self.pair(false, &XiPoly::one(self.x.q()))
    }

    pub fn phi2(&self) -> SPhi {
        self.pair(true, &XiPoly::int(self.x.q(), self.eta_eps as i64))
    }

    /// (Phi_1 + Phi_2) / 2.
    pub fn phi(&self) -> SPhi {
        let half = XiPoly::constant(self.x.q(), Q::new(1, 2));
        let mut v = self.pair(false, &half).0;
        v.extend(
            self.pair(true, &half.scale(Q::from_integer(self.eta_eps as i128)))
                .0,
        );
        SPhi(v)
    }
}

/// Traces used in the construction: unramified tr = t, tr' = 1; ramified
/// tr = 1 and tr' the first residue unit with eta(tr') = -eta(tr).
fn traces(e: &QuadExt) -> Result<(LocalElem, LocalElem)> {
    let f = e.base();
    match e.flavor() {
        Flavor::Unramified => Ok((LocalElem::uniformizer(f), LocalElem::one(f))),
        Flavor::Ramified { .. } => {
            let tr = LocalElem::one(f);
            let target = -e.eta(&tr)?;
            for c in f.units() {
                let u = LocalElem::monomial(f, c, 0);
                if e.eta(&u)? == target {
                    return Ok((tr, u));
                }
            }
            Err(RtfError::Config("no unit with the opposite eta".into()))
        }
        Flavor::Split => Err(RtfError::Config(
            "smooth matching needs a nonsplit E".into(),
        )),
    }
}

pub fn smooth_matching_data(
    e: &QuadExt,
    ctx: &MeasureContext,
    m: i64,
    eps: &LocalElem,
) -> Result<SmoothMatchingData> {
    if m < 1 {
        return Err(RtfError::Config("K_{eps, m} needs m >= 1".into()));
    }
    let q = e.q();
    let (tr, tr_prime) = traces(e)?;
    let (l, l_prime) = (3, 2);
    let ve = eps.v()?;
    let n = 2 * m + ve - e.v_e(&e.embed(&tr))?;
    let n_prime = 2 * m + ve - e.v_e(&e.embed(&tr_prime))?;
    if n < 1 || n_prime < 1 {
        return Err(RtfError::Config(format!(
            "n = {n}, n' = {n_prime} must be positive (raise m)"
        )));
    }
    let qe = ctx.q_e() as i128;
    // A, B and C over the common volume Vol(O_E^x) Vol(O_F^x)
    let rel = |l: i64, tr: &LocalElem| -> Result<i64> { Ok(trace_ideal_exp(e, l) - tr.v()?) };
    let a = Q::from_integer(e.eta(&tr_prime.neg())? as i128)
        * index_inv(ctx.q_e(), n_prime)
        * index_inv(q, rel(l_prime, &tr_prime)?);
    let b = Q::from_integer(e.eta(&tr.neg())? as i128)
        * index_inv(ctx.q_e(), n)
        * index_inv(q, rel(l, &tr)?);
    let eta_eps = e.eta(eps)?;
    let c = ctx
        .vol_one_units_e(m)
        .mul(&ctx.vol_e_mod_f())
        .scale(Q::from_integer(eta_eps as i128))
        .mul(&XiPoly::q_half_pow(
            q,
            -(ctx.half_exp_units_e() + ctx.half_exp_units_f()),
        ));
    // x' = x q_E^{l' - l}, so x (A q_E^{l' - l} - B) = C
    let ratio = Q::from_integer(qe).pow((l_prime - l) as i32);
    let det = a * ratio - b;
    if det == Q::from_integer(0) {
        return Err(RtfError::Config(
            "the linear system for x, x' is singular".into(),
        ));
    }
    let x = c.scale(Q::from_integer(1) / det);
    let x_prime = x.scale(ratio);
    Ok(SmoothMatchingData {
        m,
        eps: eps.clone(),
        tr,
        tr_prime,
        l,
        l_prime,
        n,
        n_prime,
        x,
        x_prime,
        eta_eps,
    })
}

/// One eps per class of F^x / Nm(E^x), with v(eps) in {0, 1}.
pub fn eps_classes(e: &QuadExt) -> Result<Vec<LocalElem>> {
    let f = e.base();
    let mut out = vec![LocalElem::one(f)];
    for c in ["t", "g^1", "g^1*t"] {
        let eps = LocalElem::parse(f, c)?;
        if !e.norm_membership(&eps)? {
            out.push(eps);
            break;
        }
    }
    Ok(out)
}

/// Phi_1 and Phi_2 match 1_{K_{eps, m}}; their average matches purely.
pub fn verify_smooth_matching(
    q: u32,
    flavor: Flavor,
    ms: &[i64],
    opts: &SuiteOptions,
) -> Result<VerificationReport> {
    nonempty(ms)?;
    let f = field(q)?;
    let e = QuadExt::new(&f, flavor)?;
    let ctx = MeasureContext::new(q, opts.c_psi, e.shape());
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let cfg = opts.cfg;
    let mut cases = Vec::new();
    for &m in ms {
        for eps in eps_classes(&e)? {
            let data = match smooth_matching_data(&e, &ctx, m, &eps) {
                Ok(d) => d,
                // small m with eps = 1 leaves n < 1; that class is not covered
                Err(RtfError::Config(_)) if m < 2 => continue,
                Err(err) => return Err(err),
            };
            let top = (2 * m + eps.v()?) / e.e() + 2;
            let mut xs = Vec::new();
            for v in -1..=top {
                xs.extend(sample_xs(&f, &mut rng, v, opts.samples));
            }
            let target = TestFnG::KepsM(m);
            let lab = |s: &str| format!("{flavor} m={m} {s}");
            cases.extend(verify_matching_defs(
                &e,
                &ctx,
                &target,
                &data.phi1(),
                &eps,
                &xs,
                false,
                &cfg,
                &lab("phi1"),
            )?);
            cases.extend(verify_matching_defs(
                &e,
                &ctx,
                &target,
                &data.phi2(),
                &eps,
                &xs,
                false,
                &cfg,
                &lab("phi2"),
            )?);
            cases.extend(verify_matching_defs(
                &e,
                &ctx,
                &target,
                &data.phi(),
                &eps,
                &xs,
                true,
                &cfg,
                &lab("phi"),
            )?);
        }
    }
    nonempty(&cases)?;
    let p = params([
        ("q", q.to_string()),
        ("flavor", flavor.to_string()),
        ("m", list(ms)),
        ("samples", opts.samples.to_string()),
    ]);
    Ok(VerificationReport::new(
        "match-smooth",
        p,
        cases,
        Provenance::new(opts.seed, opts.c_psi, &cfg),
    ))
}

/// 1_{K_S} purely matches C_0 = 1_{GL2(O_F)} (unramified, eps = 1).
pub fn verify_kcap_purely(q: u32, vs: &[i64], opts: &SuiteOptions) -> Result<VerificationReport> {
    nonempty(vs)?;
    let f = field(q)?;
    let e = QuadExt::new(&f, Flavor::Unramified)?;
    let ctx = MeasureContext::new(q, opts.c_psi, e.shape());
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut xs = Vec::new();
    for &v in vs {
        xs.extend(sample_xs(&f, &mut rng, v, opts.samples));
    }
    let one = LocalElem::one(&f);
    let phi = SPhi::single(q, TestFnS::KcapS);
    let cases = verify_matching_defs(
        &e,
        &ctx,
        &TestFnG::Cm(0),
        &phi,
        &one,
        &xs,
        true,
        &opts.cfg,
        &format!("q={q} kcap"),
    )?;
    let p = params([
        ("q", q.to_string()),
        ("v", list(vs)),
        ("samples", opts.samples.to_string()),
    ]);
    Ok(VerificationReport::new(
        "match-kcap",
        p,
        cases,
        Provenance::new(opts.seed, opts.c_psi, &opts.cfg),
    ))
}
