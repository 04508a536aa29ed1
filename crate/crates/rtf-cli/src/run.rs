//! Dispatch from parsed arguments to the suites, and report emission.

use std::sync::Arc;

use serde::Serialize;

use rtf_lab::base_arith::fq::FqField;
use rtf_lab::base_arith::laurent::LocalElem;
use rtf_lab::base_arith::measure::MeasureContext;
use rtf_lab::base_arith::scalar::Q;
use rtf_lab::fl_suite::{
    verify_afl, verify_fl, verify_gauss_laws, verify_kcap_purely, verify_minf,
    verify_smooth_matching, verify_special_multiplicity_axioms, verify_split_matching, Case, CaseX,
    FnCandidate, MultiplicityCandidate, Provenance, SuiteOptions, UnramifiedCandidate,
    VerificationReport,
};
use rtf_lab::orbit_geometry::QuatElem;
use rtf_lab::orbital_engine::{
    eval_orbital_g_at_x, eval_orbital_s, AnyTestFn, EngineConfig, OmegaConvention, Strategy,
    TestFnG,
};
use rtf_lab::quad_ext::{Flavor, QuadExt};
use rtf_lab::RtfError;

use crate::args::{
    parse_grid, parse_qs, CandidateArg, Cli, Command, Common, FlavorArg, Format, MatchKind,
    OmegaArg, OrbitalCmd, StrategyArg,
};

/// Process exit statuses.
pub const EXIT_PASS: u8 = 0;
pub const EXIT_ERROR: u8 = 1;
pub const EXIT_MISMATCH: u8 = 2;

/// What a command produced.
#[derive(Debug)]
pub enum Outcome {
    Report(VerificationReport),
    Eval(EvalOutput),
}

/// A single orbital-integral evaluation.
#[derive(Debug, Serialize)]
pub struct EvalOutput {
    pub q: u32,
    pub flavor: String,
    pub phi: String,
    pub x: String,
    /// The integral as a Laurent polynomial in T = q_E^{-s}, or its value on G_eps.
    pub value: String,
    pub value_at_zero: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub derivative_at_zero: Option<String>,
}

impl Outcome {
    pub fn exit_code(&self) -> u8 {
        match self {
            Outcome::Report(r) if !r.pass() => EXIT_MISMATCH,
            _ => EXIT_PASS,
        }
    }

    pub fn render(&self, format: Format) -> String {
        match (self, format) {
            (Outcome::Report(r), Format::Table) => r.to_table(),
            (Outcome::Report(r), Format::Json) => json(r),
            (Outcome::Eval(v), Format::Json) => json(v),
            (Outcome::Eval(v), Format::Table) => {
                let mut s = format!(
                    "{} at x = {} (q = {}, {})\n  value: {}\n",
                    v.phi, v.x, v.q, v.flavor, v.value
                );
                s.push_str(&format!("  at s = 0: {}\n", v.value_at_zero));
                if let Some(d) = &v.derivative_at_zero {
                    s.push_str(&format!("  derivative at s = 0: {d}\n"));
                }
                s
            }
        }
    }
}

fn json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}

fn engine(c: &Common) -> EngineConfig {
    EngineConfig {
        strategy: match c.strategy {
            StrategyArg::Fast => Strategy::Fast,
            StrategyArg::Brute => Strategy::Brute,
        },
        omega: match c.omega {
            OmegaArg::Restriction => OmegaConvention::Restriction,
            OmegaArg::Trivial => OmegaConvention::Trivial,
        },
        depth_margin: c.depth,
        ..EngineConfig::default()
    }
}

fn suite_options(c: &Common) -> SuiteOptions {
    SuiteOptions {
        samples: c.samples,
        seed: c.seed,
        c_psi: c.c_psi,
        cfg: engine(c),
    }
}

fn grid(s: &str) -> Result<Vec<i64>, RtfError> {
    parse_grid(s).map_err(RtfError::Config)
}

fn qs(s: &str) -> Result<Vec<u32>, RtfError> {
    parse_qs(s).map_err(RtfError::Config)
}

fn field(q: u32) -> Result<Arc<FqField>, RtfError> {
    Ok(Arc::new(FqField::from_order(q)?))
}

fn flavor(f: FlavorArg) -> Flavor {
    match f {
        FlavorArg::Unramified => Flavor::Unramified,
        // E = F(sqrt(g t)) with g the generator of F_q^x
        FlavorArg::Ramified => Flavor::Ramified { u: 1 },
        FlavorArg::Split => Flavor::Split,
    }
}

/// Checks the parts of the configuration that do not need a suite.
fn validate(q: u32, fl: Flavor) -> Result<(), RtfError> {
    let f = field(q)?;
    if matches!(fl, Flavor::Ramified { .. }) && f.p() == 2 {
        return Err(RtfError::Config("the ramified flavor needs p odd".into()));
    }
    Ok(())
}

/// An empty report for a grid with no points.
fn empty(suite: &str, c: &Common) -> VerificationReport {
    eprintln!("warning: the grid is empty; nothing was evaluated");
    VerificationReport::new(
        suite,
        Default::default(),
        Vec::new(),
        Provenance::new(c.seed, c.c_psi, &engine(c)),
    )
}

fn report(
    suite: &str,
    c: &Common,
    r: rtf_lab::Result<VerificationReport>,
) -> Result<Outcome, RtfError> {
    match r {
        Ok(r) => Ok(Outcome::Report(r)),
        Err(RtfError::GridEmpty) => Ok(Outcome::Report(empty(suite, c))),
        Err(e) => Err(e),
    }
}

/// Runs the selected command. Errors are configuration or engine errors.
pub fn run(cli: &Cli) -> Result<Outcome, RtfError> {
    let c = &cli.common;
    let opts = suite_options(c);
    let out = match &cli.command {
        Command::Fl { q, m, vx } => report("fl", c, verify_fl(*q, &grid(m)?, &grid(vx)?, &opts))?,
        Command::Afl { q, m, vx } => {
            report("afl", c, verify_afl(*q, &grid(m)?, &grid(vx)?, &opts))?
        }
        Command::Match(MatchKind::Split { q, pairs }) => report(
            "match-split",
            c,
            verify_split_matching(&qs(q)?, *pairs, &opts),
        )?,
        Command::Match(MatchKind::Smooth { q, flavor: fa, m }) => {
            let fl = flavor(*fa);
            validate(*q, fl)?;
            report(
                "match-smooth",
                c,
                verify_smooth_matching(*q, fl, &grid(m)?, &opts),
            )?
        }
        Command::Match(MatchKind::Kcap { q, vx }) => {
            report("match-kcap", c, verify_kcap_purely(*q, &grid(vx)?, &opts))?
        }
        Command::Gauss { q, conductors, n } => report(
            "gauss",
            c,
            verify_gauss_laws(&qs(q)?, &grid(conductors)?, &grid(n)?, &opts),
        )?,
        Command::Minf { q, count } => report("minf", c, verify_minf(&qs(q)?, *count, &opts))?,
        Command::Axioms { q, candidate } => axioms(*q, *candidate, c, &opts)?,
        Command::Orbital(OrbitalCmd::Eval {
            q,
            phi,
            x,
            flavor: fa,
            eps,
        }) => {
            let fl = flavor(*fa);
            validate(*q, fl)?;
            Outcome::Eval(eval(*q, fl, phi, x, eps, &opts.cfg, c.c_psi)?)
        }
    };
    Ok(match out {
        Outcome::Report(r) if c.inject_mismatch => Outcome::Report(inject_mismatch(r)),
        o => o,
    })
}

/// Replaces the right-hand side of the first case by its negative.
fn inject_mismatch(r: VerificationReport) -> VerificationReport {
    let mut cases = r.cases;
    if let Some(first) = cases.first_mut() {
        let flipped = format!("-({})", first.rhs);
        *first = Case {
            witness: Some(format!("lhs = {} but rhs = {}", first.lhs, flipped)),
            rhs: flipped,
            pass: false,
            ..first.clone()
        };
    }
    VerificationReport::new(&r.suite, r.params, cases, r.provenance)
}

fn axioms(
    q: u32,
    which: CandidateArg,
    c: &Common,
    opts: &SuiteOptions,
) -> Result<Outcome, RtfError> {
    let f = field(q)?;
    let e = QuadExt::new(&f, Flavor::Unramified)?;
    let t = LocalElem::uniformizer(&f);
    let cand: Box<dyn MultiplicityCandidate> = match which {
        CandidateArg::Unramified => Box::new(UnramifiedCandidate),
        CandidateArg::Zero => Box::new(FnCandidate {
            name: "zero".into(),
            eps: t,
            level: 0,
            f: Arc::new(|_, _| Ok(Q::from_integer(0))),
        }),
        CandidateArg::NoDetCondition => Box::new(FnCandidate {
            name: "no det condition".into(),
            eps: t,
            level: 0,
            f: Arc::new(|e: &QuadExt, g: &QuatElem| {
                Ok(Q::new(g.inv_prime(e)?.v()? as i128 + 1, 2))
            }),
        }),
    };
    match verify_special_multiplicity_axioms(&e, cand.as_ref(), opts) {
        Ok(r) => Ok(Outcome::Report(r)),
        Err(RtfError::AxiomFailure(clause, witness)) => {
            let label = format!("{} ({clause})", cand.name());
            let case = Case {
                label,
                x: CaseX::none(),
                lhs: "violated".into(),
                rhs: "holds".into(),
                pass: false,
                witness: Some(witness),
            };
            let params = [
                ("candidate".to_string(), cand.name()),
                ("q".to_string(), q.to_string()),
            ]
            .into_iter()
            .collect();
            Ok(Outcome::Report(VerificationReport::new(
                "axioms",
                params,
                vec![case],
                Provenance::new(c.seed, c.c_psi, &opts.cfg),
            )))
        }
        Err(e) => Err(e),
    }
}

fn eval(
    q: u32,
    fl: Flavor,
    phi: &str,
    x: &str,
    eps: &str,
    cfg: &EngineConfig,
    c_psi: i64,
) -> Result<EvalOutput, RtfError> {
    let f = field(q)?;
    let e = QuadExt::new(&f, fl)?;
    let ctx = MeasureContext::new(q, c_psi, e.shape());
    let x = LocalElem::parse(&f, x)?;
    let (phi_s, value, at_zero, der) = match AnyTestFn::parse(&f, phi)? {
        AnyTestFn::S(p) => {
            let v = eval_orbital_s(&e, &ctx, &p, &x, cfg)?;
            (
                p.to_string(),
                v.to_string(),
                v.value_at_zero().to_string(),
                Some(v.derivative_at_zero().to_string()),
            )
        }
        AnyTestFn::G(g) => {
            let eps = LocalElem::parse(&f, eps)?;
            let quotient = matches!(g, TestFnG::KepsMZ(_));
            let v = eval_orbital_g_at_x(&e, &ctx, &g, &eps, &x, quotient, cfg)?;
            (
                format!("{g} on G_eps, eps = {eps}"),
                v.to_string(),
                v.to_string(),
                None,
            )
        }
    };
    Ok(EvalOutput {
        q,
        flavor: fl.to_string(),
        phi: phi_s,
        x: x.to_string(),
        value,
        value_at_zero: at_zero,
        derivative_at_zero: der,
    })
}
