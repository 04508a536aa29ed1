//! Pure Rust entry points behind the Python functions. Each returns the
//! JSON text of a report so the binding layer only converts strings.

use std::sync::Arc;

use rtf_lab::base_arith::fq::FqField;
use rtf_lab::base_arith::laurent::LocalElem;
use rtf_lab::base_arith::measure::MeasureContext;
use rtf_lab::fl_suite::{
    verify_afl, verify_fl, verify_gauss_laws, verify_minf, verify_split_matching, SuiteOptions,
    VerificationReport,
};
use rtf_lab::orbital_engine::{
    eval_orbital_g_at_x, eval_orbital_s, AnyTestFn, EngineConfig, OmegaConvention, Strategy,
    TestFnG,
};
use rtf_lab::quad_ext::{Flavor, QuadExt};
use rtf_lab::{Result, RtfError};

/// Options shared by every suite, as plain values.
#[derive(Debug, Clone)]
pub struct Options {
    pub samples: usize,
    pub seed: u64,
    pub c_psi: i64,
    pub strategy: String,
    pub omega: String,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            samples: 3,
            seed: 0,
            c_psi: 0,
            strategy: "fast".into(),
            omega: "restriction".into(),
        }
    }
}

impl Options {
    fn engine(&self) -> Result<EngineConfig> {
        let strategy = match self.strategy.as_str() {
            "fast" => Strategy::Fast,
            "brute" => Strategy::Brute,
            s => return Err(RtfError::Config(format!("unknown strategy {s:?}"))),
        };
        let omega = match self.omega.as_str() {
            "restriction" => OmegaConvention::Restriction,
            "trivial" => OmegaConvention::Trivial,
            s => return Err(RtfError::Config(format!("unknown omega convention {s:?}"))),
        };
        Ok(EngineConfig {
            strategy,
            omega,
            ..EngineConfig::default()
        })
    }

    fn suite(&self) -> Result<SuiteOptions> {
        Ok(SuiteOptions {
            samples: self.samples,
            seed: self.seed,
            c_psi: self.c_psi,
            cfg: self.engine()?,
        })
    }
}

fn json(r: &VerificationReport) -> String {
    serde_json::to_string(r).expect("reports serialize")
}

pub fn fl(q: u32, ms: &[i64], vs: &[i64], o: &Options) -> Result<String> {
    verify_fl(q, ms, vs, &o.suite()?).map(|r| json(&r))
}

pub fn afl(q: u32, ms: &[i64], vs: &[i64], o: &Options) -> Result<String> {
    verify_afl(q, ms, vs, &o.suite()?).map(|r| json(&r))
}

pub fn gauss(qs: &[u32], c_psis: &[i64], ns: &[i64], o: &Options) -> Result<String> {
    verify_gauss_laws(qs, c_psis, ns, &o.suite()?).map(|r| json(&r))
}

pub fn minf(qs: &[u32], count: usize, o: &Options) -> Result<String> {
    verify_minf(qs, count, &o.suite()?).map(|r| json(&r))
}

pub fn split(qs: &[u32], pairs: usize, o: &Options) -> Result<String> {
    verify_split_matching(qs, pairs, &o.suite()?).map(|r| json(&r))
}

fn flavor(name: &str) -> Result<Flavor> {
    match name {
        "unramified" => Ok(Flavor::Unramified),
        "ramified" => Ok(Flavor::Ramified { u: 1 }),
        "split" => Ok(Flavor::Split),
        s => Err(RtfError::Config(format!("unknown flavor {s:?}"))),
    }
}

/// One orbital integral: `O(s, x, Phi)` for S-side functions, with its value
/// and derivative at s = 0, or `O(delta(x), f)` on G_eps.
pub fn orbital(q: u32, phi: &str, x: &str, fl: &str, eps: &str, o: &Options) -> Result<String> {
    let f = Arc::new(FqField::from_order(q)?);
    let fl = flavor(fl)?;
    if matches!(fl, Flavor::Ramified { .. }) && f.p() == 2 {
        return Err(RtfError::Config("the ramified flavor needs p odd".into()));
    }
    let e = QuadExt::new(&f, fl)?;
    let ctx = MeasureContext::new(q, o.c_psi, e.shape());
    let cfg = o.engine()?;
    let x = LocalElem::parse(&f, x)?;
    let mut out = serde_json::Map::new();
    out.insert("q".into(), q.into());
    out.insert("flavor".into(), fl.to_string().into());
    out.insert("x".into(), x.to_string().into());
    match AnyTestFn::parse(&f, phi)? {
        AnyTestFn::S(p) => {
            let v = eval_orbital_s(&e, &ctx, &p, &x, &cfg)?;
            out.insert("phi".into(), p.to_string().into());
            out.insert("value".into(), v.to_string().into());
            out.insert("value_at_zero".into(), v.value_at_zero().to_string().into());
            out.insert(
                "derivative_at_zero".into(),
                v.derivative_at_zero().to_string().into(),
            );
        }
        AnyTestFn::G(g) => {
            let eps = LocalElem::parse(&f, eps)?;
            let quotient = matches!(g, TestFnG::KepsMZ(_));
            let v = eval_orbital_g_at_x(&e, &ctx, &g, &eps, &x, quotient, &cfg)?;
            out.insert("phi".into(), format!("{g} on G_eps, eps = {eps}").into());
            out.insert("value".into(), v.to_string().into());
            out.insert("value_at_zero".into(), v.to_string().into());
        }
    }
    Ok(serde_json::Value::Object(out).to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parsed(s: &str) -> serde_json::Value {
        serde_json::from_str(s).unwrap()
    }

    #[test]
    fn fl_report_passes() {
        let r = parsed(&fl(3, &[0, 2], &[-2, 0, 2], &Options::default()).unwrap());
        assert_eq!(r["suite"], "fl");
        assert_eq!(r["summary"]["total"], r["summary"]["passed"]);
        assert_eq!(r["summary"]["total"], 2 * 3 * 3);
    }

    #[test]
    fn other_suites_pass() {
        let o = Options {
            samples: 1,
            ..Options::default()
        };
        for s in [
            afl(3, &[0], &[1, 3], &o).unwrap(),
            gauss(&[3], &[0, 1], &[-1, 0, 1], &o).unwrap(),
            minf(&[2], 5, &o).unwrap(),
            split(&[3], 5, &o).unwrap(),
        ] {
            let r = parsed(&s);
            assert_eq!(r["summary"]["total"], r["summary"]["passed"], "{s}");
        }
    }

    #[test]
    fn orbital_values() {
        let o = Options::default();
        let s = parsed(&orbital(5, "KcapS", "t^2", "unramified", "1", &o).unwrap());
        assert_eq!(s["value_at_zero"], "1");
        assert!(s.get("derivative_at_zero").is_some());
        let g = parsed(&orbital(3, "IntegralDetMG(2)", "t^-2", "unramified", "1", &o).unwrap());
        assert_eq!(g["value"], "xi^2");
        assert!(g.get("derivative_at_zero").is_none());
    }

    #[test]
    fn bad_configuration_is_an_error() {
        let o = Options::default();
        assert!(fl(6, &[0], &[1], &o).is_err());
        assert!(orbital(2, "KcapS", "t", "ramified", "1", &o).is_err());
        assert!(orbital(3, "KcapS", "t", "nope", "1", &o).is_err());
        let bad = Options {
            strategy: "slow".into(),
            ..Options::default()
        };
        assert!(fl(3, &[0], &[1], &bad).is_err());
    }
}
