//! End-to-end verifiers: the fundamental lemma, the arithmetic fundamental
//! lemma, matching of orbital integrals, Gauss-sum laws, the metric at the
//! place at infinity and the axioms of special multiplicity functions.
//!
//! Each verifier samples its grid up front from a seeded generator, evaluates
//! the cases in parallel and returns them in grid order.

pub mod afl;
pub mod axioms;
pub mod fl;
pub mod gauss;
pub mod matching;
pub mod minf;
pub mod report;

use std::sync::Arc;

use rand::RngExt;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

pub use afl::{arith_orbital_i, verify_afl, MultiplicityFn};
pub use axioms::{
    verify_special_multiplicity_axioms, FnCandidate, MultiplicityCandidate, UnramifiedCandidate,
};
pub use fl::{fl_g_side, verify_fl};
pub use gauss::verify_gauss_laws;
pub use matching::{
    eps_classes, random_split_box, smooth_matching_data, verify_kcap_purely, verify_matching_defs,
    verify_smooth_matching, verify_split_matching, SPhi, SmoothMatchingData,
};
pub use minf::verify_minf;
pub use report::{Case, CaseX, Provenance, Summary, VerificationReport};

use crate::base_arith::fq::FqField;
use crate::base_arith::laurent::LocalElem;
use crate::error::{Result, RtfError};
use crate::orbital_engine::EngineConfig;
use crate::quad_ext::random_elem;

/// Shared knobs of the verifiers.
#[derive(Debug, Clone, Copy)]
pub struct SuiteOptions {
    /// Unit parts sampled per valuation.
    pub samples: usize,
    pub seed: u64,
    /// Conductor of psi; fixes the self-dual measures.
    pub c_psi: i64,
    pub cfg: EngineConfig,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            samples: 3,
            seed: 0,
            c_psi: 0,
            cfg: EngineConfig::default(),
        }
    }
}

pub(crate) fn field(q: u32) -> Result<Arc<FqField>> {
    Ok(Arc::new(FqField::from_order(q)?))
}

/// `samples` exact x with v(x) = v and x != 1. At v = 0 the samples
/// alternate between v(1 - x) = 0 (when q > 2) and x = 1 + t^j u, j = 1, 2, 3.
pub fn sample_xs(f: &Arc<FqField>, rng: &mut ChaCha8Rng, v: i64, samples: usize) -> Vec<LocalElem> {
    let one = LocalElem::one(f);
    let mut out = Vec::with_capacity(samples);
    let mut i = 0usize;
    while out.len() < samples {
        let near_one = v == 0 && (f.q() == 2 || i % 2 == 1);
        let x = if near_one {
            let j = 1 + (i / 2 % 3) as i64;
            let len = rng.random_range(1..4);
            one.add(&random_elem(f, rng, j, len))
        } else {
            let x = random_elem(f, rng, v, 3);
            if v == 0 && !x.sub(&one).is_zero() && x.sub(&one).v().unwrap_or(1) > 0 {
                continue;
            }
            x
        };
        i += 1;
        if x.sub(&one).is_zero() {
            continue;
        }
        out.push(x);
    }
    out
}

/// Evaluates the cases in parallel and keeps their order.
pub(crate) fn run_cases<T: Sync, F>(items: &[T], f: F) -> Result<Vec<Case>>
where
    F: Fn(&T) -> Result<Case> + Sync + Send,
{
    items.par_iter().map(f).collect()
}

pub(crate) fn nonempty<T>(v: &[T]) -> Result<()> {
    if v.is_empty() {
        Err(RtfError::GridEmpty)
    } else {
        Ok(())
    }
}

pub(crate) fn list<T: std::fmt::Display>(v: &[T]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}
