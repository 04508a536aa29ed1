//! Verification reports: one exact left/right comparison per grid case.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Duration;

use serde::Serialize;

use crate::base_arith::laurent::LocalElem;
use crate::orbital_engine::{EngineConfig, OmegaConvention, Strategy};

/// The grid point x of a case.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CaseX {
    pub valuation: i64,
    pub unit_repr: String,
}

impl CaseX {
    pub fn of(x: &LocalElem) -> Self {
        let valuation = x.v().unwrap_or(i64::MIN);
        let unit_repr = x
            .unit_part()
            .map_or_else(|_| x.to_string(), |u| u.to_string());
        CaseX {
            valuation,
            unit_repr,
        }
    }

    /// A case that is not indexed by an element of F.
    pub fn none() -> Self {
        CaseX {
            valuation: 0,
            unit_repr: "-".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Case {
    /// Parameters of the case (q, flavor, test function, ...).
    pub label: String,
    pub x: CaseX,
    pub lhs: String,
    pub rhs: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl Case {
    /// Compares two exact values; a mismatch records both as the witness.
    pub fn compare<T: PartialEq + std::fmt::Display>(
        label: String,
        x: CaseX,
        lhs: &T,
        rhs: &T,
    ) -> Self {
        let pass = lhs == rhs;
        let witness = (!pass).then(|| format!("lhs = {lhs} but rhs = {rhs}"));
        Case {
            label,
            x,
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
            pass,
            witness,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Provenance {
    pub seed: u64,
    pub depth: i64,
    pub psi_conductor: i64,
    pub omega_convention: OmegaConvention,
    pub strategy: Strategy,
    pub measure: String,
}

impl Provenance {
    pub fn new(seed: u64, c_psi: i64, cfg: &EngineConfig) -> Self {
        Provenance {
            seed,
            depth: cfg.depth_margin,
            psi_conductor: c_psi,
            omega_convention: cfg.omega,
            strategy: cfg.strategy,
            measure: format!("self-dual for psi of conductor {c_psi}; Vol(O_F) = q^({c_psi}/2)"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub suite: String,
    pub params: BTreeMap<String, String>,
    pub cases: Vec<Case>,
    pub summary: Summary,
    pub provenance: Provenance,
    /// Wall time; kept out of the serialized form so reports are reproducible.
    #[serde(skip)]
    pub elapsed: Duration,
}

impl VerificationReport {
    pub fn new(
        suite: &str,
        params: BTreeMap<String, String>,
        cases: Vec<Case>,
        provenance: Provenance,
    ) -> Self {
        let summary = Summary {
            total: cases.len(),
            passed: cases.iter().filter(|c| c.pass).count(),
        };
        VerificationReport {
            suite: suite.into(),
            params,
            cases,
            summary,
            provenance,
            elapsed: Duration::ZERO,
        }
    }

    /// Every case passed (vacuously true on an empty grid).
    pub fn pass(&self) -> bool {
        self.summary.passed == self.summary.total
    }

    pub fn failures(&self) -> impl Iterator<Item = &Case> {
        self.cases.iter().filter(|c| !c.pass)
    }

    /// Appends the cases of another report of the same suite.
    pub fn merge(mut self, other: VerificationReport) -> Self {
        for (k, v) in other.params {
            self.params
                .entry(k)
                .and_modify(|old| {
                    if *old != v {
                        old.push_str(" | ");
                        old.push_str(&v);
                    }
                })
                .or_insert(v);
        }
        self.cases.extend(other.cases);
        self.summary = Summary {
            total: self.cases.len(),
            passed: self.cases.iter().filter(|c| c.pass).count(),
        };
        self.elapsed += other.elapsed;
        self
    }

    /// Column-aligned table with the same fields as the JSON form.
    pub fn to_table(&self) -> String {
        let head = ["label", "v(x)", "unit", "lhs", "rhs", "pass"];
        let rows: Vec<[String; 6]> = self
            .cases
            .iter()
            .map(|c| {
                [
                    c.label.clone(),
                    c.x.valuation.to_string(),
                    c.x.unit_repr.clone(),
                    c.lhs.clone(),
                    c.rhs.clone(),
                    if c.pass { "ok".into() } else { "FAIL".into() },
                ]
            })
            .collect();
        let mut w: Vec<usize> = head.iter().map(|h| h.len()).collect();
        for r in &rows {
            for (i, c) in r.iter().enumerate() {
                w[i] = w[i].max(c.chars().count());
            }
        }
        let mut out = String::new();
        let _ = writeln!(out, "suite: {}", self.suite);
        for (k, v) in &self.params {
            let _ = writeln!(out, "  {k} = {v}");
        }
        let p = &self.provenance;
        let _ = writeln!(
            out,
            "  seed = {}, depth margin = {}, c(psi) = {}, omega = {:?}, strategy = {:?}",
            p.seed, p.depth, p.psi_conductor, p.omega_convention, p.strategy
        );
        let line = |cells: &[String]| -> String {
            let padded: Vec<String> = cells
                .iter()
                .enumerate()
                .map(|(i, c)| format!("{c:<width$}", width = w[i]))
                .collect();
            padded.join("  ").trim_end().to_string()
        };
        let _ = writeln!(out, "{}", line(&head.map(String::from)));
        let _ = writeln!(
            out,
            "{}",
            line(&w.iter().map(|n| "-".repeat(*n)).collect::<Vec<_>>())
        );
        for r in &rows {
            let _ = writeln!(out, "{}", line(r));
        }
        for c in self.failures() {
            if let Some(wit) = &c.witness {
                let _ = writeln!(
                    out,
                    "witness [{}] x = t^{} * ({}): {}",
                    c.label, c.x.valuation, c.x.unit_repr, wit
                );
            }
        }
        let _ = writeln!(
            out,
            "summary: {}/{} passed",
            self.summary.passed, self.summary.total
        );
        out
    }
}

/// Parameter map builder.
pub(crate) fn params<const N: usize>(kv: [(&str, String); N]) -> BTreeMap<String, String> {
    kv.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}
