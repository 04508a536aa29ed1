//! Gauss-sum laws behind the smooth matching construction.
//!
//! With the code convention (psi trivial on p^{c(psi)}):
//! (1) for ramified chi, tau_n(chi, psi) != 0 exactly at n = c(psi) - c(chi);
//! (2) tau_n(chi, psi_a) = chi(a^{-1}) tau_n(chi, psi) for units a;
//! (3) for unramified chi, tau_{c(psi)}(chi, psi) = chi(t^{c(psi)}) Vol(O_F^x).
//! The differences used to build matching functions are checked nonzero.

use std::sync::Arc;

use super::report::{params, Case, CaseX, Provenance, VerificationReport};
use super::{field, list, nonempty, SuiteOptions};
use crate::base_arith::characters::{AdditiveCharacter, AtUniformizer, MultiplicativeCharacter};
use crate::base_arith::cyclo::CycloValue;
use crate::base_arith::fq::FqField;
use crate::base_arith::gauss::{gauss_depth, gauss_sum, gauss_sum_bruteforce, GaussSum};
use crate::base_arith::laurent::{shell_count, LocalElem};
use crate::base_arith::measure::{ExtShape, MeasureContext};
use crate::base_arith::scalar::{XiPoly, Q};
use crate::error::Result;

/// Largest enumeration used by the direct-sum route.
const BRUTE_CELLS: u64 = 20_000;

/// Characters of conductor at most 2 available over F_q.
pub fn character_family(f: &Arc<FqField>) -> Result<Vec<(String, MultiplicativeCharacter)>> {
    let mut out = vec![
        (
            "unram(xi)".to_string(),
            MultiplicativeCharacter::unramified(f, AtUniformizer::Formal),
        ),
        (
            "unram(z^1)".to_string(),
            MultiplicativeCharacter::unramified(f, AtUniformizer::Root(1)),
        ),
    ];
    if f.q() > 2 {
        out.push((
            "tame(1)".into(),
            MultiplicativeCharacter::tame(f, 1, AtUniformizer::Root(0))?,
        ));
    }
    if f.p() != 2 {
        out.push((
            "quadratic".into(),
            MultiplicativeCharacter::quadratic(f, AtUniformizer::Formal)?,
        ));
    }
    out.push((
        "wild(0,1)".into(),
        MultiplicativeCharacter::wild(f, 0, 1, AtUniformizer::Root(0))?,
    ));
    Ok(out)
}

fn twists(f: &Arc<FqField>) -> Result<Vec<LocalElem>> {
    Ok(vec![
        LocalElem::parse(f, "g^1")?,
        LocalElem::parse(f, "1 + t")?,
        LocalElem::parse(f, "g^1 + t + t^2")?,
    ])
}

/// chi(a^{-1}) tau for a unit a.
fn twist_value(chi: &MultiplicativeCharacter, a: &LocalElem, tau: &GaussSum) -> Result<GaussSum> {
    let f = chi.field();
    let m = f.p() * (f.q() - 1);
    let r = chi.eval(&a.inv()?)?.root;
    let value = tau.value.mul(&CycloValue::root(m, r));
    Ok(GaussSum {
        value,
        ..tau.clone()
    })
}

/// tau as a scalar for the measure of psi' instead of psi: the two unit
/// volumes differ by q^{(c(psi) - c(psi')) / 2}.
fn rescaled(tau: &GaussSum, q: u32, from: i64, to: i64) -> Option<XiPoly> {
    Some(tau.as_scalar(q)?.mul(&XiPoly::q_half_pow(q, to - from)))
}

/// Every law over the character family, the psi conductors and the n window.
pub fn verify_gauss_laws(
    qs: &[u32],
    c_psis: &[i64],
    ns: &[i64],
    opts: &SuiteOptions,
) -> Result<VerificationReport> {
    nonempty(qs)?;
    nonempty(c_psis)?;
    nonempty(ns)?;
    let mut cases = Vec::new();
    let none = CaseX::none;
    for &q in qs {
        let f = field(q)?;
        let m = f.p() * (f.q() - 1);
        for (name, chi) in character_family(&f)? {
            for &c in c_psis {
                let psi = AdditiveCharacter::new(&f, c, 1)?;
                for &n in ns {
                    let lab = |law: &str| format!("q={q} {name} c(psi)={c} n={n} {law}");
                    let tau = gauss_sum(&chi, &psi, n)?;
                    let d = gauss_depth(&chi, &psi, n);
                    if shell_count(q, d) <= BRUTE_CELLS {
                        let b = gauss_sum_bruteforce(&chi, &psi, n, d)?;
                        cases.push(Case::compare(lab("direct-sum"), none(), &tau, &b));
                    }
                    if chi.conductor() > 0 {
                        let nonzero = !tau.is_zero();
                        cases.push(Case::compare(
                            lab("support"),
                            none(),
                            &nonzero,
                            &(n == c - chi.conductor()),
                        ));
                    }
                    for a in twists(&f)? {
                        let lhs = gauss_sum(&chi, &psi.twisted(&a)?, n)?;
                        let rhs = twist_value(&chi, &a, &tau)?;
                        cases.push(Case::compare(
                            lab(&format!("twist a={a}")),
                            none(),
                            &lhs,
                            &rhs,
                        ));
                    }
                }
                if chi.conductor() == 0 {
                    let tau = gauss_sum(&chi, &psi, c)?;
                    let at_t = chi.eval(&LocalElem::monomial(&f, 1, c))?;
                    // Vol(O_F^x) = q^{c/2}: rational part q^{floor(c/2)}, surd when c is odd
                    let whole = Q::from_integer(q as i128).pow(c.div_euclid(2) as i32);
                    let want = GaussSum {
                        value: CycloValue::root(m, at_t.root).scale(whole),
                        sqrt_q: c.rem_euclid(2) == 1,
                        xi_power: at_t.xi_power,
                    };
                    let label = format!("q={q} {name} c(psi)={c} n={c} unramified-value");
                    cases.push(Case::compare(label.clone(), none(), &tau, &want));
                    if at_t.root == 0 {
                        let ctx = MeasureContext::new(q, c, ExtShape::Split);
                        let rhs = ctx.vol_units_f().shift_xi(at_t.xi_power, 0);
                        let lhs = tau.as_scalar(q).unwrap_or_else(|| XiPoly::zero(q));
                        cases.push(Case::compare(format!("{label} scalar"), none(), &lhs, &rhs));
                    }
                }
            }
        }
        cases.extend(construction_cases(&f, c_psis)?);
    }
    let p = params([("q", list(qs)), ("c_psi", list(c_psis)), ("n", list(ns))]);
    Ok(VerificationReport::new(
        "gauss",
        p,
        cases,
        Provenance::new(opts.seed, opts.c_psi, &opts.cfg),
    ))
}

/// The differences D = tau(eta, psi_{tr'}) - tau(eta, psi_{tr}) used to
/// solve for the matching coefficients must be nonzero.
fn construction_cases(f: &Arc<FqField>, c_psis: &[i64]) -> Result<Vec<Case>> {
    let q = f.q();
    let m = f.p() * (q - 1);
    let mut out = Vec::new();
    for &c in c_psis {
        // unramified eta: eta(t) = -1, tr = 1 and tr' = t
        let eta = MultiplicativeCharacter::unramified(f, AtUniformizer::Root(m as i64 / 2));
        let psi = AdditiveCharacter::new(f, c, 1)?;
        let psi_t = AdditiveCharacter::new(f, c - 1, 1)?;
        let t0 = rescaled(&gauss_sum(&eta, &psi, c)?, q, c, c);
        let t1 = rescaled(&gauss_sum(&eta, &psi_t, c - 1)?, q, c - 1, c);
        let vol = MeasureContext::new(q, c, ExtShape::Split).vol_units_f();
        // an irrational value shows up as 0 and fails the comparison
        let d = t1
            .unwrap_or_else(|| XiPoly::zero(q))
            .sub(&t0.unwrap_or_else(|| XiPoly::zero(q)));
        let sign = if c.rem_euclid(2) == 0 { -2 } else { 2 };
        let want = vol.scale(Q::from_integer(sign));
        out.push(Case::compare(
            format!("q={q} c(psi)={c} unramified D"),
            CaseX::none(),
            &d,
            &want,
        ));
        // ramified eta (tame quadratic): tr = 1 and tr' a non-square unit
        if f.p() != 2 {
            let eta = MultiplicativeCharacter::quadratic(f, AtUniformizer::Root(0))?;
            let n = c - 1;
            let g = LocalElem::parse(f, "g^1")?;
            let a = gauss_sum(&eta, &psi, n)?;
            let b = gauss_sum(&eta, &psi.twisted(&g)?, n)?;
            let d = GaussSum {
                value: b.value.sub(&a.value),
                ..a.clone()
            };
            let want = GaussSum {
                value: a.value.scale(Q::from_integer(-2)),
                ..a.clone()
            };
            out.push(Case::compare(
                format!("q={q} c(psi)={c} ramified D"),
                CaseX::none(),
                &d,
                &want,
            ));
            out.push(Case::compare(
                format!("q={q} c(psi)={c} ramified D nonzero"),
                CaseX::none(),
                &!d.is_zero(),
                &true,
            ));
        }
    }
    Ok(out)
}
