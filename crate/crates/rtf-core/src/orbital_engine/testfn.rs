//! Declarative test functions on the Hermitian space S and on G_eps, with
//! membership predicates and the valuation data that bounds their support.

use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::base_arith::fq::FqField;
use crate::base_arith::laurent::LocalElem;
use crate::base_arith::scalar::Q;
use crate::error::{Result, RtfError};
use crate::orbit_geometry::{BaseRing, HermMat, QuatElem};
use crate::quad_ext::{ExtElem, Flavor, QuadExt};

/// Test functions on S.
#[derive(Clone, PartialEq)]
pub enum TestFnS {
    /// 1 on S n GL2(O_E).
    KcapS,
    /// Integral Hermitian matrices with v(det) = m.
    IntegralDetM(i64),
    /// B = 1, D = 0 mod p_E^n and A in -tr + tr(p_E^l).
    KlxiN {
        l: i64,
        tr_xi: LocalElem,
        n: i64,
    },
    /// A = 0, B = -1 mod p_E^n and D in -tr + tr(p_E^l).
    KlxiNPrime {
        l: i64,
        tr_xi: LocalElem,
        n: i64,
    },
    Lin(Vec<(Q, TestFnS)>),
}

/// Test functions on G_eps.
#[derive(Clone, PartialEq)]
pub enum TestFnG {
    /// K1 diag(t^m, 1) K1 in G_1 = GL2(F).
    Cm(i64),
    /// K_{eps,m}: integral, = 1 mod p_E^m (m = 0: G_eps n GL2(O_E)).
    KepsM(i64),
    /// K_{eps,m} t^Z, integrated over the Xi-quotient.
    KepsMZ(i64),
    /// Integral matrices of G_1 = GL2(F) with v(det) = m.
    IntegralDetMG(i64),
    Lin(Vec<(Q, TestFnG)>),
}

/// Lower bounds on v(A), v_E(B), v(D) and the exact v(det) on the support.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SBounds {
    pub la: i64,
    pub lb: i64,
    pub ld: i64,
    pub det: i64,
}

/// ceil(a / b) for b > 0.
pub(crate) fn ceil_div(a: i64, b: i64) -> i64 {
    -((-a).div_euclid(b))
}

/// L with tr(p_E^l) = p_F^L.
pub fn trace_ideal_exp(e: &QuadExt, l: i64) -> i64 {
    ceil_div(l, e.e())
}

fn v_or_max(x: &LocalElem) -> Result<i64> {
    if x.is_zero() {
        Ok(i64::MAX)
    } else {
        x.v()
    }
}

fn ve_or_max(e: &QuadExt, y: &ExtElem) -> Result<i64> {
    let (c0, c1) = e.coords(y);
    if c0.is_zero() && c1.is_zero() {
        Ok(i64::MAX)
    } else {
        e.v_e(y)
    }
}

/// v_E(y - c) >= n.
fn ext_congruent(e: &QuadExt, y: &ExtElem, c: &ExtElem, n: i64) -> Result<bool> {
    Ok(ve_or_max(e, &e.sub(y, c))? >= n)
}

fn check_tr(tr_xi: &LocalElem) -> Result<i64> {
    if tr_xi.is_zero() {
        return Err(RtfError::Config("tr(xi) must be nonzero".into()));
    }
    tr_xi.v()
}

impl TestFnS {
    /// Leaves with their coefficients.
    pub fn leaves(&self) -> Vec<(Q, TestFnS)> {
        match self {
            TestFnS::Lin(v) => v
                .iter()
                .flat_map(|(c, f)| f.leaves().into_iter().map(move |(d, g)| (c * d, g)))
                .collect(),
            f => vec![(Q::one(), f.clone())],
        }
    }

    /// Phi(s).
    pub fn eval(&self, e: &QuadExt, s: &HermMat) -> Result<Q> {
        let b = |ok: bool| if ok { Q::one() } else { Q::zero() };
        match self {
            TestFnS::KcapS => self.integral_det(e, s, 0).map(b),
            TestFnS::IntegralDetM(m) => self.integral_det(e, s, *m).map(b),
            TestFnS::KlxiN { l, tr_xi, n } => {
                check_tr(tr_xi)?;
                let ok = self.integral_det(e, s, 0)?
                    && ext_congruent(e, &s.b, &e.one(), *n)?
                    && e.e() * v_or_max(&s.d)? >= *n
                    && s.a
                        .add(tr_xi)
                        .eq_mod(&LocalElem::zero(e.base()), trace_ideal_exp(e, *l));
                Ok(b(ok))
            }
            TestFnS::KlxiNPrime { l, tr_xi, n } => {
                check_tr(tr_xi)?;
                let ok = self.integral_det(e, s, 0)?
                    && ext_congruent(e, &s.b, &e.neg(&e.one()), *n)?
                    && e.e() * v_or_max(&s.a)? >= *n
                    && s.d
                        .add(tr_xi)
                        .eq_mod(&LocalElem::zero(e.base()), trace_ideal_exp(e, *l));
                Ok(b(ok))
            }
            TestFnS::Lin(v) => {
                let mut acc = Q::zero();
                for (c, f) in v {
                    acc += c * f.eval(e, s)?;
                }
                Ok(acc)
            }
        }
    }

    fn integral_det(&self, e: &QuadExt, s: &HermMat, m: i64) -> Result<bool> {
        if v_or_max(&s.a)? < 0 || v_or_max(&s.d)? < 0 || ve_or_max(e, &s.b)? < 0 {
            return Ok(false);
        }
        let det = s.det(e);
        Ok(!det.is_zero() && det.v()? == m)
    }

    /// Support bounds of a leaf.
    pub fn bounds(&self, e: &QuadExt) -> Result<SBounds> {
        Ok(match self {
            TestFnS::KcapS => SBounds {
                la: 0,
                lb: 0,
                ld: 0,
                det: 0,
            },
            TestFnS::IntegralDetM(m) => SBounds {
                la: 0,
                lb: 0,
                ld: 0,
                det: *m,
            },
            TestFnS::KlxiN { tr_xi, n, .. } => {
                let vt = check_tr(tr_xi)?.max(0);
                SBounds {
                    la: vt,
                    lb: 0,
                    ld: ceil_div(*n, e.e()).max(0),
                    det: 0,
                }
            }
            TestFnS::KlxiNPrime { tr_xi, n, .. } => {
                let vt = check_tr(tr_xi)?.max(0);
                SBounds {
                    la: ceil_div(*n, e.e()).max(0),
                    lb: 0,
                    ld: vt,
                    det: 0,
                }
            }
            TestFnS::Lin(_) => return Err(RtfError::Config("bounds of a combination".into())),
        })
    }

    /// Unit-class depths (N_E, N_F) on which a leaf is constant.
    pub fn depths(&self, e: &QuadExt) -> Result<(i64, i64)> {
        Ok(match self {
            TestFnS::KcapS | TestFnS::IntegralDetM(_) => (1, 1),
            TestFnS::KlxiN { l, tr_xi, n } | TestFnS::KlxiNPrime { l, tr_xi, n } => {
                let rel = trace_ideal_exp(e, *l) - check_tr(tr_xi)?;
                (
                    (*n).max(e.e() * rel).max(1),
                    ceil_div(*n, e.e()).max(rel).max(1),
                )
            }
            TestFnS::Lin(v) => {
                let mut d = (1, 1);
                for (_, f) in v {
                    let x = f.depths(e)?;
                    d = (d.0.max(x.0), d.1.max(x.1));
                }
                d
            }
        })
    }

    /// Whether the value depends only on valuations of the entries.
    pub fn valuation_only(&self) -> bool {
        match self {
            TestFnS::KcapS | TestFnS::IntegralDetM(_) => true,
            TestFnS::Lin(v) => v.iter().all(|(_, f)| f.valuation_only()),
            _ => false,
        }
    }
}

impl TestFnG {
    pub fn leaves(&self) -> Vec<(Q, TestFnG)> {
        match self {
            TestFnG::Lin(v) => v
                .iter()
                .flat_map(|(c, f)| f.leaves().into_iter().map(move |(d, g)| (c * d, g)))
                .collect(),
            f => vec![(Q::one(), f.clone())],
        }
    }

    /// f(g).
    pub fn eval(&self, e: &QuadExt, g: &QuatElem) -> Result<Q> {
        let b = |ok: bool| if ok { Q::one() } else { Q::zero() };
        match self {
            TestFnG::Cm(m) => {
                let x = g.to_gl2f(e)?;
                let r = BaseRing(e.base().clone());
                let det = x.det(&r);
                let integral = x
                    .entries()
                    .iter()
                    .all(|y| y.is_zero() || y.v().is_ok_and(|v| v >= 0));
                let ok = integral && !det.is_zero() && det.v()? == *m && x.min_val(&r)? == Some(0);
                Ok(b(ok))
            }
            TestFnG::IntegralDetMG(m) => {
                let x = g.to_gl2f(e)?;
                let r = BaseRing(e.base().clone());
                let det = x.det(&r);
                let integral = x
                    .entries()
                    .iter()
                    .all(|y| y.is_zero() || y.v().is_ok_and(|v| v >= 0));
                Ok(b(integral && !det.is_zero() && det.v()? == *m))
            }
            TestFnG::KepsM(m) => Ok(b(in_keps(e, g, *m)?)),
            TestFnG::KepsMZ(m) => {
                // t^{-k} g must lie in K_{eps,m}; k is forced by a or det
                let k = if *m >= 1 {
                    let va = ve_or_max(e, &g.a)?;
                    if va == i64::MAX || va.rem_euclid(e.e()) != 0 {
                        return Ok(Q::zero());
                    }
                    va / e.e()
                } else {
                    let vd = g.det(e).v()?;
                    if vd.rem_euclid(2) != 0 {
                        return Ok(Q::zero());
                    }
                    vd / 2
                };
                let s = e.embed(&LocalElem::monomial(e.base(), 1, -k));
                let h = QuatElem::new(e.mul(&s, &g.a), e.mul(&s, &g.b), g.eps.clone());
                Ok(b(in_keps(e, &h, *m)?))
            }
            TestFnG::Lin(v) => {
                let mut acc = Q::zero();
                for (c, f) in v {
                    acc += c * f.eval(e, g)?;
                }
                Ok(acc)
            }
        }
    }

    /// Unit-class depth on E on which a leaf is constant.
    pub fn depth(&self) -> i64 {
        match self {
            TestFnG::KepsM(m) | TestFnG::KepsMZ(m) => (*m).max(1),
            TestFnG::Lin(v) => v.iter().map(|(_, f)| f.depth()).max().unwrap_or(1),
            _ => 1,
        }
    }

    /// Whether the function is invariant under the central t^Z.
    pub fn xi_invariant(&self) -> bool {
        match self {
            TestFnG::KepsMZ(_) => true,
            TestFnG::Lin(v) => v.iter().all(|(_, f)| f.xi_invariant()),
            _ => false,
        }
    }

    /// Functions living on the matrix model G_1 = GL2(F).
    pub fn needs_matrix_model(&self) -> bool {
        match self {
            TestFnG::Cm(_) | TestFnG::IntegralDetMG(_) => true,
            TestFnG::Lin(v) => v.iter().any(|(_, f)| f.needs_matrix_model()),
            _ => false,
        }
    }

    /// Checks the flavor restrictions of the matrix-model functions.
    pub fn check(&self, e: &QuadExt, eps: &LocalElem) -> Result<()> {
        if self.needs_matrix_model() {
            if e.flavor() != Flavor::Unramified {
                return Err(RtfError::Config(
                    "GL2(F) test functions need unramified E".into(),
                ));
            }
            if !eps.eq_known(&LocalElem::one(e.base())) {
                return Err(RtfError::Config(
                    "GL2(F) test functions need eps = 1".into(),
                ));
            }
        }
        Ok(())
    }
}

/// g in K_{eps,m}: for m >= 1, a = 1 and b, b eps = 0 mod p_E^m; for m = 0,
/// integral entries and unit determinant.
fn in_keps(e: &QuadExt, g: &QuatElem, m: i64) -> Result<bool> {
    let be = e.mul(&g.b, &e.embed(&g.eps));
    let vb = ve_or_max(e, &g.b)?;
    let vbe = ve_or_max(e, &be)?;
    let va = ve_or_max(e, &g.a)?;
    if va < 0 || vb < 0 || vbe < 0 {
        return Ok(false);
    }
    let det = g.det(e);
    if det.is_zero() || det.v()? != 0 {
        return Ok(false);
    }
    if m == 0 {
        return Ok(true);
    }
    Ok(ext_congruent(e, &g.a, &e.one(), m)? && vb >= m && vbe >= m)
}

impl fmt::Display for TestFnS {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TestFnS::KcapS => write!(f, "KcapS"),
            TestFnS::IntegralDetM(m) => write!(f, "IntegralDetM({m})"),
            TestFnS::KlxiN { l, tr_xi, n } => write!(f, "KlxiN(l={l}, tr={tr_xi}, n={n})"),
            TestFnS::KlxiNPrime { l, tr_xi, n } => {
                write!(f, "KlxiNPrime(l={l}, tr={tr_xi}, n={n})")
            }
            TestFnS::Lin(v) => {
                let p: Vec<String> = v.iter().map(|(c, g)| format!("{c}*{g}")).collect();
                write!(f, "{}", p.join(" + "))
            }
        }
    }
}

impl fmt::Debug for TestFnS {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for TestFnG {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TestFnG::Cm(m) => write!(f, "C({m})"),
            TestFnG::KepsM(m) => write!(f, "Keps({m})"),
            TestFnG::KepsMZ(m) => write!(f, "KepsZ({m})"),
            TestFnG::IntegralDetMG(m) => write!(f, "IntegralDetMG({m})"),
            TestFnG::Lin(v) => {
                let p: Vec<String> = v.iter().map(|(c, g)| format!("{c}*{g}")).collect();
                write!(f, "{}", p.join(" + "))
            }
        }
    }
}

impl fmt::Debug for TestFnG {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// A test function on S or on G_eps.
#[derive(Debug, Clone)]
pub enum AnyTestFn {
    S(TestFnS),
    G(TestFnG),
}

impl AnyTestFn {
    /// Parses "Name" or "Name(a, b, ...)"; the trace argument of KlxiN is an element literal.
    pub fn parse(f: &Arc<FqField>, s: &str) -> Result<AnyTestFn> {
        let s = s.trim();
        let (name, args) = match s.find('(') {
            Some(i) if s.ends_with(')') => (
                &s[..i],
                s[i + 1..s.len() - 1]
                    .split(',')
                    .map(str::trim)
                    .collect::<Vec<_>>(),
            ),
            Some(_) => return Err(RtfError::Parse(format!("unbalanced parentheses in {s:?}"))),
            None => (s, Vec::new()),
        };
        let int = |i: usize| -> Result<i64> {
            args.get(i)
                .ok_or_else(|| RtfError::Parse(format!("{name} needs {} arguments", i + 1)))?
                .parse()
                .map_err(|_| {
                    RtfError::Parse(format!("argument {} of {name} is not an integer", i + 1))
                })
        };
        let arity = |n: usize| -> Result<()> {
            if args.len() == n {
                Ok(())
            } else {
                Err(RtfError::Parse(format!(
                    "{name} takes {n} arguments, got {}",
                    args.len()
                )))
            }
        };
        let phi = match name {
            "KcapS" => {
                arity(0)?;
                AnyTestFn::S(TestFnS::KcapS)
            }
            "IntegralDetM" => {
                arity(1)?;
                AnyTestFn::S(TestFnS::IntegralDetM(int(0)?))
            }
            "KlxiN" | "KlxiNPrime" => {
                arity(3)?;
                let (l, tr_xi, n) = (int(0)?, LocalElem::parse(f, args[1])?, int(2)?);
                AnyTestFn::S(if name == "KlxiN" {
                    TestFnS::KlxiN { l, tr_xi, n }
                } else {
                    TestFnS::KlxiNPrime { l, tr_xi, n }
                })
            }
            "Cm" => {
                arity(1)?;
                AnyTestFn::G(TestFnG::Cm(int(0)?))
            }
            "KepsM" => {
                arity(1)?;
                AnyTestFn::G(TestFnG::KepsM(int(0)?))
            }
            "KepsMZ" => {
                arity(1)?;
                AnyTestFn::G(TestFnG::KepsMZ(int(0)?))
            }
            "IntegralDetMG" => {
                arity(1)?;
                AnyTestFn::G(TestFnG::IntegralDetMG(int(0)?))
            }
            other => return Err(RtfError::Parse(format!("unknown test function {other:?}"))),
        };
        Ok(phi)
    }
}
