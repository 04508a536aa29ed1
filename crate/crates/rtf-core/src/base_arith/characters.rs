//! Additive and multiplicative characters of F = F_q((t)) with values in
//! mu_p x mu_{q-1}, encoded as exponents of zeta_M with M = p(q-1).

use std::sync::Arc;

use super::cyclo::{root_index, CycloValue};
use super::fq::FqField;
use super::laurent::LocalElem;
use crate::error::{Result, RtfError};

/// psi(x) = zeta_p^{Tr(beta * coef_{c-1}(a x))}; trivial on p^c, not on p^{c-1}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdditiveCharacter {
    field: Arc<FqField>,
    conductor: i64,
    beta: u32,
    scale: LocalElem,
}

impl AdditiveCharacter {
    /// The default character: conductor 0, residue of the t^{-1} coefficient.
    pub fn standard(field: &Arc<FqField>) -> Self {
        Self::new(field, 0, 1).unwrap()
    }

    pub fn new(field: &Arc<FqField>, conductor: i64, beta: u32) -> Result<Self> {
        if beta == 0 || beta >= field.q() {
            return Err(RtfError::Config(
                "additive character needs beta in F_q^x".into(),
            ));
        }
        Ok(AdditiveCharacter {
            field: field.clone(),
            conductor,
            beta,
            scale: LocalElem::one(field),
        })
    }

    /// x -> psi(a x) for a unit a.
    pub fn twisted(&self, a: &LocalElem) -> Result<Self> {
        if a.v()? != 0 {
            return Err(RtfError::Config("twist must be a unit".into()));
        }
        Ok(AdditiveCharacter {
            scale: self.scale.mul(a),
            ..self.clone()
        })
    }

    pub fn conductor(&self) -> i64 {
        self.conductor
    }

    pub fn field(&self) -> &Arc<FqField> {
        &self.field
    }

    /// Exponent i with psi(x) = zeta_p^i.
    pub fn eval_exp(&self, x: &LocalElem) -> Result<u32> {
        let y = self.scale.mul(x);
        let c = y.coeff_certain(self.conductor - 1)?;
        Ok(self.field.trace(self.field.mul(self.beta, c)))
    }

    /// psi(x) as an exponent of zeta_M, M = p(q-1).
    pub fn eval_root(&self, x: &LocalElem) -> Result<i64> {
        let f = &self.field;
        Ok(root_index(f.p(), f.q(), self.eval_exp(x)? as i64, 0))
    }

    pub fn eval(&self, x: &LocalElem) -> Result<CycloValue> {
        let f = &self.field;
        Ok(CycloValue::root(f.p() * (f.q() - 1), self.eval_root(x)?))
    }
}

/// Value of a character at the uniformizer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AtUniformizer {
    /// chi(t) = zeta_M^r.
    Root(i64),
    /// chi(t) is the formal unit xi.
    Formal,
}

/// A value chi(x) = zeta_M^root * xi^xi_power.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CharValue {
    pub root: i64,
    pub xi_power: i64,
}

/// Character of F^x of conductor 0, 1 or 2.
///
/// On x = t^v x0 (1 + y1 t + ...) it is chi(t)^v zeta_{q-1}^{e log x0} zeta_p^{Tr(beta y1)}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiplicativeCharacter {
    field: Arc<FqField>,
    conductor: i64,
    residue_exp: i64,
    beta: u32,
    at_uniformizer: AtUniformizer,
}

impl MultiplicativeCharacter {
    pub fn trivial(field: &Arc<FqField>) -> Self {
        Self::unramified(field, AtUniformizer::Root(0))
    }

    pub fn unramified(field: &Arc<FqField>, at: AtUniformizer) -> Self {
        MultiplicativeCharacter {
            field: field.clone(),
            conductor: 0,
            residue_exp: 0,
            beta: 0,
            at_uniformizer: at,
        }
    }

    /// Tame character zeta_{q-1}^{e log x0}; requires e != 0 mod q-1.
    pub fn tame(field: &Arc<FqField>, e: i64, at: AtUniformizer) -> Result<Self> {
        let n = field.q() as i64 - 1;
        if e.rem_euclid(n) == 0 {
            return Err(RtfError::Config(
                "tame character needs a nonzero exponent".into(),
            ));
        }
        Ok(MultiplicativeCharacter {
            field: field.clone(),
            conductor: 1,
            residue_exp: e.rem_euclid(n),
            beta: 0,
            at_uniformizer: at,
        })
    }

    /// Conductor-2 character with one-unit part beta != 0.
    pub fn wild(field: &Arc<FqField>, e: i64, beta: u32, at: AtUniformizer) -> Result<Self> {
        if beta == 0 {
            return Err(RtfError::Config("conductor 2 needs beta != 0".into()));
        }
        let n = field.q() as i64 - 1;
        Ok(MultiplicativeCharacter {
            field: field.clone(),
            conductor: 2,
            residue_exp: e.rem_euclid(n),
            beta,
            at_uniformizer: at,
        })
    }

    /// The quadratic character of F_q^x extended by chi(t) (p odd).
    pub fn quadratic(field: &Arc<FqField>, at: AtUniformizer) -> Result<Self> {
        if field.p() == 2 {
            return Err(RtfError::Config(
                "no quadratic tame character in characteristic 2".into(),
            ));
        }
        Self::tame(field, (field.q() as i64 - 1) / 2, at)
    }

    pub fn conductor(&self) -> i64 {
        self.conductor
    }

    pub fn at_uniformizer(&self) -> AtUniformizer {
        self.at_uniformizer
    }

    pub fn field(&self) -> &Arc<FqField> {
        &self.field
    }

    fn m(&self) -> i64 {
        (self.field.p() * (self.field.q() - 1)) as i64
    }

    /// chi on a unit, as an exponent of zeta_M.
    pub fn eval_unit_root(&self, x: &LocalElem) -> Result<i64> {
        let f = &self.field;
        if x.v()? != 0 {
            return Err(RtfError::Config("expected a unit".into()));
        }
        let x0 = x.leading()?;
        let j = self.residue_exp * f.log(x0).unwrap() as i64;
        let i = if self.conductor >= 2 {
            let y1 = f.mul(x.coeff_certain(1)?, f.inv(x0).unwrap());
            f.trace(f.mul(self.beta, y1)) as i64
        } else {
            0
        };
        Ok(root_index(f.p(), f.q(), i, j))
    }

    pub fn eval(&self, x: &LocalElem) -> Result<CharValue> {
        let v = x.v()?;
        let u = x.unit_part()?;
        let r = self.eval_unit_root(&u)?;
        Ok(match self.at_uniformizer {
            AtUniformizer::Root(a) => CharValue {
                root: (r + v * a).rem_euclid(self.m()),
                xi_power: 0,
            },
            AtUniformizer::Formal => CharValue {
                root: r,
                xi_power: v,
            },
        })
    }
}
