use serde::Serialize;

use crate::error::{Error, Result};
use crate::serial::{sig17, sig17_opt};

/// Continuity modulus of `g` in the product metric, when known.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Modulus {
    /// `d(g(x), g(y)) <= L d(x, y)`.
    Lipschitz {
        #[serde(serialize_with = "sig17")]
        constant: f64,
    },
    /// `d(g(x), g(y)) <= C d(x, y)^alpha`.
    Holder {
        #[serde(serialize_with = "sig17")]
        constant: f64,
        #[serde(serialize_with = "sig17")]
        exponent: f64,
    },
}

impl Modulus {
    fn validate(&self) -> Result<()> {
        let ok = match *self {
            Modulus::Lipschitz { constant } => constant.is_finite() && constant > 0.0,
            Modulus::Holder { constant, exponent } => {
                constant.is_finite() && constant > 0.0 && exponent > 0.0 && exponent <= 1.0
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!("invalid continuity modulus {self:?}")))
        }
    }

    /// Largest `delta` with `modulus(delta) <= target`.
    pub fn inverse(&self, target: f64) -> f64 {
        match *self {
            Modulus::Lipschitz { constant } => target / constant,
            Modulus::Holder { constant, exponent } => (target / constant).powf(1.0 / exponent),
        }
    }
}

/// Optional replacements for the derived parameters.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ParamOverrides {
    /// Truncation dimension; must be at least the derived minimum.
    pub n: Option<usize>,
    pub max_refinements: Option<u32>,
    pub modulus: Option<Modulus>,
}

pub const DEFAULT_MAX_REFINEMENTS: u32 = 20;

/// Parameters derived from the target accuracy.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SolverParams {
    #[serde(serialize_with = "sig17")]
    pub epsilon: f64,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(serialize_with = "sig17")]
    pub eps0: f64,
    #[serde(serialize_with = "sig17")]
    pub eps1: f64,
    #[serde(serialize_with = "sig17")]
    pub mesh_target: f64,
    /// `2^-N`, the weight of every coordinate past `N`.
    #[serde(serialize_with = "sig17")]
    pub tail_bound: f64,
    pub max_refinements: u32,
    pub modulus: Option<Modulus>,
    /// `delta_1` from the modulus, when one is given.
    #[serde(serialize_with = "sig17_opt")]
    pub delta1: Option<f64>,
}

/// Smallest `N` with `N >= log2(2 / epsilon) + 1`.
pub fn min_dimension(epsilon: f64) -> usize {
    let mut n = ((2.0 / epsilon).log2() + 1.0).ceil().max(1.0) as usize;
    // guard against rounding in log2: the tail bound must hold exactly
    while 0.5f64.powi(n as i32) >= epsilon / 2.0 {
        n += 1;
    }
    n
}

pub fn plan_parameters(epsilon: f64, overrides: &ParamOverrides) -> Result<SolverParams> {
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "epsilon must be positive, got {epsilon}"
        )));
    }
    let epsilon = epsilon.min(1.0);
    let min_n = min_dimension(epsilon);
    let n = match overrides.n {
        Some(n) if n < min_n => {
            return Err(Error::InvalidParameter(format!(
                "N = {n} is below the minimum {min_n} for epsilon {epsilon}"
            )))
        }
        Some(n) if n > 1000 => return Err(Error::InvalidParameter(format!("N = {n} is too large"))),
        Some(n) => n,
        None => min_n,
    };
    if let Some(m) = &overrides.modulus {
        m.validate()?;
    }
    let n1 = (n + 1) as f64;
    let eps0 = epsilon / (8.0 * n1);
    let eps1 = epsilon / (2f64.powi(n as i32 + 5) * n1);
    let delta1 = overrides.modulus.map(|m| m.inverse(eps1));
    let mesh_target = delta1.map_or(eps1, |d| d.min(eps1));
    let max_refinements = overrides.max_refinements.unwrap_or(DEFAULT_MAX_REFINEMENTS);
    if max_refinements > 60 {
        return Err(Error::InvalidParameter(format!(
            "max_refinements {max_refinements} exceeds 60"
        )));
    }
    Ok(SolverParams {
        epsilon,
        n,
        eps0,
        eps1,
        mesh_target,
        tail_bound: 0.5f64.powi(n as i32),
        max_refinements,
        modulus: overrides.modulus,
        delta1,
    })
}
