//! Hopf projection of the coupling space onto the light cone
//! `xi0² = xi1² + xi2² + xi3²`, and its inverse on the ladder slice.

use crate::error::{Error, Result};
use crate::hamiltonian::CouplingSet;
use serde::{Deserialize, Serialize};

/// Default relative tolerance for cone and ladder checks.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Gauge-invariant coordinates of a coupling set, in units of frequency squared.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HopfCoordinates {
    pub xi0: f64,
    pub xi1: f64,
    pub xi2: f64,
    pub xi3: f64,
}

impl HopfCoordinates {
    pub fn new(xi0: f64, xi1: f64, xi2: f64, xi3: f64) -> Self {
        HopfCoordinates { xi0, xi1, xi2, xi3 }
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.xi0, self.xi1, self.xi2, self.xi3]
    }

    pub fn scaled(&self, s: f64) -> Self {
        HopfCoordinates::new(s * self.xi0, s * self.xi1, s * self.xi2, s * self.xi3)
    }

    /// Norm of the "torque" vector `(xi1, xi2, xi3)/sqrt(xi0)`, equal to
    /// `sqrt(xi0)` on the cone. Reported for reference only; it does not
    /// set the transfer time (see [`crate::dynamics::transfer_time`]).
    pub fn torque_norm(&self) -> f64 {
        if self.xi0 <= 0.0 {
            return 0.0;
        }
        (self.xi1 * self.xi1 + self.xi2 * self.xi2 + self.xi3 * self.xi3).sqrt() / self.xi0.sqrt()
    }
}

pub fn hopf_map(c: &CouplingSet) -> Result<HopfCoordinates> {
    c.validate()?;
    let CouplingSet { v12, v23, v34, v14 } = *c;
    let left = v12 * v12 + v14 * v14;
    let right = v23 * v23 + v34 * v34;
    let x = HopfCoordinates {
        xi0: 0.5 * (left + right),
        xi1: v12 * v23 + v14 * v34,
        xi2: v12 * v34 - v23 * v14,
        xi3: 0.5 * (left - right),
    };
    if !x.as_array().iter().all(|v| v.is_finite()) {
        return Err(Error::InvalidCoordinates(format!(
            "overflow in Hopf coordinates for {c:?}"
        )));
    }
    Ok(x)
}

/// `(xi0² - xi1² - xi2² - xi3²) / max(xi0², 1)`.
pub fn cone_residual(x: &HopfCoordinates) -> f64 {
    let HopfCoordinates { xi0, xi1, xi2, xi3 } = *x;
    (xi0 * xi0 - xi1 * xi1 - xi2 * xi2 - xi3 * xi3) / (xi0 * xi0).max(1.0)
}

/// Inverts the Hopf map on the `xi3 = 0` slice, returning the ladder
/// representative with `v12 = +sqrt(xi0)` and `v14 = 0`.
pub fn ladder_from_hopf(x: &HopfCoordinates, tol: f64) -> Result<CouplingSet> {
    if !x.as_array().iter().all(|v| v.is_finite()) {
        return Err(Error::InvalidCoordinates(format!("non-finite {:?}", x.as_array())));
    }
    if x.xi0 <= 0.0 {
        return Err(Error::DegenerateInput { xi0: x.xi0 });
    }
    let ratio = x.xi3.abs() / x.xi0;
    if ratio > tol {
        return Err(Error::NotLadder { ratio, tol });
    }
    let residual = cone_residual(x);
    if residual.abs() > tol {
        return Err(Error::InvalidCoordinates(format!(
            "off the cone (relative residual {residual:e})"
        )));
    }
    let v12 = x.xi0.sqrt();
    CouplingSet::ladder(v12, x.xi1 / v12, x.xi2 / v12)
}
