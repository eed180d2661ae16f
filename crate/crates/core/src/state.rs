use crate::error::{Error, Result};
use crate::grid::Field;

/// Instantaneous solution: `u` alone, or `(u, rho_tilde)` for the two-component system.
#[derive(Clone, Debug, PartialEq)]
pub struct State {
    pub time: f64,
    pub u: Field,
    pub rho_tilde: Option<Field>,
}

impl State {
    pub fn single(time: f64, u: Field) -> Self {
        Self {
            time,
            u,
            rho_tilde: None,
        }
    }

    pub fn two_component(time: f64, u: Field, rho_tilde: Field) -> Result<Self> {
        if !u.same_grid(&rho_tilde) {
            return Err(Error::GridMismatch);
        }
        Ok(Self {
            time,
            u,
            rho_tilde: Some(rho_tilde),
        })
    }

    pub fn is_two_component(&self) -> bool {
        self.rho_tilde.is_some()
    }

    pub fn rho(&self) -> Result<&Field> {
        self.rho_tilde.as_ref().ok_or(Error::MissingDensity)
    }

    pub fn is_finite(&self) -> bool {
        self.u.is_finite() && self.rho_tilde.as_ref().is_none_or(Field::is_finite)
    }
}
