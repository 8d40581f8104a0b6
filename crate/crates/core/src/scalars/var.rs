use std::fmt;
use std::str::FromStr;

use crate::error::ParseError;

/// A generator of the coefficient ring.
///
/// The derived ordering is the canonical variable order used by every
/// polynomial: `z1 < z2 < … < t1_1 < t1_2 < … < t2_1 < … < h < mu1 < …`.
/// Indices are 1-based, matching the usual notation `z_i`, `t^{(k)}_a`, `μ_i`.
///
/// `t^{(N)}_a` is never represented; builders in [`crate::weights`] resolve it
/// to `z_a` before a polynomial is formed.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum VariableId {
    Z(u16),
    T(u16, u16),
    Hbar,
    Mu(u16),
}

impl VariableId {
    pub fn z(i: usize) -> Self {
        VariableId::Z(i as u16)
    }

    pub fn t(k: usize, a: usize) -> Self {
        VariableId::T(k as u16, a as u16)
    }

    pub fn mu(i: usize) -> Self {
        VariableId::Mu(i as u16)
    }
}

impl fmt::Display for VariableId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VariableId::Z(i) => write!(f, "z{i}"),
            VariableId::T(k, a) => write!(f, "t{k}_{a}"),
            VariableId::Hbar => write!(f, "h"),
            VariableId::Mu(i) => write!(f, "mu{i}"),
        }
    }
}

impl FromStr for VariableId {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ParseError::new(format!("unknown variable `{s}`"));
        let index = |digits: &str| -> Result<u16, ParseError> {
            match digits.parse::<u16>() {
                Ok(v) if v > 0 => Ok(v),
                _ => Err(bad()),
            }
        };
        if s == "h" {
            Ok(VariableId::Hbar)
        } else if let Some(rest) = s.strip_prefix("mu") {
            Ok(VariableId::Mu(index(rest)?))
        } else if let Some(rest) = s.strip_prefix('z') {
            Ok(VariableId::Z(index(rest)?))
        } else if let Some(rest) = s.strip_prefix('t') {
            let (k, a) = rest.split_once('_').ok_or_else(bad)?;
            Ok(VariableId::T(index(k)?, index(a)?))
        } else {
            Err(bad())
        }
    }
}
