//! Space-budget policies: the trade-off parameter `t` expressed as a
//! formula over the vertex count `n`.

use std::fmt;
use std::str::FromStr;

use crate::error::BudgetError;

/// Bytes charged per stored hull vertex (coordinates plus point index).
pub const HULL_VERTEX_BYTES: u64 = 20;

/// Recognized forms: `n`, `n^<exp>`, `n2cap:<bytes>`, or a literal integer.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TPolicy {
    Linear,
    Power(f64),
    /// `n^2`, capped by a memory allowance in bytes.
    N2Cap(u64),
    Fixed(u64),
}

impl Default for TPolicy {
    fn default() -> Self {
        TPolicy::Power(1.5)
    }
}

impl TPolicy {
    /// Resolves to a concrete `t` and checks `n <= t <= n^2`.
    pub fn resolve(&self, n: usize) -> Result<usize, BudgetError> {
        let n2 = (n as u128) * (n as u128);
        let raw: u128 = match *self {
            TPolicy::Linear => n as u128,
            TPolicy::Power(e) => {
                let t = (n as f64).powf(e).round();
                if !t.is_finite() || t < 0.0 {
                    u128::MAX
                } else {
                    // rounding must not push n^2 past itself
                    (t as u128).min(if e <= 2.0 { n2 } else { u128::MAX })
                }
            }
            TPolicy::N2Cap(bytes) => n2.min((bytes / HULL_VERTEX_BYTES) as u128),
            TPolicy::Fixed(t) => t as u128,
        };
        check_budget(raw, n)?;
        Ok(raw as usize)
    }
}

pub fn check_budget(t: u128, n: usize) -> Result<(), BudgetError> {
    let min = n as u128;
    let max = min * min;
    if t < min || t > max {
        Err(BudgetError::InvalidBudget { t, n, min, max })
    } else {
        Ok(())
    }
}

impl FromStr for TPolicy {
    type Err = BudgetError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let unknown = || BudgetError::UnknownPolicy(s.to_string());
        if s == "n" {
            return Ok(TPolicy::Linear);
        }
        if let Some(exp) = s.strip_prefix("n^") {
            let e: f64 = exp.parse().map_err(|_| unknown())?;
            if !e.is_finite() {
                return Err(unknown());
            }
            return Ok(TPolicy::Power(e));
        }
        if let Some(bytes) = s.strip_prefix("n2cap:") {
            return bytes.parse().map(TPolicy::N2Cap).map_err(|_| unknown());
        }
        s.parse().map(TPolicy::Fixed).map_err(|_| unknown())
    }
}

impl fmt::Display for TPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TPolicy::Linear => f.write_str("n"),
            TPolicy::Power(e) => write!(f, "n^{e}"),
            TPolicy::N2Cap(b) => write!(f, "n2cap:{b}"),
            TPolicy::Fixed(t) => write!(f, "{t}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_resolve() {
        assert_eq!("n".parse::<TPolicy>().unwrap().resolve(1000).unwrap(), 1000);
        assert_eq!(
            "n^1.5".parse::<TPolicy>().unwrap().resolve(100).unwrap(),
            1000
        );
        assert_eq!("n^2".parse::<TPolicy>().unwrap().resolve(30).unwrap(), 900);
        assert_eq!(
            "n2cap:200000"
                .parse::<TPolicy>()
                .unwrap()
                .resolve(1000)
                .unwrap(),
            10_000
        );
        assert_eq!(
            "n2cap:1000000000"
                .parse::<TPolicy>()
                .unwrap()
                .resolve(10)
                .unwrap(),
            100
        );
        assert_eq!("5000".parse::<TPolicy>().unwrap(), TPolicy::Fixed(5000));
    }

    #[test]
    fn out_of_range() {
        assert!(matches!(
            TPolicy::Fixed(10).resolve(100),
            Err(BudgetError::InvalidBudget { .. })
        ));
        assert!(TPolicy::Power(0.5).resolve(100).is_err());
        assert!(TPolicy::Power(2.5).resolve(100).is_err());
        assert!(TPolicy::N2Cap(10).resolve(100).is_err());
        assert!("n^x".parse::<TPolicy>().is_err());
        assert!("quadratic".parse::<TPolicy>().is_err());
    }

    #[test]
    fn display_round_trips() {
        for s in ["n", "n^1.25", "n2cap:4096", "77"] {
            assert_eq!(s.parse::<TPolicy>().unwrap().to_string(), s);
        }
    }

    #[test]
    fn empty_scene_budget() {
        assert_eq!(TPolicy::default().resolve(0).unwrap(), 0);
    }
}
