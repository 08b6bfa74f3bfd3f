use std::fmt;
use std::str::FromStr;

use super::{binomial_sum, AttackError};

/// Exponent of the Gaussian reduction (Strassen).
pub const OMEGA: f64 = 2.807;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AttackKind {
    Standard,
    Rh,
}

impl fmt::Display for AttackKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AttackKind::Standard => "standard",
            AttackKind::Rh => "rh",
        })
    }
}

impl FromStr for AttackKind {
    type Err = AttackError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "standard" => Ok(AttackKind::Standard),
            "rh" => Ok(AttackKind::Rh),
            _ => Err(AttackError::Estimate(format!("unknown attack kind `{s}`"))),
        }
    }
}

/// Closed-form costs, all as base-2 logarithms.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexityEstimate {
    pub kind: AttackKind,
    pub n: usize,
    pub d_f: usize,
    pub e: usize,
    pub d: usize,
    pub big_d: u128,
    pub big_e: u128,
    pub omega: f64,
    /// Constant in the precomputation formula.
    pub c: f64,
    pub data: f64,
    pub precomputation: f64,
    pub substitution: f64,
    pub solving: f64,
}

impl ComplexityEstimate {
    /// The larger of substitution and solving.
    pub fn computation(&self) -> f64 {
        self.substitution.max(self.solving)
    }
}

impl fmt::Display for ComplexityEstimate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "kind = {}", self.kind)?;
        writeln!(f, "n = {}", self.n)?;
        match self.kind {
            AttackKind::Standard => {
                writeln!(f, "d = {}", self.d)?;
                writeln!(f, "e = {}", self.e)?;
                writeln!(f, "D = {}", self.big_d)?;
                writeln!(f, "E = {}", self.big_e)?;
            }
            AttackKind::Rh => {
                writeln!(f, "d_f = {}", self.d_f)?;
                writeln!(f, "D = {}", self.big_d)?;
            }
        }
        writeln!(f, "omega = {}", self.omega)?;
        writeln!(f, "c = {}", self.c)?;
        writeln!(f, "log2_data = {:.2}", self.data)?;
        writeln!(f, "log2_precomputation = {:.2}", self.precomputation)?;
        writeln!(f, "log2_substitution = {:.2}", self.substitution)?;
        writeln!(f, "log2_solving = {:.2}", self.solving)?;
        writeln!(f, "log2_computation = {:.2}", self.computation())
    }
}

fn log2(x: u128) -> f64 {
    (x as f64).log2()
}

/// Costs of the standard attack (`d`, `e`) or the RH attack (`d_f`).
///
/// Standard: `D = Σ_{i<=d} C(n,i)`, `E = Σ_{i<=e} C(n,i)`, data `D+E-1`,
/// substitution `2·D·E·log2 E`, precomputation `c·D·(n·log2²n + log2³D)`,
/// solving `E^ω`. RH: `D = Σ_{i<=d_f} C(n,i)`, data `D`, precomputation
/// `D·log2³D`, substitution `D`, solving `n^ω`.
pub fn estimate(
    n: usize,
    d_f: usize,
    e: usize,
    d: usize,
    kind: AttackKind,
) -> Result<ComplexityEstimate, AttackError> {
    estimate_with(n, d_f, e, d, kind, 1.0)
}

pub fn estimate_with(
    n: usize,
    d_f: usize,
    e: usize,
    d: usize,
    kind: AttackKind,
    c: f64,
) -> Result<ComplexityEstimate, AttackError> {
    if n < 2 {
        return Err(AttackError::Estimate("n must be at least 2".into()));
    }
    let nf = n as f64;
    let est = match kind {
        AttackKind::Standard => {
            if e == 0 || d == 0 || e > d || d > n {
                return Err(AttackError::Estimate(format!(
                    "need 1 <= e <= d <= n, got e = {e}, d = {d}, n = {n}"
                )));
            }
            let big_d = binomial_sum(n, d);
            let big_e = binomial_sum(n, e);
            let (ld, le) = (log2(big_d), log2(big_e));
            ComplexityEstimate {
                kind,
                n,
                d_f,
                e,
                d,
                big_d,
                big_e,
                omega: OMEGA,
                c,
                data: log2(big_d + big_e - 1),
                precomputation: c.log2() + ld + (nf * nf.log2().powi(2) + ld.powi(3)).log2(),
                substitution: 1.0 + ld + le + le.log2(),
                solving: OMEGA * le,
            }
        }
        AttackKind::Rh => {
            if d_f == 0 || d_f > n {
                return Err(AttackError::Estimate(format!(
                    "need 1 <= d_f <= n, got d_f = {d_f}, n = {n}"
                )));
            }
            let big_d = binomial_sum(n, d_f);
            let ld = log2(big_d);
            ComplexityEstimate {
                kind,
                n,
                d_f,
                e,
                d,
                big_d,
                big_e: n as u128,
                omega: OMEGA,
                c,
                data: ld,
                precomputation: c.log2() + ld + 3.0 * ld.log2(),
                substitution: ld,
                solving: OMEGA * nf.log2(),
            }
        }
    };
    Ok(est)
}
