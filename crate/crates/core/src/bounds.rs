//! Explicit bounds on `λ₂` and the spectral gap of the `k`-regular family
//! built from the greatest prime `p < k`.
//!
//! Every model is expressed as a lower bound on the spectral gap `k − λ₂`.
//! `log` is the natural logarithm throughout.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numtheory::{self, DeltaMax, PrimePlan};

/// Threshold of the explicit prime-gap interval `[x, x(1 + 1/(111 log² x))]`.
pub const TRUDGIAN_THRESHOLD: u64 = 2_898_239;

/// Exponent in the prime-gap bound `p' − p < p^0.525`.
pub const BHP_EXPONENT: f64 = 0.525;

/// The six `k` ranges of the reference `δ_k` table.
pub const DEFAULT_TABLE_RANGES: [(u64, u64); 6] = [
    (10, 100),
    (100, 1_000),
    (1_000, 10_000),
    (10_000, 100_000),
    (100_000, 1_000_000),
    (1_000_000, 10_000_000),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundKind {
    /// `k − 2(1 + δ_k)√(k−1)`
    #[serde(rename = "delta")]
    DeltaExact,
    /// `k − (2√p + k − p − 1)`
    #[serde(rename = "chain")]
    ChainIntermediate,
    Trudgian,
    Bhp,
    #[serde(rename = "rh")]
    CramerRh,
}

impl BoundKind {
    pub const ALL: [BoundKind; 5] = [
        BoundKind::ChainIntermediate,
        BoundKind::DeltaExact,
        BoundKind::Trudgian,
        BoundKind::Bhp,
        BoundKind::CramerRh,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            BoundKind::DeltaExact => "delta",
            BoundKind::ChainIntermediate => "chain",
            BoundKind::Trudgian => "trudgian",
            BoundKind::Bhp => "bhp",
            BoundKind::CramerRh => "rh",
        }
    }
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BoundKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BoundKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown bound model {s:?}")))
    }
}

/// Parameters shared by the bound models.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundParams {
    /// `k` from which the `p^0.525` gap bound is taken to hold. The source
    /// result only says "for all sufficiently large", so there is no default
    /// and unset means every BHP value is advisory.
    pub bhp_threshold: Option<u64>,
    /// Constant `C` in `p' − p ≤ C √p log p`. 1.0 is a convention.
    pub rh_constant: f64,
}

impl Default for BoundParams {
    fn default() -> Self {
        BoundParams { bhp_threshold: None, rh_constant: 1.0 }
    }
}

/// A gap lower bound for a given `k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundValue {
    pub model: BoundKind,
    pub k: u64,
    /// Lower bound on `k − λ₂`.
    pub value: f64,
    /// Whether `k` lies in the model's proven range.
    pub valid: bool,
    /// Whether the model assumes the Riemann Hypothesis.
    pub conditional: bool,
}

impl BoundValue {
    /// The equivalent upper bound on `λ₂`.
    pub fn lambda2_bound(&self) -> f64 {
        self.k as f64 - self.value
    }

    /// The bound combined with the trivial `λ₂ ≤ k`, i.e. `max(value, 0)`.
    pub fn clamped(&self) -> f64 {
        self.value.max(0.0)
    }

    pub fn informative(&self) -> bool {
        self.value > 0.0
    }
}

/// The two ends of the eigenvalue chain for `p = prev_prime(k)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChainBound {
    /// `2√p + (k − p − 1)`
    pub intermediate: f64,
    /// `2(1 + δ_k)√(k − 1)`
    pub normalized: f64,
}

pub fn lambda2_bound_chain(k: u64, p: u64) -> Result<ChainBound> {
    let plan = PrimePlan::for_regularity(k)?;
    if plan.p != p {
        return Err(Error::InvalidArgument(format!(
            "p = {p} is not the greatest prime below k = {k} (that is {})",
            plan.p
        )));
    }
    Ok(chain_for_plan(&plan))
}

pub(crate) fn chain_for_plan(plan: &PrimePlan) -> ChainBound {
    let intermediate = 2.0 * (plan.p as f64).sqrt() + plan.increments as f64;
    let normalized = 2.0 * (1.0 + plan.delta_k) * ((plan.k - 1) as f64).sqrt();
    ChainBound { intermediate, normalized }
}

/// `k(1 − 2/(111 log²(k−1))) − 2√(k−1)`.
pub fn trudgian_formula(k: f64) -> f64 {
    let l = (k - 1.0).ln();
    k * (1.0 - 2.0 / (111.0 * l * l)) - 2.0 * (k - 1.0).sqrt()
}

pub fn gap_bound_trudgian(k: u64) -> BoundValue {
    BoundValue {
        model: BoundKind::Trudgian,
        k,
        value: trudgian_formula(k as f64),
        valid: k >= TRUDGIAN_THRESHOLD,
        conditional: false,
    }
}

/// `k − 2(1 + k^0.025)√(k−1)`.
pub fn bhp_formula(k: f64) -> f64 {
    k - 2.0 * (1.0 + k.powf(BHP_EXPONENT - 0.5)) * (k - 1.0).sqrt()
}

pub fn gap_bound_bhp(k: u64, threshold: Option<u64>) -> BoundValue {
    BoundValue {
        model: BoundKind::Bhp,
        k,
        value: bhp_formula(k as f64),
        valid: threshold.is_some_and(|t| k >= t),
        conditional: false,
    }
}

/// `r` such that `(k−1)^{1/2 + r} = (1 + C log(k−1))√(k−1)`, as a function
/// of `x = k − 1`.
pub fn rh_exponent(x: f64, c: f64) -> f64 {
    (1.0 + c * x.ln()).ln() / x.ln()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RhBound {
    /// `k − 2(k−1)^{1/2 + r}`
    pub gap: f64,
    pub r: f64,
    /// `k − 2(1 + C log(k−1))√(k−1)`, algebraically equal to `gap`.
    pub gap_direct: f64,
}

pub fn gap_bound_rh(k: u64, c: f64) -> Result<RhBound> {
    if k < 3 {
        return Err(Error::InvalidArgument(format!("RH bound needs k >= 3, got {k}")));
    }
    if !c.is_finite() || c <= 0.0 {
        return Err(Error::InvalidArgument(format!("RH constant must be positive, got {c}")));
    }
    let x = (k - 1) as f64;
    let r = rh_exponent(x, c);
    Ok(RhBound {
        gap: k as f64 - 2.0 * x.powf(0.5 + r),
        r,
        gap_direct: k as f64 - 2.0 * (1.0 + c * x.ln()) * x.sqrt(),
    })
}

/// Evaluates one model at `k`.
pub fn evaluate(kind: BoundKind, k: u64, params: &BoundParams) -> Result<BoundValue> {
    Ok(match kind {
        BoundKind::ChainIntermediate | BoundKind::DeltaExact => {
            let plan = PrimePlan::for_regularity(k)?;
            let chain = chain_for_plan(&plan);
            let bound = if kind == BoundKind::ChainIntermediate {
                chain.intermediate
            } else {
                chain.normalized
            };
            BoundValue { model: kind, k, value: k as f64 - bound, valid: true, conditional: false }
        }
        BoundKind::Trudgian => gap_bound_trudgian(k),
        BoundKind::Bhp => gap_bound_bhp(k, params.bhp_threshold),
        BoundKind::CramerRh => BoundValue {
            model: kind,
            k,
            value: gap_bound_rh(k, params.rh_constant)?.gap,
            valid: true,
            conditional: true,
        },
    })
}

pub fn evaluate_all(k: u64, params: &BoundParams) -> Result<Vec<BoundValue>> {
    BoundKind::ALL.iter().map(|&kind| evaluate(kind, k, params)).collect()
}

/// One row per range: the maximum `δ_k` rounded up to two decimals.
pub fn delta_table(ranges: &[(u64, u64)]) -> Result<Vec<DeltaMax>> {
    ranges.iter().map(|&(lo, hi)| numtheory::max_delta_in_range(lo, hi)).collect()
}

/// Parses `lo:hi,lo:hi,...`.
pub fn parse_ranges(s: &str) -> Result<Vec<(u64, u64)>> {
    s.split(',')
        .map(|part| {
            let (lo, hi) = part
                .split_once(':')
                .ok_or_else(|| Error::InvalidArgument(format!("range {part:?} is not lo:hi")))?;
            let parse = |x: &str| {
                x.trim().parse::<u64>().map_err(|e| Error::InvalidArgument(format!("{x:?}: {e}")))
            };
            Ok((parse(lo)?, parse(hi)?))
        })
        .collect()
}
