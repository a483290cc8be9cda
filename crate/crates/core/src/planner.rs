//! Plans, builds and certifies a `k`-regular family member, and compares
//! the two ways of raising regularity.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bounds::{self, BoundParams};
use crate::error::{Error, Result};
use crate::expansion::{self, MAX_EXACT_VERTICES};
use crate::graph::Graph;
use crate::lps::{self, GroupKind};
use crate::matching;
use crate::numtheory::{is_prime, PrimePlan};
use crate::spectral::{self, Method, SpectralConfig};

pub const CERTIFICATE_VERSION: u32 = 1;

/// Default cap on the LPS `q` search.
pub const DEFAULT_Q_MAX: u64 = 101;

/// Tolerance for the iterated product law.
pub const PRODUCT_LAW_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    Matching,
    K2product,
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::Matching => "matching",
            Strategy::K2product => "k2product",
        })
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "matching" => Ok(Strategy::Matching),
            "k2product" => Ok(Strategy::K2product),
            _ => Err(Error::InvalidArgument(format!("unknown strategy {s:?}"))),
        }
    }
}

/// The LPS-constructible base: largest prime `p* ≤ k − 1`, `p* ≡ 1 (mod 4)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BuildablePlan {
    pub k: u64,
    pub p: u64,
    pub increments: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Plan {
    pub theoretical: PrimePlan,
    pub buildable: BuildablePlan,
}

impl Plan {
    /// Whether the buildable base coincides with the greatest prime below `k`.
    pub fn matches_theory(&self) -> bool {
        self.theoretical.p == self.buildable.p
    }
}

pub fn plan(k: u64) -> Result<Plan> {
    let theoretical = PrimePlan::for_regularity(k)?;
    let p = (5..k)
        .rev()
        .find(|&p| p % 4 == 1 && is_prime(p))
        .ok_or_else(|| {
            Error::InvalidArgument(format!(
                "no prime p ≡ 1 (mod 4) with 5 <= p <= k - 1 for k = {k}; use a small closed-form graph"
            ))
        })?;
    Ok(Plan { theoretical, buildable: BuildablePlan { k, p, increments: k - p - 1 } })
}

/// One step of how a graph was obtained.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum Step {
    /// Informational; replay ignores it.
    Plan {
        k: u64,
        theoretical_p: u64,
        executed_p: u64,
        increments: u64,
        strategy: Strategy,
    },
    Lps {
        p: u64,
        q: u64,
        group: GroupKind,
        n: usize,
    },
    Small {
        name: String,
    },
    /// A graph read from a file; cannot be replayed.
    Input {
        n: usize,
        m: usize,
    },
    MatchingIncrement {
        k: usize,
        n: usize,
    },
    K2product {
        k: usize,
        n: usize,
    },
}

/// Rebuilds a graph from its provenance chain.
pub fn replay(steps: &[Step]) -> Result<Graph> {
    let mut g: Option<Graph> = None;
    for step in steps {
        let next = match step {
            Step::Plan { .. } => continue,
            Step::Lps { p, q, .. } => lps::build_lps(*p, *q)?,
            Step::Small { name } => lps::small_ramanujan(name)?,
            Step::Input { .. } => {
                return Err(Error::InvalidArgument("an input graph cannot be replayed".into()))
            }
            Step::MatchingIncrement { .. } | Step::K2product { .. } => {
                let cur = g.as_ref().ok_or_else(|| {
                    Error::InvalidArgument("provenance starts with a transformation".into())
                })?;
                if matches!(step, Step::K2product { .. }) {
                    cur.cartesian_k2()
                } else {
                    matching::increment_regularity(cur)?.0
                }
            }
        };
        g = Some(next);
    }
    g.ok_or_else(|| Error::InvalidArgument("empty provenance".into()))
}

/// A claimed lower bound on `k − λ₂` and whether the measurement meets it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundEntry {
    pub model: String,
    pub value: f64,
    /// Whether the inequality is proven for the executed construction.
    pub valid: bool,
    pub conditional: bool,
    /// Whether the measured gap satisfies it, up to the residual.
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpansionSummary {
    pub h: f64,
    pub witness: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub version: u32,
    pub k: usize,
    pub n: usize,
    pub provenance: Vec<Step>,
    pub lambda1: f64,
    pub lambda2: f64,
    pub lambda_n: f64,
    pub spectral_gap: f64,
    pub ramanujan: bool,
    pub bipartite: bool,
    pub residual: f64,
    pub method: Method,
    pub bounds: Vec<BoundEntry>,
    pub expansion: Option<ExpansionSummary>,
}

impl Certificate {
    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn bound(&self, model: &str) -> Option<&BoundEntry> {
        self.bounds.iter().find(|b| b.model == model)
    }
}

fn certify_with(
    g: &Graph,
    provenance: Vec<Step>,
    config: &SpectralConfig,
    bounds: impl FnOnce(&spectral::Extremes, usize) -> Vec<BoundEntry>,
) -> Result<Certificate> {
    let k = g.regularity().ok_or(Error::NotRegular)?;
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let ex = spectral::extremes(g, config)?;
    spectral::check_top_is_degree(k, &ex, config)?;
    let expansion = if g.vertex_count() <= MAX_EXACT_VERTICES {
        let e = expansion::expanding_constant_exact(g)?;
        Some(ExpansionSummary { h: e.h, witness: e.witness })
    } else {
        None
    };
    let gap = k as f64 - ex.lambda2;
    Ok(Certificate {
        version: CERTIFICATE_VERSION,
        k,
        n: g.vertex_count(),
        provenance,
        lambda1: ex.lambda1,
        lambda2: ex.lambda2,
        lambda_n: ex.lambda_n,
        spectral_gap: gap,
        ramanujan: k >= 1 && ex.lambda2 <= spectral::ramanujan_bound(k) + ex.residual,
        bipartite: g.is_bipartite(),
        residual: ex.residual,
        method: ex.method,
        bounds: bounds(&ex, k),
        expansion,
    })
}

/// Certificate for a graph of unknown origin: no construction bounds apply.
pub fn certify(g: &Graph, config: &SpectralConfig) -> Result<Certificate> {
    let provenance = vec![Step::Input { n: g.vertex_count(), m: g.edge_count() }];
    certify_with(g, provenance, config, |_, _| Vec::new())
}

pub fn certify_with_provenance(g: &Graph, provenance: Vec<Step>, config: &SpectralConfig) -> Result<Certificate> {
    certify_with(g, provenance, config, |_, _| Vec::new())
}

#[derive(Debug, Clone)]
pub struct ConstructOptions {
    pub q_max: u64,
    pub spectral: SpectralConfig,
    pub bounds: BoundParams,
}

impl Default for ConstructOptions {
    fn default() -> Self {
        ConstructOptions { q_max: DEFAULT_Q_MAX, spectral: SpectralConfig::default(), bounds: BoundParams::default() }
    }
}

fn entry(model: &str, value: f64, valid: bool, conditional: bool, gap: f64, residual: f64) -> BoundEntry {
    BoundEntry { model: model.to_string(), value, valid, conditional, holds: gap >= value - residual }
}

/// Bound entries for a constructed graph. The chain models describe the
/// construction from the greatest prime below `k`, so they only apply when
/// that prime was the executed base and the strategy carries a per-step
/// bound.
fn construction_bounds(
    plan: &Plan,
    strategy: Strategy,
    ex: &spectral::Extremes,
    product_law: Option<f64>,
    params: &BoundParams,
) -> Result<Vec<BoundEntry>> {
    let b = plan.buildable;
    let k = b.k;
    let kf = k as f64;
    let gap = kf - ex.lambda2;
    let res = ex.residual;
    let stepwise = strategy == Strategy::Matching || b.increments == 0;
    let chain_applies = stepwise && plan.matches_theory();

    let mut out = vec![entry(
        "matching",
        kf - (2.0 * (b.p as f64).sqrt() + b.increments as f64),
        stepwise,
        false,
        gap,
        res,
    )];
    let chain = bounds::chain_for_plan(&plan.theoretical);
    out.push(entry("chain", kf - chain.intermediate, chain_applies, false, gap, res));
    out.push(entry("delta", kf - chain.normalized, chain_applies, false, gap, res));
    let t = bounds::gap_bound_trudgian(k);
    let trudgian_ok = t.valid && plan.theoretical.p >= bounds::TRUDGIAN_THRESHOLD;
    out.push(entry("trudgian", t.value, chain_applies && trudgian_ok, false, gap, res));
    let bhp = bounds::gap_bound_bhp(k, params.bhp_threshold);
    out.push(entry("bhp", bhp.value, chain_applies && bhp.valid, false, gap, res));
    let rh = bounds::gap_bound_rh(k, params.rh_constant)?;
    out.push(entry("rh", rh.gap, chain_applies, true, gap, res));
    if let Some(predicted) = product_law {
        out.push(BoundEntry {
            model: "product_law".into(),
            value: kf - predicted,
            valid: true,
            conditional: false,
            holds: (ex.lambda2 - predicted).abs() <= PRODUCT_LAW_TOLERANCE + res,
        });
    }
    Ok(out)
}

/// Builds the `k`-regular member on at least `min_vertices` vertices and
/// certifies it.
pub fn construct(
    k: u64,
    min_vertices: usize,
    strategy: Strategy,
    options: &ConstructOptions,
) -> Result<(Graph, Certificate)> {
    if min_vertices < 2 {
        return Err(Error::InvalidArgument(format!("min-vertices must be >= 2, got {min_vertices}")));
    }
    let plan = plan(k)?;
    let b = plan.buildable;
    let params = lps::smallest_q(b.p, min_vertices, options.q_max)?;
    if strategy == Strategy::Matching && b.increments > 0 && (params.n as u64) < 2 * k + 2 {
        return Err(Error::InvalidArgument(format!(
            "matching increments to k = {k} need n >= {}, base has {}",
            2 * k + 2,
            params.n
        )));
    }
    let mut provenance = vec![
        Step::Plan {
            k,
            theoretical_p: plan.theoretical.p,
            executed_p: b.p,
            increments: b.increments,
            strategy,
        },
        Step::Lps { p: params.p, q: params.q, group: params.group_kind, n: params.n },
    ];
    let mut g = lps::build_lps(params.p, params.q)?;

    // Track the iterated product law from the measured base spectrum.
    let mut predicted = None;
    if strategy == Strategy::K2product && b.increments > 0 {
        let base = spectral::extremes(&g, &options.spectral)?;
        let (mut l1, mut l2) = (base.lambda1, base.lambda2);
        for _ in 0..b.increments {
            (l1, l2) = (l1 + 1.0, (l2 + 1.0).max(l1 - 1.0));
        }
        predicted = Some(l2);
    }
    for _ in 0..b.increments {
        g = match strategy {
            Strategy::Matching => matching::increment_regularity(&g)?.0,
            Strategy::K2product => g.cartesian_k2(),
        };
        let (k, n) = (g.regularity().ok_or(Error::NotRegular)?, g.vertex_count());
        provenance.push(match strategy {
            Strategy::Matching => Step::MatchingIncrement { k, n },
            Strategy::K2product => Step::K2product { k, n },
        });
    }
    let mut failure = None;
    let cert = certify_with(&g, provenance, &options.spectral, |ex, _| {
        construction_bounds(&plan, strategy, ex, predicted, &options.bounds).unwrap_or_else(|e| {
            failure = Some(e);
            Vec::new()
        })
    })?;
    if let Some(e) = failure {
        return Err(e);
    }
    Ok((g, cert))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepMeasure {
    pub n: usize,
    pub lambda2: f64,
    pub gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub step: u64,
    pub k: u64,
    pub matching: StepMeasure,
    pub k2product: StepMeasure,
    /// Previous matching `λ₂` plus one; the per-step matching bound.
    pub step_reference: f64,
    /// `λ₂(X) + step` for the base graph `X`.
    pub base_reference: f64,
    pub matching_within_reference: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub p: u64,
    pub q: u64,
    pub target_k: u64,
    pub rows: Vec<ComparisonRow>,
}

fn measure(g: &Graph, config: &SpectralConfig) -> Result<(StepMeasure, f64)> {
    let k = g.regularity().ok_or(Error::NotRegular)?;
    let ex = spectral::extremes(g, config)?;
    spectral::check_top_is_degree(k, &ex, config)?;
    let m = StepMeasure { n: g.vertex_count(), lambda2: ex.lambda2, gap: k as f64 - ex.lambda2 };
    Ok((m, ex.residual))
}

/// Raises `X^{p,q}` to `target_k` both ways, measuring `λ₂` at each step.
/// Row 0 is the base graph.
pub fn compare_strategies(p: u64, q: u64, target_k: u64, config: &SpectralConfig) -> Result<ComparisonReport> {
    if target_k < p + 1 {
        return Err(Error::InvalidArgument(format!(
            "target k = {target_k} is below the base regularity {}",
            p + 1
        )));
    }
    let base = lps::build_lps(p, q)?;
    let (m0, _) = measure(&base, config)?;
    let mut rows = vec![ComparisonRow {
        step: 0,
        k: p + 1,
        matching: m0,
        k2product: m0,
        step_reference: m0.lambda2,
        base_reference: m0.lambda2,
        matching_within_reference: true,
    }];
    let (mut gm, mut gk) = (base.clone(), base);
    for step in 1..=(target_k - p - 1) {
        gm = matching::increment_regularity(&gm)?.0;
        gk = gk.cartesian_k2();
        let prev = rows.last().expect("row 0 exists").matching.lambda2;
        let (mm, res) = measure(&gm, config)?;
        let (mk, _) = measure(&gk, config)?;
        let step_reference = prev + 1.0;
        rows.push(ComparisonRow {
            step,
            k: p + 1 + step,
            matching: mm,
            k2product: mk,
            step_reference,
            base_reference: m0.lambda2 + step as f64,
            matching_within_reference: mm.lambda2 <= step_reference + config.tolerance + res,
        });
    }
    Ok(ComparisonReport { p, q, target_k, rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{complete, petersen};

    #[test]
    fn plan_examples() {
        let p = plan(7).unwrap();
        assert_eq!((p.theoretical.p, p.theoretical.increments), (5, 1));
        assert_eq!((p.buildable.p, p.buildable.increments), (5, 1));
        assert!(p.matches_theory());

        let p = plan(12).unwrap();
        assert_eq!((p.theoretical.p, p.theoretical.increments), (11, 0));
        assert_eq!((p.buildable.p, p.buildable.increments), (5, 6));
        assert!(!p.matches_theory());

        let p = plan(14).unwrap();
        assert_eq!((p.theoretical.p, p.buildable.p, p.buildable.increments), (13, 13, 0));

        assert!(plan(2).is_err());
        assert!(plan(5).is_err());
        assert_eq!(plan(6).unwrap().buildable.increments, 0);
    }

    #[test]
    fn certify_small_graphs() {
        let cfg = SpectralConfig::default();
        let c = certify(&complete(4).unwrap(), &cfg).unwrap();
        assert_eq!(c.k, 3);
        assert!((c.lambda2 + 1.0).abs() < 1e-10 && (c.spectral_gap - 4.0).abs() < 1e-10);
        assert!(c.ramanujan && !c.bipartite);
        assert_eq!(c.expansion.as_ref().unwrap().h, 2.0);

        let c = certify(&petersen(), &cfg).unwrap();
        assert!((c.lambda2 - 1.0).abs() < 1e-10 && (c.spectral_gap - 2.0).abs() < 1e-10);
        assert!(c.ramanujan);
        assert_eq!(c.expansion.as_ref().unwrap().h, 1.0);

        let path = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        assert!(matches!(certify(&path, &cfg), Err(Error::NotRegular)));
        let two = Graph::from_edges(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]).unwrap();
        assert!(matches!(certify(&two, &cfg), Err(Error::Disconnected)));
    }

    #[test]
    fn certificate_json_shape() {
        let c = certify(&complete(4).unwrap(), &SpectralConfig::default()).unwrap();
        let v: serde_json::Value = serde_json::from_str(&c.to_json().unwrap()).unwrap();
        for key in [
            "version", "k", "n", "provenance", "lambda1", "lambda2", "lambda_n", "spectral_gap",
            "ramanujan", "bipartite", "residual", "method", "bounds", "expansion",
        ] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
        assert_eq!(v["method"], "dense");
        assert_eq!(v["provenance"][0]["op"], "input");
        assert_eq!(Certificate::from_json(&c.to_json().unwrap()).unwrap(), c);
    }

    #[test]
    fn replay_small_chain() {
        let steps = vec![
            Step::Small { name: "cycle(6)".into() },
            Step::MatchingIncrement { k: 3, n: 6 },
            Step::K2product { k: 4, n: 12 },
        ];
        let g = replay(&steps).unwrap();
        assert_eq!((g.vertex_count(), g.regularity()), (12, Some(4)));
        assert!(replay(&[Step::Input { n: 4, m: 6 }]).is_err());
        assert!(replay(&[Step::K2product { k: 1, n: 2 }]).is_err());
        assert!(replay(&[]).is_err());
    }

    #[test]
    fn construct_rejects_bad_requests() {
        let o = ConstructOptions::default();
        assert!(construct(7, 1, Strategy::Matching, &o).is_err());
        assert!(construct(4, 100, Strategy::Matching, &o).is_err());
        let tight = ConstructOptions { q_max: 13, ..o };
        assert!(construct(7, 5000, Strategy::Matching, &tight).is_err());
    }

    #[test]
    fn strategy_names() {
        for s in [Strategy::Matching, Strategy::K2product] {
            assert_eq!(s.to_string().parse::<Strategy>().unwrap(), s);
        }
        assert!("product".parse::<Strategy>().is_err());
    }
}
