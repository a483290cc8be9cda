//! Adjacency spectra, spectral gaps and Ramanujan certification, plus
//! checkable forms of the product-spectrum law and Weyl's inequalities.
//!
//! Eigenvalues are always indexed as a multiset in non-increasing order:
//! `λ₁ ≥ λ₂ ≥ … ≥ λₙ`, repeated according to multiplicity.

pub mod dense;
pub mod lanczos;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::par;

pub use lanczos::Eigenpair;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Dense,
    Iterative,
}

#[derive(Debug, Clone)]
pub struct SpectralConfig {
    /// Largest accepted eigenpair residual `‖A v − λ v‖₂`.
    pub tolerance: f64,
    /// Graphs with more vertices go through the Lanczos path.
    pub dense_threshold: usize,
    pub max_lanczos_steps: usize,
    pub seed: u64,
}

impl Default for SpectralConfig {
    fn default() -> Self {
        SpectralConfig {
            tolerance: 1e-8,
            dense_threshold: 4096,
            max_lanczos_steps: 1500,
            seed: 0x5eed,
        }
    }
}

/// Adjacency matrix, counting parallel edges.
pub fn adjacency_matrix(g: &Graph) -> DMatrix<f64> {
    let n = g.vertex_count();
    let mut a = DMatrix::zeros(n, n);
    for (u, v) in g.edges() {
        a[(u, v)] += 1.0;
        a[(v, u)] += 1.0;
    }
    a
}

/// `y = A x` for the adjacency matrix of `g`.
pub fn adjacency_apply(g: &Graph, x: &[f64], y: &mut [f64]) {
    par::fill_indexed(y, |i| g.neighbors(i).iter().map(|&w| x[w as usize]).sum());
}

fn pair_residual(g: &Graph, value: f64, v: &[f64]) -> f64 {
    let mut av = vec![0.0; v.len()];
    adjacency_apply(g, v, &mut av);
    av.iter().zip(v).map(|(a, x)| (a - value * x).powi(2)).sum::<f64>().sqrt()
}

/// The full adjacency spectrum, non-increasing.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Spectrum {
    pub values: Vec<f64>,
    pub residual: f64,
    pub method: Method,
}

impl Spectrum {
    pub fn lambda1(&self) -> f64 {
        self.values[0]
    }

    pub fn lambda2(&self) -> Option<f64> {
        self.values.get(1).copied()
    }

    pub fn lambda_min(&self) -> f64 {
        *self.values.last().unwrap()
    }
}

/// Full spectrum through the dense symmetric eigensolver.
pub fn spectrum(g: &Graph, config: &SpectralConfig) -> Result<Spectrum> {
    let n = g.vertex_count();
    if n > config.dense_threshold {
        return Err(Error::TooLarge { what: "dense eigensolve", n, limit: config.dense_threshold });
    }
    let (values, vectors) = dense::eigh(adjacency_matrix(g), true)?;
    let vectors = vectors.expect("requested eigenvectors");
    let residuals = par::map_range(n, |c| pair_residual(g, values[c], vectors.column(c).as_slice()));
    let residual = residuals.into_iter().fold(0.0, f64::max);
    if residual > config.tolerance {
        return Err(Error::NonConvergence(format!(
            "dense eigensolver residual {residual:e} exceeds {:e}",
            config.tolerance
        )));
    }
    Ok(Spectrum { values, residual, method: Method::Dense })
}

/// Eigenvalues of an arbitrary symmetric matrix, non-increasing.
pub fn symmetric_eigenvalues(a: &DMatrix<f64>) -> Result<Vec<f64>> {
    check_symmetric(a)?;
    Ok(dense::eigh(a.clone(), false)?.0)
}

fn check_symmetric(a: &DMatrix<f64>) -> Result<()> {
    if a.nrows() != a.ncols() {
        return Err(Error::InvalidArgument("matrix is not square".into()));
    }
    let n = a.nrows();
    for i in 0..n {
        for j in (i + 1)..n {
            if a[(i, j)] != a[(j, i)] {
                return Err(Error::Asymmetric);
            }
        }
    }
    Ok(())
}

fn lanczos_options(config: &SpectralConfig) -> lanczos::LanczosOptions {
    lanczos::LanczosOptions {
        tolerance: config.tolerance,
        max_steps: config.max_lanczos_steps,
        seed: config.seed,
    }
}

/// The `count` largest eigenpairs by deflated Lanczos.
pub fn top_eigenpairs(g: &Graph, count: usize, config: &SpectralConfig) -> Result<Vec<Eigenpair>> {
    extreme_eigenpairs(g, count, config, false)
}

/// The `count` smallest eigenpairs by deflated Lanczos on `−A`.
pub fn bottom_eigenpairs(g: &Graph, count: usize, config: &SpectralConfig) -> Result<Vec<Eigenpair>> {
    extreme_eigenpairs(g, count, config, true)
}

fn extreme_eigenpairs(g: &Graph, count: usize, config: &SpectralConfig, negate: bool) -> Result<Vec<Eigenpair>> {
    let n = g.vertex_count();
    if count == 0 || count > 4 || count > n {
        return Err(Error::InvalidArgument(format!("count must be in 1..=min(4, n), got {count}")));
    }
    let apply = |x: &[f64], y: &mut [f64]| {
        adjacency_apply(g, x, y);
        if negate {
            y.iter_mut().for_each(|v| *v = -*v);
        }
    };
    let opts = lanczos_options(config);
    let mut found: Vec<Vec<f64>> = Vec::with_capacity(count);
    let mut pairs = Vec::with_capacity(count);
    for _ in 0..count {
        let mut pair = lanczos::largest(n, apply, &found, &opts)?;
        if negate {
            pair.value = -pair.value;
        }
        found.push(pair.vector.clone());
        pairs.push(pair);
    }
    Ok(pairs)
}

/// The `count` largest eigenvalues, each accepted only with a residual
/// within tolerance.
pub fn top_eigs(g: &Graph, count: usize, config: &SpectralConfig) -> Result<Vec<f64>> {
    Ok(top_eigenpairs(g, count, config)?.into_iter().map(|p| p.value).collect())
}

/// `λ₁`, `λ₂`, `λₙ` with the largest residual among them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Extremes {
    pub lambda1: f64,
    pub lambda2: f64,
    pub lambda_n: f64,
    pub residual: f64,
    pub method: Method,
}

/// Picks the dense path up to the configured threshold, Lanczos above it.
pub fn extremes(g: &Graph, config: &SpectralConfig) -> Result<Extremes> {
    let n = g.vertex_count();
    if n < 2 {
        return Err(Error::InvalidArgument("λ₂ needs at least two vertices".into()));
    }
    if n <= config.dense_threshold {
        let s = spectrum(g, config)?;
        return Ok(Extremes {
            lambda1: s.values[0],
            lambda2: s.values[1],
            lambda_n: s.lambda_min(),
            residual: s.residual,
            method: Method::Dense,
        });
    }
    let top = top_eigenpairs(g, 2, config)?;
    let bottom = bottom_eigenpairs(g, 1, config)?;
    let residual = top.iter().chain(&bottom).map(|p| p.residual).fold(0.0, f64::max);
    Ok(Extremes {
        lambda1: top[0].value,
        lambda2: top[1].value,
        lambda_n: bottom[0].value,
        residual,
        method: Method::Iterative,
    })
}

fn regular_connected(g: &Graph) -> Result<usize> {
    let k = g.regularity().ok_or(Error::NotRegular)?;
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    Ok(k)
}

/// Measured gap `k − λ₂` of a connected `k`-regular graph. `λ₁ = k` is
/// checked against the solver rather than assumed.
pub fn spectral_gap(g: &Graph, config: &SpectralConfig) -> Result<f64> {
    let k = regular_connected(g)?;
    let ex = extremes(g, config)?;
    check_top_is_degree(k, &ex, config)?;
    Ok(k as f64 - ex.lambda2)
}

pub(crate) fn check_top_is_degree(k: usize, ex: &Extremes, config: &SpectralConfig) -> Result<()> {
    if (ex.lambda1 - k as f64).abs() > ex.residual + config.tolerance {
        return Err(Error::NonConvergence(format!(
            "λ₁ = {} does not match degree {k}",
            ex.lambda1
        )));
    }
    Ok(())
}

/// `λ₂ ≤ 2√(k−1)` up to the reported residual; equality counts.
pub fn ramanujan_bound(k: usize) -> f64 {
    2.0 * ((k as f64) - 1.0).sqrt()
}

pub fn is_ramanujan(g: &Graph, config: &SpectralConfig) -> Result<bool> {
    let k = regular_connected(g)?;
    if k < 2 {
        return Err(Error::InvalidArgument(format!("Ramanujan test needs k >= 2, got {k}")));
    }
    let ex = extremes(g, config)?;
    check_top_is_degree(k, &ex, config)?;
    Ok(ex.lambda2 <= ramanujan_bound(k) + ex.residual)
}

/// Spectrum of `X □ K₂` computed directly and from `{λᵢ ± 1}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProductSpectrumReport {
    /// Largest elementwise gap between the two sorted spectra.
    pub max_deviation: f64,
    pub lambda1: f64,
    pub lambda2: f64,
    pub lambda2_product: f64,
    pub lambda2_plus_one: f64,
    pub lambda1_minus_one: f64,
    /// `max(λ₂ + 1, λ₁ − 1)`, the second eigenvalue predicted by `{λᵢ ± 1}`.
    pub predicted_lambda2_product: f64,
}

pub fn product_spectrum_oracle(g: &Graph, config: &SpectralConfig) -> Result<ProductSpectrumReport> {
    let n = g.vertex_count();
    if 2 * n > config.dense_threshold {
        return Err(Error::TooLarge { what: "product spectrum check", n, limit: config.dense_threshold / 2 });
    }
    if n < 2 {
        return Err(Error::InvalidArgument("need at least two vertices".into()));
    }
    let base = spectrum(g, config)?;
    let product = spectrum(&g.cartesian_k2(), config)?;
    let mut shifted: Vec<f64> = base.values.iter().flat_map(|&l| [l + 1.0, l - 1.0]).collect();
    shifted.sort_by(|a, b| b.total_cmp(a));
    let max_deviation = shifted
        .iter()
        .zip(&product.values)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    let (l1, l2) = (base.values[0], base.values[1]);
    Ok(ProductSpectrumReport {
        max_deviation,
        lambda1: l1,
        lambda2: l2,
        lambda2_product: product.values[1],
        lambda2_plus_one: l2 + 1.0,
        lambda1_minus_one: l1 - 1.0,
        predicted_lambda2_product: (l2 + 1.0).max(l1 - 1.0),
    })
}

/// Slacks of `λₙ(B) ≤ λᵢ(A+B) − λᵢ(A) ≤ λ₁(B)`; both are non-negative
/// exactly when the inequalities hold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeylReport {
    pub i: usize,
    pub lower_slack: f64,
    pub upper_slack: f64,
}

impl WeylReport {
    pub fn min_slack(&self) -> f64 {
        self.lower_slack.min(self.upper_slack)
    }
}

/// Evaluates Weyl's inequalities at the 1-based index `i`.
pub fn weyl_check(a: &DMatrix<f64>, b: &DMatrix<f64>, i: usize) -> Result<WeylReport> {
    Ok(weyl_check_all(a, b)?
        .into_iter()
        .nth(i.checked_sub(1).ok_or_else(|| Error::InvalidArgument("index is 1-based".into()))?)
        .ok_or_else(|| Error::InvalidArgument(format!("index {i} exceeds order {}", a.nrows())))?)
}

/// Weyl slacks for every index `1..=n`, sharing one set of eigensolves.
pub fn weyl_check_all(a: &DMatrix<f64>, b: &DMatrix<f64>) -> Result<Vec<WeylReport>> {
    if a.shape() != b.shape() {
        return Err(Error::InvalidArgument("matrices differ in order".into()));
    }
    let la = symmetric_eigenvalues(a)?;
    let lb = symmetric_eigenvalues(b)?;
    let lab = symmetric_eigenvalues(&(a + b))?;
    let (b_max, b_min) = (lb[0], *lb.last().unwrap_or(&0.0));
    Ok(la
        .iter()
        .zip(&lab)
        .enumerate()
        .map(|(idx, (x, y))| {
            let diff = y - x;
            WeylReport { i: idx + 1, lower_slack: diff - b_min, upper_slack: b_max - diff }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{complete, cycle, petersen};

    fn cfg() -> SpectralConfig {
        SpectralConfig::default()
    }

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn closed_form_spectra() {
        let s = spectrum(&complete(4).unwrap(), &cfg()).unwrap();
        assert!(close(&s.values, &[3.0, -1.0, -1.0, -1.0], 1e-12));
        assert!(s.residual <= 1e-8);
        let s = spectrum(&cycle(6).unwrap(), &cfg()).unwrap();
        assert!(close(&s.values, &[2.0, 1.0, 1.0, -1.0, -1.0, -2.0], 1e-12));
        let s = spectrum(&petersen(), &cfg()).unwrap();
        let mut expect = vec![3.0];
        expect.extend([1.0; 5]);
        expect.extend([-2.0; 4]);
        assert!(close(&s.values, &expect, 1e-12));
        assert!(s.values.iter().sum::<f64>().abs() < 10.0 * 1e-8);
    }

    #[test]
    fn petersen_characteristic_polynomial() {
        // det(xI − A) = (x−3)(x−1)⁵(x+2)⁴, checked at a few points via LU.
        let a = adjacency_matrix(&petersen());
        for x in [0.5f64, 2.0, -1.0, 4.0] {
            let m = DMatrix::identity(10, 10) * x - &a;
            let det = m.lu().determinant();
            let expect = (x - 3.0) * (x - 1.0).powi(5) * (x + 2.0).powi(4);
            assert!((det - expect).abs() < 1e-9 * expect.abs().max(1.0), "x = {x}");
        }
    }

    #[test]
    fn dense_threshold_is_enforced() {
        let small = SpectralConfig { dense_threshold: 3, ..cfg() };
        assert!(matches!(spectrum(&complete(4).unwrap(), &small), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn lanczos_small_graphs() {
        let k4 = top_eigs(&complete(4).unwrap(), 2, &cfg()).unwrap();
        assert!(close(&k4, &[3.0, -1.0], 1e-10));
        let c6 = top_eigs(&cycle(6).unwrap(), 3, &cfg()).unwrap();
        assert!(close(&c6, &[2.0, 1.0, 1.0], 1e-10));
        let pet = top_eigs(&petersen(), 4, &cfg()).unwrap();
        assert!(close(&pet, &[3.0, 1.0, 1.0, 1.0], 1e-10));
        let low = bottom_eigenpairs(&cycle(6).unwrap(), 1, &cfg()).unwrap();
        assert!((low[0].value + 2.0).abs() < 1e-10);
        assert!(top_eigs(&petersen(), 5, &cfg()).is_err());
    }

    #[test]
    fn gaps_and_ramanujan() {
        let c = cfg();
        assert!((spectral_gap(&complete(4).unwrap(), &c).unwrap() - 4.0).abs() < 1e-10);
        assert!((spectral_gap(&petersen(), &c).unwrap() - 2.0).abs() < 1e-10);
        assert!((spectral_gap(&cycle(4).unwrap(), &c).unwrap() - 2.0).abs() < 1e-10);
        assert!(is_ramanujan(&petersen(), &c).unwrap());
        assert!(is_ramanujan(&cycle(4).unwrap(), &c).unwrap());
        // K₄ □ K₂ is 4-regular with λ₂ = 2 ≤ 2√3.
        assert!(is_ramanujan(&complete(4).unwrap().cartesian_k2(), &c).unwrap());
        let path = crate::generators::path(4).unwrap();
        assert!(matches!(spectral_gap(&path, &c), Err(Error::NotRegular)));
        let two = Graph::from_edges(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]).unwrap();
        assert!(matches!(spectral_gap(&two, &c), Err(Error::Disconnected)));
    }

    #[test]
    fn product_law_examples() {
        let r = product_spectrum_oracle(&complete(4).unwrap(), &cfg()).unwrap();
        assert!(r.max_deviation <= 1e-8);
        assert!((r.lambda2_product - 2.0).abs() < 1e-10);
        assert!((r.lambda2_plus_one - 0.0).abs() < 1e-10);
        assert!((r.lambda1_minus_one - 2.0).abs() < 1e-10);

        let r = product_spectrum_oracle(&cycle(6).unwrap(), &cfg()).unwrap();
        assert!(r.max_deviation <= 1e-8);
        assert!((r.lambda2_product - 2.0).abs() < 1e-10);

        let r = product_spectrum_oracle(&complete(2).unwrap(), &cfg()).unwrap();
        let c4 = spectrum(&complete(2).unwrap().cartesian_k2(), &cfg()).unwrap();
        assert!(close(&c4.values, &[2.0, 0.0, 0.0, -2.0], 1e-12));
        assert!(r.max_deviation <= 1e-12);
    }

    #[test]
    fn kronecker_identity_for_product() {
        // With copy-major labels, A(X □ K₂) = I₂ ⊗ A_X + A_{K₂} ⊗ Iₙ, a
        // relabelling of A_X ⊗ I₂ + Iₙ ⊗ A_{K₂}.
        let g = petersen();
        let a = adjacency_matrix(&g);
        let k2 = adjacency_matrix(&complete(2).unwrap());
        let i2 = DMatrix::<f64>::identity(2, 2);
        let i10 = DMatrix::<f64>::identity(10, 10);
        let copy_major = i2.kronecker(&a) + k2.kronecker(&i10);
        assert_eq!(adjacency_matrix(&g.cartesian_k2()), copy_major);
        let vertex_major = a.kronecker(&i2) + i10.kronecker(&k2);
        let s1 = symmetric_eigenvalues(&copy_major).unwrap();
        let s2 = symmetric_eigenvalues(&vertex_major).unwrap();
        assert!(close(&s1, &s2, 1e-12));
    }

    #[test]
    fn weyl_examples() {
        let a = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![3.0, 1.0]));
        let b = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![1.0, -1.0]));
        let r = weyl_check(&a, &b, 1).unwrap();
        assert_eq!(r.upper_slack, 0.0);
        assert_eq!(r.lower_slack, 2.0);

        let ak4 = adjacency_matrix(&complete(4).unwrap());
        let big_a = ak4.kronecker(&DMatrix::identity(2, 2));
        let big_b = DMatrix::<f64>::identity(4, 4).kronecker(&adjacency_matrix(&complete(2).unwrap()));
        assert!((symmetric_eigenvalues(&big_a).unwrap()[1] - 3.0).abs() < 1e-12);
        let r = weyl_check(&big_a, &big_b, 2).unwrap();
        assert!(r.min_slack() >= -1e-8);

        let asym = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        assert!(matches!(weyl_check(&asym, &b, 1), Err(Error::Asymmetric)));
        assert!(weyl_check(&a, &b, 0).is_err());
        assert!(weyl_check(&a, &b, 3).is_err());
    }
}
