//! Lanczos iteration with full reorthogonalization, used for the extreme
//! eigenvalues of adjacency matrices too large for the dense solver.
//!
//! Each call finds the largest eigenpair of the operator restricted to the
//! orthogonal complement of a set of already-found eigenvectors, so repeated
//! calls recover eigenvalues with multiplicity.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::par;

pub struct Eigenpair {
    pub value: f64,
    pub vector: Vec<f64>,
    /// `‖A v − λ v‖₂` for the unit vector `v`.
    pub residual: f64,
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Two passes of classical Gram–Schmidt against `basis` (orthonormal).
fn orthogonalize(w: &mut [f64], basis: &[Vec<f64>]) {
    if basis.is_empty() {
        return;
    }
    for _ in 0..2 {
        let coeffs = par::map_slice(basis, |q| dot(q, w));
        let snapshot = w.to_vec();
        par::fill_indexed(w, |i| {
            let mut s = snapshot[i];
            for (q, c) in basis.iter().zip(&coeffs) {
                s -= c * q[i];
            }
            s
        });
    }
}

/// Largest eigenvalue of the symmetric tridiagonal matrix with diagonal
/// `alpha` and off-diagonal `beta`, by Sturm-count bisection.
fn tridiagonal_max_eigenvalue(alpha: &[f64], beta: &[f64]) -> f64 {
    let m = alpha.len();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..m {
        let r = if i > 0 { beta[i - 1].abs() } else { 0.0 } + if i + 1 < m { beta[i].abs() } else { 0.0 };
        lo = lo.min(alpha[i] - r);
        hi = hi.max(alpha[i] + r);
    }
    let scale = lo.abs().max(hi.abs()).max(1.0);
    let pivmin = f64::MIN_POSITIVE.sqrt() * scale;
    // Number of eigenvalues strictly below x.
    let count_below = |x: f64| {
        let mut count = 0;
        let mut d = 1.0;
        for i in 0..m {
            let b2 = if i > 0 { beta[i - 1] * beta[i - 1] } else { 0.0 };
            d = alpha[i] - x - if i > 0 { b2 / d } else { 0.0 };
            if d.abs() < pivmin {
                d = -pivmin;
            }
            if d < 0.0 {
                count += 1;
            }
        }
        count
    };
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi || hi - lo <= 4.0 * f64::EPSILON * scale {
            break;
        }
        if count_below(mid) == m {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Solves a general tridiagonal system with partial pivoting (the LAPACK
/// `dgtsv` elimination). `b` is overwritten with the solution.
fn tridiagonal_solve(mut dl: Vec<f64>, mut d: Vec<f64>, mut du: Vec<f64>, b: &mut [f64], tiny: f64) {
    let n = d.len();
    let fix = |x: f64| if x.abs() < tiny { tiny.copysign(if x == 0.0 { 1.0 } else { x }) } else { x };
    if n == 1 {
        b[0] /= fix(d[0]);
        return;
    }
    for i in 0..n - 1 {
        if d[i].abs() >= dl[i].abs() {
            d[i] = fix(d[i]);
            let fact = dl[i] / d[i];
            d[i + 1] -= fact * du[i];
            b[i + 1] -= fact * b[i];
            dl[i] = 0.0;
        } else {
            let fact = d[i] / dl[i];
            d[i] = dl[i];
            let temp = d[i + 1];
            d[i + 1] = du[i] - fact * temp;
            if i + 1 < n - 1 {
                dl[i] = du[i + 1];
                du[i + 1] = -fact * dl[i];
            }
            du[i] = temp;
            let tb = b[i];
            b[i] = b[i + 1];
            b[i + 1] = tb - fact * b[i + 1];
        }
    }
    d[n - 1] = fix(d[n - 1]);
    b[n - 1] /= d[n - 1];
    b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / d[n - 2];
    for i in (0..n.saturating_sub(2)).rev() {
        b[i] = (b[i] - du[i] * b[i + 1] - dl[i] * b[i + 2]) / d[i];
    }
}

/// Unit eigenvector of the tridiagonal matrix for eigenvalue `theta`.
fn tridiagonal_eigenvector(alpha: &[f64], beta: &[f64], theta: f64) -> Vec<f64> {
    let m = alpha.len();
    let scale = alpha.iter().chain(beta).fold(1.0f64, |a, x| a.max(x.abs()));
    let tiny = f64::EPSILON * scale;
    let mut s = vec![1.0; m];
    for _ in 0..3 {
        let d: Vec<f64> = alpha.iter().map(|a| a - theta).collect();
        tridiagonal_solve(beta.to_vec(), d, beta.to_vec(), &mut s, tiny);
        let nrm = norm(&s);
        s.iter_mut().for_each(|x| *x /= nrm);
    }
    s
}

pub struct LanczosOptions {
    pub tolerance: f64,
    pub max_steps: usize,
    pub seed: u64,
}

/// Largest eigenpair of `apply` on the complement of `deflate`.
pub fn largest<F>(n: usize, apply: F, deflate: &[Vec<f64>], opts: &LanczosOptions) -> Result<Eigenpair>
where
    F: Fn(&[f64], &mut [f64]),
{
    if deflate.len() >= n {
        return Err(Error::InvalidArgument("nothing left to deflate into".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ (deflate.len() as u64).wrapping_mul(0x9E37_79B9));
    let mut q: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    orthogonalize(&mut q, deflate);
    let nq = norm(&q);
    q.iter_mut().for_each(|x| *x /= nq);

    let max_steps = opts.max_steps.min(n - deflate.len()).max(1);
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(max_steps.min(256));
    let mut alpha = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    let mut w = vec![0.0; n];
    let mut best_residual = f64::INFINITY;
    let target = opts.tolerance * 1e-2;

    basis.push(q);
    for j in 0..max_steps {
        apply(&basis[j], &mut w);
        orthogonalize(&mut w, deflate);
        let a = dot(&basis[j], &w);
        alpha.push(a);
        orthogonalize(&mut w, &basis);
        let b = norm(&w);

        let steps = j + 1;
        let exhausted = b <= 1e-12 * alpha.iter().fold(1.0f64, |m, x| m.max(x.abs())) || steps == max_steps;
        if steps % 10 == 0 || exhausted || steps < 10 {
            let theta = tridiagonal_max_eigenvalue(&alpha, &beta);
            let s = tridiagonal_eigenvector(&alpha, &beta, theta);
            let estimate = (b * s[steps - 1]).abs();
            if estimate <= target || exhausted {
                let pair = ritz_pair(&basis, &s, &apply, n);
                if pair.residual <= target || (exhausted && pair.residual <= opts.tolerance) {
                    return Ok(pair);
                }
                best_residual = best_residual.min(pair.residual);
                if exhausted {
                    break;
                }
            }
        }
        beta.push(b);
        let next: Vec<f64> = w.iter().map(|x| x / b).collect();
        basis.push(next);
    }
    Err(Error::NonConvergence(format!(
        "Lanczos stopped after {max_steps} steps with residual {best_residual:e} (tolerance {:e})",
        opts.tolerance
    )))
}

fn ritz_pair<F>(basis: &[Vec<f64>], s: &[f64], apply: &F, n: usize) -> Eigenpair
where
    F: Fn(&[f64], &mut [f64]),
{
    let mut y = vec![0.0; n];
    par::fill_indexed(&mut y, |i| s.iter().zip(basis).map(|(c, q)| c * q[i]).sum());
    let ny = norm(&y);
    y.iter_mut().for_each(|x| *x /= ny);
    let mut ay = vec![0.0; n];
    apply(&y, &mut ay);
    let value = dot(&y, &ay);
    let residual = ay.iter().zip(&y).map(|(a, v)| (a - value * v).powi(2)).sum::<f64>().sqrt();
    Eigenpair { value, vector: y, residual }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tridiagonal_extreme_eigenvalue() {
        // Path P₅ adjacency: eigenvalues 2cos(jπ/6).
        let alpha = vec![0.0; 5];
        let beta = vec![1.0; 4];
        let top = tridiagonal_max_eigenvalue(&alpha, &beta);
        assert!((top - 3f64.sqrt()).abs() < 1e-14);
        let s = tridiagonal_eigenvector(&alpha, &beta, top);
        // Check T s = top s.
        for i in 0..5 {
            let mut t = 0.0;
            if i > 0 {
                t += s[i - 1];
            }
            if i < 4 {
                t += s[i + 1];
            }
            assert!((t - top * s[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn pivoting_solver_matches_dense() {
        let dl = vec![3.0, -1.0, 2.0];
        let d = vec![0.0, 1.0, 4.0, -2.0];
        let du = vec![1.0, 5.0, 1.0];
        let x_true = [1.0, -2.0, 0.5, 3.0];
        let mut b = vec![0.0; 4];
        for i in 0..4 {
            b[i] = d[i] * x_true[i];
            if i > 0 {
                b[i] += dl[i - 1] * x_true[i - 1];
            }
            if i < 3 {
                b[i] += du[i] * x_true[i + 1];
            }
        }
        tridiagonal_solve(dl, d, du, &mut b, 1e-300);
        for i in 0..4 {
            assert!((b[i] - x_true[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn diagonal_operator() {
        let diag = [5.0, 1.0, 4.0, 4.0, -3.0, 0.5];
        let apply = |x: &[f64], y: &mut [f64]| {
            for i in 0..6 {
                y[i] = diag[i] * x[i];
            }
        };
        let opts = LanczosOptions { tolerance: 1e-10, max_steps: 100, seed: 3 };
        let mut found = Vec::new();
        let mut values = Vec::new();
        for _ in 0..4 {
            let p = largest(6, apply, &found, &opts).unwrap();
            values.push(p.value);
            found.push(p.vector);
        }
        let expect = [5.0, 4.0, 4.0, 1.0];
        for (v, e) in values.iter().zip(expect) {
            assert!((v - e).abs() < 1e-10, "{values:?}");
        }
    }
}
