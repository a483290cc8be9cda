//! Dense symmetric eigensolver. Backed by LAPACK `dsyevd` when the `lapack`
//! feature is on, otherwise by nalgebra's implicit QR.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Eigenvalues in non-increasing order and, optionally, the matching unit
/// eigenvectors as columns.
pub fn eigh(a: DMatrix<f64>, vectors: bool) -> Result<(Vec<f64>, Option<DMatrix<f64>>)> {
    if a.nrows() != a.ncols() {
        return Err(Error::InvalidArgument("matrix is not square".into()));
    }
    if a.nrows() == 0 {
        return Ok((Vec::new(), vectors.then(|| DMatrix::zeros(0, 0))));
    }
    let (values, vecs) = eigh_ascending(a, vectors)?;
    let n = values.len();
    let desc: Vec<f64> = values.into_iter().rev().collect();
    let vecs = vecs.map(|v| DMatrix::from_fn(n, n, |r, c| v[(r, n - 1 - c)]));
    Ok((desc, vecs))
}

#[cfg(feature = "lapack")]
fn eigh_ascending(mut a: DMatrix<f64>, vectors: bool) -> Result<(Vec<f64>, Option<DMatrix<f64>>)> {
    let n = a.nrows() as i32;
    let jobz = if vectors { b'V' } else { b'N' };
    let mut w = vec![0.0; n as usize];
    let mut info = 0;
    let mut work_query = [0.0f64];
    let mut iwork_query = [0i32];
    // SAFETY: buffers are sized per the LAPACK workspace-query contract and
    // `a` is an n×n column-major matrix.
    unsafe {
        lapack::dsyevd(
            jobz, b'U', n, a.as_mut_slice(), n, &mut w, &mut work_query, -1, &mut iwork_query, -1,
            &mut info,
        );
    }
    if info != 0 {
        return Err(Error::NonConvergence(format!("dsyevd workspace query failed (info = {info})")));
    }
    let lwork = work_query[0] as i32;
    let liwork = iwork_query[0];
    let mut work = vec![0.0; lwork.max(1) as usize];
    let mut iwork = vec![0i32; liwork.max(1) as usize];
    unsafe {
        lapack::dsyevd(
            jobz, b'U', n, a.as_mut_slice(), n, &mut w, &mut work, lwork, &mut iwork, liwork,
            &mut info,
        );
    }
    match info {
        0 => Ok((w, vectors.then_some(a))),
        i if i < 0 => Err(Error::InvalidArgument(format!("dsyevd argument {} invalid", -i))),
        i => Err(Error::NonConvergence(format!("dsyevd failed to converge (info = {i})"))),
    }
}

#[cfg(not(feature = "lapack"))]
fn eigh_ascending(a: DMatrix<f64>, vectors: bool) -> Result<(Vec<f64>, Option<DMatrix<f64>>)> {
    let n = a.nrows();
    if !vectors {
        let mut v: Vec<f64> = a.symmetric_eigenvalues().iter().copied().collect();
        v.sort_by(f64::total_cmp);
        return Ok((v, None));
    }
    let eig = a.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vecs = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    Ok((values, Some(vecs)))
}
