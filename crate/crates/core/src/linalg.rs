//! Dense complex Hermitian eigensolver and a Lanczos path for extremal
//! eigenvalues of large operators.
//!
//! The dense route is Householder tridiagonalization followed by implicit-shift
//! QL on the real tridiagonal form (the phases of the complex subdiagonal are
//! absorbed into a diagonal unitary). Deterministic, no external linear-algebra
//! dependency, and generic over the scalar type.

use num_complex::Complex;
use thiserror::Error;

use crate::scalar::Scalar;

#[derive(Debug, Error)]
pub enum LinalgError {
    #[error("eigensolver did not converge after {iterations} iterations (index {index})")]
    NoConvergence { iterations: usize, index: usize },
    #[error("matrix is not square: {len} entries for dimension {n}")]
    NotSquare { len: usize, n: usize },
    #[error("matrix contains non-finite entries")]
    NonFinite,
    #[error("Lanczos did not reach residual {tol} after {iterations} matrix applications")]
    LanczosStalled { tol: f64, iterations: usize },
}

/// Eigenvalues ascending; `vectors` (if requested) holds ℓ²-orthonormal
/// eigenvectors column-major: entry (i, k) of eigenvector k at `vectors[k*n+i]`.
#[derive(Clone, Debug)]
pub struct HermitianEigen<T> {
    pub values: Vec<T>,
    pub vectors: Option<Vec<Complex<T>>>,
}

fn hypot<T: Scalar>(a: T, b: T) -> T {
    let (a, b) = (a.abs(), b.abs());
    let (big, small) = if a > b { (a, b) } else { (b, a) };
    if big == T::zero() {
        return T::zero();
    }
    let r = small / big;
    big * (T::one() + r * r).sqrt()
}

/// Implicit-shift QL on a real symmetric tridiagonal matrix.
///
/// `d` holds the diagonal (length n), `e` the subdiagonal (length n, last
/// entry scratch). On success `d` contains the eigenvalues (unsorted);
/// rotations are applied to the columns of `vectors` when present.
pub fn tridiagonal_ql<T: Scalar>(
    d: &mut [T],
    e: &mut [T],
    mut vectors: Option<(&mut [Complex<T>], usize)>,
) -> Result<(), LinalgError> {
    let n = d.len();
    if n == 0 {
        return Ok(());
    }
    let eps = T::epsilon();
    let two = T::real(2.0);
    e[n - 1] = T::zero();
    for l in 0..n {
        let mut iter = 0usize;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= eps * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 64 {
                return Err(LinalgError::NoConvergence {
                    iterations: iter,
                    index: l,
                });
            }
            let mut g = (d[l + 1] - d[l]) / (two * e[l]);
            let mut r = hypot(g, T::one());
            let sign_r = if g >= T::zero() { r } else { -r };
            g = d[m] - d[l] + e[l] / (g + sign_r);
            let (mut s, mut c) = (T::one(), T::one());
            let mut p = T::zero();
            let mut underflow = false;
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = hypot(f, g);
                e[i + 1] = r;
                if r == T::zero() {
                    d[i + 1] -= p;
                    e[m] = T::zero();
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + two * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if let Some((v, dim)) = vectors.as_mut() {
                    let dim = *dim;
                    let (col_i, col_i1) = (i * dim, (i + 1) * dim);
                    for k in 0..dim {
                        let a1 = v[col_i1 + k];
                        let a0 = v[col_i + k];
                        v[col_i1 + k] = a0.scale(s) + a1.scale(c);
                        v[col_i + k] = a0.scale(c) - a1.scale(s);
                    }
                }
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = T::zero();
        }
    }
    Ok(())
}

/// Full eigendecomposition of a Hermitian matrix given row-major as
/// `a[i*n + j]`. Only the lower triangle (j ≤ i) is referenced.
pub fn hermitian_eigen<T: Scalar>(
    a: &[Complex<T>],
    n: usize,
    want_vectors: bool,
) -> Result<HermitianEigen<T>, LinalgError> {
    if a.len() != n * n {
        return Err(LinalgError::NotSquare { len: a.len(), n });
    }
    if a.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(LinalgError::NonFinite);
    }
    if n == 0 {
        return Ok(HermitianEigen {
            values: Vec::new(),
            vectors: want_vectors.then(Vec::new),
        });
    }

    // Working copy, lower triangle authoritative.
    let mut w = a.to_vec();
    for i in 0..n {
        for j in (i + 1)..n {
            w[i * n + j] = w[j * n + i].conj();
        }
        w[i * n + i] = Complex::new(w[i * n + i].re, T::zero());
    }

    // Householder reflectors (v, beta), each acting on rows/cols k+1..n.
    let mut reflectors: Vec<(usize, Vec<Complex<T>>, T)> = Vec::new();
    for k in 0..n.saturating_sub(2) {
        let m = n - k - 1; // size of the column below the diagonal
        let mut x = Vec::with_capacity(m);
        for i in (k + 1)..n {
            x.push(w[i * n + k]);
        }
        let norm_x = x.iter().map(|z| z.norm_sqr()).fold(T::zero(), |acc, v| acc + v).sqrt();
        if norm_x == T::zero() {
            continue;
        }
        let alpha = x[0];
        let phase = if alpha.norm() > T::zero() {
            alpha.unscale(alpha.norm())
        } else {
            Complex::new(T::one(), T::zero())
        };
        let mut v = x;
        v[0] += phase.scale(norm_x);
        let vnorm2 = v.iter().map(|z| z.norm_sqr()).fold(T::zero(), |acc, s| acc + s);
        if vnorm2 == T::zero() {
            continue;
        }
        let beta = T::real(2.0) / vnorm2;

        // Trailing block update: B <- (I - beta v v*) B (I - beta v v*).
        let mut p = vec![Complex::new(T::zero(), T::zero()); m];
        for i in 0..m {
            let row = (k + 1 + i) * n + (k + 1);
            let mut acc = Complex::new(T::zero(), T::zero());
            for j in 0..m {
                acc += w[row + j] * v[j];
            }
            p[i] = acc.scale(beta);
        }
        let vp = v
            .iter()
            .zip(&p)
            .fold(Complex::new(T::zero(), T::zero()), |acc, (vi, pi)| acc + vi.conj() * *pi);
        let kappa = vp.scale(beta / T::real(2.0));
        let q: Vec<Complex<T>> = p
            .iter()
            .zip(&v)
            .map(|(pi, vi)| *pi - kappa * *vi)
            .collect();
        for i in 0..m {
            let row = (k + 1 + i) * n + (k + 1);
            for j in 0..m {
                w[row + j] = w[row + j] - q[i] * v[j].conj() - v[i] * q[j].conj();
            }
        }

        // New subdiagonal entry; rest of the column is annihilated.
        w[(k + 1) * n + k] = -phase.scale(norm_x);
        for i in (k + 2)..n {
            w[i * n + k] = Complex::new(T::zero(), T::zero());
        }
        reflectors.push((k, v, beta));
    }

    // Absorb subdiagonal phases into a diagonal unitary.
    let mut d = vec![T::zero(); n];
    let mut e = vec![T::zero(); n];
    let mut t = vec![Complex::new(T::one(), T::zero()); n];
    for i in 0..n {
        d[i] = w[i * n + i].re;
    }
    for k in 0..n - 1 {
        let sub = w[(k + 1) * n + k];
        let r = sub.norm();
        e[k] = r;
        t[k + 1] = if r > T::zero() {
            t[k] * sub.unscale(r)
        } else {
            t[k]
        };
    }

    let mut vectors = if want_vectors {
        // Initialize with Q·diag(t): Q accumulated from the reflectors.
        let mut q = vec![Complex::new(T::zero(), T::zero()); n * n];
        for i in 0..n {
            q[i * n + i] = Complex::new(T::one(), T::zero());
        }
        for (k, v, beta) in reflectors.iter().rev() {
            let m = n - k - 1;
            // q <- P q with P = I - beta v v* acting on rows k+1..n
            for col in 0..n {
                let mut z = Complex::new(T::zero(), T::zero());
                for i in 0..m {
                    z += v[i].conj() * q[(k + 1 + i) * n + col];
                }
                z = z.scale(*beta);
                for i in 0..m {
                    let idx = (k + 1 + i) * n + col;
                    q[idx] -= v[i] * z;
                }
            }
        }
        // Column-major eigenvector storage, column j starts as (Q diag(t))_j.
        let mut vmat = vec![Complex::new(T::zero(), T::zero()); n * n];
        for j in 0..n {
            for i in 0..n {
                vmat[j * n + i] = q[i * n + j] * t[j];
            }
        }
        Some(vmat)
    } else {
        None
    };

    tridiagonal_ql(&mut d, &mut e, vectors.as_mut().map(|v| (v.as_mut_slice(), n)))?;

    // Sort ascending, permuting eigenvector columns alongside.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[i].partial_cmp(&d[j]).unwrap_or(std::cmp::Ordering::Equal));
    let values: Vec<T> = order.iter().map(|&i| d[i]).collect();
    let vectors = vectors.map(|v| {
        let mut sorted = vec![Complex::new(T::zero(), T::zero()); n * n];
        for (new_col, &old_col) in order.iter().enumerate() {
            sorted[new_col * n..(new_col + 1) * n]
                .copy_from_slice(&v[old_col * n..(old_col + 1) * n]);
        }
        sorted
    });
    Ok(HermitianEigen { values, vectors })
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E3779B97F4A7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

/// Smallest and largest eigenvalue of a Hermitian operator given only by its
/// matrix-vector product, via Lanczos with full reorthogonalization.
///
/// Returns (λ_min, λ_max, worst residual ‖Av − λv‖/‖v‖ over the two Ritz
/// pairs). The starting vector is a fixed pseudo-random fill, so results are
/// reproducible. Errors if the Krylov space is exhausted before the residual
/// target is met.
pub fn lanczos_extremal<T, F>(
    n: usize,
    mut matvec: F,
    basis_cap: usize,
    tol: T,
) -> Result<(T, T, T), LinalgError>
where
    T: Scalar,
    F: FnMut(&[Complex<T>], &mut [Complex<T>]),
{
    let cap = basis_cap.min(n).max(2);
    let mut state = 0x5A17EC5EEDu64;
    let mut v0: Vec<Complex<T>> = (0..n)
        .map(|_| {
            let re = (splitmix64(&mut state) >> 11) as f64 / (1u64 << 53) as f64 - 0.5;
            Complex::new(T::real(re), T::zero())
        })
        .collect();
    let norm = |v: &[Complex<T>]| {
        v.iter()
            .map(|z| z.norm_sqr())
            .fold(T::zero(), |a, b| a + b)
            .sqrt()
    };
    let n0 = norm(&v0);
    for z in v0.iter_mut() {
        *z = z.unscale(n0);
    }

    let mut basis: Vec<Vec<Complex<T>>> = vec![v0];
    let mut alpha: Vec<T> = Vec::new();
    let mut beta: Vec<T> = Vec::new();
    let mut applications = 0usize;
    let mut scratch = vec![Complex::new(T::zero(), T::zero()); n];

    for j in 0..cap {
        matvec(&basis[j], &mut scratch);
        applications += 1;
        let mut wv = scratch.clone();
        // alpha_j = <v_j, A v_j>
        let a_j = basis[j]
            .iter()
            .zip(&wv)
            .fold(Complex::new(T::zero(), T::zero()), |acc, (v, w)| acc + v.conj() * *w)
            .re;
        alpha.push(a_j);
        // full reorthogonalization (twice for stability)
        for _ in 0..2 {
            for q in &basis {
                let coeff = q
                    .iter()
                    .zip(&wv)
                    .fold(Complex::new(T::zero(), T::zero()), |acc, (qi, wi)| acc + qi.conj() * *wi);
                for (wi, qi) in wv.iter_mut().zip(q) {
                    *wi -= *qi * coeff;
                }
            }
        }
        let b_j = norm(&wv);

        // Ritz values/vectors of the current tridiagonal section.
        let m = alpha.len();
        let mut d = alpha.clone();
        let mut e = vec![T::zero(); m];
        e[..m - 1].copy_from_slice(&beta[..m - 1]);
        let mut z = vec![Complex::new(T::zero(), T::zero()); m * m];
        for i in 0..m {
            z[i * m + i] = Complex::new(T::one(), T::zero());
        }
        tridiagonal_ql(&mut d, &mut e, Some((z.as_mut_slice(), m)))?;
        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by(|&i, &j| d[i].partial_cmp(&d[j]).unwrap_or(std::cmp::Ordering::Equal));
        let (lo, hi) = (order[0], order[m - 1]);
        // Residual bound |beta_j * z_last| for each extreme pair.
        let res_lo = (b_j * z[lo * m + (m - 1)].norm()).abs();
        let res_hi = (b_j * z[hi * m + (m - 1)].norm()).abs();
        let scale = d[lo].abs().max(d[hi].abs()).max(T::one());
        if (res_lo.max(res_hi) <= tol * scale) || m == n {
            // Assemble Ritz vectors for an explicit residual check.
            let mut worst = T::zero();
            for &idx in &[lo, hi] {
                let mut ritz = vec![Complex::new(T::zero(), T::zero()); n];
                for (q, zc) in basis.iter().zip((0..m).map(|r| z[idx * m + r])) {
                    for (ri, qi) in ritz.iter_mut().zip(q) {
                        *ri += *qi * zc;
                    }
                }
                matvec(&ritz, &mut scratch);
                applications += 1;
                let lam = d[idx];
                let mut err = T::zero();
                for (si, ri) in scratch.iter().zip(&ritz) {
                    err += (*si - ri.scale(lam)).norm_sqr();
                }
                let rn = norm(&ritz);
                if rn > T::zero() {
                    let r = err.sqrt() / rn;
                    if r > worst {
                        worst = r;
                    }
                }
            }
            if worst <= tol * scale || m == n {
                return Ok((d[lo], d[hi], worst));
            }
        }
        if j + 1 == cap || b_j == T::zero() {
            break;
        }
        beta.push(b_j);
        for z in wv.iter_mut() {
            *z = z.unscale(b_j);
        }
        basis.push(wv);
    }
    Err(LinalgError::LanczosStalled {
        tol: tol.to_f64().unwrap_or(f64::NAN),
        iterations: applications,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    fn residual(a: &[Complex<f64>], n: usize, eig: &HermitianEigen<f64>) -> f64 {
        let v = eig.vectors.as_ref().unwrap();
        let mut worst = 0.0f64;
        for k in 0..n {
            let col = &v[k * n..(k + 1) * n];
            let mut err = 0.0;
            let mut nrm = 0.0;
            for i in 0..n {
                let mut av = c(0.0, 0.0);
                for j in 0..n {
                    av += a[i * n + j] * col[j];
                }
                err += (av - col[i].scale(eig.values[k])).norm_sqr();
                nrm += col[i].norm_sqr();
            }
            worst = worst.max(err.sqrt() / nrm.sqrt());
        }
        worst
    }

    #[test]
    fn one_by_one() {
        let a = vec![c(3.5, 0.0)];
        let eig = hermitian_eigen(&a, 1, true).unwrap();
        assert_eq!(eig.values, vec![3.5]);
    }

    #[test]
    fn two_by_two_closed_form() {
        // [[1, -i], [i, 1]], eigenvalues 0 and 2
        let a = vec![c(1.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(1.0, 0.0)];
        let eig = hermitian_eigen(&a, 2, true).unwrap();
        assert!((eig.values[0] - 0.0).abs() < 1e-14);
        assert!((eig.values[1] - 2.0).abs() < 1e-14);
        assert!(residual(&a, 2, &eig) < 1e-13);
    }

    #[test]
    fn three_by_three_closed_form() {
        // Characteristic-polynomial cross-check: cycle with flux π has
        // eigenvalues {1, 1, 4} for the b=1, μ=1 Laplacian.
        let a = vec![
            c(2.0, 0.0), c(-1.0, 0.0), c(1.0, 0.0),
            c(-1.0, 0.0), c(2.0, 0.0), c(-1.0, 0.0),
            c(1.0, 0.0), c(-1.0, 0.0), c(2.0, 0.0),
        ];
        let eig = hermitian_eigen(&a, 3, true).unwrap();
        assert!((eig.values[0] - 1.0).abs() < 1e-12);
        assert!((eig.values[1] - 1.0).abs() < 1e-12);
        assert!((eig.values[2] - 4.0).abs() < 1e-12);
        assert!(residual(&a, 3, &eig) < 1e-12);
    }

    #[test]
    fn random_hermitian_residual_and_orthonormality() {
        let n = 24;
        let mut state = 42u64;
        let mut rng = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        let mut a = vec![c(0.0, 0.0); n * n];
        for i in 0..n {
            a[i * n + i] = c(rng() * 4.0, 0.0);
            for j in 0..i {
                let z = c(rng(), rng());
                a[i * n + j] = z;
                a[j * n + i] = z.conj();
            }
        }
        let eig = hermitian_eigen(&a, n, true).unwrap();
        for k in 1..n {
            assert!(eig.values[k] >= eig.values[k - 1]);
        }
        assert!(residual(&a, n, &eig) < 1e-12);
        let v = eig.vectors.as_ref().unwrap();
        for p in 0..n {
            for q in 0..n {
                let mut dot = c(0.0, 0.0);
                for i in 0..n {
                    dot += v[p * n + i].conj() * v[q * n + i];
                }
                let expect = if p == q { 1.0 } else { 0.0 };
                assert!(
                    (dot.norm() - expect).abs() < 1e-11,
                    "columns {p},{q}: {dot}"
                );
            }
        }
    }

    #[test]
    fn values_only_matches_with_vectors() {
        let a = vec![
            c(1.0, 0.0), c(0.5, -0.25), c(0.0, 0.0),
            c(0.5, 0.25), c(-2.0, 0.0), c(0.0, 1.5),
            c(0.0, 0.0), c(0.0, -1.5), c(0.5, 0.0),
        ];
        let with = hermitian_eigen(&a, 3, true).unwrap();
        let without = hermitian_eigen(&a, 3, false).unwrap();
        for (x, y) in with.values.iter().zip(&without.values) {
            assert!((x - y).abs() < 1e-13);
        }
        assert!(without.vectors.is_none());
    }

    #[test]
    fn lanczos_agrees_with_dense() {
        let n = 30;
        let mut a = vec![c(0.0, 0.0); n * n];
        for i in 0..n {
            a[i * n + i] = c(i as f64 * 0.3 - 2.0, 0.0);
            if i + 1 < n {
                let z = c(0.7, 0.2);
                a[(i + 1) * n + i] = z;
                a[i * n + (i + 1)] = z.conj();
            }
        }
        let dense = hermitian_eigen(&a, n, false).unwrap();
        let matvec = |x: &[Complex<f64>], y: &mut [Complex<f64>]| {
            for i in 0..n {
                let mut acc = c(0.0, 0.0);
                for j in 0..n {
                    acc += a[i * n + j] * x[j];
                }
                y[i] = acc;
            }
        };
        let (lo, hi, res) = lanczos_extremal(n, matvec, n, 1e-10).unwrap();
        assert!((lo - dense.values[0]).abs() < 1e-9, "{lo} vs {}", dense.values[0]);
        assert!((hi - dense.values[n - 1]).abs() < 1e-9);
        assert!(res < 1e-8);
    }

    #[test]
    fn f32_instantiation() {
        let a = vec![
            Complex::new(1.0f32, 0.0), Complex::new(0.0, -1.0),
            Complex::new(0.0, 1.0), Complex::new(1.0, 0.0),
        ];
        let eig = hermitian_eigen(&a, 2, false).unwrap();
        assert!((eig.values[0] - 0.0).abs() < 1e-5);
        assert!((eig.values[1] - 2.0).abs() < 1e-5);
    }
}
