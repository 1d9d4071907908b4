// Copyright 2026 Spinbath Contributors
// SPDX-License-Identifier: Apache-2.0

//! Dense 4x4 complex matrix helpers.
//!
//! The Hilbert space is fixed at dimension four, so everything here works on
//! stack arrays and stays allocation-free. The Hermitian eigensolver is a
//! cyclic complex Jacobi iteration; for 4x4 matrices it converges to machine
//! precision in a handful of sweeps and is unconditionally stable.

use num_complex::Complex64;

pub type C64 = Complex64;

/// Dense complex matrix over the two-qubit basis `{|00>, |10>, |01>, |11>}`.
pub type Matrix4 = [[C64; 4]; 4];

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

/// i (the imaginary unit).
pub const I: C64 = C64::new(0.0, 1.0);

pub fn zero() -> Matrix4 {
    [[ZERO; 4]; 4]
}

pub fn identity() -> Matrix4 {
    let mut m = zero();
    for (k, row) in m.iter_mut().enumerate() {
        row[k] = ONE;
    }
    m
}

pub fn mat_mul(a: &Matrix4, b: &Matrix4) -> Matrix4 {
    let mut out = zero();
    for i in 0..4 {
        for k in 0..4 {
            let aik = a[i][k];
            if aik == ZERO {
                continue;
            }
            for j in 0..4 {
                out[i][j] += aik * b[k][j];
            }
        }
    }
    out
}

pub fn mat_add(a: &Matrix4, b: &Matrix4) -> Matrix4 {
    let mut out = *a;
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] += b[i][j];
        }
    }
    out
}

pub fn mat_sub(a: &Matrix4, b: &Matrix4) -> Matrix4 {
    let mut out = *a;
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] -= b[i][j];
        }
    }
    out
}

pub fn mat_scale(a: &Matrix4, s: C64) -> Matrix4 {
    let mut out = *a;
    for row in out.iter_mut() {
        for e in row.iter_mut() {
            *e *= s;
        }
    }
    out
}

/// Conjugate transpose.
pub fn dagger(a: &Matrix4) -> Matrix4 {
    let mut out = zero();
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = a[j][i].conj();
        }
    }
    out
}

pub fn trace(a: &Matrix4) -> C64 {
    a[0][0] + a[1][1] + a[2][2] + a[3][3]
}

/// `[a, b] = ab - ba`.
pub fn commutator(a: &Matrix4, b: &Matrix4) -> Matrix4 {
    mat_sub(&mat_mul(a, b), &mat_mul(b, a))
}

/// Largest entry magnitude.
pub fn max_abs(a: &Matrix4) -> f64 {
    let mut m = 0.0_f64;
    for row in a {
        for e in row {
            let n = abs(*e);
            if n > m {
                m = n;
            }
        }
    }
    m
}

/// Largest entrywise difference `max |a_ij - b_ij|`.
pub fn max_abs_diff(a: &Matrix4, b: &Matrix4) -> f64 {
    let mut m = 0.0_f64;
    for i in 0..4 {
        for j in 0..4 {
            let n = abs(a[i][j] - b[i][j]);
            if n > m {
                m = n;
            }
        }
    }
    m
}

/// `max |a - a†|`, zero for exactly Hermitian input.
pub fn hermiticity_residual(a: &Matrix4) -> f64 {
    let mut m = 0.0_f64;
    for i in 0..4 {
        for j in i..4 {
            let n = abs(a[i][j] - a[j][i].conj());
            if n > m {
                m = n;
            }
        }
    }
    m
}

#[inline]
pub fn abs(z: C64) -> f64 {
    libm::hypot(z.re, z.im)
}

/// Eigendecomposition of a (numerically) Hermitian matrix by cyclic complex
/// Jacobi rotations.
///
/// Returns eigenvalues in ascending order together with the matching unitary
/// of column eigenvectors. The input is symmetrized first, so residual
/// non-Hermiticity up to the caller's tolerance is absorbed rather than
/// amplified.
pub fn eigh4(a: &Matrix4) -> ([f64; 4], Matrix4) {
    // Work on the Hermitian part.
    let mut m = zero();
    for i in 0..4 {
        for j in 0..4 {
            m[i][j] = (a[i][j] + a[j][i].conj()) * 0.5;
        }
    }
    let mut v = identity();

    let scale = max_abs(&m).max(1e-300);
    let tol = 1e-16 * scale;

    for _sweep in 0..60 {
        let mut off = 0.0_f64;
        for p in 0..3 {
            for q in (p + 1)..4 {
                off = off.max(abs(m[p][q]));
            }
        }
        if off <= tol {
            break;
        }
        for p in 0..3 {
            for q in (p + 1)..4 {
                let g = m[p][q];
                let mag = abs(g);
                if mag <= tol * 1e-2 {
                    continue;
                }
                let u = g / mag;
                let app = m[p][p].re;
                let aqq = m[q][q].re;
                // cot(2 theta) convention; stable small-angle branch.
                let vartheta = (app - aqq) / (2.0 * mag);
                let t = if vartheta >= 0.0 {
                    1.0 / (vartheta + libm::sqrt(1.0 + vartheta * vartheta))
                } else {
                    -1.0 / (-vartheta + libm::sqrt(1.0 + vartheta * vartheta))
                };
                let c = 1.0 / libm::sqrt(1.0 + t * t);
                let s = t * c;
                let su = s * u;
                let su_conj = s * u.conj();

                // m <- R† m R with R mixing columns p and q.
                for k in 0..4 {
                    let mkp = m[k][p];
                    let mkq = m[k][q];
                    m[k][p] = c * mkp + su_conj * mkq;
                    m[k][q] = -su * mkp + c * mkq;
                }
                for k in 0..4 {
                    let mpk = m[p][k];
                    let mqk = m[q][k];
                    m[p][k] = c * mpk + su * mqk;
                    m[q][k] = -su_conj * mpk + c * mqk;
                }
                for k in 0..4 {
                    let vkp = v[k][p];
                    let vkq = v[k][q];
                    v[k][p] = c * vkp + su_conj * vkq;
                    v[k][q] = -su * vkp + c * vkq;
                }
            }
        }
    }

    let mut vals = [m[0][0].re, m[1][1].re, m[2][2].re, m[3][3].re];
    // Selection sort ascending, permuting eigenvector columns alongside.
    for i in 0..3 {
        let mut min = i;
        for j in (i + 1)..4 {
            if vals[j] < vals[min] {
                min = j;
            }
        }
        if min != i {
            vals.swap(i, min);
            for row in v.iter_mut() {
                row.swap(i, min);
            }
        }
    }
    (vals, v)
}

/// Singular values of a general complex matrix, descending, by one-sided
/// Jacobi orthogonalization of the columns.
///
/// Works on the matrix itself rather than on the Gram product, so small
/// singular values come out with absolute error on the order of
/// `eps * sigma_max` instead of `sqrt(eps)` — which matters when the values
/// are later combined linearly (e.g. in the concurrence).
pub fn singular_values4(a: &Matrix4) -> [f64; 4] {
    // Column-major copy.
    let mut w = [[ZERO; 4]; 4]; // w[j] = column j
    for i in 0..4 {
        for j in 0..4 {
            w[j][i] = a[i][j];
        }
    }
    let scale = max_abs(a).max(1e-300);
    let tol = 1e-15 * scale * scale;

    for _sweep in 0..60 {
        let mut rotated = false;
        for p in 0..3 {
            for q in (p + 1)..4 {
                let mut app = 0.0_f64;
                let mut aqq = 0.0_f64;
                let mut apq = ZERO;
                for k in 0..4 {
                    app += w[p][k].norm_sqr();
                    aqq += w[q][k].norm_sqr();
                    apq += w[p][k].conj() * w[q][k];
                }
                let mag = abs(apq);
                if mag <= tol {
                    continue;
                }
                rotated = true;
                let u = apq / mag;
                let vartheta = (app - aqq) / (2.0 * mag);
                let t = if vartheta >= 0.0 {
                    1.0 / (vartheta + libm::sqrt(1.0 + vartheta * vartheta))
                } else {
                    -1.0 / (-vartheta + libm::sqrt(1.0 + vartheta * vartheta))
                };
                let c = 1.0 / libm::sqrt(1.0 + t * t);
                let s = t * c;
                let su = s * u;
                let su_conj = s * u.conj();
                for k in 0..4 {
                    let wp = w[p][k];
                    let wq = w[q][k];
                    w[p][k] = c * wp + su_conj * wq;
                    w[q][k] = -su * wp + c * wq;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let mut sv = [0.0_f64; 4];
    for (j, s) in sv.iter_mut().enumerate() {
        let mut acc = 0.0;
        for k in 0..4 {
            acc += w[j][k].norm_sqr();
        }
        *s = libm::sqrt(acc);
    }
    sv.sort_by(|a, b| b.partial_cmp(a).unwrap());
    sv
}

/// Hermitian square root of a positive-semidefinite matrix.
///
/// Small negative eigenvalues (numerical noise) are clamped to zero.
pub fn sqrt_psd(a: &Matrix4) -> Matrix4 {
    let (vals, v) = eigh4(a);
    let mut out = zero();
    for k in 0..4 {
        let root = libm::sqrt(vals[k].max(0.0));
        if root == 0.0 {
            continue;
        }
        for i in 0..4 {
            for j in 0..4 {
                out[i][j] += v[i][k] * v[j][k].conj() * root;
            }
        }
    }
    out
}
