// Copyright 2026 Spinbath Contributors
// SPDX-License-Identifier: Apache-2.0

//! Independent numerical oracles for the integration tests.
//!
//! Each helper deliberately avoids the code path it is used to check:
//! the matrix exponential is Taylor series with scaling-and-squaring (no
//! eigendecomposition), the quadrature is adaptive Simpson, and the
//! eigenvalue oracle works on the characteristic polynomial.
#![allow(dead_code)] // each test binary uses a different subset
#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]
#![allow(clippy::too_many_arguments)] // simpson recursion threads its panel state

use rand::Rng;
use spinbath_core::linalg::{self, Matrix4, C64};
use spinbath_core::model::ModelParams;

/// `exp(A)` by scaling-and-squaring plus a Taylor series.
pub fn expm_taylor(a: &Matrix4) -> Matrix4 {
    let norm = linalg::max_abs(a);
    let mut squarings = 0u32;
    let mut scale = 1.0;
    while norm * scale > 0.25 {
        scale *= 0.5;
        squarings += 1;
    }
    let scaled = linalg::mat_scale(a, C64::new(scale, 0.0));

    let mut result = linalg::identity();
    let mut term = linalg::identity();
    for k in 1..60 {
        term = linalg::mat_mul(&term, &scaled);
        term = linalg::mat_scale(&term, C64::new(1.0 / k as f64, 0.0));
        result = linalg::mat_add(&result, &term);
        if linalg::max_abs(&term) < 1e-20 {
            break;
        }
    }
    for _ in 0..squarings {
        result = linalg::mat_mul(&result, &result);
    }
    result
}

/// Brute-force thermal state `exp(-beta H) / tr`, with a spectral shift by
/// the Gershgorin lower bound so large `beta` cannot overflow.
pub fn gibbs_brute_force(params: &ModelParams, beta: f64) -> Matrix4 {
    let h = spinbath_core::build_hamiltonian(params);
    // crude lower bound on the spectrum
    let mut lo = f64::INFINITY;
    for i in 0..4 {
        let mut radius = 0.0;
        for j in 0..4 {
            if i != j {
                radius += linalg::abs(h[i][j]);
            }
        }
        lo = lo.min(h[i][i].re - radius);
    }
    let mut shifted = h;
    for (k, row) in shifted.iter_mut().enumerate() {
        row[k] -= C64::new(lo, 0.0);
        let _ = k;
    }
    let e = expm_taylor(&linalg::mat_scale(&shifted, C64::new(-beta, 0.0)));
    let tr = linalg::trace(&e);
    linalg::mat_scale(&e, C64::new(1.0, 0.0) / tr)
}

/// Adaptive Simpson quadrature of `f` over `[a, b]`.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64, f64) {
        let m = 0.5 * (a + b);
        let fm = f(m);
        ((b - a) / 6.0 * (fa + 4.0 * fm + fb), m, fm)
    }
    fn recurse<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        whole: f64,
        m: f64,
        fm: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let (left, lm, flm) = simpson(f, a, fa, m, fm);
        let (right, rm, frm) = simpson(f, m, fm, b, fb);
        let delta = left + right - whole;
        if depth >= 40 || delta.abs() <= 15.0 * tol {
            left + right + delta / 15.0
        } else {
            recurse(f, a, fa, m, fm, left, lm, flm, tol * 0.5, depth + 1)
                + recurse(f, m, fm, b, fb, right, rm, frm, tol * 0.5, depth + 1)
        }
    }
    if a == b {
        return 0.0;
    }
    let fa = f(a);
    let fb = f(b);
    let (whole, m, fm) = simpson(f, a, fa, b, fb);
    recurse(f, a, fa, b, fb, whole, m, fm, tol, 0)
}

/// Coefficients `(e1, e2, e3, e4)` of
/// `det(xI - A) = x^4 - e1 x^3 + e2 x^2 - e3 x + e4`
/// via Newton's identities on the power sums.
pub fn charpoly_coeffs(a: &Matrix4) -> [f64; 4] {
    let a2 = linalg::mat_mul(a, a);
    let a3 = linalg::mat_mul(&a2, a);
    let a4 = linalg::mat_mul(&a3, a);
    let p1 = linalg::trace(a).re;
    let p2 = linalg::trace(&a2).re;
    let p3 = linalg::trace(&a3).re;
    let p4 = linalg::trace(&a4).re;
    let e1 = p1;
    let e2 = (e1 * p1 - p2) / 2.0;
    let e3 = (e2 * p1 - e1 * p2 + p3) / 3.0;
    let e4 = (e3 * p1 - e2 * p2 + e1 * p3 - p4) / 4.0;
    [e1, e2, e3, e4]
}

fn poly(coeffs: &[f64; 4], x: f64) -> f64 {
    // x^4 - e1 x^3 + e2 x^2 - e3 x + e4, Horner form
    (((x - coeffs[0]) * x + coeffs[1]) * x - coeffs[2]) * x + coeffs[3]
}

fn dpoly(coeffs: &[f64; 4], x: f64) -> f64 {
    ((4.0 * x - 3.0 * coeffs[0]) * x + 2.0 * coeffs[1]) * x - coeffs[2]
}

fn bisect<F: Fn(f64) -> f64>(f: &F, mut lo: f64, mut hi: f64) -> f64 {
    let flo = f(lo);
    if flo == 0.0 {
        return lo;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm > 0.0) == (flo > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Eigenvalues of a Hermitian 4x4 matrix by root-finding on its
/// characteristic polynomial, ascending. Handles the doubly degenerate
/// roots of thermal states (which sit at critical points of the quartic).
pub fn eigenvalues_charpoly(a: &Matrix4) -> Vec<f64> {
    let coeffs = charpoly_coeffs(a);
    // Gershgorin bounds
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..4 {
        let mut radius = 0.0;
        for j in 0..4 {
            if i != j {
                radius += linalg::abs(a[i][j]);
            }
        }
        lo = lo.min(a[i][i].re - radius);
        hi = hi.max(a[i][i].re + radius);
    }
    lo -= 1e-9 + 1e-12 * lo.abs();
    hi += 1e-9 + 1e-12 * hi.abs();

    // Critical points: roots of the derivative cubic, found by bisection
    // between the roots of the second derivative (a quadratic).
    let ddroots = {
        // 12 x^2 - 6 e1 x + 2 e2 = 0
        let aa = 12.0;
        let bb = -6.0 * coeffs[0];
        let cc = 2.0 * coeffs[1];
        let disc = bb * bb - 4.0 * aa * cc;
        if disc > 0.0 {
            let r = disc.sqrt();
            vec![(-bb - r) / (2.0 * aa), (-bb + r) / (2.0 * aa)]
        } else {
            vec![]
        }
    };
    let mut nodes = vec![lo];
    nodes.extend(ddroots.iter().copied().filter(|x| *x > lo && *x < hi));
    nodes.push(hi);
    let mut droots = Vec::new();
    for w in nodes.windows(2) {
        let (x0, x1) = (w[0], w[1]);
        if dpoly(&coeffs, x0) * dpoly(&coeffs, x1) <= 0.0 {
            droots.push(bisect(&|x| dpoly(&coeffs, x), x0, x1));
        }
    }

    // Roots of the quartic: sign changes across the critical-point panels,
    // plus critical points where the quartic itself (numerically) vanishes
    // count twice.
    let scale = [1.0, coeffs[0].abs(), coeffs[1].abs(), coeffs[2].abs(), coeffs[3].abs()]
        .into_iter()
        .fold(0.0_f64, f64::max);
    let mut panels = vec![lo];
    panels.extend(droots.iter().copied());
    panels.push(hi);
    let mut roots = Vec::new();
    for w in panels.windows(2) {
        let (x0, x1) = (w[0], w[1]);
        if poly(&coeffs, x0) * poly(&coeffs, x1) < 0.0 {
            roots.push(bisect(&|x| poly(&coeffs, x), x0, x1));
        }
    }
    // Roots of even multiplicity produce no sign change; they sit at
    // critical points where the quartic (numerically) vanishes. Fill the
    // root count from those, best candidates first.
    if roots.len() < 4 {
        let mut candidates: Vec<f64> = droots
            .iter()
            .copied()
            .filter(|r| poly(&coeffs, *r).abs() <= 1e-11 * scale)
            .collect();
        candidates.sort_by(|a, b| {
            poly(&coeffs, *a)
                .abs()
                .partial_cmp(&poly(&coeffs, *b).abs())
                .unwrap()
        });
        'fill: loop {
            for r in &candidates {
                if roots.len() >= 4 {
                    break 'fill;
                }
                roots.push(*r);
            }
            if candidates.is_empty() {
                break;
            }
        }
    }
    roots.sort_by(|a, b| a.partial_cmp(b).unwrap());

    // An exact double root perturbed by coefficient rounding splits into two
    // simple roots a distance ~sqrt(eps) apart, but the enclosed critical
    // point of the quartic stays put to full precision; snap such pairs to
    // it.
    let span = (hi - lo).max(1.0);
    let mut k = 0;
    while k + 1 < roots.len() {
        if roots[k + 1] - roots[k] <= 1e-6 * span {
            if let Some(d) = droots
                .iter()
                .find(|d| **d >= roots[k] - 1e-6 * span && **d <= roots[k + 1] + 1e-6 * span)
            {
                roots[k] = *d;
                roots[k + 1] = *d;
            }
            k += 2;
        } else {
            k += 1;
        }
    }
    roots
}

/// Uniform draw of model parameters with both coupling signs.
pub fn random_params<R: Rng>(rng: &mut R) -> ModelParams {
    ModelParams::new(
        rng.gen_range(-2.0..2.0),
        rng.gen_range(-2.0..2.0),
        rng.gen_range(-2.0..2.0),
        rng.gen_range(0.02..0.3),
        rng.gen_range(0.2..3.0),
    )
    .unwrap()
}
