// Copyright 2026 Spinbath Contributors
// SPDX-License-Identifier: Apache-2.0

//! Embedded cross-validation suite.
//!
//! Every closed-form path in the core is checked here against an
//! independent numerical route, with fixed deterministic inputs:
//!
//! 1. thermal state vs. brute-force matrix exponential;
//! 2. closed-form propagator vs. adaptive ODE integration;
//! 3. Wootters concurrence vs. X-state formula vs. thermal closed form;
//! 4. decay exponent `B(t)` vs. quadrature of the rate;
//! 5. closed-system specific heat: fluctuation vs. `ln Z` curvature;
//! 6. Hermitian eigensolver vs. characteristic-polynomial roots.
//!
//! The inputs walk a small deterministic lattice of couplings and
//! temperatures (no RNG), so a report is reproducible verbatim.

use spinbath_core::dynamics::{decay_exponent, evolve_closed_form, evolve_ode, rate};
use spinbath_core::linalg::{self, C64, Matrix4};
use spinbath_core::model::{
    build_hamiltonian, gibbs_state, InverseTemperature, ModelParams,
};
use spinbath_core::observables::{
    closed_system_specific_heat, closed_system_specific_heat_lnz, concurrence,
    concurrence_xstate, eigenvalues_hermitian, thermal_concurrence_analytic,
};

pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// Deterministic lattice of test parameter sets.
fn param_lattice() -> Vec<ModelParams> {
    let mut out = Vec::new();
    for j in [-1.5, 0.7, 1.0, 2.0] {
        for d_z in [0.0, 0.5, -1.2] {
            for j_z in [-0.6, 0.5] {
                out.push(ModelParams::new(j, j_z, d_z, 0.12, 0.9).unwrap());
            }
        }
    }
    out
}

fn betas() -> [f64; 4] {
    [0.1, 0.5, 1.3, 2.4]
}

pub fn run_all() -> Vec<CheckResult> {
    vec![
        check_gibbs_vs_expm(),
        check_closed_form_vs_ode(),
        check_concurrence_routes(),
        check_decay_vs_quadrature(),
        check_specific_heat_routes(),
        check_eigensolver_vs_charpoly(),
    ]
}

fn check_gibbs_vs_expm() -> CheckResult {
    let mut worst = 0.0_f64;
    for params in param_lattice() {
        for beta in betas() {
            let rho = gibbs_state(&params, InverseTemperature::new(beta).unwrap());
            let h = build_hamiltonian(&params);
            let e = expm_taylor(&linalg::mat_scale(&h, C64::new(-beta, 0.0)));
            let z = linalg::trace(&e);
            let brute = linalg::mat_scale(&e, C64::new(1.0, 0.0) / z);
            worst = worst.max(linalg::max_abs_diff(rho.as_matrix(), &brute));
        }
    }
    result("gibbs_vs_matrix_exponential", worst, 1e-9)
}

fn check_closed_form_vs_ode() -> CheckResult {
    let mut worst = 0.0_f64;
    for params in param_lattice().into_iter().step_by(5) {
        let rho0 = gibbs_state(&params, InverseTemperature::new(0.8).unwrap());
        for t in [0.0, 0.7, 3.0, 11.0] {
            let a = evolve_closed_form(&rho0, &params, t).unwrap();
            let b = evolve_ode(&rho0, &params, t, 1e-9).unwrap();
            worst = worst.max(linalg::max_abs_diff(
                a.rho_t.as_matrix(),
                b.rho_t.as_matrix(),
            ));
        }
    }
    result("closed_form_vs_ode", worst, 1e-6)
}

fn check_concurrence_routes() -> CheckResult {
    let mut worst = 0.0_f64;
    for params in param_lattice() {
        for beta in betas() {
            let b = InverseTemperature::new(beta).unwrap();
            let rho = gibbs_state(&params, b);
            let general = concurrence(&rho).unwrap().concurrence;
            let x = concurrence_xstate(&rho).unwrap();
            let analytic = thermal_concurrence_analytic(&params, b);
            worst = worst.max((general - x).abs());
            worst = worst.max((x - analytic).abs());
        }
    }
    result("wootters_vs_xstate_vs_thermal", worst, 1e-10)
}

fn check_decay_vs_quadrature() -> CheckResult {
    let mut worst = 0.0_f64;
    for (gamma0, gamma) in [(0.1, 1.0), (0.05, 0.3), (0.4, 2.5)] {
        let params = ModelParams::new(1.0, 0.5, 0.5, gamma0, gamma).unwrap();
        for t in [0.3, 1.0, 4.0, 15.0, 30.0] {
            let b = decay_exponent(t, &params).unwrap();
            let quad =
                adaptive_simpson(&|s| rate(s, &params).unwrap(), 0.0, t, 1e-13);
            worst = worst.max((b - quad).abs());
        }
    }
    result("decay_exponent_vs_quadrature", worst, 1e-10)
}

fn check_specific_heat_routes() -> CheckResult {
    let params = ModelParams::new(1.0, 0.5, 0.5, 0.1, 1.0).unwrap();
    let mut worst = 0.0_f64;
    for k in 0..=40 {
        let beta = 0.1 * libm::pow(200.0, k as f64 / 40.0);
        let b = InverseTemperature::new(beta).unwrap();
        let fluct = closed_system_specific_heat(&params, b).unwrap();
        let lnz = closed_system_specific_heat_lnz(&params, b).unwrap();
        worst = worst.max((fluct - lnz).abs());
    }
    result("specific_heat_fluctuation_vs_lnz", worst, 1e-6)
}

fn check_eigensolver_vs_charpoly() -> CheckResult {
    let mut worst = 0.0_f64;
    for params in param_lattice() {
        let rho = gibbs_state(&params, InverseTemperature::new(0.6).unwrap());
        let mut eig = eigenvalues_hermitian(rho.as_matrix()).unwrap();
        eig.reverse();
        let roots = eigenvalues_charpoly(rho.as_matrix());
        if roots.len() != 4 {
            return CheckResult {
                name: "eigensolver_vs_charpoly",
                passed: false,
                detail: format!("oracle found {} roots", roots.len()),
            };
        }
        // compare cluster sums; individual roots in a near-degenerate
        // cluster are ill-conditioned in the polynomial representation
        let mut k = 0;
        while k < 4 {
            let mut end = k + 1;
            while end < 4 && eig[end] - eig[end - 1] <= 1e-5 {
                end += 1;
            }
            let se: f64 = eig[k..end].iter().sum();
            let sr: f64 = roots[k..end].iter().sum();
            worst = worst.max((se - sr).abs() / (end - k) as f64);
            k = end;
        }
    }
    result("eigensolver_vs_charpoly", worst, 1e-10)
}

fn result(name: &'static str, worst: f64, tol: f64) -> CheckResult {
    CheckResult {
        name,
        passed: worst <= tol,
        detail: format!("worst deviation {worst:.3e}, tolerance {tol:.1e}"),
    }
}

// --- embedded numerical oracles -------------------------------------------

fn expm_taylor(a: &Matrix4) -> Matrix4 {
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

fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64, f64) {
        let m = 0.5 * (a + b);
        let fm = f(m);
        ((b - a) / 6.0 * (fa + 4.0 * fm + fb), m, fm)
    }
    #[allow(clippy::too_many_arguments)]
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

fn charpoly_coeffs(a: &Matrix4) -> [f64; 4] {
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

fn poly(c: &[f64; 4], x: f64) -> f64 {
    (((x - c[0]) * x + c[1]) * x - c[2]) * x + c[3]
}

fn dpoly(c: &[f64; 4], x: f64) -> f64 {
    ((4.0 * x - 3.0 * c[0]) * x + 2.0 * c[1]) * x - c[2]
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

fn eigenvalues_charpoly(a: &Matrix4) -> Vec<f64> {
    let coeffs = charpoly_coeffs(a);
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

    let ddroots = {
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
        if dpoly(&coeffs, w[0]) * dpoly(&coeffs, w[1]) <= 0.0 {
            droots.push(bisect(&|x| dpoly(&coeffs, x), w[0], w[1]));
        }
    }

    let scale = [1.0, coeffs[0].abs(), coeffs[1].abs(), coeffs[2].abs(), coeffs[3].abs()]
        .into_iter()
        .fold(0.0_f64, f64::max);
    let mut panels = vec![lo];
    panels.extend(droots.iter().copied());
    panels.push(hi);
    let mut roots = Vec::new();
    for w in panels.windows(2) {
        if poly(&coeffs, w[0]) * poly(&coeffs, w[1]) < 0.0 {
            roots.push(bisect(&|x| poly(&coeffs, x), w[0], w[1]));
        }
    }
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
