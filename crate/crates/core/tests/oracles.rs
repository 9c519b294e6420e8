//! Checks against independent closed forms and brute-force quadrature.

use approx::assert_relative_eq;
use inclusion_neutrality::ellipsoid_potentials::ellipsoid_integrals;
use inclusion_neutrality::fields::{solve_imperfect_exterior, FieldSolution};
use inclusion_neutrality::geometry::{build_curve, ConformalMap, CurveSpec, TrigPoly};
use inclusion_neutrality::layer_potentials::{np_matrix, single_layer_gradient, LayerDensity};
use inclusion_neutrality::neutrality::{construct_coating_bd0, solve_lc_disk, BondingParameter};
use inclusion_neutrality::polarization::{solve_coreshell, solve_simple};
use inclusion_neutrality::quad::gauss_legendre;
use inclusion_neutrality::quadrature_domains::ellipsoid_potential_3d;
use num_complex::Complex64;
use std::f64::consts::PI;

/// Carlson R_F by duplication.
fn carlson_rf(mut x: f64, mut y: f64, mut z: f64) -> f64 {
    for _ in 0..60 {
        let l = (x * y).sqrt() + (y * z).sqrt() + (z * x).sqrt();
        x = 0.25 * (x + l);
        y = 0.25 * (y + l);
        z = 0.25 * (z + l);
    }
    1.0 / ((x + y + z) / 3.0).sqrt()
}

/// Carlson R_D by duplication.
fn carlson_rd(mut x: f64, mut y: f64, mut z: f64) -> f64 {
    let (mut sum, mut fac) = (0.0, 1.0);
    for _ in 0..60 {
        let l = (x * y).sqrt() + (y * z).sqrt() + (z * x).sqrt();
        sum += fac / (z.sqrt() * (z + l));
        fac *= 0.25;
        x = 0.25 * (x + l);
        y = 0.25 * (y + l);
        z = 0.25 * (z + l);
    }
    3.0 * sum + fac * ((x + y + 3.0 * z) / 5.0).powf(-1.5)
}

#[test]
fn ellipsoid_integrals_match_carlson_forms() {
    for (c2, rho) in [([4.0, 2.0, 1.0], 0.0), ([4.0, 2.0, 1.0], 2.0), ([9.0, 1.0, 0.25], 0.7), ([1.0, 1.0, 1.0], 3.0)] {
        let e = ellipsoid_integrals(rho, &c2).unwrap();
        let s = [c2[0] + rho, c2[1] + rho, c2[2] + rho];
        assert_relative_eq!(e.i, 2.0 * carlson_rf(s[0], s[1], s[2]), max_relative = 1e-12);
        let phi = [
            2.0 / 3.0 * carlson_rd(s[1], s[2], s[0]),
            2.0 / 3.0 * carlson_rd(s[0], s[2], s[1]),
            2.0 / 3.0 * carlson_rd(s[0], s[1], s[2]),
        ];
        for j in 0..3 {
            assert_relative_eq!(e.phi[j], phi[j], max_relative = 1e-12);
        }
    }
}

#[test]
fn ellipsoid_potential_matches_volume_quadrature() {
    let a = [2.0, 1.5, 1.0];
    let vol = 4.0 * PI / 3.0 * a[0] * a[1] * a[2];
    let (r, wr) = gauss_legendre(40);
    let (c, wc) = gauss_legendre(40);
    let nphi = 80;
    for x in [[3.0, 0.5, -0.2], [0.0, 0.0, 2.5], [-1.0, 2.2, 1.1]] {
        let mut acc = 0.0;
        for (ri, wri) in r.iter().zip(&wr) {
            let rr = 0.5 * (ri + 1.0);
            for (ci, wci) in c.iter().zip(&wc) {
                let s = (1.0 - ci * ci).sqrt();
                for k in 0..nphi {
                    let ph = 2.0 * PI * k as f64 / nphi as f64;
                    let y = [a[0] * rr * s * ph.cos(), a[1] * rr * s * ph.sin(), a[2] * rr * ci];
                    let d = ((x[0] - y[0]).powi(2) + (x[1] - y[1]).powi(2) + (x[2] - y[2]).powi(2)).sqrt();
                    acc += 0.5 * wri * rr * rr * wci * 2.0 * PI / nphi as f64 * (-1.0 / (4.0 * PI * d));
                }
            }
        }
        let direct = acc * a[0] * a[1] * a[2] / vol;
        assert_relative_eq!(ellipsoid_potential_3d(a, x).unwrap(), direct, max_relative = 1e-6);
    }
}

/// Polynomial extrapolation to h = 0 from samples at h, 2h, 3h, 4h.
fn extrapolate(v: [f64; 4]) -> f64 {
    4.0 * v[0] - 6.0 * v[1] + 4.0 * v[2] - v[3]
}

#[test]
fn single_layer_jump_relation() {
    let spec = CurveSpec::PerturbedDisk { radius: 1.0, perturbation: TrigPoly::cosine(3, 0.1) };
    let c = build_curve(&spec, 4096).unwrap();
    let phi: Vec<f64> = c.params.iter().map(|t| (2.0 * t).cos() + 0.3 * t.sin()).collect();
    let kstar = np_matrix(&c).apply(&phi);
    let density = LayerDensity::new(&c, phi.clone()).unwrap();
    let h = 0.012;
    for k in [0, 400, 1201, 2800] {
        let (p, n) = (c.points[k], c.normals[k]);
        for side in [1.0, -1.0] {
            let mut v = [0.0; 4];
            for (m, vm) in v.iter_mut().enumerate() {
                let d = side * h * (m + 1) as f64;
                let g = single_layer_gradient(&c, &density, &[[p[0] + d * n[0], p[1] + d * n[1]]]).unwrap()[0];
                *vm = g[0] * n[0] + g[1] * n[1];
            }
            let limit = extrapolate(v);
            let expected = side * 0.5 * phi[k] + kstar[k];
            assert!((limit - expected).abs() < 1e-4, "node {k} side {side}: {limit} vs {expected}");
        }
    }
}

#[test]
fn disk_field_closed_form() {
    let c = build_curve(&CurveSpec::circle(1.5), 256).unwrap();
    let k = 4.0;
    let sol = solve_simple(&c, k).unwrap();
    let a = [0.6, -0.8];
    let f = FieldSolution::from_simple(&c, &sol, a);
    let pts = [[3.0, 0.0], [-1.0, 2.5], [0.3, 0.2]];
    let v = f.evaluate(&pts).unwrap();
    let d = (k - 1.0) / (k + 1.0);
    for (p, val) in pts.iter().zip(&v) {
        let ax = a[0] * p[0] + a[1] * p[1];
        let r2 = p[0] * p[0] + p[1] * p[1];
        let exact = if r2 > 2.25 { ax - d * 2.25 * ax / r2 } else { 2.0 / (k + 1.0) * ax };
        assert!((val.u - exact).abs() < 1e-10, "{p:?}: {} vs {exact}", val.u);
    }
}

#[test]
fn coated_field_is_inverse_map() {
    // outside the shell u = Re(alpha zeta(z)) exactly
    let map = ConformalMap::monomial(2, Complex64::new(0.25, 0.0)).unwrap();
    let coating = construct_coating_bd0(&map, 0.5).unwrap();
    let (core, shell) = coating.curves(512).unwrap();
    let sol = solve_coreshell(&core, &shell, &coating.profile()).unwrap();
    for a in [[1.0, 0.0], [0.0, 1.0]] {
        let f = FieldSolution::from_coreshell(&core, &shell, &sol, a);
        let alpha = Complex64::new(a[0], -a[1]);
        for p in [[3.0, 0.0], [0.0, 3.5], [-2.5, 2.5], [5.0, -1.0]] {
            let zeta = map.invert(Complex64::new(p[0], p[1])).unwrap();
            let u = f.evaluate(&[p]).unwrap()[0].u;
            assert!((u - (alpha * zeta).re).abs() < 1e-10, "{p:?}");
        }
    }
}

#[test]
fn spectral_solver_matches_lc_disk() {
    let id = ConformalMap::identity();
    for beta in [0.3, 1.0, 2.5] {
        let bp = BondingParameter::constant(&id, beta, 64).unwrap();
        let s = solve_imperfect_exterior(&id, &bp, Complex64::new(1.0, 0.0), 32).unwrap();
        let lc = solve_lc_disk(1.0, f64::INFINITY, 1.0, beta).unwrap();
        assert!((s.alpha1.re - lc.d).abs() < 1e-13, "beta {beta}: {} vs {}", s.alpha1, lc.d);
        assert!(s.alpha1.im.abs() < 1e-14);
    }
}

#[test]
fn perfect_conductor_tensor_equals_area_times_two() {
    // for a disk, M = 2 |D| I when k = infinity
    let c = build_curve(&CurveSpec::circle(0.7), 128).unwrap();
    let m = solve_simple(&c, f64::INFINITY).unwrap().tensor;
    assert_relative_eq!(m.matrix[0][0], 2.0 * PI * 0.49, max_relative = 1e-12);
    assert_relative_eq!(m.matrix[1][1], 2.0 * PI * 0.49, max_relative = 1e-12);
}
