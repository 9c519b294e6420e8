//! Acceptance run: one verdict line per criterion, with the sub-checks
//! that decide it listed underneath. Exits non-zero if any check fails.

use inclusion_neutrality::ellipsoid_potentials::{
    alpha_coefficients, odp_residual, odp_w, EllipsoidPair, OdpGeometry,
};
use inclusion_neutrality::fields::{
    decay_exponent, dipole_fit, max_perturbation, solve_imperfect_exterior, FieldSolution,
};
use inclusion_neutrality::geometry::{build_curve, curve_area, ConformalMap, CurveSpec, TrigPoly};
use inclusion_neutrality::neutrality::{
    beta_weakly_neutral, construct_coating_bd0, find_coating_perturbed_disk, neutral_matrix_conductivity,
    BondingParameter, NewtonOptions,
};
use inclusion_neutrality::polarization::{
    hs_check, pt_coreshell, pt_simple, solve_coreshell, solve_simple, ConductivityProfile,
};
use inclusion_neutrality::quadrature_domains::{
    check_newtonian_formulation, check_newtonian_pair, focal_ellipse_identity, mean_value_identity,
    neumann_oval_identity, Region,
};
use inclusion_neutrality::{Error, Result};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use std::time::Instant;

struct Check {
    name: String,
    pass: bool,
}

#[derive(Default)]
struct Criterion {
    checks: Vec<Check>,
}

impl Criterion {
    fn check(&mut self, pass: bool, name: impl Into<String>) {
        self.checks.push(Check { name: name.into(), pass });
    }

    fn pass(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(|c| c.pass)
    }
}

fn verdict(p: bool) -> &'static str {
    if p {
        "PASS"
    } else {
        "FAIL"
    }
}

fn c1() -> Result<Criterion> {
    let mut c = Criterion::default();
    let disk = build_curve(&CurveSpec::circle(1.0), 256)?;
    let m = pt_simple(&disk, 2.0)?;
    let exact = 2.0 * PI / 3.0;
    let err = [
        (m.matrix[0][0] - exact).abs(),
        (m.matrix[1][1] - exact).abs(),
        m.matrix[0][1].abs(),
        m.matrix[1][0].abs(),
    ]
    .into_iter()
    .fold(0.0, f64::max)
        / exact;
    c.check(err <= 1e-8, format!("unit disk, k = 2, N = 256: max relative deviation from 2pi/3 = {err:.2e} (<= 1e-8)"));
    Ok(c)
}

fn c2() -> Result<Criterion> {
    let mut c = Criterion::default();
    let e = build_curve(&CurveSpec::ellipse(2.0, 1.0), 256)?;
    let m = pt_simple(&e, 3.0)?;
    let area = curve_area(&e);
    let inv = m.as_matrix().try_inverse().ok_or_else(|| Error::SolveFailure("singular M".into()))?;
    let v = area * inv.trace();
    c.check((v - 2.0).abs() <= 1e-6, format!("ellipse 2:1, k = 3: |D| Tr(M^-1) = {v:.12} (2 within 1e-6)"));
    let kite = build_curve(&CurveSpec::conformal(ConformalMap::monomial(2, Complex64::new(0.2, 0.0))?), 256)?;
    let mk = pt_simple(&kite, 3.0)?;
    let hs = hs_check(&mk, 3.0, curve_area(&kite))?;
    c.check(
        hs.lower_slack >= 1e-3 && hs.upper_slack >= 1e-3,
        format!("kite zeta + 0.2/zeta^2, k = 3: slacks lower {:.3e}, upper {:.3e} (>= 1e-3)", hs.lower_slack, hs.upper_slack),
    );
    Ok(c)
}

fn c3() -> Result<Criterion> {
    let mut c = Criterion::default();
    let sigma_m = neutral_matrix_conductivity(5.0, 2.0, 0.25, 2)?;
    let (r_i, r_e) = (1.0, 2.0);
    let core = build_curve(&CurveSpec::circle(r_i), 256)?;
    let shell = build_curve(&CurveSpec::circle(r_e), 256)?;
    let sol = solve_coreshell(&core, &shell, &ConductivityProfile::new(5.0, 2.0, sigma_m)?)?;
    let rel = sol.tensor.norm() / curve_area(&shell);
    c.check(rel <= 1e-8, format!("sigma_m = {sigma_m:.12}: ||M|| / |Omega| = {rel:.2e} (<= 1e-8)"));
    let mut worst: f64 = 0.0;
    for a in [[1.0, 0.0], [0.0, 1.0]] {
        let f = FieldSolution::from_coreshell(&core, &shell, &sol, a);
        worst = worst.max(max_perturbation(&f, 3.0 * r_e, 128)?);
    }
    c.check(worst <= 1e-9, format!("max exterior perturbation at |x| = 3 r_e: {worst:.2e} (<= 1e-9)"));
    Ok(c)
}

fn coating_suite(n: usize, sigma_s: f64, nodes: usize) -> Result<Criterion> {
    let mut c = Criterion::default();
    let map = ConformalMap::monomial(n, Complex64::new(0.25, 0.0))?;
    let coating = construct_coating_bd0(&map, sigma_s)?;
    let (core, shell) = coating.curves(nodes)?;
    let sol = solve_coreshell(&core, &shell, &coating.profile())?;
    let rel = sol.tensor.norm() / curve_area(&shell);
    c.check(rel <= 1e-6, format!("r = {:.12}: coated ||M|| / |Omega| = {rel:.2e} (<= 1e-6)", coating.radius));
    let bare_sol = solve_simple(&core, f64::INFINITY)?;
    let rho = shell.circumradius([0.0, 0.0]);
    let (mut pc, mut pu, mut ratio) = (Vec::new(), Vec::new(), 0.0f64);
    for a in [[1.0, 0.0], [0.0, 1.0]] {
        let coated = FieldSolution::from_coreshell(&core, &shell, &sol, a);
        let bare = FieldSolution::from_simple(&core, &bare_sol, a);
        pc.push(decay_exponent(&coated, (4.0 * rho, 8.0 * rho), 128)?.exponent);
        pu.push(decay_exponent(&bare, (4.0 * rho, 8.0 * rho), 128)?.exponent);
        ratio = ratio.max(max_perturbation(&coated, 2.0 * rho, 256)? / max_perturbation(&bare, 2.0 * rho, 256)?);
    }
    c.check(
        pc.iter().all(|p| (1.9..=2.1).contains(p)),
        format!("coated decay exponent {:.4}, {:.4} for a = e1, e2 (in [1.9, 2.1])", pc[0], pc[1]),
    );
    c.check(
        pu.iter().all(|p| (0.9..=1.1).contains(p)),
        format!("uncoated decay exponent {:.4}, {:.4} (in [0.9, 1.1])", pu[0], pu[1]),
    );
    c.check(ratio <= 0.1, format!("perturbation ratio coated/uncoated at 2 x circumradius: {ratio:.4} (<= 0.1)"));
    Ok(c)
}

fn c4() -> Result<Criterion> {
    let mut c = Criterion::default();
    for (label, n, s, nodes) in [("zeta + 1/(4 zeta^2), sigma_s = 0.5", 2, 0.5, 512), ("zeta + 1/(4 zeta^3), sigma_s = 0.3", 3, 0.3, 512)] {
        for ch in coating_suite(n, s, nodes)?.checks {
            c.check(ch.pass, format!("{label}: {}", ch.name));
        }
    }
    Ok(c)
}

fn c5() -> Result<Criterion> {
    let mut c = Criterion::default();
    for b in [0.0, 0.1, 0.25] {
        let map = ConformalMap::monomial(1, Complex64::new(b, 0.0))?;
        let bp = beta_weakly_neutral(&map, 512)?;
        let mut worst: f64 = 0.0;
        for alpha in [Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)] {
            worst = worst.max(solve_imperfect_exterior(&map, &bp, alpha, 64)?.alpha1.norm());
        }
        c.check(worst <= 1e-8, format!("b_D = {b}: max |alpha_1| over alpha in {{1, i}} = {worst:.3e} (<= 1e-8)"));
    }
    let map = ConformalMap::monomial(1, Complex64::new(0.3, 0.0))?;
    let r = beta_weakly_neutral(&map, 512);
    c.check(matches!(r, Err(Error::BDTooLarge(_))), format!("b_D = 0.3 rejected with BDTooLarge: {}", r.is_err()));
    let map = ConformalMap::monomial(1, Complex64::new(0.1, 0.0))?;
    let one = BondingParameter::constant(&map, 1.0, 512)?;
    let a1 = solve_imperfect_exterior(&map, &one, Complex64::new(1.0, 0.0), 64)?.alpha1.norm();
    c.check(a1 >= 1e-3, format!("beta = 1 on b_D = 0.1: |alpha_1| = {a1:.3e} (>= 1e-3)"));
    Ok(c)
}

fn c6() -> Result<Criterion> {
    let mut c = Criterion::default();
    let opts = NewtonOptions { tol: 1e-8, ..NewtonOptions::default() };
    let s = find_coating_perturbed_disk(&TrigPoly::cosine(3, 0.05), 10.0, 0.5, 1.0, 1.0, &opts)?;
    let rel = s.tensor.norm() / s.tensor.shell_area.unwrap_or(f64::NAN);
    c.check(
        s.iterations <= 10 && rel <= 1e-8,
        format!("h = 0.05 cos 3t: {} Newton steps, ||M|| / |Omega| = {rel:.2e} (<= 10 steps, <= 1e-8)", s.iterations),
    );
    let z = find_coating_perturbed_disk(&TrigPoly::zero(), 10.0, 0.5, 1.0, 1.0, &opts)?;
    c.check(
        z.iterations == 0 && z.b == [0.0; 3],
        format!("h = 0: b = {:?} after {} iterations (b = 0, none)", z.b, z.iterations),
    );
    Ok(c)
}

fn c7() -> Result<Criterion> {
    let mut c = Criterion::default();
    let pair = EllipsoidPair::new([4.0, 2.0, 1.0], 2.0)?;
    let sol = odp_w(OdpGeometry::Confocal(pair))?;
    let r = odp_residual(&sol, &pair, 200, 11);
    let worst = r.laplacian_residual.max(r.outer_grad_max).max(r.inner_affine_residual);
    c.check(worst <= 1e-6, format!("confocal c^2 = (4, 2, 1), rho0 = 2: residuals {:.2e}, {:.2e}, {:.2e} (<= 1e-6)", r.laplacian_residual, r.outer_grad_max, r.inner_affine_residual));

    let balls = OdpGeometry::Balls { r_i: 1.0, r_e: 2.0 };
    let bs = odp_w(balls)?;
    let expected = (1.0 - 8.0) / 3.0;
    let aerr = bs.a.iter().map(|a| (a - expected).abs()).fold(0.0, f64::max);
    c.check(aerr <= 1e-12, format!("balls r_i = 1, r_e = 2: A = {:?}, deviation from (1/3)(1 - 8) I = {aerr:.1e}", bs.a));
    let br = odp_residual(&bs, &balls.as_pair(), 200, 12);
    c.check(br.outer_grad_max <= 1e-10, format!("balls: max |grad w| on the outer sphere = {:.2e} (<= 1e-10)", br.outer_grad_max));

    let conf = odp_w(OdpGeometry::Confocal(EllipsoidPair::new([1.0; 3], 3.0)?))?;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut dev: f64 = 0.0;
    for _ in 0..200 {
        let r = rng.gen_range(1.0..2.0);
        let dir: [f64; 3] = loop {
            let v: [f64; 3] = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
            let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
            if n > 0.1 && n <= 1.0 {
                break v.map(|x| x / n);
            }
        };
        let x = dir.map(|d| d * r);
        let (p, q) = (conf.eval(x)?, bs.eval(x)?);
        dev = dev.max((p.w - q.w).abs());
        for j in 0..3 {
            dev = dev.max((p.grad[j] - q.grad[j]).abs());
        }
    }
    c.check(dev <= 1e-12, format!("confocal c = (1, 1, 1), rho0 = 3 against balls: max pointwise deviation {dev:.2e} (<= 1e-12)"));
    Ok(c)
}

fn c8() -> Result<Criterion> {
    let mut c = Criterion::default();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let mut c2 = [rng.gen_range(0.2..5.0), rng.gen_range(0.2..5.0), rng.gen_range(0.2..5.0)];
        c2.sort_by(|a, b| b.partial_cmp(a).unwrap());
        let pair = EllipsoidPair::new(c2, rng.gen_range(0.05..6.0))?;
        let a = alpha_coefficients(pair.rho0, &pair.c2)?;
        let f = pair.volume_fraction();
        worst = worst.max((2.0 * a.iter().sum::<f64>() - (1.0 - 1.0 / f)).abs());
    }
    c.check(worst <= 1e-10, format!("100 random confocal pairs: max |2 sum alpha_j - (1 - 1/f)| = {worst:.2e} (<= 1e-10)"));
    let a = alpha_coefficients(3.0, &[1.0; 3])?;
    let dev = a.iter().map(|v| (v + 7.0 / 6.0).abs()).fold(0.0, f64::max);
    c.check(dev <= 1e-12, format!("c = (1, 1, 1), rho0 = 3: alpha = {a:?} (-7/6 within 1e-12)"));
    Ok(c)
}

fn c9() -> Result<Criterion> {
    let mut c = Criterion::default();
    let pair = EllipsoidPair::new([4.0, 2.0, 1.0], 2.0)?;
    let k = check_newtonian_formulation(&pair, 200, 200, 9)?;
    let s2 = k.scale * k.scale;
    c.check(k.outside_max <= 1e-6 * s2, format!("confocal pair: exterior max |w| = {:.2e} (<= 1e-6 scale^2 = {:.2e})", k.outside_max, 1e-6 * s2));
    c.check(k.fit_residual <= 1e-6, format!("interior quadratic fit residual {:.2e} (<= 1e-6)", k.fit_residual));
    c.check(k.linear_term_norm <= 1e-7, format!("fitted linear term norm {:.2e} (<= 1e-7)", k.linear_term_norm));
    let e = k.expected_alpha.unwrap_or([f64::NAN; 3]);
    let dev = (0..3).map(|j| (k.fitted_alpha[j] - e[j]).abs()).fold(0.0, f64::max);
    c.check(dev <= 1e-5, format!("fitted alpha_j against alpha_coefficients: {dev:.2e} (<= 1e-5)"));
    let shell = pair.shell_axes2();
    let off = check_newtonian_pair(pair.c2, [shell[0] + 0.5, shell[1], shell[2]], 200, 200, 9)?;
    c.check(off.outside_max >= 1e-3, format!("non-confocal control: exterior max |w| = {:.2e} (>= 1e-3)", off.outside_max));
    Ok(c)
}

fn c10() -> Result<Criterion> {
    let mut c = Criterion::default();
    let f2 = focal_ellipse_identity(&[2.0, 1.0], 6, 256)?;
    let m2 = f2.test("re_z0").map(|t| t.rhs).unwrap_or(f64::NAN);
    c.check(f2.residual <= 1e-8 && (m2 - 2.0 * PI).abs() <= 1e-10 * 2.0 * PI, format!("focal ellipse a = (2, 1): residual {:.2e} (<= 1e-8), mass {m2:.12} (2pi)", f2.residual));
    let f3 = focal_ellipse_identity(&[3.0, 2.0, 1.0], 6, 256)?;
    let m3 = f3.test("re_s0_0").map(|t| t.rhs).unwrap_or(f64::NAN);
    c.check(f3.residual <= 1e-8 && (m3 - 8.0 * PI).abs() <= 1e-10 * 8.0 * PI, format!("focal ellipsoid a = (3, 2, 1): residual {:.2e} (<= 1e-8), mass {m3:.12} (8pi)", f3.residual));
    let ov = neumann_oval_identity(1.0, 0.5, 6, 512)?;
    let p = ov.derived[0].1;
    c.check((p - 0.5).abs() <= 1e-10 && ov.residual <= 1e-8, format!("Neumann oval alpha = 1, eps = 0.5: foci (+-{p:.12}, 0), residual {:.2e} (<= 1e-8)", ov.residual));
    let conf = mean_value_identity(&Region::curve(CurveSpec::ellipse(2.0, 1.0)), &Region::curve(CurveSpec::ellipse(7f64.sqrt(), 2.0)), 6, 256)?;
    c.check(conf.residual <= 1e-8, format!("mean value, confocal ellipses: residual {:.2e} (<= 1e-8)", conf.residual));
    let ecc = mean_value_identity(
        &Region::curve(CurveSpec::Circle { radius: 0.5, center: [0.4, 0.0] }),
        &Region::curve(CurveSpec::circle(2.0)),
        6,
        256,
    )?;
    c.check(ecc.residual > 1e-3, format!("mean value, eccentric disks: residual {:.2e} (fails, > 1e-3)", ecc.residual));
    Ok(c)
}

fn c11() -> Result<Criterion> {
    let mut c = Criterion::default();
    let core = build_curve(&CurveSpec::ellipse(1.0, 0.6), 256)?;
    let shell = build_curve(&CurveSpec::ellipse(1.6, 1.2), 256)?;
    let profile = ConductivityProfile::new(8.0, 0.5, 1.0)?;
    let m = pt_coreshell(&core, &shell, &profile)?;
    let sol = solve_coreshell(&core, &shell, &profile)?;
    let fields = [
        FieldSolution::from_coreshell(&core, &shell, &sol, [1.0, 0.0]),
        FieldSolution::from_coreshell(&core, &shell, &sol, [0.0, 1.0]),
    ];
    let r = 10.0 * fields[0].circumradius();
    let fit = dipole_fit(&fields, r, 64)?;
    let mut dev: f64 = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            dev = dev.max((fit[i][j] - m.matrix[i][j]).abs());
        }
    }
    let rel = dev / m.norm();
    c.check(rel <= 1e-4, format!("core-shell ellipses, R = 10 x circumradius = {r:.3}: relative deviation {rel:.2e} (<= 1e-4)"));
    Ok(c)
}

type CriterionFn = fn() -> Result<Criterion>;

fn main() {
    let start = Instant::now();
    let criteria: [(&str, CriterionFn); 11] = [
        ("disk polarization tensor", c1),
        ("Hashin-Shtrikman attainment", c2),
        ("neutral concentric disks", c3),
        ("b_D = 0 coatings", c4),
        ("imperfect bonding", c5),
        ("perturbed-disk coating", c6),
        ("shell problem exactness", c7),
        ("alpha_j identity", c8),
        ("Newtonian-potential formulation", c9),
        ("quadrature identities", c10),
        ("dipole consistency", c11),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        match f() {
            Ok(c) => {
                let ok = c.pass();
                println!("[{}] {:>2} {name} ({:.2} s)", verdict(ok), i + 1, t.elapsed().as_secs_f64());
                for ch in &c.checks {
                    println!("       {} {}", verdict(ch.pass), ch.name);
                }
                if !ok {
                    failed += 1;
                }
            }
            Err(e) => {
                println!("[FAIL] {:>2} {name}: error {e}", i + 1);
                failed += 1;
            }
        }
    }
    println!("{} of {} criteria passed in {:.1} s", criteria.len() - failed, criteria.len(), start.elapsed().as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}
