//! Command-line front end: one JSON problem spec in, JSON results out.
//!
//! Exit status is 0 on success, 2 for invalid input and 3 for numerical
//! failures.

use clap::{Parser, Subcommand};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fs;
use std::path::{Path, PathBuf};

use crate::ellipsoid_potentials::{alpha_coefficients, odp_residual, odp_w, OdpGeometry, OdpResidual, OdpSolution};
use crate::error::{invalid, Error, Result};
use crate::fields::{
    decay_exponent, grid_sample, solve_imperfect_exterior, DecayReport, FieldSolution, FieldValue,
    SpectralExteriorSolution,
};
use crate::geometry::{build_curve, curve_area, ConformalMap, CurveSpec, TrigPoly};
use crate::neutrality::{
    beta_disk, beta_weakly_neutral, confocal_matrix_conductivity, construct_coating_bd0, find_coating_perturbed_disk,
    solve_lc_disk, BondingParameter, CoatingResult, CoatingSearch, ConfocalConductivity, LcDiskSolution, NewtonOptions,
};
use crate::polarization::{
    conductivity_serde, hs_check, pt_coreshell, pt_simple, solve_coreshell, solve_simple, ConductivityProfile,
    HsReport, PolarizationTensor,
};
use crate::quadrature_domains::{
    check_newtonian_pair, focal_ellipse_identity, mean_value_identity, neumann_oval_identity, NewtonianCheck,
    QuadratureReport, Region,
};

pub const DEFAULT_NODES: usize = 512;
pub const DEFAULT_MODES: usize = 64;
pub const DEFAULT_TOL: f64 = 1e-8;

fn nodes() -> usize {
    DEFAULT_NODES
}
fn modes() -> usize {
    DEFAULT_MODES
}
fn tol() -> f64 {
    DEFAULT_TOL
}
fn degree() -> usize {
    6
}
fn directions() -> usize {
    64
}
fn samples() -> usize {
    200
}

#[derive(Parser, Debug)]
#[command(name = "neutral", version, about = "Polarization tensors and neutral inclusions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Problem spec (JSON)
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    /// Result file (JSON); stdout when omitted
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Grid samples (CSV), for `field` specs with a grid
    #[arg(long, global = true)]
    pub grid: Option<PathBuf>,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    /// Polarization tensor of a simple or core-shell inclusion
    Pt,
    /// Explicit weakly neutral coating of a b_D = 0 perfect conductor
    Coat,
    /// Weakly neutral bonding parameter for a perfect conductor
    Beta,
    /// Disk with an imperfect interface
    LcDisk,
    /// Potential at points and optionally on a grid
    Field,
    /// Far-field decay exponent
    Decay,
    /// Shell problem for confocal ellipsoids or concentric balls
    Odp,
    /// Quadrature identities and the Newtonian-potential check
    Quad,
    /// Hashin-Shtrikman trace bounds
    Hs,
    /// Newton search for a weakly neutral coating of a perturbed disk
    NewtonCoat,
}

/// Inclusion whose field is evaluated by `field` and `decay`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum InclusionSpec {
    Simple {
        curve: CurveSpec,
        #[serde(with = "conductivity_serde")]
        k: f64,
    },
    Coreshell { core: CurveSpec, shell: CurveSpec, profile: ConductivityProfile },
    /// Perfect conductor with an imperfect interface; the weakly neutral
    /// parameter unless a constant `beta` is given.
    Imperfect { map: ConformalMap, #[serde(default)] beta: Option<f64> },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PtInput {
    pub curve: CurveSpec,
    #[serde(default, with = "conductivity_serde::option")]
    pub k: Option<f64>,
    #[serde(default)]
    pub shell: Option<CurveSpec>,
    #[serde(default)]
    pub profile: Option<ConductivityProfile>,
    #[serde(default = "nodes")]
    pub nodes: usize,
}

#[derive(Debug, Serialize)]
pub struct PtOutput {
    pub tensor: PolarizationTensor,
    pub relative_norm: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoatInput {
    pub map: ConformalMap,
    pub sigma_s: f64,
    #[serde(default = "nodes")]
    pub nodes: usize,
}

#[derive(Debug, Serialize)]
pub struct CoatOutput {
    pub coating: CoatingResult,
    pub tensor: PolarizationTensor,
    /// ||M||_F / |Omega|
    pub relative_norm: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BetaInput {
    pub map: ConformalMap,
    #[serde(default = "nodes")]
    pub nodes: usize,
    #[serde(default = "modes")]
    pub modes: usize,
}

#[derive(Debug, Serialize)]
pub struct BetaCheck {
    pub alpha: Complex64,
    pub alpha1: Complex64,
    pub alpha1_norm: f64,
}

#[derive(Debug, Serialize)]
pub struct BetaOutput {
    pub bonding: BondingParameter,
    pub checks: Vec<BetaCheck>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LcDiskInput {
    pub r: f64,
    #[serde(with = "conductivity_serde")]
    pub sigma_c: f64,
    pub sigma_m: f64,
    #[serde(with = "conductivity_serde")]
    pub beta: f64,
}

#[derive(Debug, Serialize)]
pub struct LcDiskOutput {
    pub solution: LcDiskSolution,
    #[serde(with = "conductivity_serde")]
    pub neutral_beta: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    /// [xmin, xmax, ymin, ymax]
    pub bbox: [f64; 4],
    pub resolution: [usize; 2],
    #[serde(default)]
    pub exterior_only: bool,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldInput {
    pub inclusion: InclusionSpec,
    pub a: [f64; 2],
    #[serde(default)]
    pub points: Vec<[f64; 2]>,
    #[serde(default)]
    pub grid: Option<GridSpec>,
    #[serde(default = "nodes")]
    pub nodes: usize,
    #[serde(default = "modes")]
    pub modes: usize,
}

#[derive(Debug, Serialize)]
pub struct FieldOutput {
    pub a: [f64; 2],
    pub points: Vec<[f64; 2]>,
    pub values: Vec<FieldValue>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spectral: Option<SpectralExteriorSolution>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid_cells: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecayInput {
    pub inclusion: InclusionSpec,
    pub a: [f64; 2],
    pub radii: [f64; 2],
    #[serde(default = "directions")]
    pub directions: usize,
    #[serde(default = "nodes")]
    pub nodes: usize,
    #[serde(default = "modes")]
    pub modes: usize,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShellConductivities {
    #[serde(with = "conductivity_serde")]
    pub sigma_c: f64,
    pub sigma_s: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OdpInput {
    pub geometry: OdpGeometry,
    #[serde(default = "samples")]
    pub samples: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub conductivity: Option<ShellConductivities>,
}

#[derive(Debug, Serialize)]
pub struct OdpOutput {
    pub solution: OdpSolution,
    pub alpha: [f64; 3],
    pub residual: OdpResidual,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub conductivity: Option<ConfocalConductivity>,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "identity", rename_all = "snake_case", deny_unknown_fields)]
pub enum QuadInput {
    NeumannOval {
        alpha: f64,
        epsilon: f64,
        #[serde(default = "degree")]
        degree: usize,
        #[serde(default = "nodes")]
        nodes: usize,
    },
    FocalEllipse {
        axes: Vec<f64>,
        #[serde(default = "degree")]
        degree: usize,
        #[serde(default = "nodes")]
        nodes: usize,
    },
    MeanValue {
        inner: Region,
        outer: Region,
        #[serde(default = "degree")]
        degree: usize,
        #[serde(default = "nodes")]
        nodes: usize,
    },
    /// w = |Omega|(N_Omega - N_D) for the core c2 and shell c2 + rho0 + shift
    Newtonian {
        c2: [f64; 3],
        rho0: f64,
        #[serde(default)]
        shift: [f64; 3],
        #[serde(default = "samples")]
        samples: usize,
        #[serde(default)]
        seed: u64,
    },
}

#[derive(Debug, Serialize)]
#[serde(untagged)]
pub enum QuadOutput {
    Report(QuadratureReport),
    Newtonian(NewtonianCheck),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HsInput {
    pub curve: CurveSpec,
    pub k: f64,
    #[serde(default = "nodes")]
    pub nodes: usize,
}

#[derive(Debug, Serialize)]
pub struct HsOutput {
    pub tensor: PolarizationTensor,
    pub area: f64,
    pub report: HsReport,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NewtonCoatInput {
    pub h: TrigPoly,
    #[serde(with = "conductivity_serde")]
    pub sigma_c: f64,
    pub sigma_s: f64,
    pub sigma_m: f64,
    pub r_i: f64,
    #[serde(default = "nodes")]
    pub nodes: usize,
    #[serde(default = "tol")]
    pub tol: f64,
    #[serde(default)]
    pub max_iter: Option<usize>,
}

fn read_spec<T: for<'de> Deserialize<'de>>(path: Option<&Path>) -> Result<T> {
    let path = path.ok_or_else(|| invalid("--input is required"))?;
    let text = fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| invalid(format!("{}: {e}", path.display())))
}

fn to_json<T: Serialize>(v: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s)
}

/// Builds the field of an inclusion for background a.
pub fn build_field(inc: &InclusionSpec, a: [f64; 2], nodes: usize, modes: usize) -> Result<FieldSolution> {
    match inc {
        InclusionSpec::Simple { curve, k } => {
            let c = build_curve(curve, nodes)?;
            Ok(FieldSolution::from_simple(&c, &solve_simple(&c, *k)?, a))
        }
        InclusionSpec::Coreshell { core, shell, profile } => {
            let d = build_curve(core, nodes)?;
            let o = build_curve(shell, nodes)?;
            Ok(FieldSolution::from_coreshell(&d, &o, &solve_coreshell(&d, &o, profile)?, a))
        }
        InclusionSpec::Imperfect { map, beta } => {
            let bp = match beta {
                Some(v) => BondingParameter::constant(map, *v, nodes)?,
                None => beta_weakly_neutral(map, nodes)?,
            };
            let alpha = Complex64::new(a[0], -a[1]);
            Ok(FieldSolution::from_spectral(map, solve_imperfect_exterior(map, &bp, alpha, modes)?))
        }
    }
}

fn run_pt(spec: PtInput) -> Result<PtOutput> {
    let core = build_curve(&spec.curve, spec.nodes)?;
    let (tensor, area) = match (spec.shell, spec.profile, spec.k) {
        (Some(shell), Some(profile), None) => {
            let o = build_curve(&shell, spec.nodes)?;
            (pt_coreshell(&core, &o, &profile)?, curve_area(&o))
        }
        (None, None, Some(k)) => (pt_simple(&core, k)?, curve_area(&core)),
        _ => return Err(invalid("give either k, or shell and profile")),
    };
    Ok(PtOutput { relative_norm: tensor.norm() / area, tensor })
}

fn run_coat(spec: CoatInput) -> Result<CoatOutput> {
    let coating = construct_coating_bd0(&spec.map, spec.sigma_s)?;
    let (d, o) = coating.curves(spec.nodes)?;
    let tensor = pt_coreshell(&d, &o, &coating.profile())?;
    Ok(CoatOutput { relative_norm: tensor.norm() / curve_area(&o), coating, tensor })
}

fn run_beta(spec: BetaInput) -> Result<BetaOutput> {
    let bonding = beta_weakly_neutral(&spec.map, spec.nodes)?;
    let mut checks = Vec::new();
    for alpha in [Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)] {
        let s = solve_imperfect_exterior(&spec.map, &bonding, alpha, spec.modes)?;
        checks.push(BetaCheck { alpha, alpha1: s.alpha1, alpha1_norm: s.alpha1.norm() });
    }
    Ok(BetaOutput { bonding, checks })
}

fn run_odp(spec: OdpInput) -> Result<OdpOutput> {
    let solution = odp_w(spec.geometry)?;
    let pair = spec.geometry.as_pair();
    let residual = odp_residual(&solution, &pair, spec.samples, spec.seed);
    let conductivity = match spec.conductivity {
        Some(c) => Some(confocal_matrix_conductivity(pair.c2, pair.rho0, c.sigma_c, c.sigma_s)?),
        None => None,
    };
    Ok(OdpOutput { alpha: alpha_coefficients(pair.rho0, &pair.c2)?, solution, residual, conductivity })
}

fn run_quad(spec: QuadInput) -> Result<QuadOutput> {
    Ok(match spec {
        QuadInput::NeumannOval { alpha, epsilon, degree, nodes } => {
            QuadOutput::Report(neumann_oval_identity(alpha, epsilon, degree, nodes)?)
        }
        QuadInput::FocalEllipse { axes, degree, nodes } => QuadOutput::Report(focal_ellipse_identity(&axes, degree, nodes)?),
        QuadInput::MeanValue { inner, outer, degree, nodes } => {
            QuadOutput::Report(mean_value_identity(&inner, &outer, degree, nodes)?)
        }
        QuadInput::Newtonian { c2, rho0, shift, samples, seed } => {
            let shell = [c2[0] + rho0 + shift[0], c2[1] + rho0 + shift[1], c2[2] + rho0 + shift[2]];
            QuadOutput::Newtonian(check_newtonian_pair(c2, shell, samples, samples, seed)?)
        }
    })
}

fn run_newton(spec: NewtonCoatInput) -> Result<CoatingSearch> {
    let mut options = NewtonOptions { nodes: spec.nodes, tol: spec.tol, ..NewtonOptions::default() };
    if let Some(m) = spec.max_iter {
        options.max_iter = m;
    }
    find_coating_perturbed_disk(&spec.h, spec.sigma_c, spec.sigma_s, spec.sigma_m, spec.r_i, &options)
}

/// Runs one subcommand and returns the JSON text; grid CSV is written to
/// `grid` when the spec asks for one.
pub fn execute(command: Command, input: Option<&Path>, grid: Option<&Path>) -> Result<String> {
    match command {
        Command::Pt => to_json(&run_pt(read_spec(input)?)?),
        Command::Coat => to_json(&run_coat(read_spec(input)?)?),
        Command::Beta => to_json(&run_beta(read_spec(input)?)?),
        Command::LcDisk => {
            let s: LcDiskInput = read_spec(input)?;
            to_json(&LcDiskOutput {
                solution: solve_lc_disk(s.r, s.sigma_c, s.sigma_m, s.beta)?,
                neutral_beta: beta_disk(s.r, s.sigma_c, s.sigma_m)?,
            })
        }
        Command::Field => {
            let s: FieldInput = read_spec(input)?;
            let sol = build_field(&s.inclusion, s.a, s.nodes, s.modes)?;
            let values = sol.evaluate(&s.points)?;
            let mut grid_cells = None;
            match (&s.grid, grid) {
                (Some(g), Some(path)) => {
                    let fg = grid_sample(&sol, g.bbox, (g.resolution[0], g.resolution[1]), g.exterior_only)?;
                    let mut buf = Vec::new();
                    fg.write_csv(&mut buf)?;
                    fs::write(path, buf)?;
                    grid_cells = Some(fg.cells.len());
                }
                (Some(_), None) => return Err(invalid("spec has a grid but --grid was not given")),
                (None, Some(_)) => return Err(invalid("--grid given but the spec has no grid")),
                (None, None) => {}
            }
            let spectral = sol.spectral().cloned();
            to_json(&FieldOutput { a: s.a, points: s.points, values, spectral, grid_cells })
        }
        Command::Decay => {
            let s: DecayInput = read_spec(input)?;
            let sol = build_field(&s.inclusion, s.a, s.nodes, s.modes)?;
            let r: DecayReport = decay_exponent(&sol, (s.radii[0], s.radii[1]), s.directions)?;
            to_json(&r)
        }
        Command::Odp => to_json(&run_odp(read_spec(input)?)?),
        Command::Quad => to_json(&run_quad(read_spec(input)?)?),
        Command::Hs => {
            let s: HsInput = read_spec(input)?;
            let c = build_curve(&s.curve, s.nodes)?;
            let tensor = pt_simple(&c, s.k)?;
            let area = curve_area(&c);
            let report = hs_check(&tensor, s.k, area)?;
            to_json(&HsOutput { tensor, area, report })
        }
        Command::NewtonCoat => to_json(&run_newton(read_spec(input)?)?),
    }
}

pub fn exit_code(e: &Error) -> i32 {
    if e.is_numerical() {
        3
    } else {
        2
    }
}

/// Parses argv, runs, writes output and returns the exit status.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let result = execute(cli.command, cli.input.as_deref(), cli.grid.as_deref()).and_then(|json| match &cli.output {
        Some(p) => fs::write(p, json).map_err(Error::from),
        None => {
            print!("{json}");
            Ok(())
        }
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
