//! Command execution: dispatch a resolved run to the physics modules and
//! assemble the CSV or JSON table. Every JSON output embeds the fully
//! resolved configuration under `"config"` so it can be replayed through
//! `--config`.

use anyhow::{anyhow, Result};
use serde_json::json;

use gaugekit_core::dicke_finite::{self, DickeFiniteParams};
use gaugekit_core::dicke_thermo::{self, ThermoParams};
use gaugekit_core::dipole1d;
use gaugekit_core::hopfield;
use gaugekit_core::Gauge;

use crate::config::{
    DickeFiniteRun, DickeThermoRun, DipoleKernelRun, DipoleSolveRun, HopfieldRun, OutputFormat,
};
use crate::output::{CsvField, CsvTable};

fn to_json_pretty(value: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

pub fn run_dipole_solve(run: &DipoleSolveRun) -> Result<String> {
    let (spectrum, used_spec) = dipole1d::solve_bound_states_auto(&run.spec, run.states, 6)
        .map_err(|e| anyhow!("{e}"))?;
    if used_spec.grid != run.spec.grid {
        eprintln!(
            "note: grid extended to [{}, {}] x {} points to keep boundary amplitudes below 1e-6",
            used_spec.grid.x_min, used_spec.grid.x_max, used_spec.grid.n_points
        );
    }
    match run.format {
        OutputFormat::Csv => {
            let mut t = CsvTable::new("k,energy,d_k0");
            for k in 0..spectrum.n_states() {
                t.row(&[
                    CsvField::Int(k as i64),
                    CsvField::Float(spectrum.energies()[k]),
                    CsvField::Float(spectrum.dipole(k, 0)),
                ]);
            }
            Ok(t.finish())
        }
        OutputFormat::Json => {
            let config = json!({
                "command": "dipole-solve",
                "beta": beta_of(&used_spec),
                "gamma": gamma_of(&used_spec),
                "ek": used_spec.kinetic_coeff,
                "harmonic": matches!(used_spec.potential, dipole1d::Potential::Harmonic),
                "xmin": used_spec.grid.x_min,
                "xmax": used_spec.grid.x_max,
                "npoints": used_spec.grid.n_points,
                "states": run.states,
                "format": "json",
            });
            let d_k0: Vec<f64> = (0..spectrum.n_states()).map(|k| spectrum.dipole(k, 0)).collect();
            Ok(to_json_pretty(&json!({
                "config": config,
                "energies": spectrum.energies(),
                "d_k0": d_k0,
                "grid_converged": spectrum.grid_converged(),
            })))
        }
    }
}

fn beta_of(spec: &dipole1d::PotentialSpec) -> f64 {
    match spec.potential {
        dipole1d::Potential::QuarticWell { beta, .. } => beta,
        dipole1d::Potential::Harmonic => 0.0,
    }
}

fn gamma_of(spec: &dipole1d::PotentialSpec) -> f64 {
    match spec.potential {
        dipole1d::Potential::QuarticWell { gamma, .. } => gamma,
        dipole1d::Potential::Harmonic => 0.0,
    }
}

pub fn run_dipole_kernel(run: &DipoleKernelRun) -> Result<String> {
    let (spectrum, used_spec) = dipole1d::solve_bound_states_auto(&run.spec, run.levels, 6)
        .map_err(|e| anyhow!("{e}"))?;
    if used_spec.grid != run.spec.grid {
        eprintln!(
            "note: grid extended to [{}, {}] x {} points to keep boundary amplitudes below 1e-6",
            used_spec.grid.x_min, used_spec.grid.x_max, used_spec.grid.n_points
        );
    }
    let kernel = dipole1d::nonlocal_kernel(&spectrum, &used_spec, run.levels)
        .map_err(|e| anyhow!("{e}"))?;
    match run.format {
        OutputFormat::Csv => {
            let n = kernel.grid.n_points;
            let mut t = CsvTable::new("x,xprime,W");
            for i in 0..n {
                for j in 0..n {
                    t.row(&[
                        CsvField::Float(kernel.grid.point(i)),
                        CsvField::Float(kernel.grid.point(j)),
                        CsvField::Float(kernel.kernel[(i, j)]),
                    ]);
                }
            }
            Ok(t.finish())
        }
        OutputFormat::Json => {
            let config = json!({
                "command": "dipole-kernel",
                "beta": beta_of(&used_spec),
                "gamma": gamma_of(&used_spec),
                "ek": used_spec.kinetic_coeff,
                "xmin": used_spec.grid.x_min,
                "xmax": used_spec.grid.x_max,
                "npoints": used_spec.grid.n_points,
                "levels": run.levels,
                "format": "json",
            });
            let n = kernel.grid.n_points;
            let x: Vec<f64> = kernel.grid.points().collect();
            let rows: Vec<Vec<f64>> = (0..n)
                .map(|i| (0..n).map(|j| kernel.kernel[(i, j)]).collect())
                .collect();
            Ok(to_json_pretty(&json!({
                "config": config,
                "n_levels": kernel.n_levels,
                "x": x,
                "w": rows,
                "off_diagonal_fraction_w3": kernel.off_diagonal_fraction(3),
            })))
        }
    }
}

pub fn run_dicke_finite(run: &DickeFiniteRun) -> Result<String> {
    let params: DickeFiniteParams = if run.explicit_nmax {
        run.params
    } else {
        let (converged, certified) =
            dicke_finite::converge_cutoff(&run.params, run.levels).map_err(|e| anyhow!("{e}"))?;
        if !certified {
            eprintln!(
                "note: dimension cap reached at n_max = {}; levels may not be fully converged",
                converged.n_max
            );
        }
        converged
    };
    let spectra = dicke_finite::gauge_spectra(&params, run.levels).map_err(|e| anyhow!("{e}"))?;
    match run.format {
        OutputFormat::Csv => {
            let mut t = CsvTable::new("level,standard_cg,gi_cg,dg");
            for i in 0..run.levels {
                t.row(&[
                    CsvField::Int(i as i64),
                    CsvField::Float(spectra.standard_cg[i]),
                    CsvField::Float(spectra.gi_cg[i]),
                    CsvField::Float(spectra.dg[i]),
                ]);
            }
            Ok(t.finish())
        }
        OutputFormat::Json => {
            let config = json!({
                "command": "dicke-finite",
                "n": params.n_dipoles,
                "eta": params.eta,
                "wc": params.omega_c,
                "wx": params.omega_x,
                "alpha": params.alpha,
                "diamagnetic": params.diamagnetic,
                "nmax": params.n_max,
                "levels": run.levels,
                "dim_cap": params.dim_cap,
                "format": "json",
            });
            let report = |gauge: &str, eigenvalues: &[f64]| {
                json!({
                    "params": params,
                    "gauge": gauge,
                    "eigenvalues": eigenvalues,
                    "converged": spectra.converged,
                })
            };
            Ok(to_json_pretty(&json!({
                "config": config,
                "reports": [
                    report("standard-coulomb", &spectra.standard_cg),
                    report("gi-coulomb", &spectra.gi_cg),
                    report("dipole", &spectra.dg),
                ],
            })))
        }
    }
}

pub fn run_dicke_thermo(run: &DickeThermoRun) -> Result<String> {
    let table = dicke_thermo::sweep_branches(&run.lambda_grid, run.omega_c, run.omega_x, run.alpha)
        .map_err(|e| anyhow!("{e}"))?;
    let printed = |lambda: f64| -> Result<[f64; 6]> {
        let mut p = ThermoParams::new(run.omega_c, run.omega_x, lambda, Gauge::GiCoulomb);
        p.alpha = run.alpha;
        let cg = dicke_thermo::closed_form_cg(&p).map_err(|e| anyhow!("{e}"))?;
        p.gauge = Gauge::StandardCoulomb;
        let scg = dicke_thermo::closed_form_cg(&p).map_err(|e| anyhow!("{e}"))?;
        p.gauge = Gauge::Dipole;
        let dg = dicke_thermo::closed_form_dg(&p).map_err(|e| anyhow!("{e}"))?;
        Ok([cg.lower, cg.upper, scg.lower, scg.upper, dg.lower, dg.upper])
    };
    match run.format {
        OutputFormat::Csv => {
            let base = "lambda,w_dg_lo,w_dg_hi,w_cg_lo,w_cg_hi,w_scg_lo,w_scg_hi";
            let header = if run.printed_forms {
                format!("{base},w_cgp_lo,w_cgp_hi,w_scgp_lo,w_scgp_hi,w_dgp_lo,w_dgp_hi")
            } else {
                base.to_string()
            };
            let mut t = CsvTable::new(&header);
            for row in &table.rows {
                let mut fields = vec![
                    CsvField::Float(row.lambda),
                    CsvField::Float(row.w_dg_lo),
                    CsvField::Float(row.w_dg_hi),
                    CsvField::Float(row.w_cg_lo),
                    CsvField::Float(row.w_cg_hi),
                    CsvField::Float(row.w_scg_lo),
                    CsvField::Float(row.w_scg_hi),
                ];
                if run.printed_forms {
                    for v in printed(row.lambda)? {
                        fields.push(CsvField::Float(v));
                    }
                }
                t.row(&fields);
            }
            Ok(t.finish())
        }
        OutputFormat::Json => {
            let config = json!({
                "command": "dicke-thermo",
                "wc": run.omega_c,
                "wx": run.omega_x,
                "alpha": run.alpha,
                "lambda": run.lambda_spec,
                "printed_forms": run.printed_forms,
                "format": "json",
            });
            Ok(to_json_pretty(&json!({
                "config": config,
                "omega_c": table.omega_c,
                "omega_x": table.omega_x,
                "alpha": table.alpha,
                "rows": table.rows,
            })))
        }
    }
}

pub fn run_hopfield(run: &HopfieldRun) -> Result<String> {
    let rows = hopfield::polariton_dispersion(&run.params).map_err(|e| anyhow!("{e}"))?;
    match run.format {
        OutputFormat::Csv => {
            let mut t = CsvTable::new("omega_k,w_lower,w_upper,degeneracy");
            for r in &rows {
                t.row(&[
                    CsvField::Float(r.omega_k),
                    CsvField::Float(r.lower),
                    CsvField::Float(r.upper),
                    CsvField::Int(r.degeneracy as i64),
                ]);
            }
            Ok(t.finish())
        }
        OutputFormat::Json => {
            let config = json!({
                "command": "hopfield",
                "w0": run.params.omega0,
                "beta": run.params.beta,
                "wk": run.params.dispersion,
                "format": "json",
            });
            Ok(to_json_pretty(&json!({
                "config": config,
                "omega0": run.params.omega0,
                "beta": run.params.beta,
                "lt_split": run.params.lt_split_frequency(),
                "rows": rows,
            })))
        }
    }
}

