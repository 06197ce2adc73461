use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::config::{InitialDatum, RunConfig};
use super::init::{init_example_dirac, init_from_file, init_single_mode, random_perp_state};
use crate::basis::{write_state_csv, ModeIndex, SpectralState};
use crate::coupling::{build_tensor, load_or_build, resolve_cache_dir, CouplingTensor};
use crate::solver::{check_smallness, diagnostics, integrate_numeric, DiagnosticsRow, SmallnessCheck};
use crate::Result;

/// What a run produced, printed as JSON by the binary.
#[derive(Debug, Clone, Serialize)]
pub struct RunSummary {
    pub truncation: u32,
    pub steps: usize,
    pub tensor_source: String,
    pub smallness: SmallnessCheck,
    pub final_row: DiagnosticsRow,
}

pub fn build_initial(cfg: &RunConfig) -> Result<SpectralState> {
    let n = cfg.truncation;
    match &cfg.initial {
        InitialDatum::DiracExample => init_example_dirac(n),
        InitialDatum::SingleMode { n: mn, l, m, re, im } => {
            init_single_mode(ModeIndex::new(*mn, *l, *m)?, Complex64::new(*re, *im), n)
        }
        InitialDatum::File { path } => {
            let loaded = init_from_file(path, n)?;
            if !loaded.in_null_complement {
                eprintln!("warning: {} has a nonzero null-space component", path.display());
            }
            Ok(loaded.state)
        }
        InitialDatum::Random { seed, s2_norm, tail_decay } => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            random_perp_state(&mut rng, n, *s2_norm, *tail_decay)
        }
    }
}

fn obtain_tensor(cfg: &RunConfig) -> Result<(CouplingTensor, String)> {
    match resolve_cache_dir(cfg.tensor_cache_dir.as_deref()) {
        Some(dir) => {
            let (tensor, status) = load_or_build(&dir, cfg.truncation)?;
            Ok((tensor, status.label().to_string()))
        }
        None => Ok((build_tensor(cfg.truncation)?, "built (no cache)".to_string())),
    }
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)?;
        }
    }
    Ok(BufWriter::new(File::create(path)?))
}

/// Runs a configured simulation and writes its outputs.
pub fn run(cfg: &RunConfig) -> Result<RunSummary> {
    cfg.validate()?;
    let (tensor, tensor_source) = obtain_tensor(cfg)?;
    let init = build_initial(cfg)?;
    let smallness = check_smallness(&init, cfg.c1);
    if !smallness.pass {
        eprintln!(
            "warning: ‖S̃₂g₀‖ = {:.6} exceeds c0 = {:.6} for c1 = {}; the decay estimate is not guaranteed",
            smallness.s2, smallness.c0, cfg.c1
        );
    }
    let series = integrate_numeric(&init, &tensor, &cfg.integrator())?;
    let rows = diagnostics(&series, cfg.alpha, cfg.c1)?;

    let mut out = create(&cfg.output.diagnostics_csv)?;
    writeln!(out, "{}", DiagnosticsRow::CSV_HEADER)?;
    for row in &rows {
        writeln!(out, "{}", row.csv_line())?;
    }
    out.flush()?;

    let (_, last) = series.last().expect("series contains the initial state");
    write_state_csv(last, create(&cfg.output.final_state_csv)?)?;

    if let Some(path) = &cfg.output.trajectory_csv {
        let mut out = create(path)?;
        writeln!(out, "t,n,l,m,re,im")?;
        for (t, state) in &series {
            for (mode, z) in state.iter() {
                writeln!(out, "{:.16e},{},{},{},{:.16e},{:.16e}", t, mode.n, mode.l, mode.m, z.re, z.im)?;
            }
        }
        out.flush()?;
    }

    Ok(RunSummary {
        truncation: cfg.truncation,
        steps: series.len() - 1,
        tensor_source,
        smallness,
        final_row: *rows.last().expect("nonempty"),
    })
}
