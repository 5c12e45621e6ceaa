mod data;
mod pose;
mod structure;

use std::path::Path;

use anyhow::{Context, Result};
use dockeval::geom::RadiusTable;
use dockeval::relax::RelaxConfig;
use dockeval::validity::{BoundsTable, ValidityOptions};
use serde::Serialize;

use crate::args::{RelaxFlags, ValidityFlags};
use crate::usage;

pub use data::{curate, report};
pub use pose::{evaluate, rmsd, validate};
pub use structure::{crossdock, pocket_sim, relax};

/// Write to `path`, or stdout when `None`.
fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => write_file(p, text),
        None => {
            use std::io::Write;
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).with_context(|| format!("creating {}", parent.display()))?;
    }
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn radii(path: Option<&Path>) -> Result<RadiusTable> {
    match path {
        None => Ok(RadiusTable::default()),
        Some(p) => RadiusTable::from_csv(&read_text(p)?).map_err(|e| usage(format!("{}: {e}", p.display()))),
    }
}

fn validity_options(flags: &ValidityFlags) -> Result<ValidityOptions> {
    let mut opts = ValidityOptions::default();
    if let Some(p) = &flags.bounds {
        opts.bounds = BoundsTable::from_csv(&read_text(p)?).map_err(|e| usage(format!("{}: {e}", p.display())))?;
    }
    if flags.radii.is_some() {
        opts = opts.with_radii(radii(flags.radii.as_deref())?);
    }
    Ok(opts)
}

fn relax_config(flags: &RelaxFlags) -> Result<RelaxConfig> {
    let mut c = RelaxConfig::default();
    let set = |dst: &mut f64, v: Option<f64>| {
        if let Some(v) = v {
            *dst = v;
        }
    };
    set(&mut c.k_backbone, flags.k_backbone);
    set(&mut c.k_bond, flags.k_bond);
    set(&mut c.k_rep, flags.k_rep);
    set(&mut c.repulsion_margin, flags.repulsion_margin);
    set(&mut c.gradient_tolerance, flags.gradient_tolerance);
    if let Some(n) = flags.max_iterations {
        c.max_iterations = n;
    }
    c.validate().map_err(|e| usage(e.to_string()))?;
    Ok(c)
}

/// Run metadata kept out of the data artifacts.
#[derive(Serialize)]
struct Sidecar<'a> {
    tool: &'static str,
    version: &'static str,
    subcommand: &'a str,
    entries: usize,
    failures: usize,
    jobs: usize,
}

fn write_sidecar(data_path: &Path, subcommand: &str, entries: usize, failures: usize, jobs: usize) -> Result<()> {
    let mut name = data_path.file_name().unwrap_or_default().to_os_string();
    name.push(".meta.json");
    let meta = Sidecar {
        tool: "dockeval",
        version: env!("CARGO_PKG_VERSION"),
        subcommand,
        entries,
        failures,
        jobs,
    };
    write_file(&data_path.with_file_name(name), &(serde_json::to_string_pretty(&meta)? + "\n"))
}

fn csv_string<T: Serialize>(rows: &[T], header: &[&str]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    if rows.is_empty() {
        w.write_record(header)?;
    }
    for r in rows {
        w.serialize(r)?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

fn check_dir(dir: &Path) -> Result<()> {
    if !dir.is_dir() {
        return Err(usage(format!("{} is not a directory", dir.display())));
    }
    Ok(())
}
