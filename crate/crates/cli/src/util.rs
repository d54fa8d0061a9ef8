use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use sptdiff::estimators::SigmaMethod;
use sptdiff::teststat::{build_null_table, NullTable};
use sptdiff::RngSeed;

/// Provenance block for emitted data files: tool version, the echoed
/// configuration and the seed. No timestamps, so reruns are byte-identical.
pub fn provenance(command: &str, config: &[(&str, String)]) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# tool=sptdiff v{}", env!("CARGO_PKG_VERSION"));
    let _ = writeln!(s, "# command={command}");
    for (k, v) in config {
        let _ = writeln!(s, "# {k}={v}");
    }
    s
}

pub fn parse_pair(s: &str) -> Result<[f64; 2]> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    anyhow::ensure!(parts.len() == 2, "expected `x,y`, got `{s}`");
    Ok([
        parts[0].parse().with_context(|| format!("bad number `{}`", parts[0]))?,
        parts[1].parse().with_context(|| format!("bad number `{}`", parts[1]))?,
    ])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum MethodArg {
    FirstDiff,
    SecondDiff,
}

impl From<MethodArg> for SigmaMethod {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::FirstDiff => SigmaMethod::FirstDiff,
            MethodArg::SecondDiff => SigmaMethod::SecondDiff,
        }
    }
}

/// Load a table from the cache directory or build it and persist it there.
pub fn load_or_build_table(
    dir: &Path,
    n: usize,
    replicates: usize,
    seed: RngSeed,
    method: SigmaMethod,
) -> Result<NullTable> {
    let path: PathBuf = dir.join(NullTable::cache_file_name(n, replicates, seed, method));
    if path.exists() {
        let table = NullTable::read_from(&path)
            .with_context(|| format!("reading cached table {}", path.display()))?;
        anyhow::ensure!(
            table.n() == n && table.sample_size() == replicates,
            "cached table {} does not match its file name",
            path.display()
        );
        return Ok(table);
    }
    let table = build_null_table(n, replicates, seed, method)?;
    fs::create_dir_all(dir)?;
    table
        .write_to(&path)
        .with_context(|| format!("writing table {}", path.display()))?;
    eprintln!("built calibration table {}", path.display());
    Ok(table)
}
