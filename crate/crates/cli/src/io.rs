use std::fmt;
use std::fs;
use std::io::Read;
use std::path::Path;

use pst_core::hadamard::{catalog, sylvester};
use pst_core::spectral::{certify, SpectralCertificate};
use pst_core::{Error, HadamardMatrix, WeightedGraph};

/// Anything that stops a command, with the exit code it maps to.
#[derive(Debug)]
pub enum Failure {
    Core(Error),
    Io(String),
    Usage(String),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Io(_) | Failure::Usage(_) => 2,
            Failure::Core(e) => match e {
                Error::Capacity(_) | Error::Numeric(_) | Error::Horizon { .. } | Error::Internal(_) => 3,
                _ => 2,
            },
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Core(e) => write!(f, "{e}"),
            Failure::Io(m) => write!(f, "i/o error: {m}"),
            Failure::Usage(m) => write!(f, "usage error: {m}"),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

pub type CliResult<T> = std::result::Result<T, Failure>;

/// Reads a file, or stdin for `-`.
pub fn read_input(path: &str) -> CliResult<String> {
    if path == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::Io(format!("stdin: {e}")))?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| Failure::Io(format!("{path}: {e}")))
    }
}

pub fn write_output(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

/// Two-input commands cannot both read stdin.
pub fn read_pair(a: &str, b: &str) -> CliResult<(String, String)> {
    if a == "-" && b == "-" {
        return Err(Failure::Usage("only one input may come from stdin".into()));
    }
    Ok((read_input(a)?, read_input(b)?))
}

/// A graph or a certificate, distinguished by the `eigenvalues` key.
pub enum Loaded {
    Graph(WeightedGraph),
    Certificate(SpectralCertificate),
}

pub fn load(text: &str) -> CliResult<Loaded> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| Failure::Core(Error::Parse(format!("input JSON: {e}"))))?;
    if value.get("eigenvalues").is_some() {
        Ok(Loaded::Certificate(SpectralCertificate::from_json(text)?))
    } else {
        Ok(Loaded::Graph(WeightedGraph::from_json(text)?))
    }
}

pub fn load_graph(text: &str) -> CliResult<WeightedGraph> {
    Ok(match load(text)? {
        Loaded::Graph(g) => g,
        Loaded::Certificate(c) => c.graph(),
    })
}

/// `catalog:N`, `sylvester:K`, or a file of ±1 rows.
pub fn hadamard_from_spec(spec: &str) -> CliResult<HadamardMatrix> {
    if let Some(n) = spec.strip_prefix("catalog:") {
        let n: usize = n.parse().map_err(|_| Failure::Usage(format!("bad catalog order `{n}`")))?;
        return Ok(catalog(n)?);
    }
    if let Some(k) = spec.strip_prefix("sylvester:") {
        let k: u32 = k.parse().map_err(|_| Failure::Usage(format!("bad Sylvester exponent `{k}`")))?;
        return Ok(sylvester(k)?);
    }
    Ok(read_input(spec)?.parse()?)
}

/// Certificate from the input, certifying graphs against `hadamard` or the catalog entry.
pub fn load_certificate(text: &str, hadamard: Option<&str>) -> CliResult<SpectralCertificate> {
    match load(text)? {
        Loaded::Certificate(c) if hadamard.is_none() => Ok(c),
        Loaded::Certificate(c) => Ok(certify(&c.graph(), &hadamard_from_spec(hadamard.unwrap_or_default())?)?),
        Loaded::Graph(g) => {
            let h = match hadamard {
                Some(spec) => hadamard_from_spec(spec)?,
                None => catalog(g.n())?,
            };
            Ok(certify(&g, &h)?)
        }
    }
}

/// Converts a 1-based vertex to 0-based.
pub fn vertex(v: usize, n: usize) -> CliResult<usize> {
    if v == 0 || v > n {
        return Err(Failure::Usage(format!("vertex {v} outside 1..={n}")));
    }
    Ok(v - 1)
}
