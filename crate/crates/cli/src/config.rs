//! Suite parameters: defaults, the TOML config file and command-line
//! overrides.

use num_complex::Complex64;
use serde::Deserialize;
use std::collections::BTreeMap;
use std::path::Path;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum ConfigError {
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
    #[error("cannot parse complex number `{0}`")]
    Complex(String),
    #[error("invalid field expression `{expr}`: {reason}")]
    Field { expr: String, reason: String },
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("cannot read config `{path}`: {reason}")]
    Io { path: String, reason: String },
    #[error("malformed config: {0}")]
    Toml(String),
}

pub const SUITES: [&str; 10] = [
    "frame-tables",
    "weitzenbock",
    "real-weitzenbock",
    "product-formula",
    "horosphere",
    "parallel",
    "decay",
    "cusp",
    "cone",
    "repvar",
];

/// Tolerance classes used when `--tol` is not given.
pub const JET_TOL: f64 = 1e-9;
pub const ORACLE_TOL: f64 = 1e-5;
pub const QUADRATURE_TOL: f64 = 1e-6;

/// Fully resolved parameters for one suite run.
#[derive(Clone, Debug, PartialEq)]
pub struct SuiteConfig {
    pub suite: String,
    pub seed: u64,
    pub samples: usize,
    /// Overrides every check's default tolerance.
    pub tol: Option<f64>,
    pub tau: Complex64,
    pub b1: Complex64,
    pub b2: Complex64,
    pub k1: f64,
    pub k2: f64,
    pub alpha: f64,
    pub eps: f64,
    pub field: Option<String>,
}

impl SuiteConfig {
    pub fn new(suite: &str) -> Result<Self, ConfigError> {
        if !SUITES.contains(&suite) {
            return Err(ConfigError::UnknownSuite(suite.to_string()));
        }
        Ok(SuiteConfig {
            suite: suite.to_string(),
            seed: 0,
            samples: 20,
            tol: None,
            tau: Complex64::new(0.0, 1.0),
            b1: Complex64::new(1.0, 0.0),
            b2: Complex64::new(0.0, 0.0),
            k1: 0.5,
            k2: 0.25,
            alpha: std::f64::consts::PI,
            eps: 0.5,
            field: None,
        })
    }

    /// Layers `o` on top of `self`; fields left unset in `o` keep their
    /// current value.
    pub fn apply(&mut self, o: &Overrides) -> Result<(), ConfigError> {
        if let Some(v) = o.seed {
            self.seed = v;
        }
        if let Some(v) = o.samples {
            self.samples = v;
        }
        if let Some(v) = o.tol {
            if !(v >= 0.0) {
                return Err(ConfigError::Parameter(format!("tolerance must be non-negative, got {v}")));
            }
            self.tol = Some(v);
        }
        for (dst, src) in [(&mut self.tau, &o.tau), (&mut self.b1, &o.b1), (&mut self.b2, &o.b2)] {
            if let Some(s) = src {
                *dst = parse_complex(s)?;
            }
        }
        for (dst, src) in
            [(&mut self.k1, o.k1), (&mut self.k2, o.k2), (&mut self.alpha, o.alpha), (&mut self.eps, o.eps)]
        {
            if let Some(v) = src {
                *dst = v;
            }
        }
        if let Some(f) = &o.field {
            self.field = Some(f.clone());
        }
        Ok(())
    }

    pub fn tolerance(&self, default: f64) -> f64 {
        self.tol.unwrap_or(default)
    }
}

/// Optional parameters as they appear in a `[suite.<name>]` table or on the
/// command line.
#[derive(Clone, Debug, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub samples: Option<usize>,
    pub tol: Option<f64>,
    pub tau: Option<String>,
    pub b1: Option<String>,
    pub b2: Option<String>,
    pub k1: Option<f64>,
    pub k2: Option<f64>,
    pub alpha: Option<f64>,
    pub eps: Option<f64>,
    pub field: Option<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    #[serde(default)]
    suite: BTreeMap<String, Overrides>,
}

/// Reads the per-suite tables of a config file.
pub fn parse_config(src: &str) -> Result<BTreeMap<String, Overrides>, ConfigError> {
    let file: ConfigFile = toml::from_str(src).map_err(|e| ConfigError::Toml(e.to_string()))?;
    if let Some(name) = file.suite.keys().find(|k| !SUITES.contains(&k.as_str())) {
        return Err(ConfigError::UnknownSuite(name.clone()));
    }
    Ok(file.suite)
}

pub fn load_config(path: &Path) -> Result<BTreeMap<String, Overrides>, ConfigError> {
    let src = std::fs::read_to_string(path)
        .map_err(|e| ConfigError::Io { path: path.display().to_string(), reason: e.to_string() })?;
    parse_config(&src)
}

/// Parses `a`, `bi`, `a+bi`, `a-bi` (with `j` accepted for `i`).
pub fn parse_complex(src: &str) -> Result<Complex64, ConfigError> {
    let s: String = src.chars().filter(|c| !c.is_whitespace()).collect();
    let err = || ConfigError::Complex(src.to_string());
    if s.is_empty() {
        return Err(err());
    }
    let Some(body) = s.strip_suffix('i').or_else(|| s.strip_suffix('j')) else {
        return s.parse::<f64>().map(|re| Complex64::new(re, 0.0)).map_err(|_| err());
    };
    // split before the last sign that is not the leading one or an exponent sign
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let imag = |t: &str| -> Result<f64, ConfigError> {
        match t {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => t.parse::<f64>().map_err(|_| err()),
        }
    };
    match split {
        Some(k) => {
            let re = body[..k].parse::<f64>().map_err(|_| err())?;
            Ok(Complex64::new(re, imag(&body[k..])?))
        }
        None => Ok(Complex64::new(0.0, imag(body)?)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_literals() {
        let c = Complex64::new;
        assert_eq!(parse_complex("1i"), Ok(c(0.0, 1.0)));
        assert_eq!(parse_complex("i"), Ok(c(0.0, 1.0)));
        assert_eq!(parse_complex("-i"), Ok(c(0.0, -1.0)));
        assert_eq!(parse_complex("2"), Ok(c(2.0, 0.0)));
        assert_eq!(parse_complex("0.3+1.2i"), Ok(c(0.3, 1.2)));
        assert_eq!(parse_complex("-0.5 - 2j"), Ok(c(-0.5, -2.0)));
        assert_eq!(parse_complex("1e-3+2e+1i"), Ok(c(1e-3, 20.0)));
        assert_eq!(parse_complex("1-i"), Ok(c(1.0, -1.0)));
        for bad in ["", "x", "1+", "1+2k", "1i+2"] {
            assert!(parse_complex(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn overrides_layer() {
        let mut cfg = SuiteConfig::new("cusp").unwrap();
        cfg.apply(&Overrides { seed: Some(3), b2: Some("1".into()), ..Default::default() }).unwrap();
        assert_eq!((cfg.seed, cfg.b2, cfg.samples), (3, Complex64::new(1.0, 0.0), 20));
        assert!(cfg.apply(&Overrides { tol: Some(-1.0), ..Default::default() }).is_err());
        assert_eq!(SuiteConfig::new("nope"), Err(ConfigError::UnknownSuite("nope".into())));
    }

    #[test]
    fn config_tables() {
        let t = parse_config("[suite.cusp]\ntau = \"0.3+1.2i\"\nsamples = 4\n").unwrap();
        assert_eq!(t["cusp"].samples, Some(4));
        assert!(matches!(parse_config("[suite.bogus]\n"), Err(ConfigError::UnknownSuite(_))));
        assert!(matches!(parse_config("[suite.cusp]\ncolour = 1\n"), Err(ConfigError::Toml(_))));
        assert!(parse_config("").unwrap().is_empty());
    }
}
