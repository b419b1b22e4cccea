use std::path::Path;

use barnes::{BetaParams, GammaParams, Mode, QuadratureSpec, SelbergParams};
use num_complex::Complex64;
use serde::Deserialize;
use serde_json::Value;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(String),
    #[error("evaluation: {0}")]
    Eval(#[from] barnes::Error),
    #[error("output: {0}")]
    Output(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Eval(_) | CliError::Output(_) => 3,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

fn config<E: std::fmt::Display>(context: &str) -> impl FnOnce(E) -> CliError + '_ {
    move |e| CliError::Config(format!("{context}: {e}"))
}

/// A scalar, a list of reals and `[re, im]` pairs, or `{start, stop, count}`.
/// A single complex point is written `[[re, im]]`.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum GridSpec {
    Real(f64),
    List(Vec<Point>),
    Range { start: f64, stop: f64, count: usize },
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(untagged)]
enum Point {
    Real(f64),
    Complex([f64; 2]),
}

impl Point {
    fn value(self) -> Complex64 {
        match self {
            Point::Real(x) => Complex64::new(x, 0.0),
            Point::Complex([re, im]) => Complex64::new(re, im),
        }
    }
}

/// Grid points in input order, and whether every point was given as a real number.
#[derive(Debug, Clone)]
pub struct Grid {
    pub points: Vec<Complex64>,
    pub real: bool,
}

impl Grid {
    fn from_spec(spec: GridSpec) -> CliResult<Self> {
        let (points, real) = match spec {
            GridSpec::Real(x) => (vec![Complex64::new(x, 0.0)], true),
            GridSpec::List(list) => {
                let real = list.iter().all(|p| matches!(p, Point::Real(_)));
                (list.into_iter().map(Point::value).collect(), real)
            }
            GridSpec::Range { start, stop, count } => {
                if count == 0 {
                    return Err(CliError::Config("grid count must be positive".into()));
                }
                let step = if count > 1 { (stop - start) / (count - 1) as f64 } else { 0.0 };
                ((0..count).map(|k| Complex64::new(start + step * k as f64, 0.0)).collect(), true)
            }
        };
        Ok(Self { points, real })
    }

    pub fn reals(&self, name: &str) -> CliResult<Vec<f64>> {
        if !self.real {
            return Err(CliError::Config(format!("`{name}` must be real")));
        }
        Ok(self.points.iter().map(|z| z.re).collect())
    }
}

/// The parsed `--params` file.
#[derive(Debug, Clone)]
pub struct ParamsFile {
    value: Value,
}

impl ParamsFile {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(config(&path.display().to_string()))?;
        let value: Value = serde_json::from_str(&text).map_err(config(&path.display().to_string()))?;
        if !value.is_object() {
            return Err(CliError::Config("the params file must hold a JSON object".into()));
        }
        Ok(Self { value })
    }

    pub fn empty() -> Self {
        Self {
            value: Value::Object(Default::default()),
        }
    }

    pub fn has(&self, key: &str) -> bool {
        self.value.get(key).is_some()
    }

    pub fn get<T: for<'de> Deserialize<'de>>(&self, key: &str) -> CliResult<Option<T>> {
        match self.value.get(key) {
            None | Some(Value::Null) => Ok(None),
            Some(v) => serde_json::from_value(v.clone()).map(Some).map_err(config(key)),
        }
    }

    pub fn require<T: for<'de> Deserialize<'de>>(&self, key: &str) -> CliResult<T> {
        self.get(key)?.ok_or_else(|| CliError::Config(format!("missing `{key}`")))
    }

    pub fn grid(&self, key: &str) -> CliResult<Grid> {
        Grid::from_spec(self.require(key)?)
    }

    pub fn gamma(&self) -> CliResult<GammaParams> {
        GammaParams::new(self.get("a")?.unwrap_or_default()).map_err(config("a"))
    }

    pub fn beta(&self) -> CliResult<BetaParams> {
        let mode = self.get::<Mode>("mode")?.unwrap_or(Mode::Probabilistic);
        BetaParams::new(self.gamma()?, self.require("b")?, mode).map_err(config("b"))
    }

    pub fn selberg(&self) -> CliResult<SelbergParams> {
        SelbergParams::new(self.require("mu")?, self.get("lambda1")?.unwrap_or(0.0), self.get("lambda2")?.unwrap_or(0.0), self.get("l")?)
            .map_err(config("selberg parameters"))
    }

    /// `quadrature` overrides from the file, then `--tol`.
    pub fn quadrature(&self, tol: Option<f64>) -> CliResult<QuadratureSpec> {
        let mut quad = self.get::<QuadratureSpec>("quadrature")?.unwrap_or_default();
        if let Some(t) = tol {
            quad.abs_tol = t;
            quad.rel_tol = t;
        }
        quad.validate().map_err(config("tolerances"))?;
        Ok(quad)
    }
}
