//! JSON run configuration.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::Deserialize;

use crate::solvers::{
    CauchySpec, EquationParams, ErrorCode, Family, InnerBoundarySpec, InnerSpec, SolverError, SourceTerm, DEFAULT_QUAD_N,
};
use crate::spectral::{DirichletLaplacian, Forcing, PdeConditions, PdeProblem, SpatialData, SpectrumProvider};

use super::Diagnostic;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    MlEval,
    SolveScalar,
    SolvePde,
    Verify,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub mode: Option<Mode>,
    pub problem: ProblemConfig,
    #[serde(default)]
    pub numerics: Numerics,
    #[serde(default)]
    pub output: OutputConfig,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemConfig {
    pub family: Family,
    pub alpha: f64,
    #[serde(default)]
    pub beta: f64,
    pub gamma: f64,
    /// Scalar runs only; PDE runs take `m = -m_ξ` from the operator.
    #[serde(default)]
    pub m: Option<f64>,
    pub t_end: f64,
    #[serde(default)]
    pub a: Option<f64>,
    #[serde(default)]
    pub b: Option<f64>,
    /// Scalar condition data `(ĉ1, ĉ2)`, `(d̂1, d̂2)` or `(ê1, ê2)`.
    #[serde(default)]
    pub data: [f64; 2],
    #[serde(default)]
    pub source: SourceConfig,
    #[serde(default)]
    pub operator: Option<OperatorConfig>,
    #[serde(default)]
    pub u1: SpatialConfig,
    #[serde(default)]
    pub u2: SpatialConfig,
    #[serde(default)]
    pub forcing: Vec<ForcingTerm>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Numerics {
    #[serde(default = "defaults::grid_n")]
    pub grid_n: usize,
    #[serde(default = "defaults::quad_n")]
    pub quad_n: usize,
    #[serde(default = "defaults::n_modes")]
    pub n_modes: usize,
    /// Residual window start; defaults to `0.05 T`.
    #[serde(default)]
    pub t_min: Option<f64>,
    #[serde(default = "defaults::condition_tol")]
    pub condition_tol: f64,
    #[serde(default = "defaults::functional_tol")]
    pub functional_tol: f64,
    #[serde(default = "defaults::sample_n")]
    pub sample_n: usize,
    #[serde(default = "defaults::sample_x")]
    pub sample_x: usize,
    #[serde(default = "defaults::time_quad_n")]
    pub time_quad_n: usize,
}

impl Default for Numerics {
    fn default() -> Self {
        serde_json::from_str("{}").expect("defaults")
    }
}

mod defaults {
    pub fn grid_n() -> usize {
        1000
    }
    pub fn quad_n() -> usize {
        super::DEFAULT_QUAD_N
    }
    pub fn n_modes() -> usize {
        16
    }
    pub fn condition_tol() -> f64 {
        1e-8
    }
    pub fn functional_tol() -> f64 {
        1e-4
    }
    pub fn sample_n() -> usize {
        100
    }
    pub fn sample_x() -> usize {
        33
    }
    pub fn time_quad_n() -> usize {
        64
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    /// Relative to the config file.
    #[serde(default)]
    pub dir: Option<PathBuf>,
}

/// Source registry; `table_file` reads a two-column CSV `t,f`.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SourceConfig {
    #[default]
    Zero,
    Constant { c: f64 },
    Power { coef: f64, p: f64 },
    Exp { coef: f64, k: f64 },
    Table { t: Vec<f64>, f: Vec<f64> },
    TableFile { path: PathBuf },
    Sum { terms: Vec<SourceConfig> },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum OperatorConfig {
    DirichletLaplacian { length: f64 },
}

/// Spatial field registry for PDE data.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SpatialConfig {
    #[default]
    Zero,
    Coefficients { values: Vec<f64> },
    /// `amplitude · e_ξ`.
    Mode { xi: usize, amplitude: f64 },
    /// `Σ c_k x^k`.
    Polynomial { coefs: Vec<f64> },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ForcingTerm {
    pub time: SourceConfig,
    pub space: SpatialConfig,
}

pub(crate) fn invalid(code: ErrorCode, msg: impl Into<String>) -> Diagnostic {
    Diagnostic::from_solver(&SolverError::invalid(code, msg))
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<(RunConfig, PathBuf), Diagnostic> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Diagnostic::config("E_CONFIG_IO", format!("cannot read {}: {e}", path.display())))?;
        let cfg: RunConfig = serde_json::from_str(&text)
            .map_err(|e| Diagnostic::config("E_CONFIG_PARSE", format!("{}: {e}", path.display())))?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok((cfg, base))
    }

    pub fn check_mode(&self, wanted: Mode) -> Result<(), Diagnostic> {
        match self.mode {
            Some(m) if m != wanted && !(wanted == Mode::Verify && m == Mode::SolveScalar) => Err(Diagnostic::config(
                "E_CONFIG_MODE",
                format!("config mode {m:?} does not match the subcommand ({wanted:?})"),
            )),
            _ => Ok(()),
        }
    }
}

impl SourceConfig {
    pub fn build(&self, base: &Path) -> Result<SourceTerm, Diagnostic> {
        let s = match self {
            SourceConfig::Zero => SourceTerm::Zero,
            SourceConfig::Constant { c } => SourceTerm::Constant { c: *c },
            SourceConfig::Power { coef, p } => SourceTerm::Power { coef: *coef, p: *p },
            SourceConfig::Exp { coef, k } => SourceTerm::Exp { coef: *coef, k: *k },
            SourceConfig::Table { t, f } => SourceTerm::Table { t: t.clone(), f: f.clone() },
            SourceConfig::TableFile { path } => read_table(&base.join(path))?,
            SourceConfig::Sum { terms } => {
                SourceTerm::Sum { terms: terms.iter().map(|t| t.build(base)).collect::<Result<_, _>>()? }
            }
        };
        s.validate().map_err(|e| Diagnostic::from_solver(&e))?;
        Ok(s)
    }
}

fn read_table(path: &Path) -> Result<SourceTerm, Diagnostic> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| invalid(ErrorCode::Source, format!("cannot read table {}: {e}", path.display())))?;
    let mut t = Vec::new();
    let mut f = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let cols: Vec<&str> = line.split(',').map(str::trim).collect();
        let parsed = (cols.len() == 2).then(|| (cols[0].parse::<f64>(), cols[1].parse::<f64>()));
        match parsed {
            Some((Ok(a), Ok(b))) => {
                t.push(a);
                f.push(b);
            }
            _ if i == 0 => continue, // header
            _ => {
                return Err(invalid(
                    ErrorCode::Source,
                    format!("{}:{}: expected two numeric columns", path.display(), i + 1),
                ))
            }
        }
    }
    Ok(SourceTerm::Table { t, f })
}

impl SpatialConfig {
    pub fn build(&self) -> SpatialData {
        match self {
            SpatialConfig::Zero => SpatialData::Zero,
            SpatialConfig::Coefficients { values } => SpatialData::Coefficients(values.clone()),
            SpatialConfig::Mode { xi, amplitude } => {
                let mut c = vec![0.0; *xi];
                if *xi >= 1 {
                    c[xi - 1] = *amplitude;
                }
                SpatialData::Coefficients(c)
            }
            SpatialConfig::Polynomial { coefs } => {
                let c = coefs.clone();
                SpatialData::Function(Arc::new(move |x| c.iter().rev().fold(0.0, |acc, k| acc * x + k)))
            }
        }
    }
}

/// A validated scalar problem.
#[derive(Debug, Clone)]
pub enum ScalarProblem {
    Cauchy(CauchySpec),
    Inner(InnerSpec),
    InnerBoundary(InnerBoundarySpec),
}

impl ScalarProblem {
    pub fn beta(&self) -> f64 {
        match self {
            ScalarProblem::Cauchy(s) => s.beta,
            ScalarProblem::Inner(s) => s.beta,
            ScalarProblem::InnerBoundary(s) => s.beta,
        }
    }

    pub fn gamma(&self) -> f64 {
        match self {
            ScalarProblem::Cauchy(s) => s.gamma,
            ScalarProblem::Inner(s) => s.gamma,
            ScalarProblem::InnerBoundary(s) => s.gamma,
        }
    }
}

fn need(v: Option<f64>, name: &str, code: ErrorCode) -> Result<f64, Diagnostic> {
    v.ok_or_else(|| invalid(code, format!("family requires `{name}`")))
}

impl ProblemConfig {
    pub fn scalar(&self, numerics: &Numerics, base: &Path) -> Result<ScalarProblem, Diagnostic> {
        let m = need(self.m, "m", ErrorCode::CoefficientNonFinite)?;
        let eq = EquationParams::new(self.alpha, m, self.t_end).map_err(|e| Diagnostic::from_solver(&e))?;
        check_quad(numerics)?;
        let f = self.source.build(base)?;
        let [d1, d2] = self.data;
        let p = match self.family {
            Family::Cauchy => {
                let mut s = CauchySpec::new(eq, self.beta, self.gamma, d1, d2, f);
                s.quad_n = numerics.quad_n;
                s.validate().map_err(|e| Diagnostic::from_solver(&e))?;
                ScalarProblem::Cauchy(s)
            }
            Family::Inner => {
                let a = need(self.a, "a", ErrorCode::InnerPointRange)?;
                let mut s = InnerSpec::new(eq, self.beta, self.gamma, a, d1, d2, f);
                s.quad_n = numerics.quad_n;
                s.validate().map_err(|e| Diagnostic::from_solver(&e))?;
                ScalarProblem::Inner(s)
            }
            Family::InnerBoundary => {
                let a = need(self.a, "a", ErrorCode::InnerPointRange)?;
                let b = need(self.b, "b", ErrorCode::BoundaryPointRange)?;
                let mut s = InnerBoundarySpec::new(eq, self.beta, self.gamma, a, b, d1, d2, f);
                s.quad_n = numerics.quad_n;
                s.validate().map_err(|e| Diagnostic::from_solver(&e))?;
                ScalarProblem::InnerBoundary(s)
            }
        };
        Ok(p)
    }

    pub fn pde(&self, numerics: &Numerics, base: &Path) -> Result<(PdeProblem, Arc<dyn SpectrumProvider>), Diagnostic> {
        let sp: Arc<dyn SpectrumProvider> = match &self.operator {
            Some(OperatorConfig::DirichletLaplacian { length }) if *length > 0.0 && length.is_finite() => {
                Arc::new(DirichletLaplacian::new(*length))
            }
            Some(OperatorConfig::DirichletLaplacian { length }) => {
                return Err(Diagnostic::config("E_OPERATOR", format!("domain length {length} must be positive")))
            }
            None => return Err(Diagnostic::config("E_OPERATOR", "PDE runs need an `operator`")),
        };
        // Parameter checks shared with the scalar families, using a representative m.
        EquationParams::new(self.alpha, -sp.eigenvalue(1), self.t_end).map_err(|e| Diagnostic::from_solver(&e))?;
        crate::solvers::check_orders(self.alpha, self.beta, self.gamma).map_err(|e| Diagnostic::from_solver(&e))?;
        check_quad(numerics)?;
        if numerics.n_modes == 0 {
            return Err(Diagnostic::config("E_MODES", "n_modes must be at least 1"));
        }
        let conditions = match self.family {
            Family::Cauchy => {
                let critical = (self.gamma - (self.alpha - 1.0)).abs() <= 1e-12;
                let has_data = !matches!(self.u1, SpatialConfig::Zero) || !matches!(self.u2, SpatialConfig::Zero);
                if has_data && !critical {
                    return Err(invalid(
                        ErrorCode::CauchyDataNeedsCriticalGamma,
                        format!("nonzero initial data require gamma = alpha - 1, got gamma = {}", self.gamma),
                    ));
                }
                PdeConditions::Cauchy
            }
            Family::Inner => {
                let a = need(self.a, "a", ErrorCode::InnerPointRange)?;
                if !(a > 0.0 && a < self.t_end) {
                    return Err(invalid(ErrorCode::InnerPointRange, format!("a = {a} must lie in (0, t_end)")));
                }
                PdeConditions::Inner { a }
            }
            Family::InnerBoundary => {
                let a = need(self.a, "a", ErrorCode::InnerPointRange)?;
                let b = need(self.b, "b", ErrorCode::BoundaryPointRange)?;
                if !(a > 0.0 && a <= self.t_end) {
                    return Err(invalid(ErrorCode::InnerPointRange, format!("a = {a} must lie in (0, t_end]")));
                }
                if !(b > 0.0 && b <= self.t_end) {
                    return Err(invalid(ErrorCode::BoundaryPointRange, format!("b = {b} must lie in (0, t_end]")));
                }
                PdeConditions::InnerBoundary { a, b }
            }
        };
        let forcing = if self.forcing.is_empty() {
            Forcing::Zero
        } else {
            Forcing::Separable(
                self.forcing
                    .iter()
                    .map(|ft| Ok((ft.time.build(base)?, ft.space.build())))
                    .collect::<Result<_, Diagnostic>>()?,
            )
        };
        let problem = PdeProblem {
            alpha: self.alpha,
            beta: self.beta,
            gamma: self.gamma,
            t_end: self.t_end,
            conditions,
            u1: self.u1.build(),
            u2: self.u2.build(),
            f: forcing,
            n_modes: numerics.n_modes,
            quad_n: numerics.quad_n,
        };
        Ok((problem, sp))
    }
}

fn check_quad(n: &Numerics) -> Result<(), Diagnostic> {
    if n.quad_n < 8 {
        return Err(Diagnostic::config("E_QUAD_N", format!("quad_n = {} must be at least 8", n.quad_n)));
    }
    if n.grid_n < 20 {
        return Err(Diagnostic::config("E_GRID_N", format!("grid_n = {} must be at least 20", n.grid_n)));
    }
    if n.sample_n < 1 || n.sample_x < 2 {
        return Err(Diagnostic::config("E_SAMPLES", "sample_n >= 1 and sample_x >= 2 required"));
    }
    if n.time_quad_n < 16 {
        return Err(Diagnostic::config("E_TIME_QUAD_N", "time_quad_n must be at least 16"));
    }
    Ok(())
}
