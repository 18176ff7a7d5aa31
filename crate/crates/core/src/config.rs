//! Run configuration: a flat-namespaced TOML file with a normative key set.
//! Unknown keys are rejected; ranges are validated before any computation.

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::expr::{parse_expression, Expr};

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub dimension: usize,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default)]
    pub metric: MetricConfig,
    #[serde(default)]
    pub fg: FgConfig,
    #[serde(default)]
    pub gjms: GjmsConfig,
    #[serde(default)]
    pub q: QConfig,
    #[serde(default)]
    pub scatter: ScatterConfig,
    #[serde(default)]
    pub contour: ContourConfig,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub output: OutputConfig,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub resolution: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig { resolution: 16 }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetricConfig {
    pub kind: String,
    /// Conformal factor expression for kind = "conformal".
    pub upsilon: Option<String>,
    /// Band-limited perturbation expression for kind = "generic".
    pub perturbation: Option<String>,
    /// Perturbation amplitude (default 0.05).
    pub amplitude: Option<f64>,
    /// Einstein constant for kind = "einstein" (default 1).
    pub lambda: Option<f64>,
}

impl Default for MetricConfig {
    fn default() -> Self {
        MetricConfig {
            kind: "flat".into(),
            upsilon: None,
            perturbation: None,
            amplitude: None,
            lambda: None,
        }
    }
}

#[derive(Debug, Clone, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct FgConfig {
    pub order: Option<usize>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GjmsConfig {
    pub k: Vec<usize>,
    /// Fourier modes over which operator matrices are exported.
    pub modes: Option<Vec<Vec<i64>>>,
}

impl Default for GjmsConfig {
    fn default() -> Self {
        GjmsConfig {
            k: vec![1],
            modes: None,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QConfig {
    pub delta: f64,
}

impl Default for QConfig {
    fn default() -> Self {
        QConfig { delta: 1e-2 }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScatterConfig {
    /// "yukawa" or "collar".
    pub model: String,
    /// Warp a(x) as an expression in x (collar only).
    pub warp: Option<String>,
    /// Modes: Fourier index vectors.
    pub modes: Option<Vec<Vec<i64>>>,
    pub cap: f64,
    /// s-sweep: optional [re_start, re_end, count] along a horizontal line.
    pub sweep_re: Option<Vec<f64>>,
    pub sweep_im: Option<f64>,
    /// Residue extraction points (real parts; poles sit on the real axis).
    pub residues_at: Option<Vec<f64>>,
}

impl Default for ScatterConfig {
    fn default() -> Self {
        ScatterConfig {
            model: "collar".into(),
            warp: None,
            modes: None,
            cap: 1.0,
            sweep_re: None,
            sweep_im: None,
            residues_at: None,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContourConfig {
    pub radius: f64,
    pub nodes: usize,
}

impl Default for ContourConfig {
    fn default() -> Self {
        ContourConfig {
            radius: 0.05,
            nodes: 32,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    pub residual: f64,
    pub interpolation: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            residual: 1e-8,
            interpolation: 1e-8,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub path: String,
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig {
            path: "confscat-out.jsonl".into(),
        }
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: RunConfig =
            toml::from_str(text).map_err(|e| Error::Config(format!("{e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &str) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_toml(&text)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.dimension;
        if !(1..=4).contains(&n) {
            return Err(Error::Config(format!("dimension {n} outside 1..=4")));
        }
        let res = self.grid.resolution;
        if res < 8 || !res.is_power_of_two() {
            return Err(Error::Config(format!(
                "grid.resolution {res} must be a power of two >= 8"
            )));
        }
        match self.metric.kind.as_str() {
            "flat" | "conformal" | "generic" | "einstein" => {}
            k => return Err(Error::Config(format!("unknown metric.kind '{k}'"))),
        }
        if let Some(order) = self.fg.order {
            if n % 2 == 0 && order > n {
                return Err(Error::Config(format!(
                    "fg.order {order} exceeds n = {n} (even dimension)"
                )));
            }
            if n % 2 == 1 && order > crate::fg::MAX_ODD_ORDER {
                return Err(Error::Config(format!(
                    "fg.order {order} exceeds maximum {}",
                    crate::fg::MAX_ODD_ORDER
                )));
            }
        }
        for &k in &self.gjms.k {
            if k == 0 || (n % 2 == 0 && k > n / 2 && self.metric.kind != "flat") {
                return Err(Error::Config(format!(
                    "gjms.k = {k} invalid for n = {n} and metric '{}'",
                    self.metric.kind
                )));
            }
        }
        match self.scatter.model.as_str() {
            "yukawa" | "collar" => {}
            m => return Err(Error::Config(format!("unknown scatter.model '{m}'"))),
        }
        if !(self.scatter.cap > 0.0 && self.scatter.cap <= 1.0) {
            return Err(Error::Config("scatter.cap must lie in (0, 1]".into()));
        }
        if !(self.contour.radius > 0.0 && self.contour.radius < 0.25) {
            return Err(Error::Config(
                "contour.radius must stay clear of neighbouring exceptional points".into(),
            ));
        }
        if self.q.delta <= 0.0 || self.q.delta > 0.1 {
            return Err(Error::Config("q.delta must lie in (0, 0.1]".into()));
        }
        Ok(())
    }

    pub fn upsilon_expr(&self) -> Result<Option<Expr>> {
        match &self.metric.upsilon {
            Some(src) => {
                let e = parse_expression(src)?;
                if let Some(v) = e.max_var() {
                    if v >= self.dimension {
                        return Err(Error::Config(format!(
                            "upsilon uses y{} beyond dimension {}",
                            v + 1,
                            self.dimension
                        )));
                    }
                }
                Ok(Some(e))
            }
            None => Ok(None),
        }
    }

    pub fn perturbation_expr(&self) -> Result<Option<Expr>> {
        match &self.metric.perturbation {
            Some(src) => Ok(Some(parse_expression(src)?)),
            None => Ok(None),
        }
    }

    pub fn warp_expr(&self) -> Result<Option<Expr>> {
        match &self.scatter.warp {
            Some(src) => {
                let e = parse_expression(src)?;
                if !e.is_x_only() {
                    return Err(Error::Config("scatter.warp must depend only on x".into()));
                }
                Ok(Some(e))
            }
            None => Ok(None),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = r#"
dimension = 4
[grid]
resolution = 16
[metric]
kind = "generic"
perturbation = "sin(y1+y2)"
amplitude = 0.05
[fg]
order = 4
[gjms]
k = [1, 2]
[q]
delta = 0.01
[scatter]
model = "collar"
warp = "1+0.1*x"
modes = [[1,0,0,0]]
cap = 1.0
[contour]
radius = 0.05
nodes = 32
[output]
path = "out.jsonl"
"#;

    #[test]
    fn sample_parses_and_validates() {
        let cfg = RunConfig::from_toml(SAMPLE).unwrap();
        assert_eq!(cfg.dimension, 4);
        assert_eq!(cfg.gjms.k, vec![1, 2]);
        assert!(cfg.warp_expr().unwrap().is_some());
    }

    #[test]
    fn unknown_keys_rejected() {
        let bad = format!("{SAMPLE}\n[extra]\nfoo = 1\n");
        assert!(RunConfig::from_toml(&bad).is_err());
        let bad2 = SAMPLE.replace("[grid]\nresolution = 16", "[grid]\nresolution = 16\nfoo = 2");
        assert!(RunConfig::from_toml(&bad2).is_err());
    }

    #[test]
    fn range_validation() {
        let bad = SAMPLE.replace("order = 4", "order = 6");
        assert!(matches!(
            RunConfig::from_toml(&bad),
            Err(Error::Config(_))
        ));
        let bad = SAMPLE.replace("resolution = 16", "resolution = 12");
        assert!(RunConfig::from_toml(&bad).is_err());
    }
}
