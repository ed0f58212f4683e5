//! Experiment configuration, geometry and link budget.
//!
//! [`ScenarioConfig`] is the user-facing description (positions in metres,
//! powers in dBm). [`Scenario`] is the resolved linear form every model
//! consumes.

mod units;

pub use units::{db_to_linear, dbm_to_watts, linear_to_db, watts_to_dbm};

use serde::{Deserialize, Serialize};

use crate::error::{IrsError, Result};

/// Full experiment input. Geometry, path loss and fading defaults are the
/// reference setup; powers, noise floors and element count default to the
/// values documented on each field.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioConfig {
    pub bs_pos: [f64; 2],
    pub irs_pos: [f64; 2],
    pub user_pos: [f64; 2],
    /// Path loss at the reference distance, dB (negative means attenuation).
    pub pathloss_ref_db: f64,
    /// Reference distance, metres.
    pub ref_distance: f64,
    /// BS -> IRS path-loss exponent.
    pub exponent_g: f64,
    /// IRS -> user path-loss exponent.
    pub exponent_f: f64,
    /// BS -> user path-loss exponent.
    pub exponent_h: f64,
    pub alpha_h_sq: f64,
    pub alpha_f_sq: f64,
    pub alpha_g_sq: f64,
    /// Noise power at each active IRS element, dBm. Default -90.
    pub sigma_i_sq_dbm: f64,
    /// Noise power at the user, dBm. Default -70.
    pub sigma_u_sq_dbm: f64,
    /// Number of IRS elements. Default 1024.
    pub n_elements: usize,
    /// BS transmit power, dBm. Default 0.
    pub ps_dbm: f64,
    /// IRS reflect power sum, dBm. Default -10.
    pub pi_dbm: f64,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        ScenarioConfig {
            bs_pos: [0.0, 0.0],
            irs_pos: [50.0, 30.0],
            user_pos: [200.0, 0.0],
            pathloss_ref_db: -30.0,
            ref_distance: 1.0,
            exponent_g: 2.7,
            exponent_f: 2.7,
            exponent_h: 3.0,
            alpha_h_sq: 0.5,
            alpha_f_sq: 0.5,
            alpha_g_sq: 0.5,
            sigma_i_sq_dbm: -90.0,
            sigma_u_sq_dbm: -70.0,
            n_elements: 1024,
            ps_dbm: 0.0,
            pi_dbm: -10.0,
        }
    }
}

/// Keys accepted by config files and `key=value` overrides.
pub const CONFIG_KEYS: &[&str] = &[
    "bs_pos",
    "irs_pos",
    "user_pos",
    "pathloss_ref_db",
    "ref_distance",
    "exponent_g",
    "exponent_f",
    "exponent_h",
    "alpha_h_sq",
    "alpha_f_sq",
    "alpha_g_sq",
    "sigma_i_sq_dbm",
    "sigma_u_sq_dbm",
    "n_elements",
    "ps_dbm",
    "pi_dbm",
];

impl ScenarioConfig {
    /// Parses a flat `key = value` file (TOML syntax). Missing keys keep
    /// their defaults.
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let table: toml::Table = text
            .parse()
            .map_err(|e: toml::de::Error| IrsError::InvalidConfig(e.to_string()))?;
        let mut cfg = ScenarioConfig::default();
        for (key, value) in table {
            cfg.set_value(&key, value)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("flat config always serializes")
    }

    /// Applies a `key=value` override. Positions accept either `x,y` or
    /// `[x, y]`.
    pub fn apply_override(&mut self, assignment: &str) -> Result<()> {
        let (key, raw) = assignment
            .split_once('=')
            .ok_or_else(|| IrsError::InvalidOverride {
                key: assignment.to_string(),
                reason: "expected key=value".into(),
            })?;
        let key = key.trim();
        let raw = raw.trim();
        let literal = if raw.contains(',') && !raw.starts_with('[') {
            format!("[{raw}]")
        } else {
            raw.to_string()
        };
        let parsed: toml::Table =
            format!("v = {literal}")
                .parse()
                .map_err(|e: toml::de::Error| IrsError::InvalidOverride {
                    key: key.to_string(),
                    reason: e.message().to_string(),
                })?;
        let value = parsed["v"].clone();
        self.set_value(key, value)
    }

    pub fn apply_overrides<S: AsRef<str>>(&mut self, assignments: &[S]) -> Result<()> {
        for a in assignments {
            self.apply_override(a.as_ref())?;
        }
        self.validate()
    }

    fn set_value(&mut self, key: &str, value: toml::Value) -> Result<()> {
        if !CONFIG_KEYS.contains(&key) {
            return Err(IrsError::InvalidOverride {
                key: key.to_string(),
                reason: "unknown key".into(),
            });
        }
        let mut table = toml::Table::try_from(&*self).expect("flat config always serializes");
        let coerced = coerce_like(&table[key], value).ok_or_else(|| IrsError::InvalidOverride {
            key: key.to_string(),
            reason: "value has the wrong type".into(),
        })?;
        table.insert(key.to_string(), coerced);
        *self = table
            .try_into()
            .map_err(|e: toml::de::Error| IrsError::InvalidOverride {
                key: key.to_string(),
                reason: e.message().to_string(),
            })?;
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [
            self.pathloss_ref_db,
            self.ref_distance,
            self.exponent_g,
            self.exponent_f,
            self.exponent_h,
            self.alpha_h_sq,
            self.alpha_f_sq,
            self.alpha_g_sq,
            self.sigma_i_sq_dbm,
            self.sigma_u_sq_dbm,
            self.ps_dbm,
            self.pi_dbm,
        ]
        .iter()
        .chain(self.bs_pos.iter())
        .chain(self.irs_pos.iter())
        .chain(self.user_pos.iter())
        .all(|v| v.is_finite());
        if !finite {
            return Err(IrsError::InvalidConfig("all values must be finite".into()));
        }
        if self.ref_distance <= 0.0 {
            return Err(IrsError::InvalidConfig("ref_distance must be > 0".into()));
        }
        if [self.exponent_g, self.exponent_f, self.exponent_h]
            .iter()
            .any(|&a| a < 1.0)
        {
            return Err(IrsError::InvalidConfig(
                "path-loss exponents must be >= 1".into(),
            ));
        }
        if [self.alpha_h_sq, self.alpha_f_sq, self.alpha_g_sq]
            .iter()
            .any(|&a| a <= 0.0)
        {
            return Err(IrsError::InvalidConfig(
                "Rayleigh parameters must be > 0".into(),
            ));
        }
        if self.n_elements == 0 {
            return Err(IrsError::InvalidConfig("n_elements must be >= 1".into()));
        }
        self.distances().map(|_| ())
    }

    fn distances(&self) -> Result<(f64, f64, f64)> {
        let d_g = distance(self.bs_pos, self.irs_pos, "bs", "irs")?;
        let d_f = distance(self.irs_pos, self.user_pos, "irs", "user")?;
        let d_h = distance(self.bs_pos, self.user_pos, "bs", "user")?;
        Ok((d_g, d_f, d_h))
    }

    /// Path loss in dB at distance `d` for exponent `a`.
    pub fn pathloss_db(&self, d: f64, a: f64) -> f64 {
        self.pathloss_ref_db - 10.0 * a * (d / self.ref_distance).log10()
    }

    pub fn resolve(&self) -> Result<Scenario> {
        self.validate()?;
        Ok(Scenario {
            link: link_budget(self)?,
            alpha_h_sq: self.alpha_h_sq,
            alpha_f_sq: self.alpha_f_sq,
            alpha_g_sq: self.alpha_g_sq,
            sigma_i_sq: dbm_to_watts(self.sigma_i_sq_dbm),
            sigma_u_sq: dbm_to_watts(self.sigma_u_sq_dbm),
            n_elements: self.n_elements,
            p_s: dbm_to_watts(self.ps_dbm),
            p_i: dbm_to_watts(self.pi_dbm),
        })
    }
}

fn coerce_like(current: &toml::Value, new: toml::Value) -> Option<toml::Value> {
    use toml::Value;
    match (current, new) {
        (Value::Float(_), Value::Integer(i)) => Some(Value::Float(i as f64)),
        (Value::Float(_), v @ Value::Float(_)) => Some(v),
        (Value::Integer(_), v @ Value::Integer(_)) => Some(v),
        (Value::Array(cur), Value::Array(items)) if cur.len() == items.len() => items
            .into_iter()
            .zip(cur.iter())
            .map(|(v, c)| coerce_like(c, v))
            .collect::<Option<Vec<_>>>()
            .map(Value::Array),
        _ => None,
    }
}

fn distance(a: [f64; 2], b: [f64; 2], na: &'static str, nb: &'static str) -> Result<f64> {
    let d = (a[0] - b[0]).hypot(a[1] - b[1]);
    if d > 0.0 {
        Ok(d)
    } else {
        Err(IrsError::DegenerateGeometry {
            first: na,
            second: nb,
        })
    }
}

/// Linear path-loss coefficients and link distances.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkBudget {
    /// BS -> IRS.
    pub l_g: f64,
    /// IRS -> user.
    pub l_f: f64,
    /// BS -> user.
    pub l_h: f64,
    pub d_g: f64,
    pub d_f: f64,
    pub d_h: f64,
}

pub fn link_budget(cfg: &ScenarioConfig) -> Result<LinkBudget> {
    let (d_g, d_f, d_h) = cfg.distances()?;
    Ok(LinkBudget {
        l_g: db_to_linear(cfg.pathloss_db(d_g, cfg.exponent_g)),
        l_f: db_to_linear(cfg.pathloss_db(d_f, cfg.exponent_f)),
        l_h: db_to_linear(cfg.pathloss_db(d_h, cfg.exponent_h)),
        d_g,
        d_f,
        d_h,
    })
}

/// Resolved scenario: every power in watts, every coefficient linear.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scenario {
    pub link: LinkBudget,
    pub alpha_h_sq: f64,
    pub alpha_f_sq: f64,
    pub alpha_g_sq: f64,
    pub sigma_i_sq: f64,
    pub sigma_u_sq: f64,
    pub n_elements: usize,
    pub p_s: f64,
    pub p_i: f64,
}

impl Scenario {
    pub fn n(&self) -> f64 {
        self.n_elements as f64
    }

    pub fn with_reflect_power(mut self, p_i: f64) -> Self {
        self.p_i = p_i;
        self
    }

    pub fn with_transmit_power(mut self, p_s: f64) -> Self {
        self.p_s = p_s;
        self
    }

    pub fn with_elements(mut self, n: usize) -> Self {
        self.n_elements = n;
        self
    }

    pub fn with_noise(mut self, sigma_i_sq: f64, sigma_u_sq: f64) -> Self {
        self.sigma_i_sq = sigma_i_sq;
        self.sigma_u_sq = sigma_u_sq;
        self
    }
}

impl Default for Scenario {
    fn default() -> Self {
        ScenarioConfig::default()
            .resolve()
            .expect("default configuration is valid")
    }
}
