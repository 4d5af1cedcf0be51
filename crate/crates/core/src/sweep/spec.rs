use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::helium::HeliumParams;
use crate::hooke::{HookeParams, HookeSettings};
use crate::hubbard::{HubbardParams, HubbardSolver};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Hubbard,
    Hooke,
    Helium,
}

impl Model {
    pub fn name(self) -> &'static str {
        match self {
            Model::Hubbard => "hubbard",
            Model::Hooke => "hooke",
            Model::Helium => "helium",
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "hubbard" => Ok(Model::Hubbard),
            "hooke" => Ok(Model::Hooke),
            "helium" => Ok(Model::Helium),
            other => Err(Error::invalid(format!("unknown model '{other}' (expected hubbard, hooke or helium)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ModelParams {
    Hubbard(HubbardParams),
    Hooke(HookeParams),
    Helium(HeliumParams),
}

impl ModelParams {
    pub fn model(&self) -> Model {
        match self {
            ModelParams::Hubbard(_) => Model::Hubbard,
            ModelParams::Hooke(_) => Model::Hooke,
            ModelParams::Helium(_) => Model::Helium,
        }
    }

    pub fn from_value(model: Model, value: Value) -> Result<Self> {
        let bad = |e: serde_json::Error| Error::Parse(format!("{model} parameters: {e}"));
        Ok(match model {
            Model::Hubbard => ModelParams::Hubbard(serde_json::from_value(value).map_err(bad)?),
            Model::Hooke => ModelParams::Hooke(serde_json::from_value(value).map_err(bad)?),
            Model::Helium => ModelParams::Helium(serde_json::from_value(value).map_err(bad)?),
        })
    }

    pub fn to_value(&self) -> Value {
        match self {
            ModelParams::Hubbard(p) => serde_json::to_value(p),
            ModelParams::Hooke(p) => serde_json::to_value(p),
            ModelParams::Helium(p) => serde_json::to_value(p),
        }
        .expect("parameter structs serialize to JSON")
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            ModelParams::Hubbard(p) => p.validate(),
            ModelParams::Hooke(p) => p.validate(),
            ModelParams::Helium(p) => p.validate(),
        }
    }

    pub fn particle_count(&self) -> usize {
        match self {
            ModelParams::Hubbard(p) => p.particle_count(),
            ModelParams::Hooke(_) | ModelParams::Helium(_) => 2,
        }
    }

    /// `key=value` pairs of the fields that differ from `reference`, or of
    /// the model's principal parameter when nothing differs.
    pub fn label_against(&self, reference: &ModelParams) -> String {
        let (mine, theirs) = (self.to_value(), reference.to_value());
        let (Value::Object(mine), Value::Object(theirs)) = (mine, theirs) else {
            return String::new();
        };
        let differing: Vec<String> = mine
            .iter()
            .filter(|(k, v)| theirs.get(*k) != Some(*v))
            .map(|(k, v)| format!("{k}={v}"))
            .collect();
        if !differing.is_empty() {
            return differing.join(",");
        }
        let key = match self.model() {
            Model::Hubbard | Model::Hooke => "omega",
            Model::Helium => "Z",
        };
        format!("{key}={}", mine[key])
    }
}

/// Solver settings shared by every point of a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Accuracy {
    pub hubbard: HubbardSolver,
    pub hooke: HookeSettings,
    pub helium: HeliumAccuracy,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HeliumAccuracy {
    /// Varied points that differ from the reference only in `Z` reuse the
    /// reference basis with exponents scaled by `(Z/Z_ref)²`.
    pub rescale_reference: bool,
}

impl Default for HeliumAccuracy {
    fn default() -> Self {
        HeliumAccuracy { rescale_reference: true }
    }
}

/// One reference state and an ordered list of varied parameter points.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub label: String,
    pub model: Model,
    pub reference: ModelParams,
    pub varied: Vec<ModelParams>,
    /// Analyze and plot in the normalized axes `D_psi/sqrt(2N)`, `D_rho/(2N)`.
    pub normalize: bool,
    pub accuracy: Accuracy,
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    #[serde(default)]
    label: String,
    model: Model,
    reference: Value,
    varied: Vec<Value>,
    #[serde(default = "default_true")]
    normalize: bool,
    #[serde(default)]
    accuracy: Accuracy,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.reference.model() != self.model {
            return Err(Error::invalid(format!("reference parameters are not {} parameters", self.model)));
        }
        self.reference.validate()?;
        if self.varied.is_empty() {
            return Err(Error::invalid("sweep has no varied points"));
        }
        let n = self.reference.particle_count();
        for p in &self.varied {
            if p.model() != self.model {
                return Err(Error::invalid(format!("varied point {p:?} is not a {} point", self.model)));
            }
            p.validate()?;
            if p.particle_count() != n {
                return Err(Error::invalid(format!(
                    "varied point {} has N={} but the reference has N={n}",
                    p.label_against(&self.reference),
                    p.particle_count()
                )));
            }
            if let (ModelParams::Hubbard(a), ModelParams::Hubbard(b)) = (&self.reference, p) {
                if !a.same_sector(b) {
                    return Err(Error::invalid(format!(
                        "varied point {} leaves the reference sector (L={}, n_up={}, n_down={})",
                        p.label_against(&self.reference),
                        a.sites,
                        a.n_up,
                        a.n_down
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn particle_count(&self) -> usize {
        self.reference.particle_count()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawSpec = serde_json::from_str(text).map_err(|e| Error::Parse(format!("sweep spec: {e}")))?;
        let spec = SweepSpec {
            label: if raw.label.is_empty() { raw.model.to_string() } else { raw.label },
            model: raw.model,
            reference: ModelParams::from_value(raw.model, raw.reference)?,
            varied: raw
                .varied
                .into_iter()
                .map(|v| ModelParams::from_value(raw.model, v))
                .collect::<Result<_>>()?,
            normalize: raw.normalize,
            accuracy: raw.accuracy,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        let raw = RawSpec {
            label: self.label.clone(),
            model: self.model,
            reference: self.reference.to_value(),
            varied: self.varied.iter().map(ModelParams::to_value).collect(),
            normalize: self.normalize,
            accuracy: self.accuracy,
        };
        serde_json::to_string_pretty(&raw).expect("sweep spec serializes to JSON")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const HOOKE: &str = r#"{
        "label": "trap",
        "model": "hooke",
        "reference": {"omega": 0.5},
        "varied": [{"omega": 0.6}, {"omega": 0.7}]
    }"#;

    #[test]
    fn parses_and_round_trips() {
        let spec = SweepSpec::from_json(HOOKE).unwrap();
        assert_eq!(spec.model, Model::Hooke);
        assert_eq!(spec.varied.len(), 2);
        assert!(spec.normalize);
        assert_eq!(spec.accuracy, Accuracy::default());
        assert_eq!(SweepSpec::from_json(&spec.to_json()).unwrap(), spec);
    }

    #[test]
    fn labels_name_the_changed_parameter() {
        let spec = SweepSpec::from_json(HOOKE).unwrap();
        assert_eq!(spec.varied[0].label_against(&spec.reference), "omega=0.6");
        assert_eq!(spec.reference.label_against(&spec.reference), "omega=0.5");
        let h = ModelParams::Helium(HeliumParams::new(2.5));
        assert_eq!(h.label_against(&ModelParams::Helium(HeliumParams::new(2.0))), "Z=2.5");
    }

    #[test]
    fn rejects_sector_changes() {
        let text = r#"{
            "model": "hubbard",
            "reference": {"n_up": 1, "n_down": 1, "u": 2, "omega": 4},
            "varied": [{"n_up": 2, "n_down": 0, "u": 2, "omega": 1}]
        }"#;
        assert!(matches!(SweepSpec::from_json(text), Err(Error::InvalidInput(_))));
        let text = text.replace(r#""n_up": 2, "n_down": 0"#, r#""n_up": 1, "n_down": 1, "sites": 6"#);
        assert!(SweepSpec::from_json(&text).is_err());
    }

    #[test]
    fn rejects_malformed_documents() {
        assert!(matches!(SweepSpec::from_json("{"), Err(Error::Parse(_))));
        let unknown = HOOKE.replace("\"label\"", "\"lable\"");
        assert!(matches!(SweepSpec::from_json(&unknown), Err(Error::Parse(_))));
        let wrong = HOOKE.replace("\"omega\": 0.6", "\"Z\": 2");
        assert!(matches!(SweepSpec::from_json(&wrong), Err(Error::Parse(_))));
        let bad = HOOKE.replace("0.7", "-1");
        assert!(matches!(SweepSpec::from_json(&bad), Err(Error::InvalidInput(_))));
        assert!("lithium".parse::<Model>().is_err());
    }
}
