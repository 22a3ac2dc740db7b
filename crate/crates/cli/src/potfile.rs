//! TOML potential specifications.
//!
//! A spec file holds one `[potential]` table selecting a family and its
//! parameters; `combo` nests parts with weights. The parsed spec is kept
//! alongside the built [`Potential`] so reports can echo their exact input.

use serde::{Deserialize, Serialize};
use stark_core::potential::{Potential, PotentialError};
use std::path::Path;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum PotentialSpec {
    /// q = 0.
    Zero,
    /// q = a e^{-c x}, c > 0.
    ExpDecay { a: f64, c: f64 },
    /// q = a e^{-c x^2}, c > 0.
    Gaussian { a: f64, c: f64 },
    /// C^2 spline bump supported on [0, l] with peak a at l/2.
    CompactSpline { a: f64, l: f64 },
    /// q = a (1+x)^{-s}.
    PowerDecay { a: f64, s: f64 },
    /// Cubic-spline interpolant through (x, q) samples; zero past the table.
    Tabulated {
        x: Vec<f64>,
        q: Vec<f64>,
        #[serde(default)]
        qprime0: f64,
    },
    /// Weighted sum of simpler parts.
    Combo { parts: Vec<ComboPart> },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ComboPart {
    pub weight: f64,
    #[serde(flatten)]
    pub part: PotentialSpec,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecFile {
    potential: PotentialSpec,
}

impl PotentialSpec {
    pub fn build(&self) -> Result<Potential, PotentialError> {
        Ok(match self {
            PotentialSpec::Zero => Potential::zero(),
            PotentialSpec::ExpDecay { a, c } => Potential::exp_decay(*a, *c),
            PotentialSpec::Gaussian { a, c } => Potential::gaussian(*a, *c),
            PotentialSpec::CompactSpline { a, l } => Potential::compact_spline(*a, *l),
            PotentialSpec::PowerDecay { a, s } => Potential::power_decay(*a, *s),
            PotentialSpec::Tabulated { x, q, qprime0 } => {
                Potential::tabulated(x, q, *qprime0)?
            }
            PotentialSpec::Combo { parts } => {
                let mut built = Vec::with_capacity(parts.len());
                for p in parts {
                    built.push((p.weight, p.part.build()?));
                }
                Potential::combo(built)
            }
        })
    }

    /// The spec as a JSON value for report echoes.
    pub fn echo(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("potential specs are plain data")
    }
}

pub fn load(path: &Path) -> Result<PotentialSpec, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read potential file {}: {e}", path.display()))?;
    parse(&text).map_err(|e| format!("bad potential file {}: {e}", path.display()))
}

fn parse(text: &str) -> Result<PotentialSpec, String> {
    let file: SpecFile = toml::from_str(text).map_err(|e| e.to_string())?;
    let raw: toml::Table = toml::from_str(text).map_err(|e| e.to_string())?;
    if let Some(toml::Value::Table(t)) = raw.get("potential") {
        check_keys(t)?;
    }
    Ok(file.potential)
}

// Tagged-enum deserialization ignores stray fields, so typo rejection
// needs an explicit key check against each family's parameter list.
fn check_keys(table: &toml::Table) -> Result<(), String> {
    let family = table.get("family").and_then(|v| v.as_str()).unwrap_or("");
    let allowed: &[&str] = match family {
        "zero" => &[],
        "exp_decay" | "gaussian" => &["a", "c"],
        "compact_spline" => &["a", "l"],
        "power_decay" => &["a", "s"],
        "tabulated" => &["x", "q", "qprime0"],
        "combo" => &["parts"],
        _ => return Ok(()),
    };
    for key in table.keys() {
        if key != "family" && key != "weight" && !allowed.contains(&key.as_str()) {
            return Err(format!("unknown field {key:?} for family {family:?}"));
        }
    }
    if let Some(toml::Value::Array(parts)) = table.get("parts") {
        for part in parts {
            if let toml::Value::Table(t) = part {
                check_keys(t)?;
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_each_family() {
        for (text, at0) in [
            ("[potential]\nfamily = \"zero\"", 0.0),
            ("[potential]\nfamily = \"exp_decay\"\na = 2.0\nc = 1.0", 2.0),
            ("[potential]\nfamily = \"gaussian\"\na = -1.5\nc = 0.5", -1.5),
            ("[potential]\nfamily = \"power_decay\"\na = 3.0\ns = 2.0", 3.0),
        ] {
            let f: SpecFile = toml::from_str(text).unwrap();
            let q = f.potential.build().unwrap();
            assert_eq!(q.at_origin().0, at0, "{text}");
        }
    }

    #[test]
    fn parses_combo_and_tabulated() {
        let text = r#"
[potential]
family = "combo"

[[potential.parts]]
weight = 2.0
family = "exp_decay"
a = 1.0
c = 1.0

[[potential.parts]]
weight = -1.0
family = "compact_spline"
a = 1.0
l = 4.0
"#;
        let f: SpecFile = toml::from_str(text).unwrap();
        let q = f.potential.build().unwrap();
        assert_eq!(q.at_origin().0, 2.0);

        let tab = r#"
[potential]
family = "tabulated"
x = [0.0, 1.0, 2.0, 3.0, 4.0]
q = [1.0, 0.3678794411714423, 0.1353352832366127, 0.0497870683678639, 0.0]
qprime0 = -1.0
"#;
        let f: SpecFile = toml::from_str(tab).unwrap();
        assert!(f.potential.build().is_ok());
    }

    #[test]
    fn rejects_unknown_fields() {
        assert!(parse("[potential]\nfamily = \"zero\"\nbogus = 1.0").is_err());
        assert!(parse("[potential]\nfamily = \"exp_decay\"\na = 1.0\nc = 1.0\nell = 2.0").is_err());
        let nested = "[potential]\nfamily = \"combo\"\n\n[[potential.parts]]\nweight = 1.0\nfamily = \"gaussian\"\na = 1.0\nc = 1.0\nsigma = 3.0";
        assert!(parse(nested).is_err());
        assert!(parse("[potential]\nfamily = \"exp_decay\"\na = 1.0\nc = 1.0").is_ok());
    }

    #[test]
    fn echo_round_trips() {
        let spec = PotentialSpec::ExpDecay { a: 1.0, c: 2.0 };
        let v = spec.echo();
        assert_eq!(v["family"], "exp_decay");
        assert_eq!(v["c"], 2.0);
    }
}
