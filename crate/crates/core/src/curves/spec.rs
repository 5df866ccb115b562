use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::arith::require_prime;
use crate::{Error, Result};

/// `y² + a1·xy + a3·y = x³ + a2·x² + a4·x + a6` over `F_p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EllipticCurveSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub p: u64,
    #[serde(default)]
    pub a1: i64,
    #[serde(default)]
    pub a2: i64,
    #[serde(default)]
    pub a3: i64,
    #[serde(default)]
    pub a4: i64,
    #[serde(default)]
    pub a6: i64,
}

impl EllipticCurveSpec {
    /// Checked constructor: `p` prime and the discriminant nonzero mod `p`.
    pub fn new(p: u64, [a1, a2, a3, a4, a6]: [i64; 5]) -> Result<Self> {
        let e = EllipticCurveSpec { name: None, p, a1, a2, a3, a4, a6 };
        e.validate()?;
        Ok(e)
    }

    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn validate(&self) -> Result<()> {
        require_prime(self.p)?;
        if self.discriminant() == 0 {
            return Err(Error::SingularCurve);
        }
        Ok(())
    }

    /// Coefficients reduced into `[0, p)`.
    pub fn coefficients(&self) -> [u64; 5] {
        let p = self.p as i64;
        [self.a1, self.a2, self.a3, self.a4, self.a6].map(|a| a.rem_euclid(p) as u64)
    }

    /// The discriminant reduced mod `p`.
    pub fn discriminant(&self) -> u64 {
        let p = self.p as i128;
        let [a1, a2, a3, a4, a6] = self.coefficients().map(|a| a as i128);
        let m = |x: i128| x.rem_euclid(p);
        let b2 = m(a1 * a1 + 4 * a2);
        let b4 = m(2 * a4 + a1 * a3);
        let b6 = m(a3 * a3 + 4 * a6);
        let b8 = m(m(a1 * a1 * a6) + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4);
        let d = -m(b2 * b2) * b8 - 8 * m(b4 * b4) * b4 - 27 * b6 * b6 + 9 * m(b2 * b4) * b6;
        m(d) as u64
    }

    pub fn label(&self) -> String {
        self.name.clone().unwrap_or_else(|| self.to_string())
    }
}

impl fmt::Display for EllipticCurveSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a1, a2, a3, a4, a6] = self.coefficients();
        write!(f, "[{a1},{a2},{a3},{a4},{a6}]/F_{}", self.p)
    }
}

#[derive(Deserialize)]
struct CorpusFile {
    curve: Vec<EllipticCurveSpec>,
}

/// Parses a corpus: TOML with `[[curve]]` tables, or JSON (an array of
/// curves, or an object with a `curve` array).
pub fn parse_corpus(text: &str, json: bool) -> Result<Vec<EllipticCurveSpec>> {
    let curves = if json {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            List(Vec<EllipticCurveSpec>),
            File(CorpusFile),
        }
        match serde_json::from_str::<Repr>(text).map_err(|e| Error::Corpus(e.to_string()))? {
            Repr::List(v) => v,
            Repr::File(f) => f.curve,
        }
    } else {
        toml::from_str::<CorpusFile>(text).map_err(|e| Error::Corpus(e.to_string()))?.curve
    };
    for c in &curves {
        c.validate().map_err(|e| Error::Corpus(format!("{}: {e}", c.label())))?;
    }
    Ok(curves)
}

pub fn load_corpus(path: impl AsRef<Path>) -> Result<Vec<EllipticCurveSpec>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::Corpus(format!("{}: {e}", path.display())))?;
    parse_corpus(&text, path.extension().is_some_and(|e| e == "json"))
}

/// The corpus shipped with the crate.
pub fn builtin_corpus() -> Vec<EllipticCurveSpec> {
    parse_corpus(include_str!("../../data/curves.toml"), false).expect("shipped corpus is valid")
}

pub fn find_curve<'a>(corpus: &'a [EllipticCurveSpec], name: &str) -> Option<&'a EllipticCurveSpec> {
    corpus.iter().find(|c| c.name.as_deref() == Some(name))
}
