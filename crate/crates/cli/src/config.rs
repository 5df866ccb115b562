use std::path::PathBuf;

use frobfix::curves::{builtin_corpus, load_corpus, EllipticCurveSpec};
use frobfix::field::DEFAULT_FIELD_CEILING;

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Markdown,
}

/// Settings shared by every subcommand.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub format: Format,
    /// Largest finite field any subcommand may build.
    pub max_field: u64,
    /// Largest level of a factorial tower.
    pub max_level: usize,
    pub corpus: Option<PathBuf>,
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        if self.max_field == 0 || self.max_level == 0 {
            return Err(CliError::Usage("ceilings must be positive".into()));
        }
        if self.max_field > DEFAULT_FIELD_CEILING {
            return Err(CliError::Usage(format!(
                "field ceiling {} is above the library limit {DEFAULT_FIELD_CEILING}",
                self.max_field
            )));
        }
        Ok(())
    }

    /// Refuses `F_{p^e}` above the field ceiling.
    pub fn require_field(&self, p: u64, e: u64) -> Result<(), CliError> {
        let fits = u32::try_from(e).ok().and_then(|e| p.checked_pow(e)).is_some_and(|q| q <= self.max_field);
        if fits {
            Ok(())
        } else {
            Err(CliError::Resource(format!("F_{p}^{e} exceeds the field ceiling {}", self.max_field)))
        }
    }

    pub fn require_level(&self, level: usize) -> Result<(), CliError> {
        if level > self.max_level {
            return Err(CliError::Resource(format!("level {level} exceeds the level ceiling {}", self.max_level)));
        }
        Ok(())
    }

    pub fn corpus(&self) -> Result<Vec<EllipticCurveSpec>, CliError> {
        match &self.corpus {
            Some(path) => Ok(load_corpus(path)?),
            None => Ok(builtin_corpus()),
        }
    }
}
