use serde::{Deserialize, Serialize};

use crate::alphabet::{ModelError, ModelKind, VarietyModel};
use crate::expr::{parse_poly, ExprError, Ring};

/// JSON description of a countable variety.
///
/// For a double cover, `polynomial` is the branch polynomial in the base
/// variables and `cover_variable` names the square-root coordinate. When
/// `cover_variable` is absent it is taken to be the only declared variable
/// that does not occur in the polynomial.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VarietyFile {
    pub name: String,
    pub variables: Vec<String>,
    pub weights: Vec<u32>,
    pub kind: FileKind,
    pub polynomial: String,
    pub bad_primes: Vec<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cover_variable: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FileKind {
    Hypersurface,
    DoubleCover,
}

#[derive(Debug, thiserror::Error)]
pub enum VarietyFileError {
    #[error("invalid variety file: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("{0} weights given for {1} variables")]
    WeightCount(usize, usize),
    #[error("cannot tell which variable is the cover coordinate")]
    AmbiguousCover,
    #[error("cover variable {0:?} is not declared")]
    UnknownCover(String),
}

impl From<ExprError> for VarietyFileError {
    fn from(e: ExprError) -> Self {
        VarietyFileError::Model(e.into())
    }
}

impl VarietyFile {
    pub fn from_model(model: &VarietyModel) -> VarietyFile {
        let (kind, cover_variable) = match model.kind() {
            ModelKind::Hypersurface { .. } => (FileKind::Hypersurface, None),
            ModelKind::DoubleCover { cover_var, .. } => (FileKind::DoubleCover, Some(cover_var.clone())),
        };
        VarietyFile {
            name: model.name().to_string(),
            variables: model.variables(),
            weights: model.weights(),
            kind,
            polynomial: model.base_poly().to_string(),
            bad_primes: model.bad_primes().iter().copied().collect(),
            cover_variable,
        }
    }

    pub fn parse(json: &str) -> Result<VarietyFile, VarietyFileError> {
        Ok(serde_json::from_str(json)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("variety file serializes")
    }

    /// Builds and validates the model, including the declared weights.
    pub fn to_model(&self) -> Result<VarietyModel, VarietyFileError> {
        if self.weights.len() != self.variables.len() {
            return Err(VarietyFileError::WeightCount(self.weights.len(), self.variables.len()));
        }
        let full = Ring::try_new(self.variables.clone())?;
        let model = match self.kind {
            FileKind::Hypersurface => {
                if self.weights.iter().any(|&w| w != 1) {
                    return Err(ModelError::WeightedHypersurface.into());
                }
                let poly = parse_poly(&self.polynomial, &full).map_err(ExprError::from)?;
                VarietyModel::hypersurface(&self.name, poly, self.bad_primes.iter().copied())?
            }
            FileKind::DoubleCover => {
                let cover_index = match &self.cover_variable {
                    Some(v) => full
                        .index_of(v)
                        .ok_or_else(|| VarietyFileError::UnknownCover(v.clone()))?,
                    None => {
                        let poly = parse_poly(&self.polynomial, &full).map_err(ExprError::from)?;
                        let used = poly.support_vars();
                        let mut unused = (0..full.len()).filter(|i| !used.contains(i));
                        match (unused.next(), unused.next()) {
                            (Some(i), None) => i,
                            _ => return Err(VarietyFileError::AmbiguousCover),
                        }
                    }
                };
                let mut base_vars = self.variables.clone();
                let cover = base_vars.remove(cover_index);
                let base = Ring::try_new(base_vars)?;
                let branch = parse_poly(&self.polynomial, &base).map_err(ExprError::from)?;
                VarietyModel::double_cover(&self.name, cover, cover_index, branch, self.bad_primes.iter().copied())?
            }
        };
        if model.weights() != self.weights {
            return Err(ModelError::WeightMismatch(self.weights.clone()).into());
        }
        Ok(model)
    }
}
