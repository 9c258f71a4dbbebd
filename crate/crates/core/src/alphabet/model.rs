use std::collections::BTreeSet;

use thiserror::Error;

use crate::expr::{ExprError, MultiPoly, Ring};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error("defining polynomial is zero")]
    ZeroPolynomial,
    #[error("defining polynomial is constant")]
    ConstantPolynomial,
    #[error("polynomial is not homogeneous in the base variables")]
    NotHomogeneous,
    #[error("branch polynomial has odd degree {0}")]
    OddBranchDegree(u32),
    #[error("cover variable {0:?} also occurs among the base variables")]
    CoverVariableClash(String),
    #[error("cover variable position {index} out of range for {len} variables")]
    CoverIndex { index: usize, len: usize },
    #[error("hypersurfaces must live in unweighted projective space")]
    WeightedHypersurface,
    #[error("weights {0:?} do not match the model")]
    WeightMismatch(Vec<u32>),
}

/// What kind of equation cuts out the model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModelKind {
    /// `poly = 0` in ℙⁿ.
    Hypersurface { poly: MultiPoly },
    /// `w² = branch` in ℙ(1,…,1,d/2), where `branch` is homogeneous of even
    /// degree `d` in the base variables. `cover_index` is the position of `w`
    /// in the full variable list.
    DoubleCover {
        cover_var: String,
        cover_index: usize,
        branch: MultiPoly,
    },
}

/// A countable variety: a hypersurface or a double cover of projective
/// space, with its configured set of bad primes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarietyModel {
    name: String,
    kind: ModelKind,
    bad_primes: BTreeSet<u64>,
}

fn check_base_poly(poly: &MultiPoly) -> Result<u32, ModelError> {
    let info = poly.degree_info();
    match info.degree {
        None => Err(ModelError::ZeroPolynomial),
        Some(0) => Err(ModelError::ConstantPolynomial),
        Some(_) if !info.homogeneous => Err(ModelError::NotHomogeneous),
        Some(d) => Ok(d),
    }
}

impl VarietyModel {
    pub fn hypersurface(
        name: impl Into<String>,
        poly: MultiPoly,
        bad_primes: impl IntoIterator<Item = u64>,
    ) -> Result<VarietyModel, ModelError> {
        check_base_poly(&poly)?;
        Ok(VarietyModel {
            name: name.into(),
            kind: ModelKind::Hypersurface { poly },
            bad_primes: bad_primes.into_iter().collect(),
        })
    }

    pub fn double_cover(
        name: impl Into<String>,
        cover_var: impl Into<String>,
        cover_index: usize,
        branch: MultiPoly,
        bad_primes: impl IntoIterator<Item = u64>,
    ) -> Result<VarietyModel, ModelError> {
        let cover_var = cover_var.into();
        let d = check_base_poly(&branch)?;
        if d % 2 != 0 {
            return Err(ModelError::OddBranchDegree(d));
        }
        if branch.ring().index_of(&cover_var).is_some() {
            return Err(ModelError::CoverVariableClash(cover_var));
        }
        Ring::try_new([cover_var.clone()])?;
        if cover_index > branch.ring().len() {
            return Err(ModelError::CoverIndex {
                index: cover_index,
                len: branch.ring().len() + 1,
            });
        }
        Ok(VarietyModel {
            name: name.into(),
            kind: ModelKind::DoubleCover {
                cover_var,
                cover_index,
                branch,
            },
            bad_primes: bad_primes.into_iter().collect(),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> &ModelKind {
        &self.kind
    }

    pub fn bad_primes(&self) -> &BTreeSet<u64> {
        &self.bad_primes
    }

    pub fn with_bad_primes(mut self, bad: impl IntoIterator<Item = u64>) -> VarietyModel {
        self.bad_primes = bad.into_iter().collect();
        self
    }

    pub fn is_good_prime(&self, p: u64) -> bool {
        !self.bad_primes.contains(&p)
    }

    pub fn is_double_cover(&self) -> bool {
        matches!(self.kind, ModelKind::DoubleCover { .. })
    }

    /// The polynomial evaluated on base points: the defining polynomial of a
    /// hypersurface or the branch polynomial of a double cover.
    pub fn base_poly(&self) -> &MultiPoly {
        match &self.kind {
            ModelKind::Hypersurface { poly } => poly,
            ModelKind::DoubleCover { branch, .. } => branch,
        }
    }

    pub fn base_ring(&self) -> &Ring {
        self.base_poly().ring()
    }

    /// Degree of the base polynomial.
    pub fn degree(&self) -> u32 {
        self.base_poly().total_degree().expect("validated nonzero")
    }

    /// Dimension of the variety.
    pub fn dimension(&self) -> usize {
        match &self.kind {
            ModelKind::Hypersurface { poly } => poly.ring().len() - 2,
            ModelKind::DoubleCover { branch, .. } => branch.ring().len() - 1,
        }
    }

    /// All ambient coordinates, including the cover coordinate.
    pub fn variables(&self) -> Vec<String> {
        let mut vars = self.base_ring().vars().to_vec();
        if let ModelKind::DoubleCover {
            cover_var, cover_index, ..
        } = &self.kind
        {
            vars.insert(*cover_index, cover_var.clone());
        }
        vars
    }

    /// Ambient weights aligned with [`VarietyModel::variables`].
    pub fn weights(&self) -> Vec<u32> {
        let mut w = vec![1; self.base_ring().len()];
        if let ModelKind::DoubleCover { cover_index, .. } = &self.kind {
            w.insert(*cover_index, self.degree() / 2);
        }
        w
    }
}
