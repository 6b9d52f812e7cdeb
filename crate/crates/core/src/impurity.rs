//! Admissible impurity functions.
//!
//! Every function here depends on a set of examples only through its
//! [`ClassCounts`], vanishes on single-class sets, and is monotone and
//! supermodular as a set function. Values are exact integers so risk
//! comparisons never suffer from floating-point ties.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::dataset::ClassCounts;
use crate::error::{Error, Result};

/// Exact impurity value.
pub type Impurity = u128;

/// One monomial `coefficient * prod_i n_i^exponents[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyTerm {
    pub coefficient: u64,
    pub exponents: Vec<u32>,
}

impl PolyTerm {
    pub fn new(coefficient: u64, exponents: Vec<u32>) -> Self {
        PolyTerm {
            coefficient,
            exponents,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ImpuritySpec {
    /// Sum over unordered class pairs of `[n_i - a]_+ [n_j - a]_+`.
    ThresholdPairs { alpha: u64 },
    /// Sum over unordered class pairs of `[[n_i - a]_+ [n_j - a]_+ - a^2]_+`.
    OffsetPairs { alpha: u64 },
    /// `(sum n_i)^l - sum n_i^l`.
    Powers { l: u32 },
    /// Non-negative polynomial without singleton terms.
    Polynomial { terms: Vec<PolyTerm> },
}

impl Default for ImpuritySpec {
    fn default() -> Self {
        ImpuritySpec::ThresholdPairs { alpha: 0 }
    }
}

impl fmt::Display for ImpuritySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ImpuritySpec::ThresholdPairs { alpha } => write!(f, "pairs(alpha={alpha})"),
            ImpuritySpec::OffsetPairs { alpha } => write!(f, "pairs-offset(alpha={alpha})"),
            ImpuritySpec::Powers { l } => write!(f, "powers(l={l})"),
            ImpuritySpec::Polynomial { terms } => write!(f, "polynomial({} terms)", terms.len()),
        }
    }
}

impl ImpuritySpec {
    pub fn pairs(alpha: u64) -> Self {
        ImpuritySpec::ThresholdPairs { alpha }
    }

    pub fn powers(l: u32) -> Result<Self> {
        let spec = ImpuritySpec::Powers { l };
        spec.validate()?;
        Ok(spec)
    }

    pub fn polynomial(terms: Vec<PolyTerm>) -> Result<Self> {
        let spec = ImpuritySpec::Polynomial { terms };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            ImpuritySpec::ThresholdPairs { .. } | ImpuritySpec::OffsetPairs { .. } => Ok(()),
            ImpuritySpec::Powers { l } if *l < 2 => Err(Error::InvalidImpuritySpec(format!(
                "powers exponent must be >= 2, got {l}"
            ))),
            ImpuritySpec::Powers { .. } => Ok(()),
            ImpuritySpec::Polynomial { terms } => {
                if terms.is_empty() {
                    return Err(Error::InvalidImpuritySpec("polynomial has no terms".into()));
                }
                for (i, t) in terms.iter().enumerate() {
                    let nonzero = t.exponents.iter().filter(|&&p| p > 0).count();
                    if nonzero < 2 {
                        return Err(Error::InvalidImpuritySpec(format!(
                            "term {i} has {nonzero} non-zero exponents, need at least 2"
                        )));
                    }
                }
                Ok(())
            }
        }
    }

    /// Threshold parameter for threshold-pairs specs.
    pub fn alpha(&self) -> Option<u64> {
        match self {
            ImpuritySpec::ThresholdPairs { alpha } | ImpuritySpec::OffsetPairs { alpha } => {
                Some(*alpha)
            }
            _ => None,
        }
    }
}

fn overflow(spec: &ImpuritySpec, counts: &ClassCounts) -> Error {
    Error::ImpurityOverflow {
        spec: spec.to_string(),
        counts: counts.0.clone(),
    }
}

fn hinged_pairs(counts: &ClassCounts, alpha: u64, offset: bool) -> Result<Impurity> {
    let err = || {
        let spec = if offset {
            ImpuritySpec::OffsetPairs { alpha }
        } else {
            ImpuritySpec::pairs(alpha)
        };
        overflow(&spec, counts)
    };
    let alpha = alpha as u128;
    let alpha_sq = if offset {
        alpha.checked_mul(alpha).ok_or_else(err)?
    } else {
        0
    };
    let hinged: Vec<u128> = counts
        .as_slice()
        .iter()
        .map(|&n| (n as u128).saturating_sub(alpha))
        .filter(|&h| h > 0)
        .collect();
    let mut total: u128 = 0;
    for (i, &a) in hinged.iter().enumerate() {
        for &b in &hinged[i + 1..] {
            let prod = a.checked_mul(b).ok_or_else(err)?;
            total = total
                .checked_add(prod.saturating_sub(alpha_sq))
                .ok_or_else(err)?;
        }
    }
    Ok(total)
}

/// Threshold-pairs impurity: zero unless at least two classes exceed `alpha`.
pub fn eval_threshold_pairs(counts: &ClassCounts, alpha: u64) -> Result<Impurity> {
    hinged_pairs(counts, alpha, false)
}

/// Threshold-pairs with each pair term additionally reduced by `alpha^2`.
pub fn eval_offset_pairs(counts: &ClassCounts, alpha: u64) -> Result<Impurity> {
    hinged_pairs(counts, alpha, true)
}

pub fn eval_powers(counts: &ClassCounts, l: u32) -> Result<Impurity> {
    let err = || overflow(&ImpuritySpec::Powers { l }, counts);
    let total: u128 = counts.as_slice().iter().map(|&n| n as u128).sum();
    let whole = total.checked_pow(l).ok_or_else(err)?;
    let mut parts: u128 = 0;
    for &n in counts.as_slice() {
        parts = parts
            .checked_add((n as u128).checked_pow(l).ok_or_else(err)?)
            .ok_or_else(err)?;
    }
    Ok(whole - parts)
}

pub fn eval_polynomial(counts: &ClassCounts, terms: &[PolyTerm]) -> Result<Impurity> {
    let err = || {
        overflow(
            &ImpuritySpec::Polynomial {
                terms: terms.to_vec(),
            },
            counts,
        )
    };
    let mut total: u128 = 0;
    for term in terms {
        let mut value = term.coefficient as u128;
        for (class, &p) in term.exponents.iter().enumerate() {
            if p == 0 {
                continue;
            }
            let n = counts.get(class) as u128;
            value = value
                .checked_mul(n.checked_pow(p).ok_or_else(err)?)
                .ok_or_else(err)?;
            if value == 0 {
                break;
            }
        }
        total = total.checked_add(value).ok_or_else(err)?;
    }
    Ok(total)
}

/// Evaluates `spec` on a count vector.
pub fn impurity(spec: &ImpuritySpec, counts: &ClassCounts) -> Result<Impurity> {
    match spec {
        ImpuritySpec::ThresholdPairs { alpha } => eval_threshold_pairs(counts, *alpha),
        ImpuritySpec::OffsetPairs { alpha } => eval_offset_pairs(counts, *alpha),
        ImpuritySpec::Powers { l } => eval_powers(counts, *l),
        ImpuritySpec::Polynomial { terms } => eval_polynomial(counts, terms),
    }
}
