//! JSON image of a solved instance.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::de::Deserializer;
use serde::ser::{Error as _, Serializer};
use serde::{Deserialize, Serialize};
use serde_json::value::RawValue;

use crate::canonical::CanonicalMomentSeq;
use crate::error::{invalid, Result};
use crate::oracle::OracleResult;
use crate::poly::Polynomial;
use crate::solver::{ExtremalSolution, Kind, ProblemSpec, VerificationReport};

pub const SCHEMA_VERSION: u32 = 1;

/// A real written with 17 significant digits; non-finite values become `null`.
#[derive(Clone, Copy, PartialEq)]
pub struct Real(pub f64);

impl fmt::Debug for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.16e}", self.0)
    }
}

impl Serialize for Real {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return s.serialize_none();
        }
        let raw = RawValue::from_string(format!("{:.16e}", self.0)).map_err(S::Error::custom)?;
        raw.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Real {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Ok(Real(Option::<f64>::deserialize(d)?.unwrap_or(f64::NAN)))
    }
}

fn reals(v: &[f64]) -> Vec<Real> {
    v.iter().copied().map(Real).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpecRecord {
    pub kind: String,
    pub indices: Vec<usize>,
    pub b: Real,
}

impl From<&ProblemSpec> for SpecRecord {
    fn from(spec: &ProblemSpec) -> Self {
        Self {
            kind: spec.kind().as_str().to_owned(),
            indices: spec.indices().to_vec(),
            b: Real(spec.b()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolyRecord {
    pub index: usize,
    /// Ascending powers of `x`.
    pub coeffs: Vec<Real>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlphaRecord {
    pub index: usize,
    pub value: Real,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionBody {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phase_index: Option<usize>,
    pub dual_moments: Option<Vec<Real>>,
    pub alphas: Vec<AlphaRecord>,
    pub polys: Vec<PolyRecord>,
    pub objective: Real,
    pub active_set: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationRecord {
    pub constraint_sup: Real,
    pub argmax: Real,
    pub equimax_spread: Option<Real>,
    pub support_attainment: Option<Real>,
    pub duality_residual: Option<Real>,
    pub pass: bool,
}

impl From<&VerificationReport> for VerificationRecord {
    fn from(r: &VerificationReport) -> Self {
        Self {
            constraint_sup: Real(r.constraint_sup.sup),
            argmax: Real(r.constraint_sup.argmax),
            equimax_spread: r.equimax_spread.map(Real),
            support_attainment: r.support_attainment.map(Real),
            duality_residual: r.duality_residual.map(Real),
            pass: r.pass(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionRecord {
    pub version: u32,
    pub spec: SpecRecord,
    pub solution: SolutionBody,
    pub verification: VerificationRecord,
}

impl SolutionRecord {
    pub fn new(spec: &ProblemSpec, sol: &ExtremalSolution, report: &VerificationReport) -> Self {
        Self {
            version: SCHEMA_VERSION,
            spec: SpecRecord::from(spec),
            solution: SolutionBody {
                phase_index: sol.phase_index,
                dual_moments: sol.dual_moments.as_ref().map(|cm| reals(cm.p())),
                alphas: sol
                    .alphas
                    .iter()
                    .map(|(&index, &v)| AlphaRecord {
                        index,
                        value: Real(v),
                    })
                    .collect(),
                polys: sol
                    .polys
                    .iter()
                    .map(|(&index, p)| PolyRecord {
                        index,
                        coeffs: reals(p.coeffs()),
                    })
                    .collect(),
                objective: Real(sol.objective),
                active_set: sol.active_set.iter().copied().collect(),
            },
            verification: report.into(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("records always serialize")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        match serde_json::from_str::<Self>(s) {
            Ok(r) if r.version == SCHEMA_VERSION => Ok(r),
            Ok(r) => invalid(format!("unsupported schema version {}", r.version)),
            Err(e) => invalid(format!("malformed solution record: {e}")),
        }
    }

    pub fn problem_spec(&self) -> Result<ProblemSpec> {
        let kind: Kind = self.spec.kind.parse()?;
        ProblemSpec::new(kind, self.spec.indices.iter().copied(), self.spec.b.0)
    }

    /// Rebuilds the solution the record was made from.
    pub fn to_solution(&self) -> Result<ExtremalSolution> {
        let s = &self.solution;
        let dual_moments = match &s.dual_moments {
            Some(p) => Some(CanonicalMomentSeq::new(
                self.spec.b.0,
                p.iter().map(|r| r.0).collect(),
            )?),
            None => None,
        };
        let polys: BTreeMap<usize, Polynomial> = s
            .polys
            .iter()
            .map(|p| {
                (
                    p.index,
                    Polynomial::new(p.coeffs.iter().map(|r| r.0).collect()),
                )
            })
            .collect();
        Ok(ExtremalSolution {
            polys,
            alphas: s.alphas.iter().map(|a| (a.index, a.value.0)).collect(),
            objective: s.objective.0,
            phase_index: s.phase_index,
            dual_moments,
            active_set: s.active_set.iter().copied().collect::<BTreeSet<_>>(),
        })
    }
}

/// Solver objective against the brute-force oracle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleRecord {
    pub version: u32,
    pub spec: SpecRecord,
    pub solver_objective: Real,
    pub oracle_value: Real,
    pub gap: Real,
    pub tolerance: Real,
    pub budget: usize,
    pub evaluations: usize,
    pub seed: u64,
    pub pass: bool,
}

impl OracleRecord {
    /// Accepted gap: `1e-3 * max(1, objective)`.
    pub fn tolerance_for(objective: f64) -> f64 {
        1e-3 * objective.max(1.0)
    }

    pub fn new(spec: &ProblemSpec, objective: f64, oracle: &OracleResult, budget: usize) -> Self {
        let gap = (oracle.best_value - objective).abs();
        let tolerance = Self::tolerance_for(objective);
        Self {
            version: SCHEMA_VERSION,
            spec: SpecRecord::from(spec),
            solver_objective: Real(objective),
            oracle_value: Real(oracle.best_value),
            gap: Real(gap),
            tolerance: Real(tolerance),
            budget,
            evaluations: oracle.evaluations,
            seed: oracle.seed,
            pass: gap <= tolerance,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("records always serialize")
    }
}
