//! JSON initial conditions and CSV trajectory export.
//!
//! The JSON schema and the CSV column order are described in
//! `docs/simulate-io.md` at the repository root.

use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::family::{ClosedFormFamily, Member};
use super::integrate::Trajectory;
use super::residual::Residuals;
use super::system::{SimMode, SystemSpec};
use super::OdeError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FullInit {
    pub lambda: Vec<f64>,
    pub mu: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinearInit {
    pub tau: f64,
    pub phi: f64,
    pub psi: f64,
    /// `L_2..L_n1`.
    #[serde(default)]
    pub power_sums: Vec<f64>,
}

/// An initial-condition document. Exactly one of `state`, `linear`, `family`
/// must be present; the remaining optional fields default to CLI flags.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n1: Option<u32>,
    pub k: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kmax: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub state: Option<FullInit>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub linear: Option<LinearInit>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<Vec<Member>>,
}

/// A validated initial condition.
#[derive(Clone, Debug)]
pub struct Resolved {
    pub spec: SystemSpec,
    pub init: Vec<f64>,
    /// Present when the state comes from an explicit family.
    pub family: Option<ClosedFormFamily>,
}

impl InitDoc {
    pub fn parse(text: &str) -> Result<Self, OdeError> {
        serde_json::from_str(text).map_err(|e| OdeError::Json(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, OdeError> {
        let text = std::fs::read_to_string(path).map_err(|e| OdeError::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Checks the document and builds the state at `t0`.
    pub fn resolve(&self, t0: f64) -> Result<Resolved, OdeError> {
        let given = [self.state.is_some(), self.linear.is_some(), self.family.is_some()];
        if given.iter().filter(|b| **b).count() != 1 {
            return Err(OdeError::InvalidSpec(
                "exactly one of `state`, `linear`, `family` is required".into(),
            ));
        }
        let check_n1 = |found: usize| -> Result<u32, OdeError> {
            let found = found as u32;
            match self.n1 {
                Some(n1) if n1 != found => Err(OdeError::InvalidSpec(format!(
                    "`n1` is {n1} but the initial condition has {found} index pairs"
                ))),
                _ => Ok(found),
            }
        };
        if let Some(s) = &self.state {
            if s.lambda.len() != s.mu.len() {
                return Err(OdeError::InvalidSpec("`lambda` and `mu` differ in length".into()));
            }
            let n1 = check_n1(s.lambda.len())?;
            let spec = SystemSpec::full(n1, self.k)?;
            let init = s.lambda.iter().chain(&s.mu).copied().collect();
            return Ok(Resolved { spec, init, family: None });
        }
        if let Some(l) = &self.linear {
            let n1 = self
                .n1
                .ok_or_else(|| OdeError::InvalidSpec("`n1` is required with `linear`".into()))?;
            let spec = SystemSpec::linear(n1, self.k)?;
            if l.power_sums.len() != spec.tracked_power_sums() {
                return Err(OdeError::InvalidSpec(format!(
                    "`power_sums` needs L2..L{n1}, that is {} entries",
                    spec.tracked_power_sums()
                )));
            }
            let mut init = vec![l.tau, l.phi, l.psi];
            init.extend_from_slice(&l.power_sums);
            return Ok(Resolved { spec, init, family: None });
        }
        let members = self.family.clone().unwrap_or_default();
        check_n1(members.len())?;
        if self.k.fract() != 0.0 {
            return Err(OdeError::InvalidSpec("families need an integer K".into()));
        }
        let family = ClosedFormFamily::new(self.k as i32, members)?;
        Ok(Resolved {
            spec: family.spec(),
            init: family.state(t0)?,
            family: Some(family),
        })
    }
}

/// CSV header: `t`, the state columns, `tau` and `P0..Pk` (full mode only),
/// `odetau` (empty at the endpoints), `odetau_field`.
pub fn csv_header(spec: &SystemSpec, k_max: Option<usize>) -> Vec<String> {
    let mut h = vec!["t".to_string()];
    h.extend(spec.state_names());
    if spec.mode == SimMode::Full {
        h.push("tau".into());
        if let Some(k) = k_max {
            h.extend((0..=k).map(|k| format!("P{k}")));
        }
    }
    h.push("odetau".into());
    h.push("odetau_field".into());
    h
}

/// Writes one row per grid point. Floats use Rust's shortest round-trip form.
pub fn write_csv<W: Write>(out: W, traj: &Trajectory, res: &Residuals) -> Result<(), OdeError> {
    let k_max = if res.p.is_empty() { None } else { Some(res.p.len() - 1) };
    let mut w = csv::Writer::from_writer(out);
    let csv_err = |e: csv::Error| OdeError::Csv(e.to_string());
    w.write_record(csv_header(&traj.spec, k_max)).map_err(csv_err)?;
    let tau = traj.tau();
    for j in 0..traj.len() {
        let mut row = vec![traj.times[j].to_string()];
        row.extend(traj.states[j].iter().map(f64::to_string));
        if traj.spec.mode == SimMode::Full {
            row.push(tau[j].to_string());
        }
        row.extend(res.p.iter().map(|pk| pk[j].to_string()));
        row.push(res.odetau[j].map(|v| v.to_string()).unwrap_or_default());
        row.push(res.odetau_field[j].to_string());
        w.write_record(&row).map_err(csv_err)?;
    }
    w.flush().map_err(|e| OdeError::Io(e.to_string()))
}

pub fn write_csv_file(path: &Path, traj: &Trajectory, res: &Residuals) -> Result<(), OdeError> {
    let f = std::fs::File::create(path).map_err(|e| OdeError::Io(format!("{}: {e}", path.display())))?;
    write_csv(std::io::BufWriter::new(f), traj, res)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exactly_one_initial_condition() {
        let doc = InitDoc::parse(r#"{"k": 0, "state": {"lambda": [1], "mu": [0]}, "linear": {"tau": 0, "phi": 0, "psi": 0}}"#)
            .unwrap();
        assert!(doc.resolve(0.0).is_err());
    }

    #[test]
    fn unknown_fields_rejected() {
        assert!(InitDoc::parse(r#"{"k": 0, "colour": 1}"#).is_err());
    }

    #[test]
    fn family_document() {
        let doc = InitDoc::parse(r#"{"k": 0, "family": [{"a": 1, "c": 0}, {"a": -1, "c": 0}]}"#).unwrap();
        let r = doc.resolve(1.0).unwrap();
        assert_eq!(r.init, vec![1.0, -1.0, -1.0, -1.0]);
        assert_eq!(csv_header(&r.spec, Some(1)), ["t", "l1", "l2", "m1", "m2", "tau", "P0", "P1", "odetau", "odetau_field"]);
    }

    #[test]
    fn linear_needs_power_sums() {
        let doc = InitDoc::parse(r#"{"n1": 3, "k": 1, "linear": {"tau": 1, "phi": 0, "psi": 0, "power_sums": [1]}}"#)
            .unwrap();
        assert!(doc.resolve(0.0).is_err());
    }
}
