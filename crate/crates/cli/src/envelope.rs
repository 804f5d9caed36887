//! Output envelope: every command reports its effective parameters and a
//! typed payload. JSON serialization is canonical (fixed field order,
//! sorted parameter keys, shortest round-trip floats) so envelopes
//! round-trip byte-identically.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use sgnpoles::asympt::AsymptoticReport;
use sgnpoles::kernel::MpValue;
use sgnpoles::solver::{EquiSolution, RationalExpansion};
use sgnpoles::verify::{CheckReport, ConvergenceTable};

#[derive(Debug, Serialize, Deserialize)]
pub struct OutputEnvelope {
    pub tool_version: String,
    pub command: String,
    pub params: BTreeMap<String, serde_json::Value>,
    pub payload: Payload,
    pub elapsed_ms: u64,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "type", content = "data", rename_all = "snake_case")]
#[allow(clippy::large_enum_variant)] // one payload per process
pub enum Payload {
    Solution(SolutionPayload),
    Table(ConvergenceTable),
    Checks(Vec<CheckReport>),
    Asympt(AsymptoticReport),
}

/// Solver output plus the derived quantities the solve command prints.
#[derive(Debug, Serialize, Deserialize)]
pub struct SolutionPayload {
    pub solution: EquiSolution,
    /// arccosh(1/L)
    pub b: MpValue,
    /// Alternation abscissas mapped back to x = √t.
    pub alternation_x: Vec<MpValue>,
    /// Laurent coefficients of the odd rational (weighted problems only).
    pub laurent: Option<RationalExpansion>,
}

impl OutputEnvelope {
    pub fn new(
        command: &str,
        params: BTreeMap<String, serde_json::Value>,
        payload: Payload,
        started: std::time::Instant,
    ) -> Self {
        OutputEnvelope {
            tool_version: env!("CARGO_PKG_VERSION").to_owned(),
            command: command.to_owned(),
            params,
            payload,
            elapsed_ms: started.elapsed().as_millis() as u64,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("envelope serializes")
    }
}

/// Convenience for building the params echo map.
pub fn param<V: Serialize>(map: &mut BTreeMap<String, serde_json::Value>, key: &str, value: V) {
    map.insert(
        key.to_owned(),
        serde_json::to_value(value).expect("parameter serializes"),
    );
}
