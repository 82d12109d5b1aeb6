//! Versioned JSON envelope for command output.
//!
//! Every command prints exactly one report. The payload is deterministic
//! for a fixed command line and seed; timing lives outside it so reports
//! stay byte-comparable. Failure reports carry a witness with full inputs
//! plus a replay command line that re-checks just that instance.

use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;
use serde_json::Value as Json;

pub const SCHEMA: &str = "forge-report/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// The question was not settled within the configured rounds.
    Inconclusive,
    /// A budget ran out mid-sweep; counts cover only the explored part.
    Partial,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::Inconclusive | Status::Partial => 3,
        }
    }
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Report {
    pub schema: &'static str,
    pub tool_version: &'static str,
    pub command: Vec<String>,
    pub status: Status,
    pub payload: Json,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Json>,
    /// Argv that reproduces a failure as a single instance check.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub replay: Option<Vec<String>>,
    pub timing_ms: u128,
}

impl Report {
    pub fn new(command: Vec<String>, status: Status, payload: Json, started: Instant) -> Report {
        Report {
            schema: SCHEMA,
            tool_version: env!("CARGO_PKG_VERSION"),
            command,
            status,
            payload,
            witness: None,
            replay: None,
            timing_ms: started.elapsed().as_millis(),
        }
    }

    pub fn render(&self, pretty: bool) -> String {
        if pretty {
            serde_json::to_string_pretty(self).expect("report serializes")
        } else {
            serde_json::to_string(self).expect("report serializes")
        }
    }

    /// Print to stdout and, when a path is given, write the same bytes
    /// there.
    pub fn emit(&self, out: Option<&Path>, pretty: bool) -> std::io::Result<()> {
        let text = self.render(pretty);
        println!("{text}");
        if let Some(path) = out {
            if let Some(dir) = path.parent() {
                if !dir.as_os_str().is_empty() {
                    std::fs::create_dir_all(dir)?;
                }
            }
            std::fs::write(path, text + "\n")?;
        }
        Ok(())
    }
}

/// Where to write the report file: an explicit flag wins; otherwise the
/// FORGE_OUT directory, when set, receives `<command-path>.json`.
pub fn resolve_out(explicit: Option<PathBuf>, command_path: &str) -> Option<PathBuf> {
    explicit.or_else(|| {
        std::env::var_os("FORGE_OUT").map(|dir| PathBuf::from(dir).join(format!("{command_path}.json")))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_follow_status() {
        assert_eq!(Status::Pass.exit_code(), 0);
        assert_eq!(Status::Fail.exit_code(), 1);
        assert_eq!(Status::Inconclusive.exit_code(), 3);
        assert_eq!(Status::Partial.exit_code(), 3);
    }

    #[test]
    fn envelope_shape() {
        let r = Report::new(
            vec!["forge".into(), "suite".into(), "laws".into()],
            Status::Pass,
            serde_json::json!({"checked": 3}),
            Instant::now(),
        );
        let v: Json = serde_json::from_str(&r.render(false)).unwrap();
        assert_eq!(v["schema"], SCHEMA);
        assert_eq!(v["status"], "pass");
        assert_eq!(v["payload"]["checked"], 3);
        assert!(v.get("witness").is_none());
        assert!(v["timingMs"].is_number());
        assert!(r.render(true).contains('\n'));
    }

    #[test]
    fn out_path_resolution() {
        let explicit = resolve_out(Some(PathBuf::from("x.json")), "monad-laws");
        assert_eq!(explicit, Some(PathBuf::from("x.json")));
        std::env::remove_var("FORGE_OUT");
        assert_eq!(resolve_out(None, "monad-laws"), None);
        std::env::set_var("FORGE_OUT", "/tmp/forge-reports");
        assert_eq!(
            resolve_out(None, "monad-laws"),
            Some(PathBuf::from("/tmp/forge-reports/monad-laws.json"))
        );
        std::env::remove_var("FORGE_OUT");
    }
}
