//! Machine-readable run reports: JSON with a stable schema version,
//! serialized deterministically (fixed field order, shortest-round-trip
//! floats, no timestamps) so identical runs produce byte-identical files.

use serde::Serialize;

use crate::domain::DomainConfig;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    schema_version: u32,
    kind: &'a str,
    report: &'a T,
}

/// Serialize a report payload under the versioned envelope.
pub fn render<T: Serialize>(kind: &str, payload: &T) -> String {
    let env = Envelope {
        schema_version: SCHEMA_VERSION,
        kind,
        report: payload,
    };
    let mut s = serde_json::to_string_pretty(&env).expect("report serializes");
    s.push('\n');
    s
}

/// Summary of a density solve.
#[derive(Debug, Clone, Serialize)]
pub struct DensitySummary {
    pub domain: DomainConfig,
    pub window: f64,
    pub h: f64,
    pub nx: usize,
    pub ny: usize,
    pub residual: f64,
    pub patches: usize,
    /// Two-sided near-boundary bound with the (engineering-choice) constant
    /// `K = 20`: nodes checked and nodes satisfying it.
    pub boundary_nodes_checked: usize,
    pub boundary_nodes_ok: usize,
    pub from_cache: bool,
}

/// One row of the meridian class scan.
#[derive(Debug, Clone, Serialize)]
pub struct MeridianRow {
    /// Indices of the complement components on the E side.
    pub class: Vec<usize>,
    pub length: f64,
    pub simple: bool,
    pub principal: bool,
    pub unique_evidence: usize,
    /// For principal classes: this meridian crosses no other principal one.
    pub nesting_ok: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct MeridianScan {
    pub domain: DomainConfig,
    pub rows: Vec<MeridianRow>,
    pub notice: Option<String>,
}

/// Fixed-width text table for terminal output; the JSON file is the
/// machine-readable artifact.
pub fn meridian_table(scan: &MeridianScan) -> String {
    let mut out = String::new();
    out.push_str("class            length      simple principal evidence nesting_ok\n");
    for row in &scan.rows {
        let class = format!("{:?}", row.class);
        out.push_str(&format!(
            "{:<16} {:>10.4} {:>6} {:>9} {:>8} {:>10}\n",
            class, row.length, row.simple, row.principal, row.unique_evidence, row.nesting_ok
        ));
    }
    if let Some(n) = &scan.notice {
        out.push_str(n);
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn envelope_is_versioned_and_stable() {
        let scan = MeridianScan {
            domain: DomainConfig { components: vec![] },
            rows: vec![MeridianRow {
                class: vec![0, 1],
                length: 45.1334,
                simple: true,
                principal: false,
                unique_evidence: 2,
                nesting_ok: true,
            }],
            notice: None,
        };
        let a = render("meridian_scan", &scan);
        let b = render("meridian_scan", &scan);
        assert_eq!(a, b);
        assert!(a.contains("\"schema_version\": 1"));
        assert!(a.contains("\"kind\": \"meridian_scan\""));
    }
}
