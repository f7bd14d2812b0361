//! Line-oriented text reports and instance files.
//!
//! Reports are a sequence of `check` lines (one per verified invariant)
//! followed by an `overall` verdict; instance files store the defining
//! subspace of a K3 instance so a run can be reproduced exactly.

use std::fmt::Write as _;
use std::time::Instant;

use crate::error::Error;
use crate::field::{Elem, FieldCtx};
use crate::linalg::Subspace;
use crate::pluecker::N15;
use crate::vsp::{instance_from_subspace, K3Instance};

/// Version stamp written at the top of every report and instance file.
pub const SCHEMA: u32 = 1;

/// One verified fact: what was expected, what was observed, and whether
/// they agree.
#[derive(Clone, Debug)]
pub struct CheckRecord {
    pub name: String,
    pub expected: String,
    pub observed: String,
    pub pass: bool,
    pub millis: u128,
}

impl CheckRecord {
    pub fn render(&self) -> String {
        format!(
            "check {} expected={} observed={} status={} ms={}",
            self.name,
            self.expected,
            self.observed,
            if self.pass { "pass" } else { "fail" },
            self.millis
        )
    }
}

/// A report for one CLI command: a list of checks plus an overall verdict
/// that passes only if every check does.
#[derive(Clone, Debug)]
pub struct Report {
    pub command: String,
    pub records: Vec<CheckRecord>,
}

impl Report {
    pub fn new(command: &str) -> Report {
        Report {
            command: command.to_string(),
            records: vec![],
        }
    }

    pub fn push(&mut self, name: &str, expected: &str, observed: &str, millis: u128) {
        self.records.push(CheckRecord {
            name: name.to_string(),
            expected: expected.to_string(),
            observed: observed.to_string(),
            pass: expected == observed,
            millis,
        });
    }

    /// Record a check whose observed value is produced by `body`, timing it.
    pub fn timed<F>(&mut self, name: &str, expected: &str, body: F)
    where
        F: FnOnce() -> String,
    {
        let start = Instant::now();
        let observed = body();
        self.push(name, expected, &observed, start.elapsed().as_millis());
    }

    pub fn all_pass(&self) -> bool {
        !self.records.is_empty() && self.records.iter().all(|r| r.pass)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "schema {SCHEMA}");
        let _ = writeln!(out, "command {}", self.command);
        for r in &self.records {
            let _ = writeln!(out, "{}", r.render());
        }
        let _ = writeln!(
            out,
            "overall {}",
            if self.all_pass() { "pass" } else { "fail" }
        );
        out
    }
}

fn elem_str(e: &Elem) -> Result<String, Error> {
    match e {
        Elem::Fp(v) => Ok(v.to_string()),
        _ => Err(Error::InvalidInput(
            "instance files store prime-field entries only".into(),
        )),
    }
}

/// Serialize an instance: the prime, the sampling seed, and the nine basis
/// rows of its defining subspace of the dual 15-space.  Everything else is
/// recomputed (and revalidated) on load.
pub fn write_instance(inst: &K3Instance) -> Result<String, Error> {
    let mut out = String::new();
    let _ = writeln!(out, "schema {SCHEMA}");
    let _ = writeln!(out, "kind k3-instance");
    let _ = writeln!(out, "prime {}", inst.ctx.characteristic());
    let _ = writeln!(out, "seed {}", inst.seed);
    for row in &inst.l_s.basis {
        let entries: Result<Vec<String>, Error> = row.iter().map(elem_str).collect();
        let _ = writeln!(out, "ls {}", entries?.join(" "));
    }
    Ok(out)
}

/// Parse an instance file written by [`write_instance`] and rebuild the
/// full instance from its defining subspace, re-running every validity gate.
pub fn parse_instance(input: &str) -> Result<K3Instance, Error> {
    let mut prime: Option<u64> = None;
    let mut seed: u64 = 0;
    let mut rows: Vec<Vec<u64>> = vec![];
    for line in input.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut it = line.split_whitespace();
        let key = it.next().unwrap_or("");
        let rest: Vec<&str> = it.collect();
        let bad = |what: &str| Error::Parse(format!("instance file: bad {what} line: {line}"));
        match key {
            "schema" => {
                let v: u32 = rest
                    .first()
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| bad("schema"))?;
                if v != SCHEMA {
                    return Err(Error::Parse(format!("unsupported schema version {v}")));
                }
            }
            "kind" => {
                if rest.first() != Some(&"k3-instance") {
                    return Err(bad("kind"));
                }
            }
            "prime" => {
                prime = Some(
                    rest.first()
                        .and_then(|s| s.parse().ok())
                        .ok_or_else(|| bad("prime"))?,
                );
            }
            "seed" => {
                seed = rest
                    .first()
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| bad("seed"))?;
            }
            "ls" => {
                let row: Option<Vec<u64>> = rest.iter().map(|s| s.parse().ok()).collect();
                let row = row.ok_or_else(|| bad("ls"))?;
                if row.len() != N15 {
                    return Err(bad("ls"));
                }
                rows.push(row);
            }
            _ => return Err(bad("key")),
        }
    }
    let p = prime.ok_or_else(|| Error::Parse("instance file: missing prime".into()))?;
    if rows.len() != 9 {
        return Err(Error::Parse(format!(
            "instance file: expected 9 ls rows, found {}",
            rows.len()
        )));
    }
    let ctx = FieldCtx::prime(p)?;
    let basis: Vec<Vec<Elem>> = rows
        .iter()
        .map(|r| r.iter().map(|&v| ctx.from_i64(v as i64)).collect())
        .collect();
    let l_s = Subspace::from_rows(&ctx, N15, basis);
    instance_from_subspace(seed, &ctx, l_s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vsp::k3_random;

    #[test]
    fn instance_roundtrip() {
        let ctx = FieldCtx::prime(10007).unwrap();
        let inst = k3_random(1, &ctx).unwrap();
        let text = write_instance(&inst).unwrap();
        let back = parse_instance(&text).unwrap();
        assert_eq!(back.seed, inst.seed);
        assert_eq!(back.l_s.basis, inst.l_s.basis);
        assert_eq!(back.f.poly, inst.f.poly);
        assert_eq!(back.m_p.poly, inst.m_p.poly);
    }

    #[test]
    fn report_verdict() {
        let mut r = Report::new("demo");
        r.push("a", "1", "1", 0);
        assert!(r.all_pass());
        r.push("b", "1", "2", 0);
        assert!(!r.all_pass());
        let text = r.render();
        assert!(text.contains("check a expected=1 observed=1 status=pass"));
        assert!(text.ends_with("overall fail\n"));
    }

    #[test]
    fn instance_parse_rejects_garbage() {
        assert!(parse_instance("schema 1\nkind k3-instance\nprime 7\n").is_err());
        assert!(parse_instance("schema 2\n").is_err());
    }
}
