//! Report records, the text and machine emitters, and the machine parser.
//!
//! Machine format, version 1. UTF-8, `\n` line endings, one `key: value`
//! pair per line, blocks separated by one blank line:
//!
//! ```text
//! format: qsverify-report 1
//!
//! id: 1
//! kind: node
//! verdict: PASS
//! detail: is_node(Q, n1): node at (1:0:0:0)
//!
//! total: 1
//! pass: 1
//! fail: 0
//! mismatch: 0
//! skip: 0
//! exit: 0
//! ```
//!
//! The first block is the header, then one block per check in declaration
//! order, then the summary block. In `detail` a backslash is written `\\`,
//! a newline `\n` and a carriage return `\r`. The output carries no timing and is byte-identical
//! across runs with the same inputs.

use std::fmt::Write as _;
use std::time::Duration;

use crate::families::Verdict;

use super::VcliError;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

const HEADER: &str = "format: qsverify-report 1";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckRecord {
    pub id: String,
    pub kind: String,
    pub verdict: Verdict,
    pub detail: String,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Summary {
    pub total: usize,
    pub pass: usize,
    pub fail: usize,
    pub mismatch: usize,
    pub skip: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub records: Vec<CheckRecord>,
    /// Wall time of the run; shown in text reports only.
    pub elapsed: Option<Duration>,
}

impl Report {
    pub fn summary(&self) -> Summary {
        let mut s = Summary { total: self.records.len(), ..Summary::default() };
        for r in &self.records {
            match r.verdict {
                Verdict::Pass => s.pass += 1,
                Verdict::Fail => s.fail += 1,
                Verdict::Mismatch => s.mismatch += 1,
                Verdict::Skip => s.skip += 1,
            }
        }
        s
    }

    /// 0 when nothing failed or mismatched, 1 otherwise.
    pub fn exit_status(&self) -> i32 {
        let s = self.summary();
        if s.fail + s.mismatch == 0 {
            EXIT_OK
        } else {
            EXIT_FAILED
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Machine,
}

fn one_line(s: &str) -> String {
    s.replace('\n', " ")
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('\n', "\\n").replace('\r', "\\r")
}

fn unescape(s: &str) -> String {
    let mut out = String::new();
    let mut it = s.chars();
    while let Some(c) = it.next() {
        if c == '\\' {
            match it.next() {
                Some('n') => out.push('\n'),
                Some('r') => out.push('\r'),
                Some(o) => out.push(o),
                None => out.push('\\'),
            }
        } else {
            out.push(c);
        }
    }
    out
}

pub fn emit_report(r: &Report, format: Format) -> String {
    let s = r.summary();
    let mut out = String::new();
    match format {
        Format::Text => {
            for c in &r.records {
                let _ = writeln!(out, "CHECK {} {} {} {}", c.id, c.kind, c.verdict, one_line(&c.detail));
            }
            let _ = writeln!(
                out,
                "SUMMARY total={} pass={} fail={} mismatch={} skip={} exit={}",
                s.total,
                s.pass,
                s.fail,
                s.mismatch,
                s.skip,
                r.exit_status()
            );
            if let Some(t) = r.elapsed {
                let _ = writeln!(out, "TIME {:.3}s", t.as_secs_f64());
            }
        }
        Format::Machine => {
            let _ = writeln!(out, "{}", HEADER);
            for c in &r.records {
                let _ = write!(
                    out,
                    "\nid: {}\nkind: {}\nverdict: {}\ndetail: {}\n",
                    c.id,
                    c.kind,
                    c.verdict,
                    escape(&c.detail)
                );
            }
            let _ = write!(
                out,
                "\ntotal: {}\npass: {}\nfail: {}\nmismatch: {}\nskip: {}\nexit: {}\n",
                s.total,
                s.pass,
                s.fail,
                s.mismatch,
                s.skip,
                r.exit_status()
            );
        }
    }
    out
}

fn bad(line: usize, expected: &str, found: &str) -> VcliError {
    VcliError::Parse { line, col: 1, expected: expected.into(), found: found.into() }
}

/// Read a machine report back. The summary block must agree with the
/// records.
pub fn parse_machine_report(text: &str) -> Result<Report, VcliError> {
    let mut blocks: Vec<Vec<(usize, String, String)>> = vec![Vec::new()];
    for (k, line) in text.lines().enumerate() {
        if line.is_empty() {
            blocks.push(Vec::new());
            continue;
        }
        let (key, value) = line.split_once(": ").ok_or_else(|| bad(k + 1, "'key: value'", line))?;
        blocks.last_mut().expect("nonempty").push((k + 1, key.to_string(), value.to_string()));
    }
    blocks.retain(|b| !b.is_empty());
    let header = blocks.first().ok_or_else(|| bad(1, HEADER, "empty input"))?;
    if header.len() != 1 || format!("{}: {}", header[0].1, header[0].2) != HEADER {
        return Err(bad(1, HEADER, text.lines().next().unwrap_or("")));
    }
    let summary = blocks.last().filter(|_| blocks.len() >= 2).ok_or_else(|| bad(1, "a summary block", "nothing"))?;
    let mut records = Vec::new();
    for b in &blocks[1..blocks.len() - 1] {
        let field = |i: usize, key: &str| -> Result<String, VcliError> {
            match b.get(i) {
                Some((_, k, v)) if k == key => Ok(v.clone()),
                Some((l, k, _)) => Err(bad(*l, key, k)),
                None => Err(bad(b[0].0, key, "end of block")),
            }
        };
        if b.len() != 4 {
            return Err(bad(b[0].0, "four keys: id, kind, verdict, detail", &format!("{} keys", b.len())));
        }
        let verdict = field(2, "verdict")?;
        records.push(CheckRecord {
            id: field(0, "id")?,
            kind: field(1, "kind")?,
            verdict: verdict.parse().map_err(|e: String| bad(b[2].0, "a verdict", &e))?,
            detail: unescape(&field(3, "detail")?),
        });
    }
    let report = Report { records, elapsed: None };
    let s = report.summary();
    let want = [
        ("total", s.total as i64),
        ("pass", s.pass as i64),
        ("fail", s.fail as i64),
        ("mismatch", s.mismatch as i64),
        ("skip", s.skip as i64),
        ("exit", report.exit_status() as i64),
    ];
    if summary.len() != want.len() {
        return Err(bad(summary[0].0, "six summary keys", &format!("{} keys", summary.len())));
    }
    for ((line, k, v), (wk, wv)) in summary.iter().zip(want) {
        if k != wk {
            return Err(bad(*line, wk, k));
        }
        if v.parse::<i64>().ok() != Some(wv) {
            return Err(bad(*line, &format!("{} consistent with the records ({})", wk, wv), v));
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rec(id: &str, v: Verdict, d: &str) -> CheckRecord {
        CheckRecord { id: id.into(), kind: "node".into(), verdict: v, detail: d.into() }
    }

    #[test]
    fn empty_report_is_summary_only() {
        let r = Report::default();
        assert_eq!(emit_report(&r, Format::Text), "SUMMARY total=0 pass=0 fail=0 mismatch=0 skip=0 exit=0\n");
        assert_eq!(r.exit_status(), EXIT_OK);
        assert_eq!(parse_machine_report(&emit_report(&r, Format::Machine)).unwrap(), r);
    }

    #[test]
    fn failing_check_sets_exit_one() {
        let r = Report { records: vec![rec("1", Verdict::Fail, "is_node(Q, P): smooth-on-surface")], elapsed: None };
        assert_eq!(r.exit_status(), EXIT_FAILED);
        assert!(emit_report(&r, Format::Text).starts_with("CHECK 1 node FAIL is_node(Q, P)"));
    }

    #[test]
    fn tampered_summary_rejected() {
        let r = Report { records: vec![rec("1", Verdict::Pass, "ok")], elapsed: None };
        let m = emit_report(&r, Format::Machine).replace("pass: 1", "pass: 2");
        assert!(parse_machine_report(&m).is_err());
    }

    fn verdict() -> impl Strategy<Value = Verdict> {
        prop_oneof![Just(Verdict::Pass), Just(Verdict::Fail), Just(Verdict::Mismatch), Just(Verdict::Skip)]
    }

    proptest! {
        #[test]
        fn machine_round_trip(items in proptest::collection::vec((verdict(), "[ -~\\n\\r\\\\]{0,40}"), 0..12)) {
            let records = items
                .iter()
                .enumerate()
                .map(|(i, (v, d))| rec(&(i + 1).to_string(), *v, d))
                .collect();
            let r = Report { records, elapsed: None };
            let text = emit_report(&r, Format::Machine);
            let back = parse_machine_report(&text).unwrap();
            prop_assert_eq!(&back, &r);
            prop_assert_eq!(emit_report(&back, Format::Machine), text);
        }
    }
}
