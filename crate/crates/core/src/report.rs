//! Structured verdicts with witnesses.

use std::fmt::Write as _;

use crate::field::Field;
use crate::graded::Morphism;
use crate::matrix::Matrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Verdict {
    Pass,
    Fail,
    /// Informational record; never affects the overall outcome.
    Info,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Info => "info",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    /// Which structure or identity the check is about.
    pub anchor: String,
    pub verdict: Verdict,
    pub witness: Vec<(String, String)>,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.verdict != Verdict::Fail
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.witness.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new() -> Self {
        Report::default()
    }

    /// Add a check and return it for attaching witnesses.
    pub fn check(&mut self, name: impl Into<String>, anchor: impl Into<String>, ok: bool) -> &mut Check {
        self.push(name, anchor, Verdict::from_bool(ok))
    }

    pub fn info(&mut self, name: impl Into<String>, anchor: impl Into<String>) -> &mut Check {
        self.push(name, anchor, Verdict::Info)
    }

    fn push(&mut self, name: impl Into<String>, anchor: impl Into<String>, verdict: Verdict) -> &mut Check {
        self.checks.push(Check { name: name.into(), anchor: anchor.into(), verdict, witness: Vec::new() });
        self.checks.last_mut().expect("just pushed")
    }

    /// Append another report's checks, prefixing their names.
    pub fn absorb(&mut self, prefix: &str, other: Report) {
        let prefix = prefix.trim_end_matches('.');
        for mut c in other.checks {
            if !prefix.is_empty() {
                c.name = format!("{prefix}.{}", c.name);
            }
            self.checks.push(c);
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed())
    }

    /// Verdicts keyed by name, for comparing two runs.
    pub fn verdicts(&self) -> Vec<(String, Verdict)> {
        let mut v: Vec<_> = self.checks.iter().map(|c| (c.name.clone(), c.verdict)).collect();
        v.sort();
        v
    }

    pub fn sorted(mut self) -> Self {
        self.checks.sort_by(|a, b| a.name.cmp(&b.name));
        self
    }

    /// Line-oriented key/value text.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let tag = match c.verdict {
                Verdict::Pass => "PASS",
                Verdict::Fail => "FAIL",
                Verdict::Info => "INFO",
            };
            let _ = writeln!(out, "[{tag}] {}  ({})", c.name, c.anchor);
            for (k, v) in &c.witness {
                let _ = writeln!(out, "    {k}: {v}");
            }
        }
        out
    }

    /// One tab-separated record per check.
    pub fn render_machine(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let _ = write!(out, "check={}\tverdict={}\tanchor={}", escape(&c.name), c.verdict.as_str(), escape(&c.anchor));
            for (k, v) in &c.witness {
                let _ = write!(out, "\t{}={}", escape(k), escape(v));
            }
            out.push('\n');
        }
        out
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('\t', "\\t").replace('\n', "\\n")
}

impl Check {
    pub fn with(&mut self, key: impl Into<String>, value: impl ToString) -> &mut Self {
        self.witness.push((key.into(), value.to_string()));
        self
    }

    pub fn with_matrix<F: Field>(&mut self, key: impl Into<String>, m: &Matrix<F>) -> &mut Self {
        self.with(key, matrix_text(m))
    }

    pub fn with_morphism<F: Field>(&mut self, key: impl Into<String>, f: &Morphism<F>) -> &mut Self {
        self.with(key, matrix_text(f.matrix()))
    }
}

/// `rows x cols` followed by the sparse `i j value` triples.
pub fn matrix_text<F: Field>(m: &Matrix<F>) -> String {
    let mut s = format!("{}x{}", m.rows(), m.cols());
    if m.nnz() > 0 {
        let triples: Vec<String> = m.entries().map(|(i, j, v)| format!("{i} {j} {v}")).collect();
        let _ = write!(s, " [{}]", triples.join("; "));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rational;

    #[test]
    fn rendering() {
        let mut r = Report::new();
        r.check("b", "second", false).with("rank", 1);
        r.check("a", "first", true)
            .with_matrix("m", &Matrix::<Rational>::from_i64_rows(&[&[0, 2], &[1, 0]]));
        let r = r.sorted();
        assert!(!r.passed());
        assert_eq!(r.render_text(), "[PASS] a  (first)\n    m: 2x2 [0 1 2; 1 0 1]\n[FAIL] b  (second)\n    rank: 1\n");
        assert_eq!(r.render_machine().lines().count(), 2);
        assert!(r.render_machine().starts_with("check=a\tverdict=pass\tanchor=first\tm=2x2"));
    }

    #[test]
    fn info_does_not_fail() {
        let mut r = Report::new();
        r.info("note", "x").with("k", "v\tw");
        assert!(r.passed());
        assert!(r.render_machine().contains("k=v\\tw"));
    }
}
