//! Corpus layout: `<dir>/<name>/{instance.txt, assertions.txt, expected.txt}`.
//!
//! Each non-comment line of `expected.txt` reads
//! `<command> [flags] => <exit code> [check=verdict …]`. The instance path,
//! and for `eval` the assertions path, are inserted after the command.

use std::path::{Path, PathBuf};

use clap::Parser;

use hgl_core::{Report, Verdict};

use crate::{execute, Cli, InputError, Output};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expectation {
    pub line: usize,
    pub args: Vec<String>,
    pub code: i32,
    pub verdicts: Vec<(String, Verdict)>,
}

#[derive(Clone, Debug)]
pub struct Entry {
    pub name: String,
    pub dir: PathBuf,
    pub expectations: Vec<Expectation>,
}

impl Entry {
    pub fn instance(&self) -> PathBuf {
        self.dir.join("instance.txt")
    }

    pub fn assertions(&self) -> PathBuf {
        self.dir.join("assertions.txt")
    }

    /// Full argument vector for one expectation.
    pub fn argv(&self, e: &Expectation) -> Vec<String> {
        let mut v = vec!["hgl".to_string(), e.args[0].clone(), self.instance().display().to_string()];
        if e.args[0] == "eval" {
            v.push(self.assertions().display().to_string());
        }
        v.extend(e.args[1..].iter().cloned());
        v
    }
}

fn verdict(s: &str) -> Option<Verdict> {
    Some(match s {
        "pass" => Verdict::Pass,
        "fail" => Verdict::Fail,
        "info" => Verdict::Info,
        _ => return None,
    })
}

pub fn parse_expected(text: &str) -> Result<Vec<Expectation>, String> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let (lhs, rhs) = body.split_once("=>").ok_or(format!("line {line}: expected `=>`"))?;
        let args: Vec<String> = lhs.split_whitespace().map(str::to_string).collect();
        if args.is_empty() {
            return Err(format!("line {line}: missing command"));
        }
        let mut words = rhs.split_whitespace();
        let code = words.next().and_then(|w| w.parse().ok()).ok_or(format!("line {line}: missing exit code"))?;
        let verdicts = words
            .map(|w| {
                let (k, v) = w.split_once('=').ok_or(format!("line {line}: expected check=verdict, found `{w}`"))?;
                Ok((k.to_string(), verdict(v).ok_or(format!("line {line}: unknown verdict `{v}`"))?))
            })
            .collect::<Result<_, String>>()?;
        out.push(Expectation { line, args, code, verdicts });
    }
    Ok(out)
}

/// Entries sorted by name.
pub fn load_corpus(root: &Path) -> Result<Vec<Entry>, InputError> {
    let read_dir = std::fs::read_dir(root).map_err(|e| InputError(format!("{}: {e}", root.display())))?;
    let mut dirs: Vec<PathBuf> = read_dir.filter_map(|d| d.ok().map(|d| d.path())).filter(|p| p.join("expected.txt").is_file()).collect();
    dirs.sort();
    dirs.into_iter()
        .map(|dir| {
            let path = dir.join("expected.txt");
            let text = std::fs::read_to_string(&path).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
            let expectations = parse_expected(&text).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
            let name = dir.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
            Ok(Entry { name, dir, expectations })
        })
        .collect()
}

/// Exit code and sorted report of one invocation, in process.
pub fn invoke(argv: &[String]) -> (i32, Option<Report>) {
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(_) => return (2, None),
    };
    match execute(&cli.command) {
        Err(_) => (2, None),
        Ok(Output::Text(_)) => (0, None),
        Ok(Output::Report { report, .. }) => {
            let code = if report.passed() { 0 } else { 1 };
            (code, Some(report.sorted()))
        }
    }
}

pub fn run_corpus(root: &Path) -> Result<Report, InputError> {
    let mut r = Report::new();
    for entry in load_corpus(root)? {
        for e in &entry.expectations {
            let argv = entry.argv(e);
            let (code, report) = invoke(&argv);
            let mut mismatches = Vec::new();
            if code != e.code {
                mismatches.push(format!("exit {code}, expected {}", e.code));
            }
            for (name, want) in &e.verdicts {
                let got = report.as_ref().and_then(|r| r.get(name)).map(|c| c.verdict);
                if got != Some(*want) {
                    let got = got.map_or("missing", |v| v.as_str());
                    mismatches.push(format!("{name} is {got}, expected {}", want.as_str()));
                }
            }
            let c = r.check(format!("corpus.{}.line{:02}", entry.name, e.line), e.args.join(" "), mismatches.is_empty());
            if !mismatches.is_empty() {
                c.with("mismatch", mismatches.join("; "));
            }
        }
    }
    Ok(r)
}
