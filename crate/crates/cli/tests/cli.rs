use std::path::PathBuf;
use std::process::Command;

use hgl_cli::corpus::{invoke, load_corpus, run_corpus};
use hgl_cli::instance::{parse_instance, AnyInstance};
use hgl_cli::{catalog, run};
use proptest::prelude::*;

fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

fn hgl(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_hgl")).args(args).output().expect("spawn hgl");
    (out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stdout).into_owned(), String::from_utf8_lossy(&out.stderr).into_owned())
}

fn instance(name: &str) -> String {
    corpus_dir().join(name).join("instance.txt").display().to_string()
}

#[test]
fn corpus_expectations_hold() {
    let r = run_corpus(&corpus_dir()).unwrap();
    assert!(r.checks.len() > 100);
    assert!(r.passed(), "{}", r.render_text());
}

#[test]
fn binary_exit_codes() {
    assert_eq!(hgl(&["check", &instance("trivial-qz2"), "--what", "all"]).0, 0);
    let (code, out, _) = hgl(&["check", &instance("broken-antipode")]);
    assert_eq!(code, 1);
    assert!(out.contains("[FAIL] hopf.H.antipode.left"));
    let (code, _, err) = hgl(&["check", &instance("malformed")]);
    assert_eq!(code, 2);
    assert!(err.contains("line 6"), "{err}");
    assert_eq!(hgl(&["check", "/nonexistent/instance.txt"]).0, 2);
    assert_eq!(hgl(&["frobnicate"]).0, 2);
    assert_eq!(hgl(&["descent", &instance("non-flat"), "--module", "W"]).0, 2);
}

#[test]
fn principal_reports_corank_for_the_non_free_action() {
    let (code, out, _) = hgl(&["principal", &instance("non-free-z2")]);
    assert_eq!(code, 1);
    assert!(out.contains("[FAIL] condition_B"));
    assert!(out.contains("corank: 1"));
}

#[test]
fn machine_output_has_one_record_per_check() {
    let (_, text, _) = hgl(&["principal", &instance("trivial-qz2")]);
    let (_, machine, _) = hgl(&["--machine", "principal", &instance("trivial-qz2")]);
    let checks = text.lines().filter(|l| l.starts_with('[')).count();
    let records = machine.lines().filter(|l| l.starts_with("check=")).count();
    assert_eq!(checks, records);
    assert!(machine.lines().last().unwrap().starts_with("summary\tverdict=pass"));
}

#[test]
fn timings_only_on_request() {
    let (_, out, _) = hgl(&["qcat", &instance("trivial-qz2")]);
    assert!(!out.contains("elapsed_ms"));
    let (_, out, _) = hgl(&["--timings", "qcat", &instance("trivial-qz2")]);
    assert!(out.contains("elapsed_ms"));
}

#[test]
fn reports_are_byte_identical_across_runs() {
    for entry in load_corpus(&corpus_dir()).unwrap() {
        for e in &entry.expectations {
            let argv = entry.argv(e);
            let args: Vec<&str> = argv[1..].iter().map(String::as_str).collect();
            let a = hgl(&args);
            let b = hgl(&args);
            assert_eq!(a, b, "{argv:?}");
        }
    }
}

#[test]
fn exported_instances_match_the_shipped_corpus() {
    for name in catalog::NAMES {
        let text = catalog::export(name).unwrap();
        let shipped = std::fs::read_to_string(corpus_dir().join(name).join("instance.txt")).unwrap();
        assert_eq!(text, shipped, "{name}");
        assert!(parse_instance(&text).is_ok(), "{name}");
    }
}

#[test]
fn export_writes_text_and_exits_zero() {
    let out = run(["hgl", "export", "sweedler"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("hopf H m=mH"));
    assert_eq!(run(["hgl", "export", "nonsense"]).code, 2);
}

/// A single edit to a corpus file: drop a line, or replace one token.
#[derive(Debug, Clone)]
enum Edit {
    Drop(usize),
    Token(usize, usize, String),
}

fn apply(text: &str, edit: &Edit) -> String {
    let mut lines: Vec<String> = text.lines().map(str::to_string).collect();
    match edit {
        Edit::Drop(i) => {
            let i = i % lines.len();
            lines.remove(i);
        }
        Edit::Token(i, j, w) => {
            let i = i % lines.len();
            let mut words: Vec<String> = lines[i].split_whitespace().map(str::to_string).collect();
            if !words.is_empty() {
                let j = j % words.len();
                words[j] = w.clone();
                lines[i] = words.join(" ");
            }
        }
    }
    lines.join("\n")
}

fn edit() -> impl Strategy<Value = Edit> {
    let token = prop_oneof![
        Just("0".to_string()),
        Just("1".to_string()),
        Just("-1".to_string()),
        Just("1/2".to_string()),
        Just("7".to_string()),
        Just("H".to_string()),
        Just("P*P".to_string()),
        Just("end".to_string()),
        "[a-z=]{1,4}",
    ];
    prop_oneof![
        any::<usize>().prop_map(Edit::Drop),
        (any::<usize>(), any::<usize>(), token).prop_map(|(i, j, w)| Edit::Token(i, j, w)),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn exit_code_contract(which in 0usize..4, e in edit(), cmd in 0usize..3) {
        let names = ["trivial-qz2", "free-z2", "comonoid-qz2", "non-free-z2"];
        let text = std::fs::read_to_string(instance(names[which])).unwrap();
        let mutated = apply(&text, &e);
        let dir = std::env::temp_dir().join(format!("hgl-prop-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join(format!("{which}-{cmd}.txt"));
        std::fs::write(&path, &mutated).unwrap();
        let p = path.display().to_string();
        let argv: Vec<String> = match cmd {
            0 => vec!["hgl".into(), "check".into(), p],
            1 => vec!["hgl".into(), "principal".into(), p],
            _ => vec!["hgl".into(), "qcat".into(), p],
        };
        let (code, _) = invoke(&argv);
        let parsed = parse_instance(&mutated);
        match &parsed {
            Err(_) => prop_assert_eq!(code, 2),
            Ok(AnyInstance::Rational(i)) if cmd > 0 && i.bundle.is_none() => prop_assert_eq!(code, 2),
            Ok(_) => prop_assert!(code == 0 || code == 1, "code {}", code),
        }
        let out = run(&argv);
        prop_assert_eq!(out.code, code);
    }
}
