use std::collections::BTreeMap;
use std::io::Write;
use std::process::{Command, Stdio};

use roughtopo::{AuditFinding, AuditReport, FamilyListing, Law, LawKind, LawStats};
use roughtopo_cli::{render_listing, render_verify, run, verify_status, Format};
use serde_json::Value;

const FIXTURE: &str = concat!(
    env!("CARGO_MANIFEST_DIR"),
    "/../../fixtures/four_point.json"
);
const EXAMPLE: &str = include_str!("../../../fixtures/four_point.json");

struct Output {
    code: i32,
    stdout: String,
    stderr: String,
}

fn invoke(args: &[&str], stdin: &str) -> Output {
    let mut argv = vec!["roughtopo"];
    argv.extend_from_slice(args);
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(argv, &mut stdin.as_bytes(), &mut out, &mut err);
    Output {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

fn example(args: &[&str]) -> Output {
    let mut all = args.to_vec();
    all.extend(["--space", FIXTURE]);
    invoke(&all, "")
}

fn json(out: &Output) -> Value {
    assert_eq!(out.code, 0, "stderr: {}", out.stderr);
    serde_json::from_str(&out.stdout).unwrap()
}

fn labels(v: &Value) -> Vec<String> {
    v.as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_str().unwrap().to_string())
        .collect()
}

fn tier<'a>(v: &'a Value, name: &str) -> &'a Value {
    v["tiers"]
        .as_array()
        .unwrap()
        .iter()
        .find(|t| t["tier"] == name)
        .unwrap()
}

fn area(v: &Value, key: &str) -> Vec<String> {
    let a = v["areas"]
        .as_array()
        .unwrap()
        .iter()
        .find(|a| a["key"] == key)
        .unwrap();
    labels(&a["set"])
}

#[test]
fn topology_lists_example_families() {
    let v = json(&example(&["topology", "--format", "json"]));
    let counts: Vec<(String, u64)> = v["families"]
        .as_array()
        .unwrap()
        .iter()
        .map(|f| {
            (
                f["kind"].as_str().unwrap().into(),
                f["count"].as_u64().unwrap(),
            )
        })
        .collect();
    assert_eq!(
        counts,
        [
            ("subbase", 4),
            ("base", 5),
            ("tau", 6),
            ("pre", 10),
            ("deltap", 16)
        ]
        .map(|(k, n)| (k.to_string(), n))
    );
    let table = example(&["topology"]);
    assert!(table
        .stdout
        .contains("tau (6)\n  {}\n  {u3}\n  {u4}\n  {u3,u4}\n  {u1,u2,u3}\n  {u1,u2,u3,u4}\n"));
}

#[test]
fn identity_relation_is_discrete() {
    let doc = r#"{"universe":["a","b","c"],"relation":[["a","a"],["b","b"],["c","c"]]}"#;
    let v: Value = serde_json::from_str(
        &invoke(&["families", "--kind", "tau", "--format", "json"], doc).stdout,
    )
    .unwrap();
    assert_eq!(v["count"], 8);
}

#[test]
fn cap_exceeded_exits_3() {
    let labels: Vec<String> = (0..25).map(|i| format!("\"x{i}\"")).collect();
    let doc = format!("{{\"universe\":[{}],\"relation\":[]}}", labels.join(","));
    let out = invoke(&["topology"], &doc);
    assert_eq!(out.code, 3);
    assert!(out.stderr.contains("--max-enum"));
    assert_eq!(example(&["topology", "--max-enum", "3"]).code, 3);
    let labels: Vec<String> = (0..21).map(|i| format!("\"x{i}\"")).collect();
    let doc = format!("{{\"universe\":[{}],\"relation\":[]}}", labels.join(","));
    assert_eq!(invoke(&["families", "--kind", "tau"], &doc).code, 3);
    let raised = invoke(&["families", "--kind", "tau", "--max-enum", "21"], &doc);
    assert_eq!(raised.code, 0);
    assert!(raised.stdout.starts_with("tau (2)\n"));
}

#[test]
fn approx_accuracies() {
    let v = json(&example(&[
        "approx",
        "--set",
        "{u1,u3,u4}",
        "--format",
        "json",
    ]));
    let acc: Vec<&str> = ["tau", "p", "dp"]
        .iter()
        .map(|t| tier(&v, t)["accuracy"].as_str().unwrap())
        .collect();
    assert_eq!(acc, ["1/2", "3/4", "1"]);

    let v = json(&example(&[
        "approx", "--set", "{u2,u4}", "--format", "json",
    ]));
    let acc: Vec<&str> = ["tau", "p", "dp"]
        .iter()
        .map(|t| tier(&v, t)["accuracy"].as_str().unwrap())
        .collect();
    assert_eq!(acc, ["1/3", "1/2", "1"]);

    let v = json(&example(&["approx", "--set", "all", "--format", "json"]));
    for t in ["tau", "p", "dp"] {
        let row = tier(&v, t);
        assert_eq!(labels(&row["lower"]).len(), 4);
        assert_eq!(labels(&row["upper"]).len(), 4);
        assert_eq!(row["accuracy"], "1");
    }

    let single = json(&example(&[
        "approx", "--set", "{u2}", "--tier", "dp", "--format", "json",
    ]));
    assert_eq!(single["tiers"].as_array().unwrap().len(), 1);
}

#[test]
fn empty_set_accuracy_undefined() {
    let v = json(&example(&["approx", "--set", "empty", "--format", "json"]));
    assert!(tier(&v, "dp")["accuracy"].is_null());
    assert!(example(&["approx", "--set", "{}"])
        .stdout
        .contains("undefined"));
}

const TABLE: &str = "\
subset      tau  p    dp
{u1}        0    0    1
{u2}        0    0    1
{u3}        1/3  1/3  1
{u4}        1    1    1
{u1,u2}     0    0    1
{u1,u3}     1/3  2/3  1
{u1,u4}     1/3  1/2  1
{u2,u3}     1/3  2/3  1
{u2,u4}     1/3  1/2  1
{u3,u4}     1/2  1/2  1
{u1,u2,u3}  1    1    1
{u1,u2,u4}  1/3  1/3  1
{u1,u3,u4}  1/2  3/4  1
{u2,u3,u4}  1/2  3/4  1
";

#[test]
fn accuracy_table_small_subsets() {
    let out = example(&["accuracy-table", "--paper-rows"]);
    assert_eq!(out.code, 0);
    assert_eq!(out.stdout, TABLE);
    let v = json(&example(&[
        "accuracy-table",
        "--paper-rows",
        "--format",
        "json",
    ]));
    let row = v["rows"]
        .as_array()
        .unwrap()
        .iter()
        .find(|r| labels(&r["subset"]) == ["u1", "u2", "u3"])
        .unwrap();
    assert_eq!(
        (&row["tau"], &row["p"], &row["dp"]),
        (&"1".into(), &"1".into(), &"1".into())
    );
}

#[test]
fn accuracy_table_discrete_all_ones() {
    let doc = r#"{"universe":["a","b","c"],"relation":[["a","a"],["b","b"],["c","c"]]}"#;
    let v: Value =
        serde_json::from_str(&invoke(&["accuracy-table", "--format", "json"], doc).stdout).unwrap();
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 6);
    for r in rows {
        for k in ["tau", "p", "dp"] {
            assert_eq!(r[k], "1");
        }
    }
}

#[test]
fn regions() {
    let v = json(&example(&[
        "regions", "--set", "{u3,u4}", "--format", "json",
    ]));
    assert_eq!(v["areas"].as_array().unwrap().len(), 24);
    assert_eq!(area(&v, "boundary"), ["u1", "u2"]);
    assert!(area(&v, "dp_boundary").is_empty());

    let v = json(&example(&[
        "regions", "--set", "{u2,u4}", "--format", "json",
    ]));
    assert_eq!(area(&v, "p_boundary"), ["u2"]);

    let v = json(&example(&["regions", "--set", "all", "--format", "json"]));
    for a in v["areas"].as_array().unwrap() {
        assert!(labels(&a["set"]).is_empty(), "{a}");
    }
}

#[test]
fn classify_and_include() {
    let v = json(&example(&[
        "classify", "--set", "{u1,u2}", "--format", "json",
    ]));
    assert_eq!(tier(&v, "dp")["exact"], true);
    assert_eq!(tier(&v, "p")["exact"], false);
    let v = json(&example(&["classify", "--set", "{u2}", "--format", "json"]));
    assert_eq!(tier(&v, "p")["class"], "IUD");
    assert_ne!(tier(&v, "dp")["class"], "IUD");

    let v = json(&example(&[
        "include",
        "--set",
        "{u2,u4}",
        "--in",
        "{u1,u2,u4}",
        "--tier",
        "dp",
        "--format",
        "json",
    ]));
    let row = tier(&v, "dp");
    assert_eq!(
        (&row["bottom"], &row["top"], &row["full"]),
        (&true.into(), &true.into(), &true.into())
    );
}

#[test]
fn partition_and_precondition() {
    let v = json(&example(&["partition", "--format", "json"]));
    assert_eq!(v["blocks"].as_array().unwrap().len(), 4);
    let out = invoke(
        &["partition"],
        r#"{"universe":["a","b","c"],"relation":[["a","b"],["b","a"]]}"#,
    );
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("precondition failed"));
}

#[test]
fn parse_errors_exit_2() {
    let bad = [
        ("{\"universe\": [\"u1\"],", "line 1"),
        (r#"{"universe":["u1"],"relation":[["u1","u9"]]}"#, "u9"),
        (r#"{"universe":["u1","u1"],"relation":[]}"#, "duplicate"),
    ];
    for (doc, needle) in bad {
        let out = invoke(&["topology"], doc);
        assert_eq!(out.code, 2, "{doc}");
        assert!(out.stderr.contains(needle), "{}", out.stderr);
    }
    assert_eq!(example(&["approx", "--set", "{u7}"]).code, 2);
    assert_eq!(example(&["approx", "--set", "u1,u2"]).code, 2);
    assert_eq!(example(&["approx"]).code, 2);
    assert_eq!(example(&["topology", "--max-enum", "0"]).code, 2);
    assert_eq!(invoke(&["nonsense"], "").code, 2);
}

#[test]
fn duplicate_pairs_warn() {
    let out = invoke(
        &["topology"],
        r#"{"universe":["a","b"],"relation":[["a","b"],["a","b"]]}"#,
    );
    assert_eq!(out.code, 0);
    assert!(out.stderr.contains("warning: duplicate pair [a, b]"));
}

#[test]
fn help_and_version_exit_0() {
    assert_eq!(invoke(&["--help"], "").code, 0);
    assert!(invoke(&["--version"], "").stdout.starts_with("roughtopo "));
}

#[test]
fn family_json_round_trips() {
    for kind in ["tau", "pre", "deltap"] {
        let out = example(&["families", "--kind", kind, "--format", "json"]);
        assert_eq!(out.code, 0);
        let listing = FamilyListing::parse(&out.stdout).unwrap();
        assert_eq!(render_listing(&listing), out.stdout);
    }
}

#[test]
fn repeated_invocations_are_identical() {
    for args in [
        vec!["topology"],
        vec!["accuracy-table", "--format", "json"],
        vec!["regions", "--set", "{u1}", "--format", "json"],
    ] {
        assert_eq!(example(&args).stdout, example(&args).stdout);
    }
}

#[test]
fn verify_exhaustive_3_passes() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f.jsonl");
    let out = invoke(
        &[
            "verify",
            "--exhaustive",
            "3",
            "--format",
            "json",
            "--findings",
            path.to_str().unwrap(),
        ],
        "",
    );
    let v = json(&out);
    assert_eq!(v["spaces"], 512);
    assert_eq!(v["passed"], true);
    assert!(out.stderr.starts_with("roughtopo "));
    assert!(path.exists());
}

#[test]
fn verify_sample_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let mut runs = Vec::new();
    for i in 0..2 {
        let path = dir.path().join(format!("f{i}.jsonl"));
        let out = invoke(
            &[
                "verify",
                "--sample",
                "--seed",
                "7",
                "--count",
                "100",
                "--n",
                "6",
                "--findings",
                path.to_str().unwrap(),
            ],
            "",
        );
        assert_eq!(out.code, 0, "{}", out.stderr);
        let text = out.stdout.replace(path.to_str().unwrap(), "FILE");
        runs.push((text, std::fs::read(&path).unwrap()));
    }
    assert_eq!(runs[0], runs[1]);
    assert!(!runs[0].1.is_empty());
    let first: AuditFinding =
        serde_json::from_slice(runs[0].1.split(|&b| b == b'\n').next().unwrap()).unwrap();
    assert_eq!(first.seed, Some(7));
    assert_eq!(first.kind, LawKind::Audited);
}

#[test]
fn verify_limits() {
    assert_eq!(invoke(&["verify", "--exhaustive", "4"], "").code, 3);
    assert_eq!(
        invoke(&["verify", "--exhaustive", "5", "--allow-large"], "").code,
        3
    );
    assert_eq!(invoke(&["verify", "--sample", "--n", "25"], "").code, 3);
    assert_eq!(invoke(&["verify", "--seed", "3"], "").code, 2);
}

#[test]
fn guaranteed_violation_fails_verify() {
    let mut stats = BTreeMap::new();
    stats.insert(
        Law::TierChain,
        LawStats {
            checks: 8,
            violations: 1,
        },
    );
    stats.insert(
        Law::ExactLowerUnion,
        LawStats {
            checks: 8,
            violations: 3,
        },
    );
    let report = AuditReport {
        spaces: 1,
        stats,
        findings: vec![AuditFinding {
            property_id: Law::TierChain.id().into(),
            kind: LawKind::Guaranteed,
            seed: None,
            instance: 0,
            n: 1,
            relation: vec![],
            witnesses: vec![vec![0]],
            lhs: vec![0],
            rhs: vec![],
        }],
    };
    assert_eq!(verify_status(&report), 1);
    let text = render_verify(&report, "f.jsonl", Format::Table);
    assert!(text.ends_with("result: FAIL\n"));
    assert!(text.contains("1 guaranteed"));

    let mut only_audited = report.clone();
    only_audited.stats.remove(&Law::TierChain);
    only_audited.findings.clear();
    assert_eq!(verify_status(&only_audited), 0);
}

#[test]
fn binary_reads_stdin() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_roughtopo"))
        .args(["accuracy-table", "--paper-rows"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(EXAMPLE.as_bytes())
        .unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), TABLE);

    let status = Command::new(env!("CARGO_BIN_EXE_roughtopo"))
        .args(["topology", "--space", "/nonexistent/space.json"])
        .stderr(Stdio::null())
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));
}
