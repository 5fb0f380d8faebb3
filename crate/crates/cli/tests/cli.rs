use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::sync::OnceLock;

use wordgraph::ideation::{suggest, DEFAULT_MEASURE};
use wordgraph::measures::parse_measure_list;
use wordgraph::report::{analyze, similarity_report, Document, Format, RunConfig};
use wordgraph::WordGraph;

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn data_dir() -> PathBuf {
    root().join("data/wordnet-3.1")
}

fn fixture(rel: &str) -> PathBuf {
    root().join("crates/core/tests/fixtures").join(rel)
}

/// One cache of the vendored database shared by every test in this binary.
fn cache() -> &'static Path {
    static CACHE: OnceLock<(tempfile::TempDir, PathBuf)> = OnceLock::new();
    let (_, p) = CACHE.get_or_init(|| {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("wn.wgc");
        let out = wordgraph(&["--db", data_dir().to_str().unwrap(), "db", "cache", "--out", p.to_str().unwrap()]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        (dir, p)
    });
    p
}

fn wordgraph(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wordgraph"))
        .args(args)
        .env_remove("WORDGRAPH_DB")
        .env_remove("WORDGRAPH_CACHE")
        .env_remove("RUST_LOG")
        .output()
        .expect("binary runs")
}

/// Runs against the cached vendored database.
fn wn(args: &[&str]) -> Output {
    let mut all = vec!["--db", data_dir().to_str().unwrap().to_owned().leak(), "--cache", cache().to_str().unwrap()];
    all.extend_from_slice(args);
    wordgraph(&all)
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

/// Structural equality with floats compared to 1e-12 relative: the binary
/// and this test process may be built at different optimization levels,
/// which can move a logarithm by one ulp.
fn assert_json_close(got: &serde_json::Value, want: &serde_json::Value, path: &str) {
    use serde_json::Value;
    match (got, want) {
        (Value::Number(a), Value::Number(b)) if a.is_f64() || b.is_f64() => {
            let (a, b) = (a.as_f64().unwrap(), b.as_f64().unwrap());
            assert!((a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1.0), "{path}: {a} vs {b}");
        }
        (Value::Array(a), Value::Array(b)) => {
            assert_eq!(a.len(), b.len(), "{path}: length");
            for (i, (x, y)) in a.iter().zip(b).enumerate() {
                assert_json_close(x, y, &format!("{path}[{i}]"));
            }
        }
        (Value::Object(a), Value::Object(b)) => {
            assert_eq!(a.keys().collect::<Vec<_>>(), b.keys().collect::<Vec<_>>(), "{path}: keys");
            for (k, x) in a {
                assert_json_close(x, &b[k], &format!("{path}.{k}"));
            }
        }
        _ => assert_eq!(got, want, "{path}"),
    }
}

#[test]
fn verify_reports_constants_and_strict_mode_fails_on_mismatch() {
    let o = wn(&["db", "verify"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("max_vertices") && out.contains("82192"));
    assert!(out.contains("Ambrose"));
    let mismatch = out.contains("MISMATCH");
    let strict = wn(&["db", "verify", "--strict"]);
    assert_eq!(code(&strict), if mismatch { 3 } else { 0 });
    if mismatch {
        assert!(stderr(&strict).contains("deviate"));
        // strict applies to every command, not just verify
        assert_eq!(code(&wn(&["--strict", "sim", "bird", "paper"])), 3);
    }
}

#[test]
fn database_problems_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let o = wordgraph(&["--db", dir.path().to_str().unwrap(), "db", "verify"]);
    assert_eq!(code(&o), 3);
    assert!(stderr(&o).contains("data.noun") || stderr(&o).contains("missing"), "{}", stderr(&o));

    // truncated record
    for f in ["index.noun", "noun.exc"] {
        std::fs::copy(fixture("fig1").join(f), dir.path().join(f)).unwrap();
    }
    let data = std::fs::read_to_string(fixture("fig1/data.noun")).unwrap();
    let cut = data.rfind("@ ").unwrap() + 1;
    std::fs::write(dir.path().join("data.noun"), &data[..cut]).unwrap();
    let o = wordgraph(&["--db", dir.path().to_str().unwrap(), "word-stats", "x"]);
    assert_eq!(code(&o), 3, "{}", stderr(&o));

    // corrupt cache
    let bad = dir.path().join("bad.wgc");
    std::fs::write(&bad, b"not a cache").unwrap();
    let o = wordgraph(&["--cache", bad.to_str().unwrap(), "word-stats", "x"]);
    assert_eq!(code(&o), 3);
}

#[test]
fn similarity_json_matches_library() {
    let fig1 = fixture("fig1");
    let o = wordgraph(&["--db", fig1.to_str().unwrap(), "--format", "json", "sim", "x", "y"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let g = WordGraph::load(&fig1).unwrap();
    let want = serde_json::to_value(similarity_report(&g, "x", "y", &[]).unwrap()).unwrap();
    let got: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_json_close(&got, &want, "");
    assert_eq!(got["results"].as_array().unwrap().len(), 40);

    let o = wordgraph(&["--db", fig1.to_str().unwrap(), "--format", "csv", "sim", "x", "y", "--measures", "rada,lin:seco"]);
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 3);
    assert!(out.starts_with("x,y,measure,value"));
}

#[test]
fn input_errors_exit_2() {
    let o = wn(&["sim", "crayn", "bird"]);
    assert_eq!(code(&o), 2);
    let err = stderr(&o);
    assert!(err.contains("crayn") && err.contains("crayon"), "{err}");

    let o = wn(&["sim", "bird", "bird"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("distinct"));

    assert_eq!(code(&wn(&["sim", "bird", "paper", "--measures", "nope"])), 2);
    assert_eq!(code(&wn(&["sim", "bird", "paper", "--measures", "ic:seco"])), 2);
    assert_eq!(code(&wn(&["ic", "bird", "--measures", "rada"])), 2);
    assert_eq!(code(&wn(&["correlate", "--sample", "10"])), 2);
    assert_eq!(code(&wn(&["correlate", "--measures", "ic,rada", "--sample", "100"])), 2);
    // usage errors share the input code
    assert_eq!(code(&wordgraph(&[])), 2);
    assert_eq!(code(&wordgraph(&["sim", "bird"])), 2);
    assert_eq!(code(&wordgraph(&["--format", "xml", "measures"])), 2);
}

#[test]
fn measure_catalog_lists_49() {
    let o = wordgraph(&["--format", "json", "measures"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 49);
}

#[test]
fn word_reports() {
    let fig1 = fixture("fig1");
    let o = wordgraph(&["--db", fig1.to_str().unwrap(), "--format", "json", "word-stats", "x"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["stats"]["polysemy"], 2);
    assert_eq!(v["stats"]["subsumers"], 6);
    assert_eq!(v["values"].as_array().unwrap().len(), 0);

    let o = wn(&["--format", "json", "ic", "bird"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["values"].as_array().unwrap().len(), 9);
}

fn corpus(files: &[&str]) -> Vec<String> {
    files.iter().map(|f| fixture(&format!("corpus/{f}")).to_str().unwrap().to_string()).collect()
}

#[test]
fn analysis_is_deterministic_and_matches_library() {
    let dir = tempfile::tempdir().unwrap();
    let run = |files: &[&str], out: &str| {
        let out_dir = dir.path().join(out);
        let mut args: Vec<String> =
            ["--format", "json", "analyze", "--measures", "lin:sanchez-batet,wu-palmer", "--out-dir"].map(String::from).into();
        args.push(out_dir.to_str().unwrap().into());
        args.extend(corpus(files));
        let o = wn(&args.iter().map(String::as_str).collect::<Vec<_>>());
        assert_eq!(code(&o), 0, "{}", stderr(&o));
        (stdout(&o), out_dir)
    };
    let (a, dir_a) = run(&["s1-a.txt", "s1-b.txt", "s2-a.txt"], "a");
    let (b, dir_b) = run(&["s2-a.txt", "s1-a.txt", "s1-b.txt"], "b");
    assert_eq!(a, b);
    let read = |d: &Path, f: &str| std::fs::read_to_string(d.join(f)).unwrap();
    assert_eq!(read(&dir_a, "report.json"), a);
    assert_eq!(read(&dir_a, "report.csv"), read(&dir_b, "report.csv"));

    // the same run through the library, with the config the CLI records
    let g = WordGraph::load_cache(cache()).unwrap();
    let docs: Vec<Document> = ["s1-a", "s1-b", "s2-a"]
        .iter()
        .map(|id| Document {
            id: id.to_string(),
            text: std::fs::read_to_string(fixture(&format!("corpus/{id}.txt"))).unwrap(),
        })
        .collect();
    let cfg = RunConfig {
        measures: parse_measure_list("lin:sanchez-batet,wu-palmer").unwrap(),
        format: Format::Json,
        db: Some(data_dir()),
        cache: Some(cache().to_path_buf()),
        ..RunConfig::default()
    };
    let want = serde_json::to_value(analyze(&g, &docs, None, &cfg).unwrap()).unwrap();
    assert_json_close(&serde_json::from_str(&a).unwrap(), &want, "");
}

#[test]
fn analysis_exit_codes() {
    let short = corpus(&["short.txt"]);
    let o = wn(&["analyze", &short[0]]);
    assert_eq!(code(&o), 4);
    assert!(stdout(&o).contains("minimum 15 nouns"));

    // one good conversation is enough for success; the failure is reported
    let mixed = corpus(&["short.txt", "s1-a.txt"]);
    let o = wn(&["--format", "json", "analyze", "--measures", "rada", &mixed[0], &mixed[1]]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["failures"][0]["code"], "too_few_nouns");

    // malformed pretagged input is an input error
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.tsv");
    std::fs::write(&bad, "no tab here\n").unwrap();
    assert_eq!(code(&wn(&["analyze", "--mode", "pretagged", bad.to_str().unwrap()])), 2);

    // marker schemes need a grouping file
    let files = corpus(&["s1-a.txt"]);
    assert_eq!(code(&wn(&["analyze", "--scheme", "feedback", &files[0]])), 2);
    assert_eq!(code(&wn(&["analyze", &files[0], "missing.txt"])), 2);
}

#[test]
fn grouped_analysis_with_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(&cfg, r#"{"measures": ["rada"], "scheme": "role", "t": 3}"#).unwrap();
    let grouping = fixture("corpus/grouping.json");
    let mut args = vec![
        "--format".to_string(),
        "json".into(),
        "analyze".into(),
        "--config".into(),
        cfg.to_str().unwrap().into(),
        "--grouping".into(),
        grouping.to_str().unwrap().into(),
    ];
    args.extend(corpus(&["s1-a.txt", "s1-b.txt", "s2-a.txt"]));
    let o = wn(&args.iter().map(String::as_str).collect::<Vec<_>>());
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["config"]["scheme"], "role");
    assert_eq!(v["comparison"]["scheme"], "role");
    let groups: Vec<&str> =
        v["comparison"]["summaries"].as_array().unwrap().iter().map(|s| s["group"].as_str().unwrap()).collect();
    assert!(groups.contains(&"student") && groups.contains(&"instructor"), "{groups:?}");

    std::fs::write(&cfg, r#"{"measures": ["rada"], "bogus": 1}"#).unwrap();
    assert_eq!(code(&wn(&["analyze", "--config", cfg.to_str().unwrap(), &corpus(&["s1-a.txt"])[0]])), 2);
}

#[test]
fn suggest_matches_library() {
    let o = wn(&[
        "--format",
        "json",
        "suggest",
        "--base",
        "painting,sketch,drawing",
        "--candidates",
        "origami,greeting_card,crayn",
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let got: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let g = WordGraph::load_cache(cache()).unwrap();
    let words = |ws: &[&str]| ws.iter().map(|w| w.to_string()).collect::<Vec<_>>();
    let want = suggest(
        &g,
        &words(&["painting", "sketch", "drawing"]),
        &words(&["origami", "greeting_card", "crayn"]),
        DEFAULT_MEASURE,
        None,
        &g.ic_context(),
    )
    .unwrap();
    assert_json_close(&got, &serde_json::to_value(&want).unwrap(), "");
    assert_eq!(got["proposals"][0]["candidate"], "greeting_card");

    let o = wn(&["suggest", "--base", "painting,plorp", "--candidates", "origami"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("plorp"));
}

#[test]
fn correlation_is_seeded() {
    let dir = tempfile::tempdir().unwrap();
    let run = |seed: &str, out: &str| {
        let out_dir = dir.path().join(out);
        let o = wn(&[
            "--seed",
            seed,
            "--format",
            "csv",
            "correlate",
            "--sample",
            "100",
            "--measures",
            "ic",
            "--out-dir",
            out_dir.to_str().unwrap(),
        ]);
        assert_eq!(code(&o), 0, "{}", stderr(&o));
        (stdout(&o), out_dir)
    };
    let (a, dir_a) = run("3", "a");
    let (b, _) = run("3", "b");
    let (c, _) = run("4", "c");
    assert_eq!(a, b);
    assert_ne!(a, c);
    assert_eq!(a.lines().count(), 8);
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir_a.join("dendrogram.json")).unwrap()).unwrap();
    assert_eq!(json["seed"], 3);
    assert_eq!(json["sample"], 100);
    assert!(dir_a.join("dendrogram.txt").exists());
    assert_eq!(std::fs::read_to_string(dir_a.join("matrix.csv")).unwrap(), a);
}

#[test]
fn cache_and_database_agree() {
    let fig1 = fixture("fig1");
    let dir = tempfile::tempdir().unwrap();
    let c = dir.path().join("fig1.wgc");
    let direct = wordgraph(&["--db", fig1.to_str().unwrap(), "sim", "x", "y"]);
    // first run writes the cache, second reads it
    let first = wordgraph(&["--db", fig1.to_str().unwrap(), "--cache", c.to_str().unwrap(), "sim", "x", "y"]);
    assert!(c.exists());
    let cached = wordgraph(&["--db", "/nonexistent", "--cache", c.to_str().unwrap(), "sim", "x", "y"]);
    assert_eq!(code(&cached), 0, "{}", stderr(&cached));
    assert_eq!(stdout(&direct), stdout(&first));
    assert_eq!(stdout(&direct), stdout(&cached));
}
