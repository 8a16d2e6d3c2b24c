use std::fs;

use qsqg::config::{ExperimentConfig, ExperimentKind};
use qsqg::persist::{persist, write_plot, write_table};
use qsqg::report::{num, ExperimentReport, PlotData, Severity, Table};
use qsqg::summary_text;
use qsqg_core::GridSpec;

fn small(kind: ExperimentKind) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::default_for(kind);
    cfg.grid = GridSpec::periodic_2pi(32).unwrap();
    cfg.knobs.corpus_size = 3;
    cfg.knobs.compare_refined = false;
    cfg
}

#[test]
fn empty_table_is_header_only() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.csv");
    write_table(&path, &Table::new("t", &["a", "b"])).unwrap();
    assert_eq!(fs::read_to_string(&path).unwrap(), "a,b\n");
}

#[test]
fn three_rows_give_four_lf_lines() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.csv");
    let mut t = Table::new("t", &["x", "y"]);
    for i in 0..3 {
        t.push(vec![i.to_string(), num(0.5 * i as f64)]);
    }
    write_table(&path, &t).unwrap();
    let text = fs::read_to_string(&path).unwrap();
    assert!(!text.contains('\r'));
    assert_eq!(text.lines().count(), 4);
    assert_eq!(text.lines().nth(2).unwrap(), "1,5e-1");
}

#[test]
fn plot_has_two_columns() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.csv");
    let plot = PlotData {
        name: "p".into(),
        x_label: "k".into(),
        y_label: "value".into(),
        points: vec![(0.0, 1.0), (1.0, f64::NAN)],
    };
    write_plot(&path, &plot).unwrap();
    assert_eq!(
        fs::read_to_string(&path).unwrap(),
        "k,value\n0e0,1e0\n1e0,undefined\n"
    );
}

#[test]
fn summary_marks_severity() {
    let mut r = ExperimentReport::new(small(ExperimentKind::Riesz));
    r.check("a", Severity::Hard, false, "x");
    r.check("b", Severity::Soft, false, "y");
    r.check("c", Severity::Soft, true, "");
    let s = summary_text(&r);
    assert!(s.contains("[FAIL] (hard) a: x"));
    assert!(s.contains("[WARN] (soft) b: y"));
    assert!(s.contains("[PASS] (soft) c: "));
    assert!(!r.hard_checks_pass());
    assert_eq!(r.warnings().count(), 1);
}

fn dir_bytes(dir: &std::path::Path) -> Vec<(String, Vec<u8>)> {
    let mut out = Vec::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for e in fs::read_dir(&d).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else {
                let rel = p.strip_prefix(dir).unwrap().to_string_lossy().into_owned();
                out.push((rel, fs::read(&p).unwrap()));
            }
        }
    }
    out.sort();
    out
}

#[test]
fn reruns_are_byte_identical() {
    let cfg = small(ExperimentKind::Wellposed);
    let mut cfg = cfg;
    cfg.knobs.amplitudes = vec![0.0, 1e-3];
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    persist(&qsqg::run(&cfg).unwrap(), a.path()).unwrap();
    persist(&qsqg::run(&cfg).unwrap(), b.path()).unwrap();
    let (x, y) = (dir_bytes(a.path()), dir_bytes(b.path()));
    assert!(x.iter().any(|(n, _)| n.ends_with("manifest.json")));
    assert!(x.iter().any(|(n, _)| n == "wellposed.csv"));
    assert_eq!(x, y);
    let saved =
        ExperimentConfig::from_toml(&fs::read_to_string(a.path().join("config.toml")).unwrap())
            .unwrap();
    assert_eq!(saved, cfg);
}
