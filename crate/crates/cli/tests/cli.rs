use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use survroute::RunParams;
use survroute_cli::output::Summary;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_survroute"))
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../core/fixtures")
        .join(name)
}

fn exec(cmd: &mut Command) -> Output {
    cmd.output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn objectives(csv: &str) -> Vec<(f64, f64)> {
    csv.lines()
        .skip(1)
        .map(|l| {
            let mut f = l.split(',');
            let z1 = f.next().unwrap().parse().unwrap();
            let z2 = f.next().unwrap().parse().unwrap();
            (z1, z2)
        })
        .collect()
}

#[test]
fn oracle_output_matches_committed_fronts() {
    for name in ["trivial_1mr", "standard_3mr", "stress_5mr"] {
        let out = exec(bin().arg("oracle").arg(fixture(&format!("{name}.net"))));
        assert_eq!(code(&out), 0);
        let committed = fs::read_to_string(fixture(&format!("{name}.front.csv"))).unwrap();
        assert_eq!(String::from_utf8(out.stdout).unwrap(), committed, "{name}");
    }
}

#[test]
fn trivial_oracle_has_both_links() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("front.csv");
    let out = exec(bin().arg("oracle").arg(fixture("trivial_1mr.net")).arg("--out").arg(&path));
    assert_eq!(code(&out), 0);
    assert_eq!(
        fs::read_to_string(&path).unwrap(),
        "z1,z2,genotype\n1,0.335,MR1=AR1\n5,0.05,MR1=AR2\n"
    );
}

#[test]
fn oversize_oracle_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    let mut text = String::from("BS B 0.1\n");
    for a in 0..8 {
        text += &format!("AR A{a} B\n");
    }
    for m in 0..7 {
        text += &format!("MR M{m}\n");
        for a in 0..8 {
            text += &format!("LINK M{m} A{a} 1 0.1\n");
        }
    }
    let path = dir.path().join("big.net");
    fs::write(&path, text).unwrap();
    let out = exec(bin().arg("oracle").arg(&path));
    assert_eq!(code(&out), 4);
    assert!(String::from_utf8_lossy(&out.stderr).contains("oracle limit"));
}

#[test]
fn run_matches_oracle_front_and_writes_summary() {
    let dir = tempfile::tempdir().unwrap();
    let out = exec(
        bin()
            .args(["run", "--seed", "2", "--budget", "10000", "--set", "immigrant_fraction=0.25"])
            .arg("--instance")
            .arg(fixture("standard_3mr.net"))
            .arg("--out")
            .arg(dir.path()),
    );
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let front = fs::read_to_string(dir.path().join("front.csv")).unwrap();
    let oracle = fs::read_to_string(fixture("standard_3mr.front.csv")).unwrap();
    let (got, want) = (objectives(&front), objectives(&oracle));
    assert_eq!(got.len(), want.len());
    for (g, w) in got.iter().zip(&want) {
        assert!((g.0 - w.0).abs() <= 1e-12 && (g.1 - w.1).abs() <= 1e-12);
    }

    let summary: Summary =
        serde_json::from_str(&fs::read_to_string(dir.path().join("summary.json")).unwrap())
            .unwrap();
    let expected = RunParams {
        seed: 2,
        budget: 10_000,
        immigrant_fraction: 0.25,
        ..RunParams::default()
    };
    assert_eq!(RunParams::from(summary.params.clone()), expected);
    assert_eq!(summary.seed, 2);
    assert_eq!(summary.archive_size, want.len());
    assert_eq!(summary.scheduler.len(), 6);
    assert!(summary.evaluations >= 10_000);
}

#[test]
fn config_file_paths_resolve_against_the_file() {
    let dir = tempfile::tempdir().unwrap();
    fs::copy(fixture("trivial_1mr.net"), dir.path().join("tiny.net")).unwrap();
    let config = dir.path().join("run.cfg");
    fs::write(&config, "instance = tiny.net\nout = result\nbudget = 500\nseed = 3\n").unwrap();
    let out = exec(bin().arg("run").arg("--config").arg(&config));
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let front = fs::read_to_string(dir.path().join("result/front.csv")).unwrap();
    assert_eq!(front, "z1,z2,genotype\n1,0.335,MR1=AR1\n5,0.05,MR1=AR2\n");
}

#[test]
fn run_error_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let standard = fixture("standard_3mr.net");
    let out_dir = dir.path().join("o");

    let missing = exec(bin().args(["run", "--instance", "/no/such.net", "--out"]).arg(&out_dir));
    assert_eq!(code(&missing), 3);

    let broken = dir.path().join("broken.net");
    fs::write(&broken, "BS B 1.3\n").unwrap();
    let out = exec(bin().arg("run").arg("--instance").arg(&broken).arg("--out").arg(&out_dir));
    assert_eq!(code(&out), 3);

    let dangling = dir.path().join("dangling.net");
    fs::write(&dangling, "BS B 0.1\nMR M\nLINK M AR9 1 0.1\n").unwrap();
    let out = exec(bin().arg("run").arg("--instance").arg(&dangling).arg("--out").arg(&out_dir));
    assert_eq!(code(&out), 3);

    let bad_param = exec(
        bin()
            .args(["run", "--set", "immigrant_fraction=2"])
            .arg("--instance")
            .arg(&standard)
            .arg("--out")
            .arg(&out_dir),
    );
    assert_eq!(code(&bad_param), 2);

    let config = dir.path().join("bad.cfg");
    fs::write(&config, "colour = blue\n").unwrap();
    let out = exec(bin().arg("run").arg("--config").arg(&config));
    assert_eq!(code(&out), 2);

    let no_out = exec(bin().arg("run").arg("--instance").arg(&standard));
    assert_eq!(code(&no_out), 2);

    let no_config = exec(bin().args(["run", "--config", "/no/such.cfg"]));
    assert_eq!(code(&no_config), 2);
    assert!(!out_dir.exists());
}

fn measure(a: &Path, b: &Path, reference: &str) -> (i32, serde_json::Value) {
    let out = exec(bin().arg("measure").arg(a).arg(b).args(["--ref", reference]));
    let value = if code(&out) == 0 {
        serde_json::from_slice(&out.stdout).unwrap()
    } else {
        serde_json::Value::Null
    };
    (code(&out), value)
}

#[test]
fn measure_examples() {
    let dir = tempfile::tempdir().unwrap();
    let two = dir.path().join("two.csv");
    fs::write(&two, "z1,z2,genotype\n1,2,a\n2,1,b\n").unwrap();
    let (c, v) = measure(&two, &two, "3,3");
    assert_eq!(c, 0);
    assert_eq!(v["hv_a"], 3.0);
    assert_eq!(v["epsilon"], 0.0);
    assert_eq!(v["coverage_ab"], 1.0);
    assert_eq!(v["coverage_ba"], 1.0);

    let empty = dir.path().join("empty.csv");
    fs::write(&empty, "z1,z2,genotype\n").unwrap();
    let (c, v) = measure(&empty, &two, "3,3");
    assert_eq!(c, 0);
    assert_eq!(v["hv_a"], 0.0);
    assert_eq!(v["hv_b"], 3.0);
    assert!(v["epsilon"].is_null());
    assert_eq!(v["coverage_ab"], 0.0);
    assert!(v["coverage_ba"].is_null());

    let worse = dir.path().join("worse.csv");
    fs::write(&worse, "z1,z2,genotype\n2,2,c\n").unwrap();
    let (_, v) = measure(&worse, &two, "3,3");
    assert_eq!(v["epsilon"], 1.0);
    assert_eq!(v["coverage_ab"], 0.0);
    assert_eq!(v["coverage_ba"], 1.0);
}

#[test]
fn measure_rejects_bad_input() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.csv");
    fs::write(&good, "z1,z2,genotype\n1,2,a\n").unwrap();
    let bad = dir.path().join("bad.csv");
    fs::write(&bad, "z1,z2,genotype\n1,two,a\n").unwrap();
    assert_eq!(measure(&good, &bad, "3,3").0, 2);
    assert_eq!(measure(&good, &good, "3").0, 2);
    assert_eq!(measure(&good, &good, "0.5,3").0, 2);
    assert_eq!(measure(&good, &dir.path().join("missing.csv"), "3,3").0, 2);
}
