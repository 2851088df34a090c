use std::path::Path;
use std::process::{Command, Output};

use pmit_cli::ExperimentConfig;

const MCMC: &str = r#"{
  "experiment": "mcmc_convergence",
  "n_qubits": 3,
  "depth": 3,
  "noise": { "kind": "depolarizing_gate_level", "p": 0.05 },
  "samples": [2000, 500]
}"#;

const SCALING: &str = r#"{
  "experiment": "gamma_scaling",
  "n_qubits": 3,
  "depths": [3, 0, 1],
  "axis": "depth",
  "instances": 4,
  "noise": { "kind": "depolarizing_gate_level", "p": 0.03 },
  "seed": 9
}"#;

fn pmit(dir: &Path, args: &[&str], threads: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_pmit"));
    cmd.current_dir(dir).args(args);
    match threads {
        Some(t) => cmd.env("PMIT_THREADS", t),
        None => cmd.env_remove("PMIT_THREADS"),
    };
    cmd.output().expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    std::fs::write(dir.join(name), text).unwrap();
    name.to_string()
}

#[test]
fn same_seed_gives_byte_identical_output() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "scaling.json", SCALING);
    let a = pmit(dir.path(), &["gamma_scaling", "--config", &cfg, "--out", "a.csv"], Some("1"));
    let b = pmit(dir.path(), &["gamma_scaling", "--config", &cfg, "--out", "b.csv"], Some("3"));
    assert!(a.status.success() && b.status.success(), "{}", String::from_utf8_lossy(&a.stderr));
    let a = std::fs::read(dir.path().join("a.csv")).unwrap();
    assert_eq!(a, std::fs::read(dir.path().join("b.csv")).unwrap());

    let text = String::from_utf8(a).unwrap();
    let mut lines = text.lines();
    let header: serde_json::Value = serde_json::from_str(lines.next().unwrap().strip_prefix("# ").unwrap()).unwrap();
    assert_eq!(header["experiment"], "gamma_scaling");
    assert_eq!(header["config"]["seed"], 9);
    assert!(header["version"].is_string());
    assert_eq!(lines.next().unwrap().split(',').next(), Some("depth"));
    let depths: Vec<&str> = lines.map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(depths, ["0", "1", "3"]);
}

#[test]
fn seed_flag_overrides_the_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "mcmc.json", MCMC);
    let run = |seed: &str| pmit(dir.path(), &["mcmc-convergence", "--config", &cfg, "--seed", seed], None);
    let (a, b, c) = (run("1"), run("1"), run("2"));
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    assert!(text.starts_with("# {"));
    let samples: Vec<&str> = text.lines().skip(2).map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(samples, ["500", "2000"]);
}

#[test]
fn output_path_in_config_is_used() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "mcmc.json", &MCMC.replace("\"samples\"", "\"output_path\": \"out.csv\", \"samples\""));
    let out = pmit(dir.path(), &["mcmc_convergence", "--config", &cfg], None);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    assert!(std::fs::read_to_string(dir.path().join("out.csv")).unwrap().contains("gamma_ratio"));
}

#[test]
fn config_errors_exit_with_code_two() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("unknown.json", MCMC.replace("\"depth\"", "\"depht\"")),
        ("zero.json", MCMC.replace("[2000, 500]", "[0]")),
        ("noise.json", MCMC.replace("\"p\": 0.05", "\"pauli_fidelity\": 0.9")),
        ("syntax.json", "{".to_string()),
    ];
    for (name, text) in cases {
        let cfg = write(dir.path(), name, &text);
        let out = pmit(dir.path(), &["mcmc_convergence", "--config", &cfg], None);
        assert_eq!(out.status.code(), Some(2), "{name}: {}", String::from_utf8_lossy(&out.stderr));
    }
    let err = pmit(dir.path(), &["mcmc_convergence", "--config", "zero.json"], None);
    assert!(String::from_utf8_lossy(&err.stderr).contains("`samples`"));

    let cfg = write(dir.path(), "mcmc.json", MCMC);
    let mismatch = pmit(dir.path(), &["gamma_scaling", "--config", &cfg], None);
    assert_eq!(mismatch.status.code(), Some(2));
    let missing = pmit(dir.path(), &["mcmc_convergence", "--config", "absent.json"], None);
    assert_eq!(missing.status.code(), Some(2));
    let threads = pmit(dir.path(), &["mcmc_convergence", "--config", &cfg], Some("many"));
    assert_eq!(threads.status.code(), Some(2));
}

#[test]
fn oversized_exact_fusion_is_a_capacity_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "big.json",
        r#"{
          "experiment": "mcmc_convergence",
          "n_qubits": 40,
          "depth": 2,
          "noise": { "kind": "depolarizing_gate_level", "p": 0.01 },
          "samples": [10]
        }"#,
    );
    let out = pmit(dir.path(), &["mcmc_convergence", "--config", &cfg], None);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn shipped_configs_parse() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let mut names = Vec::new();
    for entry in std::fs::read_dir(&dir).unwrap() {
        let path = entry.unwrap().path();
        let c = ExperimentConfig::load(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        names.push(c.name());
    }
    names.sort_unstable();
    names.dedup();
    assert_eq!(names.len(), 7, "{names:?}");
}

#[test]
fn zero_noise_distribution_has_unit_gamma() {
    let c = ExperimentConfig::from_json(
        r#"{
          "experiment": "distribution",
          "n_qubits": 3,
          "depth": 3,
          "noise": { "kind": "depolarizing_gate_level", "p": 0.0 },
          "estimates": 20,
          "M": 4,
          "shots": 64,
          "seed": 4
        }"#,
    )
    .unwrap();
    let s = pmit_cli::run(&c).unwrap().summary;
    for m in ["pec", "ppec", "ppec_xi"] {
        assert_eq!(s["methods"][m]["gamma"], 1.0, "{m}");
    }
}
