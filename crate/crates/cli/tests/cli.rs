use std::path::Path;
use std::process::{Command, Output};

use hecke_cli::{
    cmd_sweep, lemma_suite, SweepConfig, SweepReport, EXIT_FAIL, EXIT_PASS, EXIT_USAGE,
};

fn hecke(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hecke"))
        .args(args)
        .env_remove("HECKE_CACHE_DIR")
        .output()
        .unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn small() -> SweepConfig {
    SweepConfig {
        primes: vec![2, 3],
        composites: vec![4],
        d_max: 2,
        m_max: 3,
        ..SweepConfig::default()
    }
}

#[test]
fn verify_exit_codes() {
    let pass = hecke(&["verify", "--d", "2", "--m", "3", "--p", "3"]);
    assert_eq!(code(&pass), EXIT_PASS);
    let v: serde_json::Value = serde_json::from_slice(&pass.stdout).unwrap();
    assert_eq!(v["p2_divisible"], "pass");

    assert_eq!(
        code(&hecke(&["verify", "--d", "2", "--m", "4", "--p", "2"])),
        EXIT_USAGE
    );
    assert_eq!(
        code(&hecke(&["verify", "--d", "0", "--m", "1", "--p", "2"])),
        EXIT_USAGE
    );
    assert_eq!(
        code(&hecke(&["verify", "--d", "2", "--m", "3"])),
        EXIT_USAGE
    );
    assert_eq!(
        code(&hecke(&[
            "verify", "--d", "2", "--m", "3", "--p", "2", "--bogus"
        ])),
        EXIT_USAGE
    );
    assert_eq!(code(&hecke(&["--help"])), EXIT_PASS);
    assert_eq!(code(&hecke(&["--version"])), EXIT_PASS);

    let fail = hecke(&["verify", "--d", "2", "--m", "3", "--p", "4"]);
    assert_eq!(code(&fail), EXIT_FAIL);
    let v: serde_json::Value = serde_json::from_slice(&fail.stdout).unwrap();
    assert_eq!(v["p_prime"], false);
    assert!(v["remainder_witness"].is_object());
    assert!(v["quotient"].is_null());
}

#[test]
fn negative_framing_is_accepted() {
    let out = hecke(&["verify", "--d", "1", "--m", "-2", "--p", "3"]);
    assert_eq!(code(&out), EXIT_PASS);
}

#[test]
fn report_schema_field_names() {
    let out = hecke(&["verify", "--d", "1", "--m", "1", "--p", "2"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    for k in [
        "d",
        "m",
        "framing",
        "p",
        "p_prime",
        "a_factor",
        "z2_member",
        "p2_divisible",
        "quotient",
        "remainder_witness",
        "identity_gp_eq_p2F",
        "millis",
    ] {
        assert!(keys.contains(&k), "missing {k} in {keys:?}");
    }
}

#[test]
fn verify_with_suites() {
    let out = hecke(&[
        "verify",
        "--d",
        "2",
        "--m",
        "3",
        "--p",
        "2",
        "--alexander",
        "--lmov",
        "--degree",
        "2",
    ]);
    assert_eq!(code(&out), EXIT_PASS);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["alexander"]["limit_identity"], "pass");
    assert_eq!(v["alexander"]["thm13"], "pass");
    assert_eq!(v["alexander"]["thm41_hooks"].as_array().unwrap().len(), 3);
    let lmov = v["lmov"].as_array().unwrap();
    assert_eq!(lmov.len(), 3);
    assert_eq!(lmov[0]["mu"], "1");
    assert!(lmov.iter().all(|e| e["pass"] == true));
}

#[test]
fn sweep_is_deterministic_across_worker_counts() {
    let one = cmd_sweep(&SweepConfig {
        workers: 1,
        ..small()
    })
    .without_timing();
    let many = cmd_sweep(&SweepConfig {
        workers: 4,
        ..small()
    })
    .without_timing();
    assert_eq!(one.to_json(), many.to_json());
    assert_eq!(
        one.to_json(),
        cmd_sweep(&small()).without_timing().to_json()
    );
    let keys: Vec<_> = one.cases.iter().map(|c| c.key()).collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
    assert_eq!(one.summary.prime_fail, 0);
    assert_eq!(
        one.summary.fail,
        one.cases.iter().filter(|c| c.key().2 == 4).count()
    );
    assert_eq!(one.exit_code(), EXIT_PASS);
}

#[test]
fn report_json_round_trip() {
    let report = cmd_sweep(&SweepConfig {
        alexander: true,
        lmov: true,
        degree: 2,
        ..small()
    });
    let back: SweepReport = serde_json::from_str(&report.to_json()).unwrap();
    assert_eq!(back.to_json(), report.to_json());
}

#[test]
fn empty_grid() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = dir.path().join("empty.json");
    std::fs::write(
        &cfg_path,
        SweepConfig {
            d_min: 5,
            d_max: 4,
            ..SweepConfig::default()
        }
        .to_json(),
    )
    .unwrap();
    let out = hecke(&["sweep", "--sweep-config", cfg_path.to_str().unwrap()]);
    assert_eq!(code(&out), EXIT_PASS);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["summary"]["cases"], 0);
    assert!(v["cases"].as_array().unwrap().is_empty());
}

#[test]
fn sweep_writes_json_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = dir.path().join("cfg.json");
    std::fs::write(
        &cfg_path,
        SweepConfig {
            primes: vec![2],
            composites: vec![],
            d_max: 1,
            m_max: 2,
            ..SweepConfig::default()
        }
        .to_json(),
    )
    .unwrap();
    let out_path = dir.path().join("report.json");
    let out = hecke(&[
        "sweep",
        "--sweep-config",
        cfg_path.to_str().unwrap(),
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), EXIT_PASS);
    let csv = std::fs::read_to_string(dir.path().join("report.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next(),
        Some("d,m,p,p_prime,verdict,quotient_z2_degree,millis")
    );
    assert!(lines.next().unwrap().starts_with("1,1,2,true,PASS,0,"));
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(v["summary"]["pass"], 2);

    let csv_out = hecke(&[
        "sweep",
        "--sweep-config",
        cfg_path.to_str().unwrap(),
        "--format",
        "csv",
    ]);
    assert!(String::from_utf8(csv_out.stdout)
        .unwrap()
        .starts_with("d,m,p,p_prime"));
}

#[test]
fn bad_config_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = dir.path().join("bad.json");
    std::fs::write(&cfg_path, r#"{"primes": [2], "colour": "red"}"#).unwrap();
    assert_eq!(
        code(&hecke(&[
            "sweep",
            "--sweep-config",
            cfg_path.to_str().unwrap()
        ])),
        EXIT_USAGE
    );
}

#[test]
fn config_round_trip_and_coprime_filter() {
    let cfg = SweepConfig {
        lemmas: true,
        seed: 42,
        out: Some("x.json".into()),
        ..SweepConfig::default()
    };
    assert_eq!(SweepConfig::from_json(&cfg.to_json()).unwrap(), cfg);
    assert_eq!(
        SweepConfig::from_json("{}").unwrap(),
        SweepConfig::default()
    );
    let cases = SweepConfig::default().cases();
    assert!(cases
        .iter()
        .all(|(k, p)| num_gcd(k.d() as i64, k.m()) == 1 && p * k.d() <= 15));
    let prime_cases = cases.iter().filter(|(_, p)| [2, 3, 5].contains(p)).count();
    assert_eq!(prime_cases, 48);
}

fn num_gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        num_gcd(b, a % b)
    }
}

#[test]
fn lemma_suite_passes() {
    let suite = lemma_suite(&SweepConfig {
        primes: vec![2, 3],
        d_max: 2,
        m_max: 3,
        ..SweepConfig::default()
    });
    assert!(!suite.lemma32.is_empty() && !suite.lemma33.is_empty());
    assert!(suite.passed());
}

fn cache(dir: &Path, args: &[&str]) -> (i32, serde_json::Value) {
    let out = Command::new(env!("CARGO_BIN_EXE_hecke"))
        .arg("cache")
        .args(args)
        .env("HECKE_CACHE_DIR", dir)
        .output()
        .unwrap();
    (
        code(&out),
        serde_json::from_slice(&out.stdout).unwrap_or(serde_json::Value::Null),
    )
}

#[test]
fn cache_lifecycle() {
    let dir = tempfile::tempdir().unwrap();
    let root = dir.path().join("tables");
    let (c, stat) = cache(&root, &["stat"]);
    assert_eq!(c, EXIT_PASS);
    assert_eq!(stat["entries"], 0);

    let (c, built) = cache(&root, &["build", "--max-weight", "8"]);
    assert_eq!(c, EXIT_PASS);
    assert_eq!(built["written"].as_array().unwrap().len(), 8);
    let first = std::fs::read(root.join("chars-8.json")).unwrap();

    let (_, again) = cache(&root, &["build", "--max-weight", "8"]);
    assert!(again["written"].as_array().unwrap().is_empty());
    assert_eq!(again["reused"].as_array().unwrap().len(), 8);
    assert_eq!(std::fs::read(root.join("chars-8.json")).unwrap(), first);

    let (_, stat) = cache(&root, &["stat"]);
    assert_eq!(stat["entries"], 8);

    let out = Command::new(env!("CARGO_BIN_EXE_hecke"))
        .args(["verify", "--d", "1", "--m", "1", "--p", "3"])
        .env("HECKE_CACHE_DIR", &root)
        .output()
        .unwrap();
    assert_eq!(code(&out), EXIT_PASS);

    let (_, cleared) = cache(&root, &["clear"]);
    assert_eq!(cleared["removed"], 8);
    assert_eq!(cache(&root, &["stat"]).1["entries"], 0);
}

#[test]
fn cache_without_directory_is_a_usage_error() {
    assert_eq!(code(&hecke(&["cache", "stat"])), EXIT_USAGE);
}
