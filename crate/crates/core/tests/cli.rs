//! End-to-end runs of the command-line front end.

use noodle_core::cli::run_with;
use serde_json::Value;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("noodle").chain(args.iter().copied());
    let code = run_with(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn json(args: &[&str]) -> Value {
    let (code, out, err) = run(args);
    assert_eq!(code, 0, "{err}");
    serde_json::from_str(&out).unwrap()
}

#[test]
fn nc_distance_reports_both_methods() {
    let v = json(&[
        "nc-distance",
        "--n",
        "4",
        "--pi",
        "1,2|3,4",
        "--rho",
        "1|2,3|4",
    ]);
    assert_eq!(v["result"]["distance"], 3);
    assert_eq!(v["result"]["bfs_distance"], 3);
    assert_eq!(v["result"]["cc"], 1);
    let v = json(&[
        "nc-distance",
        "--n",
        "4",
        "--pi",
        "1,2,3|4",
        "--rho",
        "1,3|2|4",
    ]);
    assert_eq!(v["result"]["distance"], v["result"]["bfs_distance"]);
    assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(v["config"]["command"]["name"], "nc-distance");
    assert_eq!(v["config"]["command"]["pi"], "1,2,3|4");
    assert_eq!(v["config"]["seed"], 1);
}

#[test]
fn bounds_document() {
    let v = json(&["kappa-bounds", "--kmax", "2", "--lmax", "50"]);
    let r = &v["result"];
    let lower: f64 = r["decimal_lower"].as_str().unwrap().parse().unwrap();
    let upper: f64 = r["decimal_upper"].as_str().unwrap().parse().unwrap();
    assert!((0.17..0.175).contains(&lower), "{lower}");
    assert!((0.35..0.36).contains(&upper), "{upper}");
    for key in ["num", "den"] {
        assert!(r["lower"][key].is_string());
        assert!(r["upper"][key].is_string());
    }
    assert_eq!(r["spec"]["k_max"], 2);
    assert_eq!(r["per_k_lower"].as_array().unwrap().len(), 2);

    let v = json(&["kappa-upper", "--kmax", "0"]);
    assert_eq!(v["result"]["decimal_upper"], "0.500000000000");
    let v = json(&[
        "kappa-lower",
        "--kmax",
        "1",
        "--lmax",
        "0",
        "--arithmetic",
        "exact",
    ]);
    assert_eq!(v["result"]["lower"]["num"], "1");
    assert_eq!(v["result"]["lower"]["den"], "8");
}

#[test]
fn identical_runs_are_byte_identical() {
    for args in [
        &[
            "--seed",
            "7",
            "estimate-kappa-finite",
            "--n",
            "300",
            "--samples",
            "50",
        ][..],
        &[
            "--seed",
            "7",
            "estimate-kappa-noodle",
            "--samples",
            "3000",
            "--budget",
            "500",
        ],
        &["--seed", "7", "sample-ms", "--n", "20"],
        &["--seed", "7", "noodle-explore", "--mode", "partial"],
        &[
            "--seed",
            "7",
            "nc-experiment",
            "--n",
            "200",
            "--samples",
            "10",
        ],
        &[
            "--seed",
            "7",
            "local-profile",
            "--n",
            "300",
            "--marks",
            "1000",
        ],
    ] {
        let a = run(args);
        let b = run(args);
        assert_eq!(a.0, 0, "{}", a.2);
        assert_eq!(a, b);
    }
    let a = run(&["--seed", "7", "sample-ms", "--n", "20"]).1;
    let b = run(&["--seed", "8", "sample-ms", "--n", "20"]).1;
    assert_ne!(a, b);
}

#[test]
fn csv_output() {
    let (code, out, _) = run(&["nc-experiment", "--n", "50", "--samples", "5"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(lines[0], "n,seed,mean_d_over_n,mean_d0_over_n,samples");
    assert!(lines[1].starts_with("50,1,"));
    assert!(out.starts_with(&format!(
        "# noodle {}\n# config ",
        env!("CARGO_PKG_VERSION")
    )));

    let (_, out, _) = run(&["enumerate-meanders", "--k", "2", "--format", "csv"]);
    let rows: Vec<&str> = out.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(
        rows,
        ["k,index,upper,lower", "2,0,LLRR,LRLR", "2,1,LRLR,LLRR"]
    );
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["no-such-command"]).0, 2);
    assert_eq!(run(&["sample-ms", "--bogus"]).0, 2);
    assert_eq!(
        run(&["nc-distance", "--pi", "1,3|2,4", "--rho", "1|2|3|4"]).0,
        2
    );
    assert_eq!(
        run(&[
            "nc-distance",
            "--n",
            "3",
            "--pi",
            "1|2|3|4",
            "--rho",
            "1|2|3|4"
        ])
        .0,
        2
    );
    assert_eq!(run(&["kappa-bounds", "--kmax", "4"]).0, 3);
    assert_eq!(run(&["enumerate-open", "--k", "4"]).0, 3);
    assert_eq!(run(&["nc-verify", "--n", "9"]).0, 3);
    let (code, out, _) = run(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("kappa-bounds"));
    assert_eq!(run(&["enumerate-open", "--k", "4", "--allow-long"]).0, 0);
}

#[test]
fn cache_lifecycle() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let missing = run(&[
        "--cache-dir",
        d,
        "kappa-lower",
        "--kmax",
        "2",
        "--shapes",
        "cache",
    ]);
    assert_eq!(missing.0, 3, "{}", missing.2);

    let v = json(&["--cache-dir", d, "cache", "build", "--kmax", "3"]);
    assert_eq!(v["result"]["entries"]["meanders-k3.jsonl"], 8);
    assert_eq!(v["result"]["entries"]["open-k3.jsonl"], 42);
    assert_eq!(v["config"]["cache_dir"], d);

    let cached = json(&[
        "--cache-dir",
        d,
        "kappa-bounds",
        "--kmax",
        "3",
        "--lmax",
        "10",
        "--shapes",
        "cache",
    ]);
    let fresh = json(&["kappa-bounds", "--kmax", "3", "--lmax", "10"]);
    assert_eq!(cached["result"], fresh["result"]);

    let v = json(&["--cache-dir", d, "cache", "inspect"]);
    assert_eq!(v["result"]["format_version"], 1);
    assert_eq!(v["result"]["entries"].as_object().unwrap().len(), 6);
}

#[test]
fn output_file_and_timing() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.json");
    let p = path.to_str().unwrap();
    let (code, out, _) = run(&["--output", p, "--timing", "nc-verify", "--n", "4"]);
    assert_eq!(code, 0);
    assert!(out.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert!(v["wall_clock_seconds"].as_f64().unwrap() >= 0.0);
    assert_eq!(v["result"]["pairs"], 196);
    assert_eq!(v["result"]["mismatches"].as_array().unwrap().len(), 0);
}

#[test]
fn exploration_output() {
    let v = json(&["--seed", "3", "noodle-explore", "--budget", "100000"]);
    let r = &v["result"];
    assert!(r["status"] == "closed" || r["status"] == "censored");
    if r["status"] == "closed" {
        let size = r["size"].as_u64().unwrap();
        assert_eq!(size % 2, 0);
        assert_eq!(r["points"].as_array().unwrap().len() as u64, size);
    }
}
