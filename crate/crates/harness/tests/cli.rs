use std::path::Path;
use std::process::Command;

use lipopt_core::benchmarks::{registry, BenchmarkSpec};
use lipopt_harness::output::read_without_timing;

fn lipopt(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_lipopt"))
        .args(args)
        .env_remove("LIPOPT_OUT_DIR")
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) {
    let out = lipopt(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
}

fn header(path: &Path) -> String {
    let text = std::fs::read_to_string(path).unwrap();
    text.lines().next().unwrap().to_string()
}

const RUNS: &str = "schema_version,objective,dim,domain,optimizer,setting,rep,seed,status,evaluations,final_best,\
final_best_t,total_proposals,total_seconds,objective_seconds,trace_path,error";
const SUMMARY: &str = "schema_version,objective,dim,domain,optimizer,setting,reps,reps_ok,known_max,mean_final_best,\
std_final_best,median_final_best,mean_proposals,mean_seconds,std_seconds";

#[test]
fn csv_headers_are_stable() {
    let tmp = tempfile::tempdir().unwrap();
    let d = |s: &str| tmp.path().join(s).to_str().unwrap().to_string();

    ok(&["run", "--objective", "camel", "--optimizer", "ecpv2", "--reps", "2", "--budget", "10", "--traces", "--out", &d("run")]);
    assert_eq!(header(&tmp.path().join("run/runs.csv")), RUNS);
    assert_eq!(header(&tmp.path().join("run/summary.csv")), SUMMARY);
    assert_eq!(
        header(&tmp.path().join("run/traces/camel__ecpv2__rep1.csv")),
        "schema_version,t,value,best_so_far,eps_t,proposals,elapsed_seconds"
    );

    ok(&["ablate-m", "--objective", "camel", "--reps", "1", "--budget", "10", "--m-grid", "1,2", "--out", &d("m")]);
    assert_eq!(
        header(&tmp.path().join("m/m_ablation.csv")),
        "schema_version,objective,dim,m,reps_ok,mean_final_best,std_final_best,mean_seconds,std_seconds"
    );

    ok(&["ablate-features", "--objective", "camel", "--reps", "1", "--budget", "10", "--out", &d("f")]);
    assert_eq!(
        header(&tmp.path().join("f/features.csv")),
        "schema_version,objective,dim,optimizer,lower_bound,worst_m,projection,reps_ok,mean_final_best,\
std_final_best,mean_seconds,std_seconds"
    );

    ok(&["jl-check", "--n-points", "5", "--d", "100", "--trials", "2", "--beta-grid", "2", "--keep-ratios", "--out", &d("jl")]);
    assert_eq!(
        header(&tmp.path().join("jl/jl_success.csv")),
        "schema_version,n_points,d,delta,beta,d_prime,mode,trials,success_rate,nominal_rate,ratio_mean,\
ratio_variance,ratio_min,ratio_max"
    );
    assert_eq!(header(&tmp.path().join("jl/jl_histogram.csv")), "schema_version,delta,beta,bin_lo,bin_hi,count");
    assert_eq!(
        header(&tmp.path().join("jl/jl_ratios.csv")),
        "schema_version,delta,beta,trial,pair_i,pair_j,ratio,success"
    );

    ok(&["lb-check", "--reps", "1", "--n-candidates", "10", "--out", &d("lb")]);
    assert_eq!(
        header(&tmp.path().join("lb/lb_check.csv")),
        "schema_version,objective,dim,rep,t,eps_floor,multiple,eps,fraction"
    );

    ok(&["phi-ratio", "--n", "10", "--m-grid", "1,10", "--trials", "2", "--out", &d("phi")]);
    assert_eq!(
        header(&tmp.path().join("phi/phi_ratio.csv")),
        "schema_version,objective,m,n,trial,phi_full,phi_m,ratio"
    );
    assert_eq!(header(&tmp.path().join("phi/phi_fit.csv")), "schema_version,objective,n,trials,excluded,a,b");
}

fn campaign(dir: &Path, parallel: &str) {
    ok(&[
        "run", "--objective", "himmelblau,rosenbrock:3", "--optimizer", "ecpv2,ecp,prs,adalipo,ecpv2[lb+proj]",
        "--reps", "3", "--budget", "25", "--seed", "11", "--traces", "--parallel", parallel, "--out",
        dir.to_str().unwrap(),
    ]);
}

fn assert_same_outputs(a: &Path, b: &Path) {
    for f in ["runs.csv", "summary.csv", "traces/rosenbrock3__ecpv2_lb_proj___rep2.csv", "traces/himmelblau__adalipo__rep0.csv"] {
        assert_eq!(read_without_timing(&a.join(f)).unwrap(), read_without_timing(&b.join(f)).unwrap(), "{f}");
    }
}

#[test]
fn parallel_matches_serial() {
    let tmp = tempfile::tempdir().unwrap();
    campaign(&tmp.path().join("serial"), "1");
    campaign(&tmp.path().join("par"), "4");
    assert_same_outputs(&tmp.path().join("serial"), &tmp.path().join("par"));
}

#[test]
fn config_file_replays_exactly() {
    let tmp = tempfile::tempdir().unwrap();
    let first = tmp.path().join("first");
    campaign(&first, "2");
    // The dumped config reproduces the run, except for where it writes.
    let mut cfg: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(first.join("config.json")).unwrap()).unwrap();
    cfg["output_dir"] = serde_json::Value::Null;
    let cfg_path = tmp.path().join("replay.json");
    std::fs::write(&cfg_path, cfg.to_string()).unwrap();
    let second = tmp.path().join("second");
    let out = Command::new(env!("CARGO_BIN_EXE_lipopt"))
        .args(["run", "--config", cfg_path.to_str().unwrap()])
        .env("LIPOPT_OUT_DIR", &second)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_same_outputs(&first, &second);
}

#[test]
fn failed_runs_give_nonzero_exit_but_keep_results() {
    let tmp = tempfile::tempdir().unwrap();
    let out = lipopt(&[
        "run", "--objective", "himmelblau", "--reps", "2", "--budget", "20", "--eps1", "1e-12", "--tau", "1.0000001",
        "--max-proposals", "5", "--out", tmp.path().to_str().unwrap(),
    ]);
    assert!(!out.status.success());
    let rows = read_without_timing(&tmp.path().join("runs.csv")).unwrap();
    assert_eq!(rows.len(), 3);
    assert!(rows[1..].iter().all(|r| r[8] == "error"));
}

#[test]
fn bad_input_is_reported() {
    let out = lipopt(&["run", "--objective", "no_such_function"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("no_such_function"));

    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("c.json");
    std::fs::write(&cfg, "{\n  \"reps\": 3,\n  \"bogus\": 1\n}\n").unwrap();
    let out = lipopt(&["run", "--config", cfg.to_str().unwrap()]);
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 3"), "{err}");
}

#[test]
fn registry_dump_matches_code() {
    let out = lipopt(&["registry"]);
    assert!(out.status.success());
    let printed: Vec<BenchmarkSpec> = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(printed, registry());

    // The checked-in copy consumed by other tools.
    let file = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../registry.json");
    let stored: Vec<BenchmarkSpec> = serde_json::from_str(&std::fs::read_to_string(file).unwrap()).unwrap();
    assert_eq!(stored, registry(), "registry.json is stale; regenerate with `lipopt registry --out .`");
}
