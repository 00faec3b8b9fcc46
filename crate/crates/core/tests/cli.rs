use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn cfrep(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cfrep")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("cfrep-cli-{}-{name}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn expand_golden() {
    let o = cfrep(&["expand", "4/11"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "[2,1,3] cost=6\nlog2(q)=3.459432\ncontinuant=[[1,4],[3,11]]\n");
    let o = cfrep(&["expand", "0/1"]);
    assert_eq!(stdout(&o), "[] cost=0\nlog2(q)=0.000000\ncontinuant=none\n");
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(cfrep(&["expand", "7/5"]).status.code(), Some(1));
    assert_eq!(cfrep(&["expand", "seven"]).status.code(), Some(1));
    assert_eq!(cfrep(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(cfrep(&["zaremba", "--A", "5"]).status.code(), Some(1));
    assert_eq!(cfrep(&["zaremba", "--N", "2000000"]).status.code(), Some(1));
    assert_eq!(cfrep(&["decompose", "1/300", "--delta", "3/2"]).status.code(), Some(1));
    assert_eq!(cfrep(&["--help"]).status.code(), Some(0));
}

#[test]
fn zaremba_golden() {
    let o = cfrep(&["zaremba", "--N", "7", "--A", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let (rows, summary) = text.split_once("\n\n").unwrap();
    assert_eq!(
        rows,
        "# N=7 A=2 congruence=1:0 tail=strict\n\
         q,A,d,beta,is_exceptional,candidates_scanned\n\
         2,2,1,0,false,1\n\
         3,2,1,0,false,2\n\
         4,2,1,0,true,3\n\
         5,2,1,0,false,2\n\
         6,2,1,0,true,5\n\
         7,2,1,0,false,5"
    );
    assert!(summary.starts_with("N,A,count,density_exponent\n7,2,2,"));
}

#[test]
fn zaremba_examples() {
    let members = |args: &[&str]| -> Vec<u64> {
        let text = stdout(&cfrep(args));
        text.lines()
            .filter(|l| l.contains(",true,"))
            .map(|l| l.split(',').next().unwrap().parse().unwrap())
            .collect()
    };
    assert!(members(&["zaremba", "--N", "50", "--A", "5"]).is_empty());
    assert!(members(&["zaremba", "--N", "10", "--A", "2"]).contains(&6));
    let o = cfrep(&["zaremba", "--N", "10", "--A", "2", "--congruence", "2:1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().skip(2).take(9).all(|l| l.split(',').nth(2) == Some("2")));
}

#[test]
fn zaremba_writes_both_files() {
    let dir = scratch("zaremba");
    let out = dir.join("scan.csv");
    let o = cfrep(&["zaremba", "--N", "100", "--A", "3", "--workers", "2", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let rows = fs::read_to_string(&out).unwrap();
    assert_eq!(rows.lines().count(), 2 + 99);
    let summary = fs::read_to_string(dir.join("scan.density.csv")).unwrap();
    assert!(summary.starts_with("N,A,count,density_exponent\n100,3,"));
    fs::remove_dir_all(dir).unwrap();
}

#[test]
fn decompose_base_case() {
    let o = cfrep(&["decompose", "3/7"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["terms"].as_array().unwrap().len(), 1);
    assert_eq!(v["total_cost"], 5);
    assert_eq!(v["depth"], 0);
}

#[test]
fn decompose_with_trace() {
    let o = cfrep(&["decompose", "12345/1000003", "--trace"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(!v["trace"].as_array().unwrap().is_empty());
    assert_eq!(v["target"], "12345/1000003");
}

#[test]
fn decompose_failure_exits_two_with_trace() {
    let o = cfrep(&["decompose", "1234/100003", "--budget", "1"]);
    assert_eq!(o.status.code(), Some(2));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(!v["trace"].as_array().unwrap().is_empty());
    assert!(v["error"].as_str().unwrap().contains("A = 50"));
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = scratch("config");
    let cfg = dir.join("run.cfg");
    fs::write(&cfg, "# tiny survey\nN = 10\nA = 2\n").unwrap();
    let cfg = cfg.to_str().unwrap();
    let from_file = stdout(&cfrep(&["--config", cfg, "zaremba"]));
    assert!(from_file.starts_with("# N=10 A=2 "));
    let overridden = stdout(&cfrep(&["--config", cfg, "zaremba", "--A", "3"]));
    assert!(overridden.starts_with("# N=10 A=3 "));
    fs::write(dir.join("bad.cfg"), "N ten\n").unwrap();
    let o = cfrep(&["--config", dir.join("bad.cfg").to_str().unwrap(), "zaremba"]);
    assert_eq!(o.status.code(), Some(1));
    fs::remove_dir_all(dir).unwrap();
}

#[test]
fn cost_survey_is_reproducible() {
    let run = |workers: &str| {
        let o = cfrep(&[
            "cost-survey", "--q-min", "2", "--q-max", "300", "--samples", "5", "--full-below", "150", "--seed", "7",
            "--workers", workers,
        ]);
        assert_eq!(o.status.code(), Some(0));
        stdout(&o)
    };
    let one = run("1");
    assert_eq!(one, run("3"));
    let mut lines = one.lines();
    assert!(lines.next().unwrap().starts_with("# seed=7 "));
    assert_eq!(lines.next(), Some("b,q,terms,total_cost,cost_over_ln_q,max_A_used,depth"));
    let summary = one.lines().last().unwrap();
    assert!(summary.starts_with("# summary rows="));
    assert!(summary.contains(" failures=0 "));
}

#[test]
fn cost_survey_full_range_has_no_failures() {
    let o = cfrep(&["cost-survey", "--q-min", "2", "--q-max", "200"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(!text.lines().any(|l| l.contains(",fail,")));
    // every reduced b/q with q <= 200
    let rows = text.lines().filter(|l| !l.starts_with('#') && !l.starts_with('b')).count();
    let expected: usize = (2..=200u64).map(|q| (1..q).filter(|b| num_integer::gcd(*b, q) == 1).count()).sum();
    assert_eq!(rows, expected);
}
