use std::process::{Command, Output};

use polybern::rational;
use serde_json::Value;

fn polybern(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polybern"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn strings(v: &Value) -> Vec<String> {
    v.as_array().unwrap().iter().map(|x| x.as_str().unwrap().to_string()).collect()
}

#[test]
fn numbers_tables() {
    let out = polybern(&["numbers", "--k", "1", "--n-max", "4", "--format", "csv"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "n,value\n0,1\n1,1/2\n2,1/6\n3,0\n4,-1/30\n");

    let out = polybern(&["numbers", "--k", "2", "--n-max", "2"]);
    let values: Vec<_> = json(&out)["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["value"].as_str().unwrap().to_string())
        .collect();
    assert_eq!(values, ["1", "1/4", "-1/36"]);

    let out = polybern(&["numbers", "--k", "0", "--n-max", "0", "--format", "csv"]);
    assert_eq!(stdout(&out), "n,value\n0,1\n");

    let out = polybern(&["numbers", "--k", "-3", "--n-max", "2", "--format", "csv"]);
    assert_eq!(stdout(&out), "n,value\n0,1\n1,8\n2,46\n");
}

#[test]
fn poly_coefficients() {
    let out = polybern(&["poly", "--family", "poly-bernoulli", "--k", "2", "--n", "1"]);
    assert!(out.status.success());
    assert_eq!(strings(&json(&out)["coeffs"]), ["1/4", "1"]);

    let out = polybern(&["poly", "--family", "euler", "--r", "0", "--n", "3"]);
    assert_eq!(strings(&json(&out)["coeffs"]), ["0", "0", "0", "1"]);

    let out = polybern(&["poly", "--family", "higher-bernoulli", "--r", "1", "--n", "2"]);
    assert_eq!(strings(&json(&out)["coeffs"]), ["1/6", "-1", "1"]);

    let out = polybern(&["poly", "--family", "frobenius-euler", "--r", "1", "--lambda", "3", "--n", "1"]);
    assert_eq!(strings(&json(&out)["coeffs"]), ["1/2", "1"]);

    let out = polybern(&["poly", "--family", "higher-bernoulli", "--r", "1", "--n", "2", "--format", "latex"]);
    assert_eq!(stdout(&out), "$x^{2} - x + \\frac{1}{6}$\n");
}

#[test]
fn invalid_invocations_exit_2() {
    let out = polybern(&["poly", "--family", "frobenius-euler", "--lambda", "1", "--n", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("lambda"));
    assert!(out.stdout.is_empty());

    let out = polybern(&["poly", "--family", "frobenius-euler", "--n", "2"]);
    assert_eq!(out.status.code(), Some(2));

    let out = polybern(&["check", "--identity", "nosuch"]);
    assert_eq!(out.status.code(), Some(2));

    let out = polybern(&["check", "--lambda", "1", "--n-max", "1"]);
    assert_eq!(out.status.code(), Some(2));

    let out = polybern(&["numbers", "--k", "1"]);
    assert_eq!(out.status.code(), Some(2));

    let out = polybern(&["connect", "--source", "hermite:r=1", "--target", "euler:r=1", "--n", "2"]);
    assert_eq!(out.status.code(), Some(2));

    let out = polybern(&["numbers", "--k", "1", "--n-max", "2", "--format", "xml"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn check_small_grid() {
    let out = polybern(&["check", "--identity", "thm1", "--n-max", "3", "--k-min", "1", "--k-max", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let lines: Vec<Value> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 5);
    for (n, rec) in lines[..4].iter().enumerate() {
        assert_eq!(rec["identity"], "thm1");
        assert_eq!(rec["params"]["n"], n as u64);
        assert_eq!(rec["params"]["k"], 1);
        assert_eq!(rec["pass"], true);
        assert_eq!(rec["lhs"], rec["rhs"]);
    }
    assert_eq!(lines[4]["summary"]["total"], 4);
    assert_eq!(lines[4]["summary"]["failed"], 0);
}

#[test]
fn check_csv_and_latex() {
    let args = ["check", "--identity", "thm6", "--n-max", "2", "--k-min", "-1", "--k-max", "-1", "--r-max", "1", "--lambda", "1/2"];
    let mut csv_args = args.to_vec();
    csv_args.extend(["--format", "csv"]);
    let out = polybern(&csv_args);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut rows = text.lines();
    assert_eq!(rows.next(), Some("identity,n,k,r,lambda,lhs,rhs,pass"));
    let body: Vec<_> = rows.collect();
    assert_eq!(body.len(), 3 * 2);
    assert!(body.iter().all(|r| r.starts_with("thm6,") && r.ends_with(",true") && r.contains(",1/2,")));
    assert!(String::from_utf8_lossy(&out.stderr).contains("6 checks, 6 passed, 0 failed"));

    let mut tex_args = args.to_vec();
    tex_args.extend(["--format", "latex"]);
    let text = stdout(&polybern(&tex_args));
    assert!(text.starts_with("\\begin{tabular}"));
    assert!(text.contains("thm6 & 0 & -1 & 0 & $\\frac{1}{2}$ & yes \\\\"));
    assert!(text.trim_end().ends_with("% 6 checks, 6 passed, 0 failed"));
}

#[test]
fn check_mutation_exits_1() {
    let out = polybern(&[
        "check", "--identity", "cor2", "--n-max", "4", "--k-min", "0", "--k-max", "2", "--mutate", "cor2:3:1",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    let failing: Vec<Value> = text
        .lines()
        .map(|l| serde_json::from_str::<Value>(l).unwrap())
        .filter(|v| v["pass"] == false)
        .collect();
    assert_eq!(failing.len(), 1);
    assert_eq!(failing[0]["params"]["n"], 3);
    assert_eq!(failing[0]["params"]["k"], 1);
    assert_ne!(failing[0]["lhs"], failing[0]["rhs"]);
}

#[test]
fn connect_matrices() {
    let out = polybern(&["connect", "--source", "poly-bernoulli:k=1", "--target", "higher-bernoulli:r=1", "--n", "1"]);
    assert!(out.status.success());
    let m = json(&out)["matrix"].clone();
    assert_eq!(strings(&m[1]), ["1", "1"]);
    assert_eq!(strings(&m[0]), ["1", "0"]);

    let out = polybern(&["connect", "--source", "poly-bernoulli:k=2", "--target", "euler:r=1", "--n", "0"]);
    assert_eq!(json(&out)["matrix"], serde_json::json!([["1"]]));

    let out = polybern(&[
        "connect", "--source", "frobenius-euler:r=2,lambda=-1/3", "--target", "frobenius-euler:r=2,lambda=-1/3", "--n", "3", "--format", "csv",
    ]);
    assert_eq!(stdout(&out), "n,m0,m1,m2,m3\n0,1,0,0,0\n1,0,1,0,0\n2,0,0,1,0\n3,0,0,0,1\n");
}

#[test]
fn output_is_deterministic_and_canonical() {
    let args = ["check", "--n-max", "3", "--k-min", "-2", "--k-max", "2", "--r-max", "2"];
    let a = polybern(&args);
    let b = polybern(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);

    fn walk(v: &Value, seen: &mut usize) {
        match v {
            Value::String(s) => {
                if let Some(q) = rational::parse(s) {
                    assert_eq!(&q.to_string(), s, "non-canonical rational");
                    *seen += 1;
                }
            }
            Value::Array(xs) => xs.iter().for_each(|x| walk(x, seen)),
            Value::Object(m) => m.values().for_each(|x| walk(x, seen)),
            _ => {}
        }
    }
    let mut seen = 0;
    for line in stdout(&a).lines() {
        walk(&serde_json::from_str(line).unwrap(), &mut seen);
    }
    assert!(seen > 1000);
}

#[test]
fn out_flag_writes_file() {
    let dir = std::env::temp_dir().join(format!("polybern-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("numbers.csv");
    let out = polybern(&["numbers", "--k", "1", "--n-max", "2", "--format", "csv", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), "n,value\n0,1\n1,1/2\n2,1/6\n");
    std::fs::remove_dir_all(&dir).unwrap();
}
