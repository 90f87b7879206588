use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polya-approx"))
        .args(args)
        .env("POLYA_APPROX_THREADS", "1")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn column(csv: &str, row: usize, name: &str) -> String {
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let i = header.iter().position(|h| *h == name).unwrap();
    lines.nth(row).unwrap().split(',').nth(i).unwrap().to_string()
}

#[test]
fn eval_reproduces_linear_function() {
    let o = run(&["eval", "--fn", "e1", "--op", "lupas_k", "--n", "10", "--k", "0.5", "--x", "0.3"]);
    assert!(o.status.success());
    let v: f64 = column(&stdout(&o), 0, "value").parse().unwrap();
    assert!((v - 0.3).abs() < 1e-14);
}

#[test]
fn moments_closed_and_oracle_agree() {
    let o = run(&["moments", "--n", "10", "--k", "0", "--x", "0.5", "--order", "2", "--kind", "kant"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert_eq!(s.lines().count(), 2);
    assert_eq!(column(&s, 0, "flag"), "false");
}

#[test]
fn verify_default_grid() {
    let o = run(&["verify"]);
    assert_eq!(o.status.code(), Some(0));
    // 375 grid tuples, 15 univariate and 8 bivariate checks each
    assert_eq!(stdout(&o).lines().count(), 1 + 375 * 23);
}

#[test]
fn verify_extended_oracle() {
    let o = run(&["verify", "--max-n", "10", "--oracle", "extended"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stderr).contains("extended oracle"));
    let bad = run(&["verify", "--max-n", "61", "--oracle", "extended"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn invalid_params_exit_2_naming_the_invariant() {
    let o = run(&["eval", "--fn", "e1", "--op", "kantorovich_stancu_k", "--alpha", "2", "--beta", "1", "--x", "0.5"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("alpha <= beta"));
    assert_eq!(run(&["eval", "--fn", "nope", "--x", "0.5"]).status.code(), Some(2));
    assert_eq!(run(&["eval", "--fn", "e1", "--x", "1.5"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn table_example_2_2_strictly_decreasing() {
    let o = run(&["table", "--example", "2.2"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert_eq!(s.lines().count(), 4);
    let sup: Vec<f64> = (0..3).map(|i| column(&s, i, "sup_error").parse().unwrap()).collect();
    assert!(sup[0] > sup[1] && sup[1] > sup[2]);
}

#[test]
fn figure_columns_and_bad_ids() {
    let o = run(&["figure", "--figure", "1", "--grid", "11"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert_eq!(s.lines().next().unwrap(), "x,f1,lupas_k_n10_k0.1,lupas_n10,bernstein_n10");
    assert_eq!(s.lines().count(), 12);
    let o = run(&["figure", "--figure", "4", "--grid", "3"]);
    assert!(stdout(&o).starts_with("x,f4,kantorovich_stancu_k_n50_k0.2_a0_b0,d_star_n50,bernstein_kantorovich_n50"));
    let o = run(&["figure2d", "--figure", "7", "--grid", "5"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("x,y,f7,K_n10_k0.2,d_star_n10"));
    assert_eq!(stdout(&o).lines().count(), 26);
    assert_eq!(run(&["figure", "--figure", "0"]).status.code(), Some(2));
    assert_eq!(run(&["figure2d", "--figure", "3"]).status.code(), Some(2));
}

#[test]
fn eval2d_point_and_json() {
    let o = run(&[
        "eval2d", "--fn", "e10", "--n", "10", "--k", "0.3", "--alpha", "1", "--beta", "2", "--x", "0.5", "--y", "0.2",
    ]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert_eq!(s.lines().next().unwrap(), "x,y,f,K_f");
    let v: f64 = column(&s, 0, "K_f").parse().unwrap();
    assert!((v - 0.5).abs() < 1e-12);
    let o = run(&["eval2d", "--fn", "f7", "--grid", "2", "--format", "json"]);
    assert!(stdout(&o).trim_start().starts_with('['));
}

#[test]
fn voronovskaja_rows() {
    let o = run(&["voronovskaja", "--fn", "e2", "--k", "0.2", "--x", "0.25", "--steps", "3"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert_eq!(s.lines().count(), 4);
    assert_eq!(column(&s, 2, "n"), "400");
}

#[test]
fn output_file_and_determinism() {
    let dir = std::env::temp_dir().join(format!("polya-approx-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let a = dir.join("a.csv");
    let args = ["figure", "--figure", "5", "--grid", "21", "--out"];
    let o = run(&[&args[..], &[a.to_str().unwrap()]].concat());
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let multi = Command::new(env!("CARGO_BIN_EXE_polya-approx"))
        .args(["figure", "--figure", "5", "--grid", "21"])
        .env("POLYA_APPROX_THREADS", "4")
        .output()
        .unwrap();
    assert_eq!(std::fs::read(&a).unwrap(), multi.stdout);
    std::fs::remove_dir_all(&dir).unwrap();
}
