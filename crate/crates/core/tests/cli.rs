use fair_election::cli::{run_cli, CliOutput, COLUMNS, EXIT_INVALID, EXIT_OK, EXIT_REJECTED};

fn run(args: &str) -> CliOutput {
    run_cli(std::iter::once("fair-election").chain(args.split_whitespace()))
}

fn csv_rows(out: &CliOutput) -> Vec<Vec<String>> {
    let mut lines = out.stdout.lines();
    assert_eq!(lines.next(), Some(COLUMNS.join(",").as_str()));
    lines.map(|l| l.split(',').map(str::to_string).collect()).collect()
}

#[test]
fn pnk_row() {
    let out = run("pnk --n 8 --k 2");
    assert_eq!(out.status, EXIT_OK);
    let rows = csv_rows(&out);
    assert_eq!(rows.len(), 1);
    let row = &rows[0];
    assert_eq!(&row[..7], ["pnk", "p", "8", "2", "3", "0", "42"]);
    assert!(row[7].starts_with("0.357142857"));
    assert_eq!(row[9], "5/14");
    let estimate: f64 = row[10].parse().unwrap();
    assert!((estimate - 5.0 / 14.0).abs() < 0.01);
}

#[test]
fn quantum_histogram_is_uniform() {
    let out = run("elect-quantum --n 16 --trials 100000 --seed 42 --format csv --assert");
    assert_eq!(out.status, EXIT_OK, "{}", out.stderr);
    let rows = csv_rows(&out);
    let cells: Vec<_> = rows.iter().filter(|r| r[1].starts_with('A')).collect();
    assert_eq!(cells.len(), 16);
    let total: f64 = cells.iter().map(|r| r[7].parse::<f64>().unwrap()).sum();
    assert_eq!(total, 100_000.0);
    let chi2 = rows.iter().find(|r| r[1] == "chi2").unwrap();
    assert_eq!(chi2[11], "uniform");
    let cbits = rows.iter().find(|r| r[1] == "cbits").unwrap();
    assert_eq!(cbits[11], "ledger-exact");
}

#[test]
fn overloaded_sweep_approaches_exp_minus_one() {
    let out = run("sweep --mode overloaded --C 1 --n-min 2^10 --n-max 2^20");
    assert_eq!(out.status, EXIT_OK);
    let rows = csv_rows(&out);
    assert_eq!(rows.len(), 11);
    let limit = (-1.0f64).exp();
    let gaps: Vec<f64> = rows.iter().map(|r| (r[7].parse::<f64>().unwrap() - limit).abs()).collect();
    assert!(gaps.windows(2).all(|w| w[1] < w[0]), "{gaps:?}");
    assert!(*gaps.last().unwrap() <= 0.02);
    assert_eq!(rows.last().unwrap()[3], "52429");
}

#[test]
fn logn_sweep() {
    let out = run("sweep --mode logn --n-min 2^8 --n-max 2^20 --format json");
    let rows: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    let values: Vec<f64> = rows.as_array().unwrap().iter().map(|r| r["value"].as_f64().unwrap()).collect();
    assert_eq!(values.len(), 13);
    assert!(values.windows(2).all(|w| w[1] > w[0]));
}

#[test]
fn json_mirrors_csv_keys() {
    let out = run("montecarlo --n 8 --k 2 --trials 20000 --seed 3 --format json");
    let rows: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    let row = rows[0].as_object().unwrap();
    let keys: Vec<_> = row.keys().map(String::as_str).collect();
    let mut expected = COLUMNS.to_vec();
    expected.sort_unstable();
    let mut keys_sorted = keys.clone();
    keys_sorted.sort_unstable();
    assert_eq!(keys_sorted, expected);
    assert_eq!(row["verdict"], "within-4se");
}

#[test]
fn reports_are_byte_identical() {
    for args in [
        "elect-random --n 32 --k 3 --trials 2000 --seed 9",
        "bias-test --n 16 --biased 2,5:0.8 --trials 5000 --seed 1 --format json",
        "montecarlo --n 1024 --k 10 --trials 5000 --seed 4",
        "elect-quantum --n 8 --audit --biased 3 --seed 12",
    ] {
        let a = run(args);
        assert_eq!(a.status, EXIT_OK, "{args}: {}", a.stderr);
        assert_eq!(a, run(args), "{args}");
    }
}

#[test]
fn rows_are_self_describing() {
    let out = run("elect-random --n 16 --k 2 --trials 500 --seed 8");
    for row in csv_rows(&out) {
        assert_eq!(row[0], "elect-random");
        assert_eq!((row[2].as_str(), row[3].as_str(), row[6].as_str()), ("16", "2", "8"));
    }
    assert!(out.stdout.contains("avoided-bias"));
}

#[test]
fn rejection_under_assert() {
    let out = run("bias-test --n 16 --k 8 --trials 20000 --assert");
    assert_eq!(out.status, EXIT_REJECTED);
    assert!(out.stdout.contains(",biased\n"));
    assert_eq!(run("bias-test --n 16 --k 8 --trials 20000").status, EXIT_OK);
}

#[test]
fn validation_and_usage_errors() {
    for args in [
        "pnk --n 6 --k 1",
        "pnk --n 8 --k 9",
        "elect-quantum --n 8 --referee 9",
        "elect-random --n 8 --biased 2:0.5",
        "montecarlo --n 8 --k 1 --trials 0",
        "sweep --mode overloaded --C 0",
        "frobnicate",
        "pnk --n 8",
    ] {
        let out = run(args);
        assert_eq!(out.status, EXIT_INVALID, "{args}");
        assert!(!out.stderr.is_empty(), "{args}");
        assert!(out.stdout.is_empty(), "{args}");
    }
    let help = run("--help");
    assert_eq!(help.status, EXIT_OK);
    assert!(help.stdout.contains("FAIR_ELECTION_SEED"));
    assert!(help.stdout.contains("verdict"));
}

#[test]
fn few_trials_skip_the_test() {
    let out = run("elect-quantum --n 16");
    let rows = csv_rows(&out);
    assert_eq!(rows.iter().find(|r| r[1] == "chi2").unwrap()[11], "insufficient-samples");
    assert_eq!(rows.iter().filter(|r| r[1].starts_with('A') && r[7] == "1").count(), 1);
}
