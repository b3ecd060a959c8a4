//! Acceptance run: one PASS/FAIL line per criterion, then a nonzero exit
//! status if any criterion failed.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use framing_core::framing::PhiAssessor;
use framing_core::qre::default_lambda_max;
use framing_core::{
    derivative_probe, duplicate_column, equivalent, gen_coordination, reduce, trace_branch,
    BranchOptions, Game, PlayerSide,
};
use framing_tool::{estimate_from_summary, run};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Outcome { pass, detail: detail.into() }
    }
}

struct Workspace {
    dir: tempfile::TempDir,
}

impl Workspace {
    fn new() -> Self {
        Workspace { dir: tempfile::tempdir().expect("temporary directory") }
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    /// Writes a generated game with `framing gen` and returns its path.
    fn gen(&self, name: &str, kind: &[&str]) -> PathBuf {
        let path = self.path(name);
        let mut args = vec!["framing", "gen"];
        args.extend_from_slice(kind);
        args.extend_from_slice(&["--out", path.to_str().unwrap()]);
        let (code, _, err) = cli(&args);
        assert_eq!(code, 0, "gen failed: {err}");
        path
    }
}

fn cli(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(args, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn cli_json(args: &[&str]) -> Value {
    let (code, out, err) = cli(args);
    assert_eq!(code, 0, "{args:?}: {err}");
    serde_json::from_str(&out).expect("command prints JSON")
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn floats(v: &Value) -> Vec<f64> {
    v.as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect()
}

fn softmax(u: &[f64], lambda: f64) -> Vec<f64> {
    let top = u.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let w: Vec<f64> = u.iter().map(|x| (lambda * (x - top)).exp()).collect();
    let total: f64 = w.iter().sum();
    w.iter().map(|x| x / total).collect()
}

fn residual(g: &Game<f64>, lambda: f64, row: &[f64], col: &[f64]) -> f64 {
    let (m, n) = (g.rows(), g.cols());
    let ur: Vec<f64> = (0..m).map(|i| (0..n).map(|j| g.a(i, j) * col[j]).sum()).collect();
    let uc: Vec<f64> = (0..n).map(|j| (0..m).map(|i| g.b(i, j) * row[i]).sum()).collect();
    let (sr, sc) = (softmax(&ur, lambda), softmax(&uc, lambda));
    row.iter().zip(&sr).chain(col.iter().zip(&sc)).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn random_game(rng: &mut ChaCha8Rng, rows: usize, cols: usize, draw: impl Fn(&mut ChaCha8Rng) -> f64) -> Game<f64> {
    let a = (0..rows * cols).map(|_| draw(rng)).collect();
    let b = (0..rows * cols).map(|_| draw(rng)).collect();
    Game::from_flat(rows, cols, a, b).unwrap()
}

fn criterion_1() -> Outcome {
    let ws = Workspace::new();
    let mut lines = Vec::new();
    let mut pass = true;
    for (n_outside, want) in [("1", [-5.0, 5.0]), ("2", [3.75, -3.75])] {
        let path = ws.gen(&format!("c{n_outside}.json"), &["coordination", "60", n_outside]);
        let args = ["framing", "assess", "--game", p(&path), "--method", "phi", "--side", "row"];
        let values = floats(&cli_json(&args)["values"]);
        let err = values.iter().zip(want).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        let mut times: Vec<Duration> = (0..51)
            .map(|_| {
                let start = Instant::now();
                let (code, _, _) = cli(&args);
                assert_eq!(code, 0);
                start.elapsed()
            })
            .collect();
        times.sort();
        let median = times[times.len() / 2];
        pass &= values.len() == 2 && err <= 1e-12 && median < Duration::from_millis(1);
        lines.push(format!("n_outside={n_outside} phi={values:?} err={err:e} median {median:?}"));
    }
    Outcome::new(pass, lines.join("; "))
}

fn criterion_2() -> Outcome {
    let mut lines = Vec::new();
    let mut pass = true;
    for (n_outside, winner) in [(1, 1), (2, 0)] {
        let g = gen_coordination(160.0, n_outside);
        let start = Instant::now();
        let trace = trace_branch(&g, default_lambda_max(&g), &BranchOptions::default()).unwrap();
        let elapsed = start.elapsed();
        let worst = trace
            .samples
            .iter()
            .map(|s| residual(&g, s.lambda, &s.profile.row, &s.profile.col))
            .fold(0.0, f64::max);
        let p_win = trace.terminal_profile().row[winner];
        let label = g.label(PlayerSide::Row, winner);
        pass &= p_win > 0.99 && worst <= 1e-10 && elapsed < Duration::from_secs(5);
        lines.push(format!(
            "n_outside={n_outside} p_row({label})={p_win:.6} at lambda={:.4} ({} samples, {:?}) max residual {worst:.1e} in {elapsed:?}",
            trace.terminal_lambda(),
            trace.samples.len(),
            trace.termination,
        ));
    }
    Outcome::new(pass, lines.join("; "))
}

fn criterion_3() -> Outcome {
    let mut pass = true;
    let mut lines = Vec::new();
    for n_outside in [1, 2] {
        let g = gen_coordination(160.0, n_outside);
        let trace = trace_branch(&g, default_lambda_max(&g), &BranchOptions::default()).unwrap();
        let first = &trace.samples[0];
        let (m, n) = (g.rows(), g.cols());
        let uniform = first.profile.row.iter().all(|&x| x == 1.0 / m as f64)
            && first.profile.col.iter().all(|&x| x == 1.0 / n as f64);
        let check = residual(&g, 0.0, &first.profile.row, &first.profile.col);
        pass &= first.lambda == 0.0 && uniform && first.residual == 0.0 && check == 0.0;
        lines.push(format!(
            "{m}x{n}: lambda={} row={:?} col={:?} residual={} recomputed={check}",
            first.lambda, first.profile.row, first.profile.col, first.residual
        ));
    }
    Outcome::new(pass, lines.join("; "))
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst: f64 = 0.0;
    let mut probes = 0;
    for _ in 0..100 {
        let (m, n) = (rng.random_range(1..=6), rng.random_range(1..=6));
        let g = random_game(&mut rng, m, n, |r| r.random_range(-100.0..100.0));
        let (mf, nf) = (m as f64, n as f64);
        for i in 0..m {
            for j in 0..n {
                let d = derivative_probe(&PhiAssessor, &g, i, j, 1e-6).unwrap();
                for (k, dk) in d.iter().enumerate() {
                    let want = if k == i { 1.0 / nf - 1.0 / (mf * nf) } else { -1.0 / (mf * nf) };
                    let rel = if want == 0.0 { dk.abs() } else { (dk - want).abs() / want.abs() };
                    worst = worst.max(rel);
                }
                probes += 1;
            }
        }
    }
    let d = derivative_probe(&PhiAssessor, &gen_coordination(60.0f64, 1), 0, 0, 1e-6).unwrap();
    let diag_rel = (d[0] - 1.0 / 6.0).abs() * 6.0;
    Outcome::new(
        worst <= 1e-6 && diag_rel <= 1e-6,
        format!("{probes} entry probes, worst relative error {worst:.1e}; 2x3 diagonal {} (relative error {diag_rel:.1e})", d[0]),
    )
}

fn criterion_5() -> Outcome {
    let ws = Workspace::new();
    let c60 = ws.gen("c60.json", &["coordination", "60", "1"]);
    let c160 = ws.gen("c160.json", &["coordination", "160", "1"]);
    let start = Instant::now();
    let phi = cli_json(&["framing", "frame", "--game", p(&c60), "--method", "phi", "--max-dups", "1"]);
    let qre = cli_json(&["framing", "frame", "--game", p(&c160), "--method", "qre-terminal", "--max-dups", "1"]);
    let nash: Vec<Value> = [&c60, &c160]
        .iter()
        .map(|g| cli_json(&["framing", "frame", "--game", p(g), "--method", "nash-argmax", "--max-dups", "1"]))
        .collect();
    let elapsed = start.elapsed();
    let lh = serde_json::json!(["L", "H"]);
    let flips = |v: &Value| v["order_flips"].as_array().unwrap().clone();
    let pass = flips(&phi).contains(&lh)
        && flips(&qre).contains(&lh)
        && nash.iter().all(|v| flips(v).is_empty() && v["pure_nash_consistent"] == true)
        && elapsed < Duration::from_secs(10);
    Outcome::new(
        pass,
        format!(
            "phi flips {} (max discrepancy {}), qre-terminal flips {}, nash-argmax flips {} / {}, {elapsed:?}",
            phi["order_flips"], phi["max_discrepancy"], qre["order_flips"], nash[0]["order_flips"], nash[1]["order_flips"]
        ),
    )
}

fn criterion_6() -> Outcome {
    let ws = Workspace::new();
    let mut pass = true;
    let mut lines = Vec::new();
    for (n_outside, outside_target) in [("1", 1.0 / 3.0), ("2", 0.5)] {
        let game = ws.gen(&format!("c{n_outside}.json"), &["coordination", "60", n_outside]);
        let phi = floats(&cli_json(&["framing", "assess", "--game", p(&game)])["values"]);
        let start = Instant::now();
        let summary = cli_json(&["framing", "moran", "--game", p(&game), "--seed", "1"]);
        let elapsed = start.elapsed();
        let est = estimate_from_summary(&summary).unwrap();
        let m = est.row_abundance.len() as f64;
        for i in 0..2 {
            let gap = est.row_abundance[i] - 1.0 / m;
            let separated = gap.abs() >= 3.0 * est.row_std_error[i];
            let agrees = gap.signum() == phi[i].signum();
            pass &= separated && agrees;
            lines.push(format!(
                "n_outside={n_outside} row {i}: abundance {:.4} (se {:.1e}) vs phi {} -> {}",
                est.row_abundance[i],
                est.row_std_error[i],
                phi[i],
                if separated && agrees { "agrees" } else if agrees { "unseparated" } else { "opposite sign" },
            ));
        }
        // The deviation of a sum is at most the sum of the deviations.
        let mass: f64 = est.col_abundance[2..].iter().sum();
        let se: f64 = est.col_std_error[2..].iter().sum();
        let within = (mass - outside_target).abs() <= 3.0 * se;
        pass &= within && elapsed < Duration::from_secs(60);
        lines.push(format!(
            "n_outside={n_outside} column outside mass {mass:.4} (se {se:.1e}) vs {outside_target:.4}, {elapsed:?}"
        ));
    }
    Outcome::new(pass, lines.join("; "))
}

fn criterion_7() -> Outcome {
    let ws = Workspace::new();
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for n_outside in ["1", "2"] {
        let game = ws.gen(&format!("c{n_outside}.json"), &["coordination", "60", n_outside]);
        let summary = cli_json(&["framing", "moran", "--game", p(&game), "--delta", "0", "--seed", "0"]);
        let est = estimate_from_summary(&summary).unwrap();
        for (ab, se) in [(&est.row_abundance, &est.row_std_error), (&est.col_abundance, &est.col_std_error)] {
            let k = ab.len() as f64;
            for (x, s) in ab.iter().zip(se) {
                worst = worst.max((x - 1.0 / k).abs() / s);
                count += 1;
            }
        }
    }
    Outcome::new(worst <= 3.0, format!("{count} strategies, largest deviation {worst:.2} standard errors"))
}

fn column_set(g: &Game<f64>) -> Vec<Vec<(u64, u64)>> {
    let mut cols: Vec<Vec<(u64, u64)>> =
        (0..g.cols()).map(|j| g.column(j).into_iter().map(|(a, b)| (a.to_bits(), b.to_bits())).collect()).collect();
    cols.sort();
    cols
}

fn permute(g: &Game<f64>, perm: &[usize]) -> Game<f64> {
    let (m, n) = (g.rows(), g.cols());
    let a = (0..m).flat_map(|i| perm.iter().map(move |&j| (i, j))).map(|(i, j)| g.a(i, j)).collect();
    let b = (0..m).flat_map(|i| perm.iter().map(move |&j| (i, j))).map(|(i, j)| g.b(i, j)).collect();
    Game::from_flat(m, n, a, b).unwrap()
}

fn scramble(g: &Game<f64>, rng: &mut ChaCha8Rng) -> Game<f64> {
    let j = rng.random_range(0..g.cols());
    let d = duplicate_column(g, j, rng.random_range(1..=3)).unwrap();
    let mut perm: Vec<usize> = (0..d.cols()).collect();
    perm.shuffle(rng);
    permute(&d, &perm)
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let start = Instant::now();
    let mut failures = Vec::new();
    for case in 0..1000 {
        let (m, n) = (rng.random_range(1..=4), rng.random_range(1..=5));
        let g = random_game(&mut rng, m, n, |r| f64::from(r.random_range(-2i32..=2)));
        let h1 = scramble(&g, &mut rng);
        let h2 = scramble(&h1, &mut rng);
        let j = rng.random_range(0..n);
        let dup = duplicate_column(&g, j, rng.random_range(1..=3)).unwrap();
        let eq = |x: &Game<f64>, y: &Game<f64>| equivalent(x, y).unwrap();
        let checks = [
            ("idempotent", reduce(&reduce(&h1)) == reduce(&h1)),
            ("reflexive", eq(&g, &g) && eq(&h1, &h1)),
            ("symmetric", eq(&g, &h1) && eq(&h1, &g)),
            ("transitive", eq(&h1, &h2) && eq(&g, &h2)),
            ("reduce-duplicate", column_set(&reduce(&dup)) == column_set(&reduce(&g))),
        ];
        for (name, ok) in checks {
            if !ok {
                failures.push(format!("case {case}: {name}"));
            }
        }
    }
    let elapsed = start.elapsed();
    Outcome::new(
        failures.is_empty() && elapsed < Duration::from_secs(5),
        format!("1000 games, {} failed checks {:?}, {elapsed:?}", failures.len(), failures.iter().take(3).collect::<Vec<_>>()),
    )
}

fn criterion_9() -> Outcome {
    let ws = Workspace::new();
    let game = ws.gen("c1.json", &["coordination", "60", "1"]);
    let bin = env!("CARGO_BIN_EXE_framing");
    let mut outputs = Vec::new();
    for k in 0..2 {
        let (json, csv) = (ws.path(&format!("run{k}.json")), ws.path(&format!("run{k}.csv")));
        let out = std::process::Command::new(bin)
            .args(["moran", "--game", p(&game), "--seed", "9", "--out", p(&json), "--trajectory", p(&csv)])
            .output()
            .expect("run framing");
        let stdout = std::process::Command::new(bin)
            .args(["moran", "--game", p(&game), "--seed", "9", "--steps", "1000000"])
            .output()
            .expect("run framing");
        outputs.push((
            out.status.code(),
            std::fs::read(&json).unwrap_or_default(),
            std::fs::read(&csv).unwrap_or_default(),
            stdout.stdout,
        ));
    }
    let (a, b) = (&outputs[0], &outputs[1]);
    let pass = a.0 == Some(0) && !a.1.is_empty() && !a.2.is_empty() && a == b;
    Outcome::new(
        pass,
        format!("summary {} bytes, trajectory {} bytes, stdout {} bytes; identical: {}", a.1.len(), a.2.len(), a.3.len(), a == b),
    )
}

fn criterion_10() -> Outcome {
    let ws = Workspace::new();
    let base_path = ws.gen("c2.json", &["coordination", "60", "2"]);
    let base = floats(&cli_json(&["framing", "assess", "--game", p(&base_path)])["values"]);
    // phi_L = mean of row L minus the grand mean; one entry of row L moves
    // row L's mean by eps/n and the grand mean by eps/(mn).
    let g = gen_coordination(60.0, 2);
    let slope = 1.0 / g.cols() as f64 - 1.0 / (g.rows() * g.cols()) as f64;
    let mut pass = true;
    let mut lines = Vec::new();
    for eps in ["1", "0.1", "0.01"] {
        let path = ws.gen(&format!("eps{eps}.json"), &["coordination-eps", "60", eps]);
        let phi = floats(&cli_json(&["framing", "assess", "--game", p(&path)])["values"]);
        let e: f64 = eps.parse().unwrap();
        let measured = (phi[0] - base[0]) / e;
        pass &= (measured - slope).abs() <= 1e-9 && (phi[0] + phi[1]).abs() <= 1e-12;
        lines.push(format!("eps={eps}: phi_L={} slope {measured}", phi[0]));
    }
    Outcome::new(pass, format!("base phi_L={}, expected slope {slope}; {}", base[0], lines.join("; ")))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("phi exactness", criterion_1),
        ("branch flip", criterion_2),
        ("centroid anchor", criterion_3),
        ("gradient oracle", criterion_4),
        ("framing witness", criterion_5),
        ("Moran agrees with phi", criterion_6),
        ("neutral baseline", criterion_7),
        ("equivalence algebra", criterion_8),
        ("determinism", criterion_9),
        ("eps-continuity", criterion_10),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(check))
            .unwrap_or_else(|e| {
                let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
                Outcome::new(false, format!("panicked: {}", msg.unwrap_or_default()))
            });
        if !outcome.pass {
            failed += 1;
        }
        println!("criterion {} ({name}): {} - {}", k + 1, if outcome.pass { "PASS" } else { "FAIL" }, outcome.detail);
    }
    println!("\nacceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
