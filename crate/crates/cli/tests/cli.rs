//! End-to-end tests running the real binary against temp files.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_gsv-interp"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn assert_code(out: &Output, code: i32) {
    assert_eq!(
        out.status.code(),
        Some(code),
        "stdout: {}\nstderr: {}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
}

fn write_pgm(path: &Path, w: usize, h: usize, f: impl Fn(usize, usize) -> u8) {
    let mut bytes = format!("P5\n{w} {h}\n255\n").into_bytes();
    for r in 0..h {
        for c in 0..w {
            bytes.push(f(r, c));
        }
    }
    fs::write(path, bytes).unwrap();
}

/// Minimal reader for the exact header layout our writer produces.
fn read_pgm(path: &Path) -> (usize, usize, Vec<u8>) {
    let bytes = fs::read(path).unwrap();
    let header_end = bytes
        .windows(4)
        .position(|w| w == b"255\n")
        .expect("maxval line")
        + 4;
    let header = std::str::from_utf8(&bytes[..header_end]).unwrap();
    let mut tokens = header.split_ascii_whitespace();
    assert_eq!(tokens.next(), Some("P5"));
    let w: usize = tokens.next().unwrap().parse().unwrap();
    let h: usize = tokens.next().unwrap().parse().unwrap();
    (w, h, bytes[header_end..].to_vec())
}

fn ramp_pgm(path: &Path, n: usize) {
    write_pgm(path, n, n, |r, c| {
        (10 + (r * 3 + c * 5) * 200 / (8 * n)) as u8
    });
}

struct Workspace {
    _dir: TempDir,
    root: PathBuf,
}

impl Workspace {
    fn new() -> Self {
        let dir = tempfile::tempdir().unwrap();
        let root = dir.path().to_path_buf();
        Workspace { _dir: dir, root }
    }

    fn path(&self, name: &str) -> PathBuf {
        self.root.join(name)
    }

    fn arg(&self, name: &str) -> String {
        self.path(name).display().to_string()
    }
}

#[test]
fn mask_zeroes_exactly_half_and_writes_sidecar() {
    let ws = Workspace::new();
    write_pgm(&ws.path("in.pgm"), 64, 64, |_, _| 200);
    let out = run(&["mask", &ws.arg("in.pgm"), &ws.arg("masked.pgm")]);
    assert_code(&out, 0);

    let (w, h, px) = read_pgm(&ws.path("masked.pgm"));
    assert_eq!((w, h), (64, 64));
    assert_eq!(px.iter().filter(|&&v| v == 0).count(), 2048);
    for r in 0..64 {
        for c in 0..64 {
            let want = if (r + c) % 2 == 0 { 200 } else { 0 };
            assert_eq!(px[r * 64 + c], want, "pixel ({r},{c})");
        }
    }
    assert!(ws.path("masked.mask.pgm").exists());
}

#[test]
fn masking_is_idempotent() {
    let ws = Workspace::new();
    ramp_pgm(&ws.path("in.pgm"), 16);
    assert_code(&run(&["mask", &ws.arg("in.pgm"), &ws.arg("m1.pgm")]), 0);
    assert_code(&run(&["mask", &ws.arg("m1.pgm"), &ws.arg("m2.pgm")]), 0);
    assert_eq!(
        fs::read(ws.path("m1.pgm")).unwrap(),
        fs::read(ws.path("m2.pgm")).unwrap()
    );
}

#[test]
fn mask_rejects_non_pgm_input() {
    let ws = Workspace::new();
    fs::write(ws.path("junk.txt"), b"this is not an image").unwrap();
    let out = run(&["mask", &ws.arg("junk.txt"), &ws.arg("out.pgm")]);
    assert_code(&out, 2);
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("error"), "stderr: {stderr}");
}

#[test]
fn missing_input_file_exits_2() {
    let ws = Workspace::new();
    let out = run(&["mask", &ws.arg("nope.pgm"), &ws.arg("out.pgm")]);
    assert_code(&out, 2);
}

#[test]
fn zero_gain_modes_produce_identical_output() {
    let ws = Workspace::new();
    ramp_pgm(&ws.path("truth.pgm"), 32);
    assert_code(&run(&["mask", &ws.arg("truth.pgm"), &ws.arg("masked.pgm")]), 0);
    for mode in ["baseline", "perturbed", "dr"] {
        let out = run(&[
            "interpolate",
            &ws.arg("masked.pgm"),
            &ws.arg(&format!("out-{mode}.pgm")),
            "--mode",
            mode,
        ]);
        assert_code(&out, 0);
    }
    let baseline = fs::read(ws.path("out-baseline.pgm")).unwrap();
    assert_eq!(baseline, fs::read(ws.path("out-perturbed.pgm")).unwrap());
    assert_eq!(baseline, fs::read(ws.path("out-dr.pgm")).unwrap());
}

#[test]
fn observed_pixels_pass_through_every_mode() {
    let ws = Workspace::new();
    ramp_pgm(&ws.path("truth.pgm"), 16);
    assert_code(&run(&["mask", &ws.arg("truth.pgm"), &ws.arg("masked.pgm")]), 0);
    let (_, _, masked) = read_pgm(&ws.path("masked.pgm"));
    for mode in ["baseline", "perturbed", "dr"] {
        let out_path = ws.arg(&format!("o-{mode}.pgm"));
        assert_code(
            &run(&["interpolate", &ws.arg("masked.pgm"), &out_path, "--mode", mode]),
            0,
        );
        let (_, _, px) = read_pgm(Path::new(&out_path));
        for r in 0..16 {
            for c in 0..16 {
                if (r + c) % 2 == 0 {
                    assert_eq!(px[r * 16 + c], masked[r * 16 + c], "({r},{c}) in {mode}");
                }
            }
        }
    }
}

#[test]
fn interpolate_reports_quality_and_json() {
    let ws = Workspace::new();
    ramp_pgm(&ws.path("truth.pgm"), 32);
    assert_code(&run(&["mask", &ws.arg("truth.pgm"), &ws.arg("masked.pgm")]), 0);
    let out = run(&[
        "interpolate",
        &ws.arg("masked.pgm"),
        &ws.arg("out.pgm"),
        "--mode",
        "dr",
        "--truth",
        &ws.arg("truth.pgm"),
    ]);
    assert_code(&out, 0);
    let stdout = String::from_utf8_lossy(&out.stdout);
    let quality = stdout.lines().next().unwrap();
    assert!(quality.starts_with("PSNR | SSIM:"), "line: {quality}");

    let json_start = stdout.find('{').unwrap();
    let doc: serde_json::Value = serde_json::from_str(&stdout[json_start..]).unwrap();
    assert_eq!(doc["mode"], "dr");
    assert_eq!(doc["width"], 32);
    assert!(doc["psnr"].as_f64().unwrap() > 20.0);
    assert!(doc["ssim"].as_f64().unwrap() > 0.5);
    assert!(doc["elapsed_ms"].as_f64().is_some());
}

#[test]
fn interpolate_rejects_unknown_mode() {
    let ws = Workspace::new();
    ramp_pgm(&ws.path("truth.pgm"), 16);
    assert_code(&run(&["mask", &ws.arg("truth.pgm"), &ws.arg("masked.pgm")]), 0);
    let out = run(&[
        "interpolate",
        &ws.arg("masked.pgm"),
        &ws.arg("out.pgm"),
        "--mode",
        "bicubic",
    ]);
    assert_code(&out, 2);
}

#[test]
fn interpolate_accepts_model_file_and_thread_count() {
    let ws = Workspace::new();
    ramp_pgm(&ws.path("truth.pgm"), 32);
    assert_code(&run(&["mask", &ws.arg("truth.pgm"), &ws.arg("masked.pgm")]), 0);
    assert_code(&run(&["init-model", &ws.arg("model.json")]), 0);
    let out = run(&[
        "interpolate",
        &ws.arg("masked.pgm"),
        &ws.arg("out.pgm"),
        "--model",
        &ws.arg("model.json"),
        "--mode",
        "dr",
        "--threads",
        "2",
    ]);
    assert_code(&out, 0);
}

#[test]
fn tune_rejects_empty_train_dir() {
    let ws = Workspace::new();
    fs::create_dir(ws.path("train")).unwrap();
    fs::create_dir(ws.path("val")).unwrap();
    write_pgm(&ws.path("val/v.pgm"), 16, 16, |_, _| 128);
    let out = run(&[
        "tune",
        &ws.arg("train"),
        &ws.arg("val"),
        &ws.arg("tuned.json"),
    ]);
    assert_code(&out, 2);
}

#[test]
fn tune_writes_model_history_and_summary() {
    let ws = Workspace::new();
    fs::create_dir(ws.path("train")).unwrap();
    fs::create_dir(ws.path("val")).unwrap();
    // Deterministic pseudo-noise around mid-gray.
    let noise = |salt: usize| {
        move |r: usize, c: usize| (118 + (r * 31 + c * 17 + salt * 13) % 21) as u8
    };
    write_pgm(&ws.path("train/a.pgm"), 16, 16, noise(1));
    write_pgm(&ws.path("train/b.pgm"), 16, 16, noise(2));
    write_pgm(&ws.path("val/v.pgm"), 16, 16, noise(3));

    let out = run(&[
        "tune",
        &ws.arg("train"),
        &ws.arg("val"),
        &ws.arg("tuned.json"),
        "--patch-size",
        "16",
        "--max-epochs",
        "2",
        "--patience",
        "1",
    ]);
    assert_code(&out, 0);

    let summary: serde_json::Value =
        serde_json::from_slice(&out.stdout).expect("summary is JSON");
    let epochs = summary["epochs_run"].as_u64().unwrap();
    assert!(epochs >= 1);
    assert!(
        summary["best_val_mse"].as_f64().unwrap()
            <= summary["start_val_mse"].as_f64().unwrap()
    );

    let model: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(ws.path("tuned.json")).unwrap()).unwrap();
    assert_eq!(model["version"], 1);

    let history = fs::read_to_string(ws.path("tuned.history.csv")).unwrap();
    let lines: Vec<&str> = history.lines().collect();
    assert_eq!(lines[0], "epoch,train_mse,val_mse");
    // Header, epoch-0 row, one row per epoch run.
    assert_eq!(lines.len(), 2 + epochs as usize);
}

#[test]
fn verify_passes_on_fresh_build() {
    let out = run(&["verify"]);
    assert_code(&out, 0);
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("all 6 checks passed"), "stdout: {stdout}");
    assert!(!stdout.contains("FAIL"));
}

#[test]
fn metrics_prints_quality_line() {
    let ws = Workspace::new();
    ramp_pgm(&ws.path("a.pgm"), 16);
    ramp_pgm(&ws.path("b.pgm"), 16);
    let out = run(&["metrics", &ws.arg("a.pgm"), &ws.arg("b.pgm")]);
    assert_code(&out, 0);
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.starts_with("PSNR | SSIM:"), "stdout: {stdout}");
}

#[test]
fn metrics_rejects_mismatched_sizes() {
    let ws = Workspace::new();
    ramp_pgm(&ws.path("a.pgm"), 16);
    ramp_pgm(&ws.path("b.pgm"), 32);
    assert_code(&run(&["metrics", &ws.arg("a.pgm"), &ws.arg("b.pgm")]), 2);
}

#[test]
fn bench_emits_one_row_per_size_with_stable_counts() {
    let first = run(&["bench", "8", "16", "32", "--seed", "7"]);
    assert_code(&first, 0);
    let second = run(&["bench", "8", "16", "32", "--seed", "7"]);
    assert_code(&second, 0);

    let parse = |out: &Output| -> Vec<Vec<String>> {
        String::from_utf8_lossy(&out.stdout)
            .lines()
            .skip(1)
            .map(|l| l.split(',').map(str::to_string).collect())
            .collect()
    };
    let a = parse(&first);
    let b = parse(&second);
    assert_eq!(a.len(), 3);
    assert_eq!(b.len(), 3);
    for (ra, rb) in a.iter().zip(&b) {
        // size and the three iteration-count columns are deterministic;
        // the timing columns (2 and 5) are not.
        for col in [0, 1, 3, 4] {
            assert_eq!(ra[col], rb[col]);
        }
    }
}

#[test]
fn bench_rejects_odd_size() {
    assert_code(&run(&["bench", "7"]), 2);
}

#[test]
fn init_model_output_feeds_back_in() {
    let ws = Workspace::new();
    assert_code(&run(&["init-model", &ws.arg("m.json")]), 0);
    let text = fs::read_to_string(ws.path("m.json")).unwrap();
    let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(doc["version"], 1);
    assert_eq!(doc["perturbation_gain"], 0.0);
    assert_eq!(doc["smoothing_gain"], 0.0);
}
