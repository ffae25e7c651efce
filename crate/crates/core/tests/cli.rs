use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const BIN: &str = env!("CARGO_BIN_EXE_casimir-media");

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn write_config(dir: &TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_owned()
}

/// Parse a CSV file into its header and numeric columns (text cells become NaN).
fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<f64>>) {
    let text = std::fs::read_to_string(path).unwrap();
    assert!(!text.contains('\r'));
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header = r.headers().unwrap().iter().map(str::to_owned).collect();
    let rows = r
        .records()
        .map(|rec| {
            rec.unwrap()
                .iter()
                .map(|c| c.parse().unwrap_or(f64::NAN))
                .collect()
        })
        .collect();
    (header, rows)
}

fn cfg(name: &str) -> String {
    configs().join(name).to_str().unwrap().to_owned()
}

#[test]
fn reference_c6_csv_round_trip() {
    let dir = TempDir::new().unwrap();
    let csv = dir.path().join("c6.csv");
    let out = run(&[
        "--config",
        &cfg("reference.toml"),
        "--output",
        csv.to_str().unwrap(),
        "c6",
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let (header, rows) = read_csv(&csv);
    let total = header.iter().position(|h| h == "C6[J*m^6]").unwrap();
    assert!(header.iter().all(|h| h == "choice" || h.contains('[')));
    assert_eq!(rows.len(), 2);
    let (a, m) = (rows[0][total], rows[1][total]);
    assert!(((a - m) / a).abs() < 1e-12);
    assert!(((a + 5.708037e-74) / 5.708037e-74).abs() < 1e-6, "{a}");
    // The printed table carries the same values bit for bit.
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains(&format!("{a:e}")));
}

#[test]
fn zero_excess_sphere_gives_exact_zero() {
    let dir = TempDir::new().unwrap();
    let osc = r#"{ kind = "oscillators", oscillators = [{ plasma = 7e15, resonance = 1.2e16 }] }"#;
    let text = format!(
        "separation = 1e-8\n[medium]\nepsilon = {osc}\n[sphere1]\nradius = 1e-9\n\
         epsilon = {{ kind = \"oscillators\", oscillators = [{{ plasma = 2e16, resonance = 1e16 }}] }}\n\
         [sphere2]\nradius = 1e-9\nepsilon = {osc}\n"
    );
    let path = write_config(&dir, "null.toml", &text);
    let csv = dir.path().join("out.csv");
    let out = run(&["--config", &path, "--output", csv.to_str().unwrap(), "c6"]);
    assert_eq!(code(&out), 0);
    let (header, rows) = read_csv(&csv);
    let total = header.iter().position(|h| h == "C6[J*m^6]").unwrap();
    for row in rows {
        assert_eq!(row[total].to_bits(), 0);
    }
    let out = run(&[
        "--config",
        &path,
        "--output",
        csv.to_str().unwrap(),
        "c3",
        "--sphere",
        "2",
    ]);
    assert_eq!(code(&out), 0);
    let (header, rows) = read_csv(&csv);
    let total = header.iter().position(|h| h == "C3[J*m^3]").unwrap();
    assert!(rows.iter().all(|r| r[total].to_bits() == 0));
}

#[test]
fn constant_medium_c3_integrand_ratio() {
    let dir = TempDir::new().unwrap();
    let path = write_config(
        &dir,
        "const.toml",
        "[medium]\nepsilon = { kind = \"constant\", value = 2.0 }\n\
         [sphere1]\nradius = 1e-9\nepsilon = { kind = \"constant\", value = 5.0 }\n\
         [sphere2]\nradius = 1e-9\n",
    );
    let csv = dir.path().join("out.csv");
    let out = run(&[
        "--config",
        &path,
        "--output",
        csv.to_str().unwrap(),
        "c3",
        "--xi",
        "1e16",
    ]);
    assert_eq!(code(&out), 0);
    let (header, rows) = read_csv(&csv);
    let total = header
        .iter()
        .position(|h| h.starts_with("dC3_total"))
        .unwrap();
    assert!((rows[1][total] / rows[0][total] - 0.5).abs() < 1e-15);

    // Integrating needs a decaying medium response.
    let out = run(&["--config", &path, "c3"]);
    assert_eq!(code(&out), 3, "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    assert_eq!(code(&run(&["c6"])), 2);
    assert_eq!(code(&run(&["--config", "/nonexistent/x.toml", "c6"])), 2);
    let bad = write_config(&dir, "bad.toml", "[sphere1]\nradius = \"one\"\n");
    assert_eq!(code(&run(&["--config", &bad, "c6"])), 2);
    let overlap = write_config(
        &dir,
        "overlap.toml",
        "separation = 1e-9\n[sphere1]\nradius = 1e-9\n[sphere2]\nradius = 1e-9\n",
    );
    assert_eq!(code(&run(&["--config", &overlap, "c6"])), 2);
    let md = cfg("magnetodielectric.toml");
    assert_eq!(code(&run(&["--config", &md, "--tolerance", "0", "c6"])), 2);
    let strict = run(&["--config", &md, "--tolerance", "1e-300", "c6"]);
    assert_eq!(
        code(&strict),
        3,
        "{}",
        String::from_utf8_lossy(&strict.stderr)
    );
    assert_eq!(
        code(&run(&[
            "--config",
            &cfg("magnetodielectric.toml"),
            "verify",
            "duality"
        ])),
        0
    );
    assert_eq!(
        code(&run(&[
            "--config",
            &cfg("molecular.toml"),
            "verify",
            "correspondence"
        ])),
        0
    );
    assert_eq!(
        code(&run(&[
            "--config",
            &cfg("reference.toml"),
            "verify",
            "correspondence"
        ])),
        2
    );
    assert_eq!(
        code(&run(&[
            "--config",
            &cfg("reference.toml"),
            "verify",
            "microscopic"
        ])),
        0
    );
    assert_eq!(code(&run(&["oracle", "quadrature"])), 0);
}

#[test]
fn duality_report_shows_maxwell_breaking() {
    let out = run(&[
        "--config",
        &cfg("magnetodielectric.toml"),
        "verify",
        "duality",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    let maxwell = text
        .lines()
        .find(|l| l.trim_start().starts_with("Maxwell"))
        .unwrap();
    assert!(maxwell.ends_with("false"));
    assert!(text.contains("PASS"));
}

#[test]
fn small_separation_warns() {
    let out = run(&[
        "--config",
        &cfg("reference.toml"),
        "c6",
        "--separation",
        "3e-9",
    ]);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));
    let out = run(&["--config", &cfg("reference.toml"), "c6"]);
    assert!(out.stderr.is_empty());
}

fn sweep(variable: &str, from: &str, to: &str, config: &str) -> (Vec<String>, Vec<Vec<f64>>) {
    let dir = TempDir::new().unwrap();
    let csv = dir.path().join("sweep.csv");
    let out = run(&[
        "--config",
        config,
        "--output",
        csv.to_str().unwrap(),
        "sweep",
        "--variable",
        variable,
        "--from",
        from,
        "--to",
        to,
        "--steps",
        "5",
        "--log",
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    read_csv(&csv)
}

#[test]
fn separation_sweep_follows_power_laws() {
    let (header, rows) = sweep("separation", "1e-8", "1e-6", &cfg("magnetodielectric.toml"));
    assert_eq!(
        header,
        [
            "r12[m]",
            "C6_Abraham[J*m^6]",
            "C6_Maxwell[J*m^6]",
            "U_Abraham[J]",
            "U_Maxwell[J]",
            "F_Abraham[N]",
            "F_Maxwell[N]"
        ]
    );
    for row in &rows {
        let r = row[0];
        for (c, u, f) in [(1, 3, 5), (2, 4, 6)] {
            assert_eq!(row[c], rows[0][c]);
            assert!((row[u] * r.powi(6) / row[c] - 1.0).abs() < 1e-14);
            assert!((row[f] * r.powi(7) / (6.0 * row[c]) - 1.0).abs() < 1e-14);
        }
    }
}

#[test]
fn radius_sweep_scales_as_sixth_power() {
    let (_, rows) = sweep("radius", "1e-10", "1e-9", &cfg("reference.toml"));
    for row in &rows {
        for c in [1, 2] {
            let scaled = row[c] / row[0].powi(6);
            let first = rows[0][c] / rows[0][0].powi(6);
            assert!((scaled / first - 1.0).abs() < 1e-12);
        }
    }
}

#[test]
fn density_sweep_approaches_vacuum() {
    let (_, rows) = sweep("density", "1e-6", "1", &cfg("magnetodielectric.toml"));
    let gap = |row: &Vec<f64>| ((row[1] - row[2]) / row[1]).abs();
    assert!(gap(&rows[0]) < 1e-5, "{}", gap(&rows[0]));
    assert!(gap(&rows[4]) > 1e-2);
    assert!(rows.windows(2).all(|w| gap(&w[0]) < gap(&w[1])));
}

#[test]
fn sweep_without_output_prints_csv() {
    let out = run(&[
        "--config",
        &cfg("reference.toml"),
        "sweep",
        "--variable",
        "separation",
        "--from",
        "1e-8",
        "--to",
        "2e-8",
        "--steps",
        "2",
    ]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("r12[m],C6_Abraham[J*m^6]"));
    assert_eq!(text.lines().count(), 3);
}

#[test]
fn monte_carlo_oracle_is_deterministic() {
    let args = [
        "--seed",
        "17",
        "oracle",
        "axilrod-teller",
        "--samples",
        "200000",
    ];
    let a = run(&args);
    let b = run(&args);
    assert!(matches!(code(&a), 0 | 4));
    assert_eq!(a.stdout, b.stdout);
    let c = run(&[
        "--seed",
        "18",
        "oracle",
        "axilrod-teller",
        "--samples",
        "200000",
    ]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn hamaker_oracle_reports_both_targets() {
    let out = run(&["oracle", "hamaker", "--divisions", "10"]);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("G/point_limit") && text.contains("G/continuum"));
    // The finite spheres sit well above the point limit at ten radii.
    assert_eq!(code(&out), 4);
}
