use std::path::{Path, PathBuf};
use std::process::Command;
use std::sync::OnceLock;

use chaoscrypt::cli::{run, EXIT_DOMAIN, EXIT_IO, EXIT_OK, EXIT_USAGE};
use chaoscrypt::netpbm;
use chaoscrypt::scene::natural_scene;
use tempfile::TempDir;

fn s(p: &Path) -> String {
    p.to_str().unwrap().to_owned()
}

fn cli(args: &[&str]) -> i32 {
    run(std::iter::once("chaoscrypt").chain(args.iter().copied()))
}

struct Fixture {
    _dir: TempDir,
    root: PathBuf,
}

impl Fixture {
    fn path(&self, name: &str) -> String {
        s(&self.root.join(name))
    }
}

/// A key and a quickly trained model shared by the tests below.
fn fixture() -> &'static Fixture {
    static F: OnceLock<Fixture> = OnceLock::new();
    F.get_or_init(|| {
        let dir = tempfile::tempdir().unwrap();
        let root = dir.path().to_path_buf();
        let f = Fixture { _dir: dir, root };
        assert_eq!(
            cli(&["keygen", "--out", &f.path("k.key"), "--seed", "7"]),
            EXIT_OK
        );
        let code = cli(&[
            "train-model",
            "--a",
            "1.804",
            "--x0",
            "0.3",
            "--out",
            &f.path("m.tdlm"),
            "--hidden",
            "6",
            "--window",
            "8",
            "--epochs",
            "1",
        ]);
        assert_eq!(code, EXIT_OK);
        f
    })
}

fn scratch() -> TempDir {
    tempfile::tempdir().unwrap()
}

#[test]
fn keygen_is_seeded() {
    let d = scratch();
    let (a, b, c) = (d.path().join("a"), d.path().join("b"), d.path().join("c"));
    assert_eq!(cli(&["keygen", "--out", &s(&a), "--seed", "11"]), EXIT_OK);
    assert_eq!(cli(&["keygen", "--out", &s(&b), "--seed", "11"]), EXIT_OK);
    assert_eq!(cli(&["keygen", "--out", &s(&c), "--seed", "12"]), EXIT_OK);
    let text = std::fs::read_to_string(&a).unwrap();
    assert_eq!(text, std::fs::read_to_string(&b).unwrap());
    assert_ne!(text, std::fs::read_to_string(&c).unwrap());
    text.parse::<chaoscrypt::KeySet>().unwrap();
}

#[test]
fn encrypt_decrypt_512_pgm() {
    let f = fixture();
    let d = scratch();
    let plain = d.path().join("p.pgm");
    let img = natural_scene(512, 512, 1, 1);
    std::fs::write(&plain, netpbm::encode(&img)).unwrap();
    let (enc, dec, report) = (
        d.path().join("c.pgm"),
        d.path().join("d.pgm"),
        d.path().join("r.csv"),
    );
    let common = ["--key", &f.path("k.key"), "--model", &f.path("m.tdlm")];
    let code = cli(&[
        &["encrypt"][..],
        &common,
        &["--in", &s(&plain), "--out", &s(&enc)],
    ]
    .concat());
    assert_eq!(code, EXIT_OK);
    let code = cli(&[
        &["decrypt"][..],
        &common,
        &["--in", &s(&enc), "--out", &s(&dec)],
    ]
    .concat());
    assert_eq!(code, EXIT_OK);
    assert_eq!(std::fs::read(&dec).unwrap(), std::fs::read(&plain).unwrap());

    assert_eq!(
        cli(&[
            "analyze",
            "--in",
            &s(&enc),
            "--ref",
            &s(&plain),
            "--out",
            &s(&report)
        ]),
        EXIT_OK
    );
    let csv = std::fs::read_to_string(&report).unwrap();
    let entropy: f64 = csv
        .lines()
        .find_map(|l| l.strip_prefix("entropy,"))
        .and_then(|rest| rest.split(',').next())
        .unwrap()
        .parse()
        .unwrap();
    assert!(entropy >= 7.997, "{csv}");
    assert!(csv.starts_with("metric,value,status\nnpcr,"));
}

#[test]
fn batch_of_three() {
    let f = fixture();
    let d = scratch();
    let names = ["a", "b", "c"];
    let plain: Vec<String> = names
        .iter()
        .enumerate()
        .map(|(i, n)| {
            let p = d.path().join(format!("{n}.pgm"));
            std::fs::write(&p, netpbm::encode(&natural_scene(24, 40, 1, i as u64))).unwrap();
            s(&p)
        })
        .collect();
    let enc: Vec<String> = names
        .iter()
        .map(|n| s(&d.path().join(format!("{n}.enc.pgm"))))
        .collect();
    let dec: Vec<String> = names
        .iter()
        .map(|n| s(&d.path().join(format!("{n}.dec.pgm"))))
        .collect();
    let base = ["--key", &f.path("k.key"), "--model", &f.path("m.tdlm")];

    let args = [
        &["encrypt"][..],
        &base,
        &["--batch"],
        &to_refs(&plain),
        &["--out"],
        &to_refs(&enc),
    ]
    .concat();
    assert_eq!(cli(&args), EXIT_OK);
    let args = [
        &["decrypt"][..],
        &base,
        &["--batch"],
        &to_refs(&enc),
        &["--out"],
        &to_refs(&dec),
    ]
    .concat();
    assert_eq!(cli(&args), EXIT_OK);
    for (p, q) in plain.iter().zip(&dec) {
        assert_eq!(std::fs::read(p).unwrap(), std::fs::read(q).unwrap());
    }
    let args = [
        &["encrypt"][..],
        &base,
        &["--batch"],
        &to_refs(&plain),
        &["--out"],
        &to_refs(&enc[..2]),
    ]
    .concat();
    assert_eq!(cli(&args), EXIT_USAGE);
}

fn to_refs(v: &[String]) -> Vec<&str> {
    v.iter().map(String::as_str).collect()
}

#[test]
fn missing_key_file_is_an_io_error_and_writes_nothing() {
    let f = fixture();
    let d = scratch();
    let plain = d.path().join("p.ppm");
    std::fs::write(&plain, netpbm::encode(&natural_scene(8, 8, 3, 0))).unwrap();
    let out = d.path().join("c.ppm");
    let code = cli(&[
        "encrypt",
        "--key",
        &s(&d.path().join("nope.key")),
        "--model",
        &f.path("m.tdlm"),
        "--in",
        &s(&plain),
        "--out",
        &s(&out),
    ]);
    assert_eq!(code, EXIT_IO);
    assert!(!out.exists());
    assert_eq!(std::fs::read_dir(d.path()).unwrap().count(), 1);
}

#[test]
fn corrupt_model_is_an_io_error() {
    let f = fixture();
    let d = scratch();
    let model = d.path().join("bad.tdlm");
    let mut bytes = std::fs::read(f.path("m.tdlm")).unwrap();
    bytes.truncate(bytes.len() / 2);
    std::fs::write(&model, bytes).unwrap();
    let plain = d.path().join("p.pgm");
    std::fs::write(&plain, netpbm::encode(&natural_scene(8, 8, 1, 0))).unwrap();
    let code = cli(&[
        "encrypt",
        "--key",
        &f.path("k.key"),
        "--model",
        &s(&model),
        "--in",
        &s(&plain),
        "--out",
        &s(&d.path().join("c.pgm")),
    ]);
    assert_eq!(code, EXIT_IO);
}

#[test]
fn usage_errors() {
    assert_eq!(cli(&[]), EXIT_USAGE);
    assert_eq!(cli(&["frobnicate"]), EXIT_USAGE);
    assert_eq!(cli(&["keygen"]), EXIT_USAGE);
    assert_eq!(
        cli(&[
            "map-sweep",
            "--map",
            "tent",
            "--lo",
            "1",
            "--hi",
            "2",
            "--steps",
            "3",
            "--x0",
            "0.1",
            "--out",
            "x"
        ]),
        EXIT_USAGE
    );
    let f = fixture();
    let d = scratch();
    let plain = d.path().join("p.pgm");
    std::fs::write(&plain, netpbm::encode(&natural_scene(4, 4, 1, 0))).unwrap();
    let code = cli(&[
        "encrypt",
        "--key",
        &f.path("k.key"),
        "--model",
        &f.path("m.tdlm"),
        "--in",
        &s(&plain),
        "--out",
        &s(&d.path().join("c.pgm")),
        "--rounds",
        "0",
    ]);
    assert_eq!(code, EXIT_USAGE);
    assert_eq!(cli(&["--help"]), EXIT_OK);
}

#[test]
fn degenerate_orbit_is_a_domain_error() {
    let d = scratch();
    let out = d.path().join("m.tdlm");
    let code = cli(&[
        "train-model",
        "--a",
        "2",
        "--x0",
        "0",
        "--out",
        &s(&out),
        "--epochs",
        "1",
        "--hidden",
        "2",
    ]);
    assert_eq!(code, EXIT_DOMAIN);
    assert!(!out.exists());
}

#[test]
fn map_sweep_csv() {
    let d = scratch();
    let out = d.path().join("sweep.csv");
    let code = cli(&[
        "map-sweep",
        "--map",
        "sine",
        "--lo",
        "0.1",
        "--hi",
        "0.3",
        "--steps",
        "3",
        "--x0",
        "0.3",
        "--out",
        &s(&out),
    ]);
    assert_eq!(code, EXIT_OK);
    let text = std::fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "param,le,status");
    assert_eq!(lines.len(), 4);
    assert!(lines[1].starts_with("0.1,-") && lines[1].ends_with(",ok"));
    assert!(lines[2].starts_with("0.2,-"));
}

#[test]
fn nist_csv() {
    let f = fixture();
    let d = scratch();
    let out = d.path().join("nist.csv");
    let code = cli(&[
        "nist",
        "--key",
        &f.path("k.key"),
        "--model",
        &f.path("m.tdlm"),
        "--bits",
        "20000",
        "--out",
        &s(&out),
    ]);
    assert_eq!(code, EXIT_OK);
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("test,p_value,pass\nmonobit,"));
    assert_eq!(text.lines().count(), 11);
    let code = cli(&[
        "nist",
        "--key",
        &f.path("k.key"),
        "--model",
        &f.path("m.tdlm"),
        "--bits",
        "50",
        "--out",
        &s(&out),
    ]);
    assert_eq!(code, EXIT_DOMAIN);
}

#[test]
fn binary_reports_one_line_diagnostics() {
    let out = Command::new(env!("CARGO_BIN_EXE_chaoscrypt"))
        .args([
            "analyze",
            "--in",
            "/nonexistent/x.pgm",
            "--out",
            "/tmp/never.csv",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(EXIT_IO));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert_eq!(stderr, "chaoscrypt: /nonexistent/x.pgm: no such file\n");

    let f = fixture();
    let d = scratch();
    let plain = d.path().join("p.ppm");
    std::fs::write(&plain, netpbm::encode(&natural_scene(16, 16, 3, 0))).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_chaoscrypt"))
        .args([
            "encrypt",
            "--key",
            &f.path("k.key"),
            "--model",
            &f.path("m.tdlm"),
            "--in",
            &s(&plain),
        ])
        .args(["--out", &s(&d.path().join("c.ppm")), "--time"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(EXIT_OK));
    assert!(String::from_utf8(out.stdout)
        .unwrap()
        .starts_with("time_seconds="));
}
