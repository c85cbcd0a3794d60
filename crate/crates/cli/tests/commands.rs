//! The `css-ldpc` binary: exit codes, files and fault injection.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use css_ldpc::catalog::Catalog;
use css_ldpc::construct::{load_mask, MASK_IDS};
use css_ldpc::{BinMatrix, ColumnSelection, CssPair};
use css_ldpc_cli::verify::CodeCheck;

fn css_ldpc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_css-ldpc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn text(o: &Output) -> String {
    format!(
        "{}{}",
        String::from_utf8_lossy(&o.stdout),
        String::from_utf8_lossy(&o.stderr)
    )
}

fn write_masks(dir: &Path) {
    for id in MASK_IDS {
        let path = dir.join(format!("{id}.txt"));
        fs::create_dir_all(path.parent().unwrap()).unwrap();
        fs::write(path, load_mask(id).unwrap().w.to_text()).unwrap();
    }
}

#[test]
fn verify_passes_on_pristine_masks() {
    let dir = tempfile::tempdir().unwrap();
    write_masks(dir.path());
    let out = css_ldpc(&[
        "verify",
        "--mask-dir",
        dir.path().to_str().unwrap(),
        "--code",
        "B/0.8",
        "--code",
        "toy",
    ]);
    assert!(out.status.success(), "{}", text(&out));
    let s = text(&out);
    assert!(
        s.contains("B/0.8") && s.contains("29/37") && s.contains("21/37"),
        "{s}"
    );
}

#[test]
fn corrupted_mask_fails_with_its_name() {
    let dir = tempfile::tempdir().unwrap();
    write_masks(dir.path());
    let path = dir.path().join("B/0.8.txt");
    let mut w = BinMatrix::from_text(&fs::read_to_string(&path).unwrap()).unwrap();
    w.flip(3, 5);
    fs::write(&path, w.to_text()).unwrap();
    let out = css_ldpc(&[
        "verify",
        "--mask-dir",
        dir.path().to_str().unwrap(),
        "--code",
        "B/0.8",
    ]);
    assert_eq!(out.status.code(), Some(2), "{}", text(&out));
    let s = text(&out);
    assert!(
        s.contains("checksum failure") && s.contains("B/0.8") && s.contains("row 3"),
        "{s}"
    );
}

#[test]
fn flipped_h2_bit_is_reported() {
    let sys = Catalog::embedded()
        .entry("mini/0.55")
        .unwrap()
        .build_system(ColumnSelection::Lightest)
        .unwrap();
    let mut h2 = sys.pair.h2().clone();
    h2.flip(7, 40);
    let broken = CssPair::from_parts(sys.pair.h1().clone(), h2).unwrap();
    let mut check = CodeCheck {
        id: "mini/0.55".into(),
        rows: 0,
        cols: 0,
        rate: None,
        rate_label: String::new(),
        rank_h1: 0,
        rank_h2: 0,
        css_rate: None,
        failures: Vec::new(),
    };
    check.check_pair(&broken);
    assert!(!check.pass());
    assert!(check.failures.iter().any(|f| f.contains("h1 * h2^T != 0")));
    assert!(
        check.failures.iter().any(|f| f.contains("[7]")),
        "{:?}",
        check.failures
    );
}

#[test]
fn config_errors_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("unknown = 1", "unknown field"),
        (
            "[code]\nid = \"nope\"\n[decoder]\nflavor = \"sp-flooding\"\nmax_iter = 5\n[sweep]\nmode = \"c1-plain\"\ncrossovers = [0.01]\ntrials = 3\nseed = 1\n",
            "unknown code",
        ),
        (
            "[code]\nid = \"toy\"\n[decoder]\nflavor = \"sp-flooding\"\nmax_iter = 5\n[sweep]\nmode = \"c1-plain\"\ncrossovers = [0.01]\ntrials = 0\nseed = 1\n",
            "trials",
        ),
        (
            "[code]\nid = \"toy\"\n[decoder]\nflavor = \"sp-flooding\"\nmax_iter = 5\n[sweep]\nmode = \"c1-plain\"\ncrossovers = [0.7]\ntrials = 3\nseed = 1\n",
            "0.7",
        ),
    ];
    for (i, (body, needle)) in cases.iter().enumerate() {
        let path = dir.path().join(format!("c{i}.toml"));
        fs::write(&path, body).unwrap();
        let out = css_ldpc(&["sweep", "--config", path.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(1), "case {i}: {}", text(&out));
        assert!(text(&out).contains(needle), "case {i}: {}", text(&out));
    }
    let out = css_ldpc(&[
        "construct",
        "--code",
        "nope",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn construct_writes_matrices_that_pair_up() {
    let dir = tempfile::tempdir().unwrap();
    let out = css_ldpc(&[
        "construct",
        "--code",
        "mini/0.8",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", text(&out));
    let h1 = BinMatrix::from_text(&fs::read_to_string(dir.path().join("h1.txt")).unwrap()).unwrap();
    let h2 = BinMatrix::from_text(&fs::read_to_string(dir.path().join("h2.txt")).unwrap()).unwrap();
    assert_eq!((h1.rows(), h1.cols()), (39, 195));
    assert!(h1.mul_transpose(&h2).unwrap().is_zero());
    let header = fs::read_to_string(dir.path().join("header.txt")).unwrap();
    assert!(header.contains("css_dimension = 117"), "{header}");
}

#[test]
fn sweep_then_reports() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("s.toml");
    fs::write(
        &cfg,
        "[code]\nid = \"mini/0.8\"\n[decoder]\nflavor = \"combined-original\"\nmax_iter = 20\n[sweep]\nmode = \"c2perp-coset\"\ncrossovers = [0.0, 0.02]\ntrials = 40\nseed = 9\n",
    )
    .unwrap();
    let csv = dir.path().join("out.csv");
    let out = css_ldpc(&[
        "sweep",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", text(&out));
    let body = fs::read_to_string(&csv).unwrap();
    let mut lines = body.lines();
    assert!(lines
        .next()
        .unwrap()
        .starts_with("schema_id,code_id,mode,crossover,trials,plain_failures,coset_failures,coverage,mean_iters,seed"));
    let first: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(
        &first[..7],
        &[
            "css-ldpc-sweep/1",
            "mini/0.8",
            "c2perp-coset",
            "0",
            "40",
            "0",
            "0"
        ]
    );

    let out = css_ldpc(&["table1", "--summary", csv.to_str().unwrap()]);
    assert!(out.status.success(), "{}", text(&out));
    assert!(text(&out).contains("coverage"));

    let c = csv.to_str().unwrap();
    let out = css_ldpc(&["eve", "--key-len", "117", "--c1", c, "--c2perp", c]);
    assert!(out.status.success(), "{}", text(&out));
    let s = text(&out);
    assert!(s.contains("rule of three") && s.contains("0.5936"), "{s}");
}

#[test]
fn eve_from_delta_matches_the_closed_form() {
    let (delta, k) = (0.01f64, 712u32);
    let expected =
        -(1.0 - delta) * (1.0 - delta).log2() - delta * delta.log2() + delta * 2.0 * k as f64;
    let out = css_ldpc(&["eve", "--key-len", "712", "--delta", "0.01"]);
    assert!(out.status.success());
    assert!(
        text(&out).contains(&format!("{expected:.6}")),
        "{} vs {expected}",
        text(&out)
    );
    let out = css_ldpc(&["eve", "--key-len", "712"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn shipped_configs_are_valid() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let mut seen = 0;
    for entry in fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "toml") {
            let cfg = css_ldpc_cli::config::SweepConfig::from_file(&path).unwrap();
            cfg.validate().unwrap_or_else(|e| panic!("{}: {e}", path.display()));
            Catalog::embedded().entry(&cfg.code.id).unwrap();
            seen += 1;
        }
    }
    assert!(seen >= 4);
}
