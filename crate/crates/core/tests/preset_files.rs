use std::path::{Path, PathBuf};

use twistlab::config::load_instance;
use twistlab::{preset, LSeriesInstance, PRESET_NAMES};

fn presets_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../presets")
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-14 * a.abs().max(b.abs()).max(1.0)
}

fn assert_same(file: &LSeriesInstance, builtin: &LSeriesInstance) {
    let name = builtin.name();
    assert_eq!(file.name(), name);
    assert!(close(file.fe().q(), builtin.fe().q()), "{name}: Q");
    assert_eq!(file.fe().omega(), builtin.fe().omega(), "{name}: omega");
    assert_eq!(file.sigma_a(), builtin.sigma_a(), "{name}: sigma_a");
    assert_eq!(file.fe().gamma(), builtin.fe().gamma(), "{name}: gamma factors");

    let (pf, pb) = (file.fe().poles(), builtin.fe().poles());
    assert_eq!(pf.len(), pb.len(), "{name}: pole count");
    for (a, b) in pf.iter().zip(pb) {
        assert_eq!(a.location, b.location, "{name}: pole location");
        assert_eq!(a.order(), b.order(), "{name}: pole order");
        for (x, y) in a.principal_part.iter().zip(&b.principal_part) {
            assert!(close(x.re, y.re) && close(x.im, y.im), "{name}: principal part");
        }
    }

    let (ia, ib) = (file.invariants().unwrap(), builtin.invariants().unwrap());
    for (x, y) in [(ia.d, ib.d), (ia.a, ib.a), (ia.b, ib.b), (ia.c, ib.c)] {
        assert!(close(x, y), "{name}: invariants");
    }

    let (ta, tb) = (file.coefficients().bulk(300).unwrap(), builtin.coefficients().bulk(300).unwrap());
    assert_eq!(ta.values(), tb.values(), "{name}: coefficients");
}

#[test]
fn every_preset_has_a_matching_file() {
    for name in PRESET_NAMES {
        let path = presets_dir().join(format!("{name}.toml"));
        let loaded = load_instance(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert_same(&loaded, &preset(name).unwrap());
    }
}

#[test]
fn no_stray_preset_files() {
    let mut files: Vec<String> = std::fs::read_dir(presets_dir())
        .unwrap()
        .filter_map(|e| {
            let p = e.unwrap().path();
            (p.extension()? == "toml").then(|| p.file_stem().unwrap().to_string_lossy().into_owned())
        })
        .collect();
    files.sort();
    let mut names: Vec<String> = PRESET_NAMES.iter().map(|s| s.to_string()).collect();
    names.sort();
    assert_eq!(files, names);
}

#[test]
fn table_provider_reads_relative_csv() {
    let dir = std::env::temp_dir().join(format!("twistlab-table-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    std::fs::write(dir.join("coeffs.csv"), "n,re,im\n1,1,0\n2,0.5,-0.5\n4,2,0\n").unwrap();
    std::fs::write(
        dir.join("custom.toml"),
        "name = \"custom\"\nq = 1.0\nsigma_a = 1.0\ngamma = [{ lambda = 0.5 }]\n\n[coefficients]\nkind = \"table\"\npath = \"coeffs.csv\"\n",
    )
    .unwrap();
    let l = load_instance(&dir.join("custom.toml")).unwrap();
    let c = l.coefficients();
    assert_eq!(c.coefficient(2).unwrap(), num_complex::Complex64::new(0.5, -0.5));
    assert_eq!(c.coefficient(3).unwrap().norm(), 0.0);
    assert_eq!(c.coefficient(4).unwrap().re, 2.0);
    // Beyond the table the series is taken to be zero.
    assert_eq!(c.coefficient(10).unwrap().norm(), 0.0);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn malformed_files_are_config_errors() {
    let dir = std::env::temp_dir().join(format!("twistlab-bad-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.toml");
    std::fs::write(&bad, "name = \"x\"\nq = -1.0\n").unwrap();
    assert!(matches!(load_instance(&bad), Err(twistlab::Error::Config(_))));
    assert!(matches!(load_instance(&dir.join("missing.toml")), Err(twistlab::Error::Config(_))));
    std::fs::remove_dir_all(&dir).unwrap();
}
