use std::path::Path;
use std::process::{Command, Output};

fn sim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sim"))
        .args(args)
        .output()
        .expect("spawn sim")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn sweep_drive_is_byte_identical_across_runs_and_threads() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.toml", "[drive]\nratios = [4, 8]\n[noise]\nt1 = \"30 us\"\nt2 = \"20 us\"\n");
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for (out, threads) in [(&a, "1"), (&b, "2")] {
        let o = sim(&["sweep-drive", "--config", &cfg, "--out", out.to_str().unwrap(), "--threads", threads]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let (ta, tb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(ta, tb);
    let text = String::from_utf8(ta).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("j_over_omega,gate_time_ns,fidelity_unitary,fidelity_noisy"));
    assert_eq!(lines.count(), 2);
}

#[test]
fn synth_same_seed_same_output() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "s.toml", "[synth]\nseeds = 4\nmax_evaluations = 1500\n");
    let run = |seed: &str| {
        let o = sim(&["synth", "--config", &cfg, "--seed", seed]);
        assert!(o.status.code() == Some(0) || o.status.code() == Some(2));
        o.stdout
    };
    assert_eq!(run("11"), run("11"));
}

#[test]
fn json_output_parses() {
    let o = sim(&["norm-error", "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).expect("json");
    let rows = v.as_array().expect("array of rows");
    assert!(!rows.is_empty());
    assert!(rows[0].get("norm_error").and_then(|x| x.as_f64()).is_some());
}

#[test]
fn csv_numbers_have_twelve_significant_digits() {
    let o = sim(&["norm-error"]);
    let text = String::from_utf8(o.stdout).unwrap();
    let row = text.lines().nth(1).unwrap();
    let err = row.split(',').nth(2).unwrap();
    let digits = err.trim_start_matches("0.").chars().filter(|c| c.is_ascii_digit()).count();
    assert_eq!(digits, 12, "{err}");
}

#[test]
fn infeasible_synth_writes_header_only_and_exits_nonzero() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "s.toml", "[synth]\nseeds = 3\njz_min = \"120 GHz\"\njz_max = \"200 GHz\"\n");
    let out = dir.path().join("t.csv");
    let o = sim(&["synth", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().count(), 1);
    assert!(text.starts_with("#,E_0 [2pi GHz]"));
}

#[test]
fn bad_config_fails() {
    let dir = tempfile::tempdir().unwrap();
    let unknown = write(dir.path(), "u.toml", "[device]\nfoo = 1\n");
    assert_eq!(sim(&["sweep-drive", "--config", &unknown]).status.code(), Some(1));
    let unitless = write(dir.path(), "v.toml", "[device]\ncoupling = \"40\"\n");
    assert_eq!(sim(&["sweep-drive", "--config", &unitless]).status.code(), Some(1));
    assert_eq!(sim(&["sweep-drive", "--config", "/nonexistent.toml"]).status.code(), Some(1));
    assert!(!sim(&["no-such-experiment"]).status.success());
}

#[test]
fn sweep_n_refuses_large_registers() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "n.toml", "[sweep_n]\nn = [7]\n");
    let o = sim(&["sweep-n", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!o.stderr.is_empty());
}

#[test]
fn cli_seed_overrides_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "s.toml", "seed = 1\n[synth]\nseeds = 3\nmax_evaluations = 1000\n");
    let a = sim(&["synth", "--config", &cfg, "--seed", "5"]).stdout;
    let cfg5 = write(dir.path(), "t.toml", "seed = 5\n[synth]\nseeds = 3\nmax_evaluations = 1000\n");
    let b = sim(&["synth", "--config", &cfg5]).stdout;
    assert_eq!(a, b);
}

#[test]
fn table1_check_covers_every_row() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "t.toml", "[table1]\npoints = 5\nspan = 0.05\n");
    let o = sim(&["table1-check", "--config", &cfg]);
    assert!(o.status.success());
    assert_eq!(String::from_utf8(o.stdout).unwrap().lines().count(), 15);
}
