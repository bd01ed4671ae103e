use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use cgadget_core::io::{parse_cover, parse_gadget, parse_instance, parse_instances, write_cover, write_gadget, write_instance};

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cgadget"))
        .current_dir(dir)
        .env_remove("CGADGET_BUDGET")
        .args(args)
        .output()
        .expect("spawn cgadget")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn put(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

#[test]
fn build_and_verify_cd() {
    let t = tempfile::tempdir().unwrap();
    let o = run(t.path(), &["gadget", "build", "--kind", "cd", "--q", "5", "--k1", "1", "--out", "g.txt"]);
    assert_eq!(code(&o), 0);
    let text = fs::read_to_string(t.path().join("g.txt")).unwrap();
    let g = parse_gadget(&text).unwrap();
    assert_eq!((g.n(), g.beta), (5, 8));
    assert_eq!(write_gadget(&g), text);
    let o = run(t.path(), &["gadget", "verify", "g.txt"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("edge_min 8 edge_max 8"));
}

#[test]
fn build_q7_k2_verifies() {
    let t = tempfile::tempdir().unwrap();
    assert_eq!(code(&run(t.path(), &["gadget", "build", "--kind", "cd", "--q", "7", "--k1", "2", "--out", "g.txt"])), 0);
    assert_eq!(code(&run(t.path(), &["gadget", "verify", "g.txt"])), 0);
}

#[test]
fn corrupted_gadget_fails_verification() {
    let t = tempfile::tempdir().unwrap();
    run(t.path(), &["gadget", "build", "--kind", "cd", "--q", "5", "--k1", "2", "--out", "g.txt"]);
    let text = fs::read_to_string(t.path().join("g.txt")).unwrap();
    let mut lines: Vec<String> = text.lines().map(String::from).collect();
    let flipped = if lines[1].starts_with('0') { '1' } else { '0' };
    lines[1].replace_range(0..1, &flipped.to_string());
    put(t.path(), "bad.txt", &(lines.join("\n") + "\n"));
    let o = run(t.path(), &["gadget", "verify", "bad.txt"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("violation"));
}

#[test]
fn composite_modulus_is_input_error() {
    let t = tempfile::tempdir().unwrap();
    assert_eq!(code(&run(t.path(), &["gadget", "build", "--kind", "cd", "--q", "9", "--k1", "1", "--out", "g.txt"])), 2);
}

#[test]
fn ov_to_bcp_dimensions() {
    let t = tempfile::tempdir().unwrap();
    put(t.path(), "ov.txt", "ov 2 3\n101\n010\n010\n110\n");
    let o = run(t.path(), &["reduce", "ov-to-bcp", "ov.txt", "--out", "bcp.txt", "--oracle", "brute"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).lines().next(), Some("YES"));
    let inst = parse_instance(&fs::read_to_string(t.path().join("bcp.txt")).unwrap()).unwrap();
    assert_eq!((inst.d(), inst.alpha), (15, Some(6)));
    let trace = fs::read_to_string(t.path().join("bcp.txt.trace.csv")).unwrap();
    assert!(trace.starts_with("n,n_prime,k,subinstances,dim_out,alpha_out,millis\n"));
}

fn planted_bcp() -> String {
    // A[3] and B[5] differ in one coordinate; no cross pair coincides.
    let a = ["00000000", "00001111", "11110000", "10101010", "01010101", "11001100"];
    let b = ["11111111", "11100111", "00111100", "01100110", "11111110", "10101011"];
    let mut s = "bcp 6 8 1\n".to_string();
    for r in a.iter().chain(&b) {
        s.push_str(r);
        s.push('\n');
    }
    s
}

#[test]
fn bcp_to_cp_brute_finds_planted_pair() {
    let t = tempfile::tempdir().unwrap();
    put(t.path(), "bcp.txt", &planted_bcp());
    let o = run(t.path(), &["reduce", "bcp-to-cp", "bcp.txt", "--oracle", "brute", "--out", "cp.txt"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout(&o).lines().next(), Some("YES"));
    let subs = parse_instances(&fs::read_to_string(t.path().join("cp.txt")).unwrap()).unwrap();
    assert!(!subs.is_empty());
    // alpha = 0 has no cross pair
    put(t.path(), "no.txt", &planted_bcp().replacen("bcp 6 8 1", "bcp 6 8 0", 1));
    let o = run(t.path(), &["reduce", "bcp-to-cp", "no.txt", "--oracle", "brute"]);
    assert_eq!(stdout(&o).lines().next(), Some("NO"));
}

#[test]
fn zero_mu_gadget_has_empty_window() {
    let t = tempfile::tempdir().unwrap();
    put(t.path(), "bcp.txt", &planted_bcp());
    run(t.path(), &["gadget", "build", "--kind", "gap-cd", "--q", "5", "--k1", "1", "--k2", "2", "--out", "g.txt"]);
    let o = run(t.path(), &["reduce", "bcp-to-gapcp", "bcp.txt", "--gadget", "g.txt", "--out", "x.txt"]);
    assert_eq!(code(&o), 3);
}

#[test]
fn solve_examples() {
    let t = tempfile::tempdir().unwrap();
    put(t.path(), "cp.txt", "cp 3 3 1\n000\n011\n010\n");
    let o = run(t.path(), &["solve", "cp.txt"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("value 1 witness (1,3)\n"));
    put(t.path(), "mip.txt", "mip 2 3 1\n111\n111\n");
    assert!(stdout(&run(t.path(), &["solve", "mip.txt"])).starts_with("value 3 witness (1,2)"));
    put(t.path(), "bad.txt", "cp 2 3 1\n000\n01\n");
    assert_eq!(code(&run(t.path(), &["solve", "bad.txt"])), 2);
    assert_eq!(code(&run(t.path(), &["solve", "missing.txt"])), 2);
}

#[test]
fn cover_file_roundtrip() {
    let t = tempfile::tempdir().unwrap();
    run(t.path(), &["gadget", "build", "--kind", "cd", "--q", "5", "--k1", "2", "--out", "g.txt"]);
    let o = run(t.path(), &["cover", "g.txt", "--out", "c.txt"]);
    assert_eq!(code(&o), 0);
    let text = fs::read_to_string(t.path().join("c.txt")).unwrap();
    let (n, perms) = parse_cover(&text).unwrap();
    assert_eq!(n, 25);
    assert_eq!(write_cover(n, &perms), text);
    // a supplied cover drives the reduction
    let mut s = "bcp 25 4 1\n".to_string();
    for i in 0..50 {
        s.push_str(&format!("{:04b}\n", i % 16));
    }
    put(t.path(), "bcp.txt", &s);
    let o = run(t.path(), &["reduce", "bcp-to-cp", "bcp.txt", "--gadget", "g.txt", "--cover", "c.txt", "--oracle", "brute"]);
    assert_eq!(stdout(&o).lines().next(), Some("YES"));
}

#[test]
fn certificate_written() {
    let t = tempfile::tempdir().unwrap();
    let o = run(t.path(), &["center", "--q", "7", "--k1", "2", "--out", "cert.txt"]);
    assert_eq!(code(&o), 0);
    let rec = cgadget_core::io::parse_certificate(&fs::read_to_string(t.path().join("cert.txt")).unwrap()).unwrap();
    assert_eq!((rec.q, rec.center.len(), rec.radius), (7, 7, 5));
}

#[test]
fn gen_and_instance_roundtrip() {
    let t = tempfile::tempdir().unwrap();
    for kind in ["ov", "cp", "bcp", "mip", "bmip"] {
        let o = run(t.path(), &["gen", "--kind", kind, "--n", "7", "--d", "9", "--alpha", "3", "--seed", "4", "--out", "i.txt"]);
        assert_eq!(code(&o), 0);
        let text = fs::read_to_string(t.path().join("i.txt")).unwrap();
        assert_eq!(write_instance(&parse_instance(&text).unwrap()), text);
    }
    assert_eq!(code(&run(t.path(), &["gen", "--kind", "cp", "--n", "3", "--d", "3", "--out", "i.txt"])), 2);
}

#[test]
fn bench_outputs() {
    let t = tempfile::tempdir().unwrap();
    assert_eq!(code(&run(t.path(), &["bench", "cover", "--out", "e.csv"])), 0);
    let empty = fs::read_to_string(t.path().join("e.csv")).unwrap();
    assert_eq!(empty, "suite,n,nprime,k,subinstances,dim_out,millis,verdict,oracle_verdict,agree\n");

    assert_eq!(code(&run(t.path(), &["bench", "bcp-to-cp", "--sizes", "50..120", "--out", "b.csv"])), 0);
    let csv = fs::read_to_string(t.path().join("b.csv")).unwrap();
    assert_eq!(csv.lines().count(), 9);
    assert!(csv.lines().skip(1).all(|l| l.ends_with(",true")), "{csv}");

    assert_eq!(code(&run(t.path(), &["bench", "cover", "--sizes", "5,25,49", "--out", "c.csv"])), 0);
    let csv = fs::read_to_string(t.path().join("c.csv")).unwrap();
    assert!(csv.lines().skip(1).all(|l| l.ends_with("YES,YES,true")), "{csv}");
}

#[test]
fn output_is_identical_across_thread_counts() {
    let t = tempfile::tempdir().unwrap();
    run(t.path(), &["gen", "--kind", "bcp", "--n", "30", "--d", "10", "--alpha", "2", "--seed", "11", "--out", "bcp.txt"]);
    run(t.path(), &["gen", "--kind", "cp", "--n", "8", "--d", "12", "--alpha", "3", "--seed", "5", "--out", "cp.txt"]);
    let mut seen: Vec<Vec<u8>> = Vec::new();
    for threads in ["1", "2", "4"] {
        let o1 = run(t.path(), &["--threads", threads, "--no-timing", "reduce", "bcp-to-cp", "bcp.txt", "--q", "5", "--k1", "2", "--out", "out.txt", "--oracle", "brute"]);
        let o2 = run(t.path(), &["--threads", threads, "--seed", "3", "--no-timing", "reduce", "to-edit", "cp.txt", "--out", "e.txt", "--samples", "200"]);
        let o3 = run(t.path(), &["--threads", threads, "--no-timing", "bench", "bmip-to-mip", "--sizes", "14,21", "--out", "m.csv"]);
        let mut blob = Vec::new();
        for o in [&o1, &o2, &o3] {
            assert_eq!(code(o), 0);
            blob.extend_from_slice(&o.stdout);
        }
        for f in ["out.txt", "out.txt.trace.csv", "e.txt", "e.txt.trace.csv", "m.csv"] {
            blob.extend(fs::read(t.path().join(f)).unwrap());
        }
        seen.push(blob);
    }
    assert!(seen.windows(2).all(|w| w[0] == w[1]));
}

#[test]
fn budget_env_is_respected() {
    let t = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_cgadget"))
        .current_dir(t.path())
        .env("CGADGET_BUDGET", "10")
        .args(["gadget", "build", "--kind", "cd", "--q", "5", "--k1", "2", "--out", "g.txt"])
        .output()
        .unwrap();
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("budget"));
}
