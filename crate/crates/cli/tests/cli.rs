use std::path::Path;
use std::process::{Command, Output};

fn lrcgeom(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lrcgeom")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn construct_then_verify_d6r3() {
    let dir = tempfile::tempdir().unwrap();
    let h = dir.path().join("c8.lrc");
    let cert = dir.path().join("c8.cfg");
    let o = lrcgeom(&["construct", "--family", "d6r3-char2", "--q", "8", "--out", p(&h), "--cert", p(&cert)]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(stdout(&o), "n=12 k=6 d=6 r=3 optimal=yes\n");
    assert!(std::fs::read_to_string(&cert).unwrap().starts_with("LRCCFG v1"));

    let o = lrcgeom(&["verify", "--h-file", p(&h), "--expect-d", "6", "--expect-r", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "n=12 k=6 d=6 r=3 optimal=yes\n");
}

#[test]
fn verify_mismatch_exits_2_with_witness() {
    let dir = tempfile::tempdir().unwrap();
    let h = dir.path().join("s.lrc");
    assert!(lrcgeom(&["construct", "--family", "d7r2-spread", "--q", "4", "--out", p(&h)]).status.success());
    let o = lrcgeom(&["verify", "--h-file", p(&h), "--expect-d", "8"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("dependent columns"));
}

#[test]
fn verify_budget_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let h = dir.path().join("c.lrc");
    assert!(lrcgeom(&["construct", "--family", "d6r3-char2", "--q", "8", "--out", p(&h)]).status.success());
    let o = lrcgeom(&["verify", "--h-file", p(&h), "--budget", "5"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn json_output_round_trips_through_verify() {
    let dir = tempfile::tempdir().unwrap();
    let h = dir.path().join("s.json");
    let o = lrcgeom(&["construct", "--family", "d7r2-sunflower", "--q", "5", "--json", "--out", p(&h)]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["d"], 7);
    assert_eq!(v["r"], 2);
    let o = lrcgeom(&["verify", "--h-file", p(&h), "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["optimal"], true);
}

#[test]
fn malformed_file_names_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let h = dir.path().join("bad.lrc");
    std::fs::write(&h, "LRCMAT v1\nq 2 1 3\nn 3 k 1 r x\n").unwrap();
    let o = lrcgeom(&["verify", "--h-file", p(&h)]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));
}

#[test]
fn usage_errors_exit_4() {
    assert_eq!(lrcgeom(&["construct", "--family", "d6r3-char2", "--q", "9"]).status.code(), Some(4));
    assert_eq!(lrcgeom(&["construct", "--family", "d7r2-spread", "--q", "6"]).status.code(), Some(4));
    assert_eq!(lrcgeom(&["nonsense"]).status.code(), Some(4));
    assert_eq!(lrcgeom(&["--help"]).status.code(), Some(0));
}

#[test]
fn bounds_csv_rows() {
    let o = lrcgeom(&["bounds", "--family", "d7r2", "--q-min", "7", "--q-max", "9", "--csv"]);
    assert_eq!(
        stdout(&o),
        "q,family,basic,johnson,equivalence,spread_guarantee,sunflower_guarantee\n\
         7,d7r2,,,57,12,12\n8,d7r2,,,75,15,15\n9,d7r2,,,93,15,15\n"
    );
    let o = lrcgeom(&["bounds", "--family", "d6r3", "--q-min", "8", "--q-max", "8", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v[0]["basic_bound"], 32);
    assert_eq!(v[0]["johnson_bound"], 28);
}

#[test]
fn repair_demo_local_and_global() {
    let dir = tempfile::tempdir().unwrap();
    let h = dir.path().join("c.lrc");
    assert!(lrcgeom(&["construct", "--family", "d6r3-char2", "--q", "8", "--out", p(&h)]).status.success());

    let o = lrcgeom(&["repair-demo", "--h-file", p(&h), "--erase", "0,4"]);
    let out = stdout(&o);
    assert!(out.contains("pos=0 mode=local reads=3"), "{out}");
    assert!(out.ends_with("repaired=ok\n"));

    let o = lrcgeom(&["repair-demo", "--h-file", p(&h), "--erase", "0,1", "--seed", "9"]);
    let out = stdout(&o);
    assert!(out.contains("mode=global"), "{out}");
    assert!(out.ends_with("repaired=ok\n"));
    // same seed, same transcript
    assert_eq!(out, stdout(&lrcgeom(&["repair-demo", "--h-file", p(&h), "--erase", "0,1", "--seed", "9"])));
}

#[test]
fn search_small_plane_and_budget() {
    let o = lrcgeom(&["search", "--family", "d6r3", "--q", "3"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("family=d6r3 q=3 best_ell=1"));
    let o = lrcgeom(&["search", "--family", "d7r2", "--q", "4", "--budget", "3"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("exhausted=no"));
}

#[test]
fn field_tables() {
    let o = lrcgeom(&["field", "--q", "4", "--table", "add"]);
    let out = stdout(&o);
    let rows: Vec<&str> = out.lines().skip(1).map(str::trim).collect();
    assert_eq!(rows, ["0 1 2 3", "1 0 3 2", "2 3 0 1", "3 2 1 0"]);
    assert_eq!(lrcgeom(&["field", "--q", "128", "--table", "mul"]).status.code(), Some(4));
}
