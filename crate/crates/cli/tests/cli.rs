use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../core/fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wfsched"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn validate_accepts_fixtures() {
    let out = run(&[
        "validate",
        &fixture("diamond4.workflow.json"),
        &fixture("pair2.cluster.json"),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).contains("topological order: A B C D"));
}

#[test]
fn validate_reports_cycles_and_bad_schedules() {
    let tmp = tempfile::tempdir().unwrap();
    let cyclic = write(
        tmp.path(),
        "cyclic.json",
        r#"{"tasks":[{"id":"A","work":1},{"id":"B","work":1}],
            "edges":[{"src":"A","dst":"B"},{"src":"B","dst":"A"}]}"#,
    );
    let out = run(&["validate", &cyclic, &fixture("pair2.cluster.json")]);
    assert!(!out.status.success());
    assert!(stderr(&out).contains("cycle"), "{}", stderr(&out));

    let bad = write(
        tmp.path(),
        "bad.csv",
        "task,node,start,finish\nA,N2,0,2\nB,N2,1,2\nC,N2,2,5\n",
    );
    let out = run(&[
        "validate",
        &fixture("chain3.workflow.json"),
        &fixture("het2.cluster.json"),
        "--schedule",
        &bad,
    ]);
    assert!(!out.status.success());
    let text = stdout(&out);
    assert!(text.contains("violation"), "{text}");
    assert!(text.contains("overlap"), "{text}");
}

#[test]
fn validate_flags_tasks_with_no_host() {
    let tmp = tempfile::tempdir().unwrap();
    let wf = write(
        tmp.path(),
        "wf.json",
        r#"{"tasks":[{"id":"T","work":1,"class":"gpu"}]}"#,
    );
    let out = run(&["validate", &wf, &fixture("pair2.cluster.json")]);
    assert!(!out.status.success());
    assert!(stdout(&out).contains("fits on no node"));
}

#[test]
fn schedule_writes_a_valid_csv() {
    let tmp = tempfile::tempdir().unwrap();
    let out_path = tmp.path().join("s.csv");
    let out = run(&[
        "schedule",
        "--workflow",
        &fixture("chain3.workflow.json"),
        "--cluster",
        &fixture("het2.cluster.json"),
        "--algo",
        "bnb",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stderr(&out).contains("makespan=6\n"));
    assert_eq!(
        std::fs::read_to_string(&out_path).unwrap(),
        "task,node,start,finish\nA,N2,0,2\nB,N2,2,3\nC,N2,3,6\n"
    );
    let check = run(&[
        "validate",
        &fixture("chain3.workflow.json"),
        &fixture("het2.cluster.json"),
        "--schedule",
        out_path.to_str().unwrap(),
    ]);
    assert!(check.status.success(), "{}", stdout(&check));
}

#[test]
fn schedule_uses_the_carbon_trace_and_weights() {
    let out = run(&[
        "schedule",
        "--workflow",
        &fixture("single.workflow.json"),
        "--cluster",
        &fixture("single.cluster.json"),
        "--algo",
        "exhaustive",
        "--alpha",
        "0",
        "--gamma",
        "1",
        "--carbon-trace",
        &fixture("two_segment.trace.csv"),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert_eq!(stdout(&out), "task,node,start,finish\nT,N1,0,5\n");
    let report = stderr(&out);
    assert!(report.contains("carbon=0.05"), "{report}");
    assert!(report.contains("nodes_explored=1"), "{report}");
}

#[test]
fn snapshot_excludes_anomalous_nodes() {
    let base = [
        "schedule",
        "--workflow",
        &fixture("chain3.workflow.json"),
        "--cluster",
        &fixture("het2.cluster.json"),
        "--algo",
        "heft",
    ]
    .map(String::from);
    let plain = run(&base.iter().map(String::as_str).collect::<Vec<_>>());
    assert!(stderr(&plain).contains("makespan=6\n"));

    let snapshot = fixture("het2.snapshot.csv");
    let mut args: Vec<&str> = base.iter().map(String::as_str).collect();
    args.extend([
        "--snapshot",
        &snapshot,
        "--temp-limit",
        "80",
        "--load-limit",
        "0.9",
    ]);
    let filtered = run(&args);
    assert!(filtered.status.success(), "{}", stderr(&filtered));
    assert!(stderr(&filtered).contains("excluding anomalous node N2"));
    assert!(stderr(&filtered).contains("makespan=12\n"));
    assert!(!stdout(&filtered).contains("N2"));

    let mut args: Vec<&str> = base.iter().map(String::as_str).collect();
    args.extend([
        "--snapshot",
        &snapshot,
        "--temp-limit",
        "50",
        "--load-limit",
        "0.9",
    ]);
    let none_left = run(&args);
    assert!(!none_left.status.success());
    assert!(stderr(&none_left).contains("every node was excluded"));
}

#[test]
fn usage_errors_exit_nonzero() {
    for args in [
        vec![
            "schedule",
            "--workflow",
            "x",
            "--cluster",
            "y",
            "--algo",
            "cplex",
        ],
        vec![
            "schedule",
            "--workflow",
            "missing.json",
            "--cluster",
            "y",
            "--algo",
            "heft",
        ],
        vec!["bench", "--scenarios", "W9", "--out", "/dev/null"],
        vec!["sweep", "--density", "1.5", "--out", "/dev/null"],
    ] {
        let out = run(&args);
        assert!(!out.status.success(), "{args:?} succeeded");
        assert!(!stderr(&out).is_empty());
    }
    let out = run(&[
        "schedule",
        "--workflow",
        &fixture("chain3.workflow.json"),
        "--cluster",
        &fixture("het2.cluster.json"),
        "--algo",
        "heft",
        "--alpha",
        "-1",
    ]);
    assert!(!out.status.success());
}

#[test]
fn bench_records_capped_runs_and_exported_schedules_revalidate() {
    let tmp = tempfile::tempdir().unwrap();
    let csv = tmp.path().join("bench.csv");
    let dir: PathBuf = tmp.path().join("schedules");
    let out = run(&[
        "bench",
        "--scenarios",
        "W1,W3",
        "--algos",
        "heft,sa,exhaustive",
        "--out",
        csv.to_str().unwrap(),
        "--schedules-dir",
        dir.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stderr(&out).contains("W3 exhaustive rep 0: capped"));
    let text = std::fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 7);
    assert_eq!(
        lines[0],
        "scenario,algorithm,seed,makespan,energy,carbon,runtime_s,status,nodes_explored,nodes_pruned"
    );
    let order: Vec<String> = lines[1..]
        .iter()
        .map(|l| l.split(',').take(2).collect::<Vec<_>>().join(" "))
        .collect();
    assert_eq!(
        order,
        [
            "W1 heft",
            "W1 sa",
            "W1 exhaustive",
            "W3 heft",
            "W3 sa",
            "W3 exhaustive"
        ]
    );
    assert!(lines[6].contains(",capped,"));

    // Re-validate every exported schedule against its instance.
    let instances = tmp.path().join("instances");
    std::fs::create_dir_all(&instances).unwrap();
    for name in ["W1", "W3"] {
        let s = wfsched::harness::gen_scenario(name.parse().unwrap());
        std::fs::write(
            instances.join(format!("{name}.wf.json")),
            s.workflow.to_json(),
        )
        .unwrap();
        std::fs::write(
            instances.join(format!("{name}.cl.json")),
            s.cluster.to_json(),
        )
        .unwrap();
    }
    let mut checked = 0;
    for entry in std::fs::read_dir(&dir).unwrap() {
        let path = entry.unwrap().path();
        let name = path.file_name().unwrap().to_string_lossy().into_owned();
        let scenario = name.split("__").next().unwrap().to_string();
        let out = run(&[
            "validate",
            instances
                .join(format!("{scenario}.wf.json"))
                .to_str()
                .unwrap(),
            instances
                .join(format!("{scenario}.cl.json"))
                .to_str()
                .unwrap(),
            "--schedule",
            path.to_str().unwrap(),
        ]);
        assert!(out.status.success(), "{name}: {}", stdout(&out));
        checked += 1;
    }
    assert_eq!(checked, 5);
}

#[test]
fn sweep_uses_capped_node_counts() {
    let tmp = tempfile::tempdir().unwrap();
    let csv = tmp.path().join("sweep.csv");
    let out = run(&[
        "sweep",
        "--sizes",
        "5,30",
        "--max-nodes",
        "8",
        "--algos",
        "heft,olb",
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = std::fs::read_to_string(&csv).unwrap();
    let scenarios: Vec<&str> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').next().unwrap())
        .collect();
    assert_eq!(scenarios, ["n5x5", "n5x5", "n30x8", "n30x8"]);
    assert!(text.lines().skip(1).all(|l| l.contains(",ok,")));
}
