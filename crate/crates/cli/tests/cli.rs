use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_setdirect"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn indices(v: &Value) -> Vec<u64> {
    v.as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_u64().unwrap())
        .collect()
}

#[test]
fn info_reports() {
    let out = run(&["info", "C4", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["order"], 4);
    assert_eq!(v["class_count"], 4);
    assert_eq!(indices(&v["prime_power_generators"]), vec![1, 3]);

    let v = json(&run(&["info", "Q8", "--json"]));
    assert_eq!(
        (v["order"].as_u64(), v["class_count"].as_u64()),
        (Some(8), Some(5))
    );
    assert_eq!(v["center"].as_array().unwrap().len(), 2);
    assert!(v["semi_regular_elements"].as_array().unwrap().is_empty());

    let v = json(&run(&["info", "S3", "--json"]));
    assert_eq!(v["center"].as_array().unwrap().len(), 1);
    assert_eq!(v["class_count"], 3);

    let text = String::from_utf8(run(&["info", "D10"]).stdout).unwrap();
    assert!(text.contains("order:                  10"));
}

#[test]
fn verify_exit_codes() {
    let out = run(&["verify", "C4", "-x", "0,2", "-y", "0,1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["certified"], true);
    assert_eq!(v["report"]["condition_a"], true);
    assert_eq!(indices(&v["report"]["Z"]), vec![0, 2]);

    let out = run(&["verify", "C4", "-x", "0,1", "-y", "0,1"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(
        json(&out)["report"]["directness"]["unique_representation"],
        false
    );

    assert_eq!(
        run(&["verify", "D10", "-x", "all", "-y", "0"])
            .status
            .code(),
        Some(0)
    );
    assert_eq!(
        run(&["verify", "D10", "--X", "r,r^4", "--Y", "r^2,r^3"])
            .status
            .code(),
        Some(1),
        "direct but not all of G"
    );

    // a single reflection is not a union of classes
    let out = run(&["verify", "D10", "-x", "s", "-y", "0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr)
        .unwrap()
        .contains("not normal"));
    assert_eq!(
        run(&["verify", "C4", "-x", "9", "-y", "0"]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["verify", "NoSuchGroup", "-x", "0", "-y", "0"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn factorize_prime_power() {
    let out = run(&[
        "factorize",
        "C4",
        "--method",
        "prime-power",
        "--element",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let f = &v["factorizations"][0];
    assert_eq!(indices(&f["X"]), vec![0, 2]);
    assert_eq!(indices(&f["Y"]), vec![0, 1]);
    assert_eq!(f["certified"], true);

    let out = run(&[
        "factorize",
        "Q8",
        "--method",
        "prime-power",
        "--element",
        "-1",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn factorize_transversal() {
    let out = run(&[
        "factorize",
        "Q8",
        "--method",
        "transversal",
        "--M",
        "center",
        "--N",
        "Q8",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert!(v["factorizations"].as_array().unwrap().is_empty());
    let counts = &v["absence"]["class_counts"];
    assert_eq!(
        (
            counts["k_g"].as_u64(),
            counts["k_z"].as_u64(),
            counts["k_g_mod_z"].as_u64()
        ),
        (Some(5), Some(2), Some(4))
    );

    let out = run(&[
        "factorize",
        "C4",
        "--method",
        "transversal",
        "--M",
        "z^2",
        "--N",
        "all",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["factorizations"][0]["certified"], true);

    // not a central product
    let out = run(&[
        "factorize",
        "S3",
        "--method",
        "transversal",
        "--M",
        "trivial",
        "--N",
        "trivial",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn factorize_oracle() {
    let out = run(&["factorize", "A5", "--method", "oracle", "--nontrivial"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(json(&out)["factorizations"].as_array().unwrap().is_empty());

    let v = json(&run(&[
        "factorize",
        "C4",
        "--method",
        "oracle",
        "--nontrivial",
    ]));
    let pairs: Vec<(Vec<u64>, Vec<u64>)> = v["factorizations"]
        .as_array()
        .unwrap()
        .iter()
        .map(|f| (indices(&f["X"]), indices(&f["Y"])))
        .collect();
    assert_eq!(
        pairs,
        vec![(vec![0, 1], vec![0, 2]), (vec![0, 2], vec![0, 3])]
    );

    let out = run(&["factorize", "C4", "--method", "oracle", "--emit", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "x_size,y_size,normalized,x_classes,y_classes");
    assert_eq!(lines.len(), 4);
}

#[test]
fn factorize_system_and_cyclic() {
    let out = run(&[
        "factorize",
        "C9",
        "--method",
        "system",
        "--M",
        "all",
        "--N",
        "all",
        "--A",
        "0,3,6",
        "--B",
        "0,1,2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(indices(&v["system"]["Z"]).len(), 9);

    let out = run(&[
        "factorize",
        "C9",
        "--method",
        "system",
        "--M",
        "all",
        "--N",
        "all",
        "--A",
        "0,1",
        "--B",
        "0,1,2",
    ]);
    assert_eq!(out.status.code(), Some(2));

    let out = run(&[
        "factorize",
        "C9",
        "--method",
        "cyclic",
        "--M",
        "all",
        "--N",
        "all",
        "--x0",
        "0,3,6",
        "--y0",
        "0,1,2",
    ]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn suite_commands() {
    let out = run(&["suite", "D10"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(
        text.contains("direct class pair: {r, r^4} x {r^2, r^3}"),
        "{text}"
    );

    let out = run(&["suite", "A5", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let cd = v[0]["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == "class_pairs_non_direct")
        .unwrap()
        .clone();
    assert_eq!(cd["passed"], true);
    assert_eq!(cd["checked"], 10);

    let out = run(&[
        "suite",
        "--all-catalog",
        "--max-order",
        "12",
        "--samples",
        "50",
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
}

#[test]
fn group_files() {
    let dir = std::env::temp_dir().join(format!("setdirect-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("s3.json");
    std::fs::write(
        &path,
        r#"{"kind": "permutations", "degree": 3, "generators": [[1, 2, 0], [1, 0, 2]]}"#,
    )
    .unwrap();
    let v = json(&run(&["info", path.to_str().unwrap(), "--json"]));
    assert_eq!(v["order"], 6);
    let bad = dir.join("bad.json");
    std::fs::write(&bad, r#"{"kind": "table", "mult": [[0, 1], [0, 1]]}"#).unwrap();
    assert_eq!(run(&["info", bad.to_str().unwrap()]).status.code(), Some(2));
    std::fs::remove_dir_all(&dir).unwrap();
}
