use std::path::PathBuf;
use std::process::{Command, Output};

fn sn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sn")).args(args).env_remove("SN_DATA_DIR").output().expect("sn runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn lambda_of_the_self_conjugate_hook() {
    let o = sn(&["lambda", "[3,2,1]"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "0\n");
}

#[test]
fn small_combinatorics() {
    assert_eq!(stdout(&sn(&["dim", "[3,2,1]"])), "16\n");
    assert_eq!(stdout(&sn(&["conj", "[4,1]"])), "[2,1^3]\n");
    assert_eq!(stdout(&sn(&["syt", "[2,1]"])), "211\n121\n");
    assert_eq!(stdout(&sn(&["outer", "[2,1]", "[1]"])), "[3,1]+[2^2]+[2,1^2]\n");
    assert_eq!(stdout(&sn(&["kron", "[2,1]", "[2,1]"])), "[3]+[2,1]+[1^3]\n");
}

#[test]
fn four_with_a_symmetric_pair_as_csv() {
    let o = sn(&["cfp", "[4]", "--attach", "[2]", "--n", "6", "--format", "csv"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    assert_eq!(reader.headers().unwrap().len(), 16);
    let records: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(records.len(), 15);
    assert!(records.iter().all(|r| r.len() == 16 && &r[1] == "1/15*sqrt(15)"));
}

#[test]
fn verify_single_reference() {
    let o = sn(&["verify", "--reference", "data/n3_eq1.json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).lines().next().unwrap().ends_with("PASS"));
}

#[test]
fn verify_reports_a_broken_reference() {
    let o = sn(&["verify", "--reference", "data/n4_[2]_x_[1^2].json"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("known issue"));
}

#[test]
fn corpus_verification_passes() {
    let o = sn(&["corpus-verify-all"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).ends_with(", 0 failed\n"));
}

#[test]
fn output_does_not_depend_on_jobs() {
    let runs = [
        vec!["corpus-verify-all"],
        vec!["verify"],
        vec!["cfp", "[3]", "[2,1]", "[1^3]", "[2^2]", "--attach", "[1^2]", "--format", "json"],
    ];
    for args in runs {
        let base = sn(&args);
        for k in ["1", "3", "8"] {
            let mut with = vec!["--jobs", k];
            with.extend(&args);
            let o = sn(&with);
            assert_eq!(o.stdout, base.stdout, "{args:?} --jobs {k}");
            assert_eq!(o.status.code(), base.status.code());
        }
    }
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec!["bogus"],
        vec!["lambda", "[2,3]"],
        vec!["cfp", "[4]", "--attach", "[2]", "--n", "7"],
        vec!["cfp", "[4]", "--attach", "[2]", "--moved", "1"],
        vec!["chartab", "9"],
        vec!["--jobs", "0", "dim", "[2]"],
    ] {
        let o = sn(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(String::from_utf8_lossy(&o.stderr).contains("Usage"), "{args:?}");
    }
}

#[test]
fn computation_errors_carry_their_code() {
    let o = sn(&["innercg", "[3]", "[3]", "[2,1]"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("E_ZERO_MULT"));
}

#[test]
fn data_dir_can_be_overridden() {
    let dir = std::env::temp_dir().join(format!("sn-cli-corpus-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let src = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/data/n4_[3]_x_[1].json");
    std::fs::copy(src, dir.join("n4_[3]_x_[1].json")).unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_sn")).arg("corpus-verify-all").env("SN_DATA_DIR", &dir).output().unwrap();
    std::fs::remove_dir_all(&dir).ok();
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "n4_[3]_x_[1]  PASS\n1 passed, 0 known issues, 0 failed\n");
}

#[test]
fn inner_cg_text_and_matrix_elements() {
    let o = sn(&["innercg", "[2,1]", "[2,1]", "[3]", "--format", "csv"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), ",[3]_1\n1x1,1/2*sqrt(2)\n1x2,0\n2x1,0\n2x2,1/2*sqrt(2)\n");
    let spec = std::env::temp_dir().join(format!("sn-cli-spec-{}.json", std::process::id()));
    std::fs::write(&spec, r#"{"m1": {"1,1": "1", "2,2": "1", "3,3": "1"}}"#).unwrap();
    let o = sn(&["matelem", "[2]", "[3]", "[2]", "[3]", "--spec", spec.to_str().unwrap()]);
    std::fs::remove_file(&spec).ok();
    assert!(o.status.success());
    assert_eq!(stdout(&o), "3\n");
}
