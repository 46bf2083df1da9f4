//! Measured LDL operation counts pinned against `golden/ldl_counts.csv`.
//! Regenerate with `UPDATE_GOLDEN=1 cargo test -p mimo-core --test ldl_golden`.

use std::path::PathBuf;

use mimo_core::complexity::{formula_rm, measure_rm, Algorithm};

const HEADER: &str = "U,real_mul,add,sub,reciprocal,sqrt";

fn golden_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden/ldl_counts.csv")
}

fn measured() -> String {
    let mut out = format!("{HEADER}\n");
    for u in 2..=64usize {
        let c = measure_rm(Algorithm::Ldl, u, 9).unwrap();
        out.push_str(&format!(
            "{u},{},{},{},{},{}\n",
            c.real_mul, c.add, c.sub, c.reciprocal, c.sqrt
        ));
    }
    out
}

#[test]
fn ldl_counts_match_golden() {
    let got = measured();
    let path = golden_path();
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, &got).unwrap();
    }
    let want = std::fs::read_to_string(&path).expect("golden file present");
    assert_eq!(got, want);
}

#[test]
fn golden_lies_between_both_reference_counts() {
    let want = std::fs::read_to_string(golden_path()).unwrap();
    let mut lines = want.lines();
    assert_eq!(lines.next(), Some(HEADER));
    let mut rows = 0;
    for line in lines {
        let f: Vec<u64> = line.split(',').map(|x| x.parse().unwrap()).collect();
        let (u, rm) = (f[0], f[1]);
        let chol = formula_rm(Algorithm::Cholesky, u, 3);
        assert!(rm >= chol + 3 * u * (u - 1), "U={u}");
        assert!(rm <= chol + 4 * u * (u - 1), "U={u}");
        assert_eq!(f[4], u, "one reciprocal per pivot");
        assert_eq!(f[5], 0, "no square roots");
        rows += 1;
    }
    assert_eq!(rows, 63);
}
