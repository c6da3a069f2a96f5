use std::path::Path;
use std::process::Command;

pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn run_cli(args: &[&str], dir: &Path) -> Outcome {
    let out = Command::new(env!("CARGO_BIN_EXE_semiorbit"))
        .args(args)
        .current_dir(dir)
        .env_remove("SEMIORBIT_OUT_DIR")
        .output()
        .expect("binary runs");
    Outcome {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8_lossy(&out.stdout).into_owned(),
        stderr: String::from_utf8_lossy(&out.stderr).into_owned(),
    }
}

/// Expected result of one invocation.
pub enum Expect {
    /// Exit 0 with exactly this standard output (trailing newline trimmed).
    Stdout(&'static str),
    /// Nonzero exit with this text on standard error.
    Fails(&'static str),
}

pub const GOLDENS: &[(&[&str], Expect)] = &[
    (&["order", "7", "1", "3"], Expect::Stdout("6")),
    (&["order", "7", "1", "1"], Expect::Stdout("1")),
    (&["order", "7", "1", "0"], Expect::Fails("zero has no multiplicative order")),
    (&["cyclotomic", "1"], Expect::Stdout("X - 1")),
    (&["cyclotomic", "12"], Expect::Stdout("X^4 - X^2 + 1")),
    (&["cyclotomic", "0"], Expect::Fails("cyclotomic index")),
    (&["resultant", "X - 1", "X + 1"], Expect::Stdout("2")),
    (&["resultant", "X^2 + 1", "X^2 - 1"], Expect::Stdout("4")),
    (&["resultant", "X^2 + * 1", "X"], Expect::Fails("position 6")),
    (&["orbit", "7", "1", "X^2", "3"], Expect::Stdout("T=3\n3 0\n2 1\n4 2")),
    (&["orbit", "7", "1", "X^2", "1"], Expect::Stdout("T=1\n1 0")),
    (&["orbit", "7", "1", "7X^2 + X", "3"], Expect::Fails("degenerate generator")),
    (&["btree", "2", "3"], Expect::Stdout("7")),
    (&["special", "X^2 - 2"], Expect::Stdout("chebyshev_conjugate")),
    (&["gamma", "7", "1", "3"], Expect::Stdout("1 2 4 6")),
];

/// Checks one golden; `Err` describes the mismatch.
pub fn check_golden(args: &[&str], expect: &Expect, dir: &Path) -> Result<(), String> {
    let out = run_cli(args, dir);
    match expect {
        Expect::Stdout(s) if out.code == 0 && out.stdout.trim_end() == *s => Ok(()),
        Expect::Fails(s) if out.code != 0 && out.stderr.contains(s) => Ok(()),
        _ => Err(format!(
            "{args:?}: exit {} stdout {:?} stderr {:?}",
            out.code, out.stdout, out.stderr
        )),
    }
}

pub const PROP21_CONFIG: &str = r#"{"generators": ["2X^2 + 1", "X^3 - X + 1"], "n_max": 4, "samples": 25, "seed": 7}"#;

/// `verify prop21 cfg.json --out r.csv` in `dir`.
pub fn check_verify_plumbing(dir: &Path) -> Result<(), String> {
    std::fs::write(dir.join("cfg.json"), PROP21_CONFIG).map_err(|e| e.to_string())?;
    let out = run_cli(&["verify", "prop21", "cfg.json", "--out", "r.csv"], dir);
    if out.code != 0 || !out.stdout.starts_with("prop21 rows=25") {
        return Err(format!("verify prop21: exit {} stdout {:?} stderr {:?}", out.code, out.stdout, out.stderr));
    }
    let csv = std::fs::read_to_string(dir.join("r.csv")).map_err(|e| e.to_string())?;
    if !csv.contains("sample,word,n,degree,height,bound,holds,ratio") {
        return Err("report lacks the prop21 header row".into());
    }
    let unknown = run_cli(&["verify", "thm99", "cfg.json"], dir);
    if unknown.code == 0 || !unknown.stderr.contains("thm44i, thm44ii, cor45, thm46, thm61, lemma41, prop21") {
        return Err(format!("unknown id: exit {} stderr {:?}", unknown.code, unknown.stderr));
    }
    std::fs::write(dir.join("big.json"), r#"{"generators": ["X^3 + 1"], "n_max": 6, "samples": 2}"#)
        .map_err(|e| e.to_string())?;
    let guard = run_cli(&["verify", "prop21", "big.json"], dir);
    if guard.code != 4 || !guard.stderr.contains("explosion guard") {
        return Err(format!("guard: exit {} stderr {:?}", guard.code, guard.stderr));
    }
    Ok(())
}
