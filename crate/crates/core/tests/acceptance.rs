//! Acceptance run: one PASS/FAIL line per criterion, each under its time limit.

use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

use defquant::fuzzy::{casimir_eigenvalue, Irrep};
use defquant::liealg::LieAlgebra;
use defquant::report::CheckReport;
use defquant::scalar::{q, qi};
use defquant::star::{check_semiclassical, WeylStar};
use defquant::suites;
use defquant::weyl::WeylContext;

type Outcome = Result<String, String>;
type Criterion = (&'static str, u64, fn() -> Outcome);

fn require(report: &CheckReport) -> Result<(), String> {
    if report.passed {
        Ok(())
    } else {
        Err(report.to_string())
    }
}

fn total(reports: &[CheckReport]) -> usize {
    reports.iter().map(|r| r.checked).sum()
}

fn semiclassical() -> Outcome {
    let mut cases = 0;
    for alg in [LieAlgebra::su2(), LieAlgebra::heisenberg()] {
        let star = WeylStar::new(Arc::new(WeylContext::new(alg.clone())));
        let r = check_semiclassical(&star, &alg, 3).map_err(|e| e.to_string())?;
        require(&r)?;
        cases += r.checked;
    }
    Ok(format!("{cases} pairs"))
}

fn moyal_equivalence() -> Outcome {
    let r = suites::moyal_agreement(4).map_err(|e| e.to_string())?;
    require(&r)?;
    Ok(format!("{} pairs", r.checked))
}

fn restriction() -> Outcome {
    let r = suites::moyal_restriction(4).map_err(|e| e.to_string())?;
    require(&r)?;
    Ok(format!("{} pairs", r.checked))
}

fn tangency() -> Outcome {
    let (weyl, psi) = suites::tangency(3, 3).map_err(|e| e.to_string())?;
    let w = weyl
        .first_witness()
        .ok_or_else(|| format!("star_S unexpectedly tangent: {weyl}"))?;
    if weyl.passed {
        return Err("star_S reported PASS".into());
    }
    require(&psi)?;
    Ok(format!("star_S witness at {}: {}", w.label, w.detail))
}

fn orbit() -> Outcome {
    let reports = suites::orbit_suite(3).map_err(|e| e.to_string())?;
    for r in &reports {
        require(r)?;
    }
    Ok(format!("{} cases", total(&reports)))
}

fn fuzzy() -> Outcome {
    let reports = suites::fuzzy_suite(2).map_err(|e| e.to_string())?;
    for r in &reports {
        require(r)?;
    }
    // rho(P) is scalar, and the level matches the Casimir eigenvalue.
    for j in [q(1, 2), qi(1), q(3, 2)] {
        for h in [qi(1), q(1, 2)] {
            let rep = Irrep::build(&j, &h).map_err(|e| e.to_string())?;
            casimir_eigenvalue(&rep).map_err(|e| e.to_string())?;
        }
    }
    Ok(format!("{} cases over 6 (j, h)", total(&reports)))
}

fn gluing() -> Outcome {
    let reports = suites::glue_suite(3, 3).map_err(|e| e.to_string())?;
    for r in &reports {
        require(r)?;
    }
    Ok(format!("{} cases", total(&reports)))
}

fn weyl() -> Outcome {
    let mut reports = Vec::new();
    for alg in [LieAlgebra::su2(), LieAlgebra::heisenberg()] {
        let ctx = WeylContext::new(alg);
        reports.push(suites::weyl_oracle(&ctx, 4));
        reports.push(suites::weyl_round_trip(&ctx, 5));
    }
    reports.push(suites::intertwining(&WeylContext::new(LieAlgebra::su2()), 3).map_err(|e| e.to_string())?);
    for r in &reports {
        require(r)?;
    }
    Ok(format!("{} cases", total(&reports)))
}

struct Case {
    args: Vec<String>,
    code: i32,
    stdout: Option<&'static str>,
    contains: Option<&'static str>,
}

fn case(args: &[&str], code: i32) -> Case {
    Case {
        args: args.iter().map(|s| s.to_string()).collect(),
        code,
        stdout: None,
        contains: None,
    }
}

fn cli() -> Outcome {
    let dir = std::env::temp_dir().join(format!("defquant-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let bad = dir.join("diag.lie");
    std::fs::write(&bad, "dim 2\nbasis X Y\nbracket X X = Y\n").map_err(|e| e.to_string())?;
    let good = dir.join("su2.lie");
    std::fs::write(&good, "dim 3\nbasis X Y Z\nbracket X Y = Z\nbracket Y Z = X\nbracket Z X = Y\n")
        .map_err(|e| e.to_string())?;
    let bad = bad.to_str().expect("utf-8 path").to_string();
    let good = good.to_str().expect("utf-8 path").to_string();

    let cases = vec![
        Case {
            stdout: Some("x*y + (1/2)*h*z\n"),
            ..case(&["star", "--algebra", "su2", "--product", "weyl", "x", "y"], 0)
        },
        case(&["check", "semiclassical", "--algebra", "heisenberg", "--degree", "3"], 0),
        Case {
            contains: Some("witness h^2"),
            ..case(&["tangential", "--algebra", "su2", "--product", "weyl", "--ideal", "x^2+y^2+z^2-r^2"], 1)
        },
        case(&["tangential", "--product", "psi-p", "--ideal", "x^2+y^2+z^2-r^2"], 0),
        Case {
            stdout: Some("x*y + (1/2)*h*z\n"),
            ..case(&["star", "--algebra", &good, "x", "y"], 0)
        },
        Case {
            stdout: Some("e'\n"),
            ..case(&["bracket", "--algebra", "heisenberg", "q", "p"], 0)
        },
        case(&["bracket", "--params", "r", "r*x", "y"], 0),
        case(&["bracket", "r*x", "y"], 2),
        case(&["star", "x^(-1)", "y"], 2),
        case(&["star", "x", "w"], 2),
        case(&["star", "--algebra", &bad, "x", "y"], 2),
        case(&["star", "--algebra", "nosuch", "x", "y"], 2),
        case(&["star", "--product", "nosuch", "x", "y"], 2),
        case(&["star", "--bogus", "x", "y"], 2),
        case(&["frobnicate"], 2),
        case(&["fuzzy", "--spin", "1/3", "--h", "1"], 2),
        case(&["fuzzy", "--spin", "1", "--h", "1"], 0),
        case(&["check", "glue"], 0),
        case(&["check", "nosuch"], 2),
        Case {
            contains: Some("\"status\": \"ok\""),
            ..case(&["--format", "json", "star", "--product", "moyal-heis", "q", "p"], 0)
        },
        Case {
            contains: Some("\"status\": \"fail\""),
            ..case(
                &["--format", "json", "tangential", "--product", "weyl", "--ideal", "x^2+y^2+z^2-r^2"],
                1,
            )
        },
    ];
    for c in &cases {
        let out = Command::new(env!("CARGO_BIN_EXE_defquant"))
            .args(&c.args)
            .output()
            .map_err(|e| e.to_string())?;
        let code = out.status.code().unwrap_or(-1);
        let stdout = String::from_utf8_lossy(&out.stdout);
        if code != c.code {
            return Err(format!("`{}` exited {code}, expected {}", c.args.join(" "), c.code));
        }
        if let Some(want) = c.stdout {
            if stdout != want {
                return Err(format!("`{}` printed {stdout:?}, expected {want:?}", c.args.join(" ")));
            }
        }
        if let Some(want) = c.contains {
            if !stdout.contains(want) {
                return Err(format!("`{}` output lacks {want:?}: {stdout}", c.args.join(" ")));
            }
        }
        if c.args.first().map(String::as_str) == Some("--format") {
            let v: serde_json::Value = serde_json::from_str(&stdout).map_err(|e| e.to_string())?;
            for field in ["command", "status", "result", "witnesses"] {
                if v.get(field).is_none() {
                    return Err(format!("json output lacks `{field}`"));
                }
            }
        }
    }
    let _ = std::fs::remove_dir_all(&dir);
    Ok(format!("{} invocations", cases.len()))
}

fn main() {
    let criteria: Vec<Criterion> = vec![
        ("semiclassical limits", 10, semiclassical),
        ("closed-form Moyal equals star_S", 30, moyal_equivalence),
        ("restriction to e' = 1", 10, restriction),
        ("tangency dichotomy", 60, tangency),
        ("orbit quotient", 120, orbit),
        ("fuzzy-sphere descent", 60, fuzzy),
        ("gluing identities", 60, gluing),
        ("Weyl map contracts", 60, weyl),
        ("CLI contract", 10, cli),
    ];
    let mut failed = 0;
    for (i, (name, limit, run)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let over = elapsed > Duration::from_secs(limit);
        let (status, detail) = match (&outcome, over) {
            (Ok(d), false) => ("PASS", d.clone()),
            (Ok(d), true) => ("FAIL", format!("{d}; exceeded the {limit} s limit")),
            (Err(e), _) => ("FAIL", e.clone()),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!(
            "criterion {} {name}: {status} ({:.2} s of {limit} s) {detail}",
            i + 1,
            elapsed.as_secs_f64()
        );
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
