//! Command implementations. Each returns a report and an exit code; any
//! error is an input error (exit code 2).

use std::fs;
use std::path::{Path, PathBuf};

use totalpos::lcp::{enumerate_solutions, is_tpk_lcp_single, tn_sufficient_single, LcpInstance};
use totalpos::matcore::{parse_matrix, parse_matrix_prefix, parse_vector_line, Vector};
use totalpos::pfkarlin::{is_pfk_windowed, parse_sequence, random_tp_matrix, tp_counterexample};
use totalpos::tpcheck::{
    is_tn_vd_single, is_tnk_all_minors, is_tnk_snr_single, is_tp_vd_single, is_tpk_all_minors,
    is_tpk_contiguous, is_tpk_snr_single, Alpha,
};
use totalpos::{Class, RationalMatrix, Verdict};

use crate::report::{Comparison, Generated, LcpReport, MethodResult, Report};

pub const EXIT_HOLDS: i32 = 0;
pub const EXIT_FAILS: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

/// Largest `min(m, n)` accepted by `compare`.
pub const COMPARE_MAX_DIM: usize = 6;

pub type CmdResult = Result<(Report, i32), String>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Minors,
    Contiguous,
    Snr,
    Vd,
    Lcp,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Minors => "minors",
            Method::Contiguous => "contiguous",
            Method::Snr => "snr",
            Method::Vd => "vd",
            Method::Lcp => "lcp",
        }
    }
}

fn read(path: &Path) -> Result<Vec<u8>, String> {
    fs::read(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn text(bytes: &[u8], path: &Path) -> Result<String, String> {
    String::from_utf8(bytes.to_vec()).map_err(|_| format!("{}: not valid UTF-8", path.display()))
}

fn exit_for(v: &Verdict) -> i32 {
    if v.holds {
        EXIT_HOLDS
    } else {
        EXIT_FAILS
    }
}

fn order(a: &RationalMatrix, k: Option<usize>) -> usize {
    k.unwrap_or_else(|| a.min_dim())
}

/// Runs one method. `None` means the combination is unsupported.
pub fn run_method(
    a: &RationalMatrix,
    method: Method,
    class: Class,
    k: usize,
    cap: usize,
) -> Option<totalpos::Result<Verdict>> {
    let full = a.min_dim();
    let vd_order = |f: &dyn Fn() -> totalpos::Result<Verdict>| {
        if k != full {
            Err(totalpos::Error::Precondition(format!(
                "vd decides full-order positivity; k must be {full}"
            )))
        } else {
            f()
        }
    };
    Some(match (method, class) {
        (Method::Minors, Class::Tp) => is_tpk_all_minors(a, k),
        (Method::Minors, Class::Tn) => is_tnk_all_minors(a, k),
        (Method::Contiguous, Class::Tp) => is_tpk_contiguous(a, k),
        (Method::Contiguous, Class::Tn) => return None,
        (Method::Snr, Class::Tp) => is_tpk_snr_single(a, k),
        (Method::Snr, Class::Tn) => is_tnk_snr_single(a, k, &Alpha::Default),
        (Method::Vd, Class::Tp) => vd_order(&|| is_tp_vd_single(a)),
        (Method::Vd, Class::Tn) => vd_order(&|| is_tn_vd_single(a, &Alpha::Default)),
        (Method::Lcp, Class::Tp) => is_tpk_lcp_single(a, k, cap),
        (Method::Lcp, Class::Tn) => tn_sufficient_single(a, k, cap),
    })
}

pub fn check(path: &Path, method: Method, class: Class, k: Option<usize>, cap: usize) -> CmdResult {
    let bytes = read(path)?;
    let a = parse_matrix(&text(&bytes, path)?).map_err(|e| e.to_string())?;
    let k = order(&a, k);
    let verdict = run_method(&a, method, class, k, cap)
        .ok_or_else(|| {
            "contiguous minors do not characterize TN; use minors, snr, vd or lcp".to_string()
        })?
        .map_err(|e| e.to_string())?;
    let mut report = Report::new("check", method.name(), &bytes);
    report.class = Some(class);
    report.k = Some(k);
    if (method, class) == (Method::Lcp, Class::Tn) {
        report.label = Some("sufficient-only".into());
    }
    let code = exit_for(&verdict);
    report.verdict = Some(verdict);
    Ok((report, code))
}

pub fn lcp_solve(path: &Path, q_path: Option<&PathBuf>, cap: usize) -> CmdResult {
    let mut bytes = read(path)?;
    let body = text(&bytes, path)?;
    let (a, q): (RationalMatrix, Vector) = match q_path {
        Some(qp) => {
            let a = parse_matrix(&body).map_err(|e| e.to_string())?;
            let q_bytes = read(qp)?;
            let q = parse_vector_line(&text(&q_bytes, qp)?, a.rows())
                .map_err(|e| format!("{}: {e}", qp.display()))?;
            bytes.extend_from_slice(&q_bytes);
            (a, q)
        }
        None => {
            let (a, rest) = parse_matrix_prefix(&body).map_err(|e| e.to_string())?;
            let rest_text: String = rest.iter().map(|(_, l)| format!("{l}\n")).collect();
            let line = rest.first().map_or(0, |r| r.0);
            let q = parse_vector_line(&rest_text, a.rows()).map_err(|e| match e {
                totalpos::Error::Parse {
                    column, message, ..
                } => totalpos::Error::Parse {
                    line,
                    column,
                    message,
                }
                .to_string(),
                other => other.to_string(),
            })?;
            (a, q)
        }
    };
    let inst = LcpInstance::new(a, q).map_err(|e| e.to_string())?;
    let set = enumerate_solutions(&inst, cap).map_err(|e| e.to_string())?;
    let mut report = Report::new("lcp solve", "enumeration", &bytes);
    report.lcp = Some(LcpReport::from_set(&set));
    Ok((report, EXIT_HOLDS))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Karlin,
    Cauchy,
}

pub fn generate(kind: Kind, n: usize, seed: u64, out: Option<&PathBuf>) -> CmdResult {
    let (name, matrix, verified) = match kind {
        Kind::Karlin => {
            let c = tp_counterexample(n, seed).map_err(|e| e.to_string())?;
            (
                "karlin",
                c.matrix,
                format!("TP_{} with negative determinant", n - 1),
            )
        }
        Kind::Cauchy => {
            if n == 0 {
                return Err("n must be at least 1".into());
            }
            let m = random_tp_matrix(n, n, seed).map_err(|e| e.to_string())?;
            ("cauchy", m, format!("TP_{n}"))
        }
    };
    let params = format!("{name} {n} {seed}");
    let mut report = Report::new("generate", name, params.as_bytes());
    if let Some(path) = out {
        fs::write(path, matrix.to_text()).map_err(|e| format!("{}: {e}", path.display()))?;
    }
    report.generated = Some(Generated {
        kind: name.into(),
        n,
        seed,
        path: out.map(|p| p.display().to_string()),
        matrix: matrix
            .to_rows()
            .iter()
            .map(|r| r.iter().map(|v| v.to_string()).collect())
            .collect(),
        verified,
    });
    Ok((report, EXIT_HOLDS))
}

fn holds(r: Option<totalpos::Result<Verdict>>) -> Result<bool, String> {
    r.expect("supported method")
        .map(|v| v.holds)
        .map_err(|e| e.to_string())
}

/// Runs every characterization against the all-minors oracle.
pub fn compare_matrix(a: &RationalMatrix, k_max: usize, cap: usize) -> Result<Comparison, String> {
    let full = a.min_dim();
    let mut results = Vec::new();
    let mut disagreements = Vec::new();
    let mut record = |method: &str, class: Class, k: usize, value: bool| {
        results.push(MethodResult {
            method: method.into(),
            class,
            k,
            holds: value,
        });
    };
    for k in 1..=k_max {
        let oracle = holds(run_method(a, Method::Minors, Class::Tp, k, cap))?;
        record("minors", Class::Tp, k, oracle);
        for m in [Method::Contiguous, Method::Snr, Method::Lcp] {
            let v = holds(run_method(a, m, Class::Tp, k, cap))?;
            record(m.name(), Class::Tp, k, v);
            if v != oracle {
                disagreements.push(format!("tp k={k}: {} = {v}, minors = {oracle}", m.name()));
            }
        }
        let tn_oracle = holds(run_method(a, Method::Minors, Class::Tn, k, cap))?;
        record("minors", Class::Tn, k, tn_oracle);
        let snr = holds(run_method(a, Method::Snr, Class::Tn, k, cap))?;
        record("snr", Class::Tn, k, snr);
        if snr != tn_oracle {
            disagreements.push(format!("tn k={k}: snr = {snr}, minors = {tn_oracle}"));
        }
        let lcp = holds(run_method(a, Method::Lcp, Class::Tn, k, cap))?;
        record("lcp-sufficient", Class::Tn, k, lcp);
        if lcp && !tn_oracle {
            disagreements.push(format!("tn k={k}: lcp-sufficient holds but minors fails"));
        }
    }
    let tp_full = holds(run_method(a, Method::Minors, Class::Tp, full, cap))?;
    let vd = holds(run_method(a, Method::Vd, Class::Tp, full, cap))?;
    record("vd", Class::Tp, full, vd);
    if vd != tp_full {
        disagreements.push(format!("tp full order: vd = {vd}, minors = {tp_full}"));
    }
    let tn_full = holds(run_method(a, Method::Minors, Class::Tn, full, cap))?;
    let vd = holds(run_method(a, Method::Vd, Class::Tn, full, cap))?;
    record("vd", Class::Tn, full, vd);
    if vd != tn_full {
        disagreements.push(format!("tn full order: vd = {vd}, minors = {tn_full}"));
    }
    Ok(Comparison {
        agreement: disagreements.is_empty(),
        results,
        disagreements,
    })
}

pub fn compare(path: &Path, k_max: Option<usize>, cap: usize) -> CmdResult {
    let bytes = read(path)?;
    let a = parse_matrix(&text(&bytes, path)?).map_err(|e| e.to_string())?;
    if a.min_dim() > COMPARE_MAX_DIM {
        return Err(format!(
            "compare is limited to min(m, n) <= {COMPARE_MAX_DIM}, got {}",
            a.min_dim()
        ));
    }
    let k_max = order(&a, k_max);
    if k_max == 0 || k_max > a.min_dim() {
        return Err(totalpos::Error::OrderOutOfRange {
            k: k_max,
            max: a.min_dim(),
        }
        .to_string());
    }
    let comparison = compare_matrix(&a, k_max, cap)?;
    let code = if comparison.agreement {
        EXIT_HOLDS
    } else {
        EXIT_FAILS
    };
    let mut report = Report::new("compare", "all", &bytes);
    report.k = Some(k_max);
    report.comparison = Some(comparison);
    Ok((report, code))
}

pub fn pf(path: &Path, k: usize, l_min: i64, l_max: i64, cap: usize) -> CmdResult {
    let bytes = read(path)?;
    let seq = parse_sequence(&text(&bytes, path)?).map_err(|e| e.to_string())?;
    let verdict = is_pfk_windowed(&seq, k, l_min..=l_max, cap).map_err(|e| e.to_string())?;
    let mut report = Report::new("pf", "windowed-lcp", &bytes);
    report.class = Some(Class::Tp);
    report.k = Some(k);
    let code = exit_for(&verdict);
    report.verdict = Some(verdict);
    Ok((report, code))
}
