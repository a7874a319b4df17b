//! Rendering of command results as CSV, JSON, or plain text.
//!
//! Every renderer builds the full output in memory with LF line endings, so
//! a run's bytes depend only on its flags, never on scheduling.

use orbitk::{LoopCatalog, PeriodRow, PrimeAP, SweepRow, TrajectoryRecord, VerificationReport};
use serde_json::{json, Value};

pub fn loops_csv(catalog: &LoopCatalog) -> String {
    let mut out = String::from("loop_id,period,min_element,elements\n");
    for (id, l) in catalog.loops.iter().enumerate() {
        let elements = l
            .elements()
            .iter()
            .map(u64::to_string)
            .collect::<Vec<_>>()
            .join(" ");
        out.push_str(&format!(
            "{id},{},{},{elements}\n",
            l.period(),
            l.min_element()
        ));
    }
    out
}

pub fn loops_json(catalog: &LoopCatalog) -> String {
    let records: Vec<Value> = catalog
        .loops
        .iter()
        .enumerate()
        .map(|(id, l)| {
            json!({
                "loop_id": id,
                "period": l.period(),
                "min_element": l.min_element(),
                "elements": l.elements(),
            })
        })
        .collect();
    let mut s = serde_json::to_string_pretty(&records).expect("serializable");
    s.push('\n');
    s
}

pub fn sweep_loops_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("k,num_loops\n");
    for r in rows {
        out.push_str(&format!("{},{}\n", r.k, r.num_loops));
    }
    out
}

pub fn sweep_loops_json(rows: &[SweepRow]) -> String {
    let records: Vec<Value> = rows
        .iter()
        .map(|r| json!({"k": r.k, "num_loops": r.num_loops}))
        .collect();
    let mut s = serde_json::to_string_pretty(&records).expect("serializable");
    s.push('\n');
    s
}

pub fn sweep_periods_csv(rows: &[PeriodRow]) -> String {
    let mut out = String::from("period,least_k\n");
    for r in rows {
        match r.least_k {
            Some(k) => out.push_str(&format!("{},{}\n", r.period, k)),
            None => out.push_str(&format!("{},\n", r.period)),
        }
    }
    out
}

pub fn sweep_periods_json(rows: &[PeriodRow]) -> String {
    let records: Vec<Value> = rows
        .iter()
        .map(|r| json!({"period": r.period, "least_k": r.least_k}))
        .collect();
    let mut s = serde_json::to_string_pretty(&records).expect("serializable");
    s.push('\n');
    s
}

pub fn ap_csv(ap: Option<&PrimeAP>) -> String {
    let mut out = String::from("first,difference,length\n");
    if let Some(ap) = ap {
        out.push_str(&format!(
            "{},{},{}\n",
            ap.first(),
            ap.difference(),
            ap.length()
        ));
    }
    out
}

pub fn ap_json(ap: Option<&PrimeAP>) -> String {
    let value = match ap {
        Some(ap) => json!({
            "first": ap.first(),
            "difference": ap.difference(),
            "length": ap.length(),
        }),
        None => Value::Null,
    };
    let mut s = serde_json::to_string_pretty(&value).expect("serializable");
    s.push('\n');
    s
}

/// Trajectory rendering: the first `n` terms with the cycle bracketed, then
/// the summary counts.
pub fn orbit_text(record: &TrajectoryRecord, terms: &[u64]) -> String {
    let mut rendered = String::new();
    let cycle_start = record.preperiod;
    let cycle_end = record.preperiod + record.period - 1;
    let mut open = false;
    for (i, t) in terms.iter().enumerate() {
        if i > 0 {
            rendered.push(' ');
        }
        if i == cycle_start {
            rendered.push('[');
            open = true;
        }
        rendered.push_str(&t.to_string());
        if i == cycle_end {
            rendered.push(']');
            open = false;
        }
    }
    if open {
        rendered.push(']');
    }
    let loop_str = record
        .cycle
        .elements()
        .iter()
        .map(u64::to_string)
        .collect::<Vec<_>>()
        .join(" ");
    format!(
        "S({}, {}) = {rendered} ...\npreperiod: {}\nperiod: {}\nstopping_time: {}\nloop: {loop_str}\n",
        record.x0, record.k, record.preperiod, record.period, record.stopping_time
    )
}

pub fn orbit_json(record: &TrajectoryRecord, terms: &[u64]) -> String {
    let value = json!({
        "x0": record.x0,
        "k": record.k,
        "preperiod": record.preperiod,
        "period": record.period,
        "stopping_time": record.stopping_time,
        "prefix": record.prefix,
        "loop": record.cycle.elements(),
        "terms": terms,
    });
    let mut s = serde_json::to_string_pretty(&value).expect("serializable");
    s.push('\n');
    s
}

/// Plain-text verification report. `unexpected` and `missing` are relative
/// to the built-in allowlist of known violations for the claim.
pub fn report_text(
    report: &VerificationReport,
    unexpected: &[String],
    missing: &[String],
) -> String {
    let mut out = String::new();
    out.push_str(&format!("claim: {}\n", report.claim));
    out.push_str(&format!("grid: {}\n", report.grid));
    out.push_str(&format!("checked: {}\n", report.checked));
    out.push_str(&format!("violations: {}\n", report.violations.len()));
    for v in &report.violations {
        out.push_str(&format!("violation: {v}\n"));
    }
    for v in unexpected {
        out.push_str(&format!("unexpected: {v}\n"));
    }
    for v in missing {
        out.push_str(&format!("missing (expected but not found): {v}\n"));
    }
    let verdict = if unexpected.is_empty() && missing.is_empty() {
        "pass"
    } else {
        "fail"
    };
    out.push_str(&format!("result: {verdict}\n"));
    out
}

pub fn report_json(
    report: &VerificationReport,
    unexpected: &[String],
    missing: &[String],
) -> String {
    let verdict = if unexpected.is_empty() && missing.is_empty() {
        "pass"
    } else {
        "fail"
    };
    let value = json!({
        "claim": report.claim.to_string(),
        "grid": report.grid,
        "checked": report.checked,
        "violations": report.violations.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
        "unexpected": unexpected,
        "missing": missing,
        "result": verdict,
    });
    let mut s = serde_json::to_string_pretty(&value).expect("serializable");
    s.push('\n');
    s
}
