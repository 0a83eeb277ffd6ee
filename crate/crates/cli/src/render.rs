//! Rendering of tables, polynomials, matrices and check reports as JSON,
//! CSV or LaTeX. Rationals always appear in canonical `p/q` form (or `p`
//! for integers); LaTeX uses `\frac{p}{q}`.

use std::fmt::Write as _;

use anyhow::Result;
use clap::ValueEnum;
use num_traits::{One, Signed, Zero};
use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;
use serde_json::json;

use polybern::{CheckReport, ParamValue, Polynomial, Rational, Value};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
    Latex,
}

pub fn q(v: &Rational) -> String {
    v.to_string()
}

fn qs(vs: &[Rational]) -> Vec<String> {
    vs.iter().map(q).collect()
}

pub fn latex_q(v: &Rational) -> String {
    if v.is_integer() {
        return v.numer().to_string();
    }
    let sign = if v.is_negative() { "-" } else { "" };
    format!("{sign}\\frac{{{}}}{{{}}}", v.numer().abs(), v.denom())
}

/// Descending-power LaTeX expression, e.g. `x^{2} - x + \frac{1}{6}`.
pub fn latex_poly(p: &Polynomial) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (j, c) in p.coeffs().iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        let mag = c.abs();
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let var = match j {
            0 => String::new(),
            1 => "x".into(),
            _ => format!("x^{{{j}}}"),
        };
        if mag.is_one() && j > 0 {
            out.push_str(&var);
        } else {
            out.push_str(&latex_q(&mag));
            out.push_str(&var);
        }
    }
    out
}

fn csv_string(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(&row)?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

pub fn numbers(k: i64, values: &[Rational], format: Format) -> Result<String> {
    Ok(match format {
        Format::Json => {
            let rows: Vec<_> = values
                .iter()
                .enumerate()
                .map(|(n, v)| json!({ "n": n, "value": q(v) }))
                .collect();
            let doc = json!({ "k": k, "rows": rows });
            serde_json::to_string_pretty(&doc)? + "\n"
        }
        Format::Csv => csv_string(
            &["n", "value"],
            values.iter().enumerate().map(|(n, v)| vec![n.to_string(), q(v)]),
        )?,
        Format::Latex => {
            let mut s = String::from("\\begin{tabular}{rl}\n");
            writeln!(s, "$n$ & $B_n^{{({k})}}$ \\\\\n\\hline")?;
            for (n, v) in values.iter().enumerate() {
                writeln!(s, "{n} & ${}$ \\\\", latex_q(v))?;
            }
            s.push_str("\\end{tabular}\n");
            s
        }
    })
}

pub fn polynomial(family: &str, n: usize, p: &Polynomial, format: Format) -> Result<String> {
    Ok(match format {
        Format::Json => {
            let doc = json!({ "family": family, "n": n, "coeffs": qs(p.coeffs()) });
            serde_json::to_string_pretty(&doc)? + "\n"
        }
        Format::Csv => csv_string(
            &["power", "coeff"],
            p.coeffs().iter().enumerate().map(|(j, c)| vec![j.to_string(), q(c)]),
        )?,
        Format::Latex => format!("${}$\n", latex_poly(p)),
    })
}

pub fn matrix(source: &str, target: &str, dense: &[Vec<Rational>], format: Format) -> Result<String> {
    let n = dense.len().saturating_sub(1);
    Ok(match format {
        Format::Json => {
            let rows: Vec<Vec<String>> = dense.iter().map(|r| qs(r)).collect();
            let doc = json!({ "source": source, "target": target, "n": n, "matrix": rows });
            serde_json::to_string_pretty(&doc)? + "\n"
        }
        Format::Csv => {
            let mut header = vec!["n".to_string()];
            header.extend((0..dense.len()).map(|m| format!("m{m}")));
            let header: Vec<&str> = header.iter().map(String::as_str).collect();
            csv_string(
                &header,
                dense.iter().enumerate().map(|(i, r)| {
                    let mut row = vec![i.to_string()];
                    row.extend(qs(r));
                    row
                }),
            )?
        }
        Format::Latex => {
            let mut s = String::from("\\begin{pmatrix}\n");
            for row in dense {
                let cells: Vec<String> = row.iter().map(latex_q).collect();
                writeln!(s, "{} \\\\", cells.join(" & "))?;
            }
            s.push_str("\\end{pmatrix}\n");
            s
        }
    })
}

struct Params<'a>(&'a [(&'static str, ParamValue)]);

impl Serialize for Params<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in self.0 {
            match v {
                ParamValue::Int(i) => map.serialize_entry(k, i)?,
                ParamValue::Rat(r) => map.serialize_entry(k, &q(r))?,
                ParamValue::Text(t) => map.serialize_entry(k, t)?,
            }
        }
        map.end()
    }
}

fn value_json(v: &Value) -> serde_json::Value {
    match v {
        Value::Scalar(x) => json!(q(x)),
        Value::Poly(p) => json!(qs(p.coeffs())),
        Value::Rows(rows) => json!(rows.iter().map(|r| qs(r)).collect::<Vec<_>>()),
    }
}

#[derive(Serialize)]
struct Record<'a> {
    identity: &'a str,
    params: Params<'a>,
    lhs: serde_json::Value,
    rhs: serde_json::Value,
    pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    note: Option<&'a str>,
}

pub fn report_json(r: &CheckReport) -> Result<String> {
    let rec = Record {
        identity: r.identity.name(),
        params: Params(&r.params),
        lhs: value_json(&r.lhs),
        rhs: value_json(&r.rhs),
        pass: r.pass,
        note: r.note.as_deref(),
    };
    Ok(serde_json::to_string(&rec)?)
}

fn value_text(v: &Value) -> String {
    match v {
        Value::Scalar(x) => q(x),
        Value::Poly(p) => qs(p.coeffs()).join(" "),
        Value::Rows(rows) => rows.iter().map(|r| qs(r).join(" ")).collect::<Vec<_>>().join(";"),
    }
}

fn param_text(r: &CheckReport, name: &str) -> String {
    r.param(name).map(ToString::to_string).unwrap_or_default()
}

pub struct Summary {
    pub total: usize,
    pub passed: usize,
}

impl Summary {
    pub fn of(reports: &[CheckReport]) -> Self {
        Summary { total: reports.len(), passed: reports.iter().filter(|r| r.pass).count() }
    }

    pub fn failed(&self) -> usize {
        self.total - self.passed
    }

    pub fn line(&self) -> String {
        format!("{} checks, {} passed, {} failed", self.total, self.passed, self.failed())
    }
}

/// Report records followed by the summary. For CSV the summary is returned
/// separately (second element) so the table stays machine-readable.
pub fn reports(reports: &[CheckReport], format: Format) -> Result<(String, Option<String>)> {
    let summary = Summary::of(reports);
    Ok(match format {
        Format::Json => {
            let mut s = String::new();
            for r in reports {
                s.push_str(&report_json(r)?);
                s.push('\n');
            }
            let tail = json!({ "summary": {
                "total": summary.total, "passed": summary.passed, "failed": summary.failed()
            }});
            s.push_str(&serde_json::to_string(&tail)?);
            s.push('\n');
            (s, None)
        }
        Format::Csv => {
            let rows = reports.iter().map(|r| {
                vec![
                    r.identity.name().to_string(),
                    param_text(r, "n"),
                    param_text(r, "k"),
                    param_text(r, "r"),
                    param_text(r, "lambda"),
                    value_text(&r.lhs),
                    value_text(&r.rhs),
                    r.pass.to_string(),
                ]
            });
            let header = ["identity", "n", "k", "r", "lambda", "lhs", "rhs", "pass"];
            (csv_string(&header, rows)?, Some(summary.line()))
        }
        Format::Latex => {
            let mut s = String::from("\\begin{tabular}{lrrrrc}\n");
            s.push_str("identity & $n$ & $k$ & $r$ & $\\lambda$ & pass \\\\\n\\hline\n");
            for r in reports {
                let lambda = match r.param("lambda") {
                    Some(ParamValue::Rat(l)) => format!("${}$", latex_q(l)),
                    _ => String::new(),
                };
                writeln!(
                    s,
                    "{} & {} & {} & {} & {} & {} \\\\",
                    r.identity.name(),
                    param_text(r, "n"),
                    param_text(r, "k"),
                    param_text(r, "r"),
                    lambda,
                    if r.pass { "yes" } else { "no" }
                )?;
            }
            s.push_str("\\end{tabular}\n");
            writeln!(s, "% {}", summary.line())?;
            (s, None)
        }
    })
}
