//! Result rows and their CSV/JSON serialization.

use serde::{Deserialize, Serialize};

/// Fixed column order of the tabular output.
pub const CSV_HEADER: &str =
    "model_id,flavor,eps0,eps1,gamma,vprime,alpha,mean0,mean1,covariance,e1,status";

/// One computed point. Numeric fields are empty when the computation did
/// not produce them; `e1` is populated only for `ok` rows with a
/// non-negative correlator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub model_id: String,
    pub flavor: String,
    pub eps0: f64,
    pub eps1: f64,
    pub gamma: f64,
    pub vprime: Option<f64>,
    pub alpha: Option<f64>,
    pub mean0: Option<f64>,
    pub mean1: Option<f64>,
    pub covariance: Option<f64>,
    pub e1: Option<f64>,
    pub status: String,
}

fn field(value: Option<f64>) -> String {
    // Shortest round-trip decimal form.
    value.map(|v| format!("{v}")).unwrap_or_default()
}

/// CSV fields may not contain the separator; model ids use brackets and
/// semicolons only, but quote defensively when needed.
fn csv_escape(text: &str) -> String {
    if text.contains(',') || text.contains('"') || text.contains('\n') {
        format!("\"{}\"", text.replace('"', "\"\""))
    } else {
        text.to_string()
    }
}

impl ResultRow {
    pub fn to_csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            csv_escape(&self.model_id),
            self.flavor,
            self.eps0,
            self.eps1,
            self.gamma,
            field(self.vprime),
            field(self.alpha),
            field(self.mean0),
            field(self.mean1),
            field(self.covariance),
            field(self.e1),
            self.status
        )
    }

    /// Parse one CSV line in the fixed column order.
    pub fn from_csv_line(line: &str) -> Result<Self, String> {
        // No quoted fields are ever emitted for numeric columns; split is
        // safe unless the model id was quoted.
        let fields = split_csv(line);
        if fields.len() != 12 {
            return Err(format!("expected 12 fields, got {}", fields.len()));
        }
        let num = |s: &str| -> Result<f64, String> {
            s.parse::<f64>().map_err(|e| format!("bad number `{s}`: {e}"))
        };
        let opt = |s: &str| -> Result<Option<f64>, String> {
            if s.is_empty() {
                Ok(None)
            } else {
                num(s).map(Some)
            }
        };
        Ok(Self {
            model_id: fields[0].clone(),
            flavor: fields[1].clone(),
            eps0: num(&fields[2])?,
            eps1: num(&fields[3])?,
            gamma: num(&fields[4])?,
            vprime: opt(&fields[5])?,
            alpha: opt(&fields[6])?,
            mean0: opt(&fields[7])?,
            mean1: opt(&fields[8])?,
            covariance: opt(&fields[9])?,
            e1: opt(&fields[10])?,
            status: fields[11].clone(),
        })
    }
}

fn split_csv(line: &str) -> Vec<String> {
    let mut fields = Vec::new();
    let mut current = String::new();
    let mut quoted = false;
    let mut chars = line.chars().peekable();
    while let Some(c) = chars.next() {
        match c {
            '"' if quoted && chars.peek() == Some(&'"') => {
                current.push('"');
                chars.next();
            }
            '"' => quoted = !quoted,
            ',' if !quoted => {
                fields.push(std::mem::take(&mut current));
            }
            _ => current.push(c),
        }
    }
    fields.push(current);
    fields
}

/// Serialize rows in the requested format; both forms are deterministic.
pub fn render_rows(rows: &[ResultRow], format: crate::cli::OutputFormat) -> String {
    match format {
        crate::cli::OutputFormat::Csv => {
            let mut out = String::from(CSV_HEADER);
            out.push('\n');
            for row in rows {
                out.push_str(&row.to_csv_line());
                out.push('\n');
            }
            out
        }
        crate::cli::OutputFormat::Json => {
            let mut out =
                serde_json::to_string_pretty(rows).expect("rows serialize infallibly");
            out.push('\n');
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> ResultRow {
        ResultRow {
            model_id: "pairing_toy[(0,1)]".into(),
            flavor: "mode".into(),
            eps0: 0.1 + 0.2, // deliberately non-representable exactly
            eps1: 1.0 / 3.0,
            gamma: 1e-6,
            vprime: None,
            alpha: Some(0.9999999999999999),
            mean0: Some(0.5),
            mean1: Some(0.5),
            covariance: Some(0.25),
            e1: Some(2.0f64.ln()),
            status: "ok".into(),
        }
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let row = sample();
        let parsed = ResultRow::from_csv_line(&row.to_csv_line()).unwrap();
        assert_eq!(row, parsed, "shortest round-trip decimals must be exact");
    }

    #[test]
    fn empty_fields_stay_empty() {
        let mut row = sample();
        row.alpha = None;
        row.e1 = None;
        row.status = "vanishing_mean".into();
        let line = row.to_csv_line();
        let parsed = ResultRow::from_csv_line(&line).unwrap();
        assert_eq!(parsed.alpha, None);
        assert_eq!(parsed.e1, None);
    }

    #[test]
    fn json_round_trip_is_exact() {
        let rows = vec![sample()];
        let text = render_rows(&rows, crate::cli::OutputFormat::Json);
        let parsed: Vec<ResultRow> = serde_json::from_str(&text).unwrap();
        assert_eq!(rows, parsed);
    }

    #[test]
    fn header_matches_field_order() {
        assert_eq!(CSV_HEADER.split(',').count(), 12);
    }
}
