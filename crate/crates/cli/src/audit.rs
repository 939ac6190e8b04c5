use std::io::Read;

use barn_core::CaseStudyRow;
use serde::Serialize;

use crate::CliError;

pub const HEADER: [&str; 5] = ["name", "W", "L", "H", "alpha_deg"];

#[derive(Debug, Serialize)]
pub struct RowError {
    /// 1-based data row, not counting the header.
    pub row: usize,
    pub message: String,
}

#[derive(Debug, Serialize)]
pub struct AuditOutcome {
    pub rows: Vec<CaseStudyRow>,
    pub errors: Vec<RowError>,
}

fn number(field: &str, raw: Option<&str>) -> Result<f64, String> {
    let raw = raw.ok_or_else(|| format!("missing column {field}"))?;
    match raw.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(format!("{field}: expected a number, got {raw:?}")),
    }
}

fn row(record: &csv::StringRecord) -> Result<CaseStudyRow, String> {
    if record.len() != HEADER.len() {
        return Err(format!("expected {} columns, found {}", HEADER.len(), record.len()));
    }
    let name = record.get(0).unwrap_or_default();
    let w = number("W", record.get(1))?;
    let l = number("L", record.get(2))?;
    let h = number("H", record.get(3))?;
    let a = number("alpha_deg", record.get(4))?;
    CaseStudyRow::evaluate(name, w, l, h, a).map_err(|e| e.to_string())
}

/// Rows are evaluated independently; a bad row is reported and skipped.
pub fn audit<R: Read>(input: R) -> Result<AuditOutcome, CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(input);
    let header = reader
        .headers()
        .map_err(|e| CliError::Invalid(format!("unreadable CSV header: {e}")))?
        .clone();
    if header.is_empty() {
        return Err(CliError::Invalid("no data rows".into()));
    }
    if header.iter().ne(HEADER) {
        return Err(CliError::Invalid(format!(
            "expected header {}, found {}",
            HEADER.join(","),
            header.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut outcome = AuditOutcome {
        rows: Vec::new(),
        errors: Vec::new(),
    };
    for (i, record) in reader.records().enumerate() {
        let result = record.map_err(|e| e.to_string()).and_then(|r| row(&r));
        match result {
            Ok(r) => outcome.rows.push(r),
            Err(message) => outcome.errors.push(RowError { row: i + 1, message }),
        }
    }
    if outcome.rows.is_empty() && outcome.errors.is_empty() {
        return Err(CliError::Invalid("no data rows".into()));
    }
    Ok(outcome)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_houses() {
        let text = "name,W,L,H,alpha_deg\nHouse A,19.9,15.75,5,35\n";
        let out = audit(text.as_bytes()).unwrap();
        assert_eq!(out.rows.len(), 1);
        assert!((out.rows[0].volume_mode.ratio - 1.19).abs() < 0.005);
    }

    #[test]
    fn partial_failure_keeps_good_rows() {
        let text = "name,W,L,H,alpha_deg\na,8,13.5,5.8,40\nb,x,1,1,30\nc,8,13.5,5.8,40\n";
        let out = audit(text.as_bytes()).unwrap();
        assert_eq!(out.rows.len(), 2);
        assert_eq!(out.errors.len(), 1);
        assert_eq!(out.errors[0].row, 2);
        assert!(out.errors[0].message.contains('W'));
    }

    #[test]
    fn empty_inputs() {
        for text in ["", "name,W,L,H,alpha_deg\n"] {
            match audit(text.as_bytes()) {
                Err(CliError::Invalid(m)) => assert_eq!(m, "no data rows"),
                other => panic!("{other:?}"),
            }
        }
        assert!(audit("a,b\n1,2\n".as_bytes()).is_err());
    }
}
