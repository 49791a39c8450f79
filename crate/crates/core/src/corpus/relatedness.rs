use std::path::Path;

use super::{open_file, CorpusError, Result};

/// Number of AI applications (rows).
pub const APPLICATION_COUNT: usize = 10;
/// Number of O*NET abilities (columns).
pub const ABILITY_COUNT: usize = 52;

/// Crowd-sourced relatedness between AI applications and O*NET abilities.
#[derive(Debug, Clone, PartialEq)]
pub struct RelatednessMatrix {
    applications: Vec<String>,
    abilities: Vec<String>,
    values: Vec<Vec<f64>>,
}

impl RelatednessMatrix {
    /// Validates shape (10 x 52) and cell values (finite, non-negative).
    pub fn new(
        applications: Vec<String>,
        abilities: Vec<String>,
        values: Vec<Vec<f64>>,
    ) -> Result<Self> {
        let cols = values.first().map_or(abilities.len(), Vec::len);
        if values.len() != APPLICATION_COUNT
            || cols != ABILITY_COUNT
            || abilities.len() != ABILITY_COUNT
            || applications.len() != values.len()
            || values.iter().any(|r| r.len() != cols)
        {
            return Err(CorpusError::ShapeMismatch {
                rows: values.len(),
                cols,
            });
        }
        for (i, row) in values.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                if !v.is_finite() || *v < 0.0 {
                    return Err(CorpusError::NonNumericCell {
                        row: i + 1,
                        column: j + 1,
                        value: v.to_string(),
                        reason: "must be finite and non-negative",
                    });
                }
            }
        }
        Ok(RelatednessMatrix {
            applications,
            abilities,
            values,
        })
    }

    pub fn applications(&self) -> &[String] {
        &self.applications
    }

    pub fn abilities(&self) -> &[String] {
        &self.abilities
    }

    /// Row-major values, one row per application.
    pub fn rows(&self) -> &[Vec<f64>] {
        &self.values
    }

    pub fn get(&self, application: usize, ability: usize) -> f64 {
        self.values[application][ability]
    }
}

/// Loads the relatedness CSV: a header of ability ids after a leading label
/// column, then one row per application.
pub fn load_relatedness_matrix(path: impl AsRef<Path>) -> Result<RelatednessMatrix> {
    let path = path.as_ref();
    let mut reader = csv::ReaderBuilder::new()
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(open_file(path)?);
    let io_err = |e: csv::Error| CorpusError::MalformedRow {
        line: e.position().map_or(0, |p| p.line()),
        reason: e.to_string(),
    };
    let headers = reader.headers().map_err(io_err)?.clone();
    let abilities: Vec<String> = headers.iter().skip(1).map(str::to_string).collect();

    let mut applications = Vec::new();
    let mut values = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(io_err)?;
        if record.iter().all(str::is_empty) {
            continue;
        }
        let cols = record.len().saturating_sub(1);
        if cols != abilities.len() {
            return Err(CorpusError::ShapeMismatch {
                rows: i + 1,
                cols,
            });
        }
        applications.push(record.get(0).unwrap_or("").to_string());
        let mut row = Vec::with_capacity(cols);
        for (j, cell) in record.iter().skip(1).enumerate() {
            let bad = |reason| CorpusError::NonNumericCell {
                row: i + 1,
                column: j + 1,
                value: cell.to_string(),
                reason,
            };
            let v: f64 = cell.parse().map_err(|_| bad("not a number"))?;
            if !v.is_finite() || v < 0.0 {
                return Err(bad("must be finite and non-negative"));
            }
            row.push(v);
        }
        values.push(row);
    }
    if values.len() != APPLICATION_COUNT || abilities.len() != ABILITY_COUNT {
        return Err(CorpusError::ShapeMismatch {
            rows: values.len(),
            cols: abilities.len(),
        });
    }
    RelatednessMatrix::new(applications, abilities, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn matrix_csv(rows: usize, cols: usize, cell: impl Fn(usize, usize) -> String) -> String {
        let mut s = String::from("application");
        for j in 0..cols {
            s.push_str(&format!(",A{j}"));
        }
        s.push('\n');
        for i in 0..rows {
            s.push_str(&format!("app{i}"));
            for j in 0..cols {
                s.push(',');
                s.push_str(&cell(i, j));
            }
            s.push('\n');
        }
        s
    }

    fn tmp(contents: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(contents.as_bytes()).unwrap();
        f
    }

    #[test]
    fn well_formed_matrix_loads() {
        let f = tmp(&matrix_csv(10, 52, |i, j| format!("{}", (i * j) as f64 / 100.0)));
        let m = load_relatedness_matrix(f.path()).unwrap();
        assert_eq!(m.rows().len(), 10);
        assert_eq!(m.abilities().len(), 52);
        assert_eq!(m.get(3, 7), 0.21);
    }

    #[test]
    fn nine_rows_is_shape_mismatch() {
        let f = tmp(&matrix_csv(9, 52, |_, _| "1".into()));
        assert!(matches!(
            load_relatedness_matrix(f.path()),
            Err(CorpusError::ShapeMismatch { rows: 9, cols: 52 })
        ));
    }

    #[test]
    fn negative_cell_rejected() {
        let f = tmp(&matrix_csv(10, 52, |i, j| if i == 2 && j == 5 { "-0.5".into() } else { "1".into() }));
        assert!(matches!(
            load_relatedness_matrix(f.path()),
            Err(CorpusError::NonNumericCell { row: 3, column: 6, .. })
        ));
    }

    #[test]
    fn text_cell_rejected() {
        let f = tmp(&matrix_csv(10, 52, |i, _| if i == 0 { "high".into() } else { "1".into() }));
        assert!(matches!(
            load_relatedness_matrix(f.path()),
            Err(CorpusError::NonNumericCell { .. })
        ));
    }
}
