use std::io::{self, Write};

use crate::scalar::Real;

/// One benchmark row: endpoint errors per labeled coordinate against the
/// reference, plus run-wide maxima of the constraint residual and the
/// energy deviation. All entries are nonnegative.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorRow<T> {
    pub method: String,
    pub endpoint_error: Vec<T>,
    pub max_constraint_residual: T,
    pub max_energy_deviation: T,
}

/// A per-method comparison table.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorTable<T> {
    pub labels: Vec<String>,
    pub rows: Vec<ErrorRow<T>>,
}

impl<T: Real> ErrorTable<T> {
    pub fn new(labels: impl IntoIterator<Item = String>) -> Self {
        Self { labels: labels.into_iter().collect(), rows: Vec::new() }
    }

    pub fn row(&self, method: &str) -> Option<&ErrorRow<T>> {
        self.rows.iter().find(|r| r.method == method)
    }

    pub fn write_csv(&self, out: &mut impl Write) -> io::Result<()> {
        let mut header = vec!["method".to_string()];
        header.extend(self.labels.iter().map(|l| format!("err_{l}")));
        header.push("max_constraint_residual".into());
        header.push("max_energy_deviation".into());
        writeln!(out, "{}", header.join(","))?;
        for row in &self.rows {
            let mut cells = vec![row.method.clone()];
            cells.extend(row.endpoint_error.iter().map(|v| format!("{v:.16e}")));
            cells.push(format!("{:.16e}", row.max_constraint_residual));
            cells.push(format!("{:.16e}", row.max_energy_deviation));
            writeln!(out, "{}", cells.join(","))?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("in-memory write");
        String::from_utf8(buf).expect("csv is ascii")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_has_header_plus_row_per_method() {
        let mut table = ErrorTable::<f64>::new(["x".to_string(), "y".to_string()]);
        for m in ["a", "b", "c"] {
            table.rows.push(ErrorRow {
                method: m.into(),
                endpoint_error: vec![0.0, 1.0],
                max_constraint_residual: 0.0,
                max_energy_deviation: 2.0,
            });
        }
        let text = table.to_csv_string();
        assert_eq!(text.lines().count(), 4);
        assert!(text.starts_with("method,err_x,err_y,max_constraint_residual,max_energy_deviation\n"));
    }
}
