use std::collections::BTreeMap;
use std::io::Write;

use serde::Serialize;

use super::SweepTable;
use crate::error::Result;

/// Shortest text that parses back to the same `f64`.
pub fn format_value(v: f64) -> String {
    format!("{v:?}")
}

/// Plain CSV with a header line.
pub fn write_rows<W: Write>(mut w: W, header: &[&str], rows: &[Vec<f64>]) -> Result<()> {
    writeln!(w, "{}", header.join(","))?;
    for row in rows {
        let cells: Vec<String> = row.iter().map(|&v| format_value(v)).collect();
        writeln!(w, "{}", cells.join(","))?;
    }
    Ok(())
}

pub fn write_csv<W: Write>(w: W, table: &SweepTable) -> Result<()> {
    let header = table.header();
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    let rows: Vec<Vec<f64>> = table.rows.iter().map(|r| table.row_values(r)).collect();
    write_rows(w, &header, &rows)
}

#[derive(Serialize)]
struct Record<'a> {
    params: BTreeMap<&'a str, f64>,
    boundary: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<&'a str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    degenerate: Option<bool>,
    values: BTreeMap<String, f64>,
}

/// One JSON object per line and per (grid point, boundary condition).
/// Failed points carry `error` and no values.
pub fn write_records<W: Write>(mut w: W, table: &SweepTable) -> Result<()> {
    let header = table.header();
    let names = &header[table.axis_names.len()..];
    let per_point = names.len() / table.boundaries.len().max(1);
    for row in &table.rows {
        let values = table.row_values(row);
        let values = &values[row.params.len()..];
        for (k, (point, boundary)) in row.points.iter().zip(&table.boundaries).enumerate() {
            let slot = k * per_point..(k + 1) * per_point;
            let record = Record {
                params: table
                    .axis_names
                    .iter()
                    .map(String::as_str)
                    .zip(row.params.iter().copied())
                    .collect(),
                boundary: boundary.to_string(),
                error: point.as_ref().err().map(String::as_str),
                degenerate: point.as_ref().ok().map(|p| p.degenerate),
                values: match point {
                    Ok(_) => names[slot.clone()]
                        .iter()
                        .map(|n| n.trim_end_matches(&format!("_{boundary}")).to_string())
                        .zip(values[slot].iter().copied())
                        .collect(),
                    Err(_) => BTreeMap::new(),
                },
            };
            let line =
                serde_json::to_string(&record).map_err(|e| crate::Error::Io(e.to_string()))?;
            writeln!(w, "{line}")?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn values_round_trip() {
        for v in [0.1, 1.0 / 3.0, 1e-8, -2.5e300, 0.0] {
            assert_eq!(format_value(v).parse::<f64>().unwrap(), v);
        }
        assert_eq!(format_value(f64::NAN), "NaN");
    }

    #[test]
    fn rows_layout() {
        let mut out = Vec::new();
        write_rows(
            &mut out,
            &["a", "b"],
            &[vec![1.0, 0.5], vec![2.0, f64::NAN]],
        )
        .unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "a,b\n1.0,0.5\n2.0,NaN\n");
    }
}
