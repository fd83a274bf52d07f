//! Sweep rows and their CSV form.
//!
//! Every row carries the scheme, the harvesting fraction and the full parameter set in
//! file units, followed by the recipe's outputs. Floats are written with 12 significant
//! digits in scientific notation, so identical inputs give identical bytes.

use std::io::Write;

use crate::error::Result;
use crate::params::{Scheme, SchemeConfig, SystemParams};

use super::config::{get_param, PARAM_KEYS};

/// One output value.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Text(String),
    Empty,
}

impl Cell {
    pub fn text(s: impl Into<String>) -> Self {
        Cell::Text(s.into())
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Num(v) => Some(*v),
            _ => None,
        }
    }

    pub fn as_str(&self) -> Option<&str> {
        match self {
            Cell::Text(s) => Some(s),
            _ => None,
        }
    }

    fn render(&self) -> String {
        match self {
            Cell::Num(v) => format_float(*v),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Empty, Cell::Num)
    }
}

/// Twelve significant digits, scientific notation.
pub fn format_float(v: f64) -> String {
    if v == 0.0 {
        // avoids a signed zero in the output
        return format!("{:.11e}", 0.0);
    }
    format!("{v:.11e}")
}

/// One grid point of an experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub scheme: Option<Scheme>,
    pub fraction: Option<f64>,
    pub params: SystemParams,
    /// Values for [`Table::outputs`], in the same order.
    pub values: Vec<Cell>,
}

impl SweepRow {
    pub fn new(params: &SystemParams, scheme: Option<&SchemeConfig>, values: Vec<Cell>) -> Self {
        SweepRow {
            scheme: scheme.map(|s| s.variant()),
            fraction: scheme.map(|s| s.fraction()),
            params: *params,
            values,
        }
    }
}

/// Rows of one experiment, in grid order.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub outputs: Vec<&'static str>,
    pub rows: Vec<SweepRow>,
}

impl Table {
    pub fn new(outputs: Vec<&'static str>) -> Self {
        Table { outputs, rows: Vec::new() }
    }

    pub fn push(&mut self, row: SweepRow) {
        debug_assert_eq!(row.values.len(), self.outputs.len());
        self.rows.push(row);
    }

    pub fn header(&self) -> Vec<String> {
        let mut h = vec!["scheme".to_string(), "fraction".to_string()];
        h.extend(PARAM_KEYS.iter().map(|(k, _)| k.to_string()));
        h.extend(self.outputs.iter().map(|s| s.to_string()));
        h
    }

    fn record(&self, row: &SweepRow) -> Vec<String> {
        let mut r = vec![
            row.scheme.map_or(String::new(), |s| s.label().to_string()),
            row.fraction.map_or(String::new(), format_float),
        ];
        r.extend(
            PARAM_KEYS
                .iter()
                .map(|(k, _)| format_float(get_param(&row.params, k).expect("known key"))),
        );
        r.extend(row.values.iter().map(Cell::render));
        r
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(self.header())?;
        for row in &self.rows {
            w.write_record(self.record(row))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        Ok(String::from_utf8(buf).expect("csv output is utf-8"))
    }

    /// Position of an output column.
    pub fn output_index(&self, name: &str) -> Option<usize> {
        self.outputs.iter().position(|&c| c == name)
    }

    /// Numeric output column, `NaN` where the cell is not a number.
    pub fn numbers(&self, name: &str) -> Vec<f64> {
        let i = self.output_index(name).unwrap_or_else(|| panic!("no output column `{name}`"));
        self.rows
            .iter()
            .map(|r| r.values[i].as_f64().unwrap_or(f64::NAN))
            .collect()
    }

}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_have_twelve_digits() {
        assert_eq!(format_float(0.1), "1.00000000000e-1");
        assert_eq!(format_float(-0.0), "0.00000000000e0");
        assert_eq!(format_float(123456.789), "1.23456789000e5");
    }

    #[test]
    fn csv_layout() {
        let p = SystemParams::default();
        let s = SchemeConfig::ts(0.5).unwrap();
        let mut t = Table::new(vec!["x", "label"]);
        t.push(SweepRow::new(&p, Some(&s), vec![Cell::Num(2.0), Cell::text("a, b")]));
        t.push(SweepRow::new(&p, None, vec![Cell::Empty, Cell::text("c")]));
        let text = t.to_csv_string().unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 3);
        assert!(lines[0].starts_with("scheme,fraction,Pa,fc,m,d_ar"));
        assert!(lines[0].ends_with("T_block,x,label"));
        assert!(lines[1].starts_with("ts,5.00000000000e-1,2.00000000000e1,9.00000000000e2,"));
        assert!(lines[1].ends_with(",2.00000000000e0,\"a, b\""));
        assert!(lines[2].starts_with(",,"));
        assert_eq!(t.numbers("x")[0], 2.0);
        assert!(t.numbers("x")[1].is_nan());
    }
}
