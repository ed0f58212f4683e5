use std::fmt;
use std::io::Write;

use crate::error::{IrsError, Result};

/// Where a series comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Analytic,
    Taylor,
    MonteCarlo,
}

impl Provenance {
    pub fn as_str(&self) -> &'static str {
        match self {
            Provenance::Analytic => "analytic",
            Provenance::Taylor => "taylor",
            Provenance::MonteCarlo => "monte-carlo",
        }
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Column {
    pub name: String,
    /// Unit label; `-` for text and dimensionless columns.
    pub unit: String,
}

impl Column {
    pub fn new(name: &str, unit: &str) -> Self {
        Column {
            name: name.to_string(),
            unit: unit.to_string(),
        }
    }

    /// Axis label such as `P_i (dBm)`.
    pub fn label(&self) -> String {
        if self.unit == "-" {
            self.name.clone()
        } else {
            format!("{} ({})", self.name, self.unit)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Text(String),
    Empty,
}

impl Cell {
    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Num(x) => Some(*x),
            _ => None,
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

impl From<Provenance> for Cell {
    fn from(p: Provenance) -> Self {
        Cell::Text(p.as_str().to_string())
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Cell::Empty, Cell::Num)
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Num(x) => write!(f, "{x}"),
            Cell::Text(s) => f.write_str(s),
            Cell::Empty => Ok(()),
        }
    }
}

/// How a table should be drawn: which columns go on the axes and which one
/// separates the series.
#[derive(Debug, Clone, PartialEq)]
pub struct PlotStyle {
    pub x: String,
    pub y: String,
    pub series: String,
    pub x_log: bool,
    pub y_log: bool,
    pub mark: String,
}

impl PlotStyle {
    pub fn line(x: &str, y: &str, series: &str) -> Self {
        PlotStyle {
            x: x.to_string(),
            y: y.to_string(),
            series: series.to_string(),
            x_log: false,
            y_log: false,
            mark: "line".to_string(),
        }
    }

    pub fn log_x(mut self) -> Self {
        self.x_log = true;
        self
    }

    pub fn log_y(mut self) -> Self {
        self.y_log = true;
        self
    }
}

/// One panel of an experiment: a rectangular table with a units header and
/// the run parameters that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultTable {
    pub experiment: String,
    pub panel: String,
    pub title: String,
    pub columns: Vec<Column>,
    pub rows: Vec<Vec<Cell>>,
    pub params: Vec<(String, String)>,
    pub plot: PlotStyle,
}

impl ResultTable {
    pub fn new(
        experiment: &str,
        panel: &str,
        title: &str,
        columns: Vec<Column>,
        plot: PlotStyle,
    ) -> Self {
        ResultTable {
            experiment: experiment.to_string(),
            panel: panel.to_string(),
            title: title.to_string(),
            columns,
            rows: Vec::new(),
            params: Vec::new(),
            plot,
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(
            row.len(),
            self.columns.len(),
            "row width must match the header"
        );
        self.rows.push(row);
    }

    pub fn param(&mut self, key: &str, value: impl fmt::Display) {
        self.params.push((key.to_string(), value.to_string()));
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c.name == name)
    }

    pub fn column(&self, name: &str) -> Option<&Column> {
        self.columns.iter().find(|c| c.name == name)
    }

    /// Rows whose text column `key` equals `value`.
    pub fn rows_where<'a>(
        &'a self,
        key: &str,
        value: &'a str,
    ) -> impl Iterator<Item = &'a Vec<Cell>> + 'a {
        let idx = self.column_index(key);
        self.rows
            .iter()
            .filter(move |r| idx.is_some_and(|i| matches!(&r[i], Cell::Text(s) if s == value)))
    }

    /// Numeric value of column `name` in `row`.
    pub fn value(&self, row: &[Cell], name: &str) -> Option<f64> {
        self.column_index(name).and_then(|i| row[i].as_f64())
    }

    /// File stem used when writing this panel.
    pub fn file_stem(&self) -> &str {
        &self.panel
    }

    /// CSV text with `#` comment lines for the experiment, units and run
    /// parameters ahead of the header row.
    pub fn to_csv(&self) -> Result<String> {
        if self.columns.is_empty() {
            return Err(IrsError::EmptyTable);
        }
        let mut buf = Vec::new();
        writeln!(buf, "# experiment: {}", self.experiment)?;
        writeln!(buf, "# panel: {}", self.panel)?;
        writeln!(buf, "# title: {}", self.title)?;
        let units: Vec<String> = self
            .columns
            .iter()
            .map(|c| format!("{}={}", c.name, c.unit))
            .collect();
        writeln!(buf, "# units: {}", units.join(", "))?;
        for (k, v) in &self.params {
            writeln!(buf, "# param: {k}={v}")?;
        }
        let mut w = csv::Writer::from_writer(buf);
        w.write_record(self.columns.iter().map(|c| c.name.as_str()))?;
        for row in &self.rows {
            w.write_record(row.iter().map(|c| c.to_string()))?;
        }
        let buf = w.into_inner().map_err(|e| IrsError::Io(e.into_error()))?;
        Ok(String::from_utf8(buf).expect("csv output is utf-8"))
    }
}
