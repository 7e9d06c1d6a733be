use std::fmt::Write as _;
use std::str::FromStr;

use serde_json::{json, Value};

use crate::number::format_number;
use crate::{json as js, ExportError};

/// One table cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Text(String),
    Int(i64),
    Num(f64),
    /// Undefined value; an empty CSV field.
    Missing,
}

impl Cell {
    pub fn render(&self) -> String {
        match self {
            Cell::Text(s) => s.clone(),
            Cell::Int(i) => i.to_string(),
            Cell::Num(x) => format_number(*x),
            Cell::Missing => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Text(s) => json!(s),
            Cell::Int(i) => json!(i),
            Cell::Num(x) => js::number(*x),
            Cell::Missing => Value::Null,
        }
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

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Cell::Missing, Cell::Num)
    }
}

impl From<usize> for Cell {
    fn from(n: usize) -> Self {
        Cell::Int(n as i64)
    }
}

impl From<u64> for Cell {
    fn from(n: u64) -> Self {
        Cell::Int(n as i64)
    }
}

impl From<u32> for Cell {
    fn from(n: u32) -> Self {
        Cell::Int(i64::from(n))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Latex,
    Json,
}

impl FromStr for Format {
    type Err = ExportError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "latex" | "tex" => Ok(Format::Latex),
            "json" => Ok(Format::Json),
            _ => Err(ExportError::UnknownFormat(s.to_string())),
        }
    }
}

/// A rectangular table with a caption.
#[derive(Debug, Clone, PartialEq)]
pub struct TableDocument {
    pub caption: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl TableDocument {
    pub fn new<S: Into<String>>(caption: impl Into<String>, header: impl IntoIterator<Item = S>) -> Self {
        Self {
            caption: caption.into(),
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    /// Appends a row.
    ///
    /// # Panics
    ///
    /// If the row length differs from the header length.
    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.header.len(), "row length must match header");
        self.rows.push(row);
    }

    /// Checks that every row matches the header length.
    pub fn validate(&self) -> Result<(), ExportError> {
        match self.rows.iter().position(|r| r.len() != self.header.len()) {
            Some(row) => Err(ExportError::NotRectangular {
                row,
                expected: self.header.len(),
                actual: self.rows[row].len(),
            }),
            None => Ok(()),
        }
    }

    pub fn render(&self, format: Format) -> Result<String, ExportError> {
        match format {
            Format::Csv => self.to_csv(),
            Format::Latex => self.to_latex(),
            Format::Json => {
                self.validate()?;
                Ok(format!("{}\n", serde_json::to_string_pretty(&self.to_json())?))
            }
        }
    }

    /// Comma separated, header first, fields quoted only when needed.
    pub fn to_csv(&self) -> Result<String, ExportError> {
        self.validate()?;
        let mut w = csv::WriterBuilder::new()
            .quote_style(csv::QuoteStyle::Necessary)
            .from_writer(Vec::new());
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render))?;
        }
        let bytes = w.into_inner().map_err(|e| ExportError::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    /// `tabular` with booktabs rules inside a `table` float.
    pub fn to_latex(&self) -> Result<String, ExportError> {
        self.validate()?;
        let align: String = (0..self.header.len())
            .map(|j| {
                if self.rows.iter().any(|r| matches!(r[j], Cell::Text(_))) {
                    'l'
                } else {
                    'r'
                }
            })
            .collect();
        let line = |cells: Vec<String>| format!("{} \\\\\n", cells.join(" & "));
        let mut out = String::new();
        out.push_str("\\begin{table}[ht]\n\\centering\n");
        if !self.caption.is_empty() {
            let _ = writeln!(out, "\\caption{{{}}}", latex_escape(&self.caption));
        }
        let _ = writeln!(out, "\\begin{{tabular}}{{{align}}}");
        out.push_str("\\toprule\n");
        out.push_str(&line(self.header.iter().map(|h| latex_escape(h)).collect()));
        out.push_str("\\midrule\n");
        for row in &self.rows {
            out.push_str(&line(row.iter().map(|c| latex_escape(&c.render())).collect()));
        }
        out.push_str("\\bottomrule\n\\end{tabular}\n\\end{table}\n");
        Ok(out)
    }

    /// `{caption, header, rows}` with numbers as JSON numbers, infinities as
    /// `"Inf"` and undefined cells as `null`.
    pub fn to_json(&self) -> Value {
        json!({
            "caption": self.caption,
            "header": self.header,
            "rows": self
                .rows
                .iter()
                .map(|r| r.iter().map(Cell::json).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        })
    }
}

pub fn latex_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '\\' => out.push_str("\\textbackslash{}"),
            '&' | '%' | '$' | '#' | '_' | '{' | '}' => {
                out.push('\\');
                out.push(c);
            }
            '~' => out.push_str("\\textasciitilde{}"),
            '^' => out.push_str("\\textasciicircum{}"),
            _ => out.push(c),
        }
    }
    out
}
