//! Flat records and their json/csv/md/latex/plain renderings.

use serde_json::{json, Map, Value};

use crate::exact::{format_rational, Rational};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Md,
    Latex,
    Plain,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Text(String),
    Rat(Rational),
    Bool(bool),
    Int(i64),
    List(Vec<String>),
    Null,
}

impl Cell {
    pub fn text(&self) -> String {
        match self {
            Cell::Text(s) => s.clone(),
            Cell::Rat(r) => format_rational(r),
            Cell::Bool(b) => b.to_string(),
            Cell::Int(i) => i.to_string(),
            Cell::List(v) => v.join(";"),
            Cell::Null => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Text(s) => json!(s),
            Cell::Rat(r) => json!(format_rational(r)),
            Cell::Bool(b) => json!(b),
            Cell::Int(i) => json!(i),
            Cell::List(v) => json!(v),
            Cell::Null => Value::Null,
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

impl From<Rational> for Cell {
    fn from(r: Rational) -> Self {
        Cell::Rat(r)
    }
}

impl From<&Rational> for Cell {
    fn from(r: &Rational) -> Self {
        Cell::Rat(r.clone())
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Bool(b)
    }
}

impl From<u32> for Cell {
    fn from(i: u32) -> Self {
        Cell::Int(i as i64)
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(x: Option<T>) -> Self {
        x.map_or(Cell::Null, Into::into)
    }
}

/// An ordered list of named cells.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Record(pub Vec<(&'static str, Cell)>);

impl Record {
    pub fn new() -> Self {
        Record(Vec::new())
    }

    pub fn with(mut self, key: &'static str, value: impl Into<Cell>) -> Self {
        self.0.push((key, value.into()));
        self
    }

    pub fn get(&self, key: &str) -> Option<&Cell> {
        self.0.iter().find(|(k, _)| *k == key).map(|(_, v)| v)
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        for (k, v) in &self.0 {
            m.insert((*k).to_string(), v.json());
        }
        Value::Object(m)
    }
}

/// `{"schema_version": 1, "records": [...]}` plus optional extra top-level fields.
pub fn json_document(records: &[Record], extra: Vec<(&str, Value)>) -> String {
    let mut m = Map::new();
    m.insert("schema_version".into(), json!(SCHEMA_VERSION));
    m.insert("records".into(), Value::Array(records.iter().map(Record::to_json).collect()));
    for (k, v) in extra {
        m.insert(k.to_string(), v);
    }
    serde_json::to_string_pretty(&Value::Object(m)).expect("serializable") + "\n"
}

fn header(records: &[Record]) -> Vec<&'static str> {
    records.first().map(|r| r.0.iter().map(|(k, _)| *k).collect()).unwrap_or_default()
}

pub fn csv(records: &[Record]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let h = header(records);
    if !h.is_empty() {
        w.write_record(&h).expect("in-memory write");
    }
    for r in records {
        w.write_record(r.0.iter().map(|(_, v)| v.text())).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
}

pub fn markdown(records: &[Record]) -> String {
    let h = header(records);
    let mut out = format!("| {} |\n|{}\n", h.join(" | "), "---|".repeat(h.len()));
    for r in records {
        let cells: Vec<String> = r.0.iter().map(|(_, v)| v.text().replace('|', "\\|")).collect();
        out += &format!("| {} |\n", cells.join(" | "));
    }
    out
}

/// `A₂` → `$A_{2}$`, plus a few symbols used in labels.
pub fn latex_text(s: &str) -> String {
    let mut out = String::new();
    let mut sub = String::new();
    let flush = |out: &mut String, sub: &mut String| {
        if !sub.is_empty() {
            out.push_str(&format!("$_{{{sub}}}$"));
            sub.clear();
        }
    };
    for ch in s.chars() {
        if let Some(d) = "₀₁₂₃₄₅₆₇₈₉".chars().position(|c| c == ch) {
            sub.push(char::from(b'0' + d as u8));
            continue;
        }
        flush(&mut out, &mut sub);
        match ch {
            '⊂' => out.push_str("$\\subset$"),
            '≥' => out.push_str("$\\geq$"),
            '−' => out.push('-'),
            '&' | '%' | '_' | '#' => {
                out.push('\\');
                out.push(ch);
            }
            c => out.push(c),
        }
    }
    flush(&mut out, &mut sub);
    out.replace("$$", "")
}

pub fn latex(records: &[Record], math_columns: &[&str]) -> String {
    let h = header(records);
    let mut out = format!("\\begin{{tabular}}{{{}}}\n\\hline\n", "l".repeat(h.len()));
    out += &(h.iter().map(|k| latex_text(k)).collect::<Vec<_>>().join(" & ") + " \\\\\n\\hline\n");
    for r in records {
        let cells: Vec<String> = r
            .0
            .iter()
            .map(|(k, v)| if math_columns.contains(k) { format!("${}$", v.text()) } else { latex_text(&v.text()) })
            .collect();
        out += &(cells.join(" & ") + " \\\\\n");
    }
    out + "\\hline\n\\end{tabular}\n"
}

/// Space-aligned columns.
pub fn plain(records: &[Record]) -> String {
    let h = header(records);
    let rows: Vec<Vec<String>> = records.iter().map(|r| r.0.iter().map(|(_, v)| v.text()).collect()).collect();
    let width = |i: usize| {
        rows.iter().map(|r| r[i].chars().count()).chain([h[i].chars().count()]).max().unwrap_or(0)
    };
    let widths: Vec<usize> = (0..h.len()).map(width).collect();
    let line = |cells: Vec<String>| {
        let padded: Vec<String> =
            cells.iter().enumerate().map(|(i, c)| format!("{c}{}", " ".repeat(widths[i] - c.chars().count()))).collect();
        padded.join("  ").trim_end().to_string() + "\n"
    };
    let mut out = line(h.iter().map(|s| s.to_string()).collect());
    for r in rows {
        out += &line(r);
    }
    out
}

pub fn render(records: &[Record], format: Format, math_columns: &[&str]) -> String {
    match format {
        Format::Json => json_document(records, vec![]),
        Format::Csv => csv(records),
        Format::Md => markdown(records),
        Format::Latex => latex(records, math_columns),
        Format::Plain => plain(records),
    }
}
