//! Byte-stable CSV writing: 17 significant digits, '.' separator, LF endings.

use std::fmt::Write;

/// Scientific notation with 17 significant digits; negative zero prints as zero.
pub fn float(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.16e}")
}

pub fn opt_float(x: Option<f64>) -> String {
    x.map(float).unwrap_or_default()
}

#[derive(Debug, Default)]
pub struct Table {
    buf: String,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        let mut t = Table::default();
        t.row(header.iter().map(|s| s.to_string()));
        t
    }

    pub fn row(&mut self, cells: impl IntoIterator<Item = String>) {
        let line: Vec<String> = cells.into_iter().collect();
        self.buf.push_str(&line.join(","));
        self.buf.push('\n');
    }

    pub fn comment(&mut self, text: &str) {
        writeln!(self.buf, "# {text}").expect("writing to a String");
    }

    pub fn finish(self) -> String {
        self.buf
    }
}
