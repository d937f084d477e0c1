//! Deterministic JSON and CSV emission: 17 significant digits for every
//! number, fixed field order, no timestamps, so identical runs produce
//! byte-identical files.

/// 17 significant digits; round-trips any `f64` losslessly.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
            c => out.push(c),
        }
    }
    out
}

/// Ordered JSON object builder.
pub struct JsonObj {
    buf: String,
    first: bool,
}

impl JsonObj {
    pub fn new() -> Self {
        JsonObj { buf: String::from("{"), first: true }
    }

    fn key(&mut self, key: &str) {
        if !self.first {
            self.buf.push(',');
        }
        self.first = false;
        self.buf.push('"');
        self.buf.push_str(&escape(key));
        self.buf.push_str("\":");
    }

    pub fn num(mut self, key: &str, v: f64) -> Self {
        self.key(key);
        self.buf.push_str(&fmt17(v));
        self
    }

    pub fn uint(mut self, key: &str, v: u64) -> Self {
        self.key(key);
        self.buf.push_str(&v.to_string());
        self
    }

    pub fn boolean(mut self, key: &str, v: bool) -> Self {
        self.key(key);
        self.buf.push_str(if v { "true" } else { "false" });
        self
    }

    pub fn string(mut self, key: &str, v: &str) -> Self {
        self.key(key);
        self.buf.push('"');
        self.buf.push_str(&escape(v));
        self.buf.push('"');
        self
    }

    /// Insert a pre-rendered JSON value (object or array).
    pub fn raw(mut self, key: &str, v: &str) -> Self {
        self.key(key);
        self.buf.push_str(v);
        self
    }

    pub fn finish(mut self) -> String {
        self.buf.push('}');
        self.buf
    }
}

/// JSON array builder for pre-rendered elements.
pub struct JsonArr {
    buf: String,
    first: bool,
}

impl JsonArr {
    pub fn new() -> Self {
        JsonArr { buf: String::from("["), first: true }
    }

    pub fn push_raw(&mut self, v: &str) {
        if !self.first {
            self.buf.push(',');
        }
        self.first = false;
        self.buf.push_str(v);
    }

    pub fn finish(mut self) -> String {
        self.buf.push(']');
        self.buf
    }
}

/// CSV with `#`-prefixed metadata comments, '.' decimal separator, no
/// thousands separators.
pub struct Csv {
    buf: String,
}

impl Csv {
    pub fn new() -> Self {
        Csv { buf: String::new() }
    }

    pub fn comment(&mut self, text: &str) {
        self.buf.push_str("# ");
        self.buf.push_str(text);
        self.buf.push('\n');
    }

    pub fn header(&mut self, cols: &[&str]) {
        self.buf.push_str(&cols.join(","));
        self.buf.push('\n');
    }

    pub fn row(&mut self, vals: &[f64]) {
        let cells: Vec<String> = vals.iter().map(|&v| fmt17(v)).collect();
        self.buf.push_str(&cells.join(","));
        self.buf.push('\n');
    }

    pub fn row_cells(&mut self, cells: &[String]) {
        self.buf.push_str(&cells.join(","));
        self.buf.push('\n');
    }

    pub fn finish(self) -> String {
        self.buf
    }
}
