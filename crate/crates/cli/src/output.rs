//! Deterministic table output: fixed float formatting (shortest
//! representation that round-trips at 12 significant digits) and atomic
//! file writes (temp file + rename in the target directory).

use anyhow::{Context, Result};
use std::io::Write;
use std::path::Path;

/// Shortest decimal form of `x` that reproduces its value rounded to 12
/// significant digits; plain notation for moderate exponents, otherwise
/// scientific.
pub fn fmt_float(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let target = format!("{:.11e}", x);
    for prec in 0..=11usize {
        let cand = format!("{:.*e}", prec, x);
        let parsed: f64 = cand.parse().expect("formatter emits valid floats");
        if format!("{:.11e}", parsed) == target {
            return from_exp(&cand);
        }
    }
    from_exp(&target)
}

fn from_exp(s: &str) -> String {
    let (mant, exp) = s.split_once('e').expect("exponential form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..=15).contains(&exp) {
        return s.to_string();
    }
    let neg = mant.starts_with('-');
    let digits: String = mant
        .trim_start_matches('-')
        .chars()
        .filter(|c| *c != '.')
        .collect();
    let point = 1 + exp as isize;
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    if point <= 0 {
        out.push_str("0.");
        for _ in 0..(-point) {
            out.push('0');
        }
        out.push_str(&digits);
    } else if point as usize >= digits.len() {
        out.push_str(&digits);
        for _ in 0..(point as usize - digits.len()) {
            out.push('0');
        }
    } else {
        out.push_str(&digits[..point as usize]);
        out.push('.');
        out.push_str(&digits[point as usize..]);
    }
    out
}

/// Write `content` to `path` atomically, or to stdout when `path` is None.
pub fn write_output(path: Option<&Path>, content: &str) -> Result<()> {
    match path {
        None => {
            print!("{content}");
            Ok(())
        }
        Some(path) => {
            let dir = path.parent().filter(|p| !p.as_os_str().is_empty());
            let mut tmp = match dir {
                Some(d) => tempfile::NamedTempFile::new_in(d),
                None => tempfile::NamedTempFile::new_in("."),
            }
            .context("creating temporary file for atomic write")?;
            tmp.write_all(content.as_bytes())
                .context("writing table")?;
            tmp.persist(path)
                .with_context(|| format!("renaming into {}", path.display()))?;
            Ok(())
        }
    }
}

/// CSV assembly with a fixed header; floats go through [`fmt_float`].
pub struct CsvTable {
    out: String,
}

impl CsvTable {
    pub fn new(header: &str) -> Self {
        let mut out = String::new();
        out.push_str(header);
        out.push('\n');
        CsvTable { out }
    }

    pub fn row(&mut self, fields: &[CsvField]) {
        let mut first = true;
        for f in fields {
            if !first {
                self.out.push(',');
            }
            first = false;
            match f {
                CsvField::Float(x) => self.out.push_str(&fmt_float(*x)),
                CsvField::Int(i) => self.out.push_str(&i.to_string()),
            }
        }
        self.out.push('\n');
    }

    pub fn finish(self) -> String {
        self.out
    }
}

pub enum CsvField {
    Float(f64),
    Int(i64),
}
