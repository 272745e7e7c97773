//! Deterministic table rendering and numeric formatting.

use varsolve_core::{rat, ParamPoint, Rational};

/// Output format for tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    /// Aligned, human-readable columns.
    Table,
    /// Tab-separated values with the same cell content.
    Tsv,
}

/// A rectangular table; cells never contain tabs or runs of two spaces, so
/// the table and TSV renderings carry identical content.
pub struct Table {
    headers: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(headers: impl IntoIterator<Item = S>) -> Self {
        Table {
            headers: headers.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn row<S: Into<String>>(&mut self, cells: impl IntoIterator<Item = S>) {
        let cells: Vec<String> = cells.into_iter().map(Into::into).collect();
        debug_assert_eq!(cells.len(), self.headers.len());
        debug_assert!(cells.iter().all(|c| !c.contains('\t') && !c.contains("  ")));
        self.rows.push(cells);
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Tsv => {
                let mut out = String::new();
                out.push_str(&self.headers.join("\t"));
                out.push('\n');
                for row in &self.rows {
                    out.push_str(&row.join("\t"));
                    out.push('\n');
                }
                out
            }
            Format::Table => {
                let mut widths: Vec<usize> =
                    self.headers.iter().map(String::len).collect();
                for row in &self.rows {
                    for (width, cell) in widths.iter_mut().zip(row) {
                        *width = (*width).max(cell.len());
                    }
                }
                let mut out = String::new();
                let mut write_row = |cells: &[String]| {
                    let mut line = String::new();
                    for (i, cell) in cells.iter().enumerate() {
                        if i > 0 {
                            line.push_str("  ");
                        }
                        line.push_str(cell);
                        if i + 1 < cells.len() {
                            for _ in cell.len()..widths[i] {
                                line.push(' ');
                            }
                        }
                    }
                    out.push_str(line.trim_end());
                    out.push('\n');
                };
                write_row(&self.headers);
                for row in &self.rows {
                    write_row(row);
                }
                out
            }
        }
    }
}

/// Formats a float with 12 significant digits, trimming trailing zeros.
pub fn fmt_decimal(value: f64) -> String {
    if !value.is_finite() {
        return value.to_string();
    }
    if value == 0.0 {
        return "0".to_string();
    }
    let scientific = format!("{value:.11e}");
    let (mantissa, exponent) = scientific.split_once('e').expect("e-notation");
    let exponent: i32 = exponent.parse().expect("exponent");
    if !(-9..=17).contains(&exponent) {
        return scientific;
    }
    let negative = mantissa.starts_with('-');
    let digits: String = mantissa.chars().filter(char::is_ascii_digit).collect();
    let point = exponent + 1; // digits before the decimal point

    let mut out = String::new();
    if negative {
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
    if out.contains('.') {
        while out.ends_with('0') {
            out.pop();
        }
        if out.ends_with('.') {
            out.pop();
        }
    }
    out
}

/// Formats a rational exactly as `a/b`, or as a 12-digit decimal.
pub fn fmt_rational(value: &Rational, decimal: bool) -> String {
    if decimal {
        fmt_decimal(varsolve_core::rational::to_f64(value))
    } else {
        value.to_string()
    }
}

/// Space-separated payoff vector, e.g. `1 0`.
pub fn fmt_payoffs(payoffs: &[Rational], decimal: bool) -> String {
    payoffs
        .iter()
        .map(|p| fmt_rational(p, decimal))
        .collect::<Vec<_>>()
        .join(" ")
}

/// Compact `(p,r)=(1,0)` rendering of the given parameters of a point.
pub fn fmt_point(point: &ParamPoint, params: &[String], decimal: bool) -> String {
    let shown: Vec<&String> = params.iter().filter(|p| point.contains(p)).collect();
    if shown.is_empty() {
        return "()".to_string();
    }
    let names: Vec<&str> = shown.iter().map(|p| p.as_str()).collect();
    let values: Vec<String> = shown
        .iter()
        .map(|p| fmt_rational(point.get(p).unwrap(), decimal))
        .collect();
    format!("({})=({})", names.join(","), values.join(","))
}

/// `(x,y)=(1,0)` rendering of an outcome.
pub fn fmt_outcome(game: &varsolve_core::OutcomeGame, outcome: &varsolve_core::Outcome) -> String {
    let names: Vec<&str> = game.variables().iter().map(|v| v.name.as_str()).collect();
    let bits: Vec<String> = outcome.bits().iter().map(u8::to_string).collect();
    format!("({})=({})", names.join(","), bits.join(","))
}

/// True when every listed parameter of the point equals 0 or 1.
pub fn is_zero_one(point: &ParamPoint, param: &str) -> bool {
    matches!(point.get(param), Some(v) if *v == rat(0) || *v == rat(1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use varsolve_core::ratio;

    #[test]
    fn decimal_formatting_significant_digits() {
        assert_eq!(fmt_decimal(0.5), "0.5");
        assert_eq!(fmt_decimal(-1.0), "-1");
        assert_eq!(fmt_decimal(0.0), "0");
        assert_eq!(fmt_decimal(1.0 / 3.0), "0.333333333333");
        assert_eq!(fmt_decimal(1234.5), "1234.5");
        assert_eq!(fmt_decimal(1e-4), "0.0001");
    }

    #[test]
    fn rational_formatting() {
        assert_eq!(fmt_rational(&ratio(-3, 4), false), "-3/4");
        assert_eq!(fmt_rational(&ratio(-3, 4), true), "-0.75");
        assert_eq!(fmt_rational(&rat(7), false), "7");
    }

    #[test]
    fn table_and_tsv_share_cells() {
        let mut table = Table::new(["a", "b"]);
        table.row(["x", "long cell"]);
        table.row(["longer", "y"]);
        let plain = table.render(Format::Table);
        let tsv = table.render(Format::Tsv);
        assert_eq!(plain, "a       b\nx       long cell\nlonger  y\n");
        assert_eq!(tsv, "a\tb\nx\tlong cell\nlonger\ty\n");
    }

    #[test]
    fn point_formatting_filters_parameters() {
        let point = ParamPoint::vertex([("p", 1u8), ("q", 0), ("r", 0)]);
        assert_eq!(
            fmt_point(&point, &["p".into(), "r".into()], false),
            "(p,r)=(1,0)"
        );
    }
}
