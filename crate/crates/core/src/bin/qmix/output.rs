use serde::Serialize;

use crate::Format;

/// `x` rounded to 6 significant digits, trailing zeros removed.
pub fn sig6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    if (-4..6).contains(&exp) {
        let s = format!("{:.*}", (5 - exp).max(0) as usize, x);
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        format!("{x:.5e}")
    }
}

/// A report row printable in each output format.
pub trait Record: Serialize {
    const HEADER: &'static [&'static str];
    fn csv_fields(&self) -> Vec<String>;
    fn text(&self) -> String;
}

/// Print rows: one text line each, one JSON object per line, or CSV with a
/// header line.
pub fn emit<R: Record>(rows: &[R], format: Format) -> qmix::Result<()> {
    match format {
        Format::Text => {
            for r in rows {
                println!("{}", r.text());
            }
        }
        Format::Json => {
            for r in rows {
                println!("{}", serde_json::to_string(r)?);
            }
        }
        Format::Csv => {
            println!("{}", R::HEADER.join(","));
            for r in rows {
                println!("{}", r.csv_fields().join(","));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn six_significant_digits() {
        assert_eq!(sig6(0.032), "0.032");
        assert_eq!(sig6(1.0366146496), "1.03661");
        assert_eq!(sig6(123456.7), "123457");
        assert_eq!(sig6(1234567.0), "1.23457e6");
        assert_eq!(sig6(60.0), "60");
        assert_eq!(sig6(1.234e-9), "1.23400e-9");
        assert_eq!(sig6(-0.5), "-0.5");
        assert_eq!(sig6(0.0), "0");
    }
}
