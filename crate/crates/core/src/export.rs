//! Plain CSV output with fixed float formatting (17 significant digits),
//! so repeated runs give byte-identical files.

use std::io::Write;

use crate::error::Result;

/// `{:.16e}`: 17 significant digits, round-trips every f64.
pub fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

/// Writes a header line and one line per row.
pub fn write_csv<W: Write, const N: usize>(out: &mut W, header: [&str; N], rows: &[[f64; N]]) -> Result<()> {
    writeln!(out, "{}", header.join(","))?;
    let mut line = String::new();
    for row in rows {
        line.clear();
        for (k, v) in row.iter().enumerate() {
            if k > 0 {
                line.push(',');
            }
            line.push_str(&format_float(*v));
        }
        writeln!(out, "{line}")?;
    }
    Ok(())
}

/// CSV as a string.
pub fn csv_string<const N: usize>(header: [&str; N], rows: &[[f64; N]]) -> String {
    let mut buf = Vec::new();
    write_csv(&mut buf, header, rows).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("CSV output is ASCII")
}
