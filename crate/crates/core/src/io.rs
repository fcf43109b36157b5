//! CSV point files with a header row.

use std::io::{Read, Write};

use crate::error::{Error, Result};
use crate::geometry::RealPoint2;

/// Formats with 17 significant digits, enough to round-trip any `f64`.
pub fn format_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Reads two-column points. The header row is required and skipped; any
/// column names are accepted.
pub fn read_points<R: Read>(reader: R) -> Result<Vec<RealPoint2>> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).flexible(true).trim(csv::Trim::All).from_reader(reader);
    let mut out = Vec::new();
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec?;
        if rec.len() < 2 {
            return Err(Error::invalid(format!("row {}: expected 2 columns, found {}", line + 2, rec.len())));
        }
        let parse = |k: usize| -> Result<f64> {
            let s = &rec[k];
            let x: f64 = s.parse().map_err(|_| Error::invalid(format!("row {}: '{s}' is not a number", line + 2)))?;
            if x.is_finite() {
                Ok(x)
            } else {
                Err(Error::invalid(format!("row {}: non-finite value", line + 2)))
            }
        };
        out.push(RealPoint2::new(parse(0)?, parse(1)?));
    }
    Ok(out)
}

pub fn read_points_file(path: &std::path::Path) -> Result<Vec<RealPoint2>> {
    let f = std::fs::File::open(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    read_points(f)
}

/// Writes a header and numeric rows.
pub fn write_rows<W, I>(writer: W, header: &[&str], rows: I) -> Result<()>
where
    W: Write,
    I: IntoIterator<Item = Vec<f64>>,
{
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(header)?;
    for row in rows {
        if row.len() != header.len() {
            return Err(Error::invalid("row width does not match header"));
        }
        w.write_record(row.iter().map(|&x| format_f64(x)))?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_points<W: Write>(writer: W, header: [&str; 2], points: &[RealPoint2]) -> Result<()> {
    write_rows(writer, &header, points.iter().map(|p| vec![p.u, p.v]))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_exact() {
        let pts = vec![RealPoint2::new(0.1, -1.0 / 3.0), RealPoint2::new(1e-300, 12345.678)];
        let mut buf = Vec::new();
        write_points(&mut buf, ["u", "v"], &pts).unwrap();
        let back = read_points(buf.as_slice()).unwrap();
        assert_eq!(back, pts);
    }

    #[test]
    fn bad_rows() {
        assert!(read_points("u,v\n1,abc\n".as_bytes()).is_err());
        assert!(read_points("u,v\n1\n".as_bytes()).is_err());
        assert!(read_points("u,v\nNaN,1\n".as_bytes()).is_err());
        assert_eq!(read_points("re,im\n 1 , 2 \n".as_bytes()).unwrap(), vec![RealPoint2::new(1.0, 2.0)]);
    }
}
