//! Plain-text point sets: one `x y` pair per line, `#` lines are comments.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::geometry::{Point, PointSet};

pub fn read_points<R: BufRead>(reader: R) -> Result<PointSet> {
    let mut points = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(Error::Parse {
                line: lineno,
                message: format!("expected 2 fields, found {}", fields.len()),
            });
        }
        let parse = |s: &str| {
            s.parse::<f64>().map_err(|e| Error::Parse {
                line: lineno,
                message: format!("{s:?}: {e}"),
            })
        };
        points.push(Point::new(parse(fields[0])?, parse(fields[1])?));
    }
    PointSet::new(points)
}

pub fn write_points<W: Write>(mut writer: W, ps: &PointSet) -> Result<()> {
    for p in ps.points() {
        writeln!(writer, "{} {}", p.x, p.y)?;
    }
    writer.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn skips_comments_and_parses() {
        let text = "# header comment\n0.5 0\n-0.25 0.125\n\n# trailing\n";
        let ps = read_points(text.as_bytes()).unwrap();
        assert_eq!(
            ps.points(),
            &[Point::new(0.5, 0.0), Point::new(-0.25, 0.125)]
        );
    }

    #[test]
    fn reports_line_numbers() {
        let err = read_points("0 0\n1 2 3\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        let err = read_points("0 zero\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
        let err = read_points("0 inf\n".as_bytes()).unwrap_err();
        assert_eq!(err, Error::NonFinite { index: 0 });
    }

    #[test]
    fn writes_shortest_round_trip_decimals() {
        let ps = PointSet::new(vec![Point::new(0.1, -1.0 / 3.0)]).unwrap();
        let mut buf = Vec::new();
        write_points(&mut buf, &ps).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, "0.1 -0.3333333333333333\n");
        assert_eq!(read_points(text.as_bytes()).unwrap(), ps);
    }
}
