//! Feature matrix CSV: header `graph_id,class,<columns…>`, one graph per
//! line. Values use the shortest decimal form that parses back to the same
//! `f64`, so export followed by import is exact.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::{FeatureMatrix, FeatureVector};
use crate::error::{Error, Result};

pub fn write_csv(fm: &FeatureMatrix) -> Result<String> {
    let mut out = String::from("graph_id,class");
    for c in &fm.column_names {
        check_field(c)?;
        out.push(',');
        out.push_str(c);
    }
    out.push('\n');
    for (r, class) in fm.rows.iter().zip(&fm.classes) {
        check_field(&r.graph_id)?;
        let _ = write!(out, "{},{class}", r.graph_id);
        for v in &r.values {
            let _ = write!(out, ",{v:?}");
        }
        out.push('\n');
    }
    Ok(out)
}

pub fn export_csv(fm: &FeatureMatrix, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, write_csv(fm)?).map_err(|e| Error::io(path, e))
}

pub fn import_csv(path: impl AsRef<Path>) -> Result<FeatureMatrix> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut lines = text.lines().enumerate();
    let Some((_, header)) = lines.next() else {
        return Err(Error::format(path, Some(1), "missing header"));
    };
    let mut fields = header.split(',');
    if fields.next() != Some("graph_id") || fields.next() != Some("class") {
        return Err(Error::format(path, Some(1), "header must start with 'graph_id,class'"));
    }
    let column_names: Vec<String> = fields.map(str::to_string).collect();
    let mut rows = Vec::new();
    let mut classes = Vec::new();
    for (idx, line) in lines {
        let no = Some(idx + 1);
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != column_names.len() + 2 {
            return Err(Error::format(
                path,
                no,
                format!("expected {} fields, found {}", column_names.len() + 2, fields.len()),
            ));
        }
        let class = fields[1]
            .parse()
            .map_err(|_| Error::format(path, no, format!("bad class '{}'", fields[1])))?;
        let values = fields[2..]
            .iter()
            .map(|f| match f.parse::<f64>() {
                Ok(v) if v.is_finite() => Ok(v),
                _ => Err(Error::format(path, no, format!("bad value '{f}'"))),
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(FeatureVector {
            graph_id: fields[0].to_string(),
            values,
            degenerate: Default::default(),
        });
        classes.push(class);
    }
    FeatureMatrix::new(column_names, rows, classes)
}

fn check_field(s: &str) -> Result<()> {
    if s.contains([',', '\n', '\r', '"']) {
        return Err(Error::Argument(format!("'{s}' cannot be written as a CSV field")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> FeatureMatrix {
        let rows = vec![
            FeatureVector {
                graph_id: "a".into(),
                values: vec![0.1 + 0.2, -1e-300, 1.0 / 3.0],
                degenerate: Default::default(),
            },
            FeatureVector {
                graph_id: "b".into(),
                values: vec![0.0, 5e-324, f64::MAX],
                degenerate: Default::default(),
            },
        ];
        FeatureMatrix::new(vec!["x@0".into(), "x@1".into(), "num_nodes".into()], rows, vec![1, 0]).unwrap()
    }

    #[test]
    fn round_trip_is_bit_exact() {
        let tmp = tempfile::tempdir().unwrap();
        let p = tmp.path().join("f.csv");
        let fm = sample();
        export_csv(&fm, &p).unwrap();
        let back = import_csv(&p).unwrap();
        assert_eq!(back, fm);
        for (a, b) in back.rows.iter().zip(&fm.rows) {
            for (x, y) in a.values.iter().zip(&b.values) {
                assert_eq!(x.to_bits(), y.to_bits());
            }
        }
    }

    #[test]
    fn empty_matrix_is_header_only() {
        let fm = FeatureMatrix::new(vec!["deg@0".into()], vec![], vec![]).unwrap();
        assert_eq!(write_csv(&fm).unwrap(), "graph_id,class,deg@0\n");
    }

    #[test]
    fn malformed_rows_rejected() {
        let tmp = tempfile::tempdir().unwrap();
        let p = tmp.path().join("f.csv");
        for body in [
            "",
            "id,class,x\n",
            "graph_id,class,x\na,0\n",
            "graph_id,class,x\na,zero,1\n",
            "graph_id,class,x\na,0,NaN\n",
        ] {
            fs::write(&p, body).unwrap();
            assert!(matches!(import_csv(&p), Err(Error::Format { .. })), "{body:?}");
        }
    }
}
