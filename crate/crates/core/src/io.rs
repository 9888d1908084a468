//! CSV and JSON formats.
//!
//! * signals: header `x,re,im` (the `im` column is optional on input);
//! * spectra: a `# origin=<x0>` line, then `lambda,re,im`;
//! * fields: a `# a_min=<a>,ratio=<r>,count=<n>[,p=<p>]` line, then
//!   `a,b,re,im` with `a` varying slowest;
//! * point masses: a JSON array of `{lambda_re, lambda_im, a, b}`;
//! * Carleson masses: a JSON array of `{weight, a, b}` with `a` the height.
//!
//! Floats are written with 17 significant digits.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::contravariant::PointMassField;
use crate::error::{Error, Result};
use crate::field::{HalfPlaneField, LogAxis};
use crate::group::GroupElement;
use crate::signal::{RealGrid, Signal, SpectralSignal};

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// Leading `# k=v,k=v` lines and the remaining text.
fn split_meta(text: &str) -> (Vec<(String, String)>, &str) {
    let mut meta = Vec::new();
    let mut rest = text;
    while let Some(line) = rest.strip_prefix('#') {
        let (line, tail) = line.split_once('\n').unwrap_or((line, ""));
        for kv in line.split(',') {
            if let Some((k, v)) = kv.split_once('=') {
                meta.push((k.trim().to_string(), v.trim().to_string()));
            }
        }
        rest = tail;
    }
    (meta, rest)
}

fn meta_f64(meta: &[(String, String)], key: &str) -> Result<Option<f64>> {
    match meta.iter().find(|(k, _)| k == key) {
        None => Ok(None),
        Some((_, v)) => v
            .parse::<f64>()
            .map(Some)
            .map_err(|_| Error::Parse(format!("metadata `{key}`: not a number: {v}"))),
    }
}

fn parse_f64(s: &str, row: usize) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| Error::Parse(format!("row {row}: not a number: {s:?}")))
}

/// Rows of numbers with a named header.
fn read_table(text: &str, expected: &[&[&str]]) -> Result<(usize, Vec<Vec<f64>>)> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .flexible(false)
        .from_reader(text.as_bytes());
    let header: Vec<String> = rdr.headers()?.iter().map(|h| h.to_ascii_lowercase()).collect();
    let Some(cols) = expected.iter().find(|e| e.len() == header.len() && e.iter().zip(&header).all(|(a, b)| a == b)) else {
        let want: Vec<String> = expected.iter().map(|e| e.join(",")).collect();
        return Err(Error::Parse(format!("header `{}`, expected one of: {}", header.join(","), want.join(" | "))));
    };
    let mut rows = Vec::new();
    for (k, rec) in rdr.records().enumerate() {
        let rec = rec?;
        rows.push(rec.iter().map(|s| parse_f64(s, k + 1)).collect::<Result<Vec<f64>>>()?);
    }
    Ok((cols.len(), rows))
}

/// A uniform grid through the given points.
fn infer_grid(xs: &[f64]) -> Result<RealGrid> {
    if xs.len() < 2 {
        return Err(Error::Parse(format!("need at least 2 samples, got {}", xs.len())));
    }
    let n = xs.len();
    let dx = (xs[n - 1] - xs[0]) / (n - 1) as f64;
    let tol = 1e-6 * dx.abs();
    for (k, &x) in xs.iter().enumerate() {
        if (x - (xs[0] + k as f64 * dx)).abs() > tol {
            return Err(Error::Parse(format!("sample {} at {x} is off the uniform grid", k + 1)));
        }
    }
    RealGrid::new(xs[0], dx, n)
}

fn complex(row: &[f64], at: usize) -> C64 {
    C64::new(row[at], row.get(at + 1).copied().unwrap_or(0.0))
}

pub fn write_signal<W: Write>(f: &Signal, w: W) -> Result<()> {
    let mut w = BufWriter::new(w);
    writeln!(w, "x,re,im")?;
    for (x, v) in f.grid().points().zip(f.values()) {
        writeln!(w, "{},{},{}", num(x), num(v.re), num(v.im))?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_signal<R: Read>(mut r: R) -> Result<Signal> {
    let mut text = String::new();
    r.read_to_string(&mut text)?;
    let (_, rows) = read_table(&text, &[&["x", "re", "im"], &["x", "re"]])?;
    let xs: Vec<f64> = rows.iter().map(|r| r[0]).collect();
    let grid = infer_grid(&xs)?;
    Signal::new(grid, rows.iter().map(|r| complex(r, 1)).collect())
}

pub fn write_spectral<W: Write>(s: &SpectralSignal, w: W) -> Result<()> {
    let mut w = BufWriter::new(w);
    writeln!(w, "# origin={}", num(s.origin()))?;
    writeln!(w, "lambda,re,im")?;
    for (k, v) in s.values().iter().enumerate() {
        writeln!(w, "{},{},{}", num(s.lambda(k)), num(v.re), num(v.im))?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_spectral<R: Read>(mut r: R) -> Result<SpectralSignal> {
    let mut text = String::new();
    r.read_to_string(&mut text)?;
    let (meta, body) = split_meta(&text);
    let origin = meta_f64(&meta, "origin")?.ok_or_else(|| Error::Parse("missing `# origin=` line".into()))?;
    let (_, rows) = read_table(body, &[&["lambda", "re", "im"], &["lambda", "re"]])?;
    let grid = infer_grid(&rows.iter().map(|r| r[0]).collect::<Vec<_>>())?;
    SpectralSignal::new(grid, origin, rows.iter().map(|r| complex(r, 1)).collect())
}

pub fn write_field<W: Write>(u: &HalfPlaneField, w: W) -> Result<()> {
    let mut w = BufWriter::new(w);
    let ax = u.a_axis();
    write!(w, "# a_min={},ratio={},count={}", num(ax.a_min()), num(ax.ratio()), ax.count())?;
    if let Some(p) = u.p() {
        write!(w, ",p={}", if p.is_infinite() { "inf".to_string() } else { num(p) })?;
    }
    writeln!(w)?;
    writeln!(w, "a,b,re,im")?;
    let bg = u.b_grid();
    for i in 0..ax.count() {
        let a = num(ax.a(i));
        for (j, v) in u.row(i).iter().enumerate() {
            writeln!(w, "{a},{},{},{}", num(bg.x(j)), num(v.re), num(v.im))?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn read_field<R: Read>(mut r: R) -> Result<HalfPlaneField> {
    let mut text = String::new();
    r.read_to_string(&mut text)?;
    let (meta, body) = split_meta(&text);
    let need = |k: &str| meta_f64(&meta, k)?.ok_or_else(|| Error::Parse(format!("missing field metadata `{k}`")));
    let (a_min, ratio, count) = (need("a_min")?, need("ratio")?, need("count")?);
    if count < 1.0 || count.fract() != 0.0 {
        return Err(Error::Parse(format!("count must be a positive integer, got {count}")));
    }
    let axis = LogAxis::new(a_min, ratio, count as usize)?;
    let p = match meta.iter().find(|(k, _)| k == "p") {
        None => None,
        Some((_, v)) if v == "inf" => Some(f64::INFINITY),
        Some(_) => meta_f64(&meta, "p")?,
    };
    let (_, rows) = read_table(body, &[&["a", "b", "re", "im"], &["a", "b", "re"]])?;
    let na = axis.count();
    if rows.is_empty() || rows.len() % na != 0 {
        return Err(Error::Parse(format!("{} rows do not fill {na} scale levels", rows.len())));
    }
    let nb = rows.len() / na;
    let grid = infer_grid(&rows[..nb].iter().map(|r| r[1]).collect::<Vec<_>>())?;
    for (k, row) in rows.iter().enumerate() {
        let (i, j) = (k / nb, k % nb);
        let (a, b) = (axis.a(i), grid.x(j));
        if (row[0] - a).abs() > 1e-9 * a || (row[1] - b).abs() > 1e-6 * grid.dx() {
            return Err(Error::Parse(format!("row {}: ({}, {}) is not grid point ({a}, {b})", k + 1, row[0], row[1])));
        }
    }
    let field = HalfPlaneField::new(axis, grid, rows.iter().map(|r| complex(r, 2)).collect())?;
    Ok(match p {
        Some(p) => field.with_p(p),
        None => field,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
struct MassRecord {
    lambda_re: f64,
    lambda_im: f64,
    a: f64,
    b: f64,
}

pub fn read_point_masses<R: Read>(r: R) -> Result<PointMassField> {
    let recs: Vec<MassRecord> = serde_json::from_reader(r)?;
    let masses = recs
        .iter()
        .map(|m| Ok((C64::new(m.lambda_re, m.lambda_im), GroupElement::new(m.a, m.b)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(PointMassField::new(masses))
}

pub fn write_point_masses<W: Write>(field: &PointMassField, w: W) -> Result<()> {
    let recs: Vec<MassRecord> = field
        .masses
        .iter()
        .map(|(l, g)| MassRecord {
            lambda_re: l.re,
            lambda_im: l.im,
            a: g.a(),
            b: g.b(),
        })
        .collect();
    serde_json::to_writer_pretty(w, &recs)?;
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
struct CarlesonMass {
    weight: f64,
    a: f64,
    b: f64,
}

/// `(weight, height, position)` triples.
pub fn read_carleson_masses<R: Read>(r: R) -> Result<Vec<(f64, f64, f64)>> {
    let recs: Vec<CarlesonMass> = serde_json::from_reader(r)?;
    Ok(recs.iter().map(|m| (m.weight, m.a, m.b)).collect())
}

pub fn open(path: impl AsRef<Path>) -> Result<BufReader<File>> {
    let path = path.as_ref();
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

pub fn create(path: impl AsRef<Path>) -> Result<File> {
    let path = path.as_ref();
    File::create(path).map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signal::fourier;

    fn roundtrip_signal(f: &Signal) -> Signal {
        let mut buf = Vec::new();
        write_signal(f, &mut buf).unwrap();
        read_signal(buf.as_slice()).unwrap()
    }

    #[test]
    fn signal_roundtrip_is_exact() {
        let g = RealGrid::new(-3.0, 0.1, 61).unwrap();
        let f = Signal::from_fn(g, |x| C64::new(x.sin() / 3.0, (-x * x).exp()));
        let back = roundtrip_signal(&f);
        assert_eq!(back.values(), f.values());
        assert!((back.grid().dx() - 0.1).abs() < 1e-15 && back.grid().n() == 61);
    }

    #[test]
    fn real_only_signal_and_bad_input() {
        let f = read_signal("x,re\n0,1\n0.5,2\n1,3\n".as_bytes()).unwrap();
        assert_eq!(f.values()[2], C64::new(3.0, 0.0));
        assert!(read_signal("x,re\n0,1\n0.5,2\n1.7,3\n".as_bytes()).is_err());
        assert!(read_signal("t,v\n0,1\n1,2\n".as_bytes()).is_err());
        assert!(read_signal("x,re\n0,1\n".as_bytes()).is_err());
        assert!(read_signal("x,re\n0,1\n1,abc\n".as_bytes()).is_err());
    }

    #[test]
    fn spectral_roundtrip() {
        let g = RealGrid::new(-2.0, 0.05, 80).unwrap();
        let s = fourier(&Signal::from_real_fn(g, |x| (-x * x).exp()));
        let mut buf = Vec::new();
        write_spectral(&s, &mut buf).unwrap();
        let back = read_spectral(buf.as_slice()).unwrap();
        assert_eq!(back.values(), s.values());
        assert_eq!(back.origin(), s.origin());
    }

    #[test]
    fn field_roundtrip_keeps_axes_and_p() {
        let ax = LogAxis::new(0.25, 2.0, 4).unwrap();
        let bg = RealGrid::new(-1.0, 0.5, 5).unwrap();
        let u = HalfPlaneField::from_fn(ax, bg, |a, b| C64::new(a * b, a - b)).with_p(1.0);
        let mut buf = Vec::new();
        write_field(&u, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("# a_min=2.5000000000000000e-1,ratio="));
        let back = read_field(buf.as_slice()).unwrap();
        assert_eq!(back.values(), u.values());
        assert_eq!(back.p(), Some(1.0));
        assert_eq!(back.a_axis().count(), 4);

        let inf = u.clone().with_p(f64::INFINITY);
        let mut buf = Vec::new();
        write_field(&inf, &mut buf).unwrap();
        assert_eq!(read_field(buf.as_slice()).unwrap().p(), Some(f64::INFINITY));
    }

    #[test]
    fn field_rejects_wrong_shapes() {
        assert!(read_field("a,b,re,im\n1,0,0,0\n1,1,0,0\n".as_bytes()).is_err());
        let text = "# a_min=1,ratio=2,count=2\na,b,re,im\n1,0,0,0\n1,1,0,0\n2,0,0,0\n";
        assert!(read_field(text.as_bytes()).is_err());
        let text = "# a_min=1,ratio=2,count=2\na,b,re,im\n1,0,0,0\n1,1,0,0\n3,0,0,0\n3,1,0,0\n";
        assert!(read_field(text.as_bytes()).is_err());
    }

    #[test]
    fn masses_json() {
        let text = r#"[{"lambda_re": 1.5, "lambda_im": -1, "a": 2, "b": 0.5}]"#;
        let m = read_point_masses(text.as_bytes()).unwrap();
        assert_eq!(m.masses[0].0, C64::new(1.5, -1.0));
        let mut buf = Vec::new();
        write_point_masses(&m, &mut buf).unwrap();
        assert_eq!(read_point_masses(buf.as_slice()).unwrap(), m);
        assert!(read_point_masses(r#"[{"lambda_re": 1, "lambda_im": 0, "a": -2, "b": 0}]"#.as_bytes()).is_err());
        let c = read_carleson_masses(r#"[{"weight": 3, "a": 0.3, "b": 0.1}]"#.as_bytes()).unwrap();
        assert_eq!(c, vec![(3.0, 0.3, 0.1)]);
    }
}
