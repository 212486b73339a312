//! Domain files (JSON), point clouds (text or binary) and label output.

use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::classify::Label;
use crate::domains;
use crate::geom::Point2;
use crate::nurbs::{BoundaryCurve, NurbsSide};

pub const DOMAIN_FORMAT_VERSION: u32 = 1;
pub const CLOUD_MAGIC: &[u8; 4] = b"INRS";
pub const CLOUD_VERSION: u8 = 1;

#[derive(Debug, thiserror::Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
    #[error("{path}: unsupported domain format version {found}")]
    DomainVersion { path: PathBuf, found: u32 },
    #[error("{path}: side {side}: {source}")]
    Side {
        path: PathBuf,
        side: usize,
        #[source]
        source: crate::error::SideError,
    },
    #[error("{path}: {source}")]
    Domain {
        path: PathBuf,
        #[source]
        source: crate::error::Error,
    },
    #[error("unknown domain '{0}' (not a file and not one of circle, square, mixed, multispan)")]
    UnknownDomain(String),
    #[error("{path}:{line}: {msg}")]
    Parse { path: PathBuf, line: usize, msg: String },
    #[error("{path}: not a binary point cloud (bad magic bytes)")]
    BadMagic { path: PathBuf },
    #[error("{path}: unsupported binary cloud version {found}")]
    CloudVersion { path: PathBuf, found: u8 },
    #[error("{path}: header announces {count} points but payload holds {bytes} bytes")]
    CountMismatch { path: PathBuf, count: u64, bytes: usize },
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> IoError + '_ {
    move |source| IoError::Io {
        path: path.to_owned(),
        source,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SideRecord {
    pub degree: usize,
    pub knots: Vec<f64>,
    pub control_points: Vec<[f64; 2]>,
    pub weights: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DomainFile {
    pub format_version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub sides: Vec<SideRecord>,
}

impl DomainFile {
    pub fn from_curve(curve: &BoundaryCurve, name: Option<&str>) -> Self {
        let sides = curve
            .sides()
            .iter()
            .map(|s| SideRecord {
                degree: s.degree(),
                knots: s.knots().to_vec(),
                control_points: s.control_points().iter().map(|p| [p.x, p.y]).collect(),
                weights: s.weights().to_vec(),
            })
            .collect();
        Self {
            format_version: DOMAIN_FORMAT_VERSION,
            name: name.map(str::to_owned),
            sides,
        }
    }

    /// Builds and validates the boundary. `path` only labels errors.
    pub fn to_curve(&self, path: &Path) -> Result<BoundaryCurve, IoError> {
        if self.format_version != DOMAIN_FORMAT_VERSION {
            return Err(IoError::DomainVersion {
                path: path.to_owned(),
                found: self.format_version,
            });
        }
        let sides = self
            .sides
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let pts = r.control_points.iter().map(|&[x, y]| Point2::new(x, y)).collect();
                NurbsSide::new(r.degree, r.knots.clone(), pts, r.weights.clone()).map_err(|source| IoError::Side {
                    path: path.to_owned(),
                    side: i,
                    source,
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        BoundaryCurve::new(sides).map_err(|source| IoError::Domain {
            path: path.to_owned(),
            source,
        })
    }
}

pub fn parse_domain(text: &str, path: &Path) -> Result<BoundaryCurve, IoError> {
    let file: DomainFile = serde_json::from_str(text).map_err(|source| IoError::Json {
        path: path.to_owned(),
        source,
    })?;
    file.to_curve(path)
}

pub fn load_domain(path: &Path) -> Result<BoundaryCurve, IoError> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    parse_domain(&text, path)
}

pub fn save_domain(curve: &BoundaryCurve, name: Option<&str>, path: &Path) -> Result<(), IoError> {
    let file = DomainFile::from_curve(curve, name);
    let text = serde_json::to_string_pretty(&file).map_err(|source| IoError::Json {
        path: path.to_owned(),
        source,
    })?;
    fs::write(path, text + "\n").map_err(io_err(path))
}

/// A built-in domain name, or else a path to a domain file.
pub fn resolve_domain(spec: &str) -> Result<BoundaryCurve, IoError> {
    let path = Path::new(spec);
    if path.exists() {
        return load_domain(path);
    }
    domains::builtin(spec).ok_or_else(|| IoError::UnknownDomain(spec.to_owned()))
}

/// One `x,y` pair per line; blank lines and lines starting with `#` are skipped.
pub fn parse_text_cloud(reader: impl BufRead, path: &Path) -> Result<Vec<Point2>, IoError> {
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line.map_err(io_err(path))?;
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let bad = |msg: String| IoError::Parse {
            path: path.to_owned(),
            line: i + 1,
            msg,
        };
        let (xs, ys) = t
            .split_once(',')
            .ok_or_else(|| bad(format!("expected 'x,y', found '{t}'")))?;
        let num = |s: &str| {
            s.trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| bad(format!("not a finite number: '{}'", s.trim())))
        };
        out.push(Point2::new(num(xs)?, num(ys)?));
    }
    Ok(out)
}

pub fn parse_binary_cloud(bytes: &[u8], path: &Path) -> Result<Vec<Point2>, IoError> {
    if bytes.len() < 13 || &bytes[..4] != CLOUD_MAGIC {
        return Err(IoError::BadMagic { path: path.to_owned() });
    }
    if bytes[4] != CLOUD_VERSION {
        return Err(IoError::CloudVersion {
            path: path.to_owned(),
            found: bytes[4],
        });
    }
    let count = u64::from_le_bytes(bytes[5..13].try_into().unwrap());
    let payload = &bytes[13..];
    if count.checked_mul(16) != Some(payload.len() as u64) {
        return Err(IoError::CountMismatch {
            path: path.to_owned(),
            count,
            bytes: payload.len(),
        });
    }
    Ok(payload
        .chunks_exact(16)
        .map(|c| {
            Point2::new(
                f64::from_le_bytes(c[..8].try_into().unwrap()),
                f64::from_le_bytes(c[8..].try_into().unwrap()),
            )
        })
        .collect())
}

/// Reads a cloud, telling the formats apart by the magic bytes.
pub fn load_cloud(path: &Path) -> Result<Vec<Point2>, IoError> {
    let mut bytes = Vec::new();
    fs::File::open(path)
        .and_then(|mut f| f.read_to_end(&mut bytes))
        .map_err(io_err(path))?;
    if bytes.starts_with(CLOUD_MAGIC) {
        parse_binary_cloud(&bytes, path)
    } else {
        parse_text_cloud(BufReader::new(bytes.as_slice()), path)
    }
}

pub fn write_text_cloud(points: &[Point2], mut w: impl Write) -> std::io::Result<()> {
    for p in points {
        // `{:?}` prints the shortest representation that round-trips.
        writeln!(w, "{:?},{:?}", p.x, p.y)?;
    }
    Ok(())
}

pub fn write_binary_cloud(points: &[Point2], mut w: impl Write) -> std::io::Result<()> {
    w.write_all(CLOUD_MAGIC)?;
    w.write_all(&[CLOUD_VERSION])?;
    w.write_all(&(points.len() as u64).to_le_bytes())?;
    for p in points {
        w.write_all(&p.x.to_le_bytes())?;
        w.write_all(&p.y.to_le_bytes())?;
    }
    Ok(())
}

pub fn save_cloud(points: &[Point2], path: &Path, binary: bool) -> Result<(), IoError> {
    let mut w = BufWriter::new(fs::File::create(path).map_err(io_err(path))?);
    if binary {
        write_binary_cloud(points, &mut w)
    } else {
        write_text_cloud(points, &mut w)
    }
    .and_then(|_| w.flush())
    .map_err(io_err(path))
}

/// Labels as `0`, `1` or `2`, one per line.
pub fn write_labels_text(labels: &[Label], mut w: impl Write) -> std::io::Result<()> {
    let mut buf = Vec::with_capacity(labels.len() * 2);
    for l in labels {
        buf.push(b'0' + l.as_u8());
        buf.push(b'\n');
    }
    w.write_all(&buf)
}

/// Labels as one byte each.
pub fn write_labels_binary(labels: &[Label], mut w: impl Write) -> std::io::Result<()> {
    let buf: Vec<u8> = labels.iter().map(|l| l.as_u8()).collect();
    w.write_all(&buf)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_round_trip_is_bitwise() {
        for name in domains::BUILTIN_NAMES {
            let curve = domains::builtin(name).unwrap();
            let text = serde_json::to_string(&DomainFile::from_curve(&curve, Some(name))).unwrap();
            let back = parse_domain(&text, Path::new(name)).unwrap();
            assert_eq!(
                DomainFile::from_curve(&back, Some(name)),
                DomainFile::from_curve(&curve, Some(name))
            );
            for (a, b) in curve.sides().iter().zip(back.sides()) {
                for (p, q) in a.control_points().iter().zip(b.control_points()) {
                    assert_eq!(p.x.to_bits(), q.x.to_bits());
                    assert_eq!(p.y.to_bits(), q.y.to_bits());
                }
                for (u, v) in a.weights().iter().zip(b.weights()) {
                    assert_eq!(u.to_bits(), v.to_bits());
                }
            }
        }
    }

    #[test]
    fn circle_file_shape() {
        let f = DomainFile::from_curve(&domains::circle(), None);
        assert_eq!(f.sides.len(), 1);
        assert_eq!(f.sides[0].degree, 2);
        assert_eq!(f.sides[0].control_points.len(), 9);
    }

    #[test]
    fn invalid_domain_files() {
        let mut f = DomainFile::from_curve(&domains::square(), None);
        f.sides[1].weights[0] = 0.0;
        let err = f.to_curve(Path::new("w.json")).unwrap_err();
        assert!(err.to_string().contains("non-positive weight"), "{err}");

        let mut f = DomainFile::from_curve(&domains::square(), None);
        f.sides[0].knots.pop();
        let err = f.to_curve(Path::new("k.json")).unwrap_err();
        assert!(matches!(err, IoError::Side { side: 0, .. }), "{err}");

        let err = parse_domain("{\"format_version\": 1,\n \"sides\": [1]}", Path::new("j.json")).unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
        assert!(matches!(
            resolve_domain("no-such-domain"),
            Err(IoError::UnknownDomain(_))
        ));
    }

    #[test]
    fn text_cloud_parsing() {
        let src = "# header\n0.5,0.25\n\n-1e-3 , 2E2\n";
        let pts = parse_text_cloud(src.as_bytes(), Path::new("p.csv")).unwrap();
        assert_eq!(pts, vec![Point2::new(0.5, 0.25), Point2::new(-1e-3, 200.0)]);
        let err = parse_text_cloud("1,2\n3;4\n".as_bytes(), Path::new("p.csv")).unwrap_err();
        assert!(matches!(err, IoError::Parse { line: 2, .. }));
        assert!(parse_text_cloud("1,nan\n".as_bytes(), Path::new("p.csv")).is_err());
    }

    #[test]
    fn binary_cloud_round_trip_and_errors() {
        let pts = vec![Point2::new(0.1, -2.5), Point2::new(1e300, 3.0)];
        let mut buf = Vec::new();
        write_binary_cloud(&pts, &mut buf).unwrap();
        assert_eq!(&buf[..4], b"INRS");
        assert_eq!(buf.len(), 13 + 32);
        assert_eq!(parse_binary_cloud(&buf, Path::new("b")).unwrap(), pts);
        let mut short = buf.clone();
        short.pop();
        assert!(matches!(
            parse_binary_cloud(&short, Path::new("b")),
            Err(IoError::CountMismatch { count: 2, .. })
        ));
        let mut v = buf.clone();
        v[4] = 9;
        assert!(matches!(
            parse_binary_cloud(&v, Path::new("b")),
            Err(IoError::CloudVersion { .. })
        ));
    }

    #[test]
    fn text_cloud_round_trip_is_exact() {
        let pts = vec![Point2::new(0.1 + 0.2, -1.0 / 3.0), Point2::new(5e-324, 1e308)];
        let mut buf = Vec::new();
        write_text_cloud(&pts, &mut buf).unwrap();
        assert_eq!(parse_text_cloud(buf.as_slice(), Path::new("t")).unwrap(), pts);
    }

    #[test]
    fn label_writers() {
        let labels = [Label::Inside, Label::Outside, Label::Boundary];
        let mut t = Vec::new();
        write_labels_text(&labels, &mut t).unwrap();
        assert_eq!(t, b"1\n0\n2\n");
        let mut b = Vec::new();
        write_labels_binary(&labels, &mut b).unwrap();
        assert_eq!(b, vec![1, 0, 2]);
    }
}
