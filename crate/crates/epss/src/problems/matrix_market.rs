//! MatrixMarket coordinate files and the three-file system layout.
//!
//! A full saddle point system is stored as one file per block plus a JSON
//! manifest carrying the block sizes and offsets, so external tools can
//! reassemble the flat ordering without guessing.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::SparseMatrix;
use crate::saddle::SaddleSystem;

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

/// Reads a coordinate-format real matrix. Symmetric storage is expanded to
/// full storage on the fly.
pub fn read_matrix_market(path: impl AsRef<Path>) -> Result<SparseMatrix> {
    let file = File::open(path.as_ref())?;
    let reader = BufReader::new(file);
    let mut lines = reader.lines().enumerate();

    let (_, banner) = lines
        .next()
        .ok_or_else(|| parse_err(1, "empty file"))
        .and_then(|(i, r)| r.map(|s| (i, s)).map_err(Error::from))?;
    let tokens: Vec<String> =
        banner.split_whitespace().map(|t| t.to_ascii_lowercase()).collect();
    if tokens.len() != 5 || tokens[0] != "%%matrixmarket" {
        return Err(parse_err(1, "expected a MatrixMarket banner"));
    }
    if tokens[1] != "matrix" || tokens[2] != "coordinate" {
        return Err(parse_err(1, format!("unsupported object/format '{} {}'", tokens[1], tokens[2])));
    }
    if tokens[3] != "real" {
        return Err(parse_err(1, format!("unsupported field '{}'", tokens[3])));
    }
    let symmetric = match tokens[4].as_str() {
        "general" => false,
        "symmetric" => true,
        other => return Err(parse_err(1, format!("unsupported symmetry '{other}'"))),
    };

    let mut sizes: Option<(usize, usize, usize)> = None;
    let mut triplets: Vec<(usize, usize, f64)> = Vec::new();
    let mut remaining = 0usize;
    for (idx, line) in lines {
        let lineno = idx + 1;
        let line = line?;
        let text = line.trim();
        if text.is_empty() || text.starts_with('%') {
            continue;
        }
        let fields: Vec<&str> = text.split_whitespace().collect();
        match sizes {
            None => {
                if fields.len() != 3 {
                    return Err(parse_err(lineno, "size line must have three fields"));
                }
                let rows: usize = fields[0]
                    .parse()
                    .map_err(|_| parse_err(lineno, format!("bad row count '{}'", fields[0])))?;
                let cols: usize = fields[1]
                    .parse()
                    .map_err(|_| parse_err(lineno, format!("bad column count '{}'", fields[1])))?;
                let nnz: usize = fields[2]
                    .parse()
                    .map_err(|_| parse_err(lineno, format!("bad entry count '{}'", fields[2])))?;
                sizes = Some((rows, cols, nnz));
                remaining = nnz;
                triplets.reserve(if symmetric { 2 * nnz } else { nnz });
            }
            Some((rows, cols, _)) => {
                if remaining == 0 {
                    return Err(parse_err(lineno, "more entries than the size line declared"));
                }
                if fields.len() != 3 {
                    return Err(parse_err(lineno, "entry line must have three fields"));
                }
                let i: usize = fields[0]
                    .parse()
                    .map_err(|_| parse_err(lineno, format!("bad row index '{}'", fields[0])))?;
                let j: usize = fields[1]
                    .parse()
                    .map_err(|_| parse_err(lineno, format!("bad column index '{}'", fields[1])))?;
                let v: f64 = fields[2]
                    .parse()
                    .map_err(|_| parse_err(lineno, format!("bad value '{}'", fields[2])))?;
                if i == 0 || j == 0 || i > rows || j > cols {
                    return Err(parse_err(
                        lineno,
                        format!("index ({i}, {j}) outside the declared {rows}x{cols} shape"),
                    ));
                }
                triplets.push((i - 1, j - 1, v));
                if symmetric && i != j {
                    triplets.push((j - 1, i - 1, v));
                }
                remaining -= 1;
            }
        }
    }
    let (rows, cols, _) = sizes.ok_or_else(|| parse_err(1, "missing size line"))?;
    if remaining > 0 {
        return Err(parse_err(0, format!("file ended with {remaining} entries missing")));
    }
    SparseMatrix::from_triplets(rows, cols, &triplets)
}

/// Writes general coordinate format with enough digits to round-trip f64
/// values exactly.
pub fn write_matrix_market(a: &SparseMatrix, path: impl AsRef<Path>) -> Result<()> {
    let file = File::create(path.as_ref())?;
    let mut w = BufWriter::new(file);
    writeln!(w, "%%MatrixMarket matrix coordinate real general")?;
    writeln!(w, "{} {} {}", a.rows(), a.cols(), a.nnz())?;
    for (i, j, v) in a.iter() {
        writeln!(w, "{} {} {:.16e}", i + 1, j + 1, v)?;
    }
    w.flush()?;
    Ok(())
}

/// Sidecar metadata for a system stored as three matrix files.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SystemManifest {
    pub n: usize,
    pub m: usize,
    pub order: usize,
    /// Offsets of the two blocks in the flat vector layout.
    pub x_offset: usize,
    pub y_offset: usize,
    /// File names relative to the manifest's directory.
    pub a_file: String,
    pub b_file: String,
    pub c_file: String,
    pub kind: String,
    /// Wind-field label for generated flow problems; generators that use a
    /// stand-in field say so here.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wind: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

/// Writes `<stem>.a.mtx`, `<stem>.b.mtx`, `<stem>.c.mtx` and
/// `<stem>.json` into `dir`, returning the manifest path.
pub fn write_system(
    sys: &SaddleSystem,
    dir: impl AsRef<Path>,
    stem: &str,
    kind: &str,
    wind: Option<&str>,
    notes: &[String],
) -> Result<PathBuf> {
    let dir = dir.as_ref();
    let a_file = format!("{stem}.a.mtx");
    let b_file = format!("{stem}.b.mtx");
    let c_file = format!("{stem}.c.mtx");
    write_matrix_market(sys.a(), dir.join(&a_file))?;
    write_matrix_market(sys.b(), dir.join(&b_file))?;
    write_matrix_market(sys.c(), dir.join(&c_file))?;
    let manifest = SystemManifest {
        n: sys.n(),
        m: sys.m(),
        order: sys.order(),
        x_offset: 0,
        y_offset: sys.n(),
        a_file,
        b_file,
        c_file,
        kind: kind.to_string(),
        wind: wind.map(|s| s.to_string()),
        notes: notes.to_vec(),
    };
    let manifest_path = dir.join(format!("{stem}.json"));
    let file = File::create(&manifest_path)?;
    serde_json::to_writer_pretty(BufWriter::new(file), &manifest)
        .map_err(|e| Error::invalid(format!("manifest serialization failed: {e}")))?;
    Ok(manifest_path)
}

/// Loads a system back from its manifest.
pub fn read_system(manifest_path: impl AsRef<Path>) -> Result<(SaddleSystem, SystemManifest)> {
    let manifest_path = manifest_path.as_ref();
    let file = File::open(manifest_path)?;
    let manifest: SystemManifest = serde_json::from_reader(BufReader::new(file))
        .map_err(|e| Error::invalid(format!("manifest parse failed: {e}")))?;
    let dir = manifest_path.parent().unwrap_or_else(|| Path::new("."));
    let a = read_matrix_market(dir.join(&manifest.a_file))?;
    let b = read_matrix_market(dir.join(&manifest.b_file))?;
    let c = read_matrix_market(dir.join(&manifest.c_file))?;
    let sys = SaddleSystem::new(a, b, c)?;
    if sys.n() != manifest.n || sys.m() != manifest.m {
        return Err(Error::invalid(format!(
            "manifest promises blocks ({}, {}) but the files hold ({}, {})",
            manifest.n,
            manifest.m,
            sys.n(),
            sys.m()
        )));
    }
    Ok((sys, manifest))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identity_file_reads_back() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("eye.mtx");
        let mut f = File::create(&path).unwrap();
        writeln!(f, "%%MatrixMarket matrix coordinate real general").unwrap();
        writeln!(f, "% a comment").unwrap();
        writeln!(f, "2 2 2").unwrap();
        writeln!(f, "1 1 1.0").unwrap();
        writeln!(f, "2 2 1.0").unwrap();
        drop(f);
        let a = read_matrix_market(&path).unwrap();
        assert_eq!(a.rows(), 2);
        assert_eq!(a.nnz(), 2);
        assert_eq!(a.get(0, 0), 1.0);
        assert_eq!(a.get(1, 1), 1.0);
        assert_eq!(a.get(0, 1), 0.0);
    }

    #[test]
    fn symmetric_storage_expands() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("sym.mtx");
        let mut f = File::create(&path).unwrap();
        writeln!(f, "%%MatrixMarket matrix coordinate real symmetric").unwrap();
        writeln!(f, "2 2 2").unwrap();
        writeln!(f, "1 1 2.0").unwrap();
        writeln!(f, "2 1 -3.0").unwrap();
        drop(f);
        let a = read_matrix_market(&path).unwrap();
        assert_eq!(a.get(0, 1), -3.0);
        assert_eq!(a.get(1, 0), -3.0);
        assert_eq!(a.get(0, 0), 2.0);
    }

    #[test]
    fn round_trip_is_bit_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut triplets = Vec::new();
        for i in 0..20 {
            for j in 0..15 {
                if rng.gen::<f64>() < 0.3 {
                    triplets.push((i, j, rng.gen_range(-10.0..10.0)));
                }
            }
        }
        let a = SparseMatrix::from_triplets(20, 15, &triplets).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("rt.mtx");
        write_matrix_market(&a, &path).unwrap();
        let b = read_matrix_market(&path).unwrap();
        assert_eq!(a.rows(), b.rows());
        assert_eq!(a.cols(), b.cols());
        assert_eq!(a.nnz(), b.nnz());
        for ((i1, j1, v1), (i2, j2, v2)) in a.iter().zip(b.iter()) {
            assert_eq!((i1, j1), (i2, j2));
            assert_eq!(v1.to_bits(), v2.to_bits(), "value drift at ({i1}, {j1})");
        }
    }

    #[test]
    fn out_of_range_index_names_the_line() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.mtx");
        let mut f = File::create(&path).unwrap();
        writeln!(f, "%%MatrixMarket matrix coordinate real general").unwrap();
        writeln!(f, "2 2 1").unwrap();
        writeln!(f, "3 1 1.0").unwrap();
        drop(f);
        match read_matrix_market(&path) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected a parse error, got {other:?}"),
        }
    }

    #[test]
    fn bad_banner_is_line_one() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("hdr.mtx");
        let mut f = File::create(&path).unwrap();
        writeln!(f, "%%MatrixMarket matrix coordinate complex general").unwrap();
        writeln!(f, "1 1 1").unwrap();
        writeln!(f, "1 1 1.0").unwrap();
        drop(f);
        match read_matrix_market(&path) {
            Err(Error::Parse { line, message }) => {
                assert_eq!(line, 1);
                assert!(message.contains("complex"));
            }
            other => panic!("expected a parse error, got {other:?}"),
        }
    }

    #[test]
    fn truncated_file_is_reported() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("short.mtx");
        let mut f = File::create(&path).unwrap();
        writeln!(f, "%%MatrixMarket matrix coordinate real general").unwrap();
        writeln!(f, "2 2 2").unwrap();
        writeln!(f, "1 1 1.0").unwrap();
        drop(f);
        assert!(read_matrix_market(&path).is_err());
    }

    #[test]
    fn system_round_trip_through_manifest() {
        let spec = crate::problems::ProblemSpec::synthetic(6, 3, 2, 1, 8);
        let sys = crate::problems::gen_synthetic_singular(&spec).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let manifest_path = write_system(
            &sys,
            dir.path(),
            "case",
            "synthetic-singular",
            None,
            &["seeded test instance".to_string()],
        )
        .unwrap();
        let (back, manifest) = read_system(&manifest_path).unwrap();
        assert_eq!(manifest.n, 6);
        assert_eq!(manifest.m, 3);
        assert_eq!(manifest.y_offset, 6);
        for ((i1, j1, v1), (i2, j2, v2)) in sys.a().iter().zip(back.a().iter()) {
            assert!(i1 == i2 && j1 == j2 && v1.to_bits() == v2.to_bits());
        }
        for ((i1, j1, v1), (i2, j2, v2)) in sys.c().iter().zip(back.c().iter()) {
            assert!(i1 == i2 && j1 == j2 && v1.to_bits() == v2.to_bits());
        }
    }
}
