//! JSON files for the branch coefficients and the approximate inverse.
//!
//! Both files share a header with the truncation orders, `ν`, the domain
//! and the list of components. Branch components are stored as dense
//! two-sided `(k, n) → [re, im]` tables; the inverse stores one dense
//! row-major matrix per Chebyshev order together with the row and column
//! labels of the reduced basis.

use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::matrix::Mat;
use crate::model::{Field, Layout, State, FIELDS};
use crate::rigor::Cplx;
use crate::series::{Domain, FourierSlice, NormParams, SeriesError};

pub const FORMAT_VERSION: u32 = 1;
const SCALARS: [&str; 3] = ["a", "beta", "alpha"];

#[derive(Debug, Error)]
pub enum FileError {
    #[error("cannot read or write {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported format version {0} (expected {FORMAT_VERSION})")]
    Version(u32),
    #[error("malformed file: {0}")]
    Malformed(String),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

pub type Result<T> = std::result::Result<T, FileError>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Component {
    pub name: String,
    pub symmetry_class: String,
    pub reality: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Header {
    pub version: u32,
    pub kind: String,
    #[serde(flatten)]
    pub params: NormParams,
    pub domain: [f64; 2],
    pub components: Vec<Component>,
}

/// Two-sided coefficients of one component, `data[k - k_min][n]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Coefficients {
    pub name: String,
    pub k_min: i64,
    pub data: Vec<Vec<[f64; 2]>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BranchFile {
    #[serde(flatten)]
    pub header: Header,
    pub coefficients: Vec<Coefficients>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InverseFile {
    #[serde(flatten)]
    pub header: Header,
    pub rows: Vec<String>,
    pub cols: Vec<String>,
    /// One row-major matrix per Chebyshev order.
    pub matrices: Vec<Vec<f64>>,
}

fn header(kind: &str, params: &NormParams, domain: Domain) -> Header {
    let mut components: Vec<Component> = SCALARS
        .iter()
        .map(|s| Component {
            name: s.to_string(),
            symmetry_class: "scalar".into(),
            reality: "real".into(),
        })
        .collect();
    for f in FIELDS {
        components.push(Component {
            name: f.name().into(),
            symmetry_class: f.class().name(),
            reality: "real".into(),
        });
    }
    Header {
        version: FORMAT_VERSION,
        kind: kind.into(),
        params: *params,
        domain: [domain.lo, domain.hi],
        components,
    }
}

fn check_header(h: &Header, kind: &str) -> Result<(Layout, Domain)> {
    if h.version != FORMAT_VERSION {
        return Err(FileError::Version(h.version));
    }
    if h.kind != kind {
        return Err(FileError::Malformed(format!("expected a {kind} file, found {:?}", h.kind)));
    }
    let p = NormParams::new(h.params.nu, h.params.k, h.params.n)?;
    let d = Domain::new(h.domain[0], h.domain[1])?;
    let expected = header(kind, &p, d).components;
    if h.components != expected {
        return Err(FileError::Malformed("component list does not match the model".into()));
    }
    Ok((Layout::new(p.k), d))
}

pub fn branch_file(params: &NormParams, x: &State<f64>) -> BranchFile {
    let n = x.n();
    let k = params.k as i64;
    let mut coefficients = Vec::new();
    for (i, name) in SCALARS.iter().enumerate() {
        coefficients.push(Coefficients {
            name: name.to_string(),
            k_min: 0,
            data: vec![x.series(i).coeffs().iter().map(|&v| [v, 0.0]).collect()],
        });
    }
    for f in FIELDS {
        let fc = x.field(f);
        let data = (-k..=k)
            .map(|m| (0..=n).map(|j| fc.get(m, j)).map(|c| [c.re, c.im]).collect())
            .collect();
        coefficients.push(Coefficients {
            name: f.name().into(),
            k_min: -k,
            data,
        });
    }
    BranchFile {
        header: header("branch", params, x.domain()),
        coefficients,
    }
}

/// Rebuilds the state, rejecting data outside the symmetry classes.
pub fn state_from_file(b: &BranchFile) -> Result<(NormParams, State<f64>)> {
    let (layout, domain) = check_header(&b.header, "branch")?;
    let p = b.header.params;
    let (k, n) = (p.k as i64, p.n);
    if b.coefficients.len() != 3 + FIELDS.len() {
        return Err(FileError::Malformed("wrong number of components".into()));
    }
    let bad = |what: String| FileError::Malformed(what);
    let mut coeffs = Mat::zeros(layout.dim(), n + 1);
    for (i, c) in b.coefficients.iter().take(3).enumerate() {
        if c.name != SCALARS[i] || c.k_min != 0 || c.data.len() != 1 || c.data[0].len() != n + 1 {
            return Err(bad(format!("scalar component {i} has the wrong shape")));
        }
        for (j, v) in c.data[0].iter().enumerate() {
            if v[1] != 0.0 {
                return Err(bad(format!("scalar {} is not real", c.name)));
            }
            coeffs[(i, j)] = v[0];
        }
    }
    for (f, c) in FIELDS.iter().zip(&b.coefficients[3..]) {
        let rows = (2 * k + 1) as usize;
        if c.name != f.name() || c.k_min != -k || c.data.len() != rows || c.data.iter().any(|r| r.len() != n + 1) {
            return Err(bad(format!("component {} has the wrong shape", f.name())));
        }
        let mut col = vec![0.0; layout.dim()];
        for j in 0..=n {
            let mut s = FourierSlice::zeros(p.k);
            for m in -k..=k {
                let v = c.data[(m + k) as usize][j];
                if !(v[0].is_finite() && v[1].is_finite()) {
                    return Err(bad(format!("non-finite value in {}", f.name())));
                }
                s.set(m, Cplx::new(v[0], v[1]));
            }
            let back = check_field(&layout, *f, &s, &mut col)?;
            for i in layout.block(*f) {
                coeffs[(i, j)] = back[i];
            }
        }
    }
    Ok((p, State::from_coeffs(layout, domain, coeffs)))
}

/// Projects `s` onto the reduced basis of `f` and checks it loses nothing.
fn check_field<'a>(layout: &Layout, f: Field, s: &FourierSlice<f64>, col: &'a mut [f64]) -> Result<&'a [f64]> {
    layout.read_field(f, s, col);
    let back = layout.to_slices(col);
    let r = back.field(f);
    for m in -(layout.k() as i64)..=layout.k() as i64 {
        let (a, b) = (s.get(m), r.get(m));
        let scale = 1e-12 * (1.0 + a.re.abs().max(a.im.abs()));
        if (a.re - b.re).abs() > scale || (a.im - b.im).abs() > scale {
            return Err(FileError::Malformed(format!(
                "{} mode {m} breaks the {} symmetry class",
                f.name(),
                f.class().name()
            )));
        }
    }
    Ok(col)
}

pub fn inverse_file(params: &NormParams, domain: Domain, a_fin: &[Mat<f64>]) -> InverseFile {
    let l = Layout::new(params.k);
    let labels: Vec<String> = (0..l.dim()).map(|i| l.label(i)).collect();
    InverseFile {
        header: header("inverse", params, domain),
        rows: labels.clone(),
        cols: labels,
        matrices: a_fin.iter().map(|m| m.data().to_vec()).collect(),
    }
}

pub fn inverse_from_file(f: &InverseFile) -> Result<(NormParams, Domain, Vec<Mat<f64>>)> {
    let (layout, domain) = check_header(&f.header, "inverse")?;
    let dim = layout.dim();
    let labels: Vec<String> = (0..dim).map(|i| layout.label(i)).collect();
    if f.rows != labels || f.cols != labels {
        return Err(FileError::Malformed("row or column labels do not match the layout".into()));
    }
    if f.matrices.is_empty() {
        return Err(FileError::Malformed("no matrices".into()));
    }
    let mut out = Vec::with_capacity(f.matrices.len());
    for (n, m) in f.matrices.iter().enumerate() {
        if m.len() != dim * dim || m.iter().any(|v| !v.is_finite()) {
            return Err(FileError::Malformed(format!("matrix {n} has the wrong size or non-finite entries")));
        }
        out.push(Mat::from_vec(dim, dim, m.clone()));
    }
    Ok((f.header.params, domain, out))
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> FileError + '_ {
    move |source| FileError::Io {
        path: path.display().to_string(),
        source,
    }
}

/// Serializes to `path` through a temporary sibling; returns the SHA-256 of
/// the bytes written.
pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<String> {
    let bytes = serde_json::to_vec(value)?;
    crate::orbit::write_atomic(path, &bytes).map_err(io_err(path))?;
    Ok(sha256_hex(&bytes))
}

/// Parses `path`; returns the value and the SHA-256 of its bytes.
pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<(T, String)> {
    let bytes = std::fs::read(path).map_err(io_err(path))?;
    Ok((serde_json::from_slice(&bytes)?, sha256_hex(&bytes)))
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::Rational;
    use crate::solver::{approximate_inverse, triangle_seed};

    fn small() -> (NormParams, State<f64>) {
        let p = NormParams::new(Rational::new(11, 10).unwrap(), 6, 3).unwrap();
        let l = Layout::new(6);
        let seed = triangle_seed(&l);
        let slices: Vec<Vec<f64>> = (0..4)
            .map(|j| seed.iter().enumerate().map(|(i, v)| v * (1.0 + 0.01 * (i * j) as f64)).collect())
            .collect();
        (p, State::from_nodes(l, Domain::UNIT, &slices).unwrap())
    }

    #[test]
    fn branch_round_trip_is_exact() {
        let (p, x) = small();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("b.json");
        let d1 = write_json(&path, &branch_file(&p, &x)).unwrap();
        let (f, d2): (BranchFile, String) = read_json(&path).unwrap();
        assert_eq!(d1, d2);
        let (q, y) = state_from_file(&f).unwrap();
        assert_eq!(q, p);
        assert_eq!(y, x);
    }

    #[test]
    fn inverse_round_trip_is_exact() {
        let (p, x) = small();
        let a = approximate_inverse(&x).unwrap();
        let f = inverse_file(&p, x.domain(), &a);
        let text = serde_json::to_string(&f).unwrap();
        let back: InverseFile = serde_json::from_str(&text).unwrap();
        let (_, d, b) = inverse_from_file(&back).unwrap();
        assert_eq!(d, x.domain());
        assert_eq!(b, a);
    }

    #[test]
    fn malformed_files_are_rejected() {
        let (p, x) = small();
        let good = branch_file(&p, &x);

        let mut f = good.clone();
        f.header.version = 7;
        assert!(matches!(state_from_file(&f), Err(FileError::Version(7))));

        let mut f = good.clone();
        f.coefficients[3].data[6 + 2][0] = [0.0, 0.5];
        assert!(matches!(state_from_file(&f), Err(FileError::Malformed(_))));

        let mut f = good.clone();
        f.coefficients.pop();
        assert!(state_from_file(&f).is_err());

        let mut f = good;
        f.header.kind = "inverse".into();
        assert!(state_from_file(&f).is_err());

        assert!(serde_json::from_str::<BranchFile>("{\"version\": 1}").is_err());
    }
}
