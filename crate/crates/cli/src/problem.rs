//! Problem-file format: JSON with rows-as-vectors matrices, resolved into
//! the library's column-major types at the boundary.

use oblique_frames::linalg::{check_orthonormal, orthonormalize};
use oblique_frames::{C64, Frame, FrameError, Mat, Spectrum, SubspacePair, Tol};
use serde::Deserialize;
use sha2::{Digest, Sha256};

/// Errors split by exit code: bad input versus valid input that the
/// mathematics rejects.
#[derive(Debug)]
pub enum CliError {
    Parse(String),
    Validation(String),
    Math(FrameError),
}

impl From<FrameError> for CliError {
    fn from(e: FrameError) -> Self {
        CliError::Math(e)
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Parse(m) | CliError::Validation(m) => write!(f, "{m}"),
            CliError::Math(e) => write!(f, "{e}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldKind {
    Real,
    Complex,
}

/// One matrix entry: a bare scalar in real problems, an `[re, im]` pair in
/// complex ones.
#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Real(f64),
    Complex([f64; 2]),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub ambient_dim: usize,
    pub field: FieldKind,
    /// n rows, one vector of length `ambient_dim` each.
    pub frame: Vec<Vec<Entry>>,
    /// Optional basis rows for the reconstruction subspace V; defaults to W.
    #[serde(default)]
    pub v_basis: Option<Vec<Vec<Entry>>>,
    /// Optional basis rows for the sampling subspace W; defaults to the
    /// span of the frame.
    #[serde(default)]
    pub w_basis: Option<Vec<Vec<Entry>>>,
    #[serde(default)]
    pub trace_budget: Option<f64>,
    #[serde(default)]
    pub spectrum: Option<Vec<f64>>,
    #[serde(default)]
    pub seed: Option<u64>,
}

/// A parsed and validated problem, ready to dispatch.
#[derive(Debug)]
pub struct Resolved {
    pub frame: Frame,
    pub pair: SubspacePair,
    pub trace_budget: Option<f64>,
    pub spectrum: Option<Spectrum>,
    pub seed: Option<u64>,
    pub complex: bool,
    pub warnings: Vec<String>,
    /// SHA-256 of the raw problem bytes, hex-encoded.
    pub digest: String,
}

fn entry_to_c64(e: Entry, field: FieldKind, what: &str) -> Result<C64, CliError> {
    match (field, e) {
        (FieldKind::Real, Entry::Real(x)) => Ok(C64::new(x, 0.0)),
        (FieldKind::Complex, Entry::Complex([re, im])) => Ok(C64::new(re, im)),
        (FieldKind::Real, Entry::Complex(_)) => Err(CliError::Validation(format!(
            "{what}: complex entry in a problem declared real"
        ))),
        (FieldKind::Complex, Entry::Real(_)) => Err(CliError::Validation(format!(
            "{what}: bare scalar in a problem declared complex; use [re, im]"
        ))),
    }
}

/// Rows-are-vectors input to a columns-are-vectors matrix.
fn rows_to_mat(
    rows: &[Vec<Entry>],
    p: usize,
    field: FieldKind,
    what: &str,
) -> Result<Mat, CliError> {
    if rows.is_empty() {
        return Err(CliError::Validation(format!("{what}: no rows")));
    }
    for (i, row) in rows.iter().enumerate() {
        if row.len() != p {
            return Err(CliError::Validation(format!(
                "{what}: row {i} has {} entries, expected ambient_dim = {p}",
                row.len()
            )));
        }
        for e in row {
            let z = entry_to_c64(*e, field, what)?;
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(CliError::Validation(format!("{what}: non-finite entry in row {i}")));
            }
        }
    }
    let n = rows.len();
    let mut m = Mat::zeros(p, n);
    for (j, row) in rows.iter().enumerate() {
        for (i, e) in row.iter().enumerate() {
            m[(i, j)] = entry_to_c64(*e, field, what).expect("validated above");
        }
    }
    Ok(m)
}

/// Accept a possibly skew basis, orthonormalizing when needed and
/// recording the correction magnitude.
fn ingest_basis(
    rows: &[Vec<Entry>],
    p: usize,
    field: FieldKind,
    what: &str,
    tol: &Tol,
    warnings: &mut Vec<String>,
) -> Result<Mat, CliError> {
    let m = rows_to_mat(rows, p, field, what)?;
    if m.cols() > p {
        return Err(CliError::Validation(format!(
            "{what}: {} vectors cannot be independent in dimension {p}",
            m.cols()
        )));
    }
    if check_orthonormal(&m, tol).is_ok() {
        return Ok(m);
    }
    let defect = (&(&m.adjoint() * &m) - &Mat::identity(m.cols())).max_abs();
    let (q, rank) = orthonormalize(&m, tol);
    if rank < m.cols() {
        return Err(CliError::Validation(format!(
            "{what}: rows are linearly dependent (rank {rank} of {})",
            m.cols()
        )));
    }
    warnings.push(format!(
        "{what} was not orthonormal (defect {defect:.3e}); rows were orthonormalized"
    ));
    Ok(q)
}

pub fn parse(bytes: &[u8]) -> Result<ProblemFile, CliError> {
    serde_json::from_slice(bytes).map_err(|e| CliError::Parse(e.to_string()))
}

pub fn resolve(bytes: &[u8], tol: &Tol) -> Result<Resolved, CliError> {
    let pf = parse(bytes)?;
    let p = pf.ambient_dim;
    if p == 0 {
        return Err(CliError::Validation("ambient_dim must be at least 1".into()));
    }
    let mut warnings = Vec::new();
    let synthesis = rows_to_mat(&pf.frame, p, pf.field, "frame")?;
    let frame = Frame::new(synthesis, tol)?;

    let w_basis = match &pf.w_basis {
        Some(rows) => ingest_basis(rows, p, pf.field, "w_basis", tol, &mut warnings)?,
        None => frame.span_basis().clone(),
    };
    let pair = match &pf.v_basis {
        Some(rows) => {
            let v_basis = ingest_basis(rows, p, pf.field, "v_basis", tol, &mut warnings)?;
            SubspacePair::new(v_basis, w_basis, tol)?
        }
        None => SubspacePair::coincident(w_basis, tol)?,
    };

    let spectrum = match &pf.spectrum {
        Some(vals) => Some(
            Spectrum::new(vals.clone())
                .map_err(|e| CliError::Validation(format!("spectrum: {e}")))?,
        ),
        None => None,
    };
    if let Some(t) = pf.trace_budget {
        if !t.is_finite() {
            return Err(CliError::Validation("trace_budget must be finite".into()));
        }
    }

    let digest = Sha256::digest(bytes);
    let digest = digest.iter().map(|b| format!("{b:02x}")).collect::<String>();

    Ok(Resolved {
        frame,
        pair,
        trace_budget: pf.trace_budget,
        spectrum,
        seed: pf.seed,
        complex: pf.field == FieldKind::Complex,
        warnings,
        digest,
    })
}
