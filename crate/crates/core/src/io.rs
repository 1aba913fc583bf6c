//! Certificate files: versioned JSON with every integer written as a decimal
//! string and keys in a fixed order, so serialization is byte-reproducible.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::certify::{Certificate, Provenance};
use crate::field::{Field, FieldDescriptor, FieldError, Value};
use crate::linalg::SparseChanges;
use crate::structured::{AbelianGroupSpec, MatrixDescriptor, MatrixKind};

/// The only accepted format version.
pub const FORMAT_VERSION: &str = "1";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IoError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("invalid value at {path}: {message}")]
    Invalid { path: String, message: String },
    #[error("unsupported certificate version {0:?}, expected {FORMAT_VERSION:?}")]
    Version(String),
}

pub type Result<T> = std::result::Result<T, IoError>;

fn invalid(path: impl Into<String>, message: impl ToString) -> IoError {
    IoError::Invalid { path: path.into(), message: message.to_string() }
}

fn syntax(e: serde_json::Error) -> IoError {
    IoError::Syntax { line: e.line(), column: e.column(), message: e.to_string() }
}

fn int<T: std::str::FromStr>(s: &str, path: &str) -> Result<T> {
    s.parse().map_err(|_| invalid(path, format!("{s:?} is not a decimal integer")))
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FieldJson {
    Cyclotomic { order: String },
    Prime { p: String },
    /// Monic minimal polynomial, constant term first.
    Extension { p: String, minpoly: Vec<String> },
}

impl FieldJson {
    pub fn from_field(f: &Field) -> Self {
        match f.descriptor() {
            FieldDescriptor::Cyclotomic { order } => Self::Cyclotomic { order: order.to_string() },
            FieldDescriptor::Prime { p } => Self::Prime { p: p.to_string() },
            FieldDescriptor::Extension { p, minpoly } => {
                Self::Extension { p: p.to_string(), minpoly: minpoly.iter().map(u64::to_string).collect() }
            }
        }
    }

    pub fn to_field(&self, path: &str) -> Result<Field> {
        let d = match self {
            Self::Cyclotomic { order } => FieldDescriptor::Cyclotomic { order: int(order, &format!("{path}.order"))? },
            Self::Prime { p } => FieldDescriptor::Prime { p: int(p, &format!("{path}.p"))? },
            Self::Extension { p, minpoly } => FieldDescriptor::Extension {
                p: int(p, &format!("{path}.p"))?,
                minpoly: minpoly
                    .iter()
                    .enumerate()
                    .map(|(i, c)| int(c, &format!("{path}.minpoly[{i}]")))
                    .collect::<Result<_>>()?,
            },
        };
        Field::new(d).map_err(|e| invalid(path, e))
    }
}

/// A field element as its coefficient strings.
pub type ValueJson = Vec<String>;

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum KindJson {
    Gwh { d: String, n: String },
    Dft { n: String },
    Circulant { top_row: Vec<ValueJson> },
    AdjustedCirculant { f: Vec<ValueJson> },
    Toeplitz { diagonals: Vec<ValueJson> },
    Hankel { antidiagonals: Vec<ValueJson> },
    GCirculant { group: Vec<String>, f: Vec<ValueJson> },
    AdjustedGCirculant { group: Vec<String>, f: Vec<ValueJson> },
    DftG { group: Vec<String> },
    VandermondeGeometric { a: ValueJson, b: ValueJson, n: String },
    Explicit { rows: String, cols: String, data: Vec<ValueJson> },
    Kronecker { factors: Vec<KindJson> },
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct MatrixJson {
    pub field: FieldJson,
    pub kind: KindJson,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ChangeJson {
    pub row: String,
    pub col: String,
    pub value: ValueJson,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ProvenanceJson {
    pub steps: Vec<String>,
    pub degenerate: bool,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct CertificateFile {
    pub version: String,
    pub matrix: MatrixJson,
    pub field: FieldJson,
    pub claimed_rank: String,
    pub claimed_regular_sparsity: String,
    pub changes: Vec<ChangeJson>,
    pub provenance: ProvenanceJson,
}

fn values_to_json(f: &Field, v: &[Value]) -> Vec<ValueJson> {
    v.iter().map(|x| f.encode(x)).collect()
}

fn values_from_json(f: &Field, v: &[ValueJson], path: &str) -> Result<Vec<Value>> {
    v.iter().enumerate().map(|(i, x)| f.decode(x).map_err(|e| invalid(format!("{path}[{i}]"), e))).collect()
}

fn group_to_json(g: &AbelianGroupSpec) -> Vec<String> {
    g.invariant_factors.iter().map(u64::to_string).collect()
}

fn group_from_json(g: &[String], path: &str) -> Result<AbelianGroupSpec> {
    let factors =
        g.iter().enumerate().map(|(i, s)| int(s, &format!("{path}[{i}]"))).collect::<Result<Vec<u64>>>()?;
    AbelianGroupSpec::new(factors).map_err(|e| invalid(path, e))
}

pub fn kind_to_json(kind: &MatrixKind, f: &Field) -> KindJson {
    let v = |x: &[Value]| values_to_json(f, x);
    match kind {
        MatrixKind::Gwh { d, n } => KindJson::Gwh { d: d.to_string(), n: n.to_string() },
        MatrixKind::Dft { n } => KindJson::Dft { n: n.to_string() },
        MatrixKind::Circulant { top_row } => KindJson::Circulant { top_row: v(top_row) },
        MatrixKind::AdjustedCirculant { f: g } => KindJson::AdjustedCirculant { f: v(g) },
        MatrixKind::Toeplitz { diagonals } => KindJson::Toeplitz { diagonals: v(diagonals) },
        MatrixKind::Hankel { antidiagonals } => KindJson::Hankel { antidiagonals: v(antidiagonals) },
        MatrixKind::GCirculant { group, f: g } => KindJson::GCirculant { group: group_to_json(group), f: v(g) },
        MatrixKind::AdjustedGCirculant { group, f: g } => {
            KindJson::AdjustedGCirculant { group: group_to_json(group), f: v(g) }
        }
        MatrixKind::DftG { group } => KindJson::DftG { group: group_to_json(group) },
        MatrixKind::VandermondeGeometric { a, b, n } => {
            KindJson::VandermondeGeometric { a: f.encode(a), b: f.encode(b), n: n.to_string() }
        }
        MatrixKind::Explicit { rows, cols, data } => {
            KindJson::Explicit { rows: rows.to_string(), cols: cols.to_string(), data: v(data) }
        }
        MatrixKind::Kronecker { factors } => {
            KindJson::Kronecker { factors: factors.iter().map(|k| kind_to_json(k, f)).collect() }
        }
    }
}

pub fn kind_from_json(kind: &KindJson, f: &Field, path: &str) -> Result<MatrixKind> {
    let v = |x: &[ValueJson], name: &str| values_from_json(f, x, &format!("{path}.{name}"));
    let i = |s: &str, name: &str| int::<u64>(s, &format!("{path}.{name}"));
    let one = |x: &ValueJson, name: &str| f.decode(x).map_err(|e| invalid(format!("{path}.{name}"), e));
    Ok(match kind {
        KindJson::Gwh { d, n } => MatrixKind::Gwh { d: i(d, "d")?, n: i(n, "n")? as usize },
        KindJson::Dft { n } => MatrixKind::Dft { n: i(n, "n")? },
        KindJson::Circulant { top_row } => MatrixKind::Circulant { top_row: v(top_row, "top_row")? },
        KindJson::AdjustedCirculant { f: g } => MatrixKind::AdjustedCirculant { f: v(g, "f")? },
        KindJson::Toeplitz { diagonals } => MatrixKind::Toeplitz { diagonals: v(diagonals, "diagonals")? },
        KindJson::Hankel { antidiagonals } => MatrixKind::Hankel { antidiagonals: v(antidiagonals, "antidiagonals")? },
        KindJson::GCirculant { group, f: g } => {
            MatrixKind::GCirculant { group: group_from_json(group, &format!("{path}.group"))?, f: v(g, "f")? }
        }
        KindJson::AdjustedGCirculant { group, f: g } => {
            MatrixKind::AdjustedGCirculant { group: group_from_json(group, &format!("{path}.group"))?, f: v(g, "f")? }
        }
        KindJson::DftG { group } => MatrixKind::DftG { group: group_from_json(group, &format!("{path}.group"))? },
        KindJson::VandermondeGeometric { a, b, n } => {
            MatrixKind::VandermondeGeometric { a: one(a, "a")?, b: one(b, "b")?, n: i(n, "n")? as usize }
        }
        KindJson::Explicit { rows, cols, data } => {
            let (r, c) = (i(rows, "rows")? as usize, i(cols, "cols")? as usize);
            if r.checked_mul(c) != Some(data.len()) {
                return Err(invalid(format!("{path}.data"), format!("{} entries for a {r}x{c} matrix", data.len())));
            }
            MatrixKind::Explicit { rows: r, cols: c, data: v(data, "data")? }
        }
        KindJson::Kronecker { factors } => MatrixKind::Kronecker {
            factors: factors
                .iter()
                .enumerate()
                .map(|(k, x)| kind_from_json(x, f, &format!("{path}.factors[{k}]")))
                .collect::<Result<_>>()?,
        },
    })
}

pub fn matrix_to_json(m: &MatrixDescriptor) -> MatrixJson {
    MatrixJson { field: FieldJson::from_field(&m.field), kind: kind_to_json(&m.kind, &m.field) }
}

pub fn matrix_from_json(m: &MatrixJson, path: &str) -> Result<MatrixDescriptor> {
    let field = m.field.to_field(&format!("{path}.field"))?;
    let kind = kind_from_json(&m.kind, &field, &format!("{path}.kind"))?;
    Ok(MatrixDescriptor::new(kind, &field))
}

impl CertificateFile {
    pub fn from_certificate(c: &Certificate) -> Self {
        let changes = c
            .changes
            .iter()
            .map(|((i, j), v)| ChangeJson { row: i.to_string(), col: j.to_string(), value: c.field.encode(v) })
            .collect();
        Self {
            version: FORMAT_VERSION.to_string(),
            matrix: matrix_to_json(&c.matrix),
            field: FieldJson::from_field(&c.field),
            claimed_rank: c.claimed_rank.to_string(),
            claimed_regular_sparsity: c.claimed_regular_sparsity.to_string(),
            changes,
            provenance: ProvenanceJson { steps: c.provenance.steps.clone(), degenerate: c.provenance.degenerate },
        }
    }

    /// The certificate exactly as written: claims are not capped and no
    /// construction check is repeated, so tampered files reach the verifier.
    pub fn to_certificate(&self) -> Result<Certificate> {
        if self.version != FORMAT_VERSION {
            return Err(IoError::Version(self.version.clone()));
        }
        let matrix = matrix_from_json(&self.matrix, "matrix")?;
        let field = self.field.to_field("field")?;
        if !matrix.field.embeds_into(&field) {
            return Err(invalid("field", format!("{} does not embed into {field}", matrix.field)));
        }
        let (rows, cols) = matrix.shape();
        let mut changes = SparseChanges::empty(&field, rows, cols);
        for (k, ch) in self.changes.iter().enumerate() {
            let path = format!("changes[{k}]");
            let i: usize = int(&ch.row, &format!("{path}.row"))?;
            let j: usize = int(&ch.col, &format!("{path}.col"))?;
            if i >= rows || j >= cols {
                return Err(invalid(&path, format!("position ({i}, {j}) outside {rows}x{cols}")));
            }
            if changes.get(i, j).is_some() {
                return Err(invalid(&path, format!("duplicate position ({i}, {j})")));
            }
            let v = field.decode(&ch.value).map_err(|e| invalid(format!("{path}.value"), e))?;
            if field.is_zero(&v) {
                return Err(invalid(&path, "explicit zero change"));
            }
            changes.set(i, j, v);
        }
        Ok(Certificate {
            matrix,
            field,
            changes,
            claimed_rank: int(&self.claimed_rank, "claimed_rank")?,
            claimed_regular_sparsity: int(&self.claimed_regular_sparsity, "claimed_regular_sparsity")?,
            provenance: Provenance { steps: self.provenance.steps.clone(), degenerate: self.provenance.degenerate },
        })
    }
}

/// Pretty JSON with a trailing newline.
pub fn serialize(c: &Certificate) -> String {
    let mut s = serde_json::to_string_pretty(&CertificateFile::from_certificate(c)).expect("plain data serializes");
    s.push('\n');
    s
}

pub fn parse(text: &str) -> Result<Certificate> {
    let file: CertificateFile = serde_json::from_str(text).map_err(syntax)?;
    file.to_certificate()
}

/// A matrix descriptor file, as used to override the matrix a certificate
/// is checked against.
pub fn parse_matrix(text: &str) -> Result<MatrixDescriptor> {
    let m: MatrixJson = serde_json::from_str(text).map_err(syntax)?;
    matrix_from_json(&m, "matrix")
}

pub fn serialize_matrix(m: &MatrixDescriptor) -> String {
    let mut s = serde_json::to_string_pretty(&matrix_to_json(m)).expect("plain data serializes");
    s.push('\n');
    s
}

/// Field from a command-line spec: `q`, `cyclotomic:M`, `fq:P`, or
/// `fq:P,c0,c1,...,ck` with a monic minimal polynomial, constant term first.
pub fn parse_field_spec(spec: &str) -> std::result::Result<Field, FieldError> {
    let bad = || FieldError::Parse(format!("bad field spec {spec:?}"));
    let spec = spec.trim();
    if spec.eq_ignore_ascii_case("q") {
        return Ok(Field::rationals());
    }
    let (kind, rest) = spec.split_once(':').ok_or_else(bad)?;
    let nums = rest.split(',').map(|s| s.trim().parse::<u64>().map_err(|_| bad())).collect::<std::result::Result<Vec<_>, _>>()?;
    match (kind, nums.as_slice()) {
        ("cyclotomic", [m]) => Field::cyclotomic(*m),
        ("fq", [p]) => Field::prime(*p),
        ("fq", [p, poly @ ..]) => Field::extension(*p, poly.to_vec()),
        _ => Err(bad()),
    }
}

/// Scalars separated by whitespace or commas; `#` starts a comment. A scalar
/// is `a` or `a/b`, or `c0:c1:..` for the power-basis coefficients of a
/// field element, missing trailing coefficients being zero.
pub fn parse_scalars(text: &str, field: &Field) -> std::result::Result<Vec<Value>, FieldError> {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or(""))
        .flat_map(|l| l.split(|c: char| c.is_whitespace() || c == ',').filter(|s| !s.is_empty()).map(str::to_owned).collect::<Vec<_>>())
        .map(|s| parse_element(&s, field))
        .collect()
}

fn parse_element(s: &str, field: &Field) -> std::result::Result<Value, FieldError> {
    if !s.contains(':') {
        return field.parse_scalar(s);
    }
    let mut coeffs: Vec<&str> = s.split(':').collect();
    if coeffs.len() > field.degree() {
        return Err(FieldError::Parse(format!("{s:?} has more than {} coefficients", field.degree())));
    }
    coeffs.resize(field.degree(), "0");
    field.decode(&coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certify::gwh_decompose;

    #[test]
    fn scalars_accept_coefficient_vectors() {
        let f = Field::cyclotomic(3).unwrap();
        let v = parse_scalars("1, 0:1 # zeta\n1/2:-3", &f).unwrap();
        assert_eq!(v[1], f.zeta_pow(1).unwrap());
        assert_eq!(v[2], f.sub(&f.parse_scalar("1/2").unwrap(), &f.mul_int(&f.zeta_pow(1).unwrap(), 3)));
        assert!(parse_scalars("1:2:3", &f).is_err());
    }

    #[test]
    fn roundtrip_is_byte_identical() {
        let q = Field::rationals();
        let c = gwh_decompose(2, 4, 1, &q).unwrap();
        let s = serialize(&c);
        let back = parse(&s).unwrap();
        assert_eq!(back, c);
        assert_eq!(serialize(&back), s);
    }

    #[test]
    fn version_bump_rejected() {
        let c = gwh_decompose(2, 3, 1, &Field::rationals()).unwrap();
        let s = serialize(&c).replacen("\"version\": \"1\"", "\"version\": \"2\"", 1);
        assert_eq!(parse(&s).unwrap_err(), IoError::Version("2".into()));
    }

    #[test]
    fn truncation_reports_position() {
        let c = gwh_decompose(2, 3, 1, &Field::rationals()).unwrap();
        let s = serialize(&c);
        match parse(&s[..s.len() / 2]) {
            Err(IoError::Syntax { line, .. }) => assert!(line > 1),
            other => panic!("expected syntax error, got {other:?}"),
        }
    }

    #[test]
    fn field_specs() {
        assert_eq!(parse_field_spec("q").unwrap(), Field::rationals());
        assert_eq!(parse_field_spec("cyclotomic:12").unwrap(), Field::cyclotomic(12).unwrap());
        assert_eq!(parse_field_spec("fq:5,2,0,1").unwrap().order(), Some(25));
        assert!(parse_field_spec("gf:7").is_err());
    }
}
