//! Self-describing records for every object the CLI produces, in two
//! encodings: a line-oriented text format and JSON.
//!
//! Text layout:
//!
//! ```text
//! # isoclinic export v1
//! kind = conference
//! order = 5
//! ...
//! entries complex
//! [[0.0000000000000000e0, 0.0000000000000000e0], [...], ...]
//! ...
//! exponents
//! [0, 1, -1, -1, 1]
//! ...
//! ```
//!
//! Every float is written with 17 significant digits, so parsing recovers
//! the exact bits.

use std::fmt::Write as _;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::admissible::Admissible;
use crate::conference::{build_conference, critical_omega, scale_row_col, ConferenceMatrix, UnitComplex};
use crate::error::Error;
use crate::gf::FieldCtx;
use crate::hadamard::double;
use crate::planes::{build_gram, extract_bases, plane_parameter};
use crate::seidel::{build_seidel, transport_scaling, verify_seidel_square, INVOLUTION_TOL};

pub const TEXT_MAGIC: &str = "# isoclinic export v1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Conference,
    Seidel,
    Gram,
    Planes,
    Hadamard,
}

impl Kind {
    pub fn as_str(self) -> &'static str {
        match self {
            Kind::Conference => "conference",
            Kind::Seidel => "seidel",
            Kind::Gram => "gram",
            Kind::Planes => "planes",
            Kind::Hadamard => "hadamard",
        }
    }
}

impl FromStr for Kind {
    type Err = FormatError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "conference" => Kind::Conference,
            "seidel" => Kind::Seidel,
            "gram" => Kind::Gram,
            "planes" => Kind::Planes,
            "hadamard" => Kind::Hadamard,
            other => return Err(FormatError::new(format!("unknown kind {other:?}"))),
        })
    }
}

/// Row/column scaling applied after construction.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Scaling {
    pub index: usize,
    pub eta: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub p: u64,
    pub alpha: u32,
    /// Field modulus, constant term first.
    pub modulus: Vec<u64>,
    pub omega_branch: String,
    /// `[re, im]` of omega.
    pub omega: [f64; 2],
    /// `[numerator, denominator]` of lambda.
    pub lambda: [i64; 2],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scaling: Option<Scaling>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Entries {
    Complex(Vec<Vec<[f64; 2]>>),
    Real(Vec<Vec<f64>>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExportRecord {
    pub kind: Kind,
    /// Conference order q = 2k - 1.
    pub order: usize,
    pub k: usize,
    pub rows: usize,
    pub cols: usize,
    pub theta: f64,
    pub cos_2theta: f64,
    pub metadata: Metadata,
    pub entries: Entries,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exponents: Option<Vec<Vec<i8>>>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{0}")]
pub struct FormatError(String);

impl FormatError {
    fn new(msg: impl Into<String>) -> Self {
        Self(msg.into())
    }
}

fn complex_rows(m: &DMatrix<Complex64>) -> Vec<Vec<[f64; 2]>> {
    m.row_iter().map(|r| r.iter().map(|z| [z.re, z.im]).collect()).collect()
}

fn real_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

/// Generates the record for `kind` at an admissible k.
///
/// `scaling` only applies to `conference` and `seidel`; it multiplies
/// row/column `index` by `e^{i eta}` (or its block transport) and drops
/// the symbolic layer.
pub fn generate(kind: Kind, adm: &Admissible, scaling: Option<Scaling>) -> Result<ExportRecord, Error> {
    let ctx = FieldCtx::new(adm.p, adm.alpha)?;
    let k = adm.k;
    let omega = critical_omega(k as i64)?;
    let theta = omega.arg();
    let lambda = plane_parameter(k);

    let mut conference = build_conference(&ctx, omega)?;
    if let (Kind::Conference, Some(s)) = (kind, scaling) {
        conference = scale_row_col(&conference, s.index, UnitComplex::from_angle(s.eta))?;
    }
    let (entries, exponents, rows, cols) = match kind {
        Kind::Conference => {
            let exps = conference
                .exponents()
                .map(|e| e.row_iter().map(|r| r.iter().copied().collect()).collect());
            (Entries::Complex(complex_rows(conference.values())), exps, adm.q, adm.q)
        }
        Kind::Seidel => {
            let mut s = build_seidel(&ctx, k)?;
            if let Some(sc) = scaling {
                s = transport_scaling(&s, sc.index, sc.eta)?;
            }
            (Entries::Real(real_rows(s.dense())), None, 2 * adm.q, 2 * adm.q)
        }
        Kind::Gram => {
            let a = build_gram(&build_seidel(&ctx, k)?);
            (Entries::Real(real_rows(&a)), None, 2 * adm.q, 2 * adm.q)
        }
        Kind::Planes => {
            let s = build_seidel(&ctx, k)?;
            let residual = verify_seidel_square(&s);
            if residual > INVOLUTION_TOL {
                return Err(Error::NotInvolutory(residual));
            }
            let pt = extract_bases(&build_gram(&s), adm.q, lambda)?;
            (Entries::Real(real_rows(&pt.basis)), None, adm.q, 2 * adm.q)
        }
        Kind::Hadamard => {
            let h = double(&conference)?;
            (Entries::Complex(complex_rows(h.values())), None, 2 * adm.q, 2 * adm.q)
        }
    };

    Ok(ExportRecord {
        kind,
        order: adm.q,
        k,
        rows,
        cols,
        theta,
        cos_2theta: (2.0 * theta).cos(),
        metadata: Metadata {
            p: adm.p,
            alpha: adm.alpha,
            modulus: ctx.modulus().to_vec(),
            omega_branch: "principal".to_string(),
            omega: [omega.re(), omega.im()],
            lambda: [*lambda.numer(), *lambda.denom()],
            scaling: scaling.filter(|_| matches!(kind, Kind::Conference | Kind::Seidel)),
        },
        entries,
        exponents,
    })
}

impl ExportRecord {
    pub fn complex_matrix(&self) -> Result<DMatrix<Complex64>, FormatError> {
        match &self.entries {
            Entries::Complex(rows) => {
                self.check_shape(rows.len(), rows.iter().map(Vec::len))?;
                Ok(DMatrix::from_fn(self.rows, self.cols, |i, j| {
                    let [re, im] = rows[i][j];
                    Complex64::new(re, im)
                }))
            }
            Entries::Real(_) => Err(FormatError::new("expected complex entries")),
        }
    }

    pub fn real_matrix(&self) -> Result<DMatrix<f64>, FormatError> {
        match &self.entries {
            Entries::Real(rows) => {
                self.check_shape(rows.len(), rows.iter().map(Vec::len))?;
                Ok(DMatrix::from_fn(self.rows, self.cols, |i, j| rows[i][j]))
            }
            Entries::Complex(_) => Err(FormatError::new("expected real entries")),
        }
    }

    fn check_shape(&self, n_rows: usize, mut lens: impl Iterator<Item = usize>) -> Result<(), FormatError> {
        if n_rows != self.rows || !lens.all(|l| l == self.cols) {
            return Err(FormatError::new(format!(
                "entries do not form a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        Ok(())
    }

    pub fn exponent_matrix(&self) -> Result<Option<DMatrix<i8>>, FormatError> {
        let Some(rows) = &self.exponents else {
            return Ok(None);
        };
        self.check_shape(rows.len(), rows.iter().map(Vec::len))?;
        Ok(Some(DMatrix::from_fn(self.rows, self.cols, |i, j| rows[i][j])))
    }

    pub fn omega(&self) -> Result<UnitComplex, FormatError> {
        let [re, im] = self.metadata.omega;
        UnitComplex::new(re, im).map_err(|e| FormatError::new(e.to_string()))
    }

    /// Reads a conference record back into a matrix.
    pub fn to_conference(&self) -> Result<ConferenceMatrix, FormatError> {
        if self.kind != Kind::Conference {
            return Err(FormatError::new("not a conference record"));
        }
        ConferenceMatrix::from_parts(self.omega()?, self.exponent_matrix()?, self.complex_matrix()?)
            .map_err(|e| FormatError::new(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("records contain only finite numbers");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> Result<Self, FormatError> {
        serde_json::from_str(s).map_err(|e| FormatError::new(format!("invalid JSON record: {e}")))
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let m = &self.metadata;
        let _ = writeln!(out, "{TEXT_MAGIC}");
        let _ = writeln!(out, "kind = {}", self.kind.as_str());
        let _ = writeln!(out, "order = {}", self.order);
        let _ = writeln!(out, "k = {}", self.k);
        let _ = writeln!(out, "rows = {}", self.rows);
        let _ = writeln!(out, "cols = {}", self.cols);
        let _ = writeln!(out, "theta = {}", fmt_f64(self.theta));
        let _ = writeln!(out, "cos_2theta = {}", fmt_f64(self.cos_2theta));
        let _ = writeln!(out, "p = {}", m.p);
        let _ = writeln!(out, "alpha = {}", m.alpha);
        let _ = writeln!(out, "modulus = {}", join(m.modulus.iter().map(u64::to_string)));
        let _ = writeln!(out, "omega_branch = {}", m.omega_branch);
        let _ = writeln!(out, "omega = [{}, {}]", fmt_f64(m.omega[0]), fmt_f64(m.omega[1]));
        let _ = writeln!(out, "lambda = {}/{}", m.lambda[0], m.lambda[1]);
        if let Some(s) = m.scaling {
            let _ = writeln!(out, "scaling = {} {}", s.index, fmt_f64(s.eta));
        }
        match &self.entries {
            Entries::Complex(rows) => {
                let _ = writeln!(out, "entries complex");
                for r in rows {
                    let cells = r.iter().map(|[re, im]| format!("[{}, {}]", fmt_f64(*re), fmt_f64(*im)));
                    let _ = writeln!(out, "{}", join(cells));
                }
            }
            Entries::Real(rows) => {
                let _ = writeln!(out, "entries real");
                for r in rows {
                    let _ = writeln!(out, "{}", join(r.iter().map(|x| fmt_f64(*x))));
                }
            }
        }
        if let Some(e) = &self.exponents {
            let _ = writeln!(out, "exponents");
            for r in e {
                let _ = writeln!(out, "{}", join(r.iter().map(i8::to_string)));
            }
        }
        out
    }

    pub fn from_text(s: &str) -> Result<Self, FormatError> {
        let mut lines = s.lines().map(str::trim).filter(|l| !l.is_empty());
        if lines.next() != Some(TEXT_MAGIC) {
            return Err(FormatError::new("missing export header"));
        }
        let mut header = std::collections::BTreeMap::new();
        let entries_kind = loop {
            let line = lines
                .next()
                .ok_or_else(|| FormatError::new("missing entries section"))?;
            if let Some(kind) = line.strip_prefix("entries ") {
                break kind.trim().to_string();
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| FormatError::new(format!("malformed header line {line:?}")))?;
            header.insert(key.trim().to_string(), value.trim().to_string());
        };
        let get = |key: &str| {
            header
                .get(key)
                .map(String::as_str)
                .ok_or_else(|| FormatError::new(format!("missing header key {key:?}")))
        };

        let rows: usize = parse(get("rows")?)?;
        let cols: usize = parse(get("cols")?)?;
        let body: Vec<&str> = lines.collect();
        let (entry_lines, exponent_lines) = match body.iter().position(|l| *l == "exponents") {
            Some(i) => (&body[..i], Some(&body[i + 1..])),
            None => (&body[..], None),
        };
        if entry_lines.len() != rows {
            return Err(FormatError::new(format!(
                "expected {rows} entry rows, found {}",
                entry_lines.len()
            )));
        }
        let entries = match entries_kind.as_str() {
            "complex" => Entries::Complex(
                entry_lines
                    .iter()
                    .map(|l| {
                        let nums = numbers::<f64>(l)?;
                        if nums.len() % 2 != 0 {
                            return Err(FormatError::new("odd number of complex components"));
                        }
                        Ok(nums.chunks(2).map(|c| [c[0], c[1]]).collect())
                    })
                    .collect::<Result<_, _>>()?,
            ),
            "real" => Entries::Real(
                entry_lines
                    .iter()
                    .map(|l| numbers::<f64>(l))
                    .collect::<Result<_, _>>()?,
            ),
            other => return Err(FormatError::new(format!("unknown entry type {other:?}"))),
        };
        let exponents = exponent_lines
            .map(|ls| ls.iter().map(|l| numbers::<i8>(l)).collect::<Result<Vec<_>, _>>())
            .transpose()?;

        let omega = numbers::<f64>(get("omega")?)?;
        let lambda: Vec<i64> = get("lambda")?
            .split('/')
            .map(|x| parse(x.trim()))
            .collect::<Result<_, _>>()?;
        if omega.len() != 2 || lambda.len() != 2 {
            return Err(FormatError::new("omega and lambda need two components"));
        }
        let scaling = header
            .get("scaling")
            .map(|s| {
                let parts: Vec<&str> = s.split_whitespace().collect();
                match parts.as_slice() {
                    [i, e] => Ok(Scaling {
                        index: parse(i)?,
                        eta: parse(e)?,
                    }),
                    _ => Err(FormatError::new("scaling needs an index and an angle")),
                }
            })
            .transpose()?;

        let record = ExportRecord {
            kind: get("kind")?.parse()?,
            order: parse(get("order")?)?,
            k: parse(get("k")?)?,
            rows,
            cols,
            theta: parse(get("theta")?)?,
            cos_2theta: parse(get("cos_2theta")?)?,
            metadata: Metadata {
                p: parse(get("p")?)?,
                alpha: parse(get("alpha")?)?,
                modulus: get("modulus")?
                    .split_whitespace()
                    .map(parse)
                    .collect::<Result<_, _>>()?,
                omega_branch: get("omega_branch")?.to_string(),
                omega: [omega[0], omega[1]],
                lambda: [lambda[0], lambda[1]],
                scaling,
            },
            entries,
            exponents,
        };
        Ok(record)
    }

    /// Parses either encoding, choosing by the first non-blank character.
    pub fn parse(s: &str) -> Result<Self, FormatError> {
        if s.trim_start().starts_with('{') {
            Self::from_json(s)
        } else {
            Self::from_text(s)
        }
    }
}

fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn join(items: impl Iterator<Item = String>) -> String {
    items.collect::<Vec<_>>().join(" ")
}

fn parse<T: FromStr>(s: &str) -> Result<T, FormatError> {
    s.parse().map_err(|_| FormatError::new(format!("cannot parse {s:?}")))
}

/// Every number in a line, ignoring brackets and commas.
fn numbers<T: FromStr>(line: &str) -> Result<Vec<T>, FormatError> {
    line.split(|c: char| c == '[' || c == ']' || c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(parse)
        .collect()
}
