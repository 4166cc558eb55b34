//! Dataset ingestion and persistence: the LIBSVM text format, seeded
//! synthetic ridge-regression instances, and CSV trajectory output.

use std::io::{BufRead, Write};

use crate::linalg::{DesignMatrix, ParamVector, SparseRow};
use crate::rng::GaussianSource;
use crate::stochastic::StochTrace;
use crate::Error;

/// Parses LIBSVM text: one record per line, `<label> <idx>:<val> ...` with
/// 1-based strictly increasing indices. Blank lines and lines starting with
/// `#` are skipped. The dimension is the largest index seen unless
/// `d_override` fixes it; `relabel_01` maps {0, 1} labels to {-1, +1} and is
/// an error when the file holds any other label set.
pub fn parse_libsvm(
    input: impl BufRead,
    d_override: Option<usize>,
    relabel_01: bool,
) -> Result<DesignMatrix, Error> {
    let mut rows: Vec<(Vec<usize>, Vec<f64>)> = Vec::new();
    let mut labels: Vec<f64> = Vec::new();
    let mut max_index = 0usize; // 1-based
    for (lineno, line) in input.lines().enumerate() {
        let lineno = lineno + 1;
        let line = line?;
        let text = line.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        let mut tokens = text.split_whitespace();
        let label_tok = tokens.next().unwrap();
        let label: f64 = label_tok.parse().map_err(|_| Error::Parse {
            line: lineno,
            msg: format!("bad label {label_tok:?}"),
        })?;
        let mut indices = Vec::new();
        let mut values = Vec::new();
        let mut prev_index = 0usize; // 1-based; 0 = none yet
        for tok in tokens {
            let (idx_str, val_str) = tok.split_once(':').ok_or_else(|| Error::Parse {
                line: lineno,
                msg: format!("expected idx:val, got {tok:?}"),
            })?;
            let idx: usize = idx_str.parse().map_err(|_| Error::Parse {
                line: lineno,
                msg: format!("bad feature index {idx_str:?}"),
            })?;
            let val: f64 = val_str.parse().map_err(|_| Error::Parse {
                line: lineno,
                msg: format!("bad feature value {val_str:?}"),
            })?;
            if idx == 0 {
                return Err(Error::Parse {
                    line: lineno,
                    msg: "feature indices are 1-based; found 0".into(),
                });
            }
            if idx <= prev_index {
                return Err(Error::Parse {
                    line: lineno,
                    msg: format!("indices must be strictly increasing: {prev_index} then {idx}"),
                });
            }
            prev_index = idx;
            max_index = max_index.max(idx);
            indices.push(idx - 1);
            values.push(val);
        }
        labels.push(label);
        rows.push((indices, values));
    }
    if rows.is_empty() {
        return Err(Error::InsufficientData);
    }
    let d = match d_override {
        Some(d) => {
            if d < max_index {
                return Err(Error::InvalidConfig(format!(
                    "dimension override {d} < largest feature index {max_index}"
                )));
            }
            d
        }
        None => {
            if max_index == 0 {
                return Err(Error::InsufficientData);
            }
            max_index
        }
    };
    if relabel_01 {
        for (i, y) in labels.iter_mut().enumerate() {
            *y = match *y {
                v if v == 0.0 => -1.0,
                v if v == 1.0 => 1.0,
                v => {
                    return Err(Error::Parse {
                        line: i + 1,
                        msg: format!("cannot relabel {v} (expected 0 or 1)"),
                    })
                }
            };
        }
    }
    let sparse_rows = rows
        .into_iter()
        .map(|(idx, val)| SparseRow::new(idx, val, d))
        .collect::<Result<Vec<_>, _>>()?;
    DesignMatrix::new(sparse_rows, labels, d)
}

/// Serializes a matrix back to LIBSVM text (1-based indices). Fixture
/// writer for round-trip tests.
pub fn write_libsvm(data: &DesignMatrix, mut sink: impl Write) -> Result<(), Error> {
    for i in 0..data.n() {
        write!(sink, "{}", format_float(data.label(i)))?;
        for (j, v) in data.row(i).iter() {
            write!(sink, " {}:{}", j + 1, format_float(v))?;
        }
        writeln!(sink)?;
    }
    Ok(())
}

/// Parameters of a synthetic ridge instance.
#[derive(Debug, Clone, Copy)]
pub struct SyntheticSpec {
    pub n: usize,
    pub d: usize,
    pub seed: u64,
}

/// Draws a dense standard-normal design matrix A and planted solution x*,
/// with labels y = A x* + e for standard-normal noise e. Draw order is
/// fixed (x* first, then A row-major, then the noise vector) so the
/// instance is bit-reproducible per seed.
pub fn generate_synthetic_ridge(spec: &SyntheticSpec) -> (DesignMatrix, ParamVector) {
    assert!(spec.n >= 1 && spec.d >= 1);
    let mut gauss = GaussianSource::new(spec.seed);
    let x_true = ParamVector::new((0..spec.d).map(|_| gauss.next()).collect());
    let mut rows = Vec::with_capacity(spec.n);
    for _ in 0..spec.n {
        let dense: Vec<f64> = (0..spec.d).map(|_| gauss.next()).collect();
        rows.push(SparseRow::from_dense(&dense));
    }
    let labels: Vec<f64> = rows
        .iter()
        .map(|r| crate::linalg::sparse_dot(r, &x_true) + gauss.next())
        .collect();
    let data = DesignMatrix::new(rows, labels, spec.d).expect("generated matrix is valid");
    (data, x_true)
}

/// Column header of every trajectory CSV.
pub const TRACE_CSV_HEADER: &str =
    "outer_iter,f_value,suboptimality,eta,grad_evals,passes,wall_seconds";

/// Formats a float with 17 significant digits so it round-trips exactly.
pub fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

/// Writes one CSV row per outer-iteration record. `f_star` supplies the
/// suboptimality column f(x_k) - f*; `n` converts gradient evaluations to
/// passes through the data.
pub fn write_trace_csv(
    trace: &StochTrace,
    f_star: f64,
    n: usize,
    mut sink: impl Write,
) -> Result<(), Error> {
    assert!(n >= 1);
    writeln!(sink, "{TRACE_CSV_HEADER}")?;
    for r in &trace.records {
        writeln!(
            sink,
            "{},{},{},{},{},{},{}",
            r.outer_iter,
            format_float(r.f_value),
            format_float(r.f_value - f_star),
            format_float(r.eta),
            r.grad_evals,
            format_float(r.grad_evals as f64 / n as f64),
            format_float(r.wall_seconds),
        )?;
    }
    Ok(())
}
