//! JSON and CSV forms of density matrices and reports.
//!
//! Floats are written with 17 significant digits so that f64 values round-trip
//! exactly; non-finite values become `null`.

use std::io::{Read, Write};

use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize, Serializer};
use serde_json::value::RawValue;

use crate::entanglement::EntanglementReport;
use crate::error::{Error, Result};
use crate::scalar::{cplx, lit, to_f64, CMatrix, Real};
use crate::states::DensityMatrix;
use crate::tolerance::Tolerances;

/// `x` in scientific notation with 17 significant digits.
pub fn fmt17(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        "null".to_string()
    }
}

/// A float serialized by [`fmt17`]. Only meaningful with `serde_json`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sig17(pub f64);

impl Serialize for Sig17 {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let raw = RawValue::from_string(fmt17(self.0)).map_err(serde::ser::Error::custom)?;
        raw.serialize(s)
    }
}

/// For `#[serde(serialize_with = "sig17")]` on `f64` fields.
pub fn sig17<S: Serializer>(x: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    Sig17(*x).serialize(s)
}

pub fn sig17_opt<S: Serializer>(x: &Option<f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    x.map(Sig17).serialize(s)
}

fn sig<T: Real>(x: T) -> Sig17 {
    Sig17(to_f64(x))
}

#[derive(Serialize)]
struct TolerancesOut {
    hermitian: Sig17,
    trace: Sig17,
    psd: Sig17,
    ppt: Sig17,
    purity: Sig17,
    verdict: Sig17,
}

impl From<&Tolerances> for TolerancesOut {
    fn from(t: &Tolerances) -> Self {
        Self {
            hermitian: Sig17(t.hermitian),
            trace: Sig17(t.trace),
            psd: Sig17(t.psd),
            ppt: Sig17(t.ppt),
            purity: Sig17(t.purity),
            verdict: Sig17(t.verdict),
        }
    }
}

/// `{"dims": [d1, d2], "entries": [[re, im], ...]}`, entries row-major.
impl<T: Real> Serialize for DensityMatrix<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let m = self.matrix();
        let entries: Vec<[Sig17; 2]> = (0..m.nrows())
            .flat_map(|r| (0..m.ncols()).map(move |c| (r, c)))
            .map(|(r, c)| [sig(m[(r, c)].re), sig(m[(r, c)].im)])
            .collect();
        let (d1, d2) = self.dims();
        let mut st = s.serialize_struct("DensityMatrix", 2)?;
        st.serialize_field("dims", &[d1, d2])?;
        st.serialize_field("entries", &entries)?;
        st.end()
    }
}

impl<T: Real> Serialize for EntanglementReport<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let opt = |x: Option<T>| x.map(sig);
        let mut st = s.serialize_struct("EntanglementReport", 14)?;
        st.serialize_field("dims", &[self.dims.0, self.dims.1])?;
        st.serialize_field("purity", &sig(self.purity))?;
        st.serialize_field("pure", &self.pure)?;
        st.serialize_field("entropy", &opt(self.entropy))?;
        st.serialize_field(
            "schmidt",
            &self
                .schmidt
                .as_ref()
                .map(|v| v.iter().map(|&x| sig(x)).collect::<Vec<_>>()),
        )?;
        st.serialize_field("concurrence", &opt(self.concurrence))?;
        st.serialize_field("eof", &opt(self.eof))?;
        st.serialize_field("ppt_min_eigenvalue", &sig(self.ppt_min_eigenvalue))?;
        st.serialize_field("ppt", &self.ppt)?;
        st.serialize_field("product_residual", &sig(self.product_residual))?;
        st.serialize_field("decomposition_residual", &opt(self.decomposition_residual))?;
        st.serialize_field("separable_verdict", &self.separable_verdict)?;
        st.serialize_field("evidence", &self.evidence)?;
        st.serialize_field("tolerances", &TolerancesOut::from(&self.tolerances))?;
        st.end()
    }
}

#[derive(Deserialize)]
struct MatrixIn {
    dims: [usize; 2],
    entries: Vec<[f64; 2]>,
}

pub fn density_matrix_to_json<T: Real>(rho: &DensityMatrix<T>) -> String {
    serde_json::to_string(rho).expect("density matrix serializes")
}

/// Parses and validates a density matrix.
pub fn density_matrix_from_json<T: Real>(s: &str) -> Result<DensityMatrix<T>> {
    let m: MatrixIn = serde_json::from_str(s).map_err(|e| Error::Spec(e.to_string()))?;
    let [d1, d2] = m.dims;
    let d = d1 * d2;
    if m.entries.len() != d * d {
        return Err(Error::Shape {
            expected: d * d,
            got: m.entries.len(),
        });
    }
    let entries: Vec<_> = m
        .entries
        .iter()
        .map(|&[re, im]| cplx(lit::<T>(re), lit::<T>(im)))
        .collect();
    DensityMatrix::new(CMatrix::from_row_slice(d, d, &entries), (d1, d2))
}

/// CSV with header `row,col,re,im`, one line per entry in row-major order.
pub fn write_matrix_csv<T: Real, W: Write>(m: &CMatrix<T>, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::Spec(format!("csv: {e}"));
    w.write_record(["row", "col", "re", "im"]).map_err(io)?;
    for r in 0..m.nrows() {
        for c in 0..m.ncols() {
            let z = m[(r, c)];
            w.write_record([r.to_string(), c.to_string(), fmt17(to_f64(z.re)), fmt17(to_f64(z.im))])
                .map_err(io)?;
        }
    }
    w.flush().map_err(|e| Error::Spec(format!("csv: {e}")))
}

/// Reads what [`write_matrix_csv`] writes; the matrix is `d x d`.
pub fn read_matrix_csv<T: Real, R: Read>(input: R, d: usize) -> Result<CMatrix<T>> {
    #[derive(Deserialize)]
    struct Row {
        row: usize,
        col: usize,
        re: f64,
        im: f64,
    }
    let mut m = CMatrix::<T>::zeros(d, d);
    let mut seen = 0;
    for rec in csv::Reader::from_reader(input).deserialize::<Row>() {
        let row = rec.map_err(|e| Error::Spec(format!("csv: {e}")))?;
        if row.row >= d || row.col >= d {
            return Err(Error::Shape {
                expected: d,
                got: row.row.max(row.col) + 1,
            });
        }
        m[(row.row, row.col)] = cplx(lit(row.re), lit(row.im));
        seen += 1;
    }
    if seen != d * d {
        return Err(Error::Shape {
            expected: d * d,
            got: seen,
        });
    }
    Ok(m)
}
