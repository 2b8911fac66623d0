//! Binary model container.
//!
//! Layout (all integers and floats little-endian):
//!
//! ```text
//! magic      "HKSM1"
//! header     u32 byte length + UTF-8 text (free-form provenance comment)
//! kind       u8: 0 = sparse matrix, 1 = SVD factors
//! weighting  u8: 0 = ppmi, 1 = prob
//! vocabulary u64 count, then per term u32 byte length + UTF-8 bytes, in index order
//! sparse     u64 rows, u64 nnz, (rows+1) × u64 row pointers, nnz × u64 column
//!            indices, nnz × f64 values, rows × f64 p⁻, rows × f64 p⁺
//! svd        u64 r, u64 m, r × f64 Σ, m·r × f64 U (row-major), m·r × f64 V (row-major)
//! ```

use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::scorer::{PairMatrix, SmoothedModel, Vocabulary, Weighting};
use crate::sparse::CsrMatrix;
use crate::svd::SvdModel;

pub const MAGIC: &[u8; 5] = b"HKSM1";

const KIND_SPARSE: u8 = 0;
const KIND_SVD: u8 = 1;

#[derive(Debug, Clone, PartialEq)]
pub enum Model {
    Sparse(PairMatrix),
    Smoothed(SmoothedModel),
}

impl Model {
    pub fn vocab(&self) -> &Vocabulary {
        match self {
            Model::Sparse(m) => &m.vocab,
            Model::Smoothed(m) => &m.vocab,
        }
    }

    pub fn weighting(&self) -> Weighting {
        match self {
            Model::Sparse(m) => m.weighting,
            Model::Smoothed(m) => m.weighting,
        }
    }

    /// `None` for out-of-vocabulary pairs.
    pub fn score(&self, x: &str, y: &str) -> Option<f64> {
        match self {
            Model::Sparse(m) => m.score(x, y),
            Model::Smoothed(m) => m.score(x, y),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Model::Sparse(m) => m.weighting.sparse_name(),
            Model::Smoothed(m) => m.weighting.smoothed_name(),
        }
    }
}

/// A decoded model file: the model plus its header comment.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelFile {
    pub header: String,
    pub model: Model,
}

fn weighting_byte(w: Weighting) -> u8 {
    match w {
        Weighting::Ppmi => 0,
        Weighting::Prob => 1,
    }
}

fn put_u64(out: &mut Vec<u8>, v: u64) {
    out.extend_from_slice(&v.to_le_bytes());
}

fn put_f64s(out: &mut Vec<u8>, vs: &[f64]) {
    for v in vs {
        out.extend_from_slice(&v.to_le_bytes());
    }
}

fn put_str(out: &mut Vec<u8>, s: &str) -> Result<()> {
    let len = u32::try_from(s.len()).map_err(|_| Error::Model("string longer than 4 GiB".into()))?;
    out.extend_from_slice(&len.to_le_bytes());
    out.extend_from_slice(s.as_bytes());
    Ok(())
}

pub fn encode(model: &Model, header: &str) -> Result<Vec<u8>> {
    let mut out = Vec::new();
    out.extend_from_slice(MAGIC);
    put_str(&mut out, header)?;
    let kind = match model {
        Model::Sparse(_) => KIND_SPARSE,
        Model::Smoothed(_) => KIND_SVD,
    };
    out.push(kind);
    out.push(weighting_byte(model.weighting()));
    let vocab = model.vocab();
    put_u64(&mut out, vocab.len() as u64);
    for term in vocab.terms() {
        put_str(&mut out, term)?;
    }
    match model {
        Model::Sparse(m) => {
            let a = &m.matrix;
            put_u64(&mut out, a.rows() as u64);
            put_u64(&mut out, a.nnz() as u64);
            for &p in a.row_ptr() {
                put_u64(&mut out, p as u64);
            }
            for &c in a.col_indices() {
                put_u64(&mut out, c as u64);
            }
            put_f64s(&mut out, a.values());
            put_f64s(&mut out, &m.hypo_marginal);
            put_f64s(&mut out, &m.hyper_marginal);
        }
        Model::Smoothed(m) => {
            let s = &m.svd;
            put_u64(&mut out, s.rank() as u64);
            put_u64(&mut out, s.rows() as u64);
            put_f64s(&mut out, s.singular_values());
            put_f64s(&mut out, s.u_factor());
            put_f64s(&mut out, s.v_factor());
        }
    }
    Ok(out)
}

struct Decoder<'a> {
    data: &'a [u8],
    pos: usize,
}

impl<'a> Decoder<'a> {
    fn take(&mut self, n: usize, what: &str) -> Result<&'a [u8]> {
        if self.data.len() - self.pos < n {
            return Err(Error::Model(format!("truncated model file while reading {what}")));
        }
        let s = &self.data[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }

    fn u8(&mut self, what: &str) -> Result<u8> {
        Ok(self.take(1, what)?[0])
    }

    fn u32(&mut self, what: &str) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4, what)?.try_into().expect("4 bytes")))
    }

    fn u64(&mut self, what: &str) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8, what)?.try_into().expect("8 bytes")))
    }

    /// Element count checked against the bytes left, so corrupt lengths cannot
    /// trigger huge allocations.
    fn count(&mut self, elem_size: usize, what: &str) -> Result<usize> {
        let n = self.u64(what)?;
        self.check_fits(n, elem_size, what)
    }

    fn check_fits(&self, n: u64, elem_size: usize, what: &str) -> Result<usize> {
        let remaining = (self.data.len() - self.pos) as u64;
        match n.checked_mul(elem_size as u64) {
            Some(bytes) if bytes <= remaining => Ok(n as usize),
            _ => Err(Error::Model(format!("{what} length {n} exceeds file size"))),
        }
    }

    fn string(&mut self, what: &str) -> Result<String> {
        let len = self.u32(what)? as usize;
        let bytes = self.take(len, what)?;
        String::from_utf8(bytes.to_vec()).map_err(|_| Error::Model(format!("{what} is not valid UTF-8")))
    }

    fn u64s(&mut self, n: usize, what: &str) -> Result<Vec<usize>> {
        self.check_fits(n as u64, 8, what)?;
        (0..n)
            .map(|_| {
                let v = self.u64(what)?;
                usize::try_from(v).map_err(|_| Error::Model(format!("{what} value {v} overflows")))
            })
            .collect()
    }

    fn f64s(&mut self, n: usize, what: &str) -> Result<Vec<f64>> {
        self.check_fits(n as u64, 8, what)?;
        (0..n).map(|_| self.u64(what).map(f64::from_bits)).collect()
    }
}

pub fn decode(data: &[u8]) -> Result<ModelFile> {
    if data.len() < MAGIC.len() || &data[..MAGIC.len()] != MAGIC {
        return Err(Error::Model("bad magic bytes: not an HKSM1 model file".into()));
    }
    let mut d = Decoder { data, pos: MAGIC.len() };
    let header = d.string("header")?;
    let kind = d.u8("kind")?;
    let weighting = match d.u8("weighting")? {
        0 => Weighting::Ppmi,
        1 => Weighting::Prob,
        other => return Err(Error::Model(format!("unknown weighting byte {other}"))),
    };
    let m = d.count(4, "vocabulary")?;
    let mut terms = Vec::with_capacity(m);
    for _ in 0..m {
        terms.push(d.string("vocabulary term")?);
    }
    let vocab = Vocabulary::from_terms(terms).map_err(|e| Error::Model(e.to_string()))?;
    let model = match kind {
        KIND_SPARSE => {
            let rows = d.u64("rows")?;
            let nnz = d.u64("nnz")?;
            if rows != m as u64 {
                return Err(Error::Model(format!("matrix has {rows} rows but vocabulary has {m} terms")));
            }
            let row_ptr = d.u64s(m + 1, "row pointers")?;
            let nnz = d.check_fits(nnz, 16, "nnz")?;
            let cols = d.u64s(nnz, "column indices")?;
            let values = d.f64s(nnz, "values")?;
            let hypo_marginal = d.f64s(m, "hyponym marginals")?;
            let hyper_marginal = d.f64s(m, "hypernym marginals")?;
            if values.iter().chain(&hypo_marginal).chain(&hyper_marginal).any(|v| !v.is_finite() || *v < 0.0) {
                return Err(Error::Model("negative or non-finite matrix entry".into()));
            }
            let matrix = CsrMatrix::from_parts(m, m, row_ptr, cols, values).map_err(|e| Error::Model(e.to_string()))?;
            Model::Sparse(PairMatrix { vocab, weighting, matrix, hypo_marginal, hyper_marginal })
        }
        KIND_SVD => {
            let rank = d.u64("rank")?;
            let rows = d.u64("rows")?;
            if rows != m as u64 {
                return Err(Error::Model(format!("factors have {rows} rows but vocabulary has {m} terms")));
            }
            let rank = d.check_fits(rank, 8, "rank")?;
            let sigma = d.f64s(rank, "singular values")?;
            let len = rank.checked_mul(m).ok_or_else(|| Error::Model("factor size overflows".into()))?;
            let u = d.f64s(len, "U factor")?;
            let v = d.f64s(len, "V factor")?;
            let svd = SvdModel::from_parts(rank, m, m, sigma, u, v).map_err(|e| Error::Model(e.to_string()))?;
            Model::Smoothed(SmoothedModel { vocab, weighting, svd })
        }
        other => return Err(Error::Model(format!("unknown model kind byte {other}"))),
    };
    if d.pos != data.len() {
        return Err(Error::Model(format!("{} trailing bytes after model", data.len() - d.pos)));
    }
    Ok(ModelFile { header, model })
}

pub fn write_model<W: Write>(mut w: W, model: &Model, header: &str) -> Result<()> {
    w.write_all(&encode(model, header)?)?;
    w.flush()?;
    Ok(())
}

pub fn read_model<R: Read>(mut r: R) -> Result<ModelFile> {
    let mut data = Vec::new();
    r.read_to_end(&mut data)?;
    decode(&data)
}

pub fn save(path: &Path, model: &Model, header: &str) -> Result<()> {
    std::fs::write(path, encode(model, header)?)?;
    Ok(())
}

pub fn load(path: &Path) -> Result<ModelFile> {
    decode(&std::fs::read(path)?)
}
