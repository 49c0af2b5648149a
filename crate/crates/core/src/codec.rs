//! JSON encodings of every value that crosses a file boundary.
//!
//! Ring elements are written as decimal strings (`"a/b"` for rationals);
//! decoders also accept JSON integers. Multidegrees are written as `"(i,j)"`.
//! Decoders report the JSON path of the first offending value.

use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::complexes::{AcyclicityWitness, FreeComplex};
use crate::multicomplex::{
    format_degree, parse_degree, BinaryMulticomplex, GradedMap, GradingBox, MulticomplexBuilder, NilBinaryMulticomplex,
};
use crate::nil_category::{NilObject, NilSesWitness, VanishingCertificate};
use crate::pid_modules::PresentedModule;
use crate::ring_core::{Matrix, PrimeField, Ring, RingDescriptor};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("at {path}: expected {expected}")]
pub struct DecodeError {
    pub path: String,
    pub expected: String,
}

impl DecodeError {
    pub fn new(path: &str, expected: impl Into<String>) -> Self {
        DecodeError { path: path.to_string(), expected: expected.into() }
    }
}

type Result<T> = std::result::Result<T, DecodeError>;

pub fn field<'a>(v: &'a Value, key: &str, path: &str) -> Result<&'a Value> {
    v.as_object()
        .ok_or_else(|| DecodeError::new(path, "an object"))?
        .get(key)
        .ok_or_else(|| DecodeError::new(path, format!("a field {key:?}")))
}

pub fn as_usize(v: &Value, path: &str) -> Result<usize> {
    v.as_u64().map(|x| x as usize).ok_or_else(|| DecodeError::new(path, "a nonnegative integer"))
}

pub fn as_i64(v: &Value, path: &str) -> Result<i64> {
    v.as_i64().ok_or_else(|| DecodeError::new(path, "an integer"))
}

pub fn as_array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| DecodeError::new(path, "an array"))
}

pub fn as_object<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| DecodeError::new(path, "an object"))
}

pub fn as_str<'a>(v: &'a Value, path: &str) -> Result<&'a str> {
    v.as_str().ok_or_else(|| DecodeError::new(path, "a string"))
}

pub fn encode_ring(d: RingDescriptor) -> Value {
    match d {
        RingDescriptor::Integers => json!({"ring": "Z"}),
        RingDescriptor::PrimeField(p) => json!({"ring": "Fp", "p": p}),
        RingDescriptor::Rationals => json!({"ring": "Q"}),
    }
}

pub fn decode_ring(v: &Value, path: &str) -> Result<RingDescriptor> {
    match as_str(field(v, "ring", path)?, &format!("{path}.ring"))? {
        "Z" => Ok(RingDescriptor::Integers),
        "Q" => Ok(RingDescriptor::Rationals),
        "Fp" => {
            let p_path = format!("{path}.p");
            let p = field(v, "p", path)?.as_u64().ok_or_else(|| DecodeError::new(&p_path, "a prime"))?;
            PrimeField::new(p).map_err(|e| DecodeError::new(&p_path, format!("a prime below 2^63 ({e})")))?;
            Ok(RingDescriptor::PrimeField(p))
        }
        _ => Err(DecodeError::new(&format!("{path}.ring"), "one of \"Z\", \"Fp\", \"Q\"")),
    }
}

pub fn encode_matrix<R: Ring>(ring: &R, m: &Matrix<R::Elem>) -> Value {
    let entries: Vec<Value> =
        (0..m.rows()).map(|i| Value::Array(m.row(i).iter().map(|e| Value::String(ring.render(e))).collect())).collect();
    json!({"rows": m.rows(), "cols": m.cols(), "entries": entries})
}

pub fn decode_element<R: Ring>(ring: &R, v: &Value, path: &str) -> Result<R::Elem> {
    let text = match v {
        Value::String(s) => s.clone(),
        Value::Number(n) if n.is_i64() || n.is_u64() => n.to_string(),
        _ => return Err(DecodeError::new(path, format!("an element of {} as a string", ring.descriptor()))),
    };
    ring.parse(&text).map_err(|_| DecodeError::new(path, format!("an element of {}", ring.descriptor())))
}

pub fn decode_matrix<R: Ring>(ring: &R, v: &Value, path: &str) -> Result<Matrix<R::Elem>> {
    let rows = as_usize(field(v, "rows", path)?, &format!("{path}.rows"))?;
    let cols = as_usize(field(v, "cols", path)?, &format!("{path}.cols"))?;
    let entries_path = format!("{path}.entries");
    let grid = as_array(field(v, "entries", path)?, &entries_path)?;
    if grid.len() != rows {
        return Err(DecodeError::new(&entries_path, format!("{rows} rows")));
    }
    let mut entries = Vec::with_capacity(rows * cols);
    for (i, row) in grid.iter().enumerate() {
        let row_path = format!("{entries_path}[{i}]");
        let row = as_array(row, &row_path)?;
        if row.len() != cols {
            return Err(DecodeError::new(&row_path, format!("{cols} entries")));
        }
        for (j, e) in row.iter().enumerate() {
            entries.push(decode_element(ring, e, &format!("{row_path}[{j}]"))?);
        }
    }
    Ok(Matrix::from_vec(rows, cols, entries))
}

pub fn encode_module<R: Ring>(ring: &R, m: &PresentedModule<R::Elem>) -> Value {
    let factors: Vec<Value> = m.invariant_factors().iter().map(|e| Value::String(ring.render(e))).collect();
    json!({
        "generators": m.generators(),
        "relations": encode_matrix(ring, m.relations()),
        "invariant_factors": factors,
    })
}

pub fn decode_module<R: Ring>(ring: &R, v: &Value, path: &str) -> Result<PresentedModule<R::Elem>> {
    let g = as_usize(field(v, "generators", path)?, &format!("{path}.generators"))?;
    let rel_path = format!("{path}.relations");
    let rel = decode_matrix(ring, field(v, "relations", path)?, &rel_path)?;
    PresentedModule::new(ring, g, &rel).map_err(|e| DecodeError::new(&rel_path, format!("a relation matrix ({e})")))
}

pub fn encode_nil_object<R: Ring>(ring: &R, obj: &NilObject<R::Elem>) -> Value {
    json!({"rank": obj.rank(), "nu": encode_matrix(ring, obj.nu())})
}

pub fn decode_nil_object<R: Ring>(ring: &R, v: &Value, path: &str) -> Result<NilObject<R::Elem>> {
    let (rank, nu) = nil_object_parts(ring, v, path)?;
    NilObject::new(ring, rank, nu)
        .map_err(|e| DecodeError::new(&format!("{path}.nu"), format!("a nilpotent {rank}x{rank} matrix ({e})")))
}

fn nil_object_parts<R: Ring>(ring: &R, v: &Value, path: &str) -> Result<(usize, Matrix<R::Elem>)> {
    let rank = as_usize(field(v, "rank", path)?, &format!("{path}.rank"))?;
    let nu = decode_matrix(ring, field(v, "nu", path)?, &format!("{path}.nu"))?;
    Ok((rank, nu))
}

/// Keeps malformed objects (wrong shape, not nilpotent) so that a verifier
/// can reject them with a named defect.
fn decode_nil_object_lenient<R: Ring>(ring: &R, v: &Value, path: &str) -> Result<NilObject<R::Elem>> {
    let (rank, nu) = nil_object_parts(ring, v, path)?;
    Ok(NilObject::new(ring, rank, nu.clone()).unwrap_or_else(|_| NilObject::raw(rank, nu, 0)))
}

pub fn encode_complex<R: Ring>(ring: &R, c: &FreeComplex<R::Elem>) -> Value {
    let diffs: Vec<Value> = c.diffs().iter().map(|m| encode_matrix(ring, m)).collect();
    json!({"lo": c.lo(), "hi": c.hi(), "ranks": c.ranks(), "diffs": diffs})
}

pub fn decode_complex<R: Ring>(ring: &R, v: &Value, path: &str) -> Result<FreeComplex<R::Elem>> {
    let lo = as_i64(field(v, "lo", path)?, &format!("{path}.lo"))?;
    let hi = as_i64(field(v, "hi", path)?, &format!("{path}.hi"))?;
    let ranks_path = format!("{path}.ranks");
    let ranks = as_array(field(v, "ranks", path)?, &ranks_path)?
        .iter()
        .enumerate()
        .map(|(i, r)| as_usize(r, &format!("{ranks_path}[{i}]")))
        .collect::<Result<Vec<_>>>()?;
    let diffs_path = format!("{path}.diffs");
    let diffs = as_array(field(v, "diffs", path)?, &diffs_path)?
        .iter()
        .enumerate()
        .map(|(i, m)| decode_matrix(ring, m, &format!("{diffs_path}[{i}]")))
        .collect::<Result<Vec<_>>>()?;
    FreeComplex::new(lo, hi, ranks, diffs).map_err(|e| DecodeError::new(path, format!("a well-formed complex ({e})")))
}

pub fn encode_acyclicity_witness<R: Ring>(ring: &R, lo: i64, w: &AcyclicityWitness<R::Elem>) -> Value {
    let list = |ms: &[Matrix<R::Elem>]| Value::Array(ms.iter().map(|m| encode_matrix(ring, m)).collect());
    json!({
        "lo": lo,
        "cycles": list(&w.cycles),
        "projections": list(&w.projections),
        "sections": list(&w.sections),
    })
}

pub fn encode_certificate<R: Ring>(ring: &R, cert: &VanishingCertificate<R::Elem>) -> Value {
    let chain: Vec<Value> = cert
        .ses_chain
        .iter()
        .map(|w| {
            json!({
                "left": encode_nil_object(ring, &w.left),
                "middle": encode_nil_object(ring, &w.middle),
                "right": encode_nil_object(ring, &w.right),
                "iota": encode_matrix(ring, &w.iota),
                "pi": encode_matrix(ring, &w.pi),
                "section": encode_matrix(ring, &w.section),
            })
        })
        .collect();
    json!({
        "ring": encode_ring(ring.descriptor()),
        "target": encode_nil_object(ring, &cert.target),
        "ses_chain": chain,
        "final_iso": encode_matrix(ring, &cert.final_iso),
    })
}

/// Objects inside the certificate are decoded without validation; the
/// verifier is responsible for rejecting them.
pub fn decode_certificate<R: Ring>(ring: &R, v: &Value, path: &str) -> Result<VanishingCertificate<R::Elem>> {
    let target = decode_nil_object_lenient(ring, field(v, "target", path)?, &format!("{path}.target"))?;
    let chain_path = format!("{path}.ses_chain");
    let ses_chain = as_array(field(v, "ses_chain", path)?, &chain_path)?
        .iter()
        .enumerate()
        .map(|(i, w)| {
            let p = format!("{chain_path}[{i}]");
            let obj = |k: &str| decode_nil_object_lenient(ring, field(w, k, &p)?, &format!("{p}.{k}"));
            let mat = |k: &str| decode_matrix(ring, field(w, k, &p)?, &format!("{p}.{k}"));
            Ok(NilSesWitness {
                left: obj("left")?,
                middle: obj("middle")?,
                right: obj("right")?,
                iota: mat("iota")?,
                pi: mat("pi")?,
                section: mat("section")?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let final_iso = decode_matrix(ring, field(v, "final_iso", path)?, &format!("{path}.final_iso"))?;
    Ok(VanishingCertificate { target, ses_chain, final_iso })
}

fn encode_support(g: &GradingBox) -> Value {
    Value::Array(g.bounds().iter().map(|&(lo, hi)| json!([lo, hi])).collect())
}

fn decode_support(v: &Value, path: &str) -> Result<GradingBox> {
    let bounds = as_array(v, path)?
        .iter()
        .enumerate()
        .map(|(k, pair)| {
            let p = format!("{path}[{k}]");
            match as_array(pair, &p)?.as_slice() {
                [lo, hi] => Ok((as_i64(lo, &p)?, as_i64(hi, &p)?)),
                _ => Err(DecodeError::new(&p, "a pair [lo, hi]")),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    GradingBox::new(bounds).ok_or_else(|| DecodeError::new(path, "a nonempty list of intervals with lo <= hi"))
}

fn decode_degree(v: &Value, dim: usize, path: &str) -> Result<Vec<i64>> {
    let degree = match v {
        Value::String(s) => parse_degree(s),
        Value::Array(xs) => xs.iter().map(Value::as_i64).collect(),
        Value::Number(n) => n.as_i64().map(|x| vec![x]),
        _ => None,
    };
    match degree {
        Some(d) if d.len() == dim => Ok(d),
        _ => Err(DecodeError::new(path, format!("a multidegree with {dim} coordinates like \"(0,1)\""))),
    }
}

pub fn encode_graded_map<R: Ring>(ring: &R, f: &GradedMap<R::Elem>) -> Value {
    let blocks: Map<String, Value> =
        f.grading().degrees().zip(f.blocks()).map(|(d, m)| (format_degree(&d), encode_matrix(ring, m))).collect();
    json!({"support": encode_support(f.grading()), "blocks": blocks})
}

pub fn decode_graded_map<R: Ring>(ring: &R, v: &Value, path: &str) -> Result<GradedMap<R::Elem>> {
    let grading = decode_support(field(v, "support", path)?, &format!("{path}.support"))?;
    let blocks_path = format!("{path}.blocks");
    let blocks = as_object(field(v, "blocks", path)?, &blocks_path)?;
    let mut found: Vec<Option<Matrix<R::Elem>>> = vec![None; grading.volume()];
    for (key, m) in blocks {
        let p = format!("{blocks_path}.{key}");
        let d = decode_degree(&Value::String(key.clone()), grading.dim(), &p)?;
        let i = grading.index_of(&d).ok_or_else(|| DecodeError::new(&p, format!("a multidegree inside {grading}")))?;
        found[i] = Some(decode_matrix(ring, m, &p)?);
    }
    let blocks = found
        .into_iter()
        .enumerate()
        .map(|(i, m)| {
            m.ok_or_else(|| {
                DecodeError::new(&blocks_path, format!("a block at {}", format_degree(&grading.degree_at(i))))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(GradedMap::new(grading, blocks))
}

pub fn encode_multicomplex<R: Ring>(ring: &R, b: &BinaryMulticomplex<R::Elem>) -> Value {
    let g = b.grading();
    let ranks: Map<String, Value> = g.degrees().map(|d| (format_degree(&d), json!(b.rank(&d)))).collect();
    let mut diffs = Map::new();
    for k in 0..b.dim() {
        let entries: Vec<Value> = g
            .degrees()
            .filter_map(|d| {
                let pair = b.diff(k, &d)?;
                (pair.d.rows() > 0 && pair.d.cols() > 0).then(|| {
                    json!({
                        "at": format_degree(&d),
                        "d": encode_matrix(ring, &pair.d),
                        "dt": encode_matrix(ring, &pair.dt),
                    })
                })
            })
            .collect();
        diffs.insert(format!("dir {}", k + 1), Value::Array(entries));
    }
    json!({"dim": b.dim(), "support": encode_support(g), "ranks": ranks, "diffs": diffs})
}

pub fn encode_nil_multicomplex<R: Ring>(ring: &R, nb: &NilBinaryMulticomplex<R::Elem>) -> Value {
    let mut v = encode_multicomplex(ring, nb.base());
    let g = nb.base().grading();
    let nu: Map<String, Value> = g
        .degrees()
        .filter(|d| nb.base().rank(d) > 0)
        .map(|d| (format_degree(&d), encode_matrix(ring, &nb.nu_at(ring, &d))))
        .collect();
    v.as_object_mut().expect("object").insert("nu".into(), Value::Object(nu));
    v
}

/// Decodes the plain part of a multicomplex; absent ranks and differentials
/// are zero. A `"nu"` field, if present, is ignored.
pub fn decode_multicomplex<R: Ring>(
    ring: &R,
    v: &Value,
    path: &str,
    max_dim: usize,
) -> Result<BinaryMulticomplex<R::Elem>> {
    let dim = as_usize(field(v, "dim", path)?, &format!("{path}.dim"))?;
    let support_path = format!("{path}.support");
    let grading = decode_support(field(v, "support", path)?, &support_path)?;
    if grading.dim() != dim {
        return Err(DecodeError::new(&support_path, format!("{dim} intervals")));
    }
    let mut builder = MulticomplexBuilder::new(grading.clone()).max_dim(max_dim);
    let ranks_path = format!("{path}.ranks");
    for (key, r) in as_object(field(v, "ranks", path)?, &ranks_path)? {
        let p = format!("{ranks_path}.{key}");
        let d = decode_degree(&Value::String(key.clone()), dim, &p)?;
        builder
            .rank(&d, as_usize(r, &p)?)
            .map_err(|_| DecodeError::new(&p, format!("a multidegree inside {grading}")))?;
    }
    let diffs_path = format!("{path}.diffs");
    let diffs = match v.get("diffs") {
        Some(d) => as_object(d, &diffs_path)?.clone(),
        None => Map::new(),
    };
    for (key, entries) in &diffs {
        let p = format!("{diffs_path}.{key}");
        let k = key
            .strip_prefix("dir ")
            .and_then(|k| k.trim().parse::<usize>().ok())
            .filter(|&k| 1 <= k && k <= dim)
            .ok_or_else(|| DecodeError::new(&p, format!("a key \"dir k\" with 1 <= k <= {dim}")))?;
        for (i, entry) in as_array(entries, &p)?.iter().enumerate() {
            let ep = format!("{p}[{i}]");
            let d = decode_degree(field(entry, "at", &ep)?, dim, &format!("{ep}.at"))?;
            let m = decode_matrix(ring, field(entry, "d", &ep)?, &format!("{ep}.d"))?;
            let mt = decode_matrix(ring, field(entry, "dt", &ep)?, &format!("{ep}.dt"))?;
            builder
                .diff(k - 1, &d, m, mt)
                .map_err(|_| DecodeError::new(&format!("{ep}.at"), format!("a multidegree inside {grading}")))?;
        }
    }
    builder.build(ring).map_err(|e| DecodeError::new(path, format!("a well-formed multicomplex ({e})")))
}

/// Decodes a multicomplex with its `"nu"` field; missing blocks are zero.
/// The decoration is not validated here.
pub fn decode_nil_multicomplex<R: Ring>(
    ring: &R,
    v: &Value,
    path: &str,
    max_dim: usize,
) -> Result<NilBinaryMulticomplex<R::Elem>> {
    let base = decode_multicomplex(ring, v, path, max_dim)?;
    let nu_path = format!("{path}.nu");
    let given = as_object(field(v, "nu", path)?, &nu_path)?;
    let g = base.grading().clone();
    let mut blocks: Vec<Matrix<R::Elem>> = g
        .degrees()
        .map(|d| {
            let r = base.rank(&d);
            Matrix::zeros(ring, r, r)
        })
        .collect();
    for (key, m) in given {
        let p = format!("{nu_path}.{key}");
        let d = decode_degree(&Value::String(key.clone()), g.dim(), &p)?;
        let i = g.index_of(&d).ok_or_else(|| DecodeError::new(&p, format!("a multidegree inside {g}")))?;
        blocks[i] = decode_matrix(ring, m, &p)?;
    }
    Ok(NilBinaryMulticomplex::from_parts(base, GradedMap::new(g, blocks)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multicomplex::{decorate_zero_nil, diagonal_embed};
    use crate::nil_category::vanishing_certificate;
    use crate::ring_core::{Integers, Rationals};

    #[test]
    fn matrix_round_trip_and_paths() {
        let q = Rationals;
        let m = Matrix::from_fn(2, 1, |i, _| q.parse(if i == 0 { "1/2" } else { "-3" }).unwrap());
        let v = encode_matrix(&q, &m);
        assert_eq!(v["entries"][0][0], "1/2");
        assert_eq!(decode_matrix(&q, &v, "$").unwrap(), m);

        let bad = json!({"rows": 1, "cols": 2, "entries": [["1", "x"]]});
        let err = decode_matrix(&Integers, &bad, "$.nu").unwrap_err();
        assert_eq!(err.path, "$.nu.entries[0][1]");
        let short = json!({"rows": 2, "cols": 1, "entries": [[1]]});
        assert_eq!(decode_matrix(&Integers, &short, "$").unwrap_err().path, "$.entries");
    }

    #[test]
    fn ring_descriptors() {
        for d in [RingDescriptor::Integers, RingDescriptor::PrimeField(5), RingDescriptor::Rationals] {
            assert_eq!(decode_ring(&encode_ring(d), "$").unwrap(), d);
        }
        assert_eq!(decode_ring(&json!({"ring": "Fp", "p": 6}), "$").unwrap_err().path, "$.p");
    }

    #[test]
    fn certificate_round_trip() {
        let z = Integers;
        let j3 = NilObject::new(&z, 3, Matrix::from_i64(&z, &[[0, 1, 0], [0, 0, 1], [0, 0, 0]])).unwrap();
        let cert = vanishing_certificate(&z, &j3);
        let v = encode_certificate(&z, &cert);
        assert_eq!(decode_certificate(&z, &v, "$").unwrap(), cert);
    }

    #[test]
    fn multicomplex_round_trip() {
        let z = Integers;
        let c = FreeComplex::new(
            -1,
            1,
            vec![1, 2, 1],
            vec![Matrix::from_i64(&z, &[[1, 1]]), Matrix::from_i64(&z, &[[1], [-1]])],
        )
        .unwrap();
        let b = diagonal_embed(&z, &c);
        let v = encode_multicomplex(&z, &b);
        assert_eq!(v["ranks"]["(0)"], 2);
        assert_eq!(v["diffs"]["dir 1"][0]["at"], "(0)");
        assert_eq!(decode_multicomplex(&z, &v, "$", 3).unwrap(), b);

        let nb = decorate_zero_nil(&z, &b);
        let v = encode_nil_multicomplex(&z, &nb);
        assert_eq!(decode_nil_multicomplex(&z, &v, "$", 3).unwrap(), nb);
    }

    #[test]
    fn multicomplex_shape_errors() {
        let z = Integers;
        let v = json!({
            "dim": 1, "support": [[0, 1]], "ranks": {"(0)": 1, "(1)": 1},
            "diffs": {"dir 1": [{"at": "(1)", "d": {"rows": 1, "cols": 2, "entries": [["1", "0"]]},
                                 "dt": {"rows": 1, "cols": 1, "entries": [["1"]]}}]}
        });
        let err = decode_multicomplex(&z, &v, "$", 3).unwrap_err();
        assert!(err.expected.contains("d^1 at (1) is 1x2"), "{err}");
        let v = json!({"dim": 1, "support": [[0, 1]], "ranks": {"(5)": 1}});
        assert_eq!(decode_multicomplex(&z, &v, "$", 3).unwrap_err().path, "$.ranks.(5)");
    }
}
