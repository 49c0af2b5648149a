use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::codec::{
    as_array, as_i64, as_object, as_str, as_usize, decode_graded_map, decode_ring, encode_graded_map, encode_ring,
    field, DecodeError,
};
use crate::multicomplex::{BinaryMulticomplex, GradedMap};
use crate::ring_core::Ring;

use super::normalize::NormalizationTranscript;
use super::object::{FormalSum, LedgerObject, ObjectKey};
use super::pair::{EqualityWitness, LedgerPair, PairSide, SesMaps};
use super::store::{Ledger, LedgerError, RelationWitness};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum PersistError {
    #[error(transparent)]
    Decode(#[from] DecodeError),
    #[error("{0}")]
    Ledger(#[from] LedgerError),
}

pub fn encode_formal_sum(s: &FormalSum) -> Value {
    Value::Object(s.terms().map(|(k, c)| (k.to_string(), json!(c))).collect())
}

pub fn decode_formal_sum(v: &Value, path: &str) -> Result<FormalSum, DecodeError> {
    let mut s = FormalSum::zero();
    for (k, c) in as_object(v, path)? {
        s.add_term(&ObjectKey::new(k.clone()), as_i64(c, &format!("{path}.{k}"))?);
    }
    Ok(s)
}

pub fn encode_witness<R: Ring>(ring: &R, w: &RelationWitness<R::Elem>) -> Value {
    let mut v = match w {
        RelationWitness::Ses { left, middle, right, iota, pi } => json!({
            "left": left.as_str(),
            "middle": middle.as_str(),
            "right": right.as_str(),
            "iota": encode_graded_map(ring, iota),
            "pi": encode_graded_map(ring, pi),
        }),
        RelationWitness::Iso { source, target, alpha } => json!({
            "source": source.as_str(),
            "target": target.as_str(),
            "alpha": encode_graded_map(ring, alpha),
        }),
        RelationWitness::Diagonal { object, direction } => {
            json!({"object": object.as_str(), "direction": direction + 1})
        }
    };
    let obj = v.as_object_mut().expect("object");
    let mut out = Map::new();
    out.insert("kind".into(), json!(w.kind().to_string()));
    out.append(obj);
    Value::Object(out)
}

pub fn decode_witness<R: Ring>(ring: &R, v: &Value, path: &str) -> Result<RelationWitness<R::Elem>, DecodeError> {
    let key = |name: &str| -> Result<ObjectKey, DecodeError> {
        Ok(ObjectKey::new(as_str(field(v, name, path)?, &format!("{path}.{name}"))?))
    };
    let map = |name: &str| decode_graded_map(ring, field(v, name, path)?, &format!("{path}.{name}"));
    match as_str(field(v, "kind", path)?, &format!("{path}.kind"))? {
        "ses" => Ok(RelationWitness::Ses {
            left: key("left")?,
            middle: key("middle")?,
            right: key("right")?,
            iota: map("iota")?,
            pi: map("pi")?,
        }),
        "iso" => Ok(RelationWitness::Iso { source: key("source")?, target: key("target")?, alpha: map("alpha")? }),
        "diagonal" => {
            let p = format!("{path}.direction");
            let direction = as_usize(field(v, "direction", path)?, &p)?;
            if direction == 0 {
                return Err(DecodeError::new(&p, "a direction counted from 1"));
            }
            Ok(RelationWitness::Diagonal { object: key("object")?, direction: direction - 1 })
        }
        _ => Err(DecodeError::new(&format!("{path}.kind"), "one of \"ses\", \"iso\", \"diagonal\"")),
    }
}

fn encode_ledger<R: Ring, O: LedgerObject<R>>(ledger: &Ledger<R, O>) -> Value {
    let ring = ledger.ring();
    let objects: Vec<Value> =
        ledger.objects().map(|(k, o)| json!({"key": k.as_str(), "object": o.encode(ring)})).collect();
    let relations: Vec<Value> = ledger
        .relations()
        .iter()
        .map(|r| {
            json!({
                "id": r.id,
                "diagonal": r.diagonal,
                "vector": encode_formal_sum(&r.vector),
                "witness": encode_witness(ring, &r.witness),
            })
        })
        .collect();
    json!({"objects": objects, "relations": relations})
}

fn decode_ledger<R: Ring, O: LedgerObject<R>>(
    ledger: &mut Ledger<R, O>,
    v: &Value,
    path: &str,
) -> Result<(), PersistError> {
    let ring = ledger.ring().clone();
    let objects_path = format!("{path}.objects");
    let objects = as_array(field(v, "objects", path)?, &objects_path)?
        .iter()
        .enumerate()
        .map(|(i, entry)| {
            let p = format!("{objects_path}[{i}]");
            let key = ObjectKey::new(as_str(field(entry, "key", &p)?, &format!("{p}.key"))?);
            let obj = O::decode(&ring, field(entry, "object", &p)?, &format!("{p}.object"), ledger.max_dim())?;
            Ok((key, obj))
        })
        .collect::<Result<Vec<_>, DecodeError>>()?;
    let relations_path = format!("{path}.relations");
    let entries = as_array(field(v, "relations", path)?, &relations_path)?;
    let mut relations = Vec::with_capacity(entries.len());
    for (i, entry) in entries.iter().enumerate() {
        let p = format!("{relations_path}[{i}]");
        if as_usize(field(entry, "id", &p)?, &format!("{p}.id"))? != i {
            return Err(DecodeError::new(&format!("{p}.id"), format!("id {i}")).into());
        }
        let diagonal = field(entry, "diagonal", &p)?
            .as_bool()
            .ok_or_else(|| DecodeError::new(&format!("{p}.diagonal"), "a boolean"))?;
        let witness = decode_witness(&ring, field(entry, "witness", &p)?, &format!("{p}.witness"))?;
        let vector = decode_formal_sum(field(entry, "vector", &p)?, &format!("{p}.vector"))?;
        if vector != witness.vector() {
            return Err(DecodeError::new(&format!("{p}.vector"), "the vector induced by the witness").into());
        }
        relations.push((witness, diagonal));
    }
    ledger.restore(objects, relations)?;
    Ok(())
}

pub fn encode_ledger_pair<R: Ring>(pair: &LedgerPair<R>) -> Value {
    json!({
        "ring": encode_ring(pair.ring().descriptor()),
        "dim": pair.dim(),
        "plain": encode_ledger(pair.plain()),
        "nil": encode_ledger(pair.nil()),
    })
}

/// Rebuilds a ledger pair, re-admitting every object and re-verifying every
/// relation. `ring` must match the stored descriptor.
pub fn decode_ledger_pair<R: Ring>(ring: &R, v: &Value, path: &str) -> Result<LedgerPair<R>, PersistError> {
    let ring_path = format!("{path}.ring");
    if decode_ring(field(v, "ring", path)?, &ring_path)? != ring.descriptor() {
        return Err(DecodeError::new(&ring_path, format!("the ring {}", ring.descriptor())).into());
    }
    let dim = as_usize(field(v, "dim", path)?, &format!("{path}.dim"))?;
    let mut pair = LedgerPair::new(ring.clone(), dim);
    let (plain, nil, forget) = pair.parts_mut();
    decode_ledger(plain, field(v, "plain", path)?, &format!("{path}.plain"))?;
    decode_ledger(nil, field(v, "nil", path)?, &format!("{path}.nil"))?;
    for (key, obj) in nil.objects() {
        let base_key = <BinaryMulticomplex<R::Elem> as LedgerObject<R>>::key(obj.base(), ring);
        if !plain.contains(&base_key) {
            return Err(LedgerError::UnknownKey(base_key).into());
        }
        forget.insert(key.clone(), base_key);
    }
    Ok(pair)
}

pub fn encode_equality_witness<R: Ring, O: PairSide<R>>(ring: &R, w: &EqualityWitness<O, R::Elem>) -> Value {
    let ses =
        |s: &SesMaps<R::Elem>| json!({"iota": encode_graded_map(ring, &s.iota), "pi": encode_graded_map(ring, &s.pi)});
    json!({
        "p": w.p.encode(ring),
        "q": w.q.encode(ring),
        "a": w.a.encode(ring),
        "b": w.b.encode(ring),
        "c": w.c.encode(ring),
        "d": w.d.encode(ring),
        "ses_a": ses(&w.ses_a),
        "ses_b": ses(&w.ses_b),
        "iso": encode_graded_map(ring, &w.iso),
    })
}

/// Objects `a` to `d` and the two sequences may be omitted; they then
/// default to zero objects and empty maps.
pub fn decode_equality_witness<R: Ring, O: PairSide<R>>(
    ring: &R,
    v: &Value,
    path: &str,
    max_dim: usize,
) -> Result<EqualityWitness<O, R::Elem>, DecodeError> {
    let p = O::decode(ring, field(v, "p", path)?, &format!("{path}.p"), max_dim)?;
    let q = O::decode(ring, field(v, "q", path)?, &format!("{path}.q"), max_dim)?;
    let iso = decode_graded_map(ring, field(v, "iso", path)?, &format!("{path}.iso"))?;
    let mut w = EqualityWitness::from_iso(ring, p, q, iso);
    let dim = w.p.base().dim();
    for (name, slot) in [("a", &mut w.a), ("b", &mut w.b), ("c", &mut w.c), ("d", &mut w.d)] {
        if let Some(o) = v.get(name) {
            *slot = O::decode(ring, o, &format!("{path}.{name}"), max_dim)?;
            if slot.base().dim() != dim {
                return Err(DecodeError::new(&format!("{path}.{name}"), format!("dimension {dim}")));
            }
        }
    }
    for (name, slot) in [("ses_a", &mut w.ses_a), ("ses_b", &mut w.ses_b)] {
        if let Some(s) = v.get(name) {
            let p = format!("{path}.{name}");
            let decode = |k: &str| -> Result<GradedMap<R::Elem>, DecodeError> {
                decode_graded_map(ring, field(s, k, &p)?, &format!("{p}.{k}"))
            };
            *slot = SesMaps { iota: decode("iota")?, pi: decode("pi")? };
        }
    }
    Ok(w)
}

pub fn encode_transcript(t: &NormalizationTranscript) -> Value {
    let steps: Vec<Value> = t
        .steps
        .iter()
        .map(|s| {
            let mut v = json!({
                "label": s.label,
                "ledger": s.side.to_string(),
                "lhs": encode_formal_sum(&s.lhs),
                "rhs": encode_formal_sum(&s.rhs),
                "mod_diagonal": s.mod_diagonal,
                "witnesses": s.witnesses,
            });
            if let Some(note) = &s.note {
                v.as_object_mut().expect("object").insert("note".into(), json!(note));
            }
            v
        })
        .collect();
    let normal_form: Vec<Value> = t
        .normal_form
        .iter()
        .map(|p| {
            json!({
                "with_nu": p.with_nu.as_str(),
                "with_zero": p.with_zero.as_str(),
                "base": p.base.as_str(),
                "sign": p.sign,
            })
        })
        .collect();
    json!({
        "input": encode_formal_sum(&t.input),
        "already_normal": t.already_normal,
        "pad_empty": t.pad_empty,
        "steps": steps,
        "normal_form": normal_form,
        "residual": encode_formal_sum(&t.residual),
    })
}
