use std::path::Path;

use nilk::codec::{
    decode_certificate, decode_complex, decode_matrix, decode_multicomplex, decode_nil_multicomplex, decode_nil_object,
    encode_acyclicity_witness, encode_certificate, encode_matrix, encode_module, encode_ring,
};
use nilk::complexes::{acyclicity_witness, homology, Acyclicity, ComplexError};
use nilk::ledger::{
    decode_equality_witness, decode_formal_sum, decode_ledger_pair, decode_witness, encode_formal_sum,
    encode_ledger_pair, encode_transcript, LedgerError, LedgerPair, NormalizeOptions, PersistError,
};
use nilk::multicomplex::{
    check_acyclic, diagonal_direction, validate, validate_nil, BinaryMulticomplex, ValidationReport, DEFAULT_MAX_DIM,
};
use nilk::nil_category::{filtration_quotients, vanishing_certificate, verify_vanishing_certificate};
use nilk::ring_core::{smith_normal_form, Integers, PrimeField, Rationals, Ring, RingDescriptor};
use serde_json::{json, Map, Value};

use crate::input::{resolve_ring, write_json, CliError, InputFile, Result};
use crate::{Cli, Command, Report};

/// Certificates with more matrix entries than this are referenced by file
/// name in reports instead of being printed.
const INLINE_ENTRY_LIMIT: usize = 400;

fn report(pass: bool, body: Value, summary: Vec<String>) -> Result<Report> {
    let Value::Object(body) = body else { unreachable!("reports are objects") };
    Ok(Report { pass, body, summary })
}

/// Check failures exit 1; an unknown key or a malformed ledger is an input
/// error.
fn ledger_outcome(e: LedgerError) -> std::result::Result<String, CliError> {
    match e {
        LedgerError::UnknownKey(_) => Err(CliError(e.to_string())),
        _ => Ok(e.to_string()),
    }
}

fn failed(e: LedgerError) -> Result<Report> {
    let msg = ledger_outcome(e)?;
    report(false, json!({"error": msg}), vec![msg])
}

pub fn run(cli: &Cli) -> Result<Report> {
    let files: Vec<InputFile> = match &cli.command {
        Command::Snf { input }
        | Command::CheckComplex { input }
        | Command::CheckBinary { input, .. }
        | Command::NilVanish { input, .. }
        | Command::NilVerify { input } => vec![InputFile::load(input)?],
        Command::LedgerAdd { ledger, object, .. } => {
            InputFile::load_optional(ledger)?.into_iter().chain([InputFile::load(object)?]).collect()
        }
        Command::LedgerRelate { ledger, witness: query, .. }
        | Command::LedgerEqual { ledger, query, .. }
        | Command::Normalize { ledger, query, .. } => vec![InputFile::load(ledger)?, InputFile::load(query)?],
    };
    let refs: Vec<&InputFile> = files.iter().collect();
    match resolve_ring(cli.ring, &refs)? {
        RingDescriptor::Integers => execute(&Integers, cli, &files),
        RingDescriptor::PrimeField(p) => execute(&PrimeField::new(p)?, cli, &files),
        RingDescriptor::Rationals => execute(&Rationals, cli, &files),
    }
}

fn execute<R: Ring>(ring: &R, cli: &Cli, files: &[InputFile]) -> Result<Report> {
    match &cli.command {
        Command::Snf { .. } => snf(ring, &files[0]),
        Command::CheckComplex { .. } => check_complex(ring, &files[0]),
        Command::CheckBinary { window_02, .. } => check_binary(ring, &files[0], *window_02),
        Command::NilVanish { out, .. } => nil_vanish(ring, &files[0], out.as_deref()),
        Command::NilVerify { .. } => nil_verify(ring, &files[0]),
        Command::LedgerAdd { ledger, dim, .. } => {
            let (existing, object) = match files {
                [l, o] => (Some(l), o),
                [o] => (None, o),
                _ => unreachable!("one or two files"),
            };
            ledger_add(ring, ledger, existing, object, *dim)
        }
        Command::LedgerRelate { ledger, .. } => ledger_relate(ring, ledger, &files[0], &files[1]),
        Command::LedgerEqual { mod_diagonal, .. } => ledger_equal(ring, &files[0], &files[1], *mod_diagonal),
        Command::Normalize { ledger, window_02, .. } => normalize(ring, ledger, &files[0], &files[1], *window_02),
    }
}

fn snf<R: Ring>(ring: &R, f: &InputFile) -> Result<Report> {
    let m = decode_matrix(ring, f.field("matrix")?, "$.matrix").map_err(|e| f.err(e))?;
    let s = smith_normal_form(ring, &m);
    let factors: Vec<String> = s.invariant_factors().iter().map(|e| ring.render(e)).collect();
    let summary = vec![format!("rank {}", s.rank), format!("invariant factors: [{}]", factors.join(", "))];
    report(
        true,
        json!({
            "ring": encode_ring(ring.descriptor()),
            "rank": s.rank,
            "invariant_factors": factors,
            "u": encode_matrix(ring, &s.u),
            "d": encode_matrix(ring, &s.d),
            "v": encode_matrix(ring, &s.v),
        }),
        summary,
    )
}

fn check_complex<R: Ring>(ring: &R, f: &InputFile) -> Result<Report> {
    let c = decode_complex(ring, f.field("complex")?, "$.complex").map_err(|e| f.err(e))?;
    match acyclicity_witness(ring, &c) {
        Err(ComplexError::NotAComplex(i)) => {
            let msg = format!("d∘d ≠ 0 at degree {i}");
            report(false, json!({"acyclic": false, "reason": msg}), vec![msg])
        }
        Err(e) => Err(f.err(nilk::codec::DecodeError::new("$.complex", format!("a well-formed complex ({e})")))),
        Ok(Acyclicity::Acyclic(w)) => report(
            true,
            json!({
                "acyclic": true,
                "euler_characteristic": c.euler_characteristic(),
                "witness": encode_acyclicity_witness(ring, c.lo(), &w),
            }),
            vec![format!("acyclic on [{}, {}], witness verified", c.lo(), c.hi())],
        ),
        Ok(Acyclicity::NotAcyclic { degree }) => {
            let h = homology(ring, &c, degree).expect("a complex");
            let msg = format!("homology at degree {degree} is nonzero");
            report(
                false,
                json!({"acyclic": false, "reason": msg, "degree": degree, "homology": encode_module(ring, &h)}),
                vec![msg],
            )
        }
    }
}

fn check_binary<R: Ring>(ring: &R, f: &InputFile, window_02: bool) -> Result<Report> {
    let v = f.field("multicomplex")?;
    let decorated = v.get("nu").is_some();
    let (base, mut validation): (BinaryMulticomplex<R::Elem>, ValidationReport) = if decorated {
        let nb = decode_nil_multicomplex(ring, v, "$.multicomplex", DEFAULT_MAX_DIM).map_err(|e| f.err(e))?;
        let report = validate_nil(ring, &nb);
        (nb.base().clone(), report)
    } else {
        let b = decode_multicomplex(ring, v, "$.multicomplex", DEFAULT_MAX_DIM).map_err(|e| f.err(e))?;
        let report = validate(ring, &b, false);
        (b, report)
    };
    if window_02 {
        // the window check comes first in the report
        let mut w = validate(ring, &base, true).violations;
        w.retain(|x| matches!(x, nilk::multicomplex::Violation::SupportExceedsWindow { .. }));
        w.append(&mut validation.violations);
        validation.violations = w;
    }
    let acyclic = check_acyclic(ring, &base);
    let pass = validation.is_pass() && acyclic.is_pass();
    let violations: Vec<String> = validation.violations.iter().map(|x| x.to_string()).collect();
    let failures: Vec<String> = acyclic.failures.iter().map(|x| x.to_string()).collect();
    let mut summary: Vec<String> = violations.clone();
    summary.extend(failures.iter().cloned());
    summary.push(format!("{} lines checked, {} not acyclic", acyclic.lines_checked, acyclic.failures.len()));
    if let Some(k) = diagonal_direction(&base) {
        summary.push(format!("diagonal in direction {}", k + 1));
    }
    report(
        pass,
        json!({
            "dim": base.dim(),
            "support": base.grading().to_string(),
            "decorated": decorated,
            "violations": violations,
            "lines_checked": acyclic.lines_checked,
            "line_failures": failures,
            "diagonal_direction": diagonal_direction(&base).map(|k| k + 1),
        }),
        summary,
    )
}

fn count_entries(v: &Value) -> usize {
    match v {
        Value::Object(m) if m.contains_key("entries") => {
            m["rows"].as_u64().unwrap_or(0) as usize * m["cols"].as_u64().unwrap_or(0) as usize
        }
        Value::Object(m) => m.values().map(count_entries).sum(),
        Value::Array(a) => a.iter().map(count_entries).sum(),
        _ => 0,
    }
}

fn nil_vanish<R: Ring>(ring: &R, f: &InputFile, out: Option<&Path>) -> Result<Report> {
    let obj = decode_nil_object(ring, f.field("object")?, "$.object").map_err(|e| f.err(e))?;
    let cert = vanishing_certificate(ring, &obj);
    verify_vanishing_certificate(ring, &cert)
        .map_err(|e| CliError(format!("internal: certificate fails its own check ({e})")))?;
    let mut file = encode_ring(ring.descriptor());
    file["certificate"] = encode_certificate(ring, &cert);
    let quotient_ranks: Vec<usize> =
        filtration_quotients(ring, &obj).iter().map(|q| q.free_rank(ring).expect("torsion-free")).collect();
    let mut summary = vec![
        format!("rank {}, nilpotency index {}", obj.rank(), obj.index()),
        format!("{} split sequences, quotient ranks {:?}", cert.ses_chain.len(), quotient_ranks),
    ];
    let inline = match out {
        Some(path) => {
            write_json(path, &file)?;
            summary.push(format!("certificate written to {}", path.display()));
            count_entries(&file) <= INLINE_ENTRY_LIMIT
        }
        None => true,
    };
    let certificate = if inline { file } else { json!({"file": out.map(|p| p.display().to_string())}) };
    report(
        true,
        json!({
            "rank": obj.rank(),
            "index": obj.index(),
            "quotient_ranks": quotient_ranks,
            "certificate": certificate,
        }),
        summary,
    )
}

fn nil_verify<R: Ring>(ring: &R, f: &InputFile) -> Result<Report> {
    let cert = decode_certificate(ring, f.field("certificate")?, "$.certificate").map_err(|e| f.err(e))?;
    match verify_vanishing_certificate(ring, &cert) {
        Ok(()) => report(
            true,
            json!({"rank": cert.target.rank(), "steps": cert.ses_chain.len()}),
            vec![format!("certificate for a rank-{} object verified", cert.target.rank())],
        ),
        Err(e) => report(false, json!({"defect": e.to_string()}), vec![e.to_string()]),
    }
}

fn load_ledger<R: Ring>(ring: &R, f: &InputFile) -> Result<LedgerPair<R>> {
    decode_ledger_pair(ring, &f.value, "$").map_err(|e| match e {
        PersistError::Decode(d) => f.err(d),
        PersistError::Ledger(l) => CliError(format!("{}: {l}", f.path.display())),
    })
}

fn save_ledger<R: Ring>(path: &Path, pair: &LedgerPair<R>) -> Result<()> {
    write_json(path, &encode_ledger_pair(pair))
}

fn ledger_add<R: Ring>(
    ring: &R,
    path: &Path,
    existing: Option<&InputFile>,
    f: &InputFile,
    dim: Option<usize>,
) -> Result<Report> {
    let v = f.field("object")?;
    let decorated = v.get("nu").is_some();
    let mut pair = match existing {
        Some(l) => load_ledger(ring, l)?,
        None => {
            let d = match dim {
                Some(d) => d,
                None => nilk::codec::as_usize(
                    nilk::codec::field(v, "dim", "$.object").map_err(|e| f.err(e))?,
                    "$.object.dim",
                )
                .map_err(|e| f.err(e))?,
            };
            LedgerPair::new(ring.clone(), d)
        }
    };
    let max_dim = pair.plain().max_dim();
    let before = pair.plain().objects().count() + pair.nil().objects().count();
    let outcome = if decorated {
        let nb = decode_nil_multicomplex(ring, v, "$.object", max_dim).map_err(|e| f.err(e))?;
        pair.register_nil(&nb).map(|k| (pair.forget_key(&k).ok(), k))
    } else {
        let b = decode_multicomplex(ring, v, "$.object", max_dim).map_err(|e| f.err(e))?;
        pair.register_plain(&b).map(|k| (None, k))
    };
    let (base, key) = match outcome {
        Ok(x) => x,
        Err(e) => return failed(e),
    };
    let new = pair.plain().objects().count() + pair.nil().objects().count() > before;
    save_ledger(path, &pair)?;
    let side = if decorated { "nil" } else { "plain" };
    let mut summary = vec![format!("{side} object {key}{}", if new { "" } else { " (already registered)" })];
    if let Some(b) = &base {
        summary.push(format!("underlying object {b}"));
    }
    report(
        true,
        json!({"side": side, "key": key.as_str(), "base_key": base.map(|b| b.to_string()), "new": new}),
        summary,
    )
}

fn side_of(f: &InputFile) -> Result<bool> {
    match f.value.get("side") {
        None => Ok(false),
        Some(Value::String(s)) if s == "plain" => Ok(false),
        Some(Value::String(s)) if s == "nil" => Ok(true),
        Some(_) => Err(f.err(nilk::codec::DecodeError::new("$.side", "\"plain\" or \"nil\""))),
    }
}

fn ledger_relate<R: Ring>(ring: &R, path: &Path, l: &InputFile, f: &InputFile) -> Result<Report> {
    let mut pair = load_ledger(ring, l)?;
    let nil = side_of(f)?;
    let w = decode_witness(ring, f.field("witness")?, "$.witness").map_err(|e| f.err(e))?;
    let kind = w.kind();
    let outcome = if nil { pair.relate_nil(w) } else { pair.relate_plain(w) };
    let id = match outcome {
        Ok(id) => id,
        Err(e) => return failed(e),
    };
    save_ledger(path, &pair)?;
    let rel = if nil { &pair.nil().relations()[id] } else { &pair.plain().relations()[id] };
    let side = if nil { "nil" } else { "plain" };
    report(
        true,
        json!({"side": side, "relation": id, "kind": kind.to_string(), "vector": encode_formal_sum(&rel.vector)}),
        vec![format!("{side} relation #{id} ({kind}): {} = 0", rel.vector)],
    )
}

fn ledger_equal<R: Ring>(ring: &R, l: &InputFile, f: &InputFile, mod_diagonal: bool) -> Result<Report> {
    let pair = load_ledger(ring, l)?;
    let nil = side_of(f)?;
    let lhs = decode_formal_sum(f.field("lhs")?, "$.lhs").map_err(|e| f.err(e))?;
    let rhs = decode_formal_sum(f.field("rhs")?, "$.rhs").map_err(|e| f.err(e))?;
    let derived =
        if nil { pair.nil().derive(&lhs, &rhs, mod_diagonal) } else { pair.plain().derive(&lhs, &rhs, mod_diagonal) };
    let derivation = match derived {
        Ok(d) => d,
        Err(e) => return failed(e),
    };
    let equal = derivation.is_some();
    let terms: Vec<Value> = derivation
        .iter()
        .flat_map(|d| d.coefficients.iter())
        .map(|(id, c)| json!({"relation": id, "coefficient": c.to_string()}))
        .collect();
    let mut summary = vec![format!(
        "{lhs} {} {rhs}{}",
        if equal { "=" } else { "≠" },
        if mod_diagonal { " modulo diagonal objects" } else { "" }
    )];
    if let Some(d) = &derivation {
        let used: Vec<String> = d.coefficients.iter().map(|(id, c)| format!("{c}·#{id}")).collect();
        summary.push(format!("derivation: {}", if used.is_empty() { "trivial".to_string() } else { used.join(" + ") }));
    } else {
        summary.push("not derivable from the recorded relations".into());
    }
    report(
        equal,
        json!({"side": if nil { "nil" } else { "plain" }, "mod_diagonal": mod_diagonal, "equal": equal, "derivation": derivation.map(|_| terms)}),
        summary,
    )
}

fn normalize<R: Ring>(ring: &R, path: &Path, l: &InputFile, f: &InputFile, window_02: bool) -> Result<Report> {
    let mut pair = load_ledger(ring, l)?;
    let x = decode_formal_sum(f.field("x")?, "$.x").map_err(|e| f.err(e))?;
    let witness = match f.value.get("witness") {
        Some(w) => Some(
            decode_equality_witness::<R, BinaryMulticomplex<R::Elem>>(ring, w, "$.witness", pair.plain().max_dim())
                .map_err(|e| f.err(e))?,
        ),
        None => None,
    };
    let t = match nilk::ledger::normalize_nil_generator(&mut pair, &x, witness.as_ref(), NormalizeOptions { window_02 })
    {
        Ok(t) => t,
        Err(e) => return failed(e),
    };
    save_ledger(path, &pair)?;
    let mut summary: Vec<String> = t.steps.iter().map(|s| format!("{}: {} = {}", s.label, s.lhs, s.rhs)).collect();
    summary.push(if t.already_normal {
        format!("already normal: {}", t.residual)
    } else {
        format!("normal form: {}", t.residual)
    });
    let Value::Object(mut body) = encode_transcript(&t) else { unreachable!("transcripts are objects") };
    let mut doc = Map::new();
    doc.insert("transcript".into(), Value::Object(std::mem::take(&mut body)));
    report(true, Value::Object(doc), summary)
}
