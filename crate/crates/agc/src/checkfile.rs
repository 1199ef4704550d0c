//! Line-oriented check-set files.
//!
//! ```text
//! AGC-CHECKS v1
//! q=<q> l=<l> lp=<lp> anchor=<idx> J=<J>
//! chk <idx>:<coef> <idx>:<coef> ...
//! ```
//!
//! One `chk` line per parity check, indices ascending, coefficients written
//! as canonical field indices. The orderings used during construction are
//! deterministic, so the file is bit-exact across platforms. The prime-power
//! factorization of q recovers the field, since the construction is
//! determined by (p, e) alone.

use std::path::Path;
use std::sync::Arc;

use crate::agcode::CodeParams;
use crate::error::{Error, Result};
use crate::gf::FieldSpec;
use crate::paritygen::{OrthogonalCheckSet, SparseParityCheck};

const HEADER: &str = "AGC-CHECKS v1";

pub fn to_string(params: &CodeParams, set: &OrthogonalCheckSet) -> String {
    let mut out = String::new();
    out.push_str(HEADER);
    out.push('\n');
    out.push_str(&format!(
        "q={} l={} lp={} anchor={} J={}\n",
        params.q(),
        params.l(),
        params.lp(),
        set.anchor(),
        set.j()
    ));
    for check in set.checks() {
        out.push_str("chk");
        for &(idx, coef) in check.entries() {
            out.push_str(&format!(" {idx}:{}", coef.index()));
        }
        out.push('\n');
    }
    out
}

/// Parses a check-set file, rebuilding the code parameters from the header
/// and re-verifying the orthogonality contract.
pub fn from_string(s: &str) -> Result<(CodeParams, OrthogonalCheckSet)> {
    let bad = |msg: String| Error::Parse(format!("check file: {msg}"));
    let mut lines = s.lines();
    if lines.next().map(str::trim) != Some(HEADER) {
        return Err(bad(format!("missing `{HEADER}` header")));
    }
    let header = lines.next().ok_or_else(|| bad("missing params line".into()))?;
    let mut q = None;
    let mut l = None;
    let mut lp = None;
    let mut anchor = None;
    let mut j = None;
    for part in header.split_whitespace() {
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| bad(format!("expected key=value, got `{part}`")))?;
        let v: u64 = value
            .parse()
            .map_err(|_| bad(format!("bad value in `{part}`")))?;
        match key {
            "q" => q = Some(v),
            "l" => l = Some(v as usize),
            "lp" => lp = Some(v as usize),
            "anchor" => anchor = Some(v),
            "J" => j = Some(v as usize),
            other => return Err(bad(format!("unknown key `{other}`"))),
        }
    }
    let (q, l, lp, anchor, j) = match (q, l, lp, anchor, j) {
        (Some(q), Some(l), Some(lp), Some(anchor), Some(j)) => (q, l, lp, anchor, j),
        _ => return Err(bad("params line must set q, l, lp, anchor, J".into())),
    };
    let spec = field_from_order(q)?;
    let params = CodeParams::new(spec, l, lp)?;
    let anchor_point = params.point_from_index(anchor)?;

    let mut checks = Vec::with_capacity(j);
    for line in lines {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let rest = line
            .strip_prefix("chk")
            .ok_or_else(|| bad(format!("unexpected line `{line}`")))?;
        let mut entries = Vec::new();
        for tok in rest.split_whitespace() {
            let (idx, coef) = tok
                .split_once(':')
                .ok_or_else(|| bad(format!("expected idx:coef, got `{tok}`")))?;
            let idx: u64 = idx.parse().map_err(|_| bad(format!("bad index `{idx}`")))?;
            let coef: u64 = coef
                .parse()
                .map_err(|_| bad(format!("bad coefficient `{coef}`")))?;
            if idx >= params.n() {
                return Err(Error::IndexOutOfRange {
                    index: idx,
                    limit: params.n(),
                });
            }
            let coef = params.spec().element(coef)?;
            if coef.is_zero() {
                return Err(bad(format!("zero coefficient at index {idx}")));
            }
            entries.push((idx, coef));
        }
        if entries.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(bad("check indices must be strictly ascending".into()));
        }
        // The rank of a support member relative to the anchor identifies the
        // r this check came from.
        let witness = entries
            .iter()
            .map(|&(i, _)| i)
            .find(|&i| i != anchor)
            .ok_or_else(|| bad("check has no non-anchor support".into()))?;
        let member = params.point_from_index(witness)?.sub(&anchor_point)?;
        checks.push(SparseParityCheck::from_parts(anchor, entries, member.rank()));
    }
    if checks.len() != j {
        return Err(bad(format!("J={j} but {} chk lines", checks.len())));
    }
    let set = OrthogonalCheckSet::from_parts(anchor, checks);
    set.verify_orthogonal()?;
    Ok((params, set))
}

pub fn write_to(path: &Path, params: &CodeParams, set: &OrthogonalCheckSet) -> Result<()> {
    std::fs::write(path, to_string(params, set))?;
    Ok(())
}

pub fn read_from(path: &Path) -> Result<(CodeParams, OrthogonalCheckSet)> {
    from_string(&std::fs::read_to_string(path)?)
}

/// Unique (p, e) with p^e = q, then the canonical field.
pub fn field_from_order(q: u64) -> Result<Arc<FieldSpec>> {
    if q < 3 {
        return Err(Error::FieldTooSmall(q));
    }
    let mut p = 2;
    while p * p <= q {
        if q.is_multiple_of(p) {
            break;
        }
        p += 1;
    }
    let p = if q.is_multiple_of(p) { p } else { q };
    let mut e = 0;
    let mut rest = q;
    while rest.is_multiple_of(p) {
        rest /= p;
        e += 1;
    }
    if rest != 1 {
        return Err(Error::Parse(format!("q = {q} is not a prime power")));
    }
    FieldSpec::new(p, e)
}
