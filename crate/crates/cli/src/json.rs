//! JSON rendering helpers shared by the subcommands.

use num_bigint::{BigInt, BigUint};
use num_traits::ToPrimitive;
use qnk::charvar::CharVarReport;
use qnk::{IntMatrix, C64};
use serde_json::{json, Value};

/// An integer as a JSON number when it fits in `i64`, otherwise as a decimal string.
pub fn int(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => json!(v),
        None => json!(x.to_string()),
    }
}

pub fn uint(x: &BigUint) -> Value {
    match x.to_i64() {
        Some(v) => json!(v),
        None => json!(x.to_string()),
    }
}

pub fn ints(xs: &[BigInt]) -> Value {
    Value::Array(xs.iter().map(int).collect())
}

pub fn matrix(m: &IntMatrix) -> Value {
    Value::Array(m.rows().iter().map(|r| ints(r)).collect())
}

/// A complex number as `[re, im]`.
pub fn complex(z: C64) -> Value {
    json!([z.re, z.im])
}

pub fn complexes(zs: &[C64]) -> Value {
    Value::Array(zs.iter().copied().map(complex).collect())
}

pub fn charvar(r: &CharVarReport) -> Value {
    json!({
        "ncf": ints(r.ncf.entries()),
        "sigma_group": {
            "runs": r.sigma_group.run_lengths,
            "order": uint(&r.sigma_group.order),
        },
        "partition": {
            "J": r.partition.fixed,
            "orbits": r.partition.orbits,
        },
        "bundle": {
            "base_dim": r.bundle.base_dim,
            "fibers": r.bundle.fibers,
            "tag": r.bundle.tag.to_string(),
            "very_ample": r.bundle.very_ample,
        },
        "etale_order": uint(&r.etale_order),
    })
}

/// Merge `fields` into the object `base`.
pub fn with(mut base: Value, fields: Value) -> Value {
    if let (Value::Object(b), Value::Object(f)) = (&mut base, fields) {
        b.extend(f);
    }
    base
}
