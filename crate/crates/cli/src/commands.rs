//! Subcommand implementations.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use qnk::charvar;
use qnk::contfrac::{self, Ncf, Slope};
use qnk::cplx::parse_complex;
use qnk::eqa;
use qnk::zlinalg::{self, WeightedGraph};
use qnk::{EPoint, LatticeParams, ThetaSpace, ThetaSpaceParams, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::json::{self as js, with};
use crate::{Cli, CliError, Command, Global, Outcome, VerifyKind};

type Res<T> = Result<T, CliError>;

const SWEEP_NMAX: u64 = 500;
const SWEEP_GMAX: usize = 12;
/// Draws allowed per requested sample before giving up on admissible points.
const MAX_DRAWS_PER_SAMPLE: usize = 50;

pub fn run(cli: &Cli) -> Res<Outcome> {
    let g = &cli.global;
    // global flags are preconditions for every subcommand
    tau_of(g, lattice(g)?.eta)?;
    match &cli.command {
        Command::Contfrac { n, k } => contfrac_cmd(n, k),
        Command::Sequences { n, k } => sequences_cmd(n, k),
        Command::Smith { entries } => smith_cmd(entries),
        Command::Intersect { a, b } => intersect_cmd(a, b),
        Command::GraphDivisor { file } => graph_cmd(file),
        Command::Charvar { n, k } => charvar_cmd(n, k),
        Command::Sweep { nmax, gmax, uncapped, csv } => sweep_cmd(*nmax, *gmax, *uncapped, *csv),
        Command::Relations { n, k } => relations_cmd(g, n, k),
        Command::Verify { kind, n, k, samples, depth } => verify_cmd(g, *kind, n, k, *samples, *depth),
        Command::Phi { n, k, z } => phi_cmd(g, n, k, z),
        Command::Etale { n, k } => etale_cmd(n, k),
    }
}

// ── parsing ──────────────────────────────────────────────────────────

fn big(s: &str) -> Res<BigInt> {
    s.trim().parse().map_err(|_| CliError::new("parse", format!("not an integer: {s:?}")))
}

fn slope(n: &str, k: &str) -> Res<Slope> {
    Ok(Slope::new(big(n)?, big(k)?)?)
}

/// A slope small enough for the numerical layers.
fn small_slope(n: &str, k: &str) -> Res<(i64, i64, Ncf)> {
    let s = slope(n, k)?;
    let ni = s.n().to_i64().ok_or_else(|| qnk::Error::Overflow(s.n().to_string()))?;
    let ki = s.k().to_i64().ok_or_else(|| qnk::Error::Overflow(s.k().to_string()))?;
    let f = contfrac::expand(&s);
    f.entries_i64()?;
    Ok((ni, ki, f))
}

fn eta(g: &Global) -> Res<C64> {
    Ok(parse_complex(&g.eta)?)
}

fn tau_of(g: &Global, eta: C64) -> Res<Option<C64>> {
    match &g.tau {
        None => Ok(None),
        Some(s) if s.contains(',') => Ok(Some(s.parse::<EPoint>()?.to_complex(eta))),
        Some(s) => Ok(Some(parse_complex(s)?)),
    }
}

fn lattice(g: &Global) -> Res<LatticeParams> {
    Ok(LatticeParams::new(eta(g)?)?)
}

fn space(f: &Ncf, lat: LatticeParams) -> Res<Arc<ThetaSpace>> {
    Ok(Arc::new(ThetaSpace::new(ThetaSpaceParams::new(f.clone(), lat)?)?))
}

fn slope_fields(s: &Slope) -> Value {
    json!({"n": js::int(s.n()), "k": js::int(s.k())})
}

// ── exact subcommands ────────────────────────────────────────────────

fn contfrac_cmd(n: &str, k: &str) -> Res<Outcome> {
    let s = slope(n, k)?;
    let f = contfrac::expand(&s);
    let v = json!({"command": "contfrac", "ncf": js::ints(f.entries()), "g": f.g()});
    Ok(Outcome::Json(with(slope_fields(&s), v)))
}

fn sequences_cmd(n: &str, k: &str) -> Res<Outcome> {
    let s = slope(n, k)?;
    let f = contfrac::expand(&s);
    let seq = contfrac::sequences(&f);
    let v = json!({
        "command": "sequences",
        "ncf": js::ints(f.entries()),
        "k_seq": js::ints(&seq.k_seq),
        "l_seq": js::ints(&seq.l_seq),
        "k_prime": js::int(&seq.k_prime),
    });
    Ok(Outcome::Json(with(slope_fields(&s), v)))
}

fn smith_cmd(entries: &[String]) -> Res<Outcome> {
    let e = entries.iter().map(|x| big(x)).collect::<Res<Vec<_>>>()?;
    let f = Ncf::new(e)?;
    let dm = zlinalg::dmatrix(f.entries())?;
    let inv = zlinalg::smith_invariants(&dm);
    let (n, adj) = zlinalg::d_inverse(&f)?;
    Ok(Outcome::Json(json!({
        "command": "smith",
        "ncf": js::ints(f.entries()),
        "n": js::int(&n),
        "invariant_factors": js::ints(&inv.factors),
        "d_inverse": js::matrix(&adj),
    })))
}

fn intersect_cmd(a: &[String], b: &[String]) -> Res<Outcome> {
    let a = a.iter().map(|x| big(x)).collect::<Res<Vec<_>>>()?;
    let b = b.iter().map(|x| big(x)).collect::<Res<Vec<_>>>()?;
    if a.len() != b.len() + 1 {
        return Err(CliError::new("dimension", format!("need |a| = |b| + 1, got {} and {}", a.len(), b.len())));
    }
    let m = zlinalg::amatrix(&a, &b)?;
    let x = zlinalg::intersection_number(&a, &b)?;
    Ok(Outcome::Json(json!({
        "command": "intersect",
        "a": js::ints(&a),
        "b": js::ints(&b),
        "matrix": js::matrix(&m),
        "intersection": js::int(&x),
    })))
}

fn label(v: &Value) -> Option<BigInt> {
    match v {
        Value::Number(x) => x.as_i64().map(BigInt::from),
        Value::String(s) => s.trim().parse().ok(),
        _ => None,
    }
}

fn read_graph(path: &std::path::Path) -> Res<WeightedGraph> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::new("io", format!("{}: {e}", path.display())))?;
    let v: Value = serde_json::from_str(&text).map_err(|e| CliError::new("parse", e.to_string()))?;
    let bad = |m: &str| CliError::new("parse", format!("graph file: {m}"));
    let vertices = v.get("vertices").and_then(Value::as_u64).ok_or_else(|| bad("\"vertices\" must be a count"))?;
    let edges = v.get("edges").and_then(Value::as_array).ok_or_else(|| bad("\"edges\" must be an array"))?;
    let edges = edges
        .iter()
        .map(|e| match e.as_array().map(Vec::as_slice) {
            Some([i, j, l]) => Ok((
                i.as_u64().ok_or_else(|| bad("vertex indices are positive integers"))? as usize,
                j.as_u64().ok_or_else(|| bad("vertex indices are positive integers"))? as usize,
                label(l).ok_or_else(|| bad("labels are integers"))?,
            )),
            _ => Err(bad("each edge is [i, j, label]")),
        })
        .collect::<Res<Vec<_>>>()?;
    Ok(WeightedGraph::new(vertices as usize, edges)?)
}

fn graph_cmd(file: &std::path::Path) -> Res<Outcome> {
    let gr = read_graph(file)?;
    let gi = zlinalg::graph_divisor_invariants(&gr);
    Ok(Outcome::Json(json!({
        "command": "graph-divisor",
        "vertices": gr.vertices,
        "matrix": js::matrix(&gi.m),
        "selfint": js::int(&gi.selfint),
        "kernel": {
            "invariant_factors": js::ints(&gi.kernel.invariant_factors.factors),
            "order": gi.kernel.order.as_ref().map_or(Value::Null, js::int),
            "literal_reading_order": js::int(&gi.kernel.literal_reading_order),
        },
    })))
}

fn charvar_cmd(n: &str, k: &str) -> Res<Outcome> {
    let s = slope(n, k)?;
    let r = charvar::charvar_report(&contfrac::expand(&s));
    let v = with(json!({"command": "charvar"}), slope_fields(&s));
    Ok(Outcome::Json(with(v, js::charvar(&r))))
}

fn etale_cmd(n: &str, k: &str) -> Res<Outcome> {
    let s = slope(n, k)?;
    let f = contfrac::expand(&s);
    let p = charvar::orbit_partition(&f);
    let v = json!({
        "command": "etale",
        "ncf": js::ints(f.entries()),
        "J": p.fixed,
        "orbits": p.orbits,
        "order": js::uint(&charvar::etale_cover_group_order(&p)),
    });
    Ok(Outcome::Json(with(slope_fields(&s), v)))
}

fn sweep_cmd(nmax: u64, gmax: usize, uncapped: bool, csv: bool) -> Res<Outcome> {
    if !uncapped && (nmax > SWEEP_NMAX || gmax > SWEEP_GMAX) {
        return Err(CliError::new(
            "cap",
            format!("sweep is capped at n ≤ {SWEEP_NMAX}, g ≤ {SWEEP_GMAX}; pass --uncapped to lift the caps"),
        ));
    }
    let mut rows = Vec::new();
    for n in 2..=nmax {
        for k in 1..n {
            if num_integer::gcd(n, k) != 1 {
                continue;
            }
            let f = contfrac::expand(&Slope::new(n, k)?);
            if f.g() > gmax {
                continue;
            }
            rows.push((n, k, charvar::charvar_report(&f)));
        }
    }
    if csv {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| CliError::new("io", e.to_string());
        w.write_record(["n", "k", "ncf", "g", "tag", "very_ample", "base_dim", "fibers", "runs", "sigma_order", "etale_order"])
            .map_err(io)?;
        let join = |xs: Vec<String>| xs.join(" ");
        for (n, k, r) in &rows {
            w.write_record([
                n.to_string(),
                k.to_string(),
                join(r.ncf.entries().iter().map(ToString::to_string).collect()),
                r.ncf.g().to_string(),
                r.bundle.tag.to_string(),
                r.bundle.very_ample.to_string(),
                r.bundle.base_dim.to_string(),
                join(r.bundle.fibers.iter().map(ToString::to_string).collect()),
                join(r.sigma_group.run_lengths.iter().map(ToString::to_string).collect()),
                r.sigma_group.order.to_string(),
                r.etale_order.to_string(),
            ])
            .map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::new("io", e.to_string()))?;
        return Ok(Outcome::Text(String::from_utf8(bytes).expect("CSV fields are UTF-8")));
    }
    let rows: Vec<Value> = rows.iter().map(|(n, k, r)| with(json!({"n": n, "k": k}), js::charvar(r))).collect();
    Ok(Outcome::Json(json!({"command": "sweep", "nmax": nmax, "gmax": gmax, "rows": rows})))
}

// ── numerical subcommands ────────────────────────────────────────────

fn relations_cmd(g: &Global, n: &str, k: &str) -> Res<Outcome> {
    let (n, k, _) = small_slope(n, k)?;
    let lat = lattice(g)?;
    let tau = tau_of(g, lat.eta)?.ok_or_else(|| CliError::new("missing_tau", "relations need --tau"))?;
    let rs = eqa::relations(n, k, &lat.with_tau(tau))?;
    let mut rels = Vec::with_capacity((n * n) as usize);
    for i in 0..n {
        for j in 0..n {
            let cs: Vec<C64> = (0..n).map(|r| rs.coeff(i, j, r)).collect();
            rels.push(json!({"i": i, "j": j, "coefficients": js::complexes(&cs)}));
        }
    }
    Ok(Outcome::Json(json!({
        "command": "relations",
        "n": n,
        "k": k,
        "eta": js::complex(lat.eta),
        "tau": js::complex(tau),
        "relations": rels,
    })))
}

fn point(r: &mut ChaCha8Rng, eta: C64, spread: f64) -> C64 {
    C64::new(r.random_range(0.0..1.0), 0.0) + eta * r.random_range(-spread..spread)
}

fn vector(r: &mut ChaCha8Rng, g: usize, eta: C64, spread: f64) -> Vec<C64> {
    (0..g).map(|_| point(r, eta, spread)).collect()
}

/// A `τ` at least 5% of a period away from `(1/n)Λ`.
fn generic_tau(r: &mut ChaCha8Rng, n: i64, lat: &LatticeParams) -> C64 {
    loop {
        let t = point(r, lat.eta, 0.45);
        let (a, b) = lat.coords(t * n as f64);
        if (a - a.round()).abs() > 0.05 && (b - b.round()).abs() > 0.05 {
            return t;
        }
    }
}

/// Residuals of one identity family.
struct Tally {
    name: &'static str,
    residuals: Vec<f64>,
    rejected: usize,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Tally { name, residuals: Vec::new(), rejected: 0 }
    }

    fn max(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }

    fn mean(&self) -> f64 {
        if self.residuals.is_empty() {
            0.0
        } else {
            self.residuals.iter().sum::<f64>() / self.residuals.len() as f64
        }
    }

    /// Record a sample; near-pole draws are counted and redrawn by the caller.
    fn push(&mut self, r: qnk::Result<f64>) -> Res<bool> {
        match r {
            Ok(x) => {
                self.residuals.push(x);
                Ok(true)
            }
            Err(qnk::Error::NearZero(_)) => {
                self.rejected += 1;
                Ok(false)
            }
            Err(e) => Err(e.into()),
        }
    }

    fn json(&self) -> Value {
        json!({
            "name": self.name,
            "max_residual": self.max(),
            "mean_residual": self.mean(),
            "samples": self.residuals.len(),
            "rejected": self.rejected,
        })
    }
}

/// Draw until `samples` admissible residuals are collected.
fn collect(samples: usize, tally: &mut Tally, mut draw: impl FnMut() -> qnk::Result<f64>) -> Res<()> {
    let mut draws = 0;
    while tally.residuals.len() < samples {
        if draws == samples.max(1) * MAX_DRAWS_PER_SAMPLE {
            return Err(CliError::new("admissibility", format!("too few admissible samples for {}", tally.name)));
        }
        draws += 1;
        tally.push(draw())?;
    }
    Ok(())
}

fn default_tolerance(kind: VerifyKind) -> f64 {
    match kind {
        VerifyKind::Identity => 1e-6,
        VerifyKind::Graph | VerifyKind::PointModule => 1e-7,
        VerifyKind::Degenerate => 1e-8,
    }
}

fn verify_cmd(g: &Global, kind: VerifyKind, n: &str, k: &str, samples: usize, depth: usize) -> Res<Outcome> {
    let (n, k, f) = small_slope(n, k)?;
    let tolerance = g.tolerance.unwrap_or_else(|| default_tolerance(kind));
    if tolerance.is_nan() || tolerance <= 0.0 {
        return Err(CliError::new("parse", "--tolerance must be positive"));
    }
    let mut r = ChaCha8Rng::seed_from_u64(g.seed);
    let base = lattice(g)?;
    let eta = base.eta;
    let tau = match tau_of(g, eta)? {
        Some(t) => t,
        None => generic_tau(&mut r, n, &base),
    };
    let lat = base.with_tau(tau);
    let mut tallies = Vec::new();
    let mut extra = json!({});
    match kind {
        VerifyKind::Identity => {
            let sp = space(&f, lat)?;
            let w = sp.w_basis();
            let gg = sp.g();
            let mut t = Tally::new("exchange");
            collect(samples, &mut t, || {
                let (u, v) = (point(&mut r, eta, 0.3), point(&mut r, eta, 0.3));
                let (y, z) = (vector(&mut r, gg, eta, 0.5), vector(&mut r, gg, eta, 0.5));
                let (a, b) = (r.random_range(0..n), r.random_range(0..n));
                eqa::exchange_identity_residual(&w, u, v, &y, &z, a, b)
            })?;
            tallies.push(t);
        }
        VerifyKind::Graph => {
            let rs = eqa::relations(n, k, &lat)?;
            let sp = space(&f, lat)?;
            let w = sp.w_basis();
            let gg = sp.g();
            let mut t = Tally::new("graph_vanishing");
            collect(samples, &mut t, || {
                let y = vector(&mut r, gg, eta, 0.5);
                let (a, b) = (r.random_range(0..n), r.random_range(0..n));
                eqa::graph_vanishing_residual(&rs, &w, &y, a, b)
            })?;
            tallies.push(t);
        }
        VerifyKind::Degenerate => {
            let mut d = Tally::new("degenerate");
            collect(samples, &mut d, || {
                let y = point(&mut r, eta, 0.5);
                let (a, b) = (r.random_range(0..n), r.random_range(0..n));
                eqa::degenerate_identities_residual(&lat, n, tau, y, a, b)
            })?;
            let mut one = Tally::new("k1_identity");
            collect(samples, &mut one, || {
                let (y, z) = (point(&mut r, eta, 0.5), point(&mut r, eta, 0.5));
                let (a, b) = (r.random_range(0..n), r.random_range(0..n));
                eqa::k1_identity_sides(&lat, n, tau, y, z, a, b).map(|s| s.residual())
            })?;
            tallies.push(d);
            tallies.push(one);
        }
        VerifyKind::PointModule => {
            let rs = eqa::relations(n, k, &lat)?;
            let sp = space(&f, lat)?;
            let w = sp.w_basis();
            let gg = sp.g();
            let mut t = Tally::new("point_module");
            let mut min_distance = f64::INFINITY;
            collect(samples, &mut t, || {
                let z = vector(&mut r, gg, eta, 0.5);
                let table = eqa::point_module(&rs, &w, &z, depth)?;
                min_distance = min_distance.min(table.min_row_distance);
                Ok(table.max_residual())
            })?;
            tallies.push(t);
            extra = json!({"min_row_distance": if min_distance.is_finite() { json!(min_distance) } else { Value::Null }});
        }
    }
    let max = tallies.iter().map(Tally::max).fold(0.0, f64::max);
    let total: usize = tallies.iter().map(|t| t.residuals.len()).sum();
    let mean = tallies.iter().flat_map(|t| t.residuals.iter()).sum::<f64>() / total.max(1) as f64;
    let pass = max < tolerance;
    let kind_name = match kind {
        VerifyKind::Identity => "identity",
        VerifyKind::Graph => "graph",
        VerifyKind::Degenerate => "degenerate",
        VerifyKind::PointModule => "point-module",
    };
    let report = with(
        json!({
            "command": "verify",
            "kind": kind_name,
            "params": {
                "n": n,
                "k": k,
                "eta": js::complex(eta),
                "tau": js::complex(tau),
                "seed": g.seed,
                "samples": samples,
                "depth": depth,
                "tolerance": tolerance,
            },
            "identities": tallies.iter().map(Tally::json).collect::<Vec<_>>(),
            "max_residual": max,
            "mean_residual": mean,
            "samples": total,
            "pass": pass,
        }),
        extra,
    );
    Ok(if pass { Outcome::Json(report) } else { Outcome::Failed(report) })
}

fn phi_cmd(g: &Global, n: &str, k: &str, z: &[String]) -> Res<Outcome> {
    let (n, k, f) = small_slope(n, k)?;
    let z = z.iter().map(|s| parse_complex(s)).collect::<qnk::Result<Vec<_>>>()?;
    if z.len() != f.g() {
        return Err(CliError::new("dimension", format!("{}/{} needs {} coordinates, got {}", n, k, f.g(), z.len())));
    }
    let lat = lattice(g)?;
    let w = space(&f, lat)?.w_basis();
    let phi = w.phi(&z)?;
    Ok(Outcome::Json(json!({
        "command": "phi",
        "n": n,
        "k": k,
        "ncf": js::ints(f.entries()),
        "eta": js::complex(lat.eta),
        "z": js::complexes(&z),
        "phi": js::complexes(&phi),
    })))
}
