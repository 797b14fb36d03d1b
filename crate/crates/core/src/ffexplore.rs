//! Exhaustive scans over small finite fields: which `F_q` admit a monic
//! degree-`d` polynomial with newly reducible `n`-th iterate, and whether
//! every quadratic over `F_(2^n)` has reducible third iterate.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::criteria::newly_reducible;
use crate::error::{Error, Result};
use crate::factor::finite::is_irreducible;
use crate::field::{ExtensionField, Field, FiniteField};
use crate::poly::Poly;

/// Largest admissible `q^(d+1)`.
pub const SCAN_CAP: u64 = 10_000_000;
/// Largest admissible iterate degree `d^n`.
pub const ITERATE_DEGREE_CAP: u64 = 4096;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FfWitness {
    /// Coefficients from the constant term up, as element indices.
    pub coeffs: Vec<u64>,
    pub poly: String,
    pub degree_pattern: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Membership {
    pub q: u64,
    pub d: usize,
    pub n: u32,
    pub member: bool,
    /// Ordered by coefficients, leading one first.
    pub witnesses: Vec<FfWitness>,
    pub scanned: u64,
}

pub const CSV_HEADER: &str = "q,d,n,member,witness_count";

impl Membership {
    pub fn csv_row(&self) -> String {
        format!("{},{},{},{},{}", self.q, self.d, self.n, self.member, self.witnesses.len())
    }
}

fn checked_pow(q: u64, e: u64) -> Option<u64> {
    u32::try_from(e).ok().and_then(|e| q.checked_pow(e))
}

/// Monic polynomial of degree `d` with index `idx`; coefficient `i` is the
/// `i`-th base-`q` digit, so index order is lexicographic from the
/// `x^(d-1)` coefficient down.
fn monic_from_index(k: &ExtensionField, d: usize, mut idx: u64) -> Poly<ExtensionField> {
    let q = k.order();
    let mut cs: Vec<u64> = (0..d)
        .map(|_| {
            let c = idx % q;
            idx /= q;
            c
        })
        .collect();
    cs.push(1);
    Poly::new(k.clone(), cs)
}

fn in_pool<T: Send>(workers: Option<usize>, job: impl FnOnce() -> T + Send) -> Result<T> {
    match workers {
        None => Ok(job()),
        Some(w) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(w.max(1))
                .build()
                .map_err(|e| Error::Precondition(format!("thread pool: {e}")))?;
            Ok(pool.install(job))
        }
    }
}

pub fn classify_membership(q: u64, d: usize, n: u32) -> Result<Membership> {
    classify_membership_with(q, d, n, None)
}

/// Scans all monic degree-`d` polynomials over `F_q` for a newly reducible
/// `n`-th iterate, on `workers` threads (rayon's default pool if `None`).
pub fn classify_membership_with(q: u64, d: usize, n: u32, workers: Option<usize>) -> Result<Membership> {
    let k = ExtensionField::with_order(q)?;
    if d < 2 || n < 2 {
        return Err(Error::Precondition("need d >= 2 and n >= 2".into()));
    }
    if checked_pow(q, d as u64 + 1).is_none_or(|s| s > SCAN_CAP) {
        return Err(Error::ScaleCap(format!("q^(d+1) = {q}^{} exceeds {SCAN_CAP}", d + 1)));
    }
    if checked_pow(d as u64, n as u64).is_none_or(|s| s > ITERATE_DEGREE_CAP) {
        return Err(Error::ScaleCap(format!("iterate degree {d}^{n} exceeds {ITERATE_DEGREE_CAP}")));
    }
    let total = q.pow(d as u32);
    let found = in_pool(workers, || {
        (0..total)
            .into_par_iter()
            .map(|idx| {
                let f = monic_from_index(&k, d, idx);
                newly_reducible(&f, n).map(|w| {
                    w.map(|w| FfWitness {
                        coeffs: f.coeffs().to_vec(),
                        poly: f.to_string(),
                        degree_pattern: w.factors.degree_pattern(),
                    })
                })
            })
            .collect::<Result<Vec<_>>>()
    })??;
    let witnesses: Vec<FfWitness> = found.into_iter().flatten().collect();
    Ok(Membership { q, d, n, member: !witnesses.is_empty(), witnesses, scanned: total })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AhmadiReport {
    pub q: u64,
    pub monic_only: bool,
    pub holds: bool,
    /// Quadratics `[c, b, a]` whose third iterate is irreducible.
    pub exceptions: Vec<Vec<u64>>,
    pub checked: u64,
}

/// Whether every quadratic over `F_q`, `q = 2^n` with `n <= 6`, has
/// reducible third iterate.
pub fn verify_ahmadi(q: u64, monic_only: bool) -> Result<AhmadiReport> {
    let k = ExtensionField::with_order(q)?;
    if k.characteristic() != 2 || k.degree() > 6 {
        return Err(Error::Precondition(format!("q must be 2^n with n <= 6, got {q}")));
    }
    let leads: Vec<u64> = if monic_only { vec![1] } else { (1..q).collect() };
    let cases: Vec<(u64, u64)> = leads.iter().flat_map(|&a| (0..q * q).map(move |i| (a, i))).collect();
    let exceptions: Vec<Vec<u64>> = cases
        .par_iter()
        .filter_map(|&(a, i)| {
            let coeffs = vec![i % q, i / q, a];
            let f = Poly::new(k.clone(), coeffs.clone());
            is_irreducible(&f.iterate(3)).then_some(coeffs)
        })
        .collect();
    Ok(AhmadiReport {
        q,
        monic_only,
        holds: exceptions.is_empty(),
        exceptions,
        checked: cases.len() as u64,
    })
}
