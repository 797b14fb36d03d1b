//! Parallel, checkpointed searches for quadratics with newly reducible
//! iterates: brute force over integer coefficient boxes, and enumeration
//! of the two-parameter surface of symmetrically reducible third iterates.

use std::collections::BTreeSet;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::arith::{format_rational, primes, rat_int, rational_is_square, Rational};
use crate::criteria::{
    newly_reducible_via, second_iter_symmetric, third_iter_condition2, NewlyReducibleWitness, QuadNormalForm, Route,
    WitnessJson,
};
use crate::error::{Error, Result};
use crate::factor::nmod;
use crate::factor::rational::subset_sums;
use crate::families::quad_n23_surface;
use crate::field::RationalField;
use crate::poly::Poly;

/// Boxes with more candidates are refused unless explicitly overridden.
pub const CANDIDATE_LIMIT: u128 = 1_000_000_000;

/// Monic `x^2 + a x + b` with `a` and `b` in closed ranges.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SearchBox {
    pub a_min: i64,
    pub a_max: i64,
    pub b_min: i64,
    pub b_max: i64,
    pub n: u32,
}

impl SearchBox {
    pub fn new(a_min: i64, a_max: i64, b_min: i64, b_max: i64, n: u32) -> Result<Self> {
        if a_min > a_max || b_min > b_max {
            return Err(Error::Precondition("empty search box".into()));
        }
        if !(2..=4).contains(&n) {
            return Err(Error::Precondition(format!("n must be 2, 3 or 4, got {n}")));
        }
        Ok(SearchBox { a_min, a_max, b_min, b_max, n })
    }

    /// `|a| <= a_bound`, `|b| <= b_bound`.
    pub fn symmetric(a_bound: i64, b_bound: i64, n: u32) -> Result<Self> {
        Self::new(-a_bound, a_bound, -b_bound, b_bound, n)
    }

    pub fn candidates(&self) -> u128 {
        (self.a_max - self.a_min + 1) as u128 * (self.b_max - self.b_min + 1) as u128
    }

    pub fn contains(&self, a: &Rational, b: &Rational) -> bool {
        let within = |v: &Rational, lo: i64, hi: i64| v.is_integer() && *v >= rat_int(lo) && *v <= rat_int(hi);
        within(a, self.a_min, self.a_max) && within(b, self.b_min, self.b_max)
    }

    fn chunk_count(&self, chunk: usize) -> usize {
        let width = (self.a_max - self.a_min + 1) as usize;
        width.div_ceil(chunk)
    }

    /// The `a`-strip of chunk `id`.
    fn strip(&self, chunk: usize, id: usize) -> std::ops::RangeInclusive<i64> {
        let lo = self.a_min + (id * chunk) as i64;
        lo..=(lo + chunk as i64 - 1).min(self.a_max)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Provenance {
    Brute,
    Surface {
        #[serde(with = "crate::arith::rational_str")]
        r: Rational,
        #[serde(with = "crate::arith::rational_str")]
        s: Rational,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HitRecord {
    #[serde(with = "crate::arith::rational_str")]
    pub a: Rational,
    #[serde(with = "crate::arith::rational_str")]
    pub b: Rational,
    #[serde(with = "crate::arith::rational_str")]
    pub gamma: Rational,
    #[serde(with = "crate::arith::rational_str")]
    pub m: Rational,
    pub witness: WitnessJson,
    pub provenance: Provenance,
    /// Surface hits only: whether `(a, b)` lies in the reference box.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub in_box: Option<bool>,
}

impl HitRecord {
    fn new(a: Rational, b: Rational, w: &NewlyReducibleWitness<RationalField>, provenance: Provenance) -> Self {
        let nf = QuadNormalForm::from_monic(&a, &b);
        HitRecord {
            a,
            b,
            gamma: nf.gamma,
            m: nf.m,
            witness: w.to_wire(&RationalField),
            provenance,
            in_box: None,
        }
    }

    pub fn poly(&self) -> Poly<RationalField> {
        Poly::new(RationalField, vec![self.b.clone(), self.a.clone(), rat_int(1)])
    }

    fn key(&self) -> (Rational, Rational) {
        (self.a.clone(), self.b.clone())
    }

    /// Recomputes the witness by full factorization with no criteria
    /// shortcuts and compares it with the recorded one.
    pub fn revalidate(&self) -> Result<bool> {
        let recorded = NewlyReducibleWitness::from_wire(&RationalField, &self.witness)?;
        let f = self.poly();
        let fresh = newly_reducible_via(&f, recorded.n, Route::FactorOnly)?;
        Ok(fresh.as_ref() == Some(&recorded) && recorded.factors.expand(&RationalField) == f.iterate(recorded.n))
    }

    pub fn csv_row(&self) -> String {
        let prov = match &self.provenance {
            Provenance::Brute => "brute".to_string(),
            Provenance::Surface { r, s } => format!("surface({} {})", format_rational(r), format_rational(s)),
        };
        let pattern: Vec<String> = self
            .witness
            .factors
            .factors
            .iter()
            .flat_map(|f| std::iter::repeat_n((f.poly.len() - 1).to_string(), f.mult as usize))
            .collect();
        format!(
            "{},{},{},{},{},{},{}",
            format_rational(&self.a),
            format_rational(&self.b),
            format_rational(&self.gamma),
            format_rational(&self.m),
            self.witness.n,
            pattern.join(" "),
            prov
        )
    }
}

pub const HIT_CSV_HEADER: &str = "a,b,gamma,m,n,degree_pattern,provenance";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checkpoint {
    #[serde(rename = "box")]
    pub search_box: SearchBox,
    pub chunk: usize,
    pub completed: Vec<usize>,
    pub hits: Vec<HitRecord>,
    pub hash: String,
}

#[derive(Serialize)]
struct CheckpointBody<'a> {
    #[serde(rename = "box")]
    search_box: &'a SearchBox,
    chunk: usize,
    completed: &'a [usize],
    hits: &'a [HitRecord],
}

impl Checkpoint {
    pub fn empty(search_box: SearchBox, chunk: usize) -> Self {
        let mut c = Checkpoint { search_box, chunk, completed: Vec::new(), hits: Vec::new(), hash: String::new() };
        c.hash = c.content_hash();
        c
    }

    /// SHA-256 over the canonical JSON of everything but the hash.
    pub fn content_hash(&self) -> String {
        let body = CheckpointBody {
            search_box: &self.search_box,
            chunk: self.chunk,
            completed: &self.completed,
            hits: &self.hits,
        };
        let bytes = serde_json::to_vec(&body).expect("serializable");
        hex::encode(Sha256::digest(&bytes))
    }

    pub fn verify(&self) -> Result<()> {
        if self.chunk == 0 {
            return Err(Error::Checkpoint("chunk size is zero".into()));
        }
        if self.hash != self.content_hash() {
            return Err(Error::Checkpoint("hash mismatch; checkpoint is corrupt or edited".into()));
        }
        let total = self.search_box.chunk_count(self.chunk);
        if self.completed.iter().any(|&c| c >= total) {
            return Err(Error::Checkpoint("completed chunk id out of range".into()));
        }
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        let c: Checkpoint =
            serde_json::from_str(&text).map_err(|e| Error::Checkpoint(format!("unreadable checkpoint: {e}")))?;
        c.verify()?;
        Ok(c)
    }

    /// Writes to a sibling temporary file, syncs it and renames it over
    /// `path`.
    pub fn save(&mut self, path: &Path) -> Result<()> {
        self.completed.sort_unstable();
        self.hits.sort_by_key(HitRecord::key);
        self.hash = self.content_hash();
        let tmp = path.with_extension("tmp");
        {
            let mut file = fs::File::create(&tmp)?;
            file.write_all(&serde_json::to_vec_pretty(self)?)?;
            file.sync_all()?;
        }
        fs::rename(&tmp, path)?;
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct SearchOptions {
    /// Worker threads; rayon's default pool when `None`.
    pub workers: Option<usize>,
    /// Width of an `a`-strip.
    pub chunk: usize,
    pub route: Route,
    pub checkpoint: Option<PathBuf>,
    /// Stop after this many chunks have been completed in this run.
    pub stop_after: Option<usize>,
    /// Permit boxes above `CANDIDATE_LIMIT`.
    pub allow_large: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            workers: None,
            chunk: 4,
            route: Route::Criteria,
            checkpoint: None,
            stop_after: None,
            allow_large: false,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub candidates: u64,
    pub hits: usize,
    /// Candidates settled by square-class tests alone.
    pub criteria_rejected: u64,
    /// Candidates whose iterates critical values or the modular sieve
    /// proved irreducible.
    pub sieve_rejected: u64,
    /// Candidates that needed an irreducibility test or factorization.
    pub factored: u64,
    pub chunks_total: usize,
    pub chunks_done: usize,
    pub complete: bool,
    pub elapsed_ms: u128,
    pub micros_per_candidate: f64,
}

#[derive(Clone, Debug)]
pub struct SearchOutcome {
    /// Sorted by `(a, b)`.
    pub hits: Vec<HitRecord>,
    pub summary: RunSummary,
}

/// Good primes the modular sieve tries per iterate.
const SEARCH_SIEVE_PRIMES: usize = 24;

enum Verdict {
    Rejected,
    Sieved,
    Factored(Option<HitRecord>),
}

/// Whether the factor degrees of `f^k` modulo small primes rule out a
/// factor of degree `2^(k-1)`, for monic integer `f = x^2 + a x + b`.
/// When `f^(k-1)` is irreducible every proper factor of `f^k` has that
/// degree, so a `true` answer proves `f^k` irreducible.
fn sieve_excludes_half(a: i64, b: i64, k: u32) -> bool {
    let degree = 1usize << k;
    let half = degree / 2;
    let mut good = 0;
    for p in primes().skip(1) {
        let f = nmod::reduce_i64(&[b, a, 1], p);
        let mut g = f.clone();
        for _ in 1..k {
            g = nmod::compose(&f, &g, p);
        }
        let Some(degs) = nmod::degrees_squarefree(&g, p, degree) else {
            continue;
        };
        if !subset_sums(&degs, degree)[half] {
            return true;
        }
        good += 1;
        if good >= SEARCH_SIEVE_PRIMES {
            return false;
        }
    }
    unreachable!("primes are unbounded")
}

/// Square-class tests settle `f` reducible (any `n >= 2`) and, for
/// `n >= 3`, a reducible second iterate.
fn criteria_reject(gamma: &Rational, m: &Rational, n: u32) -> bool {
    if rational_is_square(&(-m - gamma)).is_some() {
        return true;
    }
    n >= 3 && second_iter_symmetric(gamma, m)
}

/// Whether `f^k` is irreducible, given that `f^(k-1)` is, for monic
/// `f = x^2 + a x + b` with critical point `gamma`. `f^k(gamma)` is the
/// norm of `theta - f(gamma)` for a root `theta` of `f^(k-1)`, so a
/// nonsquare value proves irreducibility; otherwise the sieve decides.
/// `false` means undecided.
fn iterate_proven_irreducible(a: i64, b: i64, gamma: &Rational, k: u32) -> bool {
    let (aq, bq) = (rat_int(a), rat_int(b));
    let mut v = gamma.clone();
    for _ in 0..k {
        v = &v * &v + &aq * &v + &bq;
    }
    rational_is_square(&v).is_none() || sieve_excludes_half(a, b, k)
}

/// Criteria first (square classes settle `f` and `f^2`), then critical
/// values and the modular sieve on the higher iterates, then exact
/// factorization for whatever remains.
fn evaluate(a: i64, b: i64, n: u32, route: Route) -> Result<Verdict> {
    let (aq, bq) = (rat_int(a), rat_int(b));
    if route == Route::Criteria {
        let nf = QuadNormalForm::from_monic(&aq, &bq);
        if criteria_reject(&nf.gamma, &nf.m, n) {
            return Ok(Verdict::Rejected);
        }
        if n == 2 && !second_iter_symmetric(&nf.gamma, &nf.m) {
            return Ok(Verdict::Rejected);
        }
        // f and f^2 are irreducible here when n >= 3
        if n >= 3 && (3..=n).all(|k| iterate_proven_irreducible(a, b, &nf.gamma, k)) {
            return Ok(Verdict::Sieved);
        }
    }
    let f = Poly::from_ints(RationalField, &[b, a, 1]);
    let w = newly_reducible_via(&f, n, route)?;
    Ok(Verdict::Factored(w.map(|w| HitRecord::new(aq, bq, &w, Provenance::Brute))))
}

fn run_in_pool<T: Send>(workers: Option<usize>, job: impl FnOnce() -> T + Send) -> Result<T> {
    match workers {
        None => Ok(job()),
        Some(w) => Ok(rayon::ThreadPoolBuilder::new()
            .num_threads(w.max(1))
            .build()
            .map_err(|e| Error::Precondition(format!("thread pool: {e}")))?
            .install(job)),
    }
}

struct Shared {
    checkpoint: Checkpoint,
    path: Option<PathBuf>,
    rejected: u64,
    sieved: u64,
    factored: u64,
}

/// All monic `x^2 + a x + b` in the box with newly reducible `n`-th
/// iterate. With a checkpoint path, an existing checkpoint there is
/// resumed and progress is saved after every chunk.
pub fn box_search(search_box: &SearchBox, opts: &SearchOptions) -> Result<SearchOutcome> {
    let start = match &opts.checkpoint {
        Some(p) if p.exists() => {
            let c = Checkpoint::load(p)?;
            if c.search_box != *search_box {
                return Err(Error::Checkpoint("checkpoint belongs to a different box".into()));
            }
            c
        }
        _ => Checkpoint::empty(*search_box, opts.chunk.max(1)),
    };
    run_from(start, opts)
}

/// Continues a checkpoint to completion.
pub fn resume(checkpoint: Checkpoint, opts: &SearchOptions) -> Result<SearchOutcome> {
    checkpoint.verify()?;
    run_from(checkpoint, opts)
}

fn run_from(checkpoint: Checkpoint, opts: &SearchOptions) -> Result<SearchOutcome> {
    let sb = checkpoint.search_box;
    if sb.candidates() > CANDIDATE_LIMIT && !opts.allow_large {
        return Err(Error::ScaleCap(format!(
            "{} candidates exceed the limit of {CANDIDATE_LIMIT}; pass the override to proceed",
            sb.candidates()
        )));
    }
    let chunk = checkpoint.chunk;
    let total = sb.chunk_count(chunk);
    let done: BTreeSet<usize> = checkpoint.completed.iter().copied().collect();
    let pending: Vec<usize> = (0..total).filter(|c| !done.contains(c)).collect();
    let shared = Mutex::new(Shared { checkpoint, path: opts.checkpoint.clone(), rejected: 0, sieved: 0, factored: 0 });
    let budget = AtomicUsize::new(opts.stop_after.unwrap_or(usize::MAX));
    let clock = Instant::now();

    run_in_pool(opts.workers, || {
        pending.par_iter().try_for_each(|&id| -> Result<()> {
            if budget
                .fetch_update(Ordering::SeqCst, Ordering::SeqCst, |b| b.checked_sub(1))
                .is_err()
            {
                return Ok(());
            }
            let (mut hits, mut rejected, mut sieved, mut factored) = (Vec::new(), 0u64, 0u64, 0u64);
            for a in sb.strip(chunk, id) {
                for b in sb.b_min..=sb.b_max {
                    match evaluate(a, b, sb.n, opts.route)? {
                        Verdict::Rejected => rejected += 1,
                        Verdict::Sieved => sieved += 1,
                        Verdict::Factored(hit) => {
                            factored += 1;
                            hits.extend(hit);
                        }
                    }
                }
            }
            let mut guard = shared.lock().expect("no panics while locked");
            let s = &mut *guard;
            s.checkpoint.hits.extend(hits);
            s.checkpoint.completed.push(id);
            s.rejected += rejected;
            s.sieved += sieved;
            s.factored += factored;
            if let Some(path) = &s.path {
                s.checkpoint.save(path)?;
            }
            Ok(())
        })
    })??;

    let Shared { mut checkpoint, rejected, sieved, factored, .. } = shared.into_inner().expect("not poisoned");
    checkpoint.completed.sort_unstable();
    checkpoint.hits.sort_by_key(HitRecord::key);
    let elapsed = clock.elapsed();
    let evaluated = rejected + sieved + factored;
    let summary = RunSummary {
        candidates: evaluated,
        hits: checkpoint.hits.len(),
        criteria_rejected: rejected,
        sieve_rejected: sieved,
        factored,
        chunks_total: total,
        chunks_done: checkpoint.completed.len(),
        complete: checkpoint.completed.len() == total,
        elapsed_ms: elapsed.as_millis(),
        micros_per_candidate: if evaluated == 0 { 0.0 } else { elapsed.as_secs_f64() * 1e6 / evaluated as f64 },
    };
    Ok(SearchOutcome { hits: checkpoint.hits, summary })
}

/// Rationals `n/d` with `|n| <= h`, `1 <= d <= h`, in lowest terms,
/// ordered by height then value.
pub fn rationals_of_height(h: u64) -> Vec<Rational> {
    let h = h as i64;
    let mut out: BTreeSet<(i64, Rational)> = BTreeSet::new();
    for d in 1..=h {
        for n in -h..=h {
            let q = Rational::new(n.into(), d.into());
            let height = q.numer().magnitude().max(q.denom().magnitude()).clone();
            out.insert((i64::try_from(height).expect("small"), q));
        }
    }
    out.into_iter().map(|(_, q)| q).collect()
}

/// Surface points `(r, s)` of height at most `h` whose quadratic passes
/// the square-class condition; each distinct quadratic is kept once, with
/// the first `(r, s)` producing it, and carries a witness for its newly
/// reducible third iterate. `reference` flags hits with integer
/// coefficients inside a box.
pub fn surface_search(h: u64, reference: Option<&SearchBox>) -> Result<Vec<HitRecord>> {
    surface_search_with(h, reference, None)
}

/// `surface_search` on `workers` threads (rayon's default pool if `None`).
pub fn surface_search_with(h: u64, reference: Option<&SearchBox>, workers: Option<usize>) -> Result<Vec<HitRecord>> {
    run_in_pool(workers, || surface_search_in_pool(h, reference))?
}

fn surface_search_in_pool(h: u64, reference: Option<&SearchBox>) -> Result<Vec<HitRecord>> {
    if h == 0 {
        return Err(Error::Precondition("height bound must be at least 1".into()));
    }
    let qs = rationals_of_height(h);
    let points: Vec<(Rational, Rational)> = qs
        .iter()
        .filter(|r| **r != rat_int(0))
        .flat_map(|r| qs.iter().map(move |s| (r.clone(), s.clone())))
        .collect();
    let found: Vec<Option<HitRecord>> = points
        .par_iter()
        .map(|(r, s)| -> Result<Option<HitRecord>> {
            let member = quad_n23_surface(r, s)?;
            let (gamma, m) = (member.values["gamma"].clone(), member.values["m"].clone());
            if !third_iter_condition2(&gamma, &m) {
                return Ok(None);
            }
            let w = newly_reducible_via(&member.f, 3, Route::Criteria)?.ok_or_else(|| {
                Error::StructureViolation(format!("surface point ({r}, {s}) passes the criterion but f^3 is irreducible"))
            })?;
            let (a, b) = (member.values["a"].clone(), member.values["b"].clone());
            let mut hit = HitRecord::new(a, b, &w, Provenance::Surface { r: r.clone(), s: s.clone() });
            hit.in_box = reference.map(|bx| bx.contains(&hit.a, &hit.b));
            Ok(Some(hit))
        })
        .collect::<Result<_>>()?;
    let mut seen = BTreeSet::new();
    let mut hits: Vec<HitRecord> = found.into_iter().flatten().filter(|h| seen.insert(h.key())).collect();
    hits.sort_by_key(HitRecord::key);
    Ok(hits)
}

pub fn write_jsonl(hits: &[HitRecord], path: &Path) -> Result<()> {
    let mut out = String::new();
    for h in hits {
        out.push_str(&serde_json::to_string(h)?);
        out.push('\n');
    }
    fs::write(path, out)?;
    Ok(())
}

pub fn write_csv(hits: &[HitRecord], path: &Path) -> Result<()> {
    let mut out = String::from(HIT_CSV_HEADER);
    out.push('\n');
    for h in hits {
        out.push_str(&h.csv_row());
        out.push('\n');
    }
    fs::write(path, out)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factor::Factorize;

    fn pairs(hits: &[HitRecord]) -> Vec<(i64, i64)> {
        hits.iter()
            .map(|h| (h.a.to_integer().try_into().unwrap(), h.b.to_integer().try_into().unwrap()))
            .collect()
    }

    /// Brute-force oracle: direct factorization of every iterate.
    fn oracle(sb: &SearchBox) -> Vec<(i64, i64)> {
        let mut out = Vec::new();
        for a in sb.a_min..=sb.a_max {
            for b in sb.b_min..=sb.b_max {
                let f = Poly::from_ints(RationalField, &[b, a, 1]);
                let irr = |k: u32| RationalField.factor(&f.iterate(k)).unwrap().is_irreducible();
                if (1..sb.n).all(irr) && !irr(sb.n) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    #[test]
    fn small_box_matches_oracle() {
        let sb = SearchBox::symmetric(2, 2, 2).unwrap();
        let out = box_search(&sb, &SearchOptions::default()).unwrap();
        assert_eq!(pairs(&out.hits), oracle(&sb));
        assert!(out.summary.complete);
        assert_eq!(out.summary.candidates, 25);
    }

    #[test]
    fn golden_ratio_in_small_box() {
        let sb = SearchBox::symmetric(5, 5, 3).unwrap();
        let out = box_search(&sb, &SearchOptions::default()).unwrap();
        assert!(pairs(&out.hits).contains(&(-1, -1)));
        assert_eq!(pairs(&out.hits), oracle(&sb));
        assert!(out.hits.iter().all(|h| h.revalidate().unwrap()));
    }

    #[test]
    fn fourth_iterates_match_oracle() {
        let sb = SearchBox::symmetric(2, 3, 4).unwrap();
        let out = box_search(&sb, &SearchOptions::default()).unwrap();
        assert_eq!(pairs(&out.hits), oracle(&sb));
    }

    #[test]
    fn routes_agree_on_third_iterates() {
        let sb = SearchBox::symmetric(4, 30, 3).unwrap();
        let fast = box_search(&sb, &SearchOptions::default()).unwrap();
        let slow = box_search(&sb, &SearchOptions { route: Route::FactorOnly, ..Default::default() }).unwrap();
        assert_eq!(fast.hits, slow.hits);
        assert!(fast.summary.sieve_rejected > 0);
    }

    proptest::proptest! {
        #[test]
        fn proven_iterates_are_irreducible(a in -40i64..40, b in -400i64..400) {
            let f = Poly::from_ints(RationalField, &[b, a, 1]);
            let nf = QuadNormalForm::from_monic(&rat_int(a), &rat_int(b));
            let irr = |k: u32| RationalField.factor(&f.iterate(k)).unwrap().is_irreducible();
            if irr(2) && iterate_proven_irreducible(a, b, &nf.gamma, 3) {
                proptest::prop_assert!(irr(3));
            }
        }
    }

    #[test]
    fn chunk_and_worker_invariance() {
        let sb = SearchBox::symmetric(6, 12, 2).unwrap();
        let base = box_search(&sb, &SearchOptions { workers: Some(1), chunk: 13, ..Default::default() }).unwrap();
        for (workers, chunk) in [(4, 1), (2, 5)] {
            let other =
                box_search(&sb, &SearchOptions { workers: Some(workers), chunk, ..Default::default() }).unwrap();
            assert_eq!(other.hits, base.hits);
        }
    }

    #[test]
    fn interrupted_run_resumes_to_same_hits() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("ck.json");
        let sb = SearchBox::symmetric(5, 8, 3).unwrap();
        let full = box_search(&sb, &SearchOptions { chunk: 2, ..Default::default() }).unwrap();
        let opts = SearchOptions { chunk: 2, checkpoint: Some(path.clone()), ..Default::default() };
        let half = box_search(&sb, &SearchOptions { stop_after: Some(3), ..opts.clone() }).unwrap();
        assert!(!half.summary.complete);
        let ck = Checkpoint::load(&path).unwrap();
        assert_eq!(ck.completed.len(), 3);
        let rest = resume(ck, &opts).unwrap();
        assert!(rest.summary.complete);
        assert_eq!(rest.hits, full.hits);
        let again = box_search(&sb, &opts).unwrap();
        assert_eq!(again.hits, full.hits);
        assert_eq!(again.summary.candidates, 0);
    }

    #[test]
    fn corrupt_checkpoints_are_refused() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("ck.json");
        let sb = SearchBox::symmetric(3, 3, 2).unwrap();
        let opts = SearchOptions { chunk: 1, checkpoint: Some(path.clone()), stop_after: Some(2), ..Default::default() };
        box_search(&sb, &opts).unwrap();
        let mut ck = Checkpoint::load(&path).unwrap();
        ck.completed.push(5);
        assert!(matches!(resume(ck.clone(), &opts), Err(Error::Checkpoint(_))));
        let text = fs::read_to_string(&path).unwrap().replacen("\"chunk\": 1", "\"chunk\": 2", 1);
        fs::write(&path, text).unwrap();
        assert!(matches!(box_search(&sb, &opts), Err(Error::Checkpoint(_))));
        fs::write(&path, "{").unwrap();
        assert!(matches!(Checkpoint::load(&path), Err(Error::Checkpoint(_))));
        let other = SearchBox::symmetric(3, 4, 2).unwrap();
        let mut fresh = Checkpoint::empty(sb, 1);
        fresh.save(&path).unwrap();
        assert!(matches!(box_search(&other, &opts), Err(Error::Checkpoint(_))));
    }

    #[test]
    fn empty_checkpoint_runs_everything() {
        let sb = SearchBox::symmetric(2, 2, 2).unwrap();
        let out = resume(Checkpoint::empty(sb, 2), &SearchOptions::default()).unwrap();
        assert_eq!(pairs(&out.hits), oracle(&sb));
    }

    #[test]
    fn oversized_boxes_need_override() {
        let sb = SearchBox::symmetric(100_000, 1_000_000_000, 3).unwrap();
        assert!(matches!(box_search(&sb, &SearchOptions::default()), Err(Error::ScaleCap(_))));
        assert!(SearchBox::new(1, 0, 0, 0, 3).is_err());
        assert!(SearchBox::new(0, 0, 0, 0, 5).is_err());
    }

    #[test]
    fn surface_height_one_has_golden_ratio() {
        let hits = surface_search(1, Some(&SearchBox::symmetric(5, 5, 3).unwrap())).unwrap();
        let golden = hits.iter().find(|h| h.a == rat_int(-1) && h.b == rat_int(-1)).unwrap();
        assert_eq!(golden.in_box, Some(true));
        assert!(hits.iter().all(|h| h.revalidate().unwrap()));
    }

    #[test]
    fn rationals_by_height() {
        let qs = rationals_of_height(2);
        assert_eq!(qs.len(), 7);
        assert_eq!(qs[0], rat_int(-1));
    }

    #[test]
    fn hit_serialization() {
        let sb = SearchBox::symmetric(1, 1, 3).unwrap();
        let hits = box_search(&sb, &SearchOptions::default()).unwrap().hits;
        let dir = tempfile::tempdir().unwrap();
        write_jsonl(&hits, &dir.path().join("h.jsonl")).unwrap();
        write_csv(&hits, &dir.path().join("h.csv")).unwrap();
        let csv = fs::read_to_string(dir.path().join("h.csv")).unwrap();
        assert!(csv.contains("-1,-1,1/2,-7/4,3,4 4,brute"));
        let line = fs::read_to_string(dir.path().join("h.jsonl")).unwrap();
        let back: HitRecord = serde_json::from_str(line.lines().next().unwrap()).unwrap();
        assert_eq!(back, hits[0]);
    }
}
