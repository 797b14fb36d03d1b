//! Replayable checks of the main results: each claim recomputes its
//! statement from scratch, with full factorization as the oracle wherever
//! a fast criterion is involved, and reports PASS/FAIL with its runtime
//! against a fixed budget.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arith::{rat, rat_int, rational_is_square, Integer, Rational};
use crate::criteria::{
    deglem_check, newly_reducible, newly_reducible_via, symmetric_split_from, third_iter_condition2,
    xdc_irreducible, NewlyReducibleWitness, Route,
};
use crate::error::{Error, Result};
use crate::factor::Factorize;
use crate::families::{
    cubic_family, highdeg_family, quad_m_minus1_guarded, quad_n22, quad_n23_surface, quad_newfamily, quartic_t,
    verify_member, verify_member_via, FamilyMember,
};
use crate::ffexplore::{classify_membership, verify_ahmadi};
use crate::field::{ExtensionField, RationalField};
use crate::parse::parse_poly_in;
use crate::poly::Poly;
use crate::search::{box_search, SearchBox, SearchOptions};

type QPoly = Poly<RationalField>;

pub const CLAIM_IDS: std::ops::RangeInclusive<u8> = 1..=12;

/// Seed of the random surface points.
pub const SURFACE_SEED: u64 = 0x6e65_7772_6564;
pub const SURFACE_POINTS: usize = 100;
pub const SURFACE_HEIGHT: i64 = 20;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClaimResult {
    pub id: u8,
    pub title: String,
    pub pass: bool,
    pub detail: String,
    pub elapsed_ms: u64,
    pub limit_ms: Option<u64>,
}

/// Every witness a claim produced, kept for the structure checks.
enum Pooled {
    Rational(QPoly, NewlyReducibleWitness<RationalField>),
    Finite(Poly<ExtensionField>, NewlyReducibleWitness<ExtensionField>),
}

#[derive(Default)]
struct Ledger {
    witnesses: Vec<(u8, Pooled)>,
    /// Structure violations raised while a claim ran.
    violations: Vec<String>,
}

/// A claim's verdict: failures are collected as messages.
#[derive(Default)]
struct Check {
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Check {
    fn require(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.failures.push(what());
        }
    }

    fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    fn summary(&self) -> String {
        let mut out = String::new();
        if self.failures.is_empty() {
            out.push_str("all checks hold");
        } else {
            let _ = write!(out, "{} failure(s): {}", self.failures.len(), self.failures.join("; "));
        }
        for n in &self.notes {
            let _ = write!(out, "; {n}");
        }
        out
    }
}

struct ClaimDef {
    id: u8,
    title: &'static str,
    limit: Option<Duration>,
    run: fn(&mut Check, &mut Ledger) -> Result<()>,
}

const fn secs(s: u64) -> Option<Duration> {
    Some(Duration::from_secs(s))
}

const CLAIMS: [ClaimDef; 11] = [
    ClaimDef { id: 1, title: "golden-ratio chain x^2-x-1", limit: secs(1), run: golden_chain },
    ClaimDef { id: 2, title: "n22 family, a in -10..10", limit: secs(1), run: n22_family },
    ClaimDef { id: 3, title: "h(x)h(-x) identity on 100 surface points", limit: secs(10), run: surface_identity },
    ClaimDef { id: 4, title: "third-iterate characterization on 100 surface points", limit: secs(60), run: characterization },
    ClaimDef { id: 5, title: "m = -1 guarded family, t = 25r, r in 1..20", limit: secs(60), run: m_minus1_guarded },
    ClaimDef { id: 6, title: "newfamily, k in {2,4,5,7,8,10}", limit: secs(30), run: newfamily },
    ClaimDef { id: 7, title: "cubic families, t in 1..10", limit: secs(60), run: cubic_families },
    ClaimDef { id: 8, title: "quartic family, t in 1..5", limit: secs(120), run: quartic_family },
    ClaimDef { id: 9, title: "degree d = 2 mod 4 family, d in {6,10}, k in {1,2,3}", limit: secs(5), run: highdeg },
    ClaimDef { id: 10, title: "finite-field memberships and third iterates in characteristic 2", limit: secs(120), run: finite_fields },
    ClaimDef { id: 11, title: "desk-scale box search |a|<=50, |b|<=2000, n=3", limit: secs(600), run: desk_search },
];

const STRUCTURE_TITLE: &str = "every witness passes deglem and the symmetric split";

fn q(s: &str) -> QPoly {
    parse_poly_in(&RationalField, s).expect("literal polynomial")
}

fn record_error(ledger: &mut Ledger, id: u8, e: &Error) {
    if matches!(e, Error::StructureViolation(_)) {
        ledger.violations.push(format!("claim {id}: {e}"));
    }
}

fn run_claim(def: &ClaimDef, ledger: &mut Ledger) -> ClaimResult {
    let start = Instant::now();
    let mut check = Check::default();
    if let Err(e) = (def.run)(&mut check, ledger) {
        record_error(ledger, def.id, &e);
        check.failures.push(format!("error: {e}"));
    }
    let elapsed = start.elapsed();
    if let Some(limit) = def.limit {
        check.require(elapsed <= limit, || format!("took {} ms, budget {} ms", elapsed.as_millis(), limit.as_millis()));
    }
    ClaimResult {
        id: def.id,
        title: def.title.into(),
        pass: check.failures.is_empty(),
        detail: check.summary(),
        elapsed_ms: elapsed.as_millis() as u64,
        limit_ms: def.limit.map(|l| l.as_millis() as u64),
    }
}

fn structure(ledger: &Ledger) -> ClaimResult {
    let start = Instant::now();
    let mut check = Check::default();
    let mut quadratics = 0;
    for (id, pooled) in &ledger.witnesses {
        // split: None for non-quadratics, Some(error) on a violation
        let (deglem, split, deg) = match pooled {
            Pooled::Rational(f, w) => {
                (deglem_check(w, f.deg()), (f.deg() == 2).then(|| symmetric_split_from(f, w).err()), f.deg())
            }
            Pooled::Finite(f, w) => {
                (deglem_check(w, f.deg()), (f.deg() == 2).then(|| symmetric_split_from(f, w).err()), f.deg())
            }
        };
        check.require(deglem, || format!("claim {id}: deglem fails for a degree-{deg} witness"));
        if let Some(split) = split {
            quadratics += 1;
            if let Some(e) = split {
                check.failures.push(format!("claim {id}: {e}"));
            }
        }
    }
    for v in &ledger.violations {
        check.failures.push(v.clone());
    }
    check.require(!ledger.witnesses.is_empty(), || "no witnesses collected".into());
    check.note(format!("{} witnesses, {quadratics} quadratic", ledger.witnesses.len()));
    ClaimResult {
        id: 12,
        title: STRUCTURE_TITLE.into(),
        pass: check.failures.is_empty(),
        detail: check.summary(),
        elapsed_ms: start.elapsed().as_millis() as u64,
        limit_ms: None,
    }
}

/// Runs the requested claims in order. The structure claim inspects the
/// witnesses of every other claim, so requesting it runs all of them.
pub fn run_claims(ids: &[u8]) -> Result<Vec<ClaimResult>> {
    if let Some(bad) = ids.iter().find(|id| !CLAIM_IDS.contains(id)) {
        return Err(Error::Precondition(format!("no claim {bad}; claims are numbered 1..=12")));
    }
    let want_structure = ids.contains(&12);
    let mut ledger = Ledger::default();
    let mut out = Vec::new();
    for def in &CLAIMS {
        if want_structure || ids.contains(&def.id) {
            let r = run_claim(def, &mut ledger);
            if ids.contains(&def.id) {
                out.push(r);
            }
        }
    }
    if want_structure {
        out.push(structure(&ledger));
    }
    Ok(out)
}

pub fn run_all() -> Vec<ClaimResult> {
    run_claims(&CLAIM_IDS.collect::<Vec<_>>()).expect("valid ids")
}

fn pool(ledger: &mut Ledger, id: u8, f: &QPoly, w: &NewlyReducibleWitness<RationalField>) {
    ledger.witnesses.push((id, Pooled::Rational(f.clone(), w.clone())));
}

fn pool_member(ledger: &mut Ledger, id: u8, m: &FamilyMember, w: &Option<NewlyReducibleWitness<RationalField>>) {
    if let Some(w) = w {
        pool(ledger, id, &m.f, w);
    }
}

fn golden_chain(c: &mut Check, ledger: &mut Ledger) -> Result<()> {
    let f = q("x^2-x-1");
    c.require(RationalField.factor(&f)?.is_irreducible(), || "f reducible".into());
    c.require(RationalField.factor(&f.iterate(2))?.is_irreducible(), || "f^2 reducible".into());
    let w = newly_reducible(&f, 3)?.ok_or_else(|| Error::StructureViolation("f^3 not newly reducible".into()))?;
    let mut want = vec![q("x^4-3x^3+4x-1"), q("x^4-x^3-3x^2+x+1")];
    want.sort();
    let got: Vec<QPoly> = w.factors.factors.iter().map(|(p, _)| p.clone()).collect();
    c.require(w.factors.unit.is_one() && w.factors.factors.iter().all(|(_, e)| *e == 1) && got == want, || {
        format!("f^3 factors as {:?}", got.iter().map(|p| p.to_string()).collect::<Vec<_>>())
    });
    c.require(newly_reducible(&f, 2)?.is_none(), || "f^2 reported newly reducible".into());
    pool(ledger, 1, &f, &w);
    Ok(())
}

fn n22_family(c: &mut Check, ledger: &mut Ledger) -> Result<()> {
    let (mut newly, mut trivial) = (0, 0);
    for a in -10..=10 {
        let m = quad_n22(&rat_int(a));
        if rational_is_square(&rat_int(1 - a)).is_none() {
            let v = verify_member(&m)?;
            c.require(v.newly_reducible && v.factors_match == Some(true), || format!("a = {a}: {v:?}"));
            pool_member(ledger, 2, &m, &v.witness);
            newly += 1;
        } else {
            c.require(!RationalField.factor(&m.f)?.is_irreducible(), || format!("a = {a}: f irreducible"));
            trivial += 1;
        }
    }
    c.note(format!("{newly} split into the two quadratics, {trivial} with f reducible"));
    Ok(())
}

/// Rationals of height at most `SURFACE_HEIGHT`, nonzero when asked.
fn random_rational(rng: &mut ChaCha8Rng, nonzero: bool) -> Rational {
    loop {
        let n = rng.gen_range(-SURFACE_HEIGHT..=SURFACE_HEIGHT);
        let d = rng.gen_range(1..=SURFACE_HEIGHT);
        if !(nonzero && n == 0) {
            return rat(n, d);
        }
    }
}

/// The fixed pseudo-random sample of surface parameters `(r, s)`.
pub fn surface_sample() -> Vec<(Rational, Rational)> {
    let mut rng = ChaCha8Rng::seed_from_u64(SURFACE_SEED);
    (0..SURFACE_POINTS)
        .map(|_| {
            let r = random_rational(&mut rng, true);
            (r, random_rational(&mut rng, false))
        })
        .collect()
}

fn surface_identity(c: &mut Check, _: &mut Ledger) -> Result<()> {
    for (r, s) in surface_sample() {
        let m = quad_n23_surface(&r, &s)?;
        let h = &m.polys["h"];
        let lhs = h * &h.reflect();
        let scale = &r * &r * rat_int(64);
        let rhs = m.f.iterate(3).shift(m.value("gamma")).scale(&(&scale * &scale));
        c.require(lhs == rhs, || format!("(r, s) = ({r}, {s})"));
    }
    Ok(())
}

fn characterization(c: &mut Check, ledger: &mut Ledger) -> Result<()> {
    let mut newly = 0;
    for (r, s) in surface_sample() {
        let m = quad_n23_surface(&r, &s)?;
        let (gamma, mm) = (m.value("gamma"), m.value("m"));
        let fast = newly_reducible(&m.f, 3)?;
        let oracle = newly_reducible_via(&m.f, 3, Route::FactorOnly)?;
        let cond = third_iter_condition2(gamma, mm);
        // condition (2) through factorization: f and f^2 irreducible
        let cond_oracle = RationalField.factor(&m.f)?.is_irreducible()
            && RationalField.factor(&m.f.iterate(2))?.is_irreducible();
        let verdicts = [fast.is_some(), oracle.is_some(), cond, cond_oracle];
        c.require(verdicts.iter().all(|&v| v == cond), || format!("(r, s) = ({r}, {s}): {verdicts:?}"));
        c.require(fast.as_ref().map(|w| &w.factors) == oracle.as_ref().map(|w| &w.factors), || {
            format!("(r, s) = ({r}, {s}): routes disagree on the factors")
        });
        if let Some(w) = &oracle {
            newly += 1;
            pool(ledger, 4, &m.f, w);
        }
    }
    c.note(format!("{newly} of {SURFACE_POINTS} newly reducible"));
    Ok(())
}

fn m_minus1_guarded(c: &mut Check, ledger: &mut Ledger) -> Result<()> {
    for r in 1..=20 {
        let m = quad_m_minus1_guarded(&rat_int(r))?;
        c.require(m.side_condition("v_5(gamma) is odd") == Some(true), || format!("r = {r}: v_5(gamma) even"));
        let v = verify_member_via(&m, Route::FactorOnly)?;
        c.require(m.predicted.newly_reducible && v.newly_reducible && v.ok(), || format!("r = {r}: {v:?}"));
        pool_member(ledger, 5, &m, &v.witness);
    }
    Ok(())
}

/// The exact identities behind the family's nonsquare argument.
const CERTIFICATE: [&str; 3] = ["-m-gamma = -4k^6(k^2-2)^3", "m^2+m+gamma = (k^2-1)^2 Q(k)", "Q(k) == 2 mod 3"];

fn newfamily(c: &mut Check, ledger: &mut Ledger) -> Result<()> {
    for k in [2i64, 4, 5, 7, 8, 10] {
        let m = quad_newfamily(&Integer::from(k))?;
        let v = verify_member_via(&m, Route::FactorOnly)?;
        c.require(v.newly_reducible && v.ok(), || format!("k = {k}: not newly reducible"));
        pool_member(ledger, 6, &m, &v.witness);
        for cond in ["-m-gamma < 0", "m^2+m+gamma == 2 mod 3"] {
            c.require(m.side_condition(cond) == Some(true), || {
                format!("k = {k}: {cond} fails (m^2+m+gamma = {})", m.value("m2_plus_m_plus_gamma"))
            });
        }
        for cond in CERTIFICATE {
            c.require(m.side_condition(cond) == Some(true), || format!("k = {k}: {cond} fails"));
        }
    }
    c.note(format!("checked alongside: {}", CERTIFICATE.join(", ")));
    Ok(())
}

fn cubic_families(c: &mut Check, ledger: &mut Ledger) -> Result<()> {
    for variant in [1u8, 2] {
        for t in 1..=10 {
            let m = cubic_family(variant, &rat_int(t))?;
            let label = format!("variant {variant}, t = {t}");
            c.require(xdc_irreducible(m.value("c"), 3)?, || format!("{label}: f reducible by the x^3 - c criterion"));
            let v = verify_member_via(&m, Route::FactorOnly)?;
            let pattern = v.witness.as_ref().map(|w| w.factors.degree_pattern());
            c.require(v.ok() && pattern == Some(vec![3, 6]), || format!("{label}: pattern {pattern:?}"));
            pool_member(ledger, 7, &m, &v.witness);
            if variant == 1 {
                let t9 = rat_int(93312 * t.pow(9));
                let closed = Poly::x(RationalField).shift(&(&t9 + rat_int(36 * t.pow(3)))).pow(3).add_const(&-t9);
                c.require(closed == m.f, || format!("{label}: f = {} differs from the closed form", m.f));
            }
        }
    }
    Ok(())
}

fn quartic_family(c: &mut Check, ledger: &mut Ledger) -> Result<()> {
    for t in 1..=5 {
        let m = quartic_t(&rat_int(t))?;
        c.require(m.side_condition("f = (x+192t^8-7t^2)^4-192t^8") == Some(true), || format!("t = {t}: closed form"));
        let p = &m.polys["p"];
        let sq = Poly::x(RationalField).pow(2);
        let rhs = &p.compose(&sq)? * &p.compose(&-&sq)?;
        c.require(m.f.iterate(2).shift(m.value("gamma")) == rhs, || format!("t = {t}: f^2(x+gamma) != p(x^2)p(-x^2)"));
        c.require(m.predicted.newly_reducible, || format!("t = {t}: f reducible by the x^4 - c criterion"));
        if t <= 2 {
            let v = verify_member_via(&m, Route::FactorOnly)?;
            c.require(v.newly_reducible && v.ok(), || format!("t = {t}: full factorization disagrees"));
            pool_member(ledger, 8, &m, &v.witness);
        }
    }
    Ok(())
}

fn highdeg(c: &mut Check, ledger: &mut Ledger) -> Result<()> {
    for d in [6usize, 10] {
        for k in 1..=3 {
            let m = highdeg_family(d, &rat_int(k))?;
            let f_irr = xdc_irreducible(m.value("c"), d)?;
            let f2_red = !xdc_irreducible(m.value("c"), d * d)?;
            c.require(f_irr, || format!("(d, k) = ({d}, {k}): f reducible, -4k^4 = {}", m.value("c")));
            c.require(f2_red, || format!("(d, k) = ({d}, {k}): f^2 irreducible"));
            if f_irr {
                let w = newly_reducible(&m.f, 2)?;
                c.require(w.as_ref().is_some_and(|w| !w.complete && w.factors.factors.len() == 2), || {
                    format!("(d, k) = ({d}, {k}): no criterion split of f^2")
                });
                pool_member(ledger, 9, &m, &w);
            }
        }
    }
    Ok(())
}

fn finite_fields(c: &mut Check, ledger: &mut Ledger) -> Result<()> {
    let mut membership = |q: u64, n: u32, want: bool, c: &mut Check| -> Result<()> {
        let m = classify_membership(q, 2, n)?;
        c.require(m.member == want, || format!("F_{q} in N(2,{n}) is {}, expected {want}", m.member));
        let k = ExtensionField::with_order(q)?;
        for fw in &m.witnesses {
            let f = Poly::new(k.clone(), fw.coeffs.clone());
            let w = newly_reducible(&f, n)?
                .ok_or_else(|| Error::StructureViolation(format!("F_{q} witness {f} does not revalidate")))?;
            ledger.witnesses.push((10, Pooled::Finite(f, w)));
        }
        Ok(())
    };
    membership(2, 2, false, c)?;
    for q in [4, 8, 16] {
        membership(q, 2, true, c)?;
    }
    for q in [2, 4, 8] {
        membership(q, 3, true, c)?;
    }
    for q in [2, 4] {
        for n in [4, 5] {
            membership(q, n, false, c)?;
        }
    }
    for q in [2u64, 4, 8, 16] {
        let r = verify_ahmadi(q, false)?;
        c.require(r.holds, || format!("F_{q}: third iterates {:?} irreducible", r.exceptions));
    }
    Ok(())
}

/// Newly reducible third iterates in the box, by full factorization only.
fn factor_only_hits(bound: i64) -> Result<Vec<(i64, i64)>> {
    let mut out = Vec::new();
    for a in -bound..=bound {
        for b in -bound..=bound {
            let f = Poly::from_ints(RationalField, &[b, a, 1]);
            if newly_reducible_via(&f, 3, Route::FactorOnly)?.is_some() {
                out.push((a, b));
            }
        }
    }
    Ok(out)
}

fn desk_search(c: &mut Check, ledger: &mut Ledger) -> Result<()> {
    let sb = SearchBox::symmetric(50, 2000, 3)?;
    let one = box_search(&sb, &SearchOptions { workers: Some(1), ..Default::default() })?;
    let four = box_search(&sb, &SearchOptions { workers: Some(4), ..Default::default() })?;
    c.require(one.summary.complete && four.summary.complete, || "search incomplete".into());
    c.require(one.hits == four.hits, || "hits depend on the worker count".into());
    let pairs: Vec<(i64, i64)> = one
        .hits
        .iter()
        .map(|h| (i64::try_from(h.a.to_integer()).unwrap_or(i64::MAX), i64::try_from(h.b.to_integer()).unwrap_or(i64::MAX)))
        .collect();
    c.require(pairs.contains(&(-1, -1)), || "(-1, -1) missing".into());
    let sub: Vec<(i64, i64)> = pairs.iter().copied().filter(|(a, b)| a.abs() <= 20 && b.abs() <= 20).collect();
    let oracle = factor_only_hits(20)?;
    c.require(sub == oracle, || format!("sub-box hits {sub:?}, oracle {oracle:?}"));
    for h in &one.hits {
        c.require(h.revalidate()?, || format!("hit ({}, {}) does not revalidate", h.a, h.b));
        let f = h.poly();
        let w = NewlyReducibleWitness::from_wire(&RationalField, &h.witness)?;
        pool(ledger, 11, &f, &w);
    }
    c.note(format!("{} hits in {} candidates", one.hits.len(), one.summary.candidates));
    Ok(())
}
