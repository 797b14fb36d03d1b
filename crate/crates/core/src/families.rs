//! Explicit families of polynomials with newly reducible iterates. Each
//! generator returns the polynomial together with the predicted outcome,
//! the displayed factors where they are known in closed form, and the
//! truth values of the hypotheses the prediction rests on.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{
    eval_monomials, format_rational, inv_mod_i64, is_nth_power, is_prime_u64, padic_valuation, prime_divisors,
    rat_int, rational_is_square, Integer, Rational, Valuation,
};
use crate::criteria::{
    deglem_check, newly_reducible_via, second_iter_symmetric, symmetric_split_from, xdc_irreducible,
    NewlyReducibleWitness, QuadNormalForm, Route, WitnessJson,
};
use crate::error::{Error, Result};
use crate::field::RationalField;
use crate::poly::Poly;

type QPoly = Poly<RationalField>;

fn qpoly(coeffs: Vec<Rational>) -> QPoly {
    Poly::new(RationalField, coeffs)
}

fn pw(q: &Rational, e: usize) -> Rational {
    num_traits::pow(q.clone(), e)
}

/// `(x - center)^d + shift`.
fn shifted_power(center: &Rational, d: u32, shift: &Rational) -> QPoly {
    Poly::x(RationalField).shift(&-center).pow(d).add_const(shift)
}

fn not_square(q: &Rational) -> bool {
    rational_is_square(q).is_none()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SideCondition {
    pub name: String,
    pub holds: bool,
}

impl SideCondition {
    fn new(name: impl Into<String>, holds: bool) -> Self {
        SideCondition { name: name.into(), holds }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Prediction {
    pub n: u32,
    pub newly_reducible: bool,
    /// Degrees of the irreducible factors of `f^n`, when known.
    pub degree_pattern: Option<Vec<usize>>,
    /// Monic polynomials whose product is `f^n` divided by its leading
    /// coefficient; empty when no closed form is known.
    pub factors: Vec<QPoly>,
    /// Whether `factors` is the irreducible factorization.
    pub factors_irreducible: bool,
    pub side_conditions: Vec<SideCondition>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyMember {
    pub name: String,
    pub params: Vec<Rational>,
    pub f: QPoly,
    pub predicted: Prediction,
    /// Named parameters of the construction (gamma, m, ...).
    pub values: BTreeMap<String, Rational>,
    /// Named auxiliary polynomials (the explicit `h`, `p`, ...).
    pub polys: BTreeMap<String, QPoly>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyJson {
    pub text: String,
    pub coeffs: Vec<String>,
}

impl From<&QPoly> for PolyJson {
    fn from(p: &QPoly) -> Self {
        PolyJson { text: p.to_string(), coeffs: p.to_json() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PredictionJson {
    pub n: u32,
    pub newly_reducible: bool,
    pub degree_pattern: Option<Vec<usize>>,
    pub factors: Vec<PolyJson>,
    pub factors_irreducible: bool,
    pub side_conditions: Vec<SideCondition>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyMemberJson {
    pub name: String,
    pub params: Vec<String>,
    pub f: PolyJson,
    pub predicted: PredictionJson,
    pub values: BTreeMap<String, String>,
    pub polys: BTreeMap<String, PolyJson>,
}

impl FamilyMember {
    pub fn to_wire(&self) -> FamilyMemberJson {
        let p = &self.predicted;
        FamilyMemberJson {
            name: self.name.clone(),
            params: self.params.iter().map(format_rational).collect(),
            f: (&self.f).into(),
            predicted: PredictionJson {
                n: p.n,
                newly_reducible: p.newly_reducible,
                degree_pattern: p.degree_pattern.clone(),
                factors: p.factors.iter().map(PolyJson::from).collect(),
                factors_irreducible: p.factors_irreducible,
                side_conditions: p.side_conditions.clone(),
            },
            values: self.values.iter().map(|(k, v)| (k.clone(), format_rational(v))).collect(),
            polys: self.polys.iter().map(|(k, v)| (k.clone(), v.into())).collect(),
        }
    }

    pub fn value(&self, key: &str) -> &Rational {
        &self.values[key]
    }

    pub fn side_condition(&self, name: &str) -> Option<bool> {
        self.predicted
            .side_conditions
            .iter()
            .find(|c| c.name == name)
            .map(|c| c.holds)
    }
}

fn quad_values(nf: &QuadNormalForm) -> BTreeMap<String, Rational> {
    let (a, b) = nf.monic_coeffs();
    BTreeMap::from([
        ("gamma".into(), nf.gamma.clone()),
        ("m".into(), nf.m.clone()),
        ("a".into(), a),
        ("b".into(), b),
    ])
}

/// `f = (x - (3a - 2))^2 + 4a - 4`, whose second iterate is always the
/// product of two quadratics; newly reducible exactly when `1 - a` is not
/// a square.
pub fn quad_n22(a: &Rational) -> FamilyMember {
    let nf = QuadNormalForm::new(a * rat_int(3) - rat_int(2), a - rat_int(2));
    let a2 = a * a;
    let q1 = qpoly(vec![&a2 * rat_int(9) - a * rat_int(5), a * rat_int(-6) + rat_int(2), rat_int(1)]);
    let q2 = qpoly(vec![
        &a2 * rat_int(9) - a * rat_int(17) + rat_int(8),
        a * rat_int(-6) + rat_int(6),
        rat_int(1),
    ]);
    let nonsquare = not_square(&(rat_int(1) - a));
    FamilyMember {
        name: "quad_n22".into(),
        params: vec![a.clone()],
        f: nf.poly(),
        predicted: Prediction {
            n: 2,
            newly_reducible: nonsquare,
            degree_pattern: nonsquare.then(|| vec![2, 2]),
            factors: vec![q1, q2],
            factors_irreducible: nonsquare,
            side_conditions: vec![SideCondition::new("1-a is not a square", nonsquare)],
        },
        values: quad_values(&nf),
        polys: BTreeMap::new(),
    }
}

const N23_GAMMA_NUM: &[(i64, &[u32])] = &[
    (-2, &[5, 2]),
    (9, &[4, 4]),
    (-4, &[4, 2]),
    (-16, &[3, 6]),
    (32, &[3, 4]),
    (16, &[3, 2]),
    (32, &[3, 0]),
    (14, &[2, 8]),
    (-64, &[2, 6]),
    (-8, &[2, 4]),
    (96, &[2, 2]),
    (128, &[2, 0]),
    (-6, &[1, 10]),
    (48, &[1, 8]),
    (-64, &[1, 6]),
    (-160, &[1, 4]),
    (96, &[1, 2]),
    (128, &[1, 0]),
    (1, &[0, 12]),
    (-12, &[0, 10]),
    (40, &[0, 8]),
    (-112, &[0, 4]),
    (-64, &[0, 2]),
];

const N23_M_NUM: &[(i64, &[u32])] = &[(-1, &[2, 0]), (-2, &[1, 2]), (-4, &[1, 0]), (1, &[0, 4]), (-4, &[0, 2]), (-4, &[0, 0])];

const N23_H: [&[(i64, &[u32])]; 5] = [
    &[
        (1, &[4, 0]),
        (-12, &[3, 2]),
        (10, &[2, 4]),
        (-24, &[2, 2]),
        (-8, &[2, 0]),
        (-4, &[1, 6]),
        (16, &[1, 4]),
        (16, &[1, 2]),
        (1, &[0, 8]),
        (-8, &[0, 6]),
        (8, &[0, 4]),
        (32, &[0, 2]),
        (16, &[0, 0]),
    ],
    &[(24, &[3, 1]), (64, &[2, 1]), (-8, &[1, 5]), (32, &[1, 3]), (32, &[1, 1])],
    &[(-16, &[3, 0]), (-64, &[2, 0]), (16, &[1, 4]), (-64, &[1, 2]), (-64, &[1, 0])],
    &[(-64, &[2, 1])],
    &[(64, &[2, 0])],
];

/// Square-class representative of `m^2 + m + gamma` on the surface.
const N23_OCTIC: &[(i64, &[u32])] = &[
    (-2, &[3, 2]),
    (5, &[2, 4]),
    (4, &[2, 2]),
    (4, &[2, 0]),
    (-4, &[1, 6]),
    (12, &[1, 4]),
    (32, &[1, 2]),
    (16, &[1, 0]),
    (1, &[0, 8]),
    (-8, &[0, 6]),
    (8, &[0, 4]),
    (32, &[0, 2]),
    (16, &[0, 0]),
];

/// Monic factors `h(+-(x - gamma)) / (64 r^2)` of `f^3` from the explicit
/// quartic `h` with `h(x) h(-x) = (64 r^2)^2 f^3(x + gamma)`.
fn n23_factors(h: &QPoly, gamma: &Rational) -> Vec<QPoly> {
    let mut out = vec![h.shift(&-gamma).monic(), h.reflect().shift(&-gamma).monic()];
    out.sort();
    out
}

/// The two-parameter family whose third iterate is symmetrically
/// reducible; newly reducible exactly when `-m - gamma` is not a square
/// and the second iterate is not symmetrically reducible.
pub fn quad_n23_surface(r: &Rational, s: &Rational) -> Result<FamilyMember> {
    if r.is_zero() {
        return Err(Error::Domain("r must be nonzero".into()));
    }
    let vars = [r, s];
    let r2 = r * r;
    let m = eval_monomials(&vars, N23_M_NUM) / (r * rat_int(8));
    let gamma = eval_monomials(&vars, N23_GAMMA_NUM) / (&r2 * rat_int(256));
    let h = qpoly(N23_H.iter().map(|t| eval_monomials(&vars, t)).collect());
    let nf = QuadNormalForm::new(gamma.clone(), m.clone());
    let linear = r * rat_int(2) - s * s + rat_int(4);
    let octic = eval_monomials(&vars, N23_OCTIC);
    let f_irr = not_square(&(-&m - &gamma));
    let f2_sym = second_iter_symmetric(&gamma, &m);
    let newly = f_irr && !f2_sym;
    let mut values = quad_values(&nf);
    values.insert("r".into(), r.clone());
    values.insert("s".into(), s.clone());
    values.insert("linear_class".into(), linear.clone());
    values.insert("octic_class".into(), octic.clone());
    Ok(FamilyMember {
        name: "quad_n23_surface".into(),
        params: vec![r.clone(), s.clone()],
        f: nf.poly(),
        predicted: Prediction {
            n: 3,
            newly_reducible: newly,
            degree_pattern: newly.then(|| vec![4, 4]),
            factors: n23_factors(&h, &gamma),
            factors_irreducible: newly,
            side_conditions: vec![
                SideCondition::new("-m-gamma is not a square", f_irr),
                SideCondition::new("2r-s^2+4 is not a square", not_square(&linear)),
                SideCondition::new("m^2+m+gamma is not a square", not_square(&(&m * &m + &m + &gamma))),
                SideCondition::new("f^2 is not symmetrically reducible", !f2_sym),
            ],
        },
        values,
        polys: BTreeMap::from([("h".into(), h)]),
    })
}

fn m_minus1_gamma(t: &Rational) -> Result<Rational> {
    let t2 = t * t;
    let den = &t2 - rat_int(8);
    if den.is_zero() {
        return Err(Error::Domain("t^2 = 8".into()));
    }
    let inner = (&t2 - t * rat_int(8) + rat_int(8)) * (&t2 + rat_int(8)) / (&den * &den);
    Ok(pw(&inner, 4) * rat_int(4) + rat_int(1))
}

fn m_minus1_member(name: &str, params: Vec<Rational>, t: &Rational) -> Result<FamilyMember> {
    let gamma = m_minus1_gamma(t)?;
    let nf = QuadNormalForm::new(gamma.clone(), rat_int(-1));
    let c1 = not_square(&(rat_int(1) - &gamma));
    let c2 = not_square(&gamma);
    let mut values = quad_values(&nf);
    values.insert("t".into(), t.clone());
    Ok(FamilyMember {
        name: name.into(),
        params,
        f: nf.poly(),
        predicted: Prediction {
            n: 3,
            newly_reducible: c1 && c2,
            degree_pattern: (c1 && c2).then(|| vec![4, 4]),
            factors: Vec::new(),
            factors_irreducible: false,
            side_conditions: vec![
                SideCondition::new("1-gamma is not a square", c1),
                SideCondition::new("gamma is not a square", c2),
            ],
        },
        values,
        polys: BTreeMap::new(),
    })
}

/// `m = -1` with `gamma = 4 ((t^2-8t+8)(t^2+8)/(t^2-8)^2)^4 + 1`.
pub fn quad_m_minus1(t: &Rational) -> Result<FamilyMember> {
    m_minus1_member("quad_m_minus1", vec![t.clone()], t)
}

/// `quad_m_minus1(25 r)` for `v_5(r) >= 0`, which forces `v_5(gamma)` odd.
pub fn quad_m_minus1_guarded(r: &Rational) -> Result<FamilyMember> {
    if padic_valuation(r, 5)? < Valuation::Finite(0) {
        return Err(Error::Precondition(format!("v_5(r) must be nonnegative, r = {r}")));
    }
    let mut member = m_minus1_member("quad_m_minus1_guarded", vec![r.clone()], &(r * rat_int(25)))?;
    let v = padic_valuation(member.value("gamma"), 5)?;
    member
        .predicted
        .side_conditions
        .push(SideCondition::new("v_5(gamma) is odd", v.finite().is_some_and(|v| v % 2 != 0)));
    Ok(member)
}

/// `m = k^4 - 2k^2 - 1` and
/// `gamma = 1 + k^2 (k^2-2)(2k^4-4k^2-1)(2k^4-4k^2+1)` for `|k| >= 2`,
/// `3` not dividing `k`: the surface at `r = 2, s = 2k`.
pub fn quad_newfamily(k: &Integer) -> Result<FamilyMember> {
    let three = Integer::from(3);
    if k.abs() < Integer::from(2) || (k % &three).is_zero() {
        return Err(Error::Precondition(format!("need |k| >= 2 and 3 not dividing k, got k = {k}")));
    }
    let kq = Rational::from_integer(k.clone());
    let k2 = &kq * &kq;
    let k4 = &k2 * &k2;
    let m = &k4 - &k2 * rat_int(2) - rat_int(1);
    let quartic = &k4 * rat_int(2) - &k2 * rat_int(4);
    let gamma = rat_int(1)
        + &k2 * (&k2 - rat_int(2)) * (&quartic - rat_int(1)) * (&quartic + rat_int(1));
    let nf = QuadNormalForm::new(gamma.clone(), m.clone());
    let neg = -&m - &gamma;
    let disc = &m * &m + &m + &gamma;
    let cofactor = eval_monomials(&[&kq], &[(1, &[0]), (6, &[2]), (13, &[4]), (-16, &[6]), (4, &[8])]);
    let k2m1 = &k2 - rat_int(1);
    let mod3 = |q: &Rational| -> Option<Integer> {
        q.is_integer().then(|| num_integer::Integer::mod_floor(q.numer(), &three))
    };
    let two = Some(Integer::from(2));
    let mut values = quad_values(&nf);
    values.insert("k".into(), kq.clone());
    values.insert("minus_m_minus_gamma".into(), neg.clone());
    values.insert("m2_plus_m_plus_gamma".into(), disc.clone());
    values.insert("cofactor".into(), cofactor.clone());
    Ok(FamilyMember {
        name: "quad_newfamily".into(),
        params: vec![kq.clone()],
        f: nf.poly(),
        predicted: Prediction {
            n: 3,
            newly_reducible: true,
            degree_pattern: Some(vec![4, 4]),
            factors: Vec::new(),
            factors_irreducible: false,
            side_conditions: vec![
                SideCondition::new(
                    "-m-gamma = -4k^6(k^2-2)^3",
                    neg == -pw(&kq, 6) * rat_int(4) * pw(&(&k2 - rat_int(2)), 3),
                ),
                SideCondition::new("-m-gamma < 0", neg.is_negative()),
                SideCondition::new("m^2+m+gamma == 2 mod 3", mod3(&disc) == two),
                SideCondition::new("m^2+m+gamma = (k^2-1)^2 Q(k)", disc == &k2m1 * &k2m1 * &cofactor),
                SideCondition::new("Q(k) == 2 mod 3", mod3(&cofactor) == two),
            ],
        },
        values,
        polys: BTreeMap::from([("cofactor_q".into(), qpoly(vec![
            rat_int(1), rat_int(0), rat_int(6), rat_int(0), rat_int(13), rat_int(0), rat_int(-16), rat_int(0), rat_int(4),
        ]))]),
    })
}

/// The two cubic families `f = (x - gamma)^3 + b + gamma` whose second
/// iterate has an explicit cubic factor.
pub fn cubic_family(variant: u8, t: &Rational) -> Result<FamilyMember> {
    if t.is_zero() {
        return Err(Error::Domain("t must be nonzero".into()));
    }
    let t3 = pw(t, 3);
    let t9 = pw(t, 9);
    let (b, gamma, a0, a1, a2) = match variant {
        1 => (
            &t3 * rat_int(36),
            &t9 * rat_int(-2 * 6i64.pow(6)) - &t3 * rat_int(36),
            &t3 * rat_int(-36),
            rat_int(0),
            t * rat_int(6),
        ),
        2 => (
            &t3 * rat_int(-9),
            &t3 * rat_int(9) + &t9 * rat_int(2 * 3i64.pow(6)),
            &t3 * rat_int(9),
            t * t * rat_int(9),
            t * rat_int(3),
        ),
        _ => return Err(Error::Domain(format!("variant must be 1 or 2, got {variant}"))),
    };
    let f = shifted_power(&gamma, 3, &(&b + &gamma));
    let c = -(&b + &gamma);
    let cubic_at_gamma = qpoly(vec![a0.clone(), a1.clone(), a2.clone(), rat_int(1)]);
    let p1 = cubic_at_gamma.shift(&-&gamma);
    let f2 = f.iterate(2);
    let p2 = f2
        .exact_div(&p1)
        .ok_or_else(|| Error::StructureViolation("cubic factor does not divide f^2".into()))?;
    let f_irr = xdc_irreducible(&c, 3)?;
    let values = BTreeMap::from([
        ("b".into(), b),
        ("gamma".into(), gamma),
        ("c".into(), c),
        ("a0".into(), a0),
        ("a1".into(), a1),
        ("a2".into(), a2),
    ]);
    Ok(FamilyMember {
        name: "cubic_family".into(),
        params: vec![rat_int(variant as i64), t.clone()],
        f,
        predicted: Prediction {
            n: 2,
            newly_reducible: f_irr,
            degree_pattern: f_irr.then(|| vec![3, 6]),
            factors: vec![p1, p2],
            factors_irreducible: f_irr,
            side_conditions: vec![
                SideCondition::new("2 is not a cube", is_nth_power(&rat_int(2), 3).is_none()),
                SideCondition::new("-(b+gamma) is not a cube", f_irr),
            ],
        },
        values,
        polys: BTreeMap::from([("cubic_factor_at_gamma".into(), cubic_at_gamma)]),
    })
}

const QUARTIC_GAMMA_NUM: &[(i64, &[u32])] = &[
    (-2, &[5, 2]),
    (19, &[4, 4]),
    (-72, &[3, 6]),
    (32, &[3, 0]),
    (136, &[2, 8]),
    (-32, &[2, 2]),
    (-128, &[1, 10]),
    (-64, &[1, 4]),
    (48, &[0, 12]),
    (64, &[0, 6]),
];

/// Quartics `f = (x - gamma)^4 + m + gamma` with
/// `f^2(x + gamma) = p(x^2) p(-x^2)`; newly reducible when `f` is
/// irreducible.
pub fn quartic_surface(r: &Rational, s: &Rational) -> Result<FamilyMember> {
    let r1 = r - s * s;
    if r1.is_zero() {
        return Err(Error::Domain("r must differ from s^2".into()));
    }
    let s2 = s * s;
    let m = (pw(s, 4) * rat_int(2) - r * r) / (&r1 * rat_int(8));
    let gamma = eval_monomials(&[r, s], QUARTIC_GAMMA_NUM) / (&r1 * &r1 * rat_int(256));
    let r1_2 = &r1 * &r1;
    let p = qpoly(vec![
        (&r1 * pw(s, 6) * rat_int(-4) + &r1_2 * pw(s, 4) * rat_int(10) - pw(&r1, 3) * &s2 * rat_int(12)
            + pw(&r1, 4)
            + pw(s, 8))
            / (&r1_2 * rat_int(64)),
        (&r1_2 * s * rat_int(3) - pw(s, 5)) / (&r1 * rat_int(8)),
        (pw(s, 4) - &r1_2) / (&r1 * rat_int(4)),
        -s.clone(),
        rat_int(1),
    ]);
    let f = shifted_power(&gamma, 4, &(&m + &gamma));
    let c = -(&m + &gamma);
    let f_irr = xdc_irreducible(&c, 4)?;
    let sq = Poly::x(RationalField).shift(&-&gamma).pow(2);
    let mut factors = vec![p.compose(&sq)?, p.compose(&-&sq)?];
    factors.sort();
    let values = BTreeMap::from([
        ("r".into(), r.clone()),
        ("s".into(), s.clone()),
        ("m".into(), m),
        ("gamma".into(), gamma),
        ("c".into(), c),
    ]);
    Ok(FamilyMember {
        name: "quartic_surface".into(),
        params: vec![r.clone(), s.clone()],
        f,
        predicted: Prediction {
            n: 2,
            newly_reducible: f_irr,
            degree_pattern: None,
            factors,
            factors_irreducible: false,
            side_conditions: vec![SideCondition::new("f irreducible by the x^4 - c criterion", f_irr)],
        },
        values,
        polys: BTreeMap::from([("p".into(), p)]),
    })
}

/// `(x + 192 t^8 - 7 t^2)^4 - 192 t^8`, the surface at `r = 48t^2, s = 4t`.
pub fn quartic_t(t: &Rational) -> Result<FamilyMember> {
    if t.is_zero() {
        return Err(Error::Domain("t must be nonzero".into()));
    }
    let mut member = quartic_surface(&(t * t * rat_int(48)), &(t * rat_int(4)))?;
    let t8 = pw(t, 8) * rat_int(192);
    let closed = shifted_power(&(t * t * rat_int(7) - &t8), 4, &-&t8);
    let conds = &mut member.predicted.side_conditions;
    conds.push(SideCondition::new("f = (x+192t^8-7t^2)^4-192t^8", closed == member.f));
    conds.push(SideCondition::new("3 is not a square", not_square(&rat_int(3))));
    conds.push(SideCondition::new("-3 is not a fourth power", is_nth_power(&rat_int(-3), 4).is_none()));
    member.name = "quartic_t".into();
    member.params = vec![t.clone()];
    member.values.insert("t".into(), t.clone());
    Ok(member)
}

fn odd_prime_divisors(d: usize) -> Vec<u64> {
    prime_divisors(d as u64).into_iter().filter(|&p| p != 2).collect()
}

/// `f = (x - 4k^4)^d + 4k^4` for `d == 2 mod 4`; `f^2` is
/// `(x - 4k^4)^(d^2) + 4k^4`, reducible since `4 | d^2`.
pub fn highdeg_family(d: usize, k: &Rational) -> Result<FamilyMember> {
    if d % 4 != 2 {
        return Err(Error::Domain(format!("d must be 2 mod 4, got {d}")));
    }
    let k4 = pw(k, 4) * rat_int(4);
    let c = -&k4;
    let f = shifted_power(&k4, d as u32, &k4);
    let mut conds = vec![SideCondition::new("-1 is not a square", not_square(&rat_int(-1)))];
    for p in odd_prime_divisors(d) {
        conds.push(SideCondition::new(
            format!("-4k^4 is not a {p}-th power"),
            is_nth_power(&c, p as u32).is_none(),
        ));
    }
    let newly = conds.iter().all(|c| c.holds);
    // y^4 + 4k^4 = (y^2 + 2ky + 2k^2)(y^2 - 2ky + 2k^2), y = (x - 4k^4)^(d^2/4)
    let y = Poly::x(RationalField).shift(&-&k4).pow((d * d / 4) as u32);
    let y2 = &y * &y;
    let mid = y.scale(&(k * rat_int(2)));
    let two_k2 = k * k * rat_int(2);
    let mut factors = vec![(&y2 + &mid).add_const(&two_k2), (&y2 - &mid).add_const(&two_k2)];
    factors.sort();
    let values = BTreeMap::from([("k".into(), k.clone()), ("c".into(), c), ("d".into(), rat_int(d as i64))]);
    Ok(FamilyMember {
        name: "highdeg_family".into(),
        params: vec![rat_int(d as i64), k.clone()],
        f,
        predicted: Prediction {
            n: 2,
            newly_reducible: newly,
            degree_pattern: None,
            factors,
            factors_irreducible: false,
            side_conditions: conds,
        },
        values,
        polys: BTreeMap::new(),
    })
}

/// Powers `k = p^x`, `x = 0, 1, 2, ...`, restricted to the exponents with
/// `x == (1 - 2 v_p(2)) / 4 mod q` for every odd prime `q | d`, so that
/// `v_p(-4k^4)` is prime to each such `q`. The admissible exponents form
/// the progression `first + i * step`, so the stream is positional.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KStream {
    p: u64,
    first: u64,
    step: u64,
    pos: u64,
}

pub fn genbigd_k_stream(d: usize, p: u64) -> Result<KStream> {
    if d % 4 != 2 {
        return Err(Error::Domain(format!("d must be 2 mod 4, got {d}")));
    }
    if !is_prime_u64(p) {
        return Err(Error::InvalidModulus(format!("{p} is not prime")));
    }
    let v2 = if p == 2 { 1 } else { 0 };
    let mut first = 0i64;
    let mut step = 1i64;
    for q in odd_prime_divisors(d) {
        let q = q as i64;
        let target = ((1 - 2 * v2) * inv_mod_i64(4, q).expect("q odd")).rem_euclid(q);
        // CRT: first + j * step == target mod q
        let j = ((target - first).rem_euclid(q) * inv_mod_i64(step.rem_euclid(q), q).expect("coprime")).rem_euclid(q);
        first += j * step;
        step *= q;
    }
    Ok(KStream { p, first: first as u64, step: step as u64, pos: 0 })
}

impl KStream {
    /// Exponent of the `i`-th element.
    pub fn exponent(&self, i: u64) -> u64 {
        self.first + i * self.step
    }

    pub fn nth_k(&self, i: u64) -> Integer {
        num_traits::pow(Integer::from(self.p), self.exponent(i) as usize)
    }

    pub fn position(&self) -> u64 {
        self.pos
    }

    pub fn seek(&mut self, pos: u64) {
        self.pos = pos;
    }

    pub fn restart(&mut self) {
        self.pos = 0;
    }
}

impl Iterator for KStream {
    type Item = Integer;
    fn next(&mut self) -> Option<Integer> {
        let k = self.nth_k(self.pos);
        self.pos += 1;
        Some(k)
    }
}

pub const FAMILY_NAMES: &[&str] = &[
    "quad_n22",
    "quad_n23_surface",
    "quad_m_minus1",
    "quad_m_minus1_guarded",
    "quad_newfamily",
    "cubic_family",
    "quartic_surface",
    "quartic_t",
    "highdeg_family",
];

fn integer_param(q: &Rational, what: &str) -> Result<Integer> {
    if q.is_integer() {
        Ok(q.to_integer())
    } else {
        Err(Error::Precondition(format!("{what} must be an integer, got {q}")))
    }
}

fn small_param(q: &Rational, what: &str) -> Result<i64> {
    i64::try_from(integer_param(q, what)?).map_err(|_| Error::Precondition(format!("{what} out of range")))
}

/// Dispatches on a family name.
pub fn generate(name: &str, params: &[Rational]) -> Result<FamilyMember> {
    let want = |n: usize| -> Result<()> {
        if params.len() == n {
            Ok(())
        } else {
            Err(Error::Precondition(format!("{name} takes {n} parameter(s), got {}", params.len())))
        }
    };
    match name {
        "quad_n22" => want(1).map(|_| quad_n22(&params[0])),
        "quad_n23_surface" => want(2).and_then(|_| quad_n23_surface(&params[0], &params[1])),
        "quad_m_minus1" => want(1).and_then(|_| quad_m_minus1(&params[0])),
        "quad_m_minus1_guarded" => want(1).and_then(|_| quad_m_minus1_guarded(&params[0])),
        "quad_newfamily" => want(1).and_then(|_| quad_newfamily(&integer_param(&params[0], "k")?)),
        "cubic_family" => want(2).and_then(|_| {
            let v = small_param(&params[0], "variant")?;
            cubic_family(u8::try_from(v).unwrap_or(0), &params[1])
        }),
        "quartic_surface" => want(2).and_then(|_| quartic_surface(&params[0], &params[1])),
        "quartic_t" => want(1).and_then(|_| quartic_t(&params[0])),
        "highdeg_family" => want(2).and_then(|_| {
            let d = small_param(&params[0], "d")?;
            highdeg_family(usize::try_from(d).unwrap_or(0), &params[1])
        }),
        _ => Err(Error::Precondition(format!(
            "unknown family {name:?}; known: {}",
            FAMILY_NAMES.join(", ")
        ))),
    }
}

/// Outcome of checking a member against its prediction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verification {
    pub newly_reducible: bool,
    /// Computed verdict equals the predicted one.
    pub verdict_matches: bool,
    /// Product of the predicted factors equals `f^n` up to its leading
    /// coefficient; `None` without a closed form.
    pub factor_identity: Option<bool>,
    /// Computed irreducible factors equal the predicted ones.
    pub factors_match: Option<bool>,
    pub pattern_matches: Option<bool>,
    pub deglem: Option<bool>,
    /// `None` for non-quadratics or when `f^n` is not newly reducible.
    pub symmetric_split: Option<bool>,
    pub witness: Option<NewlyReducibleWitness<RationalField>>,
}

impl Verification {
    pub fn ok(&self) -> bool {
        self.verdict_matches
            && [self.factor_identity, self.factors_match, self.pattern_matches, self.deglem, self.symmetric_split]
                .iter()
                .all(|c| c.unwrap_or(true))
    }

    pub fn witness_wire(&self) -> Option<WitnessJson> {
        self.witness.as_ref().map(|w| w.to_wire(&RationalField))
    }
}

pub fn verify_member(member: &FamilyMember) -> Result<Verification> {
    verify_member_via(member, Route::Criteria)
}

pub fn verify_member_via(member: &FamilyMember, route: Route) -> Result<Verification> {
    let pred = &member.predicted;
    let f = &member.f;
    let witness = newly_reducible_via(f, pred.n, route)?;
    let newly = witness.is_some();
    let factor_identity = (!pred.factors.is_empty()).then(|| {
        let fnn = f.iterate(pred.n);
        let product = pred.factors.iter().fold(Poly::one(RationalField), |acc, p| &acc * p);
        product.scale(&fnn.lc()) == fnn
    });
    let (factors_match, pattern_matches, deglem, symmetric_split) = match &witness {
        Some(w) => {
            let complete = w.complete;
            let factors_match = (pred.factors_irreducible && complete).then(|| {
                let mut want = pred.factors.clone();
                want.sort();
                w.factors.unit.is_one()
                    && w.factors.factors.iter().all(|(_, m)| *m == 1)
                    && w.factors.factors.iter().map(|(p, _)| p.clone()).collect::<Vec<_>>() == want
            });
            let pattern = pred
                .degree_pattern
                .as_ref()
                .filter(|_| complete)
                .map(|p| *p == w.factors.degree_pattern());
            let sym = (f.deg() == 2).then(|| symmetric_split_from(f, w).is_ok());
            (factors_match, pattern, Some(deglem_check(w, f.deg())), sym)
        }
        None => (None, None, None, None),
    };
    Ok(Verification {
        newly_reducible: newly,
        verdict_matches: newly == pred.newly_reducible,
        factor_identity,
        factors_match,
        pattern_matches,
        deglem,
        symmetric_split,
        witness,
    })
}
