//! Factorization and irreducibility over Q and over finite fields.

pub mod finite;
pub mod nmod;
pub mod rational;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::field::{ExtensionField, Field, PrimeField, RationalField};
use crate::poly::Poly;

/// Full factorization is refused above this degree unless a binomial
/// criterion settles the question.
pub const DEGREE_CAP: usize = 24;

/// `unit * prod(factor^mult)`, factors monic, irreducible, pairwise distinct
/// and sorted by (degree, coefficients from the leading one down).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization<F: Field> {
    pub unit: F::Elem,
    pub factors: Vec<(Poly<F>, u32)>,
}

impl<F: Field> Factorization<F> {
    pub fn new(unit: F::Elem, mut factors: Vec<(Poly<F>, u32)>) -> Self {
        factors.sort();
        Factorization { unit, factors }
    }

    pub fn expand(&self, field: &F) -> Poly<F> {
        self.factors.iter().fold(
            Poly::constant(field.clone(), self.unit.clone()),
            |acc, (p, m)| &acc * &p.pow(*m),
        )
    }

    /// Degrees of the irreducible factors, with multiplicity, ascending.
    pub fn degree_pattern(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .factors
            .iter()
            .flat_map(|(p, m)| std::iter::repeat_n(p.deg(), *m as usize))
            .collect();
        out.sort_unstable();
        out
    }

    /// Number of irreducible factors counted with multiplicity.
    pub fn count(&self) -> usize {
        self.factors.iter().map(|(_, m)| *m as usize).sum()
    }

    pub fn is_irreducible(&self) -> bool {
        self.factors.len() == 1 && self.factors[0].1 == 1
    }

    pub fn to_wire(&self, field: &F) -> FactorizationJson {
        FactorizationJson {
            unit: field.format_elem(&self.unit),
            factors: self
                .factors
                .iter()
                .map(|(p, m)| FactorJson { poly: p.to_json(), mult: *m })
                .collect(),
        }
    }

    pub fn from_wire(field: &F, wire: &FactorizationJson) -> Result<Self> {
        let unit = crate::parse::parse_elem(field, &wire.unit)?;
        let factors = wire
            .factors
            .iter()
            .map(|f| Ok((Poly::from_json(field.clone(), &f.poly)?, f.mult)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Factorization::new(unit, factors))
    }
}

/// Wire form: `{unit, factors: [{poly, mult}]}` with coefficient strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorJson {
    pub poly: Vec<String>,
    pub mult: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorizationJson {
    pub unit: String,
    pub factors: Vec<FactorJson>,
}

/// Fields with a complete factorization algorithm.
pub trait Factorize: Field {
    fn factor(&self, f: &Poly<Self>) -> Result<Factorization<Self>>;
    fn is_irreducible(&self, f: &Poly<Self>) -> Result<bool>;
    fn squarefree_decomposition(&self, f: &Poly<Self>) -> Vec<(Poly<Self>, u32)>;
}

impl Factorize for RationalField {
    fn factor(&self, f: &Poly<Self>) -> Result<Factorization<Self>> {
        rational::factor_over_q(f)
    }
    fn is_irreducible(&self, f: &Poly<Self>) -> Result<bool> {
        rational::irreducible_q(f)
    }
    fn squarefree_decomposition(&self, f: &Poly<Self>) -> Vec<(Poly<Self>, u32)> {
        rational::squarefree_decomposition(f)
    }
}

macro_rules! finite_factorize {
    ($t:ty) => {
        impl Factorize for $t {
            fn factor(&self, f: &Poly<Self>) -> Result<Factorization<Self>> {
                Ok(finite::factor(f))
            }
            fn is_irreducible(&self, f: &Poly<Self>) -> Result<bool> {
                Ok(finite::is_irreducible(f))
            }
            fn squarefree_decomposition(&self, f: &Poly<Self>) -> Vec<(Poly<Self>, u32)> {
                finite::squarefree_decomposition(f)
            }
        }
    };
}
finite_factorize!(PrimeField);
finite_factorize!(ExtensionField);

/// Degrees of the irreducible factors of `f` over its field.
pub fn degree_pattern<F: Factorize>(f: &Poly<F>) -> Result<Vec<usize>> {
    Ok(f.field().factor(f)?.degree_pattern())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly_in;

    #[test]
    fn wire_form_round_trips() {
        let f = parse_poly_in(&RationalField, "2*(x^2+1)^2*(x-1/3)").unwrap();
        let fac = RationalField.factor(&f).unwrap();
        let wire = fac.to_wire(&RationalField);
        let text = serde_json::to_string(&wire).unwrap();
        assert_eq!(
            text,
            r#"{"unit":"2","factors":[{"poly":["-1/3","1"],"mult":1},{"poly":["1","0","1"],"mult":2}]}"#
        );
        let back: FactorizationJson = serde_json::from_str(&text).unwrap();
        assert_eq!(Factorization::from_wire(&RationalField, &back).unwrap(), fac);
    }

    #[test]
    fn degree_patterns() {
        let golden = parse_poly_in(&RationalField, "x^2-x-1").unwrap().iterate(3);
        assert_eq!(degree_pattern(&golden).unwrap(), vec![4, 4]);
        let octic = parse_poly_in(&RationalField, "x^8 - 2").unwrap();
        assert_eq!(degree_pattern(&octic).unwrap(), vec![8]);
    }
}
