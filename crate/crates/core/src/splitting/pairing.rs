use std::collections::BTreeMap;

use num::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graded::{Family, GradedClass, Monomial};
use crate::rational::{self, Rational};

use super::classes::ahat_series;

pub const PAIRING_VERSION: &str = "cc-pairing-v1";

/// A formal closed manifold of dimension `2n`: its Â-class and a linear
/// functional on weight-`n` monomials standing in for `∫_M`.
#[derive(Clone, Debug, PartialEq)]
pub struct PairingData {
    half_dimension: u32,
    ahat: GradedClass,
    table: BTreeMap<Monomial, Rational>,
}

impl PairingData {
    /// Checks `Â_0 = 1`, that odd weights of Â vanish, that Â only involves
    /// Pontryagin classes, and that every table entry has weight `n`.
    pub fn new(
        half_dimension: u32,
        ahat: GradedClass,
        table: BTreeMap<Monomial, Rational>,
    ) -> Result<Self> {
        if half_dimension == 0 {
            return Err(Error::InvalidPairing("half dimension must be positive".into()));
        }
        let ahat = ahat.truncate_to(half_dimension);
        if ahat.constant_term() != Rational::one() {
            return Err(Error::InvalidPairing("Â_0 must equal 1".into()));
        }
        for (m, _) in ahat.terms() {
            if m.weight() % 2 == 1 {
                return Err(Error::InvalidPairing(format!("odd-weight Â term {m}")));
            }
            if m.factors().iter().any(|(g, _)| g.family() != Family::Pontryagin) {
                return Err(Error::InvalidPairing(format!("Â term {m} is not in Pontryagin classes")));
            }
        }
        if let Some(m) = table.keys().find(|m| m.weight() != half_dimension) {
            return Err(Error::InvalidPairing(format!(
                "table monomial {m} has weight {}, expected {half_dimension}",
                m.weight()
            )));
        }
        let table = table.into_iter().filter(|(_, q)| !q.is_zero()).collect();
        Ok(PairingData { half_dimension, ahat, table })
    }

    /// Pairing with the standard Â-class in `⌊n/2⌋` Pontryagin classes.
    pub fn with_standard_ahat(
        half_dimension: u32,
        table: BTreeMap<Monomial, Rational>,
    ) -> Result<Self> {
        let ahat = ahat_series(half_dimension / 2, half_dimension);
        Self::new(half_dimension, ahat, table)
    }

    pub fn half_dimension(&self) -> u32 {
        self.half_dimension
    }

    pub fn ahat(&self) -> &GradedClass {
        &self.ahat
    }

    pub fn table(&self) -> &BTreeMap<Monomial, Rational> {
        &self.table
    }

    /// `∫_M x`: the table applied to the weight-`n` part; lower weights
    /// integrate to zero and monomials missing from the table count as zero.
    pub fn integrate(&self, x: &GradedClass) -> Result<Rational> {
        if x.truncation() < self.half_dimension {
            return Err(Error::Usage(format!(
                "class truncated at {} cannot be integrated over half-dimension {}",
                x.truncation(),
                self.half_dimension
            )));
        }
        let mut total = Rational::zero();
        for (m, q) in x.terms() {
            if m.weight() == self.half_dimension {
                if let Some(v) = self.table.get(m) {
                    total += q * v;
                }
            }
        }
        Ok(total)
    }

    /// `∫_M Â(M)·ch`.
    pub fn ahat_pairing(&self, ch: &GradedClass) -> Result<Rational> {
        let ch = ch.truncate_to(self.half_dimension);
        self.integrate(&(&self.ahat * &ch))
    }

    /// The vector `a_i = ∫ Â_{n-i} ch_i` for `i = 0..=n`.
    pub fn ahat_components(&self, ch: &GradedClass) -> Result<Vec<Rational>> {
        let n = self.half_dimension;
        let ch = ch.truncate_to(n);
        (0..=n)
            .map(|i| {
                let prod = &self.ahat.component(n - i)? * &ch.component(i)?;
                self.integrate(&prod)
            })
            .collect()
    }

    pub fn to_document(&self) -> PairingDocument {
        PairingDocument {
            version: PAIRING_VERSION.to_string(),
            n: self.half_dimension,
            ahat: Some(self.ahat.to_string_map()),
            table: self
                .table
                .iter()
                .map(|(m, q)| (m.to_string(), rational::render(q)))
                .collect(),
        }
    }

    pub fn from_document(doc: &PairingDocument) -> Result<Self> {
        if doc.version != PAIRING_VERSION {
            return Err(Error::Parse(format!("unsupported pairing version {:?}", doc.version)));
        }
        let mut table = BTreeMap::new();
        for (m, q) in &doc.table {
            table.insert(m.parse::<Monomial>()?, rational::parse(q)?);
        }
        match &doc.ahat {
            Some(map) => Self::new(doc.n, GradedClass::from_string_map(map, doc.n)?, table),
            None => Self::with_standard_ahat(doc.n, table),
        }
    }
}

/// On-disk pairing file. `ahat` defaults to the standard Â-class.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairingDocument {
    pub version: String,
    pub n: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ahat: Option<BTreeMap<String, String>>,
    pub table: BTreeMap<String, String>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::Generator;
    use crate::rational::int;
    use crate::splitting::FormalBundle;

    fn table(entries: &[(&str, i64)]) -> BTreeMap<Monomial, Rational> {
        entries.iter().map(|(m, q)| (m.parse().unwrap(), int(*q))).collect()
    }

    #[test]
    fn integrate_top_weight_only() {
        let data = PairingData::with_standard_ahat(1, table(&[("x1", -1)])).unwrap();
        assert_eq!(data.integrate(&GradedClass::zero(1)).unwrap(), int(0));
        assert_eq!(data.integrate(&GradedClass::constant(int(5), 1)).unwrap(), int(0));
        let line = FormalBundle::generic(1);
        assert_eq!(data.integrate(&line.chern_class(1).truncate_to(1)).unwrap(), int(-1));
        // absent monomials count as zero
        let y = GradedClass::generator(Generator::second_root(1), 1);
        assert_eq!(data.integrate(&y).unwrap(), int(0));
        assert!(data.integrate(&GradedClass::zero(0)).is_err());
    }

    #[test]
    fn validation() {
        let odd = &GradedClass::one(3) + &GradedClass::generator(Generator::root(1), 3);
        assert!(PairingData::new(3, odd, BTreeMap::new()).is_err());
        assert!(PairingData::new(2, GradedClass::zero(2), BTreeMap::new()).is_err());
        assert!(PairingData::with_standard_ahat(2, table(&[("x1", 1)])).is_err());
        assert!(PairingData::with_standard_ahat(0, BTreeMap::new()).is_err());
    }

    #[test]
    fn ahat_pairing_mixes_manifold_and_bundle_classes() {
        // n = 2: ∫ Â ch(E) = ∫ ch_2(E) - rank·∫ p1/24
        let data = PairingData::with_standard_ahat(2, table(&[("x1^2", 2), ("p1", 48)])).unwrap();
        let e = FormalBundle::generic(1);
        // ch_2 = x1²/2 → 1 ; rank term → -2
        assert_eq!(data.ahat_pairing(&e.chern_character(2)).unwrap(), int(-1));
        let a = data.ahat_components(&e.chern_character(2)).unwrap();
        assert_eq!(a, vec![int(-2), int(0), int(1)]);
    }

    #[test]
    fn document_round_trip() {
        let data = PairingData::with_standard_ahat(2, table(&[("x1^2", 2), ("p1", 48)])).unwrap();
        let text = serde_json::to_string(&data.to_document()).unwrap();
        let back: PairingDocument = serde_json::from_str(&text).unwrap();
        assert_eq!(PairingData::from_document(&back).unwrap(), data);
    }
}
