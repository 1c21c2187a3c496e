//! Admissible functors: finite compositions of identity, trivial bundle,
//! dual, exterior power, direct sum and tensor product.

use std::fmt;

use num::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

pub const FUNCTOR_VERSION: &str = "cc-functor-v1";

/// Expression tree of an admissible functor. `Identity(i)` is the `i`-th
/// bundle argument.
///
/// The serde form is the canonical JSON: `op` first, then the node's fields
/// in declaration order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "op", deny_unknown_fields)]
pub enum FunctorExpr {
    #[serde(rename = "id")]
    Identity { slot: usize },
    #[serde(rename = "trivial")]
    Trivial { k: u32 },
    #[serde(rename = "dual")]
    Dual { arg: Box<FunctorExpr> },
    #[serde(rename = "wedge")]
    Wedge { k: u32, arg: Box<FunctorExpr> },
    #[serde(rename = "sum")]
    DirectSum { left: Box<FunctorExpr>, right: Box<FunctorExpr> },
    #[serde(rename = "tensor")]
    Tensor { left: Box<FunctorExpr>, right: Box<FunctorExpr> },
}

use FunctorExpr::*;

impl FunctorExpr {
    pub fn id(slot: usize) -> Self {
        Identity { slot }
    }

    pub fn trivial(k: u32) -> Self {
        Trivial { k }
    }

    pub fn dual(arg: FunctorExpr) -> Self {
        Dual { arg: Box::new(arg) }
    }

    pub fn wedge(k: u32, arg: FunctorExpr) -> Self {
        Wedge { k, arg: Box::new(arg) }
    }

    pub fn sum(left: FunctorExpr, right: FunctorExpr) -> Self {
        DirectSum { left: Box::new(left), right: Box::new(right) }
    }

    pub fn tensor(left: FunctorExpr, right: FunctorExpr) -> Self {
        Tensor { left: Box::new(left), right: Box::new(right) }
    }

    /// Left-nested tensor product of the factors; `None` when empty.
    pub fn tensor_all(factors: impl IntoIterator<Item = FunctorExpr>) -> Option<Self> {
        factors.into_iter().reduce(FunctorExpr::tensor)
    }

    /// Left-nested direct sum of the summands; `None` when empty.
    pub fn sum_all(summands: impl IntoIterator<Item = FunctorExpr>) -> Option<Self> {
        summands.into_iter().reduce(FunctorExpr::sum)
    }

    /// Number of bundle arguments: one more than the largest slot used.
    pub fn arity(&self) -> usize {
        match self {
            Identity { slot } => slot + 1,
            Trivial { .. } => 0,
            Dual { arg } | Wedge { arg, .. } => arg.arity(),
            DirectSum { left, right } | Tensor { left, right } => left.arity().max(right.arity()),
        }
    }

    pub fn node_count(&self) -> usize {
        match self {
            Identity { .. } | Trivial { .. } => 1,
            Dual { arg } | Wedge { arg, .. } => 1 + arg.node_count(),
            DirectSum { left, right } | Tensor { left, right } => {
                1 + left.node_count() + right.node_count()
            }
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Identity { .. } | Trivial { .. } => 1,
            Dual { arg } | Wedge { arg, .. } => 1 + arg.depth(),
            DirectSum { left, right } | Tensor { left, right } => {
                1 + left.depth().max(right.depth())
            }
        }
    }

    /// Replaces every `Identity(i)` leaf by `args[i]`.
    pub fn substitute(&self, args: &[FunctorExpr]) -> Result<FunctorExpr> {
        if self.arity() > args.len() {
            return Err(Error::ArityMismatch { expected: self.arity(), got: args.len() });
        }
        Ok(self.substitute_unchecked(args))
    }

    fn substitute_unchecked(&self, args: &[FunctorExpr]) -> FunctorExpr {
        match self {
            Identity { slot } => args[*slot].clone(),
            Trivial { k } => Trivial { k: *k },
            Dual { arg } => FunctorExpr::dual(arg.substitute_unchecked(args)),
            Wedge { k, arg } => FunctorExpr::wedge(*k, arg.substitute_unchecked(args)),
            DirectSum { left, right } => FunctorExpr::sum(
                left.substitute_unchecked(args),
                right.substitute_unchecked(args),
            ),
            Tensor { left, right } => FunctorExpr::tensor(
                left.substitute_unchecked(args),
                right.substitute_unchecked(args),
            ),
        }
    }

    /// Canonical JSON text.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("functor serialization")
    }

    /// Parses either a bare functor object or a `{"version", "functor"}`
    /// document. Syntax errors carry line and column; structural errors
    /// carry the JSON path of the offending node.
    pub fn from_json(text: &str) -> Result<Self> {
        let value: serde_json::Value = serde_json::from_str(text)?;
        if value.get("op").is_none() && value.get("version").is_some() {
            let version = value["version"].as_str().unwrap_or_default();
            if version != FUNCTOR_VERSION {
                return Err(Error::Parse(format!("unsupported functor version {version:?}")));
            }
            let inner = value
                .get("functor")
                .ok_or_else(|| Error::Parse("$: missing field `functor`".into()))?;
            return Self::from_value(inner, "$.functor");
        }
        Self::from_value(&value, "$")
    }

    fn from_value(v: &serde_json::Value, path: &str) -> Result<Self> {
        let err = |msg: String| Error::Parse(format!("{path}: {msg}"));
        let obj = v.as_object().ok_or_else(|| err("expected an object".into()))?;
        let op = obj
            .get("op")
            .and_then(|o| o.as_str())
            .ok_or_else(|| err("missing string field `op`".into()))?;
        let allowed: &[&str] = match op {
            "id" => &["op", "slot"],
            "trivial" => &["op", "k"],
            "dual" => &["op", "arg"],
            "wedge" => &["op", "k", "arg"],
            "sum" | "tensor" => &["op", "left", "right"],
            other => return Err(err(format!("unknown op {other:?}"))),
        };
        if let Some(extra) = obj.keys().find(|k| !allowed.contains(&k.as_str())) {
            return Err(err(format!("unexpected field `{extra}` for op {op:?}")));
        }
        let uint = |name: &str| -> Result<u64> {
            obj.get(name)
                .ok_or_else(|| err(format!("missing field `{name}`")))?
                .as_u64()
                .ok_or_else(|| err(format!("field `{name}` must be a non-negative integer")))
        };
        let small = |name: &str| -> Result<u32> {
            u32::try_from(uint(name)?).map_err(|_| err(format!("field `{name}` too large")))
        };
        let child = |name: &str| -> Result<FunctorExpr> {
            let c = obj.get(name).ok_or_else(|| err(format!("missing field `{name}`")))?;
            Self::from_value(c, &format!("{path}.{name}"))
        };
        Ok(match op {
            "id" => Identity { slot: uint("slot")? as usize },
            "trivial" => Trivial { k: small("k")? },
            "dual" => FunctorExpr::dual(child("arg")?),
            "wedge" => FunctorExpr::wedge(small("k")?, child("arg")?),
            "sum" => FunctorExpr::sum(child("left")?, child("right")?),
            _ => FunctorExpr::tensor(child("left")?, child("right")?),
        })
    }

    /// Sharp-enough constant `C_J` with `‖R^{J(E…)}‖ ≤ C_J · max‖R^{E_i}‖`.
    pub fn bound_constant(&self) -> CurvatureBound {
        CurvatureBound(self.bound_rational())
    }

    fn bound_rational(&self) -> Rational {
        match self {
            Identity { .. } => Rational::one(),
            Trivial { .. } => Rational::zero(),
            Dual { arg } => arg.bound_rational(),
            // Λ^k E sits inside E^{⊗k} as a parallel subbundle
            Wedge { k, arg } => rational::int(*k as i64) * arg.bound_rational(),
            DirectSum { left, right } => left.bound_rational().max(right.bound_rational()),
            Tensor { left, right } => left.bound_rational() + right.bound_rational(),
        }
    }

    /// The `index`-th node in pre-order (root is 0).
    pub fn node_at_mut(&mut self, index: usize) -> Option<&mut FunctorExpr> {
        if index == 0 {
            return Some(self);
        }
        let mut offset = index - 1;
        match self {
            Identity { .. } | Trivial { .. } => None,
            Dual { arg } | Wedge { arg, .. } => arg.node_at_mut(offset),
            DirectSum { left, right } | Tensor { left, right } => {
                let n = left.node_count();
                if offset < n {
                    left.node_at_mut(offset)
                } else {
                    offset -= n;
                    right.node_at_mut(offset)
                }
            }
        }
    }
}

impl fmt::Display for FunctorExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Identity { slot: 0 } => f.write_str("E"),
            Identity { slot } => write!(f, "E{slot}"),
            Trivial { k } => write!(f, "C^{k}"),
            Dual { arg } => write!(f, "({arg})*"),
            Wedge { k, arg } => write!(f, "Λ^{k}({arg})"),
            DirectSum { left, right } => write!(f, "({left} ⊕ {right})"),
            Tensor { left, right } => write!(f, "({left} ⊗ {right})"),
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct FunctorDocument {
    pub version: String,
    pub functor: FunctorExpr,
}

impl FunctorDocument {
    pub fn new(functor: FunctorExpr) -> Self {
        FunctorDocument { version: FUNCTOR_VERSION.to_string(), functor }
    }
}

/// Curvature-norm multiplier `C_J`, always non-negative.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct CurvatureBound(pub Rational);

impl CurvatureBound {
    pub fn value(&self) -> &Rational {
        &self.0
    }
}

impl fmt::Display for CurvatureBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&rational::render(&self.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn e() -> FunctorExpr {
        FunctorExpr::id(0)
    }

    #[test]
    fn canonical_json() {
        assert_eq!(e().to_json(), r#"{"op":"id","slot":0}"#);
        assert_eq!(
            FunctorExpr::wedge(2, e()).to_json(),
            r#"{"op":"wedge","k":2,"arg":{"op":"id","slot":0}}"#
        );
        let t = FunctorExpr::tensor(FunctorExpr::trivial(3), FunctorExpr::dual(e()));
        assert_eq!(FunctorExpr::from_json(&t.to_json()).unwrap(), t);
    }

    #[test]
    fn versioned_document() {
        let doc = serde_json::to_string(&FunctorDocument::new(e())).unwrap();
        assert_eq!(doc, r#"{"version":"cc-functor-v1","functor":{"op":"id","slot":0}}"#);
        assert_eq!(FunctorExpr::from_json(&doc).unwrap(), e());
        let bad = r#"{"version":"cc-functor-v0","functor":{"op":"id","slot":0}}"#;
        assert!(FunctorExpr::from_json(bad).is_err());
    }

    #[test]
    fn malformed_json_reports_position() {
        let err = FunctorExpr::from_json("{\"op\":\"wedge\",\n\"k\":2,").unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
        let err = FunctorExpr::from_json(r#"{"op":"tensor","left":{"op":"id","slot":0},"right":{"op":"wedge","k":2}}"#)
            .unwrap_err();
        assert_eq!(err.to_string(), "parse error: $.right: missing field `arg`");
        assert!(FunctorExpr::from_json(r#"{"op":"cube","arg":1}"#).is_err());
        assert!(FunctorExpr::from_json("[").is_err());
    }

    #[test]
    fn bound_constants() {
        assert_eq!(e().bound_constant().0, int(1));
        assert_eq!(FunctorExpr::trivial(5).bound_constant().0, int(0));
        let ee = FunctorExpr::tensor(e(), e());
        assert_eq!(ee.bound_constant().0, int(2));
        let j = FunctorExpr::tensor(ee, FunctorExpr::wedge(2, e()));
        assert_eq!(j.bound_constant().0, int(4));
        let s = FunctorExpr::sum(FunctorExpr::wedge(3, e()), FunctorExpr::dual(e()));
        assert_eq!(s.bound_constant().0, int(3));
    }

    #[test]
    fn arity_and_substitution() {
        let t = FunctorExpr::tensor(FunctorExpr::wedge(2, e()), FunctorExpr::id(1));
        assert_eq!(t.arity(), 2);
        assert!(t.substitute(&[e()]).is_err());
        let s = t.substitute(&[e(), FunctorExpr::dual(e())]).unwrap();
        assert_eq!(s.arity(), 1);
        assert_eq!(s.to_string(), "(Λ^2(E) ⊗ (E)*)");
        assert_eq!(FunctorExpr::trivial(2).arity(), 0);
    }

    #[test]
    fn preorder_node_access() {
        let mut t = FunctorExpr::tensor(FunctorExpr::wedge(2, e()), FunctorExpr::sum(e(), e()));
        assert_eq!(t.node_count(), 6);
        assert!(matches!(t.node_at_mut(1), Some(Wedge { k: 2, .. })));
        assert!(matches!(t.node_at_mut(3), Some(DirectSum { .. })));
        *t.node_at_mut(5).unwrap() = FunctorExpr::trivial(1);
        assert_eq!(t.to_string(), "(Λ^2(E) ⊗ (E ⊕ C^1))");
        assert!(t.node_at_mut(6).is_none());
    }
}
