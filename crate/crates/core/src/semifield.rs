//! Coefficient semifields: universal, tropical and trivial.
//!
//! Universal elements remember how they were built from the generators, so a
//! semifield homomorphism out of the universal semifield (tropicalization,
//! trivialization, or a specialization of generators) is computed by replaying
//! that construction in the target semifield.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{self, ArithError, ExponentVector, LaurentPoly, RationalFn};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SemifieldError {
    #[error("semifield kind mismatch: {0} vs {1}")]
    KindMismatch(String, String),
    #[error("negative coefficient {coeff} in a polynomial evaluated in a semifield")]
    NegativeCoefficient { coeff: BigInt },
    #[error("expected {expected} arguments, got {got}")]
    Arity { expected: usize, got: usize },
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// Which semifield, with its number of generators.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SemifieldKind {
    Universal(usize),
    Tropical(usize),
    Trivial,
}

impl SemifieldKind {
    pub fn generators(self) -> usize {
        match self {
            SemifieldKind::Universal(m) | SemifieldKind::Tropical(m) => m,
            SemifieldKind::Trivial => 0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SemifieldKind::Universal(_) => "universal",
            SemifieldKind::Tropical(_) => "tropical",
            SemifieldKind::Trivial => "trivial",
        }
    }

    /// The generator `i`.
    pub fn gen(self, i: usize) -> SfElem {
        match self {
            SemifieldKind::Universal(m) => SfElem::Universal(Universal {
                value: RationalFn::var(m, i),
                expr: Arc::new(Expr::Gen(i)),
            }),
            SemifieldKind::Tropical(m) => {
                let mut e = vec![0; m];
                e[i] = 1;
                SfElem::Tropical(e)
            }
            SemifieldKind::Trivial => SfElem::Trivial,
        }
    }

    pub fn one(self) -> SfElem {
        match self {
            SemifieldKind::Universal(m) => SfElem::Universal(Universal {
                value: RationalFn::one(m),
                expr: Arc::new(Expr::Const(BigInt::from(1))),
            }),
            SemifieldKind::Tropical(m) => SfElem::Tropical(vec![0; m]),
            SemifieldKind::Trivial => SfElem::Trivial,
        }
    }

    /// The positive integer `c` (that is, `1 ⊕ ⋯ ⊕ 1`).
    pub fn positive_integer(self, c: &BigInt) -> SfElem {
        assert!(c.is_positive(), "semifield constants must be positive");
        match self {
            SemifieldKind::Universal(m) => SfElem::Universal(Universal {
                value: RationalFn::integer(m, c.clone()),
                expr: Arc::new(Expr::Const(c.clone())),
            }),
            _ => self.one(),
        }
    }

    fn check(self, a: &SfElem) -> Result<(), SemifieldError> {
        let ok = match (self, a) {
            (SemifieldKind::Universal(m), SfElem::Universal(u)) => u.value.nvars() == m,
            (SemifieldKind::Tropical(m), SfElem::Tropical(e)) => e.len() == m,
            (SemifieldKind::Trivial, SfElem::Trivial) => true,
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(SemifieldError::KindMismatch(self.name().into(), a.kind_name().into()))
        }
    }

    /// Evaluates a subtraction-free Laurent polynomial at `args`.
    ///
    /// Fails on any non-positive coefficient rather than silently evaluating it.
    pub fn eval_poly(self, p: &LaurentPoly, args: &[SfElem]) -> Result<SfElem, SemifieldError> {
        if args.len() != p.nvars() {
            return Err(SemifieldError::Arity { expected: p.nvars(), got: args.len() });
        }
        if let Some((_, c)) = p.terms().find(|(_, c)| !c.is_positive()) {
            return Err(SemifieldError::NegativeCoefficient { coeff: c.clone() });
        }
        for a in args {
            self.check(a)?;
        }
        match self {
            SemifieldKind::Trivial => Ok(SfElem::Trivial),
            SemifieldKind::Tropical(m) => {
                let exps: Vec<&ExponentVector> = args
                    .iter()
                    .map(|a| match a {
                        SfElem::Tropical(e) => e,
                        _ => unreachable!(),
                    })
                    .collect();
                let mut best: Option<ExponentVector> = None;
                for (e, _) in p.terms() {
                    let mut v = vec![0i64; m];
                    for (j, &a) in e.iter().enumerate() {
                        if a != 0 {
                            for (o, &x) in v.iter_mut().zip(exps[j]) {
                                *o += a * x;
                            }
                        }
                    }
                    best = Some(match best {
                        None => v,
                        Some(b) => b.iter().zip(&v).map(|(x, y)| *x.min(y)).collect(),
                    });
                }
                // The zero polynomial is not subtraction-free.
                best.map(SfElem::Tropical).ok_or(SemifieldError::NegativeCoefficient { coeff: BigInt::from(0) })
            }
            SemifieldKind::Universal(_) => {
                let values: Vec<RationalFn> = args.iter().map(|a| a.as_universal().value.clone()).collect();
                let value = arith::substitute(p, &values)?;
                let exprs = args.iter().map(|a| a.as_universal().expr.clone()).collect();
                Ok(SfElem::Universal(Universal { value, expr: Arc::new(Expr::EvalPoly(p.clone(), exprs)) }))
            }
        }
    }
}

/// How a universal element was built.
#[derive(Debug)]
enum Expr {
    Gen(usize),
    Const(BigInt),
    Mul(Arc<Expr>, Arc<Expr>),
    Inv(Arc<Expr>),
    Pow(Arc<Expr>, i64),
    Add(Arc<Expr>, Arc<Expr>),
    EvalPoly(LaurentPoly, Vec<Arc<Expr>>),
}

/// An element of the universal semifield with its construction record.
#[derive(Clone)]
pub struct Universal {
    value: RationalFn,
    expr: Arc<Expr>,
}

impl Universal {
    pub fn value(&self) -> &RationalFn {
        &self.value
    }
}

/// An element of one of the three semifields.
#[derive(Clone)]
pub enum SfElem {
    Universal(Universal),
    Tropical(ExponentVector),
    Trivial,
}

impl SfElem {
    pub fn kind_name(&self) -> &'static str {
        match self {
            SfElem::Universal(_) => "universal",
            SfElem::Tropical(_) => "tropical",
            SfElem::Trivial => "trivial",
        }
    }

    pub fn kind(&self) -> SemifieldKind {
        match self {
            SfElem::Universal(u) => SemifieldKind::Universal(u.value.nvars()),
            SfElem::Tropical(e) => SemifieldKind::Tropical(e.len()),
            SfElem::Trivial => SemifieldKind::Trivial,
        }
    }

    fn as_universal(&self) -> &Universal {
        match self {
            SfElem::Universal(u) => u,
            _ => panic!("not a universal element"),
        }
    }

    pub fn tropical_exponents(&self) -> Option<&ExponentVector> {
        match self {
            SfElem::Tropical(e) => Some(e),
            _ => None,
        }
    }

    pub fn universal_value(&self) -> Option<&RationalFn> {
        match self {
            SfElem::Universal(u) => Some(&u.value),
            _ => None,
        }
    }

    fn same_kind(&self, other: &Self) -> Result<(), SemifieldError> {
        self.kind().check(other)
    }

    pub fn mul(&self, other: &Self) -> Result<Self, SemifieldError> {
        self.same_kind(other)?;
        Ok(match (self, other) {
            (SfElem::Trivial, _) => SfElem::Trivial,
            (SfElem::Tropical(a), SfElem::Tropical(b)) => {
                SfElem::Tropical(a.iter().zip(b).map(|(x, y)| x + y).collect())
            }
            (SfElem::Universal(a), SfElem::Universal(b)) => SfElem::Universal(Universal {
                value: a.value.mul(&b.value),
                expr: Arc::new(Expr::Mul(a.expr.clone(), b.expr.clone())),
            }),
            _ => unreachable!(),
        })
    }

    pub fn inv(&self) -> Self {
        match self {
            SfElem::Trivial => SfElem::Trivial,
            SfElem::Tropical(a) => SfElem::Tropical(a.iter().map(|x| -x).collect()),
            SfElem::Universal(a) => SfElem::Universal(Universal {
                value: a.value.inv().expect("semifield elements are nonzero"),
                expr: Arc::new(Expr::Inv(a.expr.clone())),
            }),
        }
    }

    pub fn div(&self, other: &Self) -> Result<Self, SemifieldError> {
        self.mul(&other.inv())
    }

    pub fn pow(&self, k: i64) -> Self {
        match self {
            SfElem::Trivial => SfElem::Trivial,
            SfElem::Tropical(a) => SfElem::Tropical(a.iter().map(|x| x * k).collect()),
            SfElem::Universal(a) => {
                if k == 1 {
                    return self.clone();
                }
                SfElem::Universal(Universal {
                    value: a.value.pow(k).expect("semifield elements are nonzero"),
                    expr: Arc::new(Expr::Pow(a.expr.clone(), k)),
                })
            }
        }
    }

    /// The auxiliary addition `⊕`.
    pub fn oplus(&self, other: &Self) -> Result<Self, SemifieldError> {
        self.same_kind(other)?;
        Ok(match (self, other) {
            (SfElem::Trivial, _) => SfElem::Trivial,
            (SfElem::Tropical(a), SfElem::Tropical(b)) => {
                SfElem::Tropical(a.iter().zip(b).map(|(x, y)| *x.min(y)).collect())
            }
            (SfElem::Universal(a), SfElem::Universal(b)) => SfElem::Universal(Universal {
                value: a.value.add(&b.value),
                expr: Arc::new(Expr::Add(a.expr.clone(), b.expr.clone())),
            }),
            _ => unreachable!(),
        })
    }

    pub fn is_one(&self) -> bool {
        match self {
            SfElem::Trivial => true,
            SfElem::Tropical(a) => a.iter().all(|&x| x == 0),
            SfElem::Universal(u) => u.value.equals(&RationalFn::one(u.value.nvars())),
        }
    }

    /// Image in the ambient field: generator `j` becomes variable `offset + j`.
    pub fn to_ambient(&self, offset: usize, nvars: usize) -> RationalFn {
        match self {
            SfElem::Trivial => RationalFn::one(nvars),
            SfElem::Tropical(e) => {
                let mut m = vec![0; nvars];
                m[offset..offset + e.len()].copy_from_slice(e);
                RationalFn::monomial(m)
            }
            SfElem::Universal(u) => u.value.embed(offset, nvars),
        }
    }

    /// Image under the semifield homomorphism from the universal semifield into
    /// `target` sending generator `j` to `images[j]`.
    ///
    /// Only universal elements carry a construction; other kinds are returned
    /// unchanged when `target` is their own kind and mapped to 1 when it is trivial.
    pub fn hom(&self, target: SemifieldKind, images: &[SfElem]) -> Result<SfElem, SemifieldError> {
        match self {
            SfElem::Universal(u) => {
                let m = u.value.nvars();
                if images.len() != m {
                    return Err(SemifieldError::Arity { expected: m, got: images.len() });
                }
                for im in images {
                    target.check(im)?;
                }
                let mut memo = HashMap::new();
                replay(&u.expr, target, images, &mut memo)
            }
            _ if target == SemifieldKind::Trivial => Ok(SfElem::Trivial),
            _ => {
                target.check(self)?;
                Ok(self.clone())
            }
        }
    }

    /// Fingerprint for candidate matching (`None` for an undefined evaluation).
    pub fn fingerprint(&self) -> Option<u64> {
        match self {
            SfElem::Trivial => Some(0),
            SfElem::Tropical(e) => {
                let mut h: u64 = 1469598103934665603;
                for &x in e {
                    h = (h ^ x as u64).wrapping_mul(1099511628211);
                }
                Some(h)
            }
            SfElem::Universal(u) => u.value.fingerprint().map(|f| f.value()),
        }
    }

    /// JSON-friendly encoding: tropical as exponent array, universal as fraction text.
    pub fn encode(&self, names: &[String]) -> EncodedSf {
        match self {
            SfElem::Trivial => EncodedSf::Text("1".into()),
            SfElem::Tropical(e) => EncodedSf::Exponents(e.clone()),
            SfElem::Universal(u) => EncodedSf::Text(u.value.to_text(names)),
        }
    }

    pub fn to_text(&self, names: &[String]) -> String {
        match self {
            SfElem::Trivial => "1".into(),
            SfElem::Tropical(e) => {
                RationalFn::monomial(e.clone()).to_text(names)
            }
            SfElem::Universal(u) => u.value.to_text(names),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EncodedSf {
    Exponents(Vec<i64>),
    Text(String),
}

fn replay(
    e: &Arc<Expr>,
    target: SemifieldKind,
    images: &[SfElem],
    memo: &mut HashMap<*const Expr, SfElem>,
) -> Result<SfElem, SemifieldError> {
    let key = Arc::as_ptr(e);
    if let Some(v) = memo.get(&key) {
        return Ok(v.clone());
    }
    let v = match e.as_ref() {
        Expr::Gen(i) => images[*i].clone(),
        Expr::Const(c) => target.positive_integer(c),
        Expr::Mul(a, b) => replay(a, target, images, memo)?.mul(&replay(b, target, images, memo)?)?,
        Expr::Inv(a) => replay(a, target, images, memo)?.inv(),
        Expr::Pow(a, k) => replay(a, target, images, memo)?.pow(*k),
        Expr::Add(a, b) => replay(a, target, images, memo)?.oplus(&replay(b, target, images, memo)?)?,
        Expr::EvalPoly(p, args) => {
            let vals = args.iter().map(|a| replay(a, target, images, memo)).collect::<Result<Vec<_>, _>>()?;
            target.eval_poly(p, &vals)?
        }
    };
    memo.insert(key, v.clone());
    Ok(v)
}

impl PartialEq for SfElem {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (SfElem::Trivial, SfElem::Trivial) => true,
            (SfElem::Tropical(a), SfElem::Tropical(b)) => a == b,
            (SfElem::Universal(a), SfElem::Universal(b)) => {
                a.value.nvars() == b.value.nvars() && a.value.equals(&b.value)
            }
            _ => false,
        }
    }
}

impl fmt::Debug for SfElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SfElem::Trivial => write!(f, "1"),
            SfElem::Tropical(e) => write!(f, "trop{e:?}"),
            SfElem::Universal(u) => write!(f, "{:?}", u.value),
        }
    }
}

/// Parses a universal element from fraction text; the construction record is a
/// single opaque evaluation, so only elements whose text is visibly
/// subtraction-free are accepted.
pub fn parse_universal(text: &str, names: &[String]) -> Result<SfElem, SemifieldError> {
    let value = RationalFn::parse(text, names)?;
    let num = value.num();
    let den = value.den();
    if !num.all_coeffs_positive() || !den.all_coeffs_positive() {
        return Err(SemifieldError::NegativeCoefficient { coeff: BigInt::from(-1) });
    }
    let m = names.len();
    let gens: Vec<SfElem> = (0..m).map(|i| SemifieldKind::Universal(m).gen(i)).collect();
    let n = SemifieldKind::Universal(m).eval_poly(&num, &gens)?;
    let d = SemifieldKind::Universal(m).eval_poly(&den, &gens)?;
    n.div(&d)
}

/// The rational number `c` as a universal constant, when positive.
pub fn universal_rational(m: usize, c: &BigRational) -> SfElem {
    let kind = SemifieldKind::Universal(m);
    kind.positive_integer(c.numer()).div(&kind.positive_integer(c.denom())).expect("same kind")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::indexed_names;

    fn trop(v: &[i64]) -> SfElem {
        SfElem::Tropical(v.to_vec())
    }

    #[test]
    fn tropical_ops() {
        assert_eq!(trop(&[2, -1]).mul(&trop(&[1, 0])).unwrap(), trop(&[3, -1]));
        assert_eq!(trop(&[2, -1]).oplus(&trop(&[1, 0])).unwrap(), trop(&[1, -1]));
        let a = trop(&[4, -2]);
        assert_eq!(a.oplus(&a).unwrap(), a);
        assert_eq!(SfElem::Trivial.mul(&SfElem::Trivial).unwrap(), SfElem::Trivial);
        assert!(trop(&[1]).mul(&SfElem::Trivial).is_err());
    }

    #[test]
    fn universal_ops() {
        let u = SemifieldKind::Universal(2);
        let y1 = u.gen(0);
        assert!(y1.mul(&y1.inv()).unwrap().is_one());
        let s = y1.oplus(&u.one()).unwrap();
        let names = indexed_names("y", 2);
        assert_eq!(s.to_text(&names), "y1 + 1");
    }

    #[test]
    fn eval_poly_examples() {
        let p = LaurentPoly::parse("1 + u1", &indexed_names("u", 1)).unwrap();
        let t = SemifieldKind::Tropical(2);
        assert!(t.eval_poly(&p, &[t.gen(0)]).unwrap().is_one());
        assert_eq!(SemifieldKind::Trivial.eval_poly(&p, &[SfElem::Trivial]).unwrap(), SfElem::Trivial);
        let u = SemifieldKind::Universal(2);
        let v = u.eval_poly(&p, &[u.gen(0)]).unwrap();
        assert_eq!(v, u.gen(0).oplus(&u.one()).unwrap());
        let bad = LaurentPoly::parse("1 + -1*u1", &indexed_names("u", 1)).unwrap();
        assert!(matches!(t.eval_poly(&bad, &[t.gen(0)]), Err(SemifieldError::NegativeCoefficient { .. })));
    }

    #[test]
    fn tropicalization_replays_construction() {
        // y2·y1·(1+y1)⁻¹ ↦ e1 + e2 − min(0, e1)
        let u = SemifieldKind::Universal(2);
        let (y1, y2) = (u.gen(0), u.gen(1));
        let elem = y2.mul(&y1).unwrap().div(&y1.oplus(&u.one()).unwrap()).unwrap();
        let t = SemifieldKind::Tropical(2);
        let img = elem.hom(t, &[t.gen(0), t.gen(1)]).unwrap();
        assert_eq!(img, trop(&[1, 1]));
        let img2 = elem.hom(t, &[trop(&[-3, 1]), trop(&[0, 2])]).unwrap();
        assert_eq!(img2, trop(&[0, 3]));
        assert_eq!(elem.hom(SemifieldKind::Trivial, &[SfElem::Trivial, SfElem::Trivial]).unwrap(), SfElem::Trivial);
        assert_eq!(y2.hom(t, &[trop(&[5, 5]), trop(&[7, 1])]).unwrap(), trop(&[7, 1]));
        assert!(elem.hom(t, &[t.gen(0)]).is_err());
    }

    #[test]
    fn parse_universal_checks_positivity() {
        let names = indexed_names("y", 1);
        assert!(parse_universal("(1 + y1)/(y1)", &names).is_ok());
        assert!(parse_universal("1 + -1*y1", &names).is_err());
    }
}
