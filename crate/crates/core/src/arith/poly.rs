//! Multivariate Laurent polynomials with big-integer coefficients.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::fingerprint::{self, Fp};
use super::packed;
use super::ArithError;

/// Exponent vector of a Laurent monomial; ordered lexicographically.
pub type ExponentVector = Vec<i64>;

/// A Laurent polynomial in a fixed number of variables.
///
/// Terms live in a `BTreeMap` keyed by exponent vector, so iteration is in
/// increasing lexicographic order and the last entry is the leading term.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LaurentPoly {
    nvars: usize,
    terms: BTreeMap<ExponentVector, BigInt>,
}

impl LaurentPoly {
    pub fn zero(nvars: usize) -> Self {
        LaurentPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, BigInt::one())
    }

    pub fn constant(nvars: usize, c: impl Into<BigInt>) -> Self {
        Self::monomial(vec![0; nvars], c)
    }

    /// The single variable with index `i`.
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(e, BigInt::one())
    }

    pub fn monomial(exps: ExponentVector, c: impl Into<BigInt>) -> Self {
        let nvars = exps.len();
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        LaurentPoly { nvars, terms }
    }

    /// Sums the given terms, dropping zeros; every exponent vector must have length `nvars`.
    pub fn from_terms<I>(nvars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (ExponentVector, BigInt)>,
    {
        let mut map: BTreeMap<ExponentVector, BigInt> = BTreeMap::new();
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent vector length mismatch");
            accumulate(&mut map, e, c);
        }
        LaurentPoly { nvars, terms: map }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self.terms.iter().all(|(e, c)| c.is_one() && e.iter().all(|&x| x == 0))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&ExponentVector, &BigInt)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exps: &[i64]) -> BigInt {
        self.terms.get(exps).cloned().unwrap_or_default()
    }

    pub fn constant_term(&self) -> BigInt {
        self.coeff(&vec![0; self.nvars])
    }

    /// Leading term in lexicographic order.
    pub fn leading(&self) -> Option<(&ExponentVector, &BigInt)> {
        self.terms.iter().next_back()
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms.keys().all(|e| e.iter().all(|&x| x == 0)))
    }

    /// True when no exponent is negative.
    pub fn is_polynomial(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x >= 0))
    }

    pub fn all_coeffs_positive(&self) -> bool {
        self.terms.values().all(Signed::is_positive)
    }

    /// Componentwise minimum of the exponents (zero vector for the zero polynomial).
    pub fn min_exponents(&self) -> ExponentVector {
        fold_exps(self, i64::min)
    }

    /// Componentwise maximum of the exponents (zero vector for the zero polynomial).
    pub fn max_exponents(&self) -> ExponentVector {
        fold_exps(self, i64::max)
    }

    /// Gcd of the coefficients (zero for the zero polynomial).
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in self.terms.values() {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, ArithError> {
        same_context(self, other)?;
        let (big, small) = if self.terms.len() >= other.terms.len() { (self, other) } else { (other, self) };
        let mut terms = big.terms.clone();
        for (e, c) in &small.terms {
            accumulate(&mut terms, e.clone(), c.clone());
        }
        Ok(LaurentPoly { nvars: self.nvars, terms })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, ArithError> {
        self.checked_add(&-other)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, ArithError> {
        same_context(self, other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.nvars));
        }
        if self.terms.len() == 1 || other.terms.len() == 1 {
            let (mono, poly) = if self.terms.len() == 1 { (self, other) } else { (other, self) };
            let (me, mc) = mono.terms.iter().next().unwrap();
            return Ok(poly.mul_term(me, mc));
        }
        if let Some(terms) = packed::mul(&self.terms, &other.terms) {
            return Ok(LaurentPoly { nvars: self.nvars, terms });
        }
        let mut acc: HashMap<ExponentVector, BigInt> =
            HashMap::with_capacity((self.terms.len() + other.terms.len()) * 4);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: ExponentVector = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                let c = ca * cb;
                match acc.get_mut(&e) {
                    Some(v) => *v += c,
                    None => {
                        acc.insert(e, c);
                    }
                }
            }
        }
        let terms = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Ok(LaurentPoly { nvars: self.nvars, terms })
    }

    /// Multiplies by the monomial `c·x^e`.
    pub fn mul_term(&self, e: &[i64], c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        let terms = self
            .terms
            .iter()
            .map(|(k, v)| (k.iter().zip(e).map(|(a, b)| a + b).collect(), v * c))
            .collect();
        LaurentPoly { nvars: self.nvars, terms }
    }

    pub fn shift(&self, e: &[i64]) -> Self {
        self.mul_term(e, &BigInt::one())
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        let terms = self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect();
        LaurentPoly { nvars: self.nvars, terms }
    }

    /// Exact division of every coefficient by `c`; `None` if some coefficient is not a multiple.
    pub fn div_scalar(&self, c: &BigInt) -> Option<Self> {
        let mut terms = BTreeMap::new();
        for (k, v) in &self.terms {
            let (q, r) = v.div_rem(c);
            if !r.is_zero() {
                return None;
            }
            terms.insert(k.clone(), q);
        }
        Some(LaurentPoly { nvars: self.nvars, terms })
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut result = Self::one(self.nvars);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = &result * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Exact quotient `self / divisor` in the Laurent ring, or `None` if it does not exist.
    ///
    /// Monomial content is stripped from both sides and the remaining polynomial
    /// division runs on lexicographic leading terms. The quotient's exponents are
    /// confined to the box allowed by per-variable degrees, which bounds the loop.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        assert_eq!(self.nvars, divisor.nvars, "variable-context mismatch");
        if divisor.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(self.clone());
        }
        if divisor.terms.len() == 1 {
            let (e, c) = divisor.terms.iter().next().unwrap();
            let neg: Vec<i64> = e.iter().map(|x| -x).collect();
            return self.div_scalar(c).map(|p| p.shift(&neg));
        }
        if self.terms.len() < divisor.terms.len() {
            return None;
        }
        let fa = self.min_exponents();
        let ga = divisor.min_exponents();
        let f_hi: Vec<i64> = self.max_exponents().iter().zip(&fa).map(|(a, b)| a - b).collect();
        let g_hi: Vec<i64> = divisor.max_exponents().iter().zip(&ga).map(|(a, b)| a - b).collect();
        let bound: Vec<i64> = f_hi.iter().zip(&g_hi).map(|(f, g)| f - g).collect();
        if bound.iter().any(|&b| b < 0) {
            return None;
        }
        let f0 = self.shift(&fa.iter().map(|x| -x).collect::<Vec<_>>());
        let g0 = divisor.shift(&ga.iter().map(|x| -x).collect::<Vec<_>>());
        let (g_lead_e, g_lead_c) = g0.leading().map(|(e, c)| (e.clone(), c.clone())).unwrap();
        // Cheap necessary conditions on the extreme terms.
        let (f_lead_e, f_lead_c) = f0.leading().unwrap();
        let (f_low_e, f_low_c) = f0.terms.iter().next().unwrap();
        let (g_low_e, g_low_c) = g0.terms.iter().next().unwrap();
        if !f_lead_c.is_multiple_of(&g_lead_c) || !f_low_c.is_multiple_of(g_low_c) {
            return None;
        }
        if f_lead_e.iter().zip(&g_lead_e).any(|(a, b)| a < b)
            || f_low_e.iter().zip(g_low_e).any(|(a, b)| a < b)
        {
            return None;
        }

        let shift: Vec<i64> = fa.iter().zip(&ga).map(|(a, b)| a - b).collect();
        if let Some(quot) = packed::div_exact(&f0.terms, &g0.terms, &bound) {
            return quot.map(|terms| LaurentPoly { nvars: self.nvars, terms }.shift(&shift));
        }
        let mut rem = f0.terms;
        let mut quot: BTreeMap<ExponentVector, BigInt> = BTreeMap::new();
        while let Some((e, c)) = rem.iter().next_back() {
            let d: ExponentVector = e.iter().zip(&g_lead_e).map(|(a, b)| a - b).collect();
            if d.iter().zip(&bound).any(|(&x, &b)| x < 0 || x > b) {
                return None;
            }
            let (q, r) = c.div_rem(&g_lead_c);
            if !r.is_zero() {
                return None;
            }
            for (ge, gc) in &g0.terms {
                let k: ExponentVector = ge.iter().zip(&d).map(|(a, b)| a + b).collect();
                accumulate(&mut rem, k, -(&q * gc));
            }
            quot.insert(d, q);
        }
        Some(LaurentPoly { nvars: self.nvars, terms: quot }.shift(&shift))
    }

    /// Per-variable maximal exponent.
    pub fn degree_in(&self, var: usize) -> Option<i64> {
        self.terms.keys().map(|e| e[var]).max()
    }

    /// Reindexes variables: variable `i` becomes variable `map[i]` in a context of `nvars` variables.
    pub fn remap(&self, map: &[usize], nvars: usize) -> Self {
        assert_eq!(map.len(), self.nvars);
        let terms = self.terms.iter().map(|(e, c)| {
            let mut out = vec![0; nvars];
            for (i, &x) in e.iter().enumerate() {
                out[map[i]] += x;
            }
            (out, c.clone())
        });
        Self::from_terms(nvars, terms)
    }

    /// Embeds into a larger context, placing the variables at `offset..offset+nvars`.
    pub fn embed(&self, offset: usize, nvars: usize) -> Self {
        let map: Vec<usize> = (0..self.nvars).map(|i| offset + i).collect();
        self.remap(&map, nvars)
    }

    /// Substitutes a Laurent monomial `coeffs[i]·x^{images[i]}` for each variable `i`.
    ///
    /// Fast path for the common case where every substituted value is a monomial
    /// (ŷ at the initial seed, tropical coefficients).
    pub fn substitute_monomials(&self, images: &[ExponentVector], nvars: usize) -> Self {
        assert_eq!(images.len(), self.nvars, "arity mismatch");
        let terms = self.terms.iter().map(|(e, c)| {
            let mut out = vec![0i64; nvars];
            for (i, &a) in e.iter().enumerate() {
                if a != 0 {
                    for (o, &b) in out.iter_mut().zip(&images[i]) {
                        *o += a * b;
                    }
                }
            }
            (out, c.clone())
        });
        Self::from_terms(nvars, terms)
    }

    /// Sets the listed variables to the given integer values (other variables are kept).
    pub fn specialize(&self, values: &[(usize, BigInt)]) -> Self {
        let terms = self.terms.iter().map(|(e, c)| {
            let mut e2 = e.clone();
            let mut c2 = c.clone();
            for (v, val) in values {
                let a = e[*v];
                assert!(a >= 0, "specialize requires nonnegative exponents");
                if a != 0 {
                    c2 *= num_traits::pow(val.clone(), a as usize);
                }
                e2[*v] = 0;
            }
            (e2, c2)
        });
        Self::from_terms(self.nvars, terms)
    }

    /// Exact evaluation at a rational point.
    pub fn eval(&self, point: &[BigRational]) -> Result<BigRational, ArithError> {
        assert_eq!(point.len(), self.nvars, "arity mismatch");
        let mut acc = BigRational::zero();
        for (e, c) in &self.terms {
            let mut t = BigRational::from_integer(c.clone());
            for (x, &a) in point.iter().zip(e) {
                if a == 0 {
                    continue;
                }
                if a < 0 && x.is_zero() {
                    return Err(ArithError::ZeroDenominator);
                }
                t *= num_traits::pow::Pow::pow(x, a as i32);
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Value modulo the fingerprint prime at `point` (all point values nonzero).
    pub fn eval_mod(&self, point: &[Fp]) -> Fp {
        let mut acc = Fp::zero();
        for (e, c) in &self.terms {
            let mut t = Fp::from_bigint(c);
            for (x, &a) in point.iter().zip(e) {
                if a != 0 {
                    t = t * x.pow_signed(a);
                }
            }
            acc = acc + t;
        }
        acc
    }

    /// Canonical text: terms in decreasing lexicographic order, each written
    /// `c*name^e*...` with unit coefficients and exponents omitted, negative
    /// terms joined with ` - `; the zero polynomial is `0`.
    pub fn to_text(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (idx, (e, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            let abs = c.abs();
            if idx == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let mut factors = Vec::new();
            if !abs.is_one() || e.iter().all(|&a| a == 0) {
                factors.push(abs.to_string());
            }
            for (i, &a) in e.iter().enumerate() {
                match a {
                    0 => {}
                    1 => factors.push(names[i].clone()),
                    _ => factors.push(format!("{}^{a}", names[i])),
                }
            }
            out.push_str(&factors.join("*"));
        }
        out
    }

    /// Parses the canonical text form (also accepts omitted coefficients and exponents).
    pub fn parse(text: &str, names: &[String]) -> Result<Self, ArithError> {
        let nvars = names.len();
        let t = text.trim();
        if t == "0" {
            return Ok(Self::zero(nvars));
        }
        let normalized = t.replace(" - ", " + -");
        let mut terms = Vec::new();
        for raw in normalized.split('+') {
            let raw = raw.trim();
            if raw.is_empty() {
                return Err(ArithError::Parse(format!("empty term in `{text}`")));
            }
            let mut coeff = BigInt::one();
            let mut exps = vec![0i64; nvars];
            for (idx, factor) in raw.split('*').enumerate() {
                let factor = factor.trim();
                if idx == 0 {
                    if let Ok(c) = factor.parse::<BigInt>() {
                        coeff = c;
                        continue;
                    }
                }
                let (name, sign) = match factor.strip_prefix('-') {
                    Some(rest) if idx == 0 => (rest, -1),
                    _ => (factor, 1),
                };
                coeff *= sign;
                let (var, exp) = match name.split_once('^') {
                    Some((v, e)) => (
                        v,
                        e.parse::<i64>().map_err(|_| ArithError::Parse(format!("bad exponent `{e}`")))?,
                    ),
                    None => (name, 1),
                };
                let i = names
                    .iter()
                    .position(|n| n == var)
                    .ok_or_else(|| ArithError::Parse(format!("unknown variable `{var}`")))?;
                exps[i] += exp;
            }
            terms.push((exps, coeff));
        }
        Ok(Self::from_terms(nvars, terms))
    }

    /// Fingerprint modulo the fixed prime at the canonical pseudo-random point.
    pub fn fingerprint(&self) -> Fp {
        self.eval_mod(&fingerprint::point(self.nvars))
    }
}

fn fold_exps(p: &LaurentPoly, f: fn(i64, i64) -> i64) -> ExponentVector {
    let mut it = p.terms.keys();
    let Some(first) = it.next() else {
        return vec![0; p.nvars];
    };
    let mut acc = first.clone();
    for e in it {
        for (a, &b) in acc.iter_mut().zip(e) {
            *a = f(*a, b);
        }
    }
    acc
}

fn accumulate(map: &mut BTreeMap<ExponentVector, BigInt>, e: ExponentVector, c: BigInt) {
    use std::collections::btree_map::Entry;
    if c.is_zero() {
        return;
    }
    match map.entry(e) {
        Entry::Vacant(v) => {
            v.insert(c);
        }
        Entry::Occupied(mut o) => {
            *o.get_mut() += c;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

fn same_context(a: &LaurentPoly, b: &LaurentPoly) -> Result<(), ArithError> {
    if a.nvars != b.nvars {
        return Err(ArithError::ContextMismatch { left: a.nvars, right: b.nvars });
    }
    Ok(())
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.checked_add(rhs).expect("variable-context mismatch")
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.checked_sub(rhs).expect("variable-context mismatch")
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.checked_mul(rhs).expect("variable-context mismatch")
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        let terms = self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect();
        LaurentPoly { nvars: self.nvars, terms }
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (1..=self.nvars).map(|i| format!("t{i}")).collect();
        write!(f, "{}", self.to_text(&names))
    }
}

/// Names `prefix1 … prefixN`.
pub fn indexed_names(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names() -> Vec<String> {
        indexed_names("x", 2)
    }

    fn p(s: &str) -> LaurentPoly {
        LaurentPoly::parse(s, &names()).unwrap()
    }

    #[test]
    fn add_examples() {
        assert_eq!(&p("x2 + 1") + &p("x1^-1"), p("x2 + 1 + x1^-1"));
        assert_eq!(&p("x2 + 1") + &LaurentPoly::zero(2), p("x2 + 1"));
        assert!((&p("x1") + &p("-1*x1")).is_zero());
    }

    #[test]
    fn mul_examples() {
        assert_eq!(&p("x1^-1") * &p("x2 + 1"), p("x1^-1*x2 + x1^-1"));
        assert_eq!(&p("x2 + 3") * &LaurentPoly::one(2), p("x2 + 3"));
        assert_eq!(&p("1 + x1") * &p("1 + x1"), p("1 + 2*x1 + x1^2"));
    }

    #[test]
    fn context_mismatch_is_an_error() {
        let a = LaurentPoly::one(2);
        let b = LaurentPoly::one(3);
        assert!(matches!(a.checked_add(&b), Err(ArithError::ContextMismatch { .. })));
        assert!(a.checked_mul(&b).is_err());
    }

    #[test]
    fn text_round_trip() {
        let q = p("-3*x1^-2*x2 + 7 + x2^5");
        let text = q.to_text(&names());
        assert_eq!(text, "x2^5 + 7 - 3*x1^-2*x2");
        assert_eq!(LaurentPoly::parse(&text, &names()).unwrap(), q);
        assert_eq!(LaurentPoly::zero(2).to_text(&names()), "0");
    }

    #[test]
    fn exact_division() {
        let a = p("1 + x1");
        let b = p("1 + x1*x2 + x2^2");
        let prod = &a * &b;
        assert_eq!(prod.div_exact(&a).unwrap(), b);
        assert_eq!(prod.shift(&[-3, 1]).div_exact(&b.shift(&[1, 1])).unwrap(), a.shift(&[-4, 0]));
        assert!(prod.div_exact(&p("2 + x1")).is_none());
        assert!(p("x1 + 1").div_exact(&p("x1 + 2")).is_none());
        assert_eq!(p("2*x1 + 4").div_exact(&p("2")).unwrap(), p("x1 + 2"));
    }

    #[test]
    fn pow_and_eval() {
        let q = p("x1 + x2^-1");
        let cube = q.pow(3);
        let pt = [BigRational::from_integer(2.into()), BigRational::new(1.into(), 3.into())];
        assert_eq!(cube.eval(&pt).unwrap(), BigRational::from_integer(125.into()));
    }
}
