//! Rational functions kept as products of polynomial factors.
//!
//! A value is `scale · x^monomial · ∏ fᵢ^eᵢ` with integer exponents `eᵢ ≠ 0`.
//! Every factor `fᵢ` is a non-constant polynomial with no monomial content,
//! coprime integer coefficients and a positive leading coefficient.
//!
//! No gcd is ever computed. Instead, whenever two factors of opposite sign
//! meet, one is trial-divided by the other, and the new factor created by a
//! sum is trial-divided by every factor of the summands. In cluster-pattern
//! computations this keeps numerators and denominators close to lowest terms.
//! Equality never relies on that: it is decided by cross-multiplication.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::fingerprint::{self, Fp};
use super::poly::{ExponentVector, LaurentPoly};
use super::ArithError;

#[derive(Clone)]
struct Factor {
    poly: LaurentPoly,
    exp: i64,
    fp: Fp,
}

/// An element of the field of fractions of a Laurent polynomial ring.
#[derive(Clone)]
pub struct RationalFn {
    nvars: usize,
    scale: BigRational,
    monomial: ExponentVector,
    factors: Vec<Factor>,
}

/// Splits a nonzero polynomial into signed content, monomial content and a
/// normalized factor (absent when the polynomial is a monomial).
fn normalize(p: &LaurentPoly) -> (BigInt, ExponentVector, Option<LaurentPoly>) {
    debug_assert!(!p.is_zero());
    let mono = p.min_exponents();
    let mut content = p.content();
    if p.leading().map(|(_, c)| c.is_negative()).unwrap_or(false) {
        content = -content;
    }
    if p.is_monomial() {
        return (content, mono, None);
    }
    let neg: Vec<i64> = mono.iter().map(|x| -x).collect();
    let prim = p.shift(&neg).div_scalar(&content).expect("content divides every coefficient");
    (content, mono, Some(prim))
}

fn add_exps(a: &mut [i64], b: &[i64], k: i64) {
    for (x, y) in a.iter_mut().zip(b) {
        *x += k * y;
    }
}

impl RationalFn {
    pub fn zero(nvars: usize) -> Self {
        RationalFn { nvars, scale: BigRational::zero(), monomial: vec![0; nvars], factors: Vec::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, BigRational::one())
    }

    pub fn constant(nvars: usize, c: BigRational) -> Self {
        RationalFn { nvars, scale: c, monomial: vec![0; nvars], factors: Vec::new() }
    }

    pub fn integer(nvars: usize, c: impl Into<BigInt>) -> Self {
        Self::constant(nvars, BigRational::from_integer(c.into()))
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut m = vec![0; nvars];
        m[i] = 1;
        Self::monomial(m)
    }

    /// The Laurent monomial `x^exps` with coefficient 1.
    pub fn monomial(exps: ExponentVector) -> Self {
        RationalFn { nvars: exps.len(), scale: BigRational::one(), monomial: exps, factors: Vec::new() }
    }

    pub fn from_poly(p: &LaurentPoly) -> Self {
        let nvars = p.nvars();
        if p.is_zero() {
            return Self::zero(nvars);
        }
        let (c, mono, prim) = normalize(p);
        let mut r = RationalFn { nvars, scale: BigRational::from_integer(c), monomial: mono, factors: Vec::new() };
        if let Some(f) = prim {
            let fp = f.fingerprint();
            r.factors.push(Factor { poly: f, exp: 1, fp });
        }
        r
    }

    /// `num / den`; fails when `den` is zero.
    pub fn from_parts(num: &LaurentPoly, den: &LaurentPoly) -> Result<Self, ArithError> {
        if num.nvars() != den.nvars() {
            return Err(ArithError::ContextMismatch { left: num.nvars(), right: den.nvars() });
        }
        Ok(Self::from_poly(num).mul(&Self::from_poly(den).inv()?))
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.scale.is_zero()
    }

    /// True only for the canonical representation of 1 (no cross-multiplication).
    pub fn is_trivially_one(&self) -> bool {
        self.scale.is_one() && self.factors.is_empty() && self.monomial.iter().all(|&e| e == 0)
    }

    /// Number of polynomial factors currently held (a size measure).
    pub fn factor_count(&self) -> usize {
        self.factors.len()
    }

    /// Total number of terms across all factors (a size measure).
    pub fn term_count(&self) -> usize {
        self.factors.iter().map(|f| f.poly.len()).sum::<usize>() + 1
    }

    fn push_factor(&mut self, poly: LaurentPoly, exp: i64, fp: Fp) -> usize {
        if exp == 0 {
            return usize::MAX;
        }
        if let Some(i) = self.factors.iter().position(|f| f.fp == fp && f.poly == poly) {
            self.factors[i].exp += exp;
            if self.factors[i].exp == 0 {
                self.factors.remove(i);
                return usize::MAX;
            }
            return i;
        }
        self.factors.push(Factor { poly, exp, fp });
        self.factors.len() - 1
    }

    /// Multiplies in `p^exp` for an arbitrary nonzero polynomial `p`.
    fn absorb_poly(&mut self, p: &LaurentPoly, exp: i64) {
        let (c, mono, prim) = normalize(p);
        self.scale *= pow_rational(&BigRational::from_integer(c), exp);
        add_exps(&mut self.monomial, &mono, exp);
        if let Some(f) = prim {
            let fp = f.fingerprint();
            self.push_factor(f, exp, fp);
        }
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, ArithError> {
        if self.nvars != other.nvars {
            return Err(ArithError::ContextMismatch { left: self.nvars, right: other.nvars });
        }
        Ok(self.mul(other))
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars, "variable-context mismatch");
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.nvars);
        }
        let mut r = self.clone();
        r.scale *= &other.scale;
        add_exps(&mut r.monomial, &other.monomial, 1);
        let mut tags: Vec<u8> = vec![0; r.factors.len()];
        for f in &other.factors {
            let before = r.factors.len();
            let idx = r.push_factor(f.poly.clone(), f.exp, f.fp);
            if idx == usize::MAX {
                // A factor cancelled completely; indices shifted.
                tags = vec![2; r.factors.len()];
            } else if idx == before {
                tags.push(1);
            } else {
                tags[idx] = 2;
            }
        }
        r.reduce(tags);
        r
    }

    pub fn inv(&self) -> Result<Self, ArithError> {
        if self.is_zero() {
            return Err(ArithError::ZeroDenominator);
        }
        let mut r = self.clone();
        r.scale = self.scale.recip();
        for e in r.monomial.iter_mut() {
            *e = -*e;
        }
        for f in r.factors.iter_mut() {
            f.exp = -f.exp;
        }
        Ok(r)
    }

    pub fn div(&self, other: &Self) -> Result<Self, ArithError> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, k: i64) -> Result<Self, ArithError> {
        if k == 0 {
            return Ok(Self::one(self.nvars));
        }
        if self.is_zero() {
            return if k > 0 { Ok(self.clone()) } else { Err(ArithError::ZeroDenominator) };
        }
        let mut r = self.clone();
        r.scale = pow_rational(&self.scale, k);
        for e in r.monomial.iter_mut() {
            *e *= k;
        }
        for f in r.factors.iter_mut() {
            f.exp *= k;
        }
        Ok(r)
    }

    pub fn neg(&self) -> Self {
        let mut r = self.clone();
        r.scale = -r.scale;
        r
    }

    pub fn scale_by(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        let mut r = self.clone();
        r.scale *= c;
        r
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::sum(self.nvars, [self, other])
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::sum(self.nvars, [self, &other.neg()])
    }

    /// Sum of several values, extracting their common part first.
    pub fn sum<'a, I>(nvars: usize, items: I) -> Self
    where
        I: IntoIterator<Item = &'a RationalFn>,
    {
        let items: Vec<&RationalFn> = items.into_iter().filter(|r| !r.is_zero()).collect();
        for it in &items {
            assert_eq!(it.nvars, nvars, "variable-context mismatch");
        }
        match items.len() {
            0 => return Self::zero(nvars),
            1 => return items[0].clone(),
            _ => {}
        }
        // Distinct factors across all summands, with per-summand exponents.
        let mut distinct: Vec<(LaurentPoly, Fp)> = Vec::new();
        let mut exps: Vec<Vec<i64>> = Vec::with_capacity(items.len());
        for it in &items {
            let mut row = vec![0i64; distinct.len()];
            for f in &it.factors {
                match distinct.iter().position(|(p, fp)| *fp == f.fp && *p == f.poly) {
                    Some(i) => row[i] += f.exp,
                    None => {
                        distinct.push((f.poly.clone(), f.fp));
                        row.push(f.exp);
                    }
                }
            }
            exps.push(row);
        }
        for row in exps.iter_mut() {
            row.resize(distinct.len(), 0);
        }
        let min_e: Vec<i64> =
            (0..distinct.len()).map(|i| exps.iter().map(|r| r[i]).min().unwrap()).collect();
        let mut mono_min = items[0].monomial.clone();
        for it in &items[1..] {
            for (a, &b) in mono_min.iter_mut().zip(&it.monomial) {
                *a = (*a).min(b);
            }
        }
        let lcm = items.iter().fold(BigInt::one(), |acc, it| acc.lcm(it.scale.denom()));

        let mut total = LaurentPoly::zero(nvars);
        for (it, row) in items.iter().zip(&exps) {
            let coeff = (&it.scale * BigRational::from_integer(lcm.clone())).to_integer();
            let shift: Vec<i64> = it.monomial.iter().zip(&mono_min).map(|(a, b)| a - b).collect();
            let mut term = LaurentPoly::monomial(shift, coeff);
            for (i, (p, _)) in distinct.iter().enumerate() {
                let d = row[i] - min_e[i];
                if d > 0 {
                    term = &term * &p.pow(d as u32);
                }
            }
            total = &total + &term;
        }
        if total.is_zero() {
            return Self::zero(nvars);
        }

        let mut r = RationalFn {
            nvars,
            scale: BigRational::new(BigInt::one(), lcm),
            monomial: mono_min,
            factors: Vec::new(),
        };
        let mut tags = Vec::new();
        for (i, (p, fp)) in distinct.iter().enumerate() {
            if min_e[i] != 0 {
                r.factors.push(Factor { poly: p.clone(), exp: min_e[i], fp: *fp });
                tags.push(0);
            }
        }
        let (c, mono, prim) = normalize(&total);
        r.scale *= BigRational::from_integer(c);
        add_exps(&mut r.monomial, &mono, 1);
        if let Some(mut rest) = prim {
            // Split the new factor by every factor already known to the summands.
            for (p, fp) in &distinct {
                while rest.len() >= p.len() && !rest.is_constant() {
                    match rest.div_exact(p) {
                        Some(q) => {
                            r.push_or_tag(p.clone(), 1, *fp, &mut tags);
                            rest = q;
                        }
                        None => break,
                    }
                }
            }
            if !rest.is_constant() {
                let (c2, m2, prim2) = normalize(&rest);
                r.scale *= BigRational::from_integer(c2);
                add_exps(&mut r.monomial, &m2, 1);
                if let Some(f) = prim2 {
                    let fp = f.fingerprint();
                    r.push_or_tag(f, 1, fp, &mut tags);
                }
            } else {
                r.scale *= BigRational::from_integer(rest.constant_term());
            }
        }
        r.reduce(tags);
        r
    }

    fn push_or_tag(&mut self, poly: LaurentPoly, exp: i64, fp: Fp, tags: &mut Vec<u8>) {
        let before = self.factors.len();
        let idx = self.push_factor(poly, exp, fp);
        if idx == usize::MAX {
            *tags = vec![2; self.factors.len()];
        } else if idx == before {
            tags.push(2);
        } else {
            tags[idx] = 2;
        }
    }

    /// Cancels factors of opposite sign by trial division.
    ///
    /// Only pairs whose tags differ (or where either tag is 2) are tried:
    /// factors carrying the same tag 0 or 1 came from an already reduced value.
    fn reduce(&mut self, mut tags: Vec<u8>) {
        debug_assert_eq!(tags.len(), self.factors.len());
        'outer: loop {
            let k = self.factors.len();
            for i in 0..k {
                for j in 0..k {
                    if i == j {
                        continue;
                    }
                    if tags[i] == tags[j] && tags[i] != 2 {
                        continue;
                    }
                    let (ei, ej) = (self.factors[i].exp, self.factors[j].exp);
                    if (ei > 0) == (ej > 0) {
                        continue;
                    }
                    let (fi, fj) = (&self.factors[i].poly, &self.factors[j].poly);
                    if fj.len() > fi.len() {
                        continue;
                    }
                    // fi = fj · q  ⇒  fi^ei = fj^ei · q^ei
                    if let Some(q) = fi.div_exact(fj) {
                        let fj_poly = fj.clone();
                        let fj_fp = self.factors[j].fp;
                        self.factors.remove(i);
                        tags.remove(i);
                        self.push_or_tag(fj_poly, ei, fj_fp, &mut tags);
                        if !q.is_constant() {
                            let (c, m, prim) = normalize(&q);
                            self.scale *= pow_rational(&BigRational::from_integer(c), ei);
                            add_exps(&mut self.monomial, &m, ei);
                            if let Some(f) = prim {
                                let fp = f.fingerprint();
                                self.push_or_tag(f, ei, fp, &mut tags);
                            }
                        } else {
                            self.scale *= pow_rational(&BigRational::from_integer(q.constant_term()), ei);
                        }
                        if tags.len() != self.factors.len() {
                            tags = vec![2; self.factors.len()];
                        }
                        continue 'outer;
                    }
                }
            }
            break;
        }
    }

    /// Expanded numerator: `scale_num · x^monomial · ∏_{e>0} f^e` (may carry negative exponents).
    pub fn num(&self) -> LaurentPoly {
        if self.is_zero() {
            return LaurentPoly::zero(self.nvars);
        }
        let mut p = LaurentPoly::monomial(self.monomial.clone(), self.scale.numer().clone());
        for f in self.factors.iter().filter(|f| f.exp > 0) {
            p = &p * &f.poly.pow(f.exp as u32);
        }
        p
    }

    /// Expanded denominator: `scale_den · ∏_{e<0} f^{-e}` (a genuine polynomial).
    pub fn den(&self) -> LaurentPoly {
        let mut p = LaurentPoly::constant(self.nvars, self.scale.denom().clone());
        for f in self.factors.iter().filter(|f| f.exp < 0) {
            p = &p * &f.poly.pow((-f.exp) as u32);
        }
        p
    }

    /// The value as a Laurent polynomial, when the representation has no denominator.
    pub fn as_laurent(&self) -> Option<LaurentPoly> {
        (self.scale.is_integer() && self.factors.iter().all(|f| f.exp > 0)).then(|| self.num())
    }

    /// Whether the held denominator is trivial (a sufficient test for being Laurent).
    pub fn is_laurent(&self) -> bool {
        self.scale.is_integer() && self.factors.iter().all(|f| f.exp > 0)
    }

    /// Equality as rational functions, decided by cross-multiplication
    /// after cancelling shared factors.
    pub fn equals(&self, other: &Self) -> bool {
        assert_eq!(self.nvars, other.nvars, "variable-context mismatch");
        match (self.is_zero(), other.is_zero()) {
            (true, true) => return true,
            (true, false) | (false, true) => return false,
            _ => {}
        }
        if let (Some(a), Some(b)) = (self.fingerprint(), other.fingerprint()) {
            if a != b {
                return false;
            }
        }
        if self.same_form(other) {
            return true;
        }
        let q = self.mul(&other.inv().expect("nonzero"));
        if q.is_trivially_one() {
            return true;
        }
        let mut lhs_mono = vec![0i64; q.nvars];
        let mut rhs_mono = vec![0i64; q.nvars];
        for (i, &e) in q.monomial.iter().enumerate() {
            if e > 0 {
                lhs_mono[i] = e;
            } else {
                rhs_mono[i] = -e;
            }
        }
        let mut lhs = LaurentPoly::monomial(lhs_mono, q.scale.numer().clone());
        let mut rhs = LaurentPoly::monomial(rhs_mono, q.scale.denom().clone());
        for f in &q.factors {
            if f.exp > 0 {
                lhs = &lhs * &f.poly.pow(f.exp as u32);
            } else {
                rhs = &rhs * &f.poly.pow((-f.exp) as u32);
            }
        }
        lhs == rhs
    }

    /// Identical stored factorizations, up to the order of the factors.
    fn same_form(&self, other: &Self) -> bool {
        if self.scale != other.scale || self.monomial != other.monomial || self.factors.len() != other.factors.len() {
            return false;
        }
        let mut used = vec![false; other.factors.len()];
        self.factors.iter().all(|f| {
            let hit = other.factors.iter().enumerate().position(|(j, g)| {
                !used[j] && f.exp == g.exp && f.fp == g.fp && f.poly == g.poly
            });
            hit.map(|j| used[j] = true).is_some()
        })
    }

    /// Value at the canonical fingerprint point; `None` if a denominator vanishes there.
    pub fn fingerprint(&self) -> Option<Fp> {
        if self.is_zero() {
            return Some(Fp::zero());
        }
        let pt = fingerprint::point(self.nvars);
        let mut v = Fp::from_bigint(self.scale.numer()) * Fp::from_bigint(self.scale.denom()).inv()?;
        for (x, &e) in pt.iter().zip(&self.monomial) {
            if e != 0 {
                v = v * x.pow_signed(e);
            }
        }
        for f in &self.factors {
            if f.exp > 0 {
                v = v * f.fp.pow(f.exp as u64);
            } else {
                v = v * f.fp.inv()?.pow((-f.exp) as u64);
            }
        }
        Some(v)
    }

    /// Exact value at a rational point.
    pub fn eval(&self, point: &[BigRational]) -> Result<BigRational, ArithError> {
        if self.is_zero() {
            return Ok(BigRational::zero());
        }
        let mut v = self.scale.clone();
        v *= LaurentPoly::monomial(self.monomial.clone(), 1).eval(point)?;
        for f in &self.factors {
            let x = f.poly.eval(point)?;
            if f.exp < 0 && x.is_zero() {
                return Err(ArithError::ZeroDenominator);
            }
            v *= pow_rational(&x, f.exp);
        }
        Ok(v)
    }

    /// Reindexes variables: variable `i` becomes `map[i]` in a context of `nvars` variables.
    /// The map must be injective.
    pub fn remap(&self, map: &[usize], nvars: usize) -> Self {
        let mut r = RationalFn {
            nvars,
            scale: self.scale.clone(),
            monomial: vec![0; nvars],
            factors: Vec::new(),
        };
        if self.is_zero() {
            return Self::zero(nvars);
        }
        for (i, &e) in self.monomial.iter().enumerate() {
            r.monomial[map[i]] += e;
        }
        for f in &self.factors {
            r.absorb_poly(&f.poly.remap(map, nvars), f.exp);
        }
        r
    }

    /// Embeds into a larger context, placing the variables at `offset..offset+nvars`.
    pub fn embed(&self, offset: usize, nvars: usize) -> Self {
        let map: Vec<usize> = (0..self.nvars).map(|i| offset + i).collect();
        self.remap(&map, nvars)
    }

    /// Whether every factor and the scale have positive coefficients, i.e. the
    /// held representation is visibly subtraction-free.
    pub fn is_visibly_positive(&self) -> bool {
        self.scale.is_positive() && self.factors.iter().all(|f| f.poly.all_coeffs_positive())
    }

    /// `num` when the denominator is 1, otherwise `(num)/(den)`. A Laurent
    /// polynomial of several terms with negative exponents is written over a monomial.
    pub fn to_text(&self, names: &[String]) -> String {
        let mut den = self.den();
        let mut num = self.num();
        if den.is_one() && num.len() > 1 {
            let lift: Vec<i64> = num.min_exponents().iter().map(|&e| (-e).max(0)).collect();
            if lift.iter().any(|&e| e > 0) {
                num = num.shift(&lift);
                den = LaurentPoly::monomial(lift, 1);
            }
        }
        if den.is_one() {
            num.to_text(names)
        } else {
            format!("({})/({})", num.to_text(names), den.to_text(names))
        }
    }

    pub fn parse(text: &str, names: &[String]) -> Result<Self, ArithError> {
        let t = text.trim();
        if let Some(rest) = t.strip_prefix('(') {
            if let Some(mid) = rest.find(")/(") {
                let num = &rest[..mid];
                let den = rest[mid + 3..]
                    .strip_suffix(')')
                    .ok_or_else(|| ArithError::Parse(format!("unbalanced fraction `{text}`")))?;
                return Self::from_parts(&LaurentPoly::parse(num, names)?, &LaurentPoly::parse(den, names)?);
            }
        }
        Ok(Self::from_poly(&LaurentPoly::parse(t, names)?))
    }
}

/// Substitutes `values[i]` for variable `i` of `p`.
///
/// All values must share one context. The result is assembled over a common
/// denominator, so only one large polynomial is expanded.
pub fn substitute(p: &LaurentPoly, values: &[RationalFn]) -> Result<RationalFn, ArithError> {
    if values.len() < p.nvars() {
        return Err(ArithError::UnassignedVariable(values.len()));
    }
    let Some(first) = values.first() else {
        return Ok(RationalFn::from_poly(p));
    };
    let nvars = first.nvars;
    for v in values {
        if v.nvars != nvars {
            return Err(ArithError::ContextMismatch { left: nvars, right: v.nvars });
        }
    }
    if p.is_zero() {
        return Ok(RationalFn::zero(nvars));
    }
    let k = p.nvars();
    let mut lo = vec![i64::MAX; k];
    let mut hi = vec![i64::MIN; k];
    for (e, _) in p.terms() {
        for j in 0..k {
            lo[j] = lo[j].min(e[j]);
            hi[j] = hi[j].max(e[j]);
        }
    }
    for j in 0..k {
        if values[j].is_zero() && lo[j] < 0 {
            return Err(ArithError::ZeroDenominator);
        }
    }

    // Monomial fast path.
    if values[..k].iter().all(|v| v.factors.is_empty() && v.scale.is_one()) {
        let images: Vec<ExponentVector> = values[..k].iter().map(|v| v.monomial.clone()).collect();
        return Ok(RationalFn::from_poly(&p.substitute_monomials(&images, nvars)));
    }

    let nums: Vec<LaurentPoly> = values[..k].iter().map(RationalFn::num).collect();
    let dens: Vec<LaurentPoly> = values[..k].iter().map(RationalFn::den).collect();
    let mut cache: Vec<Vec<Option<LaurentPoly>>> = vec![Vec::new(); 2 * k];
    let mut power = |slot: usize, base: &LaurentPoly, e: i64| -> LaurentPoly {
        let e = e as usize;
        let c = &mut cache[slot];
        if c.len() <= e {
            c.resize(e + 1, None);
        }
        if c[e].is_none() {
            c[e] = Some(base.pow(e as u32));
        }
        c[e].clone().unwrap()
    };
    let mut total = LaurentPoly::zero(nvars);
    for (e, c) in p.terms() {
        let mut term = LaurentPoly::constant(nvars, c.clone());
        for j in 0..k {
            if lo[j] == hi[j] {
                continue;
            }
            let a = e[j] - lo[j];
            let b = hi[j] - e[j];
            if a > 0 {
                term = &term * &power(j, &nums[j], a);
            }
            if b > 0 {
                term = &term * &power(k + j, &dens[j], b);
            }
        }
        total = &total + &term;
    }
    let mut result = RationalFn::from_poly(&total);
    for j in 0..k {
        if lo[j] != 0 {
            result = result.mul(&values[j].pow(lo[j])?);
        }
        if hi[j] != lo[j] {
            let den = RationalFn::from_poly(&dens[j]).inv()?;
            result = result.mul(&den.pow(hi[j] - lo[j])?);
        }
    }
    Ok(result)
}

fn pow_rational(x: &BigRational, k: i64) -> BigRational {
    if k >= 0 {
        num_traits::pow(x.clone(), k as usize)
    } else {
        num_traits::pow(x.recip(), (-k) as usize)
    }
}

impl PartialEq for RationalFn {
    fn eq(&self, other: &Self) -> bool {
        self.nvars == other.nvars && self.equals(other)
    }
}

impl fmt::Debug for RationalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (1..=self.nvars).map(|i| format!("t{i}")).collect();
        write!(f, "{}", self.to_text(&names))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::poly::indexed_names;

    fn names() -> Vec<String> {
        let mut v = indexed_names("x", 2);
        v.extend(indexed_names("y", 1));
        v
    }

    fn r(s: &str) -> RationalFn {
        RationalFn::parse(s, &names()).unwrap()
    }

    #[test]
    fn equality_examples() {
        assert_eq!(r("(x2 + 1)/(x1)"), r("(x2^2 + x2)/(x1*x2)"));
        assert_ne!(r("(x2 + 1)/(x1)"), r("(x2 + 2)/(x1)"));
        assert_eq!(r("(1 + 2*y1 + y1^2)/(1 + y1)"), r("1 + y1"));
    }

    #[test]
    fn cancellation_reaches_polynomial_form() {
        let a = r("1 + x1");
        let b = r("x2^2 + x1*x2 + 3");
        let prod = a.mul(&b);
        let q = prod.div(&a).unwrap();
        assert!(q.is_laurent());
        assert_eq!(q.num(), LaurentPoly::parse("x2^2 + x1*x2 + 3", &names()).unwrap());
    }

    #[test]
    fn sum_splits_known_factors() {
        // (1+x1)x2/(1+y1) + (1+x1)/(1+y1) = (1+x1)(1+x2)/(1+y1)
        let a = r("(x2 + x1*x2)/(1 + y1)");
        let b = r("(1 + x1)/(1 + y1)");
        let s = a.add(&b);
        assert_eq!(s, r("(1 + x1 + x2 + x1*x2)/(1 + y1)"));
        assert_eq!(s.factor_count(), 3);
        let t = s.div(&r("1 + x2")).unwrap();
        assert_eq!(t.factor_count(), 2);
    }

    #[test]
    fn substitute_examples() {
        // 1 + u1 with u1 ↦ y1·x2⁻¹  gives  (x2 + y1)/x2
        let u = LaurentPoly::parse("1 + u1", &indexed_names("u", 1)).unwrap();
        let v = substitute(&u, &[r("y1*x2^-1")]).unwrap();
        assert_eq!(v, r("(x2 + y1)/(x2)"));
        let one = LaurentPoly::one(2);
        assert_eq!(substitute(&one, &[r("x1"), r("x2")]).unwrap(), RationalFn::one(3));
        let uv = LaurentPoly::parse("u1*u2", &indexed_names("u", 2)).unwrap();
        assert_eq!(substitute(&uv, &[r("x1"), r("x1^-1")]).unwrap(), RationalFn::one(3));
        assert!(substitute(&uv, &[r("x1")]).is_err());
    }

    #[test]
    fn substitute_rational_values() {
        let u = LaurentPoly::parse("1 + u1 + u1^2*u2^-1", &indexed_names("u", 2)).unwrap();
        let a = r("(1 + y1)/(x1)");
        let b = r("(x2)/(1 + x1)");
        let got = substitute(&u, &[a.clone(), b.clone()]).unwrap();
        let want = RationalFn::one(3).add(&a).add(&a.pow(2).unwrap().div(&b).unwrap());
        assert_eq!(got, want);
        assert!(substitute(&u, &[a, RationalFn::zero(3)]).is_err());
    }

    #[test]
    fn text_round_trip() {
        let v = r("(x2 + y1)/(x1*y1 + x1)");
        let text = v.to_text(&names());
        assert_eq!(RationalFn::parse(&text, &names()).unwrap(), v);
        assert_eq!(r("x1^-2*x2").to_text(&names()), "x1^-2*x2");
    }

    #[test]
    fn zero_handling() {
        assert!(RationalFn::zero(3).inv().is_err());
        assert_eq!(r("x1").sub(&r("x1")), RationalFn::zero(3));
        assert!(RationalFn::from_parts(&LaurentPoly::one(3), &LaurentPoly::zero(3)).is_err());
    }
}
