//! Exchange matrices, labeled seeds and Y-seeds, and their mutations.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{indexed_names, ArithError, IntMatrix, Permutation, RationalFn};
use crate::semifield::{SemifieldError, SemifieldKind, SfElem};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PatternError {
    #[error("direction {k} out of range 1..={n}")]
    DirectionOutOfRange { k: usize, n: usize },
    #[error("matrix is not skew-symmetrizable: {0}")]
    NotSkewSymmetrizable(String),
    #[error("F-polynomial division at direction {k} left a remainder")]
    NonExactDivision { k: usize },
    #[error("size mismatch: {0}")]
    Dimension(String),
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Semifield(#[from] SemifieldError),
}

pub(crate) fn check_direction(k: usize, n: usize) -> Result<(), PatternError> {
    if k < n {
        Ok(())
    } else {
        Err(PatternError::DirectionOutOfRange { k: k + 1, n })
    }
}

pub(crate) fn pos(v: &BigInt) -> BigInt {
    if v.is_positive() {
        v.clone()
    } else {
        BigInt::zero()
    }
}

pub(crate) fn neg_part(v: &BigInt) -> BigInt {
    if v.is_negative() {
        -v
    } else {
        BigInt::zero()
    }
}

pub(crate) fn small(v: &BigInt) -> i64 {
    i64::try_from(v).expect("exponent exceeds 64 bits")
}

/// Matrix mutation at `k` (0-based), with the extra factor `r` of a degree-R
/// pattern; `r = 1` is ordinary mutation.
pub fn b_mutate_scaled(b: &IntMatrix, k: usize, r: &BigInt) -> Result<IntMatrix, PatternError> {
    let n = b.n();
    check_direction(k, n)?;
    let mut out = b.clone();
    for i in 0..n {
        for j in 0..n {
            let v = if i == k || j == k {
                -b.get(i, j)
            } else {
                let bik = b.get(i, k);
                let bkj = b.get(k, j);
                b.get(i, j) + r * (bik * pos(bkj) + neg_part(bik) * bkj)
            };
            out.set(i, j, v);
        }
    }
    Ok(out)
}

/// Matrix mutation at `k` (0-based).
pub fn b_mutate(b: &IntMatrix, k: usize) -> Result<IntMatrix, PatternError> {
    b_mutate_scaled(b, k, &BigInt::one())
}

/// The entrywise-minimal positive integer `d` with `diag(d)·B` skew-symmetric.
///
/// Each connected component of the graph of nonzero entries is scaled
/// independently to coprime integers.
pub fn skew_symmetrizer(b: &IntMatrix) -> Result<Vec<BigInt>, PatternError> {
    let n = b.n();
    for i in 0..n {
        if !b.get(i, i).is_zero() {
            return Err(PatternError::NotSkewSymmetrizable(format!("nonzero diagonal entry at {}", i + 1)));
        }
        for j in 0..n {
            let (x, y) = (b.get(i, j), b.get(j, i));
            if x.is_zero() != y.is_zero() || (!x.is_zero() && x.signum() == y.signum()) {
                return Err(PatternError::NotSkewSymmetrizable(format!(
                    "sign pattern violated at ({}, {})",
                    i + 1,
                    j + 1
                )));
            }
        }
    }
    let mut d: Vec<Option<BigRational>> = vec![None; n];
    let mut out = vec![BigInt::zero(); n];
    for root in 0..n {
        if d[root].is_some() {
            continue;
        }
        d[root] = Some(BigRational::one());
        let mut component = vec![root];
        let mut queue = vec![root];
        while let Some(i) = queue.pop() {
            let di = d[i].clone().unwrap();
            for j in 0..n {
                let bij = b.get(i, j);
                if bij.is_zero() {
                    continue;
                }
                // d_i b_ij = −d_j b_ji
                let dj = &di * BigRational::new(bij.clone(), -b.get(j, i));
                match &d[j] {
                    None => {
                        d[j] = Some(dj);
                        component.push(j);
                        queue.push(j);
                    }
                    Some(existing) if *existing != dj => {
                        return Err(PatternError::NotSkewSymmetrizable(format!(
                            "inconsistent ratios around index {}",
                            j + 1
                        )));
                    }
                    Some(_) => {}
                }
            }
        }
        let lcm = component.iter().fold(BigInt::one(), |acc, &i| acc.lcm(d[i].as_ref().unwrap().denom()));
        let scaled: Vec<BigInt> =
            component.iter().map(|&i| (d[i].as_ref().unwrap() * BigRational::from(lcm.clone())).to_integer()).collect();
        let g = scaled.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
        for (&i, v) in component.iter().zip(scaled) {
            out[i] = v / &g;
        }
    }
    Ok(out)
}

/// A skew-symmetrizable exchange matrix with its skew-symmetrizer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExchangeMatrix {
    b: IntMatrix,
    d: Vec<BigInt>,
}

impl ExchangeMatrix {
    pub fn new(b: IntMatrix) -> Result<Self, PatternError> {
        let d = skew_symmetrizer(&b)?;
        Ok(ExchangeMatrix { b, d })
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self, PatternError> {
        Self::new(IntMatrix::from_rows(rows)?)
    }

    pub fn b(&self) -> &IntMatrix {
        &self.b
    }

    pub fn d(&self) -> &[BigInt] {
        &self.d
    }

    pub fn d_matrix(&self) -> IntMatrix {
        IntMatrix::diag(&self.d)
    }

    pub fn n(&self) -> usize {
        self.b.n()
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        self.b.get(i, j)
    }

    pub fn mutate(&self, k: usize) -> Result<Self, PatternError> {
        Ok(ExchangeMatrix { b: b_mutate(&self.b, k)?, d: self.d.clone() })
    }

    /// Degree-R mutation: the same skew-symmetrizer stays valid.
    pub fn mutate_scaled(&self, k: usize, r: &BigInt) -> Result<Self, PatternError> {
        Ok(ExchangeMatrix { b: b_mutate_scaled(&self.b, k, r)?, d: self.d.clone() })
    }

    pub fn permute(&self, sigma: &Permutation) -> Self {
        ExchangeMatrix { b: self.b.permute_both(sigma), d: sigma.act(&self.d) }
    }
}

impl fmt::Display for ExchangeMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.b)
    }
}

/// Choice of coefficients for a pattern rooted at the initial seed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CoeffKind {
    Trivial,
    Principal,
    YPrincipal,
    Universal,
}

impl CoeffKind {
    pub const ALL: [CoeffKind; 4] = [CoeffKind::Trivial, CoeffKind::Principal, CoeffKind::YPrincipal, CoeffKind::Universal];

    pub fn name(self) -> &'static str {
        match self {
            CoeffKind::Trivial => "trivial",
            CoeffKind::Principal => "principal",
            CoeffKind::YPrincipal => "y-principal",
            CoeffKind::Universal => "universal",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        CoeffKind::ALL.into_iter().find(|c| c.name() == s)
    }

    /// The coefficient semifield with `m` generators; y-principal and principal
    /// agree for ordinary seeds.
    pub fn semifield(self, m: usize) -> SemifieldKind {
        match self {
            CoeffKind::Trivial => SemifieldKind::Trivial,
            CoeffKind::Principal | CoeffKind::YPrincipal => SemifieldKind::Tropical(m),
            CoeffKind::Universal => SemifieldKind::Universal(m),
        }
    }
}

impl fmt::Display for CoeffKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Names of the ambient variables: `x1..xn` followed by the coefficient generators.
pub fn ambient_names(n: usize, generators: &[String]) -> Vec<String> {
    let mut names = indexed_names("x", n);
    names.extend(generators.iter().cloned());
    names
}

/// `∏ xs[j]^exps[j]`.
pub(crate) fn power_product(nvars: usize, xs: &[RationalFn], exps: impl IntoIterator<Item = i64>) -> RationalFn {
    let mut acc = RationalFn::one(nvars);
    for (x, e) in xs.iter().zip(exps) {
        if e != 0 {
            acc = acc.mul(&x.pow(e).expect("cluster variables are nonzero"));
        }
    }
    acc
}

/// A labeled seed `(x, y, B)`.
///
/// Cluster variables live in the rational functions of the initial `x`
/// together with the coefficient generators (variables `n..`).
#[derive(Clone, Debug)]
pub struct Seed {
    pub x: Vec<RationalFn>,
    pub y: Vec<SfElem>,
    pub b: ExchangeMatrix,
    pub semifield: SemifieldKind,
}

impl Seed {
    pub fn initial(b: ExchangeMatrix, coeff: CoeffKind) -> Self {
        let n = b.n();
        let semifield = coeff.semifield(n);
        let nvars = n + semifield.generators();
        let x = (0..n).map(|i| RationalFn::var(nvars, i)).collect();
        let y = (0..n).map(|i| initial_y(semifield, i)).collect();
        Seed { x, y, b, semifield }
    }

    pub fn n(&self) -> usize {
        self.b.n()
    }

    pub fn nvars(&self) -> usize {
        self.n() + self.semifield.generators()
    }

    /// Image of a coefficient in the ambient field.
    pub fn embed(&self, e: &SfElem) -> RationalFn {
        e.to_ambient(self.n(), self.nvars())
    }

    pub fn names(&self) -> Vec<String> {
        ambient_names(self.n(), &indexed_names("y", self.semifield.generators()))
    }

    pub fn yhat(&self) -> Vec<RationalFn> {
        compute_yhat(self)
    }

    pub fn mutate(&self, k: usize) -> Result<Self, PatternError> {
        mutate_seed(self, k)
    }

    pub fn permute(&self, sigma: &Permutation) -> Self {
        Seed { x: sigma.act(&self.x), y: sigma.act(&self.y), b: self.b.permute(sigma), semifield: self.semifield }
    }

    pub fn yseed(&self) -> YSeed {
        YSeed { y: self.y.clone(), b: self.b.clone() }
    }
}

impl PartialEq for Seed {
    fn eq(&self, other: &Self) -> bool {
        self.b == other.b
            && self.y == other.y
            && self.x.len() == other.x.len()
            && self.x.iter().zip(&other.x).all(|(a, b)| a.equals(b))
    }
}

pub(crate) fn initial_y(semifield: SemifieldKind, i: usize) -> SfElem {
    match semifield {
        SemifieldKind::Trivial => SfElem::Trivial,
        _ => semifield.gen(i),
    }
}

/// `ŷ_i = y_i ∏_j x_j^{b_ji}` in the ambient field.
pub fn compute_yhat(s: &Seed) -> Vec<RationalFn> {
    let n = s.n();
    let nvars = s.nvars();
    (0..n)
        .map(|i| {
            let col = s.b.b().column_exps(i);
            s.embed(&s.y[i]).mul(&power_product(nvars, &s.x, col))
        })
        .collect()
}

/// Mutation of a labeled seed at direction `k` (0-based).
pub fn mutate_seed(s: &Seed, k: usize) -> Result<Seed, PatternError> {
    let n = s.n();
    check_direction(k, n)?;
    let nvars = s.nvars();
    let col: Vec<BigInt> = s.b.b().column(k);
    let plus = power_product(nvars, &s.x, col.iter().map(|v| small(&pos(v))));
    let minus = power_product(nvars, &s.x, col.iter().map(|v| small(&neg_part(v))));
    let yk = &s.y[k];
    let numer = minus.add(&s.embed(yk).mul(&plus));
    let one_plus_y = yk.oplus(&s.semifield.one())?;
    let denom = s.x[k].mul(&s.embed(&one_plus_y));
    let mut x = s.x.clone();
    x[k] = numer.div(&denom)?;
    let y = mutate_y(&s.y, s.b.b(), k, s.semifield, &BigInt::one())?;
    Ok(Seed { x, y, b: s.b.mutate(k)?, semifield: s.semifield })
}

/// y-mutation; `r` is the degree factor on `[b_ki]_+` and `exchange_value`
/// replaces `1 ⊕ y_k` in degree-R patterns.
pub(crate) fn mutate_y_with(
    y: &[SfElem],
    b: &IntMatrix,
    k: usize,
    exchange_value: &SfElem,
    r: &BigInt,
) -> Result<Vec<SfElem>, PatternError> {
    let yk = &y[k];
    let mut out = Vec::with_capacity(y.len());
    for (i, yi) in y.iter().enumerate() {
        if i == k {
            out.push(yk.inv());
            continue;
        }
        let bki = b.get(k, i);
        if bki.is_zero() {
            out.push(yi.clone());
            continue;
        }
        let v = yi.mul(&yk.pow(small(&(pos(bki) * r))))?.mul(&exchange_value.pow(-small(bki)))?;
        out.push(v);
    }
    Ok(out)
}

fn mutate_y(y: &[SfElem], b: &IntMatrix, k: usize, semifield: SemifieldKind, r: &BigInt) -> Result<Vec<SfElem>, PatternError> {
    let e = y[k].oplus(&semifield.one())?;
    mutate_y_with(y, b, k, &e, r)
}

/// A Y-seed `(y, B)`.
#[derive(Clone, Debug, PartialEq)]
pub struct YSeed {
    pub y: Vec<SfElem>,
    pub b: ExchangeMatrix,
}

impl YSeed {
    pub fn initial(b: ExchangeMatrix, semifield: SemifieldKind) -> Self {
        let y = (0..b.n()).map(|i| initial_y(semifield, i)).collect();
        YSeed { y, b }
    }

    pub fn mutate(&self, k: usize) -> Result<Self, PatternError> {
        mutate_yseed(self, k)
    }

    pub fn permute(&self, sigma: &Permutation) -> Self {
        YSeed { y: sigma.act(&self.y), b: self.b.permute(sigma) }
    }
}

pub fn mutate_yseed(s: &YSeed, k: usize) -> Result<YSeed, PatternError> {
    check_direction(k, s.b.n())?;
    let semifield = s.y[k].kind();
    Ok(YSeed { y: mutate_y(&s.y, s.b.b(), k, semifield, &BigInt::one())?, b: s.b.mutate(k)? })
}

pub fn permute_seed(s: &Seed, sigma: &Permutation) -> Seed {
    s.permute(sigma)
}

/// `ŷ` of the mutated seed against the y-mutation rule applied to `ŷ` inside
/// the ambient field (trivial coefficients only, where `1 ⊕ ŷ_k` is `1 + ŷ_k`).
pub fn yhat_law_holds(s: &Seed, k: usize) -> Result<bool, PatternError> {
    let yhat = compute_yhat(s);
    let after = compute_yhat(&mutate_seed(s, k)?);
    let nvars = s.nvars();
    let one_plus = yhat[k].add(&RationalFn::one(nvars));
    for i in 0..s.n() {
        let expected = if i == k {
            yhat[k].inv()?
        } else {
            let bki = s.b.get(k, i);
            yhat[i]
                .mul(&yhat[k].pow(small(&pos(bki)))?)
                .mul(&one_plus.pow(-small(bki))?)
        };
        if !expected.equals(&after[i]) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_rows(rows).unwrap()
    }

    fn a2() -> ExchangeMatrix {
        ExchangeMatrix::from_rows(&[vec![0, 1], vec![-1, 0]]).unwrap()
    }

    #[test]
    fn b_mutation_examples() {
        assert_eq!(b_mutate(&m(&[vec![0, 1], vec![-1, 0]]), 0).unwrap(), m(&[vec![0, -1], vec![1, 0]]));
        let b = m(&[vec![0, 1, 0], vec![-1, 0, 1], vec![0, -1, 0]]);
        assert_eq!(b_mutate(&b, 1).unwrap(), m(&[vec![0, -1, 1], vec![1, 0, -1], vec![-1, 1, 0]]));
        assert!(matches!(b_mutate(&b, 3), Err(PatternError::DirectionOutOfRange { k: 4, n: 3 })));
    }

    #[test]
    fn skew_symmetrizer_examples() {
        let one = BigInt::one();
        assert_eq!(skew_symmetrizer(&m(&[vec![0, 1], vec![-1, 0]])).unwrap(), vec![one.clone(), one.clone()]);
        assert_eq!(skew_symmetrizer(&m(&[vec![0, 2], vec![-1, 0]])).unwrap(), vec![one.clone(), BigInt::from(2)]);
        assert!(skew_symmetrizer(&m(&[vec![0, 1], vec![1, 0]])).is_err());
        // ratios 2, 1, 1 around a 3-cycle cannot close up
        let bad = m(&[vec![0, 2, 1], vec![-1, 0, 1], vec![-1, -1, 0]]);
        assert!(skew_symmetrizer(&bad).is_err());
        // two components scaled independently
        let split = m(&[vec![0, 3, 0, 0], vec![-1, 0, 0, 0], vec![0, 0, 0, 1], vec![0, 0, -2, 0]]);
        let d: Vec<i64> = skew_symmetrizer(&split).unwrap().iter().map(small).collect();
        assert_eq!(d, vec![1, 3, 2, 1]);
    }

    #[test]
    fn yhat_examples() {
        let s = Seed::initial(a2(), CoeffKind::Trivial);
        let names = s.names();
        let yh = compute_yhat(&s);
        assert!(yh[0].equals(&RationalFn::parse("(1)/(x2)", &names).unwrap()));
        assert!(yh[1].equals(&RationalFn::parse("x1", &names).unwrap()));
        let p = Seed::initial(a2(), CoeffKind::Principal);
        assert!(compute_yhat(&p)[0].equals(&RationalFn::parse("(y1)/(x2)", &p.names()).unwrap()));
        let z = Seed::initial(ExchangeMatrix::from_rows(&[vec![0, 0], vec![0, 0]]).unwrap(), CoeffKind::Principal);
        assert!(compute_yhat(&z)[1].equals(&z.embed(&z.y[1])));
    }

    #[test]
    fn seed_mutation_examples() {
        let s = Seed::initial(a2(), CoeffKind::Trivial);
        let names = s.names();
        let parse = |t: &str| RationalFn::parse(t, &names).unwrap();
        let s1 = s.mutate(0).unwrap();
        assert!(s1.x[0].equals(&parse("(x2 + 1)/(x1)")));

        let p = Seed::initial(a2(), CoeffKind::Principal).mutate(0).unwrap();
        assert_eq!(p.y[0], SfElem::Tropical(vec![-1, 0]));
        assert_eq!(p.y[1], SfElem::Tropical(vec![1, 1]));

        let u = Seed::initial(a2(), CoeffKind::Universal);
        let sf = u.semifield;
        let u1 = u.mutate(0).unwrap();
        let expected = sf.gen(1).mul(&sf.gen(0)).unwrap().div(&sf.gen(0).oplus(&sf.one()).unwrap()).unwrap();
        assert_eq!(u1.y[1], expected);
        assert_eq!(u1.mutate(0).unwrap(), u);
    }

    #[test]
    fn yseed_examples() {
        let t = YSeed::initial(a2(), SemifieldKind::Trivial);
        assert_eq!(t.mutate(0).unwrap().mutate(1).unwrap().y, vec![SfElem::Trivial, SfElem::Trivial]);
        let p = YSeed::initial(a2(), SemifieldKind::Tropical(2));
        assert_eq!(p.mutate(0).unwrap().mutate(0).unwrap(), p);
        assert_eq!(p.mutate(0).unwrap().y[1], SfElem::Tropical(vec![1, 1]));
    }

    #[test]
    fn permutation_examples() {
        let s = Seed::initial(a2(), CoeffKind::Principal);
        assert_eq!(s.permute(&Permutation::identity(2)), s);
        let sigma = Permutation::transposition(2, 0, 1);
        assert_eq!(s.permute(&sigma).b.b(), &m(&[vec![0, -1], vec![1, 0]]));
        // μ_{σ(k)}(σΣ) = σ μ_k(Σ)
        let lhs = s.permute(&sigma).mutate(sigma.apply(0)).unwrap();
        let rhs = s.mutate(0).unwrap().permute(&sigma);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn yhat_law_on_a_walk() {
        let mut s = Seed::initial(ExchangeMatrix::from_rows(&[vec![0, 2], vec![-1, 0]]).unwrap(), CoeffKind::Trivial);
        for k in [0, 1, 0, 1, 0] {
            assert!(yhat_law_holds(&s, k).unwrap());
            assert!(yhat_law_holds(&s, 1 - k).unwrap());
            s = s.mutate(k).unwrap();
        }
    }
}
