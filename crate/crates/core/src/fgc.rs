//! FGC-seeds: F-polynomials, G-matrices and C-matrices of a B-pattern, the
//! separation formulas, and the identities they satisfy.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::arith::{self, indexed_names, IntMatrix, LaurentPoly, Permutation, RationalFn};
use crate::check::CheckResult;
use crate::seed::{check_direction, neg_part, pos, small, b_mutate, compute_yhat, PatternError, Seed};
use crate::semifield::SfElem;

/// G- and C-matrix mutation at `k`, with the degree factor `r` (`1` for ordinary patterns).
///
/// `b0` is the exchange matrix at the initial point, which the G rule refers to.
pub(crate) fn mutate_gc(
    g: &IntMatrix,
    c: &IntMatrix,
    bt: &IntMatrix,
    b0: &IntMatrix,
    k: usize,
    r: &BigInt,
) -> (IntMatrix, IntMatrix) {
    let n = g.n();
    let mut g2 = g.clone();
    for i in 0..n {
        let mut acc = BigInt::from(0);
        for l in 0..n {
            acc += g.get(i, l) * neg_part(bt.get(l, k));
            acc -= b0.get(i, l) * neg_part(c.get(l, k));
        }
        g2.set(i, k, -g.get(i, k) + r * acc);
    }
    let mut c2 = c.clone();
    for i in 0..n {
        let cik = c.get(i, k);
        for j in 0..n {
            let v = if j == k {
                -cik
            } else {
                let bkj = bt.get(k, j);
                c.get(i, j) + r * (cik * pos(bkj) + neg_part(cik) * bkj)
            };
            c2.set(i, j, v);
        }
    }
    (g2, c2)
}

/// The G- and C-matrices of a pattern without its F-polynomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GcSeed {
    pub g: IntMatrix,
    pub c: IntMatrix,
    pub bt: IntMatrix,
    pub b0: IntMatrix,
}

impl GcSeed {
    pub fn initial(b0: &IntMatrix) -> Self {
        let n = b0.n();
        GcSeed { g: IntMatrix::identity(n), c: IntMatrix::identity(n), bt: b0.clone(), b0: b0.clone() }
    }

    pub fn mutate(&self, k: usize) -> Result<Self, PatternError> {
        check_direction(k, self.g.n())?;
        let (g, c) = mutate_gc(&self.g, &self.c, &self.bt, &self.b0, k, &BigInt::one());
        Ok(GcSeed { g, c, bt: b_mutate(&self.bt, k)?, b0: self.b0.clone() })
    }

    pub fn along(b0: &IntMatrix, word: &[usize]) -> Result<Self, PatternError> {
        word.iter().try_fold(Self::initial(b0), |s, &k| s.mutate(k))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FgcSeed {
    /// F-polynomials in `u1..un`.
    pub f: Vec<LaurentPoly>,
    pub g: IntMatrix,
    pub c: IntMatrix,
    pub bt: IntMatrix,
    pub b0: IntMatrix,
}

impl FgcSeed {
    pub fn initial(b0: &IntMatrix) -> Self {
        let n = b0.n();
        FgcSeed {
            f: vec![LaurentPoly::one(n); n],
            g: IntMatrix::identity(n),
            c: IntMatrix::identity(n),
            bt: b0.clone(),
            b0: b0.clone(),
        }
    }

    pub fn n(&self) -> usize {
        self.g.n()
    }

    pub fn mutate(&self, k: usize) -> Result<Self, PatternError> {
        mutate_fgc(self, k)
    }

    pub fn along(b0: &IntMatrix, word: &[usize]) -> Result<Self, PatternError> {
        word.iter().try_fold(Self::initial(b0), |s, &k| s.mutate(k))
    }

    /// `σΓ`: F and columns of G, C permuted, `B_t` conjugated, `B0` kept.
    pub fn permute(&self, sigma: &Permutation) -> Self {
        FgcSeed {
            f: sigma.act(&self.f),
            g: self.g.permute_columns(sigma),
            c: self.c.permute_columns(sigma),
            bt: self.bt.permute_both(sigma),
            b0: self.b0.clone(),
        }
    }

    pub fn gc(&self) -> GcSeed {
        GcSeed { g: self.g.clone(), c: self.c.clone(), bt: self.bt.clone(), b0: self.b0.clone() }
    }
}

impl fmt::Display for FgcSeed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = indexed_names("u", self.n());
        let polys: Vec<String> = self.f.iter().map(|p| p.to_text(&names)).collect();
        write!(f, "F=({}) G={} C={} B={}", polys.join(", "), self.g, self.c, self.bt)
    }
}

/// `∏ fs[j]^exps[j]` for nonnegative exponents.
pub(crate) fn poly_power_product(nvars: usize, fs: &[LaurentPoly], exps: &[BigInt]) -> LaurentPoly {
    let mut acc = LaurentPoly::one(nvars);
    for (f, e) in fs.iter().zip(exps) {
        let e = small(e);
        if e > 0 && !f.is_one() {
            acc = &acc * &f.pow(e as u32);
        }
    }
    acc
}

pub(crate) fn u_monomial(nvars: usize, exps: &[BigInt]) -> LaurentPoly {
    let mut e = vec![0i64; nvars];
    for (o, v) in e.iter_mut().zip(exps) {
        *o = small(v);
    }
    LaurentPoly::monomial(e, 1)
}

/// FGC mutation at direction `k` (0-based).
pub fn mutate_fgc(s: &FgcSeed, k: usize) -> Result<FgcSeed, PatternError> {
    let n = s.n();
    check_direction(k, n)?;
    let ck = s.c.column(k);
    let bk = s.bt.column(k);
    let plus_c: Vec<BigInt> = ck.iter().map(pos).collect();
    let minus_c: Vec<BigInt> = ck.iter().map(neg_part).collect();
    let plus_b: Vec<BigInt> = bk.iter().map(pos).collect();
    let minus_b: Vec<BigInt> = bk.iter().map(neg_part).collect();
    let p = &u_monomial(n, &plus_c) * &poly_power_product(n, &s.f, &plus_b);
    let q = &u_monomial(n, &minus_c) * &poly_power_product(n, &s.f, &minus_b);
    let m = &p + &q;
    let fk = m.div_exact(&s.f[k]).ok_or(PatternError::NonExactDivision { k: k + 1 })?;
    let mut f = s.f.clone();
    f[k] = fk;
    let (g, c) = mutate_gc(&s.g, &s.c, &s.bt, &s.b0, k, &BigInt::one());
    Ok(FgcSeed { f, g, c, bt: b_mutate(&s.bt, k)?, b0: s.b0.clone() })
}

/// Cluster variables from the separation formula, relative to the initial seed `seed0`.
pub fn separation_x(g: &FgcSeed, seed0: &Seed) -> Result<Vec<RationalFn>, PatternError> {
    let n = g.n();
    let nvars = seed0.nvars();
    let yhat = compute_yhat(seed0);
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut mono = vec![0i64; nvars];
        for (j, m) in mono.iter_mut().take(n).enumerate() {
            *m = g.g.exp(j, i);
        }
        let mono = RationalFn::monomial(mono);
        let fy = arith::substitute(&g.f[i], &yhat)?;
        let fp = seed0.semifield.eval_poly(&g.f[i], &seed0.y)?;
        out.push(mono.mul(&fy).div(&seed0.embed(&fp))?);
    }
    Ok(out)
}

/// Coefficients from the separation formula, relative to the initial seed `seed0`.
pub fn separation_y(g: &FgcSeed, seed0: &Seed) -> Result<Vec<SfElem>, PatternError> {
    let n = g.n();
    let sf = seed0.semifield;
    let fvals = g.f.iter().map(|f| sf.eval_poly(f, &seed0.y)).collect::<Result<Vec<_>, _>>()?;
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut acc = sf.one();
        for j in 0..n {
            let cji = g.c.exp(j, i);
            if cji != 0 {
                acc = acc.mul(&seed0.y[j].pow(cji))?;
            }
            let bji = g.bt.exp(j, i);
            if bji != 0 {
                acc = acc.mul(&fvals[j].pow(bji))?;
            }
        }
        out.push(acc);
    }
    Ok(out)
}

/// Degree matrix: entry `(i, j)` is the largest exponent of `u_i` in `F_j`.
pub fn f_matrix(g: &FgcSeed) -> IntMatrix {
    let n = g.n();
    let mut out = IntMatrix::zero(n);
    for (j, f) in g.f.iter().enumerate() {
        let top = f.max_exponents();
        for (i, &e) in top.iter().take(n).enumerate() {
            out.set(i, j, BigInt::from(e.max(0)));
        }
    }
    out
}

/// Sign-coherence, F-polynomial shape, duality, conjugation and determinant
/// identities at one node. `d` is the skew-symmetrizer of the pattern.
pub fn check_invariants(g: &FgcSeed, d: &[BigInt]) -> Vec<CheckResult> {
    let names = indexed_names("u", g.n());
    let dm = IntMatrix::diag(d);
    let mut out = vec![CheckResult::expect("sign-coherence", g.c.first_incoherent_column().is_none(), || {
        format!("C={} column {}", g.c, g.c.first_incoherent_column().unwrap() + 1)
    })];
    out.extend(f_shape_checks(&g.f, &names));
    let lhs = g.g.transpose().mul(&dm).mul(&g.c);
    out.push(CheckResult::expect("gc-duality", lhs == dm, || format!("G={} C={} D={}", g.g, g.c, dm)));
    let lhs = dm.mul(&g.bt);
    let rhs = g.c.transpose().mul(&dm.mul(&g.b0)).mul(&g.c);
    out.push(CheckResult::expect("b-conjugation", lhs == rhs, || format!("B_t={} C={} B={}", g.bt, g.c, g.b0)));
    out.push(unimodular(&g.g, &g.c));
    out
}

pub(crate) fn f_shape_checks(f: &[LaurentPoly], names: &[String]) -> Vec<CheckResult> {
    let bad = |pred: &dyn Fn(&LaurentPoly) -> bool| f.iter().position(|p| !pred(p));
    let show = |i: usize| format!("F{}={}", i + 1, f[i].to_text(names));
    let poly = bad(&|p| p.is_polynomial());
    let constant = bad(&|p| p.constant_term().is_one());
    let positive = bad(&|p| p.all_coeffs_positive());
    vec![
        CheckResult::expect("f-polynomial", poly.is_none(), || show(poly.unwrap())),
        CheckResult::expect("f-constant-term", constant.is_none(), || show(constant.unwrap())),
        CheckResult::expect("f-positivity", positive.is_none(), || show(positive.unwrap())),
    ]
}

pub(crate) fn unimodular(g: &IntMatrix, c: &IntMatrix) -> CheckResult {
    let (dg, dc) = (g.det(), c.det());
    CheckResult::expect("unimodular", dg.abs().is_one() && dc.abs().is_one(), || {
        format!("det G={dg} det C={dc}")
    })
}

/// If `G = P_σ` then every F-polynomial is 1.
pub fn check_detrop(g: &FgcSeed) -> CheckResult {
    let is_perm = IntMatrix::permutation_of(&g.g).is_some();
    CheckResult::expect("detropicalization", !is_perm || g.f.iter().all(LaurentPoly::is_one), || {
        format!("G={} but F is not 1", g.g)
    })
}

/// For a detected `G_{t1} = σ G_{t2}`: `F_{t1} = σF_{t2}` and `B_{t1} = σB_{t2}`.
pub fn check_detrop_pair(g1: &FgcSeed, g2: &FgcSeed, sigma: &Permutation) -> CheckResult {
    let f_ok = g1.f == sigma.act(&g2.f);
    let b_ok = g1.bt == g2.bt.permute_both(sigma);
    CheckResult::expect("detropicalization-pair", f_ok && b_ok, || {
        format!("sigma={sigma} F match={f_ok} B match={b_ok}")
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Duality {
    Transposition,
    Chiral,
    Langlands,
}

impl Duality {
    pub const ALL: [Duality; 3] = [Duality::Transposition, Duality::Chiral, Duality::Langlands];

    pub fn name(self) -> &'static str {
        match self {
            Duality::Transposition => "transposition",
            Duality::Chiral => "chiral",
            Duality::Langlands => "langlands",
        }
    }

    /// Initial matrix of the dual pattern.
    pub fn dual_matrix(self, b: &IntMatrix) -> IntMatrix {
        match self {
            Duality::Transposition => b.transpose(),
            Duality::Chiral => b.neg(),
            Duality::Langlands => b.transpose().neg(),
        }
    }
}

/// `C'_t = C_t + F_t B_t` against the pattern of `−B`, with equal F-matrices.
///
/// The F-polynomials themselves differ (for A2 after `μ1 μ2`, `1+u1+u1u2`
/// against `1+u2+u1u2`); only their degree matrices agree.
pub fn check_chiral(g: &FgcSeed, dual: &FgcSeed) -> CheckResult {
    let fm = f_matrix(g);
    let expected = g.c.add(&fm.mul(&g.bt));
    CheckResult::expect("chiral-duality", dual.c == expected && f_matrix(dual) == fm, || {
        format!("C={} C'={} F-matrix={} F'-matrix={}", g.c, dual.c, fm, f_matrix(dual))
    })
}

/// `G_tᵀ C'_t = I` against the pattern of `−Bᵀ`.
pub fn check_langlands(g: &GcSeed, dual: &GcSeed) -> CheckResult {
    CheckResult::expect("langlands-duality", g.g.transpose().mul(&dual.c).is_identity(), || {
        format!("G={} C'={}", g.g, dual.c)
    })
}

/// `C_{t1}ᵀ = G'_{t2}` where `c_t1` comes from the pattern of `B` rooted at
/// `t2` and `g_prime_t2` from the pattern of `Bᵀ` rooted at `t1`.
pub fn check_transposition(c_t1: &IntMatrix, g_prime_t2: &IntMatrix) -> CheckResult {
    CheckResult::expect("transposition-duality", &c_t1.transpose() == g_prime_t2, || {
        format!("C={c_t1} G'={g_prime_t2}")
    })
}

/// C-matrix at the start of `word` for the pattern rooted at its end, where
/// `b_end` is the exchange matrix at the end.
pub fn c_back_along(b_end: &IntMatrix, word: &[usize]) -> Result<IntMatrix, PatternError> {
    let mut s = GcSeed::initial(b_end);
    for &k in word.iter().rev() {
        s = s.mutate(k)?;
    }
    Ok(s.c)
}

/// Checks a duality at every node of `word`, starting from a node with exchange matrix `b`.
pub fn check_cross_duality(b: &IntMatrix, word: &[usize], which: Duality) -> Result<Vec<CheckResult>, PatternError> {
    let dual_b = which.dual_matrix(b);
    let mut prim = FgcSeed::initial(b);
    let mut dual = FgcSeed::initial(&dual_b);
    let mut out = Vec::with_capacity(word.len() + 1);
    for step in 0..=word.len() {
        let mut r = match which {
            Duality::Transposition => check_transposition(&c_back_along(&prim.bt, &word[..step])?, &dual.g),
            Duality::Chiral => check_chiral(&prim, &dual),
            Duality::Langlands => check_langlands(&prim.gc(), &dual.gc()),
        };
        if let Some(w) = r.witness.as_mut() {
            *w = format!("after {} steps: {w}", step);
        }
        out.push(r);
        if step < word.len() {
            prim = prim.mutate(word[step])?;
            dual = dual.mutate(word[step])?;
        }
    }
    Ok(out)
}

/// `R·G' = G·R` and `R·C' = C·R` for the patterns of `RB` (`left`) and `BR` (`right`).
pub fn check_conjugate(left: &GcSeed, right: &GcSeed, r: &[BigInt]) -> CheckResult {
    let rm = IntMatrix::diag(r);
    let g_ok = rm.mul(&right.g) == left.g.mul(&rm);
    let c_ok = rm.mul(&right.c) == left.c.mul(&rm);
    CheckResult::expect("conjugate-pair", g_ok && c_ok, || {
        format!("G={} G'={} C={} C'={}", left.g, right.g, left.c, right.c)
    })
}

/// The conjugate pair `(RB, BR)`.
pub fn conjugate_pair(b: &IntMatrix, r: &[BigInt]) -> (IntMatrix, IntMatrix) {
    let rm = IntMatrix::diag(r);
    (rm.mul(b), b.mul(&rm))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::{CoeffKind, ExchangeMatrix};

    fn m(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_rows(rows).unwrap()
    }

    fn a2() -> IntMatrix {
        m(&[vec![0, 1], vec![-1, 0]])
    }

    fn u(text: &str, n: usize) -> LaurentPoly {
        LaurentPoly::parse(text, &indexed_names("u", n)).unwrap()
    }

    #[test]
    fn mutation_examples() {
        let s0 = FgcSeed::initial(&a2());
        let s1 = s0.mutate(0).unwrap();
        assert_eq!(s1.f, vec![u("1 + u1", 2), u("1", 2)]);
        assert_eq!(s1.g, m(&[vec![-1, 0], vec![1, 1]]));
        assert_eq!(s1.c, m(&[vec![-1, 1], vec![0, 1]]));
        let s2 = s1.mutate(1).unwrap();
        assert_eq!(s2.f[1], u("1 + u1 + u1*u2", 2));
        assert_eq!(s1.mutate(0).unwrap(), s0);
        assert_eq!(f_matrix(&s2), m(&[vec![1, 1], vec![0, 1]]));
        assert!(f_matrix(&s0).is_zero());
        assert_eq!(f_matrix(&s0.mutate(1).unwrap()), m(&[vec![0, 0], vec![0, 1]]));
    }

    #[test]
    fn separation_examples() {
        let b = ExchangeMatrix::new(a2()).unwrap();
        let s1 = FgcSeed::initial(&a2()).mutate(0).unwrap();
        let p0 = Seed::initial(b.clone(), CoeffKind::Principal);
        let names = p0.names();
        let x = separation_x(&s1, &p0).unwrap();
        assert!(x[0].equals(&RationalFn::parse("(x2 + y1)/(x1)", &names).unwrap()));
        let y = separation_y(&s1, &p0).unwrap();
        assert_eq!(y, vec![SfElem::Tropical(vec![-1, 0]), SfElem::Tropical(vec![1, 1])]);

        let t0 = Seed::initial(b.clone(), CoeffKind::Trivial);
        let x = separation_x(&s1, &t0).unwrap();
        assert!(x[0].equals(&RationalFn::parse("(x2 + 1)/(x1)", &t0.names()).unwrap()));
        let x0 = separation_x(&FgcSeed::initial(&a2()), &t0).unwrap();
        assert!(x0.iter().zip(&t0.x).all(|(a, b)| a.equals(b)));

        let u0 = Seed::initial(b, CoeffKind::Universal);
        assert_eq!(separation_y(&s1, &u0).unwrap(), u0.mutate(0).unwrap().y);
    }

    #[test]
    fn invariant_examples() {
        let one = vec![BigInt::one(), BigInt::one()];
        let s1 = FgcSeed::initial(&a2()).mutate(0).unwrap();
        assert!(check_invariants(&s1, &one).iter().all(|r| r.passed));
        assert!(check_invariants(&FgcSeed::initial(&a2()), &one).iter().all(|r| r.passed));
        let mut bad = s1.clone();
        bad.c = m(&[vec![-1, 1], vec![1, 1]]);
        let res = check_invariants(&bad, &one);
        assert!(!res.iter().find(|r| r.identity == "sign-coherence").unwrap().passed);
    }

    #[test]
    fn detropicalization_on_pentagon() {
        let end = FgcSeed::along(&a2(), &[0, 1, 0, 1, 0]).unwrap();
        let sigma = Permutation::transposition(2, 0, 1);
        assert_eq!(end.g, IntMatrix::permutation(&sigma));
        assert!(end.f.iter().all(LaurentPoly::is_one));
        assert!(check_detrop(&end).passed);
        assert!(check_detrop(&FgcSeed::initial(&a2())).passed);
    }

    #[test]
    fn dualities_on_a2() {
        for which in Duality::ALL {
            let res = check_cross_duality(&a2(), &[0, 1, 0, 1, 0], which).unwrap();
            assert_eq!(res.len(), 6);
            assert!(res.iter().all(|r| r.passed), "{which:?}: {res:?}");
        }
        let b2 = m(&[vec![0, 2], vec![-1, 0]]);
        for which in Duality::ALL {
            let res = check_cross_duality(&b2, &[1, 0, 1, 0, 1, 0], which).unwrap();
            assert!(res.iter().all(|r| r.passed), "{which:?}: {res:?}");
        }
    }

    #[test]
    fn conjugate_example() {
        let r = vec![BigInt::from(2), BigInt::one()];
        let (rb, br) = conjugate_pair(&a2(), &r);
        assert_eq!(rb, m(&[vec![0, 2], vec![-1, 0]]));
        assert_eq!(br, m(&[vec![0, 1], vec![-2, 0]]));
        let l = GcSeed::initial(&rb).mutate(0).unwrap();
        let rr = GcSeed::initial(&br).mutate(0).unwrap();
        assert_eq!(l.g, m(&[vec![-1, 0], vec![1, 1]]));
        assert_eq!(rr.g, m(&[vec![-1, 0], vec![2, 1]]));
        assert!(check_conjugate(&l, &rr, &r).passed);
        assert!(check_conjugate(&GcSeed::initial(&rb), &GcSeed::initial(&br), &r).passed);
    }
}
