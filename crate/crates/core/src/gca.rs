//! Generalized cluster patterns of degree `R = diag(r_1, …, r_n)`: seeds with
//! exchange polynomials, their FGC-seeds with formal `v`-variables, and the
//! companion patterns of `RB` and `BR`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::binomial;
use serde::{Deserialize, Serialize};

use crate::arith::{self, indexed_names, IntMatrix, LaurentPoly, Permutation, RationalFn};
use crate::check::CheckResult;
use crate::fgc::{f_shape_checks, mutate_gc, poly_power_product, u_monomial, unimodular, FgcSeed};
use crate::seed::{
    ambient_names, check_direction, initial_y, mutate_y_with, neg_part, pos, power_product,
    skew_symmetrizer, small, CoeffKind, ExchangeMatrix, PatternError, Seed,
};
use crate::semifield::{SemifieldKind, SfElem};

/// The degree `R` as its diagonal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct DegreeR {
    r: Vec<usize>,
}

impl TryFrom<Vec<usize>> for DegreeR {
    type Error = PatternError;
    fn try_from(r: Vec<usize>) -> Result<Self, PatternError> {
        DegreeR::new(r)
    }
}

impl From<DegreeR> for Vec<usize> {
    fn from(r: DegreeR) -> Self {
        r.r
    }
}

impl DegreeR {
    pub fn new(r: Vec<usize>) -> Result<Self, PatternError> {
        if r.iter().any(|&x| x == 0) {
            return Err(PatternError::Dimension("degrees must be positive".into()));
        }
        Ok(DegreeR { r })
    }

    pub fn ones(n: usize) -> Self {
        DegreeR { r: vec![1; n] }
    }

    pub fn n(&self) -> usize {
        self.r.len()
    }

    pub fn get(&self, i: usize) -> usize {
        self.r[i]
    }

    pub fn values(&self) -> &[usize] {
        &self.r
    }

    pub fn big(&self, i: usize) -> BigInt {
        BigInt::from(self.r[i])
    }

    pub fn as_bigints(&self) -> Vec<BigInt> {
        self.r.iter().map(|&x| BigInt::from(x)).collect()
    }

    pub fn matrix(&self) -> IntMatrix {
        IntMatrix::diag(&self.as_bigints())
    }

    pub fn is_trivial(&self) -> bool {
        self.r.iter().all(|&x| x == 1)
    }

    /// Number of `z` (or `v`) variables: `Σ (r_i − 1)`.
    pub fn inner_count(&self) -> usize {
        self.r.iter().map(|&x| x - 1).sum()
    }

    /// Flat index of `z_{i,s}` (0-based `i`, `1 ≤ s ≤ r_i − 1`).
    pub fn inner_index(&self, i: usize, s: usize) -> usize {
        debug_assert!(s >= 1 && s < self.r[i]);
        self.r[..i].iter().map(|&x| x - 1).sum::<usize>() + s - 1
    }

    pub fn inner_names(&self, prefix: &str) -> Vec<String> {
        let mut out = Vec::new();
        for (i, &ri) in self.r.iter().enumerate() {
            for s in 1..ri {
                out.push(format!("{prefix}{}_{s}", i + 1));
            }
        }
        out
    }

    /// `σ(i) = i` whenever `r_i ≥ 2`.
    pub fn strongly_compatible(&self, sigma: &Permutation) -> bool {
        check_strong_compat(sigma, self)
    }
}

impl fmt::Display for DegreeR {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.r.iter().map(|x| x.to_string()).collect();
        write!(f, "diag({})", parts.join(","))
    }
}

pub fn check_strong_compat(sigma: &Permutation, r: &DegreeR) -> bool {
    (0..r.n()).all(|i| r.get(i) < 2 || sigma.apply(i) == i)
}

/// Initial values of the `z`-variables, when not taken as generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZValues(pub Vec<Vec<BigInt>>);

/// A seed of degree `R`.
#[derive(Clone, Debug)]
pub struct GcaSeed {
    pub x: Vec<RationalFn>,
    pub y: Vec<SfElem>,
    /// `z[i][s − 1] = z_{i,s}`.
    pub z: Vec<Vec<SfElem>>,
    pub b: ExchangeMatrix,
    pub r: DegreeR,
    pub semifield: SemifieldKind,
}

impl PartialEq for GcaSeed {
    fn eq(&self, other: &Self) -> bool {
        self.b == other.b
            && self.r == other.r
            && self.y == other.y
            && self.z == other.z
            && self.x.len() == other.x.len()
            && self.x.iter().zip(&other.x).all(|(a, b)| a.equals(b))
    }
}

impl GcaSeed {
    /// The initial seed for a coefficient choice.
    ///
    /// Principal and universal coefficients take the `z_{i,s}` as extra
    /// generators after `y`; y-principal and trivial coefficients set `z = 1`.
    /// With `z_values`, universal coefficients use those positive integers instead.
    pub fn initial(b: ExchangeMatrix, r: DegreeR, coeff: CoeffKind, z_values: Option<&ZValues>) -> Result<Self, PatternError> {
        let n = b.n();
        if r.n() != n {
            return Err(PatternError::Dimension(format!("R has {} entries for n = {n}", r.n())));
        }
        let zc = r.inner_count();
        let numeric_z = matches!(coeff, CoeffKind::Universal) && z_values.is_some();
        let m = match coeff {
            CoeffKind::Trivial => 0,
            CoeffKind::YPrincipal => n,
            CoeffKind::Principal => n + zc,
            CoeffKind::Universal if numeric_z => n,
            CoeffKind::Universal => n + zc,
        };
        let semifield = coeff.semifield(m);
        let nvars = n + semifield.generators();
        let x = (0..n).map(|i| RationalFn::var(nvars, i)).collect();
        let y = (0..n).map(|i| initial_y(semifield, i)).collect();
        let mut z = Vec::with_capacity(n);
        for i in 0..n {
            let mut zi = Vec::new();
            for s in 1..r.get(i) {
                let v = match coeff {
                    CoeffKind::Trivial | CoeffKind::YPrincipal => semifield.one(),
                    CoeffKind::Universal if numeric_z => {
                        let vals = &z_values.unwrap().0;
                        let c = vals.get(i).and_then(|row| row.get(s - 1)).ok_or_else(|| {
                            PatternError::Dimension(format!("missing z value for index {} degree {s}", i + 1))
                        })?;
                        if c <= &BigInt::from(0) {
                            return Err(PatternError::Dimension("z values must be positive".into()));
                        }
                        semifield.positive_integer(c)
                    }
                    _ => semifield.gen(n + r.inner_index(i, s)),
                };
                zi.push(v);
            }
            z.push(zi);
        }
        Ok(GcaSeed { x, y, z, b, r, semifield })
    }

    pub fn n(&self) -> usize {
        self.b.n()
    }

    pub fn nvars(&self) -> usize {
        self.n() + self.semifield.generators()
    }

    pub fn embed(&self, e: &SfElem) -> RationalFn {
        e.to_ambient(self.n(), self.nvars())
    }

    pub fn names(&self) -> Vec<String> {
        let n = self.n();
        let m = self.semifield.generators();
        let mut gens = indexed_names("y", m.min(n));
        if m > n {
            gens.extend(self.r.inner_names("z"));
        }
        ambient_names(n, &gens)
    }

    /// Names of the coefficient generators only.
    pub fn generator_names(&self) -> Vec<String> {
        self.names()[self.n()..].to_vec()
    }

    /// `z_{i,0}, …, z_{i,r_i}` with the two unit ends.
    pub fn exchange_coefficients(&self, i: usize) -> Vec<SfElem> {
        let one = self.semifield.one();
        let mut out = vec![one.clone()];
        out.extend(self.z[i].iter().cloned());
        out.push(one);
        out
    }

    /// `Z_i|_P(y_i) = ⊕_s z_{i,s} y_i^s`.
    pub fn exchange_value(&self, i: usize) -> Result<SfElem, PatternError> {
        let coeffs = self.exchange_coefficients(i);
        let mut acc: Option<SfElem> = None;
        for (s, z) in coeffs.iter().enumerate() {
            let term = z.mul(&self.y[i].pow(s as i64))?;
            acc = Some(match acc {
                None => term,
                Some(a) => a.oplus(&term)?,
            });
        }
        Ok(acc.unwrap())
    }

    pub fn mutate(&self, k: usize) -> Result<Self, PatternError> {
        mutate_gca_seed(self, k)
    }

    pub fn permute(&self, sigma: &Permutation) -> Self {
        GcaSeed {
            x: sigma.act(&self.x),
            y: sigma.act(&self.y),
            z: sigma.act(&self.z),
            b: self.b.permute(sigma),
            r: DegreeR { r: sigma.act(&self.r.r) },
            semifield: self.semifield,
        }
    }

    /// `ŷ_i = y_i ∏ x_j^{b_ji}`.
    pub fn yhat(&self) -> Vec<RationalFn> {
        let nvars = self.nvars();
        (0..self.n())
            .map(|i| self.embed(&self.y[i]).mul(&power_product(nvars, &self.x, self.b.b().column_exps(i))))
            .collect()
    }

    /// The degree-1 seed with the same data (only meaningful when `R = I`).
    pub fn to_seed(&self) -> Seed {
        Seed { x: self.x.clone(), y: self.y.clone(), b: self.b.clone(), semifield: self.semifield }
    }
}

/// Seed mutation of degree `R` at direction `k` (0-based).
pub fn mutate_gca_seed(s: &GcaSeed, k: usize) -> Result<GcaSeed, PatternError> {
    let n = s.n();
    check_direction(k, n)?;
    let nvars = s.nvars();
    let rk = s.r.get(k);
    let col = s.b.b().column(k);
    let plus = power_product(nvars, &s.x, col.iter().map(|v| small(&pos(v))));
    let minus = power_product(nvars, &s.x, col.iter().map(|v| small(&neg_part(v))));
    // x_k^{-1} (∏x^{[-b]+})^r Z_k(ŷ_k) = x_k^{-1} Σ_s z_s (y_k ∏x^{[b]+})^s (∏x^{[-b]+})^{r-s}
    let ykp = s.embed(&s.y[k]).mul(&plus);
    let coeffs = s.exchange_coefficients(k);
    let terms: Vec<RationalFn> = coeffs
        .iter()
        .enumerate()
        .map(|(sdeg, z)| {
            let a = ykp.pow(sdeg as i64).expect("nonzero");
            let b = minus.pow((rk - sdeg) as i64).expect("nonzero");
            s.embed(z).mul(&a).mul(&b)
        })
        .collect();
    let numer = RationalFn::sum(nvars, terms.iter());
    let zval = s.exchange_value(k)?;
    let mut x = s.x.clone();
    x[k] = numer.div(&s.x[k].mul(&s.embed(&zval)))?;
    let rkb = BigInt::from(rk);
    let y = mutate_y_with(&s.y, s.b.b(), k, &zval, &rkb)?;
    let mut z = s.z.clone();
    z[k].reverse();
    Ok(GcaSeed { x, y, z, b: s.b.mutate_scaled(k, &rkb)?, r: s.r.clone(), semifield: s.semifield })
}

/// FGC-seed of degree `R`. F-polynomials live in `u1..un` followed by the
/// formal `v_{i,s}` in flat order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GcaFgcSeed {
    pub f: Vec<LaurentPoly>,
    pub g: IntMatrix,
    pub c: IntMatrix,
    /// `v[i][s − 1]` is the `s'` with `v_{i,s;t} = v_{i,s'}`.
    pub v: Vec<Vec<usize>>,
    pub bt: IntMatrix,
    pub b0: IntMatrix,
    pub r: DegreeR,
}

impl GcaFgcSeed {
    pub fn initial(b0: &IntMatrix, r: &DegreeR) -> Self {
        let n = b0.n();
        let nv = n + r.inner_count();
        GcaFgcSeed {
            f: vec![LaurentPoly::one(nv); n],
            g: IntMatrix::identity(n),
            c: IntMatrix::identity(n),
            v: (0..n).map(|i| (1..r.get(i)).collect()).collect(),
            bt: b0.clone(),
            b0: b0.clone(),
            r: r.clone(),
        }
    }

    pub fn n(&self) -> usize {
        self.g.n()
    }

    pub fn nvars(&self) -> usize {
        self.n() + self.r.inner_count()
    }

    pub fn names(&self) -> Vec<String> {
        let mut names = indexed_names("u", self.n());
        names.extend(self.r.inner_names("v"));
        names
    }

    pub fn mutate(&self, k: usize) -> Result<Self, PatternError> {
        mutate_gca_fgc(self, k)
    }

    pub fn along(b0: &IntMatrix, r: &DegreeR, word: &[usize]) -> Result<Self, PatternError> {
        word.iter().try_fold(Self::initial(b0, r), |s, &k| s.mutate(k))
    }

    /// `v_{k,s;t}` as a polynomial (`s = 0` and `s = r_k` give 1).
    fn v_poly(&self, k: usize, s: usize) -> LaurentPoly {
        let nv = self.nvars();
        if s == 0 || s == self.r.get(k) {
            return LaurentPoly::one(nv);
        }
        let formal = self.v[k][s - 1];
        LaurentPoly::var(nv, self.n() + self.r.inner_index(k, formal))
    }

    /// `F(u, v)` with each `v_{i,s}` set to an integer.
    pub fn f_specialized(&self, i: usize, value: impl Fn(usize, usize) -> BigInt) -> LaurentPoly {
        let n = self.n();
        let mut vals = Vec::new();
        for j in 0..n {
            for s in 1..self.r.get(j) {
                vals.push((n + self.r.inner_index(j, s), value(j, s)));
            }
        }
        let spec = self.f[i].specialize(&vals);
        let map: Vec<usize> = (0..self.nvars()).map(|j| if j < n { j } else { 0 }).collect();
        spec.remap(&map, n)
    }

    /// The degree-1 FGC-seed with the same data (only meaningful when `R = I`).
    pub fn to_fgc(&self) -> FgcSeed {
        FgcSeed { f: self.f.clone(), g: self.g.clone(), c: self.c.clone(), bt: self.bt.clone(), b0: self.b0.clone() }
    }
}

impl fmt::Display for GcaFgcSeed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = self.names();
        let polys: Vec<String> = self.f.iter().map(|p| p.to_text(&names)).collect();
        write!(f, "F=({}) G={} C={} B={}", polys.join(", "), self.g, self.c, self.bt)
    }
}

pub fn mutate_gca_fgc(s: &GcaFgcSeed, k: usize) -> Result<GcaFgcSeed, PatternError> {
    let n = s.n();
    check_direction(k, n)?;
    let nv = s.nvars();
    let rk = s.r.get(k);
    let ck = s.c.column(k);
    let bk = s.bt.column(k);
    let plus_c: Vec<BigInt> = ck.iter().map(pos).collect();
    let minus_c: Vec<BigInt> = ck.iter().map(neg_part).collect();
    let plus_b: Vec<BigInt> = bk.iter().map(pos).collect();
    let minus_b: Vec<BigInt> = bk.iter().map(neg_part).collect();
    let p = &u_monomial(nv, &plus_c) * &poly_power_product(nv, &s.f, &plus_b);
    let q = &u_monomial(nv, &minus_c) * &poly_power_product(nv, &s.f, &minus_b);
    let mut m = LaurentPoly::zero(nv);
    for sdeg in 0..=rk {
        let term = &(&s.v_poly(k, sdeg) * &p.pow(sdeg as u32)) * &q.pow((rk - sdeg) as u32);
        m = &m + &term;
    }
    let fk = m.div_exact(&s.f[k]).ok_or(PatternError::NonExactDivision { k: k + 1 })?;
    let mut f = s.f.clone();
    f[k] = fk;
    let rkb = BigInt::from(rk);
    let (g, c) = mutate_gc(&s.g, &s.c, &s.bt, &s.b0, k, &rkb);
    let mut v = s.v.clone();
    v[k].reverse();
    Ok(GcaFgcSeed { f, g, c, v, bt: crate::seed::b_mutate_scaled(&s.bt, k, &rkb)?, b0: s.b0.clone(), r: s.r.clone() })
}

/// `F|_P(y, z)` for every F-polynomial; fails on a negative coefficient.
fn f_values(g: &GcaFgcSeed, seed0: &GcaSeed) -> Result<Vec<SfElem>, PatternError> {
    let mut args = seed0.y.clone();
    for zi in &seed0.z {
        args.extend(zi.iter().cloned());
    }
    Ok(g.f.iter().map(|f| seed0.semifield.eval_poly(f, &args)).collect::<Result<Vec<_>, _>>()?)
}

/// Separation formulas of degree `R` relative to the initial seed `seed0`.
///
/// Evaluating `F|_P` needs a subtraction-free F-polynomial, so a negative
/// coefficient surfaces as an error here rather than being assumed away.
pub fn gca_separation(g: &GcaFgcSeed, seed0: &GcaSeed) -> Result<(Vec<RationalFn>, Vec<SfElem>), PatternError> {
    let n = g.n();
    let nvars = seed0.nvars();
    let fvals = f_values(g, seed0)?;
    let mut subst = seed0.yhat();
    for zi in &seed0.z {
        subst.extend(zi.iter().map(|z| seed0.embed(z)));
    }
    let mut xs = Vec::with_capacity(n);
    for i in 0..n {
        let mut mono = vec![0i64; nvars];
        for (j, m) in mono.iter_mut().take(n).enumerate() {
            *m = g.g.exp(j, i);
        }
        let fy = arith::substitute(&g.f[i], &subst)?;
        xs.push(RationalFn::monomial(mono).mul(&fy).div(&seed0.embed(&fvals[i]))?);
    }
    let sf = seed0.semifield;
    let mut ys = Vec::with_capacity(n);
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
        ys.push(acc);
    }
    Ok((xs, ys))
}

/// Companion identities against the FGC-seeds of `RB` (`left`) and `BR` (`right`).
pub fn companion_check(g: &GcaFgcSeed, left: &FgcSeed, right: &FgcSeed) -> Vec<CheckResult> {
    let n = g.n();
    let rm = g.r.matrix();
    let gc1 = rm.mul(&g.g) == left.g.mul(&rm) && g.c == left.c;
    let gg1 = g.g == right.g && g.c.mul(&rm) == rm.mul(&right.c);
    let mut gff2 = true;
    let mut gff1 = true;
    let mut witness = Vec::new();
    let names = indexed_names("u", n);
    let powers: Vec<Vec<i64>> = (0..n)
        .map(|j| {
            let mut e = vec![0; n];
            e[j] = g.r.get(j) as i64;
            e
        })
        .collect();
    for i in 0..n {
        let ri = g.r.get(i);
        let bin = g.f_specialized(i, |j, s| binomial(BigInt::from(g.r.get(j)), BigInt::from(s)));
        if bin != left.f[i].pow(ri as u32) {
            gff2 = false;
            witness.push(format!("F{}(u,bin)={}", i + 1, bin.to_text(&names)));
        }
        let zero = g.f_specialized(i, |_, _| BigInt::from(0));
        if zero != right.f[i].substitute_monomials(&powers, n) {
            gff1 = false;
            witness.push(format!("F{}(u,0)={}", i + 1, zero.to_text(&names)));
        }
    }
    vec![
        CheckResult::expect("companion-left-gc", gc1, || format!("G={} C={} LG={} LC={}", g.g, g.c, left.g, left.c)),
        CheckResult::expect("companion-right-gc", gg1, || format!("G={} C={} RG={} RC={}", g.g, g.c, right.g, right.c)),
        CheckResult::expect("companion-binomial-f", gff2, || witness.join("; ")),
        CheckResult::expect("companion-zero-f", gff1, || witness.join("; ")),
    ]
}

/// Per-node identities of degree `R`. `d` is the skew-symmetrizer of `RB`.
pub fn check_gca_invariants(g: &GcaFgcSeed, d: &[BigInt]) -> Vec<CheckResult> {
    let n = g.n();
    let names = g.names();
    let mut out = vec![CheckResult::expect("sign-coherence", g.c.first_incoherent_column().is_none(), || {
        format!("C={}", g.c)
    })];
    for r in f_shape_checks(&g.f, &names) {
        out.push(if r.identity == "f-positivity" { r.conjecture() } else { r });
    }
    let zero_u = g.f.iter().position(|f| {
        let s: LaurentPoly = LaurentPoly::from_terms(
            f.nvars(),
            f.terms().filter(|(e, _)| e[..n].iter().all(|&x| x == 0)).map(|(e, c)| (e.clone(), c.clone())),
        );
        !s.is_one()
    });
    out.push(CheckResult::expect("f-zero-u", zero_u.is_none(), || {
        format!("F{}={}", zero_u.unwrap() + 1, g.f[zero_u.unwrap()].to_text(&names))
    }));
    let top = g.f.iter().position(|f| !unique_top_monomial(f, n));
    out.push(CheckResult::expect("f-top-monomial", top.is_none(), || {
        format!("F{}={}", top.unwrap() + 1, g.f[top.unwrap()].to_text(&names))
    }));
    let rd = g.r.matrix().mul(&IntMatrix::diag(d));
    let lhs = g.g.transpose().mul(&rd).mul(&g.c);
    out.push(CheckResult::expect("gc-duality", lhs == rd, || format!("G={} C={} RD={}", g.g, g.c, rd)));
    let drb_t = IntMatrix::diag(d).mul(&g.r.matrix()).mul(&g.bt);
    let drb = IntMatrix::diag(d).mul(&g.r.matrix()).mul(&g.b0);
    let rhs = g.c.transpose().mul(&drb).mul(&g.c);
    out.push(CheckResult::expect("b-conjugation", drb_t == rhs, || format!("B_t={} C={}", g.bt, g.c)));
    out.push(unimodular(&g.g, &g.c));
    let is_perm = IntMatrix::permutation_of(&g.g).is_some();
    out.push(CheckResult::expect("detropicalization", !is_perm || g.f.iter().all(LaurentPoly::is_one), || {
        format!("G={} but F is not 1", g.g)
    }));
    out
}

/// The componentwise-maximal `u`-exponent occurs, with coefficient exactly 1
/// (no `v` dependence).
fn unique_top_monomial(f: &LaurentPoly, n: usize) -> bool {
    let top = f.max_exponents();
    let mut coeff = LaurentPoly::zero(f.nvars());
    for (e, c) in f.terms() {
        if e[..n] == top[..n] {
            coeff = &coeff + &LaurentPoly::monomial(e.clone(), c.clone());
        }
    }
    let mut shift = vec![0i64; f.nvars()];
    for (s, t) in shift.iter_mut().zip(&top).take(n) {
        *s = -t;
    }
    coeff.shift(&shift).is_one()
}

/// The word from `t1` to `t2` in the tree, given their words from the root.
pub fn connecting_word(w1: &[usize], w2: &[usize]) -> Vec<usize> {
    let common = w1.iter().zip(w2).take_while(|(a, b)| a == b).count();
    let mut out: Vec<usize> = w1[common..].iter().rev().cloned().collect();
    out.extend_from_slice(&w2[common..]);
    out
}

/// Consequences of a detected `G_{t1} = σ G_{t2}` in a degree-R pattern, with
/// `w1`, `w2` the words of `t1`, `t2` from the root.
pub fn check_gca_pair(
    g1: &GcaFgcSeed,
    g2: &GcaFgcSeed,
    sigma: &Permutation,
    w1: &[usize],
    w2: &[usize],
) -> Vec<CheckResult> {
    let n = g1.n();
    let r = &g1.r;
    let mut out = vec![CheckResult::expect("strong-compatibility", check_strong_compat(sigma, r), || {
        format!("sigma={sigma} R={r}")
    })];
    out.push(CheckResult::expect("v-match", g1.v == g2.v, || format!("v_t1={:?} v_t2={:?}", g1.v, g2.v)));
    let f_ok = (0..n).all(|i| g1.f[i] == g2.f[sigma.inverse().apply(i)]);
    out.push(CheckResult::expect("detropicalization-pair", f_ok && g1.bt == g2.bt.permute_both(sigma), || {
        format!("sigma={sigma}")
    }));
    let path = connecting_word(w1, w2);
    let odd = (0..n).find(|&i| r.get(i) >= 3 && path.iter().filter(|&&k| k == i).count() % 2 == 1);
    out.push(CheckResult::expect("even-occurrence", odd.is_none(), || {
        format!("index {} occurs an odd number of times", odd.unwrap() + 1)
    }));
    // t3 is reached from t1 by walking σ(w2) backwards; v_{i,s} = v_{σ(i),s;t3}.
    let mut v3 = g1.v.clone();
    for &k in w2.iter().rev() {
        v3[sigma.apply(k)].reverse();
    }
    let t3_ok = (0..n).all(|i| r.get(i) < 2 || v3[sigma.apply(i)] == (1..r.get(i)).collect::<Vec<_>>());
    out.push(CheckResult::expect("t3-v-identity", t3_ok, || format!("v_t3={v3:?}")));
    out
}

/// Degree-1 regression: with `R = I` the degree-R mutations agree with the ordinary ones.
pub fn degree_one_regression(b: &ExchangeMatrix, coeff: CoeffKind, word: &[usize]) -> Result<bool, PatternError> {
    let n = b.n();
    let r = DegreeR::ones(n);
    let mut s = GcaSeed::initial(b.clone(), r.clone(), coeff, None)?;
    let mut t = Seed::initial(b.clone(), coeff);
    let mut g = GcaFgcSeed::initial(b.b(), &r);
    let mut h = FgcSeed::initial(b.b());
    for &k in word {
        s = s.mutate(k)?;
        t = t.mutate(k)?;
        g = g.mutate(k)?;
        h = h.mutate(k)?;
        if s.to_seed() != t || g.to_fgc() != h || s.x.iter().zip(&t.x).any(|(a, b)| a.to_text(&t.names()) != b.to_text(&t.names())) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Skew-symmetrizer of `RB`.
pub fn rb_symmetrizer(b: &IntMatrix, r: &DegreeR) -> Result<Vec<BigInt>, PatternError> {
    skew_symmetrizer(&r.matrix().mul(b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fgc::conjugate_pair;
    use num_traits::One;

    fn m(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_rows(rows).unwrap()
    }

    fn setup() -> (ExchangeMatrix, DegreeR) {
        (ExchangeMatrix::from_rows(&[vec![0, 1], vec![-1, 0]]).unwrap(), DegreeR::new(vec![2, 1]).unwrap())
    }

    #[test]
    fn seed_mutation_example() {
        let (b, r) = setup();
        let s = GcaSeed::initial(b, r, CoeffKind::Trivial, None).unwrap();
        let s1 = s.mutate(0).unwrap();
        let names = s.names();
        assert!(s1.x[0].equals(&RationalFn::parse("(x2^2 + x2 + 1)/(x1)", &names).unwrap()));
        assert_eq!(s1.mutate(0).unwrap(), s);
        let u = GcaSeed::initial(setup().0, setup().1, CoeffKind::Universal, None).unwrap();
        let u1 = u.mutate(0).unwrap();
        assert_eq!(u1.z[0], u.z[0]);
        assert_eq!(u1.mutate(0).unwrap(), u);
    }

    #[test]
    fn fgc_mutation_example() {
        let (b, r) = setup();
        let g1 = GcaFgcSeed::initial(b.b(), &r).mutate(0).unwrap();
        let names = g1.names();
        assert_eq!(g1.f[0], LaurentPoly::parse("1 + v1_1*u1 + u1^2", &names).unwrap());
        assert_eq!(g1.g, m(&[vec![-1, 0], vec![2, 1]]));
        assert_eq!(g1.c, m(&[vec![-1, 2], vec![0, 1]]));
        assert_eq!(g1.mutate(0).unwrap(), GcaFgcSeed::initial(b.b(), &r));
    }

    #[test]
    fn separation_example() {
        let (b, r) = setup();
        let g1 = GcaFgcSeed::initial(b.b(), &r).mutate(0).unwrap();
        let yp = GcaSeed::initial(b.clone(), r.clone(), CoeffKind::YPrincipal, None).unwrap();
        let (_, y) = gca_separation(&g1, &yp).unwrap();
        assert_eq!(y, vec![SfElem::Tropical(vec![-1, 0]), SfElem::Tropical(vec![2, 1])]);
        let t = GcaSeed::initial(b, r, CoeffKind::Trivial, None).unwrap();
        let (x, _) = gca_separation(&g1, &t).unwrap();
        assert!(x[0].equals(&t.mutate(0).unwrap().x[0]));
    }

    #[test]
    fn companion_example() {
        let (b, r) = setup();
        let (rb, br) = conjugate_pair(b.b(), &r.as_bigints());
        let g1 = GcaFgcSeed::initial(b.b(), &r).mutate(0).unwrap();
        let l = FgcSeed::initial(&rb).mutate(0).unwrap();
        let rr = FgcSeed::initial(&br).mutate(0).unwrap();
        assert_eq!(l.c, m(&[vec![-1, 2], vec![0, 1]]));
        assert!(companion_check(&g1, &l, &rr).iter().all(|c| c.passed));
        let d = rb_symmetrizer(b.b(), &r).unwrap();
        assert_eq!(d, vec![BigInt::one(), BigInt::from(2)]);
        assert!(check_gca_invariants(&g1, &d).iter().all(|c| c.passed));
    }

    #[test]
    fn strong_compatibility() {
        let id = Permutation::identity(2);
        assert!(check_strong_compat(&id, &DegreeR::new(vec![2, 1]).unwrap()));
        assert!(!check_strong_compat(&Permutation::transposition(2, 0, 1), &DegreeR::new(vec![2, 1]).unwrap()));
        assert!(check_strong_compat(&Permutation::transposition(3, 1, 2), &DegreeR::new(vec![2, 1, 1]).unwrap()));
    }

    #[test]
    fn degree_one_matches_ordinary() {
        let b = ExchangeMatrix::from_rows(&[vec![0, 2], vec![-1, 0]]).unwrap();
        for coeff in [CoeffKind::Trivial, CoeffKind::Principal, CoeffKind::Universal] {
            assert!(degree_one_regression(&b, coeff, &[0, 1, 0, 1]).unwrap());
        }
    }

    #[test]
    fn words_between_nodes() {
        assert_eq!(connecting_word(&[0, 1, 0], &[0, 2]), vec![0, 1, 2]);
        assert_eq!(connecting_word(&[], &[1, 0]), vec![1, 0]);
    }
}
