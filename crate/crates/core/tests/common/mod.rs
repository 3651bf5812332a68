//! Test support: a brute-force seed oracle written against plain `i64`
//! matrices and exact rationals, and random skew-symmetrizable matrices.
#![allow(dead_code)]

use std::collections::{HashSet, VecDeque};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;

/// A seed with trivial coefficients, cluster variables evaluated at a fixed
/// positive rational point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleSeed {
    pub x: Vec<BigRational>,
    pub b: Vec<Vec<i64>>,
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl OracleSeed {
    /// Initial variables at `3/2, 5/3, 7/5, 11/7, …`: distinct Laurent
    /// polynomials with positive coefficients take distinct values there for
    /// every example these tests use.
    pub fn initial(b: &[Vec<i64>]) -> Self {
        const P: [i64; 9] = [2, 3, 5, 7, 11, 13, 17, 19, 23];
        let x = (0..b.len()).map(|i| q(P[i + 1], P[i])).collect();
        OracleSeed { x, b: b.to_vec() }
    }

    pub fn n(&self) -> usize {
        self.b.len()
    }

    /// `x_k' = (∏ x_i^[b_ik]_+ + ∏ x_i^[-b_ik]_+) / x_k` and
    /// `b_ij' = b_ij + sgn(b_ik) [b_ik b_kj]_+`, with row and column `k` negated.
    pub fn mutate(&self, k: usize) -> Self {
        let n = self.n();
        let mut plus = BigRational::one();
        let mut minus = BigRational::one();
        for i in 0..n {
            let e = self.b[i][k];
            if e > 0 {
                plus *= pow(&self.x[i], e);
            } else if e < 0 {
                minus *= pow(&self.x[i], -e);
            }
        }
        let mut x = self.x.clone();
        x[k] = (plus + minus) / &self.x[k];
        let mut b = self.b.clone();
        for i in 0..n {
            for j in 0..n {
                b[i][j] = if i == k || j == k {
                    -self.b[i][j]
                } else {
                    let p = self.b[i][k] * self.b[k][j];
                    self.b[i][j] + self.b[i][k].signum() * p.max(0)
                };
            }
        }
        OracleSeed { x, b }
    }

    /// Key of the unlabeled seed: indices sorted by value, `B` relabeled to match.
    pub fn key(&self) -> (Vec<BigRational>, Vec<Vec<i64>>) {
        let mut order: Vec<usize> = (0..self.n()).collect();
        order.sort_by(|&a, &b| self.x[a].cmp(&self.x[b]));
        let x = order.iter().map(|&i| self.x[i].clone()).collect();
        let b = order.iter().map(|&i| order.iter().map(|&j| self.b[i][j]).collect()).collect();
        (x, b)
    }

    /// The `σ` (as 0-based images) with `self = σ other`, i.e.
    /// `self_i = other_{σ⁻¹(i)}` for variables and `B`, if any.
    pub fn relabeling_from(&self, other: &OracleSeed) -> Option<Vec<usize>> {
        let n = self.n();
        let mut sigma = vec![usize::MAX; n];
        for i in 0..n {
            let j = (0..n).find(|&j| other.x[j] == self.x[i])?;
            sigma[j] = i;
        }
        if sigma.contains(&usize::MAX) {
            return None;
        }
        let mut inv = vec![0; n];
        for (j, &i) in sigma.iter().enumerate() {
            inv[i] = j;
        }
        let b_ok = (0..n).all(|i| (0..n).all(|j| self.b[i][j] == other.b[inv[i]][inv[j]]));
        b_ok.then_some(sigma)
    }
}

fn pow(x: &BigRational, e: i64) -> BigRational {
    (0..e).fold(BigRational::one(), |acc, _| acc * x)
}

/// Number of unlabeled seeds reachable from `b`, by breadth-first search up to
/// `limit` seeds (`None` when the limit is hit).
pub fn count_unlabeled_seeds(b: &[Vec<i64>], limit: usize) -> Option<usize> {
    let root = OracleSeed::initial(b);
    let mut seen = HashSet::new();
    seen.insert(root.key());
    let mut queue = VecDeque::from([root]);
    while let Some(s) = queue.pop_front() {
        for k in 0..s.n() {
            let m = s.mutate(k);
            if seen.insert(m.key()) {
                if seen.len() > limit {
                    return None;
                }
                queue.push_back(m);
            }
        }
    }
    Some(seen.len())
}

/// Shortest nonempty reduced word `w` from the root with `Σ_root = σ Σ_w`,
/// scanning words by length then lexicographically; returns the 0-based word
/// and `σ` images.
pub fn minimal_root_period(b: &[Vec<i64>], max_len: usize) -> Option<(Vec<usize>, Vec<usize>)> {
    let root = OracleSeed::initial(b);
    let n = root.n();
    let mut layer: Vec<(Vec<usize>, OracleSeed)> = vec![(Vec::new(), root.clone())];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for (w, s) in &layer {
            for k in 0..n {
                if w.last() == Some(&k) {
                    continue;
                }
                let m = s.mutate(k);
                let mut w2 = w.clone();
                w2.push(k);
                if let Some(sigma) = root.relabeling_from(&m) {
                    return Some((w2, sigma));
                }
                next.push((w2, m));
            }
        }
        layer = next;
    }
    None
}

/// Length of the shortest alternating word `i j i j …` from the root that is
/// a period, with its `σ`.
pub fn alternating_period(b: &[Vec<i64>], i: usize, j: usize, max_len: usize) -> Option<(usize, Vec<usize>)> {
    let root = OracleSeed::initial(b);
    let mut s = root.clone();
    for len in 1..=max_len {
        s = s.mutate(if len % 2 == 1 { i } else { j });
        if let Some(sigma) = root.relabeling_from(&s) {
            return Some((len, sigma));
        }
    }
    None
}

/// A random skew-symmetrizable `n × n` matrix with symmetrizer entries in
/// `{1, 2}` and `|b_ij| ≤ 2·d_j/gcd`.
pub fn random_skew_symmetrizable(rng: &mut impl Rng, n: usize) -> Vec<Vec<i64>> {
    let d: Vec<i64> = (0..n).map(|_| rng.gen_range(1..=2)).collect();
    let mut b = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let g = d[i].gcd(&d[j]);
            let m: i64 = rng.gen_range(-1..=1);
            b[i][j] = m * d[j] / g;
            b[j][i] = -m * d[i] / g;
        }
    }
    b
}

pub fn is_zero_matrix(b: &[Vec<i64>]) -> bool {
    b.iter().flatten().all(|v| v.is_zero())
}

pub const A2: [[i64; 2]; 2] = [[0, 1], [-1, 0]];

pub fn rows<const N: usize>(m: [[i64; N]; N]) -> Vec<Vec<i64>> {
    m.iter().map(|r| r.to_vec()).collect()
}

pub fn a2() -> Vec<Vec<i64>> {
    rows(A2)
}

pub fn a3() -> Vec<Vec<i64>> {
    rows([[0, 1, 0], [-1, 0, 1], [0, -1, 0]])
}

pub fn b2() -> Vec<Vec<i64>> {
    rows([[0, 2], [-1, 0]])
}

pub fn g2() -> Vec<Vec<i64>> {
    rows([[0, 3], [-1, 0]])
}

pub fn markov() -> Vec<Vec<i64>> {
    rows([[0, 2, -2], [-2, 0, 2], [2, -2, 0]])
}
