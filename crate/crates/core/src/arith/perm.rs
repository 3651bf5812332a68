//! Permutations of `{0, …, n-1}` (shown 1-based in cycle notation).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::ArithError;

/// A bijection `i ↦ images[i]`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation { images: (0..n).collect() }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self, ArithError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return Err(ArithError::NotABijection);
            }
            seen[i] = true;
        }
        Ok(Permutation { images })
    }

    pub fn transposition(n: usize, a: usize, b: usize) -> Self {
        let mut p = Self::identity(n);
        p.images.swap(a, b);
        p
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.images.len()];
        for (i, &j) in self.images.iter().enumerate() {
            inv[j] = i;
        }
        Permutation { images: inv }
    }

    /// `(self ∘ other)(i) = self(other(i))`.
    pub fn compose(&self, other: &Self) -> Self {
        Permutation { images: other.images.iter().map(|&i| self.images[i]).collect() }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// `σ` acting on a labeled tuple: slot `i` of the result holds `v[σ⁻¹(i)]`.
    pub fn act<T: Clone>(&self, v: &[T]) -> Vec<T> {
        let inv = self.inverse();
        (0..v.len()).map(|i| v[inv.apply(i)].clone()).collect()
    }

    /// Disjoint cycles of length at least two, each starting at its least element.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.images.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] || self.images[start] == start {
                continue;
            }
            let mut cyc = vec![start];
            seen[start] = true;
            let mut i = self.images[start];
            while i != start {
                seen[i] = true;
                cyc.push(i);
                i = self.images[i];
            }
            out.push(cyc);
        }
        out
    }

    /// Parses 1-based cycle notation such as `(1 2)(3 4)`; `id` or `()` is the identity.
    pub fn parse_cycles(n: usize, text: &str) -> Result<Self, ArithError> {
        let mut images: Vec<usize> = (0..n).collect();
        let t = text.trim();
        if t == "id" || t.is_empty() {
            return Ok(Permutation { images });
        }
        let bad = || ArithError::Parse(format!("bad cycle notation: {text}"));
        let mut rest = t;
        while !rest.is_empty() {
            let inner = rest.strip_prefix('(').ok_or_else(bad)?;
            let close = inner.find(')').ok_or_else(bad)?;
            let cyc: Vec<usize> = inner[..close]
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|s| !s.is_empty())
                .map(|s| s.parse::<usize>().ok().filter(|&v| v >= 1 && v <= n).map(|v| v - 1))
                .collect::<Option<_>>()
                .ok_or_else(bad)?;
            for w in 0..cyc.len() {
                images[cyc[w]] = cyc[(w + 1) % cyc.len()];
            }
            rest = inner[close + 1..].trim_start();
        }
        Self::from_images(images)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "id");
        }
        for c in cycles {
            let parts: Vec<String> = c.iter().map(|i| (i + 1).to_string()).collect();
            write!(f, "({})", parts.join(" "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Permutation {
    type Err = ArithError;

    /// Images as a 1-based bracket list, e.g. `[2,1,3]`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let v: Vec<usize> =
            serde_json::from_str(s).map_err(|e| ArithError::Parse(e.to_string()))?;
        if v.contains(&0) {
            return Err(ArithError::NotABijection);
        }
        Self::from_images(v.into_iter().map(|i| i - 1).collect())
    }
}

/// Serialized as 1-based images.
impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.images.iter().map(|i| i + 1).collect::<Vec<_>>().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Vec::<usize>::deserialize(d)?;
        if v.contains(&0) {
            return Err(serde::de::Error::custom("permutation images are 1-based"));
        }
        Permutation::from_images(v.into_iter().map(|i| i - 1).collect())
            .map_err(serde::de::Error::custom)
    }
}

/// All permutations of `0..n` in lexicographic order of images.
pub fn all_permutations(n: usize) -> Vec<Permutation> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = Vec::with_capacity(n);
    let mut used = vec![false; n];
    fn rec(n: usize, cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Permutation>) {
        if cur.len() == n {
            out.push(Permutation { images: cur.clone() });
            return;
        }
        for i in 0..n {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                rec(n, cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    rec(n, &mut cur, &mut used, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_notation_round_trip() {
        let p = Permutation::from_images(vec![1, 0, 3, 4, 2]).unwrap();
        assert_eq!(p.to_string(), "(1 2)(3 4 5)");
        assert_eq!(Permutation::parse_cycles(5, "(1 2)(3 4 5)").unwrap(), p);
        assert_eq!(Permutation::identity(3).to_string(), "id");
        assert!(Permutation::parse_cycles(2, "(1 3)").is_err());
    }

    #[test]
    fn act_uses_inverse() {
        let p = Permutation::from_images(vec![1, 2, 0]).unwrap();
        assert_eq!(p.act(&['a', 'b', 'c']), vec!['c', 'a', 'b']);
        assert!(p.compose(&p.inverse()).is_identity());
    }

    #[test]
    fn rejects_non_bijections() {
        assert!(Permutation::from_images(vec![0, 0]).is_err());
        assert!("[1,1]".parse::<Permutation>().is_err());
        assert_eq!("[2,1]".parse::<Permutation>().unwrap(), Permutation::transposition(2, 0, 1));
    }

    #[test]
    fn enumerates_symmetric_group() {
        assert_eq!(all_permutations(4).len(), 24);
    }
}
