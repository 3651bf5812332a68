//! Fast paths for polynomial multiplication and exact division.
//!
//! Exponent vectors inside a known box are packed into one `u64` (Kronecker
//! substitution, first variable most significant, so key order is the
//! lexicographic order of the vectors) and coefficients are held as `i64` or
//! `i128`, or as residues modulo several primes when they are larger.
//! Every routine returns `None` when the box or a coefficient does not fit;
//! the caller then runs the general big-integer code.

use std::collections::{BTreeMap, BinaryHeap};

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rustc_hash::FxHashMap;

type Terms = BTreeMap<Vec<i64>, BigInt>;

/// Boxes up to this many cells use a dense accumulator.
const DENSE_CELLS: u64 = 1 << 22;


struct Packing {
    lo: Vec<i64>,
    strides: Vec<u64>,
    size: u64,
}

impl Packing {
    fn new(lo: Vec<i64>, hi: &[i64]) -> Option<Self> {
        let n = lo.len();
        let mut strides = vec![1u64; n];
        let mut size = 1u64;
        for i in (0..n).rev() {
            let d = hi[i].checked_sub(lo[i])?.checked_add(1)?;
            if d <= 0 {
                return None;
            }
            strides[i] = size;
            size = size.checked_mul(d as u64)?;
        }
        (size <= 1 << 62).then_some(Packing { lo, strides, size })
    }

    /// Key of `e − base`; the difference must lie in the box shifted to 0.
    fn key_from(&self, e: &[i64], base: &[i64]) -> u64 {
        e.iter().zip(base).zip(&self.strides).map(|((x, b), s)| (x - b) as u64 * s).sum()
    }

    fn unpack(&self, mut k: u64) -> Vec<i64> {
        let mut e = Vec::with_capacity(self.lo.len());
        for (l, s) in self.lo.iter().zip(&self.strides) {
            e.push((k / s) as i64 + l);
            k %= s;
        }
        e
    }

    fn pack(&self, terms: &Terms, base: &[i64]) -> Option<Vec<(u64, i128)>> {
        terms.iter().map(|(e, c)| Some((self.key_from(e, base), c.to_i128()?))).collect()
    }

    fn terms(&self, packed: Vec<(u64, i128)>) -> Terms {
        packed.into_iter().map(|(k, c)| (self.unpack(k), BigInt::from(c))).collect()
    }
}

fn bounds(terms: &Terms) -> (Vec<i64>, Vec<i64>) {
    let mut it = terms.keys();
    let first = it.next().expect("nonzero polynomial");
    let (mut lo, mut hi) = (first.clone(), first.clone());
    for e in it {
        for (i, &x) in e.iter().enumerate() {
            lo[i] = lo[i].min(x);
            hi[i] = hi[i].max(x);
        }
    }
    (lo, hi)
}

/// Product of two nonzero polynomials.
pub(crate) fn mul(a: &Terms, b: &Terms) -> Option<Terms> {
    let (alo, ahi) = bounds(a);
    let (blo, bhi) = bounds(b);
    let lo: Vec<i64> = alo.iter().zip(&blo).map(|(x, y)| x + y).collect();
    let hi: Vec<i64> = ahi.iter().zip(&bhi).map(|(x, y)| x + y).collect();
    let p = Packing::new(lo, &hi)?;
    let pairs = (a.len() * b.len()) as u64;
    let dense = p.size <= DENSE_CELLS && p.size <= 32 * pairs;
    // Every output coefficient is a sum of at most min(|a|, |b|) products.
    let bits = |t: &Terms| t.values().map(|c| c.bits()).max().unwrap_or(0);
    let bound_bits = bits(a) + bits(b) + u64::from(usize::BITS - a.len().min(b.len()).leading_zeros());
    if bound_bits > 126 {
        let ka: Vec<u64> = a.keys().map(|e| p.key_from(e, &alo)).collect();
        let kb: Vec<u64> = b.keys().map(|e| p.key_from(e, &blo)).collect();
        let out = modular::mul(&ka, a.values(), &kb, b.values(), bound_bits + 1, p.size, dense)?;
        return Some(out.into_iter().map(|(k, c)| (p.unpack(k), c)).collect());
    }
    let pa = p.pack(a, &alo)?;
    let pb = p.pack(b, &blo)?;
    let out = if bound_bits <= 62 {
        let narrow = |t: &[(u64, i128)]| t.iter().map(|&(k, c)| (k, c as i64)).collect::<Vec<_>>();
        accumulate(&narrow(&pa), &narrow(&pb), p.size, dense).into_iter().map(|(k, c)| (k, c as i128)).collect()
    } else {
        accumulate(&pa, &pb, p.size, dense)
    };
    Some(p.terms(out))
}

/// Sum of all pairwise products; the caller has ruled out overflow.
fn accumulate<T>(a: &[(u64, T)], b: &[(u64, T)], size: u64, dense: bool) -> Vec<(u64, T)>
where
    T: Copy + Default + PartialEq + std::ops::Mul<Output = T> + std::ops::AddAssign,
{
    let zero = T::default();
    if dense {
        let mut acc = vec![zero; size as usize];
        for &(ka, ca) in a {
            let row = &mut acc[ka as usize..];
            for &(kb, cb) in b {
                row[kb as usize] += ca * cb;
            }
        }
        acc.into_iter().enumerate().filter(|(_, c)| *c != zero).map(|(k, c)| (k as u64, c)).collect()
    } else {
        let mut acc: FxHashMap<u64, T> = FxHashMap::default();
        acc.reserve(a.len().max(b.len()) * 4);
        for &(ka, ca) in a {
            for &(kb, cb) in b {
                *acc.entry(ka + kb).or_insert(zero) += ca * cb;
            }
        }
        acc.into_iter().filter(|(_, c)| *c != zero).collect()
    }
}

/// Products with large coefficients, computed modulo several 62-bit primes
/// in Montgomery form and recovered by Chinese remaindering.
mod modular {
    use num_bigint::BigInt;
    use num_integer::Integer;
    use num_traits::{One, ToPrimitive, Zero};
    use rustc_hash::FxHashMap;

    use super::DENSE_CELLS;

    const PRIMES: [u64; 12] = [
        0x3fffffffffffffc7,
        0x3fffffffffffffa9,
        0x3fffffffffffff8b,
        0x3fffffffffffff71,
        0x3fffffffffffff67,
        0x3fffffffffffff59,
        0x3fffffffffffff55,
        0x3fffffffffffff3d,
        0x3fffffffffffff35,
        0x3ffffffffffffeef,
        0x3ffffffffffffee1,
        0x3ffffffffffffec3,
    ];

    #[derive(Clone, Copy)]
    struct Mont {
        p: u64,
        /// −p⁻¹ mod 2⁶⁴.
        neg_inv: u64,
    }

    impl Mont {
        fn new(p: u64) -> Self {
            let mut inv = p;
            for _ in 0..6 {
                inv = inv.wrapping_mul(2u64.wrapping_sub(p.wrapping_mul(inv)));
            }
            Mont { p, neg_inv: inv.wrapping_neg() }
        }

        /// `t · 2⁻⁶⁴ mod p` for `t < p²`.
        fn redc(self, t: u128) -> u64 {
            let m = (t as u64).wrapping_mul(self.neg_inv);
            let u = ((t + u128::from(m) * u128::from(self.p)) >> 64) as u64;
            if u >= self.p { u - self.p } else { u }
        }

        fn residue(self, c: &BigInt) -> u64 {
            c.mod_floor(&BigInt::from(self.p)).to_u64().unwrap()
        }

        /// Montgomery form `c · 2⁶⁴ mod p`.
        fn to_mont(self, c: &BigInt) -> u64 {
            ((u128::from(self.residue(c)) << 64) % u128::from(self.p)) as u64
        }
    }

    /// Coefficients of `Σ a·b` at packed keys, given that every true
    /// coefficient is below `2^(bits − 1)` in absolute value.
    pub(super) fn mul<'a>(
        ka: &[u64],
        ca: impl Iterator<Item = &'a BigInt>,
        kb: &[u64],
        cb: impl Iterator<Item = &'a BigInt>,
        bits: u64,
        size: u64,
        dense: bool,
    ) -> Option<Vec<(u64, BigInt)>> {
        let count = bits.div_ceil(61) as usize;
        if count > PRIMES.len() {
            return None;
        }
        let ms: Vec<Mont> = PRIMES[..count].iter().map(|&p| Mont::new(p)).collect();
        let ca: Vec<BigInt> = ca.cloned().collect();
        let ra: Vec<u64> = ca.iter().flat_map(|c| ms.iter().map(move |m| m.residue(c))).collect();
        let rb: Vec<u64> = cb.flat_map(|c| ms.iter().map(move |m| m.to_mont(c))).collect();

        let cells = size.checked_mul(count as u64)?;
        let dense = dense && cells <= DENSE_CELLS;
        let mut slots: FxHashMap<u64, usize> = FxHashMap::default();
        let mut keys: Vec<u64> = Vec::new();
        let mut acc: Vec<u64> = if dense { vec![0; cells as usize] } else { Vec::new() };
        for (i, &x) in ka.iter().enumerate() {
            let xa = &ra[i * count..(i + 1) * count];
            for (j, &y) in kb.iter().enumerate() {
                let yb = &rb[j * count..(j + 1) * count];
                let k = x + y;
                let slot = if dense {
                    k as usize
                } else {
                    *slots.entry(k).or_insert_with(|| {
                        keys.push(k);
                        acc.resize(acc.len() + count, 0);
                        keys.len() - 1
                    })
                };
                let cell = &mut acc[slot * count..(slot + 1) * count];
                for (((s, m), &u), &v) in cell.iter_mut().zip(&ms).zip(xa).zip(yb) {
                    let t = *s + m.redc(u128::from(u) * u128::from(v));
                    *s = if t >= m.p { t - m.p } else { t };
                }
            }
        }
        if dense {
            keys = (0..size).collect();
        }

        let modulus = ms.iter().fold(BigInt::one(), |acc, m| acc * m.p);
        let half = &modulus >> 1;
        let basis: Vec<BigInt> = ms
            .iter()
            .map(|m| {
                let p = BigInt::from(m.p);
                let rest = &modulus / &p;
                let inv = (&rest % &p).modpow(&(&p - 2), &p);
                rest * inv
            })
            .collect();
        let mut out = Vec::new();
        for (slot, k) in keys.into_iter().enumerate() {
            let cell = &acc[slot * count..(slot + 1) * count];
            if cell.iter().all(|&r| r == 0) {
                continue;
            }
            let mut c = cell.iter().zip(&basis).fold(BigInt::zero(), |acc, (&r, e)| acc + e * r) % &modulus;
            if c > half {
                c -= &modulus;
            }
            out.push((k, c));
        }
        if !dense {
            out.sort_unstable_by_key(|t| t.0);
        }
        Some(out)
    }
}

/// Exact division of `f` by `g`, both with componentwise minimal exponent 0,
/// the quotient confined to `0..=bound`. The inner `None` means `g` does not
/// divide `f`.
pub(crate) fn div_exact(f: &Terms, g: &Terms, bound: &[i64]) -> Option<Option<Terms>> {
    let (origin, f_hi) = bounds(f);
    debug_assert!(origin.iter().all(|&x| x == 0));
    let p = Packing::new(origin.clone(), &f_hi)?;
    let mut pg = p.pack(g, &origin)?;
    pg.sort_unstable_by(|a, b| b.0.cmp(&a.0));
    let (lead_k, lead_c) = pg[0];
    let lead_e = p.unpack(lead_k);
    let pf = p.pack(f, &origin)?;

    // The quotient term cancelling the remainder term at key `i`.
    let step = |i: u64, c: i128| -> Option<(u64, i128)> {
        let e = p.unpack(i);
        let fits = e.iter().zip(&lead_e).zip(bound).all(|((x, l), b)| x >= l && x - l <= *b);
        (fits && c % lead_c == 0).then(|| (i - lead_k, c / lead_c))
    };

    let mut quot = Vec::new();
    if p.size <= DENSE_CELLS && p.size <= 16 * pf.len() as u64 {
        let mut rem = vec![0i128; p.size as usize];
        for &(k, c) in &pf {
            rem[k as usize] = c;
        }
        for i in (0..p.size as usize).rev() {
            let c = rem[i];
            if c == 0 {
                continue;
            }
            let Some((dk, q)) = step(i as u64, c) else { return Some(None) };
            rem[i] = 0;
            for &(gk, gc) in &pg[1..] {
                let s = &mut rem[(dk + gk) as usize];
                *s = s.checked_sub(q.checked_mul(gc)?)?;
            }
            quot.push((dk, q));
        }
    } else {
        let mut rem: FxHashMap<u64, i128> = pf.iter().copied().collect();
        let mut heap: BinaryHeap<u64> = pf.iter().map(|&(k, _)| k).collect();
        while let Some(i) = heap.pop() {
            let c = match rem.remove(&i) {
                Some(c) if c != 0 => c,
                _ => continue,
            };
            let Some((dk, q)) = step(i, c) else { return Some(None) };
            for &(gk, gc) in &pg[1..] {
                let k = dk + gk;
                let s = rem.entry(k).or_insert_with(|| {
                    heap.push(k);
                    0
                });
                *s = s.checked_sub(q.checked_mul(gc)?)?;
            }
            quot.push((dk, q));
        }
    }
    Some(Some(p.terms(quot)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn schoolbook(a: &Terms, b: &Terms) -> Terms {
        let mut out = Terms::new();
        for (ea, ca) in a {
            for (eb, cb) in b {
                let e: Vec<i64> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                *out.entry(e).or_default() += ca * cb;
            }
        }
        out.retain(|_, c| *c != BigInt::from(0));
        out
    }

    fn poly(seed: u64, len: usize, scale: &BigInt) -> Terms {
        let mut x = seed;
        let mut next = move || {
            x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            x >> 33
        };
        (0..len)
            .map(|_| {
                let e = vec![(next() % 7) as i64 - 3, (next() % 5) as i64, (next() % 9) as i64];
                let c = BigInt::from(next() as i64 - (1 << 30)) * scale + BigInt::from(next());
                (e, c)
            })
            .collect()
    }

    #[test]
    fn products_match_schoolbook_at_every_coefficient_size() {
        for scale_bits in [0u32, 20, 40, 70, 200, 250] {
            let scale = BigInt::from(1) << scale_bits;
            for seed in 0..4 {
                let a = poly(seed, 40, &scale);
                let b = poly(seed + 100, 25, &scale);
                assert_eq!(mul(&a, &b).unwrap(), schoolbook(&a, &b), "scale 2^{scale_bits}");
                // Spread exponents make the box sparse.
                let spread = |t: &Terms| -> Terms {
                    t.iter().map(|(e, c)| (e.iter().map(|x| x * 1000).collect(), c.clone())).collect()
                };
                let (a, b) = (spread(&a), spread(&b));
                assert_eq!(mul(&a, &b).unwrap(), schoolbook(&a, &b), "sparse, scale 2^{scale_bits}");
            }
        }
        // The cross terms cancel.
        let one: BigInt = BigInt::from(1) << 300;
        let a: Terms = [(vec![1, 0, 0], one.clone()), (vec![0, 1, 0], one.clone())].into();
        let b: Terms = [(vec![1, 0, 0], one.clone()), (vec![0, 1, 0], -one.clone())].into();
        assert_eq!(mul(&a, &b).unwrap(), schoolbook(&a, &b));
    }
}
