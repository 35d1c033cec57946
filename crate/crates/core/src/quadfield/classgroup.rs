// SPDX-License-Identifier: Apache-2.0

//! Class groups of negative discriminants by enumerating reduced forms.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::forms::{check_discriminant, prime_form_above, QuadForm};
use crate::arith::{factorize, sqrt_mod_prime};
use crate::error::{Error, Result};

/// Reduced forms of a discriminant together with their count `h`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassGroupSummary {
    pub disc: i128,
    pub h: u64,
    /// Sorted by `(A, B)`; the principal form comes first.
    pub forms: Vec<QuadForm>,
}

impl ClassGroupSummary {
    pub fn compute(disc: i128) -> Result<Self> {
        let forms = reduced_forms(disc)?;
        Ok(Self {
            disc,
            h: forms.len() as u64,
            forms,
        })
    }

    pub fn principal(&self) -> QuadForm {
        self.forms[0]
    }
}

/// `d` for `d = 1 mod 4`, otherwise `4d`. `d` must be squarefree and not 0 or 1.
pub fn fundamental_discriminant(d: i128) -> Result<i128> {
    if d == 0 || d == 1 {
        return Err(Error::Precondition(format!(
            "d = {d} does not define a quadratic field"
        )));
    }
    if !factorize(&BigInt::from(d))?.is_squarefree() {
        return Err(Error::NotSquarefree(d.into()));
    }
    Ok(if d.rem_euclid(4) == 1 { d } else { 4 * d })
}

/// Largest `|D|` the enumerator accepts. Its prime table has
/// `sqrt(|D|/3)` entries.
pub const MAX_ENUMERATED_DISC: u64 = 300_000_000_000_000;

/// All reduced primitive forms of the negative discriminant `disc`, sorted
/// by `(A, B)`.
pub fn reduced_forms(disc: i128) -> Result<Vec<QuadForm>> {
    let mut forms = Vec::new();
    for_each_reduced(disc, |a, b, c| {
        forms.push(QuadForm {
            a: a as i128,
            b: b as i128,
            c: c as i128,
        })
    })?;
    forms.sort_unstable();
    Ok(forms)
}

/// Number of reduced primitive forms of `disc`, without storing them.
pub fn count_reduced_forms(disc: i128) -> Result<u64> {
    let mut h = 0;
    for_each_reduced(disc, |_, _, _| h += 1)?;
    Ok(h)
}

/// Calls `visit(A, B, C)` for every reduced primitive form of `disc`.
///
/// For each `A <= sqrt(|D|/3)` the admissible `B` in `(-A, A]` are the
/// square roots of `D` modulo `4A`, assembled by CRT from roots modulo the
/// prime powers of `4A`. The work is roughly `sqrt(|D|)` times the number
/// of roots per modulus.
fn for_each_reduced(disc: i128, mut visit: impl FnMut(i64, i64, i64)) -> Result<()> {
    check_discriminant(disc)?;
    let abs = disc.unsigned_abs();
    if abs > MAX_ENUMERATED_DISC as u128 {
        return Err(Error::OutOfRange(disc.into()));
    }
    let abs = abs as i64;
    let a_max = (abs / 3).isqrt() as usize;
    let spf = smallest_prime_factors(a_max);
    let mut roots = RootTables::new(abs);
    let mut residues = Vec::new();
    for a in 1..=a_max {
        if !roots.residues_mod_4a(a as i64, &spf, &mut residues) {
            continue;
        }
        let a = a as i64;
        for &x in &residues {
            let b = if x > a { x - 2 * a } else { x };
            let c = (b * b + abs) / (4 * a);
            if c < a || (c == a && b < 0) {
                continue;
            }
            if a.gcd(&b).gcd(&c) == 1 {
                visit(a, b, c);
            }
        }
    }
    Ok(())
}

fn smallest_prime_factors(n: usize) -> Vec<u32> {
    let mut spf = vec![0u32; n + 1];
    for i in 2..=n {
        if spf[i] == 0 {
            for j in (i..=n).step_by(i) {
                if spf[j] == 0 {
                    spf[j] = i as u32;
                }
            }
        }
    }
    spf
}

/// Memoized square roots of `D` modulo prime powers.
struct RootTables {
    abs: i64,
    /// Roots modulo `2^s`, indexed by `s`.
    two: Vec<Option<Vec<i64>>>,
    /// Roots modulo `p^k`, keyed by `(p, k)`.
    odd: HashMap<(i64, u32), Vec<i64>>,
}

impl RootTables {
    fn new(abs: i64) -> Self {
        Self {
            abs,
            two: Vec::new(),
            odd: HashMap::new(),
        }
    }

    /// `D mod m` in `[0, m)`.
    fn disc_mod(&self, m: i64) -> i64 {
        (-self.abs).rem_euclid(m)
    }

    fn brute(&self, m: i64) -> Vec<i64> {
        let target = self.disc_mod(m);
        (0..m).filter(|&x| (x * x) % m == target).collect()
    }

    fn mod_two_power(&mut self, s: u32) -> &[i64] {
        let idx = s as usize;
        if self.two.len() <= idx {
            self.two.resize(idx + 1, None);
        }
        if self.two[idx].is_none() {
            self.two[idx] = Some(self.brute(1 << s));
        }
        self.two[idx].as_deref().expect("filled above")
    }

    fn mod_odd_power(&mut self, p: i64, k: u32) -> &[i64] {
        if !self.odd.contains_key(&(p, k)) {
            let pk = p.pow(k);
            let roots = if self.disc_mod(p) == 0 {
                self.brute(pk)
            } else {
                match sqrt_mod_prime(-(self.abs as i128), p as u128) {
                    None => Vec::new(),
                    Some(r) => {
                        let r = hensel_lift(r as i64, p, k, self.disc_mod(pk));
                        if r == 0 || 2 * r == pk {
                            vec![r]
                        } else {
                            vec![r, pk - r]
                        }
                    }
                }
            };
            self.odd.insert((p, k), roots);
        }
        &self.odd[&(p, k)]
    }

    /// Fills `out` with the `x` in `[0, 2a)` with `x^2 = D mod 4a`. Returns
    /// `false` when there are none.
    fn residues_mod_4a(&mut self, a: i64, spf: &[u32], out: &mut Vec<i64>) -> bool {
        out.clear();
        let mut rest = a;
        let s = rest.trailing_zeros() + 2;
        rest >>= rest.trailing_zeros();
        let mut modulus = 1i64 << s;
        let mut acc: Vec<i64> = self.mod_two_power(s).to_vec();
        while rest > 1 && !acc.is_empty() {
            let p = spf[rest as usize] as i64;
            let mut k = 0;
            while rest % p == 0 {
                rest /= p;
                k += 1;
            }
            let pk = p.pow(k);
            let local = self.mod_odd_power(p, k).to_vec();
            acc = crt_combine(&acc, modulus, &local, pk);
            modulus *= pk;
        }
        let two_a = 2 * a;
        out.extend(acc.into_iter().map(|x| x % two_a));
        out.sort_unstable();
        out.dedup();
        !out.is_empty()
    }
}

/// Lifts a root `r` of `x^2 = D mod p` (`p` odd, `p` not dividing `D`) to
/// one modulo `p^k`; `target` is `D mod p^k`.
fn hensel_lift(mut r: i64, p: i64, k: u32, target: i64) -> i64 {
    let mut m = p;
    for _ in 1..k {
        m *= p;
        let t = target.rem_euclid(m) as i128;
        let f = ((r as i128) * (r as i128) - t).rem_euclid(m as i128);
        let inv = mod_inverse((2 * r).rem_euclid(m), m) as i128;
        r = ((r as i128) - f * inv).rem_euclid(m as i128) as i64;
    }
    r
}

fn mod_inverse(a: i64, m: i64) -> i64 {
    let g = a.extended_gcd(&m);
    debug_assert_eq!(g.gcd, 1);
    g.x.rem_euclid(m)
}

/// All `x mod m1 m2` with `x = r1 mod m1` and `x = r2 mod m2`, for
/// coprime moduli.
fn crt_combine(r1s: &[i64], m1: i64, r2s: &[i64], m2: i64) -> Vec<i64> {
    let inv = mod_inverse(m1.rem_euclid(m2), m2) as i128;
    let mut out = Vec::with_capacity(r1s.len() * r2s.len());
    for &r1 in r1s {
        for &r2 in r2s {
            let t = (((r2 - r1) as i128).rem_euclid(m2 as i128) * inv) % m2 as i128;
            out.push(r1 + m1 * t as i64);
        }
    }
    out
}

/// Memo of class groups keyed by discriminant.
///
/// Entries are never replaced once written. Readers take a shared lock and
/// get an `Arc` to an immutable summary. Class numbers loaded from a
/// persisted cache are held separately since they carry no forms.
#[derive(Debug, Default)]
pub struct ClassGroupCache {
    groups: RwLock<HashMap<i128, Arc<ClassGroupSummary>>>,
    counts: RwLock<HashMap<i128, u64>>,
}

impl ClassGroupCache {
    pub fn new() -> Self {
        Self::default()
    }

    /// Process-wide cache used by [`class_number`] and [`class_group`].
    pub fn global() -> &'static ClassGroupCache {
        static CACHE: OnceLock<ClassGroupCache> = OnceLock::new();
        CACHE.get_or_init(ClassGroupCache::new)
    }

    pub fn summary(&self, disc: i128) -> Result<Arc<ClassGroupSummary>> {
        if let Some(s) = self.groups.read().expect("cache lock").get(&disc) {
            return Ok(Arc::clone(s));
        }
        let computed = Arc::new(ClassGroupSummary::compute(disc)?);
        let mut groups = self.groups.write().expect("cache lock");
        let entry = groups.entry(disc).or_insert(computed);
        let s = Arc::clone(entry);
        drop(groups);
        self.counts
            .write()
            .expect("cache lock")
            .entry(disc)
            .or_insert(s.h);
        Ok(s)
    }

    /// `h` of `disc`. Only the count is memoized, not the forms.
    pub fn class_number(&self, disc: i128) -> Result<u64> {
        if let Some(&h) = self.counts.read().expect("cache lock").get(&disc) {
            return Ok(h);
        }
        let h = count_reduced_forms(disc)?;
        Ok(*self
            .counts
            .write()
            .expect("cache lock")
            .entry(disc)
            .or_insert(h))
    }

    /// Seeds class numbers, e.g. from a file. Existing entries win.
    pub fn preload(&self, entries: impl IntoIterator<Item = (i128, u64)>) {
        let mut counts = self.counts.write().expect("cache lock");
        for (disc, h) in entries {
            counts.entry(disc).or_insert(h);
        }
    }

    /// All known `(D, h)` pairs sorted by `|D|`.
    pub fn counts(&self) -> Vec<(i128, u64)> {
        let mut out: Vec<_> = self
            .counts
            .read()
            .expect("cache lock")
            .iter()
            .map(|(&d, &h)| (d, h))
            .collect();
        out.sort_unstable_by_key(|&(d, _)| (d.unsigned_abs(), d));
        out
    }

    pub fn len(&self) -> usize {
        self.counts.read().expect("cache lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// `h(d)` for a squarefree negative `d`.
pub fn class_number(d: i128) -> Result<u64> {
    if d >= 0 {
        return Err(Error::Precondition(format!(
            "class_number needs d < 0, got {d}"
        )));
    }
    ClassGroupCache::global().class_number(fundamental_discriminant(d)?)
}

/// Class group summary of a discriminant, through the global cache.
pub fn class_group(disc: i128) -> Result<Arc<ClassGroupSummary>> {
    ClassGroupCache::global().summary(disc)
}

/// Order of the ideal class of a prime above the split prime `p` in `Q(sqrt(d))`.
pub fn ideal_class_order_above(p: u64, d: i128) -> Result<u64> {
    let disc = fundamental_discriminant(d)?;
    Ok(prime_form_above(p, disc)?.order())
}
