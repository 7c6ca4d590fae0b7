use std::fmt;

use num_bigint::BigUint;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{mul_mod, pow_mod_u64};

/// Dense polynomial over F_p (p prime, at most 64 bits), ascending coefficients,
/// trimmed.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PolyFp {
    p: u64,
    coeffs: Vec<u64>,
}

impl PolyFp {
    pub fn new(p: u64, coeffs: Vec<u64>) -> Self {
        let mut coeffs: Vec<u64> = coeffs.into_iter().map(|c| c % p).collect();
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        PolyFp { p, coeffs }
    }

    pub fn from_i64(p: u64, coeffs: &[i64]) -> Self {
        let pi = p as i128;
        Self::new(
            p,
            coeffs
                .iter()
                .map(|&c| (c as i128).rem_euclid(pi) as u64)
                .collect(),
        )
    }

    pub fn zero(p: u64) -> Self {
        PolyFp { p, coeffs: Vec::new() }
    }

    pub fn one(p: u64) -> Self {
        Self::new(p, vec![1])
    }

    pub fn x(p: u64) -> Self {
        Self::new(p, vec![0, 1])
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> u64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; zero for the zero polynomial.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn lc(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    fn inv(&self, a: u64) -> u64 {
        debug_assert!(!a.is_multiple_of(self.p));
        pow_mod_u64(a, self.p - 2, self.p)
    }

    pub fn eval(&self, x: u64) -> u64 {
        let mut acc = 0u64;
        for &c in self.coeffs.iter().rev() {
            acc = (mul_mod(acc, x % self.p, self.p) + c) % self.p;
        }
        acc
    }

    pub fn scale(&self, c: u64) -> Self {
        Self::new(
            self.p,
            self.coeffs.iter().map(|&a| mul_mod(a, c, self.p)).collect(),
        )
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(self.inv(self.lc()))
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new(
            self.p,
            (0..n).map(|i| (self.coeff(i) + o.coeff(i)) % self.p).collect(),
        )
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new(
            self.p,
            (0..n)
                .map(|i| (self.coeff(i) + self.p - o.coeff(i)) % self.p)
                .collect(),
        )
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero(self.p);
        }
        let p = self.p;
        let mut out = vec![0u64; self.coeffs.len() + o.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.coeffs.iter().enumerate() {
                out[i + j] = (out[i + j] + mul_mod(a, b, p)) % p;
            }
        }
        Self::new(p, out)
    }

    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let p = self.p;
        if self.coeffs.len() < d.coeffs.len() {
            return (Self::zero(p), self.clone());
        }
        let mut r = self.coeffs.clone();
        let dn = d.degree();
        let inv = self.inv(d.lc());
        let mut q = vec![0u64; self.coeffs.len() - dn];
        for k in (0..q.len()).rev() {
            let c = mul_mod(r[k + dn], inv, p);
            if c != 0 {
                for (j, &dc) in d.coeffs.iter().enumerate() {
                    r[k + j] = (r[k + j] + p - mul_mod(c, dc, p)) % p;
                }
            }
            q[k] = c;
        }
        r.truncate(dn);
        (Self::new(p, q), Self::new(p, r))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.div_rem(d).1
    }

    pub fn gcd(&self, o: &Self) -> Self {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> Self {
        let p = self.p;
        Self::new(
            p,
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| mul_mod(c, i as u64 % p, p))
                .collect(),
        )
    }

    /// `self^e mod m`.
    pub fn pow_mod(&self, e: &BigUint, m: &Self) -> Self {
        let mut result = Self::one(self.p).rem(m);
        let base = self.rem(m);
        for i in (0..e.bits()).rev() {
            result = result.mul(&result).rem(m);
            if e.bit(i) {
                result = result.mul(&base).rem(m);
            }
        }
        result
    }

    pub fn is_squarefree(&self) -> bool {
        !self.is_zero() && self.gcd(&self.derivative()).degree() == 0
    }

    /// Distinct roots in F_p, ascending.
    pub fn roots(&self) -> Vec<u64> {
        if self.is_zero() {
            return Vec::new();
        }
        let mut out: Vec<u64> = factor_mod_p(self, 0)
            .into_iter()
            .filter(|(g, _)| g.degree() == 1)
            .map(|(g, _)| (self.p - g.coeff(0)) % self.p)
            .collect();
        out.sort_unstable();
        out
    }

    pub fn has_root(&self) -> bool {
        if self.degree() == 0 {
            return self.is_zero();
        }
        let x = Self::x(self.p);
        let xp = x.pow_mod(&BigUint::from(self.p), self);
        self.gcd(&xp.sub(&x)).degree() > 0
    }

    /// Multiset of irreducible-factor degrees with multiplicity, ascending.
    pub fn degree_pattern(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (g, e) in factor_mod_p(self, 0) {
            for _ in 0..e {
                out.push(g.degree());
            }
        }
        out.sort_unstable();
        out
    }

    fn pth_root(&self) -> Self {
        // only called when every exponent with nonzero coefficient is divisible by p
        let p = self.p as usize;
        Self::new(self.p, self.coeffs.iter().step_by(p).copied().collect())
    }
}

impl fmt::Debug for PolyFp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PolyFp[{}]({})", self.p, self)
    }
}

impl fmt::Display for PolyFp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match (i, c) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => f.write_str("T")?,
                (1, c) => write!(f, "{c}*T")?,
                (i, 1) => write!(f, "T^{i}")?,
                (i, c) => write!(f, "{c}*T^{i}")?,
            }
        }
        Ok(())
    }
}

// ---- Cantor-Zassenhaus ----

/// Factors a nonzero polynomial over F_p into monic irreducibles with
/// multiplicities. The leading coefficient is dropped. Output is sorted by
/// (degree, coefficients) so it is independent of `seed`; the seed only drives
/// the randomized equal-degree splitting.
pub fn factor_mod_p(f: &PolyFp, seed: u64) -> Vec<(PolyFp, u32)> {
    assert!(!f.is_zero(), "cannot factor the zero polynomial");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<(PolyFp, u32)> = Vec::new();
    for (sf, mult) in squarefree_decomposition(&f.monic()) {
        for (g, d) in distinct_degree(&sf) {
            for h in equal_degree(&g, d, &mut rng) {
                match out.iter_mut().find(|(q, _)| *q == h) {
                    Some(entry) => entry.1 += mult,
                    None => out.push((h, mult)),
                }
            }
        }
    }
    out.sort_by(|a, b| {
        a.0.degree()
            .cmp(&b.0.degree())
            .then_with(|| a.0.coeffs.cmp(&b.0.coeffs))
    });
    out
}

/// Yun-style decomposition adapted to characteristic p: returns pairs
/// (squarefree factor, multiplicity) for a monic input.
fn squarefree_decomposition(f: &PolyFp) -> Vec<(PolyFp, u32)> {
    let mut out = Vec::new();
    if f.degree() == 0 {
        return out;
    }
    let p = f.p;
    let d = f.derivative();
    if d.is_zero() {
        for (g, m) in squarefree_decomposition(&f.pth_root()) {
            out.push((g, m * p as u32));
        }
        return out;
    }
    let mut c = f.gcd(&d);
    let mut w = f.div_rem(&c).0;
    let mut i = 1u32;
    while w.degree() > 0 {
        let y = w.gcd(&c);
        let fac = w.div_rem(&y).0;
        if fac.degree() > 0 {
            out.push((fac.monic(), i));
        }
        w = y;
        c = c.div_rem(&w).0;
        i += 1;
    }
    if c.degree() > 0 {
        for (g, m) in squarefree_decomposition(&c.monic().pth_root()) {
            out.push((g, m * p as u32));
        }
    }
    out
}

/// Splits a squarefree monic polynomial into products of irreducibles of equal
/// degree.
fn distinct_degree(f: &PolyFp) -> Vec<(PolyFp, usize)> {
    let p = f.p;
    let mut out = Vec::new();
    let mut rest = f.clone();
    let x = PolyFp::x(p);
    let mut h = x.clone();
    let pe = BigUint::from(p);
    let mut d = 1;
    while rest.degree() >= 2 * d {
        h = h.pow_mod(&pe, &rest);
        let g = rest.gcd(&h.sub(&x));
        if g.degree() > 0 {
            rest = rest.div_rem(&g).0;
            h = h.rem(&rest);
            out.push((g, d));
        }
        d += 1;
    }
    if rest.degree() > 0 {
        let deg = rest.degree();
        out.push((rest.monic(), deg));
    }
    out
}

fn equal_degree(f: &PolyFp, d: usize, rng: &mut ChaCha8Rng) -> Vec<PolyFp> {
    let n = f.degree();
    if n == d {
        return vec![f.monic()];
    }
    let p = f.p;
    loop {
        let a = PolyFp::new(p, (0..n).map(|_| rng.gen_range(0..p)).collect());
        if a.degree() == 0 {
            continue;
        }
        let b = if p == 2 {
            // trace map a + a^2 + ... + a^(2^(d-1))
            let mut t = a.clone();
            let mut acc = a.clone();
            for _ in 1..d {
                t = t.mul(&t).rem(f);
                acc = acc.add(&t);
            }
            acc
        } else {
            let e = (num_traits::pow(BigUint::from(p), d) - BigUint::one()) >> 1;
            a.pow_mod(&e, f).sub(&PolyFp::one(p))
        };
        let g = f.gcd(&b);
        if g.degree() > 0 && g.degree() < n {
            let h = f.div_rem(&g).0;
            let mut out = equal_degree(&g, d, rng);
            out.extend(equal_degree(&h.monic(), d, rng));
            return out;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn expand(p: u64, fs: &[(PolyFp, u32)]) -> PolyFp {
        let mut acc = PolyFp::one(p);
        for (g, e) in fs {
            for _ in 0..*e {
                acc = acc.mul(g);
            }
        }
        acc
    }

    #[test]
    fn t2_plus_1_mod_5_splits() {
        let f = PolyFp::from_i64(5, &[1, 0, 1]);
        let fs = factor_mod_p(&f, 0);
        assert_eq!(fs.len(), 2);
        assert_eq!(fs[0].0.coeffs(), &[2, 1]);
        assert_eq!(fs[1].0.coeffs(), &[3, 1]);
        assert_eq!(f.roots(), vec![2, 3]);
    }

    #[test]
    fn t2_plus_1_mod_7_irreducible() {
        let f = PolyFp::from_i64(7, &[1, 0, 1]);
        let fs = factor_mod_p(&f, 3);
        assert_eq!(fs, vec![(f.clone(), 1)]);
        assert!(!f.has_root());
    }

    #[test]
    fn cubic_mod_2_irreducible() {
        let f = PolyFp::from_i64(2, &[1, -3, 0, 1]);
        assert_eq!(f.degree_pattern(), vec![3]);
    }

    #[test]
    fn repeated_and_inseparable_factors() {
        // (T+1)^3 (T^2+T+1)^2 over F_3: T^2+T+1 = (T-1)^2 there
        let p = 3;
        let a = PolyFp::from_i64(p, &[1, 1]);
        let b = PolyFp::from_i64(p, &[1, 1, 1]);
        let f = a.mul(&a).mul(&a).mul(&b).mul(&b);
        let fs = factor_mod_p(&f, 9);
        assert_eq!(expand(p, &fs), f.monic());
        assert_eq!(f.degree_pattern(), vec![1, 1, 1, 1, 1, 1, 1]);
        // T^6 + 1 over F_2 = (T+1)^2 (T^2+T+1)^2
        let g = PolyFp::from_i64(2, &[1, 0, 0, 0, 0, 0, 1]);
        let gs = factor_mod_p(&g, 1);
        assert_eq!(gs.len(), 2);
        assert_eq!(expand(2, &gs), g);
        assert_eq!(gs[0].1, 2);
        assert_eq!(gs[1].1, 2);
    }

    #[test]
    fn factorization_independent_of_seed() {
        let f = PolyFp::from_i64(101, &[-1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1]);
        let a = factor_mod_p(&f, 1);
        let b = factor_mod_p(&f, 77);
        assert_eq!(a, b);
        assert_eq!(expand(101, &a), f);
    }

    #[test]
    fn large_prime() {
        let p = 1_000_000_007;
        let f = PolyFp::from_i64(p, &[-2, 0, 1]);
        let fs = factor_mod_p(&f, 0);
        assert_eq!(expand(p, &fs), f);
    }
}
