use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{is_p_integral, rat_mod, vp, Int, PolyFp, Rat, Valuation};

/// Dense univariate polynomial over Q, coefficients in ascending degree.
///
/// The coefficient vector is always trimmed: the zero polynomial has no
/// coefficients and every other polynomial has a nonzero last entry.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct PolyQ {
    coeffs: Vec<Rat>,
}

impl PolyQ {
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        PolyQ { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Rat::from_integer(c.into())).collect())
    }

    pub fn from_int_vec(coeffs: Vec<Int>) -> Self {
        Self::new(coeffs.into_iter().map(Rat::from_integer).collect())
    }

    pub fn zero() -> Self {
        PolyQ { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        Self::new(vec![c])
    }

    /// The monomial `T`.
    pub fn x() -> Self {
        Self::from_ints(&[0, 1])
    }

    /// `T - a`.
    pub fn linear_root(a: &Rat) -> Self {
        Self::new(vec![-a.clone(), Rat::one()])
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rat {
        self.coeffs.get(i).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0 (check `is_zero` separately).
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn lc(&self) -> Rat {
        self.coeffs.last().cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| c.is_one())
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rat::from_integer(Int::from(i)))
                .collect(),
        )
    }

    pub fn scale(&self, c: &Rat) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.lc().recip();
        self.scale(&inv)
    }

    /// Euclidean division; panics when `d` is zero.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by zero polynomial");
        if self.coeffs.len() < d.coeffs.len() {
            return (Self::zero(), self.clone());
        }
        let mut r = self.coeffs.clone();
        let dn = d.degree();
        let inv = d.lc().recip();
        let mut q = vec![Rat::zero(); self.coeffs.len() - dn];
        for k in (0..q.len()).rev() {
            let c = &r[k + dn] * &inv;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    r[k + j] -= &c * dc;
                }
            }
            q[k] = c;
        }
        r.truncate(dn);
        (Self::new(q), Self::new(r))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.div_rem(d).1
    }

    /// Monic gcd (zero if both inputs are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn is_squarefree(&self) -> bool {
        !self.is_zero() && self.gcd(&self.derivative()).degree() == 0
    }

    /// `T^n f(1/T)` where `n = deg f`.
    pub fn reverse(&self) -> Self {
        let mut c = self.coeffs.clone();
        c.reverse();
        Self::new(c)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// `f(T + a)`.
    pub fn taylor_shift(&self, a: &Rat) -> Self {
        let mut acc = Self::zero();
        let lin = Self::new(vec![a.clone(), Rat::one()]);
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * &lin) + &Self::constant(c.clone());
        }
        acc
    }

    /// `f(c T)`.
    pub fn scale_var(&self, c: &Rat) -> Self {
        let mut pw = Rat::one();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            out.push(a * &pw);
            pw *= c;
        }
        Self::new(out)
    }

    /// Composition `f(g(T))`.
    pub fn compose(&self, g: &Self) -> Self {
        let mut acc = Self::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * g) + &Self::constant(c.clone());
        }
        acc
    }

    pub fn is_p_integral(&self, p: u64) -> bool {
        self.coeffs.iter().all(|c| is_p_integral(c, p))
    }

    /// Minimum valuation of the coefficients (`+inf` for zero).
    pub fn content_valuation(&self, p: u64) -> Valuation {
        self.coeffs
            .iter()
            .map(|c| vp(c, p))
            .min()
            .unwrap_or(Valuation::PosInf)
    }

    /// Coefficient-wise reduction; `None` when some coefficient is not p-integral.
    pub fn reduce_mod_p(&self, p: u64) -> Option<PolyFp> {
        let m = Int::from(p);
        let mut out = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            let r = rat_mod(c, &m)?;
            out.push(super::int_to_u64(&r).expect("residue below p"));
        }
        Some(PolyFp::new(p, out))
    }

    /// Primitive integer polynomial proportional to `self`, with positive
    /// leading coefficient.
    pub fn primitive_part(&self) -> Vec<Int> {
        if self.is_zero() {
            return Vec::new();
        }
        let mut l = Int::one();
        for c in &self.coeffs {
            l = l.lcm(c.denom());
        }
        let ints: Vec<Int> = self
            .coeffs
            .iter()
            .map(|c| (c * Rat::from_integer(l.clone())).to_integer())
            .collect();
        let mut g = Int::zero();
        for c in &ints {
            g = g.gcd(c);
        }
        if ints.last().expect("nonzero").is_negative() {
            g = -g;
        }
        ints.into_iter().map(|c| c / &g).collect()
    }

    /// Rational roots, found from divisors of the primitive model's end
    /// coefficients. Intended for small inputs.
    pub fn rational_roots(&self) -> Vec<Rat> {
        let mut roots = Vec::new();
        if self.is_zero() {
            return roots;
        }
        let mut f = self.clone();
        while f.coeff(0).is_zero() && f.degree() > 0 {
            if !roots.iter().any(|r: &Rat| r.is_zero()) {
                roots.push(Rat::zero());
            }
            f = Self::new(f.coeffs[1..].to_vec());
        }
        if f.degree() == 0 {
            return roots;
        }
        if f.degree() == 1 {
            roots.push(-f.coeff(0) / f.coeff(1));
            return roots;
        }
        let prim = f.primitive_part();
        let a0 = prim[0].abs();
        let an = prim.last().expect("nonzero").abs();
        let (Some(dn), Some(dd)) = (small_divisors(&a0), small_divisors(&an)) else {
            return roots;
        };
        for n in &dn {
            for d in &dd {
                if !n.gcd(d).is_one() {
                    continue;
                }
                for sgn in [1i32, -1] {
                    let r = Rat::new(n * Int::from(sgn), d.clone());
                    if f.eval(&r).is_zero() && !roots.contains(&r) {
                        roots.push(r);
                    }
                }
            }
        }
        roots.sort();
        roots
    }
}

fn small_divisors(n: &Int) -> Option<Vec<Int>> {
    const LIMIT: u64 = 1 << 40;
    let n = super::int_to_u64(n).filter(|&v| v <= LIMIT)?;
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(Int::from(d));
            if d * d != n {
                out.push(Int::from(n / d));
            }
        }
        d += 1;
    }
    Some(out)
}

impl fmt::Debug for PolyQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PolyQ({self})")
    }
}

impl fmt::Display for PolyQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let show_coeff = i == 0 || !a.is_one();
            if show_coeff {
                if a.is_integer() {
                    write!(f, "{}", a.numer())?;
                } else {
                    write!(f, "{}/{}", a.numer(), a.denom())?;
                }
            }
            match i {
                0 => {}
                1 => f.write_str(if show_coeff { "*T" } else { "T" })?,
                _ => write!(f, "{}T^{i}", if show_coeff { "*" } else { "" })?,
            }
        }
        Ok(())
    }
}

impl Add for &PolyQ {
    type Output = PolyQ;
    fn add(self, o: &PolyQ) -> PolyQ {
        let n = self.coeffs.len().max(o.coeffs.len());
        PolyQ::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }
}

impl Sub for &PolyQ {
    type Output = PolyQ;
    fn sub(self, o: &PolyQ) -> PolyQ {
        let n = self.coeffs.len().max(o.coeffs.len());
        PolyQ::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }
}

impl Mul for &PolyQ {
    type Output = PolyQ;
    fn mul(self, o: &PolyQ) -> PolyQ {
        if self.is_zero() || o.is_zero() {
            return PolyQ::zero();
        }
        let mut out = vec![Rat::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        PolyQ::new(out)
    }
}

impl Neg for &PolyQ {
    type Output = PolyQ;
    fn neg(self) -> PolyQ {
        PolyQ::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Add for PolyQ {
    type Output = PolyQ;
    fn add(self, o: PolyQ) -> PolyQ {
        &self + &o
    }
}

impl Sub for PolyQ {
    type Output = PolyQ;
    fn sub(self, o: PolyQ) -> PolyQ {
        &self - &o
    }
}

impl Mul for PolyQ {
    type Output = PolyQ;
    fn mul(self, o: PolyQ) -> PolyQ {
        &self * &o
    }
}
