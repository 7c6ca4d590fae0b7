use num_traits::{One, Zero};

use super::{PolyQ, Rat};

/// Resultant `lc(f)^deg(g) * prod g(alpha)` over the roots `alpha` of `f`,
/// computed by the Euclidean remainder sequence.
///
/// A constant `f = c` gives `c^deg(g)`; two constants give 1.
pub fn resultant(f: &PolyQ, g: &PolyQ) -> Rat {
    if f.is_zero() || g.is_zero() {
        return Rat::zero();
    }
    let mut a = f.clone();
    let mut b = g.clone();
    let mut acc = Rat::one();
    loop {
        let da = a.degree();
        let db = b.degree();
        if da == 0 {
            return acc * num_traits::pow(a.lc(), db);
        }
        if db == 0 {
            return acc * num_traits::pow(b.lc(), da);
        }
        let r = b.rem(&a);
        if r.is_zero() {
            return Rat::zero();
        }
        let dr = r.degree();
        // res(a, b) = lc(a)^(db - dr) res(a, r) = lc(a)^(db - dr) (-1)^(da dr) res(r, a)
        acc *= num_traits::pow(a.lc(), db - dr);
        if (da * dr) % 2 == 1 {
            acc = -acc;
        }
        b = a;
        a = r;
    }
}

/// `(-1)^(n(n-1)/2) Res(f, f') / lc(f)` for `n = deg f >= 1`.
pub fn discriminant(f: &PolyQ) -> Rat {
    let n = f.degree();
    if f.is_zero() || n == 0 {
        return Rat::one();
    }
    let r = resultant(f, &f.derivative()) / f.lc();
    if (n * (n - 1) / 2) % 2 == 1 {
        -r
    } else {
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, rat_int};

    #[test]
    fn known_values() {
        assert_eq!(discriminant(&PolyQ::from_ints(&[1, 0, 1])), rat_int(-4));
        assert_eq!(
            resultant(&PolyQ::from_ints(&[1, 0, 1]), &PolyQ::from_ints(&[-2, 0, 1])),
            rat_int(9)
        );
        assert_eq!(
            discriminant(&PolyQ::from_ints(&[1444, -38, 0, 1])),
            rat_int(-56079184)
        );
    }

    #[test]
    fn quadratic_and_cubic_formulas() {
        // disc(a x^2 + b x + c) = b^2 - 4ac
        let f = PolyQ::new(vec![rat(2, 3), rat_int(-5), rat(7, 2)]);
        assert_eq!(discriminant(&f), rat_int(25) - rat_int(4) * rat(7, 2) * rat(2, 3));
        // disc(x^3 + px + q) = -4p^3 - 27q^2
        let g = PolyQ::from_ints(&[5, -7, 0, 1]);
        assert_eq!(discriminant(&g), rat_int(4 * 343 - 27 * 25));
    }

    #[test]
    fn antisymmetry_and_constants() {
        let f = PolyQ::from_ints(&[1, 2, 0, 1]);
        let g = PolyQ::from_ints(&[3, 0, 1]);
        // (-1)^(3*2) = 1
        assert_eq!(resultant(&f, &g), resultant(&g, &f));
        let h = PolyQ::from_ints(&[3, 1]);
        assert_eq!(resultant(&f, &h), -resultant(&h, &f));
        assert_eq!(resultant(&PolyQ::from_ints(&[3]), &g), rat_int(9));
        assert_eq!(resultant(&PolyQ::from_ints(&[3]), &PolyQ::from_ints(&[5])), rat_int(1));
        assert_eq!(resultant(&f, &f), rat_int(0));
    }
}
