use super::PrescriberError;
use crate::arith::{is_prime, rat_mod, vp, Int, PolyQ, Rat, Valuation};

fn p_power(p: u64, e: u32) -> Rat {
    Rat::from_integer(num_traits::pow(Int::from(p), e as usize))
}

fn unit_derivative(m: &PolyQ, theta: &Rat, p: u64) -> Result<Rat, PrescriberError> {
    let d = m.derivative().eval(theta);
    if vp(&d, p) != Valuation::Finite(0) {
        return Err(PrescriberError::DerivativeNotUnit {
            poly: m.to_string(),
            p,
        });
    }
    Ok(d)
}

/// A p-integral `theta` with `v_p(m(theta)) = d` exactly.
///
/// Starts at the smallest simple root of `m` mod p, moves to valuation one by
/// adding `p` if needed, then takes Newton steps `theta + (-m/m' + p^(d+1))`,
/// from valuation 2 on applied to the least residue of `theta` mod `p^(d+1)`.
/// The step from valuation 1 to 2 adds `p^3` or `p^2` depending on whether the
/// second Taylor coefficient `m''(theta)/2` is a unit.
pub fn lift_to_valuation(m: &PolyQ, p: u64, d: u32) -> Result<Rat, PrescriberError> {
    if !is_prime(p) {
        return Err(PrescriberError::NotPrime(p));
    }
    if d == 0 {
        return Err(PrescriberError::ZeroExponent);
    }
    if !m.is_p_integral(p) || m.degree() == 0 {
        return Err(PrescriberError::NotIntegral {
            poly: m.to_string(),
            p,
        });
    }
    let red = m.reduce_mod_p(p).expect("p-integral");
    if red.degree() < m.degree() {
        // leading coefficient divisible by p; the residue roots are not those of m
        return Err(PrescriberError::NotIntegral {
            poly: m.to_string(),
            p,
        });
    }
    let roots = red.roots();
    if roots.is_empty() {
        return Err(PrescriberError::NotDivisor {
            poly: m.to_string(),
            p,
        });
    }
    let dred = red.derivative();
    let rho = roots
        .into_iter()
        .find(|&r| dred.eval(r) != 0)
        .ok_or_else(|| PrescriberError::DerivativeNotUnit {
            poly: m.to_string(),
            p,
        })?;

    let mut theta = Rat::from_integer(rho.into());
    if vp(&m.eval(&theta), p) != Valuation::Finite(1) {
        theta += p_power(p, 1);
    }
    debug_assert_eq!(vp(&m.eval(&theta), p), Valuation::Finite(1));
    if d == 1 {
        return Ok(theta);
    }

    let dm = unit_derivative(m, &theta, p)?;
    let half_second = m.taylor_shift(&theta).coeff(2);
    let extra = if vp(&half_second, p) == Valuation::Finite(0) { 3 } else { 2 };
    let u = -(m.eval(&theta) / dm) + p_power(p, extra);
    theta += u;

    for k in 2..d {
        // same class mod p^(k+1), so the valuation k is kept and heights stay small
        let modulus = num_traits::pow(Int::from(p), k as usize + 1);
        theta = Rat::from_integer(rat_mod(&theta, &modulus).expect("p-integral"));
        let dm = unit_derivative(m, &theta, p)?;
        let u = -(m.eval(&theta) / dm) + p_power(p, k + 1);
        theta += u;
    }
    debug_assert_eq!(vp(&m.eval(&theta), p), Valuation::Finite(d as i64));
    Ok(theta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{is_p_integral, rat};

    fn check(m: &PolyQ, p: u64, d: u32) -> Rat {
        let t = lift_to_valuation(m, p, d).unwrap();
        assert!(is_p_integral(&t, p));
        assert_eq!(vp(&m.eval(&t), p), Valuation::Finite(d as i64), "{m} p={p} d={d}");
        t
    }

    #[test]
    fn gaussian_examples() {
        let m = PolyQ::from_ints(&[1, 0, 1]);
        assert_eq!(check(&m, 5, 1), rat(2, 1));
        assert_eq!(check(&m, 5, 2), rat(503, 4));
        assert_eq!(check(&m, 13, 1), rat(5, 1));
        for d in 1..=6 {
            check(&m, 5, d);
            check(&m, 13, d);
        }
    }

    #[test]
    fn rational_point() {
        let m = PolyQ::linear_root(&rat(4, 27));
        let t = check(&m, 7, 1);
        assert_eq!(t, rat(3, 1));
        assert_eq!(vp(&m.eval(&rat(38, 1)), 7), Valuation::Finite(1));
        check(&m, 7, 4);
    }

    #[test]
    fn seed_moved_by_p_when_too_deep() {
        // the residue root 0 is too deep for T and for T - 18, so the seed moves to 3
        assert_eq!(check(&PolyQ::x(), 3, 1), rat(3, 1));
        assert_eq!(check(&PolyQ::from_ints(&[-18, 1]), 3, 1), rat(3, 1));
    }

    #[test]
    fn unit_second_coefficient_branch() {
        // T^2 + 1 at 5: m''/2 = 1 is a unit, so the step adds p^3
        let m = PolyQ::from_ints(&[1, 0, 1]);
        let t1 = rat(2, 1);
        assert_eq!(vp(&m.taylor_shift(&t1).coeff(2), 5), Valuation::Finite(0));
        assert_eq!(check(&m, 5, 2), &t1 - rat(5, 4) + rat(125, 1));
    }

    #[test]
    fn nonunit_second_coefficient_branch() {
        // T^3 + T + 3 at 3: seed 0, m''(0)/2 = 0, so the step adds p^2
        let m = PolyQ::from_ints(&[3, 1, 0, 1]);
        assert_eq!(m.taylor_shift(&rat(0, 1)).coeff(2), rat(0, 1));
        let t = check(&m, 3, 2);
        assert_eq!(t, rat(-3, 1) + rat(9, 1));
        for d in 3..=7 {
            check(&m, 3, d);
        }
    }

    #[test]
    fn errors() {
        let m = PolyQ::from_ints(&[1, 0, 1]);
        assert!(matches!(
            lift_to_valuation(&m, 7, 1),
            Err(PrescriberError::NotDivisor { .. })
        ));
        assert!(matches!(
            lift_to_valuation(&m, 2, 1),
            Err(PrescriberError::DerivativeNotUnit { .. })
        ));
        assert!(matches!(lift_to_valuation(&m, 5, 0), Err(PrescriberError::ZeroExponent)));
        assert!(matches!(lift_to_valuation(&m, 6, 1), Err(PrescriberError::NotPrime(6))));
        let half = PolyQ::new(vec![rat(1, 2), rat(0, 1), rat(1, 1)]);
        assert!(matches!(
            lift_to_valuation(&half, 2, 1),
            Err(PrescriberError::NotIntegral { .. })
        ));
    }
}
