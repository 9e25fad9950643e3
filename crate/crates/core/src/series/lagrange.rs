use num_traits::Zero;

use super::{TruncatedSeries, Var};
use crate::error::{Error, Result};

const MAX_ORDER: u32 = 12;

/// Checks `[t^n] H(t) Phi(t)^n = [z^n] (z T'/T) H(T(z))` for all `n <= order`,
/// where `T = z Phi(T)`. Both sides are computed independently and exactly.
///
/// `T` is obtained through `P = T/z`, the fixed point of `P = Phi(z P)`,
/// which gives `z T'/T = 1 + z P'/P`.
pub fn lagrange_identity_check(h: &TruncatedSeries, phi: &TruncatedSeries, order: u32) -> Result<bool> {
    if order > MAX_ORDER {
        return Err(Error::CapExceeded(format!("order {order} above {MAX_ORDER}")));
    }
    if phi.constant_term().is_zero() {
        return Err(Error::Domain("Phi(0) must be nonzero".into()));
    }
    let h = h.with_cap(Var::T, order);
    let phi = phi.with_cap(Var::T, order);

    let mut lhs = Vec::new();
    let mut phi_pow = TruncatedSeries::one();
    for n in 0..=order {
        lhs.push(h.mul(&phi_pow).coeff(&[(Var::T, n)]));
        phi_pow = phi_pow.mul(&phi);
    }

    let mut p = TruncatedSeries::constant(phi.constant_term()).with_cap(Var::Z, order);
    for _ in 0..=order {
        p = phi.substitute(Var::T, &p.shift(Var::Z, 1))?;
    }
    let t = p.shift(Var::Z, 1);
    let log_deriv = if order == 0 {
        TruncatedSeries::one()
    } else {
        let zp = p.derivative(Var::Z, 1)?.shift(Var::Z, 1);
        TruncatedSeries::one().add(&zp.mul(&p.inverse()?))
    };
    let rhs = log_deriv.mul(&h.substitute(Var::T, &t)?).with_cap(Var::Z, order);

    Ok((0..=order).all(|n| rhs.coeff(&[(Var::Z, n)]) == lhs[n as usize]))
}
