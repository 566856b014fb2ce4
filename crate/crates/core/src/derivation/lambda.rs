use super::{DerivationError, DerivationSystem};
use crate::poly::{int, rat, Polynomial};
use crate::rings::{Ring, RingKind};

/// The derivation on the power-sum ring `Q[n1, K, tau, phi, psi, L2..Lmax]`
/// under the linear relation `m_i = phi l_i + psi`:
///
/// ```text
/// phi'  = -tau (phi^2 + 1) / 2 + phi psi
/// psi'  = (psi - tau phi / 2) psi + K
/// tau'  = (n1 + 3) tau psi / 3 + tau^2 phi / 2 + 2 phi L2 / 3
/// L_k'  = k (tau psi L_{k-1} / 2 + (tau phi / 2 + psi) L_k + phi L_{k+1})
/// ```
///
/// `L_max'` would need `L_{max+1}` and is reported as an overflow.
pub fn lambda_system(ring: &Ring) -> Result<DerivationSystem, DerivationError> {
    let max = match ring.kind() {
        RingKind::Lambda { max } => max,
        other => {
            return Err(DerivationError::Ring(crate::rings::RingError::UnknownRing(
                other.to_string(),
            )))
        }
    };
    let v = |s: &str| ring.var(s);
    let (n1, k, tau, phi, psi) = (v("n1")?, v("K")?, v("tau")?, v("phi")?, v("psi")?);
    let half = rat(1, 2);
    let half_tau = tau.scale(&half);
    let one = ring.int(1);

    let dphi = &(&(&half_tau * &(&(&phi * &phi) + &one)) * &ring.int(-1)) + &(&phi * &psi);
    let dpsi = &(&(&psi - &(&half_tau * &phi)) * &psi) + &k;
    let dtau = Polynomial::sum(
        ring.table(),
        &[
            (&(&(&n1 + &ring.int(3)) * &tau) * &psi).scale(&rat(1, 3)),
            (&(&tau * &tau) * &phi).scale(&half),
            (&phi * &ring.power_sum(2)?).scale(&rat(2, 3)),
        ],
    );

    let mut sys = DerivationSystem::new(ring.table())
        .with_constant("n1")?
        .with_constant("K")?
        .with_rule("tau", dtau)?
        .with_rule("phi", dphi)?
        .with_rule("psi", dpsi)?;
    for kk in 2..=max {
        let name = format!("L{kk}");
        if kk == max {
            sys = sys.with_overflow(&name, max + 1, max)?;
            continue;
        }
        sys = sys.with_rule(&name, power_sum_rule(ring, kk)?)?;
    }
    Ok(sys)
}

/// `L_k'` for `1 <= k < max`.
pub(crate) fn power_sum_rule(ring: &Ring, k: u32) -> Result<Polynomial, DerivationError> {
    let tau = ring.var("tau")?;
    let phi = ring.var("phi")?;
    let psi = ring.var("psi")?;
    let half_tau = tau.scale(&rat(1, 2));
    let inner = Polynomial::sum(
        ring.table(),
        &[
            &(&half_tau * &psi) * &ring.power_sum(k - 1)?,
            &(&(&half_tau * &phi) + &psi) * &ring.power_sum(k)?,
            &phi * &ring.power_sum(k + 1)?,
        ],
    );
    Ok(inner.scale(&int(k as i64)))
}

/// Derivative of `p` along the flow in the power-sum ring with indices up to `max_lambda_index`.
pub fn lambda_ring_derivation(p: &Polynomial, max_lambda_index: u32) -> Result<Polynomial, DerivationError> {
    let ring = Ring::lambda_with_max(max_lambda_index);
    let p = p.embed(ring.table())?;
    lambda_system(&ring)?.apply(&p)
}

/// The non-normal equation in the power-sum ring, using
/// `sum m_i = phi L1 + n1 psi` and `sum l_i^2 = L2`.
pub fn odetau_lambda(ring: &Ring) -> Result<Polynomial, DerivationError> {
    let sys = lambda_system(ring)?;
    let tau = ring.var("tau")?;
    let d1 = sys.apply(&tau)?;
    let d2 = sys.apply(&d1)?;
    let sum_m = &(&ring.var("phi")? * &ring.power_sum(1)?) + &(&ring.var("n1")? * &ring.var("psi")?);
    let nk = &ring.resolve("n")? * &ring.var("K")?;
    let inner = &(&(&tau * &tau).scale(&rat(1, 4)) - &nk) + &ring.power_sum(2)?;
    Ok(&(&(&d1 * &sum_m) - &d2) + &(&tau * &inner))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn psi_rule() {
        let r = Ring::lambda();
        let psi = r.var("psi").unwrap();
        let got = lambda_ring_derivation(&psi, 4).unwrap();
        let want = &(&(&psi * &psi) - &(&(&r.var("tau").unwrap() * &r.var("phi").unwrap()) * &psi).scale(&rat(1, 2)))
            + &r.var("K").unwrap();
        assert_eq!(got, want);
    }

    #[test]
    fn l1_bookkeeping_matches_tau_rule() {
        let r = Ring::lambda();
        let tau = r.var("tau").unwrap();
        let via_tau = lambda_ring_derivation(&tau, 4).unwrap().scale(&rat(3, 2));
        assert_eq!(power_sum_rule(&r, 1).unwrap(), via_tau);
    }

    #[test]
    fn overflow_names_needed_index() {
        let r = Ring::lambda();
        let l4 = r.var("L4").unwrap();
        assert_eq!(
            lambda_ring_derivation(&l4, 4).unwrap_err(),
            DerivationError::LambdaIndex { needed: 5, max: 4 }
        );
        let r5 = Ring::lambda_with_max(5);
        assert!(lambda_ring_derivation(&r5.var("L4").unwrap(), 5).is_ok());
    }
}
