use serde::Serialize;

use super::{proportionality, DerivationError, DerivationSystem};
use crate::poly::{rat, Polynomial, Rational};
use crate::rings::{full_sum, Ring};

/// The derivation on `Q[l_i, m_i, K]` given by
/// `l_i' = (tau/2 + l_i) m_i`, `m_i' = m_i^2 - tau l_i / 2 + K`, `K' = 0`,
/// with `tau = 2/3 sum l_i`.
pub fn full_system(ring: &Ring) -> Result<DerivationSystem, DerivationError> {
    let crate::rings::RingKind::Full { n1 } = ring.kind() else {
        return Err(DerivationError::Ring(crate::rings::RingError::UnknownRing(
            ring.kind().to_string(),
        )));
    };
    let t = ring.table();
    let half_tau = ring.resolve("tau")?.scale(&rat(1, 2));
    let k = ring.var("K")?;
    let mut sys = DerivationSystem::new(t).with_constant("K")?;
    for i in 1..=n1 {
        let (ln, mn) = (format!("l{i}"), format!("m{i}"));
        let l = ring.var(&ln)?;
        let m = ring.var(&mn)?;
        let dl = &(&half_tau + &l) * &m;
        let dm = &(&(&m * &m) - &(&half_tau * &l)) + &k;
        sys = sys.with_rule(&ln, dl)?.with_rule(&mn, dm)?;
    }
    Ok(sys)
}

/// Derivative of `p` along the flow, for `p` in the full ring with `n1` index pairs.
pub fn full_derivation(p: &Polynomial, n1: u32) -> Result<Polynomial, DerivationError> {
    if n1 == 0 {
        return Err(DerivationError::BadN1);
    }
    let ring = Ring::full(n1)?;
    let p = p.embed(ring.table())?;
    full_system(&ring)?.apply(&p)
}

/// Left side of the non-normal equation
/// `-tau'' + tau' sum m_i + tau (tau^2/4 - n K + sum l_i^2)`
/// with `tau'`, `tau''` taken along the flow.
pub fn odetau_full(ring: &Ring) -> Result<Polynomial, DerivationError> {
    let sys = full_system(ring)?;
    let tau = ring.resolve("tau")?;
    let d1 = sys.apply(&tau)?;
    let d2 = sys.apply(&d1)?;
    let sum_m = full_sum(ring, |_, m| m.clone())?;
    let sum_l2 = full_sum(ring, |l, _| l * l)?;
    let nk = &ring.resolve("n")? * &ring.var("K")?;
    let inner = &(&(&tau * &tau).scale(&rat(1, 4)) - &nk) + &sum_l2;
    Ok(&(&(&d1 * &sum_m) - &d2) + &(&tau * &inner))
}

/// The P0 polynomial written out term by term in the full ring.
pub fn p0_verbatim(ring: &Ring) -> Result<Polynomial, DerivationError> {
    let tau = ring.resolve("tau")?;
    let k = ring.var("K")?;
    let n = ring.resolve("n")?;
    let s_lm2 = full_sum(ring, |l, m| &(l * m) * m)?;
    let s_m2 = full_sum(ring, |_, m| m * m)?;
    let s_m = full_sum(ring, |_, m| m.clone())?;
    let s_lm = full_sum(ring, |l, m| l * m)?;
    let s_l2 = full_sum(ring, |l, _| l * l)?;
    let terms = [
        s_lm2.scale(&rat(-4, 3)),
        (&tau * &s_m2).scale(&rat(-2, 3)),
        (&s_m * &s_lm).scale(&rat(4, 9)),
        (&tau * &s_l2).scale(&rat(4, 3)),
        (&tau * &(&s_m * &s_m)).scale(&rat(2, 9)),
        tau.pow(3).scale(&rat(1, 2)),
        (&(&(&n.scale(&rat(2, 1)) + &ring.int(1)) * &k) * &tau).scale(&rat(-2, 3)),
    ];
    Ok(Polynomial::sum(ring.table(), &terms))
}

/// Both constructions of P0 and their ratio `verbatim / via_odetau`.
#[derive(Clone, Debug)]
pub struct P0Construction {
    pub n1: u32,
    pub verbatim: Polynomial,
    pub via_odetau: Polynomial,
    pub ratio: Rational,
}

pub fn build_p0(n1: u32) -> Result<P0Construction, DerivationError> {
    if n1 == 0 {
        return Err(DerivationError::BadN1);
    }
    let ring = Ring::full(n1)?;
    let verbatim = p0_verbatim(&ring)?;
    let via_odetau = odetau_full(&ring)?;
    let ratio = proportionality(&verbatim, &via_odetau).ok_or(DerivationError::NotProportional { n1 })?;
    Ok(P0Construction {
        n1,
        verbatim,
        via_odetau,
        ratio,
    })
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct PkInfo {
    pub k: usize,
    pub total_degree: u32,
    pub terms: usize,
}

/// `P_0 .. P_kmax`, each the flow derivative of the previous one.
#[derive(Clone, Debug)]
pub struct PkChain {
    pub n1: u32,
    pub ring: Ring,
    pub polys: Vec<Polynomial>,
}

impl PkChain {
    pub fn info(&self) -> Vec<PkInfo> {
        self.polys
            .iter()
            .enumerate()
            .map(|(k, p)| PkInfo {
                k,
                total_degree: p.total_degree().unwrap_or(0),
                terms: p.num_terms(),
            })
            .collect()
    }
}

pub fn pk_chain(n1: u32, k_max: usize) -> Result<PkChain, DerivationError> {
    pk_chain_bounded(n1, k_max, usize::MAX)
}

/// As [`pk_chain`], stopping with an error once a member exceeds `max_terms`.
pub fn pk_chain_bounded(n1: u32, k_max: usize, max_terms: usize) -> Result<PkChain, DerivationError> {
    let p0 = build_p0(n1)?;
    let ring = Ring::full(n1)?;
    let sys = full_system(&ring)?;
    let mut polys = Vec::with_capacity(k_max + 1);
    polys.push(p0.verbatim);
    for _ in 0..k_max {
        let next = sys.apply(polys.last().unwrap())?;
        if next.num_terms() > max_terms {
            return Err(DerivationError::SizeGuard {
                k: polys.len(),
                terms: next.num_terms(),
                limit: max_terms,
            });
        }
        polys.push(next);
    }
    Ok(PkChain { n1, ring, polys })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::int;

    #[test]
    fn lambda_one_rule_n1_is_one() {
        let r = Ring::full(1).unwrap();
        let l = r.var("l1").unwrap();
        let d = full_derivation(&l, 1).unwrap();
        let want = (&l * &r.var("m1").unwrap()).scale(&rat(4, 3));
        assert_eq!(d, want);
    }

    #[test]
    fn derivation_of_constant_is_zero() {
        let r = Ring::full(2).unwrap();
        assert!(full_derivation(&r.int(7), 2).unwrap().is_zero());
    }

    #[test]
    fn p0_constructions_agree_exactly() {
        for n1 in 1..=3 {
            assert_eq!(build_p0(n1).unwrap().ratio, int(1));
        }
    }
}
