use std::collections::BTreeMap;
use std::sync::Arc;

use super::DerivationError;
use crate::poly::{int, rat, Monomial, Polynomial, Rational, VarTable};
use crate::rings::Ring;

/// Rewrites a full-ring polynomial in terms of the power sums `L_k` after
/// imposing `m_i = phi l_i + psi`.
///
/// The result lives in the power-sum ring whose maximum index is at least 4
/// and at least the `l`-degree of the substituted polynomial. It is checked by
/// expanding it back into `Q[l_1..l_n1, phi, psi, K]`; a mismatch means the
/// input was not symmetric.
pub fn power_sum_reduce(p: &Polynomial, n1: u32) -> Result<Polynomial, DerivationError> {
    if n1 == 0 {
        return Err(DerivationError::BadN1);
    }
    let full = Ring::full(n1)?;
    let p = p.embed(full.table())?;
    let n = n1 as usize;

    let mut names: Vec<String> = (1..=n1).map(|i| format!("l{i}")).collect();
    names.extend(["phi", "psi", "K"].map(String::from));
    let aux = VarTable::new(names)?;
    let phi = Polynomial::var(&aux, "phi")?;
    let psi = Polynomial::var(&aux, "psi")?;
    let mut map = Vec::with_capacity(2 * n + 1);
    let ls: Vec<Polynomial> = (0..n).map(|i| Polynomial::var_index(&aux, i)).collect();
    let m_names: Vec<String> = (1..=n1).map(|i| format!("m{i}")).collect();
    let l_names: Vec<String> = (1..=n1).map(|i| format!("l{i}")).collect();
    for i in 0..n {
        map.push((m_names[i].as_str(), &(&phi * &ls[i]) + &psi));
        map.push((l_names[i].as_str(), ls[i].clone()));
    }
    map.push(("K", Polynomial::var(&aux, "K")?));
    let q = p.substitute(&aux, &map)?;

    let l_degree = (0..n).filter_map(|i| q.degree_in_index(i)).max().unwrap_or(0);
    let ring = Ring::lambda_with_max(l_degree.max(4));

    // Coefficient of each sorted exponent pattern, as a polynomial in phi, psi, K.
    let mut patterns: BTreeMap<Vec<u32>, Vec<(Monomial, Rational)>> = BTreeMap::new();
    for (m, c) in q.terms() {
        let e = &m.exps()[..n];
        if e.windows(2).all(|w| w[0] >= w[1]) {
            let mut rest = m.exps().to_vec();
            rest[..n].iter_mut().for_each(|x| *x = 0);
            patterns
                .entry(e.to_vec())
                .or_default()
                .push((Monomial::new(rest), c.clone()));
        }
    }

    let mut parts = Vec::with_capacity(patterns.len());
    for (alpha, coeff_terms) in patterns {
        let coeff = Polynomial::from_terms(&aux, coeff_terms).embed(ring.table())?;
        let m_alpha = monomial_symmetric(&ring, &alpha)?;
        parts.push(&coeff * &m_alpha);
    }
    let reduced = Polynomial::sum(ring.table(), &parts);

    if expand_back(&reduced, &ring, &aux, n1)? != q {
        return Err(DerivationError::NotSymmetric);
    }
    Ok(reduced)
}

/// `m_alpha` in power sums: sum over set partitions `pi` of the parts of
/// `alpha` of `prod_B (-1)^(|B|-1) (|B|-1)! p_{alpha_B}`, divided by the
/// product of factorials of part multiplicities.
fn monomial_symmetric(ring: &Ring, alpha: &[u32]) -> Result<Polynomial, DerivationError> {
    let parts: Vec<u32> = alpha.iter().copied().filter(|&a| a > 0).collect();
    if parts.is_empty() {
        return Ok(ring.int(1));
    }
    let mut total = Vec::new();
    let mut err = None;
    for_each_set_partition(parts.len(), &mut |blocks: &[Vec<usize>]| {
        if err.is_some() {
            return;
        }
        let mut term = ring.int(1);
        let mut coeff: i64 = 1;
        for b in blocks {
            let size = b.len() as i64;
            let sign = if size % 2 == 1 { 1 } else { -1 };
            coeff *= sign * factorial(size - 1);
            let k: u32 = b.iter().map(|&i| parts[i]).sum();
            match ring.power_sum(k) {
                Ok(ps) => term = &term * &ps,
                Err(e) => err = Some(e),
            }
        }
        total.push(term.scale(&int(coeff)));
    });
    if let Some(e) = err {
        return Err(e.into());
    }
    let mut mult = 1i64;
    let mut i = 0;
    while i < parts.len() {
        let j = parts[i..].iter().take_while(|&&x| x == parts[i]).count();
        mult *= factorial(j as i64);
        i += j;
    }
    Ok(Polynomial::sum(ring.table(), &total).scale(&rat(1, mult)))
}

fn factorial(n: i64) -> i64 {
    (1..=n).product()
}

/// Calls `f` with every partition of `0..n` into blocks.
fn for_each_set_partition(n: usize, f: &mut dyn FnMut(&[Vec<usize>])) {
    fn rec(i: usize, n: usize, blocks: &mut Vec<Vec<usize>>, f: &mut dyn FnMut(&[Vec<usize>])) {
        if i == n {
            f(blocks);
            return;
        }
        for b in 0..blocks.len() {
            blocks[b].push(i);
            rec(i + 1, n, blocks, f);
            blocks[b].pop();
        }
        blocks.push(vec![i]);
        rec(i + 1, n, blocks, f);
        blocks.pop();
    }
    rec(0, n, &mut Vec::new(), f);
}

fn expand_back(
    reduced: &Polynomial,
    ring: &Ring,
    aux: &Arc<VarTable>,
    n1: u32,
) -> Result<Polynomial, DerivationError> {
    let n = n1 as usize;
    let ls: Vec<Polynomial> = (0..n).map(|i| Polynomial::var_index(aux, i)).collect();
    let power = |k: u32| Polynomial::sum(aux, &ls.iter().map(|l| l.pow(k)).collect::<Vec<_>>());
    let mut map: Vec<(String, Polynomial)> = vec![
        ("n1".into(), Polynomial::from_int(aux, n1 as i64)),
        ("tau".into(), power(1).scale(&rat(2, 3))),
    ];
    for k in 2..=ring.max_lambda().unwrap_or(4) {
        map.push((format!("L{k}"), power(k)));
    }
    let refs: Vec<(&str, Polynomial)> = map.iter().map(|(k, v)| (k.as_str(), v.clone())).collect();
    Ok(reduced.substitute(aux, &refs)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sum_of_mu_squared() {
        let r = Ring::full(3).unwrap();
        let p = Polynomial::sum(
            r.table(),
            &(1..=3)
                .map(|i| r.var(&format!("m{i}")).unwrap().pow(2))
                .collect::<Vec<_>>(),
        );
        let got = power_sum_reduce(&p, 3).unwrap();
        let lr = Ring::lambda();
        let (phi, psi) = (lr.var("phi").unwrap(), lr.var("psi").unwrap());
        let want = Polynomial::sum(
            lr.table(),
            &[
                &(&phi * &phi) * &lr.var("L2").unwrap(),
                (&(&phi * &psi) * &lr.resolve("L1").unwrap()).scale(&int(2)),
                (&psi * &psi).scale(&int(3)),
            ],
        );
        assert_eq!(got, want);
    }

    #[test]
    fn rejects_asymmetric_input() {
        let r = Ring::full(2).unwrap();
        let p = r.var("l1").unwrap();
        assert_eq!(power_sum_reduce(&p, 2).unwrap_err(), DerivationError::NotSymmetric);
    }

    #[test]
    fn set_partition_counts_are_bell_numbers() {
        for (n, bell) in [(1, 1), (2, 2), (3, 5), (4, 15), (5, 52)] {
            let mut count = 0;
            for_each_set_partition(n, &mut |_| count += 1);
            assert_eq!(count, bell);
        }
    }
}
