use serde::Serialize;

use super::corpus::{Corpus, CorpusEntry, Mode};
use super::lower::lower;
use super::qseries::q_asymptotic_of;
use super::CatalogError;
use crate::derivation::{
    full_system, lambda_ring_derivation, odetau_full, odetau_lambda, proportionality, DerivationSystem,
};
use crate::elimination::{eliminate_tau, pseudo_remainder, EliminationOptions};
use crate::exec::Exec;
use crate::poly::rational::fmt_rational;
use crate::poly::{int, rat, Polynomial, Rational};
use crate::rings::{Ring, RingKind, SUM_L, SUM_M};

/// Number of difference terms kept in a failure message.
const DIFF_TERMS: usize = 8;

/// Outcome of comparing one constructed polynomial with its expected form.
#[derive(Clone, Debug, PartialEq)]
pub enum Verdict {
    Ratio(Rational),
    Quotient(Polynomial),
    Equal,
    Fail { reason: String, diff: String },
}

impl Verdict {
    pub fn passed(&self) -> bool {
        !matches!(self, Verdict::Fail { .. })
    }

    pub fn summary(&self) -> VerdictSummary {
        let (kind, value) = match self {
            Verdict::Ratio(r) => ("ratio", fmt_rational(r)),
            Verdict::Quotient(q) => ("quotient", q.to_string()),
            Verdict::Equal => ("equal", String::new()),
            Verdict::Fail { reason, diff } => ("FAIL", format!("{reason}; {diff}")),
        };
        VerdictSummary {
            kind: kind.into(),
            value,
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Verdict::Ratio(r) => write!(f, "ratio {}", fmt_rational(r)),
            Verdict::Quotient(q) => write!(f, "quotient {q}"),
            Verdict::Equal => f.write_str("equal"),
            Verdict::Fail { reason, diff } => write!(f, "FAIL ({reason}) diff: {diff}"),
        }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct VerdictSummary {
    pub kind: String,
    pub value: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ItemVerdict {
    pub label: String,
    #[serde(serialize_with = "ser_verdict")]
    pub verdict: Verdict,
}

fn ser_verdict<S: serde::Serializer>(v: &Verdict, s: S) -> Result<S::Ok, S::Error> {
    v.summary().serialize(s)
}

/// All comparisons of one identity in one ring.
#[derive(Clone, Debug, Serialize)]
pub struct RingCheck {
    pub ring: String,
    pub items: Vec<ItemVerdict>,
    /// Additional named conditions the recipe asserts (degrees, accounting).
    pub conditions: Vec<(String, bool)>,
    pub notes: Vec<String>,
}

impl RingCheck {
    pub fn passed(&self) -> bool {
        !self.items.is_empty()
            && self.items.iter().all(|i| i.verdict.passed())
            && self.conditions.iter().all(|(_, ok)| *ok)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityReport {
    pub name: String,
    pub mode: Mode,
    pub rings: Vec<RingCheck>,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        !self.rings.is_empty() && self.rings.iter().all(RingCheck::passed)
    }

    /// One line per ring: `name [ring] verdicts`.
    pub fn lines(&self) -> Vec<String> {
        self.rings
            .iter()
            .map(|rc| {
                let status = if rc.passed() { "ok  " } else { "FAIL" };
                let items: Vec<String> = rc
                    .items
                    .iter()
                    .map(|i| {
                        let v = match &i.verdict {
                            Verdict::Quotient(q) if q.num_terms() > 4 => {
                                format!("quotient ({} terms)", q.num_terms())
                            }
                            v => v.to_string(),
                        };
                        if i.label.is_empty() { v } else { format!("{}: {v}", i.label) }
                    })
                    .collect();
                let mut line = format!("{status} {} [{}] {}", self.name, rc.ring, items.join("; "));
                for (c, ok) in &rc.conditions {
                    line.push_str(&format!("; {c}: {}", if *ok { "yes" } else { "NO" }));
                }
                line
            })
            .collect()
    }
}

/// What a constructed polynomial is compared with.
enum Against {
    Part(usize),
    ProductOfParts,
}

struct Item {
    label: String,
    poly: Polynomial,
    against: Against,
}

#[derive(Default)]
struct Construction {
    items: Vec<Item>,
    conditions: Vec<(String, bool)>,
    notes: Vec<String>,
}

impl Construction {
    fn single(p: Polynomial) -> Self {
        Construction {
            items: vec![Item {
                label: String::new(),
                poly: p,
                against: Against::Part(0),
            }],
            ..Default::default()
        }
    }

    fn item(mut self, label: &str, poly: Polynomial, against: Against) -> Self {
        self.items.push(Item {
            label: label.into(),
            poly,
            against,
        });
        self
    }

    fn note(mut self, n: impl Into<String>) -> Self {
        self.notes.push(n.into());
        self
    }
}

type Recipe = fn(&Corpus, &Ring, Exec) -> Result<Construction, CatalogError>;

const REGISTRY: &[(&str, Recipe)] = &[
    ("P0", recipe_p0),
    ("chen-n2", recipe_chen),
    ("chen-n2-derived", recipe_chen_derived),
    ("same-lm", recipe_same_lm),
    ("const-solutions", recipe_const_solutions),
    ("Lm20", recipe_lm20),
    ("Lm30", recipe_lm30),
    ("Lm3", recipe_lm3),
    ("Lm2", recipe_lm2),
    ("taup3", recipe_taup3),
    ("part1", |c, r, _| recipe_part(c, r, 0)),
    ("part2", |c, r, _| recipe_part(c, r, 1)),
    ("part3", |c, r, _| recipe_part(c, r, 2)),
    ("part4", |c, r, _| recipe_part(c, r, 3)),
    ("taup4", recipe_taup4),
    ("f0-factors", recipe_f0_factors),
    ("dtau", recipe_dtau),
    ("cos-te-si", recipe_cos),
    ("sin-te-si", recipe_sin),
    ("q-elim", recipe_q_elim),
    ("q-limit", recipe_q_limit),
];

/// Names with a registered recipe, in registry order.
pub fn identity_names() -> Vec<&'static str> {
    REGISTRY.iter().map(|(n, _)| *n).collect()
}

/// Checks `name` against the built-in corpus in every ring it lists.
pub fn check_identity(name: &str) -> Result<IdentityReport, CatalogError> {
    check_identity_in(&Corpus::builtin(), name, Exec::default())
}

pub fn check_identity_in(corpus: &Corpus, name: &str, exec: Exec) -> Result<IdentityReport, CatalogError> {
    let recipe = REGISTRY
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, r)| *r)
        .ok_or_else(|| CatalogError::UnknownIdentity(name.to_string()))?;
    let entry = corpus.entry(name)?;
    let rings = exec
        .map(&entry.rings, |kind| check_in_ring(corpus, entry, recipe, *kind, exec))
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?;
    Ok(IdentityReport {
        name: name.to_string(),
        mode: entry.mode,
        rings,
    })
}

/// Every registered identity, checked independently.
pub fn check_all(corpus: &Corpus, exec: Exec) -> Vec<(String, Result<IdentityReport, CatalogError>)> {
    let names = identity_names();
    exec.map(&names, |n| (n.to_string(), check_identity_in(corpus, n, exec)))
}

fn check_in_ring(
    corpus: &Corpus,
    entry: &CorpusEntry,
    recipe: Recipe,
    kind: RingKind,
    exec: Exec,
) -> Result<RingCheck, CatalogError> {
    let ring = Ring::new(kind)?;
    let expected = entry.expected(&ring)?;
    let built = recipe(corpus, &ring, exec)?;
    let items = exec.map(&built.items, |it| {
        let target = match it.against {
            Against::Part(i) => expected.get(i).cloned(),
            Against::ProductOfParts => Some(Polynomial::product(ring.table(), &expected)),
        };
        let verdict = match target {
            Some(t) => compare(&it.poly, &t, entry.mode),
            None => Verdict::Fail {
                reason: "no expected polynomial for this item".into(),
                diff: String::new(),
            },
        };
        ItemVerdict {
            label: it.label.clone(),
            verdict,
        }
    });
    Ok(RingCheck {
        ring: kind.to_string(),
        items,
        conditions: built.conditions,
        notes: built.notes,
    })
}

fn truncated(p: &Polynomial) -> String {
    let head = Polynomial::from_terms(p.table(), p.terms().iter().take(DIFF_TERMS).cloned());
    if p.num_terms() > DIFF_TERMS {
        format!("{head} + ... ({} terms)", p.num_terms())
    } else {
        head.to_string()
    }
}

/// Compares `constructed` with `expected` under `mode`. A zero on either side
/// never passes.
pub fn compare(constructed: &Polynomial, expected: &Polynomial, mode: Mode) -> Verdict {
    if constructed.is_zero() || expected.is_zero() {
        return Verdict::Fail {
            reason: "zero polynomial".into(),
            diff: format!("constructed {constructed}, expected {expected}"),
        };
    }
    if !constructed.table().same_as(expected.table()) {
        return Verdict::Fail {
            reason: "different rings".into(),
            diff: String::new(),
        };
    }
    match mode {
        Mode::Proportional => match proportionality(constructed, expected) {
            Some(r) => Verdict::Ratio(r),
            None => {
                let r = constructed.leading_coeff().unwrap() / expected.leading_coeff().unwrap();
                Verdict::Fail {
                    reason: format!("not proportional (leading ratio {})", fmt_rational(&r)),
                    diff: truncated(&(constructed - &expected.scale(&r))),
                }
            }
        },
        Mode::Divides => match constructed.div_rem(expected) {
            Ok((q, r)) if r.is_zero() => Verdict::Quotient(q),
            Ok((_, r)) => Verdict::Fail {
                reason: "expected polynomial does not divide".into(),
                diff: format!("remainder {}", truncated(&r)),
            },
            Err(e) => Verdict::Fail {
                reason: e.to_string(),
                diff: String::new(),
            },
        },
        Mode::Equal => {
            if constructed == expected {
                Verdict::Equal
            } else {
                Verdict::Fail {
                    reason: "not equal".into(),
                    diff: truncated(&(constructed - expected)),
                }
            }
        }
    }
}

// ---- helpers ----

fn euclidean(p: &Polynomial) -> Result<Polynomial, CatalogError> {
    Ok(p.substitute_var("K", &Polynomial::zero(p.table()))?)
}

/// `lc_v(g) f - lc_v(f) g` for `f`, `g` linear in `v`.
fn linear_elim(f: &Polynomial, g: &Polynomial, v: &str) -> Result<Polynomial, CatalogError> {
    for (name, p) in [("first", f), ("second", g)] {
        if p.degree_in(v)? != Some(1) {
            return Err(CatalogError::Invalid(format!("{name} operand is not linear in {v}")));
        }
    }
    let a = f.leading_coefficient_in(v)?;
    let b = g.leading_coefficient_in(v)?;
    Ok(&(&b * f) - &(&a * g))
}

/// Euclidean-case derivation in a power-sum ring.
fn d_lambda(p: &Polynomial) -> Result<Polynomial, CatalogError> {
    euclidean(&lambda_ring_derivation(p, crate::rings::DEFAULT_MAX_LAMBDA)?)
}

fn not_defined(ring: &Ring, what: &str) -> CatalogError {
    CatalogError::Invalid(format!("{what} is not defined over ring {}", ring.kind()))
}

fn require(ring: &Ring, ok: bool, what: &str) -> Result<(), CatalogError> {
    if ok {
        Ok(())
    } else {
        Err(not_defined(ring, what))
    }
}

fn is_lambda(ring: &Ring) -> bool {
    matches!(ring.kind(), RingKind::Lambda { .. })
}

fn summand(ring: &Ring, f: impl Fn(&Polynomial, &Polynomial) -> Polynomial) -> Result<Polynomial, CatalogError> {
    let st = ring.summand_table();
    let l = Polynomial::var(st, SUM_L)?;
    let m = Polynomial::var(st, SUM_M)?;
    Ok(ring.lower_sum(&f(&l, &m))?)
}

// ---- recipes ----

/// The non-normal equation with the ODE substituted.
fn recipe_p0(_: &Corpus, ring: &Ring, _: Exec) -> Result<Construction, CatalogError> {
    let p = match ring.kind() {
        RingKind::Full { .. } => odetau_full(ring)?,
        RingKind::Lambda { .. } => odetau_lambda(ring)?,
        _ => return Err(not_defined(ring, "P0")),
    };
    Ok(Construction::single(p).note("n = n1 + 1"))
}

fn recipe_chen(_: &Corpus, ring: &Ring, _: Exec) -> Result<Construction, CatalogError> {
    require(ring, ring.kind() == RingKind::Full { n1: 1 }, "chen-n2")?;
    Ok(Construction::single(odetau_full(ring)?))
}

/// Drop the factor `l1` of P0 and differentiate what is left.
fn recipe_chen_derived(_: &Corpus, ring: &Ring, _: Exec) -> Result<Construction, CatalogError> {
    require(ring, ring.kind() == RingKind::Full { n1: 1 }, "chen-n2-derived")?;
    let p0 = odetau_full(ring)?;
    let l1 = ring.var("l1")?;
    let rest = p0
        .divide_exact(&l1)?
        .ok_or_else(|| CatalogError::Invalid("l1 does not divide P0".into()))?;
    Ok(Construction::single(full_system(ring)?.apply(&rest)?))
}

/// All index pairs equal, Euclidean case: the ODE reduces to two equations.
fn recipe_same_lm(_: &Corpus, ring: &Ring, _: Exec) -> Result<Construction, CatalogError> {
    require(ring, ring.kind() == RingKind::Same, "same-lm")?;
    let (n1, k, l, m) = (ring.var("n1")?, ring.var("K")?, ring.var("l")?, ring.var("m")?);
    let dl = (&(&(&n1 + &ring.int(3)) * &l) * &m).scale(&rat(1, 3));
    let dm = &(&(&m * &m) - &(&n1 * &(&l * &l)).scale(&rat(1, 3))) + &k;
    let sys = DerivationSystem::new(ring.table())
        .with_constant("n1")?
        .with_constant("K")?
        .with_rule("l", dl)?
        .with_rule("m", dm)?;
    let tau = ring.resolve("tau")?;
    let d1 = sys.apply(&tau)?;
    let d2 = sys.apply(&d1)?;
    let inner = &(&(&tau * &tau).scale(&rat(1, 4)) - &(&ring.resolve("n")? * &k)) + &(&n1 * &(&l * &l));
    let odetau = &(&(&d1 * &(&n1 * &m)) - &d2) + &(&tau * &inner);
    Ok(Construction::single(euclidean(&odetau)?).note("K = 0"))
}

/// Stationary points: `l1' = m1' = 0` and the non-normal equation with
/// `tau' = tau'' = 0`.
fn recipe_const_solutions(_: &Corpus, ring: &Ring, _: Exec) -> Result<Construction, CatalogError> {
    require(ring, matches!(ring.kind(), RingKind::Full { .. }), "const-solutions")?;
    let sys = full_system(ring)?;
    let tau = ring.resolve("tau")?;
    let sum_l2 = summand(ring, |l, _| l * l)?;
    let inner = &(&(&tau * &tau).scale(&rat(1, 4)) - &(&ring.resolve("n")? * &ring.var("K")?)) + &sum_l2;
    Ok(Construction::default()
        .item("l1'", sys.apply(&ring.var("l1")?)?, Against::Part(0))
        .item("m1'", sys.apply(&ring.var("m1")?)?, Against::Part(1))
        .item("non-normal", &tau * &inner, Against::Part(2)))
}

/// `(sum l)^2 - sum l^2 + (sum m)^2 - sum m^2` under the linear relation.
fn recipe_lm20(_: &Corpus, ring: &Ring, _: Exec) -> Result<Construction, CatalogError> {
    require(ring, is_lambda(ring), "Lm20")?;
    let sl = summand(ring, |l, _| l.clone())?;
    let sm = summand(ring, |_, m| m.clone())?;
    let g = &(&(&(&sl * &sl) - &summand(ring, |l, _| l * l)?) + &(&sm * &sm)) - &summand(ring, |_, m| m * m)?;
    Ok(Construction::single(g))
}

fn recipe_lm30(_: &Corpus, ring: &Ring, _: Exec) -> Result<Construction, CatalogError> {
    require(ring, is_lambda(ring), "Lm30")?;
    Ok(Construction::single(euclidean(&odetau_lambda(ring)?)?).note("K = 0"))
}

fn recipe_lm3(c: &Corpus, ring: &Ring, _: Exec) -> Result<Construction, CatalogError> {
    require(ring, is_lambda(ring), "Lm3")?;
    let lm20 = c.expected_one("Lm20", ring)?;
    Ok(Construction::single(d_lambda(&lm20)?).note("derivative of Lm20, K = 0"))
}

fn recipe_lm2(c: &Corpus, ring: &Ring, _: Exec) -> Result<Construction, CatalogError> {
    require(ring, is_lambda(ring), "Lm2")?;
    let e = linear_elim(&c.expected_one("Lm30", ring)?, &c.expected_one("Lm3", ring)?, "L3")?;
    let (mono, rest) = e.strip_monomial_content();
    let shown = Polynomial::from_terms(ring.table(), [(mono, int(1))]);
    Ok(Construction::single(rest).note(format!("L3 eliminated from Lm30, Lm3; removed factor {shown}")))
}

fn recipe_taup3(c: &Corpus, ring: &Ring, _: Exec) -> Result<Construction, CatalogError> {
    require(ring, is_lambda(ring), "taup3")?;
    let e = linear_elim(&c.expected_one("Lm20", ring)?, &c.expected_one("Lm2", ring)?, "L2")?;
    Ok(Construction::single(e).note("L2 eliminated from Lm20, Lm2"))
}

/// Derivative of the `i`-th summand of taup3 with `L2` eliminated through
/// Lm20 when it occurs. The elimination multiplies by `-4(1 + phi^2)`; that
/// factor is divided out when it divides, otherwise only the `-4`.
fn recipe_part(c: &Corpus, ring: &Ring, i: usize) -> Result<Construction, CatalogError> {
    require(ring, is_lambda(ring), "part")?;
    let entry = c.entry("taup3")?;
    let summands = entry.sources[0].tree.summands();
    let term = summands
        .get(i)
        .ok_or_else(|| CatalogError::Corpus(format!("taup3 has {} summands, need {}", summands.len(), i + 1)))?;
    let t = lower(term, ring)?;
    let d = d_lambda(&t)?;
    if matches!(d.degree_in("L2")?, None | Some(0)) {
        return Ok(Construction::single(d).note("no L2 occurs"));
    }
    let e = linear_elim(&d, &c.expected_one("Lm20", ring)?, "L2")?;
    let w = &ring.int(1) + &ring.var("phi")?.pow(2);
    let (p, note) = match e.divide_exact(&w)? {
        Some(q) => (q.scale(&rat(-1, 4)), "exact polynomial"),
        None => (e.scale(&rat(-1, 4)), "multiplied by 1 + phi^2 to clear the denominator"),
    };
    Ok(Construction::single(p).note(note))
}

fn recipe_taup4(c: &Corpus, ring: &Ring, _: Exec) -> Result<Construction, CatalogError> {
    require(ring, is_lambda(ring), "taup4")?;
    let taup3 = c.expected_one("taup3", ring)?;
    let lm20 = c.expected_one("Lm20", ring)?;
    let direct = linear_elim(&d_lambda(&taup3)?, &lm20, "L2")?;
    let parts: Vec<Polynomial> = (1..=4)
        .map(|k| c.expected_one(&format!("part{k}"), ring))
        .collect::<Result<_, _>>()?;
    let mult = (&ring.int(1) + &ring.var("phi")?.pow(2)).scale(&int(3));
    let assembled = Polynomial::sum(
        ring.table(),
        &[&mult * &parts[0], &mult * &parts[1], parts[2].clone(), &mult * &parts[3]],
    );
    Ok(Construction::default()
        .item("derivative of taup3", direct, Against::Part(0))
        .item("sum of parts", assembled, Against::Part(0))
        .note("parts summed with multiplier 3*(1 + phi^2); part3 is stored already multiplied"))
}

/// Remainder sequence of taup4 and taup3 in `tau`; each printed factor and
/// their product must divide the final remainder.
fn recipe_f0_factors(c: &Corpus, ring: &Ring, exec: Exec) -> Result<Construction, CatalogError> {
    require(ring, is_lambda(ring), "f0-factors")?;
    let f4 = c.expected_one("taup4", ring)?;
    let f3 = c.expected_one("taup3", ring)?;
    let opts = EliminationOptions { exec, ..Default::default() };
    let mut report = eliminate_tau(&f3, &f4, &opts)?;
    let degrees = report.degrees();
    let factors: Vec<(String, Polynomial)> = c
        .entry("f0-factors")?
        .sources
        .iter()
        .zip(c.entry("f0-factors")?.expected(ring)?)
        .map(|(s, p)| (s.file.clone(), p))
        .collect();
    let f0 = report
        .resultant_like()
        .cloned()
        .ok_or_else(|| CatalogError::Invalid("remainder sequence vanished".into()))?;
    report.check_factors(&factors, exec)?;
    let account = report.cofactor.clone().expect("set by check_factors");
    let mut out = Construction::default();
    for (i, (name, _)) in factors.iter().enumerate() {
        let label = name.trim_start_matches("identities/").trim_end_matches(".poly");
        out = out.item(label, f0.clone(), Against::Part(i));
    }
    out = out.item("product", f0.clone(), Against::ProductOfParts);
    out.conditions.push(("tau-degrees 2, 1, 0".into(), degrees == [Some(2), Some(1), Some(0)]));
    out.conditions.push(("step identities".into(), report.verify_steps()));
    out.conditions.push(("cofactor divides the product of pseudo-multipliers".into(), account.accounted));
    if let Some(cf) = &account.cofactor {
        out = out.note(format!("cofactor {cf}"));
    }
    Ok(out.note(format!("f0 has {} terms", f0.num_terms())))
}

/// The non-normal equation over the jet ring, with `L2` eliminated through
/// the rule for `L1' = 3/2 tau1`.
fn recipe_dtau(_: &Corpus, ring: &Ring, _: Exec) -> Result<Construction, CatalogError> {
    require(ring, matches!(ring.kind(), RingKind::Jet { .. }), "dtau")?;
    let (tau, tau1, tau2) = (ring.var("tau")?, ring.var("tau1")?, ring.var("tau2")?);
    let sum_m = &(&ring.var("phi")? * &ring.power_sum(1)?) + &(&ring.var("n1")? * &ring.var("psi")?);
    let inner = &(&tau * &tau).scale(&rat(1, 4)) + &ring.power_sum(2)?;
    let odetau = &(&(&tau1 * &sum_m) - &tau2) + &(&tau * &inner);
    let rel = &crate::derivation::power_sum_rule(ring, 1)? - &tau1.scale(&rat(3, 2));
    let e = linear_elim(&euclidean(&odetau)?, &euclidean(&rel)?, "L2")?;
    Ok(Construction::single(e).note("K = 0"))
}

fn sn_relation(ring: &Ring) -> Result<Polynomial, CatalogError> {
    let (sn, c) = (ring.var("sn")?, ring.var("c")?);
    Ok(&(&(&sn * &sn) + &(&c * &c)) - &ring.int(1))
}

/// Reduces modulo `sn^2 + c^2 - 1`.
fn reduce_sn(p: &Polynomial, ring: &Ring) -> Result<Polynomial, CatalogError> {
    Ok(p.div_rem(&sn_relation(ring)?)?.1)
}

fn require_s(ring: &Ring, what: &str) -> Result<(), CatalogError> {
    require(ring, ring.kind() == RingKind::S, what)
}

/// P0 with `l_i = -sn x_i`, `m_i = -c x_i`, reduced by `sn^2 + c^2 = 1`.
fn recipe_cos(c: &Corpus, ring: &Ring, _: Exec) -> Result<Construction, CatalogError> {
    require_s(ring, "cos-te-si")?;
    let p0 = euclidean(&c.expected_one("P0", ring)?)?;
    Ok(Construction::single(reduce_sn(&p0, ring)?).note("K = 0; sn^2 = 1 - c^2"))
}

/// The sine relation from differentiating `cos^2 = N / (3 D)` in `p`, with
/// `d s_k / dp = -k s_{k+1}`.
fn recipe_sin(_: &Corpus, ring: &Ring, _: Exec) -> Result<Construction, CatalogError> {
    require_s(ring, "sin-te-si")?;
    let s = |k: u32| ring.var(&format!("s{k}"));
    let (s1, s2, s3) = (s(1)?, s(2)?, s(3)?);
    let mut sys = DerivationSystem::new(ring.table());
    for v in ["n1", "K", "p", "pinv", "sn", "c"] {
        sys = sys.with_constant(v)?;
    }
    for k in 1..=3u32 {
        sys = sys.with_rule(&format!("s{k}"), s(k + 1)?.scale(&int(-(k as i64))))?;
    }
    let n = &s1.pow(3) + &(&s1 * &s2).scale(&int(6));
    let d = &(&s1 * &s2).scale(&int(2)) + &s3.scale(&int(3));
    let wronskian = &(&sys.apply(&n)? * &d) - &(&n * &sys.apply(&d)?);
    let sn = ring.var("sn")?;
    let lhs = (&(&s1 * &(&sn * &sn)) * &(&d * &d)).scale(&int(2));
    Ok(Construction::single(&lhs - &wronskian))
}

/// Eliminates `c` between the cosine and sine relations.
fn recipe_q_elim(c: &Corpus, ring: &Ring, _: Exec) -> Result<Construction, CatalogError> {
    require_s(ring, "q-elim")?;
    let cos = c.expected_one("cos-te-si", ring)?;
    let sin = reduce_sn(&c.expected_one("sin-te-si", ring)?, ring)?;
    let step = pseudo_remainder(&sin, &cos, "c")?;
    let r = step.remainder.scale(&step.extracted_content);
    Ok(Construction::single(r).note("sn^2 = 1 - c^2, then c eliminated"))
}

fn recipe_q_limit(c: &Corpus, ring: &Ring, _: Exec) -> Result<Construction, CatalogError> {
    require_s(ring, "q-limit")?;
    let q = c.expected_one("q-elim", ring)?;
    Ok(Construction::single(q_asymptotic_of(&q)?).note("s_k = n1 * pinv^k, multiplied by p^7"))
}
