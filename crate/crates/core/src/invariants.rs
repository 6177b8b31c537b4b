//! Twisted chain complex of a presentation, its homology invariants and the
//! family-level audits built from them.

use std::collections::BTreeMap;

use num_traits::One;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{module_invariants, parse_rational, Kernel, LaurentPoly, ModuleInvariants, PolyMatrix, Rational};
use crate::error::InvariantError;
use crate::fox::{FoxMatrix, GroupPresentation};
use crate::reps::MatrixRep;

/// Scope label attached to every family-level verdict. The audited
/// properties quantify over all representations; only a finite family was checked.
pub const FAMILY_SCOPE: &str = "necessary-conditions-checked-over-family";

/// `C_2 --d2--> C_1 --d1--> C_0` with `C_2 = Λ^{kr}`, `C_1 = Λ^{kg}`,
/// `C_0 = Λ^k`, maps acting on column vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistedComplex {
    pub k: usize,
    /// `kg x kr`; column block `i` comes from relator `i`.
    pub d2: PolyMatrix,
    /// `k x kg`; column block `j` is `(α(x_j) t - I)^T`.
    pub d1: PolyMatrix,
}

/// Which relator, if any, to leave out of `C_2`. One Wirtinger relator is
/// always a consequence of the others, so leaving it out does not change the
/// homology.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum RelatorChoice {
    #[default]
    DropLast,
    Drop(usize),
    KeepAll,
}

impl RelatorChoice {
    fn apply(self, p: &GroupPresentation) -> GroupPresentation {
        let r = p.relators().len();
        match self {
            RelatorChoice::DropLast if r > 0 => p.without_relator(r - 1),
            RelatorChoice::Drop(i) if i < r => p.without_relator(i),
            _ => p.clone(),
        }
    }
}

/// Precomputed Fox derivatives for one presentation; evaluates complexes and
/// reports for any number of representations.
#[derive(Clone, Debug)]
pub struct Engine {
    full: GroupPresentation,
    fox: FoxMatrix,
    relators: usize,
}

impl Engine {
    pub fn new(p: &GroupPresentation, choice: RelatorChoice) -> Self {
        let reduced = choice.apply(p);
        Engine { full: p.clone(), fox: FoxMatrix::new(&reduced), relators: reduced.relators().len() }
    }

    pub fn presentation(&self) -> &GroupPresentation {
        &self.full
    }

    /// Validates `rep` against the full presentation, then builds and checks
    /// the complex.
    pub fn complex(&self, rep: &MatrixRep) -> Result<TwistedComplex, InvariantError> {
        rep.validate(&self.full)?;
        let k = rep.k();
        let g = self.full.generator_count();
        let fox = self.fox.evaluate(rep)?;
        debug_assert_eq!(fox.rows(), k * self.relators);
        let d2 = fox.transpose();
        let mut d1 = PolyMatrix::zeros(k, k * g);
        for j in 0..g {
            let mut block = rep.letter(j, 1).expect("validated").to_poly(1);
            for i in 0..k {
                block[(i, i)] -= &LaurentPoly::one();
            }
            d1.set_block(0, j * k, &block.transpose());
        }
        let c = TwistedComplex { k, d2, d1 };
        if !c.d1.checked_mul(&c.d2)?.is_zero() {
            return Err(InvariantError::Internal("d1 * d2 is not zero".into()));
        }
        Ok(c)
    }

    pub fn report(&self, rep: &MatrixRep) -> Result<InvariantReport, InvariantError> {
        let c = self.complex(rep)?;
        let delta0 = h0_order(&c)?;
        let h1 = h1_module(&c)?;
        Ok(InvariantReport::assemble(rep, delta0, &h1))
    }

    /// Reports for a whole family, computed in parallel and returned in
    /// family order.
    pub fn reports(&self, reps: &[MatrixRep]) -> Result<Vec<InvariantReport>, InvariantError> {
        reps.par_iter().map(|r| self.report(r)).collect()
    }
}

pub fn build_complex(
    p: &GroupPresentation,
    rep: &MatrixRep,
    drop_one_relator: bool,
) -> Result<TwistedComplex, InvariantError> {
    let choice = if drop_one_relator { RelatorChoice::DropLast } else { RelatorChoice::KeepAll };
    Engine::new(p, choice).complex(rep)
}

/// Order of `H_0 = Λ^k / im d1`.
pub fn h0_order(c: &TwistedComplex) -> Result<LaurentPoly, InvariantError> {
    let m = module_invariants(&c.d1);
    if m.rank > 0 {
        return Err(InvariantError::Internal(format!("H_0 has rank {}, expected torsion", m.rank)));
    }
    Ok(m.torsion_order())
}

/// Rank and elementary divisors of `H_1 = ker d1 / im d2`.
pub fn h1_module(c: &TwistedComplex) -> Result<ModuleInvariants, InvariantError> {
    let kernel = Kernel::of(&c.d1);
    let coords = kernel.coordinates(&c.d2)?;
    Ok(module_invariants(&coords))
}

/// Report for the default complex (last relator dropped).
pub fn report(p: &GroupPresentation, rep: &MatrixRep) -> Result<InvariantReport, InvariantError> {
    Engine::new(p, RelatorChoice::DropLast).report(rep)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditEntry {
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

/// `Δ_1 / Δ_0` in lowest terms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tau {
    pub num: LaurentPoly,
    pub den: LaurentPoly,
    pub integral: bool,
}

impl Tau {
    fn new(num: &LaurentPoly, den: &LaurentPoly) -> Self {
        let g = num.gcd(den);
        let num = num.div_exact(&g).expect("gcd divides").normalize_unit();
        let den = den.div_exact(&g).expect("gcd divides").normalize_unit();
        let integral = den.is_one();
        Tau { num, den, integral }
    }
}

mod rational_string {
    use super::{parse_rational, Rational};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(r) => s.collect_str(r),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
        Option::<String>::deserialize(d)?
            .map(|s| parse_rational(&s).map_err(serde::de::Error::custom))
            .transpose()
    }
}

/// Invariants of one (presentation, representation) pair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantReport {
    pub k: usize,
    pub rep: String,
    pub delta0: LaurentPoly,
    /// Zero exactly when `rank > 0`.
    pub delta1: LaurentPoly,
    /// Order of the torsion part of `H_1`.
    pub torsion_delta: LaurentPoly,
    pub rank: usize,
    /// Undefined when `delta1` is zero.
    pub tau: Option<Tau>,
    pub deg0: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub deg1: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "rational_string")]
    pub norm_lower_bound: Option<Rational>,
    pub audits: BTreeMap<String, AuditEntry>,
}

impl InvariantReport {
    fn assemble(rep: &MatrixRep, delta0: LaurentPoly, h1: &ModuleInvariants) -> Self {
        let k = rep.k();
        let torsion_delta = h1.torsion_order();
        let delta1 = h1.order();
        let deg0 = delta0.breadth().expect("H_0 is torsion");
        let deg1 = delta1.breadth();
        let norm_lower_bound = deg1.map(|d1| Rational::new((d1 as i64 - deg0 as i64).into(), (k as i64).into()));
        let tau = (!delta1.is_zero()).then(|| Tau::new(&delta1, &delta0));

        let mut audits = BTreeMap::new();
        let h0_ok = !delta0.is_zero() && deg0 <= k as u64;
        audits.insert(
            "h0_bound".to_string(),
            AuditEntry {
                verdict: if h0_ok { Verdict::Pass } else { Verdict::Fail },
                witness: (!h0_ok).then(|| format!("breadth of delta0 is {deg0} > k = {k}")),
            },
        );
        audits.insert("chain_condition".to_string(), AuditEntry { verdict: Verdict::Pass, witness: None });

        InvariantReport {
            k,
            rep: rep.descriptor().to_string(),
            delta0,
            delta1,
            torsion_delta,
            rank: h1.rank,
            tau,
            deg0,
            deg1,
            norm_lower_bound,
            audits,
        }
    }

    fn is_trivial_rank_one(&self) -> bool {
        self.k == 1 && self.rep == "trivial"
    }
}

/// The best lower bound for the Thurston norm of the meridional class
/// derivable from `reports`.
pub fn thurston_lower_bound(reports: &[InvariantReport]) -> Result<Rational, InvariantError> {
    reports.iter().filter_map(|r| r.norm_lower_bound.clone()).max().ok_or(InvariantError::NoNonvanishing)
}

/// A representation at which an audit failed (or which proves a claim).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    /// Position of the representation in the family.
    pub index: usize,
    pub rep: String,
    pub k: usize,
    pub reason: String,
}

impl Witness {
    fn at(index: usize, r: &InvariantReport, reason: impl Into<String>) -> Self {
        Witness { index, rep: r.rep.clone(), k: r.k, reason: reason.into() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditOutcome {
    pub audit: String,
    pub verdict: Verdict,
    pub scope: String,
    pub family_size: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl AuditOutcome {
    fn new(audit: &str, reports: &[InvariantReport], witness: Option<Witness>, notes: Vec<String>) -> Self {
        AuditOutcome {
            audit: audit.to_string(),
            verdict: if witness.is_some() { Verdict::Fail } else { Verdict::Pass },
            scope: FAMILY_SCOPE.to_string(),
            family_size: reports.len(),
            witness,
            notes,
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

fn require_components(audit: &str, m: usize, ok: bool, expected: &str) -> Result<(), InvariantError> {
    if ok {
        Ok(())
    } else {
        Err(InvariantError::Precondition(format!("{audit} needs {expected}, link has {m} components")))
    }
}

fn first_failure<F>(reports: &[InvariantReport], mut check: F) -> Option<Witness>
where
    F: FnMut(&InvariantReport) -> Option<String>,
{
    reports.iter().enumerate().find_map(|(i, r)| check(r).map(|why| Witness::at(i, r, why)))
}

/// Genus-one fibered knots have the classical polynomial of the trefoil or
/// the figure-8 knot, and every twisted polynomial is nonzero of breadth at
/// most `2k`.
pub fn certify_genus1_fibered(m: usize, reports: &[InvariantReport]) -> Result<AuditOutcome, InvariantError> {
    const AUDIT: &str = "genus1-fibered";
    require_components(AUDIT, m, m == 1, "a knot")?;
    let trivial = reports
        .iter()
        .position(InvariantReport::is_trivial_rank_one)
        .ok_or_else(|| InvariantError::Precondition("family must contain the trivial representation".into()))?;
    let classical = &reports[trivial].delta1;
    let trefoil = LaurentPoly::from_ints(0, &[1, -1, 1]);
    let figure8 = LaurentPoly::from_ints(0, &[1, -3, 1]);
    let mut notes = vec![format!("classical polynomial {classical}")];
    if *classical != trefoil && *classical != figure8 {
        let w = Witness::at(trivial, &reports[trivial], format!("classical polynomial mismatch: {classical}"));
        return Ok(AuditOutcome::new(AUDIT, reports, Some(w), notes));
    }
    let witness = first_failure(reports, |r| match r.deg1 {
        None => Some("twisted polynomial vanishes".to_string()),
        Some(d) if d > 2 * r.k as u64 => Some(format!("breadth {d} exceeds 2k = {}", 2 * r.k)),
        _ => None,
    });
    if witness.is_none() {
        notes.push(format!("over family of size {}", reports.len()));
    }
    Ok(AuditOutcome::new(AUDIT, reports, witness, notes))
}

/// An `s`-split link has `rank >= s k` for every representation; a rank of
/// exactly `s k` is what a genuinely `s`-split link shows.
pub fn split_rank_audit(m: usize, reports: &[InvariantReport], s: usize) -> Result<AuditOutcome, InvariantError> {
    let audit = format!("split:{s}");
    require_components(&audit, m, m >= 2, "at least 2 components")?;
    let witness = first_failure(reports, |r| {
        (r.rank < s * r.k).then(|| format!("rank {} < s*k = {}", r.rank, s * r.k))
    });
    let attained = reports.iter().any(|r| r.rank == s * r.k);
    let notes = vec![format!("rank = s*k attained: {attained}")];
    Ok(AuditOutcome::new(&audit, reports, witness, notes))
}

/// Trivial links have `rank = k (m - 1)` and torsion order 1 everywhere.
pub fn trivial_link_audit(m: usize, reports: &[InvariantReport]) -> Result<AuditOutcome, InvariantError> {
    const AUDIT: &str = "trivial-link";
    require_components(AUDIT, m, m >= 1, "at least 1 component")?;
    let witness = first_failure(reports, |r| {
        let expected = r.k * (m - 1);
        if r.rank != expected {
            Some(format!("rank {} != k(m-1) = {expected}", r.rank))
        } else if !r.torsion_delta.is_one() {
            Some(format!("torsion polynomial {} != 1", r.torsion_delta))
        } else {
            None
        }
    });
    Ok(AuditOutcome::new(AUDIT, reports, witness, Vec::new()))
}

/// The unknot has `Δ_1 = 1` for every representation.
pub fn unknot_audit(m: usize, reports: &[InvariantReport]) -> Result<AuditOutcome, InvariantError> {
    const AUDIT: &str = "unknot";
    require_components(AUDIT, m, m == 1, "a knot")?;
    let witness = first_failure(reports, |r| (!r.delta1.is_one()).then(|| format!("delta1 = {}", r.delta1)));
    Ok(AuditOutcome::new(AUDIT, reports, witness, Vec::new()))
}

/// The Hopf link has `τ = 1` for every representation.
pub fn hopf_audit(m: usize, reports: &[InvariantReport]) -> Result<AuditOutcome, InvariantError> {
    const AUDIT: &str = "hopf";
    require_components(AUDIT, m, m == 2, "2 components")?;
    let witness = first_failure(reports, |r| match &r.tau {
        None => Some("tau undefined (delta1 = 0)".to_string()),
        Some(t) if !(t.integral && t.num.is_one()) => Some(format!("tau = ({}) / ({})", t.num, t.den)),
        _ => None,
    });
    Ok(AuditOutcome::new(AUDIT, reports, witness, Vec::new()))
}

/// Outcome of looking for a representation with vanishing `Δ_1`, which
/// would prove the link is not fibered.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiberednessEvidence {
    pub scope: String,
    pub family_size: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vanishing_witness: Option<Witness>,
    pub message: String,
}

pub const NO_VANISHING_WITNESS: &str = "no vanishing witness found within budget";

pub fn vanishing_witness_search(reports: &[InvariantReport]) -> FiberednessEvidence {
    let witness = first_failure(reports, |r| r.delta1.is_zero().then(|| "delta1 = 0".to_string()));
    let message = match &witness {
        Some(_) => "vanishing witness found: the link is not fibered".to_string(),
        None => NO_VANISHING_WITNESS.to_string(),
    };
    FiberednessEvidence {
        scope: FAMILY_SCOPE.to_string(),
        family_size: reports.len(),
        vanishing_witness: witness,
        message,
    }
}

/// `2g - 2 + m`, the Thurston norm of the meridional class of a link of
/// genus `g` with `m` components.
pub fn norm_from_genus(genus: u64, components: usize) -> Rational {
    Rational::from_integer((2 * genus as i64 - 2 + components as i64).into())
}

/// Whether `Δ_1` breadth minus `Δ_0` breadth equals `k` times `norm`.
pub fn fibered_equality_holds(r: &InvariantReport, norm: &Rational) -> bool {
    r.norm_lower_bound.as_ref().is_some_and(|b| b == norm)
}

impl Tau {
    pub fn is_one(&self) -> bool {
        self.integral && self.num == LaurentPoly::one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::parse_pd;
    use crate::reps::{enumerate_perm_reps, perm_family, perm_to_matrix, SearchOptions};

    fn pres(pd: &str) -> GroupPresentation {
        parse_pd(pd).unwrap().wirtinger()
    }

    const TREFOIL: &str = "X 1 4 2 5\nX 3 6 4 1\nX 5 2 6 3";
    const FIGURE8: &str = "X 4 2 5 1\nX 8 6 1 5\nX 6 3 7 4\nX 2 7 3 8";
    const HOPF: &str = "X 1 3 2 4\nX 3 1 4 2";
    const CINQUEFOIL: &str = "X 1 6 2 7\nX 3 8 4 9\nX 5 10 6 1\nX 7 2 8 3\nX 9 4 10 5";

    fn poly(s: &str) -> LaurentPoly {
        s.parse().unwrap()
    }

    fn trivial_report(pd: &str) -> InvariantReport {
        let p = pres(pd);
        report(&p, &MatrixRep::trivial(&p, 1)).unwrap()
    }

    #[test]
    fn unknot_complex() {
        let p = pres("components 1");
        let c = build_complex(&p, &MatrixRep::trivial(&p, 1), true).unwrap();
        assert_eq!(c.d1, PolyMatrix::from_rows(vec![vec![poly("t - 1")]]));
        assert_eq!(c.d2.cols(), 0);
        let h1 = h1_module(&c).unwrap();
        assert_eq!((h1.rank, h1.divisors.len()), (0, 0));
    }

    #[test]
    fn trefoil_complex_shapes() {
        let p = pres(TREFOIL);
        let c = build_complex(&p, &MatrixRep::trivial(&p, 1), true).unwrap();
        assert_eq!((c.d2.rows(), c.d2.cols()), (3, 2));
        assert_eq!((c.d1.rows(), c.d1.cols()), (1, 3));
        let h1 = h1_module(&c).unwrap();
        assert_eq!(h1.rank, 0);
        assert_eq!(h1.divisors, vec![poly("1 - t + t^2")]);
    }

    #[test]
    fn classical_polynomials() {
        assert_eq!(trivial_report(TREFOIL).delta1, poly("1 - t + t^2"));
        assert_eq!(trivial_report(FIGURE8).delta1, poly("1 - 3*t + t^2"));
        assert_eq!(trivial_report(CINQUEFOIL).delta1, poly("1 - t + t^2 - t^3 + t^4"));
        for pd in [TREFOIL, FIGURE8, HOPF, "components 1"] {
            assert_eq!(trivial_report(pd).delta0, poly("t - 1"));
        }
    }

    #[test]
    fn hopf_tau_is_one() {
        let r = trivial_report(HOPF);
        assert_eq!(r.rank, 0);
        assert_eq!(r.delta1, poly("t - 1"));
        assert!(r.tau.unwrap().is_one());
    }

    #[test]
    fn unlink_has_rank() {
        let r = trivial_report("components 2");
        assert_eq!(r.rank, 1);
        assert!(r.delta1.is_zero());
        assert!(r.torsion_delta.is_one());
        assert_eq!((r.tau, r.deg1, r.norm_lower_bound), (None, None, None));
    }

    #[test]
    fn norm_bounds() {
        let one = Rational::one();
        assert_eq!(trivial_report(TREFOIL).norm_lower_bound, Some(one.clone()));
        assert_eq!(trivial_report("components 1").norm_lower_bound, Some(-one));
        let r = trivial_report(CINQUEFOIL);
        assert_eq!(thurston_lower_bound(&[r]).unwrap(), norm_from_genus(2, 1));
        assert_eq!(thurston_lower_bound(&[trivial_report("components 2")]), Err(InvariantError::NoNonvanishing));
    }

    #[test]
    fn dropped_relator_does_not_matter() {
        let p = pres(FIGURE8);
        let reps = perm_family(&p, 3, None).reps;
        for rep in &reps {
            let kept = Engine::new(&p, RelatorChoice::KeepAll).report(rep).unwrap();
            for i in 0..p.relators().len() {
                assert_eq!(Engine::new(&p, RelatorChoice::Drop(i)).report(rep).unwrap(), kept);
            }
        }
    }

    #[test]
    fn audits_on_small_family() {
        let p = pres(TREFOIL);
        let fam = perm_family(&p, 3, None).reps;
        let engine = Engine::new(&p, RelatorChoice::DropLast);
        let reports = engine.reports(&fam).unwrap();
        assert!(certify_genus1_fibered(1, &reports).unwrap().passed());
        let unknot = unknot_audit(1, &reports).unwrap();
        assert_eq!(unknot.verdict, Verdict::Fail);
        assert_eq!(unknot.witness.unwrap().index, 0);
        assert!(hopf_audit(1, &reports).is_err());

        let hopf = pres(HOPF);
        let reports = Engine::new(&hopf, RelatorChoice::DropLast).reports(&perm_family(&hopf, 3, None).reps).unwrap();
        assert!(hopf_audit(2, &reports).unwrap().passed());
        let split = split_rank_audit(2, &reports, 1).unwrap();
        assert_eq!(split.verdict, Verdict::Fail);
        assert!(split.witness.unwrap().reason.starts_with("rank 0"));
        assert_eq!(trivial_link_audit(2, &reports).unwrap().verdict, Verdict::Fail);
    }

    #[test]
    fn genus_two_fails_classical_condition() {
        let r = trivial_report(CINQUEFOIL);
        let out = certify_genus1_fibered(1, &[r]).unwrap();
        assert_eq!(out.verdict, Verdict::Fail);
        assert!(out.witness.unwrap().reason.contains("classical polynomial mismatch"));
    }

    #[test]
    fn perm_reports_satisfy_h0_bound() {
        let p = pres(TREFOIL);
        let e = enumerate_perm_reps(&p, &SearchOptions::new(3));
        for a in &e.assignments {
            let r = report(&p, &perm_to_matrix(&p, a).unwrap()).unwrap();
            assert_eq!(r.audits["h0_bound"].verdict, Verdict::Pass);
            assert!(r.deg0 <= r.k as u64);
        }
    }

    #[test]
    fn report_json_shape() {
        let v = serde_json::to_value(trivial_report(TREFOIL)).unwrap();
        assert_eq!(v["delta1"], "1 - t + t^2");
        assert_eq!(v["tau"]["integral"], false);
        assert_eq!(v["norm_lower_bound"], "1");
        let u = serde_json::to_value(trivial_report("components 2")).unwrap();
        assert!(u.get("deg1").is_none() && u.get("norm_lower_bound").is_none());
        assert!(u["tau"].is_null());
        let back: InvariantReport = serde_json::from_value(v).unwrap();
        assert_eq!(back, trivial_report(TREFOIL));
    }
}
