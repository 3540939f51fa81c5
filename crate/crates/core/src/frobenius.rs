//! Frobenius matrices, Frobenius-type verdicts, explicit conjugators and the
//! classification of small-norm hyperbolic matrices by their continued
//! fraction.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::arith::{CharCubic, IntMatrix};
use crate::census::{census_visit, MatrixClass};
use crate::commutant::{express_in_powers, CommutantBasis};
use crate::error::{Error, Result};
use crate::forms::{q2, q3_with_basis};
use crate::parallel::Workers;
use crate::solver::{decide, shell, Certificate, Solvability, SolverConfig, Target};

/// Coefficients `a1..ak` of `M_{a1,…,ak}`, whose characteristic polynomial
/// is `(-1)^k (x^k - a1·x^(k-1) - … - ak)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FrobeniusParams(Vec<BigInt>);

impl FrobeniusParams {
    pub fn new(a: &[i64]) -> Result<Self> {
        Self::from_big(a.iter().map(|&v| v.into()).collect())
    }

    pub fn from_big(a: Vec<BigInt>) -> Result<Self> {
        match a.len() {
            2 | 3 => Ok(Self(a)),
            k => Err(Error::Dimension(k)),
        }
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.0
    }

    pub fn golden() -> Self {
        Self::new(&[-1, 2, 1]).expect("k = 3")
    }

    pub fn m131() -> Self {
        Self::new(&[-1, 3, 1]).expect("k = 3")
    }

    pub fn m031() -> Self {
        Self::new(&[0, 3, 1]).expect("k = 3")
    }

    /// Parameters of the companion matrix sharing the characteristic
    /// polynomial of a 3×3 matrix.
    pub fn of_char_cubic(chi: &CharCubic) -> Self {
        Self(vec![chi.a1.clone(), -&chi.a2, chi.a3.clone()])
    }

    pub fn char_cubic(&self) -> Option<CharCubic> {
        (self.0.len() == 3).then(|| CharCubic { a1: self.0[0].clone(), a2: -&self.0[1], a3: self.0[2].clone() })
    }

    pub fn matrix(&self) -> IntMatrix {
        frobenius_matrix(self)
    }
}

impl fmt::Display for FrobeniusParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
        write!(f, "M_{{{}}}", parts.join(","))
    }
}

impl Serialize for FrobeniusParams {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.0.iter().map(|v| v.to_string()))
    }
}

/// `(0 | E)` on top, `(a_k, …, a_1)` as the bottom row.
pub fn frobenius_matrix(params: &FrobeniusParams) -> IntMatrix {
    let a = params.coefficients();
    let k = a.len();
    let mut m = IntMatrix::zero(k);
    for i in 0..k - 1 {
        m.set(i, i + 1, BigInt::one());
    }
    for j in 0..k {
        m.set(k - 1, j, a[k - 1 - j].clone());
    }
    m
}

/// `X ∈ SL(k,Z)` with `X·C·X⁻¹` commuting with `M_target`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Conjugator {
    pub x: IntMatrix,
    pub target: FrobeniusParams,
}

impl Conjugator {
    pub fn verify(&self, c: &IntMatrix) -> bool {
        if !self.x.det().is_one() || self.x.dim() != c.dim() || self.target.coefficients().len() != c.dim() {
            return false;
        }
        let inv = self.x.unimodular_inverse().expect("det 1");
        let y = self.x.mul(c).mul(&inv);
        y.commutes_with(&self.target.matrix())
    }
}

fn ser_opt_ints<S: Serializer>(v: &Option<Vec<BigInt>>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(v) => s.collect_seq(v.iter().map(|x| x.to_string())),
        None => s.serialize_none(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum FrobeniusVerdict {
    FrobeniusType {
        /// Point where the criterion form is `±1`, if the verdict came from it.
        #[serde(serialize_with = "ser_opt_ints")]
        solver_witness: Option<Vec<BigInt>>,
        conjugator: Option<Conjugator>,
    },
    NonFrobenius {
        certificate: Certificate,
    },
    Undecided {
        search_box: u32,
        moduli_tried: u32,
    },
}

impl FrobeniusVerdict {
    pub fn is_frobenius(&self) -> bool {
        matches!(self, FrobeniusVerdict::FrobeniusType { .. })
    }

    pub fn is_non_frobenius(&self) -> bool {
        matches!(self, FrobeniusVerdict::NonFrobenius { .. })
    }

    pub fn is_undecided(&self) -> bool {
        matches!(self, FrobeniusVerdict::Undecided { .. })
    }

    pub fn label(&self) -> &'static str {
        match self {
            FrobeniusVerdict::FrobeniusType { .. } => "frobenius_type",
            FrobeniusVerdict::NonFrobenius { .. } => "non_frobenius",
            FrobeniusVerdict::Undecided { .. } => "undecided",
        }
    }
}

/// Verdict for a 2×2 matrix from the unit equation of its quadratic form.
pub fn decide_thm2(a: &IntMatrix, config: &SolverConfig) -> Result<FrobeniusVerdict> {
    let f = q2(a)?;
    Ok(match decide(Target::Quadratic(&f), config) {
        Solvability::Solvable { witness } => FrobeniusVerdict::FrobeniusType {
            conjugator: Some(quadratic_witness_to_conjugator(a, &witness)?),
            solver_witness: Some(witness),
        },
        Solvability::Unsolvable { certificate } => FrobeniusVerdict::NonFrobenius { certificate },
        Solvability::Unknown { search_box, moduli_tried } => FrobeniusVerdict::Undecided { search_box, moduli_tried },
    })
}

/// For `Q_A(x, y) = ±1`, the rows `(u, u·θ)` with `u = (x, y)` and
/// `θ = (A - a11·E)/g` conjugate `θ` to a companion matrix.
fn quadratic_witness_to_conjugator(a: &IntMatrix, witness: &[BigInt]) -> Result<Conjugator> {
    let diff = a.get(1, 1) - a.get(0, 0);
    let g = num_integer::Integer::gcd(&num_integer::Integer::gcd(a.get(0, 1), a.get(1, 0)), &diff);
    let shifted = a.sub(&IntMatrix::scalar(2, a.get(0, 0).clone()));
    let theta = IntMatrix::new(2, shifted.entries().iter().map(|v| v / &g).collect())?;
    let u = [witness[0].clone(), witness[1].clone()];
    let ut = [&u[0] * theta.get(0, 0) + &u[1] * theta.get(1, 0), &u[0] * theta.get(0, 1) + &u[1] * theta.get(1, 1)];
    let mut x = IntMatrix::new(2, vec![u[0].clone(), u[1].clone(), ut[0].clone(), ut[1].clone()])?;
    if x.det().is_negative() {
        // (u, uθ) ↦ (u, -uθ) conjugates θ to the companion matrix of -θ
        x = IntMatrix::new(2, vec![u[0].clone(), u[1].clone(), -&ut[0], -&ut[1]])?;
        let neg = theta.neg();
        return finish_2x2(a, x, &neg);
    }
    finish_2x2(a, x, &theta)
}

fn finish_2x2(a: &IntMatrix, x: IntMatrix, theta: &IntMatrix) -> Result<Conjugator> {
    // companion of θ: x² - tr·x + det, i.e. M_{tr, -det}
    let target = FrobeniusParams::from_big(vec![theta.trace(), -theta.det()])?;
    let conj = Conjugator { x, target };
    if !conj.verify(a) {
        return Err(Error::IntegralityViolated(format!("witness does not give a conjugator for {a}")));
    }
    Ok(conj)
}

/// Verdict for a 3×3 matrix from the unit equation of its product form.
pub fn decide_thm3(c: &IntMatrix, config: &SolverConfig) -> Result<FrobeniusVerdict> {
    decide_thm3_with_basis(&CommutantBasis::of(c)?, config)
}

pub fn decide_thm3_with_basis(basis: &CommutantBasis, config: &SolverConfig) -> Result<FrobeniusVerdict> {
    let form = q3_with_basis(basis)?;
    Ok(match decide(Target::Product(&form), config) {
        Solvability::Solvable { witness } => {
            let conj = witness_to_conjugator(basis, &witness)?;
            FrobeniusVerdict::FrobeniusType { solver_witness: Some(witness), conjugator: Some(conj) }
        }
        Solvability::Unsolvable { certificate } => FrobeniusVerdict::NonFrobenius { certificate },
        Solvability::Unknown { search_box, moduli_tried } => FrobeniusVerdict::Undecided { search_box, moduli_tried },
    })
}

/// Rows `(u, uθ, uθ²)` as a matrix.
fn cyclic_rows(u: &[BigInt; 3], theta: &IntMatrix) -> IntMatrix {
    let times =
        |v: &[BigInt; 3]| -> [BigInt; 3] { std::array::from_fn(|j| (0..3).map(|i| &v[i] * theta.get(i, j)).sum()) };
    let r1 = times(u);
    let r2 = times(&r1);
    let entries = u.iter().chain(&r1).chain(&r2).cloned().collect();
    IntMatrix::new(3, entries).expect("nine entries")
}

/// Turns a point `(x, y, z, m, n)` with `Q = ±1` into a conjugator: with
/// `θ = mA + nB` and `u = (x, y, z)`, `det(u; uθ; uθ²) = Q = ±1`, and that
/// matrix (negated if needed) conjugates `θ` to its companion matrix.
pub fn witness_to_conjugator(basis: &CommutantBasis, witness: &[BigInt]) -> Result<Conjugator> {
    if witness.len() != 5 {
        return Err(Error::Config(format!("expected a 5-tuple witness, got {}", witness.len())));
    }
    let theta = basis.combine(&BigInt::zero(), &witness[3], &witness[4]);
    let u = [witness[0].clone(), witness[1].clone(), witness[2].clone()];
    conjugator_from(&basis.c, &theta, &u)
        .ok_or_else(|| Error::IntegralityViolated(format!("witness does not give a conjugator for {}", basis.c)))
}

fn conjugator_from(c: &IntMatrix, theta: &IntMatrix, u: &[BigInt; 3]) -> Option<Conjugator> {
    let mut x = cyclic_rows(u, theta);
    let d = x.det();
    if !d.abs().is_one() {
        return None;
    }
    if d.is_negative() {
        x = x.neg();
    }
    let target = FrobeniusParams::of_char_cubic(&theta.char_cubic().ok()?);
    let conj = Conjugator { x, target };
    debug_assert!(conj.verify(c));
    Some(conj)
}

fn char_roots(chi: &CharCubic) -> Option<[f64; 3]> {
    let f = |v: &BigInt| v.to_f64().unwrap_or(f64::NAN);
    // χ = -(x³ - a1x² + a2x - a3)
    crate::sail::field::real_roots(-f(&chi.a1), f(&chi.a2), -f(&chi.a3))
}

fn eval_at(coeffs: &(BigRational, BigRational, BigRational), x: f64) -> f64 {
    let f = |v: &BigRational| v.to_f64().unwrap_or(f64::NAN);
    (f(&coeffs.0) * x + f(&coeffs.1)) * x + f(&coeffs.2)
}

fn solve3(m: [[f64; 3]; 3], rhs: [f64; 3]) -> Option<[f64; 3]> {
    let det = |m: [[f64; 3]; 3]| {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let d = det(m);
    if d.abs() < 1e-12 {
        return None;
    }
    Some(std::array::from_fn(|k| {
        let mut mk = m;
        for i in 0..3 {
            mk[i][k] = rhs[i];
        }
        det(mk) / d
    }))
}

const PERMUTATIONS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

/// Every `θ = xE + mA + nB` in the commutant of `c` whose characteristic
/// polynomial is that of `M_target`, in canonical order (by `|x|+|m|+|n|`,
/// then coordinates descending).
///
/// Candidates are located numerically from the eigenvalues and then checked
/// exactly; `c` must be hyperbolic.
pub fn theta_candidates(basis: &CommutantBasis, target: &FrobeniusParams) -> Result<Vec<IntMatrix>> {
    let want = target.char_cubic().ok_or(Error::Dimension(target.coefficients().len()))?;
    let c = &basis.c;
    let lambda = char_roots(&c.char_cubic()?).ok_or(Error::NotHyperbolic)?;
    let Some(rho) = char_roots(&want) else { return Ok(Vec::new()) };
    let pa = express_in_powers(c, &basis.a)?;
    let pb = express_in_powers(c, &basis.b)?;
    let rows: [[f64; 3]; 3] = std::array::from_fn(|i| [1.0, eval_at(&pa, lambda[i]), eval_at(&pb, lambda[i])]);
    let mut found: Vec<([i64; 3], IntMatrix)> = Vec::new();
    for perm in PERMUTATIONS {
        let Some(sol) = solve3(rows, perm.map(|j| rho[j])) else { continue };
        let rounded = sol.map(|v| v.round());
        if rounded.iter().zip(&sol).any(|(r, s)| (r - s).abs() > 1e-6 * (1.0 + s.abs())) {
            continue;
        }
        let coords = rounded.map(|v| v as i64);
        let theta = basis.combine(&coords[0].into(), &coords[1].into(), &coords[2].into());
        if theta.char_cubic()? == want && !found.iter().any(|(k, _)| *k == coords) {
            found.push((coords, theta));
        }
    }
    found.sort_by_key(|(k, _)| (k.iter().map(|v| v.abs()).sum::<i64>(), std::cmp::Reverse(*k)));
    Ok(found.into_iter().map(|(_, t)| t).collect())
}

fn ordered_vectors(bound: i64, min_linf: i64) -> Vec<[BigInt; 3]> {
    let mut out = Vec::new();
    for l in 1..=3 * bound {
        let mut buf = Vec::new();
        shell(3, bound, l, &mut Vec::new(), &mut buf);
        out.extend(
            buf.into_iter()
                .filter(|p| p.iter().map(|v| v.abs()).max().unwrap_or(0) >= min_linf)
                .map(|p| [p[0].into(), p[1].into(), p[2].into()]),
        );
    }
    out
}

fn search_cyclic(c: &IntMatrix, thetas: &[IntMatrix], bound: i64, min_linf: i64) -> Option<Conjugator> {
    let vectors = ordered_vectors(bound, min_linf);
    thetas.iter().find_map(|theta| vectors.iter().find_map(|u| conjugator_from(c, theta, u)))
}

/// First conjugator of `c` onto `M_target` whose first row has entries in
/// `[-bound, bound]`.
///
/// Every such conjugator has rows `(u, uθ, uθ²)` for some `θ` in the
/// commutant with the characteristic polynomial of `M_target`, so the search
/// runs over the finitely many `θ` and over `u` in the box (L1 norm, then
/// coordinates descending).
pub fn conjugator_search(c: &IntMatrix, target: &FrobeniusParams, bound: u32) -> Result<Option<Conjugator>> {
    if !c.is_hyperbolic() {
        return Err(Error::NotHyperbolic);
    }
    let basis = CommutantBasis::of(c)?;
    let thetas = theta_candidates(&basis, target)?;
    Ok(search_cyclic(c, &thetas, bound as i64, 0))
}

/// Brute-force conjugator for a 2×2 matrix: `X ∈ SL(2,Z)` with entries in
/// `[-bound, bound]` such that `Y = XAX⁻¹` commutes with some `M_{a1,a2}`,
/// i.e. `y12` divides both `y21` and `y22 - y11`.
pub fn conjugator_search_2x2(a: &IntMatrix, bound: i64) -> Option<Conjugator> {
    let v = a.to_i64()?;
    let (a11, a12, a21, a22) = (v[0] as i128, v[1] as i128, v[2] as i128, v[3] as i128);
    let range = || (-bound..=bound).map(|x| x as i128);
    for p in range() {
        for q in range() {
            for r in range() {
                for s in range() {
                    if p * s - q * r != 1 {
                        continue;
                    }
                    // X = (p q; r s), X⁻¹ = (s -q; -r p)
                    let (t11, t12, t21, t22) =
                        (p * a11 + q * a21, p * a12 + q * a22, r * a11 + s * a21, r * a12 + s * a22);
                    let y11 = t11 * s - t12 * r;
                    let y12 = -t11 * q + t12 * p;
                    let y21 = t21 * s - t22 * r;
                    let y22 = -t21 * q + t22 * p;
                    if y12 != 0 && y21 % y12 == 0 && (y22 - y11) % y12 == 0 {
                        let target = FrobeniusParams::new(&[((y22 - y11) / y12) as i64, (y21 / y12) as i64]).ok()?;
                        let x = IntMatrix::from_i64(2, &[p as i64, q as i64, r as i64, s as i64]).ok()?;
                        return Some(Conjugator { x, target });
                    }
                }
            }
        }
    }
    None
}

/// Continued-fraction class of a hyperbolic 3×3 matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FractionClass {
    GoldenRatio,
    M131,
    M031,
    /// Equivalent to `M_params`, which is none of the three representatives.
    Other(FrobeniusParams),
    Unresolved,
}

impl FractionClass {
    pub const REPRESENTATIVES: [FractionClass; 3] =
        [FractionClass::GoldenRatio, FractionClass::M131, FractionClass::M031];

    pub fn params(&self) -> Option<FrobeniusParams> {
        match self {
            FractionClass::GoldenRatio => Some(FrobeniusParams::golden()),
            FractionClass::M131 => Some(FrobeniusParams::m131()),
            FractionClass::M031 => Some(FrobeniusParams::m031()),
            FractionClass::Other(p) => Some(p.clone()),
            FractionClass::Unresolved => None,
        }
    }

    pub fn label(&self) -> String {
        match self {
            FractionClass::GoldenRatio => "golden_ratio".into(),
            FractionClass::Unresolved => "unresolved".into(),
            other => other.params().expect("has params").to_string(),
        }
    }
}

impl Serialize for FractionClass {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.label())
    }
}

/// How a class label was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    /// Explicit conjugator onto a representative.
    Conjugator,
    /// Conjugator recovered from a unit-equation witness.
    UnitWitness,
    /// Only sail invariants match a representative; not a proof.
    SailInvariant,
    None,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub matrix: IntMatrix,
    pub class: FractionClass,
    pub provenance: Provenance,
    pub conjugator: Option<Conjugator>,
}

/// Conjugator bound and solver caps used by the classifier.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ClassifyConfig {
    pub conjugator_cap: u32,
    pub solver: SolverConfig,
}

impl Default for ClassifyConfig {
    fn default() -> Self {
        Self { conjugator_cap: 4, solver: SolverConfig::default() }
    }
}

/// Iterative deepening over the three representatives with bounds
/// `1..=cap`; if none is reached, a unit-equation witness still identifies
/// some Frobenius matrix the fraction is equivalent to.
pub fn classify_fraction(c: &IntMatrix, config: &ClassifyConfig) -> Result<Classification> {
    if !c.is_hyperbolic() {
        return Err(Error::NotHyperbolic);
    }
    let basis = CommutantBasis::of(c)?;
    let mut candidates = Vec::new();
    for class in FractionClass::REPRESENTATIVES {
        let thetas = theta_candidates(&basis, &class.params().expect("representative"))?;
        if !thetas.is_empty() {
            candidates.push((class, thetas));
        }
    }
    for bound in 1..=config.conjugator_cap as i64 {
        for (class, thetas) in &candidates {
            if let Some(conj) = search_cyclic(c, thetas, bound, bound) {
                return Ok(Classification {
                    matrix: c.clone(),
                    class: class.clone(),
                    provenance: Provenance::Conjugator,
                    conjugator: Some(conj),
                });
            }
        }
    }
    if let FrobeniusVerdict::FrobeniusType { conjugator: Some(conj), .. } =
        decide_thm3_with_basis(&basis, &config.solver)?
    {
        let class = FractionClass::REPRESENTATIVES
            .into_iter()
            .find(|r| r.params().as_ref() == Some(&conj.target))
            .unwrap_or_else(|| FractionClass::Other(conj.target.clone()));
        return Ok(Classification {
            matrix: c.clone(),
            class,
            provenance: Provenance::UnitWitness,
            conjugator: Some(conj),
        });
    }
    Ok(Classification {
        matrix: c.clone(),
        class: FractionClass::Unresolved,
        provenance: Provenance::None,
        conjugator: None,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassificationReport {
    pub norm: u32,
    pub counts: BTreeMap<FractionClass, u64>,
    pub assignments: Vec<Classification>,
}

impl ClassificationReport {
    pub fn unresolved(&self) -> u64 {
        self.counts.get(&FractionClass::Unresolved).copied().unwrap_or(0)
    }

    pub fn count(&self, class: &FractionClass) -> u64 {
        self.counts.get(class).copied().unwrap_or(0)
    }

    pub fn csv(&self) -> String {
        let mut out = String::from("class,count\n");
        for (class, n) in &self.counts {
            out.push_str(&format!("{},{}\n", class.label(), n));
        }
        out
    }
}

/// Classifies every hyperbolic 3×3 matrix of norm exactly `norm`.
pub fn classification_report(
    norm: u32,
    cap: u32,
    config: &ClassifyConfig,
    workers: &Workers,
) -> Result<ClassificationReport> {
    let mut hyperbolic = Vec::new();
    census_visit(3, norm, cap, workers, |m, class| {
        if class == MatrixClass::Hyperbolic {
            hyperbolic.push(m.clone());
        }
    })?;
    let results = workers.map(&hyperbolic, |m| classify_fraction(m, config));
    let mut counts = BTreeMap::new();
    let mut assignments = Vec::with_capacity(results.len());
    for r in results {
        let r = r?;
        *counts.entry(r.class.clone()).or_insert(0) += 1;
        assignments.push(r);
    }
    Ok(ClassificationReport { norm, counts, assignments })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HuntFinding {
    pub matrix: IntMatrix,
    pub verdict: FrobeniusVerdict,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HuntReport {
    pub max_norm: u32,
    pub scanned: u64,
    /// Matrices not shown to be of Frobenius type (refuted or undecided).
    pub findings: Vec<HuntFinding>,
}

/// Runs the unit-equation decision over all of `M(3,Z)` up to `max_norm`,
/// keeping every matrix not certified as Frobenius type.
pub fn hunt(max_norm: u32, cap: u32, config: &SolverConfig, workers: &Workers) -> Result<HuntReport> {
    let mut report = HuntReport { max_norm, scanned: 0, findings: Vec::new() };
    for n in 0..=max_norm {
        let mut members = Vec::new();
        census_visit(3, n, cap, workers, |m, class| {
            if class.in_m() {
                members.push(m.clone());
            }
        })?;
        let verdicts = workers.map(&members, |m| decide_thm3(m, config));
        for (m, v) in members.into_iter().zip(verdicts) {
            let v = v?;
            report.scanned += 1;
            if !v.is_frobenius() {
                report.findings.push(HuntFinding { matrix: m, verdict: v });
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int;
    use crate::census::enumerate_norm;
    use crate::commutant::counterexample_basis;
    use proptest::prelude::*;

    fn counterexample() -> IntMatrix {
        IntMatrix::from_rows([[1, 2, 0], [0, 1, 2], [-7, 0, 29]])
    }

    fn random_sl3(seed: u64) -> IntMatrix {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        loop {
            let v: Vec<i64> = (0..9).map(|_| rng.gen_range(-2..=2)).collect();
            let p = IntMatrix::from_i64(3, &v).unwrap();
            if p.det().is_one() {
                return p;
            }
        }
    }

    #[test]
    fn frobenius_matrices() {
        assert_eq!(FrobeniusParams::golden().matrix(), IntMatrix::from_rows([[0, 1, 0], [0, 0, 1], [1, 2, -1]]));
        assert_eq!(FrobeniusParams::m031().matrix(), IntMatrix::from_rows([[0, 1, 0], [0, 0, 1], [1, 3, 0]]));
        assert_eq!(FrobeniusParams::new(&[1, 1]).unwrap().matrix(), IntMatrix::from_rows([[0, 1], [1, 1]]));
        assert_eq!(FrobeniusParams::golden().matrix().char_cubic().unwrap(), CharCubic::new(-1, -2, 1));
        assert_eq!(FrobeniusParams::golden().to_string(), "M_{-1,2,1}");
        assert!(FrobeniusParams::new(&[1]).is_err());
    }

    #[test]
    fn char_poly_of_frobenius_matrix() {
        // det(xE - M) = x³ - a1x² - a2x - a3, evaluated at a few points
        for a in [[-1, 2, 1], [0, 3, 1], [2, -5, 7]] {
            let p = FrobeniusParams::new(&a).unwrap();
            let m = p.matrix();
            for x in -3i64..=3 {
                let det = IntMatrix::scalar(3, x.into()).sub(&m).det();
                assert_eq!(det, int(x * x * x - a[0] * x * x - a[1] * x - a[2]));
            }
            assert_eq!(FrobeniusParams::of_char_cubic(&m.char_cubic().unwrap()), p);
        }
    }

    /// Re-basing (A, B) by a unimodular change that keeps E leaves the
    /// verdict's status unchanged.
    #[test]
    fn cubic_verdict_ignores_basis_choice() {
        let cfg = SolverConfig::default();
        let status = |v: &FrobeniusVerdict| v.label();
        let mut matrices = vec![counterexample_basis().c.clone()];
        matrices.extend(enumerate_norm(3, 5).unwrap().filter(|m| m.is_hyperbolic()).step_by(7));
        for c in matrices {
            let base = CommutantBasis::of(&c).unwrap();
            let reference = status(&decide_thm3_with_basis(&base, &cfg).unwrap());
            let e = IntMatrix::identity(3);
            for (k, j, l) in [(1, 0, 0), (-2, 1, 3), (0, -1, 1)] {
                let a = base.a.add(&e.scale(&int(k)));
                let b = base.b.add(&base.a.scale(&int(j))).add(&e.scale(&int(l)));
                let other = CommutantBasis::with_basis(&c, a, b).unwrap();
                assert_eq!(status(&decide_thm3_with_basis(&other, &cfg).unwrap()), reference, "{c}");
            }
        }
    }

    #[test]
    fn quadratic_criterion_examples() {
        let cfg = SolverConfig::default();
        let v = decide_thm2(&IntMatrix::from_rows([[0, 1], [1, 1]]), &cfg).unwrap();
        let FrobeniusVerdict::FrobeniusType { solver_witness, conjugator } = &v else { panic!("{v:?}") };
        assert_eq!(solver_witness.as_deref(), Some(&[int(1), int(0)][..]));
        assert!(conjugator.as_ref().unwrap().verify(&IntMatrix::from_rows([[0, 1], [1, 1]])));
        let a = IntMatrix::from_rows([[0, 2], [1, 0]]);
        let v = decide_thm2(&a, &cfg).unwrap();
        let FrobeniusVerdict::FrobeniusType { solver_witness, conjugator } = &v else { panic!("{v:?}") };
        assert_eq!(solver_witness.as_deref(), Some(&[int(1), int(1)][..]));
        assert!(conjugator.as_ref().unwrap().verify(&a));
        // 3x² - 5y², refuted mod 5; bounded brute force finds nothing either
        let a = IntMatrix::from_rows([[0, 3], [5, 0]]);
        let v = decide_thm2(&a, &cfg).unwrap();
        assert!(v.is_non_frobenius());
        let FrobeniusVerdict::NonFrobenius { certificate } = v else { unreachable!() };
        assert_eq!(certificate.modulus(), Some(5));
        assert!(conjugator_search_2x2(&a, 6).is_none());
    }

    #[test]
    fn cubic_criterion_examples() {
        let cfg = SolverConfig::default();
        let v = decide_thm3(&counterexample(), &cfg).unwrap();
        let FrobeniusVerdict::NonFrobenius { certificate } = &v else { panic!("{v:?}") };
        assert_eq!(certificate.modulus(), Some(7));
        let v = decide_thm3(&FrobeniusParams::golden().matrix(), &cfg).unwrap();
        let FrobeniusVerdict::FrobeniusType { conjugator: Some(conj), .. } = &v else { panic!("{v:?}") };
        assert!(conj.verify(&FrobeniusParams::golden().matrix()));
    }

    #[test]
    fn conjugator_search_examples() {
        let g = FrobeniusParams::golden();
        let found = conjugator_search(&g.matrix(), &g, 1).unwrap().unwrap();
        assert_eq!(found.x, IntMatrix::identity(3));

        let m031 = FrobeniusParams::m031();
        for seed in 0..5 {
            let p = random_sl3(seed);
            let c = p.mul(&m031.matrix()).mul(&p.unimodular_inverse().unwrap());
            let conj = conjugator_search(&c, &m031, 4).unwrap().expect("round trip");
            assert!(conj.verify(&c));
        }
        assert!(conjugator_search(&IntMatrix::from_rows([[0, 1, 0], [0, 0, 1], [2, 0, 0]]), &g, 2).is_err());
    }

    #[test]
    fn counterexample_has_no_small_conjugator() {
        // exhaustive: no θ in the commutant has a small-coefficient Frobenius
        // characteristic polynomial with a unimodular cyclic vector
        let basis = counterexample_basis();
        let mut searched = 0;
        for a1 in -6i64..=6 {
            for a2 in -6i64..=6 {
                for a3 in [-1i64, 1] {
                    let target = FrobeniusParams::new(&[a1, a2, a3]).unwrap();
                    let thetas = theta_candidates(&basis, &target).unwrap();
                    searched += thetas.len();
                    assert!(search_cyclic(&basis.c, &thetas, 3, 0).is_none());
                }
            }
        }
        // the unit A itself has characteristic polynomial outside the range,
        // so nothing small is even a candidate
        assert_eq!(searched, 0);
    }

    #[test]
    fn classification_examples() {
        let cfg = ClassifyConfig::default();
        for class in FractionClass::REPRESENTATIVES {
            let m = class.params().unwrap().matrix();
            let got = classify_fraction(&m, &cfg).unwrap();
            assert_eq!(got.class, class);
            assert!(got.conjugator.unwrap().verify(&m));
        }
        let w = Workers::new(1).unwrap();
        assert!(classification_report(4, 7, &cfg, &w).unwrap().counts.is_empty());
        let r5 = classification_report(5, 7, &cfg, &w).unwrap();
        assert_eq!(r5.counts.len(), 1);
        assert_eq!(r5.count(&FractionClass::GoldenRatio), 48);
    }

    #[test]
    fn frobenius_matrices_are_frobenius_type() {
        let cfg = SolverConfig::default();
        for a1 in -3i64..=3 {
            for a2 in -3i64..=3 {
                for a3 in -3i64..=3 {
                    let m = FrobeniusParams::new(&[a1, a2, a3]).unwrap().matrix();
                    if !m.is_irreducible() {
                        continue;
                    }
                    let v = decide_thm3(&m, &cfg).unwrap();
                    assert!(v.is_frobenius(), "{m}: {v:?}");
                }
            }
        }
    }

    #[test]
    fn quadratic_criterion_agrees_with_brute_force() {
        let cfg = SolverConfig::default();
        for n in 1..=5 {
            for a in enumerate_norm(2, n).unwrap() {
                if !a.is_irreducible() {
                    continue;
                }
                let v = decide_thm2(&a, &cfg).unwrap();
                let brute = conjugator_search_2x2(&a, 3);
                if let Some(conj) = &brute {
                    assert!(conj.verify(&a));
                    assert!(v.is_frobenius(), "{a}");
                }
                if v.is_non_frobenius() {
                    assert!(brute.is_none());
                }
            }
        }
    }

    #[test]
    fn basis_changes_keep_the_verdict() {
        let cfg = SolverConfig::default();
        let basis = counterexample_basis();
        let e = IntMatrix::identity(3);
        let rebasings = [
            (basis.a.add(&e), basis.b.clone()),
            (basis.a.clone(), basis.b.add(&basis.a)),
            (basis.b.clone(), basis.a.clone()),
        ];
        for (a, b) in rebasings {
            let re = basis.rebased(a, b).unwrap();
            assert!(decide_thm3_with_basis(&re, &cfg).unwrap().is_non_frobenius());
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn classification_is_conjugation_invariant(seed in 0u64..10_000, which in 0usize..3) {
            let rep = FractionClass::REPRESENTATIVES[which].clone();
            let p = random_sl3(seed);
            let c = p.mul(&rep.params().unwrap().matrix()).mul(&p.unimodular_inverse().unwrap());
            let got = classify_fraction(&c, &ClassifyConfig::default()).unwrap();
            prop_assert_eq!(got.class, rep);
        }

        #[test]
        fn witnesses_give_conjugators(seed in 0u64..10_000) {
            let p = random_sl3(seed);
            let c = p.mul(&FrobeniusParams::m131().matrix()).mul(&p.unimodular_inverse().unwrap());
            let v = decide_thm3(&c, &SolverConfig::default()).unwrap();
            let FrobeniusVerdict::FrobeniusType { conjugator: Some(conj), .. } = v else {
                return Err(TestCaseError::fail(format!("{c}: {v:?}")));
            };
            prop_assert!(conj.verify(&c));
        }
    }
}
