//! Witness certificates: families of pairwise non-isomorphic stable bricks
//! of one dimension vector over a Jacobi-finite non-Dynkin QP.
//!
//! The pipeline classifies the quiver, picks an acyclic full subquiver that
//! is a generalized Kronecker quiver or of affine type, builds an explicit
//! family on the restricted QP, and extends every module by zero to the
//! whole quiver, where all claims are re-verified from scratch. Affine cores
//! of type D and E get finite-field evidence instead of an exact family.
//!
//! Certificates are JSON documents with a SHA-256 digest over their
//! canonical serialization; [`verify_certificate`] re-checks one using only
//! the representation and stability layers.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::catalog::{recognize, Diagram, DiagramKind, Series};
use crate::classify::{classify, combinations, find_non_dynkin_core, ClassifyError, CoreKind};
use crate::field::{rat, FieldKind, Rational, RationalField};
use crate::jacobian::{JacobianError, TruncatedAlgebra};
use crate::json::{self, JsonError};
use crate::linalg::{nullspace, Matrix};
use crate::qp::{QpError, QuiverWithPotential};
use crate::quiver::{Quiver, QuiverError};
use crate::reduce::{nondegeneracy_probe, ProbeReport};
use crate::rep::{check_module, hom_space, is_brick, RepError, Representation};
use crate::stability::{is_stable, pairing, submodule_dim_vectors, DEFAULT_SUBMODULE_CAP};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WitnessError {
    #[error(transparent)]
    Qp(#[from] QpError),
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error(transparent)]
    Classify(#[from] ClassifyError),
    #[error(transparent)]
    Jacobian(#[from] JacobianError),
    #[error(transparent)]
    Json(#[from] JsonError),
    #[error(transparent)]
    Quiver(#[from] QuiverError),
    #[error("invalid parameters: {0}")]
    BadParameters(String),
    #[error("{0} is not an affine diagram")]
    NotAffine(String),
    #[error("quiver is not a non-oriented cycle")]
    NotNonOrientedCycle,
    #[error("no stability parameter with |θ_i| <= {0} separates the submodules")]
    ThetaInfeasible(i64),
    #[error("verification failed: {0}")]
    Verification(String),
}

pub type WitnessResult<T> = Result<T, WitnessError>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct WitnessOptions {
    /// Number of family members to exhibit.
    pub k: usize,
    pub jacobian_truncation: usize,
    pub probe_depth: usize,
    pub probe_trials: usize,
    pub probe_seed: u64,
    pub evidence_fields: Vec<FieldKind>,
    /// Largest number of candidate representations enumerated per field.
    pub evidence_cap: usize,
}

impl Default for WitnessOptions {
    fn default() -> Self {
        WitnessOptions {
            k: 5,
            jacobian_truncation: 10,
            probe_depth: 3,
            probe_trials: 4,
            probe_seed: 1,
            evidence_fields: vec![FieldKind::Prime(2), FieldKind::Prime(3), FieldKind::Prime(5)],
            evidence_cap: 400_000,
        }
    }
}

/// Primitive positive generator of the kernel of `2 I - A` for an affine diagram.
pub fn null_root(d: &Diagram) -> WitnessResult<Vec<usize>> {
    let n = d.vertex_count();
    let mut c = vec![vec![0i64; n]; n];
    for (i, row) in c.iter_mut().enumerate() {
        row[i] = 2;
    }
    for (u, v) in d.edges() {
        c[u][v] -= 1;
        c[v][u] -= 1;
    }
    kernel_root(c).ok_or_else(|| WitnessError::NotAffine(d.to_string()))
}

/// Null root of the underlying graph of `q`, in the vertex order of `q`.
pub fn quiver_null_root(q: &Quiver) -> WitnessResult<Vec<usize>> {
    let n = q.n();
    let c = (0..n).map(|i| (0..n).map(|j| if i == j { 2 } else { -q.entry(i, j).abs() }).collect()).collect();
    kernel_root(c).ok_or_else(|| WitnessError::NotAffine(format!("quiver on {n} vertices")))
}

/// Primitive positive integer vector spanning a one-dimensional kernel.
fn kernel_root(c: Vec<Vec<i64>>) -> Option<Vec<usize>> {
    let n = c.len();
    let c = c.into_iter().map(|row| row.into_iter().map(rat).collect()).collect();
    let kernel = nullspace(&RationalField, &Matrix::from_rows(c, n)?);
    let [v] = kernel.as_slice() else { return None };
    let lcm = v.iter().fold(BigInt::from(1), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * Rational::from_integer(lcm.clone())).to_integer()).collect();
    let gcd = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    let sign = if ints.iter().any(|x| x.is_negative()) { -1 } else { 1 };
    let root: Option<Vec<usize>> = ints.iter().map(|x| (x * BigInt::from(sign) / &gcd).to_usize()).collect();
    root.filter(|r| r.iter().all(|&x| x > 0))
}

/// Search budget for [`synthesize_theta`], in candidate vectors.
pub const THETA_SEARCH_BUDGET: u64 = 5_000_000;

/// Integer `θ` with `<θ, d> = 0` and `<θ, e> <= -1` for every `e` in
/// `forbidden`. Candidates are tried by increasing max-norm up to `bound`,
/// lexicographically within a norm.
pub fn synthesize_theta(d: &[usize], forbidden: &[Vec<usize>], bound: i64) -> Option<Vec<i64>> {
    let n = d.len();
    let mut tried = 0u64;
    for r in 0..=bound {
        let mut theta = vec![-r; n];
        loop {
            if theta.iter().any(|t| t.abs() == r) {
                tried += 1;
                if tried > THETA_SEARCH_BUDGET {
                    return None;
                }
                let ok =
                    pairing(&theta, d) == Ok(0) && forbidden.iter().all(|e| pairing(&theta, e).is_ok_and(|x| x <= -1));
                if ok {
                    return Some(theta);
                }
            }
            // lexicographic successor in [-r, r]^n
            let Some(pos) = (0..n).rev().find(|&i| theta[i] < r) else { break };
            theta[pos] += 1;
            for t in theta.iter_mut().skip(pos + 1) {
                *t = -r;
            }
        }
    }
    None
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum FamilyKind {
    ExactFamily,
    EvidenceEnumeration,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub parameter: String,
    pub rep: Representation,
}

/// A finite slice of a family of stable modules over a core QP.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StableFamily {
    pub core: QuiverWithPotential,
    pub dims: Vec<usize>,
    pub theta: Vec<i64>,
    pub parameter_slots: String,
    pub instances: Vec<Instance>,
    pub kind: FamilyKind,
    pub evidence: Option<EvidenceReport>,
}

impl StableFamily {
    /// Every instance is a module, θ-stable and a brick; instances are
    /// pairwise without nonzero morphisms.
    pub fn verify(&self) -> WitnessResult<()> {
        let q = self.core.quiver();
        for inst in &self.instances {
            if inst.rep.dims() != self.dims.as_slice() {
                return Err(WitnessError::Verification(format!(
                    "instance {} has the wrong dimension vector",
                    inst.parameter
                )));
            }
            if !check_module(&self.core, &inst.rep)? {
                return Err(WitnessError::Verification(format!("instance {} violates the relations", inst.parameter)));
            }
            if !is_stable(q, &inst.rep, &self.theta)? || !is_brick(q, &inst.rep)? {
                return Err(WitnessError::Verification(format!("instance {} is not a stable brick", inst.parameter)));
            }
        }
        if !pairwise_hom_zero(q, self.instances.iter().map(|i| &i.rep))? {
            return Err(WitnessError::Verification("two instances admit a nonzero morphism".into()));
        }
        Ok(())
    }
}

fn pairwise_hom_zero<'a>(q: &Quiver, reps: impl Iterator<Item = &'a Representation>) -> WitnessResult<bool> {
    let reps: Vec<&Representation> = reps.collect();
    for (i, m) in reps.iter().enumerate() {
        for (j, n) in reps.iter().enumerate() {
            if i != j && hom_space(q, m, n)?.dim != 0 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn check_k(k: usize) -> WitnessResult<()> {
    if k < 2 {
        return Err(WitnessError::BadParameters(format!("need at least 2 instances, got {k}")));
    }
    Ok(())
}

/// `K_m`, `m >= 2`: dimension `(1, 1)`, first arrow `1`, second `λ`, the rest
/// zero, `λ = 1..k`; the source pairs with `+1`, the sink with `-1`.
pub fn build_family_kronecker(core: &QuiverWithPotential, k: usize) -> WitnessResult<StableFamily> {
    check_k(k)?;
    let q = core.quiver();
    let arrows = q.arrows();
    if q.n() != 2 || arrows.len() < 2 || arrows.iter().any(|a| a.src != arrows[0].src) {
        return Err(WitnessError::BadParameters("expected a generalized Kronecker quiver K_m with m >= 2".into()));
    }
    let (s, t) = (arrows[0].src, arrows[0].tgt);
    let mut theta = vec![0; 2];
    theta[s] = 1;
    theta[t] = -1;
    let instances = (1..=k as i64)
        .map(|lambda| {
            let scalars: Vec<_> = (0..arrows.len())
                .map(|x| {
                    rat(match x {
                        0 => 1,
                        1 => lambda,
                        _ => 0,
                    })
                })
                .collect();
            let rep = Representation::thin(q, FieldKind::Rationals, vec![1, 1], &scalars)?;
            Ok(Instance { parameter: lambda.to_string(), rep })
        })
        .collect::<WitnessResult<Vec<_>>>()?;
    let mut slots = format!("{} = 1, {} = λ", arrows[0].id, arrows[1].id);
    if arrows.len() > 2 {
        let rest: Vec<&str> = arrows[2..].iter().map(|a| a.id.as_str()).collect();
        slots.push_str(&format!(", {} = 0", rest.join(", ")));
    }
    let family = StableFamily {
        core: core.clone(),
        dims: vec![1, 1],
        theta,
        parameter_slots: slots,
        instances,
        kind: FamilyKind::ExactFamily,
        evidence: None,
    };
    family.verify()?;
    Ok(family)
}

/// Non-oriented cycle: all-ones dimension vector, every arrow `1` except
/// the first, which carries `λ = 1..k`.
pub fn build_family_affine_a(core: &QuiverWithPotential, k: usize) -> WitnessResult<StableFamily> {
    check_k(k)?;
    let q = core.quiver();
    let is_cycle =
        matches!(recognize(q.exchange_matrix()), Some(Diagram { kind: DiagramKind::Affine, series: Series::A, .. }));
    if !is_cycle || !q.is_acyclic() {
        return Err(WitnessError::NotNonOrientedCycle);
    }
    if q.n() == 2 {
        return build_family_kronecker(core, k);
    }
    let n = q.n();
    let dims = vec![1; n];
    let make = |lambda: i64| {
        let scalars: Vec<_> = (0..q.arrows().len()).map(|x| rat(if x == 0 { lambda } else { 1 })).collect();
        Representation::thin(q, FieldKind::Rationals, dims.clone(), &scalars)
    };
    let zero = vec![0; n];
    let forbidden: Vec<Vec<usize>> =
        submodule_dim_vectors(q, &make(1)?)?.into_iter().filter(|e| *e != zero && *e != dims).collect();
    let bound = 2 * n as i64;
    let theta = synthesize_theta(&dims, &forbidden, bound).ok_or(WitnessError::ThetaInfeasible(bound))?;
    let instances = (1..=k as i64)
        .map(|lambda| Ok(Instance { parameter: lambda.to_string(), rep: make(lambda)? }))
        .collect::<WitnessResult<Vec<_>>>()?;
    let family = StableFamily {
        core: core.clone(),
        dims,
        theta,
        parameter_slots: format!("{} = λ, every other arrow = 1", q.arrow(0).id),
        instances,
        kind: FamilyKind::ExactFamily,
        evidence: None,
    };
    family.verify()?;
    Ok(family)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct FieldCount {
    pub field: FieldKind,
    pub candidates: u64,
    /// Isomorphism classes of θ-stable bricks of the dimension vector.
    pub stable_classes: Option<usize>,
    /// Those classes represented with every arrow acting nonzero.
    pub all_arrows_nonzero_classes: Option<usize>,
    pub skipped: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct EvidenceReport {
    pub dims: Vec<usize>,
    pub theta: Vec<i64>,
    pub counts: Vec<FieldCount>,
    /// Counts strictly increase along the enumerated fields.
    pub monotone_growth: bool,
    #[serde(skip)]
    pub representatives: Vec<(FieldKind, Vec<Representation>)>,
}

/// Exhaustive count of θ-stable brick classes of dimension `d` over each
/// prime field. Fields whose search space exceeds `cap` candidates (or the
/// submodule enumeration cap) are reported as skipped.
pub fn evidence_enumeration(
    p: &QuiverWithPotential,
    d: &[usize],
    theta: &[i64],
    fields: &[FieldKind],
    cap: usize,
) -> WitnessResult<EvidenceReport> {
    let q = p.quiver();
    if d.len() != q.n() || theta.len() != q.n() {
        return Err(WitnessError::BadParameters("dimension vector and θ must have one entry per vertex".into()));
    }
    let entries: usize = q.arrows().iter().map(|a| d[a.src] * d[a.tgt]).sum();
    let thin = d.iter().all(|&x| x <= 1);
    let mut counts = Vec::new();
    let mut representatives = Vec::new();
    for &field in fields {
        let FieldKind::Prime(prime) = field else {
            return Err(WitnessError::BadParameters("evidence needs prime fields".into()));
        };
        let candidates = (prime as u64).checked_pow(entries as u32).unwrap_or(u64::MAX);
        let skipped = if candidates > cap as u64 {
            Some(format!("{candidates} candidates exceed the cap of {cap}"))
        } else if !thin && d.iter().sum::<usize>() > DEFAULT_SUBMODULE_CAP {
            Some(format!("total dimension exceeds the submodule cap of {DEFAULT_SUBMODULE_CAP}"))
        } else {
            None
        };
        if let Some(reason) = skipped {
            counts.push(FieldCount {
                field,
                candidates,
                stable_classes: None,
                all_arrows_nonzero_classes: None,
                skipped: Some(reason),
            });
            continue;
        }
        let mut classes: Vec<Representation> = Vec::new();
        if pairing(theta, d)? == 0 {
            for code in 0..candidates {
                let entries = decode(q, d, prime as i64, code);
                if !torus_normal(q, &entries) || !simple_filter(q, d, theta, &entries, prime as i64) {
                    continue;
                }
                let m = to_representation(q, field, d, entries)?;
                if !check_module(p, &m)? || !is_stable(q, &m, theta)? || !is_brick(q, &m)? {
                    continue;
                }
                let mut new = true;
                for c in &classes {
                    if hom_space(q, &m, c)?.dim != 0 {
                        new = false;
                        break;
                    }
                }
                if new {
                    classes.push(m);
                }
            }
        }
        let nonzero = classes
            .iter()
            .filter(|m| {
                m.mats().iter().all(|x| x.rows() * x.cols() > 0 && x.to_rows().iter().flatten().any(|e| !e.is_zero()))
            })
            .count();
        counts.push(FieldCount {
            field,
            candidates,
            stable_classes: Some(classes.len()),
            all_arrows_nonzero_classes: Some(nonzero),
            skipped: None,
        });
        representatives.push((field, classes));
    }
    let seen: Vec<usize> = counts.iter().filter_map(|c| c.stable_classes).collect();
    let monotone_growth = seen.len() >= 2 && seen.windows(2).all(|w| w[0] < w[1]);
    Ok(EvidenceReport { dims: d.to_vec(), theta: theta.to_vec(), counts, monotone_growth, representatives })
}

/// Entries of the `code`-th representation of dimension `d` over `F_p`,
/// read off in base `p`, one row-major matrix per arrow.
fn decode(q: &Quiver, d: &[usize], p: i64, mut code: u64) -> Vec<Vec<Vec<i64>>> {
    q.arrows()
        .iter()
        .map(|a| {
            (0..d[a.tgt])
                .map(|_| {
                    (0..d[a.src])
                        .map(|_| {
                            let x = (code % p as u64) as i64;
                            code /= p as u64;
                            x
                        })
                        .collect()
                })
                .collect()
        })
        .collect()
}

/// One member of each orbit of the vertex-scaling torus passes: arrows are
/// visited in order and each nonzero one joining two different components
/// of the forest built so far must have first nonzero entry `1`. The forest
/// depends only on which matrices vanish, so it is the same on a whole orbit.
fn torus_normal(q: &Quiver, entries: &[Vec<Vec<i64>>]) -> bool {
    let mut parent: Vec<usize> = (0..q.n()).collect();
    fn find(parent: &mut [usize], mut v: usize) -> usize {
        while parent[v] != v {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        v
    }
    for (a, m) in q.arrows().iter().zip(entries) {
        let Some(&lead) = m.iter().flatten().find(|&&x| x != 0) else { continue };
        let (s, t) = (find(&mut parent, a.src), find(&mut parent, a.tgt));
        if s != t {
            if lead != 1 {
                return false;
            }
            parent[t] = s;
        }
    }
    true
}

fn to_representation(
    q: &Quiver,
    field: FieldKind,
    d: &[usize],
    entries: Vec<Vec<Vec<i64>>>,
) -> WitnessResult<Representation> {
    let mats = entries
        .into_iter()
        .zip(q.arrows())
        .map(|(rows, a)| {
            let rows = rows.into_iter().map(|r| r.into_iter().map(rat).collect()).collect();
            Matrix::from_rows(rows, d[a.src]).expect("decoded shape")
        })
        .collect();
    Ok(Representation::new(q, field, d.to_vec(), mats)?)
}

fn rank_mod(mut rows: Vec<Vec<i64>>, p: i64) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(r) = (rank..rows.len()).find(|&r| rows[r][c] % p != 0) else { continue };
        rows.swap(rank, r);
        let inv = (1..p).find(|x| rows[rank][c] * x % p == 1).expect("prime modulus");
        for r in 0..rows.len() {
            if r != rank && rows[r][c] != 0 {
                let f = rows[r][c] * inv % p;
                for k in 0..cols {
                    rows[r][k] = (rows[r][k] - f * rows[rank][k]).rem_euclid(p);
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Necessary condition for stability, checked on raw entries: a vertex
/// whose outgoing maps share a kernel vector spans a simple submodule, and
/// one not covered by its incoming maps gives a simple quotient.
fn simple_filter(q: &Quiver, d: &[usize], theta: &[i64], entries: &[Vec<Vec<i64>>], p: i64) -> bool {
    if d.iter().sum::<usize>() <= 1 {
        return true;
    }
    for v in (0..d.len()).filter(|&v| d[v] > 0) {
        if theta[v] >= 0 {
            let stacked: Vec<Vec<i64>> = q
                .arrows()
                .iter()
                .zip(entries)
                .filter(|(a, _)| a.src == v)
                .flat_map(|(_, m)| m.iter().cloned())
                .collect();
            if stacked.is_empty() || rank_mod(stacked, p) < d[v] {
                return false;
            }
        }
        if theta[v] <= 0 {
            let mut side: Vec<Vec<i64>> = vec![Vec::new(); d[v]];
            for (_, m) in q.arrows().iter().zip(entries).filter(|(a, _)| a.tgt == v) {
                for (r, row) in m.iter().enumerate() {
                    side[r].extend_from_slice(row);
                }
            }
            if side[0].is_empty() || rank_mod(side, p) < d[v] {
                return false;
            }
        }
    }
    true
}

/// `θ_i = <δ, e_i>` for the Euler form of an acyclic quiver:
/// `δ_i - Σ_{a: j -> i} δ_j`.
pub fn euler_theta(q: &Quiver, delta: &[usize]) -> Vec<i64> {
    let mut theta: Vec<i64> = delta.iter().map(|&x| x as i64).collect();
    for a in q.arrows() {
        theta[a.tgt] -= delta[a.src] as i64;
    }
    theta
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftedInstance {
    pub parameter: String,
    pub rep: Representation,
    pub check_module: bool,
    pub stable: bool,
    pub brick: bool,
}

/// Extend θ and every instance by zero from the core on `subset` to
/// `target`, re-verifying each lifted module on the whole QP.
pub fn lift(
    family: &StableFamily,
    subset: &[usize],
    target: &QuiverWithPotential,
) -> WitnessResult<(Vec<i64>, Vec<LiftedInstance>)> {
    let big = target.quiver();
    let mut theta = vec![0; big.n()];
    for (v, &w) in subset.iter().enumerate() {
        theta[w] = family.theta[v];
    }
    let mut out = Vec::with_capacity(family.instances.len());
    for inst in &family.instances {
        let rep = inst.rep.extend_by_zero(family.core.quiver(), big, subset)?;
        let lifted = LiftedInstance {
            parameter: inst.parameter.clone(),
            check_module: check_module(target, &rep)?,
            stable: is_stable(big, &rep, &theta)?,
            brick: is_brick(big, &rep)?,
            rep,
        };
        if !(lifted.check_module && lifted.stable && lifted.brick) {
            return Err(WitnessError::Verification(format!(
                "lifted instance {} failed re-verification",
                lifted.parameter
            )));
        }
        out.push(lifted);
    }
    Ok((theta, out))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum WitnessStatus {
    #[serde(rename = "witness")]
    Witness,
    #[serde(rename = "dynkin-no-witness")]
    DynkinNoWitness,
    #[serde(rename = "refused")]
    Refused,
    #[serde(rename = "failed")]
    Failed,
}

/// An acyclic core: `K_m` (`m >= 2`) or an acyclic affine quiver. The core
/// returned by [`find_non_dynkin_core`] is used when acyclic, otherwise the
/// smallest acyclic one.
fn choose_core(q: &Quiver) -> WitnessResult<Option<(Vec<usize>, String)>> {
    let Some(core) = find_non_dynkin_core(q)? else { return Ok(None) };
    if q.full_subquiver(&core.subset)?.is_acyclic() {
        return Ok(Some((core.subset.clone(), core.kind.to_string())));
    }
    for size in 2..=q.n() {
        for subset in combinations(q.n(), size) {
            let sub = q.full_subquiver(&subset)?;
            if !sub.is_connected() || !sub.is_acyclic() {
                continue;
            }
            if size == 2 && q.entry(subset[0], subset[1]).abs() >= 3 {
                return Ok(Some((
                    subset.clone(),
                    CoreKind::Kronecker(q.entry(subset[0], subset[1]).unsigned_abs() as usize).to_string(),
                )));
            }
            if let Some(d) = recognize(sub.exchange_matrix()).filter(|d| d.kind == DiagramKind::Affine) {
                return Ok(Some((subset, d.to_string())));
            }
        }
    }
    Ok(Some((core.subset.clone(), core.kind.to_string())))
}

fn one_based(v: &[usize]) -> Vec<usize> {
    v.iter().map(|x| x + 1).collect()
}

/// Build the family on the restricted QP according to the core's shape.
fn build_family(core_qp: &QuiverWithPotential, opts: &WitnessOptions) -> WitnessResult<(StableFamily, Vec<String>)> {
    let q = core_qp.quiver();
    let mut caveats = Vec::new();
    if q.n() == 2 {
        return Ok((build_family_kronecker(core_qp, opts.k)?, caveats));
    }
    let diagram = recognize(q.exchange_matrix())
        .filter(|d| d.kind == DiagramKind::Affine && q.is_acyclic())
        .ok_or_else(|| WitnessError::NotAffine(format!("core on {} vertices", q.n())))?;
    if diagram.series == Series::A {
        match build_family_affine_a(core_qp, opts.k) {
            Ok(f) => return Ok((f, caveats)),
            Err(WitnessError::ThetaInfeasible(b)) => {
                caveats
                    .push(format!("θ synthesis infeasible within |θ_i| <= {b}; falling back to evidence enumeration"));
            }
            Err(e) => return Err(e),
        }
    }
    // D/E cores (and infeasible A cores): finite-field evidence at the null root
    let delta = quiver_null_root(q)?;
    let theta = euler_theta(q, &delta);
    let evidence = evidence_enumeration(core_qp, &delta, &theta, &opts.evidence_fields, opts.evidence_cap)?;
    caveats.push(
        "evidence mode: counts of stable brick classes over prime fields, not an exact one-parameter family".into(),
    );
    let (field, reps) = evidence
        .representatives
        .iter()
        .max_by_key(|(_, r)| r.len())
        .filter(|(_, r)| r.len() >= 2)
        .cloned()
        .ok_or_else(|| {
            WitnessError::Verification("fewer than two stable classes found within the evidence caps".into())
        })?;
    let instances = reps
        .into_iter()
        .take(opts.k)
        .enumerate()
        .map(|(x, rep)| Instance { parameter: format!("{field}#{}", x + 1), rep })
        .collect();
    let family = StableFamily {
        core: core_qp.clone(),
        dims: delta,
        theta,
        parameter_slots: format!("representatives of distinct stable classes over {field}"),
        instances,
        kind: FamilyKind::EvidenceEnumeration,
        evidence: Some(evidence),
    };
    family.verify()?;
    Ok((family, caveats))
}

/// Run the whole pipeline and return the certificate document.
pub fn run_witness(p: &QuiverWithPotential, opts: &WitnessOptions) -> WitnessResult<Value> {
    run_witness_with_progress(p, opts, &mut |_| {})
}

/// [`run_witness`], reporting each stage to `progress` as it starts.
pub fn run_witness_with_progress(
    p: &QuiverWithPotential,
    opts: &WitnessOptions,
    progress: &mut dyn FnMut(&str),
) -> WitnessResult<Value> {
    let mut cert = serde_json::Map::new();
    cert.insert("tool".into(), json!({"name": "qpw", "version": env!("CARGO_PKG_VERSION")}));
    cert.insert("options".into(), json::to_value(opts));
    let input = json::qp_to_value(p);
    cert.insert("inputDigest".into(), json!(json::digest(&input)));
    cert.insert("input".into(), input);
    let mut caveats: Vec<String> = Vec::new();

    let finish =
        |mut cert: serde_json::Map<String, Value>, status: WitnessStatus, message: String, caveats: Vec<String>| {
            cert.insert("status".into(), json::to_value(&status));
            cert.insert("message".into(), json!(message));
            cert.insert("caveats".into(), json!(caveats));
            let body = Value::Object(cert);
            let digest = json::digest(&body);
            let mut cert = body;
            cert.as_object_mut().expect("object").insert("digest".into(), json!(digest));
            Ok(cert)
        };

    if opts.k < 2 {
        return Err(WitnessError::BadParameters(format!("need at least 2 instances, got {}", opts.k)));
    }
    if !p.is_reduced() {
        return finish(cert, WitnessStatus::Refused, "input QP is not reduced; reduce it first".into(), caveats);
    }
    if p.quiver().has_two_cycles() {
        return finish(cert, WitnessStatus::Refused, "quiver has 2-cycles".into(), caveats);
    }
    if !p.quiver().is_connected() {
        return finish(cert, WitnessStatus::Refused, "quiver is not connected".into(), caveats);
    }
    let n_trunc = opts.jacobian_truncation.min(p.truncation().saturating_sub(1)).max(2);
    progress(&format!("jacobian algebra at truncation {n_trunc}"));
    let alg = match TruncatedAlgebra::new(p, n_trunc) {
        Ok(a) => a,
        Err(e) => return finish(cert, WitnessStatus::Refused, format!("Jacobian algebra: {e}"), caveats),
    };
    let fin = alg.certificate();
    cert.insert(
        "jacobian".into(),
        json!({"truncation": n_trunc, "gradedDims": alg.graded_dims(), "status": fin.status.to_string()}),
    );
    if !fin.is_finite() {
        caveats.push(format!("UndeterminedAtTruncation({n_trunc}): no zero layer below the truncation degree"));
        return finish(cert, WitnessStatus::Refused, "Jacobi-finiteness not certified".into(), caveats);
    }
    caveats.push(format!(
        "Jacobian algebra truncated at degree {n_trunc}; finite dimension {} certified by a zero layer in degree {}",
        fin.total_dim().unwrap_or(0),
        fin.vanishing_degree.unwrap_or(0)
    ));
    progress("classifying the mutation class");
    let class = classify(p.quiver())?;
    cert.insert("classification".into(), json!(class.mutation_type.to_string()));
    if class.mutation_type.is_dynkin() {
        let msg = format!("{}: τ-tilting finite, no witness expected", class.mutation_type);
        return finish(cert, WitnessStatus::DynkinNoWitness, msg, caveats);
    }
    let Some((subset, core_type)) = choose_core(p.quiver())? else {
        return finish(cert, WitnessStatus::Failed, "no non-Dynkin core found".into(), caveats);
    };
    progress(&format!("core {core_type} on vertices {:?}", one_based(&subset)));
    let core_qp = p.restrict(&subset)?;
    cert.insert(
        "core".into(),
        json!({"subset": one_based(&subset), "type": core_type, "qp": json::qp_to_value(&core_qp)}),
    );
    progress("probing the restricted QP");
    let probe: ProbeReport = nondegeneracy_probe(&core_qp, opts.probe_depth, opts.probe_trials, opts.probe_seed)?;
    caveats.push(format!(
        "restricted QP probed for degeneracy to depth {} with {} trials (seed {}): {}",
        probe.depth,
        probe.trials,
        probe.seed,
        if probe.passed { "no 2-cycle produced" } else { "a 2-cycle was produced" }
    ));
    cert.insert("probe".into(), json::to_value(&probe));
    if !core_qp.quiver().is_acyclic() {
        return finish(cert, WitnessStatus::Failed, "no acyclic core available for an explicit family".into(), caveats);
    }
    progress("building the stable family");
    let (family, family_caveats) = match build_family(&core_qp, opts) {
        Ok(x) => x,
        Err(e @ (WitnessError::Verification(_) | WitnessError::ThetaInfeasible(_))) => {
            return finish(cert, WitnessStatus::Failed, e.to_string(), caveats);
        }
        Err(e) => return Err(e),
    };
    caveats.extend(family_caveats);
    if family.kind == FamilyKind::ExactFamily {
        caveats.push(format!(
            "{} instances of a one-parameter family; parameters are the first {} positive integers",
            family.instances.len(),
            family.instances.len()
        ));
    }
    let cq = core_qp.quiver();
    let field = family.instances.first().map(|i| i.rep.field()).unwrap_or(FieldKind::Rationals);
    cert.insert(
        "family".into(),
        json!({
            "kind": family.kind,
            "field": field,
            "dims": family.dims,
            "thetaCore": family.theta,
            "parameterSlots": family.parameter_slots,
            "instances": family.instances.iter()
                .map(|i| json!({"parameter": i.parameter, "representation": json::rep_to_value(&i.rep, cq)}))
                .collect::<Vec<_>>(),
            "evidence": family.evidence,
        }),
    );
    progress("lifting and re-verifying on the input QP");
    let (theta, lifted) = match lift(&family, &subset, p) {
        Ok(x) => x,
        Err(e @ WitnessError::Verification(_)) => return finish(cert, WitnessStatus::Failed, e.to_string(), caveats),
        Err(e) => return Err(e),
    };
    let pairwise = pairwise_hom_zero(p.quiver(), lifted.iter().map(|l| &l.rep))?;
    cert.insert("thetaLifted".into(), json!(theta));
    cert.insert(
        "liftedInstances".into(),
        json!(lifted
            .iter()
            .map(|l| json!({
                "parameter": l.parameter,
                "representation": json::rep_to_value(&l.rep, p.quiver()),
                "checkModule": l.check_module,
                "stable": l.stable,
                "brick": l.brick,
            }))
            .collect::<Vec<_>>()),
    );
    cert.insert("pairwiseHomZero".into(), json!(pairwise));
    if !pairwise {
        return finish(cert, WitnessStatus::Failed, "lifted instances are not pairwise Hom-orthogonal".into(), caveats);
    }
    let msg = format!(
        "{} pairwise non-isomorphic θ-stable bricks of dimension vector {:?} on core {}",
        lifted.len(),
        lifted.first().map(|l| l.rep.dims().to_vec()).unwrap_or_default(),
        core_type
    );
    finish(cert, WitnessStatus::Witness, msg, caveats)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Check {
    pub name: String,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct VerifyReport {
    pub ok: bool,
    pub status: String,
    pub checks: Vec<Check>,
}

/// Re-check a certificate from its own contents: digest, θ lift, and every
/// lifted instance (module, stable, brick, pairwise Hom zero) recomputed on
/// the input QP.
pub fn verify_certificate(cert: &Value) -> WitnessResult<VerifyReport> {
    let mut checks = Vec::new();
    let mut push = |name: &str, passed: bool| checks.push(Check { name: name.into(), passed });
    let obj = cert.as_object().ok_or_else(|| JsonError::Schema("certificate must be an object".into()))?;
    let mut body = obj.clone();
    let stated = body.remove("digest");
    push("digest", stated.as_ref().and_then(Value::as_str) == Some(json::digest(&Value::Object(body)).as_str()));
    let input = obj.get("input").ok_or_else(|| JsonError::Schema("missing input".into()))?;
    let p = json::qp_from_value(input)?;
    push(
        "inputDigest",
        obj.get("inputDigest").and_then(Value::as_str) == Some(json::digest(&json::qp_to_value(&p)).as_str()),
    );
    let status = obj.get("status").and_then(Value::as_str).unwrap_or("").to_string();
    if status == "witness" {
        let q = p.quiver();
        let theta: Vec<i64> = serde_json::from_value(obj.get("thetaLifted").cloned().unwrap_or(Value::Null))
            .map_err(|e| JsonError::Schema(format!("thetaLifted: {e}")))?;
        let subset: Vec<usize> = serde_json::from_value(obj["core"]["subset"].clone())
            .map_err(|e| JsonError::Schema(format!("core.subset: {e}")))?;
        let theta_core: Vec<i64> = serde_json::from_value(obj["family"]["thetaCore"].clone())
            .map_err(|e| JsonError::Schema(format!("family.thetaCore: {e}")))?;
        let inside: BTreeSet<usize> = subset.iter().map(|v| v.saturating_sub(1)).collect();
        let lift_ok = theta.len() == q.n()
            && theta_core.len() == subset.len()
            && subset.iter().zip(&theta_core).all(|(&v, &t)| v >= 1 && theta.get(v - 1) == Some(&t))
            && (0..q.n()).filter(|v| !inside.contains(v)).all(|v| theta[v] == 0);
        push("thetaLift", lift_ok);
        let docs = obj.get("liftedInstances").and_then(Value::as_array).cloned().unwrap_or_default();
        let reps = docs.iter().map(|d| json::rep_from_value(&d["representation"], q)).collect::<Result<Vec<_>, _>>()?;
        push("instanceCount", !reps.is_empty());
        push("sameDimensionVector", reps.windows(2).all(|w| w[0].dims() == w[1].dims()));
        let mut module = true;
        let mut stable = true;
        let mut brick = true;
        for m in &reps {
            module &= check_module(&p, m)?;
            stable &= is_stable(q, m, &theta)?;
            brick &= is_brick(q, m)?;
        }
        push("checkModule", module);
        push("stable", stable);
        push("brick", brick);
        push("pairwiseHomZero", pairwise_hom_zero(q, reps.iter())?);
    }
    let ok = checks.iter().all(|c| c.passed);
    Ok(VerifyReport { ok, status, checks })
}
