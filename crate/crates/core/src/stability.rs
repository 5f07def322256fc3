//! King stability: submodule enumeration, (semi)stability and simplicity in
//! the wide subcategory `W_θ` of semistable modules with pairing zero.
//!
//! Two exact enumeration regimes. Thin modules (every `d_i <= 1`) over any
//! field: submodules are the vertex subsets closed along arrows acting
//! nonzero. Otherwise the module must live over a prime field and the
//! submodule lattice is enumerated by closing under one added vector at a
//! time, with a cap on the total dimension.

use std::collections::{BTreeSet, HashSet, VecDeque};

use num_traits::{One, Zero};

use crate::field::{Field, FieldKind, PrimeField, Rational, RationalField};
use crate::linalg::{mat_mul, rref, Matrix};
use crate::quiver::Quiver;
use crate::rep::{embed, with_field, RepError, RepResult, Representation};

/// Default cap on the total dimension for non-thin enumeration.
pub const DEFAULT_SUBMODULE_CAP: usize = 6;

/// Largest support for the closed-subset enumeration of thin modules.
pub const MAX_THIN_SUPPORT: usize = 20;

/// `Σ θ_i d_i`.
pub fn pairing(theta: &[i64], d: &[usize]) -> RepResult<i64> {
    if theta.len() != d.len() {
        return Err(RepError::ThetaLength { expected: d.len(), got: theta.len() });
    }
    Ok(theta.iter().zip(d).map(|(t, &x)| t * x as i64).sum())
}

/// A submodule given by a row-reduced basis of its subspace at every vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Submodule {
    /// `k_i x d_i` matrices in reduced row echelon form.
    pub basis: Vec<Matrix<Rational>>,
    pivots: Vec<Vec<usize>>,
}

impl Submodule {
    pub fn dims(&self) -> Vec<usize> {
        self.basis.iter().map(Matrix::rows).collect()
    }

    /// The submodule as a representation in its own basis.
    pub fn representation(&self, q: &Quiver, m: &Representation) -> RepResult<Representation> {
        let dims = self.dims();
        let mats = with_field!(m.field(), f, {
            q.arrows()
                .iter()
                .enumerate()
                .map(|(x, a)| {
                    let ma = embed(f, m.mat(x));
                    let src = embed(f, &self.basis[a.src]).transpose();
                    let img = mat_mul(f, &ma, &src).expect("shapes agree");
                    let mut out = Matrix::filled(dims[a.tgt], dims[a.src], Rational::zero());
                    for (t, &p) in self.pivots[a.tgt].iter().enumerate() {
                        for s in 0..dims[a.src] {
                            out.set(t, s, f.lift(img.get(p, s)));
                        }
                    }
                    out
                })
                .collect::<Vec<_>>()
        });
        Representation::new(q, m.field(), dims, mats)
    }
}

/// All submodules of `m`, including `0` and `m`.
pub fn submodules(q: &Quiver, m: &Representation, cap: usize) -> RepResult<Vec<Submodule>> {
    if m.is_thin() {
        return thin_submodules(q, m);
    }
    let FieldKind::Prime(p) = m.field() else {
        return Err(RepError::NeedsPrimeField);
    };
    if m.total_dim() > cap {
        return Err(RepError::CapExceeded { total: m.total_dim(), cap });
    }
    Ok(prime_submodules(q, m, &PrimeField::new(p)))
}

fn thin_submodules(q: &Quiver, m: &Representation) -> RepResult<Vec<Submodule>> {
    let support: Vec<usize> = (0..q.n()).filter(|&i| m.dims()[i] == 1).collect();
    if support.len() > MAX_THIN_SUPPORT {
        return Err(RepError::CapExceeded { total: support.len(), cap: MAX_THIN_SUPPORT });
    }
    let forced: Vec<(usize, usize)> = q
        .arrows()
        .iter()
        .enumerate()
        .filter(|(x, a)| m.dims()[a.src] == 1 && m.dims()[a.tgt] == 1 && !m.mat(*x).get(0, 0).is_zero())
        .map(|(_, a)| (a.src, a.tgt))
        .collect();
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << support.len()) {
        let mut inside = vec![false; q.n()];
        for (b, &v) in support.iter().enumerate() {
            inside[v] = mask >> b & 1 == 1;
        }
        if forced.iter().any(|&(s, t)| inside[s] && !inside[t]) {
            continue;
        }
        let basis = (0..q.n())
            .map(|i| {
                if inside[i] {
                    Matrix::filled(1, 1, Rational::one())
                } else {
                    Matrix::filled(0, m.dims()[i], Rational::zero())
                }
            })
            .collect();
        let pivots = (0..q.n()).map(|i| if inside[i] { vec![0] } else { vec![] }).collect();
        out.push(Submodule { basis, pivots });
    }
    Ok(out)
}

type Span = Vec<Vec<u64>>;

/// Canonical row-reduced basis of the span of `rows` in `F_p^d`.
fn reduce_span(f: &PrimeField, rows: Span, d: usize) -> (Span, Vec<usize>) {
    if rows.is_empty() || d == 0 {
        return (Vec::new(), Vec::new());
    }
    let mut m = Matrix::from_rows(rows, d).expect("rows have length d");
    let pivots = rref(f, &mut m);
    ((0..pivots.len()).map(|r| m.row(r).to_vec()).collect(), pivots)
}

fn in_span(f: &PrimeField, span: &Span, pivots: &[usize], v: &[u64]) -> bool {
    let mut w = v.to_vec();
    for (row, &p) in span.iter().zip(pivots) {
        let c = w[p];
        if c != 0 {
            for (x, r) in w.iter_mut().zip(row) {
                *x = f.sub(x, &f.mul(&c, r));
            }
        }
    }
    w.iter().all(|&x| x == 0)
}

/// Smallest submodule containing the given spans.
fn closure(
    f: &PrimeField,
    q: &Quiver,
    mats: &[Matrix<u64>],
    dims: &[usize],
    mut spans: Vec<Span>,
) -> Vec<(Span, Vec<usize>)> {
    let mut reduced: Vec<(Span, Vec<usize>)> = spans.drain(..).zip(dims).map(|(s, &d)| reduce_span(f, s, d)).collect();
    loop {
        let mut changed = false;
        for (x, a) in q.arrows().iter().enumerate() {
            if dims[a.tgt] == 0 || reduced[a.src].0.is_empty() {
                continue;
            }
            let images: Vec<Vec<u64>> = reduced[a.src]
                .0
                .iter()
                .map(|v| {
                    (0..dims[a.tgt])
                        .map(|r| (0..dims[a.src]).fold(0, |acc, c| f.add(&acc, &f.mul(mats[x].get(r, c), &v[c]))))
                        .collect()
                })
                .collect();
            let new: Vec<Vec<u64>> =
                images.into_iter().filter(|w| !in_span(f, &reduced[a.tgt].0, &reduced[a.tgt].1, w)).collect();
            if !new.is_empty() {
                let mut rows = reduced[a.tgt].0.clone();
                rows.extend(new);
                reduced[a.tgt] = reduce_span(f, rows, dims[a.tgt]);
                changed = true;
            }
        }
        if !changed {
            return reduced;
        }
    }
}

/// Nonzero vectors of `F_p^d` whose first nonzero entry is 1.
fn projective_points(p: u64, d: usize) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let total = p.pow(d as u32);
    for code in 1..total {
        let mut v = Vec::with_capacity(d);
        let mut c = code;
        for _ in 0..d {
            v.push(c % p);
            c /= p;
        }
        v.reverse();
        if v.iter().find(|&&x| x != 0) == Some(&1) {
            out.push(v);
        }
    }
    out
}

fn prime_submodules(q: &Quiver, m: &Representation, f: &PrimeField) -> Vec<Submodule> {
    let dims = m.dims().to_vec();
    let mats: Vec<Matrix<u64>> = m.mats().iter().map(|x| embed(f, x)).collect();
    let points: Vec<Vec<Vec<u64>>> = dims.iter().map(|&d| projective_points(f.modulus(), d)).collect();
    let start = closure(f, q, &mats, &dims, vec![Vec::new(); q.n()]);
    let key = |s: &Vec<(Span, Vec<usize>)>| s.iter().map(|(r, _)| r.clone()).collect::<Vec<_>>();
    let mut seen: HashSet<Vec<Span>> = HashSet::from([key(&start)]);
    let mut queue = VecDeque::from([start]);
    let mut out = Vec::new();
    while let Some(sub) = queue.pop_front() {
        for i in 0..q.n() {
            for v in &points[i] {
                if in_span(f, &sub[i].0, &sub[i].1, v) {
                    continue;
                }
                let mut spans: Vec<Span> = sub.iter().map(|(r, _)| r.clone()).collect();
                spans[i].push(v.clone());
                let next = closure(f, q, &mats, &dims, spans);
                if seen.insert(key(&next)) {
                    queue.push_back(next);
                }
            }
        }
        let basis = sub
            .iter()
            .zip(&dims)
            .map(|((rows, _), &d)| {
                let rows: Vec<Vec<Rational>> = rows.iter().map(|r| r.iter().map(|x| f.lift(x)).collect()).collect();
                if rows.is_empty() {
                    Matrix::filled(0, d, Rational::zero())
                } else {
                    Matrix::from_rows(rows, d).expect("rows have length d")
                }
            })
            .collect();
        let pivots = sub.into_iter().map(|(_, p)| p).collect();
        out.push(Submodule { basis, pivots });
    }
    out
}

/// Dimension vectors of all submodules, including `0` and `[M]`.
pub fn submodule_dim_vectors(q: &Quiver, m: &Representation) -> RepResult<BTreeSet<Vec<usize>>> {
    Ok(submodules(q, m, DEFAULT_SUBMODULE_CAP)?.iter().map(Submodule::dims).collect())
}

fn proper_nonzero_pairings(q: &Quiver, m: &Representation, theta: &[i64]) -> RepResult<Vec<i64>> {
    let total = m.dims().to_vec();
    let zero = vec![0; q.n()];
    submodule_dim_vectors(q, m)?.into_iter().filter(|d| *d != zero && *d != total).map(|d| pairing(theta, &d)).collect()
}

/// `<θ,[M]> = 0` and `<θ,[N]> <= 0` for every submodule `N`.
pub fn is_semistable(q: &Quiver, m: &Representation, theta: &[i64]) -> RepResult<bool> {
    if pairing(theta, m.dims())? != 0 {
        return Ok(false);
    }
    Ok(proper_nonzero_pairings(q, m, theta)?.into_iter().all(|x| x <= 0))
}

/// `M != 0`, `<θ,[M]> = 0` and `<θ,[N]> < 0` for every proper nonzero submodule.
pub fn is_stable(q: &Quiver, m: &Representation, theta: &[i64]) -> RepResult<bool> {
    if m.is_zero() || pairing(theta, m.dims())? != 0 {
        return Ok(false);
    }
    Ok(proper_nonzero_pairings(q, m, theta)?.into_iter().all(|x| x < 0))
}

/// Is `M` a simple object of `W_θ`? Every proper nonzero submodule with
/// pairing zero is rebuilt as a module and tested for semistability on its
/// own submodule lattice.
pub fn is_simple_in_w_theta(q: &Quiver, m: &Representation, theta: &[i64]) -> RepResult<bool> {
    if m.is_zero() || !is_semistable(q, m, theta)? {
        return Ok(false);
    }
    let total = m.dims().to_vec();
    for sub in submodules(q, m, DEFAULT_SUBMODULE_CAP)? {
        let d = sub.dims();
        if d.iter().all(|&x| x == 0) || d == total || pairing(theta, &d)? != 0 {
            continue;
        }
        if is_semistable(q, &sub.representation(q, m)?, theta)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::rat;
    use crate::quiver::Arrow;
    use crate::rep::tests::{kronecker, m_lambda};
    use crate::rep::{hom_space, is_brick};
    use proptest::prelude::*;

    fn dvs(q: &Quiver, m: &Representation) -> Vec<Vec<usize>> {
        submodule_dim_vectors(q, m).unwrap().into_iter().collect()
    }

    #[test]
    fn pairing_examples() {
        assert_eq!(pairing(&[1, -1], &[1, 1]).unwrap(), 0);
        assert_eq!(pairing(&[1, -1], &[0, 1]).unwrap(), -1);
        assert_eq!(pairing(&[0, 0, 0], &[3, 1, 4]).unwrap(), 0);
        assert!(pairing(&[1], &[1, 1]).is_err());
    }

    #[test]
    fn submodule_examples() {
        let q = kronecker();
        let expected = vec![vec![0, 0], vec![0, 1], vec![1, 1]];
        assert_eq!(dvs(&q, &m_lambda(FieldKind::Rationals, 2)), expected);
        assert_eq!(dvs(&q, &m_lambda(FieldKind::Rationals, 0)), expected);
        assert_eq!(dvs(&q, &Representation::zero(&q, FieldKind::Rationals)), vec![vec![0, 0]]);
        // the same answers from the subspace enumeration
        let m = m_lambda(FieldKind::Prime(3), 2);
        let f = PrimeField::new(3);
        let subs = prime_submodules(&q, &m, &f);
        assert_eq!(subs.iter().map(Submodule::dims).collect::<BTreeSet<_>>().into_iter().collect::<Vec<_>>(), expected);
    }

    #[test]
    fn non_thin_needs_prime_field() {
        let q = kronecker();
        let m = m_lambda(FieldKind::Rationals, 1);
        let mm = m.direct_sum(&q, &m).unwrap();
        assert_eq!(submodule_dim_vectors(&q, &mm), Err(RepError::NeedsPrimeField));
        let m = m_lambda(FieldKind::Prime(2), 1);
        let big = (0..3).fold(m.clone(), |acc, _| acc.direct_sum(&q, &m).unwrap());
        assert!(matches!(submodule_dim_vectors(&q, &big), Err(RepError::CapExceeded { .. })));
    }

    #[test]
    fn subspace_lattice_of_a_semisimple_module() {
        // S_1^2 over F_3: the 3 + 1 lines plus 0 and everything
        let q = kronecker();
        let s = Representation::simple(&q, FieldKind::Prime(3), 0);
        let ss = s.direct_sum(&q, &s).unwrap();
        assert_eq!(submodules(&q, &ss, DEFAULT_SUBMODULE_CAP).unwrap().len(), 6);
        // M_1 + M_2 over F_5: 0, S_2-lines (6), M_1, M_2, S_2^2 + ..., whole
        let m = m_lambda(FieldKind::Prime(5), 1).direct_sum(&q, &m_lambda(FieldKind::Prime(5), 2)).unwrap();
        let d = dvs(&q, &m);
        assert_eq!(d, vec![vec![0, 0], vec![0, 1], vec![0, 2], vec![1, 1], vec![1, 2], vec![2, 2]]);
    }

    #[test]
    fn stability_examples() {
        let q = kronecker();
        for field in [FieldKind::Rationals, FieldKind::Prime(5)] {
            let m = m_lambda(field, 2);
            assert!(is_stable(&q, &m, &[1, -1]).unwrap());
            assert!(is_simple_in_w_theta(&q, &m, &[1, -1]).unwrap());
            assert!(!is_stable(&q, &m, &[-1, 1]).unwrap());
        }
        let f = FieldKind::Prime(5);
        let sum = m_lambda(f, 1).direct_sum(&q, &m_lambda(f, 2)).unwrap();
        assert!(is_semistable(&q, &sum, &[1, -1]).unwrap());
        assert!(!is_stable(&q, &sum, &[1, -1]).unwrap());
        assert!(!is_simple_in_w_theta(&q, &sum, &[1, -1]).unwrap());
        for i in 0..2 {
            assert!(is_stable(&q, &Representation::simple(&q, f, i), &[0, 0]).unwrap());
        }
        assert!(!is_simple_in_w_theta(&q, &m_lambda(f, 1), &[-1, 1]).unwrap());
    }

    #[test]
    fn submodule_representation_is_a_module_map_target() {
        let q = kronecker();
        let f = FieldKind::Prime(3);
        let m = m_lambda(f, 1).direct_sum(&q, &m_lambda(f, 2)).unwrap();
        for sub in submodules(&q, &m, DEFAULT_SUBMODULE_CAP).unwrap() {
            let n = sub.representation(&q, &m).unwrap();
            // the inclusion is a nonzero morphism whenever N != 0
            let hom = hom_space(&q, &n, &m).unwrap();
            assert_eq!(hom.dim == 0, n.is_zero());
        }
    }

    /// Random small acyclic quiver, module and θ over F_2 or F_3.
    fn arb_case() -> impl Strategy<Value = (Quiver, Representation, Vec<i64>)> {
        (2usize..=3, prop::sample::select(vec![2u32, 3]), any::<u64>()).prop_map(|(n, p, seed)| {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let mut arrows = Vec::new();
            for i in 0..n {
                for j in (i + 1)..n {
                    for _ in 0..rng.random_range(0..=2) {
                        arrows.push(Arrow::new(format!("a{}", arrows.len() + 1), i, j));
                    }
                }
            }
            let q = Quiver::from_arrows(n, arrows, None, true).unwrap();
            let mut dims = vec![0usize; n];
            for _ in 0..rng.random_range(1..=5) {
                dims[rng.random_range(0..n)] += 1;
            }
            let mats = q
                .arrows()
                .iter()
                .map(|a| {
                    let rows = (0..dims[a.tgt])
                        .map(|_| (0..dims[a.src]).map(|_| rat(rng.random_range(0..p as i64))).collect())
                        .collect();
                    Matrix::from_rows(rows, dims[a.src]).unwrap_or_else(|| Matrix::filled(0, dims[a.src], rat(0)))
                })
                .collect();
            let m = Representation::new(&q, FieldKind::Prime(p), dims.clone(), mats).unwrap();
            let mut theta: Vec<i64> = (0..n).map(|_| rng.random_range(-3..=3)).collect();
            // mostly aim for pairing zero so the quantifiers are exercised
            if rng.random_range(0..4) > 0 {
                if let Some(v) = (0..n).find(|&v| dims[v] == 1) {
                    let rest: i64 = (0..n).filter(|&w| w != v).map(|w| theta[w] * dims[w] as i64).sum();
                    theta[v] = -rest;
                }
            }
            (q, m, theta)
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn stable_iff_simple_in_w_theta((q, m, theta) in arb_case()) {
            let stable = is_stable(&q, &m, &theta).unwrap();
            prop_assert_eq!(stable, is_simple_in_w_theta(&q, &m, &theta).unwrap());
            if stable {
                prop_assert!(is_brick(&q, &m).unwrap());
            }
        }

        #[test]
        fn stability_is_invariant_under_scaling((q, m, theta) in arb_case(), c in 1i64..4) {
            let scaled: Vec<i64> = theta.iter().map(|t| t * c).collect();
            prop_assert_eq!(is_stable(&q, &m, &theta).unwrap(), is_stable(&q, &m, &scaled).unwrap());
        }
    }

    #[test]
    fn semistability_survives_base_change() {
        let q = kronecker();
        let f = FieldKind::Prime(5);
        let m = m_lambda(f, 1).direct_sum(&q, &m_lambda(f, 3)).unwrap();
        let g = Matrix::from_rows(vec![vec![rat(1), rat(2)], vec![rat(0), rat(1)]], 2).unwrap();
        let g_inv = Matrix::from_rows(vec![vec![rat(1), rat(3)], vec![rat(0), rat(1)]], 2).unwrap();
        let h = Matrix::from_rows(vec![vec![rat(2), rat(0)], vec![rat(1), rat(1)]], 2).unwrap();
        let h_inv = Matrix::from_rows(vec![vec![rat(3), rat(0)], vec![rat(2), rat(1)]], 2).unwrap();
        let conj = m.base_change(&q, &[g.clone(), h.clone()], &[g_inv, h_inv]).unwrap();
        assert_ne!(conj, m);
        assert_eq!(dvs(&q, &conj), dvs(&q, &m));
        assert_eq!(is_semistable(&q, &conj, &[1, -1]).unwrap(), is_semistable(&q, &m, &[1, -1]).unwrap());
    }
}
