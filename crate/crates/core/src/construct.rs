//! Constructive pipeline from a nonzero nilpotent `X` to a certified
//! nilpotent partner `Y`.
//!
//! The stages, bottom-up:
//!
//! 1. [`consistent_set`]: diagonal entries whose pairwise differences are
//!    all distinct, so that `ad T` separates every off-diagonal matrix unit.
//! 2. [`split_diagonal`]: writes such a diagonal `C` as `A + B` with `A`
//!    a rank-one nilpotent having no zero entries and `B` nilpotent.
//! 3. [`rank_one_partner`]: transports `B` along a similarity taking `A` to
//!    the given rank-one nilpotent.
//! 4. [`scaled_partner`]: seeded search for a rescaled superdiagonal
//!    matrix that generates `sl_n` together with the partner of `E_12`.
//!    Every accepted sample is certified by an exact closure.
//! 5. [`nilpotent_partner`]: brings `X` to superdiagonal Jordan form and
//!    transports the pair from step 4 back to `X`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::closure::{generated_subalgebra, ClosureAudit};
use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::matrix::{vector_rank, Matrix, SimilarityWitness};

/// Upper end of the integer window used for scaling factors over `Q`.
pub const RATIONAL_SAMPLE_MAX: i64 = 65536;
pub const DEFAULT_BUDGET: usize = 64;
const CONSISTENT_SET_ATTEMPTS: usize = 4096;

/// Entries `a_1, ..., a_n` with zero sum, nonzero, pairwise distinct, and
/// whose nonzero differences `a_i - a_j` are pairwise distinct.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConsistentSet {
    pub field: FieldSpec,
    pub values: Vec<Scalar>,
}

impl ConsistentSet {
    pub fn new(field: FieldSpec, values: Vec<Scalar>) -> Result<Self> {
        if let Some(v) = values.iter().find(|v| v.field() != field) {
            return Err(Error::FieldMismatch(
                field.to_string(),
                v.field().to_string(),
            ));
        }
        Ok(ConsistentSet { field, values })
    }

    pub fn verify(&self) -> bool {
        verify_consistent(self)
    }

    pub fn to_matrix(&self) -> Matrix {
        Matrix::diag(self.field, &self.values).expect("values share the field")
    }
}

pub fn verify_consistent(s: &ConsistentSet) -> bool {
    let a = &s.values;
    let n = a.len();
    let sum = a.iter().fold(s.field.zero(), |acc, x| &acc + x);
    if !sum.is_zero() || a.iter().any(Scalar::is_zero) {
        return false;
    }
    for i in 0..n {
        for j in i + 1..n {
            if a[i] == a[j] {
                return false;
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            let d = &a[i] - &a[j];
            for k in 0..n {
                for l in 0..n {
                    let forced = (i == j && k == l) || (i == k && j == l);
                    if !forced && d == &a[k] - &a[l] {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Over `Q` returns `1, 2, 4, ..., 2^(n-2), 1 - 2^(n-1)`. Over `F_p`
/// samples uniformly with the given seed (default 0) until a candidate verifies.
pub fn consistent_set(n: usize, field: FieldSpec, seed: Option<u64>) -> Result<ConsistentSet> {
    if n < 2 {
        return Err(Error::InvalidDimension(n));
    }
    if field.characteristic() == 2 {
        return Err(Error::CharacteristicTwo);
    }
    let Some(p) = field.modulus() else {
        let two = field.from_i64(2);
        let mut values: Vec<Scalar> = (0..n - 1).map(|i| two.pow(i as u32)).collect();
        values.push(&field.one() - &two.pow(n as u32 - 1));
        let set = ConsistentSet { field, values };
        debug_assert!(set.verify());
        return Ok(set);
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed.unwrap_or(0));
    for _ in 0..CONSISTENT_SET_ATTEMPTS {
        let mut values: Vec<Scalar> = (0..n - 1)
            .map(|_| field.from_i64(rng.gen_range(1..p) as i64))
            .collect();
        let sum = values.iter().fold(field.zero(), |acc, x| &acc + x);
        values.push(-sum);
        let set = ConsistentSet { field, values };
        if set.verify() {
            return Ok(set);
        }
    }
    Err(Error::NoConsistentSet {
        n,
        attempts: CONSISTENT_SET_ATTEMPTS,
    })
}

/// `C = A + B` with `A` rank-one nilpotent without zero entries, `B` nilpotent.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiagonalSplit {
    pub a: Matrix,
    pub b: Matrix,
    /// Columns `v_1, ..., v_n` with `v_i = sum_j c_jj^(1-i) e_j`; `B` shifts
    /// `v_(i+1)` to `v_i` and kills `v_1`.
    pub v_basis: Matrix,
}

pub fn split_diagonal(c: &Matrix) -> Result<DiagonalSplit> {
    if !c.is_diagonal() {
        return Err(Error::NotDiagonal);
    }
    let n = c.n();
    let field = c.field();
    let d = c.diagonal();
    let distinct = (0..n).all(|i| (i + 1..n).all(|j| d[i] != d[j]));
    if !distinct || d.iter().any(Scalar::is_zero) {
        return Err(Error::RepeatedOrZeroDiagonal);
    }
    // tr A = tr C, and A has rank one, so A is nilpotent only for traceless C
    if !c.is_traceless() {
        return Err(Error::NotTraceless);
    }
    let inv: Vec<Scalar> = d.iter().map(|x| x.inv().expect("nonzero")).collect();
    let v_basis = Matrix::from_rows(
        field,
        inv.iter()
            .map(|x| (0..n).map(|i| x.pow(i as u32)).collect())
            .collect(),
    )?;
    let shift = (1..n).fold(Matrix::zero(n, field), |acc, i| {
        &acc + &Matrix::unit(n, i - 1, i, field)
    });
    let b = SimilarityWitness::new(v_basis.clone())?.conjugate(&shift)?;
    let a = c.try_sub(&b)?;
    Ok(DiagonalSplit { a, b, v_basis })
}

/// Columns `P` with `P^-1 p P = E_12`.
fn rank_one_frame(p: &Matrix) -> Result<Matrix> {
    if p.rank() != 1 || !p.is_nilpotent() {
        return Err(Error::NotRankOneNilpotent);
    }
    let n = p.n();
    let j = (0..n)
        .find(|&j| p.column(j).iter().any(|x| !x.is_zero()))
        .expect("rank one");
    let mut v = vec![p.field().zero(); n];
    v[j] = p.field().one();
    let mut cols = vec![p.column(j), v];
    for k in p.kernel_basis() {
        if cols.len() == n {
            break;
        }
        cols.push(k);
        if vector_rank(&cols) < cols.len() {
            cols.pop();
        }
    }
    debug_assert_eq!(cols.len(), n);
    Matrix::from_columns(p.field(), &cols)
}

/// Witness `w` with `q = w p w^-1` for rank-one nilpotents `p` and `q`.
pub fn similarity_rank1(p: &Matrix, q: &Matrix) -> Result<SimilarityWitness> {
    if p.n() != q.n() {
        return Err(Error::DimensionMismatch(p.n(), q.n()));
    }
    if p.field() != q.field() {
        return Err(Error::FieldMismatch(
            p.field().to_string(),
            q.field().to_string(),
        ));
    }
    let fp = SimilarityWitness::new(rank_one_frame(p)?)?;
    let fq = SimilarityWitness::new(rank_one_frame(q)?)?;
    // fp, fq carry E_12 to p, q respectively
    fq.compose(&fp.inverse())
}

/// Intermediate data of [`rank_one_partner`].
#[derive(Debug, Clone, Serialize)]
pub struct RankOnePartner {
    pub consistent: ConsistentSet,
    pub split: DiagonalSplit,
    /// Carries `split.a` to the input.
    pub witness: SimilarityWitness,
    pub partner: Matrix,
}

pub fn rank_one_partner_detail(n_mat: &Matrix) -> Result<RankOnePartner> {
    if n_mat.rank() != 1 || !n_mat.is_nilpotent() {
        return Err(Error::NotRankOneNilpotent);
    }
    let consistent = consistent_set(n_mat.n(), n_mat.field(), Some(0))?;
    let split = split_diagonal(&consistent.to_matrix())?;
    let witness = similarity_rank1(&split.a, n_mat)?;
    let partner = witness.conjugate(&split.b)?;
    Ok(RankOnePartner {
        consistent,
        split,
        witness,
        partner,
    })
}

/// Nilpotent `m` such that `n_mat` and `m` generate `sl_n`.
pub fn rank_one_partner(n_mat: &Matrix) -> Result<Matrix> {
    Ok(rank_one_partner_detail(n_mat)?.partner)
}

/// Jordan data of a nilpotent matrix: `witness` conjugates it to
/// `sum a_i E_(i,i+1)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuperdiagonalForm {
    pub a: Vec<Scalar>,
    /// Jordan block sizes in decreasing order.
    pub blocks: Vec<usize>,
    pub witness: SimilarityWitness,
}

pub fn superdiagonal(pattern: &[Scalar], field: FieldSpec) -> Matrix {
    let n = pattern.len() + 1;
    let mut m = Matrix::zero(n, field);
    for (i, a) in pattern.iter().enumerate() {
        m.set(i, i + 1, a.clone());
    }
    m
}

pub fn nilpotent_superdiagonal_form(x: &Matrix) -> Result<SuperdiagonalForm> {
    if x.is_zero() {
        return Err(Error::ZeroMatrix);
    }
    if !x.is_nilpotent() {
        return Err(Error::NotNilpotent);
    }
    let n = x.n();
    let field = x.field();
    let mut powers = vec![Matrix::identity(n, field)];
    while !powers.last().expect("nonempty").is_zero() {
        let next = &powers[powers.len() - 1] * x;
        powers.push(next);
    }
    let index = powers.len() - 1;
    let kernels: Vec<Vec<Vec<Scalar>>> = powers.iter().map(Matrix::kernel_basis).collect();

    // (top vector, chain length), discovered longest first
    let mut chains: Vec<(Vec<Scalar>, usize)> = Vec::new();
    for level in (1..=index).rev() {
        let mut span = kernels[level - 1].clone();
        for (w, len) in &chains {
            span.push(powers[len - level].mul_vec(w));
        }
        let mut rank = vector_rank(&span);
        for k in &kernels[level] {
            span.push(k.clone());
            let r = vector_rank(&span);
            if r > rank {
                rank = r;
                chains.push((k.clone(), level));
            } else {
                span.pop();
            }
        }
    }

    let mut cols = Vec::with_capacity(n);
    let mut a = Vec::with_capacity(n - 1);
    for (w, len) in &chains {
        if !cols.is_empty() {
            a.push(field.zero());
        }
        for step in (0..*len).rev() {
            cols.push(powers[step].mul_vec(w));
        }
        a.extend((1..*len).map(|_| field.one()));
    }
    debug_assert_eq!(cols.len(), n);
    let frame = SimilarityWitness::new(Matrix::from_columns(field, &cols)?)?;
    Ok(SuperdiagonalForm {
        a,
        blocks: chains.iter().map(|(_, len)| *len).collect(),
        witness: frame.inverse(),
    })
}

/// Diagonal `D` with `D (sum alpha_i a_i E_(i,i+1)) D^-1 = sum a_i E_(i,i+1)`.
pub fn diagonal_rescaling(alphas: &[Scalar], pattern: &[Scalar]) -> Result<SimilarityWitness> {
    if alphas.len() != pattern.len() {
        return Err(Error::DimensionMismatch(alphas.len(), pattern.len()));
    }
    let field = alphas
        .first()
        .or(pattern.first())
        .map_or(FieldSpec::RATIONALS, Scalar::field);
    if alphas.iter().any(Scalar::is_zero) {
        return Err(Error::ZeroScalingFactor);
    }
    let mut d = vec![field.one()];
    for (alpha, a) in alphas.iter().zip(pattern) {
        let last = d.last().expect("nonempty").clone();
        d.push(if a.is_zero() {
            last
        } else {
            alpha.try_mul(&last)?
        });
    }
    let inv: Vec<Scalar> = d.iter().map(|x| x.inv().expect("nonzero")).collect();
    Ok(SimilarityWitness {
        c: Matrix::diag(field, &d)?,
        c_inv: Matrix::diag(field, &inv)?,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ScaledPartner {
    pub x0: Matrix,
    pub b0: Matrix,
    pub alphas: Vec<Scalar>,
    pub attempts: usize,
    /// Every closure computed during the search passed its audit.
    pub audits_passed: bool,
}

/// Seeded search for nonzero `alpha` such that `sum alpha_i a_i E_(i,i+1)`
/// and the rank-one partner of `E_12` generate `sl_n`.
pub fn scaled_partner(
    pattern: &[Scalar],
    field: FieldSpec,
    seed: u64,
    budget: usize,
) -> Result<ScaledPartner> {
    if pattern.is_empty() {
        return Err(Error::InvalidDimension(1));
    }
    if let Some(s) = pattern.iter().find(|s| s.field() != field) {
        return Err(Error::FieldMismatch(
            field.to_string(),
            s.field().to_string(),
        ));
    }
    if !pattern[0].is_one() {
        return Err(Error::Parse("pattern must start with 1".into()));
    }
    if field.characteristic() == 2 {
        return Err(Error::CharacteristicTwo);
    }
    let n = pattern.len() + 1;
    let b0 = rank_one_partner(&Matrix::unit(n, 0, 1, field))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut candidates = Vec::new();
    let mut audits_passed = true;
    for attempt in 1..=budget {
        let alphas: Vec<Scalar> = (0..n - 1)
            .map(|_| match field.modulus() {
                None => field.from_i64(rng.gen_range(1..=RATIONAL_SAMPLE_MAX)),
                Some(p) => field.from_i64(rng.gen_range(1..p) as i64),
            })
            .collect();
        let scaled: Vec<Scalar> = alphas.iter().zip(pattern).map(|(x, a)| x * a).collect();
        let x0 = superdiagonal(&scaled, field);
        let cl = generated_subalgebra(&[x0.clone(), b0.clone()])?;
        audits_passed &= cl.audit().passed();
        if cl.is_sln() {
            return Ok(ScaledPartner {
                x0,
                b0,
                alphas,
                attempts: attempt,
                audits_passed,
            });
        }
        candidates.push(alphas.iter().map(ToString::to_string).collect());
    }
    Err(Error::BudgetExhausted {
        attempts: budget,
        candidates,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct Provenance {
    pub seed: u64,
    pub budget: usize,
    pub attempts: usize,
    /// Superdiagonal pattern `a_i` of the Jordan form of `x`.
    pub pattern: Vec<Scalar>,
    pub blocks: Vec<usize>,
    pub alphas: Vec<Scalar>,
    pub x0: Matrix,
    pub b0: Matrix,
    /// Conjugates `x` to the superdiagonal form.
    pub normal_form: SimilarityWitness,
    /// Conjugates `x0` to the superdiagonal form.
    pub rescaling: SimilarityWitness,
    /// Carries `(x0, b0)` to `(x, y)`.
    pub transport: SimilarityWitness,
    pub existence_not_guaranteed: bool,
    pub notes: Vec<String>,
}

/// A pair `(x, y)` of nilpotents together with the data used to build `y`.
#[derive(Debug, Clone, Serialize)]
pub struct GeneratorCertificate {
    pub field: FieldSpec,
    pub n: usize,
    pub x: Matrix,
    pub y: Matrix,
    pub x_nilpotent: bool,
    pub y_nilpotent: bool,
    pub closure_dim: usize,
    pub audit: ClosureAudit,
    pub verified: bool,
    pub provenance: Provenance,
}

impl GeneratorCertificate {
    /// Rechecks nilpotency and generation using only `x` and `y`.
    pub fn reverify(&self) -> Result<bool> {
        let n = self.x.n();
        let cl = generated_subalgebra(&[self.x.clone(), self.y.clone()])?;
        Ok(self.x.is_nilpotent()
            && self.y.is_nilpotent()
            && cl.dim == n * n - 1
            && cl.audit().passed())
    }
}

/// Builds a nilpotent `y` generating `sl_n` together with `x`.
///
/// Over a prime field the construction runs unchanged but the certificate
/// is flagged as outside the infinite-field setting the existence
/// argument needs; success then depends on the field being large.
pub fn nilpotent_partner(x: &Matrix, seed: u64, budget: usize) -> Result<GeneratorCertificate> {
    let field = x.field();
    if field.characteristic() == 2 {
        return Err(Error::CharacteristicTwo);
    }
    let form = nilpotent_superdiagonal_form(x)?;
    let sp = scaled_partner(&form.a, field, seed, budget)?;
    let rescaling = diagonal_rescaling(&sp.alphas, &form.a)?;
    let transport = form.witness.inverse().compose(&rescaling)?;
    let y = transport.conjugate(&sp.b0)?;

    let n = x.n();
    let cl = generated_subalgebra(&[x.clone(), y.clone()])?;
    let audit = cl.audit();
    let x_nilpotent = x.is_nilpotent();
    let y_nilpotent = y.is_nilpotent();
    let transported = transport.conjugate(&sp.x0)? == *x;
    let verified = x_nilpotent
        && y_nilpotent
        && cl.is_sln()
        && audit.passed()
        && transported
        && sp.audits_passed;

    let outside = !field.is_rationals();
    let mut notes = vec!["input required only to be a nonzero nilpotent".to_string()];
    if outside {
        notes.push(format!(
            "{field} is finite: generation is certified but existence is not guaranteed"
        ));
    }
    Ok(GeneratorCertificate {
        field,
        n,
        x: x.clone(),
        y,
        x_nilpotent,
        y_nilpotent,
        closure_dim: cl.dim,
        audit,
        verified,
        provenance: Provenance {
            seed,
            budget,
            attempts: sp.attempts,
            pattern: form.a.clone(),
            blocks: form.blocks.clone(),
            alphas: sp.alphas,
            x0: sp.x0,
            b0: sp.b0,
            normal_form: form.witness,
            rescaling,
            transport,
            existence_not_guaranteed: outside,
            notes,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closure::generates_sln;

    const Q: FieldSpec = FieldSpec::RATIONALS;

    fn q(s: &str) -> Scalar {
        Q.parse_scalar(s).unwrap()
    }

    fn qs(v: &[i64]) -> Vec<Scalar> {
        v.iter().map(|&x| Q.from_i64(x)).collect()
    }

    fn e(n: usize, i: usize, j: usize) -> Matrix {
        Matrix::unit(n, i - 1, j - 1, Q)
    }

    #[test]
    fn powers_of_two_set() {
        let s = consistent_set(4, Q, None).unwrap();
        assert_eq!(s.values, qs(&[1, 2, 4, -7]));
        assert!(s.verify());
        assert_eq!(consistent_set(2, Q, None).unwrap().values, qs(&[1, -1]));
    }

    #[test]
    fn consistent_set_errors() {
        assert_eq!(consistent_set(1, Q, None), Err(Error::InvalidDimension(1)));
        let f2 = FieldSpec::prime(2).unwrap();
        assert_eq!(consistent_set(3, f2, None), Err(Error::CharacteristicTwo));
        let f3 = FieldSpec::prime(3).unwrap();
        assert!(matches!(
            consistent_set(3, f3, Some(1)),
            Err(Error::NoConsistentSet { n: 3, .. })
        ));
    }

    /// Brute force over all of F_7^3: consistent triples exist, and the
    /// sampler lands on one for every seed tried.
    #[test]
    fn consistent_triples_mod_seven() {
        let f7 = FieldSpec::prime(7).unwrap();
        let mut count = 0;
        for a in 0..7 {
            for b in 0..7 {
                for c in 0..7 {
                    let s = ConsistentSet::new(
                        f7,
                        vec![f7.from_i64(a), f7.from_i64(b), f7.from_i64(c)],
                    )
                    .unwrap();
                    count += s.verify() as usize;
                }
            }
        }
        assert!(count > 0);
        for seed in 0..10 {
            assert!(consistent_set(3, f7, Some(seed)).unwrap().verify());
        }
    }

    #[test]
    fn verify_rejects_violations() {
        let check = |v: &[i64]| ConsistentSet::new(Q, qs(v)).unwrap().verify();
        assert!(check(&[1, 2, 4, -7]));
        assert!(!check(&[1, -1, 0]));
        assert!(!check(&[1, 2, 3, -6]));
        assert!(!check(&[1, 1, -2]));
        assert!(!check(&[1, 2, 4, -6]));
    }

    #[test]
    fn split_of_diag_one_minus_one() {
        let c = Matrix::from_i64(Q, &[&[1, 0], &[0, -1]]);
        let s = split_diagonal(&c).unwrap();
        let a = Matrix::from_rows(
            Q,
            vec![vec![q("1/2"), q("1/2")], vec![q("-1/2"), q("-1/2")]],
        )
        .unwrap();
        let b = Matrix::from_rows(
            Q,
            vec![vec![q("1/2"), q("-1/2")], vec![q("1/2"), q("-1/2")]],
        )
        .unwrap();
        assert_eq!(s.a, a);
        assert_eq!(s.b, b);
        assert!((&s.a * &s.a).is_zero());
        assert!((&s.b * &s.b).is_zero());
        assert_eq!(s.a.rank(), 1);
    }

    #[test]
    fn split_of_consistent_diag_has_full_support() {
        let c = consistent_set(3, Q, None).unwrap().to_matrix();
        let s = split_diagonal(&c).unwrap();
        assert_eq!(s.a.coords().iter().filter(|x| !x.is_zero()).count(), 9);
        assert!(s.a.trace().is_zero());
        assert_eq!(&s.a + &s.b, c);
        assert_eq!(s.v_basis.rank(), 3);
    }

    #[test]
    fn split_errors() {
        assert_eq!(split_diagonal(&e(2, 1, 2)), Err(Error::NotDiagonal));
        let c = Matrix::from_i64(Q, &[&[1, 0], &[0, 1]]);
        assert_eq!(split_diagonal(&c), Err(Error::RepeatedOrZeroDiagonal));
        let c = Matrix::from_i64(Q, &[&[0, 0], &[0, 1]]);
        assert_eq!(split_diagonal(&c), Err(Error::RepeatedOrZeroDiagonal));
        let c = Matrix::from_i64(Q, &[&[1, 0], &[0, 2]]);
        assert_eq!(split_diagonal(&c), Err(Error::NotTraceless));
    }

    #[test]
    fn rank_one_similarities() {
        let w = similarity_rank1(&e(2, 1, 2), &e(2, 1, 2)).unwrap();
        assert_eq!(w.conjugate(&e(2, 1, 2)).unwrap(), e(2, 1, 2));
        let w = similarity_rank1(&e(2, 1, 2), &e(2, 2, 1)).unwrap();
        assert_eq!(w.conjugate(&e(2, 1, 2)).unwrap(), e(2, 2, 1));
        let a = split_diagonal(&Matrix::from_i64(Q, &[&[1, 0], &[0, -1]]))
            .unwrap()
            .a;
        let w = similarity_rank1(&e(2, 1, 2), &a).unwrap();
        assert!(w.is_valid());
        assert_eq!(&(&w.c * &e(2, 1, 2)) * &w.c_inv, a);
        assert_eq!(
            similarity_rank1(&e(2, 1, 2), &Matrix::identity(2, Q)),
            Err(Error::NotRankOneNilpotent)
        );
    }

    #[test]
    fn rank_one_partners_generate() {
        for (n, x) in [(2, e(2, 1, 2)), (3, e(3, 1, 3)), (4, e(4, 3, 2))] {
            let m = rank_one_partner(&x).unwrap();
            assert!(m.is_nilpotent());
            assert!(m.trace().is_zero());
            let cl = generated_subalgebra(&[x, m]).unwrap();
            assert_eq!(cl.dim, n * n - 1);
        }
        assert_eq!(
            rank_one_partner(&(&e(3, 1, 2) + &e(3, 2, 3))),
            Err(Error::NotRankOneNilpotent)
        );
    }

    #[test]
    fn normal_forms() {
        let x = &e(3, 1, 2) + &e(3, 2, 3);
        let f = nilpotent_superdiagonal_form(&x).unwrap();
        assert_eq!(f.a, qs(&[1, 1]));
        assert_eq!(f.witness.c, Matrix::identity(3, Q));

        let f = nilpotent_superdiagonal_form(&e(2, 2, 1)).unwrap();
        assert_eq!(f.a, qs(&[1]));
        assert_eq!(f.witness.c, Matrix::from_i64(Q, &[&[0, 1], &[1, 0]]));

        let f = nilpotent_superdiagonal_form(&e(3, 1, 3)).unwrap();
        assert_eq!(f.a, qs(&[1, 0]));
        assert_eq!(f.blocks, vec![2, 1]);
        assert_eq!(
            f.witness.conjugate(&e(3, 1, 3)).unwrap(),
            superdiagonal(&f.a, Q)
        );

        assert_eq!(
            nilpotent_superdiagonal_form(&Matrix::zero(3, Q)),
            Err(Error::ZeroMatrix)
        );
        assert_eq!(
            nilpotent_superdiagonal_form(&e(2, 1, 1)),
            Err(Error::NotNilpotent)
        );
    }

    #[test]
    fn normal_form_of_mixed_blocks() {
        // blocks 3, 2, 1 hidden behind a permutation and a shear
        let mut j = Matrix::zero(6, Q);
        for (i, k) in [(0, 1), (1, 2), (3, 4)] {
            j.set(i, k, Q.one());
        }
        let mut c = Matrix::identity(6, Q);
        for (i, k, v) in [(0, 5, 3), (2, 0, -1), (4, 1, 2), (5, 3, 1)] {
            c.set(i, k, Q.from_i64(v));
        }
        let w = SimilarityWitness::new(c).unwrap();
        let x = w.conjugate(&j).unwrap();
        let f = nilpotent_superdiagonal_form(&x).unwrap();
        assert_eq!(f.blocks, vec![3, 2, 1]);
        assert_eq!(f.a, qs(&[1, 1, 0, 1, 0]));
        assert_eq!(f.witness.conjugate(&x).unwrap(), superdiagonal(&f.a, Q));
    }

    #[test]
    fn rescaling_witnesses() {
        let w = diagonal_rescaling(&qs(&[1, 1, 1]), &qs(&[1, 1, 0])).unwrap();
        assert_eq!(w.c, Matrix::identity(4, Q));
        let w = diagonal_rescaling(&qs(&[2]), &qs(&[1])).unwrap();
        assert_eq!(w.c, Matrix::diag(Q, &qs(&[1, 2])).unwrap());
        assert_eq!(w.conjugate(&e(2, 1, 2).scale(&q("2"))).unwrap(), e(2, 1, 2));
        let alphas = qs(&[3, -5, 7, 11]);
        let pattern = qs(&[1, 0, 1, 1]);
        let w = diagonal_rescaling(&alphas, &pattern).unwrap();
        let scaled: Vec<Scalar> = alphas.iter().zip(&pattern).map(|(x, a)| x * a).collect();
        assert_eq!(
            w.conjugate(&superdiagonal(&scaled, Q)).unwrap(),
            superdiagonal(&pattern, Q)
        );
        assert_eq!(
            diagonal_rescaling(&qs(&[1, 0]), &qs(&[1, 1])),
            Err(Error::ZeroScalingFactor)
        );
    }

    #[test]
    fn scaled_partners_certify() {
        for pattern in [qs(&[1]), qs(&[1, 1]), qs(&[1, 0, 1])] {
            let n = pattern.len() + 1;
            let sp = scaled_partner(&pattern, Q, 7, DEFAULT_BUDGET).unwrap();
            assert!(sp.alphas.iter().all(|a| !a.is_zero()));
            assert!(generates_sln(&[sp.x0.clone(), sp.b0.clone()]).unwrap());
            assert_eq!(sp.b0, rank_one_partner(&e(n, 1, 2)).unwrap());
            assert!(sp.audits_passed);
        }
        assert!(matches!(
            scaled_partner(&qs(&[1, 1]), Q, 0, 0),
            Err(Error::BudgetExhausted { attempts: 0, .. })
        ));
    }

    #[test]
    fn partner_for_full_shift() {
        let x = &(&e(4, 1, 2) + &e(4, 2, 3)) + &e(4, 3, 4);
        let cert = nilpotent_partner(&x, 0, DEFAULT_BUDGET).unwrap();
        assert!(cert.verified);
        assert_eq!(cert.closure_dim, 15);
        assert!(cert.y.is_nilpotent());
        assert!(cert.reverify().unwrap());
    }

    #[test]
    fn partner_for_rank_one() {
        let x = e(3, 1, 3);
        let cert = nilpotent_partner(&x, 3, DEFAULT_BUDGET).unwrap();
        assert!(cert.verified);
        assert_eq!(cert.closure_dim, 8);
        let direct = rank_one_partner(&x).unwrap();
        assert!(generates_sln(&[x, direct]).unwrap());
    }

    #[test]
    fn partner_is_deterministic() {
        let x = &e(3, 1, 2) + &e(3, 1, 3);
        let a = serde_json::to_string(&nilpotent_partner(&x, 11, 8).unwrap()).unwrap();
        let b = serde_json::to_string(&nilpotent_partner(&x, 11, 8).unwrap()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn partner_over_large_prime_is_flagged() {
        let f = FieldSpec::prime(1_000_003).unwrap();
        let x = &Matrix::unit(3, 0, 1, f) + &Matrix::unit(3, 1, 2, f);
        let cert = nilpotent_partner(&x, 0, DEFAULT_BUDGET).unwrap();
        assert!(cert.verified);
        assert!(cert.provenance.existence_not_guaranteed);
    }

    #[test]
    fn partner_preconditions() {
        assert_eq!(
            nilpotent_partner(&Matrix::zero(2, Q), 0, 4).unwrap_err(),
            Error::ZeroMatrix
        );
        assert_eq!(
            nilpotent_partner(&Matrix::from_i64(Q, &[&[1, 0], &[0, -1]]), 0, 4).unwrap_err(),
            Error::NotNilpotent
        );
        let f2 = FieldSpec::prime(2).unwrap();
        assert_eq!(
            nilpotent_partner(&Matrix::unit(3, 0, 1, f2), 0, 4).unwrap_err(),
            Error::CharacteristicTwo
        );
    }
}
