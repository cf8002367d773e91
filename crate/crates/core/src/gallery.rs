//! Worked examples of (non-)generating nilpotent pairs.
//!
//! * [`example1_pair`]: the superdiagonal of ones against a subdiagonal of
//!   partial sums, whose bracket is a diagonal with prescribed entries.
//! * [`example2_pair`] and [`lambda_subalgebra`]: the cyclic shift pair
//!   `M = sum E_(i,i+1)`, `N = E_(n,1)`, which generates `sl_n` for odd `n`
//!   and for even `n` is trapped in the algebra preserving a skew form.
//! * [`f2_counterexample`] and [`lambda12_check`]: over `F_2`, `E_12` has
//!   no nilpotent partner in `sl_3`; checked by exhaustive enumeration.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::closure::{generated_subalgebra, linear_span, ClosureAudit};
use crate::construct::nilpotent_superdiagonal_form;
use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::matrix::{nullspace, vector_rank, Matrix};

const EXAMPLE1_SEARCH_ATTEMPTS: usize = 4096;

fn shift(n: usize, field: FieldSpec) -> Matrix {
    (1..n).fold(Matrix::zero(n, field), |acc, i| {
        &acc + &Matrix::unit(n, i - 1, i, field)
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct Example1Data {
    pub n: usize,
    pub field: FieldSpec,
    pub alphas: Vec<Scalar>,
    pub partial_sums: Vec<Scalar>,
    pub a: Matrix,
    pub b: Matrix,
    pub bracket: Matrix,
    pub bracket_is_diag_alphas: bool,
    pub closure_dim: usize,
    pub generates: bool,
    pub audit: ClosureAudit,
}

impl Example1Data {
    pub fn holds(&self) -> bool {
        self.bracket_is_diag_alphas && self.generates && self.audit.passed()
    }
}

/// Indices (1-4) of the violated conditions: zero sum, consecutive entries
/// distinct, consecutive differences pairwise distinct, proper partial
/// sums nonzero.
pub fn example1_violations(alphas: &[Scalar]) -> Vec<u8> {
    let n = alphas.len();
    let Some(field) = alphas.first().map(Scalar::field) else {
        return vec![1];
    };
    let mut bad = Vec::new();
    let sums: Vec<Scalar> = alphas
        .iter()
        .scan(field.zero(), |acc, x| {
            *acc = &*acc + x;
            Some(acc.clone())
        })
        .collect();
    if !sums[n - 1].is_zero() {
        bad.push(1);
    }
    let diffs: Vec<Scalar> = alphas.windows(2).map(|w| &w[1] - &w[0]).collect();
    if diffs.iter().any(Scalar::is_zero) {
        bad.push(2);
    }
    if (0..diffs.len()).any(|i| (i + 1..diffs.len()).any(|k| diffs[i] == diffs[k])) {
        bad.push(3);
    }
    if sums[..n - 1].iter().any(Scalar::is_zero) {
        bad.push(4);
    }
    bad
}

/// `(1, 2, 4, ..., 2^(n-2), 1 - 2^(n-1))` when admissible, otherwise a
/// seeded search.
pub fn default_example1_alphas(n: usize, field: FieldSpec, seed: u64) -> Result<Vec<Scalar>> {
    if n < 2 {
        return Err(Error::InvalidDimension(n));
    }
    let two = field.from_i64(2);
    let mut alphas: Vec<Scalar> = (0..n - 1).map(|i| two.pow(i as u32)).collect();
    alphas.push(&field.one() - &two.pow(n as u32 - 1));
    if example1_violations(&alphas).is_empty() {
        return Ok(alphas);
    }
    let p = field
        .modulus()
        .expect("powers of two are admissible over Q");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..EXAMPLE1_SEARCH_ATTEMPTS {
        let mut alphas: Vec<Scalar> = (0..n - 1)
            .map(|_| field.from_i64(rng.gen_range(0..p) as i64))
            .collect();
        let sum = alphas.iter().fold(field.zero(), |acc, x| &acc + x);
        alphas.push(-sum);
        if example1_violations(&alphas).is_empty() {
            return Ok(alphas);
        }
    }
    Err(Error::ConditionsViolated(vec![1, 2, 3, 4]))
}

/// Builds `A = sum E_(i,i+1)` and `B = sum s_k E_(k+1,k)` and checks that
/// `[A, B] = diag(alphas)` and that the pair generates `sl_n`. Over fields
/// of characteristic 2 and `n = 4` the conditions can never all hold.
pub fn example1_pair(alphas: &[Scalar]) -> Result<Example1Data> {
    let n = alphas.len();
    if n < 2 {
        return Err(Error::InvalidDimension(n));
    }
    let field = alphas[0].field();
    if let Some(x) = alphas.iter().find(|x| x.field() != field) {
        return Err(Error::FieldMismatch(
            field.to_string(),
            x.field().to_string(),
        ));
    }
    let bad = example1_violations(alphas);
    if !bad.is_empty() {
        return Err(Error::ConditionsViolated(bad));
    }
    let partial_sums: Vec<Scalar> = alphas
        .iter()
        .scan(field.zero(), |acc, x| {
            *acc = &*acc + x;
            Some(acc.clone())
        })
        .take(n - 1)
        .collect();
    let a = shift(n, field);
    let mut b = Matrix::zero(n, field);
    for (k, s) in partial_sums.iter().enumerate() {
        b.set(k + 1, k, s.clone());
    }
    let bracket = a.bracket(&b)?;
    let cl = generated_subalgebra(&[a.clone(), b.clone()])?;
    Ok(Example1Data {
        n,
        field,
        alphas: alphas.to_vec(),
        partial_sums,
        bracket_is_diag_alphas: bracket == Matrix::diag(field, alphas)?,
        bracket,
        a,
        b,
        closure_dim: cl.dim,
        generates: cl.is_sln(),
        audit: cl.audit(),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct Example2Data {
    pub n: usize,
    pub field: FieldSpec,
    pub m: Matrix,
    pub nn: Matrix,
    pub closure_dim: usize,
    pub generates: bool,
    pub audit: ClosureAudit,
}

impl Example2Data {
    /// Generation for odd `n`, failure for even `n`.
    pub fn matches_parity(&self) -> bool {
        self.generates == (self.n % 2 == 1) && self.audit.passed()
    }
}

pub fn example2_pair(n: usize, field: FieldSpec) -> Result<Example2Data> {
    if n < 2 {
        return Err(Error::InvalidDimension(n));
    }
    let m = shift(n, field);
    let nn = Matrix::unit(n, n - 1, 0, field);
    let cl = generated_subalgebra(&[m.clone(), nn.clone()])?;
    Ok(Example2Data {
        n,
        field,
        m,
        nn,
        closure_dim: cl.dim,
        generates: cl.is_sln(),
        audit: cl.audit(),
    })
}

/// Antidiagonal sign matrix with `(-1)^j` in column `j` (1-based): `-1` in
/// the bottom-left corner, `(-1)^n` in the top-right corner.
pub fn antidiagonal_form(n: usize, field: FieldSpec) -> Matrix {
    let mut c = Matrix::zero(n, field);
    for j in 0..n {
        let sign = if (j + 1) % 2 == 0 { 1 } else { -1 };
        c.set(n - 1 - j, j, field.from_i64(sign));
    }
    c
}

#[derive(Debug, Clone, Serialize)]
pub struct ObstructionReport {
    pub n: usize,
    pub field: FieldSpec,
    pub form: Matrix,
    pub lambda_basis: Vec<Matrix>,
    pub lambda_dim: usize,
    pub bracket_closed: bool,
    pub proper: bool,
    pub contains_m: bool,
    pub contains_n: bool,
    pub closure_dim: usize,
    pub closure_in_lambda: bool,
}

impl ObstructionReport {
    pub fn holds(&self) -> bool {
        let trapped = self.contains_m && self.contains_n && self.closure_in_lambda;
        self.bracket_closed && self.proper && (self.n % 2 == 1 || trapped)
    }
}

/// Solves `A C^-1 + C^-1 A^T = 0, tr A = 0` for the antidiagonal form `C`.
pub fn lambda_subalgebra(n: usize, field: FieldSpec) -> Result<ObstructionReport> {
    if n < 3 {
        return Err(Error::InvalidDimension(n));
    }
    let form = antidiagonal_form(n, field);
    let j = form.invert()?;
    let units: Vec<Matrix> = (0..n * n)
        .map(|k| Matrix::unit(n, k / n, k % n, field))
        .collect();
    let images: Vec<Matrix> = units
        .iter()
        .map(|u| &(u * &j) + &(&j * &u.transpose()))
        .collect();
    let mut system: Vec<Vec<Scalar>> = (0..n * n)
        .map(|eq| images.iter().map(|img| img.coords()[eq].clone()).collect())
        .collect();
    system.push(units.iter().map(Matrix::trace).collect());
    let lambda_basis: Vec<Matrix> = nullspace(system, n * n, field)
        .into_iter()
        .map(|v| Matrix::from_coords(n, field, v))
        .collect();
    let lambda = linear_span(n, field, &lambda_basis)?;
    let m = shift(n, field);
    let nn = Matrix::unit(n, n - 1, 0, field);
    let cl = generated_subalgebra(&[m.clone(), nn.clone()])?;
    Ok(ObstructionReport {
        n,
        field,
        lambda_dim: lambda.dim,
        bracket_closed: lambda.audit().passed(),
        proper: lambda.dim < n * n - 1,
        contains_m: lambda.contains(&m),
        contains_n: lambda.contains(&nn),
        closure_dim: cl.dim,
        closure_in_lambda: cl.is_contained_in(&lambda),
        form,
        lambda_basis,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct RankTwoReduction {
    /// Rank-one nilpotents with a one in the bottom-left corner.
    pub corner_candidates: usize,
    /// Candidates fixed by transposition along the antidiagonal.
    pub persymmetric: usize,
    /// Candidates swapped in pairs by that transposition.
    pub antidiagonal_pairs: usize,
    /// Rank-one nilpotents generating `sl_3` together with `E_12 + E_23`.
    pub generating: usize,
    /// Every rank-two nilpotent is a single Jordan block.
    pub rank_two_single_block: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct F2Report {
    pub total_candidates: usize,
    pub nilpotent_count: usize,
    pub nilpotent_by_rank: [usize; 4],
    /// Closure dimension with `E_12` mapped to the number of nilpotents reaching it.
    pub closure_dims: BTreeMap<usize, usize>,
    pub max_closure_dim: usize,
    pub generating_partners: usize,
    pub audits_passed: bool,
    /// Rank-one nilpotents whose kernel meets the kernel of `E_12`.
    pub rank_one_kernel_meets: usize,
    pub rank_two: RankTwoReduction,
}

impl F2Report {
    pub fn holds(&self) -> bool {
        self.total_candidates == 512
            && self.generating_partners == 0
            && self.max_closure_dim < 8
            && self.audits_passed
            && self.rank_one_kernel_meets == self.nilpotent_by_rank[1]
            && self.rank_two.generating == 0
    }

    pub fn verdict(&self) -> &'static str {
        if self.holds() {
            "no nilpotent partner for E_12 in sl_3(F_2)"
        } else {
            "F_2 census failed"
        }
    }
}

fn f2() -> FieldSpec {
    FieldSpec::prime(2).expect("2 is prime")
}

/// All 3x3 matrices over `F_2`, indexed by their 9-bit row-major encoding.
pub fn all_f2_matrices() -> Vec<Matrix> {
    let f = f2();
    (0u32..512)
        .map(|bits| {
            let coords = (0..9)
                .map(|k| f.from_i64(((bits >> k) & 1) as i64))
                .collect();
            Matrix::from_coords(3, f, coords)
        })
        .collect()
}

fn antidiagonal_transpose(m: &Matrix) -> Matrix {
    let n = m.n();
    let mut out = Matrix::zero(n, m.field());
    for i in 0..n {
        for j in 0..n {
            out.set(i, j, m.get(n - 1 - j, n - 1 - i).clone());
        }
    }
    out
}

/// Exhaustive check that no nilpotent `y` generates `sl_3(F_2)` with `E_12`.
pub fn f2_counterexample() -> Result<F2Report> {
    let f = f2();
    let e12 = Matrix::unit(3, 0, 1, f);
    let b = &e12 + &Matrix::unit(3, 1, 2, f);
    let all = all_f2_matrices();
    let nilpotents: Vec<&Matrix> = all.iter().filter(|m| m.is_nilpotent()).collect();

    let mut by_rank = [0; 4];
    let mut closure_dims = BTreeMap::new();
    let mut audits_passed = true;
    let mut kernel_meets = 0;
    let ker_e12 = e12.kernel_basis();
    for y in &nilpotents {
        let rank = y.rank();
        by_rank[rank] += 1;
        let cl = generated_subalgebra(&[e12.clone(), (*y).clone()])?;
        audits_passed &= cl.audit().passed();
        *closure_dims.entry(cl.dim).or_insert(0) += 1;
        if rank == 1 {
            let ker_y = y.kernel_basis();
            let union: Vec<Vec<Scalar>> = ker_y.iter().chain(&ker_e12).cloned().collect();
            if vector_rank(&union) < ker_y.len() + ker_e12.len() {
                kernel_meets += 1;
            }
        }
    }

    let rank_one: Vec<Matrix> = nilpotents
        .iter()
        .filter(|m| m.rank() == 1)
        .map(|m| (*m).clone())
        .collect();
    let corner: Vec<&Matrix> = rank_one.iter().filter(|m| m.get(2, 0).is_one()).collect();
    let persymmetric = corner
        .iter()
        .filter(|m| antidiagonal_transpose(m) == ***m)
        .count();
    let mut generating = 0;
    for a in &rank_one {
        let cl = generated_subalgebra(&[a.clone(), b.clone()])?;
        audits_passed &= cl.audit().passed();
        generating += cl.is_sln() as usize;
    }
    let rank_two_single_block = nilpotents.iter().filter(|m| m.rank() == 2).all(|m| {
        nilpotent_superdiagonal_form(m)
            .map(|f| f.blocks == [3])
            .unwrap_or(false)
    });

    Ok(F2Report {
        total_candidates: all.len(),
        nilpotent_count: nilpotents.len(),
        nilpotent_by_rank: by_rank,
        max_closure_dim: closure_dims.keys().copied().max().unwrap_or(0),
        generating_partners: closure_dims.get(&8).copied().unwrap_or(0),
        closure_dims,
        audits_passed,
        rank_one_kernel_meets: kernel_meets,
        rank_two: RankTwoReduction {
            corner_candidates: corner.len(),
            persymmetric,
            antidiagonal_pairs: (corner.len() - persymmetric) / 2,
            generating,
            rank_two_single_block,
        },
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct Lambda12Report {
    pub lambda1_dim: usize,
    pub lambda2_dim: usize,
    pub lambda1_closed: bool,
    pub lambda2_closed: bool,
    pub a1_in_lambda1: bool,
    pub b_in_lambda1: bool,
    pub a2_in_lambda2: bool,
    pub a3_in_lambda2: bool,
    pub b_in_lambda2: bool,
}

impl Lambda12Report {
    pub fn holds(&self) -> bool {
        self.lambda1_closed
            && self.lambda2_closed
            && self.a1_in_lambda1
            && self.b_in_lambda1
            && self.a2_in_lambda2
            && self.a3_in_lambda2
            && self.b_in_lambda2
    }
}

fn f2_mat(rows: [[i64; 3]; 3]) -> Matrix {
    Matrix::from_i64(f2(), &[&rows[0], &rows[1], &rows[2]])
}

pub fn lambda1_spanning_set() -> Vec<Matrix> {
    vec![
        f2_mat([[1, 1, 0], [1, 1, 0], [1, 1, 0]]),
        f2_mat([[0, 1, 0], [0, 0, 1], [0, 0, 0]]),
        f2_mat([[1, 1, 1], [0, 0, 1], [0, 0, 1]]),
        f2_mat([[1, 0, 1], [1, 0, 1], [0, 1, 1]]),
    ]
}

pub fn lambda2_spanning_set() -> Vec<Matrix> {
    vec![
        f2_mat([[1, 0, 1], [1, 0, 1], [1, 0, 1]]),
        f2_mat([[0, 1, 0], [0, 0, 1], [0, 0, 0]]),
        f2_mat([[1, 1, 1], [1, 1, 1], [0, 1, 0]]),
        f2_mat([[1, 0, 0], [0, 0, 1], [0, 0, 1]]),
        f2_mat([[0, 1, 1], [0, 0, 1], [0, 0, 0]]),
    ]
}

/// The three representatives `A_1, A_2, A_3` of rank-one candidates.
pub fn f2_representatives() -> [Matrix; 3] {
    [
        f2_mat([[1, 1, 0], [1, 1, 0], [1, 1, 0]]),
        f2_mat([[1, 0, 1], [1, 0, 1], [1, 0, 1]]),
        f2_mat([[0, 0, 0], [1, 0, 0], [1, 0, 0]]),
    ]
}

pub fn lambda12_check() -> Result<Lambda12Report> {
    let f = f2();
    let b = f2_mat([[0, 1, 0], [0, 0, 1], [0, 0, 0]]);
    let l1 = linear_span(3, f, &lambda1_spanning_set())?;
    let l2 = linear_span(3, f, &lambda2_spanning_set())?;
    let [a1, a2, a3] = f2_representatives();
    Ok(Lambda12Report {
        lambda1_dim: l1.dim,
        lambda2_dim: l2.dim,
        lambda1_closed: l1.audit().passed(),
        lambda2_closed: l2.audit().passed(),
        a1_in_lambda1: l1.contains(&a1),
        b_in_lambda1: l1.contains(&b),
        a2_in_lambda2: l2.contains(&a2),
        a3_in_lambda2: l2.contains(&a3),
        b_in_lambda2: l2.contains(&b),
    })
}
