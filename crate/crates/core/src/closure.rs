//! Lie subalgebra generated by a set of traceless matrices.
//!
//! Elements are handled through their row-major coordinates in the `n^2`
//! matrix units. The span is kept as a reduced row-echelon coordinate
//! matrix so that membership is a single reduction pass.

use std::collections::VecDeque;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::matrix::Matrix;

#[derive(Debug, Clone, Serialize)]
pub struct ClosureBasis {
    pub n: usize,
    pub field: FieldSpec,
    pub generators: Vec<Matrix>,
    /// Linearly independent elements in discovery order, or the standard
    /// basis `E_ij`, `E_ii - E_nn` when `certified_mod` is set.
    pub basis: Vec<Matrix>,
    /// Reduced row-echelon form of `basis`, rows sorted by pivot.
    pub coords: Vec<Vec<Scalar>>,
    pub dim: usize,
    /// Prime modulo which generation was decided, when the rational
    /// closure was settled by reduction.
    pub certified_mod: Option<u64>,
    #[serde(skip)]
    pivots: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ClosureAudit {
    pub pairs_checked: usize,
    pub generators_in_span: bool,
    pub bracket_closed: bool,
}

impl ClosureAudit {
    pub fn passed(&self) -> bool {
        self.generators_in_span && self.bracket_closed
    }
}

impl ClosureBasis {
    fn empty(n: usize, field: FieldSpec, generators: Vec<Matrix>) -> Self {
        ClosureBasis {
            n,
            field,
            generators,
            basis: Vec::new(),
            coords: Vec::new(),
            dim: 0,
            certified_mod: None,
            pivots: Vec::new(),
        }
    }

    /// Dimension of `sl_n`.
    pub fn full_dim(&self) -> usize {
        self.n * self.n - 1
    }

    pub fn is_sln(&self) -> bool {
        self.dim == self.full_dim()
    }

    /// `v` minus its projection onto the span along the pivot columns.
    fn reduce(&self, v: &[Scalar]) -> Vec<Scalar> {
        let mut v = v.to_vec();
        for (row, &p) in self.coords.iter().zip(&self.pivots) {
            if v[p].is_zero() {
                continue;
            }
            let f = v[p].clone();
            for (x, r) in v.iter_mut().zip(row).skip(p) {
                if !r.is_zero() {
                    *x = &*x - &(&f * r);
                }
            }
        }
        v
    }

    pub fn contains(&self, m: &Matrix) -> bool {
        m.n() == self.n
            && m.field() == self.field
            && self.reduce(m.coords()).iter().all(Scalar::is_zero)
    }

    /// Adds `v` to the span if it is independent. Returns the normalized
    /// residual, which becomes the new basis element.
    fn insert(&mut self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        let mut r = self.reduce(v);
        let p = r.iter().position(|x| !x.is_zero())?;
        let inv = r[p].inv().expect("nonzero");
        for x in r.iter_mut().skip(p) {
            *x = &*x * &inv;
        }
        for row in &mut self.coords {
            if row[p].is_zero() {
                continue;
            }
            let f = row[p].clone();
            for (x, y) in row.iter_mut().zip(&r).skip(p) {
                if !y.is_zero() {
                    *x = &*x - &(&f * y);
                }
            }
        }
        let at = self.pivots.partition_point(|&q| q < p);
        self.pivots.insert(at, p);
        self.coords.insert(at, r.clone());
        self.dim += 1;
        Some(r)
    }

    /// Brackets every pair of echelon rows and checks that each result
    /// reduces to zero; also checks that every generator lies in the span.
    pub fn audit(&self) -> ClosureAudit {
        let elems: Vec<Matrix> = self
            .coords
            .iter()
            .map(|c| Matrix::from_coords(self.n, self.field, c.clone()))
            .collect();
        let mut pairs = 0;
        let mut closed = true;
        'outer: for (i, a) in elems.iter().enumerate() {
            for b in &elems[i + 1..] {
                pairs += 1;
                if !self.contains(&(&(a * b) - &(b * a))) {
                    closed = false;
                    break 'outer;
                }
            }
        }
        ClosureAudit {
            pairs_checked: pairs,
            generators_in_span: self.generators.iter().all(|g| self.contains(g)),
            bracket_closed: closed,
        }
    }

    /// True if every element of `self` lies in `other`.
    pub fn is_contained_in(&self, other: &ClosureBasis) -> bool {
        self.basis.iter().all(|b| other.contains(b))
    }
}

/// Spans the given matrices without bracketing: a plain linear span.
pub fn linear_span(n: usize, field: FieldSpec, elems: &[Matrix]) -> Result<ClosureBasis> {
    let mut span = ClosureBasis::empty(n, field, elems.to_vec());
    for e in elems {
        check_shape(n, field, e)?;
        if let Some(r) = span.insert(e.coords()) {
            span.basis.push(Matrix::from_coords(n, field, r));
        }
    }
    Ok(span)
}

fn check_shape(n: usize, field: FieldSpec, m: &Matrix) -> Result<()> {
    if m.field() != field {
        return Err(Error::FieldMismatch(
            field.to_string(),
            m.field().to_string(),
        ));
    }
    if m.n() != n {
        return Err(Error::DimensionMismatch(n, m.n()));
    }
    Ok(())
}

/// Primes tried for the modular certificate before falling back to exact
/// rational arithmetic.
const CERTIFICATE_PRIMES: [u64; 2] = [2_147_483_647, 2_147_483_629];

/// FIFO worklist over the field of `gens`.
fn worklist(gens: &[Matrix]) -> ClosureBasis {
    let (n, field) = (gens[0].n(), gens[0].field());
    let mut cl = ClosureBasis::empty(n, field, gens.to_vec());
    let full = cl.full_dim();
    let mut queue = VecDeque::new();
    for g in gens {
        if let Some(r) = cl.insert(g.coords()) {
            queue.push_back(cl.basis.len());
            cl.basis.push(Matrix::from_coords(n, field, r));
        }
    }
    while let Some(idx) = queue.pop_front() {
        if cl.dim == full {
            break;
        }
        for g in gens {
            let b = &cl.basis[idx];
            let br = &(g * b) - &(b * g);
            if let Some(r) = cl.insert(br.coords()) {
                queue.push_back(cl.basis.len());
                cl.basis.push(Matrix::from_coords(n, field, r));
            }
        }
    }
    cl
}

/// Reduced echelon rows of `sl_n`: `E_ij` for `i != j`, `E_ii - E_nn`.
fn sln_echelon(n: usize, field: FieldSpec) -> (Vec<Vec<Scalar>>, Vec<usize>) {
    let last = n * n - 1;
    let pivots: Vec<usize> = (0..last).collect();
    let rows = pivots
        .iter()
        .map(|&k| {
            let mut row = vec![field.zero(); n * n];
            row[k] = field.one();
            if k / n == k % n {
                row[last] = -field.one();
            }
            row
        })
        .collect();
    (rows, pivots)
}

/// Generation of `sl_n` over `Q`, decided modulo a large prime.
///
/// With `p`-integral generators, the `Z_(p)`-Lie algebra they generate is
/// a free module whose rank is the rational closure dimension, and its
/// reduction mod `p` is the closure of the reduced generators. Rank can
/// only drop under reduction, so reaching `n^2 - 1` mod `p` proves the
/// rational closure is `sl_n`. Returns `None` when no prime gets there.
fn certify_sln_modular(gens: &[Matrix]) -> Option<ClosureBasis> {
    let (n, field) = (gens[0].n(), gens[0].field());
    for p in CERTIFICATE_PRIMES {
        let fp = FieldSpec::prime(p).expect("certificate primes are prime");
        let Some(reduced) = gens
            .iter()
            .map(|g| g.reduce_mod(fp))
            .collect::<Option<Vec<_>>>()
        else {
            continue;
        };
        if !worklist(&reduced).is_sln() {
            continue;
        }
        let (coords, pivots) = sln_echelon(n, field);
        return Some(ClosureBasis {
            n,
            field,
            generators: gens.to_vec(),
            dim: coords.len(),
            basis: coords
                .iter()
                .map(|r| Matrix::from_coords(n, field, r.clone()))
                .collect(),
            coords,
            pivots,
            certified_mod: Some(p),
        });
    }
    None
}

/// Smallest subspace containing `gens` and closed under bracketing with
/// each generator, which by the Jacobi identity is the generated Lie
/// subalgebra.
///
/// Worklist order is FIFO with generators applied in the given order, so
/// the returned basis is reproducible. Stops early once the span reaches
/// `n^2 - 1`, since traceless brackets cannot leave `sl_n`. Over `Q` the
/// full-dimension case is first attempted modulo a large prime (see
/// [`ClosureBasis::certified_mod`]); the basis is then the standard one.
pub fn generated_subalgebra(gens: &[Matrix]) -> Result<ClosureBasis> {
    let first = gens.first().ok_or(Error::EmptyGenerators)?;
    let (n, field) = (first.n(), first.field());
    for g in gens {
        check_shape(n, field, g)?;
        if !g.is_traceless() {
            return Err(Error::NotTraceless);
        }
    }
    if field.is_rationals() && n >= 2 {
        if let Some(cl) = certify_sln_modular(gens) {
            return Ok(cl);
        }
    }
    Ok(worklist(gens))
}

/// Closure computed entirely in the field of `gens`, without the modular
/// shortcut. Slow over `Q` for large entries.
pub fn generated_subalgebra_exact(gens: &[Matrix]) -> Result<ClosureBasis> {
    let first = gens.first().ok_or(Error::EmptyGenerators)?;
    let (n, field) = (first.n(), first.field());
    for g in gens {
        check_shape(n, field, g)?;
        if !g.is_traceless() {
            return Err(Error::NotTraceless);
        }
    }
    Ok(worklist(gens))
}

/// Whether `gens` generate all of `sl_n`.
pub fn generates_sln(gens: &[Matrix]) -> Result<bool> {
    Ok(generated_subalgebra(gens)?.is_sln())
}
