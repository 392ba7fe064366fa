#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::PathBuf;

use num_traits::{One, Zero};

use craut_core::algebra::{GaussRat, Mono, QPoly, Q};
use craut_core::liealg::{lie_bracket, VectorField};
use craut_core::model::CRModel;

pub fn models_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../models")
}

pub fn model_text(name: &str) -> String {
    std::fs::read_to_string(models_dir().join(format!("{name}.json"))).expect("model file")
}

pub fn model(name: &str) -> CRModel {
    CRModel::load(&model_text(name)).expect("valid model").0
}

pub const ALL_MODELS: [&str; 19] = [
    "cubic_1_3", "new_model", "m01", "m02", "m03", "m04", "m05", "m06", "m07", "m08", "m09", "m10", "m11", "m12",
    "m13", "m14", "m15", "m16", "m17",
];

pub fn q(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}

/// Minimal field interface for the reference eliminations below.
pub trait Field: Clone + PartialEq {
    fn f_zero() -> Self;
    fn f_is_zero(&self) -> bool;
    fn f_sub(&self, o: &Self) -> Self;
    fn f_mul(&self, o: &Self) -> Self;
    fn f_inv(&self) -> Self;
}

impl Field for Q {
    fn f_zero() -> Self {
        Zero::zero()
    }
    fn f_is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn f_sub(&self, o: &Self) -> Self {
        self - o
    }
    fn f_mul(&self, o: &Self) -> Self {
        self * o
    }
    fn f_inv(&self) -> Self {
        Q::one() / self
    }
}

impl Field for GaussRat {
    fn f_zero() -> Self {
        GaussRat::real(Zero::zero())
    }
    fn f_is_zero(&self) -> bool {
        Zero::is_zero(&self.re) && Zero::is_zero(&self.im)
    }
    fn f_sub(&self, o: &Self) -> Self {
        GaussRat::new(&self.re - &o.re, &self.im - &o.im)
    }
    fn f_mul(&self, o: &Self) -> Self {
        GaussRat::new(&self.re * &o.re - &self.im * &o.im, &self.re * &o.im + &self.im * &o.re)
    }
    fn f_inv(&self) -> Self {
        GaussRat::inv(self).expect("nonzero")
    }
}

/// Reduced row echelon form; returns the nonzero rows and pivot columns.
pub fn rref<F: Field>(mut rows: Vec<Vec<F>>) -> (Vec<Vec<F>>, Vec<usize>) {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].f_is_zero()) else { continue };
        rows.swap(r, p);
        let inv = rows[r][c].f_inv();
        rows[r] = rows[r].iter().map(|x| x.f_mul(&inv)).collect();
        for i in 0..rows.len() {
            if i != r && !rows[i][c].f_is_zero() {
                let f = rows[i][c].clone();
                let pivot_row = rows[r].clone();
                for (x, y) in rows[i].iter_mut().zip(&pivot_row) {
                    *x = x.f_sub(&f.f_mul(y));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    (rows, pivots)
}

pub fn rank<F: Field>(rows: Vec<Vec<F>>) -> usize {
    rref(rows).1.len()
}

/// Real coordinates of parameter-free fields over a shared index.
pub fn field_vectors(fields: &[&VectorField]) -> Vec<Vec<Q>> {
    let mut index: BTreeMap<(usize, Mono), usize> = BTreeMap::new();
    for f in fields {
        for (s, p) in f.coeffs().iter().enumerate() {
            for m in p.monomials() {
                let n = index.len();
                index.entry((s, m.clone())).or_insert(n);
            }
        }
    }
    fields
        .iter()
        .map(|f| {
            let mut v = vec![Q::zero(); 2 * index.len()];
            for (s, p) in f.coeffs().iter().enumerate() {
                for (m, c) in p.terms() {
                    let i = index[&(s, m.clone())];
                    v[2 * i] = constant(&c.re());
                    v[2 * i + 1] = constant(&c.im());
                }
            }
            v
        })
        .collect()
}

pub fn constant(p: &QPoly) -> Q {
    if p.is_zero() {
        return Q::zero();
    }
    p.as_constant().expect("parameter-free coefficient")
}

pub fn rank_of(fields: &[&VectorField]) -> usize {
    rank(field_vectors(fields))
}

pub fn in_span(basis: &[&VectorField], f: &VectorField) -> bool {
    let mut all = basis.to_vec();
    all.push(f);
    rank_of(&all) == rank_of(basis)
}

/// Unique real coordinates of `f` in an independent family.
pub fn coords_in(basis: &[&VectorField], f: &VectorField) -> Option<Vec<Q>> {
    let mut all = basis.to_vec();
    all.push(f);
    let vecs = field_vectors(&all);
    let ncols = all.len();
    // columns are the fields; rows are coordinates
    let rows: Vec<Vec<Q>> = (0..vecs[0].len()).map(|r| vecs.iter().map(|v| v[r].clone()).collect()).collect();
    let ns = nullspace_q(rows, ncols);
    if ns.len() != 1 || Zero::is_zero(&ns[0][ncols - 1]) {
        return None;
    }
    let last = ns[0][ncols - 1].clone();
    Some(ns[0][..ncols - 1].iter().map(|x| -x / &last).collect())
}

pub fn nullspace_q(rows: Vec<Vec<Q>>, ncols: usize) -> Vec<Vec<Q>> {
    let (red, pivots) = rref(rows);
    (0..ncols)
        .filter(|c| !pivots.contains(c))
        .map(|f| {
            let mut v = vec![Q::zero(); ncols];
            v[f] = Q::one();
            for (row, &p) in red.iter().zip(&pivots) {
                v[p] = -row[f].clone();
            }
            v
        })
        .collect()
}

/// Published bracket table: `(i, j, [(m, c)])` meaning `[Y_i, Y_j] = Σ c Y_m`,
/// 0-based, listed for `i < j`; absent pairs bracket to zero.
pub type Table = Vec<(usize, usize, Vec<(usize, Q)>)>;

/// Finds per-generator scalings `λ` from a small candidate set such that the
/// fields `Y_i = λ_i P_i` reproduce the table exactly.
pub fn match_table(fields: &[VectorField], table: &Table) -> Result<Vec<Q>, String> {
    let d = fields.len();
    let refs: Vec<&VectorField> = fields.iter().collect();
    if rank_of(&refs) != d {
        return Err("given fields are not independent".into());
    }
    let mut actual = vec![vec![vec![Q::zero(); d]; d]; d];
    for i in 0..d {
        for j in i + 1..d {
            let b = lie_bracket(&fields[i], &fields[j]);
            let c = if b.is_zero() {
                vec![Q::zero(); d]
            } else {
                coords_in(&refs, &b).ok_or_else(|| format!("[P{}, P{}] leaves the span", i + 1, j + 1))?
            };
            actual[i][j] = c;
        }
    }
    let mut expected = vec![vec![vec![Q::zero(); d]; d]; d];
    for (i, j, terms) in table {
        for (m, c) in terms {
            expected[*i][*j][*m] = c.clone();
        }
    }
    let cands: Vec<Q> = [(1, 1), (-1, 1), (2, 1), (-2, 1), (1, 2), (-1, 2), (4, 1), (-4, 1), (1, 4), (-1, 4)]
        .iter()
        .map(|&(n, dd)| q(n, dd))
        .collect();
    let mut lambda: Vec<Q> = Vec::new();
    fn ok(lambda: &[Q], actual: &[Vec<Vec<Q>>], expected: &[Vec<Vec<Q>>]) -> bool {
        let k = lambda.len();
        // constraints whose indices are all assigned and involve the newest one
        for i in 0..k {
            for j in i + 1..k {
                for m in 0..k {
                    if i != k - 1 && j != k - 1 && m != k - 1 {
                        continue;
                    }
                    let lhs = &lambda[i] * &lambda[j] * &actual[i][j][m];
                    let rhs = &lambda[m] * &expected[i][j][m];
                    if lhs != rhs {
                        return false;
                    }
                }
            }
        }
        true
    }
    fn search(
        lambda: &mut Vec<Q>,
        d: usize,
        cands: &[Q],
        actual: &[Vec<Vec<Q>>],
        expected: &[Vec<Vec<Q>>],
    ) -> bool {
        if lambda.len() == d {
            // components m beyond every i, j were checked when m was assigned
            return true;
        }
        for c in cands {
            lambda.push(c.clone());
            if ok(lambda, actual, expected) && search(lambda, d, cands, actual, expected) {
                return true;
            }
            lambda.pop();
        }
        false
    }
    if search(&mut lambda, d, &cands, &actual, &expected) {
        Ok(lambda)
    } else {
        Err("no per-generator scaling reproduces the table".into())
    }
}
