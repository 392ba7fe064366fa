//! Homogeneous linear systems over `ℚ[params]` with case splitting on the
//! vanishing of pivot candidates.

use std::sync::Arc;

use num_traits::Zero;

use crate::algebra::coeff::q_gcd;
use crate::algebra::{Coeff, QPoly, Q};
use crate::error::{Error, Result};
use crate::groebner::{normalize_condition, CgsLimits, Ideal, MonoOrder};
use crate::tangency::LinearSystem;

/// A parameter region `V(E) \ ⋃ V(n)` for `n ∈ N`: every element of `N`
/// is nonzero there.
#[derive(Clone, Debug)]
pub struct Region {
    ideal: Arc<Ideal>,
    nonnull: Vec<QPoly>,
}

/// What a polynomial does on a region.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Class {
    /// Vanishes at every point.
    Zero,
    /// Vanishes nowhere.
    Unit,
    Undecided,
}

impl Default for Region {
    fn default() -> Self {
        Self::whole()
    }
}

impl Region {
    pub fn whole() -> Self {
        Self { ideal: Arc::new(Ideal::zero()), nonnull: Vec::new() }
    }

    pub fn new(null: &[QPoly], nonnull: &[QPoly]) -> Self {
        let null: Vec<QPoly> = null.iter().map(normalize_condition).collect();
        let nonnull = nonnull.iter().map(normalize_condition).collect();
        Self { ideal: Arc::new(Ideal::new(&null)), nonnull }
    }

    pub fn null(&self) -> &[QPoly] {
        self.ideal.gens()
    }

    pub fn nonnull(&self) -> &[QPoly] {
        &self.nonnull
    }

    pub fn ideal(&self) -> &Ideal {
        &self.ideal
    }

    pub fn is_unconstrained(&self) -> bool {
        self.null().is_empty() && self.nonnull.is_empty()
    }

    fn product_nonnull(&self) -> QPoly {
        self.nonnull.iter().fold(QPoly::one(), |acc, n| &acc * n)
    }

    pub fn is_empty(&self) -> bool {
        self.ideal.is_unit() || self.ideal.radical_contains(&self.product_nonnull())
    }

    pub fn reduce(&self, f: &QPoly) -> QPoly {
        self.ideal.reduce(f)
    }

    pub fn classify(&self, f: &QPoly) -> Class {
        let r = self.reduce(f);
        if r.is_zero() {
            return Class::Zero;
        }
        if r.is_constant() {
            return Class::Unit;
        }
        if self.nonnull.iter().any(|n| n == &normalize_condition(&r)) {
            return Class::Unit;
        }
        let prod = self.product_nonnull();
        if self.ideal.radical_contains(&(&r * &prod)) {
            return Class::Zero;
        }
        if self.ideal.extended(&[r]).radical_contains(&prod) {
            return Class::Unit;
        }
        Class::Undecided
    }

    /// The same region described with `f` added to the null conditions;
    /// only valid when `f` is [`Class::Zero`] here.
    pub fn with_zero(&self, f: &QPoly) -> Self {
        let f = normalize_condition(&self.reduce(f));
        Self { ideal: Arc::new(self.ideal.extended(&[f])), nonnull: self.nonnull.clone() }
    }

    /// The subregion where `f` vanishes.
    pub fn split_zero(&self, f: &QPoly) -> Self {
        let mut r = self.with_zero(f);
        let mut nonnull: Vec<QPoly> = Vec::new();
        for n in &r.nonnull {
            let n = normalize_condition(&r.reduce(n));
            if (n.is_zero() || !n.is_constant()) && !nonnull.contains(&n) {
                nonnull.push(n);
            }
        }
        r.nonnull = nonnull;
        r
    }

    /// The subregion where `f` does not vanish.
    pub fn split_nonzero(&self, f: &QPoly) -> Self {
        let mut nonnull = self.nonnull.clone();
        let f = normalize_condition(&self.reduce(f));
        if !nonnull.contains(&f) {
            nonnull.push(f);
        }
        Self { ideal: self.ideal.clone(), nonnull }
    }

    /// Evaluates membership of a rational parameter point.
    pub fn contains_point(&self, point: &[Q]) -> bool {
        self.null().iter().all(|e| e.eval(point).is_zero()) && self.nonnull.iter().all(|n| !n.eval(point).is_zero())
    }
}

impl PartialEq for Region {
    fn eq(&self, other: &Self) -> bool {
        self.null() == other.null() && self.nonnull == other.nonnull
    }
}

/// One solution-space generator: `values[free] = scale`, and every other
/// free unknown is zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisVector {
    pub values: Vec<QPoly>,
    pub free: usize,
    pub scale: QPoly,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Branch {
    pub region: Region,
    pub basis: Vec<BasisVector>,
    pub rank: usize,
    /// Pivot columns, in elimination order.
    pub pivots: Vec<usize>,
    /// Splits leading here: `(condition, vanishes)`.
    pub path: Vec<(QPoly, bool)>,
}

impl Branch {
    pub fn nullity(&self) -> usize {
        self.basis.len()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CaseTree {
    pub branches: Vec<Branch>,
}

enum Step {
    Done { rows: Vec<(usize, Vec<QPoly>)> },
    Refine(Region),
    Split(QPoly),
}

/// Fraction-free Gauss–Jordan elimination on a region. Pivot columns are
/// taken from the last column down, so the earliest unknowns stay free.
fn eliminate(rows: &[Vec<QPoly>], ncols: usize, region: &Region) -> Step {
    let mut rest: Vec<Vec<QPoly>> = rows
        .iter()
        .map(|r| r.iter().map(|c| region.reduce(c)).collect::<Vec<_>>())
        .filter(|r| r.iter().any(|c| !c.is_zero()))
        .map(primitive_row)
        .collect();
    let mut done: Vec<(usize, Vec<QPoly>)> = Vec::new();
    for col in (0..ncols).rev() {
        let mut choice = rest.iter().position(|r| !r[col].is_zero() && r[col].is_constant());
        if choice.is_none() {
            let mut undecided = None;
            for (i, r) in rest.iter().enumerate() {
                if r[col].is_zero() {
                    continue;
                }
                match region.classify(&r[col]) {
                    Class::Unit => {
                        choice = Some(i);
                        break;
                    }
                    Class::Zero => return Step::Refine(region.with_zero(&r[col])),
                    Class::Undecided => {
                        undecided.get_or_insert(i);
                    }
                }
            }
            if choice.is_none() {
                if let Some(i) = undecided {
                    return Step::Split(rest[i][col].clone());
                }
            }
        }
        let Some(i) = choice else { continue };
        let p = rest.remove(i);
        let update = |r: &mut Vec<QPoly>| {
            if r[col].is_zero() {
                return;
            }
            let e = r[col].clone();
            let pc = &p[col];
            let new: Vec<QPoly> = r.iter().zip(&p).map(|(x, y)| region.reduce(&(&(pc * x) - &(&e * y)))).collect();
            *r = primitive_row(new);
        };
        for r in rest.iter_mut() {
            update(r);
        }
        for (_, r) in done.iter_mut() {
            update(r);
        }
        rest.retain(|r| r.iter().any(|c| !c.is_zero()));
        done.push((col, p));
    }
    Step::Done { rows: done }
}

fn primitive_row(r: Vec<QPoly>) -> Vec<QPoly> {
    let g = q_gcd(r.iter().flat_map(|p| p.terms().map(|(_, c)| c)));
    if g.is_zero() || g == Q::c_one() {
        return r;
    }
    let inv = Q::c_one() / g;
    r.iter().map(|p| p.scale(&inv)).collect()
}

fn grevlex_lead(p: &QPoly) -> Option<crate::algebra::Mono> {
    MonoOrder::Grevlex.leading(p)
}

/// Content 1 and the first nonzero entry with a positive leading
/// coefficient.
fn normalize_vector(mut v: Vec<QPoly>) -> Vec<QPoly> {
    let g = q_gcd(v.iter().flat_map(|p| p.terms().map(|(_, c)| c)));
    if g.is_zero() {
        return v;
    }
    let first = v.iter().find(|p| !p.is_zero()).unwrap();
    let lead = grevlex_lead(first).unwrap();
    let sign_neg = first.coeff(&lead).unwrap() < &Q::c_zero();
    let mut inv = Q::c_one() / g;
    if sign_neg {
        inv = -inv;
    }
    for p in v.iter_mut() {
        *p = p.scale(&inv);
    }
    v
}

fn basis_from_pivots(rows: &[(usize, Vec<QPoly>)], ncols: usize, region: &Region) -> Vec<BasisVector> {
    let pivot_cols: Vec<usize> = rows.iter().map(|(c, _)| *c).collect();
    let mut out = Vec::new();
    for f in (0..ncols).filter(|c| !pivot_cols.contains(c)) {
        let involved: Vec<&(usize, Vec<QPoly>)> = rows.iter().filter(|(_, r)| !r[f].is_zero()).collect();
        let mut v = vec![QPoly::zero(); ncols];
        let denom = involved.iter().fold(QPoly::one(), |acc, (c, r)| &acc * &r[*c]);
        v[f] = denom;
        for (i, (c, r)) in involved.iter().enumerate() {
            let others = involved
                .iter()
                .enumerate()
                .filter(|(k, _)| *k != i)
                .fold(QPoly::one(), |acc, (_, (c2, r2))| &acc * &r2[*c2]);
            v[*c] = -&(&r[f] * &others);
        }
        let mut v: Vec<QPoly> = v.iter().map(|p| region.reduce(p)).collect();
        // strip polynomial factors shared with the pivots
        for (c, r) in &involved {
            let piv = &r[*c];
            if piv.is_constant() {
                continue;
            }
            loop {
                let divided: Option<Vec<QPoly>> = v.iter().map(|p| p.exact_div(piv, grevlex_lead)).collect();
                match divided {
                    Some(d) if !d[f].is_zero() => v = d,
                    _ => break,
                }
            }
        }
        let v = normalize_vector(v);
        let scale = v[f].clone();
        out.push(BasisVector { values: v, free: f, scale });
    }
    out
}

/// Solves the system on the whole parameter space.
pub fn solve_parametric_linear(sys: &LinearSystem, limits: CgsLimits) -> Result<CaseTree> {
    solve_on(sys, &Region::whole(), limits)
}

/// Solves the system on a given region, splitting it as needed.
pub fn solve_on(sys: &LinearSystem, region: &Region, limits: CgsLimits) -> Result<CaseTree> {
    solve_dense(&sys.dense_rows(), sys.num_unknowns, region, limits)
}

pub fn solve_dense(rows: &[Vec<QPoly>], ncols: usize, region: &Region, limits: CgsLimits) -> Result<CaseTree> {
    let mut branches = Vec::new();
    let mut stack: Vec<(Region, Vec<(QPoly, bool)>)> = vec![(region.clone(), Vec::new())];
    while let Some((region, path)) = stack.pop() {
        if path.len() > limits.max_depth {
            return Err(Error::BranchLimit { what: "linear-solve depth", limit: limits.max_depth });
        }
        let all_constant = rows.iter().all(|r| r.iter().all(|c| c.is_constant()));
        if all_constant {
            let basis = nullspace_dense(rows, ncols);
            let rank = ncols - basis.len();
            let pivots = pivot_columns(&basis, ncols);
            branches.push(Branch { region, basis, rank, pivots, path });
        } else {
            let mut region = region;
            loop {
                match eliminate(rows, ncols, &region) {
                    Step::Done { rows: done } => {
                        let basis = basis_from_pivots(&done, ncols, &region);
                        let pivots = done.iter().map(|(c, _)| *c).collect();
                        branches.push(Branch { region, basis, rank: done.len(), pivots, path });
                        break;
                    }
                    Step::Refine(r) => region = r,
                    Step::Split(f) => {
                        let f = normalize_condition(&region.reduce(&f));
                        let mut pz = path.clone();
                        pz.push((f.clone(), true));
                        let mut pn = path;
                        pn.push((f.clone(), false));
                        // pushed in reverse so the vanishing child comes first
                        stack.push((region.split_nonzero(&f), pn));
                        stack.push((region.split_zero(&f), pz));
                        break;
                    }
                }
            }
        }
        if branches.len() + stack.len() > limits.max_branches {
            return Err(Error::BranchLimit { what: "linear-solve branches", limit: limits.max_branches });
        }
    }
    Ok(CaseTree { branches })
}

fn pivot_columns(basis: &[BasisVector], ncols: usize) -> Vec<usize> {
    let free: Vec<usize> = basis.iter().map(|b| b.free).collect();
    (0..ncols).rev().filter(|c| !free.contains(c)).collect()
}

/// Exact nullspace of a parameter-free system.
pub fn nullspace_rational(sys: &LinearSystem) -> Result<Vec<BasisVector>> {
    if !sys.is_parameter_free() {
        return Err(Error::Usage("nullspace_rational needs a parameter-free system".into()));
    }
    Ok(nullspace_dense(&sys.dense_rows(), sys.num_unknowns))
}

fn nullspace_dense(rows: &[Vec<QPoly>], ncols: usize) -> Vec<BasisVector> {
    let mut m: Vec<Vec<Q>> = rows.iter().map(|r| r.iter().map(|c| c.constant_term()).collect()).collect();
    m.retain(|r| r.iter().any(|c| !c.is_zero()));
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut used = vec![false; m.len()];
    for col in (0..ncols).rev() {
        let Some(i) = (0..m.len()).find(|&i| !used[i] && !m[i][col].is_zero()) else { continue };
        used[i] = true;
        let inv = Q::c_one() / &m[i][col];
        for x in m[i].iter_mut() {
            *x = &*x * &inv;
        }
        let prow = m[i].clone();
        for (k, row) in m.iter_mut().enumerate() {
            if k == i || row[col].is_zero() {
                continue;
            }
            let e = row[col].clone();
            for (x, y) in row.iter_mut().zip(&prow) {
                if !y.is_zero() {
                    *x = &*x - &(&e * y);
                }
            }
        }
        pivots.push((col, i));
    }
    let pivot_cols: Vec<usize> = pivots.iter().map(|p| p.0).collect();
    (0..ncols)
        .filter(|c| !pivot_cols.contains(c))
        .map(|f| {
            let mut v = vec![Q::c_zero(); ncols];
            v[f] = Q::c_one();
            for &(c, i) in &pivots {
                v[c] = -m[i][f].clone();
            }
            let v = normalize_vector(v.into_iter().map(QPoly::constant).collect());
            let scale = v[f].clone();
            BasisVector { values: v, free: f, scale }
        })
        .collect()
}

/// Rank of a set of row vectors on a region, or the condition on which the
/// region must be split first. The region may come back with extra
/// (redundant) null conditions.
pub enum RankOutcome {
    Rank(usize, Region),
    Split(QPoly),
}

pub fn rank_on(rows: &[Vec<QPoly>], ncols: usize, region: &Region) -> RankOutcome {
    let mut region = region.clone();
    loop {
        match eliminate(rows, ncols, &region) {
            Step::Done { rows } => return RankOutcome::Rank(rows.len(), region),
            Step::Refine(r) => region = r,
            Step::Split(f) => return RankOutcome::Split(normalize_condition(&region.reduce(&f))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::q_int;

    fn c(n: i64) -> QPoly {
        QPoly::constant(q_int(n))
    }

    #[test]
    fn simple_nullspaces() {
        let sys = LinearSystem::from_dense(0, &[vec![c(1), c(-1)]], 2);
        let b = nullspace_rational(&sys).unwrap();
        assert_eq!(b.len(), 1);
        assert_eq!(b[0].values, vec![c(1), c(1)]);
        let empty = LinearSystem::from_dense(0, &[], 3);
        assert_eq!(nullspace_rational(&empty).unwrap().len(), 3);
    }

    #[test]
    fn one_parameter_split() {
        let a = QPoly::var(0);
        let sys = LinearSystem::from_dense(1, &[vec![a.clone()]], 1);
        let tree = solve_parametric_linear(&sys, CgsLimits::default()).unwrap();
        assert_eq!(tree.branches.len(), 2);
        assert_eq!(tree.branches[0].region.null(), std::slice::from_ref(&a));
        assert_eq!(tree.branches[0].nullity(), 1);
        assert_eq!(tree.branches[1].region.nonnull(), &[a]);
        assert_eq!(tree.branches[1].nullity(), 0);
    }

    #[test]
    fn unit_on_branch_is_used_as_pivot() {
        let a = QPoly::var(0);
        let region = Region::new(&[], std::slice::from_ref(&a));
        let sys = LinearSystem::from_dense(1, &[vec![a.pow(2), c(0)]], 2);
        let tree = solve_on(&sys, &region, CgsLimits::default()).unwrap();
        assert_eq!(tree.branches.len(), 1);
        assert_eq!(tree.branches[0].nullity(), 1);
        assert_eq!(tree.branches[0].basis[0].free, 1);
    }

    #[test]
    fn parametric_and_rational_agree_on_constants() {
        let sys = LinearSystem::from_dense(0, &[vec![c(2), c(4), c(0), c(-2)], vec![c(1), c(2), c(1), c(0)]], 4);
        let fast = nullspace_rational(&sys).unwrap();
        let mut region = Region::whole();
        let done = loop {
            match eliminate(&sys.dense_rows(), 4, &region) {
                Step::Done { rows } => break rows,
                Step::Refine(r) => region = r,
                Step::Split(_) => unreachable!(),
            }
        };
        assert_eq!(basis_from_pivots(&done, 4, &region), fast);
    }
}
