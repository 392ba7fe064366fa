//! Buchberger's algorithm over ℚ, radical membership and comprehensive
//! Gröbner systems.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};
use std::sync::Mutex;

use num_traits::{One, Signed, Zero};

use crate::algebra::{Mono, QPoly, Q};
use crate::error::{Error, Result};

/// Admissible monomial orders. Variable 0 is the largest variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MonoOrder {
    Grevlex,
    Lex,
    /// Elimination order: the first `k` variables are compared first (by
    /// grevlex, or lex when `lex_head` is set), ties broken by grevlex on
    /// the remaining variables.
    Block { k: usize, lex_head: bool },
}

fn grevlex_cmp(a: &Mono, b: &Mono) -> Ordering {
    a.total_degree().cmp(&b.total_degree()).then_with(|| a.revlex_tiebreak(b))
}

fn split_at(m: &Mono, k: usize) -> (Mono, Mono) {
    let e = m.exps();
    let head = Mono::from_exps(e[..k.min(e.len())].to_vec());
    let mut tail = vec![0; k.min(e.len())];
    if e.len() > k {
        tail.extend_from_slice(&e[k..]);
    }
    (head, Mono::from_exps(tail))
}

impl MonoOrder {
    pub fn cmp(&self, a: &Mono, b: &Mono) -> Ordering {
        match *self {
            MonoOrder::Grevlex => grevlex_cmp(a, b),
            MonoOrder::Lex => a.cmp(b),
            MonoOrder::Block { k, lex_head } => {
                let (ha, ta) = split_at(a, k);
                let (hb, tb) = split_at(b, k);
                let head = if lex_head { ha.cmp(&hb) } else { grevlex_cmp(&ha, &hb) };
                head.then_with(|| grevlex_cmp(&ta, &tb))
            }
        }
    }

    pub fn leading(&self, p: &QPoly) -> Option<Mono> {
        p.monomials().max_by(|a, b| self.cmp(a, b)).cloned()
    }
}

/// Polynomial with terms sorted by a fixed order, largest first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OPoly {
    terms: Vec<(Mono, Q)>,
}

impl OPoly {
    pub fn from_poly(p: &QPoly, order: MonoOrder) -> Self {
        let mut terms: Vec<(Mono, Q)> = p.terms().map(|(m, c)| (m.clone(), c.clone())).collect();
        terms.sort_by(|x, y| order.cmp(&y.0, &x.0));
        Self { terms }
    }

    pub fn to_poly(&self) -> QPoly {
        QPoly::from_terms(self.terms.iter().cloned())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    pub fn lm(&self) -> &Mono {
        &self.terms[0].0
    }

    pub fn lc(&self) -> &Q {
        &self.terms[0].1
    }

    pub fn terms(&self) -> &[(Mono, Q)] {
        &self.terms
    }

    fn make_monic(&mut self) {
        if self.terms.is_empty() {
            return;
        }
        let inv = Q::one() / self.lc();
        for t in &mut self.terms {
            t.1 *= &inv;
        }
    }

    /// `self -= c · m · g`, merging in order.
    fn sub_mul(&mut self, c: &Q, m: &Mono, g: &OPoly, order: MonoOrder) {
        let mut out = Vec::with_capacity(self.terms.len() + g.terms.len());
        let mut a = std::mem::take(&mut self.terms).into_iter().peekable();
        let mut b = g.terms.iter().map(|(gm, gc)| (gm.mul(m), gc * c)).peekable();
        loop {
            let ord = match (a.peek(), b.peek()) {
                (None, None) => break,
                (Some(_), None) => Ordering::Greater,
                (None, Some(_)) => Ordering::Less,
                (Some(x), Some(y)) => order.cmp(&x.0, &y.0),
            };
            match ord {
                Ordering::Greater => out.push(a.next().unwrap()),
                Ordering::Less => {
                    let (m, c) = b.next().unwrap();
                    out.push((m, -c));
                }
                Ordering::Equal => {
                    let (m, c1) = a.next().unwrap();
                    let (_, c2) = b.next().unwrap();
                    let c = c1 - c2;
                    if !c.is_zero() {
                        out.push((m, c));
                    }
                }
            }
        }
        self.terms = out;
    }

    fn total_degree(&self) -> u32 {
        self.terms.iter().map(|(m, _)| m.total_degree()).max().unwrap_or(0)
    }
}

/// Full normal form of `f` modulo `basis`.
pub fn normal_form(f: &OPoly, basis: &[OPoly], order: MonoOrder) -> OPoly {
    let mut rest = f.clone();
    let mut out: Vec<(Mono, Q)> = Vec::new();
    while !rest.is_zero() {
        let (lm, lc) = (rest.lm().clone(), rest.lc().clone());
        let divisor = basis.iter().find(|g| g.lm().divides(&lm));
        match divisor {
            Some(g) => {
                let q = g.lm().quotient_of(&lm).unwrap();
                let c = &lc / g.lc();
                rest.sub_mul(&c, &q, g, order);
            }
            None => {
                out.push((lm, lc));
                rest.terms.remove(0);
            }
        }
    }
    OPoly { terms: out }
}

struct Pair {
    i: usize,
    j: usize,
    lcm: Mono,
    sugar: u32,
}

/// Reduced Gröbner basis (monic, sorted by leading monomial ascending).
pub fn buchberger_reduced(gens: &[QPoly], order: MonoOrder) -> Vec<OPoly> {
    let mut basis: Vec<OPoly> = Vec::new();
    let mut sugar: Vec<u32> = Vec::new();
    let mut live: Vec<bool> = Vec::new();
    let mut pairs: Vec<Pair> = Vec::new();
    let mut done: BTreeSet<(usize, usize)> = BTreeSet::new();

    let mut inputs: Vec<OPoly> = gens.iter().filter(|g| !g.is_zero()).map(|g| OPoly::from_poly(g, order)).collect();
    inputs.sort_by(|a, b| order.cmp(a.lm(), b.lm()).then_with(|| a.terms.len().cmp(&b.terms.len())));
    for g in inputs {
        let s = g.total_degree();
        add_to_basis(g, s, &mut basis, &mut sugar, &mut live, &mut pairs);
    }

    while !pairs.is_empty() {
        let idx = (0..pairs.len())
            .min_by(|&x, &y| {
                pairs[x].sugar.cmp(&pairs[y].sugar).then_with(|| order.cmp(&pairs[x].lcm, &pairs[y].lcm))
            })
            .unwrap();
        let pair = pairs.swap_remove(idx);
        done.insert((pair.i, pair.j));
        if chain_criterion(&pair, &basis, &live, &pairs, &done) {
            continue;
        }
        let (gi, gj) = (&basis[pair.i], &basis[pair.j]);
        let mi = gi.lm().quotient_of(&pair.lcm).unwrap();
        let mj = gj.lm().quotient_of(&pair.lcm).unwrap();
        let mut s = OPoly { terms: Vec::new() };
        s.sub_mul(&(-Q::one() / gi.lc()), &mi, gi, order);
        s.sub_mul(&(Q::one() / gj.lc()), &mj, gj, order);
        let active: Vec<OPoly> = basis.iter().zip(&live).filter(|(_, &l)| l).map(|(g, _)| g.clone()).collect();
        let r = normal_form(&s, &active, order);
        if !r.is_zero() {
            add_to_basis(r, pair.sugar, &mut basis, &mut sugar, &mut live, &mut pairs);
        }
    }

    let kept: Vec<OPoly> = basis.into_iter().zip(live).filter(|(_, l)| *l).map(|(g, _)| g).collect();
    interreduce(kept, order)
}

fn add_to_basis(
    mut g: OPoly,
    s: u32,
    basis: &mut Vec<OPoly>,
    sugar: &mut Vec<u32>,
    live: &mut Vec<bool>,
    pairs: &mut Vec<Pair>,
) {
    g.make_monic();
    let new = basis.len();
    for i in 0..basis.len() {
        if !live[i] {
            continue;
        }
        let lcm = basis[i].lm().lcm(g.lm());
        if basis[i].lm().is_coprime(g.lm()) {
            continue;
        }
        let si = sugar[i] + basis[i].lm().quotient_of(&lcm).unwrap().total_degree();
        let sn = s + g.lm().quotient_of(&lcm).unwrap().total_degree();
        pairs.push(Pair { i, j: new, lcm, sugar: si.max(sn) });
    }
    basis.push(g);
    sugar.push(s);
    live.push(true);
}

/// Buchberger's second criterion: the pair can be skipped when some other
/// basis element's leading monomial divides the lcm and both of its pairs
/// with the current pair's members have already been treated.
fn chain_criterion(pair: &Pair, basis: &[OPoly], live: &[bool], pending: &[Pair], done: &BTreeSet<(usize, usize)>) -> bool {
    let is_pending = |a: usize, b: usize| {
        let (a, b) = (a.min(b), a.max(b));
        pending.iter().any(|p| p.i == a && p.j == b)
    };
    let treated = |a: usize, b: usize| {
        let (a, b) = (a.min(b), a.max(b));
        !is_pending(a, b) && (done.contains(&(a, b)) || basis[a].lm().is_coprime(basis[b].lm()))
    };
    (0..basis.len()).any(|k| {
        k != pair.i && k != pair.j && live[k] && basis[k].lm().divides(&pair.lcm) && treated(pair.i, k) && treated(pair.j, k)
    })
}

fn interreduce(mut gs: Vec<OPoly>, order: MonoOrder) -> Vec<OPoly> {
    gs.sort_by(|a, b| order.cmp(a.lm(), b.lm()));
    let mut minimal: Vec<OPoly> = Vec::new();
    for g in gs {
        if !minimal.iter().any(|h| h.lm().divides(g.lm())) {
            minimal.push(g);
        }
    }
    let mut out = Vec::with_capacity(minimal.len());
    for i in 0..minimal.len() {
        let others: Vec<OPoly> = minimal.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, g)| g.clone()).collect();
        let head = OPoly { terms: vec![minimal[i].terms[0].clone()] };
        let tail = OPoly { terms: minimal[i].terms[1..].to_vec() };
        let mut r = normal_form(&tail, &others, order);
        let mut terms = head.terms;
        terms.append(&mut r.terms);
        let mut g = OPoly { terms };
        g.make_monic();
        out.push(g);
    }
    out.sort_by(|a, b| order.cmp(a.lm(), b.lm()));
    out
}

/// Index one past the largest variable occurring in `polys`.
fn var_span<'a>(polys: impl IntoIterator<Item = &'a QPoly>) -> usize {
    polys.into_iter().flat_map(|p| p.monomials().map(|m| m.exps().len())).max().unwrap_or(0)
}

/// `f ∈ √⟨gens⟩`, decided by `1 ∈ ⟨gens, 1 − τ·f⟩` with a fresh `τ`.
pub fn radical_membership(f: &QPoly, gens: &[QPoly]) -> bool {
    if f.is_zero() {
        return true;
    }
    let tau = var_span(gens.iter().chain(std::iter::once(f)));
    let mut ext: Vec<QPoly> = gens.to_vec();
    ext.push(&QPoly::one() - &f.mul_mono(&Mono::var(tau)));
    let gb = buchberger_reduced(&ext, MonoOrder::Grevlex);
    gb.len() == 1 && gb[0].is_one()
}

/// Makes a parameter condition canonical: content removed, grevlex-leading
/// coefficient positive.
pub fn normalize_condition(p: &QPoly) -> QPoly {
    p.primitive_by(|q| MonoOrder::Grevlex.leading(q))
}

/// A monomial condition only matters through its support.
fn squarefree_monomial(p: &QPoly) -> QPoly {
    if p.len() != 1 {
        return p.clone();
    }
    let m = p.monomials().next().unwrap();
    QPoly::monomial(Mono::from_exps(m.exps().iter().map(|&e| e.min(1)).collect()), Q::one())
}

/// Writes `p` with terms in descending `order`.
pub fn format_ordered(p: &QPoly, names: &[String], order: MonoOrder) -> String {
    let o = OPoly::from_poly(p, order);
    let mut out = String::new();
    for (m, c) in o.terms() {
        let single = QPoly::monomial(m.clone(), c.clone()).to_expr(names);
        if !out.is_empty() && !single.starts_with('-') {
            out.push('+');
        }
        out.push_str(&single);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// An ideal in a polynomial ring over ℚ, with its reduced Gröbner basis and a
/// memo of radical-membership answers.
#[derive(Debug)]
pub struct Ideal {
    gens: Vec<QPoly>,
    gb: Vec<OPoly>,
    radical_memo: Mutex<HashMap<QPoly, bool>>,
}

impl Clone for Ideal {
    fn clone(&self) -> Self {
        Self { gens: self.gens.clone(), gb: self.gb.clone(), radical_memo: Mutex::new(HashMap::new()) }
    }
}

impl Ideal {
    pub fn new(gens: &[QPoly]) -> Self {
        let gb = buchberger_reduced(gens, MonoOrder::Grevlex);
        Self { gens: gens.to_vec(), gb, radical_memo: Mutex::new(HashMap::new()) }
    }

    pub fn zero() -> Self {
        Self::new(&[])
    }

    pub fn gens(&self) -> &[QPoly] {
        &self.gens
    }

    pub fn basis(&self) -> Vec<QPoly> {
        self.gb.iter().map(OPoly::to_poly).collect()
    }

    pub fn is_unit(&self) -> bool {
        self.gb.len() == 1 && self.gb[0].is_one()
    }

    pub fn is_zero_ideal(&self) -> bool {
        self.gb.is_empty()
    }

    pub fn reduce(&self, f: &QPoly) -> QPoly {
        if self.gb.is_empty() || f.is_zero() {
            return f.clone();
        }
        normal_form(&OPoly::from_poly(f, MonoOrder::Grevlex), &self.gb, MonoOrder::Grevlex).to_poly()
    }

    pub fn contains(&self, f: &QPoly) -> bool {
        self.reduce(f).is_zero()
    }

    pub fn radical_contains(&self, f: &QPoly) -> bool {
        let r = self.reduce(f);
        if r.is_zero() {
            return true;
        }
        if self.gb.is_empty() {
            return false;
        }
        if let Some(&known) = self.radical_memo.lock().unwrap().get(&r) {
            return known;
        }
        let answer = radical_membership(&r, &self.basis());
        self.radical_memo.lock().unwrap().insert(r, answer);
        answer
    }

    /// The ideal with `extra` adjoined.
    pub fn extended(&self, extra: &[QPoly]) -> Ideal {
        let mut gens = self.basis();
        gens.extend(extra.iter().cloned());
        let mut ideal = Ideal::new(&gens);
        ideal.gens = self.gens.iter().chain(extra).cloned().collect();
        ideal
    }
}

/// `V(E) \ V(N)` is empty, with `N` read disjunctively (the region where
/// at least one element of `N` is nonzero). An empty `N` imposes nothing.
pub fn is_inconsistent(e: &Ideal, nonnull: &[QPoly]) -> bool {
    if e.is_unit() {
        return true;
    }
    !nonnull.is_empty() && nonnull.iter().all(|n| e.radical_contains(n))
}

/// One row of a comprehensive Gröbner system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CgsTriple {
    pub null: Vec<QPoly>,
    pub nonnull: Vec<QPoly>,
    pub basis: Vec<QPoly>,
}

#[derive(Clone, Copy, Debug)]
pub struct CgsLimits {
    pub max_branches: usize,
    pub max_depth: usize,
}

impl Default for CgsLimits {
    fn default() -> Self {
        Self { max_branches: 64, max_depth: 32 }
    }
}

/// Comprehensive Gröbner system of `gens` in `ℚ[params][vars]`.
///
/// Polynomials live in a joint ring whose first `nvars` indices are the
/// main variables and whose next `nparams` indices are the parameters.
/// Returned conditions are re-indexed to the parameters alone.
pub fn comprehensive_groebner_system(
    gens: &[QPoly],
    nvars: usize,
    var_order: MonoOrder,
    limits: CgsLimits,
) -> Result<Vec<CgsTriple>> {
    let order = MonoOrder::Block { k: nvars, lex_head: var_order == MonoOrder::Lex };
    let mut ctx = CgsCtx { gens: gens.to_vec(), nvars, order, limits, out: Vec::new() };
    ctx.run(&[], &[], 0)?;
    let shift = |p: &QPoly| p.map_monos(|m| Mono::from_exps(m.exps().iter().skip(nvars).copied().collect()));
    Ok(ctx
        .out
        .into_iter()
        .map(|t| CgsTriple {
            null: t.null.iter().map(shift).collect(),
            nonnull: t.nonnull.iter().map(shift).collect(),
            basis: t.basis,
        })
        .collect())
}

struct CgsCtx {
    gens: Vec<QPoly>,
    nvars: usize,
    order: MonoOrder,
    limits: CgsLimits,
    out: Vec<CgsTriple>,
}

/// Products `a·b` over all pairs; the empty set acts as the identity.
pub fn disjunctive_meet(a: &[QPoly], b: &[QPoly]) -> Vec<QPoly> {
    if a.is_empty() {
        return dedup_conditions(b.to_vec());
    }
    if b.is_empty() {
        return dedup_conditions(a.to_vec());
    }
    let mut out = Vec::new();
    for x in a {
        for y in b {
            out.push(x * y);
        }
    }
    dedup_conditions(out)
}

pub fn dedup_conditions(ps: Vec<QPoly>) -> Vec<QPoly> {
    let mut out: Vec<QPoly> = Vec::new();
    for p in ps {
        if p.is_zero() {
            continue;
        }
        let p = normalize_condition(&p);
        if !out.contains(&p) {
            out.push(p);
        }
    }
    out
}

impl CgsCtx {
    fn involves_vars(&self, p: &QPoly) -> bool {
        p.monomials().any(|m| m.exps().iter().take(self.nvars).any(|&e| e > 0))
    }

    fn emit(&mut self, null: &Ideal, nonnull: Vec<QPoly>, basis: Vec<QPoly>) -> Result<()> {
        if is_inconsistent(null, &nonnull) {
            return Ok(());
        }
        if self.out.len() >= self.limits.max_branches {
            return Err(Error::BranchLimit { what: "branches", limit: self.limits.max_branches });
        }
        let null_list = dedup_conditions(null.basis());
        let nonnull = nonnull.into_iter().map(|n| squarefree_monomial(&null.reduce(&n))).collect();
        self.out.push(CgsTriple { null: null_list, nonnull: dedup_conditions(nonnull), basis });
        Ok(())
    }

    fn run(&mut self, null: &[QPoly], nonnull: &[QPoly], depth: usize) -> Result<()> {
        if depth > self.limits.max_depth {
            return Err(Error::BranchLimit { what: "levels of recursion", limit: self.limits.max_depth });
        }
        let mut e = Ideal::new(null);
        if is_inconsistent(&e, nonnull) {
            return Ok(());
        }
        let mut all = self.gens.clone();
        all.extend(e.basis());
        let g = buchberger_reduced(&all, self.order);
        if g.len() == 1 && g[0].is_one() {
            return self.emit(&e, nonnull.to_vec(), vec![QPoly::one()]);
        }
        let (main, pure): (Vec<OPoly>, Vec<OPoly>) = g.into_iter().partition(|p| self.involves_vars(&p.to_poly()));
        let new_conds: Vec<QPoly> = pure.iter().map(OPoly::to_poly).filter(|p| !e.radical_contains(p)).collect();
        let nonnull = nonnull.to_vec();
        if !new_conds.is_empty() {
            self.emit(&e, disjunctive_meet(nonnull.as_slice(), &new_conds), vec![QPoly::one()])?;
            e = e.extended(&new_conds);
            if is_inconsistent(&e, &nonnull) {
                return Ok(());
            }
        }

        let mut lcs: Vec<QPoly> = Vec::new();
        for p in &main {
            let lc = self.leading_coefficient(p);
            if lc.is_constant() {
                continue;
            }
            lcs.push(lc);
        }
        let lcs = dedup_conditions(lcs);
        if let Some(h) = lcs.iter().find(|h| e.radical_contains(h)) {
            let mut next = e.basis();
            next.push(h.clone());
            return self.run(&next, &nonnull, depth + 1);
        }
        let product = lcs.iter().fold(QPoly::one(), |acc, h| &acc * h);
        let basis = self.minimal_main(&main);
        let region = if lcs.is_empty() { nonnull.clone() } else { disjunctive_meet(&nonnull, &[product]) };
        self.emit(&e, region, basis)?;

        let mut prefix = QPoly::one();
        for h in &lcs {
            let mut next = e.basis();
            next.push(h.clone());
            let branch_nonnull = if prefix.is_constant() { nonnull.clone() } else { disjunctive_meet(&nonnull, &[prefix.clone()]) };
            self.run(&next, &branch_nonnull, depth + 1)?;
            prefix = &prefix * h;
        }
        Ok(())
    }

    /// Coefficient of the leading main-variable monomial, as a parameter
    /// polynomial.
    fn leading_coefficient(&self, p: &OPoly) -> QPoly {
        let k = self.nvars;
        let head = |m: &Mono| Mono::from_exps(m.exps().iter().take(k).copied().collect());
        let lead = head(p.lm());
        let mut lc = QPoly::zero();
        for (m, c) in p.terms() {
            if head(m) == lead {
                let mut tail = vec![0u16; k.min(m.exps().len())];
                tail.extend(m.exps().iter().skip(k));
                lc.add_term(Mono::from_exps(tail), c);
            }
        }
        lc
    }

    /// Keeps the elements whose leading main-variable monomial is not a
    /// multiple of another's. On a branch where every leading coefficient
    /// is nonzero the survivors still specialize to a Gröbner basis.
    fn minimal_main(&self, main: &[OPoly]) -> Vec<QPoly> {
        let k = self.nvars;
        let head = |p: &OPoly| Mono::from_exps(p.lm().exps().iter().take(k).copied().collect());
        let heads: Vec<Mono> = main.iter().map(head).collect();
        let mut out = Vec::new();
        for (i, p) in main.iter().enumerate() {
            let redundant = heads.iter().enumerate().any(|(j, h)| {
                j != i && h.divides(&heads[i]) && (h != &heads[i] || j < i)
            });
            if !redundant {
                out.push(self.primitive_main(p));
            }
        }
        out
    }

    /// Clears denominators and makes the leading coefficient positive so
    /// that bases print with integer coefficients.
    fn primitive_main(&self, p: &OPoly) -> QPoly {
        let poly = p.to_poly();
        let content = poly.content();
        let mut out = poly.scale(&(Q::one() / content));
        if p.lc().is_negative() {
            out = -&out;
        }
        out
    }
}
