//! Holomorphic vector fields and the graded Lie algebra they span.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::algebra::crpoly::{format_raw, weighted_degree_raw};
use crate::algebra::{CoeffScalar, Coeff, Homogeneity, Mono, QPoly, RawPoly, VarTable, Q};
use crate::error::{Error, Result};
use crate::groebner::{CgsLimits, MonoOrder};
use crate::linsolve::{rank_on, solve_on, BasisVector, RankOutcome, Region};
use crate::model::CRModel;
use crate::tangency::{extract_linear_system, tangency_polynomials, Ansatz, LinearSystem, TangencyContext};

/// `Σ Z^j ∂_{z_j} + Σ W^l ∂_{w_l}` with holomorphic coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VectorField {
    table: Arc<VarTable>,
    coeffs: Vec<RawPoly>,
}

impl VectorField {
    pub fn new(table: Arc<VarTable>, coeffs: Vec<RawPoly>) -> Result<Self> {
        let slots = table.n() + table.k();
        if coeffs.len() != slots {
            return Err(Error::Usage(format!("a vector field needs {slots} coefficients, got {}", coeffs.len())));
        }
        for c in &coeffs {
            if c.monomials().any(|m| m.exps().iter().enumerate().any(|(v, &e)| e > 0 && table.is_barred(v))) {
                return Err(Error::Usage("vector field coefficients must be holomorphic".into()));
            }
        }
        Ok(Self { table, coeffs })
    }

    pub fn zero(table: &Arc<VarTable>) -> Self {
        Self { table: table.clone(), coeffs: vec![RawPoly::zero(); table.n() + table.k()] }
    }

    /// The coordinate field `∂_x` for a holomorphic variable `x`.
    pub fn coordinate(table: &Arc<VarTable>, var: usize) -> Self {
        let mut f = Self::zero(table);
        let slot = table.holomorphic_vars().iter().position(|&v| v == var).expect("holomorphic variable");
        f.coeffs[slot] = RawPoly::one();
        f
    }

    /// Parses a coefficient per slot in model-file syntax.
    pub fn parse(table: &Arc<VarTable>, coeffs: &[&str]) -> Result<Self> {
        let polys = coeffs
            .iter()
            .map(|s| {
                crate::model::parse_cr_expr(table, s)
                    .map_err(|e| Error::Parse { line: 1, column: e.column, message: e.message })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(table.clone(), polys)
    }

    pub fn table(&self) -> &Arc<VarTable> {
        &self.table
    }

    pub fn coeffs(&self) -> &[RawPoly] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn scale(&self, c: &CoeffScalar) -> Self {
        Self { table: self.table.clone(), coeffs: self.coeffs.iter().map(|p| p.scale(c)).collect() }
    }

    pub fn add(&self, o: &Self) -> Self {
        Self { table: self.table.clone(), coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self { table: self.table.clone(), coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a - b).collect() }
    }

    /// Coefficient scalars reduced modulo the null conditions of a region.
    pub fn reduced(&self, region: &Region) -> Self {
        if region.null().is_empty() {
            return self.clone();
        }
        let coeffs = self
            .coeffs
            .iter()
            .map(|p| {
                let mut out = RawPoly::zero();
                for (m, c) in p.terms() {
                    let s = CoeffScalar::from_parts(&region.reduce(&c.re()), &region.reduce(&c.im()));
                    out.add_term(m.clone(), &s);
                }
                out
            })
            .collect();
        Self { table: self.table.clone(), coeffs }
    }

    pub fn is_zero_on(&self, region: &Region) -> bool {
        self.reduced(region).is_zero()
    }

    /// Weight `t` such that every nonzero coefficient of `∂_x` has weighted
    /// degree `[x] + t`.
    pub fn weight(&self) -> Result<Homogeneity> {
        let mut found = None;
        for (slot, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let var = self.table.holomorphic_vars()[slot];
            let t = match weighted_degree_raw(&self.table, c)? {
                Homogeneity::Homogeneous(d) => d - self.table.weight(var),
                Homogeneity::Inhomogeneous => return Ok(Homogeneity::Inhomogeneous),
            };
            match found {
                None => found = Some(t),
                Some(f) if f != t => return Ok(Homogeneity::Inhomogeneous),
                _ => {}
            }
        }
        found.map(Homogeneity::Homogeneous).ok_or(Error::ZeroDegree)
    }

    /// Applies the field to a holomorphic polynomial.
    pub fn apply(&self, p: &RawPoly) -> RawPoly {
        let mut out = RawPoly::zero();
        for (slot, &v) in self.table.holomorphic_vars().iter().enumerate() {
            if !self.coeffs[slot].is_zero() && p.involves(v) {
                out.add_assign_ref(&(&self.coeffs[slot] * &p.derivative(v)));
            }
        }
        out
    }

    /// Real coordinates over the union of `(slot, monomial)` supports.
    fn flat_terms(&self) -> impl Iterator<Item = ((usize, Mono), &CoeffScalar)> + '_ {
        self.coeffs.iter().enumerate().flat_map(|(s, p)| p.terms().map(move |(m, c)| ((s, m.clone()), c)))
    }
}

pub fn lie_bracket(x: &VectorField, y: &VectorField) -> VectorField {
    let coeffs = x.coeffs.iter().zip(&y.coeffs).map(|(xs, ys)| &x.apply(ys) - &y.apply(xs)).collect();
    VectorField { table: x.table.clone(), coeffs }
}

pub fn field_weight(x: &VectorField) -> Result<Homogeneity> {
    x.weight()
}

impl fmt::Display for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        for (slot, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let d = format!("∂_{}", self.table.name(self.table.holomorphic_vars()[slot]));
            let text = format_raw(&self.table, c);
            let piece = if text == "1" {
                d
            } else if text == "-1" {
                format!("-{d}")
            } else if c.len() > 1 {
                format!("({text})*{d}")
            } else {
                format!("{text}*{d}")
            };
            if !out.is_empty() {
                if let Some(rest) = piece.strip_prefix('-') {
                    out.push_str(" - ");
                    out.push_str(rest);
                    continue;
                }
                out.push_str(" + ");
            }
            out.push_str(&piece);
        }
        if out.is_empty() {
            out.push('0');
        }
        f.write_str(&out)
    }
}

/// Real row vectors of fields over the union of their supports.
fn field_rows(fields: &[&VectorField]) -> (Vec<Vec<QPoly>>, usize) {
    let mut index: BTreeMap<(usize, Mono), usize> = BTreeMap::new();
    for f in fields {
        for (key, _) in f.flat_terms() {
            let next = index.len();
            index.entry(key).or_insert(next);
        }
    }
    let ncols = 2 * index.len();
    let rows = fields
        .iter()
        .map(|f| {
            let mut r = vec![QPoly::zero(); ncols];
            for (key, c) in f.flat_terms() {
                let i = index[&key];
                r[2 * i] = c.re();
                r[2 * i + 1] = c.im();
            }
            r
        })
        .collect();
    (rows, ncols)
}

/// Rank of a family of fields over a region.
pub fn rank_of_fields(fields: &[&VectorField], region: &Region) -> RankOutcome {
    let (rows, ncols) = field_rows(fields);
    rank_on(&rows, ncols, region)
}

/// Ratio of polynomials in the parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatFunc {
    pub num: QPoly,
    pub den: QPoly,
}

impl RatFunc {
    pub fn zero() -> Self {
        Self { num: QPoly::zero(), den: QPoly::one() }
    }

    pub fn from_poly(p: QPoly) -> Self {
        Self { num: p, den: QPoly::one() }
    }

    pub fn new(num: QPoly, den: QPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return Self::zero();
        }
        if let Some(c) = den.as_constant() {
            return Self::from_poly(num.scale(&(Q::c_one() / c)));
        }
        if let Some(q) = num.exact_div(&den, |p| MonoOrder::Grevlex.leading(p)) {
            return Self::from_poly(q);
        }
        // canonical sign and content on the denominator
        let lead = MonoOrder::Grevlex.leading(&den).unwrap();
        let c = den.coeff(&lead).unwrap().clone();
        let inv = Q::c_one() / c;
        Self { num: num.scale(&inv), den: den.scale(&inv) }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.den == o.den {
            return Self::new(&self.num + &o.num, self.den.clone());
        }
        Self::new(&(&self.num * &o.den) + &(&o.num * &self.den), &self.den * &o.den)
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::new(&self.num * &o.num, &self.den * &o.den)
    }

    pub fn neg(&self) -> Self {
        Self { num: -&self.num, den: self.den.clone() }
    }

    /// Zero at every point of the region.
    pub fn vanishes_on(&self, region: &Region) -> bool {
        region.reduce(&self.num).is_zero()
    }

    pub fn as_constant(&self) -> Option<Q> {
        if self.den.is_one_poly() {
            self.num.as_constant().or_else(|| self.num.is_zero().then(Q::c_zero))
        } else {
            None
        }
    }

    pub fn to_expr(&self, params: &[String]) -> String {
        let n = self.num.to_expr(params);
        if self.den.is_one_poly() {
            return n;
        }
        let wrap = |p: &QPoly, s: String| if p.len() > 1 { format!("({s})") } else { s };
        format!("{}/{}", wrap(&self.num, n), wrap(&self.den, self.den.to_expr(params)))
    }
}

trait IsOnePoly {
    fn is_one_poly(&self) -> bool;
}

impl IsOnePoly for QPoly {
    fn is_one_poly(&self) -> bool {
        self.as_constant().is_some_and(|c| c == Q::c_one())
    }
}

/// A generator of one graded component.
#[derive(Clone, Debug)]
pub struct Generator {
    pub weight: i64,
    pub field: VectorField,
    /// Solution vector in the component's ansatz.
    pub vector: BasisVector,
}

/// Generators of the solution space of one ansatz on a branch.
pub fn extract_generators(ansatz: &Ansatz, basis: &[BasisVector]) -> Vec<Generator> {
    basis
        .iter()
        .map(|b| {
            let coeffs = ansatz.assemble_real(&b.values);
            let field = VectorField { table: ansatz.table().clone(), coeffs };
            Generator { weight: ansatz.t, field, vector: b.clone() }
        })
        .collect()
}

/// `true` when every restricted tangency polynomial of `x` vanishes on the
/// region.
pub fn verify_tangency(ctx: &TangencyContext, x: &VectorField, region: &Region) -> bool {
    ctx.residual(&x.coeffs).iter().all(|r| {
        r.terms().all(|(_, c)| region.reduce(&c.re()).is_zero() && region.reduce(&c.im()).is_zero())
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FundamentalMode {
    Check,
    Assume,
}

#[derive(Clone, Debug)]
pub struct AlgebraOptions {
    /// Compute `g_0..g_N` without applying the termination rule.
    pub max_weight: Option<i64>,
    pub fundamental: FundamentalMode,
    pub limits: CgsLimits,
    /// Highest weight tried before giving up on termination.
    pub weight_cap: i64,
}

impl Default for AlgebraOptions {
    fn default() -> Self {
        Self { max_weight: None, fundamental: FundamentalMode::Check, limits: CgsLimits::default(), weight_cap: 24 }
    }
}

/// Memoized ansatz and linear system per weight.
pub struct SystemCache<'m> {
    model: &'m CRModel,
    ctx: TangencyContext,
    systems: HashMap<(i64, bool), Arc<(Ansatz, LinearSystem)>>,
}

impl<'m> SystemCache<'m> {
    pub fn new(model: &'m CRModel) -> Result<Self> {
        Ok(Self { model, ctx: TangencyContext::new(model)?, systems: HashMap::new() })
    }

    pub fn context(&self) -> &TangencyContext {
        &self.ctx
    }

    pub fn system(&mut self, t: i64, cumulative: bool) -> Result<Arc<(Ansatz, LinearSystem)>> {
        if let Some(s) = self.systems.get(&(t, cumulative)) {
            return Ok(s.clone());
        }
        let ansatz = Ansatz::build(self.model, t, cumulative)?;
        let polys = tangency_polynomials(&self.ctx, &ansatz);
        let sys = extract_linear_system(&ansatz, &polys);
        let entry = Arc::new((ansatz, sys));
        self.systems.insert((t, cumulative), entry.clone());
        Ok(entry)
    }
}

/// Generators of `g_t` (or of `g^{(t)}` when cumulative) on each branch.
pub fn compute_component(
    model: &CRModel,
    t: i64,
    cumulative: bool,
    limits: CgsLimits,
) -> Result<Vec<(Region, Vec<Generator>)>> {
    let mut cache = SystemCache::new(model)?;
    let entry = cache.system(t, cumulative)?;
    let (ansatz, sys) = &*entry;
    let tree = solve_on(sys, &Region::whole(), limits)?;
    Ok(tree.branches.into_iter().map(|b| (b.region, extract_generators(ansatz, &b.basis))).collect())
}

/// Result of a computation that may require splitting the region first.
pub enum OnRegion<T> {
    Value(T, Region),
    Split(QPoly),
}

/// Bracket-generated negative part: level `m` is spanned by `[x, y]` with
/// `x ∈ g_{-1}` and `y` in level `m − 1`, keeping only brackets that raise
/// the rank.
pub fn negative_via_brackets(
    g_minus1: &[VectorField],
    rho: i64,
    region: &Region,
) -> OnRegion<BTreeMap<i64, Vec<VectorField>>> {
    let mut region = region.clone();
    let mut out = BTreeMap::new();
    out.insert(-1, g_minus1.to_vec());
    for m in 2..=rho {
        let prev = out[&(-(m - 1))].clone();
        let mut kept: Vec<VectorField> = Vec::new();
        for x in g_minus1 {
            for y in &prev {
                let b = lie_bracket(x, y).reduced(&region);
                if b.is_zero() {
                    continue;
                }
                let mut trial: Vec<&VectorField> = kept.iter().collect();
                trial.push(&b);
                match rank_of_fields(&trial, &region) {
                    RankOutcome::Rank(r, reg) => {
                        region = reg;
                        if r > kept.len() {
                            kept.push(b);
                        }
                    }
                    RankOutcome::Split(f) => return OnRegion::Split(f),
                }
            }
        }
        out.insert(-m, kept);
    }
    OnRegion::Value(out, region)
}

/// The negative part is generated by `g_{-1}`: the bracket route reaches
/// the full rank of every ansatz-computed `g_{-m}`.
pub fn check_fundamental(
    components: &BTreeMap<i64, Vec<VectorField>>,
    rho: i64,
    region: &Region,
) -> OnRegion<bool> {
    let empty = Vec::new();
    let g1 = components.get(&-1).unwrap_or(&empty);
    let brackets = match negative_via_brackets(g1, rho, region) {
        OnRegion::Value(b, r) => (b, r),
        OnRegion::Split(f) => return OnRegion::Split(f),
    };
    let (brackets, mut region) = brackets;
    for m in 2..=rho {
        let ansatz = components.get(&-m).unwrap_or(&empty);
        let via = &brackets[&-m];
        if via.len() != ansatz.len() {
            // ranks can only agree if the counts do, since both are bases
            let refs: Vec<&VectorField> = ansatz.iter().collect();
            match rank_of_fields(&refs, &region) {
                RankOutcome::Rank(r, reg) => {
                    region = reg;
                    if r != via.len() {
                        return OnRegion::Value(false, region);
                    }
                }
                RankOutcome::Split(f) => return OnRegion::Split(f),
            }
        }
        // bracket fields lie in the ansatz span; check they fill it
        let mut all: Vec<&VectorField> = ansatz.iter().collect();
        all.extend(via.iter());
        match rank_of_fields(&all, &region) {
            RankOutcome::Rank(r, reg) => {
                region = reg;
                if r != via.len() {
                    return OnRegion::Value(false, region);
                }
            }
            RankOutcome::Split(f) => return OnRegion::Split(f),
        }
    }
    OnRegion::Value(true, region)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fundamental {
    Checked(bool),
    Assumed,
}

impl Fundamental {
    pub fn holds(self) -> bool {
        !matches!(self, Fundamental::Checked(false))
    }
}

/// `[X_i, X_j] = Σ c_m X_m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureEntry {
    pub i: usize,
    pub j: usize,
    pub terms: Vec<(usize, RatFunc)>,
}

#[derive(Clone, Debug)]
pub struct BranchAlgebra {
    pub region: Region,
    pub path: Vec<(QPoly, bool)>,
    /// Generators per computed weight; trivial components map to empty lists.
    pub components: BTreeMap<i64, Vec<Generator>>,
    pub rho: i64,
    /// Largest weight with a nonzero component; `None` when no component
    /// of nonnegative weight is nonzero.
    pub varrho: Option<i64>,
    pub rigid: bool,
    /// Rigidity read off coefficient weights.
    pub rigid_by_coefficients: bool,
    pub fundamental: Fundamental,
    pub transitive_assumed: bool,
    pub structure: Vec<StructureEntry>,
    pub warnings: Vec<String>,
}

impl BranchAlgebra {
    pub fn dim(&self) -> usize {
        self.components.values().map(Vec::len).sum()
    }

    pub fn dims(&self) -> BTreeMap<i64, usize> {
        self.components.iter().map(|(t, g)| (*t, g.len())).collect()
    }

    /// All generators in table order (ascending weight).
    pub fn generators(&self) -> Vec<&Generator> {
        self.components.values().flatten().collect()
    }

    pub fn coefficient(&self, i: usize, j: usize, m: usize) -> RatFunc {
        let (a, b, sign) = if i < j { (i, j, false) } else { (j, i, true) };
        self.structure
            .iter()
            .find(|e| e.i == a && e.j == b)
            .and_then(|e| e.terms.iter().find(|(k, _)| *k == m))
            .map(|(_, c)| if sign { c.neg() } else { c.clone() })
            .unwrap_or_else(RatFunc::zero)
    }
}

#[derive(Clone, Debug)]
pub struct GradedAlgebra {
    pub branches: Vec<BranchAlgebra>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Stage {
    Component(i64),
    FundamentalCheck,
    Finish,
}

#[derive(Clone)]
struct CellState {
    region: Region,
    path: Vec<(QPoly, bool)>,
    components: BTreeMap<i64, Vec<Generator>>,
    stage: Stage,
    fundamental: Option<Fundamental>,
    trivial_run: i64,
}

/// Computes every graded component on every parameter branch.
pub fn compute_full_algebra(model: &CRModel, opts: &AlgebraOptions) -> Result<GradedAlgebra> {
    if !model.transitive && opts.max_weight.is_none() {
        return Err(Error::Usage(
            "the model is not declared transitive; supply --max-weight to bound the computation".into(),
        ));
    }
    let rho = model.rho();
    let mut cache = SystemCache::new(model)?;
    let mut finished = Vec::new();
    let mut work = vec![CellState {
        region: Region::whole(),
        path: Vec::new(),
        components: BTreeMap::new(),
        stage: Stage::Component(-rho),
        fundamental: None,
        trivial_run: 0,
    }];
    while let Some(mut st) = work.pop() {
        loop {
            match st.stage {
                Stage::Component(t) => {
                    if opts.max_weight.is_none() && t > opts.weight_cap {
                        return Err(Error::TerminationCap { reached: t - 1 });
                    }
                    let entry = cache.system(t, false)?;
                    let (ansatz, sys) = &*entry;
                    let tree = solve_on(sys, &st.region, opts.limits)?;
                    let mut children: Vec<CellState> = tree
                        .branches
                        .into_iter()
                        .map(|b| {
                            let mut child = st.clone();
                            child.region = b.region;
                            child.path.extend(b.path);
                            let gens = extract_generators(ansatz, &b.basis);
                            child.components.insert(t, gens);
                            advance(&mut child, t, rho, opts);
                            child
                        })
                        .collect();
                    if children.len() == 1 {
                        st = children.pop().unwrap();
                        continue;
                    }
                    check_branch_count(finished.len() + work.len() + children.len(), opts)?;
                    work.extend(children.into_iter().rev());
                    break;
                }
                Stage::FundamentalCheck => {
                    let fields: BTreeMap<i64, Vec<VectorField>> = st
                        .components
                        .iter()
                        .map(|(t, g)| (*t, g.iter().map(|x| x.field.reduced(&st.region)).collect()))
                        .collect();
                    match check_fundamental(&fields, rho, &st.region) {
                        OnRegion::Value(ok, region) => {
                            st.region = region;
                            st.fundamental = Some(Fundamental::Checked(ok));
                            st.stage = Stage::Component(0);
                        }
                        OnRegion::Split(f) => {
                            let mut zero = st.clone();
                            zero.region = st.region.split_zero(&f);
                            zero.path.push((f.clone(), true));
                            let mut nonzero = st;
                            nonzero.region = nonzero.region.split_nonzero(&f);
                            nonzero.path.push((f, false));
                            check_branch_count(finished.len() + work.len() + 2, opts)?;
                            work.push(nonzero);
                            work.push(zero);
                            break;
                        }
                    }
                }
                Stage::Finish => {
                    finished.push(assemble(model, &cache, st, opts)?);
                    break;
                }
            }
        }
    }
    Ok(GradedAlgebra { branches: finished })
}

fn check_branch_count(n: usize, opts: &AlgebraOptions) -> Result<()> {
    if n > opts.limits.max_branches {
        return Err(Error::BranchLimit { what: "algebra branches", limit: opts.limits.max_branches });
    }
    Ok(())
}

/// Chooses the stage after component `t` has been stored.
fn advance(st: &mut CellState, t: i64, rho: i64, opts: &AlgebraOptions) {
    if t < 0 {
        st.stage = if t < -1 {
            Stage::Component(t + 1)
        } else if opts.fundamental == FundamentalMode::Assume {
            st.fundamental = Some(Fundamental::Assumed);
            Stage::Component(0)
        } else {
            Stage::FundamentalCheck
        };
        return;
    }
    if let Some(n) = opts.max_weight {
        st.stage = if t < n { Stage::Component(t + 1) } else { Stage::Finish };
        return;
    }
    if st.components[&t].is_empty() {
        st.trivial_run += 1;
        let fundamental = st.fundamental.is_none_or(Fundamental::holds);
        if fundamental || st.trivial_run >= rho {
            st.stage = Stage::Finish;
            return;
        }
    } else {
        st.trivial_run = 0;
    }
    st.stage = Stage::Component(t + 1);
}

fn assemble(model: &CRModel, cache: &SystemCache<'_>, st: CellState, opts: &AlgebraOptions) -> Result<BranchAlgebra> {
    let region = st.region;
    let mut warnings = Vec::new();
    // bases solved on a larger region are re-expressed modulo the final one
    let components: BTreeMap<i64, Vec<Generator>> = st
        .components
        .into_iter()
        .map(|(t, gens)| {
            let gens = gens
                .into_iter()
                .map(|g| {
                    let values: Vec<QPoly> = g.vector.values.iter().map(|v| region.reduce(v)).collect();
                    let scale = region.reduce(&g.vector.scale);
                    let vector = BasisVector { values, free: g.vector.free, scale };
                    Generator { weight: g.weight, field: g.field.reduced(&region), vector }
                })
                .collect();
            (t, gens)
        })
        .collect();
    let varrho = components.iter().filter(|(t, g)| **t >= 0 && !g.is_empty()).map(|(t, _)| *t).max();
    if varrho.is_none() {
        warnings.push("no nonzero component of nonnegative weight".into());
    }
    let rigid = components.iter().all(|(t, g)| *t <= 0 || g.is_empty());
    let rigid_by_coefficients = components.values().flatten().all(|g| {
        let t = g.field.table();
        g.field.coeffs().iter().enumerate().all(|(slot, c)| {
            c.monomials()
                .all(|m| crate::algebra::crpoly::mono_weight(t, m) <= t.weight(t.holomorphic_vars()[slot]))
        })
    });
    if rigid != rigid_by_coefficients {
        warnings.push("rigidity flag disagrees with the coefficient-weight criterion".into());
    }
    let mut alg = BranchAlgebra {
        region,
        path: st.path,
        components,
        rho: model.rho(),
        varrho,
        rigid,
        rigid_by_coefficients,
        fundamental: st.fundamental.unwrap_or(Fundamental::Assumed),
        transitive_assumed: opts.max_weight.is_none(),
        structure: Vec::new(),
        warnings,
    };
    for g in alg.components.values().flatten() {
        if !verify_tangency(cache.context(), &g.field, &alg.region) {
            return Err(Error::Internal(format!("generator {} fails the tangency check", g.field)));
        }
    }
    alg.structure = structure_table(&alg, cache)?;
    Ok(alg)
}

/// Expresses every bracket `[X_i, X_j]`, `i < j`, in the computed basis.
pub fn structure_table(alg: &BranchAlgebra, cache: &SystemCache<'_>) -> Result<Vec<StructureEntry>> {
    let gens = alg.generators();
    let index_of: Vec<(i64, usize)> = {
        let mut v = Vec::new();
        let mut k = 0;
        for (t, g) in &alg.components {
            v.push((*t, k));
            k += g.len();
        }
        v
    };
    let start = |t: i64| index_of.iter().find(|(w, _)| *w == t).map(|(_, k)| *k);
    let top = alg.components.keys().max().copied().unwrap_or(-1);
    let mut out = Vec::new();
    for i in 0..gens.len() {
        for j in i + 1..gens.len() {
            let y = lie_bracket(&gens[i].field, &gens[j].field).reduced(&alg.region);
            let w = gens[i].weight + gens[j].weight;
            let mut terms = Vec::new();
            if !y.is_zero() {
                let comp = alg.components.get(&w);
                let Some(comp) = comp.filter(|c| !c.is_empty()) else {
                    if w > top {
                        // beyond the computed range; only reachable with an explicit weight bound
                        out.push(StructureEntry { i, j, terms });
                        continue;
                    }
                    return Err(Error::Internal(format!("bracket of X{} and X{} leaves the algebra", i + 1, j + 1)));
                };
                let ansatz = &cache.systems[&(w, false)].0;
                let coords = ansatz
                    .coordinates(y.coeffs())
                    .ok_or_else(|| Error::Internal("bracket is not homogeneous of the expected weight".into()))?;
                let base = start(w).unwrap();
                let mut check = y.clone();
                for (k, g) in comp.iter().enumerate() {
                    let c = RatFunc::new(coords[g.vector.free].clone(), g.vector.scale.clone());
                    if c.vanishes_on(&alg.region) {
                        continue;
                    }
                    // subtract c·X_k, cleared of the denominator
                    check = check.scale(&CoeffScalar::from_real_poly(&c.den)).sub(
                        &g.field.scale(&CoeffScalar::from_real_poly(&c.num)),
                    );
                    terms.push((base + k, c));
                }
                if !check.is_zero_on(&alg.region) {
                    return Err(Error::Internal(format!(
                        "bracket of X{} and X{} is not in the span of its component",
                        i + 1,
                        j + 1
                    )));
                }
            }
            out.push(StructureEntry { i, j, terms });
        }
    }
    Ok(out)
}

/// Jacobi identity on the structure constants.
pub fn jacobi_holds(alg: &BranchAlgebra) -> bool {
    let mut table: HashMap<(usize, usize), Vec<(usize, RatFunc)>> = HashMap::new();
    for e in &alg.structure {
        table.insert((e.i, e.j), e.terms.clone());
        table.insert((e.j, e.i), e.terms.iter().map(|(m, c)| (*m, c.neg())).collect());
    }
    let d = alg.dim();
    for i in 0..d {
        for j in i + 1..d {
            for k in j + 1..d {
                let mut acc: BTreeMap<usize, RatFunc> = BTreeMap::new();
                for (a, b, c) in [(i, j, k), (j, k, i), (k, i, j)] {
                    for (m, c1) in table.get(&(a, b)).into_iter().flatten() {
                        if *m == c {
                            continue;
                        }
                        for (l, c2) in table.get(&(*m, c)).into_iter().flatten() {
                            let e = acc.entry(*l).or_insert_with(RatFunc::zero);
                            *e = e.add(&c1.mul(c2));
                        }
                    }
                }
                if acc.values().any(|v| !v.vanishes_on(&alg.region)) {
                    return false;
                }
            }
        }
    }
    true
}

/// `[g_s, g_t] ⊆ g_{s+t}` for every computed pair of generators.
pub fn grading_closed(alg: &BranchAlgebra) -> bool {
    let gens = alg.generators();
    alg.structure
        .iter()
        .all(|e| e.terms.iter().all(|(m, _)| gens[*m].weight == gens[e.i].weight + gens[e.j].weight))
}
