//! Polynomial ansatz, tangency identities and the real linear systems they
//! induce.
//!
//! A complex unknown `c_u` multiplies the monomial `m_u` in the slot of the
//! holomorphic variable `x_s`. Its contribution to the `j`-th restricted
//! tangency polynomial is `c_u·A_{u,j} + c̄_u·B_{u,j}` with
//!
//! ```text
//! A_{u,j} = [x_s = w_j]·m_u − m_u·∂R_j/∂x_s
//! B_{u,j} = −[x_s = w_j]·m̄_u − m̄_u·∂R_j/∂x̄_s
//! ```
//!
//! everything restricted to the model. Writing `c_u = x + i·y` the real
//! unknown `x` gets column `A + B` and `y` gets `i·(A − B)`.

use std::collections::{BTreeMap, HashSet};
use std::sync::Arc;

use crate::algebra::crpoly::{conj_raw, display_cmp, format_scalar_factor};
use crate::algebra::scalar::mono_expr;
use crate::algebra::{enumerate_weighted_monomials, CoeffScalar, Coeff, Mono, QPoly, RawPoly, VarTable, Q};
use crate::error::Result;
use crate::model::{CRModel, Restriction};

/// One complex unknown: the coefficient of `mono` in the slot `slot`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Unknown {
    pub slot: usize,
    pub mono: Mono,
}

#[derive(Clone, Debug)]
pub struct Ansatz {
    table: Arc<VarTable>,
    pub t: i64,
    pub cumulative: bool,
    slots: Vec<Vec<Mono>>,
    unknowns: Vec<Unknown>,
}

impl Ansatz {
    /// Builds the weight-`t` ansatz, or the cumulative one (all weights up
    /// to `t`). Below `−ρ` every slot is empty.
    pub fn build(model: &CRModel, t: i64, cumulative: bool) -> Result<Self> {
        let table = model.table().clone();
        let hol = table.holomorphic_vars();
        let mut slots = Vec::with_capacity(hol.len());
        let mut unknowns = Vec::new();
        for (s, &v) in hol.iter().enumerate() {
            let top = table.weight(v) + t;
            let mut monos = Vec::new();
            if t >= -model.rho() {
                if cumulative {
                    for d in (0..=top).rev() {
                        monos.extend(enumerate_weighted_monomials(&table, d, &hol)?);
                    }
                } else {
                    monos = enumerate_weighted_monomials(&table, top, &hol)?;
                }
            }
            unknowns.extend(monos.iter().map(|m| Unknown { slot: s, mono: m.clone() }));
            slots.push(monos);
        }
        Ok(Self { table, t, cumulative, slots, unknowns })
    }

    pub fn table(&self) -> &Arc<VarTable> {
        &self.table
    }

    pub fn slots(&self) -> &[Vec<Mono>] {
        &self.slots
    }

    pub fn unknowns(&self) -> &[Unknown] {
        &self.unknowns
    }

    pub fn num_complex(&self) -> usize {
        self.unknowns.len()
    }

    pub fn num_real(&self) -> usize {
        2 * self.unknowns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.unknowns.is_empty()
    }

    /// Holomorphic variable whose `∂` the slot multiplies.
    pub fn slot_var(&self, slot: usize) -> usize {
        self.table.holomorphic_vars()[slot]
    }

    pub fn slot_name(&self, slot: usize) -> String {
        let n = self.table.n();
        if slot < n {
            format!("Z{}", slot + 1)
        } else {
            format!("W{}", slot - n + 1)
        }
    }

    /// Name of complex unknown `u`, e.g. `W2_3` for the third monomial of `W²`.
    pub fn unknown_name(&self, u: usize) -> String {
        let slot = self.unknowns[u].slot;
        let first = self.unknowns.iter().position(|x| x.slot == slot).unwrap();
        format!("{}_{}", self.slot_name(slot), u - first + 1)
    }

    pub fn real_unknown_names(&self) -> Vec<String> {
        (0..self.num_complex())
            .flat_map(|u| {
                let n = self.unknown_name(u);
                [format!("re({n})"), format!("im({n})")]
            })
            .collect()
    }

    /// Index of the complex unknown for `mono` in `slot`, if present.
    pub fn find(&self, slot: usize, mono: &Mono) -> Option<usize> {
        self.unknowns.iter().position(|u| u.slot == slot && &u.mono == mono)
    }

    /// Slot coefficients for complex unknown values.
    pub fn assemble(&self, values: &[CoeffScalar]) -> Vec<RawPoly> {
        let mut coeffs = vec![RawPoly::zero(); self.slots.len()];
        for (u, c) in self.unknowns.iter().zip(values) {
            if !c.c_is_zero() {
                coeffs[u.slot].add_term(u.mono.clone(), c);
            }
        }
        coeffs
    }

    /// Slot coefficients for a real solution vector `(re, im, re, im, …)`.
    pub fn assemble_real(&self, values: &[QPoly]) -> Vec<RawPoly> {
        let complex: Vec<CoeffScalar> =
            values.chunks(2).map(|p| CoeffScalar::from_parts(&p[0], &p[1])).collect();
        self.assemble(&complex)
    }

    /// Real coordinates of a field in this ansatz; `None` if some term is
    /// not covered by the ansatz.
    pub fn coordinates(&self, coeffs: &[RawPoly]) -> Option<Vec<QPoly>> {
        let mut out = vec![QPoly::zero(); self.num_real()];
        for (slot, p) in coeffs.iter().enumerate() {
            for (m, c) in p.terms() {
                let u = self.find(slot, m)?;
                out[2 * u] = c.re();
                out[2 * u + 1] = c.im();
            }
        }
        Some(out)
    }
}

/// Restricted partial derivatives of the right-hand sides, shared by every
/// tangency computation on one model.
#[derive(Debug)]
pub struct TangencyContext {
    table: Arc<VarTable>,
    restriction: Arc<Restriction>,
    /// `d[j][v]` = restriction of `∂R_j/∂x_v`, over all variables `v`.
    d: Vec<Vec<RawPoly>>,
}

impl TangencyContext {
    pub fn new(model: &CRModel) -> Result<Self> {
        let table = model.table().clone();
        let restriction = model.restriction()?;
        let d = model
            .rhs()
            .iter()
            .map(|r| (0..table.nvars()).map(|v| restriction.apply(&r.derivative(v))).collect())
            .collect();
        Ok(Self { table, restriction, d })
    }

    pub fn table(&self) -> &Arc<VarTable> {
        &self.table
    }

    pub fn restrict(&self, p: &RawPoly) -> RawPoly {
        self.restriction.apply(p)
    }

    /// The pair `(A_j, B_j)` for one monomial placed in slot variable `x`,
    /// with `rbar` the restriction of the conjugated monomial.
    fn pair(&self, j: usize, x: usize, m: &RawPoly, rbar: &RawPoly) -> (RawPoly, RawPoly) {
        let t = &*self.table;
        let mut a = -&(m * &self.d[j][x]);
        let mut b = -&(rbar * &self.d[j][t.conj_var(x)]);
        if x == t.w(j) {
            a.add_assign_ref(m);
            b.sub_assign_ref(rbar);
        }
        (a, b)
    }

    /// The restricted tangency polynomials of a holomorphic field given by
    /// its slot coefficients.
    pub fn residual(&self, coeffs: &[RawPoly]) -> Vec<RawPoly> {
        let t = &*self.table;
        let hol = t.holomorphic_vars();
        let bars: Vec<RawPoly> = coeffs
            .iter()
            .map(|c| if c.is_zero() { RawPoly::zero() } else { self.restrict(&conj_raw(t, c)) })
            .collect();
        (0..t.k())
            .map(|j| {
                let mut acc = RawPoly::zero();
                for (s, &x) in hol.iter().enumerate() {
                    if coeffs[s].is_zero() {
                        continue;
                    }
                    let (a, b) = self.pair(j, x, &coeffs[s], &bars[s]);
                    acc.add_assign_ref(&a);
                    acc.add_assign_ref(&b);
                }
                acc
            })
            .collect()
    }
}

/// The `j`-th tangency polynomial as `Σ c_u·a[u] + c̄_u·b[u]`.
#[derive(Clone, Debug)]
pub struct TangencyPoly {
    pub equation: usize,
    pub a: Vec<RawPoly>,
    pub b: Vec<RawPoly>,
}

impl TangencyPoly {
    /// Value at complex unknown values.
    pub fn evaluate(&self, values: &[CoeffScalar]) -> RawPoly {
        let mut out = RawPoly::zero();
        for (u, c) in values.iter().enumerate() {
            if c.c_is_zero() {
                continue;
            }
            out.add_assign_ref(&self.a[u].scale(c));
            out.add_assign_ref(&self.b[u].scale(&c.conj()));
        }
        out
    }
}

pub fn tangency_polynomials(ctx: &TangencyContext, ansatz: &Ansatz) -> Vec<TangencyPoly> {
    let t = &*ctx.table;
    let per_unknown: Vec<(RawPoly, RawPoly, usize)> = ansatz
        .unknowns()
        .iter()
        .map(|u| {
            let m = RawPoly::monomial(u.mono.clone(), CoeffScalar::c_one());
            let rbar = ctx.restrict(&conj_raw(t, &m));
            (m, rbar, ansatz.slot_var(u.slot))
        })
        .collect();
    (0..t.k())
        .map(|j| {
            let (a, b) = per_unknown.iter().map(|(m, rbar, x)| ctx.pair(j, *x, m, rbar)).unzip();
            TangencyPoly { equation: j, a, b }
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Part {
    Re,
    Im,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Row {
    /// Sparse coefficients sorted by real unknown index.
    pub coeffs: Vec<(usize, QPoly)>,
    pub equation: usize,
    pub monomial: Mono,
    pub part: Part,
}

/// Homogeneous linear system over `ℚ[params]` in real unknowns.
#[derive(Clone, Debug)]
pub struct LinearSystem {
    pub num_unknowns: usize,
    pub num_params: usize,
    pub rows: Vec<Row>,
    pub unknown_names: Vec<String>,
}

impl LinearSystem {
    pub fn new(num_unknowns: usize, num_params: usize, rows: Vec<Row>) -> Self {
        let unknown_names = (0..num_unknowns).map(|i| format!("x{}", i + 1)).collect();
        Self { num_unknowns, num_params, rows, unknown_names }
    }

    /// Builds a system from dense rows (handy in tests).
    pub fn from_dense(num_params: usize, rows: &[Vec<QPoly>], num_unknowns: usize) -> Self {
        let rows = rows
            .iter()
            .enumerate()
            .map(|(i, r)| Row {
                coeffs: r.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(j, c)| (j, c.clone())).collect(),
                equation: 0,
                monomial: Mono::var(i),
                part: Part::Re,
            })
            .collect();
        Self::new(num_unknowns, num_params, rows)
    }

    pub fn is_parameter_free(&self) -> bool {
        self.rows.iter().all(|r| r.coeffs.iter().all(|(_, c)| c.is_constant()))
    }

    pub fn dense_rows(&self) -> Vec<Vec<QPoly>> {
        self.rows
            .iter()
            .map(|r| {
                let mut d = vec![QPoly::zero(); self.num_unknowns];
                for (j, c) in &r.coeffs {
                    d[*j] = c.clone();
                }
                d
            })
            .collect()
    }

    /// Evaluates every row at a real vector, returning the residuals.
    pub fn apply(&self, v: &[QPoly]) -> Vec<QPoly> {
        self.rows
            .iter()
            .map(|r| {
                let mut acc = QPoly::zero();
                for (j, c) in &r.coeffs {
                    acc.add_assign_ref(&(c * &v[*j]));
                }
                acc
            })
            .collect()
    }
}

/// Splits the tangency polynomials into real rows, one per monomial and
/// real/imaginary part, dropping rows proportional to an earlier one.
pub fn extract_linear_system(ansatz: &Ansatz, polys: &[TangencyPoly]) -> LinearSystem {
    let t = &*ansatz.table;
    let mut rows = Vec::new();
    let mut seen: HashSet<Vec<(usize, QPoly)>> = HashSet::new();
    for tp in polys {
        let mut by_mono: BTreeMap<Mono, Vec<(usize, CoeffScalar)>> = BTreeMap::new();
        for u in 0..ansatz.num_complex() {
            let sum = &tp.a[u] + &tp.b[u];
            let diff = (&tp.a[u] - &tp.b[u]).scale(&CoeffScalar::imag_unit());
            for (col, p) in [(2 * u, sum), (2 * u + 1, diff)] {
                for (m, c) in p.into_terms() {
                    by_mono.entry(m).or_default().push((col, c));
                }
            }
        }
        let mut monos: Vec<Mono> = by_mono.keys().cloned().collect();
        monos.sort_by(|x, y| display_cmp(t, y, x));
        for m in monos {
            let entries = &by_mono[&m];
            for part in [Part::Re, Part::Im] {
                let coeffs: Vec<(usize, QPoly)> = entries
                    .iter()
                    .map(|(col, c)| (*col, if part == Part::Re { c.re() } else { c.im() }))
                    .filter(|(_, q)| !q.is_zero())
                    .collect();
                if coeffs.is_empty() {
                    continue;
                }
                if !seen.insert(normalized_row(&coeffs)) {
                    continue;
                }
                rows.push(Row { coeffs, equation: tp.equation, monomial: m.clone(), part });
            }
        }
    }
    let mut sys = LinearSystem::new(ansatz.num_real(), t.params().len(), rows);
    sys.unknown_names = ansatz.real_unknown_names();
    sys
}

/// Row scaled so that its rational content is 1 and its first coefficient
/// has a positive leading term.
fn normalized_row(coeffs: &[(usize, QPoly)]) -> Vec<(usize, QPoly)> {
    let all: Vec<&Q> = coeffs.iter().flat_map(|(_, p)| p.terms().map(|(_, c)| c)).collect();
    let mut g = crate::algebra::coeff::q_gcd(all.iter().copied());
    let lead = coeffs[0].1.terms().next_back().map(|(_, c)| c.clone()).unwrap();
    if lead < Q::from_integer(0.into()) {
        g = -g;
    }
    let inv = Q::from_integer(1.into()) / g;
    coeffs.iter().map(|(j, p)| (*j, p.scale(&inv))).collect()
}

/// A complex equation `Σ a_u·c_u + Σ b_u·c̄_u = 0`, with unknowns and
/// their conjugates kept in separate groups for display.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DisplayRow {
    pub monomial: Mono,
    pub a: Vec<(usize, CoeffScalar)>,
    pub b: Vec<(usize, CoeffScalar)>,
}

/// Complex rows of one tangency polynomial, one per monomial in display
/// order, duplicates kept.
///
/// Rows are given as they arise when the unbarred `w` are eliminated
/// instead of the barred ones. That system is the conjugate of the one
/// computed here: the row at `μ̄` has `−conj(b_u)` on `c_u` and
/// `−conj(a_u)` on `c̄_u`, where `a, b` belong to the row at `μ`.
pub fn display_rows(tp: &TangencyPoly, table: &VarTable) -> Vec<DisplayRow> {
    let mut by_mono: BTreeMap<Mono, DisplayRow> = BTreeMap::new();
    for (u, (a, b)) in tp.a.iter().zip(&tp.b).enumerate() {
        // a term of `a` becomes a `c̄_u` term of the display row and vice versa
        for (src, to_bar) in [(a, true), (b, false)] {
            for (m, c) in src.terms() {
                let m = m.permuted(|v| table.conj_var(v));
                let row = by_mono.entry(m.clone()).or_insert_with(|| DisplayRow { monomial: m, a: vec![], b: vec![] });
                let slot = if to_bar { &mut row.b } else { &mut row.a };
                slot.push((u, -&c.conj()));
            }
        }
    }
    let mut rows: Vec<DisplayRow> = by_mono.into_values().collect();
    rows.sort_by(|x, y| display_cmp(table, &y.monomial, &x.monomial));
    rows
}

pub fn format_display_row(row: &DisplayRow, ansatz: &Ansatz) -> String {
    let params = ansatz.table.params();
    let mut terms: Vec<(usize, bool, &CoeffScalar)> =
        row.a.iter().map(|(u, c)| (*u, false, c)).chain(row.b.iter().map(|(u, c)| (*u, true, c))).collect();
    terms.sort_by_key(|(u, bar, _)| (*u, *bar));
    let mut out = String::new();
    for (u, bar, c) in terms {
        let name = ansatz.unknown_name(u);
        let name = if bar { format!("conj({name})") } else { name };
        let coeff = format_scalar_factor(c, params);
        let piece = match coeff.as_str() {
            "1" => name,
            "-1" => format!("-{name}"),
            _ => format!("{coeff}*{name}"),
        };
        if out.is_empty() {
            out.push_str(&piece);
        } else if let Some(rest) = piece.strip_prefix('-') {
            out.push_str(" - ");
            out.push_str(rest);
        } else {
            out.push_str(" + ");
            out.push_str(&piece);
        }
    }
    format!("{out} = 0")
}

/// Text of a monomial in `z, z̄, w`.
pub fn monomial_text(table: &VarTable, m: &Mono) -> String {
    let s = mono_expr(m, |v| table.name(v));
    if s.is_empty() {
        "1".into()
    } else {
        s
    }
}

/// Weight of the monomials a weight-`t` row of equation `j` comes from.
pub fn row_weight(table: &VarTable, t: i64, j: usize) -> i64 {
    t + table.w_weights()[j] as i64
}
