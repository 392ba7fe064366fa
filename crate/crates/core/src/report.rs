//! Serializable summaries of computed algebras, with text and JSON output.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::algebra::crpoly::format_raw;
use crate::algebra::QPoly;
use crate::error::{Error, Result};
use crate::groebner::CgsTriple;
use crate::liealg::{BranchAlgebra, Fundamental, Generator, GradedAlgebra};
use crate::linsolve::Region;
use crate::model::CRModel;
use crate::tangency::{display_rows, format_display_row, tangency_polynomials, Ansatz, TangencyContext};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldReport {
    /// Nonzero coefficients keyed by the variable of their `∂`.
    pub coeffs: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureTerm {
    pub m: usize,
    pub c: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchReport {
    pub null: Vec<String>,
    pub nonnull: Vec<String>,
    pub components: BTreeMap<i64, Vec<FieldReport>>,
    pub dims: BTreeMap<i64, usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<i64>,
    /// `-1` marks an algebra without nonzero components of nonnegative weight.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub varrho: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rigid: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fundamental: Option<bool>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub fundamental_assumed: bool,
    /// `[i, j, terms]` with 1-based generator indices, `i < j`, nonzero brackets only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub structure: Option<Vec<(usize, usize, Vec<StructureTerm>)>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl BranchReport {
    pub fn dim(&self) -> usize {
        self.dims.values().sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<String>,
    pub params: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
    /// Displayed systems keyed by weight, then by 1-based equation index.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub systems: BTreeMap<i64, BTreeMap<usize, Vec<String>>>,
    pub branches: Vec<BranchReport>,
}

fn conds(ps: &[QPoly], params: &[String]) -> Vec<String> {
    ps.iter().map(|p| p.to_expr(params)).collect()
}

fn field_report(g: &Generator) -> FieldReport {
    let t = g.field.table();
    let coeffs = g
        .field
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(slot, c)| (t.name(t.holomorphic_vars()[slot]), format_raw(t, c)))
        .collect();
    FieldReport { coeffs }
}

fn region_strings(r: &Region, params: &[String]) -> (Vec<String>, Vec<String>) {
    (conds(r.null(), params), conds(r.nonnull(), params))
}

impl Report {
    fn empty(model: &CRModel, warnings: Vec<String>) -> Self {
        Self {
            model: model.name.clone(),
            params: model.table().params().to_vec(),
            warnings,
            systems: BTreeMap::new(),
            branches: Vec::new(),
        }
    }

    pub fn from_algebra(model: &CRModel, alg: &GradedAlgebra, warnings: Vec<String>) -> Self {
        let mut r = Self::empty(model, warnings);
        r.branches = alg.branches.iter().map(|b| branch_report(b, r.params.as_slice())).collect();
        r
    }

    /// Report for a single weight, one entry per parameter branch.
    pub fn from_component(
        model: &CRModel,
        t: i64,
        branches: &[(Region, Vec<Generator>)],
        warnings: Vec<String>,
    ) -> Self {
        let mut r = Self::empty(model, warnings);
        for (region, gens) in branches {
            let (null, nonnull) = region_strings(region, &r.params);
            r.branches.push(BranchReport {
                null,
                nonnull,
                components: BTreeMap::from([(t, gens.iter().map(field_report).collect())]),
                dims: BTreeMap::from([(t, gens.len())]),
                rho: None,
                varrho: None,
                rigid: None,
                fundamental: None,
                fundamental_assumed: false,
                structure: None,
                warnings: Vec::new(),
            });
        }
        r
    }

    /// Adds the displayed tangency systems of weight `t`.
    pub fn add_systems(&mut self, model: &CRModel, t: i64) -> Result<()> {
        let ctx = TangencyContext::new(model)?;
        let ansatz = Ansatz::build(model, t, false)?;
        let mut by_eq = BTreeMap::new();
        for tp in tangency_polynomials(&ctx, &ansatz) {
            let mut rows: Vec<String> = Vec::new();
            for row in display_rows(&tp, ansatz.table()) {
                if row.a.is_empty() && row.b.is_empty() {
                    continue;
                }
                let s = format_display_row(&row, &ansatz);
                if !rows.contains(&s) {
                    rows.push(s);
                }
            }
            by_eq.insert(tp.equation + 1, rows);
        }
        self.systems.insert(t, by_eq);
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(Error::from)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if let Some(name) = &self.model {
            let _ = writeln!(out, "model {name}");
        }
        if !self.params.is_empty() {
            let _ = writeln!(out, "parameters: {}", self.params.join(", "));
        }
        for w in &self.warnings {
            let _ = writeln!(out, "warning: {w}");
        }
        for (t, eqs) in &self.systems {
            for (j, rows) in eqs {
                let _ = writeln!(out, "Sys^{{{t},{j}}}:");
                for r in rows {
                    let _ = writeln!(out, "  {r}");
                }
            }
        }
        let nb = self.branches.len();
        for (bi, b) in self.branches.iter().enumerate() {
            let _ = writeln!(out, "branch {} of {nb}", bi + 1);
            let _ = writeln!(out, "  null: {{{}}}", b.null.join(", "));
            let _ = writeln!(out, "  nonnull: {{{}}}", b.nonnull.join(", "));
            let mut k = 0;
            for (t, gens) in &b.components {
                let _ = writeln!(out, "  g_{t} (dim {}):", gens.len());
                for g in gens {
                    k += 1;
                    let _ = writeln!(out, "    X{k} = {}", field_text(g));
                }
            }
            let dims: Vec<String> = b.dims.iter().map(|(t, d)| format!("{t}:{d}")).collect();
            let _ = writeln!(out, "  dims: {}  total {}", dims.join(" "), b.dim());
            if let Some(rho) = b.rho {
                let _ = writeln!(out, "  rho = {rho}");
            }
            if let Some(v) = b.varrho {
                let note = if v < 0 { " (no nonnegative part)" } else { "" };
                let _ = writeln!(out, "  varrho = {v}{note}");
            }
            if let Some(r) = b.rigid {
                let _ = writeln!(out, "  rigid = {r}");
            }
            if let Some(f) = b.fundamental {
                let how = if b.fundamental_assumed { " (assumed)" } else { "" };
                let _ = writeln!(out, "  fundamental = {f}{how}");
            }
            if let Some(s) = &b.structure {
                let _ = writeln!(out, "  brackets:");
                for (i, j, terms) in s {
                    let _ = writeln!(out, "    [X{i}, X{j}] = {}", combination_text(terms));
                }
            }
            for w in &b.warnings {
                let _ = writeln!(out, "  warning: {w}");
            }
        }
        out
    }
}

fn branch_report(b: &BranchAlgebra, params: &[String]) -> BranchReport {
    let (null, nonnull) = region_strings(&b.region, params);
    let components = b.components.iter().map(|(t, g)| (*t, g.iter().map(field_report).collect())).collect();
    let structure = b
        .structure
        .iter()
        .filter(|e| !e.terms.is_empty())
        .map(|e| {
            let terms = e.terms.iter().map(|(m, c)| StructureTerm { m: m + 1, c: c.to_expr(params) }).collect();
            (e.i + 1, e.j + 1, terms)
        })
        .collect();
    BranchReport {
        null,
        nonnull,
        components,
        dims: b.dims(),
        rho: Some(b.rho),
        varrho: Some(b.varrho.unwrap_or(-1)),
        rigid: Some(b.rigid),
        fundamental: Some(b.fundamental.holds()),
        fundamental_assumed: b.fundamental == Fundamental::Assumed,
        structure: Some(structure),
        warnings: b.warnings.clone(),
    }
}

fn wrap(s: &str) -> String {
    let inner = s.strip_prefix('-').unwrap_or(s);
    if inner.contains(['+', '-']) {
        format!("({s})")
    } else {
        s.to_string()
    }
}

fn field_text(f: &FieldReport) -> String {
    // z before w, then by index
    let mut keys: Vec<&String> = f.coeffs.keys().collect();
    keys.sort_by_key(|k| (!k.starts_with('z'), k[1..].parse::<usize>().unwrap_or(0)));
    let pieces: Vec<String> = keys
        .into_iter()
        .map(|k| {
            let c = &f.coeffs[k];
            match c.as_str() {
                "1" => format!("∂_{k}"),
                "-1" => format!("-∂_{k}"),
                _ => format!("{}*∂_{k}", wrap(c)),
            }
        })
        .collect();
    join_signed(pieces)
}

fn combination_text(terms: &[StructureTerm]) -> String {
    let pieces = terms
        .iter()
        .map(|t| match t.c.as_str() {
            "1" => format!("X{}", t.m),
            "-1" => format!("-X{}", t.m),
            c => format!("{}*X{}", wrap(c), t.m),
        })
        .collect();
    join_signed(pieces)
}

fn join_signed(pieces: Vec<String>) -> String {
    if pieces.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for p in pieces {
        if out.is_empty() {
            out = p;
        } else if let Some(rest) = p.strip_prefix('-') {
            let _ = write!(out, " - {rest}");
        } else {
            let _ = write!(out, " + {p}");
        }
    }
    out
}

/// Serializable comprehensive Gröbner system.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CgsReport {
    pub branches: Vec<CgsBranchReport>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CgsBranchReport {
    pub null: Vec<String>,
    pub nonnull: Vec<String>,
    pub basis: Vec<String>,
}

impl CgsReport {
    pub fn new(triples: &[CgsTriple], params: &[String], vars: &[String]) -> Self {
        let mut names: Vec<String> = vars.to_vec();
        names.extend(params.iter().cloned());
        let branches = triples
            .iter()
            .map(|t| CgsBranchReport {
                null: conds(&t.null, params),
                nonnull: conds(&t.nonnull, params),
                basis: conds(&t.basis, &names),
            })
            .collect();
        Self { branches }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let n = self.branches.len();
        for (i, b) in self.branches.iter().enumerate() {
            let _ = writeln!(out, "branch {} of {n}", i + 1);
            let _ = writeln!(out, "  null: {{{}}}", b.null.join(", "));
            let _ = writeln!(out, "  nonnull: {{{}}}", b.nonnull.join(", "));
            let _ = writeln!(out, "  basis: {{{}}}", b.basis.join(", "));
        }
        out
    }
}

/// Input document for a standalone comprehensive Gröbner system.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CgsInput {
    #[serde(default)]
    pub params: Vec<String>,
    pub vars: Vec<String>,
    /// `grevlex` (default) or `lex` on the main variables, listed from largest to smallest.
    #[serde(default = "default_order")]
    pub order: String,
    pub polys: Vec<String>,
}

fn default_order() -> String {
    "grevlex".into()
}

impl CgsInput {
    pub fn parse(text: &str) -> Result<Self> {
        let input: Self = serde_json::from_str(text)
            .map_err(Error::from)?;
        let mut seen = std::collections::HashSet::new();
        for name in input.vars.iter().chain(&input.params) {
            if !seen.insert(name) {
                return Err(Error::Usage(format!("name '{name}' is declared twice")));
            }
        }
        Ok(input)
    }

    pub fn order(&self) -> Result<crate::groebner::MonoOrder> {
        match self.order.as_str() {
            "grevlex" => Ok(crate::groebner::MonoOrder::Grevlex),
            "lex" => Ok(crate::groebner::MonoOrder::Lex),
            o => Err(Error::Usage(format!("unknown order '{o}'; expected grevlex or lex"))),
        }
    }

    /// Polynomials in the joint ring: main variables first, then parameters.
    pub fn polynomials(&self) -> Result<Vec<QPoly>> {
        let resolve = |name: &str| {
            self.vars
                .iter()
                .chain(&self.params)
                .position(|v| v == name)
                .map(QPoly::var)
        };
        self.polys
            .iter()
            .enumerate()
            .map(|(i, src)| {
                crate::expr::parse_and_eval(src, &resolve).map_err(|e| Error::Parse {
                    line: i + 1,
                    column: e.column,
                    message: format!("in polynomial {}: {}", i + 1, e.message),
                })
            })
            .collect()
    }

    pub fn solve(&self, limits: crate::groebner::CgsLimits) -> Result<CgsReport> {
        let polys = self.polynomials()?;
        let triples = crate::groebner::comprehensive_groebner_system(&polys, self.vars.len(), self.order()?, limits)?;
        Ok(CgsReport::new(&triples, &self.params, &self.vars))
    }
}
