//! Weighted homogeneous CR models `w_j − w̄_j = R_j(z, z̄, w, w̄)`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use crate::algebra::crpoly::{conj_raw, format_raw, mono_weight, weighted_degree_raw};
use crate::algebra::{CRPoly, CoeffScalar, Homogeneity, Mono, RawPoly, VarKind, VarTable};
use crate::error::{Error, Result};
use crate::expr::{parse_and_eval, ExprError};

/// On-disk model description.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub cr_dim: usize,
    pub codim: usize,
    pub weights_w: Vec<u32>,
    #[serde(default)]
    pub parameters: Vec<ParamDecl>,
    pub rhs: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub transitive: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_weight: Option<i64>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum ParamDecl {
    Name(String),
    Full {
        name: String,
        #[serde(default = "default_true")]
        real: bool,
    },
}

fn default_true() -> bool {
    true
}

impl ParamDecl {
    fn name(&self) -> &str {
        match self {
            ParamDecl::Name(n) => n,
            ParamDecl::Full { name, .. } => name,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ViolationKind {
    Inhomogeneous,
    ZeroRhs,
    NotAntiReal,
    Pluriharmonic,
    Stratification,
    BloomGrahamNormalization,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    /// 1-based equation index.
    pub equation: usize,
    pub kind: ViolationKind,
    pub monomial: Option<String>,
    pub message: String,
}

impl Violation {
    /// Warnings do not stop a run; everything else does.
    pub fn is_fatal(&self) -> bool {
        self.kind != ViolationKind::BloomGrahamNormalization
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "equation {}: {}", self.equation, self.message)?;
        if let Some(m) = &self.monomial {
            write!(f, " (term {m})")?;
        }
        Ok(())
    }
}

#[derive(Debug)]
pub struct CRModel {
    pub name: Option<String>,
    table: Arc<VarTable>,
    rhs: Vec<RawPoly>,
    pub transitive: bool,
    pub max_weight: Option<i64>,
    restriction: Mutex<Option<Arc<Restriction>>>,
}

impl Clone for CRModel {
    fn clone(&self) -> Self {
        Self {
            name: self.name.clone(),
            table: self.table.clone(),
            rhs: self.rhs.clone(),
            transitive: self.transitive,
            max_weight: self.max_weight,
            restriction: Mutex::new(None),
        }
    }
}

impl CRModel {
    pub fn new(table: Arc<VarTable>, rhs: Vec<RawPoly>) -> Result<Self> {
        if rhs.len() != table.k() {
            return Err(Error::Usage(format!("expected {} right-hand sides, found {}", table.k(), rhs.len())));
        }
        Ok(Self { name: None, table, rhs, transitive: true, max_weight: None, restriction: Mutex::new(None) })
    }

    /// Parses a JSON model file without validating it.
    pub fn parse(text: &str) -> Result<Self> {
        let file: ModelFile = serde_json::from_str(text)
            .map_err(Error::from)?;
        Self::from_file(&file, Some(text))
    }

    /// Builds a model; `source` (the raw file text) only improves error
    /// positions for malformed expressions.
    pub fn from_file(file: &ModelFile, source: Option<&str>) -> Result<Self> {
        if let Some(p) = file.parameters.iter().find(|p| matches!(p, ParamDecl::Full { real: false, .. })) {
            return Err(Error::Usage(format!(
                "parameter '{}' is declared complex; only real parameters are supported",
                p.name()
            )));
        }
        if file.weights_w.len() != file.codim {
            return Err(Error::Usage(format!(
                "codim is {} but {} w weights were given",
                file.codim,
                file.weights_w.len()
            )));
        }
        let params: Vec<String> = file.parameters.iter().map(|p| p.name().to_string()).collect();
        let table = Arc::new(VarTable::new(file.cr_dim, file.weights_w.clone(), params)?);
        let mut rhs = Vec::with_capacity(file.rhs.len());
        for (j, src) in file.rhs.iter().enumerate() {
            let p = parse_cr_expr(&table, src).map_err(|e| locate(source, src, j, e))?;
            rhs.push(p);
        }
        let mut model = Self::new(table, rhs)?;
        model.name = file.name.clone();
        model.transitive = file.transitive.unwrap_or(true);
        model.max_weight = file.max_weight;
        Ok(model)
    }

    /// Parses and rejects models with fatal violations.
    pub fn load(text: &str) -> Result<(Self, Vec<Violation>)> {
        let model = Self::parse(text)?;
        let violations = model.validate();
        let fatal: Vec<String> = violations.iter().filter(|v| v.is_fatal()).map(|v| v.to_string()).collect();
        if !fatal.is_empty() {
            return Err(Error::Validation(fatal));
        }
        Ok((model, violations))
    }

    pub fn to_file(&self) -> ModelFile {
        ModelFile {
            name: self.name.clone(),
            cr_dim: self.table.n(),
            codim: self.table.k(),
            weights_w: self.table.w_weights().to_vec(),
            parameters: self.table.params().iter().cloned().map(ParamDecl::Name).collect(),
            rhs: self.rhs.iter().map(|r| format_raw(&self.table, r)).collect(),
            transitive: Some(self.transitive),
            max_weight: self.max_weight,
        }
    }

    pub fn table(&self) -> &Arc<VarTable> {
        &self.table
    }

    pub fn rhs(&self) -> &[RawPoly] {
        &self.rhs
    }

    pub fn rhs_poly(&self, j: usize) -> CRPoly {
        CRPoly::new(self.table.clone(), self.rhs[j].clone())
    }

    pub fn rho(&self) -> i64 {
        self.table.rho()
    }

    pub fn is_parametric(&self) -> bool {
        !self.table.params().is_empty()
    }

    pub fn validate(&self) -> Vec<Violation> {
        let t = &*self.table;
        let mut out = Vec::new();
        for (j, r) in self.rhs.iter().enumerate() {
            let eq = j + 1;
            let target = t.w_weights()[j] as i64;
            match weighted_degree_raw(t, r) {
                Err(_) => out.push(Violation {
                    equation: eq,
                    kind: ViolationKind::ZeroRhs,
                    monomial: None,
                    message: "right-hand side is zero".into(),
                }),
                Ok(Homogeneity::Homogeneous(d)) if d == target => {}
                Ok(_) => {
                    let bad = r.monomials().find(|m| mono_weight(t, m) != target).unwrap();
                    out.push(Violation {
                        equation: eq,
                        kind: ViolationKind::Inhomogeneous,
                        monomial: Some(mono_text(t, bad)),
                        message: format!("inhomogeneous weight: terms must have weight {target}"),
                    });
                }
            }
            let sum = &conj_raw(t, r) + r;
            if !sum.is_zero() {
                let m = sum.monomials().next().unwrap();
                out.push(Violation {
                    equation: eq,
                    kind: ViolationKind::NotAntiReal,
                    monomial: Some(mono_text(t, m)),
                    message: "conjugate of the right-hand side is not its negative".into(),
                });
            }
            for m in r.monomials() {
                let has_bar = m.exps().iter().enumerate().any(|(v, &e)| e > 0 && t.is_barred(v));
                let has_hol = m.exps().iter().enumerate().any(|(v, &e)| e > 0 && !t.is_barred(v));
                if !has_bar || !has_hol {
                    out.push(Violation {
                        equation: eq,
                        kind: ViolationKind::Pluriharmonic,
                        monomial: Some(mono_text(t, m)),
                        message: "pluriharmonic term".into(),
                    });
                }
            }
            for m in r.monomials() {
                let offending = m.exps().iter().enumerate().find(|(v, &e)| {
                    e > 0 && matches!(t.kind(*v), VarKind::W | VarKind::BarW) && t.weight(*v) >= target
                });
                if let Some((v, _)) = offending {
                    out.push(Violation {
                        equation: eq,
                        kind: ViolationKind::Stratification,
                        monomial: Some(mono_text(t, m)),
                        message: format!("involves {} whose weight is not below {}", t.name(v), target),
                    });
                    break;
                }
            }
        }
        out.extend(self.bloom_graham_warnings());
        out
    }

    /// Looks for terms of `R_i` of the form `c·u^α·R_j` (`j < i`), where
    /// `u_l` stands for `(w_l + w̄_l)/2`.
    fn bloom_graham_warnings(&self) -> Vec<Violation> {
        let t = &*self.table;
        let (n, k) = (t.n(), t.k());
        // collapse w̄_l onto w_l so that w_l + w̄_l becomes 2·u_l
        let collapse = |p: &RawPoly| {
            p.map_monos(|m| m.permuted(|v| if t.kind(v) == VarKind::BarW { v - k } else { v }))
        };
        let collapsed: Vec<RawPoly> = self.rhs.iter().map(collapse).collect();
        let mut out = Vec::new();
        for i in 0..k {
            let wi = t.w_weights()[i] as i64;
            for j in 0..i {
                let wj = t.w_weights()[j] as i64;
                let rj = &collapsed[j];
                if rj.is_zero() || wj > wi {
                    continue;
                }
                let us: Vec<usize> = (0..k).map(|l| t.w(l)).collect();
                let shifts = crate::algebra::enumerate_weighted_monomials(t, wi - wj, &us).unwrap_or_default();
                for ua in shifts {
                    if ua.is_one() && wi != wj {
                        continue;
                    }
                    let shifted = rj.mul_mono(&ua);
                    if let Some(c) = proportional_part(&collapsed[i], &shifted) {
                        let _ = c;
                        let label = if ua.is_one() {
                            format!("a multiple of R{}", j + 1)
                        } else {
                            format!("a multiple of u^α·R{} with u^α = {}", j + 1, mono_text(t, &ua).replace('w', "u"))
                        };
                        out.push(Violation {
                            equation: i + 1,
                            kind: ViolationKind::BloomGrahamNormalization,
                            monomial: None,
                            message: format!("not in Bloom–Graham normal form: contains {label}"),
                        });
                    }
                }
            }
        }
        let _ = n;
        out
    }

    /// The shared substitution data for [`CRModel::restrict`].
    pub fn restriction(&self) -> Result<Arc<Restriction>> {
        let mut guard = self.restriction.lock().unwrap();
        if let Some(r) = guard.as_ref() {
            return Ok(r.clone());
        }
        let r = Arc::new(Restriction::build(&self.table, &self.rhs)?);
        *guard = Some(r.clone());
        Ok(r)
    }

    /// Eliminates every `w̄_l` through `w̄_l = w_l − R_l`.
    pub fn restrict(&self, p: &CRPoly) -> Result<CRPoly> {
        let r = self.restriction()?;
        Ok(CRPoly::new(self.table.clone(), r.apply(p.raw())))
    }
}

/// Scalar `c` with every term of `part` appearing in `whole` as `c` times
/// the corresponding coefficient, if any.
fn proportional_part(whole: &RawPoly, part: &RawPoly) -> Option<CoeffScalar> {
    let (m0, c0) = part.terms().next()?;
    let w0 = whole.coeff(m0)?;
    // only constant ratios are meaningful when parameters are involved
    let ratio = scalar_ratio(w0, c0)?;
    for (m, c) in part.terms() {
        let w = whole.coeff(m)?;
        if &(c * &ratio) != w {
            return None;
        }
    }
    Some(ratio)
}

fn scalar_ratio(a: &CoeffScalar, b: &CoeffScalar) -> Option<CoeffScalar> {
    if !b.is_constant() {
        return None;
    }
    let inv = b.constant_term().inv()?;
    Some(a.scale(&inv))
}

fn mono_text(t: &VarTable, m: &Mono) -> String {
    crate::algebra::scalar::mono_expr(m, |v| t.name(v))
}

/// Parses an expression over a model's variables and parameters.
pub fn parse_cr_expr(table: &Arc<VarTable>, src: &str) -> std::result::Result<RawPoly, ExprError> {
    parse_and_eval(src, &|name: &str| {
        if name == "I" {
            return Some(RawPoly::constant(CoeffScalar::imag_unit()));
        }
        if let Some(v) = table.lookup(name) {
            return Some(RawPoly::var(v));
        }
        table.param_index(name).map(|i| RawPoly::constant(CoeffScalar::var(i)))
    })
}

/// Maps an expression-relative column to a file position when possible.
fn locate(source: Option<&str>, expr: &str, index: usize, e: ExprError) -> Error {
    let message = format!("in rhs[{index}]: {}", e.message);
    if let Some(text) = source {
        let needle = format!("\"{expr}\"");
        if let Some(byte) = text.find(&needle) {
            let before = &text[..byte];
            let line = before.matches('\n').count() + 1;
            let line_start = before.rfind('\n').map(|p| p + 1).unwrap_or(0);
            let column = text[line_start..byte].chars().count() + 1 + e.column;
            return Error::Parse { line, column, message };
        }
    }
    Error::Parse { line: 1, column: e.column, message }
}

/// Substitution data for eliminating barred `w` variables.
#[derive(Debug)]
pub struct Restriction {
    table: Arc<VarTable>,
    /// Value of `w̄_l` as a polynomial in `z, z̄, w`.
    values: Vec<RawPoly>,
    products: Mutex<HashMap<Mono, Arc<RawPoly>>>,
}

impl Restriction {
    fn build(table: &Arc<VarTable>, rhs: &[RawPoly]) -> Result<Self> {
        let k = table.k();
        let mut order: Vec<usize> = (0..k).collect();
        order.sort_by_key(|&l| table.w_weights()[l]);
        let mut r = Self { table: table.clone(), values: vec![RawPoly::zero(); k], products: Mutex::new(HashMap::new()) };
        let mut done = vec![false; k];
        for &l in &order {
            let wl = table.w_weights()[l];
            for m in rhs[l].monomials() {
                for (v, &e) in m.exps().iter().enumerate() {
                    if e > 0 && table.kind(v) == VarKind::BarW {
                        let src = table.offset(v);
                        if !done[src] || table.w_weights()[src] >= wl {
                            return Err(Error::Validation(vec![format!(
                                "equation {}: stratification violated by {}; elimination would not terminate",
                                l + 1,
                                table.name(v)
                            )]));
                        }
                    }
                }
            }
            let restricted = r.apply(&rhs[l]);
            r.values[l] = &RawPoly::var(table.w(l)) - &restricted;
            done[l] = true;
        }
        r.products.lock().unwrap().clear();
        Ok(r)
    }

    pub fn value(&self, l: usize) -> &RawPoly {
        &self.values[l]
    }

    /// Product `∏ value(l)^{e_l}` for the barred part `bar` of a monomial.
    fn product(&self, bar: &Mono) -> Arc<RawPoly> {
        if let Some(p) = self.products.lock().unwrap().get(bar) {
            return p.clone();
        }
        let t = &self.table;
        let mut acc = RawPoly::one();
        for (v, &e) in bar.exps().iter().enumerate() {
            if e > 0 {
                acc = &acc * &self.values[t.offset(v)].pow(e as u32);
            }
        }
        let acc = Arc::new(acc);
        self.products.lock().unwrap().insert(bar.clone(), acc.clone());
        acc
    }

    pub fn apply(&self, p: &RawPoly) -> RawPoly {
        let t = &self.table;
        let first_bw = t.bw(0);
        let mut groups: BTreeMap<Mono, RawPoly> = BTreeMap::new();
        for (m, c) in p.terms() {
            let e = m.exps();
            if e.len() <= first_bw {
                groups.entry(Mono::one()).or_default().add_term(m.clone(), c);
                continue;
            }
            let mut bar = vec![0u16; e.len()];
            bar[first_bw..].copy_from_slice(&e[first_bw..]);
            let rest = Mono::from_exps(e[..first_bw].to_vec());
            groups.entry(Mono::from_exps(bar)).or_default().add_term(rest, c);
        }
        let mut out = RawPoly::zero();
        for (bar, rest) in groups {
            if bar.is_one() {
                out.add_assign_ref(&rest);
            } else {
                out.add_assign_ref(&(&rest * &*self.product(&bar)));
            }
        }
        out
    }
}
