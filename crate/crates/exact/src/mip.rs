//! Big-M mixed integer model of the tardy-count problem and its CPLEX LP
//! text form.
//!
//! Variables: `t_j_i` (stamp of visit `(j, i)`), per conflict pair
//! `P_..`, `N_..` and the binary `b_..` (suffix `j1_i1_j2_i2`), and per
//! vehicle with a finite soft deadline `X_j` and the binary `l_j`. Since
//! `t_a - t_b = P - N`, `b = 1` means the second visit of the pair, `b`,
//! passes first; `b = 0` means `a` passes first.

use std::fmt::Write as _;

use thiserror::Error;
use vsp_core::{Instance, Tick, Visit};

use crate::search::{conflict_pairs, ExactError};

#[derive(Debug, Clone, PartialEq)]
pub struct BigM {
    pub horizon: Tick,
    /// One per conflict pair, in [`conflict_pairs`] order.
    pub pairs: Vec<Tick>,
    /// `None` for vehicles without a soft deadline.
    pub vehicles: Vec<Option<Tick>>,
}

/// Horizon `H` is the caller's, else the largest hard deadline if all are
/// finite. Then `|t_a - t_b| <= H - min(rho_a, rho_b)` and
/// `|d_j - t_j^last| <= max(H, d_j) - rho_j`, so
/// `M = H - min(rho) + max s` and `M_j = max(H, d_j) - rho_j` are never
/// binding.
pub fn big_m_values(instance: &Instance, horizon: Option<Tick>) -> Result<BigM, ExactError> {
    let n = instance.vehicle_count();
    let horizon = match horizon {
        Some(h) => h,
        None => (0..n).map(|j| instance.d_hard(j)).collect::<Option<Vec<_>>>().ok_or(ExactError::NoHorizon)?
            .into_iter()
            .max()
            .unwrap_or(0),
    };
    let max_s = instance.separations().max_gap();
    let pairs = conflict_pairs(instance)
        .iter()
        .map(|p| horizon - instance.rho(p.a.vehicle).min(instance.rho(p.b.vehicle)) + max_s)
        .collect();
    let vehicles = (0..n).map(|j| instance.d_soft(j).map(|d| horizon.max(d) - instance.rho(j))).collect();
    Ok(BigM { horizon, pairs, vehicles })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

impl Sense {
    fn symbol(self) -> &'static str {
        match self {
            Sense::Le => "<=",
            Sense::Ge => ">=",
            Sense::Eq => "=",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub name: String,
    pub terms: Vec<(String, f64)>,
    pub sense: Sense,
    pub rhs: f64,
}

/// Continuous variable with bounds; `None` is unbounded.
#[derive(Debug, Clone, PartialEq)]
pub struct Continuous {
    pub name: String,
    pub lower: Option<f64>,
    pub upper: Option<f64>,
}

/// A minimization model.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct MipModel {
    pub objective: Vec<(String, f64)>,
    pub rows: Vec<Row>,
    pub continuous: Vec<Continuous>,
    pub binaries: Vec<String>,
}

impl MipModel {
    pub fn row(&self, name: &str) -> Option<&Row> {
        self.rows.iter().find(|r| r.name == name)
    }
}

pub fn stamp_name(v: Visit) -> String {
    format!("t_{}_{}", v.vehicle, v.step)
}

fn pair_suffix(a: Visit, b: Visit) -> String {
    format!("{}_{}_{}_{}", a.vehicle, a.step, b.vehicle, b.step)
}

fn term(name: &str, c: Tick) -> (String, f64) {
    (name.to_owned(), c as f64)
}

fn row(name: String, terms: Vec<(String, f64)>, sense: Sense, rhs: Tick) -> Row {
    Row { name, terms, sense, rhs: rhs as f64 }
}

/// The model for `instance`, with completion times capped at `horizon` when
/// given.
pub fn build_mip(instance: &Instance, horizon: Option<Tick>) -> Result<MipModel, ExactError> {
    let big_m = big_m_values(instance, horizon)?;
    let mut model = MipModel::default();
    let nonneg = |name: String| Continuous { name, lower: Some(0.0), upper: None };

    for (j, walk) in instance.walks().iter().enumerate() {
        for i in 0..walk.len() {
            model.continuous.push(Continuous { name: stamp_name(Visit::new(j, i)), lower: None, upper: None });
        }
        let t = |i: usize| stamp_name(Visit::new(j, i));
        model.rows.push(row(format!("req_{j}"), vec![term(&t(0), 1)], Sense::Ge, instance.rho(j)));
        for i in 0..walk.link_count() {
            let link = vec![term(&t(i + 1), 1), term(&t(i), -1)];
            model.rows.push(row(format!("tmin_{j}_{i}"), link.clone(), Sense::Ge, walk.tau_min[i]));
            if let Some(max) = walk.tau_max[i] {
                model.rows.push(row(format!("tmax_{j}_{i}"), link, Sense::Le, max));
            }
        }
        let cap = match (instance.d_hard(j), horizon) {
            (Some(d), Some(h)) => Some(d.min(h)),
            (d, h) => d.or(h),
        };
        if let Some(cap) = cap {
            model.rows.push(row(format!("hard_{j}"), vec![term(&t(walk.len() - 1), 1)], Sense::Le, cap));
        }
    }

    for (p, &m) in conflict_pairs(instance).iter().zip(&big_m.pairs) {
        let suffix = pair_suffix(p.a, p.b);
        let (pv, nv, bv) = (format!("P_{suffix}"), format!("N_{suffix}"), format!("b_{suffix}"));
        model.continuous.push(nonneg(pv.clone()));
        model.continuous.push(nonneg(nv.clone()));
        model.binaries.push(bv.clone());
        model.rows.push(row(
            format!("sep5_{suffix}"),
            vec![term(&stamp_name(p.a), 1), term(&stamp_name(p.b), -1), term(&pv, -1), term(&nv, 1)],
            Sense::Eq,
            0,
        ));
        model.rows.push(row(format!("sep6l_{suffix}"), vec![term(&pv, 1), term(&bv, -p.s)], Sense::Ge, 0));
        model.rows.push(row(format!("sep6u_{suffix}"), vec![term(&pv, 1), term(&bv, -m)], Sense::Le, 0));
        model.rows.push(row(format!("sep7l_{suffix}"), vec![term(&nv, 1), term(&bv, p.s)], Sense::Ge, p.s));
        model.rows.push(row(format!("sep7u_{suffix}"), vec![term(&nv, 1), term(&bv, m)], Sense::Le, m));
    }

    let weighted = instance.objective().is_weighted();
    for j in 0..instance.vehicle_count() {
        let (Some(d), Some(mj)) = (instance.d_soft(j), big_m.vehicles[j]) else { continue };
        let (x, l) = (format!("X_{j}"), format!("l_{j}"));
        let last = stamp_name(Visit::new(j, instance.walk(j).len() - 1));
        model.continuous.push(nonneg(x.clone()));
        model.binaries.push(l.clone());
        model.objective.push((l.clone(), if weighted { instance.weight(j) } else { 1.0 }));
        model.rows.push(row(format!("late8_{j}"), vec![term(&x, 1), term(&last, 1)], Sense::Ge, d));
        model.rows.push(row(format!("late9_{j}"), vec![term(&x, 1)], Sense::Ge, 0));
        model.rows.push(row(format!("late10_{j}"), vec![term(&x, 1), term(&l, mj)], Sense::Le, mj));
        model.rows.push(row(format!("late11_{j}"), vec![term(&x, 1), term(&last, 1), term(&l, -mj)], Sense::Le, d));
    }
    Ok(model)
}

const TERMS_PER_LINE: usize = 8;

fn write_terms(out: &mut String, terms: &[(String, f64)]) {
    for (k, (name, c)) in terms.iter().enumerate() {
        if k > 0 && k % TERMS_PER_LINE == 0 {
            out.push_str("\n   ");
        }
        let sign = if c.is_sign_negative() { '-' } else { '+' };
        let _ = write!(out, " {sign} {} {name}", c.abs());
    }
}

fn bound(value: Option<f64>, infinity: &str) -> String {
    value.map_or_else(|| infinity.to_owned(), |v| v.to_string())
}

/// CPLEX LP text of `model`.
pub fn write_lp(model: &MipModel) -> String {
    let mut out = String::from("Minimize\n obj:");
    write_terms(&mut out, &model.objective);
    out.push_str("\nSubject To\n");
    for r in &model.rows {
        let _ = write!(out, " {}:", r.name);
        write_terms(&mut out, &r.terms);
        let _ = writeln!(out, " {} {}", r.sense.symbol(), r.rhs);
    }
    out.push_str("Bounds\n");
    for v in &model.continuous {
        if v.lower.is_none() && v.upper.is_none() {
            let _ = writeln!(out, " {} free", v.name);
        } else {
            let _ = writeln!(out, " {} <= {} <= {}", bound(v.lower, "-inf"), v.name, bound(v.upper, "+inf"));
        }
    }
    out.push_str("Binaries\n");
    for chunk in model.binaries.chunks(TERMS_PER_LINE) {
        let _ = writeln!(out, " {}", chunk.join(" "));
    }
    out.push_str("End\n");
    out
}

/// Model of `instance` as CPLEX LP text.
pub fn export_mip(instance: &Instance, horizon: Option<Tick>) -> Result<String, ExactError> {
    Ok(write_lp(&build_mip(instance, horizon)?))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("LP parse error at token {position}: {message}")]
pub struct LpParseError {
    pub position: usize,
    pub message: String,
}

#[derive(Clone, Copy, PartialEq)]
enum Section {
    Start,
    Objective,
    Constraints,
    Bounds,
    Binaries,
    End,
}

struct Parser<'a> {
    tokens: Vec<&'a str>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn error<T>(&self, message: impl Into<String>) -> Result<T, LpParseError> {
        Err(LpParseError { position: self.pos, message: message.into() })
    }

    fn peek(&self) -> Option<&'a str> {
        self.tokens.get(self.pos).copied()
    }

    fn next(&mut self) -> Result<&'a str, LpParseError> {
        let token = self.peek();
        self.pos += 1;
        token.map_or_else(|| self.error("unexpected end of input"), Ok)
    }

    fn number(&mut self) -> Result<f64, LpParseError> {
        let token = self.next()?;
        token.parse().map_err(|_| LpParseError { position: self.pos - 1, message: format!("expected a number, found `{token}`") })
    }

    fn at_section(&self) -> bool {
        matches!(self.peek(), Some("Subject" | "Bounds" | "Binaries" | "End") | None)
    }

    fn at_label(&self) -> bool {
        self.peek().is_some_and(|t| t.ends_with(':'))
    }

    /// `(+|-) coefficient name` repeated.
    fn terms(&mut self) -> Result<Vec<(String, f64)>, LpParseError> {
        let mut terms = Vec::new();
        while let Some(sign @ ("+" | "-")) = self.peek() {
            self.pos += 1;
            let c = self.number()?;
            let name = self.next()?;
            terms.push((name.to_owned(), if sign == "-" { -c } else { c }));
        }
        Ok(terms)
    }
}

/// Reads LP text produced by [`write_lp`].
pub fn parse_lp(text: &str) -> Result<MipModel, LpParseError> {
    let mut p = Parser { tokens: text.split_whitespace().collect(), pos: 0 };
    let mut model = MipModel::default();
    let mut section = Section::Start;
    while let Some(token) = p.peek() {
        match token {
            "Minimize" if section == Section::Start => {
                p.pos += 1;
                section = Section::Objective;
                if p.next()? != "obj:" {
                    return p.error("expected `obj:`");
                }
                model.objective = p.terms()?;
            }
            "Subject" if section == Section::Objective => {
                p.pos += 1;
                if p.next()? != "To" {
                    return p.error("expected `Subject To`");
                }
                section = Section::Constraints;
            }
            "Bounds" if section == Section::Constraints => {
                p.pos += 1;
                section = Section::Bounds;
            }
            "Binaries" if section == Section::Bounds => {
                p.pos += 1;
                section = Section::Binaries;
            }
            "End" if section == Section::Binaries => {
                p.pos += 1;
                section = Section::End;
            }
            _ => match section {
                Section::Constraints if p.at_label() => {
                    let name = p.next()?.trim_end_matches(':').to_owned();
                    let terms = p.terms()?;
                    let sense = match p.next()? {
                        "<=" => Sense::Le,
                        ">=" => Sense::Ge,
                        "=" => Sense::Eq,
                        other => return p.error(format!("expected a comparison, found `{other}`")),
                    };
                    let rhs = p.number()?;
                    model.rows.push(Row { name, terms, sense, rhs });
                }
                Section::Bounds => {
                    let first = p.next()?;
                    if p.peek() == Some("free") {
                        p.pos += 1;
                        model.continuous.push(Continuous { name: first.to_owned(), lower: None, upper: None });
                        continue;
                    }
                    let lower: f64 = first.parse().or_else(|_| p.error(format!("expected a bound, found `{first}`")))?;
                    if p.next()? != "<=" {
                        return p.error("expected `<=`");
                    }
                    let name = p.next()?.to_owned();
                    if p.next()? != "<=" {
                        return p.error("expected `<=`");
                    }
                    let upper = p.number()?;
                    let finite = |v: f64| v.is_finite().then_some(v);
                    model.continuous.push(Continuous { name, lower: finite(lower), upper: finite(upper) });
                }
                Section::Binaries if !p.at_section() => model.binaries.push(p.next()?.to_owned()),
                _ => return p.error(format!("unexpected `{token}`")),
            },
        }
    }
    if section != Section::End {
        return p.error("missing `End`");
    }
    Ok(model)
}
