//! The `.alg` input format: a small line-oriented key-value file with
//! `[section]` headers describing a quantum-algebra presentation. The
//! parser fixes one conductor per document (the lcm of every root order
//! and zeta literal), builds the session variable table, and evaluates
//! every polynomial entry once.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_integer::Integer;
use thiserror::Error;

use crate::algebra::{AlgebraError, Mode, Presentation, PresentationBuilder};
use crate::arith::UnityRoot;
use crate::clifford::GenericCliffordSpec;
use crate::expr::{self, EvalContext, ExprError, Pos};
use crate::poly::{CoefPoly, PolyMatrix, VarDef, VarRole, VarTable};
use crate::Limits;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum InputError {
    #[error("{pos}: {message}")]
    Syntax { pos: Pos, message: String },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

impl From<ExprError> for InputError {
    fn from(e: ExprError) -> Self {
        InputError::Syntax {
            pos: e.pos,
            message: e.message,
        }
    }
}

fn syntax<T>(pos: Pos, message: impl Into<String>) -> Result<T, InputError> {
    Err(InputError::Syntax {
        pos,
        message: message.into(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlgKind {
    Skew,
    Weyl,
    Clifford,
    GenericClifford,
    QWeyl,
}

impl AlgKind {
    pub fn name(&self) -> &'static str {
        match self {
            AlgKind::Skew => "skew",
            AlgKind::Weyl => "weyl",
            AlgKind::Clifford => "clifford",
            AlgKind::GenericClifford => "generic-clifford",
            AlgKind::QWeyl => "q-weyl",
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DocOptions {
    pub rank_cap: Option<u64>,
    pub max_rounds: Option<u32>,
    pub conductor: Option<u64>,
    pub degree_cap: Option<u32>,
}

/// A parsed and fully evaluated input document.
#[derive(Debug, Clone)]
pub struct Document {
    pub kind: AlgKind,
    pub n: usize,
    pub params: Vec<String>,
    pub names: Vec<String>,
    pub options: DocOptions,
    pub conductor: u64,
    pub table: Arc<VarTable>,
    /// Full skew-normalized q grid (n x n); all -1 for clifford kinds.
    pub q: Vec<Vec<UnityRoot>>,
    /// Symmetric a grid; for clifford kinds these are the doubled
    /// off-diagonal bilinear entries.
    pub a: Vec<Vec<CoefPoly>>,
    /// Clifford: explicit square values (entries absent default to the
    /// adjoined symbolic square variable).
    pub squares: Vec<Option<CoefPoly>>,
    /// q-weyl power bounds (x^n = c1, y^n = c2) when present.
    pub powers: Option<Vec<CoefPoly>>,
    /// generic-clifford: excluded strict pairs (0-based).
    pub excluded: Vec<(usize, usize)>,
}

struct RawEntry {
    key: String,
    value: String,
    key_pos: Pos,
    value_pos: Pos,
}

struct RawDoc {
    sections: BTreeMap<String, Vec<RawEntry>>,
    order: Vec<String>,
}

fn scan(text: &str) -> Result<RawDoc, InputError> {
    let mut sections: BTreeMap<String, Vec<RawEntry>> = BTreeMap::new();
    let mut order = vec![String::new()];
    sections.insert(String::new(), Vec::new());
    let mut current = String::new();
    for (lineno, raw_line) in text.lines().enumerate() {
        let line_num = lineno + 1;
        let line = match raw_line.find('#') {
            Some(i) => &raw_line[..i],
            None => raw_line,
        };
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let indent = line.len() - line.trim_start().len();
        let pos = Pos {
            line: line_num,
            col: indent + 1,
        };
        if let Some(rest) = trimmed.strip_prefix('[') {
            let name = match rest.strip_suffix(']') {
                Some(n) => n.trim().to_string(),
                None => return syntax(pos, "unterminated section header"),
            };
            if !sections.contains_key(&name) {
                sections.insert(name.clone(), Vec::new());
                order.push(name.clone());
            }
            current = name;
            continue;
        }
        let eq = match line.find('=') {
            Some(i) => i,
            None => return syntax(pos, "expected `key = value`"),
        };
        let key = line[..eq].trim().to_string();
        if key.is_empty() {
            return syntax(pos, "missing key before `=`");
        }
        let value_str = line[eq + 1..].trim();
        if value_str.is_empty() {
            return syntax(
                Pos {
                    line: line_num,
                    col: eq + 2,
                },
                "missing value",
            );
        }
        let value_col = line[eq + 1..]
            .find(|c: char| !c.is_whitespace())
            .map(|off| eq + 2 + off)
            .unwrap_or(eq + 2);
        sections.get_mut(&current).unwrap().push(RawEntry {
            key,
            value: value_str.to_string(),
            key_pos: pos,
            value_pos: Pos {
                line: line_num,
                col: value_col,
            },
        });
    }
    Ok(RawDoc { sections, order })
}

fn get_unique<'a>(entries: &'a [RawEntry], key: &str) -> Result<Option<&'a RawEntry>, InputError> {
    let mut found = None;
    for e in entries {
        if e.key == key {
            if found.is_some() {
                return syntax(e.key_pos, format!("duplicate key `{key}`"));
            }
            found = Some(e);
        }
    }
    Ok(found)
}

fn parse_u64(e: &RawEntry) -> Result<u64, InputError> {
    e.value.parse::<u64>().map_err(|_| InputError::Syntax {
        pos: e.value_pos,
        message: format!("expected a positive integer, found `{}`", e.value),
    })
}

fn parse_name_list(e: &RawEntry) -> Result<Vec<String>, InputError> {
    let mut out = Vec::new();
    for part in e.value.split(',') {
        let name = part.trim();
        if name.is_empty()
            || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
            || !name.chars().next().unwrap().is_ascii_alphabetic()
        {
            return syntax(e.value_pos, format!("invalid identifier `{name}`"));
        }
        out.push(name.to_string());
    }
    Ok(out)
}

/// Parses a root-of-unity literal: `1`, `-1`, or a reduced fraction `k/d`.
fn parse_root(value: &str, pos: Pos) -> Result<UnityRoot, InputError> {
    let v = value.trim();
    if v == "1" {
        return Ok(UnityRoot::one());
    }
    if v == "-1" {
        return Ok(UnityRoot::minus_one());
    }
    let (num, den) = match v.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => {
            return syntax(
                pos,
                format!("expected a root of unity `k/d`, `1` or `-1`, found `{v}`"),
            )
        }
    };
    let k: i64 = match num.parse() {
        Ok(k) => k,
        Err(_) => return syntax(pos, format!("invalid numerator `{num}`")),
    };
    let d: u64 = match den.parse() {
        Ok(d) => d,
        Err(_) => return syntax(pos, format!("invalid denominator `{den}`")),
    };
    UnityRoot::from_reduced_fraction(k, d).map_err(|_| InputError::Syntax {
        pos,
        message: format!("fraction not reduced: {k}/{d}"),
    })
}

/// Splits an index pair out of a key like `q12` or `q1_2` (1-based).
fn parse_pair(key: &str, prefix: &str, n: usize, pos: Pos) -> Result<(usize, usize), InputError> {
    let rest = &key[prefix.len()..];
    let (i, j) = if let Some((a, b)) = rest.split_once('_') {
        (a.parse::<usize>().ok(), b.parse::<usize>().ok())
    } else if rest.len() == 2 {
        let bytes = rest.as_bytes();
        (
            (bytes[0] as char).to_digit(10).map(|d| d as usize),
            (bytes[1] as char).to_digit(10).map(|d| d as usize),
        )
    } else {
        (None, None)
    };
    match (i, j) {
        (Some(i), Some(j)) if i >= 1 && j >= 1 && i <= n && j <= n && i != j => Ok((i - 1, j - 1)),
        _ => syntax(
            pos,
            format!("expected `{prefix}IJ` with distinct 1-based indices up to {n}"),
        ),
    }
}

fn parse_index(key: &str, prefix: &str, n: usize, pos: Pos) -> Result<usize, InputError> {
    let rest = &key[prefix.len()..];
    match rest.parse::<usize>() {
        Ok(i) if i >= 1 && i <= n => Ok(i - 1),
        _ => syntax(pos, format!("expected `{prefix}I` with 1 <= I <= {n}")),
    }
}

fn diagonal_index(key: &str, n: usize) -> Option<usize> {
    // Keys like b11, b22 denote diagonal bilinear entries.
    let rest = &key[1..];
    let (a, b) = if let Some((a, b)) = rest.split_once('_') {
        (a.parse::<usize>().ok()?, b.parse::<usize>().ok()?)
    } else if rest.len() == 2 {
        let bytes = rest.as_bytes();
        (
            (bytes[0] as char).to_digit(10)? as usize,
            (bytes[1] as char).to_digit(10)? as usize,
        )
    } else {
        return None;
    };
    if a == b && a >= 1 && a <= n {
        Some(a - 1)
    } else {
        None
    }
}

impl Document {
    pub fn parse(text: &str) -> Result<Document, InputError> {
        let raw = scan(text)?;
        for name in &raw.order {
            match name.as_str() {
                "" | "options" | "q" | "a" | "bilinear" | "squares" | "powers" | "generic" => {}
                other => {
                    return syntax(
                        Pos { line: 1, col: 1 },
                        format!("unknown section `[{other}]`"),
                    )
                }
            }
        }
        let header = raw.sections.get("").unwrap();
        let origin = Pos { line: 1, col: 1 };

        match get_unique(header, "format")? {
            Some(e) if e.value.trim() == "1" => {}
            Some(e) => return syntax(e.value_pos, "unsupported format version"),
            None => return syntax(origin, "missing `format = 1` header"),
        }
        let kind = match get_unique(header, "kind")? {
            Some(e) => match e.value.trim() {
                "skew" => AlgKind::Skew,
                "weyl" => AlgKind::Weyl,
                "clifford" => AlgKind::Clifford,
                "generic-clifford" => AlgKind::GenericClifford,
                "q-weyl" => AlgKind::QWeyl,
                other => return syntax(e.value_pos, format!("unknown algebra kind `{other}`")),
            },
            None => return syntax(origin, "missing `kind`"),
        };
        let n_entry = get_unique(header, "n")?;
        let params = match get_unique(header, "params")? {
            Some(e) => parse_name_list(e)?,
            None => Vec::new(),
        };

        let mut options = DocOptions::default();
        if let Some(entries) = raw.sections.get("options") {
            for e in entries {
                match e.key.as_str() {
                    "rank_cap" => options.rank_cap = Some(parse_u64(e)?),
                    "max_rounds" => options.max_rounds = Some(parse_u64(e)? as u32),
                    "conductor" => options.conductor = Some(parse_u64(e)?),
                    "degree_cap" => options.degree_cap = Some(parse_u64(e)? as u32),
                    other => return syntax(e.key_pos, format!("unknown option `{other}`")),
                }
            }
        }

        let n = match (kind, n_entry) {
            // For q-weyl documents `n` is the order of q, validated below.
            (AlgKind::QWeyl, _) => 2,
            (_, Some(e)) => parse_u64(e)? as usize,
            (_, None) => return syntax(origin, "missing `n`"),
        };
        if n == 0 {
            return syntax(origin, "n must be positive");
        }
        let names = match get_unique(header, "names")? {
            Some(e) => {
                let list = parse_name_list(e)?;
                if list.len() != n {
                    return syntax(e.value_pos, format!("expected {n} generator names"));
                }
                list
            }
            None => match kind {
                AlgKind::QWeyl => vec!["x".into(), "y".into()],
                _ => (1..=n).map(|i| format!("x{i}")).collect(),
            },
        };
        for p in &params {
            if names.contains(p) {
                return syntax(
                    origin,
                    format!("parameter `{p}` collides with a generator name"),
                );
            }
        }

        let mut q = vec![vec![UnityRoot::one(); n]; n];
        match kind {
            AlgKind::Skew | AlgKind::Weyl => {
                if let Some(entries) = raw.sections.get("q") {
                    for e in entries {
                        if !e.key.starts_with('q') {
                            return syntax(e.key_pos, "expected a `qIJ` key");
                        }
                        let (i, j) = parse_pair(&e.key, "q", n, e.key_pos)?;
                        if i >= j {
                            return syntax(
                                e.key_pos,
                                "q entries are given above the diagonal (i < j)",
                            );
                        }
                        if !q[i][j].is_one() {
                            return syntax(e.key_pos, format!("duplicate key `{}`", e.key));
                        }
                        let root = parse_root(&e.value, e.value_pos)?;
                        q[i][j] = root;
                        q[j][i] = root.inverse();
                    }
                }
            }
            AlgKind::QWeyl => {
                let qe = match get_unique(header, "q")? {
                    Some(e) => e,
                    None => return syntax(origin, "q-weyl documents need a top-level `q`"),
                };
                let root = parse_root(&qe.value, qe.value_pos)?;
                if let Some(e) = n_entry {
                    let declared = parse_u64(e)?;
                    if declared != root.order() {
                        return syntax(
                            e.value_pos,
                            format!("declared n = {declared} but q has order {}", root.order()),
                        );
                    }
                }
                q[0][1] = root;
                q[1][0] = root.inverse();
            }
            AlgKind::Clifford | AlgKind::GenericClifford => {
                for i in 0..n {
                    for j in 0..n {
                        if i != j {
                            q[i][j] = UnityRoot::minus_one();
                        }
                    }
                }
            }
        }

        // Conductor: lcm of root orders and zeta literals, plus override.
        let mut conductor: u64 = if matches!(kind, AlgKind::Clifford | AlgKind::GenericClifford) {
            2
        } else {
            1
        };
        for row in &q {
            for root in row {
                conductor = conductor.lcm(&root.order());
            }
        }
        let mut poly_entries: Vec<(&str, &RawEntry)> = Vec::new();
        for section in ["a", "bilinear", "squares", "powers"] {
            if let Some(entries) = raw.sections.get(section) {
                for e in entries {
                    poly_entries.push((section, e));
                }
            }
        }
        if kind == AlgKind::QWeyl {
            if let Some(e) = get_unique(header, "a")? {
                poly_entries.push(("header-a", e));
            }
        }
        for (_, e) in &poly_entries {
            let ast = expr::parse_expression_at(&e.value, e.value_pos)?;
            for z in expr::zeta_orders(&ast) {
                if z > 0 {
                    conductor = conductor.lcm(&(z as u64));
                }
            }
        }
        if let Some(over) = options.conductor {
            if over % conductor != 0 {
                return syntax(
                    origin,
                    format!(
                        "conductor override {over} is not a multiple of the required {conductor}"
                    ),
                );
            }
            conductor = over;
        }
        let conductor_cap = Limits::default().with_env_overrides().conductor_cap;
        if conductor > conductor_cap {
            return syntax(
                origin,
                format!("conductor {conductor} exceeds the configured cap {conductor_cap}"),
            );
        }

        let mut squares: Vec<Option<CoefPoly>> = vec![None; n];
        let mut excluded: Vec<(usize, usize)> = Vec::new();
        let table = match kind {
            AlgKind::Skew | AlgKind::Weyl | AlgKind::QWeyl => {
                VarTable::parameters(&params.iter().map(|s| s.as_str()).collect::<Vec<_>>())
            }
            AlgKind::Clifford => {
                // Generators with an explicit square keep no symbolic one.
                let mut explicit = vec![false; n];
                if let Some(entries) = raw.sections.get("squares") {
                    for e in entries {
                        let i = parse_index(&e.key, "c", n, e.key_pos)?;
                        explicit[i] = true;
                    }
                }
                if let Some(entries) = raw.sections.get("bilinear") {
                    for e in entries {
                        if let Some(i) = diagonal_index(&e.key, n) {
                            explicit[i] = true;
                        }
                    }
                }
                let mut defs: Vec<VarDef> = params
                    .iter()
                    .map(|p| VarDef {
                        name: p.clone(),
                        role: VarRole::Parameter,
                    })
                    .collect();
                for (i, name) in names.iter().enumerate() {
                    if !explicit[i] {
                        defs.push(VarDef {
                            name: name.clone(),
                            role: VarRole::CentralGen {
                                generator: i,
                                power: 2,
                            },
                        });
                    }
                }
                VarTable::new(defs)
            }
            AlgKind::GenericClifford => {
                if !params.is_empty() {
                    return syntax(
                        origin,
                        "generic-clifford documents declare no extra parameters",
                    );
                }
                if let Some(entries) = raw.sections.get("generic") {
                    for e in entries {
                        if e.key != "exclude" {
                            return syntax(e.key_pos, "the [generic] section holds `exclude`");
                        }
                        excluded = parse_pair_list(&e.value, n, e.value_pos)?;
                    }
                }
                GenericCliffordSpec::new(n, &excluded)
                    .map_err(|err| InputError::Syntax {
                        pos: origin,
                        message: err.to_string(),
                    })?
                    .table
            }
        };

        let ctx = EvalContext::plain(table.clone(), conductor);
        let zero = CoefPoly::zero(table.clone(), conductor);
        let mut a = vec![vec![zero.clone(); n]; n];
        let mut powers: Option<Vec<CoefPoly>> = None;
        for (section, e) in &poly_entries {
            match *section {
                "a" => {
                    if !matches!(kind, AlgKind::Skew | AlgKind::Weyl) {
                        return syntax(e.key_pos, "[a] applies to skew and weyl documents");
                    }
                    let (i, j) = parse_pair(&e.key, "a", n, e.key_pos)?;
                    if i >= j {
                        return syntax(e.key_pos, "a entries are given above the diagonal");
                    }
                    let poly = expr::eval_polynomial_at(&e.value, &ctx, e.value_pos)?;
                    if kind == AlgKind::Skew && !poly.is_zero() {
                        return syntax(e.key_pos, "skew documents admit no nonzero a entries");
                    }
                    a[i][j] = poly.clone();
                    a[j][i] = poly;
                }
                "header-a" => {
                    let poly = expr::eval_polynomial_at(&e.value, &ctx, e.value_pos)?;
                    a[0][1] = poly.clone();
                    a[1][0] = poly;
                }
                "bilinear" => {
                    if kind != AlgKind::Clifford {
                        return syntax(e.key_pos, "[bilinear] applies to clifford documents");
                    }
                    if let Some(i) = diagonal_index(&e.key, n) {
                        let poly = expr::eval_polynomial_at(&e.value, &ctx, e.value_pos)?;
                        if squares[i].is_some() {
                            return syntax(e.key_pos, "square already given");
                        }
                        squares[i] = Some(poly);
                    } else {
                        let (i, j) = parse_pair(&e.key, "b", n, e.key_pos)?;
                        if i >= j {
                            return syntax(
                                e.key_pos,
                                "bilinear entries are given above the diagonal",
                            );
                        }
                        let poly = expr::eval_polynomial_at(&e.value, &ctx, e.value_pos)?;
                        a[i][j] = poly.mul_rat(&crate::arith::rat_int(2));
                        a[j][i] = a[i][j].clone();
                    }
                }
                "squares" => {
                    if kind != AlgKind::Clifford {
                        return syntax(e.key_pos, "[squares] applies to clifford documents");
                    }
                    let i = parse_index(&e.key, "c", n, e.key_pos)?;
                    if squares[i].is_some() {
                        return syntax(e.key_pos, "square already given");
                    }
                    squares[i] = Some(expr::eval_polynomial_at(&e.value, &ctx, e.value_pos)?);
                }
                "powers" => {
                    if kind != AlgKind::QWeyl {
                        return syntax(e.key_pos, "[powers] applies to q-weyl documents");
                    }
                    let i = parse_index(&e.key, "c", n, e.key_pos)?;
                    let ps = powers.get_or_insert_with(|| vec![zero.clone(); n]);
                    ps[i] = expr::eval_polynomial_at(&e.value, &ctx, e.value_pos)?;
                }
                _ => unreachable!(),
            }
        }

        Ok(Document {
            kind,
            n,
            params,
            names,
            options,
            conductor,
            table,
            q,
            a,
            squares,
            powers,
            excluded,
        })
    }

    /// Session limits with the document's overrides applied.
    pub fn limits(&self, base: &Limits) -> Limits {
        let mut l = *base;
        if let Some(r) = self.options.rank_cap {
            l.rank_cap = r;
        }
        if let Some(m) = self.options.max_rounds {
            l.max_rounds = m;
        }
        if let Some(d) = self.options.degree_cap {
            l.degree_cap = d;
        }
        l
    }

    /// Builds the presentation this document describes.
    pub fn presentation(&self, limits: &Limits) -> Result<Arc<Presentation>, InputError> {
        let mode = match self.kind {
            AlgKind::Skew => Mode::Skew,
            AlgKind::Weyl => Mode::WeylLike,
            AlgKind::QWeyl => {
                if self.powers.is_some() {
                    Mode::Bounded
                } else {
                    Mode::WeylLike
                }
            }
            AlgKind::Clifford | AlgKind::GenericClifford => Mode::Clifford,
        };
        let mut b = PresentationBuilder::new(mode, self.n, self.table.clone(), self.conductor)
            .names(self.names.clone())
            .degree_cap(limits.degree_cap);
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                b = b.q(i, j, self.q[i][j]);
                if !self.a[i][j].is_zero() {
                    b = b.a(i, j, self.a[i][j].clone());
                }
            }
        }
        match self.kind {
            AlgKind::Clifford => {
                for i in 0..self.n {
                    let value = match &self.squares[i] {
                        Some(p) => p.clone(),
                        None => {
                            let v = self
                                .table
                                .central_var_of(i)
                                .expect("symbolic squares are table variables");
                            CoefPoly::var(self.table.clone(), v, self.conductor)
                        }
                    };
                    b = b.power(i, 2, value);
                }
            }
            AlgKind::GenericClifford => {
                let spec = GenericCliffordSpec::new(self.n, &self.excluded).expect("validated");
                for i in 0..self.n {
                    for j in (i + 1)..self.n {
                        if let Some(v) = spec.t_var(i, j) {
                            let t = CoefPoly::var(self.table.clone(), v, self.conductor);
                            b = b.a(i, j, t.mul_rat(&crate::arith::rat_int(2)));
                        }
                    }
                    let v = spec.t_var(i, i).expect("diagonal kept");
                    b = b.power(i, 2, CoefPoly::var(self.table.clone(), v, self.conductor));
                }
            }
            AlgKind::QWeyl => {
                if let Some(ps) = &self.powers {
                    let ord = self.q[0][1].order() as u32;
                    for (i, c) in ps.iter().enumerate() {
                        b = b.power(i, ord, c.clone());
                    }
                }
            }
            _ => {}
        }
        Ok(b.build()?)
    }

    /// The generic-clifford spec, for kinds that carry one.
    pub fn generic_spec(&self) -> Option<GenericCliffordSpec> {
        match self.kind {
            AlgKind::GenericClifford => GenericCliffordSpec::new(self.n, &self.excluded).ok(),
            _ => None,
        }
    }

    /// The bilinear matrix of a clifford document.
    pub fn bilinear_matrix(&self) -> Option<PolyMatrix> {
        if self.kind != AlgKind::Clifford {
            return None;
        }
        let half = crate::arith::rat(1, 2);
        Some(PolyMatrix::from_fn(
            self.table.clone(),
            self.conductor,
            self.n,
            self.n,
            |i, j| {
                if i == j {
                    match &self.squares[i] {
                        Some(p) => p.clone(),
                        None => {
                            let v = self.table.central_var_of(i).expect("symbolic square");
                            CoefPoly::var(self.table.clone(), v, self.conductor)
                        }
                    }
                } else {
                    self.a[i.min(j)][i.max(j)].mul_rat(&half)
                }
            },
        ))
    }

    /// Canonical rendering; parsing the output reproduces the document.
    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str("format = 1\n");
        out.push_str(&format!("kind = {}\n", self.kind.name()));
        match self.kind {
            AlgKind::QWeyl => {
                out.push_str(&format!("n = {}\n", self.q[0][1].order()));
            }
            _ => out.push_str(&format!("n = {}\n", self.n)),
        }
        if !self.params.is_empty() {
            out.push_str(&format!("params = {}\n", self.params.join(", ")));
        }
        let default_names: Vec<String> = match self.kind {
            AlgKind::QWeyl => vec!["x".into(), "y".into()],
            _ => (1..=self.n).map(|i| format!("x{i}")).collect(),
        };
        if self.names != default_names {
            out.push_str(&format!("names = {}\n", self.names.join(", ")));
        }
        if self.kind == AlgKind::QWeyl {
            out.push_str(&format!("q = {}\n", self.q[0][1]));
            if !self.a[0][1].is_zero() {
                out.push_str(&format!("a = {}\n", self.a[0][1]));
            }
        }
        let opts = &self.options;
        if opts != &DocOptions::default() {
            out.push_str("\n[options]\n");
            if let Some(v) = opts.rank_cap {
                out.push_str(&format!("rank_cap = {v}\n"));
            }
            if let Some(v) = opts.max_rounds {
                out.push_str(&format!("max_rounds = {v}\n"));
            }
            if let Some(v) = opts.conductor {
                out.push_str(&format!("conductor = {v}\n"));
            }
            if let Some(v) = opts.degree_cap {
                out.push_str(&format!("degree_cap = {v}\n"));
            }
        }
        match self.kind {
            AlgKind::Skew | AlgKind::Weyl => {
                let nontrivial: Vec<(usize, usize)> = (0..self.n)
                    .flat_map(|i| ((i + 1)..self.n).map(move |j| (i, j)))
                    .filter(|&(i, j)| !self.q[i][j].is_one())
                    .collect();
                if !nontrivial.is_empty() {
                    out.push_str("\n[q]\n");
                    for (i, j) in nontrivial {
                        out.push_str(&format!(
                            "{} = {}\n",
                            pair_key("q", i, j, self.n),
                            self.q[i][j]
                        ));
                    }
                }
                let with_a: Vec<(usize, usize)> = (0..self.n)
                    .flat_map(|i| ((i + 1)..self.n).map(move |j| (i, j)))
                    .filter(|&(i, j)| !self.a[i][j].is_zero())
                    .collect();
                if !with_a.is_empty() {
                    out.push_str("\n[a]\n");
                    for (i, j) in with_a {
                        out.push_str(&format!(
                            "{} = {}\n",
                            pair_key("a", i, j, self.n),
                            self.a[i][j]
                        ));
                    }
                }
            }
            AlgKind::Clifford => {
                let with_b: Vec<(usize, usize)> = (0..self.n)
                    .flat_map(|i| ((i + 1)..self.n).map(move |j| (i, j)))
                    .filter(|&(i, j)| !self.a[i][j].is_zero())
                    .collect();
                if !with_b.is_empty() {
                    out.push_str("\n[bilinear]\n");
                    for (i, j) in with_b {
                        out.push_str(&format!(
                            "{} = {}\n",
                            pair_key("b", i, j, self.n),
                            self.a[i][j].mul_rat(&crate::arith::rat(1, 2))
                        ));
                    }
                }
                if self.squares.iter().any(|s| s.is_some()) {
                    out.push_str("\n[squares]\n");
                    for (i, s) in self.squares.iter().enumerate() {
                        if let Some(p) = s {
                            out.push_str(&format!("c{} = {}\n", i + 1, p));
                        }
                    }
                }
            }
            AlgKind::GenericClifford => {
                if !self.excluded.is_empty() {
                    out.push_str("\n[generic]\n");
                    let pairs: Vec<String> = self
                        .excluded
                        .iter()
                        .map(|&(i, j)| format!("({}, {})", i + 1, j + 1))
                        .collect();
                    out.push_str(&format!("exclude = {}\n", pairs.join(", ")));
                }
            }
            AlgKind::QWeyl => {
                if let Some(ps) = &self.powers {
                    out.push_str("\n[powers]\n");
                    for (i, p) in ps.iter().enumerate() {
                        out.push_str(&format!("c{} = {}\n", i + 1, p));
                    }
                }
            }
        }
        out
    }
}

fn pair_key(prefix: &str, i: usize, j: usize, n: usize) -> String {
    if n <= 9 {
        format!("{prefix}{}{}", i + 1, j + 1)
    } else {
        format!("{prefix}{}_{}", i + 1, j + 1)
    }
}

fn parse_pair_list(value: &str, n: usize, pos: Pos) -> Result<Vec<(usize, usize)>, InputError> {
    let mut out = Vec::new();
    let trimmed = value.trim();
    if trimmed.is_empty() {
        return Ok(out);
    }
    let mut rest = trimmed;
    loop {
        rest = rest.trim_start_matches(|c: char| c.is_whitespace() || c == ',');
        if rest.is_empty() {
            break;
        }
        if !rest.starts_with('(') {
            return syntax(pos, "expected a pair like (1, 2)");
        }
        let close = match rest.find(')') {
            Some(c) => c,
            None => return syntax(pos, "unterminated pair"),
        };
        let inner = &rest[1..close];
        let parts: Vec<&str> = inner.split(',').map(|s| s.trim()).collect();
        if parts.len() != 2 {
            return syntax(pos, "expected a pair like (1, 2)");
        }
        let i: usize = parts[0].parse().map_err(|_| InputError::Syntax {
            pos,
            message: format!("invalid index `{}`", parts[0]),
        })?;
        let j: usize = parts[1].parse().map_err(|_| InputError::Syntax {
            pos,
            message: format!("invalid index `{}`", parts[1]),
        })?;
        if i < 1 || j < 1 || i > n || j > n || i >= j {
            return syntax(
                pos,
                format!("pair ({i}, {j}) must satisfy 1 <= i < j <= {n}"),
            );
        }
        out.push((i - 1, j - 1));
        rest = &rest[close + 1..];
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_q_weyl() {
        let doc = Document::parse("format = 1\nkind = q-weyl\nn = 3\nq = 1/3\na = 1\n").unwrap();
        assert_eq!(doc.kind, AlgKind::QWeyl);
        assert_eq!(doc.q[0][1].order(), 3);
        assert_eq!(doc.conductor, 3);
        assert!(doc.a[0][1].is_one());
        let pres = doc.presentation(&Limits::default()).unwrap();
        assert!(pres.is_valid());
    }

    #[test]
    fn q_weyl_declared_order_checked() {
        let err =
            Document::parse("format = 1\nkind = q-weyl\nn = 4\nq = 1/3\na = 1\n").unwrap_err();
        assert!(err.to_string().contains("order"));
    }

    #[test]
    fn unreduced_fraction_rejected() {
        let err =
            Document::parse("format = 1\nkind = skew\nn = 2\n\n[q]\nq12 = 2/4\n").unwrap_err();
        assert!(err.to_string().contains("fraction not reduced"));
    }

    #[test]
    fn parse_weyl_with_parameter() {
        let text = "format = 1\nkind = weyl\nn = 4\nparams = t\n\n[q]\nq12 = -1\nq14 = -1\nq24 = -1\nq34 = -1\n\n[a]\na12 = t\n";
        let doc = Document::parse(text).unwrap();
        assert_eq!(doc.conductor, 2);
        let pres = doc.presentation(&Limits::default()).unwrap();
        assert!(pres.is_valid());
        assert_eq!(pres.a(0, 1).to_string(), "t");
    }

    #[test]
    fn parse_clifford_with_cross_term() {
        let text = "format = 1\nkind = clifford\nn = 4\n\n[bilinear]\nb14 = x3^2/2\n";
        let doc = Document::parse(text).unwrap();
        let pres = doc.presentation(&Limits::default()).unwrap();
        assert!(pres.is_valid());
        // a14 = 2 b14 = x3^2, the symbolic square variable of x3.
        let v3 = doc.table.central_var_of(2).unwrap();
        let y3 = CoefPoly::var(doc.table.clone(), v3, doc.conductor);
        assert_eq!(pres.a(0, 3), &y3);
    }

    #[test]
    fn parse_generic_clifford() {
        let text = "format = 1\nkind = generic-clifford\nn = 3\n\n[generic]\nexclude = (1,2)\n";
        let doc = Document::parse(text).unwrap();
        assert_eq!(doc.excluded, vec![(0, 1)]);
        let spec = doc.generic_spec().unwrap();
        assert_eq!(spec.w, 5);
        let pres = doc.presentation(&Limits::default()).unwrap();
        assert!(pres.is_valid());
    }

    #[test]
    fn render_parse_fixpoint() {
        let texts = [
            "format = 1\nkind = q-weyl\nn = 3\nq = 1/3\na = 1\n",
            "format = 1\nkind = weyl\nn = 4\nparams = t\n\n[q]\nq12 = -1\nq14 = -1\nq24 = -1\nq34 = -1\n\n[a]\na12 = t\n",
            "format = 1\nkind = clifford\nn = 4\n\n[bilinear]\nb14 = x3^2/2\n",
            "format = 1\nkind = generic-clifford\nn = 3\n\n[generic]\nexclude = (1,2)\n",
            "format = 1\nkind = skew\nn = 3\n\n[options]\nrank_cap = 128\n\n[q]\nq12 = 1/3\nq13 = 23/27\n",
            "format = 1\nkind = q-weyl\nn = 2\nq = -1\na = 1\n\n[powers]\nc1 = 2\nc2 = 5\n",
        ];
        for text in texts {
            let doc = Document::parse(text).unwrap();
            let printed = doc.render();
            let doc2 = Document::parse(&printed).unwrap();
            assert_eq!(printed, doc2.render(), "fixpoint failed for:\n{text}");
            assert_eq!(doc.q, doc2.q);
            assert_eq!(doc.a, doc2.a);
        }
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let err = Document::parse("format = 1\nkind = skew\nn = 2\n\n[q]\nq12\n").unwrap_err();
        match err {
            InputError::Syntax { pos, .. } => assert_eq!(pos.line, 6),
            other => panic!("unexpected error {other:?}"),
        }
        let err =
            Document::parse("format = 1\nkind = weyl\nn = 2\n\n[a]\na12 = t +\n").unwrap_err();
        match err {
            InputError::Syntax { pos, .. } => assert_eq!(pos.line, 6),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn conductor_override_and_cap() {
        // An override must be a multiple of the computed conductor.
        let good = Document::parse(
            "format = 1\nkind = q-weyl\nn = 3\nq = 1/3\na = 1\n\n[options]\nconductor = 6\n",
        )
        .unwrap();
        assert_eq!(good.conductor, 6);
        let bad = Document::parse(
            "format = 1\nkind = q-weyl\nn = 3\nq = 1/3\na = 1\n\n[options]\nconductor = 4\n",
        )
        .unwrap_err();
        assert!(bad.to_string().contains("multiple"));
        // Conductors beyond the session cap are rejected at parse time.
        let huge = Document::parse(
            "format = 1\nkind = skew\nn = 2\n\n[q]\nq12 = 1/100003\n",
        )
        .unwrap_err();
        assert!(huge.to_string().contains("exceeds the configured cap"));
    }

    #[test]
    fn unknown_variable_rejected() {
        let err =
            Document::parse("format = 1\nkind = weyl\nn = 2\n\n[q]\nq12 = -1\n\n[a]\na12 = u\n")
                .unwrap_err();
        assert!(err.to_string().contains("unknown variable"));
    }
}
