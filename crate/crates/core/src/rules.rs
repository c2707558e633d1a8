//! The rewrite-rule table: passage, reordering and head-resolution rules,
//! read from a line-oriented template file and instantiated per `n`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use thiserror::Error;

use crate::algebra::AlgebraElement;
use crate::braid::{Kind, Letter, MixedWord};
use crate::laurent::LaurentPoly;
use crate::parse::{parse_element, parse_word, ParseError};

pub const BUILTIN_RULES: &str = include_str!("../data/rules.txt");

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuleError {
    #[error("rule file line {line}: {msg}")]
    Template { line: usize, msg: String },
    #[error("pattern mismatch: {0}")]
    PatternMismatch(String),
    #[error("no rule instance for {0}")]
    MissingRule(String),
    #[error("no certificate found for {0}")]
    NoCertificateFound(String),
    #[error("ambiguous coefficient fit for {0}")]
    AmbiguousFit(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Provenance {
    PrintedInPaper,
    DerivedCorrected,
    DerivedCoefficients,
    /// A printed form kept for the record; it is expected to fail validation.
    Erratum,
}

impl Provenance {
    fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "PrintedInPaper" => Provenance::PrintedInPaper,
            "DerivedCorrected" => Provenance::DerivedCorrected,
            "DerivedCoefficients" => Provenance::DerivedCoefficients,
            "Erratum" => Provenance::Erratum,
            _ => return None,
        })
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Cmp {
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
    Ne,
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Constraint {
    lhs: String,
    op: Cmp,
    rhs: String,
}

/// One schematic rule line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleTemplate {
    pub name: String,
    pub lhs: String,
    pub rhs: String,
    pub provenance: Provenance,
    pub line: usize,
    constraints: Vec<Constraint>,
}

const INDEX_VARS: [char; 5] = ['i', 'j', 'l', 'm', 'M'];
const SIGN_VARS: [char; 2] = ['e', 'z'];

/// Values bound to template variables for one instance.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bindings {
    ints: BTreeMap<char, i64>,
    kind: Option<Kind>,
}

impl Bindings {
    pub fn get(&self, v: char) -> Option<i64> {
        self.ints.get(&v).copied()
    }

    /// Parses the rendering produced by `Display`, e.g. `i=1 e=-1 L=T`.
    pub fn parse(s: &str) -> Option<Self> {
        let mut b = Bindings::default();
        for tok in s.split_whitespace() {
            let (k, v) = tok.split_once('=')?;
            let mut chars = k.chars();
            let c = chars.next()?;
            if chars.next().is_some() {
                return None;
            }
            if c == 'L' {
                b.kind = Some(match v {
                    "T" => Kind::LoopT,
                    "t" => Kind::LoopTau,
                    _ => return None,
                });
            } else {
                b.ints.insert(c, v.parse().ok()?);
            }
        }
        Some(b)
    }
}

impl fmt::Display for Bindings {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, v) in &self.ints {
            if !first {
                write!(f, " ")?;
            }
            first = false;
            write!(f, "{k}={v}")?;
        }
        if let Some(kind) = self.kind {
            if !first {
                write!(f, " ")?;
            }
            write!(f, "L={}", if kind == Kind::LoopT { 'T' } else { 't' })?;
        }
        Ok(())
    }
}

fn eval_expr(expr: &str, b: &Bindings) -> Result<i64, String> {
    let mut total = 0i64;
    let mut sign = 1i64;
    let mut expect_term = true;
    let chars: Vec<char> = expr.chars().filter(|c| !c.is_whitespace()).collect();
    let mut k = 0;
    while k < chars.len() {
        let c = chars[k];
        match c {
            '+' | '-' => {
                if c == '-' {
                    sign = -sign;
                }
                expect_term = true;
                k += 1;
            }
            '0'..='9' => {
                let start = k;
                while k < chars.len() && chars[k].is_ascii_digit() {
                    k += 1;
                }
                let v: i64 = chars[start..k].iter().collect::<String>().parse().map_err(|e| format!("{e}"))?;
                if !expect_term {
                    return Err(format!("bad expression '{expr}'"));
                }
                total += sign * v;
                sign = 1;
                expect_term = false;
            }
            c if INDEX_VARS.contains(&c) || SIGN_VARS.contains(&c) => {
                if !expect_term {
                    return Err(format!("bad expression '{expr}'"));
                }
                let v = b.get(c).ok_or_else(|| format!("unbound variable '{c}'"))?;
                total += sign * v;
                sign = 1;
                expect_term = false;
                k += 1;
            }
            _ => return Err(format!("unexpected '{c}' in expression '{expr}'")),
        }
    }
    if expect_term {
        return Err(format!("incomplete expression '{expr}'"));
    }
    Ok(total)
}

fn variables_in(text: &str, out: &mut Vec<char>) {
    let mut depth = 0;
    for c in text.chars() {
        match c {
            '{' => depth += 1,
            '}' => depth -= 1,
            c if depth > 0 && (INDEX_VARS.contains(&c) || SIGN_VARS.contains(&c))
                && !out.contains(&c) => {
                    out.push(c);
                }
            _ => {}
        }
    }
}

/// Expands the template syntax into the plain element grammar.
fn expand(text: &str, b: &Bindings) -> Result<String, String> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = String::new();
    let mut k = 0;
    let braced = |k: usize| -> Result<(String, usize), String> {
        // chars[k] == '{'; returns (content, index after '}').
        let close = chars[k..].iter().position(|&c| c == '}').ok_or("unclosed '{'")? + k;
        Ok((chars[k + 1..close].iter().collect(), close + 1))
    };
    while k < chars.len() {
        let c = chars[k];
        if c == 'g' && chars.get(k + 1) == Some(&'{') {
            let (content, next) = braced(k + 1)?;
            let content = content.trim();
            let range = content.strip_prefix("up ").map(|r| (true, r)).or(content.strip_prefix("down ").map(|r| (false, r)));
            let Some((ascending, range)) = range else {
                out.push_str(&format!("g{}", eval_expr(content, b)?));
                k = next;
                continue;
            };
            let (a, z) = range.split_once("..").ok_or("range needs '..'")?;
            let (a, z) = (eval_expr(a, b)?, eval_expr(z, b)?);
            k = next;
            // Letter-wise exponent.
            let mut exp = 1;
            if chars.get(k) == Some(&'^') {
                if chars.get(k + 1) == Some(&'{') {
                    let (e, next) = braced(k + 1)?;
                    exp = eval_expr(&e, b)?;
                    k = next;
                } else if chars.get(k + 1) == Some(&'-') && chars.get(k + 2) == Some(&'1') {
                    exp = -1;
                    k += 3;
                } else {
                    return Err("range exponent must be ^-1 or ^{expr}".into());
                }
            }
            let idx: Vec<i64> = if ascending { (a..=z).collect() } else { (z..=a).rev().collect() };
            out.push(' ');
            for i in idx {
                out.push_str(&format!("g{i}^{exp} "));
            }
            continue;
        }
        if c == 'L' && chars.get(k + 1) == Some(&'{') {
            let kind = b.kind.ok_or("looping kind unbound")?;
            out.push(if kind == Kind::LoopT { 'T' } else { 't' });
            k += 1;
            continue;
        }
        if c == '{' {
            let (e, next) = braced(k)?;
            out.push_str(&eval_expr(&e, b)?.to_string());
            k = next;
            continue;
        }
        out.push(c);
        k += 1;
    }
    Ok(out)
}

impl RuleTemplate {
    fn parse_line(line: usize, text: &str) -> Result<Self, RuleError> {
        let err = |msg: &str| RuleError::Template { line, msg: msg.to_string() };
        let fields: Vec<&str> = text.split('|').map(str::trim).collect();
        if fields.len() != 4 {
            return Err(err("expected NAME | LHS | RHS | PROVENANCE"));
        }
        let (prov, cons) = match fields[3].split_once(" where ") {
            Some((p, c)) => (p.trim(), Some(c)),
            None => (fields[3], None),
        };
        let provenance = Provenance::parse(prov).ok_or_else(|| err("unknown provenance"))?;
        let mut constraints = Vec::new();
        for c in cons.into_iter().flat_map(|c| c.split(',')) {
            let c = c.trim();
            let ops = [("<=", Cmp::Le), (">=", Cmp::Ge), ("!=", Cmp::Ne), ("==", Cmp::Eq), ("<", Cmp::Lt), (">", Cmp::Gt)];
            let (sym, op) = ops.iter().find(|(s, _)| c.contains(s)).ok_or_else(|| err("bad constraint"))?;
            let (l, r) = c.split_once(sym).unwrap();
            constraints.push(Constraint { lhs: l.trim().to_string(), op: *op, rhs: r.trim().to_string() });
        }
        Ok(RuleTemplate {
            name: fields[0].to_string(),
            lhs: fields[1].to_string(),
            rhs: fields[2].to_string(),
            provenance,
            line,
            constraints,
        })
    }

    fn variables(&self) -> (Vec<char>, bool) {
        let mut vars = Vec::new();
        variables_in(&self.lhs, &mut vars);
        variables_in(&self.rhs, &mut vars);
        for c in &self.constraints {
            for s in [&c.lhs, &c.rhs] {
                for ch in s.chars() {
                    if (INDEX_VARS.contains(&ch) || SIGN_VARS.contains(&ch)) && !vars.contains(&ch) {
                        vars.push(ch);
                    }
                }
            }
        }
        vars.sort();
        let kind = self.lhs.contains("L{") || self.rhs.contains("L{");
        (vars, kind)
    }

    fn admits(&self, b: &Bindings) -> Result<bool, String> {
        for c in &self.constraints {
            let (l, r) = (eval_expr(&c.lhs, b)?, eval_expr(&c.rhs, b)?);
            let ok = match c.op {
                Cmp::Lt => l < r,
                Cmp::Le => l <= r,
                Cmp::Gt => l > r,
                Cmp::Ge => l >= r,
                Cmp::Eq => l == r,
                Cmp::Ne => l != r,
            };
            if !ok {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Instance at the given bindings, or `None` when some letter is out of
    /// range for `n`.
    pub fn instantiate(&self, index: usize, b: &Bindings, n: usize) -> Result<Option<RuleInstance>, RuleError> {
        let err = |msg: String| RuleError::Template { line: self.line, msg };
        if !self.admits(b).map_err(err)? {
            return Ok(None);
        }
        let lhs_text = expand(&self.lhs, b).map_err(err)?;
        let rhs_text = expand(&self.rhs, b).map_err(err)?;
        let lhs = match parse_word(&lhs_text, n) {
            Ok(w) => w,
            Err(ParseError::IndexOutOfRange { .. }) => return Ok(None),
            Err(e) => return Err(err(format!("lhs: {e}"))),
        };
        let rhs = match parse_element(&rhs_text, n) {
            Ok(e) => e,
            Err(ParseError::IndexOutOfRange { .. }) => return Ok(None),
            Err(e) => return Err(err(format!("rhs: {e}"))),
        };
        Ok(Some(RuleInstance {
            rule: index,
            name: self.name.clone(),
            bindings: b.clone(),
            lhs,
            rhs,
            provenance: self.provenance,
        }))
    }

    /// Every admissible instance for `n`, in a fixed order.
    pub fn instances(&self, index: usize, n: usize) -> Result<Vec<RuleInstance>, RuleError> {
        let (vars, kind) = self.variables();
        let mut out = Vec::new();
        let mut assignment: Vec<i64> = vec![0; vars.len()];
        fn domain(v: char, n: usize) -> Vec<i64> {
            if SIGN_VARS.contains(&v) {
                vec![1, -1]
            } else {
                (1..=n as i64).collect()
            }
        }
        fn rec(
            t: &RuleTemplate,
            index: usize,
            vars: &[char],
            kind: bool,
            n: usize,
            depth: usize,
            assignment: &mut Vec<i64>,
            out: &mut Vec<RuleInstance>,
        ) -> Result<(), RuleError> {
            if depth == vars.len() {
                let kinds: &[Option<Kind>] = if kind { &[Some(Kind::LoopT), Some(Kind::LoopTau)] } else { &[None] };
                for &k in kinds {
                    let b = Bindings { ints: vars.iter().copied().zip(assignment.iter().copied()).collect(), kind: k };
                    if let Some(inst) = t.instantiate(index, &b, n)? {
                        out.push(inst);
                    }
                }
                return Ok(());
            }
            for v in domain(vars[depth], n) {
                assignment[depth] = v;
                rec(t, index, vars, kind, n, depth + 1, assignment, out)?;
            }
            Ok(())
        }
        rec(self, index, &vars, kind, n, 0, &mut assignment, &mut out)?;
        Ok(out)
    }
}

/// A concrete identity `lhs = rhs` obtained from a template.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleInstance {
    /// Position of the template in its table.
    pub rule: usize,
    pub name: String,
    pub bindings: Bindings,
    pub lhs: MixedWord,
    pub rhs: AlgebraElement,
    pub provenance: Provenance,
}

impl RuleInstance {
    pub fn id(&self) -> String {
        format!("{} {}", self.name, self.bindings)
    }

    pub fn lhs_element(&self) -> AlgebraElement {
        AlgebraElement::word(self.rhs.n(), self.lhs.clone())
    }
}

/// The parsed template file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleTable {
    pub templates: Vec<RuleTemplate>,
}

impl RuleTable {
    pub fn parse(text: &str) -> Result<Self, RuleError> {
        let mut templates = Vec::new();
        for (k, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            templates.push(RuleTemplate::parse_line(k + 1, line)?);
        }
        let mut names: Vec<&str> = templates.iter().map(|t| t.name.as_str()).collect();
        names.sort();
        if let Some(w) = names.windows(2).find(|w| w[0] == w[1]) {
            return Err(RuleError::Template { line: 0, msg: format!("duplicate rule name {}", w[0]) });
        }
        Ok(RuleTable { templates })
    }

    pub fn builtin() -> Self {
        Self::parse(BUILTIN_RULES).expect("built-in rule file parses")
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.templates.iter().position(|t| t.name == name)
    }
}

/// All instances of a table at a fixed `n`, indexed by left-hand side.
#[derive(Clone, Debug)]
pub struct RuleBook {
    n: usize,
    table: RuleTable,
    instances: Vec<RuleInstance>,
    by_lhs: HashMap<MixedWord, usize>,
    by_id: HashMap<String, usize>,
}

impl RuleBook {
    pub fn new(table: RuleTable, n: usize) -> Result<Self, RuleError> {
        let mut instances = Vec::new();
        for (k, t) in table.templates.iter().enumerate() {
            instances.extend(t.instances(k, n)?);
        }
        let mut by_lhs = HashMap::new();
        let mut by_id = HashMap::new();
        for (k, r) in instances.iter().enumerate() {
            by_id.insert(r.id(), k);
            if r.provenance != Provenance::Erratum {
                by_lhs.entry(r.lhs.clone()).or_insert(k);
            }
        }
        Ok(RuleBook { n, table, instances, by_lhs, by_id })
    }

    pub fn builtin(n: usize) -> Self {
        Self::new(RuleTable::builtin(), n).expect("built-in rules instantiate")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn table(&self) -> &RuleTable {
        &self.table
    }

    pub fn instances(&self) -> &[RuleInstance] {
        &self.instances
    }

    /// The non-erratum rule whose left-hand side is exactly `w`.
    pub fn lookup(&self, w: &MixedWord) -> Option<&RuleInstance> {
        self.by_lhs.get(w).map(|&k| &self.instances[k])
    }

    pub fn by_id(&self, id: &str) -> Option<&RuleInstance> {
        self.by_id.get(id).map(|&k| &self.instances[k])
    }

    pub fn by_name_and_bindings(&self, name: &str, b: &Bindings) -> Option<&RuleInstance> {
        self.by_id(&format!("{name} {b}"))
    }
}

fn word(ls: &[Letter]) -> MixedWord {
    MixedWord::from_letters(ls.iter().copied())
}

/// Rewrites `g_i g_i` starting at `pos`, or a `g_i^-1` at `pos`.
pub fn apply_quadratic(w: &MixedWord, pos: usize, n: usize) -> Result<AlgebraElement, RuleError> {
    let ls = w.letters();
    let mismatch = || RuleError::PatternMismatch(format!("no quadratic pattern at position {pos} of {w}"));
    let l = *ls.get(pos).ok_or_else(mismatch)?;
    if !l.is_braiding() {
        return Err(mismatch());
    }
    let (pre, post, repl) = if l.exp < 0 {
        let r = AlgebraElement::from_terms(
            n,
            [(LaurentPoly::q_pow(-1), word(&[l.inverse()])), (LaurentPoly::a(), MixedWord::empty())],
        );
        (&ls[..pos], &ls[pos + 1..], r)
    } else if ls.get(pos + 1) == Some(&l) {
        let r = AlgebraElement::from_terms(n, [(LaurentPoly::b(), word(&[l])), (LaurentPoly::q(), MixedWord::empty())]);
        (&ls[..pos], &ls[pos + 2..], r)
    } else {
        return Err(mismatch());
    };
    Ok(repl.sandwich(&word(pre), &word(post)))
}

/// `g^{±1} t` with `t` a looping, rewritten as looping-first monomials. Which
/// rule fired is returned alongside, for tracing.
pub fn passage_traced(book: &RuleBook, g: Letter, t: Letter) -> Result<Vec<(&RuleInstance, AlgebraElement)>, RuleError> {
    if !g.is_braiding() || !t.is_looping() {
        return Err(RuleError::PatternMismatch(format!("{g} {t} is not a braiding letter before a looping")));
    }
    if let Some(r) = book.lookup(&word(&[g, t])) {
        return Ok(vec![(r, r.rhs.clone())]);
    }
    if g.exp < 0 {
        let inv = book.lookup(&word(&[g])).ok_or_else(|| RuleError::MissingRule(g.to_string()))?;
        let expanded = inv.rhs.sandwich(&MixedWord::empty(), &word(&[t]));
        return Ok(vec![(inv, expanded)]);
    }
    Err(RuleError::MissingRule(format!("{g} {t}")))
}

/// Passage of one braiding letter through one looping, fully resolved.
pub fn passage(book: &RuleBook, g: Letter, t: Letter) -> Result<AlgebraElement, RuleError> {
    let n = book.n();
    let mut out = AlgebraElement::zero(n);
    for (_, e) in passage_traced(book, g, t)? {
        for (w, c) in e.terms() {
            let ls = w.letters();
            if ls.len() == 2 && ls[0].is_braiding() && ls[1].is_looping() {
                out.add_scaled(c, &passage(book, ls[0], ls[1])?);
            } else {
                out.add_word(c, w);
            }
        }
    }
    Ok(out)
}

/// `t_hi t_lo` with index of `t_lo` below that of `t_hi`.
pub fn reorder(book: &RuleBook, hi: Letter, lo: Letter) -> Result<AlgebraElement, RuleError> {
    if !hi.is_looping() || !lo.is_looping() || lo.index >= hi.index {
        return Err(RuleError::PatternMismatch(format!("{hi} {lo} is not a descending looping pair")));
    }
    let r = book.lookup(&word(&[hi, lo])).ok_or_else(|| RuleError::MissingRule(format!("{hi} {lo}")))?;
    Ok(r.rhs.clone())
}

/// Rule for a head `t_M^e T_M^-e t_m^z`, `m < M`, if `w` is one.
pub fn head_rule<'a>(book: &'a RuleBook, w: &MixedWord) -> Option<&'a RuleInstance> {
    let ls = w.letters();
    if ls.len() != 3 {
        return None;
    }
    let (a, b, c) = (ls[0], ls[1], ls[2]);
    let shape = a.kind == Kind::LoopTau
        && b.kind == Kind::LoopT
        && a.index == b.index
        && a.exp == -b.exp
        && c.is_looping()
        && c.index < a.index;
    if !shape {
        return None;
    }
    book.lookup(w).filter(|r| r.name.starts_with("head."))
}

/// Head resolution: every output monomial is three loopings, the
/// first of the smaller index, followed by a braiding tail.
pub fn resolve_head(book: &RuleBook, w: &MixedWord) -> Result<AlgebraElement, RuleError> {
    let r = head_rule(book, w).ok_or_else(|| RuleError::PatternMismatch(format!("{w} is not a head t_M^e T_M^-e t_m")))?;
    crate::normalizer::push_braidings_right(book, &r.rhs)
}

/// The unit identity `1 - A G = q^-1 G^2` for `G = g_m .. g_{M-2} g_{M-1}^s
/// g_{M-2}^-1 .. g_m^-1`, with `s = +1` (it holds) or `s = -1` (the sign as
/// printed, which does not).
pub fn head_unit_identity(n: usize, m: u16, big_m: u16, middle: i8) -> (AlgebraElement, AlgebraElement) {
    let mut g: Vec<Letter> = (m..big_m - 1).map(|k| Letter::g(k, 1)).collect();
    g.push(Letter::g(big_m - 1, middle));
    g.extend((m..big_m - 1).rev().map(|k| Letter::g(k, -1)));
    let gw = word(&g);
    let lhs = AlgebraElement::one(n).sub(&AlgebraElement::monomial(n, LaurentPoly::a(), gw.clone())).unwrap();
    let rhs = AlgebraElement::monomial(n, LaurentPoly::q_pow(-1), gw.concat(&gw));
    (lhs, rhs)
}

/// Settings for `derive_coefficients`.
#[derive(Clone, Debug)]
pub struct DeriveConfig {
    /// Coefficients are sought in `q^-D .. q^D`.
    pub degree_bound: i64,
    /// Specializations beyond the `2D + 1` used for interpolation, as checks.
    pub extra_points: usize,
    pub seed: u64,
    pub search: crate::certify::SearchConfig,
}

impl Default for DeriveConfig {
    fn default() -> Self {
        DeriveConfig { degree_bound: 3, extra_points: 3, seed: 0, search: crate::certify::SearchConfig::default() }
    }
}

/// Finds coefficients `c_k` with `lhs = sum c_k skeleton[k]`: a linear fit of
/// representation images at several specializations `q` mod one prime,
/// Laurent interpolation of each coefficient, then a symbolic certificate.
pub fn derive_coefficients(
    book: &RuleBook,
    lhs: &MixedWord,
    skeleton: &[MixedWord],
    cfg: &DeriveConfig,
) -> Result<(Vec<LaurentPoly>, crate::certify::Certificate), RuleError> {
    use crate::modp;
    use crate::probe::RepContext;
    use rand::{Rng, SeedableRng};

    let n = book.n();
    let label = || format!("{lhs} over {} monomials", skeleton.len());
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(cfg.seed);
    let p = modp::random_prime_61(&mut rng);
    let d = cfg.degree_bound;
    let points = (2 * d + 1) as usize + cfg.extra_points;
    let mut qs: Vec<u64> = Vec::new();
    let mut values: Vec<Vec<u64>> = Vec::new();
    while qs.len() < points {
        let q = rng.gen_range(2..p - 1);
        if qs.contains(&q) {
            continue;
        }
        let ctx = RepContext::with_local_dim(n, p, q, 3).map_err(|e| RuleError::NoCertificateFound(e.to_string()))?;
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        for _ in 0..2 {
            let v = ctx.random_vector(&mut rng);
            let target = ctx.apply_word(lhs, &v);
            let images: Vec<Vec<u64>> = skeleton.iter().map(|w| ctx.apply_word(w, &v)).collect();
            for r in 0..v.len() {
                rows.push(images.iter().map(|img| img[r]).collect());
                rhs.push(target[r]);
            }
        }
        match modp::solve(rows, rhs, skeleton.len(), p) {
            modp::Solution::Unique(x) => values.push(x),
            modp::Solution::Underdetermined => return Err(RuleError::AmbiguousFit(label())),
            modp::Solution::Inconsistent => return Err(RuleError::NoCertificateFound(format!("{}: no fit", label()))),
        }
        qs.push(q);
    }
    let fit = 2 * d as usize + 1;
    let mut coeffs = Vec::new();
    for k in 0..skeleton.len() {
        // q^D c_k(q) is a polynomial of degree at most 2D.
        let ys: Vec<u64> = (0..fit).map(|t| modp::mul(values[t][k], modp::pow(qs[t], d as u64, p), p)).collect();
        let poly = modp::interpolate(&qs[..fit], &ys, p);
        let c = LaurentPoly::from_terms(poly.iter().enumerate().map(|(e, &a)| (e as i64 - d, modp::symmetric(a, p))));
        for t in fit..points {
            if c.eval_mod(qs[t], p).ok() != Some(values[t][k]) {
                return Err(RuleError::NoCertificateFound(format!("{}: degree bound {d} too small", label())));
            }
        }
        coeffs.push(c);
    }
    let rhs = AlgebraElement::from_terms(n, coeffs.iter().cloned().zip(skeleton.iter().cloned()));
    let cert = crate::certify::certify_identity(&AlgebraElement::word(n, lhs.clone()), &rhs, book, &cfg.search)
        .map_err(|e| RuleError::NoCertificateFound(format!("{}: {e}", label())))?;
    Ok((coeffs, cert))
}

/// Outcome of certifying and probing one rule instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationRow {
    pub n: usize,
    pub id: String,
    pub provenance: Provenance,
    pub certified: bool,
    pub moves: usize,
    /// The stored certificate replays (false when none was found).
    pub rechecked: bool,
    pub check_micros: u128,
    pub probe_distinct: bool,
    /// The identity fails after specializing `q = 1`.
    pub fails_at_q1: bool,
}

impl ValidationRow {
    /// Sound rules must certify; errata must fail both checks.
    pub fn as_expected(&self) -> bool {
        if self.provenance == Provenance::Erratum {
            !self.certified && self.probe_distinct && self.fails_at_q1
        } else {
            self.certified && self.rechecked && !self.probe_distinct && !self.fails_at_q1
        }
    }
}

/// Certifies every instance of every rule for each `n` in `ns`, citing only
/// rules above it in the table.
pub fn validate_rules(table: &RuleTable, ns: &[usize], budget: usize) -> Result<Vec<ValidationRow>, RuleError> {
    use crate::certify::{certify_identity, Scope, SearchConfig};
    use crate::probe::{distinct, vanishes_at, ProbeConfig, RepContext};
    use rayon::prelude::*;
    use std::time::Instant;

    let mut rows = Vec::new();
    for &n in ns {
        let book = RuleBook::new(table.clone(), n)?;
        let q1 = RepContext::new(n, 1_000_000_007, 1).map_err(|e| RuleError::NoCertificateFound(e.to_string()))?;
        let mut batch: Vec<ValidationRow> = book
            .instances()
            .par_iter()
            .map(|r| {
                let lhs = r.lhs_element();
                let cfg = SearchConfig { budget, scope: Scope::below(r.rule), ..SearchConfig::default() };
                let found = certify_identity(&lhs, &r.rhs, &book, &cfg);
                let (certified, moves, rechecked, micros) = match &found {
                    Ok(c) => {
                        let t = Instant::now();
                        let ok = c.check(&book, cfg.scope).is_ok();
                        (true, c.moves.len(), ok, t.elapsed().as_micros())
                    }
                    Err(_) => (false, 0, false, 0),
                };
                let probe_distinct = distinct(&lhs, &r.rhs, ProbeConfig { trials: 3, local_dim: 2, seed: 7 })
                    .map(|v| v.is_distinct())
                    .unwrap_or(false);
                let diff = lhs.sub(&r.rhs).expect("same n");
                let fails_at_q1 = !vanishes_at(&q1, &diff, 11).unwrap_or(true);
                ValidationRow {
                    n,
                    id: r.id(),
                    provenance: r.provenance,
                    certified,
                    moves,
                    rechecked,
                    check_micros: micros,
                    probe_distinct,
                    fails_at_q1,
                }
            })
            .collect();
        rows.append(&mut batch);
    }
    Ok(rows)
}
