use alloc::boxed::Box;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use alloc::{format, vec};

use super::{expand, DslError, ExpandError, Presentation, RelExpr, Relation};
use crate::braiding::BraidingMatrix;
use crate::freealg::{GenOrder, Letter, MultiDegree};
use crate::scalars::{make_field, FieldElem, FieldRef};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(u64),
    Sym(char),
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    col: usize,
}

fn syntax(line: usize, col: usize, msg: impl Into<String>) -> DslError {
    DslError::SyntaxError {
        line,
        col,
        msg: msg.into(),
    }
}

/// Splits `s` (starting at column `col0`) into tokens.
fn lex(s: &str, line: usize, col0: usize) -> Result<Vec<Token>, DslError> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = col0 + i;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Token {
                tok: Tok::Ident(chars[start..i].iter().collect()),
                col,
            });
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            let n = text
                .parse::<u64>()
                .map_err(|_| syntax(line, col, "integer literal too large"))?;
            out.push(Token { tok: Tok::Int(n), col });
        } else if "+-*/^()[],;<".contains(c) {
            out.push(Token { tok: Tok::Sym(c), col });
            i += 1;
        } else {
            return Err(syntax(line, col, format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

/// What the expression parser may refer to.
struct Scope<'a> {
    field: &'a FieldRef,
    matrix: Option<&'a BraidingMatrix>,
    theta: usize,
    group: usize,
}

struct Parser<'a> {
    toks: Vec<Token>,
    pos: usize,
    line: usize,
    end_col: usize,
    scope: Scope<'a>,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_col, |t| t.col)
    }

    fn err(&self, msg: impl Into<String>) -> DslError {
        syntax(self.line, self.col(), msg)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|t| t.tok.clone());
        self.pos += 1;
        t
    }

    fn eat_sym(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_sym(&mut self, c: char) -> Result<(), DslError> {
        if self.eat_sym(c) {
            Ok(())
        } else {
            Err(self.err(format!("expected `{c}`")))
        }
    }

    fn expect_int(&mut self) -> Result<u64, DslError> {
        match self.peek() {
            Some(Tok::Int(n)) => {
                let n = *n;
                self.pos += 1;
                Ok(n)
            }
            _ => Err(self.err("expected an integer")),
        }
    }

    fn expect_ident(&mut self) -> Result<String, DslError> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => Err(self.err("expected a name")),
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    fn expect_end(&self) -> Result<(), DslError> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.err("unexpected trailing input"))
        }
    }

    // expr := term (('+' | '-') term)*
    fn expr(&mut self) -> Result<RelExpr, DslError> {
        let mut terms = vec![self.term()?];
        loop {
            if self.eat_sym('+') {
                terms.push(self.term()?);
            } else if self.eat_sym('-') {
                let t = self.term()?;
                terms.push(neg(t, self.scope.field));
            } else {
                break;
            }
        }
        Ok(mk_sum(terms, self.scope.field))
    }

    // term := unary (('*' | '/') unary)*
    fn term(&mut self) -> Result<RelExpr, DslError> {
        let mut factors = vec![self.unary()?];
        loop {
            if self.eat_sym('*') {
                factors.push(self.unary()?);
            } else if self.peek() == Some(&Tok::Sym('/')) {
                let col = self.col();
                self.pos += 1;
                match self.unary()? {
                    RelExpr::Const(c) => {
                        let inv = c
                            .inv()
                            .map_err(|_| syntax(self.line, col, "division by zero"))?;
                        factors.push(RelExpr::Const(inv));
                    }
                    _ => return Err(syntax(self.line, col, "divisor must be a scalar")),
                }
            } else {
                break;
            }
        }
        Ok(mk_product(factors, self.scope.field))
    }

    // unary := '-' unary | power
    fn unary(&mut self) -> Result<RelExpr, DslError> {
        if self.eat_sym('-') {
            let e = self.unary()?;
            return Ok(neg(e, self.scope.field));
        }
        self.power()
    }

    // power := atom ('^' '-'? INT)?
    fn power(&mut self) -> Result<RelExpr, DslError> {
        let base = self.atom()?;
        if !self.eat_sym('^') {
            return Ok(base);
        }
        let col = self.col();
        let negative = self.eat_sym('-');
        let n = self.expect_int()?;
        let n = i64::try_from(n).map_err(|_| syntax(self.line, col, "exponent too large"))?;
        let n = if negative { -n } else { n };
        match base {
            RelExpr::Const(c) => c
                .pow(n)
                .map(RelExpr::Const)
                .map_err(|_| syntax(self.line, col, "zero to a negative power")),
            _ if n < 0 => Err(syntax(self.line, col, "negative power of a non-scalar")),
            other => {
                let n = u32::try_from(n).map_err(|_| syntax(self.line, col, "exponent too large"))?;
                Ok(mk_power(other, n, self.scope.field))
            }
        }
    }

    fn index(&mut self, limit: usize) -> Result<Letter, DslError> {
        let col = self.col();
        let n = self.expect_int()?;
        if n == 0 || n as usize > limit {
            return Err(DslError::UnknownGenerator {
                line: self.line,
                col,
                name: format!("y{n}"),
            });
        }
        Ok((n - 1) as Letter)
    }

    fn atom(&mut self) -> Result<RelExpr, DslError> {
        let col = self.col();
        match self.bump() {
            Some(Tok::Int(n)) => {
                let n = i64::try_from(n).map_err(|_| syntax(self.line, col, "integer literal too large"))?;
                Ok(RelExpr::Const(FieldElem::from_int(self.scope.field, n)))
            }
            Some(Tok::Sym('(')) => {
                let e = self.expr()?;
                self.expect_sym(')')?;
                Ok(e)
            }
            Some(Tok::Sym('[')) => {
                let a = self.expr()?;
                self.expect_sym(',')?;
                let b = self.expr()?;
                self.expect_sym(']')?;
                if self.peek() != Some(&Tok::Ident("c".into())) {
                    return Err(self.err("expected `c` after `]`"));
                }
                self.pos += 1;
                self.check_bracket(&a, col)?;
                self.check_bracket(&b, col)?;
                Ok(RelExpr::Bracket(Box::new(a), Box::new(b)))
            }
            Some(Tok::Ident(s)) => self.ident_atom(s, col),
            Some(Tok::Sym(c)) => Err(syntax(self.line, col, format!("unexpected `{c}`"))),
            None => Err(syntax(self.line, col, "unexpected end of line")),
        }
    }

    fn check_bracket(&self, e: &RelExpr, col: usize) -> Result<(), DslError> {
        let q = self
            .scope
            .matrix
            .ok_or_else(|| syntax(self.line, col, "brackets need a matrix"))?;
        match expand(e, q) {
            Ok(l) => {
                let p = l
                    .as_plain()
                    .map_err(|n| syntax(self.line, col, format!("parameter `{n}` inside a bracket")))?;
                if !p.is_zero() && p.degree_of(q.theta()).is_none() {
                    return Err(DslError::NonHomogeneousBracket { line: self.line, col });
                }
                Ok(())
            }
            Err(ExpandError::NotHomogeneous) => {
                Err(DslError::NonHomogeneousBracket { line: self.line, col })
            }
            Err(ExpandError::SymbolicFactor(n)) | Err(ExpandError::LambdaInLhs(n)) => {
                Err(syntax(self.line, col, format!("parameter `{n}` inside a bracket")))
            }
        }
    }

    fn ident_atom(&mut self, s: String, col: usize) -> Result<RelExpr, DslError> {
        let theta = self.scope.theta;
        match s.as_str() {
            "z" => return Ok(RelExpr::Const(FieldElem::root(self.scope.field, 1))),
            "q" => {
                let q = self
                    .scope
                    .matrix
                    .ok_or_else(|| syntax(self.line, col, "`q(i,j)` needs a matrix"))?;
                self.expect_sym('(')?;
                let i = self.index(theta)?;
                self.expect_sym(',')?;
                let j = self.index(theta)?;
                self.expect_sym(')')?;
                return Ok(RelExpr::Const(q.get(i as usize, j as usize).clone()));
            }
            "ad" => {
                self.expect_sym('(')?;
                let mut ix = vec![self.index(theta)?];
                while self.eat_sym(',') {
                    ix.push(self.index(theta)?);
                }
                self.expect_sym(')')?;
                return Ok(RelExpr::IteratedAd(ix));
            }
            "chain" => {
                self.expect_sym('(')?;
                let i = self.index(theta)?;
                self.expect_sym(',')?;
                let j = self.index(theta)?;
                self.expect_sym(')')?;
                return Ok(RelExpr::Chain(i, j));
            }
            "lam" => {
                self.expect_sym('(')?;
                let n = self.expect_ident()?;
                self.expect_sym(')')?;
                return Ok(RelExpr::Lam(n));
            }
            _ => {}
        }
        if let Some((kind, n)) = generator_name(&s) {
            let limit = if kind == 'y' { theta } else { self.scope.group };
            if n == 0 || n > limit {
                return Err(DslError::UnknownGenerator {
                    line: self.line,
                    col,
                    name: s,
                });
            }
            let l = (n - 1) as Letter;
            return Ok(if kind == 'y' { RelExpr::Gen(l) } else { RelExpr::Group(l) });
        }
        Err(syntax(self.line, col, format!("unexpected `{s}`")))
    }
}

/// `y12` -> `('y', 12)`, likewise for `g`.
fn generator_name(s: &str) -> Option<(char, usize)> {
    let mut it = s.chars();
    let kind = it.next()?;
    if kind != 'y' && kind != 'g' {
        return None;
    }
    let rest = it.as_str();
    if rest.is_empty() || !rest.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    rest.parse().ok().map(|n| (kind, n))
}

pub(super) fn neg(e: RelExpr, field: &FieldRef) -> RelExpr {
    match e {
        RelExpr::Const(c) => RelExpr::Const(-&c),
        RelExpr::Scaled(c, x) => {
            let m = -&c;
            if m.is_one() {
                *x
            } else {
                RelExpr::Scaled(m, x)
            }
        }
        other => RelExpr::Scaled(-&FieldElem::one(field), Box::new(other)),
    }
}

pub(super) fn mk_product(factors: Vec<RelExpr>, field: &FieldRef) -> RelExpr {
    let mut c = FieldElem::one(field);
    let mut items = Vec::new();
    fn push(items: &mut Vec<RelExpr>, x: RelExpr) {
        match x {
            RelExpr::Product(v) => items.extend(v),
            other => items.push(other),
        }
    }
    for f in factors {
        match f {
            RelExpr::Const(d) => c = &c * &d,
            RelExpr::Scaled(d, x) => {
                c = &c * &d;
                push(&mut items, *x);
            }
            other => push(&mut items, other),
        }
    }
    if c.is_zero() {
        return RelExpr::Const(c);
    }
    let base = match items.len() {
        0 => return RelExpr::Const(c),
        1 => items.pop().unwrap(),
        _ => RelExpr::Product(items),
    };
    if c.is_one() {
        base
    } else {
        RelExpr::Scaled(c, Box::new(base))
    }
}

pub(super) fn mk_sum(terms: Vec<RelExpr>, field: &FieldRef) -> RelExpr {
    let mut flat = Vec::new();
    for t in terms {
        match t {
            RelExpr::Sum(v) => flat.extend(v),
            other => flat.push(other),
        }
    }
    let mut constant: Option<(usize, FieldElem)> = None;
    let mut out = Vec::new();
    for t in flat {
        match t {
            RelExpr::Const(c) => match &mut constant {
                Some((_, acc)) => *acc = &*acc + &c,
                None => {
                    constant = Some((out.len(), c));
                    out.push(RelExpr::Const(FieldElem::zero(field)));
                }
            },
            other => out.push(other),
        }
    }
    if let Some((at, c)) = constant {
        if c.is_zero() {
            out.remove(at);
        } else {
            out[at] = RelExpr::Const(c);
        }
    }
    match out.len() {
        0 => RelExpr::Const(FieldElem::zero(field)),
        1 => out.pop().unwrap(),
        _ => RelExpr::Sum(out),
    }
}

fn mk_power(base: RelExpr, n: u32, field: &FieldRef) -> RelExpr {
    match (base, n) {
        (_, 0) => RelExpr::Const(FieldElem::one(field)),
        (b, 1) => b,
        (RelExpr::Scaled(c, x), n) => {
            let c = c.pow(n as i64).expect("nonzero coefficient");
            RelExpr::Scaled(c, Box::new(mk_power(*x, n, field)))
        }
        (b, n) => RelExpr::Power(Box::new(b), n),
    }
}

struct Header {
    name: Option<String>,
    field: Option<FieldRef>,
    theta: Option<usize>,
    matrix: Option<BraidingMatrix>,
    order: Option<Vec<Letter>>,
    roots: Option<Vec<MultiDegree>>,
    group: Option<Vec<u32>>,
    notes: Vec<String>,
    exclusions: Vec<(String, String, usize)>,
    flags: Vec<String>,
}

/// Parses presentation text. Comments run from `#` to end of line.
pub fn parse(text: &str) -> Result<Presentation, DslError> {
    let mut h = Header {
        name: None,
        field: None,
        theta: None,
        matrix: None,
        order: None,
        roots: None,
        group: None,
        notes: Vec::new(),
        exclusions: Vec::new(),
        flags: Vec::new(),
    };
    let mut relations: Vec<(Relation, usize)> = Vec::new();
    let mut last_line = 0;
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        last_line = line;
        let content = raw.split('#').next().unwrap_or("");
        let trimmed = content.trim_start();
        if trimmed.trim().is_empty() {
            continue;
        }
        let indent = content.chars().count() - trimmed.chars().count();
        let kw_len = trimmed.find(char::is_whitespace).unwrap_or(trimmed.len());
        let kw = &trimmed[..kw_len];
        let rest = &trimmed[kw_len..];
        let rest_col = indent + kw.chars().count() + 1;
        match kw {
            "presentation" => {
                let name = rest.trim();
                if name.is_empty() || name.contains(char::is_whitespace) {
                    return Err(syntax(line, rest_col, "expected one presentation name"));
                }
                if h.name.is_some() {
                    return Err(syntax(line, 1, "duplicate `presentation` line"));
                }
                h.name = Some(name.to_string());
            }
            "field" => {
                let n = single_int(rest, line, rest_col)?;
                if n == 0 || n > 10_000 {
                    return Err(syntax(line, rest_col, "field order must be in 1..=10000"));
                }
                if h.field.is_some() {
                    return Err(syntax(line, 1, "duplicate `field` line"));
                }
                h.field = Some(make_field(n as u32));
            }
            "theta" => {
                let n = single_int(rest, line, rest_col)?;
                if n == 0 || n > 64 {
                    return Err(syntax(line, rest_col, "rank must be in 1..=64"));
                }
                if h.theta.is_some() {
                    return Err(syntax(line, 1, "duplicate `theta` line"));
                }
                h.theta = Some(n as usize);
            }
            "matrix" => {
                let field = h
                    .field
                    .clone()
                    .ok_or_else(|| syntax(line, 1, "`matrix` needs a preceding `field`"))?;
                let theta = h
                    .theta
                    .ok_or_else(|| syntax(line, 1, "`matrix` needs a preceding `theta`"))?;
                if h.matrix.is_some() {
                    return Err(syntax(line, 1, "duplicate `matrix` line"));
                }
                h.matrix = Some(parse_matrix(rest, line, rest_col, &field, theta)?);
            }
            "group" => {
                let theta = h
                    .theta
                    .ok_or_else(|| syntax(line, 1, "`group` needs a preceding `theta`"))?;
                let toks = lex(rest, line, rest_col)?;
                let mut ms = Vec::new();
                for t in &toks {
                    match t.tok {
                        Tok::Int(m) if (1..=1024).contains(&m) => ms.push(m as u32),
                        _ => return Err(syntax(line, t.col, "expected a group order in 1..=1024")),
                    }
                }
                if ms.is_empty() || ms.len() > 255 - theta {
                    return Err(syntax(line, rest_col, "expected group orders"));
                }
                if h.group.is_some() || h.order.is_some() || !relations.is_empty() {
                    return Err(syntax(line, 1, "`group` must precede `order` and relations"));
                }
                h.group = Some(ms);
            }
            "order" => {
                let theta = h
                    .theta
                    .ok_or_else(|| syntax(line, 1, "`order` needs a preceding `theta`"))?;
                let groups = h.group.as_ref().map_or(0, Vec::len);
                h.order = Some(parse_order(rest, line, rest_col, theta, groups)?);
            }
            "roots" => {
                let theta = h
                    .theta
                    .ok_or_else(|| syntax(line, 1, "`roots` needs a preceding `theta`"))?;
                h.roots = Some(parse_roots(rest, line, rest_col, theta)?);
            }
            "note" => h.notes.push(rest.trim().to_string()),
            "flag" => h.flags.push(rest.trim().to_string()),
            "exclude" => {
                let toks = lex(rest, line, rest_col)?;
                match toks.as_slice() {
                    [Token { tok: Tok::Ident(a), .. }, Token { tok: Tok::Ident(b), .. }] => {
                        h.exclusions.push((a.clone(), b.clone(), line))
                    }
                    _ => return Err(syntax(line, rest_col, "expected two relation names")),
                }
            }
            "rel" => {
                let r = parse_rel(rest, line, rest_col, &h)?;
                if relations.iter().any(|(o, _)| o.name == r.name) {
                    return Err(DslError::DuplicateRelationName { line, name: r.name });
                }
                relations.push((r, line));
            }
            other => {
                return Err(syntax(line, indent + 1, format!("unknown keyword `{other}`")));
            }
        }
    }
    let end = last_line.max(1);
    let name = h.name.ok_or_else(|| syntax(end, 1, "missing `presentation` line"))?;
    let field = h.field.ok_or_else(|| syntax(end, 1, "missing `field` line"))?;
    let matrix = h.matrix.ok_or_else(|| syntax(end, 1, "missing `matrix` line"))?;
    // strata must be 0..=max without gaps
    let mut seen: Vec<u32> = relations.iter().map(|(r, _)| r.stratum).collect();
    seen.sort_unstable();
    seen.dedup();
    for (k, s) in seen.iter().enumerate() {
        if *s as usize != k {
            let line = relations
                .iter()
                .find(|(r, _)| r.stratum == *s)
                .map_or(end, |(_, l)| *l);
            return Err(syntax(line, 1, format!("stratum s{s} used but s{k} is empty")));
        }
    }
    for (r, line) in &relations {
        let mut lams = Vec::new();
        r.lhs.lambdas(&mut lams);
        if let Some(n) = lams.first() {
            return Err(syntax(*line, 1, format!("parameter `{n}` in a left-hand side")));
        }
        if let Some(t) = &r.tail {
            t.lambdas(&mut lams);
        }
        for n in lams {
            match relations.iter().find(|(o, _)| o.name == n) {
                Some((o, _)) if o.deformable => {}
                _ => {
                    return Err(syntax(
                        *line,
                        1,
                        format!("`lam({n})` does not name a deformable relation"),
                    ))
                }
            }
        }
    }
    for (a, b, line) in &h.exclusions {
        for n in [a, b] {
            if !relations.iter().any(|(r, _)| &r.name == n) {
                return Err(syntax(*line, 1, format!("`{n}` is not a relation")));
            }
        }
    }
    Ok(Presentation {
        name,
        field,
        matrix,
        order: h.order,
        roots: h.roots,
        group: h.group,
        notes: h.notes,
        exclusions: h.exclusions.into_iter().map(|(a, b, _)| (a, b)).collect(),
        flags: h.flags,
        relations: relations.into_iter().map(|(r, _)| r).collect(),
    })
}

fn single_int(rest: &str, line: usize, col: usize) -> Result<u64, DslError> {
    let toks = lex(rest, line, col)?;
    match toks.as_slice() {
        [Token { tok: Tok::Int(n), .. }] => Ok(*n),
        [t, ..] => Err(syntax(line, t.col, "expected one integer")),
        [] => Err(syntax(line, col, "expected one integer")),
    }
}

fn parse_matrix(
    rest: &str,
    line: usize,
    col: usize,
    field: &FieldRef,
    theta: usize,
) -> Result<BraidingMatrix, DslError> {
    let toks = lex(rest, line, col)?;
    let end_col = col + rest.chars().count();
    let mut p = Parser {
        toks,
        pos: 0,
        line,
        end_col,
        scope: Scope {
            field,
            matrix: None,
            theta,
            group: 0,
        },
    };
    p.expect_sym('[')?;
    let mut rows = vec![Vec::new()];
    loop {
        let c = p.col();
        match p.expr()? {
            RelExpr::Const(e) => rows.last_mut().unwrap().push(e),
            _ => return Err(syntax(line, c, "matrix entries must be scalars")),
        }
        if p.eat_sym(',') {
            continue;
        }
        if p.eat_sym(';') {
            rows.push(Vec::new());
            continue;
        }
        p.expect_sym(']')?;
        break;
    }
    p.expect_end()?;
    if rows.len() != theta || rows.iter().any(|r| r.len() != theta) {
        return Err(syntax(line, col, format!("matrix must be {theta}x{theta}")));
    }
    BraidingMatrix::new(field, rows).map_err(|e| syntax(line, col, e.to_string()))
}

fn parse_order(
    rest: &str,
    line: usize,
    col: usize,
    theta: usize,
    groups: usize,
) -> Result<Vec<Letter>, DslError> {
    let toks = lex(rest, line, col)?;
    let mut letters = Vec::new();
    for (k, t) in toks.iter().enumerate() {
        if k % 2 == 1 {
            if t.tok != Tok::Sym('<') {
                return Err(syntax(line, t.col, "expected `<`"));
            }
            continue;
        }
        let l = match &t.tok {
            Tok::Ident(s) => match generator_name(s) {
                Some(('y', n)) if (1..=theta).contains(&n) => (n - 1) as Letter,
                Some(('g', n)) if (1..=groups).contains(&n) => (theta + n - 1) as Letter,
                _ => {
                    return Err(DslError::UnknownGenerator {
                        line,
                        col: t.col,
                        name: s.clone(),
                    })
                }
            },
            _ => return Err(syntax(line, t.col, "expected a generator")),
        };
        letters.push(l);
    }
    if toks.len() % 2 == 0 || GenOrder::from_ascending(&letters).is_none() || letters.len() != theta + groups {
        return Err(syntax(line, col, "order must list every generator exactly once"));
    }
    Ok(letters)
}

fn parse_roots(rest: &str, line: usize, col: usize, theta: usize) -> Result<Vec<MultiDegree>, DslError> {
    let toks = lex(rest, line, col)?;
    let field = make_field(1);
    let mut p = Parser {
        toks,
        pos: 0,
        line,
        end_col: col + rest.chars().count(),
        scope: Scope {
            field: &field,
            matrix: None,
            theta,
            group: 0,
        },
    };
    let mut out = Vec::new();
    while !p.at_end() {
        let c = p.col();
        if p.expect_ident()? != "deg" {
            return Err(syntax(line, c, "expected `deg(...)`"));
        }
        p.expect_sym('(')?;
        let mut v = vec![p.expect_int()? as u32];
        while p.eat_sym(',') {
            v.push(p.expect_int()? as u32);
        }
        p.expect_sym(')')?;
        if v.len() != theta || v.iter().all(|&a| a == 0) {
            return Err(syntax(line, c, format!("root degree must be a nonzero vector of length {theta}")));
        }
        out.push(MultiDegree(v));
    }
    if out.is_empty() {
        return Err(syntax(line, col, "expected root degrees"));
    }
    Ok(out)
}

/// A scalar in the relation grammar, e.g. `-1`, `z^3`, `(1 - z)^-1` or, given
/// a matrix, `q(1,2)`. Positions refer to line 1 of `text`.
pub fn parse_scalar(text: &str, field: &FieldRef, matrix: Option<&BraidingMatrix>) -> Result<FieldElem, DslError> {
    let mut p = Parser {
        toks: lex(text, 1, 1)?,
        pos: 0,
        line: 1,
        end_col: 1 + text.chars().count(),
        scope: Scope {
            field,
            matrix,
            theta: matrix.map_or(0, BraidingMatrix::theta),
            group: 0,
        },
    };
    let e = p.expr()?;
    p.expect_end()?;
    match e {
        RelExpr::Const(c) => Ok(c),
        _ => Err(syntax(1, 1, "expected a scalar")),
    }
}

fn parse_rel(rest: &str, line: usize, col: usize, h: &Header) -> Result<Relation, DslError> {
    let (field, matrix) = match (&h.field, &h.matrix) {
        (Some(f), Some(m)) => (f, m),
        _ => return Err(syntax(line, 1, "`rel` needs preceding `field`, `theta` and `matrix`")),
    };
    let toks = lex(rest, line, col)?;
    let mut p = Parser {
        toks,
        pos: 0,
        line,
        end_col: col + rest.chars().count(),
        scope: Scope {
            field,
            matrix: Some(matrix),
            theta: matrix.theta(),
            group: h.group.as_ref().map_or(0, Vec::len),
        },
    };
    let name = p.expect_ident()?;
    let sc = p.col();
    let stratum = match p.expect_ident()?.strip_prefix('s') {
        Some(d) if !d.is_empty() && d.chars().all(|c| c.is_ascii_digit()) => d
            .parse::<u32>()
            .map_err(|_| syntax(line, sc, "stratum too large"))?,
        _ => return Err(syntax(line, sc, "expected a stratum `sK`")),
    };
    let lhs = p.expr()?;
    let (mut primitive, mut deformable, mut tail) = (false, false, None);
    while !p.at_end() {
        let kc = p.col();
        match p.expect_ident()?.as_str() {
            "primitive" if !primitive && !deformable && tail.is_none() => primitive = true,
            "deform" if !deformable && tail.is_none() => deformable = true,
            "tail" if tail.is_none() => tail = Some(p.expr()?),
            _ => return Err(syntax(line, kc, "expected `primitive`, `deform` or `tail`")),
        }
    }
    Ok(Relation {
        name,
        stratum,
        lhs,
        tail,
        deformable,
        primitive,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const HEAD: &str = "presentation t\nfield 3\ntheta 2\nmatrix [z, z; z, z]\n";

    fn with(rel: &str) -> Result<Presentation, DslError> {
        parse(&format!("{HEAD}{rel}\n"))
    }

    #[test]
    fn iterated_ad_relation() {
        let p = with("rel r112 s0 ad(1,1,2) deform").unwrap();
        let r = &p.relations[0];
        assert_eq!(r.lhs, RelExpr::IteratedAd(vec![0, 0, 1]));
        assert_eq!(r.rhs(&p.field), RelExpr::Lam("r112".into()));
        assert!(r.is_primitive());
    }

    #[test]
    fn power_relation() {
        let p = with("rel r s0 ad(1,2)\nrel p1 s1 y1^3 deform").unwrap();
        assert_eq!(p.relations[1].lhs, RelExpr::Power(Box::new(RelExpr::Gen(0)), 3));
        assert_eq!(p.relations[1].stratum, 1);
    }

    #[test]
    fn scalar_folding() {
        let p = with("rel r s0 2*z*y1 - y1*(1/2) + 3 - 3").unwrap();
        let f = &p.field;
        let two_z = FieldElem::from_int(f, 2) * FieldElem::root(f, 1);
        let half = FieldElem::from_int(f, 2).inv().unwrap();
        assert_eq!(
            p.relations[0].lhs,
            RelExpr::Sum(vec![
                RelExpr::Scaled(two_z, Box::new(RelExpr::Gen(0))),
                RelExpr::Scaled(-&half, Box::new(RelExpr::Gen(0))),
            ])
        );
    }

    #[test]
    fn scalars_alone() {
        let f = make_field(6);
        let z = FieldElem::root(&f, 1);
        assert_eq!(parse_scalar("z^-1", &f, None).unwrap(), z.inv().unwrap());
        assert_eq!(parse_scalar(" -2/3", &f, None).unwrap(), FieldElem::from_int(&f, -2) / FieldElem::from_int(&f, 3));
        assert!(matches!(parse_scalar("y1", &f, None), Err(DslError::UnknownGenerator { col: 1, .. })));
        assert!(matches!(parse_scalar("1 +", &f, None), Err(DslError::SyntaxError { col: 4, .. })));
        let q = BraidingMatrix::from_exponents(&f, &[vec![3, 1], vec![5, 3]]).unwrap();
        assert_eq!(parse_scalar("q(1,2)", &f, Some(&q)).unwrap(), z);
    }

    #[test]
    fn errors_carry_positions() {
        assert!(matches!(
            with("rel r s0 y3"),
            Err(DslError::UnknownGenerator { line: 5, col: 10, .. })
        ));
        assert!(matches!(
            with("rel r s0 [y1 + y2, y1]c"),
            Err(DslError::NonHomogeneousBracket { line: 5, col: 10 })
        ));
        assert!(matches!(
            with("rel r s0 y1\nrel r s0 y2"),
            Err(DslError::DuplicateRelationName { line: 6, .. })
        ));
        assert!(matches!(
            with("rel r s0 y1 +"),
            Err(DslError::SyntaxError { line: 5, col: 14, .. })
        ));
        assert!(matches!(with("rel r s1 y1"), Err(DslError::SyntaxError { line: 5, .. })));
    }

    #[test]
    fn tails_reference_deformable_relations() {
        assert!(with("rel a s0 ad(1,1,2) deform\nrel b s0 ad(2,2,1) deform tail lam(a)*y1*y1*y2").is_ok());
        assert!(with("rel a s0 ad(1,1,2)\nrel b s0 ad(2,2,1) deform tail lam(a)").is_err());
    }
}
