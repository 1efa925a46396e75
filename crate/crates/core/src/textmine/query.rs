//! Boolean topic queries in the style of bibliographic database search
//! strings, e.g. `[queu* AND (multihop* OR multi hop OR multi-hop*) AND network*]`.
//!
//! Grammar (operators are uppercase keywords):
//!
//! ```text
//! query   := or
//! or      := and ("OR" and)*
//! and     := unary ("AND" unary)*
//! unary   := "NOT" unary | primary
//! primary := "(" or ")" | QUOTED | WORD+
//! ```
//!
//! Adjacent bare words form a phrase. `*` is allowed only as a word suffix.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QueryError {
    #[error("empty query")]
    Empty,
    #[error("unbalanced parentheses at offset {0}")]
    Unbalanced(usize),
    #[error("empty group at offset {0}")]
    EmptyGroup(usize),
    #[error("wildcard must be a word suffix: `{0}`")]
    Wildcard(String),
    #[error("operator `{op}` at offset {at} is missing an operand")]
    MissingOperand { op: String, at: usize },
    #[error("term `{0}` has no searchable characters")]
    EmptyTerm(String),
    #[error("unexpected `{found}` at offset {at}")]
    Unexpected { found: String, at: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum QueryNode {
    Term(String),
    /// Prefix match; the stored string excludes the `*`.
    Wildcard(String),
    /// Adjacent words; a word ending in `*` matches as a prefix.
    Phrase(Vec<String>),
    And(Vec<QueryNode>),
    Or(Vec<QueryNode>),
    Not(Box<QueryNode>),
}

impl QueryNode {
    fn is_compound(&self) -> bool {
        matches!(self, QueryNode::And(_) | QueryNode::Or(_))
    }

    /// Canonical text; parsing it yields an identical tree.
    pub fn render(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for QueryNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let child = |f: &mut fmt::Formatter<'_>, c: &QueryNode| {
            if c.is_compound() {
                write!(f, "({c})")
            } else {
                write!(f, "{c}")
            }
        };
        match self {
            QueryNode::Term(t) => f.write_str(t),
            QueryNode::Wildcard(p) => write!(f, "{p}*"),
            QueryNode::Phrase(words) => f.write_str(&words.join(" ")),
            QueryNode::And(cs) | QueryNode::Or(cs) => {
                let op = if matches!(self, QueryNode::And(_)) { " AND " } else { " OR " };
                for (i, c) in cs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(op)?;
                    }
                    child(f, c)?;
                }
                Ok(())
            }
            QueryNode::Not(c) => {
                f.write_str("NOT ")?;
                child(f, c)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Open,
    Close,
    And,
    Or,
    Not,
    Word(String),
    Quoted(Vec<String>),
}

fn check_word(raw: &str) -> Result<String, QueryError> {
    let word = raw.to_lowercase();
    let stem = word.strip_suffix('*').unwrap_or(&word);
    if stem.contains('*') {
        return Err(QueryError::Wildcard(raw.to_string()));
    }
    if super::tokenize(stem).is_empty() {
        return Err(if raw.contains('*') {
            QueryError::Wildcard(raw.to_string())
        } else {
            QueryError::EmptyTerm(raw.to_string())
        });
    }
    Ok(word)
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, QueryError> {
    let mut body = text.trim();
    let mut base = text.len() - text.trim_start().len();
    if body.starts_with('[') && body.ends_with(']') && body.len() >= 2 {
        body = &body[1..body.len() - 1];
        base += 1;
    }
    let mut out = Vec::new();
    let mut chars = body.char_indices().peekable();
    while let Some(&(i, c)) = chars.peek() {
        let at = base + i;
        match c {
            c if c.is_whitespace() => {
                chars.next();
            }
            '(' => {
                chars.next();
                out.push((at, Tok::Open));
            }
            ')' => {
                chars.next();
                out.push((at, Tok::Close));
            }
            '[' | ']' => {
                return Err(QueryError::Unexpected {
                    found: c.to_string(),
                    at,
                })
            }
            '"' => {
                chars.next();
                let mut inner = String::new();
                let mut closed = false;
                for (_, c) in chars.by_ref() {
                    if c == '"' {
                        closed = true;
                        break;
                    }
                    inner.push(c);
                }
                if !closed {
                    return Err(QueryError::Unexpected {
                        found: "\"".into(),
                        at,
                    });
                }
                let words = inner
                    .split_whitespace()
                    .map(check_word)
                    .collect::<Result<Vec<_>, _>>()?;
                if words.is_empty() {
                    return Err(QueryError::EmptyGroup(at));
                }
                out.push((at, Tok::Quoted(words)));
            }
            _ => {
                let mut word = String::new();
                while let Some(&(_, c)) = chars.peek() {
                    if c.is_whitespace() || matches!(c, '(' | ')' | '"' | '[' | ']') {
                        break;
                    }
                    word.push(c);
                    chars.next();
                }
                let tok = match word.as_str() {
                    "AND" => Tok::And,
                    "OR" => Tok::Or,
                    "NOT" => Tok::Not,
                    _ => Tok::Word(check_word(&word)?),
                };
                out.push((at, tok));
            }
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(at, _)| *at)
    }

    fn chain(
        &mut self,
        op: Tok,
        name: &str,
        next: fn(&mut Self) -> Result<QueryNode, QueryError>,
        build: fn(Vec<QueryNode>) -> QueryNode,
    ) -> Result<QueryNode, QueryError> {
        let mut items = vec![next(self)?];
        while self.peek() == Some(&op) {
            let at = self.offset();
            self.pos += 1;
            if matches!(self.peek(), None | Some(Tok::Close | Tok::And | Tok::Or)) {
                return Err(QueryError::MissingOperand { op: name.into(), at });
            }
            items.push(next(self)?);
        }
        Ok(if items.len() == 1 { items.pop().unwrap() } else { build(items) })
    }

    fn or(&mut self) -> Result<QueryNode, QueryError> {
        self.chain(Tok::Or, "OR", Self::and, QueryNode::Or)
    }

    fn and(&mut self) -> Result<QueryNode, QueryError> {
        self.chain(Tok::And, "AND", Self::unary, QueryNode::And)
    }

    fn unary(&mut self) -> Result<QueryNode, QueryError> {
        if self.peek() == Some(&Tok::Not) {
            let at = self.offset();
            self.pos += 1;
            if matches!(self.peek(), None | Some(Tok::Close | Tok::And | Tok::Or)) {
                return Err(QueryError::MissingOperand { op: "NOT".into(), at });
            }
            return Ok(QueryNode::Not(Box::new(self.unary()?)));
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<QueryNode, QueryError> {
        let at = self.offset();
        match self.peek().cloned() {
            Some(Tok::Open) => {
                self.pos += 1;
                if self.peek() == Some(&Tok::Close) {
                    return Err(QueryError::EmptyGroup(at));
                }
                let inner = self.or()?;
                if self.peek() != Some(&Tok::Close) {
                    return Err(QueryError::Unbalanced(at));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(Tok::Quoted(words)) => {
                self.pos += 1;
                Ok(leaf(words))
            }
            Some(Tok::Word(_)) => {
                let mut words = Vec::new();
                while let Some(Tok::Word(w)) = self.peek() {
                    words.push(w.clone());
                    self.pos += 1;
                }
                Ok(leaf(words))
            }
            Some(Tok::Close) => Err(QueryError::Unbalanced(at)),
            Some(t) => Err(QueryError::MissingOperand {
                op: format!("{t:?}").to_uppercase(),
                at,
            }),
            None => Err(QueryError::Empty),
        }
    }
}

fn leaf(mut words: Vec<String>) -> QueryNode {
    if words.len() > 1 {
        return QueryNode::Phrase(words);
    }
    let w = words.pop().unwrap();
    match w.strip_suffix('*') {
        Some(p) => QueryNode::Wildcard(p.to_string()),
        None => QueryNode::Term(w),
    }
}

/// Parses a search string; an outer `[...]` pair is ignored.
pub fn parse_query(text: &str) -> Result<QueryNode, QueryError> {
    let toks = lex(text)?;
    if toks.is_empty() {
        return Err(QueryError::Empty);
    }
    let mut p = Parser {
        toks,
        pos: 0,
        end: text.len(),
    };
    let node = p.or()?;
    match p.toks.get(p.pos) {
        None => Ok(node),
        Some((at, Tok::Close)) => Err(QueryError::Unbalanced(*at)),
        Some((at, t)) => Err(QueryError::Unexpected {
            found: format!("{t:?}"),
            at: *at,
        }),
    }
}

/// One token of a compiled pattern.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Piece {
    text: String,
    prefix: bool,
}

#[derive(Debug, Clone)]
enum Compiled {
    Seq(Vec<Piece>),
    And(Vec<Compiled>),
    Or(Vec<Compiled>),
    Not(Box<Compiled>),
}

/// A parsed query ready for matching against tokenized text.
///
/// Hyphenated query words match the same token sequence as the text they
/// came from, so `multi-hop*` matches "multi-hop" and "multi hopping".
#[derive(Debug, Clone)]
pub struct Query {
    ast: QueryNode,
    compiled: Compiled,
}

fn pieces(word: &str, prefix: bool) -> Vec<Piece> {
    let toks = super::tokenize(word);
    let n = toks.len();
    toks.into_iter()
        .enumerate()
        .map(|(i, text)| Piece {
            text,
            prefix: prefix && i + 1 == n,
        })
        .collect()
}

fn compile(node: &QueryNode) -> Compiled {
    match node {
        QueryNode::Term(t) => Compiled::Seq(pieces(t, false)),
        QueryNode::Wildcard(p) => Compiled::Seq(pieces(p, true)),
        QueryNode::Phrase(words) => Compiled::Seq(
            words
                .iter()
                .flat_map(|w| match w.strip_suffix('*') {
                    Some(p) => pieces(p, true),
                    None => pieces(w, false),
                })
                .collect(),
        ),
        QueryNode::And(cs) => Compiled::And(cs.iter().map(compile).collect()),
        QueryNode::Or(cs) => Compiled::Or(cs.iter().map(compile).collect()),
        QueryNode::Not(c) => Compiled::Not(Box::new(compile(c))),
    }
}

fn seq_matches(seq: &[Piece], tokens: &[String]) -> bool {
    if seq.is_empty() || seq.len() > tokens.len() {
        return false;
    }
    tokens.windows(seq.len()).any(|w| {
        w.iter().zip(seq).all(|(t, p)| {
            if p.prefix {
                t.starts_with(&p.text)
            } else {
                *t == p.text
            }
        })
    })
}

fn eval(c: &Compiled, tokens: &[String]) -> bool {
    match c {
        Compiled::Seq(s) => seq_matches(s, tokens),
        Compiled::And(cs) => cs.iter().all(|c| eval(c, tokens)),
        Compiled::Or(cs) => cs.iter().any(|c| eval(c, tokens)),
        Compiled::Not(c) => !eval(c, tokens),
    }
}

impl Query {
    pub fn parse(text: &str) -> Result<Self, QueryError> {
        Ok(Query::from_ast(parse_query(text)?))
    }

    pub fn from_ast(ast: QueryNode) -> Self {
        let compiled = compile(&ast);
        Query { ast, compiled }
    }

    pub fn ast(&self) -> &QueryNode {
        &self.ast
    }

    /// Matches against already tokenized text (see [`super::tokenize`]).
    pub fn matches_tokens(&self, tokens: &[String]) -> bool {
        eval(&self.compiled, tokens)
    }

    pub fn matches_text(&self, text: &str) -> bool {
        self.matches_tokens(&super::tokenize(text))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use QueryNode::*;

    fn w(s: &str) -> QueryNode {
        Wildcard(s.into())
    }

    fn t(s: &str) -> QueryNode {
        Term(s.into())
    }

    const TE: &str = "[queu* AND (multihop* OR multi hop OR multi-hop*) AND network*]";

    #[test]
    fn te_search_string() {
        let ast = parse_query(TE).unwrap();
        assert_eq!(
            ast,
            And(vec![
                w("queu"),
                Or(vec![w("multihop"), Phrase(vec!["multi".into(), "hop".into()]), w("multi-hop")]),
                w("network"),
            ])
        );
        assert_eq!(parse_query(&ast.render()).unwrap(), ast);
    }

    #[test]
    fn precedence_and_case() {
        assert_eq!(parse_query("laser").unwrap(), t("laser"));
        assert_eq!(parse_query("Laser").unwrap(), t("laser"));
        assert_eq!(
            parse_query("a AND b OR c").unwrap(),
            Or(vec![And(vec![t("a"), t("b")]), t("c")])
        );
        assert_eq!(
            parse_query("NOT a AND b").unwrap(),
            And(vec![Not(Box::new(t("a"))), t("b")])
        );
        // Parenthesized groups stay nested.
        assert_eq!(
            parse_query("a AND (b AND c)").unwrap(),
            And(vec![t("a"), And(vec![t("b"), t("c")])])
        );
        // Lowercase connectives are ordinary words.
        assert_eq!(
            parse_query("salt and pepper").unwrap(),
            Phrase(vec!["salt".into(), "and".into(), "pepper".into()])
        );
    }

    #[test]
    fn syntax_errors() {
        assert_eq!(parse_query(""), Err(QueryError::Empty));
        assert_eq!(parse_query("[]"), Err(QueryError::Empty));
        assert!(matches!(parse_query("(a OR b"), Err(QueryError::Unbalanced(_))));
        assert!(matches!(parse_query("a OR b)"), Err(QueryError::Unbalanced(_))));
        assert!(matches!(parse_query("a AND ()"), Err(QueryError::EmptyGroup(_))));
        assert!(matches!(parse_query("*particle*"), Err(QueryError::Wildcard(_))));
        assert!(matches!(parse_query("qu*eue"), Err(QueryError::Wildcard(_))));
        assert!(matches!(parse_query("a AND"), Err(QueryError::MissingOperand { .. })));
        assert!(matches!(parse_query("OR a"), Err(QueryError::MissingOperand { .. })));
    }

    #[test]
    fn matching_rules() {
        let q = Query::parse(TE).unwrap();
        assert!(q.matches_text("Queueing in multi-hop wireless networks"));
        assert!(q.matches_text("Queue stability for multihop networking"));
        assert!(!q.matches_text("Queueing in wireless networks"));
        let p = Query::parse("multihop*").unwrap();
        assert!(p.matches_text("multihopping schemes"));
        let phrase = Query::parse("multi hop").unwrap();
        assert!(phrase.matches_text("a multi-hop relay"));
        assert!(!phrase.matches_text("hop multi"));
        let quoted = Query::parse("\"fiber taper*\" AND NOT review").unwrap();
        assert!(quoted.matches_text("Shaped fiber tapers"));
        assert!(!quoted.matches_text("A review of fiber tapering"));
    }
}
