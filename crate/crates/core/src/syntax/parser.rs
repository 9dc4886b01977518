//! Recursive-descent parser for the ASCII formula syntax.
//!
//! ```text
//! formula := disj ( "->" formula )?            right associative
//! disj    := conj ( "|" conj )*
//! conj    := unary ( "&" unary )*
//! unary   := "~" unary | "*" unary | quant | primary
//! quant   := ("forall" | "exists") var "." formula   body extends maximally right
//! primary := "(" formula ")" | term "=" term | Name ( "(" term ("," term)* ")" )?
//! term    := var | const | "@" digits | name "(" term ("," term)* ")"
//! ```

use std::fmt;

use thiserror::Error;

use super::{Formula, Signature, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind} at offset {offset}")]
pub struct ParseError {
    pub offset: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    UnexpectedChar(char),
    Unexpected { found: String, expected: &'static str },
    UndeclaredSymbol { kind: &'static str, name: String },
    ArityMismatch { name: String, expected: usize, found: usize },
    SymbolClash { name: String },
    EqualityNotInSignature,
    BadVariable(String),
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::UnexpectedChar(c) => write!(f, "syntax error: unexpected character `{c}`"),
            ParseErrorKind::Unexpected { found, expected } => {
                write!(f, "syntax error: expected {expected}, found {found}")
            }
            ParseErrorKind::UndeclaredSymbol { kind, name } => write!(f, "undeclared {kind} `{name}`"),
            ParseErrorKind::ArityMismatch { name, expected, found } => {
                write!(f, "`{name}` expects {expected} argument(s), found {found}")
            }
            ParseErrorKind::SymbolClash { name } => {
                write!(f, "`{name}` is used both as a predicate and as a function")
            }
            ParseErrorKind::EqualityNotInSignature => write!(f, "equality is not part of the signature"),
            ParseErrorKind::BadVariable(x) => write!(f, "`{x}` cannot be used as a variable"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Domain(usize),
    LParen,
    RParen,
    Comma,
    Dot,
    Tilde,
    Star,
    Amp,
    Pipe,
    Arrow,
    Equals,
    Forall,
    Exists,
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Domain(k) => write!(f, "`@{k}`"),
            Tok::LParen => write!(f, "`(`"),
            Tok::RParen => write!(f, "`)`"),
            Tok::Comma => write!(f, "`,`"),
            Tok::Dot => write!(f, "`.`"),
            Tok::Tilde => write!(f, "`~`"),
            Tok::Star => write!(f, "`*`"),
            Tok::Amp => write!(f, "`&`"),
            Tok::Pipe => write!(f, "`|`"),
            Tok::Arrow => write!(f, "`->`"),
            Tok::Equals => write!(f, "`=`"),
            Tok::Forall => write!(f, "`forall`"),
            Tok::Exists => write!(f, "`exists`"),
            Tok::End => write!(f, "end of input"),
        }
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut cs = s.chars();
    matches!(cs.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && cs.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
        && s != "forall"
        && s != "exists"
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            ',' => Tok::Comma,
            '.' => Tok::Dot,
            '~' => Tok::Tilde,
            '*' => Tok::Star,
            '&' => Tok::Amp,
            '|' => Tok::Pipe,
            '=' => Tok::Equals,
            '-' if bytes.get(i + 1) == Some(&b'>') => {
                i += 1;
                Tok::Arrow
            }
            '@' => {
                let mut j = i + 1;
                while j < bytes.len() && bytes[j].is_ascii_digit() {
                    j += 1;
                }
                if j == i + 1 {
                    return Err(ParseError {
                        offset: start,
                        kind: ParseErrorKind::UnexpectedChar('@'),
                    });
                }
                let k = text[i + 1..j].parse().map_err(|_| ParseError {
                    offset: start,
                    kind: ParseErrorKind::UnexpectedChar('@'),
                })?;
                i = j - 1;
                Tok::Domain(k)
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut j = i + 1;
                while j < bytes.len()
                    && (bytes[j].is_ascii_alphanumeric() || bytes[j] == b'_' || bytes[j] == b'\'')
                {
                    j += 1;
                }
                let word = &text[i..j];
                i = j - 1;
                match word {
                    "forall" => Tok::Forall,
                    "exists" => Tok::Exists,
                    _ => Tok::Ident(word.to_string()),
                }
            }
            _ => {
                let ch = text[i..].chars().next().unwrap_or(c);
                return Err(ParseError { offset: start, kind: ParseErrorKind::UnexpectedChar(ch) });
            }
        };
        out.push((tok, start));
        i += 1;
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

enum Symbols<'a> {
    Strict(&'a Signature),
    Extending(&'a mut Signature),
}

impl Symbols<'_> {
    fn sig(&self) -> &Signature {
        match self {
            Symbols::Strict(s) => s,
            Symbols::Extending(s) => s,
        }
    }
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    symbols: Symbols<'a>,
}

/// Parses `text` against a fixed signature. Undeclared lowercase identifiers
/// in term position are variables; everything else must be declared.
pub fn parse_formula(text: &str, sig: &Signature) -> Result<Formula, ParseError> {
    Parser::new(text, Symbols::Strict(sig))?.parse_all()
}

/// Parses `text`, adding any predicate or function symbol it uses to `sig`
/// (arities are fixed by first use). Constants are never inferred: an
/// undeclared identifier in term position is a variable.
pub fn parse_formula_extending(text: &str, sig: &mut Signature) -> Result<Formula, ParseError> {
    Parser::new(text, Symbols::Extending(sig))?.parse_all()
}

pub fn parse_term(text: &str, sig: &Signature) -> Result<Term, ParseError> {
    let mut p = Parser::new(text, Symbols::Strict(sig))?;
    let t = p.term()?;
    p.expect(Tok::End, "end of input")?;
    Ok(t)
}

impl<'a> Parser<'a> {
    fn new(text: &str, symbols: Symbols<'a>) -> Result<Parser<'a>, ParseError> {
        Ok(Parser { toks: lex(text)?, pos: 0, symbols })
    }

    fn parse_all(&mut self) -> Result<Formula, ParseError> {
        let f = self.formula()?;
        self.expect(Tok::End, "end of input")?;
        Ok(f)
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self, expected: &'static str) -> ParseError {
        ParseError {
            offset: self.offset(),
            kind: ParseErrorKind::Unexpected { found: self.peek().to_string(), expected },
        }
    }

    fn expect(&mut self, tok: Tok, what: &'static str) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(what))
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let left = self.disjunction()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let right = self.formula()?;
            return Ok(Formula::imp(left, right));
        }
        Ok(left)
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let mut left = self.conjunction()?;
        while *self.peek() == Tok::Pipe {
            self.bump();
            let right = self.conjunction()?;
            left = Formula::or(left, right);
        }
        Ok(left)
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut left = self.unary()?;
        while *self.peek() == Tok::Amp {
            self.bump();
            let right = self.unary()?;
            left = Formula::and(left, right);
        }
        Ok(left)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Tok::Tilde => {
                self.bump();
                Ok(Formula::neg(self.unary()?))
            }
            Tok::Star => {
                self.bump();
                Ok(Formula::cons(self.unary()?))
            }
            Tok::Forall | Tok::Exists => {
                let q = self.bump();
                let x = self.bound_variable()?;
                self.expect(Tok::Dot, "`.` after quantified variable")?;
                let body = self.formula()?;
                Ok(if q == Tok::Forall { Formula::forall(&x, body) } else { Formula::exists(&x, body) })
            }
            _ => self.primary(),
        }
    }

    fn bound_variable(&mut self) -> Result<String, ParseError> {
        let offset = self.offset();
        match self.bump() {
            Tok::Ident(x) => {
                self.check_variable(&x, offset)?;
                Ok(x)
            }
            other => {
                self.pos -= 1;
                Err(ParseError {
                    offset,
                    kind: ParseErrorKind::Unexpected { found: other.to_string(), expected: "a variable" },
                })
            }
        }
    }

    fn check_variable(&self, x: &str, offset: usize) -> Result<(), ParseError> {
        let sig = self.symbols.sig();
        let lower = x.starts_with(|c: char| c.is_ascii_lowercase());
        if !lower || sig.constants.contains(x) || sig.functions.contains_key(x) {
            return Err(ParseError { offset, kind: ParseErrorKind::BadVariable(x.to_string()) });
        }
        Ok(())
    }

    fn primary(&mut self) -> Result<Formula, ParseError> {
        match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            }
            Tok::Domain(_) => {
                let left = self.term()?;
                self.equation_rest(left)
            }
            Tok::Ident(name) => {
                let start = self.offset();
                let is_term = match self.peek_at(1) {
                    Tok::Equals => true,
                    Tok::LParen => self.application_followed_by_equals(),
                    _ => false,
                };
                if is_term {
                    let left = self.term()?;
                    return self.equation_rest(left);
                }
                self.bump();
                let args = if *self.peek() == Tok::LParen { self.arguments()? } else { Vec::new() };
                self.declare_predicate(&name, args.len(), start)?;
                Ok(Formula::Atom(name, args))
            }
            _ => Err(self.unexpected("a formula")),
        }
    }

    /// With the cursor on `name (`, decides whether the application is the
    /// left side of an equation by scanning to the matching parenthesis.
    fn application_followed_by_equals(&self) -> bool {
        let mut depth = 0usize;
        let mut k = self.pos + 1;
        while k < self.toks.len() {
            match self.toks[k].0 {
                Tok::LParen => depth += 1,
                Tok::RParen => {
                    depth -= 1;
                    if depth == 0 {
                        return matches!(self.toks.get(k + 1), Some((Tok::Equals, _)));
                    }
                }
                Tok::End => return false,
                _ => {}
            }
            k += 1;
        }
        false
    }

    fn equation_rest(&mut self, left: Term) -> Result<Formula, ParseError> {
        let offset = self.offset();
        self.expect(Tok::Equals, "`=`")?;
        match &mut self.symbols {
            Symbols::Strict(sig) if !sig.has_equality => {
                return Err(ParseError { offset, kind: ParseErrorKind::EqualityNotInSignature });
            }
            Symbols::Extending(sig) => sig.has_equality = true,
            _ => {}
        }
        let right = self.term()?;
        Ok(Formula::Eq(left, right))
    }

    fn arguments(&mut self) -> Result<Vec<Term>, ParseError> {
        self.expect(Tok::LParen, "`(`")?;
        let mut args = vec![self.term()?];
        while *self.peek() == Tok::Comma {
            self.bump();
            args.push(self.term()?);
        }
        self.expect(Tok::RParen, "`,` or `)`")?;
        Ok(args)
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let offset = self.offset();
        match self.peek().clone() {
            Tok::Domain(k) => {
                self.bump();
                Ok(Term::Domain(k))
            }
            Tok::Ident(name) => {
                self.bump();
                if *self.peek() == Tok::LParen {
                    let args = self.arguments()?;
                    self.declare_function(&name, args.len(), offset)?;
                    return Ok(Term::App(name, args));
                }
                if self.symbols.sig().constants.contains(&name) {
                    return Ok(Term::Const(name));
                }
                if self.symbols.sig().predicates.contains_key(&name)
                    || self.symbols.sig().functions.contains_key(&name)
                    || !name.starts_with(|c: char| c.is_ascii_lowercase())
                {
                    return Err(ParseError {
                        offset,
                        kind: ParseErrorKind::UndeclaredSymbol { kind: "constant", name },
                    });
                }
                Ok(Term::Var(name))
            }
            _ => Err(self.unexpected("a term")),
        }
    }

    fn declare_predicate(&mut self, name: &str, arity: usize, offset: usize) -> Result<(), ParseError> {
        let err = |kind| Err(ParseError { offset, kind });
        match &mut self.symbols {
            Symbols::Strict(sig) => match sig.predicates.get(name) {
                None => err(ParseErrorKind::UndeclaredSymbol { kind: "predicate", name: name.to_string() }),
                Some(&a) if a != arity => {
                    err(ParseErrorKind::ArityMismatch { name: name.to_string(), expected: a, found: arity })
                }
                Some(_) => Ok(()),
            },
            Symbols::Extending(sig) => {
                if sig.functions.contains_key(name) || sig.constants.contains(name) {
                    return err(ParseErrorKind::SymbolClash { name: name.to_string() });
                }
                match sig.predicates.get(name) {
                    Some(&a) if a != arity => err(ParseErrorKind::ArityMismatch {
                        name: name.to_string(),
                        expected: a,
                        found: arity,
                    }),
                    Some(_) => Ok(()),
                    None => {
                        sig.predicates.insert(name.to_string(), arity);
                        Ok(())
                    }
                }
            }
        }
    }

    fn declare_function(&mut self, name: &str, arity: usize, offset: usize) -> Result<(), ParseError> {
        let err = |kind| Err(ParseError { offset, kind });
        match &mut self.symbols {
            Symbols::Strict(sig) => match sig.functions.get(name) {
                None => err(ParseErrorKind::UndeclaredSymbol { kind: "function", name: name.to_string() }),
                Some(&a) if a != arity => {
                    err(ParseErrorKind::ArityMismatch { name: name.to_string(), expected: a, found: arity })
                }
                Some(_) => Ok(()),
            },
            Symbols::Extending(sig) => {
                if sig.predicates.contains_key(name) || sig.constants.contains(name) {
                    return err(ParseErrorKind::SymbolClash { name: name.to_string() });
                }
                match sig.functions.get(name) {
                    Some(&a) if a != arity => err(ParseErrorKind::ArityMismatch {
                        name: name.to_string(),
                        expected: a,
                        found: arity,
                    }),
                    Some(_) => Ok(()),
                    None => {
                        sig.functions.insert(name.to_string(), arity);
                        Ok(())
                    }
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fo_sig() -> Signature {
        Signature::new()
            .with_constant("c")
            .with_constant("d")
            .with_function("f", 1)
            .with_function("g", 2)
            .with_predicate("P", 1)
            .with_predicate("Q", 2)
            .with_predicate("p", 0)
            .with_predicate("q", 0)
            .with_equality()
    }

    fn pc() -> Formula {
        Formula::atom("P", vec![Term::constant("c")])
    }

    #[test]
    fn negation_and_consistency() {
        let f = parse_formula("~P(c) & *P(c)", &fo_sig()).unwrap();
        assert_eq!(f, Formula::and(Formula::neg(pc()), Formula::cons(pc())));
    }

    #[test]
    fn quantifier_body_extends_right() {
        let f = parse_formula("forall x. P(x) -> exists y. Q(x,y)", &fo_sig()).unwrap();
        let expected = Formula::forall(
            "x",
            Formula::imp(
                Formula::atom("P", vec![Term::var("x")]),
                Formula::exists("y", Formula::atom("Q", vec![Term::var("x"), Term::var("y")])),
            ),
        );
        assert_eq!(f, expected);
    }

    #[test]
    fn truncated_input_reports_offset() {
        let err = parse_formula("P(x,", &fo_sig()).unwrap_err();
        assert_eq!(err.offset, 4);
        assert!(matches!(err.kind, ParseErrorKind::Unexpected { .. }));
    }

    #[test]
    fn precedence_and_associativity() {
        let sig = Signature::new().with_predicate("p", 0).with_predicate("q", 0).with_predicate("r", 0);
        let (p, q, r) = (Formula::prop("p"), Formula::prop("q"), Formula::prop("r"));
        assert_eq!(
            parse_formula("p -> q -> r", &sig).unwrap(),
            Formula::imp(p.clone(), Formula::imp(q.clone(), r.clone()))
        );
        assert_eq!(
            parse_formula("p | q & r", &sig).unwrap(),
            Formula::or(p.clone(), Formula::and(q.clone(), r.clone()))
        );
        assert_eq!(
            parse_formula("~p & q", &sig).unwrap(),
            Formula::and(Formula::neg(p.clone()), q.clone())
        );
        assert_eq!(
            parse_formula("p & q & r", &sig).unwrap(),
            Formula::and(Formula::and(p.clone(), q.clone()), r.clone())
        );
        assert_eq!(
            parse_formula("(p -> q) -> r", &sig).unwrap(),
            Formula::imp(Formula::imp(p, q), r)
        );
    }

    #[test]
    fn equality_and_terms() {
        let f = parse_formula("f(c) = g(x,@1)", &fo_sig()).unwrap();
        assert_eq!(
            f,
            Formula::eq(
                Term::app("f", vec![Term::constant("c")]),
                Term::app("g", vec![Term::var("x"), Term::Domain(1)])
            )
        );
        let g = parse_formula("~c = d", &fo_sig()).unwrap();
        assert_eq!(g, Formula::neg(Formula::eq(Term::constant("c"), Term::constant("d"))));
        let no_eq = Signature::new().with_predicate("P", 1);
        let err = parse_formula("x = y", &no_eq).unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::EqualityNotInSignature);
    }

    #[test]
    fn undeclared_and_arity_errors() {
        let sig = fo_sig();
        let err = parse_formula("R(c)", &sig).unwrap_err();
        assert!(matches!(err.kind, ParseErrorKind::UndeclaredSymbol { kind: "predicate", .. }));
        let err = parse_formula("P(c,d)", &sig).unwrap_err();
        assert_eq!(
            err.kind,
            ParseErrorKind::ArityMismatch { name: "P".into(), expected: 1, found: 2 }
        );
        let err = parse_formula("P(h(c))", &sig).unwrap_err();
        assert!(matches!(err.kind, ParseErrorKind::UndeclaredSymbol { kind: "function", .. }));
        let err = parse_formula("forall c. P(c)", &sig).unwrap_err();
        assert!(matches!(err.kind, ParseErrorKind::BadVariable(_)));
        let err = parse_formula("p # q", &sig).unwrap_err();
        assert_eq!(err.offset, 2);
    }

    #[test]
    fn extending_mode_infers_symbols() {
        let mut sig = Signature::new();
        let f = parse_formula_extending("p & ~q -> R(f(x))", &mut sig).unwrap();
        assert_eq!(sig.predicates.get("p"), Some(&0));
        assert_eq!(sig.predicates.get("R"), Some(&1));
        assert_eq!(sig.functions.get("f"), Some(&1));
        assert_eq!(f.to_string(), "p & ~q -> R(f(x))");
        let err = parse_formula_extending("R(x,y)", &mut sig).unwrap_err();
        assert!(matches!(err.kind, ParseErrorKind::ArityMismatch { .. }));
        let err = parse_formula_extending("f(x)", &mut sig).unwrap_err();
        assert!(matches!(err.kind, ParseErrorKind::SymbolClash { .. }));
    }

    #[test]
    fn printer_output() {
        let sig = fo_sig();
        for s in [
            "~P(c) & *P(c)",
            "forall x. P(x) -> (exists y. Q(x,y))",
            "(forall x. P(x)) -> P(c)",
            "~(forall x. P(x)) -> (exists x. ~P(x))",
            "p -> q -> p",
            "(p -> q) -> p",
            "p & (q & p)",
            "~(c = d)",
            "*~~p",
            "f(c) = @0",
        ] {
            let f = parse_formula(s, &sig).unwrap();
            assert_eq!(f.to_string(), s);
        }
    }
}
