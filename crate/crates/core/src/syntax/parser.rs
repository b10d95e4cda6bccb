//! Recursive-descent parser and printer for the ASCII surface grammar.
//!
//! ```text
//! formula := iff (('>' | '>=' | '~=') agent iff)?
//! iff     := imp ('<->' imp)*
//! imp     := or ('->' imp)?
//! or      := and ('|' and)*
//! and     := unary ('&' unary)*
//! unary   := '~' unary | 'K' agent unary | 'Kd' agent unary
//!          | '[' formula ']' unary | '[+-' formula ']' unary | primary
//! primary := 'T' | 'F' | atom | 'B' agent '(' formula ',' formula ')' | '(' formula ')'
//! agent   := '{' name '}'
//! ```
//!
//! The comparison operators bind loosest and do not associate. Unicode
//! spellings (`¬ ∧ ∨ → ↔ ⊤ ⊥ ≻ ≽ ≈ ±`) are accepted on input; output is
//! always ASCII.

use std::fmt;

use thiserror::Error;

use super::ast::Formula;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at {position}: {message}")]
pub struct ParseError {
    /// Character offset into the input.
    pub position: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    LBrace,
    RBrace,
    LBracket,
    LBracketPm,
    RBracket,
    Comma,
    Not,
    And,
    Or,
    Implies,
    Iff,
    Succ,
    Geq,
    Approx,
    Top,
    Bot,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::Ident(s) => return write!(f, "'{s}'"),
            Tok::LParen => "'('",
            Tok::RParen => "')'",
            Tok::LBrace => "'{'",
            Tok::RBrace => "'}'",
            Tok::LBracket => "'['",
            Tok::LBracketPm => "'[+-'",
            Tok::RBracket => "']'",
            Tok::Comma => "','",
            Tok::Not => "'~'",
            Tok::And => "'&'",
            Tok::Or => "'|'",
            Tok::Implies => "'->'",
            Tok::Iff => "'<->'",
            Tok::Succ => "'>'",
            Tok::Geq => "'>='",
            Tok::Approx => "'~='",
            Tok::Top => "'T'",
            Tok::Bot => "'F'",
        };
        f.write_str(s)
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let err = |position: usize, message: String| ParseError { position, message };
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        let at = |k: usize| chars.get(i + k).copied();
        let tok = match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '{' => Tok::LBrace,
            '}' => Tok::RBrace,
            ']' => Tok::RBracket,
            ',' => Tok::Comma,
            '&' | '∧' => Tok::And,
            '|' | '∨' => Tok::Or,
            '¬' => Tok::Not,
            '→' => Tok::Implies,
            '↔' => Tok::Iff,
            '⊤' => Tok::Top,
            '⊥' => Tok::Bot,
            '≻' => Tok::Succ,
            '≽' => Tok::Geq,
            '≈' => Tok::Approx,
            '[' => {
                if at(1) == Some('+') && at(2) == Some('-') {
                    i += 2;
                    Tok::LBracketPm
                } else if at(1) == Some('±') {
                    i += 1;
                    Tok::LBracketPm
                } else {
                    Tok::LBracket
                }
            }
            '~' => {
                if at(1) == Some('=') {
                    i += 1;
                    Tok::Approx
                } else {
                    Tok::Not
                }
            }
            '>' => {
                if at(1) == Some('=') {
                    i += 1;
                    Tok::Geq
                } else {
                    Tok::Succ
                }
            }
            '-' => {
                if at(1) == Some('>') {
                    i += 1;
                    Tok::Implies
                } else {
                    return Err(err(start, "expected '->'".into()));
                }
            }
            '<' => {
                if at(1) == Some('-') && at(2) == Some('>') {
                    i += 2;
                    Tok::Iff
                } else {
                    return Err(err(start, "expected '<->'".into()));
                }
            }
            c if c.is_ascii_alphanumeric() || c == '_' => {
                let mut j = i;
                while j < chars.len() && (chars[j].is_ascii_alphanumeric() || chars[j] == '_') {
                    j += 1;
                }
                let word: String = chars[i..j].iter().collect();
                i = j - 1;
                match word.as_str() {
                    "T" => Tok::Top,
                    "F" => Tok::Bot,
                    _ => Tok::Ident(word),
                }
            }
            other => return Err(err(start, format!("unexpected character '{other}'"))),
        };
        out.push((start, tok));
        i += 1;
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

    fn peek2(&self) -> Option<&Tok> {
        self.toks.get(self.pos + 1).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError {
            position: self.offset(),
            message: message.into(),
        })
    }

    fn unexpected<T>(&self, wanted: &str) -> Result<T, ParseError> {
        match self.peek() {
            Some(t) => self.error(format!("expected {wanted}, found {t}")),
            None => self.error(format!("expected {wanted}, found end of input")),
        }
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: Tok) -> Result<(), ParseError> {
        if self.eat(&t) {
            Ok(())
        } else {
            self.unexpected(&t.to_string())
        }
    }

    fn agent(&mut self) -> Result<String, ParseError> {
        self.expect(Tok::LBrace)?;
        let name = match self.peek() {
            Some(Tok::Ident(s)) => s.clone(),
            _ => return self.unexpected("agent name"),
        };
        self.pos += 1;
        self.expect(Tok::RBrace)?;
        Ok(name)
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let left = self.iff()?;
        let ctor: fn(String, Formula, Formula) -> Formula = match self.peek() {
            Some(Tok::Succ) => Formula::succ,
            Some(Tok::Geq) => Formula::geq,
            Some(Tok::Approx) => Formula::approx,
            _ => return Ok(left),
        };
        self.pos += 1;
        let agent = self.agent()?;
        let right = self.iff()?;
        if matches!(self.peek(), Some(Tok::Succ | Tok::Geq | Tok::Approx)) {
            return self.error("comparison operators do not associate; add parentheses");
        }
        Ok(ctor(agent, left, right))
    }

    fn iff(&mut self) -> Result<Formula, ParseError> {
        let mut left = self.implication()?;
        while self.eat(&Tok::Iff) {
            let right = self.implication()?;
            left = left.iff(right);
        }
        Ok(left)
    }

    fn implication(&mut self) -> Result<Formula, ParseError> {
        let left = self.disjunction()?;
        if self.eat(&Tok::Implies) {
            let right = self.implication()?;
            return Ok(left.implies(right));
        }
        Ok(left)
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let mut left = self.conjunction()?;
        while self.eat(&Tok::Or) {
            let right = self.conjunction()?;
            left = left.or(right);
        }
        Ok(left)
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut left = self.unary()?;
        while self.eat(&Tok::And) {
            let right = self.unary()?;
            left = left.and(right);
        }
        Ok(left)
    }

    fn is_modal_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(s)) if s == kw)
            && self.peek2() == Some(&Tok::LBrace)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        if self.eat(&Tok::Not) {
            return Ok(self.unary()?.not());
        }
        if self.is_modal_keyword("K") {
            self.pos += 1;
            let a = self.agent()?;
            return Ok(Formula::know(a, self.unary()?));
        }
        if self.is_modal_keyword("Kd") {
            self.pos += 1;
            let a = self.agent()?;
            return Ok(Formula::know_dual(a, self.unary()?));
        }
        if self.eat(&Tok::LBracket) {
            let announced = self.formula()?;
            self.expect(Tok::RBracket)?;
            return Ok(Formula::announce(announced, self.unary()?));
        }
        if self.eat(&Tok::LBracketPm) {
            let announced = self.formula()?;
            self.expect(Tok::RBracket)?;
            return Ok(Formula::announce_value(announced, self.unary()?));
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Formula, ParseError> {
        if self.is_modal_keyword("B") {
            self.pos += 1;
            let a = self.agent()?;
            self.expect(Tok::LParen)?;
            let cond = self.formula()?;
            self.expect(Tok::Comma)?;
            let body = self.formula()?;
            self.expect(Tok::RParen)?;
            return Ok(Formula::bel(a, cond, body));
        }
        match self.peek().cloned() {
            Some(Tok::Top) => {
                self.pos += 1;
                Ok(Formula::Top)
            }
            Some(Tok::Bot) => {
                self.pos += 1;
                Ok(Formula::Bot)
            }
            Some(Tok::Ident(name)) => {
                if !name.starts_with(|c: char| c.is_ascii_alphabetic()) {
                    return self.error(format!("atom '{name}' must start with a letter"));
                }
                self.pos += 1;
                Ok(Formula::Atom(name))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let f = self.formula()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            _ => self.unexpected("a formula"),
        }
    }
}

/// Parse a formula, keeping abbreviations as written.
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end: text.chars().count(),
    };
    let f = p.formula()?;
    if p.peek().is_some() {
        return p.unexpected("end of input");
    }
    Ok(f)
}

// Binding strength; larger binds tighter.
const CMP: u8 = 0;
const IFF: u8 = 1;
const IMP: u8 = 2;
const OR: u8 = 3;
const AND: u8 = 4;
const UNARY: u8 = 5;
const ATOMIC: u8 = 6;

fn level(f: &Formula) -> u8 {
    use Formula::*;
    match f {
        Geq(..) | Succ(..) | Approx(..) => CMP,
        Iff(..) => IFF,
        Implies(..) => IMP,
        Or(..) => OR,
        And(..) => AND,
        Not(_) | Know(..) | KnowDual(..) | AnnFact(..) | AnnValue(..) => UNARY,
        Top | Bot | Atom(_) | Bel(..) => ATOMIC,
    }
}

fn write_at(f: &Formula, min: u8, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    if level(f) < min {
        out.write_str("(")?;
        write_formula(f, out)?;
        out.write_str(")")
    } else {
        write_formula(f, out)
    }
}

fn write_formula(f: &Formula, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    use Formula::*;
    let binary = |out: &mut fmt::Formatter<'_>, a, op: &str, b, lmin, rmin| {
        write_at(a, lmin, out)?;
        write!(out, " {op} ")?;
        write_at(b, rmin, out)
    };
    match f {
        Top => out.write_str("T"),
        Bot => out.write_str("F"),
        Atom(p) => out.write_str(p),
        Not(a) => {
            out.write_str("~")?;
            write_at(a, UNARY, out)
        }
        Know(ag, a) => {
            write!(out, "K{{{ag}}} ")?;
            write_at(a, UNARY, out)
        }
        KnowDual(ag, a) => {
            write!(out, "Kd{{{ag}}} ")?;
            write_at(a, UNARY, out)
        }
        AnnFact(a, b) => {
            out.write_str("[")?;
            write_formula(a, out)?;
            out.write_str("] ")?;
            write_at(b, UNARY, out)
        }
        AnnValue(a, b) => {
            out.write_str("[+-")?;
            write_formula(a, out)?;
            out.write_str("] ")?;
            write_at(b, UNARY, out)
        }
        Bel(ag, a, b) => {
            write!(out, "B{{{ag}}}(")?;
            write_formula(a, out)?;
            out.write_str(", ")?;
            write_formula(b, out)?;
            out.write_str(")")
        }
        And(a, b) => binary(out, a, "&", b, AND, UNARY),
        Or(a, b) => binary(out, a, "|", b, OR, AND),
        Implies(a, b) => binary(out, a, "->", b, OR, IMP),
        Iff(a, b) => binary(out, a, "<->", b, IFF, IMP),
        Succ(ag, a, b) => binary(out, a, &format!(">{{{ag}}}"), b, IFF, IFF),
        Geq(ag, a, b) => binary(out, a, &format!(">={{{ag}}}"), b, IFF, IFF),
        Approx(ag, a, b) => binary(out, a, &format!("~={{{ag}}}"), b, IFF, IFF),
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_formula(self, f)
    }
}

impl std::str::FromStr for Formula {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Formula {
        Formula::atom("p")
    }
    fn q() -> Formula {
        Formula::atom("q")
    }

    #[test]
    fn belief_constructor() {
        assert_eq!(parse("B{a}(p, q)").unwrap(), Formula::bel("a", p(), q()));
    }

    #[test]
    fn precedence_ladder() {
        let f = parse("~p & q | p -> q <-> p").unwrap();
        let expected = p()
            .not()
            .and(q())
            .or(p())
            .implies(q())
            .iff(p());
        assert_eq!(f, expected);
        assert_eq!(
            parse("p -> q -> p").unwrap(),
            p().implies(q().implies(p()))
        );
        assert_eq!(parse("p & q & p").unwrap(), p().and(q()).and(p()));
    }

    #[test]
    fn comparison_binds_loosest() {
        let f = parse("p & ~q >={a} ~p & q").unwrap();
        assert_eq!(f, Formula::geq("a", p().and(q().not()), p().not().and(q())));
        assert!(parse("p >{a} q >{a} p").is_err());
    }

    #[test]
    fn announcements_bind_like_unary() {
        let f = parse("[p] q & p").unwrap();
        assert_eq!(f, Formula::announce(p(), q()).and(p()));
        let g = parse("[+-p & q] B{a}(T, p)").unwrap();
        assert_eq!(
            g,
            Formula::announce_value(p().and(q()), Formula::bel("a", Formula::Top, p()))
        );
    }

    #[test]
    fn keywords_need_a_brace() {
        assert_eq!(parse("K").unwrap(), Formula::atom("K"));
        assert_eq!(parse("K{a} B").unwrap(), Formula::know("a", Formula::atom("B")));
        assert_eq!(parse("Kd{b} p").unwrap(), Formula::know_dual("b", p()));
        assert_eq!(parse("Gr | Gy").unwrap(), Formula::atom("Gr").or(Formula::atom("Gy")));
    }

    #[test]
    fn unicode_aliases() {
        let f = parse("¬p ∧ (q ∨ ⊤) → ⊥ ↔ p").unwrap();
        let g = parse("~p & (q | T) -> F <-> p").unwrap();
        assert_eq!(f, g);
        assert_eq!(parse("p ≽{a} q").unwrap(), parse("p >={a} q").unwrap());
        assert_eq!(parse("[±p] q").unwrap(), parse("[+-p] q").unwrap());
        assert_eq!(parse("p ≈{a} q").unwrap(), parse("p ~={a} q").unwrap());
    }

    #[test]
    fn errors_carry_position() {
        let e = parse("p & ").unwrap_err();
        assert_eq!(e.position, 4);
        let e = parse("B{a}(p q)").unwrap_err();
        assert_eq!(e.position, 7);
        let e = parse("p $ q").unwrap_err();
        assert_eq!(e.position, 2);
        assert!(parse("p q").is_err());
        assert!(parse("3p").is_err());
    }

    #[test]
    fn printer_round_trips_awkward_nesting() {
        for text in [
            "(p -> q) -> p",
            "p <-> (q <-> p)",
            "~(p & q)",
            "(p >{a} q) & p",
            "K{a} (p | q)",
            "[p | q] (p & q)",
            "B{a}(p >={a} q, [+-p] q)",
            "(p ~={a} q) >{b} p",
        ] {
            let f = parse(text).unwrap();
            assert_eq!(parse(&f.to_string()).unwrap(), f, "{text}");
        }
        assert_eq!(parse("(p -> q) -> p").unwrap().to_string(), "(p -> q) -> p");
    }
}
