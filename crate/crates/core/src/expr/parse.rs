use std::fmt;

use thiserror::Error;

use super::{Expr, Func};

#[derive(Debug, Clone, PartialEq)]
pub enum ParseErrorKind {
    /// Found a token that does not fit the grammar at this point.
    Unexpected {
        found: String,
        expected: Vec<&'static str>,
    },
    UnknownIdentifier(String),
    /// A numeric literal that does not fit in a finite `f64`.
    BadLiteral(String),
}

/// Parse failure with a 0-based character position into the source.
#[derive(Debug, Clone, PartialEq, Error)]
pub struct ParseError {
    pub position: usize,
    pub kind: ParseErrorKind,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ParseErrorKind::Unexpected { found, expected } => write!(
                f,
                "syntax error at position {}: found {}, expected {}",
                self.position,
                found,
                expected.join(" or ")
            ),
            ParseErrorKind::UnknownIdentifier(name) => write!(
                f,
                "unknown identifier `{name}` at position {}",
                self.position
            ),
            ParseErrorKind::BadLiteral(text) => write!(
                f,
                "numeric literal `{text}` out of range at position {}",
                self.position
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Num(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

impl Token {
    fn describe(&self) -> String {
        match self {
            Token::Num(v) => format!("number `{v}`"),
            Token::Ident(s) => format!("identifier `{s}`"),
            Token::Plus => "`+`".into(),
            Token::Minus => "`-`".into(),
            Token::Star => "`*`".into(),
            Token::Slash => "`/`".into(),
            Token::Caret => "`^`".into(),
            Token::LParen => "`(`".into(),
            Token::RParen => "`)`".into(),
            Token::End => "end of input".into(),
        }
    }
}

fn tokenize(source: &str) -> Result<Vec<(usize, Token)>, ParseError> {
    let chars: Vec<char> = source.chars().collect();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        let token = match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '+' => Token::Plus,
            '-' => Token::Minus,
            '*' => Token::Star,
            '/' => Token::Slash,
            '^' => Token::Caret,
            '(' => Token::LParen,
            ')' => Token::RParen,
            c if c.is_ascii_digit() || c == '.' => {
                while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                    i += 1;
                }
                if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                    let mut j = i + 1;
                    if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                        j += 1;
                    }
                    if j < chars.len() && chars[j].is_ascii_digit() {
                        while j < chars.len() && chars[j].is_ascii_digit() {
                            j += 1;
                        }
                        i = j;
                    }
                }
                let text: String = chars[start..i].iter().collect();
                let value: f64 = text.parse().map_err(|_| ParseError {
                    position: start,
                    kind: ParseErrorKind::Unexpected {
                        found: format!("`{text}`"),
                        expected: vec!["number"],
                    },
                })?;
                if !value.is_finite() {
                    return Err(ParseError {
                        position: start,
                        kind: ParseErrorKind::BadLiteral(text),
                    });
                }
                tokens.push((start, Token::Num(value)));
                continue;
            }
            c if c.is_alphabetic() || c == '_' => {
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                tokens.push((start, Token::Ident(chars[start..i].iter().collect())));
                continue;
            }
            other => {
                return Err(ParseError {
                    position: start,
                    kind: ParseErrorKind::Unexpected {
                        found: format!("`{other}`"),
                        expected: vec!["number", "`x`", "`(`", "operator"],
                    },
                })
            }
        };
        tokens.push((start, token));
        i += 1;
    }
    tokens.push((chars.len(), Token::End));
    Ok(tokens)
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos].1
    }

    fn position(&self) -> usize {
        self.tokens[self.pos].0
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].1.clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self, expected: Vec<&'static str>) -> ParseError {
        ParseError {
            position: self.position(),
            kind: ParseErrorKind::Unexpected {
                found: self.peek().describe(),
                expected,
            },
        }
    }

    fn expect(&mut self, token: Token, name: &'static str) -> Result<(), ParseError> {
        if *self.peek() == token {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(vec![name]))
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Token::Plus => {
                    self.bump();
                    lhs = Expr::add(lhs, self.term()?);
                }
                Token::Minus => {
                    self.bump();
                    lhs = Expr::sub(lhs, self.term()?);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Token::Star => {
                    self.bump();
                    lhs = Expr::mul(lhs, self.unary()?);
                }
                Token::Slash => {
                    self.bump();
                    lhs = Expr::div(lhs, self.unary()?);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            Token::Minus => {
                self.bump();
                Ok(match self.unary()? {
                    Expr::Const(c) => Expr::Const(-c),
                    e => Expr::neg(e),
                })
            }
            Token::Plus => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.primary()?;
        if *self.peek() == Token::Caret {
            self.bump();
            let exponent = self.unary()?;
            Ok(Expr::pow(base, exponent))
        } else {
            Ok(base)
        }
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        let start = self.position();
        match self.peek().clone() {
            Token::Num(v) => {
                self.bump();
                Ok(Expr::Const(v))
            }
            Token::Ident(name) => {
                self.bump();
                let func = match name.as_str() {
                    "x" => return Ok(Expr::Var),
                    "exp" => Func::Exp,
                    "log" => Func::Log,
                    _ => {
                        return Err(ParseError {
                            position: start,
                            kind: ParseErrorKind::UnknownIdentifier(name),
                        })
                    }
                };
                self.expect(Token::LParen, "`(`")?;
                let inner = self.expr()?;
                self.expect(Token::RParen, "`)`")?;
                Ok(Expr::Apply(func, Box::new(inner)))
            }
            Token::LParen => {
                self.bump();
                let inner = self.expr()?;
                self.expect(Token::RParen, "`)`")?;
                Ok(inner)
            }
            _ => Err(self.unexpected(vec!["number", "`x`", "`exp`", "`log`", "`(`"])),
        }
    }
}

/// Parses DSL source text into an expression tree.
pub fn parse_expr(source: &str) -> Result<Expr, ParseError> {
    let mut parser = Parser {
        tokens: tokenize(source)?,
        pos: 0,
    };
    let e = parser.expr()?;
    if *parser.peek() != Token::End {
        return Err(parser.unexpected(vec!["operator", "end of input"]));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(v: f64) -> Expr {
        Expr::Const(v)
    }

    #[test]
    fn variable_and_power() {
        assert_eq!(parse_expr("x").unwrap(), Expr::Var);
        assert_eq!(parse_expr("x^2").unwrap(), Expr::pow(Expr::Var, c(2.0)));
    }

    #[test]
    fn mixed_expression_structure() {
        let e = parse_expr("log(x) + 3*x^0.5").unwrap();
        let expected = Expr::add(
            Expr::log(Expr::Var),
            Expr::mul(c(3.0), Expr::pow(Expr::Var, c(0.5))),
        );
        assert_eq!(e, expected);
        // fixed point under re-serialization
        let again = parse_expr(&e.to_string()).unwrap();
        assert_eq!(again, e);
        assert_eq!(parse_expr(&again.to_string()).unwrap(), again);
    }

    #[test]
    fn associativity_and_precedence() {
        assert_eq!(
            parse_expr("x - 1 - 2").unwrap(),
            Expr::sub(Expr::sub(Expr::Var, c(1.0)), c(2.0))
        );
        assert_eq!(
            parse_expr("x / 2 / 3").unwrap(),
            Expr::div(Expr::div(Expr::Var, c(2.0)), c(3.0))
        );
        assert_eq!(
            parse_expr("2^3^2").unwrap(),
            Expr::pow(c(2.0), Expr::pow(c(3.0), c(2.0)))
        );
        assert_eq!(
            parse_expr("-x^2").unwrap(),
            Expr::neg(Expr::pow(Expr::Var, c(2.0)))
        );
        assert_eq!(
            parse_expr("1 + 2 * x").unwrap(),
            Expr::add(c(1.0), Expr::mul(c(2.0), Expr::Var))
        );
    }

    #[test]
    fn signed_literals() {
        assert_eq!(parse_expr("-2.5e-3").unwrap(), c(-2.5e-3));
        assert_eq!(
            parse_expr("x^-2").unwrap(),
            Expr::pow(Expr::Var, c(-2.0))
        );
        assert_eq!(parse_expr("+1E2").unwrap(), c(100.0));
        assert_eq!(parse_expr(".5").unwrap(), c(0.5));
        assert_eq!(
            parse_expr("x - -1").unwrap(),
            Expr::sub(Expr::Var, c(-1.0))
        );
    }

    #[test]
    fn unknown_identifier() {
        let err = parse_expr("sin(x)").unwrap_err();
        assert_eq!(err.position, 0);
        assert_eq!(err.kind, ParseErrorKind::UnknownIdentifier("sin".into()));
        let err = parse_expr("x + y").unwrap_err();
        assert_eq!(err.position, 4);
    }

    #[test]
    fn syntax_errors_carry_position() {
        let err = parse_expr("x +").unwrap_err();
        assert_eq!(err.position, 3);
        match err.kind {
            ParseErrorKind::Unexpected { found, expected } => {
                assert_eq!(found, "end of input");
                assert!(expected.contains(&"`x`"));
            }
            other => panic!("unexpected error kind {other:?}"),
        }
        assert_eq!(parse_expr("log x").unwrap_err().position, 4);
        assert_eq!(parse_expr("(x").unwrap_err().position, 2);
        assert_eq!(parse_expr("2x").unwrap_err().position, 1);
        assert_eq!(parse_expr("x # 1").unwrap_err().position, 2);
        assert!(parse_expr("").is_err());
    }

    #[test]
    fn literal_overflow() {
        let err = parse_expr("1e400").unwrap_err();
        assert!(matches!(err.kind, ParseErrorKind::BadLiteral(_)));
    }
}
