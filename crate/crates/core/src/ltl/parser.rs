//! Precedence-climbing parser for the formula grammar.
//!
//! Binding strength, loosest first: `<->`, `->`, `||`, `&&`, `U`/`R`, then the
//! prefix operators `!`, `X`, `F`, `G`. `<->`, `->`, `U` and `R` associate to
//! the right, `&&` and `||` to the left.

use thiserror::Error;

use super::{Formula, SignalPartition};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("syntax error at offset {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("unknown signal `{name}` at offset {pos}")]
    UnknownSignal { name: String, pos: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Ident(String),
    True,
    False,
    Not,
    And,
    Or,
    Implies,
    Iff,
    Next,
    Until,
    Release,
    Eventually,
    Globally,
    LParen,
    RParen,
}

impl Token {
    fn describe(&self) -> String {
        match self {
            Token::Ident(name) => format!("`{name}`"),
            Token::True => "`true`".into(),
            Token::False => "`false`".into(),
            Token::Not => "`!`".into(),
            Token::And => "`&&`".into(),
            Token::Or => "`||`".into(),
            Token::Implies => "`->`".into(),
            Token::Iff => "`<->`".into(),
            Token::Next => "`X`".into(),
            Token::Until => "`U`".into(),
            Token::Release => "`R`".into(),
            Token::Eventually => "`F`".into(),
            Token::Globally => "`G`".into(),
            Token::LParen => "`(`".into(),
            Token::RParen => "`)`".into(),
        }
    }
}

fn tokenize(text: &str) -> Result<Vec<(usize, Token)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut pos = 0;
    let syntax = |pos: usize, message: &str| ParseError::Syntax {
        pos,
        message: message.to_string(),
    };
    while pos < bytes.len() {
        let c = bytes[pos];
        if c.is_ascii_whitespace() {
            pos += 1;
            continue;
        }
        let start = pos;
        let token = match c {
            b'(' => {
                pos += 1;
                Token::LParen
            }
            b')' => {
                pos += 1;
                Token::RParen
            }
            b'!' => {
                pos += 1;
                Token::Not
            }
            b'&' if bytes.get(pos + 1) == Some(&b'&') => {
                pos += 2;
                Token::And
            }
            b'|' if bytes.get(pos + 1) == Some(&b'|') => {
                pos += 2;
                Token::Or
            }
            b'-' if bytes.get(pos + 1) == Some(&b'>') => {
                pos += 2;
                Token::Implies
            }
            b'<' if bytes[pos..].starts_with(b"<->") => {
                pos += 3;
                Token::Iff
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while pos < bytes.len() && (bytes[pos].is_ascii_alphanumeric() || bytes[pos] == b'_')
                {
                    pos += 1;
                }
                match &text[start..pos] {
                    "X" => Token::Next,
                    "U" => Token::Until,
                    "R" => Token::Release,
                    "F" => Token::Eventually,
                    "G" => Token::Globally,
                    "true" => Token::True,
                    "false" => Token::False,
                    name => Token::Ident(name.to_string()),
                }
            }
            _ => return Err(syntax(pos, &format!("unexpected character `{}`", c as char))),
        };
        out.push((start, token));
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<(usize, Token)>,
    cursor: usize,
    end: usize,
    part: &'a SignalPartition,
}

/// (left binding power, right binding power) of a binary operator.
fn binding_power(token: &Token) -> Option<(u8, u8)> {
    Some(match token {
        Token::Iff => (1, 1),
        Token::Implies => (2, 2),
        Token::Or => (3, 4),
        Token::And => (5, 6),
        Token::Until | Token::Release => (7, 7),
        _ => return None,
    })
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.cursor).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.tokens.get(self.cursor).map_or(self.end, |(p, _)| *p)
    }

    fn bump(&mut self) -> Option<Token> {
        let token = self.tokens.get(self.cursor).map(|(_, t)| t.clone());
        self.cursor += 1;
        token
    }

    fn expression(&mut self, min_bp: u8) -> Result<Formula, ParseError> {
        let mut lhs = self.prefix()?;
        while let Some(token) = self.peek() {
            let Some((lbp, rbp)) = binding_power(token) else {
                break;
            };
            if lbp < min_bp {
                break;
            }
            let op = self.bump().expect("peeked");
            let rhs = self.expression(rbp)?;
            lhs = match op {
                Token::Iff => Formula::iff(lhs, rhs),
                Token::Implies => Formula::implies(lhs, rhs),
                Token::Or => Formula::or(lhs, rhs),
                Token::And => Formula::and(lhs, rhs),
                Token::Until => Formula::until(lhs, rhs),
                Token::Release => Formula::release(lhs, rhs),
                _ => unreachable!(),
            };
        }
        Ok(lhs)
    }

    fn prefix(&mut self) -> Result<Formula, ParseError> {
        let pos = self.pos();
        match self.bump() {
            Some(Token::Not) => Ok(Formula::not(self.prefix()?)),
            Some(Token::Next) => Ok(Formula::next(self.prefix()?)),
            Some(Token::Eventually) => Ok(Formula::eventually(self.prefix()?)),
            Some(Token::Globally) => Ok(Formula::globally(self.prefix()?)),
            Some(Token::True) => Ok(Formula::True),
            Some(Token::False) => Ok(Formula::False),
            Some(Token::Ident(name)) => match self.part.index_of(&name) {
                Some(index) => Ok(Formula::Atom(index)),
                None => Err(ParseError::UnknownSignal { name, pos }),
            },
            Some(Token::LParen) => {
                let inner = self.expression(0)?;
                match self.bump() {
                    Some(Token::RParen) => Ok(inner),
                    Some(other) => Err(ParseError::Syntax {
                        pos: self.tokens[self.cursor - 1].0,
                        message: format!("expected `)`, found {}", other.describe()),
                    }),
                    None => Err(ParseError::Syntax {
                        pos: self.end,
                        message: "expected `)`, found end of input".into(),
                    }),
                }
            }
            Some(other) => Err(ParseError::Syntax {
                pos,
                message: format!("expected a formula, found {}", other.describe()),
            }),
            None => Err(ParseError::Syntax {
                pos,
                message: "expected a formula, found end of input".into(),
            }),
        }
    }
}

/// Parses `text` into a formula whose atoms all belong to `part`.
pub fn parse_formula(text: &str, part: &SignalPartition) -> Result<Formula, ParseError> {
    let tokens = tokenize(text)?;
    let mut parser = Parser {
        tokens,
        cursor: 0,
        end: text.len(),
        part,
    };
    let formula = parser.expression(0)?;
    if let Some(token) = parser.peek() {
        return Err(ParseError::Syntax {
            pos: parser.pos(),
            message: format!("unexpected {} after formula", token.describe()),
        });
    }
    Ok(formula)
}
