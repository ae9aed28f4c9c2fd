use std::fmt;
use std::sync::Arc;

use crate::diag::{Code, Diagnostic, SourceLoc};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    /// Unsigned decimal digits; signs are handled by the parser.
    Int(String),
    Str(String),
    LBrace,
    RBrace,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Semi,
    Comma,
    Dot,
    Arrow,
    Slash,
    Assign,
    Pipe,
    Colon,
    Lt,
    Le,
    Gt,
    Ge,
    EqEq,
    Ne,
    AndAnd,
    OrOr,
    Bang,
    Plus,
    Minus,
    Star,
    NoData,
    /// `<<` or `«`
    StereoOpen,
    /// `>>` or `»`
    StereoClose,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::Ident(s) => return write!(f, "identifier `{s}`"),
            Tok::Int(s) => return write!(f, "integer `{s}`"),
            Tok::Str(_) => "string literal",
            Tok::LBrace => "`{`",
            Tok::RBrace => "`}`",
            Tok::LParen => "`(`",
            Tok::RParen => "`)`",
            Tok::LBracket => "`[`",
            Tok::RBracket => "`]`",
            Tok::Semi => "`;`",
            Tok::Comma => "`,`",
            Tok::Dot => "`.`",
            Tok::Arrow => "`->`",
            Tok::Slash => "`/`",
            Tok::Assign => "`=`",
            Tok::Pipe => "`|`",
            Tok::Colon => "`:`",
            Tok::Lt => "`<`",
            Tok::Le => "`<=`",
            Tok::Gt => "`>`",
            Tok::Ge => "`>=`",
            Tok::EqEq => "`==`",
            Tok::Ne => "`!=`",
            Tok::AndAnd => "`&&`",
            Tok::OrOr => "`||`",
            Tok::Bang => "`!`",
            Tok::Plus => "`+`",
            Tok::Minus => "`-`",
            Tok::Star => "`*`",
            Tok::NoData => "`--`",
            Tok::StereoOpen => "`<<`",
            Tok::StereoClose => "`>>`",
            Tok::Eof => "end of input",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone)]
pub struct Token {
    pub tok: Tok,
    pub loc: SourceLoc,
}

struct Cursor<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: u32,
    column: u32,
}

impl Cursor<'_> {
    fn peek(&mut self) -> Option<char> {
        self.chars.peek().copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.bump();
            true
        } else {
            false
        }
    }
}

/// Splits `text` into tokens, skipping whitespace and both comment styles.
/// The final token is always `Tok::Eof`, located just past the last character.
pub fn tokenize(text: &str, file: &Arc<str>) -> Result<Vec<Token>, Diagnostic> {
    let mut cur = Cursor {
        chars: text.chars().peekable(),
        line: 1,
        column: 1,
    };
    let mut out = Vec::new();
    loop {
        let loc = SourceLoc::new(file.clone(), cur.line, cur.column);
        let Some(c) = cur.bump() else {
            out.push(Token { tok: Tok::Eof, loc });
            return Ok(out);
        };
        let tok = match c {
            c if c.is_whitespace() => continue,
            '/' if cur.eat('/') => {
                while let Some(c) = cur.peek() {
                    if c == '\n' {
                        break;
                    }
                    cur.bump();
                }
                continue;
            }
            '/' if cur.eat('*') => {
                let mut closed = false;
                while let Some(c) = cur.bump() {
                    if c == '*' && cur.eat('/') {
                        closed = true;
                        break;
                    }
                }
                if !closed {
                    return Err(Diagnostic::new(Code::Syn, loc, "unterminated block comment"));
                }
                continue;
            }
            '/' => Tok::Slash,
            '{' => Tok::LBrace,
            '}' => Tok::RBrace,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '[' => Tok::LBracket,
            ']' => Tok::RBracket,
            ';' => Tok::Semi,
            ',' => Tok::Comma,
            '.' => Tok::Dot,
            ':' => Tok::Colon,
            '+' => Tok::Plus,
            '*' => Tok::Star,
            '«' => Tok::StereoOpen,
            '»' => Tok::StereoClose,
            '-' if cur.eat('>') => Tok::Arrow,
            '-' if cur.eat('-') => Tok::NoData,
            '-' => Tok::Minus,
            '=' if cur.eat('=') => Tok::EqEq,
            '=' => Tok::Assign,
            '!' if cur.eat('=') => Tok::Ne,
            '!' => Tok::Bang,
            '<' if cur.eat('<') => Tok::StereoOpen,
            '<' if cur.eat('=') => Tok::Le,
            '<' => Tok::Lt,
            '>' if cur.eat('>') => Tok::StereoClose,
            '>' if cur.eat('=') => Tok::Ge,
            '>' => Tok::Gt,
            '|' if cur.eat('|') => Tok::OrOr,
            '|' => Tok::Pipe,
            '&' if cur.eat('&') => Tok::AndAnd,
            '"' => {
                let mut s = String::new();
                loop {
                    match cur.bump() {
                        None | Some('\n') => {
                            return Err(Diagnostic::new(
                                Code::Syn,
                                loc,
                                "unterminated string literal",
                            ))
                        }
                        Some('"') => break,
                        Some('\\') => match cur.bump() {
                            Some('"') => s.push('"'),
                            Some('\\') => s.push('\\'),
                            _ => {
                                return Err(Diagnostic::new(
                                    Code::Syn,
                                    loc,
                                    "invalid escape in string literal (only \\\" and \\\\ are allowed)",
                                ))
                            }
                        },
                        Some(c) => s.push(c),
                    }
                }
                Tok::Str(s)
            }
            c if c.is_ascii_digit() => {
                let mut s = String::from(c);
                while let Some(d) = cur.peek().filter(char::is_ascii_digit) {
                    s.push(d);
                    cur.bump();
                }
                Tok::Int(s)
            }
            c if c.is_alphabetic() || c == '_' || c == '$' => {
                let mut s = String::from(c);
                while let Some(d) = cur
                    .peek()
                    .filter(|d| d.is_alphanumeric() || *d == '_' || *d == '$')
                {
                    s.push(d);
                    cur.bump();
                }
                Tok::Ident(s)
            }
            other => {
                return Err(Diagnostic::new(
                    Code::Syn,
                    loc,
                    format!("unexpected character `{other}`"),
                ))
            }
        };
        out.push(Token { tok, loc });
    }
}
