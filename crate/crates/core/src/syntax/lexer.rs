use std::fmt;
use std::sync::Arc;

use crate::span::SourceSpan;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TokenKind {
    Ident(String),
    /// Unsigned decimal digits.
    Int(String),
    /// `digits '.' digits`.
    Double(String),
    /// Raw lexeme including the surrounding quotes.
    Str(String),
    Main,
    If,
    Else,
    While,
    True,
    False,
    NullProcess,
    LBrace,
    RBrace,
    LParen,
    RParen,
    Semi,
    Dot,
    At,
    Eq,
    EqEq,
    NotEq,
    Lt,
    Gt,
    Le,
    Ge,
    Plus,
    Minus,
    Star,
    Slash,
    AndAnd,
    OrOr,
    Bang,
}

impl fmt::Display for TokenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            TokenKind::Ident(name) => return write!(f, "identifier `{name}`"),
            TokenKind::Int(s) | TokenKind::Double(s) => return write!(f, "number `{s}`"),
            TokenKind::Str(s) => return write!(f, "string {s}"),
            TokenKind::Main => "`main`",
            TokenKind::If => "`if`",
            TokenKind::Else => "`else`",
            TokenKind::While => "`while`",
            TokenKind::True => "`true`",
            TokenKind::False => "`false`",
            TokenKind::NullProcess => "`nullProcess`",
            TokenKind::LBrace => "`{`",
            TokenKind::RBrace => "`}`",
            TokenKind::LParen => "`(`",
            TokenKind::RParen => "`)`",
            TokenKind::Semi => "`;`",
            TokenKind::Dot => "`.`",
            TokenKind::At => "`@`",
            TokenKind::Eq => "`=`",
            TokenKind::EqEq => "`==`",
            TokenKind::NotEq => "`!=`",
            TokenKind::Lt => "`<`",
            TokenKind::Gt => "`>`",
            TokenKind::Le => "`<=`",
            TokenKind::Ge => "`>=`",
            TokenKind::Plus => "`+`",
            TokenKind::Minus => "`-`",
            TokenKind::Star => "`*`",
            TokenKind::Slash => "`/`",
            TokenKind::AndAnd => "`&&`",
            TokenKind::OrOr => "`||`",
            TokenKind::Bang => "`!`",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub span: SourceSpan,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{span}: {message}")]
pub struct LexError {
    pub span: SourceSpan,
    pub message: String,
}

fn keyword(word: &str) -> Option<TokenKind> {
    Some(match word {
        "main" => TokenKind::Main,
        "if" => TokenKind::If,
        "else" => TokenKind::Else,
        "while" => TokenKind::While,
        "true" => TokenKind::True,
        "false" => TokenKind::False,
        "nullProcess" => TokenKind::NullProcess,
        _ => return None,
    })
}

struct Cursor<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: u32,
    col: u32,
    // position of the last consumed character
    last: (u32, u32),
}

impl<'a> Cursor<'a> {
    fn peek(&mut self) -> Option<char> {
        self.chars.peek().copied()
    }

    fn peek2(&self) -> Option<char> {
        let mut it = self.chars.clone();
        it.next();
        it.next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        self.last = (self.line, self.col);
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn pos(&self) -> (u32, u32) {
        (self.line, self.col)
    }
}

/// Splits `source` into tokens, dropping whitespace and comments.
pub fn tokenize(source: &str, file: &str) -> Result<Vec<Token>, LexError> {
    let file: Arc<str> = Arc::from(file);
    let mut cur = Cursor {
        chars: source.chars().peekable(),
        line: 1,
        col: 1,
        last: (1, 1),
    };
    let mut tokens = Vec::new();
    let err = |start: (u32, u32), end: (u32, u32), message: String| LexError {
        span: SourceSpan::new(file.clone(), start, end.max(start)),
        message,
    };

    while let Some(c) = cur.peek() {
        let start = cur.pos();
        if c.is_whitespace() {
            cur.bump();
            continue;
        }
        if c == '/' && cur.peek2() == Some('/') {
            while let Some(c) = cur.peek() {
                if c == '\n' {
                    break;
                }
                cur.bump();
            }
            continue;
        }
        if c == '/' && cur.peek2() == Some('*') {
            cur.bump();
            cur.bump();
            let mut closed = false;
            while let Some(c) = cur.bump() {
                if c == '*' && cur.peek() == Some('/') {
                    cur.bump();
                    closed = true;
                    break;
                }
            }
            if !closed {
                return Err(err(start, start, "unterminated block comment".into()));
            }
            continue;
        }

        let kind = if c.is_ascii_alphabetic() || c == '_' {
            let mut word = String::new();
            while let Some(c) = cur.peek() {
                if c.is_ascii_alphanumeric() || c == '_' {
                    word.push(c);
                    cur.bump();
                } else {
                    break;
                }
            }
            keyword(&word).unwrap_or(TokenKind::Ident(word))
        } else if c.is_ascii_digit() {
            let mut digits = String::new();
            while let Some(c) = cur.peek().filter(char::is_ascii_digit) {
                digits.push(c);
                cur.bump();
            }
            if cur.peek() == Some('.') && cur.peek2().is_some_and(|c| c.is_ascii_digit()) {
                digits.push('.');
                cur.bump();
                while let Some(c) = cur.peek().filter(char::is_ascii_digit) {
                    digits.push(c);
                    cur.bump();
                }
                TokenKind::Double(digits)
            } else {
                TokenKind::Int(digits)
            }
        } else if c == '"' {
            let mut lexeme = String::from('"');
            cur.bump();
            let mut closed = false;
            while let Some(c) = cur.bump() {
                lexeme.push(c);
                match c {
                    '"' => {
                        closed = true;
                        break;
                    }
                    '\\' => match cur.peek() {
                        Some(e @ ('"' | '\\')) => {
                            lexeme.push(e);
                            cur.bump();
                        }
                        Some(other) => {
                            let at = cur.pos();
                            return Err(err(at, at, format!("invalid escape `\\{other}`")));
                        }
                        None => break,
                    },
                    _ => {}
                }
            }
            if !closed {
                return Err(err(start, cur.last, "unterminated string literal".into()));
            }
            TokenKind::Str(lexeme)
        } else {
            cur.bump();
            let two = |cur: &mut Cursor, next: char, yes: TokenKind, no: Option<TokenKind>| {
                if cur.peek() == Some(next) {
                    cur.bump();
                    Some(yes)
                } else {
                    no
                }
            };
            let kind = match c {
                '{' => Some(TokenKind::LBrace),
                '}' => Some(TokenKind::RBrace),
                '(' => Some(TokenKind::LParen),
                ')' => Some(TokenKind::RParen),
                ';' => Some(TokenKind::Semi),
                '.' => Some(TokenKind::Dot),
                '@' => Some(TokenKind::At),
                '+' => Some(TokenKind::Plus),
                '-' => Some(TokenKind::Minus),
                '*' => Some(TokenKind::Star),
                '/' => Some(TokenKind::Slash),
                '=' => two(&mut cur, '=', TokenKind::EqEq, Some(TokenKind::Eq)),
                '!' => two(&mut cur, '=', TokenKind::NotEq, Some(TokenKind::Bang)),
                '<' => two(&mut cur, '=', TokenKind::Le, Some(TokenKind::Lt)),
                '>' => two(&mut cur, '=', TokenKind::Ge, Some(TokenKind::Gt)),
                '&' => two(&mut cur, '&', TokenKind::AndAnd, None),
                '|' => two(&mut cur, '|', TokenKind::OrOr, None),
                _ => None,
            };
            match kind {
                Some(kind) => kind,
                None => {
                    return Err(err(start, start, format!("unexpected character `{c}`")));
                }
            }
        };
        tokens.push(Token {
            kind,
            span: SourceSpan::new(file.clone(), start, cur.last),
        });
    }
    Ok(tokens)
}
