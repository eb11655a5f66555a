use crate::span::SourceSpan;

use super::ast::*;
use super::lexer::{Token, TokenKind};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{span}: expected {expected}, found {found}")]
pub struct ParseError {
    pub span: SourceSpan,
    pub expected: String,
    pub found: String,
}

struct Parser<'t> {
    tokens: &'t [Token],
    pos: usize,
    file: &'t str,
}

type PResult<T> = Result<T, ParseError>;

/// Parses a whole `main { ... }` program.
pub fn parse(tokens: &[Token], file: &str) -> Result<SourceProgram, ParseError> {
    let mut p = Parser {
        tokens,
        pos: 0,
        file,
    };
    p.expect(&TokenKind::Main, "`main`")?;
    p.expect(&TokenKind::LBrace, "`{`")?;
    let main = p.behaviour()?;
    p.expect(&TokenKind::RBrace, "`}` or `;`")?;
    if let Some(tok) = p.peek() {
        return Err(ParseError {
            span: tok.span.clone(),
            expected: "end of input".into(),
            found: tok.kind.to_string(),
        });
    }
    Ok(SourceProgram {
        main,
        file: file.to_string(),
    })
}

impl<'t> Parser<'t> {
    fn peek(&self) -> Option<&'t Token> {
        self.tokens.get(self.pos)
    }

    fn peek_kind(&self) -> Option<&'t TokenKind> {
        self.peek().map(|t| &t.kind)
    }

    fn nth_kind(&self, n: usize) -> Option<&'t TokenKind> {
        self.tokens.get(self.pos + n).map(|t| &t.kind)
    }

    fn bump(&mut self) -> &'t Token {
        let tok = &self.tokens[self.pos];
        self.pos += 1;
        tok
    }

    fn eof_span(&self) -> SourceSpan {
        match self.tokens.last() {
            Some(t) => SourceSpan::new(t.span.file.clone(), t.span.end(), t.span.end()),
            None => SourceSpan::new(self.file.into(), (1, 1), (1, 1)),
        }
    }

    fn error<T>(&self, expected: &str) -> PResult<T> {
        let (span, found) = match self.peek() {
            Some(t) => (t.span.clone(), t.kind.to_string()),
            None => (self.eof_span(), "end of input".to_string()),
        };
        Err(ParseError {
            span,
            expected: expected.to_string(),
            found,
        })
    }

    fn expect(&mut self, kind: &TokenKind, expected: &str) -> PResult<&'t Token> {
        if self.peek_kind() == Some(kind) {
            Ok(self.bump())
        } else {
            self.error(expected)
        }
    }

    fn ident(&mut self) -> PResult<(String, SourceSpan)> {
        match self.peek_kind() {
            Some(TokenKind::Ident(name)) => {
                let tok = self.bump();
                Ok((name.clone(), tok.span.clone()))
            }
            _ => self.error("identifier"),
        }
    }

    // behaviour := statement (';' behaviour)?
    fn behaviour(&mut self) -> PResult<Behaviour> {
        let first = self.statement()?;
        if self.peek_kind() == Some(&TokenKind::Semi) {
            self.bump();
            if self.peek_kind() == Some(&TokenKind::RBrace) {
                return self.error("statement after `;`");
            }
            let second = self.behaviour()?;
            let span = first.span.to(&second.span);
            return Ok(Behaviour {
                kind: BehaviourKind::Seq {
                    first: Box::new(first),
                    second: Box::new(second),
                },
                span,
            });
        }
        Ok(first)
    }

    fn block(&mut self) -> PResult<(Behaviour, SourceSpan)> {
        let open = self.expect(&TokenKind::LBrace, "`{`")?;
        let body = self.behaviour()?;
        let close = self.expect(&TokenKind::RBrace, "`}` or `;`")?;
        Ok((body, open.span.to(&close.span)))
    }

    fn statement(&mut self) -> PResult<Behaviour> {
        match self.peek_kind() {
            Some(TokenKind::NullProcess) => {
                let tok = self.bump();
                Ok(Behaviour {
                    kind: BehaviourKind::Nil,
                    span: tok.span.clone(),
                })
            }
            Some(TokenKind::If) => self.if_statement(),
            Some(TokenKind::While) => {
                let kw = self.bump();
                let cond = self.condition()?;
                let (body, body_span) = self.block()?;
                Ok(Behaviour {
                    kind: BehaviourKind::While {
                        cond,
                        body: Box::new(body),
                    },
                    span: kw.span.to(&body_span),
                })
            }
            Some(TokenKind::Ident(name))
                if name == "println" && self.nth_kind(1) == Some(&TokenKind::At) =>
            {
                self.println()
            }
            Some(TokenKind::Ident(_)) => {
                let target = self.path()?;
                self.expect(&TokenKind::Eq, "`=`")?;
                let value = self.expr()?;
                let span = target.span.to(&value.span);
                Ok(Behaviour {
                    kind: BehaviourKind::Assign { target, value },
                    span,
                })
            }
            _ => self.error("statement"),
        }
    }

    fn condition(&mut self) -> PResult<Expr> {
        self.expect(&TokenKind::LParen, "`(`")?;
        let cond = self.expr()?;
        self.expect(&TokenKind::RParen, "`)`")?;
        Ok(cond)
    }

    fn if_statement(&mut self) -> PResult<Behaviour> {
        let kw = self.bump();
        let cond = self.condition()?;
        let (then_branch, mut span) = self.block()?;
        let mut else_branch = None;
        if self.peek_kind() == Some(&TokenKind::Else) {
            self.bump();
            let branch = if self.peek_kind() == Some(&TokenKind::If) {
                let nested = self.if_statement()?;
                span = nested.span.clone();
                nested
            } else {
                let (b, s) = self.block()?;
                span = s;
                b
            };
            else_branch = Some(Box::new(branch));
        }
        Ok(Behaviour {
            kind: BehaviourKind::If {
                cond,
                then_branch: Box::new(then_branch),
                else_branch,
            },
            span: kw.span.to(&span),
        })
    }

    // println@Console( e )()
    fn println(&mut self) -> PResult<Behaviour> {
        let kw = self.bump();
        self.expect(&TokenKind::At, "`@`")?;
        match self.peek_kind() {
            Some(TokenKind::Ident(port)) if port == "Console" => {
                self.bump();
            }
            _ => return self.error("`Console`"),
        }
        self.expect(&TokenKind::LParen, "`(`")?;
        let arg = self.expr()?;
        self.expect(&TokenKind::RParen, "`)`")?;
        self.expect(&TokenKind::LParen, "`(`")?;
        let close = self.expect(&TokenKind::RParen, "`)`")?;
        Ok(Behaviour {
            kind: BehaviourKind::Println { arg },
            span: kw.span.to(&close.span),
        })
    }

    fn path(&mut self) -> PResult<VarPath> {
        let (name, first_span) = self.ident()?;
        let mut span = first_span.clone();
        let mut segments = vec![PathSegment::Static {
            name,
            span: first_span,
        }];
        while self.peek_kind() == Some(&TokenKind::Dot) {
            self.bump();
            if self.peek_kind() == Some(&TokenKind::LParen) {
                let open = self.bump();
                let key = self.expr()?;
                let close = self.expect(&TokenKind::RParen, "`)`")?;
                span = span.to(&open.span.to(&close.span));
                segments.push(PathSegment::Dynamic(key));
            } else {
                let (name, seg_span) = self.ident()?;
                span = span.to(&seg_span);
                segments.push(PathSegment::Static {
                    name,
                    span: seg_span,
                });
            }
        }
        Ok(VarPath { segments, span })
    }

    pub fn expr(&mut self) -> PResult<Expr> {
        self.binary(0)
    }

    fn binary(&mut self, level: usize) -> PResult<Expr> {
        // loosest first
        const LEVELS: &[&[BinaryOp]] = &[
            &[BinaryOp::Or],
            &[BinaryOp::And],
            &[BinaryOp::Eq, BinaryOp::Ne],
            &[BinaryOp::Lt, BinaryOp::Gt, BinaryOp::Le, BinaryOp::Ge],
            &[BinaryOp::Add, BinaryOp::Sub],
            &[BinaryOp::Mul, BinaryOp::Div],
        ];
        if level == LEVELS.len() {
            return self.unary();
        }
        let mut lhs = self.binary(level + 1)?;
        while let Some(op) = self.peek_kind().and_then(binary_op) {
            if !LEVELS[level].contains(&op) {
                break;
            }
            self.bump();
            let rhs = self.binary(level + 1)?;
            let span = lhs.span.to(&rhs.span);
            lhs = Expr {
                kind: ExprKind::Binary {
                    op,
                    lhs: Box::new(lhs),
                    rhs: Box::new(rhs),
                },
                span,
            };
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> PResult<Expr> {
        let op = match self.peek_kind() {
            Some(TokenKind::Bang) => UnaryOp::Not,
            Some(TokenKind::Minus) => UnaryOp::Neg,
            _ => return self.primary(),
        };
        let tok = self.bump();
        let operand = self.unary()?;
        let span = tok.span.to(&operand.span);
        Ok(Expr {
            kind: ExprKind::Unary {
                op,
                operand: Box::new(operand),
            },
            span,
        })
    }

    fn primary(&mut self) -> PResult<Expr> {
        let literal = |kind, tok: &Token, lexeme: &str| Expr {
            kind: ExprKind::Literal(Literal {
                kind,
                lexeme: lexeme.to_string(),
                span: tok.span.clone(),
            }),
            span: tok.span.clone(),
        };
        match self.peek_kind() {
            Some(TokenKind::Int(s)) => Ok(literal(LiteralKind::Int, self.bump(), s)),
            Some(TokenKind::Double(s)) => Ok(literal(LiteralKind::Double, self.bump(), s)),
            Some(TokenKind::Str(s)) => Ok(literal(LiteralKind::String, self.bump(), s)),
            Some(TokenKind::True) => Ok(literal(LiteralKind::Bool, self.bump(), "true")),
            Some(TokenKind::False) => Ok(literal(LiteralKind::Bool, self.bump(), "false")),
            Some(TokenKind::Ident(_)) => {
                let path = self.path()?;
                let span = path.span.clone();
                Ok(Expr {
                    kind: ExprKind::PathRead(path),
                    span,
                })
            }
            Some(TokenKind::LParen) => {
                let open = self.bump();
                let inner = self.expr()?;
                let close = self.expect(&TokenKind::RParen, "`)`")?;
                Ok(Expr {
                    kind: inner.kind,
                    span: open.span.to(&close.span),
                })
            }
            _ => self.error("expression"),
        }
    }
}

fn binary_op(kind: &TokenKind) -> Option<BinaryOp> {
    Some(match kind {
        TokenKind::Plus => BinaryOp::Add,
        TokenKind::Minus => BinaryOp::Sub,
        TokenKind::Star => BinaryOp::Mul,
        TokenKind::Slash => BinaryOp::Div,
        TokenKind::Lt => BinaryOp::Lt,
        TokenKind::Gt => BinaryOp::Gt,
        TokenKind::Le => BinaryOp::Le,
        TokenKind::Ge => BinaryOp::Ge,
        TokenKind::EqEq => BinaryOp::Eq,
        TokenKind::NotEq => BinaryOp::Ne,
        TokenKind::AndAnd => BinaryOp::And,
        TokenKind::OrOr => BinaryOp::Or,
        _ => return None,
    })
}
