//! Syntax tree for the behavioural subset.
//!
//! Every node carries a [`SourceSpan`]. `Display` renders a fully
//! parenthesised form that the parser reads back to the same tree.

use std::fmt;

use crate::span::SourceSpan;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LiteralKind {
    Int,
    Double,
    String,
    Bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Literal {
    pub kind: LiteralKind,
    pub lexeme: String,
    pub span: SourceSpan,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PathSegment {
    Static { name: String, span: SourceSpan },
    Dynamic(Expr),
}

impl PathSegment {
    pub fn span(&self) -> &SourceSpan {
        match self {
            PathSegment::Static { span, .. } => span,
            PathSegment::Dynamic(e) => &e.span,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarPath {
    pub segments: Vec<PathSegment>,
    pub span: SourceSpan,
}

impl VarPath {
    pub fn is_static(&self) -> bool {
        self.segments
            .iter()
            .all(|s| matches!(s, PathSegment::Static { .. }))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BinaryOp {
    Add,
    Sub,
    Mul,
    Div,
    Lt,
    Gt,
    Le,
    Ge,
    Eq,
    Ne,
    And,
    Or,
}

impl BinaryOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinaryOp::Add => "+",
            BinaryOp::Sub => "-",
            BinaryOp::Mul => "*",
            BinaryOp::Div => "/",
            BinaryOp::Lt => "<",
            BinaryOp::Gt => ">",
            BinaryOp::Le => "<=",
            BinaryOp::Ge => ">=",
            BinaryOp::Eq => "==",
            BinaryOp::Ne => "!=",
            BinaryOp::And => "&&",
            BinaryOp::Or => "||",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum UnaryOp {
    Not,
    Neg,
}

impl UnaryOp {
    pub fn symbol(self) -> &'static str {
        match self {
            UnaryOp::Not => "!",
            UnaryOp::Neg => "-",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExprKind {
    Literal(Literal),
    PathRead(VarPath),
    Binary {
        op: BinaryOp,
        lhs: Box<Expr>,
        rhs: Box<Expr>,
    },
    Unary {
        op: UnaryOp,
        operand: Box<Expr>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expr {
    pub kind: ExprKind,
    pub span: SourceSpan,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BehaviourKind {
    Nil,
    Seq {
        first: Box<Behaviour>,
        second: Box<Behaviour>,
    },
    Assign {
        target: VarPath,
        value: Expr,
    },
    If {
        cond: Expr,
        then_branch: Box<Behaviour>,
        else_branch: Option<Box<Behaviour>>,
    },
    While {
        cond: Expr,
        body: Box<Behaviour>,
    },
    Println {
        arg: Expr,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Behaviour {
    pub kind: BehaviourKind,
    pub span: SourceSpan,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SourceProgram {
    pub main: Behaviour,
    pub file: String,
}

// Span erasure, for span-insensitive structural comparison.

impl Literal {
    fn erased(&self) -> Literal {
        Literal {
            span: SourceSpan::dummy(),
            ..self.clone()
        }
    }
}

impl VarPath {
    pub fn erase_spans(&self) -> VarPath {
        VarPath {
            segments: self
                .segments
                .iter()
                .map(|s| match s {
                    PathSegment::Static { name, .. } => PathSegment::Static {
                        name: name.clone(),
                        span: SourceSpan::dummy(),
                    },
                    PathSegment::Dynamic(e) => PathSegment::Dynamic(e.erase_spans()),
                })
                .collect(),
            span: SourceSpan::dummy(),
        }
    }
}

impl Expr {
    pub fn erase_spans(&self) -> Expr {
        let kind = match &self.kind {
            ExprKind::Literal(l) => ExprKind::Literal(l.erased()),
            ExprKind::PathRead(p) => ExprKind::PathRead(p.erase_spans()),
            ExprKind::Binary { op, lhs, rhs } => ExprKind::Binary {
                op: *op,
                lhs: Box::new(lhs.erase_spans()),
                rhs: Box::new(rhs.erase_spans()),
            },
            ExprKind::Unary { op, operand } => ExprKind::Unary {
                op: *op,
                operand: Box::new(operand.erase_spans()),
            },
        };
        Expr {
            kind,
            span: SourceSpan::dummy(),
        }
    }
}

impl Behaviour {
    pub fn erase_spans(&self) -> Behaviour {
        let kind = match &self.kind {
            BehaviourKind::Nil => BehaviourKind::Nil,
            BehaviourKind::Seq { first, second } => BehaviourKind::Seq {
                first: Box::new(first.erase_spans()),
                second: Box::new(second.erase_spans()),
            },
            BehaviourKind::Assign { target, value } => BehaviourKind::Assign {
                target: target.erase_spans(),
                value: value.erase_spans(),
            },
            BehaviourKind::If {
                cond,
                then_branch,
                else_branch,
            } => BehaviourKind::If {
                cond: cond.erase_spans(),
                then_branch: Box::new(then_branch.erase_spans()),
                else_branch: else_branch.as_ref().map(|b| Box::new(b.erase_spans())),
            },
            BehaviourKind::While { cond, body } => BehaviourKind::While {
                cond: cond.erase_spans(),
                body: Box::new(body.erase_spans()),
            },
            BehaviourKind::Println { arg } => BehaviourKind::Println {
                arg: arg.erase_spans(),
            },
        };
        Behaviour {
            kind,
            span: SourceSpan::dummy(),
        }
    }

    /// Calls `f` on this node and every descendant behaviour, pre-order.
    pub fn walk(&self, f: &mut impl FnMut(&Behaviour)) {
        f(self);
        match &self.kind {
            BehaviourKind::Seq { first, second } => {
                first.walk(f);
                second.walk(f);
            }
            BehaviourKind::If {
                then_branch,
                else_branch,
                ..
            } => {
                then_branch.walk(f);
                if let Some(e) = else_branch {
                    e.walk(f);
                }
            }
            BehaviourKind::While { body, .. } => body.walk(f),
            BehaviourKind::Nil | BehaviourKind::Assign { .. } | BehaviourKind::Println { .. } => {}
        }
    }
}

impl SourceProgram {
    pub fn erase_spans(&self) -> SourceProgram {
        SourceProgram {
            main: self.main.erase_spans(),
            file: self.file.clone(),
        }
    }
}

// Pretty printing.

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.lexeme)
    }
}

impl fmt::Display for VarPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, seg) in self.segments.iter().enumerate() {
            if i > 0 {
                f.write_str(".")?;
            }
            match seg {
                PathSegment::Static { name, .. } => f.write_str(name)?,
                PathSegment::Dynamic(e) => write!(f, "({e})")?,
            }
        }
        Ok(())
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ExprKind::Literal(l) => write!(f, "{l}"),
            ExprKind::PathRead(p) => write!(f, "{p}"),
            ExprKind::Binary { op, lhs, rhs } => write!(f, "({lhs} {} {rhs})", op.symbol()),
            ExprKind::Unary { op, operand } => write!(f, "{}({operand})", op.symbol()),
        }
    }
}

impl Behaviour {
    fn write_indented(&self, f: &mut fmt::Formatter<'_>, depth: usize) -> fmt::Result {
        let pad = "    ".repeat(depth);
        match &self.kind {
            BehaviourKind::Nil => write!(f, "{pad}nullProcess"),
            BehaviourKind::Seq { first, second } => {
                first.write_indented(f, depth)?;
                f.write_str(";\n")?;
                second.write_indented(f, depth)
            }
            BehaviourKind::Assign { target, value } => write!(f, "{pad}{target} = {value}"),
            BehaviourKind::If {
                cond,
                then_branch,
                else_branch,
            } => {
                writeln!(f, "{pad}if ({cond}) {{")?;
                then_branch.write_indented(f, depth + 1)?;
                write!(f, "\n{pad}}}")?;
                if let Some(e) = else_branch {
                    f.write_str(" else {\n")?;
                    e.write_indented(f, depth + 1)?;
                    write!(f, "\n{pad}}}")?;
                }
                Ok(())
            }
            BehaviourKind::While { cond, body } => {
                writeln!(f, "{pad}while ({cond}) {{")?;
                body.write_indented(f, depth + 1)?;
                write!(f, "\n{pad}}}")
            }
            BehaviourKind::Println { arg } => write!(f, "{pad}println@Console({arg})()"),
        }
    }
}

impl fmt::Display for Behaviour {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_indented(f, 0)
    }
}

impl fmt::Display for SourceProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("main\n{\n")?;
        self.main.write_indented(f, 1)?;
        f.write_str("\n}\n")
    }
}
