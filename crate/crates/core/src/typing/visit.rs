use crate::span::SourceSpan;
use crate::syntax::{
    Behaviour, BehaviourKind, BinaryOp, Expr, ExprKind, PathSegment, UnaryOp, VarPath,
};

use super::{
    BasicType, ConstraintStore, GenError, Rule, TermKind, TermRef, DYNAMIC_PATH_MARKER,
    TERM_ID_PREFIX,
};

impl ConstraintStore {
    pub fn visit_behaviour(&mut self, b: &Behaviour) -> Result<(), GenError> {
        match &b.kind {
            BehaviourKind::Nil => self.visit_nil(),
            BehaviourKind::Seq { first, second } => self.visit_seq(first, second)?,
            BehaviourKind::Assign { target, value } => self.visit_assign(target, value, &b.span)?,
            BehaviourKind::If {
                cond,
                then_branch,
                else_branch,
            } => self.visit_if(cond, then_branch, else_branch.as_deref())?,
            BehaviourKind::While { cond, body } => self.visit_while(cond, body)?,
            BehaviourKind::Println { arg } => self.visit_println(arg)?,
        }
        debug_assert!(
            self.term_stack.is_empty(),
            "term stack not empty after statement"
        );
        Ok(())
    }

    /// T-Nil: the environment is unchanged.
    pub fn visit_nil(&mut self) {}

    /// T-Seq: the second component is typed in the environment left by the first.
    pub fn visit_seq(&mut self, first: &Behaviour, second: &Behaviour) -> Result<(), GenError> {
        self.visit_behaviour(first)?;
        self.visit_behaviour(second)
    }

    /// Target declarations, then the value group, then
    /// `sameType target value` and `hasType target τ` when τ is known.
    pub fn visit_assign(
        &mut self,
        target: &VarPath,
        value: &Expr,
        span: &SourceSpan,
    ) -> Result<(), GenError> {
        let var = self.resolve_path(target)?;
        self.begin_group();
        self.visit_expr(value)?;
        let (term, ty) = self.pop_term();
        self.same_type(&var, &term, Rule::Assign, span);
        if let Some(ty) = ty {
            self.has_type(&var, ty, Rule::Assign, span);
        }
        Ok(())
    }

    /// T-If-Then-Else. Branch agreement follows from monomorphic variables.
    pub fn visit_if(
        &mut self,
        cond: &Expr,
        then_branch: &Behaviour,
        else_branch: Option<&Behaviour>,
    ) -> Result<(), GenError> {
        self.condition(cond, Rule::IfThenElse)?;
        self.visit_behaviour(then_branch)?;
        if let Some(else_branch) = else_branch {
            self.visit_behaviour(else_branch)?;
        }
        Ok(())
    }

    /// T-While. The body may not retype variables, which monomorphism enforces.
    pub fn visit_while(&mut self, cond: &Expr, body: &Behaviour) -> Result<(), GenError> {
        self.condition(cond, Rule::While)?;
        self.visit_behaviour(body)
    }

    pub fn visit_println(&mut self, arg: &Expr) -> Result<(), GenError> {
        self.begin_group();
        self.visit_expr(arg)?;
        self.pop_term();
        Ok(())
    }

    fn condition(&mut self, cond: &Expr, rule: Rule) -> Result<(), GenError> {
        self.begin_group();
        self.visit_expr(cond)?;
        let (term, _) = self.pop_term();
        self.begin_group();
        self.has_type(&term, BasicType::Bool, rule, &cond.span);
        Ok(())
    }

    /// Generates the constraints of `e` and leaves its term on top of the
    /// term stack. Returns a copy of that term and its inferred type.
    pub fn visit_expr(&mut self, e: &Expr) -> Result<(TermRef, Option<BasicType>), GenError> {
        let span = &e.span;
        let (term, ty) = match &e.kind {
            ExprKind::Literal(lit) => {
                let t = self.fresh_intermediate(Rule::Literal, span);
                let ty = BasicType::from(lit.kind);
                self.has_type(&t, ty, Rule::Literal, span);
                (t, Some(ty))
            }
            ExprKind::PathRead(path) => (self.resolve_path(path)?, None),
            ExprKind::Binary { op, lhs, rhs } => {
                self.visit_expr(lhs)?;
                self.visit_expr(rhs)?;
                let (r, r_ty) = self.pop_term();
                let (l, l_ty) = self.pop_term();
                self.binary(*op, (l, l_ty), (r, r_ty), span)
            }
            ExprKind::Unary { op, operand } => {
                self.visit_expr(operand)?;
                let (o, o_ty) = self.pop_term();
                match op {
                    UnaryOp::Not => {
                        self.has_type(&o, BasicType::Bool, Rule::Not, span);
                        let t = self.fresh_intermediate(Rule::Not, span);
                        self.has_type(&t, BasicType::Bool, Rule::Not, span);
                        (t, Some(BasicType::Bool))
                    }
                    UnaryOp::Neg => {
                        let t = self.fresh_intermediate(Rule::Neg, span);
                        self.same_type(&t, &o, Rule::Neg, span);
                        (t, o_ty)
                    }
                }
            }
        };
        self.push_term(term.clone(), ty);
        Ok((term, ty))
    }

    fn binary(
        &mut self,
        op: BinaryOp,
        (l, l_ty): (TermRef, Option<BasicType>),
        (r, r_ty): (TermRef, Option<BasicType>),
        span: &SourceSpan,
    ) -> (TermRef, Option<BasicType>) {
        match op {
            BinaryOp::Lt
            | BinaryOp::Gt
            | BinaryOp::Le
            | BinaryOp::Ge
            | BinaryOp::Eq
            | BinaryOp::Ne => {
                let rule = if matches!(op, BinaryOp::Eq | BinaryOp::Ne) {
                    Rule::Equality
                } else {
                    Rule::Compare
                };
                self.same_type(&l, &r, rule, span);
                let t = self.fresh_intermediate(rule, span);
                self.has_type(&t, BasicType::Bool, rule, span);
                (t, Some(BasicType::Bool))
            }
            BinaryOp::Add | BinaryOp::Sub | BinaryOp::Mul | BinaryOp::Div => {
                self.same_type(&l, &r, Rule::Arith, span);
                let t = self.fresh_intermediate(Rule::Arith, span);
                self.same_type(&t, &l, Rule::Arith, span);
                (t, l_ty.or(r_ty))
            }
            BinaryOp::And | BinaryOp::Or => {
                self.has_type(&l, BasicType::Bool, Rule::Logic, span);
                self.has_type(&r, BasicType::Bool, Rule::Logic, span);
                let t = self.fresh_intermediate(Rule::Logic, span);
                self.has_type(&t, BasicType::Bool, Rule::Logic, span);
                (t, Some(BasicType::Bool))
            }
        }
    }

    /// Term for a variable path.
    ///
    /// Static paths map to their dotted name and are declared once. A path
    /// with a computed key gets a fresh `DYNAMIC_PATH` term on every
    /// occurrence, so it never constrains any other term. Multi-segment
    /// paths also declare a path-node term and every static prefix.
    pub fn resolve_path(&mut self, path: &VarPath) -> Result<TermRef, GenError> {
        let Some(PathSegment::Static { .. }) = path.segments.first() else {
            return Err(GenError::MalformedPath {
                span: path.span.clone(),
                message: "a path must start with a static name".into(),
            });
        };
        let span = &path.span;
        let rule = if path.is_static() {
            Rule::Path
        } else {
            Rule::DynamicPath
        };
        if path.segments.len() > 1 {
            self.fresh_intermediate(rule, span);
        }

        let mut prefix = String::new();
        let mut segments = path.segments.iter();
        let mut first_key = None;
        for seg in segments.by_ref() {
            match seg {
                PathSegment::Static {
                    name,
                    span: seg_span,
                } => {
                    if !prefix.is_empty() {
                        prefix.push('.');
                    }
                    prefix.push_str(name);
                    let term = TermRef {
                        id: prefix.clone(),
                        origin_span: SourceSpan::new(
                            span.file.clone(),
                            span.start(),
                            seg_span.end(),
                        ),
                        kind: TermKind::Variable,
                    };
                    self.declare(&term, rule);
                }
                PathSegment::Dynamic(key) => {
                    first_key = Some(key);
                    break;
                }
            }
        }

        let Some(first_key) = first_key else {
            return Ok(TermRef {
                id: prefix,
                origin_span: span.clone(),
                kind: TermKind::Variable,
            });
        };

        let keys = std::iter::once(first_key).chain(segments.filter_map(|s| match s {
            PathSegment::Dynamic(e) => Some(e),
            PathSegment::Static { .. } => None,
        }));
        for key in keys {
            self.visit_expr(key)?;
            self.pop_term();
        }
        let n = self.mint_id();
        let term = TermRef {
            id: format!("{prefix}.{DYNAMIC_PATH_MARKER}{TERM_ID_PREFIX}{n}"),
            origin_span: span.clone(),
            kind: TermKind::DynamicPath,
        };
        self.declare(&term, rule);
        Ok(term)
    }
}
