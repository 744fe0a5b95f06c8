use crate::constraint::Constraint;
use crate::syntax::{Origin, Restriction, TermContext, TermVar, TyVar, Type, TypeContext};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Frame {
    /// `□ ∧ C`
    Conj(Constraint),
    /// `∀a`
    Forall(TyVar, Origin),
    /// `∃a`
    Exists(TyVar),
    /// `let_R x = ⊓a.□ in C`
    Let { restriction: Restriction, x: TermVar, a: TyVar, rest: Constraint },
    /// `def (x : A)`
    Def(TermVar, Type, Origin),
}

impl Frame {
    /// The type variable this frame binds, if any.
    pub fn type_binder(&self) -> Option<&TyVar> {
        match self {
            Frame::Forall(a, _) | Frame::Exists(a) | Frame::Let { a, .. } => Some(a),
            _ => None,
        }
    }

    /// The term variable this frame binds, if any.
    pub fn term_binder(&self) -> Option<&TermVar> {
        match self {
            Frame::Def(x, _, _) | Frame::Let { x, .. } => Some(x),
            _ => None,
        }
    }

    pub fn is_exists(&self) -> bool {
        matches!(self, Frame::Exists(_))
    }

    /// Contribution to `|F[C]|`.
    pub fn size(&self) -> usize {
        match self {
            Frame::Conj(c) => 1 + c.size(),
            Frame::Forall(..) | Frame::Exists(_) | Frame::Def(..) => 1,
            Frame::Let { rest, .. } => 3 + rest.size(),
        }
    }

    /// Contribution to `insts(F[C])`.
    pub fn insts(&self) -> usize {
        match self {
            Frame::Conj(c) | Frame::Let { rest: c, .. } => c.insts(),
            _ => 0,
        }
    }
}

/// Rigid variables bound by the stack, bottom-up.
pub fn delta_of(stack: &[Frame]) -> TypeContext {
    stack
        .iter()
        .filter_map(|f| match f {
            Frame::Forall(a, _) => Some(a.clone()),
            _ => None,
        })
        .collect()
}

/// Flexible variables bound by the stack, bottom-up.
pub fn xi_of(stack: &[Frame]) -> TypeContext {
    stack
        .iter()
        .filter_map(|f| match f {
            Frame::Exists(a) | Frame::Let { a, .. } => Some(a.clone()),
            _ => None,
        })
        .collect()
}

/// Term bindings introduced by def frames, bottom-up.
pub fn gamma_of(stack: &[Frame]) -> TermContext {
    stack
        .iter()
        .filter_map(|f| match f {
            Frame::Def(x, t, _) => Some((x.clone(), t.clone())),
            _ => None,
        })
        .collect()
}

/// Term variables in scope at the top of the stack (types ignored).
pub fn term_names_of(stack: &[Frame]) -> Vec<TermVar> {
    stack
        .iter()
        .filter_map(|f| match f {
            Frame::Def(x, _, _) => Some(x.clone()),
            _ => None,
        })
        .collect()
}

/// All type variables bound by the stack, in binding order.
pub fn atv(stack: &[Frame]) -> Vec<TyVar> {
    stack.iter().filter_map(|f| f.type_binder().cloned()).collect()
}

/// `F[C]`
pub fn plug(stack: &[Frame], c: Constraint) -> Constraint {
    stack.iter().rev().fold(c, |acc, f| match f {
        Frame::Conj(c2) => Constraint::and(acc, c2.clone()),
        Frame::Forall(a, o) => Constraint::Forall(a.clone(), Box::new(acc), *o),
        Frame::Exists(a) => Constraint::exists(a, acc),
        Frame::Let { restriction, x, a, rest } => Constraint::let_(*restriction, x, a, acc, rest.clone()),
        Frame::Def(x, t, o) => Constraint::Def(x.clone(), t.clone(), Box::new(acc), *o),
    })
}
