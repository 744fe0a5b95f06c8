//! Preludes: `val NAME : TYPE` declarations that populate the initial term
//! context.

use crate::surface::{ParseError, Session};
use crate::syntax::{Term, TermContext, TermVar, Type};

/// The standard prelude shipped with the library.
pub const DEFAULT_PRELUDE: &str = include_str!("../std.fml");

/// Parses a prelude. Names must be distinct, types closed, and no expression
/// may follow the declarations.
pub fn parse_prelude(session: &mut Session, src: &str) -> Result<TermContext, ParseError> {
    let program = session.parse_program(src)?;
    if let Some(body) = program.body {
        let span = body.span().unwrap_or_default();
        return Err(ParseError::new(span, "a prelude may only contain declarations", vec!["`val`".into()]));
    }
    let mut gamma = TermContext::new();
    for decl in program.decls {
        if gamma.contains(&decl.name) {
            return Err(ParseError::new(decl.span, &format!("`{}` is declared twice", decl.name), vec![]));
        }
        if let Some(a) = decl.ty.ftv_ordered().first() {
            let msg = format!("the type of `{}` mentions the unbound type variable `{}`", decl.name, a.name);
            return Err(ParseError::new(decl.span, &msg, vec![]));
        }
        gamma.insert(decl.name, decl.ty);
    }
    Ok(gamma)
}

pub fn default_prelude(session: &mut Session) -> TermContext {
    parse_prelude(session, DEFAULT_PRELUDE).expect("the default prelude parses")
}

pub fn is_literal(x: &TermVar) -> bool {
    !x.as_str().is_empty() && x.as_str().bytes().all(|b| b.is_ascii_digit())
}

/// `gamma` extended with `n : Int` for every integer literal free in `m`.
pub fn bind_literals(m: &Term, gamma: &TermContext) -> TermContext {
    let mut out = gamma.clone();
    for x in m.free_term_vars() {
        if is_literal(&x) && !out.contains(&x) {
            out.insert(x, Type::int());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_prelude_loads() {
        let mut sess = Session::new();
        let gamma = default_prelude(&mut sess);
        for name in ["id", "choose", "single", "pair", "const"] {
            assert!(gamma.contains(&TermVar::new(name)), "{name}");
        }
    }

    #[test]
    fn rejects_bad_preludes() {
        let mut sess = Session::new();
        assert!(parse_prelude(&mut sess, "val x : Int\nval x : Bool").is_err());
        assert!(parse_prelude(&mut sess, "val x : a").is_err());
        assert!(parse_prelude(&mut sess, "val x : Int\nx").is_err());
    }

    #[test]
    fn literals_are_bound() {
        let m = crate::surface::parse_term("fun x -> inc 3").unwrap();
        let gamma = bind_literals(&m, &TermContext::new());
        assert_eq!(gamma.get(&TermVar::new("3")), Some(&Type::int()));
        assert!(!gamma.contains(&TermVar::new("inc")));
    }
}
