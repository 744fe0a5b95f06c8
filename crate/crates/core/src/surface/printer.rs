use std::collections::{HashMap, HashSet};
use std::fmt;

use crate::syntax::{split, Ctor, Restriction, RestrictionContext, Term, TermKind, TyVar, Type};

#[derive(Clone, Copy, PartialEq)]
enum TyPos {
    Top,
    ArrowLeft,
    ListArg,
}

/// Assigns display names to type variables.
#[derive(Clone, Debug, Default)]
pub struct Names {
    names: HashMap<TyVar, String>,
    used: HashSet<String>,
    next_letter: usize,
    record: Option<Vec<String>>,
}

impl Names {
    pub fn new() -> Names {
        Names::default()
    }

    /// Reserve names for the free variables of `ts`, keeping their text where possible.
    pub fn reserve_free<'a>(&mut self, ts: impl IntoIterator<Item = &'a Type>) {
        for t in ts {
            for a in t.ftv_ordered() {
                if !self.names.contains_key(&a) {
                    let name = self.unused_variant(&a.name);
                    self.bind(&a, name);
                }
            }
        }
    }

    pub fn bind(&mut self, a: &TyVar, name: String) {
        self.used.insert(name.clone());
        self.names.insert(a.clone(), name);
    }

    /// Name a binder after its own text, avoiding names already in use.
    pub fn name_binder(&mut self, a: &TyVar) -> String {
        let name = self.unused_variant(&a.name);
        self.bind(a, name.clone());
        name
    }

    fn unused_variant(&self, base: &str) -> String {
        if !self.used.contains(base) {
            return base.to_string();
        }
        (1..).map(|i| format!("{base}{i}")).find(|n| !self.used.contains(n)).unwrap()
    }

    fn letter(&mut self) -> String {
        loop {
            let i = self.next_letter;
            self.next_letter += 1;
            let c = (b'a' + (i % 26) as u8) as char;
            let name = if i < 26 { c.to_string() } else { format!("{c}{}", i / 26) };
            if !self.used.contains(&name) {
                return name;
            }
        }
    }

    fn name_of(&mut self, a: &TyVar) -> String {
        if let Some(n) = self.names.get(a) {
            return n.clone();
        }
        let name = self.unused_variant(&a.name);
        self.bind(a, name.clone());
        name
    }

    fn write_type(&mut self, t: &Type, pos: TyPos, out: &mut String) {
        match t {
            Type::Var(a) => out.push_str(&self.name_of(a)),
            Type::Forall(..) => {
                let paren = pos != TyPos::Top;
                if paren {
                    out.push('(');
                }
                let (vars, body) = t.prenex();
                out.push_str("forall");
                let saved: Vec<Option<String>> = vars.iter().map(|a| self.names.get(a).cloned()).collect();
                for a in &vars {
                    let n = self.letter();
                    if let Some(rec) = self.record.as_mut() {
                        rec.push(n.clone());
                    }
                    out.push(' ');
                    out.push_str(&n);
                    self.bind(a, n);
                }
                out.push_str(". ");
                self.write_type(body, TyPos::Top, out);
                for (a, old) in vars.iter().zip(saved) {
                    match old {
                        Some(n) => self.names.insert(a.clone(), n),
                        None => self.names.remove(a),
                    };
                }
                if paren {
                    out.push(')');
                }
            }
            Type::Ctor(Ctor::Arrow, args) => {
                let paren = pos != TyPos::Top;
                if paren {
                    out.push('(');
                }
                self.write_type(&args[0], TyPos::ArrowLeft, out);
                out.push_str(" -> ");
                self.write_type(&args[1], TyPos::Top, out);
                if paren {
                    out.push(')');
                }
            }
            Type::Ctor(Ctor::Product, args) => {
                out.push('(');
                self.write_type(&args[0], TyPos::Top, out);
                out.push_str(", ");
                self.write_type(&args[1], TyPos::Top, out);
                out.push(')');
            }
            Type::Ctor(Ctor::List, args) => {
                let paren = pos == TyPos::ListArg;
                if paren {
                    out.push('(');
                }
                out.push_str("List ");
                self.write_type(&args[0], TyPos::ListArg, out);
                if paren {
                    out.push(')');
                }
            }
            Type::Ctor(d, _) => out.push_str(d.name()),
        }
    }

    pub fn type_to_string(&mut self, t: &Type) -> String {
        let mut out = String::new();
        self.write_type(t, TyPos::Top, &mut out);
        out
    }

    /// Like `type_to_string`, also returning the names given to the binders
    /// in order of appearance.
    fn type_to_string_recording(&mut self, t: &Type) -> (String, Vec<String>) {
        self.record = Some(Vec::new());
        let s = self.type_to_string(t);
        (s, self.record.take().unwrap_or_default())
    }
}

/// Renders a type. Bound variables become `a`, `b`, … in order of appearance.
pub fn print_type(t: &Type) -> String {
    let mut names = Names::new();
    names.reserve_free([t]);
    names.type_to_string(t)
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_type(self))
    }
}

/// Display names for the residual flexible variables of an inferred type.
pub fn residual_names(t: &Type, residual: &RestrictionContext) -> Vec<(TyVar, String, Restriction)> {
    t.ftv_ordered()
        .into_iter()
        .filter_map(|a| residual.get(&a).map(|r| (a, r)))
        .enumerate()
        .map(|(i, (a, r))| (a, format!("_{}", i + 1), r))
        .collect()
}

/// Renders an inferred type: residual variables print as `_1`, `_2`, … and a
/// note lists the monomorphic ones.
pub fn print_inferred(t: &Type, residual: &RestrictionContext) -> String {
    let holes = residual_names(t, residual);
    let mut names = Names::new();
    for (a, n, _) in &holes {
        names.bind(a, n.clone());
    }
    names.reserve_free([t]);
    let mut out = names.type_to_string(t);
    let mono: Vec<&str> = holes
        .iter()
        .filter(|(_, _, r)| *r == Restriction::Mono)
        .map(|(_, n, _)| n.as_str())
        .collect();
    match mono.len() {
        0 => {}
        1 => out.push_str(&format!("  where {} is monomorphic", mono[0])),
        _ => out.push_str(&format!("  where {} are monomorphic", mono.join(", "))),
    }
    out
}

#[derive(Clone, Copy, PartialEq)]
enum TmPos {
    Top,
    AppHead,
    AppArg,
}

/// Renders a term in the concrete syntax accepted by the parser.
pub fn print_term(m: &Term) -> String {
    let mut names = Names::new();
    let mut free = Vec::new();
    collect_annotations(m, &mut Vec::new(), &mut free);
    names.reserve_free(free.iter());
    let mut out = String::new();
    write_term(&mut names, m, TmPos::Top, &mut out);
    out
}

fn collect_annotations(m: &Term, scoped: &mut Vec<TyVar>, out: &mut Vec<Type>) {
    fn keep(t: &Type, scoped: &[TyVar], out: &mut Vec<Type>) {
        out.extend(t.ftv_ordered().into_iter().filter(|a| !scoped.contains(a)).map(Type::Var));
    }
    match &m.kind {
        TermKind::FrozenVar(_) | TermKind::Var(_) => {}
        TermKind::App(a, b) | TermKind::Let(_, a, b) => {
            collect_annotations(a, scoped, out);
            collect_annotations(b, scoped, out);
        }
        TermKind::Lam(_, a) => collect_annotations(a, scoped, out),
        TermKind::LamAnn(_, t, a) => {
            keep(t, scoped, out);
            collect_annotations(a, scoped, out);
        }
        TermKind::LetAnn(_, t, a, b) => {
            keep(t, scoped, out);
            let (prefix, _) = split(t, a);
            let depth = scoped.len();
            scoped.extend(prefix);
            collect_annotations(a, scoped, out);
            scoped.truncate(depth);
            collect_annotations(b, scoped, out);
        }
    }
}

fn write_term(names: &mut Names, m: &Term, pos: TmPos, out: &mut String) {
    let binder_form = matches!(
        m.kind,
        TermKind::Lam(..) | TermKind::LamAnn(..) | TermKind::Let(..) | TermKind::LetAnn(..)
    );
    let paren = match pos {
        TmPos::Top => false,
        TmPos::AppHead => binder_form,
        TmPos::AppArg => binder_form || matches!(m.kind, TermKind::App(..)),
    };
    if paren {
        out.push('(');
    }
    match &m.kind {
        TermKind::Var(x) => out.push_str(x.as_str()),
        TermKind::FrozenVar(x) => {
            out.push('~');
            out.push_str(x.as_str());
        }
        TermKind::App(f, a) => {
            write_term(names, f, TmPos::AppHead, out);
            out.push(' ');
            write_term(names, a, TmPos::AppArg, out);
        }
        TermKind::Lam(x, body) => {
            out.push_str(&format!("fun {x} -> "));
            write_term(names, body, TmPos::Top, out);
        }
        TermKind::LamAnn(x, t, body) => {
            let ts = names.type_to_string(t);
            out.push_str(&format!("fun ({x} : {ts}) -> "));
            write_term(names, body, TmPos::Top, out);
        }
        TermKind::Let(x, bound, body) => {
            out.push_str(&format!("let {x} = "));
            write_term(names, bound, TmPos::Top, out);
            out.push_str(" in ");
            write_term(names, body, TmPos::Top, out);
        }
        TermKind::LetAnn(x, t, bound, body) => {
            let (ts, binder_names) = names.type_to_string_recording(t);
            out.push_str(&format!("let ({x} : {ts}) = "));
            // The annotation's prefix scopes over the bound term under the
            // names it was printed with.
            let (prefix, _) = split(t, bound);
            let mut inner = names.clone();
            for (a, n) in prefix.iter().zip(binder_names) {
                inner.bind(a, n);
            }
            write_term(&mut inner, bound, TmPos::Top, out);
            names.used.extend(inner.used.iter().cloned());
            names.next_letter = names.next_letter.max(inner.next_letter);
            out.push_str(" in ");
            write_term(names, body, TmPos::Top, out);
        }
    }
    if paren {
        out.push(')');
    }
}
