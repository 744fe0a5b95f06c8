use std::collections::BTreeMap;

use crate::constraint::Constraint;
use crate::solver::{run, RunConfig, SolverState};
use crate::syntax::{
    apply_type_subst, wf_type, NameSupply, Origin, Restriction, RestrictionContext, TermVar, TyVar, Type,
    TypeContext,
};

use super::holes::Holes;
use super::instantiation::Instantiation;

/// Decides `Δ; Ξ; Γ; δ ⊢ C`, where `inst` maps every variable of `xi` to a
/// type over `delta`.
pub fn check_constraint_sat(
    delta: &TypeContext,
    xi: &TypeContext,
    gamma: &crate::syntax::TermContext,
    inst: &Instantiation,
    c: &Constraint,
) -> bool {
    let top = delta
        .iter()
        .chain(xi.iter())
        .map(|v| v.uid)
        .chain([gamma.max_uid(), c.max_uid()])
        .chain(inst.values().map(Type::max_uid))
        .max()
        .unwrap_or(0);
    let mut sem = Sem { holes: Holes::new(NameSupply::above(top)) };
    let mut scope = Scope {
        rigid: delta.iter().cloned().collect(),
        xi: xi.iter().cloned().collect(),
        gamma: gamma.iter().map(|(x, t)| (x.clone(), t.clone())).collect(),
        inst: inst.clone(),
    };
    sem.sat(&mut scope, c)
}

struct Scope {
    rigid: Vec<TyVar>,
    xi: Vec<TyVar>,
    gamma: Vec<(TermVar, Type)>,
    inst: BTreeMap<TyVar, Type>,
}

impl Scope {
    fn lookup(&self, x: &TermVar) -> Option<&Type> {
        self.gamma.iter().rev().find(|(y, _)| y == x).map(|(_, t)| t)
    }

    fn wf(&self, t: &Type) -> bool {
        let vars = TypeContext::from_vars(self.rigid.iter().chain(self.xi.iter()).cloned());
        wf_type(&vars, &RestrictionContext::new(), Restriction::Poly, t)
    }
}

struct Sem {
    holes: Holes,
}

/// The most general model of a let-bound constraint, as computed by the
/// solver: `inst` maps the flexible variables to types over `rigid` and the
/// residual variables `vars`.
struct MostGeneral {
    inst: BTreeMap<TyVar, Type>,
    vars: Vec<TyVar>,
}

impl Sem {
    fn sat(&mut self, s: &mut Scope, c: &Constraint) -> bool {
        match c {
            Constraint::True => true,
            Constraint::And(c1, c2) => self.sat(s, c1) && self.sat(s, c2),
            Constraint::Eq(a, b, _) => {
                s.wf(a) && s.wf(b) && {
                    let (a, b) = (apply_type_subst(&s.inst, a), apply_type_subst(&s.inst, b));
                    self.holes.unify(&s.rigid, &a, &b)
                }
            }
            Constraint::Freeze(x, a, _) => match s.lookup(x).cloned() {
                Some(t) => self.holes.unify(&s.rigid, &t, &apply_type_subst(&s.inst, a)),
                None => false,
            },
            Constraint::Inst(x, a, _) => {
                let Some(t) = s.lookup(x).map(|t| self.holes.resolve(t)) else {
                    return false;
                };
                let (vars, h) = t.prenex();
                let map: BTreeMap<TyVar, Type> =
                    vars.iter().map(|v| (v.clone(), self.holes.fresh(Restriction::Poly, &s.rigid))).collect();
                self.holes.unify(&s.rigid, &apply_type_subst(&map, h), &apply_type_subst(&s.inst, a))
            }
            Constraint::Forall(a, c, _) => {
                s.rigid.push(a.clone());
                let ok = self.sat(s, c);
                s.rigid.pop();
                ok
            }
            Constraint::Exists(a, c) => {
                let h = self.holes.fresh(Restriction::Poly, &s.rigid);
                self.with_flexible(s, a, h, |sem, s| sem.sat(s, c))
            }
            Constraint::Mono(a, _) => {
                let t = s.inst.get(a).cloned().unwrap_or_else(|| Type::var(a));
                self.holes.require_mono(&s.rigid, &t)
            }
            Constraint::Def(x, a, c, _) => {
                for v in a.ftv() {
                    if !s.rigid.contains(&v) {
                        let t = s.inst.get(&v).cloned().unwrap_or_else(|| Type::var(&v));
                        if !self.holes.require_mono(&s.rigid, &t) {
                            return false;
                        }
                    }
                }
                let t = apply_type_subst(&s.inst, a);
                s.gamma.push((x.clone(), t));
                let ok = self.sat(s, c);
                s.gamma.pop();
                ok
            }
            Constraint::LetPoly(x, a, c1, c2) => {
                let Some(mg) = self.most_general(s, a, c1) else {
                    return false;
                };
                let outer: Vec<TyVar> = s
                    .xi
                    .iter()
                    .flat_map(|v| mg.inst.get(v).map(Type::ftv_ordered).unwrap_or_default())
                    .filter(|v| mg.vars.contains(v))
                    .collect();
                let ma = mg.inst[a].clone();
                let generalised: Vec<TyVar> =
                    ma.ftv_ordered().into_iter().filter(|v| mg.vars.contains(v) && !outer.contains(v)).collect();
                let mono: BTreeMap<TyVar, Type> =
                    outer.iter().map(|v| (v.clone(), self.holes.fresh(Restriction::Mono, &s.rigid))).collect();
                let t = apply_type_subst(&mono, &ma);

                let depth = s.rigid.len();
                s.rigid.extend(generalised.iter().cloned());
                let ok = self.with_flexible(s, a, t.clone(), |sem, s| sem.sat(s, c1));
                s.rigid.truncate(depth);
                if !ok {
                    return false;
                }
                s.gamma.push((x.clone(), Type::forall(&generalised, t)));
                let ok = self.sat(s, c2);
                s.gamma.pop();
                ok
            }
            Constraint::LetMono(x, a, c1, c2) => {
                let Some(mg) = self.most_general(s, a, c1) else {
                    return false;
                };
                let mono: BTreeMap<TyVar, Type> =
                    mg.vars.iter().map(|v| (v.clone(), self.holes.fresh(Restriction::Mono, &s.rigid))).collect();
                let t = apply_type_subst(&mono, &mg.inst[a]);
                if !self.with_flexible(s, a, t.clone(), |sem, s| sem.sat(s, c1)) {
                    return false;
                }
                s.gamma.push((x.clone(), t));
                let ok = self.sat(s, c2);
                s.gamma.pop();
                ok
            }
        }
    }

    fn with_flexible(
        &mut self,
        s: &mut Scope,
        a: &TyVar,
        t: Type,
        f: impl FnOnce(&mut Sem, &mut Scope) -> bool,
    ) -> bool {
        s.xi.push(a.clone());
        let prev = s.inst.insert(a.clone(), t);
        let ok = f(self, s);
        match prev {
            Some(p) => s.inst.insert(a.clone(), p),
            None => s.inst.remove(a),
        };
        s.xi.pop();
        ok
    }

    /// `mostgen(Δ, (Ξ, a), Γ, C₁, Δm, δm)` via the solver. Open holes in the
    /// context are treated as rigid.
    fn most_general(&mut self, s: &Scope, a: &TyVar, c1: &Constraint) -> Option<MostGeneral> {
        let mut rigid: Vec<TyVar> = s.rigid.clone();
        let mut defs: Vec<(TermVar, Type)> = Vec::new();
        for (x, t) in s.gamma.iter().rev() {
            if defs.iter().any(|(y, _)| y == x) {
                continue;
            }
            let t = self.holes.resolve(t);
            for h in self.holes.open_holes(&t) {
                if !rigid.contains(&h) {
                    rigid.push(h);
                }
            }
            defs.push((x.clone(), t));
        }
        let mut flexible = s.xi.clone();
        flexible.push(a.clone());

        let body = defs
            .into_iter()
            .fold(c1.clone(), |c, (x, t)| Constraint::Def(x, t, Box::new(c), Origin(None)));
        let c = flexible.iter().rev().fold(body, |c, v| Constraint::exists(v, c));
        let c = rigid.iter().rev().fold(c, |c, r| Constraint::Forall(r.clone(), Box::new(c), Origin(None)));

        let out = run(SolverState::initial(c), &mut self.holes.supply, &RunConfig::default());
        let state = out.outcome.ok()?;
        let inst: BTreeMap<TyVar, Type> = flexible.iter().map(|v| (v.clone(), state.subst.image(v))).collect();
        let mut vars = Vec::new();
        for t in inst.values() {
            for v in t.ftv_ordered() {
                if !rigid.contains(&v) && !vars.contains(&v) {
                    vars.push(v);
                }
            }
        }
        Some(MostGeneral { inst, vars })
    }
}
