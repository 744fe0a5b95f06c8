use std::collections::BTreeSet;
use std::fmt;

use crate::constraint::{congen, dump_constraint, freshen_annotations, uniquify_binders, Constraint};
use crate::syntax::{
    split, wf_term, wf_type, NameSupply, Origin, Restriction, RestrictionContext, Term, TermContext, TermKind,
    TermVar, TyVar, Type, TypeContext,
};
use crate::unify::Subst;

use super::error::{InternalError, InvariantKind, SolveError, TypeError, TypeErrorKind};
use super::frame::Frame;
use super::machine::{check_state, guards, measure, step_observed, SolverState, StepOutcome, Rule};
use super::partition::{partition, rank_partition};

#[derive(Clone, Debug, Default)]
pub struct RunConfig {
    /// Assert well-formedness, measure decrease, determinism and rank agreement
    /// at every step.
    pub check_invariants: bool,
    pub record_trace: bool,
    /// Keep a copy of the inputs of every `partition` call.
    pub record_partitions: bool,
    /// Overrides the default budget of `10 × (|F[C]| + 100)` steps.
    pub step_budget: Option<usize>,
}

impl RunConfig {
    pub fn checked() -> RunConfig {
        RunConfig { check_invariants: true, ..RunConfig::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceRecord {
    pub step: usize,
    pub rule: Rule,
    pub stack_len: usize,
    pub measure: (usize, usize, usize, usize),
    pub current: String,
}

const TRACE_WIDTH: usize = 120;

impl fmt::Display for TraceRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (i, j, k, l) = self.measure;
        write!(
            f,
            "step={} rule={} stack={} measure=({i},{j},{k},{l}) current={}",
            self.step, self.rule, self.stack_len, self.current
        )
    }
}

fn truncate(s: String) -> String {
    match s.char_indices().nth(TRACE_WIDTH) {
        Some((cut, _)) => format!("{}...", &s[..cut]),
        None => s,
    }
}

/// The inputs and result of one `partition` call made by the machine.
#[derive(Clone, Debug)]
pub struct PartitionCall {
    pub xi: Vec<TyVar>,
    pub lower: Vec<Frame>,
    pub upper: Vec<Frame>,
    pub subst: Subst,
    pub theta_env: RestrictionContext,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RunStats {
    pub steps: usize,
    pub partition_calls: usize,
    pub rank_checks: usize,
}

#[derive(Clone, Debug)]
pub struct RunOutput {
    pub outcome: Result<SolverState, SolveError>,
    pub trace: Vec<TraceRecord>,
    pub partitions: Vec<PartitionCall>,
    pub stats: RunStats,
}

fn internal(kind: InvariantKind, step: usize, message: String) -> SolveError {
    SolveError::Internal(InternalError { kind, step, message })
}

/// Steps `initial` until it is final or stuck.
pub fn run(initial: SolverState, supply: &mut NameSupply, config: &RunConfig) -> RunOutput {
    let mut trace = Vec::new();
    let mut partitions = Vec::new();
    let mut stats = RunStats::default();
    let outcome = drive(initial, supply, config, &mut trace, &mut partitions, &mut stats);
    RunOutput { outcome, trace, partitions, stats }
}

fn drive(
    initial: SolverState,
    supply: &mut NameSupply,
    config: &RunConfig,
    trace: &mut Vec<TraceRecord>,
    partitions: &mut Vec<PartitionCall>,
    stats: &mut RunStats,
) -> Result<SolverState, SolveError> {
    let budget = config.step_budget.unwrap_or_else(|| 10 * (measure(&initial).1 + 100));
    if config.check_invariants {
        check_state(&initial).map_err(|m| internal(InvariantKind::WellFormedness, 0, m))?;
    }
    let mut state = initial;
    loop {
        let step_no = stats.steps + 1;
        if stats.steps >= budget {
            return Err(internal(InvariantKind::StepBudget, step_no, format!("exceeded {budget} steps")));
        }
        let before = if config.check_invariants || config.record_trace { Some(measure(&state)) } else { None };
        if config.check_invariants && !state.is_final() {
            let matching = guards(&state);
            if matching.len() != 1 {
                let names: Vec<&str> = matching.iter().map(|r| r.name()).collect();
                return Err(internal(
                    InvariantKind::Determinism,
                    step_no,
                    format!("{} rules match: [{}]", matching.len(), names.join(", ")),
                ));
            }
        }

        let mut rank_mismatch: Option<String> = None;
        let outcome = {
            let mut observe = |xi: &[TyVar], lower: &[Frame], upper: &[Frame], subst: &Subst, env: &RestrictionContext| {
                stats.partition_calls += 1;
                if config.check_invariants {
                    stats.rank_checks += 1;
                    let plain = partition(xi, subst, env);
                    let ranked = rank_partition(xi, subst, lower, upper);
                    if plain != ranked && rank_mismatch.is_none() {
                        rank_mismatch = Some(format!("partition gave {plain:?}, rank_partition gave {ranked:?}"));
                    }
                }
                if config.record_partitions {
                    partitions.push(PartitionCall {
                        xi: xi.to_vec(),
                        lower: lower.to_vec(),
                        upper: upper.to_vec(),
                        subst: subst.clone(),
                        theta_env: env.clone(),
                    });
                }
            };
            step_observed(state, supply, &mut observe)
        };
        if let Some(m) = rank_mismatch {
            return Err(internal(InvariantKind::RankPartition, step_no, m));
        }

        match outcome {
            StepOutcome::Final(s) => return Ok(s),
            StepOutcome::Stuck(e) => return Err(SolveError::Type(e)),
            StepOutcome::Stepped(rule, next) => {
                stats.steps += 1;
                let after = before.map(|_| measure(&next));
                if config.check_invariants {
                    check_state(&next)
                        .map_err(|m| internal(InvariantKind::WellFormedness, step_no, format!("after {rule}: {m}")))?;
                    if after >= before {
                        return Err(internal(
                            InvariantKind::Measure,
                            step_no,
                            format!("{rule} moved the measure from {:?} to {:?}", before.unwrap(), after.unwrap()),
                        ));
                    }
                }
                if config.record_trace {
                    trace.push(TraceRecord {
                        step: step_no,
                        rule,
                        stack_len: next.stack.len(),
                        measure: after.unwrap(),
                        current: truncate(dump_constraint(&next.current)),
                    });
                }
                state = next;
            }
        }
    }
}

/// The result of inferring a type for a term.
#[derive(Clone, Debug)]
pub struct Inference {
    pub result_type: Type,
    /// Restrictions of the flexible variables left in `result_type`, in order
    /// of first occurrence.
    pub residual: RestrictionContext,
    /// The constraint the solver started from.
    pub constraint: Constraint,
    pub trace: Vec<TraceRecord>,
    pub partitions: Vec<PartitionCall>,
    pub stats: RunStats,
}

fn check_annotation(delta: &TypeContext, scope: &[TyVar], t: &Type, span: Origin) -> Result<(), TypeError> {
    match t.ftv_ordered().into_iter().find(|v| !delta.contains(v) && !scope.contains(v)) {
        Some(v) => Err(TypeError::new(TypeErrorKind::UnboundTypeVariable(v), span.0)),
        None => Ok(()),
    }
}

fn check_scopes(
    delta: &TypeContext,
    gamma: &TermContext,
    m: &Term,
    terms: &mut Vec<TermVar>,
    types: &mut Vec<TyVar>,
) -> Result<(), TypeError> {
    match &m.kind {
        TermKind::Var(x) | TermKind::FrozenVar(x) => {
            if terms.contains(x) || gamma.contains(x) {
                Ok(())
            } else {
                Err(TypeError::new(TypeErrorKind::UnboundVariable(x.clone()), m.span()))
            }
        }
        TermKind::App(f, a) => {
            check_scopes(delta, gamma, f, terms, types)?;
            check_scopes(delta, gamma, a, terms, types)
        }
        TermKind::Lam(x, body) | TermKind::LamAnn(x, _, body) => {
            if let TermKind::LamAnn(_, t, _) = &m.kind {
                check_annotation(delta, types, t, m.origin)?;
            }
            terms.push(x.clone());
            let r = check_scopes(delta, gamma, body, terms, types);
            terms.pop();
            r
        }
        TermKind::Let(x, bound, body) | TermKind::LetAnn(x, _, bound, body) => {
            let mut prefix = Vec::new();
            if let TermKind::LetAnn(_, t, _, _) = &m.kind {
                check_annotation(delta, types, t, m.origin)?;
                prefix = split(t, bound).0;
            }
            let depth = types.len();
            types.extend(prefix);
            let r = check_scopes(delta, gamma, bound, terms, types);
            types.truncate(depth);
            r?;
            terms.push(x.clone());
            let r = check_scopes(delta, gamma, body, terms, types);
            terms.pop();
            r
        }
    }
}

/// Validates the inputs and builds `∀Δ. ∃a. def Γ in ⟦m : a⟧`, returning it
/// with the result variable `a`.
pub fn initial_constraint(
    delta: &TypeContext,
    gamma: &TermContext,
    m: &Term,
    supply: &mut NameSupply,
) -> Result<(Constraint, TyVar), TypeError> {
    for (x, t) in gamma.iter() {
        check_annotation(delta, &[], t, Origin(None))?;
        if !wf_type(delta, &RestrictionContext::new(), Restriction::Poly, t) {
            return Err(TypeError::new(
                TypeErrorKind::IllFormedTerm(format!("the type of `{x}` is not well-formed")),
                None,
            ));
        }
    }
    check_scopes(delta, gamma, m, &mut Vec::new(), &mut Vec::new())?;

    let top = delta.iter().map(|a| a.uid).chain([gamma.max_uid(), m.max_uid()]).max().unwrap_or(0);
    supply.bump_past(top);
    let reserved: BTreeSet<TermVar> = gamma.iter().map(|(x, _)| x.clone()).collect();
    let m = freshen_annotations(&uniquify_binders(m, &reserved), supply);
    if !wf_term(delta, gamma, &m) {
        return Err(TypeError::new(TypeErrorKind::IllFormedTerm("binders clash with the context".into()), m.span()));
    }

    let a = supply.fresh("a");
    let body = congen(&m, &Type::var(&a), supply);
    let with_defs = gamma
        .iter()
        .collect::<Vec<_>>()
        .into_iter()
        .rev()
        .fold(body, |c, (x, t)| Constraint::Def(x.clone(), t.clone(), Box::new(c), Origin(None)));
    let c = delta
        .iter()
        .rev()
        .fold(Constraint::exists(&a, with_defs), |c, r| Constraint::Forall(r.clone(), Box::new(c), Origin(None)));
    Ok((c, a))
}

/// Infers a type for `m` under rigid variables `delta` and environment `gamma`.
pub fn infer(delta: &TypeContext, gamma: &TermContext, m: &Term) -> Result<Inference, SolveError> {
    infer_in(delta, gamma, m, &RunConfig::default(), &mut NameSupply::new())
}

/// As [`infer`], drawing fresh variables from the caller's `supply`.
pub fn infer_in(
    delta: &TypeContext,
    gamma: &TermContext,
    m: &Term,
    config: &RunConfig,
    supply: &mut NameSupply,
) -> Result<Inference, SolveError> {
    let (constraint, a) = initial_constraint(delta, gamma, m, supply)?;
    let out = run(SolverState::initial(constraint.clone()), supply, config);
    let state = out.outcome?;
    let result_type = state.subst.image(&a);
    let residual: RestrictionContext = result_type
        .ftv_ordered()
        .into_iter()
        .filter_map(|v| state.theta_env.get(&v).map(|r| (v, r)))
        .collect();
    Ok(Inference {
        result_type,
        residual,
        constraint,
        trace: out.trace,
        partitions: out.partitions,
        stats: out.stats,
    })
}
