use std::collections::BTreeSet;

use crate::syntax::{RestrictionContext, TyVar};
use crate::unify::Subst;

use super::frame::{atv, Frame};

/// Splits `xi` into variables nothing below depends on (`kept_out`) and those
/// occurring in the range of `subst` restricted to `ftv(Θ) − xi` (`lowered`).
/// Both results keep the order of `xi`.
pub fn partition(xi: &[TyVar], subst: &Subst, theta_env: &RestrictionContext) -> (Vec<TyVar>, Vec<TyVar>) {
    let below: BTreeSet<TyVar> = theta_env
        .keys()
        .filter(|a| !xi.contains(a))
        .flat_map(|a| subst.image(a).ftv())
        .collect();
    xi.iter().cloned().partition(|a| !below.contains(a))
}

/// `rank(b, θ, F)`: the smallest 1-based position `i` in `atv(F)` with
/// `b ∈ ftv(θ(a_i))`. Rigid variables map to themselves.
pub fn rank(b: &TyVar, subst: &Subst, bound: &[TyVar]) -> Option<usize> {
    bound.iter().position(|a| subst.image(a).occurs_free(b)).map(|i| i + 1)
}

/// The rank-based partition for a stack split as `lower ++ upper`, where `xi`
/// are the flexible variables bound by `upper`.
pub fn rank_partition(
    xi: &[TyVar],
    subst: &Subst,
    stack_lower: &[Frame],
    stack_upper: &[Frame],
) -> (Vec<TyVar>, Vec<TyVar>) {
    let mut bound = atv(stack_lower);
    let index = bound.len();
    bound.extend(atv(stack_upper));
    xi.iter().cloned().partition(|a| match rank(a, subst, &bound) {
        None => true,
        Some(r) => index < r,
    })
}
