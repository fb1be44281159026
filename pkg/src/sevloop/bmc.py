"""Bounded model checking by exhaustive path enumeration.

No abstraction and no subsumption: every derivation sequence up to the
bound is enumerated, pruning only stores that are unsatisfiable. Used as a
ground-truth oracle on small systems and exposed as a CLI subcommand.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .constraints import Conjunction, RationalModel, Sat, is_sat
from .engine import BudgetExceeded
from .program import Goal, Rule, TransitionSystem, VarAllocator


@dataclass(frozen=True)
class BmcVerdict:
    kind: str  # "SAFE_UP_TO" | "CEX"
    bound: int
    nodes: int
    trace: tuple[Rule, ...] = ()
    witness: Optional[RationalModel] = None


def bmc(ts: TransitionSystem, bound: int, max_nodes: int = 2_000_000) -> BmcVerdict:
    """Enumerate all derivations of length <= bound in rule order; return the
    first feasible error trace, else SAFE_UP_TO(bound). Node count includes
    every goal whose store was checked, feasible or not."""
    if bound < 0:
        raise ValueError("bound must be >= 0")
    alloc = VarAllocator()
    from .program import reduct

    count = 0

    def dfs(g: Goal, depth: int, path: tuple[Rule, ...]
            ) -> Optional[tuple[tuple[Rule, ...], RationalModel]]:
        nonlocal count
        count += 1
        if count > max_nodes:
            raise BudgetExceeded("bmc node budget exceeded")
        res = is_sat(g.store)
        if not isinstance(res, Sat):
            return None
        if g.point.is_error:
            return (path, res.model)
        if depth == bound:
            return None
        for r in ts.rules_from(g.point):
            hit = dfs(reduct(g, r, alloc, ts.vars), depth + 1, path + (r,))
            if hit is not None:
                return hit
        return None

    init = Goal(ts.initial, alloc.fresh_tuple(ts.vars), Conjunction())
    hit = dfs(init, 0, ())
    if hit is None:
        return BmcVerdict("SAFE_UP_TO", bound, count)
    return BmcVerdict("CEX", bound, count, trace=hit[0], witness=hit[1])
