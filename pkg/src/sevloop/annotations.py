"""Min/max/neutral annotation vectors over constraint stores.

A MAX mark pins an atom that must be kept for an infeasibility or
subsumption to survive; a MIN mark deletes an atom so a state generalizes;
NEUTRAL is undecided. Interpolation promotes the fewest NEUTRAL marks to
MAX (set-inclusion minimal) so that the kept atoms stay inconsistent with
a given context.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Callable

from .constraints import Conjunction, Sat, is_sat


class Annotation(Enum):
    MIN = "-"
    MAX = "+"
    NEUTRAL = "."


MIN = Annotation.MIN
MAX = Annotation.MAX
NEUTRAL = Annotation.NEUTRAL

AnnotationVector = tuple[Annotation, ...]


def neut(n: int) -> AnnotationVector:
    return (NEUTRAL,) * n


class Bottom:
    __slots__ = ()

    def __repr__(self) -> str:  # pragma: no cover
        return "BOTTOM"


BOTTOM = Bottom()


@dataclass(frozen=True)
class AnnotatedState:
    """A goal paired with one annotation per store atom."""

    goal: "Goal"  # noqa: F821  (program.Goal; kept untyped to avoid a cycle)
    vec: AnnotationVector

    def __post_init__(self) -> None:
        if len(self.vec) != len(self.goal.store):
            raise ValueError("annotation vector length must match store length")


def interp_max(s: AnnotatedState) -> Conjunction:
    """Sub-conjunction of MAX-marked atoms, order preserved."""
    return Conjunction.of(a for a, m in zip(s.goal.store, s.vec) if m is MAX)


def interp_min(s: AnnotatedState) -> Conjunction:
    """Sub-conjunction of everything except MIN-marked atoms."""
    return Conjunction.of(a for a, m in zip(s.goal.store, s.vec) if m is not MIN)


def conflict(v1: AnnotationVector, v2: AnnotationVector) -> bool:
    """Some common index is MIN in v1 and MAX in v2 (direction matters)."""
    return any(a is MIN and b is MAX for a, b in zip(v1, v2))


def mergemin(v1: AnnotationVector, v2: AnnotationVector) -> AnnotationVector | Bottom:
    n = min(len(v1), len(v2))
    for i in range(n):
        if v1[i] is MIN and v2[i] is MAX:
            return BOTTOM
    out = list(v2[: len(v1)]) + [NEUTRAL] * max(0, len(v1) - len(v2))
    for i, m in enumerate(v1):
        if m is MIN:
            out[i] = MIN
    return tuple(out)


def mergemax(v1: AnnotationVector, v2: AnnotationVector) -> AnnotationVector:
    n = max(len(v1), len(v2))
    out: list[Annotation] = []
    for i in range(n):
        if i >= len(v2):
            out.append(v1[i])
        elif i >= len(v1):
            out.append(v2[i])
        elif v1[i] is MAX:
            out.append(v1[i])
        else:
            out.append(v2[i])
    return tuple(out)


def wp_bar(child_vec: AnnotationVector, appended_len: int) -> AnnotationVector:
    """Drop the marks of the atoms the last reduction appended (no solver calls)."""
    if appended_len < 0 or appended_len > len(child_vec):
        raise ValueError("appended length exceeds vector length")
    if appended_len == 0:
        return child_vec
    return child_vec[:-appended_len]


def interpolate(s: AnnotatedState, phi: Conjunction,
                sat: Callable[[Conjunction], object] | None = None) -> AnnotationVector:
    """Promote the fewest NEUTRAL marks to MAX so kept atoms plus phi stay unsat.

    Precondition: interp_min(s) && phi is unsatisfiable. Existing MIN/MAX
    marks are never changed. The demotion scan walks from the most recently
    added atom backwards, keeping an atom only if dropping it restores
    satisfiability; the result is set-inclusion minimal for that order.
    """
    sat_fn = sat or is_sat
    store = s.goal.store.atoms
    marks = list(s.vec)

    kept = [m is not MIN for m in marks]  # start from the min-interpretation

    def current() -> Conjunction:
        return Conjunction.of(a for a, k in zip(store, kept) if k).extend(phi.atoms)

    if isinstance(sat_fn(current()), Sat):
        raise ValueError("interpolate precondition violated: min-interpretation "
                         "is consistent with phi")

    for i in range(len(store) - 1, -1, -1):
        if marks[i] is not NEUTRAL or not kept[i]:
            continue
        kept[i] = False
        if isinstance(sat_fn(current()), Sat):
            kept[i] = True  # needed for unsatisfiability
        # else: stays dropped

    out = list(marks)
    for i, m in enumerate(marks):
        if m is NEUTRAL and kept[i]:
            out[i] = MAX
    return tuple(out)


def check_interpolation_minimal(s: AnnotatedState, phi: Conjunction,
                                result: AnnotationVector) -> bool:
    """Debug check: result is unsat with phi and inclusion-minimal."""
    store = s.goal.store.atoms
    max_atoms = [a for a, m in zip(store, result) if m is MAX]
    if isinstance(is_sat(Conjunction.of(max_atoms).extend(phi.atoms)), Sat):
        return False
    promoted = [i for i, (old, new) in enumerate(zip(s.vec, result))
                if old is NEUTRAL and new is MAX]
    for i in promoted:
        reduced = [a for j, (a, m) in enumerate(zip(store, result))
                   if m is MAX and j != i]
        if not isinstance(is_sat(Conjunction.of(reduced).extend(phi.atoms)), Sat):
            return False
    return True
