"""Programs as constrained transition systems, and symbolic reduction.

A rule relates a source point to a target point through a template
conjunction over formal slots: slot i stands for the i-th program variable
in the source state, slot n+i for the same variable in the target state.
Reduction instantiates a rule against a goal's current variable instances,
allocating fresh instances for the target state and appending the
instantiated atoms to the goal's store (order preserved).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence

from .constraints import Atom, Conjunction, LinearTerm, VarId


@dataclass(frozen=True)
class ProgramPoint:
    """A numbered location, or the distinguished error location."""

    tag: Optional[int]  # None encodes the error location

    @property
    def is_error(self) -> bool:
        return self.tag is None

    def __str__(self) -> str:
        return "error" if self.tag is None else str(self.tag)


ERROR = ProgramPoint(None)


def pt(n: int) -> ProgramPoint:
    return ProgramPoint(n)


@dataclass(frozen=True)
class Rule:
    """One transition: `from_pt` to `to_pt` under a slot-template conjunction.

    With n program variables, slots 0..n-1 are the source-state variables and
    slots n..2n-1 the target-state (primed) variables.
    """

    from_pt: ProgramPoint
    to_pt: ProgramPoint
    template: Conjunction
    index: int = 0  # position in the system's rule sequence; stable identity


@dataclass(frozen=True)
class TransitionSystem:
    vars: tuple[str, ...]
    rules: tuple[Rule, ...]
    initial: ProgramPoint

    def rules_from(self, p: ProgramPoint) -> tuple[Rule, ...]:
        return tuple(r for r in self.rules if r.from_pt == p)

    def points(self) -> list[ProgramPoint]:
        seen: dict[ProgramPoint, None] = {self.initial: None}
        for r in self.rules:
            seen.setdefault(r.from_pt, None)
            seen.setdefault(r.to_pt, None)
        return list(seen)


class VarAllocator:
    """Monotone allocator of variable instances; ids are never reused."""

    def __init__(self) -> None:
        self._next: VarId = 0
        self._names: dict[VarId, str] = {}
        self._gen: dict[str, int] = {}

    def fresh(self, base: str) -> VarId:
        v = self._next
        self._next += 1
        g = self._gen.get(base, 0)
        self._gen[base] = g + 1
        self._names[v] = f"{base}{g}"
        return v

    def fresh_tuple(self, bases: Sequence[str]) -> tuple[VarId, ...]:
        return tuple(self.fresh(b) for b in bases)

    @property
    def names(self) -> Mapping[VarId, str]:
        return self._names

    def name(self, v: VarId) -> str:
        return self._names.get(v, f"v{v}")


@dataclass(frozen=True)
class Goal:
    """Program point, current variable instances, accumulated constraints.

    A reduct's store extends its parent's store, so atom indices are stable
    along a derivation (annotation vectors rely on this prefix property).
    """

    point: ProgramPoint
    primaries: tuple[VarId, ...]
    store: Conjunction


def instantiate(template: Conjunction, source: Sequence[VarId],
                target: Sequence[VarId]) -> Conjunction:
    """Map template slots to concrete instances: slot i -> source[i], slot n+i -> target[i]."""
    n = len(source)
    mapping = {i: source[i] for i in range(n)}
    mapping.update({n + i: target[i] for i in range(n)})
    return Conjunction.of(a.rename(mapping) for a in template.atoms)


def reduct(g: Goal, r: Rule, alloc: VarAllocator, names: Sequence[str]) -> Goal:
    """Strongest-postcondition step: fresh target instances, appended atoms."""
    if g.point != r.from_pt:
        raise ValueError(f"rule from {r.from_pt} does not apply at {g.point}")
    fresh = alloc.fresh_tuple(names)
    appended = instantiate(r.template, g.primaries, fresh)
    return Goal(r.to_pt, fresh, g.store.extend(appended.atoms))


# ---------------------------------------------------------------------------
# mini-language AST and lowering


@dataclass(frozen=True)
class Expr:
    """Linear expression over program variable names."""

    coeffs: tuple[tuple[str, Fraction], ...]
    const: Fraction

    @staticmethod
    def make(coeffs: Mapping[str, Fraction | int], const: Fraction | int = 0) -> Expr:
        acc = {n: Fraction(c) for n, c in coeffs.items() if Fraction(c)}
        return Expr(tuple(sorted(acc.items())), Fraction(const))

    def names(self) -> frozenset[str]:
        return frozenset(n for n, _ in self.coeffs)


@dataclass(frozen=True)
class Cond:
    """Conjunction of comparisons `lhs op rhs` with op in ==,!=,<=,<,>=,>."""

    comparisons: tuple[tuple[Expr, str, Expr], ...]

    def names(self) -> frozenset[str]:
        out: frozenset[str] = frozenset()
        for a, _, b in self.comparisons:
            out |= a.names() | b.names()
        return out


@dataclass(frozen=True)
class Stmt:
    label: Optional[int]


@dataclass(frozen=True)
class Assign(Stmt):
    name: str
    expr: Expr


@dataclass(frozen=True)
class If(Stmt):
    cond: Optional[Cond]  # None = nondeterministic branch
    then: tuple[Stmt, ...]
    orelse: tuple[Stmt, ...]


@dataclass(frozen=True)
class While(Stmt):
    cond: Cond
    body: tuple[Stmt, ...]


@dataclass(frozen=True)
class Assume(Stmt):
    cond: Cond


@dataclass(frozen=True)
class ErrorStmt(Stmt):
    pass


@dataclass(frozen=True)
class Program:
    decls: tuple[str, ...]
    body: tuple[Stmt, ...]
    exit_label: Optional[int] = None

    def statement_count(self) -> int:
        def count(stmts: Iterable[Stmt]) -> int:
            total = 0
            for s in stmts:
                total += 1
                if isinstance(s, If):
                    total += count(s.then) + count(s.orelse)
                elif isinstance(s, While):
                    total += count(s.body)
            return total

        return count(self.body)

    def variables(self) -> tuple[str, ...]:
        seen: dict[str, None] = {n: None for n in self.decls}

        def walk_expr(e: Expr) -> None:
            for n in e.names():
                seen.setdefault(n, None)

        def walk_cond(c: Optional[Cond]) -> None:
            if c is None:
                return
            for a, _, b in c.comparisons:
                walk_expr(a)
                walk_expr(b)

        def walk(stmts: Iterable[Stmt]) -> None:
            for s in stmts:
                if isinstance(s, Assign):
                    seen.setdefault(s.name, None)
                    walk_expr(s.expr)
                elif isinstance(s, If):
                    walk_cond(s.cond)
                    walk(s.then)
                    walk(s.orelse)
                elif isinstance(s, While):
                    walk_cond(s.cond)
                    walk(s.body)
                elif isinstance(s, Assume):
                    walk_cond(s.cond)

        walk(self.body)
        return tuple(seen)


def _expr_to_term(e: Expr, slot_of: Mapping[str, int]) -> LinearTerm:
    return LinearTerm.make({slot_of[n]: c for n, c in e.coeffs}, e.const)


def _tighten(a: Expr, op: str, b: Expr, slot_of: Mapping[str, int]) -> Atom:
    """Lower one comparison; strict integer comparisons are pre-tightened
    (a < b becomes a <= b-1) so the rational relaxation loses nothing here."""
    ta = _expr_to_term(a, slot_of)
    tb = _expr_to_term(b, slot_of)
    if op == "<":
        return Atom.cmp(ta, "<=", tb.add(LinearTerm.const_term(-1)))
    if op == ">":
        return Atom.cmp(ta, ">=", tb.add(LinearTerm.const_term(1)))
    return Atom.cmp(ta, op, tb)


def _negate_comparison(a: Expr, op: str, b: Expr, slot_of: Mapping[str, int]) -> Atom:
    neg = {"==": "!=", "!=": "==", "<=": ">", "<": ">=", ">=": "<", ">": "<="}[op]
    return _tighten(a, neg, b, slot_of)


class _Lowerer:
    def __init__(self, program: Program) -> None:
        self.vars = program.variables()
        self.n = len(self.vars)
        self.slot_of = {n: i for i, n in enumerate(self.vars)}
        self.rules: list[tuple[ProgramPoint, ProgramPoint, list[Atom]]] = []
        used = [s.label for s in _all_statements(program.body) if s.label is not None]
        if program.exit_label is not None:
            used.append(program.exit_label)
        self._next_synth = (max(used) + 1) if used else 0
        self.program = program

    def synth(self) -> int:
        p = self._next_synth
        self._next_synth += 1
        return p

    def frames(self, except_name: Optional[str] = None) -> list[Atom]:
        out = []
        for name in self.vars:
            if name == except_name:
                continue
            i = self.slot_of[name]
            out.append(Atom.cmp(LinearTerm.var(self.n + i), "==", LinearTerm.var(i)))
        return out

    def cond_atoms(self, cond: Cond) -> list[Atom]:
        return [_tighten(a, op, b, self.slot_of) for a, op, b in cond.comparisons]

    def emit(self, src: ProgramPoint, dst: ProgramPoint, atoms: list[Atom]) -> None:
        self.rules.append((src, dst, atoms))

    def entry_point(self, stmts: Sequence[Stmt], fallback: Optional[int] = None) -> int:
        if stmts and stmts[0].label is not None:
            return stmts[0].label
        if fallback is not None:
            return fallback
        return self.synth()

    def lower_block(self, stmts: Sequence[Stmt], entry: int, exit_pt: int) -> None:
        """Chain statements from `entry` to `exit_pt`."""
        points: list[int] = []
        for i, s in enumerate(stmts):
            if i == 0:
                points.append(entry)
            elif s.label is not None:
                points.append(s.label)
            else:
                points.append(self.synth())
        for i, s in enumerate(stmts):
            here = points[i]
            after = points[i + 1] if i + 1 < len(stmts) else exit_pt
            self.lower_stmt(s, here, after)

    def lower_stmt(self, s: Stmt, here: int, after: int) -> None:
        src = pt(here)
        if isinstance(s, Assign):
            i = self.slot_of[s.name]
            atoms = self.frames(except_name=s.name)
            atoms.append(Atom.cmp(LinearTerm.var(self.n + i), "==",
                                  _expr_to_term(s.expr, self.slot_of)))
            self.emit(src, pt(after), atoms)
        elif isinstance(s, Assume):
            self.emit(src, pt(after), self.frames() + self.cond_atoms(s.cond))
        elif isinstance(s, ErrorStmt):
            self.emit(src, ERROR, self.frames())
        elif isinstance(s, If):
            then_entry = self.entry_point(s.then)
            else_entry = self.entry_point(s.orelse) if s.orelse else after
            if s.cond is None:
                self.emit(src, pt(then_entry), self.frames())
                self.emit(src, pt(else_entry), self.frames())
            else:
                self.emit(src, pt(then_entry), self.frames() + self.cond_atoms(s.cond))
                for a, op, b in s.cond.comparisons:
                    self.emit(src, pt(else_entry),
                              self.frames() + [_negate_comparison(a, op, b, self.slot_of)])
            if s.then:
                self.lower_block(s.then, then_entry, after)
            else:
                self.emit(pt(then_entry), pt(after), self.frames())
            if s.orelse:
                self.lower_block(s.orelse, else_entry, after)
        elif isinstance(s, While):
            body_entry = self.entry_point(s.body)
            self.emit(src, pt(body_entry), self.frames() + self.cond_atoms(s.cond))
            for a, op, b in s.cond.comparisons:
                self.emit(src, pt(after),
                          self.frames() + [_negate_comparison(a, op, b, self.slot_of)])
            if s.body:
                self.lower_block(s.body, body_entry, here)
            else:
                self.emit(pt(body_entry), src, self.frames())
        else:  # pragma: no cover
            raise TypeError(f"unknown statement {s!r}")


def _all_statements(stmts: Iterable[Stmt]) -> list[Stmt]:
    out: list[Stmt] = []
    for s in stmts:
        out.append(s)
        if isinstance(s, If):
            out.extend(_all_statements(s.then))
            out.extend(_all_statements(s.orelse))
        elif isinstance(s, While):
            out.extend(_all_statements(s.body))
    return out


def lower(program: Program) -> TransitionSystem:
    """Lower an AST to rules: frame equalities first (declaration order),
    then the assignment or guard atoms. Nondeterministic branches emit the
    then-rule first; guarded branches emit one negated-atom rule per guard
    conjunct for the else edge."""
    lw = _Lowerer(program)
    if not program.body:
        initial = program.exit_label if program.exit_label is not None else 0
        return TransitionSystem(lw.vars, (), pt(initial))
    entry = lw.entry_point(program.body)
    exit_pt = program.exit_label if program.exit_label is not None else lw.synth()
    lw.lower_block(program.body, entry, exit_pt)
    rules = tuple(Rule(src, dst, Conjunction.of(atoms), index=i)
                  for i, (src, dst, atoms) in enumerate(lw.rules))
    return TransitionSystem(lw.vars, rules, pt(entry))
