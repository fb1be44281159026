"""Exact linear rational arithmetic over variable instances.

Conjunctions of linear atoms are decided by equality substitution plus
Fourier-Motzkin elimination, entirely in exact `Fraction` arithmetic.
Disequalities are case-split at decision time and never stored post-split,
so atom sequences (and the annotation vectors that index into them) stay
stable.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from math import floor, gcd
from typing import Iterable, Iterator, Mapping, Optional, Sequence

VarId = int

_ZERO = Fraction(0)
_ONE = Fraction(1)


class Rel(Enum):
    EQ = "="
    LE = "<="
    LT = "<"
    NE = "!="


@dataclass(frozen=True)
class LinearTerm:
    """Sum of coefficient*variable plus a constant; zero coefficients are never stored."""

    coeffs: tuple[tuple[VarId, Fraction], ...]
    const: Fraction

    def __hash__(self) -> int:
        h = self.__dict__.get("_hash")
        if h is None:
            h = hash((self.coeffs, self.const))
            object.__setattr__(self, "_hash", h)
        return h

    @staticmethod
    def make(coeffs: Mapping[VarId, Fraction] | Iterable[tuple[VarId, Fraction]],
             const: Fraction | int = 0) -> LinearTerm:
        acc: dict[VarId, Fraction] = {}
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        for v, c in items:
            c = Fraction(c)
            if c:
                acc[v] = acc.get(v, _ZERO) + c
                if not acc[v]:
                    del acc[v]
        return LinearTerm(tuple(sorted(acc.items())), Fraction(const))

    @staticmethod
    def const_term(c: Fraction | int) -> LinearTerm:
        return LinearTerm((), Fraction(c))

    @staticmethod
    def var(v: VarId, coeff: Fraction | int = 1) -> LinearTerm:
        coeff = Fraction(coeff)
        if not coeff:
            return LinearTerm((), _ZERO)
        return LinearTerm(((v, coeff),), _ZERO)

    def coeff(self, v: VarId) -> Fraction:
        for w, c in self.coeffs:
            if w == v:
                return c
        return _ZERO

    def vars(self) -> frozenset[VarId]:
        return frozenset(v for v, _ in self.coeffs)

    def add(self, other: LinearTerm) -> LinearTerm:
        acc = dict(self.coeffs)
        for v, c in other.coeffs:
            acc[v] = acc.get(v, _ZERO) + c
            if not acc[v]:
                del acc[v]
        return LinearTerm(tuple(sorted(acc.items())), self.const + other.const)

    def scale(self, k: Fraction | int) -> LinearTerm:
        k = Fraction(k)
        if not k:
            return LinearTerm((), _ZERO)
        return LinearTerm(tuple((v, c * k) for v, c in self.coeffs), self.const * k)

    def sub(self, other: LinearTerm) -> LinearTerm:
        return self.add(other.scale(-1))

    def substitute(self, v: VarId, repl: LinearTerm) -> LinearTerm:
        c = self.coeff(v)
        if not c:
            return self
        rest = LinearTerm(tuple((w, k) for w, k in self.coeffs if w != v), self.const)
        return rest.add(repl.scale(c))

    def rename(self, mapping: Mapping[VarId, VarId]) -> LinearTerm:
        return LinearTerm.make([(mapping.get(v, v), c) for v, c in self.coeffs], self.const)

    def evaluate(self, model: Mapping[VarId, Fraction]) -> Fraction:
        total = self.const
        for v, c in self.coeffs:
            total += c * model[v]
        return total

    def is_const(self) -> bool:
        return not self.coeffs


@dataclass(frozen=True)
class Atom:
    """Canonical linear atom `lhs rel 0`.

    Construction normalizes to primitive integer coefficients; EQ/NE atoms
    additionally get a canonical sign so syntactic duplicates collapse.
    """

    lhs: LinearTerm
    rel: Rel

    def __hash__(self) -> int:
        h = self.__dict__.get("_hash")
        if h is None:
            h = hash((self.lhs, self.rel))
            object.__setattr__(self, "_hash", h)
        return h

    @staticmethod
    def make(lhs: LinearTerm, rel: Rel) -> Atom:
        return Atom(_normalize_term(lhs, rel), rel)

    @staticmethod
    def cmp(a: LinearTerm, rel: str, b: LinearTerm) -> Atom:
        """Build from a comparison `a rel b` with rel in ==,!=,<=,<,>=,>."""
        if rel == "==":
            return Atom.make(a.sub(b), Rel.EQ)
        if rel == "!=":
            return Atom.make(a.sub(b), Rel.NE)
        if rel == "<=":
            return Atom.make(a.sub(b), Rel.LE)
        if rel == "<":
            return Atom.make(a.sub(b), Rel.LT)
        if rel == ">=":
            return Atom.make(b.sub(a), Rel.LE)
        if rel == ">":
            return Atom.make(b.sub(a), Rel.LT)
        raise ValueError(f"unknown relation {rel!r}")

    def vars(self) -> frozenset[VarId]:
        return self.lhs.vars()

    def substitute(self, v: VarId, repl: LinearTerm) -> Atom:
        if not self.lhs.coeff(v):
            return self
        return Atom.make(self.lhs.substitute(v, repl), self.rel)

    def rename(self, mapping: Mapping[VarId, VarId]) -> Atom:
        return Atom.make(self.lhs.rename(mapping), self.rel)

    def evaluate(self, model: Mapping[VarId, Fraction]) -> bool:
        val = self.lhs.evaluate(model)
        if self.rel is Rel.EQ:
            return val == 0
        if self.rel is Rel.LE:
            return val <= 0
        if self.rel is Rel.LT:
            return val < 0
        return val != 0

    def negate(self) -> tuple[Atom, ...]:
        """Disjuncts of the negation (one or two atoms)."""
        return _negate_cached(self)

    def is_trivially_true(self) -> bool:
        if not self.lhs.is_const():
            return False
        c = self.lhs.const
        if self.rel is Rel.EQ:
            return c == 0
        if self.rel is Rel.LE:
            return c <= 0
        if self.rel is Rel.LT:
            return c < 0
        return c != 0

    def is_trivially_false(self) -> bool:
        return self.lhs.is_const() and not self.is_trivially_true()


def _normalize_term(t: LinearTerm, rel: Rel) -> LinearTerm:
    if not t.coeffs:
        return t
    denom = 1
    for _, c in t.coeffs:
        denom = denom * c.denominator // gcd(denom, c.denominator)
    denom = denom * t.const.denominator // gcd(denom, t.const.denominator)
    scaled = [c * denom for _, c in t.coeffs]
    nums = [abs(c.numerator) for c in scaled]
    if t.const:
        nums.append(abs((t.const * denom).numerator))
    g = 0
    for n in nums:
        g = gcd(g, n)
    factor = Fraction(denom, g if g else 1)
    if rel in (Rel.EQ, Rel.NE) and t.coeffs:
        # canonical sign: first coefficient positive
        if t.coeffs[0][1] < 0:
            factor = -factor
    return t.scale(factor)


@lru_cache(maxsize=1 << 16)
def _negate_cached(a: Atom) -> tuple[Atom, ...]:
    if a.rel is Rel.EQ:
        return (Atom.make(a.lhs, Rel.LT), Atom.make(a.lhs.scale(-1), Rel.LT))
    if a.rel is Rel.LE:
        return (Atom.make(a.lhs.scale(-1), Rel.LT),)
    if a.rel is Rel.LT:
        return (Atom.make(a.lhs.scale(-1), Rel.LE),)
    return (Atom.make(a.lhs, Rel.EQ),)


FALSE_ATOM = Atom.make(LinearTerm.const_term(1), Rel.LE)  # 1 <= 0


@dataclass(frozen=True)
class Conjunction:
    """Order-preserving sequence of atoms; annotation vectors index into it."""

    atoms: tuple[Atom, ...] = ()

    @staticmethod
    def of(atoms: Iterable[Atom]) -> Conjunction:
        return Conjunction(tuple(atoms))

    def __len__(self) -> int:
        return len(self.atoms)

    def __iter__(self) -> Iterator[Atom]:
        return iter(self.atoms)

    def __getitem__(self, i: int) -> Atom:
        return self.atoms[i]

    def extend(self, more: Iterable[Atom]) -> Conjunction:
        return Conjunction(self.atoms + tuple(more))

    def vars(self) -> frozenset[VarId]:
        out: frozenset[VarId] = frozenset()
        for a in self.atoms:
            out |= a.vars()
        return out


TRUE = Conjunction()


@dataclass(frozen=True)
class RationalModel:
    assignment: Mapping[VarId, Fraction]

    def value(self, v: VarId) -> Fraction:
        return self.assignment.get(v, _ZERO)

    def satisfies(self, c: Conjunction) -> bool:
        full = {v: self.value(v) for v in c.vars()}
        return all(a.evaluate(full) for a in c.atoms)


@dataclass(frozen=True)
class Sat:
    model: RationalModel


class Unsat:
    __slots__ = ()

    def __repr__(self) -> str:  # pragma: no cover
        return "UNSAT"


UNSAT = Unsat()


def is_sat(c: Conjunction) -> Sat | Unsat:
    """Decide satisfiability over the rationals; Sat carries a witness.

    NE atoms are case-split into (lhs < 0) | (lhs > 0); the split is
    exhaustive, so Unsat is definitive.
    """
    base: list[Atom] = []
    nes: list[Atom] = []
    for a in c.atoms:
        if a.rel is Rel.NE:
            nes.append(a)
        else:
            base.append(a)
    if not nes:
        model = _sat_core(base)
        return Sat(model) if model is not None else UNSAT
    # quick reject before branching on disequalities
    if _sat_core(base) is None:
        return UNSAT
    return _sat_split(base, nes, 0)


def _sat_split(base: list[Atom], nes: list[Atom], i: int) -> Sat | Unsat:
    if i == len(nes):
        model = _sat_core(base)
        return Sat(model) if model is not None else UNSAT
    for branch in _ne_branches(nes[i]):
        base.append(branch)
        res = _sat_split(base, nes, i + 1)
        base.pop()
        if isinstance(res, Sat):
            return res
    return UNSAT


@lru_cache(maxsize=1 << 16)
def _ne_branches(a: Atom) -> tuple[Atom, Atom]:
    return (Atom.make(a.lhs, Rel.LT), Atom.make(a.lhs.scale(-1), Rel.LT))


_IntRow = tuple[dict[VarId, int], int]  # integer coeffs, integer const


@lru_cache(maxsize=1 << 16)
def _atom_int_row(a: Atom) -> _IntRow:
    """Integer row for a canonical atom (clears stray denominators)."""
    denom = a.lhs.const.denominator
    for _, c in a.lhs.coeffs:
        d = c.denominator
        denom = denom * d // gcd(denom, d)
    return ({v: int(c * denom) for v, c in a.lhs.coeffs},
            int(a.lhs.const * denom))


def _reduce_row(cs: dict[VarId, int], ct: int) -> tuple[dict[VarId, int], int]:
    g = 0
    for c in cs.values():
        g = gcd(g, c)
    g = gcd(g, ct)
    if g > 1:
        return ({v: c // g for v, c in cs.items()}, ct // g)
    return (cs, ct)


def _row_eval(cs: dict[VarId, int], ct: int,
              assignment: dict[VarId, Fraction]) -> Fraction:
    total = Fraction(ct)
    for v, c in cs.items():
        total += c * assignment.setdefault(v, _ZERO)
    return total


def _sat_core(atoms: Sequence[Atom]) -> Optional[RationalModel]:
    """Satisfiability of EQ/LE/LT atoms with witness.

    Fraction-free: equality substitution and Fourier-Motzkin combinations
    use positive integer multipliers with gcd reduction; rationals appear
    only during witness extraction.
    """
    eqs: list[_IntRow] = []
    work: list[tuple[dict[VarId, int], int, bool]] = []  # strict flag
    for a in atoms:
        cs, ct = _atom_int_row(a)
        if a.rel is Rel.EQ:
            eqs.append((dict(cs), ct))
        elif not cs:
            if ct > 0 or (a.rel is Rel.LT and ct == 0):
                return None
        else:
            work.append((dict(cs), ct, a.rel is Rel.LT))

    def eliminate(cs: dict[VarId, int], ct: int, v: VarId,
                  pcs: dict[VarId, int], pct: int, pv: int
                  ) -> tuple[dict[VarId, int], int]:
        """Row * |pv| - pivot * (rv * sign(pv)); positive row multiplier."""
        rv = cs.pop(v)
        mult = abs(pv)
        pmult = rv if pv > 0 else -rv
        out = {w: c * mult for w, c in cs.items()}
        for w, c in pcs.items():
            if w == v:
                continue
            nv = out.get(w, 0) - c * pmult
            if nv:
                out[w] = nv
            elif w in out:
                del out[w]
        return _reduce_row(out, ct * mult - pct * pmult)

    # equality substitution phase
    substs: list[tuple[VarId, int, dict[VarId, int], int]] = []
    while eqs:
        pcs, pct = eqs.pop(0)
        if not pcs:
            if pct:
                return None
            continue
        v = min(pcs)
        pv = pcs[v]
        substs.append((v, pv, pcs, pct))
        eqs = [eliminate(dict(cs), ct, v, pcs, pct, pv) if v in cs else (cs, ct)
               for cs, ct in eqs]
        new_work = []
        for cs, ct, strict in work:
            if v in cs:
                cs, ct = eliminate(dict(cs), ct, v, pcs, pct, pv)
                if not cs:
                    if ct > 0 or (strict and ct == 0):
                        return None
                    continue
            new_work.append((cs, ct, strict))
        work = new_work

    # Fourier-Motzkin phase; keep (row, coeff) bounds for back-substitution
    Bound = tuple[dict[VarId, int], int, int, bool]  # rest-coeffs, const, cv, strict
    elim_order: list[tuple[VarId, list[Bound], list[Bound]]] = []
    while work:
        v = max(v for cs, _, _ in work for v in cs)
        lowers: list[Bound] = []
        uppers: list[Bound] = []
        rest = []
        for cs, ct, strict in work:
            cv = cs.get(v)
            if cv is None:
                rest.append((cs, ct, strict))
                continue
            rcs = {w: c for w, c in cs.items() if w != v}
            (uppers if cv > 0 else lowers).append((rcs, ct, cv, strict))
        new_rows = []
        for lcs, lct, lcv, lo_s in lowers:  # lcv < 0
            for ucs, uct, ucv, hi_s in uppers:  # ucv > 0
                cs = {w: c * ucv for w, c in lcs.items()}
                for w, c in ucs.items():
                    nv = cs.get(w, 0) - c * lcv
                    if nv:
                        cs[w] = nv
                    elif w in cs:
                        del cs[w]
                ct = lct * ucv - uct * lcv
                strict = lo_s or hi_s
                if not cs:
                    if ct > 0 or (strict and ct == 0):
                        return None
                    continue
                new_rows.append((*_reduce_row(cs, ct), strict))
        elim_order.append((v, lowers, uppers))
        work = rest + new_rows

    # back-substitution: FM vars in reverse elimination order, then equalities
    assignment: dict[VarId, Fraction] = {}
    for v, lowers, uppers in reversed(elim_order):
        lo_vals = [(_row_eval(cs, ct, assignment) / -cv, s)
                   for cs, ct, cv, s in lowers]
        hi_vals = [(_row_eval(cs, ct, assignment) / -cv, s)
                   for cs, ct, cv, s in uppers]
        val = _pick_between(lo_vals, hi_vals)
        if val is None:
            return None
        assignment[v] = val
    for v, pv, pcs, pct in reversed(substs):
        rest = Fraction(pct)
        for w, c in pcs.items():
            if w != v:
                rest += c * assignment.setdefault(w, _ZERO)
        assignment[v] = rest / -pv
    return RationalModel(assignment)


def _pick_between(lo_vals: list[tuple[Fraction, bool]],
                  hi_vals: list[tuple[Fraction, bool]]) -> Optional[Fraction]:
    lo: Optional[tuple[Fraction, bool]] = None
    for val, s in lo_vals:
        if lo is None or val > lo[0] or (val == lo[0] and s):
            lo = (val, s)
    hi: Optional[tuple[Fraction, bool]] = None
    for val, s in hi_vals:
        if hi is None or val < hi[0] or (val == hi[0] and s):
            hi = (val, s)
    if lo is None and hi is None:
        return _ZERO
    if lo is None:
        assert hi is not None
        return hi[0] - 1
    if hi is None:
        return lo[0] + 1
    if lo[0] > hi[0]:
        return None
    if lo[0] == hi[0]:
        if lo[1] or hi[1]:
            return None
        return lo[0]
    # prefer an integer point when one fits
    low, high = lo[0], hi[0]
    c = Fraction(floor(low) + 1)
    if (c > low or (c == low and not lo[1])) and (c < high or (c == high and not hi[1])):
        return c
    return (low + high) / 2


def entails_atom(c: Conjunction, a: Atom) -> bool:
    """True iff c && !a is unsatisfiable for every disjunct of !a."""
    for d in a.negate():
        if isinstance(is_sat(c.extend([d])), Sat):
            return False
    return True


def entails(c1: Conjunction, c2: Conjunction) -> bool:
    return all(entails_atom(c1, a) for a in c2.atoms)


def rename(c: Conjunction, mapping: Mapping[VarId, VarId]) -> Conjunction:
    """Apply an injective variable-to-variable substitution."""
    relevant = {v: mapping[v] for v in c.vars() if v in mapping}
    targets = list(relevant.values())
    if len(set(targets)) != len(targets):
        raise ValueError("renaming is not injective on the conjunction's variables")
    return Conjunction.of(a.rename(relevant) for a in c.atoms)


@dataclass
class Projection:
    """Result of variable elimination; `exact` is False when a disequality
    over an FM-eliminated variable had to be dropped (over-approximation)."""

    conjunction: Conjunction
    exact: bool


def project(c: Conjunction, keep: frozenset[VarId] | set[VarId]) -> Conjunction:
    return project_with_exactness(c, keep).conjunction


def project_with_exactness(c: Conjunction, keep: frozenset[VarId] | set[VarId]) -> Projection:
    """Eliminate all variables outside `keep` (exists-projection over rationals).

    Equalities are used as substitutions first; remaining variables go through
    Fourier-Motzkin. NE atoms over an FM-eliminated variable are dropped.
    """
    keep = frozenset(keep)
    work: list[Atom] = list(c.atoms)
    exact = True

    while True:
        # substitute away any equality that mentions an eliminable variable
        pivot: Optional[tuple[int, VarId]] = None
        for idx, a in enumerate(work):
            if a.rel is not Rel.EQ:
                continue
            ev = sorted(v for v in a.vars() if v not in keep)
            if ev:
                pivot = (idx, ev[0])
                break
        if pivot is not None:
            idx, v = pivot
            a = work.pop(idx)
            cv = a.lhs.coeff(v)
            repl = LinearTerm(tuple((w, k) for w, k in a.lhs.coeffs if w != v),
                              a.lhs.const).scale(Fraction(-1) / cv)
            work = [x.substitute(v, repl) for x in work]
            continue

        remaining = sorted({v for a in work for v in a.vars() if v not in keep},
                           reverse=True)
        if not remaining:
            break
        v = remaining[0]
        lowers: list[tuple[LinearTerm, bool]] = []
        uppers: list[tuple[LinearTerm, bool]] = []
        rest: list[Atom] = []
        for a in work:
            cv = a.lhs.coeff(v)
            if not cv:
                rest.append(a)
                continue
            if a.rel is Rel.NE:
                exact = False
                continue
            bound = LinearTerm(tuple((w, k) for w, k in a.lhs.coeffs if w != v),
                               a.lhs.const).scale(Fraction(-1) / cv)
            strict = a.rel is Rel.LT
            (uppers if cv > 0 else lowers).append((bound, strict))
        new_atoms: list[Atom] = []
        for lo, lo_s in lowers:
            for hi, hi_s in uppers:
                rel = Rel.LT if (lo_s or hi_s) else Rel.LE
                new_atoms.append(Atom.make(lo.sub(hi), rel))
        work = rest + new_atoms

    out: list[Atom] = []
    seen: set[Atom] = set()
    for a in work:
        if a.is_trivially_true():
            continue
        if a.is_trivially_false():
            return Projection(Conjunction.of([FALSE_ATOM]), exact)
        if a in seen:
            continue
        seen.add(a)
        out.append(a)
    return Projection(Conjunction.of(out), exact)


def format_term(t: LinearTerm, names: Mapping[VarId, str] | None = None) -> str:
    def vname(v: VarId) -> str:
        return names[v] if names and v in names else f"v{v}"

    parts: list[str] = []
    for v, cf in t.coeffs:
        if cf == 1:
            s = vname(v)
        elif cf == -1:
            s = f"-{vname(v)}"
        else:
            s = f"{cf}*{vname(v)}"
        if parts and not s.startswith("-"):
            parts.append(f"+{s}")
        else:
            parts.append(s)
    if t.const or not parts:
        s = str(t.const)
        if parts and not s.startswith("-"):
            parts.append(f"+{s}")
        else:
            parts.append(s)
    return "".join(parts)


def format_atom(a: Atom, names: Mapping[VarId, str] | None = None) -> str:
    """Render `lhs rel 0` back as a readable comparison.

    Negative-coefficient terms move to the right-hand side.
    """
    left: list[tuple[VarId, Fraction]] = []
    right: list[tuple[VarId, Fraction]] = []
    for v, cf in a.lhs.coeffs:
        (left if cf > 0 else right).append((v, cf if cf > 0 else -cf))
    # constant goes to whichever side keeps it non-negative
    lc = a.lhs.const if a.lhs.const > 0 else _ZERO
    rc = -a.lhs.const if a.lhs.const < 0 else _ZERO
    lt = LinearTerm(tuple(left), lc)
    rt = LinearTerm(tuple(right), rc)
    op = {Rel.EQ: "=", Rel.LE: "<=", Rel.LT: "<", Rel.NE: "!="}[a.rel]
    return f"{format_term(lt, names)}{op}{format_term(rt, names)}"


def format_conjunction(c: Conjunction, names: Mapping[VarId, str] | None = None) -> str:
    if not c.atoms:
        return "true"
    return " && ".join(format_atom(a, names) for a in c.atoms)
