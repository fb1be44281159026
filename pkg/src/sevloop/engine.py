"""Depth-first annotated symbolic execution with conflict-driven unrolling.

Each node's case ladder, in order: infeasible state (interpolate a kept
core), error location (real counterexample or spurious conflict), terminal,
memo-table subsumption, speculative loop closure against a same-point
ancestor, and finally one symbolic step per applicable rule. Conflicts lock
deleted constraints back to MAX, clear the subtree's memo entries, and
restart the owning node; that is the progress mechanism.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from math import floor
from typing import Callable, Optional

from . import constraints as C
from .annotations import (MAX, MIN, NEUTRAL, AnnotatedState, Annotation,
                          AnnotationVector, BOTTOM, Bottom, conflict,
                          check_interpolation_minimal, interp_max, interp_min,
                          interpolate, mergemax, mergemin, neut, wp_bar)
from .constraints import (Atom, Conjunction, RationalModel, Sat, VarId,
                          entails, entails_atom, is_sat, project_with_exactness,
                          rename)
from .program import (ERROR, Goal, ProgramPoint, Rule, TransitionSystem,
                      VarAllocator, reduct)


class Status(Enum):
    OK = "ok"
    CONFLICT = "conflict"


@dataclass
class EngineConfig:
    max_nodes: int = 1_000_000
    max_depth: int = 10_000
    timeout_s: Optional[float] = None
    record_tree: bool = False
    snapshot_on_restart: bool = False
    check_invariants: bool = False
    integer_box: int = 1000


@dataclass
class Stats:
    states_explored: int = 0
    restarts: int = 0
    subsumptions: int = 0
    invariant_successes: int = 0
    solver_calls: int = 0
    wall_ms: int = 0

    def as_dict(self) -> dict[str, int]:
        return {
            "states_explored": self.states_explored,
            "restarts": self.restarts,
            "subsumptions": self.subsumptions,
            "invariant_successes": self.invariant_successes,
            "solver_calls": self.solver_calls,
            "wall_ms": self.wall_ms,
        }


@dataclass(frozen=True)
class MemoEntry:
    point: ProgramPoint
    interpolant: Conjunction  # over the point's canonical variables
    canon: tuple[VarId, ...]
    min_positions: tuple[int, ...]  # MIN marks active when memoized
    owner_path: tuple[int, ...]
    owner_store: Conjunction
    owner_node_id: int
    epoch: int


@dataclass(frozen=True)
class CallEntry:
    depth: int
    goal: Goal
    vec: AnnotationVector
    node_id: int


@dataclass(frozen=True)
class Verdict:
    kind: str  # "SAFE" | "UNSAFE" | "UNKNOWN"
    stats: Stats
    invariants: dict[ProgramPoint, Conjunction] = field(default_factory=dict)
    trace: tuple[Rule, ...] = ()
    witness: Optional[RationalModel] = None
    reason: str = ""


class UnsafeFound(Exception):
    def __init__(self, trace: tuple[Rule, ...], goal: Goal, model: RationalModel) -> None:
        super().__init__("reachable error location")
        self.trace = trace
        self.goal = goal
        self.model = model


class BudgetExceeded(Exception):
    def __init__(self, reason: str) -> None:
        super().__init__(reason)
        self.reason = reason


class _ConflictWithoutAncestor(Exception):
    pass


@dataclass
class NodeRecord:
    node_id: int
    parent_id: Optional[int]
    rule: Optional[Rule]
    point: ProgramPoint
    epoch: int
    status: str = "open"
    label_extra: str = ""
    marks: str = ""
    min_pretty: str = ""
    subsumed_by: Optional[int] = None
    alive: bool = True


class TreeLog:
    """Always-on lightweight node index; label data only when recording."""

    def __init__(self, record: bool) -> None:
        self.record = record
        self.nodes: dict[int, NodeRecord] = {}
        self.children: dict[int, list[int]] = {}
        self.order: list[int] = []
        self.snapshots: list[list[NodeRecord]] = []
        self._next = 0

    def new_node(self, parent: Optional[int], rule: Optional[Rule],
                 point: ProgramPoint, epoch: int) -> int:
        nid = self._next
        self._next += 1
        rec = NodeRecord(nid, parent, rule, point, epoch)
        self.nodes[nid] = rec
        self.children[nid] = []
        if parent is not None:
            self.children[parent].append(nid)
        self.order.append(nid)
        return nid

    def kill(self, nid: int) -> None:
        stack = [nid]
        while stack:
            k = stack.pop()
            self.nodes[k].alive = False
            stack.extend(self.children[k])

    def snapshot(self) -> None:
        self.snapshots.append([r for i in self.order
                               if (r := self.nodes[i]).alive])

    def live(self) -> list[NodeRecord]:
        return [self.nodes[i] for i in self.order if self.nodes[i].alive]


@dataclass(frozen=True)
class InvariantEvent:
    epoch: int
    point: ProgramPoint
    invariant: Conjunction  # over canonical point variables


@dataclass(frozen=True)
class RestartEvent:
    epoch: int
    point: ProgramPoint
    locked_atoms: tuple[Atom, ...]
    cause: str  # "conflict" | "merge"


@dataclass(frozen=True)
class SubsumptionEvent:
    point: ProgramPoint
    point_path: tuple[ProgramPoint, ...]
    entry_point: ProgramPoint
    entry_node: int


class Engine:
    def __init__(self, ts: TransitionSystem, cfg: Optional[EngineConfig] = None) -> None:
        self.ts = ts
        self.cfg = cfg or EngineConfig()
        self.alloc = VarAllocator()
        self.stats = Stats()
        self.memo: dict[object, list[MemoEntry]] = {}
        self.tree = TreeLog(self.cfg.record_tree)
        self.epoch = 0
        self.invariant_log: list[InvariantEvent] = []
        self.restart_log: list[RestartEvent] = []
        self.subsumption_log: list[SubsumptionEvent] = []
        self.error_visits: list[int] = []  # epochs of error-location visits
        self._canon: dict[object, tuple[VarId, ...]] = {}
        self._rules_from: dict[object, tuple[Rule, ...]] = {}
        self._deadline = None
        self._min_records: dict[int, tuple[object, Conjunction]] = {}
        self._loop_parent_ids: set[int] = set()
        self._memo_epoch = 0

    # -- helpers -----------------------------------------------------------

    def _sat(self, c: Conjunction):
        self.stats.solver_calls += 1
        return is_sat(c)

    def _entails_atom(self, c: Conjunction, a: Atom) -> bool:
        for d in a.negate():
            if isinstance(self._sat(c.extend([d])), Sat):
                return False
        return True

    def _entails(self, c1: Conjunction, c2: Conjunction) -> bool:
        return all(self._entails_atom(c1, a) for a in c2.atoms)

    def rules_from(self, p) -> tuple[Rule, ...]:
        r = self._rules_from.get(p)
        if r is None:
            r = self.ts.rules_from(p)
            self._rules_from[p] = r
        return r

    def canon_vars(self, p) -> tuple[VarId, ...]:
        c = self._canon.get(p)
        if c is None:
            c = tuple(self.alloc.fresh(f"{n}@{p}") for n in self.ts.vars)
            self._canon[p] = c
        return c

    def _check_budget(self, depth: int) -> None:
        if self.stats.states_explored >= self.cfg.max_nodes:
            raise BudgetExceeded("node budget exceeded")
        if depth > self.cfg.max_depth:
            raise BudgetExceeded("depth budget exceeded")
        if self._deadline is not None and time.monotonic() > self._deadline:
            raise BudgetExceeded("timeout")

    def _to_canonical(self, c: Conjunction, primaries: tuple[VarId, ...], p) -> Conjunction:
        canon = self.canon_vars(p)
        return rename(c, dict(zip(primaries, canon)))

    def _project_min(self, goal: Goal, vec: AnnotationVector) -> Conjunction:
        """Min-interpretation projected onto canonical point variables."""
        mi = Conjunction.of(a for a, m in zip(goal.store, vec) if m is not MIN)
        proj = project_with_exactness(mi, frozenset(goal.primaries)).conjunction
        return self._to_canonical(proj, goal.primaries, goal.point)

    # -- memo table --------------------------------------------------------

    def _memoize(self, goal: Goal, vec: AnnotationVector, path: tuple[int, ...],
                 node_id: int) -> None:
        max_atoms = Conjunction.of(a for a, m in zip(goal.store, vec) if m is MAX)
        proj = project_with_exactness(max_atoms, frozenset(goal.primaries))
        if not proj.exact:
            return  # sound fallback: do not memoize inexact projections
        interpolant = self._to_canonical(proj.conjunction, goal.primaries, goal.point)
        if self.cfg.check_invariants:
            back = rename(interpolant, dict(zip(self.canon_vars(goal.point),
                                                goal.primaries)))
            assert self._entails(max_atoms, back), \
                "memoized interpolant must be entailed by the kept atoms"
        mins = tuple(i for i, m in enumerate(vec) if m is MIN)
        self._memo_epoch += 1
        entry = MemoEntry(goal.point, interpolant, self.canon_vars(goal.point),
                          mins, path, goal.store, node_id, self._memo_epoch)
        self.memo.setdefault(goal.point, []).append(entry)

    def _clear_memo_subtree(self, path: tuple[int, ...]) -> None:
        for p, entries in self.memo.items():
            self.memo[p] = [e for e in entries
                            if e.owner_path[: len(path)] != path]

    def subsumed(self, s: AnnotatedState) -> tuple[MemoEntry, AnnotationVector] | Bottom:
        """First memo entry at this point whose interpolant is entailed by the
        state's min-interpretation; also returns the annotation vector with
        the entailment-preserving MAX promotions and the entry's loop-scope
        MIN positions re-communicated on the shared store prefix."""
        entries = self.memo.get(s.goal.point)
        if not entries:
            return BOTTOM
        mi = interp_min(s)
        for e in entries:
            renamed = rename(e.interpolant, dict(zip(e.canon, s.goal.primaries)))
            if not self._entails(mi, renamed):
                continue
            v = s.vec
            for a in renamed.atoms:
                for d in a.negate():
                    v = interpolate(AnnotatedState(s.goal, v), Conjunction.of([d]),
                                    sat=self._sat)
            if e.min_positions:
                common = _common_prefix_len(e.owner_store, s.goal.store)
                out = list(v)
                for pos in e.min_positions:
                    if pos < common and out[pos] is NEUTRAL:
                        out[pos] = MIN
                v = tuple(out)
            return (e, v)
        return BOTTOM

    # -- loop invariants -----------------------------------------------------

    def invariant(self, s: AnnotatedState, parent: CallEntry
                  ) -> AnnotationVector | Bottom:
        """Speculative path-based loop closure against a looping ancestor.

        Walks the ancestor's store: MIN marks are skipped, ancestor facts
        still entailed by the descendant (after renaming ancestor primaries
        to descendant primaries) are kept, stale NEUTRAL facts are demoted
        to MIN, and a stale MAX (locked) fact aborts with BOTTOM.
        """
        pg, pv = parent.goal, parent.vec
        mapping = dict(zip(pg.primaries, s.goal.primaries))
        child_min = interp_min(s)
        prefix_len = len(pg.store)
        demoted: list[int] = []
        renamed_kept: list[Atom] = []
        primset = frozenset(pg.primaries)
        for i, (atom, mark) in enumerate(zip(pg.store, pv)):
            if mark is MIN:
                continue
            if not (atom.vars() & primset):
                continue  # shared history fact, present in the descendant store
            ra = atom.rename(mapping)
            if self._entails_atom(child_min, ra):
                renamed_kept.append(ra)
                continue
            if mark is MAX:
                return BOTTOM  # locked facts may not be abstracted away
            demoted.append(i)
        out = list(s.vec)
        for i in demoted:
            out[i] = MIN
        new_vec = tuple(out)
        # re-verify under the demoted vector: earlier entailments may have
        # leaned on atoms that were demoted afterwards
        if demoted and renamed_kept:
            new_min = interp_min(AnnotatedState(s.goal, new_vec))
            if not self._entails(new_min, Conjunction.of(renamed_kept)):
                return BOTTOM
        if self.cfg.check_invariants:
            new_min = interp_min(AnnotatedState(s.goal, new_vec))
            kept_parent = [a.rename(mapping) for j, (a, m) in
                           enumerate(zip(pg.store, pv))
                           if m is not MIN and j not in demoted
                           and (a.vars() & primset)]
            assert self._entails(new_min, Conjunction.of(kept_parent)), \
                "loop closure must leave the ancestor entailed"
        # record the speculative invariant for reporting
        parent_marks = [pv[i] if i not in demoted else MIN
                        for i in range(prefix_len)]
        parent_min = Conjunction.of(a for a, m in zip(pg.store, parent_marks)
                                    if m is not MIN)
        proj = project_with_exactness(parent_min, frozenset(pg.primaries)).conjunction
        inv = self._to_canonical(proj, pg.primaries, pg.point)
        self.invariant_log.append(InvariantEvent(self.epoch, pg.point, inv))
        self._loop_parent_ids.add(parent.node_id)
        return new_vec

    # -- main recursion ------------------------------------------------------

    def minimax(self, depth: int, s: AnnotatedState, ct: list[CallEntry],
                parent_node: Optional[int], in_rule: Optional[Rule],
                path: tuple[int, ...], trace: tuple[Rule, ...]
                ) -> tuple[Status, AnnotationVector, int]:
        while True:  # re-entered on same-node restarts
            self.stats.states_explored += 1
            self._check_budget(depth)
            node_id = self.tree.new_node(parent_node, in_rule, s.goal.point, self.epoch)
            my_path = path + (node_id,)
            rec = self.tree.nodes[node_id]
            if self.tree.record:
                rec.marks = "".join(m.value for m in s.vec)
                rec.min_pretty = C.format_conjunction(
                    interp_min(s), self.alloc.names)

            # (a) infeasible under the min-interpretation
            mi = interp_min(s)
            if not isinstance(self._sat(mi), Sat):
                v = interpolate(s, C.TRUE, sat=self._sat)
                if self.cfg.check_invariants:
                    assert check_interpolation_minimal(s, C.TRUE, v)
                rec.status = "infeasible"
                return (Status.OK, v, 0)

            # (b) error location
            if s.goal.point.is_error:
                self.error_visits.append(self.epoch)
                res = self._sat(s.goal.store)
                if isinstance(res, Sat):
                    rec.status = "unsafe"
                    raise UnsafeFound(trace, s.goal, res.model)
                fresh = AnnotatedState(s.goal, neut(len(s.goal.store)))
                v = interpolate(fresh, C.TRUE, sat=self._sat)
                if self.cfg.check_invariants:
                    assert check_interpolation_minimal(fresh, C.TRUE, v)
                depths = [e.depth for e in ct if conflict(e.vec, v)]
                if not depths:
                    raise _ConflictWithoutAncestor()
                rec.status = "spurious-error"
                return (Status.CONFLICT, mergemax(v, s.vec), min(depths))

            # (c) terminal: no applicable rules
            rules = self.rules_from(s.goal.point)
            if not rules:
                rec.status = "terminal"
                return (Status.OK, s.vec, 0)

            # (d) subsumption against the memo table
            is_looping = any(e.goal.point == s.goal.point for e in ct)
            sub = self.subsumed(s)
            if not isinstance(sub, Bottom):
                entry, v = sub
                self.stats.subsumptions += 1
                rec.status = "subsumed"
                rec.subsumed_by = entry.owner_node_id
                self.subsumption_log.append(SubsumptionEvent(
                    s.goal.point,
                    tuple(e.goal.point for e in ct) + (s.goal.point,),
                    entry.point, entry.owner_node_id))
                if is_looping:
                    self._record_min(node_id, s.goal, v)
                return (Status.OK, v, 0)

            # (e) looping: try to close against same-point ancestors, innermost first
            looping_parents = [e for e in ct if e.goal.point == s.goal.point]
            if looping_parents:
                for parent in reversed(looping_parents):
                    v_inv = self.invariant(s, parent)
                    if not isinstance(v_inv, Bottom):
                        self.stats.invariant_successes += 1
                        rec.status = "loop-closed"
                        rec.subsumed_by = parent.node_id
                        self._record_min(node_id, s.goal, v_inv)
                        return (Status.OK, v_inv, 0)

            # default: one symbolic execution step per applicable rule
            status, vec, d, cause, locked = self._expand(
                depth, s, ct, rules, node_id, my_path, trace, rec, is_looping)
            if status is Status.CONFLICT and d == depth:
                # restart this node with the locked vector (tail call)
                if self.cfg.check_invariants and cause == "conflict":
                    assert locked, "restart must lock at least one deleted constraint"
                if self.cfg.record_tree and self.cfg.snapshot_on_restart:
                    self.tree.snapshot()
                self._clear_memo_subtree(my_path)
                self.tree.kill(node_id)
                self.stats.restarts += 1
                self.epoch += 1
                self.restart_log.append(RestartEvent(
                    self.epoch, s.goal.point,
                    tuple(s.goal.store[i] for i in locked), cause))
                s = AnnotatedState(s.goal, vec)
                continue
            if status is Status.CONFLICT:
                rec.status = "conflict"
            return (status, vec, d)

    def _expand(self, depth: int, s: AnnotatedState, ct: list[CallEntry],
                rules: tuple[Rule, ...], node_id: int, my_path: tuple[int, ...],
                trace: tuple[Rule, ...], rec: NodeRecord, is_looping: bool
                ) -> tuple[Status, AnnotationVector, int, str, list[int]]:
        goal = s.goal
        v_cur: AnnotationVector = s.vec
        children = [reduct(goal, r, self.alloc, self.ts.vars) for r in rules]
        mi = interp_min(s)
        feasible: list[bool] = []
        for child in children:
            appended = child.store.atoms[len(goal.store):]
            feasible.append(isinstance(self._sat(mi.extend(appended)), Sat))
        order = [i for i, f in enumerate(feasible) if f] + \
                [i for i, f in enumerate(feasible) if not f]

        for i in order:
            child, rule = children[i], rules[i]
            appended_len = len(child.store) - len(goal.store)
            child_vec = v_cur + neut(appended_len)
            entry = CallEntry(depth, goal, v_cur, node_id)
            status, v2, d = self.minimax(depth + 1,
                                         AnnotatedState(child, child_vec),
                                         ct + [entry], node_id, rule,
                                         my_path, trace + (rule,))
            v3 = wp_bar(v2, appended_len)
            if status is Status.CONFLICT:
                locked = [j for j, (old, new) in enumerate(zip(v_cur, v3))
                          if old is MIN and new is not MIN]
                return (Status.CONFLICT, v3, d, "conflict", locked)
            merged = mergemin(v3, v_cur)
            if isinstance(merged, Bottom):
                # a later child locked a position an earlier child deleted:
                # treat as a same-node conflict and restart with the join
                locked = [j for j, (a, b) in enumerate(zip(v3, v_cur))
                          if (a is MIN) != (b is MIN) and (a is MAX or b is MAX)]
                locked_vec = tuple(
                    MAX if (a is MAX or b is MAX)
                    else (MIN if (a is MIN or b is MIN) else NEUTRAL)
                    for a, b in zip(v3, v_cur))
                return (Status.CONFLICT, locked_vec, depth, "merge", locked)
            v_cur = mergemax(v3, merged)

        rec.status = "expanded"
        if is_looping or node_id in self._loop_parent_ids:
            self._record_min(node_id, goal, v_cur)
        self._memoize(goal, v_cur, my_path, node_id)
        return (Status.OK, v_cur, 0, "", [])

    def _record_min(self, node_id: int, goal: Goal, vec: AnnotationVector) -> None:
        self._min_records[node_id] = (goal.point, self._project_min(goal, vec))

    # -- entry point ---------------------------------------------------------

    def run(self) -> Verdict:
        start = time.monotonic()
        if self.cfg.timeout_s is not None:
            self._deadline = start + self.cfg.timeout_s
        init_goal = Goal(self.ts.initial,
                         self.alloc.fresh_tuple(self.ts.vars),
                         C.TRUE)
        init = AnnotatedState(init_goal, ())
        verdict: Verdict
        try:
            status, _, _ = self.minimax(0, init, [], None, None, (), ())
            assert status is Status.OK
            verdict = Verdict("SAFE", self.stats,
                              invariants=self._loop_invariants())
        except UnsafeFound as u:
            verdict = self._validate_unsafe(u)
        except BudgetExceeded as b:
            verdict = Verdict("UNKNOWN", self.stats, reason=b.reason)
        except _ConflictWithoutAncestor:
            verdict = Verdict("UNKNOWN", self.stats, reason="conflict-without-ancestor")
        self.stats.wall_ms = int((time.monotonic() - start) * 1000)
        if self.cfg.record_tree:
            self.tree.snapshot()
        return verdict

    def _validate_unsafe(self, u: UnsafeFound) -> Verdict:
        # re-derive the witness over a fresh replay so trace and witness share
        # one instance numbering (the engine's own ids are interleaved with
        # canonical point variables)
        replay = replay_trace(self.ts, u.trace)
        if replay is None:  # pragma: no cover - engine traces always replay
            return Verdict("UNKNOWN", self.stats, reason="trace replay failed")
        goal, model = replay
        vs = sorted(goal.store.vars())
        if any(model.value(v).denominator != 1 for v in vs):
            intm = find_integer_model(goal.store, self.cfg.integer_box,
                                      sat=self._sat)
            if intm is None:
                return Verdict("UNKNOWN", self.stats,
                               reason="rational-only counterexample")
            model = intm
        if self.cfg.check_invariants:
            assert model.satisfies(goal.store)
        return Verdict("UNSAFE", self.stats, trace=u.trace, witness=model)

    def _loop_invariants(self) -> dict[object, Conjunction]:
        """Per looping point: the facts common to every surviving node at
        that point (conjunction of first-record atoms entailed by all)."""
        alive = {r.node_id for r in self.tree.live()}
        per_point: dict[object, list[Conjunction]] = {}
        for nid, (point, conj) in self._min_records.items():
            if nid in alive:
                per_point.setdefault(point, []).append(conj)
        out: dict[object, Conjunction] = {}
        for point, conjs in per_point.items():
            first, rest = conjs[0], conjs[1:]
            kept = [a for a in first.atoms
                    if all(self._entails_atom(c, a) for c in rest)]
            out[point] = Conjunction.of(kept)
        return out

    def render_invariants(self, invariants: dict[object, Conjunction]
                          ) -> dict[object, str]:
        """Render per-point invariants over program variable names."""
        out = {}
        for point, conj in invariants.items():
            names = {v: n for v, n in zip(self.canon_vars(point), self.ts.vars)}
            out[point] = C.format_conjunction(conj, names)
        return out


def _common_prefix_len(a: Conjunction, b: Conjunction) -> int:
    n = 0
    for x, y in zip(a.atoms, b.atoms):
        if x is not y and x != y:
            break
        n += 1
    return n


def find_integer_model(c: Conjunction, box: int,
                       sat: Optional[Callable[[Conjunction], object]] = None,
                       max_branches: int = 400) -> Optional[RationalModel]:
    """Bounded branch-and-bound search for an integral witness."""
    sat_fn = sat or is_sat
    vs = sorted(c.vars())
    boxed = c.extend(
        [Atom.cmp(C.LinearTerm.var(v), "<=", C.LinearTerm.const_term(box)) for v in vs]
        + [Atom.cmp(C.LinearTerm.var(v), ">=", C.LinearTerm.const_term(-box))
           for v in vs])
    budget = [max_branches]

    def bb(cur: Conjunction) -> Optional[RationalModel]:
        if budget[0] <= 0:
            return None
        budget[0] -= 1
        res = sat_fn(cur)
        if not isinstance(res, Sat):
            return None
        frac = [v for v in vs if res.model.value(v).denominator != 1]
        if not frac:
            return res.model
        v = frac[0]
        val = res.model.value(v)
        lo = bb(cur.extend([Atom.cmp(C.LinearTerm.var(v), "<=",
                                     C.LinearTerm.const_term(floor(val)))]))
        if lo is not None:
            return lo
        return bb(cur.extend([Atom.cmp(C.LinearTerm.var(v), ">=",
                                       C.LinearTerm.const_term(floor(val) + 1))]))

    return bb(boxed)


def replay_trace(ts: TransitionSystem, trace: tuple[Rule, ...]
                 ) -> Optional[tuple[Goal, RationalModel]]:
    """Re-run a rule sequence from the initial goal; returns the final goal
    and a witness when the accumulated store is satisfiable and ends at the
    error location."""
    alloc = VarAllocator()
    g = Goal(ts.initial, alloc.fresh_tuple(ts.vars), C.TRUE)
    for r in trace:
        if g.point != r.from_pt:
            return None
        g = reduct(g, r, alloc, ts.vars)
    if not g.point.is_error:
        return None
    res = is_sat(g.store)
    if not isinstance(res, Sat):
        return None
    return (g, res.model)


def run(ts: TransitionSystem, cfg: Optional[EngineConfig] = None
        ) -> tuple[Verdict, Engine]:
    eng = Engine(ts, cfg)
    return eng.run(), eng
