"""Front-ends, lowering, and symbolic reduction."""

import random
from fractions import Fraction
from pathlib import Path

import pytest

from sevloop import (Atom, Conjunction, LinearTerm, parse_cts, parse_mini,
                     pt, lower, reduct)
from sevloop.bmc import bmc
from sevloop.frontend import ParseError, dump_cts
from sevloop.program import (Assign, ERROR, Goal, If, Program, VarAllocator,
                             While)

CORPUS = Path(__file__).parent / "corpus"


def var(v):
    return LinearTerm.var(v)


def const(c):
    return LinearTerm.const_term(c)


class TestParseMini:
    def test_branching_corpus_statement_count(self):
        prog = parse_mini((CORPUS / "branches.c").read_text())
        assert prog.statement_count() == 9
        assert prog.variables() == ("x", "y")
        assert prog.exit_label == 9

    def test_empty_program(self):
        prog = parse_mini("")
        assert prog.body == ()
        assert prog.statement_count() == 0

    def test_while_with_disequality_guard(self):
        prog = parse_mini("1: while(new!=old) { 2: old=new; }")
        loop = prog.body[0]
        assert isinstance(loop, While)
        assert loop.cond.comparisons[0][1] == "!="

    def test_declarations(self):
        prog = parse_mini("int x, y;\nx = 1;")
        assert prog.variables() == ("x", "y")

    def test_increment_sugar(self):
        prog = parse_mini("n++; n--; n += 2; n -= y;")
        exprs = [s.expr for s in prog.body]
        assert exprs[0] == exprs[1].__class__.make({"n": 1}, 1)
        assert exprs[2].const == 2
        assert dict(exprs[3].coeffs) == {"n": Fraction(1), "y": Fraction(-1)}

    def test_parse_error_carries_location(self):
        with pytest.raises(ParseError) as e:
            parse_mini("x = ;")
        assert e.value.line == 1

    def test_functions_rejected(self):
        with pytest.raises(ParseError):
            parse_mini("x = f();")
        with pytest.raises(ParseError):
            parse_mini("foo();")

    def test_arrays_rejected(self):
        with pytest.raises(ParseError):
            parse_mini("a[0] = 1;")

    def test_not_condition(self):
        prog = parse_mini("1: if(!flag) 2: error();")
        branch = prog.body[0]
        assert isinstance(branch, If)
        lhs, op, rhs = branch.cond.comparisons[0]
        assert op == "==" and rhs.const == 0


class TestLower:
    def test_assignment_rule_shape(self):
        # two variables x, y; `5: x = y+1 6:` gives y'=y && x'=y+1
        prog = parse_mini("int x, y;\n5: x = y+1;\n6:")
        ts = lower(prog)
        assert len(ts.rules) == 1
        r = ts.rules[0]
        assert (r.from_pt, r.to_pt) == (pt(5), pt(6))
        # slots: x=0, y=1, x'=2, y'=3
        frame = Atom.cmp(var(3), "==", var(1))
        assign = Atom.cmp(var(2), "==", var(1).add(const(1)))
        assert r.template.atoms == (frame, assign)

    def test_guard_rule_shape(self):
        prog = parse_mini("int x, y;\n6: if (x>0)\n7: x = x;\n")
        ts = lower(prog)
        r = ts.rules[0]
        assert (r.from_pt, r.to_pt) == (pt(6), pt(7))
        atoms = set(r.template.atoms)
        # frames for both variables plus the tightened guard x>=1
        assert Atom.cmp(var(2), "==", var(0)) in atoms
        assert Atom.cmp(var(3), "==", var(1)) in atoms
        assert Atom.cmp(var(0), ">=", const(1)) in atoms
        assert r.template.atoms[-1] == Atom.cmp(var(0), ">=", const(1))

    def test_nondet_branch_emits_then_rule_first(self):
        prog = parse_mini((CORPUS / "branches.c").read_text())
        ts = lower(prog)
        from_one = [r for r in ts.rules if r.from_pt == pt(1)]
        assert [r.to_pt for r in from_one] == [pt(2), pt(3)]
        # frame-only templates on both edges
        for r in from_one:
            assert all(a.rel.name == "EQ" for a in r.template.atoms)

    def test_error_statement_targets_error_point(self):
        prog = parse_mini("1: if(x>5)\n2: error();\n3:")
        ts = lower(prog)
        assert any(r.to_pt == ERROR for r in ts.rules)
        assert not any(r.from_pt == ERROR for r in ts.rules)

    def test_strict_comparisons_tightened(self):
        ts = lower(parse_mini("1: if(x<y)\n2: error();\n3:"))
        guard = [r for r in ts.rules if r.to_pt == pt(2)][0].template.atoms[-1]
        # x < y lowered as x <= y-1
        assert guard == Atom.cmp(var(0), "<=", var(1).add(const(-1)))

    def test_multi_atom_guard_negation_splits(self):
        ts = lower(parse_mini("1: if(x>0 && y>0)\n2: error();\n3:"))
        else_rules = [r for r in ts.rules if r.from_pt == pt(1) and r.to_pt == pt(3)]
        assert len(else_rules) == 2


class TestReduct:
    def setup_method(self):
        self.ts = lower(parse_mini((CORPUS / "branches.c").read_text()))
        self.alloc = VarAllocator()
        self.init = Goal(self.ts.initial, self.alloc.fresh_tuple(self.ts.vars),
                         Conjunction())

    def test_store_extends_parent(self):
        r0 = self.ts.rules_from(pt(0))[0]
        g1 = reduct(self.init, r0, self.alloc, self.ts.vars)
        assert g1.point == pt(1)
        assert g1.store.atoms[: len(self.init.store)] == self.init.store.atoms
        r1 = self.ts.rules_from(pt(1))[0]
        g2 = reduct(g1, r1, self.alloc, self.ts.vars)
        assert g2.store.atoms[: len(g1.store)] == g1.store.atoms

    def test_fresh_instances_never_reused(self):
        g = self.init
        seen = set(g.primaries)
        rng = random.Random(7)
        for _ in range(12):
            rules = self.ts.rules_from(g.point)
            if not rules:
                break
            g = reduct(g, rng.choice(rules), self.alloc, self.ts.vars)
            assert not (set(g.primaries) & seen)
            seen |= set(g.primaries)

    def test_point_mismatch_rejected(self):
        r7 = self.ts.rules_from(pt(7))[0]
        with pytest.raises(ValueError):
            reduct(self.init, r7, self.alloc, self.ts.vars)

    def test_frame_only_rule_keeps_values_equal(self):
        r0 = self.ts.rules_from(pt(0))[0]
        g1 = reduct(self.init, r0, self.alloc, self.ts.vars)
        skip = [r for r in self.ts.rules_from(pt(1)) if r.to_pt == pt(3)][0]
        g2 = reduct(g1, skip, self.alloc, self.ts.vars)
        from sevloop import entails_atom
        for a, b in zip(g1.primaries, g2.primaries):
            assert entails_atom(g2.store, Atom.cmp(var(b), "==", var(a)))


class TestParseCts:
    def test_assignment_rule_with_frame_auto(self):
        ts = parse_cts("""
vars x y;
init 5;
frame auto;
trans 5 6 { x' = y + 1 }
""")
        r = ts.rules[0]
        frame = Atom.cmp(var(3), "==", var(1))
        assign = Atom.cmp(var(2), "==", var(1).add(const(1)))
        assert r.template.atoms == (frame, assign)

    def test_no_rules_every_goal_terminal(self):
        ts = parse_cts("vars x;\ninit 0;\n")
        assert ts.rules == ()

    def test_error_target(self):
        ts = parse_cts("vars x;\ninit 7;\ntrans 7 error { x >= 6 }\n")
        assert ts.rules[0].to_pt == ERROR

    def test_undeclared_variable_rejected(self):
        with pytest.raises(ParseError):
            parse_cts("vars x;\ninit 0;\ntrans 0 1 { y' = 1 }\n")

    def test_comments_and_strict_tightening(self):
        ts = parse_cts("# header\nvars x;\ninit 0;\ntrans 0 1 { x' > 2 }\n")
        assert ts.rules[0].template.atoms[0] == Atom.cmp(var(1), ">=", const(3))

    def test_dump_roundtrip_preserves_rules(self):
        ts = lower(parse_mini((CORPUS / "lockstep.c").read_text()))
        ts2 = parse_cts(dump_cts(ts))
        assert ts2.vars == ts.vars
        assert ts2.initial == ts.initial
        assert len(ts2.rules) == len(ts.rules)
        for a, b in zip(ts.rules, ts2.rules):
            assert (a.from_pt, a.to_pt) == (b.from_pt, b.to_pt)
            assert a.template == b.template


# ---------------------------------------------------------------------------
# lowering soundness against concrete enumeration


def _interp_expr(e, env):
    total = e.const
    for name, c in e.coeffs:
        total += c * env[name]
    return total


def _interp_cond(cond, env) -> bool:
    ops = {"==": lambda a, b: a == b, "!=": lambda a, b: a != b,
           "<=": lambda a, b: a <= b, "<": lambda a, b: a < b,
           ">=": lambda a, b: a >= b, ">": lambda a, b: a > b}
    return all(ops[op](_interp_expr(a, env), _interp_expr(b, env))
               for a, op, b in cond.comparisons)


def _concrete_reaches_error(prog: Program, env0: dict) -> bool:
    """Enumerate all nondeterministic executions (loops must terminate)."""
    from sevloop.program import Assume, ErrorStmt

    hit = [False]

    def run(stmts, i, env):
        if hit[0]:
            return
        if i == len(stmts):
            return
        s = stmts[i]
        if isinstance(s, Assign):
            env2 = dict(env)
            env2[s.name] = _interp_expr(s.expr, env)
            run(stmts, i + 1, env2)
        elif isinstance(s, Assume):
            if _interp_cond(s.cond, env):
                run(stmts, i + 1, env)
        elif isinstance(s, ErrorStmt):
            hit[0] = True
        elif isinstance(s, If):
            if s.cond is None:
                run(list(s.then) + list(stmts[i + 1:]), 0, env)
                run(list(s.orelse) + list(stmts[i + 1:]), 0, env)
            elif _interp_cond(s.cond, env):
                run(list(s.then) + list(stmts[i + 1:]), 0, env)
            else:
                run(list(s.orelse) + list(stmts[i + 1:]), 0, env)
        elif isinstance(s, While):
            if _interp_cond(s.cond, env):
                run(list(s.body) + [s] + list(stmts[i + 1:]), 0, env)
            else:
                run(stmts, i + 1, env)
        else:  # pragma: no cover
            raise TypeError(s)

    run(list(prog.body), 0, dict(env0))
    return hit[0]


def test_lowering_soundness_on_random_programs():
    import sys
    sys.path.insert(0, str(Path(__file__).parent))
    from corpusgen import random_loop_program

    rng = random.Random(2024)
    for _ in range(25):
        src = random_loop_program(rng)
        prog = parse_mini(src)
        env0 = {n: Fraction(0) for n in prog.variables()}
        concrete = _concrete_reaches_error(prog, env0)
        ts = lower(prog)
        verdict = bmc(ts, 60)
        assert (verdict.kind == "CEX") == concrete, src
