"""Builders for the parameterized corpus programs and random test systems."""

from __future__ import annotations

import random
from fractions import Fraction

from sevloop import Atom, Conjunction, LinearTerm, Rule, TransitionSystem, pt
from sevloop.program import ERROR


def chain_choice_source(n: int, z_then: int = 0, z_else: int = 999) -> str:
    """An early either/or assignment to z followed by n nondeterministic
    increment diamonds on s, then an error guard that only the z_then value
    can trip. Labels follow: first diamond head at 4, final guard after."""
    lines = ["1: s=0;",
             "2: if(*)",
             "     z=%d;" % z_then,
             "   else",
             "3:   z=%d;" % z_else]
    label = 4
    for _ in range(n):
        lines.append(f"{label}: if(*)")
        lines.append("     s = s+1;")
        lines.append("   else")
        lines.append(f"{label + 1}:   s = s+2;")
        label += 2
    lines.append(f"{label}: if(s+z>{2 * n} && z==0)")
    lines.append(f"{label + 1}:   error();")
    lines.append(f"{label + 2}:")
    return "\n".join(lines) + "\n"


def stub_propagation_source(n: int) -> str:
    """Both branches set x and y to zero (the opaque call is stubbed to 0);
    n diamonds bump s and t together; the error guard needs both above n."""
    lines = ["1: if(*) {",
             "2:   x=0;",
             "3:   y=0;",
             "   } else {",
             "5:   x=0;",
             "6:   y=0;",
             "   }",
             "7: s=x;",
             "8: t=y;"]
    label = 9
    for _ in range(n):
        lines.append(f"{label}: if(*) {{ s = s+1; t = t+1; }}")
        label += 1
    lines.append(f"{label}: if(t>{n} && s>{n})")
    lines.append(f"{label + 1}:   error();")
    lines.append(f"{label + 2}:")
    return "\n".join(lines) + "\n"


def final_guard_point(n: int) -> int:
    """Program point of the error guard in chain_choice_source(n)."""
    return 4 + 2 * n


# ---------------------------------------------------------------------------
# random transition systems (loop-free DAGs)


def _linterm(rng: random.Random, slots: list[int], max_terms: int = 2,
             lo: int = -3, hi: int = 3) -> LinearTerm:
    coeffs = {}
    for v in rng.sample(slots, k=min(len(slots), rng.randint(0, max_terms))):
        c = rng.randint(lo, hi)
        if c:
            coeffs[v] = Fraction(c)
    return LinearTerm.make(coeffs, rng.randint(lo, hi))


def random_loopfree_system(rng: random.Random) -> TransitionSystem:
    """A DAG over <=8 points with <=12 transitions and <=4 variables.

    Guards keep unit coefficients on the guarded variable so rational
    witnesses on error paths round to integer ones.
    """
    nvars = rng.randint(1, 4)
    names = tuple("abcd"[:nvars])
    npoints = rng.randint(3, 8)
    n = nvars
    slots = list(range(n))

    def frames(except_slot: int | None = None) -> list[Atom]:
        return [Atom.cmp(LinearTerm.var(n + i), "==", LinearTerm.var(i))
                for i in range(n) if i != except_slot]

    rules = []
    ntrans = rng.randint(npoints - 1, 12)
    for _ in range(ntrans):
        src = rng.randrange(0, npoints - 1)
        kind = rng.random()
        if kind < 0.18:
            dst_pt = ERROR
        else:
            dst_pt = pt(rng.randrange(src + 1, npoints))
        if rng.random() < 0.55:
            i = rng.randrange(n)
            atoms = frames(i) + [Atom.cmp(LinearTerm.var(n + i), "==",
                                          _linterm(rng, slots))]
        else:
            i = rng.randrange(n)
            op = rng.choice(["<=", ">=", "==", "<", ">", "!="])
            rhs = _linterm(rng, [s for s in slots if s != i], max_terms=1,
                           lo=-3, hi=3)
            guard = _guard_atom(LinearTerm.var(i), op, rhs)
            atoms = frames() + [guard]
        rules.append(Rule(pt(src), dst_pt, Conjunction.of(atoms), index=len(rules)))
    # ensure point 0 has at least one outgoing rule
    if not any(r.from_pt == pt(0) for r in rules):
        rules.insert(0, Rule(pt(0), pt(1), Conjunction.of(frames()), index=0))
        rules = [Rule(r.from_pt, r.to_pt, r.template, index=i)
                 for i, r in enumerate(rules)]
    return TransitionSystem(names, tuple(rules), pt(0))


def _guard_atom(lhs: LinearTerm, op: str, rhs: LinearTerm) -> Atom:
    if op == "<":
        return Atom.cmp(lhs, "<=", rhs.add(LinearTerm.const_term(-1)))
    if op == ">":
        return Atom.cmp(lhs, ">=", rhs.add(LinearTerm.const_term(1)))
    return Atom.cmp(lhs, op, rhs)


def longest_path_bound(ts: TransitionSystem) -> int:
    """Transition count upper bound for loop-free systems (DAG by construction)."""
    order = sorted({p.tag for p in ts.points() if p.tag is not None})
    depth = {t: 0 for t in order}
    for t in order:
        for r in ts.rules:
            if r.from_pt.tag == t and r.to_pt.tag is not None:
                depth[r.to_pt.tag] = max(depth[r.to_pt.tag], depth[t] + 1)
    return max(depth.values(), default=0) + 2


# ---------------------------------------------------------------------------
# random bounded-loop mini programs


def random_loop_program(rng: random.Random) -> str:
    """A counter loop with syntactic bound <=3 plus straight-line noise and a
    guarded error check; always terminating."""
    bound = rng.randint(1, 3)
    body_assign = rng.choice(["y = y + 1;", "y = y + 2;", "z = z + y;",
                              "z = z + 1;"])
    extra = rng.choice(["", "    if(*)\n      z = z + 1;\n"])
    y0 = rng.randint(0, 2)
    z0 = rng.randint(0, 2)
    # reachable iff threshold is below the final value of the checked variable
    check_var = rng.choice(["y", "z"])
    threshold = rng.randint(0, 8)
    cmp_op = rng.choice([">", ">="])
    src = (f"1: y = {y0};\n"
           f"2: z = {z0};\n"
           f"3: i = 0;\n"
           f"4: while (i < {bound}) {{\n"
           f"5:   {body_assign}\n"
           f"{extra}"
           f"6:   i = i + 1;\n"
           f"   }}\n"
           f"7: if ({check_var} {cmp_op} {threshold})\n"
           f"8:   error();\n"
           f"9:\n")
    return src
