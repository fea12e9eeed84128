"""Exact linear feasibility over the lex-ordered value group.

Constraints are of the form  sum_i c_i * x_i  REL  rhs  with rational
coefficients c_i, REL in {<=, <, ==} and rhs a ``LexScalar``; the unknowns
x_i range over the value group Q^k.  Because the group is a divisible
ordered Q-vector space, Fourier-Motzkin elimination decides feasibility
exactly and back-substitution produces an explicit solution.
"""

from __future__ import annotations

from fractions import Fraction
from typing import List, NamedTuple, Optional, Sequence, Tuple

from .scalars import LexScalar

LE = "<="
LT = "<"
EQ = "=="


class Lin(NamedTuple):
    """sum(coeffs[i] * x_i) REL rhs."""

    coeffs: Tuple[Fraction, ...]
    rel: str
    rhs: LexScalar


def _sub_expr(con: Lin, var: int, expr: Tuple[Fraction, ...], rhs: LexScalar) -> Lin:
    # Substitute x_var = rhs - sum(expr[i] x_i) into con (expr[var] == 0).
    c = con.coeffs[var]
    if c == 0:
        return con
    coeffs = tuple(
        (0 if i == var else con.coeffs[i] - c * expr[i])
        for i in range(len(con.coeffs))
    )
    return Lin(coeffs, con.rel, con.rhs - rhs * c)


def _scale_unit(con: Lin, var: int) -> Lin:
    # Normalize so the coefficient on var is +1 or -1.
    c = con.coeffs[var]
    f = abs(c)
    return Lin(tuple(x / f for x in con.coeffs), con.rel, con.rhs / f)


def solve(constraints: Sequence[Lin], nvars: int, lex_rank: int) -> Optional[List[LexScalar]]:
    """Return one solution as a list of ``LexScalar``, or None if infeasible."""
    zero = LexScalar.zero(lex_rank)
    one = LexScalar.unit(lex_rank)

    work: List[Lin] = [Lin(tuple(Fraction(c) for c in con.coeffs), con.rel, con.rhs) for con in constraints]
    for con in work:
        if len(con.coeffs) != nvars:
            raise ValueError("constraint arity mismatch")

    # (kind, var, payload) records in elimination order, replayed in reverse.
    trace: List[Tuple[str, int, object]] = []
    remaining = list(range(nvars))

    # Eliminate equalities by exact substitution.
    changed = True
    while changed:
        changed = False
        for idx, con in enumerate(work):
            if con.rel != EQ:
                continue
            var = next((v for v in remaining if con.coeffs[v] != 0), None)
            if var is None:
                if con.rhs.sign() != 0:
                    return None
                work.pop(idx)
                changed = True
                break
            c = con.coeffs[var]
            expr = tuple(
                (Fraction(0) if i == var else con.coeffs[i] / c)
                for i in range(nvars)
            )
            rhs = con.rhs / c
            work.pop(idx)
            work = [_sub_expr(other, var, expr, rhs) for other in work]
            trace.append(("eq", var, (expr, rhs)))
            remaining.remove(var)
            changed = True
            break

    # Fourier-Motzkin on the inequalities, last remaining variable first.
    for var in sorted(remaining, reverse=True):
        lowers: List[Lin] = []
        uppers: List[Lin] = []
        rest: List[Lin] = []
        for con in work:
            c = con.coeffs[var]
            if c == 0:
                rest.append(con)
            elif c > 0:
                uppers.append(_scale_unit(con, var))
            else:
                lowers.append(_scale_unit(con, var))
        derived: List[Lin] = []
        for lo in lowers:
            for up in uppers:
                coeffs = tuple(a + b for a, b in zip(lo.coeffs, up.coeffs))
                rel = LT if (lo.rel == LT or up.rel == LT) else LE
                derived.append(Lin(coeffs, rel, lo.rhs + up.rhs))
        work = rest + derived
        trace.append(("fm", var, (lowers, uppers)))

    # Only constant constraints remain: 0 REL rhs.
    for con in work:
        s = con.rhs.sign()
        if con.rel == LE and s < 0:
            return None
        if con.rel == LT and s <= 0:
            return None
        if con.rel == EQ and s != 0:
            return None

    # Back-substitute, choosing witnesses deterministically.
    values: List[Optional[LexScalar]] = [None] * nvars

    def evaluate(con: Lin, skip: int) -> LexScalar:
        total = con.rhs
        for i, c in enumerate(con.coeffs):
            if i == skip or c == 0:
                continue
            total = total - values[i] * c
        return total

    for kind, var, payload in reversed(trace):
        if kind == "fm":
            lowers, uppers = payload
            lo_val = None
            lo_strict = False
            for con in lowers:
                # after scaling: -x + ... <= rhs, i.e. x >= -(rhs - rest)
                bound = -evaluate(con, var)
                if lo_val is None or bound > lo_val:
                    lo_val, lo_strict = bound, con.rel == LT
                elif bound == lo_val and con.rel == LT:
                    lo_strict = True
            up_val = None
            up_strict = False
            for con in uppers:
                bound = evaluate(con, var)
                if up_val is None or bound < up_val:
                    up_val, up_strict = bound, con.rel == LT
                elif bound == up_val and con.rel == LT:
                    up_strict = True
            if lo_val is None and up_val is None:
                values[var] = zero
            elif lo_val is None:
                values[var] = up_val - one if up_strict else up_val
            elif up_val is None:
                values[var] = lo_val + one if lo_strict else lo_val
            else:
                values[var] = (lo_val + up_val) / 2 if (lo_strict or up_strict or lo_val != up_val) else lo_val
        else:
            expr, rhs = payload
            total = rhs
            for i, c in enumerate(expr):
                if c != 0:
                    total = total - values[i] * c
            values[var] = total

    return [v if v is not None else zero for v in values]


def feasible(constraints: Sequence[Lin], nvars: int, lex_rank: int) -> bool:
    return solve(constraints, nvars, lex_rank) is not None
