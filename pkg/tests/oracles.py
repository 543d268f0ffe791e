"""Independent reference implementations used only by the tests.

These share no code with the package: generators are rebuilt from the flip
rules on explicit bit strings with sympy, and stationary weights come from
the matrix-tree theorem (diagonal cofactors of ``-M``).
"""
from __future__ import annotations

import itertools

import sympy as sp


def symbols(L: int):
    """``a1..aL, b1..bL``; a single site uses plain ``a, b`` like the package."""
    if L == 1:
        return [sp.Symbol("a")], [sp.Symbol("b")]
    a = sp.symbols(" ".join(f"a{i}" for i in range(1, L + 1)), seq=True)
    b = sp.symbols(" ".join(f"b{i}" for i in range(1, L + 1)), seq=True)
    return list(a), list(b)


def words(L: int) -> list[str]:
    return ["".join(w) for w in itertools.product("01", repeat=L)]


def flip_rule_generator(alpha, beta) -> sp.Matrix:
    """``M[b, c]`` = rate of ``c -> b`` from the neighbour rule with an empty site 0."""
    L = len(alpha)
    ws = words(L)
    index = {w: k for k, w in enumerate(ws)}
    M = sp.zeros(len(ws), len(ws))
    for c, w in enumerate(ws):
        padded = "0" + w
        for i in range(1, L + 1):
            rate = alpha[i - 1] if padded[i - 1] != padded[i] else beta[i - 1]
            target = w[: i - 1] + ("1" if w[i - 1] == "0" else "0") + w[i:]
            M[index[target], c] += rate
            M[c, c] -= rate
    return M


def cofactor_weights(M: sp.Matrix) -> list:
    """Stationary weights by the matrix-tree theorem, via brute-force determinants."""
    n = M.shape[0]
    out = []
    for j in range(n):
        keep = [k for k in range(n) if k != j]
        minor = (-M).extract(keep, keep)
        out.append(sp.expand(minor.det(method="berkowitz")))
    return out


def poly_text_to_sympy(text: str):
    """Parse the package's canonical polynomial text (``^`` for powers)."""
    return sp.sympify(text.replace("^", "**"))
