"""The octahedron recurrence over an arbitrary initial surface.

    f(n,i,j) f(n-2,i,j) = a(i+n-1,j) c(i-n+1,j) f(n-1,i,j+1) f(n-1,i,j-1)
                        + b(i,j+n-1) d(i,j-n+1) f(n-1,i+1,j) f(n-1,i-1,j)

with f(h(i,j), i, j) = x(i,j) on the surface.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field

from .lattice import HeightFunction, LatticePoint, cone_upper_points
from .laurent import ONE, DivisionNotExact, LaurentPoly, all_ones, edge, exact_div, x


class PointBelowSurface(ValueError):
    pass


class NonIntegerStep(ArithmeticError):
    pass


@dataclass
class EvalContext:
    """Memo table for one height function.

    ``edge_constants=(a, b, c, d)`` replaces every edge variable of that kind
    by the integer; ``faces_to_one`` replaces every face variable by 1.  Both
    are applied while evaluating, so counting runs only ever see integers.
    """

    h: HeightFunction
    edge_constants: tuple[int, int, int, int] | None = None
    faces_to_one: bool = False
    memo: dict = field(default_factory=dict, repr=False)
    _lock: threading.RLock = field(default_factory=threading.RLock, repr=False, compare=False)

    def face(self, i: int, j: int) -> LaurentPoly:
        return ONE if self.faces_to_one else LaurentPoly.var(x(i, j))

    def edge(self, q: str, i: int, j: int) -> LaurentPoly:
        if self.edge_constants is None:
            return LaurentPoly.var(edge(q, i, j))
        return LaurentPoly.const(self.edge_constants["abcd".index(q)])

    def value(self, n: int, i: int, j: int) -> LaurentPoly:
        # only valid for points already computed or on the surface
        if n == self.h(i, j):
            return self.face(i, j)
        return self.memo[(n, i, j)]

    def step(self, n: int, i: int, j: int) -> LaurentPoly:
        v = self.value
        t1 = self.edge("a", i + n - 1, j) * self.edge("c", i - n + 1, j) * v(n - 1, i, j + 1) * v(n - 1, i, j - 1)
        t2 = self.edge("b", i, j + n - 1) * self.edge("d", i, j - n + 1) * v(n - 1, i + 1, j) * v(n - 1, i - 1, j)
        return exact_div(t1 + t2, v(n - 2, i, j))


def _check_point(ctx: EvalContext, point) -> LatticePoint:
    point = LatticePoint(*point).check()
    if point.n < ctx.h(point.i, point.j):
        raise PointBelowSurface(f"{tuple(point)} lies below the surface (h={ctx.h(point.i, point.j)})")
    return point


def eval_f(ctx: EvalContext, point) -> LaurentPoly:
    point = _check_point(ctx, point)
    n, i, j = point
    if n == ctx.h(i, j):
        return ctx.face(i, j)
    with ctx._lock:
        hit = ctx.memo.get(point)
        if hit is not None:
            return hit
        for q in cone_upper_points(ctx.h, point):
            if q not in ctx.memo:
                ctx.memo[q] = ctx.step(*q)
        return ctx.memo[point]


def count_terms(ctx: EvalContext, point, *, check: bool = False) -> int:
    """Number of monomials of f at ``point``; with ``check`` also compare to the all-ones value."""
    p = eval_f(ctx, point)
    if check and all_ones(p) != len(p):
        raise AssertionError(f"all-ones value {all_ones(p)} differs from term count {len(p)}")
    return len(p)


def count_value(h: HeightFunction, point) -> int:
    """f at ``point`` with every variable set to 1."""
    return eval_f(EvalContext(h, edge_constants=(1, 1, 1, 1), faces_to_one=True), point).constant_value()


def gale_robinson_sequence(k: int, a: int, b: int, r: int = 1, s: int = 1, N: int = 10) -> list[int]:
    """``g(0..N-1)`` of ``g(n) g(n-k) = r g(n-a) g(n-k+a) + s g(n-b) g(n-k+b)``, ``g(0..k-1) = 1``."""
    if not (0 < a < k and 0 < b < k):
        raise ValueError(f"need 0 < a, b < k, got k={k} a={a} b={b}")
    g = [1] * min(k, N)
    for n in range(k, N):
        num = r * g[n - a] * g[n - k + a] + s * g[n - b] * g[n - k + b]
        q, rem = divmod(num, g[n - k])
        if rem:
            raise NonIntegerStep(f"g({n}) = {num}/{g[n - k]} is not an integer")
        g.append(q)
    return g


def gale_robinson_edge_constants(r: int, s: int) -> tuple[int, int, int, int]:
    """Edge constants (a, b, c, d) under which f on the Gale-Robinson line follows the (r, s) recurrence.

    The a c term pairs the neighbours (i, j +- 1), which sit at offset b in the
    sequence, so it carries s.
    """
    return s, r, 1, 1


def gale_robinson_index(k: int, a: int, b: int, point) -> int:
    """Sequence index of ``f(point)`` under ``f(n,i,j) = g((kn+(2a-k)i+(2b-k)j)/2 + k - 1)``."""
    n, i, j = point
    lin = k * n + (2 * a - k) * i + (2 * b - k) * j
    if lin % 2:
        raise ValueError("point is off the lattice")
    return lin // 2 + k - 1


def gale_robinson_point(k: int, a: int, b: int, index: int) -> LatticePoint:
    """A lattice point on the line whose f-value is term ``index`` of the sequence."""
    target = 2 * (index - k + 1)
    # search a small box for a solution of k n + (2a-k) i + (2b-k) j = target
    best = None
    for n in range(-2 * k - 2, abs(target) + 2 * k + 3):
        for i in range(-2 * k, 2 * k + 1):
            for j in range(-2 * k, 2 * k + 1):
                if (n + i + j) % 2 == 0 and k * n + (2 * a - k) * i + (2 * b - k) * j == target:
                    cand = (abs(i) + abs(j), n, i, j)
                    if best is None or cand < best:
                        best = cand
    if best is None:
        raise ValueError(f"no lattice point found for index {index}")
    return LatticePoint(best[1], best[2], best[3])


__all__ = [
    "DivisionNotExact",
    "EvalContext",
    "NonIntegerStep",
    "PointBelowSurface",
    "count_terms",
    "count_value",
    "eval_f",
    "gale_robinson_index",
    "gale_robinson_point",
    "gale_robinson_sequence",
]
