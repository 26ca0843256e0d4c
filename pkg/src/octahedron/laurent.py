"""Sparse Laurent polynomials with integer coefficients.

Variables are face variables ``x[i,j]``, edge variables ``a[i,j]`` ..
``d[i,j]`` and an auxiliary kind ``z[i,j]`` used for the renewed face
variable in urban renewal.  A monomial is a tuple of ``(Var, exponent)``
pairs sorted by variable with no zero exponents; a polynomial maps monomials
to nonzero integers.
"""

from __future__ import annotations

import heapq
import json
import re
from collections import Counter
from dataclasses import dataclass
from functools import cmp_to_key
from typing import Iterable, Mapping, NamedTuple, Union

FACE, EDGE, AUX = 0, 1, 2


class Var(NamedTuple):
    kind: int
    i: int
    j: int
    q: str

    def __str__(self) -> str:
        return f"{self.q}[{self.i},{self.j}]"


def x(i: int, j: int) -> Var:
    return Var(FACE, i, j, "x")


def edge(q: str, i: int, j: int) -> Var:
    if q not in ("a", "b", "c", "d"):
        raise ValueError(f"bad edge kind {q!r}")
    if (i + j) % 2 != 1:
        raise ValueError(f"edge variable {q}[{i},{j}] needs i+j odd")
    return Var(EDGE, i, j, q)


def aux(i: int, j: int) -> Var:
    return Var(AUX, i, j, "z")


def var_from_name(q: str, i: int, j: int) -> Var:
    if q == "x":
        return x(i, j)
    if q == "z":
        return aux(i, j)
    return edge(q, i, j)


Monomial = tuple  # tuple[tuple[Var, int], ...]


class DivisionNotExact(ArithmeticError):
    pass


class NegativePowerOfZero(ZeroDivisionError):
    pass


def _mono_mul(m1: Monomial, m2: Monomial) -> Monomial:
    if not m1:
        return m2
    if not m2:
        return m1
    out = []
    a = b = 0
    la, lb = len(m1), len(m2)
    while a < la and b < lb:
        v1, e1 = m1[a]
        v2, e2 = m2[b]
        if v1 == v2:
            e = e1 + e2
            if e:
                out.append((v1, e))
            a += 1
            b += 1
        elif v1 < v2:
            out.append(m1[a])
            a += 1
        else:
            out.append(m2[b])
            b += 1
    out.extend(m1[a:])
    out.extend(m2[b:])
    return tuple(out)


def _mono_pow(m: Monomial, k: int) -> Monomial:
    if k == 0:
        return ()
    return tuple((v, e * k) for v, e in m)


def _mono_cmp(m1: Monomial, m2: Monomial) -> int:
    """Graded lexicographic comparison; earlier variables are more significant."""
    d1 = sum(e for _, e in m1)
    d2 = sum(e for _, e in m2)
    if d1 != d2:
        return -1 if d1 < d2 else 1
    a = b = 0
    while True:
        if a == len(m1) and b == len(m2):
            return 0
        v1, e1 = m1[a] if a < len(m1) else (None, 0)
        v2, e2 = m2[b] if b < len(m2) else (None, 0)
        if v1 is not None and (v2 is None or v1 < v2):
            # var v1 has exponent 0 in m2
            return 1 if e1 > 0 else -1
        if v2 is not None and (v1 is None or v2 < v1):
            return -1 if e2 > 0 else 1
        if e1 != e2:
            return 1 if e1 > e2 else -1
        a += 1
        b += 1


_mono_key = cmp_to_key(_mono_cmp)


class LaurentPoly:
    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, int] | None = None):
        self._terms = {m: c for m, c in (terms or {}).items() if c}
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict) -> "LaurentPoly":
        p = cls.__new__(cls)
        p._terms = terms
        p._hash = None
        return p

    # constructors -------------------------------------------------------

    @classmethod
    def const(cls, c: int) -> "LaurentPoly":
        return cls._raw({(): c} if c else {})

    @classmethod
    def var(cls, v: Var, exp: int = 1) -> "LaurentPoly":
        return cls._raw({((v, exp),): 1} if exp else {(): 1})

    @classmethod
    def monomial(cls, exps: Mapping[Var, int] | Iterable[tuple[Var, int]], coeff: int = 1) -> "LaurentPoly":
        items = exps.items() if isinstance(exps, Mapping) else exps
        acc: dict[Var, int] = {}
        for v, e in items:
            acc[v] = acc.get(v, 0) + e
        mono = tuple(sorted((v, e) for v, e in acc.items() if e))
        return cls._raw({mono: coeff} if coeff else {})

    # basic protocol -----------------------------------------------------

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and () in self._terms)

    def constant_value(self) -> int:
        if not self.is_constant():
            raise ValueError("not a constant")
        return self._terms.get((), 0)

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = LaurentPoly.const(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def variables(self) -> set[Var]:
        return {v for m in self._terms for v, _ in m}

    # arithmetic ---------------------------------------------------------

    def __add__(self, other) -> "LaurentPoly":
        other = _coerce(other)
        if len(other._terms) > len(self._terms):
            self, other = other, self
        out = dict(self._terms)
        for m, c in other._terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return LaurentPoly._raw(out)

    __radd__ = __add__

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly._raw({m: -c for m, c in self._terms.items()})

    def __sub__(self, other) -> "LaurentPoly":
        return self + (-_coerce(other))

    def __rsub__(self, other) -> "LaurentPoly":
        return _coerce(other) - self

    def __mul__(self, other) -> "LaurentPoly":
        other = _coerce(other)
        if not self._terms or not other._terms:
            return LaurentPoly._raw({})
        out: dict = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = _mono_mul(m1, m2)
                s = out.get(m, 0) + c1 * c2
                if s:
                    out[m] = s
                else:
                    del out[m]
        return LaurentPoly._raw(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "LaurentPoly":
        if k < 0:
            if len(self._terms) != 1:
                raise DivisionNotExact("negative power of a non-monomial")
            ((m, c),) = self._terms.items()
            if c not in (1, -1):
                raise DivisionNotExact("negative power of a non-unit coefficient")
            return LaurentPoly._raw({_mono_pow(m, k): c ** (-k)})
        result = LaurentPoly.const(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __floordiv__(self, other) -> "LaurentPoly":
        return exact_div(self, _coerce(other))

    # presentation -------------------------------------------------------

    def sorted_terms(self) -> list[tuple[Monomial, int]]:
        return sorted(self._terms.items(), key=lambda mc: _mono_key(mc[0]), reverse=True)

    def __str__(self) -> str:
        return to_text(self)

    def __repr__(self) -> str:
        return f"LaurentPoly({to_text(self)!r})"


def _coerce(v) -> LaurentPoly:
    if isinstance(v, LaurentPoly):
        return v
    if isinstance(v, int):
        return LaurentPoly.const(v)
    if isinstance(v, Var):
        return LaurentPoly.var(v)
    raise TypeError(f"cannot use {type(v).__name__} as a Laurent polynomial")


ZERO = LaurentPoly.const(0)
ONE = LaurentPoly.const(1)


def add(p, q) -> LaurentPoly:
    return _coerce(p) + _coerce(q)


def sub(p, q) -> LaurentPoly:
    return _coerce(p) - _coerce(q)


def mul(p, q) -> LaurentPoly:
    return _coerce(p) * _coerce(q)


# ---------------------------------------------------------------------------
# exact division


def exact_div(p, q) -> LaurentPoly:
    """Return ``r`` with ``r * q == p``; raise DivisionNotExact if no Laurent quotient exists."""
    p, q = _coerce(p), _coerce(q)
    if not q._terms:
        raise ZeroDivisionError("division by the zero polynomial")
    if not p._terms:
        return ZERO
    if len(q._terms) == 1:
        ((mq, cq),) = q._terms.items()
        inv = _mono_pow(mq, -1)
        out = {}
        for m, c in p._terms.items():
            quo, rem = divmod(c, cq)
            if rem:
                raise DivisionNotExact(f"coefficient {c} not divisible by {cq}")
            out[_mono_mul(m, inv)] = quo
        return LaurentPoly._raw(out)

    variables = sorted(p.variables() | q.variables())
    index = {v: k for k, v in enumerate(variables)}
    nv = len(variables)

    def dense(poly):
        rows = {}
        for m, c in poly._terms.items():
            vec = [0] * nv
            for v, e in m:
                vec[index[v]] = e
            rows[tuple(vec)] = c
        lo = [min(vec[k] for vec in rows) for k in range(nv)]
        shifted = {tuple(a - b for a, b in zip(vec, lo)): c for vec, c in rows.items()}
        return shifted, lo

    pd, plo = dense(p)
    qd, qlo = dense(q)

    def gkey(vec):
        return (sum(vec), vec)

    q_lead = max(qd, key=gkey)
    q_lc = qd[q_lead]
    q_rest = [(vec, c) for vec, c in qd.items() if vec != q_lead]

    # quick necessary conditions: total degree and per-variable ranges
    if sum(max(vec[k] for vec in pd) for k in range(nv)) < sum(max(vec[k] for vec in qd) for k in range(nv)):
        raise DivisionNotExact("divisor has larger degree")

    rem = dict(pd)
    heap = [(-sum(vec), tuple(-e for e in vec)) for vec in rem]
    heapq.heapify(heap)
    quotient: dict = {}
    while rem:
        nd, nvec = heapq.heappop(heap)
        lead = tuple(-e for e in nvec)
        c = rem.get(lead)
        if c is None:
            continue
        shift = tuple(a - b for a, b in zip(lead, q_lead))
        if min(shift) < 0:
            raise DivisionNotExact("leading term not divisible")
        t, r = divmod(c, q_lc)
        if r:
            raise DivisionNotExact("leading coefficient not divisible")
        quotient[shift] = t
        del rem[lead]
        for vec, cq in q_rest:
            target = tuple(a + b for a, b in zip(vec, shift))
            s = rem.get(target, 0) - t * cq
            if s:
                if target not in rem:
                    heapq.heappush(heap, (-sum(target), tuple(-e for e in target)))
                rem[target] = s
            else:
                rem.pop(target, None)

    offset = [a - b for a, b in zip(plo, qlo)]
    out = {}
    for vec, c in quotient.items():
        mono = tuple((variables[k], e + o) for k, (e, o) in enumerate(zip(vec, offset)) if e + o)
        out[mono] = c
    return LaurentPoly._raw(out)


# ---------------------------------------------------------------------------
# substitution


def substitute(p, assignment: Mapping[Var, Union[LaurentPoly, int, Var]]) -> LaurentPoly:
    """Simultaneous substitution ``v -> assignment[v]``; unmentioned variables stay."""
    p = _coerce(p)
    images = {v: _coerce(val) for v, val in assignment.items()}
    if not images:
        return p

    # variables that occur with negative exponent and whose image is not invertible
    need: dict[Var, int] = {}
    for m in p._terms:
        for v, e in m:
            if e < 0 and v in images:
                img = images[v]
                if img.is_zero():
                    raise NegativePowerOfZero(f"{v} -> 0 but occurs with exponent {e}")
                if not _is_unit(img):
                    need[v] = max(need.get(v, 0), -e)

    powers: dict = {}

    def power(v, k):
        key = (v, k)
        val = powers.get(key)
        if val is None:
            val = images[v] ** k
            powers[key] = val
        return val

    total: dict = {}
    for m, c in p._terms.items():
        kept = []
        factor = LaurentPoly._raw({(): c})
        present = set()
        for v, e in m:
            if v in images:
                present.add(v)
                factor = factor * power(v, e + need.get(v, 0))
                if not factor._terms:
                    break
            else:
                kept.append((v, e))
        for v, k in need.items():
            # clear the common denominator in terms where v is absent
            if v not in present and factor._terms:
                factor = factor * power(v, k)
        if not factor._terms:
            continue
        if kept:
            factor = factor * LaurentPoly._raw({tuple(kept): 1})
        for mm, cc in factor._terms.items():
            s = total.get(mm, 0) + cc
            if s:
                total[mm] = s
            else:
                del total[mm]
    numer = LaurentPoly._raw(total)
    if not need:
        return numer
    denom = ONE
    for v, k in sorted(need.items()):
        denom = denom * power(v, k)
    return exact_div(numer, denom)


def _is_unit(poly: LaurentPoly) -> bool:
    if len(poly._terms) != 1:
        return False
    (c,) = poly._terms.values()
    return c in (1, -1)


def all_ones(p) -> int:
    """Value at every variable equal to 1."""
    return sum(_coerce(p)._terms.values())


# ---------------------------------------------------------------------------
# inspection


@dataclass(frozen=True)
class CoefficientProfile:
    count: int
    coefficients: Counter
    face_range: tuple[int, int] | None
    edge_range: tuple[int, int] | None

    @property
    def all_ones(self) -> bool:
        return set(self.coefficients) <= {1}


def term_count(p) -> int:
    return len(_coerce(p)._terms)


def coefficient_profile(p) -> CoefficientProfile:
    p = _coerce(p)
    coeffs = Counter(p._terms.values())
    face = [0] if p._terms else []
    edges = [0] if p._terms else []
    # variables absent from a monomial count as exponent 0
    face_vars = {v for v in p.variables() if v.kind != EDGE}
    edge_vars = {v for v in p.variables() if v.kind == EDGE}
    for m in p._terms:
        d = dict(m)
        face.extend(d.get(v, 0) for v in face_vars)
        edges.extend(d.get(v, 0) for v in edge_vars)
    return CoefficientProfile(
        count=len(p._terms),
        coefficients=coeffs,
        face_range=(min(face), max(face)) if face else None,
        edge_range=(min(edges), max(edges)) if edges else None,
    )


# ---------------------------------------------------------------------------
# text and JSON forms


def _mono_text(m: Monomial) -> str:
    return " * ".join(str(v) if e == 1 else f"{v}^{e}" for v, e in m)


def to_text(p) -> str:
    p = _coerce(p)
    if not p._terms:
        return "0"
    parts = []
    for k, (m, c) in enumerate(p.sorted_terms()):
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        if not m:
            body = str(mag)
        elif mag == 1:
            body = _mono_text(m)
        else:
            body = f"{mag} * {_mono_text(m)}"
        if k == 0:
            parts.append(body if sign == "+" else f"-{body}")
        else:
            parts.append(f"{sign} {body}")
    return " ".join(parts)


_TOKEN = re.compile(r"\s*(?:(?P<var>[xabcdz])\[\s*(?P<i>-?\d+)\s*,\s*(?P<j>-?\d+)\s*\](?:\^(?P<e>-?\d+))?|(?P<num>\d+)|(?P<op>[-+*]))")


def parse(text: str) -> LaurentPoly:
    """Inverse of :func:`to_text`; accepts ``*`` products, ``^`` exponents and ``+``/``-``."""
    text = text.strip()
    if text == "0":
        return ZERO
    pos = 0
    total = ZERO
    sign = 1
    coeff = 1
    factors: list[tuple[Var, int]] = []
    seen_item = False

    def flush():
        nonlocal total, sign, coeff, factors, seen_item
        if not seen_item:
            raise ValueError(f"empty term in {text!r}")
        total = total + LaurentPoly.monomial(factors, sign * coeff)
        sign, coeff, factors, seen_item = 1, 1, [], False

    expect_operand = True
    while pos < len(text):
        mt = _TOKEN.match(text, pos)
        if not mt or mt.end() == pos:
            raise ValueError(f"cannot parse {text!r} at position {pos}")
        pos = mt.end()
        if mt.group("op"):
            op = mt.group("op")
            if op == "*":
                if expect_operand:
                    raise ValueError(f"dangling '*' in {text!r}")
                expect_operand = True
                continue
            if seen_item:
                flush()
            elif not expect_operand:
                raise ValueError(f"unexpected {op!r} in {text!r}")
            sign = -sign if op == "-" else sign
            expect_operand = True
            continue
        if not expect_operand:
            # juxtaposition without operator starts nothing new; treat as error
            raise ValueError(f"missing operator in {text!r}")
        if mt.group("num"):
            coeff *= int(mt.group("num"))
        else:
            e = int(mt.group("e")) if mt.group("e") else 1
            factors.append((var_from_name(mt.group("var"), int(mt.group("i")), int(mt.group("j"))), e))
        seen_item = True
        expect_operand = False
    flush()
    return total


def to_json(p) -> dict:
    p = _coerce(p)
    return {
        "terms": [
            [c, [[v.q, v.i, v.j, e] for v, e in m]]
            for m, c in p.sorted_terms()
        ]
    }


def from_json(data: Mapping) -> LaurentPoly:
    total = ZERO
    for c, factors in data["terms"]:
        total = total + LaurentPoly.monomial([(var_from_name(q, int(i), int(j)), int(e)) for q, i, j, e in factors], int(c))
    return total


def dumps(p) -> str:
    return json.dumps(to_json(p), separators=(",", ":"))
