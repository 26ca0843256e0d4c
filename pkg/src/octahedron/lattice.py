"""Index spaces, cones and height functions.

A height function ``h`` assigns an integer to every face ``(i, j)`` of the
plane.  The points ``(h(i, j), i, j)`` form the initial surface on which the
octahedron recurrence is seeded; everything strictly above it is computed.

Height functions are described finitely: a periodic base pattern (or one of a
few closed-form bases) plus a finite table of overrides, optionally capped by
the cone function of an apex (the truncation ``min(h, p)``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, NamedTuple


class LatticePoint(NamedTuple):
    n: int
    i: int
    j: int

    def check(self) -> "LatticePoint":
        if (self.n + self.i + self.j) % 2:
            raise ParityError(f"{tuple(self)} has n+i+j odd")
        return self


class FacePoint(NamedTuple):
    i: int
    j: int


class EdgeLabel(NamedTuple):
    i: int
    j: int
    q: str

    def check(self) -> "EdgeLabel":
        if self.q not in "abcd" or len(self.q) != 1:
            raise ValueError(f"bad edge kind {self.q!r}")
        if (self.i + self.j) % 2 != 1:
            raise ParityError(f"edge label {tuple(self)} needs i+j odd")
        return self

    def __str__(self) -> str:
        return f"{self.q}[{self.i},{self.j}]"


class ParityError(ValueError):
    pass


class HeightError(ValueError):
    """A height function fails the unit-step or parity condition."""


class ScanBoundExceeded(RuntimeError):
    """Cone scan ran past the guard radius; the height is not proper."""


class ApexNotAboveSurface(ValueError):
    pass


# ---------------------------------------------------------------------------
# Cones


def p_value(apex: LatticePoint, face: tuple[int, int]) -> int:
    return apex[0] - abs(face[0] - apex[1]) - abs(face[1] - apex[2])


def cone_membership(apex: LatticePoint, point: LatticePoint) -> str:
    """Classify ``point`` as ``"inner"``, ``"boundary"`` or ``"outside"`` the cone of ``apex``."""
    LatticePoint(*apex).check()
    LatticePoint(*point).check()
    p = p_value(apex, (point[1], point[2]))
    if point[0] < p:
        return "inner"
    if point[0] == p:
        return "boundary"
    return "outside"


# ---------------------------------------------------------------------------
# Bases


@dataclass(frozen=True)
class PeriodicTable:
    """``h(i, j) = table[i mod p1][j mod p2] + c1*i + c2*j``."""

    period: tuple[int, int]
    table: tuple[tuple[int, ...], ...]
    drift: tuple[int, int] = (0, 0)
    name: str | None = None

    def __post_init__(self):
        p1, p2 = self.period
        if p1 < 1 or p2 < 1:
            raise ValueError("period entries must be positive")
        table = tuple(tuple(int(v) for v in row) for row in self.table)
        if len(table) != p1 or any(len(row) != p2 for row in table):
            raise ValueError(f"table shape must be {p1}x{p2}")
        object.__setattr__(self, "table", table)

    def value(self, i: int, j: int) -> int:
        p1, p2 = self.period
        c1, c2 = self.drift
        return self.table[i % p1][j % p2] + c1 * i + c2 * j

    def growth_bound(self) -> tuple[float, float] | None:
        # integer drift of size >= 1 makes h + |i| + |j| bounded along a ray
        if self.drift != (0, 0):
            return None
        return 0.0, float(-min(min(row) for row in self.table))

    def fundamental_window(self) -> tuple[int, int, int, int]:
        return 0, self.period[0], 0, self.period[1]

    def to_json(self):
        if self.name is not None:
            return self.name
        return {
            "periodic": {
                "period": list(self.period),
                "table": [list(row) for row in self.table],
                "drift": list(self.drift),
            }
        }


@dataclass(frozen=True)
class GaleRobinson:
    """Slab ``-2k < k n + (2a-k) i + (2b-k) j <= 0`` with ``n = i + j (mod 2)``."""

    k: int
    a: int
    b: int

    def __post_init__(self):
        if not (0 < self.a < self.k and 0 < self.b < self.k):
            raise ValueError(f"need 0 < a, b < k, got k={self.k} a={self.a} b={self.b}")

    def linear(self, n: int, i: int, j: int) -> int:
        return self.k * n + (2 * self.a - self.k) * i + (2 * self.b - self.k) * j

    def value(self, i: int, j: int) -> int:
        k = self.k
        rest = (2 * self.a - k) * i + (2 * self.b - k) * j
        # largest n with k*n + rest <= 0, then step down to the right parity
        n = (-rest) // k
        if (n - i - j) % 2:
            n -= 1
        return n

    def growth_bound(self) -> tuple[float, float]:
        slope = max(abs(2 * self.a - self.k), abs(2 * self.b - self.k)) / self.k
        return slope, 2.0

    def fundamental_window(self) -> tuple[int, int, int, int]:
        return -2 * self.k, 2 * self.k, -2 * self.k, 2 * self.k

    def to_json(self):
        return {"gale_robinson": [self.k, self.a, self.b]}


@dataclass(frozen=True)
class AbsDiagonal:
    """``h(i, j) = |i + sign * j|``; ``sign=1`` is the running example ``|i+j|``."""

    sign: int = 1

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError("sign must be 1 or -1")

    def value(self, i: int, j: int) -> int:
        return abs(i + self.sign * j)

    def growth_bound(self) -> tuple[float, float]:
        return 0.0, 0.0

    def fundamental_window(self) -> tuple[int, int, int, int]:
        return -3, 3, -3, 3

    def to_json(self):
        return {"abs_diagonal": self.sign}


Base = PeriodicTable | GaleRobinson | AbsDiagonal


def _family_tables() -> dict[str, PeriodicTable]:
    aztec = PeriodicTable((2, 2), ((0, -1), (-1, 0)), name="aztec")
    fortress = PeriodicTable((2, 2), ((0, 1), (-1, 0)), name="fortress")

    def douglass(i, j):
        s = (i + j) % 4
        return {0: 0, 2: 0, 1: 1, 3: -1}[s]

    def blum(i, j):
        if (i + j) % 2 == 0:
            return 0
        return 1 if j % 4 in (0, 1) else -1

    return {
        "aztec": aztec,
        "fortress": fortress,
        "douglass": PeriodicTable(
            (4, 4), tuple(tuple(douglass(i, j) for j in range(4)) for i in range(4)), name="douglass"
        ),
        "blum": PeriodicTable(
            (2, 4), tuple(tuple(blum(i, j) for j in range(4)) for i in range(2)), name="blum"
        ),
    }


FAMILIES = _family_tables()


# ---------------------------------------------------------------------------
# Height functions


@dataclass(frozen=True)
class HeightFunction:
    base: Base
    overrides: tuple[tuple[tuple[int, int], int], ...] = ()
    cap: LatticePoint | None = None
    _lookup: dict = field(default=None, compare=False, repr=False, hash=False)

    def __post_init__(self):
        items = self.overrides.items() if isinstance(self.overrides, Mapping) else self.overrides
        ov = tuple(sorted(((int(i), int(j)), int(n)) for (i, j), n in items))
        object.__setattr__(self, "overrides", ov)
        object.__setattr__(self, "_lookup", dict(ov))
        if self.cap is not None:
            object.__setattr__(self, "cap", LatticePoint(*self.cap))

    def __call__(self, i: int, j: int) -> int:
        v = self._lookup.get((i, j))
        if v is None:
            v = self.base.value(i, j)
        if self.cap is not None:
            v = min(v, p_value(self.cap, (i, j)))
        return v

    def with_overrides(self, extra: Mapping[tuple[int, int], int]) -> "HeightFunction":
        ov = dict(self._lookup)
        ov.update(extra)
        return HeightFunction(self.base, tuple(ov.items()), self.cap)

    def contains(self, point: LatticePoint) -> str:
        """Where ``point`` sits relative to the surface: ``"surface"``, ``"above"`` or ``"below"``."""
        h = self(point[1], point[2])
        if point[0] == h:
            return "surface"
        return "above" if point[0] > h else "below"

    def guard_radius(self, apex: LatticePoint) -> int:
        gb = self.base.growth_bound()
        if gb is None:
            raise ScanBoundExceeded("base drift makes the height function improper")
        slope, const = gb
        reach = abs(apex[1]) + abs(apex[2])
        radius = (apex[0] + const + slope * reach) / (1.0 - slope)
        far = max((abs(i - apex[1]) + abs(j - apex[2]) for (i, j), _ in self.overrides), default=0)
        return int(math.ceil(radius)) + far + 4

    def to_json(self) -> dict:
        out = {"base": self.base.to_json(), "overrides": [[i, j, n] for (i, j), n in self.overrides]}
        if self.cap is not None:
            out["cap"] = list(self.cap)
        return out

    @classmethod
    def from_json(cls, data: Mapping) -> "HeightFunction":
        base = parse_base(data["base"])
        overrides = []
        for entry in data.get("overrides", []):
            if len(entry) != 3:
                raise HeightError(f"override {entry!r} must be [i, j, n]")
            i, j, n = (int(v) for v in entry)
            overrides.append(((i, j), n))
        h = cls(base, tuple(overrides), LatticePoint(*data["cap"]) if data.get("cap") else None)
        report = _override_report(h)
        if not report.valid:
            raise HeightError("; ".join(report.messages()))
        return h


def parse_base(spec) -> Base:
    if isinstance(spec, str):
        try:
            return FAMILIES[spec.lower()]
        except KeyError:
            raise HeightError(f"unknown family {spec!r}") from None
    if isinstance(spec, Mapping) and len(spec) == 1:
        ((key, val),) = spec.items()
        if key == "gale_robinson":
            k, a, b = val
            return GaleRobinson(int(k), int(a), int(b))
        if key == "abs_diagonal":
            return AbsDiagonal(int(val))
        if key == "periodic":
            return PeriodicTable(
                tuple(val["period"]),
                tuple(tuple(row) for row in val["table"]),
                tuple(val.get("drift", (0, 0))),
            )
    raise HeightError(f"cannot parse base {spec!r}")


def builtin_height(family: str) -> HeightFunction:
    try:
        return HeightFunction(FAMILIES[family.lower()])
    except KeyError:
        raise ValueError(f"unknown family {family!r}") from None


def gale_robinson_height(k: int, a: int, b: int) -> HeightFunction:
    return HeightFunction(GaleRobinson(k, a, b))


def running_example_height() -> HeightFunction:
    return HeightFunction(AbsDiagonal(1))


def truncate_height(h: HeightFunction, apex: LatticePoint) -> HeightFunction:
    """``min(h, p_apex)``; a pseudo-height function agreeing with ``h`` on the faces of G(apex)."""
    apex = LatticePoint(*apex).check()
    if h(apex.i, apex.j) >= apex.n:
        raise ApexNotAboveSurface(f"{tuple(apex)} is not above the surface")
    cap = apex
    if h.cap is not None:
        # nested truncation: keep the tighter cap only when it dominates pointwise
        if cone_membership(h.cap, apex) == "outside":
            raise ValueError("apex lies outside the existing truncation cone")
    return HeightFunction(h.base, h.overrides, cap)


# ---------------------------------------------------------------------------
# Validation


@dataclass
class ValidationReport:
    parity: list[tuple[int, int, int]] = field(default_factory=list)
    steps: list[tuple[tuple[int, int], tuple[int, int], int]] = field(default_factory=list)
    proper: bool = True

    @property
    def valid(self) -> bool:
        return not self.parity and not self.steps and self.proper

    def messages(self) -> list[str]:
        out = [f"parity: h{(i, j)}={n} but i+j is {'odd' if (i + j) % 2 else 'even'}" for i, j, n in self.parity]
        out += [f"step: |h{a} - h{b}| = {d}" for a, b, d in self.steps]
        if not self.proper:
            out.append("improper: h + |i| + |j| does not grow")
        return out


def _check_faces(h: HeightFunction, faces: Iterable[tuple[int, int]], report: ValidationReport) -> None:
    seen_pairs = set()
    for i, j in faces:
        v = h(i, j)
        if (v - i - j) % 2 and (i, j, v) not in report.parity:
            report.parity.append((i, j, v))
        for di, dj in ((1, 0), (0, 1), (-1, 0), (0, -1)):
            a, b = (i, j), (i + di, j + dj)
            key = (min(a, b), max(a, b))
            if key in seen_pairs:
                continue
            seen_pairs.add(key)
            d = abs(h(*b) - v)
            if d != 1:
                report.steps.append((key[0], key[1], d))


def _override_report(h: HeightFunction) -> ValidationReport:
    report = ValidationReport()
    _check_faces(h, [ij for ij, _ in h.overrides], report)
    return report


def window_faces(window: tuple[int, int, int, int]) -> Iterator[tuple[int, int]]:
    i0, i1, j0, j1 = window
    for i in range(i0, i1 + 1):
        for j in range(j0, j1 + 1):
            yield i, j


def validate_height(h: HeightFunction, window: tuple[int, int, int, int]) -> ValidationReport:
    """Report parity and unit-step violations inside ``window`` (inclusive bounds).

    The base is checked on its fundamental window too, so a periodic base that
    is broken anywhere is reported even if ``window`` misses the defect.
    Overrides are always checked together with their four neighbours.
    """
    if window[0] > window[1] or window[2] > window[3]:
        raise ValueError("empty window")
    report = ValidationReport()
    _check_faces(h, window_faces(window), report)
    base_only = HeightFunction(h.base)
    _check_faces(base_only, window_faces(h.base.fundamental_window()), report)
    _check_faces(h, [ij for ij, _ in h.overrides], report)
    if h.cap is None:
        report.proper = h.base.growth_bound() is not None
    return report


# ---------------------------------------------------------------------------
# Cone scans


def _ring(i0: int, j0: int, d: int) -> Iterator[tuple[int, int]]:
    if d == 0:
        yield i0, j0
        return
    for t in range(d):
        yield i0 + d - t, j0 + t
        yield i0 - t, j0 + d - t
        yield i0 - d + t, j0 - t
        yield i0 + t, j0 - d + t


def closed_faces(h: HeightFunction, apex: LatticePoint) -> list[tuple[int, int]]:
    """Faces with ``h < p_apex``, scanned ring by ring from the apex.

    Closed faces are star-shaped around the apex face, so the first empty ring
    ends the scan.
    """
    n0, i0, j0 = apex
    guard = h.guard_radius(apex)
    out = []
    d = 0
    while True:
        found = [(i, j) for i, j in _ring(i0, j0, d) if h(i, j) < n0 - d]
        if not found:
            return sorted(out)
        out.extend(found)
        d += 1
        if d > guard:
            raise ScanBoundExceeded(f"cone of {tuple(apex)} exceeds guard radius {guard}")


def cone_upper_points(h: HeightFunction, apex: LatticePoint) -> list[LatticePoint]:
    """Points of the cone strictly above the surface, sorted by ``(n, i, j)``."""
    apex = LatticePoint(*apex).check()
    pts = []
    for i, j in closed_faces(h, apex):
        top = p_value(apex, (i, j))
        for n in range(h(i, j) + 2, top + 1, 2):
            pts.append(LatticePoint(n, i, j))
    pts.sort()
    return pts
