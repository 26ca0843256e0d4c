"""Verification suites shared by the command line and the acceptance tests.

Every ``check_*`` function returns a list of problem strings; empty means the
instance passed.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .analysis import (
    SimplifyingAssumptionViolated,
    full_degree_vertices,
    matching_from_height,
    propp_height,
    recover_edge_exponents,
    verify_condensation,
    vertex_weight_sums,
)
from .graph import build_subgraph, check_invariants
from .lattice import (
    HeightFunction,
    LatticePoint,
    builtin_height,
    cone_upper_points,
    gale_robinson_height,
    p_value,
    running_example_height,
    validate_height,
)
from .laurent import coefficient_profile
from .matching import enumerate_matchings, matching_exponents, matching_polynomial
from .recurrence import EvalContext, eval_f
from .sampler import chi_square_uniformity, plan
from .transforms import (
    is_local_minimum,
    renewal_coherent,
    split_vertex,
    urban_renewal,
)

FAMILY_NAMES = ("aztec", "fortress", "douglass", "blum", "gr412", "gr512", "running")


def family_height(name: str) -> HeightFunction:
    if name == "gr412":
        return gale_robinson_height(4, 1, 2)
    if name == "gr512":
        return gale_robinson_height(5, 1, 2)
    if name == "running":
        return running_example_height()
    return builtin_height(name)


def suite_heights(family: str = "all", perturbations: int = 0, seed: int = 0) -> list[tuple[str, HeightFunction]]:
    names = [n for n in FAMILY_NAMES if n != "running"] if family == "all" else [family]
    out = [(n, family_height(n)) for n in names]
    rng = random.Random(seed)
    for k in range(perturbations):
        out.append(random_perturbation(rng, k))
    return out


def random_perturbation(rng: random.Random, tag=0) -> tuple[str, HeightFunction]:
    """A built-in height with one local extremum near the origin moved by 2."""
    while True:
        name = rng.choice(FAMILY_NAMES[:6])
        h = family_height(name)
        i, j = rng.randint(-2, 2), rng.randint(-2, 2)
        if is_local_minimum(h, (i, j)):
            n = h(i, j) + 2
        elif all(h(a, b) == h(i, j) - 1 for a, b in ((i + 1, j), (i - 1, j), (i, j + 1), (i, j - 1))):
            n = h(i, j) - 2
        else:
            continue
        h2 = h.with_overrides({(i, j): n})
        if validate_height(h2, (i - 3, i + 3, j - 3, j + 3)).valid:
            return f"{name}+[{i},{j},{n}]#{tag}", h2


def suite_apexes(h: HeightFunction, max_cone: int = 10, radius: int = 1, centre=(0, 0)) -> list[LatticePoint]:
    """Apexes above a small patch of faces with 1 <= |U n C| <= max_cone."""
    out = []
    ci, cj = centre
    for i in range(ci - radius, ci + radius + 1):
        for j in range(cj - radius, cj + radius + 1):
            n = h(i, j) + 2
            while True:
                size = len(cone_upper_points(h, (n, i, j)))
                if size > max_cone:
                    break
                out.append(LatticePoint(n, i, j))
                n += 2
    return out


def perturbation_centre(name: str) -> tuple[int, int]:
    if "+[" not in name:
        return 0, 0
    i, j, _ = name.split("+[")[1].split("]")[0].split(",")
    return int(i), int(j)


@dataclass
class SuiteReport:
    name: str
    instances: int = 0
    failures: list = field(default_factory=list)
    skipped: int = 0

    @property
    def ok(self) -> bool:
        return not self.failures and self.instances > 0

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        extra = f", {self.skipped} skipped" if self.skipped else ""
        return f"{status} {self.name}: {self.instances} instances, {len(self.failures)} failures{extra}"


# ---------------------------------------------------------------------------
# single-instance checks


def check_main_theorem(h: HeightFunction, apex) -> list[str]:
    G = build_subgraph(h, apex)
    problems = [f"invariant: {p}" for p in check_invariants(G)]
    Ms = list(enumerate_matchings(G))
    poly = matching_polynomial(G, matchings=Ms)
    f = eval_f(EvalContext(h), apex)
    if poly != f:
        problems.append(f"m(G) != f{tuple(apex)}")
    prof = coefficient_profile(poly)
    if not prof.all_ones:
        problems.append(f"coefficients {dict(prof.coefficients)}")
    for M in Ms:
        ev = matching_exponents(G, M)
        if any(not -1 <= e <= 3 for e in ev.face_exp.values()):
            problems.append(f"face exponent out of range: {sorted(set(ev.face_exp.values()))}")
            break
        if any(d not in (0, 1) for d in ev.edge_exp.values()):
            problems.append("edge exponent outside {0, 1}")
            break
    return problems


def check_split(G, v: int, axis: int, size=None) -> list[str]:
    before = matching_polynomial(G)
    after = matching_polynomial(split_vertex(G, v, axis, size))
    return [] if before == after else [f"split at {G.vertex_keys[v]} changed m(G)"]


def renewable_faces(G) -> list:
    return [f.key for f in G.closed_faces if len(f.edges) == 4 and all(G.edges[e].label is not None for e in f.edges)]


def check_renewal(G, face) -> list[str]:
    G2, sub = urban_renewal(G, face)
    if sub.apply(matching_polynomial(G2)) != matching_polynomial(G):
        return [f"renewal at {face} changed m(G)"]
    return []


def check_condensation(h: HeightFunction, apex) -> list[str]:
    return verify_condensation(h, apex).problems


def check_recovery(h: HeightFunction, apex) -> list[str]:
    G = build_subgraph(h, apex)
    seen = {}
    problems = []
    for M in enumerate_matchings(G):
        ev = matching_exponents(G, M)
        if recover_edge_exponents(G, ev.face_exp) != ev.edge_exp:
            problems.append("recovered edges differ")
        key = tuple(sorted(ev.face_exp.items()))
        if key in seen:
            problems.append("two matchings share a face-exponent vector")
        seen[key] = M
    return problems


def check_heights(h: HeightFunction, apex) -> list[str]:
    G = build_subgraph(h, apex)
    problems = []
    sums = vertex_weight_sums(G, full_degree_vertices(G))
    if any(s != 1 for s in sums.values()):
        problems.append("vertex weight sum differs from 1")
    heights = set()
    count = 0
    for M in enumerate_matchings(G):
        H = propp_height(G, M)
        if matching_from_height(G, H) != M:
            problems.append("height does not determine the matching")
        heights.add(tuple(sorted(H.items())))
        count += 1
    if len(heights) != count:
        problems.append("two matchings share a height function")
    return problems


def check_sampler(h: HeightFunction, apex, draws: int = 20000, seed: int = 0, alpha: float = 0.001) -> list[str]:
    problems = []
    state = plan(h, apex)
    if state.steps != len(cone_upper_points(h, apex)):
        problems.append(f"{state.steps} elevation steps for |U n C| = {len(cone_upper_points(h, apex))}")
    res = chi_square_uniformity(h, apex, draws, seed)
    if not res.passed(alpha):
        problems.append(f"chi-square p = {res.p_value:.2e}")
    return problems


# ---------------------------------------------------------------------------
# suites


def _instances(family, max_cone, perturbations, seed):
    for name, h in suite_heights(family, perturbations, seed):
        for apex in suite_apexes(h, max_cone, centre=perturbation_centre(name)):
            yield name, h, apex


def run_main_theorem(family="all", max_cone=10, perturbations=0, seed=0) -> SuiteReport:
    rep = SuiteReport("main-theorem")
    for name, h, apex in _instances(family, max_cone, perturbations, seed):
        rep.instances += 1
        for p in check_main_theorem(h, apex):
            rep.failures.append(f"{name} {tuple(apex)}: {p}")
    return rep


def run_condensation(family="all", max_cone=10, perturbations=0, seed=0) -> SuiteReport:
    rep = SuiteReport("condensation")
    for name, h, apex in _instances(family, max_cone, perturbations, seed):
        try:
            problems = check_condensation(h, apex)
        except SimplifyingAssumptionViolated:
            rep.skipped += 1
            continue
        rep.instances += 1
        rep.failures += [f"{name} {tuple(apex)}: {p}" for p in problems]
    return rep


def run_renewal(family="all", max_cone=10, perturbations=0, seed=0, limit=None) -> SuiteReport:
    rep = SuiteReport("renewal")
    for name, h, apex in _instances(family, max_cone, perturbations, seed):
        G = build_subgraph(h, apex)
        for face in renewable_faces(G):
            rep.instances += 1
            rep.failures += [f"{name} {tuple(apex)}: {p}" for p in check_renewal(G, face)]
            if is_local_minimum(h, face) and h(*face) + 2 < p_value(apex, face) and not renewal_coherent(h, apex, face):
                rep.failures.append(f"{name} {tuple(apex)}: renewal at {face} does not give G(h')")
            if limit and rep.instances >= limit:
                return rep
    return rep


def _per_apex(label, check, family, max_cone, perturbations, seed, **kw) -> SuiteReport:
    rep = SuiteReport(label)
    for name, h, apex in _instances(family, max_cone, perturbations, seed):
        rep.instances += 1
        rep.failures += [f"{name} {tuple(apex)}: {p}" for p in check(h, apex, **kw)]
    return rep


def run_recovery(family="all", max_cone=10, perturbations=0, seed=0) -> SuiteReport:
    return _per_apex("recovery", check_recovery, family, max_cone, perturbations, seed)


def run_heights(family="all", max_cone=10, perturbations=0, seed=0) -> SuiteReport:
    return _per_apex("heights", check_heights, family, max_cone, perturbations, seed)


def run_sampler(family="all", max_cone=10, perturbations=0, seed=0, draws=20000, max_matchings=64) -> SuiteReport:
    rep = SuiteReport("sampler")
    for name, h, apex in _instances(family, max_cone, perturbations, seed):
        if eval_f(EvalContext(h, (1, 1, 1, 1), True), apex).constant_value() > max_matchings:
            rep.skipped += 1
            continue
        rep.instances += 1
        rep.failures += [f"{name} {tuple(apex)}: {p}" for p in check_sampler(h, apex, draws, seed)]
    return rep


SUITES = {
    "main-theorem": run_main_theorem,
    "renewal": run_renewal,
    "condensation": run_condensation,
    "recovery": run_recovery,
    "heights": run_heights,
    "sampler": run_sampler,
}
