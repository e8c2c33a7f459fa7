"""Identity suite: every structural relation of the diagram PROP and its action,
checked exactly and gathered into one deterministic report.
"""
from __future__ import annotations

import itertools
import logging
import random
import time
from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from .action import (
    CochainTensor,
    CohomologyReader,
    act,
    act_on_cohomology,
    act_pipeline,
    chain_map_defect,
    check_composition,
    degree_law_holds,
    placement_sign,
)
from .config import get_settings
from .diagram import (
    CATALOG,
    ChordDiagram,
    ChordLeaf,
    equals,
    from_dict as diagram_from_dict,
    generator,
    random_diagram,
    slide_variants,
    to_dict as diagram_to_dict,
)
from .errors import InputError, SchordError
from .frobenius import FrobeniusAlgebra, from_dict as algebra_from_dict, resolve
from .hochschild import (
    Cochain,
    Variant,
    beta_sharp,
    beta_sharp_inverse,
    center_dimension,
    cohomology,
    delta,
    dual_delta,
    from_dict as cochain_from_dict,
    random_cochain,
    reversal,
    reversal_defect,
)
from .linalg import RationalMatrix, field_from_spec, rank
from .placement import readings
from .prop import DiagramSum, as_sum, boundary, chain, compose, identity, permutation, tensor, tensor_all
from .schemas import SuiteConfig, dump_json

LOGGER = logging.getLogger(__name__)

KNOWN_TABLES = {
    "mat2": (1, 0, 0, 0),
    "dual_numbers": (2, 1, 1, 1),
}


@dataclass
class CheckResult:
    group: str
    check: str
    status: str
    detail: str = ""
    witness: Any = None
    seconds: float = 0.0

    def to_dict(self) -> Dict[str, Any]:
        result = {"group": self.group, "check": self.check, "status": self.status}
        if self.detail:
            result["detail"] = self.detail
        if self.witness is not None:
            result["witness"] = self.witness
        return result


class Suite:
    """Runs the selected check groups with seeded randomness."""

    def __init__(self, cfg: SuiteConfig):
        self.cfg = cfg
        self.seed = cfg.seed if cfg.seed is not None else get_settings().seed
        self.field = field_from_spec(cfg.field)
        self.results: List[CheckResult] = []
        self._algebras: Dict[str, FrobeniusAlgebra] = {}

    def rng(self, name: str) -> random.Random:
        return random.Random(f"{self.seed}:{name}")

    def count(self, name: str, fallback: int) -> int:
        value = getattr(self.cfg, name)
        return fallback if value is None else value

    def algebra(self, name: str) -> FrobeniusAlgebra:
        if name not in self._algebras:
            self._algebras[name] = resolve(name, self.field)
        return self._algebras[name]

    def record(self, group: str, check: str, passed: bool, detail: str = "", witness: Any = None,
               started: Optional[float] = None) -> bool:
        status = "pass" if passed else "fail"
        seconds = time.perf_counter() - started if started is not None else 0.0
        self.results.append(CheckResult(group, check, status, detail, None if passed else witness, seconds))
        log = LOGGER.info if passed else LOGGER.warning
        log("%s %s: %s%s", group, check, status, f" ({detail})" if detail else "")
        return passed

    def guarded(self, group: str, check: str, body: Callable[[], Tuple[bool, str, Any]]) -> None:
        started = time.perf_counter()
        try:
            passed, detail, witness = body()
        except SchordError as exc:
            passed, detail, witness = False, str(exc), exc.to_dict()
        self.record(group, check, passed, detail, witness, started)

    def random_inputs(self, alg: FrobeniusAlgebra, degrees: Sequence[int], rng: random.Random) -> List[Cochain]:
        return [random_cochain(alg, n, rng, max_degree=self.cfg.max_degree + 2) for n in degrees]

    def run(self) -> Dict[str, Any]:
        selected = self.cfg.checks or list(GROUPS)
        unknown = [name for name in selected if name not in GROUPS]
        if unknown:
            raise InputError(f"unknown check group(s): {', '.join(unknown)}", "checks")
        for name in selected:
            if self.cfg.mode == "cyclic" and name == "sullivan":
                continue
            if self.cfg.mode == "sullivan" and name not in SULLIVAN_GROUPS:
                continue
            LOGGER.info("running check group %s", name)
            GROUPS[name](self)
        failed = [r for r in self.results if r.status == "fail"]
        return {
            "seed": self.seed,
            "field": self.cfg.field,
            "passed": not failed,
            "summary": {"total": len(self.results), "failed": len(failed)},
            "results": [r.to_dict() for r in self.results],
        }


def _witness(diagram: Any = None, cochains: Optional[Sequence[Cochain]] = None, **extra: Any) -> Dict[str, Any]:
    payload: Dict[str, Any] = {}
    if isinstance(diagram, DiagramSum):
        payload["diagram"] = diagram.to_dict()
    elif isinstance(diagram, ChordDiagram):
        payload["diagram"] = diagram_to_dict(diagram)
    elif isinstance(diagram, str):
        payload["diagram"] = diagram
    if cochains:
        payload["cochains"] = [c.to_dict() for c in cochains]
    payload.update(extra)
    return payload


# ---------------------------------------------------------------------------
# diagram sums used throughout
# ---------------------------------------------------------------------------

def g(name: str) -> DiagramSum:
    return as_sum(generator(name))


def cyclic_catalog() -> Dict[str, DiagramSum]:
    names = ["cup", "star", "delta", "vee0", "vee"]
    result = {name: g(name) for name in names}
    result["id"] = identity(1)
    result["tau"] = permutation([2, 1])
    return result


def composable_pairs(catalog: Dict[str, DiagramSum]) -> List[Tuple[str, str]]:
    return [(a, b) for a, s in catalog.items() for b, t in catalog.items() if s.shape[0] == t.shape[1]]


def composite_pool() -> List[DiagramSum]:
    cat = cyclic_catalog()
    pool = list(cat.values())
    pool.append(tensor(cat["cup"], cat["id"]))
    pool.append(tensor(cat["id"], cat["vee0"]))
    pool.append(tensor(cat["delta"], cat["id"]))
    pool.append(tensor(cat["star"], cat["id"]))
    return pool


def random_composable(rng: random.Random, pool: Sequence[DiagramSum], length: int) -> List[DiagramSum]:
    """``length`` sums s_1..s_k with s_i composable after s_{i+1}."""
    chain_parts = [rng.choice(pool)]
    while len(chain_parts) < length:
        wanted = chain_parts[-1].shape[0]
        options = [s for s in pool if s.shape[1] == wanted]
        chain_parts.append(rng.choice(options))
    return chain_parts


# ---------------------------------------------------------------------------
# PROP axioms and generator identities
# ---------------------------------------------------------------------------

def _prop_axioms(suite: Suite) -> None:
    group = "prop-axioms"
    rng = suite.rng(group)
    samples = list(cyclic_catalog().items()) + [("reverse", g("reverse"))]
    for k in range(suite.cfg.random_diagrams):
        d = random_diagram(rng, max_dimension=3)
        samples.append((f"random-{k}", as_sum(d)))
    pool = composite_pool()
    for k in range(suite.count("composites", suite.cfg.random_diagrams)):
        samples.append((f"composite-{k}", compose(*random_composable(rng, pool, 2))))

    def boundary_squared():
        for name, s in samples:
            if not boundary(boundary(s)).is_zero():
                return False, f"boundary of boundary of {name} is nonzero", _witness(s)
        return True, f"{len(samples)} sums", None

    suite.guarded(group, "boundary-squared", boundary_squared)

    pairs = [random_composable(rng, pool, 2)
             for _ in range(suite.count("derivation_pairs", max(1, suite.cfg.random_diagrams)))]

    def derivation_law():
        for s, t in pairs:
            lhs = boundary(compose(s, t))
            tail = compose(s, boundary(t))
            rhs = compose(boundary(s), t) + (tail.scaled(-1) if (s.dimension or 0) % 2 else tail)
            if lhs != rhs:
                return False, "boundary is not a derivation of composition", {"s": s.to_dict(), "t": t.to_dict()}
        return True, f"{len(pairs)} pairs", None

    suite.guarded(group, "derivation-law", derivation_law)

    triples = [random_composable(rng, pool, 3)
               for _ in range(suite.count("triples", max(1, suite.cfg.random_diagrams // 2)))]

    def associativity():
        for s, t, u in triples:
            if compose(compose(s, t), u) != compose(s, compose(t, u)):
                return False, "composition is not associative", {
                    "s": s.to_dict(), "t": t.to_dict(), "u": u.to_dict()}
        return True, f"{len(triples)} triples", None

    suite.guarded(group, "associativity", associativity)

    def identity_laws():
        for name, s in cyclic_catalog().items():
            n, m = s.shape
            if compose(identity(m), s) != s or compose(s, identity(n)) != s:
                return False, f"identity law fails for {name}", _witness(s)
        return True, "", None

    suite.guarded(group, "identity-laws", identity_laws)

    def permutation_laws():
        perms = list(itertools.permutations([1, 2, 3]))
        for sigma in perms:
            for rho in perms:
                product = [sigma[rho[i] - 1] for i in range(3)]
                if compose(permutation(sigma), permutation(rho)) != permutation(product):
                    return False, f"perm{sigma} after perm{rho}", None
        return True, "all of S3 x S3", None

    suite.guarded(group, "permutation-laws", permutation_laws)


def generator_identities() -> Dict[str, Tuple[DiagramSum, DiagramSum]]:
    cat = cyclic_catalog()
    cup, vee0, tau, one = cat["cup"], cat["vee0"], cat["tau"], cat["id"]
    return {
        "boundary-star": (boundary(cat["star"]), cup - compose(cup, tau)),
        "boundary-vee": (boundary(cat["vee"]), vee0 - compose(tau, vee0)),
        "cup-associative": (compose(cup, tensor(cup, one)), compose(cup, tensor(one, cup))),
        "vee0-coassociative": (compose(tensor(one, vee0), vee0), compose(tensor(vee0, one), vee0)),
        "frobenius-left": (compose(vee0, cup), compose(tensor(one, cup), tensor(vee0, one))),
        "frobenius-right": (compose(vee0, cup), chain(tau, tensor(cup, one), tensor(one, compose(tau, vee0)))),
    }


def _generator_identities(suite: Suite) -> None:
    group = "generator-identities"
    for name, (lhs, rhs) in generator_identities().items():
        suite.guarded(group, name, lambda lhs=lhs, rhs=rhs: (
            lhs == rhs, "", {"lhs": lhs.to_dict(), "rhs": rhs.to_dict()}))
    suite.guarded(group, "delta-squared", lambda: (
        compose(g("delta"), g("delta")).is_zero(), "", None))


# ---------------------------------------------------------------------------
# the action on cochains
# ---------------------------------------------------------------------------

def _degree_profiles(rng: random.Random, n: int, top: int, count: int) -> List[Tuple[int, ...]]:
    return [tuple(rng.randint(0, top) for _ in range(n)) for _ in range(count)]


def _action(suite: Suite) -> None:
    group = "action"
    catalog = cyclic_catalog()
    for alg_name in suite.cfg.algebras:
        alg = suite.algebra(alg_name)
        top = suite.cfg.action_degree
        for gen_name, s in catalog.items():
            rng = suite.rng(f"{group}:{alg_name}:{gen_name}")
            profiles = _degree_profiles(rng, s.shape[0], top, suite.cfg.samples)

            def chain_map(s=s, gen_name=gen_name, profiles=profiles, rng=rng):
                for degrees in profiles:
                    fs = suite.random_inputs(alg, degrees, rng)
                    defect = chain_map_defect(s, fs)
                    if not defect.is_zero():
                        return False, f"degrees {list(degrees)}", _witness(gen_name, fs)
                return True, f"{len(profiles)} samples", None

            suite.guarded(group, f"chain-map:{alg_name}:{gen_name}", chain_map)

            def degree_and_normalization(s=s, gen_name=gen_name, profiles=profiles, rng=rng):
                for degrees in profiles:
                    fs = suite.random_inputs(alg, degrees, rng)
                    if not degree_law_holds(s, fs):
                        return False, "degree law", _witness(gen_name, fs)
                    if not act(s, fs).is_normalized():
                        return False, "output not normalized", _witness(gen_name, fs)
                return True, "", None

            suite.guarded(group, f"degree-law:{alg_name}:{gen_name}", degree_and_normalization)

        compose_top = min(top, 2) if alg.dimension <= 2 else min(top, 1)
        for a, b in composable_pairs(catalog):
            s, t = catalog[a], catalog[b]
            rng = suite.rng(f"{group}:{alg_name}:{a}:{b}")

            def composition(s=s, t=t, a=a, b=b, rng=rng):
                for degrees in _degree_profiles(rng, t.shape[0], compose_top, 1):
                    fs = suite.random_inputs(alg, degrees, rng)
                    ok, _ = check_composition(s, t, fs)
                    if not ok:
                        return False, f"degrees {list(degrees)}", _witness(f"{a} o {b}", fs)
                return True, "", None

            suite.guarded(group, f"composition:{alg_name}:{a}:{b}", composition)


def _slides(suite: Suite) -> None:
    group = "slides"
    rng = suite.rng(group)
    alg = suite.algebra(suite.cfg.algebras[0])
    wanted = suite.count("slide_diagrams", max(1, suite.cfg.random_diagrams))
    diagrams: List[ChordDiagram] = []
    attempts = 0
    while len(diagrams) < wanted and attempts < 50 * wanted:
        attempts += 1
        d = random_diagram(rng, n=rng.randint(1, 2), max_dimension=2)
        if len(slide_variants(d)) > 1:
            diagrams.append(d)

    def invariance():
        for d in diagrams:
            degrees = [rng.randint(len(circle) - 1, len(circle) + 1) for circle in d.rooted().circles]
            fs = suite.random_inputs(alg, degrees, rng)
            x = CochainTensor.of(fs)
            base = act(DiagramSum.of(d, normalize=False), x)
            for variant in slide_variants(d):
                if act(DiagramSum.of(variant, normalize=False), x) != base:
                    return False, "slide changes the action", {
                        "diagram": diagram_to_dict(d), "variant": diagram_to_dict(variant),
                        "cochains": [c.to_dict() for c in fs]}
        return True, f"{len(diagrams)} diagrams", None

    suite.guarded(group, "slide-invariance", invariance)


EXAMPLE_DEGREES = (6, 8, 9, 5, 6)
EXAMPLE_SLOTS = ((3, 5), (2, 5, 7), (2, 3, 8), (), (3, 5))
EXAMPLE_READINGS = {
    1: [(5, 1), (5, 2), (3, 9), (2, 6), (5, 6)],
    2: [],
    3: [],
    4: [(1, 6), (1, 1), (1, 2), (3, 4), (3, 5), (3, 6), (3, 7), (4, 1), (4, 2), (4, 3), (4, 4), (4, 5),
        (5, 4), (2, 8), (2, 1), (1, 4), (3, 1), (2, 3), (2, 4)],
}
EXAMPLE_CHORDS = [
    [(2, 7), (5, 5)],
    [(1, 3), (3, 3)],
    [(3, 8), (4, 6), (5, 3)],
    [(1, 5), (2, 5), (3, 10)],
    [(2, 2), (2, 2), (2, 2)],
    [(2, 2), (3, 2)],
]
# cluster slots sum to 149 before the running index is taken off; the
# leftovers need 150 transpositions to reach output order
EXAMPLE_SLOT_SUM = 149
EXAMPLE_TRANSPOSITIONS = 150
EXAMPLE_SIGN = -1


def example_cells(d: ChordDiagram, degrees: Sequence[int], slots: Sequence[Sequence[int]]) -> List[List[Tuple[int, int]]]:
    """Cells (circle, slot), numbered from 1, holding the leaves of every chord."""
    r = d.rooted()
    cells: List[List[Tuple[int, int]]] = [[] for _ in r.arities]
    for i, circle in enumerate(r.circles):
        for u, cluster in enumerate(circle):
            slot = degrees[i] + 1 if u == 0 else slots[i][u - 1]
            for p in cluster:
                if isinstance(p, ChordLeaf):
                    cells[p.chord].append((i + 1, slot))
    return [sorted(c) for c in cells]


def _worked_example(suite: Suite) -> None:
    group = "worked-example"
    d = generator("worked_example")

    def signs():
        read = readings(d.rooted(), EXAMPLE_DEGREES, EXAMPLE_SLOTS)
        found = {k: [(i + 1, s) for i, s, _ in cells] for k, cells in read.items()}
        if found != EXAMPLE_READINGS:
            return False, "output readings differ", {"readings": {str(k): v for k, v in found.items()}}
        chords = example_cells(d, EXAMPLE_DEGREES, EXAMPLE_SLOTS)
        if chords != EXAMPLE_CHORDS:
            return False, "chord cells differ", {"chords": chords}
        offsets = [sum(EXAMPLE_DEGREES[:i]) for i in range(len(EXAMPLE_DEGREES))]
        slot_sum = sum(offsets[i] + j - 1 for i, row in enumerate(EXAMPLE_SLOTS) for j in row)
        position = {cell: pos for pos, cell in enumerate(sorted(c for row in EXAMPLE_READINGS.values() for c in row))}
        order = [position[c] for k in sorted(EXAMPLE_READINGS) for c in EXAMPLE_READINGS[k]]
        swaps = sum(1 for a, b in itertools.combinations(order, 2) if a > b)
        overall = placement_sign(d, EXAMPLE_DEGREES, EXAMPLE_SLOTS)
        ok = (slot_sum, swaps, overall) == (EXAMPLE_SLOT_SUM, EXAMPLE_TRANSPOSITIONS, EXAMPLE_SIGN)
        return ok, f"overall sign {overall:+d}", {"slot_sum": slot_sum, "transpositions": swaps, "sign": overall}

    suite.guarded(group, "placement-signs", signs)


# ---------------------------------------------------------------------------
# cohomology tables against the bar complex
# ---------------------------------------------------------------------------

def bar_differential(alg: FrobeniusAlgebra, n: int) -> RationalMatrix:
    """Hochschild differential Hom(A^n, A) -> Hom(A^{n+1}, A) on elementary maps, unnormalized."""
    d = alg.dimension
    mu = alg.mul
    zero = alg.field.zero
    sources = list(itertools.product(range(d), repeat=n))
    targets = list(itertools.product(range(d), repeat=n + 1))
    row_of = {key: pos for pos, key in enumerate(targets)}
    rows = [[zero] * (len(sources) * d) for _ in range(len(targets) * d)]
    for s_pos, inp in enumerate(sources):
        for y in range(d):
            col = s_pos * d + y
            for a in range(d):
                for x in range(d):
                    rows[row_of[(a,) + inp] * d + x][col] += mu[a][y][x]
                    if n % 2:
                        rows[row_of[inp + (a,)] * d + x][col] += mu[y][a][x]
                    else:
                        rows[row_of[inp + (a,)] * d + x][col] -= mu[y][a][x]
            for i in range(1, n + 1):
                merged = inp[i - 1]
                for p in range(d):
                    for q in range(d):
                        w = mu[p][q][merged]
                        if not w:
                            continue
                        key = inp[:i - 1] + (p, q) + inp[i:]
                        if i % 2:
                            rows[row_of[key] * d + y][col] -= w
                        else:
                            rows[row_of[key] * d + y][col] += w
    return RationalMatrix.from_rows(rows, alg.field, cols=len(sources) * d)


def bar_complex_dimensions(alg: FrobeniusAlgebra, top: int) -> List[int]:
    """dim HH^n for n = 0..top from ranks of the full bar complex."""
    ranks = [rank(bar_differential(alg, n)) for n in range(top + 1)]
    d = alg.dimension
    return [d ** (n + 1) - ranks[n] - (ranks[n - 1] if n else 0) for n in range(top + 1)]


def _all_algebras(suite: Suite) -> List[str]:
    names = list(suite.cfg.algebras)
    names.extend(n for n in suite.cfg.commutative_algebras if n not in names)
    return names


def _cohomology(suite: Suite) -> None:
    group = "cohomology"
    top = suite.cfg.max_degree - 1
    for alg_name in _all_algebras(suite):
        alg = suite.algebra(alg_name)
        cache: Dict[str, List[int]] = {}

        def normalized():
            return cache.setdefault("n", [cohomology(alg, n, suite.cfg.max_degree).dimension
                                          for n in range(top + 1)])

        def tables(alg=alg):
            oracle = bar_complex_dimensions(alg, top)
            ours = normalized()
            return ours == oracle, f"normalized {ours}, bar complex {oracle}", {"normalized": ours, "oracle": oracle}

        suite.guarded(group, f"bar-complex:{alg_name}", tables)

        def variants(alg=alg):
            full = [cohomology(alg, n, suite.cfg.max_degree, Variant.FULL).dimension for n in range(top + 1)]
            return full == normalized(), f"full {full}", {"normalized": normalized(), "full": full}

        suite.guarded(group, f"normalized-vs-full:{alg_name}", variants)

        if alg.name in KNOWN_TABLES:
            def known(alg=alg):
                expected = list(KNOWN_TABLES[alg.name][:top + 1])
                ours = normalized()[:len(expected)]
                return ours == expected, f"expected {expected}", {"expected": expected, "found": ours}

            suite.guarded(group, f"known-table:{alg_name}", known)

        suite.guarded(group, f"center:{alg_name}", lambda alg=alg: (
            normalized()[0] == center_dimension(alg), f"HH^0 = {normalized()[0]}", None))

        def differential_squared(alg=alg, alg_name=alg_name):
            rng = suite.rng(f"{group}:{alg_name}")
            for n in range(top):
                for _ in range(suite.cfg.samples):
                    f = random_cochain(alg, n, rng, max_degree=n + 2)
                    if not delta(delta(f)).is_zero():
                        return False, f"delta^2 at degree {n}", _witness(cochains=[f])
                    dual = beta_sharp(f)
                    if not dual_delta(dual_delta(dual)).is_zero():
                        return False, f"dual delta^2 at degree {n}", _witness(cochains=[dual])
                    if dual_delta(dual) != beta_sharp(delta(f)):
                        return False, f"beta does not intertwine at degree {n}", _witness(cochains=[f])
                    if beta_sharp_inverse(dual) != f:
                        return False, "beta inverse", _witness(cochains=[f])
            return True, "", None

        suite.guarded(group, f"differential:{alg_name}", differential_squared)


# ---------------------------------------------------------------------------
# algebraic structure on cohomology
# ---------------------------------------------------------------------------

def induced_combination(reader: CohomologyReader, degrees: Sequence[int],
                        terms: Sequence[Tuple[int, Sequence[Any]]]) -> Dict[Tuple[int, ...], List[List[Any]]]:
    """Blocks of sum(coef * induced map of pipeline) over ``terms``."""
    alg = reader.algebra
    total: Dict[Tuple[int, ...], List[List[Any]]] = {}
    for coef, stages in terms:
        induced = act_on_cohomology(None, alg, degrees, reader.max_degree, reader.variant,
                                    stages=stages, check=False, reader=reader)
        for profile, block in induced.blocks.items():
            acc = total.setdefault(profile, [[alg.field.zero] * block.cols for _ in range(block.rows)])
            for i, row in enumerate(block.entries):
                for j, x in enumerate(row):
                    acc[i][j] += coef * x
    return total


def _vanishes(blocks: Dict[Tuple[int, ...], List[List[Any]]]) -> bool:
    return all(not x for rows in blocks.values() for row in rows for x in row)


def _profiles(count: int, limit: int, top: int) -> List[Tuple[int, ...]]:
    return [p for p in itertools.product(range(top + 1), repeat=count) if sum(p) <= limit]


def bv_terms() -> Tuple[List[Any], List[Tuple[int, List[Any]]]]:
    """The seven-term relation as pipelines (first stage applied first).

    Returns the left side and the signed right-side terms; the relation
    holds when left minus right induces zero.
    """
    cat = cyclic_catalog()
    cup, dl, one, tau = cat["cup"], cat["delta"], cat["id"], cat["tau"]
    cup_l, cup_r = tensor(cup, one), tensor(one, cup)
    lhs = [cup_l, cup, dl]
    rhs = [
        (1, [cup_l, tensor(dl, one, koszul=True), cup]),
        (1, [cup_r, tensor(one, dl, koszul=True), cup]),
        (1, [tensor(one, tau), cup_l, tensor(dl, one, koszul=True), cup]),
        (-1, [tensor_all([dl, one, one], koszul=True), cup_l, cup]),
        (-1, [tensor_all([one, dl, one], koszul=True), cup_l, cup]),
        (-1, [tensor_all([one, one, dl], koszul=True), cup_l, cup]),
    ]
    return lhs, rhs


def cobv_terms() -> Dict[str, List[Any]]:
    cat = cyclic_catalog()
    vee0, dl, one, tau = cat["vee0"], cat["delta"], cat["id"], cat["tau"]
    vee_l, vee_r = tensor(vee0, one), tensor(one, vee0)
    return {
        "split-delta-left": [vee0, tensor(dl, one, koszul=True), vee_l],
        "split-delta-right": [vee0, tensor(one, dl, koszul=True), vee_r],
        "split-delta-twisted": [vee0, tensor(dl, one, koszul=True), vee_l, tensor(one, tau)],
        "delta-first": [vee0, vee_l, tensor_all([dl, one, one], koszul=True)],
        "delta-second": [vee0, vee_l, tensor_all([one, dl, one], koszul=True)],
        "delta-third": [vee0, vee_l, tensor_all([one, one, dl], koszul=True)],
    }


def _bv(suite: Suite) -> None:
    group = "bv"
    cat = cyclic_catalog()
    cup, dl, one, tau = cat["cup"], cat["delta"], cat["id"], cat["tau"]
    top = suite.cfg.max_degree - 1
    for alg_name in suite.cfg.algebras:
        alg = suite.algebra(alg_name)
        reader = CohomologyReader(alg, suite.cfg.max_degree)

        def relation(terms_for: Callable[[Tuple[int, ...]], List[Tuple[int, List[Any]]]],
                     profiles: List[Tuple[int, ...]]):
            for degrees in profiles:
                if not _vanishes(induced_combination(reader, degrees, terms_for(degrees))):
                    return False, f"degrees {list(degrees)}", {"degrees": list(degrees)}
            return True, f"{len(profiles)} degree profiles", None

        pairs = _profiles(2, top, top)
        triples = _profiles(3, top, top)
        suite.guarded(group, f"cup-graded-commutative:{alg_name}", lambda: relation(
            lambda _: [(1, [cup]), (-1, [tau, cup])], pairs))
        suite.guarded(group, f"cup-associative:{alg_name}", lambda: relation(
            lambda _: [(1, [tensor(cup, one), cup]), (-1, [tensor(one, cup), cup])], triples))
        suite.guarded(group, f"delta-squared:{alg_name}", lambda: relation(
            lambda _: [(1, [dl, dl])], [(n,) for n in range(top + 1)]))

        lhs, rhs = bv_terms()
        seven = [(1, lhs)] + [(-coef, stages) for coef, stages in rhs]
        suite.guarded(group, f"bv-relation:{alg_name}", lambda: relation(
            lambda _: seven, _profiles(3, top + 1, top)))


def _cobv(suite: Suite) -> None:
    group = "cobv"
    top = suite.cfg.max_degree - 1
    for alg_name in suite.cfg.algebras:
        alg = suite.algebra(alg_name)
        reader = CohomologyReader(alg, suite.cfg.max_degree)
        for name, stages in cobv_terms().items():
            def vanishes(stages=stages):
                for n in range(top + 1):
                    if not _vanishes(induced_combination(reader, (n,), [(1, stages)])):
                        return False, f"degree {n}", {"degree": n}
                return True, "", None

            suite.guarded(group, f"{name}:{alg_name}", vanishes)


# ---------------------------------------------------------------------------
# orientation reversal
# ---------------------------------------------------------------------------

def _tensors_equal(x: CochainTensor, y: CochainTensor) -> bool:
    return (x.to_dual() - y.to_dual()).is_zero()


def _sullivan(suite: Suite) -> None:
    group = "sullivan"
    cat = cyclic_catalog()
    cup, vee0, dl, tau = cat["cup"], cat["vee0"], cat["delta"], cat["tau"]
    rev = g("reverse")
    rev2 = tensor(rev, rev)
    top = suite.cfg.action_degree
    for alg_name in suite.cfg.commutative_algebras:
        alg = suite.algebra(alg_name)
        rng = suite.rng(f"{group}:{alg_name}")
        singles = [suite.random_inputs(alg, [rng.randint(0, top)], rng) for _ in range(suite.cfg.samples)]
        pairs = [suite.random_inputs(alg, [rng.randint(0, top), rng.randint(0, top)], rng)
                 for _ in range(suite.cfg.samples)]

        def over(samples, test, what):
            for fs in samples:
                if not test(fs):
                    return False, what, _witness("reverse", fs)
            return True, f"{len(samples)} samples", None

        suite.guarded(group, f"reverse-chain-map:{alg_name}", lambda: over(
            singles, lambda fs: chain_map_defect(rev, fs).is_zero(), "reversal is not a chain map"))
        suite.guarded(group, f"reverse-formula:{alg_name}", lambda: over(
            singles, lambda fs: act(rev, fs).single() == reversal(fs[0]), "action differs from the formula"))
        suite.guarded(group, f"reverse-involution:{alg_name}", lambda: over(
            singles, lambda fs: _tensors_equal(act_pipeline([rev, rev], fs), CochainTensor.of(fs)), "not an involution"))
        suite.guarded(group, f"reverse-delta:{alg_name}", lambda: over(
            singles, lambda fs: _tensors_equal(act_pipeline([dl, rev], fs), -act_pipeline([rev, dl], fs)),
            "reversal does not anticommute with delta"))
        suite.guarded(group, f"reverse-cup:{alg_name}", lambda: over(
            pairs, lambda fs: _tensors_equal(act_pipeline([cup, rev], fs), act_pipeline([rev2, tau, cup], fs)),
            "reversal does not reverse the cup product"))
        suite.guarded(group, f"reverse-coproduct:{alg_name}", lambda: over(
            singles, lambda fs: _tensors_equal(act_pipeline([vee0, rev2], fs), act_pipeline([rev, vee0], fs)),
            "reversal does not commute with the coproduct"))

        reader = CohomologyReader(alg, suite.cfg.max_degree)
        degrees = [(n,) for n in range(suite.cfg.max_degree)]

        def on_cohomology(terms):
            for n in degrees:
                if not _vanishes(induced_combination(reader, n, terms)):
                    return False, f"degree {n[0]}", {"degree": n[0]}
            return True, "", None

        suite.guarded(group, f"reverse-coproduct-hh:{alg_name}", lambda: on_cohomology(
            [(1, [rev, vee0]), (-1, [vee0, tau, rev2])]))
        suite.guarded(group, f"delta-swaps-eigenspaces:{alg_name}", lambda: on_cohomology(
            [(1, [rev, dl]), (1, [dl, rev])]))


def _reversal_control(suite: Suite) -> None:
    """On a noncommutative algebra reversal must fail to be a chain map, by exactly the known defect."""
    group = "reversal-control"
    rev = g("reverse")
    top = max(1, suite.cfg.action_degree)
    for alg_name in suite.cfg.algebras:
        alg = suite.algebra(alg_name)
        if alg.commutative:
            continue
        rng = suite.rng(f"{group}:{alg_name}")

        def control(alg=alg, rng=rng):
            nonzero = False
            for _ in range(suite.cfg.samples):
                fs = suite.random_inputs(alg, [rng.randint(1, top)], rng)
                defect = chain_map_defect(rev, fs)
                if not _tensors_equal(defect, CochainTensor.of([reversal_defect(fs[0])])):
                    return False, "defect differs from the formula", _witness("reverse", fs)
                nonzero = nonzero or not defect.is_zero()
            return nonzero, "defect is nonzero" if nonzero else "no nonzero defect found", None

        suite.guarded(group, f"defect:{alg_name}", control)


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def _round_trip(suite: Suite) -> None:
    group = "round-trip"
    rng = suite.rng(group)
    diagrams = [generator(name) for name in CATALOG]
    extra = suite.count("round_trip_diagrams", suite.cfg.random_diagrams)
    diagrams.extend(random_diagram(rng) for _ in range(extra))

    def diagram_files():
        for d in diagrams:
            data = diagram_to_dict(d)
            back = diagram_from_dict(data)
            if not equals(back, d) or dump_json(diagram_to_dict(back)) != dump_json(data):
                return False, "diagram changed on reload", {"diagram": data}
        return True, f"{len(diagrams)} diagrams", None

    suite.guarded(group, "diagrams", diagram_files)

    def algebra_and_cochain_files():
        for alg_name in _all_algebras(suite):
            alg = suite.algebra(alg_name)
            back = algebra_from_dict(alg.to_dict(), suite.field)
            if back.mul != alg.mul or back.form != alg.form:
                return False, f"algebra {alg_name} changed on reload", alg.to_dict()
            f = random_cochain(alg, 2, rng)
            if cochain_from_dict(f.to_dict(), alg) != f:
                return False, "cochain changed on reload", f.to_dict()
        return True, "", None

    suite.guarded(group, "algebras-and-cochains", algebra_and_cochain_files)


GROUPS: Dict[str, Callable[[Suite], None]] = {
    "prop-axioms": _prop_axioms,
    "generator-identities": _generator_identities,
    "action": _action,
    "slides": _slides,
    "worked-example": _worked_example,
    "cohomology": _cohomology,
    "bv": _bv,
    "cobv": _cobv,
    "sullivan": _sullivan,
    "reversal-control": _reversal_control,
    "round-trip": _round_trip,
}

SULLIVAN_GROUPS = ("sullivan", "reversal-control", "round-trip")


def run_suite(cfg: Optional[SuiteConfig] = None) -> Dict[str, Any]:
    cfg = cfg or SuiteConfig()
    started = time.perf_counter()
    report = Suite(cfg).run()
    LOGGER.info("suite finished in %.1fs: %d checks, %d failed", time.perf_counter() - started,
                report["summary"]["total"], report["summary"]["failed"])
    return report


def format_report(report: Dict[str, Any]) -> str:
    lines = []
    for entry in report["results"]:
        detail = f"  {entry['detail']}" if entry.get("detail") else ""
        lines.append(f"{entry['status'].upper():4}  {entry['group']:22} {entry['check']}{detail}")
    summary = report["summary"]
    lines.append("")
    lines.append(f"{summary['total'] - summary['failed']}/{summary['total']} checks passed (seed {report['seed']})")
    return "\n".join(lines)
