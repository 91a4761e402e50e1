"""Exhaustive enumeration of N(R) by Grassmannian charts.

A point with residue chart S (the lexicographically least set of g coordinates
on which its residue reduction has a unit minor) has generators
G with G[S] = I and G[rest] = X. Invariance under pi (and w) becomes quadratic
equations in X, solved column by column with unit-coefficient propagation,
first over the residue field, then by lifting each residue solution through
the m_R-adic corrections.
"""
import itertools
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Sequence

from hblm.config import Settings, get_settings
from hblm.core.conditions import is_dp, is_k, is_k_pi, is_r_point
from hblm.core.exceptions import BudgetExceededError, InvariantViolation
from hblm.core.lattices import Lattice, module_omega, module_pi, residue_type
from hblm.core.linalg import RMatrix
from hblm.core.rings import ChainRing, Code, RawMatrix, RingCtx, build_ring
from hblm.schemas.enumeration import (
    Classification,
    ClassificationCounts,
    EnumConfig,
    TypeCount,
)
from hblm.schemas.ring import RingSpec

logger = logging.getLogger(__name__)

Chart = tuple[int, ...]
Column = tuple[Code, ...]


def estimate_candidates(ctx: RingCtx) -> int:
    """Naive chart-candidate count C(2g, g) * |R|^(g^2)."""
    return math.comb(2 * ctx.g, ctx.g) * ctx.base.size ** (ctx.g * ctx.g)


def _operators(ctx: RingCtx) -> list[RawMatrix]:
    ops = [module_pi(ctx).data]
    if ctx.f > 1:
        ops.append(module_omega(ctx).data)
    return ops


def _solve_chart(
    ring: ChainRing,
    ops: Sequence[RawMatrix],
    chart: Chart,
    domain: Callable[[int], Iterable[Column]],
    allowed: Callable[[int, Column], bool] | None = None,
) -> Iterator[tuple[Column, ...]]:
    """All X making the graph over ``chart`` stable under every operator."""
    dim = len(ops[0])
    g = len(chart)
    rest = tuple(r for r in range(dim) if r not in chart)
    add, sub, mul, inv, val = ring.add_t, ring.sub_t, ring.mul_t, ring.inv_t, ring.val_t
    # per operator and source coordinate: (image on chart rows, image on rest rows)
    split = [
        tuple((tuple(op[s][col] for s in chart), tuple(op[n][col] for n in rest)) for col in range(dim))
        for op in ops
    ]

    def image(op: int, c: int, xs: list) -> tuple[list[Code], list[Code]]:
        sp = split[op]
        a, y = list(sp[chart[c]][0]), list(sp[chart[c]][1])
        for pos, n in enumerate(rest):
            x = xs[c][pos]
            if not x:
                continue
            ca, cy = sp[n]
            row = mul[x]
            for t, v in enumerate(ca):
                if v:
                    a[t] = add[a[t]][row[v]]
            for t, v in enumerate(cy):
                if v:
                    y[t] = add[y[t]][row[v]]
        return a, y

    def propagate(xs: list, done: set) -> bool:
        changed = True
        while changed:
            changed = False
            for c in range(g):
                if xs[c] is None:
                    continue
                for op in range(len(ops)):
                    if (c, op) in done:
                        continue
                    a, y = image(op, c, xs)
                    unknown = [d for d in range(g) if a[d] and xs[d] is None]
                    if len(unknown) > 1:
                        continue
                    for d in range(g):
                        if a[d] and xs[d] is not None:
                            row = mul[a[d]]
                            y = [sub[v][row[w]] for v, w in zip(y, xs[d])]
                    if not unknown:
                        if any(y):
                            return False
                        done.add((c, op))
                        continue
                    d = unknown[0]
                    if val[a[d]]:
                        continue
                    row = mul[inv[a[d]]]
                    vec = tuple(row[v] for v in y)
                    if allowed is not None and not allowed(d, vec):
                        return False
                    xs[d] = vec
                    done.add((c, op))
                    changed = True
        return True

    def search(xs: list, done: set) -> Iterator[tuple[Column, ...]]:
        if not propagate(xs, done):
            return
        free = next((c for c in range(g) if xs[c] is None), None)
        if free is None:
            yield tuple(xs)
            return
        for vec in domain(free):
            branch = list(xs)
            branch[free] = vec
            yield from search(branch, set(done))

    yield from search([None] * g, set())


def _generators(ring: ChainRing, chart: Chart, dim: int, xs: Sequence[Column]) -> RawMatrix:
    rest = [r for r in range(dim) if r not in chart]
    rows = [[0] * len(chart) for _ in range(dim)]
    for c, s in enumerate(chart):
        rows[s][c] = ring.one
        for pos, n in enumerate(rest):
            rows[n][c] = xs[c][pos]
    return tuple(tuple(r) for r in rows)


def chart_points(ctx: RingCtx, chart: Chart, residue_first: bool = True) -> list[RawMatrix]:
    """Generator matrices of the points whose residue chart is ``chart``.

    With ``residue_first=False`` the search runs over R directly, entries left of
    a pivot restricted to m_R.
    """
    if not residue_first and not ctx.base.is_field:
        return _direct_points(ctx, chart)

    dim = 2 * ctx.g
    rest = [r for r in range(dim) if r not in chart]
    res = ctx.residue_ctx()
    p = ctx.p

    # residue pass: reduced column echelon shape pins the chart
    def res_allowed(c: int, vec: Column) -> bool:
        return all(not vec[pos] for pos, n in enumerate(rest) if n < chart[c])

    def res_domain(c: int) -> Iterator[Column]:
        choices = [(0,) if n < chart[c] else range(p) for n in rest]
        return itertools.product(*choices)

    residue_solutions = list(_solve_chart(res.base, _operators(res), chart, res_domain, res_allowed))
    logger.debug("chart %s: %d residue points", chart, len(residue_solutions))
    if ctx.base.is_field:
        return [_generators(ctx.base, chart, dim, xs) for xs in residue_solutions]

    base = ctx.base
    ideal = base.maximal_ideal()
    ops = _operators(ctx)
    found = []
    for x0 in residue_solutions:
        lifts = [[base.from_int(v) for v in col] for col in x0]

        def lift_domain(c: int, lifts=lifts) -> Iterator[Column]:
            for corr in itertools.product(ideal, repeat=len(rest)):
                yield tuple(base.add(a, b) for a, b in zip(lifts[c], corr))

        def lift_allowed(c: int, vec: Column, x0=x0) -> bool:
            return all(base.residue(v) == r for v, r in zip(vec, x0[c]))

        for xs in _solve_chart(base, ops, chart, lift_domain, lift_allowed):
            found.append(_generators(base, chart, dim, xs))
    return found


def _direct_points(ctx: RingCtx, chart: Chart) -> list[RawMatrix]:
    base = ctx.base
    dim = 2 * ctx.g
    rest = [r for r in range(dim) if r not in chart]
    ideal = base.maximal_ideal()

    def domain(c: int) -> Iterator[Column]:
        return itertools.product(*[ideal if n < chart[c] else base.elements() for n in rest])

    def allowed(c: int, vec: Column) -> bool:
        return all(not base.residue(vec[pos]) for pos, n in enumerate(rest) if n < chart[c])

    solutions = _solve_chart(base, _operators(ctx), chart, domain, allowed)
    return [_generators(base, chart, dim, xs) for xs in solutions]


def _chart_task(spec: RingSpec, chart: Chart, residue_first: bool = True) -> list[RawMatrix]:
    return chart_points(build_ring(spec), chart, residue_first)


@dataclass(frozen=True)
class PointRecord:
    lattice: Lattice
    dp: bool
    k: bool
    k_pi: bool
    r: bool
    chart_type: tuple[int, int]


class EnumerationService:
    def __init__(self, settings: Settings | None = None):
        self.settings = settings or get_settings()

    def _budget(self, config: EnumConfig) -> int:
        return config.max_candidates or self.settings.MAX_CANDIDATES

    def check_budget(self, ctx: RingCtx, budget: int) -> None:
        estimate = estimate_candidates(ctx)
        if estimate > budget:
            raise BudgetExceededError(
                f"{ctx.spec.to_text()}: about {estimate:.3g} chart candidates exceed the budget "
                f"of {budget:.3g}; raise --budget or pick a smaller ring"
            )

    def enum_n_points(self, config: EnumConfig) -> list[Lattice]:
        """Every point of N(R) exactly once, sorted by canonical key."""
        ctx = build_ring(config.ring)
        self.check_budget(ctx, self._budget(config))
        charts = list(itertools.combinations(range(2 * ctx.g), ctx.g))
        workers = config.workers or self.settings.resolved_workers()
        residue_first = self.settings.LIFT_RESIDUE_FIRST
        if workers > 1 and len(charts) > 1:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                batches = list(
                    pool.map(_chart_task, itertools.repeat(config.ring), charts, itertools.repeat(residue_first))
                )
        else:
            batches = [chart_points(ctx, chart, residue_first) for chart in charts]

        points = [
            Lattice.from_generators(ctx, RMatrix.from_rows(ctx.base, gens))
            for batch in batches
            for gens in batch
        ]
        points.sort(key=lambda lat: lat.key)
        for left, right in zip(points, points[1:]):
            if left == right:
                raise InvariantViolation(f"point {left.key} was found in two charts")
        logger.info("enumerated %d points of N over %s", len(points), ctx.spec.to_text())
        if config.filters:
            return [rec.lattice for rec in self.records(points) if self._matches(rec, config.filters)]
        return points

    @staticmethod
    def _matches(rec: PointRecord, filters: Sequence[str]) -> bool:
        flags = {"DP": rec.dp, "K": rec.k, "R": rec.r}
        return all(flags[name] for name in filters)

    def records(self, points: Iterable[Lattice]) -> list[PointRecord]:
        out = []
        for lat in points:
            k_pi = is_k_pi(lat)
            out.append(
                PointRecord(
                    lattice=lat,
                    dp=is_dp(lat),
                    k=is_k(lat),
                    k_pi=k_pi,
                    r=is_r_point(lat),
                    chart_type=residue_type(lat).chart_types[0],
                )
            )
        return out

    def point_records(self, config: EnumConfig) -> list[PointRecord]:
        unfiltered = config.model_copy(update={"filters": ()})
        return self.records(self.enum_n_points(unfiltered))

    def classify(self, config: EnumConfig) -> Classification:
        return self.summarize(config.ring, self.point_records(config))

    @staticmethod
    def summarize(spec: RingSpec, records: Sequence[PointRecord]) -> Classification:
        types: dict[tuple[int, int], int] = {}
        for rec in records:
            types[rec.chart_type] = types.get(rec.chart_type, 0) + 1
        counts = ClassificationCounts(
            N=len(records),
            DP=sum(rec.dp for rec in records),
            K=sum(rec.k for rec in records),
            R=sum(rec.r for rec in records),
            K_pi=sum(rec.k_pi for rec in records),
        )
        result = Classification(
            ring=spec.summary(),
            counts=counts,
            types=[TypeCount(i=i, j=j, count=n) for (i, j), n in sorted(types.items())],
            dp_k_witnesses=[rec.lattice.key for rec in records if rec.dp != rec.k],
            k_pi_mismatch=[rec.lattice.key for rec in records if rec.k_pi != rec.k],
        )
        logger.info("classified %s: %s", spec.to_text(), counts.model_dump())
        return result


def enum_n_points(config: EnumConfig) -> list[Lattice]:
    return EnumerationService().enum_n_points(config)


def classify(config: EnumConfig) -> Classification:
    return EnumerationService().classify(config)
