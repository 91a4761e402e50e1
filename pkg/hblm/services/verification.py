"""Exhaustive checks of the local-model identities over finite rings.

Every check returns a report; a failing identity is a ``fail`` status with
witnesses, never an exception. Checks outside their ring domain are skipped
with the reason as the first witness.
"""
import itertools
import logging
import time
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from hblm.config import Settings, get_settings
from hblm.core.conditions import (
    a_prime,
    beta_complement,
    beta_involution,
    chart_embed,
    chart_extract,
    companion_g,
    g_pairing_holds,
    graph_pi_action,
    is_dp,
    is_isotropic,
    is_k,
    is_r_point,
    jcj_criterion,
    lattice_generic_charpol,
    order_pi_charpol,
    quotient_pi_charpol,
    regular_generic_charpol,
)
from hblm.core.exceptions import (
    HblmError,
    InvariantViolation,
    NotInChartError,
    UnknownCheckError,
)
from hblm.core.forms import (
    beta_gram,
    chart_basis,
    chart_beta_gram,
    chart_trace_gram,
    coordinate_grams,
    eval_alt_form,
    j_matrix,
    orth_complement,
    pi_matrix,
    t_matrix,
    trace_form_gram,
)
from hblm.core.lattices import Lattice, is_point, module_pi, pi_action
from hblm.core.linalg import MultiPolyRing, RMatrix, UniPoly, charpol, solve
from hblm.core.rings import RingCtx, build_ring
from hblm.schemas.enumeration import Counts, EnumConfig
from hblm.schemas.report import CheckStatus, ReportMeta, VerificationReport
from hblm.schemas.ring import RingSpec
from hblm.services.enumeration import EnumerationService, PointRecord

logger = logging.getLogger(__name__)


CHECK_ALIASES: dict[str, str] = {
    "thm_5_6": "dp_equals_k",
    "prop_5_10": "beta_involution",
    "sec_5_11": "trace_criterion",
    "prop_5_4": "unramified_collapse",
    "rmk_5_5": "rank_one_strict",
    "ex_2_16": "dual_number_witness",
    "prop_2_13_lift": "thickening_lift",
    "sec_2_6": "field_types",
    "eq_5_6": "charpol_identities",
}


@dataclass
class CheckOutcome:
    status: CheckStatus
    counts: Counts = field(default_factory=Counts)
    witnesses: list[str] = field(default_factory=list)


def _skip(reason: str) -> CheckOutcome:
    return CheckOutcome("skipped", witnesses=[reason])


def _verdict(counts: Counts, witnesses: list[str]) -> CheckOutcome:
    return CheckOutcome("fail" if witnesses else "pass", counts, witnesses)


def _record_counts(records: Sequence[PointRecord]) -> Counts:
    return Counts(
        N=len(records),
        DP=sum(r.dp for r in records),
        K=sum(r.k for r in records),
        R=sum(r.r for r in records),
    )


def chart_types(ctx: RingCtx) -> list[tuple[int, int]]:
    return [(i, ctx.e - i) for i in range(ctx.e // 2 + 1)]


def _chart_domain(ctx: RingCtx) -> str | None:
    """Reason the chart machinery does not apply, if any."""
    if ctx.f != 1:
        return "chart checks need a totally ramified order (f = 1)"
    if not ctx.is_tame:
        return f"wild ramification: p={ctx.p} divides e={ctx.e}"
    return None


class VerificationService:
    def __init__(
        self,
        settings: Settings | None = None,
        workers: int | None = None,
        budget: int | None = None,
        corrupt_beta: bool = False,
    ):
        self.settings = settings or get_settings()
        self.workers = workers
        self.budget = budget
        self.corrupt_beta = corrupt_beta
        self.enumeration = EnumerationService(self.settings)
        self._records: dict[RingSpec, list[PointRecord]] = {}
        self._checks: dict[str, Callable[[RingCtx], CheckOutcome]] = {
            "dp_equals_k": self.check_dp_equals_k,
            "beta_involution": self.check_beta_involution,
            "trace_criterion": self.check_trace_criterion,
            "unramified_collapse": self.check_unramified_collapse,
            "rank_one_strict": self.check_rank_one_strict,
            "dual_number_witness": self.check_dual_number_witness,
            "thickening_lift": self.check_thickening_lift,
            "field_types": self.check_field_types,
            "charpol_identities": self.check_charpol_identities,
        }

    @property
    def check_names(self) -> list[str]:
        return list(self._checks)

    def records(self, spec: RingSpec) -> list[PointRecord]:
        if spec not in self._records:
            config = EnumConfig(ring=spec, workers=self.workers, max_candidates=self.budget)
            self._records[spec] = self.enumeration.point_records(config)
        return self._records[spec]

    def resolve(self, name: str) -> str:
        """Canonical check id for ``name`` or one of its aliases."""
        name = CHECK_ALIASES.get(name, name)
        if name not in self._checks:
            raise UnknownCheckError(f"unknown check {name!r}; choose from {', '.join(self._checks)}")
        return name

    def run_check(self, name: str, ring: RingSpec | RingCtx) -> VerificationReport:
        """Run one check on a ring given by its spec or an already built context."""
        name = self.resolve(name)
        if isinstance(ring, RingCtx):
            ctx, spec = ring, ring.spec
        else:
            ctx, spec = build_ring(ring), ring
        started = time.perf_counter()
        outcome = self._checks[name](ctx)
        wall_ms = int((time.perf_counter() - started) * 1000)
        if outcome.status == "skipped":
            logger.warning("%s skipped on %s: %s", name, spec.to_text(), outcome.witnesses[0])
        else:
            outcome.witnesses = sorted(set(outcome.witnesses))
            logger.info("%s on %s: %s", name, spec.to_text(), outcome.status)
        return VerificationReport(
            check=name,
            ring=spec.summary(),
            status=outcome.status,
            counts=outcome.counts,
            witnesses=outcome.witnesses,
            meta=ReportMeta(wall_ms=wall_ms, version=self.settings.VERSION),
        )

    def run_suite(self, specs: Iterable[RingSpec], names: Sequence[str] | None = None) -> list[VerificationReport]:
        names = [self.resolve(n) for n in names or self._checks]
        return [self.run_check(name, spec) for spec in specs for name in names]

    # -- checks --------------------------------------------------------------

    def check_dp_equals_k(self, ctx: RingCtx) -> CheckOutcome:
        records = self.records(ctx.spec)
        witnesses = []
        for rec in records:
            key = rec.lattice.key
            if rec.dp != rec.k:
                witnesses.append(f"{'DP' if rec.dp else 'K'} only: {key}")
            if rec.dp != is_isotropic(rec.lattice):
                witnesses.append(f"DP differs from isotropy: {key}")
            if rec.r and not (rec.dp and rec.k):
                witnesses.append(f"R without DP and K: {key}")
        return _verdict(_record_counts(records), witnesses)

    def _beta_t(self, ctx: RingCtx) -> RMatrix:
        t = t_matrix(ctx)
        if not self.corrupt_beta:
            return t
        rows = [list(r) for r in t.data]
        rows[0][ctx.e - 1] = ctx.base.neg(rows[0][ctx.e - 1])
        return RMatrix.from_rows(ctx.base, rows)

    def check_beta_involution(self, ctx: RingCtx) -> CheckOutcome:
        reason = _chart_domain(ctx)
        if reason:
            return _skip(reason)
        witnesses = []
        p_std = module_pi(ctx)
        for i, j in chart_types(ctx):
            basis = chart_basis(ctx, i, j)
            if basis.transpose() @ p_std @ basis != pi_matrix(ctx, i, j):
                witnesses.append(f"pi matrix of type ({i},{j}) disagrees with the chart basis")
            if beta_gram(ctx).in_basis(basis).gram != chart_beta_gram(ctx):
                witnesses.append(f"beta Gram of type ({i},{j}) is not (0 T; T 0)")

        t = self._beta_t(ctx)
        counts = Counts()
        for rec in self.records(ctx.spec):
            lat = rec.lattice
            for i, j in chart_types(ctx):
                try:
                    cp = chart_extract(lat, i, j)
                except NotInChartError:
                    continue
                counts.N += 1
                isotropic = is_isotropic(lat)
                counts.DP += isotropic
                phi = beta_involution(cp, t)
                if beta_involution(phi, t).C != cp.C:
                    witnesses.append(f"not an involution: {cp}")
                if chart_embed(phi) != beta_complement(lat):
                    witnesses.append(f"graph of C' is not the beta complement: {cp}")
                if not phi.pi_invariant:
                    witnesses.append(f"beta complement is not pi-stable: {cp}")
                    continue
                image = chart_embed(phi)
                k_image = is_k(image)
                counts.K += k_image
                if isotropic != k_image:
                    witnesses.append(f"isotropy and (K) of the complement differ: {cp}")
                if a_prime(cp) != graph_pi_action(phi):
                    witnesses.append(f"A' is not the pi action on the complement: {cp}")
                if i >= 1:
                    try:
                        companion_g(cp)
                        if not g_pairing_holds(cp):
                            witnesses.append(f"phi(g) != <e1, e2>: {cp}")
                    except InvariantViolation as exc:
                        witnesses.append(f"{exc.detail}")
        return _verdict(counts, witnesses)

    def check_trace_criterion(self, ctx: RingCtx) -> CheckOutcome:
        reason = _chart_domain(ctx)
        if reason:
            return _skip(reason)
        witnesses = []
        trace = trace_form_gram(ctx)
        for i, j in chart_types(ctx):
            basis = chart_basis(ctx, i, j)
            if trace.in_basis(basis).gram != chart_trace_gram(ctx, i, j):
                witnesses.append(f"trace Gram of type ({i},{j}) is not (0 J; -tJ 0)")
            jm = j_matrix(ctx, i, j)
            if jm @ jm.transpose() != RMatrix.identity(ctx.base, ctx.e):
                witnesses.append(f"J of type ({i},{j}) is not orthogonal")
        records = self.records(ctx.spec)
        coordinate = coordinate_grams(ctx)
        for rec in records:
            lat = rec.lattice
            isotropic = is_isotropic(lat)
            for i, j in chart_types(ctx):
                try:
                    cp = chart_extract(lat, i, j)
                except NotInChartError:
                    continue
                if jcj_criterion(cp) != isotropic:
                    witnesses.append(f"tC = JCJ disagrees with isotropy: {cp}")
            if orth_complement(lat, coordinate) != orth_complement(lat, trace):
                witnesses.append(f"trace and coordinate complements differ: {lat.key}")
        return _verdict(_record_counts(records), witnesses)

    def check_unramified_collapse(self, ctx: RingCtx) -> CheckOutcome:
        if ctx.e != 1:
            return _skip(f"ramified order (e={ctx.e})")
        records = self.records(ctx.spec)
        counts = _record_counts(records)
        witnesses = [rec.lattice.key for rec in records if not (rec.dp and rec.k and rec.r)]
        expected = ctx.order_size() + ctx.maximal_ideal_size()
        if counts.N != expected:
            witnesses.append(f"|N| = {counts.N}, expected |O| + |m_O| = {expected}")
        return _verdict(counts, witnesses)

    def check_rank_one_strict(self, ctx: RingCtx) -> CheckOutcome:
        if ctx.e < 2:
            return _skip("unramified order: N^R = N")
        records = self.records(ctx.spec)
        counts = _record_counts(records)
        witnesses = []
        failed = False
        for rec in records:
            if rec.r and not (rec.dp and rec.k):
                witnesses.append(f"R without DP and K: {rec.lattice.key}")
                failed = True
        expected = ctx.order_size() + ctx.maximal_ideal_size()
        if counts.R != expected:
            witnesses.append(f"|N^R| = {counts.R}, expected |O| + |m_O| = {expected}")
            failed = True
        if ctx.base.is_field:
            if counts.R >= counts.DP:
                witnesses.append("no DP point outside N^R")
                failed = True
            for rec in records:
                if rec.r == (rec.chart_type[0] >= 1):
                    witnesses.append(f"R does not match type {rec.chart_type}: {rec.lattice.key}")
                    failed = True
        if failed:
            return CheckOutcome("fail", counts, witnesses)
        evidence = [f"type {rec.chart_type}: {rec.lattice.key}" for rec in records if rec.dp and not rec.r]
        return CheckOutcome("pass", counts, evidence)

    def check_dual_number_witness(self, ctx: RingCtx) -> CheckOutcome:
        if not ctx.eps or ctx.e != 2 or ctx.f != 1:
            return _skip("needs F_p[eps] with e = 2 and f = 1")
        base, eps = ctx.base, ctx.base.uniformizer
        v1 = (eps, 1, 0, 0)  # (pi + eps) f1
        v2 = (0, 0, 0, 1)  # pi f2
        lat = Lattice.from_vectors(ctx, [v1, v2])
        witnesses = []
        counts = Counts()
        if not is_point(lat):
            return _verdict(counts, [f"not a point of N: {lat.key}"])
        counts.N = 1
        pairing = eval_alt_form(ctx, v1, v2)
        if pairing != ctx.monomial(0, 1, eps):
            witnesses.append(f"<v1, v2> = {pairing}, expected eps*pi")
        dp, k = is_dp(lat), is_k(lat)
        counts.DP, counts.K, counts.R = int(dp), int(k), int(is_r_point(lat))
        if dp or k:
            witnesses.append(f"lattice satisfies {'DP' if dp else 'K'}: {lat.key}")
        literal = RMatrix.from_columns(base, [v1, v2], 4)
        act = solve(literal, module_pi(ctx) @ literal)
        if act != RMatrix.from_rows(base, [[eps, 0], [0, 0]]):
            witnesses.append(f"pi acts as {act.pretty() if act else None}, expected diag(eps, 0)")
        expected = UniPoly.from_coeffs(base, [0, base.neg(eps), 1])
        if charpol(pi_action(lat)) != expected:
            witnesses.append(f"charpol {charpol(pi_action(lat))}, expected {expected}")
        cp = chart_extract(lat, 1, 1)
        if cp.C != RMatrix.from_rows(base, [[eps, 0], [0, 0]]):
            witnesses.append(f"chart coordinates {cp}")
        if ctx.is_tame and jcj_criterion(cp):
            witnesses.append(f"tC = JCJ holds for {cp}")
        return _verdict(counts, witnesses)

    def check_thickening_lift(self, ctx: RingCtx) -> CheckOutcome:
        spec = ctx.spec
        thick = build_ring(
            RingSpec(p=spec.p, n=1, f=spec.f, eps=True, e=spec.e, u=spec.u % spec.p, m=spec.m)
        )
        residue = thick.residue_ctx()
        s = thick.eps_elem()
        pi = thick.pi()
        counts = Counts()
        witnesses = []
        for e1, e2 in itertools.product(range(thick.e + 1), repeat=2):
            for x in range(1, thick.p):
                first = thick.power(pi, e1)
                second = thick.power(pi, e2)
                a = first.coeffs + thick.scale(x, s).coeffs
                b = s.coeffs + second.coeffs
                lat = Lattice.o_span(thick, [a, b])
                point = is_point(lat)
                good = point and is_dp(lat)
                if point:
                    counts.N += 1
                    counts.DP += int(good)
                    counts.K += int(is_k(lat))
                    counts.R += int(is_r_point(lat))
                label = f"e1={e1} e2={e2} x={x}"
                if good != (e1 + e2 == thick.e):
                    witnesses.append(f"{label}: point and isotropic = {good}")
                if good:
                    special = Lattice.o_span(
                        residue,
                        [
                            tuple(thick.base.residue(c) for c in first.coeffs) + (0,) * thick.g,
                            (0,) * thick.g + tuple(thick.base.residue(c) for c in second.coeffs),
                        ],
                    )
                    if lat.residue() != special:
                        witnesses.append(f"{label}: lift does not reduce to <pi^e1 f1, pi^e2 f2>")
        return _verdict(counts, witnesses)

    def check_field_types(self, ctx: RingCtx) -> CheckOutcome:
        """(K) holds exactly when the type sums to e.

        Over a field this is checked point by point. Over a non-field base it is
        checked on the residue points, and the points whose (K) fails above a
        type summing to e are returned as evidence.
        """
        records = self.records(ctx.spec)
        witnesses = []
        evidence = []
        for rec in records:
            i, j = rec.chart_type
            sums = i + j == ctx.e
            key = rec.lattice.key
            if ctx.base.is_field:
                if rec.k != sums:
                    witnesses.append(f"(K) is {rec.k} for type ({i},{j}): {key}")
                if not rec.k:
                    witnesses.append(f"(K) fails over a field: {key}")
                continue
            if is_k(rec.lattice.residue()) != sums or not sums:
                witnesses.append(f"residue point of type ({i},{j}) breaks the criterion: {key}")
            if not rec.k:
                evidence.append(f"(K) fails above type ({i},{j}): {key}")
        if witnesses:
            return CheckOutcome("fail", _record_counts(records), witnesses)
        return CheckOutcome("pass", _record_counts(records), evidence)

    def check_charpol_identities(self, ctx: RingCtx) -> CheckOutcome:
        records = self.records(ctx.spec)
        whole = charpol(module_pi(ctx))
        order = order_pi_charpol(ctx)
        regular = regular_generic_charpol(ctx)
        alg = MultiPolyRing(ctx.base, ctx.g + 1)
        witnesses = []
        for rec in records:
            lat = rec.lattice
            on_lattice = charpol(pi_action(lat))
            try:
                quotient = quotient_pi_charpol(lat)
            except HblmError as exc:
                witnesses.append(f"{exc.detail}")
                continue
            if on_lattice * quotient != whole:
                witnesses.append(f"charpol(M) != charpol(L) * charpol(M/L): {lat.key}")
            if not rec.dp:
                continue
            if on_lattice**2 != order**2:
                witnesses.append(f"charpol(pi; L)^2 differs from the regular one: {lat.key}")
            generic = lattice_generic_charpol(lat)
            if alg.mul(generic, generic) != alg.mul(regular, regular):
                witnesses.append(f"P^2 != Q^2: {lat.key}")
            if generic != regular:
                witnesses.append(f"P != Q: {lat.key}")
        return _verdict(_record_counts(records), witnesses)


def run_check(name: str, ring: RingSpec | RingCtx) -> VerificationReport:
    return VerificationService().run_check(name, ring)


def run_suite(specs: Iterable[RingSpec], names: Sequence[str] | None = None) -> list[VerificationReport]:
    return VerificationService().run_suite(specs, names)
