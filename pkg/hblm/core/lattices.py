"""Submodules of M = O_R^2, stored by canonical R-generators.

Coordinates on M = R^{2g}: the f1 block (monomial w^b pi^a at b*e + a) then the
f2 block shifted by g.
"""
import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

from hblm.core.exceptions import NotAPointError, NotInvariantError
from hblm.core.linalg import (
    RMatrix,
    block_diag,
    chain_echelon,
    free_summand_form,
    howell_columns,
    solve,
    span_contains,
)
from hblm.core.rings import Code, RingCtx

logger = logging.getLogger(__name__)

Vector = tuple[Code, ...]


@lru_cache(maxsize=None)
def module_monomials(ctx: RingCtx) -> tuple[RMatrix, ...]:
    """Action of each monomial of O_R on M."""
    out = []
    for reg in ctx.mono_regs:
        block = RMatrix.from_rows(ctx.base, reg)
        out.append(block_diag(block, block))
    return tuple(out)


@lru_cache(maxsize=None)
def module_pi(ctx: RingCtx) -> RMatrix:
    block = RMatrix.from_rows(ctx.base, ctx.reg_pi)
    return block_diag(block, block)


@lru_cache(maxsize=None)
def module_omega(ctx: RingCtx) -> RMatrix:
    block = RMatrix.from_rows(ctx.base, ctx.reg_omega)
    return block_diag(block, block)


@dataclass(frozen=True)
class ReductionType:
    """Elementary divisors (e1, e2) of a k-point; chart type (i, j) = (e - e2, e - e1)."""

    e: int
    pairs: tuple[tuple[int, int], ...]

    @property
    def chart_types(self) -> tuple[tuple[int, int], ...]:
        return tuple((self.e - e2, self.e - e1) for e1, e2 in self.pairs)

    def __str__(self) -> str:
        return ",".join(f"({i},{j})" for i, j in self.chart_types)


@dataclass(frozen=True)
class Lattice:
    gens: RMatrix
    pivots: tuple[tuple[int, int], ...]
    ctx: RingCtx = field(compare=False, hash=False, repr=False)

    @classmethod
    def from_generators(cls, ctx: RingCtx, gens: RMatrix) -> "Lattice":
        if gens.nrows != 2 * ctx.g:
            raise ValueError(f"generators need {2 * ctx.g} rows, got {gens.nrows}")
        free = free_summand_form(gens)
        if free is not None:
            basis, rows = free
            return cls(basis, tuple((c, 0) for c in rows), ctx)
        canon, pivots = howell_columns(gens)
        return cls(canon, pivots, ctx)

    @classmethod
    def from_vectors(cls, ctx: RingCtx, vectors: Sequence[Sequence[Code]]) -> "Lattice":
        return cls.from_generators(ctx, RMatrix.from_columns(ctx.base, list(vectors), 2 * ctx.g))

    @classmethod
    def o_span(cls, ctx: RingCtx, vectors: Sequence[Sequence[Code]]) -> "Lattice":
        """Smallest O_R-submodule containing ``vectors``."""
        cols = [mono.apply(v) for v in vectors for mono in module_monomials(ctx)]
        return cls.from_vectors(ctx, cols)

    @classmethod
    def full(cls, ctx: RingCtx) -> "Lattice":
        return cls.from_generators(ctx, RMatrix.identity(ctx.base, 2 * ctx.g))

    @property
    def rank(self) -> int:
        """Number of canonical generators; the R-rank for free summands."""
        return len(self.pivots)

    @property
    def is_free_summand(self) -> bool:
        return all(k == 0 for _, k in self.pivots)

    @property
    def key(self) -> str:
        return self.gens.transpose().pretty()

    def columns(self) -> list[Vector]:
        return self.gens.columns()

    def contains(self, vec: Sequence[Code]) -> bool:
        if self.is_free_summand:
            return self.gens.apply([vec[c] for c, _ in self.pivots]) == tuple(vec)
        return span_contains(self.gens, self.pivots, vec)

    def includes(self, other: "Lattice") -> bool:
        return all(self.contains(v) for v in other.columns())

    def residue(self) -> "Lattice":
        """Image in M over the residue field."""
        res = self.ctx.residue_ctx()
        return Lattice.from_generators(res, self.gens.residue(res.base))


def from_generators(ctx: RingCtx, gens: RMatrix) -> Lattice:
    return Lattice.from_generators(ctx, gens)


def is_summand_of_rank(lat: Lattice, r: int) -> bool:
    return lat.rank == r and lat.is_free_summand


def is_O_invariant(lat: Lattice) -> bool:
    ops = [module_pi(lat.ctx)]
    if lat.ctx.f > 1:
        ops.append(module_omega(lat.ctx))
    return all(lat.contains(v) for op in ops for v in (op @ lat.gens).columns())


def is_point(lat: Lattice) -> bool:
    return is_summand_of_rank(lat, lat.ctx.g) and is_O_invariant(lat)


def action_matrix(lat: Lattice, op: RMatrix) -> RMatrix:
    """A with op @ G = G @ A on the canonical generators G."""
    image = op @ lat.gens
    if lat.is_free_summand:
        rows = [c for c, _ in lat.pivots]
        act = image.submatrix(rows, range(image.ncols))
        if lat.gens @ act == image:
            return act
        raise NotInvariantError(f"lattice {lat.key} is not stable")
    act = solve(lat.gens, image)
    if act is None:
        raise NotInvariantError(f"lattice {lat.key} is not stable")
    return act


def pi_action(lat: Lattice) -> RMatrix:
    return action_matrix(lat, module_pi(lat.ctx))


def omega_action(lat: Lattice) -> RMatrix:
    if lat.ctx.f == 1:
        return RMatrix.identity(lat.ctx.base, lat.rank)
    return action_matrix(lat, module_omega(lat.ctx))


def monomial_actions(lat: Lattice) -> list[RMatrix]:
    """Action of w^b pi^a on L for every monomial, in monomial order."""
    a_pi, a_omega = pi_action(lat), omega_action(lat)
    out = []
    for b, a in lat.ctx.monomials:
        out.append(a_omega.power(b) @ a_pi.power(a))
    return out


def reduction_type(lat: Lattice) -> ReductionType:
    """Jordan type of pi on a k-point, read from ranks of powers.

    Always a single pair. For f > 1 each Jordan block of pi over k appears f
    times, once per conjugate of w, so the block counts are divided by f and the
    pair describes the whole type.
    """
    ctx = lat.ctx
    if not ctx.base.is_field:
        raise NotAPointError("reduction types need a field base; reduce the lattice first")
    if not is_point(lat):
        raise NotAPointError(f"lattice {lat.key} is not a point of N")
    act = pi_action(lat)
    ranks = [lat.rank]
    for t in range(1, ctx.e + 1):
        ranks.append(chain_echelon(act.power(t)).rank)
    # blocks of size >= t over the residue field of O
    at_least = [(ranks[t - 1] - ranks[t]) // ctx.f for t in range(1, ctx.e + 1)]
    e2 = sum(1 for count in at_least if count >= 1)
    e1 = sum(1 for count in at_least if count >= 2)
    return ReductionType(ctx.e, ((e1, e2),))


def residue_type(lat: Lattice) -> ReductionType:
    return reduction_type(lat if lat.ctx.base.is_field else lat.residue())
