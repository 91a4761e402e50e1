"""The conditions (DP), (K) and (R) on points of N, and the chart operations."""
import itertools
import logging
from dataclasses import dataclass, field
from functools import lru_cache

from hblm.core.exceptions import (
    BadTypeError,
    InvariantViolation,
    NotAPointError,
    NotInChartError,
    NotInvariantError,
)
from hblm.core.forms import (
    beta_gram,
    chart_basis,
    check_type,
    coordinate_grams,
    eval_alt_form,
    j_matrix,
    orth_complement,
    pi_matrix,
    t_matrix,
)
from hblm.core.lattices import (
    Lattice,
    is_point,
    module_monomials,
    module_pi,
    monomial_actions,
    pi_action,
)
from hblm.core.linalg import (
    MultiPoly,
    RMatrix,
    UniPoly,
    charpol,
    chain_echelon,
    generic_charpol,
    inverse,
    is_invertible,
)
from hblm.core.rings import Elem, RingCtx

logger = logging.getLogger(__name__)


def _require_point(lat: Lattice) -> None:
    if not is_point(lat):
        raise NotAPointError(f"lattice {lat.key} is not a point of N")


def is_point_of_n(lat: Lattice) -> bool:
    return is_point(lat)


def is_isotropic(lat: Lattice) -> bool:
    gens = lat.gens
    return all((gens.transpose() @ form.gram @ gens).is_zero() for form in coordinate_grams(lat.ctx))


def is_dp(lat: Lattice) -> bool:
    _require_point(lat)
    return orth_complement(lat, coordinate_grams(lat.ctx)) == lat


@lru_cache(maxsize=None)
def order_pi_charpol(ctx: RingCtx) -> UniPoly:
    """charpol of pi on O_R itself."""
    return charpol(RMatrix.from_rows(ctx.base, ctx.reg_pi))


@lru_cache(maxsize=None)
def regular_generic_charpol(ctx: RingCtx) -> MultiPoly:
    return generic_charpol([RMatrix.from_rows(ctx.base, reg) for reg in ctx.mono_regs])


def lattice_generic_charpol(lat: Lattice) -> MultiPoly:
    return generic_charpol(monomial_actions(lat))


def is_k_pi(lat: Lattice) -> bool:
    """The determinant condition tested at x = pi only."""
    _require_point(lat)
    return charpol(pi_action(lat)) == order_pi_charpol(lat.ctx)


def is_k(lat: Lattice) -> bool:
    if not is_k_pi(lat):
        return False
    return lattice_generic_charpol(lat) == regular_generic_charpol(lat.ctx)


def r_point_generator(lat: Lattice) -> tuple[int, ...] | None:
    """Residue coordinates of a generator of L over O_R, or None."""
    _require_point(lat)
    ctx = lat.ctx
    res = ctx.residue_ctx()
    gens = lat.gens.residue(res.base)
    monos = module_monomials(res)
    for coords in itertools.product(range(ctx.p), repeat=lat.rank):
        if not any(coords):
            continue
        vec = gens.apply(coords)
        span = RMatrix.from_columns(res.base, [m.apply(vec) for m in monos], 2 * ctx.g)
        if chain_echelon(span).rank == ctx.g:
            return coords
    return None


def is_r_point(lat: Lattice) -> bool:
    return r_point_generator(lat) is not None


def quotient_pi_charpol(lat: Lattice) -> UniPoly:
    """charpol of pi on M/L, computed on two complements that must agree."""
    _require_point(lat)
    ctx = lat.ctx
    dim, r = 2 * ctx.g, lat.rank
    pivot_rows = {c for c, _ in lat.pivots}
    rest = [row for row in range(dim) if row not in pivot_rows]
    unit_cols = RMatrix.from_columns(ctx.base, [tuple(int(k == row) for k in range(dim)) for row in rest], dim)
    shifted = unit_cols + lat.gens @ RMatrix.from_rows(ctx.base, [[1] * len(rest)] * r, len(rest))
    results = []
    for comp in (unit_cols, shifted):
        basis = lat.gens.hstack(comp)
        conj = inverse(basis) @ module_pi(ctx) @ basis
        results.append(charpol(conj.submatrix(range(r, dim), range(r, dim))))
    if results[0] != results[1]:
        raise InvariantViolation(f"quotient charpol depends on the complement for {lat.key}")
    return results[0]


# -- charts --------------------------------------------------------------------


@dataclass(frozen=True)
class ChartPoint:
    """Graph of h: F0 -> F1 for a chart of type (i, j); C is the matrix of h."""

    i: int
    j: int
    C: RMatrix
    pi_invariant: bool
    ctx: RingCtx = field(compare=False, hash=False, repr=False)

    @classmethod
    def build(cls, ctx: RingCtx, i: int, j: int, c: RMatrix) -> "ChartPoint":
        check_type(ctx, i, j)
        if (c.nrows, c.ncols) != (ctx.e, ctx.e):
            raise BadTypeError(f"chart matrix must be {ctx.e}x{ctx.e}")
        try:
            _graph_action(ctx, i, j, c)
            invariant = True
        except NotInvariantError:
            invariant = False
        return cls(i, j, c, invariant, ctx)

    def __str__(self) -> str:
        return f"type=({self.i},{self.j}) C={self.C.pretty()}"


def _split(ctx: RingCtx, mat: RMatrix) -> tuple[RMatrix, RMatrix, RMatrix, RMatrix]:
    e = ctx.e
    top, bottom = range(e), range(e, 2 * e)
    return (
        mat.submatrix(top, top),
        mat.submatrix(top, bottom),
        mat.submatrix(bottom, top),
        mat.submatrix(bottom, bottom),
    )


def _graph_action(ctx: RingCtx, i: int, j: int, c: RMatrix) -> RMatrix:
    p00, p01, p10, p11 = _split(ctx, pi_matrix(ctx, i, j))
    act = p00 + p01 @ c
    if p10 + p11 @ c != c @ act:
        raise NotInvariantError(f"graph of {c.pretty()} is not pi-stable")
    return act


def graph_pi_action(cp: ChartPoint) -> RMatrix:
    """pi on the graph in the basis x + h(x), x running over F0."""
    return _graph_action(cp.ctx, cp.i, cp.j, cp.C)


def chart_embed(cp: ChartPoint) -> Lattice:
    ctx = cp.ctx
    graph = RMatrix.identity(ctx.base, ctx.e).vstack(cp.C)
    return Lattice.from_generators(ctx, chart_basis(ctx, cp.i, cp.j) @ graph)


def chart_extract(lat: Lattice, i: int, j: int) -> ChartPoint:
    ctx = lat.ctx
    check_type(ctx, i, j)
    e = ctx.e
    local = chart_basis(ctx, i, j).transpose() @ lat.gens
    top = local.submatrix(range(e), range(local.ncols))
    if lat.rank != e or not is_invertible(top):
        raise NotInChartError(f"lattice {lat.key} is not a graph over F0 of type ({i},{j})")
    bottom = local.submatrix(range(e, 2 * e), range(local.ncols))
    return ChartPoint.build(ctx, i, j, bottom @ inverse(top))


def beta_involution(cp: ChartPoint, t: RMatrix | None = None) -> ChartPoint:
    """C -> -T tC T, the chart of the beta-orthogonal complement."""
    t = t if t is not None else t_matrix(cp.ctx)
    return ChartPoint.build(cp.ctx, cp.i, cp.j, -(t @ cp.C.transpose() @ t))


def a_prime(cp: ChartPoint) -> RMatrix:
    """(K_j + K_i) + (B_ji + B_ij) C' read off the chart pi-matrix."""
    p00, p01, _, _ = _split(cp.ctx, pi_matrix(cp.ctx, cp.i, cp.j))
    return p00 + p01 @ beta_involution(cp).C


def _c(cp: ChartPoint, row: int, col: int) -> int:
    return cp.C.data[row - 1][col - 1]


def companion_g(cp: ChartPoint) -> tuple[RMatrix, UniPoly]:
    ctx, i, j, e = cp.ctx, cp.i, cp.j, cp.ctx.e
    if i < 1:
        raise BadTypeError("the companion construction needs i >= 1")
    base = ctx.base
    rows = [[0] * e for _ in range(e)]
    for r in range(1, e):
        if r != j:
            rows[r - 1][r] = 1
    for t in range(1, e + 1):
        rows[j - 1][t - 1] = base.neg(_c(cp, e + 1 - t, e))
        rows[e - 1][t - 1] = base.neg(_c(cp, e + 1 - t, j))
    mat = RMatrix.from_rows(base, rows)

    def poly(terms: dict[int, int]) -> UniPoly:
        top = max(terms, default=0)
        return UniPoly.from_coeffs(base, [terms.get(k, 0) for k in range(top + 1)])

    first = poly({i: 1, **{i - l: _c(cp, l, j) for l in range(1, i + 1)}})
    second = poly({j: 1, **{j - k: _c(cp, k + i, e) for k in range(1, j + 1)}})
    third = poly({j - k: _c(cp, k + i, j) for k in range(1, j + 1)})
    fourth = poly({i - l: _c(cp, l, e) for l in range(1, i + 1)})
    g = first * second - third * fourth

    if charpol(mat) != g:
        raise InvariantViolation(f"charpol(M) != g for {cp}")
    if mat != a_prime(cp):
        raise InvariantViolation(f"M != A' for {cp}")
    return mat, g


def graph_generators(cp: ChartPoint) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """e1 = pi^i f1 + h(pi^i f1) and e2 = pi^j f2 + h(pi^j f2) in standard coordinates."""
    ctx, e = cp.ctx, cp.ctx.e
    basis = chart_basis(ctx, cp.i, cp.j)
    cols = cp.C.columns()
    out = []
    for pos in (cp.j - 1, e - 1):
        local = tuple(int(k == pos) for k in range(e)) + cols[pos]
        out.append(basis.apply(local))
    return out[0], out[1]


def evaluate_at_pi(ctx: RingCtx, poly: UniPoly) -> Elem:
    result = ctx.zero()
    pi = ctx.pi()
    for c in reversed(poly.coeffs):
        result = ctx.arith(ctx.arith(result, pi, "mul"), ctx.embed(ctx.base_elem(c)), "add")
    return result


def g_pairing_holds(cp: ChartPoint) -> bool:
    """phi(g) = <e1, e2>."""
    _, g = companion_g(cp)
    e1, e2 = graph_generators(cp)
    return evaluate_at_pi(cp.ctx, g) == eval_alt_form(cp.ctx, e1, e2)


def jcj_criterion(cp: ChartPoint) -> bool:
    cp.ctx.different_generator()
    jm = j_matrix(cp.ctx, cp.i, cp.j)
    return cp.C.transpose() == jm @ cp.C @ jm


def beta_complement(lat: Lattice) -> Lattice:
    return orth_complement(lat, beta_gram(lat.ctx))
