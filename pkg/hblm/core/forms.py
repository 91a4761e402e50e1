"""Bilinear forms on M and the chart coordinates of the totally ramified case."""
import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Literal, Sequence

from hblm.core.exceptions import BadTypeError, InvariantViolation, UnsupportedCombinationError
from hblm.core.lattices import Lattice
from hblm.core.linalg import RMatrix, block_diag, is_invertible, kernel
from hblm.core.rings import Code, Elem, RingCtx

logger = logging.getLogger(__name__)

FormKind = Literal["alternating", "symmetric"]


@dataclass(frozen=True)
class GramForm:
    gram: RMatrix
    kind: FormKind

    def __post_init__(self) -> None:
        if not self.gram.is_square():
            raise ValueError("Gram matrix must be square")
        flipped = self.gram.transpose()
        expected = -self.gram if self.kind == "alternating" else self.gram
        if flipped != expected:
            raise ValueError(f"Gram matrix is not {self.kind}")
        if self.kind == "alternating" and any(self.gram.data[i][i] for i in range(self.gram.nrows)):
            raise ValueError("alternating Gram needs a zero diagonal")

    def pair(self, x: Sequence[Code], y: Sequence[Code]) -> Code:
        ring = self.gram.ring
        acc = ring.zero
        for xi, gy in zip(x, self.gram.apply(y)):
            if xi and gy:
                acc = ring.add(acc, ring.mul(xi, gy))
        return acc

    def in_basis(self, basis: RMatrix) -> "GramForm":
        return GramForm(basis.transpose() @ self.gram @ basis, self.kind)

    def is_perfect(self) -> bool:
        return is_invertible(self.gram)


def eval_alt_form(ctx: RingCtx, x: Sequence[Code], y: Sequence[Code]) -> Elem:
    """<x, y> = x1*y2 - x2*y1 with values in O_R."""
    g = ctx.g
    left = ctx.mul_vectors(x[:g], y[g:])
    right = ctx.mul_vectors(x[g:], y[:g])
    return ctx.order_elem([ctx.base.sub(a, b) for a, b in zip(left, right)])


@lru_cache(maxsize=None)
def coordinate_grams(ctx: RingCtx) -> tuple[GramForm, ...]:
    """One R-valued alternating form per monomial coefficient of <., .>."""
    g, base = ctx.g, ctx.base
    forms = []
    for k in range(g):
        rows = [[0] * (2 * g) for _ in range(2 * g)]
        for m1 in range(g):
            reg = ctx.mono_regs[m1]
            for m2 in range(g):
                c = reg[k][m2]
                rows[m1][g + m2] = c
                rows[g + m2][m1] = base.neg(c)
        forms.append(GramForm(RMatrix.from_rows(base, rows), "alternating"))
    return tuple(forms)


@lru_cache(maxsize=None)
def trace_form_gram(ctx: RingCtx) -> GramForm:
    """Tr(d * <., .>) with d the inverse different; tame rings only."""
    weights = ctx.trace_weights()
    g = ctx.g
    total = RMatrix.zeros(ctx.base, 2 * g, 2 * g)
    for w, form in zip(weights, coordinate_grams(ctx)):
        if w:
            total = total + form.gram.scale(w)
    form = GramForm(total, "alternating")
    if not form.is_perfect():
        raise InvariantViolation(f"trace form over {ctx.spec.to_text()} is degenerate")
    return form


def _require_totally_ramified(ctx: RingCtx) -> None:
    if ctx.f != 1:
        raise UnsupportedCombinationError("chart forms need f = 1")


@lru_cache(maxsize=None)
def beta_gram(ctx: RingCtx) -> GramForm:
    """Symmetric form pairing pi^a f1 with pi^b f2 exactly when a + b = e - 1."""
    _require_totally_ramified(ctx)
    e = ctx.e
    rows = [[0] * (2 * e) for _ in range(2 * e)]
    for a in range(e):
        rows[a][e + e - 1 - a] = 1
        rows[e + e - 1 - a][a] = 1
    form = GramForm(RMatrix.from_rows(ctx.base, rows), "symmetric")
    return form


def check_type(ctx: RingCtx, i: int, j: int) -> None:
    _require_totally_ramified(ctx)
    if i < 0 or j < i or i + j != ctx.e:
        raise BadTypeError(f"type ({i},{j}) needs 0 <= i <= j and i + j = {ctx.e}")


def chart_order(ctx: RingCtx, i: int, j: int) -> tuple[int, ...]:
    """Standard coordinates in chart order: F0 = pi^{e-1}f1..pi^i f1, pi^{e-1}f2..pi^j f2, then F1."""
    check_type(ctx, i, j)
    e = ctx.e
    f0 = [a for a in range(e - 1, i - 1, -1)] + [e + a for a in range(e - 1, j - 1, -1)]
    f1 = [a for a in range(i - 1, -1, -1)] + [e + a for a in range(j - 1, -1, -1)]
    return tuple(f0 + f1)


def chart_basis(ctx: RingCtx, i: int, j: int) -> RMatrix:
    """Permutation matrix S with chart coordinates mapped to standard ones."""
    order = chart_order(ctx, i, j)
    size = len(order)
    rows = [[0] * size for _ in range(size)]
    for c, std in enumerate(order):
        rows[std][c] = 1
    return RMatrix.from_rows(ctx.base, rows)


def jordan_block(ctx: RingCtx, size: int) -> RMatrix:
    rows = [[int(c == r + 1) for c in range(size)] for r in range(size)]
    return RMatrix.from_rows(ctx.base, rows, size)


def corner(ctx: RingCtx, nrows: int, ncols: int, value: Code = 1) -> RMatrix:
    """The nrows x ncols matrix with ``value`` at the lower-left entry."""
    rows = [[0] * ncols for _ in range(nrows)]
    if nrows and ncols:
        rows[nrows - 1][0] = value
    return RMatrix.from_rows(ctx.base, rows, ncols) if nrows else RMatrix.zeros(ctx.base, 0, ncols)


def _blocks(ctx: RingCtx, grid: list[list[RMatrix]]) -> RMatrix:
    out = None
    for row in grid:
        line = row[0]
        for blk in row[1:]:
            line = line.hstack(blk)
        out = line if out is None else out.vstack(line)
    return out


def pi_matrix(ctx: RingCtx, i: int, j: int) -> RMatrix:
    """Multiplication by pi in the chart basis of type (i, j)."""
    check_type(ctx, i, j)
    e, pu = ctx.e, ctx.pu
    if i == 0:
        blk = jordan_block(ctx, e) + corner(ctx, e, e, pu)
        return block_diag(blk, blk)
    z = lambda r, c: RMatrix.zeros(ctx.base, r, c)  # noqa: E731
    k_i, k_j = jordan_block(ctx, i), jordan_block(ctx, j)
    return _blocks(
        ctx,
        [
            [k_j, z(j, i), corner(ctx, j, i), z(j, j)],
            [z(i, j), k_i, z(i, i), corner(ctx, i, j)],
            [corner(ctx, i, j, pu), z(i, i), k_i, z(i, j)],
            [z(j, j), corner(ctx, j, i, pu), z(j, i), k_j],
        ],
    )


def t_matrix(ctx: RingCtx) -> RMatrix:
    e = ctx.e
    return RMatrix.from_rows(ctx.base, [[int(r + c == e - 1) for c in range(e)] for r in range(e)])


def j_matrix(ctx: RingCtx, i: int, j: int) -> RMatrix:
    """Antidiagonal with j entries 1 then i entries -1."""
    check_type(ctx, i, j)
    e, base = ctx.e, ctx.base
    rows = [[0] * e for _ in range(e)]
    for k in range(e):
        rows[k][e - 1 - k] = 1 if k < j else base.neg(1)
    return RMatrix.from_rows(base, rows)


def chart_trace_gram(ctx: RingCtx, i: int, j: int) -> RMatrix:
    """(0 J; -tJ 0) in the chart basis of type (i, j)."""
    jm = j_matrix(ctx, i, j)
    zero = RMatrix.zeros(ctx.base, ctx.e, ctx.e)
    return zero.hstack(jm).vstack((-jm.transpose()).hstack(zero))


def chart_beta_gram(ctx: RingCtx) -> RMatrix:
    """(0 T; T 0)."""
    tm = t_matrix(ctx)
    zero = RMatrix.zeros(ctx.base, ctx.e, ctx.e)
    return zero.hstack(tm).vstack(tm.hstack(zero))


def orth_complement(lat: Lattice, forms: GramForm | Sequence[GramForm]) -> Lattice:
    """Vectors v with form(v, w) = 0 for every w in L and every supplied form."""
    if isinstance(forms, GramForm):
        forms = [forms]
    ctx = lat.ctx
    conditions = None
    for form in forms:
        block = (form.gram @ lat.gens).transpose()
        conditions = block if conditions is None else conditions.vstack(block)
    if conditions is None or conditions.nrows == 0:
        return Lattice.full(ctx)
    return Lattice.from_generators(ctx, kernel(conditions))
