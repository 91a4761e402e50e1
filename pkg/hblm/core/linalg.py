"""Exact linear algebra over finite chain rings.

Matrices hold base-ring codes. Elimination uses minimal-valuation pivots, which
over a chain ring always divide every remaining entry, so Smith forms, kernels
and the canonical (Howell) span form come out without any gcd machinery.
"""
import itertools
import logging
from dataclasses import dataclass
from typing import Generic, Iterable, Protocol, Sequence, TypeVar

from hblm.core.exceptions import NonCommutingFamilyError, NotAUnitError
from hblm.core.rings import ChainRing, Code, attach, format_terms

logger = logging.getLogger(__name__)

T = TypeVar("T")


@dataclass(frozen=True)
class RMatrix:
    ring: ChainRing
    nrows: int
    ncols: int
    data: tuple[tuple[Code, ...], ...]

    @classmethod
    def from_rows(cls, ring: ChainRing, rows: Iterable[Sequence[Code]], ncols: int | None = None) -> "RMatrix":
        data = tuple(tuple(int(x) for x in row) for row in rows)
        width = len(data[0]) if data else (ncols or 0)
        if ncols is not None and data and width != ncols:
            raise ValueError(f"expected {ncols} columns, got {width}")
        if any(len(row) != width for row in data):
            raise ValueError("matrix rows have different lengths")
        return cls(ring, len(data), width, data)

    @classmethod
    def from_columns(cls, ring: ChainRing, cols: Sequence[Sequence[Code]], nrows: int) -> "RMatrix":
        if not cols:
            return cls.zeros(ring, nrows, 0)
        return cls.from_rows(ring, zip(*cols))

    @classmethod
    def identity(cls, ring: ChainRing, size: int) -> "RMatrix":
        return cls(ring, size, size, tuple(tuple(int(i == j) for j in range(size)) for i in range(size)))

    @classmethod
    def zeros(cls, ring: ChainRing, nrows: int, ncols: int) -> "RMatrix":
        return cls(ring, nrows, ncols, tuple((0,) * ncols for _ in range(nrows)))

    def __getitem__(self, pos: tuple[int, int]) -> Code:
        return self.data[pos[0]][pos[1]]

    def rows(self) -> tuple[tuple[Code, ...], ...]:
        return self.data

    def columns(self) -> list[tuple[Code, ...]]:
        return [tuple(row[j] for row in self.data) for j in range(self.ncols)]

    def __matmul__(self, other: "RMatrix") -> "RMatrix":
        if self.ncols != other.nrows:
            raise ValueError(f"cannot multiply {self.nrows}x{self.ncols} by {other.nrows}x{other.ncols}")
        add, mul = self.ring.add_t, self.ring.mul_t
        cols = other.columns()
        out = []
        for row in self.data:
            out_row = []
            for col in cols:
                acc = 0
                for a, b in zip(row, col):
                    if a and b:
                        acc = add[acc][mul[a][b]]
                out_row.append(acc)
            out.append(tuple(out_row))
        return RMatrix(self.ring, self.nrows, other.ncols, tuple(out))

    def __add__(self, other: "RMatrix") -> "RMatrix":
        add = self.ring.add_t
        return self._zip(other, lambda a, b: add[a][b])

    def __sub__(self, other: "RMatrix") -> "RMatrix":
        sub = self.ring.sub_t
        return self._zip(other, lambda a, b: sub[a][b])

    def __neg__(self) -> "RMatrix":
        neg = self.ring.neg_t
        return RMatrix(self.ring, self.nrows, self.ncols, tuple(tuple(neg[a] for a in row) for row in self.data))

    def _zip(self, other: "RMatrix", op) -> "RMatrix":
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise ValueError("shape mismatch")
        return RMatrix(
            self.ring,
            self.nrows,
            self.ncols,
            tuple(tuple(op(a, b) for a, b in zip(r, s)) for r, s in zip(self.data, other.data)),
        )

    def scale(self, c: Code) -> "RMatrix":
        mul = self.ring.mul_t[c]
        return RMatrix(self.ring, self.nrows, self.ncols, tuple(tuple(mul[a] for a in row) for row in self.data))

    def apply(self, vec: Sequence[Code]) -> tuple[Code, ...]:
        add, mul = self.ring.add_t, self.ring.mul_t
        out = []
        for row in self.data:
            acc = 0
            for a, b in zip(row, vec):
                if a and b:
                    acc = add[acc][mul[a][b]]
            out.append(acc)
        return tuple(out)

    def transpose(self) -> "RMatrix":
        return RMatrix(self.ring, self.ncols, self.nrows, tuple(self.columns()))

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "RMatrix":
        return RMatrix(self.ring, len(rows), len(cols), tuple(tuple(self.data[i][j] for j in cols) for i in rows))

    def hstack(self, other: "RMatrix") -> "RMatrix":
        if self.nrows != other.nrows:
            raise ValueError("hstack needs equal row counts")
        return RMatrix(self.ring, self.nrows, self.ncols + other.ncols, tuple(a + b for a, b in zip(self.data, other.data)))

    def vstack(self, other: "RMatrix") -> "RMatrix":
        if self.ncols != other.ncols:
            raise ValueError("vstack needs equal column counts")
        return RMatrix(self.ring, self.nrows + other.nrows, self.ncols, self.data + other.data)

    def is_zero(self) -> bool:
        return not any(any(row) for row in self.data)

    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def power(self, k: int) -> "RMatrix":
        result, square = RMatrix.identity(self.ring, self.nrows), self
        while k:
            if k & 1:
                result = result @ square
            square = square @ square
            k >>= 1
        return result

    def residue(self, residue_ring: ChainRing) -> "RMatrix":
        """Entrywise reduction to the residue field."""
        res = self.ring.residue
        return RMatrix(residue_ring, self.nrows, self.ncols, tuple(tuple(res(a) for a in row) for row in self.data))

    def pretty(self) -> str:
        label = self.ring.label
        return "[" + ",".join("[" + ",".join(label(a) for a in row) + "]" for row in self.data) + "]"


def block_diag(*blocks: RMatrix) -> RMatrix:
    ring = blocks[0].ring
    ncols = sum(b.ncols for b in blocks)
    rows = []
    offset = 0
    for b in blocks:
        for row in b.data:
            rows.append((0,) * offset + row + (0,) * (ncols - offset - b.ncols))
        offset += b.ncols
    return RMatrix(ring, len(rows), ncols, tuple(rows))


# -- elimination ---------------------------------------------------------------


@dataclass(frozen=True)
class SmithForm:
    """A = U @ D @ V with D diagonal, entries varpi^k in increasing k."""

    U: RMatrix
    D: RMatrix
    V: RMatrix
    U_inv: RMatrix
    V_inv: RMatrix
    pivots: tuple[tuple[int, int], ...]
    profile: tuple[int, ...]

    @property
    def rank(self) -> int:
        """Number of nonzero diagonal entries."""
        length = self.D.ring.length
        return sum(1 for k in self.profile if k < length)

    @property
    def unit_rank(self) -> int:
        return sum(1 for k in self.profile if k == 0)


class _Work:
    """Mutable rows plus the bookkeeping of every elementary operation."""

    def __init__(self, ring: ChainRing, data: Sequence[Sequence[Code]], nrows: int, ncols: int):
        self.ring = ring
        self.d = [list(row) for row in data]
        ident = lambda n: [[int(i == j) for j in range(n)] for i in range(n)]  # noqa: E731
        self.linv, self.lfwd = ident(nrows), ident(nrows)
        self.rinv, self.rfwd = ident(ncols), ident(ncols)

    def swap_rows(self, i: int, j: int) -> None:
        if i == j:
            return
        self.d[i], self.d[j] = self.d[j], self.d[i]
        self.lfwd[i], self.lfwd[j] = self.lfwd[j], self.lfwd[i]
        for row in self.linv:
            row[i], row[j] = row[j], row[i]

    def swap_cols(self, i: int, j: int) -> None:
        if i == j:
            return
        for row in self.d:
            row[i], row[j] = row[j], row[i]
        for row in self.rfwd:
            row[i], row[j] = row[j], row[i]
        self.rinv[i], self.rinv[j] = self.rinv[j], self.rinv[i]

    def add_row(self, target: int, source: int, c: Code) -> None:
        """row[target] += c * row[source]."""
        add, mul, sub = self.ring.add_t, self.ring.mul_t, self.ring.sub_t
        for mat in (self.d, self.lfwd):
            src, dst = mat[source], mat[target]
            for k, x in enumerate(src):
                if x:
                    dst[k] = add[dst[k]][mul[c][x]]
        for row in self.linv:
            if row[target]:
                row[source] = sub[row[source]][mul[c][row[target]]]

    def add_col(self, target: int, source: int, c: Code) -> None:
        """col[target] += c * col[source]."""
        add, mul, sub = self.ring.add_t, self.ring.mul_t, self.ring.sub_t
        for mat in (self.d, self.rfwd):
            for row in mat:
                if row[source]:
                    row[target] = add[row[target]][mul[c][row[source]]]
        src, dst = self.rinv[target], self.rinv[source]
        for k, x in enumerate(src):
            if x:
                dst[k] = sub[dst[k]][mul[c][x]]

    def scale_row(self, i: int, w: Code) -> None:
        mul = self.ring.mul_t[w]
        self.d[i] = [mul[x] for x in self.d[i]]
        self.lfwd[i] = [mul[x] for x in self.lfwd[i]]
        winv = self.ring.mul_t[self.ring.inv(w)]
        for row in self.linv:
            row[i] = winv[row[i]]


def chain_echelon(a: RMatrix) -> SmithForm:
    """Smith form by minimal-valuation pivoting."""
    ring = a.ring
    work = _Work(ring, a.data, a.nrows, a.ncols)
    val = ring.val_t
    pivots = []
    profile = []
    for t in range(min(a.nrows, a.ncols)):
        best = None
        for i in range(t, a.nrows):
            row = work.d[i]
            for j in range(t, a.ncols):
                if row[j] and (best is None or val[row[j]] < best[0]):
                    best = (val[row[j]], i, j)
                    if best[0] == 0:
                        break
            if best is not None and best[0] == 0:
                break
        if best is None:
            profile.extend([ring.length] * (min(a.nrows, a.ncols) - t))
            break
        k, i, j = best
        pivots.append((i, j))
        work.swap_rows(t, i)
        work.swap_cols(t, j)
        unit = ring.reduce(work.d[t][t], k)[1]
        work.scale_row(t, ring.inv(unit))
        gen = ring.uniformizer_power(k)
        for i in range(t + 1, a.nrows):
            x = work.d[i][t]
            if x:
                work.add_row(i, t, ring.neg(ring.div(x, gen)))
        for j in range(t + 1, a.ncols):
            x = work.d[t][j]
            if x:
                work.add_col(j, t, ring.neg(ring.div(x, gen)))
        profile.append(k)

    mat = lambda rows, n, m: RMatrix(ring, n, m, tuple(tuple(r) for r in rows))  # noqa: E731
    return SmithForm(
        U=mat(work.linv, a.nrows, a.nrows),
        D=mat(work.d, a.nrows, a.ncols),
        V=mat(work.rinv, a.ncols, a.ncols),
        U_inv=mat(work.lfwd, a.nrows, a.nrows),
        V_inv=mat(work.rfwd, a.ncols, a.ncols),
        pivots=tuple(pivots),
        profile=tuple(profile),
    )


def kernel(a: RMatrix) -> RMatrix:
    """Generators (as columns) of {v : a @ v = 0}."""
    ring = a.ring
    smith = chain_echelon(a)
    gens = []
    for i in range(a.ncols):
        if i < len(smith.profile):
            k = smith.profile[i]
            if k == 0:
                continue
            c = ring.uniformizer_power(ring.length - k)
        else:
            c = ring.one
        w = [0] * a.ncols
        w[i] = c
        gens.append(smith.V_inv.apply(w))
    return RMatrix.from_columns(ring, gens, a.ncols)


def solve(a: RMatrix, b: RMatrix) -> RMatrix | None:
    """Some X with a @ X = b, or None."""
    ring = a.ring
    smith = chain_echelon(a)
    rhs = smith.U_inv @ b
    diag = min(a.nrows, a.ncols)
    cols = []
    for col in rhs.columns():
        y = [0] * a.ncols
        for i, x in enumerate(col):
            if i >= diag:
                if x:
                    return None
                continue
            k = smith.profile[i]
            if k >= ring.length:
                if x:
                    return None
                continue
            z = ring.div(x, ring.uniformizer_power(k))
            if z is None:
                return None
            y[i] = z
        cols.append(smith.V_inv.apply(y))
    return RMatrix.from_columns(ring, cols, a.ncols) if cols else RMatrix.zeros(ring, a.ncols, 0)


def inverse(a: RMatrix) -> RMatrix:
    if not a.is_square():
        raise NotAUnitError("only square matrices can be inverted")
    smith = chain_echelon(a)
    if any(smith.profile):
        raise NotAUnitError("matrix is not invertible")
    return smith.V_inv @ smith.U_inv


def is_invertible(a: RMatrix) -> bool:
    return a.is_square() and not any(chain_echelon(a).profile)


def rank(a: RMatrix) -> int:
    """Rank over a field; the number of nonzero Smith entries in general."""
    return chain_echelon(a).rank


# -- canonical spans -----------------------------------------------------------


def _axpy(ring: ChainRing, y: list[Code], c: Code, x: Sequence[Code]) -> list[Code]:
    add, mul = ring.add_t, ring.mul_t[c]
    return [add[a][mul[b]] if b else a for a, b in zip(y, x)]


def howell_columns(gens: RMatrix) -> tuple[RMatrix, tuple[tuple[int, int], ...]]:
    """Canonical generators of the column span, with (pivot row, valuation) pairs.

    The result is a Howell form on the transposed rows: one generator per pivot,
    pivot entry exactly varpi^k, entries above each pivot reduced. Equal spans
    give identical output.
    """
    ring = gens.ring
    dim = gens.nrows
    pending = [list(col) for col in gens.columns() if any(col)]
    result: list[list[Code]] = []
    pivots: list[tuple[int, int]] = []
    val = ring.val_t
    for c in range(dim):
        hits = [idx for idx, row in enumerate(pending) if row[c]]
        if not hits:
            continue
        best = min(hits, key=lambda idx: val[pending[idx][c]])
        piv = pending.pop(best)
        k = val[piv[c]]
        unit = ring.reduce(piv[c], k)[1]
        winv = ring.mul_t[ring.inv(unit)]
        piv = [winv[x] for x in piv]
        gen = ring.uniformizer_power(k)
        survivors = []
        for row in pending:
            if row[c]:
                row = _axpy(ring, row, ring.neg(ring.div(row[c], gen)), piv)
            if any(row):
                survivors.append(row)
        if k > 0:
            extra = [ring.mul(ring.uniformizer_power(ring.length - k), x) for x in piv]
            if any(extra):
                survivors.append(extra)
        pending = survivors
        result.append(piv)
        pivots.append((c, k))

    for i, (c, k) in enumerate(pivots):
        for h in range(i):
            quot = ring.reduce(result[h][c], k)[1]
            if quot:
                result[h] = _axpy(ring, result[h], ring.neg(quot), result[i])
    return RMatrix.from_columns(ring, result, dim), tuple(pivots)


def free_summand_form(gens: RMatrix) -> tuple[RMatrix, tuple[int, ...]] | None:
    """Basis of a free direct summand with identity on its residue pivot rows.

    The rows are the lexicographically least ones carrying a unit minor, so the
    result only depends on the span. Returns None when the span is not a free
    direct summand.
    """
    ring = gens.ring
    smith = chain_echelon(gens)
    if any(0 < k < ring.length for k in smith.profile):
        return None
    r = smith.unit_rank
    if r == 0:
        return RMatrix.zeros(ring, gens.nrows, 0), ()
    basis = smith.U.submatrix(range(gens.nrows), range(r))
    rows: list[int] = []
    for c in range(gens.nrows):
        if chain_echelon(basis.submatrix(rows + [c], range(r))).unit_rank == len(rows) + 1:
            rows.append(c)
            if len(rows) == r:
                break
    return basis @ inverse(basis.submatrix(rows, range(r))), tuple(rows)


def span_contains(basis: RMatrix, pivots: Sequence[tuple[int, int]], vec: Sequence[Code]) -> bool:
    """Membership in a span given by ``howell_columns``."""
    ring = basis.ring
    rest = list(vec)
    cols = basis.columns()
    pivot_at = {c: (pos, k) for pos, (c, k) in enumerate(pivots)}
    for c in range(len(rest)):
        if not rest[c]:
            continue
        if c not in pivot_at:
            return False
        pos, k = pivot_at[c]
        quot = ring.div(rest[c], ring.uniformizer_power(k))
        if quot is None:
            return False
        rest = _axpy(ring, rest, ring.neg(quot), cols[pos])
    return True


# -- characteristic polynomials ------------------------------------------------


class Algebra(Protocol[T]):
    zero: T
    one: T

    def add(self, a: T, b: T) -> T: ...
    def sub(self, a: T, b: T) -> T: ...
    def mul(self, a: T, b: T) -> T: ...
    def neg(self, a: T) -> T: ...


def berkowitz(matrix: Sequence[Sequence[T]], alg: Algebra[T]) -> list[T]:
    """Coefficients of det(X*I - A), leading coefficient first, division free."""
    n = len(matrix)
    if n == 0:
        return [alg.one]
    if n == 1:
        return [alg.one, alg.neg(matrix[0][0])]
    a = matrix[0][0]
    row = matrix[0][1:]
    col = [r[0] for r in matrix[1:]]
    sub = [r[1:] for r in matrix[1:]]

    def dot(u: Sequence[T], v: Sequence[T]) -> T:
        acc = alg.zero
        for x, y in zip(u, v):
            acc = alg.add(acc, alg.mul(x, y))
        return acc

    # first column of the Toeplitz matrix: 1, -a, -R C, -R A C, ...
    powers = [col]
    for _ in range(n - 2):
        powers.append([dot(r, powers[-1]) for r in sub])
    diag = [alg.one, alg.neg(a)] + [alg.neg(dot(row, v)) for v in powers]
    tail = berkowitz(sub, alg)
    out = []
    for i in range(n + 1):
        acc = alg.zero
        for j in range(min(i + 1, n)):
            acc = alg.add(acc, alg.mul(diag[i - j], tail[j]))
        out.append(acc)
    return out


@dataclass(frozen=True)
class UniPoly:
    """Polynomial in X over a chain ring, coefficients low to high."""

    ring: ChainRing
    coeffs: tuple[Code, ...]

    @classmethod
    def from_coeffs(cls, ring: ChainRing, coeffs: Sequence[Code]) -> "UniPoly":
        trimmed = list(coeffs)
        while trimmed and not trimmed[-1]:
            trimmed.pop()
        return cls(ring, tuple(trimmed))

    @classmethod
    def monomial(cls, ring: ChainRing, degree: int, coeff: Code = 1) -> "UniPoly":
        return cls.from_coeffs(ring, (0,) * degree + (coeff,))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == self.ring.one

    def __add__(self, other: "UniPoly") -> "UniPoly":
        size = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (size - len(self.coeffs))
        b = other.coeffs + (0,) * (size - len(other.coeffs))
        return UniPoly.from_coeffs(self.ring, [self.ring.add(x, y) for x, y in zip(a, b)])

    def __neg__(self) -> "UniPoly":
        return UniPoly(self.ring, tuple(self.ring.neg(x) for x in self.coeffs))

    def __sub__(self, other: "UniPoly") -> "UniPoly":
        return self + (-other)

    def __mul__(self, other: "UniPoly") -> "UniPoly":
        if not self.coeffs or not other.coeffs:
            return UniPoly(self.ring, ())
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, x in enumerate(self.coeffs):
            for j, y in enumerate(other.coeffs):
                if x and y:
                    out[i + j] = self.ring.add(out[i + j], self.ring.mul(x, y))
        return UniPoly.from_coeffs(self.ring, out)

    def __pow__(self, k: int) -> "UniPoly":
        result = UniPoly.monomial(self.ring, 0)
        for _ in range(k):
            result = result * self
        return result

    def evaluate(self, a: RMatrix) -> RMatrix:
        """Horner evaluation at a square matrix."""
        result = RMatrix.zeros(self.ring, a.nrows, a.ncols)
        ident = RMatrix.identity(self.ring, a.nrows)
        for c in reversed(self.coeffs):
            result = result @ a + ident.scale(c)
        return result

    def __str__(self) -> str:
        top = self.degree
        terms = []
        for k in range(top, -1, -1):
            c = self.coeffs[k]
            if not c:
                continue
            mono = "" if k == 0 else ("X" if k == 1 else f"X^{k}")
            terms.extend(_coefficient_terms(self.ring, c, mono, prefer_minus=(top - k) % 2 == 1))
        return format_terms(terms)


def _coefficient_terms(ring: ChainRing, c: Code, mono: str, prefer_minus: bool) -> list[tuple[int, str]]:
    sign, label = ring.signed_label(c, prefer_minus)
    if label == "1" and not mono:
        return [(sign, "1")]
    return [(sign, attach(label, mono))]


def charpol(a: RMatrix) -> UniPoly:
    if not a.is_square():
        raise ValueError("charpol needs a square matrix")
    vec = berkowitz(a.data, a.ring)
    return UniPoly.from_coeffs(a.ring, list(reversed(vec)))


def determinant(a: RMatrix) -> Code:
    """(-1)^n times the constant term of the characteristic polynomial."""
    c0 = charpol(a).coeffs[0]
    return a.ring.neg(c0) if a.nrows % 2 else c0


# -- multivariate polynomials --------------------------------------------------


Exps = tuple[int, ...]


@dataclass(frozen=True)
class MultiPoly:
    """Polynomial in t0..t_{g-1} and X; terms sorted by exponent tuple."""

    ring: ChainRing
    nvars: int
    terms: tuple[tuple[Exps, Code], ...]

    def __str__(self) -> str:
        names = [f"t{i}" for i in range(self.nvars - 1)] + ["X"]
        top = max((exps[-1] for exps, _ in self.terms), default=0)
        ordered = sorted(self.terms, key=lambda t: (-t[0][-1], tuple(-x for x in t[0][:-1])))
        out = []
        for exps, c in ordered:
            parts = []
            for name, power in zip(names, exps):
                if power:
                    parts.append(name if power == 1 else f"{name}^{power}")
            out.extend(_coefficient_terms(self.ring, c, "*".join(parts), prefer_minus=(top - exps[-1]) % 2 == 1))
        return format_terms(out)


class MultiPolyRing:
    """Arithmetic on ``MultiPoly`` values, usable as a Berkowitz algebra."""

    def __init__(self, ring: ChainRing, nvars: int):
        self.ring = ring
        self.nvars = nvars
        self.zero = MultiPoly(ring, nvars, ())
        self.one = self.const(ring.one)

    def _make(self, terms: dict[Exps, Code]) -> MultiPoly:
        return MultiPoly(self.ring, self.nvars, tuple(sorted((e, c) for e, c in terms.items() if c)))

    def const(self, c: Code) -> MultiPoly:
        return self._make({(0,) * self.nvars: c})

    def var(self, i: int, coeff: Code = 1) -> MultiPoly:
        exps = [0] * self.nvars
        exps[i] = 1
        return self._make({tuple(exps): coeff})

    def add(self, a: MultiPoly, b: MultiPoly) -> MultiPoly:
        out = dict(a.terms)
        for e, c in b.terms:
            out[e] = self.ring.add(out.get(e, 0), c)
        return self._make(out)

    def neg(self, a: MultiPoly) -> MultiPoly:
        return MultiPoly(self.ring, self.nvars, tuple((e, self.ring.neg(c)) for e, c in a.terms))

    def sub(self, a: MultiPoly, b: MultiPoly) -> MultiPoly:
        return self.add(a, self.neg(b))

    def mul(self, a: MultiPoly, b: MultiPoly) -> MultiPoly:
        out: dict[Exps, Code] = {}
        for ea, ca in a.terms:
            for eb, cb in b.terms:
                prod = self.ring.mul(ca, cb)
                if prod:
                    e = tuple(x + y for x, y in zip(ea, eb))
                    out[e] = self.ring.add(out.get(e, 0), prod)
        return self._make(out)


def _commute(a: RMatrix, b: RMatrix) -> bool:
    return a @ b == b @ a


def generic_charpol(actions: Sequence[RMatrix]) -> MultiPoly:
    """charpol of sum_k t_k * A_k as a polynomial in t0..t_{g-1} and X."""
    ring = actions[0].ring
    g = len(actions)
    for a, b in itertools.combinations(actions, 2):
        if not _commute(a, b):
            raise NonCommutingFamilyError()
    alg = MultiPolyRing(ring, g + 1)
    size = actions[0].nrows
    entries = [[alg.zero] * size for _ in range(size)]
    for k, act in enumerate(actions):
        for i in range(size):
            for j in range(size):
                if act.data[i][j]:
                    entries[i][j] = alg.add(entries[i][j], alg.var(k, act.data[i][j]))
    vec = berkowitz(entries, alg)
    result = alg.zero
    x_power = alg.one
    for coeff in reversed(vec):
        result = alg.add(result, alg.mul(coeff, x_power))
        x_power = alg.mul(x_power, alg.var(g))
    logger.debug("generic charpol of a %dx%d family with %d terms", size, size, len(result.terms))
    return result
