"""Finite local rings: the base chain ring R and the order O_R over it.

R is one of Z/p^n, F_p or F_p[eps]. O_R is R[w]/(m(w))[pi]/(pi^e - p*u), a free
R-module of rank g = e*f with basis the monomials w^b pi^a (internal index
b*e + a). Base-ring elements are small integer codes driving precomputed
tables; ``Elem`` wraps codes for callers that want tagged values.
"""
import itertools
import logging
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from math import isqrt
from typing import Iterator, Literal, Sequence

from hblm.core.exceptions import (
    LevelMismatchError,
    NotAUnitError,
    NotPrimeError,
    ReducibleMinPolyError,
    UnsupportedCombinationError,
    WildRamificationError,
)
from hblm.schemas.ring import RingSpec

logger = logging.getLogger(__name__)

Code = int
RawMatrix = tuple[tuple[Code, ...], ...]
ArithOp = Literal["add", "sub", "mul"]


class Level(str, Enum):
    BASE = "R"
    ORDER = "O"


def is_prime(p: int) -> bool:
    return p >= 2 and all(p % d for d in range(2, isqrt(p) + 1))


def _poly_rem(num: Sequence[int], den: Sequence[int], p: int) -> list[int]:
    """Remainder of ``num`` by the monic ``den`` over F_p (low to high)."""
    rem = [c % p for c in num]
    d = len(den) - 1
    for top in range(len(rem) - 1, d - 1, -1):
        c = rem[top]
        if c:
            for i, dc in enumerate(den):
                rem[top - d + i] = (rem[top - d + i] - c * dc) % p
    return rem[:d]


def is_irreducible_mod_p(coeffs: Sequence[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree up to half."""
    deg = len(coeffs) - 1
    if deg < 1 or coeffs[-1] % p != 1:
        return False
    for d in range(1, deg // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            if not any(_poly_rem(coeffs, (*low, 1), p)):
                return False
    return True


def default_min_poly(p: int, f: int) -> tuple[int, ...]:
    """Lexicographically least monic irreducible of degree ``f`` over F_p."""
    for low in itertools.product(range(p), repeat=f):
        candidate = (*low, 1)
        if is_irreducible_mod_p(candidate, p):
            return candidate
    raise ReducibleMinPolyError(f"no irreducible polynomial of degree {f} over F_{p}")


def format_terms(terms: Sequence[tuple[int, str]]) -> str:
    """Join signed ``(sign, text)`` terms into ``a - b + c``."""
    if not terms:
        return "0"
    out = []
    for pos, (sign, text) in enumerate(terms):
        if pos == 0:
            out.append(f"-{text}" if sign < 0 else text)
        else:
            out.append(f" - {text}" if sign < 0 else f" + {text}")
    return "".join(out)


def attach(label: str, mono: str) -> str:
    """Coefficient label times a monomial name."""
    if not mono:
        return label
    if label == "1":
        return mono
    if "+" in label:
        return f"({label})*{mono}"
    return f"{label}*{mono}"


class ChainRing:
    """Z/p^n or F_p[eps] with table-driven arithmetic.

    A code ``a0 + q*a1`` stands for ``a0 + a1*eps`` with ``q = p**n``; without
    eps codes are just residues mod q.
    """

    def __init__(self, p: int, n: int = 1, eps: bool = False):
        if eps and n > 1:
            raise UnsupportedCombinationError("eps requires n = 1")
        self.p = p
        self.n = n
        self.eps = eps
        self.q = p**n
        self.size = self.q * self.q if eps else self.q
        self.length = 2 if eps else n
        self.zero: Code = 0
        self.one: Code = 1
        self.uniformizer: Code = self.encode(0, 1) if eps else self.encode(p)

        pairs = [self.decode(c) for c in range(self.size)]
        self.add_t = tuple(
            tuple(self.encode(a0 + b0, a1 + b1) for b0, b1 in pairs) for a0, a1 in pairs
        )
        self.mul_t = tuple(
            tuple(self.encode(a0 * b0, a0 * b1 + a1 * b0) for b0, b1 in pairs)
            for a0, a1 in pairs
        )
        self.neg_t = tuple(self.encode(-a0, -a1) for a0, a1 in pairs)
        self.sub_t = tuple(
            tuple(self.add_t[a][self.neg_t[b]] for b in range(self.size))
            for a in range(self.size)
        )
        self.val_t = tuple(self._valuation(c) for c in range(self.size))
        self.inv_t = tuple(self._inverse(c) for c in range(self.size))

        powers = [self.one]
        for _ in range(self.length):
            powers.append(self.mul_t[powers[-1]][self.uniformizer])
        self.pow_t = tuple(powers)

        # reduce_t[k][x] = (rep, quot) with x = rep + quot * varpi^k, rep minimal
        self.reduce_t = tuple(self._reduction_table(k) for k in range(self.length + 1))
        self.div_t = tuple(
            tuple(self._exact_div(x, y) for y in range(self.size)) for x in range(self.size)
        )

    def __eq__(self, other: object) -> bool:
        return isinstance(other, ChainRing) and (self.p, self.n, self.eps) == (
            other.p,
            other.n,
            other.eps,
        )

    def __hash__(self) -> int:
        return hash((self.p, self.n, self.eps))

    def __repr__(self) -> str:
        return f"ChainRing({self.name})"

    @property
    def name(self) -> str:
        if self.eps:
            return f"F_{self.p}[eps]"
        return f"F_{self.p}" if self.n == 1 else f"Z/{self.q}"

    @property
    def is_field(self) -> bool:
        return self.length == 1

    def encode(self, a0: int, a1: int = 0) -> Code:
        if self.eps:
            return a0 % self.q + self.q * (a1 % self.q)
        return a0 % self.q

    def decode(self, c: Code) -> tuple[int, int]:
        return c % self.q, c // self.q

    def from_int(self, value: int) -> Code:
        return self.encode(value)

    def _valuation(self, c: Code) -> int:
        if c == 0:
            return self.length
        a0, a1 = self.decode(c)
        if self.eps:
            return 0 if a0 % self.p else 1
        v = 0
        while a0 % self.p == 0:
            a0 //= self.p
            v += 1
        return v

    def _inverse(self, c: Code) -> Code | None:
        if self._valuation(c) != 0:
            return None
        a0, a1 = self.decode(c)
        inv0 = pow(a0, -1, self.q)
        return self.encode(inv0, -a1 * inv0 * inv0)

    def _reduction_table(self, k: int) -> tuple[tuple[Code, Code], ...]:
        gen = self.pow_t[k]
        table = []
        for x in range(self.size):
            best = None
            for quot in range(self.size):
                rep = self.sub_t[x][self.mul_t[quot][gen]]
                if best is None or rep < best[0]:
                    best = (rep, quot)
            table.append(best)
        return tuple(table)

    def _exact_div(self, x: Code, y: Code) -> Code | None:
        if y == 0:
            return 0 if x == 0 else None
        k = self.val_t[y]
        unit = self.reduce_t[k][y][1]
        rep, quot = self.reduce_t[k][x]
        if rep:
            return None
        return self.mul_t[quot][self.inv_t[unit]]

    def add(self, a: Code, b: Code) -> Code:
        return self.add_t[a][b]

    def sub(self, a: Code, b: Code) -> Code:
        return self.sub_t[a][b]

    def mul(self, a: Code, b: Code) -> Code:
        return self.mul_t[a][b]

    def neg(self, a: Code) -> Code:
        return self.neg_t[a]

    def val(self, a: Code) -> int:
        return self.val_t[a]

    def is_unit(self, a: Code) -> bool:
        return self.val_t[a] == 0

    def is_zero(self, a: Code) -> bool:
        return a == 0

    def inv(self, a: Code) -> Code:
        inverse = self.inv_t[a]
        if inverse is None:
            raise NotAUnitError(f"{self.label(a)} is not a unit in {self.name}")
        return inverse

    def div(self, x: Code, y: Code) -> Code | None:
        """Some z with y*z = x, or None when v(x) < v(y)."""
        return self.div_t[x][y]

    def reduce(self, x: Code, k: int) -> tuple[Code, Code]:
        return self.reduce_t[k][x]

    def uniformizer_power(self, k: int) -> Code:
        return self.pow_t[min(k, self.length)]

    def residue(self, a: Code) -> int:
        return self.decode(a)[0] % self.p

    def elements(self) -> range:
        return range(self.size)

    def maximal_ideal(self) -> tuple[Code, ...]:
        return tuple(c for c in range(self.size) if self.val_t[c] > 0)

    def label(self, a: Code) -> str:
        """Nonnegative representative: ``2``, ``eps``, ``1+2*eps``."""
        a0, a1 = self.decode(a)
        parts = []
        if a0:
            parts.append(str(a0))
        if a1:
            parts.append("eps" if a1 == 1 else f"{a1}*eps")
        return "+".join(parts) or "0"

    def _weight(self, a: Code) -> int:
        return sum(self.decode(a))

    def signed_label(self, a: Code, prefer_minus: bool = False) -> tuple[int, str]:
        """Print ``a`` as ``+label(a)`` or ``-label(-a)``, whichever is lighter."""
        plus, minus = self._weight(a), self._weight(self.neg_t[a])
        if minus < plus or (minus == plus and prefer_minus):
            return -1, self.label(self.neg_t[a])
        return 1, self.label(a)


@dataclass(frozen=True)
class Elem:
    """Element of R (one code) or of O_R (g codes, monomial w^b pi^a at b*e + a)."""

    level: Level
    coeffs: tuple[Code, ...]
    ring: "RingCtx" = field(compare=False, hash=False, repr=False)

    def __str__(self) -> str:
        return self.ring.format_elem(self)


def _raw_mul(ring: ChainRing, a: RawMatrix, b: RawMatrix) -> RawMatrix:
    add, mul = ring.add_t, ring.mul_t
    cols = list(zip(*b))
    out = []
    for row in a:
        out_row = []
        for col in cols:
            acc = 0
            for x, y in zip(row, col):
                if x and y:
                    acc = add[acc][mul[x][y]]
            out_row.append(acc)
        out.append(tuple(out_row))
    return tuple(out)


def _raw_identity(size: int) -> RawMatrix:
    return tuple(tuple(int(i == j) for j in range(size)) for i in range(size))


def _raw_trace(ring: ChainRing, a: RawMatrix) -> Code:
    acc = ring.zero
    for i, row in enumerate(a):
        acc = ring.add(acc, row[i])
    return acc


class RingCtx:
    """The tower R -> O_R for one ``RingSpec``; build through ``build_ring``."""

    def __init__(self, spec: RingSpec, base: ChainRing, m: tuple[int, ...] | None):
        self.spec = spec
        self.base = base
        self.p, self.n, self.f, self.e = spec.p, spec.n, spec.f, spec.e
        self.eps = spec.eps
        self.g = self.e * self.f
        self.m = m
        self.u = base.from_int(spec.u)
        self.pu = base.mul(base.from_int(self.p), self.u)
        self.monomials = tuple((b, a) for b in range(self.f) for a in range(self.e))

        self.reg_pi = self._regular_pi()
        self.reg_omega = self._regular_omega()
        regs = []
        for b, a in self.monomials:
            mat = _raw_identity(self.g)
            for _ in range(b):
                mat = _raw_mul(base, self.reg_omega, mat)
            for _ in range(a):
                mat = _raw_mul(base, self.reg_pi, mat)
            regs.append(mat)
        self.mono_regs: tuple[RawMatrix, ...] = tuple(regs)
        self.mono_traces = tuple(_raw_trace(base, mat) for mat in regs)

    def __repr__(self) -> str:
        return f"RingCtx({self.spec.to_text()})"

    # -- structure -----------------------------------------------------------

    def _regular_pi(self) -> RawMatrix:
        e, g = self.e, self.g
        rows = [[0] * g for _ in range(g)]
        for b in range(self.f):
            for a in range(e):
                src = b * e + a
                if a + 1 < e:
                    rows[src + 1][src] = 1
                else:
                    rows[b * e][src] = self.pu
        return tuple(tuple(r) for r in rows)

    def _regular_omega(self) -> RawMatrix:
        e, f, g = self.e, self.f, self.g
        rows = [[0] * g for _ in range(g)]
        if f == 1:
            return _raw_identity(g)
        for b in range(f):
            for a in range(e):
                src = b * e + a
                if b + 1 < f:
                    rows[src + e][src] = 1
                else:
                    for c in range(f):
                        rows[c * e + a][src] = self.base.neg(self.base.from_int(self.m[c]))
        return tuple(tuple(r) for r in rows)

    @property
    def is_tame(self) -> bool:
        return self.e % self.p != 0

    def order_size(self) -> int:
        return self.base.size**self.g

    def maximal_ideal_size(self) -> int:
        """|m_O| = |O| / |residue field of O|."""
        return self.order_size() // self.p**self.f

    def residue_ctx(self) -> "RingCtx":
        """Same tower over F_p."""
        spec = self.spec.model_copy(update={"n": 1, "eps": False, "u": self.spec.u % self.p})
        return build_ring(spec)

    def describe(self) -> dict:
        return {
            "ring": self.spec.to_text(),
            "base": self.base.name,
            "base_size": self.base.size,
            "g": self.g,
            "order_size": self.order_size(),
            "maximal_ideal_size": self.maximal_ideal_size(),
            "min_poly": list(self.m) if self.m else None,
            "tame": self.is_tame,
        }

    # -- elements ------------------------------------------------------------

    def elem(self, level: Level, coeffs: Sequence[int]) -> Elem:
        width = 1 if level is Level.BASE else self.g
        if len(coeffs) != width:
            raise ValueError(f"{level.value}-level element needs {width} coefficients")
        return Elem(level, tuple(c % self.base.size for c in coeffs), self)

    def base_elem(self, code: Code) -> Elem:
        return Elem(Level.BASE, (code,), self)

    def order_elem(self, vec: Sequence[Code]) -> Elem:
        return self.elem(Level.ORDER, vec)

    def embed(self, a: Elem) -> Elem:
        if a.level is Level.ORDER:
            return a
        return Elem(Level.ORDER, (a.coeffs[0],) + (0,) * (self.g - 1), self)

    def zero(self, level: Level = Level.ORDER) -> Elem:
        return Elem(level, (0,) * (1 if level is Level.BASE else self.g), self)

    def one(self, level: Level = Level.ORDER) -> Elem:
        return self.embed(self.base_elem(1)) if level is Level.ORDER else self.base_elem(1)

    def monomial(self, b: int, a: int, coeff: Code = 1) -> Elem:
        vec = [0] * self.g
        vec[b * self.e + a] = coeff
        return Elem(Level.ORDER, tuple(vec), self)

    def pi(self) -> Elem:
        if self.e == 1:
            return self.order_elem(tuple(row[0] for row in self.reg_pi))
        return self.monomial(0, 1)

    def omega(self) -> Elem:
        if self.f == 1:
            raise UnsupportedCombinationError("f = 1 has no w")
        return self.monomial(1, 0)

    def eps_elem(self, level: Level = Level.ORDER) -> Elem:
        if not self.eps:
            raise UnsupportedCombinationError("base ring has no eps")
        code = self.base.uniformizer
        return self.embed(self.base_elem(code)) if level is Level.ORDER else self.base_elem(code)

    def mul_matrix(self, vec: Sequence[Code]) -> RawMatrix:
        """Regular representation: column k is x * (k-th monomial)."""
        add, mul = self.base.add_t, self.base.mul_t
        g = self.g
        rows = [[0] * g for _ in range(g)]
        for k, x in enumerate(vec):
            if not x:
                continue
            reg = self.mono_regs[k]
            for i in range(g):
                row, out = reg[i], rows[i]
                for j in range(g):
                    if row[j]:
                        out[j] = add[out[j]][mul[x][row[j]]]
        return tuple(tuple(r) for r in rows)

    def mul_vectors(self, x: Sequence[Code], y: Sequence[Code]) -> tuple[Code, ...]:
        add, mul = self.base.add_t, self.base.mul_t
        reg = self.mul_matrix(x)
        out = []
        for row in reg:
            acc = 0
            for a, b in zip(row, y):
                if a and b:
                    acc = add[acc][mul[a][b]]
            out.append(acc)
        return tuple(out)

    def arith(self, a: Elem, b: Elem, op: ArithOp) -> Elem:
        if a.level is not b.level:
            raise LevelMismatchError(f"cannot {op} {a.level.value} and {b.level.value} elements")
        base = self.base
        if op == "mul":
            if a.level is Level.BASE:
                return self.base_elem(base.mul(a.coeffs[0], b.coeffs[0]))
            return self.order_elem(self.mul_vectors(a.coeffs, b.coeffs))
        table = base.add_t if op == "add" else base.sub_t
        return Elem(a.level, tuple(table[x][y] for x, y in zip(a.coeffs, b.coeffs)), self)

    def neg(self, a: Elem) -> Elem:
        return Elem(a.level, tuple(self.base.neg(c) for c in a.coeffs), self)

    def scale(self, code: Code, a: Elem) -> Elem:
        return Elem(a.level, tuple(self.base.mul(code, c) for c in a.coeffs), self)

    def power(self, a: Elem, k: int) -> Elem:
        result, square = self.one(a.level), a
        while k:
            if k & 1:
                result = self.arith(result, square, "mul")
            square = self.arith(square, square, "mul")
            k >>= 1
        return result

    def is_unit(self, a: Elem) -> bool:
        if a.level is Level.BASE:
            return self.base.is_unit(a.coeffs[0])
        # unit iff the pi^0 part is nonzero in the residue field of O
        return any(self.base.residue(a.coeffs[b * self.e]) for b in range(self.f))

    def invert(self, a: Elem) -> Elem:
        if not self.is_unit(a):
            raise NotAUnitError(f"{self.format_elem(a)} is not a unit")
        if a.level is Level.BASE:
            return self.base_elem(self.base.inv(a.coeffs[0]))
        units = self.order_size() - self.maximal_ideal_size()
        return self.power(a, units - 1)

    def enumerate_elements(self, level: Level) -> Iterator[Elem]:
        """All elements, first coefficient varying fastest."""
        width = 1 if level is Level.BASE else self.g
        for combo in itertools.product(self.base.elements(), repeat=width):
            yield Elem(level, tuple(reversed(combo)), self)

    def trace_reg(self, a: Elem) -> Elem:
        if a.level is Level.BASE:
            return a
        acc = self.base.zero
        for x, t in zip(a.coeffs, self.mono_traces):
            if x and t:
                acc = self.base.add(acc, self.base.mul(x, t))
        return self.base_elem(acc)

    def unramified_trace(self, b: int) -> Code:
        """Trace of w^b from R[w]/(m) down to R."""
        if self.f == 1:
            return self.base.one if b == 0 else self.base.zero
        comp = tuple(
            tuple(self.reg_omega[r * self.e][c * self.e] for c in range(self.f))
            for r in range(self.f)
        )
        mat = _raw_identity(self.f)
        for _ in range(b):
            mat = _raw_mul(self.base, comp, mat)
        return _raw_trace(self.base, mat)

    def different_generator(self) -> tuple[Elem, int]:
        """The inverse different as ``(unit, exponent)`` meaning unit * pi^exponent."""
        if not self.is_tame:
            raise WildRamificationError(f"e={self.e} is divisible by p={self.p}")
        unit = self.base.inv(self.base.from_int(self.e))
        return self.base_elem(unit), 1 - self.e

    def trace_weights(self) -> tuple[Code, ...]:
        """Tr(d * m_k) for each monomial m_k, d the inverse different."""
        self.different_generator()
        return tuple(
            self.unramified_trace(b) if a == self.e - 1 else self.base.zero
            for b, a in self.monomials
        )

    def monomial_name(self, b: int, a: int) -> str:
        parts = []
        if b:
            parts.append("w" if b == 1 else f"w^{b}")
        if a:
            parts.append("pi" if a == 1 else f"pi^{a}")
        return "*".join(parts)

    def format_elem(self, a: Elem) -> str:
        if a.level is Level.BASE:
            sign, text = self.base.signed_label(a.coeffs[0])
            return format_terms([(sign, text)]) if a.coeffs[0] else "0"
        terms = []
        for (b, exp), c in zip(self.monomials, a.coeffs):
            if c:
                sign, label = self.base.signed_label(c)
                terms.append((sign, attach(label, self.monomial_name(b, exp))))
        return format_terms(terms)


@lru_cache(maxsize=None)
def build_ring(spec: RingSpec) -> RingCtx:
    if not is_prime(spec.p):
        raise NotPrimeError(f"p={spec.p} is not prime")
    if spec.eps and spec.n > 1:
        raise UnsupportedCombinationError("eps is only supported over F_p (n = 1)")
    if spec.f > 1 and spec.n > 1:
        raise UnsupportedCombinationError("f > 1 is only supported with n = 1")
    if spec.u % spec.p == 0:
        raise NotAUnitError(f"u={spec.u} is not a unit modulo {spec.p}")
    m = None
    if spec.f > 1:
        if spec.m is None:
            m = default_min_poly(spec.p, spec.f)
        else:
            m = tuple(c % spec.p for c in spec.m)
            if len(m) != spec.f + 1 or not is_irreducible_mod_p(m, spec.p):
                raise ReducibleMinPolyError(
                    f"m={','.join(map(str, spec.m))} is not a monic irreducible of degree {spec.f}"
                )
    elif spec.m is not None and len(spec.m) != 2:
        raise UnsupportedCombinationError("m must be linear when f = 1")
    base = ChainRing(spec.p, spec.n, spec.eps)
    ctx = RingCtx(spec, base, m)
    logger.debug("built ring %s (g=%d, |O|=%d)", spec.to_text(), ctx.g, ctx.order_size())
    return ctx


def ring_arith(a: Elem, b: Elem, op: ArithOp) -> Elem:
    return a.ring.arith(a, b, op)


def is_unit(a: Elem) -> bool:
    return a.ring.is_unit(a)


def invert(a: Elem) -> Elem:
    return a.ring.invert(a)


def enumerate_elements(ctx: RingCtx, level: Level) -> Iterator[Elem]:
    return ctx.enumerate_elements(level)


def trace_reg(a: Elem) -> Elem:
    return a.ring.trace_reg(a)


def different_generator(ctx: RingCtx) -> tuple[Elem, int]:
    return ctx.different_generator()
