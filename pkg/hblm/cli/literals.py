"""Parser for lattice literals such as ``pi*f1+eps*f1 ; pi*f2``."""
import re

from hblm.core.exceptions import LiteralSyntaxError
from hblm.core.lattices import Lattice
from hblm.core.rings import Code, Elem, RingCtx

_TERM = re.compile(r"([+-]?)([^+-]+)")
_POWER = re.compile(r"^(pi|w|eps)(?:\^(\d+))?$")


def _split_terms(text: str) -> list[tuple[int, str]]:
    compact = text.replace(" ", "")
    if not compact:
        raise LiteralSyntaxError("empty expression")
    terms = []
    pos = 0
    for match in _TERM.finditer(compact):
        if match.start() != pos:
            raise LiteralSyntaxError(f"cannot parse {text!r}")
        pos = match.end()
        terms.append((-1 if match.group(1) == "-" else 1, match.group(2)))
    if pos != len(compact):
        raise LiteralSyntaxError(f"cannot parse {text!r}")
    return terms


def _parse_term(ctx: RingCtx, body: str, allow_slot: bool) -> tuple[Elem, int | None]:
    value = ctx.one()
    slot = None
    for factor in body.split("*"):
        if not factor:
            raise LiteralSyntaxError(f"empty factor in {body!r}")
        if factor.isdigit():
            value = ctx.scale(ctx.base.from_int(int(factor)), value)
            continue
        if factor in {"f1", "f2"}:
            if not allow_slot:
                raise LiteralSyntaxError(f"{factor} is not allowed inside a coordinate")
            if slot is not None:
                raise LiteralSyntaxError(f"term {body!r} names two basis vectors")
            slot = int(factor[1]) - 1
            continue
        match = _POWER.match(factor)
        if not match:
            raise LiteralSyntaxError(f"unknown symbol {factor!r}")
        name, exp = match.group(1), int(match.group(2) or 1)
        if name == "eps":
            symbol = ctx.eps_elem() if ctx.eps else None
        elif name == "w":
            symbol = ctx.omega() if ctx.f > 1 else None
        else:
            symbol = ctx.pi()
        if symbol is None:
            raise LiteralSyntaxError(f"{name} is not available in {ctx.spec.to_text()}")
        value = ctx.arith(value, ctx.power(symbol, exp), "mul")
    return value, slot


def parse_generator(ctx: RingCtx, text: str) -> tuple[Code, ...]:
    """One generator: a sum of ``coeff*mono*fk`` terms, or ``[c1, ..., c2g]``."""
    text = text.strip()
    if text.startswith("["):
        if not text.endswith("]"):
            raise LiteralSyntaxError(f"unterminated vector {text!r}")
        parts = [p for p in text[1:-1].split(",")]
        if len(parts) != 2 * ctx.g:
            raise LiteralSyntaxError(f"vector needs {2 * ctx.g} coordinates, got {len(parts)}")
        return tuple(_parse_coordinate(ctx, part) for part in parts)
    slots = [ctx.zero(), ctx.zero()]
    for sign, body in _split_terms(text):
        value, slot = _parse_term(ctx, body, allow_slot=True)
        if slot is None:
            raise LiteralSyntaxError(f"term {body!r} needs f1 or f2")
        if sign < 0:
            value = ctx.neg(value)
        slots[slot] = ctx.arith(slots[slot], value, "add")
    return slots[0].coeffs + slots[1].coeffs


def _parse_coordinate(ctx: RingCtx, text: str) -> Code:
    total = ctx.base.zero
    for sign, body in _split_terms(text):
        value, _ = _parse_term(ctx, body, allow_slot=False)
        if any(value.coeffs[1:]):
            raise LiteralSyntaxError(f"coordinate {text!r} is not in the base ring")
        code = value.coeffs[0]
        total = ctx.base.add(total, code if sign > 0 else ctx.base.neg(code))
    return total


def parse_lattice(ctx: RingCtx, text: str, span: str = "R") -> Lattice:
    """``;``-separated generators; ``span="O"`` closes them under O_R."""
    pieces = [piece for piece in text.split(";") if piece.strip()]
    if not pieces:
        raise LiteralSyntaxError("lattice literal has no generators")
    vectors = [parse_generator(ctx, piece) for piece in pieces]
    if span == "O":
        return Lattice.o_span(ctx, vectors)
    return Lattice.from_vectors(ctx, vectors)
