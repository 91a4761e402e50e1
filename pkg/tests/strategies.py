from hypothesis import strategies as st

from hblm.core.linalg import RMatrix
from hblm.core.rings import ChainRing, Elem, Level, RingCtx, build_ring
from hblm.schemas.ring import RingSpec

BASE_RINGS = (
    ChainRing(2),
    ChainRing(3),
    ChainRing(5),
    ChainRing(2, 2),
    ChainRing(3, 2),
    ChainRing(2, eps=True),
    ChainRing(3, eps=True),
)


def ring(text: str) -> RingCtx:
    return build_ring(RingSpec.from_text(text))


def base_rings():
    return st.sampled_from(BASE_RINGS)


def codes(ring: ChainRing):
    return st.integers(min_value=0, max_value=ring.size - 1)


def ring_with_codes(count: int):
    return base_rings().flatmap(
        lambda ring: st.tuples(st.just(ring), st.tuples(*[codes(ring)] * count))
    )


def matrices(ring: ChainRing, nrows: int, ncols: int):
    return st.lists(
        st.lists(codes(ring), min_size=ncols, max_size=ncols), min_size=nrows, max_size=nrows
    ).map(lambda rows: RMatrix.from_rows(ring, rows, ncols))


def square_matrices(max_size: int = 3):
    """A base ring together with a square matrix over it."""
    return st.tuples(base_rings(), st.integers(min_value=1, max_value=max_size)).flatmap(
        lambda pair: st.tuples(st.just(pair[0]), matrices(pair[0], pair[1], pair[1]))
    )


def order_elems(ctx: RingCtx):
    return st.tuples(*[codes(ctx.base)] * ctx.g).map(lambda coeffs: Elem(Level.ORDER, coeffs, ctx))


def vectors(ctx: RingCtx):
    return st.tuples(*[codes(ctx.base)] * (2 * ctx.g))
