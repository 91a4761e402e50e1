import pytest
from hypothesis import given, strategies as st

from hblm.core.exceptions import (
    LevelMismatchError,
    NotAUnitError,
    NotPrimeError,
    ReducibleMinPolyError,
    UnsupportedCombinationError,
    WildRamificationError,
)
from hblm.core.rings import (
    ChainRing,
    Level,
    build_ring,
    default_min_poly,
    enumerate_elements,
    invert,
    is_irreducible_mod_p,
    is_unit,
    ring_arith,
    trace_reg,
)
from hblm.schemas.ring import RingSpec
from tests.strategies import order_elems, ring, ring_with_codes


class TestChainRing:
    @given(ring_with_codes(3))
    def test_ring_axioms(self, data):
        r, (a, b, c) = data
        assert r.add(a, b) == r.add(b, a)
        assert r.mul(a, b) == r.mul(b, a)
        assert r.add(r.add(a, b), c) == r.add(a, r.add(b, c))
        assert r.mul(r.mul(a, b), c) == r.mul(a, r.mul(b, c))
        assert r.mul(a, r.add(b, c)) == r.add(r.mul(a, b), r.mul(a, c))
        assert r.add(a, r.neg(a)) == r.zero
        assert r.sub(a, b) == r.add(a, r.neg(b))
        assert r.mul(a, r.one) == a

    @given(ring_with_codes(1))
    def test_units_invert(self, data):
        r, (a,) = data
        if r.is_unit(a):
            assert r.mul(a, r.inv(a)) == r.one
        else:
            with pytest.raises(NotAUnitError):
                r.inv(a)

    @given(ring_with_codes(2))
    def test_div_exactly_when_valuation_allows(self, data):
        r, (x, y) = data
        z = r.div(x, y)
        if r.val(x) < r.val(y):
            assert z is None
        else:
            assert z is not None
            assert r.mul(y, z) == x

    @given(ring_with_codes(1))
    def test_valuation_matches_uniformizer_power(self, data):
        r, (x,) = data
        k = r.val(x)
        rep, quot = r.reduce(x, k)
        assert rep == r.zero
        if x:
            assert r.is_unit(quot)
            assert r.mul(quot, r.uniformizer_power(k)) == x

    def test_valuations(self):
        z9 = ChainRing(3, 2)
        assert z9.val(3) == 1
        assert z9.val(0) == 2
        assert z9.val(2) == 0
        dual = ChainRing(2, eps=True)
        assert dual.val(dual.uniformizer) == 1
        assert dual.length == 2

    def test_dual_number_square_is_zero(self):
        r = ChainRing(3, eps=True)
        assert r.mul(r.uniformizer, r.uniformizer) == r.zero

    def test_labels(self):
        r = ChainRing(3, eps=True)
        assert r.label(r.encode(1, 2)) == "1+2*eps"
        assert r.label(r.uniformizer) == "eps"
        assert r.label(0) == "0"

    def test_signed_label_picks_the_lighter_sign(self):
        z9 = ChainRing(3, 2)
        assert z9.signed_label(6) == (-1, "3")
        assert z9.signed_label(3) == (1, "3")
        dual = ChainRing(2, eps=True)
        assert dual.signed_label(dual.uniformizer) == (1, "eps")
        assert dual.signed_label(dual.uniformizer, prefer_minus=True) == (-1, "eps")

    def test_eps_needs_prime_field(self):
        with pytest.raises(UnsupportedCombinationError):
            ChainRing(3, 2, eps=True)


class TestMinimalPolynomial:
    def test_default_for_f4(self):
        assert default_min_poly(2, 2) == (1, 1, 1)

    @pytest.mark.parametrize(
        "coeffs, p, expected",
        [
            ((1, 1, 1), 2, True),
            ((1, 0, 1), 2, False),
            ((1, 0, 1), 3, True),
            ((2, 0, 1), 3, False),
            ((1, 1, 0, 1), 2, True),
        ],
    )
    def test_irreducibility(self, coeffs, p, expected):
        assert is_irreducible_mod_p(coeffs, p) is expected


class TestBuildRing:
    def test_sizes(self):
        assert build_ring(RingSpec(p=5, e=2)).order_size() == 25
        ctx = build_ring(RingSpec(p=2, f=2, eps=True, e=1, m=(1, 1, 1)))
        assert ctx.order_size() == 16
        assert ctx.g == 2

    def test_cached(self):
        assert build_ring(RingSpec(p=3, e=2)) is build_ring(RingSpec(p=3, e=2))

    @pytest.mark.parametrize(
        "spec, error",
        [
            (RingSpec(p=4), NotPrimeError),
            (RingSpec(p=3, n=2, eps=True), UnsupportedCombinationError),
            (RingSpec(p=3, e=2, u=3), NotAUnitError),
            (RingSpec(p=2, f=2, m=(1, 0, 1)), ReducibleMinPolyError),
            (RingSpec(p=2, n=2, f=2), UnsupportedCombinationError),
        ],
    )
    def test_rejects(self, spec, error):
        with pytest.raises(error):
            build_ring(spec)

    def test_default_minimal_polynomial(self, f4):
        assert f4.m == (1, 1, 1)
        assert f4.order_size() == 4
        assert f4.maximal_ideal_size() == 1


class TestRingCtx:
    def test_pi_squared(self, f2_e2, z9_e2):
        pi = f2_e2.pi()
        assert ring_arith(pi, pi, "mul") == f2_e2.zero()
        pi = z9_e2.pi()
        assert ring_arith(pi, pi, "mul") == z9_e2.embed(z9_e2.base_elem(3))

    @pytest.mark.parametrize("text", ["p=2 e=2", "p=3 n=2 e=2", "p=5 e=3 u=2", "p=2 f=2 e=2"])
    def test_eisenstein_relation(self, text):
        ctx = ring(text)
        assert ctx.power(ctx.pi(), ctx.e) == ctx.embed(ctx.base_elem(ctx.pu))

    def test_omega_satisfies_minimal_polynomial(self, f4):
        w = f4.omega()
        total = f4.zero()
        for k, c in enumerate(f4.m):
            total = f4.arith(total, f4.scale(f4.base.from_int(c), f4.power(w, k)), "add")
        assert total == f4.zero()

    def test_dual_number_square_is_zero(self, f3eps_e2):
        eps = f3eps_e2.eps_elem()
        assert ring_arith(eps, eps, "mul") == f3eps_e2.zero()

    def test_unit_and_inverse(self, f2_e2):
        one_plus_pi = f2_e2.order_elem((1, 1))
        assert is_unit(one_plus_pi)
        assert invert(one_plus_pi) == one_plus_pi
        assert not is_unit(f2_e2.pi())
        with pytest.raises(NotAUnitError):
            invert(f2_e2.pi())

    def test_base_level_inverse(self):
        ctx = ring("p=3 n=2 e=1")
        assert invert(ctx.base_elem(2)).coeffs == (5,)

    @given(st.data())
    def test_order_arithmetic(self, data):
        ctx = ring("p=2 f=2 e=2")
        a, b, c = (data.draw(order_elems(ctx)) for _ in range(3))
        mul = lambda x, y: ctx.arith(x, y, "mul")  # noqa: E731
        assert mul(a, b) == mul(b, a)
        assert mul(mul(a, b), c) == mul(a, mul(b, c))
        assert mul(a, ctx.arith(b, c, "add")) == ctx.arith(mul(a, b), mul(a, c), "add")
        if ctx.is_unit(a):
            assert mul(a, ctx.invert(a)) == ctx.one()

    def test_level_mismatch(self, f3_e2):
        with pytest.raises(LevelMismatchError):
            f3_e2.arith(f3_e2.base_elem(1), f3_e2.one(), "add")

    def test_enumerate_elements(self, f2_e2, f2eps_e2):
        elems = list(enumerate_elements(f2_e2, Level.ORDER))
        assert [e.coeffs for e in elems] == [(0, 0), (1, 0), (0, 1), (1, 1)]
        assert [str(e) for e in elems] == ["0", "1", "pi", "1 + pi"]
        z9 = ring("p=3 n=2 e=1")
        assert [e.coeffs[0] for e in enumerate_elements(z9, Level.BASE)] == list(range(9))
        assert len(list(enumerate_elements(f2eps_e2, Level.ORDER))) == 16

    def test_trace(self, z9_e2):
        assert trace_reg(z9_e2.one()).coeffs == (2,)
        assert trace_reg(z9_e2.pi()).coeffs == (0,)
        pi_squared = z9_e2.power(z9_e2.pi(), 2)
        assert trace_reg(pi_squared).coeffs == (6,)
        ctx = ring("p=5 e=3 u=2")
        assert trace_reg(ctx.power(ctx.pi(), 3)).coeffs == (ctx.base.from_int(3 * 5 * 2),)

    def test_different_generator(self, f3_e2, f2_e2):
        unit, exponent = f3_e2.different_generator()
        assert unit.coeffs == (2,)
        assert exponent == -1
        unit, exponent = ring("p=2 e=1").different_generator()
        assert (unit.coeffs, exponent) == ((1,), 0)
        with pytest.raises(WildRamificationError):
            f2_e2.different_generator()

    def test_trace_weights(self, f3_e2, f4):
        assert f3_e2.trace_weights() == (0, 1)
        # Tr(1) = 2 = 0 and Tr(w) = 1 from F_4 down to F_2
        assert f4.trace_weights() == (0, 1)

    def test_format_elem(self, f3_e2):
        assert f3_e2.format_elem(f3_e2.order_elem((1, 2))) == "1 - pi"
        assert f3_e2.format_elem(f3_e2.zero()) == "0"
        assert str(f3_e2.base_elem(2)) == "-1"

    def test_residue_ctx(self, z9_e2):
        res = z9_e2.residue_ctx()
        assert res.base.is_field
        assert (res.p, res.e, res.f) == (3, 2, 1)
