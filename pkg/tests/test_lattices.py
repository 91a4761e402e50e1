import pytest

from hblm.core.exceptions import NotAPointError, NotInvariantError
from hblm.core.lattices import (
    Lattice,
    is_O_invariant,
    is_point,
    is_summand_of_rank,
    module_pi,
    pi_action,
    reduction_type,
    residue_type,
)
from hblm.core.linalg import RMatrix, charpol
from tests.strategies import ring


def _pi_m(ctx):
    """pi*M as the O-span of pi*f1 and pi*f2."""
    g = ctx.g
    pi = ctx.pi().coeffs
    return Lattice.o_span(ctx, [pi + (0,) * g, (0,) * g + pi])


def _o_f1(ctx):
    return Lattice.o_span(ctx, [ctx.one().coeffs + (0,) * ctx.g])


class TestCanonicalForm:
    def test_permuted_generators(self, f3_e2):
        a = Lattice.from_vectors(f3_e2, [(0, 1, 0, 0), (0, 0, 0, 1)])
        b = Lattice.from_vectors(f3_e2, [(0, 0, 0, 1), (0, 1, 0, 0)])
        assert a == b
        assert a.key == b.key

    def test_redundant_generators(self, z9_e2):
        v, w = (1, 2, 0, 3), (0, 3, 1, 1)
        mixed = tuple(z9_e2.base.add(x, z9_e2.base.mul(4, y)) for x, y in zip(v, w))
        assert Lattice.from_vectors(z9_e2, [v, w]) == Lattice.from_vectors(z9_e2, [v, w, mixed])

    def test_pi_m_over_a_field(self, f3_e2):
        lat = _pi_m(f3_e2)
        assert lat.rank == 2
        assert lat.pivots == ((1, 0), (3, 0))

    def test_contains(self, f3_e2):
        lat = _o_f1(f3_e2)
        assert lat.contains((2, 1, 0, 0))
        assert not lat.contains((0, 0, 1, 0))
        assert Lattice.full(f3_e2).includes(lat)
        assert not lat.includes(Lattice.full(f3_e2))

    def test_wrong_dimension(self, f3_e2):
        with pytest.raises(ValueError):
            Lattice.from_generators(f3_e2, RMatrix.identity(f3_e2.base, 3))


class TestSummands:
    def test_full_module(self, f3_e2):
        assert is_summand_of_rank(Lattice.full(f3_e2), 4)

    def test_multiple_of_p(self):
        ctx = ring("p=3 n=2 e=1")
        lat = Lattice.from_vectors(ctx, [(3, 0)])
        assert lat.rank == 1
        assert not is_summand_of_rank(lat, 1)

    def test_pi_m(self, f2_e2):
        assert is_summand_of_rank(_pi_m(f2_e2), 2)

    def test_residue(self, z9_e2):
        lat = _o_f1(z9_e2)
        assert lat.residue() == _o_f1(z9_e2.residue_ctx())


class TestInvariance:
    def test_o_span_is_invariant(self, z9_e2):
        assert is_O_invariant(Lattice.o_span(z9_e2, [(1, 2, 4, 0)]))

    def test_r_span_is_not(self, f3_e2):
        # span_R(f1, pi f2): pi * f1 is missing
        assert not is_O_invariant(Lattice.from_vectors(f3_e2, [(1, 0, 0, 0), (0, 0, 0, 1)]))

    def test_pi_m(self, f3_e2):
        assert is_O_invariant(_pi_m(f3_e2))

    def test_omega_invariance(self, f4):
        one, w = f4.one().coeffs, f4.omega().coeffs
        assert not is_O_invariant(Lattice.from_vectors(f4, [one + (0, 0)]))
        assert is_O_invariant(Lattice.from_vectors(f4, [one + (0, 0), w + (0, 0)]))


class TestPoints:
    def test_free_line(self, f3_e2):
        assert is_point(_o_f1(f3_e2))

    def test_pi_m(self, f3_e2):
        assert is_point(_pi_m(f3_e2))
        assert not is_point(_pi_m(ring("p=3 n=2 e=2")))

    def test_full_module_is_not_a_point(self, f3_e2):
        assert not is_point(Lattice.full(f3_e2))


class TestPiAction:
    def test_dual_number_witness(self, f2eps_e2):
        eps = f2eps_e2.base.uniformizer
        lat = Lattice.from_vectors(f2eps_e2, [(eps, 1, 0, 0), (0, 0, 0, 1)])
        act = pi_action(lat)
        assert charpol(act) == charpol(RMatrix.from_rows(f2eps_e2.base, [[eps, 0], [0, 0]]))
        assert str(charpol(act)) == "X^2 - eps*X"

    def test_pi_m_is_killed(self, f3_e2):
        assert pi_action(_pi_m(f3_e2)).is_zero()

    @pytest.mark.parametrize("text", ["p=3 e=2", "p=3 n=2 e=2", "p=5 e=3 u=2"])
    def test_free_line_is_regular(self, text):
        ctx = ring(text)
        assert charpol(pi_action(_o_f1(ctx))) == charpol(RMatrix.from_rows(ctx.base, ctx.reg_pi))

    def test_not_stable(self, f3_e2):
        lat = Lattice.from_vectors(f3_e2, [(1, 0, 0, 0), (0, 0, 1, 0)])
        with pytest.raises(NotInvariantError):
            pi_action(lat)

    def test_module_pi_power(self, z9_e2):
        p = module_pi(z9_e2)
        assert p.power(z9_e2.e) == RMatrix.identity(z9_e2.base, 4).scale(z9_e2.pu)


class TestReductionType:
    def test_free_line(self, f3_e2):
        assert reduction_type(_o_f1(f3_e2)).chart_types == ((0, 2),)

    def test_pi_m(self, f3_e2):
        kind = reduction_type(_pi_m(f3_e2))
        assert kind.chart_types == ((1, 1),)
        assert str(kind) == "(1,1)"

    def test_type_one_two(self, f5_e3):
        pi = f5_e3.pi()
        first = pi.coeffs + (0, 0, 0)
        second = (0, 0, 0) + f5_e3.power(pi, 2).coeffs
        lat = Lattice.o_span(f5_e3, [first, second])
        assert residue_type(lat).chart_types == ((1, 2),)

    def test_needs_field(self, z9_e2):
        with pytest.raises(NotAPointError):
            reduction_type(_o_f1(z9_e2))
        assert residue_type(_o_f1(z9_e2)).chart_types == ((0, 2),)

    def test_unramified(self, f4):
        assert reduction_type(_o_f1(f4)).chart_types == ((0, 1),)

    def test_unramified_degree_two_ramified(self):
        ctx = ring("p=2 f=2 e=2")
        assert reduction_type(_o_f1(ctx)).chart_types == ((0, 2),)
        assert reduction_type(_pi_m(ctx)).chart_types == ((1, 1),)
