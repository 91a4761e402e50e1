import pytest

from hblm.core.conditions import is_k
from hblm.core.exceptions import UnknownCheckError
from hblm.core.lattices import Lattice
from hblm.schemas.enumeration import EnumConfig
from hblm.schemas.report import VerificationReport
from hblm.schemas.ring import RingSpec
from hblm.services.verification import CHECK_ALIASES, VerificationService, chart_types
from tests.strategies import ring

F3_E2 = RingSpec(p=3, e=2)


class TestSuite:
    def test_f3_e2(self, verification):
        statuses = {r.check: r.status for r in verification.run_suite([F3_E2])}
        assert statuses == {
            "dp_equals_k": "pass",
            "beta_involution": "pass",
            "trace_criterion": "pass",
            "unramified_collapse": "skipped",
            "rank_one_strict": "pass",
            "dual_number_witness": "skipped",
            "thickening_lift": "pass",
            "field_types": "pass",
            "charpol_identities": "pass",
        }

    def test_counts(self, verification):
        report = verification.run_check("dp_equals_k", F3_E2)
        assert (report.counts.N, report.counts.DP, report.counts.K, report.counts.R) == (13, 13, 13, 12)
        assert report.witnesses == []

    def test_rank_one_evidence(self, verification):
        report = verification.run_check("rank_one_strict", F3_E2)
        assert report.status == "pass"
        assert len(report.witnesses) == 1
        assert report.witnesses[0].startswith("type (1, 1)")

    @pytest.mark.parametrize("spec", [RingSpec(p=2, e=1), RingSpec(p=2, f=2, e=1), RingSpec(p=3, eps=True, e=1)])
    def test_unramified_collapse(self, verification, spec):
        assert verification.run_check("unramified_collapse", spec).status == "pass"

    def test_wild_ring_skips_chart_checks(self, verification):
        spec = RingSpec(p=2, e=2)
        for name in ("beta_involution", "trace_criterion"):
            report = verification.run_check(name, spec)
            assert report.status == "skipped"
            assert "wild" in report.witnesses[0]


class TestDualNumbers:
    def test_witness(self, verification):
        report = verification.run_check("dual_number_witness", RingSpec(p=2, eps=True, e=2))
        assert report.status == "pass"
        assert (report.counts.N, report.counts.DP, report.counts.K) == (1, 0, 0)

    def test_dp_differs_from_k(self, verification):
        report = verification.run_check("dp_equals_k", RingSpec(p=2, eps=True, e=2))
        assert report.counts.DP < report.counts.N

    def test_tame_witness(self, verification):
        assert verification.run_check("dual_number_witness", RingSpec(p=3, eps=True, e=2)).status == "pass"


class TestNegativeControl:
    def test_corrupt_beta_fails(self, settings):
        service = VerificationService(settings, workers=1, corrupt_beta=True)
        report = service.run_check("beta_involution", F3_E2)
        assert report.status == "fail"
        assert report.witnesses


class TestReports:
    def test_unknown_check(self, verification):
        with pytest.raises(UnknownCheckError):
            verification.run_check("no_such_check", F3_E2)
        with pytest.raises(UnknownCheckError):
            verification.run_suite([F3_E2], ["dp_equals_k", "no_such_check"])

    def test_deterministic_payload(self, settings):
        first = VerificationService(settings, workers=1).run_check("trace_criterion", F3_E2)
        second = VerificationService(settings, workers=1).run_check("trace_criterion", F3_E2)
        assert first.payload() == second.payload()
        assert "wall_ms" not in first.payload()["meta"]

    def test_json_round_trip(self, verification):
        report = verification.run_check("field_types", F3_E2)
        assert VerificationReport.model_validate_json(report.model_dump_json()) == report

    def test_chart_types(self):
        assert chart_types(ring("p=5 e=3")) == [(0, 3), (1, 2)]
        assert chart_types(ring("p=3 e=2")) == [(0, 2), (1, 1)]


class TestFieldTypes:
    def test_field_base_has_no_evidence(self, verification):
        report = verification.run_check("field_types", F3_E2)
        assert report.status == "pass"
        assert report.witnesses == []

    def test_dual_numbers_separate_k_from_the_type(self, verification, enumeration, f2eps_e2):
        spec = f2eps_e2.spec
        report = verification.run_check("field_types", spec)
        assert report.status == "pass"
        eps = f2eps_e2.base.uniformizer
        dual = Lattice.from_vectors(f2eps_e2, [(eps, 1, 0, 0), (0, 0, 0, 1)])
        assert f"(K) fails above type (1,1): {dual.key}" in report.witnesses

        failing = {lat.key for lat in enumeration.enum_n_points(EnumConfig(ring=spec)) if not is_k(lat)}
        assert {w.split(": ", 1)[1] for w in report.witnesses} == failing
        assert len(report.witnesses) == report.counts.N - report.counts.K > 0


class TestCheckNames:
    @pytest.mark.parametrize(
        "alias, name",
        [("thm_5_6", "dp_equals_k"), ("sec_2_6", "field_types"), ("prop_2_13_lift", "thickening_lift")],
    )
    def test_aliases(self, verification, alias, name):
        assert verification.resolve(alias) == name
        assert verification.run_check(alias, RingSpec(p=2, e=1)).check == name

    def test_every_alias_names_a_check(self, verification):
        assert sorted(CHECK_ALIASES.values()) == sorted(verification.check_names)

    def test_accepts_a_built_ring(self, verification):
        from_ctx = verification.run_check("dp_equals_k", ring("p=3 e=2"))
        from_spec = verification.run_check("dp_equals_k", F3_E2)
        assert from_ctx.payload() == from_spec.payload()
