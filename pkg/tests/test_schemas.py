import pytest
from pydantic import ValidationError

from hblm.config import Settings
from hblm.schemas.cli import CliConfig
from hblm.schemas.enumeration import EnumConfig
from hblm.schemas.ring import RingSpec, base_overrides, parse_key_values


class TestRingSpec:
    def test_defaults(self):
        spec = RingSpec(p=3)
        assert (spec.n, spec.f, spec.eps, spec.e, spec.u, spec.m) == (1, 1, False, 1, 1, None)
        assert spec.base_kind == "field"

    def test_text_form(self):
        spec = RingSpec(p=2, f=2, eps=True, e=1, m=(1, 1, 1))
        assert spec.to_text() == "p=2 n=1 f=2 eps=1 e=1 u=1 m=1,1,1"
        assert RingSpec.from_text(spec.to_text()) == spec
        assert RingSpec(p=3, e=2).to_text() == "p=3 n=1 f=1 eps=0 e=2 u=1 m=-"

    def test_partial_text(self):
        assert RingSpec.from_text("P=3 e=2") == RingSpec(p=3, e=2)

    @pytest.mark.parametrize(
        "base, kind, n",
        [("field", "field", 1), ("feps", "feps", 1), ("zmod", "zmod", 2)],
    )
    def test_base_keyword(self, base, kind, n):
        spec = RingSpec.from_text(f"p=3 base={base}")
        assert spec.base_kind == kind
        assert spec.n == n

    def test_zmod_keeps_explicit_precision(self):
        assert base_overrides("zmod", 3) == {"n": 3, "eps": False}
        with pytest.raises(ValueError):
            base_overrides("padic", None)

    @pytest.mark.parametrize("text", ["p=1", "p=3 e=0", "p=3 m=1", "p=3 q=2", "p=3 e"])
    def test_rejects(self, text):
        with pytest.raises(ValueError):
            RingSpec.from_text(text)

    def test_frozen(self):
        spec = RingSpec(p=3)
        with pytest.raises(ValidationError):
            spec.p = 5
        assert hash(spec) == hash(RingSpec(p=3))

    def test_summary(self):
        assert RingSpec(p=3, eps=True, e=2).summary().model_dump() == {
            "p": 3, "n": 1, "f": 1, "eps": 1, "e": 2, "u": 1,
        }

    def test_parse_key_values(self):
        assert parse_key_values("  P=3   e=2 ") == {"p": "3", "e": "2"}


class TestConfigs:
    def test_enum_config(self):
        with pytest.raises(ValidationError):
            EnumConfig(ring=RingSpec(p=3), workers=0)
        with pytest.raises(ValidationError):
            EnumConfig(ring=RingSpec(p=3), filters=("Q",))

    def test_cli_config(self):
        config = CliConfig(subcommand="verify", budget=10)
        assert config.format == "text"
        assert config.span == "R"
        with pytest.raises(ValidationError):
            CliConfig(subcommand="verify", budget=0)
        with pytest.raises(ValidationError):
            CliConfig(subcommand="verify", budget=10, format="xml")


class TestSettings:
    def test_environment(self, monkeypatch):
        monkeypatch.setenv("HBLM_MAX_CANDIDATES", "5")
        monkeypatch.setenv("HBLM_WORKERS", "3")
        settings = Settings()
        assert settings.MAX_CANDIDATES == 5
        assert settings.resolved_workers() == 3

    def test_all_cores_by_default(self, monkeypatch):
        monkeypatch.delenv("HBLM_WORKERS", raising=False)
        assert Settings().resolved_workers() >= 1
