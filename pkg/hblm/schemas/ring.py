from typing import Literal

from pydantic import BaseModel, Field, field_validator


BaseKind = Literal["field", "feps", "zmod"]


def parse_key_values(text: str) -> dict[str, str]:
    """Split ``key=value`` tokens separated by whitespace."""
    values: dict[str, str] = {}
    for token in text.split():
        key, sep, value = token.partition("=")
        if not sep or not key:
            raise ValueError(f"expected key=value, got {token!r}")
        values[key.strip().lower()] = value.strip()
    return values


class RingSummary(BaseModel):
    """Ring parameters as they appear in reports."""
    p: int
    n: int
    f: int
    eps: int
    e: int
    u: int


class RingSpec(BaseModel):
    p: int = Field(..., ge=2)
    n: int = Field(1, ge=1)
    f: int = Field(1, ge=1)
    eps: bool = False
    e: int = Field(1, ge=1)
    u: int = 1
    m: tuple[int, ...] | None = None  # low to high, monic; None picks a default

    model_config = {"frozen": True}

    @field_validator("m")
    @classmethod
    def _non_empty(cls, value: tuple[int, ...] | None) -> tuple[int, ...] | None:
        if value is not None and len(value) < 2:
            raise ValueError("m needs at least two coefficients")
        return value

    @property
    def base_kind(self) -> BaseKind:
        if self.eps:
            return "feps"
        return "zmod" if self.n > 1 else "field"

    def summary(self) -> RingSummary:
        return RingSummary(
            p=self.p, n=self.n, f=self.f, eps=int(self.eps), e=self.e, u=self.u
        )

    def to_text(self) -> str:
        m = "-" if self.m is None else ",".join(str(c) for c in self.m)
        return (
            f"p={self.p} n={self.n} f={self.f} eps={int(self.eps)} "
            f"e={self.e} u={self.u} m={m}"
        )

    @classmethod
    def from_text(cls, text: str) -> "RingSpec":
        """Parse the ``p=3 n=1 f=1 eps=0 e=2 u=1 m=-`` form; omitted keys default."""
        values = parse_key_values(text)
        unknown = set(values) - {"p", "n", "f", "eps", "e", "u", "m", "base"}
        if unknown:
            raise ValueError(f"unknown ring keys: {', '.join(sorted(unknown))}")
        data: dict = {k: int(v) for k, v in values.items() if k in {"p", "n", "f", "e", "u"}}
        if "eps" in values:
            data["eps"] = values["eps"] not in {"0", "false", "no"}
        if "base" in values:
            data.update(base_overrides(values["base"], data.get("n")))
        m = values.get("m", "-")
        if m not in {"", "-"}:
            data["m"] = tuple(int(c) for c in m.split(","))
        return cls(**data)


def base_overrides(base: str, n: int | None) -> dict:
    """Translate ``--base`` into the n/eps fields it implies."""
    if base == "field":
        return {"n": 1, "eps": False}
    if base == "feps":
        return {"n": 1, "eps": True}
    if base == "zmod":
        return {"n": n if n is not None else 2, "eps": False}
    raise ValueError(f"unknown base {base!r}; expected field, feps or zmod")
