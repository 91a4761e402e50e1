class HblmError(Exception):
    """Base error; ``exit_code`` is what the command line returns for it."""

    exit_code: int = 2

    def __init__(self, detail: str = "hblm error"):
        super().__init__(detail)
        self.detail = detail


class NotPrimeError(HblmError):
    def __init__(self, detail: str = "p is not prime"):
        super().__init__(detail)


class ReducibleMinPolyError(HblmError):
    def __init__(self, detail: str = "minimal polynomial is reducible modulo p"):
        super().__init__(detail)


class UnsupportedCombinationError(HblmError):
    def __init__(self, detail: str = "unsupported ring combination"):
        super().__init__(detail)


class LevelMismatchError(HblmError):
    def __init__(self, detail: str = "operands live at different ring levels"):
        super().__init__(detail)


class NotAUnitError(HblmError):
    def __init__(self, detail: str = "element is not a unit"):
        super().__init__(detail)


class WildRamificationError(HblmError):
    def __init__(self, detail: str = "e is not a unit: wild ramification"):
        super().__init__(detail)


class NonCommutingFamilyError(HblmError):
    def __init__(self, detail: str = "action matrices do not commute"):
        super().__init__(detail)


class NotInvariantError(HblmError):
    def __init__(self, detail: str = "lattice is not O-invariant"):
        super().__init__(detail)


class NotAPointError(HblmError):
    def __init__(self, detail: str = "lattice is not a point of N"):
        super().__init__(detail)


class BadTypeError(HblmError):
    def __init__(self, detail: str = "invalid chart type"):
        super().__init__(detail)


class NotInChartError(HblmError):
    def __init__(self, detail: str = "lattice does not lie in the chart"):
        super().__init__(detail)


class BudgetExceededError(HblmError):
    def __init__(self, detail: str = "enumeration budget exceeded"):
        super().__init__(detail)


class UnknownCheckError(HblmError):
    def __init__(self, detail: str = "unknown check"):
        super().__init__(detail)


class LiteralSyntaxError(HblmError):
    def __init__(self, detail: str = "cannot parse lattice literal"):
        super().__init__(detail)


class ConfigError(HblmError):
    def __init__(self, detail: str = "invalid configuration"):
        super().__init__(detail)


class InvariantViolation(HblmError):
    """An identity that must hold by construction failed to hold."""

    exit_code = 1

    def __init__(self, detail: str = "internal identity violated"):
        super().__init__(detail)
