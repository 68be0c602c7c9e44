"""Exception hierarchy shared by all wifiplan modules."""

from __future__ import annotations


class WifiPlanError(Exception):
    """Base class for every error raised by this package."""


class InvalidConfig(WifiPlanError, ValueError):
    pass


class UncoverableInstance(WifiPlanError):
    pass


class ParseError(WifiPlanError, ValueError):
    """Malformed instance or LP file. ``where`` names the offending line/field."""

    def __init__(self, message: str, where: str | None = None) -> None:
        self.where = where
        super().__init__(f"{where}: {message}" if where else message)


class NotACover(WifiPlanError, ValueError):
    def __init__(self, uncovered: list[int]) -> None:
        self.uncovered = list(uncovered)
        super().__init__(f"sites do not cover TPs {self.uncovered}")


class InvalidAlpha(WifiPlanError, ValueError):
    pass


class BudgetExceeded(WifiPlanError):
    """Raised when an exact solver hits its size/node budget.

    ``incumbent`` carries the best solution found so far (or a heuristic
    fallback), so callers can degrade gracefully.
    """

    def __init__(self, message: str, incumbent=None) -> None:
        self.incumbent = incumbent
        super().__init__(message)


class ScenarioExplosion(WifiPlanError):
    def __init__(self, tp: int, site: int, count: int) -> None:
        self.tp, self.site, self.count = tp, site, count
        super().__init__(
            f"TP {tp} / site {site}: {count} scenarios exceed the enumeration cap"
        )


class TooManyAPs(WifiPlanError):
    pass


class TooLarge(WifiPlanError):
    pass


class UnknownVariable(WifiPlanError, KeyError):
    pass


class InconsistentDesign(WifiPlanError, ValueError):
    pass


class InvalidInstance(WifiPlanError, ValueError):
    def __init__(self, message: str, field: str) -> None:
        self.field = field
        super().__init__(f"{field}: {message}")
