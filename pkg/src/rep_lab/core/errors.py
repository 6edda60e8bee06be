from __future__ import annotations

import typing as t


class RepError(Exception):
    """Base class for every error raised by rep_lab."""


class ConfigurationError(RepError):
    """Inputs were rejected before any computation."""


class NumericalError(RepError):
    """Integration or post-processing could not produce a trustworthy number."""


class TheoryViolation(RepError):
    """A measured quantity contradicts a proved property of the system."""

    def __init__(self, check: str, residual: float) -> None:
        self.check = check
        self.residual = residual
        super().__init__(f"theory invariant '{check}' violated: residual={residual:.3e}")


class NonPositiveParameter(ConfigurationError):
    def __init__(self, name: str, value: t.Any, requirement: str = "positive") -> None:
        self.name = name
        self.value = value
        super().__init__(f"{name} must be {requirement}, got {value!r}")


class DimensionMismatch(ConfigurationError):
    def __init__(self, expected: int, got: int) -> None:
        self.expected = expected
        self.got = got
        super().__init__(f"expected {expected} entries, got {got}")


class NonFiniteInput(ConfigurationError):
    def __init__(self, name: str) -> None:
        self.name = name
        super().__init__(f"{name} contains a non-finite value")


class DegenerateSpectrum(ConfigurationError):
    """All initial eigenvalues coincide; the two-solution reduction does not exist."""

    def __init__(self) -> None:
        super().__init__("lambda_{1,0} == lambda_{n,0}: use the grouped scalar system")


class OutOfDomain(ConfigurationError):
    def __init__(self, t_value: float, t_blowup: float) -> None:
        self.t = t_value
        self.t_blowup = t_blowup
        super().__init__(f"t={t_value!r} is outside [0, {t_blowup!r})")


class NonPositiveDensity(NumericalError):
    def __init__(self, rho: float) -> None:
        self.rho = rho
        super().__init__(f"density must stay positive, got {rho!r}")


class NonPositiveU(NumericalError):
    """Some u_i <= 0: the integrator reached or passed the blow-up time."""

    def __init__(self, index: int, value: float) -> None:
        self.index = index
        self.value = value
        super().__init__(f"u[{index}] = {value!r} is not positive")


class StepSizeUnderflow(NumericalError):
    def __init__(self, t_value: float, h: float) -> None:
        self.t = t_value
        self.h = h
        super().__init__(f"step size {h:.3e} fell below h_min at t={t_value!r}")


class NonFiniteState(NumericalError):
    def __init__(self, t_value: float) -> None:
        self.t = t_value
        super().__init__(f"state became non-finite at t={t_value!r}")


class NoCrossing(NumericalError):
    def __init__(self, t_lo: float, t_hi: float) -> None:
        self.t_lo = t_lo
        self.t_hi = t_hi
        super().__init__(f"no zero crossing of u_1 in [{t_lo!r}, {t_hi!r}]")


class InsufficientTailSamples(NumericalError):
    def __init__(self, needed: int, got: int, detail: str = "") -> None:
        self.needed = needed
        self.got = got
        suffix = f" ({detail})" if detail else ""
        super().__init__(f"need at least {needed} tail samples, got {got}{suffix}")


class AmbiguousExponent(NumericalError):
    def __init__(self, residuals: t.Mapping[float, float]) -> None:
        self.residuals = dict(residuals)
        pretty = ", ".join(f"{e:g}: {r:.3e}" for e, r in sorted(self.residuals.items()))
        super().__init__(f"trial exponents are not separated: {pretty}")


class NotABlowupTrajectory(RepError):
    def __init__(self, terminal: str) -> None:
        self.terminal = terminal
        super().__init__(f"no blow-up detected before t_max (terminal: {terminal})")


class UnresolvedCase(RepError):
    def __init__(self, reason: str) -> None:
        self.reason = reason
        super().__init__(f"no rate prediction available: {reason}")
