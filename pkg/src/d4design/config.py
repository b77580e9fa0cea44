"""Size caps, overridable through environment variables."""

import os


class CapExceeded(ValueError):
    """A requested size is above a configured cap."""


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None or raw.strip() == "":
        return default
    value = int(raw)
    if value < 0:
        raise ValueError(f"{name} must be nonnegative, got {value}")
    return value


def degree_cap() -> int:
    """Largest harmonic degree for which a basis is built (D4DESIGN_DEGREE_CAP)."""
    return _env_int("D4DESIGN_DEGREE_CAP", 18)


def series_cap() -> int:
    """Largest eta-product truncation order (D4DESIGN_SERIES_CAP)."""
    return _env_int("D4DESIGN_SERIES_CAP", 1_000_000)


def theta_budget() -> int:
    """Default truncation order for weighted theta series (D4DESIGN_THETA_BUDGET)."""
    return _env_int("D4DESIGN_THETA_BUDGET", 200)


def shell_cap() -> int:
    """Largest m accepted by shell enumeration (D4DESIGN_SHELL_CAP)."""
    return _env_int("D4DESIGN_SHELL_CAP", 100_000)


def check_cap(what: str, value: int, cap: int, env: str) -> None:
    if value > cap:
        raise CapExceeded(f"{what}={value} exceeds the cap {cap} (raise it with {env})")
