import os

DEFAULT_CELL_CAP = 10**8


class CapExceededError(ValueError):
    """Requested construction is larger than the configured size cap."""


class OAFormatError(ValueError):
    """Malformed orthogonal-array or design file."""


def cell_cap() -> int:
    """Size cap on k*N (or b*v) cells; HERMOA_CELL_CAP overrides the default."""
    raw = os.environ.get("HERMOA_CELL_CAP")
    if raw is None:
        return DEFAULT_CELL_CAP
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"HERMOA_CELL_CAP must be an integer, got {raw!r}") from None
