"""Size caps, tolerances and the library's exception types."""

from __future__ import annotations

from dataclasses import asdict, dataclass, replace


class GraphlimError(Exception):
    """Base class for library errors."""


class CapExceeded(GraphlimError, ValueError):
    """An input exceeds a configured size cap."""


class InadmissibleError(GraphlimError, ValueError):
    """A (graph, degree bound) pair violates admissibility."""


class InfeasibleError(GraphlimError, ValueError):
    """An exact computation was refused because the instance is too large."""


class ConvergenceError(GraphlimError, ArithmeticError):
    """An iterative numerical method ran out of budget."""


class InvariantViolation(GraphlimError, AssertionError):
    """A checked identity or inequality failed."""


@dataclass(frozen=True)
class Caps:
    max_vertices: int = 2**21
    pattern_vertices: int = 10
    quotient_vertices: int = 7
    canonical_vertices: int = 64
    dense_eigen_vertices: int = 4096
    # above this size the dense eigensolve is delegated to LAPACK
    inrepo_eigen_vertices: int = 512
    matching_edges: int = 48
    matching_bandwidth: int = 20
    chromatic_edges: int = 40
    walk_length: int = 16
    covering_level: int = 20
    hypercube_dim: int = 20

    def to_dict(self) -> dict:
        return asdict(self)

    def updated(self, **kw) -> "Caps":
        unknown = set(kw) - set(asdict(self))
        if unknown:
            raise ValueError(f"unknown cap(s): {sorted(unknown)}")
        return replace(self, **kw)


DEFAULT_CAPS = Caps()

_active = DEFAULT_CAPS


def caps() -> Caps:
    return _active


def set_caps(new: Caps) -> Caps:
    """Install ``new`` as the process-wide caps; returns the previous value."""
    global _active
    old, _active = _active, new
    return old
