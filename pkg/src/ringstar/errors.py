"""Exception hierarchy.

Four broad categories, matching the command-line exit codes:

  ConfigError          malformed input files or schemas        (exit 2)
  ValidationError      inputs violate a documented contract    (exit 3)
  InfeasibleError      valid inputs, but the requested physics
                       has no solution                         (exit 4)
  DimensionCapError    requested Hilbert space exceeds the cap (exit 5)
"""
from __future__ import annotations


class RingStarError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(RingStarError):
    """A configuration file is malformed or violates the schema."""


class ValidationError(RingStarError, ValueError):
    """An input violates a documented precondition.

    Also a ValueError so plain value checks read naturally to callers that
    do not know this package's hierarchy.
    """


class GroundDoubletError(ValidationError):
    """The ring's low-energy spectrum is not a total-S_z = +-1/2 doublet."""


class ConstraintError(ValidationError):
    """An operation requiring the uniform-coupling constraint was given a
    network that violates it."""


class InfeasibleError(RingStarError):
    """The requested protocol or coupling regime has no solution."""


class AnisotropyDivergenceError(InfeasibleError):
    """The transverse matrix-element sum vanishes, so the anisotropy is
    undefined (no effective coupling exists for these linkers)."""


class DimensionCapError(RingStarError):
    """The requested Hilbert-space dimension exceeds the configured cap."""
