"""Exception hierarchy for the spectral factorization pipeline.

Errors are split into input problems (bad matrices, non-spectra, malformed
region specs) and internal invariant violations.  The latter indicate a bug
or a silently corrupted input and carry enough context to diagnose.
"""

from __future__ import annotations


class SpecFactError(Exception):
    """Base class for all library errors."""


class ZeroColumn(SpecFactError):
    """A degree-coefficient matrix was requested for a matrix with an
    identically zero column (or row, for the row variants)."""


class NotUnimodular(SpecFactError):
    """A one-sided polynomial inverse was requested for a matrix whose Smith
    form has a nonconstant invariant factor."""


class OnCircleAmbiguous(SpecFactError):
    """Membership of a unit-modulus point was queried against a region that
    excludes the unit circle."""


class UnresolvableCircleProximity(SpecFactError):
    """A numeric root lies within tolerance of the unit circle but no exact
    on-circle factor divides the polynomial."""


class OddOnCircleMultiplicity(SpecFactError):
    """A diagonal entry carries an on-circle root with odd multiplicity; the
    input cannot be the canonical diagonal of a spectrum."""


class OnCircleForbidden(SpecFactError):
    """A weakly unmixed-symplectic region was requested but the input has
    on-circle poles (for the pole region) or on-circle zeroes (for the zero
    region), which the closed-circle variants do not admit."""


class DivisionNotExact(SpecFactError):
    """An entry expected to be Laurent-polynomial failed to be one; signals
    an upstream bug or an input that is not a spectrum."""


class NotPDOnCircle(SpecFactError):
    """The sampled positive-definiteness check on the unit circle failed."""


class DegreeNotReduced(SpecFactError):
    """The degree-reduction loop failed to make progress; the input was not
    positive definite on the circle or not L-unimodular."""


class NotPositiveDefinite(SpecFactError):
    """A constant symmetric matrix has a nonpositive leading principal
    minor."""


class NotASpectrum(SpecFactError):
    """The input matrix is not a spectrum (not para-Hermitian, not positive
    semi-definite on the circle, or structurally inconsistent with one)."""


class RankZero(SpecFactError):
    """The input spectrum is identically zero; no full-row-rank factor
    exists."""


class NotParaUnitary(SpecFactError):
    """A matrix required to be para-unitary is not."""


class NumericFallbackExceededTolerance(SpecFactError):
    """A numerically assisted run produced a factor whose sampled residual
    exceeds the configured tolerance."""
