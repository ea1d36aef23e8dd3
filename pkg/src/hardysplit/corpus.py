"""Named exact test functions shared by the CLI and the test suite.

Each entry carries the closed-form evaluator, its Laurent form in
beta(z) = (i-z)/(z+i) when the poles sit at +-i, a general rational form
otherwise, and which half plane (if any) the function extends to.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .rational import GeneralRational, LaurentRational, to_general

# Which closed half plane carries the analytic extension.
UPPER = "upper"
LOWER = "lower"
TWO_SIDED = "two_sided"
ZERO = "zero"


@dataclass(frozen=True)
class CorpusEntry:
    """Exact function with its rational bookkeeping."""

    name: str
    description: str
    f: object  # evaluator on real or complex arrays, away from its poles
    side: str
    laurent: LaurentRational | None = None
    general: GeneralRational | None = None

    def boundary(self, x):
        """Values on the real line."""
        return np.asarray(self.f(np.asarray(x, dtype=complex)), dtype=complex)


def _upper_double(z):
    z = np.asarray(z, dtype=complex)
    return -4.0 / (z + 1j) ** 2


def _lower_double(z):
    z = np.asarray(z, dtype=complex)
    return -4.0 / (z - 1j) ** 2


def _lorentzian(z):
    z = np.asarray(z, dtype=complex)
    return 4.0 / (z * z + 1.0)


def _upper_triple(z):
    z = np.asarray(z, dtype=complex)
    return 1.0 / ((z + 1j) ** 2 * (z + 2j))


def _zero(z):
    return np.zeros(np.shape(np.asarray(z)), dtype=complex)


# -4/(z+i)^2 = (1+beta)^2 and its reflection -4/(z-i)^2 = (1+1/beta)^2;
# their boundary sum is the lorentzian 2 + beta + 1/beta = 4/(x^2+1).
_UPPER_DOUBLE_LAURENT = LaurentRational.from_dict({0: 1.0, 1: 2.0, 2: 1.0})
_LOWER_DOUBLE_LAURENT = LaurentRational.from_dict({0: 1.0, -1: 2.0, -2: 1.0})
_LORENTZIAN_LAURENT = LaurentRational.from_dict({-1: 1.0, 0: 2.0, 1: 1.0})

_ENTRIES = {
    "upper_double_pole": CorpusEntry(
        name="upper_double_pole",
        description="-4/(z+i)^2, analytic above the line, double pole at -i",
        f=_upper_double,
        side=UPPER,
        laurent=_UPPER_DOUBLE_LAURENT,
        general=to_general(_UPPER_DOUBLE_LAURENT),
    ),
    "lower_double_pole": CorpusEntry(
        name="lower_double_pole",
        description="-4/(z-i)^2, analytic below the line, double pole at i",
        f=_lower_double,
        side=LOWER,
        laurent=_LOWER_DOUBLE_LAURENT,
        general=to_general(_LOWER_DOUBLE_LAURENT),
    ),
    "lorentzian": CorpusEntry(
        name="lorentzian",
        description="4/(x^2+1), real even boundary data, poles at both +-i",
        f=_lorentzian,
        side=TWO_SIDED,
        laurent=_LORENTZIAN_LAURENT,
        general=to_general(_LORENTZIAN_LAURENT),
    ),
    "upper_triple_pole": CorpusEntry(
        name="upper_triple_pole",
        description="(z+i)^{-2} (z+2i)^{-1}, upper-analytic with a pole off -i",
        f=_upper_triple,
        side=UPPER,
        general=GeneralRational(
            numer=np.ones(1, dtype=complex),
            scale=1.0,
            poles=((-1j, 2), (-2j, 1)),
        ),
    ),
    "zero": CorpusEntry(
        name="zero",
        description="the zero function",
        f=_zero,
        side=ZERO,
        laurent=LaurentRational(np.zeros(1)),
    ),
}


def get(name: str) -> CorpusEntry:
    try:
        return _ENTRIES[name]
    except KeyError:
        raise KeyError(
            f"unknown corpus name {name!r}; choose from {sorted(_ENTRIES)}"
        ) from None


def names() -> list:
    return sorted(_ENTRIES)


def blend_pair() -> tuple:
    """The conjugate pair joined by the real-pole blend construction."""
    return _UPPER_DOUBLE_LAURENT, _LOWER_DOUBLE_LAURENT
