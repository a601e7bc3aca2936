"""Independent closed-form references for the test suite.

Everything here is computed from textbook formulas (coherent-state overlaps,
two-level Rabi dynamics, small matrix exponentials) and deliberately avoids
the library code paths it is used to check.
"""

import cmath
import math

import numpy as np
import scipy.linalg as sla


def coherent_overlap(a, b) -> complex:
    """<a|b> = exp(-(|a|^2+|b|^2)/2 + conj(a) b)."""
    a, b = complex(a), complex(b)
    return cmath.exp(-(abs(a) ** 2 + abs(b) ** 2) / 2 + a.conjugate() * b)


def cat_overlap(alpha: float, theta_1: float, theta_2: float) -> complex:
    """Overlap of normalized even cats at phase angles theta_1, theta_2."""
    b1 = alpha * cmath.exp(1j * theta_1)
    b2 = alpha * cmath.exp(1j * theta_2)

    def four_term(x, y):
        return (
            coherent_overlap(x, y)
            + coherent_overlap(x, -y)
            + coherent_overlap(-x, y)
            + coherent_overlap(-x, -y)
        )

    norm = math.sqrt(four_term(b1, b1).real * four_term(b2, b2).real)
    return four_term(b1, b2) / norm


def rabi_transfer_probability(g: float, t: float) -> float:
    """Resonant two-level population transfer sin^2(g t)."""
    return math.sin(g * t) ** 2


def branch_amplitude_exact(g_1b, g_2b, delta_1b, delta_2b, n: int, t: float) -> complex:
    """Survival amplitude of |2, n> under the two-transition rotating-wave model.

    Exact matrix exponential of the closed 3-state chain
    {|2, n>, |b, n-1>, |1, n>} in the frame where the Hamiltonian is static.
    """
    rn = math.sqrt(n)
    h3 = np.array(
        [
            [0.0, g_2b * rn, 0.0],
            [g_2b * rn, delta_2b, g_1b * rn],
            [0.0, g_1b * rn, delta_2b - delta_1b],
        ],
        dtype=complex,
    )
    v = sla.expm(-1j * h3 * t) @ np.array([1.0, 0.0, 0.0], dtype=complex)
    return complex(v[0])


# Values frozen from arbitrary-precision evaluation (mpmath, 50 digits) of the
# closed forms above.
CAT01_CROSS_OVERLAP_SQ_AT_3_05 = 9.118066413e-5
DELTA_0P1_OVERLAP = 0.988905970368
COHERENT_OVERLAP_1_I = 0.19876611034641295 + 0.3095598756531122j
