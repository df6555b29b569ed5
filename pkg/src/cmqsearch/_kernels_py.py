"""Pure-Python success-probability kernels.

Reference implementation of the hot scalar kernels; the Cython module
``cmqsearch._kernels`` mirrors this API bit-for-bit (same operations in the
same order) so both backends agree to the last ulp.

All functions take raw floats.  ``phi`` may be anywhere in (0, 2*pi) here --
the (0, pi] normalization is a domain-type concern of the analytic layer, and
keeping the kernel unrestricted lets the phase-symmetry P(phi) = P(2*pi - phi)
be checked directly.
"""

import math

BACKEND = "python"


def delta_angle(phi: float, lam: float) -> float:
    """Per-iteration rotation angle delta with cos(delta) = 1 - lam*(1 - cos(phi)).

    Evaluated as 2*asin(sqrt(u/2)) with u = lam*(1 - cos(phi)), which stays
    accurate as u -> 0 where arccos(1 - u) loses all precision.
    """
    u = lam * (1.0 - math.cos(phi))
    return 2.0 * math.asin(math.sqrt(0.5 * u))


def p_success(k: int, phi: float, lam: float) -> float:
    """Success probability after k matched-phase iterations, clamped to [0, 1].

    Uses the cancellation-free coefficient forms
        A = (lam - 1) / (2 - u),   B = (1 + lam*cos(phi)) / (2 - u),
    with u = lam*(1 - cos(phi)); these are algebraically identical to the
    sin^2(theta)/sin^2(delta) forms but stay finite for u -> 0.
    """
    c = math.cos(phi)
    u = lam * (1.0 - c)
    if u <= 0.0:
        # phi -> 0 limit: the iteration is -identity, probability stays lam.
        return lam
    d = 2.0 * math.asin(math.sqrt(0.5 * u))
    a = (lam - 1.0) / (2.0 - u)
    b = (1.0 + lam * c) / (2.0 - u)
    p = a * math.cos((2 * k + 1) * d) + b
    if p < 0.0:
        return 0.0
    if p > 1.0:
        return 1.0
    return p


def p_coefficients(k: int, phi: float, lam: float) -> tuple[float, float]:
    """Coefficients (A, B) of P = A*cos((2k+1)*delta) + B at this lam."""
    c = math.cos(phi)
    u = lam * (1.0 - c)
    if u <= 0.0:
        return 0.0, lam
    return (lam - 1.0) / (2.0 - u), (1.0 + lam * c) / (2.0 - u)


def p_derivative(k: int, phi: float, lam: float) -> float:
    """dP/dlam of the success probability (unclamped)."""
    c = math.cos(phi)
    u = lam * (1.0 - c)
    if u <= 0.0:
        return 1.0  # P == lam in the phi -> 0 limit
    cd = 1.0 - u
    d = 2.0 * math.asin(math.sqrt(0.5 * u))
    sd = math.sin(d)
    n = 2 * k + 1
    inner = (1.0 + c) * (1.0 + math.cos(n * d)) \
        - n * (c - cd) * (1.0 + cd) * (math.sin(n * d) / sd)
    return inner / ((1.0 + cd) * (1.0 + cd))


def p_success_many(k: int, phi: float, lams, out) -> None:
    """Fill out[i] = p_success(k, phi, lams[i]) for grid scans."""
    for i in range(len(lams)):
        out[i] = p_success(k, phi, lams[i])
