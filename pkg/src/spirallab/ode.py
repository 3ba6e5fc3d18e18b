"""Adaptive Dormand-Prince 5(4) integration for complex-valued systems.

scipy's solve_ivp is real-valued; flows here are holomorphic vector fields on
the disk/ball, so a small embedded pair over complex ndarrays is simpler than
round-tripping through stacked real coordinates.
"""

import numpy as np

# Dormand-Prince tableau
_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = [
    [],
    [1 / 5],
    [3 / 40, 9 / 40],
    [44 / 45, -56 / 15, 32 / 9],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
    [35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84],
]
_B5 = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
_B4 = np.array([5179 / 57600, 0.0, 7571 / 16695, 393 / 640,
                -92097 / 339200, 187 / 2100, 1 / 40])


class StepUnderflow(RuntimeError):
    pass


class LeftDomain(RuntimeError):
    """The integrated trajectory escaped the required invariant domain."""


def integrate(rhs, y0, t_end, tol=1e-10, max_steps=1_000_000, domain=None):
    """Integrate y' = rhs(y) from 0 to t_end (autonomous).

    domain, if given, is a predicate; a converged step landing outside it is
    first retried with smaller h, and reported as LeftDomain once h underflows.
    Returns (y, steps_taken, last_error_estimate).
    """
    y = np.atleast_1d(np.asarray(y0, dtype=complex))
    scalar = np.ndim(y0) == 0
    t = 0.0
    t_end = float(t_end)
    if t_end < 0:
        raise ValueError("t_end must be >= 0")
    h = min(0.1, t_end) if t_end > 0 else 0.0
    steps = 0
    err = 0.0
    domain_squeeze = False
    k = [None] * 7
    while t < t_end:
        if steps >= max_steps:
            raise StepUnderflow(f"not converged after {max_steps} steps")
        h = min(h, t_end - t)
        if h < 1e-15 * max(1.0, t_end):
            if domain_squeeze:
                raise LeftDomain("trajectory forced against the domain boundary")
            raise StepUnderflow("step size underflow")
        k[0] = np.asarray(rhs(y), dtype=complex)
        for i in range(1, 7):
            yi = y + h * sum(a * k[j] for j, a in enumerate(_A[i]))
            k[i] = np.asarray(rhs(yi), dtype=complex)
        y5 = y + h * sum(b * ki for b, ki in zip(_B5, k))
        y4 = y + h * sum(b * ki for b, ki in zip(_B4, k))
        err = float(np.max(np.abs(y5 - y4)))
        steps += 1
        if err <= tol:
            if domain is not None and not domain(y5):
                domain_squeeze = True
                h *= 0.5
                continue
            domain_squeeze = False
            t += h
            y = y5
        # PI-free step control with the usual safety factor
        scale = 0.9 * (tol / err) ** 0.2 if err > 0 else 5.0
        h *= min(5.0, max(0.1, scale))
    return (complex(y[0]) if scalar else y), steps, err
