"""Closed-form separability boundaries used as plot overlays.

These duplicate the analytic formulas of the analysis package on purpose:
the plotter only consumes CSV files, and recomputing the curves here gives
an independent visual cross-check of the sweep data.
"""

import math


def depol_pf_boundary(p_s: float) -> tuple[float, float]:
    """Phase-flip parameters bounding the separable band for depol (x) PF."""
    if not 0.0 <= p_s < 1.0:
        raise ValueError(f"p_s={p_s} outside [0, 1)")
    r_a = (3 * p_s - 2) / (4 * (p_s - 1))
    r_b = (p_s - 2) / (4 * (p_s - 1))
    return (min(r_a, r_b), max(r_a, r_b))


def gad_boundary_gamma(n: float) -> float:
    """Damping strength at which GAD (x) GAD stops entangling the singlet."""
    if not 0.0 < n < 1.0:
        raise ValueError(f"n={n} must lie strictly inside (0, 1)")
    inner = (-8 * (math.sqrt(2) - 1) * (n - 1) * n - 2 * math.sqrt(2) + 3) / (
        (n - 1) ** 2 * n**2
    )
    return ((n - 1) * math.sqrt(inner) * n + math.sqrt(2) - 1) / (4 * (n - 1) * n)


DEPOL_EB_THRESHOLD = 2.0 / 3.0
