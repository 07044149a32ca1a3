"""Experiment layer: analytic thresholds, grid searches and sweeps.

Covers the closed-form separability boundaries of the depolarizing,
amplitude damping, phase flip and generalized amplitude damping pairings,
exhaustive grid searches for the optimal input state, full parameter
sweeps, and the two randomized conjecture testers (the serial-vs-parallel
eigenvalue inequality over random channels, and the GAD singlet
criterion along the analytic boundary curve).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import sdp
from .channels import (
    QubitChannel,
    choi,
    choi_of_composition,
    is_eb,
    make_channel,
    product_kraus,
    random_channel,
)
from .entanglement import PureInputState, StateForm
from .linalg import hermitian_eigenvalues

EA_TOL = 1e-9
TIGHT_TOL = 1e-4
CONJECTURE_TOL = 1e-7


# --- closed-form boundaries ----------------------------------------------


def depol_ad_threshold(p_s: float, gamma: float) -> float:
    """Largest input entanglement c that can survive depol (x) AD noise.

    Inputs with c >= (2 - 3 p_s) / (gamma p_s - 3 p_s + 2) always give a
    separable output; the value is clamped to [0, 1/2] for reporting.
    Only defined below the depolarizing EB point p_s = 2/3.
    """
    if not 0.0 <= gamma <= 1.0:
        raise ValueError(f"gamma={gamma} outside [0, 1]")
    if not 0.0 <= p_s < 2.0 / 3.0:
        raise ValueError(f"p_s={p_s} outside [0, 2/3); threshold undefined in the EB regime")
    raw = (2 - 3 * p_s) / (gamma * p_s - 3 * p_s + 2)
    return min(max(raw, 0.0), 0.5)


def depol_ad_determinant_solutions(c: float, gamma: float):
    """Stationary points in s1 of the output PT determinant for depol (x) AD.

    Returns three (value, valid) pairs; a candidate is valid when it is
    real and inside [0, 1].  For 0 < c <= 1/2 and 0 < gamma < 1 all three
    are invalid, so the minimum sits on the boundary of the s1 range.
    """
    if c == 0.0:
        return [(0.0, True), (0.0, True), (0.0, True)]
    sols = []
    if c == 0.5:
        sols.append((float("nan"), False))  # pole of c / (2c - 1)
    else:
        first = c / (2 * c - 1)
        sols.append((first, 0.0 <= first <= 1.0))
    disc = (1 - 2 * c) ** 2 * (c - 1) * c * gamma
    denom = 4 * c**2 * gamma - 4 * c * gamma + gamma
    if denom == 0.0:
        return sols + [(float("nan"), False), (float("nan"), False)]
    for sign in (-1.0, 1.0):
        root = complex(disc) ** 0.5
        val = (2 * c**2 * gamma + sign * root - c * gamma) / denom
        real = abs(val.imag) <= 1e-12
        sols.append((val.real if real else float("nan"), real and 0.0 <= val.real <= 1.0))
    return sols


def depol_ad_det_s1_0(c: float, gamma: float, p_s: float) -> float:
    """Closed form of the output PT determinant at s1 = 0 for depol (x) AD."""
    return (
        c**2
        * (gamma - 1) ** 2
        * (p_s - 2) ** 2
        * (c * ((gamma - 3) * p_s + 2) + 3 * p_s - 2)
        * (c * (gamma * p_s + p_s - 2) - p_s + 2)
        / 16
    )


def depol_ad_det_gap(c: float, gamma: float, p_s: float) -> float:
    """Closed form of d(s1=0) - d(s1=1) for depol (x) AD; nonpositive."""
    return (
        (2 * c - 1)
        * (gamma - 1) ** 2
        * gamma
        * (2 * (c - 1) * c * (gamma - 1) + gamma)
        * (p_s - 2) ** 2
        * p_s**2
        / 16
    )


def depol_pf_boundary(p_s: float) -> tuple[float, float]:
    """Phase-flip parameters bounding the separable band for depol (x) PF.

    Between the two returned r values the output is separable for every
    input state; outside, entangled outputs exist.
    """
    if not 0.0 <= p_s < 1.0:
        raise ValueError(f"p_s={p_s} outside [0, 1); boundary singular at p_s = 1")
    r_a = (3 * p_s - 2) / (4 * (p_s - 1))
    r_b = (p_s - 2) / (4 * (p_s - 1))
    return (min(r_a, r_b), max(r_a, r_b))


def depol_pf_det_candidates(c: float, r: float):
    """Stationary points in s1 of the PT determinant for depol (x) PF.

    The fixed candidate 1/2 plus two square-root branches that fall
    outside [0, 1] for 0 < c < 1/2 and 0 < r < 1.
    """
    sols = [(0.5, True)]
    if c == 0.5 or r in (0.0, 1.0):
        return sols + [(float("nan"), False), (float("nan"), False)]
    root = math.sqrt((1 - r) * r * ((1 - c) * c * (1 - 2 * r) ** 2 + (1 - r) * r))
    for sign in (1.0, -1.0):
        val = 0.5 * (1 + sign * root / ((1 - 2 * c) * (1 - r) * r))
        sols.append((val, 0.0 <= val <= 1.0))
    return sols


def depol_pf_det_gap_half(c: float, r: float, p_s: float) -> float:
    """Closed form of d(s1=1) - d(s1=1/2) for depol (x) PF; nonpositive."""
    return (
        -(1 - 2 * c) ** 2
        * (1 - r)
        * r
        * ((1 - 2 * c) ** 2 * (1 - r) * r + 2 * (1 - c) * c)
        * (p_s - 2) ** 2
        * p_s**2
        / 16
    )


def depol_pf_det_s1_0(c: float, r: float, p_s: float) -> float:
    """Closed form of the PT determinant at s1 = 0 (= s1 = 1) for depol (x) PF."""
    return (
        -((c - 1) ** 2)
        * c**2
        * (p_s - 2) ** 2
        * (4 * r * (p_s - 1) - 3 * p_s + 2)
        * (4 * r * (p_s - 1) - p_s + 2)
        / 16
    )


def ad_pf_corner_determinant(c: float, gamma: float, r: float) -> float:
    """Output PT determinant of AD (x) PF at s1 = s2 = 0 (closed form)."""
    return (1 - c) ** 2 * c**2 * (1 - gamma) * (gamma - 1) * (2 * r - 1) ** 2


def ad_pf_ea_check(gamma: float, r: float) -> bool:
    """AD (x) PF annihilates all entanglement iff a subchannel is EB."""
    for name, v in (("gamma", gamma), ("r", r)):
        if not 0.0 <= v <= 1.0:
            raise ValueError(f"{name}={v} outside [0, 1]")
    return abs(gamma - 1.0) <= 1e-12 or abs(r - 0.5) <= 1e-12


def gad_boundary_gamma(n: float) -> float:
    """Damping strength at which GAD (x) GAD stops entangling the singlet."""
    if not 0.0 < n < 1.0:
        raise ValueError(f"n={n} must lie strictly inside (0, 1)")
    inner = (-8 * (math.sqrt(2) - 1) * (n - 1) * n - 2 * math.sqrt(2) + 3) / (
        (n - 1) ** 2 * n**2
    )
    return ((n - 1) * math.sqrt(inner) * n + math.sqrt(2) - 1) / (4 * (n - 1) * n)


# --- vectorized grid search ----------------------------------------------


def _unit_grid(step: float, hi: float) -> np.ndarray:
    n = int(round(hi / step))
    return np.linspace(0.0, hi, n + 1)


def _grid_states(step: float, form: StateForm):
    """All grid states as (params, vectors); c outermost, then s1, then s2."""
    c = _unit_grid(step, 0.5)
    s1 = _unit_grid(step, 1.0)
    rc = np.sqrt(c)
    rc1 = np.sqrt(1 - c)
    rs = np.sqrt(s1)
    rs1 = np.sqrt(1 - s1)
    if form is StateForm.SCHMIDT_S1:
        cc, ss = np.meshgrid(np.arange(len(c)), np.arange(len(s1)), indexing="ij")
        cc, ss = cc.ravel(), ss.ravel()
        psi = np.stack(
            [
                rc[cc] * rs[ss],
                rc[cc] * rs1[ss],
                -rc1[cc] * rs1[ss],
                rc1[cc] * rs[ss],
            ],
            axis=1,
        )
        params = np.stack([c[cc], s1[ss], np.zeros_like(c[cc])], axis=1)
        return params, psi
    if form is StateForm.TWO_SIDED:
        idx = np.meshgrid(
            np.arange(len(c)), np.arange(len(s1)), np.arange(len(s1)), indexing="ij"
        )
        cc, ss, vv = (ix.ravel() for ix in idx)
        s_k = np.stack([rs[ss], rs1[ss]], axis=1)
        s_p = np.stack([-rs1[ss], rs[ss]], axis=1)
        v_k = np.stack([rs[vv], rs1[vv]], axis=1)
        v_p = np.stack([-rs1[vv], rs[vv]], axis=1)
        psi = rc[cc, None] * np.einsum("ni,nj->nij", s_k, v_k).reshape(-1, 4)
        psi += rc1[cc, None] * np.einsum("ni,nj->nij", s_p, v_p).reshape(-1, 4)
        params = np.stack([c[cc], s1[ss], s1[vv]], axis=1)
        return params, psi
    raise ValueError(f"unknown state form {form!r}")


def batch_min_pt_eig(
    kraus: list[np.ndarray], psi: np.ndarray, chunk: int = 65536
) -> np.ndarray:
    """Minimal PT eigenvalue of the channel output for a batch of pure inputs."""
    out = np.empty(len(psi))
    for lo in range(0, len(psi), chunk):
        block = psi[lo : lo + chunk]
        rho = np.einsum("na,nb->nab", block, block.conj())
        sig = np.zeros(rho.shape, dtype=complex)
        for k in kraus:
            sig += np.einsum("ab,nbc,dc->nad", k, rho, k.conj())
        pt = sig.reshape(-1, 2, 2, 2, 2).transpose(0, 1, 4, 3, 2).reshape(-1, 4, 4)
        out[lo : lo + chunk] = np.linalg.eigvalsh(pt)[:, 0]
    return out


def optimal_input_search(
    ch1: QubitChannel,
    ch2: QubitChannel,
    grid_step: float = 0.01,
    form: StateForm = StateForm.SCHMIDT_S1,
) -> tuple[PureInputState, float]:
    """Exhaustive grid minimization of the output's minimal PT eigenvalue.

    c runs over [0, 1/2] and the s parameters over [0, 1], all inclusive
    of both endpoints.  Returns the first minimizer in grid order.
    """
    if not 0.0 < grid_step <= 0.5:
        raise ValueError(f"grid_step={grid_step} outside (0, 0.5]")
    params, psi = _grid_states(grid_step, form)
    vals = batch_min_pt_eig(product_kraus(ch1, ch2), psi)
    # Degenerate minima (e.g. a noiseless side) are resolved deterministically:
    # smallest s1, then smallest s2, then largest c.
    near = np.flatnonzero(vals <= vals.min() + 1e-12)
    cand = params[near]
    i = near[np.lexsort((-cand[:, 0], cand[:, 2], cand[:, 1]))[0]]
    best = PureInputState(
        c=float(params[i, 0]), s1=float(params[i, 1]), s2=float(params[i, 2])
    )
    return best, float(vals[i])


# --- sweeps ---------------------------------------------------------------


@dataclass(frozen=True)
class SweepRecord:
    params: dict
    grid_min_pt_eig: float
    sdp_bound: float
    optimal_input: PureInputState
    tight: bool
    is_ea: bool


def default_form(family1: str, family2: str) -> StateForm:
    """Depolarizing pairings reduce to the one-sided Schmidt family."""
    if "depol" in (family1, family2):
        return StateForm.SCHMIDT_S1
    return StateForm.TWO_SIDED


def _sweep_channels(family1, family2, v1, v2):
    if family1 == family2 == "gadpair":
        ch = make_channel("gad", [v2, v1])  # v1 = n, v2 = gamma
        return ch, ch

    def one(family, v):
        return make_channel(family) if family == "id" else make_channel(family, [v])

    return one(family1, v1), one(family2, v2)


def sweep_point(
    family1: str,
    family2: str,
    v1: float,
    v2: float,
    grid_step: float = 0.01,
    form: StateForm | None = None,
) -> SweepRecord:
    if form is None:
        form = default_form(family1, family2)
    ch1, ch2 = _sweep_channels(family1, family2, v1, v2)
    best, grid_min = optimal_input_search(ch1, ch2, grid_step, form)
    res = sdp.solve(sdp.build_problem(ch1, ch2))
    bound = res.bound
    return SweepRecord(
        params={"param1": v1, "param2": v2},
        grid_min_pt_eig=grid_min,
        sdp_bound=bound,
        optimal_input=best,
        tight=bool(abs(grid_min - bound) <= TIGHT_TOL),
        is_ea=bool(grid_min >= -EA_TOL),
    )


def sweep(
    family1: str,
    grid1,
    family2: str,
    grid2,
    grid_step: float = 0.01,
    form: StateForm | None = None,
) -> list[SweepRecord]:
    """One SweepRecord per (param1, param2) grid point, in grid order."""
    grid1 = list(grid1)
    grid2 = list(grid2)
    if not grid1 or not grid2:
        raise ValueError("parameter grids must be non-empty")
    return [
        sweep_point(family1, family2, v1, v2, grid_step, form)
        for v1 in grid1
        for v2 in grid2
    ]


# --- conjecture testers ----------------------------------------------------


@dataclass(frozen=True)
class ConjectureTrial:
    seed: int
    lhs: float
    rhs: float
    holds: bool

    @property
    def inconclusive(self) -> bool:
        return math.isnan(self.rhs)


def conjecture1_trial(seed: int) -> ConjectureTrial:
    """One random-channel test of the serial-vs-midway inequality.

    Samples two random CPTP channels, compares half the minimal PT
    eigenvalue of the serial-composition Choi against the SDP bound for
    the product channel.  A failed solve marks the trial inconclusive.
    """
    rng = np.random.default_rng(seed)
    ch1 = random_channel(rng)
    ch2 = random_channel(rng)
    _, lam = is_eb(choi_of_composition(choi(ch1), choi(ch2)))
    lhs = lam / 2.0
    res = sdp.solve(sdp.build_problem(ch1, ch2))
    if res.status is sdp.SolveStatus.FAILED:
        return ConjectureTrial(seed=seed, lhs=lhs, rhs=float("nan"), holds=False)
    return ConjectureTrial(
        seed=seed, lhs=lhs, rhs=res.bound, holds=bool(lhs >= res.bound - CONJECTURE_TOL)
    )


def singlet_output_min_pt_eig(ch: QubitChannel) -> float:
    """Minimal PT eigenvalue of (ch (x) ch) applied to the singlet."""
    from .entanglement import singlet

    psi = singlet()
    return float(batch_min_pt_eig(product_kraus(ch, ch), psi[None, :])[0])


def conjecture2_scan(n_step: float = 0.001):
    """SDP bounds along the GAD singlet-separability boundary curve.

    For each n on the grid, gamma is set on the analytic boundary, where
    the singlet output PT eigenvalue vanishes; the conjecture predicts
    the SDP bound vanishes there too.
    """
    if not 0.0 < n_step <= 0.1:
        raise ValueError(f"n_step={n_step} outside (0, 0.1]")
    steps = int(round(1.0 / n_step))
    out = []
    for k in range(1, steps):
        n = k * n_step
        gamma = gad_boundary_gamma(n)
        ch = make_channel("gad", [gamma, n])
        res = sdp.solve(sdp.build_problem(ch, ch))
        out.append((n, gamma, res.bound))
    return out


# --- strategy comparison ---------------------------------------------------


@dataclass(frozen=True)
class StrategyComparison:
    edge_eb: bool
    edge_lambda: float
    midway_bound: float
    midway_ea_consistent: bool


def strategy_compare(ch1: QubitChannel, ch2: QubitChannel) -> StrategyComparison:
    """Edge placement (serial EB test) vs midway placement (SDP bound)."""
    edge_eb, lam = is_eb(choi_of_composition(choi(ch1), choi(ch2)))
    res = sdp.solve(sdp.build_problem(ch1, ch2))
    consistent = (not math.isnan(res.bound)) and lam / 2.0 >= res.bound - CONJECTURE_TOL
    return StrategyComparison(
        edge_eb=edge_eb,
        edge_lambda=lam,
        midway_bound=res.bound,
        midway_ea_consistent=bool(consistent),
    )


def depol_eb_crossing(tol: float = 1e-9) -> float:
    """Bisection for the depolarizing EB onset on the normalized Choi PT."""

    def lam_min(p):
        c = choi(make_channel("depol", [p]))
        return is_eb(c)[1] / 2.0

    lo, hi = 0.0, 1.0
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if lam_min(mid) < 0:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2
