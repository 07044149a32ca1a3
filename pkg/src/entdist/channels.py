"""Qubit channel catalog and channel algebra.

Channels are stored as Kraus operator lists.  The catalog covers the
identity, depolarizing, amplitude damping, generalized amplitude damping,
phase flip, bit flip and general Pauli channels, plus arbitrary
single-qubit unitaries.  Choi matrices use the unnormalized convention
(trace equal to the input dimension, i.e. 2 for qubit channels).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .linalg import (
    SystemLayout,
    hermitian_eigenvalues,
    is_hermitian,
    kron,
    partial_trace,
    partial_transpose,
)

CPTP_TOL = 1e-10

I2 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)

CHANNEL_FAMILIES = ("id", "depol", "ad", "gad", "pf", "bf", "pauli")


@dataclass(frozen=True)
class QubitChannel:
    """A CP map on one qubit given by 2x2 Kraus operators.

    Trace preservation (sum K^dag K = I) is enforced at construction
    unless ``trace_preserving`` is False, which is used for CP-only maps
    such as transposed channels.
    """

    kraus: tuple
    name: str = "custom"
    params: tuple = ()
    trace_preserving: bool = True

    def __post_init__(self):
        ks = tuple(np.asarray(k, dtype=complex) for k in self.kraus)
        object.__setattr__(self, "kraus", ks)
        if not 1 <= len(ks) <= 4:
            raise ValueError(f"expected 1..4 Kraus operators, got {len(ks)}")
        for k in ks:
            if k.shape != (2, 2):
                raise ValueError(f"Kraus operator has shape {k.shape}, expected 2x2")
        if self.trace_preserving:
            s = sum(k.conj().T @ k for k in ks)
            if np.max(np.abs(s - I2)) > CPTP_TOL:
                raise ValueError("Kraus operators do not satisfy sum K^dag K = I")

    @property
    def kraus_rank(self) -> int:
        return len(self.kraus)


@dataclass(frozen=True)
class ChoiMatrix:
    """Unnormalized Choi matrix with explicit input/output labels."""

    matrix: np.ndarray
    layout: SystemLayout
    n_in: int = 1

    def __post_init__(self):
        object.__setattr__(self, "matrix", np.asarray(self.matrix, dtype=complex))
        self.layout.check_matches(self.matrix)
        d_in = 2**self.n_in
        lam = hermitian_eigenvalues(self.matrix)
        if lam[0] < -CPTP_TOL:
            raise ValueError(f"Choi matrix is not PSD (lambda_min={lam[0]})")
        if abs(np.trace(self.matrix).real - d_in) > 1e-9:
            raise ValueError(
                f"Choi trace {np.trace(self.matrix)} != input dimension {d_in}"
            )

    @property
    def input_labels(self):
        return self.layout.labels[: self.n_in]

    @property
    def output_labels(self):
        return self.layout.labels[self.n_in :]


@dataclass(frozen=True)
class TransposeSimulator:
    """Matrices (a, b) with a K_i b approximating K_i^T for a channel."""

    a: np.ndarray
    b: np.ndarray
    residual: float

    @property
    def success(self) -> bool:
        return self.residual <= 1e-6


def _check_unit(value, name):
    if not 0.0 <= value <= 1.0:
        raise ValueError(f"{name}={value} outside [0, 1]")


def _prune(kraus, tol=1e-12):
    kept = [k for k in kraus if np.max(np.abs(k)) >= tol]
    return kept if kept else [np.zeros((2, 2), dtype=complex)]


def make_channel(family: str, params=()) -> QubitChannel:
    """Build a channel from the catalog.

    Families and parameters:
      id           no parameters
      depol        p_s            depolarizing probability
      ad           gamma          amplitude damping strength
      gad          gamma, n       damping strength, excitation probability
      pf           r              phase flip: K0 = sqrt(r) I, K1 = sqrt(1-r) Z
      bf           r              bit flip:   K0 = sqrt(r) I, K1 = sqrt(1-r) X
      pauli        p0, p1, p2, p3 mixture weights over (I, X, Y, Z), sum 1
    """
    params = tuple(float(p) for p in params)

    def expect(n):
        if len(params) != n:
            raise ValueError(f"family '{family}' takes {n} parameter(s), got {len(params)}")

    if family == "id":
        expect(0)
        return QubitChannel((I2,), name="id")
    if family == "depol":
        expect(1)
        (p,) = params
        _check_unit(p, "p_s")
        ks = [
            np.sqrt(1 - 3 * p / 4) * I2,
            np.sqrt(p / 4) * SIGMA_X,
            np.sqrt(p / 4) * SIGMA_Y,
            np.sqrt(p / 4) * SIGMA_Z,
        ]
        return QubitChannel(tuple(_prune(ks)), name="depol", params=(("p_s", p),))
    if family == "ad":
        expect(1)
        (g,) = params
        _check_unit(g, "gamma")
        ks = [
            np.array([[1, 0], [0, np.sqrt(1 - g)]], dtype=complex),
            np.array([[0, np.sqrt(g)], [0, 0]], dtype=complex),
        ]
        return QubitChannel(tuple(_prune(ks)), name="ad", params=(("gamma", g),))
    if family == "gad":
        expect(2)
        g, n = params
        _check_unit(g, "gamma")
        _check_unit(n, "n")
        ks = [
            np.sqrt(1 - n) * np.array([[1, 0], [0, np.sqrt(1 - g)]], dtype=complex),
            np.sqrt(1 - n) * np.array([[0, np.sqrt(g)], [0, 0]], dtype=complex),
            np.sqrt(n) * np.array([[np.sqrt(1 - g), 0], [0, 1]], dtype=complex),
            np.sqrt(n) * np.array([[0, 0], [np.sqrt(g), 0]], dtype=complex),
        ]
        return QubitChannel(
            tuple(_prune(ks)), name="gad", params=(("gamma", g), ("n", n))
        )
    if family == "pf":
        expect(1)
        (r,) = params
        _check_unit(r, "r")
        ks = [np.sqrt(r) * I2, np.sqrt(1 - r) * SIGMA_Z]
        return QubitChannel(tuple(_prune(ks)), name="pf", params=(("r", r),))
    if family == "bf":
        expect(1)
        (r,) = params
        _check_unit(r, "r")
        ks = [np.sqrt(r) * I2, np.sqrt(1 - r) * SIGMA_X]
        return QubitChannel(tuple(_prune(ks)), name="bf", params=(("r", r),))
    if family == "pauli":
        expect(4)
        for i, p in enumerate(params):
            _check_unit(p, f"p{i}")
        if abs(sum(params) - 1.0) > 1e-10:
            raise ValueError(f"Pauli probabilities sum to {sum(params)}, expected 1")
        sigmas = (I2, SIGMA_X, SIGMA_Y, SIGMA_Z)
        ks = [np.sqrt(p) * s for p, s in zip(params, sigmas)]
        return QubitChannel(
            tuple(_prune(ks)),
            name="pauli",
            params=tuple((f"p{i}", p) for i, p in enumerate(params)),
        )
    raise ValueError(f"unknown channel family '{family}'")


def unitary_channel(u: np.ndarray, name: str = "unitary") -> QubitChannel:
    """Channel rho -> U rho U^dag for a single-qubit unitary."""
    u = np.asarray(u, dtype=complex)
    if np.max(np.abs(u.conj().T @ u - I2)) > CPTP_TOL:
        raise ValueError("matrix is not unitary")
    return QubitChannel((u,), name=name)


def apply(ch: QubitChannel, rho: np.ndarray) -> np.ndarray:
    """Kraus action sum_i K_i rho K_i^dag on a single-qubit state."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (2, 2):
        raise ValueError(f"expected a 2x2 state, got shape {rho.shape}")
    return sum(k @ rho @ k.conj().T for k in ch.kraus)


def product_kraus(ch1: QubitChannel, ch2: QubitChannel):
    """Kraus operators K_i (x) L_j of the product channel ch1 (x) ch2."""
    return [kron(k1, k2) for k1 in ch1.kraus for k2 in ch2.kraus]


def apply_product(ch1: QubitChannel, ch2: QubitChannel, rho: np.ndarray) -> np.ndarray:
    """(ch1 (x) ch2)(rho) on a two-qubit state."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise ValueError(f"expected a 4x4 state, got shape {rho.shape}")
    return sum(k @ rho @ k.conj().T for k in product_kraus(ch1, ch2))


def _kraus_from_choi(c: np.ndarray, tol=1e-12):
    """Minimal Kraus set of a qubit channel from its (unnormalized) Choi."""
    c = (c + c.conj().T) / 2
    lam, vec = np.linalg.eigh(c)
    ks = []
    for i in range(len(lam)):
        if lam[i] > tol:
            # Choi index is (in, out); column i of the Kraus acts on |in=i>.
            ks.append(np.sqrt(lam[i]) * vec[:, i].reshape(2, 2).T)
    return ks


def compose(later: QubitChannel, earlier: QubitChannel) -> QubitChannel:
    """Sequential composition later . earlier with Kraus set {L_j K_i}.

    Near-zero operators are pruned; if more than four survive, a minimal
    set is re-extracted from the Choi eigendecomposition.
    """
    ks = _prune([l @ k for k in earlier.kraus for l in later.kraus])
    if len(ks) > 4:
        c = sum(_choi_vec(k) @ _choi_vec(k).conj().T for k in ks)
        ks = _kraus_from_choi(c)
    return QubitChannel(
        tuple(ks),
        name=f"{later.name}.{earlier.name}",
        trace_preserving=later.trace_preserving and earlier.trace_preserving,
    )


def _choi_vec(k: np.ndarray) -> np.ndarray:
    # vec with index (in, out): component (i, a) is K[a, i].
    return k.T.reshape(-1, 1)


def choi(ch: QubitChannel) -> ChoiMatrix:
    """Unnormalized Choi matrix sum_ij |i><j| (x) Lambda(|i><j|).

    Satisfies Lambda(rho) = Tr_in((rho^T (x) I) C) and Tr C = 2.
    """
    c = sum(_choi_vec(k) @ _choi_vec(k).conj().T for k in ch.kraus)
    return ChoiMatrix(c, SystemLayout(("in", "out")), n_in=1)


_PHI_PLUS_2 = None


def _two_phi_plus() -> np.ndarray:
    """2 |phi+><phi+| on two qubits (the unnormalized projector)."""
    global _PHI_PLUS_2
    if _PHI_PLUS_2 is None:
        v = np.zeros(4, dtype=complex)
        v[0] = v[3] = 1.0
        _PHI_PLUS_2 = np.outer(v, v.conj())
    return _PHI_PLUS_2


def choi_of_composition(c1: ChoiMatrix, c2: ChoiMatrix) -> ChoiMatrix:
    """Choi of the serial connection (second channel after the first).

    Computed by contracting C1^{AA'} (x) C2^{BB'} with the unnormalized
    maximally entangled projector on A'B and tracing A'B out.
    """
    for c in (c1, c2):
        if c.matrix.shape != (4, 4):
            raise ValueError("expected 4x4 single-qubit-channel Choi matrices")
    layout = SystemLayout(("A", "A'", "B", "B'"))
    big = kron(c1.matrix, c2.matrix)
    link = kron(kron(I2, _two_phi_plus()), I2)
    out = partial_trace(link @ big, layout, {"A'", "B"})
    return ChoiMatrix(out, SystemLayout(("in", "out")), n_in=1)


def is_eb(c: ChoiMatrix) -> tuple[bool, float]:
    """PPT test on a qubit-channel Choi matrix.

    Returns the EB flag and the minimal eigenvalue of the partially
    transposed (unnormalized) Choi matrix, transposed on the output.
    """
    if c.matrix.shape != (4, 4):
        raise ValueError("EB test expects a 4x4 qubit-channel Choi matrix")
    pt = partial_transpose(c.matrix, c.layout, set(c.output_labels))
    lam_min = float(hermitian_eigenvalues(pt)[0])
    return lam_min >= -1e-10, lam_min


def transpose_channel(ch: QubitChannel) -> QubitChannel:
    """CP map with Kraus operators K_i^T (computational-basis transpose)."""
    return QubitChannel(
        tuple(k.T.copy() for k in ch.kraus),
        name=f"{ch.name}^T",
        trace_preserving=False,
    )


def random_channel(rng: np.random.Generator, kraus_rank: int = 4) -> QubitChannel:
    """Stinespring-uniform random CPTP qubit channel.

    A Gaussian (2*rank, 2) matrix is orthonormalized into an isometry
    V: C^2 -> C^2 (x) C^rank and sliced into K_i = (I (x) <i|) V.
    """
    if not 1 <= kraus_rank <= 4:
        raise ValueError(f"kraus_rank must be 1..4, got {kraus_rank}")
    g = rng.standard_normal((2 * kraus_rank, 2)) + 1j * rng.standard_normal(
        (2 * kraus_rank, 2)
    )
    v, _ = np.linalg.qr(g)
    ks = [v.reshape(2, kraus_rank, 2)[:, i, :] for i in range(kraus_rank)]
    return QubitChannel(tuple(ks), name=f"random{kraus_rank}")


# --- numerical transpose-simulator finder -------------------------------


def _reshuffle(m: np.ndarray) -> np.ndarray:
    """Rearrange a 4x4 M so that M = B^T (x) A becomes rank one.

    R[(p,q),(i,j)] = M[(p,i),(q,j)]; for M = B^T (x) A this equals the
    outer product of row-major flattenings of B^T and A.
    """
    return m.reshape(2, 2, 2, 2).transpose(0, 2, 1, 3).reshape(4, 4)


def _rank1_factors(r: np.ndarray):
    u, s, vh = np.linalg.svd(r)
    bt = s[0] * u[:, 0].reshape(2, 2)
    a = vh[0, :].reshape(2, 2)
    return a, bt.T


def _residual(a, b, kraus) -> float:
    return max(float(np.max(np.abs(a @ k @ b - k.T))) for k in kraus)


def _als_polish(a, b, kraus, iters=30):
    """Alternate least squares on A K_i B = K_i^T, one side at a time."""
    for _ in range(iters):
        x = np.hstack([k @ b for k in kraus])
        y = np.hstack([k.T for k in kraus])
        a = y @ np.linalg.pinv(x)
        z = np.vstack([a @ k for k in kraus])
        w = np.vstack([k.T for k in kraus])
        b = np.linalg.pinv(z) @ w
    return a, b


def find_transpose_simulator(
    ch: QubitChannel, restarts: int = 50, tol: float = 1e-6
) -> TransposeSimulator:
    """Search for (A, B) with A K_i B = K_i^T for every Kraus operator.

    The constraints fix a 4x4 matrix M = B^T (x) A on the span of the
    vectorized Kraus operators; the remaining affine freedom is searched
    for an element whose reshuffling is numerically rank one, via
    alternating rank-1 projection with random restarts.  Failure to reach
    the tolerance is reported through ``residual``, not raised.
    """
    if ch.kraus_rank > 3:
        raise ValueError("transpose simulator search requires Kraus rank <= 3")
    kraus = ch.kraus
    v = np.stack([k.flatten(order="F") for k in kraus], axis=1)  # 4 x r
    w = np.stack([k.T.flatten(order="F") for k in kraus], axis=1)
    m0 = w @ np.linalg.pinv(v)
    # Null directions: rows of M may move along row vectors n with n V = 0.
    _, sv, vh = np.linalg.svd(v.T)
    rank = int(np.sum(sv > 1e-12))
    null = vh[rank:, :].conj().T  # columns x with V^T x = 0
    d = null.shape[1]
    r0 = _reshuffle(m0).flatten()
    # Columns of lmat: reshuffled images of one row of M moving along one
    # null direction, for each free degree of freedom.
    basis = []
    for col in range(d):
        for row in range(4):
            e = np.zeros((4, 4), dtype=complex)
            e[row, :] = null[:, col]
            basis.append(_reshuffle(e).flatten())
    lmat = np.stack(basis, axis=1) if basis else np.zeros((16, 0), dtype=complex)

    rng = np.random.default_rng(12345)
    best = None
    for trial in range(restarts):
        if trial == 0:
            x = np.zeros(lmat.shape[1], dtype=complex)
        else:
            x = rng.standard_normal(lmat.shape[1]) + 1j * rng.standard_normal(
                lmat.shape[1]
            )
        r = (r0 + lmat @ x).reshape(4, 4)
        for _ in range(200):
            a, b = _rank1_factors(r)
            target = _reshuffle(np.kron(b.T, a)).flatten()
            if lmat.shape[1]:
                x, *_ = np.linalg.lstsq(lmat, target - r0, rcond=None)
            r_new = (r0 + lmat @ x).reshape(4, 4)
            if np.max(np.abs(r_new - r)) < 1e-14:
                r = r_new
                break
            r = r_new
        a, b = _rank1_factors(r)
        a, b = _als_polish(a, b, kraus)
        res = _residual(a, b, kraus)
        if best is None or res < best.residual:
            best = TransposeSimulator(a=a, b=b, residual=res)
        if best.residual <= tol:
            break
    return best


def parse_channel_spec(spec: str) -> QubitChannel:
    """Parse ``<family>:<p1>[,<p2>...]`` into a channel, e.g. ``depol:0.65``."""
    family, _, rest = spec.partition(":")
    family = family.strip()
    if family not in CHANNEL_FAMILIES:
        raise ValueError(
            f"unknown channel family '{family}'; expected one of {CHANNEL_FAMILIES}"
        )
    if rest.strip():
        try:
            params = [float(tok) for tok in rest.split(",")]
        except ValueError as exc:
            raise ValueError(f"malformed channel spec '{spec}': {exc}") from None
    else:
        params = []
    return make_channel(family, params)
