"""Single-excitation dynamics of a star network of ring qubits.

N ring qubits couple to one central ring qubit; within the single-excitation
sector the state is spanned by |psi_1> .. |psi_N> (excitation on one of the
outer qubits) and |psi_{N+1}> (excitation on the center).  In that basis the
effective Hamiltonian is

    H[i,i]     = gamma_i (1 + Delta_i) (N - 2) / 4          i <= N
    H[N+1,N+1] = - sum_i gamma_i (1 + Delta_i) / 4
    H[i,N+1]   = gamma_i / 2

When every product gamma_i (1 + Delta_i) equals a common value C, the
spectrum is known in closed form: an (N-1)-fold level at C(N-2)/4 spanned by
"dark" combinations of the outer sites, plus the pair

    lambda = ( -C +- sqrt(4 Omega^2 + C^2 (N-1)^2) ) / 4,   Omega^2 = sum gamma_i^2.

Propagation from a basis state then reduces to three scalar amplitudes built
from the mixing parameter A = B - sqrt(1+B^2), B = C(N-1)/(2 Omega), and the
angles theta_1 = Omega A t / 2, theta_2 = Omega t / (2A); these obey
theta_1 + theta_2 = -(t/2) sqrt(4 Omega^2 + C^2 (N-1)^2).

Outer sites with gamma_m = 0 decouple exactly (unit-vector eigenstates); a
nonzero common C is then unreachable for them, so the constraint can only
hold on such networks when C = 0, which is also the only regime where the
closed forms are used with decoupled sites present.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import ConstraintError, ValidationError
from .linalg import unitary_evolve

CONSTRAINT_RTOL = 1e-10
STATE_NORM_TOL = 1e-10
ZERO_COUPLING_RTOL = 1e-15


def _readonly(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class StarNetwork:
    """Immutable description of the star: per-site gamma_i and Delta_i.

    Site indices in the public interface are 1-based; index N+1 denotes the
    center.  `constraint_value` is the median of the products
    gamma_i (1 + Delta_i), and `constraint_holds` says whether all products
    agree with it to within 1e-10 relative to max(|C|, max |gamma_i|).
    """

    gammas: np.ndarray
    deltas: np.ndarray

    def __post_init__(self):
        g = np.asarray(self.gammas, dtype=np.float64).copy()
        d = np.asarray(self.deltas, dtype=np.float64).copy()
        if g.ndim != 1 or d.shape != g.shape or g.size == 0:
            raise ValidationError(
                "gammas and deltas must be equal-length 1-d arrays with >= 1 site"
            )
        if not (np.isfinite(g).all() and np.isfinite(d).all()):
            raise ValidationError("couplings must be finite")
        object.__setattr__(self, "gammas", _readonly(g))
        object.__setattr__(self, "deltas", _readonly(d))

    @property
    def n_sites(self) -> int:
        return int(self.gammas.size)

    @property
    def dim(self) -> int:
        return self.n_sites + 1

    @property
    def products(self) -> np.ndarray:
        return self.gammas * (1.0 + self.deltas)

    @property
    def constraint_value(self) -> float:
        return float(np.median(self.products))

    @property
    def omega(self) -> float:
        return float(np.sqrt((self.gammas**2).sum()))

    @property
    def constraint_holds(self) -> bool:
        c = self.constraint_value
        tol = CONSTRAINT_RTOL * max(abs(c), float(np.abs(self.gammas).max()))
        return bool(np.abs(self.products - c).max() <= tol)


def uniform_star(n_sites: int, gamma: float, delta: float = -1.0) -> StarNetwork:
    if n_sites < 1:
        raise ValidationError("need at least one outer site")
    return StarNetwork(
        gammas=np.full(n_sites, float(gamma)),
        deltas=np.full(n_sites, float(delta)),
    )


def build_effective_hamiltonian(network: StarNetwork) -> np.ndarray:
    """The (N+1)-dimensional single-excitation Hamiltonian (real symmetric)."""
    n = network.n_sites
    p = network.products
    h = np.zeros((n + 1, n + 1), dtype=np.float64)
    h[np.arange(n), np.arange(n)] = p * (n - 2) / 4.0
    h[n, n] = -p.sum() / 4.0
    h[:n, n] = network.gammas / 2.0
    h[n, :n] = network.gammas / 2.0
    return h


@dataclass(frozen=True)
class AnalyticEigenSystem:
    """Closed-form eigensystem of a constraint-satisfying star.

    `degenerate` holds N-1 orthonormal columns at the shared eigenvalue
    `value_degenerate` = C(N-2)/4; `pair_vectors` holds the two remaining
    eigenvectors (columns) at `value_pair` (ascending).
    """

    value_degenerate: float
    degenerate: np.ndarray
    value_pair: np.ndarray
    pair_vectors: np.ndarray

    def all_values(self) -> np.ndarray:
        n_deg = self.degenerate.shape[1]
        return np.concatenate(
            [np.full(n_deg, self.value_degenerate), self.value_pair]
        )

    def all_vectors(self) -> np.ndarray:
        return np.concatenate([self.degenerate, self.pair_vectors], axis=1)


def _require_constraint(network: StarNetwork, what: str) -> float:
    if not network.constraint_holds:
        c = network.constraint_value
        dev = float(np.abs(network.products - c).max())
        raise ConstraintError(
            f"{what} requires a common gamma*(1+Delta); "
            f"largest deviation from {c:.6g} is {dev:.3e}"
        )
    return network.constraint_value


def analytic_eigensystem(network: StarNetwork) -> AnalyticEigenSystem:
    """Closed-form spectrum and eigenbasis under the coupling constraint.

    Outer sites with gamma = 0 contribute unit-vector eigenstates; the dark
    combinations are built over the remaining sites by the usual telescoping
    construction, and the final two eigenvectors are (gamma_1..gamma_N, y)
    with y = 2 lambda - C(N-2)/2.
    """
    c = _require_constraint(network, "the analytic eigensystem")
    n = network.n_sites
    g = network.gammas
    dim = n + 1
    lam_deg = c * (n - 2) / 4.0
    gmax = float(np.abs(g).max())
    active = (
        [i for i in range(n) if abs(g[i]) > ZERO_COUPLING_RTOL * gmax]
        if gmax > 0.0
        else []
    )
    if not active:
        # fully decoupled network: H is diagonal (and C = 0 by the constraint)
        eye = np.eye(dim)
        return AnalyticEigenSystem(
            value_degenerate=lam_deg,
            degenerate=eye[:, : n - 1],
            value_pair=np.array([lam_deg, -n * c / 4.0]),
            pair_vectors=eye[:, n - 1 :],
        )
    columns = []
    partial = g[active[0]] ** 2  # running sum of gamma^2 over active sites
    for j in range(1, len(active)):
        gj = g[active[j]]
        vec = np.zeros(dim)
        for m in range(j):
            vec[active[m]] = g[active[m]] * gj
        vec[active[j]] = -partial
        vec /= math.sqrt(partial * (partial + gj**2))
        partial += gj**2
        columns.append(vec)
    for i in range(n):
        if i not in active:
            vec = np.zeros(dim)
            vec[i] = 1.0
            columns.append(vec)
    degenerate = (
        np.stack(columns, axis=1) if columns else np.zeros((dim, 0))
    )
    omega2 = float((g**2).sum())
    disc = math.sqrt(4.0 * omega2 + c**2 * (n - 1) ** 2)
    lam_pair = np.array([(-c - disc) / 4.0, (-c + disc) / 4.0])
    pair = np.zeros((dim, 2))
    for j in range(2):
        y = 2.0 * lam_pair[j] - c * (n - 2) / 2.0
        vec = np.concatenate([g, [y]])
        pair[:, j] = vec / math.sqrt(omega2 + y**2)
    return AnalyticEigenSystem(
        value_degenerate=lam_deg,
        degenerate=degenerate,
        value_pair=lam_pair,
        pair_vectors=pair,
    )


def as_subspace_state(state, dim: int) -> np.ndarray:
    """Validate and return a unit-norm single-excitation amplitude vector."""
    v = np.asarray(state, dtype=np.complex128)
    if v.ndim != 1 or v.size != dim:
        raise ValidationError(f"state must have {dim} amplitudes, got shape {v.shape}")
    norm = float(np.linalg.norm(v))
    if abs(norm - 1.0) > STATE_NORM_TOL:
        raise ValidationError(f"state norm {norm} is not 1 within {STATE_NORM_TOL}")
    return v


def basis_state(network: StarNetwork, site: int) -> np.ndarray:
    """|psi_site> with 1-based site index; N+1 is the center."""
    if not 1 <= site <= network.dim:
        raise ValidationError(
            f"site must be in 1..{network.dim}, got {site}"
        )
    v = np.zeros(network.dim, dtype=np.complex128)
    v[site - 1] = 1.0
    return v


def evolve_subspace(
    network: StarNetwork, state, time: float, method: str = "auto"
) -> np.ndarray:
    """Propagate a single-excitation state for the given time.

    method="auto" uses the closed-form eigensystem when the constraint holds
    and falls back to numerical spectral propagation otherwise;
    method="analytic" insists (and raises when the constraint fails);
    method="numerical" always diagonalizes.
    """
    amps = as_subspace_state(state, network.dim)
    if method not in ("auto", "analytic", "numerical"):
        raise ValidationError(f"unknown method {method!r}")
    if method == "auto":
        method = "analytic" if network.constraint_holds else "numerical"
    if method == "numerical":
        return unitary_evolve(build_effective_hamiltonian(network), time, amps)
    es = analytic_eigensystem(network)
    out = np.zeros(network.dim, dtype=np.complex128)
    if es.degenerate.shape[1]:
        d = es.degenerate
        out += cmath.exp(-1j * es.value_degenerate * time) * (d @ (d.T @ amps))
    for j in range(2):
        w = es.pair_vectors[:, j]
        out += cmath.exp(-1j * es.value_pair[j] * time) * (w @ amps) * w
    return out


def _mixing_parameter(c: float, n: int, omega: float) -> float:
    b = c * (n - 1) / (2.0 * omega)
    return b - math.hypot(1.0, b)


def phase_angles(network: StarNetwork, time: float) -> tuple[float, float]:
    """(theta_1, theta_2) of a constraint-satisfying network at a given time."""
    c = _require_constraint(network, "phase angles")
    omega = network.omega
    if omega == 0.0:
        raise ValidationError("zero-coupling network has no oscillation phases")
    a = _mixing_parameter(c, network.n_sites, omega)
    return omega * a * time / 2.0, omega * time / (2.0 * a)


def _scalar_amplitudes(
    c: float, n: int, omega: float, time: float
) -> tuple[float, complex, complex, complex]:
    a = _mixing_parameter(c, n, omega)
    theta1 = omega * a * time / 2.0
    theta2 = omega * time / (2.0 * a)
    lam = cmath.exp(-1j * c * (n - 2) * time / 4.0)
    denom = 1.0 + a * a
    r = lam * (cmath.exp(1j * theta1) + a * a * cmath.exp(-1j * theta2)) / denom
    s = -a * lam * (cmath.exp(1j * theta1) - cmath.exp(-1j * theta2)) / denom
    return a, lam, r, s


def closed_form_from_site(network: StarNetwork, site: int, time: float) -> np.ndarray:
    """State at time t after starting in |psi_site| (outer site, 1-based)."""
    c = _require_constraint(network, "the closed-form propagator")
    n = network.n_sites
    if not 1 <= site <= n:
        raise ValidationError(f"source site must be in 1..{n}, got {site}")
    g = network.gammas
    omega = network.omega
    if omega == 0.0:
        # constraint forces C = 0 here, so the Hamiltonian vanishes
        return basis_state(network, site)
    _, lam, r, s = _scalar_amplitudes(c, n, omega, time)
    gi = g[site - 1]
    out = np.empty(n + 1, dtype=np.complex128)
    out[:n] = (g * gi / omega**2) * (r - lam)
    out[site - 1] = lam - (gi**2 / omega**2) * (lam - r)
    out[n] = (gi / omega) * s
    return out


def closed_form_from_center(network: StarNetwork, time: float) -> np.ndarray:
    """State at time t after starting with the excitation on the center."""
    c = _require_constraint(network, "the closed-form propagator")
    n = network.n_sites
    g = network.gammas
    omega = network.omega
    if omega == 0.0:
        return basis_state(network, n + 1)
    a, lam, _, s = _scalar_amplitudes(c, n, omega, time)
    theta1 = omega * a * time / 2.0
    theta2 = omega * time / (2.0 * a)
    out = np.empty(n + 1, dtype=np.complex128)
    out[:n] = (g / omega) * s
    out[n] = (
        lam
        * (a * a * cmath.exp(1j * theta1) + cmath.exp(-1j * theta2))
        / (1.0 + a * a)
    )
    return out
