"""Effective qubit-qubit couplings from microscopic ring pairs.

A set of intermolecular exchange linkers, each joining site m of an outer
ring to site n of the central ring with strength J_mn, compresses onto the
two ground doublets as an XXZ pair interaction with

    gamma = sum_mn J_mn <1|tau_{m,x}|0>_ring <0|tau_{n,x}|1>_central
    Delta = 1 - (sum_mn J_mn z00_ring[m] z00_central[n]) / (x-sum above)

The transverse sum in the denominator may vanish for unlucky linker choices;
that is reported as a divergence rather than returning an unusable Delta.
The overall proportionality of gamma is taken as one; `scale` rescales it.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import AnisotropyDivergenceError, ValidationError
from .rings import (
    DEFAULT_DIM_CAP,
    RingSpec,
    SiteMatrixElements,
    ring_qubit_encoding,
)
from .star import StarNetwork

DIVERGENCE_RTOL = 1e-12


@dataclass(frozen=True)
class Linker:
    """One intermolecular exchange path: ring site m to central site n (1-based)."""

    ring_site: int
    central_site: int
    strength: float


@dataclass(frozen=True)
class EffectivePair:
    """Effective coupling gamma and anisotropy Delta for one ring-center pair."""

    gamma: float
    delta: float


def effective_coupling(
    ring_elements: SiteMatrixElements,
    central_elements: SiteMatrixElements,
    linkers: Sequence[Linker],
    scale: float = 1.0,
) -> EffectivePair:
    """Compress a set of linkers onto the two doublets."""
    if len(linkers) == 0:
        raise ValidationError("need at least one linker")
    x_sum = 0.0 + 0.0j
    z_sum = 0.0 + 0.0j
    max_strength = 0.0
    for link in linkers:
        m = link.ring_site - 1
        n = link.central_site - 1
        if not 0 <= m < ring_elements.x10.size:
            raise ValidationError(f"linker ring site {link.ring_site} out of range")
        if not 0 <= n < central_elements.x10.size:
            raise ValidationError(
                f"linker central site {link.central_site} out of range"
            )
        x_sum += link.strength * ring_elements.x10[m] * np.conj(
            central_elements.x10[n]
        )
        z_sum += link.strength * ring_elements.z00[m] * central_elements.z00[n]
        max_strength = max(max_strength, abs(link.strength))
    if abs(x_sum) < DIVERGENCE_RTOL * max(max_strength, 1e-300):
        raise AnisotropyDivergenceError(
            f"transverse sum {abs(x_sum):.3e} vanishes for these linkers; "
            "the anisotropy is undefined"
        )
    gamma = float(scale) * float(x_sum.real)
    delta = 1.0 - float((z_sum / x_sum).real)
    return EffectivePair(gamma=gamma, delta=delta)


def _encode_cached(
    cache: dict, spec: RingSpec, dim_cap: int
) -> tuple:
    if spec not in cache:
        cache[spec] = ring_qubit_encoding(spec, dim_cap=dim_cap)
    return cache[spec]


def ring_pair_coupling(
    ring_spec: RingSpec,
    central_spec: RingSpec,
    linkers: Sequence[Linker],
    scale: float = 1.0,
    dim_cap: int = DEFAULT_DIM_CAP,
) -> tuple[EffectivePair, float]:
    """Full pipeline for one outer ring + the central ring.

    Returns the effective pair and the smaller of the two doublet gaps (the
    one that limits the validity of the two-level reduction).
    """
    cache: dict = {}
    enc_r, elems_r = _encode_cached(cache, ring_spec, dim_cap)
    enc_c, elems_c = _encode_cached(cache, central_spec, dim_cap)
    pair = effective_coupling(elems_r, elems_c, linkers, scale=scale)
    return pair, min(enc_r.gap, enc_c.gap)


def star_from_rings(
    central: RingSpec,
    rings: Sequence[RingSpec],
    linkers: Sequence[Sequence[Linker]],
    scale: float = 1.0,
    dim_cap: int = DEFAULT_DIM_CAP,
) -> StarNetwork:
    """Derive the full star network from microscopic ring descriptions."""
    if len(rings) == 0:
        raise ValidationError("need at least one outer ring")
    if len(linkers) != len(rings):
        raise ValidationError("need one linker list per outer ring")
    cache: dict = {}
    _, elems_c = _encode_cached(cache, central, dim_cap)
    gammas = []
    deltas = []
    for spec, links in zip(rings, linkers):
        _, elems_r = _encode_cached(cache, spec, dim_cap)
        pair = effective_coupling(elems_r, elems_c, links, scale=scale)
        gammas.append(pair.gamma)
        deltas.append(pair.delta)
    return StarNetwork(gammas=np.array(gammas), deltas=np.array(deltas))


@dataclass(frozen=True)
class SweepRow:
    """One anisotropy-sweep grid point; unused parameters stay None.

    status is "ok" when the pipeline succeeded, otherwise a short label for
    the failure mode ("no-doublet", "divergent"); failed rows keep their
    grid coordinates so nothing is silently dropped.
    """

    a: float | None
    d: float | None
    b: float | None
    gamma: float | None
    delta: float | None
    gap: float | None
    status: str


def sweep_anisotropy_ad(
    a_values: Iterable[float],
    d_values: Iterable[float],
    linkers: Sequence[Linker],
    x: int = 3,
    exchange: float = 17.0,
    symmetric_substitute_bonds: bool = False,
    scale: float = 1.0,
    dim_cap: int = DEFAULT_DIM_CAP,
) -> list[SweepRow]:
    """Effective (gamma, Delta) over a grid of bond ratio a and site term d.

    Both rings of the pair share the same structure, so each grid point costs
    one diagonalization.
    """
    from .errors import GroundDoubletError

    rows = []
    for a in a_values:
        for d in d_values:
            spec = RingSpec.cr_ni(
                x,
                exchange=exchange,
                ratio=float(a),
                crystal_field=float(d),
                symmetric_substitute_bonds=symmetric_substitute_bonds,
            )
            try:
                pair, gap = ring_pair_coupling(
                    spec, spec, linkers, scale=scale, dim_cap=dim_cap
                )
            except GroundDoubletError:
                rows.append(
                    SweepRow(float(a), float(d), None, None, None, None, "no-doublet")
                )
                continue
            except AnisotropyDivergenceError:
                rows.append(
                    SweepRow(float(a), float(d), None, None, None, None, "divergent")
                )
                continue
            rows.append(
                SweepRow(
                    float(a), float(d), None, pair.gamma, pair.delta, gap, "ok"
                )
            )
    return rows


def b_sweep_evaluator(
    x: int = 3,
    exchange: float = 17.0,
    a: float = 0.9,
    d: float = 0.3,
    reference: Linker = Linker(1, 2, 1.0),
    tuned_sites: tuple[int, int] = (4, 4),
    symmetric_substitute_bonds: bool = False,
    scale: float = 1.0,
    dim_cap: int = DEFAULT_DIM_CAP,
) -> Callable[[float], EffectivePair]:
    """Closure evaluating (gamma, Delta) as a function of the linker ratio b.

    b multiplies the reference strength on the tuned linker sites, so
    b = J_tuned / J_reference.  The underlying ring pair is diagonalized once.
    """
    spec = RingSpec.cr_ni(
        x,
        exchange=exchange,
        ratio=a,
        crystal_field=d,
        symmetric_substitute_bonds=symmetric_substitute_bonds,
    )
    _, elems = ring_qubit_encoding(spec, dim_cap=dim_cap)

    def evaluate(b: float) -> EffectivePair:
        links = [
            reference,
            Linker(tuned_sites[0], tuned_sites[1], float(b) * reference.strength),
        ]
        return effective_coupling(elems, elems, links, scale=scale)

    return evaluate


def sweep_anisotropy_b(
    b_values: Iterable[float],
    x: int = 3,
    exchange: float = 17.0,
    a: float = 0.9,
    d: float = 0.3,
    reference: Linker = Linker(1, 2, 1.0),
    tuned_sites: tuple[int, int] = (4, 4),
    symmetric_substitute_bonds: bool = False,
    scale: float = 1.0,
    dim_cap: int = DEFAULT_DIM_CAP,
) -> list[SweepRow]:
    """Effective (gamma, Delta) against the two-linker strength ratio b."""
    from .errors import GroundDoubletError

    spec = RingSpec.cr_ni(
        x,
        exchange=exchange,
        ratio=a,
        crystal_field=d,
        symmetric_substitute_bonds=symmetric_substitute_bonds,
    )
    try:
        enc, elems = ring_qubit_encoding(spec, dim_cap=dim_cap)
    except GroundDoubletError:
        return [
            SweepRow(float(a), float(d), float(b), None, None, None, "no-doublet")
            for b in b_values
        ]
    rows = []
    for b in b_values:
        links = [
            reference,
            Linker(tuned_sites[0], tuned_sites[1], float(b) * reference.strength),
        ]
        try:
            pair = effective_coupling(elems, elems, links, scale=scale)
        except AnisotropyDivergenceError:
            rows.append(
                SweepRow(float(a), float(d), float(b), None, None, enc.gap, "divergent")
            )
            continue
        rows.append(
            SweepRow(
                float(a), float(d), float(b), pair.gamma, pair.delta, enc.gap, "ok"
            )
        )
    return rows


@dataclass(frozen=True)
class DeltaTransition:
    """One sign change of (Delta - level) located by a fine scan.

    kind "zero" means Delta actually attains the level (gamma keeps its sign);
    kind "pole" means the transverse sum changes sign, so Delta blows up and
    reappears on the other side of every finite level.  b is refined by
    bisection to the zero of Delta - level or of gamma respectively.
    """

    b: float
    kind: str
    rising: bool


def find_delta_transitions(
    evaluate: Callable[[float], EffectivePair],
    b_start: float,
    b_stop: float,
    level: float = 0.0,
    points: int = 501,
) -> list[DeltaTransition]:
    """Locate and classify every crossing of Delta(b) through `level`."""
    from scipy.optimize import brentq

    if not b_stop > b_start:
        raise ValidationError("need b_stop > b_start")
    if points < 3:
        raise ValidationError("need at least 3 scan points")
    grid = np.linspace(b_start, b_stop, points)
    gammas = np.empty(points)
    offsets = np.empty(points)
    for j, b in enumerate(grid):
        try:
            pair = evaluate(float(b))
        except AnisotropyDivergenceError:
            # sample landed on the pole itself; nudge within the cell
            width = (b_stop - b_start) / (points - 1)
            pair = evaluate(float(b) + 1e-9 * width)
        gammas[j] = pair.gamma
        offsets[j] = pair.delta - level

    transitions = []
    for j in range(points - 1):
        if offsets[j] * offsets[j + 1] >= 0.0:
            continue
        lo, hi = float(grid[j]), float(grid[j + 1])
        if gammas[j] * gammas[j + 1] < 0.0:

            def gamma_of(b: float) -> float:
                try:
                    return evaluate(b).gamma
                except AnisotropyDivergenceError:
                    return 0.0  # below the divergence threshold IS the root

            b_at = brentq(gamma_of, lo, hi, xtol=1e-14, rtol=8.9e-16)
            kind = "pole"
        else:
            b_at = brentq(
                lambda b: evaluate(b).delta - level, lo, hi, xtol=1e-14, rtol=8.9e-16
            )
            kind = "zero"
        transitions.append(
            DeltaTransition(b=float(b_at), kind=kind, rising=offsets[j] < 0.0)
        )
    return transitions
