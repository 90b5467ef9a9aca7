"""The rho_e-correlated Bernoulli({p_ij}) graph-pair distribution.

Random streams
--------------
All sampling takes an explicit :class:`numpy.random.Generator`.  The library
builds them with :func:`make_rng`, which runs ``numpy.random.SeedSequence``
over the integer key ``(seed, *keys)`` and feeds the result to the
counter-based Philox4x64 bit generator.  Replicate ``r`` of cell ``c`` under
master seed ``S`` therefore always draws from the same stream no matter which
worker runs it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from os import PathLike

import numpy as np

from .graph import Graph

__all__ = [
    "ModelSpec",
    "ParamStats",
    "UndefinedHeterogeneityError",
    "UnattainableTargetError",
    "UniformFamilySpec",
    "delta_for_rho_h",
    "derive_seed",
    "joint_edge_distribution",
    "make_rng",
    "param_stats",
    "read_model_spec",
    "rho_h_ceiling",
    "sample_pair",
    "sample_uniform_family",
    "write_model_spec",
]


class UndefinedHeterogeneityError(ValueError):
    """All Bernoulli parameters are 0, or all are 1."""


class UnattainableTargetError(ValueError):
    """Requested heterogeneity exceeds what Uniform(p - delta, p + delta) can reach."""


# -- random streams ---------------------------------------------------------


def derive_seed(seed: int, *keys: int) -> int:
    """64-bit seed for the stream keyed by ``(seed, *keys)``.

    Keys go in as a SeedSequence spawn key, so ``(s,)``, ``(s, 0)`` and
    ``(s, 0, 0)`` name distinct streams.  Keys must be in ``[0, 2**32)``.
    """
    if any(not 0 <= int(k) < 2**32 for k in keys):
        raise ValueError("stream keys must lie in [0, 2**32)")
    ss = np.random.SeedSequence(int(seed), spawn_key=tuple(int(k) for k in keys))
    return int(ss.generate_state(1, np.uint64)[0])


def make_rng(seed: int, *keys: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(derive_seed(seed, *keys)))


# -- model specification ----------------------------------------------------


@dataclass(frozen=True, eq=False)
class ModelSpec:
    """Edge correlation plus one Bernoulli parameter per vertex pair.

    ``p`` is the condensed upper triangle: pairs ``(0,1), (0,2), ..., (n-2,n-1)``.
    """

    n: int
    rho_e: float
    p: np.ndarray = field(repr=False)

    def __post_init__(self):
        p = np.array(self.p, dtype=np.float64)
        if self.n < 2:
            raise ValueError("the model needs n >= 2")
        if p.shape != (math.comb(self.n, 2),):
            raise ValueError(f"expected {math.comb(self.n, 2)} Bernoulli parameters, got shape {p.shape}")
        if not 0.0 <= self.rho_e <= 1.0:
            raise ValueError(f"rho_e={self.rho_e} outside [0, 1]")
        if not np.all((p >= 0.0) & (p <= 1.0)):
            raise ValueError("Bernoulli parameters must lie in [0, 1]")
        if np.all(p == 0.0) or np.all(p == 1.0):
            raise UndefinedHeterogeneityError("Bernoulli parameters are all 0 or all 1")
        p.setflags(write=False)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "rho_e", float(self.rho_e))

    def matrix(self) -> np.ndarray:
        """Symmetric ``n x n`` parameter matrix with a zero diagonal."""
        out = np.zeros((self.n, self.n))
        out[np.triu_indices(self.n, 1)] = self.p
        return out + out.T


@dataclass(frozen=True)
class ParamStats:
    mu: float
    sigma2: float
    rho_h: float
    rho_T: float


def param_stats(spec: ModelSpec) -> ParamStats:
    """Population mean and variance of the p_ij, heterogeneity and total correlation."""
    p = spec.p
    mu = float(p.mean())
    sigma2 = float(np.mean((p - mu) ** 2))
    denom = mu * (1.0 - mu)
    if denom <= 0.0:
        raise UndefinedHeterogeneityError("mean Bernoulli parameter is 0 or 1")
    # clamp rounding so the stated range holds exactly
    rho_h = min(max(sigma2 / denom, 0.0), 1.0)
    rho_T = 1.0 - (1.0 - spec.rho_e) * (1.0 - rho_h)
    return ParamStats(mu=mu, sigma2=sigma2, rho_h=rho_h, rho_T=rho_T)


def joint_edge_distribution(p: float, rho_e: float) -> tuple[float, float, float, float]:
    """``(p11, p10, p01, p00)`` for the G and H indicators of one pair."""
    cross = rho_e * p * (1.0 - p)
    off = (1.0 - rho_e) * p * (1.0 - p)
    return p * p + cross, off, off, (1.0 - p) ** 2 + cross


def sample_pair(spec: ModelSpec, rng: np.random.Generator) -> tuple[Graph, Graph]:
    """Draw G, then H conditioned on G, independently over pairs."""
    u_g = rng.random(spec.p.size)
    u_h = rng.random(spec.p.size)
    g = u_g < spec.p
    h = u_h < spec.rho_e * g + (1.0 - spec.rho_e) * spec.p
    return Graph.from_condensed(spec.n, g), Graph.from_condensed(spec.n, h)


# -- uniform parameter family -----------------------------------------------


@dataclass(frozen=True)
class UniformFamilySpec:
    """p_ij drawn i.i.d. from Uniform(p_center - delta, p_center + delta)."""

    n: int
    p_center: float
    delta: float
    rho_e: float

    def __post_init__(self):
        if not 0.0 < self.p_center < 1.0:
            raise ValueError(f"p_center={self.p_center} outside (0, 1)")
        if self.delta < 0.0 or self.delta > min(self.p_center, 1.0 - self.p_center) + 1e-15:
            raise ValueError(f"delta={self.delta} leaves [0, 1] for p_center={self.p_center}")
        if not 0.0 <= self.rho_e <= 1.0:
            raise ValueError(f"rho_e={self.rho_e} outside [0, 1]")


def rho_h_ceiling(p_center: float) -> float:
    """Largest heterogeneity the uniform family reaches at ``delta = min(p, 1-p)``."""
    return min(p_center, 1.0 - p_center) / (3.0 * max(p_center, 1.0 - p_center))


def delta_for_rho_h(p_center: float, rho_h_target: float) -> float:
    """Half-width whose limiting heterogeneity ``delta**2 / (3 p (1-p))`` hits the target."""
    if not 0.0 < p_center < 1.0:
        raise ValueError(f"p_center={p_center} outside (0, 1)")
    ceiling = rho_h_ceiling(p_center)
    if rho_h_target < 0.0 or rho_h_target > ceiling * (1.0 + 1e-12):
        raise UnattainableTargetError(
            f"rho_h={rho_h_target} is not attainable for p={p_center} (ceiling {ceiling})"
        )
    delta = math.sqrt(3.0 * rho_h_target * p_center * (1.0 - p_center))
    return min(delta, p_center, 1.0 - p_center)


def sample_uniform_family(spec: UniformFamilySpec, rng: np.random.Generator) -> ModelSpec:
    size = math.comb(spec.n, 2)
    if spec.delta == 0.0:
        p = np.full(size, spec.p_center)
    else:
        p = rng.uniform(spec.p_center - spec.delta, spec.p_center + spec.delta, size)
    return ModelSpec(n=spec.n, rho_e=spec.rho_e, p=p)


# -- serialization ----------------------------------------------------------


def format_model_spec(spec: ModelSpec) -> str:
    lines = [f"n {spec.n}", f"rho_e {spec.rho_e!r}", "p"]
    start = 0
    for i in range(spec.n - 1):
        width = spec.n - 1 - i
        lines.append(" ".join(repr(float(v)) for v in spec.p[start : start + width]))
        start += width
    return "\n".join(lines) + "\n"


def parse_model_spec(text: str) -> ModelSpec:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    header: dict[str, str] = {}
    idx = 0
    while idx < len(lines) and lines[idx] != "p":
        parts = lines[idx].split()
        if len(parts) != 2:
            raise ValueError(f"bad header line {lines[idx]!r}")
        header[parts[0]] = parts[1]
        idx += 1
    if idx == len(lines):
        raise ValueError("missing 'p' section")
    try:
        n = int(header["n"])
        rho_e = float(header["rho_e"])
    except KeyError as exc:
        raise ValueError(f"missing header key {exc.args[0]!r}") from None
    rows = lines[idx + 1 :]
    if len(rows) != n - 1:
        raise ValueError(f"expected {n - 1} parameter rows, got {len(rows)}")
    values = []
    for i, row in enumerate(rows):
        vals = [float(v) for v in row.split()]
        if len(vals) != n - 1 - i:
            raise ValueError(f"row {i + 1} has {len(vals)} values, expected {n - 1 - i}")
        values.extend(vals)
    return ModelSpec(n=n, rho_e=rho_e, p=np.array(values))


def read_model_spec(path: str | PathLike) -> ModelSpec:
    with open(path, encoding="utf-8") as fh:
        return parse_model_spec(fh.read())


def write_model_spec(spec: ModelSpec, path: str | PathLike) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_model_spec(spec))
