"""Probability laws, characteristic functions, and operator random walks.

Every law carries its characteristic function chi(x) = E e^{ix xi} in
closed form.  Averaging the modulation group over a law multiplies the
amplitude at frequency p by chi(sqrt(t) p); iterating n independent steps
of size t/n and averaging gives chi(sqrt(t/n) p)^n, which converges to the
Gaussian multiplier e^{-t D p^2 / 2} at rate O(1/n) for zero-mean laws
with variance D (and is exactly equal for Gaussian steps).

Randomness is counter-based (Philox): a 64-bit seed plus a stream index
determine the draw sequence, so parallel Monte Carlo partitions are
reproducible regardless of scheduling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple

import numpy as np

from .atoms import AtomicVector, make_vector
from .algebra import apply_mod

_WEIGHT_TOL = 1e-12


# ---------------------------------------------------------------------------
# Laws


class Distribution:
    """Base class for the supported laws.  Immutable."""

    has_discrete_part: bool = False

    def chi(self, x: float) -> complex:
        """Characteristic function E e^{ix xi}."""
        raise NotImplementedError

    def chi_pow(self, x: float, n: int) -> complex:
        """chi(x)^n; overridden where a closed form avoids power-loss."""
        return self.chi(x) ** n

    def sample(self, gen: np.random.Generator, size: int) -> np.ndarray:
        raise NotImplementedError

    @property
    def mean(self) -> float:
        raise NotImplementedError

    @property
    def variance(self) -> float:
        """Second central moment; +inf where undefined/infinite."""
        raise NotImplementedError

    # Optional structure used by the channel module ------------------------

    def cdf(self, x: float) -> float:
        raise NotImplementedError(f"no closed-form cdf for {self!r}")

    def pdf(self, x: float) -> float:
        raise NotImplementedError(f"no density for {self!r}")

    def density_range(self) -> Tuple[float, float]:
        """Interval carrying essentially all continuous mass (quadrature support)."""
        raise NotImplementedError

    def discrete_atoms(self) -> Tuple[Tuple[float, float], ...]:
        """(location, probability) pairs of the discrete part."""
        return ()

    def continuous_weight(self) -> float:
        """Probability mass of the continuous part."""
        return 0.0 if self.has_discrete_part else 1.0

    def to_json(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class Gaussian(Distribution):
    D: float = 1.0

    def __post_init__(self):
        if not (self.D > 0 and math.isfinite(self.D)):
            raise ValueError(f"variance must be positive: {self.D!r}")

    def chi(self, x: float) -> complex:
        return complex(math.exp(-0.5 * self.D * x * x))

    def chi_pow(self, x: float, n: int) -> complex:
        # closed form of chi^n; keeps the Gaussian fixed-point identity exact
        return complex(math.exp(-0.5 * n * self.D * x * x))

    def sample(self, gen, size):
        return gen.normal(0.0, math.sqrt(self.D), size)

    mean = property(lambda self: 0.0)
    variance = property(lambda self: self.D)

    def cdf(self, x):
        return 0.5 * (1.0 + math.erf(x / math.sqrt(2.0 * self.D)))

    def pdf(self, x):
        return math.exp(-x * x / (2.0 * self.D)) / math.sqrt(2.0 * math.pi * self.D)

    def density_range(self):
        s = math.sqrt(self.D)
        return (-10.0 * s, 10.0 * s)

    def to_json(self):
        return {"kind": "gaussian", "D": self.D}


@dataclass(frozen=True)
class Cauchy(Distribution):
    gamma: float = 1.0

    def __post_init__(self):
        if not (self.gamma > 0 and math.isfinite(self.gamma)):
            raise ValueError(f"scale must be positive: {self.gamma!r}")

    def chi(self, x: float) -> complex:
        return complex(math.exp(-self.gamma * abs(x)))

    def chi_pow(self, x: float, n: int) -> complex:
        return complex(math.exp(-n * self.gamma * abs(x)))

    def sample(self, gen, size):
        return self.gamma * gen.standard_cauchy(size)

    mean = property(lambda self: math.nan)
    variance = property(lambda self: math.inf)

    def cdf(self, x):
        return 0.5 + math.atan(x / self.gamma) / math.pi

    def pdf(self, x):
        return self.gamma / (math.pi * (x * x + self.gamma * self.gamma))

    def density_range(self):
        # heavy tails: wide window; quadrature callers should prefer the cdf
        return (-1e6 * self.gamma, 1e6 * self.gamma)

    def to_json(self):
        return {"kind": "cauchy", "gamma": self.gamma}


@dataclass(frozen=True)
class Rademacher(Distribution):
    has_discrete_part = True

    def chi(self, x: float) -> complex:
        return complex(math.cos(x))

    def sample(self, gen, size):
        return gen.choice(np.array([-1.0, 1.0]), size)

    mean = property(lambda self: 0.0)
    variance = property(lambda self: 1.0)

    def discrete_atoms(self):
        return ((-1.0, 0.5), (1.0, 0.5))

    def to_json(self):
        return {"kind": "rademacher"}


@dataclass(frozen=True)
class Uniform(Distribution):
    a: float = -1.0
    b: float = 1.0

    def __post_init__(self):
        if not (self.a < self.b and math.isfinite(self.a) and math.isfinite(self.b)):
            raise ValueError(f"need a < b, got [{self.a!r}, {self.b!r}]")

    def chi(self, x: float) -> complex:
        if x == 0:
            return 1.0 + 0j
        return (np.exp(1j * x * self.b) - np.exp(1j * x * self.a)) / (
            1j * x * (self.b - self.a)
        )

    def sample(self, gen, size):
        return gen.uniform(self.a, self.b, size)

    mean = property(lambda self: 0.5 * (self.a + self.b))
    variance = property(lambda self: (self.b - self.a) ** 2 / 12.0)

    def cdf(self, x):
        return min(1.0, max(0.0, (x - self.a) / (self.b - self.a)))

    def pdf(self, x):
        return 1.0 / (self.b - self.a) if self.a <= x <= self.b else 0.0

    def density_range(self):
        return (self.a, self.b)

    def to_json(self):
        return {"kind": "uniform", "a": self.a, "b": self.b}


@dataclass(frozen=True)
class PointMass(Distribution):
    a: float = 0.0
    has_discrete_part = True

    def __post_init__(self):
        if not math.isfinite(self.a):
            raise ValueError(f"non-finite location: {self.a!r}")

    def chi(self, x: float) -> complex:
        import cmath

        return cmath.exp(1j * self.a * x)

    def sample(self, gen, size):
        return np.full(size, self.a)

    mean = property(lambda self: self.a)
    variance = property(lambda self: 0.0)

    def discrete_atoms(self):
        return ((self.a, 1.0),)

    def to_json(self):
        return {"kind": "pointmass", "a": self.a}


@dataclass(frozen=True)
class FiniteMixture(Distribution):
    components: Tuple[Tuple[float, Distribution], ...] = ()

    def __post_init__(self):
        if not self.components:
            raise ValueError("mixture needs at least one component")
        ws = [w for w, _ in self.components]
        if any(w < 0 for w in ws):
            raise ValueError("mixture weights must be non-negative")
        if abs(sum(ws) - 1.0) > _WEIGHT_TOL:
            raise ValueError(f"mixture weights must sum to 1, got {sum(ws)!r}")

    @property
    def has_discrete_part(self) -> bool:  # type: ignore[override]
        return any(w > 0 and d.has_discrete_part for w, d in self.components)

    def chi(self, x: float) -> complex:
        return sum((w * d.chi(x) for w, d in self.components), 0j)

    def sample(self, gen, size):
        ws = np.array([w for w, _ in self.components])
        counts = gen.multinomial(size, ws / ws.sum())
        parts = [d.sample(gen, k) for (_, d), k in zip(self.components, counts)]
        out = np.concatenate(parts) if parts else np.empty(0)
        gen.shuffle(out)
        return out

    @property
    def mean(self):
        return sum(w * d.mean for w, d in self.components)

    @property
    def variance(self):
        m = self.mean
        if not math.isfinite(m):
            return math.inf
        return sum(
            w * (d.variance + (d.mean - m) ** 2) for w, d in self.components
        )

    def cdf(self, x):
        return sum(w * d.cdf(x) for w, d in self.components)

    def discrete_atoms(self):
        acc: dict[float, float] = {}
        for w, d in self.components:
            for loc, pr in d.discrete_atoms():
                acc[loc] = acc.get(loc, 0.0) + w * pr
        return tuple(sorted(acc.items()))

    def continuous_weight(self):
        return sum(w * d.continuous_weight() for w, d in self.components)

    def to_json(self):
        return {
            "kind": "mixture",
            "components": [
                {"weight": w, "distribution": d.to_json()} for w, d in self.components
            ],
        }


def distribution_from_json(doc: dict) -> Distribution:
    """Inverse of Distribution.to_json."""
    kind = doc.get("kind")
    if kind == "gaussian":
        return Gaussian(float(doc["D"]))
    if kind == "cauchy":
        return Cauchy(float(doc["gamma"]))
    if kind == "rademacher":
        return Rademacher()
    if kind == "uniform":
        return Uniform(float(doc["a"]), float(doc["b"]))
    if kind == "pointmass":
        return PointMass(float(doc["a"]))
    if kind == "mixture":
        return FiniteMixture(
            tuple(
                (float(c["weight"]), distribution_from_json(c["distribution"]))
                for c in doc["components"]
            )
        )
    raise ValueError(f"unknown distribution kind: {kind!r}")


# ---------------------------------------------------------------------------
# Convolution families and reproducible streams


@dataclass(frozen=True)
class ConvolutionFamily:
    """One-parameter family with law(s) + law(t) distributed as law(s+t)."""

    kind: str  # "gaussian" | "cauchy"

    def __post_init__(self):
        if self.kind not in ("gaussian", "cauchy"):
            raise ValueError(f"unknown family kind: {self.kind!r}")

    def at(self, t: float) -> Distribution:
        if t < 0:
            raise ValueError(f"family parameter must be non-negative: {t!r}")
        if t == 0:
            return PointMass(0.0)
        return Gaussian(t) if self.kind == "gaussian" else Cauchy(t)


def convolve(d1: Distribution, d2: Distribution) -> Distribution:
    """Law of xi_1 + xi_2 for the closed-form cases used by the semigroups."""
    if isinstance(d1, PointMass) and d1.a == 0:
        return d2
    if isinstance(d2, PointMass) and d2.a == 0:
        return d1
    if isinstance(d1, PointMass) and isinstance(d2, PointMass):
        return PointMass(d1.a + d2.a)
    if isinstance(d1, Gaussian) and isinstance(d2, Gaussian):
        return Gaussian(d1.D + d2.D)
    if isinstance(d1, Cauchy) and isinstance(d2, Cauchy):
        return Cauchy(d1.gamma + d2.gamma)
    raise ValueError(f"no closed-form convolution for {d1!r} + {d2!r}")


@dataclass(frozen=True)
class SeededRng:
    """Counter-based randomness: (seed, stream index) -> independent stream.

    Streams use Philox with key (seed, index); equal seeds give identical
    draws, distinct indices give statistically independent substreams.
    """

    seed: int

    def stream(self, index: int = 0) -> np.random.Generator:
        key = np.array(
            [np.uint64(self.seed & 0xFFFFFFFFFFFFFFFF), np.uint64(index)],
            dtype=np.uint64,
        )
        return np.random.Generator(np.random.Philox(key=key))


# ---------------------------------------------------------------------------
# Averaged multipliers and walks


def averaged_mod_apply(d: Distribution, t: float, u: AtomicVector) -> AtomicVector:
    """Mean modulation E M_{sqrt(t) xi}: amplitude at p scales by chi(sqrt(t) p)."""
    if t < 0:
        raise ValueError(f"time must be non-negative: {t!r}")
    rt = math.sqrt(t)
    return make_vector([(a.p, d.chi(rt * a.p) * a.c) for a in u])


def random_walk_apply(
    d: Distribution,
    t: float,
    n: int,
    gen: np.random.Generator,
    u: AtomicVector,
) -> AtomicVector:
    """One realization of n composed modulation steps of size t/n.

    Modulations commute and their parameters add, so the composed phase at
    frequency p is e^{i p sqrt(t/n) sum_k xi_k}; unitary for every draw.
    """
    if n < 1:
        raise ValueError(f"need at least one step: {n!r}")
    if t < 0:
        raise ValueError(f"time must be non-negative: {t!r}")
    total = float(d.sample(gen, n).sum())
    return apply_mod(math.sqrt(t / n) * total, u)


def expected_walk_apply(d: Distribution, t: float, n: int, u: AtomicVector) -> AtomicVector:
    """Mean of the n-step walk: amplitude factor chi(sqrt(t/n) p)^n."""
    if n < 1:
        raise ValueError(f"need at least one step: {n!r}")
    if t < 0:
        raise ValueError(f"time must be non-negative: {t!r}")
    rt = math.sqrt(t / n)
    return make_vector([(a.p, d.chi_pow(rt * a.p, n) * a.c) for a in u])


def chernoff_limit_apply(D: float, t: float, u: AtomicVector) -> AtomicVector:
    """Limit multiplier of the averaged walks: e^{-t D p^2 / 2} at frequency p."""
    if D <= 0:
        raise ValueError(f"variance must be positive: {D!r}")
    if t < 0:
        raise ValueError(f"time must be non-negative: {t!r}")
    return make_vector(
        [(a.p, math.exp(-0.5 * t * D * a.p * a.p) * a.c) for a in u]
    )


def chernoff_error(
    d: Distribution, t: float, n: int, probes: Sequence[float]
) -> float:
    """Sup over probe frequencies of |chi(sqrt(t/n) x)^n - e^{-t D x^2 / 2}|.

    Requires a zero-mean law with finite variance; decays like O(1/n) when
    the fourth moment is finite, and vanishes identically for Gaussian steps.
    """
    D = d.variance
    if not (math.isfinite(D) and D > 0):
        raise ValueError(
            f"law must have positive finite variance, got {D!r} for {d!r}"
        )
    if d.mean != 0:
        raise ValueError(f"law must be centered, got mean {d.mean!r}")
    if n < 1:
        raise ValueError(f"need at least one step: {n!r}")
    if t < 0:
        raise ValueError(f"time must be non-negative: {t!r}")
    rt = math.sqrt(t / n)
    return max(
        abs(d.chi_pow(rt * x, n) - math.exp(-0.5 * t * D * x * x)) for x in probes
    )
