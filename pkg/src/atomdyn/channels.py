"""Quantum states over the atomic-vector algebra and their channels.

States are positive unital functionals on the normal-form operator algebra
of :mod:`atomdyn.algebra`.  Four representations are executable:

* pure       -- a unit atomic vector u, acting by (u, A u);
* normal     -- a finite density matrix over a frequency support;
* mixed      -- a finite convex combination of pure states;
* averaged   -- a base state smoothed by a random shift: the functional
                A -> E <T_xi base, A>, kept *intensionally* as the pair
                (base, law).  When the law is continuous this functional
                vanishes on every finite-rank projector (it is singular),
                so no matrix can represent it.

Channels: T_h conjugates by the shift S_h, Phi_h by the modulation M_h.
Averaging Phi over a law multiplies density-matrix entries by
chi(p_j - p_k) (Schur product with a positive-definite kernel), which
preserves normality; averaging T over a continuous law destroys it.
One-parameter convolution families turn both into semigroups.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.integrate import quad

from .atoms import AtomicVector, inner, make_vector, norm, unit_atom
from .algebra import (
    AlgebraElement,
    AtomicMeasure,
    BoundedFunction,
    Indicator,
    apply_element,
    apply_shift,
    constant,
)
from .rand import Distribution, ConvolutionFamily, PointMass, convolve

_UNIT_TOL = 1e-12
_HERM_TOL = 1e-12
_PSD_TOL = 1e-10
_EIG_CUT = 1e-14


# ---------------------------------------------------------------------------
# State representations


@dataclass(frozen=True)
class PureState:
    vector: AtomicVector

    def __post_init__(self):
        n = norm(self.vector)
        if abs(n - 1.0) > _UNIT_TOL:
            raise ValueError(f"pure state vector must be unit norm, got {n!r}")


@dataclass(frozen=True)
class NormalState:
    """Density matrix over a finite frequency support."""

    support: Tuple[float, ...]
    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        object.__setattr__(self, "matrix", m)
        k = len(self.support)
        if len(set(self.support)) != k:
            raise ValueError("support frequencies must be distinct")
        if m.shape != (k, k):
            raise ValueError(f"matrix shape {m.shape} does not match support size {k}")
        if np.max(np.abs(m - m.conj().T), initial=0.0) > _HERM_TOL:
            raise ValueError("density matrix must be Hermitian")
        if abs(np.trace(m).real - 1.0) > _UNIT_TOL:
            raise ValueError(f"density matrix trace must be 1, got {np.trace(m)!r}")
        if k and np.linalg.eigvalsh(m).min() < -_PSD_TOL:
            raise ValueError("density matrix must be positive semidefinite")

    def spectral_mixture(self) -> "MixedState":
        """Eigen-decomposition as a convex combination of pure states."""
        w, vecs = np.linalg.eigh(self.matrix)
        comps = []
        for i in range(len(w)):
            if w[i] > _EIG_CUT:
                v = make_vector(
                    [(p, vecs[j, i]) for j, p in enumerate(self.support)]
                )
                v = (1.0 / norm(v)) * v
                comps.append((float(w[i]), PureState(v)))
        total = sum(c for c, _ in comps)
        return MixedState(tuple((c / total, s) for c, s in comps))


@dataclass(frozen=True)
class MixedState:
    components: Tuple[Tuple[float, PureState], ...]

    def __post_init__(self):
        ws = [w for w, _ in self.components]
        if any(w < 0 for w in ws):
            raise ValueError("mixture weights must be non-negative")
        if abs(sum(ws) - 1.0) > _UNIT_TOL:
            raise ValueError(f"mixture weights must sum to 1, got {sum(ws)!r}")


@dataclass(frozen=True)
class AveragedState:
    """Lazy functional A -> E <T_xi base, A>; singular when smoothing is continuous."""

    base: Union[PureState, MixedState]
    smoothing: Distribution

    @property
    def is_singular(self) -> bool:
        return not self.smoothing.has_discrete_part


State = Union[PureState, NormalState, MixedState, AveragedState]


@dataclass(frozen=True)
class StateDecomposition:
    """Convex split into a normal aggregate and a singular aggregate.

    ``normal_weight`` is the total mass p of the normal part; the parts are
    stored as internally normalized (weight, state) tuples.
    """

    normal_weight: float
    normal_components: Tuple[Tuple[float, State], ...]
    singular_components: Tuple[Tuple[float, AveragedState], ...]

    def __post_init__(self):
        p = self.normal_weight
        if not (0.0 <= p <= 1.0):
            raise ValueError(f"normal weight must lie in [0, 1]: {p!r}")
        if p == 1.0 and self.singular_components:
            raise ValueError("weight 1 admits no singular part")
        if p == 0.0 and self.normal_components:
            raise ValueError("weight 0 admits no normal part")

    @property
    def normal_part(self):
        return _aggregate(self.normal_components)

    @property
    def singular_part(self):
        return _aggregate(self.singular_components)


def _aggregate(components):
    if not components:
        return None
    if len(components) == 1:
        return components[0][1]
    if all(isinstance(s, PureState) for _, s in components):
        return MixedState(tuple(components))
    return components


# ---------------------------------------------------------------------------
# Expectations E f(xi - x) over a smoothing law


class McEstimate(NamedTuple):
    value: complex
    stderr: float
    samples: int


def expect_function(
    d: Distribution,
    f: BoundedFunction,
    x: float,
    method: str = "analytic",
    mc_samples: int = 100_000,
    gen: Optional[np.random.Generator] = None,
):
    """E f(xi - x) for xi ~ d.

    ``analytic`` uses closed forms (constants exactly, indicators via the
    cdf, discrete parts by finite summation) and falls through to
    quadrature for a continuous part without a usable closed form.
    ``quadrature`` integrates f against the density.  ``mc`` returns an
    :class:`McEstimate` with the standard error of the sample mean.
    """
    if method == "mc":
        if gen is None:
            raise ValueError("mc evaluation needs a generator")
        xs = d.sample(gen, mc_samples)
        vals = np.array([complex(f(float(s) - x)) for s in xs])
        mean = complex(vals.mean())
        var = float(np.mean(np.abs(vals - mean) ** 2))
        stderr = math.sqrt(var / mc_samples)
        return McEstimate(mean, stderr, mc_samples)

    total = 0j
    for loc, pr in d.discrete_atoms():
        total += pr * complex(f(loc - x))
    cw = d.continuous_weight()
    if cw > 0:
        total += cw * _expect_continuous(d, f, x, method)
    return total


def _expect_continuous(d, f, x, method):
    # closed form for interval indicators: P(lo <= xi - x <= hi)
    if method == "analytic" and isinstance(f, Indicator):
        try:
            return complex(d.cdf(f.hi + x) - d.cdf(f.lo + x))
        except NotImplementedError:
            pass
    if method == "analytic" and (f.tag == "one" or f.tag.startswith("const(")):
        return complex(f(0.0))
    lo, hi = d.density_range()
    re = quad(lambda y: (complex(f(y - x)) * d.pdf(y)).real, lo, hi, limit=400)[0]
    im = quad(lambda y: (complex(f(y - x)) * d.pdf(y)).imag, lo, hi, limit=400)[0]
    return complex(re, im)


# ---------------------------------------------------------------------------
# Evaluation <state, A>


def _pure_components(base: Union[PureState, MixedState]):
    if isinstance(base, PureState):
        return ((1.0, base),)
    return base.components


def evaluate(s, A: AlgebraElement, method: str = "analytic") -> complex:
    """Value of the functional s on the normal-form operator A."""
    if isinstance(s, PureState):
        return inner(s.vector, apply_element(A, s.vector))
    if isinstance(s, NormalState):
        return evaluate(s.spectral_mixture(), A, method)
    if isinstance(s, MixedState):
        return sum(
            (w * evaluate(ps, A, method) for w, ps in s.components), 0j
        )
    if isinstance(s, AveragedState):
        return _evaluate_averaged(s, A, method)
    if isinstance(s, StateDecomposition):
        p = s.normal_weight
        total = 0j
        for w, st in s.normal_components:
            total += p * w * evaluate(st, A, method)
        for w, st in s.singular_components:
            total += (1.0 - p) * w * evaluate(st, A, method)
        return total
    raise TypeError(f"not a state: {s!r}")


def _evaluate_averaged(s: AveragedState, A: AlgebraElement, method: str) -> complex:
    """E <T_xi base, A> term by term.

    For a term c M_f S_a the pairs of base atoms with p_j = p_k - a
    contribute conj(c_j) c_k E f(xi - p_j); the random shift cancels for
    the pairing itself (shift-evaluation invariance) and survives only
    inside the multiplier argument.
    """
    total = 0j
    for w, ps in _pure_components(s.base):
        u = ps.vector
        for c, f, a in A.terms:
            shifted = apply_shift(a, u)
            for atom_j in u:
                ck = shifted.amplitude(atom_j.p)
                if ck != 0:
                    e = expect_function(s.smoothing, f, atom_j.p, method=method)
                    total += w * c * atom_j.c.conjugate() * ck * e
    return total


# ---------------------------------------------------------------------------
# Shift channel T and its average


def channel_T(h: float, s: State) -> State:
    """Conjugation by the shift: rho -> S_h rho S_h*."""
    if isinstance(s, PureState):
        return PureState(apply_shift(h, s.vector))
    if isinstance(s, NormalState):
        return NormalState(tuple(p - h for p in s.support), s.matrix)
    if isinstance(s, MixedState):
        return MixedState(
            tuple((w, PureState(apply_shift(h, ps.vector))) for w, ps in s.components)
        )
    if isinstance(s, AveragedState):
        raise TypeError(
            "shift channels compose with averaged states through semigroup_T"
        )
    raise TypeError(f"not a state: {s!r}")


def averaged_T(d: Distribution, s: State) -> AveragedState:
    """The channel average E T_xi as a lazy functional.

    A discrete law is permitted; the result then evaluates as a finite
    mixture and need not be singular.  Stacking on an existing averaged
    state convolves the smoothing laws (used by the semigroup).
    """
    if isinstance(s, NormalState):
        return AveragedState(s.spectral_mixture(), d)
    if isinstance(s, AveragedState):
        return AveragedState(s.base, convolve(s.smoothing, d))
    if isinstance(s, (PureState, MixedState)):
        return AveragedState(s, d)
    raise TypeError(f"not a state: {s!r}")


def eval_averaged_on_mult(
    avg: AveragedState,
    f: BoundedFunction,
    method: str = "analytic",
    mc_samples: int = 100_000,
    gen: Optional[np.random.Generator] = None,
):
    """<E T_xi base, M_f> = sum_k |c_k|^2 E f(xi - p_k)."""
    if method == "mc":
        values = []
        variances = 0.0
        total = 0j
        for w, ps in _pure_components(avg.base):
            for atom in ps.vector:
                est = expect_function(
                    avg.smoothing, f, atom.p, "mc", mc_samples, gen
                )
                coef = w * abs(atom.c) ** 2
                total += coef * est.value
                variances += (coef * est.stderr) ** 2
        return McEstimate(total, math.sqrt(variances), mc_samples)
    total = 0j
    for w, ps in _pure_components(avg.base):
        for atom in ps.vector:
            total += w * abs(atom.c) ** 2 * expect_function(
                avg.smoothing, f, atom.p, method=method
            )
    return total


def eval_averaged_on_shift_convolution(avg: AveragedState, m: AtomicMeasure) -> complex:
    """<E T_xi base, sum_j w_j S_{a_j}> -- identical to the unaveraged value."""
    total = 0j
    for a, w in m.atoms:
        total += w * evaluate_base_on_shift(avg.base, a)
    return total


def evaluate_base_on_shift(base: Union[PureState, MixedState], a: float) -> complex:
    total = 0j
    for w, ps in _pure_components(base):
        total += w * inner(ps.vector, apply_shift(a, ps.vector))
    return total


def projector_value(
    avg: AveragedState,
    v: AtomicVector,
    method: str = "analytic",
    mc_samples: int = 10_000,
    gen: Optional[np.random.Generator] = None,
) -> float:
    """<E T_xi base, P_v> = E |(S_xi u, v)|^2.

    Exactly zero for continuous smoothing: a sampled shift never lands the
    (bit-exact) atom grid of u on that of v, almost surely -- the defining
    property of a singular state.  Discrete smoothing sums over the law's
    atoms and may be positive.
    """
    nv = norm(v)
    if abs(nv - 1.0) > _UNIT_TOL:
        raise ValueError(f"projector direction must be unit norm, got {nv!r}")
    if method == "mc":
        if gen is None:
            raise ValueError("mc evaluation needs a generator")
        total = 0.0
        for w, ps in _pure_components(avg.base):
            # (S_x u, v) is nonzero only when x hits an atom-grid difference
            # p_u - p_v bit-exactly; precompute the finitely many overlaps
            diff_map: dict[float, complex] = {}
            for au in ps.vector:
                for av in v:
                    dkey = au.p - av.p
                    diff_map[dkey] = diff_map.get(dkey, 0j) + au.c.conjugate() * av.c
            xs = avg.smoothing.sample(gen, mc_samples)
            acc = 0.0
            hits = np.isin(xs, np.array(list(diff_map), dtype=float))
            for x in xs[hits]:
                acc += abs(diff_map.get(float(x), 0j)) ** 2
            total += w * acc / mc_samples
        return total
    total = 0.0
    for w, ps in _pure_components(avg.base):
        for loc, pr in avg.smoothing.discrete_atoms():
            total += w * pr * abs(inner(apply_shift(loc, ps.vector), v)) ** 2
    # the continuous part contributes exactly zero
    return total


def normality_witness(s, family: Sequence[Sequence[float]]) -> float:
    """Best mass captured by projectors onto finite atom sets from ``family``.

    Equals 1 for normal-kind states whose support the family covers, and 0
    for averaged states with continuous smoothing; a convex split reports
    its normal weight when the family covers the normal support.
    """
    fams = [tuple(fs) for fs in family]
    if not fams:
        raise ValueError("family of finite atom sets must be non-empty")
    if isinstance(s, PureState):
        return max(
            sum(abs(a.c) ** 2 for a in s.vector if a.p in set(fs)) for fs in fams
        )
    if isinstance(s, NormalState):
        return max(
            sum(
                float(s.matrix[j, j].real)
                for j, p in enumerate(s.support)
                if p in set(fs)
            )
            for fs in fams
        )
    if isinstance(s, MixedState):
        return max(
            sum(
                w * sum(abs(a.c) ** 2 for a in ps.vector if a.p in set(fs))
                for w, ps in s.components
            )
            for fs in fams
        )
    if isinstance(s, AveragedState):
        atoms = s.smoothing.discrete_atoms()
        if not atoms:
            return 0.0
        # discrete part: finite mixture of shifted bases
        best = 0.0
        for fs in fams:
            fset = set(fs)
            acc = 0.0
            for w, ps in _pure_components(s.base):
                for loc, pr in atoms:
                    shifted = apply_shift(loc, ps.vector)
                    acc += w * pr * sum(
                        abs(a.c) ** 2 for a in shifted if a.p in fset
                    )
            best = max(best, acc)
        return best
    if isinstance(s, StateDecomposition):
        p = s.normal_weight
        wn = sum(
            w * normality_witness(st, family) for w, st in s.normal_components
        )
        ws = sum(
            w * normality_witness(st, family) for w, st in s.singular_components
        )
        return p * wn + (1.0 - p) * ws
    raise TypeError(f"not a state: {s!r}")


# ---------------------------------------------------------------------------
# Modulation channel Phi and dephasing


def channel_Phi(h: float, s: NormalState) -> NormalState:
    """Conjugation by the modulation: entry (j, k) gains e^{ih(p_j - p_k)}."""
    p = np.array(s.support)
    phases = np.exp(1j * h * (p[:, None] - p[None, :]))
    return NormalState(s.support, phases * s.matrix)


def averaged_Phi(d: Distribution, s: NormalState) -> NormalState:
    """Dephasing: Schur product with the kernel chi(p_j - p_k).

    The kernel is positive definite and has unit diagonal, so the output
    stays Hermitian, PSD, and trace one; off-diagonals shrink by |chi|.
    """
    p = np.array(s.support)
    k = len(p)
    kernel = np.empty((k, k), dtype=complex)
    for j in range(k):
        for l in range(k):
            kernel[j, l] = d.chi(float(p[j] - p[l]))
    return NormalState(s.support, kernel * s.matrix)


def dephasing_kernel(d: Distribution, support: Sequence[float]) -> np.ndarray:
    """The Schur multiplier matrix chi(p_j - p_k) on a frequency support."""
    p = list(support)
    k = len(p)
    out = np.empty((k, k), dtype=complex)
    for j in range(k):
        for l in range(k):
            out[j, l] = d.chi(p[j] - p[l])
    return out


# ---------------------------------------------------------------------------
# Semigroups


def semigroup_T(fam: ConvolutionFamily, t: float, s: State) -> Union[State, AveragedState]:
    """T(t) = E T_{xi_t}; composing T(t) after T(s) convolves the laws."""
    if t < 0:
        raise ValueError(f"time must be non-negative: {t!r}")
    if t == 0 and not isinstance(s, AveragedState):
        return s
    return averaged_T(fam.at(t), s)


def semigroup_Phi(fam: ConvolutionFamily, t: float, s: NormalState) -> NormalState:
    """Phi(t): Schur multiplier of the family law at time t; exact semigroup."""
    if t < 0:
        raise ValueError(f"time must be non-negative: {t!r}")
    return averaged_Phi(fam.at(t), s)


# ---------------------------------------------------------------------------
# Yosida--Hewitt split


def yosida_hewitt_split(
    components: Iterable[Tuple[float, object]]
) -> StateDecomposition:
    """Split an explicit convex combination into normal and singular parts.

    Averaged states with purely discrete smoothing evaluate as finite
    mixtures and therefore land in the normal bucket.
    """
    comps = [(float(w), s) for w, s in components]
    if any(w < 0 for w, _ in comps):
        raise ValueError("weights must be non-negative")
    total = sum(w for w, _ in comps)
    if abs(total - 1.0) > _UNIT_TOL:
        raise ValueError(f"weights must sum to 1, got {total!r}")

    normal: list[Tuple[float, object]] = []
    singular: list[Tuple[float, AveragedState]] = []
    for w, s in comps:
        if w == 0:
            continue
        if isinstance(s, AveragedState) and s.is_singular:
            singular.append((w, s))
        elif isinstance(s, AveragedState):
            # discrete smoothing: a finite mixture of shifted bases
            mix = []
            for bw, ps in _pure_components(s.base):
                for loc, pr in s.smoothing.discrete_atoms():
                    mix.append((bw * pr, PureState(apply_shift(loc, ps.vector))))
            normal.append((w, MixedState(tuple(mix))))
        elif isinstance(s, (PureState, NormalState, MixedState)):
            normal.append((w, s))
        else:
            raise TypeError(f"not a state: {s!r}")

    p = sum(w for w, _ in normal)
    nn = tuple((w / p, s) for w, s in normal) if p > 0 else ()
    q = 1.0 - p
    ss = tuple((w / q, s) for w, s in singular) if q > 0 else ()
    # guard against float drift putting p marginally outside [0, 1]
    p = min(1.0, max(0.0, p))
    return StateDecomposition(p, nn, ss)
