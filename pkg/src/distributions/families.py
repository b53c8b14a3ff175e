"""
Runtime distributions built from specs.

Every spec reduces to a ``Law``: a finite mixture of truncated continuous
scipy distributions and weighted atoms. Mixtures concatenate laws,
conditioning restricts continuous pieces and splits the atoms sitting on the
quantile boundaries, so all oracle quantities can be evaluated exactly up to
quadrature error.
"""

import math
from functools import lru_cache
from typing import Any, Callable, List, Optional, Sequence, Tuple

import numpy as np
from scipy import integrate, stats

from mechanisms.exceptions import InvalidParameterError, SupportViolationError

from .specs import (
    ConditionedSpec,
    ExponentialSpec,
    GaussianSpec,
    HardGadgetSpec,
    MixtureSpec,
    ParetoSpec,
    PointMassSpec,
    ShiftedBernoulliSpec,
    TwoPointSpec,
    UniformSpec,
)

_ATOM_TOL = 1e-12
_BISECTION_STEPS = 200


class ContinuousPiece:
    """A frozen scipy distribution restricted to [lower, upper] and renormalized."""

    def __init__(self, dist: Any, lower: Optional[float] = None, upper: Optional[float] = None):
        support_lo, support_hi = (float(v) for v in dist.support())
        self.dist = dist
        self.lower = support_lo if lower is None else max(float(lower), support_lo)
        self.upper = support_hi if upper is None else min(float(upper), support_hi)
        self._f_lo = float(dist.cdf(self.lower)) if math.isfinite(self.lower) else 0.0
        self._f_hi = float(dist.cdf(self.upper)) if math.isfinite(self.upper) else 1.0
        self.mass = self._f_hi - self._f_lo
        if not self.mass > 0:
            raise InvalidParameterError(
                f"restriction [{self.lower}, {self.upper}] carries no probability mass"
            )

    def cdf(self, x: Any) -> Any:
        raw = np.clip(self.dist.cdf(x), self._f_lo, self._f_hi)
        return (raw - self._f_lo) / self.mass

    def pdf(self, x: Any) -> Any:
        inside = (np.asarray(x) >= self.lower) & (np.asarray(x) <= self.upper)
        return np.where(inside, self.dist.pdf(x) / self.mass, 0.0)

    def quantile(self, u: Any) -> Any:
        return np.clip(self.dist.ppf(self._f_lo + np.asarray(u) * self.mass), self.lower, self.upper)

    def restrict(self, lower: float, upper: float) -> Optional[Tuple[float, "ContinuousPiece"]]:
        """Piece restricted further, with the fraction of this piece's mass it keeps."""
        new_lo, new_hi = max(lower, self.lower), min(upper, self.upper)
        if not new_lo < new_hi:
            return None
        share = float(self.cdf(new_hi) - self.cdf(new_lo))
        if share <= 0:
            return None
        return share, ContinuousPiece(self.dist, new_lo, new_hi)


class Law:
    """
    Finite mixture of continuous pieces and atoms.

    Args:
        pieces: (weight, ContinuousPiece) pairs
        atom_values: Atom locations
        atom_weights: Atom probabilities; together with piece weights they sum to 1
    """

    def __init__(
        self,
        pieces: Sequence[Tuple[float, ContinuousPiece]] = (),
        atom_values: Sequence[float] = (),
        atom_weights: Sequence[float] = (),
    ):
        self.pieces: List[Tuple[float, ContinuousPiece]] = [(float(w), p) for w, p in pieces if w > 0]
        values = np.asarray(atom_values, dtype=float)
        weights = np.asarray(atom_weights, dtype=float)
        keep = weights > 0
        self.atom_values, inverse = np.unique(values[keep], return_inverse=True)
        self.atom_weights = np.bincount(inverse, weights=weights[keep], minlength=self.atom_values.size)
        self._atom_cum = np.cumsum(self.atom_weights)

    # -- structure -------------------------------------------------------

    @property
    def is_pure_atomic(self) -> bool:
        return not self.pieces

    @property
    def support(self) -> Tuple[float, float]:
        lows = [p.lower for _, p in self.pieces] + list(self.atom_values[:1])
        highs = [p.upper for _, p in self.pieces] + list(self.atom_values[-1:])
        return float(min(lows)), float(max(highs))

    def breakpoints(self) -> List[float]:
        """Finite points where the law changes character."""
        points = set(float(v) for v in self.atom_values)
        for _, piece in self.pieces:
            points.update(v for v in (piece.lower, piece.upper) if math.isfinite(v))
            points.update(float(v) for v in piece.quantile(np.array([0.25, 0.5, 0.75])))
        return sorted(points)

    def scaled(self, factor: float) -> Tuple[List[Tuple[float, ContinuousPiece]], np.ndarray, np.ndarray]:
        return (
            [(w * factor, p) for w, p in self.pieces],
            self.atom_values.copy(),
            self.atom_weights * factor,
        )

    # -- distribution functions ------------------------------------------

    def cdf(self, x: Any) -> Any:
        """Right-continuous CDF, Pr[X <= x]."""
        return self._cdf(x, strict=False)

    def cdf_left(self, x: Any) -> Any:
        """Left limit of the CDF, Pr[X < x]."""
        return self._cdf(x, strict=True)

    def _cdf(self, x: Any, strict: bool) -> Any:
        arr = np.asarray(x, dtype=float)
        total = np.zeros_like(arr)
        for weight, piece in self.pieces:
            total = total + weight * piece.cdf(arr)
        if self.atom_values.size:
            side = "left" if strict else "right"
            idx = np.searchsorted(self.atom_values, arr, side=side)
            cum = np.concatenate(([0.0], self._atom_cum))
            total = total + cum[idx]
        total = np.clip(total, 0.0, 1.0)
        return float(total) if total.ndim == 0 else total

    def quantile(self, p: Any) -> Any:
        """Generalized inverse inf{x : F(x) >= p}."""
        levels = np.asarray(p, dtype=float)
        if np.any((levels <= 0) | (levels >= 1)):
            raise InvalidParameterError("quantile levels must lie in (0, 1)")

        if len(self.pieces) == 1 and not self.atom_values.size:
            out = self.pieces[0][1].quantile(levels)
        elif self.is_pure_atomic:
            idx = np.searchsorted(self._atom_cum, levels - _ATOM_TOL, side="left")
            out = self.atom_values[np.minimum(idx, self.atom_values.size - 1)]
        else:
            out = self._bisect_quantile(levels)
        out = np.asarray(out, dtype=float)
        return float(out) if out.ndim == 0 else out

    def _bisect_quantile(self, levels: np.ndarray) -> np.ndarray:
        flat = levels.reshape(-1)
        candidates = [np.broadcast_to(v, flat.shape) for v in self.atom_values]
        candidates += [piece.quantile(flat) for _, piece in self.pieces]
        stacked = np.vstack(candidates)
        lo, hi = stacked.min(axis=0), stacked.max(axis=0)
        lo = np.nextafter(lo, -np.inf)

        for _ in range(_BISECTION_STEPS):
            mid = 0.5 * (lo + hi)
            reached = self.cdf(mid) >= flat
            hi = np.where(reached, mid, hi)
            lo = np.where(reached, lo, mid)

        # an atom inside the final bracket that already reaches p is the exact answer
        for value in self.atom_values:
            snap = (value > lo) & (value <= hi) & (self.cdf(np.full(flat.shape, value)) >= flat - _ATOM_TOL)
            hi = np.where(snap, value, hi)
        return hi.reshape(levels.shape)

    # -- sampling and expectations ---------------------------------------

    def sample(self, n: int, rng: np.random.Generator) -> np.ndarray:
        """n i.i.d. draws: pick a piece or atom by weight, then sample inside it."""
        weights = np.array([w for w, _ in self.pieces] + list(self.atom_weights))
        weights = weights / weights.sum()
        choice = rng.choice(weights.size, size=n, p=weights)
        out = np.empty(n, dtype=float)
        for i, (_, piece) in enumerate(self.pieces):
            mask = choice == i
            count = int(mask.sum())
            if count:
                out[mask] = piece.quantile(rng.random(count))
        offset = len(self.pieces)
        for j, value in enumerate(self.atom_values):
            out[choice == offset + j] = value
        return out

    def expect(self, g: Callable[[Any], Any], extra_points: Sequence[float] = ()) -> Tuple[float, float]:
        """
        E[g(X)] by adaptive quadrature on the continuous pieces plus the atom sum.

        Args:
            g: Vectorized function
            extra_points: Points where g is not smooth, e.g. the mean for |x - mu|

        Returns:
            (value, absolute error estimate)
        """
        value = float(np.sum(self.atom_weights * g(self.atom_values))) if self.atom_values.size else 0.0
        error = 0.0
        for weight, piece in self.pieces:
            points = {p for p in extra_points if piece.lower < p < piece.upper}
            points.update(float(v) for v in piece.quantile(np.array([0.25, 0.5, 0.75])))
            edges = [piece.lower] + sorted(points) + [piece.upper]
            for a, b in zip(edges[:-1], edges[1:]):
                if not a < b:
                    continue
                part, err = integrate.quad(
                    lambda t: float(g(t)) * float(piece.pdf(t)),
                    a,
                    b,
                    epsabs=1e-13,
                    epsrel=1e-10,
                    limit=200,
                )
                value += weight * part
                error += weight * err
        return value, error

    def integrate_over_support(self, h: Callable[[float], float]) -> Tuple[float, float]:
        """Lebesgue integral of h over the convex hull of the support, split at breakpoints."""
        low, high = self.support
        edges = [low] + [p for p in self.breakpoints() if low < p < high] + [high]
        value, error = 0.0, 0.0
        for a, b in zip(edges[:-1], edges[1:]):
            if not a < b:
                continue
            part, err = integrate.quad(h, a, b, epsabs=1e-13, epsrel=1e-10, limit=200)
            value += part
            error += err
        return value, error


def _mixture_law(parts: Sequence[Tuple[float, Law]]) -> Law:
    pieces: List[Tuple[float, ContinuousPiece]] = []
    values: List[np.ndarray] = []
    weights: List[np.ndarray] = []
    for factor, law in parts:
        p, v, w = law.scaled(factor)
        pieces.extend(p)
        values.append(v)
        weights.append(w)
    return Law(pieces, np.concatenate(values), np.concatenate(weights))


def _conditioned_law(base: Law, lo_q: float, hi_q: float) -> Law:
    span = hi_q - lo_q
    lower = base.quantile(lo_q) if lo_q > 0 else base.support[0]
    upper = base.quantile(hi_q) if hi_q < 1 else base.support[1]

    pieces: List[Tuple[float, ContinuousPiece]] = []
    for weight, piece in base.pieces:
        restricted = piece.restrict(lower, upper)
        if restricted is not None:
            share, new_piece = restricted
            pieces.append((weight * share / span, new_piece))

    # atoms keep the part of their probability interval that overlaps [lo_q, hi_q]
    right = base.cdf(base.atom_values) if base.atom_values.size else np.array([])
    left = base.cdf_left(base.atom_values) if base.atom_values.size else np.array([])
    overlap = np.clip(np.minimum(right, hi_q) - np.maximum(left, lo_q), 0.0, None) / span
    return Law(pieces, base.atom_values, overlap)


def check_gadget_core(core: Law) -> None:
    """
    Require the core of a hard-instance gadget to live in [-1/2, 1/2).

    Raises:
        SupportViolationError: If the core puts mass outside that range
    """
    low, high = core.support
    atoms_ok = not core.atom_values.size or (core.atom_values.min() >= -0.5 and core.atom_values.max() < 0.5)
    pieces_ok = all(p.lower >= -0.5 and p.upper <= 0.5 for _, p in core.pieces)
    if not (atoms_ok and pieces_ok):
        raise SupportViolationError(f"gadget core must be supported in [-1/2, 1/2), got [{low}, {high}]")


@lru_cache(maxsize=256)
def build_law(spec: Any) -> Law:
    """Runtime law for a (hashable, frozen) spec."""
    if isinstance(spec, GaussianSpec):
        return Law([(1.0, ContinuousPiece(stats.norm(loc=spec.mu, scale=spec.sigma)))])
    if isinstance(spec, UniformSpec):
        return Law([(1.0, ContinuousPiece(stats.uniform(loc=spec.a, scale=spec.b - spec.a)))])
    if isinstance(spec, ExponentialSpec):
        return Law([(1.0, ContinuousPiece(stats.expon(scale=1.0 / spec.rate)))])
    if isinstance(spec, ParetoSpec):
        return Law([(1.0, ContinuousPiece(stats.pareto(b=spec.a, scale=spec.x_m)))])
    if isinstance(spec, TwoPointSpec):
        return Law(atom_values=[spec.a, spec.b], atom_weights=[1.0 - spec.p, spec.p])
    if isinstance(spec, ShiftedBernoulliSpec):
        return Law(atom_values=[spec.shift, spec.shift + 1.0], atom_weights=[1.0 - spec.p, spec.p])
    if isinstance(spec, PointMassSpec):
        return Law(atom_values=[spec.value], atom_weights=[1.0])
    if isinstance(spec, MixtureSpec):
        return _mixture_law([(c.weight, build_law(c.spec)) for c in spec.components])
    if isinstance(spec, ConditionedSpec):
        return _conditioned_law(build_law(spec.base), spec.lo_q, spec.hi_q)
    if isinstance(spec, HardGadgetSpec):
        core = build_law(spec.core)
        check_gadget_core(core)
        sides = Law(atom_values=[-1.0, 1.0], atom_weights=[0.5, 0.5])
        return _mixture_law([(0.5, sides), (0.5, core)])
    raise InvalidParameterError(f"Unsupported distribution spec: {spec!r}")
