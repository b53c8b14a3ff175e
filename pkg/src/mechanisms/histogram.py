"""
Sparse noisy histograms over infinitely many bins.

Two bin families are supported: dyadic intervals (2^l, 2^(l+1)] covering
(0, inf) and uniform intervals [l*w, (l+1)*w) covering the real line. Only
occupied bins are materialized. This matches noising every bin exactly as
long as selections use a threshold above the noise bound, because an empty
bin's noisy count never exceeds z_max.
"""

from dataclasses import dataclass, field
from typing import Callable, Dict, FrozenSet, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
import structlog

from .exceptions import InvalidParameterError, SoundnessViolation
from .noise import TLapParams, tlap_sample

logger = structlog.get_logger(__name__)

Binner = Callable[[np.ndarray], np.ndarray]


def dyadic_bin(q: Union[float, np.ndarray]) -> Union[int, np.ndarray]:
    """
    Index l of the dyadic bin (2^l, 2^(l+1)] containing q.

    Uses exact exponent extraction: frexp gives q = m * 2^e with m in [0.5, 1),
    so q lies in (2^(e-1), 2^e] unless m == 0.5, in which case q = 2^(e-1) is
    the closed right end of the bin below.

    Args:
        q: Positive value(s)

    Returns:
        Bin index (int for scalars, int64 array otherwise)

    Raises:
        InvalidParameterError: If any value is not positive and finite
    """
    arr = np.asarray(q, dtype=float)
    if not np.all(np.isfinite(arr) & (arr > 0)):
        raise InvalidParameterError("dyadic bins cover (0, inf) only; drop zeros before binning")
    mantissa, exponent = np.frexp(arr)
    index = exponent.astype(np.int64) - 1 - (mantissa == 0.5)
    return int(index) if index.ndim == 0 else index


def uniform_bin(x: Union[float, np.ndarray], width: float) -> Union[int, np.ndarray]:
    """
    Index l of the bin [l*width, (l+1)*width) containing x.

    floor(x / width) can disagree with the rounded edges l*width by one, so
    the index is corrected against the edges actually used.

    Args:
        x: Value(s) to bin
        width: Positive bin width

    Returns:
        Bin index (int for scalars, int64 array otherwise)
    """
    if not width > 0:
        raise InvalidParameterError(f"bin width must be positive, got {width}")
    arr = np.asarray(x, dtype=float)
    index = np.floor(arr / width)
    index = np.where(arr < index * width, index - 1, index)
    index = np.where(arr >= (index + 1) * width, index + 1, index).astype(np.int64)
    return int(index) if index.ndim == 0 else index


def uniform_binner(width: float) -> Binner:
    """Binner for the uniform family with the given width."""
    if not width > 0:
        raise InvalidParameterError(f"bin width must be positive, got {width}")
    return lambda values: uniform_bin(values, width)


@dataclass(frozen=True)
class NoisyHistogram:
    """
    Immutable sparse noisy histogram.

    ``counts`` maps each materialized bin to its noisy count. True counts are
    kept for diagnostics only and never leave the library through a release.
    """

    counts: Mapping[int, float]
    noise: TLapParams
    occupied_only: bool = True
    window: Optional[Tuple[int, int]] = None
    true_counts: Mapping[int, int] = field(default_factory=dict, repr=False)

    def __len__(self) -> int:
        return len(self.counts)

    def true_count(self, index: int) -> int:
        """Exact count of bin ``index`` (zero for bins holding no values)."""
        return int(self.true_counts.get(index, 0))


def build_noisy_histogram(
    values: Sequence[float],
    binner: Binner,
    noise: TLapParams,
    rng: np.random.Generator,
    window: Optional[Tuple[int, int]] = None,
) -> NoisyHistogram:
    """
    Bin ``values`` and add an independent TLap draw to every materialized bin.

    Occupied bins are noised first, in ascending index order. With a
    ``window`` (lo, hi) every bin index in [lo, hi] is also materialized,
    drawn after the occupied ones, which reproduces the eager mechanism on
    that window with the same draws on occupied bins.

    Args:
        values: Values to count
        binner: Vectorized map from values to integer bin indices
        noise: Per-bin noise parameters
        rng: Random generator for the noise
        window: Optional inclusive bin range to materialize eagerly

    Returns:
        The noisy histogram
    """
    arr = np.asarray(values, dtype=float)
    if arr.size:
        occupied, counts = np.unique(binner(arr), return_counts=True)
    else:
        occupied, counts = np.empty(0, dtype=np.int64), np.empty(0, dtype=np.int64)

    true_counts: Dict[int, int] = {int(b): int(c) for b, c in zip(occupied, counts)}
    draws = tlap_sample(noise, rng, size=len(occupied))
    noisy: Dict[int, float] = {
        int(b): float(c + z) for b, c, z in zip(occupied, counts, draws)
    }

    if window is not None:
        lo, hi = window
        if lo > hi:
            raise InvalidParameterError(f"empty bin window ({lo}, {hi})")
        if true_counts and (min(true_counts) < lo or max(true_counts) > hi):
            raise InvalidParameterError("eager window must cover every occupied bin")
        empty = [b for b in range(lo, hi + 1) if b not in true_counts]
        for b, z in zip(empty, tlap_sample(noise, rng, size=len(empty))):
            noisy[b] = float(z)

    logger.debug(
        "histogram_built",
        values=int(arr.size),
        materialized=len(noisy),
        scale=noise.scale,
        z_max=noise.z_max,
        eager=window is not None,
    )
    return NoisyHistogram(
        counts=noisy,
        noise=noise,
        occupied_only=window is None,
        window=window,
        true_counts=true_counts,
    )


def thresholded_bins(hist: NoisyHistogram, threshold: float) -> FrozenSet[int]:
    """
    Bins whose noisy count is at least ``threshold``.

    Args:
        hist: Noisy histogram
        threshold: Selection threshold (ties are selected)

    Returns:
        Frozen set of selected bin indices

    Raises:
        SoundnessViolation: If the histogram is lazy and threshold <= z_max
    """
    if hist.occupied_only and not threshold > hist.noise.z_max:
        logger.warning("soundness_violation", threshold=threshold, z_max=hist.noise.z_max)
        raise SoundnessViolation(threshold, hist.noise.z_max)
    return frozenset(b for b, c in hist.counts.items() if c >= threshold)
