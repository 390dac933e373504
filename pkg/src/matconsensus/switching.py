"""Piecewise-constant switching between matrix-weighted graphs, and the
time-averaged ("integral") network over a span.

A switching signal is a sequence of segments ``(graph_index, dwell)``: the
network topology is ``graphs[graph_index]`` for ``dwell`` time units, then
switches instantaneously.  Dwell durations are constrained to a configured
interval ``[alpha, beta]`` with ``0 < alpha <= beta``.  A periodic signal
repeats a finite base signal forever; it must contain more than two segments
per period.

Switch instants are tracked exactly as :class:`fractions.Fraction` values so
that span bookkeeping (segment lookup, overlap quadrature for the averaged
network) has no rounding drift, while all matrix arithmetic stays in floats.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from types import MappingProxyType
from typing import Mapping, Sequence

import numpy as np
from numpy.typing import NDArray

from .errors import (
    DimensionMismatchError,
    DwellOutOfBoundsError,
    EmptySignalError,
    EmptySpanError,
    IndexOutOfRangeError,
    PeriodMismatchError,
    TimeOutOfRangeError,
    TooFewPartitionsError,
)
from .graphs import (
    BlockLaplacian,
    Edge,
    GraphDimensions,
    MatrixWeightedGraph,
    laplacian,
)
from .spectral import Definiteness, classify_definiteness, symmetric_eigen
from .tolerances import DEFAULT_TOLERANCES, Tolerances


class SwitchingSignal:
    """A finite sequence of graph segments with dwell-time bounds.

    Parameters
    ----------
    graphs:
        The pool of graphs the signal switches between; all must share the
        same dimensions.
    segments:
        Sequence of ``(graph_index, dwell)`` pairs, in time order.
    alpha, beta:
        Dwell-time bounds; every dwell must satisfy
        ``alpha <= dwell <= beta`` with ``0 < alpha <= beta``.
    """

    is_periodic = False

    def __init__(
        self,
        graphs: Sequence[MatrixWeightedGraph],
        segments: Sequence[tuple[int, float]],
        alpha: float,
        beta: float,
    ) -> None:
        graphs = tuple(graphs)
        if not graphs:
            raise EmptySignalError("at least one graph is required")
        dims = graphs[0].dims
        for index, graph in enumerate(graphs):
            if graph.dims != dims:
                raise DimensionMismatchError(
                    f"graph {index} has dimensions {graph.dims}, expected {dims}"
                )
        if not (0 < alpha <= beta):
            raise DwellOutOfBoundsError(
                f"dwell bounds must satisfy 0 < alpha <= beta, "
                f"got alpha={alpha}, beta={beta}"
            )
        segments = tuple((int(g), float(dt)) for g, dt in segments)
        if not segments:
            raise EmptySignalError("a switching signal needs at least one segment")
        for k, (g, dt) in enumerate(segments):
            if not (0 <= g < len(graphs)):
                raise IndexOutOfRangeError(
                    f"segment {k} references graph {g}, "
                    f"but only {len(graphs)} graphs were given"
                )
            if not (alpha <= dt <= beta):
                raise DwellOutOfBoundsError(
                    f"segment {k} dwell {dt} outside [{alpha}, {beta}]"
                )

        self.dims: GraphDimensions = dims
        self.graphs = graphs
        self.segments = segments
        self.alpha = float(alpha)
        self.beta = float(beta)

        times = [Fraction(0)]
        for _, dt in segments:
            times.append(times[-1] + Fraction(dt))
        self._times: tuple[Fraction, ...] = tuple(times)

        self._laplacians: dict[int, NDArray[np.float64]] = {}
        self._eigensystems: dict[int, tuple[NDArray, NDArray]] = {}
        self._exponentials: dict[tuple[int, float], NDArray[np.float64]] = {}

    # -- structure ----------------------------------------------------------

    @property
    def segment_count(self) -> int:
        return len(self.segments)

    @property
    def total_duration(self) -> float:
        return float(self._times[-1])

    def _check_segment(self, k: int) -> int:
        if not (0 <= k < len(self.segments)):
            raise IndexOutOfRangeError(
                f"segment index {k} outside [0, {len(self.segments)})"
            )
        return k

    def switch_time_exact(self, k: int) -> Fraction:
        """Exact switch instant ``t_k`` (``k`` ranges over ``0..m``)."""
        if not (0 <= k <= len(self.segments)):
            raise IndexOutOfRangeError(
                f"switch index {k} outside [0, {len(self.segments)}]"
            )
        return self._times[k]

    def switch_time(self, k: int) -> float:
        return float(self.switch_time_exact(k))

    def segment_graph_index(self, k: int) -> int:
        return self.segments[self._check_segment(k)][0]

    def segment_dwell(self, k: int) -> float:
        return self.segments[self._check_segment(k)][1]

    def segment_graph(self, k: int) -> MatrixWeightedGraph:
        return self.graphs[self.segment_graph_index(k)]

    def segment_index_at(self, t: float) -> int:
        """Index of the segment active at time ``t`` (``t_k <= t < t_k+1``)."""
        tf = Fraction(float(t))
        if tf < 0 or tf >= self._times[-1]:
            raise TimeOutOfRangeError(
                f"time {t} outside [0, {self.total_duration})"
            )
        return bisect_right(self._times, tf) - 1

    # -- cached per-segment numerics -----------------------------------------

    def segment_laplacian(self, k: int) -> NDArray[np.float64]:
        g = self.segment_graph_index(self._check_segment(k))
        cached = self._laplacians.get(g)
        if cached is None:
            cached = laplacian(self.graphs[g]).matrix
            self._laplacians[g] = cached
        return cached

    def segment_eigensystem(self, k: int) -> tuple[NDArray, NDArray]:
        """Eigenvalues and eigenvectors of the segment's Laplacian, cached
        per distinct graph."""
        g = self.segment_graph_index(self._check_segment(k))
        cached = self._eigensystems.get(g)
        if cached is None:
            report = symmetric_eigen(self._fetch_laplacian(g))
            cached = (report.eigenvalues, report.eigenvectors)
            self._eigensystems[g] = cached
        return cached

    def _fetch_laplacian(self, g: int) -> NDArray[np.float64]:
        cached = self._laplacians.get(g)
        if cached is None:
            cached = laplacian(self.graphs[g]).matrix
            self._laplacians[g] = cached
        return cached

    def segment_exponential(self, k: int) -> NDArray[np.float64]:
        """``exp(-L_k * dwell_k)`` for segment ``k``, cached per
        ``(graph, dwell)`` pair."""
        k = self._check_segment(k)
        g, dt = self.segments[k]
        key = (g, dt)
        cached = self._exponentials.get(key)
        if cached is None:
            values, vectors = self.segment_eigensystem(k)
            decay = np.exp(-values * dt)
            result = (vectors * decay) @ vectors.T
            cached = (result + result.T) / 2.0
            cached.setflags(write=False)
            self._exponentials[key] = cached
        return cached


class PeriodicSignal:
    """A switching signal that repeats a finite base signal with period equal
    to the base signal's total duration.

    Segment indices are global: segment ``k`` of the periodic signal is
    segment ``k mod m`` of the base, shifted by ``floor(k / m)`` periods.
    """

    is_periodic = True

    def __init__(self, base: SwitchingSignal, period: float) -> None:
        if base.segment_count <= 2:
            raise TooFewPartitionsError(
                "a periodic signal needs more than two segments per period, "
                f"got {base.segment_count}"
            )
        exact = base.switch_time_exact(base.segment_count)
        if not (period > 0) or abs(float(exact) - period) > 1e-9 * max(1.0, period):
            raise PeriodMismatchError(
                f"segment dwells sum to {float(exact)}, "
                f"which does not match the declared period {period}"
            )
        self.base = base
        self.period_exact: Fraction = exact
        self.period: float = float(exact)

    # -- structure ----------------------------------------------------------

    @property
    def dims(self) -> GraphDimensions:
        return self.base.dims

    @property
    def graphs(self) -> tuple[MatrixWeightedGraph, ...]:
        return self.base.graphs

    @property
    def alpha(self) -> float:
        return self.base.alpha

    @property
    def beta(self) -> float:
        return self.base.beta

    @property
    def partitions(self) -> int:
        """Number of segments per period."""
        return self.base.segment_count

    @property
    def segment_count(self) -> None:
        """Periodic signals have unboundedly many segments."""
        return None

    @property
    def total_duration(self) -> float:
        return math.inf

    def _split(self, k: int) -> tuple[int, int]:
        if k < 0:
            raise IndexOutOfRangeError(f"segment index {k} must be non-negative")
        return divmod(k, self.partitions)

    def switch_time_exact(self, k: int) -> Fraction:
        cycles, rest = self._split(k)
        return cycles * self.period_exact + self.base.switch_time_exact(rest)

    def switch_time(self, k: int) -> float:
        return float(self.switch_time_exact(k))

    def segment_graph_index(self, k: int) -> int:
        return self.base.segment_graph_index(self._split(k)[1])

    def segment_dwell(self, k: int) -> float:
        return self.base.segment_dwell(self._split(k)[1])

    def segment_graph(self, k: int) -> MatrixWeightedGraph:
        return self.base.segment_graph(self._split(k)[1])

    def segment_laplacian(self, k: int) -> NDArray[np.float64]:
        return self.base.segment_laplacian(self._split(k)[1])

    def segment_eigensystem(self, k: int) -> tuple[NDArray, NDArray]:
        return self.base.segment_eigensystem(self._split(k)[1])

    def segment_exponential(self, k: int) -> NDArray[np.float64]:
        return self.base.segment_exponential(self._split(k)[1])

    def segment_index_at(self, t: float) -> int:
        tf = Fraction(float(t))
        if tf < 0:
            raise TimeOutOfRangeError(f"time {t} must be non-negative")
        cycles = tf // self.period_exact
        rest = tf - cycles * self.period_exact
        sub = bisect_right(self.base._times, rest) - 1
        return int(cycles) * self.partitions + sub


Signal = SwitchingSignal | PeriodicSignal


def build_switching_signal(
    graphs: Sequence[MatrixWeightedGraph],
    segments: Sequence[tuple[int, float]],
    alpha: float,
    beta: float,
) -> SwitchingSignal:
    """Validate and build a finite switching signal."""
    return SwitchingSignal(graphs, segments, alpha, beta)


def build_periodic_signal(
    graphs: Sequence[MatrixWeightedGraph],
    segments: Sequence[tuple[int, float]],
    period: float,
    alpha: float,
    beta: float,
) -> PeriodicSignal:
    """Validate and build a periodic switching signal.

    The dwell durations must sum to ``period`` (within 1e-9 relative), and
    there must be more than two segments per period.
    """
    return PeriodicSignal(SwitchingSignal(graphs, segments, alpha, beta), period)


def graph_at(signal: Signal, t: float) -> MatrixWeightedGraph:
    """The graph active at time ``t``.

    Finite signals are defined on ``[0, total_duration)``; periodic signals
    wrap ``t`` modulo the period.
    """
    return signal.segment_graph(signal.segment_index_at(t))


@dataclass(frozen=True)
class IntegralNetwork:
    """Time-average of the switching network over a span ``[t_start, t_end)``.

    ``adjacency_blocks`` holds the averaged ``d x d`` adjacency block for
    every node pair that is an edge in at least one contributing segment;
    ``edges`` classifies the pairs whose averaged block is non-zero.  Blocks
    present in ``adjacency_blocks`` but absent from ``edges`` averaged to
    (numerically) zero.  ``avg_laplacian`` is the equal-weight time average
    of the segment Laplacians over the span.
    """

    dims: GraphDimensions
    span: tuple[float, float]
    adjacency_blocks: Mapping[Edge, NDArray[np.float64]]
    edges: Mapping[Edge, Definiteness]
    avg_laplacian: NDArray[np.float64]

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "adjacency_blocks", MappingProxyType(dict(self.adjacency_blocks))
        )
        object.__setattr__(self, "edges", MappingProxyType(dict(self.edges)))

    def has_edge(self, i: int, j: int) -> bool:
        pair = (i, j) if i < j else (j, i)
        return pair in self.edges


def integral_network(
    signal: Signal,
    t_start: float,
    t_end: float,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> IntegralNetwork:
    """Average the switching network over ``[t_start, t_end)``.

    Overlap durations between the span and the segments are computed exactly
    with rational arithmetic, so the weights sum to one and spans aligned
    with a single segment reproduce that segment's matrices bit-for-bit.
    """
    start = Fraction(float(t_start))
    end = Fraction(float(t_end))
    if start < 0:
        raise TimeOutOfRangeError(f"span start {t_start} must be non-negative")
    if end <= start:
        raise EmptySpanError(f"span [{t_start}, {t_end}) is empty")
    if not signal.is_periodic:
        total = signal.switch_time_exact(signal.segment_count)
        if end > total:
            # the float image of an exact switch instant may round half an
            # ulp past it; treat such spans as ending exactly at the end
            if float(end - total) <= 1e-12 * max(1.0, float(total)):
                end = total
            else:
                raise TimeOutOfRangeError(
                    f"span end {t_end} exceeds signal duration {float(total)}"
                )
    span = end - start

    d = signal.dims.d
    blocks: dict[Edge, NDArray[np.float64]] = {}
    avg_lap = np.zeros((signal.dims.stacked, signal.dims.stacked))

    k = signal.segment_index_at(float(start))
    while signal.switch_time_exact(k) < end:
        overlap = min(end, signal.switch_time_exact(k + 1)) - max(
            start, signal.switch_time_exact(k)
        )
        if overlap > 0:
            weight = float(overlap / span)
            graph = signal.segment_graph(k)
            for pair, edge_weight in graph.edges.items():
                if pair in blocks:
                    blocks[pair] = blocks[pair] + weight * edge_weight.entries
                else:
                    blocks[pair] = weight * edge_weight.entries
            avg_lap = avg_lap + weight * signal.segment_laplacian(k)
        k += 1
        if not signal.is_periodic and k >= signal.segment_count:
            break

    edges: dict[Edge, Definiteness] = {}
    for pair in sorted(blocks):
        blocks[pair].setflags(write=False)
        kind = classify_definiteness(blocks[pair], tolerances)
        if kind is not Definiteness.ZERO:
            edges[pair] = kind

    avg_lap.setflags(write=False)
    return IntegralNetwork(
        dims=signal.dims,
        span=(float(t_start), float(t_end)),
        adjacency_blocks={pair: blocks[pair] for pair in sorted(blocks)},
        edges=edges,
        avg_laplacian=avg_lap,
    )


def integral_laplacian(network: IntegralNetwork) -> BlockLaplacian:
    """The averaged Laplacian as a :class:`BlockLaplacian` value."""
    return BlockLaplacian(dims=network.dims, matrix=network.avg_laplacian)
