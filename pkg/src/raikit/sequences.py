"""Time-varying averaging matrix sequences and the predicates defined on
them: persistent graphs, windowed arc counts, reciprocity, and the two
windowed balance conditions.

Every checker reports an ``exact`` flag.  Periodic sequences admit exact
verdicts (finitely many windows matter, by periodicity); aperiodic sequences
are truncated at a horizon and the verdicts are documented heuristics.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .graphs import Cut, WeightedDigraph, all_cuts
from .matrices import RowStochasticMatrix
from .tolerances import CUT_ENUMERATION_LIMIT, DIVERGENCE_THRESHOLD

__all__ = [
    "MatrixSequence",
    "PersistentGraphEstimate",
    "ReciprocityReport",
    "UniformCutBalanceReport",
    "ArcBalanceReport",
    "persistent_graph",
    "arc_count",
    "check_reciprocity",
    "check_uniform_cut_balance",
    "check_arc_balance",
    "gossip_sequence",
]


def _coerce(n: int, value) -> RowStochasticMatrix:
    if isinstance(value, RowStochasticMatrix):
        if value.n != n:
            raise ValueError(f"matrix is {value.n}x{value.n}, sequence needs {n}x{n}")
        return value
    e = np.asarray(value, dtype=float)
    return RowStochasticMatrix(n=n, entries=e)


@dataclass(frozen=True)
class MatrixSequence:
    """A sequence W(0), W(1), ... of validated row-stochastic matrices.

    Backed either by an explicit list or by a pure function k -> W(k).
    ``period`` > 0 declares W(k + period) = W(k) exactly (for explicit
    storage the list length must equal the period); 0 means no claimed
    periodicity.  ``horizon_K`` is the truncation length analysis routines
    fall back to; None defers to each checker's documented default.
    """

    n: int
    period: int = 0
    horizon_K: int | None = None
    matrices: tuple | None = None
    generator: Callable[[int], object] | None = None
    cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("n must be positive")
        if self.period < 0:
            raise ValueError("period must be >= 0")
        if (self.matrices is None) == (self.generator is None):
            raise ValueError("exactly one of matrices/generator must be given")
        if self.matrices is not None:
            mats = tuple(_coerce(self.n, m) for m in self.matrices)
            if not mats:
                raise ValueError("explicit sequence must be nonempty")
            if self.period > 0 and len(mats) != self.period:
                raise ValueError("explicit periodic sequence must store exactly one period")
            object.__setattr__(self, "matrices", mats)
        elif self.period > 0:
            # Spot-check the declared period on the generator once.
            w0 = _coerce(self.n, self.generator(0))
            wp = _coerce(self.n, self.generator(self.period))
            if not np.array_equal(w0.entries, wp.entries):
                raise ValueError("generator violates its declared period at k=0")
            self.cache[0] = w0

    @classmethod
    def constant(cls, W, horizon_K: int | None = None) -> "MatrixSequence":
        W = W if isinstance(W, RowStochasticMatrix) else RowStochasticMatrix.from_rows(W)
        return cls(n=W.n, period=1, horizon_K=horizon_K, matrices=(W,))

    @classmethod
    def explicit(
        cls, mats: Iterable, period: int = 0, horizon_K: int | None = None
    ) -> "MatrixSequence":
        mats = tuple(mats)
        n = mats[0].n if isinstance(mats[0], RowStochasticMatrix) else np.asarray(mats[0]).shape[0]
        return cls(n=n, period=period, horizon_K=horizon_K, matrices=mats)

    @classmethod
    def from_generator(
        cls,
        fn: Callable[[int], object],
        n: int,
        period: int = 0,
        horizon_K: int | None = None,
    ) -> "MatrixSequence":
        return cls(n=n, period=period, horizon_K=horizon_K, generator=fn)

    def matrix(self, k: int) -> RowStochasticMatrix:
        if k < 0:
            raise ValueError("k must be >= 0")
        if self.period > 0:
            k = k % self.period
        if self.matrices is not None:
            if k >= len(self.matrices):
                raise ValueError(
                    f"finite sequence of length {len(self.matrices)} has no W({k})"
                )
            return self.matrices[k]
        got = self.cache.get(k)
        if got is None:
            got = _coerce(self.n, self.generator(k))
            self.cache[k] = got
        return got

    def known_length(self) -> int | None:
        """Length of the explicitly stored aperiodic list, else None."""
        if self.matrices is not None and self.period == 0:
            return len(self.matrices)
        return None


def _default_horizon(seq: MatrixSequence, M: int = 0, T: int = 0) -> int:
    # Long enough that periodic verdicts are exact by pigeonhole.
    if seq.horizon_K is not None:
        h = seq.horizon_K
    else:
        h = 10 * seq.n * max(seq.period, 1) * (M + T + 1)
    known = seq.known_length()
    if known is not None:
        h = min(h, known)
    return max(h, 1)


@dataclass(frozen=True)
class PersistentGraphEstimate:
    """0/1 graph of arcs whose weight series is judged divergent.

    For periodic sequences the verdict is exact (arc present iff its sum
    over one period is positive).  Otherwise an arc counts as persistent
    when its partial sum over the horizon reaches ``divergence_threshold``,
    and ``exact`` is False.
    """

    graph: WeightedDigraph
    partial_sums: np.ndarray
    divergence_threshold: float
    exact: bool


def persistent_graph(seq: MatrixSequence) -> PersistentGraphEstimate:
    n = seq.n
    horizon = _default_horizon(seq)
    if seq.period > 0:
        p = seq.period
        period_sum = np.zeros((n, n))
        for k in range(p):
            period_sum += seq.matrix(k).entries
        full, rem = divmod(max(horizon, p), p)
        partial = full * period_sum
        for k in range(rem):
            partial += seq.matrix(k).entries
        adjacency = (period_sum > 0).astype(float)
        return PersistentGraphEstimate(
            graph=WeightedDigraph(n=n, weights=adjacency),
            partial_sums=partial,
            divergence_threshold=DIVERGENCE_THRESHOLD,
            exact=True,
        )
    partial = np.zeros((n, n))
    for k in range(horizon):
        partial += seq.matrix(k).entries
    adjacency = (partial >= DIVERGENCE_THRESHOLD).astype(float)
    return PersistentGraphEstimate(
        graph=WeightedDigraph(n=n, weights=adjacency),
        partial_sums=partial,
        divergence_threshold=DIVERGENCE_THRESHOLD,
        exact=False,
    )


def _check_sets(n: int, I: Iterable[int], J: Iterable[int]) -> tuple[list[int], list[int]]:
    Il, Jl = sorted(set(int(i) for i in I)), sorted(set(int(j) for j in J))
    if not Il or not Jl:
        raise ValueError("node sets must be nonempty")
    if set(Il) & set(Jl):
        raise ValueError("node sets must be disjoint")
    for v in Il + Jl:
        if not 0 <= v < n:
            raise ValueError(f"node {v} out of range")
    return Il, Jl


def arc_count(seq: MatrixSequence, I: Iterable[int], J: Iterable[int], k0: int, k1: int) -> int:
    """Number of distinct pairs (i, j) in I x J with w_ij(k) > 0 for some
    k in the inclusive window [k0, k1].  Each pair counts once no matter
    how often the arc fires."""
    Il, Jl = _check_sets(seq.n, I, J)
    if k0 < 0 or k1 < k0:
        raise ValueError("window must satisfy 0 <= k0 <= k1")
    end = k1
    if seq.period > 0:
        # A full period exhausts every arc the sequence will ever show.
        end = min(k1, k0 + seq.period - 1)
    seen = np.zeros((len(Il), len(Jl)), dtype=bool)
    sub = np.ix_(Il, Jl)
    for k in range(k0, end + 1):
        seen |= seq.matrix(k).entries[sub] > 0
        if seen.all():
            break
    return int(seen.sum())


@dataclass(frozen=True)
class ReciprocityReport:
    """Window-count reciprocity: M crossing arcs one way within any window
    must be answered by at least one arc back within T extra steps."""

    holds: bool
    M: int
    T: int
    violating_cut: Cut | None
    violating_window: tuple[int, int] | None
    exact: bool


def _reject_large(n: int) -> None:
    if n > CUT_ENUMERATION_LIMIT:
        raise ValueError(
            f"exhaustive cut enumeration needs n <= {CUT_ENUMERATION_LIMIT}, got {n}"
        )


def check_reciprocity(seq: MatrixSequence, M: int, T: int) -> ReciprocityReport:
    """Exhaustive check over all cuts (I, J) and windows [k0, k1]: if the
    count of distinct J-to-I pairs active in [k0, k1] reaches M, some I-to-J
    arc must be active in [k0, k1 + T].

    Periodic sequences: exact (k0 below the period and window lengths up to
    2*period*(M+1)+T cover every case).  Aperiodic: windows within the
    horizon only, and a violation is reported only when the full response
    window fits inside it."""
    if M < 1 or T < 0:
        raise ValueError("need M >= 1 and T >= 0")
    _reject_large(seq.n)
    p = seq.period
    if p > 0:
        k0_range = range(p)
        span = 2 * p * (M + 1) + T
        exact = True
    else:
        horizon = _default_horizon(seq, M, T)
        k0_range = range(horizon)
        span = None
        exact = False

    # Activity patterns are fetched lazily and cached by step.
    act: dict[int, np.ndarray] = {}

    def active(k: int) -> np.ndarray:
        a = act.get(k)
        if a is None:
            a = seq.matrix(k).entries > 0
            act[k] = a
        return a

    for cut in all_cuts(seq.n):
        Il, Jl = sorted(cut.left), sorted(cut.right)
        premise_sub = np.ix_(Il, Jl)
        response_sub = np.ix_(Jl, Il)
        for k0 in k0_range:
            if p > 0:
                k1_max = k0 + span
            else:
                k1_max = len(k0_range) - 1
                if k0 > k1_max:
                    break
            seen = np.zeros((len(Il), len(Jl)), dtype=bool)
            responded = False
            for k1 in range(k0, k1_max + 1):
                seen |= active(k1)[premise_sub]
                if not responded:
                    lo = k0 if k1 == k0 else k1 + T
                    for t in range(lo, k1 + T + 1):
                        if p == 0 and t > k1_max:
                            break
                        if active(t)[response_sub].any():
                            responded = True
                            break
                if responded:
                    break
                if int(seen.sum()) >= M:
                    if p > 0 or k1 + T <= k1_max:
                        return ReciprocityReport(
                            holds=False,
                            M=M,
                            T=T,
                            violating_cut=cut,
                            violating_window=(k0, k1),
                            exact=exact,
                        )
    return ReciprocityReport(
        holds=True, M=M, T=T, violating_cut=None, violating_window=None, exact=exact
    )


@dataclass(frozen=True)
class UniformCutBalanceReport:
    holds: bool
    C: float | None
    witness: tuple[Cut, int] | None
    exact: bool


def _window_sums(seq: MatrixSequence, k0_count: int, L: int) -> list[np.ndarray]:
    """Entrywise sums over [k0, k0+L] for each window start k0 < k0_count."""
    n = seq.n
    need = k0_count + L
    prefix = [np.zeros((n, n))]
    for k in range(need + 1):
        prefix.append(prefix[-1] + seq.matrix(k).entries)
    return [prefix[k0 + L + 1] - prefix[k0] for k0 in range(k0_count)]


def check_uniform_cut_balance(seq: MatrixSequence, L: int):
    """Windowed cut balance: over every cut and window [k0, k0+L], the two
    cross-flows must be both positive or both zero; C is the largest ratio
    between opposite windowed flows.  Exact for periodic sequences (window
    starts below the period cover all cases)."""
    if L < 0:
        raise ValueError("L must be >= 0")
    _reject_large(seq.n)
    p = seq.period
    if p > 0:
        k0_count = p
        exact = True
    else:
        horizon = _default_horizon(seq)
        k0_count = max(horizon - L, 1)
        exact = False
    sums = _window_sums(seq, k0_count, L)
    best = 0.0
    any_flow = False
    for cut in all_cuts(seq.n):
        Il, Jl = sorted(cut.left), sorted(cut.right)
        sub = np.ix_(Il, Jl)
        for k0 in range(k0_count):
            f_ij = float(sums[k0][sub].sum())
            f_ji = float(sums[k0].T[sub].sum())
            if (f_ij > 0) != (f_ji > 0):
                return UniformCutBalanceReport(
                    holds=False, C=None, witness=(cut, k0), exact=exact
                )
            if f_ji > 0:
                any_flow = True
                best = max(best, f_ij / f_ji)
    return UniformCutBalanceReport(
        holds=True, C=best if any_flow else 1.0, witness=None, exact=exact
    )


@dataclass(frozen=True)
class ArcBalanceReport:
    holds: bool
    C: float | None
    exact: bool


def check_arc_balance(seq: MatrixSequence, L: int) -> ArcBalanceReport:
    """Windowed arc balance: every two persistent arcs must have windowed
    weight sums within a common constant factor C of each other, for every
    window [k0, k0+L].  Self-loops are not compared (their trajectories are
    pinned by stochasticity, not by reciprocity; only inter-agent arcs
    carry balance information).  Fewer than two persistent arcs: holds
    with C=1."""
    if L < 0:
        raise ValueError("L must be >= 0")
    pg = persistent_graph(seq)
    arcs = [
        (i, j)
        for i in range(seq.n)
        for j in range(seq.n)
        if i != j and pg.graph.weights[i][j] > 0
    ]
    if len(arcs) < 2:
        return ArcBalanceReport(holds=True, C=1.0, exact=pg.exact)
    p = seq.period
    if p > 0:
        k0_count = p
        exact = True
    else:
        horizon = _default_horizon(seq)
        k0_count = max(horizon - L, 1)
        exact = False
    sums = _window_sums(seq, k0_count, L)
    best = 1.0
    for k0 in range(k0_count):
        vals = [float(sums[k0][i, j]) for (i, j) in arcs]
        hi, lo = max(vals), min(vals)
        if hi > 0 and lo == 0:
            return ArcBalanceReport(holds=False, C=None, exact=exact)
        if lo > 0:
            best = max(best, hi / lo)
    return ArcBalanceReport(holds=True, C=best, exact=exact)


def gossip_sequence(
    n: int,
    schedule: Sequence[tuple[int, int]],
    alphas,
    fire_times: Sequence[int],
    eta: float = 0.05,
    period: int = 0,
) -> MatrixSequence:
    """Single-arc averaging events separated by silence.

    Event s fires at time fire_times[s]: agent i_s moves to
    alpha*own + (1-alpha)*x_{j_s}, every other agent keeps its value
    (identity rows).  All other steps are the identity matrix.  With
    period > 0 the whole fire table repeats: fire_times live in
    [0, period) and W(k) = W(k mod period).

    Each alpha must lie in [eta, 1-eta]; arcs must join distinct nodes.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if not 0 < eta <= 0.5:
        raise ValueError("eta must lie in (0, 0.5]")
    schedule = [(int(j), int(i)) for (j, i) in schedule]
    fire_times = [int(t) for t in fire_times]
    if len(schedule) != len(fire_times):
        raise ValueError("schedule and fire_times must have equal length")
    if np.isscalar(alphas):
        alphas = [float(alphas)] * len(fire_times)
    else:
        alphas = [float(a) for a in alphas]
    if len(alphas) != len(fire_times):
        raise ValueError("alphas and fire_times must have equal length")
    for (j, i) in schedule:
        if not (0 <= i < n and 0 <= j < n):
            raise ValueError(f"arc ({j}, {i}) out of range")
        if i == j:
            raise ValueError("gossip arcs must join distinct nodes")
    for a in alphas:
        if not eta <= a <= 1.0 - eta:
            raise ValueError(f"alpha {a!r} outside [{eta}, {1.0 - eta}]")
    if any(t2 <= t1 for t1, t2 in zip(fire_times, fire_times[1:])):
        raise ValueError("fire_times must be strictly increasing")
    if fire_times and fire_times[0] < 0:
        raise ValueError("fire_times must be nonnegative")
    if period > 0 and fire_times and fire_times[-1] >= period:
        raise ValueError("periodic fire_times must lie below the period")

    identity = RowStochasticMatrix(n=n, entries=np.eye(n))

    def fire_matrix(s: int) -> RowStochasticMatrix:
        j, i = schedule[s]
        a = alphas[s]
        e = np.eye(n)
        e[i, i] = a
        e[i, j] = 1.0 - a
        return RowStochasticMatrix(n=n, entries=e)

    if period > 0:
        table = [identity] * period
        for s, t in enumerate(fire_times):
            table[t] = fire_matrix(s)
        return MatrixSequence(n=n, period=period, matrices=tuple(table))

    by_time = {t: s for s, t in enumerate(fire_times)}
    fires = {t: fire_matrix(s) for t, s in by_time.items()}

    def gen(k: int):
        return fires.get(k, identity)

    horizon = (fire_times[-1] + 1) if fire_times else None
    return MatrixSequence(n=n, period=0, horizon_K=horizon, generator=gen)
