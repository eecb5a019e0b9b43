"""Trajectory engines for averaging recursions and averaging inequalities.

The model: each agent's next value is at most the weighted average of
current values, x(k+1) <= W(k) x(k) entrywise.  Feasible trajectories are
parameterized by nonnegative disturbances, x(k+1) = W(k) x(k) - delta(k),
so the exact recursion is the zero-disturbance special case.  The delayed
engine advances a stacked state vector through block companion matrices,
which makes the no-delay and constant-delay reductions hold bitwise, not
just approximately: see run_delayed_rai.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from .graphs import Cut
from .matrices import RowStochasticMatrix
from .sequences import MatrixSequence
from .tolerances import (
    CONSENSUS_TOL,
    DIVERGENCE_FLOOR,
    FEAS_TOL,
    RESIDUAL_TOL,
    tail_window,
)

__all__ = [
    "Trajectory",
    "DisturbancePolicy",
    "DelaySpec",
    "AgentStatus",
    "ConvergenceVerdict",
    "run_degroot",
    "run_rai",
    "run_delayed_rai",
    "xiao_stack",
    "classify",
    "flow_contraction_bound",
    "flow_contraction_bound_delayed",
    "sorted_transform",
    "exp_product_bound",
]


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class Trajectory:
    """A finite run x(0..K) with its per-step disturbances and extremes.

    ``states`` is (K+1) x n, ``residuals`` is K x n (the disturbance applied
    at each step; the last state has none).  ``M``, ``m``, ``d`` are the
    running max, min and diameter of the state.  ``window_max`` is only set
    by the delayed engine: the max over the full delay window, which is the
    quantity that is non-increasing when delays are present (plain M(k) need
    not be monotone under delays).
    """

    states: np.ndarray
    residuals: np.ndarray
    M: np.ndarray
    m: np.ndarray
    d: np.ndarray
    window_max: np.ndarray | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "states", _readonly(self.states))
        object.__setattr__(self, "residuals", _readonly(self.residuals))
        object.__setattr__(self, "M", _readonly(self.M))
        object.__setattr__(self, "m", _readonly(self.m))
        object.__setattr__(self, "d", _readonly(self.d))
        if self.window_max is not None:
            object.__setattr__(self, "window_max", _readonly(self.window_max))

    @property
    def n(self) -> int:
        return self.states.shape[1]

    @property
    def steps(self) -> int:
        return self.states.shape[0] - 1

    def feasibility_margin(self) -> float:
        """Smallest disturbance entry; engine-produced runs keep this >= 0."""
        if self.residuals.size == 0:
            return 0.0
        return float(self.residuals.min())

    def max_drift(self) -> float:
        """Largest one-step increase of M(k); nonpositive up to rounding."""
        if self.M.size < 2:
            return 0.0
        return float(np.max(np.diff(self.M)))

    def to_csv(self) -> str:
        n = self.n
        cols = (
            ["k"]
            + [f"x_{i}" for i in range(n)]
            + [f"delta_{i}" for i in range(n)]
            + ["M", "m", "d"]
        )
        lines = [",".join(cols)]
        for k in range(self.steps + 1):
            row = [str(k)]
            row += [repr(float(v)) for v in self.states[k]]
            if k < self.steps:
                row += [repr(float(v)) for v in self.residuals[k]]
            else:
                row += [""] * n
            row += [repr(float(self.M[k])), repr(float(self.m[k])), repr(float(self.d[k]))]
            lines.append(",".join(row))
        return "\n".join(lines) + "\n"

    def to_json_obj(self) -> dict:
        obj = {
            "states": [[float(v) for v in row] for row in self.states],
            "residuals": [[float(v) for v in row] for row in self.residuals],
            "M": [float(v) for v in self.M],
            "m": [float(v) for v in self.m],
            "d": [float(v) for v in self.d],
        }
        if self.window_max is not None:
            obj["window_max"] = [float(v) for v in self.window_max]
        return obj


def _finish(states, residuals, window_max=None) -> Trajectory:
    S = np.array(states, dtype=float)
    R = np.array(residuals, dtype=float) if residuals else np.zeros((0, S.shape[1]))
    M = S.max(axis=1)
    m = S.min(axis=1)
    return Trajectory(
        states=S,
        residuals=R,
        M=M,
        m=m,
        d=M - m,
        window_max=None if window_max is None else np.array(window_max, dtype=float),
    )


@dataclass(frozen=True)
class DisturbancePolicy:
    """Source of the nonnegative per-step disturbances delta(k).

    kind "zero": delta identically 0 (the exact averaging recursion).
    kind "vanishing_random": scale * decay^k * uniform[0,1]^n, summable.
    kind "constant_random": scale * uniform[0,1]^n, non-vanishing.
    kind "adversarial_replay": an explicit table of vectors, cycled when the
    run is longer than the table (the replayed counterexamples are periodic).
    Random kinds are deterministic given ``seed``; an emitter is single-pass.
    """

    kind: str
    scale: float = 0.0
    decay: float = 1.0
    replay: tuple = ()
    seed: int = 0

    @classmethod
    def zero(cls) -> "DisturbancePolicy":
        return cls(kind="zero")

    @classmethod
    def vanishing_random(cls, scale: float, decay: float, seed: int = 0) -> "DisturbancePolicy":
        if scale < 0 or not 0 < decay < 1:
            raise ValueError("need scale >= 0 and 0 < decay < 1")
        return cls(kind="vanishing_random", scale=scale, decay=decay, seed=seed)

    @classmethod
    def constant_random(cls, scale: float, seed: int = 0) -> "DisturbancePolicy":
        if scale < 0:
            raise ValueError("scale must be >= 0")
        return cls(kind="constant_random", scale=scale, seed=seed)

    @classmethod
    def adversarial_replay(cls, deltas: Iterable[Iterable[float]]) -> "DisturbancePolicy":
        table = tuple(tuple(float(v) for v in row) for row in deltas)
        if not table:
            raise ValueError("replay table must be nonempty")
        for row in table:
            for v in row:
                if not np.isfinite(v) or v < 0:
                    raise ValueError(f"replay disturbance {v!r} is not a nonnegative real")
        return cls(kind="adversarial_replay", replay=table)

    @classmethod
    def from_json_obj(cls, obj: dict) -> "DisturbancePolicy":
        kind = obj["kind"]
        if kind == "zero":
            return cls.zero()
        if kind == "vanishing_random":
            return cls.vanishing_random(obj["scale"], obj["decay"], obj.get("seed", 0))
        if kind == "constant_random":
            return cls.constant_random(obj["scale"], obj.get("seed", 0))
        if kind == "adversarial_replay":
            return cls.adversarial_replay(obj["deltas"])
        raise ValueError(f"unknown disturbance kind {kind!r}")

    def to_json_obj(self) -> dict:
        if self.kind == "zero":
            return {"kind": "zero"}
        if self.kind == "vanishing_random":
            return {"kind": "vanishing_random", "scale": self.scale, "decay": self.decay, "seed": self.seed}
        if self.kind == "constant_random":
            return {"kind": "constant_random", "scale": self.scale, "seed": self.seed}
        return {"kind": "adversarial_replay", "deltas": [list(r) for r in self.replay]}

    def emitter(self, n: int) -> Callable[[int], np.ndarray]:
        if self.kind == "zero":
            z = np.zeros(n)

            def emit(k: int) -> np.ndarray:
                return z

        elif self.kind == "vanishing_random":
            rng = np.random.default_rng(self.seed)
            scale, decay = self.scale, self.decay

            def emit(k: int) -> np.ndarray:
                return scale * decay**k * rng.random(n)

        elif self.kind == "constant_random":
            rng = np.random.default_rng(self.seed)
            scale = self.scale

            def emit(k: int) -> np.ndarray:
                return scale * rng.random(n)

        elif self.kind == "adversarial_replay":
            table = [np.array(row, dtype=float) for row in self.replay]
            for row in table:
                if row.shape != (n,):
                    raise ValueError("replay rows do not match the state dimension")

            def emit(k: int) -> np.ndarray:
                return table[k % len(table)]

        else:
            raise ValueError(f"unknown disturbance kind {self.kind!r}")
        return emit


def _check_x0(x0, n: int) -> np.ndarray:
    x = np.asarray(x0, dtype=float)
    if x.shape != (n,):
        raise ValueError(f"initial vector must have shape ({n},), got {x.shape}")
    if not np.all(np.isfinite(x)):
        raise ValueError("initial vector must be finite")
    return x.copy()


def run_rai(
    seq: MatrixSequence, x0, policy: DisturbancePolicy, steps: int
) -> Trajectory:
    """Run x(k+1) = W(k) x(k) - delta(k) for the given number of steps.

    The stored residuals are the emitted disturbances; with the zero policy
    the result is bitwise identical to run_degroot."""
    if steps < 0:
        raise ValueError("steps must be >= 0")
    x = _check_x0(x0, seq.n)
    emit = policy.emitter(seq.n)
    states = [x]
    residuals = []
    for k in range(steps):
        wx = seq.matrix(k).entries @ x
        delta = emit(k)
        if np.any(delta < 0):
            raise ValueError(f"disturbance at step {k} has a negative entry")
        x = wx - delta
        states.append(x)
        residuals.append(delta)
    return _finish(states, residuals)


def run_degroot(seq: MatrixSequence, x0, steps: int) -> Trajectory:
    """Exact averaging recursion x(k+1) = W(k) x(k); residuals are zero."""
    return run_rai(seq, x0, DisturbancePolicy.zero(), steps)


@dataclass(frozen=True)
class DelaySpec:
    """Communication delays d_ij(k): agent i sees x_j(k - d_ij(k)).

    Bounded by ``d_star``; the diagonal is identically zero (each agent
    always has its own current value).  Backed by either a constant table,
    a periodic tuple of tables, or a pure function k -> table.
    """

    d_star: int
    tables: tuple | None = None
    period: int = 0
    fn: Callable[[int], object] | None = None

    def __post_init__(self) -> None:
        if self.d_star < 0:
            raise ValueError("d_star must be >= 0")
        if (self.tables is None) == (self.fn is None):
            raise ValueError("exactly one of tables/fn must be given")
        if self.tables is not None:
            tabs = tuple(self._validate(t) for t in self.tables)
            if not tabs:
                raise ValueError("delay table list must be nonempty")
            if self.period not in (0, len(tabs)) and len(tabs) != 1:
                raise ValueError("period must match the number of tables")
            object.__setattr__(self, "tables", tabs)

    def _validate(self, t) -> np.ndarray:
        a = np.asarray(t)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError("delay table must be square")
        if not np.issubdtype(a.dtype, np.integer):
            af = np.asarray(t, dtype=float)
            if np.any(af != np.round(af)):
                raise ValueError("delays must be integers")
            a = af.astype(int)
        a = a.astype(int)
        if np.any(a < 0) or np.any(a > self.d_star):
            raise ValueError(f"delays must lie in [0, {self.d_star}]")
        if np.any(np.diag(a) != 0):
            raise ValueError("diagonal delays must be zero")
        a.setflags(write=False)
        return a

    @classmethod
    def constant(cls, table, d_star: int | None = None) -> "DelaySpec":
        a = np.asarray(table)
        if d_star is None:
            d_star = int(a.max()) if a.size else 0
        return cls(d_star=int(d_star), tables=(a,), period=1)

    @classmethod
    def periodic(cls, tables: Sequence, d_star: int | None = None) -> "DelaySpec":
        tabs = [np.asarray(t) for t in tables]
        if d_star is None:
            d_star = max(int(t.max()) for t in tabs)
        return cls(d_star=int(d_star), tables=tuple(tabs), period=len(tabs))

    @classmethod
    def from_function(cls, fn: Callable[[int], object], d_star: int) -> "DelaySpec":
        return cls(d_star=int(d_star), fn=fn)

    def table(self, k: int) -> np.ndarray:
        if k < 0:
            raise ValueError("k must be >= 0")
        if self.tables is not None:
            if self.period > 0:
                return self.tables[k % self.period]
            return self.tables[min(k, len(self.tables) - 1)]
        return self._validate(self.fn(k))

    def to_json_obj(self) -> dict:
        if self.tables is None:
            raise ValueError("generator-backed delay specs have no JSON form")
        return {
            "d_star": self.d_star,
            "period": self.period,
            "tables": [t.tolist() for t in self.tables],
        }

    @classmethod
    def from_json_obj(cls, obj: dict) -> "DelaySpec":
        return cls(
            d_star=int(obj["d_star"]),
            tables=tuple(np.asarray(t) for t in obj["tables"]),
            period=int(obj.get("period", 0)),
        )


def _stack(W: RowStochasticMatrix, delays: np.ndarray, d_star: int) -> RowStochasticMatrix:
    """Block companion matrix over the augmented state [x(k); ...; x(k-d_star)]."""
    n = W.n
    if delays.shape != (n, n):
        raise ValueError("delay table does not match the matrix size")
    if np.any(delays > d_star):
        raise ValueError("a delay exceeds d_star")
    if np.any(np.diag(delays) != 0):
        raise ValueError("diagonal delays must be zero")
    N = n * (d_star + 1)
    Xi = np.zeros((N, N))
    for i in range(n):
        for j in range(n):
            w = W.entries[i, j]
            if w != 0.0:
                Xi[i, int(delays[i, j]) * n + j] = w
    for r in range(1, d_star + 1):
        for i in range(n):
            Xi[r * n + i, (r - 1) * n + i] = 1.0
    return RowStochasticMatrix(n=N, entries=Xi)


def xiao_stack(W: RowStochasticMatrix, delays, d_star: int) -> RowStochasticMatrix:
    """Stack a constant-delay system into an undelayed one on n(d_star+1)
    coordinates: first block row scatters w_ij into block d_ij, lower block
    rows shift history.  With d_star=0 the result equals W."""
    if d_star < 0:
        raise ValueError("d_star must be >= 0")
    spec = DelaySpec.constant(delays, d_star=d_star)
    return _stack(W, spec.table(0), d_star)


def run_delayed_rai(
    seq: MatrixSequence,
    delays: DelaySpec,
    history,
    policy: DisturbancePolicy,
    steps: int,
) -> Trajectory:
    """Run x_i(k+1) = sum_j w_ij(k) x_j(k - d_ij(k)) - delta_i(k).

    ``history`` must hold exactly d_star+1 state vectors, oldest first:
    x(-d_star), ..., x(0).  Shorter histories are rejected, not padded;
    padding would silently alter replayed counterexamples.

    Each step multiplies the stacked vector y(k) = [x(k); ...; x(k-d_star)]
    by the same block companion matrix xiao_stack builds, so for constant
    weights and delays this run and run_degroot over the stacked matrix
    agree bitwise on shared coordinates.  Residuals apply to the first
    block only; history blocks shift exactly.

    The recorded ``window_max`` is the max over the whole delay window,
    non-increasing up to rounding (plain M(k) is not monotone here)."""
    if steps < 0:
        raise ValueError("steps must be >= 0")
    n = seq.n
    ds = delays.d_star
    hist = [np.asarray(h, dtype=float) for h in history]
    if len(hist) != ds + 1:
        raise ValueError(
            f"history must hold exactly d_star+1 = {ds + 1} vectors, got {len(hist)}"
        )
    for h in hist:
        if h.shape != (n,):
            raise ValueError("history vectors must have the state dimension")
        if not np.all(np.isfinite(h)):
            raise ValueError("history must be finite")
    # y = [x(0); x(-1); ...; x(-d_star)], newest first.
    y = np.concatenate(hist[::-1])
    emit = policy.emitter(n)
    stacked_cache: dict = {}
    states = [y[:n].copy()]
    residuals = []
    window_max = [float(y.max())]
    for k in range(steps):
        W = seq.matrix(k)
        table = delays.table(k)
        key = (id(W), table.tobytes())
        Xi = stacked_cache.get(key)
        if Xi is None:
            Xi = _stack(W, table, ds)
            stacked_cache[key] = Xi
        y_next = Xi.entries @ y
        delta = emit(k)
        if np.any(delta < 0):
            raise ValueError(f"disturbance at step {k} has a negative entry")
        y_next[:n] = y_next[:n] - delta
        wm = float(y_next.max())
        prev = window_max[-1]
        if wm > prev + FEAS_TOL * max(1.0, abs(prev)):
            raise RuntimeError(
                f"delay-window max increased at step {k}: {prev!r} -> {wm!r}"
            )
        y = y_next
        states.append(y[:n].copy())
        residuals.append(delta)
        window_max.append(wm)
    return _finish(states, residuals, window_max=window_max)


@dataclass(frozen=True)
class AgentStatus:
    kind: str  # converged | diverging_to_minus_infinity | oscillating
    limit: float | None

    def to_json_obj(self) -> dict:
        return {"kind": self.kind, "limit": self.limit}


@dataclass(frozen=True)
class ConvergenceVerdict:
    """Tail-based classification of a finite trajectory.

    ``consensus`` requires every agent converged with limits within
    consensus_tol of each other.  A family drifting to minus infinity
    together never counts as consensus (no finite common value exists);
    it is flagged separately as ``common_divergence``.
    """

    statuses: tuple
    consensus: bool
    consensus_value: float | None
    residual_vanishes: tuple
    common_divergence: bool

    def all_converged(self) -> bool:
        return all(s.kind == "converged" for s in self.statuses)

    def to_json_obj(self) -> dict:
        return {
            "statuses": [s.to_json_obj() for s in self.statuses],
            "consensus": self.consensus,
            "consensus_value": self.consensus_value,
            "residual_vanishes": list(self.residual_vanishes),
            "common_divergence": self.common_divergence,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), sort_keys=True, indent=2) + "\n"


def classify(traj: Trajectory) -> ConvergenceVerdict:
    """Classify each agent over the final tail window.

    converged: total variation of the agent's tail below consensus_tol
    (limit = final value).  diverging_to_minus_infinity: final value below
    -divergence_floor and non-increasing over the tail.  Anything else:
    oscillating.  residual_vanishes per agent: largest tail disturbance
    below residual_tol."""
    steps = traj.steps
    w = tail_window(steps)
    if steps < w:
        raise ValueError(f"trajectory too short to classify: {steps} < {w} steps")
    tail = traj.states[-(w + 1) :]
    moves = np.abs(np.diff(tail, axis=0))
    tv = moves.sum(axis=0)
    statuses = []
    for i in range(traj.n):
        if tv[i] < CONSENSUS_TOL:
            statuses.append(AgentStatus(kind="converged", limit=float(tail[-1, i])))
        elif float(tail[-1, i]) < -DIVERGENCE_FLOOR and np.all(
            np.diff(tail[:, i]) <= FEAS_TOL * np.maximum(1.0, np.abs(tail[:-1, i]))
        ):
            statuses.append(AgentStatus(kind="diverging_to_minus_infinity", limit=None))
        else:
            statuses.append(AgentStatus(kind="oscillating", limit=None))
    statuses = tuple(statuses)

    consensus = False
    consensus_value = None
    if all(s.kind == "converged" for s in statuses):
        limits = np.array([s.limit for s in statuses])
        if float(limits.max() - limits.min()) < CONSENSUS_TOL:
            consensus = True
            consensus_value = float(limits.mean())

    common_divergence = all(
        s.kind == "diverging_to_minus_infinity" for s in statuses
    ) and float(traj.d[-1]) <= CONSENSUS_TOL

    if traj.residuals.shape[0] == 0:
        vanishes = tuple(True for _ in range(traj.n))
    else:
        rt = traj.residuals[-min(w, traj.residuals.shape[0]) :]
        vanishes = tuple(bool(v) for v in (np.abs(rt).max(axis=0) < RESIDUAL_TOL))

    return ConvergenceVerdict(
        statuses=statuses,
        consensus=consensus,
        consensus_value=consensus_value,
        residual_vanishes=vanishes,
        common_divergence=common_divergence,
    )


def _cut_lists(cut: Cut, n: int) -> tuple[list[int], list[int]]:
    cut.validate_for(n)
    return sorted(cut.left), sorted(cut.right)


def _windowed_inflow(
    seq: MatrixSequence, cut: Cut, k0: int, k0p: int, k1: int, eta: float
) -> float:
    """Weight sum across the cut into its left side over [k0', k1], after
    checking the diagonal floor w_ii(k) >= eta on [k0, k1]."""
    if not 0 < eta <= 1:
        raise ValueError("eta must lie in (0, 1]")
    if not 0 <= k0 <= k0p <= k1:
        raise ValueError("need 0 <= k0 <= k0' <= k1")
    Il, Jl = _cut_lists(cut, seq.n)
    for k in range(k0, k1 + 1):
        diag = np.diag(seq.matrix(k).entries)
        if np.any(diag < eta):
            bad = int(np.argmin(diag))
            raise ValueError(
                f"diagonal weight {diag[bad]!r} of agent {bad} at step {k} is below eta={eta}"
            )
    sub = np.ix_(Il, Jl)
    flow = 0.0
    for k in range(k0p, k1 + 1):
        flow += float(seq.matrix(k).entries[sub].sum())
    return flow


def flow_contraction_bound(
    seq: MatrixSequence, cut: Cut, k0: int, k0p: int, k1: int, eta: float
) -> float:
    """Contraction factor theta = exp(-eta * flow) for the estimate
    max_I(k1+1) <= theta * max_I(k0') + (1-theta) * max(k0), where flow is
    the windowed weight sum across the cut into I over [k0', k1].

    Requires every diagonal weight in [k0, k1] to be at least eta (the
    self-confidence floor the estimate is derived under)."""
    flow = _windowed_inflow(seq, cut, k0, k0p, k1, eta)
    return float(np.exp(-eta * flow))


def flow_contraction_bound_delayed(
    seq: MatrixSequence, cut: Cut, k0: int, k0p: int, k1: int, eta: float, d_star: int
) -> tuple[float, bool]:
    """Delayed variant theta_bar = eta^d_star * exp(-eta^(d_star+1) * flow),
    returned with a flag marking windows where theta_bar > 1 would make the
    contraction estimate vacuous (the flag cannot fire for eta in (0, 1],
    it exists to make that check explicit)."""
    if d_star < 0:
        raise ValueError("d_star must be >= 0")
    flow = _windowed_inflow(seq, cut, k0, k0p, k1, eta)
    theta_bar = float(eta**d_star * np.exp(-(eta ** (d_star + 1)) * flow))
    return theta_bar, theta_bar > 1.0


def sorted_transform(traj: Trajectory, seq: MatrixSequence):
    """Reorder each state ascending and permute the matrices to match.

    Returns (sorted_states, permuted_matrices) where y(k) = sorted x(k) and
    V(k)[i, j] = w[sigma_i(k+1), sigma_j(k)] for the sorting permutations
    sigma.  The sorted vectors satisfy y(k+1) <= V(k) y(k) entrywise, which
    is asserted up to rounding.  Sorted convergence does not imply
    convergence of x itself: a two-agent swap has constant y."""
    S = traj.states
    K = traj.steps
    perms = [np.argsort(S[k], kind="stable") for k in range(K + 1)]
    sorted_states = np.array([S[k][perms[k]] for k in range(K + 1)])
    permuted = []
    for k in range(K):
        W = seq.matrix(k).entries
        V = W[np.ix_(perms[k + 1], perms[k])]
        lhs = sorted_states[k + 1]
        rhs = V @ sorted_states[k]
        slack = FEAS_TOL * np.maximum(1.0, np.abs(rhs))
        if np.any(lhs > rhs + slack):
            i = int(np.argmax(lhs - rhs))
            raise RuntimeError(
                f"sorted inequality violated at step {k}, row {i}: {lhs[i]!r} > {rhs[i]!r}"
            )
        permuted.append(V)
    return sorted_states, permuted


def exp_product_bound(a, eta: float):
    """Both sides of the survival-product estimate: returns
    (prod(1 - a_i), exp(-sum(a_i) / eta)) for a_i in [0, 1 - eta].

    The product dominates the exponential with exponent -sum/eta; the
    often-quoted exponent -eta*sum overstates the product and fails already
    at a single factor (a=0.5, eta=0.5)."""
    if not 0 < eta <= 1:
        raise ValueError("eta must lie in (0, 1]")
    arr = np.asarray(list(a), dtype=float)
    if arr.size and (np.any(arr < 0) or np.any(arr > 1 - eta + 1e-15)):
        raise ValueError(f"each a_i must lie in [0, {1 - eta}]")
    product = float(np.prod(1.0 - arr)) if arr.size else 1.0
    bound = float(np.exp(-float(arr.sum()) / eta)) if arr.size else 1.0
    return product, bound
