"""Distributed common-fixed-point solvers over averaging networks.

Agents each hold a map whose fixed-point sets intersect; three synchronous
update rules (project the average, project twice, or blend one projection
into the average) drive every agent to a common fixed point.  For maps that
are metric projections onto convex sets this solves constrained consensus,
in particular distributed linear equations with one row per agent.

The convergence mechanism is the averaging inequality: for any common
fixed point, the vector of distances to it is a feasible trajectory of
x(k+1) <= W(k) x(k), so the network results apply verbatim.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .sequences import MatrixSequence
from .tolerances import FP_TOL, MAX_ITERS, SOLVER_TOL

__all__ = [
    "Paracontraction",
    "ConvexProjector",
    "MultiAgentProblem",
    "SolveResult",
    "AuditReport",
    "project",
    "step",
    "solve",
    "paracontraction_audit",
]

ALGORITHMS = ("pre_project", "double_project", "convex_blend")


def _norm(tag, v: np.ndarray) -> float:
    if tag == "euclidean":
        return float(np.linalg.norm(v))
    if isinstance(tag, tuple) and len(tag) == 2:
        kind, arg = tag
        if kind == "p_norm":
            return float(np.linalg.norm(v, ord=arg))
        if kind == "weighted":
            w = np.asarray(arg, dtype=float)
            return float(np.sqrt(np.sum(w * v * v)))
    raise ValueError(f"unknown norm tag {tag!r}")


@dataclass(frozen=True)
class Paracontraction:
    """A map that strictly approaches its fixed points: for any fixed xi0
    and non-fixed xi, ||M(xi) - xi0|| < ||xi - xi0|| in the tagged norm.
    ``apply`` must be pure.  The property itself is sampled, not proved:
    see paracontraction_audit."""

    dimension: int
    apply: Callable[[np.ndarray], np.ndarray]
    norm_tag: object = "euclidean"

    def fixed_point_test(self, xi) -> bool:
        xi = np.asarray(xi, dtype=float)
        return _norm(self.norm_tag, self.apply(xi) - xi) < FP_TOL


@dataclass(frozen=True)
class ConvexProjector:
    """Euclidean metric projection onto a closed convex set, in closed form.

    kinds: hyperplane(a, b) for a.x = b; halfspace(a, b) for a.x <= b;
    ball(center, r); box(lo, hi); affine_subspace(A, b) for A x = b.
    Degenerate specs (zero normal, negative radius, crossed bounds,
    inconsistent equations) are rejected at construction.
    """

    kind: str
    dimension: int
    params: dict = field(compare=False)
    norm_tag: object = "euclidean"

    @classmethod
    def hyperplane(cls, a, b: float) -> "ConvexProjector":
        a = np.asarray(a, dtype=float)
        nrm2 = float(a @ a)
        if not nrm2 > 0:
            raise ValueError("hyperplane normal must be nonzero")
        return cls(kind="hyperplane", dimension=a.shape[0], params={"a": a, "b": float(b), "nrm2": nrm2})

    @classmethod
    def halfspace(cls, a, b: float) -> "ConvexProjector":
        a = np.asarray(a, dtype=float)
        nrm2 = float(a @ a)
        if not nrm2 > 0:
            raise ValueError("halfspace normal must be nonzero")
        return cls(kind="halfspace", dimension=a.shape[0], params={"a": a, "b": float(b), "nrm2": nrm2})

    @classmethod
    def ball(cls, center, r: float) -> "ConvexProjector":
        c = np.asarray(center, dtype=float)
        if r < 0:
            raise ValueError("ball radius must be >= 0")
        return cls(kind="ball", dimension=c.shape[0], params={"center": c, "r": float(r)})

    @classmethod
    def box(cls, lo, hi) -> "ConvexProjector":
        lo = np.asarray(lo, dtype=float)
        hi = np.asarray(hi, dtype=float)
        if lo.shape != hi.shape or np.any(lo > hi):
            raise ValueError("box needs lo <= hi elementwise")
        return cls(kind="box", dimension=lo.shape[0], params={"lo": lo, "hi": hi})

    @classmethod
    def affine_subspace(cls, A, b) -> "ConvexProjector":
        A = np.asarray(A, dtype=float)
        b = np.asarray(b, dtype=float)
        if A.ndim != 2 or b.shape != (A.shape[0],):
            raise ValueError("need A (m x d) and b (m,)")
        pinv = np.linalg.pinv(A)
        least = pinv @ b
        scale = max(1.0, float(np.abs(b).max(initial=0.0)))
        if float(np.abs(A @ least - b).max(initial=0.0)) > 1e-8 * scale:
            raise ValueError("equations are inconsistent; the subspace is empty")
        return cls(kind="affine_subspace", dimension=A.shape[1], params={"A": A, "b": b, "pinv": pinv})

    def apply(self, xi) -> np.ndarray:
        xi = np.asarray(xi, dtype=float)
        if xi.shape != (self.dimension,):
            raise ValueError(f"point must have dimension {self.dimension}")
        p = self.params
        if self.kind == "hyperplane":
            return xi - ((p["a"] @ xi - p["b"]) / p["nrm2"]) * p["a"]
        if self.kind == "halfspace":
            slack = p["a"] @ xi - p["b"]
            if slack <= 0:
                return xi
            return xi - (slack / p["nrm2"]) * p["a"]
        if self.kind == "ball":
            off = xi - p["center"]
            dist = float(np.linalg.norm(off))
            if dist <= p["r"]:
                return xi
            return p["center"] + (p["r"] / dist) * off
        if self.kind == "box":
            return np.clip(xi, p["lo"], p["hi"])
        if self.kind == "affine_subspace":
            return xi - p["pinv"] @ (p["A"] @ xi - p["b"])
        raise ValueError(f"unknown projector kind {self.kind!r}")

    def fixed_point_test(self, xi) -> bool:
        xi = np.asarray(xi, dtype=float)
        return _norm(self.norm_tag, self.apply(xi) - xi) < FP_TOL


def project(p, xi) -> np.ndarray:
    """Apply a projector (or any paracontraction) to a point."""
    return p.apply(np.asarray(xi, dtype=float))


@dataclass(frozen=True)
class MultiAgentProblem:
    """n agents, one map each, coupled through an averaging sequence."""

    maps: tuple
    W: MatrixSequence
    algorithm: str
    initial: np.ndarray

    def __post_init__(self) -> None:
        maps = tuple(self.maps)
        if len(maps) != self.W.n:
            raise ValueError("need one map per agent")
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"algorithm must be one of {ALGORITHMS}")
        d = maps[0].dimension
        tag = maps[0].norm_tag
        for m in maps:
            if m.dimension != d:
                raise ValueError("all maps must share one dimension")
            if m.norm_tag != tag:
                raise ValueError("all maps must share one norm")
        init = np.asarray(self.initial, dtype=float)
        if init.shape != (len(maps), d):
            raise ValueError(f"initial states must be {len(maps)}x{d}, got {init.shape}")
        init = init.copy()
        init.setflags(write=False)
        object.__setattr__(self, "maps", maps)
        object.__setattr__(self, "initial", init)

    @property
    def n(self) -> int:
        return len(self.maps)

    @property
    def dimension(self) -> int:
        return self.maps[0].dimension


def step(problem: MultiAgentProblem, states: np.ndarray, k: int) -> np.ndarray:
    """One synchronous round at time k.  All reads are from the step-k
    states; the three rules are implemented exactly as their defining
    equations read."""
    n, d = problem.n, problem.dimension
    states = np.asarray(states, dtype=float)
    if states.shape != (n, d):
        raise ValueError(f"states must be {n}x{d}")
    Wk = problem.W.matrix(k).entries
    out = np.empty_like(states)
    if problem.algorithm == "pre_project":
        mixed = Wk @ states
        for i in range(n):
            out[i] = problem.maps[i].apply(mixed[i])
    elif problem.algorithm == "double_project":
        projected = np.array([problem.maps[j].apply(states[j]) for j in range(n)])
        mixed = Wk @ projected
        for i in range(n):
            out[i] = problem.maps[i].apply(mixed[i])
    else:  # convex_blend
        for i in range(n):
            acc = Wk[i, i] * problem.maps[i].apply(states[i])
            for j in range(n):
                if j != i:
                    acc = acc + Wk[i, j] * states[j]
            out[i] = acc
    return out


@dataclass(frozen=True)
class SolveResult:
    converged: bool
    solution: np.ndarray
    iterations: int
    agent_disagreement: float
    constraint_violation: float
    disagreement_history: tuple
    violation_history: tuple

    def to_json_obj(self) -> dict:
        return {
            "converged": self.converged,
            "solution": [float(v) for v in self.solution],
            "iterations": self.iterations,
            "agent_disagreement": self.agent_disagreement,
            "constraint_violation": self.constraint_violation,
            "disagreement_history": list(self.disagreement_history),
            "violation_history": list(self.violation_history),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), sort_keys=True, indent=2) + "\n"

    def history_csv(self) -> str:
        lines = ["iteration,disagreement,violation"]
        for i, (dg, vi) in enumerate(zip(self.disagreement_history, self.violation_history)):
            lines.append(f"{i},{dg!r},{vi!r}")
        return "\n".join(lines) + "\n"


def _residuals(problem: MultiAgentProblem, states: np.ndarray) -> tuple[float, float]:
    tag = problem.maps[0].norm_tag
    n = problem.n
    disagreement = 0.0
    for i in range(n):
        for j in range(i + 1, n):
            disagreement = max(disagreement, _norm(tag, states[i] - states[j]))
    violation = max(
        _norm(tag, problem.maps[i].apply(states[i]) - states[i]) for i in range(n)
    )
    return disagreement, violation


def solve(
    problem: MultiAgentProblem,
    max_iters: int = MAX_ITERS,
    tol: float = SOLVER_TOL,
) -> SolveResult:
    """Iterate the chosen rule until all agents agree and all satisfy their
    own constraint (both residuals below tol), or max_iters rounds pass.

    Non-convergence is a result, not an exception: the hypotheses (a common
    fixed point, enough network connectivity) are the caller's obligation,
    and the reported residuals tell which one failed.  The solution field is
    the agent average, meaningful only when converged."""
    if max_iters < 0:
        raise ValueError("max_iters must be >= 0")
    if not tol > 0:
        raise ValueError("tol must be positive")
    states = problem.initial.copy()
    dg_hist: list[float] = []
    vi_hist: list[float] = []
    for it in range(max_iters + 1):
        dg, vi = _residuals(problem, states)
        dg_hist.append(dg)
        vi_hist.append(vi)
        if dg < tol and vi < tol:
            return SolveResult(
                converged=True,
                solution=states.mean(axis=0),
                iterations=it,
                agent_disagreement=dg,
                constraint_violation=vi,
                disagreement_history=tuple(dg_hist),
                violation_history=tuple(vi_hist),
            )
        if it == max_iters:
            break
        states = step(problem, states, it)
    return SolveResult(
        converged=False,
        solution=states.mean(axis=0),
        iterations=max_iters,
        agent_disagreement=dg_hist[-1],
        constraint_violation=vi_hist[-1],
        disagreement_history=tuple(dg_hist),
        violation_history=tuple(vi_hist),
    )


@dataclass(frozen=True)
class AuditReport:
    violations: int
    worst_margin: float | None
    fixed_point: np.ndarray

    def to_json_obj(self) -> dict:
        return {
            "violations": self.violations,
            "worst_margin": self.worst_margin,
            "fixed_point": [float(v) for v in self.fixed_point],
        }


def paracontraction_audit(p, samples: int, seed: int = 0) -> AuditReport:
    """Sample the strict-decrease property toward a fixed point.

    A fixed point is located by iterating the map from the origin (up to
    10^4 rounds); failing that is an error.  Each non-fixed sample xi must
    satisfy ||M(xi) - xi0|| < ||xi - xi0||; shortfalls beyond fp_tol count
    as violations, and worst_margin is the smallest observed decrease
    (negative means some sample moved away)."""
    if samples < 1:
        raise ValueError("samples must be >= 1")
    tag = p.norm_tag
    xi0 = np.zeros(p.dimension)
    found = p.fixed_point_test(xi0)
    if not found:
        for _ in range(10_000):
            xi0 = np.asarray(p.apply(xi0), dtype=float)
            if p.fixed_point_test(xi0):
                found = True
                break
    if not found:
        raise ValueError("no fixed point found by iteration; supply a convergent map")
    rng = np.random.default_rng(seed)
    violations = 0
    worst: float | None = None
    for _ in range(samples):
        xi = xi0 + rng.standard_normal(p.dimension) * 10.0 ** rng.integers(-2, 3)
        if p.fixed_point_test(xi):
            continue
        margin = _norm(tag, xi - xi0) - _norm(tag, np.asarray(p.apply(xi)) - xi0)
        if worst is None or margin < worst:
            worst = margin
        if margin < -FP_TOL:
            violations += 1
    return AuditReport(violations=violations, worst_margin=worst, fixed_point=xi0)
