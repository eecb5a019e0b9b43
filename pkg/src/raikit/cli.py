"""Config-driven command line front door.

Scenarios are JSON files ({"schema_version": 1, "name", "kind",
"parameters", "seed", "outputs"}) dispatched to the library modules; each
run writes a verdict JSON and, for simulations, a trajectory artifact.
Exit codes: 0 success, 2 validation error (one machine-parsable line on
stderr), 3 mathematical non-convergence (the run itself is fine, but some
agent failed to converge or the solver gave up).  Identical scenario and
seed produce byte-identical artifacts.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .engine import DelaySpec, DisturbancePolicy, classify, run_delayed_rai, run_rai
from .graphs import (
    WeightedDigraph,
    cut_balance_certificate,
    graph_from_edgelist,
    is_aperiodic,
    strong_components,
)
from .matrices import (
    RowStochasticMatrix,
    SubstochasticMatrix,
    check_sia,
    is_primitive,
    schur_stability_by_reachability,
    spectral_radius,
)
from .opinions import (
    HkConfig,
    SignedMatrixSequence,
    hk_weights,
    modulus_consensus_verdict,
    recover_structural_balance,
    run_altafini,
    run_hk,
)
from .sequences import (
    MatrixSequence,
    check_arc_balance,
    check_reciprocity,
    check_uniform_cut_balance,
    gossip_sequence,
    persistent_graph,
)
from .solvers import ConvexProjector, MultiAgentProblem, solve
from .tolerances import MAX_ITERS, SOLVER_TOL

SCHEMA_VERSION = 1
KINDS = (
    "analyze_graph",
    "analyze_matrix",
    "check_sequence",
    "simulate_rai",
    "simulate_hk",
    "simulate_altafini",
    "solve_fixedpoint",
)
SUBCOMMAND_KINDS = {
    "analyze": ("analyze_graph", "analyze_matrix"),
    "check": ("check_sequence",),
    "simulate": ("simulate_rai", "simulate_hk", "simulate_altafini"),
    "solve": ("solve_fixedpoint",),
}

_SCENARIO_DIR = Path(__file__).parent / "scenarios"


class ScenarioError(Exception):
    """Validation failure; rendered as the one-line exit-2 error."""

    def __init__(self, code: str, message: str) -> None:
        super().__init__(message)
        self.code = code


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _require(params: dict, key: str):
    if key not in params:
        raise ScenarioError("schema", f"missing parameter {key!r}")
    return params[key]


def sequence_from_json_obj(obj: dict, default_seed: int = 0) -> MatrixSequence:
    """Build a matrix sequence from its JSON config.  Kinds: constant,
    explicit, gossip, hk_induced (the averaging matrices realized along a
    truth-free bounded-confidence run, frozen once the run freezes)."""
    kind = obj.get("kind")
    if kind == "constant":
        return MatrixSequence.constant(np.asarray(obj["matrix"], dtype=float))
    if kind == "explicit":
        mats = [np.asarray(m, dtype=float) for m in obj["matrices"]]
        return MatrixSequence.explicit(mats, period=int(obj.get("period", 0)))
    if kind == "gossip":
        return gossip_sequence(
            n=int(obj["n"]),
            schedule=[(int(j), int(i)) for j, i in obj["schedule"]],
            alphas=obj["alphas"],
            fire_times=[int(t) for t in obj["fire_times"]],
            eta=float(obj.get("eta", 0.05)),
            period=int(obj.get("period", 0)),
        )
    if kind == "hk_induced":
        epsilon = float(obj["epsilon"])
        x0 = np.asarray(obj["x0"], dtype=float)
        max_steps = int(obj.get("max_steps", 10 * x0.shape[0] ** 3))
        traj, _ = run_hk(x0, HkConfig(epsilon=epsilon), max_steps)
        states = traj.states
        last = states.shape[0] - 1

        def induced(k: int):
            return hk_weights(states[min(k, last)], epsilon)

        return MatrixSequence.from_generator(induced, n=x0.shape[0])
    raise ScenarioError("schema", f"unknown sequence kind {kind!r}")


def _policy_from(obj, default_seed: int) -> DisturbancePolicy:
    if obj is None:
        return DisturbancePolicy.zero()
    if "seed" not in obj and obj.get("kind") in ("vanishing_random", "constant_random"):
        obj = dict(obj, seed=default_seed)
    return DisturbancePolicy.from_json_obj(obj)


def _projector_from(obj: dict) -> ConvexProjector:
    kind = obj.get("kind")
    if kind == "hyperplane":
        return ConvexProjector.hyperplane(obj["a"], obj["b"])
    if kind == "halfspace":
        return ConvexProjector.halfspace(obj["a"], obj["b"])
    if kind == "ball":
        return ConvexProjector.ball(obj["center"], obj["r"])
    if kind == "box":
        return ConvexProjector.box(obj["lo"], obj["hi"])
    if kind == "affine_subspace":
        return ConvexProjector.affine_subspace(obj["A"], obj["b"])
    raise ScenarioError("schema", f"unknown set kind {kind!r}")


def _graph_from(params: dict) -> WeightedDigraph:
    if "graph" in params:
        g = params["graph"]
        return WeightedDigraph(n=int(g["n"]), weights=np.asarray(g["weights"], dtype=float))
    if "edgelist" in params:
        return graph_from_edgelist(params["edgelist"], n=params.get("n"))
    raise ScenarioError("schema", "analyze_graph needs 'graph' or 'edgelist'")


def _run_analyze_graph(params: dict, seed: int) -> tuple[dict, int, dict]:
    g = _graph_from(params)
    dec = strong_components(g)
    aperiodic = []
    for comp in dec.components:
        solo = next(iter(comp))
        trivial = len(comp) == 1 and g.weights[solo][solo] == 0
        aperiodic.append(False if trivial else is_aperiodic(g, comp))
    cert = cut_balance_certificate(g)
    verdict = {
        "n": g.n,
        "components": [list(c) for c in dec.components],
        "classification": list(dec.classification),
        "is_strong": dec.is_strong,
        "is_quasi_strong": dec.is_quasi_strong,
        "aperiodic_components": aperiodic,
        "cut_balance": {
            "balanced": cert.balanced,
            "constant_C": cert.constant_C,
            "witness_cut": None
            if cert.witness_cut is None
            else [sorted(cert.witness_cut.left), sorted(cert.witness_cut.right)],
        },
    }
    return verdict, 0, {}


def _run_analyze_matrix(params: dict, seed: int) -> tuple[dict, int, dict]:
    results = []
    for entry in _require(params, "matrices"):
        name = entry.get("name", f"matrix_{len(results)}")
        rows = np.asarray(_require(entry, "rows"), dtype=float)
        if entry.get("substochastic", False):
            A = SubstochasticMatrix(n=rows.shape[0], entries=rows)
            stab = schur_stability_by_reachability(A)
            results.append(
                {
                    "name": name,
                    "substochastic": True,
                    "spectral_radius": spectral_radius(A),
                    "stable": stab.stable,
                    "unreachable_nodes": sorted(stab.unreachable_nodes),
                    "deficiency_set": sorted(A.deficiency_set),
                }
            )
        else:
            W = RowStochasticMatrix(n=rows.shape[0], entries=rows)
            sia = check_sia(W)
            results.append(
                {
                    "name": name,
                    "substochastic": False,
                    "is_sia": sia.is_sia,
                    "reason": sia.reason,
                    "pi": None if sia.pi is None else [float(v) for v in sia.pi],
                    "primitive": is_primitive(W),
                }
            )
    return {"results": results}, 0, {}


def _run_check_sequence(params: dict, seed: int) -> tuple[dict, int, dict]:
    seq = sequence_from_json_obj(_require(params, "sequence"), seed)
    M = int(params.get("M", 1))
    T = int(params.get("T", 0))
    L = int(params.get("L", 0))
    pg = persistent_graph(seq)
    rec = check_reciprocity(seq, M, T)
    ucb = check_uniform_cut_balance(seq, L)
    ab = check_arc_balance(seq, L)
    verdict = {
        "persistent_arcs": sorted(
            [int(j), int(i)] for (j, i) in pg.graph.arc_set()
        ),
        "persistent_exact": pg.exact,
        "reciprocity": {
            "holds": rec.holds,
            "M": rec.M,
            "T": rec.T,
            "violating_cut": None
            if rec.violating_cut is None
            else [sorted(rec.violating_cut.left), sorted(rec.violating_cut.right)],
            "violating_window": None
            if rec.violating_window is None
            else list(rec.violating_window),
            "exact": rec.exact,
        },
        "uniform_cut_balance": {
            "holds": ucb.holds,
            "C": ucb.C,
            "witness": None
            if ucb.witness is None
            else [[sorted(ucb.witness[0].left), sorted(ucb.witness[0].right)], ucb.witness[1]],
            "exact": ucb.exact,
        },
        "arc_balance": {"holds": ab.holds, "C": ab.C, "exact": ab.exact},
    }
    return verdict, 0, {}


def _run_simulate_rai(params: dict, seed: int) -> tuple[dict, int, dict]:
    seq = sequence_from_json_obj(_require(params, "sequence"), seed)
    steps = int(_require(params, "steps"))
    policy = _policy_from(params.get("policy"), seed)
    if "delays" in params:
        delays = DelaySpec.from_json_obj(params["delays"])
        history = [np.asarray(h, dtype=float) for h in _require(params, "history")]
        traj = run_delayed_rai(seq, delays, history, policy, steps)
    else:
        x0 = np.asarray(_require(params, "x0"), dtype=float)
        traj = run_rai(seq, x0, policy, steps)
    verdict = classify(traj)
    code = 0 if verdict.all_converged() else 3
    return {"verdict": verdict.to_json_obj()}, code, {"trajectory": traj}


def _run_simulate_hk(params: dict, seed: int) -> tuple[dict, int, dict]:
    x0 = np.asarray(_require(params, "x0"), dtype=float)
    cfg = HkConfig(
        epsilon=float(_require(params, "epsilon")),
        truth=float(params.get("truth", 0.0)),
        awareness=tuple(params.get("awareness", ())),
    )
    max_steps = int(params.get("max_steps", 10 * x0.shape[0] ** 3))
    traj, report = run_hk(x0, cfg, max_steps)
    if report.terminated_at is not None:
        code = 0
        verdict_obj = None
    else:
        verdict = classify(traj)
        verdict_obj = verdict.to_json_obj()
        code = 0 if verdict.all_converged() else 3
    return (
        {"cluster_report": report.to_json_obj(), "verdict": verdict_obj},
        code,
        {"trajectory": traj},
    )


def _run_simulate_altafini(params: dict, seed: int) -> tuple[dict, int, dict]:
    mats = [np.asarray(m, dtype=float) for m in _require(params, "matrices")]
    seq = SignedMatrixSequence.explicit(mats, period=int(params.get("period", len(mats))))
    x0 = np.asarray(_require(params, "x0"), dtype=float)
    steps = int(_require(params, "steps"))
    traj = run_altafini(seq, x0, steps)
    verdict = classify(traj)
    modulus = modulus_consensus_verdict(traj)
    balance = recover_structural_balance(seq, int(params.get("balance_horizon", seq.period or 1)))
    code = 0 if verdict.all_converged() else 3
    return (
        {
            "verdict": verdict.to_json_obj(),
            "modulus": modulus.to_json_obj(),
            "balance": balance.to_json_obj(),
        },
        code,
        {"trajectory": traj},
    )


def _run_solve_fixedpoint(params: dict, seed: int) -> tuple[dict, int, dict]:
    maps = tuple(_projector_from(s) for s in _require(params, "sets"))
    W = sequence_from_json_obj(_require(params, "W"), seed)
    problem = MultiAgentProblem(
        maps=maps,
        W=W,
        algorithm=_require(params, "algorithm"),
        initial=np.asarray(_require(params, "initial"), dtype=float),
    )
    result = solve(
        problem,
        max_iters=int(params.get("max_iters", MAX_ITERS)),
        tol=float(params.get("tol", SOLVER_TOL)),
    )
    code = 0 if result.converged else 3
    return {"result": result.to_json_obj()}, code, {"solve_result": result}


_RUNNERS = {
    "analyze_graph": _run_analyze_graph,
    "analyze_matrix": _run_analyze_matrix,
    "check_sequence": _run_check_sequence,
    "simulate_rai": _run_simulate_rai,
    "simulate_hk": _run_simulate_hk,
    "simulate_altafini": _run_simulate_altafini,
    "solve_fixedpoint": _run_solve_fixedpoint,
}


def _load_scenario(ref: str) -> dict:
    path = Path(ref)
    if not path.exists():
        candidate = _SCENARIO_DIR / f"{ref}.json"
        if candidate.exists():
            path = candidate
        else:
            raise ScenarioError("io", f"no such scenario file or bundled name: {ref}")
    try:
        obj = json.loads(path.read_text())
    except json.JSONDecodeError as e:
        raise ScenarioError("bad-json", f"{path}: {e}") from e
    if not isinstance(obj, dict):
        raise ScenarioError("schema", "scenario must be a JSON object")
    if obj.get("schema_version") != SCHEMA_VERSION:
        raise ScenarioError("schema", f"unsupported schema_version {obj.get('schema_version')!r}")
    if obj.get("kind") not in KINDS:
        raise ScenarioError("schema", f"unknown kind {obj.get('kind')!r}")
    if not isinstance(obj.get("name"), str) or not obj["name"]:
        raise ScenarioError("schema", "scenario needs a nonempty name")
    if not isinstance(obj.get("parameters"), dict):
        raise ScenarioError("schema", "scenario needs a parameters object")
    return obj


def run_scenario(
    ref: str,
    out_dir: str | Path = ".",
    seed: int | None = None,
    fmt: str = "csv",
    allowed_kinds: tuple = KINDS,
) -> int:
    """Load, dispatch, and write artifacts; returns the process exit code."""
    try:
        scenario = _load_scenario(ref)
        if scenario["kind"] not in allowed_kinds:
            raise ScenarioError(
                "schema",
                f"kind {scenario['kind']!r} is not handled by this subcommand",
            )
        eff_seed = int(scenario.get("seed", 0)) if seed is None else int(seed)
        try:
            verdict_body, code, artifacts = _RUNNERS[scenario["kind"]](
                scenario["parameters"], eff_seed
            )
        except ScenarioError:
            raise
        except (ValueError, KeyError, TypeError) as e:
            raise ScenarioError("validation", str(e)) from e
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        name = scenario["name"]
        outputs = scenario.get("outputs", {})
        verdict_obj = {
            "schema_version": SCHEMA_VERSION,
            "name": name,
            "kind": scenario["kind"],
            "seed": eff_seed,
            "exit_code": code,
        }
        verdict_obj.update(verdict_body)
        verdict_path = out / outputs.get("verdict", f"{name}.verdict.json")
        verdict_path.write_text(_dump(verdict_obj), newline="\n")
        if "trajectory" in artifacts:
            traj = artifacts["trajectory"]
            if fmt == "json":
                tpath = out / outputs.get("trajectory", f"{name}.trajectory.json")
                tpath.write_text(_dump(traj.to_json_obj()), newline="\n")
            else:
                tpath = out / outputs.get("trajectory", f"{name}.trajectory.csv")
                tpath.write_text(traj.to_csv(), newline="\n")
        if "solve_result" in artifacts:
            hpath = out / outputs.get("history", f"{name}.history.csv")
            hpath.write_text(artifacts["solve_result"].history_csv(), newline="\n")
        return code
    except ScenarioError as e:
        print(f"error: {e.code}: {e}", file=sys.stderr)
        return 2


def list_bundled(fmt: str = "csv") -> int:
    """Print the bundled scenario catalog (name, kind, description)."""
    rows = []
    for path in sorted(_SCENARIO_DIR.glob("*.json")):
        try:
            obj = _load_scenario(str(path))
        except ScenarioError as e:
            print(f"error: {e.code}: {e}", file=sys.stderr)
            return 2
        rows.append(
            {
                "name": obj["name"],
                "kind": obj["kind"],
                "description": obj.get("description", ""),
            }
        )
    if fmt == "json":
        sys.stdout.write(_dump(rows))
    else:
        width = max((len(r["name"]) for r in rows), default=4)
        kindw = max((len(r["kind"]) for r in rows), default=4)
        for r in rows:
            print(f"{r['name']:<{width}}  {r['kind']:<{kindw}}  {r['description']}")
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="raikit",
        description="Averaging-inequality toolkit: analyze, check, simulate, solve.",
    )
    parser.add_argument("--seed", type=int, default=None, help="override the scenario seed")
    parser.add_argument("--out-dir", default=".", help="directory for artifacts")
    parser.add_argument(
        "--format",
        choices=("csv", "json"),
        default="csv",
        dest="fmt",
        help="trajectory artifact format (verdict JSON is always written)",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for cmd in ("analyze", "check", "simulate", "solve"):
        p = sub.add_parser(cmd, help=f"run a {'/'.join(SUBCOMMAND_KINDS[cmd])} scenario")
        p.add_argument("scenario", help="scenario file path or bundled name")
    sub.add_parser("list", help="list bundled scenarios")
    args = parser.parse_args(argv)
    if args.command == "list":
        return list_bundled(fmt=args.fmt)
    return run_scenario(
        args.scenario,
        out_dir=args.out_dir,
        seed=args.seed,
        fmt=args.fmt,
        allowed_kinds=SUBCOMMAND_KINDS[args.command],
    )


if __name__ == "__main__":
    sys.exit(main())
