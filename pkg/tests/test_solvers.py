"""Projection maps, paracontraction audits, and multi-agent solvers."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from raikit import (
    ALGORITHMS,
    ConvexProjector,
    MatrixSequence,
    MultiAgentProblem,
    Paracontraction,
    paracontraction_audit,
    project,
    solve,
    step,
)

finite_vec = st.lists(
    st.floats(-50, 50, allow_nan=False, allow_infinity=False), min_size=2, max_size=4
)


def test_projector_closed_forms():
    h = ConvexProjector.hyperplane([3.0, 4.0], 10.0)
    p = h.apply(np.array([0.0, 0.0]))
    assert p == pytest.approx([1.2, 1.6])
    assert 3 * p[0] + 4 * p[1] == pytest.approx(10.0)

    hs = ConvexProjector.halfspace([1.0, 0.0], 1.0)
    assert np.array_equal(hs.apply(np.array([0.5, 7.0])), np.array([0.5, 7.0]))
    assert hs.apply(np.array([3.0, 7.0])) == pytest.approx([1.0, 7.0])

    ball = ConvexProjector.ball([1.0, 1.0], 2.0)
    assert np.array_equal(ball.apply(np.array([2.0, 2.0])), np.array([2.0, 2.0]))
    far = ball.apply(np.array([1.0, 6.0]))
    assert far == pytest.approx([1.0, 3.0])

    box = ConvexProjector.box([0.0, 0.0], [1.0, 2.0])
    assert box.apply(np.array([-3.0, 1.5])) == pytest.approx([0.0, 1.5])

    aff = ConvexProjector.affine_subspace([[1.0, 1.0, 0.0]], [2.0])
    q = aff.apply(np.array([0.0, 0.0, 5.0]))
    assert q == pytest.approx([1.0, 1.0, 5.0])


def test_projector_validation():
    with pytest.raises(ValueError):
        ConvexProjector.hyperplane([0.0, 0.0], 1.0)
    with pytest.raises(ValueError):
        ConvexProjector.ball([0.0], -1.0)
    with pytest.raises(ValueError):
        ConvexProjector.box([2.0], [1.0])
    with pytest.raises(ValueError):
        ConvexProjector.affine_subspace([[1.0, 0.0], [1.0, 0.0]], [0.0, 1.0])


@settings(max_examples=50, deadline=None)
@given(finite_vec)
def test_projection_idempotent(vec):
    x = np.array(vec)
    d = x.shape[0]
    maps = [
        ConvexProjector.hyperplane(np.arange(1, d + 1, dtype=float), 3.0),
        ConvexProjector.ball(np.zeros(d), 2.5),
        ConvexProjector.box(-np.ones(d), np.ones(d)),
    ]
    for m in maps:
        once = m.apply(x)
        twice = m.apply(once)
        assert np.linalg.norm(twice - once) <= 1e-9 * max(1.0, np.linalg.norm(x))


def test_projection_is_paracontraction_by_audit():
    h = ConvexProjector.hyperplane([1.0, 2.0], 4.0)
    report = paracontraction_audit(h, samples=300, seed=2)
    assert report.violations == 0
    assert report.worst_margin is None or report.worst_margin >= -1e-9

    ident = Paracontraction(dimension=2, apply=lambda x: x)
    rep2 = paracontraction_audit(ident, samples=100, seed=0)
    assert rep2.violations == 0


def test_audit_flags_expansive_map():
    doubling = Paracontraction(dimension=2, apply=lambda x: 2.0 * x)
    report = paracontraction_audit(doubling, samples=200, seed=1)
    assert report.violations > 0
    assert report.worst_margin < 0


def test_fixed_point_test():
    ball = ConvexProjector.ball([0.0, 0.0], 1.0)
    assert ball.fixed_point_test(np.array([0.3, 0.4]))
    assert not ball.fixed_point_test(np.array([3.0, 4.0]))
    assert project(ball, np.array([3.0, 4.0])) == pytest.approx([0.6, 0.8])


def _uniform_problem(maps, algorithm, d):
    n = len(maps)
    W = MatrixSequence.constant(np.full((n, n), 1.0 / n))
    return MultiAgentProblem(
        maps=tuple(maps), W=W, algorithm=algorithm, initial=np.zeros((n, d))
    )


def test_problem_validation():
    h = ConvexProjector.hyperplane([1.0, 0.0], 1.0)
    g = ConvexProjector.hyperplane([1.0, 0.0, 0.0], 1.0)
    W2 = MatrixSequence.constant(np.full((2, 2), 0.5))
    with pytest.raises(ValueError):
        MultiAgentProblem(maps=(h, g), W=W2, algorithm="pre_project", initial=np.zeros((2, 2)))
    with pytest.raises(ValueError):
        MultiAgentProblem(maps=(h, h), W=W2, algorithm="newton", initial=np.zeros((2, 2)))
    with pytest.raises(ValueError):
        MultiAgentProblem(maps=(h, h), W=W2, algorithm="pre_project", initial=np.zeros((3, 2)))


def test_step_hand_values_two_hyperplanes():
    # lines x=1 and y=1 in the plane; average of starts is the origin
    maps = [
        ConvexProjector.hyperplane([1.0, 0.0], 1.0),
        ConvexProjector.hyperplane([0.0, 1.0], 1.0),
    ]
    prob = _uniform_problem(maps, "pre_project", 2)
    states = np.array([[0.0, 0.0], [0.0, 0.0]])
    out = step(prob, states, 0)
    assert np.array_equal(out, np.array([[1.0, 0.0], [0.0, 1.0]]))

    prob2 = _uniform_problem(maps, "double_project", 2)
    out2 = step(prob2, states, 0)
    # each agent averages the projected pair [(1,0),(0,1)] then projects
    assert np.allclose(out2, [[1.0, 0.5], [0.5, 1.0]], atol=1e-12)


def test_solve_intersecting_lines_all_algorithms():
    maps = [
        ConvexProjector.hyperplane([1.0, 0.0], 1.0),
        ConvexProjector.hyperplane([0.0, 1.0], 1.0),
    ]
    for alg in ALGORITHMS:
        res = solve(_uniform_problem(maps, alg, 2), max_iters=20000, tol=1e-8)
        assert res.converged, alg
        assert res.solution == pytest.approx([1.0, 1.0], abs=1e-6)
        assert len(res.disagreement_history) == res.iterations + 1


def test_solve_linear_system_matches_direct():
    A = np.array([[2.0, 1.0, 0.0, 0.0], [1.0, 3.0, 1.0, 0.0], [0.0, 1.0, 2.0, 1.0], [0.0, 0.0, 1.0, 2.0]])
    b = A @ np.ones(4)
    maps = [ConvexProjector.hyperplane(A[i], b[i]) for i in range(4)]
    direct = np.linalg.solve(A, b)
    for alg in ALGORITHMS:
        res = solve(_uniform_problem(maps, alg, 4))
        assert res.converged, alg
        assert np.abs(res.solution - direct).max() < 1e-5


def test_solve_reports_clean_failure_when_infeasible():
    maps = [
        ConvexProjector.hyperplane([1.0, 0.0], 0.0),
        ConvexProjector.hyperplane([1.0, 0.0], 1.0),  # parallel, disjoint
    ]
    res = solve(_uniform_problem(maps, "pre_project", 2), max_iters=300)
    assert not res.converged
    assert res.iterations == 300
    assert res.agent_disagreement > 1e-3


def test_history_csv_shape():
    maps = [
        ConvexProjector.hyperplane([1.0, 0.0], 1.0),
        ConvexProjector.hyperplane([0.0, 1.0], 1.0),
    ]
    res = solve(_uniform_problem(maps, "pre_project", 2), max_iters=500)
    lines = res.history_csv().strip().split("\n")
    assert lines[0] == "iteration,disagreement,violation"
    assert len(lines) == res.iterations + 2
