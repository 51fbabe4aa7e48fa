"""Smoke tests for the python bindings. Runs against the in-tree build via
PYTHONPATH; asserts end-to-end behavior, not numerics already covered by the
C++ suites."""

import numpy as np

import _core as m


def test_model_and_sampling():
    spec = m.ModelSpec.classical(40, 0.7, 0.2)
    spec.validate()
    a = m.sample_graph(spec, 123)
    assert a.shape == (40, 40)
    assert np.array_equal(a, a.T)
    assert np.all(np.diag(a) == 1.0)
    assert np.array_equal(a, m.sample_graph(spec, 123))

    stats = m.model_statistics(spec)
    assert abs(stats.a - 0.7 * 40) < 1e-12
    truth = m.ground_truth(spec)
    assert truth.has_x
    assert set(np.unique(truth.x)) == {-1.0, 1.0}


def test_solver_oracle():
    # rank-one objective over the psd set: exact recovery of the sign pattern
    spec = m.ModelSpec.classical(20, 0.8, 0.2)
    truth = m.ground_truth(spec)
    r = 0.3 * np.outer(truth.x, truth.x)
    sol = m.solve(r, m.FeasibleSet.grothendieck_psd())
    assert sol.converged
    assert np.linalg.norm(sol.Z - np.outer(truth.x, truth.x)) / 20 < 1e-3
    gap = m.duality_gap_certificate(r, m.FeasibleSet.grothendieck_psd(), sol)
    assert 0 <= gap < 1e-2


def test_recovery_pipeline():
    spec = m.ModelSpec.classical(100, 30.0 / 100, 4.0 / 100)
    a = m.sample_graph(spec, 7)
    b = a - m.estimate_lambda(a) * np.ones((100, 100))
    cfg = m.SolverConfig()
    cfg.rho = 0.2
    cfg.max_iterations = 400
    sol = m.solve(b, m.FeasibleSet.grothendieck_psd(), cfg)
    xhat, labels = m.round_leading_eigenvector(sol.Z)
    assert m.misclassification(labels, spec.truth_assignment()) <= 0.05


def test_audit_and_csv():
    rep = m.audit_grothendieck_psd(6, 10, 3)
    assert rep.trials == 10
    assert rep.violations == 0
    csv = rep.to_csv()
    assert csv.startswith("# schema=audit.v1\n")
    assert len(csv.strip().splitlines()) == 12


def test_io_round_trip(tmp_path=None):
    spec = m.ModelSpec.balanced(3, 5, 0.8, 0.2)
    a = m.sample_graph(spec, 2)
    m.write_matrix_market_file("py_smoke.mtx", a)
    back = m.read_matrix_market_file("py_smoke.mtx")
    assert np.array_equal(a, back)
    import os

    os.remove("py_smoke.mtx")


def test_validation_errors():
    try:
        m.ModelSpec.classical(10, 0.1, 0.5).validate()
    except ValueError as e:
        assert "p" in str(e)
    else:
        raise AssertionError("expected ValueError")


if __name__ == "__main__":
    for name, fn in sorted(globals().items()):
        if name.startswith("test_"):
            fn()
            print(f"{name}: ok")
    print("python smoke tests passed")
