import json

import numpy as np
import pytest

import singpencil


def test_diagonal_pencil():
    A = np.diag([1.0, 2, 3, 0, 0, 0])
    B = np.diag([2.0, 3, 4, 0, 0, 0])
    r = singpencil.solve(A, B, seed=1)
    assert r["nrank"] == 3
    assert sorted(z.real for z in r["finite_true"]) == pytest.approx([0.5, 2 / 3, 0.75], abs=1e-8)
    assert len(r["records"]) == 6


def test_normal_rank():
    assert singpencil.normal_rank(np.eye(3), np.zeros((3, 3))) == (3, 0)


def test_generate_and_solve():
    spec = {
        "blocks": [
            {"type": "jordan", "size": 1, "eigenvalue": 0.25},
            {"type": "jordan", "size": 1, "eigenvalue": [1, -1]},
            {"type": "L", "size": 1},
            {"type": "LT", "size": 1},
        ]
    }
    A, B, truth = singpencil.generate(json.dumps(spec), seed=4)
    assert A.shape == (5, 5)
    r = singpencil.solve(A, B, seed=2)
    got = sorted(r["finite_true"], key=lambda z: (z.real, z.imag))
    want = sorted(truth["finite"], key=lambda z: (z.real, z.imag))
    assert np.allclose(got, want, atol=1e-8)


def test_two_parameter():
    # (diag(1,2) - l I) x1 = 0, (diag(3,4) - m I) x2 = 0
    z = np.zeros((2, 2))
    pairs = singpencil.solve_2ep(-np.diag([1.0, 2]), np.eye(2), z, -np.diag([3.0, 4]), z, np.eye(2))
    got = sorted((round(p[0].real, 8), round(p[1].real, 8)) for p in pairs)
    assert got == [(1, 3), (1, 4), (2, 3), (2, 4)]


def test_double_eig():
    rng = np.random.default_rng(0)
    A, B = rng.standard_normal((2, 2)), rng.standard_normal((2, 2))
    values, gaps, degenerate = singpencil.double_eig(A, B, seed=1)
    assert len(values) == 2
    assert not degenerate
    assert max(gaps) < 1e-6


def test_errors():
    with pytest.raises(ValueError):
        singpencil.solve(np.eye(2), np.eye(3))
    with pytest.raises(singpencil.ParseError):
        singpencil.read_mtx("/nonexistent.mtx")


def test_mtx_round_trip(tmp_path):
    M = np.array([[1 + 2j, 3], [4, 5 - 1j]])
    path = str(tmp_path / "m.mtx")
    singpencil.write_mtx(path, M)
    assert np.array_equal(singpencil.read_mtx(path), M)
