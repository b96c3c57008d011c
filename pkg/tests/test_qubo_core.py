import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import all_bit_vectors, brute_energy, random_symmetric
from qubodisc.errors import DimensionError
from qubodisc.qubo_core import (
    IsingProblem,
    QuboProblem,
    bits_to_spins,
    delta_energy,
    energy,
    flip,
    ising_to_qubo,
    qubo_to_ising,
    read_qubo,
    spins_to_bits,
    write_qubo,
)


def test_energy_single_variable():
    q = QuboProblem([[-3.0]])
    values = {z: energy(q, [z]) for z in (0, 1)}
    assert values == {0: 0.0, 1: -3.0}


def test_energy_two_variables_matches_enumeration():
    quad = [[1.0, -2.0], [-2.0, 1.0]]
    q = QuboProblem(quad)
    assert energy(q, [1, 1]) == -2.0
    for z in all_bit_vectors(2):
        assert energy(q, z) == brute_energy(quad, 0.0, z)


def test_energy_zero_vector_is_offset(rng):
    q = QuboProblem(random_symmetric(rng, 5), offset=2.75)
    assert energy(q, np.zeros(5, dtype=int)) == 2.75


def test_energy_length_mismatch():
    with pytest.raises(DimensionError):
        energy(QuboProblem([[1.0]]), [0, 1])


def test_rejects_asymmetric_and_nonfinite():
    with pytest.raises(ValueError):
        QuboProblem([[0.0, 1.0], [0.0, 0.0]])
    with pytest.raises(ValueError):
        QuboProblem([[np.inf]])


def test_from_matrix_preserves_energy(rng):
    upper = np.triu(rng.normal(size=(4, 4)))
    q = QuboProblem.from_matrix(upper)
    for z in all_bit_vectors(4):
        assert energy(q, z) == pytest.approx(z @ upper @ z, abs=1e-12)


def test_problem_is_immutable():
    q = QuboProblem([[1.0]])
    with pytest.raises(ValueError):
        q.quad[0, 0] = 2.0


def test_delta_energy_examples():
    assert delta_energy(QuboProblem([[-3.0]]), [0], 0) == -3.0
    q = QuboProblem([[1.0, -2.0], [-2.0, 1.0]])
    assert delta_energy(q, [1, 0], 1) == -3.0


def test_delta_energy_index_error():
    with pytest.raises(IndexError):
        delta_energy(QuboProblem([[1.0]]), [0], 1)


@settings(max_examples=60, deadline=None)
@given(n=st.integers(1, 9), seed=st.integers(0, 2**32 - 1), i=st.integers(0, 8))
def test_delta_energy_matches_full_difference(n, seed, i):
    r = np.random.default_rng(seed)
    q = QuboProblem(random_symmetric(r, n, scale=3.0), offset=r.normal())
    z = r.integers(0, 2, n)
    i = i % n
    d = delta_energy(q, z, i)
    full = energy(q, flip(z, i)) - energy(q, z)
    assert d == pytest.approx(full, rel=1e-12, abs=1e-12 * np.abs(q.quad).sum())
    assert delta_energy(q, flip(z, i), i) == pytest.approx(-d, rel=1e-12, abs=1e-12)


def test_spin_bit_endpoints():
    assert bits_to_spins([0, 1]).tolist() == [-1, 1]
    assert spins_to_bits([-1, 1]).tolist() == [0, 1]


def test_ising_single_variable():
    ising = qubo_to_ising(QuboProblem([[-3.0]]))
    assert ising.energy([1]) == -3.0
    assert ising.energy([-1]) == 0.0


@pytest.mark.parametrize("n", [1, 2, 5, 10])
def test_ising_round_trip_all_assignments(rng, n):
    q = QuboProblem(random_symmetric(rng, n), offset=rng.normal())
    ising = qubo_to_ising(q)
    back = ising_to_qubo(ising)
    scale = max(np.abs(q.quad).max(), abs(q.offset))
    for z in all_bit_vectors(n):
        e = brute_energy(q.quad, q.offset, z)
        assert abs(ising.energy(bits_to_spins(z)) - e) <= 1e-12 * scale * n
        assert abs(energy(back, z) - e) <= 1e-12 * scale * n


def test_ising_couplings_upper_triangular(rng):
    ising = qubo_to_ising(QuboProblem(random_symmetric(rng, 4)))
    assert np.all(np.tril(ising.couplings) == 0)
    with pytest.raises(ValueError):
        IsingProblem(np.ones((2, 2)), np.zeros(2))


def test_ising_to_qubo_hand_example():
    # E(s) = -J s0 s1 - h0 s0 with J = 1, h0 = 0.5
    ising = IsingProblem([[0.0, 1.0], [0.0, 0.0]], [0.5, 0.0])
    q = ising_to_qubo(ising)
    for s in ([-1, -1], [-1, 1], [1, -1], [1, 1]):
        expected = -s[0] * s[1] - 0.5 * s[0]
        assert energy(q, spins_to_bits(s)) == pytest.approx(expected, abs=1e-15)


def test_qubo_file_round_trip(tmp_path, rng):
    sparse = np.where(rng.random((6, 6)) < 0.5, 0.0, rng.normal(size=(6, 6)))
    q = QuboProblem.from_matrix(sparse, 1.25)
    path = tmp_path / "p.qubo"
    write_qubo(path, q)
    lines = path.read_text().splitlines()
    assert lines[0].split()[0] == "6"
    assert all(int(a) <= int(b) for a, b, _ in (ln.split() for ln in lines[1:]))
    back = read_qubo(path)
    assert np.array_equal(back.quad, q.quad)
    assert back.offset == q.offset


def test_read_qubo_rejects_lower_triangle(tmp_path):
    path = tmp_path / "bad.qubo"
    path.write_text("2 0\n1 0 3.0\n")
    with pytest.raises(ValueError):
        read_qubo(path)
