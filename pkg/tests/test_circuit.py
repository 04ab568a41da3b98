"""Circuit model, text format, parity matrix, and the dense simulator."""

import math

import numpy as np
import pytest

from combroute.circuit import (
    CNOT,
    Circuit,
    CircuitSyntaxError,
    MAX_SIM_QUBITS,
    SingleQubit,
    deterministic_bindings,
    opaque_labels,
    parity_matrix,
    parse_circuit,
    simulate_unitary,
    trace_overlap,
    write_circuit,
)


def random_cnot_circuit(n_qubits, n_gates, rng):
    gates = []
    for _ in range(n_gates):
        c = int(rng.integers(0, n_qubits))
        t = int(rng.integers(0, n_qubits - 1))
        if t >= c:
            t += 1
        gates.append(CNOT(c, t))
    return Circuit(n_qubits, gates)


def test_gate_validation():
    with pytest.raises(ValueError):
        CNOT(2, 2)
    with pytest.raises(ValueError):
        Circuit(2, [CNOT(0, 2)])
    with pytest.raises(ValueError):
        Circuit(2, [SingleQubit("h", (), 2)])
    with pytest.raises(TypeError):
        Circuit(2, ["h"])
    with pytest.raises(ValueError):
        Circuit(-1, [])


def test_single_qubit_params_coerced_to_floats():
    g = SingleQubit("rz", (1,), 0)
    assert g.params == (1.0,)
    assert isinstance(g.params[0], float)


def test_counts():
    c = Circuit(2, [CNOT(0, 1), SingleQubit("h", (), 0), CNOT(1, 0)])
    assert c.cnot_count == 2
    assert len(c) == 3


def test_parity_matrix_single_gate():
    p = parity_matrix(Circuit(2, [CNOT(0, 1)]))
    assert p.to_lists() == [[1, 0], [1, 1]]


def test_parity_matrix_rejects_single_qubit_gates():
    with pytest.raises(ValueError):
        parity_matrix(Circuit(1, [SingleQubit("h", (), 0)]))


def test_parity_matrix_against_wire_value_oracle():
    # feed random input bit vectors through the gates one by one; the
    # output on wire i must equal the dot product of row i with the input
    rng = np.random.default_rng(23)
    for _ in range(50):
        n = int(rng.integers(2, 9))
        c = random_cnot_circuit(n, int(rng.integers(0, 40)), rng)
        p = parity_matrix(c)
        for _ in range(10):
            x = [int(rng.integers(0, 2)) for _ in range(n)]
            values = list(x)
            for g in c.gates:
                values[g.target] ^= values[g.control]
            for i in range(n):
                expect = bin(p.row(i) & sum(b << j for j, b in enumerate(x))).count("1") & 1
                assert values[i] == expect


def test_parse_round_trip_basic():
    text = "qreg q[3];\ncx q[0],q[1];\nh q[2];\nrz(0.5) q[1];\n"
    c = parse_circuit(text)
    assert c.n_qubits == 3
    assert c.gates == (
        CNOT(0, 1),
        SingleQubit("h", (), 2),
        SingleQubit("rz", (0.5,), 1),
    )
    assert parse_circuit(write_circuit(c)) == c


def test_parse_skips_comments_prelude_and_blank_lines():
    text = (
        "OPENQASM 2.0;\n"
        'include "qelib1.inc";\n'
        "// a comment\n"
        "\n"
        "qreg r[2];\n"
        "cx r[1],r[0]; // trailing comment\n"
    )
    c = parse_circuit(text)
    assert c == Circuit(2, [CNOT(1, 0)])


def test_parse_u_gate_with_three_params():
    c = parse_circuit("qreg q[1];\nu(0.1, 0.2, 0.3) q[0];\n")
    assert c.gates == (SingleQubit("u", (0.1, 0.2, 0.3), 0),)


def test_parse_errors_carry_position():
    with pytest.raises(CircuitSyntaxError) as e:
        parse_circuit("qreg q[2];\nqreg p[2];\n")
    assert e.value.line == 2
    with pytest.raises(CircuitSyntaxError) as e:
        parse_circuit("cx q[0],q[1];\n")
    assert e.value.line == 1
    with pytest.raises(CircuitSyntaxError):
        parse_circuit("qreg q[2];\ncx p[0],q[1];\n")
    with pytest.raises(CircuitSyntaxError):
        parse_circuit("qreg q[2];\ncx q[0],q[2];\n")
    with pytest.raises(CircuitSyntaxError):
        parse_circuit("qreg q[2];\ncx q[1],q[1];\n")
    with pytest.raises(CircuitSyntaxError):
        parse_circuit("qreg q[2];\nrz(abc) q[0];\n")
    with pytest.raises(CircuitSyntaxError):
        parse_circuit("qreg q[3];\nccx q[0],q[1],q[2];\n")
    with pytest.raises(CircuitSyntaxError):
        parse_circuit("qreg q[2];\nnot a statement\n")
    with pytest.raises(CircuitSyntaxError):
        parse_circuit("// nothing here\n")


def test_parse_error_column_points_at_statement():
    with pytest.raises(CircuitSyntaxError) as e:
        parse_circuit("qreg q[2];\n   cx q[0],q[0];\n")
    assert e.value.col == 4


def test_write_rejects_unserialisable_labels():
    with pytest.raises(ValueError):
        write_circuit(Circuit(1, [SingleQubit("cx", (), 0)]))
    with pytest.raises(ValueError):
        write_circuit(Circuit(1, [SingleQubit("bad label", (), 0)]))


def test_write_parse_round_trip_random():
    rng = np.random.default_rng(5)
    labels = ["h", "x", "foo", "rz", "u"]
    for _ in range(30):
        n = int(rng.integers(1, 7))
        gates = []
        for _ in range(int(rng.integers(0, 25))):
            if n >= 2 and rng.random() < 0.6:
                c = int(rng.integers(0, n))
                t = int(rng.integers(0, n - 1))
                gates.append(CNOT(c, t if t < c else t + 1))
            else:
                label = labels[int(rng.integers(0, len(labels)))]
                n_params = {"rz": 1, "u": 3}.get(label, 0)
                params = tuple(float(rng.normal()) for _ in range(n_params))
                gates.append(SingleQubit(label, params, int(rng.integers(0, n))))
        c = Circuit(n, gates)
        assert parse_circuit(write_circuit(c)) == c


def test_little_endian_convention():
    # qubit 0 is the least significant bit of the basis index
    u = simulate_unitary(Circuit(2, [SingleQubit("x", (), 0)]))
    assert abs(u[1, 0]) == pytest.approx(1.0)
    assert abs(u[0, 1]) == pytest.approx(1.0)
    u = simulate_unitary(Circuit(2, [CNOT(0, 1)]))
    # |01> (index 1, control set) flips the target: -> |11> (index 3)
    assert abs(u[3, 1]) == pytest.approx(1.0)
    assert abs(u[0, 0]) == pytest.approx(1.0)


def test_known_single_qubit_matrices():
    h = simulate_unitary(Circuit(1, [SingleQubit("h", (), 0)]))
    s = 1 / math.sqrt(2)
    assert np.allclose(h, [[s, s], [s, -s]])
    z = simulate_unitary(Circuit(1, [SingleQubit("z", (), 0)]))
    assert np.allclose(z, [[1, 0], [0, -1]])
    t = simulate_unitary(Circuit(1, [SingleQubit("t", (), 0)]))
    assert np.allclose(t[1, 1], np.exp(1j * math.pi / 4))
    # rz(pi) == -i z, equal to z up to global phase
    rz = simulate_unitary(Circuit(1, [SingleQubit("rz", (math.pi,), 0)]))
    assert trace_overlap(rz, z) == pytest.approx(1.0)
    # u(theta, phi, lam) with euler angles of the hadamard
    u3 = simulate_unitary(
        Circuit(1, [SingleQubit("u", (math.pi / 2, 0.0, math.pi), 0)])
    )
    assert trace_overlap(u3, h) == pytest.approx(1.0)
    rx = simulate_unitary(Circuit(1, [SingleQubit("rx", (math.pi,), 0)]))
    x = simulate_unitary(Circuit(1, [SingleQubit("x", (), 0)]))
    assert trace_overlap(rx, x) == pytest.approx(1.0)


def test_cnot_only_unitary_is_the_parity_permutation():
    rng = np.random.default_rng(31)
    for _ in range(20):
        n = int(rng.integers(2, 6))
        c = random_cnot_circuit(n, int(rng.integers(1, 15)), rng)
        p = parity_matrix(c)
        u = simulate_unitary(c)
        for x in range(2 ** n):
            y = 0
            for i in range(n):
                y |= (bin(p.row(i) & x).count("1") & 1) << i
            assert abs(u[y, x]) == pytest.approx(1.0)


def test_binding_required_for_opaque_labels():
    c = Circuit(1, [SingleQubit("mystery", (), 0)])
    with pytest.raises(ValueError):
        simulate_unitary(c)
    x = np.array([[0, 1], [1, 0]], dtype=complex)
    assert np.allclose(simulate_unitary(c, {"mystery": x}), x)


def test_binding_overrides_known_label():
    c = Circuit(1, [SingleQubit("h", (), 0)])
    z = np.array([[1, 0], [0, -1]], dtype=complex)
    assert np.allclose(simulate_unitary(c, {"h": z}), z)


def test_binding_validation():
    c = Circuit(1, [SingleQubit("g", (), 0)])
    with pytest.raises(ValueError):
        simulate_unitary(c, {"g": np.eye(3)})
    with pytest.raises(ValueError):
        simulate_unitary(c, {"g": np.array([[1, 1], [0, 1]], dtype=complex)})


def test_simulation_qubit_cap():
    with pytest.raises(ValueError):
        simulate_unitary(Circuit(MAX_SIM_QUBITS + 1, []))


def test_trace_overlap_basics():
    eye = np.eye(4)
    assert trace_overlap(eye, eye) == pytest.approx(1.0)
    assert trace_overlap(eye, 1j * eye) == pytest.approx(1.0)
    x = np.array([[0, 1], [1, 0]])
    assert trace_overlap(np.eye(2), x) == pytest.approx(0.0)
    with pytest.raises(ValueError):
        trace_overlap(np.eye(2), np.eye(4))
    with pytest.raises(ValueError):
        trace_overlap(np.ones((2, 3)), np.ones((2, 3)))


def test_opaque_labels():
    c = Circuit(
        2,
        [
            SingleQubit("h", (), 0),
            SingleQubit("u", (0.1, 0.2, 0.3), 1),
            SingleQubit("u", (), 1),
            SingleQubit("v", (), 0),
            CNOT(0, 1),
        ],
    )
    # parameterless u has no built-in matrix; the three-parameter form does
    assert opaque_labels(c) == {"u", "v"}


def test_deterministic_bindings_are_stable_unitaries():
    a = deterministic_bindings(["v", "w", "v"])
    b = deterministic_bindings({"w", "v"})
    assert sorted(a) == ["v", "w"]
    for label, m in a.items():
        assert m.shape == (2, 2)
        assert np.allclose(m @ m.conj().T, np.eye(2), atol=1e-12)
        assert np.allclose(m, b[label])
    assert not np.allclose(a["v"], a["w"])
