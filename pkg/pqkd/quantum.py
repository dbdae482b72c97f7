# This file is part of the pattern-qkd.
#
# Copyright (C) 2026 The pattern-qkd contributors
#
# For the full copyright and license information, please view
# the LICENSE file that was distributed with this source code.

"""Exact state vector and density matrix arithmetic for five qubits.

Qubit 1 is the most significant bit of an amplitude index and qubit 5
the least significant one. States and density matrices are immutable
values: every operation returns a new object.
"""

import logging
import math

import numpy as np

logger = logging.getLogger(__name__)


__all__ = [
    'NUM_QUBITS', 'DIMENSION', 'QuantumStateError', 'EigenSolverError',
    'StateVec', 'DensityMatrix', 'Gate', 'GATES',
    'apply_single_qubit_gate', 'apply_two_qubit_gate', 'apply_operator',
    'apply_permutation', 'measure_qubit', 'measure_observable',
    'density_from_ensemble', 'mix_densities', 'jacobi_eigenvalues',
    'von_neumann_entropy', 'inner_product', 'random_state',
]

NUM_QUBITS = 5
DIMENSION = 2 ** NUM_QUBITS

NORM_TOLERANCE = 1e-10
CERTAINTY_TOLERANCE = 1e-10
MIN_OUTCOME_PROBABILITY = 1e-12
EIGENVALUE_FLOOR = -1e-9

JACOBI_TOLERANCE = 1e-12
JACOBI_MAX_SWEEPS = 100


class QuantumStateError(ValueError):
    """A state, gate or density matrix violates its invariants."""


class EigenSolverError(ArithmeticError):
    """The Jacobi eigensolver did not converge."""


def _frozen(array):
    array.setflags(write=False)
    return array


class StateVec:

    """Pure state of the five qubit block: 32 complex amplitudes."""

    __slots__ = ('_amplitudes',)

    def __init__(self, amplitudes, normalize=False):
        amplitudes = np.array(amplitudes, dtype=complex).reshape(-1)
        if amplitudes.shape != (DIMENSION,):
            raise QuantumStateError(
                'Expected {} amplitudes, got {}'.format(
                    DIMENSION, amplitudes.size))
        if not np.all(np.isfinite(amplitudes)):
            raise QuantumStateError('Amplitudes must be finite')

        norm = np.linalg.norm(amplitudes)
        if normalize:
            if norm < MIN_OUTCOME_PROBABILITY:
                raise QuantumStateError('Cannot normalize a null vector')
            amplitudes = amplitudes / norm
        elif abs(norm ** 2 - 1) > NORM_TOLERANCE:
            raise QuantumStateError(
                'State is not normalized: squared norm {!r}'.format(norm ** 2))

        self._amplitudes = _frozen(amplitudes)

    @classmethod
    def basis(cls, bits):
        """Computational basis state, from an index or a bit string.

        ``StateVec.basis('10000')`` sets qubit 1.
        """
        if isinstance(bits, str):
            if len(bits) != NUM_QUBITS or set(bits) - {'0', '1'}:
                raise QuantumStateError(
                    'Invalid basis label: {!r}'.format(bits))
            index = int(bits, 2)
        else:
            index = int(bits)
        if not 0 <= index < DIMENSION:
            raise QuantumStateError(
                'Basis index out of range: {}'.format(bits))

        amplitudes = np.zeros(DIMENSION, dtype=complex)
        amplitudes[index] = 1
        return cls(amplitudes)

    @property
    def amplitudes(self):
        return self._amplitudes

    def tensor(self):
        """Amplitudes viewed with one axis per qubit, qubit 1 first."""
        return self._amplitudes.reshape((2,) * NUM_QUBITS)

    def norm(self):
        return float(np.linalg.norm(self._amplitudes))

    def isclose(self, other, atol=1e-12):
        """Elementwise comparison, global phase included."""
        return bool(np.allclose(self._amplitudes, other.amplitudes,
                                rtol=0, atol=atol))

    def __repr__(self):
        support = np.flatnonzero(np.abs(self._amplitudes) > 1e-12)
        labels = ','.join(format(index, '05b') for index in support[:4])
        more = '...' if support.size > 4 else ''
        return '<StateVec:{}{}>'.format(labels, more)


class DensityMatrix:

    """Hermitian, unit trace, positive semidefinite 32×32 operator.

    Hermiticity and the trace are checked on construction. Positivity is
    checked when the spectrum is first computed.
    """

    __slots__ = ('_entries', '_eigenvalues')

    def __init__(self, entries):
        entries = np.array(entries, dtype=complex)
        if entries.shape != (DIMENSION, DIMENSION):
            raise QuantumStateError(
                'Expected a {0}x{0} matrix, got {1}'.format(
                    DIMENSION, entries.shape))
        if not np.all(np.isfinite(entries)):
            raise QuantumStateError('Entries must be finite')
        if not np.allclose(entries, entries.conj().T, rtol=0,
                           atol=NORM_TOLERANCE):
            raise QuantumStateError('Density matrix is not Hermitian')

        trace = np.trace(entries).real
        if abs(trace - 1) > NORM_TOLERANCE:
            raise QuantumStateError(
                'Density matrix trace is {!r}, expected 1'.format(trace))

        self._entries = _frozen(entries)
        self._eigenvalues = None

    @property
    def entries(self):
        return self._entries

    def eigenvalues(self):
        """Spectrum from :func:`jacobi_eigenvalues`, cached."""
        if self._eigenvalues is None:
            values = jacobi_eigenvalues(self._entries)
            if values[0] < EIGENVALUE_FLOOR:
                raise QuantumStateError(
                    'Density matrix is not positive: eigenvalue {!r}'.format(
                        values[0]))
            self._eigenvalues = _frozen(values)
        return self._eigenvalues

    def __repr__(self):
        return '<DensityMatrix:trace={:.6g}>'.format(
            np.trace(self._entries).real)


class Gate:

    """A unitary acting on one or two qubits."""

    __slots__ = ('name', '_matrix', 'num_qubits')

    def __init__(self, name, matrix):
        matrix = np.array(matrix, dtype=complex)
        if matrix.shape not in ((2, 2), (4, 4)):
            raise QuantumStateError(
                'Gate {} must be 2x2 or 4x4, got {}'.format(
                    name, matrix.shape))
        identity = np.eye(matrix.shape[0])
        if not np.allclose(matrix.conj().T @ matrix, identity, rtol=0,
                           atol=NORM_TOLERANCE):
            raise QuantumStateError('Gate {} is not unitary'.format(name))

        self.name = name
        self._matrix = _frozen(matrix)
        self.num_qubits = 1 if matrix.shape == (2, 2) else 2

    @property
    def matrix(self):
        return self._matrix

    def adjoint(self):
        return Gate(self.name + '†', self._matrix.conj().T)

    def __repr__(self):
        return '<Gate:{}>'.format(self.name)


_SQRT2_INV = 1 / math.sqrt(2)

GATES = {
    'I': Gate('I', [[1, 0], [0, 1]]),
    'X': Gate('X', [[0, 1], [1, 0]]),
    'Y': Gate('Y', [[0, -1j], [1j, 0]]),
    'Z': Gate('Z', [[1, 0], [0, -1]]),
    'H': Gate('H', np.array([[1, 1], [1, -1]]) * _SQRT2_INV),
    'S': Gate('S', [[1, 0], [0, 1j]]),
    'CNOT': Gate('CNOT', [[1, 0, 0, 0],
                          [0, 1, 0, 0],
                          [0, 0, 0, 1],
                          [0, 0, 1, 0]]),
    'CZ': Gate('CZ', np.diag([1, 1, 1, -1])),
    'SWAP': Gate('SWAP', [[1, 0, 0, 0],
                          [0, 0, 1, 0],
                          [0, 1, 0, 0],
                          [0, 0, 0, 1]]),
}


def _check_qubit(qubit):
    if not 1 <= qubit <= NUM_QUBITS:
        raise QuantumStateError(
            'Qubit must be in 1..{}, got {}'.format(NUM_QUBITS, qubit))
    return qubit - 1


def apply_single_qubit_gate(state, gate, qubit):
    """Return ``U_qubit |state⟩``."""
    axis = _check_qubit(qubit)
    if gate.num_qubits != 1:
        raise QuantumStateError('{} is not a single-qubit gate'.format(gate))

    tensor = np.tensordot(gate.matrix, state.tensor(), axes=([1], [axis]))
    return StateVec(np.moveaxis(tensor, 0, axis).reshape(-1))


def apply_two_qubit_gate(state, gate, q_a, q_b):
    """Apply a 4×4 gate on the ordered pair ``(q_a, q_b)``.

    ``q_a`` is the more significant qubit of the gate's basis, so
    ``CNOT`` on ``(1, 2)`` uses qubit 1 as control.
    """
    axis_a, axis_b = _check_qubit(q_a), _check_qubit(q_b)
    if axis_a == axis_b:
        raise QuantumStateError(
            'Two-qubit gate needs distinct qubits, got {} twice'.format(q_a))
    if gate.num_qubits != 2:
        raise QuantumStateError('{} is not a two-qubit gate'.format(gate))

    matrix = gate.matrix.reshape(2, 2, 2, 2)
    tensor = np.tensordot(matrix, state.tensor(),
                          axes=([2, 3], [axis_a, axis_b]))
    return StateVec(
        np.moveaxis(tensor, [0, 1], [axis_a, axis_b]).reshape(-1))


def apply_operator(state, operator):
    """Apply a unitary 32×32 operator, e.g. a Pauli string."""
    return StateVec(operator @ state.amplitudes)


def apply_permutation(state, pattern):
    """Send the qubit at standard position ``i`` to position ``p(i)``."""
    destinations = [pattern(position) - 1
                    for position in range(1, NUM_QUBITS + 1)]
    tensor = np.moveaxis(state.tensor(), list(range(NUM_QUBITS)),
                         destinations)
    return StateVec(tensor.reshape(-1))


def _sample_outcome(probability_one, rng):
    """Draw a measurement bit; certain outcomes leave ``rng`` untouched."""
    if probability_one < CERTAINTY_TOLERANCE:
        return 0
    if probability_one > 1 - CERTAINTY_TOLERANCE:
        return 1
    return int(rng.random() < probability_one)


def _collapse(projected, probability):
    if probability < MIN_OUTCOME_PROBABILITY:
        raise QuantumStateError(
            'Sampled an outcome of probability {!r}'.format(probability))
    return StateVec(projected / math.sqrt(probability))


def measure_qubit(state, qubit, rng):
    """Measure one qubit in the computational basis.

    :returns: ``(bit, post-measurement state)``
    """
    axis = _check_qubit(qubit)
    tensor = state.tensor()
    probability_one = float(
        np.sum(np.abs(np.take(tensor, 1, axis=axis)) ** 2))

    bit = _sample_outcome(probability_one, rng)
    projected = tensor.copy()
    index = [slice(None)] * NUM_QUBITS
    index[axis] = 1 - bit
    projected[tuple(index)] = 0
    probability = probability_one if bit else 1 - probability_one
    return bit, _collapse(projected.reshape(-1), probability)


def measure_observable(state, observable, rng):
    """Projectively measure a ±1 valued observable such as a Pauli string.

    Outcome ``0`` is the +1 eigenvalue.

    :returns: ``(bit, post-measurement state)``
    """
    amplitudes = state.amplitudes
    flipped = observable @ amplitudes
    plus = (amplitudes + flipped) / 2
    probability_zero = float(np.vdot(plus, plus).real)

    bit = _sample_outcome(1 - probability_zero, rng)
    if bit == 0:
        return 0, _collapse(plus, probability_zero)
    return 1, _collapse((amplitudes - flipped) / 2, 1 - probability_zero)


def _check_probabilities(probabilities):
    if any(p < 0 for p in probabilities):
        raise QuantumStateError('Probabilities must be non-negative')
    total = math.fsum(probabilities)
    if abs(total - 1) > NORM_TOLERANCE:
        raise QuantumStateError(
            'Probabilities sum to {!r}, expected 1'.format(total))


def density_from_ensemble(members):
    """Return ``Σ p_i |ψ_i⟩⟨ψ_i|`` for ``[(p_i, ψ_i), ...]``."""
    members = list(members)
    _check_probabilities([probability for probability, _ in members])

    entries = np.zeros((DIMENSION, DIMENSION), dtype=complex)
    for probability, state in members:
        amplitudes = state.amplitudes
        entries += probability * np.outer(amplitudes, amplitudes.conj())
    return DensityMatrix(entries)


def mix_densities(members):
    """Return ``Σ p_i ρ_i`` for ``[(p_i, ρ_i), ...]``."""
    members = list(members)
    _check_probabilities([probability for probability, _ in members])

    entries = np.zeros((DIMENSION, DIMENSION), dtype=complex)
    for probability, rho in members:
        entries += probability * rho.entries
    return DensityMatrix(entries)


def _off_diagonal_norm(matrix):
    return float(np.linalg.norm(matrix - np.diag(np.diag(matrix))))


def _rotate(matrix, p, q):
    """Zero ``matrix[p, q]`` with a complex Jacobi rotation, in place."""
    element = matrix[p, q]
    magnitude = abs(element)
    phase = element / magnitude
    theta = 0.5 * math.atan2(2 * magnitude,
                             matrix[q, q].real - matrix[p, p].real)
    cos, sin = math.cos(theta), math.sin(theta)
    rotation = np.array([[cos, sin],
                         [-sin * phase.conjugate(), cos * phase.conjugate()]])

    columns = [p, q]
    matrix[:, columns] = matrix[:, columns] @ rotation
    matrix[columns, :] = rotation.conj().T @ matrix[columns, :]
    matrix[p, q] = matrix[q, p] = 0


def jacobi_eigenvalues(matrix, tolerance=JACOBI_TOLERANCE,
                       max_sweeps=JACOBI_MAX_SWEEPS):
    """Eigenvalues of a Hermitian matrix by cyclic Jacobi rotations.

    Sweeps until the off-diagonal Frobenius norm drops below
    ``tolerance``.

    :returns: real eigenvalues in ascending order.
    :raises EigenSolverError: after ``max_sweeps`` without convergence.
    """
    work = np.array(matrix, dtype=complex)
    size = work.shape[0]
    skip_below = tolerance / (2 * size)

    for sweep in range(max_sweeps + 1):
        if _off_diagonal_norm(work) < tolerance:
            logger.debug('Jacobi converged after %d sweeps', sweep)
            return np.sort(work.diagonal().real)
        if sweep == max_sweeps:
            break
        for p in range(size - 1):
            for q in range(p + 1, size):
                if abs(work[p, q]) > skip_below:
                    _rotate(work, p, q)

    raise EigenSolverError(
        'Jacobi rotations did not converge in {} sweeps '
        '(off-diagonal norm {!r})'.format(
            max_sweeps, _off_diagonal_norm(work)))


def von_neumann_entropy(rho):
    """Entropy ``-Σ λ log2 λ`` of ``rho`` in bits."""
    eigenvalues = np.clip(rho.eigenvalues(), 0, None)
    entropy = -math.fsum(
        value * math.log2(value) for value in eigenvalues if value > 0)
    return min(max(entropy, 0.0), float(NUM_QUBITS))


def inner_product(a, b):
    """Return ``⟨a|b⟩``."""
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def random_state(rng):
    """Haar-random pure state drawn from ``rng``."""
    amplitudes = (rng.standard_normal(DIMENSION)
                  + 1j * rng.standard_normal(DIMENSION))
    return StateVec(amplitudes, normalize=True)
