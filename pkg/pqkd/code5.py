# This file is part of the pattern-qkd.
#
# Copyright (C) 2026 The pattern-qkd contributors
#
# For the full copyright and license information, please view
# the LICENSE file that was distributed with this source code.

"""The five-qubit perfect code.

Encoding, stabilizer syndrome extraction, single-error lookup correction,
logical measurement and pattern-aware block decoding. The generators are
the cyclic set ``XZZXI``, ``IXZZX``, ``XIXZZ``, ``ZXIXZ`` with logical
operators ``ZZZZZ`` and ``XXXXX``.
"""

import functools
import logging
import math
from dataclasses import dataclass

import numpy as np

from .patterns import invert
from .quantum import (
    DIMENSION,
    GATES,
    NUM_QUBITS,
    QuantumStateError,
    StateVec,
    apply_operator,
    apply_permutation,
    apply_single_qubit_gate,
    measure_observable,
)

logger = logging.getLogger(__name__)


__all__ = [
    'PAULI_LABELS', 'STABILIZER_GENERATORS', 'LOGICAL_Z', 'LOGICAL_X',
    'BASES', 'Syndrome', 'TRIVIAL_SYNDROME', 'CorrectionTable',
    'CORRECTION_TABLE', 'pauli_string_operator', 'single_qubit_pauli',
    'anticommutes', 'error_syndrome', 'apply_pauli', 'apply_pauli_string',
    'encode_logical', 'logical_state', 'extract_syndrome', 'correct',
    'measure_logical', 'decode_block', 'decode_distribution',
]

PAULI_LABELS = 'IXYZ'

STABILIZER_GENERATORS = ('XZZXI', 'IXZZX', 'XIXZZ', 'ZXIXZ')
LOGICAL_Z = 'ZZZZZ'
LOGICAL_X = 'XXXXX'

#: Measurement basis of the logical bit -> logical observable.
BASES = {'Z': LOGICAL_Z, 'X': LOGICAL_X}

NUM_SYNDROMES = 2 ** len(STABILIZER_GENERATORS)


def _check_label(label):
    if len(label) != NUM_QUBITS or set(label) - set(PAULI_LABELS):
        raise QuantumStateError('Invalid Pauli string: {!r}'.format(label))
    return label


@functools.lru_cache(maxsize=None)
def pauli_string_operator(label):
    """Dense 32×32 operator of a Pauli string such as ``'XZZXI'``.

    The first letter acts on qubit 1.
    """
    _check_label(label)
    operator = functools.reduce(
        np.kron, (GATES[letter].matrix for letter in label))
    operator.setflags(write=False)
    return operator


def single_qubit_pauli(letter, qubit):
    """Pauli string with ``letter`` on ``qubit`` and identity elsewhere."""
    if letter not in PAULI_LABELS or not 1 <= qubit <= NUM_QUBITS:
        raise QuantumStateError(
            'Invalid single-qubit Pauli {}{}'.format(letter, qubit))
    label = ['I'] * NUM_QUBITS
    label[qubit - 1] = letter
    return ''.join(label)


def anticommutes(a, b):
    """Whether two Pauli strings anticommute."""
    clashes = sum(
        1 for x, y in zip(_check_label(a), _check_label(b))
        if x != 'I' and y != 'I' and x != y
    )
    return clashes % 2 == 1


def apply_pauli(state, letter, qubit):
    """Apply a single Pauli ``X``, ``Y`` or ``Z`` to one qubit."""
    return apply_single_qubit_gate(state, GATES[letter], qubit)


def apply_pauli_string(state, label):
    return apply_operator(state, pauli_string_operator(label))


@dataclass(frozen=True, order=True)
class Syndrome:

    """Outcomes of the four generator measurements.

    Bit ``k`` is the outcome of generator ``g_k`` (0 for eigenvalue +1),
    ``g1`` being the most significant bit of :attr:`value`.
    """

    value: int

    def __post_init__(self):
        if not 0 <= int(self.value) < NUM_SYNDROMES:
            raise QuantumStateError(
                'Syndrome value out of range: {!r}'.format(self.value))
        object.__setattr__(self, 'value', int(self.value))

    @classmethod
    def from_bits(cls, bits):
        bits = tuple(bits)
        if len(bits) != len(STABILIZER_GENERATORS):
            raise QuantumStateError(
                'Expected 4 syndrome bits: {}'.format(bits))
        return cls(functools.reduce(lambda acc, bit: acc << 1 | bit, bits, 0))

    @classmethod
    def parse(cls, text):
        """Build a syndrome from its 4-bit form, e.g. ``'0101'``."""
        if len(text) != len(STABILIZER_GENERATORS) or set(text) - {'0', '1'}:
            raise QuantumStateError('Invalid syndrome text: {!r}'.format(text))
        return cls(int(text, 2))

    @property
    def bits(self):
        return tuple(int(bit) for bit in str(self))

    def is_trivial(self):
        return self.value == 0

    def __str__(self):
        return format(self.value, '04b')

    def __repr__(self):
        return '<Syndrome:{}>'.format(self)


TRIVIAL_SYNDROME = Syndrome(0)


def error_syndrome(label):
    """Syndrome a Pauli error produces on any codeword."""
    return Syndrome.from_bits(
        int(anticommutes(label, generator))
        for generator in STABILIZER_GENERATORS
    )


class CorrectionTable:

    """Recovery Pauli for each of the 16 syndromes.

    Built by enumerating the 15 single-qubit Paulis against the
    generators, so every single-qubit error is corrected exactly.
    """

    def __init__(self):
        recoveries = {TRIVIAL_SYNDROME: 'I' * NUM_QUBITS}
        for qubit in range(1, NUM_QUBITS + 1):
            for letter in 'XYZ':
                label = single_qubit_pauli(letter, qubit)
                syndrome = error_syndrome(label)
                if syndrome in recoveries:
                    raise QuantumStateError(
                        'Syndrome {} is shared by {} and {}'.format(
                            syndrome, recoveries[syndrome], label))
                recoveries[syndrome] = label

        if len(recoveries) != NUM_SYNDROMES:
            raise QuantumStateError('Correction table is incomplete')
        self._recoveries = recoveries

    def __getitem__(self, syndrome):
        return self._recoveries[syndrome]

    def __len__(self):
        return len(self._recoveries)

    def __iter__(self):
        return iter(sorted(self._recoveries))

    def items(self):
        return [(syndrome, self._recoveries[syndrome]) for syndrome in self]


CORRECTION_TABLE = CorrectionTable()


@functools.lru_cache(maxsize=None)
def _codewords():
    projected = np.zeros(DIMENSION, dtype=complex)
    projected[0] = 1
    for generator in STABILIZER_GENERATORS:
        stabilized = pauli_string_operator(generator) @ projected
        projected = (projected + stabilized) / 2
    zero = StateVec(projected, normalize=True)
    one = apply_pauli_string(zero, LOGICAL_X)
    logger.debug('Prepared logical codewords')
    return zero, one


def _check_bit(bit):
    if bit not in (0, 1):
        raise QuantumStateError('Logical bit must be 0 or 1: {!r}'.format(bit))
    return bit


def encode_logical(bit):
    """Return ``|0_L⟩`` or ``|1_L⟩`` in the standard layout."""
    return _codewords()[_check_bit(bit)]


def _check_basis(basis):
    if basis not in BASES:
        raise QuantumStateError(
            'Logical basis must be one of {}: {!r}'.format(
                ', '.join(BASES), basis))
    return basis


@functools.lru_cache(maxsize=None)
def _x_basis_states():
    zero, one = _codewords()
    plus = (zero.amplitudes + one.amplitudes) / math.sqrt(2)
    minus = (zero.amplitudes - one.amplitudes) / math.sqrt(2)
    return StateVec(plus), StateVec(minus)


def logical_state(bit, basis='Z'):
    """Eigenstate of the logical observable of ``basis`` for ``bit``.

    ``Z`` gives the codewords; ``X`` gives ``(|0_L⟩ ± |1_L⟩)/√2``.
    """
    if _check_basis(basis) == 'Z':
        return encode_logical(bit)
    return _x_basis_states()[_check_bit(bit)]


def extract_syndrome(state, rng):
    """Measure ``g1`` to ``g4`` in turn.

    :returns: ``(syndrome, post-measurement state)``
    """
    bits = []
    for generator in STABILIZER_GENERATORS:
        bit, state = measure_observable(
            state, pauli_string_operator(generator), rng)
        bits.append(bit)
    return Syndrome.from_bits(bits), state


def correct(state, syndrome):
    """Apply the recovery Pauli assigned to ``syndrome``."""
    if syndrome.is_trivial():
        return state
    return apply_pauli_string(state, CORRECTION_TABLE[syndrome])


def measure_logical(state, rng, basis='Z'):
    """Projective measurement of the logical observable; returns the bit."""
    observable = pauli_string_operator(BASES[_check_basis(basis)])
    bit, _ = measure_observable(state, observable, rng)
    return bit


def decode_block(state, pattern, rng, basis='Z'):
    """Undo ``pattern``, extract the syndrome, correct, read the bit.

    :returns: ``(bit, syndrome)``
    """
    unpermuted = apply_permutation(state, invert(pattern))
    syndrome, collapsed = extract_syndrome(unpermuted, rng)
    bit = measure_logical(correct(collapsed, syndrome), rng, basis)
    logger.debug('Decoded block with %s: bit=%d syndrome=%s',
                 pattern, bit, syndrome)
    return bit, syndrome


@functools.lru_cache(maxsize=None)
def _syndrome_projectors():
    identity = np.eye(DIMENSION)
    projectors = []
    for value in range(NUM_SYNDROMES):
        projector = identity
        for bit, generator in zip(Syndrome(value).bits, STABILIZER_GENERATORS):
            sign = -1 if bit else 1
            projector = projector @ (
                identity + sign * pauli_string_operator(generator)) / 2
        projector.setflags(write=False)
        projectors.append(projector)
    return tuple(projectors)


def decode_distribution(state, pattern, basis='Z'):
    """Exact outcome probabilities of :func:`decode_block`.

    :returns: dict ``{(bit, syndrome): probability}`` without null entries.
    """
    amplitudes = apply_permutation(state, invert(pattern)).amplitudes
    logical = pauli_string_operator(BASES[_check_basis(basis)])

    distribution = {}
    for value, projector in enumerate(_syndrome_projectors()):
        syndrome = Syndrome(value)
        projected = projector @ amplitudes
        if np.vdot(projected, projected).real < 1e-15:
            continue
        recovery = pauli_string_operator(CORRECTION_TABLE[syndrome])
        recovered = recovery @ projected
        flipped = logical @ recovered
        for bit, sign in ((0, 1), (1, -1)):
            branch = (recovered + sign * flipped) / 2
            probability = float(np.vdot(branch, branch).real)
            if probability > 1e-15:
                distribution[bit, syndrome] = probability
    return distribution
