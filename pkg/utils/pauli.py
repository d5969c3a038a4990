"""
Pauli strings with exactly tracked phases.

A thin layer over stim.PauliString: stim does the multiplication (including
the i factors of X·Y = iZ and friends) and commutation, so products of
correlation operators keep their sign without any floating arithmetic. The
phase is exposed as a power of i, k in 0..3.
"""
import numpy as np
import stim

LETTERS = ("I", "X", "Y", "Z")

# stim indexes Paulis as 0=I, 1=X, 2=Y, 3=Z
_SIGNS = (1, 1j, -1, -1j)
_PHASE_OF_SIGN = {1: 0, 1j: 1, -1: 2, -1j: 3}
_PHASE_TEXT = {0: "+", 1: "+i", 2: "-", 3: "-i"}

MATRICES = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


class PauliString:
    """
    Tensor product of single-qubit Paulis times a phase.

    Args:
        letters: one of I/X/Y/Z per qubit, qubit 0 first
        phase: power of i, reduced modulo 4
    """

    __slots__ = ("_pauli",)

    def __init__(self, letters, phase=0):
        bad = set(letters) - set(LETTERS)
        if bad:
            raise ValueError(f"invalid Pauli letters {sorted(bad)} in {letters!r}")
        pauli = stim.PauliString(len(letters))
        for q, letter in enumerate(letters):
            if letter != "I":
                pauli[q] = letter
        pauli.sign = _SIGNS[phase % 4]
        self._pauli = pauli

    @classmethod
    def _wrap(cls, pauli):
        out = cls.__new__(cls)
        out._pauli = pauli
        return out

    @classmethod
    def identity(cls, n_qubits):
        return cls("I" * n_qubits)

    @classmethod
    def from_terms(cls, n_qubits, terms, phase=0):
        """Build from a {qubit: letter} mapping; unnamed qubits get I."""
        letters = ["I"] * n_qubits
        for qubit, letter in terms.items():
            if not 0 <= qubit < n_qubits:
                raise IndexError(f"qubit {qubit} outside 0..{n_qubits - 1}")
            letters[qubit] = letter
        return cls("".join(letters), phase)

    def to_stim(self):
        """A copy of the underlying stim.PauliString."""
        return self._pauli.copy()

    @property
    def letters(self):
        return "".join(LETTERS[self._pauli[q]] for q in range(len(self._pauli)))

    @property
    def phase(self):
        return _PHASE_OF_SIGN[self._pauli.sign]

    @property
    def n_qubits(self):
        return len(self._pauli)

    @property
    def sign(self):
        """The phase as a complex number."""
        return complex(self._pauli.sign)

    @property
    def is_hermitian(self):
        return self.phase in (0, 2)

    def support(self):
        return {q: p for q, p in enumerate(self.letters) if p != "I"}

    def __mul__(self, other):
        if not isinstance(other, PauliString):
            return NotImplemented
        if other.n_qubits != self.n_qubits:
            raise ValueError(
                f"cannot multiply Pauli strings on {self.n_qubits} and {other.n_qubits} qubits"
            )
        return PauliString._wrap(self._pauli * other._pauli)

    def __neg__(self):
        return PauliString._wrap(-self._pauli)

    def __eq__(self, other):
        if not isinstance(other, PauliString):
            return NotImplemented
        return self._pauli == other._pauli

    def __hash__(self):
        return hash((self.letters, self.phase))

    def commutes_with(self, other):
        return self._pauli.commutes(other._pauli)

    def to_matrix(self):
        """Dense matrix; only sensible for a handful of qubits."""
        out = np.array([[1.0 + 0j]])
        for letter in self.letters:
            out = np.kron(out, MATRICES[letter])
        return self.sign * out

    def label(self, names=None):
        """Readable form such as '-X0 Y2 X3'; `names` relabels qubits."""
        terms = [
            f"{letter}{names[q] if names else q}"
            for q, letter in enumerate(self.letters) if letter != "I"
        ]
        body = " ".join(terms) if terms else "I"
        prefix = _PHASE_TEXT[self.phase]
        return body if prefix == "+" else f"{prefix}{body}"

    def __str__(self):
        return self.label()

    def __repr__(self):
        return f"PauliString({self.letters!r}, phase={self.phase})"


def product(strings):
    """Multiply Pauli strings left to right."""
    strings = list(strings)
    if not strings:
        raise ValueError("product of an empty list of Pauli strings")
    out = strings[0]
    for p in strings[1:]:
        out = out * p
    return out
