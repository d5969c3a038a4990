"""
Dense state-vector engine.

Amplitudes are stored as a flat complex128 array of length 2**n. Qubit 0 is
the most significant bit of the basis index, so |10> on two qubits means
qubit 0 = 1, qubit 1 = 0. Every operation returns a new StateVector; the
input is never modified.

Rotation convention: R_n(a) = exp(-i a n.sigma / 2).
Measurement convention: outcome 1 iff draw < p(1).
"""
from dataclasses import dataclass

import numpy as np

import config
from utils.exceptions import ContractViolation, ResourceLimitError
from utils.pauli import MATRICES, PauliString


@dataclass(frozen=True, eq=False)
class StateVector:
    n_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        if self.amplitudes.shape != (2 ** self.n_qubits,):
            raise ValueError(
                f"{self.n_qubits} qubits need {2 ** self.n_qubits} amplitudes, "
                f"got shape {self.amplitudes.shape}"
            )

    def norm(self):
        return float(np.sum(np.abs(self.amplitudes) ** 2))

    def probabilities(self):
        return np.abs(self.amplitudes) ** 2

    def tensor(self):
        """Amplitudes viewed as an n-index tensor, axis q = qubit q."""
        return self.amplitudes.reshape((2,) * self.n_qubits)

    def copy(self):
        return StateVector(self.n_qubits, self.amplitudes.copy())

    def __len__(self):
        return self.amplitudes.shape[0]


# ----------------------------
# Construction
# ----------------------------

def _check_cap(n_qubits, max_amplitudes):
    if n_qubits < 1:
        raise ValueError(f"need at least one qubit, got {n_qubits}")
    if 2 ** n_qubits > max_amplitudes:
        raise ResourceLimitError(2 ** n_qubits, max_amplitudes)


def new_plus_state(n, max_amplitudes=config.MAX_AMPLITUDES):
    """|+>^n: every amplitude equals 2**(-n/2)."""
    _check_cap(n, max_amplitudes)
    amps = np.full(2 ** n, 2.0 ** (-n / 2), dtype=complex)
    return StateVector(n, amps)


def basis_state(bits, max_amplitudes=config.MAX_AMPLITUDES):
    """Computational basis state; bits[0] is qubit 0."""
    bits = [int(b) for b in bits]
    _check_cap(len(bits), max_amplitudes)
    index = 0
    for b in bits:
        if b not in (0, 1):
            raise ValueError(f"basis bits must be 0/1, got {b}")
        index = (index << 1) | b
    amps = np.zeros(2 ** len(bits), dtype=complex)
    amps[index] = 1.0
    return StateVector(len(bits), amps)


def from_amplitudes(amplitudes, normalize=False):
    amps = np.asarray(amplitudes, dtype=complex).reshape(-1)
    n = int(round(np.log2(amps.shape[0]))) if amps.shape[0] else 0
    if n < 1 or 2 ** n != amps.shape[0]:
        raise ValueError(f"amplitude count {amps.shape[0]} is not a power of two >= 2")
    norm = float(np.sum(np.abs(amps) ** 2))
    if normalize:
        if norm == 0.0:
            raise ContractViolation("cannot normalise the zero vector")
        amps = amps / np.sqrt(norm)
    elif abs(norm - 1.0) > config.NORM_TOL * 100:
        raise ContractViolation(f"amplitudes have norm {norm:.15f}, expected 1")
    return StateVector(n, amps)


def random_state(n, rng):
    """Haar-ish random state from complex Gaussian amplitudes."""
    amps = rng.normal(size=2 ** n) + 1j * rng.normal(size=2 ** n)
    return from_amplitudes(amps, normalize=True)


def kron(a, b, max_amplitudes=config.MAX_AMPLITUDES):
    """a ⊗ b; the qubits of b are appended after those of a."""
    _check_cap(a.n_qubits + b.n_qubits, max_amplitudes)
    return StateVector(a.n_qubits + b.n_qubits, np.kron(a.amplitudes, b.amplitudes))


# ----------------------------
# Gates
# ----------------------------

def _check_index(s, q):
    if not isinstance(q, (int, np.integer)) or not 0 <= q < s.n_qubits:
        raise IndexError(f"qubit {q} outside 0..{s.n_qubits - 1}")


def apply_matrix(s, q, matrix):
    """Apply a 2x2 matrix to qubit q."""
    _check_index(s, q)
    psi = np.tensordot(matrix, s.tensor(), axes=([1], [q]))
    psi = np.moveaxis(psi, 0, q)
    return StateVector(s.n_qubits, np.ascontiguousarray(psi).reshape(-1))


def rx_matrix(angle):
    c, sn = np.cos(angle / 2), np.sin(angle / 2)
    return np.array([[c, -1j * sn], [-1j * sn, c]], dtype=complex)


def ry_matrix(angle):
    c, sn = np.cos(angle / 2), np.sin(angle / 2)
    return np.array([[c, -sn], [sn, c]], dtype=complex)


def rz_matrix(angle):
    return np.array([[np.exp(-0.5j * angle), 0], [0, np.exp(0.5j * angle)]], dtype=complex)


def apply_rx(s, q, angle):
    return apply_matrix(s, q, rx_matrix(angle))


def apply_ry(s, q, angle):
    return apply_matrix(s, q, ry_matrix(angle))


def apply_rz(s, q, angle):
    return apply_matrix(s, q, rz_matrix(angle))


def apply_x(s, q):
    return apply_matrix(s, q, MATRICES["X"])


def apply_y(s, q):
    return apply_matrix(s, q, MATRICES["Y"])


def apply_z(s, q):
    return apply_matrix(s, q, MATRICES["Z"])


def _pair_index(s, q1, q2):
    _check_index(s, q1)
    _check_index(s, q2)
    if q1 == q2:
        raise ValueError(f"two-qubit gate needs distinct qubits, got {q1} twice")


def _slice(n, fixed):
    index = [slice(None)] * n
    for q, value in fixed.items():
        index[q] = value
    return tuple(index)


def apply_cz(s, q1, q2):
    """Negate every amplitude where both qubits are 1."""
    _pair_index(s, q1, q2)
    psi = s.tensor().copy()
    psi[_slice(s.n_qubits, {q1: 1, q2: 1})] *= -1
    return StateVector(s.n_qubits, psi.reshape(-1))


def apply_cnot(s, control, target):
    """Flip the target wherever the control is 1 (|10> <-> |11>)."""
    _pair_index(s, control, target)
    psi = s.tensor().copy()
    one_zero = _slice(s.n_qubits, {control: 1, target: 0})
    one_one = _slice(s.n_qubits, {control: 1, target: 1})
    psi[one_zero], psi[one_one] = s.tensor()[one_one].copy(), s.tensor()[one_zero].copy()
    return StateVector(s.n_qubits, psi.reshape(-1))


def apply_pauli(s, p):
    """Apply a PauliString including its phase."""
    if p.n_qubits != s.n_qubits:
        raise ValueError(f"Pauli string on {p.n_qubits} qubits, state has {s.n_qubits}")
    out = s
    for q, letter in p.support().items():
        out = apply_matrix(out, q, MATRICES[letter])
    if p.phase:
        out = StateVector(out.n_qubits, out.amplitudes * p.sign)
    return out


# ----------------------------
# Measurement
# ----------------------------

def branch_probability(s, q, outcome):
    _check_index(s, q)
    branch = s.tensor()[_slice(s.n_qubits, {q: outcome})]
    return float(np.sum(np.abs(branch) ** 2))


def project_z(s, q, outcome):
    """
    Project qubit q onto |outcome> and renormalise.

    Returns:
        (probability of the outcome, collapsed state)
    """
    p = branch_probability(s, q, outcome)
    if p == 0.0:
        raise ContractViolation(f"qubit {q} has zero weight on outcome {outcome}")
    psi = s.tensor().copy()
    psi[_slice(s.n_qubits, {q: 1 - outcome})] = 0.0
    return p, StateVector(s.n_qubits, psi.reshape(-1) / np.sqrt(p))


def measure_z(s, q, draw):
    """
    Computational-basis measurement driven by a uniform draw in [0, 1).

    Returns:
        (outcome bit, collapsed state)
    """
    if not 0.0 <= draw < 1.0:
        raise ValueError(f"draw must lie in [0, 1), got {draw}")
    p0 = branch_probability(s, q, 0)
    p1 = branch_probability(s, q, 1)
    total = p0 + p1
    if total < config.NORM_TOL:
        raise ContractViolation(f"state has no weight on either branch of qubit {q}")
    outcome = 1 if draw < p1 / total else 0
    _, collapsed = project_z(s, q, outcome)
    return outcome, collapsed


def rotate_to_equator_basis(s, q, phi):
    """R_z(pi/2 - phi) then R_x(pi/2): maps |+_phi> to |0> and |-_phi> to |1>."""
    return apply_rx(apply_rz(s, q, np.pi / 2 - phi), q, np.pi / 2)


def measure_in_equator(s, q, phi, draw):
    """XY-plane measurement at angle phi; outcome 0 is (|0> + e^{i phi}|1>)/sqrt 2."""
    return measure_z(rotate_to_equator_basis(s, q, phi), q, draw)


def remove_qubit(s, q):
    """
    Drop a qubit that is in |0> or |1> as a product factor.

    Raises:
        ContractViolation: if both branches carry weight above the entanglement
            tolerance (the qubit is not a computational-basis factor).
    """
    _check_index(s, q)
    if s.n_qubits == 1:
        raise ValueError("cannot remove the last qubit of a state")
    psi = s.tensor()
    zero = psi[_slice(s.n_qubits, {q: 0})]
    one = psi[_slice(s.n_qubits, {q: 1})]
    w0 = float(np.sum(np.abs(zero) ** 2))
    w1 = float(np.sum(np.abs(one) ** 2))
    kept, residual = (zero, w1) if w0 >= w1 else (one, w0)
    if residual > config.ENTANGLEMENT_TOL:
        raise ContractViolation(
            f"qubit {q} is not in a computational basis state (residual weight {residual:.3e})"
        )
    amps = np.ascontiguousarray(kept).reshape(-1)
    amps = amps / np.sqrt(np.sum(np.abs(amps) ** 2))
    return StateVector(s.n_qubits - 1, amps)


def remove_leading_qubits(s, count):
    """Remove qubits 0..count-1, each of which must already be collapsed."""
    out = s
    for _ in range(count):
        out = remove_qubit(out, 0)
    return out


# ----------------------------
# Comparison
# ----------------------------

def inner(a, b):
    if a.n_qubits != b.n_qubits:
        raise ValueError(f"dimension mismatch: {a.n_qubits} vs {b.n_qubits} qubits")
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def expectation(s, p):
    """<psi|P|psi>; must be real to within the tolerance."""
    if not isinstance(p, PauliString):
        raise TypeError(f"expected a PauliString, got {type(p).__name__}")
    value = inner(s, apply_pauli(s, p))
    if abs(value.imag) > config.EXPECTATION_IMAG_TOL:
        raise ContractViolation(
            f"expectation of {p} has imaginary part {value.imag:.3e}"
        )
    return value.real


def fidelity_up_to_phase(a, b):
    """|<a|b>|, clipped into [0, 1]; 1 means equal up to a global phase."""
    return float(min(1.0, abs(inner(a, b))))
