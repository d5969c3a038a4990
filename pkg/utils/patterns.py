"""
Measurement patterns for the one-qubit rotation, the two-row CNOT and the
identity wire.

A Pattern is expressed in pattern-local coordinates: local round k (column)
and local row r (0 for single-row patterns; 0 = control, 1 = target for the
CNOT). The compiler maps these onto absolute rounds and rows. Every rule here
is plain GF(2) arithmetic so the same tables serve as the compiler's source
and as the test oracle.

Pattern qubit numbering for the CNOT follows the usual labelling: control
row measurements are m0..m5, target row measurements m6..m11.
"""
from dataclasses import dataclass, field

import numpy as np

from utils.exceptions import CircuitError

HALF_PI = np.pi / 2

# Depth of the per-row measurement shift register.
SHIFT_DEPTH = 3

PRE_GATE_STORE = "store"
PRE_GATE_COMMUTE = "commute"


# ----------------------------
# Gate specifications
# ----------------------------

@dataclass(frozen=True)
class OneQubit:
    """U = R_x(zeta) R_z(eta) R_x(xi) on one row."""
    row: int
    xi: float
    eta: float
    zeta: float

    @property
    def rows(self):
        return (self.row,)


@dataclass(frozen=True)
class Cnot:
    control: int
    target: int

    def __post_init__(self):
        if abs(self.control - self.target) != 1:
            raise CircuitError(
                f"CNOT rows must be adjacent, got control {self.control} target {self.target}"
            )

    @property
    def rows(self):
        return (self.control, self.target)

    @property
    def upper(self):
        return min(self.control, self.target)


@dataclass(frozen=True)
class Identity:
    row: int
    length: int = 4

    def __post_init__(self):
        if self.length < 2 or self.length % 2:
            raise CircuitError(f"identity length must be even and >= 2, got {self.length}")

    @property
    def rows(self):
        return (self.row,)


# ----------------------------
# Byproducts
# ----------------------------

@dataclass(frozen=True)
class ByproductPair:
    """Byproduct operator Z^z X^x on one row."""
    x: int = 0
    z: int = 0

    def __post_init__(self):
        if self.x not in (0, 1) or self.z not in (0, 1):
            raise ValueError(f"byproduct bits must be 0/1, got x={self.x} z={self.z}")

    def flip(self, x=0, z=0):
        return ByproductPair(self.x ^ (x & 1), self.z ^ (z & 1))

    def label(self):
        """Two characters 'xz', z printed last."""
        return f"{self.x}{self.z}"

    @classmethod
    def from_label(cls, text):
        if len(text) != 2 or any(c not in "01" for c in text):
            raise ValueError(f"byproduct label must be two bits 'xz', got {text!r}")
        return cls(int(text[0]), int(text[1]))


def u_byproduct(b, m0, m1, m2, m3):
    """Byproduct after the one-qubit pattern: z' = z+m0+m2, x' = x+m1+m3."""
    return ByproductPair(b.x ^ m1 ^ m3, b.z ^ m0 ^ m2)


def u_adaptive(x, z, m0, m1, m2):
    """Sign bits s0..s3 of the one-qubit pattern given the stored byproduct (x, z)."""
    return (0, m0 ^ z, m1 ^ x, m0 ^ m2 ^ z)


def cnot_byproduct(bc, bt, m):
    """
    Byproducts after the two-row CNOT pattern.

    Args:
        bc: control-row ByproductPair entering the pattern (already commuted)
        bt: target-row ByproductPair entering the pattern
        m: the twelve outcomes, m[0..5] on the control row, m[6..11] on the target

    Returns:
        (control ByproductPair, target ByproductPair)
    """
    m = [int(v) for v in m]
    if len(m) != 12:
        raise ValueError(f"CNOT pattern has 12 measured qubits, got {len(m)} outcomes")
    x_c = bc.x ^ m[1] ^ m[2] ^ m[4] ^ m[5]
    z_c = bc.z ^ 1 ^ m[0] ^ m[2] ^ m[3] ^ m[4] ^ m[6] ^ m[8]
    x_t = bt.x ^ m[1] ^ m[2] ^ m[7] ^ m[9] ^ m[11]
    z_t = bt.z ^ m[6] ^ m[8] ^ m[10]
    return ByproductPair(x_c, z_c), ByproductPair(x_t, z_t)


def cnot_commutation(bc, bt):
    """Move byproducts in front of a CNOT past it: x_t ^= x_c, z_c ^= z_t."""
    return ByproductPair(bc.x, bc.z ^ bt.z), ByproductPair(bt.x ^ bc.x, bt.z)


def identity_byproduct(b, outcomes):
    """z picks up even-indexed outcomes, x picks up odd-indexed ones."""
    x, z = b.x, b.z
    for k, m in enumerate(outcomes):
        if k % 2:
            x ^= m
        else:
            z ^= m
    return ByproductPair(x, z)


# ----------------------------
# Pattern tables
# ----------------------------

@dataclass(frozen=True)
class AdaptiveRule:
    """
    s_k = XOR of m_j for j in `rounds`, plus stored x and/or stored z.

    `rounds` are local rounds of the same row, strictly before k.
    """
    rounds: tuple = ()
    stored_x: bool = False
    stored_z: bool = False

    @property
    def empty(self):
        return not self.rounds and not self.stored_x and not self.stored_z

    def evaluate(self, outcomes, stored):
        s = 0
        for j in self.rounds:
            s ^= outcomes[j]
        if self.stored_x:
            s ^= stored.x
        if self.stored_z:
            s ^= stored.z
        return s


NO_ADAPTATION = AdaptiveRule()


@dataclass(frozen=True)
class Pattern:
    """
    Rule tables of one measurement pattern.

    All per-row tables are indexed [local_row][local_round]. x_sources and
    z_sources hold the local rows whose measurement of that round is XORed
    into this row's x or z byproduct. constants maps (row, round) to the
    (x, z) constant added at that round's reset edge.
    """
    name: str
    length: int
    theta: tuple
    basis_select: tuple
    x_sources: tuple
    z_sources: tuple
    adaptive: tuple
    constants: dict = field(default_factory=dict)
    vertical_links: frozenset = frozenset()
    pre_gate: str = None

    @property
    def n_rows(self):
        return len(self.theta)

    def validate(self):
        """Check table shapes and adaptive causality."""
        for table in (self.theta, self.basis_select, self.x_sources, self.z_sources, self.adaptive):
            if len(table) != self.n_rows or any(len(row) != self.length for row in table):
                raise CircuitError(f"{self.name}: rule table shape does not match {self.n_rows}x{self.length}")
        for r in range(self.n_rows):
            for k, rule in enumerate(self.adaptive[r]):
                for j in rule.rounds:
                    if not 0 <= j < k:
                        raise CircuitError(
                            f"{self.name}: s of round {k} on row {r} depends on round {j}"
                        )
                    if k - 1 - j >= SHIFT_DEPTH:
                        raise CircuitError(
                            f"{self.name}: round {j} has left the shift register by round {k}"
                        )
        return self

    def apply_byproducts(self, entering, outcomes):
        """
        Run the byproduct rules of this pattern.

        Args:
            entering: list of ByproductPair per local row, after any pre-gate action
            outcomes: outcomes[r][k] per local row and round

        Returns:
            list of ByproductPair per local row
        """
        x = [b.x for b in entering]
        z = [b.z for b in entering]
        for k in range(self.length):
            for r in range(self.n_rows):
                for src in self.x_sources[r][k]:
                    x[r] ^= outcomes[src][k]
                for src in self.z_sources[r][k]:
                    z[r] ^= outcomes[src][k]
                cx, cz = self.constants.get((r, k), (0, 0))
                x[r] ^= cx
                z[r] ^= cz
        return [ByproductPair(a, b) for a, b in zip(x, z)]

    def adaptive_signs(self, outcomes, stored):
        """s bits per row and round given outcomes and the stored byproducts."""
        return [
            [rule.evaluate(outcomes[r], stored[r]) for rule in self.adaptive[r]]
            for r in range(self.n_rows)
        ]


def _alternating_sources(length):
    x = tuple(frozenset({0}) if k % 2 else frozenset() for k in range(length))
    z = tuple(frozenset() if k % 2 else frozenset({0}) for k in range(length))
    return x, z


def one_qubit_pattern(xi, eta, zeta):
    """Four-round pattern realising R_x(zeta) R_z(eta) R_x(xi)."""
    x_src, z_src = _alternating_sources(4)
    adaptive = (
        NO_ADAPTATION,
        AdaptiveRule(rounds=(0,), stored_z=True),
        AdaptiveRule(rounds=(1,), stored_x=True),
        AdaptiveRule(rounds=(0, 2), stored_z=True),
    )
    return Pattern(
        name="U",
        length=4,
        theta=((0.0, -xi, -eta, -zeta),),
        basis_select=((1, 1, 1, 1),),
        x_sources=(x_src,),
        z_sources=(z_src,),
        adaptive=(adaptive,),
        pre_gate=PRE_GATE_STORE,
    ).validate()


def identity_pattern(length=4):
    """Even-length wire; every measurement is X (theta = 0)."""
    if length < 2 or length % 2:
        raise CircuitError(f"identity length must be even and >= 2, got {length}")
    x_src, z_src = _alternating_sources(length)
    return Pattern(
        name="Id",
        length=length,
        theta=((0.0,) * length,),
        basis_select=((1,) * length,),
        x_sources=(x_src,),
        z_sources=(z_src,),
        adaptive=((NO_ADAPTATION,) * length,),
    ).validate()


# CNOT source tables: local row 0 = control, 1 = target.
_CNOT_X = (
    ((), (0,), (0,), (), (0,), (0,)),
    ((), (1, 0), (0,), (1,), (), (1,)),
)
_CNOT_Z = (
    ((0, 1), (), (0, 1), (0,), (0,), ()),
    ((1,), (), (1,), (), (1,), ()),
)

# Local column of the single vertical link.
CNOT_LINK_ROUND = 3


def cnot_pattern():
    """Six-round, two-row CNOT; no adaptive settings."""
    def as_sets(table):
        return tuple(tuple(frozenset(srcs) for srcs in row) for row in table)

    return Pattern(
        name="CNOT",
        length=6,
        theta=(
            (0.0, HALF_PI, HALF_PI, 0.0, HALF_PI, HALF_PI),
            (0.0,) * 6,
        ),
        basis_select=((1,) * 6, (1,) * 6),
        x_sources=as_sets(_CNOT_X),
        z_sources=as_sets(_CNOT_Z),
        adaptive=((NO_ADAPTATION,) * 6, (NO_ADAPTATION,) * 6),
        constants={(0, 2): (0, 1)},
        vertical_links=frozenset({(CNOT_LINK_ROUND, 0)}),
        pre_gate=PRE_GATE_COMMUTE,
    ).validate()


def pattern_for(gate):
    """Pattern of a GateSpec."""
    if isinstance(gate, OneQubit):
        return one_qubit_pattern(gate.xi, gate.eta, gate.zeta)
    if isinstance(gate, Cnot):
        return cnot_pattern()
    if isinstance(gate, Identity):
        return identity_pattern(gate.length)
    raise CircuitError(f"unknown gate specification {gate!r}")


def pattern_length(gate):
    if isinstance(gate, OneQubit):
        return 4
    if isinstance(gate, Cnot):
        return 6
    if isinstance(gate, Identity):
        return gate.length
    raise CircuitError(f"unknown gate specification {gate!r}")
