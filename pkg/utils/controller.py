"""
Functional emulator of the per-row control unit.

Each round every row sees three clock edges in order:
    X_p  latch the round's 16-bit program word
    X_s  sample the measurement outcome, shift it into the 3-bit register,
         update the byproduct registers from the B masks and register the
         adaptive output s (consumed by the NEXT round's measurement)
    X_r  act on the C field: commutation correction, constant insertion,
         byproduct store

Program word layout (bit 15 first):
    C[4:0] | A_b[1:0] | A_m[0..2] | B_x[2:0] | B_z[2:0]
A_b bit 1 selects x_s and bit 0 selects z_s. A_m slot 0 (most recent
measurement) is the field's top bit. In B_x/B_z bit 2 is the row above
(row i-1), bit 1 the current row and bit 0 the row below (row i+1).
"""
from dataclasses import dataclass, field
from typing import NamedTuple

from utils.exceptions import InvalidProgramError
from utils.patterns import ByproductPair, SHIFT_DEPTH

WORD_BITS = 16

C_WIDTH, A_B_WIDTH, A_M_WIDTH, B_WIDTH = 5, 2, 3, 3
C_SHIFT, A_B_SHIFT, A_M_SHIFT, B_X_SHIFT, B_Z_SHIFT = 11, 9, 6, 3, 0

# C field bits
C_STORE = 0b00001
C_COMMUTE = 0b00010
C_CONTROL = 0b00100          # with C_CONSTANTS: constant into z
C_PARTNER_ABOVE = 0b01000    # with C_CONSTANTS: constant into x
C_CONSTANTS = 0b10000

# A_b bits
A_B_X = 0b10
A_B_Z = 0b01

# B mask bits
ABOVE = 0b100
CURRENT = 0b010
BELOW = 0b001


def a_m_bit(slot):
    """A_m field bit selecting shift-register slot `slot` (0 = most recent)."""
    if not 0 <= slot < SHIFT_DEPTH:
        raise ValueError(f"shift register slot must be 0..{SHIFT_DEPTH - 1}, got {slot}")
    return 1 << (SHIFT_DEPTH - 1 - slot)


@dataclass(frozen=True)
class ProgramWord:
    c: int = 0
    a_b: int = 0
    a_m: int = 0
    b_x: int = 0
    b_z: int = 0

    def __post_init__(self):
        for name, width in (("c", C_WIDTH), ("a_b", A_B_WIDTH), ("a_m", A_M_WIDTH),
                            ("b_x", B_WIDTH), ("b_z", B_WIDTH)):
            value = getattr(self, name)
            if not 0 <= value < (1 << width):
                raise ValueError(f"field {name}={value} does not fit in {width} bits")

    @property
    def raw(self):
        return encode(self)

    def hex(self):
        return f"{self.raw:04x}"

    @property
    def stores(self):
        return bool(self.c & C_STORE)

    @property
    def commutes(self):
        return bool(self.c & C_COMMUTE)

    @property
    def adds_constants(self):
        return bool(self.c & C_CONSTANTS)

    @property
    def is_control(self):
        return bool(self.c & C_CONTROL)

    @property
    def partner_above(self):
        return bool(self.c & C_PARTNER_ABOVE)

    def selects_slot(self, slot):
        return bool(self.a_m & a_m_bit(slot))


ZERO_WORD = ProgramWord()


def encode(word):
    """Pack a ProgramWord into its 16-bit integer."""
    return (
        (word.c << C_SHIFT)
        | (word.a_b << A_B_SHIFT)
        | (word.a_m << A_M_SHIFT)
        | (word.b_x << B_X_SHIFT)
        | (word.b_z << B_Z_SHIFT)
    )


def decode(raw):
    """Unpack a 16-bit integer into a ProgramWord."""
    if not 0 <= raw < (1 << WORD_BITS):
        raise ValueError(f"program word {raw!r} is not a 16-bit value")
    return ProgramWord(
        c=(raw >> C_SHIFT) & ((1 << C_WIDTH) - 1),
        a_b=(raw >> A_B_SHIFT) & ((1 << A_B_WIDTH) - 1),
        a_m=(raw >> A_M_SHIFT) & ((1 << A_M_WIDTH) - 1),
        b_x=(raw >> B_X_SHIFT) & ((1 << B_WIDTH) - 1),
        b_z=(raw >> B_Z_SHIFT) & ((1 << B_WIDTH) - 1),
    )


def as_word(word):
    if isinstance(word, ProgramWord):
        return word
    return decode(int(word))


# ----------------------------
# Per-row state and clock events
# ----------------------------

_IDLE, _LOADED, _SAMPLED = "idle", "loaded", "sampled"


@dataclass
class ControllerState:
    shift_register: list = field(default_factory=lambda: [0] * SHIFT_DEPTH)
    byproduct: ByproductPair = ByproductPair()
    stored: ByproductPair = ByproductPair()
    s_out: int = 0
    word: ProgramWord = ZERO_WORD
    phase: str = _IDLE

    def reset(self):
        self.shift_register = [0] * SHIFT_DEPTH
        self.byproduct = ByproductPair()
        self.stored = ByproductPair()
        self.s_out = 0
        self.word = ZERO_WORD
        self.phase = _IDLE


def new_array(n_rows):
    return [ControllerState() for _ in range(n_rows)]


@dataclass(frozen=True)
class Xp:
    word: ProgramWord


@dataclass(frozen=True)
class Xs:
    m: int


@dataclass(frozen=True)
class Xr:
    pass


def _violation(strict, message):
    if strict:
        raise InvalidProgramError(message)


def on_xp(state, word, strict=False):
    """Latch the program word; no register changes."""
    if state.phase != _IDLE:
        _violation(strict, f"X_p while the previous word is still {state.phase}")
    state.word = as_word(word)
    state.phase = _LOADED
    return state


def _mask_sum(mask, above, current, below, strict):
    total = 0
    for bit, value, name in ((ABOVE, above, "above"), (CURRENT, current, "current"), (BELOW, below, "below")):
        if not mask & bit:
            continue
        if value is None:
            if strict:
                raise InvalidProgramError(f"B mask reads the {name} row, which does not exist")
            continue
        total ^= value
    return total


def on_xs(state, m, above=None, below=None, strict=False):
    """
    Sample the measurement outcome and register the adaptive output.

    Args:
        m: this row's outcome
        above, below: neighbour outcomes of the same round, None at the array edge
    """
    if state.phase != _LOADED:
        _violation(strict, "X_s without a program word loaded this round")
        if state.phase == _IDLE:
            state.word = ZERO_WORD
    word = state.word
    m = int(m) & 1
    state.shift_register = [m] + state.shift_register[:-1]
    state.byproduct = state.byproduct.flip(
        x=_mask_sum(word.b_x, above, m, below, strict),
        z=_mask_sum(word.b_z, above, m, below, strict),
    )
    s = 0
    for slot in range(SHIFT_DEPTH):
        if word.selects_slot(slot):
            s ^= state.shift_register[slot]
    if word.a_b & A_B_X:
        s ^= state.stored.x
    if word.a_b & A_B_Z:
        s ^= state.stored.z
    state.s_out = s
    state.phase = _SAMPLED
    return state


def on_xr(states, words=None, strict=False):
    """
    Apply the C-field actions of every row.

    Per row, in order: commutation correction against the partner row (using
    the registers as they were before this edge), constant insertion, store.
    """
    if words is not None:
        if len(words) != len(states):
            raise InvalidProgramError(f"{len(words)} words for {len(states)} rows")
        words = [as_word(w) for w in words]
    else:
        words = [st.word for st in states]

    before = [st.byproduct for st in states]
    for row, (state, word) in enumerate(zip(states, words)):
        if state.phase != _SAMPLED:
            _violation(strict, f"row {row}: X_r before X_s")
        if word.commutes and word.adds_constants:
            raise InvalidProgramError(
                f"row {row}: word {word.hex()} sets both commutation and constant bits"
            )
        b = state.byproduct
        if word.commutes:
            partner = row - 1 if word.partner_above else row + 1
            if not 0 <= partner < len(states):
                raise InvalidProgramError(f"row {row}: commutation partner {partner} out of range")
            other = before[partner]
            if word.is_control:
                b = b.flip(z=other.z)
            else:
                b = b.flip(x=other.x)
        if word.adds_constants:
            b = b.flip(x=int(word.partner_above), z=int(word.is_control))
        state.byproduct = b
        if word.stores:
            state.stored = b
        state.phase = _IDLE
    return states


def apply_event(states, row, event, neighbours=(None, None), strict=False):
    """Dispatch a single ClockEvent to one row (X_r acts on the whole array)."""
    if isinstance(event, Xp):
        on_xp(states[row], event.word, strict)
    elif isinstance(event, Xs):
        on_xs(states[row], event.m, neighbours[0], neighbours[1], strict)
    elif isinstance(event, Xr):
        on_xr(states, strict=strict)
    else:
        raise TypeError(f"unknown clock event {event!r}")
    return states


class RoundOutput(NamedTuple):
    s: list            # registered adaptive outputs, for the next round
    byproducts: list   # after X_s, before X_r
    stored: list       # before X_r


def step_round(states, words, measurements, strict=False):
    """
    Run X_p, X_s and X_r for every row of the array.

    Returns:
        RoundOutput with the s column and the pre-X_r register snapshot
    """
    n = len(states)
    if len(words) != n or len(measurements) != n:
        raise InvalidProgramError(
            f"array has {n} rows but got {len(words)} words and {len(measurements)} outcomes"
        )
    for state, word in zip(states, words):
        on_xp(state, word, strict)
    for row, state in enumerate(states):
        above = measurements[row - 1] if row > 0 else None
        below = measurements[row + 1] if row + 1 < n else None
        on_xs(state, measurements[row], above, below, strict)
    output = RoundOutput(
        s=[st.s_out for st in states],
        byproducts=[st.byproduct for st in states],
        stored=[st.stored for st in states],
    )
    on_xr(states, strict=strict)
    return output


# ----------------------------
# Replay
# ----------------------------

class ReplayResult(NamedTuple):
    s: list            # [row][round]
    byproducts: list   # [row][round], pre-X_r
    stored: list       # [row][round], pre-X_r
    final: list        # ByproductPair per row after the last X_r


def replay(words, outcomes, strict=False):
    """
    Drive a fresh controller array with fixed words and outcomes.

    Args:
        words: words[row][round] (ints or ProgramWords)
        outcomes: outcomes[row][round]
    """
    n_rows = len(words)
    if len(outcomes) != n_rows:
        raise InvalidProgramError(f"{n_rows} word rows but {len(outcomes)} outcome rows")
    n_rounds = len(words[0]) if n_rows else 0
    for row in range(n_rows):
        if len(words[row]) != n_rounds or len(outcomes[row]) != n_rounds:
            raise InvalidProgramError(f"row {row} does not have {n_rounds} rounds")

    states = new_array(n_rows)
    s = [[] for _ in range(n_rows)]
    b = [[] for _ in range(n_rows)]
    sb = [[] for _ in range(n_rows)]
    for k in range(n_rounds):
        out = step_round(
            states,
            [words[r][k] for r in range(n_rows)],
            [outcomes[r][k] for r in range(n_rows)],
            strict,
        )
        for r in range(n_rows):
            s[r].append(out.s[r])
            b[r].append(out.byproducts[r])
            sb[r].append(out.stored[r])
    return ReplayResult(s, b, sb, [st.byproduct for st in states])


class Mismatch(NamedTuple):
    round: int
    row: int
    field: str
    expected: str
    got: str


def replay_trace(records, strict=False):
    """
    Testbench check: feed a trace's (P, m) stimulus to a fresh controller
    array and compare the s, b and sb it produces with the recorded values.

    Returns:
        list of Mismatch, empty when the trace is consistent
    """
    records = sorted(records, key=lambda r: (r.round, r.row))
    if not records:
        return []
    n_rows = max(r.row for r in records) + 1
    n_rounds = max(r.round for r in records) + 1
    table = {(r.round, r.row): r for r in records}
    missing = [(k, i) for k in range(n_rounds) for i in range(n_rows) if (k, i) not in table]
    if missing:
        raise InvalidProgramError(f"trace has no record for (round, row) {missing[0]}")

    words = [[table[(k, i)].word for k in range(n_rounds)] for i in range(n_rows)]
    outcomes = [[table[(k, i)].m for k in range(n_rounds)] for i in range(n_rows)]
    result = replay(words, outcomes, strict)

    mismatches = []
    for k in range(n_rounds):
        for i in range(n_rows):
            rec = table[(k, i)]
            checks = (
                ("s", str(rec.s), str(result.s[i][k])),
                ("b", rec.b.label(), result.byproducts[i][k].label()),
                ("sb", rec.sb.label(), result.stored[i][k].label()),
            )
            for name, expected, got in checks:
                if expected != got:
                    mismatches.append(Mismatch(k, i, name, expected, got))
    return mismatches
