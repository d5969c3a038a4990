"""Exception types shared by the simulator, controller and compiler."""


class MBQCError(Exception):
    """Base class for every error raised by this package."""


class ResourceLimitError(MBQCError):
    """A state would exceed the configured amplitude or vertex cap."""

    def __init__(self, requested, cap, what="amplitudes"):
        self.requested = requested
        self.cap = cap
        super().__init__(f"{requested:,} {what} requested, cap is {cap:,}")


class ContractViolation(MBQCError):
    """A numerical precondition or postcondition did not hold."""


class InvalidProgramError(MBQCError):
    """A program word (or the order of clock events) is not executable."""


class CircuitError(MBQCError, ValueError):
    """A circuit or gate specification is malformed."""


class ParseError(MBQCError, ValueError):
    """A text input (circuit IR, trace, outcome table) could not be parsed."""

    def __init__(self, message, line=None, column=None, source=None):
        self.line = line
        self.column = column
        self.source = source
        where = []
        if source:
            where.append(str(source))
        if line is not None:
            where.append(f"line {line}")
        if column is not None:
            where.append(f"column {column}")
        prefix = ", ".join(where)
        super().__init__(f"{prefix}: {message}" if prefix else message)


class ImpossibleBranchError(MBQCError):
    """A forced measurement outcome has (numerically) zero probability."""

    def __init__(self, round_index, row, outcome, probability):
        self.round_index = round_index
        self.row = row
        self.outcome = outcome
        self.probability = probability
        super().__init__(
            f"round {round_index}, row {row}: forced outcome {outcome} "
            f"has probability {probability:.3e}"
        )


class InfeasibleTimingError(MBQCError):
    """The logic delay leaves no time for the analog stages."""


# Process exit codes of the command-line scripts
EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_IMPOSSIBLE_BRANCH = 3
EXIT_INFEASIBLE_TIMING = 4


def exit_code(exc):
    """Exit code for an exception escaping a command."""
    if isinstance(exc, ImpossibleBranchError):
        return EXIT_IMPOSSIBLE_BRANCH
    if isinstance(exc, InfeasibleTimingError):
        return EXIT_INFEASIBLE_TIMING
    if isinstance(exc, (ValueError, OSError, InvalidProgramError, ResourceLimitError)):
        return EXIT_USAGE
    return EXIT_FAILED
