"""Exception hierarchy.

Every error carries an ``exit_code`` so the CLI can map failures onto its
documented exit codes: 1 usage, 2 parse/validation, 3 violated precondition
(a theorem hypothesis does not hold for the input), 4 resource cap.
"""


class GibbsGamesError(Exception):
    exit_code = 2


class ValidationError(GibbsGamesError):
    """Malformed or out-of-range input (bad file, bad flag value, bad table)."""

    exit_code = 2


class ParseError(ValidationError):
    """Input file does not conform to the documented schema."""

    exit_code = 2


class CapExceededError(GibbsGamesError):
    """A brute-force operation would enumerate more joint actions than allowed."""

    exit_code = 4

    def __init__(self, needed, cap, what="joint actions"):
        self.needed = needed
        self.cap = cap
        super().__init__(f"{what}: {needed} exceeds cap {cap}")


class PreconditionError(GibbsGamesError):
    """A stated hypothesis of the requested construction does not hold."""

    exit_code = 3


class NotGibbsError(PreconditionError):
    """The candidate potential is not clique-additive over the given graph.

    ``witness`` is a joint action where the recomposition residual is maximal,
    ``residual`` its magnitude.
    """

    def __init__(self, witness, residual, tolerance):
        self.witness = tuple(witness)
        self.residual = float(residual)
        self.tolerance = float(tolerance)
        super().__init__(
            f"not clique-additive over the graph: residual {residual:.3e} "
            f"> {tolerance:.1e} at joint action {self.witness}"
        )


class NotSymmetricError(PreconditionError):
    """A hyperedge-symmetric game was required but tables differ within a hyperedge."""


class NeighborhoodError(PreconditionError):
    """The graph has a node with two adjacent neighbors, so no pairwise reduction exists."""


class NonErgodicError(PreconditionError):
    """The transition kernel is not strictly positive after a full sweep's compositions."""


class InconsistentSchemeError(PreconditionError):
    """The playing scheme is not globally convergent; see the attached report."""

    def __init__(self, report):
        self.report = report
        super().__init__("playing scheme failed the consistency check")


class MissingDifferenceError(PreconditionError):
    """A realized payoff difference has no entry in the transform witness."""


class CycleError(GibbsGamesError):
    """Deterministic best-response play revisited a state and cannot terminate."""

    exit_code = 3

    def __init__(self, state):
        self.state = tuple(state)
        super().__init__(f"best-response play cycles through {self.state}")


class MaxStepsError(GibbsGamesError):
    exit_code = 3
