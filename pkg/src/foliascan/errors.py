"""Exception hierarchy shared by all foliascan modules."""


class FoliascanError(Exception):
    """Base class for all errors raised by this package."""


# --- mesh construction / topology ---

class DegenerateFace(FoliascanError):
    """A face has (near-)zero area and was rejected."""


class NonManifoldEdge(FoliascanError):
    """An edge is shared by more than two faces, or inconsistently oriented."""


class NotDiskTopology(FoliascanError):
    """The mesh is not a single patch with exactly one boundary loop."""


class IndexOutOfRange(FoliascanError):
    """A face references a vertex index outside the vertex array."""


# --- parametrization / foliation ---

class SolverFailure(FoliascanError):
    """The parametrization linear system could not be solved validly."""


class OutsideDomain(FoliascanError):
    """A (u, v) query lies outside the parametrized domain."""


class BeyondReach(FoliascanError):
    """A point or offset lies beyond the configured foliation reach."""


class NoConvergence(FoliascanError):
    """Iterative inversion failed to converge within the iteration budget."""


# --- structured light ---

class InsufficientBits(FoliascanError):
    """The bit budget cannot encode every projector column."""


class InvalidScene(FoliascanError):
    """A depth scene is malformed (non-positive depth, bad descriptor)."""


class TooFewPoints(FoliascanError):
    """Not enough valid samples to build a mesh from a depth map."""


class EmptyOverlap(FoliascanError):
    """Two maps share no commonly-valid pixels."""


# --- simulation ---

class NonFiniteState(FoliascanError):
    """The integrator produced NaN or infinite state."""


class EmptyTrajectory(FoliascanError):
    """Sampling was attempted on a trajectory with no knots."""


class EmptyRun(FoliascanError):
    """Metrics were requested for an empty step log / error series."""


class IoFailure(FoliascanError):
    """An artifact could not be written or read."""


class ConfigError(FoliascanError):
    """A scenario configuration violates a module precondition."""
