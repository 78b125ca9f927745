NOT_ADMISSIBLE = "Columns %s and %s of the %s matrix are zero or proportional"
NO_AFFINE_VERTEX = "Vertex lies on the chart hyperplane H^{N+1}"
NOT_A_FLAT = "Subset %s is not a flat of the matroid"


class InvalidArgumentsException(Exception):
    def __init__(self, message=None):
        super().__init__("Invalid Arguments" if message is None else message)
        self.message = message


class DimensionException(Exception):
    def __init__(self, message=None):
        super().__init__("Dimension Mismatch" if message is None else message)
        self.message = message


class RankDeficiencyException(Exception):
    def __init__(self, message=None):
        super().__init__("Matrix is Rank Deficient" if message is None else message)
        self.message = message


class NotAPairException(Exception):
    def __init__(self, message=None):
        super().__init__("Matrix does not define a pair" if message is None else message)
        self.message = message


class InadmissiblePairException(Exception):
    a = None
    b = None
    side = None

    def __init__(self, a: int, b: int, side: str = "primal"):
        super().__init__(NOT_ADMISSIBLE % (a, b, side))
        self.message = NOT_ADMISSIBLE % (a, b, side)
        self.a = a
        self.b = b
        self.side = side


class VertexAtInfinityException(Exception):
    def __init__(self, message=None):
        super().__init__(NO_AFFINE_VERTEX if message is None else message)
        self.message = message


class DegenerateParallelismException(Exception):
    def __init__(self, message=None):
        super().__init__("No Vertex on the Edge off H^{N+1}" if message is None else message)
        self.message = message


class ChartException(Exception):
    def __init__(self, message=None):
        super().__init__("Chart Hyperplane contains the Subspace" if message is None else message)
        self.message = message


class UnsupportedArrangementException(Exception):
    def __init__(self, message=None):
        super().__init__("Unsupported Arrangement" if message is None else message)
        self.message = message


class ConstructionFailureException(Exception):
    def __init__(self, message=None):
        super().__init__("Construction Failure" if message is None else message)
        self.message = message


class BijectionException(Exception):
    def __init__(self, message=None):
        super().__init__("No Adjacency-Respecting Bijection" if message is None else message)
        self.message = message


class SingularEvaluationException(Exception):
    def __init__(self, message=None):
        super().__init__("Point lies on a Hyperplane" if message is None else message)
        self.message = message


class WeightDomainException(Exception):
    def __init__(self, message=None):
        super().__init__("Weights outside the Gamma Domain" if message is None else message)
        self.message = message


class QuadratureAccuracyException(Exception):
    achieved = None

    def __init__(self, achieved: float, message=None):
        super().__init__(f"Quadrature did not reach target, achieved {achieved}" if message is None else message)
        self.message = message
        self.achieved = achieved


class DualityViolationException(Exception):
    def __init__(self, message=None):
        super().__init__("Duality Violation" if message is None else message)
        self.message = message


class InvariantViolationException(Exception):
    def __init__(self, message=None):
        super().__init__("Invariant Violation" if message is None else message)
        self.message = message
