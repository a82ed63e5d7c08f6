"""Exception types raised across the package."""


class HardRodsError(Exception):
    pass


class InvalidParams(HardRodsError, ValueError):
    pass


class DivisibilityError(InvalidParams):
    """Box side is not a multiple of the smoothing-square side 4*ell."""


class BudgetExceeded(HardRodsError, RuntimeError):
    """An exact enumeration visited more nodes than its budget allows."""

    def __init__(self, budget, visited=None):
        self.budget = budget
        self.visited = visited
        super().__init__(f"enumeration exceeded node budget {budget}")


class SizeLimit(HardRodsError, ValueError):
    """A rod multiset is larger than the configured cap."""


class MixedTile(HardRodsError, ValueError):
    """A tile holds rods of both orientations (impossible under hard core)."""


class NotInThetaQ(HardRodsError, ValueError):
    """A spin configuration violates the q boundary band."""


class NonUniformPeel(HardRodsError, ValueError):
    pass


class NoBadStructure(HardRodsError, ValueError):
    """A smoothing square of a contour has no zero spin and no opposite pair."""


class ConfigError(HardRodsError, ValueError):
    pass
