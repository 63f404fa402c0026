"""Exception types raised across the package."""


class QutritKakError(ValueError):
    """Base class for all domain errors in this package."""


class NotHermitian(QutritKakError):
    pass


class NotUnitary(QutritKakError):
    pass


class AngleOutOfRange(QutritKakError):
    pass


class NegativeTime(QutritKakError):
    pass


class UnknownCombination(QutritKakError):
    """No tabulated solution exists for the requested gate and global phase."""


class ThetaOutOfValidatedDomain(QutritKakError):
    pass


class NoFeasiblePointFound(QutritKakError):
    """The solver found no (t1, t2) at which the target is reachable within tolerance."""


class NonpositiveAmplitude(QutritKakError):
    pass
