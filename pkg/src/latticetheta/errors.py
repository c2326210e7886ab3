"""Exception hierarchy shared by all modules."""


class LatticeError(Exception):
    """Base class for every error raised by latticetheta."""


class NonSquare(LatticeError):
    pass


class NotFullRank(LatticeError):
    pass


class NotPositiveDefinite(LatticeError):
    pass


class NotPsd(LatticeError):
    pass


class UnknownName(LatticeError):
    pass


class RankTooLarge(LatticeError):
    pass


class NotIsometry(LatticeError):
    pass


class WrongOrder(LatticeError):
    pass


class NotOddPrime(LatticeError):
    pass


class NotInImage(LatticeError):
    pass


class ConstructionSelfCheckFailed(LatticeError):
    pass
