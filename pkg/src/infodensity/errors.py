"""Exception types raised by the simulation modules."""


class InfoDensityError(ValueError):
    pass


class EmptySequence(InfoDensityError):
    pass


class OrderTooLarge(InfoDensityError):
    pass


class TrainingTooShort(InfoDensityError):
    pass


class TestTooShort(InfoDensityError):
    __test__ = False  # keep pytest from collecting this


class EmptySystem(InfoDensityError):
    pass


class NoWords(InfoDensityError):
    pass


class InfiniteDivergence(InfoDensityError):
    pass


class NoSuchOrder(InfoDensityError):
    pass
