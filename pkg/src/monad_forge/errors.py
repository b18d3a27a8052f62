"""Exception hierarchy shared by every module of the package."""


class MonadForgeError(ValueError):
    """Base class for all errors raised by monad_forge."""


class ZeroElement(MonadForgeError):
    """An operation that needs a nonzero ring element received zero."""


class MixedRings(MonadForgeError):
    """Elements or modules from different ring instances were combined."""


class ShapeMismatch(MonadForgeError):
    pass


class NotWellDefined(MonadForgeError):
    """A matrix does not send the domain relations into the codomain relations."""


class NotParallel(MonadForgeError):
    pass


class NotACofork(MonadForgeError):
    pass


class TooLarge(MonadForgeError):
    """An exhaustive computation would exceed its element or hom-set cap."""


class BadParameters(MonadForgeError):
    pass


class DuplicateSupport(MonadForgeError):
    pass


class NotLevel(MonadForgeError):
    """A predicate presentation was used where a level presentation is required."""


class NoCoequalizer(MonadForgeError):
    pass


class ParseError(MonadForgeError):
    pass
