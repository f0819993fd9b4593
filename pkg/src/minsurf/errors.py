"""Exception types shared across the package."""


class MinsurfError(Exception):
    """Base of every error raised deliberately by this package."""


class InvalidInputError(MinsurfError, ValueError):
    pass


class NotInvertibleError(MinsurfError, ValueError):
    pass


class SingularPointError(MinsurfError, ValueError):
    """Raised when a jet is requested where the immersion is not regular."""


class IntegrationError(MinsurfError, RuntimeError):
    pass


class NormalizationError(MinsurfError, ValueError):
    """Gauss map does not satisfy the south-pole normalisation at the end."""


class GeometryMismatchError(MinsurfError, ValueError):
    pass


class StepSizeError(MinsurfError, RuntimeError):
    pass


class UndersamplingError(MinsurfError, RuntimeError):
    pass


class MeshingError(MinsurfError, RuntimeError):
    pass


class TotallyUmbilicError(MinsurfError, ValueError):
    """The Hopf differential vanishes identically (every point is umbilic).

    Kept distinct from "no umbilics": callers asking for umbilic points of
    a plane get this instead of an empty list.
    """
