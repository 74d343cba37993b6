"""Exception types shared across the package."""


class SecmeasError(Exception):
    """Base class for all package-specific errors."""


class UnknownFamily(SecmeasError):
    """Requested measure family is not a built-in and was never loaded."""


class UnknownCheck(SecmeasError):
    """Check id not present in the verification registry."""


class CapabilityMissing(SecmeasError):
    """Operation needs a closed form (density/reducer/transform) the family does not carry."""


class OnSupport(SecmeasError):
    """Complex evaluation point lies on (or within 1e-12 of) the support."""


class OutOfDomain(SecmeasError):
    """Real evaluation point outside the interior of the support."""


class NodeCollision(SecmeasError):
    """Two interpolation/quadrature nodes closer than the divided-difference gap floor."""


class GridTooLarge(SecmeasError):
    """Tensor-product grid exceeds the evaluation cap."""


class EigenFailure(SecmeasError):
    """Tridiagonal eigensolver exceeded its sweep budget."""


class NonFinite(SecmeasError):
    """Integrand returned a non-finite value at an interior node."""


class DegenerateDenominator(SecmeasError):
    """Density/reducer denominator underflowed; interior zeros are impossible analytically."""


class ChainZeroDivision(SecmeasError):
    """Intermediate continued-fraction denominator vanished."""


class IndexOutOfRange(SecmeasError):
    """Associated-system indices exceed the generated base system."""
