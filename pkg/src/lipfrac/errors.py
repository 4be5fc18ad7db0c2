"""Exception types shared across the package."""


class LipfracError(Exception):
    """Base class for all package errors."""


class EmptyInput(LipfracError):
    pass


class GcdViolation(LipfracError):
    """Exponent gcd > 1 where a primitive relation is required."""


class NotPrimitiveInput(LipfracError):
    pass


class ZeroIdeal(LipfracError):
    pass


class OwnerMismatch(LipfracError):
    pass


class DegreeUnsupported(LipfracError):
    pass


class NotPositive(LipfracError):
    pass


class NotMember(LipfracError):
    pass


class NotInIdeal(LipfracError):
    pass


class NonCommensurable(LipfracError):
    pass


class NotComparable(LipfracError):
    pass


class FieldMismatch(LipfracError):
    pass


class FamilyMismatch(LipfracError):
    pass


class EmptyFamily(LipfracError):
    pass


class ExplosionGuard(LipfracError):
    """Cylinder enumeration would exceed the configured cap."""


class PredicateUnresolved(LipfracError):
    """A certified geometric comparison hit its refinement cap on a tie."""


class DecompositionFailed(LipfracError):
    """Level-k block conditions could not be satisfied."""


class RegionNotInvariant(LipfracError):
    """The supplied open region fails the OSC check for the IFS."""


class NotClosed(LipfracError):
    """Type discovery did not close within the level budget."""

    def __init__(self, k_max, partial=None):
        super().__init__(f"type graph not closed by level {k_max}")
        self.k_max = k_max
        self.partial = partial


class SingularSystem(LipfracError):
    pass


class IdealNotExact(LipfracError):
    pass


class TargetsInfeasible(LipfracError):
    pass


class AlphabetNotInIdeal(LipfracError):
    pass


class SubstitutionInvalid(LipfracError):
    pass


class EmptySubsystem(LipfracError):
    pass


class RouteUnsupported(LipfracError):
    """The requested witness needs the dense-island route, which is out of scope."""


class VerificationFailed(LipfracError):
    """A round-trip self-check failed; indicates a bug, never silently accepted."""


class DimensionUnsupported(LipfracError):
    pass


class ParseError(LipfracError):
    pass
