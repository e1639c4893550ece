"""Domain error types. The CLI maps any of these to exit code 1."""


class SolenoidLabError(Exception):
    """Base class for contract violations raised by this package."""


class WindingTooSmall(SolenoidLabError):
    """Winding number below 2; the base map would not expand."""


class SheetOverlap(SolenoidLabError):
    """Offset too small for the winding: image sheet discs would intersect."""


class ImageEscapes(SolenoidLabError):
    """Offset plus fiber radius reaches the boundary of the solid torus."""


class NotInImage(SolenoidLabError):
    """Inverse requested at a point outside every image sheet disc."""


class Overflow(SolenoidLabError):
    """Periodic-point enumeration would exceed the configured budget."""


class NotCoprime(SolenoidLabError):
    """Gluing parameters p and q share a nontrivial factor."""


class NonPositiveP(SolenoidLabError):
    """Gluing parameter p must be a positive integer."""


class DegenerateFit(SolenoidLabError):
    """Box counts carry no scale dependence; no dimension can be fitted."""
