"""Exception hierarchy shared across the package."""


class SolharmError(Exception):
    """Base class for all package-specific errors."""


class DomainError(SolharmError, ValueError):
    """Invalid mathematical input: zero denominators, incompatible residue
    towers, spectra containing characters that do not descend to the quotient.
    """


class PrecisionError(SolharmError):
    """A residue modulus cannot be resolved at the configured tower depth.

    Carries the offending modulus and the minimal lcm-tower depth that would
    resolve it, so callers can rerun with a deeper tower.
    """

    def __init__(self, modulus: int, required_depth: int, message: str | None = None):
        self.modulus = modulus
        self.required_depth = required_depth
        if message is None:
            message = (
                f"modulus {modulus} is not resolvable; "
                f"requires tower depth >= {required_depth}"
            )
        super().__init__(message)


class SpecParseError(SolharmError, ValueError):
    """Malformed JSON input.  ``pointer`` is a JSON-pointer-style location."""

    def __init__(self, message: str, pointer: str = ""):
        self.pointer = pointer or "/"
        super().__init__(f"{message} (at {self.pointer})")
