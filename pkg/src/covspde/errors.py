"""Exception hierarchy. Every error carries a stable machine-readable ``code``."""


class CovSpdeError(Exception):
    code = "error"

    def __init__(self, message="", **details):
        super().__init__(message)
        self.details = details


class InvalidDimension(CovSpdeError, ValueError):
    code = "invalid-dimension"


class IncompatibleReps(CovSpdeError, ValueError):
    code = "incompatible-reps"


class UnsupportedDimension(CovSpdeError, ValueError):
    code = "unsupported-dimension"


class NotInCatalog(CovSpdeError, KeyError):
    code = "not-in-catalog"

    def __str__(self):
        return Exception.__str__(self)


class InvalidReflection(CovSpdeError, ValueError):
    code = "invalid-reflection"


class DegenerateOperator(CovSpdeError, ValueError):
    code = "degenerate-operator"


class NotInvertible(CovSpdeError, ValueError):
    code = "not-invertible"


class RepeatedMassUnsupported(CovSpdeError, ValueError):
    code = "repeated-mass-unsupported"


class DimensionMismatch(CovSpdeError, ValueError):
    code = "dimension-mismatch"


class TooLarge(CovSpdeError, ValueError):
    code = "too-large"


class BadSupport(CovSpdeError, ValueError):
    code = "bad-support"


class NearSingularMode(CovSpdeError, ArithmeticError):
    code = "near-singular-mode"


class UnsupportedSymmetry(CovSpdeError, ValueError):
    code = "unsupported-symmetry"


class OutOfDomain(CovSpdeError, ValueError):
    code = "out-of-domain"


class UnknownFamily(CovSpdeError, ValueError):
    code = "unknown-family"


class ConfigError(CovSpdeError, ValueError):
    code = "schema-violation"
