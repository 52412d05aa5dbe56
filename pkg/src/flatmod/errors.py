"""Exception types shared across the package."""


class FlatmodError(Exception):
    """Base class for all package errors."""


class OffBigCell(FlatmodError):
    """Triangular (Gauss) factorization does not exist for this matrix."""


class RankAmbiguous(FlatmodError):
    """A numerical rank decision fell too close to its threshold."""


class UnsupportedLagrangian(FlatmodError):
    """Lagrangian tag outside the supported catalog."""


class UnsupportedFamily(FlatmodError):
    """Surface outside the construction catalog."""


class IncompatibleGluing(FlatmodError):
    """Gluing would produce an invalid marked surface."""


class NonComposable(FlatmodError):
    """Groupoid elements with mismatched source/target."""


class NonMatchingPoint(FlatmodError):
    """Triangle edge values violate the matching conditions."""


class DecorationViolated(FlatmodError):
    """A representation fails its boundary decoration."""

    def __init__(self, message, circle=None):
        super().__init__(message)
        self.circle = circle


class UnknownCheck(FlatmodError):
    """Check id not in the catalog."""


class ConstructionFailed(FlatmodError):
    """A constrained sampler exhausted its retries."""

    def __init__(self, message, sample_index=None):
        super().__init__(message)
        self.sample_index = sample_index


class SpecSyntaxError(FlatmodError):
    """Spec file tokenization/grammar failure."""

    def __init__(self, line, col, expected):
        super().__init__(f"line {line}, col {col}: expected {expected}")
        self.line = line
        self.col = col
        self.expected = expected


class SpecSemanticError(FlatmodError):
    """Spec file is grammatical but inconsistent."""

    def __init__(self, line, message):
        super().__init__(f"line {line}: {message}")
        self.line = line
