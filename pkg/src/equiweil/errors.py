"""Exception types shared across the package."""


class EquiweilError(Exception):
    """Base class for all package-specific errors."""


class CompositionNonzero(EquiweilError):
    """A pair of maps claimed to compose to zero does not."""


class CarrierMismatch(EquiweilError):
    """Operands live in different algebras."""


class NoRepresentation(EquiweilError):
    """Invariant generators requested for a non-abelian algebra without a matrix representation."""


class NotAConnection(EquiweilError):
    """An element fails the connection axioms; the message names the failing axiom."""


class NotInvariant(EquiweilError):
    """A polynomial fails coadjoint invariance."""


class NoWeilFactor(EquiweilError):
    """The carrier was not built as (Weil algebra) tensor (form model)."""


class NotAHomomorphism(EquiweilError):
    """A claimed Lie algebra homomorphism does not preserve brackets."""


class NoNonzeroEvaluation(EquiweilError):
    """No index tuple evaluates a symmetric polynomial to a nonzero value (the polynomial is zero)."""


class GradingMismatch(EquiweilError):
    """Cochain component sizes do not match the model at the stated degree."""


class NotACocycle(EquiweilError):
    """The operation is only defined on cocycles."""


class NeedsHomotopyData(EquiweilError):
    """Product of two triples with nonzero curvatures needs wedge-vs-cup homotopy data the model does not declare."""


class ModelInvariantViolation(EquiweilError):
    """A geometric model fails one of its structural invariants."""


class OutOfRange(EquiweilError):
    """Requested degree is outside the model's range."""


class ModelSyntaxError(EquiweilError):
    """Model file parse error with position information."""

    def __init__(self, message, line, column):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class UnknownGenerator(ModelSyntaxError):
    """A model file references a name that was never declared."""


class DegreeMismatch(ModelSyntaxError):
    """A declared image has the wrong degree for its operator."""
