from typing import Optional, Sequence


class QcringError(ValueError):
    """Base class for every typed failure raised by the library."""


class InputError(QcringError):
    """Problems with user-supplied files, names or flags (CLI exit code 2)."""


# Scalars

class DivisionByZero(QcringError, ZeroDivisionError):
    pass


class NotInField(QcringError):
    """A value would leave the coefficient field Q(i)."""


# Bundles and CLI input

class ParseError(InputError):
    def __init__(self, message: str, path: Optional[str] = None, line: Optional[int] = None, column: Optional[int] = None):
        self.path = path
        self.line = line
        self.column = column
        where = ""
        if path is not None:
            where = path
            if line is not None:
                where += f":{line}:{column}"
            where += ": "
        super().__init__(f"{where}{message}")


class UnresolvedSymbol(InputError):
    def __init__(self, symbol: str, key: Optional[str] = None):
        self.symbol = symbol
        self.key = key
        detail = f" (in {key})" if key else ""
        super().__init__(f"unresolved symbol {symbol!r}{detail}")


class SchemaViolation(InputError):
    def __init__(self, key: str, message: str):
        self.key = key
        super().__init__(f"{key}: {message}")


class UnsupportedTailKind(InputError):
    pass


class UnknownFixture(InputError):
    pass


class QValueRejected(InputError):
    pass


# Graded algebras

class DegeneratePairing(QcringError):
    pass


class GradingViolation(QcringError):
    pass


class OddDegreeUnsupported(QcringError):
    pass


class NonRealEntry(QcringError):
    pass


# Sectors

class InvalidGroupTable(QcringError):
    pass


class ExponentOutOfRange(QcringError):
    pass


class InvalidPartition(QcringError):
    pass


class NonIntegerSignExponent(QcringError):
    pass


class NonIntegerIota(QcringError):
    pass


class NotAnInvolution(QcringError):
    pass


class SectorMismatch(QcringError):
    pass


class NotHermitian(QcringError):
    pass


# Quantum correction

class PoleAtOne(QcringError):
    def __init__(self, ray: str, triple: Optional[Sequence[int]] = None):
        self.ray = ray
        self.triple = tuple(triple) if triple is not None else None
        super().__init__(f"geometric tail along ray {ray!r} has a pole at q = 1")


class DegenerateRays(QcringError):
    pass


class BasisMismatch(QcringError):
    pass


# Isomorphisms

class ShapeMismatch(QcringError):
    pass


class SingularMap(QcringError):
    pass
