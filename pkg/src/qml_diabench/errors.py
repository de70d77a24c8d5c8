"""Exception and warning types shared across the package."""


class BenchError(Exception):
    """Base class for all errors raised by qml_diabench."""


# dataset
class MissingFile(BenchError, FileNotFoundError):
    pass


class MalformedRow(BenchError, ValueError):
    def __init__(self, line_no: int, reason: str = ""):
        self.line_no = line_no
        msg = f"malformed row at line {line_no}"
        super().__init__(f"{msg}: {reason}" if reason else msg)


class SchemaMismatch(BenchError, ValueError):
    pass


class AllMissingColumn(BenchError, ValueError):
    pass


class SingleClass(BenchError, ValueError):
    pass


class RatioOutOfRange(BenchError, ValueError):
    pass


# shared shape / argument checks
class DimensionMismatch(BenchError, ValueError):
    pass


class KTooLarge(BenchError, ValueError):
    pass


# dimred
class RankDeficient(BenchError, ValueError):
    pass


class SingularScatter(BenchError, ValueError):
    pass


# qsim
class TooManyQubits(BenchError, ValueError):
    pass


class QubitIndexOutOfRange(BenchError, IndexError):
    pass


class QubitCountMismatch(BenchError, ValueError):
    pass


# encoding / models
class EmptyVector(BenchError, ValueError):
    pass


class LabelEncoding(BenchError, ValueError):
    pass


class EmptyBatch(BenchError, ValueError):
    pass


class NonFiniteLoss(BenchError, FloatingPointError):
    """Training produced a NaN/inf loss. ``model`` holds the last finite iterate."""

    def __init__(self, epoch: int, model=None):
        self.epoch = epoch
        self.model = model
        super().__init__(f"non-finite loss at epoch {epoch}")


class InvalidDistribution(BenchError, ValueError):
    pass


# metrics
class LengthMismatch(BenchError, ValueError):
    pass


class NonBinary(BenchError, ValueError):
    pass


class EmptyMatrix(BenchError, ValueError):
    pass


# harness
class ConfigError(BenchError, ValueError):
    pass


class ParseError(ConfigError):
    def __init__(self, location: str, reason: str = ""):
        self.location = location
        super().__init__(f"config parse error at {location}: {reason}")


class UnknownKey(ConfigError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"unknown config key: {name!r}")


class InvalidValue(ConfigError):
    def __init__(self, key: str, reason: str = ""):
        self.key = key
        super().__init__(f"invalid value for {key!r}: {reason}")


class ReportIOError(BenchError, OSError):
    def __init__(self, path, reason: str = ""):
        self.path = path
        super().__init__(f"cannot write {path}: {reason}")


# warnings
class DegenerateColumn(UserWarning):
    """A standardizer column had (near) zero variance; it is centered only."""


class DegenerateFeature(UserWarning):
    """An angle-scaler feature was constant on the fitting data; it maps to pi/2."""


class NotConverged(UserWarning):
    """SMO hit its iteration cap; the best iterate is returned."""
