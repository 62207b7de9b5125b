"""Exception hierarchy.

Three branches matter to the CLI exit-code mapping: ConfigError (bad
configuration or arguments, exit 2), DataError (bad or missing input data,
exit 3) and InternalError (a violated invariant, exit 4).
"""


class ScriptmineError(Exception):
    pass


class ConfigError(ScriptmineError):
    pass


class DataError(ScriptmineError):
    pass


class InternalError(ScriptmineError):
    pass


# corpus loading
class MissingFile(DataError):
    pass


class EncodingError(DataError):
    pass


class EmptyBook(DataError):
    pass


class EmptyChapter(DataError):
    pass


class NoChaptersFound(DataError):
    pass


class UnknownBook(DataError):
    pass


# preprocessing / matrices
class EmptyInput(DataError):
    pass


class AllDocumentsEmpty(DataError):
    pass


class ZeroRow(DataError):
    pass


# distances
class LengthMismatch(DataError):
    pass


class BothZero(DataError):
    pass


class ZeroVector(DataError):
    pass


class DegenerateMeasure(DataError):
    pass


# classification / evaluation
class DimensionMismatch(DataError):
    pass


class EmptyClass(DataError):
    pass


class NonFiniteObjective(ScriptmineError):
    pass


class InvalidHyperparameter(ConfigError):
    pass


class TooManyFolds(ConfigError):
    pass
