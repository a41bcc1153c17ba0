"""Exception types. Each carries the CLI exit code it maps to."""


class SDSError(Exception):
    exit_code = 5


class ProfileParseError(SDSError):
    exit_code = 2

    def __init__(self, message, line=None, column=None):
        self.message = message
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(where + message)


class ScriptFormatError(SDSError):
    exit_code = 2


class DomainMismatch(SDSError):
    exit_code = 3


class ConfigOutOfRange(SDSError):
    exit_code = 3


class CapExceeded(SDSError):
    exit_code = 4

    def __init__(self, count, cap):
        self.count = count
        self.cap = cap
        super().__init__(f"domain has {count} profiles, above the cap of {cap}")


class BudgetExceeded(SDSError):
    exit_code = 4


class NotAdjacent(SDSError):
    pass


class ZeroTotalScore(SDSError):
    pass


class BadWeights(SDSError):
    pass


class MissingProfile(SDSError):
    exit_code = 3


class SizeLimit(SDSError):
    exit_code = 4


class CaseCap(SDSError):
    exit_code = 4


class InfeasibleSystem(SDSError):
    pass
