"""Exception hierarchy. Each class maps to one CLI exit code."""


class LpmlnError(Exception):
    exit_code = 1


class ParseError(LpmlnError):
    exit_code = 1

    def __init__(self, message: str, line: int = 0, col: int = 0):
        self.line, self.col = line, col
        where = f"line {line}, column {col}: " if line else ""
        super().__init__(where + message)


class GroundingError(LpmlnError):
    exit_code = 1


class CapExceeded(LpmlnError):
    exit_code = 2


class InconsistentProgram(LpmlnError):
    exit_code = 3


class RuleFormError(LpmlnError):
    exit_code = 4


class ConditionViolation(LpmlnError):
    exit_code = 5

    def __init__(self, condition: int, message: str):
        self.condition = condition
        super().__init__(f"condition {condition} violated: {message}")


class TranslationError(LpmlnError):
    exit_code = 1
