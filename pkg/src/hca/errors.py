"""Exception hierarchy shared by every stage.

Each class carries the CLI exit code it maps to.
"""


class HCAError(Exception):
    exit_code = 1


class ValidationError(HCAError, ValueError):
    exit_code = 2


class ParseError(ValidationError):
    """A malformed line or row in an input file."""

    def __init__(self, path, line_no, message):
        self.path = str(path)
        self.line_no = line_no
        super().__init__(f"{path}:{line_no}: {message}")


class InputFileError(HCAError, OSError):
    exit_code = 3


class DivergenceError(HCAError, ArithmeticError):
    exit_code = 4

    def __init__(self, epoch, message="non-finite objective"):
        self.epoch = epoch
        super().__init__(f"training diverged at epoch {epoch}: {message}")


class UnclassifiableError(HCAError, ArithmeticError):
    """Every class has zero posterior probability (unsmoothed NB only)."""

    exit_code = 4


class PipelineError(HCAError):
    exit_code = 4

    def __init__(self, message, stage=None, record_id=None):
        self.stage = stage
        self.record_id = record_id
        prefix = ""
        if stage:
            prefix += f"[{stage}] "
        if record_id is not None:
            prefix += f"record {record_id!r}: "
        super().__init__(prefix + message)
