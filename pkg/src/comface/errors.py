"""Exception types shared across the package."""


class ComfaceError(Exception):
    """Base class for all errors raised by this package."""


class ConfigurationError(ComfaceError):
    """A config value, flag, or call argument is outside its documented domain."""


class ContractError(ComfaceError):
    """An input violates a documented precondition or invariant."""


class TaskManifestError(ComfaceError):
    """A downstream task manifest has malformed rows.

    Carries the full list of row-level problems so users can fix a file in
    one pass instead of replaying load errors one at a time.
    """

    def __init__(self, path, row_errors):
        self.path = str(path)
        self.row_errors = list(row_errors)
        lines = "\n".join(f"  - {e}" for e in self.row_errors)
        super().__init__(f"{path}: {len(self.row_errors)} bad row(s)\n{lines}")


class TrainingDivergedError(ComfaceError):
    """Training produced a non-finite loss; carries the offending batch spec."""

    def __init__(self, message, batch_dump_path=None):
        self.batch_dump_path = batch_dump_path
        super().__init__(message)
