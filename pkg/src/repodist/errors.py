"""Exception hierarchy.

Each error carries a short ``kind`` string used by the CLI when it emits
a machine-readable error record.
"""


class RepodistError(Exception):
    kind = "error"


class DomainError(RepodistError, ValueError):
    """Argument outside the mathematical domain of a function."""

    kind = "domain"


class ParameterError(RepodistError, ValueError):
    """Invalid parameters for a distribution family."""

    kind = "parameter"


class EmptySampleError(RepodistError, ValueError):
    kind = "empty-sample"


class InsufficientDataError(RepodistError, ValueError):
    kind = "insufficient-data"


class DegenerateSampleError(RepodistError, ValueError):
    kind = "degenerate-sample"


class InfeasibleFitError(RepodistError):
    kind = "infeasible-fit"


class NoFitError(RepodistError):
    kind = "no-fit"


class UnsupportedFamilyError(RepodistError, ValueError):
    kind = "unsupported-family"


class IngestError(RepodistError):
    kind = "ingest"


class TruncationError(RepodistError, ValueError):
    kind = "truncation"


class ConfigError(RepodistError, ValueError):
    """Invalid synthesis configuration; ``problems`` lists (field, message)."""

    kind = "config"

    def __init__(self, problems):
        if isinstance(problems, str):
            problems = [("config", problems)]
        self.problems = list(problems)
        super().__init__("; ".join(f"{f}: {m}" for f, m in self.problems))
