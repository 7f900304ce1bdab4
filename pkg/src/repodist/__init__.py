"""Distribution fitting and synthetic data generation for software-development metadata.

Submodules
----------
specfun   special functions (error function family, gamma and beta)
dist      the distribution catalog: density, CDF, quantile, sampling
fit       maximum-likelihood fits, goodness of fit and ranking
ingest    dataset readers and cleaning pipelines
analyze   histograms, trend lines, commit rates and time series
synth     synthetic coder-commit-repository graphs
cli       the ``repodist`` command
"""
__version__ = "0.1.0"

from ._backend import name as backend_name  # noqa: E402
from .dist import Distribution, Family  # noqa: E402
from .errors import RepodistError  # noqa: E402
from .fit import Criterion, FitResult, Ranking, fit_family, rank_fits  # noqa: E402
from .samples import Sample  # noqa: E402
from .series import AnalysisSeries  # noqa: E402

__all__ = [
    "__version__",
    "backend_name",
    "Distribution",
    "Family",
    "RepodistError",
    "Criterion",
    "FitResult",
    "Ranking",
    "fit_family",
    "rank_fits",
    "Sample",
    "AnalysisSeries",
]
