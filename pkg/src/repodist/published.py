"""Published fits for the repository, survey and coding-years datasets.

Parameter tuples follow each family's ``param_names`` order
(``shape, loc, scale`` for shifted families, ``loc, scale`` for the
exponential).  The repository and 2021-survey fits were made on
standardized data, which is why their locations are negative.
"""
from dataclasses import dataclass

from .dist import Distribution, Family
from .errors import ParameterError


@dataclass(frozen=True)
class PublishedFit:
    """One printed fit.

    ``rank`` is 1 for the best fit and 2 for the runner-up.  ``sampleable``
    is false for records whose printed parameters do not define a proper
    distribution (a zero scale).  Likelihood columns are filled where they
    were printed.
    """

    dataset: str
    group: str
    rank: int
    family: Family
    values: tuple
    sampleable: bool = True
    count: int = None
    log_lik: float = None
    aic: float = None
    bic: float = None
    note: str = ""

    def distribution(self):
        if not self.sampleable:
            raise ParameterError(f"{self.dataset} {self.group}: printed parameters are degenerate")
        return Distribution(self.family, self.values)


_L, _E, _W, _G, _IG = (Family.LOGNORMAL, Family.EXPONENTIAL, Family.WEIBULL_MIN, Family.GAMMA,
                       Family.INVERSE_GAUSSIAN)
_N, _P, _NB = Family.NORMAL, Family.POISSON, Family.NEG_BINOMIAL

# repositories per activity band (band label -> count)
BAND_REPO_COUNTS = {
    "<20": 13_156_036,
    "20-100": 2_235_831,
    "100-1000": 554_079,
    "1000-4000": 28_549,
    "4000-10000": 4_766,
    "10000-100000": 2_221,
    ">100000": 128,
}

GITHUB_BAND_FITS = (
    PublishedFit("github-repos", "<20", 1, _E, (-0.83, 0.83), count=13_156_036),
    PublishedFit("github-repos", "<20", 2, _L, (5.67, -0.832, 0.0), sampleable=False,
                 count=13_156_036, note="printed scale 0"),
    PublishedFit("github-repos", "20-100", 1, _E, (-1.07, 1.07), count=2_235_831),
    PublishedFit("github-repos", "20-100", 2, _L, (1.01, -1.17, 0.76), count=2_235_831),
    PublishedFit("github-repos", "100-1000", 1, _L, (1.30, -0.83, 0.41), count=554_079),
    PublishedFit("github-repos", "100-1000", 2, _W, (0.81, -0.81, 0.71), count=554_079),
    PublishedFit("github-repos", "1000-4000", 1, _E, (-1.07, 1.07), count=28_549),
    PublishedFit("github-repos", "1000-4000", 2, _W, (0.93, -1.07, 1.11), count=28_549),
    PublishedFit("github-repos", "4000-10000", 1, _E, (-1.26, 1.26), count=4_766),
    PublishedFit("github-repos", "4000-10000", 2, _G, (1.17, -1.26, 1.07), count=4_766),
    PublishedFit("github-repos", "10000-100000", 1, _L, (1.30, -0.81, 0.40), count=2_221),
    PublishedFit("github-repos", "10000-100000", 2, _IG, (2.13, -0.851, 0.40), count=2_221,
                 note="inverse Gaussian triple read as (shape, loc, scale)"),
    PublishedFit("github-repos", ">100000", 1, _E, (-0.94, 0.94), count=128),
    PublishedFit("github-repos", ">100000", 2, _L, (1.33, -0.96, 0.48), count=128),
)

_IG_NOTE = "inverse Gaussian triple read as (shape, loc, scale)"
SURVEY_2021_FITS = (
    PublishedFit("so-survey-2021", "professional 2-20", 1, _L, (0.89, -1.29, 0.92)),
    PublishedFit("so-survey-2021", "professional 2-20", 2, _IG, (0.77, -1.39, 1.8), note=_IG_NOTE),
    PublishedFit("so-survey-2021", "professional >20", 1, _IG, (0.71, -1.42, 2.00), note=_IG_NOTE),
    PublishedFit("so-survey-2021", "professional >20", 2, _L, (0.84, -1.32, 0.97)),
    PublishedFit("so-survey-2021", "professional all", 1, _L, (0.91, -1.13, 0.78)),
    PublishedFit("so-survey-2021", "professional all", 2, _IG, (0.89, -1.20, 1.36), note=_IG_NOTE),
    PublishedFit("so-survey-2021", "non-professional", 1, _E, (-1.04, 1.04)),
)

# coding-years ranges of the 2020 survey, with the printed likelihood columns
SURVEY_2020_FITS = (
    PublishedFit("so-survey-2020", "0-50", 2, _N, (8.33, 7.45), count=33_734,
                 log_lik=-115_628, aic=231_260, bic=231_277),
    PublishedFit("so-survey-2020", "0-50", 3, _P, (8.33,), count=33_734,
                 log_lik=-159_718, aic=319_438, bic=319_447),
    PublishedFit("so-survey-2020", "0-50", 1, _NB, (1.59, 8.33), count=33_734,
                 log_lik=-105_885, aic=211_774, bic=211_790),
    PublishedFit("so-survey-2020", "0-20", 2, _N, (6.80, 5.13), count=31_202,
                 log_lik=-95_336, aic=190_676, bic=190_693),
    PublishedFit("so-survey-2020", "0-20", 3, _P, (6.80,), count=31_202,
                 log_lik=-113_532, aic=227_066, bic=227_074),
    PublishedFit("so-survey-2020", "0-20", 1, _NB, (2.20, 6.80), count=31_202,
                 log_lik=-90_475, aic=180_955, bic=180_972),
    PublishedFit("so-survey-2020", "21-30", 1, _N, (24.66, 2.81), count=1_957,
                 log_lik=-4_801, aic=9_607, bic=9_618),
    PublishedFit("so-survey-2020", "21-30", 2, _P, (24.66,), count=1_957,
                 log_lik=-5_244, aic=10_490, bic=10_496),
    PublishedFit("so-survey-2020", "21-30", 3, _NB, (1.08e8, 24.66), count=1_957,
                 log_lik=-5_244, aic=10_492, bic=10_503),
    PublishedFit("so-survey-2020", "31-40", 1, _N, (35.02, 2.82), count=524,
                 log_lik=-1_286, aic=2_576, bic=2_585),
    PublishedFit("so-survey-2020", "31-40", 2, _P, (35.02,), count=524,
                 log_lik=-1_472, aic=2_947, bic=2_951),
    PublishedFit("so-survey-2020", "31-40", 3, _NB, (1.39e8, 35.02), count=524,
                 log_lik=-1_472, aic=2_949, bic=2_957),
)

ALL_FITS = GITHUB_BAND_FITS + SURVEY_2021_FITS + SURVEY_2020_FITS


def best_band_fits():
    """Best-fit distribution for each activity band, in band order."""
    return {f.group: f.distribution() for f in GITHUB_BAND_FITS if f.rank == 1}


def sampleable_fits():
    return [f for f in ALL_FITS if f.sampleable]
