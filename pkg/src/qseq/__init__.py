"""Exact moment-sequence calculus and integer sequences from queueing models."""

from .ratcore import SigmaPolynomial, TruncatedSeries, SeriesKind, as_rational
from .momentops import MomentSequence
from .cfhankel import SFraction, TerminatingCF, HankelSequence
from .mm1seq import FamilyTag, SigmaParameter, catalan

__all__ = [
    "FamilyTag",
    "HankelSequence",
    "MomentSequence",
    "SFraction",
    "SeriesKind",
    "SigmaParameter",
    "SigmaPolynomial",
    "TerminatingCF",
    "TruncatedSeries",
    "as_rational",
    "catalan",
]

__version__ = "0.1.0"
