from fractions import Fraction

from hypothesis import strategies as st

from qseq.ratcore import TruncatedSeries

small_fractions = st.fractions(min_value=-20, max_value=20, max_denominator=12)
positive_fractions = st.fractions(min_value=Fraction(1, 12), max_value=10, max_denominator=12)


@st.composite
def rational_series(draw, min_len=1, max_len=13, lead=None):
    coeffs = draw(st.lists(small_fractions, min_size=min_len, max_size=max_len))
    if lead is not None:
        coeffs[0] = Fraction(lead)
    return TruncatedSeries(tuple(coeffs))


@st.composite
def normalized_series(draw, min_len=2, max_len=13):
    return draw(rational_series(min_len=min_len, max_len=max_len, lead=1))


# acceptance lines, collected by tests/test_acceptance.py and echoed after the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
