import math

import interferometer as mzi
from report import Report, format_value


def test_format_value():
    assert format_value(0.056712345678) == '0.0567123'
    assert format_value(None) == 'undefined'
    assert format_value(math.nan) == 'undefined'


def test_title_and_wrapping():
    report = Report('Title')
    report.add_line('word '*40)
    lines = report.get_text().splitlines()
    assert lines[0] == 'Title'
    assert lines[1] == '-'*Report.maxwidth
    assert all(len(line) <= Report.maxwidth for line in lines)
    assert lines[3].startswith('  ')


def test_outcomes():
    report = Report()
    report.add_outcome(mzi.PortOutcome('C', 1e-20, None, None))
    report.add_outcome(mzi.PortOutcome('D', 0.5, None, 0.25))
    assert report.get_text() == 'port C: P = 1e-20, <p> undefined (dark port)\nport D: P = 0.5, <p> = 0.25 W\n'
