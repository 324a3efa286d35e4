import math
import textwrap

def format_value(value, digits = 6):
    if value is None or (isinstance(value, float) and math.isnan(value)):
        return 'undefined'
    return f'{value:.{digits}g}'

class Report():
    """
    Plain text report built line by line, with dividers between sections
    """
    maxwidth = 72
    divider = '-'*maxwidth + '\n'

    def __init__(self, title = None):
        self.infolines = ''
        if title is not None:
            self.add_line(title)
            self.add_div()

    def add_div(self):
        self.infolines += self.divider

    def add_line(self, line):
        self.infolines += '\n'.join(textwrap.wrap(line, width=self.maxwidth, subsequent_indent='  ')) + '\n'

    def add_lines(self, lines):
        for line in lines:
            self.add_line(line)

    def add_outcome(self, outcome):
        """
        One line of port statistics for a PortOutcome
        """
        if outcome.dark:
            self.add_line(f'port {outcome.port}: P = {format_value(outcome.probability)}, <p> undefined (dark port)')
        else:
            self.add_line(f'port {outcome.port}: P = {format_value(outcome.probability)}, '
                f'<p> = {format_value(outcome.mean_p)} W')

    def get_text(self):
        return self.infolines
