"""
Line oriented interferometer programs (.qif files).

One instruction per line, `name key=value ...`; `#` starts a comment and
blank lines are ignored:

    source width=1 mean=0
    bs t=0.85
    kick path=B delta=0.2
    phase path=B alpha=0
    recombine
    select port=C
    report moments
"""
import logging
import math
import re
import typing
from dataclasses import dataclass, field

from lark import Lark
from lark.exceptions import UnexpectedInput, UnexpectedEOF

import wavepacket as wp
import interferometer as mzi
import rules
from report import Report, format_value

log = logging.getLogger(__name__)

line_parser = Lark(r"""
        start: WORD (arg | bare)*
        arg: WORD "=" VALUE
        bare: WORD
        WORD: /[A-Za-z_][A-Za-z0-9_]*/
        VALUE: /[^\s=#]+/
        COMMENT: /#[^\n]*/

        %import common.WS_INLINE
        %ignore WS_INLINE
        %ignore COMMENT
    """, parser='lalr')

number_re = re.compile(r'[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?')
report_kinds = ('moments', 'wavefunction', 'conservation')


class ParseError(ValueError):
    def __init__(self, line, column, message, token = None):
        self.line = line
        self.column = column
        self.message = message
        self.token = token
        super().__init__(str(self))

    def __str__(self):
        text = f'line {self.line}, column {self.column}: {self.message}'
        if self.token:
            text += f' (near {self.token!r})'
        return text


class CircuitRuntimeError(ValueError):
    def __init__(self, line, error):
        self.line = line
        self.error = error
        super().__init__(f'line {line}: {error}')


##################
# Argument Types #
##################

def parse_number(text):
    if not number_re.fullmatch(text):
        raise ValueError(f'malformed number {text!r}')
    value = float(text)
    if not math.isfinite(value):
        raise ValueError(f'number {text!r} is not finite')
    return value

def choice(name, allowed):
    def convert(text):
        if text not in allowed:
            if len(allowed) == 2:
                raise ValueError(f'{name} must be {allowed[0]} or {allowed[1]}')
            raise ValueError(f'{name} must be one of {", ".join(allowed)}')
        return text
    return convert

def format_arg(value):
    if isinstance(value, float):
        return repr(value)
    return str(value)


################
# Instructions #
################

class Instruction():
    """
    One program line. `keys` maps each required key to the function that
    converts its text value; a subclass may check the converted arguments
    in `validate` and acts on a Run in `execute`.
    """
    name = None
    keys = {}
    positional = None  #key that may be written without `key=`, e.g. `report moments`

    def __init__(self, args, line = None, column = 1):
        self.args = dict(args)
        self.line = line
        self.column = column

    def validate(self):
        """
        Return (key, message) for an invalid argument, or None
        """
        return None

    def execute(self, run):
        raise NotImplementedError()

    def serialize(self):
        pieces = [self.name]
        for key in self.keys:
            pieces.append(f'{key}={format_arg(self.args[key])}')
        return ' '.join(pieces)

    def __eq__(self, other):
        return isinstance(other, Instruction) and self.name == other.name and self.args == other.args

    def __hash__(self):
        return hash((self.name, tuple(sorted(self.args.items()))))

    def __repr__(self):
        return f'{self.__class__.__name__} : {self.serialize()}'

class Source(Instruction):
    name = 'source'
    keys = {'width': parse_number, 'mean': parse_number}

    def validate(self):
        if not self.args['width'] > 0:
            return 'width', 'width must be positive'

    def execute(self, run):
        run.input = wp.gaussian_init(wp.GaussianParams(self.args['width'], self.args['mean']), run.grid)

class BeamSplitter(Instruction):
    name = 'bs'
    keys = {'t': parse_number}

    def validate(self):
        if not 0 <= self.args['t'] <= 1:
            return 't', 't must lie in [0, 1]'

    def execute(self, run):
        run.t = self.args['t']
        run.state = mzi.split(run.input, mzi.BeamSplitterCoeffs(run.t))

class Kick(Instruction):
    name = 'kick'
    keys = {'path': choice('path', mzi.paths), 'delta': parse_number}

    def execute(self, run):
        run.state = mzi.kick_path(run.state, self.args['path'], self.args['delta'])

class Phase(Instruction):
    name = 'phase'
    keys = {'path': choice('path', mzi.paths), 'alpha': parse_number}

    def execute(self, run):
        run.state = mzi.phase_path(run.state, self.args['path'], self.args['alpha'])

class Recombine(Instruction):
    name = 'recombine'
    keys = {}

    def execute(self, run):
        run.expected_momentum = mzi.state_momentum(run.state)
        raw_c, raw_d = mzi.recombine(run.state)
        run.outcomes = {'C': mzi.port_stats(raw_c, 'C'), 'D': mzi.port_stats(raw_d, 'D')}

class Select(Instruction):
    name = 'select'
    keys = {'port': choice('port', mzi.ports)}

    def execute(self, run):
        run.selected = run.outcomes[self.args['port']].require_bright()

class ReportRequest(Instruction):
    name = 'report'
    keys = {'kind': choice('kind', report_kinds)}
    positional = 'kind'

    def serialize(self):
        return f'{self.name} {self.args["kind"]}'

    def execute(self, run):
        kind = self.args['kind']
        outcome = run.selected
        record = {'kind': kind, 'line': self.line, 'port': outcome.port}
        if kind == 'moments':
            record.update(probability=outcome.probability, mean=outcome.mean_p)
            run.report.add_outcome(outcome)
        elif kind == 'wavefunction':
            peak_p, peak_amplitude = wp.peak(outcome.wavefunction)
            record.update(
                probability=outcome.probability,
                mean=outcome.mean_p,
                variance=wp.variance_momentum(outcome.wavefunction),
                peak_p=peak_p,
                peak_amplitude=abs(peak_amplitude),
                )
            run.report.add_line(f'port {outcome.port} wavefunction: <p> = {format_value(record["mean"])} W, '
                f'var = {format_value(record["variance"])} W^2, '
                f'peak |Phi| = {format_value(record["peak_amplitude"])} at p = {format_value(peak_p)} W')
        else:
            measured = sum(o.weighted_mean() for o in run.outcomes.values())
            residual = abs(measured - run.expected_momentum)
            record.update(measured=measured, expected=run.expected_momentum, residual=residual)
            run.report.add_line(f'conservation: P_C<p>_C + P_D<p>_D = {format_value(measured, 12)}, '
                f'arms carry {format_value(run.expected_momentum, 12)}, residual {residual:.3g}')
        run.records.append(record)

instruction_types = {cls.name: cls for cls in [Source, BeamSplitter, Kick, Phase, Recombine, Select, ReportRequest]}


###########
# Program #
###########

class CircuitProgram():
    """
    An ordered list of instructions parsed from text, checked against the
    ordering rules
    """
    rules = rules.default_rules

    def __init__(self, instructions):
        self.instructions = list(instructions)

    @classmethod
    def from_text(cls, text):
        if isinstance(text, bytes):
            text = text.decode('utf-8')
        lines = cls.preprocess(text)
        instructions = cls.process(lines)
        return cls.postprocess(instructions)

    @staticmethod
    def preprocess(text):
        """
        Numbered lines that hold something other than whitespace or comments.
        Lines end at newline only; a trailing carriage return is dropped.
        """
        result = []
        for number, line in enumerate(text.split('\n'), start=1):
            line = line[:-1] if line.endswith('\r') else line
            if line.split('#', 1)[0].strip() == '':
                continue
            result.append((number, line))
        return result

    @classmethod
    def process(cls, lines):
        return [cls.parse_line(number, line) for number, line in lines]

    @classmethod
    def postprocess(cls, instructions):
        if len(instructions) == 0:
            raise ParseError(1, 1, 'missing source')
        history = []
        for instruction in instructions:
            for rule in cls.rules:
                message = rule.process(instruction, history)
                if message != False:
                    raise ParseError(instruction.line, instruction.column, message, instruction.name)
            history.append(instruction.name)
        return cls(instructions)

    @staticmethod
    def parse_line(number, line):
        try:
            tree = line_parser.parse(line)
        except UnexpectedEOF:
            raise ParseError(number, len(line.rstrip()) + 1, 'unexpected end of line')
        except UnexpectedInput as e:
            token = getattr(e, 'token', None)
            column = getattr(e, 'column', -1)
            if token is not None and token.type == '$END':
                raise ParseError(number, len(line.rstrip()) + 1, 'unexpected end of line')
            if column is None or column < 1:
                column = 1
            if token is None:
                pieces = line[column - 1:].split()
                token = pieces[0] if pieces else None
            raise ParseError(number, column, 'syntax error', str(token) if token is not None else None)

        name_token, *items = tree.children
        cls = instruction_types.get(str(name_token), None)
        if cls is None:
            raise ParseError(number, name_token.column, f'unknown instruction {str(name_token)!r}', str(name_token))

        args = {}
        for item in items:
            if item.data == 'bare':
                #`report moments` stands for `report kind=moments`
                value, = item.children
                if cls.positional is None or len(items) != 1:
                    raise ParseError(number, value.column, f'expected key=value for {cls.name}', str(value))
                key, key_column = cls.positional, value.column
            else:
                key_token, value = item.children
                key, key_column = str(key_token), key_token.column
            if key not in cls.keys:
                raise ParseError(number, key_column, f'unknown key {key!r} for {cls.name}', key)
            if key in args:
                raise ParseError(number, key_column, f'duplicate key {key!r}', key)
            try:
                args[key] = (cls.keys[key](str(value)), value)
            except ValueError as e:
                raise ParseError(number, value.column, str(e), str(value))

        for key in cls.keys:
            if key not in args:
                raise ParseError(number, len(line.rstrip()) + 1, f'missing key {key!r} for {cls.name}')

        instruction = cls({key: converted for key, (converted, _) in args.items()}, number, name_token.column)
        problem = instruction.validate()
        if problem is not None:
            key, message = problem
            value = args[key][1]
            raise ParseError(number, value.column, message, str(value))
        return instruction

    def serialize(self):
        return ''.join(instruction.serialize() + '\n' for instruction in self.instructions)

    def __eq__(self, other):
        return isinstance(other, CircuitProgram) and self.instructions == other.instructions

    def __len__(self):
        return len(self.instructions)

    def __iter__(self):
        return iter(self.instructions)

    def __repr__(self):
        return f'CircuitProgram({len(self.instructions)} instructions)'


#############
# Execution #
#############

class Run():
    """
    Mutable state threaded through the instructions of one execution
    """
    def __init__(self, grid):
        self.grid = grid
        self.input = None
        self.t = None
        self.state = None
        self.expected_momentum = None
        self.outcomes = {}
        self.selected = None
        self.records = []
        self.report = Report()


@dataclass(frozen=True)
class ExecutionResult():
    text: str
    records: typing.List[dict] = field(default_factory=list)


def parse(text) -> CircuitProgram:
    return CircuitProgram.from_text(text)


def serialize(program: CircuitProgram) -> str:
    return program.serialize()


def execute(program: CircuitProgram, grid: wp.GridSpec = wp.GridSpec()) -> ExecutionResult:
    run = Run(grid)
    for instruction in program:
        try:
            instruction.execute(run)
        except ValueError as e:
            log.warning('Instruction %r on line %s failed: %s', instruction, instruction.line, e)
            raise CircuitRuntimeError(instruction.line, e) from e
    return ExecutionResult(run.report.get_text(), run.records)
