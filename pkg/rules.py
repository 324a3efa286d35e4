########################
# Instruction Ordering #
########################

"""
A rule takes an instruction and the names of the instructions before it
via its process function and returns either
* False if the instruction may appear there
* An error message if it may not
"""

class SourceFirst():
    def process(self, instruction, history):
        if instruction.name == 'source' or 'source' in history:
            return False
        return 'missing source'

class AtMostOnce():
    def __init__(self, name):
        self.name = name

    def process(self, instruction, history):
        if instruction.name != self.name: return False
        if self.name not in history: return False
        return f'duplicate {self.name}'

class RequiresBefore():
    """
    Any of `names` needs `required` somewhere earlier in the program
    """
    def __init__(self, names, required):
        self.names = set(names)
        self.required = required

    def process(self, instruction, history):
        if instruction.name not in self.names: return False
        if self.required in history: return False
        return f'{instruction.name} requires {self.required} before it'

class ForbiddenAfter():
    """
    None of `names` may follow `blocker`
    """
    def __init__(self, names, blocker):
        self.names = set(names)
        self.blocker = blocker

    def process(self, instruction, history):
        if instruction.name not in self.names: return False
        if self.blocker not in history: return False
        return f'{instruction.name} is not allowed after {self.blocker}'

default_rules = [
    SourceFirst(),
    AtMostOnce('source'),
    AtMostOnce('bs'),
    AtMostOnce('recombine'),
    RequiresBefore(['kick', 'phase', 'recombine'], 'bs'),
    ForbiddenAfter(['kick', 'phase'], 'recombine'),
    RequiresBefore(['select'], 'recombine'),
    RequiresBefore(['report'], 'select'),
]
