"""Line-based textual pulse-program format (.pseq files).

Grammar, one statement per line ('#' starts a comment, blank lines are
ignored; statements must appear in init -> pulses -> measure order):

    init (pseudo-pure <level> | pseudo-boltzmann
          | boltzmann <temperature_K> <field_mT> | pure <level>)
    pulse (S|I) <j> <k> <angle_deg> [phase=<deg>]
    measure (S|I) <j> <k>

Angles are degrees in the file (experimentalist convention) and radians
everywhere else; values that are exact multiples of 15 degrees convert
through a rational multiple of pi.  Transition validity is checked at
parse time and every error carries a 1-based line and column.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction

from .prep import ExperimentConfig, boltzmann_density, pseudo_boltzmann, pseudo_pure, thermal_polarization
from .pulses import CHANNEL_TRANSITIONS, PulseProgram, PulseStep
from .spincore import DensityMatrix

FILE_EXTENSION = ".pseq"

_TOKEN = re.compile(r"\S+")


class ParseError(ValueError):
    """Syntax or transition-validity error with its source position."""

    def __init__(self, line: int, column: int, message: str):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


def degrees_to_radians(degrees: float) -> float:
    """Degrees to radians; multiples of 15 go through an exact fraction of pi."""
    if degrees == int(degrees) and int(degrees) % 15 == 0:
        ratio = Fraction(int(degrees), 180)
        return math.pi * ratio.numerator / ratio.denominator
    return math.radians(degrees)


def radians_to_degrees(radians: float) -> float:
    degrees = math.degrees(radians)
    snapped = round(degrees)
    if abs(degrees - snapped) < 1e-9 and snapped % 15 == 0:
        return float(snapped)
    return degrees


@dataclass(frozen=True)
class InitDirective:
    """Initial ensemble choice; unused fields stay None."""

    kind: str
    level: int | None = None
    temperature: float | None = None  # K
    field_mt: float | None = None  # mT


@dataclass(frozen=True)
class MeasureDirective:
    """Observable transition for the final population-difference readout."""

    channel: str
    j: int
    k: int


@dataclass(frozen=True)
class ProgramDocument:
    """Parsed .pseq file; line numbers are diagnostics, not content."""

    init: InitDirective | None = None
    steps: tuple[PulseStep, ...] = ()
    measure: MeasureDirective | None = None
    init_line: int | None = field(default=None, compare=False, repr=False)
    step_lines: tuple[int, ...] = field(default=(), compare=False, repr=False)
    measure_line: int | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple(self.steps))
        object.__setattr__(self, "step_lines", tuple(self.step_lines))


def _tokens(content: str) -> list[tuple[str, int]]:
    return [(m.group(), m.start() + 1) for m in _TOKEN.finditer(content)]


def _end_column(tokens: list[tuple[str, int]]) -> int:
    word, col = tokens[-1]
    return col + len(word)


def _number(token: str, line: int, column: int, what: str) -> float:
    try:
        return float(token.replace("−", "-"))
    except ValueError:
        raise ParseError(line, column, f"expected {what}, got {token!r}") from None


def _level(token: str, line: int, column: int) -> int:
    try:
        value = int(token)
    except ValueError:
        raise ParseError(line, column, f"expected a level 1..4, got {token!r}") from None
    if value not in (1, 2, 3, 4):
        raise ParseError(line, column, f"level must be 1..4, got {value}")
    return value


def _channel_transition(tokens, line, start) -> tuple[str, int, int]:
    if len(tokens) < start + 3:
        raise ParseError(line, _end_column(tokens), "expected: channel (S|I), j, k")
    channel, ccol = tokens[start]
    if channel not in CHANNEL_TRANSITIONS:
        raise ParseError(line, ccol, f"channel must be S or I, got {channel!r}")
    j = _level(tokens[start + 1][0], line, tokens[start + 1][1])
    k = _level(tokens[start + 2][0], line, tokens[start + 2][1])
    if (j, k) not in CHANNEL_TRANSITIONS[channel]:
        raise ParseError(
            line, tokens[start + 1][1],
            f"transition {j}<->{k} is not an {channel}-channel transition",
        )
    return channel, j, k


def parse(text: str) -> ProgramDocument:
    """Parse .pseq text; the first error aborts with its line and column."""
    init = None
    init_line = None
    steps: list[PulseStep] = []
    step_lines: list[int] = []
    measure = None
    measure_line = None

    for lineno, raw in enumerate(text.splitlines(), start=1):
        content = raw.split("#", 1)[0]
        tokens = _tokens(content)
        if not tokens:
            continue
        word, col = tokens[0]

        if word == "init":
            if init is not None:
                raise ParseError(lineno, col, "duplicate init directive")
            if steps or measure is not None:
                raise ParseError(lineno, col, "init must precede pulses and measure")
            init = _parse_init(tokens, lineno)
            init_line = lineno
        elif word == "pulse":
            if measure is not None:
                raise ParseError(lineno, col, "pulses must precede the measure directive")
            steps.append(_parse_pulse(tokens, lineno))
            step_lines.append(lineno)
        elif word == "measure":
            if measure is not None:
                raise ParseError(lineno, col, "duplicate measure directive")
            if len(tokens) > 4:
                raise ParseError(lineno, tokens[4][1], "unexpected token after measure directive")
            channel, j, k = _channel_transition(tokens, lineno, 1)
            measure = MeasureDirective(channel, j, k)
            measure_line = lineno
        else:
            raise ParseError(lineno, col, f"unknown statement {word!r}")

    return ProgramDocument(init, tuple(steps), measure,
                           init_line, tuple(step_lines), measure_line)


def _parse_init(tokens, lineno: int) -> InitDirective:
    if len(tokens) < 2:
        raise ParseError(lineno, _end_column(tokens), "init needs a mode")
    mode, mcol = tokens[1]
    if mode in ("pseudo-pure", "pure"):
        if len(tokens) < 3:
            raise ParseError(lineno, _end_column(tokens), f"init {mode} needs a level")
        if len(tokens) > 3:
            raise ParseError(lineno, tokens[3][1], "unexpected token after init directive")
        return InitDirective(mode, level=_level(tokens[2][0], lineno, tokens[2][1]))
    if mode == "pseudo-boltzmann":
        if len(tokens) > 2:
            raise ParseError(lineno, tokens[2][1], "init pseudo-boltzmann takes no arguments")
        return InitDirective(mode)
    if mode == "boltzmann":
        if len(tokens) < 4:
            raise ParseError(lineno, _end_column(tokens),
                             "init boltzmann needs a temperature (K) and a field (mT)")
        if len(tokens) > 4:
            raise ParseError(lineno, tokens[4][1], "unexpected token after init directive")
        temperature = _number(tokens[2][0], lineno, tokens[2][1], "a temperature in K")
        field_mt = _number(tokens[3][0], lineno, tokens[3][1], "a field in mT")
        for value, (token, column) in ((temperature, tokens[2]), (field_mt, tokens[3])):
            if not value > 0:
                raise ParseError(lineno, column, f"value must be positive, got {token}")
        return InitDirective(mode, temperature=temperature, field_mt=field_mt)
    raise ParseError(lineno, mcol, f"unknown init mode {mode!r}")


def _parse_pulse(tokens, lineno: int) -> PulseStep:
    channel, j, k = _channel_transition(tokens, lineno, 1)
    if len(tokens) < 5:
        raise ParseError(lineno, _end_column(tokens), "pulse needs a flip angle in degrees")
    angle_token, acol = tokens[4]
    angle_deg = _number(angle_token, lineno, acol, "a flip angle in degrees")
    if abs(angle_deg) > 360.0:
        raise ParseError(lineno, acol, f"flip angle must lie in [-360, 360], got {angle_token}")
    phase = 0.0
    if len(tokens) > 5:
        phase_token, pcol = tokens[5]
        if not phase_token.startswith("phase="):
            raise ParseError(lineno, pcol, f"expected phase=<deg>, got {phase_token!r}")
        phase_deg = _number(phase_token[len("phase="):], lineno,
                            pcol + len("phase="), "a phase in degrees")
        phase = degrees_to_radians(phase_deg)
    if len(tokens) > 6:
        raise ParseError(lineno, tokens[6][1], "unexpected token after pulse statement")
    return PulseStep(channel, j, k, degrees_to_radians(angle_deg), phase)


def format_document(doc: ProgramDocument) -> str:
    """Canonical text: degrees at 6 significant digits, zero phases omitted."""
    lines = []
    if doc.init is not None:
        lines.append(_format_init(doc.init))
    for step in doc.steps:
        lines.append(_format_pulse(step))
    if doc.measure is not None:
        m = doc.measure
        lines.append(f"measure {m.channel} {m.j} {m.k}")
    return "".join(line + "\n" for line in lines)


def _format_degrees(radians: float) -> str:
    return f"{radians_to_degrees(radians):.6g}"


def _format_init(init: InitDirective) -> str:
    if init.kind in ("pseudo-pure", "pure"):
        return f"init {init.kind} {init.level}"
    if init.kind == "pseudo-boltzmann":
        return "init pseudo-boltzmann"
    return f"init boltzmann {init.temperature:.6g} {init.field_mt:.6g}"


def _format_pulse(step: PulseStep) -> str:
    text = f"pulse {step.channel} {step.j} {step.k} {_format_degrees(step.flip_angle)}"
    if step.phase != 0.0:
        text += f" phase={_format_degrees(step.phase)}"
    return text


def to_program(doc: ProgramDocument) -> PulseProgram:
    return PulseProgram(doc.steps)


def initial_density(doc: ProgramDocument) -> DensityMatrix:
    """Ensemble the document starts from; defaults to the level-1 projector."""
    init = doc.init
    if init is None:
        return pseudo_pure(1)
    if init.kind in ("pseudo-pure", "pure"):
        return pseudo_pure(init.level)
    if init.kind == "pseudo-boltzmann":
        return pseudo_boltzmann()
    config = ExperimentConfig(field=init.field_mt * 1e-3, temperature=init.temperature)
    return boltzmann_density(thermal_polarization(config, mode="linear"))
