"""Seed-spec mini-language and the run configuration file.

Seed specs::

    rect:CENTER,HALFWIDTH[,HEIGHT]   normalized when HEIGHT is omitted
    rect:unit                        indicator of [0, 1)
    bump[:B]                         smooth bump, B defaults to 3a/4
    coswin                           cosine window of half-width a
    gauss                            Gaussian vacuum
    sampled:PATH.csv                 x,re[,im] samples

Numeric fields accept small expressions in ``a``, ``L``, ``pi`` and
``sqrt``, with implicit multiplication after a number (``3a/4``).

The configuration file is sectioned ``key = value`` text; :meth:`RunConfig.dumps`
writes the canonical form, which parses back to an identical config.
"""

import ast
import configparser
import math
import operator
import re
from dataclasses import dataclass, field, fields, replace

from .errors import ConfigError
from .seedfn import (CosineWindow, GaussianVacuum, LatticeParams, Rectangle,
                     Sampled, SmoothBump)

COMMANDS = ("orthonormalize", "reproduce", "frame-bounds", "kq-check",
            "mra-compare")
TARGETS = ("translates", "example1", "example2", "example3", "coherent")

DEFAULT_TOLERANCES = {
    "quad": 1e-10,      # absolute tolerance of inner products
    "coeff": 1e-10,     # grid-doubling stability of the coefficient tables
    "floor": 1e-6,      # symbol positivity floor, relative to max F
    "gram": 1e-2,       # allowed |Gram - delta| for summary.json "pass"
}

_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul,
           ast.Div: operator.truediv, ast.Pow: operator.pow}
_UNARY = {ast.USub: operator.neg, ast.UAdd: operator.pos}
_FUNCS = {"sqrt": math.sqrt}


def eval_expr(text, names=None):
    """Evaluate an arithmetic expression such as ``3a/4`` or ``sqrt(2 pi)``."""
    env = {"pi": math.pi}
    env.update(names or {})
    # implicit product after a number or ")", leaving exponents like 1e-3 alone
    src = re.sub(r"(\d|\))\s*(?=(?![eE][+-]?\d)[A-Za-z(])", r"\1*", text.strip())

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return float(node.value)
        if isinstance(node, ast.Name):
            if node.id not in env:
                raise ConfigError(f"unknown name {node.id!r} in {text!r}")
            return float(env[node.id])
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.UnaryOp) and type(node.op) in _UNARY:
            return _UNARY[type(node.op)](ev(node.operand))
        if (isinstance(node, ast.Call) and isinstance(node.func, ast.Name)
                and node.func.id in _FUNCS and len(node.args) == 1):
            return _FUNCS[node.func.id](ev(node.args[0]))
        raise ConfigError(f"unsupported expression {text!r}")

    try:
        tree = ast.parse(src, mode="eval")
    except SyntaxError:
        raise ConfigError(f"cannot parse expression {text!r}") from None
    try:
        return ev(tree)
    except ZeroDivisionError:
        raise ConfigError(f"division by zero in {text!r}") from None


def parse_seed(spec, lattice):
    """Build a seed function from its spec string for the given lattice."""
    kind, _, arg = spec.strip().partition(":")
    names = {"a": lattice.a, "L": lattice.L}
    try:
        if kind == "rect":
            if arg == "unit":
                return Rectangle(0.0, 1.0, 1.0, label="rect:unit")
            parts = [eval_expr(p, names) for p in arg.split(",")]
            if len(parts) not in (2, 3):
                raise ConfigError(f"rect needs CENTER,HALFWIDTH[,HEIGHT]: {spec!r}")
            if parts[1] <= 0:
                raise ConfigError(f"rect half-width must be positive: {spec!r}")
            return Rectangle.centered(*parts, label=spec)
        if kind == "bump":
            b = eval_expr(arg, names) if arg else 0.75 * lattice.a
            return SmoothBump(b, label=spec)
        if kind == "coswin" and not arg:
            return CosineWindow(lattice.a)
        if kind == "gauss" and not arg:
            return GaussianVacuum()
        if kind == "sampled" and arg:
            return Sampled.from_csv(arg)
    except ValueError as exc:
        raise ConfigError(f"bad seed {spec!r}: {exc}") from None
    raise ConfigError(f"unknown seed spec {spec!r}")


def _fmt(value):
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


@dataclass(frozen=True)
class RunConfig:
    command: str = "orthonormalize"
    target: str = ""
    seed: str = "rect:0,3a/4"
    L: int = 4
    A: float = None
    step: float = None
    overlap_radius: int = 8
    coeff_radius: int = 24
    N: int = 4
    grid: int = 256
    probe: bool = False
    out: str = "out"
    tolerances: dict = field(default_factory=lambda: dict(DEFAULT_TOLERANCES))

    _SECTIONS = {
        "run": ("command", "target", "seed", "out"),
        "lattice": ("L", "A", "step"),
        "truncation": ("overlap_radius", "coeff_radius", "N", "grid", "probe"),
    }

    def __post_init__(self):
        self.validate()

    def validate(self):
        if self.command not in COMMANDS:
            raise ConfigError(f"command: unknown command {self.command!r}")
        if self.command == "reproduce" and self.target not in TARGETS:
            raise ConfigError(f"target: must be one of {', '.join(TARGETS)}")
        if self.L < 1:
            raise ConfigError("L: must be >= 1")
        for name in ("A", "step"):
            v = getattr(self, name)
            if v is not None and not v > 0:
                raise ConfigError(f"{name}: must be positive")
        for name in ("overlap_radius", "coeff_radius", "N"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name}: radii must be >= 1")
        if self.grid < 16:
            raise ConfigError("grid: must be >= 16")
        for k, v in self.tolerances.items():
            if k not in DEFAULT_TOLERANCES:
                raise ConfigError(f"tolerances.{k}: unknown tolerance name")
            if not v > 0:
                raise ConfigError(f"tolerances.{k}: must be positive")

    @property
    def lattice(self):
        return LatticeParams(self.L, self.A)

    def tol(self, name):
        return self.tolerances.get(name, DEFAULT_TOLERANCES[name])

    def as_dict(self):
        d = {f.name: getattr(self, f.name) for f in fields(self)}
        d["tolerances"] = dict(sorted(self.tolerances.items()))
        return d

    def dumps(self):
        """Canonical text: fixed section/key order, ``repr`` floats."""
        lines = []
        for sec, keys in self._SECTIONS.items():
            lines.append(f"[{sec}]")
            lines.extend(f"{k} = {_fmt(getattr(self, k))}" for k in keys)
            lines.append("")
        lines.append("[tolerances]")
        for k in sorted(self.tolerances):
            lines.append(f"{k} = {_fmt(float(self.tolerances[k]))}")
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, text, source="<config>"):
        parser = configparser.ConfigParser(interpolation=None)
        parser.optionxform = str
        try:
            parser.read_string(text, source=source)
        except configparser.Error as exc:
            raise ConfigError(f"{source}: {exc}") from None
        kw = {}
        types = {f.name: f.type for f in fields(cls)}
        known = set(cls._SECTIONS) | {"tolerances"}
        for sec in parser.sections():
            if sec not in known:
                raise ConfigError(f"{source}:{_line_of(text, sec)}: unknown section [{sec}]")
        for sec, keys in cls._SECTIONS.items():
            if not parser.has_section(sec):
                continue
            for key, raw in parser.items(sec):
                if key not in keys:
                    raise ConfigError(f"{source}:{_line_of(text, sec, key)}: "
                                      f"unknown field {sec}.{key}")
                try:
                    kw[key] = _convert(types[key], raw)
                except ValueError:
                    raise ConfigError(f"{source}:{_line_of(text, sec, key)}: "
                                      f"bad value for {key}: {raw!r}") from None
        if parser.has_section("tolerances"):
            tols = {}
            for key, raw in parser.items("tolerances"):
                try:
                    tols[key] = float(raw)
                except ValueError:
                    raise ConfigError(f"{source}:{_line_of(text, 'tolerances', key)}: "
                                      f"bad tolerance {raw!r}") from None
            kw["tolerances"] = {**DEFAULT_TOLERANCES, **tols}
        try:
            return cls(**kw)
        except ConfigError as exc:
            raise ConfigError(f"{source}: {exc}") from None

    @classmethod
    def load(cls, path):
        try:
            with open(path, encoding="utf-8") as fh:
                return cls.loads(fh.read(), source=str(path))
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from None

    def updated(self, **changes):
        return replace(self, **{k: v for k, v in changes.items() if v is not None})


def _convert(kind, raw):
    raw = raw.strip()
    if kind in ("int", int):
        return int(raw)
    if kind in ("float", float):
        return None if raw == "" else float(raw)
    if kind in ("bool", bool):
        low = raw.lower()
        if low not in ("true", "false"):
            raise ValueError(raw)
        return low == "true"
    return raw


def _line_of(text, section, key=None):
    """1-based line of ``[section]`` (or of ``key`` inside it); 0 if absent."""
    current = None
    for i, line in enumerate(text.splitlines(), 1):
        s = line.strip()
        if s.startswith("[") and s.endswith("]"):
            current = s[1:-1].strip()
            if key is None and current == section:
                return i
        elif current == section and key is not None:
            if re.match(rf"{re.escape(key)}\s*[=:]", s):
                return i
    return 0


def parse_tolerance(item):
    """``NAME=VAL`` from the ``--tol`` flag."""
    name, sep, val = item.partition("=")
    if not sep or name not in DEFAULT_TOLERANCES:
        raise ConfigError(f"--tol expects NAME=VAL with NAME in "
                          f"{', '.join(DEFAULT_TOLERANCES)}; got {item!r}")
    try:
        return name, float(val)
    except ValueError:
        raise ConfigError(f"--tol {name}: not a number: {val!r}") from None
