"""Parser for the line-oriented description format.

Example::

    dim 1
    alphabet 0 1
    sft golden { forbid (0)=1 (1)=1 }
    code id { radius 0 ; default 0 ; map (0)=0 -> 0 ; map (0)=1 -> 1 }
    toeplitz t1 { omega 1 0 1 1 }
    cmd blocks golden 1

A braced body may span several lines; inside braces a line break separates
clauses just like ``;``. ``#`` starts a comment.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .coding import SlidingBlockCode
from .patterns import Alphabet, Pattern, check_dimension, window_cells
from .sft import BlockLanguage, Sft
from .toeplitz import ToeplitzSpec

_CELL = re.compile(r"\(\s*(-?\d+(?:\s*,\s*-?\d+)*)\s*\)\s*=\s*([^\s;()=]+)")
_NAME = re.compile(r"^[A-Za-z_][\w.-]*$")


class ParseError(ValueError):
    def __init__(self, errors: list[tuple[int, str]]):
        self.errors = errors
        super().__init__("\n".join(f"line {ln}: {msg}" for ln, msg in errors))


@dataclass
class Command:
    op: str
    args: list[str]
    options: dict[str, str]
    line: int


@dataclass
class Document:
    dimension: int | None = None
    alphabets: list[Alphabet] = field(default_factory=list)
    sfts: dict[str, Sft] = field(default_factory=dict)
    codes: dict[str, SlidingBlockCode] = field(default_factory=dict)
    languages: dict[str, BlockLanguage] = field(default_factory=dict)
    toeplitz: dict[str, ToeplitzSpec] = field(default_factory=dict)
    commands: list[Command] = field(default_factory=list)

    def kind_of(self, name: str) -> str | None:
        for kind, table in (("sft", self.sfts), ("code", self.codes),
                            ("lang", self.languages), ("toeplitz", self.toeplitz)):
            if name in table:
                return kind
        return None


# op -> argument kinds; "int" is a nonnegative integer, "*sft" one or more SFTs
COMMANDS: dict[str, tuple[str, ...]] = {
    "blocks": ("sft", "int"),
    "empty": ("sft", "int"),
    "periodic": ("sft", "int"),
    "dist": ("source", "source", "int"),
    "equal": ("source", "source", "int"),
    "restrict": ("lang", "int"),
    "product": ("sft", "sft", "int"),
    "projcheck": ("*sft", "int"),
    "transition": ("lang",),
    "higher": ("lang",),
    "apply": ("code", "source", "int"),
    "refine": ("code", "int"),
    "stability": ("sft", "code"),
    "imagecheck": ("source", "code", "sft", "int"),
    "encode": ("toeplitz", "int"),
    "decode": ("toeplitz", "int", "int"),
    "structure": ("toeplitz", "int"),
    "orbit": ("toeplitz", "int", "int"),
    "perturb": ("sft", "code"),
    "render": ("sft", "int"),
    "fuzz": ("int",),
}

PERTURB_OPTIONS = {"keep", "patmax", "imgmax"}


class _Parser:
    def __init__(self):
        self.doc = Document()
        self.errors: list[tuple[int, str]] = []
        self.alphabet = Alphabet(("0", "1"))

    def error(self, line: int, msg: str) -> None:
        self.errors.append((line, msg))

    @property
    def dim(self) -> int:
        return self.doc.dimension or 1

    def statements(self, text: str):
        buf, start, depth = [], 0, 0
        for ln, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if not buf:
                start = ln
            buf.append(line)
            depth += line.count("{") - line.count("}")
            if depth < 0:
                self.error(ln, "unbalanced '}'")
                buf, depth = [], 0
            elif depth == 0:
                yield start, " ; ".join(buf)
                buf = []
        if buf:
            self.error(start, "unterminated '{' block")

    def parse(self, text: str) -> Document:
        for ln, stmt in self.statements(text):
            try:
                self.statement(ln, stmt)
            except ValueError as exc:
                self.error(ln, str(exc))
        if self.errors:
            raise ParseError(self.errors)
        return self.doc

    def statement(self, ln: int, stmt: str) -> None:
        head, _, rest = stmt.partition(" ")
        rest = rest.strip()
        if head == "dim":
            self.set_dim(rest)
        elif head == "alphabet":
            names = rest.split()
            if not names:
                raise ValueError("empty alphabet")
            if len(set(names)) != len(names):
                raise ValueError("alphabet repeats a symbol")
            self.alphabet = Alphabet(tuple(names))
            self.doc.alphabets.append(self.alphabet)
        elif head in ("sft", "code", "toeplitz", "lang"):
            m = re.fullmatch(r"(\S+)\s*\{(.*)\}", rest)
            if not m:
                raise ValueError(f"expected '{head} NAME {{ ... }}'")
            name, body = m.group(1), m.group(2).strip(" ;")
            if not _NAME.match(name):
                raise ValueError(f"bad name {name!r}")
            if self.doc.kind_of(name):
                raise ValueError(f"duplicate name {name!r}")
            getattr(self, f"parse_{head}")(name, body)
        elif head == "cmd":
            self.parse_cmd(ln, rest)
        else:
            raise ValueError(f"unknown statement {head!r}")

    def set_dim(self, rest: str) -> None:
        try:
            d = int(rest)
        except ValueError:
            raise ValueError(f"bad dimension {rest!r}") from None
        check_dimension(d)
        if self.doc.dimension is not None and d != self.doc.dimension:
            raise ValueError(f"dimension mismatch: document already uses dimension {self.doc.dimension}")
        if self.doc.dimension is None and (self.doc.sfts or self.doc.codes or self.doc.languages):
            raise ValueError("'dim' must precede object definitions")
        self.doc.dimension = d

    def symbol(self, name: str, alphabet: Alphabet | None = None) -> int:
        alphabet = alphabet or self.alphabet
        if name not in alphabet.names:
            raise ValueError(f"unknown symbol {name!r}")
        return alphabet.index(name)

    def pattern(self, text: str) -> Pattern:
        text = text.strip()
        cells = {}
        pos = 0
        for m in _CELL.finditer(text):
            if text[pos:m.start()].strip():
                raise ValueError(f"syntax error near {text[pos:m.start()].strip()!r}")
            pos = m.end()
            coords = tuple(int(x) for x in m.group(1).split(","))
            if len(coords) != self.dim:
                raise ValueError(f"dimension mismatch: cell {coords} in a {self.dim}-dimensional document")
            if coords in cells:
                raise ValueError(f"cell {coords} assigned twice")
            cells[coords] = self.symbol(m.group(2))
        if text[pos:].strip():
            raise ValueError(f"syntax error near {text[pos:].strip()!r}")
        if not cells:
            raise ValueError("empty pattern")
        return Pattern.make(cells, self.dim)

    def parse_sft(self, name: str, body: str) -> None:
        if body.startswith("forbid"):
            body = body[len("forbid"):]
        elif body:
            raise ValueError("sft body must start with 'forbid'")
        forbidden = [self.pattern(chunk) for chunk in body.split(";") if chunk.strip()]
        self.doc.sfts[name] = Sft(self.dim, self.alphabet, tuple(forbidden))

    def parse_code(self, name: str, body: str) -> None:
        radius, default, out, kind = 0, None, self.alphabet, None
        maps: list[tuple[Pattern, str]] = []
        for clause in (c.strip() for c in body.split(";")):
            if not clause:
                continue
            key, _, val = clause.partition(" ")
            val = val.strip()
            if key == "radius":
                radius = int(val)
                if radius < 0:
                    raise ValueError("negative radius")
            elif key == "default":
                default = val
            elif key == "out":
                out = Alphabet(tuple(val.split()))
            elif key == "map":
                lhs, arrow, rhs = val.partition("->")
                if not arrow:
                    raise ValueError("map clause needs '->'")
                maps.append((self.pattern(lhs), rhs.strip()))
            elif key in ("identity", "constant"):
                kind = (key, val)
            else:
                raise ValueError(f"unknown code clause {key!r}")
        d = self.dim
        if kind and kind[0] == "identity":
            self.doc.codes[name] = SlidingBlockCode.identity(d, self.alphabet)
            return
        if kind and kind[0] == "constant":
            sym = self.symbol(kind[1], out)
            self.doc.codes[name] = SlidingBlockCode.constant(d, self.alphabet, sym, out, radius)
            return
        cells = window_cells(radius, d)
        table = {}
        for p, rhs in maps:
            if p.cells != cells:
                raise ValueError(f"map pattern {p} does not cover the radius-{radius} window")
            if p.symbols in table:
                raise ValueError(f"window {p} mapped twice")
            table[p.symbols] = self.symbol(rhs, out)
        dflt = self.symbol(default, out) if default is not None else 0
        self.doc.codes[name] = SlidingBlockCode.from_table(d, radius, self.alphabet, out, table, dflt)

    def parse_toeplitz(self, name: str, body: str) -> None:
        omega, enum = (), None
        for clause in (c.strip() for c in body.split(";")):
            if not clause:
                continue
            key, _, val = clause.partition(" ")
            if key == "omega":
                omega = tuple(int(b) for b in val.split())
            elif key == "enum":
                enum = tuple(int(x) for x in val.split())
            else:
                raise ValueError(f"unknown toeplitz clause {key!r}")
        if self.doc.dimension not in (None, 1):
            raise ValueError("dimension mismatch: toeplitz points are 1-dimensional")
        self.doc.toeplitz[name] = ToeplitzSpec(omega, enum)

    def parse_lang(self, name: str, body: str) -> None:
        radius = None
        blocks = []
        for clause in (c.strip() for c in body.split(";")):
            if not clause:
                continue
            key, _, val = clause.partition(" ")
            if key == "radius":
                radius = int(val)
            elif key == "block":
                blocks.append(self.pattern(val))
            else:
                raise ValueError(f"unknown lang clause {key!r}")
        if radius is None:
            raise ValueError("lang needs a radius clause")
        self.doc.languages[name] = BlockLanguage.from_patterns(blocks, self.alphabet, radius, self.dim)

    def parse_cmd(self, ln: int, rest: str) -> None:
        tokens = rest.split()
        if not tokens:
            raise ValueError("empty command")
        op, raw = tokens[0], tokens[1:]
        if op not in COMMANDS:
            raise ValueError(f"unknown command {op!r}")
        args = [t for t in raw if "=" not in t]
        options = dict(t.split("=", 1) for t in raw if "=" in t)
        kinds = COMMANDS[op]
        if kinds and kinds[0] == "*sft":
            if len(args) < 2:
                raise ValueError(f"{op} needs at least one SFT and a resolution")
            kinds = ("sft",) * (len(args) - 1) + kinds[1:]
        if len(args) != len(kinds):
            raise ValueError(f"{op} takes {len(kinds)} arguments, got {len(args)}")
        for arg, kind in zip(args, kinds):
            if kind == "int":
                if not re.fullmatch(r"\d+", arg):
                    raise ValueError(f"{op}: expected a nonnegative integer, got {arg!r}")
                continue
            found = self.doc.kind_of(arg)
            if found is None:
                raise ValueError(f"{op}: unknown name {arg!r}")
            wanted = ("sft", "lang") if kind == "source" else (kind,)
            if found not in wanted:
                raise ValueError(f"{op}: {arg!r} is a {found}, expected {' or '.join(wanted)}")
        allowed = PERTURB_OPTIONS if op == "perturb" else set()
        for key, val in options.items():
            if key not in allowed:
                raise ValueError(f"{op}: unknown option {key!r}")
            if not re.fullmatch(r"\d+", val):
                raise ValueError(f"{op}: option {key} needs an integer")
        self.doc.commands.append(Command(op, args, options, ln))


def parse_document(text: str) -> Document:
    return _Parser().parse(text)
