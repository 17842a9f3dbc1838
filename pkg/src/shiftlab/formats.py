"""Text formats for shifts, codes and finite systems, and the bundled catalog.

Shift files::

    format sft-v1            # or sofic-v1
    name golden_mean         # optional
    dim 1                    # 2 for SFTs on Z^2
    alphabet 0 1
    forbidden 11             # SFT; 2D rows separated by '/', bottom row first
    vertex a                 # sofic
    edge a b 1               # sofic: from, to, label

Code files::

    format code-v1
    neighborhood 0 1
    domain catalog:full2.sft
    codomain catalog:golden_mean.sft
    map 10->1                # one line per neighborhood pattern

Finite system files::

    n=4
    group z                  # or finite
    gen s (0 1 2)(3)
    entourage U (0,1) (1,0)  # the diagonal is always included

``#`` starts a comment. Paths starting with ``catalog:`` name bundled files;
other relative paths in code files are resolved against the code file.
"""
from __future__ import annotations

import hashlib
import re
from importlib import resources
from pathlib import Path

from .codes import BlockCode
from .errors import InputError
from .lattice import FiniteShape
from .relations import FiniteDynSystem, Relation
from .shifts import Alphabet, ShiftPresentation

CATALOG_PREFIX = "catalog:"


def _lines(text: str):
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            key, _, rest = line.partition(" ")
            yield key, rest.strip()


def catalog_dir() -> Path:
    return Path(str(resources.files("shiftlab") / "catalog"))


def list_catalog() -> list[str]:
    return sorted(p.name for p in catalog_dir().iterdir() if p.suffix in (".sft", ".sofic", ".code"))


def resolve(path: str | Path, base: Path | None = None) -> Path:
    s = str(path)
    if s.startswith(CATALOG_PREFIX):
        p = catalog_dir() / s[len(CATALOG_PREFIX):]
    else:
        p = Path(s)
        if not p.is_absolute() and base is not None:
            p = base / p
    if not p.exists():
        raise InputError(f"no such file: {s}")
    return p


def digest(path: str | Path) -> str:
    return hashlib.sha256(resolve(path).read_bytes()).hexdigest()


def parse_shift(text: str, name: str | None = None) -> ShiftPresentation:
    fmt = dim = alphabet = None
    forbidden, vertices, edges = [], [], []
    for key, rest in _lines(text):
        if key == "format":
            fmt = rest
        elif key == "name":
            name = rest
        elif key == "dim":
            dim = int(rest)
        elif key == "alphabet":
            alphabet = Alphabet(rest.split())
        elif key == "forbidden":
            forbidden.append(rest)
        elif key == "vertex":
            vertices.extend(rest.split())
        elif key == "edge":
            parts = rest.split()
            if len(parts) != 3:
                raise InputError(f"edge lines need 'from to label': {rest!r}")
            edges.append(tuple(parts))
        else:
            raise InputError(f"unknown shift file directive {key!r}")
    if alphabet is None:
        raise InputError("shift file has no alphabet line")
    if fmt == "sft-v1":
        if vertices or edges:
            raise InputError("SFT files take forbidden lines, not vertices or edges")
        return ShiftPresentation.sft(alphabet, forbidden, dim=dim or 1, name=name)
    if fmt == "sofic-v1":
        if forbidden or (dim or 1) != 1:
            raise InputError("sofic files are one-dimensional and take vertex/edge lines")
        return ShiftPresentation.sofic(alphabet, vertices, edges, name=name)
    raise InputError(f"unknown or missing shift format {fmt!r}")


def load_shift(path: str | Path, base: Path | None = None) -> ShiftPresentation:
    p = resolve(path, base)
    return parse_shift(p.read_text(), name=p.stem)


def parse_code(text: str, base: Path | None = None, name: str | None = None) -> BlockCode:
    fmt = nb = dom = cod = None
    table: dict[str, str] = {}
    for key, rest in _lines(text):
        if key == "format":
            fmt = rest
        elif key == "name":
            name = rest
        elif key == "neighborhood":
            nb = FiniteShape([int(t) for t in rest.split()], dim=1)
        elif key == "domain":
            dom = load_shift(rest, base)
        elif key == "codomain":
            cod = load_shift(rest, base)
        elif key == "map":
            lhs, sep, rhs = rest.partition("->")
            if not sep:
                raise InputError(f"map lines look like 'pattern->symbol': {rest!r}")
            table[lhs.strip()] = rhs.strip()
        else:
            raise InputError(f"unknown code file directive {key!r}")
    if fmt != "code-v1":
        raise InputError(f"unknown or missing code format {fmt!r}")
    if nb is None or dom is None:
        raise InputError("code files need neighborhood and domain lines")
    rule = {}
    for k, v in table.items():
        tokens = tuple(dom.alphabet.split(k))
        if len(tokens) != len(nb):
            raise InputError(f"pattern {k!r} does not match the neighborhood size {len(nb)}")
        rule[tokens] = v
    return BlockCode(nb, rule, dom, cod, name=name)


def load_code(path: str | Path) -> BlockCode:
    p = resolve(path)
    return parse_code(p.read_text(), base=p.parent, name=p.stem)


_CYCLE = re.compile(r"\(([^()]*)\)")
_PAIR = re.compile(r"\(\s*(-?\d+)\s*,\s*(-?\d+)\s*\)")


def _cycles_to_perm(text: str, n: int) -> list[int]:
    perm = list(range(n))
    for body in _CYCLE.findall(text):
        pts = [int(t) for t in re.split(r"[\s,]+", body.strip()) if t]
        for a, b in zip(pts, pts[1:] + pts[:1]):
            if not (0 <= a < n and 0 <= b < n):
                raise InputError(f"cycle entry out of range in {text!r}")
            perm[a] = b
    return perm


def parse_system(text: str) -> tuple[FiniteDynSystem, dict[str, Relation]]:
    n = None
    kind = "z"
    gens: dict[str, str] = {}
    ents: dict[str, str] = {}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("n="):
            n = int(line[2:])
            continue
        key, _, rest = line.partition(" ")
        name, _, body = rest.strip().partition(" ")
        if key == "gen":
            gens[name] = body
        elif key == "entourage":
            ents[name] = body
        elif key == "group":
            kind = {"z": "z", "finite": "finite"}.get(name, None)
            if kind is None:
                raise InputError("group must be 'z' or 'finite'")
        else:
            raise InputError(f"unknown system file directive {key!r}")
    if n is None:
        raise InputError("system file needs an n= line")
    sys = FiniteDynSystem(n, {g: _cycles_to_perm(body, n) for g, body in gens.items()}, kind=kind)
    rels = {}
    for name, body in ents.items():
        pairs = [(int(a), int(b)) for a, b in _PAIR.findall(body)]
        rels[name] = Relation.from_pairs(n, pairs, reflexive=True)
    return sys, rels


def load_system(path: str | Path):
    return parse_system(resolve(path).read_text())


def parse_shape(text: str, dim: int | None = None) -> FiniteShape:
    """Shapes on the command line: ``-1..1``, ``0,2,5`` or ``0:0,1:0`` for Z^2."""
    text = text.strip()
    pts: list = []
    for item in filter(None, (t.strip() for t in text.split(","))):
        if ".." in item:
            a, b = item.split("..")
            pts.extend(range(int(a), int(b) + 1))
        elif ":" in item:
            pts.append(tuple(int(c) for c in item.split(":")))
        else:
            pts.append(int(item))
    if not pts:
        raise InputError(f"empty shape {text!r}")
    return FiniteShape(pts, dim=dim)
