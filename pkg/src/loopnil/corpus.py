"""Built-in corpus of small loops, shipped as Cayley-table files."""

from __future__ import annotations

from importlib import resources
from pathlib import Path

from . import constructions as C
from .loop import Loop, format_cayley, parse_cayley

# nonassociative loop of prime order 5; not centrally nilpotent
_L5 = [[0, 1, 2, 3, 4], [1, 0, 3, 4, 2], [2, 3, 4, 0, 1], [3, 4, 1, 2, 0], [4, 2, 0, 1, 3]]


def _constructors() -> dict:
    Z = C.cyclic
    out = {f"Z{n}": (lambda n=n: Z(n)) for n in range(2, 9)}
    out.update({
        "Z2xZ2": lambda: C.product_of(Z(2), Z(2)),
        "Z2xZ4": lambda: C.product_of(Z(2), Z(4)),
        "Z2xZ2xZ2": lambda: C.product_of(Z(2), Z(2), Z(2)),
        "S3": C.symmetric3,
        "D4": lambda: C.dihedral(4),
        "Q8": C.quaternion,
        "L5": lambda: Loop(_L5),
        "Z12": lambda: Z(12),
        "Z2xS3": lambda: C.product_of(Z(2), C.symmetric3()),
        "Z3xD4": lambda: C.product_of(Z(3), C.dihedral(4)),
    })
    return out


_NOTES = {
    "ex6": None,  # hand-written file
    "L5": "nonassociative loop of prime order 5",
    "Z2xS3": "direct product Z2 x S3 (dihedral of order 12)",
    "Z3xD4": "direct product Z3 x D4; pairs (i, j) indexed i*8 + j",
}

NAMES = ("ex6",) + tuple(_constructors())


def _data_dir():
    return resources.files("loopnil") / "data"


def load(name: str) -> Loop:
    if name not in NAMES:
        raise KeyError(f"unknown corpus entry {name!r}; known: {', '.join(NAMES)}")
    return parse_cayley((_data_dir() / f"{name}.tbl").read_text())


def builtin(max_order: int | None = None) -> list[tuple[str, Loop]]:
    out = [(name, load(name)) for name in NAMES]
    if max_order is not None:
        out = [(name, Q) for name, Q in out if Q.order <= max_order]
    return out


def path_of(name: str) -> str:
    return str(_data_dir() / f"{name}.tbl")


def write_data_files(directory: str | Path) -> list[Path]:
    """Regenerate the constructed corpus files (the ex6 file is hand-written)."""
    directory = Path(directory)
    written = []
    for name, make in _constructors().items():
        note = _NOTES.get(name) or name
        path = directory / f"{name}.tbl"
        path.write_text(format_cayley(make(), comment=note))
        written.append(path)
    return written


def constructed(name: str) -> Loop:
    return _constructors()[name]()
