"""Reference sequences and OEIS b-file loading.

Only local b-files are read; the embedded prefixes are the values printed
alongside the definitions of the three sequences.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from .errors import BFileError

__all__ = ["ReferenceSequence", "REFERENCE", "parse_bfile", "load_bfile", "computed_values"]


@dataclass(frozen=True)
class ReferenceSequence:
    oeis_id: str
    description: str
    prefix: dict[int, int]
    extended: dict[int, int] = field(default_factory=dict)

    def values(self) -> dict[int, int]:
        return {**self.extended, **self.prefix}


REFERENCE = {
    "A001190": ReferenceSequence(
        "A001190",
        "Wedderburn-Etherington numbers u_n",
        dict(enumerate([1, 1, 1, 2, 3, 6, 11, 23, 46, 98], start=1)),
    ),
    "A003609": ReferenceSequence(
        "A003609",
        "total automorphism count of size-n shapes, [z^n]F(z,2)",
        dict(enumerate([1, 2, 2, 10, 14, 42, 90, 354], start=1)),
    ),
    # a(k) = (2k-1)!!, so b_n = (2n-3)!! = a(n-1)
    "A001147": ReferenceSequence(
        "A001147",
        "double factorials (2k-1)!!, with b_n = a(n-1)",
        {0: 1, 1: 1, 2: 3, 3: 15},
    ),
}


def parse_bfile(text: str) -> dict[int, int]:
    """Parse "n a(n)" lines; '#' lines and blank lines are skipped."""
    out: dict[int, int] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        s = line.strip()
        if not s or s.startswith("#"):
            continue
        parts = s.split()
        if len(parts) != 2:
            raise BFileError(f"expected 'n a(n)', got {line!r}", lineno)
        try:
            n, value = int(parts[0]), int(parts[1])
        except ValueError:
            raise BFileError(f"non-integer field in {line!r}", lineno) from None
        if n in out:
            raise BFileError(f"index {n} repeated", lineno)
        out[n] = value
    return out


def load_bfile(path, oeis_id: str | None = None) -> ReferenceSequence:
    """Read a b-file and check it against the embedded prefix.

    The id defaults to an ``A\\d{6}`` token in the file name (``b001190.txt``
    maps to A001190).
    """
    path = Path(path)
    if oeis_id is None:
        stem = path.stem
        digits = "".join(ch for ch in stem if ch.isdigit())
        oeis_id = f"A{int(digits):06d}" if digits else ""
    if oeis_id not in REFERENCE:
        raise BFileError(f"no embedded reference for {oeis_id!r}")
    ref = REFERENCE[oeis_id]
    text = path.read_text()
    values = parse_bfile(text)
    # locate the line of the first conflict for the error message
    lines = {n: i for i, n in _index_lines(text)}
    for n, v in values.items():
        if n in ref.prefix and ref.prefix[n] != v:
            raise BFileError(f"{oeis_id}({n}) = {v} conflicts with known value {ref.prefix[n]}", lines.get(n))
    return ReferenceSequence(ref.oeis_id, ref.description, ref.prefix,
                             {n: v for n, v in values.items() if n not in ref.prefix})


def _index_lines(text):
    for lineno, line in enumerate(text.splitlines(), start=1):
        s = line.strip()
        if s and not s.startswith("#"):
            yield lineno, int(s.split()[0])


def computed_values(oeis_id: str, max_index: int) -> dict[int, int]:
    """This package's values of a reference sequence, indices 1..max_index (0.. for A001147)."""
    from .series import bivariate_F, otter_numbers
    from .trees import double_factorial

    if oeis_id == "A001190":
        u = otter_numbers(max_index)
        return {n: u[n] for n in range(1, max_index + 1)}
    if oeis_id == "A003609":
        F = bivariate_F(max_index)
        return {n: int(F.evaluate(n, 2)) for n in range(1, max_index + 1)}
    if oeis_id == "A001147":
        return {k: double_factorial(2 * k - 1) for k in range(0, max_index + 1)}
    raise KeyError(oeis_id)
