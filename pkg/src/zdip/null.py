"""
Monte Carlo null summaries of the dip under uniform sampling.

A :class:`NullTable` holds, for a grid of sample sizes, the mean and
standard deviation of the dip of ``n`` i.i.d. Uniform(0, 1) draws. Sizes
between grid points are linearly interpolated; sizes above the grid are
clamped to the last entry and flagged.
"""
from __future__ import annotations

import csv
import hashlib
import io
import json
import os
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path
from typing import Callable, Sequence

import numpy as np
from numba import njit

from . import rng
from .dip import _dip_sorted
from .errors import (
    BelowTableMinimum,
    CorruptTable,
    DegenerateEnsemble,
    FormatVersionMismatch,
    InvalidGridPoint,
    InvalidReplicates,
    MissingColumn,
    ZDipError,
    with_index,
)

__all__ = [
    "NullSummary",
    "NullTable",
    "simulate_null_dips",
    "summarize",
    "default_grid",
    "fast_grid",
    "generate_table",
    "get_summary",
    "save_table",
    "load_table",
    "load_default_table",
    "table_checksum",
    "FORMAT_VERSION",
    "FULL_REPLICATES",
    "FAST_REPLICATES",
]

FORMAT_VERSION = 1
MIN_N = 4
FULL_REPLICATES = 9999
FAST_REPLICATES = 999
TABLE_ENV_VAR = "ZDIP_NULL_TABLE"

_BLOCK = 256
_COLUMNS = ("n", "mu", "sigma", "replicates", "seed")
_HEADER_PREFIX = "# zdip-null-table v"
_META_PREFIX = "# metadata: "
_CHECKSUM_PREFIX = "# checksum sha256:"
_NULL_METHOD = "sorted Uniform(0,1) draws as normalised exponential spacings"


@dataclass(frozen=True)
class NullSummary:
    """Null mean/sd of the dip at one sample size."""

    n: int
    mu: float
    sigma: float
    replicates: int
    seed: int | None = None
    extrapolated: bool = False

    def __post_init__(self):
        if self.n < MIN_N:
            raise InvalidGridPoint(f"null summaries start at n={MIN_N}, got {self.n}")
        if self.replicates < 2:
            raise InvalidReplicates(f"need at least 2 replicates, got {self.replicates}")
        if not self.sigma > 0:
            raise DegenerateEnsemble(f"null dips at n={self.n} have sigma={self.sigma!r}")
        if not 1.0 / (2 * self.n) < self.mu < 0.25:
            raise DegenerateEnsemble(f"null mean {self.mu!r} at n={self.n} is outside (1/(2n), 1/4)")

    @property
    def standard_error(self) -> float:
        """Monte Carlo standard error of ``mu``."""
        return self.sigma / np.sqrt(self.replicates)


@dataclass(frozen=True)
class NullTable:
    entries: tuple
    format_version: int = FORMAT_VERSION
    generator_metadata: str = ""
    _n: np.ndarray = field(init=False, repr=False, compare=False)
    _mu: np.ndarray = field(init=False, repr=False, compare=False)
    _sigma: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        entries = tuple(self.entries)
        if not entries:
            raise CorruptTable("a null table needs at least one entry")
        ns = np.array([e.n for e in entries], dtype=np.int64)
        if np.any(np.diff(ns) <= 0):
            raise CorruptTable("table sample sizes must be strictly increasing")
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "_n", ns)
        object.__setattr__(self, "_mu", np.array([e.mu for e in entries]))
        object.__setattr__(self, "_sigma", np.array([e.sigma for e in entries]))

    @property
    def n_min(self) -> int:
        return int(self._n[0])

    @property
    def n_max(self) -> int:
        return int(self._n[-1])

    @property
    def grid(self) -> np.ndarray:
        return self._n.copy()

    def __len__(self):
        return len(self.entries)


@njit(cache=True, nogil=True)
def _null_block(spacings):
    # cumulative exponential spacings divided by their total are distributed
    # exactly as the order statistics of n uniforms
    m, n1 = spacings.shape
    out = np.empty(m)
    for r in range(m):
        s = np.cumsum(spacings[r])
        out[r] = _dip_sorted(s[: n1 - 1] / s[n1 - 1])[0]
    return out


def simulate_null_dips(n: int, replicates: int, seed: int) -> np.ndarray:
    """
    Dips of `replicates` independent samples of `n` Uniform(0, 1) draws.

    Draws come in fixed blocks of 256 replicates, each block with its own
    substream keyed by ``(seed, n, block)``: the output depends only on
    ``(n, replicates, seed)``, and a longer run extends a shorter one.
    """
    n = int(n)
    replicates = int(replicates)
    if n < MIN_N:
        raise InvalidGridPoint(f"null dips are simulated for n >= {MIN_N}, got {n}")
    if replicates < 2:
        raise InvalidReplicates(f"need at least 2 replicates, got {replicates}")
    return _null_dips(n, replicates, seed)


def _null_dips(n, replicates, seed):
    out = np.empty(replicates)
    for b, start in enumerate(range(0, replicates, _BLOCK)):
        size = min(_BLOCK, replicates - start)
        g = rng.substream(seed, rng.NULL_DIPS, n, b)
        out[start : start + size] = _null_block(g.standard_exponential((size, n + 1)))
    return out


def summarize(dips: Sequence[float], n: int, seed: int | None = None) -> NullSummary:
    """Mean and sample standard deviation (ddof=1) of null dips at size `n`."""
    dips = np.asarray(dips, dtype=np.float64)
    if dips.size < 2:
        raise InvalidReplicates(f"need at least 2 null dips, got {dips.size}")
    return NullSummary(
        n=int(n),
        mu=float(dips.mean()),
        sigma=float(dips.std(ddof=1)),
        replicates=int(dips.size),
        seed=seed,
    )


def default_grid() -> np.ndarray:
    """Every size 4..100, then about 132 log-spaced sizes up to 72,000."""
    dense = np.arange(MIN_N, 101)
    sparse = np.unique(np.round(np.geomspace(100, 72_000, 133)).astype(np.int64))
    return np.concatenate([dense, sparse[sparse > 100]])


def fast_grid() -> np.ndarray:
    """Reduced grid for quick tables: 4..30, then 40 log-spaced sizes to 72,000."""
    dense = np.arange(MIN_N, 31)
    sparse = np.unique(np.round(np.geomspace(30, 72_000, 41)).astype(np.int64))
    return np.concatenate([dense, sparse[sparse > 30]])


def _metadata(replicates, seed, extra=None) -> str:
    meta = {
        "replicates": int(replicates),
        "seed": int(seed),
        "seed_policy": "one substream per (n, block of 256 replicates)",
        "generator": rng.GENERATOR_NAME,
        "null_draws": _NULL_METHOD,
    }
    if extra:
        meta.update(extra)
    return json.dumps(meta, sort_keys=True)


def generate_table(
    grid: Sequence[int],
    replicates: int = FULL_REPLICATES,
    seed: int = 0,
    progress: Callable[[int, int, NullSummary], None] | None = None,
    metadata: dict | None = None,
) -> NullTable:
    """
    Simulate one :class:`NullSummary` per grid size.

    `progress`, if given, is called as ``progress(i, len(grid), summary)``
    after each grid point. Extra `metadata` keys are merged into the
    provenance string; nothing time-dependent is added, so a rerun is
    bit-identical.
    """
    grid = [int(g) for g in grid]
    if not grid:
        raise InvalidGridPoint("empty grid")
    entries = []
    for i, n in enumerate(grid):
        try:
            if n < MIN_N:
                raise InvalidGridPoint(f"grid sizes must be >= {MIN_N}, got {n}")
            if i and n <= grid[i - 1]:
                raise InvalidGridPoint(f"grid must be strictly increasing, got {grid[i - 1]} then {n}")
            summary = summarize(simulate_null_dips(n, replicates, seed), n, seed)
        except ZDipError as exc:
            raise with_index(exc, i)
        entries.append(summary)
        if progress is not None:
            progress(i, len(grid), summary)
    return NullTable(tuple(entries), FORMAT_VERSION, _metadata(replicates, seed, metadata))


def get_summary(table: NullTable, n: int) -> NullSummary:
    """
    Null mean/sd at size `n`.

    Exact on grid points, linear in ``n`` between them. Above the largest
    grid size the last entry is returned with ``extrapolated=True``.

    Raises
    ------
    BelowTableMinimum
        `n` is smaller than the first grid size.
    """
    n = int(n)
    if n < table.n_min:
        raise BelowTableMinimum(f"n={n} is below the table minimum n={table.n_min}")
    if n >= table.n_max:
        last = table.entries[-1]
        if n == table.n_max:
            return last
        return replace(last, n=n, extrapolated=True)
    i = int(np.searchsorted(table._n, n))
    hi = table.entries[i]
    if hi.n == n:
        return hi
    lo = table.entries[i - 1]
    w = (n - lo.n) / (hi.n - lo.n)
    return NullSummary(
        n=n,
        mu=lo.mu + w * (hi.mu - lo.mu),
        sigma=lo.sigma + w * (hi.sigma - lo.sigma),
        replicates=min(lo.replicates, hi.replicates),
        seed=lo.seed if lo.seed == hi.seed else None,
    )


def _body_lines(table: NullTable) -> list[str]:
    lines = [f"{_HEADER_PREFIX}{table.format_version}"]
    if table.generator_metadata:
        lines.append(_META_PREFIX + json.dumps(table.generator_metadata))
    lines.append(",".join(_COLUMNS))
    for e in table.entries:
        seed = "" if e.seed is None else str(e.seed)
        lines.append(f"{e.n},{e.mu!r},{e.sigma!r},{e.replicates},{seed}")
    return lines


def _digest(lines) -> str:
    h = hashlib.sha256()
    for line in lines:
        h.update(line.encode("utf-8"))
        h.update(b"\n")
    return h.hexdigest()


def table_checksum(table: NullTable) -> str:
    """SHA-256 that :func:`save_table` writes into the trailing line."""
    return _digest(_body_lines(table))


def dumps_table(table: NullTable) -> str:
    lines = _body_lines(table)
    lines.append(_CHECKSUM_PREFIX + _digest(lines))
    return "\n".join(lines) + "\n"


def save_table(table: NullTable, destination) -> None:
    """
    Write `table` as versioned UTF-8 CSV.

    Floats use the shortest repr that round-trips, so loading gives back the
    same bits. `destination` is a path or a writable text stream.
    """
    text = dumps_table(table)
    if hasattr(destination, "write"):
        destination.write(text)
        return
    Path(destination).write_text(text, encoding="utf-8", newline="\n")


def loads_table(text: str) -> NullTable:
    lines = text.splitlines()
    if not lines or not lines[0].startswith(_HEADER_PREFIX):
        raise CorruptTable("missing '# zdip-null-table v<k>' header line")
    try:
        version = int(lines[0][len(_HEADER_PREFIX):])
    except ValueError:
        raise CorruptTable(f"unreadable header line {lines[0]!r}") from None
    if version != FORMAT_VERSION:
        raise FormatVersionMismatch(f"table format v{version}, this reader supports v{FORMAT_VERSION}")

    while lines and not lines[-1].strip():
        lines.pop()
    if not lines[-1].startswith(_CHECKSUM_PREFIX):
        raise CorruptTable("missing trailing checksum line")
    body = lines[:-1]
    if _digest(body) != lines[-1][len(_CHECKSUM_PREFIX):].strip():
        raise CorruptTable("checksum mismatch")

    metadata = ""
    rest = body[1:]
    if rest and rest[0].startswith(_META_PREFIX):
        metadata = json.loads(rest[0][len(_META_PREFIX):])
        rest = rest[1:]
    reader = csv.DictReader(io.StringIO("\n".join(rest)))
    missing = [c for c in _COLUMNS if c not in (reader.fieldnames or ())]
    if missing:
        raise MissingColumn(f"table lacks column(s): {', '.join(missing)}")

    entries = []
    for lineno, row in enumerate(reader, start=1):
        try:
            entries.append(
                NullSummary(
                    n=int(row["n"]),
                    mu=float(row["mu"]),
                    sigma=float(row["sigma"]),
                    replicates=int(row["replicates"]),
                    seed=int(row["seed"]) if row["seed"] else None,
                )
            )
        except (ZDipError, TypeError, ValueError) as exc:
            raise CorruptTable(f"bad row {lineno}: {exc}") from exc
    return NullTable(tuple(entries), version, metadata)


def load_table(source) -> NullTable:
    """
    Read a table written by :func:`save_table`.

    Raises
    ------
    FormatVersionMismatch
        the header names an unknown format version.
    CorruptTable
        bad header, checksum failure, unparseable or invariant-violating rows.
    MissingColumn
        a required column is absent.
    """
    if hasattr(source, "read"):
        return loads_table(source.read())
    return loads_table(Path(source).read_text(encoding="utf-8"))


def load_default_table() -> NullTable:
    """
    The table named by ``$ZDIP_NULL_TABLE``, else the one shipped with the package.
    """
    path = os.environ.get(TABLE_ENV_VAR)
    if path:
        return load_table(path)
    return _bundled_table()


_BUNDLED = None


def _bundled_table() -> NullTable:
    global _BUNDLED
    if _BUNDLED is None:
        ref = resources.files("zdip") / "data" / "null_table_v1.csv"
        _BUNDLED = loads_table(ref.read_text(encoding="utf-8"))
    return _BUNDLED
