"""Price-file parsing and logarithmic returns.

Price files are comma-separated text with a header ``date,<id1>,<id2>,...`` and
one row per trading date (ISO-8601). An empty field marks a missing price. See
``docs/file_formats.md`` for the exact byte layout.
"""

from __future__ import annotations

import csv
import datetime as dt
import io
import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, TextIO

import numpy as np

log = logging.getLogger(__name__)

MISSING_POLICIES = ("drop", "ffill")


class PriceFileError(ValueError):
    """Malformed or invalid price data. ``line`` is 1-based when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


def _freeze(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class PriceTable:
    instrument_ids: tuple[str, ...]
    dates: tuple[dt.date, ...]
    prices: np.ndarray  # (n, T)

    def __post_init__(self):
        ids, dates, p = self.instrument_ids, self.dates, self.prices
        if len(set(ids)) != len(ids):
            raise PriceFileError("duplicate instrument id")
        if any(b <= a for a, b in zip(dates, dates[1:])):
            raise PriceFileError("dates must be strictly increasing")
        if p.shape != (len(ids), len(dates)):
            raise PriceFileError(f"prices shape {p.shape} does not match {len(ids)} ids x {len(dates)} dates")
        if not np.all(np.isfinite(p)) or np.any(p <= 0):
            raise PriceFileError("prices must be strictly positive and finite")
        object.__setattr__(self, "prices", _freeze(np.array(p, dtype=np.float64)))

    @property
    def n(self) -> int:
        return len(self.instrument_ids)

    @property
    def T(self) -> int:
        return len(self.dates)


@dataclass(frozen=True)
class ReturnSeries:
    instrument_ids: tuple[str, ...]
    dates: tuple[dt.date, ...]  # date at the end of each return interval
    return_interval: int
    returns: np.ndarray  # (n, T - interval)

    def __post_init__(self):
        if not np.all(np.isfinite(self.returns)):
            raise ValueError("returns must be finite")
        object.__setattr__(self, "returns", _freeze(np.array(self.returns, dtype=np.float64)))

    @property
    def n(self) -> int:
        return self.returns.shape[0]

    @property
    def T(self) -> int:
        return self.returns.shape[1]


def _parse_price(field: str, line: int) -> float:
    try:
        value = float(field)
    except ValueError:
        raise PriceFileError(f"not a number: {field!r}", line) from None
    if not math.isfinite(value):
        raise PriceFileError(f"non-finite price {field!r}", line)
    if value <= 0:
        raise PriceFileError(f"non-positive price {field!r}", line)
    return value


def parse_prices(raw: TextIO | Iterable[str], missing: str = "drop") -> PriceTable:
    """Read a price file into a rectangular ``PriceTable``.

    ``missing="drop"`` removes every date with any missing price. ``"ffill"``
    carries the previous price forward; dates before an instrument's first
    observation are dropped.
    """
    if missing not in MISSING_POLICIES:
        raise ValueError(f"missing-data policy must be one of {MISSING_POLICIES}, got {missing!r}")
    reader = csv.reader(raw)
    try:
        header = next(reader)
    except StopIteration:
        raise PriceFileError("empty price file", 1) from None
    if len(header) < 2 or header[0].strip().lower() != "date":
        raise PriceFileError("header must be 'date,<id1>,<id2>,...'", 1)
    ids = [h.strip() for h in header[1:]]
    if any(not i for i in ids):
        raise PriceFileError("empty instrument id in header", 1)
    seen: set[str] = set()
    for i in ids:
        if i in seen:
            raise PriceFileError(f"duplicate instrument id {i!r}", 1)
        seen.add(i)

    dates: list[dt.date] = []
    rows: list[list[float]] = []
    for row in reader:
        line = reader.line_num
        if not row or (len(row) == 1 and not row[0].strip()):
            continue
        if len(row) != len(header):
            raise PriceFileError(f"expected {len(header)} fields, got {len(row)}", line)
        try:
            date = dt.date.fromisoformat(row[0].strip())
        except ValueError:
            raise PriceFileError(f"bad date {row[0]!r}", line) from None
        if dates and date == dates[-1]:
            raise PriceFileError(f"duplicate date {date}", line)
        if dates and date < dates[-1]:
            if date in dates:
                raise PriceFileError(f"duplicate date {date}", line)
            raise PriceFileError(f"date {date} out of order", line)
        dates.append(date)
        rows.append([math.nan if not f.strip() else _parse_price(f.strip(), line) for f in row[1:]])

    table = np.array(rows, dtype=np.float64).reshape(len(rows), len(ids))
    keep = np.ones(len(rows), dtype=bool)
    if missing == "ffill":
        for j in range(table.shape[1]):
            col = table[:, j]
            last = math.nan
            for t in range(len(col)):
                if math.isnan(col[t]):
                    col[t] = last
                else:
                    last = col[t]
    keep &= ~np.isnan(table).any(axis=1)
    dropped = int((~keep).sum())
    if dropped:
        log.info("dropped %d date(s) with missing prices", dropped)
    if keep.sum() < 2:
        raise PriceFileError("fewer than 2 complete dates after cleaning")
    return PriceTable(
        instrument_ids=tuple(ids),
        dates=tuple(d for d, k in zip(dates, keep) if k),
        prices=table[keep].T.copy(),
    )


def read_prices(path: str | Path, missing: str = "drop") -> PriceTable:
    with open(path, newline="", encoding="utf-8") as fh:
        return parse_prices(fh, missing=missing)


def format_prices(table: PriceTable) -> str:
    """Serialize to the price-file format; floats use shortest round-trip repr."""
    buf = io.StringIO()
    buf.write(",".join(("date",) + table.instrument_ids) + "\n")
    for t, date in enumerate(table.dates):
        buf.write(date.isoformat())
        for v in table.prices[:, t]:
            buf.write("," + repr(float(v)))
        buf.write("\n")
    return buf.getvalue()


def write_prices(table: PriceTable, path: str | Path) -> None:
    Path(path).write_text(format_prices(table), encoding="utf-8", newline="")


def log_returns(p: PriceTable, interval: int = 1) -> ReturnSeries:
    """``r[i, t] = ln p[i, t + interval] - ln p[i, t]``."""
    if interval < 1:
        raise ValueError(f"return interval must be positive, got {interval}")
    if interval >= p.T:
        raise ValueError(f"return interval {interval} must be smaller than the number of dates {p.T}")
    logp = np.log(p.prices)
    return ReturnSeries(
        instrument_ids=p.instrument_ids,
        dates=p.dates[interval:],
        return_interval=interval,
        returns=logp[:, interval:] - logp[:, :-interval],
    )
