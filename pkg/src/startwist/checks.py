"""Shared result type for report-style verification operations."""

from __future__ import annotations

from typing import NamedTuple


class CheckReport(NamedTuple):
    """Outcome of an identity check: verdict plus the measured worst deviation."""

    ok: bool
    max_deviation: float
