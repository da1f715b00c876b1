#!/usr/bin/env python3
"""Install the measles case-count dataset as data/measles.csv.

The series is the weekly number of measles infections recorded in North
Rhine-Westphalia (Germany) from January 2001 to May 2013, 646 observations,
distributed as the `measles` dataset of the `tscount` R package (CRAN).
This repository does not commit the data; the acceptance suite skips the
case-study criterion when the file is absent.

Two routes, tried in order:

1. --from PATH: normalize an already-downloaded copy (CSV or whitespace
   separated, one count per line, optional header).
2. Rscript with tscount installed:
       install.packages("tscount"); then rerun this script.

The file is validated (length 646, nonnegative integers), written
atomically without a header, and its SHA-256 is printed. Once a trusted
copy has been fetched, pin EXPECTED_SHA256 below so later runs verify
instead of trusting the transport.
"""

from __future__ import annotations

import argparse
import hashlib
import subprocess
import sys
import tempfile
from pathlib import Path

# pin after the first trusted fetch; None skips verification with a notice
EXPECTED_SHA256: str | None = None

_R_SNIPPET = (
    'library(tscount); '
    'write.table(as.integer(measles), file="{path}", sep=",", '
    'row.names=FALSE, col.names=FALSE)'
)


def _read_counts(path: Path) -> list[int]:
    values: list[int] = []
    for lineno, raw in enumerate(path.read_text().splitlines(), start=1):
        text = raw.strip().rstrip(",")
        if not text:
            continue
        try:
            val = float(text)
        except ValueError:
            if lineno == 1:  # header row
                continue
            raise SystemExit(f"{path}: line {lineno}: not a number: {text!r}")
        if val != int(val) or val < 0:
            raise SystemExit(f"{path}: line {lineno}: not a nonnegative integer: {text!r}")
        values.append(int(val))
    return values


def _via_rscript(tmp: Path) -> list[int] | None:
    try:
        proc = subprocess.run(
            ["Rscript", "-e", _R_SNIPPET.format(path=tmp.as_posix())],
            capture_output=True,
            text=True,
            timeout=300,
        )
    except (OSError, subprocess.TimeoutExpired):
        return None
    if proc.returncode != 0:
        sys.stderr.write(proc.stderr)
        return None
    return _read_counts(tmp)


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--from", dest="source", metavar="PATH",
                        help="normalize an existing local copy instead of calling R")
    parser.add_argument("--dest", default=None,
                        help="output path (default: <repo>/data/measles.csv)")
    args = parser.parse_args(argv)

    dest = Path(args.dest) if args.dest else (
        Path(__file__).resolve().parents[1] / "data" / "measles.csv"
    )

    if args.source:
        counts = _read_counts(Path(args.source))
    else:
        with tempfile.TemporaryDirectory() as tmpdir:
            counts = _via_rscript(Path(tmpdir) / "measles.csv")
        if counts is None:
            raise SystemExit(
                "Rscript with the tscount package is not available. Either install it\n"
                '  (R -e \'install.packages("tscount")\') and rerun, or obtain the\n'
                "series yourself and rerun with --from PATH."
            )

    if len(counts) != 646:
        raise SystemExit(f"expected 646 weekly counts, got {len(counts)}")

    payload = "".join(f"{v}\n" for v in counts)
    digest = hashlib.sha256(payload.encode()).hexdigest()
    if EXPECTED_SHA256 is None:
        print("no pinned checksum yet; pin EXPECTED_SHA256 to the value below")
    elif digest != EXPECTED_SHA256:
        raise SystemExit(
            f"checksum mismatch:\n  expected {EXPECTED_SHA256}\n  got      {digest}"
        )

    dest.parent.mkdir(parents=True, exist_ok=True)
    tmp_path = dest.with_suffix(".csv.tmp")
    tmp_path.write_text(payload)
    tmp_path.replace(dest)
    print(f"wrote {dest} ({len(counts)} rows)")
    print(f"sha256 {digest}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
