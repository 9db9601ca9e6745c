"""Structure readers, run configuration and report serialization."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from .boundary import Weight
from .complex import PointCloud, uniform_schedule
from .errors import InputError, ParseError
from .spectral import DEFAULT_TAU

SCHEMA_VERSION = 1
SIGNIFICANT_DIGITS = 6


# ---------------------------------------------------------------------------
# Readers
# ---------------------------------------------------------------------------


def _floats(tokens: Sequence[str], line: int) -> list[float]:
    try:
        vals = [float(t) for t in tokens]
    except ValueError:
        raise ParseError(f"non-numeric coordinate in {' '.join(tokens)!r}", line) from None
    if not all(math.isfinite(v) for v in vals):
        raise ParseError("non-finite coordinate", line)
    return vals


def parse_xyz(text: str) -> PointCloud:
    """XYZ format: atom count, comment line, then ``element x y z`` per atom."""
    lines = text.splitlines()
    if not lines or not lines[0].strip():
        raise ParseError("empty file: expected an atom count", 1)
    try:
        n = int(lines[0].split()[0])
    except ValueError:
        raise ParseError(f"atom count {lines[0].strip()!r} is not an integer", 1) from None
    if n <= 0:
        raise ParseError("atom count must be positive", 1)
    body = lines[2:]
    while body and not body[-1].strip():
        body.pop()
    if len(body) != n:
        raise ParseError(f"header announces {n} atoms but {len(body)} atom lines follow", 1)
    elements, coords = [], []
    for k, raw in enumerate(body, start=3):
        tok = raw.split()
        if len(tok) < 4:
            raise ParseError("expected 'element x y z'", k)
        elements.append(tok[0])
        coords.append(_floats(tok[1:4], k))
    return PointCloud(np.array(coords), elements=tuple(elements))


def write_xyz(cloud: PointCloud, comment: str = "") -> str:
    """XYZ text for a 3-D cloud; coordinates keep 12 decimals."""
    if cloud.dim != 3:
        raise InputError("XYZ output needs 3-D coordinates")
    els = cloud.elements or ("X",) * len(cloud)
    out = [str(len(cloud)), comment.replace("\n", " ")]
    for el, (x, y, z) in zip(els, cloud.coords):
        out.append(f"{el} {x:.12f} {y:.12f} {z:.12f}")
    return "\n".join(out) + "\n"


def parse_plain(text: str) -> PointCloud:
    """One point per line: ``x y z`` or ``element x y z``; ``#`` starts a comment."""
    elements, coords = [], []
    for k, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.replace(",", " ").split()
        try:
            float(tok[0])
            el, nums = None, tok
        except ValueError:
            el, nums = tok[0], tok[1:]
        if not nums:
            raise ParseError("no coordinates", k)
        coords.append(_floats(nums, k))
        elements.append(el)
        if len(coords[-1]) != len(coords[0]):
            raise ParseError(f"expected {len(coords[0])} coordinates, got {len(coords[-1])}", k)
    if not coords:
        raise ParseError("no points found", 1)
    labeled = all(e is not None for e in elements)
    return PointCloud(np.array(coords), elements=tuple(elements) if labeled else None)


def parse_csv_points(text: str) -> PointCloud:
    """CSV point cloud; a header naming ``x,y,z`` (and optionally ``element``) is honoured."""
    rows = [r for r in csv.reader(io.StringIO(text)) if any(c.strip() for c in r)]
    if not rows:
        raise ParseError("empty file", 1)
    header = [c.strip().lower() for c in rows[0]]
    start = 1
    try:
        [float(c) for c in header]
        header, start = [], 0
    except ValueError:
        pass
    if header and {"x", "y"} <= set(header):
        cols = [header.index(c) for c in ("x", "y", "z") if c in header]
    elif header:
        cols = [i for i, c in enumerate(rows[1 if len(rows) > 1 else 0]) if _is_number(c)]
    else:
        cols = list(range(len(rows[0])))
    el_col = header.index("element") if "element" in header else None
    coords, elements = [], []
    for k, row in enumerate(rows[start:], start=start + 1):
        if max(cols) >= len(row):
            raise ParseError("too few columns", k)
        coords.append(_floats([row[c] for c in cols], k))
        if el_col is not None:
            elements.append(row[el_col].strip())
    if not coords:
        raise ParseError("no points found", 1)
    return PointCloud(np.array(coords), elements=tuple(elements) if el_col is not None else None)


def _is_number(s: str) -> bool:
    try:
        float(s)
        return True
    except ValueError:
        return False


def parse_pdb_ca(text: str) -> PointCloud:
    """C-alpha atoms of the first model, read by fixed PDB columns.

    Only ``ATOM`` records named ``CA`` with a blank or ``A`` alternate
    location are kept, one per residue.  B-factors come from columns 61-66.
    """
    coords, bfac, labels = [], [], []
    seen: set[tuple[str, str, str]] = set()
    for k, raw in enumerate(text.splitlines(), start=1):
        line = raw.ljust(80)
        rec = line[:6]
        if rec.startswith("ENDMDL"):
            break
        if rec != "ATOM  " or line[12:16].strip() != "CA":
            continue
        if line[16] not in (" ", "A"):
            continue
        chain, resseq, icode = line[21], line[22:26].strip(), line[26]
        key = (chain, resseq, icode)
        if key in seen:
            continue
        xyz = _floats([line[30:38], line[38:46], line[46:54]], k)
        try:
            b = float(line[60:66])
        except ValueError:
            raise ParseError(f"bad B-factor field {line[60:66]!r}", k) from None
        seen.add(key)
        coords.append(xyz)
        bfac.append(b)
        labels.append(f"{chain.strip() or '_'}:{resseq}{icode.strip()}:{line[17:20].strip()}")
    if not coords:
        raise InputError("no C-alpha ATOM records found")
    return PointCloud(np.array(coords), elements=("C",) * len(coords), bfactors=np.array(bfac), labels=tuple(labels))


def parse_distance_csv(text: str) -> np.ndarray:
    """Square distance matrix from CSV (no header)."""
    rows = [r for r in csv.reader(io.StringIO(text)) if any(c.strip() for c in r)]
    if not rows:
        raise ParseError("empty file", 1)
    out = [_floats(r, k) for k, r in enumerate(rows, start=1)]
    if any(len(r) != len(out) for r in out):
        raise ParseError("distance matrix is not square", 1)
    return np.array(out)


def read_structure(path: str | Path) -> PointCloud:
    """Dispatch on extension: .xyz, .pdb/.ent, .csv, anything else as plain ``x y z`` lines."""
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise InputError(f"cannot read {p}: {exc.strerror}") from None
    suffix = p.suffix.lower()
    if suffix == ".xyz":
        return parse_xyz(text)
    if suffix in (".pdb", ".ent"):
        return parse_pdb_ca(text)
    if suffix == ".csv":
        return parse_csv_points(text)
    return parse_plain(text)


def parse_energies(text: str) -> dict[str, float]:
    """``name,energy_ev_per_atom`` rows; a header row is optional."""
    out: dict[str, float] = {}
    for k, row in enumerate(csv.reader(io.StringIO(text)), start=1):
        if not row or not any(c.strip() for c in row):
            continue
        if len(row) < 2:
            raise ParseError("expected 'name,energy'", k)
        name, value = row[0].strip(), row[1].strip()
        if k == 1 and not _is_number(value):
            continue  # header
        out[name] = _floats([value], k)[0]
    if not out:
        raise ParseError("no energies found", 1)
    return out


def parse_schedule(text: str) -> np.ndarray:
    """``start:stop:step`` (inclusive stop) into a uniform radius grid."""
    parts = text.split(":")
    if len(parts) != 3:
        raise InputError(f"schedule {text!r} must look like start:stop:step")
    try:
        a, b, step = (float(x) for x in parts)
    except ValueError:
        raise InputError(f"schedule {text!r} has non-numeric parts") from None
    if a < 0:
        raise InputError("schedule start must be non-negative")
    return uniform_schedule(a, b, step)


# ---------------------------------------------------------------------------
# Configuration and reports
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RunConfig:
    """Settings that determine a report; serialized into JSON output."""

    command: str
    inputs: tuple[str, ...] = ()
    schedule: tuple[float, float, float] | None = None
    q_max: int = 2
    weight: str = "none"
    strict_overlap: bool = False
    tau: float = DEFAULT_TAU
    alphas: tuple[str, ...] = ()
    output_format: str = "csv"
    output: str | None = None
    extra: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.schedule is not None:
            lo, hi, step = self.schedule
            if lo > hi:
                raise InputError("r_min must not exceed r_max")
            if step <= 0:
                raise InputError("grid spacing must be positive")
        if self.tau <= 0:
            raise InputError("zero tolerance must be positive")
        if self.output_format not in ("csv", "json"):
            raise InputError("output format must be csv or json")
        Weight.parse(self.weight)


def fmt_number(x: Any) -> Any:
    """Round floats to six significant digits; other values pass through."""
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        v = float(f"{float(x):.{SIGNIFICANT_DIGITS}g}")
        return 0.0 if v == 0 else v  # no negative zero in output
    if isinstance(x, (list, tuple, np.ndarray)):
        return [fmt_number(v) for v in x]
    return x


def _csv_cell(x: Any) -> str:
    x = fmt_number(x)
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return f"{x:.{SIGNIFICANT_DIGITS}g}"
    if isinstance(x, list):
        return ";".join(_csv_cell(v) for v in x)
    return str(x)


@dataclass
class Report:
    """Records plus a summary; rendered as CSV (records only) or JSON (everything)."""

    config: RunConfig
    records: list[dict[str, Any]]
    summary: dict[str, Any] = field(default_factory=dict)

    def columns(self) -> list[str]:
        cols: list[str] = []
        for rec in self.records:
            cols += [c for c in rec if c not in cols]
        return cols

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        cols = self.columns()
        w.writerow(cols)
        for rec in self.records:
            w.writerow([_csv_cell(rec.get(c)) for c in cols])
        return buf.getvalue()

    def to_json(self) -> str:
        cfg = asdict(self.config)
        payload = {
            "schema_version": SCHEMA_VERSION,
            "config": fmt_number_tree(cfg),
            "records": [fmt_number_tree(r) for r in self.records],
            "summary": fmt_number_tree(self.summary),
        }
        return json.dumps(payload, indent=2, sort_keys=False) + "\n"

    def render(self) -> str:
        return self.to_json() if self.config.output_format == "json" else self.to_csv()


def fmt_number_tree(obj: Any) -> Any:
    if isinstance(obj, dict):
        return {str(k): fmt_number_tree(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [fmt_number_tree(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [fmt_number_tree(v) for v in obj.tolist()]
    return fmt_number(obj)
