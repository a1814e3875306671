"""End-to-end tabulation: enumerate, classify, compute invariants, report.

The pipeline has four stages: candidate codes, move-equivalence classes,
invariant vectors per class representative, and the final table.  Each stage
persists its output as a plain text checkpoint when a checkpoint directory
is configured, so a long run survives interruption; resuming validates file
digests and continues after the last completed stage, with final outputs
byte-identical to an uninterrupted run.

A class is counted at the smallest crossing number found among its stored
members, and enters the table only when at least one minimal member is
non-split.  Classes whose minimal members are all split are displayed
connected sums, and pair notation does not pin down the relative chirality
of the summands (one such code can stand for two distinct knots), so listing
them would miscount; every class with a prime minimal member qualifies.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from multiprocessing import get_context
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import _kernels
from .alexander import LaurentPolynomial, alexander_poly
from .codes import PairCode, enumerate_codes, parse_code, serialize_code
from .colortests import (ColorMatrix, InvariantVector, affine, conjugation,
                         enumerate_tests, invariant_vector, irreducible,
                         same_test)
from .moves import ClassStore, classify, parse_store, serialize_store
from .realize import realize


class CorruptCheckpoint(RuntimeError):
    """A checkpoint file is missing, unparseable, or fails its digest."""


class ConfigMismatch(ValueError):
    """A checkpoint was written under a different configuration."""


@dataclass(frozen=True)
class RunConfig:
    """Inputs of a tabulation run.

    The two knobs that shape the census are the move bound and the test
    budget (enumerated color ceiling, affine moduli, symmetric-group bound);
    checkpoint_path and jobs only affect persistence and speed, so they are
    excluded from the identity that resume checks.
    """

    max_crossings: int
    max_colors: int = 5
    affine_mods: tuple[int, ...] = (3, 5, 7)
    sym_max: int = 5
    identify_mirrors: bool = True
    checkpoint_path: str | None = None
    jobs: int = 1

    def __post_init__(self):
        object.__setattr__(self, "affine_mods",
                           tuple(int(p) for p in self.affine_mods))
        if self.max_crossings < 0:
            raise ValueError("max_crossings must be non-negative")
        if self.max_colors < 0 or self.sym_max < 0:
            raise ValueError("test budgets must be non-negative")
        if any(p < 1 for p in self.affine_mods):
            raise ValueError("affine moduli must be positive")
        if self.jobs < 1:
            raise ValueError("jobs must be at least 1")

    @property
    def enumerate_limit(self) -> int:
        """Largest input crossing number: three under the move bound, so
        young classes keep excursion headroom plus a merge margin."""
        return max(0, self.max_crossings - 3)

    def identity(self) -> dict:
        return {
            "max_crossings": self.max_crossings,
            "max_colors": self.max_colors,
            "affine_mods": list(self.affine_mods),
            "sym_max": self.sym_max,
            "identify_mirrors": self.identify_mirrors,
        }


@dataclass(frozen=True)
class TableRow:
    crossing_number: int
    class_count: int
    distinguished_count: int
    unresolved_pairs: tuple[tuple[int, int], ...] = ()


@dataclass(frozen=True)
class InvariantRow:
    """Invariant data of one census class, keyed by its permanent id."""

    perm: int
    crossing_number: int
    code: PairCode
    vector: InvariantVector


@dataclass
class Report:
    rows: list[TableRow]
    table: str
    stats: dict[str, int]


@dataclass
class PipelineState:
    """Artifacts recovered from a checkpoint, up to the recorded stage."""

    config: RunConfig
    stage: str
    codes: list[PairCode] | None = None
    store: ClassStore | None = None
    invariants: list[InvariantRow] | None = None
    table_text: str | None = None

    def covers(self, stage: str) -> bool:
        return (self.stage != ""
                and _STAGES.index(stage) <= _STAGES.index(self.stage))


_STAGES = ("codes", "classes", "invariants", "table")
_STAGE_FILES = {"codes": "codes.txt", "classes": "classes.tsv",
                "invariants": "invariants.tsv", "table": "table.txt"}


def _sha(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()


def _atomic_write(path: Path, text: str) -> None:
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text(text)
    tmp.replace(path)


class _Checkpoint:
    """Writes stage files and keeps status.json as the commit record."""

    def __init__(self, config: RunConfig):
        self.base = Path(config.checkpoint_path)
        self.config = config
        self.files: dict[str, str] = {}
        self.stage = ""

    def begin(self) -> None:
        self.base.mkdir(parents=True, exist_ok=True)
        cfg_text = json.dumps(self.config.identity(), sort_keys=True) + "\n"
        _atomic_write(self.base / "config.json", cfg_text)
        self.files = {"config.json": _sha(cfg_text)}
        self._write_status()

    def adopt(self) -> None:
        data = json.loads((self.base / "status.json").read_text())
        self.files = dict(data["files"])
        self.stage = data["stage"]

    def save(self, stage: str, text: str) -> None:
        name = _STAGE_FILES[stage]
        _atomic_write(self.base / name, text)
        self.files[name] = _sha(text)
        self.stage = stage
        self._write_status()

    def _write_status(self) -> None:
        body = json.dumps({"stage": self.stage, "files": self.files},
                          sort_keys=True) + "\n"
        _atomic_write(self.base / "status.json", body)


def _split_flags(codes: Sequence[PairCode]) -> list[bool]:
    """Batch split tests; the empty code counts as non-split."""
    flags = [False] * len(codes)
    by_n: dict[int, list[int]] = {}
    for idx, c in enumerate(codes):
        if c.crossing_count > 0:
            by_n.setdefault(c.crossing_count, []).append(idx)
    for n in sorted(by_n):
        idxs = by_n[n]
        flats = np.array([codes[i].flat() for i in idxs], dtype=np.int32)
        for i, s in zip(idxs, _kernels.split_mask(flats)):
            flags[i] = bool(s)
    return flags


def _stage_codes(config: RunConfig) -> list[PairCode]:
    """Canonical realizable non-split codes up to the input limit."""
    out = [PairCode([])]
    for n in range(1, config.enumerate_limit + 1):
        codes = list(enumerate_codes(n, canonical_only=True))
        if not codes:
            continue
        flats = np.array([c.flat() for c in codes], dtype=np.int32)
        rm = _kernels.realizable_mask(flats)
        sm = _kernels.split_mask(flats)
        out.extend(c for c, r, s in zip(codes, rm, sm) if r and not s)
    return out


def census_classes(store: ClassStore) -> list[tuple[int, PairCode, int]]:
    """(permanent id, representative code, crossing number) per kept class.

    The crossing number is the minimum over stored members; a class is kept
    when some minimal member is non-split, and the representative is the
    flat-lexicographically smallest such member, which makes the choice
    independent of insertion order.
    """
    groups: dict[int, list[PairCode]] = {}
    for rec in store.records:
        groups.setdefault(rec.temporary_id, []).append(rec.canonical_code)
    out = []
    for root in sorted(groups):
        members = groups[root]
        min_n = min(c.crossing_count for c in members)
        minimal = [c for c in members if c.crossing_count == min_n]
        keep = [c for c, s in zip(minimal, _split_flags(minimal)) if not s]
        if not keep:
            continue
        rep = min(keep, key=lambda c: c.flat())
        out.append((root, rep, min_n))
    return out


def _partitions(m: int) -> list[tuple[int, ...]]:
    out: list[tuple[int, ...]] = []

    def grow(rem: int, cap: int, cur: list[int]) -> None:
        if rem == 0:
            out.append(tuple(cur))
            return
        for p in range(min(rem, cap), 0, -1):
            cur.append(p)
            grow(rem - p, p, cur)
            cur.pop()

    grow(m, m, [])
    return out


def build_suite(max_colors: int, affine_mods: Iterable[int],
                sym_max: int) -> list[ColorMatrix]:
    """Default test suite: enumerated tests, then affine, then conjugation.

    Reducible tables (some conjugacy classes fall apart into closed color
    subsets) and repeats of an earlier test (same size, related by
    permutation or mirror) are dropped so every suite column carries
    information.
    """
    raw: list[ColorMatrix] = []
    for n in range(1, max_colors + 1):
        raw.extend(enumerate_tests(n))
    for p in affine_mods:
        raw.append(affine(p, 1))
    for m in range(1, sym_max + 1):
        for part in _partitions(m):
            raw.append(conjugation(m, part))
    suite: list[ColorMatrix] = []
    for M in raw:
        if not irreducible(M):
            continue
        if not any(M2.size == M.size and same_test(M, M2) for M2 in suite):
            suite.append(M)
    return suite


def _poly_dense(p: LaurentPolynomial) -> tuple[int, ...]:
    if p.is_zero():
        return ()
    coeffs = p.coefficients
    return tuple(coeffs.get(e, 0) for e in range(p.degree + 1))


def _vector_parts(code: PairCode, suite: Sequence[ColorMatrix]):
    d = realize(code)
    vec = invariant_vector(d, suite)
    return vec.entries, _poly_dense(alexander_poly(d))


_POOL_SUITE: list[ColorMatrix] = []


def _pool_init(suite: list[ColorMatrix]) -> None:
    global _POOL_SUITE
    _POOL_SUITE = suite


def _pool_vector(code_str: str):
    return _vector_parts(parse_code(code_str), _POOL_SUITE)


def _stage_invariants(config: RunConfig,
                      store: ClassStore) -> list[InvariantRow]:
    census = census_classes(store)
    suite = build_suite(config.max_colors, config.affine_mods,
                        config.sym_max)
    if config.jobs > 1 and len(census) > 1:
        lines = [serialize_code(code) for _, code, _ in census]
        chunk = max(1, len(lines) // (config.jobs * 4))
        ctx = get_context("fork")
        with ctx.Pool(config.jobs, _pool_init, (suite,)) as pool:
            parts = pool.map(_pool_vector, lines, chunksize=chunk)
    else:
        parts = [_vector_parts(code, suite) for _, code, _ in census]
    return [InvariantRow(perm, n, code, InvariantVector(entries, dense))
            for (perm, code, n), (entries, dense) in zip(census, parts)]


def _entry_str(value) -> str:
    if isinstance(value, tuple):
        return f"{value[0]}/{value[1]}"
    return str(value)


def _entry_val(text: str):
    if "/" in text:
        a, b = text.split("/")
        return (int(a), int(b))
    return int(text)


def _dense_str(dense: tuple[int, ...]) -> str:
    return ",".join(str(c) for c in dense) if dense else "0"


def _dense_val(text: str) -> tuple[int, ...]:
    vals = tuple(int(t) for t in text.split(","))
    return () if vals == (0,) else vals


def serialize_invariants(rows: Sequence[InvariantRow]) -> str:
    """TSV: permanent id, crossing number, code, test counts, polynomial."""
    lines = []
    for r in rows:
        counts = ";".join(f"{tid}={_entry_str(v)}"
                          for tid, v in r.vector.entries) or "-"
        lines.append(f"{r.perm}\t{r.crossing_number}\t"
                     f"{serialize_code(r.code)}\t{counts}\t"
                     f"{_dense_str(r.vector.polynomial)}")
    return "\n".join(lines) + ("\n" if lines else "")


def parse_invariants(text: str) -> list[InvariantRow]:
    rows = []
    for line in text.splitlines():
        if not line:
            continue
        perm_s, n_s, code_s, counts_s, poly_s = line.split("\t")
        entries = tuple()
        if counts_s != "-":
            entries = tuple((tid, _entry_val(v)) for tid, v in
                            (item.split("=") for item in counts_s.split(";")))
        rows.append(InvariantRow(int(perm_s), int(n_s), parse_code(code_s),
                                 InvariantVector(entries, _dense_val(poly_s))))
    return rows


def distinguish(store: ClassStore,
                vectors: Mapping[int, InvariantVector]) -> list[TableRow]:
    """Group census classes by full invariant vector and aggregate rows.

    Classes sharing a vector form unresolved pairs, attributed to the row of
    the pair's larger crossing number; a class is distinguished when its
    vector matches no other class anywhere in the census.
    """
    census = census_classes(store)
    groups: dict[tuple, list[tuple[int, int]]] = {}
    totals: dict[int, int] = {}
    for perm, _, n in census:
        v = vectors[perm]
        groups.setdefault((v.entries, v.polynomial), []).append((perm, n))
        totals[n] = totals.get(n, 0) + 1
    dist: dict[int, int] = {}
    pairs: dict[int, list[tuple[int, int]]] = {}
    for members in groups.values():
        if len(members) == 1:
            n = members[0][1]
            dist[n] = dist.get(n, 0) + 1
            continue
        members.sort()
        for i, (pa, na) in enumerate(members):
            for pb, nb in members[i + 1:]:
                pairs.setdefault(max(na, nb), []).append((pa, pb))
    if not totals:
        return []
    return [TableRow(n, totals.get(n, 0), dist.get(n, 0),
                     tuple(sorted(pairs.get(n, []))))
            for n in range(max(totals) + 1)]


def emit_table(rows: Sequence[TableRow]) -> str:
    """Fixed-width census table with unresolved pairs listed underneath."""
    lines = [f"{'crossings':>9}  {'knots':>7}  {'distinguished':>13}"]
    for r in rows:
        lines.append(f"{r.crossing_number:>9}  {r.class_count:>7}  "
                     f"{r.distinguished_count:>13}")
    flat_pairs = [(r.crossing_number, p) for r in rows
                  for p in r.unresolved_pairs]
    if flat_pairs:
        lines.append("")
        lines.append("unresolved pairs:")
        for n, (a, b) in flat_pairs:
            lines.append(f"  {a} ~ {b}  ({n} crossings)")
    return "\n".join(lines) + "\n"


def _pad_rows(rows: list[TableRow], limit: int) -> list[TableRow]:
    have = {r.crossing_number for r in rows}
    out = list(rows)
    out.extend(TableRow(n, 0, 0) for n in range(limit + 1) if n not in have)
    out.sort(key=lambda r: r.crossing_number)
    return out


def resume(checkpoint_path) -> PipelineState:
    """Load and digest-check a checkpoint up to its last completed stage."""
    base = Path(checkpoint_path)
    try:
        raw = json.loads((base / "config.json").read_text())
        config = RunConfig(max_crossings=int(raw["max_crossings"]),
                           max_colors=int(raw["max_colors"]),
                           affine_mods=tuple(raw["affine_mods"]),
                           sym_max=int(raw["sym_max"]),
                           identify_mirrors=bool(raw["identify_mirrors"]),
                           checkpoint_path=str(base))
    except OSError as e:
        raise CorruptCheckpoint(f"config.json unreadable: {e}") from e
    except (KeyError, TypeError, ValueError) as e:
        raise CorruptCheckpoint(f"config.json invalid: {e}") from e
    status_path = base / "status.json"
    if not status_path.exists():
        return PipelineState(config=config, stage="")
    try:
        data = json.loads(status_path.read_text())
        stage = data["stage"]
        files = dict(data["files"])
    except (OSError, KeyError, TypeError, ValueError) as e:
        raise CorruptCheckpoint(f"status.json invalid: {e}") from e
    if stage not in ("",) + _STAGES:
        raise CorruptCheckpoint(f"unknown stage {stage!r}")
    state = PipelineState(config=config, stage=stage)
    done = _STAGES[:_STAGES.index(stage) + 1] if stage else ()
    for s in done:
        name = _STAGE_FILES[s]
        try:
            text = (base / name).read_text()
        except OSError as e:
            raise CorruptCheckpoint(f"{name} unreadable: {e}") from e
        if _sha(text) != files.get(name):
            raise CorruptCheckpoint(f"{name} fails its digest")
        try:
            if s == "codes":
                state.codes = [parse_code(line)
                               for line in text.splitlines() if line]
            elif s == "classes":
                state.store = parse_store(text)
            elif s == "invariants":
                state.invariants = parse_invariants(text)
            else:
                state.table_text = text
        except ValueError as e:
            raise CorruptCheckpoint(f"{name} does not parse: {e}") from e
    return state


def run(config: RunConfig,
        resume_from: PipelineState | None = None) -> Report:
    """Execute the pipeline, checkpointing each stage when configured."""
    state = resume_from
    if state is not None and state.config.identity() != config.identity():
        raise ConfigMismatch(
            f"checkpoint config {state.config.identity()} differs from "
            f"requested {config.identity()}")
    ck = _Checkpoint(config) if config.checkpoint_path else None
    if ck is not None:
        if state is None or state.stage == "":
            ck.begin()
        else:
            ck.adopt()

    def have(stage: str) -> bool:
        return state is not None and state.covers(stage)

    if have("codes"):
        codes = state.codes
    else:
        codes = _stage_codes(config)
        if ck:
            ck.save("codes",
                    "".join(serialize_code(c) + "\n" for c in codes))
    if have("classes"):
        store = state.store
    else:
        store = classify(codes, config.max_crossings,
                         config.identify_mirrors)
        if ck:
            ck.save("classes", serialize_store(store))
    if have("invariants"):
        inv = state.invariants
    else:
        inv = _stage_invariants(config, store)
        if ck:
            ck.save("invariants", serialize_invariants(inv))
    vectors = {r.perm: r.vector for r in inv}
    rows = _pad_rows(distinguish(store, vectors), config.enumerate_limit)
    if have("table"):
        text = state.table_text
    else:
        text = emit_table(rows)
        if ck:
            ck.save("table", text)
    stats = {
        "inputs": len(codes),
        "store_records": len(store),
        "classes": len(inv),
        "tests": len(inv[0].vector.entries) if inv else 0,
        "unresolved": sum(len(r.unresolved_pairs) for r in rows),
    }
    return Report(rows=rows, table=text, stats=stats)
