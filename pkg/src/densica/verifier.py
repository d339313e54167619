"""Exhaustive and sampled engine-vs-oracle verification.

One-dimensional binary spaces are enumerated by integer index (bit i of
the index is cell i) and driven through the table kernels; grids are
enumerated in base-k and driven through the object engine.  Inputs whose
density is undefined are never counted as wrong: their engine outcomes
are tallied in a histogram instead.  Work is split into fixed-size
shards so reports are identical for any worker count.
"""

from __future__ import annotations

import multiprocessing
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .alphabet import BaseSymbol, enumerate_alphabet
from .engine1d import OutcomeKind, default_max_sweeps
from .multidim import (
    CuboidConfiguration,
    IncomparableMemoriesError,
    MemoryMode,
    RuleFlawError,
    run_d,
)
from .oracle import majority
from .rule1d import rule_table

DEFAULT_SHARD_SIZE = 1 << 16
DEFAULT_FAILURE_CAP = 100
DEFAULT_EXHAUSTIVE_CAP_N = 24
DEFAULT_GRID_CAP = 1 << 20


@dataclass(frozen=True, slots=True)
class Shard:
    """Half-open index range [lo, hi) of configurations."""

    lo: int
    hi: int

    def __post_init__(self):
        if self.lo < 0 or self.hi < self.lo:
            raise ValueError(f"bad shard [{self.lo}, {self.hi})")


def make_shards(total: int, shard_size: int = DEFAULT_SHARD_SIZE) -> list[Shard]:
    """Partition [0, total) into fixed-size shards (worker-count free)."""
    return [Shard(lo, min(lo + shard_size, total)) for lo in range(0, total, shard_size)]


@dataclass(frozen=True, slots=True)
class VerifyOptions:
    max_sweeps: int | None = None
    failure_cap: int = DEFAULT_FAILURE_CAP
    shard_size: int = DEFAULT_SHARD_SIZE
    exhaustive_cap_n: int = DEFAULT_EXHAUSTIVE_CAP_N
    grid_cap: int = DEFAULT_GRID_CAP


@dataclass
class VerificationReport:
    """Aggregate of engine-vs-oracle comparisons over one input space."""

    space: str
    checked: int = 0
    classified_correct: int = 0
    classified_wrong: int = 0
    ties_seen: int = 0
    budget_exceeded: int = 0
    incomparable_memories: int = 0
    max_sweeps_observed: int = 0
    max_phase_count_observed: int = 0
    tie_outcomes: dict[str, int] = field(default_factory=dict)
    failures: list[str] = field(default_factory=list)
    failure_cap: int = DEFAULT_FAILURE_CAP

    @property
    def clean(self) -> bool:
        return self.classified_wrong == 0 and self.budget_exceeded == 0

    def check_totals(self) -> None:
        total = (
            self.classified_correct
            + self.classified_wrong
            + self.ties_seen
            + self.budget_exceeded
        )
        if total != self.checked:
            raise AssertionError(
                f"category counts {total} do not add up to checked={self.checked}"
            )

    def add_tie_outcome(self, key: str, count: int = 1) -> None:
        self.tie_outcomes[key] = self.tie_outcomes.get(key, 0) + count

    def merge(self, other: "VerificationReport") -> None:
        self.checked += other.checked
        self.classified_correct += other.classified_correct
        self.classified_wrong += other.classified_wrong
        self.ties_seen += other.ties_seen
        self.budget_exceeded += other.budget_exceeded
        self.incomparable_memories += other.incomparable_memories
        self.max_sweeps_observed = max(self.max_sweeps_observed, other.max_sweeps_observed)
        self.max_phase_count_observed = max(
            self.max_phase_count_observed, other.max_phase_count_observed
        )
        for key, count in other.tie_outcomes.items():
            self.add_tie_outcome(key, count)
        self.failures.extend(other.failures)
        del self.failures[self.failure_cap :]

    def to_dict(self) -> dict:
        return {
            "space": self.space,
            "checked": self.checked,
            "classified_correct": self.classified_correct,
            "classified_wrong": self.classified_wrong,
            "ties_seen": self.ties_seen,
            "budget_exceeded": self.budget_exceeded,
            "incomparable_memories": self.incomparable_memories,
            "max_sweeps_observed": self.max_sweeps_observed,
            "max_phase_count_observed": self.max_phase_count_observed,
            "tie_outcomes": dict(sorted(self.tie_outcomes.items())),
            "failures": list(self.failures),
        }

    def to_text(self) -> str:
        lines = [
            f"space: {self.space}",
            f"  checked             {self.checked}",
            f"  classified correct  {self.classified_correct}",
            f"  classified wrong    {self.classified_wrong}",
            f"  ties seen           {self.ties_seen}",
            f"  budget exceeded     {self.budget_exceeded}",
            f"  incomparable mem.   {self.incomparable_memories}",
            f"  max sweeps          {self.max_sweeps_observed}",
            f"  max phases          {self.max_phase_count_observed}",
        ]
        if self.tie_outcomes:
            hist = ", ".join(f"{k}={v}" for k, v in sorted(self.tie_outcomes.items()))
            lines.append(f"  tie outcomes        {hist}")
        for f in self.failures:
            lines.append(f"  FAIL {f}")
        return "\n".join(lines)


def _binary_tables():
    table = rule_table(2)
    return table.size, *table.as_arrays()


def _report_from_kernel(
    space: str, stats, fail_indices, decode, failure_cap: int
) -> VerificationReport:
    rep = VerificationReport(space=space, failure_cap=failure_cap)
    K = _kernels
    rep.checked = int(stats[K.V_CHECKED])
    rep.classified_correct = int(stats[K.V_CORRECT])
    rep.classified_wrong = int(stats[K.V_WRONG])
    rep.ties_seen = int(stats[K.V_TIES])
    rep.budget_exceeded = int(stats[K.V_BUDGET])
    rep.max_sweeps_observed = int(stats[K.V_MAX_SWEEPS])
    rep.max_phase_count_observed = int(stats[K.V_MAX_PHASES])
    for key, slot in (
        ("CLASSIFIED_0", K.V_TIE_TO_0),
        ("CLASSIFIED_1", K.V_TIE_TO_1),
        ("TIE", K.V_TIE_TO_TIE),
        ("BUDGET_EXCEEDED", K.V_TIE_TO_BUDGET),
    ):
        if stats[slot]:
            rep.add_tie_outcome(key, int(stats[slot]))
    nfail = int(stats[K.V_NFAILS])
    for idx in fail_indices[:nfail]:
        rep.failures.append(decode(int(idx)))
    del rep.failures[failure_cap:]
    rep.check_totals()
    return rep


def config_string(index: int, n: int) -> str:
    """Digit string of binary ring ``index`` (cell 0 first)."""
    return "".join("1" if index >> i & 1 else "0" for i in range(n))


def config_index(text: str) -> int:
    """Inverse of :func:`config_string`."""
    return sum(1 << i for i, ch in enumerate(text) if ch == "1")


def verify_shard(n: int, shard: Shard, options: VerifyOptions = VerifyOptions()) -> VerificationReport:
    """Run and check every binary ring of length n with index in the shard."""
    if n < 1:
        raise ValueError("ring length must be at least 1")
    if shard.hi > 1 << n:
        raise ValueError(f"shard {shard} exceeds the 2^{n} configurations")
    size, sym_tab, evt_tab = _binary_tables()
    max_sweeps = options.max_sweeps or default_max_sweeps(n)
    stats, fails = _kernels.verify_range(
        n, shard.lo, shard.hi, size, sym_tab, evt_tab, max_sweeps, options.failure_cap
    )
    return _report_from_kernel(
        f"ring n={n} k=2 [{shard.lo},{shard.hi})",
        stats,
        fails,
        lambda idx: config_string(idx, n),
        options.failure_cap,
    )


def _verify_worker(args):
    n, lo, hi, options = args
    return n, verify_shard(n, Shard(lo, hi), options)


@dataclass
class RangeReport:
    """Per-length reports for an exhaustive range of ring sizes."""

    by_n: dict[int, VerificationReport]

    @property
    def total(self) -> VerificationReport:
        merged = VerificationReport(space="ring range k=2")
        for n in sorted(self.by_n):
            merged.merge(self.by_n[n])
        merged.space = (
            f"ring n={min(self.by_n)}..{max(self.by_n)} k=2" if self.by_n else merged.space
        )
        return merged

    @property
    def clean(self) -> bool:
        return all(rep.clean for rep in self.by_n.values())

    def to_dict(self) -> dict:
        return {
            "by_n": {str(n): self.by_n[n].to_dict() for n in sorted(self.by_n)},
            "total": self.total.to_dict(),
        }

    def to_text(self) -> str:
        parts = [self.by_n[n].to_text() for n in sorted(self.by_n)]
        parts.append(self.total.to_text())
        return "\n".join(parts)


def warm_kernels() -> None:
    """Trigger JIT compilation before forking workers."""
    size, sym_tab, evt_tab = _binary_tables()
    _kernels.verify_range(2, 0, 4, size, sym_tab, evt_tab, 6, 4)
    tape_tab, mem_tab = _symbol_attrs()
    _kernels.props_range(2, 0, 4, size, sym_tab, evt_tab, tape_tab, mem_tab, 6, 4)
    bits = np.zeros((1, 2), dtype=np.uint8)
    _kernels.props_samples(bits, size, sym_tab, evt_tab, tape_tab, mem_tab, 6, 4)
    _kernels.verify_samples(bits, size, sym_tab, evt_tab, 6, 4)


def _run_tasks(tasks, worker, workers: int):
    """Map tasks preserving order; fork a pool only when it pays off."""
    if workers <= 1 or len(tasks) <= 1:
        return [worker(t) for t in tasks]
    warm_kernels()
    ctx = multiprocessing.get_context("fork")
    with ctx.Pool(min(workers, len(tasks))) as pool:
        return pool.map(worker, tasks)


def verify_exhaustive(
    n_min: int,
    n_max: int,
    workers: int = 1,
    options: VerifyOptions = VerifyOptions(),
) -> RangeReport:
    """Exhaustively verify all binary rings with n_min <= n <= n_max.

    The report is a deterministic function of the space and options;
    worker count only changes how shards are executed.
    """
    if not 1 <= n_min <= n_max:
        raise ValueError(f"bad ring length range {n_min}..{n_max}")
    if n_max > options.exhaustive_cap_n:
        raise ValueError(
            f"n={n_max} exceeds the exhaustive cap {options.exhaustive_cap_n}; "
            "raise the cap explicitly for offline runs"
        )
    tasks = []
    for n in range(n_min, n_max + 1):
        for shard in make_shards(1 << n, options.shard_size):
            tasks.append((n, shard.lo, shard.hi, options))
    results = _run_tasks(tasks, _verify_worker, workers)
    by_n: dict[int, VerificationReport] = {}
    for n, rep in results:
        if n in by_n:
            by_n[n].merge(rep)
        else:
            rep.space = f"ring n={n} k=2 exhaustive"
            by_n[n] = rep
    for rep in by_n.values():
        rep.check_totals()
    return RangeReport(by_n)


def verify_sample(
    n: int,
    count: int,
    seed: int,
    workers: int = 1,
    options: VerifyOptions = VerifyOptions(),
    chunk_rows: int = 2048,
) -> VerificationReport:
    """Seeded random verification for rings too long to enumerate."""
    if n < 1 or count < 1:
        raise ValueError("need n >= 1 and count >= 1")
    tasks = []
    chunk = 0
    remaining = count
    while remaining > 0:
        rows = min(chunk_rows, remaining)
        tasks.append((n, rows, seed, chunk, options))
        remaining -= rows
        chunk += 1
    results = _run_tasks(tasks, _sample_verify_worker, workers)
    report = VerificationReport(
        space=f"ring n={n} k=2 sampled count={count} seed={seed}",
        failure_cap=options.failure_cap,
    )
    for rep in results:
        report.merge(rep)
    report.space = f"ring n={n} k=2 sampled count={count} seed={seed}"
    report.check_totals()
    return report


def _sample_bits(n: int, rows: int, seed: int, chunk: int) -> np.ndarray:
    ss = np.random.SeedSequence(entropy=(seed, n, chunk))
    rng = np.random.Generator(np.random.PCG64(ss))
    return rng.integers(0, 2, size=(rows, n), dtype=np.uint8)


def _sample_verify_worker(args):
    n, rows, seed, chunk, options = args
    size, sym_tab, evt_tab = _binary_tables()
    max_sweeps = options.max_sweeps or default_max_sweeps(n)
    bits = _sample_bits(n, rows, seed, chunk)
    stats, fails = _kernels.verify_samples(
        bits, size, sym_tab, evt_tab, max_sweeps, options.failure_cap
    )
    return _report_from_kernel(
        "chunk",
        stats,
        fails,
        lambda row: "".join(str(int(b)) for b in bits[row]),
        options.failure_cap,
    )


# --- invariant property suites -----------------------------------------

VIOLATION_KINDS = {
    _kernels.VIOL_CONSERVATION: "phase-conservation",
    _kernels.VIOL_LEVEL: "removal-count",
    _kernels.VIOL_PHASE_COUNT: "phase-count",
    _kernels.VIOL_MISCLASSIFIED: "misclassified",
    _kernels.VIOL_BUDGET: "budget-exceeded",
    _kernels.VIOL_KICK_COUNT: "kickstart-count",
}


@dataclass(frozen=True, slots=True)
class PropertyViolation:
    kind: str
    input: str
    sweep: int
    cell: int

    def describe(self) -> str:
        return f"{self.kind} on {self.input} (sweep {self.sweep}, cell {self.cell})"


@dataclass
class PropertySpaceResult:
    label: str
    checked: int = 0
    classified: int = 0
    ties: int = 0
    violations: list[PropertyViolation] = field(default_factory=list)
    violation_count: int = 0
    max_sweeps_observed: int = 0
    max_phase_count_observed: int = 0

    def merge_kernel(self, n: int, stats, viols, decode) -> None:
        K = _kernels
        self.checked += int(stats[K.P_CHECKED])
        self.classified += int(stats[K.P_CLASSIFIED])
        self.ties += int(stats[K.P_TIES])
        self.violation_count += int(stats[K.P_VIOLATIONS])
        self.max_sweeps_observed = max(self.max_sweeps_observed, int(stats[K.P_MAX_SWEEPS]))
        self.max_phase_count_observed = max(
            self.max_phase_count_observed, int(stats[K.P_MAX_PHASES])
        )
        for row in viols:
            if len(self.violations) < 20:
                self.violations.append(
                    PropertyViolation(
                        VIOLATION_KINDS.get(int(row[1]), "unknown"),
                        decode(int(row[0])),
                        int(row[2]),
                        int(row[3]),
                    )
                )


@dataclass
class PropertyReport:
    """Results of the counting-invariant and phase-count suites."""

    seed: int
    spaces: list[PropertySpaceResult] = field(default_factory=list)

    @property
    def total_checked(self) -> int:
        return sum(s.checked for s in self.spaces)

    @property
    def total_violations(self) -> int:
        return sum(s.violation_count for s in self.spaces)

    @property
    def clean(self) -> bool:
        return self.total_violations == 0

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "total_checked": self.total_checked,
            "total_violations": self.total_violations,
            "spaces": [
                {
                    "label": s.label,
                    "checked": s.checked,
                    "classified": s.classified,
                    "ties": s.ties,
                    "violations": s.violation_count,
                    "max_sweeps_observed": s.max_sweeps_observed,
                    "max_phase_count_observed": s.max_phase_count_observed,
                    "examples": [v.describe() for v in s.violations],
                }
                for s in self.spaces
            ],
        }

    def to_text(self) -> str:
        lines = [f"property suites (seed={self.seed})"]
        for s in self.spaces:
            lines.append(
                f"  {s.label}: checked={s.checked} classified={s.classified} "
                f"ties={s.ties} violations={s.violation_count} "
                f"max_sweeps={s.max_sweeps_observed} max_phases={s.max_phase_count_observed}"
            )
            for v in s.violations:
                lines.append(f"    VIOLATION {v.describe()}")
        lines.append(
            f"  total checked={self.total_checked} violations={self.total_violations}"
        )
        return "\n".join(lines)


def _symbol_attrs():
    """Per-symbol tape value (-1 for the removed marker) and memory mask."""
    symbols = enumerate_alphabet(2)
    tape = np.empty(len(symbols), dtype=np.int64)
    mem = np.empty(len(symbols), dtype=np.int64)
    for i, sym in enumerate(symbols):
        if type(sym) is BaseSymbol:
            tape[i] = sym.value
            mem[i] = 0
        else:
            tape[i] = -1 if sym.tape is None else sym.tape
            mem[i] = sym.memory
    return tape, mem


def _props_exhaustive_worker(args):
    n, lo, hi, max_sweeps_opt = args
    size, sym_tab, evt_tab = _binary_tables()
    tape_tab, mem_tab = _symbol_attrs()
    max_sweeps = max_sweeps_opt or default_max_sweeps(n)
    stats, viols = _kernels.props_range(
        n, lo, hi, size, sym_tab, evt_tab, tape_tab, mem_tab, max_sweeps, 20
    )
    return n, lo, stats, np.asarray(viols)


def _props_sample_worker(args):
    n, rows, seed, chunk, max_sweeps_opt = args
    size, sym_tab, evt_tab = _binary_tables()
    tape_tab, mem_tab = _symbol_attrs()
    max_sweeps = max_sweeps_opt or default_max_sweeps(n)
    bits = _sample_bits(n, rows, seed, chunk)
    stats, viols = _kernels.props_samples(
        bits, size, sym_tab, evt_tab, tape_tab, mem_tab, max_sweeps, 20
    )
    decoded = [
        "".join(str(int(b)) for b in bits[int(row[0])]) for row in viols
    ]
    return n, chunk, stats, np.asarray(viols), decoded


DEFAULT_PROPS_SEED = 1105


def check_properties(
    n_max_exhaustive: int = 12,
    samples: dict[int, int] | None = None,
    seed: int = DEFAULT_PROPS_SEED,
    workers: int = 1,
    max_sweeps: int | None = None,
    chunk_rows: int = 2048,
) -> PropertyReport:
    """Run the counting-invariant suites.

    Exhaustive over every binary ring up to ``n_max_exhaustive`` cells,
    then over seeded random rings per the ``samples`` map (length ->
    input count).  Any violation is a hard failure carrying the input.
    """
    report = PropertyReport(seed=seed)

    exh_tasks = []
    for n in range(1, n_max_exhaustive + 1):
        for shard in make_shards(1 << n):
            exh_tasks.append((n, shard.lo, shard.hi, max_sweeps))
    results = _run_tasks(exh_tasks, _props_exhaustive_worker, workers)
    by_n: dict[int, PropertySpaceResult] = {}
    for n, lo, stats, viols in results:
        space = by_n.setdefault(n, PropertySpaceResult(label=f"exhaustive n={n}"))
        space.merge_kernel(n, stats, viols, lambda idx, n=n: config_string(idx, n))
    for n in sorted(by_n):
        report.spaces.append(by_n[n])

    for n, count in sorted((samples or {}).items()):
        tasks = []
        chunk = 0
        remaining = count
        while remaining > 0:
            rows = min(chunk_rows, remaining)
            tasks.append((n, rows, seed, chunk, max_sweeps))
            remaining -= rows
            chunk += 1
        results = _run_tasks(tasks, _props_sample_worker, workers)
        space = PropertySpaceResult(label=f"sampled n={n} count={count}")
        for _, _, stats, viols, decoded in results:
            idx_to_text = dict(zip((int(r[0]) for r in viols), decoded))
            space.merge_kernel(n, stats, viols, lambda idx: idx_to_text.get(idx, "?"))
        report.spaces.append(space)
    return report


# --- d-dimensional exhaustive verification -----------------------------


def grid_string(index: int, n_cells: int, alphabet_size: int) -> str:
    """Scan-order digit string of grid ``index`` (cell 0 first)."""
    digits = []
    for _ in range(n_cells):
        index, d = divmod(index, alphabet_size)
        digits.append(str(d))
    return "".join(digits)


def _grid_values(index: int, n_cells: int, alphabet_size: int) -> list[int]:
    values = []
    for _ in range(n_cells):
        index, d = divmod(index, alphabet_size)
        values.append(d)
    return values


def _outcome_key(result) -> str:
    if result.outcome.kind is OutcomeKind.CLASSIFIED:
        return f"CLASSIFIED_{result.outcome.value}"
    return result.outcome.kind.value


def _verify_d_range(args):
    dims, alphabet_size, mode_value, lo, hi, max_sweeps_opt, failure_cap = args
    mode = MemoryMode(mode_value)
    dims = tuple(dims)
    n_cells = 1
    for d in dims:
        n_cells *= d
    max_sweeps = max_sweeps_opt or default_max_sweeps(n_cells)
    rep = VerificationReport(space="shard", failure_cap=failure_cap)
    for idx in range(lo, hi):
        values = _grid_values(idx, n_cells, alphabet_size)
        verdict = majority(values, alphabet_size)
        config = CuboidConfiguration.from_values(dims, values, alphabet_size)
        flaw: RuleFlawError | None = None
        result = None
        try:
            result = run_d(config, max_sweeps, mode)
        except RuleFlawError as exc:
            flaw = exc
        rep.checked += 1
        if result is not None:
            rep.max_sweeps_observed = max(
                rep.max_sweeps_observed, result.outcome.sweeps_used
            )
        if isinstance(flaw, IncomparableMemoriesError):
            rep.incomparable_memories += 1
        if verdict.is_tie:
            rep.ties_seen += 1
            if flaw is not None:
                key = (
                    "INCOMPARABLE_MEMORIES"
                    if isinstance(flaw, IncomparableMemoriesError)
                    else "RULE_FLAW"
                )
                rep.add_tie_outcome(key)
            else:
                rep.add_tie_outcome(_outcome_key(result))
        else:
            if flaw is not None:
                rep.classified_wrong += 1
                if len(rep.failures) < failure_cap:
                    rep.failures.append(
                        f"{grid_string(idx, n_cells, alphabet_size)} ({type(flaw).__name__})"
                    )
                continue
            rep.max_phase_count_observed = max(
                rep.max_phase_count_observed, result.outcome.propagation_phases
            )
            out = result.outcome
            if out.kind is OutcomeKind.CLASSIFIED and out.value == verdict.majority:
                rep.classified_correct += 1
            elif out.kind is OutcomeKind.BUDGET_EXCEEDED:
                rep.budget_exceeded += 1
                if len(rep.failures) < failure_cap:
                    rep.failures.append(grid_string(idx, n_cells, alphabet_size))
            else:
                rep.classified_wrong += 1
                if len(rep.failures) < failure_cap:
                    rep.failures.append(grid_string(idx, n_cells, alphabet_size))
    return rep


def verify_exhaustive_d(
    dims,
    alphabet_size: int = 2,
    mode: MemoryMode = MemoryMode.COUNTER_FILTERED,
    workers: int = 1,
    options: VerifyOptions = VerifyOptions(),
) -> VerificationReport:
    """Run and check every grid over the given dims and alphabet."""
    dims = tuple(dims)
    n_cells = 1
    for d in dims:
        n_cells *= d
    total = alphabet_size**n_cells
    if total > options.grid_cap:
        raise ValueError(
            f"{total} grids exceed the cap {options.grid_cap}; "
            "raise the cap explicitly for offline runs"
        )
    tasks = [
        (dims, alphabet_size, mode.value, shard.lo, shard.hi, options.max_sweeps, options.failure_cap)
        for shard in make_shards(total, min(options.shard_size, 4096))
    ]
    if workers <= 1 or len(tasks) <= 1:
        results = [_verify_d_range(t) for t in tasks]
    else:
        ctx = multiprocessing.get_context("fork")
        with ctx.Pool(min(workers, len(tasks))) as pool:
            results = pool.map(_verify_d_range, tasks)
    dims_txt = "x".join(str(d) for d in dims)
    report = VerificationReport(
        space=f"grid dims={dims_txt} k={alphabet_size} mode={mode.value} exhaustive",
        failure_cap=options.failure_cap,
    )
    for rep in results:
        report.merge(rep)
    report.space = f"grid dims={dims_txt} k={alphabet_size} mode={mode.value} exhaustive"
    report.check_totals()
    return report


# --- reconstruction-policy comparison -----------------------------------


@dataclass
class ModeComparisonReport:
    """Side-by-side outcomes of the two memory reconstruction policies."""

    space: str
    checked: int = 0
    outcome_discrepancies: int = 0
    filtered_incomparable: int = 0
    literal_incomparable: int = 0
    filtered_budget: int = 0
    literal_budget: int = 0
    examples: list[dict] = field(default_factory=list)
    example_cap: int = 50

    def merge(self, other: "ModeComparisonReport") -> None:
        self.checked += other.checked
        self.outcome_discrepancies += other.outcome_discrepancies
        self.filtered_incomparable += other.filtered_incomparable
        self.literal_incomparable += other.literal_incomparable
        self.filtered_budget += other.filtered_budget
        self.literal_budget += other.literal_budget
        self.examples.extend(other.examples)
        del self.examples[self.example_cap :]

    def to_dict(self) -> dict:
        return {
            "space": self.space,
            "checked": self.checked,
            "outcome_discrepancies": self.outcome_discrepancies,
            "filtered_incomparable": self.filtered_incomparable,
            "literal_incomparable": self.literal_incomparable,
            "filtered_budget": self.filtered_budget,
            "literal_budget": self.literal_budget,
            "examples": list(self.examples),
        }

    def to_text(self) -> str:
        lines = [
            f"mode comparison: {self.space}",
            f"  checked                 {self.checked}",
            f"  outcome discrepancies   {self.outcome_discrepancies}",
            f"  incomparable (filtered) {self.filtered_incomparable}",
            f"  incomparable (literal)  {self.literal_incomparable}",
            f"  budget (filtered)       {self.filtered_budget}",
            f"  budget (literal)        {self.literal_budget}",
        ]
        for ex in self.examples[:10]:
            lines.append(
                f"  e.g. {ex['grid']}: filtered={ex['filtered']} literal={ex['literal']}"
            )
        return "\n".join(lines)


def _compare_modes_range(args):
    dims, alphabet_size, lo, hi, max_sweeps_opt = args
    dims = tuple(dims)
    n_cells = 1
    for d in dims:
        n_cells *= d
    max_sweeps = max_sweeps_opt or default_max_sweeps(n_cells)
    rep = ModeComparisonReport(space="shard")

    def outcome_of(config, mode):
        try:
            result = run_d(config, max_sweeps, mode)
        except IncomparableMemoriesError:
            return "INCOMPARABLE_MEMORIES"
        except RuleFlawError as exc:
            return f"RULE_FLAW:{type(exc).__name__}"
        return _outcome_key(result)

    for idx in range(lo, hi):
        values = _grid_values(idx, n_cells, alphabet_size)
        config = CuboidConfiguration.from_values(dims, values, alphabet_size)
        filtered = outcome_of(config, MemoryMode.COUNTER_FILTERED)
        literal = outcome_of(config.copy(), MemoryMode.PAPER_LITERAL)
        rep.checked += 1
        if filtered == "INCOMPARABLE_MEMORIES":
            rep.filtered_incomparable += 1
        if literal == "INCOMPARABLE_MEMORIES":
            rep.literal_incomparable += 1
        if filtered == "BUDGET_EXCEEDED":
            rep.filtered_budget += 1
        if literal == "BUDGET_EXCEEDED":
            rep.literal_budget += 1
        if filtered != literal:
            rep.outcome_discrepancies += 1
            if len(rep.examples) < rep.example_cap:
                rep.examples.append(
                    {
                        "grid": grid_string(idx, n_cells, alphabet_size),
                        "filtered": filtered,
                        "literal": literal,
                    }
                )
    return rep


def compare_modes_d(
    dims,
    alphabet_size: int = 2,
    workers: int = 1,
    options: VerifyOptions = VerifyOptions(),
) -> ModeComparisonReport:
    """Run every grid under both reconstruction policies and diff them."""
    dims = tuple(dims)
    n_cells = 1
    for d in dims:
        n_cells *= d
    total = alphabet_size**n_cells
    if total > options.grid_cap:
        raise ValueError(f"{total} grids exceed the cap {options.grid_cap}")
    tasks = [
        (dims, alphabet_size, shard.lo, shard.hi, options.max_sweeps)
        for shard in make_shards(total, min(options.shard_size, 4096))
    ]
    if workers <= 1 or len(tasks) <= 1:
        results = [_compare_modes_range(t) for t in tasks]
    else:
        ctx = multiprocessing.get_context("fork")
        with ctx.Pool(min(workers, len(tasks))) as pool:
            results = pool.map(_compare_modes_range, tasks)
    dims_txt = "x".join(str(d) for d in dims)
    report = ModeComparisonReport(space=f"grid dims={dims_txt} k={alphabet_size}")
    for rep in results:
        report.merge(rep)
    report.space = f"grid dims={dims_txt} k={alphabet_size}"
    return report
