"""Hot loops for exhaustive verification and invariant sweeps.

Everything here operates on encoded symbol indices and flat rule tables
(see :mod:`densica.rule1d`), so a run is a pure table-lookup loop.  The
functions are written in nopython-compatible style and JIT-compiled with
numba when it is importable; the plain-Python definitions remain the
fallback and the reference for equivalence tests.

Outcome codes: 0 classified, 1 tie, 2 budget exhausted.
Event codes follow rule1d: 1 kickstart, 2 swap-reset, 3 swap-converge,
4 tie.
Violation codes: 0 none, 1 in-phase count drift, 2 wrong count level
after a phase boundary, 3 wrong total phase count, 4 classified against
the majority (or tied with one), 5 sweep budget exhausted, 6 wrong
number of kickstarts.
"""

from __future__ import annotations

import numpy as np

OUT_CLASSIFIED = 0
OUT_TIE = 1
OUT_BUDGET = 2

VIOL_NONE = 0
VIOL_CONSERVATION = 1
VIOL_LEVEL = 2
VIOL_PHASE_COUNT = 3
VIOL_MISCLASSIFIED = 4
VIOL_BUDGET = 5
VIOL_KICK_COUNT = 6

# stats layout for _verify_range / _verify_samples
V_CHECKED = 0
V_CORRECT = 1
V_WRONG = 2
V_TIES = 3
V_BUDGET = 4
V_MAX_SWEEPS = 5
V_MAX_PHASES = 6
V_NFAILS = 7
V_TIE_TO_0 = 8
V_TIE_TO_1 = 9
V_TIE_TO_TIE = 10
V_TIE_TO_BUDGET = 11
V_STATS_LEN = 12

# stats layout for _props_range / _props_samples
P_CHECKED = 0
P_VIOLATIONS = 1
P_MAX_SWEEPS = 2
P_MAX_PHASES = 3
P_TIES = 4
P_CLASSIFIED = 5
P_STATS_LEN = 6


def _run_one(cells, k, size, sym_tab, evt_tab, max_sweeps):
    """Run one encoded configuration in place.

    Returns (outcome, value, sweeps_used, phases); value is -1 unless
    classified.
    """
    n = cells.shape[0]
    phases = 0
    for sweep in range(1, max_sweeps + 1):
        left = cells[n - 1]
        for i in range(n):
            pair = left * size + cells[i]
            evt = evt_tab[pair]
            if evt == 4:
                return OUT_TIE, -1, sweep, phases
            if evt == 1 or evt == 2:
                phases += 1
            new = sym_tab[pair]
            cells[i] = new
            left = new
        first = cells[0]
        if first < k:
            uniform = True
            for i in range(1, n):
                if cells[i] != first:
                    uniform = False
                    break
            if uniform:
                return OUT_CLASSIFIED, first, sweep, phases
    return OUT_BUDGET, -1, max_sweeps, phases


def _verify_range(n, lo, hi, size, sym_tab, evt_tab, max_sweeps, fail_cap):
    """Check every binary ring with index in [lo, hi) against the counts.

    Configuration index: bit i of the index is cell i.  Returns a stats
    vector (layout above) and the indices of failing configurations.
    """
    stats = np.zeros(V_STATS_LEN, dtype=np.int64)
    fails = np.zeros(fail_cap, dtype=np.int64)
    cells = np.empty(n, dtype=np.int64)
    nfail = 0
    for idx in range(lo, hi):
        ones = 0
        for i in range(n):
            b = (idx >> i) & 1
            cells[i] = b
            ones += b
        zeros = n - ones
        code, val, sweeps, phases = _run_one(cells, 2, size, sym_tab, evt_tab, max_sweeps)
        stats[V_CHECKED] += 1
        if sweeps > stats[V_MAX_SWEEPS]:
            stats[V_MAX_SWEEPS] = sweeps
        if zeros == ones:
            stats[V_TIES] += 1
            if code == OUT_CLASSIFIED:
                stats[V_TIE_TO_0 + val] += 1
            elif code == OUT_TIE:
                stats[V_TIE_TO_TIE] += 1
            else:
                stats[V_TIE_TO_BUDGET] += 1
        else:
            if phases > stats[V_MAX_PHASES]:
                stats[V_MAX_PHASES] = phases
            majority = 0 if zeros > ones else 1
            if code == OUT_CLASSIFIED and val == majority:
                stats[V_CORRECT] += 1
            else:
                if code == OUT_BUDGET:
                    stats[V_BUDGET] += 1
                else:
                    stats[V_WRONG] += 1
                if nfail < fail_cap:
                    fails[nfail] = idx
                    nfail += 1
    stats[V_NFAILS] = nfail
    return stats, fails


def _props_one(cells, size, sym_tab, evt_tab, tape_tab, mem_tab, max_sweeps):
    """Instrumented binary run checking the counting invariants.

    Tracks, after every update and until convergence starts, that for
    each value b the tape count plus membership in the freshly written
    cell's memory equals the initial count minus the completed phases.
    On classification the total phase count and the winner are checked.

    Returns (violation, v_sweep, v_cell, outcome, value, sweeps, phases).
    """
    n = cells.shape[0]
    init0 = 0
    for i in range(n):
        init0 += 1 - cells[i]
    init1 = n - init0
    c0 = init0
    c1 = init1
    p = 0
    phases = 0
    kicks = 0
    converged = False
    for sweep in range(1, max_sweeps + 1):
        left = cells[n - 1]
        for i in range(n):
            cur = cells[i]
            pair = left * size + cur
            evt = evt_tab[pair]
            if evt == 4:
                if init0 != init1:
                    return VIOL_MISCLASSIFIED, sweep, i, OUT_TIE, -1, sweep, phases
                return VIOL_NONE, 0, 0, OUT_TIE, -1, sweep, phases
            new = sym_tab[pair]
            t_old = tape_tab[cur]
            if t_old == 0:
                c0 -= 1
            elif t_old == 1:
                c1 -= 1
            t_new = tape_tab[new]
            if t_new == 0:
                c0 += 1
            elif t_new == 1:
                c1 += 1
            if evt == 1:
                phases += 1
                kicks += 1
            elif evt == 2:
                phases += 1
                p += 1
            elif evt == 3:
                converged = True
            cells[i] = new
            left = new
            if not converged:
                am = mem_tab[new]
                if c0 + (am & 1) != init0 - p or c1 + (am >> 1 & 1) != init1 - p:
                    if evt == 1 or evt == 2:
                        return VIOL_LEVEL, sweep, i, OUT_CLASSIFIED, -1, sweep, phases
                    return VIOL_CONSERVATION, sweep, i, OUT_CLASSIFIED, -1, sweep, phases
        first = cells[0]
        if first < 2:
            uniform = True
            for i in range(1, n):
                if cells[i] != first:
                    uniform = False
                    break
            if uniform:
                if init0 == n or init1 == n:
                    if phases != 0 or kicks != 0:
                        return VIOL_PHASE_COUNT, sweep, 0, OUT_CLASSIFIED, first, sweep, phases
                else:
                    if kicks != 1:
                        return VIOL_KICK_COUNT, sweep, 0, OUT_CLASSIFIED, first, sweep, phases
                    smaller = init0 if init0 < init1 else init1
                    if phases != smaller + 1:
                        return VIOL_PHASE_COUNT, sweep, 0, OUT_CLASSIFIED, first, sweep, phases
                    if init0 != init1:
                        majority = 0 if init0 > init1 else 1
                        if first != majority:
                            return VIOL_MISCLASSIFIED, sweep, 0, OUT_CLASSIFIED, first, sweep, phases
                return VIOL_NONE, 0, 0, OUT_CLASSIFIED, first, sweep, phases
    return VIOL_BUDGET, max_sweeps, 0, OUT_BUDGET, -1, max_sweeps, phases


def _props_range(n, lo, hi, size, sym_tab, evt_tab, tape_tab, mem_tab, max_sweeps, viol_cap):
    """Instrumented sweep over binary ring indices in [lo, hi)."""
    stats = np.zeros(P_STATS_LEN, dtype=np.int64)
    viols = np.zeros((viol_cap, 4), dtype=np.int64)
    cells = np.empty(n, dtype=np.int64)
    nviol = 0
    for idx in range(lo, hi):
        for i in range(n):
            cells[i] = (idx >> i) & 1
        viol, v_sweep, v_cell, code, val, sweeps, phases = _props_one(
            cells, size, sym_tab, evt_tab, tape_tab, mem_tab, max_sweeps
        )
        stats[P_CHECKED] += 1
        if sweeps > stats[P_MAX_SWEEPS]:
            stats[P_MAX_SWEEPS] = sweeps
        if phases > stats[P_MAX_PHASES]:
            stats[P_MAX_PHASES] = phases
        if code == OUT_TIE:
            stats[P_TIES] += 1
        elif code == OUT_CLASSIFIED:
            stats[P_CLASSIFIED] += 1
        if viol != VIOL_NONE:
            stats[P_VIOLATIONS] += 1
            if nviol < viol_cap:
                viols[nviol, 0] = idx
                viols[nviol, 1] = viol
                viols[nviol, 2] = v_sweep
                viols[nviol, 3] = v_cell
                nviol += 1
    return stats, viols[:nviol]


def _props_samples(bits, size, sym_tab, evt_tab, tape_tab, mem_tab, max_sweeps, viol_cap):
    """Instrumented sweep over sampled binary rings (one per row)."""
    m, n = bits.shape
    stats = np.zeros(P_STATS_LEN, dtype=np.int64)
    viols = np.zeros((viol_cap, 4), dtype=np.int64)
    cells = np.empty(n, dtype=np.int64)
    nviol = 0
    for r in range(m):
        for i in range(n):
            cells[i] = bits[r, i]
        viol, v_sweep, v_cell, code, val, sweeps, phases = _props_one(
            cells, size, sym_tab, evt_tab, tape_tab, mem_tab, max_sweeps
        )
        stats[P_CHECKED] += 1
        if sweeps > stats[P_MAX_SWEEPS]:
            stats[P_MAX_SWEEPS] = sweeps
        if phases > stats[P_MAX_PHASES]:
            stats[P_MAX_PHASES] = phases
        if code == OUT_TIE:
            stats[P_TIES] += 1
        elif code == OUT_CLASSIFIED:
            stats[P_CLASSIFIED] += 1
        if viol != VIOL_NONE:
            stats[P_VIOLATIONS] += 1
            if nviol < viol_cap:
                viols[nviol, 0] = r
                viols[nviol, 1] = viol
                viols[nviol, 2] = v_sweep
                viols[nviol, 3] = v_cell
                nviol += 1
    return stats, viols[:nviol]


def _verify_samples(bits, size, sym_tab, evt_tab, max_sweeps, fail_cap):
    """Uninstrumented verify over sampled binary rings (one per row)."""
    m, n = bits.shape
    stats = np.zeros(V_STATS_LEN, dtype=np.int64)
    fails = np.zeros(fail_cap, dtype=np.int64)
    cells = np.empty(n, dtype=np.int64)
    nfail = 0
    for r in range(m):
        ones = 0
        for i in range(n):
            b = bits[r, i]
            cells[i] = b
            ones += b
        zeros = n - ones
        code, val, sweeps, phases = _run_one(cells, 2, size, sym_tab, evt_tab, max_sweeps)
        stats[V_CHECKED] += 1
        if sweeps > stats[V_MAX_SWEEPS]:
            stats[V_MAX_SWEEPS] = sweeps
        if zeros == ones:
            stats[V_TIES] += 1
            if code == OUT_CLASSIFIED:
                stats[V_TIE_TO_0 + val] += 1
            elif code == OUT_TIE:
                stats[V_TIE_TO_TIE] += 1
            else:
                stats[V_TIE_TO_BUDGET] += 1
        else:
            if phases > stats[V_MAX_PHASES]:
                stats[V_MAX_PHASES] = phases
            majority = 0 if zeros > ones else 1
            if code == OUT_CLASSIFIED and val == majority:
                stats[V_CORRECT] += 1
            else:
                if code == OUT_BUDGET:
                    stats[V_BUDGET] += 1
                else:
                    stats[V_WRONG] += 1
                if nfail < fail_cap:
                    fails[nfail] = r
                    nfail += 1
    stats[V_NFAILS] = nfail
    return stats, fails


run_one_py = _run_one
verify_range_py = _verify_range
props_one_py = _props_one
props_range_py = _props_range
props_samples_py = _props_samples
verify_samples_py = _verify_samples

try:
    from numba import njit

    HAVE_NUMBA = True
    _run_one = njit(cache=True)(_run_one)
    _verify_range = njit(cache=True)(_verify_range)
    _props_one = njit(cache=True)(_props_one)
    _props_range = njit(cache=True)(_props_range)
    _props_samples = njit(cache=True)(_props_samples)
    _verify_samples = njit(cache=True)(_verify_samples)
except ImportError:  # pragma: no cover - numba is a normal dependency
    HAVE_NUMBA = False

run_one = _run_one
verify_range = _verify_range
props_one = _props_one
props_range = _props_range
props_samples = _props_samples
verify_samples = _verify_samples
