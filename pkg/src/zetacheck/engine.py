"""Verification driver: brute-force scans, closed-form fast paths, crosschecks.

The enumeration tree is cut at a fixed depth ``d`` that depends only on the
root system.  The coordinator scans every node above the cut; if it finds
no counterexample, each node at depth ``d`` becomes an independent task
scanning its subtree.  Every task keeps its own best counterexample and the
results merge by minimum, so verdicts and scan counts do not depend on the
number of worker processes.
"""

from __future__ import annotations

import logging
import multiprocessing
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache

from .closedform import closedform_value, closedform_verdict
from .errors import DiscrepancyError, ParameterError, ScanInterrupted, UnsupportedOperationError
from .report import Counterexample, Report, Verdict
from .rootsys import CLASSICAL, RootSystem, build_root_system
from .weights import (WeightFunction, all_weightings, as_weighting, is_distinguished_cardinality,
                      is_distinguished_closed_form, weight_table)
from .weyl import (child_inverse, enumerate_extended_D, enumerate_weyl, format_word,
                   longest_length, nodes_at_depth, parse_word, step_tables, twist_index)
from .zeta import ZetaVector, step_gain, zeta_identity, zeta_of

log = logging.getLogger(__name__)

MODES = ("brute", "closedform", "both")
MIN_TASKS = 64


# ---------------------------------------------------------------------------
# Scan kernel


class _Kernel:
    """Precomputed tables for scanning one weighting over the enumeration tree."""

    def __init__(self, rs: RootSystem, rho: WeightFunction, extended: bool):
        self.rs = rs
        self.rank = rs.rank
        self.extended = extended
        self.pos = rs.is_positive
        self.neg = rs.negation
        self.wt = weight_table(rs, rho.values)
        self.gain = [2 * step_gain(h) for h in self.wt]
        comb = step_tables(rs)
        # for generator i: [(j, a_ij, comb[-a_ij])] over nonzero off-diagonal entries
        self.rows = [[(j, a, comb[-a]) for j, a in enumerate(rs.cartan[i]) if a and j != i]
                     for i in range(rs.rank)]
        # lower generators whose inverse-image column is unchanged by s_i
        self.fixed_lower = [[j for j in range(i) if rs.cartan[i][j] == 0] for i in range(rs.rank)]
        self.z0 = list(zeta_identity(rs, rho))
        if extended:
            n = rs.rank
            self.checked = [g for g in range(n) if g != n - 2]
            self.twist = [twist_index(rs, g) for g in range(n)]

    def failure(self, word, z):
        """Smallest failing (twisted, gamma) at this node, or ``None``."""
        if not self.extended:
            if min(z) > 0:
                return None
            return (False, next(g for g, x in enumerate(z) if x <= 0))
        for g in self.checked:
            if z[g] <= 0:
                return (False, g)
        tw = self.twist
        for g in self.checked:
            if z[tw[g]] <= 0:
                return (True, g)
        return None

    def state(self, word):
        """Inverse images and zeta at the node with canonical ``word``."""
        inv = list(self.rs.simple_indices)
        z = list(self.z0)
        for letter in reversed(tuple(word)):
            z = self.child_zeta(z, letter, inv[letter])
            inv = child_inverse(self.rs, inv, letter)
            if inv is None:
                raise ParameterError(f"{format_word(word)!r} is not a canonical reduced word")
        return inv, z

    def child_zeta(self, z, i, vi):
        out = list(z)
        acc = -z[i] + self.gain[vi]
        for j, a, _ in self.rows[i]:
            acc -= a * z[j]
        out[i] = acc
        return out

    def scan(self, word, max_length=None):
        """Scan the subtree at ``word``; returns ``(scanned, best)``.

        ``best`` is ``(key, zeta)`` with ``key = (length, word, twisted, gamma)``.
        Nodes deeper than the best counterexample so far are pruned, and
        nothing deeper than ``max_length`` is expanded.
        """
        inv, z = self.state(word)
        pos, neg, rows, gain, fixed_lower = self.pos, self.neg, self.rows, self.gain, self.fixed_lower
        rank = self.rank
        per_node = 2 if self.extended else 1
        failure = self.failure
        best = None
        limit = max_length if max_length is not None else 1 << 30
        scanned = 0
        stack = [(tuple(word), inv, z)]
        while stack:
            word, inv, z = stack.pop()
            scanned += per_node
            fail = failure(word, z)
            length = len(word)
            if fail is not None:
                key = (length, word, fail[0], fail[1])
                if best is None or key < best[0]:
                    zz = z if not fail[0] else [z[t] for t in self.twist]
                    best = (key, tuple(zz))
                    limit = min(limit, length)
                continue
            if length >= limit:
                continue
            for i in range(rank - 1, -1, -1):
                vi = inv[i]
                if not pos[vi]:
                    continue
                ok = True
                for j in fixed_lower[i]:
                    if not pos[inv[j]]:
                        ok = False
                        break
                if not ok:
                    continue
                child = list(inv)
                acc = -z[i] + gain[vi]
                for j, a, table in rows[i]:
                    col = table[inv[j]][vi]
                    if j < i and not pos[col]:
                        ok = False
                        break
                    child[j] = col
                    acc -= a * z[j]
                if not ok:
                    continue
                child[i] = neg[vi]
                zc = list(z)
                zc[i] = acc
                stack.append(((i,) + word, child, zc))
        return scanned, best


@lru_cache(maxsize=64)
def _kernel(family: str, rank: int, rho: str, extended: bool) -> _Kernel:
    rs = build_root_system(family, rank)
    return _Kernel(rs, WeightFunction.from_string(rho), extended)


@lru_cache(maxsize=None)
def split_depth(rs: RootSystem) -> int:
    """Smallest depth holding at least ``MIN_TASKS`` tree nodes, capped at the longest length."""
    top = longest_length(rs)
    depth = 0
    while depth < top and len(nodes_at_depth(rs, depth)) < MIN_TASKS:
        depth += 1
    return depth


@lru_cache(maxsize=None)
def prefix_tasks(rs: RootSystem) -> tuple[tuple[int, ...], ...]:
    return tuple(nodes_at_depth(rs, split_depth(rs)))


def _run_task(args):
    family, rank, rho, extended, word, max_length = args
    return word, _kernel(family, rank, rho, extended).scan(word, max_length)


# ---------------------------------------------------------------------------
# Checkpoints


def _encode_status(result) -> str:
    scanned, best = result
    if best is None:
        return f"pass:{scanned}"
    (length, word, twisted, gamma), z = best
    text = f"fail:{scanned}:{format_word(word)}:{gamma + 1}:{ZetaVector(z)}"
    return text + (":twisted" if twisted else "")


def _decode_status(text: str):
    parts = text.split(":")
    if parts[0] == "pass" and len(parts) == 2:
        return int(parts[1]), None
    if parts[0] == "fail" and len(parts) in (5, 6):
        word = parse_word(parts[2])
        twisted = len(parts) == 6
        key = (len(word), word, twisted, int(parts[3]) - 1)
        return int(parts[1]), (key, ZetaVector.parse(parts[4]).coords)
    raise ParameterError(f"bad checkpoint status {text!r}")


class Checkpoint:
    """Append-only record of completed prefix tasks, one ``word<TAB>status`` line each."""

    def __init__(self, path, header: str):
        self.path = path
        self.header = header
        self.done: dict[tuple[int, ...], tuple] = {}
        if os.path.exists(path):
            with open(path) as fh:
                for lineno, line in enumerate(fh, 1):
                    line = line.rstrip("\n")
                    if not line:
                        continue
                    if line.startswith("#"):
                        if line[1:].strip() != header:
                            raise ParameterError(f"{path}: checkpoint is for {line[1:].strip()!r}, not {header!r}")
                        continue
                    try:
                        word, status = line.split("\t")
                    except ValueError:
                        raise ParameterError(f"{path}:{lineno}: malformed line") from None
                    self.done[parse_word(word)] = _decode_status(status)
        else:
            with open(path, "w") as fh:
                fh.write(f"# {header}\n")

    def record(self, word, result) -> None:
        self.done[tuple(word)] = result
        with open(self.path, "a") as fh:
            fh.write(f"{format_word(word)}\t{_encode_status(result)}\n")
            fh.flush()


def checkpoint_path(base, rs: RootSystem, rho: WeightFunction, single: bool):
    if single:
        return base
    os.makedirs(base, exist_ok=True)
    return os.path.join(base, f"{rs.name}-{rho}.ckpt")


# ---------------------------------------------------------------------------
# Brute-force scan


@dataclass(frozen=True)
class ScanResult:
    scanned: int
    counterexample: Counterexample | None
    tasks_run: int
    tasks_total: int


def _merge(results):
    scanned, best = 0, None
    for s, b in results:
        scanned += s
        if b is not None and (best is None or b[0] < best[0]):
            best = b
    return scanned, best


def _make_pool(jobs: int):
    if jobs <= 1:
        return None
    return ProcessPoolExecutor(max_workers=jobs, mp_context=multiprocessing.get_context("fork"))


def scan_weighting(rs: RootSystem, rho, *, jobs: int = 1, extended: bool = False,
                   max_length: int | None = None, checkpoint=None, task_limit: int | None = None,
                   pool=None) -> ScanResult:
    """Brute-force scan of one weighting.

    ``max_length`` truncates the tree (used to exercise large systems);
    ``checkpoint`` is a file path recording completed tasks; ``task_limit``
    stops after that many newly completed tasks by raising ``ScanInterrupted``.
    """
    rho = as_weighting(rs, rho)
    if extended and rs.family != "D":
        raise UnsupportedOperationError(f"the extended group exists only in type D, not {rs.name}")
    kernel = _kernel(rs.family, rs.rank, str(rho), extended)
    depth = split_depth(rs)
    top_limit = depth - 1 if max_length is None else min(depth - 1, max_length)
    if depth == 0:
        head_scanned, head_best = 0, None
    else:
        head_scanned, head_best = kernel.scan((), top_limit)
    tasks = prefix_tasks(rs) if (max_length is None or max_length >= depth) else ()
    results = [(head_scanned, head_best)]
    run = 0
    if head_best is None and tasks:
        ckpt = None
        if checkpoint is not None:
            header = f"{rs.name} rho={rho} extended={extended} max_length={max_length}"
            ckpt = Checkpoint(checkpoint, header)
        pending = [w for w in tasks if ckpt is None or w not in ckpt.done]
        if ckpt is not None:
            results += [ckpt.done[w] for w in tasks if w in ckpt.done]
        if task_limit is not None:
            pending = pending[:task_limit]
        args = [(rs.family, rs.rank, str(rho), extended, w, max_length) for w in pending]
        own_pool = None
        if pool is None and jobs > 1 and len(args) > 1:
            pool = own_pool = _make_pool(jobs)
        try:
            stream = pool.map(_run_task, args, chunksize=1) if pool is not None else map(_run_task, args)
            for word, result in stream:
                results.append(result)
                run += 1
                if ckpt is not None:
                    ckpt.record(word, result)
        finally:
            if own_pool is not None:
                own_pool.shutdown()
        done = len(results) - 1
        if done < len(tasks):
            raise ScanInterrupted(f"{rs.name} rho={rho}: {done} of {len(tasks)} tasks completed")
    scanned, best = _merge(results)
    ce = None
    if best is not None:
        (length, word, twisted, gamma), z = best
        ce = Counterexample(word, gamma, ZetaVector(tuple(z)), twisted)
    return ScanResult(scanned, ce, run, len(tasks))


# ---------------------------------------------------------------------------
# Public operations


def verify_weighting(rs: RootSystem, rho, mode: str = "brute", jobs: int = 1, *,
                     extended: bool = False, checkpoint=None, pool=None) -> Verdict:
    if mode not in MODES:
        raise ParameterError(f"mode must be one of {MODES}, got {mode!r}")
    if mode in ("closedform", "both") and rs.family not in CLASSICAL:
        raise UnsupportedOperationError(f"no closed forms for {rs.name}")
    rho = as_weighting(rs, rho)
    if mode == "closedform":
        return closedform_verdict(rs, rho)
    start = time.perf_counter()
    result = scan_weighting(rs, rho, jobs=jobs, extended=extended, checkpoint=checkpoint, pool=pool)
    closed = is_distinguished_closed_form(rs, rho) if rs.family in CLASSICAL else None
    verdict = Verdict(rho, is_distinguished_cardinality(rs, rho), closed, result.counterexample,
                      result.scanned, (time.perf_counter() - start) * 1000)
    if mode == "both":
        other = closedform_verdict(rs, rho)
        if other.all_positive != verdict.all_positive:
            raise DiscrepancyError(f"{rs.name} rho={rho}: brute force and closed form disagree")
    return verdict


def scan_order(rs: RootSystem) -> list[WeightFunction]:
    """All weightings with the distinguished ones last (they need full scans)."""
    rhos = all_weightings(rs)
    return sorted(rhos, key=lambda r: is_distinguished_cardinality(rs, r))


def verify_all(rs: RootSystem, mode: str = "brute", jobs: int = 1, *, extended: bool = False,
               checkpoint=None, rhos=None) -> Report:
    """One verdict per weighting, in binary counting order."""
    order = scan_order(rs) if rhos is None else list(rhos)
    verdicts = {}
    pool = _make_pool(jobs) if mode != "closedform" else None
    try:
        for k, rho in enumerate(order, 1):
            path = None if checkpoint is None else checkpoint_path(checkpoint, rs, rho, single=False)
            v = verify_weighting(rs, rho, mode, jobs, extended=extended, checkpoint=path, pool=pool)
            log.info("%s %d/%d rho=%s %s scanned=%d", rs.name, k, len(order), rho, v.outcome, v.scanned)
            verdicts[str(rho)] = v
    finally:
        if pool is not None:
            pool.shutdown()
    canonical = [str(r) for r in all_weightings(rs) if str(r) in verdicts]
    return Report(rs.family, rs.rank, tuple(verdicts[r] for r in canonical))


def crosscheck(rs: RootSystem, max_rank: int = 5) -> bool:
    """Closed forms against brute force: verdicts for every weighting, and every
    covered coordinate of every element (W' in type D)."""
    if rs.family not in CLASSICAL:
        raise UnsupportedOperationError(f"no closed forms for {rs.name}")
    if rs.rank > max_rank:
        raise ParameterError(f"crosscheck is exhaustive; rank {rs.rank} exceeds {max_rank}")
    elements = list(enumerate_extended_D(rs) if rs.family == "D" else enumerate_weyl(rs))
    for rho in all_weightings(rs):
        brute = verify_weighting(rs, rho, "brute")
        if closedform_verdict(rs, rho).all_positive != brute.all_positive:
            log.warning("%s rho=%s: verdicts differ", rs.name, rho)
            return False
        for w in elements:
            z = zeta_of(rs, rho, w)
            for g in range(rs.rank):
                value = closedform_value(rs, rho, w, g)
                if value is not None and value != z[g]:
                    log.warning("%s rho=%s w=%r gamma=%d: %d != %d", rs.name, rho, w, g + 1, value, z[g])
                    return False
    return True
