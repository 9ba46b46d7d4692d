"""Optimizers over incentive sets.

brute_force enumerates every subset (vectorized over the dense value
table, optionally in parallel chunks with a deterministic reduction).
log_partition and delta_partition split a known good base set into groups
whose best uniform-pay (or bounded-ratio) contract carries a guaranteed
fraction of the base utility.  symmetric_solve and two_agent_solve are
exact structure-exploiting fast paths.

Ties between maximizing sets are always broken toward smaller
cardinality, then smaller bitmask, so results are independent of
enumeration order and worker count.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .contracts import (
    COMPARE_TOL,
    MARGINAL_TOL,
    Contract,
    IncentiveOutcome,
    Instance,
    ModeSpec,
    indifference_payment,
    optimal_contract_for_set,
)
from .errors import EmptySetError, ParameterError, SizeLimitError, StructureError
from .rewards import as_mask, mask_to_indices

BRUTE_FORCE_LIMIT = 22


@dataclass(frozen=True)
class SolveReport:
    """Best incentive set found by a solver, with provenance."""

    spec: ModeSpec
    best: IncentiveOutcome
    method: str
    candidates_examined: int
    opt_reference: float | None = None


@dataclass(frozen=True)
class PartitionResult:
    """Groups produced by a partition scheme over a base set.

    groups and per_group are aligned; empty groups are dropped.  The
    scheme's approximation guarantee is best utility >= (base utility,
    possibly with an additive slack) / guarantee_denominator.
    """

    groups: list[int]
    per_group: list[IncentiveOutcome]
    guarantee_denominator: int
    base_set: int

    def best(self) -> IncentiveOutcome:
        """Highest-utility feasible group outcome (empty set as floor)."""
        n = max(o.payments.payments.size for o in self.per_group) if self.per_group else 1
        floor = IncentiveOutcome(0, Contract(np.zeros(n)), 0.0, True)
        candidates = [o for o in self.per_group if o.feasible] + [floor]
        return max(
            candidates,
            key=lambda o: (o.utility, -o.members.bit_count(), -o.members),
        )


def _better(key_a, key_b) -> bool:
    """Lexicographic tie-break: higher utility, fewer members, smaller mask."""
    ua, pa, ma = key_a
    ub, pb, mb = key_b
    if ua != ub:
        return ua > ub
    if pa != pb:
        return pa < pb
    return ma < mb


def _chunk_best(table, costs, mode, beta, lo, hi):
    """Best (utility, popcount, mask) for the requested mode and for the
    unconstrained mode over masks in [lo, hi)."""
    n = costs.size
    masks = np.arange(lo, hi, dtype=np.int64)
    vals = table[lo:hi]
    feas = np.ones(hi - lo, dtype=bool)
    max_a = np.zeros(hi - lo)
    sum_a = np.zeros(hi - lo)
    popc = np.zeros(hi - lo, dtype=np.int64)

    def member_alphas(i):
        bit = 1 << i
        has = (masks & bit) != 0
        sub = masks[has]
        marg = table[sub] - table[sub ^ bit]
        ok = marg > MARGINAL_TOL
        a = np.where(ok, costs[i] / np.where(ok, marg, 1.0), np.inf)
        return has, ok, a

    for i in range(n):
        has, ok, a = member_alphas(i)
        popc[has] += 1
        feas[has] &= ok & (a <= 1 + COMPARE_TOL)
        max_a[has] = np.maximum(max_a[has], a)
        sum_a[has] += a

    if mode == "unconstrained":
        pay = sum_a
    elif mode == "nd":
        pay = popc * max_a
    else:
        pay = np.zeros(hi - lo)
        for i in range(n):
            has, _, a = member_alphas(i)
            pay[has] += np.maximum(a, max_a[has] / beta)

    def select(pay_vec):
        with np.errstate(invalid="ignore"):
            util = (1.0 - pay_vec) * vals
        util[~feas] = -np.inf
        if lo == 0:
            util[0] = 0.0
        top = util.max()
        if not np.isfinite(top):
            return None
        cand = np.flatnonzero(util == top)
        cand = cand[popc[cand] == popc[cand].min()]
        idx = int(cand.min())
        return (float(util[idx]), int(popc[idx]), lo + idx)

    return select(pay), select(sum_a)


def brute_force(
    inst: Instance,
    spec: ModeSpec,
    workers: int = 1,
    limit: int = BRUTE_FORCE_LIMIT,
) -> SolveReport:
    """Exact optimum by scanning all 2^n subsets.

    The subset range is split into contiguous chunks (one per worker);
    chunk winners are merged with the deterministic tie-break, so the
    result never depends on the chunking.  The unconstrained optimum is
    computed alongside and reported as opt_reference.
    """
    n = inst.n
    if n > limit:
        raise SizeLimitError(
            f"brute force over 2^{n} subsets exceeds the limit ({limit}); "
            "use the symmetric or partition methods"
        )
    table = inst.reward.value_table()
    costs = inst.costs
    total = 1 << n
    workers = max(1, int(workers))
    bounds = np.linspace(0, total, min(workers, total) + 1, dtype=np.int64)
    ranges = [
        (int(bounds[k]), int(bounds[k + 1]))
        for k in range(len(bounds) - 1)
        if bounds[k] < bounds[k + 1]
    ]

    if len(ranges) == 1:
        results = [_chunk_best(table, costs, spec.mode, spec.beta, *ranges[0])]
    else:
        with ThreadPoolExecutor(max_workers=len(ranges)) as pool:
            results = list(
                pool.map(
                    lambda r: _chunk_best(table, costs, spec.mode, spec.beta, *r),
                    ranges,
                )
            )

    best_key = (0.0, 0, 0)
    ref_key = (0.0, 0, 0)
    for key, ref in results:
        if key is not None and _better(key, best_key):
            best_key = key
        if ref is not None and _better(ref, ref_key):
            ref_key = ref

    best = optimal_contract_for_set(inst, best_key[2], spec)
    ref_out = optimal_contract_for_set(inst, ref_key[2], ModeSpec.unconstrained())
    return SolveReport(spec, best, "brute_force", total, ref_out.utility)


def _base_alphas(inst: Instance, base) -> tuple[int, dict[int, float]]:
    """Validate a partition base set and return member payments within it."""
    base_mask = as_mask(base, inst.n)
    if base_mask == 0:
        raise EmptySetError("partition base set must be nonempty")
    outcome = optimal_contract_for_set(inst, base_mask, ModeSpec.unconstrained())
    if not outcome.feasible:
        raise ParameterError(
            f"base set is not feasible under unconstrained payments "
            f"({outcome.infeasibility_reason})"
        )
    alphas = {
        i: indifference_payment(inst, i, base_mask)
        for i in mask_to_indices(base_mask)
    }
    return base_mask, alphas


def log_partition(inst: Instance, base) -> PartitionResult:
    """Doubling partition of a base set, each group priced uniformly.

    Members are sorted by descending in-base payment and cut into groups
    of sizes 1, 2, 4, ... with the remainder in the last group; the best
    group's uniform-pay utility is at least the base's unconstrained
    utility divided by ceil(log2(n + 1)).

    The group count is ceil(log2(|base| + 1)), which keeps the remainder
    group no larger than the half that precedes it; one group more than
    ceil(log2 |base|) exactly at powers of two, where the shorter
    partition can overpay its remainder group and lose the guarantee.
    """
    base_mask, alphas = _base_alphas(inst, base)
    order = sorted(alphas, key=lambda i: (-alphas[i], i))
    m = len(order).bit_length()
    groups = []
    pos = 0
    for k in range(1, m):
        size = 1 << (k - 1)
        groups.append(order[pos : pos + size])
        pos += size
    groups.append(order[pos:])
    groups = [g for g in groups if g]
    masks = [as_mask(g, inst.n) for g in groups]
    per_group = [optimal_contract_for_set(inst, g, ModeSpec.nd()) for g in masks]
    return PartitionResult(masks, per_group, inst.n.bit_length(), base_mask)


def delta_partition(inst: Instance, base, delta: float) -> PartitionResult:
    """Payment-threshold partition evaluated under the n^delta wage ratio.

    With t = ceil(1/delta), members are bucketed by their in-base payment:
    below 1/n, then geometric bands of width n^delta up to 1.  Each bucket
    is priced as a beta-ND contract with beta = n^delta; the best bucket
    carries at least (base utility - n^-delta) / (t + 1).
    """
    if not 0 < delta <= 1:
        raise ParameterError(f"delta must lie in (0, 1], got {delta}")
    base_mask, alphas = _base_alphas(inst, base)
    n = inst.n
    t = math.ceil(1.0 / delta)
    beta = math.exp(delta * math.log(n)) if n > 1 else 1.0
    uppers = [1.0 / n] + [n ** (-(t + 1 - j) * delta) for j in range(2, t + 2)]

    buckets: list[list[int]] = [[] for _ in range(t + 1)]
    for i in sorted(alphas):
        for g, upper in enumerate(uppers):
            if alphas[i] < upper:
                buckets[g].append(i)
                break
        else:
            # payments at or above the top band edge (only possible right at
            # the boundary); fold into the last bucket
            buckets[-1].append(i)

    groups = [b for b in buckets if b]
    masks = [as_mask(g, inst.n) for g in groups]
    mode = ModeSpec.beta_nd(beta)
    per_group = [optimal_contract_for_set(inst, g, mode) for g in masks]
    return PartitionResult(masks, per_group, t + 1, base_mask)


def _two_class_scan(f_a, f_b, count_b, c_a, c_b, mode, beta):
    """Best (utility, popcount, mask) over candidates (a in/out, t of b's).

    Utilities on this reward depend only on a-membership and the number of
    identical agents taken, so the scan is exact; within a candidate class
    the t lowest-index identical agents realize the smallest bitmask.
    Members with a vanishing marginal get a sentinel payment above 1, which
    the feasibility filter then rejects.
    """
    alpha_a = c_a / f_a if f_a > MARGINAL_TOL else 2.0
    alpha_b = c_b / f_b if f_b > MARGINAL_TOL else 2.0
    t = np.arange(count_b + 1, dtype=float)
    best = (0.0, 0, 0)
    for a_in in (0, 1):
        if a_in:
            top = np.where(t > 0, max(alpha_a, alpha_b), alpha_a)
        else:
            top = np.where(t > 0, alpha_b, 0.0)
        if mode == "unconstrained":
            pay = a_in * alpha_a + t * alpha_b
        elif mode == "nd":
            pay = (a_in + t) * top
        else:
            pay = a_in * np.maximum(alpha_a, top / beta) + t * np.maximum(
                alpha_b, top / beta
            )
        value = a_in * f_a + t * f_b
        util = np.where(top <= 1 + COMPARE_TOL, (1.0 - pay) * value, -np.inf)
        if not a_in:
            util[0] = 0.0  # empty set baseline
        for tt in range(count_b + 1):
            if not np.isfinite(util[tt]):
                continue
            mask = a_in | (((1 << tt) - 1) << 1)
            key = (float(util[tt]), a_in + tt, mask)
            if _better(key, best):
                best = key
    return best


def symmetric_solve(inst: Instance, spec: ModeSpec) -> SolveReport:
    """Exact optimum for two-class rewards in O(n) candidates.

    Requires a symmetric_two_class reward and identical costs for the
    identical agents; candidates are (special agent in or out) x (how
    many identical agents), which covers every distinct utility.
    """
    r = inst.reward
    if r.kind != "symmetric_two_class":
        raise StructureError(
            f"symmetric_solve needs a symmetric_two_class reward, got {r.kind}"
        )
    tail = inst.costs[1:]
    if not np.all(tail == tail[0]):
        raise StructureError("identical agents must share a single cost")
    args = (r.f_a, r.f_b, r.count_b, float(inst.costs[0]), float(tail[0]))

    best_key = _two_class_scan(*args, spec.mode, spec.beta)
    ref_key = _two_class_scan(*args, "unconstrained", None)
    best = optimal_contract_for_set(inst, best_key[2], spec)
    ref = optimal_contract_for_set(inst, ref_key[2], ModeSpec.unconstrained())
    return SolveReport(spec, best, "symmetric", 2 * (r.count_b + 1), ref.utility)


def two_agent_bound(beta: float) -> float:
    """Worst-case utility ratio for two agents: 1 + 1/sqrt(beta + 1)."""
    if beta < 1:
        raise ParameterError(f"beta must be at least 1, got {beta}")
    return 1.0 + 1.0 / math.sqrt(beta + 1.0)


def two_agent_solve(inst: Instance, beta: float) -> SolveReport:
    """Exact two-agent optimum under the beta wage-ratio constraint.

    Evaluates the four candidate sets and returns the constrained best;
    the unconstrained optimum over the same candidates is recorded as
    opt_reference.
    """
    if inst.n != 2:
        raise SizeLimitError(f"two_agent_solve requires exactly 2 agents, got {inst.n}")
    spec = ModeSpec.beta_nd(float(beta))
    best = None
    best_key = None
    ref = 0.0
    for mask in (0b00, 0b01, 0b10, 0b11):
        out = optimal_contract_for_set(inst, mask, spec)
        if out.feasible:
            key = (out.utility, mask.bit_count(), mask)
            if best_key is None or _better(key, best_key):
                best, best_key = out, key
        unc = optimal_contract_for_set(inst, mask, ModeSpec.unconstrained())
        if unc.feasible:
            ref = max(ref, unc.utility)
    return SolveReport(spec, best, "two_agent", 4, ref)
