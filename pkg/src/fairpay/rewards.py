"""Success-probability set functions over agent subsets.

A reward function maps each subset of the n agents to the probability that
the project succeeds when exactly those agents exert effort.  All functions
are normalized (empty set maps to 0) and, except for explicit tables, are
monotone submodular by construction.  Subsets are bitmasks over agent
indices 0..n-1 everywhere; bit i set means agent i is in the set.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import InvalidSubsetError, ParameterError, SizeLimitError

# Tolerance for construction-time range checks (sums of probabilities may
# carry a few ulps of rounding); structural inequalities use a tighter one.
VALUE_TOL = 1e-9
STRUCT_TOL = 1e-12

# Largest n for which check_structure enumerates every condition.
EXHAUSTIVE_CHECK_LIMIT = 14


def as_mask(subset, n: int) -> int:
    """Normalize a subset given as a bitmask or an iterable of agent indices."""
    if isinstance(subset, (int, np.integer)):
        mask = int(subset)
        if mask < 0 or mask >= (1 << n):
            raise InvalidSubsetError(f"mask {mask} out of range for n={n}")
        return mask
    mask = 0
    for i in subset:
        i = int(i)
        if i < 0 or i >= n:
            raise InvalidSubsetError(f"agent index {i} out of range for n={n}")
        mask |= 1 << i
    return mask


def mask_to_indices(mask: int) -> list[int]:
    """Sorted agent indices contained in a bitmask."""
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def mask_to_bools(mask: int, n: int) -> np.ndarray:
    """Boolean membership vector of length n for a bitmask."""
    raw = np.frombuffer(mask.to_bytes((n + 7) // 8, "little"), dtype=np.uint8)
    return np.unpackbits(raw, bitorder="little")[:n].astype(bool)


def _clip01(x: float) -> float:
    return 0.0 if x < 0.0 else (1.0 if x > 1.0 else x)


class RewardFunction(ABC):
    """Oracle for the project's success probability on each agent subset."""

    n: int
    kind: str

    @abstractmethod
    def _value_of_mask(self, mask: int) -> float:
        """Raw evaluation on a validated bitmask."""

    def value(self, subset) -> float:
        """Success probability f(S) for the given subset."""
        return _clip01(self._value_of_mask(as_mask(subset, self.n)))

    __call__ = value

    def marginal(self, i: int, subset) -> float:
        """Marginal contribution f(S + i) - f(S); i is removed from S first."""
        if i < 0 or i >= self.n:
            raise InvalidSubsetError(f"agent index {i} out of range for n={self.n}")
        mask = as_mask(subset, self.n) & ~(1 << i)
        return self.value(mask | (1 << i)) - self.value(mask)

    def value_table(self) -> np.ndarray:
        """Dense table of f over all 2^n bitmasks (index = mask)."""
        table = np.fromiter(
            (self._value_of_mask(m) for m in range(1 << self.n)),
            dtype=float,
            count=1 << self.n,
        )
        return np.clip(table, 0.0, 1.0)

    @abstractmethod
    def descriptor(self) -> dict:
        """JSON-serializable description (see the instance file format)."""


def _additive_table(weights: np.ndarray) -> np.ndarray:
    table = np.zeros(1)
    for w in weights:
        table = np.concatenate([table, table + w])
    return table


class Additive(RewardFunction):
    """f(S) = sum of per-agent success weights; weights must total at most 1."""

    kind = "additive"

    def __init__(self, weights: Sequence[float]):
        w = np.array(weights, dtype=float)
        if w.ndim != 1 or w.size == 0:
            raise ParameterError("weights must be a nonempty 1-d sequence")
        if np.any(w < 0):
            raise ParameterError("weights must be nonnegative")
        if w.sum() > 1 + VALUE_TOL:
            raise ParameterError(f"weights sum to {w.sum()}, above 1")
        w.setflags(write=False)
        self.weights = w
        self.n = int(w.size)

    def _value_of_mask(self, mask: int) -> float:
        return float(self.weights[mask_to_bools(mask, self.n)].sum())

    def marginal(self, i: int, subset) -> float:
        if i < 0 or i >= self.n:
            raise InvalidSubsetError(f"agent index {i} out of range for n={self.n}")
        as_mask(subset, self.n)
        return float(self.weights[i])

    def value_table(self) -> np.ndarray:
        return np.clip(_additive_table(self.weights), 0.0, 1.0)

    def descriptor(self) -> dict:
        return {"kind": "additive", "weights": self.weights.tolist()}


class CappedAdditive(RewardFunction):
    """f(S) = min(cap, sum of weights); the cap keeps values in [0, 1]."""

    kind = "capped_additive"

    def __init__(self, weights: Sequence[float], cap: float):
        w = np.array(weights, dtype=float)
        if w.ndim != 1 or w.size == 0:
            raise ParameterError("weights must be a nonempty 1-d sequence")
        if np.any(w < 0):
            raise ParameterError("weights must be nonnegative")
        if not 0.0 <= cap <= 1.0 + VALUE_TOL:
            raise ParameterError(f"cap {cap} outside [0, 1]")
        w.setflags(write=False)
        self.weights = w
        self.cap = float(min(cap, 1.0))
        self.n = int(w.size)

    def _value_of_mask(self, mask: int) -> float:
        return min(self.cap, float(self.weights[mask_to_bools(mask, self.n)].sum()))

    def value_table(self) -> np.ndarray:
        return np.clip(_additive_table(self.weights), 0.0, self.cap)

    def descriptor(self) -> dict:
        return {
            "kind": "capped_additive",
            "weights": self.weights.tolist(),
            "cap": self.cap,
        }


class Coverage(RewardFunction):
    """Weighted coverage: f(S) = total weight of elements covered by S.

    Agent i covers a fixed set of elements; element weights must total at
    most 1 so every value is a probability.
    """

    kind = "coverage"

    def __init__(self, element_weights: Sequence[float], covers: Sequence[Iterable[int]]):
        ew = np.array(element_weights, dtype=float)
        if ew.ndim != 1:
            raise ParameterError("element_weights must be 1-d")
        if np.any(ew < 0):
            raise ParameterError("element weights must be nonnegative")
        if ew.sum() > 1 + VALUE_TOL:
            raise ParameterError(f"element weights sum to {ew.sum()}, above 1")
        n_elem = ew.size
        ew.setflags(write=False)
        self.element_weights = ew
        self.covers: list[frozenset[int]] = []
        for cover in covers:
            cover = frozenset(int(e) for e in cover)
            if any(e < 0 or e >= n_elem for e in cover):
                raise ParameterError("cover refers to an element index out of range")
            self.covers.append(cover)
        if not self.covers:
            raise ParameterError("at least one agent is required")
        self.n = len(self.covers)
        # element bitmask per agent, used by the dense table builder
        self._cover_masks = [
            sum(1 << e for e in cover) for cover in self.covers
        ]

    def _value_of_mask(self, mask: int) -> float:
        covered = 0
        for i in mask_to_indices(mask):
            covered |= self._cover_masks[i]
        total = 0.0
        e = 0
        while covered:
            if covered & 1:
                total += self.element_weights[e]
            covered >>= 1
            e += 1
        return total

    def value_table(self) -> np.ndarray:
        n_elem = self.element_weights.size
        if n_elem > 64:
            return super().value_table()
        cov = np.zeros(1, dtype=np.uint64)
        for m in self._cover_masks:
            cov = np.concatenate([cov, cov | np.uint64(m)])
        table = np.zeros(cov.size)
        for e in range(n_elem):
            bit = (cov >> np.uint64(e)) & np.uint64(1)
            table += self.element_weights[e] * bit.astype(float)
        return np.clip(table, 0.0, 1.0)

    def descriptor(self) -> dict:
        return {
            "kind": "coverage",
            "elements": [{"weight": float(w)} for w in self.element_weights],
            "covers": [sorted(cover) for cover in self.covers],
        }


class ExplicitTable(RewardFunction):
    """f given as a full 2^n table indexed by bitmask.

    Tables are accepted as long as they are valid probabilities with
    f(empty) = 0; monotonicity and submodularity are NOT implied and must
    be verified with check_structure before the function is used to build
    an Instance.
    """

    kind = "explicit"

    def __init__(self, n: int, table: Sequence[float]):
        t = np.array(table, dtype=float)
        if n < 1:
            raise ParameterError("n must be at least 1")
        if t.size != (1 << n):
            raise ParameterError(
                f"explicit table needs exactly 2^{n} = {1 << n} entries, got {t.size}"
            )
        if np.any(t < -VALUE_TOL) or np.any(t > 1 + VALUE_TOL):
            raise ParameterError("table values must lie in [0, 1]")
        if abs(t[0]) > VALUE_TOL:
            raise ParameterError(f"f(empty set) must be 0, got {t[0]}")
        table = np.clip(t, 0.0, 1.0)
        table[0] = 0.0
        table.setflags(write=False)
        self.table = table
        self.n = int(n)

    def _value_of_mask(self, mask: int) -> float:
        return float(self.table[mask])

    def value_table(self) -> np.ndarray:
        return self.table.copy()

    def descriptor(self) -> dict:
        return {"kind": "explicit", "n": self.n, "table": self.table.tolist()}


class SymmetricTwoClass(RewardFunction):
    """Additive reward with one special agent plus count_b identical agents.

    Agent 0 contributes f_a; agents 1..count_b each contribute f_b.  The
    explicit two-class structure lets solvers enumerate candidates by
    (special agent in or out, number of identical agents) instead of by
    subset.
    """

    kind = "symmetric_two_class"

    def __init__(self, f_a: float, f_b: float, count_b: int):
        if count_b < 1:
            raise ParameterError("count_b must be at least 1")
        if f_a < 0 or f_b < 0:
            raise ParameterError("contributions must be nonnegative")
        if f_a + count_b * f_b > 1 + VALUE_TOL:
            raise ParameterError("total contribution exceeds 1")
        self.f_a = float(f_a)
        self.f_b = float(f_b)
        self.count_b = int(count_b)
        self.n = self.count_b + 1

    def _value_of_mask(self, mask: int) -> float:
        a_in = mask & 1
        t = (mask >> 1).bit_count()
        return a_in * self.f_a + t * self.f_b

    def marginal(self, i: int, subset) -> float:
        if i < 0 or i >= self.n:
            raise InvalidSubsetError(f"agent index {i} out of range for n={self.n}")
        as_mask(subset, self.n)
        return self.f_a if i == 0 else self.f_b

    def value_table(self) -> np.ndarray:
        weights = np.full(self.n, self.f_b)
        weights[0] = self.f_a
        return np.clip(_additive_table(weights), 0.0, 1.0)

    def descriptor(self) -> dict:
        return {
            "kind": "symmetric_two_class",
            "f_a": self.f_a,
            "f_b": self.f_b,
            "count_b": self.count_b,
        }


@dataclass(frozen=True)
class StructureReport:
    """Outcome of a monotonicity/submodularity check.

    witness is an (S, T, i) triple of bitmasks/index such that either
    f(T) < f(S) with T = S + i (monotonicity) or f(i | T) > f(i | S) with
    T = S + j (submodularity); violated names which.  checks counts the
    conditions evaluated, so sampling mode reports its coverage.
    """

    monotone: bool
    submodular: bool
    witness: tuple[int, int, int] | None = None
    violated: str | None = None
    checks: int = 0


def check_structure(
    f: RewardFunction,
    exhaustive_limit: int = EXHAUSTIVE_CHECK_LIMIT,
    samples: int | None = None,
    seed: int | None = None,
) -> StructureReport:
    """Verify monotonicity and submodularity of a reward function.

    Up to exhaustive_limit agents every condition is enumerated:
    monotonicity as f(S + i) >= f(S) for all S and i not in S, and
    submodularity in its pairwise form f(i | S + j) <= f(i | S) for all S
    and distinct i, j outside S (equivalent to the nested-sets form).
    Above the limit a seeded random sample of conditions is checked and
    the number of checks is reported.
    """
    n = f.n
    exhaustive = n <= exhaustive_limit
    if not exhaustive:
        if samples is None:
            raise SizeLimitError(
                f"n={n} exceeds the exhaustive limit {exhaustive_limit}; "
                "pass samples= (with seed=) to sample-check"
            )
        if seed is None:
            raise ParameterError("sampling mode requires an explicit seed")

    checks = 0
    mono_witness = None
    sub_witness = None

    def conditions():
        if exhaustive:
            table = f.value_table()
            for mask in range(1 << n):
                outside = [i for i in range(n) if not (mask >> i) & 1]
                for a, i in enumerate(outside):
                    yield table, mask, i, None
                    for j in outside[a + 1 :]:
                        yield table, mask, i, j
                        yield table, mask, j, i
        else:
            rng = np.random.default_rng(seed)
            for _ in range(samples):
                bits = rng.random(n) < rng.random()
                i, j = rng.choice(n, size=2, replace=False)
                bits[i] = bits[j] = False
                mask = as_mask(np.flatnonzero(bits), n)
                yield None, mask, int(i), None
                yield None, mask, int(i), int(j)

    def val(table, mask):
        return table[mask] if table is not None else f.value(mask)

    for table, mask, i, j in conditions():
        checks += 1
        with_i = mask | (1 << i)
        if j is None:
            if mono_witness is None and val(table, with_i) < val(table, mask) - STRUCT_TOL:
                mono_witness = (mask, with_i, i)
        else:
            with_j = mask | (1 << j)
            gain_small = val(table, with_i) - val(table, mask)
            gain_large = val(table, with_j | (1 << i)) - val(table, with_j)
            if sub_witness is None and gain_large > gain_small + STRUCT_TOL:
                sub_witness = (mask, with_j, i)
        if mono_witness is not None and sub_witness is not None:
            break

    monotone = mono_witness is None
    submodular = sub_witness is None
    witness = mono_witness if not monotone else sub_witness
    violated = "monotone" if not monotone else ("submodular" if not submodular else None)
    return StructureReport(monotone, submodular, witness, violated, checks)


def reward_from_descriptor(desc: dict) -> RewardFunction:
    """Build a reward function from its JSON descriptor."""
    kind = desc.get("kind")
    if kind == "additive":
        return Additive(desc["weights"])
    if kind == "capped_additive":
        return CappedAdditive(desc["weights"], desc["cap"])
    if kind == "coverage":
        return Coverage([e["weight"] for e in desc["elements"]], desc["covers"])
    if kind == "explicit":
        return ExplicitTable(desc["n"], desc["table"])
    if kind == "symmetric_two_class":
        return SymmetricTwoClass(desc["f_a"], desc["f_b"], desc["count_b"])
    raise ParameterError(f"unknown reward kind: {kind!r}")
