"""Linear contracts: payments, principal utility, and equilibrium checks.

A linear contract is a payment vector alpha in [0,1]^n; agent i receives
alpha_i when the project succeeds, whether or not they exerted effort.
Three payment regimes are supported for an incentive set S:

  unconstrained  each member is paid their indifference payment
  nd             every member is paid the same amount (the largest
                 indifference payment in S)
  beta_nd        members' payments may differ by at most a factor beta;
                 each member gets max(own indifference payment, top/beta)

The principal's utility is (1 - total payment) * f(S).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .errors import ContractLogicError, EmptySetError, ParameterError
from .rewards import RewardFunction, as_mask, check_structure, mask_to_indices

log = logging.getLogger(__name__)

# Marginals at or below this are treated as zero (the agent cannot be
# incentivized inside that set); also the slack used in comparisons.
MARGINAL_TOL = 1e-9
COMPARE_TOL = 1e-9


@dataclass(frozen=True)
class Instance:
    """A contract-design problem: n agents with effort costs and a reward."""

    n: int
    costs: np.ndarray
    reward: RewardFunction
    metadata: dict | None = None

    def __post_init__(self):
        costs = np.array(self.costs, dtype=float)
        costs.setflags(write=False)
        object.__setattr__(self, "costs", costs)
        if costs.shape != (self.n,):
            raise ParameterError(f"expected {self.n} costs, got shape {costs.shape}")
        if np.any(costs <= 0):
            raise ParameterError("all effort costs must be strictly positive")
        if self.reward.n != self.n:
            raise ParameterError("reward function and costs disagree on n")
        if self.reward.kind == "explicit":
            report = check_structure(self.reward)
            if not (report.monotone and report.submodular):
                raise ParameterError(
                    f"explicit reward is not {report.violated}; witness {report.witness}"
                )

    @property
    def label(self) -> str:
        meta = self.metadata or {}
        if "label" in meta:
            return str(meta["label"])
        family = meta.get("family")
        if family:
            params = ",".join(
                f"{k}={meta[k]}" for k in sorted(meta) if k not in ("family", "label")
            )
            return f"{family}({params})"
        return f"{self.reward.kind}(n={self.n})"


@dataclass(frozen=True)
class Contract:
    """Payment vector; every entry must lie in [0, 1]."""

    payments: np.ndarray

    def __post_init__(self):
        p = np.array(self.payments, dtype=float)
        p.setflags(write=False)
        object.__setattr__(self, "payments", p)
        if np.any(p < -COMPARE_TOL) or np.any(p > 1 + COMPARE_TOL):
            raise ParameterError("contract payments must lie in [0, 1]")

    def total(self) -> float:
        return float(self.payments.sum())


@dataclass(frozen=True)
class ModeSpec:
    """Payment regime selector: unconstrained, nd, or beta_nd with beta >= 1."""

    mode: str
    beta: float | None = None

    def __post_init__(self):
        if self.mode not in ("unconstrained", "nd", "beta_nd"):
            raise ParameterError(f"unknown mode {self.mode!r}")
        if self.mode == "beta_nd":
            if self.beta is None or self.beta < 1:
                raise ParameterError("beta_nd mode requires beta >= 1")
        elif self.beta is not None:
            raise ParameterError(f"mode {self.mode!r} takes no beta")

    @classmethod
    def unconstrained(cls) -> "ModeSpec":
        return cls("unconstrained")

    @classmethod
    def nd(cls) -> "ModeSpec":
        return cls("nd")

    @classmethod
    def beta_nd(cls, beta: float) -> "ModeSpec":
        return cls("beta_nd", float(beta))


@dataclass(frozen=True)
class IncentiveOutcome:
    """Result of designing a contract that makes exactly one set exert effort.

    For infeasible sets (some member has a vanishing marginal, or would
    need a payment above 1) the utility is -inf and payments are all zero.
    """

    members: int
    payments: Contract
    utility: float
    feasible: bool
    infeasibility_reason: str | None = None

    def member_list(self) -> list[int]:
        return mask_to_indices(self.members)


def indifference_payment(inst: Instance, i: int, subset) -> float | None:
    """Minimum payment making agent i exert inside S: c_i / f(i | S - i).

    Returns None when the marginal is (numerically) zero, meaning i cannot
    be incentivized as part of S.
    """
    mask = as_mask(subset, inst.n)
    if not (mask >> i) & 1:
        raise ContractLogicError(f"agent {i} is not in the set")
    marg = inst.reward.marginal(i, mask & ~(1 << i))
    if marg <= MARGINAL_TOL:
        return None
    return float(inst.costs[i]) / marg


def group_payment_nd(inst: Instance, subset) -> float | None:
    """Uniform payment needed to incentivize all of S: the largest member
    indifference payment.  None if any member cannot be incentivized."""
    mask = as_mask(subset, inst.n)
    if mask == 0:
        raise EmptySetError("the uniform payment of the empty set is undefined")
    top = 0.0
    for i in mask_to_indices(mask):
        a = indifference_payment(inst, i, mask)
        if a is None:
            return None
        top = max(top, a)
    return top


def _empty_outcome(n: int) -> IncentiveOutcome:
    return IncentiveOutcome(0, Contract(np.zeros(n)), 0.0, True)


def _infeasible(n: int, mask: int, reason: str) -> IncentiveOutcome:
    return IncentiveOutcome(mask, Contract(np.zeros(n)), float("-inf"), False, reason)


def optimal_contract_for_set(inst: Instance, subset, spec: ModeSpec) -> IncentiveOutcome:
    """Cheapest contract (per the mode) that incentivizes exactly this set.

    Payments follow the mode: indifference payments, the uniform group
    payment, or max(indifference, top/beta).  Utility is
    (1 - total payment) * f(S); it may be negative for feasible sets.
    """
    mask = as_mask(subset, inst.n)
    n = inst.n
    if mask == 0:
        return _empty_outcome(n)

    members = mask_to_indices(mask)
    alphas = np.empty(len(members))
    for k, i in enumerate(members):
        a = indifference_payment(inst, i, mask)
        if a is None:
            return _infeasible(n, mask, "zero-marginal")
        alphas[k] = a

    top = float(alphas.max())
    if spec.mode == "unconstrained":
        pay = alphas
    elif spec.mode == "nd":
        pay = np.full(len(members), top)
    else:
        pay = np.maximum(alphas, top / spec.beta)

    if pay.max() > 1 + COMPARE_TOL:
        return _infeasible(n, mask, "payment-above-one")

    payments = np.zeros(n)
    payments[members] = np.minimum(pay, 1.0)
    utility = (1.0 - pay.sum()) * inst.reward.value(mask)
    return IncentiveOutcome(mask, Contract(payments), float(utility), True)


def is_equilibrium(inst: Instance, contract: Contract, subset) -> bool:
    """True when exerting exactly S is a pure Nash equilibrium.

    Members must weakly prefer effort (ties break toward effort), and
    non-members must weakly prefer shirking.  Comparisons carry a small
    slack; non-members sitting exactly on the boundary are logged since
    the tie-break would pull them in.
    """
    mask = as_mask(subset, inst.n)
    f = inst.reward
    f_S = f.value(mask)
    for i in range(inst.n):
        a_i = float(contract.payments[i])
        if (mask >> i) & 1:
            stay = a_i * f_S - float(inst.costs[i])
            leave = a_i * f.value(mask & ~(1 << i))
            if stay < leave - COMPARE_TOL:
                return False
        else:
            out = a_i * f_S
            join = a_i * f.value(mask | (1 << i)) - float(inst.costs[i])
            if join > out + COMPARE_TOL:
                return False
            if abs(join - out) <= COMPARE_TOL and a_i > 0:
                log.debug(
                    "agent %d outside the set is exactly indifferent; "
                    "the effort tie-break would include them",
                    i,
                )
    return True


def best_response_step(inst: Instance, contract: Contract, subset) -> int:
    """One synchronous round of best responses; returns the new set.

    Each agent compares exerting against shirking while the others hold
    their actions fixed; exact ties go to effort.  Fixed points of this
    map are equilibria (the converse holds except when a non-member is
    exactly indifferent, where the tie-break pulls them in).
    """
    mask = as_mask(subset, inst.n)
    f = inst.reward
    new_mask = 0
    for i in range(inst.n):
        a_i = float(contract.payments[i])
        exert = a_i * f.value(mask | (1 << i)) - float(inst.costs[i])
        shirk = a_i * f.value(mask & ~(1 << i))
        if exert >= shirk - COMPARE_TOL:
            new_mask |= 1 << i
    return new_mask
