#!/usr/bin/env python3
"""Walk through the core objects: rewards, payments, and equilibria.

Two agents jointly raise a project's success probability. The principal
pays each agent a share of the reward on success and wants the cheapest
payments that still make the intended team exert effort.
"""

import numpy as np

from fairpay import (
    Additive,
    Contract,
    Instance,
    ModeSpec,
    best_response_step,
    group_payment_nd,
    indifference_payment,
    is_equilibrium,
    mask_to_indices,
    optimal_contract_for_set,
)


def main():
    # agent 0 adds 50% success probability at cost 0.1; agent 1 the same at 0.2
    inst = Instance(2, np.array([0.1, 0.2]), Additive([0.5, 0.5]))
    team = [0, 1]

    print("=== minimum payments to keep both agents working ===")
    for i in team:
        print(f"  agent {i}: cost/marginal = {indifference_payment(inst, i, team):.3f}")
    print(f"  uniform rate everyone must get: {group_payment_nd(inst, team):.3f}")

    print("\n=== principal utility, (1 - total payment) * success probability ===")
    for label, spec in [
        ("unconstrained     ", ModeSpec.unconstrained()),
        ("equal pay         ", ModeSpec.nd()),
        ("pay ratio up to 2 ", ModeSpec.beta_nd(2.0)),
    ]:
        out = optimal_contract_for_set(inst, team, spec)
        pays = ", ".join(f"{p:.3f}" for p in out.payments.payments)
        print(f"  {label} payments [{pays}]  utility {out.utility:.4f}")

    print("\n=== the solved contract really is an equilibrium ===")
    out = optimal_contract_for_set(inst, team, ModeSpec.nd())
    print(f"  is_equilibrium: {is_equilibrium(inst, out.payments, out.members)}")

    print("\n=== best-response dynamics find it from anywhere ===")
    state = 0
    for step in range(4):
        nxt = best_response_step(inst, out.payments, state)
        print(f"  step {step}: {mask_to_indices(state)} -> {mask_to_indices(nxt)}")
        if nxt == state:
            break
        state = nxt

    print("\n=== underpaying collapses the team ===")
    state = out.members
    broke = Contract(np.zeros(2))
    print(f"  zero payments: {mask_to_indices(state)} -> "
          f"{mask_to_indices(best_response_step(inst, broke, state))}")


if __name__ == "__main__":
    main()
