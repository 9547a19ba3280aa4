"""
Why two residues are enough: trace rigidity mod 2^k
===================================================

The counting trick rests on a rigidity statement for orthogonal
matrices over the 2-adic integers: congruence mod 4 forces trace
congruence mod 16.  Here we watch it happen on random examples, then
let the randomized campaign hammer on every variant at once.
"""

import numpy as np

from sixlines.lattices import (
    GramLattice,
    OrthogonalMap,
    jordan_decompose,
    overdet_check,
    run_trials,
    sample_orthogonal,
)


def watch_one(seed: int) -> None:
    lat = GramLattice.from_rows([[1, 0, 0, 0], [0, 2, 1, 0],
                                 [0, 1, 2, 0], [0, 0, 0, 4]])
    dec = jordan_decompose(lat)
    u1 = sample_orthogonal(lat, 1, seed=seed, decomposition=dec)
    # perturb by something = identity mod 4; orthogonality is preserved
    v = sample_orthogonal(lat, 2, seed=seed + 1, decomposition=dec)
    u2 = OrthogonalMap(
        tuple(map(tuple, u1.as_array() @ v.as_array() % (1 << lat.precision))), 1
    )
    t1 = int(np.trace(u1.as_array()))
    t2 = int(np.trace(u2.as_array()))
    outcome = overdet_check(lat, u1, u2, "a")
    print(f"  seed {seed}: traces {t1 % 16:>2} and {t2 % 16:>2} (mod 16)"
          f"   -> {outcome.status}")
    # mod 4 the two maps look identical; mod 16 so do their traces
    assert not ((u1.as_array() - u2.as_array()) % 4).any()


print("single experiments (maps congruent mod 4):")
for seed in (3, 14, 159, 2653):
    watch_one(seed)

print("\nfull campaign, 300 random lattices of dimension 2..8:")
report = run_trials(trials=300, seed=12)
print(report.summary())
