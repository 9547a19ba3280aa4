"""
Exact point counts from two congruences
=======================================

One surface, end to end: build the trace table once, then count at any
good prime from a residue mod 16 and a residue mod p.  The brute-force
enumeration is only here to show the answers agree.
"""

from sixlines import (
    builtin_surface,
    count_one,
    deligne_window,
    init_efficient,
    invariants,
    resolved_count,
)

surface = builtin_surface("s4")
inv = invariants(surface)
print(f"surface {surface.name}: rank {inv.picard_rank}, "
      f"bad odd primes {sorted(inv.odd_bad_primes)}")

# one-time setup: solve the sign-class congruence system from small primes
table, stats = init_efficient(surface)
print(f"table solved: {stats.n_unknowns} unknowns from "
      f"{stats.n_observations} observations (primes up to {stats.determined_at})")

# now a count at p = 97 costs one polynomial coefficient, not p^2 work
p = 97
rec = count_one(surface, table, p, "coefficient")
print(f"\n#S({p}) = {rec.count}   (trace {rec.trace_mod16} mod 16, "
      f"sign class {rec.class_index})")

# why this works: the true count lives in a window shorter than 16p,
# so the two residues pin it uniquely
w = deligne_window(inv.picard_rank, p)
print(f"window [{w.lo}, {w.hi}] has length {w.hi - w.lo} < 16p = {16 * p}")
print(f"count mod 16 = {rec.count % 16}, count mod {p} = {rec.count % p}")

# the slow way, for comparison
print(f"\nbrute force over P^2(F_{p}):", resolved_count(surface, p))
