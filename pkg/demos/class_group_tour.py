"""
A six-dimensional class group and an automorphism that is not a disguise
========================================================================

Sixteen GF(2) coordinates (one hyperplane class, fifteen pair classes),
six parity conditions, six relations: what survives is a 6-dimensional
quotient with a distinguished 12-element orbit.  Chasing how line
permutations move that orbit produces an automorphism of Sym(6) that no
relabeling of anything can explain away.
"""

from sixlines.brauer import (
    build_brauer_quotient,
    class_labels,
    mask_from_pairs,
    orbit_stabilizer,
    pentagon_class,
    structure_report,
    verify_outer,
)

q = build_brauer_quotient()
print(f"even subspace dim {q.dim_even} -> quotient dim {q.dim} "
      f"({1 << q.dim} classes)")

b6 = pentagon_class(q)
orbit, stab = orbit_stabilizer(q, b6, "sym6")
print(f"pentagon class: orbit {len(orbit)}, stabilizer order {stab} "
      f"(icosahedral, embedded transitively)")

# same class, different drawing: another pentagon, through line 6
other = q.reduce(mask_from_pairs([(1, 3), (2, 3), (2, 4), (4, 6), (1, 6)]))
print(f"a pentagon on a different vertex set gives the same class: "
      f"{other == b6.representative}")

labels = class_labels(q)
cert = verify_outer(q)
swap = (2, 1, 3, 4, 5, 6)
print(f"\nclasses b_1..b_6 labeled; each permutation of the six lines")
print(f"permutes them (up to the invariant sum), giving a map "
      f"Sym(6) -> Sym(6).")
print(f"the transposition {swap} goes to {cert.mapping[swap]},")
print(f"cycle type {'+'.join(map(str, cert.transposition_cycle_type))} "
      f"-- fixed-point-free, so the map is outer: {cert.outer}")

print("\nfull battery:")
print(structure_report().summary())
