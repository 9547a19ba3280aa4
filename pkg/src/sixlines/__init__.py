"""Exact point counts for K3 double planes branched over six lines.

The pipeline in one sentence: the count of F_p-points of the resolved
double cover is pinned by its residue mod 16 (from a finite table of
Galois sign classes, or a real-multiplication rule) together with its
residue mod p (one coefficient of a polynomial power), because the Weil
bounds confine it to an interval shorter than 16p.

Layers, bottom up:

* :mod:`sixlines.modular` -- Jacobi symbols, CRT, prime iteration.
* :mod:`sixlines.surfaces` -- surface descriptions, validation, bad
  primes, Frobenius action on the branch lines.
* :mod:`sixlines.counting` -- the enumeration oracle and the
  coefficient-extraction backend for the mod-p residue.
* :mod:`sixlines.tracetable` -- sign classes and the mod-16 trace
  table (direct and congruence-solving initialisation).
* :mod:`sixlines.assemble` -- the window argument combining both
  residues into the exact count.
* :mod:`sixlines.realmult` -- the shortcut for the surface with real
  multiplication (no table, residue rules by p mod 5).
* :mod:`sixlines.lattices` -- 2-adic bilinear forms: Jordan splitting,
  orthogonal sampling, trace-congruence rigidity checks.
* :mod:`sixlines.brauer` -- the 2-torsion Brauer structure over GF(2)
  and its symmetric-group action.
* :mod:`sixlines.cli` -- the ``sixlines`` command.
"""

from .assemble import (
    CountRecord,
    SkipRecord,
    count_one,
    count_range,
    deligne_window,
    pick_count,
)
from .counting import BACKENDS, count_mod_p, naive_modp, resolved_count
from .errors import (
    AmbiguousCountError,
    DegenerateLatticeError,
    MathInconsistencyError,
    SixLinesError,
    SurfaceValidationError,
    TableFormatError,
    UndeterminedSystemError,
    UsageError,
)
from .fixtures import builtin_names, builtin_surface
from .surfaces import (
    Surface,
    bad_primes,
    frobenius_line_permutation,
    invariants,
    is_good_prime,
    load_surface,
    surface_from_dict,
    validate,
)
from .tracetable import TraceTable, galois_class, init_direct, init_efficient

__version__ = "0.1.0"

__all__ = [
    "AmbiguousCountError",
    "BACKENDS",
    "CountRecord",
    "DegenerateLatticeError",
    "MathInconsistencyError",
    "SixLinesError",
    "SkipRecord",
    "Surface",
    "SurfaceValidationError",
    "TableFormatError",
    "TraceTable",
    "UndeterminedSystemError",
    "UsageError",
    "bad_primes",
    "builtin_names",
    "builtin_surface",
    "count_mod_p",
    "count_one",
    "count_range",
    "deligne_window",
    "frobenius_line_permutation",
    "galois_class",
    "init_direct",
    "invariants",
    "init_efficient",
    "is_good_prime",
    "load_surface",
    "naive_modp",
    "pick_count",
    "resolved_count",
    "surface_from_dict",
    "validate",
    "__version__",
]
