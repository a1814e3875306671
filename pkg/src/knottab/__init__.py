"""Knot tabulation from pair codes.

Layers, bottom up: `codes` owns the notation and its canonical form,
`realize` decides which codes are drawable and builds diagrams, `moves`
merges codes related by bounded Reidemeister searches, `colortests` and
`alexander` compute the invariants that tell the survivors apart, and
`tabulate` wires the stages into a checkpointed pipeline behind the CLI.
"""

from .codes import (InvalidCode, PairCode, canonical_form, enumerate_codes,
                    mirror, parse_code, relabel, serialize_code)
from .realize import (Diagram, Loop, NotRealizable, UnknownCrossing, arcs_at,
                      enumerate_loops, jordan_test, parity_check, realize)
from .moves import (BoundTooSmall, ClassRecord, ClassStore, classify,
                    parse_store, r1_neighbors, r2_neighbors, r3_neighbors,
                    serialize_store)
from .colortests import (ColorMatrix, GcdViolation, InvariantVector,
                         SizeMismatch, affine, conjugation, count_colorings,
                         enumerate_tests, invariant_vector, irreducible,
                         mirror_test, parse_test, same_test, serialize_test,
                         validate)
from .alexander import (LaurentPolynomial, alexander_poly, eval_at_minus_one,
                        parse_poly, serialize_poly)
from .tabulate import (ConfigMismatch, CorruptCheckpoint, InvariantRow,
                       PipelineState, Report, RunConfig, TableRow,
                       build_suite, census_classes, distinguish, emit_table,
                       parse_invariants, resume, run, serialize_invariants)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
