"""The split exceptional algebra and the homogeneous-model catalogue.

The 14-dimensional algebra is realized by explicit 7x7 matrices; its
structure constants reproduce the stated left-invariant equations and pin
down the symmetry algebras of all homogeneous marked structures of symmetry
dimension at least 5.
"""

from engelkit.g2alg import (
    commutator_table,
    grading_and_parabolics,
    invariant_forms,
    verify_maurer_cartan,
)
from engelkit.models import (
    catalogue,
    flat_ideal_report,
    flat_symmetry_system,
    identify,
    jacobi_check,
)

alg = commutator_table()
print("basis closes; sample brackets:")
print("  [E1, E4] =", alg.bracket_basis(1, 4))
print("  [E2, E3] =", alg.bracket_basis(2, 3))

mc = verify_maurer_cartan()
print(f"structure equations matched: {14 - len(mc.mismatches)}/14 "
      f"(convention sign {mc.convention_sign})")
print("jacobi violations:", len(alg.jacobi_violations()))

grading = grading_and_parabolics()
print("grading element coordinates in (E5, E8):", grading.grading_element)
print("parabolics closed:", grading.parabolic_p1.closed, grading.parabolic_p2.closed)

forms = invariant_forms()
print("invariant bilinear form: dimension", forms.bilinear_dimension,
      "signature", forms.bilinear_signature)
print("killing signature:", forms.killing_signature)

print()
print("homogeneous-model catalogue:")
for system in catalogue():
    report = identify(system, split_ideals=(system.name == "six-dim-split"))
    print(" ", report.summary())

ideals = flat_ideal_report()
print("flat symmetry algebra: closed =", jacobi_check(flat_symmetry_system()),
      "| nilradical dim", ideals.nilradical_dim,
      "spanned by duals at indices", ideals.nilradical_basis_indices)
