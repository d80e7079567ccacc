"""Walk through the invariants of a few marking functions.

A marking function t(x0..x4) picks a point on each twisted-cubic fibre of
the flat contact structure.  The toolkit builds the adapted coframe, reads
off the ten structure functions a, b, c, J, L, M, P, Q, R, S two independent
ways, and classifies the structure into the branch tree.
"""

from engelkit.engel import (
    adapted_coframe,
    classify,
    invariants_closed_form,
    invariants_from_structure_equations,
)
from engelkit.symexpr import parse

EXAMPLES = [
    ("0", "the flat model"),
    ("x4", "a linear marking: not integrable"),
    ("(x1 - 2*x3)/(-x2 + 2*x4)", "a hyperplane-section marking: submaximal"),
    ("x0*x4 + x2^2", "a random quadratic marking"),
]

for text, blurb in EXAMPLES:
    t = parse(text)
    print(f"== t = {text}   ({blurb})")

    acf = adapted_coframe(t)
    print("   coframe forms:")
    for i, w in enumerate(acf.omega):
        print(f"     w{i} = {w}")

    inv = invariants_closed_form(t)
    other = invariants_from_structure_equations(t)
    print("   invariants (closed form):")
    for name, value in inv.main_fields().items():
        agree = "" if (value - getattr(other, name)).is_zero else "  <- MISMATCH"
        print(f"     {name} = {value}{agree}")

    try:
        label = classify(t)
        print(f"   branch: {label}")
    except Exception as exc:
        print(f"   branch: {exc}")
    print()
