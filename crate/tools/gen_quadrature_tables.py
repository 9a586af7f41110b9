"""Emit the tetrahedral quadrature tables used by the reference element.

The rules are the Xiao-Gimbutas rules of degree 2, 4, 6, 8 and 10 as shipped
with FEniCS basix. Points are mapped from the unit simplex to the bi-unit
reference tetrahedron with vertices (-1,-1,-1), (1,-1,-1), (-1,1,-1), (-1,-1,1)
and weights are rescaled so that they sum to 4/3.

    python3 tools/gen_quadrature_tables.py > crates/core/src/reference_element/quadrature_tables.rs
"""
import basix

DEGREES = [2, 4, 6, 8, 10]

print("// Generated by tools/gen_quadrature_tables.py. Do not edit by hand.")
print("//")
print("// Xiao-Gimbutas rules on the bi-unit reference tetrahedron.")
print("// Each row is [r, s, t, weight].")
print()
for deg in DEGREES:
    pts, wts = basix.make_quadrature(
        basix.CellType.tetrahedron, deg, rule=basix.QuadratureType.xiao_gimbutas
    )
    name = f"XG_DEGREE_{deg}"
    print(f"pub(crate) const {name}: [[f64; 4]; {len(wts)}] = [")
    for (x, y, z), w in zip(pts, wts):
        r, s, t = (float(2.0 * c - 1.0) for c in (x, y, z))
        print(f"    [{r!r}, {s!r}, {t!r}, {float(8.0 * w)!r}],")
    print("];")
    print()
