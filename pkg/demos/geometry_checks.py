"""Finite type, spanning points and hyperplane detection on catalog curves."""

from weylmeasure import curve_catalog
from weylmeasure.geometry import geometry_report
from weylmeasure.twisted import critical_set_area

for name in ["circle", "cubic_arc", "line_segment"]:
    rep = geometry_report(curve_catalog(name), samples=8)
    print(f"{name}: orders {rep['finite_type']['orders']}, "
          f"spanning found={rep['spanning_points']['found']}, hyperplane={rep['hyperplane']}")

c = curve_catalog("circle")
for eta, area in critical_set_area(c, c):
    print(f"circle+circle critical set area at eta={eta}: {area:.4f}")
