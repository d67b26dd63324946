"""Mid-spectrum singular values of W_N for a circle versus a line segment.

Prints sigma_{ceil(N/2)} / sigma_1 per N and the trend verdict for each measure.
"""

from weylmeasure import catalog_measure, circle_measure, compactness_scan

N_LIST = [32, 64, 128, 256]

for name, m in [("circle", circle_measure()), ("line_segment", catalog_measure("line_segment"))]:
    rep = compactness_scan(m, N_LIST, 8)
    ratios = "  ".join(f"N={N}: {r:.3e}" for N, r in zip(N_LIST, rep.mid_ratios))
    print(f"{name:13s} {ratios}  trend={rep.trend}")
