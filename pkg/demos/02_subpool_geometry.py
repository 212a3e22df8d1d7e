"""How the balancing factor shapes per-cycle windows over the sorted pool.

beta = 1 partitions the pool exactly; beta > 1 widens each window so adjacent
cycles overlap; beta < 1 leaves gaps between them.
"""

from bal import subpool_coverage
from bal.pool import window_bounds

N, I = 100, 10
for beta in (0.5, 1.0, 1.3, 2.0):
    rep = subpool_coverage(I, beta, N)
    print(f"beta={beta}")
    print("  windows:", " ".join(f"[{s},{e})" for s, e in rep["windows"]))
    print(f"  interior overlaps {rep['overlaps'][1:-1]}, "
          f"gaps {rep['gaps'][1:-1]}, "
          f"uncovered {rep['uncovered_positions']}, "
          f"exact tiling {rep['exact_tiling']}")

# the middle window stays centered on its beta=1 slot as beta grows
print("\ncycle 5 window vs beta:")
for beta in (1.0, 1.5, 2.0, 3.0):
    print(f"  beta={beta}: {window_bounds(N, 5, I, beta)}")
