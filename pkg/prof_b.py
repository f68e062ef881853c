import cProfile
import pstats
import time

from microsheaf.acceptance import _Workspace
from microsheaf.ainfty import check_relations

ws = _Workspace(0)
A = ws.dg["circle3"]
t0 = time.time()
pr = cProfile.Profile()
pr.enable()
r = check_relations(A, 6)
pr.disable()
print("circle3 dg order-6:", r.ok, "%.1fs" % (time.time() - t0))
stats = pstats.Stats(pr)
stats.sort_stats("cumulative").print_stats(14)
