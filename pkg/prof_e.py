import cProfile
import pstats
import time

from microsheaf.acceptance import _Workspace
from microsheaf.ainfty import check_relations

ws = _Workspace(0)
mor = ws.morse("circle3")
pr = cProfile.Profile()
pr.enable()
r = check_relations(mor.category, 6)
pr.disable()
print("ok:", r.ok)
stats = pstats.Stats(pr)
stats.sort_stats("tottime").print_stats(12)
