import cProfile
import pstats
import time

from microsheaf.acceptance import _Workspace, _sample_twisted
from microsheaf.ainfty import check_relations
from microsheaf.twisted import twisted_category

ws = _Workspace(0)
name = "circle3"
A = ws.dg[name]
t0 = time.time()
mor = ws.morse(name)
t1 = time.time()
print("mor build %.1fs" % (t1 - t0), flush=True)
r2 = check_relations(mor.category, 6)
t2 = time.time()
print("mor check %.1fs ok=%s" % (t2 - t1, r2.ok), flush=True)
tws = _sample_twisted(A)
Tw = twisted_category(A, tws)
pr = cProfile.Profile()
pr.enable()
r3 = check_relations(Tw, 6)
pr.disable()
t3 = time.time()
print("Tw(dg) check %.1fs ok=%s" % (t3 - t2, r3.ok), flush=True)
stats = pstats.Stats(pr)
stats.sort_stats("cumulative").print_stats(10)
