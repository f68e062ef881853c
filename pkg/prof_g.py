import cProfile
import pstats
import time

from microsheaf.acceptance import _Workspace
from microsheaf.ainfty import check_relations

t0 = time.time()
ws = _Workspace(0)
print("workspace build %.1fs" % (time.time() - t0), flush=True)
A = ws.dg["sphere"]
for X in A.objects:
    for Y in A.objects:
        print(X, Y, A.hom(X, Y).space.dims, flush=True)
t0 = time.time()
pr = cProfile.Profile()
pr.enable()
r = check_relations(A, 6)
pr.disable()
print("sphere dg check %.1fs ok=%s" % (time.time() - t0, r.ok), flush=True)
pstats.Stats(pr).sort_stats("tottime").print_stats(8)
