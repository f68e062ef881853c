import cProfile
import pstats

from microsheaf.acceptance import _Workspace, _sample_twisted
from microsheaf.ainfty import check_relations
from microsheaf.twisted import twisted_category

ws = _Workspace(0)
A = ws.dg["circle3"]
tws = _sample_twisted(A)
Tw = twisted_category(A, tws)
pr = cProfile.Profile()
pr.enable()
check_relations(Tw, 3)
pr.disable()
stats = pstats.Stats(pr)
stats.sort_stats("tottime")
stats.print_callers("fractions.py:637", 6)
