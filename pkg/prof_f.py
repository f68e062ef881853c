import time

from microsheaf.acceptance import _Workspace, _sample_twisted
from microsheaf.ainfty import check_relations
from microsheaf.twisted import twisted_category

ws = _Workspace(0)
for name in ["sphere", "torus7", "mobius5", "interval"]:
    t0 = time.time()
    A = ws.dg[name]
    r1 = check_relations(A, 6)
    t1 = time.time()
    mor = ws.morse(name)
    t2 = time.time()
    r2 = check_relations(mor.category, 6)
    t3 = time.time()
    print(f"{name}: dgcheck {t1-t0:.1f}s morbuild {t2-t1:.1f}s "
          f"morcheck {t3-t2:.1f}s ok={r1.ok and r2.ok}", flush=True)
