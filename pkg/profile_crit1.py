import time
from microsheaf.acceptance import _Workspace, _sample_twisted
from microsheaf.ainfty import check_relations
from microsheaf.twisted import twisted_category

ws = _Workspace(0)
for name in ["circle3", "interval", "sphere", "torus7", "mobius5"]:
    A = ws.dg[name]
    t0 = time.time(); r1 = check_relations(A, 6); t1 = time.time()
    mor = ws.morse(name); t2 = time.time()
    r2 = check_relations(mor.category, 6); t3 = time.time()
    tws = _sample_twisted(A)
    Tw = twisted_category(A, tws)
    r3 = check_relations(Tw, 6); t4 = time.time()
    tws_m = _sample_twisted(mor.category)
    TwM = twisted_category(mor.category, tws_m)
    r4 = check_relations(TwM, 6); t5 = time.time()
    print(f"{name}: dg {t1-t0:.1f}s morbuild {t2-t1:.1f}s morcheck {t3-t2:.1f}s "
          f"Twdg {t4-t3:.1f}s Twmor {t5-t4:.1f}s "
          f"ok={all([r1.ok, r2.ok, r3.ok, r4.ok])}", flush=True)
