import time

from microsheaf.acceptance import run_all

t0 = time.time()
(c,) = run_all(seed=0, numbers=[1])
print(c.summary(), "%.1fs" % (time.time() - t0), flush=True)
for label, ok, detail in c.results:
    print(("  ok " if ok else "  FAIL ") + label, detail, flush=True)
