"""Is a stream of arrivals Poisson?

Arrival times are sampled at the nominal rate, the sliding-window rate is
tracked over time and the conditional-uniformity KS test is applied. The
same test rejects a burst of arrivals packed into a couple of seconds.
"""

import numpy as np

from _out import out_dir
from loomnav.emergence import (EmergenceSequence, interval_probabilities, ks_test_poisson, rate_curve,
                               sample_poisson)
from loomnav.svg import series_svg

rate = 0.961
p0, p1, p2 = interval_probabilities(rate)
print(f"rate {rate}/s: P(0)={p0:.4f} P(1)={p1:.4f} P(>=2)={p2:.4f} per second")

seq = sample_poisson(rate, (0.0, 600.0), seed=3)
res = ks_test_poisson(seq)
print(f"{len(seq)} sampled arrivals: D={res.statistic:.4f} p={res.p_value:.3f} passed={res.passed}")

passed = np.mean([ks_test_poisson(sample_poisson(rate, (0.0, 200.0), s)).passed for s in range(1000)])
print(f"1000 replicates over 200 s pass at the 5% level {100 * passed:.1f}% of the time")

burst = ks_test_poisson(EmergenceSequence(np.linspace(0.0, 2.0, 40), (0.0, 200.0)))
print(f"40 arrivals in 2 s of a 200 s window: D={burst.statistic:.3f} passed={burst.passed}")

t, r = rate_curve(seq, T=120.0, step=1.0)
path = out_dir("emergence") / "rate_curve.svg"
path.write_text(series_svg(t, {"arrivals per second over the next 120 s": r}))
print(f"wrote {path}")
