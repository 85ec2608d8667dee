"""
Synthetic signal generators
===========================

Every analysis in this package is exercised against signals whose ground
truth is known.  This script walks through the three base generators and
the session/cohort builders layered on top of them.
"""

import numpy as np

from lfptime.core import PhaseLabel, TreatmentLabel
from lfptime.synth import gen_cohort, gen_fgn, gen_logistic, gen_session, gen_white, profile_for

# 1. White noise: flat spectrum, no memory.  Same seed, same samples.
white = gen_white(4096, sigma=1.0, seed=0)
again = gen_white(4096, sigma=1.0, seed=0)
print("white noise:", len(white), "samples at", white.fs, "Hz")
print("deterministic:", np.array_equal(white.samples, again.samples))

# 2. Fractional Gaussian noise via circulant embedding.  The Hurst
#    exponent controls long memory: 0.5 is white, higher is persistent.
for hurst in (0.3, 0.5, 0.8):
    sig = gen_fgn(2**14, hurst, seed=1)
    r1 = float(np.corrcoef(sig.samples[:-1], sig.samples[1:])[0, 1])
    print(f"fGn H={hurst}: lag-1 autocorrelation {r1:+.3f} "
          f"(theory {2**(2*hurst-1) - 1:+.3f})")

# 3. Logistic map: deterministic chaos at r=4, a clean positive-Lyapunov
#    reference for the validity checks.
chaos = gen_logistic(1000, r=4.0, x0=0.3)
print("logistic map range:", float(chaos.samples.min()), "to", float(chaos.samples.max()))

# 4. A full subject-phase recording: two channels of fGn, with the
#    treatment's effect applied in the POST phase only.
profile = profile_for(TreatmentLabel.FOOD)
pre = gen_session(profile, PhaseLabel.PRE, duration_s=30.0, seed=7, subject_id="demo01")
post = gen_session(profile, PhaseLabel.POST, duration_s=30.0, seed=7, subject_id="demo01")
print("food effect on HIP amplitude:",
      f"{float(post.hip.samples.std() / pre.hip.samples.std()):.2f}x")

# 5. A cohort: (pre, post) pairs for every subject in every treatment
#    group, each with its own deterministic seed.
cohort = gen_cohort(subjects_per_group=2, seed=3, duration_s=30.0)
for cohort_pre, _ in cohort:
    print("subject", cohort_pre.subject_id, "treatment", cohort_pre.treatment.value)
