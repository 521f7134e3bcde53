# Rank correlation between metric scores and human ratings.
#
# Human ratings on a 1..5 scale are tie-heavy, so the tie-corrected
# Kendall tau-b and mean-rank Spearman rho are used.

import numpy as np

from videval import HumanRating, aggregate_human, kendall_tau_b, spearman_rho

# In[1]: worked example with ties in both lists
xs = [1, 2, 2, 3]
ys = [1, 2, 3, 3]
print("tau-b:", kendall_tau_b(xs, ys))      # 0.8
print("rho:  ", spearman_rho(xs, ys))       # 0.8333...

# In[2]: both are invariant under monotone transforms of either side
print("tau-b after x -> 3x + 1:", kendall_tau_b([3 * x + 1 for x in xs], ys))
print("rho after y -> exp(y):  ", spearman_rho(xs, np.exp(ys).tolist()))

# In[3]: human ratings average across the three annotators per video
ratings = []
rng = np.random.default_rng(0)
for video in range(8):
    base = int(rng.integers(1, 6))
    for annotator in ("a1", "a2", "a3"):
        noisy = int(np.clip(base + rng.integers(-1, 2), 1, 5))
        ratings.append(HumanRating("model-x", f"clip-{video}", annotator, noisy))
means, flagged = aggregate_human(ratings)
print("aggregated:", {key[1]: round(value, 2) for key, value in sorted(means.items())})
print("keys without 3 annotators:", flagged)

# In[4]: correlate a synthetic metric against those means
keys = sorted(means)
human = [means[key] for key in keys]
metric = [value / 5 + float(rng.normal(0, 0.05)) for value in human]
print("tau-b vs human:", round(kendall_tau_b(metric, human), 4))
print("rho vs human:  ", round(spearman_rho(metric, human), 4))
