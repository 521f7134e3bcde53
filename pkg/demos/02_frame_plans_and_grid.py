# Frame sampling plans and the 2x3 grid.
#
# Three plans feed the three metric families: 6 uniformly spaced frames are
# tiled into a grid for the video judge, 16 uniform frames feed detection,
# and the tracking plan resamples the clip to 8 FPS.

import numpy as np

from videval import compose_grid, resample_to_fps, uniform_indices

# In[1]: uniform sampling always includes both endpoints
print("48 frames -> 6:", uniform_indices(48, 6))
print("10 frames -> 6:", uniform_indices(10, 6))
print("16 frames -> 16:", uniform_indices(16, 16))

# short clips sample with duplicates instead of failing
print("3 frames -> 6:", uniform_indices(3, 6))

# In[2]: resampling to 8 FPS with half-up rounding
plan = resample_to_fps(24.0, 48, 8.0)
print("24 FPS, 48 frames ->", list(plan.indices))
plan = resample_to_fps(10.0, 36, 8.0)
print("10 FPS, 36 frames ->", list(plan.indices))

# In[3]: six frames tile into a 2-row x 3-column mosaic
frames = [np.full((320, 512, 3), 40 * i, dtype=np.uint8) for i in range(6)]
grid = compose_grid(frames)
print("grid shape:", grid.shape)  # (2*320, 3*512, 3)

# cells come back bit-exact
cell = grid[320:, 1024:]
print("bottom-right cell equals frame 5:", bool((cell == frames[5]).all()))
