"""rankone: rank-one convexity and polyconvexity checks for planar energies."""
