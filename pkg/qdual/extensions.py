from functools import lru_cache

from mpmath import MPContext, fp


def standard_backend():
	return fp


@lru_cache(maxsize=None)
def extended_backend(dps: int) -> MPContext:
	# private context so changing its precision never touches mpmath.mp
	backend = MPContext()
	backend.dps = dps
	return backend
