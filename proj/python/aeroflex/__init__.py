from ._aeroflex import *  # noqa: F401,F403
