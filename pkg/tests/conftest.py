"""Shared test configuration.

The hypothesis deadline is disabled globally: a few properties walk
moderately large structures and the default 200ms per-example deadline
turns slow-CI noise into spurious failures.
"""

from hypothesis import settings

settings.register_profile("hsd", deadline=None, max_examples=200)
settings.load_profile("hsd")
