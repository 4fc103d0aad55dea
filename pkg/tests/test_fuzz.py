"""Quick randomized invariant checks; the acceptance suite runs the long one."""

import pytest

from fuzz_support import fuzz_run


@pytest.mark.parametrize("seed", range(8))
def test_random_edit_sequences_preserve_invariants(seed):
    accepted, rejected = fuzz_run(seed, 60)
    assert accepted + rejected == 60


def test_fuzz_exercises_both_outcomes():
    accepted, rejected = fuzz_run(99, 120)
    assert accepted > 5
    assert rejected > 5
