import pytest

from ar2lab import ARCoefficients

# One pair per spectral shape: two real roots, a repeated root, a
# conjugate pair, and a near-boundary dominant negative root.
NAMED_PAIRS = {
    "two-real": (0.3, 0.2),
    "repeated": (1.0, -0.25),
    "conjugate": (0.0, -0.5),
    "slow-negative": (-0.6, 0.3),
}


@pytest.fixture(params=sorted(NAMED_PAIRS), ids=sorted(NAMED_PAIRS))
def named_coeffs(request) -> ARCoefficients:
    a, b = NAMED_PAIRS[request.param]
    return ARCoefficients(a, b)
