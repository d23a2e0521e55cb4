"""Shared hypothesis strategies."""
from hypothesis import strategies as st

from relpib.ring import RingSpec, in_Sc, is_excluded

DS = (1, 2, 3, 5, 7, 11)


def rings(ds=DS):
    return st.sampled_from([RingSpec(D) for D in ds])


def elements(ring, bound=30):
    return st.builds(ring, st.integers(-bound, bound), st.integers(-bound, bound))


@st.composite
def ring_and_elements(draw, n=1, bound=30, ds=DS):
    ring = draw(rings(ds))
    return (ring,) + tuple(draw(elements(ring, bound)) for _ in range(n))


def generic_c(bound=20, ds=DS, positive_re=False):
    """``c`` outside ``{0, +-2}`` and S_c, optionally with Re(c) > 0."""
    def ok(c):
        return not is_excluded(c) and not in_Sc(c) and (c.x > 0 or not positive_re)
    return rings(ds).flatmap(lambda r: elements(r, bound)).filter(ok)
