import itertools

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from graphlim.graph_core import Graph

settings.register_profile(
    "default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@st.composite
def graphs(draw, min_n=1, max_n=7, connected=False):
    n = draw(st.integers(min_n, max_n))
    pairs = list(itertools.combinations(range(n), 2))
    picks = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    G = Graph.from_edges(n, (e for e, keep in zip(pairs, picks) if keep))
    if connected and not G.is_connected():
        # chain the components together
        comps = G.components
        extra = [(comps[i][0], comps[i + 1][0]) for i in range(len(comps) - 1)]
        G = Graph.from_edges(n, G.edges() + extra)
    return G


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(RESULTS):
        ok, why = RESULTS[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}" + ("" if ok else f" ({why})"))
