"""Pattern/dialect pairs whose query text is pinned under tests/golden."""
from mtlcheck import PatternSpec
from mtlcheck.mtl import UNBOUNDED, TimeWindow
from mtlcheck.querygen import Dialect
from mtlcheck.specfile import load_spec_file

from .conftest import DATA

WINDOWS = {"none": UNBOUNDED, "within": TimeWindow.within(4), "after": TimeWindow.after(1)}


def golden_cases():
    cases = []
    for kind in ("Response", "AlternateResponse", "ChainResponse"):
        for wname, w in WINDOWS.items():
            excluded = {"x"} if kind != "ChainResponse" else set()
            spec = PatternSpec(kind, "a", "b", excluded, window=w, name=f"{kind}-{wname}")
            for d in Dialect:
                cases.append((spec, d))
    hiring = {s.name: s for s in load_spec_file(DATA / "hiring.spec")}
    cases += [(hiring["Req.2"], Dialect.CYPHER_MULTIDIM), (hiring["Req.4"], Dialect.MATCH_RECOGNIZE),
              (hiring["Req.2"], Dialect.SQL_MINER), (hiring["Req.5"], Dialect.CYPHER_UA)]
    return cases
