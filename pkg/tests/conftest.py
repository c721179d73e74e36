"""Shared fixtures: the two reference instances used throughout the suite.

REF1: one 100-unit sector, still water, unit constant fuel rate, alpha 1,
RTA 6 (6 variables on the default pace grid). REF2: two such sectors with
RTA 12 (12 variables).
"""

from __future__ import annotations

import json

import pytest

from voyageopt import FuelModel, RouteScenario, Sector


def make_ref_scenario(num_sectors: int, rta: float) -> RouteScenario:
    sector = Sector(length=100.0, fuel=FuelModel(a=1.0, b=0.0, c=0.0, e=0.0))
    return RouteScenario(sectors=(sector,) * num_sectors, rta=rta, alpha=1.0)


REF1_DOC = {
    "sectors": [
        {"length": 100.0, "parallel_flow": 0.0, "fuel": {"a": 1.0, "b": 0.0}},
    ],
    "rta": 6.0,
    "alpha": 1.0,
}

REF2_DOC = {
    "sectors": [
        {"length": 100.0, "parallel_flow": 0.0, "fuel": {"a": 1.0, "b": 0.0}},
        {"length": 100.0, "parallel_flow": 0.0, "fuel": {"a": 1.0, "b": 0.0}},
    ],
    "rta": 12.0,
    "alpha": 1.0,
}


@pytest.fixture
def ref1() -> RouteScenario:
    return make_ref_scenario(1, rta=6.0)


@pytest.fixture
def ref2() -> RouteScenario:
    return make_ref_scenario(2, rta=12.0)


@pytest.fixture
def ref1_file(tmp_path):
    path = tmp_path / "ref1.json"
    path.write_text(json.dumps(REF1_DOC))
    return path


@pytest.fixture
def ref2_file(tmp_path):
    path = tmp_path / "ref2.json"
    path.write_text(json.dumps(REF2_DOC))
    return path
