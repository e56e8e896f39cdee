from __future__ import annotations

from pathlib import Path

import pytest

from parasol.manifest import Manifest, load_manifest
from parasol.symexpr import Expr, SymbolTable, parse_expr

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture(scope="session")
def ps3() -> Manifest:
    return load_manifest(FIXTURES / "ps3.toml")


@pytest.fixture(scope="session")
def ps3_typo() -> Manifest:
    return load_manifest(FIXTURES / "ps3-typo.toml")


@pytest.fixture(scope="session")
def flat3() -> Manifest:
    return load_manifest(FIXTURES / "flat3.toml")


@pytest.fixture(scope="session")
def polar2() -> Manifest:
    return load_manifest(FIXTURES / "polar2.toml")


@pytest.fixture(scope="session")
def ps3_frame(ps3):
    return ps3.frames["e"]


@pytest.fixture(scope="session")
def xyz_table() -> SymbolTable:
    return SymbolTable.build(coordinates=["x", "y", "z"], parameters=["p"])


def parse_in(man: Manifest, text: str) -> Expr:
    return parse_expr(text, man.table)


@pytest.fixture(scope="session")
def ps3_problem(ps3):
    return ps3.soliton_problem()


@pytest.fixture(scope="session")
def ps3_solution(ps3_problem):
    from parasol.soliton import solve_constants

    return solve_constants(ps3_problem)
