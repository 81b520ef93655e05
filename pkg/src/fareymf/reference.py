"""Printed reference values shipped with the package (data/reference_tables.json)."""
from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources


@lru_cache(maxsize=1)
def load() -> dict:
    with resources.files("fareymf").joinpath("data/reference_tables.json").open() as fh:
        return json.load(fh)


def table(tid) -> list[dict]:
    return load()["tables"][str(tid)]["rows"]


def column(tid, name, corrected: bool = True) -> list:
    """One column of a table; with corrected=True presumed misprints are replaced."""
    vals = [r.get(name) for r in table(tid)]
    if corrected:
        for c in load()["corrections"]:
            if c["table"] == str(tid) and c["column"] == name and c["implied"] is not None:
                vals[c["row"] - 1] = c["implied"]
    return vals


def table1_grid() -> list[tuple[float, int]]:
    return [(r["m"], r["K"]) for r in table(1)]


def pi_bar() -> dict:
    return dict(load()["pi_bar"])


def corrections() -> list[dict]:
    return list(load()["corrections"])
