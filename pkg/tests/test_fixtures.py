from __future__ import annotations

import importlib.util

from treekit import FIXTURES


def test_fixtures_are_current():
    spec = importlib.util.spec_from_file_location("build_fixtures", FIXTURES / "build_fixtures.py")
    module = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(module)
    for name, data in module.build().items():
        assert (FIXTURES / name).read_bytes() == data, f"{name} is stale; rerun build_fixtures.py"
