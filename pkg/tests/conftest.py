"""Shared fixtures: throwaway platforms and tiny guest bundles."""

import shutil

import pytest

from faasforge.platform import Platform

PY_ECHO = b"def fn(data):\n    return 'echo:' + data\n"

NODE_ECHO = b"function fn(data) { return 'echo:' + data; }\nmodule.exports = { fn };\n"


def py_bundle(code: bytes = PY_ECHO) -> dict:
    return {"fn.py": code}


def node_bundle(code: bytes = NODE_ECHO) -> dict:
    return {"fn.js": code}


@pytest.fixture
def platform(tmp_path):
    plat = Platform(work_dir=tmp_path / "plat")
    yield plat
    plat.shutdown()


@pytest.fixture(scope="session")
def node_available():
    if shutil.which("node") is None:
        pytest.skip("node executable not on PATH")
    return True
