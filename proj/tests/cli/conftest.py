import os
import subprocess

import pytest


@pytest.fixture(scope="session")
def uregion():
    exe = os.environ.get("UREGION_BIN")
    if not exe:
        pytest.skip("UREGION_BIN not set")

    def run(*args, check=True):
        proc = subprocess.run([exe, *map(str, args)], capture_output=True, text=True)
        if check and proc.returncode != 0:
            raise AssertionError(f"exit {proc.returncode}: {proc.stderr}")
        return proc

    return run
