#!/usr/bin/env python3
"""Dependency gate, then pytest. Extra arguments go to pytest (default: skip slow suites)."""
import subprocess
import sys
from pathlib import Path
from typing import Optional, Sequence

ROOT = Path(__file__).resolve().parents[1]
FAST_ONLY = ["-m", "not slow"]


def run(cmd: list[str]) -> int:
    print("+", " ".join(cmd))
    return subprocess.call(cmd, cwd=ROOT)


def main(argv: Optional[Sequence[str]] = None) -> int:
    pytest_args = list(sys.argv[1:] if argv is None else argv) or FAST_ONLY
    rc = run([sys.executable, str(ROOT / "tools" / "dependency_gate.py")])
    if rc != 0:
        print("dependency gate failed; tests not run")
        return rc
    return run([sys.executable, "-m", "pytest", "-q", *pytest_args])


if __name__ == "__main__":
    raise SystemExit(main())
