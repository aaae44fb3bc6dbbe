#!/usr/bin/env python3
from __future__ import annotations

import ast
import re
import sys
import tomllib
from pathlib import Path

REPO_ROOT = Path(__file__).resolve().parents[1]
SCANNED_DIRS = ("src", "tests", "tools")

FORBIDDEN_FILES = {
    "requirements.txt",
    "Pipfile",
    "Pipfile.lock",
    "poetry.lock",
    "package.json",
    "package-lock.json",
    "pnpm-lock.yaml",
    "yarn.lock",
}

ALLOWED_IMPORT_PREFIXES = (
    "lazyshelf",
    "tests",
)

# Distribution names whose import name differs.
IMPORT_NAMES = {
    "scikit-learn": "sklearn",
}


def declared_imports() -> set[str]:
    """Top-level import names of every dependency pyproject.toml declares."""

    project = tomllib.loads((REPO_ROOT / "pyproject.toml").read_text(encoding="utf-8"))["project"]
    requirements = list(project.get("dependencies", []))
    for extra in project.get("optional-dependencies", {}).values():
        requirements.extend(extra)
    names = set()
    for requirement in requirements:
        match = re.match(r"[A-Za-z0-9_.\-]+", requirement.strip())
        if match:
            dist = match.group(0).lower()
            names.add(IMPORT_NAMES.get(dist, dist.replace("-", "_")))
    return names


def is_allowed(mod: str, declared: set[str]) -> bool:
    top = mod.split(".", 1)[0]
    return top in sys.stdlib_module_names or top in declared or mod.startswith(ALLOWED_IMPORT_PREFIXES)


def scan_forbidden_files() -> list[str]:
    return [
        str(p.relative_to(REPO_ROOT))
        for p in REPO_ROOT.glob("*")
        if p.is_file() and p.name in FORBIDDEN_FILES
    ]


def scan_imports(declared: set[str]) -> list[str]:
    problems = []
    for folder in SCANNED_DIRS:
        for py in sorted((REPO_ROOT / folder).rglob("*.py")):
            if "__pycache__" in py.parts:
                continue
            try:
                tree = ast.parse(py.read_text(encoding="utf-8"), filename=str(py))
            except SyntaxError as e:
                problems.append(f"{py.relative_to(REPO_ROOT)}: syntax error: {e}")
                continue

            for node in ast.walk(tree):
                if isinstance(node, ast.Import):
                    for alias in node.names:
                        if not is_allowed(alias.name, declared):
                            problems.append(f"{py.relative_to(REPO_ROOT)}: undeclared import '{alias.name}'")
                elif isinstance(node, ast.ImportFrom):
                    if node.level and node.level > 0:
                        continue
                    mod = node.module or ""
                    if mod and not is_allowed(mod, declared):
                        problems.append(f"{py.relative_to(REPO_ROOT)}: undeclared import-from '{mod}'")
    return problems


def main() -> int:
    bad_files = scan_forbidden_files()
    bad_imports = scan_imports(declared_imports())

    if bad_files:
        print("Dependency gate failed: forbidden dependency files found:")
        for f in bad_files:
            print(f"  - {f}")

    if bad_imports:
        print("Dependency gate failed: imports not declared in pyproject.toml:")
        for p in bad_imports:
            print(f"  - {p}")

    if bad_files or bad_imports:
        return 1

    print("Dependency gate passed.")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
