"""The adapter must work with zero scoring-side or model imports.

It talks to the evaluation harness through files and subprocesses only,
and the heavyweight model stack loads lazily, so importing the package
has to stay cheap and dependency-free.
"""

import ast
import subprocess
import sys
from pathlib import Path

import amr_adapter

FORBIDDEN_IMPORTS = ("amrbench", "torch", "transformers")


def test_import_pulls_in_no_heavy_modules():
    code = (
        "import amr_adapter, sys; "
        "roots = {m.split('.')[0] for m in sys.modules}; "
        f"bad = sorted(roots & set({FORBIDDEN_IMPORTS!r})); "
        "print(bad)"
    )
    proc = subprocess.run(
        [sys.executable, "-c", code], capture_output=True, text=True, check=True
    )
    assert proc.stdout.strip() == "[]"


def test_source_never_imports_the_scoring_package():
    src = Path(amr_adapter.__file__).parent
    offenders = []
    for path in sorted(src.rglob("*.py")):
        tree = ast.parse(path.read_text(encoding="utf-8"))
        for node in ast.walk(tree):
            if isinstance(node, ast.Import):
                names = [alias.name for alias in node.names]
            elif isinstance(node, ast.ImportFrom):
                names = [node.module or ""]
            else:
                continue
            for name in names:
                if name.split(".")[0] == "amrbench":
                    offenders.append(f"{path.name}:{node.lineno}")
    assert offenders == []
