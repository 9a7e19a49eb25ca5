"""Rewrite tests/golden/ from the current CLI. Review the diff before committing."""
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "tests"))

from golden_cases import CASES  # noqa: E402
from lvnsfd.cli import main  # noqa: E402

out_dir = ROOT / "tests" / "golden"
out_dir.mkdir(exist_ok=True)
for name, (argv, expected) in CASES.items():
    code = main([*argv, "--out", str(out_dir / name)])
    status = "ok" if code == expected else f"UNEXPECTED exit {code}"
    print(f"{name}: exit {code} ({status})")
