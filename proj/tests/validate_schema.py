#!/usr/bin/env python3
"""Validates CLI JSON reports against the shipped schema.

usage: validate_schema.py <coopsafe binary> <source dir>
"""
import json
import subprocess
import sys
import tempfile
from pathlib import Path

import jsonschema


def report(cli, args):
    proc = subprocess.run([cli, *args, "--fail-on", "none"], capture_output=True, text=True)
    if proc.returncode != 0:
        sys.exit(f"{' '.join(args)}: exit {proc.returncode}\n{proc.stderr}")
    return json.loads(proc.stdout)


def main():
    cli, root = sys.argv[1], Path(sys.argv[2])
    schema = json.loads((root / "schema" / "report.schema.json").read_text())
    validator = jsonschema.Draft202012Validator(schema)

    with tempfile.TemporaryDirectory() as tmp:
        empty = Path(tmp) / "empty.coop"
        empty.write_text("# no functions\n")
        cases = {
            "fixture": ["report", "-m", str(root / "fixtures" / "platooning")],
            "fixture with timestamps": ["report", "-m", str(root / "fixtures" / "platooning"), "--timestamps"],
            "validate stage": ["validate", "-m", str(root / "fixtures" / "platooning")],
            "empty model": ["report", "-m", str(empty)],
        }
        failures = 0
        for name, args in cases.items():
            doc = report(cli, args)
            errors = sorted(validator.iter_errors(doc), key=lambda e: list(e.path))
            for e in errors[:5]:
                print(f"{name}: {'/'.join(map(str, e.path))}: {e.message}")
            failures += bool(errors)
            print(f"{name}: {'FAIL' if errors else 'ok'}")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
