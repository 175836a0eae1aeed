"""Run each subcommand and validate its JSON report against the shipped schema."""
import json
import pathlib
import subprocess
import sys
import tempfile

import jsonschema


def main(tool, schema_dir, data_dir):
    schema_dir = pathlib.Path(schema_dir)
    data_dir = pathlib.Path(data_dir)
    cases = [
        ("minima_report", ["minima", "--samples", "3", "--gap"]),
        ("catalog", ["enumerate", "--target", str(data_dir / "square.json")]),
        ("catalog", ["enumerate", "--target", str(data_dir / "kinked.json")]),
        ("catalog", ["enumerate", "--target", str(data_dir / "constant.json")]),
        ("ensemble", ["train", "--runs", "5", "--seed", "3"]),
        ("gf", ["gf", "--target", str(data_dir / "square.json"), "--t-end", "10"]),
    ]
    failures = 0
    with tempfile.TemporaryDirectory() as tmp:
        for i, (schema_name, args) in enumerate(cases):
            out = pathlib.Path(tmp) / str(i)
            proc = subprocess.run([tool, *args, "--out", str(out)], capture_output=True, text=True)
            if proc.returncode not in (0, 1):
                print(f"FAIL {' '.join(args)}: exit {proc.returncode}: {proc.stderr.strip()}")
                failures += 1
                continue
            report = next(out.glob("*.json"))
            schema = json.loads((schema_dir / f"{schema_name}.schema.json").read_text())
            validator = jsonschema.Draft202012Validator(schema)
            errors = sorted(validator.iter_errors(json.loads(report.read_text())), key=str)
            for e in errors:
                print(f"FAIL {' '.join(args)}: {'/'.join(map(str, e.path))}: {e.message}")
            failures += bool(errors)
            if not errors:
                print(f"ok   {' '.join(args)} -> {report.name}")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main(*sys.argv[1:4]))
