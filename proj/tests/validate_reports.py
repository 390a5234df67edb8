"""Run desc on every fixture and command; validate each report against the schema."""

import json
import pathlib
import subprocess
import sys
import tempfile

import jsonschema

COMMANDS = ["check-group", "check-action", "check-bundle", "check-cover", "check-sheaf",
            "glue-morphisms", "glue-object", "verify-stack", "classify"]


def main(desc, fixtures, schema_path):
    schema = json.loads(pathlib.Path(schema_path).read_text())
    validator = jsonschema.Draft202012Validator(schema)
    failures = 0
    runs = 0
    with tempfile.TemporaryDirectory() as tmp:
        out = pathlib.Path(tmp) / "r.json"
        sites = sorted(pathlib.Path(fixtures).glob("*.site")) + [pathlib.Path(tmp) / "missing.site"]
        for site in sites:
            for cmd in COMMANDS + ["no-such-command"]:
                out.unlink(missing_ok=True)
                proc = subprocess.run([desc, cmd, str(site), "--budget", "5", "--report", str(out)],
                                      capture_output=True, text=True)
                report = json.loads(out.read_text())
                errors = list(validator.iter_errors(report))
                if report["exit_code"] != proc.returncode:
                    errors.append(f"exit code {proc.returncode} but report says {report['exit_code']}")
                runs += 1
                for e in errors:
                    failures += 1
                    print(f"{site.name} {cmd}: {getattr(e, 'message', e)}")
    print(f"{runs} reports, {failures} schema violations")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main(*sys.argv[1:4]))
