"""Run the blm CLI on small generated inputs and validate its JSON output
against the shipped schemas.

usage: validate_schemas.py BLM_EXE SCHEMA_DIR
"""

import json
import random
import subprocess
import sys
import tempfile
from pathlib import Path

import jsonschema


def run(exe, *args):
    proc = subprocess.run([exe, *args], capture_output=True, text=True, check=False)
    if proc.returncode != 0:
        raise SystemExit(f"blm {' '.join(args)} exited {proc.returncode}: {proc.stderr}")
    return json.loads(proc.stdout)


def write_csv_tensor(path, values):
    path.write_text("\n".join(repr(v) for v in values) + "\n")


def main():
    exe, schema_dir = sys.argv[1], Path(sys.argv[2])
    schemas = {
        name: json.loads((schema_dir / f"{name}.schema.json").read_text())
        for name in ("analysis_report", "correlation_table")
    }
    for s in schemas.values():
        jsonschema.Draft202012Validator.check_schema(s)

    rng = random.Random(7)
    checked = 0
    with tempfile.TemporaryDirectory() as tmp:
        tmp = Path(tmp)
        write_csv_tensor(tmp / "w1.csv", [rng.gauss(0, 0.05) for _ in range(3000)])
        write_csv_tensor(tmp / "w2.csv", [rng.gauss(0, 0.2) for _ in range(2000)])
        write_csv_tensor(tmp / "zeros.csv", [0.0] * 50)
        write_csv_tensor(tmp / "b.csv", [0.1] * 10)
        manifest = {
            "model_name": "schema-check",
            "tensors": [
                {"name": "conv1.weight", "path": "w1.csv", "format": "csv"},
                {"name": "fc.weight", "path": "w2.csv", "format": "csv", "shape": [2000]},
                {"name": "dead.weight", "path": "zeros.csv", "format": "csv"},
                {"name": "fc.bias", "path": "b.csv", "format": "csv"},
            ],
        }
        (tmp / "m.json").write_text(json.dumps(manifest))

        reports = [
            run(exe, "analyze", "--manifest", str(tmp / "m.json")),
            run(exe, "analyze", "--manifest", str(tmp / "m.json"), "--per-layer", "--train-acc", "0.8"),
            run(exe, "analyze", "--file", str(tmp / "w1.csv"), "--train-acc", "0"),
        ]
        for r in reports:
            jsonschema.validate(r, schemas["analysis_report"])
            assert abs(sum(r["overall"]["bincount"]) - 1.0) < 1e-6, r["overall"]["bincount"]
            checked += 1
        layers = reports[1]["layers"]
        assert [l["name"] for l in layers] == ["conv1.weight", "fc.weight", "dead.weight"], layers
        assert layers[2]["mlh"] is None and layers[2]["jsd"] is None
        assert "eic" not in reports[0]["overall"] and "eic" in reports[1]["overall"]
        assert reports[2]["overall"]["eic_sr"] is None

        lines = ["step,train_acc,mlh,val_acc,loss"]
        for i in range(15):
            a, m = rng.uniform(0.3, 1.0), rng.uniform(0.95, 0.999)
            lines.append(f"{i},{a},{m},{0.5 * a + 0.2 * rng.random()},{rng.random()}")
        (tmp / "runs.csv").write_text("\n".join(lines) + "\n")
        table = run(exe, "correlate", "--input", str(tmp / "runs.csv"))
        jsonschema.validate(table, schemas["correlation_table"])
        metrics = [row["metric"] for row in table["rows"]]
        assert metrics[:6] == ["loss", "A", "MLH", "-EIC", "-EIC_scaled", "-EIC_SR"], metrics
        assert metrics[6:] == ["GPR(A)", "GPR(MLH)", "GPR(MLH,A)"], metrics
        checked += 1

    print(f"{checked} JSON documents validated")


if __name__ == "__main__":
    main()
