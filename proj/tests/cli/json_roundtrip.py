"""Runs CLI subcommands with --json and checks the reports parse and agree."""
import csv
import json
import os
import subprocess
import sys
import tempfile

HSB = sys.argv[1]


def run(*args):
    out = subprocess.run([HSB, *args, "--json"], check=True, capture_output=True, text=True).stdout
    return json.loads(out)


def main():
    c = run("constants", "--n", "9", "--s", "0.5")
    assert c["command"] == "constants" and c["inputs"]["n"] == 9, c
    assert abs(c["results"]["kappa_pow"] - 8.5 * 7) < 1e-12

    rows = run("integrals")["results"]["rows"]
    assert [r["exact"] for r in rows] == ["140/11", "63/11", "175/22", "225/11", "27/11", "405/22"], rows

    lg = run("lg", "--curvature", "sphere:1", "--critical", "--grid", "600,200,2")["results"]
    assert abs(lg["total"] - lg["local_term"] - lg["nonlocal_term"]) <= 1e-9 * abs(lg["total"]), lg

    fam = run("family", "--curvature", "sphere:1", "--critical", "--grid", "400,200,2", "--k-max", "4",
              "--f0", "-1")["results"]
    shifts = [e["shift"] for e in fam["ladder"]]
    assert abs(shifts[1] - shifts[0] / 2) <= 1e-12 * shifts[0], shifts

    with tempfile.TemporaryDirectory() as tmp:
        report = os.path.join(tmp, "report.json")
        table = os.path.join(tmp, "rows.csv")
        subprocess.run([HSB, "integrals", "--json", "--output", report, "--csv", table], check=True,
                       capture_output=True)
        with open(report) as fh:
            assert json.load(fh)["results"]["rows"] == rows
        with open(table) as fh:
            parsed = list(csv.DictReader(fh))
        assert len(parsed) == 6 and parsed[0]["name"] == "r2grad/mass2", parsed
    print("json round trip ok")


if __name__ == "__main__":
    main()
