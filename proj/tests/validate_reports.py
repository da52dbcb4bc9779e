#!/usr/bin/env python3
"""Generates every JSON report the CLI can emit and validates it against the report schema.

usage: validate_reports.py XLG XLG_SYNTH SCHEMA
"""

import copy
import json
import subprocess
import sys
import tempfile
from pathlib import Path

import jsonschema


def run(*args):
    proc = subprocess.run([str(a) for a in args], capture_output=True, text=True)
    if proc.returncode != 0:
        raise SystemExit(f"command failed ({proc.returncode}): {' '.join(map(str, args))}\n{proc.stderr}")


def main():
    xlg, synth, schema_path = map(Path, sys.argv[1:4])
    schema = json.loads(schema_path.read_text())
    jsonschema.Draft7Validator.check_schema(schema)
    validator = jsonschema.Draft7Validator(schema)
    failures = 0

    with tempfile.TemporaryDirectory() as tmp:
        tmp = Path(tmp)
        study = tmp / "study"
        # Four zero-shot languages so the double zero-shot block is populated.
        run(synth, "--out", study, "--languages", "12", "--sentences", "100", "--zero-shot", "4", "--seed", "5")
        conf = study / "run.conf"
        conf.write_text(
            "embeddings = embeddings\ncorpus = corpus\nlanguages = languages.tsv\n"
            "folds = 4\nseed = 17\nanalyses = corr, search, ablate, anova, ancova, pca, pcr\nout_dir = out\n"
        )
        run(xlg, "report", "--config", conf)
        out = study / "out"
        run(xlg, "metrics", "--pair", study / "embeddings/laa.xemb", study / "embeddings/lab.xemb",
            "--out", tmp / "pair.json")
        run(xlg, "zero-shot", "--metrics", out / "metrics.csv", "--languages", study / "languages.tsv",
            "--out", tmp / "zero.json")
        run(xlg, "zero-shot", "--metrics", out / "metrics.csv", "--languages", study / "languages.tsv",
            "--features", out / "features.csv", "--out", tmp / "zero_features.json")
        run(xlg, "compare", "--a", out / "metrics.csv", "--b", out / "metrics.csv", "--out", tmp / "compare.json")
        run(xlg, "compare", "--a", out / "metrics.csv", "--b", out / "metrics.csv",
            "--languages", study / "languages.tsv", "--out", tmp / "compare_groups.json")

        reports = sorted(out.glob("analysis_*.json")) + sorted(tmp.glob("*.json"))
        if len(reports) != 12:
            print(f"FAIL expected 12 reports, found {len(reports)}")
            failures += 1
        docs = {}
        for path in reports:
            doc = json.loads(path.read_text())
            docs[path.name] = doc
            errors = list(validator.iter_errors(doc))
            print(f"{'PASS' if not errors else 'FAIL'} {path.name}")
            for e in errors[:5]:
                print(f"    at {list(e.absolute_path)}: {e.message[:300]}")
            failures += bool(errors)

        zero = docs["zero.json"]["double_zero_shot"]
        if zero["n"] != 6 or "correlations" not in zero:
            print("FAIL double zero-shot block not populated")
            failures += 1

        # The schema must actually constrain: each of these mutations has to be rejected.
        pair = docs["pair.json"]
        mutations = {
            "metrics report without gh": lambda d: d.pop("gh"),
            "metrics report with extra key": lambda d: d.update(extra=1),
            "metrics report with f1 > 1": lambda d: d.update(f1=1.5),
        }
        for name, mutate in mutations.items():
            bad = copy.deepcopy(pair)
            mutate(bad)
            ok = not validator.is_valid(bad)
            print(f"{'PASS' if ok else 'FAIL'} rejects {name}")
            failures += not ok
        bad = copy.deepcopy(docs["analysis_search.json"])
        bad["mode"] = "pca"
        ok = not validator.is_valid(bad)
        print(f"{'PASS' if ok else 'FAIL'} rejects search results labelled as pca")
        failures += not ok

    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
