#!/usr/bin/env python3
"""Build the reduced COMPAS and ADULTS CSVs shipped under data/.

Inputs are the public ProPublica COMPAS two-year file and the UCI Adult
train/test files. Any local copy works; the `responsibly` wheel on PyPI
bundles all three.

    python3 tools/prepare_datasets.py --compas compas-scores-two-years.csv \
        --adult-train adult.data --adult-test adult.test --out data/
"""

import argparse
import csv
import json
import random
from pathlib import Path

COMPAS_ROWS = 2363
ADULTS_ROWS = 6000

WHITE_COLLAR = {"Exec-managerial", "Prof-specialty", "Adm-clerical", "Sales", "Tech-support"}
GOV = {"Federal-gov", "State-gov", "Local-gov"}
SELF = {"Self-emp-not-inc", "Self-emp-inc"}


def compas_rows(path):
    out = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        col = {}
        for i, name in enumerate(header):
            col.setdefault(name, i)  # the file repeats some column names
        for r in reader:
            race = r[col["race"]]
            if race not in ("African-American", "Caucasian"):
                continue
            days = r[col["days_b_screening_arrest"]]
            if days == "" or abs(int(float(days))) > 30:
                continue
            if r[col["is_recid"]] == "-1" or r[col["c_charge_degree"]] == "O":
                continue
            if r[col["score_text"]] in ("", "N/A"):
                continue
            label = 1 if int(r[col["decile_score"]]) > 5 else 0
            out.append([race, r[col["sex"]], r[col["age"]], r[col["priors_count"]], str(label)])
    return out


def adult_rows(paths):
    out = []
    for p in paths:
        with open(p) as fh:
            for line in fh:
                f = [x.strip() for x in line.strip().rstrip(".").split(",")]
                if len(f) != 15 or "?" in f:
                    continue
                age, workclass, _, _, edu_num, marital, occupation, _, race, sex, _, _, hours, _, income = f
                if race not in ("White", "Black"):
                    continue
                if workclass in GOV:
                    wc = "government"
                elif workclass in SELF:
                    wc = "self"
                elif workclass == "Private":
                    wc = "private"
                else:
                    continue
                married = "married" if marital.startswith("Married") else "single"
                collar = "white" if occupation in WHITE_COLLAR else "other"
                label = 1 if income.startswith(">50K") else 0
                out.append([race, sex, married, wc, collar, age, edu_num, hours, str(label)])
    return out


def write(path, header, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--compas", required=True)
    ap.add_argument("--adult-train", required=True)
    ap.add_argument("--adult-test", required=True)
    ap.add_argument("--out", default="data")
    ap.add_argument("--seed", type=int, default=2363)
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    rng = random.Random(args.seed)
    compas = compas_rows(args.compas)
    compas = rng.sample(compas, COMPAS_ROWS)
    write(out / "compas.csv", ["race", "sex", "age", "priors_count", "label"], compas)

    adults = adult_rows([args.adult_train, args.adult_test])
    adults = rng.sample(adults, ADULTS_ROWS)
    write(out / "adults.csv",
          ["race", "sex", "marital", "workclass", "collar", "age", "education_num", "hours_per_week",
           "label"], adults)

    compas_schema = {
        "features": [
            {"name": "race", "kind": "categorical", "values": ["African-American", "Caucasian"]},
            {"name": "sex", "kind": "categorical", "values": ["Female", "Male"]},
            {"name": "age", "kind": "continuous"},
            {"name": "priors_count", "kind": "continuous"},
        ],
        "protected_feature": "race",
        "protected_values": ["African-American", "Caucasian"],
        "label_column": "label",
    }
    adults_schema = {
        "features": [
            {"name": "race", "kind": "categorical", "values": ["Black", "White"]},
            {"name": "sex", "kind": "categorical", "values": ["Female", "Male"]},
            {"name": "marital", "kind": "categorical", "values": ["married", "single"]},
            {"name": "workclass", "kind": "categorical", "values": ["government", "private", "self"]},
            {"name": "collar", "kind": "categorical", "values": ["other", "white"]},
            {"name": "age", "kind": "continuous"},
            {"name": "education_num", "kind": "continuous"},
            {"name": "hours_per_week", "kind": "continuous"},
        ],
        "protected_feature": "race",
        "protected_values": ["Black", "White"],
        "label_column": "label",
    }
    (out / "compas.schema.json").write_text(json.dumps(compas_schema, indent=2) + "\n")
    (out / "adults.schema.json").write_text(json.dumps(adults_schema, indent=2) + "\n")
    print(f"compas: {len(compas)} rows, adults: {len(adults)} rows")


if __name__ == "__main__":
    main()
