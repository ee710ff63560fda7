#!/usr/bin/env python3
"""Rebuild data/fndds_survey_foods.tsv from the FoodData Central export
bundled in the `pyfooda` wheel (survey_fndds_food rows only).

The export carries food descriptions and WWEIA category descriptions but no
food codes or category numbers, so both are assigned here as local ordinals:
food codes follow description order, category numbers follow category-name
order.

    pip download --no-deps pyfooda==0.6.0 -d /tmp/pyfooda
    python3 tools/data/extract_fndds_subset.py /tmp/pyfooda/pyfooda-0.6.0-py3-none-any.whl
"""
import csv
import io
import sys
import zipfile


def main(wheel_path, out_path):
    with zipfile.ZipFile(wheel_path) as zf:
        raw = zf.read("pyfooda/data/fooddata.csv").decode("utf-8")
    rows = []
    for rec in csv.DictReader(io.StringIO(raw)):
        if rec["data_type"] != "survey_fndds_food":
            continue
        name = rec["foodName"].strip()
        cat = rec["food_category"].strip()
        if name and cat:
            rows.append((name, cat))
    rows = sorted(set(rows))
    cat_ids = {c: i + 1 for i, c in enumerate(sorted({c for _, c in rows}))}
    with open(out_path, "w", newline="", encoding="utf-8") as out:
        w = csv.writer(out, delimiter="\t", lineterminator="\n")
        w.writerow(["food_code", "main_food_description",
                    "wweia_category_number", "wweia_category_description"])
        for code, (name, cat) in enumerate(rows, start=1):
            w.writerow([code, name, cat_ids[cat], cat])
    print(f"{len(rows)} foods, {len(cat_ids)} categories -> {out_path}")


if __name__ == "__main__":
    main(sys.argv[1], sys.argv[2] if len(sys.argv) > 2 else "data/fndds_survey_foods.tsv")
