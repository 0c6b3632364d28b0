#!/usr/bin/env python3
"""Write the bundled benchmark datasets as flat CSV files.

Each file has a header row, one numeric column per feature and a final
`label` column. Images (digits) are written pre-flattened.
"""
import argparse
import csv
import pathlib

from sklearn import datasets


def write(path, data, target):
    with open(path, "w", newline="") as fh:
        out = csv.writer(fh)
        out.writerow([f"f{i}" for i in range(data.shape[1])] + ["label"])
        for row, label in zip(data, target):
            out.writerow([repr(float(v)) for v in row] + [int(label)])


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--out", default=str(pathlib.Path(__file__).resolve().parent.parent / "data"))
    args = parser.parse_args()
    out = pathlib.Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for name, loader in (("iris", datasets.load_iris),
                         ("digits", datasets.load_digits),
                         ("wdbc", datasets.load_breast_cancer)):
        bunch = loader()
        write(out / f"{name}.csv", bunch.data, bunch.target)
        print(f"{name}: {bunch.data.shape[0]} rows, {bunch.data.shape[1]} features")


if __name__ == "__main__":
    main()
