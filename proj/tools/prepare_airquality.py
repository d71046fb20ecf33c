#!/usr/bin/env python3
"""Convert the UCI Air Quality export into the numeric CSV the CLI expects.

The raw file (https://archive.ics.uci.edu/dataset/360/air+quality) is
semicolon-delimited with decimal commas, carries two empty trailing columns,
ends with blank lines, and marks missing values with -200.  This script keeps
the -200 sentinel (the CLI drops those rows via --missing-sentinel, which
defaults to -200) and emits three columns:

  hour    time-of-day class 1..24 parsed from the Time column (HH.00.00)
  co      CO(GT), the reference-analyzer response
  sensor  PT08.S1(CO), the tin-oxide sensor response

Typical use:

  python3 tools/prepare_airquality.py AirQualityUCI.csv data/airquality_prepared.csv
  phasereg fit --input data/airquality_prepared.csv --y-col co --w-cols sensor \
      --hour-col hour --w-divisor 100 --no-intercept
"""

import argparse
import csv
import sys

SENTINEL = "-200"


def numeric(cell: str) -> str:
    cell = cell.strip().replace(",", ".")
    if not cell:
        return SENTINEL
    float(cell)  # raises ValueError on a malformed cell
    return cell


def hour_class(time_cell: str) -> int:
    hh = int(time_cell.strip().split(".")[0])
    if not 0 <= hh <= 23:
        raise ValueError(f"hour {hh} out of range")
    return hh + 1


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("input", help="raw AirQualityUCI.csv")
    ap.add_argument("output", help="prepared CSV (hour,co,sensor)")
    args = ap.parse_args()

    with open(args.input, newline="", encoding="utf-8-sig") as f:
        reader = csv.reader(f, delimiter=";")
        header = next(reader)
        names = [h.strip() for h in header]
        try:
            i_time = names.index("Time")
            i_co = names.index("CO(GT)")
            i_sensor = names.index("PT08.S1(CO)")
        except ValueError as e:
            sys.exit(f"missing expected column: {e}")

        rows = []
        for lineno, row in enumerate(reader, start=2):
            if not any(cell.strip() for cell in row):
                continue  # blank padding lines at the end of the export
            try:
                rows.append(
                    (hour_class(row[i_time]), numeric(row[i_co]), numeric(row[i_sensor]))
                )
            except (ValueError, IndexError) as e:
                sys.exit(f"line {lineno}: {e}")

    with open(args.output, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(["hour", "co", "sensor"])
        writer.writerows(rows)

    print(f"wrote {len(rows)} rows to {args.output}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
