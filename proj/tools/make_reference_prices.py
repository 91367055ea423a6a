#!/usr/bin/env python3
"""Synthetic daily closes for the reference note replay.

Closes on the observation dates match the recorded history; the days in
between are linear interpolations on a weekday calendar without NYSE holidays.
"""
import datetime as dt
import sys

START = (dt.date(2008, 2, 5), 369.44)
ANCHORS = [
    (dt.date(2008, 5, 5), 365.48),
    (dt.date(2008, 8, 5), 302.05),
    (dt.date(2008, 11, 5), 201.77),
    (dt.date(2009, 2, 5), 121.51),
    (dt.date(2009, 5, 5), 155.52),
    (dt.date(2009, 8, 5), 189.37),
]
HOLIDAYS = {
    dt.date(2008, 2, 18), dt.date(2008, 3, 21), dt.date(2008, 5, 26), dt.date(2008, 7, 4),
    dt.date(2008, 9, 1), dt.date(2008, 11, 27), dt.date(2008, 12, 25), dt.date(2009, 1, 1),
    dt.date(2009, 1, 19), dt.date(2009, 2, 16), dt.date(2009, 4, 10), dt.date(2009, 5, 25),
    dt.date(2009, 7, 3),
}


def trading_days(first, last):
    day = first
    while day <= last:
        if day.weekday() < 5 and day not in HOLIDAYS:
            yield day
        day += dt.timedelta(days=1)


def main(out):
    out.write("date,close\n")
    prev = START
    out.write(f"{prev[0].isoformat()},{prev[1]:.2f}\n")
    for anchor in ANCHORS:
        days = list(trading_days(prev[0] + dt.timedelta(days=1), anchor[0]))
        for i, day in enumerate(days, start=1):
            close = prev[1] + (anchor[1] - prev[1]) * i / len(days)
            out.write(f"{day.isoformat()},{close:.2f}\n")
        prev = anchor


if __name__ == "__main__":
    if len(sys.argv) > 1:
        with open(sys.argv[1], "w") as f:
            main(f)
    else:
        main(sys.stdout)
