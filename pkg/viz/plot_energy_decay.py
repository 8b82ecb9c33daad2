#!/usr/bin/env python3
"""Render the energy-decay figure from a trajectory CSV.

Usage: plot_energy_decay.py RUN_CSV OUT_IMAGE [--logy] [--title TITLE]
"""
import argparse

from nlcviz.figures import plot_energy


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("csv_path")
    parser.add_argument("out_path")
    parser.add_argument("--logy", action="store_true")
    parser.add_argument("--title", default=None)
    args = parser.parse_args()
    plot_energy(args.csv_path, args.out_path, logy=args.logy, title=args.title)
    print(f"wrote {args.out_path}")


if __name__ == "__main__":
    main()
