#!/usr/bin/env python3
"""Render the trajectory-separation figure from a separation CSV (t,S).

Usage: plot_separation.py SEPARATION_CSV OUT_IMAGE [--linear] [--title TITLE]
"""
import argparse

from nlcviz.figures import plot_separation


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("csv_path")
    parser.add_argument("out_path")
    parser.add_argument("--linear", action="store_true", help="linear y axis instead of log")
    parser.add_argument("--title", default=None)
    args = parser.parse_args()
    plot_separation(args.csv_path, args.out_path, logy=not args.linear, title=args.title)
    print(f"wrote {args.out_path}")


if __name__ == "__main__":
    main()
