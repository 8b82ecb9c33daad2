#!/usr/bin/env python3
"""Render the director quiver figure from an NLC1 snapshot.

Usage: plot_director_quiver.py SNAPSHOT OUT_IMAGE
"""
import argparse

from nlcviz.figures import plot_fields


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("snapshot_path")
    parser.add_argument("out_path")
    args = parser.parse_args()
    plot_fields(args.snapshot_path, args.out_path, panels=("quiver",))
    print(f"wrote {args.out_path}")


if __name__ == "__main__":
    main()
