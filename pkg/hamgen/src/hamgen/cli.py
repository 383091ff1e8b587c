"""Command line entry point: hamgen <spec-file> -o <out.ham>."""

import argparse
import pathlib
import sys

from .generate import MoleculeSpec, generate


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="hamgen",
        description="Generate a qubit Hamiltonian file from a molecule spec.")
    parser.add_argument("spec", type=pathlib.Path, help="molecule spec file")
    parser.add_argument("-o", "--output", type=pathlib.Path, default=None,
                        help="output path (default: stdout)")
    args = parser.parse_args(argv)

    spec = MoleculeSpec.from_text(args.spec.read_text())
    text = generate(spec)
    if args.output is None:
        sys.stdout.write(text)
    else:
        args.output.write_text(text)
        print(f"wrote {args.output}", file=sys.stderr)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
