"""Drive the CLI end to end: emit every figure bundle into ./out (or the
directory given on the command line), at a reduced size so the whole run
takes seconds.  Pass --full for the publication-size grids.

Run:  python3 demos/figure_pipeline.py [out_dir] [--full]
"""

import sys

from introdyn import cli


def main(argv):
    args = [a for a in argv if not a.startswith("--")]
    out = args[0] if args else "out"
    full = "--full" in argv

    fig1_flags = [] if full else ["--n-max", "10", "--steps", "2000",
                                  "--replicates", "7"]
    jobs = [
        ["figure", "table1", "--out", out],
        ["figure", "fig1", "--out", out, "--seed", "1", *fig1_flags],
        ["figure", "fig2", "--out", out],
        ["figure", "fig3", "--out", out],
    ]
    for job in jobs:
        print("$ introdyn " + " ".join(job))
        code = cli.main(job)
        if code != 0:
            return code
    print(f"\nall bundles written to {out}/ - every file starts with "
          "'# key=value'\nlines recording the hash, seed and grid that "
          "produced it.")
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
