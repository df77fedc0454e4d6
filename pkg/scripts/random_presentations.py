"""Survey free-subset selection and the bounded falsifier on random presentations.

Prints one row per presentation plus a summary. Everything is seeded.
"""
import argparse
import json
import random
import time
from dataclasses import asdict, dataclass

from foxcalc.freiheit import FalsifyBounds, Presentation, falsify_freeness, select_free_subset
from foxcalc.sampling import random_presentation_data


@dataclass(frozen=True)
class SurveyConfig:
    samples: int = 50
    seed: int = 0
    max_n: int = 5
    max_len: int = 8
    bounds: str = "2,2,6,3"
    valuation: str = "trivial"


def survey(cfg: SurveyConfig):
    r = random.Random(cfg.seed)
    bounds = FalsifyBounds.parse(cfg.bounds)
    rows = []
    for i in range(cfg.samples):
        table, rels = random_presentation_data(r, max_n=cfg.max_n, max_len=cfg.max_len)
        p = Presentation(table, tuple(rels))
        rep = select_free_subset(p, cfg.valuation)
        start = time.perf_counter()
        ce = falsify_freeness(p, rep.J, bounds)
        rows.append({
            "i": i, "n": p.n, "m": p.m, "rank": rep.rank,
            "J": sorted(p.names[j] for j in rep.J),
            "counterexample": None if ce is None else str(ce.witness),
            "seconds": round(time.perf_counter() - start, 3),
        })
    return rows


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    for name, default in asdict(SurveyConfig()).items():
        ap.add_argument(f"--{name.replace('_', '-')}", type=type(default), default=default)
    ap.add_argument("--json", action="store_true")
    args = vars(ap.parse_args(argv))
    as_json = args.pop("json")
    cfg = SurveyConfig(**args)
    rows = survey(cfg)
    if as_json:
        print(json.dumps({"config": asdict(cfg), "rows": rows}, indent=2))
        return
    for row in rows:
        print(f"{row['i']:3d}  n={row['n']} m={row['m']} rank={row['rank']}  J={{{', '.join(row['J'])}}}  "
              f"ce={row['counterexample']}  {row['seconds']}s")
    slack = sum(len(row["J"]) - (row["n"] - row["m"]) for row in rows)
    hits = sum(row["counterexample"] is not None for row in rows)
    print(f"\n{len(rows)} presentations, total |J| - (n - m) slack {slack}, {hits} counterexamples found")


if __name__ == "__main__":
    main()
