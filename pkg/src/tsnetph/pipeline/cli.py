"""Command-line entry point: ``tsnetph <subcommand> [options]``.

Exit status is 0 on success, 1 for invalid options or configuration and 2
for problems with the input data.
"""
from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from contextlib import contextmanager
from typing import Optional, Sequence

from ..embedding import Family, select_shared_params
from ..errors import DataError, TsNetError
from ..features import matrix_cap
from .config import DistanceType, GraphType, PipelineConfig
from .evaluate import evaluate_baseline
from .experiments import ablation_matrix, noise_sweep, noisy_copy, sweep_text
from .io import Dataset, load_ucr_tsv, write_feature_csv, write_matrix_csv
from .run import build_graph, distance_matrix, resolve_params, run_pipeline, series_diagrams

log = logging.getLogger("tsnetph")

EXIT_OK, EXIT_CONFIG, EXIT_DATA = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _snr(text: str) -> float:
    if text.lower() in ("inf", "+inf", "infinity"):
        return math.inf
    return float(text)


def _common(p: argparse.ArgumentParser, snr_list: bool = False) -> None:
    p.add_argument("--input", required=True, help="UCR-format TSV file")
    p.add_argument("--output", help="output path (stdout when omitted)")
    p.add_argument("--graph", choices=[g.value for g in GraphType], default="cgssn")
    p.add_argument("--dist", choices=[d.value for d in DistanceType], default="diffusion")
    p.add_argument("--tau", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--bins", type=int, default=8)
    p.add_argument("--k", type=int, default=5)
    p.add_argument("--t", type=int, help="diffusion walk length")
    p.add_argument("--normalize", action="store_true")
    if snr_list:
        p.add_argument("--snr", type=_snr, nargs="+", default=[math.inf, 20, 10, 5, 0])
    else:
        p.add_argument("--snr", type=_snr, default=math.inf, help="dB; inf for clean data")
    p.add_argument("--folds", type=int, default=5)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--subset", type=int, default=30, help="series used for parameter selection")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="tsnetph", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("params", help="shared (tau, n) for each selection method")
    p.add_argument("--input", required=True)
    p.add_argument("--output")
    p.add_argument("--subset", type=int, default=30)

    for name, text in [
        ("graph", "edge list of one series"),
        ("distmat", "dissimilarity matrix of one series as CSV"),
        ("persist", "persistence diagrams of one series as JSON"),
    ]:
        p = sub.add_parser(name, help=text)
        _common(p)
        p.add_argument("--series", type=int, default=0, help="0-based row of the input")

    sub.add_parser("featurize", help="418-column feature CSV")
    _common(sub.choices["featurize"])
    p = sub.add_parser("run", help="featurize and evaluate the 1-NN baseline")
    _common(p)
    p = sub.add_parser("ablate", help="baseline F1 for every valid (graph, distance)")
    _common(p)
    p = sub.add_parser("noise-sweep", help="baseline F1 per SNR level")
    _common(p, snr_list=True)
    return parser


def _config(args) -> PipelineConfig:
    return PipelineConfig(
        graph_type=args.graph,
        distance_type=args.dist,
        tau=args.tau,
        n=args.n,
        bins=args.bins,
        k=args.k,
        normalize=args.normalize,
        diffusion_t=args.t,
        seed=args.seed,
        subset_size=args.subset,
    )


@contextmanager
def _sink(path: Optional[str]):
    if path is None:
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def _dataset(args) -> Dataset:
    ds = load_ucr_tsv(args.input)
    snr = getattr(args, "snr", math.inf)
    if isinstance(snr, float) and not math.isinf(snr):
        ds = noisy_copy(ds, snr, args.seed)
    return ds


def _one_series(args, ds: Dataset):
    if not 0 <= args.series < len(ds):
        raise TsNetError(f"--series {args.series} outside 0..{len(ds) - 1}")
    return ds.series[args.series]


def cmd_params(args) -> None:
    ds = load_ucr_tsv(args.input)
    out = {}
    for fam in Family:
        sel = select_shared_params(ds.series, fam, subset_size=args.subset)
        out[sel.method.value] = {"tau": sel.tau, "n": sel.n}
    with _sink(args.output) as fh:
        fh.write(json.dumps(out, indent=2) + "\n")


def cmd_graph(args) -> None:
    cfg = _config(args)
    ds = _dataset(args)
    params = resolve_params(ds, cfg)
    G = build_graph(_one_series(args, ds), cfg.graph_type, params)
    with _sink(args.output) as fh:
        fh.write(G.to_edge_list())


def cmd_distmat(args) -> None:
    cfg = _config(args)
    ds = _dataset(args)
    params = resolve_params(ds, cfg)
    G = build_graph(_one_series(args, ds), cfg.graph_type, params)
    D, _ = distance_matrix(G, cfg.distance_type, cfg.diffusion_t, cfg.normalize)
    with _sink(args.output) as fh:
        write_matrix_csv(D, fh)


def cmd_persist(args) -> None:
    cfg = _config(args)
    ds = _dataset(args)
    params = resolve_params(ds, cfg)
    dgm0, dgm1, D, t = series_diagrams(_one_series(args, ds), cfg, params)
    doc = {"h0": dgm0.to_dict(), "h1": dgm1.to_dict(), "cap": matrix_cap(D), "t": t}
    with _sink(args.output) as fh:
        fh.write(json.dumps(doc) + "\n")


def cmd_featurize(args) -> None:
    res = run_pipeline(_dataset(args), _config(args))
    log.info("parameters: %s", res.metadata)
    with _sink(args.output) as fh:
        write_feature_csv(res.features, fh)


def cmd_run(args) -> None:
    cfg = _config(args)
    res = run_pipeline(_dataset(args), cfg)
    rep = evaluate_baseline(res.features, res.labels, args.folds, args.seed)
    doc = {"params": res.metadata, "evaluation": rep.as_dict()}
    with _sink(args.output) as fh:
        fh.write(json.dumps(doc, indent=2) + "\n")


def cmd_ablate(args) -> None:
    table = ablation_matrix(load_ucr_tsv(args.input), _config(args), args.folds)
    with _sink(args.output) as fh:
        fh.write(table.to_text())


def cmd_noise_sweep(args) -> None:
    rows = noise_sweep(load_ucr_tsv(args.input), _config(args), args.snr, args.folds)
    with _sink(args.output) as fh:
        fh.write(sweep_text(rows))


COMMANDS = {
    "params": cmd_params,
    "graph": cmd_graph,
    "distmat": cmd_distmat,
    "persist": cmd_persist,
    "featurize": cmd_featurize,
    "run": cmd_run,
    "ablate": cmd_ablate,
    "noise-sweep": cmd_noise_sweep,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    try:
        COMMANDS[args.command](args)
    except BrokenPipeError:
        return EXIT_OK
    except (DataError, OSError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except TsNetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
