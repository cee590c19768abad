"""
Command-line front end

    python -m jigsaw_lab gen -n 2 -q 2 --seed 7 -o p.json
    python -m jigsaw_lab solve p.json --json
    python -m jigsaw_lab entropy --n 2 --q 2 --method exact
    python -m jigsaw_lab greedy p.json --runs 10000
    python -m jigsaw_lab sweep --config sweep.cfg --jobs 4
    python -m jigsaw_lab census --q 3
"""
import argparse
import json
import logging
import math
import sys
from typing import Any, Dict, List, Optional

from .config.settings import Config, ExperimentParams, SweepConfig
from .core.entropy import closed_form_report, exact_distributions, mc_entropy_estimates
from .core.errors import JigsawLabError
from .core.greedy import estimate_raw_count
from .core.model import ModelVariant, burnside_type_count, extract_bag, piece_type_census
from .core.solver import count_raw_assemblies, enumerate_assemblies, vertex_uniqueness
from .core.sweep import run_sweep
from .generators.puzzle_generator import PuzzleGenerator, generate_puzzle
from .utils.helpers import ConfigurationHelper, PuzzleIO, setup_logging
from .utils.renderer import PuzzleRenderer


def create_parser() -> argparse.ArgumentParser:
    """Create command line argument parser"""
    parser = argparse.ArgumentParser(
        prog="jigsaw_lab",
        description="Random jigsaw puzzle laboratory: generate, solve, count and measure entropy",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=__doc__,
    )
    subparsers = parser.add_subparsers(dest='command', help='Command')
    subparsers.required = True

    def add_common_args(sub, seed_default=0, seed_help='Random seed (default: 0)'):
        sub.add_argument('--seed', type=int, default=seed_default, help=seed_help)
        sub.add_argument('--model', choices=['rot', 'fixed'], default=None,
                         help='rot: pieces may rotate, fixed: fixed orientation (default: rot)')
        sub.add_argument('-o', '--output', type=str, default=None, help='Output path')
        sub.add_argument('--json', action='store_true', help='Print machine-readable JSON')
        sub.add_argument('-v', '--verbose', action='store_true', help='Debug logging')

    gen = subparsers.add_parser('gen', help='Generate puzzle JSON')
    add_common_args(gen)
    gen.add_argument('-n', '--n', type=int, required=True, help='Board side')
    gen.add_argument('-q', '--q', type=int, required=True, help='Number of colors')
    gen.add_argument('--count', type=int, default=1,
                     help='Number of puzzles; more than one writes a directory (default: 1)')
    gen.add_argument('--png', type=str, default=None, help='Also render the puzzle to this PNG')

    solve = subparsers.add_parser('solve', help='Uniqueness verdict and assembly counts for a puzzle file')
    add_common_args(solve)
    solve.add_argument('puzzle', type=str, help='Puzzle JSON file')
    solve.add_argument('--limit', type=int, default=Config.CLASS_LIMIT, help='Class limit')
    solve.add_argument('--node-budget', type=int, default=Config.NODE_BUDGET, help='Search node budget')
    solve.add_argument('--oracle', action='store_true',
                       help='Confirm the vertex verdict by counting all placements')

    entropy = subparsers.add_parser('entropy', help='Entropy of IMG and BOX')
    add_common_args(entropy)
    entropy.add_argument('-n', '--n', type=int, required=True, help='Board side')
    entropy.add_argument('-q', '--q', type=int, required=True, help='Number of colors')
    entropy.add_argument('--method', choices=['formula', 'closed-form', 'exact', 'mc'], default='formula',
                         help='Closed form, exhaustive enumeration or Monte Carlo (default: formula)')
    entropy.add_argument('--trials', type=int, default=10 ** 4, help='Monte Carlo trials')
    entropy.add_argument('--budget', type=int, default=Config.ORACLE_BUDGET,
                         help='Max colorings for exact enumeration')

    greedy = subparsers.add_parser('greedy', help='Greedy tree-size estimate of the raw assembly count')
    add_common_args(greedy)
    greedy.add_argument('puzzle', type=str, nargs='?', default=None,
                        help='Puzzle JSON file (or generate with -n/-q)')
    greedy.add_argument('-n', '--n', type=int, default=None, help='Board side')
    greedy.add_argument('-q', '--q', type=int, default=None, help='Number of colors')
    greedy.add_argument('--runs', type=int, default=10 ** 4, help='Greedy runs (default: 10000)')
    greedy.add_argument('--exact', action='store_true', help='Also run the exact counter')

    sweep = subparsers.add_parser('sweep', help='Phase-transition sweep to CSV')
    add_common_args(sweep, seed_default=None, seed_help='Master seed (overrides master_seed from --config)')
    sweep.add_argument('--config', type=str, default=None, help='Key-value sweep config file')
    sweep.add_argument('--n-values', type=str, default=None, help='Comma-separated board sides')
    sweep.add_argument('--q-values', type=str, default=None, help='Comma-separated color counts')
    sweep.add_argument('--q-ratios', type=str, default=None, help='Comma-separated q/n ratios')
    sweep.add_argument('--trials', type=str, default=None, help='Trials per cell')
    sweep.add_argument('--class-limit', type=str, default=None, help='Class limit per trial')
    sweep.add_argument('--node-budget', type=str, default=None, help='Node budget per trial')
    sweep.add_argument('--time-budget', type=str, default=None, help='Seconds per trial')
    sweep.add_argument('--count-solutions', action='store_true', help='Full counting instead of early exit')
    sweep.add_argument('--record-timing', action='store_true', help='Fill the wall_ms column')
    sweep.add_argument('--jobs', type=int, default=None,
                       help=f'Worker processes (default: ${Config.JOBS_ENV_VAR} or 1)')
    sweep.add_argument('--template', action='store_true', help='Write a config template to --output and exit')

    census = subparsers.add_parser('census', help='Piece-type counts by orbit size')
    add_common_args(census)
    census.add_argument('-q', '--q', type=int, required=True, help='Number of colors')

    render = subparsers.add_parser('render', help='Render a puzzle file to PNG')
    add_common_args(render)
    render.add_argument('puzzle', type=str, help='Puzzle JSON file')
    render.add_argument('--cell-size', type=int, default=Config.DEFAULT_CELL_SIZE, help='Pixels per piece')

    return parser


def _emit(args, record: Dict[str, Any], lines: List[str]) -> None:
    if args.json:
        print(json.dumps(record, indent=2, sort_keys=True))
    else:
        for line in lines:
            print(line)


def _write_json(path: Optional[str], record: Dict[str, Any]) -> None:
    if path:
        with open(path, 'w', encoding='utf-8') as f:
            json.dump(record, f, indent=2, sort_keys=True)
            f.write("\n")


def _load_puzzle(args):
    coloring, file_model = PuzzleIO.load(args.puzzle)
    model = ModelVariant.parse(args.model) if args.model else file_model
    return coloring, model


def cmd_gen(args) -> int:
    model = ModelVariant.parse(args.model or "rot")
    if args.count > 1:
        generator = PuzzleGenerator(args.n, args.q, model)
        renderer = PuzzleRenderer() if args.png else None
        samples = generator.generate_batch(args.count, args.output or "./puzzles",
                                           master_seed=args.seed, renderer=renderer,
                                           progress=not args.json)
        _emit(args, {"count": len(samples), "puzzles": samples},
              [f"✅ Generated {len(samples)} puzzles in {args.output or './puzzles'}"])
        return 0

    coloring = generate_puzzle(args.n, args.q, args.seed)
    record = PuzzleIO.to_dict(coloring, model)
    if args.output:
        PuzzleIO.save(coloring, args.output, model)
    if args.png:
        PuzzleRenderer().save(coloring, args.png)
    if args.output and not args.json:
        print(f"✅ Wrote {args.output}")
    else:
        print(json.dumps(record))
    return 0


def cmd_solve(args) -> int:
    coloring, model = _load_puzzle(args)
    verdict = vertex_uniqueness(coloring, model, oracle=args.oracle)
    solutions = enumerate_assemblies(extract_bag(coloring, model), limit=args.limit,
                                     node_budget=args.node_budget)
    record = {
        "n": coloring.n,
        "q": coloring.q,
        "model": model.value,
        **verdict.to_dict(),
        "distinct_classes": solutions.class_count,
        "raw_count": solutions.raw_count,
        "truncated": solutions.truncated,
        "complete": solutions.complete,
    }
    _write_json(args.output, record)
    _emit(args, record, [
        f"Puzzle n={coloring.n} q={coloring.q} model={model.value}",
        f"  unique edge assembly:   {verdict.unique_edge}",
        f"  unique vertex assembly: {verdict.unique_vertex} ({verdict.reason.value})",
        f"  distinguishable solutions: {solutions.class_count}"
        + (" (truncated)" if solutions.truncated else "")
        + ("" if solutions.complete else " (budget reached)"),
        f"  raw assemblies: {solutions.raw_count}",
    ])
    return 0


def cmd_entropy(args) -> int:
    model = ModelVariant.parse(args.model or "rot")
    if args.method in ('formula', 'closed-form'):
        report = closed_form_report(args.n, args.q, model)
    elif args.method == 'exact':
        report = exact_distributions(args.n, args.q, model, budget=args.budget, progress=not args.json)
    else:
        params = ExperimentParams(args.n, args.q, model.value, args.trials, args.seed)
        report = mc_entropy_estimates(params, progress=not args.json)
    record = report.to_dict()
    _write_json(args.output, record)
    lines = [f"{report.method.value}: n={args.n} q={args.q} model={model.value}"]
    for key in ("h_img", "h_box", "h_box_subadditive", "h_box_leading_bound", "gap", "p_unique_edge",
                "duplicate_probability"):
        if record[key] is not None:
            lines.append(f"  {key:<22} {record[key]}")
    _emit(args, record, lines)
    return 0


def cmd_greedy(args) -> int:
    if args.puzzle:
        coloring, model = _load_puzzle(args)
    else:
        if args.n is None or args.q is None:
            raise ValueError("puzzle: give a puzzle file or both -n and -q")
        model = ModelVariant.parse(args.model or "rot")
        coloring = generate_puzzle(args.n, args.q, args.seed)
    bag = extract_bag(coloring, model)
    summary = estimate_raw_count(bag, args.runs, seed=args.seed, progress=not args.json)
    record = {"n": coloring.n, "q": coloring.q, "model": model.value, **summary.to_dict()}
    if args.exact:
        exact = count_raw_assemblies(bag)
        record["exact_raw_count"] = exact.value
        record["exact"] = exact.exact
    _write_json(args.output, record)
    if math.isfinite(summary.mean):
        headline = f"{summary.mean:.6g} +/- {summary.stderr:.3g}"
    else:
        headline = f"2^{summary.log2_mean:.4f} (log2 stderr {summary.log2_stderr})"
    lines = [f"Greedy estimate over {summary.runs} runs: {headline}",
             f"  success rate: {summary.success_rate:.4f}"]
    if args.exact:
        lines.append(f"  exact raw count: {record['exact_raw_count']}"
                     + ("" if record["exact"] else " (lower bound)"))
    _emit(args, record, lines)
    return 0


def cmd_sweep(args) -> int:
    if args.template:
        path = ConfigurationHelper.create_config_template(args.output or "sweep.cfg")
        print(f"✅ Config template written to {path}")
        return 0

    values = ConfigurationHelper.load_config(args.config) if args.config else {}
    overrides = {
        "n_values": args.n_values,
        "q_values": args.q_values,
        "q_ratios": args.q_ratios,
        "trials": args.trials,
        "class_limit": args.class_limit,
        "node_budget": args.node_budget,
        "time_budget": args.time_budget,
        "model": args.model,
        "output": args.output,
    }
    values.update({key: value for key, value in overrides.items() if value is not None})
    if args.count_solutions:
        values["count_solutions"] = "true"
    if args.record_timing:
        values["record_timing"] = "true"
    if args.seed is not None:
        values["master_seed"] = str(args.seed)

    config = SweepConfig.from_mapping(values)
    result = run_sweep(config, jobs=args.jobs, progress=not args.json)
    lines = [f"✅ {len(result.records)} trials written to {result.csv_path}"]
    for cell in result.summary["cells"]:
        lines.append(f"  n={cell['n']} q={cell['q']}: P(unique edge)={cell['p_unique_edge']:.3f} "
                     f"P(unique vertex)={cell['p_unique_vertex']:.3f} "
                     f"P(duplicates)={cell['p_duplicates']:.3f}")
    _emit(args, result.summary, lines)
    return 0


def cmd_census(args) -> int:
    census = piece_type_census(args.q)
    record = {"q": args.q, "r1": census.r1, "r2": census.r2, "r4": census.r4, "total": census.total,
              "burnside_total": burnside_type_count(args.q)}
    _write_json(args.output, record)
    _emit(args, record, [
        f"q={args.q}: r=1: {census.r1}  r=2: {census.r2}  r=4: {census.r4}  total: {census.total}",
    ])
    return 0


def cmd_render(args) -> int:
    coloring, _ = _load_puzzle(args)
    output = args.output or args.puzzle.rsplit(".", 1)[0] + ".png"
    PuzzleRenderer(cell_size=args.cell_size).save(coloring, output)
    _emit(args, {"image": output}, [f"✅ Rendered {output}"])
    return 0


COMMANDS = {
    "gen": cmd_gen,
    "solve": cmd_solve,
    "entropy": cmd_entropy,
    "greedy": cmd_greedy,
    "sweep": cmd_sweep,
    "census": cmd_census,
    "render": cmd_render,
}


def main(argv: Optional[List[str]] = None) -> int:
    parser = create_parser()
    args = parser.parse_args(argv)
    setup_logging(logging.DEBUG if args.verbose else logging.WARNING if args.json else logging.INFO)

    try:
        return COMMANDS[args.command](args)
    except (JigsawLabError, ValueError, OSError) as e:
        # json.JSONDecodeError is a ValueError
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
