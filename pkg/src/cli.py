# src/cli.py
"""
Command-line front end for the tautological ring engine
Usage: python src/cli.py <command> [options]

Exit codes: 0 success, 1 invalid arguments, 2 computation failure,
3 undetermined (relation search budget exhausted).
"""

import argparse
import json
import sys
import os
from concurrent.futures import ThreadPoolExecutor

import pandas as pd

sys.path.append(os.path.dirname(os.path.abspath(__file__)))

from advanced.gorenstein import GORENSTEIN, gorenstein_check
from advanced.kernel import kernel_dimension_cg, kernel_report
from advanced.relations import BUDGET_EXHAUSTED, RelationBudget, relation_space
from combinatorics import integer_partitions
from config import Config, parse_primes
from intersection import TABLE, r_value, sk_sum_check
from pairing import (
    build_p_matrix, build_q_matrix, build_q_matrix_direct, exact_rank, sub_p_matrix,
)
from utils import (
    ComputationError, format_rational, handle_computation_error, log_job, logger,
    validate_degree, validate_genus, validate_genus_range, validate_multi_index,
    validate_output_format,
)

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_FAILURE = 2
EXIT_UNDETERMINED = 3


class CliParser(argparse.ArgumentParser):
    """ArgumentParser whose usage errors exit with the invalid-arguments code"""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def _emit(text):
    sys.stdout.write(text if text.endswith('\n') else text + '\n')


def _dump(data):
    return json.dumps(data, indent=2, sort_keys=True)


def _rank_options(job):
    return {'primes': job.primes, 'threads': job.threads}


# --- commands ------------------------------------------------------------------

def cmd_rank(job):
    """Rank of Q_{g,i} (or P_{g,i}) with backend provenance"""
    genus = validate_genus(job.genus)
    kind = job.extra.get('kind', 'Q')
    if kind == 'P':
        matrix = build_p_matrix(genus, job.degree)
    else:
        matrix = build_q_matrix(genus, job.degree)
    report = exact_rank(matrix, **_rank_options(job))

    if job.output_format == 'json':
        _emit(_dump(report.to_dict()))
    elif job.output_format == 'csv':
        _emit(pd.DataFrame([report.to_dict()]).drop(columns=['primes']).to_csv(index=False))
    else:
        _emit(f"rank {kind}_{{{genus},{matrix.degree}}} = {report.rank} "
              f"({report.rows}x{report.cols}, {report.backend})")
    return EXIT_OK


def _table_cell(genus, degree, job):
    try:
        return exact_rank(build_q_matrix(genus, degree), **_rank_options(job)).rank
    except Exception as e:
        handle_computation_error(e, f"TABLE_CELL g={genus} i={degree}")
        return None


def cmd_table(job):
    """Table of rank Q_{g,i} for a genus range; failed cells are marked ERR"""
    first, last = job.genus_range
    if first <= last:
        validate_genus(last, maximum=Config.MAX_TABLE_GENUS)
    genera = list(range(first, last + 1))
    cells = [(g, i) for g in genera for i in range(g)]

    with ThreadPoolExecutor(max_workers=max(1, job.threads)) as pool:
        ranks = list(pool.map(lambda cell: _table_cell(cell[0], cell[1], job), cells))
    grid = {g: [] for g in genera}
    for (g, _), rank in zip(cells, ranks):
        grid[g].append(rank)

    failed = any(r is None for r in ranks)
    if job.output_format == 'json':
        _emit(_dump({str(g): row for g, row in grid.items()}))
    elif job.output_format == 'csv':
        width = max((len(row) for row in grid.values()), default=0)
        frame = pd.DataFrame(
            [[('ERR' if r is None else r) for r in row] + [''] * (width - len(row)) for row in grid.values()],
            index=pd.Index(genera, name='g'), columns=[str(i) for i in range(width)])
        _emit(frame.to_csv())
    else:
        for g, row in grid.items():
            _emit(f"g={g:<3} " + ' '.join('ERR' if r is None else str(r) for r in row))
    return EXIT_FAILURE if failed else EXIT_OK


def cmd_rvalue(job):
    genus = validate_genus(job.genus)
    m = validate_multi_index(job.extra['partition'], weight=genus - 2)
    value = r_value(genus, m)
    if job.output_format == 'json':
        _emit(_dump({'genus': genus, 'partition': m.encode(), 'monomial': m.label(),
                     'value': format_rational(value)}))
    else:
        _emit(format_rational(value))
    return EXIT_OK


def cmd_relations(job):
    """Relations in R^i(C_g) with their reduced normal forms"""
    genus = validate_genus(job.genus, maximum=Config.MAX_RELATION_GENUS)
    space = relation_space(genus, job.degree, RelationBudget.from_config(job))

    if job.output_format == 'json':
        _emit(space.to_json())
    elif job.output_format == 'csv':
        frame = pd.DataFrame([[format_rational(c) for c in r.coefficients] for r in space.relations],
                             columns=space.labels)
        frame['source'] = [r.recipe.source for r in space.relations]
        frame['j'] = [r.recipe.j for r in space.relations]
        frame['monomial'] = [r.recipe.monomial for r in space.relations]
        _emit(frame.to_csv(index=False))
    else:
        _emit(f"Relations in R^{space.degree}(C_{genus}): rank {space.rank} of {len(space.basis)} monomials")
        for relation in space.relations:
            recipe = relation.recipe
            origin = f"j={recipe.j}, {recipe.monomial}" if recipe.j is not None else f"{recipe.source}: {recipe.monomial}"
            _emit(f"  {relation.human()}    [{origin}]")
        _emit("Reduced:")
        for lhs, rhs in space.reduced_forms():
            _emit(f"  {lhs} = {rhs}")
        _emit(f"Basis of the quotient: {', '.join(space.quotient_basis()) or '(none)'}")
        if space.status == BUDGET_EXHAUSTED:
            _emit("Status: UNDETERMINED (search budget exhausted)")

    return EXIT_UNDETERMINED if space.status == BUDGET_EXHAUSTED else EXIT_OK


def cmd_gorenstein(job):
    budget = RelationBudget.from_config(job)
    report = gorenstein_check(job.genus, budget, **_rank_options(job))
    if job.output_format == 'json':
        _emit(report.to_json())
    elif job.output_format == 'csv':
        _emit(pd.DataFrame([d.to_dict() for d in report.degrees]).to_csv(index=False))
    else:
        _emit(report.human())
    return EXIT_OK if report.verdict == GORENSTEIN else EXIT_UNDETERMINED


def cmd_kernel_stats(job):
    """a(l), b(l) and n for --l, or n for an explicit (g, k)"""
    if job.extra.get('l') is not None:
        data = kernel_report(job.extra['l'], verify=job.extra.get('verify_a', False), **_rank_options(job))
    else:
        if job.genus is None or job.degree is None:
            raise ValueError("kernel needs --l or both --genus and --degree")
        stats = kernel_dimension_cg(job.genus, job.degree, **_rank_options(job))
        data = stats.to_dict()
        data['notes'] = stats.notes

    if job.output_format == 'json':
        _emit(_dump(data))
    elif job.output_format == 'csv':
        _emit(pd.DataFrame([{k: v for k, v in data.items() if k != 'notes'}]).to_csv(index=False))
    else:
        for key in ('l', 'genus', 'codegree', 'a', 'a_recomputed', 'b', 'n'):
            if data.get(key) is not None:
                _emit(f"{key} = {data[key]}")
        if data.get('anomaly'):
            for note in data.get('notes', []):
                _emit(f"ANOMALY: {note}")
    return EXIT_OK


def cmd_matrix(job):
    """Export P, P^j, Q or directly computed Q matrices"""
    genus = validate_genus(job.genus)
    kind = job.extra.get('kind', 'Q')
    if kind == 'P':
        sub = job.extra.get('sub')
        matrix = build_p_matrix(genus, job.degree) if sub is None else sub_p_matrix(genus, job.degree, sub)
    elif kind == 'Q-direct':
        matrix = build_q_matrix_direct(genus, job.degree)
    else:
        matrix = build_q_matrix(genus, job.degree)

    if job.output_format == 'csv':
        _emit(matrix.to_csv())
    elif job.output_format == 'json':
        _emit(matrix.to_json())
    else:
        _emit(f"{matrix.construction_name()} g={genus} i={matrix.degree} ({matrix.shape[0]}x{matrix.shape[1]})")
        _emit(matrix.to_frame().to_string())
    return EXIT_OK


def cmd_sk_check(job):
    """Symmetric-group sum identity for one or all partitions of g-2"""
    genus = validate_genus(job.genus)
    text = job.extra.get('partition')
    if text:
        partitions = [tuple(validate_multi_index(text, weight=genus - 2).parts())]
    else:
        partitions = list(integer_partitions(genus - 2))

    results = [(parts, sk_sum_check(genus, parts)) for parts in partitions]
    if job.output_format == 'json':
        _emit(_dump([{'partition': list(p), 'ok': ok} for p, ok in results]))
    else:
        for parts, ok in results:
            _emit(f"{' '.join(str(d) for d in parts) or '(empty)'}: {'ok' if ok else 'MISMATCH'}")
    return EXIT_OK if all(ok for _, ok in results) else EXIT_FAILURE


COMMANDS = {
    'rank': cmd_rank,
    'table': cmd_table,
    'r-value': cmd_rvalue,
    'relations': cmd_relations,
    'gorenstein': cmd_gorenstein,
    'kernel': cmd_kernel_stats,
    'matrix': cmd_matrix,
    'sk-check': cmd_sk_check,
}


# --- argument parsing ----------------------------------------------------------

def build_parser():
    parser = CliParser(
        description='Tautological rings of M_g and C_g',
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  python src/cli.py rank --genus 9 --degree 4
  python src/cli.py table --genus 2..6 --format csv
  python src/cli.py r-value --genus 4 --partition 2
  python src/cli.py relations --genus 3 --degree 2
  python src/cli.py gorenstein --genus 4 --format json
  python src/cli.py kernel --l 6
        """
    )

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--format', default='human', help='Output format: human, json or csv')
    common.add_argument('--cache', default=None, help='Intersection-number cache file (default: TAUT_CACHE_PATH)')
    common.add_argument('--threads', type=int, default=None, help='Worker threads (default: TAUT_THREADS)')
    common.add_argument('--primes', default=None, help='Comma-separated primes for modular rank')

    budget = argparse.ArgumentParser(add_help=False)
    budget.add_argument('--chern-offset', type=int, default=None, help='Search j <= g + offset')
    budget.add_argument('--max-attempts', type=int, default=None, help='Pushdowns per degree')

    sub = parser.add_subparsers(dest='command', required=True, parser_class=CliParser)

    p = sub.add_parser('rank', parents=[common], help='Rank of a pairing matrix')
    p.add_argument('--genus', required=True)
    p.add_argument('--degree', required=True)
    p.add_argument('--kind', choices=['Q', 'P'], default='Q')

    p = sub.add_parser('table', parents=[common], help='Grid of rank Q_{g,i}')
    p.add_argument('--genus', required=True, help='Genus range FIRST..LAST')

    p = sub.add_parser('r-value', parents=[common], help='Proportionality constant r(kappa_m)')
    p.add_argument('--genus', required=True)
    p.add_argument('--partition', required=True, help='Exponent vector, e.g. 2,0,1')

    p = sub.add_parser('relations', parents=[common, budget], help='Relations in R^i(C_g)')
    p.add_argument('--genus', required=True)
    p.add_argument('--degree', required=True)

    p = sub.add_parser('gorenstein', parents=[common, budget], help='Gorenstein check for R(C_g)')
    p.add_argument('--genus', required=True)

    p = sub.add_parser('kernel', parents=[common], help='a(l), b(l) and n statistics')
    p.add_argument('--l', type=int, default=None)
    p.add_argument('--genus', default=None)
    p.add_argument('--degree', default=None)
    p.add_argument('--verify-a', action='store_true', help='Re-derive a(l) from a P-matrix rank')

    p = sub.add_parser('matrix', parents=[common], help='Export a pairing matrix')
    p.add_argument('--genus', required=True)
    p.add_argument('--degree', required=True)
    p.add_argument('--kind', choices=['Q', 'P', 'Q-direct'], default='Q')
    p.add_argument('--sub', type=int, default=None, help='Row filter j for P^j')

    p = sub.add_parser('sk-check', parents=[common], help='Symmetric-group sum identity')
    p.add_argument('--genus', required=True)
    p.add_argument('--partition', default=None, help='Exponent vector; all partitions of g-2 if omitted')

    return parser


def job_from_args(args):
    """Translate parsed flags into a JobConfig"""
    extra = {}
    for key in ('kind', 'partition', 'l', 'verify_a', 'sub'):
        if hasattr(args, key):
            extra[key] = getattr(args, key)

    genus = getattr(args, 'genus', None)
    genus_range = None
    if args.command == 'table':
        genus_range = validate_genus_range(genus)
        genus = None
    elif genus is not None:
        genus = validate_genus(genus)

    degree = getattr(args, 'degree', None)
    if degree is not None:
        degree = validate_degree(degree, 0, 10 ** 6)

    return Config.job(
        args.command,
        genus=genus,
        genus_range=genus_range,
        degree=degree,
        output_format=validate_output_format(args.format),
        cache_path=args.cache,
        chern_offset=getattr(args, 'chern_offset', None),
        max_attempts=getattr(args, 'max_attempts', None),
        primes=Config.validate_primes(parse_primes(args.primes)) if args.primes else None,
        threads=args.threads,
        extra=extra,
    )


def main(argv=None):
    """Main function for CLI interface"""
    parser = build_parser()
    args = parser.parse_args(argv)

    try:
        Config.validate_config()
        job = job_from_args(args)
        if job.threads < 1:
            raise ValueError(f"--threads must be at least 1, got: {job.threads}")
        TABLE.load(job.cache_path)
    except ValueError as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_INVALID
    except ComputationError as e:
        print(f"Error: {handle_computation_error(e, 'CACHE_LOAD')}", file=sys.stderr)
        return EXIT_FAILURE

    log_job(f"CLI_{args.command.upper()}", job.genus if job.genus is not None else job.genus_range,
            job.degree, status="STARTED")
    try:
        code = COMMANDS[args.command](job)
    except ValueError as e:
        logger.error(f"Invalid arguments: {e}")
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_INVALID
    except Exception as e:
        print(f"Error: {handle_computation_error(e, args.command.upper())}", file=sys.stderr)
        return EXIT_FAILURE

    try:
        TABLE.save(job.cache_path)
    except OSError as e:
        logger.warning(f"Could not write cache {job.cache_path}: {e}")
    return code


if __name__ == "__main__":
    sys.exit(main())
