"""
verify: run the oracle cross-check suites and report pass counts.
"""

from commands.common import execute
from services.verification import SUITES, run_suites
from utils.exceptions import VerificationFailure
from utils.output_utils import write_json

NAME = 'verify'


def register(subparsers):
    parser = subparsers.add_parser(NAME, help='run the oracle cross-check suites')
    parser.add_argument('--suite', choices=sorted(SUITES) + ['all'], default='all', help='suite to run')
    parser.add_argument('--config', help='JSON config file (accepted for a uniform command line)')
    parser.add_argument('--out', help='output directory')
    parser.set_defaults(handler=run)


def _body(args, file_values, out_dir, manifest):
    names = sorted(SUITES) if args.suite == 'all' else [args.suite]
    manifest.parameters = {'suites': names}
    reports = run_suites(names, strict=False)
    path = write_json([report.to_dict() for report in reports], out_dir / 'verify.json')

    for report in reports:
        mark = '✅' if report.failed == 0 else '❌'
        print(f"{mark} {report.suite}: {report.passed}/{len(report.checks)} checks passed")

    failed = [check.name for report in reports for check in report.checks if not check.passed]
    if failed:
        # the report is already on disk; keep it in the manifest
        manifest.add_outputs([path])
        raise VerificationFailure(f"{len(failed)} checks failed: {', '.join(failed[:5])}")
    return [path]


def run(args):
    return execute(args, NAME, _body)
