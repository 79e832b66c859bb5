"""
NOPA Bell Simulation - Command Line Interface

명령줄에서 연산자 검증, 상관 함수, Bell 함수, 샘플링을 실행하기 위한 CLI

표준 출력에는 CSV/JSON 데이터만, 로그와 오류는 표준 오류로 보낸다.
"""

import argparse
import logging
import math
import sys
from typing import Callable, Dict, List, Optional, Tuple

from nopa_bell_simulation import __version__
from nopa_bell_simulation.analysis.bell import AngleSet, BellKind, BellReport, nopa_bell
from nopa_bell_simulation.analysis.correlations import CorrelationQuery, correlation_sweep
from nopa_bell_simulation.config import DEFAULT_SHOTS, DEFAULT_VERIFY_DEPTH, ExperimentConfig
from nopa_bell_simulation.core.exceptions import NopaBellError
from nopa_bell_simulation.sampling.lhv_model import lhv_estimate
from nopa_bell_simulation.sampling.sampler import estimate_bell
from nopa_bell_simulation.utils.parallel import parallel_map
from nopa_bell_simulation.utils.report_generator import ReportGenerator, TableData
from nopa_bell_simulation.utils.reproducibility import ExperimentMetadata, ReproducibleRNG
from nopa_bell_simulation.utils.verification import InvariantSuite

logger = logging.getLogger('nopa_bell_simulation.cli')

# 종료 코드
EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2

CORRELATION_COLUMNS = ['r', 'd', 'alpha', 'beta', 'analytic', 'numeric', 'abs_err', 'tail_weight']
BELL_COLUMNS = [
    'kind', 'order', 'familiar', 'r', 'gamma', 'lhs', 'bound', 'violation',
    'gamma_opt', 'gamma_opt_over_pi', 'max_lhs', 'max_violation',
]
SAMPLE_COLUMNS = [
    'kind', 'order', 'familiar', 'r', 'gamma', 'lhs', 'analytic_lhs', 'bound', 'violation',
    'std_err', 'z_score', 'shots', 'seed',
]
LHV_COLUMNS = [
    'alpha', 'beta', 'gamma', 'delta', 'lhs', 'exact_lhs', 'bound', 'violation',
    'std_err', 'z_score', 'shots', 'seed',
]
VERIFY_COLUMNS = ['test_name', 'passed', 'residual', 'message']

# 하위 명령 → Bell 함수 종류
BELL_COMMANDS = {
    'chsh': BellKind.CHSH,
    'bit-bell': BellKind.BIT_XOR,
    'number-bell': BellKind.NUMBER_XOR,
    'hamming-bell': BellKind.HAMMING,
    'weighted-bell': BellKind.WEIGHTED,
}


class OneLineArgumentParser(argparse.ArgumentParser):
    """인자 오류를 한 줄로 출력"""

    def error(self, message):
        sys.stderr.write(f"error: usage: {message}\n")
        sys.exit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    """인자 파서 생성"""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--r', type=str, default='1', help='스퀴징 r (쉼표 목록, 기본값: 1)')
    common.add_argument('--D', type=int, default=0, help='절단 비트 깊이 (0 = 자동, 기본값: 0)')
    common.add_argument('--format', choices=['csv', 'json'], default='csv', help='출력 형식 (기본값: csv)')
    common.add_argument('--output', type=str, help='출력 파일 경로 (없으면 표준 출력)')
    common.add_argument('--threads', type=int, help='스레드 수 (0 = 자동, 기본값: NOPA_BELL_THREADS)')
    common.add_argument('--seed', type=int, default=0, help='랜덤 시드 (기본값: 0)')
    common.add_argument('-v', '--verbose', action='count', default=0, help='상세 로그 (-vv 는 디버그)')

    gamma = argparse.ArgumentParser(add_help=False)
    gamma.add_argument('--gamma', type=str, help="γ 목록 (예: 'pi/8,0.5')")
    gamma.add_argument('--gamma-grid', type=int, dest='gamma_grid', help='[0, π/2] 등간격 γ 개수')
    gamma.add_argument('--optimal', action='store_true', help='최적 γ* 에서 평가')
    gamma.add_argument('--familiar', action='store_true', help='|X+X| + |X−X| ≤ 2W 형태 사용')

    parser = OneLineArgumentParser(
        prog='nopa-bell',
        description="NOPA Bell Simulation - 수 측정 Bell 부등식 시뮬레이션",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
예제:
  # 연산자 항등식 검증
  nopa-bell verify --D 4

  # 해석/수치 상관 비교
  nopa-bell correlate --r 0.5,1,2 --d 2 --alpha pi/2 --beta pi/2

  # 수 XOR Bell 함수 최대값
  nopa-bell number-bell --d 2 --r 1 --optimal

  # Monte Carlo CHSH 추정
  nopa-bell sample --kind chsh --r 1 --optimal --shots 1000000 --seed 7
        """,
    )
    parser.add_argument('--version', action='version', version=f'NOPA Bell Simulation {__version__}')
    sub = parser.add_subparsers(dest='command', parser_class=OneLineArgumentParser)
    sub.required = True

    verify = sub.add_parser('verify', parents=[common], help='연산자 불변식 검증')

    correlate = sub.add_parser('correlate', parents=[common], help='해석 대 수치 상관값')
    correlate.add_argument('--d', type=int, default=1, help='그룹 크기 d (기본값: 1)')
    correlate.add_argument('--alpha', type=str, default='pi/2', help='α 목록 (기본값: pi/2)')
    correlate.add_argument('--beta', type=str, default='pi/2', help='β 목록 (기본값: pi/2)')
    correlate.add_argument('--raw', action='store_true', help='재정규화하지 않은 원시 계수 사용')

    for name, kind in BELL_COMMANDS.items():
        p = sub.add_parser(name, parents=[common, gamma], help=f'{kind.value} 닫힌 형태')
        if kind is BellKind.BIT_XOR:
            p.add_argument('--k', type=int, default=0, help='비트 번호 k (기본값: 0)')
        elif kind is BellKind.WEIGHTED:
            p.add_argument('--weights', type=str, required=True, help="비트 가중치 (예: '0,0,1')")
        else:
            p.add_argument('--d', type=int, default=1, help='d (기본값: 1)')

    sample = sub.add_parser('sample', parents=[common, gamma], help='Monte Carlo Bell 추정')
    sample.add_argument('--kind', choices=[k.value for k in BellKind], default='chsh', help='함수 종류')
    sample.add_argument('--d', type=int, help='CHSH 의 d, 또는 수 XOR/Hamming 의 비트 수')
    sample.add_argument('--k', type=int, help='비트 XOR 의 비트 번호')
    sample.add_argument('--weights', type=str, help='가중 XOR 의 가중치')
    sample.add_argument('--angles', type=str, help='네 각도 α,β,γ,δ 직접 지정')
    sample.add_argument('--shots', type=int, default=DEFAULT_SHOTS, help=f'샘플 수 (기본값: {DEFAULT_SHOTS})')

    lhv = sub.add_parser('lhv', parents=[common], help='국소 숨은 변수 기준 모델')
    lhv.add_argument('--angles', type=str, help='네 각도 α,β,γ,δ (기본값: 0,pi/2,pi/4,-pi/4)')
    lhv.add_argument('--gamma', type=str, help='(0, π/2, γ, −γ) 규약의 γ 목록')
    lhv.add_argument('--random-sets', type=int, dest='random_sets', default=0, help='무작위 각도 집합 수')
    lhv.add_argument('--shots', type=int, default=DEFAULT_SHOTS, help=f'샘플 수 (기본값: {DEFAULT_SHOTS})')
    return parser


def configure_logging(verbosity: int):
    level = logging.WARNING
    if verbosity == 1:
        level = logging.INFO
    elif verbosity >= 2:
        level = logging.DEBUG
    logging.basicConfig(stream=sys.stderr, level=level, format='%(levelname)s %(name)s: %(message)s')


# ----------------------------------------------------------------------
# 하위 명령
# ----------------------------------------------------------------------

def run_verify(config: ExperimentConfig) -> Tuple[TableData, int]:
    summary = InvariantSuite(config.bit_depth or DEFAULT_VERIFY_DEPTH).run_all_tests()
    table = TableData(columns=VERIFY_COLUMNS)
    for result in summary['results']:
        table.append(result)
    return table, EXIT_OK if summary['failed'] == 0 else EXIT_FAILED


def run_correlate(config: ExperimentConfig) -> Tuple[TableData, int]:
    table = TableData(columns=CORRELATION_COLUMNS)
    d = config.d or 1
    for r in config.r:
        queries = [CorrelationQuery(a, b, d, r) for a in config.alpha for b in config.beta]
        for result in correlation_sweep(queries, config.space_for(r), renormalize=not config.raw,
                                        threads=config.threads):
            table.append(result.to_row())
    return table, EXIT_OK


def _order_for(kind: BellKind, config: ExperimentConfig) -> Optional[int]:
    if kind is BellKind.BIT_XOR:
        return config.k if config.k is not None else 0
    if kind is BellKind.WEIGHTED:
        return None
    return config.d or 1


def _bell_points(kind: BellKind, config: ExperimentConfig) -> List[Dict]:
    """(r, γ) 평가점; γ 가 없으면 최적 γ*"""
    gammas = config.gamma_values()
    points = []
    for r in config.r:
        for g in gammas:
            points.append({'r': r, 'gamma': g})
        if config.optimal or not gammas:
            points.append({'r': r, 'gamma': None})
    return points


def _evaluate_bell(kind: BellKind, config: ExperimentConfig) -> Callable[[Dict], BellReport]:
    order = _order_for(kind, config)

    def evaluate(point: Dict) -> BellReport:
        report = nopa_bell(kind, 0.0, point['r'], order=order, weights=config.weights, familiar=config.familiar)
        gamma = report.optimal_gamma if point['gamma'] is None else point['gamma']
        return nopa_bell(kind, gamma, point['r'], order=order, weights=config.weights, familiar=config.familiar)

    return evaluate


def run_bell(config: ExperimentConfig) -> Tuple[TableData, int]:
    kind = BELL_COMMANDS[config.command]
    reports = parallel_map(_evaluate_bell(kind, config), _bell_points(kind, config), config.threads)
    table = TableData(columns=BELL_COLUMNS)
    for report in reports:
        table.append(report.to_row())
    return table, EXIT_OK


def run_sample(config: ExperimentConfig) -> Tuple[TableData, int]:
    kind = BellKind(config.kind)
    order = _order_for(kind, config)
    table = TableData(columns=SAMPLE_COLUMNS)
    for r in config.r:
        space = config.space_for(r)
        if config.angles:
            angle_sets = [AngleSet(*config.angles)]
        else:
            gammas = config.gamma_values()
            if config.optimal or not gammas:
                gammas.append(nopa_bell(kind, 0.0, r, order=order, weights=config.weights,
                                        familiar=config.familiar).optimal_gamma)
            angle_sets = [AngleSet.nopa_convention(g) for g in gammas]
        for angles in angle_sets:
            report = estimate_bell(kind, angles, r, space, config.shots, config.seed, order=order,
                                   weights=config.weights, familiar=config.familiar, threads=config.threads)
            table.append({
                'kind': report.kind.value,
                'order': report.order,
                'familiar': report.familiar,
                'r': r,
                'gamma': angles.gamma,
                'lhs': report.lhs_value,
                'analytic_lhs': report.analytic_lhs,
                'bound': report.classical_bound,
                'violation': report.violation,
                'std_err': report.standard_error,
                'z_score': report.z_score,
                'shots': config.shots,
                'seed': config.seed,
            })
    return table, EXIT_OK


def run_lhv(config: ExperimentConfig) -> Tuple[TableData, int]:
    if config.random_sets:
        generator = ReproducibleRNG(config.seed).get_rng('angles')
        angle_sets = [AngleSet(*row) for row in generator.uniform(0.0, 2 * math.pi, size=(config.random_sets, 4))]
    elif config.angles:
        angle_sets = [AngleSet(*config.angles)]
    elif config.gamma:
        angle_sets = [AngleSet.nopa_convention(g) for g in config.gamma]
    else:
        angle_sets = [AngleSet(0.0, math.pi / 2, math.pi / 4, -math.pi / 4)]

    rng = ReproducibleRNG(config.seed)
    table = TableData(columns=LHV_COLUMNS)
    for index, angles in enumerate(angle_sets):
        seed = rng.child(index).seed
        report = lhv_estimate(angles, config.shots, seed, threads=config.threads)
        table.append({
            'alpha': angles.alpha,
            'beta': angles.beta,
            'gamma': angles.gamma,
            'delta': angles.delta,
            'lhs': report.lhs_value,
            'exact_lhs': report.analytic_lhs,
            'bound': report.classical_bound,
            'violation': report.violation,
            'std_err': report.standard_error,
            'z_score': report.z_score,
            'shots': config.shots,
            'seed': seed,
        })
    return table, EXIT_OK


COMMANDS = {
    'verify': run_verify,
    'correlate': run_correlate,
    'sample': run_sample,
    'lhv': run_lhv,
    **{name: run_bell for name in BELL_COMMANDS},
}


def run(config: ExperimentConfig) -> int:
    """설정을 실행하고 결과를 출력, 종료 코드 반환"""
    for warning in config.validate():
        logger.warning(warning)
    metadata = ExperimentMetadata(config.to_dict(), seed=config.seed)
    logger.info(f"{config.command} 실행 (config_hash={metadata.config_hash[:12]})")
    table, status = COMMANDS[config.command](config)
    ReportGenerator(config.fmt, metadata.to_meta()).write(table, config.output)
    return status


def main(argv: Optional[List[str]] = None) -> int:
    """메인 CLI 함수"""
    args = build_parser().parse_args(argv)
    configure_logging(args.verbose)
    try:
        return run(ExperimentConfig.from_args(args))
    except NopaBellError as e:
        sys.stderr.write(f"error: {type(e).__name__}: {e}\n")
        return EXIT_USAGE
    except (OSError, ValueError) as e:
        sys.stderr.write(f"error: {type(e).__name__}: {e}\n")
        if args.verbose >= 2:
            logger.exception("상세 오류")
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
