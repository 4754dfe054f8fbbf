import argparse
import logging
import sys
from dataclasses import replace
from typing import Optional, Sequence

from persfl_simulator.system.configure_logging import LogLevel, configure_logging
from persfl_simulator.system.constants import DEFAULT_SEED, EXPERIMENT_KINDS
from persfl_simulator.system.exceptions import ConfigurationError, PersFLError

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_RUNTIME_ERROR = 1
EXIT_CONFIG_ERROR = 2


def _common_flags() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help=f"Master seed (default: {DEFAULT_SEED})")
    common.add_argument("--out", type=str, default=None,
                        help="Output directory (default: $PERSFL_OUTPUT_DIR, else ./results)")
    common.add_argument("--config", type=str, default=None, help="JSON experiment config file")
    verbosity = common.add_mutually_exclusive_group()
    verbosity.add_argument("--quiet", action="store_true", help="Only log warnings and errors")
    verbosity.add_argument("--verbose", action="store_true", help="Log every round")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_flags()
    parser = argparse.ArgumentParser(prog="persfl",
                                     description="Personalized federated learning by data-driven peer selection")
    subparsers = parser.add_subparsers(dest="command", required=True)

    generate = subparsers.add_parser("generate", parents=[common], help="Write a synthetic federation to disk")
    generate.add_argument("--n-devices", type=int, default=100)
    generate.add_argument("--samples-per-device", type=int, default=10)
    generate.add_argument("--dim", type=int, default=20)
    generate.add_argument("--noise-std", type=float, default=0.0)
    generate.add_argument("--clusters", type=int, default=2, help="Number of equally sized true clusters")

    run = subparsers.add_parser("run", parents=[common], help="Run one experiment kind")
    run.add_argument("kind", help=f"One of: {', '.join(EXPERIMENT_KINDS)}")
    run.add_argument("--seeds", type=int, default=None, help="Number of seeds to average over")
    run.add_argument("--rounds", type=int, default=None, help="Rounds for every algorithm of the experiment")
    run.add_argument("--workers", type=int, default=None, help="Threads running settings in parallel")

    sweep = subparsers.add_parser("sweep", parents=[common], help="Run every experiment listed in --config")
    sweep.add_argument("--workers", type=int, default=None)

    verify = subparsers.add_parser("verify", parents=[common], help="Run the acceptance suite")
    verify.add_argument("--checks", type=int, nargs="+", default=None, help="Only run these check numbers")
    verify.add_argument("--seeds", type=int, default=None)
    verify.add_argument("--rounds", type=int, default=None)
    verify.add_argument("--tree-rounds", type=int, default=None)
    verify.add_argument("--workers", type=int, default=None)
    return parser


def _log_level(args: argparse.Namespace) -> LogLevel:
    if args.quiet:
        return LogLevel.WARNING
    if args.verbose:
        return LogLevel.TRACE
    return LogLevel.INFO


def _apply_overrides(config, args: argparse.Namespace):
    overrides = {}
    if args.seed is not None:
        overrides["seed"] = args.seed
    if getattr(args, "seeds", None) is not None:
        overrides["n_seeds"] = args.seeds
    if getattr(args, "workers", None) is not None:
        overrides["workers"] = args.workers
    if getattr(args, "rounds", None) is not None:
        overrides["algorithm1"] = replace(config.algorithm1, rounds=args.rounds)
        overrides["algorithm2"] = replace(config.algorithm2, rounds=args.rounds)
        overrides["ifca"] = replace(config.ifca, rounds=args.rounds)
    return replace(config, **overrides) if overrides else config


def _generate(args: argparse.Namespace) -> int:
    from persfl_simulator.core_functions.experiment_controller import resolve_output_path
    from persfl_simulator.core_functions.synthdata import generate_federation
    from persfl_simulator.data_handler import save_federation
    from persfl_simulator.data_models.federation import SyntheticSpec

    spec = SyntheticSpec.with_equal_clusters(n_devices=args.n_devices,
                                             samples_per_device=args.samples_per_device,
                                             dim=args.dim,
                                             n_clusters=args.clusters,
                                             noise_std=args.noise_std,
                                             seed=args.seed if args.seed is not None else DEFAULT_SEED)
    federation = generate_federation(spec)
    logger.info(f"Generated federation:\n{federation}")
    save_federation(federation, resolve_output_path(args.out) / f"federation_seed{spec.seed}")
    return EXIT_OK


def _run(args: argparse.Namespace) -> int:
    from persfl_simulator.core_functions.experiment_controller import run_experiment
    from persfl_simulator.data_models.parameter_models import ExperimentConfig, load_experiment_configs

    if args.config is None:
        config = ExperimentConfig(kind=args.kind)
    else:
        matching = [config for config in load_experiment_configs(args.config) if config.kind == args.kind]
        if len(matching) == 0:
            raise ConfigurationError(f"{args.config} holds no experiment of kind {args.kind!r}")
        config = matching[0]
    run_experiment(_apply_overrides(config, args), output_path=args.out)
    return EXIT_OK


def _sweep(args: argparse.Namespace) -> int:
    from persfl_simulator.core_functions.experiment_controller import run_experiment
    from persfl_simulator.data_models.parameter_models import load_experiment_configs

    if args.config is None:
        raise ConfigurationError("`sweep` needs --config <file>")
    configs = load_experiment_configs(args.config)
    for index, config in enumerate(configs):
        logger.info(f"Experiment {index + 1}/{len(configs)}: {config.kind}")
        run_experiment(_apply_overrides(config, args), output_path=args.out)
    return EXIT_OK


def _verify(args: argparse.Namespace) -> int:
    from persfl_simulator.core_functions.verification import (VerifySettings, format_results_table,
                                                              run_acceptance_suite)

    settings = VerifySettings()
    for attribute, value in (("seed", args.seed), ("n_seeds", args.seeds), ("rounds", args.rounds),
                             ("tree_rounds", args.tree_rounds), ("workers", args.workers)):
        if value is not None:
            setattr(settings, attribute, value)
    results = run_acceptance_suite(settings, only=args.checks)
    print(format_results_table(results))
    return EXIT_OK if all(result.passed for result in results) else EXIT_RUNTIME_ERROR


_COMMANDS = {
    "generate": _generate,
    "run": _run,
    "sweep": _sweep,
    "verify": _verify,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(_log_level(args))
    try:
        return _COMMANDS[args.command](args)
    except ConfigurationError as e:
        logger.error(f"Configuration error: {e}")
        return EXIT_CONFIG_ERROR
    except (PersFLError, OSError) as e:
        logger.error(f"{args.command} failed: {e}")
        return EXIT_RUNTIME_ERROR


if __name__ == "__main__":
    sys.exit(main())
