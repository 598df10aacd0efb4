import argparse
import logging
import os
import pathlib
import sys
import ssrsim.config as ssrconfig
from ssrsim.exceptions import ConfigError, ParseError, DegenerateRunError, BoundViolation, SimulationError
from ssrsim.model.experiment import ExperimentConfig, EXPERIMENTS, MEASURES
from ssrsim.service.config import SimulatorConfigurationLoader, SimulatorPropertiesGroup
from ssrsim.service.experiments import RUNNERS
from ssrsim.service.output import OutputProperties, csv_path, summary_path, plot_path, write_run_csv, write_run_summary
from ssrsim.service.plotting import emit_plot, PLOT_KINDS, LINE_BY_EPSILON, LINE_BY_N, LINE_BY_A
from ssrsim.service.process import ProcessProperties, SeedPoolService
from ssrsim.service.progress_events import ProgressEventLogWriter

default_config_dir_path = str(pathlib.Path(ssrconfig.__file__).parent.resolve())
default_config_path = os.path.join(default_config_dir_path, 'ssr_config.yml')
default_experiments_dir_path = os.path.join(default_config_dir_path, 'experiments')

EXIT_OK = 0
EXIT_CONFIG_ERROR = 2
EXIT_DEGENERATE_RUN = 3

DEFAULT_PLOT_KINDS = {
    'enhance': LINE_BY_EPSILON,
    'sparsity': LINE_BY_EPSILON,
    'gap': LINE_BY_N,
    'irrelevant': LINE_BY_A
}

logger = logging.getLogger(__name__)

class LoggingProperties(SimulatorPropertiesGroup):
    def __init__(self):
        super().__init__('logging')
        # apply defaults (correct settings will be picked up from config file or environment variables)
        self.level = 'INFO'
        self.format = '%(asctime)s %(levelname)s %(name)s %(message)s'
        self.log_progress_events = True


def create_app():
    loader = SimulatorConfigurationLoader('ssr')
    loader.add_file(default_config_path, required=False)
    # custom config file e.g. for a shared workstation install
    loader.add_file('/var/ssr/ssr_config.yml', required=False)
    loader.add_environment_file('SSR_CONFIG', required=False)
    loader.add_property_group(ProcessProperties())
    loader.add_property_group(OutputProperties())
    loader.add_property_group(LoggingProperties())
    return SimulatorApp(loader.load())

def configure_logging(logging_properties):
    level = logging_properties.level
    if isinstance(level, str):
        level = level.upper()
    logging.basicConfig(level=level, format=logging_properties.format, stream=sys.stderr)

def default_experiment_config_path(experiment):
    return os.path.join(default_experiments_dir_path, '{0}.json'.format(experiment))

def list_default_configs():
    return sorted(os.path.splitext(name)[0] for name in os.listdir(default_experiments_dir_path) if name.endswith('.json'))

def build_parser():
    parser = argparse.ArgumentParser(prog='ssr', description='Simulations of semi-supervised adversarially robust classification')
    commands = parser.add_subparsers(dest='command', metavar='command')
    commands.required = True
    for experiment in EXPERIMENTS:
        run_parser = commands.add_parser(experiment, help='run the {0} experiment'.format(experiment))
        run_parser.add_argument('--config', help='experiment configuration JSON (defaults to the shipped {0} config)'.format(experiment))
        run_parser.add_argument('--out', help='output directory')
        run_parser.add_argument('--seeds', type=int, help='override n_seeds')
        run_parser.add_argument('--plot', action='store_true', help='also write an SVG plot')
    plot_parser = commands.add_parser('plot', help='plot a run CSV')
    plot_parser.add_argument('--csv', required=True)
    plot_parser.add_argument('--kind', required=True, choices=sorted(PLOT_KINDS))
    plot_parser.add_argument('--out', required=True)
    commands.add_parser('configs', help='list the shipped default experiment configs')
    return parser


class SimulatorApp():

    def __init__(self, configuration):
        if configuration is None:
            raise ValueError('configuration argument not provided')
        self.configuration = configuration
        groups = configuration.property_groups
        self.output_properties = groups.get_property_group(OutputProperties)
        self.logging_properties = groups.get_property_group(LoggingProperties)
        self.pool = SeedPoolService(configuration)
        self.event_writer = ProgressEventLogWriter(enabled=bool(self.logging_properties.log_progress_events))

    def load_experiment_config(self, experiment, config_path=None, seeds=None, out=None):
        path = config_path if config_path is not None else default_experiment_config_path(experiment)
        cfg = ExperimentConfig.from_file(path)
        if cfg.experiment != experiment:
            raise ConfigError('Config {0} is for the {1} experiment, not {2}'.format(path, cfg.experiment, experiment))
        output_dir = out if out is not None else (cfg.output_dir or self.output_properties.output_dir)
        return cfg.with_overrides(n_seeds=seeds, output_dir=output_dir)

    def run_experiment(self, experiment, config_path=None, seeds=None, out=None, plot=False):
        cfg = self.load_experiment_config(experiment, config_path=config_path, seeds=seeds, out=out)
        record = RUNNERS[experiment](cfg, pool=self.pool, event_writer=self.event_writer)
        os.makedirs(cfg.output_dir, exist_ok=True)
        data_path = write_run_csv(record, csv_path(cfg.output_dir, experiment))
        logger.info('Wrote {0}'.format(data_path))
        if self.output_properties.write_run_summary:
            write_run_summary(record, summary_path(cfg.output_dir, experiment))
        if plot:
            if experiment == MEASURES:
                logger.warning('The measures report has no plot kind, skipping the plot')
            else:
                svg = emit_plot(data_path, DEFAULT_PLOT_KINDS[experiment], plot_path(cfg.output_dir, experiment))
                logger.info('Wrote {0}'.format(svg))
        return record

    def run(self, argv=None):
        args = build_parser().parse_args(argv)
        try:
            if args.command == 'configs':
                for name in list_default_configs():
                    print('{0}\t{1}'.format(name, default_experiment_config_path(name)))
            elif args.command == 'plot':
                emit_plot(args.csv, args.kind, args.out)
            else:
                self.run_experiment(args.command, config_path=args.config, seeds=args.seeds, out=args.out, plot=args.plot)
        except (ConfigError, ParseError) as e:
            logger.error('{0}: {1}'.format(type(e).__name__, e))
            return EXIT_CONFIG_ERROR
        except (DegenerateRunError, BoundViolation) as e:
            logger.error('{0}: {1}'.format(type(e).__name__, e))
            return EXIT_DEGENERATE_RUN
        except SimulationError as e:
            logger.error('Run failed: {0}: {1}'.format(type(e).__name__, e))
            return 1
        return EXIT_OK


def init_app(argv=None):
    try:
        app = create_app()
    except ConfigError as e:
        logging.basicConfig()
        logger.error('ConfigError: {0}'.format(e))
        return EXIT_CONFIG_ERROR
    configure_logging(app.logging_properties)
    return app.run(argv)
