import logging
import os
import yaml
from ignition.boot.config import BootstrapApplicationConfiguration, PropertyGroups
from ignition.service.config import ConfigurationPropertiesGroup
from ssrsim.exceptions import ConfigError

logger = logging.getLogger(__name__)

class SimulatorPropertiesGroup(ConfigurationPropertiesGroup):
    """
    Property group read from the mapping under its key in a YAML config file.
    Subclasses apply defaults in __init__; values from config files override them key by key
    """

    def __init__(self, key):
        super().__init__(key)
        self._yaml_key = key
        self._base_attributes = frozenset(vars(self))

    @property
    def yaml_key(self):
        return self._yaml_key

    def property_names(self):
        return [name for name in vars(self) if not name.startswith('_') and name not in self._base_attributes]

    def read_from_dict(self, data):
        if data is None:
            return
        if not isinstance(data, dict):
            raise ConfigError('Property group {0} must be a mapping, got {1}'.format(self._yaml_key, type(data).__name__))
        known = self.property_names()
        for name, value in data.items():
            if name not in known:
                raise ConfigError('Unknown property {0}.{1}'.format(self._yaml_key, name))
            setattr(self, name, value)


def read_yaml_source(path, required):
    if not os.path.exists(path):
        if required:
            raise ConfigError('Config file {0} does not exist'.format(path))
        logger.debug('Optional config file {0} not found, skipping'.format(path))
        return {}
    try:
        with open(path, 'r', encoding='utf-8') as f:
            data = yaml.safe_load(f)
    except yaml.YAMLError as e:
        raise ConfigError('Config file {0} is not valid YAML: {1}'.format(path, e)) from e
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ConfigError('Config file {0} must contain a mapping'.format(path))
    logger.debug('Loaded config file {0}'.format(path))
    return data


class SimulatorConfigurationLoader():
    """
    Reads the YAML sources in the order they were added onto the property groups.
    Later sources override earlier ones
    """

    def __init__(self, app_name='ssr'):
        self.app_name = app_name
        self.groups = []
        self.sources = []

    def add_property_group(self, group):
        self.groups.append(group)
        return self

    def add_file(self, path, required=False):
        self.sources.append((path, required))
        return self

    def add_environment_file(self, env_var, required=False):
        """
        The file named by env_var must exist once the variable is set
        """
        path = os.environ.get(env_var)
        if path is None:
            if required:
                raise ConfigError('Environment variable {0} is not set'.format(env_var))
            return self
        return self.add_file(path, required=True)

    def load(self):
        for path, required in self.sources:
            data = read_yaml_source(path, required)
            for group in self.groups:
                group.read_from_dict(data.get(group.yaml_key))
        property_groups = PropertyGroups()
        for group in self.groups:
            property_groups.add_property_group(group)
        return BootstrapApplicationConfiguration(app_name=self.app_name, property_sources=[], property_groups=property_groups,
                                                 service_configurators=[], api_configurators=[], api_error_converter=None)
