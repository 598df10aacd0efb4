import logging
import yaml
from ignition.service.progress_events import YAMLProgressEventLogSerializer

EVENTS_LOGGER = 'ssrsim.events'

class SimulationYAMLProgressEventLogSerializer(YAMLProgressEventLogSerializer):

    def serialize(self, event):
        data = _plain(event.to_dict())
        return yaml.safe_dump(data, allow_unicode=True, sort_keys=False, default_flow_style=False)


def _plain(value):
    # safe_dump does not represent OrderedDict or numpy scalars
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if hasattr(value, 'item') and not isinstance(value, (str, bytes)):
        return value.item()
    return value


class ProgressEventLogWriter():
    """
    Writes serialized progress events to the events logger
    """

    def __init__(self, serializer=None, enabled=True):
        self.serializer = serializer if serializer is not None else SimulationYAMLProgressEventLogSerializer()
        self.enabled = enabled
        self.logger = logging.getLogger(EVENTS_LOGGER)

    def add(self, event):
        if not self.enabled:
            return
        self.logger.info('{0}\n{1}'.format(event.progress_event_type, self.serializer.serialize(event)))
