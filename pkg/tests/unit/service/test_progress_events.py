import unittest
import numpy as np
import yaml
from testfixtures import LogCapture
from ignition.service.progress_events import YAMLProgressEventLogSerializer
from ssrsim.model.progress_events import RunStartedEvent, RowSkippedEvent
from ssrsim.service.progress_events import SimulationYAMLProgressEventLogSerializer, ProgressEventLogWriter, EVENTS_LOGGER

class TestSimulationYAMLProgressEventLogSerializer(unittest.TestCase):

    def test_is_ignition_serializer(self):
        self.assertIsInstance(SimulationYAMLProgressEventLogSerializer(), YAMLProgressEventLogSerializer)

    def test_serialize(self):
        event = RunStartedEvent('gap', 'abc123', 5, 2)
        output = SimulationYAMLProgressEventLogSerializer().serialize(event)
        self.assertEqual(yaml.safe_load(output), {
            'eventType': 'ResourceTransitionProgressEvent',
            'progressEventType': 'ssr/RunStarted',
            'details': {'experiment': 'gap', 'configDigest': 'abc123', 'seeds': 5, 'workers': 2}
        })
        self.assertIn('details:\n  experiment: gap\n  configDigest: abc123\n  seeds: 5\n  workers: 2\n', output)

    def test_serialize_numpy_scalars(self):
        event = RowSkippedEvent(np.int64(3), np.float64(0.25), 'EmptySupport: Support set is empty')
        output = SimulationYAMLProgressEventLogSerializer().serialize(event)
        self.assertEqual(yaml.safe_load(output), {
            'eventType': 'ResourceTransitionProgressEvent',
            'progressEventType': 'ssr/RowSkipped',
            'details': {'seed': 3, 'value': 0.25, 'reason': 'EmptySupport: Support set is empty'}
        })


class TestProgressEventLogWriter(unittest.TestCase):

    def test_add_logs_event(self):
        writer = ProgressEventLogWriter()
        with LogCapture(EVENTS_LOGGER) as log:
            writer.add(RunStartedEvent('gap', 'abc123', 5, 2))
        self.assertEqual(len(log.records), 1)
        message = log.records[0].getMessage()
        self.assertTrue(message.startswith('ssr/RunStarted\n'))
        self.assertIn('progressEventType: ssr/RunStarted\n', message)
        self.assertEqual(log.records[0].levelname, 'INFO')

    def test_disabled_writer(self):
        writer = ProgressEventLogWriter(enabled=False)
        with LogCapture(EVENTS_LOGGER) as log:
            writer.add(RunStartedEvent('gap', 'abc123', 5, 2))
        log.check()
