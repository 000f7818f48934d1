"""
Prometheus metrics for verification-suite runs.

Gauges live in a private CollectorRegistry so repeated runs in one process
(tests) never collide with the default registry. There is no HTTP exporter;
`verify --metrics-file` writes the text exposition format to disk.
"""
import logging
from pathlib import Path

from prometheus_client import CollectorRegistry, Gauge, write_to_textfile

logger = logging.getLogger("squeezelab.metrics")

REGISTRY = CollectorRegistry()

CHECK_ERROR = Gauge("squeezelab_check_error", "Measured error of a verification check", ["check"], registry=REGISTRY)
CHECK_BOUND = Gauge("squeezelab_check_bound", "Tolerance bound of a verification check", ["check"], registry=REGISTRY)
CHECK_PASSED = Gauge("squeezelab_check_passed", "1 if the check passed, else 0", ["check"], registry=REGISTRY)
CHECK_SECONDS = Gauge("squeezelab_check_seconds", "Wall time of a verification check", ["check"], registry=REGISTRY)
SUITE_SECONDS = Gauge("squeezelab_suite_seconds", "Wall time of the whole verification suite", ["profile"], registry=REGISTRY)
SUITE_FAILURES = Gauge("squeezelab_suite_failures", "Failed checks in the last suite run", ["profile"], registry=REGISTRY)


def record_check(name: str, error: float, bound: float, passed: bool, seconds: float) -> None:
    """Update the per-check gauges."""
    try:
        CHECK_ERROR.labels(check=name).set(error)
        CHECK_BOUND.labels(check=name).set(bound)
        CHECK_PASSED.labels(check=name).set(1.0 if passed else 0.0)
        CHECK_SECONDS.labels(check=name).set(seconds)
    except Exception as e:
        logger.warning("Check metrics update failed for %s: %s", name, e)


def record_suite(profile: str, seconds: float, failures: int) -> None:
    try:
        SUITE_SECONDS.labels(profile=profile).set(seconds)
        SUITE_FAILURES.labels(profile=profile).set(failures)
    except Exception as e:
        logger.warning("Suite metrics update failed: %s", e)


def write_metrics(path: Path) -> None:
    write_to_textfile(str(path), REGISTRY)
    logger.info("metrics written to %s", path)
