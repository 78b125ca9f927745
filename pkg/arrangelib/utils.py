import hashlib
import json
import logging
import os
from functools import wraps

import pystache

import arrangelib.parameters as params
from arrangelib.report_encoder import ReportEncoder


def setup_logging(set_name: str = None):
    logging.basicConfig()
    log = logging.getLogger(params.APP_NAME if set_name is None else set_name)
    log.setLevel(params.DEFAULT_LOG_LEVEL)

    log_level = os.getenv(params.LOG_LEVEL_PARAM)
    if log_level is not None:
        log.info(f"Setting Log Level to {log_level}")
        log.setLevel(log_level.upper())

    return log


def traced(logger: logging.Logger):
    def decorator(f):
        @wraps(f)
        def wrapper(*args, **kwargs):
            logger.debug(f"Function: {f.__name__}")
            logger.debug(f"ARGS: {args}")
            logger.debug(f"KWARGS: {kwargs}")

            return f(*args, **kwargs)

        return wrapper

    return decorator


def decorate(content):
    return json.dumps(content, indent=4, cls=ReportEncoder)


def digest(content) -> str:
    # sorted keys, no whitespace
    canonical = json.dumps(content, sort_keys=True, separators=(",", ":"), cls=ReportEncoder)
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def verdict(passed) -> str:
    if passed is None:
        return params.NOT_APPLICABLE
    return params.PASS if passed else params.FAIL


def comparison(value, reference, tolerance, passed) -> dict:
    return {
        params.VALUE: value,
        params.REFERENCE: reference,
        params.TOLERANCE: tolerance,
        params.VERDICT: verdict(passed)
    }


def combine_verdicts(verdicts) -> str:
    verdicts = list(verdicts)
    if any(v == params.FAIL for v in verdicts):
        return params.FAIL
    if len(verdicts) == 0 or all(v == params.NOT_APPLICABLE for v in verdicts):
        return params.NOT_APPLICABLE
    return params.PASS


def render_summary(report: dict, template_file: str = params.SUMMARY_TEMPLATE) -> str:
    # template paths are relative to the repository root
    if not os.path.isabs(template_file):
        template_file = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), template_file)

    with open(template_file) as t:
        template = t.read()

    checks = []
    for name, detail in report.get(params.RESULTS, {}).items():
        if isinstance(detail, dict) and params.VERDICT in detail:
            checks.append({"name": name, "verdict": detail[params.VERDICT]})

    view = {
        "command": report.get(params.COMMAND),
        "digest": report.get(params.INPUTS_DIGEST),
        "verdict": report.get(params.VERDICT),
        "checks": checks,
        "has_checks": len(checks) > 0,
        "body": decorate(report.get(params.RESULTS))
    }

    return pystache.Renderer(escape=lambda u: u).render(template, view)
