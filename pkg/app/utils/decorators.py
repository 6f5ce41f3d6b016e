"""
Decorators for common functionality and cross-cutting concerns.
"""

import functools
import logging
import sys
import time
from typing import Any, Callable, TypeVar, cast

import click

from app.exceptions import ApplicationException, PaperCheckFailure, ValidationError

F = TypeVar("F", bound=Callable[..., Any])

logger = logging.getLogger(__name__)


def handle_errors(fn: F) -> F:
    """
    Turn an escaping ApplicationException into one stderr line and its exit code.

    The line reads ``<ERROR_CODE>: <message>``; a failed example run first
    echoes its report rows to stdout. Anything else propagates.
    """

    @functools.wraps(fn)
    def wrapper(*args: Any, **kwargs: Any) -> Any:
        try:
            return fn(*args, **kwargs)
        except ApplicationException as e:
            logger.debug(f"{fn.__name__} failed with {e.error_code}: {e.details}")
            if isinstance(e, PaperCheckFailure):
                for line in e.lines:
                    click.echo(line)
            click.echo(f"{e.error_code}: {e.message}", err=True)
            sys.exit(e.exit_code)

    return cast(F, wrapper)


def validate_input(**validators: Callable[[Any], bool]) -> Callable[[F], F]:
    """
    Decorator for keyword-argument validation.

    Usage:
        @validate_input(resolution=FieldValidators.validate_non_negative_int)
        def run(self, *, resolution: int):
            ...
    """

    def decorator(fn: F) -> F:
        @functools.wraps(fn)
        def wrapper(*args: Any, **kwargs: Any) -> Any:
            for key, validator in validators.items():
                if key in kwargs and kwargs[key] is not None:
                    if not validator(kwargs[key]):
                        raise ValidationError(f"Invalid value for {key}: {kwargs[key]!r}")
            return fn(*args, **kwargs)

        return cast(F, wrapper)

    return decorator


def timed(fn: F) -> F:
    """Log the wall time of a long-running analysis at DEBUG level."""

    @functools.wraps(fn)
    def wrapper(*args: Any, **kwargs: Any) -> Any:
        started = time.perf_counter()
        try:
            return fn(*args, **kwargs)
        finally:
            elapsed = time.perf_counter() - started
            logger.debug(f"{fn.__qualname__} took {elapsed:.3f}s")

    return cast(F, wrapper)
