# src/utils.py
import logging
import os
import re
import sys
import traceback
from fractions import Fraction

from combinatorics import MultiIndex


class ComputationError(RuntimeError):
    """Internal consistency failure inside a computation"""


# Configure logging
def setup_logging():
    """Setup logging configuration"""
    level = getattr(logging, os.getenv('TAUT_LOG_LEVEL', 'INFO').upper(), logging.INFO)
    logging.basicConfig(
        filename=os.getenv('TAUT_LOG_FILE', 'taut.log'),
        format='[%(asctime)s] [%(levelname)s] [%(funcName)s] - %(message)s',
        level=level,
        datefmt='%Y-%m-%d %H:%M:%S'
    )

    logger = logging.getLogger('taut')

    # Progress goes to stderr; stdout is reserved for results
    if not logger.handlers:
        console_handler = logging.StreamHandler(sys.stderr)
        console_handler.setLevel(level)
        formatter = logging.Formatter('[%(levelname)s] %(message)s')
        console_handler.setFormatter(formatter)
        logger.addHandler(console_handler)

    return logger

# Global logger instance
logger = setup_logging()


def validate_genus(genus, minimum=2, maximum=None):
    """
    Validate a genus value
    Args:
        genus: Genus (int or string)
        minimum (int): Smallest allowed genus
        maximum (int, optional): Largest allowed genus
    Returns:
        int: Validated genus
    Raises:
        ValueError: If genus is not an integer in range
    """
    try:
        g = int(genus)
    except (ValueError, TypeError):
        raise ValueError(f"Invalid genus: {genus}. Must be an integer")

    if g < minimum:
        raise ValueError(f"Genus must be at least {minimum}, got: {g}")
    if maximum is not None and g > maximum:
        raise ValueError(f"Genus {g} is above the supported maximum {maximum}")

    logger.debug(f"Genus validated: {g}")
    return g


def validate_degree(degree, lower, upper, what="degree"):
    """
    Validate a degree against an inclusive range
    Args:
        degree: Degree (int or string)
        lower (int): Smallest allowed value
        upper (int): Largest allowed value
        what (str): Name used in the error message
    Returns:
        int: Validated degree
    Raises:
        ValueError: If degree is outside [lower, upper]
    """
    try:
        d = int(degree)
    except (ValueError, TypeError):
        raise ValueError(f"Invalid {what}: {degree}. Must be an integer")

    if d < lower or d > upper:
        raise ValueError(f"{what} {d} outside allowed range [{lower}, {upper}]")

    logger.debug(f"{what} validated: {d}")
    return d


def validate_genus_range(text):
    """
    Parse a genus range such as "2..6" or a single genus "9"
    Args:
        text (str): Range text
    Returns:
        tuple: (first, last) inclusive; first > last means an empty range
    Raises:
        ValueError: If the text is malformed
    """
    if text is None:
        raise ValueError("Genus range must be given")

    match = re.fullmatch(r'\s*(\d+)\s*(?:\.\.\s*(\d+)\s*)?', str(text))
    if not match:
        raise ValueError(f"Invalid genus range: {text}. Use FIRST..LAST")

    first = int(match.group(1))
    last = int(match.group(2)) if match.group(2) is not None else first
    if first <= last:
        validate_genus(first)
    return first, last


def validate_multi_index(text, weight=None):
    """
    Parse and validate a multi-index given in exponent-vector form
    Args:
        text (str): e.g. "2,0,1" for k1^2*k3
        weight (int, optional): Required value of |m|
    Returns:
        MultiIndex: Parsed index
    Raises:
        ValueError: If the text is malformed or |m| differs from weight
    """
    m = MultiIndex.parse(text)
    if weight is not None and m.weight != weight:
        raise ValueError(f"Multi-index {text} has |m| = {m.weight}, expected {weight}")
    return m


def validate_output_format(fmt):
    """
    Validate output format
    Args:
        fmt (str): human, json or csv
    Returns:
        str: Validated lowercase format
    Raises:
        ValueError: If the format is unknown
    """
    if not fmt or not isinstance(fmt, str):
        raise ValueError("Output format must be a non-empty string")

    fmt = fmt.lower().strip()
    if fmt not in ['human', 'json', 'csv']:
        raise ValueError(f"Invalid output format: {fmt}. Must be human, json or csv")
    return fmt


def format_rational(value):
    """
    Format an exact rational as num/den (integers without denominator)
    Args:
        value: Fraction or int
    Returns:
        str: e.g. "32/3", "-1", "0"
    """
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def parse_rational(text):
    """
    Parse num/den text produced by format_rational
    Raises:
        ValueError: If the text is not a rational number
    """
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError, AttributeError):
        raise ValueError(f"Invalid rational: {text}")


def log_job(action, genus, degree=None, detail=None, status="PENDING", error=None):
    """
    Structured logging for computation jobs
    Args:
        action (str): Action type (e.g., RANK_ATTEMPT)
        genus (int): Genus of the job
        degree (int, optional): Degree of the job
        detail (str, optional): Extra context (backend, recipe, ...)
        status (str): Job status
        error (str, optional): Error message if any
    """
    message = f"Action: {action} | Genus: {genus}"

    if degree is not None:
        message += f" | Degree: {degree}"

    if detail:
        message += f" | Detail: {detail}"

    message += f" | Status: {status}"

    if error:
        message += f" | Error: {error}"
        logger.error(message)
    else:
        logger.info(message)


def handle_computation_error(e, action="COMPUTATION"):
    """
    Handle and log computation errors
    Args:
        e (Exception): Exception object
        action (str): Action that caused the error
    Returns:
        str: Formatted error message
    """
    full_error = f"{action} failed: {e}"

    # Log full stack trace for debugging
    logger.error(full_error)
    logger.error(f"Stack trace: {traceback.format_exc()}")

    return full_error
