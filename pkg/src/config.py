import os
from dataclasses import dataclass, field
from pathlib import Path

from dotenv import load_dotenv
from sympy import isprime

# Load environment variables from .env file
load_dotenv()


def _env_bool(name, default):
    return os.getenv(name, default).strip().lower() in ('1', 'true', 'yes')


def _env_int(name, default):
    raw = os.getenv(name)
    if raw is None or raw.strip() == '':
        return default
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"{name} must be an integer, got: {raw}")


def parse_primes(text):
    """
    Parse a comma-separated prime list
    Args:
        text (str): e.g. "4611686018427387847,2305843009213693951"
    Returns:
        tuple: primes as ints, in the given order
    Raises:
        ValueError: If an entry is not an integer
    """
    primes = []
    for chunk in text.split(','):
        chunk = chunk.strip()
        if not chunk:
            continue
        try:
            primes.append(int(chunk))
        except ValueError:
            raise ValueError(f"Invalid prime entry: {chunk}")
    return tuple(primes)


# 2^62 - 57, 2^62 - 87 and the Mersenne prime 2^61 - 1
DEFAULT_PRIMES = (4611686018427387847, 4611686018427387817, 2305843009213693951)


@dataclass
class JobConfig:
    """Parameters of a single CLI job"""
    command: str
    genus: int = None
    genus_range: tuple = None
    degree: int = None
    output_format: str = 'human'
    cache_path: str = None
    chern_offset: int = 4
    max_attempts: int = None
    primes: tuple = DEFAULT_PRIMES
    threads: int = 4
    extra: dict = field(default_factory=dict)


class Config:
    """Configuration class for the tautological ring engine"""

    # Persistence and logging
    CACHE_PATH = os.getenv('TAUT_CACHE_PATH', 'taut_cache.txt')
    LOG_FILE = os.getenv('TAUT_LOG_FILE', 'taut.log')
    LOG_LEVEL = os.getenv('TAUT_LOG_LEVEL', 'INFO').upper()

    # Linear algebra
    PRIMES = parse_primes(os.getenv('TAUT_PRIMES', '')) or DEFAULT_PRIMES
    EXACT_RANK_MAX_ROWS = _env_int('TAUT_EXACT_RANK_MAX_ROWS', 400)
    THREADS = _env_int('TAUT_THREADS', 4)

    # Relation search budget
    CHERN_OFFSET = _env_int('TAUT_CHERN_OFFSET', 4)
    MAX_ATTEMPTS = _env_int('TAUT_MAX_ATTEMPTS', None)

    # Ranges covered by the published tables
    MIN_GENUS = 2
    MAX_TABLE_GENUS = 27
    MAX_RELATION_GENUS = 9

    EXTENDED = _env_bool('TAUT_EXTENDED', 'false')

    @classmethod
    def validate_config(cls):
        """Validate configuration settings"""
        cls.validate_primes(cls.PRIMES)
        if cls.THREADS < 1:
            raise ValueError(f"TAUT_THREADS must be at least 1, got: {cls.THREADS}")
        if cls.EXACT_RANK_MAX_ROWS < 0:
            raise ValueError("TAUT_EXACT_RANK_MAX_ROWS must be non-negative")
        if cls.CHERN_OFFSET < 0:
            raise ValueError("TAUT_CHERN_OFFSET must be non-negative")
        if cls.MAX_ATTEMPTS is not None and cls.MAX_ATTEMPTS < 1:
            raise ValueError("TAUT_MAX_ATTEMPTS must be positive when set")

        cache_dir = Path(cls.CACHE_PATH).resolve().parent
        if not os.access(cache_dir, os.W_OK):
            raise ValueError(f"Cache directory is not writable: {cache_dir}")
        return True

    @staticmethod
    def validate_primes(primes):
        """
        Check a prime set for modular rank
        Raises:
            ValueError: If the set is empty or holds a non-prime
        """
        if not primes:
            raise ValueError("At least one prime is required for modular rank")
        for p in primes:
            if p < 3 or not isprime(p):
                raise ValueError(f"Not an odd prime: {p}")
        return tuple(primes)

    @classmethod
    def job(cls, command, **overrides):
        """
        Build a JobConfig, filling unset fields from the environment defaults
        Args:
            command (str): CLI command name
            **overrides: Fields taken from parsed flags (None means "use default")
        Returns:
            JobConfig: Populated job configuration
        """
        defaults = {
            'cache_path': cls.CACHE_PATH,
            'chern_offset': cls.CHERN_OFFSET,
            'max_attempts': cls.MAX_ATTEMPTS,
            'primes': cls.PRIMES,
            'threads': cls.THREADS,
        }
        values = {k: v for k, v in overrides.items() if v is not None}
        for key, value in defaults.items():
            values.setdefault(key, value)
        return JobConfig(command=command, **values)
