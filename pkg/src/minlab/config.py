"""Run configuration shared by the library entry points and the CLI."""

from dataclasses import dataclass, field, asdict
import os

ORACLE_BOUND_VARIABLE = 'MINLAB_ORACLE_BOUND'
DEFAULT_ORACLE_BOUND = 256
SPOT_CHECK_BOUND = 4096

class ConfigError(ValueError):
    """Raised on an invalid configuration value."""

def oracle_bound(environ=None):
    """The largest group order the oracle will enumerate.

    >>> oracle_bound({})
    256
    >>> oracle_bound({'MINLAB_ORACLE_BOUND': '4096'})
    4096
    """
    environ = os.environ if environ is None else environ
    text = environ.get(ORACLE_BOUND_VARIABLE)
    if text is None:
        return DEFAULT_ORACLE_BOUND
    try:
        bound = int(text)
    except ValueError:
        raise ConfigError('%s must be an integer, got %r' % (ORACLE_BOUND_VARIABLE, text))
    if bound <= 0:
        raise ConfigError('%s must be positive' % ORACLE_BOUND_VARIABLE)
    return bound

@dataclass(frozen=True)
class RunConfig:
    """Verification bounds and run parameters.

    >>> RunConfig(k_max=0)
    Traceback (most recent call last):
        ...
    minlab.config.ConfigError: k_max must be positive
    """
    k_max: int = 20
    m_max: int = 20
    depth: int = 8
    precision: object = None
    seed: int = 0
    workers: int = 1
    format: str = 'text'
    oracle_bound: int = field(default_factory=oracle_bound)

    def __post_init__(self):
        for name in ('k_max', 'm_max', 'depth', 'workers', 'oracle_bound'):
            if getattr(self, name) <= 0:
                raise ConfigError('%s must be positive' % name)
        if self.precision is not None and self.precision <= 0:
            raise ConfigError('precision must be positive')
        if self.format not in ('text', 'json'):
            raise ConfigError('unknown output format %r' % self.format)

    @classmethod
    def from_args(cls, args):
        kw = {}
        for name in ('k_max', 'm_max', 'depth', 'precision', 'seed', 'workers', 'format'):
            value = getattr(args, name, None)
            if value is not None:
                kw[name] = value
        return cls(**kw)

    def as_dict(self):
        return asdict(self)
