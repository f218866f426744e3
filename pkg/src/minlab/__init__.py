__version__ = '0.1'

from .lrparser import ParsingError
from .szmielew import parse_descriptor, format_descriptor, direct_sum, is_nonsingular, DescriptorError
from .classify import vc_min, witness_chain, verify_chain, witness_failure, PreconditionError
from .config import RunConfig
