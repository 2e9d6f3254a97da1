"""Balanced clique subdivisions in expanders: construction pipeline and verifier."""
from .certificate import SubdivisionCertificate, parse as parse_certificate, serialize as serialize_certificate, verify
from .errors import InputError, ParseError, PipelineFailure
from .graph import Graph, Remap

__all__ = [
    "Graph",
    "Remap",
    "SubdivisionCertificate",
    "verify",
    "parse_certificate",
    "serialize_certificate",
    "InputError",
    "ParseError",
    "PipelineFailure",
]
__version__ = "0.1.0"
