"""Observational equivalence for finitary RML via nested data automata."""
from .equiv import Verdict, bounded_language_equal, decide, decode_word, prepare

__version__ = "0.1.0"

__all__ = ["Verdict", "bounded_language_equal", "decide", "decode_word", "prepare"]
